use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticConfig {
    /// Initial step; halved whenever a step would raise the loss.
    pub learning_rate: f64,
    pub max_iterations: usize,
    /// Stop once a step improves the loss by less than this.
    pub tolerance: f64,
    /// L2 penalty on the weights (not the bias).
    pub l2: f64,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        LogisticConfig { learning_rate: 1.0, max_iterations: 10_000, tolerance: 1e-8, l2: 1e-4 }
    }
}

/// Binary logistic regression over standardized features.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticModel {
    /// Weights in standardized units.
    pub weights: Vec<f64>,
    pub bias: f64,
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
    pub iterations: usize,
    pub final_loss: f64,
    /// Penalized loss after initialization and after every accepted step.
    pub loss_history: Vec<f64>,
}

impl LogisticModel {
    pub fn predict_logit(&self, x: &[f64]) -> f64 {
        let mut z = self.bias;
        for (j, &xj) in x.iter().enumerate() {
            z += self.weights[j] * (xj - self.means[j]) / self.stds[j];
        }
        z
    }

    pub fn predict_proba(&self, x: &[f64]) -> f64 {
        sigmoid(self.predict_logit(x))
    }

    /// `(weights, bias)` acting directly on unstandardized features.
    pub fn raw_parameters(&self) -> (Vec<f64>, f64) {
        let w: Vec<f64> = self.weights.iter().zip(&self.stds).map(|(w, s)| w / s).collect();
        let b = self.bias - w.iter().zip(&self.means).map(|(w, m)| w * m).sum::<f64>();
        (w, b)
    }
}

#[inline]
fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + libm::exp(-z))
    } else {
        let e = libm::exp(z);
        e / (1.0 + e)
    }
}

/// `log(1 + e^z)` without overflow.
#[inline]
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + libm::log1p(libm::exp(-z))
    } else {
        libm::log1p(libm::exp(z))
    }
}

struct Problem<'a> {
    x: &'a [Vec<f64>],
    y: &'a [bool],
    means: Vec<f64>,
    stds: Vec<f64>,
    l2: f64,
}

impl Problem<'_> {
    fn logit(&self, i: usize, w: &[f64], b: f64) -> f64 {
        let mut z = b;
        for (j, &xj) in self.x[i].iter().enumerate() {
            z += w[j] * (xj - self.means[j]) / self.stds[j];
        }
        z
    }

    fn loss(&self, w: &[f64], b: f64) -> f64 {
        let n = self.x.len() as f64;
        let mut acc = 0.0;
        for i in 0..self.x.len() {
            let z = self.logit(i, w, b);
            acc += if self.y[i] { softplus(-z) } else { softplus(z) };
        }
        acc / n + 0.5 * self.l2 * w.iter().map(|v| v * v).sum::<f64>()
    }

    fn gradient(&self, w: &[f64], b: f64) -> (Vec<f64>, f64) {
        let n = self.x.len() as f64;
        let mut gw = vec![0.0; w.len()];
        let mut gb = 0.0;
        for i in 0..self.x.len() {
            let r = sigmoid(self.logit(i, w, b)) - if self.y[i] { 1.0 } else { 0.0 };
            gb += r;
            for (j, &xj) in self.x[i].iter().enumerate() {
                gw[j] += r * (xj - self.means[j]) / self.stds[j];
            }
        }
        for (g, &wj) in gw.iter_mut().zip(w) {
            *g = *g / n + self.l2 * wj;
        }
        (gw, gb / n)
    }
}

/// Full-batch gradient descent on the mean log-loss plus `l2/2 · ‖w‖²`.
/// A step that would increase the loss is retried at half the rate, so
/// the recorded loss never rises.
pub fn fit_logistic(x: &[Vec<f64>], y: &[bool], config: &LogisticConfig) -> Result<LogisticModel> {
    if x.is_empty() || x.len() != y.len() {
        return Err(Error::param("features", "need one label per non-empty feature row"));
    }
    let d = x[0].len();
    if x.iter().any(|r| r.len() != d) {
        return Err(Error::param("features", "rows differ in length"));
    }
    if x.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("features"));
    }
    if y.iter().all(|&l| l) || y.iter().all(|&l| !l) {
        return Err(Error::SingleClass);
    }
    if !(config.learning_rate > 0.0) || !(config.tolerance >= 0.0) || !(config.l2 >= 0.0) {
        return Err(Error::param("config", "learning rate must be positive, tolerance and l2 non-negative"));
    }
    let n = x.len() as f64;
    let mut means = vec![0.0; d];
    for r in x {
        for j in 0..d {
            means[j] += r[j];
        }
    }
    for m in &mut means {
        *m /= n;
    }
    let mut stds = vec![0.0; d];
    for r in x {
        for j in 0..d {
            stds[j] += (r[j] - means[j]) * (r[j] - means[j]);
        }
    }
    for s in &mut stds {
        *s = libm::sqrt(*s / n);
        if !(*s > 0.0) {
            *s = 1.0;
        }
    }
    let problem = Problem { x, y, means, stds, l2: config.l2 };

    let mut w = vec![0.0; d];
    let mut b = 0.0;
    let mut loss = problem.loss(&w, b);
    let mut history = vec![loss];
    let mut rate = config.learning_rate;
    let mut iterations = 0;
    while iterations < config.max_iterations {
        iterations += 1;
        let (gw, gb) = problem.gradient(&w, b);
        let mut accepted = None;
        while rate > 1e-12 {
            let cw: Vec<f64> = w.iter().zip(&gw).map(|(wj, g)| wj - rate * g).collect();
            let cb = b - rate * gb;
            let cl = problem.loss(&cw, cb);
            if cl <= loss {
                accepted = Some((cw, cb, cl));
                break;
            }
            rate *= 0.5;
        }
        let Some((cw, cb, cl)) = accepted else { break };
        let improvement = loss - cl;
        w = cw;
        b = cb;
        loss = cl;
        history.push(loss);
        if improvement < config.tolerance {
            break;
        }
    }
    if !loss.is_finite() || w.iter().any(|v| !v.is_finite()) || !b.is_finite() {
        return Err(Error::NonFinite("logistic parameters"));
    }
    Ok(LogisticModel {
        weights: w,
        bias: b,
        means: problem.means,
        stds: problem.stds,
        iterations,
        final_loss: loss,
        loss_history: history,
    })
}
