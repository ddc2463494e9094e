use pole_core::measures::graph_polarization_profile;
use pole_core::synthesis::*;
use pole_core::social_balance;

#[test]
fn default_generator_statistics() {
    let mut mean_degrees = Vec::new();
    let mut ratios = Vec::new();
    for seed in 0..100 {
        let t = generate_topology(&SyntheticSpec { seed, ..Default::default() }).unwrap();
        let g = &t.graph;
        assert_eq!(g.node_count(), 100);
        assert!(g.is_connected());
        let md = 2.0 * g.edge_count() as f64 / 100.0;
        let ratio = cut_size(g, &t.communities) as f64 / g.edge_count() as f64;
        assert!((md - 12.0).abs() <= 0.15 * 12.0, "seed {seed}: mean degree {md}");
        assert!((ratio - 0.15).abs() <= 0.05, "seed {seed}: inter ratio {ratio}");
        mean_degrees.push(md);
        ratios.push(ratio);
    }
    let avg = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    assert!((avg(&mean_degrees) - 12.0).abs() < 0.2);
    assert!((avg(&ratios) - 0.15).abs() < 0.01);
}

#[test]
fn schemes_share_topology_and_are_balanced() {
    for seed in 0..50 {
        let pol = synthesize(&SyntheticSpec { seed, ..Default::default() }).unwrap();
        let un = synthesize(&SyntheticSpec { seed, scheme: Scheme::Unpolarized, ..Default::default() }).unwrap();
        assert_eq!(social_balance(&pol.graph).balance, Some(1.0));
        assert_eq!(social_balance(&un.graph).balance, Some(1.0));
        let a: Vec<(usize, usize, f64)> = pol.graph.edges().map(|(u, v, w)| (u, v, w.abs())).collect();
        let b: Vec<(usize, usize, f64)> = un.graph.edges().map(|(u, v, w)| (u, v, w.abs())).collect();
        assert_eq!(a, b);
        for (u, v, w) in pol.graph.edges() {
            assert_eq!(w < 0.0, pol.communities[u] != pol.communities[v]);
        }
        let assignment = un.unpolarized.unwrap();
        if assignment.exact {
            assert_eq!(un.graph.negative_edge_count(), pol.graph.negative_edge_count());
        }
    }
}

#[test]
fn polarized_scores_above_unpolarized() {
    let mut wins = 0;
    for seed in 0..100 {
        let pol = synthesize(&SyntheticSpec { seed, ..Default::default() }).unwrap();
        let un = synthesize(&SyntheticSpec { seed, scheme: Scheme::Unpolarized, ..Default::default() }).unwrap();
        let p = graph_polarization_profile(&pol.graph, &[10.0]).unwrap()[0].graph_score;
        let q = graph_polarization_profile(&un.graph, &[10.0]).unwrap()[0].graph_score;
        if p > q {
            wins += 1;
        }
    }
    assert!(wins >= 90, "{wins} of 100");
}

#[test]
fn boundary_specs() {
    assert!(generate_topology(&SyntheticSpec { inter_community_ratio: 0.0, ..Default::default() }).is_err());
    assert!(generate_topology(&SyntheticSpec { mean_degree: 100.0, ..Default::default() }).is_err());
    let tiny = generate_topology(&SyntheticSpec { nodes_per_community: 2, mean_degree: 2.0, ..Default::default() }).unwrap();
    assert_eq!(tiny.graph.node_count(), 4);
    assert!(tiny.communities.contains(&0) && tiny.communities.contains(&1));
}
