use std::path::Path;

use pole::edgelist::{parse_edge_list, write_edge_list};
use pole::formats::{load_communities, load_matrix, parse_embedding, save_communities, save_matrix, write_embedding};
use pole_core::{embed, ingest_edge_list, EdgeRecord, IngestOptions, SignedGraph};
use proptest::prelude::*;

fn reingest(g: &SignedGraph) -> SignedGraph {
    let mut buf = Vec::new();
    write_edge_list(g, &mut buf, Some("# provenance")).unwrap();

    let text = String::from_utf8(buf).unwrap();
    ingest_edge_list(&parse_edge_list(&text, Path::new("mem")).unwrap(), IngestOptions::default()).unwrap().graph
}

fn label_style(i: usize, style: u8) -> String {
    match style % 3 {
        0 => format!("{i}"),
        1 => format!("node {i}"),
        _ => format!("n,{}", i * 7),
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn edge_list_round_trip_is_exact(
        raw in prop::collection::vec((0usize..15, 0usize..15, -5.0f64..5.0), 1..60),
        style in any::<u8>(),
    ) {
        let recs: Vec<EdgeRecord> = raw
            .iter()
            .filter(|r| r.2 != 0.0)
            .map(|&(a, b, w)| EdgeRecord::new(label_style(a, style), label_style(b, style), w / 3.0))
            .collect();
        prop_assume!(!recs.is_empty());
        let Ok(ingested) = ingest_edge_list(&recs, IngestOptions::default()) else { return Ok(()) };
        let g = ingested.graph;
        if style % 3 == 2 {
            prop_assert!(write_edge_list(&g, &mut Vec::new(), None).is_err());
            return Ok(());
        }
        let once = reingest(&g);
        prop_assert_eq!(&once, &g);
        prop_assert_eq!(reingest(&once), g);
    }
}

#[test]
fn embedding_file_round_trip() {
    let recs = vec![
        EdgeRecord::new("Ann Lee", "Bo", 1.0),
        EdgeRecord::new("Bo", "Cy Z", -1.0),
        EdgeRecord::new("Cy Z", "Ann Lee", 1.0),
        EdgeRecord::new("Cy Z", "Dee", 2.0),
    ];
    let g = ingest_edge_list(&recs, IngestOptions::default()).unwrap().graph;
    let e = embed(&g, 1.5, true, 3, 1e-9).unwrap();
    let text = write_embedding(&e, Some("# config"));
    let back = parse_embedding(&text, Path::new("mem")).unwrap();
    assert_eq!(back.labels(), e.labels());
    assert_eq!(back.spectral_signs(), e.spectral_signs());
    for u in 0..4 {
        for v in 0..4 {
            assert!((back.similarity(u, v).unwrap() - e.similarity(u, v).unwrap()).abs() <= 1e-12);
        }
    }
    assert_eq!(write_embedding(&back, Some("# config")), text);
}

#[test]
fn plain_dot_embedding_writes_unit_signs() {
    let g = ingest_edge_list(
        &[EdgeRecord::new("a", "b", 1.0), EdgeRecord::new("b", "c", -1.0), EdgeRecord::new("a", "c", -1.0)],
        IngestOptions::default(),
    )
    .unwrap()
    .graph;
    let e = embed(&g, 1.0, true, 3, 1e-9).unwrap().with_plain_dot(true);
    let back = parse_embedding(&write_embedding(&e, None), Path::new("mem")).unwrap();
    for u in 0..3 {
        for v in 0..3 {
            assert!((back.similarity(u, v).unwrap() - e.similarity(u, v).unwrap()).abs() <= 1e-12);
        }
    }
}

#[test]
fn matrix_and_communities_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let labels: Vec<String> = vec!["x".into(), "y, z".into()];
    let m = pole_core::DenseMatrix::from_row_major(2, 2, &[1.0 / 3.0, -2e-17, 5.0, 0.1]);
    let p = dir.path().join("m.csv");
    save_matrix(&m, &labels, &p, Some("# c")).unwrap();
    let (l, back) = load_matrix(&p).unwrap();
    assert_eq!(l, labels);
    assert_eq!(back, m);
    let c = dir.path().join("c.csv");
    save_communities(&labels, &[1, 0], &c, Some("# c")).unwrap();
    assert_eq!(load_communities(&c).unwrap(), vec![("x".to_string(), 1), ("y, z".to_string(), 0)]);
}

#[test]
fn malformed_embedding_rejected() {
    assert!(parse_embedding("2 1 1.0 1\n1\na 0.5\n", Path::new("mem")).is_err());
    assert!(parse_embedding("2 1 1.0 maybe\n1\na 0.5\nb 0.1\n", Path::new("mem")).is_err());
    assert!(parse_embedding("1 2 1.0 1\n1 -1\na 0.5\n", Path::new("mem")).is_err());
}
