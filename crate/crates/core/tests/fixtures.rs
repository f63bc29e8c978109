mod common;

use std::fs;

use common::*;
use torus_rigidity::counts::{synthesize_constructive_gains, tree_decomposition};
use torus_rigidity::document::{parse, write};
use torus_rigidity::graph::{gain_space, periodic_equivalent, Gain, GainGraph};
use torus_rigidity::report::{analyze, AnalyzeOptions};
use torus_rigidity::rigidity::{flex_basis, generic_rank, is_infinitesimally_rigid, stress_basis, target_rank};
use torus_rigidity::tgain::{apply_potentials, t_potentials};

const FIXTURES: [&str; 8] = [
    "e1",
    "e1-minus-edge",
    "zigzag",
    "zigzag-equal",
    "tgain-example",
    "triangle-collinear",
    "loop",
    "double-bananas",
];

#[test]
fn fixtures_round_trip() {
    for name in FIXTURES {
        let doc = fixture(name);
        let text = write(&doc);
        let again = parse(&text).unwrap();
        assert_eq!(again, doc, "{name}");
        assert_eq!(write(&again), text, "{name}");
        assert!(doc.framework(false).unwrap().is_some(), "{name} has positions");
    }
    let e1 = fixture("e1");
    assert_eq!((e1.vertex_count, e1.edges.len()), (4, 6));
}

#[test]
fn fixture_corpus_is_the_whole_directory() {
    let mut found: Vec<String> = fs::read_dir(fixture_path("e1").parent().unwrap())
        .unwrap()
        .map(|e| e.unwrap().path().file_stem().unwrap().to_string_lossy().into_owned())
        .collect();
    found.sort();
    let mut listed: Vec<String> = FIXTURES.iter().map(|s| s.to_string()).collect();
    listed.sort();
    assert_eq!(found, listed);
}

#[test]
fn analysis_verdict_matches_rigidity_test() {
    for name in FIXTURES {
        let doc = fixture(name);
        let report = analyze(&doc, &AnalyzeOptions::default()).unwrap();
        let f = doc.framework(false).unwrap().unwrap();
        assert_eq!(report.rigid, is_infinitesimally_rigid(&f).unwrap(), "{name}");
        assert_eq!(report.rank, oracle_framework_rank(&f), "{name}");
        assert_eq!(report.rigid, report.rank == report.target, "{name}");
    }
}

#[test]
fn fixture_values() {
    // (name, rank at the stored positions, flexes, stresses)
    let expected = [
        ("e1", 6, 0, 0),
        ("e1-minus-edge", 5, 1, 0),
        ("zigzag", 2, 0, 0),
        ("zigzag-equal", 1, 1, 1),
        ("loop", 1, 1, 1),
    ];
    for (name, rank, flexes, stresses) in expected {
        let f = fixture_framework(name);
        assert_eq!(oracle_framework_rank(&f), rank, "{name}");
        assert_eq!(flex_basis(&f).unwrap().dimension(), flexes, "{name}");
        assert_eq!(stress_basis(&f).unwrap().dimension(), stresses, "{name}");
    }
    assert!(flex_basis(&fixture_framework("triangle-collinear")).unwrap().dimension() >= 1);
}

#[test]
fn tgain_example_potentials() {
    let g = fixture("tgain-example").graph().unwrap();
    let pot = t_potentials(&g, &[0, 3], 2).unwrap();
    let expected = [Gain::from_i64s(&[1, -1]), Gain::from_i64s(&[2, 1]), Gain::from_i64s(&[0, 0])];
    assert_eq!(pot.potential, expected);
    let gt = apply_potentials(&g, &pot);
    let gains: Vec<Vec<i64>> = gt.edges().iter().map(|e| e.gain.to_i64s().unwrap()).collect();
    assert_eq!(gains, vec![vec![0, 0], vec![2, 2], vec![2, 2], vec![0, 0]]);
    assert_eq!(gain_space(&gt).rank, 1);
    assert!(periodic_equivalent(&g, &gt).unwrap().is_equivalent());
}

fn base(g: &GainGraph) -> GainGraph {
    g.with_gains(vec![Gain::zero(g.dim()); g.edge_count()]).unwrap()
}

#[test]
fn synthesized_gains_on_fixtures() {
    let e1 = synthesize_constructive_gains(&base(&fixture("e1").graph().unwrap()), 2).unwrap();
    assert!(e1.edges().iter().all(|e| e.gain == Gain::unit(2, 0) || e.gain == Gain::unit(2, 1)));
    assert_eq!(generic_rank(&e1, 3, 0).unwrap(), 6);

    let bananas = synthesize_constructive_gains(&base(&fixture("double-bananas").graph().unwrap()), 3).unwrap();
    assert_eq!(generic_rank(&bananas, 3, 0).unwrap(), target_rank(3, 8));

    let path = GainGraph::from_triples(1, 3, &[(1, 0, &[0]), (2, 1, &[0])]).unwrap();
    let s = synthesize_constructive_gains(&path, 1).unwrap();
    assert!(s.edges().iter().all(|e| e.gain == Gain::from_i64s(&[1]) && e.tail < e.head));
}

#[test]
fn doubled_tree_decomposes() {
    let tree = [(0, 1), (1, 2), (1, 3)];
    for d in 1..4 {
        let triples: Vec<(usize, usize, &[i64])> =
            (0..d).flat_map(|_| tree.iter().map(|&(a, b)| (a, b, &[0i64, 0, 0][..d]))).collect();
        let g = GainGraph::from_triples(d, 4, &triples).unwrap();
        assert_eq!(tree_decomposition(&g, d).unwrap().trees.len(), d);
    }
}
