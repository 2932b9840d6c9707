use nalgebra::{DMatrix, DVector, SymmetricEigen};
use proptest::prelude::*;

use sumprod_core::graph::eigen::JacobiOptions;
use sumprod_core::graph::{build_graph, AdjacencyMode, SpGraph, Vertex, VertexSet, DEFAULT_MAX_MATERIALIZED};
use sumprod_core::ring::RingSpec;

fn graph(text: &str, mode: AdjacencyMode) -> SpGraph {
    let ring: RingSpec = text.parse().unwrap();
    build_graph(&ring, mode, DEFAULT_MAX_MATERIALIZED).unwrap()
}

/// Adjacency of the sum-product graph over Z/N straight from the definition,
/// vertices ordered as `a * N + b`.
fn modular_adjacency(modulus: u64) -> DMatrix<f64> {
    let n = (modulus * modulus) as usize;
    DMatrix::from_fn(n, n, |i, j| {
        let (a, b) = (i as u64 / modulus, i as u64 % modulus);
        let (c, d) = (j as u64 / modulus, j as u64 % modulus);
        if (a + c) % modulus == b * d % modulus {
            1.0
        } else {
            0.0
        }
    })
}

fn dense(g: &SpGraph) -> DMatrix<f64> {
    let n = g.n() as usize;
    let m = g.matrix().unwrap();
    DMatrix::from_fn(n, n, |i, j| m[i * n + j] as f64)
}

/// `max |theta|` over eigenvalues other than the degree, by power iteration
/// with `A^2` on the complement of the constant vector.
fn power_iteration_lambda(a: &DMatrix<f64>, iterations: usize) -> f64 {
    let n = a.nrows();
    let ones = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    let mut v = DVector::from_fn(n, |i, _| ((i * 7919 + 13) % 101) as f64 - 50.0);
    let mut estimate = 0.0;
    for _ in 0..iterations {
        v -= &ones * ones.dot(&v);
        let w = a * (a * &v);
        estimate = (w.dot(&v) / v.dot(&v)).sqrt();
        v = &w / w.norm();
    }
    estimate
}

#[test]
fn matrix_matches_definition() {
    for (text, modulus) in [("zpr:3,2", 9u64), ("zpr:5,1", 5), ("zpr:7,1", 7)] {
        let g = graph(text, AdjacencyMode::Materialized);
        assert_eq!(dense(&g), modular_adjacency(modulus), "{text}");
    }
}

#[test]
fn common_neighbours_full_sweep() {
    for text in ["zpr:3,2", "polyq:3,2,0,1"] {
        let g = graph(text, AdjacencyMode::Materialized);
        let vertices: Vec<Vertex> = g.vertices().collect();
        assert_eq!(vertices.len(), 81);
        let a = dense(&g);
        let a2 = &a * &a;
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate() {
                let closed = g.common_neighbors_closed_form(u, v);
                assert_eq!(closed, g.common_neighbors_bruteforce(u, v), "{text} {u:?} {v:?}");
                assert_eq!(closed as f64, a2[(i, j)]);
            }
        }
    }
}

#[test]
fn a2_identity_on_625_vertices() {
    for text in ["zpr:5,2", "polyq:5,2,0,1"] {
        let report = graph(text, AdjacencyMode::Materialized).verify_a2_identity().unwrap();
        assert!(report.holds && report.valency_bounds_hold, "{text}: {report:?}");
    }
}

#[test]
fn jacobi_agrees_with_library_solver() {
    for text in ["zpr:3,2", "zpr:7,1", "polyq:3,2,0,1"] {
        let g = graph(text, AdjacencyMode::Materialized);
        let ours = g.eigen_spectrum(JacobiOptions::default()).unwrap();
        let mut theirs: Vec<f64> = SymmetricEigen::new(dense(&g)).eigenvalues.iter().copied().collect();
        theirs.sort_by(|x, y| y.total_cmp(x));
        for (x, y) in ours.values.iter().zip(&theirs) {
            assert!((x - y).abs() < 1e-8, "{text}: {x} vs {y}");
        }
    }
}

#[test]
fn z25_spectrum_against_independent_oracles() {
    let g = graph("zpr:5,2", AdjacencyMode::Materialized);
    let cert = g.certify(JacobiOptions::default(), DEFAULT_MAX_MATERIALIZED).unwrap();
    let a = modular_adjacency(25);
    let mut theirs: Vec<f64> = SymmetricEigen::new(a.clone()).eigenvalues.iter().copied().collect();
    theirs.sort_by(|x, y| y.total_cmp(x));
    let library_lambda = theirs[1].max(-theirs[624]);
    assert!((cert.lambda - library_lambda).abs() < 1e-7);
    let power = power_iteration_lambda(&a, 200);
    assert!((cert.lambda - power).abs() < 1e-6, "{} vs {power}", cert.lambda);
    assert!((cert.lambda - 125f64.sqrt()).abs() < 1e-7);
    assert!(cert.bound_holds && cert.bound_nontrivial);
    assert_eq!(cert.top_multiplicity, 1);
}

#[test]
fn loops_and_regularity() {
    for text in ["zpr:3,1", "zpr:3,2", "zpr:5,1", "polyq:3,2,0,1"] {
        let g = graph(text, AdjacencyMode::Materialized);
        assert_eq!(g.degree_check(), 0);
        // 2a = b^2 has exactly one solution a per b
        assert_eq!(g.loop_count(), g.degree());
        assert!(g.is_connected());
    }
}

fn vertex_sets() -> impl Strategy<Value = (VertexSet, VertexSet)> {
    let pair = (0u64..25, 0u64..25).prop_map(|(a, b)| Vertex { a, b });
    (
        prop::collection::vec(pair.clone(), 0..60),
        prop::collection::vec(pair, 0..60),
    )
        .prop_map(|(b, c)| (b.into_iter().collect(), c.into_iter().collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn edge_count_is_symmetric((b, c) in vertex_sets()) {
        let g = graph("zpr:5,2", AdjacencyMode::Implicit);
        let forward = g.edge_count(&b, &c);
        prop_assert_eq!(forward, g.edge_count(&c, &b));
        prop_assert_eq!(forward, g.edge_count_pairwise(&b, &c));
    }
}
