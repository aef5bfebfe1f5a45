//! Cross-checks between the pipelines and their brute-force oracles.

use num_bigint::BigInt;
use num_rational::BigRational;

use twisted_hurwitz::factorization::{count_twisted, enumerate_twisted_tuples};
use twisted_hurwitz::feynman::{export_series, feynman_integral, SeriesExport};
use twisted_hurwitz::fock::{elliptic_disconnected, elliptic_from_doubles};
use twisted_hurwitz::graph::{all_orderings, enumerate_graphs, FeynmanGraph};
use twisted_hurwitz::perm::hyperoctahedral;
use twisted_hurwitz::tropical::labeled_covers;

fn multidegrees(edges: usize, max_total: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..edges {
        out = out
            .into_iter()
            .flat_map(|a: Vec<u32>| {
                let used: u32 = a.iter().sum();
                (0..=max_total - used).map(move |x| {
                    let mut b = a.clone();
                    b.push(x);
                    b
                })
            })
            .collect();
    }
    out.retain(|a| a.iter().sum::<u32>() > 0);
    out
}

fn small_graphs() -> Vec<FeynmanGraph> {
    let mut graphs = Vec::new();
    for (v3, v2) in [(2, 0), (2, 1), (0, 2), (0, 3), (0, 4)] {
        for class in enumerate_graphs(v3, v2, false).unwrap() {
            if class.representative.edge_count() <= 4 {
                graphs.push(class.representative);
            }
        }
    }
    graphs
}

#[test]
fn integrals_count_labeled_covers() {
    let graphs = small_graphs();
    assert!(graphs.len() >= 4);
    let mut checked = 0;
    for graph in &graphs {
        for order in all_orderings(graph.vertex_count) {
            let covers: Vec<_> = (1..=4).flat_map(|d| labeled_covers(graph, &order, d)).collect();
            for a in multidegrees(graph.edge_count(), 4) {
                let direct: BigInt = covers
                    .iter()
                    .filter(|c| c.multidegree() == a)
                    .map(|c| c.weight_product())
                    .sum();
                let value = feynman_integral(graph, &order, &a).unwrap();
                assert_eq!(
                    value.to_rational(),
                    Some(BigRational::from_integer(direct)),
                    "{graph:?} {order:?} {a:?}"
                );
                checked += 1;
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn tuples_closed_under_hyperoctahedral_conjugation() {
    for (d, g) in [(2, 2), (2, 3), (3, 2)] {
        let tuples = enumerate_twisted_tuples(d, g, true).unwrap();
        assert!(!tuples.is_empty());
        for b in hyperoctahedral(d).unwrap() {
            for t in &tuples {
                let mut moved = t.clone();
                moved.sigma = t.sigma.conjugate_by(&b);
                moved.etas = t.etas.iter().map(|e| e.conjugate_by(&b)).collect();
                moved.alpha = t.alpha.conjugate_by(&b);
                assert!(tuples.contains(&moved), "d={d} g={g}: {t:?} by {b:?}");
            }
        }
    }
}

#[test]
fn composition_of_doubles_matches_elliptic_count() {
    for d in 1..=4 {
        for g in 1..=5 {
            assert_eq!(
                elliptic_from_doubles(d, g).unwrap(),
                elliptic_disconnected(d, g).unwrap(),
                "d={d} g={g}"
            );
        }
    }
}

#[test]
fn series_export_round_trips() {
    let series = export_series(3, 3).unwrap();
    let text = serde_json::to_string(&series).unwrap();
    let back: SeriesExport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, series);
    for (d, value) in &series.coefficients {
        let expected = count_twisted(*d, 3, true).unwrap().value;
        assert_eq!(value, &expected.to_string());
    }
    assert!(text.contains("scaled-over-aut"));
}
