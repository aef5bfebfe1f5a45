//! Connected multigraphs whose vertices are 2- or 3-valent, up to isomorphism.
//!
//! Isomorphism rejection is brute force over vertex bijections, which is fine
//! for the handful of vertices that occur here.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::next_lexicographic;

/// Multigraph on vertices `0..vertex_count`. Edge `k` carries the label
/// `q_{k+1}` and vertex `i` the label `x_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FeynmanGraph {
    pub vertex_count: usize,
    /// Endpoints with `u <= v`; `u == v` is a loop.
    pub edges: Vec<(usize, usize)>,
}

impl FeynmanGraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Self {
        let edges = edges
            .into_iter()
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        Self {
            vertex_count,
            edges,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn valences(&self) -> Vec<usize> {
        let mut val = vec![0; self.vertex_count];
        for &(u, v) in &self.edges {
            val[u] += 1;
            val[v] += 1;
        }
        val
    }

    pub fn loop_count(&self) -> usize {
        self.edges.iter().filter(|(u, v)| u == v).count()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return false;
        }
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &(u, v) in &self.edges {
                for (a, b) in [(u, v), (v, u)] {
                    if a == x && !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Number of 2-valent vertices.
    pub fn two_valent_count(&self) -> usize {
        self.valences().into_iter().filter(|&v| v == 2).count()
    }

    fn multiplicities(&self) -> Vec<Vec<usize>> {
        let mut m = vec![vec![0; self.vertex_count]; self.vertex_count];
        for &(u, v) in &self.edges {
            m[u][v] += 1;
            if u != v {
                m[v][u] += 1;
            }
        }
        m
    }

    /// Graph automorphisms, counting permutations of parallel edges and loop
    /// reversals together with vertex maps.
    pub fn automorphism_count(&self) -> u64 {
        let m = self.multiplicities();
        let s = self.vertex_count;
        let vertex_maps = all_orderings(s)
            .into_iter()
            .filter(|phi| (0..s).all(|u| (0..s).all(|v| m[phi[u]][phi[v]] == m[u][v])))
            .count() as u64;
        let mut edge_factor = 1u64;
        for u in 0..s {
            edge_factor *= factorial(m[u][u]) * (1 << m[u][u]);
            for v in (u + 1)..s {
                edge_factor *= factorial(m[u][v]);
            }
        }
        vertex_maps * edge_factor
    }

    /// DOT rendering with vertex labels `x1…` and edge labels `q1…`;
    /// `annotations[k]` is appended to the label of edge `k` when given.
    pub fn to_dot(&self, name: &str, annotations: Option<&[String]>) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "graph {name} {{");
        for i in 0..self.vertex_count {
            let _ = writeln!(out, "  x{} [label=\"x{}\"];", i + 1, i + 1);
        }
        for (k, &(u, v)) in self.edges.iter().enumerate() {
            let label = match annotations.and_then(|a| a.get(k)) {
                Some(extra) => format!("q{} {extra}", k + 1),
                None => format!("q{}", k + 1),
            };
            let _ = writeln!(out, "  x{} -- x{} [label=\"{label}\"];", u + 1, v + 1);
        }
        out.push_str("}\n");
        out
    }
}

/// Isomorphism class of a [`FeynmanGraph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphClass {
    pub representative: FeynmanGraph,
    pub automorphism_count: u64,
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// All orderings of `0..n` in lexicographic order. `ordering[i]` is the vertex
/// placed at position `i`.
pub fn all_orderings(n: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..n).collect();
    let mut out = vec![current.clone()];
    while next_lexicographic(&mut current) {
        out.push(current.clone());
    }
    out
}

/// Every total order of the vertices of `graph`.
pub fn vertex_orderings(graph: &FeynmanGraph) -> Vec<Vec<usize>> {
    all_orderings(graph.vertex_count)
}

/// First Betti number `r - s + 1` of a connected graph.
pub fn genus(graph: &FeynmanGraph) -> Result<usize> {
    if !graph.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(graph.edge_count() + 1 - graph.vertex_count)
}

/// Valence profile `(3-valent, 2-valent)` of the quotient of a twisted cover
/// of genus `g` with `c` four-valent vertices.
pub fn quotient_profile(g: usize, c: usize) -> Option<(usize, usize)> {
    (g >= 1 && c < g).then(|| (g - 1 - c, c))
}

/// One representative per isomorphism class of connected multigraphs with the
/// given numbers of 3- and 2-valent vertices.
pub fn enumerate_graphs(
    three_valent: usize,
    two_valent: usize,
    allow_loops: bool,
) -> Result<Vec<GraphClass>> {
    let s = three_valent + two_valent;
    if s == 0 {
        return Err(Error::EmptyProfile);
    }
    if (3 * three_valent + 2 * two_valent) % 2 == 1 {
        return Err(Error::OddDegreeSum {
            three_valent,
            two_valent,
        });
    }
    let degrees: Vec<usize> = (0..s).map(|i| if i < three_valent { 3 } else { 2 }).collect();
    let pairs: Vec<(usize, usize)> = (0..s)
        .flat_map(|u| (u..s).map(move |v| (u, v)))
        .filter(|&(u, v)| allow_loops || u != v)
        .collect();

    let mut found: BTreeMap<Vec<usize>, FeynmanGraph> = BTreeMap::new();
    let mut remaining = degrees.clone();
    let mut counts = vec![0usize; pairs.len()];
    fill_pairs(0, &pairs, &mut remaining, &mut counts, &mut |counts| {
        let mut edges = Vec::new();
        for (&(u, v), &m) in pairs.iter().zip(counts) {
            edges.extend(std::iter::repeat_n((u, v), m));
        }
        let graph = FeynmanGraph::new(s, edges);
        if graph.is_connected() {
            let (key, canonical) = canonical_form(&graph, three_valent);
            found.entry(key).or_insert(canonical);
        }
    });

    Ok(found
        .into_values()
        .map(|representative| GraphClass {
            automorphism_count: representative.automorphism_count(),
            representative,
        })
        .collect())
}

fn fill_pairs<F: FnMut(&[usize])>(
    idx: usize,
    pairs: &[(usize, usize)],
    remaining: &mut [usize],
    counts: &mut [usize],
    emit: &mut F,
) {
    if idx == pairs.len() {
        if remaining.iter().all(|&r| r == 0) {
            emit(counts);
        }
        return;
    }
    let (u, v) = pairs[idx];
    // once every pair touching u has been assigned, u must be saturated
    let max = if u == v {
        remaining[u] / 2
    } else {
        remaining[u].min(remaining[v])
    };
    for m in 0..=max {
        if u == v {
            remaining[u] -= 2 * m;
        } else {
            remaining[u] -= m;
            remaining[v] -= m;
        }
        let last_for_u = pairs.get(idx + 1).is_none_or(|&(nu, _)| nu != u);
        if !last_for_u || remaining[u] == 0 {
            counts[idx] = m;
            fill_pairs(idx + 1, pairs, remaining, counts, emit);
        }
        if u == v {
            remaining[u] += 2 * m;
        } else {
            remaining[u] += m;
            remaining[v] += m;
        }
    }
    counts[idx] = 0;
}

/// Minimal upper-triangular multiplicity signature over all vertex bijections
/// that keep the 3-valent vertices in front, with the relabelled graph.
fn canonical_form(graph: &FeynmanGraph, three_valent: usize) -> (Vec<usize>, FeynmanGraph) {
    let s = graph.vertex_count;
    let m = graph.multiplicities();
    let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
    for perm in all_orderings(s) {
        // perm[new] = old; valence classes must stay in place
        if (0..s).any(|i| (i < three_valent) != (perm[i] < three_valent)) {
            continue;
        }
        let sig: Vec<usize> = (0..s)
            .flat_map(|u| (u..s).map(move |v| (u, v)))
            .map(|(u, v)| m[perm[u]][perm[v]])
            .collect();
        if best.as_ref().is_none_or(|(b, _)| sig < *b) {
            best = Some((sig, perm));
        }
    }
    let (sig, _) = best.expect("at least the identity ordering");
    let mut edges = Vec::new();
    let mut k = 0;
    for u in 0..s {
        for v in u..s {
            edges.extend(std::iter::repeat_n((u, v), sig[k]));
            k += 1;
        }
    }
    (sig, FeynmanGraph::new(s, edges))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta() -> FeynmanGraph {
        FeynmanGraph::new(2, vec![(0, 1), (0, 1), (0, 1)])
    }

    #[test]
    fn two_trivalent_vertices() {
        let with_loops = enumerate_graphs(2, 0, true).unwrap();
        assert_eq!(with_loops.len(), 2);
        let reps: Vec<_> = with_loops.iter().map(|c| c.representative.clone()).collect();
        assert!(reps.contains(&theta()));
        assert!(reps.contains(&FeynmanGraph::new(2, vec![(0, 0), (0, 1), (1, 1)])));

        let without = enumerate_graphs(2, 0, false).unwrap();
        assert_eq!(without.len(), 1);
        assert_eq!(without[0].representative, theta());
        assert_eq!(without[0].automorphism_count, 12);
    }

    #[test]
    fn single_loop() {
        let classes = enumerate_graphs(0, 1, true).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].representative.edges, vec![(0, 0)]);
        assert_eq!(classes[0].automorphism_count, 2);
        assert!(enumerate_graphs(0, 1, false).unwrap().is_empty());
    }

    #[test]
    fn odd_profile_is_an_error() {
        assert!(matches!(
            enumerate_graphs(1, 0, true),
            Err(Error::OddDegreeSum { .. })
        ));
        assert!(matches!(
            enumerate_graphs(3, 2, false),
            Err(Error::OddDegreeSum { .. })
        ));
        assert_eq!(enumerate_graphs(0, 0, true), Err(Error::EmptyProfile));
    }

    #[test]
    fn genus_values() {
        assert_eq!(genus(&theta()).unwrap(), 2);
        assert_eq!(genus(&FeynmanGraph::new(1, vec![(0, 0)])).unwrap(), 1);
        assert_eq!(genus(&FeynmanGraph::new(2, vec![(0, 1)])).unwrap(), 0);
        assert_eq!(
            genus(&FeynmanGraph::new(2, vec![(0, 0), (1, 1)])),
            Err(Error::Disconnected)
        );
    }

    #[test]
    fn ordering_counts() {
        for (s, n) in [(1, 1), (2, 2), (4, 24)] {
            let g = FeynmanGraph::new(s, vec![]);
            assert_eq!(vertex_orderings(&g).len(), n);
        }
    }

    #[test]
    fn dot_output() {
        let dot = theta().to_dot("theta", None);
        assert!(dot.starts_with("graph theta {"));
        assert_eq!(dot.matches("--").count(), 3);
        assert!(dot.contains("x1 -- x2 [label=\"q3\"]"));
    }

    #[test]
    fn quotient_profiles_have_expected_genus() {
        for g in 2..=7 {
            for c in 0..g {
                let (v3, v2) = quotient_profile(g, c).unwrap();
                if (3 * v3 + 2 * v2) % 2 == 1 {
                    continue;
                }
                for class in enumerate_graphs(v3, v2, g == 2).unwrap() {
                    assert_eq!(2 * genus(&class.representative).unwrap(), g - c + 1);
                }
            }
        }
    }
}
