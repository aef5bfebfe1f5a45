//! Tropical covers of the tropical elliptic curve.
//!
//! The circle carries a base point `p_0` followed by the branch points
//! `p_1 < … < p_{g-1}`. A quotient cover places exactly one vertex over every
//! branch point, so vertices are identified by their position and two covers
//! are isomorphic exactly when their multisets of oriented edge data
//! `(start position, end position, weight, crossings of p_0)` agree.
//!
//! Twisted covers are recovered from quotient covers by explicit lifting:
//! every 3-valent vertex gets two preimages swapped by the involution, every
//! 2-valent vertex a single fixed 4-valent preimage, and every edge a pair of
//! edges swapped by the involution.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{all_orderings, enumerate_graphs, genus, quotient_profile, FeynmanGraph};

/// Largest quotient edge count for which lifts are enumerated explicitly.
pub const LIFT_EDGE_CAP: usize = 12;

/// A quotient cover `Γ̄ → E`.
///
/// Edge `k` of `graph` leaves `sources[k]` in the positive direction of the
/// circle, has weight `weights[k]` and passes `crossings[k]` times over `p_0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientCover {
    pub graph: FeynmanGraph,
    /// `order[i]` is the vertex over the branch point `p_{i+1}`.
    pub order: Vec<usize>,
    pub sources: Vec<usize>,
    pub weights: Vec<u32>,
    pub crossings: Vec<u32>,
}

/// Oriented edge data in branch-point positions; the isomorphism invariant.
pub type EdgeKey = (usize, usize, u32, u32);

impl QuotientCover {
    /// `positions[v]` is the 0-based index of the branch point below `v`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (i, &v) in self.order.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }

    pub fn target(&self, k: usize) -> usize {
        let (u, v) = self.graph.edges[k];
        if self.sources[k] == u {
            v
        } else {
            u
        }
    }

    pub fn edge_keys(&self) -> Vec<EdgeKey> {
        let pos = self.positions();
        (0..self.graph.edge_count())
            .map(|k| {
                (
                    pos[self.sources[k]],
                    pos[self.target(k)],
                    self.weights[k],
                    self.crossings[k],
                )
            })
            .collect()
    }

    /// Sorted edge keys; equal exactly for isomorphic covers.
    pub fn canonical_key(&self) -> Vec<EdgeKey> {
        let mut keys = self.edge_keys();
        keys.sort_unstable();
        keys
    }

    /// Multidegree: weight times number of passes over `p_0`, per edge.
    pub fn multidegree(&self) -> Vec<u32> {
        self.weights
            .iter()
            .zip(&self.crossings)
            .map(|(w, k)| w * k)
            .collect()
    }

    pub fn degree(&self) -> u32 {
        self.multidegree().iter().sum()
    }

    /// Total weight over the point halfway between `p_m` and `p_{m+1}`
    /// (`m = 0` is just after the base point, `m = g-1` just before it).
    pub fn degree_at_gap(&self, m: usize) -> u32 {
        let s = self.order.len();
        let circle = s + 1;
        let pos = self.positions();
        let point = 2 * m + 1; // doubled coordinates
        (0..self.graph.edge_count())
            .map(|k| {
                let a = pos[self.sources[k]] + 1;
                let b = pos[self.target(k)] + 1;
                let turns = self.crossings[k] as usize;
                // arc length, in circle units, from p_a to p_b wrapping `turns` times
                let len = if a < b {
                    b - a + turns * circle
                } else {
                    b + turns * circle - a
                };
                let passes = (0..)
                    .map(|n| point + 2 * n * circle)
                    .take_while(|&p| p < 2 * (a + len))
                    .filter(|&p| p > 2 * a)
                    .count() as u32;
                passes * self.weights[k]
            })
            .sum()
    }

    pub fn is_balanced(&self) -> bool {
        let mut net = vec![0i64; self.graph.vertex_count];
        for k in 0..self.graph.edge_count() {
            net[self.sources[k]] += self.weights[k] as i64;
            net[self.target(k)] -= self.weights[k] as i64;
        }
        net.iter().all(|&x| x == 0)
    }

    /// Each edge's path is realizable: a non-crossing edge must run forward.
    pub fn is_geometric(&self) -> bool {
        self.edge_keys()
            .iter()
            .all(|&(a, b, w, k)| w >= 1 && (k >= 1 || a < b))
    }

    /// Automorphisms of the cover: permutations of identical edges.
    pub fn automorphism_count(&self) -> u64 {
        let mut groups: BTreeMap<EdgeKey, u64> = BTreeMap::new();
        for key in self.edge_keys() {
            *groups.entry(key).or_default() += 1;
        }
        groups.values().map(|&m| (1..=m).product::<u64>()).product()
    }

    pub fn two_valent_count(&self) -> usize {
        self.graph.two_valent_count()
    }

    /// Weight of the edges at each 2-valent vertex, in vertex order.
    pub fn two_valent_weights(&self) -> Vec<u32> {
        let valences = self.graph.valences();
        (0..self.graph.vertex_count)
            .filter(|&v| valences[v] == 2)
            .map(|v| {
                let k = self
                    .graph
                    .edges
                    .iter()
                    .position(|&(a, b)| a == v || b == v)
                    .expect("2-valent vertex has an edge");
                self.weights[k]
            })
            .collect()
    }

    /// `Π_V (ω_V - 1) · Π_e ω(e)`.
    pub fn weight_product(&self) -> BigInt {
        let vertex: BigInt = self
            .two_valent_weights()
            .into_iter()
            .map(|w| BigInt::from(w) - 1)
            .product();
        let edges: BigInt = self.weights.iter().map(|&w| BigInt::from(w)).product();
        vertex * edges
    }

    pub fn to_dot(&self, name: &str) -> String {
        let pos = self.positions();
        let mut out = String::new();
        let _ = writeln!(out, "digraph {name} {{");
        for v in 0..self.graph.vertex_count {
            let _ = writeln!(
                out,
                "  x{} [label=\"x{} @ p{}\"];",
                v + 1,
                v + 1,
                pos[v] + 1
            );
        }
        for k in 0..self.graph.edge_count() {
            let _ = writeln!(
                out,
                "  x{} -> x{} [label=\"q{} w={} k={}\"];",
                self.sources[k] + 1,
                self.target(k) + 1,
                k + 1,
                self.weights[k],
                self.crossings[k]
            );
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverMultiplicity {
    pub value: BigRational,
    pub four_valent_count: usize,
    pub quotient_genus: usize,
}

pub(crate) fn pow2(exp: i64) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    if exp >= 0 {
        num_traits::pow(two, exp as usize)
    } else {
        num_traits::pow(two, (-exp) as usize).recip()
    }
}

/// `(2^{g'} - δ_{0c}) / 2^{c+1}`: weighted count of connected lifts of a
/// quotient with trivial automorphisms.
pub fn lift_factor(g_prime: usize, c: usize) -> BigRational {
    let delta = if c == 0 {
        BigRational::one()
    } else {
        BigRational::zero()
    };
    (pow2(g_prime as i64) - delta) / pow2(c as i64 + 1)
}

fn validate_tropical_genus(g: usize) -> Result<()> {
    if g < 2 {
        return Err(Error::InvalidGenus {
            genus: g,
            reason: "tropical covers need at least one branch point (g >= 2)",
        });
    }
    Ok(())
}

/// Multiplicity of a quotient cover in the twisted tropical count:
/// `(2^{g'} - δ_{0c}) · 2^{2g'-3} / |Aut(π̄)| · Π_V (ω_V - 1) · Π_e ω(e)`.
pub fn cover_multiplicity(cover: &QuotientCover, g: usize) -> Result<CoverMultiplicity> {
    validate_tropical_genus(g)?;
    if cover.order.len() + 1 != g {
        return Err(Error::InvalidGenus {
            genus: g,
            reason: "quotient covers of genus g have g-1 vertices",
        });
    }
    let c = cover.two_valent_count();
    let g_prime = genus(&cover.graph)?;
    debug_assert_eq!(2 * g_prime, g - c + 1);
    let delta = if c == 0 {
        BigRational::one()
    } else {
        BigRational::zero()
    };
    let value = (pow2(g_prime as i64) - delta)
        * pow2(2 * g_prime as i64 - 3)
        * BigRational::from_integer(cover.weight_product())
        / BigRational::from_integer(cover.automorphism_count().into());
    Ok(CoverMultiplicity {
        value,
        four_valent_count: c,
        quotient_genus: g_prime,
    })
}

/// Per-edge choices `(source, weight, crossings)` for a cover of degree `d`.
fn edge_options(u: usize, v: usize, pos: &[usize], d: u32) -> Vec<(usize, u32, u32)> {
    let mut out = Vec::new();
    if u == v {
        for w in 1..=d {
            for k in 1..=d / w {
                out.push((u, w, k));
            }
        }
        return out;
    }
    let (lo, hi) = if pos[u] < pos[v] { (u, v) } else { (v, u) };
    for w in 1..=d {
        for k in 0..=d / w {
            out.push((lo, w, k));
        }
        for k in 1..=d / w {
            out.push((hi, w, k));
        }
    }
    out
}

struct AssignmentSearch<'a> {
    graph: &'a FeynmanGraph,
    options: Vec<Vec<(usize, u32, u32)>>,
    /// vertices whose incident edges are all fixed once edge `k` is assigned
    closes: Vec<Vec<usize>>,
    d: u32,
}

impl AssignmentSearch<'_> {
    fn run<F: FnMut(&[(usize, u32, u32)])>(&self, emit: &mut F) {
        let mut chosen = Vec::with_capacity(self.options.len());
        let mut net = vec![0i64; self.graph.vertex_count];
        self.descend(&mut chosen, &mut net, 0, emit);
    }

    fn descend<F: FnMut(&[(usize, u32, u32)])>(
        &self,
        chosen: &mut Vec<(usize, u32, u32)>,
        net: &mut [i64],
        degree: u32,
        emit: &mut F,
    ) {
        let k = chosen.len();
        if k == self.options.len() {
            if degree == self.d {
                emit(chosen);
            }
            return;
        }
        let (u, v) = self.graph.edges[k];
        for &(src, w, turns) in &self.options[k] {
            let next_degree = degree + w * turns;
            if next_degree > self.d {
                continue;
            }
            let dst = if src == u { v } else { u };
            net[src] += w as i64;
            net[dst] -= w as i64;
            if self.closes[k].iter().all(|&x| net[x] == 0) {
                chosen.push((src, w, turns));
                self.descend(chosen, net, next_degree, emit);
                chosen.pop();
            }
            net[src] -= w as i64;
            net[dst] += w as i64;
        }
    }
}

/// Every balanced labeled cover with source `graph` and vertex order `order`.
pub fn labeled_covers(graph: &FeynmanGraph, order: &[usize], d: u32) -> Vec<QuotientCover> {
    let mut pos = vec![0; order.len()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let options = graph
        .edges
        .iter()
        .map(|&(u, v)| edge_options(u, v, &pos, d))
        .collect();
    let mut last_edge = vec![None; graph.vertex_count];
    for (k, &(u, v)) in graph.edges.iter().enumerate() {
        last_edge[u] = Some(k);
        last_edge[v] = Some(k);
    }
    let mut closes = vec![Vec::new(); graph.edge_count()];
    for (v, last) in last_edge.iter().enumerate() {
        if let Some(k) = last {
            closes[*k].push(v);
        }
    }
    let search = AssignmentSearch {
        graph,
        options,
        closes,
        d,
    };
    let mut out = Vec::new();
    search.run(&mut |chosen| {
        out.push(QuotientCover {
            graph: graph.clone(),
            order: order.to_vec(),
            sources: chosen.iter().map(|c| c.0).collect(),
            weights: chosen.iter().map(|c| c.1).collect(),
            crossings: chosen.iter().map(|c| c.2).collect(),
        });
    });
    out
}

/// One representative per isomorphism class of connected quotient covers of
/// degree `d` over `g - 1` branch points, sorted by canonical key.
///
/// Covers with a 2-valent vertex of weight 1 are included; their multiplicity
/// is zero.
pub fn enumerate_quotient_covers(d: usize, g: usize) -> Result<Vec<QuotientCover>> {
    if d == 0 {
        return Err(Error::InvalidDegree(d));
    }
    validate_tropical_genus(g)?;
    let mut jobs = Vec::new();
    for c in 0..g {
        let (v3, v2) = quotient_profile(g, c).expect("c < g");
        if (3 * v3 + 2 * v2) % 2 == 1 {
            continue;
        }
        // loops balance only on a lone 2-valent vertex, i.e. at g = 2
        for class in enumerate_graphs(v3, v2, g == 2)? {
            for order in all_orderings(class.representative.vertex_count) {
                jobs.push((class.representative.clone(), order));
            }
        }
    }
    let found: BTreeMap<Vec<EdgeKey>, QuotientCover> = jobs
        .par_iter()
        .map(|(graph, order)| {
            let mut local = BTreeMap::new();
            for cover in labeled_covers(graph, order, d as u32) {
                local.entry(cover.canonical_key()).or_insert(cover);
            }
            local
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                a.entry(k).or_insert(v);
            }
            a
        });
    Ok(found.into_values().collect())
}

/// `h̃^trop_{d,g}` summed over quotient covers.
pub fn count_tropical(d: usize, g: usize) -> Result<BigRational> {
    let covers = enumerate_quotient_covers(d, g)?;
    covers
        .iter()
        .map(|c| cover_multiplicity(c, g).map(|m| m.value))
        .sum()
}

/// Explicit twisted cover lifting a quotient cover.
///
/// `crossed[k]` records, for an edge between two vertices with two preimages
/// each, whether the lifted pair joins opposite sheets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedCover {
    pub quotient: QuotientCover,
    pub crossed: Vec<bool>,
    pub automorphism_count: u64,
    pub connected: bool,
}

impl TwistedCover {
    /// `2^{g-1} / |Aut(π)| · Π_V (ω_V - 1) · Π_e ω(e)`, products over the quotient.
    pub fn multiplicity(&self) -> BigRational {
        let g = self.quotient.order.len() + 1;
        pow2(g as i64 - 1) * BigRational::from_integer(self.quotient.weight_product())
            / BigRational::from_integer(self.automorphism_count.into())
    }
}

/// Explicit double cover with its involution.
#[derive(Debug, Clone)]
struct LiftGraph {
    /// fiber (quotient vertex) of each lifted vertex
    fibers: Vec<Vec<usize>>,
    vertex_iota: Vec<usize>,
    /// `(start, end)` of each lifted edge; edges `2k`, `2k+1` lie over quotient edge `k`
    edges: Vec<(usize, usize)>,
    edge_iota: Vec<usize>,
    /// lifted edges grouped by identical image data
    edge_groups: Vec<Vec<usize>>,
}

impl LiftGraph {
    fn build(cover: &QuotientCover, crossed: &[bool]) -> Self {
        let valences = cover.graph.valences();
        // lifted vertex ids per quotient vertex: [sheet 0, sheet 1] or [fixed]
        let mut ids: Vec<Vec<usize>> = Vec::new();
        let mut vertex_iota = Vec::new();
        let mut next = 0;
        for &val in &valences {
            if val == 2 {
                ids.push(vec![next]);
                vertex_iota.push(next);
                next += 1;
            } else {
                ids.push(vec![next, next + 1]);
                vertex_iota.push(next + 1);
                vertex_iota.push(next);
                next += 2;
            }
        }
        let lift = |v: usize, sheet: usize| -> usize {
            let fiber = &ids[v];
            fiber[sheet % fiber.len()]
        };
        let mut edges = Vec::new();
        let mut edge_iota = Vec::new();
        for k in 0..cover.graph.edge_count() {
            let (src, dst) = (cover.sources[k], cover.target(k));
            let flip = usize::from(crossed[k]);
            for sheet in 0..2 {
                edges.push((lift(src, sheet), lift(dst, sheet ^ flip)));
                edge_iota.push(2 * k + (1 - sheet));
            }
        }
        let mut by_key: BTreeMap<EdgeKey, Vec<usize>> = BTreeMap::new();
        for (k, key) in cover.edge_keys().into_iter().enumerate() {
            by_key.entry(key).or_default().extend([2 * k, 2 * k + 1]);
        }
        Self {
            fibers: ids,
            vertex_iota,
            edges,
            edge_iota,
            edge_groups: by_key.into_values().collect(),
        }
    }

    fn vertex_count(&self) -> usize {
        self.vertex_iota.len()
    }

    fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &(a, b) in &self.edges {
                for (p, q) in [(a, b), (b, a)] {
                    if p == x && !seen[q] {
                        seen[q] = true;
                        stack.push(q);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Vertex bijections preserving fibers and commuting with the involution.
    fn vertex_maps(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut maps = vec![(0..n).collect::<Vec<_>>()];
        for fiber in &self.fibers {
            if fiber.len() < 2 {
                continue;
            }
            let mut extended = Vec::with_capacity(maps.len() * 2);
            for m in maps {
                let mut swapped = m.clone();
                swapped[fiber[0]] = fiber[1];
                swapped[fiber[1]] = fiber[0];
                extended.push(m);
                extended.push(swapped);
            }
            maps = extended;
        }
        maps.retain(|phi| (0..n).all(|v| phi[self.vertex_iota[v]] == self.vertex_iota[phi[v]]));
        maps
    }

    /// Number of cover isomorphisms `self → other` commuting with the
    /// involutions. Both must lift the same quotient cover.
    fn count_isomorphisms(&self, other: &LiftGraph) -> u64 {
        let mut total = 0;
        for phi in self.vertex_maps() {
            let mut product = 1u64;
            for group in &self.edge_groups {
                let mut ways = 0u64;
                let mut images = group.clone();
                images.sort_unstable();
                loop {
                    // group[i] ↦ images[i]
                    let psi = |e: usize| images[group.iter().position(|&x| x == e).unwrap()];
                    let ok = group.iter().all(|&e| {
                        let (a, b) = self.edges[e];
                        let target = psi(e);
                        other.edges[target] == (phi[a], phi[b])
                            && psi(self.edge_iota[e]) == other.edge_iota[target]
                    });
                    if ok {
                        ways += 1;
                    }
                    if !crate::perm::next_lexicographic(&mut images) {
                        break;
                    }
                }
                product *= ways;
                if product == 0 {
                    break;
                }
            }
            total += product;
        }
        total
    }
}

fn lift_choice_edges(cover: &QuotientCover) -> Vec<usize> {
    let valences = cover.graph.valences();
    (0..cover.graph.edge_count())
        .filter(|&k| {
            let (u, v) = cover.graph.edges[k];
            valences[u] != 2 && valences[v] != 2
        })
        .collect()
}

/// Every twisted cover lifting `cover`, connected or not, one per isomorphism
/// class.
pub fn enumerate_lifts(cover: &QuotientCover) -> Result<Vec<TwistedCover>> {
    let edges = cover.graph.edge_count();
    if edges > LIFT_EDGE_CAP {
        return Err(Error::LiftCapExceeded {
            edges,
            cap: LIFT_EDGE_CAP,
        });
    }
    let free = lift_choice_edges(cover);
    let mut classes: Vec<(LiftGraph, Vec<bool>)> = Vec::new();
    for bits in 0u32..(1 << free.len()) {
        let mut crossed = vec![false; edges];
        for (i, &k) in free.iter().enumerate() {
            crossed[k] = bits >> i & 1 == 1;
        }
        let lift = LiftGraph::build(cover, &crossed);
        if classes
            .iter()
            .all(|(rep, _)| lift.count_isomorphisms(rep) == 0)
        {
            classes.push((lift, crossed));
        }
    }
    Ok(classes
        .into_iter()
        .map(|(lift, crossed)| TwistedCover {
            quotient: cover.clone(),
            crossed,
            automorphism_count: lift.count_isomorphisms(&lift),
            connected: lift.is_connected(),
        })
        .collect())
}

/// `Σ 1/|Aut(π)|` over connected lifts, next to the closed form
/// `(2^{g'} - δ_{0c}) / (2^{c+1} |Aut(π̄)|)`.
pub fn preimage_sums(cover: &QuotientCover) -> Result<(BigRational, BigRational)> {
    let explicit = enumerate_lifts(cover)?
        .iter()
        .filter(|l| l.connected)
        .map(|l| BigRational::new(1.into(), l.automorphism_count.into()))
        .sum();
    let c = cover.two_valent_count();
    let g_prime = cover.graph.edge_count() + 1 - cover.graph.vertex_count;
    let closed = lift_factor(g_prime, c)
        / BigRational::from_integer(cover.automorphism_count().into());
    Ok((explicit, closed))
}

/// Whether the explicit lift count of `cover` agrees with the closed form.
pub fn verify_preimage_formula(cover: &QuotientCover, g: usize) -> Result<bool> {
    if cover.order.len() + 1 != g {
        return Err(Error::InvalidGenus {
            genus: g,
            reason: "quotient covers of genus g have g-1 vertices",
        });
    }
    let (explicit, closed) = preimage_sums(cover)?;
    Ok(explicit == closed)
}

/// Connected twisted covers of degree `d` and genus `g`, one per class.
pub fn enumerate_twisted_covers(d: usize, g: usize) -> Result<Vec<TwistedCover>> {
    let mut out = Vec::new();
    for cover in enumerate_quotient_covers(d, g)? {
        out.extend(enumerate_lifts(&cover)?.into_iter().filter(|l| l.connected));
    }
    Ok(out)
}

/// `h̃^trop_{d,g}` summed directly over explicit twisted covers.
pub fn count_tropical_from_lifts(d: usize, g: usize) -> Result<BigRational> {
    Ok(enumerate_twisted_covers(d, g)?
        .iter()
        .map(TwistedCover::multiplicity)
        .sum())
}

/// Machine-readable summary of a quotient cover, or of a twisted cover
/// through its quotient plus the sheet choices in `crossed`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverRecord {
    pub graph: Vec<(usize, usize)>,
    pub order: Vec<usize>,
    pub sources: Vec<usize>,
    pub weights: Vec<u32>,
    pub crossings: Vec<u32>,
    pub c: usize,
    pub g_prime: usize,
    pub automorphisms: u64,
    pub multiplicity: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crossed: Option<Vec<bool>>,
}

impl CoverRecord {
    pub fn new(cover: &QuotientCover, g: usize) -> Result<Self> {
        let m = cover_multiplicity(cover, g)?;
        Ok(Self {
            graph: cover.graph.edges.clone(),
            order: cover.order.clone(),
            sources: cover.sources.clone(),
            weights: cover.weights.clone(),
            crossings: cover.crossings.clone(),
            c: m.four_valent_count,
            g_prime: m.quotient_genus,
            automorphisms: cover.automorphism_count(),
            multiplicity: m.value.to_string(),
            crossed: None,
        })
    }

    pub fn from_twisted(cover: &TwistedCover) -> Result<Self> {
        let q = &cover.quotient;
        let g_prime = genus(&q.graph)?;
        Ok(Self {
            graph: q.graph.edges.clone(),
            order: q.order.clone(),
            sources: q.sources.clone(),
            weights: q.weights.clone(),
            crossings: q.crossings.clone(),
            c: q.two_valent_count(),
            g_prime,
            automorphisms: cover.automorphism_count,
            multiplicity: cover.multiplicity().to_string(),
            crossed: Some(cover.crossed.clone()),
        })
    }
}

impl TwistedCover {
    /// DOT rendering of the quotient, with lifted edge pairs that join
    /// opposite sheets marked `crossed`.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = self.quotient.to_dot(name);
        out.truncate(out.len() - 2);
        let _ = writeln!(out, "  label=\"multiplicity {}\";", self.multiplicity());
        for (k, _) in self.crossed.iter().enumerate().filter(|(_, &c)| c) {
            let _ = writeln!(out, "  // edge q{} lifts to a crossed pair", k + 1);
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rational(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Two 2-valent vertices joined into a cycle of weight 2.
    fn bivalent_cycle() -> QuotientCover {
        QuotientCover {
            graph: FeynmanGraph::new(2, vec![(0, 1), (0, 1)]),
            order: vec![0, 1],
            sources: vec![0, 1],
            weights: vec![2, 2],
            crossings: vec![0, 1],
        }
    }

    /// Theta graph: two parallel weight-1 edges `p1 → p2`, one weight-2 edge back.
    fn theta_with_symmetry() -> QuotientCover {
        QuotientCover {
            graph: FeynmanGraph::new(2, vec![(0, 1), (0, 1), (0, 1)]),
            order: vec![0, 1],
            sources: vec![0, 0, 1],
            weights: vec![1, 1, 2],
            crossings: vec![0, 0, 1],
        }
    }

    #[test]
    fn degree_two_genus_three_quotients() {
        let covers = enumerate_quotient_covers(2, 3).unwrap();
        let nonzero: Vec<_> = covers
            .iter()
            .map(|c| cover_multiplicity(c, 3).unwrap().value)
            .filter(|m| !m.is_zero())
            .collect();
        let mut sorted = nonzero.clone();
        sorted.sort();
        assert_eq!(sorted, vec![rational(4, 1), rational(6, 1), rational(6, 1)]);
        assert_eq!(count_tropical(2, 3).unwrap(), rational(16, 1));
    }

    #[test]
    fn worked_multiplicities() {
        let m = cover_multiplicity(&bivalent_cycle(), 3).unwrap();
        assert_eq!(m.value, rational(4, 1));
        assert_eq!((m.four_valent_count, m.quotient_genus), (2, 1));
        let m = cover_multiplicity(&theta_with_symmetry(), 3).unwrap();
        assert_eq!(m.value, rational(6, 1));
        assert_eq!(theta_with_symmetry().automorphism_count(), 2);
    }

    #[test]
    fn weight_one_bivalent_vertex_contributes_nothing() {
        let mut cover = bivalent_cycle();
        cover.weights = vec![1, 1];
        cover.crossings = vec![0, 2];
        assert!(cover.is_balanced());
        assert!(cover_multiplicity(&cover, 3).unwrap().value.is_zero());
    }

    #[test]
    fn explicit_lifts_of_the_symmetric_theta() {
        let lifts = enumerate_lifts(&theta_with_symmetry()).unwrap();
        let connected: Vec<_> = lifts.iter().filter(|l| l.connected).collect();
        let mut auts: Vec<_> = connected.iter().map(|l| l.automorphism_count).collect();
        auts.sort();
        assert_eq!(auts, vec![2, 4]);
        assert_eq!(lifts.len(), 3);
        let (explicit, closed) = preimage_sums(&theta_with_symmetry()).unwrap();
        assert_eq!(explicit, rational(3, 4));
        assert_eq!(closed, rational(3, 4));
        let mults: Vec<_> = connected.iter().map(|l| l.multiplicity()).collect();
        assert!(mults.contains(&rational(4, 1)) && mults.contains(&rational(2, 1)));
    }

    #[test]
    fn bivalent_cycle_lift_is_unique() {
        let lifts = enumerate_lifts(&bivalent_cycle()).unwrap();
        assert_eq!(lifts.len(), 1);
        assert!(lifts[0].connected);
        assert_eq!(lifts[0].automorphism_count, 4);
        assert_eq!(lifts[0].multiplicity(), rational(4, 1));
        assert!(verify_preimage_formula(&bivalent_cycle(), 3).unwrap());
    }

    #[test]
    fn tree_quotient_has_only_a_disconnected_lift() {
        let tree = QuotientCover {
            graph: FeynmanGraph::new(2, vec![(0, 1)]),
            order: vec![0, 1],
            sources: vec![0],
            weights: vec![1],
            crossings: vec![0],
        };
        let lifts = enumerate_lifts(&tree).unwrap();
        assert_eq!(lifts.len(), 1);
        assert!(!lifts[0].connected);
        let (explicit, closed) = preimage_sums(&tree).unwrap();
        assert!(explicit.is_zero() && closed.is_zero());
    }

    #[test]
    fn five_twisted_covers_in_degree_two() {
        let mut mults: Vec<_> = enumerate_twisted_covers(2, 3)
            .unwrap()
            .iter()
            .map(TwistedCover::multiplicity)
            .filter(|m| !m.is_zero())
            .collect();
        mults.sort();
        let expected: Vec<_> = [2, 2, 4, 4, 4].iter().map(|&x| rational(x, 1)).collect();
        assert_eq!(mults, expected);
        assert_eq!(count_tropical_from_lifts(2, 3).unwrap(), rational(16, 1));
    }

    #[test]
    fn genus_two_uses_loops() {
        // a lone 2-valent vertex with a loop wrapping d/w times
        assert_eq!(count_tropical(2, 2).unwrap(), rational(2, 1));
        assert_eq!(count_tropical(3, 2).unwrap(), rational(6, 1));
        assert!(count_tropical(1, 2).unwrap().is_zero());
    }

    #[test]
    fn covers_are_balanced_and_degree_is_constant() {
        for (d, g) in [(1, 3), (2, 3), (3, 3), (2, 4)] {
            for cover in enumerate_quotient_covers(d, g).unwrap() {
                assert!(cover.is_balanced());
                assert!(cover.is_geometric());
                for m in 0..g {
                    assert_eq!(cover.degree_at_gap(m), d as u32, "{cover:?} gap {m}");
                }
                let c = cover.two_valent_count();
                let gp = genus(&cover.graph).unwrap();
                assert_eq!(2 * gp, g - c + 1);
            }
        }
    }

    #[test]
    fn degree_one_genus_three() {
        for cover in enumerate_quotient_covers(1, 3).unwrap() {
            assert!(cover.weights.iter().all(|&w| w == 1));
            let m = cover_multiplicity(&cover, 3).unwrap();
            if cover.two_valent_count() > 0 {
                assert!(m.value.is_zero());
            }
        }
    }

    #[test]
    fn rejects_small_genus() {
        assert!(matches!(
            enumerate_quotient_covers(2, 1),
            Err(Error::InvalidGenus { .. })
        ));
        assert!(matches!(
            cover_multiplicity(&bivalent_cycle(), 4),
            Err(Error::InvalidGenus { .. })
        ));
    }
}
