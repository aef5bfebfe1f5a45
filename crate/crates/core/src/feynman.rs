//! Propagators, Feynman integrals and the generating series of twisted
//! Hurwitz numbers for `g > 2`.
//!
//! Every edge `q_k` joins two vertices `x_{k1}`, `x_{k2}` with `x_{k1}`
//! placed first in the vertex order. Its propagator is
//!
//! ```text
//! P(q_k) = Σ_w c_w (x_{k1}/x_{k2})^w
//!        + Σ_{a ≥ 1} Σ_{w | a} c_w ((x_{k1}/x_{k2})^w + (x_{k2}/x_{k1})^w) q_k^a
//! ```
//!
//! and the Feynman integral is the `x`-constant term of the product of all
//! propagators. A monomial of that product is a labeled quotient cover: the
//! `x` exponent records which way an edge leaves its endpoints, the `q`
//! exponent its weight times the number of passes over the base point.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorization::count_twisted;
use crate::graph::{all_orderings, enumerate_graphs, genus, quotient_profile, FeynmanGraph, GraphClass};
use crate::radical::RadicalScalar;
use crate::series::{Monomial, TruncatedSeries};
use crate::tropical::pow2;

/// `c_w` for an edge whose endpoints have the given valences.
pub fn propagator_coefficient(w: u32, valence_k1: usize, valence_k2: usize) -> RadicalScalar {
    assert!(w >= 1, "edge weights are positive");
    let w_scalar = RadicalScalar::from_integer(w as i64);
    match (valence_k1 == 2, valence_k2 == 2) {
        (true, true) => RadicalScalar::from_integer((w as i64 - 1) * w as i64),
        (true, false) | (false, true) => &RadicalScalar::sqrt(w as u64 - 1) * &w_scalar,
        (false, false) => w_scalar,
    }
}

fn check_order(graph: &FeynmanGraph, order: &[usize]) -> Result<Vec<usize>> {
    let n = graph.vertex_count;
    let mut pos = vec![usize::MAX; n];
    if order.len() != n {
        return Err(Error::InvalidOrdering(n));
    }
    for (i, &v) in order.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return Err(Error::InvalidOrdering(n));
        }
        pos[v] = i;
    }
    Ok(pos)
}

fn edge_series(graph: &FeynmanGraph, pos: &[usize], k: usize, cap: u32) -> Result<TruncatedSeries> {
    let (u, v) = graph.edges[k];
    if u == v {
        return Err(Error::LoopEdge(k));
    }
    let (first, second) = if pos[u] < pos[v] { (u, v) } else { (v, u) };
    let valences = graph.valences();
    let c = |w: u32| propagator_coefficient(w, valences[first], valences[second]);
    let (r, s) = (graph.edge_count(), graph.vertex_count);
    let mono = |a: u32, w: i32| {
        let mut m = Monomial::one(r, s);
        m.q[k] = a;
        m.x[first] = w;
        m.x[second] = -w;
        m
    };
    let mut out = TruncatedSeries::zero(r, s, cap);
    for w in 1..=cap {
        out.add_term(mono(0, w as i32), &c(w));
    }
    for a in 1..=cap {
        for w in (1..=a).filter(|w| a % w == 0) {
            out.add_term(mono(a, w as i32), &c(w));
            out.add_term(mono(a, -(w as i32)), &c(w));
        }
    }
    Ok(out)
}

/// Propagator of edge `edge`, truncated at `q`-degree `cap` and, in its
/// `q`-free part, at weight `cap`. Weights never exceed the cover degree, so
/// the truncation does not change any coefficient of `q`-degree at most `cap`.
pub fn propagator(
    graph: &FeynmanGraph,
    order: &[usize],
    edge: usize,
    cap: u32,
) -> Result<TruncatedSeries> {
    let pos = check_order(graph, order)?;
    edge_series(graph, &pos, edge, cap)
}

/// The `x`-constant part of `Π_k P(q_k)` up to `q`-degree `cap`, optionally
/// restricted to `q_k`-exponents at most `bound[k]`.
fn integral_series(
    graph: &FeynmanGraph,
    order: &[usize],
    cap: u32,
    bound: Option<&[u32]>,
) -> Result<TruncatedSeries> {
    let pos = check_order(graph, order)?;
    let (r, s) = (graph.edge_count(), graph.vertex_count);
    let mut last_edge = vec![None; s];
    for (k, &(u, v)) in graph.edges.iter().enumerate() {
        last_edge[u] = Some(k);
        last_edge[v] = Some(k);
    }
    let mut acc = TruncatedSeries::one(r, s, cap);
    for k in 0..r {
        acc = acc.mul(&edge_series(graph, &pos, k, cap)?);
        if let Some(bound) = bound {
            acc.retain(|m, _| m.q[k] <= bound[k]);
        }
        // once every edge at v is in, only x_v-free terms can still reach x^0
        for v in (0..s).filter(|&v| last_edge[v] == Some(k)) {
            acc = acc.constant_in_x(v);
        }
    }
    Ok(acc)
}

fn require_rational(value: &RadicalScalar) -> Result<BigRational> {
    value
        .to_rational()
        .ok_or_else(|| Error::NonRational(value.to_string()))
}

/// Coefficient of `q^a x^0` in the product of all propagators.
///
/// The value is asserted rational: balancing forces the two edges at a
/// 2-valent vertex to share their weight, so the square roots pair up.
pub fn feynman_integral(
    graph: &FeynmanGraph,
    order: &[usize],
    multidegree: &[u32],
) -> Result<RadicalScalar> {
    if multidegree.len() != graph.edge_count() {
        return Err(Error::MultidegreeLength {
            expected: graph.edge_count(),
            found: multidegree.len(),
        });
    }
    let total: u32 = multidegree.iter().sum();
    if total == 0 {
        return Err(Error::ZeroMultidegree);
    }
    let series = integral_series(graph, order, total, Some(multidegree))?;
    let mono = Monomial {
        q: multidegree.to_vec(),
        x: vec![0; graph.vertex_count],
    };
    let value = series.coefficient(&mono);
    require_rational(&value)?;
    Ok(value)
}

/// `Σ_{|a| = d} I_{Γ,Ω,a}`: the `q^d` coefficient after setting every `q_k`
/// to `q`. Each contributing multidegree is checked for rationality.
pub fn degree_coefficient(graph: &FeynmanGraph, order: &[usize], d: u32) -> Result<BigRational> {
    if d == 0 {
        return Err(Error::InvalidDegree(0));
    }
    let series = integral_series(graph, order, d, None)?;
    let mut total = BigRational::zero();
    for (m, c) in series.terms() {
        if m.q_degree() == d {
            total += require_rational(c)?;
        }
    }
    Ok(total)
}

/// The candidate prefactors for a graph class, each of the form
/// `2^e · (2^{g'} - δ_{0c}) / 2^{c+1} · |Aut Γ|^{±1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormalizationReading {
    /// `2^{g-1} (2^{g'} - δ) / 2^{c+1} · |Aut Γ|`
    ScaledTimesAut,
    /// `2^{g-1} (2^{g'} - δ) / (2^{c+1} |Aut Γ|)`
    ScaledOverAut,
    /// `(2^{g'} - δ) / (2^{c+1} 2^{g-1}) · |Aut Γ|`
    DividedTimesAut,
    /// `(2^{g'} - δ) / (2^{c+1} 2^{g-1} |Aut Γ|)`
    DividedOverAut,
}

impl NormalizationReading {
    pub const ALL: [Self; 4] = [
        Self::ScaledTimesAut,
        Self::ScaledOverAut,
        Self::DividedTimesAut,
        Self::DividedOverAut,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::ScaledTimesAut => "scaled-times-aut",
            Self::ScaledOverAut => "scaled-over-aut",
            Self::DividedTimesAut => "divided-times-aut",
            Self::DividedOverAut => "divided-over-aut",
        }
    }

    pub fn prefactor(self, g: usize, c: usize, g_prime: usize, automorphisms: u64) -> BigRational {
        let delta = if c == 0 {
            BigRational::one()
        } else {
            BigRational::zero()
        };
        let base = (pow2(g_prime as i64) - delta) / pow2(c as i64 + 1);
        let aut = BigRational::from_integer(BigInt::from(automorphisms));
        let genus_power = pow2(g as i64 - 1);
        match self {
            Self::ScaledTimesAut => base * genus_power * aut,
            Self::ScaledOverAut => base * genus_power / aut,
            Self::DividedTimesAut => base / genus_power * aut,
            Self::DividedOverAut => base / genus_power / aut,
        }
    }
}

impl fmt::Display for NormalizationReading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `Σ_Ω [q^d] I_{Γ,Ω}` for one graph class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphContribution {
    pub class: GraphClass,
    pub four_valent_count: usize,
    pub quotient_genus: usize,
    pub integral_sum: BigRational,
}

fn validate_genus(g: usize) -> Result<()> {
    if g <= 2 {
        return Err(Error::InvalidGenus {
            genus: g,
            reason: "the Feynman pipeline needs g > 2",
        });
    }
    Ok(())
}

/// Per-graph-class integral sums at `q`-degree `d` over all loopless graphs
/// with `g - 1 - c` trivalent and `c` bivalent vertices.
pub fn graph_contributions(d: usize, g: usize) -> Result<Vec<GraphContribution>> {
    if d == 0 {
        return Err(Error::InvalidDegree(d));
    }
    validate_genus(g)?;
    let mut classes = Vec::new();
    for c in 0..g {
        let (v3, v2) = quotient_profile(g, c).expect("c < g");
        if (3 * v3 + 2 * v2) % 2 == 1 {
            continue;
        }
        for class in enumerate_graphs(v3, v2, false)? {
            classes.push((c, class));
        }
    }
    classes
        .into_par_iter()
        .map(|(c, class)| {
            let graph = &class.representative;
            let sums = all_orderings(graph.vertex_count)
                .par_iter()
                .map(|order| degree_coefficient(graph, order, d as u32))
                .collect::<Result<Vec<_>>>()?;
            Ok(GraphContribution {
                four_valent_count: c,
                quotient_genus: genus(graph)?,
                integral_sum: sums.into_iter().sum(),
                class,
            })
        })
        .collect()
}

/// Combines graph contributions under a chosen prefactor reading.
pub fn assemble(reading: NormalizationReading, g: usize, parts: &[GraphContribution]) -> BigRational {
    parts
        .iter()
        .map(|p| {
            reading.prefactor(
                g,
                p.four_valent_count,
                p.quotient_genus,
                p.class.automorphism_count,
            ) * &p.integral_sum
        })
        .sum()
}

pub fn generating_series_with(reading: NormalizationReading, d: usize, g: usize) -> Result<BigRational> {
    Ok(assemble(reading, g, &graph_contributions(d, g)?))
}

/// `(d, g)` points on which the prefactor reading is fixed.
pub const CALIBRATION_ANCHORS: [(usize, usize); 4] = [(1, 3), (2, 3), (1, 4), (2, 4)];

/// Outcome of calibrating the prefactor against the symmetric-group count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CalibrationReport {
    /// `(reading, agrees on every anchor)`.
    pub agreement: Vec<(NormalizationReading, bool)>,
    pub chosen: Option<NormalizationReading>,
}

/// Evaluates every reading on the anchors; a reading is chosen only when it
/// is the unique one agreeing everywhere.
pub fn calibrate() -> Result<CalibrationReport> {
    let mut agrees = [true; 4];
    for &(d, g) in &CALIBRATION_ANCHORS {
        let expected = count_twisted(d, g, true)?.value;
        let parts = graph_contributions(d, g)?;
        for (i, reading) in NormalizationReading::ALL.iter().enumerate() {
            agrees[i] &= assemble(*reading, g, &parts) == expected;
        }
    }
    let agreement: Vec<_> = NormalizationReading::ALL
        .iter()
        .copied()
        .zip(agrees)
        .collect();
    let matching: Vec<_> = agreement.iter().filter(|(_, ok)| *ok).map(|(r, _)| *r).collect();
    let chosen = (matching.len() == 1).then(|| matching[0]);
    Ok(CalibrationReport { agreement, chosen })
}

/// The calibrated reading, computed once per process.
pub fn calibrated_reading() -> Result<NormalizationReading> {
    static READING: OnceLock<Result<Option<NormalizationReading>>> = OnceLock::new();
    READING
        .get_or_init(|| calibrate().map(|r| r.chosen))
        .clone()?
        .ok_or(Error::CalibrationFailed)
}

/// `h̃_{d,g}` assembled from Feynman integrals under the calibrated reading.
pub fn generating_series_coefficient(d: usize, g: usize) -> Result<BigRational> {
    validate_genus(g)?;
    generating_series_with(calibrated_reading()?, d, g)
}

/// Serializable series `Σ_d h̃_{d,g} q^d` up to a maximal degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesExport {
    pub g: usize,
    /// `(d, value)` with values as exact `numerator/denominator` strings.
    pub coefficients: Vec<(usize, String)>,
    pub normalization_reading: NormalizationReading,
}

pub fn export_series(g: usize, max_degree: usize) -> Result<SeriesExport> {
    validate_genus(g)?;
    let reading = calibrated_reading()?;
    let coefficients = (1..=max_degree)
        .map(|d| generating_series_with(reading, d, g).map(|v| (d, v.to_string())))
        .collect::<Result<_>>()?;
    Ok(SeriesExport {
        g,
        coefficients,
        normalization_reading: reading,
    })
}
