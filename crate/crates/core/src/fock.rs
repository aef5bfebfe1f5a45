//! The bosonic Fock space with basis `b_μ = α_{-μ_1} ⋯ α_{-μ_m} v_∅`, the
//! cut-and-join operator `M`, and twisted Hurwitz numbers as its matrix
//! elements.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tropical::pow2;

/// A partition, parts stored in non-increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    /// Sorts `parts`; every part must be positive.
    pub fn new(mut parts: Vec<u32>) -> Self {
        assert!(parts.iter().all(|&p| p > 0), "partition parts are positive");
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().map(|&p| p as usize).sum()
    }

    pub fn multiplicity(&self, part: u32) -> usize {
        self.parts.iter().filter(|&&p| p == part).count()
    }

    /// `Π_k (multiplicity of k)!`.
    pub fn aut_count(&self) -> BigInt {
        let mut out = BigInt::one();
        let mut run = 0u32;
        for (i, &p) in self.parts.iter().enumerate() {
            run = if i > 0 && self.parts[i - 1] == p { run + 1 } else { 1 };
            out *= run;
        }
        out
    }

    /// `Π μ_i`.
    pub fn product(&self) -> BigInt {
        self.parts.iter().map(|&p| BigInt::from(p)).product()
    }

    fn with(&self, part: u32) -> Self {
        let mut parts = self.parts.clone();
        let at = parts.partition_point(|&p| p > part);
        parts.insert(at, part);
        Self { parts }
    }

    fn without(&self, part: u32) -> Option<Self> {
        let at = self.parts.iter().position(|&p| p == part)?;
        let mut parts = self.parts.clone();
        parts.remove(at);
        Some(Self { parts })
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All partitions of `n`, in reverse lexicographic order.
pub fn partitions(n: usize) -> Vec<Partition> {
    fn fill(rest: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition {
                parts: prefix.clone(),
            });
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            prefix.push(p);
            fill(rest - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    fill(n as u32, n as u32, &mut Vec::new(), &mut out);
    out
}

/// Polynomial in `z` with exact rational coefficients, no trailing zeros.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ZPoly {
    coeffs: Vec<BigRational>,
}

impl ZPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: BigRational, power: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); power + 1];
        coeffs[power] = c;
        let mut out = Self { coeffs };
        out.trim();
        out
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coefficient(&self, power: usize) -> BigRational {
        self.coeffs.get(power).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn add_assign(&mut self, other: &Self) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), BigRational::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        self.trim();
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        };
        out.trim();
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        let mut out = Self { coeffs };
        out.trim();
        out
    }
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => c.to_string(),
                1 => format!("({c})*z"),
                _ => format!("({c})*z^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// A finite linear combination of basis vectors with `z`-polynomial
/// coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FockVector {
    terms: BTreeMap<Partition, ZPoly>,
}

impl FockVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn vacuum() -> Self {
        Self::basis(Partition::empty())
    }

    pub fn basis(mu: Partition) -> Self {
        let mut out = Self::zero();
        out.add_term(mu, &ZPoly::constant(BigRational::one()));
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &ZPoly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, mu: &Partition) -> ZPoly {
        self.terms.get(mu).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, mu: Partition, c: &ZPoly) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(mu.clone()).or_default();
        entry.add_assign(c);
        if entry.is_zero() {
            self.terms.remove(&mu);
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (mu, c) in &other.terms {
            self.add_term(mu.clone(), c);
        }
    }

    pub fn scale(&self, c: &ZPoly) -> Self {
        let mut out = Self::zero();
        for (mu, a) in &self.terms {
            out.add_term(mu.clone(), &a.mul(c));
        }
        out
    }

    /// Largest partition size present; 0 for the zero vector.
    pub fn energy(&self) -> usize {
        self.terms.keys().map(Partition::size).max().unwrap_or(0)
    }
}

/// The action of `α_n`: for `n < 0` insert a part `-n`, for `n > 0` remove a
/// part `n` with factor `n · (multiplicity of n)`.
pub fn apply_alpha(n: i32, v: &FockVector) -> FockVector {
    assert!(n != 0, "α_0 acts as zero on the charge-zero space");
    let mut out = FockVector::zero();
    let part = n.unsigned_abs();
    for (mu, c) in &v.terms {
        if n < 0 {
            out.add_term(mu.with(part), c);
        } else if let Some(rest) = mu.without(part) {
            let factor = BigRational::from_integer(BigInt::from(part) * mu.multiplicity(part));
            out.add_term(rest, &c.scale(&factor));
        }
    }
    out
}

fn apply_word(word: &[i32], v: &FockVector) -> FockVector {
    // rightmost generator acts first
    word.iter().rev().fold(v.clone(), |acc, &n| apply_alpha(n, &acc))
}

/// Bilinear pairing with `⟨b_μ|b_ν⟩ = δ_{μν} Π μ_i |Aut μ|`.
pub fn inner_product(u: &FockVector, v: &FockVector) -> ZPoly {
    let mut out = ZPoly::zero();
    for (mu, a) in &u.terms {
        if let Some(b) = v.terms.get(mu) {
            let norm = BigRational::from_integer(mu.product() * mu.aut_count());
            out.add_assign(&a.mul(b).scale(&norm));
        }
    }
    out
}

/// `M = 2 (Σ_k (k-1) α_{-k} α_k z + ½ Σ_{i+j=k} (α_{-j} α_{-i} α_k + α_{-k} α_i α_j))`.
pub fn apply_m(v: &FockVector, energy_cap: usize) -> Result<FockVector> {
    let energy = v.energy();
    if energy > energy_cap {
        return Err(Error::EnergyCap {
            energy,
            cap: energy_cap,
        });
    }
    let z = ZPoly::monomial(BigRational::one(), 1);
    let one = ZPoly::constant(BigRational::one());
    let mut out = FockVector::zero();
    for k in 1..=energy_cap as i32 {
        let scale = ZPoly::constant(BigRational::from_integer(BigInt::from(2 * (k - 1))));
        out.add_assign(&apply_word(&[-k, k], v).scale(&scale.mul(&z)));
        for i in 1..k {
            let j = k - i;
            // 2 · ½ = 1
            out.add_assign(&apply_word(&[-j, -i, k], v).scale(&one));
            out.add_assign(&apply_word(&[-k, i, j], v).scale(&one));
        }
    }
    Ok(out)
}

/// `⟨b_μ | M^power | b_ν⟩`; zero when the sizes differ.
pub fn matrix_element(mu: &Partition, nu: &Partition, power: usize) -> Result<ZPoly> {
    if mu.size() != nu.size() {
        return Ok(ZPoly::zero());
    }
    let cap = nu.size();
    let mut v = FockVector::basis(nu.clone());
    for _ in 0..power {
        v = apply_m(&v, cap)?;
    }
    Ok(inner_product(&FockVector::basis(mu.clone()), &v))
}

/// How the branch-point factor `2^{g-1}` enters the weighting of `z^c`.
///
/// Every application of `M` already carries a factor 2 for its branch point,
/// so `M^{g-1}` supplies `2^{g-1}` by itself. `AsDisplayed` multiplies by it
/// once more and overcounts by exactly `2^{g-1}`; it is kept to document that
/// relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BranchFactor {
    /// `Σ_c [z^c] P · 2^{(g-c+1)/2} / 2^{c+1}`
    InOperator,
    /// `Σ_c [z^c] P · 2^{(g-c+1)/2} / 2^{c+1} · 2^{g-1}`
    AsDisplayed,
}

/// Weighted sum of the `z^c` coefficients, rejecting nonzero coefficients at
/// odd `g - c + 1`.
fn z_weighted_sum(poly: &ZPoly, g: usize, branch: BranchFactor) -> Result<BigRational> {
    let mut total = BigRational::zero();
    for (c, coef) in poly.coefficients().iter().enumerate() {
        if coef.is_zero() {
            continue;
        }
        if c >= g || (g - c + 1) % 2 == 1 {
            return Err(Error::ParityViolation { power: c, genus: g });
        }
        let half = (g - c).div_ceil(2) as i64;
        let mut term = coef * pow2(half) / pow2(c as i64 + 1);
        if branch == BranchFactor::AsDisplayed {
            term *= pow2(g as i64 - 1);
        }
        total += term;
    }
    Ok(total)
}

fn validate(d: usize, g: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidDegree(d));
    }
    if g == 0 {
        return Err(Error::InvalidGenus {
            genus: g,
            reason: "the genus of an elliptic twisted cover is at least 1",
        });
    }
    Ok(())
}

/// A disconnected twisted double Hurwitz number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleHurwitz {
    pub value: BigRational,
    /// Set when `|μ| ≠ |ν|`; the value is then 0.
    pub size_mismatch: bool,
}

/// `h̃•_g(μ, ν) = 1/(Π μ_i Π ν_j) Σ_c [z^c] ⟨b_μ|M^{g-1}|b_ν⟩ · 2^{(g-c+1)/2} / 2^{c+1}`.
pub fn twisted_double_disconnected(mu: &Partition, nu: &Partition, g: usize) -> Result<DoubleHurwitz> {
    twisted_double_with(mu, nu, g, BranchFactor::InOperator)
}

pub fn twisted_double_with(
    mu: &Partition,
    nu: &Partition,
    g: usize,
    branch: BranchFactor,
) -> Result<DoubleHurwitz> {
    if mu.size() != nu.size() {
        return Ok(DoubleHurwitz {
            value: BigRational::zero(),
            size_mismatch: true,
        });
    }
    validate(mu.size().max(1), g)?;
    let element = matrix_element(mu, nu, g - 1)?;
    let value = z_weighted_sum(&element, g, branch)?
        / BigRational::from_integer(mu.product() * nu.product());
    Ok(DoubleHurwitz {
        value,
        size_mismatch: false,
    })
}

/// Disconnected twisted Hurwitz number of the elliptic curve as a sum of
/// diagonal matrix elements.
pub fn elliptic_disconnected(d: usize, g: usize) -> Result<BigRational> {
    elliptic_disconnected_with(d, g, BranchFactor::InOperator)
}

pub fn elliptic_disconnected_with(d: usize, g: usize, branch: BranchFactor) -> Result<BigRational> {
    validate(d, g)?;
    let terms = partitions(d)
        .par_iter()
        .map(|mu| {
            let element = matrix_element(mu, mu, g - 1)?;
            let weight = BigRational::from_integer(mu.aut_count() * mu.product());
            Ok(z_weighted_sum(&element, g, branch)? / weight)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(terms.into_iter().sum())
}

/// `Σ_{μ ⊢ d} Π μ_i / |Aut μ| · h̃•_g(μ, μ)`.
pub fn elliptic_from_doubles(d: usize, g: usize) -> Result<BigRational> {
    validate(d, g)?;
    let mut total = BigRational::zero();
    for mu in partitions(d) {
        let double = twisted_double_disconnected(&mu, &mu, g)?;
        total += double.value * BigRational::new(mu.product(), mu.aut_count());
    }
    Ok(total)
}
