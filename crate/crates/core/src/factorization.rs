//! Hurwitz numbers of an elliptic curve by brute-force counting of monodromy
//! tuples in the symmetric group, classical and twisted.
//!
//! For the twisted count the defining relation is
//!
//! ```text
//! η_{g-1} ∘ … ∘ η_1 ∘ σ ∘ (τ η_1 τ) ∘ … ∘ (τ η_{g-1} τ) = α ∘ σ ∘ α⁻¹
//! ```
//!
//! with `η_1` the innermost factor. Reindexing `η_s ↦ η_{g-s}` is a bijection
//! on tuples, so totals do not depend on this choice; it only fixes which
//! tuple a given sequence of transpositions names.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{
    b_twist_elements, hyperoctahedral, make_tau, transpositions_admissible, Permutation,
    UnionFind,
};

/// Default cap on the projected number of elementary search steps.
pub const DEFAULT_BUDGET: u128 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HurwitzQuery {
    pub d: usize,
    pub g: usize,
    pub twisted: bool,
    pub connected: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HurwitzResult {
    pub value: BigRational,
    pub tuple_count: u128,
    pub normalization: u128,
}

impl HurwitzResult {
    fn new(tuple_count: u128, normalization: u128) -> Self {
        Self {
            value: BigRational::new(BigInt::from(tuple_count), BigInt::from(normalization)),
            tuple_count,
            normalization,
        }
    }
}

/// One tuple `(σ, η_1, …, η_{g-1}, α)` counted by the twisted number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedTuple {
    pub sigma: Permutation,
    pub etas: Vec<Permutation>,
    pub alpha: Permutation,
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// `(2d)!! = 2·4·…·2d`.
pub fn double_factorial_even(d: usize) -> u128 {
    (1..=d as u128).map(|k| 2 * k).product()
}

fn check_budget(projected: u128, budget: u128) -> Result<()> {
    if projected > budget {
        Err(Error::BudgetExceeded { projected, budget })
    } else {
        Ok(())
    }
}

fn sat_pow(base: usize, exp: usize) -> u128 {
    (0..exp).fold(1u128, |acc, _| acc.saturating_mul(base as u128))
}

/// `η_{g-1} ∘ … ∘ η_1 ∘ σ ∘ (τη_1τ) ∘ … ∘ (τη_{g-1}τ)`.
pub fn twisted_product(sigma: &Permutation, etas: &[Permutation], d: usize) -> Result<Permutation> {
    let tau = make_tau(d)?;
    let mut x = sigma.clone();
    for eta in etas {
        x = eta.compose(&x).compose(&eta.conjugate_by(&tau));
    }
    Ok(x)
}

/// All `α ∈ B_d` with `α σ α⁻¹` equal to the twisted product of `(σ, η…)`.
///
/// No transitivity condition is applied.
pub fn admissible_alphas(
    sigma: &Permutation,
    etas: &[Permutation],
    d: usize,
) -> Result<Vec<Permutation>> {
    let target = twisted_product(sigma, etas, d)?;
    Ok(hyperoctahedral(d)?
        .into_iter()
        .filter(|a| sigma.conjugate_by(a) == target)
        .collect())
}

/// Precomputed data shared by every `σ` branch of the twisted search.
struct TwistedSearch {
    d: usize,
    slots: usize,
    connected: bool,
    /// Admissible transpositions as 0-based `(i, j)` together with the points
    /// of `τ (i j) τ`.
    etas: Vec<((u8, u8), (u8, u8))>,
    centralizer: Vec<Permutation>,
}

impl TwistedSearch {
    fn new(d: usize, g: usize, connected: bool) -> Result<Self> {
        let tau = make_tau(d)?;
        let etas = transpositions_admissible(d)?
            .iter()
            .map(|t| {
                let moved: Vec<u8> = (0..2 * d as u8)
                    .filter(|&x| t.raw()[x as usize] != x)
                    .collect();
                let (i, j) = (moved[0], moved[1]);
                let ti = tau.raw()[i as usize];
                let tj = tau.raw()[j as usize];
                ((i, j), (ti.min(tj), ti.max(tj)))
            })
            .collect();
        Ok(Self {
            d,
            slots: g - 1,
            connected,
            etas,
            centralizer: hyperoctahedral(d)?,
        })
    }

    /// Visits every `(η indices, α index)` completing the tuple for this `σ`.
    fn visit_sigma<F: FnMut(&[usize], usize)>(&self, sigma: &Permutation, visit: &mut F) {
        let mut targets: HashMap<Permutation, Vec<usize>> = HashMap::new();
        for (k, a) in self.centralizer.iter().enumerate() {
            targets.entry(sigma.conjugate_by(a)).or_default().push(k);
        }
        let mut uf = UnionFind::new(2 * self.d);
        uf.absorb(sigma);
        let mut chosen = Vec::with_capacity(self.slots);
        self.descend(sigma.clone(), uf, &targets, &mut chosen, visit);
    }

    fn descend<F: FnMut(&[usize], usize)>(
        &self,
        x: Permutation,
        uf: UnionFind,
        targets: &HashMap<Permutation, Vec<usize>>,
        chosen: &mut Vec<usize>,
        visit: &mut F,
    ) {
        if chosen.len() == self.slots {
            let Some(alphas) = targets.get(&x) else {
                return;
            };
            for &k in alphas {
                if self.connected {
                    let mut closed = uf.clone();
                    closed.absorb(&self.centralizer[k]);
                    if closed.components() != 1 {
                        continue;
                    }
                }
                visit(chosen, k);
            }
            return;
        }
        for (idx, &((i, j), (ti, tj))) in self.etas.iter().enumerate() {
            let mut next = x.clone();
            next.left_swap(i, j);
            next.right_swap(ti, tj);
            let mut next_uf = uf.clone();
            if self.connected {
                next_uf.union(i as usize, j as usize);
                next_uf.union(ti as usize, tj as usize);
            }
            chosen.push(idx);
            self.descend(next, next_uf, targets, chosen, visit);
            chosen.pop();
        }
    }
}

fn validate_genus(g: usize) -> Result<()> {
    if g == 0 {
        return Err(Error::InvalidGenus {
            genus: g,
            reason: "the genus must be at least 1",
        });
    }
    Ok(())
}

fn twisted_sigmas(d: usize, g: usize, budget: u128) -> Result<Vec<Permutation>> {
    if d == 0 {
        return Err(Error::InvalidDegree(d));
    }
    validate_genus(g)?;
    // the σ filter scans S_{2d}
    check_budget(factorial(2 * d), budget)?;
    let sigmas = b_twist_elements(d)?;
    let etas = 2 * d * (2 * d - 1) / 2 - d;
    let projected = (sigmas.len() as u128)
        .saturating_mul(sat_pow(etas, g - 1))
        .saturating_mul(double_factorial_even(d));
    check_budget(projected, budget)?;
    Ok(sigmas)
}

/// Twisted Hurwitz number `h̃_{d,g}` (connected) or `h̃•_{d,g}` (disconnected)
/// with the default step budget.
pub fn count_twisted(d: usize, g: usize, connected: bool) -> Result<HurwitzResult> {
    count_twisted_with_budget(d, g, connected, DEFAULT_BUDGET)
}

pub fn count_twisted_with_budget(
    d: usize,
    g: usize,
    connected: bool,
    budget: u128,
) -> Result<HurwitzResult> {
    let sigmas = twisted_sigmas(d, g, budget)?;
    let search = TwistedSearch::new(d, g, connected)?;
    let total: u128 = sigmas
        .par_iter()
        .map(|sigma| {
            let mut count = 0u128;
            search.visit_sigma(sigma, &mut |_, _| count += 1);
            count
        })
        .sum();
    Ok(HurwitzResult::new(total, double_factorial_even(d)))
}

/// Every tuple counted by [`count_twisted`], in lexicographic order of
/// `(σ, η indices, α)`.
pub fn enumerate_twisted_tuples(d: usize, g: usize, connected: bool) -> Result<Vec<TwistedTuple>> {
    enumerate_twisted_tuples_with_budget(d, g, connected, DEFAULT_BUDGET)
}

pub fn enumerate_twisted_tuples_with_budget(
    d: usize,
    g: usize,
    connected: bool,
    budget: u128,
) -> Result<Vec<TwistedTuple>> {
    let sigmas = twisted_sigmas(d, g, budget)?;
    let search = TwistedSearch::new(d, g, connected)?;
    let transpositions = transpositions_admissible(d)?;
    let per_sigma: Vec<Vec<TwistedTuple>> = sigmas
        .par_iter()
        .map(|sigma| {
            let mut found = Vec::new();
            search.visit_sigma(sigma, &mut |etas, alpha| {
                found.push(TwistedTuple {
                    sigma: sigma.clone(),
                    etas: etas.iter().map(|&i| transpositions[i].clone()).collect(),
                    alpha: search.centralizer[alpha].clone(),
                });
            });
            found
        })
        .collect();
    Ok(per_sigma.into_iter().flatten().collect())
}

/// Classical elliptic Hurwitz number `h_{d,g}` from tuples
/// `(σ, τ_1, …, τ_{2g-2}, α)` in `S_d` with `τ_{2g-2}…τ_1 σ = α σ α⁻¹`.
pub fn count_classical(d: usize, g: usize, connected: bool) -> Result<HurwitzResult> {
    count_classical_with_budget(d, g, connected, DEFAULT_BUDGET)
}

pub fn count_classical_with_budget(
    d: usize,
    g: usize,
    connected: bool,
    budget: u128,
) -> Result<HurwitzResult> {
    if d == 0 {
        return Err(Error::InvalidDegree(d));
    }
    validate_genus(g)?;
    let slots = 2 * g - 2;
    let transpositions: Vec<(u8, u8)> = (0..d as u8)
        .flat_map(|i| ((i + 1)..d as u8).map(move |j| (i, j)))
        .collect();
    let projected = factorial(d)
        .saturating_mul(sat_pow(transpositions.len(), slots))
        .saturating_mul(factorial(d));
    check_budget(projected, budget)?;

    let group: Vec<Permutation> = Permutation::all(d).collect();
    let total: u128 = group
        .par_iter()
        .map(|sigma| {
            let mut targets: HashMap<Permutation, Vec<usize>> = HashMap::new();
            for (k, a) in group.iter().enumerate() {
                targets.entry(sigma.conjugate_by(a)).or_default().push(k);
            }
            let mut uf = UnionFind::new(d);
            uf.absorb(sigma);
            let mut count = 0u128;
            classical_descend(
                sigma.clone(),
                uf,
                slots,
                &transpositions,
                &targets,
                &group,
                connected,
                &mut count,
            );
            count
        })
        .sum();
    Ok(HurwitzResult::new(total, factorial(d)))
}

#[allow(clippy::too_many_arguments)]
fn classical_descend(
    x: Permutation,
    uf: UnionFind,
    remaining: usize,
    transpositions: &[(u8, u8)],
    targets: &HashMap<Permutation, Vec<usize>>,
    group: &[Permutation],
    connected: bool,
    count: &mut u128,
) {
    if remaining == 0 {
        if let Some(alphas) = targets.get(&x) {
            for &k in alphas {
                if connected {
                    let mut closed = uf.clone();
                    closed.absorb(&group[k]);
                    if closed.components() != 1 {
                        continue;
                    }
                }
                *count += 1;
            }
        }
        return;
    }
    for &(i, j) in transpositions {
        let mut next = x.clone();
        next.left_swap(i, j);
        let mut next_uf = uf.clone();
        next_uf.union(i as usize, j as usize);
        classical_descend(
            next,
            next_uf,
            remaining - 1,
            transpositions,
            targets,
            group,
            connected,
            count,
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::group_acts_transitively;
    use num_traits::{One, Zero};

    fn cyc(n: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, cycles).unwrap()
    }

    #[test]
    fn double_factorials() {
        assert_eq!(double_factorial_even(1), 2);
        assert_eq!(double_factorial_even(2), 8);
        assert_eq!(double_factorial_even(3), 48);
    }

    #[test]
    fn worked_alpha_set() {
        let sigma = cyc(4, &[&[1, 4], &[2, 3]]);
        let etas = [cyc(4, &[&[1, 4]]), cyc(4, &[&[1, 2]])];
        assert_eq!(
            twisted_product(&sigma, &etas, 2).unwrap(),
            cyc(4, &[&[1, 2], &[3, 4]])
        );
        let mut alphas = admissible_alphas(&sigma, &etas, 2).unwrap();
        alphas.sort();
        let mut expected = vec![
            cyc(4, &[&[2, 4]]),
            cyc(4, &[&[1, 2, 3, 4]]),
            cyc(4, &[&[1, 3]]),
            cyc(4, &[&[1, 4, 3, 2]]),
        ];
        expected.sort();
        assert_eq!(alphas, expected);
    }

    #[test]
    fn golden_twisted_value() {
        let r = count_twisted(2, 3, true).unwrap();
        assert_eq!(r.value, BigRational::from_integer(16.into()));
        assert_eq!(r.tuple_count, 128);
        assert_eq!(r.normalization, 8);
    }

    #[test]
    fn degree_one_has_no_branching() {
        for g in 2..=5 {
            assert!(count_twisted(1, g, true).unwrap().value.is_zero());
            assert!(count_twisted(1, g, false).unwrap().value.is_zero());
            assert!(enumerate_twisted_tuples(1, g, true).unwrap().is_empty());
        }
    }

    #[test]
    fn rejects_genus_zero_and_budget_overrun() {
        assert!(matches!(
            count_twisted(2, 0, true),
            Err(Error::InvalidGenus { .. })
        ));
        assert!(matches!(
            count_classical(2, 0, true),
            Err(Error::InvalidGenus { .. })
        ));
        assert!(matches!(
            count_twisted_with_budget(2, 3, true, 100),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn tuple_stream_matches_count() {
        let tuples = enumerate_twisted_tuples(2, 3, true).unwrap();
        assert_eq!(tuples.len(), 128);
        let tau = make_tau(2).unwrap();
        for t in &tuples {
            let lhs = twisted_product(&t.sigma, &t.etas, 2).unwrap();
            assert_eq!(lhs, t.sigma.conjugate_by(&t.alpha));
            let mut gens = vec![t.sigma.clone(), t.alpha.clone()];
            for e in &t.etas {
                gens.push(e.clone());
                gens.push(e.conjugate_by(&tau));
            }
            assert!(group_acts_transitively(&gens, 4).unwrap());
        }
        let fixed: Vec<_> = tuples
            .iter()
            .filter(|t| {
                t.sigma == cyc(4, &[&[1, 4], &[2, 3]])
                    && t.etas == [cyc(4, &[&[1, 4]]), cyc(4, &[&[1, 2]])]
            })
            .collect();
        assert_eq!(fixed.len(), 4);
    }

    #[test]
    fn disconnected_dominates_connected() {
        for (d, g) in [(2, 1), (2, 2), (2, 3), (3, 2)] {
            let c = count_twisted(d, g, true).unwrap();
            let dc = count_twisted(d, g, false).unwrap();
            assert!(dc.tuple_count >= c.tuple_count, "d={d} g={g}");
        }
    }

    #[test]
    fn classical_small_values() {
        assert!(count_classical(1, 1, true).unwrap().value.is_one());
        // S_2 × S_2 with no transpositions: both σ commute with both α, and
        // transitivity needs σ or α to be (1 2): 3 tuples out of 4.
        let r = count_classical(2, 1, true).unwrap();
        assert_eq!(r.tuple_count, 3);
        assert_eq!(r.value, BigRational::new(3.into(), 2.into()));
    }
}
