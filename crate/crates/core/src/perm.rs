//! Permutations of `{1, …, n}` and the subgroups of `S_{2d}` built around the
//! fixed-point-free involution `τ = (1 d+1)(2 d+2)…(d 2d)`.
//!
//! Composition is right-to-left everywhere in this crate: `p.compose(&q)` is
//! the permutation `x ↦ p(q(x))`.
//!
//! Points are 1-based at the public surface. Internally the one-line form is
//! stored 0-based.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        assert!(n <= u8::MAX as usize + 1, "degree {n} too large");
        Self {
            images: (0..n).map(|i| i as u8).collect(),
        }
    }

    /// Builds a permutation from 1-based one-line notation.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in images {
            if x == 0 || x > n || seen[x - 1] {
                return Err(Error::NotAPermutation(n));
            }
            seen[x - 1] = true;
        }
        Ok(Self {
            images: images.iter().map(|&x| (x - 1) as u8).collect(),
        })
    }

    /// Builds a permutation of `{1, …, n}` from 1-based disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (1..=n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x == 0 || x > n || touched[x - 1] {
                    return Err(Error::NotAPermutation(n));
                }
                touched[x - 1] = true;
                images[x - 1] = cycle[(k + 1) % cycle.len()];
            }
        }
        Self::from_images(&images)
    }

    /// The transposition `(i j)` in `S_n`, 1-based.
    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self> {
        if i == j {
            return Err(Error::NotAPermutation(n));
        }
        Self::from_cycles(n, &[&[i, j]])
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based point `x`.
    pub fn image(&self, x: usize) -> usize {
        self.images[x - 1] as usize + 1
    }

    /// One-line notation, 1-based.
    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize + 1).collect()
    }

    pub(crate) fn raw(&self) -> &[u8] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(&self, other: &Self) -> Self {
        debug_assert_eq!(self.degree(), other.degree());
        Self {
            images: other.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0u8; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u8;
        }
        Self { images }
    }

    /// `a ∘ self ∘ a⁻¹`.
    pub fn conjugate_by(&self, a: &Self) -> Self {
        // (a σ a⁻¹)(a(x)) = a(σ(x))
        let mut images = vec![0u8; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            images[a.images[x] as usize] = a.images[y as usize];
        }
        Self { images }
    }

    /// Replaces `self` by `(i j) ∘ self` (0-based points).
    pub(crate) fn left_swap(&mut self, i: u8, j: u8) {
        for x in self.images.iter_mut() {
            if *x == i {
                *x = j;
            } else if *x == j {
                *x = i;
            }
        }
    }

    /// Replaces `self` by `self ∘ (i j)` (0-based points).
    pub(crate) fn right_swap(&mut self, i: u8, j: u8) {
        self.images.swap(i as usize, j as usize);
    }

    pub fn cycles(&self) -> CycleDecomposition {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.images[x] as usize;
            }
            cycles.push(cycle);
        }
        CycleDecomposition { n, cycles }
    }

    /// Cycle type as a weakly decreasing list of cycle lengths.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lengths: Vec<usize> = self.cycles().cycles.iter().map(Vec::len).collect();
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }

    pub fn order(&self) -> usize {
        self.cycles()
            .cycles
            .iter()
            .map(Vec::len)
            .fold(1, num_integer::lcm)
    }

    /// All of `S_n` in lexicographic order of the one-line form.
    pub fn all(n: usize) -> AllPermutations {
        AllPermutations {
            next: Some(Self::identity(n)),
        }
    }

    fn check_degree(&self, expected: usize) -> Result<()> {
        if self.degree() != expected {
            return Err(Error::DegreeMismatch {
                expected,
                found: self.degree(),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        let mut wrote = false;
        for cycle in cycles.cycles.iter().filter(|c| c.len() > 1) {
            let body: Vec<String> = cycle.iter().map(ToString::to_string).collect();
            write!(f, "({})", body.join(" "))?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// Lexicographic iterator over `S_n`.
pub struct AllPermutations {
    next: Option<Permutation>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.images.clone();
        if next_lexicographic(&mut succ) {
            self.next = Some(Permutation { images: succ });
        }
        Some(current)
    }
}

/// Advances `slice` to its lexicographic successor; returns false on the last one.
pub(crate) fn next_lexicographic<T: Ord>(slice: &mut [T]) -> bool {
    let n = slice.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && slice[i - 1] >= slice[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while slice[j] <= slice[i - 1] {
        j -= 1;
    }
    slice.swap(i - 1, j);
    slice[i..].reverse();
    true
}

/// Disjoint cycles of a permutation, fixed points included, 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleDecomposition {
    pub n: usize,
    pub cycles: Vec<Vec<usize>>,
}

impl CycleDecomposition {
    pub fn to_permutation(&self) -> Result<Permutation> {
        let refs: Vec<&[usize]> = self.cycles.iter().map(Vec::as_slice).collect();
        Permutation::from_cycles(self.n, &refs)
    }
}

/// The involution `τ = (1 d+1)(2 d+2)…(d 2d)` in `S_{2d}`.
pub fn make_tau(d: usize) -> Result<Permutation> {
    if d == 0 {
        return Err(Error::InvalidDegree(d));
    }
    let images: Vec<usize> = (1..=2 * d)
        .map(|i| if i <= d { i + d } else { i - d })
        .collect();
    Permutation::from_images(&images)
}

/// Membership in `B_d`, the centralizer of `τ`.
pub fn is_in_b(p: &Permutation, d: usize) -> Result<bool> {
    let tau = make_tau(d)?;
    p.check_degree(2 * d)?;
    Ok(tau.conjugate_by(p) == tau)
}

/// Membership in `C~(τ) = {σ : τστ = σ⁻¹}`.
pub fn is_in_c_twist(p: &Permutation, d: usize) -> Result<bool> {
    let tau = make_tau(d)?;
    p.check_degree(2 * d)?;
    Ok(twisted_by(p, &tau) == p.inverse())
}

/// Membership in `B~_d`: elements of `C~(τ)` without self-symmetric cycles.
///
/// A cycle is self-symmetric when `τ` maps its support onto itself.
pub fn is_in_b_twist(p: &Permutation, d: usize) -> Result<bool> {
    if !is_in_c_twist(p, d)? {
        return Ok(false);
    }
    let tau = make_tau(d)?;
    Ok(!p.cycles().cycles.iter().any(|cycle| {
        let mut support = cycle.clone();
        support.sort_unstable();
        let mut image: Vec<usize> = cycle.iter().map(|&x| tau.image(x)).collect();
        image.sort_unstable();
        support == image
    }))
}

/// `τ p τ` (τ is an involution so this is also conjugation).
fn twisted_by(p: &Permutation, tau: &Permutation) -> Permutation {
    p.conjugate_by(tau)
}

/// Transpositions `(i j)` of `S_{2d}` with `j ≠ τ(i)`, in lexicographic order
/// of `(i, j)` with `i < j`.
pub fn transpositions_admissible(d: usize) -> Result<Vec<Permutation>> {
    let tau = make_tau(d)?;
    let n = 2 * d;
    let mut out = Vec::with_capacity(n * (n - 1) / 2 - d);
    for i in 1..=n {
        for j in (i + 1)..=n {
            if tau.image(i) != j {
                out.push(Permutation::transposition(n, i, j)?);
            }
        }
    }
    Ok(out)
}

/// Whether the group generated by `generators` is transitive on `{1, …, n}`.
///
/// Decided by merging the orbits of the generators, never by building the group.
pub fn group_acts_transitively(generators: &[Permutation], n: usize) -> Result<bool> {
    let mut uf = UnionFind::new(n);
    for g in generators {
        g.check_degree(n)?;
        uf.absorb(g);
    }
    Ok(uf.components() <= 1)
}

/// Union-find over points `0..n`, used for orbit closures.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<u8>,
    count: usize,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n).map(|i| i as u8).collect(),
            count: n,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let p = self.parent[x] as usize;
            self.parent[x] = self.parent[p];
            x = p;
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb) as u8;
            self.count -= 1;
        }
    }

    pub(crate) fn absorb(&mut self, p: &Permutation) {
        for (x, &y) in p.raw().iter().enumerate() {
            self.union(x, y as usize);
        }
    }

    pub(crate) fn components(&self) -> usize {
        self.count
    }
}

/// All elements of `B_d`, in lexicographic order.
///
/// Built directly as signed permutations of the `d` pairs `{i, i+d}`, so the
/// size is `2^d · d!` without scanning `S_{2d}`.
pub fn hyperoctahedral(d: usize) -> Result<Vec<Permutation>> {
    if d == 0 {
        return Err(Error::InvalidDegree(d));
    }
    let mut out = Vec::new();
    let mut pairs: Vec<usize> = (0..d).collect();
    loop {
        for flips in 0u32..(1 << d) {
            let mut images = vec![0usize; 2 * d];
            for (i, &target) in pairs.iter().enumerate() {
                let flip = flips >> i & 1 == 1;
                let (lo, hi) = if flip {
                    (target + d, target)
                } else {
                    (target, target + d)
                };
                images[i] = lo + 1;
                images[i + d] = hi + 1;
            }
            out.push(Permutation::from_images(&images)?);
        }
        if !next_lexicographic(&mut pairs) {
            break;
        }
    }
    out.sort();
    Ok(out)
}

/// All elements of `B~_d`, in lexicographic order, by filtering `S_{2d}`.
pub fn b_twist_elements(d: usize) -> Result<Vec<Permutation>> {
    if d == 0 {
        return Err(Error::InvalidDegree(d));
    }
    let mut out = Vec::new();
    for p in Permutation::all(2 * d) {
        if is_in_b_twist(&p, d)? {
            out.push(p);
        }
    }
    Ok(out)
}
