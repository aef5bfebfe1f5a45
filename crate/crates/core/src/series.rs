//! Multivariate series in edge variables `q_1…q_r` (non-negative exponents)
//! and vertex variables `x_1…x_s` (integer exponents), truncated in total
//! `q`-degree.

use std::collections::{BTreeMap, HashMap};

use crate::radical::RadicalScalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub q: Vec<u32>,
    pub x: Vec<i32>,
}

impl Monomial {
    pub fn one(q_vars: usize, x_vars: usize) -> Self {
        Self {
            q: vec![0; q_vars],
            x: vec![0; x_vars],
        }
    }

    pub fn q_degree(&self) -> u32 {
        self.q.iter().sum()
    }

    fn times(&self, other: &Self) -> Self {
        Self {
            q: self.q.iter().zip(&other.q).map(|(a, b)| a + b).collect(),
            x: self.x.iter().zip(&other.x).map(|(a, b)| a + b).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    q_vars: usize,
    x_vars: usize,
    cap: u32,
    terms: BTreeMap<Monomial, RadicalScalar>,
}

impl TruncatedSeries {
    pub fn zero(q_vars: usize, x_vars: usize, cap: u32) -> Self {
        Self {
            q_vars,
            x_vars,
            cap,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(q_vars: usize, x_vars: usize, cap: u32) -> Self {
        let mut s = Self::zero(q_vars, x_vars, cap);
        s.add_term(Monomial::one(q_vars, x_vars), &RadicalScalar::one());
        s
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `coef · mono`; monomials above the cap are dropped.
    pub fn add_term(&mut self, mono: Monomial, coef: &RadicalScalar) {
        assert_eq!(mono.q.len(), self.q_vars);
        assert_eq!(mono.x.len(), self.x_vars);
        if mono.q_degree() > self.cap || coef.is_zero() {
            return;
        }
        let entry = self.terms.entry(mono).or_default();
        *entry += coef;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn coefficient(&self, mono: &Monomial) -> RadicalScalar {
        self.terms.get(mono).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &RadicalScalar)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.cap = self.cap.min(other.cap);
        out.terms.retain(|m, _| m.q_degree() <= out.cap);
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!((self.q_vars, self.x_vars), (other.q_vars, other.x_vars));
        let cap = self.cap.min(other.cap);
        let mut acc: HashMap<Monomial, RadicalScalar> = HashMap::new();
        for (ma, ca) in &self.terms {
            let da = ma.q_degree();
            if da > cap {
                continue;
            }
            for (mb, cb) in &other.terms {
                if da + mb.q_degree() > cap {
                    continue;
                }
                *acc.entry(ma.times(mb)).or_default() += &(ca * cb);
            }
        }
        Self {
            q_vars: self.q_vars,
            x_vars: self.x_vars,
            cap,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn retain<F: FnMut(&Monomial, &RadicalScalar) -> bool>(&mut self, mut keep: F) {
        self.terms.retain(|m, c| keep(m, c));
    }

    /// Coefficient of `x_var^0`, still a series in the remaining variables.
    pub fn constant_in_x(&self, var: usize) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.x[var] == 0)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
            ..*self
        }
    }
}
