//! Combinatorics of the weighted projective cone `P(1,...,1,m)`.
//!
//! The cone has homogeneous coordinates `x_0, ..., x_{n-1}` of weight 1 and a
//! cone variable `x_n` of weight `m`. The hyperplane section at infinity
//! `Z = {x_n = 0}` is a copy of `P^{n-1}` with coordinates `x_0, ..., x_{n-1}`,
//! and lies in the linear system `|O_X(m)|`.
//!
//! Cohomology of the twists is modelled by explicit monomial bases:
//!
//! * `H^0(X, O_X(d))`: monomials with nonnegative exponents of weighted degree `d`;
//! * `H^n(X, O_X(d))`: Laurent monomials with every exponent `<= -1` (local
//!   cohomology at the irrelevant ideal);
//! * `H^0(Z, O_Z(e))` and `H^{n-1}(Z, O_Z(e))`: the same two models on `Z`.
//!
//! All intermediate cohomology of twists vanishes. Every basis is listed in
//! descending lexicographic order of exponent vectors, and downstream matrices
//! are written against that order.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num::{BigRational, One, Zero};

use crate::error::{Error, Result};

/// The weighted cone `X = P(1^n, m)` together with its section `Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConeSpace {
    n: usize,
    m: i64,
}

/// A (possibly Laurent) monomial, stored as its exponent vector.
///
/// On `X` the vector has length `n + 1`; on `Z` it has length `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub exponents: Vec<i64>,
}

impl Monomial {
    pub fn new(exponents: Vec<i64>) -> Self {
        Monomial { exponents }
    }

    pub fn one(len: usize) -> Self {
        Monomial {
            exponents: vec![0; len],
        }
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn is_polynomial(&self) -> bool {
        self.exponents.iter().all(|&e| e >= 0)
    }

    pub fn is_strictly_negative(&self) -> bool {
        self.exponents.iter().all(|&e| e <= -1)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.len(), other.len());
        Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// The partner under the residue pairing: `x^u <-> x^{-1-u}`.
    pub fn residue_partner(&self) -> Monomial {
        Monomial {
            exponents: self.exponents.iter().map(|e| -1 - e).collect(),
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Nonnegative exponent vectors with `sum w_i e_i = d`, descending lexicographic.
fn enumerate_weighted(weights: &[i64], d: i64) -> Vec<Vec<i64>> {
    fn go(weights: &[i64], pos: usize, rem: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let w = weights[pos];
        if pos + 1 == weights.len() {
            if rem % w == 0 {
                cur.push(rem / w);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        for v in (0..=rem / w).rev() {
            cur.push(v);
            go(weights, pos + 1, rem - v * w, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if d < 0 || weights.is_empty() {
        return out;
    }
    go(weights, 0, d, &mut Vec::with_capacity(weights.len()), &mut out);
    out
}

/// Strictly negative exponent vectors of degree `d`, via `e = -1 - b`.
fn enumerate_laurent(weights: &[i64], d: i64) -> Vec<Vec<i64>> {
    let shift: i64 = weights.iter().sum();
    let mut out: Vec<Vec<i64>> = enumerate_weighted(weights, -d - shift)
        .into_iter()
        .map(|b| b.into_iter().map(|x| -1 - x).collect())
        .collect();
    out.sort_by(|a, b| b.cmp(a));
    out
}

pub(crate) fn binomial(top: i64, bottom: i64) -> usize {
    if bottom < 0 || top < bottom {
        return 0;
    }
    let k = bottom.min(top - bottom);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (top - i) as u128 / (i + 1) as u128;
    }
    usize::try_from(acc).expect("binomial coefficient exceeds usize")
}

impl ConeSpace {
    pub fn new(n: usize, m: i64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSpace(format!("need n >= 2, got n = {n}")));
        }
        if m < 1 {
            return Err(Error::InvalidSpace(format!("need m >= 1, got m = {m}")));
        }
        Ok(ConeSpace { n, m })
    }

    /// Dimension of `X`, which is also the number of weight-one variables.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Weight of the cone variable; `Z` lies in `|O_X(m)|`.
    pub fn m(&self) -> i64 {
        self.m
    }

    /// `K_X = O_X(-(n+m))`.
    pub fn canonical_degree(&self) -> i64 {
        -(self.n as i64 + self.m)
    }

    /// Degree of the normal bundle of `Z` in `X`.
    pub fn normal_degree(&self) -> i64 {
        self.m
    }

    /// Whether `O_X(d)` is invertible.
    pub fn is_invertible_twist(&self, d: i64) -> bool {
        d.rem_euclid(self.m) == 0
    }

    /// The engine's guarantees are exercised for n in {2, 3}.
    pub fn is_tested_regime(&self) -> bool {
        self.n <= 3
    }

    pub fn x_weights(&self) -> Vec<i64> {
        let mut w = vec![1; self.n];
        w.push(self.m);
        w
    }

    fn z_weights(&self) -> Vec<i64> {
        vec![1; self.n]
    }

    pub fn x_degree(&self, mono: &Monomial) -> i64 {
        self.x_weights()
            .iter()
            .zip(&mono.exponents)
            .map(|(w, e)| w * e)
            .sum()
    }

    /// Basis of `H^0(X, O_X(d))`.
    pub fn weighted_monomials(&self, d: i64) -> Vec<Monomial> {
        enumerate_weighted(&self.x_weights(), d)
            .into_iter()
            .map(Monomial::new)
            .collect()
    }

    /// Basis of `H^n(X, O_X(d))` as Laurent monomials.
    pub fn laurent_top_basis(&self, d: i64) -> Vec<Monomial> {
        enumerate_laurent(&self.x_weights(), d)
            .into_iter()
            .map(Monomial::new)
            .collect()
    }

    /// Basis of `H^0(Z, O_Z(e))`.
    pub fn z_monomials(&self, e: i64) -> Vec<Monomial> {
        enumerate_weighted(&self.z_weights(), e)
            .into_iter()
            .map(Monomial::new)
            .collect()
    }

    /// Basis of `H^{n-1}(Z, O_Z(e))` as Laurent monomials.
    pub fn z_laurent_top_basis(&self, e: i64) -> Vec<Monomial> {
        enumerate_laurent(&self.z_weights(), e)
            .into_iter()
            .map(Monomial::new)
            .collect()
    }

    pub fn coh_dim_ox(&self, d: i64, i: usize) -> Result<usize> {
        if i > self.n {
            return Err(Error::DegreeOutOfRange {
                degree: i,
                max: self.n,
            });
        }
        Ok(if i == 0 {
            self.weighted_monomials(d).len()
        } else if i == self.n {
            self.weighted_monomials(-d + self.canonical_degree()).len()
        } else {
            0
        })
    }

    pub fn coh_dim_oz(&self, e: i64, i: usize) -> Result<usize> {
        let top = self.n - 1;
        if i > top {
            return Err(Error::DegreeOutOfRange {
                degree: i,
                max: top,
            });
        }
        let r = top as i64;
        Ok(if i == 0 {
            binomial(e + r, r)
        } else if i == top {
            binomial(-e - 1, r)
        } else {
            0
        })
    }

    /// `H^i(X, O_X(d))` basis for the two nonzero degrees, empty otherwise.
    pub(crate) fn x_basis(&self, d: i64, i: usize) -> Vec<Monomial> {
        if i == 0 {
            self.weighted_monomials(d)
        } else if i == self.n {
            self.laurent_top_basis(d)
        } else {
            Vec::new()
        }
    }

    /// `H^i(Z, O_Z(e))` basis; `i` is allowed to be out of range (empty).
    pub(crate) fn z_basis(&self, e: i64, i: isize) -> Vec<Monomial> {
        if i == 0 {
            self.z_monomials(e)
        } else if i == self.n as isize - 1 {
            self.z_laurent_top_basis(e)
        } else {
            Vec::new()
        }
    }
}

/// A homogeneous polynomial on `Z` with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZPoly {
    pub degree: i64,
    pub terms: BTreeMap<Monomial, BigRational>,
}

impl ZPoly {
    pub fn monomial(mono: Monomial) -> Self {
        let degree = mono.exponents.iter().sum();
        let mut terms = BTreeMap::new();
        terms.insert(mono, BigRational::one());
        ZPoly { degree, terms }
    }

    pub fn zero(degree: i64) -> Self {
        ZPoly {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant_one(n: usize) -> Self {
        ZPoly::monomial(Monomial::one(n))
    }

    /// Build from a coefficient vector in the basis of `H^0(Z, O_Z(degree))`.
    pub fn from_coefficients(space: &ConeSpace, degree: i64, coeffs: &[BigRational]) -> Result<Self> {
        let basis = space.z_monomials(degree);
        if basis.len() != coeffs.len() {
            return Err(Error::InvalidObject(format!(
                "section of degree {degree} needs {} coefficients, got {}",
                basis.len(),
                coeffs.len()
            )));
        }
        let terms = basis
            .into_iter()
            .zip(coeffs.iter().cloned())
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Ok(ZPoly { degree, terms })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Restriction of a polynomial on `X` to `Z`: drop every term with `x_n`.
    pub fn restrict_from_x(n: usize, x_degree: i64, terms: &[(Monomial, BigRational)]) -> Self {
        let mut out = ZPoly::zero(x_degree);
        for (mono, c) in terms {
            if mono.exponents[n] == 0 && !c.is_zero() {
                let z = Monomial::new(mono.exponents[..n].to_vec());
                let slot = out.terms.entry(z).or_insert_with(BigRational::zero);
                *slot += c;
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }
}

/// Index lookup for a basis list.
pub(crate) fn index_of(basis: &[Monomial]) -> HashMap<&Monomial, usize> {
    basis.iter().enumerate().map(|(i, m)| (m, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_count(space: &ConeSpace, d: i64) -> usize {
        if d < 0 {
            return 0;
        }
        let w = space.x_weights();
        let len = w.len();
        let mut count = 0;
        let mut idx = vec![0i64; len];
        loop {
            if w.iter().zip(&idx).map(|(a, b)| a * b).sum::<i64>() == d {
                count += 1;
            }
            let mut p = 0;
            loop {
                if p == len {
                    return count;
                }
                idx[p] += 1;
                if idx[p] <= d {
                    break;
                }
                idx[p] = 0;
                p += 1;
            }
        }
    }

    #[test]
    fn make_space_examples() {
        assert_eq!(ConeSpace::new(3, 3).unwrap().canonical_degree(), -6);
        assert_eq!(ConeSpace::new(2, 2).unwrap().canonical_degree(), -4);
        assert_eq!(ConeSpace::new(3, 1).unwrap().canonical_degree(), -4);
        assert!(ConeSpace::new(1, 3).is_err());
        assert!(ConeSpace::new(3, 0).is_err());
    }

    #[test]
    fn monomial_counts() {
        let x = ConeSpace::new(3, 3).unwrap();
        assert_eq!(x.weighted_monomials(0), vec![Monomial::one(4)]);
        assert_eq!(x.weighted_monomials(3).len(), 11);
        assert_eq!(x.weighted_monomials(2).len(), 6);
        assert!(x.weighted_monomials(-1).is_empty());
        for d in -3..12 {
            assert_eq!(x.weighted_monomials(d).len(), brute_count(&x, d), "d = {d}");
        }
    }

    #[test]
    fn basis_order_is_descending_lex() {
        let x = ConeSpace::new(3, 3).unwrap();
        let b = x.weighted_monomials(3);
        assert_eq!(b[0].exponents, vec![3, 0, 0, 0]);
        assert_eq!(b.last().unwrap().exponents, vec![0, 0, 0, 1]);
        assert!(b.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn laurent_examples() {
        let x = ConeSpace::new(3, 3).unwrap();
        assert_eq!(
            x.laurent_top_basis(-6),
            vec![Monomial::new(vec![-1, -1, -1, -1])]
        );
        assert_eq!(x.laurent_top_basis(-8).len(), 6);
        assert!(x.laurent_top_basis(0).is_empty());
        for m in x.laurent_top_basis(-11) {
            assert!(m.is_strictly_negative());
            assert_eq!(x.x_degree(&m), -11);
        }
    }

    #[test]
    fn cohomology_examples() {
        let x = ConeSpace::new(3, 3).unwrap();
        assert_eq!(x.coh_dim_ox(2, 0).unwrap(), 6);
        assert_eq!(x.coh_dim_ox(-6, 3).unwrap(), 1);
        assert_eq!(x.coh_dim_ox(1, 1).unwrap(), 0);
        assert!(x.coh_dim_ox(0, 4).is_err());
        assert_eq!(x.coh_dim_oz(2, 0).unwrap(), 6);
        assert_eq!(x.coh_dim_oz(-5, 2).unwrap(), 6);
        assert_eq!(x.coh_dim_oz(3, 0).unwrap(), 10);
        assert!(x.coh_dim_oz(0, 3).is_err());
    }

    #[test]
    fn z_bases_match_binomials() {
        for (n, m) in [(2usize, 2i64), (3, 3), (4, 2)] {
            let s = ConeSpace::new(n, m).unwrap();
            for e in -9..9 {
                assert_eq!(s.z_monomials(e).len(), s.coh_dim_oz(e, 0).unwrap());
                assert_eq!(
                    s.z_laurent_top_basis(e).len(),
                    s.coh_dim_oz(e, n - 1).unwrap()
                );
            }
        }
    }

    #[test]
    fn serre_and_restriction_identities() {
        for (n, m) in [(2usize, 2i64), (3, 3), (3, 1), (2, 5)] {
            let s = ConeSpace::new(n, m).unwrap();
            let k = s.canonical_degree();
            for d in -12..12 {
                assert_eq!(s.coh_dim_ox(d, 0).unwrap(), s.coh_dim_ox(-d + k, n).unwrap());
                assert_eq!(
                    s.coh_dim_ox(d, 0).unwrap() - s.coh_dim_ox(d - m, 0).unwrap(),
                    s.coh_dim_oz(d, 0).unwrap()
                );
                // Euler characteristic of O_Z(e) is the polynomial binomial(e+n-1, n-1).
                let chi = s.coh_dim_oz(d, 0).unwrap() as i128
                    + if n % 2 == 0 { -1 } else { 1 } * s.coh_dim_oz(d, n - 1).unwrap() as i128;
                let r = (n - 1) as i128;
                let mut poly = num::BigRational::one();
                for j in 0..r {
                    poly *= BigRational::from_integer((d as i128 + r - j).into());
                    poly /= BigRational::from_integer((j + 1).into());
                }
                assert_eq!(poly, BigRational::from_integer(chi.into()), "n={n} e={d}");
            }
        }
    }

    #[test]
    fn restriction_drops_cone_variable() {
        let one = BigRational::one();
        let p = vec![
            (Monomial::new(vec![1, 0, 0, 1]), one.clone()),
            (Monomial::new(vec![4, 0, 0, 0]), one.clone()),
        ];
        let z = ZPoly::restrict_from_x(3, 4, &p);
        assert_eq!(z.terms.len(), 1);
        assert!(z.terms.contains_key(&Monomial::new(vec![4, 0, 0])));
    }
}
