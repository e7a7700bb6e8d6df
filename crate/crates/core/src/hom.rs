//! Closed-form graded Hom spaces between atoms, and the structural maps between them.
//!
//! Atoms are the twists `O_X(d)` and `O_Z(e)`. Each graded piece `Hom^i(A, B)`
//! comes with an explicit labelled basis chosen by one of the rules below:
//!
//! | rule | pair | `Hom^i` |
//! |------|------|---------|
//! | R1 | `O_X(a)` invertible, `O_X(b)` | `H^i(X, O(b-a))` |
//! | R0 | `O_X(a)`, `O_X(b)`, degree 0 only | `H^0(X, O(b-a))` |
//! | R2 | `O_X(a)`, `O_Z(e)` | `H^i(Z, O(e-a))` |
//! | R3 | `O_Z(e)`, `O_Z(f)` | `H^i(Z, O(f-e)) + H^{i-1}(Z, O(f-e+m))` |
//! | R4 | `O_Z(e)`, `O_X(b)` invertible | `H^{n-i}(Z, O(e-(n+m)-b))^*` |
//!
//! Pairs outside these rules are refused with [`Error::OutOfValidity`].
//!
//! In R3 the first summand (labels `q:`) is the quotient `Ext^i(O_X(e), O_Z(f))`
//! and the second (labels `nu:`) is the normal-bundle part, which is the image
//! of the connecting map of `0 -> O_X(e-m) -> O_X(e) -> O_Z(e) -> 0`.
//!
//! Degree-`n` maps out of R4 spaces are written as transposes through the
//! residue pairing; degree-1 maps out of R4 spaces go through the cone
//! presentation of `Ext^1(O_Z(e), -)`.

use std::fmt;

use num::{BigRational, One};
use serde::{Deserialize, Serialize};

use crate::cone::{index_of, ConeSpace, Monomial, ZPoly};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, PresentedMap, PresentedSpace};

/// A generator sheaf: a twist of the cone or a twist of the section at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Atom {
    OX(i64),
    OZ(i64),
}

impl Atom {
    pub fn twist(&self) -> i64 {
        match *self {
            Atom::OX(d) | Atom::OZ(d) => d,
        }
    }

    /// The same kind of atom, twisted by `k`.
    pub fn shifted(&self, k: i64) -> Atom {
        match *self {
            Atom::OX(d) => Atom::OX(d + k),
            Atom::OZ(e) => Atom::OZ(e + k),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            Atom::OX(_) => 1,
            Atom::OZ(_) => 0,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::OX(d) => write!(f, "O_X({d})"),
            Atom::OZ(e) => write!(f, "O_Z({e})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    R0,
    R1,
    R2,
    R3,
    R4,
    /// Cone presentation of `Ext^1(O_Z(e), T)`.
    CP,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::R0 => "R0",
            Rule::R1 => "R1",
            Rule::R2 => "R2",
            Rule::R3 => "R3",
            Rule::R4 => "R4",
            Rule::CP => "CP",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub struct HomDegree {
    pub degree: usize,
    pub rule: Rule,
    pub space: PresentedSpace,
}

/// `Hom^*(A, B)` for two atoms, degrees `0..=n`.
#[derive(Debug, Clone)]
pub struct GradedHomSpace {
    pub source: Atom,
    pub target: Atom,
    pub degrees: Vec<HomDegree>,
}

impl GradedHomSpace {
    /// The degree-`i` piece; zero outside `0..=n`.
    pub fn degree(&self, i: usize) -> PresentedSpace {
        self.degrees
            .get(i)
            .map(|d| d.space.clone())
            .unwrap_or_else(PresentedSpace::zero)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.space.dim()).collect()
    }
}

/// Explicit basis data behind one graded piece.
enum AtomBasis {
    /// `H^0` or `H^n` of a twist on `X`.
    X(Vec<Monomial>),
    /// `H^0` or `H^{n-1}` of a twist on `Z`.
    Z(Vec<Monomial>),
    /// R3: quotient part and normal part.
    ZPair { q: Vec<Monomial>, nu: Vec<Monomial> },
    /// R4: dual basis of a cohomology group on `Z`.
    ZDual(Vec<Monomial>),
}

impl AtomBasis {
    fn labels(&self) -> Vec<String> {
        match self {
            AtomBasis::X(b) => b.iter().map(|m| m.to_string()).collect(),
            AtomBasis::Z(b) => b.iter().map(z_label).collect(),
            AtomBasis::ZPair { q, nu } => q
                .iter()
                .map(|m| format!("q:{}", z_label(m)))
                .chain(nu.iter().map(|m| format!("nu:{}", z_label(m))))
                .collect(),
            AtomBasis::ZDual(b) => b.iter().map(|m| format!("({})^*", z_label(m))).collect(),
        }
    }

    fn space(&self) -> PresentedSpace {
        PresentedSpace::direct(self.labels())
    }
}

fn z_label(m: &Monomial) -> String {
    format!("z:{m}")
}

fn non_invertible_source(a: i64) -> Error {
    Error::OutOfValidity(format!(
        "higher Ext out of the non-invertible twist O_X({a}) is not covered by any rule"
    ))
}

fn invertible_source(space: &ConeSpace, a: i64) -> Result<()> {
    if space.is_invertible_twist(a) {
        Ok(())
    } else {
        Err(non_invertible_source(a))
    }
}

fn invertible_target(space: &ConeSpace, b: i64) -> Result<()> {
    if space.is_invertible_twist(b) {
        Ok(())
    } else {
        Err(Error::OutOfValidity(format!(
            "Ext from O_Z into the non-invertible twist O_X({b}) is not covered by any rule"
        )))
    }
}

/// Basis of `Hom^i(A, B)`; `allow_r0` admits degree 0 between arbitrary cone twists.
fn atom_basis(space: &ConeSpace, a: Atom, b: Atom, i: usize, allow_r0: bool) -> Result<(AtomBasis, Rule)> {
    let n = space.n();
    let m = space.m();
    let k = space.canonical_degree();
    Ok(match (a, b) {
        (Atom::OX(a), Atom::OX(b)) => {
            let rule = if space.is_invertible_twist(a) {
                Rule::R1
            } else if allow_r0 && i == 0 {
                Rule::R0
            } else {
                return Err(non_invertible_source(a));
            };
            (AtomBasis::X(space.x_basis(b - a, i)), rule)
        }
        (Atom::OX(a), Atom::OZ(e)) => (AtomBasis::Z(space.z_basis(e - a, i as isize)), Rule::R2),
        (Atom::OZ(e), Atom::OZ(f)) => (
            AtomBasis::ZPair {
                q: space.z_basis(f - e, i as isize),
                nu: space.z_basis(f - e + m, i as isize - 1),
            },
            Rule::R3,
        ),
        (Atom::OZ(e), Atom::OX(b)) => {
            invertible_target(space, b)?;
            let basis = if i <= n {
                space.z_basis(e + k - b, (n - i) as isize)
            } else {
                Vec::new()
            };
            (AtomBasis::ZDual(basis), Rule::R4)
        }
    })
}

/// Full graded `Hom^*(A, B)` between atoms.
pub fn hom_atoms(space: &ConeSpace, a: Atom, b: Atom) -> Result<GradedHomSpace> {
    let degrees = (0..=space.n())
        .map(|i| {
            let (basis, rule) = atom_basis(space, a, b, i, false)?;
            Ok(HomDegree {
                degree: i,
                rule,
                space: basis.space(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GradedHomSpace {
        source: a,
        target: b,
        degrees,
    })
}

/// One graded piece, admitting R0 in degree 0.
pub fn hom_atoms_degree(space: &ConeSpace, a: Atom, b: Atom, i: usize) -> Result<(PresentedSpace, Rule)> {
    if i > space.n() {
        return Ok((PresentedSpace::zero(), Rule::R1));
    }
    let (basis, rule) = atom_basis(space, a, b, i, true)?;
    Ok((basis.space(), rule))
}

fn monomial_matrix(
    src: &[Monomial],
    tgt: &[Monomial],
    mut image: impl FnMut(&Monomial) -> Vec<(Monomial, BigRational)>,
) -> Matrix {
    let idx = index_of(tgt);
    let mut out = Matrix::zeros(tgt.len(), src.len());
    for (c, s) in src.iter().enumerate() {
        for (t, coef) in image(s) {
            let r = *idx
                .get(&t)
                .unwrap_or_else(|| panic!("image term {t} outside the target basis"));
            out.add_to(r, c, &coef);
        }
    }
    out
}

/// Multiplication by a section on `H^i(Z, O_Z(c))`, for `i = 0` or `i = n-1`.
pub fn z_multiply(space: &ConeSpace, i: usize, c: i64, poly: &ZPoly) -> Matrix {
    let src = space.z_basis(c, i as isize);
    let tgt = space.z_basis(c + poly.degree, i as isize);
    let top = i != 0;
    monomial_matrix(&src, &tgt, |u| {
        poly.terms
            .iter()
            .map(|(v, coef)| (u.mul(v), coef.clone()))
            .filter(|(w, _)| !top || w.is_strictly_negative())
            .collect()
    })
}

/// `H^0(X, O_X(c)) -> H^0(Z, O_Z(c + deg))`, `p |-> section * p|_Z`.
pub fn restrict_multiply(space: &ConeSpace, c: i64, section: &ZPoly) -> Matrix {
    let n = space.n();
    let src = space.weighted_monomials(c);
    let tgt = space.z_monomials(c + section.degree);
    monomial_matrix(&src, &tgt, |u| {
        if u.exponents[n] != 0 {
            return Vec::new();
        }
        let z = Monomial::new(u.exponents[..n].to_vec());
        section
            .terms
            .iter()
            .map(|(v, coef)| (z.mul(v), coef.clone()))
            .collect()
    })
}

/// Restriction `Hom(O_X(a), O_X(e)) -> Hom(O_X(a), O_Z(e))`, i.e. `H^0(X, O(e-a)) -> H^0(Z, O(e-a))`.
pub fn restrict_map(space: &ConeSpace, a: i64, e: i64) -> Result<PresentedMap> {
    let (src, _) = hom_atoms_degree(space, Atom::OX(a), Atom::OX(e), 0)?;
    let (tgt, _) = hom_atoms_degree(space, Atom::OX(a), Atom::OZ(e), 0)?;
    let mat = restrict_multiply(space, e - a, &ZPoly::constant_one(space.n()));
    Ok(PresentedMap::new(src, tgt, mat)?)
}

fn xn_monomial(space: &ConeSpace) -> Monomial {
    let mut e = vec![0; space.n() + 1];
    e[space.n()] = 1;
    Monomial::new(e)
}

/// Multiplication by `x_n` on `H^i(X, O_X(c))` for `i = 0` or `i = n`.
pub fn xn_multiply(space: &ConeSpace, i: usize, c: i64) -> Matrix {
    let src = space.x_basis(c, i);
    let tgt = space.x_basis(c + space.m(), i);
    let xn = xn_monomial(space);
    let top = i != 0;
    monomial_matrix(&src, &tgt, |u| {
        let w = u.mul(&xn);
        if top && !w.is_strictly_negative() {
            Vec::new()
        } else {
            vec![(w, BigRational::one())]
        }
    })
}

/// Connecting map `H^{n-1}(Z, O_Z(d)) -> H^n(X, O_X(d-m))`, multiplication by `x_n^{-1}`.
pub fn connecting_map(space: &ConeSpace, d: i64) -> Result<PresentedMap> {
    let n = space.n();
    let src = space.z_laurent_top_basis(d);
    let tgt = space.laurent_top_basis(d - space.m());
    let mat = monomial_matrix(&src, &tgt, |u| {
        let mut e = u.exponents.clone();
        e.push(-1);
        vec![(Monomial::new(e), BigRational::one())]
    });
    let s = PresentedSpace::direct(src.iter().map(z_label).collect());
    let t = PresentedSpace::direct(tgt.iter().map(|m| m.to_string()).collect());
    debug_assert_eq!(n + 1, tgt.first().map_or(n + 1, |m| m.len()));
    Ok(PresentedMap::new(s, t, mat)?)
}

/// Residue pairing `H^0(X, O(d)) x H^n(X, O(-d-(n+m))) -> k` as a matrix
/// (rows: monomials, columns: Laurent monomials).
pub fn serre_pairing(space: &ConeSpace, d: i64) -> Matrix {
    let rows = space.weighted_monomials(d);
    let cols = space.laurent_top_basis(-d + space.canonical_degree());
    pairing_matrix(&rows, &cols)
}

/// The same pairing on `Z`: `H^0(Z, O(c)) x H^{n-1}(Z, O(-c-n)) -> k`.
pub fn serre_pairing_z(space: &ConeSpace, c: i64) -> Matrix {
    let rows = space.z_monomials(c);
    let cols = space.z_laurent_top_basis(-c - space.n() as i64);
    pairing_matrix(&rows, &cols)
}

fn pairing_matrix(rows: &[Monomial], cols: &[Monomial]) -> Matrix {
    let idx = index_of(cols);
    let mut out = Matrix::zeros(rows.len(), cols.len());
    for (r, u) in rows.iter().enumerate() {
        if let Some(&c) = idx.get(&u.residue_partner()) {
            out.set(r, c, BigRational::one());
        }
    }
    out
}

/// A morphism `O_X(source_twist) -> O_Z(source_twist + poly.degree)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZSection {
    pub source_twist: i64,
    pub poly: ZPoly,
}

impl ZSection {
    pub fn target_twist(&self) -> i64 {
        self.source_twist + self.poly.degree
    }
}

fn unmodelled(what: &str, i: usize, src: usize, tgt: usize) -> Result<Matrix> {
    if src == 0 || tgt == 0 {
        Ok(Matrix::zeros(tgt, src))
    } else {
        Err(Error::Inconsistent(format!(
            "no explicit model for {what} in degree {i} ({src} -> {tgt})"
        )))
    }
}

/// Precomposition with `sigma: O_X(a) -> O_Z(e)`:
/// `Hom^i(O_Z(e), B) -> Hom^i(O_X(a), B)`.
pub fn precompose(space: &ConeSpace, i: usize, sigma: &ZSection, b: Atom) -> Result<PresentedMap> {
    let n = space.n();
    let a = sigma.source_twist;
    let e = sigma.target_twist();
    let (src_basis, _) = atom_basis(space, Atom::OZ(e), b, i, true)?;
    let (tgt_basis, _) = atom_basis(space, Atom::OX(a), b, i, true)?;
    let src = src_basis.space();
    let tgt = tgt_basis.space();
    let mat = match (b, &src_basis) {
        (Atom::OZ(f), AtomBasis::ZPair { q, nu }) => {
            // Kills the normal part, multiplies on the quotient part.
            let mult = z_multiply(space, i, f - e, &sigma.poly);
            let mut out = Matrix::zeros(tgt.ambient_dim(), q.len() + nu.len());
            out.set_block(0, 0, &mult);
            out
        }
        (Atom::OX(b), AtomBasis::ZDual(mus)) if i == n => {
            // Dual of p |-> sigma * p|_Z on H^0(X, O(a-b+K)) -> H^0(Z, O(e-b+K)),
            // read through the residue pairing on X.
            invertible_source(space, a)?;
            let c = a - b + space.canonical_degree();
            let rm = restrict_multiply(space, c, &sigma.poly);
            let ps = space.weighted_monomials(c);
            let pidx = index_of(&ps);
            let ls = space.laurent_top_basis(b - a);
            let mut out = Matrix::zeros(ls.len(), mus.len());
            for (r, l) in ls.iter().enumerate() {
                let p = pidx[&l.residue_partner()];
                for col in 0..mus.len() {
                    out.set(r, col, rm.get(col, p).clone());
                }
            }
            out
        }
        _ => unmodelled("precomposition", i, src.dim(), tgt.dim())?,
    };
    Ok(PresentedMap::new(src, tgt, mat)?)
}

/// Postcomposition with `tau: O_X(b) -> O_Z(f)`:
/// `Hom^i(A, O_X(b)) -> Hom^i(A, O_Z(f))`.
pub fn postcompose(space: &ConeSpace, i: usize, a: Atom, tau: &ZSection) -> Result<PresentedMap> {
    let n = space.n();
    let b = tau.source_twist;
    let f = tau.target_twist();
    let (src_basis, _) = atom_basis(space, a, Atom::OX(b), i, true)?;
    let (tgt_basis, _) = atom_basis(space, a, Atom::OZ(f), i, true)?;
    let src = src_basis.space();
    let tgt = tgt_basis.space();
    let mat = match (a, &src_basis, &tgt_basis) {
        (Atom::OX(a), _, _) if i == 0 => restrict_multiply(space, b - a, &tau.poly),
        (Atom::OZ(e), AtomBasis::ZDual(ls), AtomBasis::ZPair { q, nu }) if i == 1 => {
            // Through the cone presentation: the dual of l in H^{n-1}(Z) is the
            // class of its residue partner u in H^0(Z, O(b-e+m)), sent to tau * u.
            if !q.is_empty() && !ls.is_empty() {
                return Err(Error::PresentationMismatch {
                    what: format!("Ext^1(O_Z({e}), O_Z({f}))"),
                    presented: nu.len(),
                    expected: q.len() + nu.len(),
                });
            }
            let nidx = index_of(nu);
            let mut out = Matrix::zeros(q.len() + nu.len(), ls.len());
            for (col, l) in ls.iter().enumerate() {
                let u = l.residue_partner();
                for (v, coef) in &tau.poly.terms {
                    let r = q.len() + nidx[&u.mul(v)];
                    out.add_to(r, col, coef);
                }
            }
            out
        }
        (Atom::OZ(e), AtomBasis::ZDual(mus), AtomBasis::ZPair { q, nu }) if i == n => {
            // Dual of w |-> tau * w on H^0(Z, O(e-f+K)) -> H^0(Z, O(e-b+K)),
            // with the normal part identified through the residue pairing on Z.
            let c = e - f + space.canonical_degree();
            let ws = space.z_monomials(c);
            let mult = z_multiply(space, 0, c, &tau.poly);
            let widx = index_of(&ws);
            let mut out = Matrix::zeros(q.len() + nu.len(), mus.len());
            for (r, l) in nu.iter().enumerate() {
                let w = widx[&l.residue_partner()];
                for col in 0..mus.len() {
                    out.set(q.len() + r, col, mult.get(col, w).clone());
                }
            }
            out
        }
        _ => unmodelled("postcomposition", i, src.dim(), tgt.dim())?,
    };
    Ok(PresentedMap::new(src, tgt, mat)?)
}

/// `Ext^1(O_Z(e), T)` presented as the cokernel of `x_n`-multiplication
/// `Hom(O_X(e), T) -> Hom(O_X(e-m), T)`, with its comparison isomorphism to
/// the closed-form degree-1 space.
#[derive(Debug, Clone)]
pub struct ConePresentation {
    pub e: i64,
    pub targets: Vec<Atom>,
    pub relation: PresentedMap,
    pub presented: PresentedSpace,
    pub comparison: PresentedMap,
}

pub fn cone_presentation(space: &ConeSpace, e: i64, targets: &[Atom]) -> Result<ConePresentation> {
    let m = space.m();
    let n = space.n();
    let mut rel_src = Vec::new();
    let mut amb = Vec::new();
    let mut hom1 = Vec::new();
    let mut rel_blocks = Vec::new();
    let mut conn_blocks = Vec::new();
    for (k, &t) in targets.iter().enumerate() {
        let tag = format!("[{k}]");
        let (s, _) = hom_atoms_degree(space, Atom::OX(e), t, 0)?;
        let (a, _) = hom_atoms_degree(space, Atom::OX(e - m), t, 0)?;
        let (h, _) = hom_atoms_degree(space, Atom::OZ(e), t, 1)?;
        let (rel, conn) = match t {
            Atom::OX(b) => {
                invertible_target(space, b)?;
                let rel = xn_multiply(space, 0, b - e);
                // Restrict to Z, then pair with H^{n-1}(Z, O(e-b+K)).
                let src = space.weighted_monomials(b - e + m);
                let duals = space.z_basis(e - b + space.canonical_degree(), n as isize - 1);
                let didx = index_of(&duals);
                let mut conn = Matrix::zeros(duals.len(), src.len());
                for (c, p) in src.iter().enumerate() {
                    if p.exponents[n] == 0 {
                        let z = Monomial::new(p.exponents[..n].to_vec());
                        conn.set(didx[&z.residue_partner()], c, BigRational::one());
                    }
                }
                (rel, conn)
            }
            Atom::OZ(f) => {
                // x_n restricted to Z is the zero polynomial.
                let xn_on_z = ZPoly::restrict_from_x(n, m, &[(xn_monomial(space), BigRational::one())]);
                let rel = z_multiply(space, 0, f - e, &xn_on_z);
                let q = space.z_basis(f - e, 1).len();
                let nu = space.z_monomials(f - e + m).len();
                let mut conn = Matrix::zeros(q + nu, nu);
                conn.set_block(q, 0, &Matrix::identity(nu));
                (rel, conn)
            }
        };
        rel_src.push((tag.clone(), s));
        amb.push((tag.clone(), a));
        hom1.push((tag, h));
        rel_blocks.push(rel);
        conn_blocks.push(conn);
    }
    let sum = |parts: &Vec<(String, PresentedSpace)>| {
        PresentedSpace::direct_sum(&parts.iter().map(|(t, s)| (t.clone(), s)).collect::<Vec<_>>())
    };
    let rel_src = sum(&rel_src);
    let ambient = sum(&amb);
    let hom1 = sum(&hom1);
    let rel_mat = Matrix::block_diag(&rel_blocks.iter().collect::<Vec<_>>());
    let conn_mat = Matrix::block_diag(&conn_blocks.iter().collect::<Vec<_>>());
    let relation = PresentedMap::new(rel_src, ambient.clone(), rel_mat)?;
    let presented = relation.cokernel();
    let what = format!(
        "Ext^1(O_Z({e}), {})",
        targets.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" + ")
    );
    if presented.dim() != hom1.dim() {
        return Err(Error::PresentationMismatch {
            what,
            presented: presented.dim(),
            expected: hom1.dim(),
        });
    }
    // The comparison map is well defined only if the relations die.
    let comparison = PresentedMap::new(presented.clone(), hom1, conn_mat)?;
    if comparison.rank() != presented.dim() {
        return Err(Error::Inconsistent(format!("{what}: comparison map is not an isomorphism")));
    }
    Ok(ConePresentation {
        e,
        targets: targets.to_vec(),
        relation,
        presented,
        comparison,
    })
}

/// Postcomposition by `tau: O_X(b) -> O_Z(f)` acting on cone presentations
/// of `Ext^1(O_Z(e), O_X(b)) -> Ext^1(O_Z(e), O_Z(f))`.
pub fn cone_postcompose(space: &ConeSpace, e: i64, tau: &ZSection) -> Result<PresentedMap> {
    let src = cone_presentation(space, e, &[Atom::OX(tau.source_twist)])?;
    let tgt = cone_presentation(space, e, &[Atom::OZ(tau.target_twist())])?;
    let ambient = postcompose(space, 0, Atom::OX(e - space.m()), tau)?;
    Ok(PresentedMap::new(src.presented, tgt.presented, ambient.matrix().clone())?)
}

/// Dimension of `Hom^i(A, B)` for atoms, zero outside `0..=n`.
pub fn atom_dims(space: &ConeSpace, a: Atom, b: Atom) -> Result<Vec<usize>> {
    Ok(hom_atoms(space, a, b)?.dims())
}
