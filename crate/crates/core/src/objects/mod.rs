//! Sheaf objects built from atoms: finite direct sums and kernel bundles
//! `K_e = ker(O_X^h -> O_Z(e))`, together with the long exact sequences and
//! ladder arguments used to compute `Hom^*` between them.

mod compute;
mod ladder;
mod les;
mod maps;

use std::fmt;

use num::BigRational;

use crate::cone::{ConeSpace, ZPoly};
use crate::error::{Error, Result};
use crate::hom::{Atom, ZSection};
use crate::linalg::Matrix;

pub use compute::{euler_form, hom_objects, HomComputation};
pub use ladder::{ladder_propagate, Determination, Ladder, LadderCertificate, LadderRow};
pub use les::{les_hom_contra, les_hom_cov, les_restriction, LesMap, LesTerm, LongExactSequence, SplitLes};
pub use maps::{hom_sum_space, post_eval, pre_eval};

/// `ker(O_X^h -> O_Z(e))` for a spanning family of sections of `O_Z(e)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelBundle {
    pub e: i64,
    pub sections: Vec<ZPoly>,
    /// True when `sections` is the monomial basis of `H^0(Z, O_Z(e))` in basis order.
    pub canonical: bool,
}

impl KernelBundle {
    pub fn rank(&self) -> usize {
        self.sections.len()
    }

    /// The components `O_X -> O_Z(e)` of the evaluation map.
    pub fn evaluation(&self) -> Vec<ZSection> {
        self.sections
            .iter()
            .map(|p| ZSection {
                source_twist: 0,
                poly: p.clone(),
            })
            .collect()
    }

    /// The free summand `O_X^h` as a list of atoms.
    pub fn free_part(&self) -> Vec<Atom> {
        vec![Atom::OX(0); self.rank()]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SheafObject {
    Atom(Atom),
    /// Summands with multiplicities.
    Sum(Vec<(SheafObject, usize)>),
    Kernel(KernelBundle),
}

impl SheafObject {
    pub fn ox(d: i64) -> Self {
        SheafObject::Atom(Atom::OX(d))
    }

    pub fn oz(e: i64) -> Self {
        SheafObject::Atom(Atom::OZ(e))
    }

    pub fn sum(parts: Vec<SheafObject>) -> Self {
        SheafObject::Sum(parts.into_iter().map(|p| (p, 1)).collect())
    }

    pub fn rank(&self) -> usize {
        match self {
            SheafObject::Atom(a) => a.rank(),
            SheafObject::Sum(parts) => parts.iter().map(|(p, k)| k * p.rank()).sum(),
            SheafObject::Kernel(k) => k.rank(),
        }
    }

    /// Indecomposable pieces (atoms and kernels), with multiplicities flattened.
    pub fn summands(&self) -> Vec<SheafObject> {
        match self {
            SheafObject::Sum(parts) => parts
                .iter()
                .flat_map(|(p, k)| {
                    let inner = p.summands();
                    (0..*k).flat_map(move |_| inner.clone())
                })
                .collect(),
            other => vec![other.clone()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.summands().is_empty()
    }
}

impl fmt::Display for SheafObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SheafObject::Atom(a) => write!(f, "{a}"),
            SheafObject::Kernel(k) if k.canonical => write!(f, "ker({})", k.e),
            SheafObject::Kernel(k) => write!(f, "ker({}; {} sections)", k.e, k.rank()),
            SheafObject::Sum(parts) if parts.is_empty() => f.write_str("0"),
            SheafObject::Sum(parts) => {
                for (idx, (p, k)) in parts.iter().enumerate() {
                    if idx > 0 {
                        f.write_str(" + ")?;
                    }
                    let wrap = matches!(p, SheafObject::Sum(_));
                    match (*k, wrap) {
                        (1, false) => write!(f, "{p}")?,
                        (1, true) => write!(f, "({p})")?,
                        (k, false) => write!(f, "{k}*{p}")?,
                        (k, true) => write!(f, "{k}*({p})")?,
                    }
                }
                Ok(())
            }
        }
    }
}

fn check_kernel_twist(space: &ConeSpace, e: i64) -> Result<()> {
    if e <= 0 || e >= space.m() {
        return Err(Error::InvalidObject(format!(
            "kernel bundles need 0 < e < m = {}, got e = {e}",
            space.m()
        )));
    }
    Ok(())
}

/// `K_e` with the canonical monomial sections of `O_Z(e)`.
pub fn kernel_bundle(space: &ConeSpace, e: i64) -> Result<SheafObject> {
    check_kernel_twist(space, e)?;
    let sections = space.z_monomials(e).into_iter().map(ZPoly::monomial).collect();
    Ok(SheafObject::Kernel(KernelBundle {
        e,
        sections,
        canonical: true,
    }))
}

/// `K_e` for a custom family of sections, which must span `H^0(Z, O_Z(e))`.
pub fn kernel_bundle_with_sections(space: &ConeSpace, e: i64, sections: Vec<ZPoly>) -> Result<SheafObject> {
    check_kernel_twist(space, e)?;
    let basis = space.z_monomials(e);
    if let Some(bad) = sections.iter().find(|p| p.degree != e) {
        return Err(Error::InvalidObject(format!(
            "section of degree {} given for O_Z({e})",
            bad.degree
        )));
    }
    let idx = crate::cone::index_of(&basis);
    let mut coeffs = Matrix::zeros(basis.len(), sections.len());
    for (c, p) in sections.iter().enumerate() {
        for (mono, v) in &p.terms {
            let r = *idx.get(mono).ok_or_else(|| {
                Error::InvalidObject(format!("monomial {mono} is not a section of O_Z({e})"))
            })?;
            coeffs.set(r, c, v.clone());
        }
    }
    if coeffs.rank() != basis.len() {
        return Err(Error::InvalidObject(format!(
            "sections span {} of the {} dimensions of H^0(Z, O_Z({e})); the evaluation map is not surjective",
            coeffs.rank(),
            basis.len()
        )));
    }
    let canonical = sections.len() == basis.len()
        && sections.iter().zip(&basis).all(|(p, mono)| {
            p.terms.len() == 1 && p.terms.get(mono) == Some(&BigRational::from_integer(1.into()))
        });
    Ok(SheafObject::Kernel(KernelBundle { e, sections, canonical }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::Monomial;

    #[test]
    fn kernel_ranks() {
        let x = ConeSpace::new(3, 3).unwrap();
        assert_eq!(kernel_bundle(&x, 1).unwrap().rank(), 3);
        assert_eq!(kernel_bundle(&x, 2).unwrap().rank(), 6);
        assert!(kernel_bundle(&x, 0).is_err());
        assert!(kernel_bundle(&x, 3).is_err());
    }

    #[test]
    fn custom_sections_must_span() {
        let x = ConeSpace::new(2, 2).unwrap();
        let y0 = ZPoly::monomial(Monomial::new(vec![1, 0]));
        let y1 = ZPoly::monomial(Monomial::new(vec![0, 1]));
        assert!(kernel_bundle_with_sections(&x, 1, vec![y0.clone()]).is_err());
        let k = kernel_bundle_with_sections(&x, 1, vec![y0.clone(), y1.clone()]).unwrap();
        assert_eq!(k, kernel_bundle(&x, 1).unwrap());
        let k = kernel_bundle_with_sections(&x, 1, vec![y0.clone(), y1, y0]).unwrap();
        assert_eq!(k.rank(), 3);
        assert_eq!(k.to_string(), "ker(1; 3 sections)");
    }

    #[test]
    fn display_and_summands() {
        let x = ConeSpace::new(3, 3).unwrap();
        let f = kernel_bundle(&x, 1).unwrap();
        let s = SheafObject::Sum(vec![(f, 1), (SheafObject::ox(0), 2)]);
        assert_eq!(s.to_string(), "ker(1) + 2*O_X(0)");
        assert_eq!(s.summands().len(), 3);
        assert_eq!(s.rank(), 5);
    }
}
