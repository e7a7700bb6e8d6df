use serde::{Deserialize, Serialize};

use crate::cone::ConeSpace;
use crate::error::{Error, Result};
use crate::hom::{hom_atoms, Atom};
use crate::linalg::{PresentedMap, PresentedSpace};

use super::ladder::{ladder_propagate, Ladder, LadderCertificate, LadderRow};
use super::les::{les_hom_contra, les_hom_cov, LesMap, LesTerm, LongExactSequence};
use super::maps::post_eval;
use super::{KernelBundle, SheafObject};

/// Dimensions of `Hom^i(A, B)` for `i = 0..=n`, with the steps that produced them.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct HomComputation {
    pub dims: Vec<usize>,
    pub trace: Vec<String>,
    pub ladders: Vec<LadderCertificate>,
    /// Number of long exact sequences assembled and checked for exactness.
    pub sequences_checked: usize,
}

impl HomComputation {
    fn zero(n: usize) -> Self {
        HomComputation {
            dims: vec![0; n + 1],
            ..Default::default()
        }
    }

    fn absorb(&mut self, other: HomComputation, times: usize) {
        for (d, o) in self.dims.iter_mut().zip(&other.dims) {
            *d += times * o;
        }
        self.trace.extend(other.trace);
        self.ladders.extend(other.ladders);
        self.sequences_checked += other.sequences_checked;
    }

    pub fn euler(&self) -> i64 {
        alternating(&self.dims)
    }

    /// True when every nonzero piece sits in degree 0.
    pub fn is_concentrated_in_degree_zero(&self) -> bool {
        self.dims.iter().skip(1).all(|&d| d == 0)
    }
}

fn alternating(dims: &[usize]) -> i64 {
    dims.iter()
        .enumerate()
        .map(|(i, &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) })
        .sum()
}

fn dims_string(dims: &[usize]) -> String {
    let parts: Vec<String> = dims.iter().map(usize::to_string).collect();
    format!("({})", parts.join(", "))
}

/// `Hom^*(A, B)`, additive in both arguments.
pub fn hom_objects(space: &ConeSpace, a: &SheafObject, b: &SheafObject) -> Result<HomComputation> {
    let n = space.n();
    match (a, b) {
        (SheafObject::Sum(parts), _) => {
            let mut acc = HomComputation::zero(n);
            for (p, k) in parts {
                acc.absorb(hom_objects(space, p, b)?, *k);
            }
            Ok(acc)
        }
        (_, SheafObject::Sum(parts)) => {
            let mut acc = HomComputation::zero(n);
            for (p, k) in parts {
                acc.absorb(hom_objects(space, a, p)?, *k);
            }
            Ok(acc)
        }
        (SheafObject::Atom(x), SheafObject::Atom(y)) => {
            let g = hom_atoms(space, *x, *y)?;
            let rules: Vec<String> = g.degrees.iter().map(|d| d.rule.to_string()).collect();
            let dims = g.dims();
            Ok(HomComputation {
                trace: vec![format!("Hom^*({x}, {y}) = {} by {}", dims_string(&dims), rules.join("/"))],
                dims,
                ..Default::default()
            })
        }
        (SheafObject::Kernel(k), SheafObject::Atom(y)) => {
            let s = les_hom_contra(space, k, &[*y])?;
            let dims = s.dims();
            Ok(HomComputation {
                trace: vec![format!("{}: {}", s.les.origin, dims_string(&dims))],
                dims,
                sequences_checked: 1,
                ..Default::default()
            })
        }
        (SheafObject::Atom(x), SheafObject::Kernel(l)) => {
            let s = les_hom_cov(space, &[*x], l)?;
            let dims = s.dims();
            Ok(HomComputation {
                trace: vec![format!("{}: {}", s.les.origin, dims_string(&dims))],
                dims,
                sequences_checked: 1,
                ..Default::default()
            })
        }
        (SheafObject::Kernel(k), SheafObject::Kernel(l)) => kernel_pair(space, k, l),
    }
}

/// `Hom^*(K_e, K_f)` from the map `beta_i: Hom^i(K_e, O^h') -> Hom^i(K_e, O_Z(f))`
/// induced by the evaluation of `K_f`: `Hom^i(K_e, K_f) = ker beta_i + coker beta_{i-1}`.
fn kernel_pair(space: &ConeSpace, k: &KernelBundle, l: &KernelBundle) -> Result<HomComputation> {
    let n = space.n();
    let free_l = l.free_part();
    let top = les_hom_contra(space, k, &free_l)?;
    let bottom = les_hom_contra(space, k, &[Atom::OZ(l.e)])?;
    let free_k = k.free_part();
    let zk = [Atom::OZ(k.e)];
    let mut trace = vec![
        format!("{}: {}", top.les.origin, dims_string(&top.dims())),
        format!("{}: {}", bottom.les.origin, dims_string(&bottom.dims())),
    ];
    let mut certs = Vec::new();
    for i in 0..=n {
        let next_top = top.known.get(i + 1).cloned();
        let next_bottom = bottom.known.get(i + 1).cloned();
        let right = post_eval(space, &zk, l, i + 1)?;
        let (top_out, bottom_out) = match (next_top, next_bottom) {
            (Some(t), Some(b)) => (t, b),
            _ => (
                PresentedMap::zero(right.source().clone(), PresentedSpace::zero()),
                PresentedMap::zero(right.target().clone(), PresentedSpace::zero()),
            ),
        };
        let ladder = Ladder {
            label: format!("Hom^{i}(ker({}), -) along the evaluation of ker({})", k.e, l.e),
            top: LadderRow {
                incoming: top.known[i].clone(),
                outgoing: top_out,
            },
            bottom: LadderRow {
                incoming: bottom.known[i].clone(),
                outgoing: bottom_out,
            },
            left: post_eval(space, &free_k, l, i)?,
            right,
            outer_left: Some(post_eval(space, &zk, l, i)?),
            outer_right: if i < n {
                Some(post_eval(space, &free_k, l, i + 1)?)
            } else {
                None
            },
        };
        let cert = ladder_propagate(&ladder)?;
        trace.push(format!(
            "degree {i}: rank {} = {} + {} ({:?})",
            cert.rank, cert.left_rank, cert.right_rank, cert.determination
        ));
        certs.push(cert);
    }
    let t = top.dims();
    let b = bottom.dims();
    let ranks: Vec<usize> = certs.iter().map(|c| c.rank).collect();
    let mut dims = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let ker = t[i] - ranks[i];
        let coker = if i == 0 { 0 } else { b[i - 1] - ranks[i - 1] };
        dims.push(ker + coker);
    }
    if b[n] != ranks[n] {
        return Err(Error::Inconsistent(format!(
            "Hom^{}(ker({}), ker({})) would be nonzero",
            n + 1,
            k.e,
            l.e
        )));
    }
    let les = rank_only_les(k, l, &dims, &t, &b, &ranks);
    les.check_exactness()?;
    trace.push(format!("{}: {}", les.origin, dims_string(&dims)));
    Ok(HomComputation {
        dims,
        trace,
        ladders: certs,
        sequences_checked: 3,
    })
}

/// `0 -> Hom^0(K, L) -> Hom^0(K, O^h) -> Hom^0(K, O_Z(f)) -> Hom^1(K, L) -> ...`
/// with ranks only.
fn rank_only_les(
    k: &KernelBundle,
    l: &KernelBundle,
    dims: &[usize],
    top: &[usize],
    bottom: &[usize],
    ranks: &[usize],
) -> LongExactSequence {
    let mut terms = Vec::new();
    let mut maps = Vec::new();
    let bare = |label: String, dim: usize| LesTerm { label, dim, space: None };
    let rank = |rank: usize| LesMap { rank, map: None };
    for i in 0..dims.len() {
        let into = if i == 0 { 0 } else { bottom[i - 1] - ranks[i - 1] };
        if i > 0 {
            maps.push(rank(into));
        }
        terms.push(bare(format!("Hom^{i}(ker({}), ker({}))", k.e, l.e), dims[i]));
        maps.push(rank(dims[i] - into));
        terms.push(bare(format!("Hom^{i}(ker({}), {}*O_X(0))", k.e, l.rank()), top[i]));
        maps.push(rank(ranks[i]));
        terms.push(bare(format!("Hom^{i}(ker({}), O_Z({}))", k.e, l.e), bottom[i]));
    }
    LongExactSequence {
        origin: format!("Hom(ker({}), -) on ker({})", k.e, l.e),
        terms,
        maps,
    }
}

/// `chi(A, B) = sum (-1)^i dim Hom^i(A, B)`.
pub fn euler_form(space: &ConeSpace, a: &SheafObject, b: &SheafObject) -> Result<i64> {
    Ok(hom_objects(space, a, b)?.euler())
}
