use crate::cone::ConeSpace;
use crate::error::{Error, Result};
use crate::hom::{connecting_map, hom_atoms_degree, restrict_map, xn_multiply, Atom};
use crate::linalg::{Matrix, PresentedMap, PresentedSpace};

use super::maps::{post_eval, pre_eval};
use super::KernelBundle;

#[derive(Debug, Clone)]
pub struct LesTerm {
    pub label: String,
    pub dim: usize,
    pub space: Option<PresentedSpace>,
}

/// The map from term `t` to term `t + 1`. `map` is absent when only the rank is known.
#[derive(Debug, Clone)]
pub struct LesMap {
    pub rank: usize,
    pub map: Option<PresentedMap>,
}

/// A finite exact sequence `0 -> T_0 -> T_1 -> ... -> T_last -> 0`.
#[derive(Debug, Clone)]
pub struct LongExactSequence {
    pub origin: String,
    pub terms: Vec<LesTerm>,
    pub maps: Vec<LesMap>,
}

impl LongExactSequence {
    /// Checks `rank(in) + rank(out) = dim` at every term, that explicit maps
    /// have the recorded ranks and shapes, and that consecutive explicit maps
    /// compose to zero.
    pub fn check_exactness(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Inconsistent(format!("{}: {msg}", self.origin)));
        if self.maps.len() + 1 != self.terms.len() {
            return fail(format!("{} terms but {} maps", self.terms.len(), self.maps.len()));
        }
        for (t, m) in self.maps.iter().enumerate() {
            let Some(map) = &m.map else { continue };
            if map.source().dim() != self.terms[t].dim || map.target().dim() != self.terms[t + 1].dim {
                return fail(format!("map {t} has the wrong shape"));
            }
            if map.rank() != m.rank {
                return fail(format!("map {t} has rank {} but {} was recorded", map.rank(), m.rank));
            }
        }
        for (t, term) in self.terms.iter().enumerate() {
            let rin = if t == 0 { 0 } else { self.maps[t - 1].rank };
            let rout = self.maps.get(t).map_or(0, |m| m.rank);
            if rin + rout != term.dim {
                return fail(format!(
                    "not exact at {}: incoming rank {rin}, outgoing rank {rout}, dimension {}",
                    term.label, term.dim
                ));
            }
        }
        for pair in self.maps.windows(2) {
            if let (Some(f), Some(g)) = (&pair[0].map, &pair[1].map) {
                if !g.compose(f)?.is_zero() {
                    return fail("two consecutive maps do not compose to zero".into());
                }
            }
        }
        Ok(())
    }

    pub fn dims(&self) -> Vec<usize> {
        self.terms.iter().map(|t| t.dim).collect()
    }
}

/// The long exact sequence attached to one side of a short exact sequence,
/// together with explicit models of the unknown terms.
#[derive(Debug, Clone)]
pub struct SplitLes {
    pub les: LongExactSequence,
    /// The known maps `g_i` between the two computable columns, `i = 0..=n`.
    pub known: Vec<PresentedMap>,
    /// `Hom^i` with the kernel bundle, `i = 0..=n`.
    pub graded: Vec<PresentedSpace>,
}

impl SplitLes {
    pub fn dims(&self) -> Vec<usize> {
        self.graded.iter().map(PresentedSpace::dim).collect()
    }
}

/// `coker(g_{j-1}) + ker(g_j)` inside `Q_{j-1} + P_j`, with its two maps.
struct Middle {
    space: PresentedSpace,
    incoming: PresentedMap,
    outgoing: PresentedMap,
}

fn middle(prev: Option<&PresentedMap>, next: Option<&PresentedMap>) -> Result<Middle> {
    let zero = PresentedSpace::zero();
    let q = prev.map_or(&zero, |g| g.target());
    let p = next.map_or(&zero, |g| g.source());
    let labels: Vec<String> = q
        .labels()
        .iter()
        .map(|l| format!("c:{l}"))
        .chain(p.labels().iter().map(|l| format!("k:{l}")))
        .collect();
    let (qa, pa) = (q.ambient_dim(), p.ambient_dim());
    let ker = match next {
        Some(g) => g.kernel(),
        None => PresentedSpace::zero(),
    };
    let cycles = Matrix::block_diag(&[&q.cycles(), &ker.cycles()]);
    let mut bounds = vec![Matrix::block_diag(&[&q.boundaries(), &p.boundaries()])];
    if let Some(g) = prev {
        let img = g.matrix().mul(&g.source().cycles())?;
        bounds.push(Matrix::block_diag(&[&img, &Matrix::zeros(pa, 0)]));
    }
    let bounds = Matrix::hcat(&bounds.iter().collect::<Vec<_>>())?;
    let space = PresentedSpace::subquotient(labels.into(), &cycles, &bounds)?;
    let inc = Matrix::block_diag(&[&Matrix::identity(qa), &Matrix::zeros(pa, 0)]);
    let mut out = Matrix::zeros(pa, qa + pa);
    out.set_block(0, qa, &Matrix::identity(pa));
    Ok(Middle {
        incoming: PresentedMap::new(q.clone(), space.clone(), inc)?,
        outgoing: PresentedMap::new(space.clone(), p.clone(), out)?,
        space,
    })
}

fn term(label: String, space: &PresentedSpace) -> LesTerm {
    LesTerm {
        label,
        dim: space.dim(),
        space: Some(space.clone()),
    }
}

fn explicit(map: PresentedMap) -> LesMap {
    LesMap {
        rank: map.rank(),
        map: Some(map),
    }
}

/// Builds `W_0 -> P_0 -> Q_0 -> W_1 -> ... -> Q_N -> W_{N+1}` from the maps
/// `g_i: P_i -> Q_i`, where `W_j = coker g_{j-1} + ker g_j`.
fn splice(
    origin: String,
    g: &[PresentedMap],
    label_p: impl Fn(usize) -> String,
    label_q: impl Fn(usize) -> String,
    label_w: impl Fn(usize) -> String,
) -> Result<(LongExactSequence, Vec<PresentedSpace>)> {
    let mut terms = Vec::new();
    let mut maps = Vec::new();
    let mut ws = Vec::new();
    for j in 0..=g.len() {
        let mid = middle(j.checked_sub(1).map(|k| &g[k]), g.get(j))?;
        if j > 0 {
            maps.push(explicit(mid.incoming.clone()));
        }
        terms.push(term(label_w(j), &mid.space));
        if let Some(gj) = g.get(j) {
            maps.push(explicit(mid.outgoing.clone()));
            terms.push(term(label_p(j), gj.source()));
            maps.push(explicit(gj.clone()));
            terms.push(term(label_q(j), gj.target()));
        }
        ws.push(mid.space);
    }
    let les = LongExactSequence { origin, terms, maps };
    les.check_exactness()?;
    Ok((les, ws))
}

fn atoms_label(b: &[Atom]) -> String {
    if b.is_empty() {
        return "0".into();
    }
    let mut out: Vec<String> = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let run = b[i..].iter().take_while(|&&x| x == b[i]).count();
        out.push(if run == 1 {
            b[i].to_string()
        } else {
            format!("{run}*{}", b[i])
        });
        i += run;
    }
    out.join(" + ")
}

/// `Hom(-, B)` applied to `0 -> K_e -> O_X^h -> O_Z(e) -> 0`.
pub fn les_hom_contra(space: &ConeSpace, k: &KernelBundle, b: &[Atom]) -> Result<SplitLes> {
    let n = space.n();
    let g: Vec<PresentedMap> = (0..=n).map(|i| pre_eval(space, k, b, i)).collect::<Result<_>>()?;
    let bl = atoms_label(b);
    let (les, ws) = splice(
        format!("Hom(-, {bl}) on ker({})", k.e),
        &g,
        |i| format!("Hom^{i}(O_Z({}), {bl})", k.e),
        |i| format!("Hom^{i}({}*O_X(0), {bl})", k.rank()),
        |j| format!("Hom^{}(ker({}), {bl})", j as i64 - 1, k.e),
    )?;
    if ws[0].dim() != 0 {
        return Err(Error::Inconsistent(format!(
            "evaluation of ker({}) is not injective on Hom(O_Z({}), {bl})",
            k.e, k.e
        )));
    }
    Ok(SplitLes {
        les,
        known: g,
        graded: ws[1..].to_vec(),
    })
}

/// `Hom(A, -)` applied to `0 -> K_f -> O_X^h -> O_Z(f) -> 0`.
pub fn les_hom_cov(space: &ConeSpace, a: &[Atom], k: &KernelBundle) -> Result<SplitLes> {
    let n = space.n();
    let g: Vec<PresentedMap> = (0..=n).map(|i| post_eval(space, a, k, i)).collect::<Result<_>>()?;
    let al = atoms_label(a);
    let (les, ws) = splice(
        format!("Hom({al}, -) on ker({})", k.e),
        &g,
        |i| format!("Hom^{i}({al}, {}*O_X(0))", k.rank()),
        |i| format!("Hom^{i}({al}, O_Z({}))", k.e),
        |j| format!("Hom^{j}({al}, ker({}))", k.e),
    )?;
    if ws[n + 1].dim() != 0 {
        return Err(Error::Inconsistent(format!(
            "Hom^{}({al}, ker({})) would be nonzero",
            n + 1,
            k.e
        )));
    }
    Ok(SplitLes {
        les,
        known: g,
        graded: ws[..=n].to_vec(),
    })
}

/// Cohomology sequence of `0 -> O_X(d-m) -> O_X(d) -> O_Z(d) -> 0`, with every map explicit.
pub fn les_restriction(space: &ConeSpace, d: i64) -> Result<LongExactSequence> {
    let n = space.n();
    let m = space.m();
    let hx = |c: i64, i: usize| -> Result<PresentedSpace> {
        Ok(hom_atoms_degree(space, Atom::OX(0), Atom::OX(c), i)?.0)
    };
    let hz = |i: usize| -> Result<PresentedSpace> { Ok(hom_atoms_degree(space, Atom::OX(0), Atom::OZ(d), i)?.0) };
    let mut terms = Vec::new();
    let mut maps = Vec::new();
    for i in 0..=n {
        let a = hx(d - m, i)?;
        let b = hx(d, i)?;
        let c = hz(i)?;
        let mult = PresentedMap::new(a.clone(), b.clone(), xn_multiply(space, i, d - m))?;
        let res = if i == 0 {
            restrict_map(space, 0, d)?
        } else {
            PresentedMap::zero(b.clone(), c.clone())
        };
        terms.push(term(format!("H^{i}(O_X({}))", d - m), &a));
        maps.push(explicit(mult));
        terms.push(term(format!("H^{i}(O_X({d}))"), &b));
        maps.push(explicit(res));
        terms.push(term(format!("H^{i}(O_Z({d}))"), &c));
        if i < n {
            let next = hx(d - m, i + 1)?;
            let delta = if i + 1 == n {
                connecting_map(space, d)?.induced(c.clone(), next)?
            } else {
                PresentedMap::zero(c.clone(), next)
            };
            maps.push(explicit(delta));
        }
    }
    let les = LongExactSequence {
        origin: format!("restriction sequence for O_X({d})"),
        terms,
        maps,
    };
    les.check_exactness()?;
    Ok(les)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objects::{kernel_bundle, SheafObject};

    fn kernel(space: &ConeSpace, e: i64) -> KernelBundle {
        match kernel_bundle(space, e).unwrap() {
            SheafObject::Kernel(k) => k,
            _ => unreachable!(),
        }
    }

    #[test]
    fn restriction_sequences_are_exact() {
        for (n, m) in [(3, 3), (2, 2), (2, 5), (3, 1)] {
            let s = ConeSpace::new(n, m).unwrap();
            for d in -9..9 {
                les_restriction(&s, d).unwrap();
            }
        }
    }

    #[test]
    fn kernel_against_line_bundles() {
        let x = ConeSpace::new(3, 3).unwrap();
        let f = kernel(&x, 1);
        let g = kernel(&x, 2);
        assert_eq!(les_hom_contra(&x, &f, &[Atom::OX(0)]).unwrap().dims(), vec![9, 0, 0, 0]);
        assert_eq!(les_hom_contra(&x, &g, &[Atom::OX(0)]).unwrap().dims(), vec![9, 0, 0, 0]);
        assert_eq!(les_hom_contra(&x, &f, &[Atom::OZ(1)]).unwrap().dims(), vec![18, 0, 0, 0]);
        assert_eq!(les_hom_contra(&x, &f, &[Atom::OZ(2)]).unwrap().dims(), vec![30, 0, 0, 0]);
        assert_eq!(les_hom_contra(&x, &g, &[Atom::OZ(1)]).unwrap().dims(), vec![24, 0, 0, 0]);
        assert_eq!(les_hom_contra(&x, &g, &[Atom::OZ(2)]).unwrap().dims(), vec![45, 0, 0, 0]);
        for k in [&f, &g] {
            assert_eq!(les_hom_cov(&x, &[Atom::OX(0)], k).unwrap().dims(), vec![0; 4]);
            assert_eq!(les_hom_cov(&x, &[Atom::OX(3)], k).unwrap().dims(), vec![0; 4]);
        }
    }
}
