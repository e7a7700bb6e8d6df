//! Hom spaces between finite sums of atoms, and the maps induced by an
//! evaluation `O_X^h -> O_Z(e)` on either side.
//!
//! `Hom^i(A_0 + ... , B_0 + ...)` is laid out source-major: block `(j, k)`
//! holds `Hom^i(A_j, B_k)` and its labels carry the prefix `[j,k]`.

use crate::cone::ConeSpace;
use crate::error::Result;
use crate::hom::{hom_atoms_degree, postcompose, precompose, Atom};
use crate::linalg::{Matrix, PresentedMap, PresentedSpace};

use super::KernelBundle;

fn blocks(space: &ConeSpace, a: &[Atom], b: &[Atom], i: usize) -> Result<Vec<Vec<PresentedSpace>>> {
    a.iter()
        .map(|&x| {
            b.iter()
                .map(|&y| Ok(hom_atoms_degree(space, x, y, i)?.0))
                .collect()
        })
        .collect()
}

fn assemble(blocks: &[Vec<PresentedSpace>]) -> PresentedSpace {
    let tagged: Vec<(String, &PresentedSpace)> = blocks
        .iter()
        .enumerate()
        .flat_map(|(j, row)| row.iter().enumerate().map(move |(k, s)| (format!("[{j},{k}]"), s)))
        .collect();
    PresentedSpace::direct_sum(&tagged)
}

/// Offsets of each block inside the assembled ambient basis.
fn offsets(blocks: &[Vec<PresentedSpace>]) -> Vec<Vec<usize>> {
    let mut at = 0;
    blocks
        .iter()
        .map(|row| {
            row.iter()
                .map(|s| {
                    let here = at;
                    at += s.ambient_dim();
                    here
                })
                .collect()
        })
        .collect()
}

/// `Hom^i(⊕ A_j, ⊕ B_k)`.
pub fn hom_sum_space(space: &ConeSpace, a: &[Atom], b: &[Atom], i: usize) -> Result<PresentedSpace> {
    Ok(assemble(&blocks(space, a, b, i)?))
}

/// Precomposition with the evaluation of `k`:
/// `Hom^i(O_Z(e), ⊕ B) -> Hom^i(O_X^h, ⊕ B)`.
pub fn pre_eval(space: &ConeSpace, k: &KernelBundle, b: &[Atom], i: usize) -> Result<PresentedMap> {
    let src_blocks = blocks(space, &[Atom::OZ(k.e)], b, i)?;
    let tgt_blocks = blocks(space, &k.free_part(), b, i)?;
    let src_off = offsets(&src_blocks);
    let tgt_off = offsets(&tgt_blocks);
    let src = assemble(&src_blocks);
    let tgt = assemble(&tgt_blocks);
    let mut mat = Matrix::zeros(tgt.ambient_dim(), src.ambient_dim());
    for (j, sigma) in k.evaluation().iter().enumerate() {
        for (kk, &target) in b.iter().enumerate() {
            let block = precompose(space, i, sigma, target)?;
            mat.set_block(tgt_off[j][kk], src_off[0][kk], block.matrix());
        }
    }
    Ok(PresentedMap::new(src, tgt, mat)?)
}

/// Postcomposition with the evaluation of `k`:
/// `Hom^i(⊕ A, O_X^h) -> Hom^i(⊕ A, O_Z(e))`.
pub fn post_eval(space: &ConeSpace, a: &[Atom], k: &KernelBundle, i: usize) -> Result<PresentedMap> {
    let src_blocks = blocks(space, a, &k.free_part(), i)?;
    let tgt_blocks = blocks(space, a, &[Atom::OZ(k.e)], i)?;
    let src_off = offsets(&src_blocks);
    let tgt_off = offsets(&tgt_blocks);
    let src = assemble(&src_blocks);
    let tgt = assemble(&tgt_blocks);
    let mut mat = Matrix::zeros(tgt.ambient_dim(), src.ambient_dim());
    for (j, &source) in a.iter().enumerate() {
        for (kk, tau) in k.evaluation().iter().enumerate() {
            let block = postcompose(space, i, source, tau)?;
            mat.set_block(tgt_off[j][0], src_off[j][kk], block.matrix());
        }
    }
    Ok(PresentedMap::new(src, tgt, mat)?)
}
