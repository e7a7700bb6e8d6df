//! Rank of a map between the unknown terms of two long exact sequences.
//!
//! Two rows `P1 -> P2 -> M -> Q1 -> Q2` are joined by vertical maps
//! `a1: P1 -> P1'`, `a: P2 -> P2'`, `g: Q1 -> Q1'`, `g2: Q2 -> Q2'`, and the
//! map `b: M -> M'` is unknown. Writing `a'` for the map induced by `a` on
//! `coker(P1 -> P2)` and `g'` for the map induced by `g` on `ker(Q1 -> Q2)`,
//! the snake lemma gives
//!
//! `rank b = rank a' + rank g' + rank d`,
//!
//! where `d: ker g' -> coker a'` is the connecting map. The engine never
//! models `d`; the rank is certified only when `coker a' = 0` or `ker g' = 0`,
//! and refused with [`Error::IndeterminateRank`] otherwise.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::PresentedMap;

/// One row: `incoming: P1 -> P2` and `outgoing: Q1 -> Q2`.
#[derive(Debug, Clone)]
pub struct LadderRow {
    pub incoming: PresentedMap,
    pub outgoing: PresentedMap,
}

#[derive(Debug, Clone)]
pub struct Ladder {
    pub label: String,
    pub top: LadderRow,
    pub bottom: LadderRow,
    /// `P2 -> P2'`.
    pub left: PresentedMap,
    /// `Q1 -> Q1'`.
    pub right: PresentedMap,
    /// `P1 -> P1'`, used to check that the left square commutes.
    pub outer_left: Option<PresentedMap>,
    /// `Q2 -> Q2'`, used to check that the right square commutes.
    pub outer_right: Option<PresentedMap>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Determination {
    /// `coker a' = 0`, so the connecting map has zero target.
    LeftCokernelVanishes,
    /// `ker g' = 0`, so the connecting map has zero source.
    RightKernelVanishes,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LadderCertificate {
    pub label: String,
    pub rank: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    pub left_rank: usize,
    pub right_rank: usize,
    pub left_cokernel: usize,
    pub right_kernel: usize,
    pub determination: Determination,
    pub squares_checked: usize,
}

pub fn ladder_propagate(l: &Ladder) -> Result<LadderCertificate> {
    let mut squares = 0;
    if let Some(outer) = &l.outer_left {
        let down_then_across = l.bottom.incoming.compose(outer)?;
        let across_then_down = l.left.compose(&l.top.incoming)?;
        if !down_then_across.agrees_with(&across_then_down) {
            return Err(Error::Inconsistent(format!("{}: left square does not commute", l.label)));
        }
        squares += 1;
    }
    if let Some(outer) = &l.outer_right {
        let down_then_across = l.bottom.outgoing.compose(&l.right)?;
        let across_then_down = outer.compose(&l.top.outgoing)?;
        if !down_then_across.agrees_with(&across_then_down) {
            return Err(Error::Inconsistent(format!("{}: right square does not commute", l.label)));
        }
        squares += 1;
    }
    let alpha = l
        .left
        .induced(l.top.incoming.cokernel(), l.bottom.incoming.cokernel())?;
    let gamma = l.right.induced(l.top.outgoing.kernel(), l.bottom.outgoing.kernel())?;
    let left_rank = alpha.rank();
    let right_rank = gamma.rank();
    let left_cokernel = alpha.target().dim() - left_rank;
    let right_kernel = gamma.source().dim() - right_rank;
    let determination = if left_cokernel == 0 {
        Determination::LeftCokernelVanishes
    } else if right_kernel == 0 {
        Determination::RightKernelVanishes
    } else {
        return Err(Error::IndeterminateRank {
            map: l.label.clone(),
            detail: format!(
                "connecting map from a {right_kernel}-dimensional kernel to a {left_cokernel}-dimensional cokernel is not modelled"
            ),
        });
    };
    Ok(LadderCertificate {
        label: l.label.clone(),
        rank: left_rank + right_rank,
        source_dim: alpha.source().dim() + gamma.source().dim(),
        target_dim: alpha.target().dim() + gamma.target().dim(),
        left_rank,
        right_rank,
        left_cokernel,
        right_kernel,
        determination,
        squares_checked: squares,
    })
}
