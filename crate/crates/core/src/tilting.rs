//! Tilting objects, semiorthogonal decompositions and the numeric stack check.
//!
//! A collection `<P_1, ..., P_k>` passes [`check_sod`] when every `P_i` is
//! tilting (`Hom^{>0}(P_i, P_i) = 0`) and `Hom^*(P_i, P_j) = 0` for `i > j`.
//! That the collection generates the derived category has no finite
//! certificate here; reports carry it as an assumption.

use serde::{Deserialize, Serialize};

use crate::cone::ConeSpace;
use crate::error::{Error, Result};
use crate::objects::{hom_objects, SheafObject};

/// Text recorded in every SOD report in place of a generation check.
pub const GENERATION_NOTE: &str =
    "generation is assumed: the engine has no finite certificate for it";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TiltingVerdict {
    pub object: String,
    pub tilting: bool,
    pub end_dims: Vec<usize>,
    pub end_dim: usize,
}

pub fn is_tilting(space: &ConeSpace, t: &SheafObject) -> Result<TiltingVerdict> {
    let h = hom_objects(space, t, t)?;
    Ok(TiltingVerdict {
        object: t.to_string(),
        tilting: h.is_concentrated_in_degree_zero(),
        end_dim: h.dims[0],
        end_dims: h.dims,
    })
}

/// `dims[i][j] = dim Hom(T_i, T_j)` for summands concentrated in degree 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndBlocks {
    pub summands: Vec<String>,
    pub ranks: Vec<usize>,
    pub dims: Vec<Vec<usize>>,
    pub total: usize,
}

/// Graded `Hom^*(T_i, T_j)` for every ordered pair of summands.
fn graded_blocks(space: &ConeSpace, summands: &[SheafObject]) -> Result<Vec<Vec<Vec<usize>>>> {
    summands
        .iter()
        .map(|a| {
            summands
                .iter()
                .map(|b| Ok(hom_objects(space, a, b)?.dims))
                .collect()
        })
        .collect()
}

fn degree_zero(graded: &[Vec<Vec<usize>>], summands: &[SheafObject]) -> EndBlocks {
    let dims: Vec<Vec<usize>> = graded.iter().map(|row| row.iter().map(|d| d[0]).collect()).collect();
    EndBlocks {
        summands: summands.iter().map(ToString::to_string).collect(),
        ranks: summands.iter().map(SheafObject::rank).collect(),
        total: dims.iter().flatten().sum(),
        dims,
    }
}

pub fn end_blocks(space: &ConeSpace, summands: &[SheafObject]) -> Result<EndBlocks> {
    let graded = graded_blocks(space, summands)?;
    for (i, row) in graded.iter().enumerate() {
        for (j, d) in row.iter().enumerate() {
            if let Some((deg, &dim)) = d.iter().enumerate().skip(1).find(|(_, &x)| x != 0) {
                return Err(Error::HigherDegree {
                    pair: format!("({}, {})", summands[i], summands[j]),
                    degree: deg,
                    dim,
                });
            }
        }
    }
    Ok(degree_zero(&graded, summands))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedObject {
    pub name: String,
    pub object: SheafObject,
}

impl NamedObject {
    pub fn new(name: impl Into<String>, object: SheafObject) -> Self {
        NamedObject {
            name: name.into(),
            object,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockReport {
    pub name: String,
    pub object: String,
    pub rank: usize,
    pub end_dims: Vec<usize>,
    pub tilting: bool,
    pub blocks: EndBlocks,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairEntry {
    pub source: String,
    pub target: String,
    /// `None` when the engine refused a pair that the verdict does not depend on.
    pub dims: Option<Vec<usize>>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SodReport {
    pub space: [i64; 2],
    pub blocks: Vec<BlockReport>,
    pub matrix: Vec<PairEntry>,
    pub passed: bool,
    pub first_violation: Option<String>,
    pub generation: String,
}

impl SodReport {
    pub fn end_dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.end_dims[0]).collect()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.rank).collect()
    }
}

/// Checks every hypothesis of an SOD except generation. Failures are part of
/// the report; refusals on a pair the verdict needs are returned as errors.
pub fn check_sod(space: &ConeSpace, collection: &[NamedObject]) -> Result<SodReport> {
    let mut violations = Vec::new();
    let mut blocks = Vec::new();
    for p in collection {
        let summands = p.object.summands();
        let graded = graded_blocks(space, &summands)?;
        let mut end_dims = vec![0; space.n() + 1];
        for d in graded.iter().flatten() {
            for (acc, x) in end_dims.iter_mut().zip(d) {
                *acc += x;
            }
        }
        let tilting = end_dims.iter().skip(1).all(|&d| d == 0);
        if !tilting {
            violations.push(format!(
                "{} is not tilting: Hom^* = {}",
                p.name,
                fmt_dims(&end_dims)
            ));
        }
        blocks.push(BlockReport {
            name: p.name.clone(),
            object: p.object.to_string(),
            rank: p.object.rank(),
            end_dims,
            tilting,
            blocks: degree_zero(&graded, &summands),
        });
    }
    let mut matrix = Vec::new();
    for (i, a) in collection.iter().enumerate() {
        for (j, b) in collection.iter().enumerate() {
            if i == j {
                matrix.push(PairEntry {
                    source: a.name.clone(),
                    target: b.name.clone(),
                    dims: Some(blocks[i].end_dims.clone()),
                    note: None,
                });
                continue;
            }
            let required = i > j;
            match hom_objects(space, &a.object, &b.object) {
                Ok(h) => {
                    if required && h.dims.iter().any(|&d| d != 0) {
                        violations.push(format!(
                            "Hom^*({}, {}) = {} is not zero",
                            a.name,
                            b.name,
                            fmt_dims(&h.dims)
                        ));
                    }
                    matrix.push(PairEntry {
                        source: a.name.clone(),
                        target: b.name.clone(),
                        dims: Some(h.dims),
                        note: None,
                    });
                }
                Err(e) if !required && e.is_refusal() => matrix.push(PairEntry {
                    source: a.name.clone(),
                    target: b.name.clone(),
                    dims: None,
                    note: Some(e.to_string()),
                }),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(SodReport {
        space: [space.n() as i64, space.m()],
        blocks,
        matrix,
        passed: violations.is_empty(),
        first_violation: violations.into_iter().next(),
        generation: GENERATION_NOTE.to_string(),
    })
}

pub(crate) fn fmt_dims(dims: &[usize]) -> String {
    let parts: Vec<String> = dims.iter().map(usize::to_string).collect();
    format!("({})", parts.join(", "))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StackReport {
    pub window: [i64; 2],
    pub passed: bool,
    pub first_violation: Option<String>,
}

/// Numeric exceptionality of `O(lo), ..., O(hi)` on the stack, where every
/// twist is a line bundle and `Hom^i(O(a), O(b)) = H^i(O(b - a))`.
pub fn stack_exceptional_check(space: &ConeSpace, lo: i64, hi: i64) -> Result<StackReport> {
    let n = space.n();
    let graded = |d: i64| -> Result<Vec<usize>> { (0..=n).map(|i| space.coh_dim_ox(d, i)).collect() };
    let mut first = None;
    'outer: for a in lo..=hi {
        let end = graded(0)?;
        if end[0] != 1 || end.iter().skip(1).any(|&x| x != 0) {
            first = Some(format!("O({a}) is not exceptional: End^* = {}", fmt_dims(&end)));
            break;
        }
        for b in a + 1..=hi {
            let back = graded(a - b)?;
            if let Some((i, &d)) = back.iter().enumerate().find(|(_, &x)| x != 0) {
                first = Some(format!("Hom^{i}(O({b}), O({a})) has dimension {d}"));
                break 'outer;
            }
        }
    }
    Ok(StackReport {
        window: [lo, hi],
        passed: first.is_none(),
        first_violation: first,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum IdentityVerdict {
    Holds { total: usize, ranks: Vec<usize> },
    NotApplicable { total: usize, sum_of_squares: usize },
}

/// Compares the total End dimension of a block with the sum of the squared
/// ranks of its summands.
pub fn rank_square_identity(blocks: &EndBlocks) -> IdentityVerdict {
    let squares: usize = blocks.ranks.iter().map(|r| r * r).sum();
    if squares == blocks.total {
        IdentityVerdict::Holds {
            total: blocks.total,
            ranks: blocks.ranks.clone(),
        }
    } else {
        IdentityVerdict::NotApplicable {
            total: blocks.total,
            sum_of_squares: squares,
        }
    }
}
