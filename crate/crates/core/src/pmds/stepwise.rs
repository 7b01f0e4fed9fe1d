//! Column-by-column construction.
//!
//! Start from an `[mℓ, k]` MDS code in the form `[I_k | A]` and append the
//! redundancy columns one at a time, block by block. A new column
//! `v = Σ_t β_t C_i^{(t)}` is accepted when every k×k minor that uses it and
//! respects the per-block caps is nonzero. For a fixed choice `S` of the
//! other `k − 1` columns that minor is the linear form
//! `Σ_t β_t det[S | C_i^{(t)}]`, so each candidate is checked against a
//! precomputed table of coefficient vectors.

use thiserror::Error;

use super::{assemble_standard_form, BlockLayout, CodeArtifact, Method, PmdsParams, StandardFormFill};
use crate::codes::vandermonde_mds;
use crate::field::{Elem, FieldSpec};
use crate::matrix::FMatrix;
use crate::rng::{seeded, RNG_NAME};
use crate::select::enumerate_block_selections;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepwiseOptions {
    /// Seeded random candidates tried before the exhaustive scan.
    pub random_candidates: usize,
    /// Exhaustive scan runs only when `q^ℓ` is at most this.
    pub exhaustive_limit: u64,
}

impl Default for StepwiseOptions {
    fn default() -> Self {
        StepwiseOptions { random_candidates: 32, exhaustive_limit: 1_000_000 }
    }
}

impl StepwiseOptions {
    /// No random phase; scan `GF(q)^ℓ` in lexicographic order.
    pub fn exhaustive() -> Self {
        StepwiseOptions { random_candidates: 0, ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum StepwiseError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no admissible coefficients for column {column} of block {block} after {candidates_tried} candidates")]
    Stuck { block: usize, column: usize, candidates_tried: u64, exhaustive: bool },
}

pub fn construct_stepwise(
    params: &PmdsParams,
    field: &FieldSpec,
    seed: u64,
    options: &StepwiseOptions,
) -> Result<CodeArtifact, StepwiseError> {
    construct_stepwise_with(params, field, seed, options, |_, _| {})
}

/// Like [`construct_stepwise`], calling `on_column(partial generator, partial layout)`
/// after every accepted column.
pub fn construct_stepwise_with(
    params: &PmdsParams,
    field: &FieldSpec,
    seed: u64,
    options: &StepwiseOptions,
    mut on_column: impl FnMut(&FMatrix, &BlockLayout),
) -> Result<CodeArtifact, StepwiseError> {
    params.validate().map_err(|e| StepwiseError::Precondition(e.to_string()))?;
    let (k, ell, m) = (params.k(), params.ell, params.m);
    let ml = m * ell;
    let q = u64::from(field.order());
    if q + 1 < ml as u64 {
        return Err(StepwiseError::Precondition(format!("need q >= mℓ − 1 = {}, have q = {q}", ml - 1)));
    }

    let start = vandermonde_mds(field, ml, k, None).map_err(|e| StepwiseError::Precondition(e.to_string()))?;
    let (std, pivots) = start.generator.rref();
    debug_assert_eq!(pivots, (0..k).collect::<Vec<_>>());
    let s = params.s;
    let mut alpha = Vec::with_capacity(k * s);
    for w in 0..k {
        for z in 0..s {
            alpha.push(std.get(w, k + z));
        }
    }

    // Per-block column lists; C-columns first.
    let mut blocks: Vec<Vec<Vec<Elem>>> = (0..m).map(|i| (0..ell).map(|t| std.column(i * ell + t)).collect()).collect();
    let mut beta = vec![Elem::ZERO; ell * params.big_r()];
    let mut rng = seeded(seed, 0);
    let full_scan = q.checked_pow(ell as u32).filter(|&c| c <= options.exhaustive_limit);

    for i in 0..m {
        for j in 0..params.r[i] {
            let widths: Vec<usize> = blocks.iter().map(Vec::len).collect();
            let current = assemble(field, k, &blocks);
            let mut caps = vec![ell; m];
            caps[i] = ell - 1;
            let mut forms: Vec<Vec<Elem>> = Vec::new();
            for sel in enumerate_block_selections(&widths, &caps, k - 1) {
                let mut cols: Vec<Vec<Elem>> = sel.iter().map(|&c| current.column(c)).collect();
                cols.push(Vec::new());
                let coeffs: Vec<Elem> = (0..ell)
                    .map(|t| {
                        *cols.last_mut().unwrap() = blocks[i][t].clone();
                        FMatrix::from_fn(field, k, k, |r, c| cols[c][r]).det().expect("square")
                    })
                    .collect();
                if coeffs.iter().all(|c| c.is_zero()) {
                    return Err(StepwiseError::Stuck { block: i, column: j, candidates_tried: 0, exhaustive: false });
                }
                forms.push(coeffs);
            }
            let admissible = |b: &[Elem]| {
                forms.iter().all(|coeffs| {
                    let v = coeffs.iter().zip(b).fold(Elem::ZERO, |acc, (&c, &x)| field.add(acc, field.mul(c, x)));
                    !v.is_zero()
                })
            };

            let mut tried = 0u64;
            let mut chosen: Option<Vec<Elem>> = None;
            for _ in 0..options.random_candidates {
                let cand: Vec<Elem> = (0..ell).map(|_| field.random(&mut rng)).collect();
                tried += 1;
                if admissible(&cand) {
                    chosen = Some(cand);
                    break;
                }
            }
            if chosen.is_none() {
                if let Some(total) = full_scan {
                    let mut digits = vec![0u32; ell];
                    for _ in 0..total {
                        let cand: Vec<Elem> = digits.iter().map(|&d| field.elem(d).expect("below q")).collect();
                        tried += 1;
                        if admissible(&cand) {
                            chosen = Some(cand);
                            break;
                        }
                        // Odometer with the last coordinate fastest (lexicographic).
                        for d in digits.iter_mut().rev() {
                            *d += 1;
                            if u64::from(*d) < q {
                                break;
                            }
                            *d = 0;
                        }
                    }
                }
            }
            let Some(coeffs) = chosen else {
                return Err(StepwiseError::Stuck {
                    block: i,
                    column: j,
                    candidates_tried: tried,
                    exhaustive: full_scan.is_some(),
                });
            };

            let column: Vec<Elem> = (0..k)
                .map(|w| (0..ell).fold(Elem::ZERO, |acc, t| field.add(acc, field.mul(coeffs[t], blocks[i][t][w]))))
                .collect();
            blocks[i].push(column);
            for (t, &c) in coeffs.iter().enumerate() {
                beta[params.beta_index(t, i, j)] = c;
            }
            let layout = BlockLayout::new(ell, blocks.iter().map(Vec::len).collect());
            on_column(&assemble(field, k, &blocks), &layout);
        }
    }

    let fill = StandardFormFill { alpha, beta };
    let mut code =
        assemble_standard_form(params, field, &fill).map_err(|e| StepwiseError::Precondition(e.to_string()))?;
    debug_assert_eq!(code.generator, assemble(field, k, &blocks));
    code.provenance.method = Method::Stepwise;
    code.provenance.seed = Some(seed);
    code.provenance.rng = Some(RNG_NAME.to_string());
    Ok(code)
}

fn assemble(field: &FieldSpec, k: usize, blocks: &[Vec<Vec<Elem>>]) -> FMatrix {
    let cols: Vec<&Vec<Elem>> = blocks.iter().flatten().collect();
    FMatrix::from_fn(field, k, cols.len(), |r, c| cols[c][r])
}
