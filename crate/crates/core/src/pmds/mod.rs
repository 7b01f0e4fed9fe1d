//! PMDS parameterization, verifiers, constructions and bounds.
//!
//! A `[n, k, ℓ; r_1, …, r_m]` code has generator `G = (B_1 | … | B_m)` with
//! block `B_i` of width `ℓ + r_i` and `k = mℓ − s`. In standard form each
//! block splits as `B_i = (C_i | D_i)` where the concatenated `C_i` equal
//! `[I_k | A]` and every column of `D_i` is a combination of the columns of
//! `C_i`.

mod bounds;
mod construct;
mod random;
mod stepwise;
mod verify;

pub use bounds::{
    count_mstar, degree_bound, degree_budget, probability_bound, vandermonde_identity_check, DegreeBudget, MStarCount,
};
pub use construct::{assemble_standard_form, construct_mrd, field_size_recipe, FieldRecipe};
pub use random::{construct_random, estimate_success_rate, random_fill, Estimate, RandomFailure};
pub use stepwise::{construct_stepwise, construct_stepwise_with, StepwiseError, StepwiseOptions};
pub use verify::{verify_definition, verify_pmds_definition, verify_pmds_tkl, verify_tkl, Verdict};

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::field::{Elem, FieldSpec};
use crate::matrix::FMatrix;
use crate::Error;

/// `(m, ℓ, s, r_1..r_m)`; `k = mℓ − s`, `n = Σ(ℓ + r_i)`.
///
/// Zero redundancy `r_i = 0` is accepted so that partially built codes can
/// be described with the same type.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PmdsParams {
    pub m: usize,
    pub ell: usize,
    pub s: usize,
    pub r: Vec<usize>,
}

impl PmdsParams {
    pub fn new(m: usize, ell: usize, s: usize, r: Vec<usize>) -> Result<Self, Error> {
        let params = PmdsParams { m, ell, s, r };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), Error> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if self.m < 2 {
            return bad(format!("need at least two blocks, got m = {}", self.m));
        }
        if self.ell < 1 {
            return bad("locality must be at least 1".into());
        }
        if self.r.len() != self.m {
            return bad(format!("{} redundancy values for {} blocks", self.r.len(), self.m));
        }
        if self.s < 1 {
            return bad("s must be at least 1".into());
        }
        if self.s > self.m * self.ell || self.k() < self.ell {
            return bad(format!("k = mℓ − s must be at least ℓ = {}", self.ell));
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.m * self.ell - self.s
    }

    pub fn n(&self) -> usize {
        self.m * self.ell + self.big_r()
    }

    /// Total redundancy `R = Σ r_i`.
    pub fn big_r(&self) -> usize {
        self.r.iter().sum()
    }

    pub fn block_widths(&self) -> Vec<usize> {
        self.r.iter().map(|&r| self.ell + r).collect()
    }

    pub fn layout(&self) -> BlockLayout {
        BlockLayout::new(self.ell, self.block_widths())
    }

    /// Position of `β_{t,i,j}` in [`StandardFormFill::beta`].
    pub fn beta_index(&self, t: usize, block: usize, column: usize) -> usize {
        let before: usize = self.r[..block].iter().sum();
        self.ell * (before + column) + t
    }
}

impl fmt::Display for PmdsParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r: Vec<String> = self.r.iter().map(ToString::to_string).collect();
        write!(f, "[{}, {}, {}; {}]", self.n(), self.k(), self.ell, r.join(","))
    }
}

/// Column blocks `J_1..J_m` of a generator together with the locality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockLayout {
    pub ell: usize,
    pub widths: Vec<usize>,
}

impl BlockLayout {
    pub fn new(ell: usize, widths: Vec<usize>) -> Self {
        BlockLayout { ell, widths }
    }

    pub fn n(&self) -> usize {
        self.widths.iter().sum()
    }

    pub fn m(&self) -> usize {
        self.widths.len()
    }

    pub fn offsets(&self) -> Vec<usize> {
        self.widths
            .iter()
            .scan(0, |acc, &w| {
                let start = *acc;
                *acc += w;
                Some(start)
            })
            .collect()
    }

    pub fn range(&self, block: usize) -> Range<usize> {
        let start: usize = self.widths[..block].iter().sum();
        start..start + self.widths[block]
    }

    pub fn block_of(&self, col: usize) -> usize {
        let mut acc = 0;
        for (b, &w) in self.widths.iter().enumerate() {
            acc += w;
            if col < acc {
                return b;
            }
        }
        panic!("column {col} outside layout of width {acc}");
    }
}

/// Values substituted into a standard-form generator.
///
/// `alpha[w * s + z]` is entry `(w, z)` of `A` (k × s). `beta` holds the
/// combination coefficients column by column: block by block, then column
/// `j` within the block, then `t = 0..ℓ`; see [`PmdsParams::beta_index`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardFormFill {
    pub alpha: Vec<Elem>,
    pub beta: Vec<Elem>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Mrd,
    Random,
    Stepwise,
    StandardForm,
    External,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Mrd => "mrd",
            Method::Random => "random",
            Method::Stepwise => "stepwise",
            Method::StandardForm => "standard-form",
            Method::External => "external",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "mrd" => Method::Mrd,
            "random" => Method::Random,
            "stepwise" => Method::Stepwise,
            "standard-form" => Method::StandardForm,
            "external" => Method::External,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub method: Method,
    pub seed: Option<u64>,
    pub attempts: Option<u64>,
    pub rng: Option<String>,
    pub fill: Option<StandardFormFill>,
}

impl Provenance {
    pub fn new(method: Method) -> Self {
        Provenance { method, seed: None, attempts: None, rng: None, fill: None }
    }
}

/// A PMDS candidate: parameters, field, generator and where it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeArtifact {
    pub params: PmdsParams,
    pub field: FieldSpec,
    pub generator: FMatrix,
    pub provenance: Provenance,
}

impl CodeArtifact {
    pub fn new(params: PmdsParams, generator: FMatrix, provenance: Provenance) -> Result<Self, Error> {
        params.validate()?;
        if generator.rows() != params.k() || generator.cols() != params.n() {
            return Err(Error::Dimension(format!(
                "generator is {}x{}, parameters need {}x{}",
                generator.rows(),
                generator.cols(),
                params.k(),
                params.n()
            )));
        }
        let field = generator.field().clone();
        Ok(CodeArtifact { params, field, generator, provenance })
    }

    pub fn layout(&self) -> BlockLayout {
        self.params.layout()
    }

    pub fn block_offsets(&self) -> Vec<usize> {
        self.layout().offsets()
    }

    pub fn has_full_rank(&self) -> bool {
        self.generator.rank() == self.params.k()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_sizes() {
        let p = PmdsParams::new(3, 2, 2, vec![1, 2, 1]).unwrap();
        assert_eq!(p.k(), 4);
        assert_eq!(p.n(), 10);
        assert_eq!(p.big_r(), 4);
        assert_eq!(p.layout().offsets(), vec![0, 3, 7]);
        assert_eq!(p.layout().range(1), 3..7);
        assert_eq!(p.layout().block_of(7), 2);
        assert_eq!(p.beta_index(1, 1, 1), 2 * 2 + 1);
        assert_eq!(p.to_string(), "[10, 4, 2; 1,2,1]");
    }

    #[test]
    fn rejects_invalid() {
        assert!(PmdsParams::new(1, 2, 1, vec![1]).is_err());
        assert!(PmdsParams::new(2, 1, 2, vec![1, 1]).is_err());
        assert!(PmdsParams::new(2, 2, 0, vec![1, 1]).is_err());
        assert!(PmdsParams::new(2, 2, 1, vec![1]).is_err());
        assert!(PmdsParams::new(2, 0, 1, vec![1, 1]).is_err());
        assert!(PmdsParams::new(2, 2, 1, vec![0, 0]).is_ok());
    }
}
