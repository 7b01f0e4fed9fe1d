//! Partial MDS (PMDS) codes over finite fields.
//!
//! The crate builds PMDS generator matrices three ways (rank-metric product,
//! random standard-form fill, column-by-column greedy), checks PMDS-ness with
//! two independent verifiers, computes the field-size and probability bounds
//! that go with the random constructions, and simulates erasure recovery.
//!
//! ```
//! use pmds::{FieldSpec, PmdsParams, construct_mrd, verify_pmds_tkl};
//!
//! let params = PmdsParams::new(2, 2, 1, vec![1, 1]).unwrap();
//! let base = FieldSpec::new(2, 1).unwrap();
//! let tower = FieldSpec::tower(2, 1, 4).unwrap();
//! let code = construct_mrd(&params, &base, &tower).unwrap();
//! assert!(verify_pmds_tkl(&code).pmds);
//! ```

pub mod codes;
pub mod combinat;
pub mod erasure;
pub mod field;
pub mod format;
pub mod matrix;
pub mod pmds;
pub mod rng;
pub mod select;

pub use codes::{gabidulin, is_mds, mrd_criterion, vandermonde_mds, MdsCode, MrdCertificate, MrdCode};
pub use erasure::{capability_sweep, decode, encode, is_correctable, lemma3_patterns, ErasurePattern};
pub use field::{Elem, FieldSpec};
pub use matrix::FMatrix;
pub use pmds::{
    assemble_standard_form, construct_mrd, construct_random, construct_stepwise, count_mstar, degree_budget,
    field_size_recipe, probability_bound, vandermonde_identity_check, verify_pmds_definition, verify_pmds_tkl,
    BlockLayout, CodeArtifact, PmdsParams, StandardFormFill, Verdict,
};
pub use select::{enumerate_block_selections, ColumnSelection};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("invalid extension degree {0}")]
    InvalidDegree(u32),
    #[error("field GF({p}^{degree}) exceeds the supported size")]
    FieldTooLarge { p: u32, degree: u32 },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("base degree {base_degree} does not divide degree {degree}")]
    InvalidTower { degree: u32, base_degree: u32 },
    #[error("field is not declared as a tower")]
    NotATower,
    #[error("incompatible field specifications")]
    IncompatibleFields,
    #[error("element value {value} out of range for order {order}")]
    ElementOutOfRange { value: u32, order: u32 },
    #[error("element has {got} coefficients, expected {expected}")]
    BadElementLength { got: usize, expected: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("index {index} out of bounds for length {len}")]
    OutOfBounds { index: usize, len: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("received word is inconsistent with the code")]
    Inconsistent,
    #[error("malformed document: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
