//! Versioned JSON documents for codes.
//!
//! One layout serves every artifact kind: `field` in [`FieldDoc`] form,
//! `generator` as row-major nested arrays of element coefficient vectors
//! (lowest degree first), plus `params` and `provenance` for PMDS codes.

use serde::{Deserialize, Serialize};

use crate::codes::{MdsCode, MrdCode};
use crate::field::{Elem, FieldDoc, FieldSpec};
use crate::matrix::FMatrix;
use crate::pmds::{CodeArtifact, Method, PmdsParams, Provenance, StandardFormFill};
use crate::Error;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Pmds,
    Mds,
    Mrd,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FillDoc {
    pub alpha: Vec<Vec<u32>>,
    pub beta: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProvenanceDoc {
    pub method: String,
    pub seed: Option<u64>,
    pub attempts: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rng: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fill: Option<FillDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDoc {
    pub format_version: u32,
    pub kind: Kind,
    pub field: FieldDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<PmdsParams>,
    pub generator: Vec<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<ProvenanceDoc>,
}

/// Any code the format can carry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Artifact {
    Pmds(CodeArtifact),
    Mds(MdsCode),
    Mrd(MrdCode),
}

fn elems_to_doc(field: &FieldSpec, elems: &[Elem]) -> Vec<Vec<u32>> {
    elems.iter().map(|&a| field.coeffs(a)).collect()
}

fn elems_from_doc(field: &FieldSpec, doc: &[Vec<u32>]) -> Result<Vec<Elem>, Error> {
    doc.iter().map(|c| field.from_coeffs(c)).collect()
}

pub fn matrix_to_doc(g: &FMatrix) -> Vec<Vec<Vec<u32>>> {
    (0..g.rows()).map(|i| elems_to_doc(g.field(), g.row(i))).collect()
}

pub fn matrix_from_doc(field: &FieldSpec, doc: &[Vec<Vec<u32>>]) -> Result<FMatrix, Error> {
    let rows = doc.len();
    let cols = doc.first().map_or(0, Vec::len);
    if doc.iter().any(|r| r.len() != cols) {
        return Err(Error::Format("generator rows have different lengths".into()));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for row in doc {
        data.extend(elems_from_doc(field, row)?);
    }
    FMatrix::new(field, rows, cols, data)
}

impl Artifact {
    pub fn field(&self) -> &FieldSpec {
        match self {
            Artifact::Pmds(c) => &c.field,
            Artifact::Mds(c) => &c.field,
            Artifact::Mrd(c) => &c.field,
        }
    }

    pub fn generator(&self) -> &FMatrix {
        match self {
            Artifact::Pmds(c) => &c.generator,
            Artifact::Mds(c) => &c.generator,
            Artifact::Mrd(c) => &c.generator,
        }
    }

    pub fn to_doc(&self) -> CodeDoc {
        let field = self.field();
        let (kind, params, provenance) = match self {
            Artifact::Pmds(c) => {
                let p = &c.provenance;
                let prov = ProvenanceDoc {
                    method: p.method.as_str().to_string(),
                    seed: p.seed,
                    attempts: p.attempts,
                    rng: p.rng.clone(),
                    fill: p
                        .fill
                        .as_ref()
                        .map(|f| FillDoc { alpha: elems_to_doc(field, &f.alpha), beta: elems_to_doc(field, &f.beta) }),
                };
                (Kind::Pmds, Some(c.params.clone()), Some(prov))
            }
            Artifact::Mds(_) => (Kind::Mds, None, None),
            Artifact::Mrd(_) => (Kind::Mrd, None, None),
        };
        CodeDoc {
            format_version: FORMAT_VERSION,
            kind,
            field: field.to_doc(),
            params,
            generator: matrix_to_doc(self.generator()),
            provenance,
        }
    }

    pub fn from_doc(doc: &CodeDoc) -> Result<Self, Error> {
        if doc.format_version != FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported format version {}", doc.format_version)));
        }
        let field = FieldSpec::from_doc(&doc.field)?;
        let generator = matrix_from_doc(&field, &doc.generator)?;
        let (k, n) = (generator.rows(), generator.cols());
        match doc.kind {
            Kind::Pmds => {
                let params = doc.params.clone().ok_or_else(|| Error::Format("PMDS document without params".into()))?;
                let provenance = match &doc.provenance {
                    None => Provenance::new(Method::External),
                    Some(p) => Provenance {
                        method: Method::parse(&p.method)
                            .ok_or_else(|| Error::Format(format!("unknown method {:?}", p.method)))?,
                        seed: p.seed,
                        attempts: p.attempts,
                        rng: p.rng.clone(),
                        fill: p
                            .fill
                            .as_ref()
                            .map(|f| -> Result<_, Error> {
                                Ok(StandardFormFill {
                                    alpha: elems_from_doc(&field, &f.alpha)?,
                                    beta: elems_from_doc(&field, &f.beta)?,
                                })
                            })
                            .transpose()?,
                    },
                };
                Ok(Artifact::Pmds(CodeArtifact::new(params, generator, provenance)?))
            }
            Kind::Mds => Ok(Artifact::Mds(MdsCode { field, n, k, generator })),
            Kind::Mrd => {
                if field.base().is_none() {
                    return Err(Error::NotATower);
                }
                Ok(Artifact::Mrd(MrdCode { field, n, k, generator }))
            }
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_doc()).expect("documents always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        let doc: CodeDoc = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        Self::from_doc(&doc)
    }
}

impl From<CodeArtifact> for Artifact {
    fn from(c: CodeArtifact) -> Self {
        Artifact::Pmds(c)
    }
}

impl From<MdsCode> for Artifact {
    fn from(c: MdsCode) -> Self {
        Artifact::Mds(c)
    }
}

impl From<MrdCode> for Artifact {
    fn from(c: MrdCode) -> Self {
        Artifact::Mrd(c)
    }
}
