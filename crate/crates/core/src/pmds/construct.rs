use serde::{Deserialize, Serialize};

use super::{CodeArtifact, Method, PmdsParams, Provenance, StandardFormFill};
use crate::codes::{default_gabidulin_points, gabidulin, vandermonde_mds};
use crate::field::{Elem, FieldSpec};
use crate::matrix::FMatrix;
use crate::Error;

/// `G = (C_1|D_1|…|C_m|D_m)` with `(C_1|…|C_m) = [I_k | A(α)]` and
/// `D_i^{(j)} = Σ_t β_{t,i,j} C_i^{(t)}`.
pub fn assemble_standard_form(
    params: &PmdsParams,
    field: &FieldSpec,
    fill: &StandardFormFill,
) -> Result<CodeArtifact, Error> {
    params.validate()?;
    let (k, s, ell) = (params.k(), params.s, params.ell);
    if fill.alpha.len() != s * k || fill.beta.len() != ell * params.big_r() {
        return Err(Error::Dimension(format!(
            "fill has {} alpha and {} beta values, expected {} and {}",
            fill.alpha.len(),
            fill.beta.len(),
            s * k,
            ell * params.big_r()
        )));
    }
    if let Some(bad) = fill.alpha.iter().chain(&fill.beta).find(|&&a| !field.contains(a)) {
        return Err(Error::ElementOutOfRange { value: bad.value(), order: field.order() });
    }
    let c_part = FMatrix::from_fn(field, k, params.m * ell, |w, c| {
        if c < k {
            if w == c {
                Elem::ONE
            } else {
                Elem::ZERO
            }
        } else {
            fill.alpha[w * s + (c - k)]
        }
    });
    let mut g = FMatrix::zeros(field, k, params.n());
    let mut col = 0;
    for (i, &ri) in params.r.iter().enumerate() {
        for t in 0..ell {
            for w in 0..k {
                g.set(w, col, c_part.get(w, i * ell + t));
            }
            col += 1;
        }
        for j in 0..ri {
            for w in 0..k {
                let v = (0..ell).fold(Elem::ZERO, |acc, t| {
                    let beta = fill.beta[params.beta_index(t, i, j)];
                    field.add(acc, field.mul(beta, c_part.get(w, i * ell + t)))
                });
                g.set(w, col, v);
            }
            col += 1;
        }
    }
    let mut provenance = Provenance::new(Method::StandardForm);
    provenance.fill = Some(fill.clone());
    CodeArtifact::new(params.clone(), g, provenance)
}

/// Guaranteed-existence field size from the rank-metric product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldRecipe {
    /// Smallest `j` with `p^j ≥ ℓ + r_i − 1` for all blocks (floored at 1).
    pub n0: u32,
    /// Extension degree `L = n0 · mℓ` of GF(p^L).
    pub l: u32,
    /// Base field order `q = p^n0`.
    pub q: u64,
    /// MRD length and extension degree `N = mℓ`.
    pub big_n: u32,
    /// Set when the formula gave `n0 = 0` and the floor applied.
    pub floored: bool,
}

pub fn field_size_recipe(params: &PmdsParams, p: u32) -> Result<FieldRecipe, Error> {
    if !crate::field::is_prime(u64::from(p)) {
        return Err(Error::NotPrime(p));
    }
    let threshold = params.r.iter().map(|&r| (params.ell + r).saturating_sub(1)).max().unwrap_or(0) as u64;
    let mut n0 = 0u32;
    let mut q = 1u64;
    while q < threshold {
        q *= u64::from(p);
        n0 += 1;
    }
    let floored = n0 == 0;
    if floored {
        n0 = 1;
        q = u64::from(p);
    }
    let big_n = (params.m * params.ell) as u32;
    Ok(FieldRecipe { n0, l: n0 * big_n, q, big_n, floored })
}

/// `G = G̃ · M`: a k × mℓ Gabidulin generator over GF(q^N) times the
/// block-diagonal matrix of `[ℓ + r_i, ℓ]` Vandermonde MDS generators over GF(q).
pub fn construct_mrd(params: &PmdsParams, base: &FieldSpec, tower: &FieldSpec) -> Result<CodeArtifact, Error> {
    params.validate()?;
    if tower.base() != Some(base) {
        return Err(Error::IncompatibleFields);
    }
    let big_n = tower.ext_degree().expect("tower") as usize;
    let ml = params.m * params.ell;
    if big_n < ml {
        return Err(Error::Precondition(format!("extension degree N = {big_n} is below mℓ = {ml}")));
    }
    let q = base.order() as usize;
    if let Some(w) = params.block_widths().into_iter().find(|&w| w > q + 1) {
        return Err(Error::Precondition(format!("block length {w} needs q >= {}, have q = {q}", w - 1)));
    }
    let points = default_gabidulin_points(tower, ml);
    let mrd = gabidulin(tower, ml, params.k(), &points)?;

    let image: Vec<Elem> = base.elements().map(|a| tower.embed(a, base)).collect::<Result<_, _>>()?;
    let mut block_diag = FMatrix::zeros(tower, ml, params.n());
    let mut col = 0;
    for (i, w) in params.block_widths().into_iter().enumerate() {
        let mi = vandermonde_mds(base, w, params.ell, None)?.generator;
        for t in 0..params.ell {
            for c in 0..w {
                block_diag.set(i * params.ell + t, col + c, image[mi.get(t, c).value() as usize]);
            }
        }
        col += w;
    }
    let g = mrd.generator.mul(&block_diag)?;
    CodeArtifact::new(params.clone(), g, Provenance::new(Method::Mrd))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pmds::{verify_pmds_definition, verify_pmds_tkl};

    #[test]
    fn zero_beta_gives_zero_d_columns() {
        let f = FieldSpec::new(5, 1).unwrap();
        let params = PmdsParams::new(2, 2, 1, vec![1, 2]).unwrap();
        let fill = StandardFormFill { alpha: vec![f.one(); 3], beta: vec![f.zero(); 6] };
        let code = assemble_standard_form(&params, &f, &fill).unwrap();
        for col in [2, 5, 6] {
            assert!(code.generator.column(col).iter().all(|e| e.is_zero()));
        }
        assert!(!verify_pmds_tkl(&code).pmds);
    }

    #[test]
    fn tiny_assembly_matches_hand_layout() {
        let f = FieldSpec::new(7, 1).unwrap();
        let params = PmdsParams::new(2, 1, 1, vec![1, 1]).unwrap();
        let (a1, b1, b2) = (f.from_int(3), f.from_int(5), f.from_int(2));
        let fill = StandardFormFill { alpha: vec![a1], beta: vec![b1, b2] };
        let code = assemble_standard_form(&params, &f, &fill).unwrap();
        let expected = vec![vec![1, 5, 3, f.mul(a1, b2).value()]];
        assert_eq!(code.generator.to_values(), expected);
    }

    #[test]
    fn c_part_is_identity_then_alpha() {
        let f = FieldSpec::new(11, 1).unwrap();
        let params = PmdsParams::new(3, 2, 2, vec![1, 2, 1]).unwrap();
        let alpha: Vec<Elem> = (1..=8).map(|v| f.from_int(v)).collect();
        let beta: Vec<Elem> = (0..8).map(|v| f.from_int(v + 2)).collect();
        let code = assemble_standard_form(&params, &f, &StandardFormFill { alpha: alpha.clone(), beta }).unwrap();
        let c_cols = [0, 1, 3, 4, 7, 8];
        let c = code.generator.select_columns(&c_cols);
        let expected = FMatrix::identity(&f, 4).hstack(&FMatrix::from_fn(&f, 4, 2, |w, z| alpha[w * 2 + z])).unwrap();
        assert_eq!(c, expected);
    }

    #[test]
    fn rejects_wrong_fill_lengths() {
        let f = FieldSpec::new(3, 1).unwrap();
        let params = PmdsParams::new(2, 1, 1, vec![1, 1]).unwrap();
        let fill = StandardFormFill { alpha: vec![], beta: vec![f.one(); 2] };
        assert!(assemble_standard_form(&params, &f, &fill).is_err());
    }

    #[test]
    fn recipe_examples() {
        let p = PmdsParams::new(2, 2, 1, vec![2, 2]).unwrap();
        let r = field_size_recipe(&p, 2).unwrap();
        assert_eq!((r.n0, r.l, r.floored), (2, 8, false));
        let p = PmdsParams::new(2, 1, 1, vec![1, 1]).unwrap();
        let r = field_size_recipe(&p, 2).unwrap();
        assert_eq!((r.n0, r.l, r.floored), (1, 2, true));
        let p = PmdsParams::new(3, 3, 1, vec![2, 3, 2]).unwrap();
        let r = field_size_recipe(&p, 5).unwrap();
        assert_eq!((r.n0, r.l, r.q), (1, 9, 5));
        assert!(field_size_recipe(&p, 6).is_err());
    }

    #[test]
    fn mrd_product_small_cases() {
        let params = PmdsParams::new(2, 1, 1, vec![1, 1]).unwrap();
        let base = FieldSpec::new(2, 1).unwrap();
        let tower = FieldSpec::tower(2, 1, 2).unwrap();
        let code = construct_mrd(&params, &base, &tower).unwrap();
        assert!(code.generator.row(0).iter().all(|e| !e.is_zero()));
        assert!(verify_pmds_tkl(&code).pmds);

        let params = PmdsParams::new(2, 2, 1, vec![1, 1]).unwrap();
        let base = FieldSpec::new(2, 2).unwrap();
        let tower = FieldSpec::tower(2, 2, 4).unwrap();
        let code = construct_mrd(&params, &base, &tower).unwrap();
        assert!(verify_pmds_tkl(&code).pmds);
        assert!(verify_pmds_definition(&code).pmds);
    }

    #[test]
    fn mrd_preconditions() {
        let params = PmdsParams::new(2, 2, 1, vec![1, 1]).unwrap();
        let base = FieldSpec::new(2, 1).unwrap();
        let short = FieldSpec::tower(2, 1, 3).unwrap();
        assert!(matches!(construct_mrd(&params, &base, &short), Err(Error::Precondition(_))));
        let params = PmdsParams::new(2, 2, 1, vec![2, 1]).unwrap();
        let tower = FieldSpec::tower(2, 1, 4).unwrap();
        assert!(matches!(construct_mrd(&params, &base, &tower), Err(Error::Precondition(_))));
        let other_base = FieldSpec::new(3, 1).unwrap();
        assert!(matches!(construct_mrd(&params, &other_base, &tower), Err(Error::IncompatibleFields)));
    }
}
