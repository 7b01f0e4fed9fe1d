//! Building-block codes: MDS generators over GF(q) and Gabidulin (MRD)
//! generators over GF(q^N), each with an exact certificate.

use num_bigint::BigUint;

use crate::combinat::gaussian_binomial;
use crate::field::{Elem, FieldSpec};
use crate::matrix::FMatrix;
use crate::select::Combinations;
use crate::Error;

/// Largest number of RREF representatives `mrd_criterion` will enumerate.
pub const MRD_CERTIFY_LIMIT: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MdsCode {
    pub field: FieldSpec,
    pub n: usize,
    pub k: usize,
    pub generator: FMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MrdCode {
    pub field: FieldSpec,
    pub n: usize,
    pub k: usize,
    pub generator: FMatrix,
}

/// Vandermonde generator with rows `α_j^i`, `i = 0..k`.
///
/// Without explicit points the evaluation points are the first `n` field
/// elements in enumeration order; when `n = q + 1` all `q` elements are used
/// and the column `(0, …, 0, 1)` is appended. Explicit points of length
/// `n - 1` also request that extension column.
pub fn vandermonde_mds(field: &FieldSpec, n: usize, k: usize, points: Option<&[Elem]>) -> Result<MdsCode, Error> {
    if k == 0 || k > n {
        return Err(Error::InvalidParams(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    let q = field.order() as usize;
    let default_points: Vec<Elem>;
    let points = match points {
        Some(p) => p,
        None => {
            if n > q + 1 {
                return Err(Error::Precondition(format!("length {n} exceeds q+1 = {}", q + 1)));
            }
            default_points = field.elements().take(n.min(q)).collect();
            &default_points
        }
    };
    let extended = match points.len() {
        len if len == n => false,
        len if len + 1 == n => true,
        len => return Err(Error::Dimension(format!("{len} points for length {n}"))),
    };
    if let Some(bad) = points.iter().find(|&&a| !field.contains(a)) {
        return Err(Error::ElementOutOfRange { value: bad.value(), order: field.order() });
    }
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != points.len() {
        return Err(Error::InvalidParams("evaluation points must be distinct".into()));
    }
    let generator = FMatrix::from_fn(field, k, n, |i, j| {
        if extended && j == n - 1 {
            if i == k - 1 {
                Elem::ONE
            } else {
                Elem::ZERO
            }
        } else {
            field.pow(points[j], i as u64)
        }
    });
    Ok(MdsCode { field: field.clone(), n, k, generator })
}

/// First k-subset of columns whose minor vanishes.
pub fn first_singular_minor(g: &FMatrix) -> Result<Option<Vec<usize>>, Error> {
    let (k, n) = (g.rows(), g.cols());
    if k > n {
        return Err(Error::Dimension(format!("k = {k} exceeds n = {n}")));
    }
    Ok(Combinations::new(n, k).find(|cols| g.minor(cols).is_zero()))
}

/// All C(n, k) maximal minors are nonzero.
pub fn is_mds(g: &FMatrix) -> Result<bool, Error> {
    Ok(first_singular_minor(g)?.is_none())
}

/// Coordinates of tower elements with respect to the GF(q)-basis
/// `1, x, …, x^{N-1}` of GF(q^N).
pub struct TowerCoordinates {
    tower: FieldSpec,
    base: FieldSpec,
    prime: FieldSpec,
    basis: FMatrix,
}

impl TowerCoordinates {
    pub fn new(tower: &FieldSpec) -> Result<Self, Error> {
        let base = tower.base().ok_or(Error::NotATower)?.clone();
        let b = base.degree() as usize;
        let big_n = tower.ext_degree().expect("tower") as usize;
        let prime = FieldSpec::new(tower.characteristic(), 1)?;
        let root = tower.embedding_root().expect("tower");
        let x = tower.generator();
        let e = tower.degree() as usize;
        // Column (j*b + a) holds the GF(p)-coefficients of ρ^a x^j.
        let mut cols = Vec::with_capacity(e);
        for j in 0..big_n {
            for a in 0..b {
                let v = tower.mul(tower.pow(root, a as u64), tower.pow(x, j as u64));
                cols.push(tower.coeffs(v));
            }
        }
        let basis = FMatrix::from_fn(&prime, e, e, |r, c| Elem::from_raw(cols[c][r]));
        if basis.rank() != e {
            return Err(Error::InvalidTower { degree: tower.degree(), base_degree: base.degree() });
        }
        Ok(TowerCoordinates { tower: tower.clone(), base, prime, basis })
    }

    pub fn coordinates(&self, a: Elem) -> Result<Vec<Elem>, Error> {
        let rhs: Vec<Elem> = self.tower.coeffs(a).into_iter().map(Elem::from_raw).collect();
        let d = self.basis.solve(&rhs)?.expect("basis spans the tower");
        let b = self.base.degree() as usize;
        d.chunks(b).map(|chunk| self.base.from_coeffs(&chunk.iter().map(|e| e.value()).collect::<Vec<_>>())).collect()
    }

    pub fn prime_field(&self) -> &FieldSpec {
        &self.prime
    }
}

/// Rank over GF(q) of tower elements, via their GF(q)-coordinates.
pub fn gf_q_rank(tower: &FieldSpec, elems: &[Elem]) -> Result<usize, Error> {
    let coords = TowerCoordinates::new(tower)?;
    let base = tower.base().expect("tower");
    let rows = elems.iter().map(|&a| coords.coordinates(a)).collect::<Result<Vec<_>, _>>()?;
    let width = tower.ext_degree().expect("tower") as usize;
    let m = FMatrix::from_fn(base, rows.len(), width, |i, j| rows[i][j]);
    Ok(m.rank())
}

/// Gabidulin generator: entry `(i, j)` is `g_j^{q^i}`.
pub fn gabidulin(tower: &FieldSpec, n: usize, k: usize, g: &[Elem]) -> Result<MrdCode, Error> {
    let big_n = tower.ext_degree().ok_or(Error::NotATower)? as usize;
    if n > big_n {
        return Err(Error::Precondition(format!("length {n} exceeds extension degree {big_n}")));
    }
    if k == 0 || k > n {
        return Err(Error::InvalidParams(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    if g.len() != n {
        return Err(Error::Dimension(format!("{} points for length {n}", g.len())));
    }
    if let Some(bad) = g.iter().find(|&&a| !tower.contains(a)) {
        return Err(Error::ElementOutOfRange { value: bad.value(), order: tower.order() });
    }
    if gf_q_rank(tower, g)? != n {
        return Err(Error::Precondition("points are linearly dependent over the base field".into()));
    }
    let mut generator = FMatrix::zeros(tower, k, n);
    for i in 0..k {
        for (j, &gj) in g.iter().enumerate() {
            generator.set(i, j, tower.frobenius(gj, i as u32)?);
        }
    }
    Ok(MrdCode { field: tower.clone(), n, k, generator })
}

/// The basis `1, x, …, x^{n-1}` used as default Gabidulin points.
pub fn default_gabidulin_points(tower: &FieldSpec, n: usize) -> Vec<Elem> {
    let x = tower.generator();
    (0..n).map(|j| tower.pow(x, j as u64)).collect()
}

/// Canonical RREF matrices of full rank k in GF(q)^{k×n}, one per
/// k-dimensional row space.
pub struct RrefMatrices {
    field: FieldSpec,
    k: usize,
    n: usize,
    pivot_sets: Combinations,
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    values: Vec<u32>,
    exhausted_current: bool,
}

impl RrefMatrices {
    pub fn new(field: &FieldSpec, k: usize, n: usize) -> Self {
        RrefMatrices {
            field: field.clone(),
            k,
            n,
            pivot_sets: Combinations::new(n, k),
            pivots: Vec::new(),
            free: Vec::new(),
            values: Vec::new(),
            exhausted_current: true,
        }
    }

    fn load_pivots(&mut self, pivots: Vec<usize>) {
        self.free = (0..self.k)
            .flat_map(|i| {
                let pivots = &pivots;
                (pivots[i] + 1..self.n).filter(move |c| !pivots.contains(c)).map(move |c| (i, c))
            })
            .collect();
        self.values = vec![0; self.free.len()];
        self.pivots = pivots;
        self.exhausted_current = false;
    }

    fn build(&self) -> FMatrix {
        let mut m = FMatrix::zeros(&self.field, self.k, self.n);
        for (i, &c) in self.pivots.iter().enumerate() {
            m.set(i, c, Elem::ONE);
        }
        for (&(i, c), &v) in self.free.iter().zip(&self.values) {
            m.set(i, c, Elem::from_raw(v));
        }
        m
    }
}

impl Iterator for RrefMatrices {
    type Item = FMatrix;

    fn next(&mut self) -> Option<FMatrix> {
        if self.exhausted_current {
            let pivots = self.pivot_sets.next()?;
            self.load_pivots(pivots);
        }
        let out = self.build();
        // Odometer over the free entries.
        let q = self.field.order();
        let mut carry = true;
        for v in self.values.iter_mut() {
            *v += 1;
            if *v < q {
                carry = false;
                break;
            }
            *v = 0;
        }
        if carry {
            self.exhausted_current = true;
        }
        Some(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MrdCertificate {
    Mrd {
        checked: u64,
    },
    /// A full-rank `E` over GF(q) with `rank(G Eᵀ) < k`.
    NotMrd {
        witness: FMatrix,
    },
    /// The enumeration would exceed [`MRD_CERTIFY_LIMIT`].
    NotCertified {
        representatives: BigUint,
    },
}

impl MrdCertificate {
    pub fn is_mrd(&self) -> bool {
        matches!(self, MrdCertificate::Mrd { .. })
    }
}

/// Checks `rank(G Eᵀ) = k` for every full-rank `E ∈ GF(q)^{k×n}`.
///
/// `G E'ᵀ` with `E' = T E` equals `(G Eᵀ) Tᵀ`, so one `E` per row space
/// suffices; the enumeration runs over canonical RREF representatives.
pub fn mrd_criterion(g: &FMatrix) -> Result<MrdCertificate, Error> {
    let tower = g.field();
    let base = tower.base().ok_or(Error::NotATower)?;
    let big_n = tower.ext_degree().expect("tower") as usize;
    let (k, n) = (g.rows(), g.cols());
    if k > n || n > big_n {
        return Err(Error::Precondition(format!("need k <= n <= N, got k={k}, n={n}, N={big_n}")));
    }
    let reps = gaussian_binomial(n, k, u64::from(base.order()));
    if reps > BigUint::from(MRD_CERTIFY_LIMIT) {
        return Ok(MrdCertificate::NotCertified { representatives: reps });
    }
    let image: Vec<Elem> = base.elements().map(|a| tower.embed(a, base)).collect::<Result<_, _>>()?;
    let mut checked = 0u64;
    for e in RrefMatrices::new(base, k, n) {
        let lifted = e.map_into(tower, |a| image[a.value() as usize]);
        let prod = g.mul(&lifted.transpose())?;
        checked += 1;
        if prod.det()?.is_zero() {
            return Ok(MrdCertificate::NotMrd { witness: e });
        }
    }
    Ok(MrdCertificate::Mrd { checked })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn vandermonde_gf5() {
        let f = FieldSpec::new(5, 1).unwrap();
        let code = vandermonde_mds(&f, 4, 2, None).unwrap();
        assert_eq!(code.generator.to_values(), vec![vec![1, 1, 1, 1], vec![0, 1, 2, 3]]);
        // Oracle: the six 2x2 minors by the 2x2 formula.
        let g = code.generator.to_values();
        for a in 0..4 {
            for b in a + 1..4 {
                let d = (g[0][a] * g[1][b] + 5 * 5 - g[0][b] * g[1][a]) % 5;
                assert_ne!(d, 0);
            }
        }
        assert!(is_mds(&code.generator).unwrap());
    }

    #[test]
    fn vandermonde_edge_shapes() {
        let f = FieldSpec::new(7, 1).unwrap();
        let square = vandermonde_mds(&f, 4, 4, None).unwrap();
        assert!(is_mds(&square.generator).unwrap());
        let ones = vandermonde_mds(&f, 5, 1, None).unwrap();
        assert!(ones.generator.row(0).iter().all(|&e| e == Elem::ONE));
        assert!(is_mds(&ones.generator).unwrap());
        let ext = vandermonde_mds(&f, 8, 3, None).unwrap();
        assert!(is_mds(&ext.generator).unwrap());
        assert!(vandermonde_mds(&f, 9, 3, None).is_err());
        let dup = [Elem::ONE, Elem::ONE, Elem::ZERO];
        assert!(vandermonde_mds(&f, 3, 2, Some(&dup)).is_err());
    }

    #[test]
    fn is_mds_rejects_padded_identity() {
        let f = FieldSpec::new(3, 1).unwrap();
        let g = FMatrix::identity(&f, 2).hstack(&FMatrix::zeros(&f, 2, 1)).unwrap();
        assert!(!is_mds(&g).unwrap());
        assert!(is_mds(&FMatrix::identity(&f, 3)).unwrap());
        assert!(is_mds(&g.transpose()).is_err());
    }

    #[test]
    fn rref_enumeration_counts() {
        let f2 = FieldSpec::new(2, 1).unwrap();
        let reps: Vec<FMatrix> = RrefMatrices::new(&f2, 2, 3).collect();
        assert_eq!(reps.len(), 7);
        for r in &reps {
            assert_eq!(r.rank(), 2);
            assert_eq!(&r.rref().0, r);
        }
        let f3 = FieldSpec::new(3, 1).unwrap();
        assert_eq!(RrefMatrices::new(&f3, 2, 4).count(), 130);
        assert_eq!(RrefMatrices::new(&f3, 3, 3).count(), 1);
    }

    #[test]
    fn gabidulin_gf8() {
        let t = FieldSpec::tower(2, 1, 3).unwrap();
        let gamma = t.primitive();
        let g = [Elem::ONE, gamma, t.mul(gamma, gamma)];
        let code = gabidulin(&t, 3, 2, &g).unwrap();
        assert_eq!(mrd_criterion(&code.generator).unwrap(), MrdCertificate::Mrd { checked: 7 });
        let square = gabidulin(&t, 3, 3, &g).unwrap();
        assert!(!square.generator.det().unwrap().is_zero());
    }

    #[test]
    fn gabidulin_rejects_dependent_points() {
        let t = FieldSpec::tower(3, 1, 3).unwrap();
        let x = t.generator();
        let two_x = t.mul(t.from_int(2), x);
        assert!(gabidulin(&t, 2, 1, &[x, two_x]).is_err());
        assert!(gabidulin(&t, 4, 1, &default_gabidulin_points(&t, 3)).is_err());
    }

    #[test]
    fn one_row_mrd_iff_ratio_outside_base() {
        // Oracle: exhaustive over pairs in GF(9) viewed over GF(3).
        let t = FieldSpec::tower(3, 1, 2).unwrap();
        let base = t.base().unwrap().clone();
        let base_image: Vec<Elem> = base.elements().map(|a| t.embed(a, &base).unwrap()).collect();
        for g1 in t.elements().skip(1) {
            for g2 in t.elements() {
                let g = FMatrix::from_fn(&t, 1, 2, |_, j| if j == 0 { g1 } else { g2 });
                let ratio = t.div(g2, g1).unwrap();
                let expected = !base_image.contains(&ratio);
                assert_eq!(mrd_criterion(&g).unwrap().is_mrd(), expected);
            }
        }
    }

    #[test]
    fn coordinates_reconstruct() {
        let t = FieldSpec::tower(2, 2, 3).unwrap();
        let coords = TowerCoordinates::new(&t).unwrap();
        let base = t.base().unwrap();
        let x = t.generator();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for _ in 0..50 {
            let a = t.random(&mut rng);
            let c = coords.coordinates(a).unwrap();
            let back = c
                .iter()
                .enumerate()
                .fold(Elem::ZERO, |acc, (j, &cj)| t.add(acc, t.mul(t.embed(cj, base).unwrap(), t.pow(x, j as u64))));
            assert_eq!(back, a);
        }
    }
}
