//! Dense matrices over a finite field.

use std::fmt;

use rand::Rng;

use crate::field::{Elem, FieldSpec};
use crate::select::Combinations;
use crate::Error;

/// Row-major dense matrix with its field attached.
#[derive(Clone, PartialEq, Eq)]
pub struct FMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
    field: FieldSpec,
}

impl fmt::Debug for FMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "FMatrix {}x{} over GF({}^{})",
            self.rows,
            self.cols,
            self.field.characteristic(),
            self.field.degree()
        )?;
        for i in 0..self.rows {
            let row: Vec<u32> = self.row(i).iter().map(|e| e.value()).collect();
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

impl FMatrix {
    pub fn new(field: &FieldSpec, rows: usize, cols: usize, data: Vec<Elem>) -> Result<Self, Error> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        if let Some(bad) = data.iter().find(|&&e| !field.contains(e)) {
            return Err(Error::ElementOutOfRange { value: bad.value(), order: field.order() });
        }
        Ok(FMatrix { rows, cols, data, field: field.clone() })
    }

    /// Builds from rows of packed element values.
    pub fn from_values(field: &FieldSpec, rows: &[Vec<u32>]) -> Result<Self, Error> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let data = rows.iter().flatten().map(|&v| field.elem(v)).collect::<Result<Vec<_>, _>>()?;
        Self::new(field, r, c, data)
    }

    pub fn from_fn(field: &FieldSpec, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        FMatrix { rows, cols, data, field: field.clone() }
    }

    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        FMatrix { rows, cols, data: vec![Elem::ZERO; rows * cols], field: field.clone() }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        Self::from_fn(field, n, n, |i, j| if i == j { Elem::ONE } else { Elem::ZERO })
    }

    pub fn random<R: Rng + ?Sized>(field: &FieldSpec, rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows * cols).map(|_| field.random(rng)).collect();
        FMatrix { rows, cols, data, field: field.clone() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_values(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|e| e.value()).collect()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn mul(&self, other: &FMatrix) -> Result<Self, Error> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.field != other.field {
            return Err(Error::IncompatibleFields);
        }
        let f = &self.field;
        Ok(Self::from_fn(f, self.rows, other.cols, |i, j| {
            (0..self.cols).fold(Elem::ZERO, |acc, t| f.add(acc, f.mul(self.get(i, t), other.get(t, j))))
        }))
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, v: &[Elem]) -> Result<Vec<Elem>, Error> {
        if v.len() != self.rows {
            return Err(Error::Dimension(format!("vector of length {} against {} rows", v.len(), self.rows)));
        }
        let f = &self.field;
        Ok((0..self.cols)
            .map(|j| (0..self.rows).fold(Elem::ZERO, |acc, i| f.add(acc, f.mul(v[i], self.get(i, j)))))
            .collect())
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[Elem]) -> Result<Vec<Elem>, Error> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!("vector of length {} against {} columns", v.len(), self.cols)));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(Elem::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
            .collect())
    }

    /// Applies `f` entrywise, re-homing the result in `target`.
    pub fn map_into(&self, target: &FieldSpec, f: impl FnMut(Elem) -> Elem) -> Self {
        FMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().copied().map(f).collect(),
            field: target.clone(),
        }
    }

    pub fn hstack(&self, other: &FMatrix) -> Result<Self, Error> {
        if self.rows != other.rows {
            return Err(Error::Dimension("hstack row counts differ".into()));
        }
        Ok(Self::from_fn(&self.field, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                other.get(i, j - self.cols)
            }
        }))
    }

    pub fn vstack(&self, other: &FMatrix) -> Result<Self, Error> {
        if self.cols != other.cols {
            return Err(Error::Dimension("vstack column counts differ".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(FMatrix { rows: self.rows + other.rows, cols: self.cols, data, field: self.field.clone() })
    }

    /// Entry-exact extraction; `rows = None` keeps every row.
    pub fn submatrix(&self, rows: Option<&[usize]>, cols: &[usize]) -> Result<Self, Error> {
        let all_rows: Vec<usize>;
        let rows = match rows {
            Some(r) => r,
            None => {
                all_rows = (0..self.rows).collect();
                &all_rows
            }
        };
        if let Some(&i) = rows.iter().find(|&&i| i >= self.rows) {
            return Err(Error::OutOfBounds { index: i, len: self.rows });
        }
        if let Some(&j) = cols.iter().find(|&&j| j >= self.cols) {
            return Err(Error::OutOfBounds { index: j, len: self.cols });
        }
        Ok(Self::from_fn(&self.field, rows.len(), cols.len(), |a, b| self.get(rows[a], cols[b])))
    }

    /// Columns `cols` of every row; panics on an out-of-range index.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(&self.field, self.rows, cols.len(), |i, j| self.get(i, cols[j]))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// In-place reduction to RREF; returns the pivot columns.
    fn eliminate(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = f.inv(self.get(r, c)).expect("pivot is nonzero");
            for j in c..self.cols {
                let v = f.mul(self.get(r, j), inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = f.sub(self.get(i, j), f.mul(factor, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.eliminate();
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        // Forward elimination only.
        let f = &self.field;
        let mut m = self.data.clone();
        let cols = self.cols;
        let mut r = 0;
        for c in 0..cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !m[i * cols + c].is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    m.swap(r * cols + j, pr * cols + j);
                }
            }
            let inv = f.inv(m[r * cols + c]).expect("pivot is nonzero");
            for i in r + 1..self.rows {
                let factor = f.mul(m[i * cols + c], inv);
                if factor.is_zero() {
                    continue;
                }
                for j in c..cols {
                    m[i * cols + j] = f.sub(m[i * cols + j], f.mul(factor, m[r * cols + j]));
                }
            }
            r += 1;
        }
        r
    }

    pub fn det(&self) -> Result<Elem, Error> {
        if self.rows != self.cols {
            return Err(Error::Dimension(format!("determinant of a {}x{} matrix", self.rows, self.cols)));
        }
        Ok(det_in_place(&self.field, self.data.clone(), self.rows))
    }

    /// Determinant of the square submatrix on `cols` (all rows).
    pub fn minor(&self, cols: &[usize]) -> Elem {
        debug_assert_eq!(cols.len(), self.rows);
        let n = self.rows;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for &c in cols {
                data.push(self.get(i, c));
            }
        }
        det_in_place(&self.field, data, n)
    }

    /// Some `x` with `self * x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Elem]) -> Result<Option<Vec<Elem>>, Error> {
        if b.len() != self.rows {
            return Err(Error::Dimension(format!("right-hand side of length {} for {} rows", b.len(), self.rows)));
        }
        let rhs = FMatrix { rows: self.rows, cols: 1, data: b.to_vec(), field: self.field.clone() };
        let (red, pivots) = self.hstack(&rhs)?.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Elem::ZERO; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = red.get(r, self.cols);
        }
        Ok(Some(x))
    }

    /// Every square submatrix, of every size, is nonsingular.
    pub fn is_superregular(&self) -> bool {
        let max = self.rows.min(self.cols);
        for size in 1..=max {
            for rows in Combinations::new(self.rows, size) {
                for cols in Combinations::new(self.cols, size) {
                    let sub = self.submatrix(Some(&rows), &cols).expect("in range");
                    if sub.det().expect("square").is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn det_in_place(f: &FieldSpec, mut m: Vec<Elem>, n: usize) -> Elem {
    let mut det = Elem::ONE;
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !m[i * n + c].is_zero()) else {
            return Elem::ZERO;
        };
        if pr != c {
            for j in 0..n {
                m.swap(c * n + j, pr * n + j);
            }
            det = f.neg(det);
        }
        let pivot = m[c * n + c];
        det = f.mul(det, pivot);
        let inv = f.inv(pivot).expect("pivot is nonzero");
        for i in c + 1..n {
            let factor = f.mul(m[i * n + c], inv);
            if factor.is_zero() {
                continue;
            }
            for j in c + 1..n {
                m[i * n + j] = f.sub(m[i * n + j], f.mul(factor, m[c * n + j]));
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn gf(p: u32) -> FieldSpec {
        FieldSpec::new(p, 1).unwrap()
    }

    #[test]
    fn rank_examples() {
        let f = gf(2);
        assert_eq!(FMatrix::identity(&f, 4).rank(), 4);
        assert_eq!(FMatrix::zeros(&f, 3, 5).rank(), 0);
        assert_eq!(FMatrix::from_values(&f, &[vec![1, 1], vec![1, 1]]).unwrap().rank(), 1);
    }

    #[test]
    fn det_examples() {
        let f = gf(5);
        assert_eq!(FMatrix::identity(&f, 3).det().unwrap(), Elem::ONE);
        let m = FMatrix::from_values(&f, &[vec![1, 1], vec![2, 3]]).unwrap();
        assert_eq!(m.det().unwrap().value(), 1);
        assert!(FMatrix::zeros(&f, 2, 3).det().is_err());
    }

    #[test]
    fn det_matches_rank_on_random_gf7() {
        let f = gf(7);
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let mut singular = 0;
        for _ in 0..1000 {
            let m = FMatrix::random(&f, 4, 4, &mut rng);
            let d = m.det().unwrap();
            assert_eq!(!d.is_zero(), m.rank() == 4);
            singular += usize::from(d.is_zero());
        }
        assert!(singular > 0);
    }

    #[test]
    fn det_against_leibniz() {
        // Oracle: permutation expansion over GF(7).
        fn leibniz(f: &FieldSpec, m: &FMatrix) -> Elem {
            let n = m.rows();
            let mut perm: Vec<usize> = (0..n).collect();
            let mut total = Elem::ZERO;
            permute(&mut perm, 0, &mut |p| {
                let inversions =
                    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
                let mut term = (0..n).fold(Elem::ONE, |acc, i| f.mul(acc, m.get(i, p[i])));
                if inversions % 2 == 1 {
                    term = f.neg(term);
                }
                total = f.add(total, term);
            });
            total
        }
        fn permute(v: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
            if k == v.len() {
                visit(v);
                return;
            }
            for i in k..v.len() {
                v.swap(k, i);
                permute(v, k + 1, visit);
                v.swap(k, i);
            }
        }
        let f = gf(7);
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        for n in 1..=4 {
            for _ in 0..50 {
                let m = FMatrix::random(&f, n, n, &mut rng);
                assert_eq!(m.det().unwrap(), leibniz(&f, &m));
            }
        }
    }

    #[test]
    fn rref_produces_identity_block() {
        let f = gf(5);
        let m = FMatrix::from_values(&f, &[vec![1, 2, 3, 4], vec![2, 1, 0, 1]]).unwrap();
        let (r, pivots) = m.rref();
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(r.submatrix(None, &[0, 1]).unwrap(), FMatrix::identity(&f, 2));
        let (rr, _) = r.rref();
        assert_eq!(rr, r);
        let (id, p) = FMatrix::identity(&f, 3).rref();
        assert_eq!(id, FMatrix::identity(&f, 3));
        assert_eq!(p, vec![0, 1, 2]);
    }

    #[test]
    fn solve_cases() {
        let f = gf(7);
        let b: Vec<Elem> = [3, 0, 6].iter().map(|&v| f.elem(v).unwrap()).collect();
        assert_eq!(FMatrix::identity(&f, 3).solve(&b).unwrap(), Some(b.clone()));
        let inconsistent = FMatrix::from_values(&f, &[vec![1, 1], vec![1, 1]]).unwrap();
        let rhs = [Elem::ONE, Elem::ZERO];
        assert_eq!(inconsistent.solve(&rhs).unwrap(), None);
        assert!(inconsistent.solve(&b).is_err());

        let mut rng = ChaCha20Rng::seed_from_u64(9);
        for _ in 0..50 {
            let a = FMatrix::random(&f, 6, 3, &mut rng);
            if a.rank() < 3 {
                continue;
            }
            let x: Vec<Elem> = (0..3).map(|_| f.random(&mut rng)).collect();
            let rhs = a.mul_vec(&x).unwrap();
            assert_eq!(a.solve(&rhs).unwrap(), Some(x));
        }
    }

    #[test]
    fn submatrix_extraction() {
        let f = gf(11);
        let m = FMatrix::from_values(&f, &[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]).unwrap();
        assert_eq!(m.submatrix(None, &[0, 1, 2]).unwrap(), m);
        assert_eq!(m.submatrix(None, &[1]).unwrap().to_values(), vec![vec![2], vec![5], vec![8]]);
        assert_eq!(m.submatrix(Some(&[1, 2]), &[1, 2]).unwrap().to_values(), vec![vec![5, 6], vec![8, 9]]);
        assert!(matches!(m.submatrix(None, &[3]), Err(Error::OutOfBounds { index: 3, len: 3 })));
    }

    #[test]
    fn superregular_examples() {
        let f = gf(5);
        assert!(FMatrix::from_values(&f, &[vec![1, 1], vec![1, 2]]).unwrap().is_superregular());
        assert!(!FMatrix::from_values(&f, &[vec![1, 0], vec![1, 2]]).unwrap().is_superregular());
        assert!(FMatrix::from_values(&f, &[vec![3]]).unwrap().is_superregular());
        assert!(!FMatrix::from_values(&f, &[vec![1, 1], vec![1, 1]]).unwrap().is_superregular());
    }
}
