//! Sparse matrices over `E` and operators tagged E-linear or conjugate-linear.
//!
//! A conjugate-linear operator with matrix `M` acts by `v ↦ M·σ(v)` where `σ`
//! conjugates every coordinate. Composition follows from that:
//!
//! | outer  | inner  | matrix   | result |
//! |--------|--------|----------|--------|
//! | linear | any    | `M·N`    | inner's tag |
//! | conj   | linear | `M·σ(N)` | conj   |
//! | conj   | conj   | `M·σ(N)` | linear |

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::field::{FieldElement, Tower};
use crate::Error;

/// Row-major sparse matrix; zero entries are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    tower: Tower,
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, FieldElement>>,
}

impl SparseMatrix {
    pub fn zero(tower: &Tower, rows: usize, cols: usize) -> Self {
        SparseMatrix {
            tower: tower.clone(),
            rows,
            cols,
            data: (0..rows).map(|_| BTreeMap::new()).collect(),
        }
    }

    pub fn identity(tower: &Tower, dim: usize) -> Self {
        Self::scalar(&tower.one(), dim)
    }

    pub fn scalar(c: &FieldElement, dim: usize) -> Self {
        let mut m = Self::zero(c.tower(), dim, dim);
        for i in 0..dim {
            m.set(i, i, c.clone());
        }
        m
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(tower: &Tower, diag: &[FieldElement]) -> Self {
        let mut m = Self::zero(tower, diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&FieldElement> {
        self.data[r].get(&c)
    }

    /// Entry, with zero for absent positions.
    pub fn entry(&self, r: usize, c: usize) -> FieldElement {
        self.get(r, c).cloned().unwrap_or_else(|| self.tower.zero())
    }

    pub fn set(&mut self, r: usize, c: usize, value: FieldElement) {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        if value.is_zero() {
            self.data[r].remove(&c);
        } else {
            self.data[r].insert(c, value);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, value: &FieldElement) {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        if value.is_zero() {
            return;
        }
        let row = &mut self.data[r];
        match row.get_mut(&c) {
            Some(x) => {
                *x += value;
                if x.is_zero() {
                    row.remove(&c);
                }
            }
            None => {
                row.insert(c, value.clone());
            }
        }
    }

    /// Nonzero entries as `(row, col, value)`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &FieldElement)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(&c, v)| (r, c, v)))
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BTreeMap::is_empty)
    }

    pub fn mul(&self, rhs: &SparseMatrix) -> Result<SparseMatrix, Error> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                left: self.cols,
                right: rhs.rows,
            });
        }
        let mut out = SparseMatrix::zero(&self.tower, self.rows, rhs.cols);
        for (r, row) in self.data.iter().enumerate() {
            for (&k, a) in row {
                for (&c, b) in &rhs.data[k] {
                    out.add_to(r, c, &(a * b));
                }
            }
        }
        Ok(out)
    }

    fn check_same_shape(&self, rhs: &SparseMatrix) -> Result<(), Error> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch {
                left: self.rows,
                right: rhs.rows,
            });
        }
        Ok(())
    }

    pub fn add(&self, rhs: &SparseMatrix) -> Result<SparseMatrix, Error> {
        self.check_same_shape(rhs)?;
        let mut out = self.clone();
        for (r, c, v) in rhs.iter() {
            out.add_to(r, c, v);
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &SparseMatrix) -> Result<SparseMatrix, Error> {
        self.add(&rhs.scale(&-self.tower.one()))
    }

    /// `c·M`.
    pub fn scale(&self, c: &FieldElement) -> SparseMatrix {
        let mut out = SparseMatrix::zero(&self.tower, self.rows, self.cols);
        if c.is_zero() {
            return out;
        }
        for (r, col, v) in self.iter() {
            out.data[r].insert(col, c * v);
        }
        out
    }

    /// Entrywise Galois conjugate `σ(M)`.
    pub fn conj(&self) -> SparseMatrix {
        let mut out = self.clone();
        for row in out.data.iter_mut() {
            for v in row.values_mut() {
                *v = v.conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut out = SparseMatrix::zero(&self.tower, self.cols, self.rows);
        for (r, c, v) in self.iter() {
            out.data[c].insert(r, v.clone());
        }
        out
    }

    /// `M·v` for a dense vector.
    pub fn apply(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>, Error> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                left: self.cols,
                right: v.len(),
            });
        }
        Ok(self
            .data
            .iter()
            .map(|row| {
                let mut acc = self.tower.zero();
                for (&c, a) in row {
                    acc += &(a * &v[c]);
                }
                acc
            })
            .collect())
    }

    /// Submatrix on the given row and column index lists.
    pub fn block(&self, rows: &[usize], cols: &[usize]) -> SparseMatrix {
        let col_pos: BTreeMap<usize, usize> =
            cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut out = SparseMatrix::zero(&self.tower, rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (c, v) in &self.data[r] {
                if let Some(&j) = col_pos.get(c) {
                    out.data[i].insert(j, v.clone());
                }
            }
        }
        out
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<SparseMatrix, Error> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                left: self.rows,
                right: self.cols,
            });
        }
        let n = self.rows;
        let mut a: Vec<Vec<FieldElement>> = (0..n)
            .map(|r| (0..n).map(|c| self.entry(r, c)).collect())
            .collect();
        let mut inv: Vec<Vec<FieldElement>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| if r == c { self.tower.one() } else { self.tower.zero() })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .ok_or(Error::DivisionByZero)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p_inv = a[col][col].inv()?;
            for c in 0..n {
                a[col][c] = &a[col][c] * &p_inv;
                inv[col][c] = &inv[col][c] * &p_inv;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for c in 0..n {
                    let da = &f * &a[col][c];
                    let di = &f * &inv[col][c];
                    a[r][c] = &a[r][c] - &da;
                    inv[r][c] = &inv[r][c] - &di;
                }
            }
        }
        let mut out = SparseMatrix::zero(&self.tower, n, n);
        for (r, row) in inv.into_iter().enumerate() {
            for (c, v) in row.into_iter().enumerate() {
                out.set(r, c, v);
            }
        }
        Ok(out)
    }

    /// Every entry lies in `E0`.
    pub fn is_base(&self) -> bool {
        self.iter().all(|(_, _, v)| v.is_base())
    }

    /// The `E0`-matrix of this operator on `Res_{E/E0}` of the underlying
    /// space, in the basis `{e_1..e_d, √m2·e_1..√m2·e_d}`.
    ///
    /// Writing `M = P + √m2·Q` with `P, Q` over `E0`, a linear operator becomes
    /// `[[P, m2·Q], [Q, P]]` and a conjugate-linear one `[[P, -m2·Q], [Q, -P]]`.
    pub fn realify(&self, linearity: Linearity) -> SparseMatrix {
        let d_r = self.rows;
        let d_c = self.cols;
        let m2 = self.tower.m2();
        let mut out = SparseMatrix::zero(&self.tower, 2 * d_r, 2 * d_c);
        for (r, c, v) in self.iter() {
            let co = v.coords();
            let p = self.tower.base(co[0].clone(), co[1].clone());
            let q = self.tower.base(co[2].clone(), co[3].clone());
            let (pq, pp) = match linearity {
                Linearity::Linear => (&m2 * &q, p.clone()),
                Linearity::ConjugateLinear => (-(&m2 * &q), -p.clone()),
            };
            out.set(r, c, p);
            out.set(r, d_c + c, pq);
            out.set(d_r + r, c, q);
            out.set(d_r + r, d_c + c, pp);
        }
        out
    }
}

/// Whether an operator commutes with scalars or conjugates them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Linearity {
    Linear,
    ConjugateLinear,
}

impl Linearity {
    pub fn then(self, other: Linearity) -> Linearity {
        if self == other {
            Linearity::Linear
        } else {
            Linearity::ConjugateLinear
        }
    }
}

/// Square matrix over `E` with a linearity tag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinOp {
    matrix: SparseMatrix,
    linearity: Linearity,
}

impl LinOp {
    pub fn new(matrix: SparseMatrix, linearity: Linearity) -> Result<Self, Error> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                left: matrix.rows(),
                right: matrix.cols(),
            });
        }
        Ok(LinOp { matrix, linearity })
    }

    pub fn linear(matrix: SparseMatrix) -> Result<Self, Error> {
        Self::new(matrix, Linearity::Linear)
    }

    pub fn conjugate_linear(matrix: SparseMatrix) -> Result<Self, Error> {
        Self::new(matrix, Linearity::ConjugateLinear)
    }

    pub fn identity(tower: &Tower, dim: usize) -> Self {
        LinOp {
            matrix: SparseMatrix::identity(tower, dim),
            linearity: Linearity::Linear,
        }
    }

    pub fn zero(tower: &Tower, dim: usize, linearity: Linearity) -> Self {
        LinOp {
            matrix: SparseMatrix::zero(tower, dim, dim),
            linearity,
        }
    }

    /// `c·Id`.
    pub fn scalar(c: &FieldElement, dim: usize) -> Self {
        LinOp {
            matrix: SparseMatrix::scalar(c, dim),
            linearity: Linearity::Linear,
        }
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn linearity(&self) -> Linearity {
        self.linearity
    }

    pub fn is_linear(&self) -> bool {
        self.linearity == Linearity::Linear
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn tower(&self) -> &Tower {
        self.matrix.tower()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn apply(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>, Error> {
        match self.linearity {
            Linearity::Linear => self.matrix.apply(v),
            Linearity::ConjugateLinear => {
                let conj: Vec<FieldElement> = v.iter().map(FieldElement::conj).collect();
                self.matrix.apply(&conj)
            }
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinOp) -> Result<LinOp, Error> {
        let rhs = match self.linearity {
            Linearity::Linear => inner.matrix.clone(),
            Linearity::ConjugateLinear => inner.matrix.conj(),
        };
        Ok(LinOp {
            matrix: self.matrix.mul(&rhs)?,
            linearity: self.linearity.then(inner.linearity),
        })
    }

    fn check_same_kind(&self, rhs: &LinOp) -> Result<(), Error> {
        if self.linearity != rhs.linearity {
            return Err(Error::LinearityMismatch);
        }
        Ok(())
    }

    pub fn add(&self, rhs: &LinOp) -> Result<LinOp, Error> {
        self.check_same_kind(rhs)?;
        Ok(LinOp {
            matrix: self.matrix.add(&rhs.matrix)?,
            linearity: self.linearity,
        })
    }

    pub fn sub(&self, rhs: &LinOp) -> Result<LinOp, Error> {
        self.check_same_kind(rhs)?;
        Ok(LinOp {
            matrix: self.matrix.sub(&rhs.matrix)?,
            linearity: self.linearity,
        })
    }

    /// The operator `v ↦ c·self(v)`.
    pub fn scale(&self, c: &FieldElement) -> LinOp {
        LinOp {
            matrix: self.matrix.scale(c),
            linearity: self.linearity,
        }
    }

    /// `[self, rhs] = self∘rhs − rhs∘self`.
    pub fn commutator(&self, rhs: &LinOp) -> Result<LinOp, Error> {
        self.compose(rhs)?.sub(&rhs.compose(self)?)
    }

    /// `self∘rhs + rhs∘self`.
    pub fn anticommutator(&self, rhs: &LinOp) -> Result<LinOp, Error> {
        self.compose(rhs)?.add(&rhs.compose(self)?)
    }

    /// True when `self∘rhs == rhs∘self` exactly.
    pub fn commutes_with(&self, rhs: &LinOp) -> Result<bool, Error> {
        Ok(self.compose(rhs)? == rhs.compose(self)?)
    }

    /// Restriction to the coordinate subspace spanned by `indices`, which
    /// the operator must preserve.
    pub fn block(&self, indices: &[usize]) -> LinOp {
        LinOp {
            matrix: self.matrix.block(indices, indices),
            linearity: self.linearity,
        }
    }

    /// `E0`-matrix on the restriction of scalars.
    pub fn realify(&self) -> SparseMatrix {
        self.matrix.realify(self.linearity)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{random_element, Tower};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(t: &Tower, rng: &mut ChaCha8Rng, dim: usize) -> SparseMatrix {
        let mut m = SparseMatrix::zero(t, dim, dim);
        for r in 0..dim {
            for c in 0..dim {
                m.set(r, c, random_element(t, rng, 5, false));
            }
        }
        m
    }

    #[test]
    fn composition_matches_sequential_application() {
        let t = Tower::biquadratic(2, -1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let kinds = [Linearity::Linear, Linearity::ConjugateLinear];
        for _ in 0..10 {
            for &ka in &kinds {
                for &kb in &kinds {
                    let a = LinOp::new(random_matrix(&t, &mut rng, 4), ka).unwrap();
                    let b = LinOp::new(random_matrix(&t, &mut rng, 4), kb).unwrap();
                    let v: Vec<_> = (0..4).map(|_| random_element(&t, &mut rng, 5, false)).collect();
                    let ab = a.compose(&b).unwrap();
                    assert_eq!(ab.linearity(), ka.then(kb));
                    assert_eq!(ab.apply(&v).unwrap(), a.apply(&b.apply(&v).unwrap()).unwrap());
                }
            }
        }
    }

    #[test]
    fn conjugate_linear_pulls_scalars_out_conjugated() {
        let t = Tower::imaginary_quadratic(-2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = LinOp::conjugate_linear(random_matrix(&t, &mut rng, 3)).unwrap();
        let v: Vec<_> = (0..3).map(|_| random_element(&t, &mut rng, 5, false)).collect();
        let c = random_element(&t, &mut rng, 5, false);
        let cv: Vec<_> = v.iter().map(|x| &c * x).collect();
        let lhs = a.apply(&cv).unwrap();
        let rhs: Vec<_> = a.apply(&v).unwrap().iter().map(|x| &c.conj() * x).collect();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn realification_is_multiplicative() {
        let t = Tower::biquadratic(3, -5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let kinds = [Linearity::Linear, Linearity::ConjugateLinear];
        for &ka in &kinds {
            for &kb in &kinds {
                let a = LinOp::new(random_matrix(&t, &mut rng, 3), ka).unwrap();
                let b = LinOp::new(random_matrix(&t, &mut rng, 3), kb).unwrap();
                let lhs = a.compose(&b).unwrap().realify();
                let rhs = a.realify().mul(&b.realify()).unwrap();
                assert_eq!(lhs, rhs);
                assert!(lhs.is_base());
            }
        }
    }

    #[test]
    fn mixed_linearity_sum_rejected() {
        let t = Tower::imaginary_quadratic(-1).unwrap();
        let a = LinOp::identity(&t, 2);
        let b = LinOp::zero(&t, 2, Linearity::ConjugateLinear);
        assert_eq!(a.add(&b), Err(Error::LinearityMismatch));
    }

    #[test]
    fn inverse_roundtrip() {
        let t = Tower::biquadratic(2, -3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = random_matrix(&t, &mut rng, 4);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), SparseMatrix::identity(&t, 4));
        assert!(SparseMatrix::zero(&t, 2, 2).inverse().is_err());
    }

    #[test]
    fn zeros_are_not_stored() {
        let t = Tower::imaginary_quadratic(-1).unwrap();
        let mut m = SparseMatrix::identity(&t, 3);
        m.add_to(1, 1, &-t.one());
        assert_eq!(m.nnz(), 2);
        m.set(0, 2, t.zero());
        assert_eq!(m.nnz(), 2);
        assert!(m.sub(&m).unwrap().is_zero());
    }
}
