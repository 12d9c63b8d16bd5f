//! The exterior algebra `⋀•W1` on `n` generators, indexed by bitmask blades,
//! and the Clifford action of `W = W1 ⊕ W2` on it.
//!
//! Basis vector `e_I` with `I ⊆ {1..n}` sits at coordinate `mask(I)`, bit
//! `i-1` standing for `e_i`. Blades are ascending-ordered wedges.
//!
//! Signs: `ℓ(e_i)e_I = (-1)^{#{j∈I : j<i}} e_{I∪{i}}` and likewise for
//! `ι(e_{n+i})`. With `b` scaled so that `b(e_i, e_{n+i}) = 1/2` these satisfy
//! `ℓ(e_i)ι(e_{n+i}) + ι(e_{n+i})ℓ(e_i) = Id`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::field::{FieldElement, Tower};
use crate::operator::{LinOp, SparseMatrix};
use crate::Error;

/// Largest supported `n`; operators are `2^n × 2^n`.
pub const MAX_HALF_DIM: usize = 12;

pub(crate) fn check_half_dim(n: usize) -> Result<(), Error> {
    if n == 0 || n > MAX_HALF_DIM {
        return Err(Error::UnsupportedDimension {
            n,
            max: MAX_HALF_DIM,
        });
    }
    Ok(())
}

/// `e_I` for `I` encoded as a bitmask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Blade(pub u32);

impl Blade {
    /// Blade from 1-based indices in any order (duplicates collapse).
    pub fn from_indices(indices: &[usize]) -> Blade {
        Blade(indices.iter().fold(0, |m, &i| m | (1 << (i - 1))))
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn parity(self) -> Parity {
        if self.degree() % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << (i - 1)) != 0
    }

    /// Ascending 1-based indices.
    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|b| self.0 & (1 << b) != 0).map(|b| b + 1).collect()
    }

    /// The complementary blade `I'` inside `{1..n}`.
    pub fn complement(self, n: usize) -> Blade {
        Blade(!self.0 & full_mask(n))
    }

    /// `#{j ∈ I : j < i}`.
    pub fn count_below(self, i: usize) -> u32 {
        (self.0 & ((1u32 << (i - 1)) - 1)).count_ones()
    }
}

pub(crate) fn full_mask(n: usize) -> u32 {
    ((1u64 << n) - 1) as u32
}

/// Sign of `e_I ∧ e_J` relative to `e_{I∪J}`, or `None` when they overlap.
pub fn wedge_sign(a: Blade, b: Blade) -> Option<i8> {
    if a.0 & b.0 != 0 {
        return None;
    }
    // inversions: pairs x ∈ a, y ∈ b with x > y
    let inversions: u32 = b.indices().iter().map(|&y| (a.0 >> y).count_ones()).sum();
    Some(if inversions % 2 == 0 { 1 } else { -1 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

/// Parity tag of a spinor; the zero vector counts as even.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VectorParity {
    Even,
    Odd,
    Mixed,
}

/// Sparse element of `⋀•W1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinorVector {
    n: usize,
    coeffs: BTreeMap<Blade, FieldElement>,
}

impl SpinorVector {
    pub fn zero(n: usize) -> Self {
        SpinorVector {
            n,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn basis(n: usize, blade: Blade, tower: &Tower) -> Self {
        let mut v = Self::zero(n);
        v.add_term(blade, &tower.one());
        v
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_term(&mut self, blade: Blade, c: &FieldElement) {
        assert!(blade.0 & !full_mask(self.n) == 0, "blade outside W1");
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&blade) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.coeffs.remove(&blade);
                }
            }
            None => {
                self.coeffs.insert(blade, c.clone());
            }
        }
    }

    pub fn coeff(&self, blade: Blade) -> Option<&FieldElement> {
        self.coeffs.get(&blade)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, &FieldElement)> {
        self.coeffs.iter().map(|(b, c)| (*b, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn parity(&self) -> VectorParity {
        let even = self.coeffs.keys().any(|b| b.parity() == Parity::Even);
        let odd = self.coeffs.keys().any(|b| b.parity() == Parity::Odd);
        match (even, odd) {
            (_, false) => VectorParity::Even,
            (false, true) => VectorParity::Odd,
            (true, true) => VectorParity::Mixed,
        }
    }

    pub fn to_dense(&self, tower: &Tower) -> Vec<FieldElement> {
        let mut v = alloc::vec![tower.zero(); 1 << self.n];
        for (b, c) in &self.coeffs {
            v[b.0 as usize] = c.clone();
        }
        v
    }

    pub fn from_dense(n: usize, v: &[FieldElement]) -> Self {
        let mut out = Self::zero(n);
        for (i, c) in v.iter().enumerate() {
            out.add_term(Blade(i as u32), c);
        }
        out
    }

    /// `op(self)` for an operator on the full `⋀•W1`.
    pub fn apply(&self, op: &LinOp, tower: &Tower) -> Result<SpinorVector, Error> {
        let out = op.apply(&self.to_dense(tower))?;
        Ok(Self::from_dense(self.n, &out))
    }

    /// Exterior product, computed blade by blade from [`wedge_sign`].
    pub fn wedge(&self, rhs: &SpinorVector) -> SpinorVector {
        let mut out = Self::zero(self.n);
        for (a, x) in &self.coeffs {
            for (b, y) in &rhs.coeffs {
                if let Some(s) = wedge_sign(*a, *b) {
                    let p = x * y;
                    let p = if s < 0 { -p } else { p };
                    out.add_term(Blade(a.0 | b.0), &p);
                }
            }
        }
        out
    }
}

fn check_index(i: usize, n: usize) -> Result<(), Error> {
    check_half_dim(n)?;
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, max: n });
    }
    Ok(())
}

fn signed(tower: &Tower, s: u32) -> FieldElement {
    if s % 2 == 0 {
        tower.one()
    } else {
        -tower.one()
    }
}

/// `ℓ(e_i)`: wedge with `e_i` from the left.
pub fn wedge_op(tower: &Tower, i: usize, n: usize) -> Result<LinOp, Error> {
    check_index(i, n)?;
    let bit = 1u32 << (i - 1);
    let mut m = SparseMatrix::zero(tower, 1 << n, 1 << n);
    for mask in 0..(1u32 << n) {
        if mask & bit == 0 {
            let s = Blade(mask).count_below(i);
            m.set((mask | bit) as usize, mask as usize, signed(tower, s));
        }
    }
    LinOp::linear(m)
}

/// `ι(e_{n+i})`: interior product with `e_{n+i}` viewed in `W1^∨`.
pub fn contraction_op(tower: &Tower, i: usize, n: usize) -> Result<LinOp, Error> {
    check_index(i, n)?;
    let bit = 1u32 << (i - 1);
    let mut m = SparseMatrix::zero(tower, 1 << n, 1 << n);
    for mask in 0..(1u32 << n) {
        if mask & bit != 0 {
            let s = Blade(mask).count_below(i);
            m.set((mask ^ bit) as usize, mask as usize, signed(tower, s));
        }
    }
    LinOp::linear(m)
}

/// `γ(e_j)` for `1 ≤ j ≤ 2n`.
pub fn gamma(tower: &Tower, j: usize, n: usize) -> Result<LinOp, Error> {
    check_half_dim(n)?;
    if j == 0 || j > 2 * n {
        return Err(Error::IndexOutOfRange {
            index: j,
            max: 2 * n,
        });
    }
    if j <= n {
        wedge_op(tower, j, n)
    } else {
        contraction_op(tower, j - n, n)
    }
}

/// `γ(v) = Σ v_j γ(e_j)` for `v` given in the basis `e_1..e_2n`.
pub fn clifford_gamma(tower: &Tower, v: &[FieldElement], n: usize) -> Result<LinOp, Error> {
    check_half_dim(n)?;
    if v.len() != 2 * n {
        return Err(Error::DimensionMismatch {
            left: 2 * n,
            right: v.len(),
        });
    }
    let mut acc = LinOp::zero(tower, 1 << n, crate::operator::Linearity::Linear);
    for (j, c) in v.iter().enumerate() {
        if !c.is_zero() {
            acc = acc.add(&gamma(tower, j + 1, n)?.scale(c))?;
        }
    }
    Ok(acc)
}

/// Set of degree shifts `deg(row) - deg(col)` over the nonzero entries of an
/// operator on `⋀•W1`.
pub fn degree_profile(op: &LinOp) -> BTreeSet<i32> {
    op.matrix()
        .iter()
        .map(|(r, c, _)| Blade(r as u32).degree() as i32 - Blade(c as u32).degree() as i32)
        .collect()
}

/// Projection onto `⋀^k W1`.
pub fn degree_projection(tower: &Tower, k: usize, n: usize) -> Result<LinOp, Error> {
    check_half_dim(n)?;
    let mut m = SparseMatrix::zero(tower, 1 << n, 1 << n);
    for mask in 0..(1u32 << n) {
        if Blade(mask).degree() == k {
            m.set(mask as usize, mask as usize, tower.one());
        }
    }
    LinOp::linear(m)
}

/// Coordinates of `⋀^even` or `⋀^odd`, ascending by mask. Position `p` of a
/// half-spin operator corresponds to blade `half_spin_masks(..)[p]`.
pub fn half_spin_masks(n: usize, parity: Parity) -> Vec<usize> {
    (0..(1usize << n))
        .filter(|&m| Blade(m as u32).parity() == parity)
        .collect()
}

/// Block of a parity-preserving operator on `S+ = ⋀^even` or `S- = ⋀^odd`.
pub fn restrict_half_spin(op: &LinOp, n: usize, parity: Parity) -> Result<LinOp, Error> {
    check_half_dim(n)?;
    if op.dim() != 1 << n {
        return Err(Error::DimensionMismatch {
            left: 1 << n,
            right: op.dim(),
        });
    }
    if degree_profile(op).iter().any(|d| d % 2 != 0) {
        return Err(Error::ParityMixing);
    }
    Ok(op.block(&half_spin_masks(n, parity)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::Linearity;

    fn t() -> Tower {
        Tower::biquadratic(2, -1).unwrap()
    }

    fn basis(n: usize, idx: &[usize]) -> SpinorVector {
        SpinorVector::basis(n, Blade::from_indices(idx), &t())
    }

    #[test]
    fn wedge_examples() {
        let tw = t();
        let n = 3;
        let l1 = wedge_op(&tw, 1, n).unwrap();
        assert_eq!(basis(n, &[]).apply(&l1, &tw).unwrap(), basis(n, &[1]));
        assert!(basis(n, &[1]).apply(&l1, &tw).unwrap().is_zero());
        let l2 = wedge_op(&tw, 2, n).unwrap();
        let mut expected = SpinorVector::zero(n);
        expected.add_term(Blade::from_indices(&[1, 2, 3]), &-tw.one());
        assert_eq!(basis(n, &[1, 3]).apply(&l2, &tw).unwrap(), expected);
    }

    #[test]
    fn contraction_examples() {
        let tw = t();
        let n = 3;
        let i1 = contraction_op(&tw, 1, n).unwrap();
        assert_eq!(basis(n, &[1]).apply(&i1, &tw).unwrap(), basis(n, &[]));
        let i2 = contraction_op(&tw, 2, n).unwrap();
        assert!(basis(n, &[1]).apply(&i2, &tw).unwrap().is_zero());
        let mut expected = SpinorVector::zero(n);
        expected.add_term(Blade::from_indices(&[1]), &-tw.one());
        assert_eq!(basis(n, &[1, 2]).apply(&i2, &tw).unwrap(), expected);
    }

    #[test]
    fn index_errors() {
        let tw = t();
        assert!(wedge_op(&tw, 0, 3).is_err());
        assert!(wedge_op(&tw, 4, 3).is_err());
        assert!(contraction_op(&tw, 4, 3).is_err());
        assert!(gamma(&tw, 7, 3).is_err());
        assert!(wedge_op(&tw, 1, 0).is_err());
        assert!(wedge_op(&tw, 1, MAX_HALF_DIM + 1).is_err());
    }

    #[test]
    fn clifford_relations_small() {
        let tw = t();
        for n in [2usize, 3, 4] {
            let id = LinOp::identity(&tw, 1 << n);
            let zero = LinOp::zero(&tw, 1 << n, Linearity::Linear);
            for a in 1..=2 * n {
                for b in 1..=2 * n {
                    let ga = gamma(&tw, a, n).unwrap();
                    let gb = gamma(&tw, b, n).unwrap();
                    let ac = ga.anticommutator(&gb).unwrap();
                    let paired = a + n == b || b + n == a;
                    assert_eq!(ac, if paired { id.clone() } else { zero.clone() }, "{a} {b}");
                }
            }
        }
    }

    #[test]
    fn clifford_gamma_linear_in_v() {
        let tw = t();
        let n = 2;
        let v = [tw.int(2), tw.zero(), tw.sqrt_m2(), tw.frac(1, 3)];
        let g = clifford_gamma(&tw, &v, n).unwrap();
        let expected = gamma(&tw, 1, n)
            .unwrap()
            .scale(&tw.int(2))
            .add(&gamma(&tw, 3, n).unwrap().scale(&tw.sqrt_m2()))
            .unwrap()
            .add(&gamma(&tw, 4, n).unwrap().scale(&tw.frac(1, 3)))
            .unwrap();
        assert_eq!(g, expected);
        assert!(clifford_gamma(&tw, &v[..3], n).is_err());
    }

    #[test]
    fn restrict_examples() {
        let tw = t();
        let n = 2;
        let id = LinOp::identity(&tw, 4);
        assert_eq!(
            restrict_half_spin(&id, n, Parity::Even).unwrap(),
            LinOp::identity(&tw, 2)
        );
        let l1 = wedge_op(&tw, 1, n).unwrap();
        let l2 = wedge_op(&tw, 2, n).unwrap();
        let prod = l1.compose(&l2).unwrap();
        let r = restrict_half_spin(&prod, n, Parity::Even).unwrap();
        // S+ basis: e_∅ (pos 0), e_12 (pos 1); e_∅ ↦ e_12
        assert_eq!(r.matrix().entry(1, 0), tw.one());
        assert_eq!(r.matrix().nnz(), 1);
        assert_eq!(restrict_half_spin(&l1, n, Parity::Even), Err(Error::ParityMixing));
    }

    #[test]
    fn degree_bookkeeping() {
        let tw = t();
        let n = 4;
        for i in 1..=n {
            let l = wedge_op(&tw, i, n).unwrap();
            assert_eq!(degree_profile(&l).into_iter().collect::<Vec<_>>(), [1]);
            let c = contraction_op(&tw, i, n).unwrap();
            assert_eq!(degree_profile(&c).into_iter().collect::<Vec<_>>(), [-1]);
            let sq = l.compose(&l).unwrap();
            assert!(sq.is_zero());
            assert!(c.compose(&c).unwrap().is_zero());
        }
    }

    #[test]
    fn wedge_product_signs() {
        assert_eq!(wedge_sign(Blade::from_indices(&[2]), Blade::from_indices(&[1])), Some(-1));
        assert_eq!(wedge_sign(Blade::from_indices(&[1, 3]), Blade::from_indices(&[2])), Some(-1));
        assert_eq!(wedge_sign(Blade::from_indices(&[1]), Blade::from_indices(&[2, 3])), Some(1));
        assert_eq!(wedge_sign(Blade::from_indices(&[1]), Blade::from_indices(&[1])), None);
        // ℓ(e_i) agrees with the exterior product
        let tw = t();
        let n = 4;
        for i in 1..=n {
            let l = wedge_op(&tw, i, n).unwrap();
            for mask in 0..16u32 {
                let v = SpinorVector::basis(n, Blade(mask), &tw);
                let ei = SpinorVector::basis(n, Blade::from_indices(&[i]), &tw);
                assert_eq!(v.apply(&l, &tw).unwrap(), ei.wedge(&v));
            }
        }
    }

    #[test]
    fn spinor_parity_tags() {
        let tw = t();
        let mut v = basis(3, &[1, 2]);
        assert_eq!(v.parity(), VectorParity::Even);
        v.add_term(Blade::from_indices(&[3]), &tw.one());
        assert_eq!(v.parity(), VectorParity::Mixed);
        assert_eq!(basis(3, &[2]).parity(), VectorParity::Odd);
    }
}
