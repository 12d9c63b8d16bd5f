//! The split form `b`, diagonal Hermitian forms `ψ`, the operator `J` and
//! good-basis bookkeeping.
//!
//! `W = E^{2n}` with basis `e_1..e_{2n}` (0-based positions `0..2n` in
//! matrices). `b(e_i, e_{n+j}) = δ_ij` and all other pairings vanish;
//! `ψ(z, w) = Σ a_i z_i conj(w_i)`.

use alloc::vec::Vec;

use crate::field::{is_norm, FieldElement, NormVerdict, NotNormReason, Tower};
use crate::operator::{LinOp, Linearity, SparseMatrix};
use crate::Error;

/// Index of the `b`-partner of position `p` (0-based).
pub(crate) fn partner(p: usize, n: usize) -> usize {
    if p < n {
        p + n
    } else {
        p - n
    }
}

/// Gram matrix of the unscaled split form `b` on `W`.
pub fn b_gram(tower: &Tower, n: usize) -> SparseMatrix {
    let mut g = SparseMatrix::zero(tower, 2 * n, 2 * n);
    for p in 0..2 * n {
        g.set(p, partner(p, n), tower.one());
    }
    g
}

/// `b(z, w)`.
pub fn b_value(z: &[FieldElement], w: &[FieldElement]) -> FieldElement {
    let n = z.len() / 2;
    let tower = z[0].tower();
    let mut acc = tower.zero();
    for i in 0..n {
        acc += &(&z[i] * &w[n + i]);
        acc += &(&z[n + i] * &w[i]);
    }
    acc
}

/// Diagonal Hermitian form `ψ` on `W = E^{2n}` in a basis where `b` is split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianData {
    n: usize,
    a: Vec<FieldElement>,
    tower: Tower,
}

impl HermitianData {
    /// `a` lists `a_1..a_{2n}`; each must be a nonzero element of `E0`.
    pub fn new(tower: &Tower, a: Vec<FieldElement>) -> Result<Self, Error> {
        if a.is_empty() || a.len() % 2 != 0 {
            return Err(Error::ParameterRange("coefficient list must have even positive length"));
        }
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() || !x.is_base() {
                return Err(Error::BadCoefficient { index: i + 1 });
            }
        }
        crate::exterior::check_half_dim(a.len() / 2)?;
        Ok(HermitianData {
            n: a.len() / 2,
            a,
            tower: tower.clone(),
        })
    }

    /// Compatible data from `a_1..a_n` and `λ`, with `a_{n+i} = λ/a_i`.
    pub fn from_half(tower: &Tower, half: &[FieldElement], lambda: &FieldElement) -> Result<Self, Error> {
        let mut a = half.to_vec();
        for x in half {
            a.push(lambda * &x.inv()?);
        }
        Self::new(tower, a)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    /// `a_1..a_{2n}`.
    pub fn coeffs(&self) -> &[FieldElement] {
        &self.a
    }

    /// `a_i`, 1-based.
    pub fn a(&self, i: usize) -> &FieldElement {
        &self.a[i - 1]
    }

    /// Coefficients of `ψ|W1`.
    pub fn w1_coeffs(&self) -> &[FieldElement] {
        &self.a[..self.n]
    }

    /// `ψ(z, w)`.
    pub fn psi(&self, z: &[FieldElement], w: &[FieldElement]) -> FieldElement {
        let mut acc = self.tower.zero();
        for ((a, zi), wi) in self.a.iter().zip(z).zip(w) {
            acc += &(&(a * zi) * &wi.conj());
        }
        acc
    }

    /// The common value `λ = a_i·a_{n+i}`.
    pub fn compatibility_lambda(&self) -> Result<FieldElement, Error> {
        let lambda = &self.a[0] * &self.a[self.n];
        for i in 1..self.n {
            if &self.a[i] * &self.a[self.n + i] != lambda {
                return Err(Error::NotCompatible { index: i + 1 });
            }
        }
        Ok(lambda)
    }

    /// `D = a_1⋯a_n`.
    pub fn discriminant(&self) -> FieldElement {
        self.w1_coeffs()
            .iter()
            .fold(self.tower.one(), |acc, x| &acc * x)
    }

    /// Conjugate-linear `J` with `J(e_i) = a_i e_{n+i}`, `J(e_{n+i}) = a_{n+i} e_i`.
    pub fn build_j(&self) -> LinOp {
        let mut m = SparseMatrix::zero(&self.tower, 2 * self.n, 2 * self.n);
        for p in 0..2 * self.n {
            m.set(partner(p, self.n), p, self.a[p].clone());
        }
        LinOp::conjugate_linear(m).expect("square")
    }

    /// Exchanges `e_i` and `e_{n+i}` for each 1-based `i` in `swapped`.
    pub fn swap_pairs(&self, swapped: &[usize]) -> Result<HermitianData, Error> {
        let mut a = self.a.clone();
        for &i in swapped {
            if i == 0 || i > self.n {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    max: self.n,
                });
            }
            a.swap(i - 1, self.n + i - 1);
        }
        Ok(HermitianData {
            n: self.n,
            a,
            tower: self.tower.clone(),
        })
    }

    /// Decides `b̄_Ψ = λ^{-1}·b^∨` for some `λ ∈ E0` by materializing both
    /// forms on `W^∨` in the dual basis.
    ///
    /// `B = Gram(b)` maps `W → W^∨`; `Ψ(v) = ψ(·, v)` is the conjugate-linear
    /// map with matrix `diag(a)`. This does not consult
    /// [`compatibility_lambda`](Self::compatibility_lambda).
    pub fn dual_form_check(&self) -> Result<bool, Error> {
        let g = b_gram(&self.tower, self.n);
        let b_inv = g.inverse()?;
        // b∨(ξ, η) = b(B⁻¹ξ, B⁻¹η)
        let dual = b_inv.transpose().mul(&g)?.mul(&b_inv)?;
        // Ψ⁻¹ is conjugate-linear with matrix σ(M⁻¹).
        let psi_map = SparseMatrix::diagonal(&self.tower, &self.a);
        let psi_inv = psi_map.inverse()?.conj();
        // Ψ⁻¹ applied to a dual basis vector is the matching column of psi_inv.
        let bar = psi_inv.transpose().mul(&g)?.mul(&psi_inv)?.conj();
        let Some((r, c, d)) = dual.iter().next() else {
            return Ok(false);
        };
        let ratio = &bar.entry(r, c) * &d.inv()?;
        if ratio.is_zero() || !ratio.is_base() {
            return Ok(false);
        }
        Ok(bar == dual.scale(&ratio))
    }
}

/// `ψ_{δ,k}`: `a_i = δ (i ≤ k), 1 (k < i ≤ n), -1 (n < i ≤ n+k), -δ (n+k < i)`.
pub fn build_psi_delta_k(tower: &Tower, n: usize, k: usize, delta: &FieldElement) -> Result<HermitianData, Error> {
    if k == 0 || k > n {
        return Err(Error::ParameterRange("k must satisfy 1 <= k <= n"));
    }
    psi_delta_k_unchecked(tower, n, k, delta)
}

// Same as build_psi_delta_k but admits k = 0.
pub(crate) fn psi_delta_k_unchecked(
    tower: &Tower,
    n: usize,
    k: usize,
    delta: &FieldElement,
) -> Result<HermitianData, Error> {
    if delta.is_zero() {
        return Err(Error::ZeroDelta);
    }
    if !delta.is_base() {
        return Err(Error::NotInBase);
    }
    let one = tower.one();
    let mut a = Vec::with_capacity(2 * n);
    for i in 1..=n {
        a.push(if i <= k { delta.clone() } else { one.clone() });
    }
    for i in 1..=n {
        a.push(if i <= k { -one.clone() } else { -delta.clone() });
    }
    HermitianData::new(tower, a)
}

/// The swap set of a good-basis permutation and its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodBasisPerm {
    /// 1-based indices `i` with `e_i ↔ e_{n+i}` exchanged.
    pub swapped: Vec<usize>,
    pub a: usize,
    pub r: usize,
    pub t: usize,
    pub s: usize,
}

impl GoodBasisPerm {
    pub fn swap_count(&self) -> usize {
        self.swapped.len()
    }
}

/// The good basis `e'` built from `ψ_{δ,k}` by keeping `e_1..e_a`, swapping
/// `a < i ≤ k`, keeping `k < i ≤ k+r` and swapping `k+r < i ≤ n`.
pub fn permute_good_basis(
    h: &HermitianData,
    k: usize,
    a: usize,
    r: usize,
) -> Result<(HermitianData, GoodBasisPerm), Error> {
    let n = h.n();
    if k > n || a > k || r > n - k {
        return Err(Error::ParameterRange("need 0 <= a <= k <= n and 0 <= r <= n - k"));
    }
    let swapped: Vec<usize> = (a + 1..=k).chain(k + r + 1..=n).collect();
    let perm = GoodBasisPerm {
        swapped,
        a,
        r,
        t: k - a,
        s: n - k - r,
    };
    Ok((h.swap_pairs(&perm.swapped)?, perm))
}

/// Closed form `(-1)^{t+s} δ^{a+s}` for the discriminant after
/// [`permute_good_basis`].
pub fn permuted_discriminant(delta: &FieldElement, n: usize, k: usize, a: usize, r: usize) -> Result<FieldElement, Error> {
    if k > n || a > k || r > n - k {
        return Err(Error::ParameterRange("need 0 <= a <= k <= n and 0 <= r <= n - k"));
    }
    let (t, s) = (k - a, n - k - r);
    let p = delta.pow((a + s) as i64)?;
    Ok(if (t + s) % 2 == 0 { p } else { -p })
}

/// `b(Xz, w) + b(z, Xw) = 0` on all basis pairs.
pub fn preserves_b(x: &SparseMatrix) -> Result<bool, Error> {
    let n = x.rows() / 2;
    let g = b_gram(x.tower(), n);
    let lhs = x.transpose().mul(&g)?.add(&g.mul(x)?)?;
    Ok(lhs.is_zero())
}

/// `ψ(T e_r, e_s) = -conj(ψ(T e_s, e_r))` on all basis pairs, i.e.
/// `a_s T[s,r] = -conj(a_r T[r,s])`.
pub fn preserves_psi(h: &HermitianData, t: &SparseMatrix) -> bool {
    let dim = 2 * h.n();
    (0..dim).all(|r| {
        (0..dim).all(|s| {
            let lhs = &h.a[s] * &t.entry(s, r);
            let rhs = -(&h.a[r] * &t.entry(r, s)).conj();
            lhs == rhs
        })
    })
}

/// Whether the standard representation `W` descends to `E0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StandardRepVerdict {
    /// `λ = Nm(c)`.
    Defined(FieldElement),
    NotDefined(NotNormReason),
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardRepReport {
    pub lambda: FieldElement,
    pub j_squared_is_lambda: bool,
    pub product_checks: usize,
    /// First `(α, β)` violating `(α+βJ)(ᾱ−βJ) = (αᾱ−λββ̄)·Id`.
    pub product_failure: Option<(FieldElement, FieldElement)>,
    pub commute_checks: usize,
    /// Position of the first `g0` element not commuting with `J`.
    pub commute_failure: Option<usize>,
    pub verdict: StandardRepVerdict,
}

impl StandardRepReport {
    pub fn all_checks_pass(&self) -> bool {
        self.j_squared_is_lambda && self.product_failure.is_none() && self.commute_failure.is_none()
    }
}

/// Computable side of the standard representation's rationality:
/// `J² = λ`, the product identity in `E[J]` for the given `(α, β)`, and `J`
/// commuting with every `g0` element on `Res_{E/E0}W`; the verdict is
/// `is_norm(λ)`.
pub fn standard_rep_analysis(
    h: &HermitianData,
    g0_w_matrices: &[SparseMatrix],
    pairs: &[(FieldElement, FieldElement)],
) -> Result<StandardRepReport, Error> {
    let lambda = h.compatibility_lambda()?;
    let dim = 2 * h.n();
    let j = h.build_j();
    let j_squared_is_lambda = j.compose(&j)? == LinOp::scalar(&lambda, dim);

    let j_real = j.realify();
    let mut product_failure = None;
    for (alpha, beta) in pairs {
        // (α + βJ)(ᾱ − βJ) on Res W, where each summand is an honest E0-matrix
        let left = LinOp::scalar(alpha, dim)
            .realify()
            .add(&j.scale(beta).realify())?;
        let right = LinOp::scalar(&alpha.conj(), dim)
            .realify()
            .sub(&j.scale(beta).realify())?;
        let expected = &(alpha * &alpha.conj()) - &(&lambda * &(beta * &beta.conj()));
        if left.mul(&right)? != LinOp::scalar(&expected, dim).realify() {
            product_failure = Some((alpha.clone(), beta.clone()));
            break;
        }
    }

    let mut commute_failure = None;
    for (idx, t) in g0_w_matrices.iter().enumerate() {
        let t_real = LinOp::new(t.clone(), Linearity::Linear)?.realify();
        if j_real.mul(&t_real)? != t_real.mul(&j_real)? {
            commute_failure = Some(idx);
            break;
        }
    }

    let verdict = match is_norm(&lambda)? {
        NormVerdict::Norm(c) => StandardRepVerdict::Defined(c),
        NormVerdict::NotNorm(reason) => StandardRepVerdict::NotDefined(reason),
        NormVerdict::Unknown => StandardRepVerdict::Undetermined,
    };
    Ok(StandardRepReport {
        lambda,
        j_squared_is_lambda,
        product_checks: pairs.len(),
        product_failure,
        commute_checks: g0_w_matrices.len(),
        commute_failure,
        verdict,
    })
}
