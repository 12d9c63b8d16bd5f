//! Conjugate-linear Hodge star on `⋀•W1` and the operators `L±` on the
//! half-spin spaces.
//!
//! `⋆` is fixed by `α ∧ ⋆β = ψ_k(α, β)·vol` with `vol = e_1 ∧ ⋯ ∧ e_n` and
//! `ψ_k(e_I, e_J) = δ_IJ·a_I`, which gives `⋆e_I = sgn(I, I')·a_I·e_{I'}`.

use alloc::vec::Vec;

use crate::exterior::{self, check_half_dim, full_mask, wedge_sign, Blade, Parity, SpinorVector};
use crate::field::{FieldElement, Tower};
use crate::forms::HermitianData;
use crate::operator::{LinOp, SparseMatrix};
use crate::spinrep::{generator_lift, G0BasisElement, G0Family};
use crate::Error;

fn sign(tower: &Tower, odd: bool) -> FieldElement {
    if odd {
        -tower.one()
    } else {
        tower.one()
    }
}

/// `op` restricted to `⋀^k` (composition with the degree projection).
pub fn on_degree(op: &LinOp, k: usize, n: usize) -> Result<LinOp, Error> {
    op.compose(&exterior::degree_projection(op.tower(), k, n)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarOperator {
    op: LinOp,
    w1: Vec<FieldElement>,
}

impl StarOperator {
    /// Star built from the `W1` coefficients of `h`.
    pub fn from_hermitian(h: &HermitianData) -> Result<Self, Error> {
        hodge_star(h.tower(), h.w1_coeffs())
    }

    pub fn op(&self) -> &LinOp {
        &self.op
    }

    pub fn n(&self) -> usize {
        self.w1.len()
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.w1
    }

    /// `a_I = Π_{i∈I} a_i`.
    pub fn blade_coeff(&self, blade: Blade) -> FieldElement {
        let tower = self.op.tower();
        blade
            .indices()
            .iter()
            .fold(tower.one(), |acc, &i| &acc * &self.w1[i - 1])
    }

    pub fn discriminant(&self) -> FieldElement {
        self.blade_coeff(Blade(full_mask(self.n())))
    }

    pub fn apply(&self, v: &SpinorVector) -> Result<SpinorVector, Error> {
        v.apply(&self.op, self.op.tower())
    }

    /// `ψ_k(α, β) = Σ_I a_I α_I conj(β_I)`.
    pub fn pairing(&self, alpha: &SpinorVector, beta: &SpinorVector) -> FieldElement {
        let tower = self.op.tower();
        let mut acc = tower.zero();
        for (blade, x) in alpha.terms() {
            if let Some(y) = beta.coeff(blade) {
                acc += &(&(&self.blade_coeff(blade) * x) * &y.conj());
            }
        }
        acc
    }

    /// `⋆⋆ = (−1)^{k(n−k)}·D` on `⋀^k`.
    pub fn check_square(&self, k: usize) -> Result<bool, Error> {
        let n = self.n();
        if k > n {
            return Err(Error::ParameterRange("k must satisfy k <= n"));
        }
        let tower = self.op.tower();
        let lhs = on_degree(&self.op.compose(&self.op)?, k, n)?;
        let c = &sign(tower, (k * (n - k)) % 2 == 1) * &self.discriminant();
        let rhs = exterior::degree_projection(tower, k, n)?.scale(&c);
        Ok(lhs == rhs)
    }
}

/// `⋆` for `ψ|W1 = diag(a_1..a_n)`, `a_i` nonzero in `E0`.
pub fn hodge_star(tower: &Tower, w1: &[FieldElement]) -> Result<StarOperator, Error> {
    let n = w1.len();
    check_half_dim(n)?;
    for (i, x) in w1.iter().enumerate() {
        if x.is_zero() || !x.is_base() {
            return Err(Error::BadCoefficient { index: i + 1 });
        }
    }
    let mut m = SparseMatrix::zero(tower, 1 << n, 1 << n);
    for mask in 0..(1u32 << n) {
        let b = Blade(mask);
        let c = b.complement(n);
        let s = wedge_sign(b, c).expect("complementary blades");
        let coeff = b
            .indices()
            .iter()
            .fold(tower.one(), |acc, &i| &acc * &w1[i - 1]);
        m.set(c.0 as usize, mask as usize, &sign(tower, s < 0) * &coeff);
    }
    Ok(StarOperator {
        op: LinOp::conjugate_linear(m)?,
        w1: w1.to_vec(),
    })
}

/// The four star/Clifford exchange identities on `⋀^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StarIdentity {
    /// `⋆ℓ(e_i)⋆ = (−1)^{n(k+1)}·D·a_i·ι(e_{n+i})`
    WedgeSandwich,
    /// `⋆ι(e_{n+i})⋆ = (−1)^{nk+1}·D·λ⁻¹·a_{n+i}·ℓ(e_i)`
    ContractionSandwich,
    /// `⋆ℓ(e_i) = (−1)^k·a_i·ι(e_{n+i})⋆`
    WedgeExchange,
    /// `⋆ι(e_{n+i}) = (−1)^{k+n+1}·λ⁻¹·a_{n+i}·ℓ(e_i)⋆`
    ContractionExchange,
}

impl StarIdentity {
    pub const ALL: [StarIdentity; 4] = [
        StarIdentity::WedgeSandwich,
        StarIdentity::ContractionSandwich,
        StarIdentity::WedgeExchange,
        StarIdentity::ContractionExchange,
    ];
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarcompFailure {
    pub identity: StarIdentity,
    pub i: usize,
    pub k: usize,
}

/// Every identity failing on `⋀^k`, over all `i`.
pub fn starcomps_failures(h: &HermitianData, k: usize) -> Result<Vec<StarcompFailure>, Error> {
    let lambda = h.compatibility_lambda()?;
    let n = h.n();
    if k > n {
        return Err(Error::ParameterRange("k must satisfy k <= n"));
    }
    let tower = h.tower();
    let star = StarOperator::from_hermitian(h)?;
    let st = star.op();
    let d = star.discriminant();
    let lambda_inv = lambda.inv()?;
    let mut out = Vec::new();
    for i in 1..=n {
        let l = exterior::wedge_op(tower, i, n)?;
        let c = exterior::contraction_op(tower, i, n)?;
        let (ai, ani) = (h.a(i), h.a(n + i));
        let checks = [
            (
                StarIdentity::WedgeSandwich,
                st.compose(&l)?.compose(st)?,
                c.scale(&(&(&sign(tower, (n * (k + 1)) % 2 == 1) * &d) * ai)),
            ),
            (
                StarIdentity::ContractionSandwich,
                st.compose(&c)?.compose(st)?,
                l.scale(&(&(&(&sign(tower, (n * k + 1) % 2 == 1) * &d) * &lambda_inv) * ani)),
            ),
            (
                StarIdentity::WedgeExchange,
                st.compose(&l)?,
                c.compose(st)?.scale(&(&sign(tower, k % 2 == 1) * ai)),
            ),
            (
                StarIdentity::ContractionExchange,
                st.compose(&c)?,
                l.compose(st)?
                    .scale(&(&(&sign(tower, (k + n + 1) % 2 == 1) * &lambda_inv) * ani)),
            ),
        ];
        for (identity, lhs, rhs) in checks {
            if on_degree(&lhs, k, n)? != on_degree(&rhs, k, n)? {
                out.push(StarcompFailure { identity, i, k });
            }
        }
    }
    Ok(out)
}

/// All four identities hold on `⋀^k` for every `i`.
pub fn check_starcomps(h: &HermitianData, k: usize) -> Result<bool, Error> {
    Ok(starcomps_failures(h, k)?.is_empty())
}

/// `d = ⌊(k − m)/2⌋`.
pub fn l_exponent(k: usize, m: usize) -> i64 {
    (k as i64 - m as i64).div_euclid(2)
}

/// `L₊` (on `S+`, `Parity::Even`) or `L₋` (on `S-`, `Parity::Odd`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LOperator {
    pub sign: Parity,
    /// Conjugate-linear operator on the half-spin block.
    pub op: LinOp,
    /// Same operator on `⋀•W1`, zero on the other parity.
    pub full: LinOp,
    pub scalar_expected: FieldElement,
}

impl LOperator {
    /// `L² = scalar_expected·Id`.
    pub fn check_square(&self) -> Result<bool, Error> {
        Ok(self.op.compose(&self.op)? == LinOp::scalar(&self.scalar_expected, self.op.dim()))
    }
}

/// `L|⋀^k = (−1)^d·λ^{−d}·⋆` on the degrees of the given parity.
pub fn build_l(h: &HermitianData, sign_: Parity) -> Result<LOperator, Error> {
    let n = h.n();
    if n % 2 != 0 {
        return Err(Error::OddDimension { n });
    }
    let lambda = h.compatibility_lambda()?;
    let m = n / 2;
    let tower = h.tower();
    let star = StarOperator::from_hermitian(h)?;
    let want = match sign_ {
        Parity::Even => 0,
        Parity::Odd => 1,
    };
    let mut full = LinOp::zero(tower, 1 << n, crate::operator::Linearity::ConjugateLinear);
    for k in (0..=n).filter(|k| k % 2 == want) {
        let d = l_exponent(k, m);
        let c = &sign(tower, d.rem_euclid(2) == 1) * &lambda.pow(-d)?;
        full = full.add(&on_degree(star.op(), k, n)?.scale(&c))?;
    }
    let op = exterior::restrict_half_spin(&full, n, sign_)?;
    let base = &sign(tower, m % 2 == 1) * &star.discriminant();
    let with_lambda = (m % 2 == 0) == (sign_ == Parity::Odd);
    let scalar_expected = if with_lambda { &base * &lambda } else { base };
    Ok(LOperator {
        sign: sign_,
        op,
        full,
        scalar_expected,
    })
}

/// A `g0` basis element whose lift does not commute with `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommuteFailure {
    pub index: usize,
    pub family: G0Family,
    pub i: usize,
    pub j: usize,
}

impl CommuteFailure {
    fn of(index: usize, el: &G0BasisElement) -> Self {
        CommuteFailure {
            index,
            family: el.family,
            i: el.i,
            j: el.j,
        }
    }
}

/// `L∘ρ(T) = ρ(T)∘L` on the parity block of `L`; returns the first failure.
pub fn check_commutes_g0(l: &LOperator, basis: &[G0BasisElement]) -> Result<Option<CommuteFailure>, Error> {
    for (idx, el) in basis.iter().enumerate() {
        let rho = el.spin(l.sign);
        if rho.dim() != l.op.dim() {
            return Err(Error::DimensionMismatch {
                left: l.op.dim(),
                right: rho.dim(),
            });
        }
        if !l.op.commutes_with(rho)? {
            return Ok(Some(CommuteFailure::of(idx, el)));
        }
    }
    Ok(None)
}

/// Termwise form of the commutation: for `T = T1 + T2` the two spin-lifted
/// terms are exchanged, `L∘ρ(T1) = ρ(T2)∘L` and `L∘ρ(T2) = ρ(T1)∘L`; a
/// single-term `T` commutes with `L` directly.
pub fn check_term_exchange(l: &LOperator, basis: &[G0BasisElement]) -> Result<Option<CommuteFailure>, Error> {
    let tower = l.full.tower();
    for (idx, el) in basis.iter().enumerate() {
        let n = el.element.n();
        let mut lifts = Vec::new();
        for (c, r, s) in el.element.terms() {
            lifts.push(generator_lift(tower, *r, *s, n)?.scale(c));
        }
        let ok = match lifts.as_slice() {
            [t] => l.full.commutes_with(t)?,
            [t1, t2] => {
                l.full.compose(t1)? == t2.compose(&l.full)?
                    && l.full.compose(t2)? == t1.compose(&l.full)?
            }
            _ => false,
        };
        if !ok {
            return Ok(Some(CommuteFailure::of(idx, el)));
        }
    }
    Ok(None)
}
