//! Generators `X_rs` of `so(W, b)`, the `E0`-basis of `g0 = so(W,b) ∩ u(ψ)`
//! and the spin lift to `End(S+) ⊕ End(S-)`.
//!
//! `X_rs` is the map `x ↦ b(e_s, x)e_r − b(e_r, x)e_s` with the unscaled `b`.
//! With this sign the lift `X_rs ↦ γ(e_r)γ(e_s) − b'(e_r, e_s)` (scaled
//! `b' = b/2`) is a Lie algebra homomorphism intertwining `γ`.

use alloc::vec::Vec;

use crate::exterior::{self, half_spin_masks, Parity};
use crate::field::{FieldElement, Tower};
use crate::forms::{partner, HermitianData};
use crate::operator::{LinOp, Linearity, SparseMatrix};
use crate::Error;

fn check_pair(r: usize, s: usize, n: usize) -> Result<(), Error> {
    exterior::check_half_dim(n)?;
    for i in [r, s] {
        if i == 0 || i > 2 * n {
            return Err(Error::IndexOutOfRange {
                index: i,
                max: 2 * n,
            });
        }
    }
    if r == s {
        return Err(Error::ParameterRange("generator needs r != s"));
    }
    Ok(())
}

/// `X_rs` together with its matrix on `W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoGenerator {
    pub r: usize,
    pub s: usize,
    pub matrix: SparseMatrix,
}

/// `X_rs` for `1 ≤ r, s ≤ 2n`, `r ≠ s`; `X_sr = −X_rs`.
pub fn so_generator(tower: &Tower, r: usize, s: usize, n: usize) -> Result<SoGenerator, Error> {
    check_pair(r, s, n)?;
    let mut m = SparseMatrix::zero(tower, 2 * n, 2 * n);
    let (r0, s0) = (r - 1, s - 1);
    m.add_to(r0, partner(s0, n), &tower.one());
    m.add_to(s0, partner(r0, n), &-tower.one());
    Ok(SoGenerator { r, s, matrix: m })
}

/// All generators `X_rs` with `r < s`, in lexicographic order.
pub fn so_generators(tower: &Tower, n: usize) -> Result<Vec<SoGenerator>, Error> {
    let mut out = Vec::new();
    for r in 1..=2 * n {
        for s in r + 1..=2 * n {
            out.push(so_generator(tower, r, s, n)?);
        }
    }
    Ok(out)
}

/// An `E`-linear combination `Σ c·X_rs` (`r < s` after normalization).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoElement {
    n: usize,
    terms: Vec<(FieldElement, usize, usize)>,
}

impl SoElement {
    pub fn new(n: usize) -> Self {
        SoElement {
            n,
            terms: Vec::new(),
        }
    }

    pub fn generator(tower: &Tower, r: usize, s: usize, n: usize) -> Result<Self, Error> {
        Self::new(n).with_term(&tower.one(), r, s)
    }

    /// Adds `c·X_rs`.
    pub fn with_term(mut self, c: &FieldElement, r: usize, s: usize) -> Result<Self, Error> {
        check_pair(r, s, self.n)?;
        let (c, r, s) = if r < s { (c.clone(), r, s) } else { (-c.clone(), s, r) };
        if !c.is_zero() {
            self.terms.push((c, r, s));
        }
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(FieldElement, usize, usize)] {
        &self.terms
    }

    /// Matrix on `W`.
    pub fn w_matrix(&self, tower: &Tower) -> Result<SparseMatrix, Error> {
        let mut acc = SparseMatrix::zero(tower, 2 * self.n, 2 * self.n);
        for (c, r, s) in &self.terms {
            acc = acc.add(&so_generator(tower, *r, *s, self.n)?.matrix.scale(c))?;
        }
        Ok(acc)
    }

    /// Spin lift on the full `⋀•W1`.
    pub fn spin_lift_full(&self, tower: &Tower) -> Result<LinOp, Error> {
        let mut acc = LinOp::zero(tower, 1 << self.n, Linearity::Linear);
        for (c, r, s) in &self.terms {
            acc = acc.add(&generator_lift(tower, *r, *s, self.n)?.scale(c))?;
        }
        Ok(acc)
    }

    /// `(ρ(X)|S+, ρ(X)|S-)`.
    pub fn spin_lift(&self, tower: &Tower) -> Result<(LinOp, LinOp), Error> {
        split_blocks(&self.spin_lift_full(tower)?, self.n)
    }
}

fn split_blocks(full: &LinOp, n: usize) -> Result<(LinOp, LinOp), Error> {
    Ok((
        exterior::restrict_half_spin(full, n, Parity::Even)?,
        exterior::restrict_half_spin(full, n, Parity::Odd)?,
    ))
}

/// `ρ(X_rs) = γ(e_r)γ(e_s) − b'(e_r, e_s)·Id` with `b'(e_i, e_{n+i}) = 1/2`.
pub fn generator_lift(tower: &Tower, r: usize, s: usize, n: usize) -> Result<LinOp, Error> {
    check_pair(r, s, n)?;
    let prod = exterior::gamma(tower, r, n)?.compose(&exterior::gamma(tower, s, n)?)?;
    let paired = r + n == s || s + n == r;
    if paired {
        prod.sub(&LinOp::scalar(&tower.frac(1, 2), 1 << n))
    } else {
        Ok(prod)
    }
}

/// Writes a matrix in `so(W, b)` as `Σ c_rs X_rs`; the coefficient of
/// `X_rs` (`r < s`) is the entry at `(r, partner(s))`.
pub fn so_decompose(m: &SparseMatrix) -> Result<SoElement, Error> {
    let n = m.rows() / 2;
    let tower = m.tower();
    let mut el = SoElement::new(n);
    for r in 1..=2 * n {
        for s in r + 1..=2 * n {
            if let Some(c) = m.get(r - 1, partner(s - 1, n)) {
                el = el.with_term(c, r, s)?;
            }
        }
    }
    if &el.w_matrix(tower)? != m {
        return Err(Error::NotInSoAlgebra);
    }
    Ok(el)
}

/// The five families of the `g0` basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum G0Family {
    /// `a_{n+i}X_ij + a_j X_{n+i,n+j}`
    Isotropic,
    /// `α(a_{n+i}X_ij − a_j X_{n+i,n+j})`
    IsotropicImaginary,
    /// `a_{n+i}X_{i,n+j} − a_{n+j}X_{j,n+i}`
    Mixed,
    /// `α(a_{n+i}X_{i,n+j} + a_{n+j}X_{j,n+i})`
    MixedImaginary,
    /// `αX_{i,n+i}`
    Torus,
}

#[derive(Clone, Debug)]
pub struct G0BasisElement {
    pub family: G0Family,
    pub i: usize,
    /// Equal to `i` for the torus family.
    pub j: usize,
    pub element: SoElement,
    pub w_matrix: SparseMatrix,
    /// Spin lift on `⋀•W1`.
    pub spin_full: LinOp,
    pub spin_plus: LinOp,
    pub spin_minus: LinOp,
}

impl G0BasisElement {
    /// Lift restricted to `S+` or `S-`.
    pub fn spin(&self, parity: Parity) -> &LinOp {
        match parity {
            Parity::Even => &self.spin_plus,
            Parity::Odd => &self.spin_minus,
        }
    }
}

/// The `2n² − n` element `E0`-basis of `g0` with `α = √m2`.
pub fn g0_basis(h: &HermitianData) -> Result<Vec<G0BasisElement>, Error> {
    h.compatibility_lambda()?;
    let n = h.n();
    let tower = h.tower();
    let alpha = tower.sqrt_m2();
    let a = |i: usize| h.a(i).clone();
    let mut out = Vec::with_capacity(2 * n * n - n);
    let mut push = |family: G0Family, i: usize, j: usize, el: SoElement| -> Result<(), Error> {
        let w_matrix = el.w_matrix(tower)?;
        let spin_full = el.spin_lift_full(tower)?;
        let (spin_plus, spin_minus) = split_blocks(&spin_full, n)?;
        out.push(G0BasisElement {
            family,
            i,
            j,
            element: el,
            w_matrix,
            spin_full,
            spin_plus,
            spin_minus,
        });
        Ok(())
    };
    for i in 1..=n {
        for j in i + 1..=n {
            let (ani, aj, anj) = (a(n + i), a(j), a(n + j));
            push(
                G0Family::Isotropic,
                i,
                j,
                SoElement::new(n)
                    .with_term(&ani, i, j)?
                    .with_term(&aj, n + i, n + j)?,
            )?;
            push(
                G0Family::IsotropicImaginary,
                i,
                j,
                SoElement::new(n)
                    .with_term(&(&alpha * &ani), i, j)?
                    .with_term(&-(&alpha * &aj), n + i, n + j)?,
            )?;
            push(
                G0Family::Mixed,
                i,
                j,
                SoElement::new(n)
                    .with_term(&ani, i, n + j)?
                    .with_term(&-anj.clone(), j, n + i)?,
            )?;
            push(
                G0Family::MixedImaginary,
                i,
                j,
                SoElement::new(n)
                    .with_term(&(&alpha * &ani), i, n + j)?
                    .with_term(&(&alpha * &anj), j, n + i)?,
            )?;
        }
    }
    for i in 1..=n {
        push(
            G0Family::Torus,
            i,
            i,
            SoElement::new(n).with_term(&alpha, i, n + i)?,
        )?;
    }
    Ok(out)
}

/// `ρ([X, Y]) = [ρ(X), ρ(Y)]` on both half-spin blocks, with `[X, Y]` the
/// matrix commutator on `W`.
pub fn check_homomorphism(tower: &Tower, x: &SoElement, y: &SoElement) -> Result<bool, Error> {
    let n = x.n();
    let (xm, ym) = (x.w_matrix(tower)?, y.w_matrix(tower)?);
    let bracket = xm.mul(&ym)?.sub(&ym.mul(&xm)?)?;
    let lhs = so_decompose(&bracket)?.spin_lift(tower)?;
    let comm = x.spin_lift_full(tower)?.commutator(&y.spin_lift_full(tower)?)?;
    let rhs = split_blocks(&comm, n)?;
    Ok(lhs == rhs)
}

/// `[ρ(X), γ(e_v)] = γ(X·e_v)` on `⋀•W1` for the basis vector `e_v`.
pub fn check_equivariance(tower: &Tower, x: &SoElement, v: usize) -> Result<bool, Error> {
    let n = x.n();
    let rho = x.spin_lift_full(tower)?;
    let lhs = rho.commutator(&exterior::gamma(tower, v, n)?)?;
    let xm = x.w_matrix(tower)?;
    let image: Vec<FieldElement> = (0..2 * n).map(|p| xm.entry(p, v - 1)).collect();
    let rhs = exterior::clifford_gamma(tower, &image, n)?;
    Ok(lhs == rhs)
}

/// Positions of `S±` inside `⋀•W1`, re-exported for callers that index
/// half-spin operators.
pub fn half_spin_positions(n: usize, parity: Parity) -> Vec<usize> {
    half_spin_masks(n, parity)
}
