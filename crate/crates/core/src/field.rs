//! Exact arithmetic in a tower `Q ⊆ E0 ⊆ E` with `E0 = Q` or `Q(√m1)` and
//! `E = E0(√m2)`, `m2` totally negative.
//!
//! Elements are stored as four rational coordinates in the basis
//! `{1, √m1, √m2, √m1·√m2}`. When `E0 = Q` the `√m1` coordinates are always
//! zero.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::Error;

/// Arbitrary precision rational number.
pub type Rational = BigRational;

/// Parameters of the tower. `m2` is an `E0` element given by its coordinates
/// `(p, q)` meaning `p + q·√m1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerSpec {
    pub m1: Option<Rational>,
    pub m2: [Rational; 2],
}

/// A validated tower, shared by every element built over it.
#[derive(Clone)]
pub struct Tower(Arc<TowerSpec>);

impl fmt::Debug for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&*self.0, f)
    }
}

impl PartialEq for Tower {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Tower {}

pub(crate) fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub(crate) fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact square root of a rational, if it is a perfect square.
pub fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = integer_sqrt_exact(x.numer())?;
    let d = integer_sqrt_exact(x.denom())?;
    Some(Rational::new(n, d))
}

fn integer_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Sign of `p + q·√m` for `m > 0` a non-square, without leaving `Q`.
fn sign_with_root(p: &Rational, q: &Rational, m: &Rational) -> i8 {
    let sp = signum(p);
    let sq = signum(q);
    if sq == 0 {
        return sp;
    }
    if sp == 0 || sp == sq {
        return sq;
    }
    // Opposite signs: the larger magnitude wins.
    let pp = p * p;
    let qq = q * q * m;
    if pp > qq {
        sp
    } else {
        sq
    }
}

fn signum(x: &Rational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

impl Tower {
    /// Validates the tower parameters.
    pub fn new(spec: TowerSpec) -> Result<Self, Error> {
        if let Some(m1) = &spec.m1 {
            if !m1.is_positive() {
                return Err(Error::InvalidTower("m1 must be positive"));
            }
            if rational_sqrt(m1).is_some() {
                return Err(Error::InvalidTower("m1 must not be a rational square"));
            }
        } else if !spec.m2[1].is_zero() {
            return Err(Error::InvalidTower("m2 has a sqrt(m1) part but m1 is absent"));
        }
        let tower = Tower(Arc::new(spec));
        let m2 = tower.m2();
        for i in 1..=tower.num_embeddings() {
            if m2.embed_sign(i)? >= 0 {
                return Err(Error::InvalidTower("m2 must be totally negative"));
            }
        }
        Ok(tower)
    }

    /// `Q(√m2)` over `E0 = Q`.
    pub fn imaginary_quadratic(m2: i64) -> Result<Self, Error> {
        Self::new(TowerSpec {
            m1: None,
            m2: [rat(m2), rat(0)],
        })
    }

    /// `Q(√m1)(√m2)` with rational `m2`.
    pub fn biquadratic(m1: i64, m2: i64) -> Result<Self, Error> {
        Self::new(TowerSpec {
            m1: Some(rat(m1)),
            m2: [rat(m2), rat(0)],
        })
    }

    pub fn spec(&self) -> &TowerSpec {
        &self.0
    }

    pub fn m1(&self) -> Option<&Rational> {
        self.0.m1.as_ref()
    }

    /// `m2` as an element of `E0`.
    pub fn m2(&self) -> FieldElement {
        self.base(self.0.m2[0].clone(), self.0.m2[1].clone())
    }

    /// Number of real embeddings of `E0`.
    pub fn num_embeddings(&self) -> usize {
        if self.0.m1.is_some() {
            2
        } else {
            1
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.raw([rat(0), rat(0), rat(0), rat(0)])
    }

    pub fn one(&self) -> FieldElement {
        self.rational(rat(1))
    }

    pub fn int(&self, n: i64) -> FieldElement {
        self.rational(rat(n))
    }

    pub fn frac(&self, n: i64, d: i64) -> FieldElement {
        self.rational(rat_frac(n, d))
    }

    pub fn rational(&self, q: Rational) -> FieldElement {
        self.raw([q, rat(0), rat(0), rat(0)])
    }

    /// `p + q·√m1`.
    pub fn base(&self, p: Rational, q: Rational) -> FieldElement {
        self.raw([p, q, rat(0), rat(0)])
    }

    /// `√m1`; fails when `E0 = Q`.
    pub fn sqrt_m1(&self) -> Result<FieldElement, Error> {
        if self.0.m1.is_none() {
            return Err(Error::InvalidTower("tower has no sqrt(m1)"));
        }
        Ok(self.raw([rat(0), rat(1), rat(0), rat(0)]))
    }

    /// `√m2`, the purely imaginary generator of `E` over `E0`.
    pub fn sqrt_m2(&self) -> FieldElement {
        self.raw([rat(0), rat(0), rat(1), rat(0)])
    }

    /// Builds an element from coordinates in `{1, √m1, √m2, √m1√m2}`.
    pub fn element(&self, coords: [Rational; 4]) -> Result<FieldElement, Error> {
        if self.0.m1.is_none() && !(coords[1].is_zero() && coords[3].is_zero()) {
            return Err(Error::InvalidTower("sqrt(m1) coordinate given but m1 is absent"));
        }
        Ok(self.raw(coords))
    }

    fn raw(&self, c: [Rational; 4]) -> FieldElement {
        FieldElement {
            tower: self.clone(),
            c,
        }
    }

    fn m1_or_zero(&self) -> Rational {
        self.0.m1.clone().unwrap_or_else(|| rat(0))
    }
}

/// Element of `E` (or of `E0` when the `√m2` coordinates vanish).
#[derive(Clone)]
pub struct FieldElement {
    tower: Tower,
    c: [Rational; 4],
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c && self.tower == other.tower
    }
}

impl Eq for FieldElement {}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const LABELS: [&str; 4] = ["", "√m1", "√m2", "√m1√m2"];
        let mut first = true;
        for (coef, label) in self.c.iter().zip(LABELS) {
            if coef.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if label.is_empty() {
                write!(f, "{}", coef)?;
            } else if coef.is_one() {
                f.write_str(label)?;
            } else {
                write!(f, "({})·{}", coef, label)?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

// E0 arithmetic on (p, q) pairs meaning p + q√m1.
type Base = (Rational, Rational);

fn base_mul(x: &Base, y: &Base, m1: &Rational) -> Base {
    (
        &x.0 * &y.0 + &x.1 * &y.1 * m1,
        &x.0 * &y.1 + &x.1 * &y.0,
    )
}

fn base_add(x: &Base, y: &Base) -> Base {
    (&x.0 + &y.0, &x.1 + &y.1)
}

fn base_sub(x: &Base, y: &Base) -> Base {
    (&x.0 - &y.0, &x.1 - &y.1)
}

impl FieldElement {
    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    /// Coordinates in `{1, √m1, √m2, √m1√m2}`.
    pub fn coords(&self) -> &[Rational; 4] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Zero::is_zero)
    }

    /// True when the element lies in `E0`.
    pub fn is_base(&self) -> bool {
        self.c[2].is_zero() && self.c[3].is_zero()
    }

    fn split(&self) -> (Base, Base) {
        (
            (self.c[0].clone(), self.c[1].clone()),
            (self.c[2].clone(), self.c[3].clone()),
        )
    }

    fn join(tower: &Tower, u: Base, v: Base) -> FieldElement {
        FieldElement {
            tower: tower.clone(),
            c: [u.0, u.1, v.0, v.1],
        }
    }

    /// Galois conjugation of `E` over `E0`.
    pub fn conj(&self) -> FieldElement {
        let mut c = self.c.clone();
        c[2] = -&c[2];
        c[3] = -&c[3];
        FieldElement {
            tower: self.tower.clone(),
            c,
        }
    }

    /// `Nm_{E/E0}(x) = x·conj(x)`.
    pub fn norm_to_base(&self) -> FieldElement {
        let m1 = self.tower.m1_or_zero();
        let m2 = (self.tower.0.m2[0].clone(), self.tower.0.m2[1].clone());
        let (u, v) = self.split();
        let uu = base_mul(&u, &u, &m1);
        let vv = base_mul(&v, &v, &m1);
        let n = base_sub(&uu, &base_mul(&m2, &vv, &m1));
        Self::join(&self.tower, n, (rat(0), rat(0)))
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<FieldElement, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm_to_base();
        // inverse in E0: (p - q√m1) / (p² - m1 q²)
        let m1 = self.tower.m1_or_zero();
        let (p, q) = (&n.c[0], &n.c[1]);
        let den = p * p - q * q * &m1;
        let n_inv = self.tower.base(p / &den, -(q / &den));
        Ok(&self.conj() * &n_inv)
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<FieldElement, Error> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = self.tower.one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Exact sign of `σ_i(x)` for `x ∈ E0`; embeddings are numbered from 1
    /// and `σ_1` sends `√m1` to the positive root.
    pub fn embed_sign(&self, i: usize) -> Result<i8, Error> {
        if !self.is_base() {
            return Err(Error::NotInBase);
        }
        let count = self.tower.num_embeddings();
        if i == 0 || i > count {
            return Err(Error::EmbeddingOutOfRange { index: i, count });
        }
        match self.tower.m1() {
            None => Ok(signum(&self.c[0])),
            Some(m1) => {
                let q = if i == 1 { self.c[1].clone() } else { -&self.c[1] };
                Ok(sign_with_root(&self.c[0], &q, m1))
            }
        }
    }

    /// Square root inside `E0`, if one exists.
    pub fn sqrt_in_base(&self) -> Option<FieldElement> {
        if !self.is_base() {
            return None;
        }
        let (p, q) = (&self.c[0], &self.c[1]);
        let tower = &self.tower;
        let Some(m1) = tower.m1() else {
            return rational_sqrt(p).map(|r| tower.rational(r));
        };
        if q.is_zero() {
            if let Some(u) = rational_sqrt(p) {
                return Some(tower.rational(u));
            }
            // p = m1 v²
            return rational_sqrt(&(p / m1)).map(|v| tower.base(rat(0), v));
        }
        // u² + m1 v² = p, 2uv = q  =>  u² = (p ± √(p² - m1 q²)) / 2
        let disc = rational_sqrt(&(p * p - q * q * m1))?;
        let two = rat(2);
        for u2 in [(p + &disc) / &two, (p - &disc) / &two] {
            if u2.is_zero() {
                continue;
            }
            if let Some(u) = rational_sqrt(&u2) {
                let v = q / (&two * &u);
                let cand = tower.base(u, v);
                if &(&cand * &cand) == self {
                    return Some(cand);
                }
            }
        }
        None
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        debug_assert!(self.tower == rhs.tower);
        FieldElement {
            tower: self.tower.clone(),
            c: [
                &self.c[0] + &rhs.c[0],
                &self.c[1] + &rhs.c[1],
                &self.c[2] + &rhs.c[2],
                &self.c[3] + &rhs.c[3],
            ],
        }
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        &self + &rhs
    }
}

impl AddAssign<&FieldElement> for FieldElement {
    fn add_assign(&mut self, rhs: &FieldElement) {
        for (a, b) in self.c.iter_mut().zip(rhs.c.iter()) {
            *a += b;
        }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self + &(-rhs)
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        &self - &rhs
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            tower: self.tower.clone(),
            c: [-&self.c[0], -&self.c[1], -&self.c[2], -&self.c[3]],
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        debug_assert!(self.tower == rhs.tower);
        let tower = &self.tower;
        // Fast path: rational scalar.
        if self.c[1..].iter().all(Zero::is_zero) {
            let s = &self.c[0];
            return FieldElement {
                tower: tower.clone(),
                c: [s * &rhs.c[0], s * &rhs.c[1], s * &rhs.c[2], s * &rhs.c[3]],
            };
        }
        if rhs.c[1..].iter().all(Zero::is_zero) {
            return rhs * self;
        }
        let m1 = tower.m1_or_zero();
        let m2 = (tower.0.m2[0].clone(), tower.0.m2[1].clone());
        let (u1, v1) = self.split();
        let (u2, v2) = rhs.split();
        // (u1 + v1 y)(u2 + v2 y) = u1u2 + m2 v1v2 + (u1v2 + v1u2) y
        let re = base_add(
            &base_mul(&u1, &u2, &m1),
            &base_mul(&m2, &base_mul(&v1, &v2, &m1), &m1),
        );
        let im = base_add(&base_mul(&u1, &v2, &m1), &base_mul(&v1, &u2, &m1));
        FieldElement::join(tower, re, im)
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        &self * &rhs
    }
}

/// Why a value is certainly not a norm from `E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NotNormReason {
    /// Norms from an imaginary extension are totally positive.
    EmbeddingSign { embedding: usize, sign: i8 },
    /// Over `Q(i)`: a prime `≡ 3 (mod 4)` divides numerator times denominator
    /// to an odd power.
    TwoSquares { prime: BigInt, exponent: u32 },
}

/// Three-valued answer to "is this a norm from `E`?".
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormVerdict {
    Norm(FieldElement),
    NotNorm(NotNormReason),
    Unknown,
}

impl NormVerdict {
    pub fn is_norm(&self) -> bool {
        matches!(self, NormVerdict::Norm(_))
    }
}

/// Search limits for [`is_norm_with`].
#[derive(Clone, Copy, Debug)]
pub struct NormSearch {
    /// Trial division stops at this prime.
    pub trial_division_bound: u64,
    /// Witness coordinates have numerators in `[-height, height]` and
    /// denominators in `1..=height`.
    pub height: i64,
}

impl Default for NormSearch {
    fn default() -> Self {
        NormSearch {
            trial_division_bound: 1 << 20,
            height: 12,
        }
    }
}

/// [`is_norm_with`] using default search limits.
pub fn is_norm(value: &FieldElement) -> Result<NormVerdict, Error> {
    is_norm_with(value, NormSearch::default())
}

/// Decides whether `value ∈ E0` lies in `Nm_{E/E0}(E*)`.
///
/// `Norm` always carries a witness `c` with `c·conj(c) == value`. `NotNorm`
/// comes with a certificate. Everything else is `Unknown`.
pub fn is_norm_with(value: &FieldElement, search: NormSearch) -> Result<NormVerdict, Error> {
    if value.is_zero() {
        return Err(Error::ZeroInput);
    }
    if !value.is_base() {
        return Err(Error::NotInBase);
    }
    let tower = value.tower();
    for i in 1..=tower.num_embeddings() {
        let sign = value.embed_sign(i)?;
        if sign <= 0 {
            return Ok(NormVerdict::NotNorm(NotNormReason::EmbeddingSign {
                embedding: i,
                sign,
            }));
        }
    }
    if let Some(root) = value.sqrt_in_base() {
        return Ok(checked(value, root));
    }
    let gaussian = tower.m1().is_none() && tower.spec().m2[0] == rat(-1);
    if gaussian {
        match two_squares(&value.c[0], search.trial_division_bound) {
            TwoSquares::Obstructed(prime, exponent) => {
                return Ok(NormVerdict::NotNorm(NotNormReason::TwoSquares {
                    prime,
                    exponent,
                }))
            }
            TwoSquares::Witness(x, y, q) => {
                let c = &tower.rational(Rational::new(x, q.clone()))
                    + &(&tower.rational(Rational::new(y, q)) * &tower.sqrt_m2());
                return Ok(checked(value, c));
            }
            TwoSquares::Inconclusive => {}
        }
    }
    Ok(witness_search(value, search.height))
}

fn checked(value: &FieldElement, witness: FieldElement) -> NormVerdict {
    assert!(
        &witness.norm_to_base() == value,
        "norm witness failed to re-verify"
    );
    NormVerdict::Norm(witness)
}

enum TwoSquares {
    Obstructed(BigInt, u32),
    Witness(BigInt, BigInt, BigInt),
    Inconclusive,
}

// x = p/q is a sum of two rational squares iff p·q is a sum of two integer
// squares.
fn two_squares(x: &Rational, bound: u64) -> TwoSquares {
    let q = x.denom().clone();
    let target = x.numer() * &q;
    let mut rest = target.clone();
    let mut p: u64 = 2;
    let mut complete = false;
    while p <= bound {
        let bp = BigInt::from(p);
        if &bp * &bp > rest {
            complete = true;
            break;
        }
        let mut e = 0u32;
        loop {
            let (quot, rem) = rest.div_rem(&bp);
            if !rem.is_zero() {
                break;
            }
            rest = quot;
            e += 1;
        }
        if p % 4 == 3 && e % 2 == 1 {
            return TwoSquares::Obstructed(bp, e);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !complete {
        return TwoSquares::Inconclusive;
    }
    // Leftover factor is 1 or a prime.
    if rest > BigInt::one() {
        let r4: BigInt = &rest % BigInt::from(4);
        if r4 == BigInt::from(3) {
            return TwoSquares::Obstructed(rest, 1);
        }
    }
    // Unobstructed: find the representation target = a² + b².
    let limit = target.sqrt();
    let mut a = BigInt::zero();
    let mut steps = 0u64;
    while a <= limit && steps <= bound {
        let b2 = &target - &a * &a;
        if let Some(b) = integer_sqrt_exact(&b2) {
            return TwoSquares::Witness(a, b, q);
        }
        a += 1;
        steps += 1;
    }
    TwoSquares::Inconclusive
}

// Look for c = u + v√m2 with u² - m2 v² = value by scanning small v.
fn witness_search(value: &FieldElement, height: i64) -> NormVerdict {
    let tower = value.tower();
    let m2 = tower.m2();
    let sqrt_m2 = tower.sqrt_m2();
    let irr_range: Vec<i64> = if tower.m1().is_some() {
        (-height..=height).collect()
    } else {
        alloc::vec![0]
    };
    for den in 1..=height {
        for p0 in 0..=height {
            for &p1 in &irr_range {
                if p0 == 0 && p1 == 0 {
                    continue;
                }
                if Integer::gcd(&Integer::gcd(&p0, &p1), &den) != 1 {
                    continue;
                }
                let v = tower.base(rat_frac(p0, den), rat_frac(p1, den));
                let u2 = value + &(&m2 * &(&v * &v));
                if let Some(u) = u2.sqrt_in_base() {
                    return checked(value, &u + &(&v * &sqrt_m2));
                }
            }
        }
    }
    NormVerdict::Unknown
}

/// Random element with small coordinates; `base_only` restricts to `E0`.
pub fn random_element<R: rand::Rng + ?Sized>(
    tower: &Tower,
    rng: &mut R,
    height: i64,
    base_only: bool,
) -> FieldElement {
    let mut coord = |present: bool| -> Rational {
        if !present {
            return rat(0);
        }
        let n = rng.gen_range(-height..=height);
        let d = rng.gen_range(1..=height);
        rat_frac(n, d)
    };
    let has_m1 = tower.m1().is_some();
    let c = [
        coord(true),
        coord(has_m1),
        coord(!base_only),
        coord(has_m1 && !base_only),
    ];
    tower.raw(c)
}

/// Random nonzero element.
pub fn random_nonzero<R: rand::Rng + ?Sized>(
    tower: &Tower,
    rng: &mut R,
    height: i64,
    base_only: bool,
) -> FieldElement {
    loop {
        let x = random_element(tower, rng, height, base_only);
        if !x.is_zero() {
            return x;
        }
    }
}
