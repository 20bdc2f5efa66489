//! Exact angular-momentum algebra.
//!
//! Wigner 3j and 6j symbols evaluated by the Racah formulas in exact integer
//! arithmetic, carried as a signed square root of a rational so that the j≈6
//! range used for the clock states never suffers cancellation. Callers that
//! want a float take [`ExactRoot::to_f64`] at the end.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

pub mod e2;

pub use e2::{e2_relative_amplitude, E2Geometry};

/// Half-integer angular momentum stored as twice its value.
///
/// `HalfInt::new(2 * j)` represents j; arithmetic stays exact.
#[derive(
    Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
pub struct HalfInt {
    twice: i32,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };

    /// From twice the value: `from_twice(5)` is 5/2.
    pub const fn from_twice(twice: i32) -> Self {
        HalfInt { twice }
    }

    /// From an integer value.
    pub const fn from_int(v: i32) -> Self {
        HalfInt { twice: 2 * v }
    }

    pub const fn twice(self) -> i32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    /// True when `self` and `other` are both integers or both half-odd.
    pub const fn same_parity(self, other: HalfInt) -> bool {
        (self.twice - other.twice) % 2 == 0
    }

    pub const fn is_negative(self) -> bool {
        self.twice < 0
    }

    pub fn abs(self) -> Self {
        HalfInt {
            twice: self.twice.abs(),
        }
    }

    /// Parse "4", "-3", "5/2", "-7/2".
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            if d.trim() != "2" {
                return None;
            }
            n.trim().parse::<i32>().ok().map(|n| HalfInt { twice: n })
        } else {
            s.parse::<i32>().ok().map(HalfInt::from_int)
        }
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt {
            twice: self.twice + rhs.twice,
        }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt {
            twice: self.twice - rhs.twice,
        }
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt { twice: -self.twice }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// Signed square root of a rational: the value is sign(r)·√|r| where `r`
/// is the stored signed square. Exact under multiplication.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ExactRoot {
    signed_sq: BigRational,
}

impl ExactRoot {
    pub fn zero() -> Self {
        ExactRoot {
            signed_sq: BigRational::zero(),
        }
    }

    /// Build from a plain rational value c (no radical): stores sign(c)·c².
    pub fn from_rational(c: BigRational) -> Self {
        let sq = &c * &c;
        ExactRoot {
            signed_sq: if c.is_negative() { -sq } else { sq },
        }
    }

    /// Build c·√r from a rational coefficient and a non-negative radicand.
    pub fn new(c: BigRational, radicand: BigRational) -> Self {
        assert!(!radicand.is_negative(), "radicand must be non-negative");
        let sq = &c * &c * radicand;
        ExactRoot {
            signed_sq: if c.is_negative() { -sq } else { sq },
        }
    }

    /// The signed square sign(v)·v².
    pub fn signed_sq(&self) -> &BigRational {
        &self.signed_sq
    }

    pub fn is_zero(&self) -> bool {
        self.signed_sq.is_zero()
    }

    pub fn sign(&self) -> Ordering {
        self.signed_sq.cmp(&BigRational::zero())
    }

    pub fn mul(&self, other: &ExactRoot) -> ExactRoot {
        ExactRoot {
            signed_sq: &self.signed_sq * &other.signed_sq,
        }
    }

    pub fn neg(&self) -> ExactRoot {
        ExactRoot {
            signed_sq: -self.signed_sq.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        let sign = match self.sign() {
            Ordering::Less => -1.0,
            Ordering::Equal => return 0.0,
            Ordering::Greater => 1.0,
        };
        sign * rational_to_f64(&self.signed_sq.abs()).sqrt()
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    // Scale down huge numerator/denominator pairs before converting.
    let (n, d) = (r.numer(), r.denom());
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    let shift = (nb.max(db) - 900).max(0) as u64;
    let n = n >> shift;
    let d = d >> shift;
    let nf = bigint_to_f64(&n);
    let df = bigint_to_f64(&d);
    nf / df
}

fn bigint_to_f64(b: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    b.to_f64().unwrap_or(f64::INFINITY)
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum AngularError {
    #[error("inconsistent quantum numbers: {0}")]
    InvalidQuantumNumbers(String),
    #[error("forbidden transition: {0}")]
    ForbiddenTransition(String),
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
}

fn factorial(n: i32) -> BigInt {
    debug_assert!(n >= 0);
    let mut acc = BigInt::one();
    for k in 2..=n as u64 {
        acc *= k;
    }
    acc
}

fn triangle_ok(a: HalfInt, b: HalfInt, c: HalfInt) -> bool {
    let (a, b, c) = (a.twice, b.twice, c.twice);
    a + b >= c && b + c >= a && c + a >= b && (a + b + c) % 2 == 0
}

/// Δ(abc) = (a+b−c)!(a−b+c)!(−a+b+c)!/(a+b+c+1)! as an exact rational.
fn triangle_coefficient(a: HalfInt, b: HalfInt, c: HalfInt) -> BigRational {
    let f = |t: i32| factorial(t / 2);
    let num = f(a.twice + b.twice - c.twice)
        * f(a.twice - b.twice + c.twice)
        * f(-a.twice + b.twice + c.twice);
    let den = f(a.twice + b.twice + c.twice + 2);
    BigRational::new(num, den)
}

fn check_jm(j: HalfInt, m: HalfInt, label: &str) -> Result<(), AngularError> {
    if j.is_negative() {
        return Err(AngularError::InvalidQuantumNumbers(format!(
            "{label}: j = {j} < 0"
        )));
    }
    if !j.same_parity(m) {
        return Err(AngularError::InvalidQuantumNumbers(format!(
            "{label}: m = {m} not integer-separated from j = {j}"
        )));
    }
    if m.abs() > j {
        return Err(AngularError::InvalidQuantumNumbers(format!(
            "{label}: |m| = {} exceeds j = {j}",
            m.abs()
        )));
    }
    Ok(())
}

/// Wigner 3j symbol (j1 j2 j3; m1 m2 m3) by the Racah single-sum formula,
/// exact. Selection-rule failures return an exact zero.
pub fn wigner3j(
    j1: HalfInt,
    j2: HalfInt,
    j3: HalfInt,
    m1: HalfInt,
    m2: HalfInt,
    m3: HalfInt,
) -> Result<ExactRoot, AngularError> {
    check_jm(j1, m1, "j1")?;
    check_jm(j2, m2, "j2")?;
    check_jm(j3, m3, "j3")?;
    if (m1 + m2 + m3).twice() != 0 || !triangle_ok(j1, j2, j3) {
        return Ok(ExactRoot::zero());
    }

    // Racah sum over k, all factorial arguments are true integers here.
    let t = |x: i32| x / 2; // twice-value → integer, caller guarantees evenness
    let a1 = t(j1.twice + j2.twice - j3.twice);
    let a2 = t(j1.twice - m1.twice);
    let a3 = t(j2.twice + m2.twice);
    let b1 = t(j3.twice - j2.twice + m1.twice);
    let b2 = t(j3.twice - j1.twice - m2.twice);

    let k_min = 0.max(-b1).max(-b2);
    let k_max = a1.min(a2).min(a3);
    if k_min > k_max {
        return Ok(ExactRoot::zero());
    }

    let mut sum = BigRational::zero();
    for k in k_min..=k_max {
        let den = factorial(k)
            * factorial(a1 - k)
            * factorial(a2 - k)
            * factorial(a3 - k)
            * factorial(b1 + k)
            * factorial(b2 + k);
        let term = BigRational::new(BigInt::one(), den);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }

    // Radicand: Δ(j1j2j3) · Π (ji ± mi)!
    let mut rad = triangle_coefficient(j1, j2, j3);
    for (j, m) in [(j1, m1), (j2, m2), (j3, m3)] {
        rad *= BigRational::from(factorial(t(j.twice + m.twice)));
        rad *= BigRational::from(factorial(t(j.twice - m.twice)));
    }

    // Phase (−1)^(j1−j2−m3).
    let phase_exp = t(j1.twice - j2.twice - m3.twice);
    let coeff = if phase_exp.rem_euclid(2) == 0 {
        sum
    } else {
        -sum
    };
    Ok(ExactRoot::new(coeff, rad))
}

/// Wigner 6j symbol {j1 j2 j3; j4 j5 j6}, exact. Triad violations give zero.
pub fn wigner6j(
    j1: HalfInt,
    j2: HalfInt,
    j3: HalfInt,
    j4: HalfInt,
    j5: HalfInt,
    j6: HalfInt,
) -> Result<ExactRoot, AngularError> {
    for (j, label) in [
        (j1, "j1"),
        (j2, "j2"),
        (j3, "j3"),
        (j4, "j4"),
        (j5, "j5"),
        (j6, "j6"),
    ] {
        if j.is_negative() {
            return Err(AngularError::InvalidQuantumNumbers(format!(
                "{label} = {j} < 0"
            )));
        }
    }
    let triads = [(j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3)];
    if triads.iter().any(|&(a, b, c)| !triangle_ok(a, b, c)) {
        return Ok(ExactRoot::zero());
    }

    let t = |x: i32| x / 2;
    // Four triad sums and three opposite-pair sums (all integers).
    let s1 = t(j1.twice + j2.twice + j3.twice);
    let s2 = t(j1.twice + j5.twice + j6.twice);
    let s3 = t(j4.twice + j2.twice + j6.twice);
    let s4 = t(j4.twice + j5.twice + j3.twice);
    let q1 = t(j1.twice + j2.twice + j4.twice + j5.twice);
    let q2 = t(j2.twice + j3.twice + j5.twice + j6.twice);
    let q3 = t(j3.twice + j1.twice + j6.twice + j4.twice);

    let k_min = s1.max(s2).max(s3).max(s4);
    let k_max = q1.min(q2).min(q3);
    if k_min > k_max {
        return Ok(ExactRoot::zero());
    }

    let mut sum = BigRational::zero();
    for k in k_min..=k_max {
        let num = factorial(k + 1);
        let den = factorial(k - s1)
            * factorial(k - s2)
            * factorial(k - s3)
            * factorial(k - s4)
            * factorial(q1 - k)
            * factorial(q2 - k)
            * factorial(q3 - k);
        let term = BigRational::new(num, den);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }

    let mut rad = BigRational::one();
    for (a, b, c) in triads {
        rad *= triangle_coefficient(a, b, c);
    }
    Ok(ExactRoot::new(sum, rad))
}

/// Clebsch–Gordan coefficient ⟨j1 m1 j2 m2 | J M⟩ via the 3j symbol.
pub fn clebsch_gordan(
    j1: HalfInt,
    m1: HalfInt,
    j2: HalfInt,
    m2: HalfInt,
    j: HalfInt,
    m: HalfInt,
) -> Result<ExactRoot, AngularError> {
    let three_j = wigner3j(j1, j2, j, m1, m2, -m)?;
    if three_j.is_zero() {
        return Ok(ExactRoot::zero());
    }
    let phase_exp = (j1.twice() - j2.twice() + m.twice()) / 2;
    let sign = if phase_exp.rem_euclid(2) == 0 {
        BigRational::one()
    } else {
        -BigRational::one()
    };
    let weight = ExactRoot::new(sign, BigRational::from(BigInt::from(j.twice() + 1)));
    Ok(weight.mul(&three_j))
}
