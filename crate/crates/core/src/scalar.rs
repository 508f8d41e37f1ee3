//! Numeric backends.
//!
//! Everything in the crate that is not tied to orthogonalization is written
//! against [`Scalar`], which is implemented for exact rationals
//! ([`Rational`]) and for `f64`. The exact backend decides zero exactly; the
//! float backend routes every rank decision through [`RANK_TOL`].

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact arbitrary-precision rational.
pub type Rational = BigRational;

/// Relative pivot threshold used for rank decisions on the float backend.
pub const RANK_TOL: f64 = 1e-9;

/// Relative residual threshold used for acceptance on the float backend.
pub const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Rational,
    Float,
}

impl Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Rational => f.write_str("rational"),
            Backend::Float => f.write_str("float"),
        }
    }
}

impl FromStr for Backend {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rational" | "exact" => Ok(Backend::Rational),
            "float" | "f64" => Ok(Backend::Float),
            other => Err(ParseScalarError(format!("unknown backend `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse number: {0}")]
pub struct ParseScalarError(pub String);

/// A real scalar with one of the two supported representations.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    const BACKEND: Backend;

    fn from_i64(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// Exact conversion for rationals, identity for floats.
    fn from_f64(v: f64) -> Self;

    fn to_f64(&self) -> f64;

    fn abs(&self) -> Self;

    /// Whether `self` should be treated as zero next to a quantity of
    /// magnitude `scale` (both non-negative).
    fn is_negligible(&self, scale: &Self) -> bool;

    /// Same decision for squared magnitudes.
    fn is_negligible_sq(&self, scale_sq: &Self) -> bool;

    /// Parses `p/q`, an integer, or a decimal (with optional exponent).
    fn parse_str(s: &str) -> Result<Self, ParseScalarError>;

    /// Canonical string form; round-trips through [`Scalar::parse_str`].
    fn to_canonical(&self) -> String;

    fn half() -> Self {
        Self::from_ratio(1, 2)
    }

    /// Minimum-norm solution of `rows · x = rhs`; arguments already validated.
    fn min_norm_solve(
        rows: &[Vec<Self>],
        rhs: &[Self],
        d: usize,
    ) -> Result<Vec<Self>, crate::linalg::LinalgError> {
        crate::linalg::gram_schmidt_solve(rows, rhs, d)
    }

    /// Rank of a matrix given by rows.
    fn matrix_rank(m: Vec<Vec<Self>>) -> usize {
        crate::linalg::pivot_rank(m)
    }

    /// Residues of a positive integer multiple of `(point, 1)` modulo a
    /// large prime, for fast exact independence screening. `None` when the
    /// backend is not exact.
    fn homogeneous_residues(_point: &[Self]) -> Option<Vec<u64>> {
        None
    }

    /// `Σ a_i b_i`.
    fn dot(a: &[Self], b: &[Self]) -> Self {
        a.iter()
            .zip(b)
            .fold(Self::zero(), |acc, (x, y)| acc + x.clone() * y)
    }

    /// `⟨u - v, u - v⟩` in signature `(d, d)`, `d = u.len() / 2`.
    fn mink_sq_dist(u: &[Self], v: &[Self]) -> Self {
        let d = u.len() / 2;
        let mut acc = Self::zero();
        for i in 0..d {
            let p = u[i].clone() - &v[i];
            let m = u[d + i].clone() - &v[d + i];
            acc = acc + (p.clone() - &m) * (p + m);
        }
        acc
    }

    fn max_of(a: Self, b: Self) -> Self {
        if a >= b {
            a
        } else {
            b
        }
    }
}

impl Scalar for f64 {
    const BACKEND: Backend = Backend::Float;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_f64(v: f64) -> Self {
        v
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn is_negligible(&self, scale: &Self) -> bool {
        f64::abs(*self) <= RANK_TOL * scale
    }

    fn is_negligible_sq(&self, scale_sq: &Self) -> bool {
        f64::abs(*self) <= RANK_TOL * RANK_TOL * scale_sq
    }

    fn parse_str(s: &str) -> Result<Self, ParseScalarError> {
        let t = s.trim();
        if let Some((p, q)) = t.split_once('/') {
            let r = parse_rational(p, q)?;
            return Ok(Scalar::to_f64(&r));
        }
        t.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| ParseScalarError(s.to_string()))
    }

    fn to_canonical(&self) -> String {
        format!("{self:?}")
    }
}

impl Scalar for Rational {
    const BACKEND: Backend = Backend::Rational;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64(v: f64) -> Self {
        Rational::from_float(v).expect("finite float")
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn is_negligible(&self, _scale: &Self) -> bool {
        self.is_zero()
    }

    fn is_negligible_sq(&self, _scale_sq: &Self) -> bool {
        self.is_zero()
    }

    fn parse_str(s: &str) -> Result<Self, ParseScalarError> {
        let t = s.trim();
        if let Some((p, q)) = t.split_once('/') {
            return parse_rational(p, q);
        }
        parse_decimal(t).ok_or_else(|| ParseScalarError(s.to_string()))
    }

    fn to_canonical(&self) -> String {
        self.to_string()
    }

    fn min_norm_solve(
        rows: &[Vec<Self>],
        rhs: &[Self],
        d: usize,
    ) -> Result<Vec<Self>, crate::linalg::LinalgError> {
        crate::linalg::exact_min_norm_solve(rows, rhs, d)
    }

    fn matrix_rank(m: Vec<Vec<Self>>) -> usize {
        crate::linalg::exact_rank(&m)
    }

    fn homogeneous_residues(point: &[Self]) -> Option<Vec<u64>> {
        let (mut nums, den) = common_numerators(point);
        nums.push(den);
        Some(crate::linalg::residues(&nums))
    }

    fn dot(a: &[Self], b: &[Self]) -> Self {
        let (na, la) = common_numerators(a);
        let (nb, lb) = common_numerators(b);
        let num = na.iter().zip(&nb).fold(BigInt::zero(), |acc, (x, y)| acc + x * y);
        Rational::new(num, la * lb)
    }

    fn mink_sq_dist(u: &[Self], v: &[Self]) -> Self {
        let d = u.len() / 2;
        let (nu, lu) = common_numerators(u);
        let (nv, lv) = common_numerators(v);
        let l = lu.lcm(&lv);
        let (fu, fv) = (&l / &lu, &l / &lv);
        let mut acc = BigInt::zero();
        for i in 0..2 * d {
            let diff = &nu[i] * &fu - &nv[i] * &fv;
            let sq = &diff * &diff;
            if i < d {
                acc += sq;
            } else {
                acc -= sq;
            }
        }
        Rational::new(acc, &l * &l)
    }
}

/// Numerators over the least common denominator, avoiding a gcd per term.
pub(crate) fn common_numerators(xs: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let mut l = BigInt::one();
    for x in xs {
        if !x.denom().is_one() && x.denom() != &l {
            l = l.lcm(x.denom());
        }
    }
    let nums = xs
        .iter()
        .map(|x| {
            if x.denom() == &l {
                x.numer().clone()
            } else {
                x.numer() * (&l / x.denom())
            }
        })
        .collect();
    (nums, l)
}

fn parse_rational(p: &str, q: &str) -> Result<Rational, ParseScalarError> {
    let err = || ParseScalarError(format!("{p}/{q}"));
    let num: BigInt = p.trim().parse().map_err(|_| err())?;
    let den: BigInt = q.trim().parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// Exact value of a decimal literal such as `-12.5e-3`.
fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(all_digits.parse::<BigInt>().ok()?);
    let shift = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if shift >= 0 {
        value *= num_traits::pow(ten, shift as usize);
    } else {
        value /= num_traits::pow(ten, (-shift) as usize);
    }
    Some(if negative { -value } else { value })
}

/// True when the literal denotes an exact rational (`p/q` or an integer),
/// as opposed to a decimal that asks for the float backend.
pub fn is_rational_literal(s: &str) -> bool {
    let t = s.trim();
    let int_like = |x: &str| {
        let x = x.trim();
        let x = x.strip_prefix('-').unwrap_or(x);
        !x.is_empty() && x.chars().all(|c| c.is_ascii_digit())
    };
    match t.split_once('/') {
        Some((p, q)) => int_like(p) && int_like(q),
        None => int_like(t),
    }
}
