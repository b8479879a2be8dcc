//! Slopes in chart coordinates and conversion to surgery coefficients.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};

/// A slope v/h in lowest terms with positive denominator, or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SlopeValue {
    Finite { num: i64, den: i64 },
    Infinity,
}

impl SlopeValue {
    pub fn new(num: i64, den: i64) -> SlopeValue {
        if den == 0 {
            return SlopeValue::Infinity;
        }
        let g = num.gcd(&den);
        let s = den.signum();
        SlopeValue::Finite { num: s * num / g, den: s * den / g }
    }

    /// The primitive class with h > 0 (or (0, 1) for infinity) of this slope.
    pub fn primitive_class(self) -> (i64, i64) {
        match self {
            SlopeValue::Finite { num, den } => (den, num),
            SlopeValue::Infinity => (0, 1),
        }
    }

    pub fn to_rational(self) -> Option<BigRational> {
        match self {
            SlopeValue::Finite { num, den } => Some(BigRational::new(num.into(), den.into())),
            SlopeValue::Infinity => None,
        }
    }
}

impl PartialOrd for SlopeValue {
    /// Infinity sorts above every finite slope.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SlopeValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (SlopeValue::Infinity, SlopeValue::Infinity) => Ordering::Equal,
            (SlopeValue::Infinity, _) => Ordering::Greater,
            (_, SlopeValue::Infinity) => Ordering::Less,
            (SlopeValue::Finite { num: a, den: b }, SlopeValue::Finite { num: c, den: d }) => {
                (i128::from(*a) * i128::from(*d)).cmp(&(i128::from(*c) * i128::from(*b)))
            }
        }
    }
}

impl fmt::Display for SlopeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlopeValue::Infinity => write!(f, "inf"),
            SlopeValue::Finite { num, den: 1 } => write!(f, "{num}"),
            SlopeValue::Finite { num, den } => write!(f, "{num}/{den}"),
        }
    }
}

impl FromStr for SlopeValue {
    type Err = Error;
    fn from_str(s: &str) -> Result<SlopeValue> {
        let s = s.trim();
        if matches!(s, "inf" | "infinity" | "oo" | "1/0") {
            return Ok(SlopeValue::Infinity);
        }
        let bad = || Error::Malformed(format!("not a slope: {s:?}"));
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim().parse::<i64>().map_err(|_| bad())?, q.trim().parse::<i64>().map_err(|_| bad())?),
            None => (s.parse::<i64>().map_err(|_| bad())?, 1),
        };
        Ok(SlopeValue::new(p, q))
    }
}

pub fn slope_of_class((h, v): (i64, i64)) -> Result<SlopeValue> {
    if h == 0 && v == 0 {
        return Err(Error::ZeroClass);
    }
    Ok(SlopeValue::new(v, h))
}

/// Two chart vectors (e.g. longitude and meridian of a knot exterior).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PeripheralBasis {
    pub lambda: (i64, i64),
    pub mu: (i64, i64),
    /// Negate coefficients, for pictures drawn with the opposite orientation.
    pub flip_orientation: bool,
}

impl PeripheralBasis {
    pub fn new(lambda: (i64, i64), mu: (i64, i64)) -> Result<PeripheralBasis> {
        let b = PeripheralBasis { lambda, mu, flip_orientation: false };
        let d = b.det();
        if d.abs() != 1 {
            return Err(Error::NotUnimodular(d));
        }
        Ok(b)
    }

    pub fn det(&self) -> i64 {
        self.lambda.0 * self.mu.1 - self.lambda.1 * self.mu.0
    }

    /// Writes a chart class as q·λ + p·μ and returns (p, q).
    pub fn coordinates(&self, (h, v): (i64, i64)) -> Result<(i64, i64)> {
        let d = self.det();
        if d.abs() != 1 {
            return Err(Error::NotUnimodular(d));
        }
        let q = (h * self.mu.1 - v * self.mu.0) / d;
        let p = (self.lambda.0 * v - self.lambda.1 * h) / d;
        Ok(if self.flip_orientation { (-p, q) } else { (p, q) })
    }

    /// The chart class q·λ + p·μ.
    pub fn chart_class(&self, p: i64, q: i64) -> (i64, i64) {
        let p = if self.flip_orientation { -p } else { p };
        (q * self.lambda.0 + p * self.mu.0, q * self.lambda.1 + p * self.mu.1)
    }
}

/// A surgery coefficient p/q, possibly infinite (q = 0).
pub type Coefficient = SlopeValue;

/// The surgery coefficient of a chart slope in the given basis.
pub fn convert_slope(slope: SlopeValue, basis: &PeripheralBasis) -> Result<Coefficient> {
    let (p, q) = basis.coordinates(slope.primitive_class())?;
    Ok(SlopeValue::new(p, q))
}

/// Inverse of [`convert_slope`].
pub fn coefficient_to_slope(c: Coefficient, basis: &PeripheralBasis) -> Result<SlopeValue> {
    let d = basis.det();
    if d.abs() != 1 {
        return Err(Error::NotUnimodular(d));
    }
    let (p, q) = match c {
        SlopeValue::Finite { num, den } => (num, den),
        SlopeValue::Infinity => (1, 0),
    };
    let (h, v) = basis.chart_class(p, q);
    slope_of_class((h, v))
}

/// Exact coefficient of a rational chart slope s (`None` meaning infinity).
pub fn convert_rational(s: Option<&BigRational>, basis: &PeripheralBasis) -> Result<Option<BigRational>> {
    let d = basis.det();
    if d.abs() != 1 {
        return Err(Error::NotUnimodular(d));
    }
    // class (1, s) or (0, 1); coefficient p/q is homogeneous so rationals are fine
    let (h, v) = match s {
        Some(s) => (BigRational::from_integer(1.into()), s.clone()),
        None => (BigRational::zero(), BigRational::from_integer(1.into())),
    };
    let r = |x: i64| BigRational::from_integer(x.into());
    let dq = r(d);
    let q = (&h * r(basis.mu.1) - &v * r(basis.mu.0)) / &dq;
    let mut p = (r(basis.lambda.0) * &v - r(basis.lambda.1) * &h) / &dq;
    if basis.flip_orientation {
        p = -p;
    }
    Ok(if q.is_zero() { None } else { Some(p / q) })
}

/// Direction of the map from chart slopes to coefficients on either side of
/// the slope sent to infinity: +1 if increasing, -1 if decreasing.
pub fn conversion_orientation(basis: &PeripheralBasis) -> i64 {
    // c(s) = (λh s - λv) / (μv - μh s), whose derivative has the sign of det
    let s = if basis.flip_orientation { -1 } else { 1 };
    basis.det().signum() * s
}

/// Chart slope whose surgery coefficient is `c` (`None` meaning infinity), exactly.
pub fn coefficient_to_chart(c: Option<&BigRational>, basis: &PeripheralBasis) -> Result<Option<BigRational>> {
    let d = basis.det();
    if d.abs() != 1 {
        return Err(Error::NotUnimodular(d));
    }
    let r = |x: i64| BigRational::from_integer(x.into());
    // class q·λ + p·μ with (p, q) = (c, 1), or (1, 0) for infinity
    let (p, q) = match c {
        Some(c) => (if basis.flip_orientation { -c.clone() } else { c.clone() }, r(1)),
        None => (r(1), r(0)),
    };
    let h = &q * r(basis.lambda.0) + &p * r(basis.mu.0);
    let v = q * r(basis.lambda.1) + p * r(basis.mu.1);
    Ok(if h.is_zero() { None } else { Some(v / h) })
}
