use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{invalid, Result};

/// Absolute threshold below which a floating value is treated as zero.
pub const FLOAT_ZERO_TOL: f64 = 1e-9;

/// Exact rational numbers, always stored in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Which coefficient field a computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rational,
    Z2,
    Float,
}

impl FieldKind {
    pub fn tag(self) -> &'static str {
        match self {
            FieldKind::Rational => "q",
            FieldKind::Z2 => "z2",
            FieldKind::Float => "f64",
        }
    }

    pub fn from_tag(tag: &str) -> Result<Self> {
        match tag {
            "q" | "Q" | "rational" => Ok(FieldKind::Rational),
            "z2" | "Z2" => Ok(FieldKind::Z2),
            "f64" | "float" | "real" => Ok(FieldKind::Float),
            other => invalid(format!("unknown field tag {other:?}")),
        }
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Coefficient field for chains and matrices.
///
/// Arithmetic takes references so that big rationals are not cloned on every
/// operation. Values of different fields cannot be mixed: every container is
/// generic over exactly one `Field`.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    const KIND: FieldKind;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    /// `None` for zero.
    fn inverse(&self) -> Option<Self>;
    fn from_i64(v: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;

    fn is_one(&self) -> bool {
        self.minus(&Self::one()).is_zero()
    }

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inverse().map(|r| self.times(&r))
    }
}

/// Residues modulo two.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Z2(bool);

impl Z2 {
    pub const ZERO: Z2 = Z2(false);
    pub const ONE: Z2 = Z2(true);

    pub fn new(bit: bool) -> Self {
        Z2(bit)
    }

    pub fn bit(self) -> bool {
        self.0
    }
}

impl fmt::Display for Z2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", u8::from(self.0))
    }
}

impl Field for Z2 {
    const KIND: FieldKind = FieldKind::Z2;

    fn zero() -> Self {
        Z2(false)
    }
    fn one() -> Self {
        Z2(true)
    }
    fn is_zero(&self) -> bool {
        !self.0
    }
    fn plus(&self, rhs: &Self) -> Self {
        Z2(self.0 ^ rhs.0)
    }
    fn minus(&self, rhs: &Self) -> Self {
        Z2(self.0 ^ rhs.0)
    }
    fn times(&self, rhs: &Self) -> Self {
        Z2(self.0 & rhs.0)
    }
    fn negated(&self) -> Self {
        *self
    }
    fn inverse(&self) -> Option<Self> {
        self.0.then_some(*self)
    }
    fn from_i64(v: i64) -> Self {
        Z2(v.rem_euclid(2) == 1)
    }
    fn to_f64(&self) -> f64 {
        if self.0 {
            1.0
        } else {
            0.0
        }
    }
    fn to_json(&self) -> Value {
        Value::from(u8::from(self.0))
    }
    fn from_json(v: &Value) -> Result<Self> {
        match v.as_i64() {
            Some(i) => Ok(Z2::from_i64(i)),
            None => invalid(format!("expected 0/1 for a Z/2 value, got {v}")),
        }
    }
}

impl Field for Rational {
    const KIND: FieldKind = FieldKind::Rational;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) if n.is_i64() => Ok(Rational::from_i64(n.as_i64().unwrap_or(0))),
            Value::Number(n) => match n.as_f64().and_then(BigRational::from_float) {
                Some(r) => Ok(r),
                None => invalid(format!("cannot read {v} as a rational")),
            },
            _ => invalid(format!("cannot read {v} as a rational")),
        }
    }
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .or_else(|_| invalid(format!("bad rational literal {s:?}")))
    };
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let d = parse_int(d)?;
            if Zero::is_zero(&d) {
                return invalid(format!("zero denominator in {s:?}"));
            }
            Ok(BigRational::new(parse_int(n)?, d))
        }
    }
}

impl Field for f64 {
    const KIND: FieldKind = FieldKind::Float;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        self.abs() <= FLOAT_ZERO_TOL
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        (!Field::is_zero(self)).then(|| 1.0 / self)
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self)
            .map(Value::Number)
            .unwrap_or(Value::Null)
    }
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => Ok(n.as_f64().unwrap_or(f64::NAN)),
            Value::String(s) => Ok(Field::to_f64(&parse_rational(s)?)),
            _ => invalid(format!("cannot read {v} as a float")),
        }
    }
}

/// Converts between fields through the value's integer or floating reading.
/// Used to lift exact parameterizations into floating point for optimization,
/// and to reduce integral ones mod 2.
pub fn convert<A: Field, B: Field>(a: &A) -> B {
    match (A::KIND, B::KIND) {
        (_, FieldKind::Float) => B::from_json(&a.to_f64().to_json()).unwrap_or_else(|_| B::zero()),
        (_, FieldKind::Rational) => B::from_json(&a.to_json()).expect("numeric conversion"),
        (FieldKind::Rational, FieldKind::Z2) => {
            let r = Rational::from_json(&a.to_json()).expect("rational");
            let num = r.numer() % BigInt::from(2);
            let den = r.denom() % BigInt::from(2);
            assert!(!Zero::is_zero(&den), "even denominator has no Z/2 image");
            B::from_i64(if Zero::is_zero(&num) { 0 } else { 1 })
        }
        (FieldKind::Z2, FieldKind::Z2) => B::from_json(&a.to_json()).expect("same field"),
        (FieldKind::Float, FieldKind::Z2) => B::from_i64(a.to_f64().round() as i64),
    }
}
