//! The scalar field: exact arbitrary-precision rationals or f64, never mixed.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// Arithmetic mode of a scalar or of a whole computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

/// A field element: an exact rational or an approximate double.
///
/// Mixing modes in arithmetic is a programming error and panics.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(BigRational::one())
    }

    pub fn int(n: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    /// Builds `n/d` exactly. Panics if `d == 0`.
    pub fn ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Scalar::Exact(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn float(v: f64) -> Self {
        Scalar::Float(v)
    }

    /// Multiplies by a small integer, staying in this scalar's mode.
    pub fn mul_int(&self, k: i64) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r * BigRational::from_integer(BigInt::from(k))),
            Scalar::Float(v) => Scalar::Float(v * k as f64),
        }
    }

    /// Divides by a small nonzero integer, staying in this scalar's mode.
    pub fn div_int(&self, k: i64) -> Scalar {
        assert!(k != 0, "division by zero");
        match self {
            Scalar::Exact(r) => Scalar::Exact(r / BigRational::from_integer(BigInt::from(k))),
            Scalar::Float(v) => Scalar::Float(v / k as f64),
        }
    }

    /// An integer constant in the requested mode.
    pub fn of_mode(mode: Mode, k: i64) -> Scalar {
        match mode {
            Mode::Exact => Scalar::int(k),
            Mode::Float => Scalar::Float(k as f64),
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Float(_) => Mode::Float,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(v) => *v == 0.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_negative(),
            Scalar::Float(v) => *v < 0.0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => {
                let n = r.numer();
                let d = r.denom();
                // Good enough for rendering and diagnostics.
                rational_to_f64(n, d)
            }
            Scalar::Float(v) => *v,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Float(v) => Scalar::Float(v.abs()),
        }
    }

    pub fn recip(&self) -> Scalar {
        assert!(!self.is_zero(), "division by zero");
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.recip()),
            Scalar::Float(v) => Scalar::Float(1.0 / v),
        }
    }

    /// Exact square root when it exists in the field.
    ///
    /// Exact mode returns `Some` only for perfect squares of rationals;
    /// float mode returns `Some` for non-negative values.
    pub fn sqrt(&self) -> Option<Scalar> {
        match self {
            Scalar::Exact(r) => {
                if r.is_negative() {
                    return None;
                }
                let n = r.numer();
                let d = r.denom();
                let sn = n.sqrt();
                let sd = d.sqrt();
                if &(&sn * &sn) == n && &(&sd * &sd) == d {
                    Some(Scalar::Exact(BigRational::new(sn, sd)))
                } else {
                    None
                }
            }
            Scalar::Float(v) => {
                if *v < 0.0 {
                    None
                } else {
                    Some(Scalar::Float(v.sqrt()))
                }
            }
        }
    }

    /// Strict equality (not projective): exact compares rationals, float compares bits.
    pub fn eq_strict(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (Scalar::Float(a), Scalar::Float(b)) => a == b,
            _ => false,
        }
    }

    fn binop(&self, other: &Scalar, f_exact: impl Fn(&BigRational, &BigRational) -> BigRational, f_f64: impl Fn(f64, f64) -> f64) -> Scalar {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(f_exact(a, b)),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(f_f64(*a, *b)),
            // The exact zero is a neutral element and may meet either mode;
            // it cannot contaminate a float computation with false precision.
            (Scalar::Exact(a), Scalar::Float(b)) if a.is_zero() => Scalar::Float(f_f64(0.0, *b)),
            (Scalar::Float(a), Scalar::Exact(b)) if b.is_zero() => Scalar::Float(f_f64(*a, 0.0)),
            _ => panic!("scalar mode mismatch: exact and float values may not be combined"),
        }
    }
}

fn rational_to_f64(n: &BigInt, d: &BigInt) -> f64 {
    use num::ToPrimitive;
    if let (Some(nf), Some(df)) = (n.to_f64(), d.to_f64()) {
        if df != 0.0 && nf.is_finite() && df.is_finite() {
            return nf / df;
        }
    }
    // Fall back to scaled division for extreme magnitudes.
    let shift = 64.max(d.bits() as i64) as u64;
    let scaled = (n << shift) / d;
    scaled.to_f64().unwrap_or(f64::NAN) / 2f64.powi(shift as i32)
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.eq_strict(other)
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.partial_cmp(b),
            (Scalar::Float(a), Scalar::Float(b)) => a.partial_cmp(b),
            _ => None,
        }
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $op_exact:expr, $op_f64:expr) => {
        impl $trait for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.binop(rhs, $op_exact, $op_f64)
            }
        }
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

impl_binop!(Add, add, |a, b| a + b, |a, b| a + b);
impl_binop!(Sub, sub, |a, b| a - b, |a, b| a - b);
impl_binop!(Mul, mul, |a, b| a * b, |a, b| a * b);

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        assert!(!rhs.is_zero(), "division by zero");
        self.binop(rhs, |a, b| a / b, |a, b| a / b)
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        (&self) / (&rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float(v) => Scalar::Float(-v),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -(&self)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Float(v) => write!(f, "{v}"),
        }
    }
}

/// Comparison policy: exact values compare exactly, floats within `tol`.
#[derive(Clone, Copy, Debug)]
pub struct Comparator {
    pub tol: f64,
}

impl Default for Comparator {
    fn default() -> Self {
        Comparator { tol: 1e-9 }
    }
}

impl Comparator {
    pub fn new(tol: f64) -> Self {
        Comparator { tol }
    }

    pub fn scalar_is_zero(&self, s: &Scalar) -> bool {
        match s {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(v) => v.abs() <= self.tol,
        }
    }

    /// Zero test relative to a scale (largest magnitude in the ambient object).
    pub fn scalar_is_zero_scaled(&self, s: &Scalar, scale: f64) -> bool {
        match s {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(v) => v.abs() <= self.tol * scale.max(1.0),
        }
    }

    /// Projective equality of coordinate vectors: up to a common nonzero factor.
    pub fn proj_eq_vec(&self, a: &[Scalar], b: &[Scalar]) -> bool {
        if a.len() != b.len() {
            return false;
        }
        let a_zero = a.iter().all(|s| self.scalar_is_zero(s));
        let b_zero = b.iter().all(|s| self.scalar_is_zero(s));
        if a_zero || b_zero {
            return a_zero && b_zero;
        }
        // All 2x2 cross products vanish.
        for i in 0..a.len() {
            for j in (i + 1)..a.len() {
                let cross = &(&a[i] * &b[j]) - &(&a[j] * &b[i]);
                let scale = a
                    .iter()
                    .chain(b.iter())
                    .map(|s| s.to_f64().abs())
                    .fold(0.0f64, f64::max);
                if !self.scalar_is_zero_scaled(&cross, scale * scale) {
                    return false;
                }
            }
        }
        true
    }
}

/// Clears denominators and common factors: maps a rational vector to a
/// primitive integer vector with positive first nonzero entry.
///
/// Float vectors are normalized to unit maximum magnitude with positive
/// first significant entry instead.
pub fn normalize_primitive(v: &[Scalar]) -> Vec<Scalar> {
    if v.is_empty() {
        return Vec::new();
    }
    // Exact zeros are mode-neutral; classify by the first decisive entry.
    let mode = v
        .iter()
        .find(|s| !matches!(s, Scalar::Exact(r) if r.is_zero()))
        .map(Scalar::mode)
        .unwrap_or(Mode::Exact);
    match mode {
        Mode::Exact => {
            let rats: Vec<&BigRational> = v.iter().map(|s| s.as_exact().expect("mixed-mode vector")).collect();
            if rats.iter().all(|r| r.is_zero()) {
                return v.to_vec();
            }
            let mut lcm = BigInt::one();
            for r in &rats {
                lcm = num::integer::lcm(lcm, r.denom().clone());
            }
            let ints: Vec<BigInt> = rats.iter().map(|r| r.numer() * (&lcm / r.denom())).collect();
            let mut gcd = BigInt::zero();
            for i in &ints {
                gcd = num::integer::gcd(gcd, i.clone());
            }
            let mut out: Vec<BigInt> = ints.iter().map(|i| i / &gcd).collect();
            if let Some(first) = out.iter().find(|i| !i.is_zero()) {
                if first.is_negative() {
                    for o in &mut out {
                        *o = -o.clone();
                    }
                }
            }
            out.into_iter().map(|i| Scalar::Exact(BigRational::from_integer(i))).collect()
        }
        Mode::Float => {
            let max = v.iter().map(|s| s.to_f64().abs()).fold(0.0f64, f64::max);
            if max == 0.0 {
                return v.to_vec();
            }
            let mut out: Vec<f64> = v.iter().map(|s| s.to_f64() / max).collect();
            if let Some(first) = out.iter().find(|x| x.abs() > 1e-12) {
                if *first < 0.0 {
                    for o in &mut out {
                        *o = -*o;
                    }
                }
            }
            out.into_iter().map(Scalar::Float).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic_reduces() {
        let a = Scalar::ratio(2, 4);
        let b = Scalar::ratio(1, 2);
        assert!(a.eq_strict(&b));
        let c = &a + &b;
        assert!(c.eq_strict(&Scalar::one()));
    }

    #[test]
    #[should_panic(expected = "mode mismatch")]
    fn mixing_modes_panics() {
        let _ = &Scalar::int(1) + &Scalar::float(1.0);
    }

    #[test]
    fn exact_sqrt_detects_squares() {
        assert!(Scalar::ratio(4, 9).sqrt().unwrap().eq_strict(&Scalar::ratio(2, 3)));
        assert!(Scalar::int(2).sqrt().is_none());
        assert!(Scalar::int(-4).sqrt().is_none());
    }

    #[test]
    fn primitive_normalization() {
        let v = vec![Scalar::ratio(-2, 3), Scalar::ratio(4, 3), Scalar::int(-2)];
        let n = normalize_primitive(&v);
        assert!(n[0].eq_strict(&Scalar::int(1)));
        assert!(n[1].eq_strict(&Scalar::int(-2)));
        assert!(n[2].eq_strict(&Scalar::int(3)));
    }

    #[test]
    fn projective_vector_equality() {
        let cmp = Comparator::default();
        let a = vec![Scalar::int(1), Scalar::int(2), Scalar::int(-1)];
        let b = vec![Scalar::ratio(-1, 2), Scalar::int(-1), Scalar::ratio(1, 2)];
        assert!(cmp.proj_eq_vec(&a, &b));
        let c = vec![Scalar::int(1), Scalar::int(2), Scalar::int(0)];
        assert!(!cmp.proj_eq_vec(&a, &c));
    }
}
