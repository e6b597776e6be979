use std::fmt;

use num_complex::Complex64;
use serde_json::Value;

/// Scalars that tensors are built from.
///
/// The involution is complex conjugation for [`Complex64`] and the identity
/// for the real and boolean carriers.
pub trait Semiring: Copy + PartialEq + fmt::Debug + Send + Sync + 'static {
    const NAME: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn add(self, rhs: Self) -> Self;
    fn mul(self, rhs: Self) -> Self;
    fn involution(self) -> Self;

    /// Absolute value used for tolerances; `1.0`/`0.0` for booleans.
    fn magnitude(self) -> f64;

    /// `|self − rhs|`.
    fn distance(self, rhs: Self) -> f64;

    /// `self / rhs` in the field of fractions, when there is one.
    fn ratio(self, rhs: Self) -> Option<Self>;

    /// Whether tolerance-based comparison makes sense for this carrier.
    fn approximate() -> bool {
        true
    }

    fn from_json(v: &Value) -> Option<Self>;
    fn to_json(self) -> Value;

    /// `n · 1`, the value of a closed loop on an `n`-dimensional wire.
    fn from_count(n: usize) -> Self {
        (0..n).fold(Self::zero(), |acc, _| acc.add(Self::one()))
    }

    fn is_zero(self) -> bool {
        self == Self::zero()
    }
}

impl Semiring for Complex64 {
    const NAME: &'static str = "complex";

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn add(self, rhs: Self) -> Self {
        self + rhs
    }
    fn mul(self, rhs: Self) -> Self {
        self * rhs
    }
    fn involution(self) -> Self {
        self.conj()
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn distance(self, rhs: Self) -> f64 {
        (self - rhs).norm()
    }
    fn ratio(self, rhs: Self) -> Option<Self> {
        (rhs.norm() > 0.0).then(|| self / rhs)
    }
    fn from_json(v: &Value) -> Option<Self> {
        match v {
            Value::Number(n) => n.as_f64().map(|x| Complex64::new(x, 0.0)),
            Value::Array(a) if a.len() == 2 => {
                Some(Complex64::new(a[0].as_f64()?, a[1].as_f64()?))
            }
            _ => None,
        }
    }
    fn to_json(self) -> Value {
        if self.im == 0.0 {
            Value::from(self.re)
        } else {
            Value::from(vec![self.re, self.im])
        }
    }
    fn from_count(n: usize) -> Self {
        Complex64::new(n as f64, 0.0)
    }
}

/// The real carrier. Models over it are declared `nonneg-real` and checked
/// for non-negative entries at load time.
impl Semiring for f64 {
    const NAME: &'static str = "nonneg-real";

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn add(self, rhs: Self) -> Self {
        self + rhs
    }
    fn mul(self, rhs: Self) -> Self {
        self * rhs
    }
    fn involution(self) -> Self {
        self
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn distance(self, rhs: Self) -> f64 {
        (self - rhs).abs()
    }
    fn ratio(self, rhs: Self) -> Option<Self> {
        (rhs != 0.0).then(|| self / rhs)
    }
    fn from_json(v: &Value) -> Option<Self> {
        v.as_f64()
    }
    fn to_json(self) -> Value {
        Value::from(self)
    }
    fn from_count(n: usize) -> Self {
        n as f64
    }
}

/// Booleans with `or`/`and`: tensors are relations.
impl Semiring for bool {
    const NAME: &'static str = "boolean";

    fn zero() -> Self {
        false
    }
    fn one() -> Self {
        true
    }
    fn add(self, rhs: Self) -> Self {
        self || rhs
    }
    fn mul(self, rhs: Self) -> Self {
        self && rhs
    }
    fn involution(self) -> Self {
        self
    }
    fn magnitude(self) -> f64 {
        if self {
            1.0
        } else {
            0.0
        }
    }
    fn distance(self, rhs: Self) -> f64 {
        if self == rhs {
            0.0
        } else {
            1.0
        }
    }
    fn ratio(self, _rhs: Self) -> Option<Self> {
        None
    }
    fn approximate() -> bool {
        false
    }
    fn from_json(v: &Value) -> Option<Self> {
        match v {
            Value::Bool(b) => Some(*b),
            Value::Number(n) => n.as_f64().map(|x| x != 0.0),
            _ => None,
        }
    }
    fn to_json(self) -> Value {
        Value::from(self)
    }
    fn from_count(n: usize) -> Self {
        n > 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    proptest! {
        #[test]
        fn complex_involution_is_a_homomorphism(a in -5.0..5.0f64, b in -5.0..5.0f64,
                                                x in -5.0..5.0f64, y in -5.0..5.0f64) {
            let (p, q) = (c(a, b), c(x, y));
            prop_assert!((p.add(q).involution() - p.involution().add(q.involution())).norm() < 1e-12);
            prop_assert!((p.mul(q).involution() - p.involution().mul(q.involution())).norm() < 1e-12);
            prop_assert_eq!(p.involution().involution(), p);
        }

        #[test]
        fn real_semiring_laws(a in 0.0..5.0f64, b in 0.0..5.0f64, d in 0.0..5.0f64) {
            prop_assert!((a.mul(b.add(d)) - a.mul(b).add(a.mul(d))).abs() < 1e-9);
            prop_assert_eq!(a.mul(f64::one()), a);
            prop_assert_eq!(a.add(f64::zero()), a);
        }
    }

    #[test]
    fn boolean_semiring_laws() {
        for a in [false, true] {
            for b in [false, true] {
                for d in [false, true] {
                    assert_eq!(a.mul(b.add(d)), a.mul(b).add(a.mul(d)));
                    assert_eq!(a.add(b.add(d)), a.add(b).add(d));
                }
                assert_eq!(a.mul(b), b.mul(a));
            }
            assert_eq!(a.mul(bool::zero()), bool::zero());
            assert_eq!(a.involution(), a);
        }
        assert!(bool::from_count(3));
        assert!(!bool::from_count(0));
    }

    #[test]
    fn json_scalars() {
        let v: Value = serde_json::from_str("[0.5, -1]").unwrap();
        assert_eq!(Complex64::from_json(&v), Some(c(0.5, -1.0)));
        assert_eq!(Complex64::from_json(&Value::from(2.0)), Some(c(2.0, 0.0)));
        assert_eq!(bool::from_json(&Value::from(1)), Some(true));
        assert_eq!(f64::from_json(&v), None);
    }
}
