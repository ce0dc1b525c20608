//! Scalar types shared across the crate: exact rationals, exact complex
//! rationals, and double-precision complex numbers, together with the small
//! coefficient abstraction that lets the algebra operations run in either
//! arithmetic.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar.
pub type Rat = BigRational;
/// Exact complex-rational scalar.
pub type Cq = Complex<Rat>;
/// Double-precision complex scalar.
pub type C64 = Complex<f64>;

/// Convenience constructor for a rational from machine integers.
///
/// # Panics
/// Panics if `q == 0`.
#[must_use]
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Exact-to-floating conversion for rationals.
#[must_use]
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64()
        .unwrap_or_else(|| r.numer().to_f64().unwrap() / r.denom().to_f64().unwrap())
}

/// Exact complex rational from rational real and imaginary parts.
#[must_use]
pub fn cq(re: Rat, im: Rat) -> Cq {
    Complex::new(re, im)
}

/// Exact-to-floating conversion for complex rationals.
#[must_use]
pub fn cq_to_c64(z: &Cq) -> C64 {
    Complex::new(rat_to_f64(&z.re), rat_to_f64(&z.im))
}

/// Coefficient arithmetic used by algebra elements.
///
/// Two implementations exist: exact complex rationals ([`Cq`]) for every
/// operation expressible without square roots, and [`C64`] for the paths
/// where irrational transport factors enter.
pub trait Coeff: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn conj(&self) -> Self;
    /// Embed a rational (weights are always rational).
    fn from_rat(r: &Rat) -> Self;
    /// Absolute value as a double (used only by norms).
    fn abs(&self) -> f64;
}

impl Coeff for Cq {
    fn zero() -> Self {
        Complex::new(Rat::zero(), Rat::zero())
    }

    fn one() -> Self {
        Complex::new(Rat::one(), Rat::zero())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn add(&self, rhs: &Self) -> Self {
        self.clone() + rhs.clone()
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.clone() * rhs.clone()
    }

    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    fn from_rat(r: &Rat) -> Self {
        Complex::new(r.clone(), Rat::zero())
    }

    fn abs(&self) -> f64 {
        let re = rat_to_f64(&self.re);
        let im = rat_to_f64(&self.im);
        re.hypot(im)
    }
}

impl Coeff for C64 {
    fn zero() -> Self {
        Complex::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex::new(1.0, 0.0)
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn conj(&self) -> Self {
        Complex::new(self.re, -self.im)
    }

    fn from_rat(r: &Rat) -> Self {
        Complex::new(rat_to_f64(r), 0.0)
    }

    fn abs(&self) -> f64 {
        self.norm()
    }
}

/// `|v|` for a rational, as an exact rational.
#[must_use]
pub fn rat_abs(r: &Rat) -> Rat {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_roundtrip() {
        let r = rat(3, 4);
        assert_eq!(rat_to_f64(&r), 0.75);
    }

    #[test]
    fn exact_coeff_arithmetic() {
        let a = cq(rat(1, 2), rat(1, 3));
        let b = a.conj();
        let p = Coeff::mul(&a, &b);
        // |a|^2 = 1/4 + 1/9 = 13/36, exactly.
        assert_eq!(p.re, rat(13, 36));
        assert!(p.im.is_zero());
    }

    #[test]
    fn float_coeff_matches_exact() {
        let a = cq(rat(1, 2), rat(-2, 5));
        let fa = cq_to_c64(&a);
        assert!((Coeff::abs(&a) - fa.norm()).abs() < 1e-15);
    }
}
