//! Exact number and polynomial arithmetic underlying every other module.
//!
//! Three coefficient domains are supported: arbitrary-precision rationals,
//! the degree-4 cyclotomic field generated by a primitive 12th root of unity,
//! and first-order jets over either. All of them implement [`Field`], so the
//! lattice operators and residue evaluators are written once, generically.

mod aux_poly;
mod cyclotomic;
mod jet;
mod laurent;
pub mod linalg;
pub mod mpoly;

pub use aux_poly::{coeff_extract, truncated_geometric, AuxPoly};
pub use cyclotomic::Cyc12;
pub use jet::Jet;
pub use laurent::{interpolate_laurent, LaurentPoly};
pub use mpoly::{MPoly, Var};

use crate::{Error, Result};
use num::{BigInt, BigRational, One, Signed, Zero};

/// Exact rational scalar. Always stored reduced with a positive denominator.
pub type Rational = BigRational;

/// Shorthand constructor for a rational from small integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer as a rational.
pub fn rint(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational zero (unambiguous shorthand next to the `Field` trait).
pub fn rzero() -> Rational {
    num::Zero::zero()
}

/// Rational one.
pub fn rone() -> Rational {
    num::One::one()
}

/// Parses `p` or `p/q` with decimal integers of arbitrary size.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidRational(s.to_string());
    let mut parts = s.splitn(2, '/');
    let num: BigInt = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    let den: BigInt = match parts.next() {
        Some(d) => d.trim().parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// A field of exact scalars. Operations never round; `inv` reports
/// non-invertible elements instead of panicking.
pub trait Field: Clone + PartialEq + std::fmt::Debug + std::fmt::Display + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn from_rational(r: &Rational) -> Self;
    fn is_zero(&self) -> bool;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&rint(n))
    }

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }

    /// Integer power, negative exponents via inversion.
    fn pow(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        Some(acc)
    }
}

impl Field for Rational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as One>::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

/// The bracket `[z] = z - 1/z` used in every vertex-model weight.
pub fn bracket<F: Field>(z: &F) -> Result<F> {
    let inv = z.inv().ok_or(Error::ZeroBracketArgument)?;
    Ok(z.sub(&inv))
}

/// `[a*b]` for field elements, erroring on `a*b = 0`.
pub fn bracket_prod<F: Field>(a: &F, b: &F) -> Result<F> {
    bracket(&a.mul(b))
}

/// Renders a rational as `p` or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Approximate conversion used only by the explicitly numeric checks.
pub fn rational_to_f64(r: &Rational) -> f64 {
    use num::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // fall back to a quotient of truncated parts for huge entries
        let n = r.numer().to_f64().unwrap_or(if r.numer().is_negative() { f64::MIN } else { f64::MAX });
        let d = r.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}
