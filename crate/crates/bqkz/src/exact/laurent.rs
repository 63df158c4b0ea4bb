//! Univariate Laurent polynomials over a generic exact field, with exact
//! interpolation inside a declared degree window. Interpolation is the tool
//! that reconstructs the z-dependence of residue-evaluated components, so an
//! inconsistent sample set signals a degree-bound violation.

use super::Field;
use crate::{Error, Result};
use std::collections::BTreeMap;

/// Laurent polynomial Σ c_k z^k with integer exponents of either sign.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPoly<F: Field> {
    coeffs: BTreeMap<i64, F>,
}

impl<F: Field> LaurentPoly<F> {
    pub fn zero() -> Self {
        LaurentPoly { coeffs: BTreeMap::new() }
    }

    pub fn from_coeffs(items: impl IntoIterator<Item = (i64, F)>) -> Self {
        let mut coeffs = BTreeMap::new();
        for (k, c) in items {
            if !c.is_zero() {
                coeffs.insert(k, c);
            }
        }
        LaurentPoly { coeffs }
    }

    pub fn coeff(&self, k: i64) -> F {
        self.coeffs.get(&k).cloned().unwrap_or_else(F::zero)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&i64, &F)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn low_degree(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn high_degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// True when only exponents of the given parity occur (0 even, 1 odd).
    pub fn has_parity(&self, parity: i64) -> bool {
        self.coeffs.keys().all(|k| k.rem_euclid(2) == parity)
    }

    pub fn eval(&self, z: &F) -> Result<F> {
        let mut acc = F::zero();
        for (k, c) in self.coeffs.iter() {
            let p = z.pow(*k).ok_or(Error::DivisionByZero)?;
            acc = acc.add(&c.mul(&p));
        }
        Ok(acc)
    }
}

/// Unique Laurent polynomial with exponents in `[lowdeg, highdeg]` matching
/// all samples. Needs at least `highdeg − lowdeg + 1` samples at distinct
/// nonzero points; any surplus samples are used as consistency checks and an
/// inconsistency is reported as an over-determination failure.
pub fn interpolate_laurent<F: Field>(
    samples: &[(F, F)],
    lowdeg: i64,
    highdeg: i64,
) -> Result<LaurentPoly<F>> {
    assert!(lowdeg <= highdeg);
    let width = (highdeg - lowdeg + 1) as usize;
    if samples.len() < width {
        return Err(Error::InconsistentSamples { low: lowdeg, high: highdeg });
    }
    // solve the square Vandermonde-like system on the first `width` samples
    let mut m: Vec<Vec<F>> = Vec::with_capacity(width);
    for (z, v) in samples.iter().take(width) {
        let mut row: Vec<F> = Vec::with_capacity(width + 1);
        for k in lowdeg..=highdeg {
            row.push(z.pow(k).ok_or(Error::DivisionByZero)?);
        }
        row.push(v.clone());
        m.push(row);
    }
    for col in 0..width {
        let piv = (col..width)
            .find(|&r| !m[r][col].is_zero())
            .ok_or(Error::InconsistentSamples { low: lowdeg, high: highdeg })?;
        m.swap(col, piv);
        let p = m[col][col].inv().ok_or(Error::DivisionByZero)?;
        for x in m[col].iter_mut() {
            *x = x.mul(&p);
        }
        for r in 0..width {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..=width {
                    let d = m[col][c].mul(&f);
                    m[r][c] = m[r][c].sub(&d);
                }
            }
        }
    }
    let poly = LaurentPoly::from_coeffs(
        (lowdeg..=highdeg).map(|k| (k, m[(k - lowdeg) as usize][width].clone())),
    );
    // surplus samples must agree exactly
    for (z, v) in samples.iter().skip(width) {
        if &poly.eval(z)? != v {
            return Err(Error::InconsistentSamples { low: lowdeg, high: highdeg });
        }
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rint, Rational};
    use rand::{Rng, SeedableRng};

    #[test]
    fn bracket_interpolation() {
        // f(z) = z − 1/z at z ∈ {1, 2, 3} in window [−1, 1]
        let f = |z: &Rational| z - z.recip();
        let samples: Vec<_> = [rint(1), rint(2), rint(3)]
            .into_iter()
            .map(|z| {
                let v = f(&z);
                (z, v)
            })
            .collect();
        let p = interpolate_laurent(&samples, -1, 1).unwrap();
        assert_eq!(p.coeff(-1), rint(-1));
        assert_eq!(p.coeff(0), rint(0));
        assert_eq!(p.coeff(1), rint(1));
        assert!(p.has_parity(1));
    }

    #[test]
    fn constant_samples_give_degree_zero() {
        let samples = vec![(rint(2), rat(5, 3)), (rint(3), rat(5, 3))];
        let p = interpolate_laurent(&samples, 0, 1).unwrap();
        assert_eq!(p.high_degree(), Some(0));
        assert_eq!(p.coeff(0), rat(5, 3));
    }

    #[test]
    fn inconsistent_samples_are_reported() {
        // z² sampled, window only [0, 1]
        let samples = vec![(rint(1), rint(1)), (rint(2), rint(4)), (rint(3), rint(9))];
        assert!(matches!(
            interpolate_laurent(&samples, 0, 1),
            Err(crate::Error::InconsistentSamples { .. })
        ));
    }

    // interpolate ∘ evaluate is the identity on random Laurent polynomials
    #[test]
    fn round_trip_on_random_laurent_polynomials() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let low = rng.gen_range(-4..=0);
            let high = rng.gen_range(0..=4);
            let poly = LaurentPoly::from_coeffs(
                (low..=high).map(|k| (k, rat(rng.gen_range(-9..=9), rng.gen_range(1..=5)))),
            );
            let mut samples = Vec::new();
            let mut z = rint(1);
            while samples.len() < (high - low + 3) as usize {
                z += rat(1, rng.gen_range(1..=3));
                samples.push((z.clone(), poly.eval(&z).unwrap()));
            }
            let back = interpolate_laurent(&samples, low, high).unwrap();
            assert_eq!(back, poly);
        }
    }
}
