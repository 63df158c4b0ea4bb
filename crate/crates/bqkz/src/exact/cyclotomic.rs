//! Arithmetic in the cyclotomic field of order 12.
//!
//! Elements are written on the power basis `1, ζ, ζ², ζ³` of a primitive
//! 12th root of unity ζ, with the minimal relation ζ⁴ = ζ² − 1. The two
//! distinguished constants are the cube root of unity q = ζ⁴ and the
//! imaginary unit i = ζ³.

use super::{rone, rzero, Field, Rational};
use num::{One, Zero};

/// Element of Q(ζ₁₂) with rational coordinates on the basis 1, ζ, ζ², ζ³.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cyc12 {
    c: [Rational; 4],
}

impl Cyc12 {
    pub fn new(c: [Rational; 4]) -> Self {
        Cyc12 { c }
    }

    pub fn coords(&self) -> &[Rational; 4] {
        &self.c
    }

    /// The generator ζ.
    pub fn zeta() -> Self {
        let mut c = [rzero(), rzero(), rzero(), rzero()];
        c[1] = rone();
        Cyc12 { c }
    }

    /// ζ^k for any integer k (ζ¹² = 1).
    pub fn zeta_pow(k: i64) -> Self {
        let k = k.rem_euclid(12) as u32;
        Cyc12::zeta().pow(k as i64).expect("zeta is invertible")
    }

    /// The primitive cube root of unity q = ζ⁴ = e^{2πi/3}.
    pub fn q() -> Self {
        Cyc12::zeta_pow(4)
    }

    /// The imaginary unit i = ζ³.
    pub fn i() -> Self {
        Cyc12::zeta_pow(3)
    }

    pub fn from_rat(r: &Rational) -> Self {
        let mut c = [rzero(), rzero(), rzero(), rzero()];
        c[0] = r.clone();
        Cyc12 { c }
    }

    /// Rational part if the element lies in the prime field.
    pub fn as_rational(&self) -> Option<Rational> {
        if Zero::is_zero(&self.c[1]) && Zero::is_zero(&self.c[2]) && Zero::is_zero(&self.c[3]) {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    /// Multiplication by ζ with reduction through ζ⁴ = ζ² − 1.
    fn mul_zeta(&self) -> Self {
        let [a0, a1, a2, a3] = self.c.clone();
        // (a0 + a1 ζ + a2 ζ² + a3 ζ³) ζ = a3 ζ⁴ + ... = -a3 + a0 ζ + (a1+a3) ζ² + a2 ζ³
        Cyc12 {
            c: [-a3.clone(), a0, a1 + a3, a2],
        }
    }
}

impl std::fmt::Display for Cyc12 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names = ["", "z", "z^2", "z^3"];
        let mut first = true;
        for (k, coeff) in self.c.iter().enumerate() {
            if Zero::is_zero(coeff) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "{coeff}")?;
            } else if One::is_one(coeff) {
                write!(f, "{}", names[k])?;
            } else {
                write!(f, "{coeff}*{}", names[k])?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Field for Cyc12 {
    fn zero() -> Self {
        Cyc12::from_rat(&rzero())
    }

    fn one() -> Self {
        Cyc12::from_rat(&rone())
    }

    fn add(&self, other: &Self) -> Self {
        let mut c = self.c.clone();
        for (a, b) in c.iter_mut().zip(other.c.iter()) {
            *a += b;
        }
        Cyc12 { c }
    }

    fn sub(&self, other: &Self) -> Self {
        let mut c = self.c.clone();
        for (a, b) in c.iter_mut().zip(other.c.iter()) {
            *a -= b;
        }
        Cyc12 { c }
    }

    fn mul(&self, other: &Self) -> Self {
        let mut acc = Cyc12::zero();
        let mut shifted = self.clone();
        for k in 0..4 {
            if !Zero::is_zero(&other.c[k]) {
                let mut term = shifted.clone();
                for coord in term.c.iter_mut() {
                    *coord *= &other.c[k];
                }
                acc = acc.add(&term);
            }
            if k < 3 {
                shifted = shifted.mul_zeta();
            }
        }
        acc
    }

    fn neg(&self) -> Self {
        let mut c = self.c.clone();
        for a in c.iter_mut() {
            *a = -a.clone();
        }
        Cyc12 { c }
    }

    /// Inverse by solving the 4×4 linear system of multiplication by `self`.
    fn inv(&self) -> Option<Self> {
        if Field::is_zero(self) {
            return None;
        }
        // columns of the multiplication matrix: self * ζ^j
        let mut cols = Vec::with_capacity(4);
        let mut cur = self.clone();
        for _ in 0..4 {
            cols.push(cur.c.clone());
            cur = cur.mul_zeta();
        }
        // augmented solve M x = e0 where M[i][j] = cols[j][i]
        let mut a: Vec<Vec<Rational>> = (0..4)
            .map(|i| {
                let mut row: Vec<Rational> = (0..4).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 { rone() } else { rzero() });
                row
            })
            .collect();
        for col in 0..4 {
            let piv = (col..4).find(|&r| !Zero::is_zero(&a[r][col]))?;
            a.swap(col, piv);
            let p = a[col][col].clone();
            for x in a[col].iter_mut() {
                *x /= &p;
            }
            for r in 0..4 {
                if r != col && !Zero::is_zero(&a[r][col]) {
                    let f = a[r][col].clone();
                    for c in 0..5 {
                        let d = &a[col][c] * &f;
                        a[r][c] -= d;
                    }
                }
            }
        }
        let mut c = [rzero(), rzero(), rzero(), rzero()];
        for (k, item) in c.iter_mut().enumerate() {
            *item = a[k][4].clone();
        }
        Some(Cyc12 { c })
    }

    fn from_rational(r: &Rational) -> Self {
        Cyc12::from_rat(r)
    }

    fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{bracket, rat};
    use rand::{Rng, SeedableRng};

    fn sample(rng: &mut impl Rng) -> Cyc12 {
        Cyc12::new([
            rat(rng.gen_range(-9..=9), rng.gen_range(1..=9)),
            rat(rng.gen_range(-9..=9), rng.gen_range(1..=9)),
            rat(rng.gen_range(-9..=9), rng.gen_range(1..=9)),
            rat(rng.gen_range(-9..=9), rng.gen_range(1..=9)),
        ])
    }

    #[test]
    fn minimal_relation_and_roots_of_unity() {
        let z = Cyc12::zeta();
        // ζ⁴ = ζ² − 1
        assert_eq!(z.pow(4).unwrap(), z.pow(2).unwrap().sub(&Cyc12::one()));
        // ζ⁴ · ζ⁸ = 1
        assert_eq!(Cyc12::zeta_pow(4).mul(&Cyc12::zeta_pow(8)), Cyc12::one());
        let q = Cyc12::q();
        assert_eq!(q.pow(3).unwrap(), Cyc12::one());
        assert_ne!(q, Cyc12::one());
        // q² + q + 1 = 0
        assert!(Field::is_zero(&q.pow(2).unwrap().add(&q).add(&Cyc12::one())));
        let i = Cyc12::i();
        assert_eq!(i.mul(&i), Cyc12::one().neg());
    }

    #[test]
    fn bracket_at_q_gives_tau_one() {
        // [q] = q − q² and −(q + q⁻¹) = 1
        let q = Cyc12::q();
        assert_eq!(bracket(&q).unwrap(), q.sub(&q.pow(2).unwrap()));
        let tau = q.add(&q.inv().unwrap()).neg();
        assert_eq!(tau, Cyc12::one());
    }

    #[test]
    fn field_axioms_and_inverse() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let (a, b, c) = (sample(&mut rng), sample(&mut rng), sample(&mut rng));
            assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            if !Field::is_zero(&a) {
                assert_eq!(a.mul(&a.inv().unwrap()), Cyc12::one());
            }
        }
    }
}
