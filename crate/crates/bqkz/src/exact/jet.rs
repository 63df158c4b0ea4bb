//! First-order jets (dual numbers) over an exact field.
//!
//! A jet carries a value and a derivative with ε² = 0, which is all that is
//! needed to evaluate t′(1) of a transfer matrix exactly.

use super::{Field, Rational};

/// `value + derivative · ε` with ε² = 0.
#[derive(Clone, PartialEq, Debug)]
pub struct Jet<F: Field> {
    pub val: F,
    pub der: F,
}

impl<F: Field> Jet<F> {
    /// Lift a field element as a constant (derivative 0).
    pub fn constant(val: F) -> Self {
        Jet { val, der: F::zero() }
    }

    /// Lift the active variable (derivative 1).
    pub fn variable(val: F) -> Self {
        Jet { val, der: F::one() }
    }
}

impl<F: Field> std::fmt::Display for Jet<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} + {}*eps", self.val, self.der)
    }
}

impl<F: Field> Field for Jet<F> {
    fn zero() -> Self {
        Jet::constant(F::zero())
    }

    fn one() -> Self {
        Jet::constant(F::one())
    }

    fn add(&self, other: &Self) -> Self {
        Jet {
            val: self.val.add(&other.val),
            der: self.der.add(&other.der),
        }
    }

    fn sub(&self, other: &Self) -> Self {
        Jet {
            val: self.val.sub(&other.val),
            der: self.der.sub(&other.der),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        Jet {
            val: self.val.mul(&other.val),
            der: self.val.mul(&other.der).add(&self.der.mul(&other.val)),
        }
    }

    fn neg(&self) -> Self {
        Jet {
            val: self.val.neg(),
            der: self.der.neg(),
        }
    }

    fn inv(&self) -> Option<Self> {
        let vi = self.val.inv()?;
        let der = self.der.mul(&vi).mul(&vi).neg();
        Some(Jet { val: vi, der })
    }

    fn from_rational(r: &Rational) -> Self {
        Jet::constant(F::from_rational(r))
    }

    fn is_zero(&self) -> bool {
        self.val.is_zero() && self.der.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, Rational};
    use rand::{Rng, SeedableRng};

    type J = Jet<Rational>;

    fn sample(rng: &mut impl Rng) -> Rational {
        rat(rng.gen_range(-20..=20), rng.gen_range(1..=20))
    }

    // jet evaluation of f·g matches the product rule on random rational functions
    #[test]
    fn chain_rule_on_random_rational_function_pairs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut done = 0;
        while done < 100 {
            let (a, b, c, d) = (sample(&mut rng), sample(&mut rng), sample(&mut rng), sample(&mut rng));
            let x0 = sample(&mut rng);
            // f(x) = (a + b x)⁻¹, g(x) = c x + d x², away from poles
            let x = J::variable(x0.clone());
            let fden = J::constant(a.clone()).add(&J::constant(b.clone()).mul(&x));
            let Some(f) = fden.inv() else { continue };
            let g = J::constant(c.clone()).mul(&x).add(&J::constant(d.clone()).mul(&x.mul(&x)));
            let prod = f.mul(&g);
            // product rule with hand derivatives
            let fval = f.val.clone();
            let fder = f.der.clone();
            let gval = g.val.clone();
            let gder = g.der.clone();
            assert_eq!(prod.val, fval.mul(&gval));
            assert_eq!(prod.der, fval.mul(&gder).add(&fder.mul(&gval)));
            // derivative of (a+bx)⁻¹ is −b/(a+bx)²
            let den = a.add(&b.mul(&x0));
            if den.is_zero() {
                continue;
            }
            assert_eq!(fder, b.neg().mul(&den.mul(&den).inv().unwrap()));
            done += 1;
        }
    }

    #[test]
    fn epsilon_squares_to_zero() {
        let eps = J {
            val: Rational::zero(),
            der: Rational::one(),
        };
        assert!(Field::is_zero(&eps.mul(&eps)));
    }
}
