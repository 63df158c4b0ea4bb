//! Polynomials in auxiliary expansion variables u₁..u_k with [`MPoly`]
//! coefficients, and the coefficient-extraction primitive that replaces the
//! contour integrals around the origin.

use super::mpoly::MPoly;
use std::collections::BTreeMap;

/// Sparse polynomial in auxiliary variables. Exponent vectors all have the
/// same length; coefficients are polynomials in (x, τ, α, t).
#[derive(Clone, Debug, PartialEq)]
pub struct AuxPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u16>, MPoly>,
}

impl AuxPoly {
    pub fn zero(nvars: usize) -> Self {
        AuxPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![0; nvars], MPoly::one());
        AuxPoly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u16>, &MPoly)> {
        self.terms.iter()
    }

    /// Builds from (exponent vector, coefficient) pairs.
    pub fn from_terms(nvars: usize, items: impl IntoIterator<Item = (Vec<u16>, MPoly)>) -> Self {
        let mut out = AuxPoly::zero(nvars);
        for (e, c) in items {
            assert_eq!(e.len(), nvars);
            out.add_term(e, c);
        }
        out
    }

    /// Monomial `c · u_var^e`.
    pub fn monomial(nvars: usize, var: usize, e: u16, c: MPoly) -> Self {
        let mut exps = vec![0u16; nvars];
        exps[var] = e;
        AuxPoly::from_terms(nvars, [(exps, c)])
    }

    pub fn add_term(&mut self, exps: Vec<u16>, c: MPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_in_place(&c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &AuxPoly) -> AuxPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in other.terms.iter() {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    /// Product with an optional per-variable degree cap: terms whose exponent
    /// in variable v exceeds `caps[v]` can never contribute to the target
    /// coefficient and are dropped as soon as they appear.
    pub fn mul_capped(&self, other: &AuxPoly, caps: &[Option<u16>]) -> AuxPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = AuxPoly::zero(self.nvars);
        for (ea, ca) in self.terms.iter() {
            'inner: for (eb, cb) in other.terms.iter() {
                let mut e = ea.clone();
                for k in 0..self.nvars {
                    e[k] += eb[k];
                    if let Some(cap) = caps[k] {
                        if e[k] > cap {
                            continue 'inner;
                        }
                    }
                }
                out.add_term(e, ca.mul(cb));
            }
        }
        out
    }

    pub fn mul(&self, other: &AuxPoly) -> AuxPoly {
        let caps = vec![None; self.nvars];
        self.mul_capped(other, &caps)
    }

    /// Coefficient of `u_var^e` as a polynomial in the remaining variables.
    pub fn extract_var(&self, var: usize, e: u16) -> AuxPoly {
        let mut out = AuxPoly::zero(self.nvars);
        for (exps, c) in self.terms.iter() {
            if exps[var] == e {
                let mut e2 = exps.clone();
                e2[var] = 0;
                out.add_term(e2, c.clone());
            }
        }
        out
    }

    /// The unique coefficient once every variable has been extracted.
    pub fn into_scalar(self) -> MPoly {
        let mut acc = MPoly::zero();
        for (exps, c) in self.terms {
            assert!(exps.iter().all(|&e| e == 0), "unextracted variables remain");
            acc = acc.add(&c);
        }
        acc
    }
}

/// Coefficient of `∏ u_j^{e_j}` in `p`, as a polynomial in x, τ, α, t.
/// A missing monomial yields the zero polynomial.
pub fn coeff_extract(p: &AuxPoly, exps: &[u16]) -> MPoly {
    assert_eq!(p.nvars(), exps.len());
    let mut cur = p.clone();
    for (var, &e) in exps.iter().enumerate() {
        cur = cur.extract_var(var, e);
    }
    cur.into_scalar()
}

/// Coefficients `[1, −c, c², …, (−c)^order]` of the series `1/(1 + c·u)`
/// through `u^order`.
pub fn truncated_geometric(c: &MPoly, order: usize) -> Vec<MPoly> {
    let mut out = Vec::with_capacity(order + 1);
    let mut cur = MPoly::one();
    out.push(cur.clone());
    let neg = c.neg();
    for _ in 0..order {
        cur = cur.mul(&neg);
        out.push(cur.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::mpoly::Var;
    use crate::exact::{rat, rint};
    use rand::{Rng, SeedableRng};

    fn x() -> MPoly {
        MPoly::var(Var::X)
    }

    fn tau() -> MPoly {
        MPoly::var(Var::Tau)
    }

    // u + x in one auxiliary variable
    fn u_plus_x() -> AuxPoly {
        AuxPoly::from_terms(1, [(vec![1], MPoly::one()), (vec![0], x())])
    }

    #[test]
    fn coeff_extract_examples() {
        let p = u_plus_x();
        assert_eq!(coeff_extract(&p, &[1]), MPoly::one());
        assert_eq!(coeff_extract(&p, &[0]), x());
        // (u+x)(1−u²), coefficient of u⁰ is x
        let one_minus_u2 = AuxPoly::from_terms(1, [(vec![0], MPoly::one()), (vec![2], MPoly::one().neg())]);
        let prod = p.mul(&one_minus_u2);
        assert_eq!(coeff_extract(&prod, &[0]), x());
        assert_eq!(coeff_extract(&prod, &[3]), MPoly::one().neg());
        assert_eq!(coeff_extract(&prod, &[7]), MPoly::zero());
    }

    #[test]
    fn truncated_geometric_examples() {
        let c = x().sub(&tau());
        assert_eq!(truncated_geometric(&c, 0), vec![MPoly::one()]);
        let g = truncated_geometric(&c, 2);
        assert_eq!(g[1], tau().sub(&x()));
        assert_eq!(g[2], x().sub(&tau()).pow(2));
    }

    // binomial series of (1+cu)^{-N} at N=1 equals the geometric series
    #[test]
    fn geometric_matches_binomial_series_at_order_one() {
        // c = (τ²−1)/τ handled through numerator bookkeeping: compare τ·g₁
        let c = tau().pow(2).sub(&MPoly::one());
        let g = truncated_geometric(&c, 1);
        assert_eq!(g[1], MPoly::one().sub(&tau().pow(2)));
    }

    // coefficient extraction is bilinear in the two factors
    #[test]
    fn extraction_is_bilinear() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let mut sample = |deg: u16| {
                let mut p = AuxPoly::zero(2);
                for _ in 0..4 {
                    let e = vec![rng.gen_range(0..=deg), rng.gen_range(0..=deg)];
                    p.add_term(e, MPoly::constant(rat(rng.gen_range(-5..=5), rng.gen_range(1..=4))));
                }
                p
            };
            let (p, q, r) = (sample(3), sample(3), sample(3));
            let e = [rng.gen_range(0..6u16), rng.gen_range(0..6u16)];
            let lhs = coeff_extract(&p.add(&q).mul(&r), &e);
            let rhs = coeff_extract(&p.mul(&r), &e).add(&coeff_extract(&q.mul(&r), &e));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn caps_do_not_change_the_extracted_coefficient() {
        let p = u_plus_x();
        let q = AuxPoly::from_terms(1, [(vec![0], MPoly::one()), (vec![1], tau()), (vec![2], MPoly::one())]);
        let full = p.mul(&q);
        let capped = p.mul_capped(&q, &[Some(1)]);
        assert_eq!(coeff_extract(&full, &[1]), coeff_extract(&capped, &[1]));
        assert_eq!(coeff_extract(&capped, &[1]), x().mul(&tau()).add(&MPoly::one()));
        let _ = rint(0);
    }
}
