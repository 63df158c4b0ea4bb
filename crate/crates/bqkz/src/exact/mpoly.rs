//! Sparse multivariate polynomials over the rationals in the fixed
//! indeterminates x, τ, α, t.
//!
//! The variable order is global so that serialized polynomials are
//! byte-stable. No zero coefficients are ever stored; all arithmetic is
//! exact. Division is deliberately not part of the public surface -- the
//! formulas feeding this type are arranged so that only series truncation and
//! coefficient extraction occur. (Fraction-free elimination uses a crate
//! internal exact-divisibility routine.)

use super::{rone, rzero, Field, Rational};
use crate::{Error, Result};
use num::{BigInt, One, Signed, Zero};

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Canonical indeterminates, in the global order.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Var {
    X = 0,
    Tau = 1,
    Alpha = 2,
    T = 3,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::X, Var::Tau, Var::Alpha, Var::T];

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Tau => "tau",
            Var::Alpha => "alpha",
            Var::T => "t",
        }
    }

    pub fn from_name(s: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == s)
    }
}

type Exps = [u16; 4];

/// Sparse polynomial in (x, τ, α, t) with rational coefficients.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct MPoly {
    terms: BTreeMap<Exps, Rational>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn one() -> Self {
        MPoly::constant(rone())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !Zero::is_zero(&c) {
            terms.insert([0; 4], c);
        }
        MPoly { terms }
    }

    pub fn var(v: Var) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, e: u16) -> Self {
        let mut exps = [0u16; 4];
        exps[v as usize] = e;
        let mut terms = BTreeMap::new();
        terms.insert(exps, rone());
        MPoly { terms }
    }

    pub fn monomial(exps: Exps, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !Zero::is_zero(&c) {
            terms.insert(exps, c);
        }
        MPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &Rational)> {
        self.terms.iter()
    }

    pub fn add_assign_term(&mut self, exps: Exps, c: &Rational) {
        if Zero::is_zero(c) {
            return;
        }
        let slot = self.terms.entry(exps).or_insert_with(rzero);
        *slot += c;
        if Zero::is_zero(slot) {
            self.terms.remove(&exps);
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        out.add_in_place(other);
        out
    }

    pub fn add_in_place(&mut self, other: &MPoly) {
        for (e, c) in other.terms.iter() {
            self.add_assign_term(*e, c);
        }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in other.terms.iter() {
            out.add_assign_term(*e, &(-c.clone()));
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        let terms = self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect();
        MPoly { terms }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (ea, ca) in self.terms.iter() {
            for (eb, cb) in other.terms.iter() {
                let mut e = *ea;
                for (k, x) in e.iter_mut().enumerate() {
                    *x += eb[k];
                }
                out.add_assign_term(e, &(ca * cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> MPoly {
        if Zero::is_zero(c) {
            return MPoly::zero();
        }
        let terms = self.terms.iter().map(|(e, k)| (*e, k * c)).collect();
        MPoly { terms }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one();
        let mut base = self.clone();
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Highest exponent of `v`, or None for the zero polynomial.
    pub fn degree_in(&self, v: Var) -> Option<u16> {
        self.terms.keys().map(|e| e[v as usize]).max()
    }

    /// True if no variable other than those in `allowed` appears.
    pub fn only_involves(&self, allowed: &[Var]) -> bool {
        self.terms.keys().all(|e| {
            Var::ALL
                .into_iter()
                .all(|v| allowed.contains(&v) || e[v as usize] == 0)
        })
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            return Some(rzero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&[0; 4]) {
                return Some(c.clone());
            }
        }
        None
    }

    /// Full evaluation; entries of `vals` follow the canonical variable order.
    pub fn eval(&self, vals: &[Rational; 4]) -> Rational {
        let mut acc = rzero();
        for (e, c) in self.terms.iter() {
            let mut t = c.clone();
            for (k, v) in vals.iter().enumerate() {
                for _ in 0..e[k] {
                    t *= v;
                }
            }
            acc += t;
        }
        acc
    }

    /// Evaluates in any field through `from_rational`.
    pub fn eval_in<F: Field>(&self, vals: &[F; 4]) -> F {
        let mut acc = F::zero();
        for (e, c) in self.terms.iter() {
            let mut t = F::from_rational(c);
            for (k, v) in vals.iter().enumerate() {
                if e[k] > 0 {
                    t = t.mul(&v.pow(e[k] as i64).expect("nonnegative power"));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Partial substitution of a rational value for one variable.
    pub fn eval_var(&self, v: Var, val: &Rational) -> MPoly {
        let mut out = MPoly::zero();
        for (e, c) in self.terms.iter() {
            let mut t = c.clone();
            for _ in 0..e[v as usize] {
                t *= val;
            }
            let mut e2 = *e;
            e2[v as usize] = 0;
            out.add_assign_term(e2, &t);
        }
        out
    }

    /// Substitutes a polynomial for one variable.
    pub fn subst_var(&self, v: Var, val: &MPoly) -> MPoly {
        // group by exponent of v, then Horner over the grouped coefficients
        let mut by_deg: BTreeMap<u16, MPoly> = BTreeMap::new();
        for (e, c) in self.terms.iter() {
            let mut e2 = *e;
            e2[v as usize] = 0;
            by_deg
                .entry(e[v as usize])
                .or_insert_with(MPoly::zero)
                .add_assign_term(e2, c);
        }
        let max = match by_deg.keys().next_back() {
            Some(&m) => m,
            None => return MPoly::zero(),
        };
        let mut acc = MPoly::zero();
        for d in (0..=max).rev() {
            acc = acc.mul(val);
            if let Some(coeff) = by_deg.get(&d) {
                acc = acc.add(coeff);
            }
        }
        acc
    }

    /// Coefficients of powers of `v`, lowest first, each free of `v`.
    pub fn coeffs_in(&self, v: Var) -> Vec<MPoly> {
        let deg = match self.degree_in(v) {
            Some(d) => d as usize,
            None => return vec![MPoly::zero()],
        };
        let mut out = vec![MPoly::zero(); deg + 1];
        for (e, c) in self.terms.iter() {
            let mut e2 = *e;
            e2[v as usize] = 0;
            out[e[v as usize] as usize].add_assign_term(e2, c);
        }
        out
    }

    /// `v^n · p(v → 1/v)`; errors if the degree in `v` exceeds `n`.
    pub fn reverse_in(&self, v: Var, n: u16) -> Result<MPoly> {
        let mut out = MPoly::zero();
        for (e, c) in self.terms.iter() {
            let d = e[v as usize];
            if d > n {
                return Err(Error::SingularPoint(format!(
                    "degree {} in {} exceeds reversal order {}",
                    d,
                    v.name(),
                    n
                )));
            }
            let mut e2 = *e;
            e2[v as usize] = n - d;
            out.add_assign_term(e2, c);
        }
        Ok(out)
    }

    pub fn mul_var_pow(&self, v: Var, k: u16) -> MPoly {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e2 = *e;
                e2[v as usize] += k;
                (e2, c.clone())
            })
            .collect();
        MPoly { terms }
    }

    /// Divides by `v^k`; errors when some term has a smaller exponent.
    pub fn div_var_pow(&self, v: Var, k: u16) -> Result<MPoly> {
        let mut terms = BTreeMap::new();
        for (e, c) in self.terms.iter() {
            if e[v as usize] < k {
                return Err(Error::NotPolynomialInTau);
            }
            let mut e2 = *e;
            e2[v as usize] -= k;
            terms.insert(e2, c.clone());
        }
        Ok(MPoly { terms })
    }

    /// Exact division used by fraction-free elimination; `None` when the
    /// divisor does not divide exactly.
    pub(crate) fn div_exact(&self, divisor: &MPoly) -> Option<MPoly> {
        if divisor.is_zero() {
            return None;
        }
        let mut rem = self.clone();
        let mut quot = MPoly::zero();
        let (dlead_e, dlead_c) = divisor.terms.iter().next_back().map(|(e, c)| (*e, c.clone()))?;
        while !rem.is_zero() {
            let (rlead_e, rlead_c) = rem.terms.iter().next_back().map(|(e, c)| (*e, c.clone()))?;
            let mut qe = [0u16; 4];
            for k in 0..4 {
                if rlead_e[k] < dlead_e[k] {
                    return None;
                }
                qe[k] = rlead_e[k] - dlead_e[k];
            }
            let qc = rlead_c / &dlead_c;
            let qterm = MPoly::monomial(qe, qc);
            rem = rem.sub(&qterm.mul(divisor));
            quot = quot.add(&qterm);
        }
        Some(quot)
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.denom().is_one())
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Serialization per the polynomial JSON schema: only the variables that
    /// actually occur are listed, terms sorted lexicographically by exponent
    /// tuple, integers as decimal strings.
    pub fn to_json(&self) -> PolyJson {
        let used: Vec<Var> = Var::ALL
            .into_iter()
            .filter(|v| self.terms.keys().any(|e| e[*v as usize] > 0))
            .collect();
        let vars = used.iter().map(|v| v.name().to_string()).collect();
        let mut terms: Vec<TermJson> = self
            .terms
            .iter()
            .map(|(e, c)| TermJson {
                exp: used.iter().map(|v| e[*v as usize] as u32).collect(),
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })
            .collect();
        terms.sort_by(|a, b| a.exp.cmp(&b.exp));
        PolyJson { vars, terms }
    }

    pub fn from_json(json: &PolyJson) -> Result<MPoly> {
        let mut vars = Vec::with_capacity(json.vars.len());
        for name in &json.vars {
            vars.push(
                Var::from_name(name)
                    .ok_or_else(|| Error::CacheCorrupt(format!("unknown variable `{name}`")))?,
            );
        }
        let mut out = MPoly::zero();
        for t in &json.terms {
            if t.exp.len() != vars.len() {
                return Err(Error::CacheCorrupt("exponent arity mismatch".into()));
            }
            let num: BigInt = t
                .num
                .parse()
                .map_err(|_| Error::CacheCorrupt(format!("bad numerator `{}`", t.num)))?;
            let den: BigInt = t
                .den
                .parse()
                .map_err(|_| Error::CacheCorrupt(format!("bad denominator `{}`", t.den)))?;
            if Zero::is_zero(&den) {
                return Err(Error::CacheCorrupt("zero denominator".into()));
            }
            let mut exps = [0u16; 4];
            for (v, e) in vars.iter().zip(t.exp.iter()) {
                exps[*v as usize] = *e as u16;
            }
            out.add_assign_term(exps, &Rational::new(num, den));
        }
        Ok(out)
    }
}

/// JSON form of a polynomial: `{"vars": ["x","tau"], "terms": [{"exp": [1,0], "num": "3", "den": "1"}]}`.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub num: String,
    pub den: String,
}

impl std::fmt::Display for MPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter() {
            let mono: Vec<String> = Var::ALL
                .into_iter()
                .filter(|v| e[*v as usize] > 0)
                .map(|v| {
                    if e[v as usize] == 1 {
                        v.name().to_string()
                    } else {
                        format!("{}^{}", v.name(), e[v as usize])
                    }
                })
                .collect();
            let coeff = super::format_rational(c);
            let body = if mono.is_empty() {
                coeff
            } else if One::is_one(c) {
                mono.join("*")
            } else if One::is_one(&(-c.clone())) {
                format!("-{}", mono.join("*"))
            } else {
                format!("{}*{}", coeff, mono.join("*"))
            };
            if first {
                write!(f, "{body}")?;
                first = false;
            } else if let Some(stripped) = body.strip_prefix('-') {
                write!(f, " - {stripped}")?;
            } else {
                write!(f, " + {body}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rint};

    fn x() -> MPoly {
        MPoly::var(Var::X)
    }

    fn tau() -> MPoly {
        MPoly::var(Var::Tau)
    }

    #[test]
    fn arithmetic_and_eval_agree_with_substitution() {
        // (x + τ)² = x² + 2xτ + τ²
        let p = x().add(&tau()).pow(2);
        assert_eq!(p.num_terms(), 3);
        let vals = [rat(2, 1), rat(3, 1), rint(0), rint(0)];
        assert_eq!(p.eval(&vals), rint(25));
        assert_eq!(p.degree_in(Var::X), Some(2));
        assert_eq!(p.eval_var(Var::Tau, &rint(1)), x().add(&MPoly::one()).pow(2));
    }

    #[test]
    fn reversal_and_shift() {
        // x² + 3x → reverse at n=2 → 1 + 3x
        let p = x().pow(2).add(&x().scale(&rint(3)));
        let r = p.reverse_in(Var::X, 2).unwrap();
        assert_eq!(r, MPoly::one().add(&x().scale(&rint(3))));
        assert!(p.reverse_in(Var::X, 1).is_err());
        assert_eq!(p.mul_var_pow(Var::X, 1).div_var_pow(Var::X, 1).unwrap(), p);
        assert!(p.add(&MPoly::one()).div_var_pow(Var::X, 1).is_err());
    }

    #[test]
    fn exact_division_round_trip() {
        let a = x().add(&tau().scale(&rat(2, 3)));
        let b = x().mul(&tau()).add(&MPoly::one());
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        assert!(b.div_exact(&a).is_none());
    }

    #[test]
    fn json_round_trip_is_sorted_and_stable() {
        let p = x().pow(2).scale(&rat(-5, 2)).add(&tau()).add(&MPoly::one().scale(&rint(3)));
        let j = p.to_json();
        assert_eq!(j.vars, vec!["x".to_string(), "tau".to_string()]);
        let exps: Vec<Vec<u32>> = j.terms.iter().map(|t| t.exp.clone()).collect();
        let mut sorted = exps.clone();
        sorted.sort();
        assert_eq!(exps, sorted);
        assert_eq!(MPoly::from_json(&j).unwrap(), p);
        let s1 = serde_json::to_string(&j).unwrap();
        let s2 = serde_json::to_string(&p.to_json()).unwrap();
        assert_eq!(s1, s2);
    }

    #[test]
    fn subst_var_composes() {
        // p(x, τ) with x := τ gives p(τ, τ)
        let p = x().pow(2).add(&x().mul(&tau())).add(&tau());
        let q = p.subst_var(Var::X, &tau());
        assert_eq!(q, tau().pow(2).scale(&rint(2)).add(&tau()));
    }
}
