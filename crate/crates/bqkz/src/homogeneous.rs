//! The homogeneous ground-state vector as exact polynomials in (x, τ).
//!
//! Components are computed by coefficient extraction: each contour integral
//! around the origin picks one coefficient of a finite polynomial (or a
//! truncated series) in the expansion variables. Four independent formulas
//! produce the same table and are cross-checked against each other:
//!
//! - `General`: polynomial integrand in (x, τ), exponents N+1−a.
//! - `TauOne`: the τ = 1 simplification, exponents a.
//! - `Bar`: the second family, labelled by up-spin positions, with a
//!   truncated geometric series factor.
//! - `TauGeneral`: the first family at general τ, whose series factor is
//!   Laurent in τ; the assembled component is asserted to be a genuine
//!   polynomial in τ.
//!
//! Extraction proceeds variable by variable with per-variable degree caps,
//! so intermediate objects stay near the size of the final coefficient.

use crate::exact::{AuxPoly, MPoly, Rational, Var};
use crate::qkz::{n_down, n_up, position_tuples};
use crate::report::Report;
use crate::{Error, Result};
use num::{One, Zero};
use rayon::prelude::*;
use serde_json::json;
use std::collections::BTreeMap;
use std::collections::HashMap;
use std::io::Write;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, OnceLock};

/// Which contour formula to expand.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum Formula {
    General,
    TauOne,
    Bar,
    TauGeneral,
}

impl Formula {
    pub const ALL: [Formula; 4] = [Formula::General, Formula::TauOne, Formula::Bar, Formula::TauGeneral];

    pub fn name(self) -> &'static str {
        match self {
            Formula::General => "general",
            Formula::TauOne => "tau1",
            Formula::Bar => "bar",
            Formula::TauGeneral => "tau-general",
        }
    }

    pub fn from_name(s: &str) -> Option<Formula> {
        Self::ALL.into_iter().find(|f| f.name() == s)
    }

    pub fn is_tau_one(self) -> bool {
        matches!(self, Formula::TauOne)
    }
}

/// Exact component table of |ψ_N⟩, keyed by down-spin position tuples.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentTable {
    pub n_sites: usize,
    /// `None` means τ is symbolic; `Some(1)` tables come from `TauOne`.
    pub tau_one: bool,
    pub components: BTreeMap<Vec<usize>, MPoly>,
}

impl ComponentTable {
    pub fn n(&self) -> usize {
        n_down(self.n_sites)
    }

    pub fn get(&self, positions: &[usize]) -> &MPoly {
        &self.components[positions]
    }

    /// Specialises τ to a rational value (table stays polynomial in x).
    pub fn eval_tau(&self, tau: &Rational) -> ComponentTable {
        let components = self
            .components
            .iter()
            .map(|(k, p)| (k.clone(), p.eval_var(Var::Tau, tau)))
            .collect();
        ComponentTable {
            n_sites: self.n_sites,
            tau_one: tau.is_one(),
            components,
        }
    }

    /// Evaluates every component at rational (x, τ).
    pub fn eval(&self, x: &Rational, tau: &Rational) -> BTreeMap<Vec<usize>, Rational> {
        let vals = [x.clone(), tau.clone(), Rational::zero(), Rational::zero()];
        self.components
            .iter()
            .map(|(k, p)| (k.clone(), p.eval(&vals)))
            .collect()
    }

    /// JSON per the interface schema:
    /// `{"N": 5, "tau": "symbolic", "components": {"1,3": <polynomial>, ...}}`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut comps = serde_json::Map::new();
        for (k, p) in &self.components {
            let key = k.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
            comps.insert(key, serde_json::to_value(p.to_json()).unwrap());
        }
        json!({
            "N": self.n_sites,
            "tau": if self.tau_one { "1" } else { "symbolic" },
            "components": comps,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<ComponentTable> {
        let n_sites = v["N"]
            .as_u64()
            .ok_or_else(|| Error::CacheCorrupt("missing N".into()))? as usize;
        let tau_one = v["tau"] == "1";
        let obj = v["components"]
            .as_object()
            .ok_or_else(|| Error::CacheCorrupt("missing components".into()))?;
        let mut components = BTreeMap::new();
        for (key, pv) in obj {
            let positions: Vec<usize> = if key.is_empty() {
                Vec::new()
            } else {
                key.split(',')
                    .map(|s| s.parse().map_err(|_| Error::CacheCorrupt(format!("bad key {key}"))))
                    .collect::<Result<_>>()?
            };
            let pj: crate::exact::mpoly::PolyJson = serde_json::from_value(pv.clone())?;
            components.insert(positions, MPoly::from_json(&pj)?);
        }
        Ok(ComponentTable { n_sites, tau_one, components })
    }

    /// Long-format CSV: one row per term, columns
    /// `positions,x_exp,tau_exp,num,den`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("positions,x_exp,tau_exp,num,den\n");
        for (k, p) in &self.components {
            let key = k.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
            if p.is_zero() {
                out.push_str(&format!("\"{key}\",0,0,0,1\n"));
                continue;
            }
            for (e, c) in p.terms() {
                out.push_str(&format!(
                    "\"{key}\",{},{},{},{}\n",
                    e[Var::X as usize],
                    e[Var::Tau as usize],
                    c.numer(),
                    c.denom()
                ));
            }
        }
        out
    }
}

fn mp_x() -> MPoly {
    MPoly::var(Var::X)
}

fn mp_tau() -> MPoly {
    MPoly::var(Var::Tau)
}

fn mp_int(n: i64) -> MPoly {
    MPoly::constant(crate::exact::rint(n))
}

fn binom_i64(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    let mut acc = 1i64;
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// u-polynomial in one variable from (exponent, coefficient) pairs.
fn upoly(nvars: usize, var: usize, terms: &[(u16, MPoly)]) -> AuxPoly {
    AuxPoly::from_terms(
        nvars,
        terms.iter().map(|(e, c)| {
            let mut exp = vec![0u16; nvars];
            exp[var] = *e;
            (exp, c.clone())
        }),
    )
}

/// u-polynomial in two variables; exponent pairs are (e_i, e_j).
fn upoly2(nvars: usize, vi: usize, vj: usize, terms: &[(u16, u16, MPoly)]) -> AuxPoly {
    AuxPoly::from_terms(
        nvars,
        terms.iter().map(|(ei, ej, c)| {
            let mut exp = vec![0u16; nvars];
            exp[vi] = *ei;
            exp[vj] = *ej;
            (exp, c.clone())
        }),
    )
}

/// (1 + τu + u²)^p as a single-variable factor.
fn quad_power(nvars: usize, var: usize, p: usize, tau_is_one: bool) -> AuxPoly {
    let tau = if tau_is_one { MPoly::one() } else { mp_tau() };
    let base = upoly(nvars, var, &[(0, MPoly::one()), (1, tau), (2, MPoly::one())]);
    let mut acc = AuxPoly::one(nvars);
    for _ in 0..p {
        acc = acc.mul(&base);
    }
    acc
}

struct Integrand {
    nvars: usize,
    targets: Vec<u16>,
    per_var: Vec<AuxPoly>,
    pairs: Vec<(usize, usize, AuxPoly)>,
    /// power of τ to divide out at the end (may be negative = multiply)
    tau_shift: i64,
}

fn build_homogeneous_integrand(n_sites: usize, formula: Formula, positions: &[usize]) -> Integrand {
    let n = n_down(n_sites);
    let nbar = n_up(n_sites);
    match formula {
        Formula::General | Formula::TauOne => {
            let t1 = formula.is_tau_one();
            let nvars = n;
            let tau = if t1 { MPoly::one() } else { mp_tau() };
            let targets: Vec<u16> = if t1 {
                positions.iter().map(|&a| (a - 1) as u16).collect()
            } else {
                (0..n).map(|k| (n_sites - positions[n - 1 - k]) as u16).collect()
            };
            let mut per_var = Vec::with_capacity(nvars);
            for k in 0..nvars {
                // (u + x) for general, (1 + xu) for τ = 1; quadratic power; diagonal (1 − u²)
                let lin = if t1 {
                    upoly(nvars, k, &[(0, MPoly::one()), (1, mp_x())])
                } else {
                    upoly(nvars, k, &[(0, mp_x()), (1, MPoly::one())])
                };
                let mut f = lin.mul(&quad_power(nvars, k, n_sites - 2 * n, t1));
                f = f.mul(&upoly(nvars, k, &[(0, MPoly::one()), (2, mp_int(-1))]));
                per_var.push(f);
            }
            let mut pairs = Vec::new();
            for i in 0..nvars {
                for j in (i + 1)..nvars {
                    let mut f = upoly2(nvars, i, j, &[(0, 0, MPoly::one()), (1, 1, mp_int(-1))]);
                    f = f.mul(&upoly2(nvars, i, j, &[(0, 1, MPoly::one()), (1, 0, mp_int(-1))]));
                    f = f.mul(&upoly2(
                        nvars,
                        i,
                        j,
                        &[(0, 0, MPoly::one()), (0, 1, tau.clone()), (1, 1, MPoly::one())],
                    ));
                    f = f.mul(&upoly2(
                        nvars,
                        i,
                        j,
                        &[(0, 0, tau.clone()), (1, 0, MPoly::one()), (0, 1, MPoly::one())],
                    ));
                    pairs.push((i, j, f));
                }
            }
            Integrand { nvars, targets, per_var, pairs, tau_shift: 0 }
        }
        Formula::Bar => {
            let nvars = nbar;
            let tau = mp_tau();
            let targets: Vec<u16> = (0..nbar)
                .map(|k| (n_sites - positions[nbar - 1 - k]) as u16)
                .collect();
            let mut per_var = Vec::with_capacity(nvars);
            for k in 0..nvars {
                let mut f = quad_power(nvars, k, n_sites + 1 - 2 * nbar, false);
                f = f.mul(&upoly(nvars, k, &[(0, MPoly::one()), (2, mp_int(-1))]));
                // series of 1/(1 + (τ − x)u): coefficients (x − τ)^m
                let ratio = mp_x().sub(&mp_tau());
                let mut series = Vec::with_capacity(targets[k] as usize + 1);
                let mut cur = MPoly::one();
                series.push((0u16, cur.clone()));
                for m in 1..=targets[k] {
                    cur = cur.mul(&ratio);
                    series.push((m, cur.clone()));
                }
                f = f.mul(&upoly(nvars, k, &series));
                per_var.push(f);
            }
            let mut pairs = Vec::new();
            for i in 0..nvars {
                for j in (i + 1)..nvars {
                    let mut f = upoly2(nvars, i, j, &[(0, 0, MPoly::one()), (1, 1, mp_int(-1))]);
                    f = f.mul(&upoly2(nvars, i, j, &[(0, 1, MPoly::one()), (1, 0, mp_int(-1))]));
                    f = f.mul(&upoly2(
                        nvars,
                        i,
                        j,
                        &[(0, 0, MPoly::one()), (0, 1, tau.clone()), (1, 1, MPoly::one())],
                    ));
                    f = f.mul(&upoly2(
                        nvars,
                        i,
                        j,
                        &[(0, 0, tau.clone()), (1, 0, MPoly::one()), (0, 1, MPoly::one())],
                    ));
                    pairs.push((i, j, f));
                }
            }
            Integrand { nvars, targets, per_var, pairs, tau_shift: 0 }
        }
        Formula::TauGeneral => {
            let nvars = n;
            let tau = mp_tau();
            let tau2 = tau.mul(&tau);
            let targets: Vec<u16> = positions.iter().map(|&a| (a - 1) as u16).collect();
            let mut per_var = Vec::with_capacity(nvars);
            for k in 0..nvars {
                let mut f = upoly(nvars, k, &[(0, MPoly::one()), (1, mp_x())]);
                f = f.mul(&upoly(nvars, k, &[(0, MPoly::one()), (1, tau.clone())]));
                f = f.mul(&upoly(nvars, k, &[(0, tau.clone()), (1, tau2.sub(&mp_int(2)))]));
                f = f.mul(&quad_power(nvars, k, n_sites - 2 * n, false));
                // τ^{e_k}·(τ + (τ²−1)u)^{−N} series, numerator bookkeeping:
                // coefficient of u^m is C(N+m−1, m) (1−τ²)^m τ^{e_k−m}
                let one_minus_tau2 = MPoly::one().sub(&tau2);
                let e_k = targets[k];
                let mut series = Vec::with_capacity(e_k as usize + 1);
                let mut pow = MPoly::one();
                for m in 0..=e_k {
                    if m > 0 {
                        pow = pow.mul(&one_minus_tau2);
                    }
                    let c = binom_i64((n_sites as i64) + (m as i64) - 1, m as i64);
                    let coeff = pow
                        .scale(&crate::exact::rint(c))
                        .mul(&mp_tau().pow((e_k - m) as u32));
                    series.push((m, coeff));
                }
                f = f.mul(&upoly(nvars, k, &series));
                per_var.push(f);
            }
            let mut pairs = Vec::new();
            let tau2m1 = tau2.sub(&MPoly::one());
            let tau_tau2m2 = tau.mul(&tau2.sub(&mp_int(2)));
            for i in 0..nvars {
                for j in (i + 1)..nvars {
                    let mut f = upoly2(nvars, i, j, &[(0, 1, MPoly::one()), (1, 0, mp_int(-1))]);
                    f = f.mul(&upoly2(
                        nvars,
                        i,
                        j,
                        &[
                            (0, 0, MPoly::one()),
                            (1, 0, tau.clone()),
                            (0, 1, tau.clone()),
                            (1, 1, tau2m1.clone()),
                        ],
                    ));
                    f = f.mul(&upoly2(
                        nvars,
                        i,
                        j,
                        &[(0, 0, MPoly::one()), (0, 1, tau.clone()), (1, 1, MPoly::one())],
                    ));
                    f = f.mul(&upoly2(
                        nvars,
                        i,
                        j,
                        &[
                            (0, 0, tau.clone()),
                            (1, 0, tau2m1.clone()),
                            (0, 1, tau2m1.clone()),
                            (1, 1, tau_tau2m2.clone()),
                        ],
                    ));
                    pairs.push((i, j, f));
                }
            }
            // prefactor τ^{N(N−1)/2} and the τ^{−N−e_k} pulled out per variable
            let sum_e: i64 = targets.iter().map(|&e| e as i64).sum();
            let shift = (n as i64) * (n_sites as i64) + sum_e
                - (n_sites as i64) * (n_sites as i64 - 1) / 2;
            Integrand { nvars, targets, per_var, pairs, tau_shift: shift }
        }
    }
}

// --- fast extraction engine -------------------------------------------------
//
// All four integrands have integer coefficients in (x, τ) only, so the hot
// loop runs on i128 coefficients with packed exponents: a u16 key per
// monomial (x-degree high byte, τ-degree low byte) and a u64 key per
// auxiliary-exponent vector (one byte per variable). Checked arithmetic
// guarantees exactness; any overflow falls back to the generic engine.

mod fast {
    use super::Integrand;
    use crate::exact::{rint, MPoly, Var};
    use std::collections::BTreeMap;

    /// Integer polynomial in (x, τ); terms sorted by packed key.
    #[derive(Clone, Debug, PartialEq)]
    pub(super) struct IPoly {
        terms: Vec<(u16, i128)>,
    }

    const fn key(x: u16, tau: u16) -> u16 {
        (x << 8) | tau
    }

    impl IPoly {
        fn zero() -> Self {
            IPoly { terms: Vec::new() }
        }

        fn is_zero(&self) -> bool {
            self.terms.is_empty()
        }

        fn add_in_place(&mut self, other: &IPoly) -> Option<()> {
            // merge two sorted term lists
            let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
            let (mut i, mut j) = (0, 0);
            while i < self.terms.len() && j < other.terms.len() {
                match self.terms[i].0.cmp(&other.terms[j].0) {
                    std::cmp::Ordering::Less => {
                        out.push(self.terms[i]);
                        i += 1;
                    }
                    std::cmp::Ordering::Greater => {
                        out.push(other.terms[j]);
                        j += 1;
                    }
                    std::cmp::Ordering::Equal => {
                        let c = self.terms[i].1.checked_add(other.terms[j].1)?;
                        if c != 0 {
                            out.push((self.terms[i].0, c));
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
            out.extend_from_slice(&self.terms[i..]);
            out.extend_from_slice(&other.terms[j..]);
            self.terms = out;
            Some(())
        }

        fn mul(&self, other: &IPoly) -> Option<IPoly> {
            let mut acc: BTreeMap<u16, i128> = BTreeMap::new();
            for (ka, ca) in &self.terms {
                for (kb, cb) in &other.terms {
                    let k = ka.checked_add(*kb)?;
                    // per-byte overflow guard on the packed key
                    if (ka & 0xff) + (kb & 0xff) > 0xff || (ka >> 8) + (kb >> 8) > 0xff {
                        return None;
                    }
                    let c = ca.checked_mul(*cb)?;
                    let slot = acc.entry(k).or_insert(0);
                    *slot = slot.checked_add(c)?;
                }
            }
            Some(IPoly {
                terms: acc.into_iter().filter(|(_, c)| *c != 0).collect(),
            })
        }

        fn from_mpoly(p: &MPoly) -> Option<IPoly> {
            let mut terms = Vec::with_capacity(p.num_terms());
            for (e, c) in p.terms() {
                if e[Var::Alpha as usize] != 0 || e[Var::T as usize] != 0 {
                    return None;
                }
                let (x, tau) = (e[Var::X as usize], e[Var::Tau as usize]);
                if x > 0xff || tau > 0xff {
                    return None;
                }
                if !c.denom().eq(&num::BigInt::from(1)) {
                    return None;
                }
                let n: i128 = c.numer().try_into().ok()?;
                terms.push((key(x, tau), n));
            }
            terms.sort_by_key(|(k, _)| *k);
            Some(IPoly { terms })
        }

        fn to_mpoly(&self) -> MPoly {
            let mut acc = MPoly::zero();
            for (k, c) in &self.terms {
                let mut e = [0u16; 4];
                e[Var::X as usize] = k >> 8;
                e[Var::Tau as usize] = k & 0xff;
                // i128 into a BigInt-backed rational
                let big = num::BigInt::from(*c);
                acc.add_assign_term(e, &crate::exact::Rational::from_integer(big));
            }
            let _ = rint(0);
            acc
        }
    }

    /// Sparse polynomial in the auxiliary variables with packed exponents.
    pub(super) struct FastAux {
        terms: BTreeMap<u64, IPoly>,
    }

    fn pack(exps: &[u16]) -> Option<u64> {
        let mut k = 0u64;
        for (v, &e) in exps.iter().enumerate() {
            if e > 0xff {
                return None;
            }
            k |= (e as u64) << (8 * v);
        }
        Some(k)
    }

    fn byte(k: u64, v: usize) -> u16 {
        ((k >> (8 * v)) & 0xff) as u16
    }

    fn convert_factor(f: &crate::exact::AuxPoly) -> Option<FastAux> {
        let mut terms = BTreeMap::new();
        for (e, c) in f.terms() {
            terms.insert(pack(e)?, IPoly::from_mpoly(c)?);
        }
        Some(FastAux { terms })
    }

    fn mul_capped(
        work: &FastAux,
        factor: &FastAux,
        caps: &[u16],
        nvars: usize,
    ) -> Option<FastAux> {
        let mut out: BTreeMap<u64, IPoly> = BTreeMap::new();
        for (ka, ca) in &work.terms {
            'inner: for (kb, cb) in &factor.terms {
                // per-byte capped addition
                let mut k = 0u64;
                for v in 0..nvars {
                    let e = byte(*ka, v) + byte(*kb, v);
                    if e > caps[v] {
                        continue 'inner;
                    }
                    k |= (e as u64) << (8 * v);
                }
                let prod = ca.mul(cb)?;
                if prod.is_zero() {
                    continue;
                }
                match out.entry(k) {
                    std::collections::btree_map::Entry::Vacant(slot) => {
                        slot.insert(prod);
                    }
                    std::collections::btree_map::Entry::Occupied(mut slot) => {
                        slot.get_mut().add_in_place(&prod)?;
                        if slot.get().is_zero() {
                            slot.remove();
                        }
                    }
                }
            }
        }
        Some(FastAux { terms: out })
    }

    /// Packed-key mirror of the generic extraction; `None` means "fall back
    /// to exact big-integer arithmetic".
    pub(super) fn extract_fast(ig: &Integrand) -> Option<MPoly> {
        let nvars = ig.nvars;
        if nvars == 0 || nvars > 8 {
            return None;
        }
        let mut order: Vec<usize> = (0..nvars).collect();
        order.sort_by_key(|&k| ig.targets[k]);
        let mut caps: Vec<u16> = ig.targets.clone();
        let per_var: Vec<FastAux> = ig
            .per_var
            .iter()
            .map(convert_factor)
            .collect::<Option<Vec<_>>>()?;
        let pairs: Vec<(usize, usize, FastAux)> = ig
            .pairs
            .iter()
            .map(|(i, j, f)| convert_factor(f).map(|g| (*i, *j, g)))
            .collect::<Option<Vec<_>>>()?;
        let mut included = vec![false; pairs.len()];
        let mut one = BTreeMap::new();
        one.insert(0u64, IPoly { terms: vec![(0, 1)] });
        let mut work = FastAux { terms: one };
        for &k in &order {
            work = mul_capped(&work, &per_var[k], &caps, nvars)?;
            for (pi, (i, j, f)) in pairs.iter().enumerate() {
                if !included[pi] && (*i == k || *j == k) {
                    work = mul_capped(&work, f, &caps, nvars)?;
                    included[pi] = true;
                }
            }
            // keep only the target coefficient of u_k and clear its byte
            let target = ig.targets[k];
            let mut next: BTreeMap<u64, IPoly> = BTreeMap::new();
            for (key64, c) in work.terms {
                if byte(key64, k) == target {
                    next.insert(key64 & !(0xffu64 << (8 * k)), c);
                }
            }
            work = FastAux { terms: next };
            caps[k] = 0;
        }
        let mut acc = IPoly::zero();
        for (key64, c) in &work.terms {
            debug_assert_eq!(*key64, 0);
            acc.add_in_place(c)?;
        }
        Some(acc.to_mpoly())
    }
}

/// Extracts the target coefficient of the integrand, variable by variable in
/// ascending-exponent order, with degree caps on every live variable.
fn extract(ig: &Integrand) -> Result<MPoly> {
    let nvars = ig.nvars;
    if nvars == 0 {
        return Ok(MPoly::one());
    }
    let mut order: Vec<usize> = (0..nvars).collect();
    order.sort_by_key(|&k| ig.targets[k]);
    let mut caps: Vec<Option<u16>> = ig.targets.iter().map(|&e| Some(e)).collect();
    let mut included = vec![false; ig.pairs.len()];
    let mut work = AuxPoly::one(nvars);
    for &k in &order {
        work = work.mul_capped(&ig.per_var[k], &caps);
        for (pi, (i, j, f)) in ig.pairs.iter().enumerate() {
            if !included[pi] && (*i == k || *j == k) {
                work = work.mul_capped(f, &caps);
                included[pi] = true;
            }
        }
        work = work.extract_var(k, ig.targets[k]);
        caps[k] = Some(0);
    }
    let raw = work.into_scalar();
    match ig.tau_shift.cmp(&0) {
        std::cmp::Ordering::Equal => Ok(raw),
        std::cmp::Ordering::Greater => raw.div_var_pow(Var::Tau, ig.tau_shift as u16),
        std::cmp::Ordering::Less => Ok(raw.mul_var_pow(Var::Tau, (-ig.tau_shift) as u16)),
    }
}

/// One component of |ψ_N⟩ by the chosen formula; `positions` are down-spin
/// positions for Ψ-type formulas and up-spin positions for `Bar`.
pub fn component(n_sites: usize, formula: Formula, positions: &[usize]) -> Result<MPoly> {
    if n_sites == 0 {
        return Err(Error::SiteRange(0, "N must be at least 1"));
    }
    let ig = build_homogeneous_integrand(n_sites, formula, positions);
    if let Some(poly) = fast::extract_fast(&ig) {
        return finish_tau_shift(poly, ig.tau_shift);
    }
    extract(&ig)
}

fn finish_tau_shift(raw: MPoly, shift: i64) -> Result<MPoly> {
    match shift.cmp(&0) {
        std::cmp::Ordering::Equal => Ok(raw),
        std::cmp::Ordering::Greater => raw.div_var_pow(Var::Tau, shift as u16),
        std::cmp::Ordering::Less => Ok(raw.mul_var_pow(Var::Tau, (-shift) as u16)),
    }
}

/// Full component table, keyed by down-spin positions (Bar output is
/// translated from up-spin to down-spin labels).
pub fn components(n_sites: usize, formula: Formula) -> Result<ComponentTable> {
    let n = n_down(n_sites);
    let label_len = if formula == Formula::Bar { n_up(n_sites) } else { n };
    let tuples = position_tuples(n_sites, label_len);
    let results: Vec<(Vec<usize>, Result<MPoly>)> = tuples
        .into_par_iter()
        .map(|t| {
            let poly = component(n_sites, formula, &t);
            (t, poly)
        })
        .collect();
    let mut components = BTreeMap::new();
    for (t, poly) in results {
        let poly = poly?;
        let key: Vec<usize> = if formula == Formula::Bar {
            (1..=n_sites).filter(|p| !t.contains(p)).collect()
        } else {
            t
        };
        components.insert(key, poly);
    }
    Ok(ComponentTable {
        n_sites,
        tau_one: formula.is_tau_one(),
        components,
    })
}

type Memo = Mutex<HashMap<(usize, Formula), Arc<ComponentTable>>>;

fn memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cache_dir() -> Option<PathBuf> {
    std::env::var_os("BQKZ_CACHE").map(PathBuf::from)
}

fn fnv1a(data: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in data {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

fn cache_path(dir: &std::path::Path, n_sites: usize, formula: Formula) -> PathBuf {
    dir.join(format!(
        "psi_n{}_{}_v{}.json",
        n_sites,
        formula.name(),
        crate::CACHE_FORMAT
    ))
}

fn load_from_disk(n_sites: usize, formula: Formula) -> Option<ComponentTable> {
    let dir = cache_dir()?;
    let path = cache_path(&dir, n_sites, formula);
    let data = std::fs::read_to_string(path).ok()?;
    let v: serde_json::Value = serde_json::from_str(&data).ok()?;
    let table_str = serde_json::to_string(&v["table"]).ok()?;
    let want = v["checksum"].as_str()?;
    if format!("{:016x}", fnv1a(table_str.as_bytes())) != want {
        // checksum mismatch: treat the entry as absent and recompute
        return None;
    }
    ComponentTable::from_json(&v["table"]).ok()
}

fn store_to_disk(table: &ComponentTable, formula: Formula) {
    let Some(dir) = cache_dir() else { return };
    if std::fs::create_dir_all(&dir).is_err() {
        return;
    }
    let tj = table.to_json();
    let table_str = serde_json::to_string(&tj).unwrap();
    let wrapped = json!({
        "version": crate::CODE_VERSION,
        "format": crate::CACHE_FORMAT,
        "checksum": format!("{:016x}", fnv1a(table_str.as_bytes())),
        "table": tj,
    });
    let path = cache_path(&dir, table.n_sites, formula);
    if let Ok(mut f) = std::fs::File::create(path) {
        let _ = f.write_all(serde_json::to_string(&wrapped).unwrap().as_bytes());
    }
}

/// Cached component table: per-process memo, plus the on-disk cache when
/// `BQKZ_CACHE` is set.
pub fn components_cached(n_sites: usize, formula: Formula) -> Result<Arc<ComponentTable>> {
    if let Some(t) = memo().lock().unwrap().get(&(n_sites, formula)) {
        return Ok(Arc::clone(t));
    }
    let table = if let Some(t) = load_from_disk(n_sites, formula) {
        Arc::new(t)
    } else {
        let t = components(n_sites, formula)?;
        store_to_disk(&t, formula);
        Arc::new(t)
    };
    memo()
        .lock()
        .unwrap()
        .insert((n_sites, formula), Arc::clone(&table));
    Ok(table)
}

/// S_N(x, τ) = Σ over components.
pub fn sum_components(table: &ComponentTable) -> MPoly {
    let mut acc = MPoly::zero();
    for p in table.components.values() {
        acc = acc.add(p);
    }
    acc
}

/// A covector specification for contractions against the table.
pub enum Covector {
    /// One (up, down) pair of rational entries per site.
    PerSite(Vec<[Rational; 2]>),
    /// ⟨ξ(α)| on consecutive pairs, with a leading ⟨↑| for odd N; α stays
    /// symbolic in the result.
    XiAlpha,
}

/// Exact contraction of the covector against |ψ_N⟩. A magnetisation
/// mismatch yields zero.
pub fn contract(table: &ComponentTable, covector: &Covector) -> MPoly {
    let n_sites = table.n_sites;
    let mut acc = MPoly::zero();
    for (positions, poly) in &table.components {
        let weight: MPoly = match covector {
            Covector::PerSite(entries) => {
                assert_eq!(entries.len(), n_sites);
                let mut w = Rational::one();
                for (site, e) in entries.iter().enumerate() {
                    let down = positions.contains(&(site + 1));
                    w *= &e[down as usize];
                    if w.is_zero() {
                        break;
                    }
                }
                MPoly::constant(w)
            }
            Covector::XiAlpha => {
                let start = if n_sites % 2 == 0 {
                    1
                } else if positions.contains(&1) {
                    // leading ⟨↑| kills any state with a down spin at site 1
                    continue;
                } else {
                    2
                };
                let mut alpha_pow = 0u16;
                let mut ok = true;
                let mut site = start;
                while site < n_sites {
                    let d1 = positions.contains(&site);
                    let d2 = positions.contains(&(site + 1));
                    match (d1, d2) {
                        (false, true) => {}
                        (true, false) => alpha_pow += 1,
                        _ => {
                            ok = false;
                            break;
                        }
                    }
                    site += 2;
                }
                if !ok {
                    continue;
                }
                MPoly::var_pow(Var::Alpha, alpha_pow)
            }
        };
        if !weight.is_zero() {
            acc = acc.add(&weight.mul(poly));
        }
    }
    acc
}

/// Parity at τ = 1: componentwise x^n ψ(1/x) matches the reversed labels.
pub fn check_parity_homogeneous(n_sites: usize) -> Result<Report> {
    let mut report = Report::new("parity-homogeneous", "homogeneous-parity", n_sites, 0, 1);
    let table = components_cached(n_sites, Formula::TauOne)?;
    let n = table.n() as u16;
    for (positions, poly) in &table.components {
        let reversed: Vec<usize> = positions.iter().rev().map(|&a| n_sites + 1 - a).collect();
        let lhs = table.get(&reversed);
        let rhs = poly.reverse_in(Var::X, n)?;
        if *lhs != rhs {
            report.fail(json!({ "component": positions }));
            break;
        }
    }
    Ok(report)
}

/// x = 0 reduction: ψ_N(0) equals the spin-reversed ψ_{N−1}(τ) with an
/// appended up spin, and every component with a down spin at site N
/// vanishes at x = 0.
pub fn check_x0_spin_reversal(n_sites: usize) -> Result<Report> {
    let mut report = Report::new("x0-spin-reversal", "x-zero-reduction", n_sites, 0, 1);
    if n_sites < 2 {
        return Ok(report);
    }
    let table = components_cached(n_sites, Formula::General)?;
    let prev = components_cached(n_sites - 1, Formula::General)?;
    let zero = Rational::zero();
    let tau = mp_tau();
    for (positions, poly) in &table.components {
        let at0 = poly.eval_var(Var::X, &zero);
        if positions.contains(&n_sites) {
            if !at0.is_zero() {
                report.fail(json!({ "component": positions, "kind": "should-vanish" }));
                return Ok(report);
            }
            continue;
        }
        // spin reversal on N−1 sites: complement of the down positions
        let complement: Vec<usize> = (1..=n_sites - 1).filter(|p| !positions.contains(p)).collect();
        let expected = prev.get(&complement).subst_var(Var::X, &tau);
        if at0 != expected {
            report.fail(json!({ "component": positions, "kind": "mismatch" }));
            return Ok(report);
        }
    }
    Ok(report)
}

/// Observation check (never an assertion): all coefficients non-negative.
pub fn check_nonnegativity(n_sites: usize, formula: Formula) -> Result<Report> {
    let mut report = Report::new("nonnegativity", "coefficient-nonnegativity", n_sites, 0, 1);
    let table = components_cached(n_sites, formula)?;
    for (positions, poly) in &table.components {
        if !poly.has_nonnegative_coefficients() {
            report.note(format!(
                "negative coefficient observed in component {positions:?}"
            ));
        }
    }
    Ok(report)
}

/// Four-formula agreement at one size.
pub fn check_four_formula_agreement(n_sites: usize) -> Result<Report> {
    let mut report = Report::new("four-formula", "component-formula-agreement", n_sites, 0, 1);
    let general = components_cached(n_sites, Formula::General)?;
    let bar = components_cached(n_sites, Formula::Bar)?;
    let tau_general = components_cached(n_sites, Formula::TauGeneral)?;
    let tau_one = components_cached(n_sites, Formula::TauOne)?;
    if general.components != bar.components {
        report.fail(json!({ "pair": "general-vs-bar" }));
        return Ok(report);
    }
    if general.components != tau_general.components {
        report.fail(json!({ "pair": "general-vs-tau-general" }));
        return Ok(report);
    }
    let one = Rational::one();
    for (k, p) in &general.components {
        if p.eval_var(Var::Tau, &one) != *tau_one.get(k) {
            report.fail(json!({ "pair": "general-at-tau-1-vs-tau1", "component": k }));
            return Ok(report);
        }
    }
    Ok(report)
}

/// Degree bound: deg_x of a component whose first m positions are 1..m is at
/// most n − m; plus integrality of all coefficients.
pub fn check_degree_and_integrality(n_sites: usize, formula: Formula) -> Result<Report> {
    let mut report = Report::new("degree-bound", "x-degree-bound-and-integrality", n_sites, 0, 1);
    let table = components_cached(n_sites, formula)?;
    let n = table.n();
    for (positions, poly) in &table.components {
        let mut m = 0;
        while m < positions.len() && positions[m] == m + 1 {
            m += 1;
        }
        let deg = poly.degree_in(Var::X).unwrap_or(0) as usize;
        if deg > n - m {
            report.fail(json!({ "component": positions, "deg": deg, "bound": n - m }));
            return Ok(report);
        }
        if !poly.has_integer_coefficients() {
            report.fail(json!({ "component": positions, "kind": "non-integer-coefficient" }));
            return Ok(report);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_rational, rint};

    fn poly(s: &str) -> MPoly {
        // tiny parser for test tables: terms like "2*x^2*tau^3" separated by +
        let mut acc = MPoly::zero();
        for term in s.split('+') {
            let term = term.trim();
            let mut coeff = rint(1);
            let mut exps = [0u16; 4];
            for piece in term.split('*') {
                let piece = piece.trim();
                let (name, pow) = match piece.split_once('^') {
                    Some((n, p)) => (n, p.parse::<u16>().unwrap()),
                    None => (piece, 1),
                };
                match Var::from_name(name) {
                    Some(v) => exps[v as usize] += pow,
                    None => coeff *= parse_rational(piece).unwrap(),
                }
            }
            acc = acc.add(&MPoly::monomial(exps, coeff));
        }
        acc
    }

    #[test]
    fn tiny_tables() {
        // ψ₂: (1) ↦ 1, (2) ↦ x, for every formula
        for f in Formula::ALL {
            let t = components(2, f).unwrap();
            assert_eq!(*t.get(&[1]), MPoly::one(), "{:?}", f);
            assert_eq!(*t.get(&[2]), mp_x(), "{:?}", f);
        }
        // ψ₃: (1) ↦ τ, (2) ↦ 1 + xτ, (3) ↦ x
        let t = components(3, Formula::General).unwrap();
        assert_eq!(*t.get(&[1]), mp_tau());
        assert_eq!(*t.get(&[2]), poly("1 + x*tau"));
        assert_eq!(*t.get(&[3]), mp_x());
        // normalization: (ψ_N)_{1..n} = τ^{n̄(n̄−1)/2}
        for n_sites in 2..=6usize {
            let t = components(n_sites, Formula::General).unwrap();
            let n = n_down(n_sites);
            let nbar = n_up(n_sites);
            let first: Vec<usize> = (1..=n).collect();
            assert_eq!(
                *t.get(&first),
                mp_tau().pow((nbar * (nbar - 1) / 2) as u32),
                "N = {n_sites}"
            );
        }
    }

    #[test]
    fn n5_table_matches_published_polynomials() {
        let t = components(5, Formula::General).unwrap();
        let expect = [
            (vec![1, 2], "tau^3"),
            (vec![1, 3], "2*tau^2 + tau^4 + x*tau^3"),
            (vec![1, 4], "2*tau + tau^3 + 2*x*tau^2 + x*tau^4"),
            (vec![1, 5], "2*x*tau + x*tau^3"),
            (vec![2, 3], "tau + tau^3 + 2*x*tau^2 + x^2*tau^3"),
            (vec![2, 4], "1 + 2*tau^2 + 3*x*tau + 2*x*tau^3 + 2*x^2*tau^2 + x^2*tau^4"),
            (vec![2, 5], "x + 2*x*tau^2 + 2*x^2*tau + x^2*tau^3"),
            (vec![3, 4], "tau + x + x*tau^2 + x^2*tau + x^2*tau^3"),
            (vec![3, 5], "x*tau + x^2 + 2*x^2*tau^2"),
            (vec![4, 5], "x^2*tau"),
        ];
        for (positions, s) in expect {
            assert_eq!(*t.get(&positions), poly(s), "component {positions:?}");
        }
        // τ = 1 gives the exact-diagonalisation table
        let t1 = t.eval_tau(&rint(1));
        assert_eq!(*t1.get(&[2, 4]), poly("3 + 5*x + 3*x^2"));
        assert_eq!(*t1.get(&[1, 4]), poly("3 + 3*x"));
        assert_eq!(*t1.get(&[3, 5]), poly("x + 3*x^2"));
    }

    #[test]
    fn four_formulas_agree_small() {
        for n_sites in 1..=6usize {
            let r = check_four_formula_agreement(n_sites).unwrap();
            assert!(r.pass, "N = {n_sites}: {:?}", r.counterexample);
        }
    }

    #[test]
    fn sum_examples() {
        let t = components(2, Formula::General).unwrap();
        assert_eq!(sum_components(&t), poly("1 + x"));
        // S_N(0, τ) = S_{N−1}(τ, τ)
        for n_sites in 2..=6usize {
            let s_n = sum_components(&components(n_sites, Formula::General).unwrap());
            let s_prev = sum_components(&components(n_sites - 1, Formula::General).unwrap());
            let lhs = s_n.eval_var(Var::X, &rint(0));
            let rhs = s_prev.subst_var(Var::X, &mp_tau());
            assert_eq!(lhs, rhs, "N = {n_sites}");
        }
    }

    #[test]
    fn contraction_examples() {
        // N = 1, ⟨↑| → 1
        let t1 = components(1, Formula::General).unwrap();
        let up = Covector::PerSite(vec![[rint(1), rint(0)]]);
        assert_eq!(contract(&t1, &up), MPoly::one());
        // F₂ = α + x
        let t2 = components(2, Formula::TauOne).unwrap();
        assert_eq!(contract(&t2, &Covector::XiAlpha), poly("alpha + x"));
        // F₅ coefficients come from the advertised components
        let t5 = components(5, Formula::TauOne).unwrap();
        let f5 = contract(&t5, &Covector::XiAlpha);
        let c = f5.coeffs_in(Var::Alpha);
        assert_eq!(c[0], *t5.get(&[3, 5]));
        assert_eq!(c[1], t5.get(&[2, 5]).add(t5.get(&[3, 4])));
        assert_eq!(c[2], *t5.get(&[2, 4]));
        // magnetisation mismatch gives zero, not an error
        let dead = Covector::PerSite(vec![[rint(1), rint(0)], [rint(1), rint(0)]]);
        assert!(contract(&t2, &dead).is_zero());
    }

    #[test]
    fn structural_checks_small() {
        for n_sites in 1..=6usize {
            assert!(check_parity_homogeneous(n_sites).unwrap().pass);
            assert!(check_x0_spin_reversal(n_sites).unwrap().pass);
            assert!(check_degree_and_integrality(n_sites, Formula::TauOne).unwrap().pass);
            let r = check_nonnegativity(n_sites, Formula::General).unwrap();
            assert!(r.pass && r.notes.is_empty(), "N = {n_sites}: {:?}", r.notes);
        }
    }

    #[test]
    fn table_json_and_csv_round_trip() {
        let t = components(3, Formula::General).unwrap();
        let j = t.to_json();
        assert_eq!(j["tau"], "symbolic");
        let back = ComponentTable::from_json(&j).unwrap();
        assert_eq!(back, t);
        let csv = t.to_csv();
        assert!(csv.starts_with("positions,x_exp,tau_exp,num,den"));
        assert!(csv.contains("\"2\",1,1,1,1"));
    }
}
