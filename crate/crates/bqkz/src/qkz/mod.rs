//! Pointwise evaluation of the contour-integral vectors by iterated
//! residues.
//!
//! A component is a multiple contour integral of a product of bracket
//! factors. For each integration variable the admissible poles sit at the
//! spectral points z_j; every other singularity is kept outside the contour.
//! Which z_j actually are poles is derived from the factor list itself: a
//! candidate is a pole exactly when its vanishing bracket has net exponent
//! −1 after cancelling identical numerator and denominator factors. The
//! cancellations are what implement both the "do not surround" exclusions
//! and the effective injectivity of pole assignments.

pub mod suites;

use crate::exact::linalg::StateVector;
use crate::exact::{bracket, Field};
use crate::lattice::ModelParams;
use crate::{Error, Result};

/// Which of the two contour-integral families to evaluate.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Variant {
    /// Components labelled by down-spin positions a₁ < … < a_n, n = ⌊N/2⌋.
    Psi,
    /// Components labelled by up-spin positions b₁ < … < b_n̄, n̄ = ⌈N/2⌉.
    PsiBar,
}

/// One atomic bracket factor [coef · w^pow] or [coef · w_a^{pow_a} w_b^{pow_b}],
/// raised to an integer exponent.
#[derive(Clone, Debug)]
enum Fac<F: Field> {
    Single { coef: F, pow: i8, var: usize, exp: i32 },
    Pair { coef: F, var_a: usize, pow_a: i8, var_b: usize, pow_b: i8, exp: i32 },
}

impl<F: Field> Fac<F> {
    fn involves(&self, var: usize) -> bool {
        match self {
            Fac::Single { var: v, .. } => *v == var,
            Fac::Pair { var_a, var_b, .. } => *var_a == var || *var_b == var,
        }
    }
}

/// Number of down spins of the Ψ labelling.
pub fn n_down(n_sites: usize) -> usize {
    n_sites / 2
}

/// Number of up spins of the Ψ̄ labelling.
pub fn n_up(n_sites: usize) -> usize {
    n_sites.div_ceil(2)
}

fn check_positions(n_sites: usize, len: usize, positions: &[usize]) -> Result<()> {
    if positions.len() != len {
        return Err(Error::SiteRange(positions.len(), "position tuple has wrong length"));
    }
    for (k, &p) in positions.iter().enumerate() {
        if p < 1 || p > n_sites || (k > 0 && positions[k - 1] >= p) {
            return Err(Error::SiteRange(p, "positions must be strictly increasing in 1..=N"));
        }
    }
    Ok(())
}

/// All strictly increasing tuples of length `len` in 1..=n.
pub fn position_tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(start: usize, n: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let remaining = len - cur.len();
        for p in start..=n + 1 - remaining {
            cur.push(p);
            rec(p + 1, n, len, cur, out);
            cur.pop();
        }
    }
    rec(1, n, len, &mut cur, &mut out);
    out
}

/// Builds the scalar prefactor and factor list of one component integral.
fn build_integrand<F: Field>(
    variant: Variant,
    positions: &[usize],
    zs: &[F],
    params: &ModelParams<F>,
) -> Result<(F, Vec<Fac<F>>)> {
    let n_sites = zs.len();
    let q = &params.q;
    let beta = &params.beta;
    let nvars = positions.len();
    let mut scalar;
    let mut facs: Vec<Fac<F>> = Vec::new();
    match variant {
        Variant::Psi => {
            // (−[q])^n ∏_{i<j} [q z_j/z_i][q² z_i z_j]
            scalar = bracket(q)?.neg().pow(nvars as i64).ok_or(Error::DivisionByZero)?;
            for i in 0..n_sites {
                for j in (i + 1)..n_sites {
                    let f1 = bracket(&q.mul(&zs[j]).div(&zs[i]).ok_or(Error::DivisionByZero)?)?;
                    let f2 = bracket(&q.mul(q).mul(&zs[i]).mul(&zs[j]))?;
                    scalar = scalar.mul(&f1).mul(&f2);
                }
            }
            if scalar.is_zero() {
                return Err(Error::PoleCollision("vanishing prefactor".into()));
            }
            for (i, &ai) in positions.iter().enumerate() {
                for (j, zj) in zs.iter().enumerate().take(ai) {
                    let _ = j;
                    facs.push(Fac::Single { coef: zj.clone(), pow: -1, var: i, exp: -1 });
                }
                for zj in zs.iter().take(n_sites).skip(ai - 1) {
                    facs.push(Fac::Single { coef: q.mul(zj), pow: -1, var: i, exp: -1 });
                }
                for zj in zs.iter() {
                    facs.push(Fac::Single { coef: q.mul(q).mul(zj), pow: 1, var: i, exp: -1 });
                }
                facs.push(Fac::Single { coef: beta.clone(), pow: 1, var: i, exp: 1 });
                // diagonal [q² w_i²]
                facs.push(Fac::Single { coef: q.mul(q), pow: 2, var: i, exp: 1 });
            }
            for i in 0..nvars {
                for j in (i + 1)..nvars {
                    facs.push(Fac::Pair { coef: q.clone(), var_a: j, pow_a: 1, var_b: i, pow_b: -1, exp: 1 });
                    facs.push(Fac::Pair { coef: F::one(), var_a: i, pow_a: 1, var_b: j, pow_b: -1, exp: 1 });
                    facs.push(Fac::Pair { coef: q.clone(), var_a: i, pow_a: 1, var_b: j, pow_b: 1, exp: 1 });
                    facs.push(Fac::Pair { coef: q.mul(q), var_a: i, pow_a: 1, var_b: j, pow_b: 1, exp: 1 });
                }
            }
        }
        Variant::PsiBar => {
            // [q]^n̄ ∏_{i<j} [q z_j/z_i][q z_i z_j] ∏_i [β z_i]
            scalar = bracket(q)?.pow(nvars as i64).ok_or(Error::DivisionByZero)?;
            for i in 0..n_sites {
                for j in (i + 1)..n_sites {
                    let f1 = bracket(&q.mul(&zs[j]).div(&zs[i]).ok_or(Error::DivisionByZero)?)?;
                    let f2 = bracket(&q.mul(&zs[i]).mul(&zs[j]))?;
                    scalar = scalar.mul(&f1).mul(&f2);
                }
            }
            for z in zs.iter() {
                scalar = scalar.mul(&bracket(&beta.mul(z))?);
            }
            if scalar.is_zero() {
                return Err(Error::PoleCollision("vanishing prefactor".into()));
            }
            for (i, &bi) in positions.iter().enumerate() {
                for zj in zs.iter().take(bi) {
                    let coef = q.div(zj).ok_or(Error::DivisionByZero)?;
                    facs.push(Fac::Single { coef, pow: 1, var: i, exp: -1 });
                }
                for zj in zs.iter().take(n_sites).skip(bi - 1) {
                    let coef = zj.inv().ok_or(Error::DivisionByZero)?;
                    facs.push(Fac::Single { coef, pow: 1, var: i, exp: -1 });
                }
                for zj in zs.iter() {
                    facs.push(Fac::Single { coef: q.mul(zj), pow: 1, var: i, exp: -1 });
                }
                facs.push(Fac::Single { coef: beta.clone(), pow: 1, var: i, exp: -1 });
                // diagonal [q w_i²]
                facs.push(Fac::Single { coef: q.clone(), pow: 2, var: i, exp: 1 });
            }
            for i in 0..nvars {
                for j in (i + 1)..nvars {
                    facs.push(Fac::Pair { coef: q.clone(), var_a: j, pow_a: 1, var_b: i, pow_b: -1, exp: 1 });
                    facs.push(Fac::Pair { coef: F::one(), var_a: i, pow_a: 1, var_b: j, pow_b: -1, exp: 1 });
                    facs.push(Fac::Pair { coef: q.mul(q), var_a: i, pow_a: 1, var_b: j, pow_b: 1, exp: 1 });
                    facs.push(Fac::Pair { coef: q.clone(), var_a: i, pow_a: 1, var_b: j, pow_b: 1, exp: 1 });
                }
            }
        }
    }
    Ok((scalar, facs))
}

/// Bracket value of [coef·w^pow] at a point.
fn single_value<F: Field>(coef: &F, pow: i8, at: &F) -> Result<F> {
    let m = coef.mul(&at.pow(pow as i64).ok_or(Error::DivisionByZero)?);
    bracket(&m)
}

/// Evaluates the iterated residues over the variables in `order`.
fn eval_residues<F: Field>(facs: Vec<Fac<F>>, order: &[usize], zs: &[F]) -> Result<F> {
    if order.is_empty() {
        debug_assert!(facs.is_empty());
        return Ok(F::one());
    }
    let var = order[0];
    let rest_order = &order[1..];
    let mut total = F::zero();
    for zj in zs.iter() {
        // classify factors at w_var = zj
        let mut others: Vec<Fac<F>> = Vec::with_capacity(facs.len());
        // vanishing keyed by (coef, pow): (coef, pow, net exp)
        let mut vanishing: Vec<(F, i8, i32)> = Vec::new();
        let mut local = F::one();
        for f in facs.iter() {
            if !f.involves(var) {
                others.push(f.clone());
                continue;
            }
            match f {
                Fac::Single { coef, pow, exp, .. } => {
                    let val = single_value(coef, *pow, zj)?;
                    if val.is_zero() {
                        if let Some(entry) = vanishing
                            .iter_mut()
                            .find(|(c, p, _)| c == coef && p == pow)
                        {
                            entry.2 += exp;
                        } else {
                            vanishing.push((coef.clone(), *pow, *exp));
                        }
                    } else if *exp >= 0 {
                        local = local.mul(&val.pow(*exp as i64).ok_or(Error::DivisionByZero)?);
                    } else {
                        let inv = val.inv().ok_or(Error::DivisionByZero)?;
                        local = local.mul(&inv.pow((-exp) as i64).ok_or(Error::DivisionByZero)?);
                    }
                }
                Fac::Pair { coef, var_a, pow_a, var_b, pow_b, exp } => {
                    // substitute w_var = zj, leave the partner symbolic
                    let (other_var, other_pow, this_pow) = if *var_a == var {
                        (*var_b, *pow_b, *pow_a)
                    } else {
                        (*var_a, *pow_a, *pow_b)
                    };
                    let coef2 = coef.mul(&zj.pow(this_pow as i64).ok_or(Error::DivisionByZero)?);
                    others.push(Fac::Single { coef: coef2, pow: other_pow, var: other_var, exp: *exp });
                }
            }
        }
        // merge vanishing keys: all must share the same zero locus at zj
        let net: i32 = vanishing.iter().map(|(_, _, e)| e).sum();
        if vanishing.len() > 1 && net < 0 {
            return Err(Error::PoleCollision(format!(
                "{} distinct factors vanish at the same point",
                vanishing.len()
            )));
        }
        match net.cmp(&0) {
            std::cmp::Ordering::Greater => {
                // numerator zero: no contribution
                continue;
            }
            std::cmp::Ordering::Equal => {
                if vanishing.is_empty() {
                    // no factor vanishes: zj is not a pole
                    continue;
                }
                // exact cancellation: finite value, no pole
                continue;
            }
            std::cmp::Ordering::Less => {
                if net < -1 {
                    return Err(Error::PoleCollision("higher-order pole".into()));
                }
            }
        }
        let (coef, pow, _) = vanishing.pop().expect("one vanishing key");
        // residue of the measure dw/(πi w): 2 G(zj) / (zj v'(zj))
        let p = F::from_i64(pow as i64);
        let wpm1 = zj.pow(pow as i64 - 1).ok_or(Error::DivisionByZero)?;
        let wmp1 = zj.pow(-(pow as i64) - 1).ok_or(Error::DivisionByZero)?;
        let ci = coef.inv().ok_or(Error::DivisionByZero)?;
        let vprime = p.mul(&coef.mul(&wpm1).add(&ci.mul(&wmp1)));
        let denom = zj.mul(&vprime);
        let meas = F::from_i64(2).div(&denom).ok_or(Error::DivisionByZero)?;
        let sub = eval_residues(others, rest_order, zs)?;
        total = total.add(&local.mul(&meas).mul(&sub));
    }
    Ok(total)
}

/// Evaluates one component of |Ψ_N⟩ or |Ψ̄_N⟩ at exact spectral points.
pub fn eval_component<F: Field>(
    variant: Variant,
    positions: &[usize],
    zs: &[F],
    params: &ModelParams<F>,
) -> Result<F> {
    let order: Vec<usize> = (0..positions.len()).collect();
    eval_component_ordered(variant, positions, zs, params, &order)
}

/// Same, with an explicit residue-evaluation order over the integration
/// variables (the result is order-independent, which the suites verify).
pub fn eval_component_ordered<F: Field>(
    variant: Variant,
    positions: &[usize],
    zs: &[F],
    params: &ModelParams<F>,
    order: &[usize],
) -> Result<F> {
    let n_sites = zs.len();
    if n_sites == 1 {
        // |Ψ₁⟩ = |Ψ̄₁⟩ = |↑⟩
        return match variant {
            Variant::Psi => {
                check_positions(1, 0, positions)?;
                Ok(F::one())
            }
            Variant::PsiBar => {
                check_positions(1, 1, positions)?;
                Ok(F::one())
            }
        };
    }
    let len = match variant {
        Variant::Psi => n_down(n_sites),
        Variant::PsiBar => n_up(n_sites),
    };
    check_positions(n_sites, len, positions)?;
    let (scalar, facs) = build_integrand(variant, positions, zs, params)?;
    let val = eval_residues(facs, order, zs)?;
    Ok(scalar.mul(&val))
}

/// Harness self-test helper: the Ψ̄ integrand with the [βw] factor moved to
/// the numerator. This is a deliberate defect; the suites assert it changes
/// the value.
pub(crate) fn eval_component_bar_mutated<F: Field>(
    positions: &[usize],
    zs: &[F],
    params: &ModelParams<F>,
) -> Result<F> {
    let (scalar, mut facs) = build_integrand(Variant::PsiBar, positions, zs, params)?;
    for f in facs.iter_mut() {
        if let Fac::Single { coef, pow: 1, exp, .. } = f {
            if *coef == params.beta && *exp == -1 {
                *exp = 1;
            }
        }
    }
    let order: Vec<usize> = (0..positions.len()).collect();
    let val = eval_residues(facs, &order, zs)?;
    Ok(scalar.mul(&val))
}

/// Full vector |Ψ_N⟩ as a state vector over the 2^N basis.
pub fn psi_vector<F: Field>(zs: &[F], params: &ModelParams<F>) -> Result<StateVector<F>> {
    let n_sites = zs.len();
    let mut out = StateVector::<F>::zero(n_sites);
    for positions in position_tuples(n_sites, n_down(n_sites)) {
        let val = eval_component(Variant::Psi, &positions, zs, params)?;
        out.set(&positions, val);
    }
    Ok(out)
}

/// Full vector |Ψ̄_N⟩, translated to the same (down-spin indexed) basis.
pub fn psibar_vector<F: Field>(zs: &[F], params: &ModelParams<F>) -> Result<StateVector<F>> {
    let n_sites = zs.len();
    let mut out = StateVector::<F>::zero(n_sites);
    for ups in position_tuples(n_sites, n_up(n_sites)) {
        let val = eval_component(Variant::PsiBar, &ups, zs, params)?;
        let downs: Vec<usize> = (1..=n_sites).filter(|p| !ups.contains(p)).collect();
        out.set(&downs, val);
    }
    Ok(out)
}

/// Closed product form of the component at positions (1, …, n):
/// ∏ᵢ[βzᵢ] ∏_{i<j≤n}[qzᵢzⱼ][qzⱼ/zᵢ] ∏_{n<i<j≤N}[qzⱼ/zᵢ][q²zᵢzⱼ].
pub fn special_component_closed<F: Field>(zs: &[F], params: &ModelParams<F>) -> Result<F> {
    let n_sites = zs.len();
    let n = n_down(n_sites);
    let q = &params.q;
    let mut acc = F::one();
    for zi in zs.iter().take(n) {
        acc = acc.mul(&bracket(&params.beta.mul(zi))?);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            acc = acc.mul(&bracket(&q.mul(&zs[i]).mul(&zs[j]))?);
            acc = acc.mul(&bracket(&q.mul(&zs[j]).div(&zs[i]).ok_or(Error::DivisionByZero)?)?);
        }
    }
    for i in n..n_sites {
        for j in (i + 1)..n_sites {
            acc = acc.mul(&bracket(&q.mul(&zs[j]).div(&zs[i]).ok_or(Error::DivisionByZero)?)?);
            acc = acc.mul(&bracket(&q.mul(q).mul(&zs[i]).mul(&zs[j]))?);
        }
    }
    Ok(acc)
}

/// Closed product form of the reversed component at positions (n̄+1, …, N):
/// (−1)^{(N+1)n} ∏_{i>n̄}[qβzᵢ] ∏_{i<j≤n̄}[qzⱼ/zᵢ][qzᵢzⱼ] ∏_{n̄<i<j}[qzⱼ/zᵢ][q²zᵢzⱼ].
pub fn special_component_reversed<F: Field>(zs: &[F], params: &ModelParams<F>) -> Result<F> {
    let n_sites = zs.len();
    let n = n_down(n_sites);
    let nbar = n_up(n_sites);
    let q = &params.q;
    let mut acc = if ((n_sites + 1) * n) % 2 == 1 {
        F::one().neg()
    } else {
        F::one()
    };
    for zi in zs.iter().take(n_sites).skip(nbar) {
        acc = acc.mul(&bracket(&q.mul(&params.beta).mul(zi))?);
    }
    for i in 0..nbar {
        for j in (i + 1)..nbar {
            acc = acc.mul(&bracket(&q.mul(&zs[j]).div(&zs[i]).ok_or(Error::DivisionByZero)?)?);
            acc = acc.mul(&bracket(&q.mul(&zs[i]).mul(&zs[j]))?);
        }
    }
    for i in nbar..n_sites {
        for j in (i + 1)..n_sites {
            acc = acc.mul(&bracket(&q.mul(&zs[j]).div(&zs[i]).ok_or(Error::DivisionByZero)?)?);
            acc = acc.mul(&bracket(&q.mul(q).mul(&zs[i]).mul(&zs[j]))?);
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{bracket, Rational};
    use crate::lattice::BetaBarSign;
    use crate::sampling::Sampler;

    fn params_and_points(
        sampler: &mut Sampler,
        n_sites: usize,
    ) -> Option<(ModelParams<Rational>, Vec<Rational>)> {
        let v = sampler.rational();
        let beta = sampler.rational();
        let params = ModelParams::generic(v, beta, BetaBarSign::Plus).ok()?;
        let zs = sampler.distinct_points(n_sites);
        Some((params, zs))
    }

    #[test]
    fn n2_components_match_closed_forms() {
        let mut s = Sampler::new(200, 1, 0, 0);
        let mut done = 0;
        while done < 10 {
            let Some((params, zs)) = params_and_points(&mut s, 2) else { continue };
            let run = || -> Result<()> {
                // (Ψ₂)₁ = [βz₁]
                let c1 = eval_component(Variant::Psi, &[1], &zs, &params)?;
                assert_eq!(c1, bracket(&params.beta.mul(&zs[0]))?);
                // (Ψ₂)₂ = −[qβz₂]
                let c2 = eval_component(Variant::Psi, &[2], &zs, &params)?;
                assert_eq!(c2, bracket(&params.q.mul(&params.beta).mul(&zs[1]))?.neg());
                Ok(())
            };
            if run().is_ok() {
                done += 1;
            }
        }
    }

    #[test]
    fn special_components_match_residues_up_to_n6() {
        let mut s = Sampler::new(201, 1, 0, 0);
        for n_sites in 2..=6usize {
            let mut done = 0;
            let mut attempt = 0;
            while done < 3 && attempt < 60 {
                attempt += 1;
                let mut s2 = Sampler::new(201, 7, n_sites as u64, attempt);
                let Some((params, zs)) = params_and_points(&mut s2, n_sites) else { continue };
                let n = n_down(n_sites);
                let nbar = n_up(n_sites);
                let first: Vec<usize> = (1..=n).collect();
                let last: Vec<usize> = (nbar + 1..=n_sites).collect();
                let run = || -> Result<()> {
                    let lhs = eval_component(Variant::Psi, &first, &zs, &params)?;
                    assert_eq!(lhs, special_component_closed(&zs, &params)?);
                    let lhs = eval_component(Variant::Psi, &last, &zs, &params)?;
                    assert_eq!(lhs, special_component_reversed(&zs, &params)?);
                    // Ψ̄ agrees on both special components
                    let ups: Vec<usize> = (n + 1..=n_sites).collect();
                    let rhs = eval_component(Variant::PsiBar, &ups, &zs, &params)?;
                    assert_eq!(rhs, special_component_closed(&zs, &params)?);
                    Ok(())
                };
                if run().is_ok() {
                    done += 1;
                }
            }
            assert!(done >= 3, "not enough generic samples at N = {n_sites}");
        }
        let _ = s.rational();
    }

    #[test]
    fn residue_order_independence() {
        let mut done = 0;
        let mut attempt = 0;
        while done < 3 && attempt < 50 {
            attempt += 1;
            let mut s = Sampler::new(202, 3, 0, attempt);
            let Some((params, zs)) = params_and_points(&mut s, 4) else { continue };
            let run = || -> Result<()> {
                for positions in position_tuples(4, 2) {
                    let a = eval_component_ordered(Variant::Psi, &positions, &zs, &params, &[0, 1])?;
                    let b = eval_component_ordered(Variant::Psi, &positions, &zs, &params, &[1, 0])?;
                    assert_eq!(a, b);
                }
                Ok(())
            };
            if run().is_ok() {
                done += 1;
            }
        }
        assert!(done >= 3);
    }

    #[test]
    fn n1_convention() {
        let mut s = Sampler::new(203, 1, 0, 0);
        let (params, _) = params_and_points(&mut s, 2).unwrap();
        let zs = [s.rational()];
        assert_eq!(eval_component(Variant::Psi, &[], &zs, &params).unwrap(), Rational::one());
        assert_eq!(
            eval_component(Variant::PsiBar, &[1], &zs, &params).unwrap(),
            Rational::one()
        );
    }

    #[test]
    fn position_tuple_enumeration() {
        assert_eq!(position_tuples(4, 2).len(), 6);
        assert_eq!(position_tuples(5, 0), vec![Vec::<usize>::new()]);
        assert_eq!(position_tuples(3, 3), vec![vec![1, 2, 3]]);
    }
}
