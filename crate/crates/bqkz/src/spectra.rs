//! The open XXZ Hamiltonian, its special eigenpair, numeric ground-state
//! confirmation, and the transfer-matrix links.
//!
//! The Hamiltonian is H = −½ Σ (σˣσˣ + σʸσʸ + Δ σᶻσᶻ) + p σᶻ₁ + p̄ σᶻ_N; for
//! one site the bulk term is absent and H = (p + p̄)σᶻ. At the combinatorial
//! point Δ = −1/2, p = ½(½ − x), p̄ = ½(½ − 1/x). All structural checks are
//! exact; only the ground-state scan diagonalises in double precision.

use crate::exact::linalg::{Matrix, StateVector};
use crate::exact::{bracket, rat, rational_to_f64, rint, Cyc12, Field, Jet, Rational};
use crate::homogeneous::{components_cached, Formula};
use crate::lattice::{
    lambda_eigenvalue, transfer_apply, transfer_matrix, TransferParams,
};
use crate::qkz::{n_down, position_tuples};
use crate::report::Report;
use crate::sampling::Sampler;
use crate::{Error, Result};
use num::Zero;
use serde_json::json;

/// Couplings of the open chain.
#[derive(Clone, Debug)]
pub struct HamiltonianParams<F: Field> {
    pub delta: F,
    pub p: F,
    pub pbar: F,
}

impl HamiltonianParams<Rational> {
    /// Combinatorial point: Δ = −1/2, p = ½(½ − x), p̄ = ½(½ − 1/x).
    pub fn combinatorial(x: &Rational) -> Result<Self> {
        if Zero::is_zero(x) {
            return Err(Error::SingularPoint("x = 0".into()));
        }
        let half = rat(1, 2);
        Ok(HamiltonianParams {
            delta: rat(-1, 2),
            p: half.clone() * (half.clone() - x),
            pbar: half.clone() * (half - x.recip()),
        })
    }
}

impl<F: Field> HamiltonianParams<F> {
    /// General couplings Δ = [q²]/(2[q]), p = [q][β²]/(4[β]²),
    /// p̄ = [q][β̄²]/(4[β̄]²).
    pub fn from_q_boundary(q: &F, beta: &F, betabar: &F) -> Result<Self> {
        let two = F::from_i64(2);
        let four = F::from_i64(4);
        let bq = bracket(q)?;
        let delta = bracket(&q.mul(q))?
            .div(&two.mul(&bq))
            .ok_or(Error::DivisionByZero)?;
        let boundary = |b: &F| -> Result<F> {
            let num = bq.mul(&bracket(&b.mul(b))?);
            let den = four.mul(&bracket(b)?.pow(2).ok_or(Error::DivisionByZero)?);
            num.div(&den).ok_or(Error::DivisionByZero)
        };
        Ok(HamiltonianParams {
            delta,
            p: boundary(beta)?,
            pbar: boundary(betabar)?,
        })
    }
}

/// Ordered basis of the magnetisation sector with `n_down` down spins.
#[derive(Clone, Debug)]
pub struct SectorBasis {
    pub n_sites: usize,
    pub n_down: usize,
    pub tuples: Vec<Vec<usize>>,
}

impl SectorBasis {
    pub fn new(n_sites: usize, n_down: usize) -> Self {
        SectorBasis {
            n_sites,
            n_down,
            tuples: position_tuples(n_sites, n_down),
        }
    }

    /// The ground-state sector with ⌊N/2⌋ down spins.
    pub fn ground(n_sites: usize) -> Self {
        Self::new(n_sites, n_down(n_sites))
    }

    pub fn dim(&self) -> usize {
        self.tuples.len()
    }

    pub fn index_of(&self, tuple: &[usize]) -> Option<usize> {
        self.tuples.iter().position(|t| t == tuple)
    }
}

/// Full 2^N Hamiltonian.
pub fn hamiltonian_full<F: Field>(params: &HamiltonianParams<F>, n_sites: usize) -> Matrix<F> {
    let dim = 1usize << n_sites;
    let half = F::one().div(&F::from_i64(2)).unwrap();
    let mut h = Matrix::<F>::zero(dim);
    for idx in 0..dim {
        let spin = |site: usize| -> i64 {
            if idx & (1 << (n_sites - site)) != 0 {
                -1
            } else {
                1
            }
        };
        let mut diag = F::zero();
        if n_sites > 1 {
            for i in 1..n_sites {
                // −(Δ/2) σᶻᵢσᶻᵢ₊₁
                let zz = F::from_i64(spin(i) * spin(i + 1));
                diag = diag.sub(&half.mul(&params.delta).mul(&zz));
            }
        }
        diag = diag.add(&params.p.mul(&F::from_i64(spin(1))));
        diag = diag.add(&params.pbar.mul(&F::from_i64(spin(n_sites))));
        h[(idx, idx)] = diag;
        // spin exchange: −½(σˣσˣ + σʸσʸ) flips ↑↓ ↔ ↓↑ with weight −1
        for i in 1..n_sites {
            let bi = 1 << (n_sites - i);
            let bj = 1 << (n_sites - i - 1);
            if (idx & bi != 0) != (idx & bj != 0) {
                let flipped = idx ^ bi ^ bj;
                h[(flipped, idx)] = h[(flipped, idx)].sub(&F::one());
            }
        }
    }
    h
}

/// Sector-restricted Hamiltonian in the `SectorBasis` ordering, assembled
/// directly (the full 2^N matrix is never materialised).
pub fn hamiltonian_sector<F: Field>(
    params: &HamiltonianParams<F>,
    basis: &SectorBasis,
) -> Matrix<F> {
    let n_sites = basis.n_sites;
    let dim = basis.dim();
    let index: std::collections::HashMap<usize, usize> = basis
        .tuples
        .iter()
        .enumerate()
        .map(|(k, t)| (StateVector::<F>::basis_index(n_sites, t), k))
        .collect();
    let half = F::one().div(&F::from_i64(2)).unwrap();
    let mut h = Matrix::<F>::zero(dim);
    for (col, tuple) in basis.tuples.iter().enumerate() {
        let idx = StateVector::<F>::basis_index(n_sites, tuple);
        let spin = |site: usize| -> i64 {
            if idx & (1 << (n_sites - site)) != 0 {
                -1
            } else {
                1
            }
        };
        let mut diag = F::zero();
        for i in 1..n_sites {
            let zz = F::from_i64(spin(i) * spin(i + 1));
            diag = diag.sub(&half.mul(&params.delta).mul(&zz));
        }
        diag = diag.add(&params.p.mul(&F::from_i64(spin(1))));
        diag = diag.add(&params.pbar.mul(&F::from_i64(spin(n_sites))));
        h[(col, col)] = diag;
        for i in 1..n_sites {
            let bi = 1 << (n_sites - i);
            let bj = 1 << (n_sites - i - 1);
            if (idx & bi != 0) != (idx & bj != 0) {
                let row = index[&(idx ^ bi ^ bj)];
                h[(row, col)] = h[(row, col)].sub(&F::one());
            }
        }
    }
    h
}

/// Special eigenvalue E₀ = −(3N−1)/4 − (1−x)²/(2x).
pub fn ground_energy(n_sites: usize, x: &Rational) -> Result<Rational> {
    if Zero::is_zero(x) {
        return Err(Error::SingularPoint("x = 0".into()));
    }
    let lin = -rat(3 * n_sites as i64 - 1, 4);
    let one = rint(1);
    let shift = (one.clone() - x) * (one - x) / (rint(2) * x);
    Ok(lin - shift)
}

/// Exact check (H − E₀)ψ_N(x) = 0 in the ground sector at one rational x.
pub fn verify_eigenpair(n_sites: usize, x: &Rational) -> Result<Report> {
    let mut report = Report::new("eigenpair", "special-eigenpair", n_sites, 0, 1);
    if !sector_eigen_residual_zero(n_sites, x, false)? {
        report.fail(json!({ "x": crate::exact::format_rational(x) }));
    }
    Ok(report)
}

/// Harness self-test: a perturbed component must break the eigenpair.
pub fn verify_eigenpair_mutated(n_sites: usize, x: &Rational) -> Result<bool> {
    Ok(!sector_eigen_residual_zero(n_sites, x, true)?)
}

fn sector_eigen_residual_zero(n_sites: usize, x: &Rational, perturb: bool) -> Result<bool> {
    let table = components_cached(n_sites, Formula::TauOne)?;
    let params = HamiltonianParams::combinatorial(x)?;
    let e0 = ground_energy(n_sites, x)?;
    let basis = SectorBasis::ground(n_sites);
    let h = hamiltonian_sector(&params, &basis);
    let vals = table.eval(x, &rint(1));
    let mut psi: Vec<Rational> = basis.tuples.iter().map(|t| vals[t].clone()).collect();
    if perturb {
        psi[0] += rint(1);
    }
    let dim = basis.dim();
    for row in 0..dim {
        let mut acc = crate::exact::rzero();
        for cvol in 0..dim {
            let a = &h[(row, cvol)];
            if !Zero::is_zero(a) && !Zero::is_zero(&psi[cvol]) {
                acc += a * &psi[cvol];
            }
        }
        if acc != &e0 * &psi[row] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Structural side of the Perron-Frobenius argument: for x > 0 and
/// λ = N − 1 + x + 1/x, the matrix λ·1 − H_μ is entrywise non-negative with
/// −H off-diagonals equal to +1, and its exchange graph is connected.
pub fn check_perron_structure(n_sites: usize, x: &Rational) -> Result<Report> {
    let mut report = Report::new("perron-structure", "sector-positivity", n_sites, 0, 1);
    let basis = SectorBasis::ground(n_sites);
    let params = HamiltonianParams::combinatorial(x)?;
    let h = hamiltonian_sector(&params, &basis);
    let lambda = rint(n_sites as i64 - 1) + x + x.recip();
    let dim = basis.dim();
    let mut adjacency = vec![Vec::new(); dim];
    for i in 0..dim {
        for j in 0..dim {
            let entry = h[(i, j)].clone();
            if i == j {
                if lambda.clone() - entry < rint(0) {
                    report.fail(json!({ "kind": "negative-diagonal", "row": i }));
                    return Ok(report);
                }
            } else if !Zero::is_zero(&entry) {
                if entry != rint(-1) {
                    report.fail(json!({ "kind": "off-diagonal-not-minus-one", "row": i, "col": j }));
                    return Ok(report);
                }
                adjacency[i].push(j);
            }
        }
    }
    // connectivity of the exchange graph
    if dim > 0 {
        let mut seen = vec![false; dim];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            report.fail(json!({ "kind": "sector-graph-disconnected" }));
        }
    }
    Ok(report)
}

/// Numeric scan: dense symmetric spectrum of the sector Hamiltonian. For
/// x > 0 asserts that the minimum matches E₀ within tolerance and that the
/// gap is open; for x < 0 only reports whether E₀ is non-minimal.
pub fn numeric_ground_check(n_sites: usize, xs: &[f64], gap_tol: f64) -> Report {
    let mut report = Report::new("ground-numeric", "ground-state-status", n_sites, 0, xs.len());
    let basis = SectorBasis::ground(n_sites);
    let dim = basis.dim();
    for &x in xs {
        let e0 = -(3.0 * n_sites as f64 - 1.0) / 4.0 - (1.0 - x) * (1.0 - x) / (2.0 * x);
        // assemble in f64 directly from the exact rational matrix at a nearby
        // rational x when possible; floats here are part of the contract
        let xr = Rational::from_float(x).unwrap_or_else(|| rat(1, 1));
        let params = match HamiltonianParams::combinatorial(&xr) {
            Ok(p) => p,
            Err(_) => {
                report.fail(json!({ "x": x, "kind": "singular" }));
                continue;
            }
        };
        let hq = hamiltonian_sector(&params, &basis);
        let e0_exact = ground_energy(n_sites, &xr).ok();
        let e0 = e0_exact.map(|r| rational_to_f64(&r)).unwrap_or(e0);
        let mut m = nalgebra::DMatrix::<f64>::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = rational_to_f64(&hq[(i, j)]);
            }
        }
        let eig = m.symmetric_eigen();
        let mut evals: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
        evals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let min = evals[0];
        let gap = if evals.len() > 1 { evals[1] - evals[0] } else { f64::INFINITY };
        if x > 0.0 {
            if (min - e0).abs() > 1e-9 * (1.0 + e0.abs()) {
                report.fail(json!({ "x": x, "kind": "minimum-mismatch", "min": min, "e0": e0 }));
            } else if gap <= gap_tol {
                report.fail(json!({ "x": x, "kind": "gap-closed", "gap": gap, "nearby": &evals[..evals.len().min(4)] }));
            }
        } else {
            // observation only
            let is_min = (min - e0).abs() <= 1e-9 * (1.0 + e0.abs());
            report.note(format!(
                "x = {x}: special eigenvalue {} the sector minimum (min = {min:.9}, E0 = {e0:.9})",
                if is_min { "IS" } else { "is NOT" }
            ));
        }
    }
    report
}

/// Transfer-matrix eigenvalue checks at the special point q = ζ⁴:
/// inhomogeneous with the residue-built vector (N ≤ 4) and homogeneous with
/// the coefficient-extraction table at rational x (N ≤ 8). Λ is also
/// cross-checked against the 0-line trace form and its independence of the
/// inhomogeneities is confirmed.
pub fn verify_transfer_eigen(
    max_inhomogeneous: usize,
    max_homogeneous: usize,
    seed: u64,
    trials: usize,
) -> Result<Report> {
    let mut report = Report::new("transfer", "transfer-eigenvalue", max_homogeneous, seed, trials);
    let q = Cyc12::q();
    // inhomogeneous: Ψ built by residues over the cyclotomic field
    for n_sites in 2..=max_inhomogeneous {
        let mut done = 0;
        let mut attempt = 0;
        while done < trials && attempt < 200 {
            attempt += 1;
            let mut s = Sampler::new(30, seed, n_sites as u64, attempt);
            let beta = Cyc12::from_rat(&s.rational());
            let Ok(params) =
                crate::lattice::ModelParams::special_point(q.clone(), beta, crate::lattice::BetaBarSign::Plus)
            else {
                continue;
            };
            let zs: Vec<Cyc12> = s.distinct_points(n_sites).iter().map(Cyc12::from_rat).collect();
            let z = Cyc12::from_rat(&s.rational());
            let run = || -> Result<bool> {
                let psi = crate::qkz::psi_vector(&zs, &params)?;
                let tp = TransferParams::from_model(&params);
                let lhs = transfer_apply(&z, &zs, &tp, &psi)?;
                let lam = lambda_eigenvalue(&z, &tp)?;
                if lambda_eigenvalue(&z, &tp)? != crate::lattice::lambda_trace_form(&z, &tp)? {
                    return Ok(false);
                }
                Ok(lhs == psi.scale(&lam))
            };
            match run() {
                Ok(true) => done += 1,
                Ok(false) => {
                    report.fail(json!({ "N": n_sites, "kind": "inhomogeneous-mismatch" }));
                    return Ok(report);
                }
                Err(_) => continue,
            }
        }
        if done < trials {
            report.fail(json!({ "N": n_sites, "kind": "no-generic-sample" }));
            return Ok(report);
        }
    }
    // homogeneous: ψ_N at rational x embedded into the cyclotomic field
    let xs = [rint(1), rat(7, 3), rat(2, 5)];
    for n_sites in 1..=max_homogeneous {
        let table = components_cached(n_sites, Formula::TauOne)?;
        for x in &xs {
            let tp = TransferParams::special_from_x(&q, &Cyc12::from_rat(x))?;
            let mut psi = StateVector::<Cyc12>::zero(n_sites);
            for (positions, val) in table.eval(x, &rint(1)) {
                psi.set(&positions, Cyc12::from_rat(&val));
            }
            let mut s = Sampler::new(31, seed, n_sites as u64, 0);
            for _ in 0..2 {
                let z = Cyc12::from_rat(&s.rational());
                let ones = vec![Cyc12::one(); n_sites];
                let (Ok(lhs), Ok(lam)) = (
                    transfer_apply(&z, &ones, &tp, &psi),
                    lambda_eigenvalue(&z, &tp),
                ) else {
                    continue;
                };
                if lhs != psi.scale(&lam) {
                    report.fail(json!({
                        "N": n_sites,
                        "kind": "homogeneous-mismatch",
                        "x": crate::exact::format_rational(x),
                    }));
                    return Ok(report);
                }
            }
        }
    }
    // Λ does not depend on the inhomogeneities or on N
    let mut s = Sampler::new(32, seed, 0, 0);
    let beta = Cyc12::from_rat(&s.rational());
    let params = crate::lattice::ModelParams::special_point(
        q.clone(),
        beta,
        crate::lattice::BetaBarSign::Plus,
    )?;
    let tp = TransferParams::from_model(&params);
    let z = Cyc12::from_rat(&s.rational());
    let lam = lambda_eigenvalue(&z, &tp)?;
    for n_sites in 2..=3usize {
        let zs: Vec<Cyc12> = s.distinct_points(n_sites).iter().map(Cyc12::from_rat).collect();
        let psi = crate::qkz::psi_vector(&zs, &params)?;
        let lhs = transfer_apply(&z, &zs, &tp, &psi)?;
        if lhs != psi.scale(&lam) {
            report.fail(json!({ "kind": "lambda-depends-on-inhomogeneities", "N": n_sites }));
            return Ok(report);
        }
    }
    report.note("transfer eigenvalue matches the trace form and is independent of z_i and N");
    Ok(report)
}

/// Logarithmic-derivative identity t(1)⁻¹t′(1) = −(4/[q])(H − C·1) with
/// C = 3N[q²]/(4[q]) + [q][β²]/(4[β]²) − [q]²[β̄²]/(2[q²][β̄][q/β̄]), built
/// over first-order jets at the special point.
pub fn verify_log_derivative(max_sites: usize, seed: u64) -> Result<Report> {
    let mut report = Report::new("log-derivative", "transfer-log-derivative", max_sites, seed, 1);
    let q = Cyc12::q();
    for n_sites in 1..=max_sites {
        let mut passed = false;
        for attempt in 0..200 {
            let mut s = Sampler::new(33, seed, n_sites as u64, attempt);
            let beta = Cyc12::from_rat(&s.rational());
            let Ok(params) = crate::lattice::ModelParams::special_point(
                q.clone(),
                beta.clone(),
                crate::lattice::BetaBarSign::Plus,
            ) else {
                continue;
            };
            let run = || -> Result<bool> {
                type J = Jet<Cyc12>;
                let jq = J::constant(q.clone());
                let tp = TransferParams::<J> {
                    q: jq.clone(),
                    beta_sq: J::constant(params.beta.mul(&params.beta)),
                    betabar_sq: J::constant(params.betabar.mul(&params.betabar)),
                };
                let z = J::variable(Cyc12::one());
                let ones = vec![J::constant(Cyc12::one()); n_sites];
                let t = transfer_matrix(&z, &ones, &tp)?;
                // split value and derivative parts
                let dim = t.dim();
                let mut tval = Matrix::<Cyc12>::zero(dim);
                let mut tder = Matrix::<Cyc12>::zero(dim);
                for i in 0..dim {
                    for j in 0..dim {
                        tval[(i, j)] = t[(i, j)].val.clone();
                        tder[(i, j)] = t[(i, j)].der.clone();
                    }
                }
                let t1 = tval
                    .as_scalar_multiple_of_identity()
                    .ok_or_else(|| Error::SingularPoint("t(1) not scalar".into()))?;
                let lhs = tder.scale(&t1.inv().ok_or(Error::DivisionByZero)?);
                // right-hand side from the coupling formulas
                let hp = HamiltonianParams::from_q_boundary(&q, &params.beta, &params.betabar)?;
                let h = hamiltonian_full(&hp, n_sites);
                let bq = bracket(&q)?;
                let bq2 = bracket(&q.mul(&q))?;
                let c1 = Cyc12::from_rat(&rat(3 * n_sites as i64, 4))
                    .mul(&bq2)
                    .div(&bq)
                    .ok_or(Error::DivisionByZero)?;
                let c2 = bq
                    .mul(&bracket(&params.beta.mul(&params.beta))?)
                    .div(
                        &Cyc12::from_rat(&rint(4))
                            .mul(&bracket(&params.beta)?.pow(2).ok_or(Error::DivisionByZero)?),
                    )
                    .ok_or(Error::DivisionByZero)?;
                let bb = &params.betabar;
                let c3 = bq
                    .pow(2)
                    .ok_or(Error::DivisionByZero)?
                    .mul(&bracket(&bb.mul(bb))?)
                    .div(
                        &Cyc12::from_rat(&rint(2))
                            .mul(&bq2)
                            .mul(&bracket(bb)?)
                            .mul(&bracket(&q.div(bb).ok_or(Error::DivisionByZero)?)?),
                    )
                    .ok_or(Error::DivisionByZero)?;
                let c = c1.add(&c2).sub(&c3);
                let scale = Cyc12::from_rat(&rint(-4))
                    .div(&bq)
                    .ok_or(Error::DivisionByZero)?;
                let rhs = h.sub(&Matrix::identity(h.dim()).scale(&c)).scale(&scale);
                Ok(lhs == rhs)
            };
            match run() {
                Ok(true) => {
                    passed = true;
                    break;
                }
                Ok(false) => {
                    report.fail(json!({ "N": n_sites }));
                    return Ok(report);
                }
                Err(_) => continue,
            }
        }
        if !passed {
            report.fail(json!({ "N": n_sites, "kind": "no-generic-sample" }));
            return Ok(report);
        }
    }
    // mutation self-test: dropping the C term must break the identity
    let mut s = Sampler::new(34, seed, 0, 0);
    let beta = Cyc12::from_rat(&s.rational());
    if let Ok(params) = crate::lattice::ModelParams::special_point(
        q.clone(),
        beta,
        crate::lattice::BetaBarSign::Plus,
    ) {
        let hp = HamiltonianParams::from_q_boundary(&q, &params.beta, &params.betabar)?;
        let h = hamiltonian_full(&hp, 2);
        // without C the trace of −(4/[q])·H generally differs from t(1)⁻¹t′(1)
        let rhs_no_c = h.scale(
            &Cyc12::from_rat(&rint(-4))
                .div(&bracket(&q)?)
                .ok_or(Error::DivisionByZero)?,
        );
        type J = Jet<Cyc12>;
        let tp = TransferParams::<J> {
            q: J::constant(q.clone()),
            beta_sq: J::constant(params.beta.mul(&params.beta)),
            betabar_sq: J::constant(params.betabar.mul(&params.betabar)),
        };
        let z = J::variable(Cyc12::one());
        let ones = vec![J::constant(Cyc12::one()); 2];
        let t = transfer_matrix(&z, &ones, &tp)?;
        let mut tval = Matrix::<Cyc12>::zero(4);
        let mut tder = Matrix::<Cyc12>::zero(4);
        for i in 0..4 {
            for j in 0..4 {
                tval[(i, j)] = t[(i, j)].val.clone();
                tder[(i, j)] = t[(i, j)].der.clone();
            }
        }
        let t1 = tval.as_scalar_multiple_of_identity().unwrap();
        let lhs = tder.scale(&t1.inv().unwrap());
        if lhs == rhs_no_c {
            report.fail(json!({ "self_test": "dropping C did not break the identity" }));
        } else {
            report.note("mutation self-test (C term dropped) failed as expected");
        }
    }
    Ok(report)
}

/// Eigenpair suite over a list of x values and sizes.
pub fn check_eigenpair_grid(max_sites: usize, xs: &[Rational]) -> Result<Report> {
    let mut report = Report::new("eigenpair", "special-eigenpair", max_sites, 0, xs.len());
    for n_sites in 1..=max_sites {
        for x in xs {
            let sub = verify_eigenpair(n_sites, x)?;
            if !sub.pass {
                report.fail(json!({ "N": n_sites, "x": crate::exact::format_rational(x) }));
                return Ok(report);
            }
        }
    }
    // harness self-test at a small size
    if !verify_eigenpair_mutated(4, &rint(2))? {
        report.fail(json!({ "self_test": "perturbed component still an eigenvector" }));
    } else {
        report.note("mutation self-test (perturbed component) failed as expected");
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_rational;
    use crate::lattice::magnetisation;

    #[test]
    fn hamiltonian_one_site() {
        // x = 1: p = p̄ = −1/4, H = (p+p̄)σᶻ = diag(−1/2, 1/2)
        let params = HamiltonianParams::combinatorial(&rint(1)).unwrap();
        let h = hamiltonian_full(&params, 1);
        assert_eq!(h[(0, 0)], rat(-1, 2));
        assert_eq!(h[(1, 1)], rat(1, 2));
        assert_eq!(h[(0, 1)], rint(0));
        // consistent with E₀ at N = 1: ψ₁ = |↑⟩
        assert_eq!(ground_energy(1, &rint(1)).unwrap(), rat(-1, 2));
    }

    #[test]
    fn ground_energy_values_and_symmetry() {
        assert_eq!(ground_energy(2, &rint(1)).unwrap(), rat(-5, 4));
        assert_eq!(ground_energy(5, &rint(2)).unwrap(), rat(-15, 4));
        for x in [rat(3, 7), rint(5), rat(9, 2)] {
            assert_eq!(
                ground_energy(6, &x).unwrap(),
                ground_energy(6, &x.recip()).unwrap()
            );
        }
        assert!(ground_energy(3, &rint(0)).is_err());
    }

    #[test]
    fn hamiltonian_commutes_with_magnetisation() {
        for n_sites in 1..=5usize {
            let params = HamiltonianParams::combinatorial(&rat(7, 3)).unwrap();
            let h = hamiltonian_full(&params, n_sites);
            let m = magnetisation::<Rational>(n_sites);
            assert!(h.commutator(&m).is_zero(), "N = {n_sites}");
        }
        assert_eq!(SectorBasis::ground(5).dim(), 10);
    }

    #[test]
    fn eigenpair_small_sizes() {
        for n_sites in 1..=6usize {
            for x in [rint(1), parse_rational("7/3").unwrap(), rat(1, 5)] {
                let r = verify_eigenpair(n_sites, &x).unwrap();
                assert!(r.pass, "N = {n_sites}, x = {x}");
            }
        }
        assert!(verify_eigenpair_mutated(4, &rint(2)).unwrap());
    }

    #[test]
    fn perron_structure_small() {
        for n_sites in 2..=6usize {
            let r = check_perron_structure(n_sites, &rat(2, 3)).unwrap();
            assert!(r.pass, "N = {n_sites}: {:?}", r.counterexample);
        }
    }

    #[test]
    fn numeric_ground_small() {
        let r = numeric_ground_check(6, &[1.0, 0.5, 2.0], 1e-9);
        assert!(r.pass, "{:?}", r.counterexample);
        // x < 0 is observation only; the report must stay green
        let r = numeric_ground_check(4, &[-2.0], 1e-9);
        assert!(r.pass);
        assert!(!r.notes.is_empty());
    }

    #[test]
    fn transfer_eigen_small() {
        let r = verify_transfer_eigen(3, 4, 17, 2).unwrap();
        assert!(r.pass, "{:?}", r.counterexample);
    }

    #[test]
    fn log_derivative_small() {
        let r = verify_log_derivative(3, 23).unwrap();
        assert!(r.pass, "{:?}", r.counterexample);
    }
}
