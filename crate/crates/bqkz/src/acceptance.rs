//! The acceptance matrix: one callable per criterion, shared by the
//! `acceptance` integration-test target and by `check --suite all`.
//!
//! Every criterion is exact (the numeric spectrum scan carries its stated
//! 1e−9 tolerances) and runs with pinned seeds, sizes and x-grids.

use crate::combinatorics;
use crate::exact::{parse_rational, rat, rint, MPoly, Rational, Var};
use crate::homogeneous::{self, Formula};
use crate::lattice::{self, BetaBarSign, ModelParams, TransferParams};
use crate::qkz::suites;
use crate::report::Report;
use crate::sampling::Sampler;
use crate::spectra;
use crate::tsasm;
use crate::exact::Cyc12;
use crate::exact::Field;
use crate::Result;
use num::BigInt;
use serde_json::json;

const SEED: u64 = 0xB0A7;

/// Identifier and human label of each acceptance criterion.
pub const CRITERIA: [(usize, &str); 13] = [
    (1, "ground-state table at five sites"),
    (2, "exact eigenpair up to twelve sites"),
    (3, "numeric ground-state status"),
    (4, "scalar-product determinant vs contraction"),
    (5, "general-tau determinants and f-recurrence"),
    (6, "supersymmetric-point identities"),
    (7, "overlap factorisation conjecture"),
    (8, "exchange, reflection, qKZ shift and parity"),
    (9, "transfer-matrix identities"),
    (10, "Laurent degrees and braid limits"),
    (11, "TSASM counts, generating functions, shift"),
    (12, "component sum rule vs TSASM enumeration"),
    (13, "four-formula agreement, degrees, reductions"),
];

fn seed_poly(s: &str) -> MPoly {
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

/// Criterion 1: the five-site table, both at symbolic τ and at τ = 1.
pub fn c01_ground_state_n5() -> Result<Report> {
    let mut report = Report::new("acceptance-01", "five-site-ground-state", 5, 0, 1);
    let table = homogeneous::components_cached(5, Formula::General)?;
    let expected = [
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
    for (positions, s) in &expected {
        if table.get(positions) != &seed_poly(s) {
            report.fail(json!({ "component": positions, "tau": "symbolic" }));
            return Ok(report);
        }
    }
    let tau_one = [
        (vec![1, 2], "1"),
        (vec![1, 3], "3 + x"),
        (vec![1, 4], "3 + 3*x"),
        (vec![1, 5], "3*x"),
        (vec![2, 3], "2 + 2*x + x^2"),
        (vec![2, 4], "3 + 5*x + 3*x^2"),
        (vec![2, 5], "3*x + 3*x^2"),
        (vec![3, 4], "1 + 2*x + 2*x^2"),
        (vec![3, 5], "x + 3*x^2"),
        (vec![4, 5], "x^2"),
    ];
    let at_one = table.eval_tau(&rint(1));
    for (positions, s) in &tau_one {
        if at_one.get(positions) != &seed_poly(s) {
            report.fail(json!({ "component": positions, "tau": "1" }));
            return Ok(report);
        }
    }
    Ok(report)
}

/// Criterion 2: (H − E₀)ψ_N = 0 exactly for N ≤ 12 on the pinned x-grid.
pub fn c02_eigenpair() -> Result<Report> {
    let xs = [
        rint(1),
        rint(2),
        parse_rational("7/3")?,
        rat(1, 5),
        rint(10),
    ];
    spectra::check_eigenpair_grid(12, &xs)
}

/// Criterion 3: numeric sector spectrum for N ≤ 12 on the float grid.
pub fn c03_numeric_ground() -> Result<Report> {
    let mut report = Report::new("acceptance-03", "ground-state-status", 12, 0, 5);
    for n_sites in 1..=12usize {
        let sub = spectra::numeric_ground_check(n_sites, &[0.1, 0.5, 1.0, 2.0, 10.0], 1e-9);
        report.absorb(&sub);
        if !report.pass {
            break;
        }
    }
    report.notes.clear();
    Ok(report)
}

/// Criterion 4: F_N determinant equals the ξ(α)-contraction, with the
/// x ↔ α symmetry, for N ≤ 12.
pub fn c04_scalar_products() -> Result<Report> {
    combinatorics::check_scalar_products(12)
}

/// Criterion 5: general-τ determinants against the ε-sum, N ≤ 10, plus the
/// f-recurrence grid.
pub fn c05_general_tau() -> Result<Report> {
    combinatorics::check_general_tau_scalar_products(10)
}

/// Criterion 6: supersymmetric point identities for N ≤ 11, pinned example
/// ‖ψ₅‖² = 286.
pub fn c06_susy() -> Result<Report> {
    let mut report = combinatorics::check_susy_identities(5)?;
    if report.pass {
        let table = homogeneous::components_cached(5, Formula::TauOne)?;
        let vals = table.eval(&rint(1), &rint(1));
        let norm: Rational = vals.values().map(|v| v * v).sum();
        if norm != rint(286) {
            report.fail(json!({ "kind": "norm-psi5", "expected": 286 }));
        }
    }
    Ok(report)
}

/// Criterion 7: overlap factorisation for all admissible compositions of
/// N ≤ 10 at three rational x each.
pub fn c07_conjecture_overlaps() -> Result<Report> {
    let xs = [rint(1), rint(2), parse_rational("7/3")?];
    combinatorics::check_conjecture_overlaps(10, &xs)
}

/// Criterion 8: the pointwise vector identities with mutation self-tests.
pub fn c08_qkz_suites() -> Result<Report> {
    let mut report = Report::new("acceptance-08", "qkz-identities", 6, SEED, 5);
    let exchange = suites::check_exchange(6, SEED, 5);
    report.absorb(&exchange);
    for sign in [BetaBarSign::Plus, BetaBarSign::Minus] {
        let reflection = suites::check_reflection(6, SEED, 5, sign);
        report.absorb(&reflection);
        if reflection.pass {
            report.note(format!("reflection relations validate on the {sign:?} branch"));
        }
    }
    report.absorb(&suites::check_bqkz(5, SEED, 5));
    report.absorb(&suites::check_parity_inhomogeneous(5, SEED, 5));
    report.absorb(&suites::check_psi_equals_psibar(5, SEED, 5));
    Ok(report)
}

/// Criterion 9: transfer-matrix identities (commutation, spectral-parameter
/// symmetries, fourth-root scalars, eigenvalue, logarithmic derivative).
pub fn c09_transfer() -> Result<Report> {
    let mut report = Report::new("acceptance-09", "transfer-identities", 8, SEED, 3);
    // commutation and Lemma-level symmetries at generic parameters
    let mut done = 0;
    let mut attempt = 0;
    while done < 3 && attempt < 200 {
        attempt += 1;
        let mut s = Sampler::new(90, SEED, 0, attempt);
        let v = s.rational();
        let beta = s.rational();
        let Ok(params) = ModelParams::generic(v, beta.clone(), BetaBarSign::Plus) else {
            continue;
        };
        let tp = TransferParams::from_model(&params);
        let zs = s.distinct_points(3);
        let z = s.rational();
        let w = s.rational();
        let run = || -> Result<bool> {
            let ta = lattice::transfer_matrix(&z, &zs, &tp)?;
            let tb = lattice::transfer_matrix(&w, &zs, &tp)?;
            if !ta.commutator(&tb).is_zero() {
                return Ok(false);
            }
            if ta != lattice::transfer_matrix(&z.clone().neg(), &zs, &tp)? {
                return Ok(false);
            }
            // inversion relation
            let q = params.q.clone();
            let betabar = params.betabar.clone();
            let lhs = lattice::transfer_matrix(&(&q * &z).recip(), &zs, &tp)?;
            let mut scale = crate::exact::bracket(&(&beta / &z))?
                .mul(&crate::exact::bracket(&(&betabar / (&q * &z)))?)
                .div(
                    &crate::exact::bracket(&(&betabar * &z))?
                        .mul(&crate::exact::bracket(&(&q * &beta * &z))?),
                )
                .ok_or(crate::Error::DivisionByZero)?;
            for zi in &zs {
                let f = crate::exact::bracket(&(&q * zi / &z))?
                    .mul(&crate::exact::bracket(&(&q / (&z * zi)))?)
                    .div(
                        &crate::exact::bracket(&(&q * &q * &z / zi))?
                            .mul(&crate::exact::bracket(&(&q * &q * &z * zi))?),
                    )
                    .ok_or(crate::Error::DivisionByZero)?;
                scale = scale.mul(&f);
            }
            Ok(lhs == ta.scale(&scale))
        };
        match run() {
            Ok(true) => done += 1,
            Ok(false) => {
                report.fail(json!({ "kind": "commutation-or-symmetry" }));
                return Ok(report);
            }
            Err(_) => continue,
        }
    }
    if done < 3 {
        report.fail(json!({ "kind": "no-generic-sample" }));
        return Ok(report);
    }
    // fourth-root scalar identity over the cyclotomic field, N ≤ 4
    let q = Cyc12::q();
    let mut s = Sampler::new(91, SEED, 0, 0);
    let beta = Cyc12::from_rat(&s.rational());
    let params = ModelParams::special_point(q.clone(), beta, BetaBarSign::Plus)?;
    let tp = TransferParams::from_model(&params);
    for n_sites in 1..=4usize {
        let zs: Vec<Cyc12> = s.distinct_points(n_sites).iter().map(Cyc12::from_rat).collect();
        for z in [Cyc12::one(), Cyc12::one().neg(), Cyc12::i(), Cyc12::i().neg()] {
            let t = lattice::transfer_matrix(&z, &zs, &tp)?;
            let scale = crate::exact::bracket(&q.mul(&q))?
                .mul(&crate::exact::bracket(&params.betabar.div(&z).unwrap())?)
                .div(
                    &crate::exact::bracket(&q)?
                        .mul(&crate::exact::bracket(&params.betabar.div(&q.mul(&z)).unwrap())?),
                )
                .unwrap();
            if t.as_scalar_multiple_of_identity() != Some(scale) {
                report.fail(json!({ "kind": "fourth-root-scalar", "N": n_sites }));
                return Ok(report);
            }
        }
    }
    // eigenvalue (inhomogeneous N ≤ 4, homogeneous N ≤ 8) and log-derivative
    report.absorb(&spectra::verify_transfer_eigen(4, 8, SEED, 3)?);
    report.absorb(&spectra::verify_log_derivative(6, SEED)?);
    Ok(report)
}

/// Criterion 10: Laurent parities, exact degrees and braid-limit leading
/// coefficients, N ≤ 5.
pub fn c10_degrees_braid() -> Result<Report> {
    let mut report = Report::new("acceptance-10", "degrees-and-braid-limits", 5, SEED, 1);
    for n_sites in 2..=5usize {
        let sub = suites::check_degrees_and_braid(n_sites, SEED);
        report.absorb(&sub);
        if !report.pass {
            break;
        }
    }
    report.notes.clear();
    Ok(report)
}

/// Criterion 11: TSASM counts m ≤ 9, generating functions m ≤ 7, shift
/// identity N ≤ 7, and the reconstruction oracle.
pub fn c11_tsasm() -> Result<Report> {
    let mut report = Report::new("acceptance-11", "tsasm-enumeration", 9, 0, 1);
    let counts: [u64; 10] = [1, 1, 1, 2, 4, 13, 46, 248, 1516, 13654];
    for (m, expect) in counts.iter().enumerate() {
        if tsasm::count(m) != *expect {
            report.fail(json!({ "kind": "count", "m": m }));
            return Ok(report);
        }
    }
    let table = [
        "1",
        "1",
        "t",
        "t + t*tau",
        "tau + t^2 + t^2*tau + t^2*tau^2",
        "tau + tau^3 + t^2 + 3*t^2*tau + 4*t^2*tau^2 + 2*t^2*tau^3 + t^2*tau^4",
        "3*t*tau + 4*t*tau^2 + 8*t*tau^3 + 3*t*tau^4 + 2*t*tau^5 + t^3 + 3*t^3*tau + 7*t^3*tau^2 + 6*t^3*tau^3 + 6*t^3*tau^4 + 2*t^3*tau^5 + t^3*tau^6",
        "3*t*tau + 7*t*tau^2 + 17*t*tau^3 + 18*t*tau^4 + 15*t*tau^5 + 12*t*tau^6 + 4*t*tau^7 + 2*t*tau^8 + t^3 + 6*t^3*tau + 19*t^3*tau^2 + 32*t^3*tau^3 + 41*t^3*tau^4 + 35*t^3*tau^5 + 21*t^3*tau^6 + 11*t^3*tau^7 + 3*t^3*tau^8 + t^3*tau^9",
    ];
    for (m, s) in table.iter().enumerate() {
        if tsasm::generating_function(m) != seed_poly(s) {
            report.fail(json!({ "kind": "generating-function", "m": m }));
            return Ok(report);
        }
    }
    report.absorb(&tsasm::check_shift_identity(8)?);
    for m in 0..=9usize {
        let sub = tsasm::check_reconstruction_oracle(m, 100);
        report.absorb(&sub);
    }
    Ok(report)
}

/// Criterion 12: sum rule S_N(x,τ) against the weighted enumeration for
/// N ≤ 8 (with the μ-parity precondition) and S_N(1,1) = A_TS(2N+3).
pub fn c12_conjecture_tsasm() -> Result<Report> {
    let mut report = Report::new("acceptance-12", "component-sum-rule", 8, 0, 1);
    for n_sites in 1..=8usize {
        report.absorb(&tsasm::check_conjecture_tsasm(n_sites)?);
        if !report.pass {
            return Ok(report);
        }
        let s11 = tsasm::component_sum_at(n_sites, &rint(1))?;
        let expect = tsasm::count(n_sites + 1);
        if s11 != Rational::from_integer(BigInt::from(expect)) {
            report.fail(json!({ "kind": "susy-point-count", "N": n_sites }));
            return Ok(report);
        }
    }
    Ok(report)
}

/// Criterion 13: four-formula agreement (N ≤ 10), x-degree bounds and
/// integrality (N ≤ 12), and the x = 0 spin-reversal reduction (N ≤ 10).
pub fn c13_component_structure() -> Result<Report> {
    let mut report = Report::new("acceptance-13", "component-structure", 12, 0, 1);
    for n_sites in 1..=10usize {
        report.absorb(&homogeneous::check_four_formula_agreement(n_sites)?);
        if !report.pass {
            return Ok(report);
        }
        report.absorb(&homogeneous::check_x0_spin_reversal(n_sites)?);
        if !report.pass {
            return Ok(report);
        }
    }
    for n_sites in 1..=12usize {
        report.absorb(&homogeneous::check_degree_and_integrality(n_sites, Formula::TauOne)?);
        if !report.pass {
            return Ok(report);
        }
        // non-negativity is observational; surface any finding as a note
        let nn = homogeneous::check_nonnegativity(n_sites, Formula::TauOne)?;
        for n in nn.notes {
            report.note(n);
        }
    }
    Ok(report)
}

/// Runs one criterion by id.
pub fn run_criterion(id: usize) -> Result<Report> {
    match id {
        1 => c01_ground_state_n5(),
        2 => c02_eigenpair(),
        3 => c03_numeric_ground(),
        4 => c04_scalar_products(),
        5 => c05_general_tau(),
        6 => c06_susy(),
        7 => c07_conjecture_overlaps(),
        8 => c08_qkz_suites(),
        9 => c09_transfer(),
        10 => c10_degrees_braid(),
        11 => c11_tsasm(),
        12 => c12_conjecture_tsasm(),
        13 => c13_component_structure(),
        _ => Err(crate::Error::SiteRange(id, "criterion id out of range")),
    }
}

/// Runs the full matrix, printing one pass/fail line per criterion.
pub fn run_all() -> Result<bool> {
    let mut all_pass = true;
    for (id, label) in CRITERIA {
        let report = run_criterion(id)?;
        println!(
            "{} criterion-{:02} {}",
            if report.pass { "PASS" } else { "FAIL" },
            id,
            label
        );
        if !report.pass {
            if let Some(cex) = &report.counterexample {
                println!("     counterexample: {cex}");
            }
            all_pass = false;
        }
    }
    Ok(all_pass)
}
