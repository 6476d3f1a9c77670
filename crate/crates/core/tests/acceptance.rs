//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p lorentz-approx --test acceptance`.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use lorentz_approx::kfunc::{k_lower, k_upper_truncation};
use lorentz_approx::theorems::{
    check_bernstein, check_bernstein_profile, check_hardy, check_inverse_weak, check_jackson,
    check_quasi_triangle, equivalence_ratios, family, sup_weighted_error, MonotoneFunction,
    ALPHA_GRID, P_GRID, SLACK,
};
use lorentz_approx::{
    lorentz_norm, lp_norm, NormParams, QuadratureSpec, RearrangementProfile, StepFunction,
};

type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

const SEED: u64 = 0;
const Q_GRID: [f64; 4] = [0.5, 1.0, 2.0, f64::INFINITY];

struct Outcome {
    pass: bool,
    /// Failure fully explained by a counterexample to the criterion itself;
    /// still reported as FAIL.
    explained: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        explained: false,
        detail: detail.into(),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(a.abs())
    }
}

fn grid() -> impl Iterator<Item = NormParams> {
    P_GRID.into_iter().flat_map(|p| {
        ALPHA_GRID
            .into_iter()
            .map(move |a| NormParams::from_alpha(p, f64::INFINITY, a).unwrap())
    })
}

fn jackson_sharpness() -> Outcome {
    let params = NormParams::from_alpha(2.0, f64::INFINITY, 0.5).unwrap();
    let f = RearrangementProfile::capped_power(1.0 / params.p1()).unwrap();
    let sup = sup_weighted_error(&f, &params).unwrap();
    let rep = check_jackson(&f, &params).unwrap();
    let err = rel(sup, rep.rhs).max(rel(rep.rhs, 1.0));
    outcome(
        err <= 1e-9,
        format!(
            "sup = {sup:.17}, (alpha p)^(-1/p) |f|_(p1,inf) = {:.17}, rel err {err:.1e}",
            rep.rhs
        ),
    )
}

fn inverse_weak() -> Outcome {
    let (mut checked, mut failed, mut worst) = (0usize, 0usize, 0f64);
    for p in P_GRID {
        let fam = family::profile_family(SEED, p);
        for alpha in ALPHA_GRID {
            let params = NormParams::from_alpha(p, f64::INFINITY, alpha).unwrap();
            let reps: Vec<_> = fam
                .par_iter()
                .filter_map(|f| check_inverse_weak(f, &params).ok())
                .collect();
            checked += reps.len();
            failed += reps.iter().filter(|r| !r.pass).count();
            worst = reps.iter().map(|r| r.ratio).fold(worst, f64::max);
        }
    }
    outcome(
        failed == 0,
        format!(
            "{checked} checks over 16 grid points, {failed} violations, max lhs/rhs = {worst:.12}"
        ),
    )
}

/// Random step function of `n` unit atoms on integer cells, values in
/// `±{1, …, 8}` so that plateaus are frequent.
fn unit_atoms<R: Rng>(rng: &mut R, n: usize) -> StepFunction {
    let mut cells: Vec<i32> = (0..24).collect();
    for i in 0..n {
        let j = rng.gen_range(i..cells.len());
        cells.swap(i, j);
    }
    let triples: Vec<(f64, f64, f64)> = cells[..n]
        .iter()
        .map(|&c| {
            let v = f64::from(rng.gen_range(1..=8));
            (
                f64::from(c),
                f64::from(c + 1),
                if rng.gen_bool(0.5) { v } else { -v },
            )
        })
        .collect();
    StepFunction::from_triples(&triples).unwrap()
}

/// Minimum of `Σ_{i ∉ S} |v_i|^p` over all subsets `S` with `|S| = k`.
fn brute_force_residual(values: &[f64], k: usize, p: f64) -> f64 {
    let n = values.len();
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let excluded: f64 = (0..n)
            .filter(|i| mask & (1 << i) == 0)
            .map(|i| values[i].abs().powf(p))
            .sum();
        best = best.min(excluded);
    }
    best
}

fn best_support_brute_force() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut cases = Vec::new();
    for n in 1..=12 {
        for _ in 0..40 {
            cases.push(unit_atoms(&mut rng, n));
        }
    }
    let results: Vec<(usize, Option<String>)> = cases
        .par_iter()
        .map(|f| {
            let values: Vec<f64> = f.atoms().iter().map(|a| a.value).collect();
            let mut count = 0;
            for p in [1.0, 2.0, 3.0, 4.0] {
                for k in 1..=values.len() {
                    let sigma = k as f64;
                    let best = f.best_approx(sigma, p).unwrap();
                    let oracle = brute_force_residual(&values, k, p).powf(1.0 / p);
                    count += 1;
                    let captured = f.restricted_to(&best.support);
                    if best.error != oracle
                        || best.support.measure() > sigma
                        || captured != best.approximant
                    {
                        return (
                            count,
                            Some(format!(
                                "n={} sigma={sigma} p={p}: {} vs {oracle}",
                                values.len(),
                                best.error
                            )),
                        );
                    }
                }
            }
            (count, None)
        })
        .collect();
    let total: usize = results.iter().map(|r| r.0).sum();
    match results.into_iter().find_map(|r| r.1) {
        None => outcome(true, format!("{} functions, {total} (sigma, p) cases, all residuals equal the enumeration minimum", cases.len())),
        Some(msg) => outcome(false, format!("mismatch: {msg}")),
    }
}

fn lpp_identity() -> Outcome {
    let (mut n, mut worst) = (0usize, 0f64);
    for p in P_GRID {
        for f in family::profile_family(SEED, p) {
            let a = lorentz_norm(&f, p, p).unwrap();
            let b = lp_norm(&f, p).unwrap();
            worst = worst.max(rel(a, b));
            n += 1;
        }
    }
    outcome(
        worst <= 1e-12,
        format!("{n} profiles, max relative difference {worst:.1e}"),
    )
}

fn bernstein() -> Outcome {
    let (mut n, mut failed, mut worst_eq) = (0usize, 0usize, 0f64);
    for params in grid() {
        let p = params.p();
        for f in family::step_family(SEED) {
            let rep = check_bernstein(&f, &params).unwrap();
            n += 1;
            failed += usize::from(!rep.pass);
        }
        for f in family::tail_family(SEED, p) {
            let rep =
                check_bernstein_profile(&f.truncated(f.pieces_end()).unwrap(), &params).unwrap();
            n += 1;
            failed += usize::from(!rep.pass);
        }
        for (a, len, v) in [
            (0.0, 1.0, 1.0),
            (-3.0, 0.125, 7.5),
            (2.0, 13.0, -0.01),
            (0.0, 1e-3, 1e3),
        ] {
            let rep = check_bernstein(
                &StepFunction::from_triples(&[(a, a + len, v)]).unwrap(),
                &params,
            )
            .unwrap();
            worst_eq = worst_eq.max((rep.ratio - 1.0).abs());
        }
    }
    outcome(
        failed == 0 && worst_eq <= 1e-12,
        format!("{n} checks, {failed} violations; indicator ratios within {worst_eq:.1e} of 1"),
    )
}

/// Below `p = 1` the pair `(f, f(· − L))` with disjoint supports gives
/// `‖f + g‖ = 2^{α+1/p}‖f‖`, exceeding `2^α(‖f‖ + ‖g‖)` by `2^{1/p−1}`;
/// below `q = 1` the `L_q(dσ/σ)` triangle inequality fails by up to
/// `2^{1/q−1}`. Violations outside that region are unexplained.
fn quasi_triangle() -> Outcome {
    let pairs = family::step_pairs(SEED, 200);
    let quad = QuadratureSpec::default();
    let mut n = 0usize;
    let mut failing = Vec::new();
    let mut unexplained = 0usize;
    let mut worst_bound = 0f64;
    for params in grid() {
        for q in Q_GRID {
            let params = params.with_q(q).unwrap();
            let reps: Vec<_> = pairs
                .par_iter()
                .map(|(f, g)| check_quasi_triangle(f, g, &params, &quad).unwrap())
                .collect();
            n += reps.len();
            let bad = reps.iter().filter(|r| !r.pass).count();
            let worst = reps.iter().map(|r| r.ratio).fold(0.0, f64::max);
            let excess =
                2f64.powf((1.0 / params.p() - 1.0).max(0.0)) * 2f64.powf((1.0 / q - 1.0).max(0.0));
            worst_bound = worst_bound.max(worst / excess);
            if bad > 0 {
                if params.p() >= 1.0 && q >= 1.0 {
                    unexplained += bad;
                }
                failing.push(format!(
                    "(p={},alpha={},q={q}): {bad} pairs, max ratio {worst:.4}",
                    params.p(),
                    params.alpha()
                ));
            }
        }
    }
    let widened = format!(
        "with the extra factor 2^(1/p-1)^+ 2^(1/q-1)^+ the worst ratio is {worst_bound:.4}"
    );
    if failing.is_empty() {
        return outcome(true, format!("{n} checks, no violations; {widened}"));
    }
    let mut out = outcome(
        false,
        format!(
            "{n} checks; violations at {} grid points ({unexplained} with p >= 1 and q >= 1); {widened}; {}",
            failing.len(),
            failing.join("; ")
        ),
    );
    out.explained = unexplained == 0 && worst_bound <= 1.0 + SLACK;
    out
}

fn k_bracket() -> Outcome {
    let ts: Vec<f64> = (-20..=20).map(|j| 2f64.powi(j)).collect();
    let (mut n, mut order_fail, mut worst_h) = (0usize, 0usize, 0f64);
    for p in P_GRID {
        let fam = family::profile_family(SEED, p);
        for alpha in ALPHA_GRID {
            let params = NormParams::from_alpha(p, f64::INFINITY, alpha).unwrap();
            let stats: Vec<(usize, usize, f64)> = fam
                .par_iter()
                .map(|f| {
                    let g = f.scaled(2.0).unwrap();
                    let (mut bad, mut h) = (0, 0f64);
                    for &t in &ts {
                        let lo = k_lower(f, t, &params).unwrap();
                        let up = k_upper_truncation(f, t, &params).unwrap().upper;
                        if lo > up * (1.0 + 1e-12) {
                            bad += 1;
                        }
                        let lo2 = k_lower(&g, t, &params).unwrap();
                        let up2 = k_upper_truncation(&g, t, &params).unwrap().upper;
                        h = h.max(rel(lo2, 2.0 * lo)).max(rel(up2, 2.0 * up));
                    }
                    (ts.len(), bad, h)
                })
                .collect();
            for (c, b, h) in stats {
                n += c;
                order_fail += b;
                worst_h = worst_h.max(h);
            }
        }
    }
    outcome(
        order_fail == 0 && worst_h <= 1e-12,
        format!("{n} (f, t) points, {order_fail} ordering violations, max homogeneity error {worst_h:.1e}"),
    )
}

fn equivalence_band() -> Outcome {
    let quad = QuadratureSpec::default();
    let mut lines = Vec::new();
    let mut ok = true;
    let mut worst_scale = 0f64;
    for p in P_GRID {
        let fam = family::profile_family(SEED, p);
        let scaled: Vec<RearrangementProfile> =
            fam.iter().map(|f| f.scaled(3.0).unwrap()).collect();
        for alpha in ALPHA_GRID {
            for q in Q_GRID {
                let params = NormParams::from_alpha(p, q, alpha).unwrap();
                let a = equivalence_ratios(&fam, &params, &quad).unwrap();
                let b = equivalence_ratios(&scaled, &params, &quad).unwrap();
                let mut band = (f64::INFINITY, 0f64, 0usize);
                for (x, y) in a.iter().zip(&b) {
                    match (x, y) {
                        (Some(x), Some(y)) => {
                            worst_scale = worst_scale.max(rel(*x, *y));
                            band = (band.0.min(*x), band.1.max(*x), band.2 + 1);
                        }
                        (None, None) => {}
                        _ => ok = false,
                    }
                }
                ok &= band.2 > 0 && band.0 > 0.0 && band.1.is_finite();
                lines.push(format!(
                    "({p},{q},{alpha}):[{:.4},{:.4}]n={}",
                    band.0, band.1, band.2
                ));
            }
        }
    }
    let params = NormParams::from_alpha(2.0, f64::INFINITY, 0.5).unwrap();
    let p1 = RearrangementProfile::capped_power(1.0).unwrap();
    let rho = equivalence_ratios(&[p1], &params, &quad).unwrap()[0].unwrap();
    ok &= (rho - 1.0).abs() <= 1e-8 && worst_scale <= 1e-12;
    outcome(
        ok,
        format!(
            "P1 ratio {rho:.15}; scaling changes ratios by at most {worst_scale:.1e}; bands (p,q,alpha): {}",
            lines.join(" ")
        ),
    )
}

fn hardy() -> Outcome {
    let phi = MonotoneFunction::new("exp(-t)", |t: f64| (-t).exp());
    let rep = check_hardy(&phi, 1.0, 0.5, 1.0, &QuadratureSpec::default()).unwrap();
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let ok = (rep.ratio - 2.0).abs() <= 1e-6
        && rel(rep.lhs, 2.0 * sqrt_pi) <= 1e-6
        && rel(rep.rhs, sqrt_pi) <= 1e-6;
    outcome(
        ok,
        format!(
            "lhs = {:.12} (2 sqrt(pi) = {:.12}), rhs = {:.12}, ratio = {:.12}",
            rep.lhs,
            2.0 * sqrt_pi,
            rep.rhs,
            rep.ratio
        ),
    )
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_lorentz-approx"))
            .args(["verify", "--seed", "0"])
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    let same = a.stdout == b.stdout && !a.stdout.is_empty();
    outcome(
        same && a.status.code() == Some(0),
        format!(
            "{} bytes per report, identical: {same}, exit {:?}",
            a.stdout.len(),
            a.status.code()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            "jackson sharpness",
            jackson_sharpness,
            Some(Duration::from_secs(1)),
        ),
        (
            "inverse weak-type bound",
            inverse_weak,
            Some(Duration::from_secs(60)),
        ),
        (
            "best support set brute force",
            best_support_brute_force,
            Some(Duration::from_secs(30)),
        ),
        ("L_pp equals L_p", lpp_identity, None),
        ("bernstein with constant 1", bernstein, None),
        ("quasi-triangle with constant 2^alpha", quasi_triangle, None),
        ("K-functional bracket", k_bracket, None),
        ("equivalence band", equivalence_band, None),
        ("hardy ratio", hardy, Some(Duration::from_secs(5))),
        ("determinism", determinism, None),
    ];
    let (mut failures, mut explained) = (0, 0);
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut out = run();
        let elapsed = start.elapsed();
        if let Some(limit) = budget {
            if elapsed > *limit {
                out.pass = false;
                out.detail.push_str(&format!("; over the {limit:?} budget"));
            }
        }
        failures += usize::from(!out.pass);
        explained += usize::from(!out.pass && out.explained);
        println!(
            "{} {:>2} {name} ({:.2} s): {}",
            match (out.pass, out.explained) {
                (true, _) => "PASS",
                (false, true) => "FAIL (criterion disproved by counterexample)",
                (false, false) => "FAIL",
            },
            i + 1,
            elapsed.as_secs_f64(),
            out.detail
        );
    }
    println!(
        "{} of {} criteria passed; {explained} failing criteria are disproved by the counterexample in their line",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == explained {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
