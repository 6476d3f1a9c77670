//! Numeric checks of the direct, inverse, Bernstein, Hardy and equivalence
//! estimates. Every check computes both sides and reports their ratio.

pub mod family;
mod hardy;
mod report;

pub use hardy::{check_hardy, MonotoneFunction};
pub use report::{ratio_of, Aggregate, CheckReport, SLACK};

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::norms::{
    approx_space_norm, lorentz_norm, lp_norm, sup_weighted_error_of, weak_lorentz_norm,
    QuadratureSpec,
};
use crate::profile::{NormParams, RearrangementProfile};
use crate::stepfn::StepFunction;

fn describe(profile: &RearrangementProfile, params: &NormParams) -> String {
    let tail = profile.tail().map_or(String::new(), |t| {
        format!(
            " tail(T={}, c={}, gamma={})",
            t.t_start, t.coeff, t.exponent
        )
    });
    format!(
        "{} pieces on [0,{}){tail}; p={} alpha={} p1={} q={}",
        profile.pieces().len(),
        profile.pieces_end(),
        params.p(),
        params.alpha(),
        params.p1(),
        params.q()
    )
}

/// `sup_σ σ^α E_σ(f)_p`: the segment-analytic maximum, cross-checked on a
/// geometric grid of four points per octave around the breakpoints.
pub fn sup_weighted_error(profile: &RearrangementProfile, params: &NormParams) -> Result<f64> {
    let (p, alpha) = (params.p(), params.alpha());
    let analytic = sup_weighted_error_of(profile, p, alpha)?;
    if profile.is_zero() || analytic.is_infinite() {
        return Ok(analytic);
    }
    let bps = profile.breakpoints();
    let lo = bps.first().copied().unwrap_or(1.0).log2().floor() as i32 - 20;
    let hi = bps.last().copied().unwrap_or(1.0).log2().ceil() as i32
        + if profile.tail().is_some() { 40 } else { 1 };
    let grid = (4 * lo..=4 * hi)
        .map(|k| {
            let s = 2f64.powf(f64::from(k) / 4.0);
            s.powf(alpha) * profile.error_unchecked(s, p)
        })
        .fold(0.0, f64::max);
    Ok(analytic.max(grid))
}

/// `sup_σ σ^α E_σ(f)_p ≤ (αp)^{-1/p} ‖f‖_{p₁,∞}`.
pub fn check_jackson(profile: &RearrangementProfile, params: &NormParams) -> Result<CheckReport> {
    let weak = weak_lorentz_norm(profile, params.p1())?;
    if weak.is_infinite() {
        return Err(Error::Precondition(format!(
            "weak L_{{{},inf}} norm is infinite",
            params.p1()
        )));
    }
    let c = (params.alpha() * params.p()).powf(-1.0 / params.p());
    let lhs = sup_weighted_error(profile, params)?;
    Ok(CheckReport::inequality(
        "jackson",
        lhs,
        c * weak,
        Some(c),
        describe(profile, params),
    ))
}

/// `‖f‖_{p₁,∞} ≤ 2^{α+1/p} sup_σ σ^α E_σ(f)_p`.
pub fn check_inverse_weak(
    profile: &RearrangementProfile,
    params: &NormParams,
) -> Result<CheckReport> {
    let sup = sup_weighted_error(profile, params)?;
    if sup.is_infinite() {
        return Err(Error::Precondition(
            "sup of sigma^alpha E_sigma is infinite".into(),
        ));
    }
    let c = 2f64.powf(params.alpha() + 1.0 / params.p());
    let lhs = weak_lorentz_norm(profile, params.p1())?;
    Ok(CheckReport::inequality(
        "inverse_weak",
        lhs,
        c * sup,
        Some(c),
        describe(profile, params),
    ))
}

/// `‖φ‖_{p₁,∞} ≤ σ^r ‖φ‖_p` with `σ = μ(supp φ)` and constant 1.
pub fn check_bernstein(phi: &StepFunction, params: &NormParams) -> Result<CheckReport> {
    check_bernstein_profile(&phi.rearrange(), params)
}

/// [`check_bernstein`] on a rearrangement with finite support.
pub fn check_bernstein_profile(
    profile: &RearrangementProfile,
    params: &NormParams,
) -> Result<CheckReport> {
    let sigma = profile.support_measure();
    if sigma.is_infinite() {
        return Err(Error::Precondition("support measure is infinite".into()));
    }
    let lhs = weak_lorentz_norm(profile, params.p1())?;
    let rhs = sigma.powf(params.r()) * lp_norm(profile, params.p())?;
    Ok(CheckReport::inequality(
        "bernstein",
        lhs,
        rhs,
        Some(1.0),
        describe(profile, params),
    ))
}

/// `‖f + g‖_{A^α_{p,q}} ≤ 2^α (‖f‖_{A^α_{p,q}} + ‖g‖_{A^α_{p,q}})`.
pub fn check_quasi_triangle(
    f: &StepFunction,
    g: &StepFunction,
    params: &NormParams,
    quad: &QuadratureSpec,
) -> Result<CheckReport> {
    let norm = |h: &StepFunction| approx_space_norm(&h.rearrange(), params, quad);
    let c = 2f64.powf(params.alpha());
    let lhs = norm(&f.add(g))?;
    let rhs = c * (norm(f)? + norm(g)?);
    let inputs = format!(
        "{} + {} atoms; p={} alpha={} q={}",
        f.atoms().len(),
        g.atoms().len(),
        params.p(),
        params.alpha(),
        params.q()
    );
    Ok(CheckReport::inequality(
        "quasi_triangle",
        lhs,
        rhs,
        Some(c),
        inputs,
    ))
}

/// Ratios `ρ = ‖f‖_{A^α_{p,q}} / ‖f‖_{p₁,q}` in input order; `None` for members
/// whose Lorentz norm is zero or infinite.
pub fn equivalence_ratios(
    family: &[RearrangementProfile],
    params: &NormParams,
    quad: &QuadratureSpec,
) -> Result<Vec<Option<f64>>> {
    family
        .par_iter()
        .map(|prof| {
            let lor = lorentz_norm(prof, params.p1(), params.q())?;
            if !(lor > 0.0 && lor.is_finite()) {
                return Ok(None);
            }
            Ok(Some(approx_space_norm(prof, params, quad)? / lor))
        })
        .collect()
}

/// Band of `ρ` over the family: `lhs = max ρ`, `rhs = min ρ`, `ratio` the band
/// width `max/min`. Passes when the band is positive and finite; no constant
/// is asserted.
pub fn check_equivalence(
    family: &[RearrangementProfile],
    params: &NormParams,
    quad: &QuadratureSpec,
) -> Result<CheckReport> {
    if family.is_empty() {
        return Err(domain("equivalence check needs a nonempty family"));
    }
    let ratios: Vec<f64> = equivalence_ratios(family, params, quad)?
        .into_iter()
        .flatten()
        .collect();
    let n = ratios.len();
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(0.0, f64::max);
    let (lo, hi) = if n == 0 { (0.0, 0.0) } else { (lo, hi) };
    Ok(CheckReport {
        name: "equivalence".into(),
        lhs: hi,
        rhs: lo,
        ratio: if n == 0 { f64::INFINITY } else { hi / lo },
        constant_claimed: None,
        pass: n > 0 && lo > 0.0 && hi.is_finite(),
        inputs: format!(
            "{} profiles ({} skipped); p={} alpha={} p1={} q={}",
            family.len(),
            family.len() - n,
            params.p(),
            params.alpha(),
            params.p1(),
            params.q()
        ),
        aggregate: Some(Aggregate {
            min_ratio: lo,
            max_ratio: hi,
            n,
        }),
    })
}

/// Exponent grid of the built-in suite.
pub const P_GRID: [f64; 4] = [0.5, 1.0, 2.0, 4.0];
pub const ALPHA_GRID: [f64; 4] = [0.25, 0.5, 1.0, 2.0];

type Check = fn(&RearrangementProfile, &NormParams) -> Result<CheckReport>;

/// Runs `check` on every member, dropping precondition failures, and folds
/// the results into one report.
pub fn aggregate_check(
    name: &str,
    check: Check,
    family: &[RearrangementProfile],
    params: &NormParams,
    label: &str,
) -> Result<CheckReport> {
    let outcomes: Vec<Result<CheckReport>> =
        family.par_iter().map(|prof| check(prof, params)).collect();
    let mut reports = Vec::with_capacity(outcomes.len());
    for outcome in outcomes {
        match outcome {
            Ok(rep) => reports.push(rep),
            Err(Error::Precondition(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let inputs = format!(
        "{label}: {} members ({} skipped); p={} alpha={} p1={}",
        family.len(),
        family.len() - reports.len(),
        params.p(),
        params.alpha(),
        params.p1()
    );
    Ok(CheckReport::aggregate(name, &reports, inputs))
}

/// The full built-in suite for one `q`: per `(p, α)` grid point the Jackson,
/// inverse, Bernstein and equivalence checks over the seeded family, then the
/// sharpness witnesses and the Hardy check for `e^{-t}`.
pub fn builtin_suite(seed: u64, q: f64, quad: &QuadratureSpec) -> Result<Vec<CheckReport>> {
    let steps = family::step_family(seed);
    let step_profiles: Vec<RearrangementProfile> =
        steps.iter().map(StepFunction::rearrange).collect();
    let mut out = Vec::new();
    for p in P_GRID {
        let mut members = step_profiles.clone();
        members.extend(family::tail_family(seed, p));
        let label = format!("family v{} seed={seed}", family::FAMILY_VERSION);
        for alpha in ALPHA_GRID {
            let params = NormParams::from_alpha(p, q, alpha)?;
            out.push(aggregate_check(
                "jackson",
                check_jackson,
                &members,
                &params,
                &label,
            )?);
            out.push(aggregate_check(
                "inverse_weak",
                check_inverse_weak,
                &members,
                &params,
                &label,
            )?);
            let finite: Vec<RearrangementProfile> = members
                .iter()
                .map(|m| match m.tail() {
                    Some(_) => m.truncated(m.pieces_end()),
                    None => Ok(m.clone()),
                })
                .collect::<Result<_>>()?;
            out.push(
                aggregate_check(
                    "bernstein",
                    check_bernstein_profile,
                    &finite,
                    &params,
                    &format!("{label} truncated"),
                )
                .map(|mut rep| {
                    rep.name = "bernstein".into();
                    rep
                })?,
            );
            out.push(check_equivalence(&members, &params, quad)?);
        }
    }
    out.extend(witnesses(q, quad)?);
    Ok(out)
}

/// Equality cases: Jackson on `t^{-1/p₁}`, Bernstein on indicators, the `P1`
/// equivalence ratio, and Hardy on `e^{-t}`.
pub fn witnesses(q: f64, quad: &QuadratureSpec) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    let params = NormParams::from_alpha(2.0, q, 0.5)?;
    let power = RearrangementProfile::capped_power(1.0 / params.p1())?;
    let mut rep = check_jackson(&power, &params)?;
    rep.name = "jackson_sharpness".into();
    rep.pass &= (rep.ratio - 1.0).abs() <= SLACK;
    out.push(rep);

    for len in [0.5, 1.0, 4.0] {
        let mut rep = check_bernstein(&StepFunction::from_triples(&[(0.0, len, 1.0)])?, &params)?;
        rep.name = "bernstein_sharpness".into();
        rep.pass &= (rep.ratio - 1.0).abs() <= 1e-12;
        out.push(rep);
    }

    if q.is_infinite() {
        let p1 = RearrangementProfile::capped_power(1.0)?;
        let mut rep = check_equivalence(std::slice::from_ref(&p1), &params, quad)?;
        rep.name = "equivalence_p1".into();
        rep.pass &= (rep.lhs - 1.0).abs() <= SLACK;
        out.push(rep);
    }

    let phi = MonotoneFunction::new("exp(-t)", |t: f64| (-t).exp());
    out.push(check_hardy(&phi, 1.0, 0.5, 1.0, quad)?);
    Ok(out)
}

/// Jackson, inverse, Bernstein (when the support is finite) and the
/// single-member equivalence ratio for each user-supplied profile.
pub fn user_suite(
    profiles: &[RearrangementProfile],
    params: &NormParams,
    quad: &QuadratureSpec,
) -> Result<Vec<CheckReport>> {
    let checks: [(&str, Check); 3] = [
        ("jackson", check_jackson),
        ("inverse_weak", check_inverse_weak),
        ("bernstein", check_bernstein_profile),
    ];
    let mut out = Vec::new();
    for prof in profiles {
        for (_, check) in checks {
            match check(prof, params) {
                Ok(rep) => out.push(rep),
                Err(Error::Precondition(_)) => {}
                Err(e) => return Err(e),
            }
        }
        let lor = lorentz_norm(prof, params.p1(), params.q())?;
        if lor > 0.0 && lor.is_finite() {
            out.push(check_equivalence(std::slice::from_ref(prof), params, quad)?);
        }
    }
    Ok(out)
}
