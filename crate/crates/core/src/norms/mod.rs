//! `L_p`, weak-`L_p`, Lorentz and approximation-space quasinorms of a
//! rearrangement profile.
//!
//! Everything except the `A^α_{p,q}` integral with `q < ∞` is closed form. That
//! integral is adaptive quadrature on each constant piece, plus an exact
//! power-law evaluation on the tail.

mod quadrature;

pub use quadrature::{integrate, integrate_to_infinity, Estimate, QuadratureSpec};

use crate::error::Result;
use crate::profile::{check_exponent, power_integral, NormParams, RearrangementProfile};

/// `‖f‖_p = (∫₀^∞ f*(t)^p dt)^{1/p}`.
pub fn lp_norm(profile: &RearrangementProfile, p: f64) -> Result<f64> {
    check_exponent(p)?;
    Ok(profile
        .moment_unchecked(0.0, f64::INFINITY, p)
        .powf(1.0 / p))
}

/// `‖f‖_{p,∞} = sup_t t^{1/p} f*(t)`.
pub fn weak_lorentz_norm(profile: &RearrangementProfile, p: f64) -> Result<f64> {
    check_exponent(p)?;
    Ok(weak_norm_unchecked(profile, p))
}

pub(crate) fn weak_norm_unchecked(profile: &RearrangementProfile, p: f64) -> f64 {
    let inv = 1.0 / p;
    // on a constant piece t^{1/p}·v increases, so the sup is the right endpoint
    let mut best = profile
        .pieces()
        .iter()
        .filter(|pc| pc.value > 0.0)
        .map(|pc| pc.t_end.powf(inv) * pc.value)
        .fold(0.0, f64::max);
    if let Some(tail) = profile.tail() {
        let slope = inv - tail.exponent;
        if slope > 0.0 {
            return f64::INFINITY;
        }
        let at_start = if slope == 0.0 {
            tail.coeff
        } else {
            tail.coeff * tail.t_start.powf(slope)
        };
        best = best.max(at_start);
    }
    best
}

/// `‖f‖_{p,q}`; `q = ∞` is the weak norm.
pub fn lorentz_norm(profile: &RearrangementProfile, p: f64, q: f64) -> Result<f64> {
    check_exponent(p)?;
    if q.is_infinite() {
        return weak_lorentz_norm(profile, p);
    }
    check_exponent(q)?;
    let ratio = q / p;
    let mut total = 0.0;
    for pc in profile.pieces().iter().filter(|pc| pc.value > 0.0) {
        let span = if ratio == 1.0 {
            pc.t_end - pc.t_start
        } else {
            pc.t_end.powf(ratio) - pc.t_start.powf(ratio)
        };
        total += pc.value.powf(q) * span / ratio;
    }
    if let Some(tail) = profile.tail() {
        total += power_integral(
            tail.coeff.powf(q),
            ratio - tail.exponent * q - 1.0,
            tail.t_start,
            f64::INFINITY,
        );
    }
    Ok(total.powf(1.0 / q))
}

/// `G(σ) = ∫_σ^∞ f*^p` sampled at the piece ends, with the tail constant.
///
/// On a piece `[a, b)` with value `v`, `G(σ) = G(b) + v^p (b − σ)`.
pub(crate) struct ErrorProfile {
    /// `(a, b, v^p, G(b))` per piece.
    pub(crate) segments: Vec<(f64, f64, f64, f64)>,
    /// `(T, K, s)` with `G(σ)^{1/p} = K σ^{s}` on `[T, ∞)`, `s = 1/p − γ`.
    pub(crate) tail: Option<(f64, f64, f64)>,
    pub(crate) diverges: bool,
}

impl ErrorProfile {
    pub(crate) fn new(profile: &RearrangementProfile, p: f64) -> Self {
        let mut tail = None;
        let mut g_end = 0.0;
        if let Some(t) = profile.tail() {
            let gp = t.exponent * p;
            if gp <= 1.0 {
                return Self {
                    segments: Vec::new(),
                    tail: None,
                    diverges: true,
                };
            }
            let k = (t.coeff.powf(p) / (gp - 1.0)).powf(1.0 / p);
            tail = Some((t.t_start, k, 1.0 / p - t.exponent));
            g_end = t.p_moment(t.t_start, f64::INFINITY, p);
        }
        let mut segments = Vec::with_capacity(profile.pieces().len());
        for pc in profile.pieces().iter().rev() {
            let vp = pc.value.powf(p);
            segments.push((pc.t_start, pc.t_end, vp, g_end));
            g_end += vp * pc.len();
        }
        segments.reverse();
        Self {
            segments,
            tail,
            diverges: false,
        }
    }
}

/// `‖f‖_{A^α_{p,q}} = (∫₀^∞ [σ^α E_σ(f)_p]^q dσ/σ)^{1/q}`, or the supremum
/// of `σ^α E_σ(f)_p` when `q = ∞`.
pub fn approx_space_norm(
    profile: &RearrangementProfile,
    params: &NormParams,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let (p, q, alpha) = (params.p(), params.q(), params.alpha());
    if profile.is_zero() {
        return Ok(0.0);
    }
    let ep = ErrorProfile::new(profile, p);
    if ep.diverges {
        return Ok(f64::INFINITY);
    }
    if q.is_infinite() {
        return Ok(sup_weighted_error(&ep, p, alpha));
    }
    let aq = alpha * q;
    let qp = q / p;
    let mut total = 0.0;
    for &(a, b, vp, gb) in &ep.segments {
        let g = |s: f64| (gb + vp * (b - s)).max(0.0);
        let part = if a == 0.0 && aq < 1.0 {
            // u = σ^{αq} removes the σ^{αq−1} endpoint singularity
            let inv = 1.0 / aq;
            integrate(|u: f64| g(u.powf(inv)).powf(qp), 0.0, b.powf(aq), quad).value / aq
        } else {
            integrate(|s: f64| s.powf(aq - 1.0) * g(s).powf(qp), a, b, quad).value
        };
        total += part;
    }
    if let Some((t0, k, s)) = ep.tail {
        total += power_integral(k.powf(q), q * (alpha + s) - 1.0, t0, f64::INFINITY);
    }
    Ok(total.powf(1.0 / q))
}

/// `sup_σ σ^α E_σ(f)_p`, maximised analytically on each segment.
pub fn sup_weighted_error_of(profile: &RearrangementProfile, p: f64, alpha: f64) -> Result<f64> {
    check_exponent(p)?;
    check_exponent(alpha)?;
    if profile.is_zero() {
        return Ok(0.0);
    }
    let ep = ErrorProfile::new(profile, p);
    if ep.diverges {
        return Ok(f64::INFINITY);
    }
    Ok(sup_weighted_error(&ep, p, alpha))
}

fn sup_weighted_error(ep: &ErrorProfile, p: f64, alpha: f64) -> f64 {
    let ap = alpha * p;
    let weighted = |s: f64, g: f64| s.powf(alpha) * g.max(0.0).powf(1.0 / p);
    let mut best: f64 = 0.0;
    for &(a, b, vp, gb) in &ep.segments {
        // φ(σ) = σ^{αp}(A − Bσ) with A = G(b) + v^p b, B = v^p
        best = best.max(weighted(b, gb));
        if a > 0.0 {
            best = best.max(weighted(a, gb + vp * (b - a)));
        }
        if vp > 0.0 {
            let crit = ap * (gb + vp * b) / ((ap + 1.0) * vp);
            if crit > a && crit < b {
                best = best.max(weighted(crit, gb + vp * (b - crit)));
            }
        }
    }
    if let Some((t0, k, s)) = ep.tail {
        let slope = alpha + s;
        if slope > 0.0 {
            return f64::INFINITY;
        }
        best = best.max(if slope == 0.0 { k } else { k * t0.powf(slope) });
    }
    best
}
