//! Weighted Hardy inequality for `φ(t) = t^r ϕ(t)` with `ϕ` nonincreasing:
//! `∫₀^∞ (σ^{-θ} ∫₀^σ φ(t) dt/t)^q dσ/σ` against `∫₀^∞ (t^{-θ} φ(t))^q dt/t`.

use std::fmt;

use super::report::CheckReport;
use crate::error::{domain, Error, Result};
use crate::norms::{integrate, QuadratureSpec};
use crate::profile::{power_integral, RearrangementProfile};

type Func = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// Nonnegative nonincreasing function on `(0, ∞)`.
///
/// `breakpoints` mark jumps or kinks and become quadrature knots. The function
/// may vanish beyond `support_end`, or equal `c·t^{-γ}` beyond `T` when a power
/// tail is given; both let the outer integrals close analytically.
pub struct MonotoneFunction {
    f: Func,
    breakpoints: Vec<f64>,
    support_end: Option<f64>,
    tail: Option<(f64, f64, f64)>,
    label: String,
}

impl fmt::Debug for MonotoneFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MonotoneFunction")
            .field("label", &self.label)
            .field("breakpoints", &self.breakpoints)
            .field("support_end", &self.support_end)
            .field("tail", &self.tail)
            .finish()
    }
}

impl MonotoneFunction {
    pub fn new(label: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            f: Box::new(f),
            breakpoints: Vec::new(),
            support_end: None,
            tail: None,
            label: label.into(),
        }
    }

    pub fn zero() -> Self {
        Self::new("0", |_| 0.0).with_support_end(1.0)
    }

    pub fn with_breakpoints(mut self, mut points: Vec<f64>) -> Self {
        points.retain(|x| *x > 0.0 && x.is_finite());
        points.sort_by(f64::total_cmp);
        points.dedup();
        self.breakpoints = points;
        self
    }

    /// `ϕ = 0` on `[end, ∞)`.
    pub fn with_support_end(mut self, end: f64) -> Self {
        self.support_end = Some(end);
        self
    }

    /// `ϕ(t) = coeff·t^{-exponent}` on `[start, ∞)`.
    pub fn with_power_tail(mut self, start: f64, coeff: f64, exponent: f64) -> Self {
        self.tail = Some((start, coeff, exponent));
        self
    }

    /// `f*` as a function.
    pub fn from_profile(profile: &RearrangementProfile) -> Self {
        let owned = profile.clone();
        let mut out = Self::new("profile", move |t| owned.value_at(t))
            .with_breakpoints(profile.breakpoints());
        out = match profile.tail() {
            Some(t) => out.with_power_tail(t.t_start, t.coeff, t.exponent),
            None => out.with_support_end(profile.support_measure().max(f64::MIN_POSITIVE)),
        };
        out
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, t: f64) -> f64 {
        if self.support_end.is_some_and(|s| t >= s) {
            return 0.0;
        }
        match self.tail {
            Some((start, c, g)) if t >= start => c * t.powf(-g),
            _ => (self.f)(t),
        }
    }

    /// Where the analytic closure starts, if any.
    fn end(&self) -> Option<f64> {
        self.support_end.or(self.tail.map(|t| t.0))
    }

    /// Sorted quadrature knots: breakpoints below the closure point, then the
    /// closure point itself; `[1]` when nothing else is known.
    fn knots(&self) -> Vec<f64> {
        let end = self.end();
        let mut k: Vec<f64> = self
            .breakpoints
            .iter()
            .copied()
            .filter(|b| end.is_none_or(|e| *b < e))
            .collect();
        k.extend(end);
        if k.is_empty() {
            k.push(1.0);
        }
        k
    }

    /// Samples on `2^{k/8}`, `|k| ≤ 240`, and on both sides of every knot.
    fn validate(&self) -> Result<()> {
        let mut xs: Vec<f64> = (-240..=240)
            .map(|k| 2f64.powf(f64::from(k) / 8.0))
            .collect();
        for b in self.knots() {
            xs.push(b * (1.0 - 1e-9));
            xs.push(b * (1.0 + 1e-9));
        }
        xs.sort_by(f64::total_cmp);
        let mut prev = f64::INFINITY;
        for x in xs {
            let v = self.eval(x);
            if !(v >= 0.0) {
                return Err(Error::Precondition(format!(
                    "{}: value {v} at t = {x} is not >= 0",
                    self.label
                )));
            }
            if v > prev * (1.0 + 1e-12) {
                return Err(Error::Precondition(format!(
                    "{}: increases at t = {x} ({prev} -> {v})",
                    self.label
                )));
            }
            prev = v;
        }
        Ok(())
    }

    fn is_zero_near_origin(&self) -> bool {
        self.eval(1e-300) == 0.0
    }
}

struct Hardy<'a> {
    phi: &'a MonotoneFunction,
    r: f64,
    theta: f64,
    q: f64,
    quad: &'a QuadratureSpec,
    knots: Vec<f64>,
    /// `Φ(knot)` for every knot
    cumulative: Vec<f64>,
}

impl<'a> Hardy<'a> {
    fn new(
        phi: &'a MonotoneFunction,
        r: f64,
        theta: f64,
        q: f64,
        quad: &'a QuadratureSpec,
    ) -> Self {
        let knots = phi.knots();
        let mut h = Self {
            phi,
            r,
            theta,
            q,
            quad,
            knots,
            cumulative: Vec::new(),
        };
        let mut acc = 0.0;
        let mut prev = 0.0;
        let mut cumulative = Vec::with_capacity(h.knots.len());
        for &k in &h.knots {
            acc += h.inner_segment(prev, k);
            cumulative.push(acc);
            prev = k;
        }
        h.cumulative = cumulative;
        h
    }

    /// `∫_a^b t^{r−1} ϕ(t) dt` for `[a, b]` inside one knot interval.
    fn inner_segment(&self, a: f64, b: f64) -> f64 {
        let r = self.r;
        if a == 0.0 {
            // w = t^r
            let inv = 1.0 / r;
            integrate(
                |w: f64| self.phi.eval(w.powf(inv)),
                0.0,
                b.powf(r),
                self.quad,
            )
            .value
                / r
        } else {
            integrate(|t: f64| t.powf(r - 1.0) * self.phi.eval(t), a, b, self.quad).value
        }
    }

    /// `∫_a^σ t^{r−1} ϕ(t) dt` over dyadic cells `[x, 2x]`, so that mass near
    /// `a` is resolved even when `σ/a` is huge.
    fn inner_far(&self, a: f64, sigma: f64) -> f64 {
        let mut total = 0.0;
        let mut lo = a;
        while lo < sigma {
            let hi = (2.0 * lo).min(sigma);
            total += self.inner_segment(lo, hi);
            if self.phi.eval(hi) == 0.0 {
                break;
            }
            lo = hi;
        }
        total
    }

    /// `Φ(σ) = ∫₀^σ t^{r−1} ϕ(t) dt`.
    fn big_phi(&self, sigma: f64) -> f64 {
        let idx = self.knots.partition_point(|k| *k <= sigma);
        if idx == self.knots.len() {
            let last = *self.knots.last().expect("nonempty");
            let base = self.cumulative[idx - 1];
            return match (self.phi.support_end, self.phi.tail) {
                (Some(_), _) => base,
                (None, Some((_, c, g))) => base + power_integral(c, self.r - 1.0 - g, last, sigma),
                (None, None) => base + self.inner_far(last, sigma),
            };
        }
        let (start, base) = if idx == 0 {
            (0.0, 0.0)
        } else {
            (self.knots[idx - 1], self.cumulative[idx - 1])
        };
        base + self.inner_segment(start, sigma)
    }

    fn lhs(&self) -> f64 {
        let (r, theta, q) = (self.r, self.theta, self.q);
        let tq = theta * q;
        let c = (r - theta) * q;
        let k0 = self.knots[0];
        // σ^{-θq−1}Φ^q = σ^{c−1}(σ^{-r}Φ)^q, then u = σ^c
        let mut total = integrate(
            |u: f64| {
                let s = u.powf(1.0 / c);
                if s == 0.0 {
                    return 0.0;
                }
                (self.big_phi(s) * s.powf(-r)).powf(q)
            },
            0.0,
            k0.powf(c),
            self.quad,
        )
        .value
            / c;
        for w in self.knots.windows(2) {
            total += integrate(
                |s: f64| s.powf(-tq - 1.0) * self.big_phi(s).powf(q),
                w[0],
                w[1],
                self.quad,
            )
            .value;
        }
        let last = *self.knots.last().expect("nonempty");
        total += match (self.phi.support_end, self.phi.tail) {
            (Some(_), _) => self.big_phi(last).powf(q) * last.powf(-tq) / tq,
            (None, Some((_, _, g))) if r - g >= theta => f64::INFINITY,
            (None, tail) => {
                // Φ grows at most like σ^{g}, g = max(r − γ, 0); u = σ^{-e} with
                // e = (θ − g)q leaves the bounded integrand (σ^{-g}Φ)^q
                let g = tail.map_or(0.0, |(_, _, gamma)| (r - gamma).max(0.0));
                let e = (theta - g) * q;
                let inv = -1.0 / e;
                integrate(
                    |u: f64| {
                        let s = u.powf(inv);
                        if s.is_infinite() {
                            return 0.0;
                        }
                        (self.big_phi(s) * s.powf(-g)).powf(q)
                    },
                    0.0,
                    last.powf(-e),
                    self.quad,
                )
                .value
                    / e
            }
        };
        total
    }

    fn rhs(&self) -> f64 {
        let (r, theta, q) = (self.r, self.theta, self.q);
        let c = (r - theta) * q;
        let k0 = self.knots[0];
        let inv = 1.0 / c;
        let mut total = integrate(
            |u: f64| self.phi.eval(u.powf(inv)).powf(q),
            0.0,
            k0.powf(c),
            self.quad,
        )
        .value
            / c;
        for w in self.knots.windows(2) {
            total += integrate(
                |t: f64| t.powf(c - 1.0) * self.phi.eval(t).powf(q),
                w[0],
                w[1],
                self.quad,
            )
            .value;
        }
        let last = *self.knots.last().expect("nonempty");
        total += match (self.phi.support_end, self.phi.tail) {
            (Some(_), _) => 0.0,
            (None, Some((_, coeff, g))) => {
                power_integral(coeff.powf(q), c - g * q - 1.0, last, f64::INFINITY)
            }
            (None, None) => {
                // u = t^{-θq}, integrand (t^r ϕ(t))^q
                let tq = theta * q;
                let inv = -1.0 / tq;
                integrate(
                    |u: f64| {
                        let t = u.powf(inv);
                        if t.is_infinite() {
                            return 0.0;
                        }
                        (t.powf(r) * self.phi.eval(t)).powf(q)
                    },
                    0.0,
                    last.powf(-tq),
                    self.quad,
                )
                .value
                    / tq
            }
        };
        total
    }
}

/// Computes both sides of the Hardy inequality (raised to the power `q`, as
/// integrals) and passes when `rhs < ∞` implies `lhs < ∞`. No constant is
/// asserted.
pub fn check_hardy(
    phi: &MonotoneFunction,
    r: f64,
    theta: f64,
    q: f64,
    quad: &QuadratureSpec,
) -> Result<CheckReport> {
    for (name, v) in [("r", r), ("theta", theta), ("q", q)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(domain(format!("{name} must be finite and > 0, got {v}")));
        }
    }
    phi.validate()?;
    let inputs = format!("phi={} r={r} theta={theta} q={q}", phi.label);
    let (lhs, rhs) = if phi.is_zero_near_origin() {
        (0.0, 0.0)
    } else if r <= theta {
        // ϕ ≥ ϕ(1) > 0 near 0 makes both integrands ≍ σ^{(r−θ)q−1}
        (f64::INFINITY, f64::INFINITY)
    } else {
        let h = Hardy::new(phi, r, theta, q, quad);
        (h.lhs(), h.rhs())
    };
    let mut rep = CheckReport::inequality("hardy", lhs, rhs, None, inputs);
    rep.pass = rhs.is_infinite() || lhs.is_finite();
    Ok(rep)
}
