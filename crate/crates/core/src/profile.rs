//! Decreasing rearrangements in canonical form.
//!
//! A [`RearrangementProfile`] is a nonincreasing, right-continuous function on
//! `(0, ∞)` made of finitely many constant pieces tiling `[0, T)` and an
//! optional power tail `c·t^{-γ}` on `[T, ∞)`. Every moment and error used by
//! the rest of the crate has a closed form on this class.

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Error, Result};

/// A constant segment `f*(t) = value` for `t ∈ [t_start, t_end)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePiece {
    pub t_start: f64,
    pub t_end: f64,
    pub value: f64,
}

impl ProfilePiece {
    pub fn new(t_start: f64, t_end: f64, value: f64) -> Result<Self> {
        if !(t_start.is_finite() && t_end.is_finite()) || t_start < 0.0 || t_start >= t_end {
            return Err(invalid(format!("bad piece range [{t_start}, {t_end})")));
        }
        if !value.is_finite() || value < 0.0 {
            return Err(invalid(format!(
                "piece value must be finite and >= 0, got {value}"
            )));
        }
        Ok(Self {
            t_start,
            t_end,
            value,
        })
    }

    pub fn len(&self) -> f64 {
        self.t_end - self.t_start
    }
}

/// `f*(t) = coeff · t^{-exponent}` for `t ≥ t_start`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTail {
    pub t_start: f64,
    pub coeff: f64,
    pub exponent: f64,
}

impl PowerTail {
    pub fn new(t_start: f64, coeff: f64, exponent: f64) -> Result<Self> {
        if !(t_start.is_finite() && t_start > 0.0) {
            return Err(invalid(format!(
                "tail start must be finite and > 0, got {t_start}"
            )));
        }
        if !(coeff.is_finite() && coeff > 0.0) {
            return Err(invalid(format!(
                "tail coefficient must be finite and > 0, got {coeff}"
            )));
        }
        if !(exponent.is_finite() && exponent > 0.0) {
            return Err(invalid(format!(
                "tail exponent must be finite and > 0, got {exponent}"
            )));
        }
        let tail = Self {
            t_start,
            coeff,
            exponent,
        };
        let head = tail.value_at(t_start);
        if !(head.is_finite() && head > 0.0) {
            return Err(invalid(
                "tail value at its start is not finite and positive",
            ));
        }
        Ok(tail)
    }

    pub fn value_at(&self, t: f64) -> f64 {
        self.coeff * t.powf(-self.exponent)
    }

    /// Value at the junction, `c·T^{-γ}`.
    pub fn head_value(&self) -> f64 {
        self.value_at(self.t_start)
    }

    /// `∫_lo^hi (c t^{-γ})^p dt` with `T ≤ lo < hi ≤ ∞`; `+∞` on divergence.
    pub(crate) fn p_moment(&self, lo: f64, hi: f64, p: f64) -> f64 {
        power_integral(self.coeff.powf(p), -self.exponent * p, lo, hi)
    }
}

/// `∫_lo^hi k·t^{s} dt` for `0 < lo < hi ≤ ∞`, `+∞` when divergent.
///
/// The logarithmic case `s = -1` is handled symbolically. Uses `expm1` so that
/// exponents close to `-1` do not cancel catastrophically.
pub(crate) fn power_integral(k: f64, s: f64, lo: f64, hi: f64) -> f64 {
    if k == 0.0 || lo >= hi {
        return 0.0;
    }
    let e = s + 1.0;
    if hi.is_infinite() {
        return if e < 0.0 {
            k * lo.powf(e) / -e
        } else {
            f64::INFINITY
        };
    }
    let log_ratio = (hi / lo).ln();
    if e == 0.0 {
        return k * log_ratio;
    }
    k * lo.powf(e) * (e * log_ratio).exp_m1() / e
}

/// Canonical nonincreasing step-plus-power-tail function on `(0, ∞)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProfileJson", into = "ProfileJson")]
pub struct RearrangementProfile {
    pieces: Vec<ProfilePiece>,
    tail: Option<PowerTail>,
}

impl RearrangementProfile {
    /// Validates contiguity and monotonicity.
    ///
    /// An empty piece list with a tail starting at `T` is completed by the
    /// constant piece `[0, T)` at the tail's head value.
    pub fn new(mut pieces: Vec<ProfilePiece>, tail: Option<PowerTail>) -> Result<Self> {
        if pieces.is_empty() {
            if let Some(tail) = &tail {
                pieces.push(ProfilePiece::new(0.0, tail.t_start, tail.head_value())?);
            }
        }
        if let Some(first) = pieces.first() {
            if first.t_start != 0.0 {
                return Err(invalid(format!(
                    "first piece must start at 0, got {}",
                    first.t_start
                )));
            }
        }
        for w in pieces.windows(2) {
            if w[0].t_end != w[1].t_start {
                return Err(invalid(format!(
                    "pieces are not contiguous: {} != {}",
                    w[0].t_end, w[1].t_start
                )));
            }
            if w[1].value > w[0].value {
                return Err(invalid(format!(
                    "values must be nonincreasing: {} then {}",
                    w[0].value, w[1].value
                )));
            }
        }
        if let Some(tail) = &tail {
            let last = pieces.last().expect("completed above");
            if last.t_end != tail.t_start {
                return Err(invalid(format!(
                    "tail starts at {} but pieces end at {}",
                    tail.t_start, last.t_end
                )));
            }
            let head = tail.head_value();
            if last.value < head * (1.0 - 1e-12) {
                return Err(invalid(format!(
                    "tail head value {head} exceeds last piece value {}",
                    last.value
                )));
            }
        }
        Ok(Self { pieces, tail })
    }

    /// Convenience constructor from `(t_start, t_end, value)` triples.
    pub fn from_triples(
        triples: &[(f64, f64, f64)],
        tail: Option<(f64, f64, f64)>,
    ) -> Result<Self> {
        let pieces = triples
            .iter()
            .map(|&(a, b, v)| ProfilePiece::new(a, b, v))
            .collect::<Result<Vec<_>>>()?;
        let tail = tail.map(|(t, c, g)| PowerTail::new(t, c, g)).transpose()?;
        Self::new(pieces, tail)
    }

    /// The rearrangement of the zero function.
    pub fn zero() -> Self {
        Self {
            pieces: Vec::new(),
            tail: None,
        }
    }

    /// `1_{[0, len)}`.
    pub fn indicator(len: f64) -> Result<Self> {
        Self::from_triples(&[(0.0, len, 1.0)], None)
    }

    /// Pure power profile `t^{-γ}` for `t ≥ 1`, capped at 1 on `[0, 1)`.
    pub fn capped_power(exponent: f64) -> Result<Self> {
        Self::from_triples(&[(0.0, 1.0, 1.0)], Some((1.0, 1.0, exponent)))
    }

    pub fn pieces(&self) -> &[ProfilePiece] {
        &self.pieces
    }

    pub fn tail(&self) -> Option<&PowerTail> {
        self.tail.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.tail.is_none() && self.pieces.iter().all(|p| p.value == 0.0)
    }

    /// End of the last piece, `0` for the empty profile.
    pub fn pieces_end(&self) -> f64 {
        self.pieces.last().map_or(0.0, |p| p.t_end)
    }

    /// Measure of the support; `+∞` when a tail is present.
    pub fn support_measure(&self) -> f64 {
        if self.tail.is_some() {
            return f64::INFINITY;
        }
        self.pieces
            .iter()
            .rev()
            .find(|p| p.value > 0.0)
            .map_or(0.0, |p| p.t_end)
    }

    /// Piece endpoints where the profile can change value, in increasing order
    /// and excluding `0`.
    pub fn breakpoints(&self) -> Vec<f64> {
        self.pieces.iter().map(|p| p.t_end).collect()
    }

    /// `c·f*`, `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(domain(format!(
                "scale factor must be finite and > 0, got {c}"
            )));
        }
        let pieces = self
            .pieces
            .iter()
            .map(|p| ProfilePiece {
                value: p.value * c,
                ..*p
            })
            .collect();
        let tail = self.tail.map(|t| PowerTail {
            coeff: t.coeff * c,
            ..t
        });
        Self::new(pieces, tail)
    }

    /// `f*·1_{[0, s)}`: the rearrangement of the best approximant from `Σ_s`.
    ///
    /// Only representable when the cut falls inside the piece range; a cut
    /// inside the power tail is rejected.
    pub fn truncated(&self, s: f64) -> Result<Self> {
        if !(s > 0.0) {
            return Err(domain(format!("truncation point must be > 0, got {s}")));
        }
        if self.tail.is_some() && s > self.pieces_end() {
            return Err(domain(format!(
                "cannot truncate inside the power tail (s = {s} > {})",
                self.pieces_end()
            )));
        }
        let pieces = self
            .pieces
            .iter()
            .filter(|p| p.t_start < s)
            .map(|p| ProfilePiece {
                t_end: p.t_end.min(s),
                ..*p
            })
            .collect();
        Self::new(pieces, None)
    }

    /// `f*(t)` for `t > 0`.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(domain(format!("evaluate needs t > 0, got {t}")));
        }
        Ok(self.value_at(t))
    }

    pub(crate) fn value_at(&self, t: f64) -> f64 {
        let idx = self.pieces.partition_point(|p| p.t_end <= t);
        if let Some(piece) = self.pieces.get(idx) {
            return piece.value;
        }
        match &self.tail {
            Some(tail) => tail.value_at(t),
            None => 0.0,
        }
    }

    /// `μ{t : f*(t) > λ}`; `+∞` at `λ = 0` when a tail is present.
    pub fn distribution(&self, lambda: f64) -> Result<f64> {
        if !(lambda >= 0.0) {
            return Err(domain(format!(
                "distribution needs lambda >= 0, got {lambda}"
            )));
        }
        if let Some(tail) = &self.tail {
            if tail.head_value() > lambda {
                if lambda == 0.0 {
                    return Ok(f64::INFINITY);
                }
                return Ok((tail.coeff / lambda)
                    .powf(1.0 / tail.exponent)
                    .max(tail.t_start));
            }
        }
        let n = self.pieces.partition_point(|p| p.value > lambda);
        Ok(if n == 0 {
            0.0
        } else {
            self.pieces[n - 1].t_end
        })
    }

    /// `∫_a^b f*(t)^p dt` in closed form, `+∞` on divergence.
    pub fn p_moment(&self, a: f64, b: f64, p: f64) -> Result<f64> {
        if !(a >= 0.0 && a.is_finite()) || !(b > a) {
            return Err(domain(format!("p_moment needs 0 <= a < b, got [{a}, {b}]")));
        }
        check_exponent(p)?;
        Ok(self.moment_unchecked(a, b, p))
    }

    pub(crate) fn moment_unchecked(&self, a: f64, b: f64, p: f64) -> f64 {
        let mut total = 0.0;
        for piece in &self.pieces {
            if piece.t_end <= a {
                continue;
            }
            if piece.t_start >= b {
                break;
            }
            if piece.value > 0.0 {
                let len = piece.t_end.min(b) - piece.t_start.max(a);
                total += piece.value.powf(p) * len;
            }
        }
        if let Some(tail) = &self.tail {
            let lo = a.max(tail.t_start);
            if b > lo {
                total += tail.p_moment(lo, b, p);
            }
        }
        total
    }

    /// `E_σ(f)_p = (∫_σ^∞ f*(t)^p dt)^{1/p}`.
    pub fn approx_error(&self, sigma: f64, p: f64) -> Result<f64> {
        if !(sigma > 0.0) {
            return Err(domain(format!("approx_error needs sigma > 0, got {sigma}")));
        }
        check_exponent(p)?;
        if sigma.is_infinite() {
            return Ok(0.0);
        }
        Ok(self.error_unchecked(sigma, p))
    }

    pub(crate) fn error_unchecked(&self, sigma: f64, p: f64) -> f64 {
        self.moment_unchecked(sigma, f64::INFINITY, p).powf(1.0 / p)
    }
}

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("exponent must be finite and > 0, got {p}")))
    }
}

#[derive(Serialize, Deserialize)]
struct PieceJson {
    t0: f64,
    t1: f64,
    v: f64,
}

#[derive(Serialize, Deserialize)]
struct TailJson {
    #[serde(rename = "T")]
    t: f64,
    c: f64,
    gamma: f64,
}

#[derive(Serialize, Deserialize)]
struct ProfileJson {
    pieces: Vec<PieceJson>,
    #[serde(default)]
    tail: Option<TailJson>,
}

impl TryFrom<ProfileJson> for RearrangementProfile {
    type Error = Error;

    fn try_from(json: ProfileJson) -> Result<Self> {
        let pieces = json
            .pieces
            .iter()
            .map(|p| ProfilePiece::new(p.t0, p.t1, p.v))
            .collect::<Result<Vec<_>>>()?;
        let tail = json
            .tail
            .map(|t| PowerTail::new(t.t, t.c, t.gamma))
            .transpose()?;
        Self::new(pieces, tail)
    }
}

impl From<RearrangementProfile> for ProfileJson {
    fn from(profile: RearrangementProfile) -> Self {
        Self {
            pieces: profile
                .pieces
                .iter()
                .map(|p| PieceJson {
                    t0: p.t_start,
                    t1: p.t_end,
                    v: p.value,
                })
                .collect(),
            tail: profile.tail.map(|t| TailJson {
                t: t.t_start,
                c: t.coeff,
                gamma: t.exponent,
            }),
        }
    }
}

/// Exponent triple `(p, q, α)` with `p₁ = p/(αp + 1)`, i.e. `α = 1/p₁ − 1/p`.
///
/// When built from `p₁` directly, `alpha()` returns `r = 1/p₁ − 1/p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormParams {
    p: f64,
    q: f64,
    alpha: f64,
    p1: f64,
}

impl NormParams {
    /// `q` may be `f64::INFINITY`.
    pub fn from_alpha(p: f64, q: f64, alpha: f64) -> Result<Self> {
        check_exponent(p)?;
        check_q(q)?;
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(domain(format!("alpha must be finite and > 0, got {alpha}")));
        }
        let p1 = p / (alpha * p + 1.0);
        Ok(Self { p, q, alpha, p1 })
    }

    pub fn from_p1(p: f64, q: f64, p1: f64) -> Result<Self> {
        check_exponent(p)?;
        check_q(q)?;
        if !(p1 > 0.0 && p1 < p) {
            return Err(domain(format!("need 0 < p1 < p, got p1 = {p1}, p = {p}")));
        }
        let alpha = 1.0 / p1 - 1.0 / p;
        Ok(Self { p, q, alpha, p1 })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Same value as [`alpha`](Self::alpha), named for the K-functional role.
    pub fn r(&self) -> f64 {
        self.alpha
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn with_q(self, q: f64) -> Result<Self> {
        check_q(q)?;
        Ok(Self { q, ..self })
    }
}

fn check_q(q: f64) -> Result<()> {
    if q > 0.0 && !q.is_nan() {
        Ok(())
    } else {
        Err(domain(format!("q must be > 0 or infinite, got {q}")))
    }
}

/// Parses an exponent, accepting `inf`/`infinity` for `+∞`.
pub fn parse_exponent(s: &str) -> Result<f64> {
    match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinity" | "+inf" => Ok(f64::INFINITY),
        other => other
            .parse::<f64>()
            .map_err(|e| Error::Parse(format!("bad exponent {s:?}: {e}"))),
    }
}
