//! Two-sided bounds for `K(f, t; L_p, L_{p₁,∞})` and the real-interpolation norm.
//!
//! The exact K-functional is never computed. The lower bound comes from the
//! direct estimate `E_σ(f)_p ≤ C·K(f, σ^{-r})`; the upper bounds evaluate
//! admissible decompositions `f = (f − f·1_{A_s}) + f·1_{A_s}`.

use std::fmt;

use crate::error::{domain, Result};
use crate::norms::{weak_lorentz_norm, ErrorProfile};
use crate::profile::{NormParams, RearrangementProfile};

/// Certified bracket `[lower, upper]` with the decomposition that achieved the
/// upper value.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub lower: f64,
    pub upper: f64,
    pub witness: Witness,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Witness {
    /// `f₁ = f·1_{A_s}` with `μ(A_s) = measure`; `s = 0` means `f₀ = f`.
    Split { measure: f64 },
    /// Interpolation norm evaluated on `t = 2^j`, `j ∈ [j_min, j_max]`.
    DyadicGrid { j_min: i32, j_max: i32 },
    /// The zero function.
    Zero,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Split { measure } if measure.is_infinite() => write!(f, "f0 = 0, f1 = f"),
            Witness::Split { measure } if *measure == 0.0 => write!(f, "f0 = f, f1 = 0"),
            Witness::Split { measure } => write!(f, "f1 = f restricted to A_s, s = {measure}"),
            Witness::DyadicGrid { j_min, j_max } => {
                write!(f, "dyadic grid t = 2^j, j in [{j_min}, {j_max}]")
            }
            Witness::Zero => write!(f, "zero function"),
        }
    }
}

/// Constant `C` in `E_σ(f)_p ≤ C (‖f₀‖_p + σ^{-r}‖f₁‖_{p₁,∞})`.
///
/// `(rp)^{-1/p}` is the Jackson constant for `f₁`; below `p = 1` the `L_p`
/// quasi-triangle inequality adds `2^{1/p−1}`.
pub fn direct_constant(params: &NormParams) -> f64 {
    let (p, r) = (params.p(), params.r());
    let jackson = (r * p).powf(-1.0 / p).max(1.0);
    jackson * 2f64.powf(1.0 / p - 1.0).max(1.0)
}

/// Constant `C` in `k_upper_truncation(f, 2^{-mr}) ≤ C · k_upper_dyadic(f, m)`.
///
/// Follows from `t^{1/p₁} f*(t) ≤ 2^{1/p} t^r E_{t/2}(f)_p`, which bounds
/// `‖f·1_{A_{2^m}}‖_{p₁,∞}` by `2^{1/p₁−1}` times the dyadic sum.
pub fn chain_constant(params: &NormParams) -> f64 {
    2f64.powf(1.0 / params.p1() - 1.0).max(1.0)
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("t must be finite and > 0, got {t}")))
    }
}

/// `E_{t^{-1/r}}(f)_p / C_dir`, a lower bound for `K(f, t)`.
pub fn k_lower(profile: &RearrangementProfile, t: f64, params: &NormParams) -> Result<f64> {
    check_t(t)?;
    let sigma = t.powf(-1.0 / params.r());
    let err = if sigma == 0.0 {
        profile
            .moment_unchecked(0.0, f64::INFINITY, params.p())
            .powf(1.0 / params.p())
    } else if sigma.is_infinite() {
        0.0
    } else {
        profile.error_unchecked(sigma, params.p())
    };
    Ok(err / direct_constant(params))
}

/// Objective `J(s) = E_s(f)_p + t·‖f·1_{A_s}‖_{p₁,∞}` evaluated piecewise.
struct SplitObjective {
    ep: ErrorProfile,
    /// per piece: (a, b, v, sup of u^{1/p₁} f*(u) over u < a)
    heads: Vec<(f64, f64, f64, f64)>,
    inv_p: f64,
    inv_p1: f64,
    lp: f64,
    weak_full: f64,
}

impl SplitObjective {
    fn new(profile: &RearrangementProfile, params: &NormParams) -> Self {
        let (p, p1) = (params.p(), params.p1());
        let ep = ErrorProfile::new(profile, p);
        let inv_p1 = 1.0 / p1;
        let mut running: f64 = 0.0;
        let heads = profile
            .pieces()
            .iter()
            .map(|pc| {
                let before = running;
                if pc.value > 0.0 {
                    running = running.max(pc.t_end.powf(inv_p1) * pc.value);
                }
                (pc.t_start, pc.t_end, pc.value, before)
            })
            .collect();
        let lp = profile
            .moment_unchecked(0.0, f64::INFINITY, p)
            .powf(1.0 / p);
        let weak_full = weak_lorentz_norm(profile, p1).unwrap_or(f64::INFINITY);
        Self {
            ep,
            heads,
            inv_p: 1.0 / p,
            inv_p1,
            lp,
            weak_full,
        }
    }

    /// `J(s)` for `s` inside piece `k` (`a < s ≤ b`).
    fn on_piece(&self, k: usize, s: f64, t: f64) -> f64 {
        let (_, b, v, w_before) = self.heads[k];
        let (_, _, vp, gb) = self.ep.segments[k];
        let err = (gb + vp * (b - s)).max(0.0).powf(self.inv_p);
        let weak = if v > 0.0 {
            w_before.max(s.powf(self.inv_p1) * v)
        } else {
            w_before
        };
        err + t * weak
    }

    /// `J(s)` for `s ≥ T` in the tail.
    fn on_tail(&self, s: f64, t: f64, profile: &RearrangementProfile) -> f64 {
        let tail = profile.tail().expect("tail present");
        let (t0, k, slope) = self.ep.tail.expect("convergent tail");
        let err = k * s.powf(slope);
        let w_head = self
            .heads
            .last()
            .map_or(0.0, |h| h.3.max(h.1.powf(self.inv_p1) * h.2));
        let w_tail = tail.coeff * s.max(t0).powf(self.inv_p1 - tail.exponent);
        let w = if self.inv_p1 > tail.exponent {
            w_head.max(w_tail)
        } else {
            w_head
        };
        err + t * w
    }
}

fn golden_min<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if hi - lo <= 1e-10 * hi.abs().max(lo.abs()) {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Upper bound for `K(f, t)` from the truncation family.
///
/// Minimises over `s ∈ {0} ∪ breakpoints ∪ golden-section interior points`,
/// plus the tail range and `s = ∞` when a tail is present. `lower` is
/// [`k_lower`] at the same `t`.
pub fn k_upper_truncation(
    profile: &RearrangementProfile,
    t: f64,
    params: &NormParams,
) -> Result<BoundReport> {
    check_t(t)?;
    let lower = k_lower(profile, t, params)?;
    if profile.is_zero() {
        return Ok(BoundReport {
            lower,
            upper: 0.0,
            witness: Witness::Zero,
        });
    }
    let obj = SplitObjective::new(profile, params);
    let mut best = (0.0, obj.lp);
    let mut consider = |s: f64, value: f64| {
        if value < best.1 {
            best = (s, value);
        }
    };
    if !obj.ep.diverges {
        for k in 0..obj.heads.len() {
            let (a, b, _, _) = obj.heads[k];
            consider(b, obj.on_piece(k, b, t));
            let (s, v) = golden_min(|s| obj.on_piece(k, s, t), a, b);
            consider(s, v);
        }
        if profile.tail().is_some() {
            let (t0, _, _) = obj.ep.tail.expect("convergent tail");
            let (lo, hi) = (t0.ln(), t0.ln() + 80.0);
            let (u, v) = golden_min(|u| obj.on_tail(u.exp(), t, profile), lo, hi);
            consider(u.exp(), v);
        }
    }
    // s = ∞: f₀ = 0
    consider(f64::INFINITY, t * obj.weak_full);
    Ok(BoundReport {
        lower,
        upper: best.1,
        witness: Witness::Split { measure: best.0 },
    })
}

/// Dyadic-chain upper bound at `t = 2^{-mr}`:
/// `E_{2^m}(f)_p + 2^{-mr} Σ_{k ≤ m} 2^{kr}·2·E_{2^{k−1}}(f)_p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DyadicBound {
    pub value: f64,
    /// See [`chain_constant`].
    pub chain_constant: f64,
    /// Smallest `k` summed before the remainder fell below tolerance.
    pub k_min: i32,
}

const DYADIC_SPAN: i32 = 2000;

/// Sums downward from `k = m` until the remaining terms are provably below
/// `rel_tol` times the running sum (terms are bounded by `2^{kr}·2‖f‖_p`).
pub fn k_upper_dyadic(
    profile: &RearrangementProfile,
    m: i32,
    params: &NormParams,
    rel_tol: f64,
) -> Result<DyadicBound> {
    if !(rel_tol > 0.0) {
        return Err(domain(format!("rel_tol must be > 0, got {rel_tol}")));
    }
    let (p, r) = (params.p(), params.r());
    let chain = chain_constant(params);
    let lp = profile
        .moment_unchecked(0.0, f64::INFINITY, p)
        .powf(1.0 / p);
    if lp == 0.0 {
        return Ok(DyadicBound {
            value: 0.0,
            chain_constant: chain,
            k_min: m,
        });
    }
    if lp.is_infinite() {
        return Ok(DyadicBound {
            value: f64::INFINITY,
            chain_constant: chain,
            k_min: m,
        });
    }
    let error_at = |k: i32| {
        let sigma = 2f64.powi(k);
        if sigma == 0.0 {
            lp
        } else {
            profile.error_unchecked(sigma, p)
        }
    };
    let head = error_at(m);
    let remainder_factor = 2.0 * lp * 2f64.powf(-r) / (1.0 - 2f64.powf(-r));
    let mut sum = 0.0;
    let mut k = m;
    while k > m - DYADIC_SPAN {
        let weight = 2f64.powf(f64::from(k - m) * r);
        sum += weight * 2.0 * error_at(k - 1);
        if sum > 0.0 && remainder_factor * weight < rel_tol * sum {
            break;
        }
        k -= 1;
    }
    Ok(DyadicBound {
        value: head + sum,
        chain_constant: chain,
        k_min: k,
    })
}

/// Bracket for `‖f‖_{(L_p, L_{p₁,∞})_{θ,q}} = (∫₀^∞ [t^{-θ} K(f,t)]^q dt/t)^{1/q}`.
///
/// On each dyadic cell `[2^j, 2^{j+1}]` monotonicity of `K` gives
/// `K(2^j) ≤ K(t) ≤ K(2^{j+1})`, evaluated with [`k_lower`] and
/// [`k_upper_truncation`] respectively. Beyond the grid the lower bound uses
/// `K(t) ≥ (t/s) K(s)` for `t < s` and `K(t) ≥ K(S)` for `t > S`; the upper
/// bound uses `K(t) ≤ t‖f‖_{p₁,∞}` and `K(t) ≤ ‖f‖_p`. When `f ∉ L_{p₁,∞}` the
/// small-`t` upper closure extrapolates the last cells geometrically.
pub fn interp_norm_bounds(
    profile: &RearrangementProfile,
    theta: f64,
    q: f64,
    params: &NormParams,
) -> Result<BoundReport> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(domain(format!("theta must lie in (0, 1), got {theta}")));
    }
    if !(q > 0.0) {
        return Err(domain(format!("q must be > 0, got {q}")));
    }
    if profile.is_zero() {
        return Ok(BoundReport {
            lower: 0.0,
            upper: 0.0,
            witness: Witness::Zero,
        });
    }
    let (j_min, j_max) = dyadic_range(profile, params);
    let ts: Vec<f64> = (j_min..=j_max).map(|j| 2f64.powi(j)).collect();
    let lows = ts
        .iter()
        .map(|&t| k_lower(profile, t, params))
        .collect::<Result<Vec<_>>>()?;
    let ups = ts
        .iter()
        .map(|&t| k_upper_truncation(profile, t, params).map(|b| b.upper))
        .collect::<Result<Vec<_>>>()?;
    let lp = profile
        .moment_unchecked(0.0, f64::INFINITY, params.p())
        .powf(1.0 / params.p());
    let weak = weak_lorentz_norm(profile, params.p1())?;
    let (s_lo, s_hi) = (ts[0], ts[ts.len() - 1]);
    let n = ts.len();
    let witness = Witness::DyadicGrid { j_min, j_max };

    // weighted samples t^{-θ}K at the grid, lower uses the cell's left end and
    // upper the right end, both weighted by the left end
    let low_cells: Vec<f64> = (0..n - 1).map(|i| lows[i] * ts[i].powf(-theta)).collect();
    let up_cells: Vec<f64> = (0..n - 1)
        .map(|i| ups[i + 1] * ts[i].powf(-theta))
        .collect();

    if q.is_infinite() {
        let lower = (0..n)
            .map(|i| lows[i] * ts[i].powf(-theta))
            .fold(0.0, f64::max);
        let mut upper = up_cells.iter().copied().fold(0.0, f64::max);
        upper = upper.max(lp * s_hi.powf(-theta));
        let small = if weak.is_finite() {
            weak * s_lo.powf(1.0 - theta)
        } else if up_cells.len() > 1 && up_cells[0] < up_cells[1] {
            up_cells[0]
        } else {
            f64::INFINITY
        };
        upper = upper.max(small);
        return Ok(BoundReport {
            lower,
            upper: upper.max(lower),
            witness,
        });
    }

    let tq = theta * q;
    let cell_weight = (1.0 - 2f64.powf(-tq)) / tq;
    let mut lower: f64 = low_cells.iter().map(|v| v.powf(q) * cell_weight).sum();
    // t < s_lo: K(t) ≥ (t/s) K(s)
    lower += (lows[0] / s_lo).powf(q) * s_lo.powf((1.0 - theta) * q) / ((1.0 - theta) * q);
    // t > s_hi: K(t) ≥ K(s_hi)
    lower += (lows[n - 1] * s_hi.powf(-theta)).powf(q) / tq;

    let mut upper: f64 = up_cells.iter().map(|v| v.powf(q) * cell_weight).sum();
    upper += (lp * s_hi.powf(-theta)).powf(q) / tq;
    upper += if weak.is_finite() {
        (weak * s_lo.powf(1.0 - theta)).powf(q) / ((1.0 - theta) * q)
    } else {
        let first = up_cells[0].powf(q) * cell_weight;
        let second = up_cells
            .get(1)
            .map_or(f64::INFINITY, |v| v.powf(q) * cell_weight);
        let ratio = first / second;
        if ratio < 1.0 {
            first * ratio / (1.0 - ratio)
        } else {
            f64::INFINITY
        }
    };
    let (lower, upper) = (lower.powf(1.0 / q), upper.powf(1.0 / q));
    Ok(BoundReport {
        lower,
        upper: upper.max(lower),
        witness,
    })
}

/// Grid covering `t = σ^{-r}` for `σ` between the first breakpoint and the
/// support end (or tail start), padded by 40 octaves on each side.
fn dyadic_range(profile: &RearrangementProfile, params: &NormParams) -> (i32, i32) {
    let r = params.r();
    let first = profile
        .pieces()
        .iter()
        .find(|pc| pc.value > 0.0)
        .map_or(1.0, |pc| pc.t_end);
    let last = profile.pieces_end().max(first);
    let lo = (-r * last.log2()).floor() as i32 - 40;
    let hi = (-r * first.log2()).ceil() as i32 + 40;
    (
        lo.max(-DYADIC_SPAN),
        hi.min(DYADIC_SPAN).max(lo.max(-DYADIC_SPAN) + 1),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1() -> RearrangementProfile {
        RearrangementProfile::capped_power(1.0).unwrap()
    }

    fn s1() -> RearrangementProfile {
        RearrangementProfile::from_triples(&[(0.0, 1.0, 3.0), (1.0, 3.0, 1.0)], None).unwrap()
    }

    fn params_2_1() -> NormParams {
        NormParams::from_p1(2.0, f64::INFINITY, 1.0).unwrap()
    }

    #[test]
    fn constants() {
        let params = params_2_1();
        assert_eq!(direct_constant(&params), 1.0);
        assert_eq!(chain_constant(&params), 1.0);
        let small_p = NormParams::from_alpha(0.5, 1.0, 1.0).unwrap();
        // (rp)^{-1/p} = 0.5^{-2} = 4, quasi-triangle 2^{1}
        assert_eq!(direct_constant(&small_p), 8.0);
    }

    #[test]
    fn k_lower_examples() {
        let params = params_2_1();
        let t = 4f64.powf(-0.5);
        assert!((k_lower(&p1(), t, &params).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(
            k_lower(&RearrangementProfile::zero(), 3.0, &params).unwrap(),
            0.0
        );
        let ind = RearrangementProfile::indicator(1.0).unwrap();
        // σ = t^{-2} ≥ 1
        assert_eq!(k_lower(&ind, 0.5, &params).unwrap(), 0.0);
        assert!(k_lower(&ind, 0.0, &params).is_err());
    }

    #[test]
    fn k_upper_truncation_example() {
        let rep = k_upper_truncation(&s1(), 1.0, &params_2_1()).unwrap();
        assert!((rep.upper - 3.0).abs() < 1e-12, "{rep:?}");
        assert_eq!(rep.witness, Witness::Split { measure: 3.0 });
        assert!(rep.lower <= rep.upper);
    }

    #[test]
    fn k_upper_limits() {
        let params = params_2_1();
        let lp = 11f64.sqrt();
        let big = k_upper_truncation(&s1(), 1e9, &params).unwrap();
        assert!((big.upper - lp).abs() < 1e-12);
        assert_eq!(big.witness, Witness::Split { measure: 0.0 });
        let tiny = k_upper_truncation(&s1(), 1e-9, &params).unwrap();
        assert!((tiny.upper - 3e-9).abs() < 1e-20);
    }

    #[test]
    fn k_upper_on_tail_profile() {
        let params = params_2_1();
        for t in [1e-3, 0.1, 1.0, 10.0] {
            let rep = k_upper_truncation(&p1(), t, &params).unwrap();
            assert!(rep.lower <= rep.upper * (1.0 + 1e-12));
            // f ∈ L_{1,∞} with norm 1, so f₀ = 0 already gives t
            assert!(rep.upper <= t * (1.0 + 1e-12));
        }
    }

    #[test]
    fn k_dyadic_indicator_oracle() {
        let params = params_2_1();
        let ind = RearrangementProfile::indicator(1.0).unwrap();
        let got = k_upper_dyadic(&ind, 0, &params, 1e-14).unwrap();
        // direct evaluation of the series: E_1 = 0, E_{2^{k-1}} = (1 − 2^{k−1})^{1/2}
        let mut want = 0.0;
        for k in (-200..=0).rev() {
            let kf = f64::from(k);
            want += 2f64.powf(kf / 2.0) * 2.0 * (1.0 - 2f64.powf(kf - 1.0)).sqrt();
        }
        assert!(
            (got.value - want).abs() < 1e-12 * want,
            "{} vs {want}",
            got.value
        );
        assert_eq!(got.chain_constant, 1.0);
    }

    #[test]
    fn k_dyadic_geometric_decay_and_zero() {
        let params = params_2_1();
        let ind = RearrangementProfile::indicator(1.0).unwrap();
        let far = k_upper_dyadic(&ind, 60, &params, 1e-14).unwrap();
        assert!(far.value < 1e-8);
        let zero = k_upper_dyadic(&RearrangementProfile::zero(), 3, &params, 1e-14).unwrap();
        assert_eq!(zero.value, 0.0);
    }

    #[test]
    fn chain_consistency() {
        let profiles = [s1(), RearrangementProfile::indicator(3.0).unwrap(), p1()];
        for params in [
            params_2_1(),
            NormParams::from_alpha(0.5, 1.0, 2.0).unwrap(),
            NormParams::from_alpha(4.0, 1.0, 0.25).unwrap(),
        ] {
            for prof in &profiles {
                for m in -6..=6 {
                    let t = 2f64.powf(-f64::from(m) * params.r());
                    let up = k_upper_truncation(prof, t, &params).unwrap().upper;
                    let chain = k_upper_dyadic(prof, m, &params, 1e-13).unwrap();
                    assert!(
                        up <= chain.chain_constant * chain.value * (1.0 + 1e-9),
                        "m={m}: {up} vs {chain:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn monotone_and_concave_shape() {
        let params = params_2_1();
        for prof in [s1(), p1()] {
            let mut prev_lo: f64 = 0.0;
            let mut prev_up: f64 = 0.0;
            let mut prev_ratio = f64::INFINITY;
            for j in -20..=20 {
                let t = 2f64.powi(j);
                let rep = k_upper_truncation(&prof, t, &params).unwrap();
                assert!(rep.lower >= prev_lo * (1.0 - 1e-12));
                assert!(rep.upper >= prev_up * (1.0 - 1e-12));
                assert!(rep.upper / t <= prev_ratio * (1.0 + 1e-9));
                prev_lo = rep.lower;
                prev_up = rep.upper;
                prev_ratio = rep.upper / t;
            }
        }
    }

    #[test]
    fn interp_bracket_basics() {
        let params = params_2_1();
        let zero = interp_norm_bounds(&RearrangementProfile::zero(), 0.5, 2.0, &params).unwrap();
        assert_eq!((zero.lower, zero.upper), (0.0, 0.0));
        for q in [1.0, 2.0, f64::INFINITY] {
            let rep = interp_norm_bounds(&s1(), 0.5, q, &params).unwrap();
            assert!(
                rep.lower > 0.0 && rep.lower <= rep.upper && rep.upper.is_finite(),
                "{rep:?}"
            );
            let doubled = interp_norm_bounds(&s1().scaled(2.0).unwrap(), 0.5, q, &params).unwrap();
            assert!((doubled.lower - 2.0 * rep.lower).abs() <= 1e-12 * rep.lower);
            assert!((doubled.upper - 2.0 * rep.upper).abs() <= 1e-12 * rep.upper);
        }
        assert!(interp_norm_bounds(&s1(), 1.0, 2.0, &params).is_err());
    }
}
