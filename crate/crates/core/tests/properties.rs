use lorentz_approx::kfunc::{interp_norm_bounds, k_upper_truncation};
use lorentz_approx::theorems::{check_quasi_triangle, family};
use lorentz_approx::{
    approx_space_norm, lorentz_norm, NormParams, QuadratureSpec, RearrangementProfile, StepFunction,
};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Disjoint translates: `(f + g)* (t) = f*(t/2)`, so the ratio is `2^{1/p−1}`.
#[test]
fn quasi_triangle_on_disjoint_translates() {
    let f = StepFunction::from_triples(&[(0.0, 1.0, 3.0), (1.0, 2.5, 1.0)]).unwrap();
    let g = StepFunction::from_triples(&[(10.0, 11.0, -3.0), (11.0, 12.5, 1.0)]).unwrap();
    let quad = QuadratureSpec::default();
    for p in [0.5, 1.0, 2.0, 4.0] {
        for q in [1.0, 2.0, f64::INFINITY] {
            let params = NormParams::from_alpha(p, q, 0.5).unwrap();
            let rep = check_quasi_triangle(&f, &g, &params, &quad).unwrap();
            let want = 2f64.powf(1.0 / p - 1.0);
            assert!(
                rel(rep.ratio, want) < 1e-9,
                "p={p} q={q}: {} vs {want}",
                rep.ratio
            );
            assert_eq!(rep.pass, p >= 1.0);
        }
    }
}

/// For `q = p`, Fubini gives `‖f‖_{A^α_{p,p}} = (αp)^{-1/p} ‖f‖_{p₁,p}`.
#[test]
fn approx_space_equals_scaled_lorentz_when_q_is_p() {
    let quad = QuadratureSpec::default();
    for p in [0.5, 1.0, 2.0, 4.0] {
        let fam = family::profile_family(11, p);
        for alpha in [0.25, 1.0] {
            let params = NormParams::from_alpha(p, p, alpha).unwrap();
            let c = (alpha * p).powf(-1.0 / p);
            for f in fam.iter().step_by(7) {
                let a = approx_space_norm(f, &params, &quad).unwrap();
                let l = lorentz_norm(f, params.p1(), p).unwrap();
                if l.is_finite() {
                    assert!(
                        rel(a, c * l) < 1e-9,
                        "p={p} alpha={alpha}: {a} vs {}",
                        c * l
                    );
                } else {
                    assert!(a.is_infinite());
                }
            }
        }
    }
}

#[test]
fn k_upper_over_t_is_nonincreasing_on_family() {
    let steps = family::step_family(5);
    for params in [
        NormParams::from_alpha(2.0, f64::INFINITY, 0.5).unwrap(),
        NormParams::from_alpha(0.5, f64::INFINITY, 1.0).unwrap(),
    ] {
        for f in steps.iter().take(60) {
            let prof = f.rearrange();
            let mut prev_up = 0.0;
            let mut prev_ratio = f64::INFINITY;
            for j in -20..=20 {
                let t = 2f64.powi(j);
                let up = k_upper_truncation(&prof, t, &params).unwrap().upper;
                assert!(up >= prev_up * (1.0 - 1e-12));
                assert!(up / t <= prev_ratio * (1.0 + 1e-9));
                prev_up = up;
                prev_ratio = up / t;
            }
        }
    }
}

/// `(L_p, L_{p₁,∞})_{θ,q} = L_{s,q}` with `1/s = (1−θ)/p + θ/p₁`: on dilated
/// indicators the bracket tracks the Lorentz norm within a fixed band.
#[test]
fn interpolation_bracket_tracks_lorentz_norm() {
    let params = NormParams::from_p1(2.0, 2.0, 1.0).unwrap();
    let theta = 0.5;
    let s = 1.0 / ((1.0 - theta) / 2.0 + theta / 1.0);
    let mut lows = Vec::new();
    let mut ups = Vec::new();
    for k in -4..=4 {
        let f = RearrangementProfile::indicator(2f64.powi(2 * k)).unwrap();
        let rep = interp_norm_bounds(&f, theta, 2.0, &params).unwrap();
        let l = lorentz_norm(&f, s, 2.0).unwrap();
        assert!(rep.lower > 0.0 && rep.lower <= rep.upper && rep.upper.is_finite());
        lows.push(rep.lower / l);
        ups.push(rep.upper / l);
    }
    // dilation by 4^k maps the grid t = 2^j onto itself, so the ratios agree
    for w in lows.windows(2).chain(ups.windows(2)) {
        assert!(rel(w[1], w[0]) < 1e-9, "{lows:?} {ups:?}");
    }
}
