//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{domain, Result};

/// Tolerance and subdivision limit for adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            max_depth: 60,
        }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, max_depth: u32) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol.is_finite()) {
            return Err(domain(format!(
                "rel_tol must be finite and > 0, got {rel_tol}"
            )));
        }
        if max_depth < 1 {
            return Err(domain("max_depth must be at least 1"));
        }
        Ok(Self { rel_tol, max_depth })
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Integral estimate over `[a, b]` with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Estimate {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Estimate {
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

struct Cell {
    a: f64,
    b: f64,
    depth: u32,
    est: Estimate,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.est
            .error
            .total_cmp(&other.est.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

const MAX_CELLS: usize = 4000;

/// Integrates `f` over the finite interval `[a, b]`.
///
/// The cell with the largest error estimate is bisected until the summed
/// error falls below `rel_tol·|I|`, every remaining cell has reached
/// `max_depth`, or a fixed cell budget is spent. The final sum runs in
/// left-to-right order so results are reproducible.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Estimate {
    if a == b {
        return Estimate {
            value: 0.0,
            error: 0.0,
        };
    }
    let first = gk15(&f, a, b);
    let (mut value, mut error) = (first.value, first.error);
    let mut heap = BinaryHeap::new();
    heap.push(Cell {
        a,
        b,
        depth: 0,
        est: first,
    });
    let mut done: Vec<Cell> = Vec::new();
    loop {
        let converged = error <= spec.rel_tol * value.abs() || error <= f64::MIN_POSITIVE;
        if converged || heap.len() + done.len() >= MAX_CELLS {
            break;
        }
        let Some(cell) = heap.pop() else { break };
        if cell.depth >= spec.max_depth {
            done.push(cell);
            continue;
        }
        value -= cell.est.value;
        error -= cell.est.error;
        let mid = 0.5 * (cell.a + cell.b);
        for (lo, hi) in [(cell.a, mid), (mid, cell.b)] {
            let est = gk15(&f, lo, hi);
            value += est.value;
            error += est.error;
            heap.push(Cell {
                a: lo,
                b: hi,
                depth: cell.depth + 1,
                est,
            });
        }
    }
    let mut cells: Vec<Cell> = heap.into_vec();
    cells.extend(done);
    cells.sort_by(|x, y| x.a.total_cmp(&y.a));
    cells.iter().fold(
        Estimate {
            value: 0.0,
            error: 0.0,
        },
        |acc, c| Estimate {
            value: acc.value + c.est.value,
            error: acc.error + c.est.error,
        },
    )
}

/// Integrates over `[a, ∞)` through `t = a + x/(1 − x)`, `x ∈ [0, 1)`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, spec: &QuadratureSpec) -> Estimate {
    let mapped = |x: f64| {
        let w = 1.0 - x;
        let t = a + x / w;
        let v = f(t) / (w * w);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    integrate(mapped, 0.0, 1.0, spec)
}
