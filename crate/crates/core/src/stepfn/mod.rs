//! Step functions on ℝ, their rearrangements, and best approximation from `Σ_σ`.

mod intervals;
mod sampled;

pub use intervals::IntervalSet;
pub use sampled::SampledFunction;

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Error, Result};
use crate::profile::{check_exponent, ProfilePiece, RearrangementProfile};

/// `value` on `[a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub a: f64,
    pub b: f64,
    #[serde(rename = "v")]
    pub value: f64,
}

impl Atom {
    pub fn len(&self) -> f64 {
        self.b - self.a
    }
}

/// Finitely many disjoint atoms with nonzero values; zero elsewhere.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StepJson", into = "StepJson")]
pub struct StepFunction {
    atoms: Vec<Atom>,
}

#[derive(Serialize, Deserialize)]
struct StepJson {
    atoms: Vec<Atom>,
}

impl TryFrom<StepJson> for StepFunction {
    type Error = Error;

    fn try_from(json: StepJson) -> Result<Self> {
        Self::new(json.atoms)
    }
}

impl From<StepFunction> for StepJson {
    fn from(f: StepFunction) -> Self {
        Self { atoms: f.atoms }
    }
}

impl StepFunction {
    /// Atoms are sorted by left endpoint; overlaps are rejected.
    pub fn new(mut atoms: Vec<Atom>) -> Result<Self> {
        for atom in &atoms {
            if !(atom.a.is_finite() && atom.b.is_finite() && atom.a < atom.b) {
                return Err(invalid(format!(
                    "bad atom interval [{}, {})",
                    atom.a, atom.b
                )));
            }
            if !atom.value.is_finite() || atom.value == 0.0 {
                return Err(invalid(format!(
                    "atom values must be finite and nonzero, got {}",
                    atom.value
                )));
            }
        }
        atoms.sort_by(|x, y| x.a.total_cmp(&y.a));
        for w in atoms.windows(2) {
            if w[0].b > w[1].a {
                return Err(invalid(format!(
                    "atoms overlap: [{}, {}) and [{}, {})",
                    w[0].a, w[0].b, w[1].a, w[1].b
                )));
            }
        }
        Ok(Self { atoms })
    }

    /// Builds from `(a, b, value)` triples.
    pub fn from_triples(triples: &[(f64, f64, f64)]) -> Result<Self> {
        Self::new(
            triples
                .iter()
                .map(|&(a, b, value)| Atom { a, b, value })
                .collect(),
        )
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn support(&self) -> IntervalSet {
        IntervalSet::from_intervals(self.atoms.iter().map(|at| (at.a, at.b)).collect())
            .expect("atoms are validated")
    }

    pub fn support_measure(&self) -> f64 {
        self.atoms.iter().map(Atom::len).sum()
    }

    pub fn value_at(&self, x: f64) -> f64 {
        let idx = self.atoms.partition_point(|at| at.b <= x);
        match self.atoms.get(idx) {
            Some(at) if at.a <= x => at.value,
            _ => 0.0,
        }
    }

    /// `μ{x : |f(x)| > λ}` computed from the atoms.
    pub fn distribution(&self, lambda: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|at| at.value.abs() > lambda)
            .map(Atom::len)
            .sum()
    }

    /// `‖f‖_p^p`.
    pub fn p_mass(&self, p: f64) -> f64 {
        self.atoms
            .iter()
            .map(|at| at.value.abs().powf(p) * at.len())
            .sum()
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c.is_finite() && c != 0.0) {
            return Err(domain(format!(
                "scale factor must be finite and nonzero, got {c}"
            )));
        }
        Self::new(
            self.atoms
                .iter()
                .map(|at| Atom {
                    value: at.value * c,
                    ..*at
                })
                .collect(),
        )
    }

    /// `f·1_A`, keeping the original signs.
    pub fn restricted_to(&self, set: &IntervalSet) -> Self {
        let mut atoms = Vec::new();
        for at in &self.atoms {
            for &(c, d) in set.intervals() {
                let (lo, hi) = (at.a.max(c), at.b.min(d));
                if lo < hi {
                    atoms.push(Atom {
                        a: lo,
                        b: hi,
                        value: at.value,
                    });
                }
            }
        }
        Self { atoms }
    }

    /// Pointwise sum. Cells where the sum vanishes are dropped.
    pub fn add(&self, other: &Self) -> Self {
        let mut cuts: Vec<f64> = self
            .atoms
            .iter()
            .chain(&other.atoms)
            .flat_map(|at| [at.a, at.b])
            .collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut atoms: Vec<Atom> = Vec::new();
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let value = self.value_at(a) + other.value_at(a);
            if value == 0.0 {
                continue;
            }
            match atoms.last_mut() {
                Some(last) if last.b == a && last.value == value => last.b = b,
                _ => atoms.push(Atom { a, b, value }),
            }
        }
        Self { atoms }
    }

    /// Decreasing rearrangement: `|values|` sorted descending, equal levels merged.
    pub fn rearrange(&self) -> RearrangementProfile {
        let mut t = 0.0;
        let pieces = self
            .levels()
            .into_iter()
            .map(|level| {
                let start = t;
                t += level.measure;
                ProfilePiece {
                    t_start: start,
                    t_end: t,
                    value: level.magnitude,
                }
            })
            .collect();
        RearrangementProfile::new(pieces, None).expect("levels are sorted and contiguous")
    }

    /// Atoms grouped by `|value|`, largest magnitude first; each group lists its
    /// atom indices in left-to-right order.
    fn levels(&self) -> Vec<Level> {
        let mut order: Vec<usize> = (0..self.atoms.len()).collect();
        order.sort_by(|&i, &j| {
            let (x, y) = (&self.atoms[i], &self.atoms[j]);
            y.value
                .abs()
                .total_cmp(&x.value.abs())
                .then(x.a.total_cmp(&y.a))
        });
        let mut levels: Vec<Level> = Vec::new();
        for i in order {
            let magnitude = self.atoms[i].value.abs();
            match levels.last_mut() {
                Some(level) if level.magnitude == magnitude => {
                    level.measure += self.atoms[i].len();
                    level.atoms.push(i);
                }
                _ => levels.push(Level {
                    magnitude,
                    measure: self.atoms[i].len(),
                    atoms: vec![i],
                }),
            }
        }
        levels
    }

    /// The set `A_σ` of measure `σ` capturing the largest `|f|` values.
    ///
    /// Ties on a plateau `{|f| = f*(σ)}` are broken by taking its leftmost
    /// sub-intervals. When `σ` exceeds the support measure, the support is
    /// padded by one interval starting at the right end of its hull. The family
    /// is nested in `σ`.
    pub fn best_support_set(&self, sigma: f64) -> Result<IntervalSet> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(domain(format!("sigma must be finite and > 0, got {sigma}")));
        }
        let mut chosen: Vec<(f64, f64)> = Vec::new();
        let mut captured = 0.0;
        for level in self.levels() {
            if captured + level.measure < sigma {
                captured += level.measure;
                chosen.extend(
                    level
                        .atoms
                        .iter()
                        .map(|&i| (self.atoms[i].a, self.atoms[i].b)),
                );
                continue;
            }
            // plateau: take leftmost pieces until the remaining need is met
            let mut need = sigma - captured;
            for &i in &level.atoms {
                if need <= 0.0 {
                    break;
                }
                let at = &self.atoms[i];
                if at.len() <= need {
                    chosen.push((at.a, at.b));
                    need -= at.len();
                } else {
                    chosen.push((at.a, at.a + need));
                    need = 0.0;
                }
            }
            return IntervalSet::from_intervals(chosen);
        }
        // σ exceeds μ(supp f)
        let pad_start = self.atoms.last().map_or(0.0, |at| at.b);
        let pad = sigma - captured;
        if pad > 0.0 {
            chosen.push((pad_start, pad_start + pad));
        }
        IntervalSet::from_intervals(chosen)
    }

    /// Best approximant `f·1_{A_σ}` from `Σ_σ` and its `L_p` error.
    pub fn best_approx(&self, sigma: f64, p: f64) -> Result<BestApproximation> {
        check_exponent(p)?;
        let support = self.best_support_set(sigma)?;
        let approximant = self.restricted_to(&support);
        let residual_mass: f64 = self
            .atoms
            .iter()
            .map(|at| {
                let left = at.len() - support.overlap(at.a, at.b);
                if left > 0.0 {
                    at.value.abs().powf(p) * left
                } else {
                    0.0
                }
            })
            .sum();
        Ok(BestApproximation {
            support,
            approximant,
            error: residual_mass.powf(1.0 / p),
        })
    }
}

struct Level {
    magnitude: f64,
    measure: f64,
    atoms: Vec<usize>,
}

/// Result of [`StepFunction::best_approx`].
#[derive(Debug, Clone, PartialEq)]
pub struct BestApproximation {
    pub support: IntervalSet,
    pub approximant: StepFunction,
    pub error: f64,
}
