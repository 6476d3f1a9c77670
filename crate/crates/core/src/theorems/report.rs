use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

/// Outcome of one inequality check, or of a check aggregated over a family.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    /// `None` when no constant is asserted.
    pub constant_claimed: Option<f64>,
    pub pass: bool,
    pub inputs: String,
    pub aggregate: Option<Aggregate>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aggregate {
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub n: usize,
}

/// Relative slack on inequality checks.
pub const SLACK: f64 = 1e-8;

/// `lhs/rhs`, with `0/0 = 0` and `∞/∞ = ∞`.
pub fn ratio_of(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 {
        0.0
    } else if lhs.is_infinite() {
        f64::INFINITY
    } else {
        lhs / rhs
    }
}

impl CheckReport {
    /// Directional check `lhs ≤ rhs·(1 + SLACK)`.
    pub fn inequality(
        name: &str,
        lhs: f64,
        rhs: f64,
        constant: Option<f64>,
        inputs: String,
    ) -> Self {
        let pass = lhs <= rhs * (1.0 + SLACK);
        Self {
            name: name.to_owned(),
            lhs,
            rhs,
            ratio: ratio_of(lhs, rhs),
            constant_claimed: constant,
            pass,
            inputs,
            aggregate: None,
        }
    }

    /// Folds single-member reports into one: the worst member (largest ratio)
    /// supplies `lhs`, `rhs` and `ratio`.
    pub fn aggregate(name: &str, reports: &[CheckReport], inputs: String) -> Self {
        let mut worst: Option<&CheckReport> = None;
        let (mut lo, mut hi) = (f64::INFINITY, 0f64);
        for rep in reports {
            lo = lo.min(rep.ratio);
            hi = hi.max(rep.ratio);
            let replace = match worst {
                None => true,
                Some(w) => (!rep.pass && w.pass) || (rep.pass == w.pass && rep.ratio > w.ratio),
            };
            if replace {
                worst = Some(rep);
            }
        }
        let (lhs, rhs, ratio) = worst.map_or((0.0, 0.0, 0.0), |w| (w.lhs, w.rhs, w.ratio));
        Self {
            name: name.to_owned(),
            lhs,
            rhs,
            ratio,
            constant_claimed: reports.first().and_then(|r| r.constant_claimed),
            pass: reports.iter().all(|r| r.pass),
            inputs,
            aggregate: Some(Aggregate {
                min_ratio: if reports.is_empty() { 0.0 } else { lo },
                max_ratio: hi,
                n: reports.len(),
            }),
        }
    }
}

/// JSON number, or the strings `"inf"`, `"-inf"`, `"nan"` for non-finite values.
pub(crate) struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v = self.0;
        if v.is_finite() {
            s.serialize_f64(v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }
}

impl Serialize for CheckReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("name", &self.name)?;
        map.serialize_entry("lhs", &Num(self.lhs))?;
        map.serialize_entry("rhs", &Num(self.rhs))?;
        map.serialize_entry("ratio", &Num(self.ratio))?;
        match self.constant_claimed {
            Some(c) => map.serialize_entry("constant_claimed", &Num(c))?,
            None => map.serialize_entry("constant_claimed", "unspecified")?,
        }
        map.serialize_entry("pass", &self.pass)?;
        map.serialize_entry("inputs", &self.inputs)?;
        if let Some(agg) = &self.aggregate {
            map.serialize_entry("min_ratio", &Num(agg.min_ratio))?;
            map.serialize_entry("max_ratio", &Num(agg.max_ratio))?;
            map.serialize_entry("n", &agg.n)?;
        }
        map.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_conventions() {
        assert_eq!(ratio_of(0.0, 0.0), 0.0);
        assert_eq!(ratio_of(f64::INFINITY, f64::INFINITY), f64::INFINITY);
        assert_eq!(ratio_of(1.0, 2.0), 0.5);
    }

    #[test]
    fn json_shape() {
        let rep = CheckReport::inequality("jackson", 1.0, f64::INFINITY, None, "x".into());
        let js = serde_json::to_value(&rep).unwrap();
        assert_eq!(js["rhs"], "inf");
        assert_eq!(js["constant_claimed"], "unspecified");
        assert_eq!(js["pass"], true);
        assert!(js.get("n").is_none());

        let agg = CheckReport::aggregate(
            "jackson",
            &[
                rep.clone(),
                CheckReport::inequality("jackson", 3.0, 2.0, Some(1.0), "y".into()),
            ],
            "fam".into(),
        );
        let js = serde_json::to_value(&agg).unwrap();
        assert_eq!(js["n"], 2);
        assert_eq!(js["pass"], false);
        assert_eq!(js["lhs"], 3.0);
        assert_eq!(js["max_ratio"], 1.5);
    }
}
