use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack granted to floating-point right-hand sides. A bound is
/// only reported violated when the exact left side exceeds the right side
/// by more than this fraction.
pub const OUTWARD_TOLERANCE: f64 = 1e-9;

/// `lhs <= rhs` with outward rounding in favour of the bound.
pub fn le_outward(lhs: f64, rhs: f64) -> bool {
    if lhs.is_nan() || rhs.is_nan() {
        return false;
    }
    lhs <= rhs + OUTWARD_TOLERANCE * rhs.abs().max(lhs.abs()) + f64::MIN_POSITIVE
}

/// The statements the verifier knows how to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TheoremId {
    /// Edge-count identity for the distance or dot-product graph.
    Edge,
    /// Dot-product functional bound for functions on `F_q^d`.
    Chikr,
    /// `P_k <= |E| X^k`.
    Upper,
    /// Residual bounds of the path recursion.
    Recursion,
    /// Path count `P_k` close to `|E|^(k+1) / q^k` above the size threshold.
    Chains,
    /// Bilinear form bound, distance relation.
    TDist,
    /// Bilinear form bound, dot-product relation.
    TProd,
    /// The combined bilinear bound for either relation.
    Concise,
    /// Cycle counts under the explicit size hypothesis.
    Main,
    /// Cycle counts for `n >= 5` under the relaxed size threshold.
    Main2,
    /// Cycle counts for `n >= 4` with constant `K_n`.
    Maincor,
    /// Tree embedding counts in the truncated set.
    Tree,
    /// Non-degenerate cycle counts.
    Nondeg,
    /// Size of the set removed by degree truncation.
    Trunc,
}

impl TheoremId {
    pub const ALL: [TheoremId; 14] = [
        TheoremId::Edge,
        TheoremId::Chikr,
        TheoremId::Upper,
        TheoremId::Recursion,
        TheoremId::Chains,
        TheoremId::TDist,
        TheoremId::TProd,
        TheoremId::Concise,
        TheoremId::Main,
        TheoremId::Main2,
        TheoremId::Maincor,
        TheoremId::Tree,
        TheoremId::Nondeg,
        TheoremId::Trunc,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::Edge => "EDGE",
            TheoremId::Chikr => "CHIKR",
            TheoremId::Upper => "UPPER",
            TheoremId::Recursion => "RECURSION",
            TheoremId::Chains => "CHAINS",
            TheoremId::TDist => "T_DIST",
            TheoremId::TProd => "T_PROD",
            TheoremId::Concise => "CONCISE",
            TheoremId::Main => "MAIN",
            TheoremId::Main2 => "MAIN2",
            TheoremId::Maincor => "MAINCOR",
            TheoremId::Tree => "TREE",
            TheoremId::Nondeg => "NONDEG",
            TheoremId::Trunc => "TRUNC",
        }
    }

    /// Statements that only hold "for q sufficiently large"; a failing
    /// inequality is reported as conditional, not as a counterexample.
    pub fn is_asymptotic(self) -> bool {
        matches!(
            self,
            TheoremId::Main2
                | TheoremId::Maincor
                | TheoremId::Nondeg
                | TheoremId::Tree
                | TheoremId::Trunc
        )
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "_");
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str() == norm)
            .ok_or_else(|| Error::UnsupportedTheorem(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    /// Hypothesis not met; nothing is asserted.
    Vacuous,
    /// Hypothesis met, inequality fails, but the statement is asymptotic.
    ConditionalFail,
    /// Hypothesis met and inequality fails: a counterexample.
    Fail,
}

/// One statement evaluated on one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub theorem: TheoremId,
    pub hypothesis_satisfied: bool,
    /// Named quantities entering the hypothesis and the bound. Exact
    /// integers and rationals are strings.
    pub hypothesis_terms: BTreeMap<String, serde_json::Value>,
    /// Exact left side.
    pub lhs: String,
    pub lhs_approx: f64,
    pub rhs: f64,
    pub slack: f64,
    /// The inequality itself, whether or not the hypothesis holds.
    pub holds: bool,
    /// `hypothesis_satisfied && holds`.
    pub pass: bool,
    pub vacuous: bool,
    pub conditional: bool,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl BoundReport {
    /// Builds a report whose `holds` was decided exactly by the caller.
    pub fn exact(
        theorem: TheoremId,
        hypothesis_satisfied: bool,
        hypothesis_terms: BTreeMap<String, serde_json::Value>,
        lhs: BigRational,
        rhs: f64,
        holds: bool,
    ) -> Self {
        let lhs_approx = lhs.to_f64().unwrap_or(f64::INFINITY);
        let conditional = theorem.is_asymptotic();
        let verdict = match (hypothesis_satisfied, holds) {
            (false, _) => Verdict::Vacuous,
            (true, true) => Verdict::Pass,
            (true, false) if conditional => Verdict::ConditionalFail,
            (true, false) => Verdict::Fail,
        };
        BoundReport {
            theorem,
            hypothesis_satisfied,
            hypothesis_terms,
            lhs: format_rational(&lhs),
            lhs_approx,
            rhs,
            slack: rhs - lhs_approx,
            holds,
            pass: hypothesis_satisfied && holds,
            vacuous: !hypothesis_satisfied,
            conditional,
            verdict,
            notes: Vec::new(),
        }
    }

    /// Builds a report comparing the exact left side to a floating right
    /// side with outward tolerance.
    pub fn outward(
        theorem: TheoremId,
        hypothesis_satisfied: bool,
        hypothesis_terms: BTreeMap<String, serde_json::Value>,
        lhs: BigRational,
        rhs: f64,
    ) -> Self {
        let approx = lhs.to_f64().unwrap_or(f64::INFINITY);
        Self::exact(
            theorem,
            hypothesis_satisfied,
            hypothesis_terms,
            lhs,
            rhs,
            le_outward(approx, rhs),
        )
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn is_violation(&self) -> bool {
        self.verdict == Verdict::Fail
    }
}

pub(crate) fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn theorem_ids_parse() {
        for t in TheoremId::ALL {
            assert_eq!(t.as_str().parse::<TheoremId>().unwrap(), t);
            assert_eq!(
                serde_json::to_string(&t).unwrap(),
                format!("\"{}\"", t.as_str())
            );
        }
        assert_eq!("t-dist".parse::<TheoremId>().unwrap(), TheoremId::TDist);
        assert!("nope".parse::<TheoremId>().is_err());
    }

    #[test]
    fn outward_comparison() {
        assert!(le_outward(1.0, 1.0));
        assert!(le_outward(1.0 + 1e-12, 1.0));
        assert!(!le_outward(1.0 + 1e-6, 1.0));
        assert!(le_outward(0.0, 0.0));
        assert!(!le_outward(f64::NAN, 1.0));
    }

    #[test]
    fn verdicts() {
        let lhs = BigRational::from_integer(BigInt::from(3));
        let r = BoundReport::outward(TheoremId::Main, false, BTreeMap::new(), lhs.clone(), 1.0);
        assert_eq!(r.verdict, Verdict::Vacuous);
        assert!(!r.holds && !r.pass && r.vacuous);
        let r = BoundReport::outward(TheoremId::Main, true, BTreeMap::new(), lhs.clone(), 1.0);
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.is_violation());
        let r = BoundReport::outward(TheoremId::Main2, true, BTreeMap::new(), lhs.clone(), 1.0);
        assert_eq!(r.verdict, Verdict::ConditionalFail);
        let r = BoundReport::outward(TheoremId::Main, true, BTreeMap::new(), lhs, 4.0);
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.lhs, "3");
        assert_eq!(
            format_rational(&BigRational::new(BigInt::from(-6), BigInt::from(4))),
            "-3/2"
        );
    }
}
