//! Named checks with machine-readable verdicts.

mod checks;
mod invariance;
pub mod oracle;

use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{fmt_q, Q};
use crate::tautring::{Coeff, TautClass};

pub use checks::{
    check_compact_type, check_conjecture_a, check_factorization, check_polynomiality, check_vanishing, vanishing_report,
};
pub use invariance::{check_invariance, Invariance, InvarianceParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    InconclusiveTruncated,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::InconclusiveTruncated => "inconclusive-truncated",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::InconclusiveTruncated => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub params: Value,
    pub verdict: Verdict,
    pub witness: Option<Value>,
    pub details: Value,
}

impl CheckReport {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).unwrap()
    }

    /// One line per field, for terminals.
    pub fn table(&self) -> String {
        let mut s = format!("{:<10} {}\n{:<10} {}\n{:<10} {}\n", "check", self.name, "verdict", self.verdict.as_str(), "params", self.params);
        if let Some(w) = &self.witness {
            s += &format!("{:<10} {}\n", "witness", w);
        }
        if !self.details.is_null() {
            s += &format!("{:<10} {}\n", "details", self.details);
        }
        s
    }
}

/// Adds 1 to the coefficient of the first term, or adds the unit class when `x` is empty.
pub fn perturb<R: Coeff>(x: &TautClass<R>) -> TautClass<R> {
    let mut out = x.clone();
    match x.terms().keys().next() {
        Some(s) => out.add_term(s.clone(), R::from_q(Q::from_integer(1.into()))),
        None => {
            let u = TautClass::<R>::unit(x.space);
            out.add_assign(&u).unwrap();
        }
    }
    out
}

/// Termwise comparison; the witness names the first differing stratum.
pub(crate) fn compare<R: Coeff>(lhs: &TautClass<R>, rhs: &TautClass<R>) -> Option<Value> {
    lhs.first_difference(rhs).map(|(s, a, b)| json!({ "stratum": s.to_json(), "lhs": a.to_json(), "rhs": b.to_json() }))
}

pub(crate) fn qjson(x: &Q) -> Value {
    Value::String(fmt_q(x))
}
