//! Shared reporting vocabulary: three-valued verdicts, per-clause
//! evidence, and the manifest stamped into every JSON document.

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "UNKNOWN")]
    Unknown,
}

impl Verdict {
    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Unknown => "UNKNOWN",
        })
    }
}

/// Combine clause verdicts: PASS iff all pass, FAIL iff any fails,
/// UNKNOWN otherwise.
pub fn overall(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
    let mut out = Verdict::Pass;
    for v in verdicts {
        match v {
            Verdict::Fail => return Verdict::Fail,
            Verdict::Unknown => out = Verdict::Unknown,
            Verdict::Pass => {}
        }
    }
    out
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Clause {
    pub id: String,
    pub verdict: Verdict,
    pub evidence: String,
}

impl Clause {
    pub fn new(id: &str, verdict: Verdict, evidence: impl Into<String>) -> Self {
        Clause {
            id: id.into(),
            verdict,
            evidence: evidence.into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_combines() {
        use Verdict::*;
        assert_eq!(overall([Pass, Pass]), Pass);
        assert_eq!(overall([Pass, Unknown]), Unknown);
        assert_eq!(overall([Unknown, Fail]), Fail);
        assert_eq!(overall([]), Pass);
    }

    #[test]
    fn verdict_serializes_upper() {
        assert_eq!(serde_json::to_string(&Verdict::Pass).unwrap(), "\"PASS\"");
        let v: Verdict = serde_json::from_str("\"UNKNOWN\"").unwrap();
        assert_eq!(v, Verdict::Unknown);
    }
}
