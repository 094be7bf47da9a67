//! Machine-readable report documents emitted by the CLI.
//!
//! Rationals are serialized as exact `"a/b"` strings; documents round-trip
//! losslessly through JSON.

use serde::{Deserialize, Serialize};

use evostab_core::oracle::Counterexample;
use evostab_core::stability::{FailureWitness, StabilityReport};
use evostab_core::MixedStrategy;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameMeta {
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportFlags {
    pub is_nash: bool,
    pub is_strict_nash: bool,
    pub is_ess: bool,
    pub is_mess: bool,
    pub is_locally_dominant: bool,
    pub is_strictly_locally_dominant: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyAnalysis {
    pub strategy: MixedStrategy,
    pub flags: ReportFlags,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<FailureWitness>,
}

impl StrategyAnalysis {
    pub fn from_report(strategy: MixedStrategy, report: StabilityReport) -> Self {
        StrategyAnalysis {
            strategy,
            flags: ReportFlags {
                is_nash: report.is_nash,
                is_strict_nash: report.is_strict_nash,
                is_ess: report.is_ess,
                is_mess: report.is_mess,
                is_locally_dominant: report.is_locally_dominant,
                is_strictly_locally_dominant: report.is_strictly_locally_dominant,
            },
            witness: report.witness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisDocument {
    pub game: GameMeta,
    pub results: Vec<StrategyAnalysis>,
    pub version: String,
}

/// Verdict of an oracle certification run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertifyVerdict {
    Counterexample { counterexample: Counterexample },
    Absent {
        note: String,
        denom: u32,
        m: usize,
        eps_list: Vec<String>,
    },
}
