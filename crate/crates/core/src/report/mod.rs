//! Campaign reports: run a seeded verification campaign, aggregate the
//! verdicts by instance index, and serialize as JSON or a CSV projection.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gen::{gen_indexed, GenSpec, Seed};
use crate::inequality::{CheckConfig, CheckMode, Verdict};
use crate::instance::{Instance, StatementKind};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Process exit codes shared by every command.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VIOLATED: i32 = 1;
    pub const UNDETERMINED: i32 = 2;
    pub const USAGE: i32 = 3;
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub holds: u64,
    pub equality: u64,
    pub undetermined: u64,
    pub violated: u64,
}

impl Counts {
    pub fn total(&self) -> u64 {
        self.holds + self.equality + self.undetermined + self.violated
    }

    pub fn record(&mut self, v: &Verdict) {
        match v {
            Verdict::Holds => self.holds += 1,
            Verdict::HoldsWithEquality => self.equality += 1,
            Verdict::Undetermined { .. } => self.undetermined += 1,
            Verdict::Violated { .. } => self.violated += 1,
        }
    }
}

/// A violated instance, complete enough to re-check on its own.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub index: u64,
    pub instance: Instance,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignParams {
    pub spec: GenSpec,
    pub mode: CheckMode,
    pub precision_schedule: Vec<u32>,
    pub equality_detection: bool,
    /// `None` tolerates any number of Undetermined verdicts.
    pub max_undetermined: Option<u64>,
}

impl CampaignParams {
    pub fn new(spec: GenSpec, cfg: &CheckConfig) -> Self {
        CampaignParams {
            spec,
            mode: cfg.mode,
            precision_schedule: cfg.precision_schedule.clone(),
            equality_detection: cfg.equality_detection,
            max_undetermined: None,
        }
    }

    pub fn check_config(&self) -> CheckConfig {
        CheckConfig {
            mode: self.mode,
            precision_schedule: self.precision_schedule.clone(),
            equality_detection: self.equality_detection,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub seed: Seed,
    pub trials: u64,
    pub statement: StatementKind,
    pub parameters: CampaignParams,
    pub counts: Counts,
    pub violated: Vec<Witness>,
    pub runtime_ms: u64,
    pub tool_version: String,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Counts sum to trials and every violation has a witness.
    pub fn is_consistent(&self) -> bool {
        self.counts.total() == self.trials && self.violated.len() as u64 == self.counts.violated
    }

    pub fn exit_code(&self) -> i32 {
        exit_code(&self.counts, self.parameters.max_undetermined)
    }
}

/// Violations dominate; Undetermined only fails past the tolerance.
pub fn exit_code(counts: &Counts, max_undetermined: Option<u64>) -> i32 {
    if counts.violated > 0 {
        exit::VIOLATED
    } else if max_undetermined.is_some_and(|max| counts.undetermined > max) {
        exit::UNDETERMINED
    } else {
        exit::OK
    }
}

/// One row of the CSV projection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub index: u64,
    pub statement: StatementKind,
    pub n: usize,
    pub m: usize,
    pub verdict: String,
    /// Gap bound for Undetermined, empty otherwise.
    pub gap_bound: String,
}

#[derive(Clone, Debug)]
pub struct Campaign {
    pub report: Report,
    pub outcomes: Vec<Outcome>,
}

/// Generate and check `trials` instances in parallel. Results are
/// aggregated by instance index, so the report does not depend on
/// scheduling.
pub fn run_campaign(command: &str, seed: Seed, trials: u64, params: CampaignParams) -> Result<Campaign> {
    params.spec.validate()?;
    let cfg = params.check_config();
    cfg.validate()?;
    let start = Instant::now();
    let results: Vec<(Instance, Verdict)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let inst = gen_indexed(&params.spec, seed, i)?;
            let v = inst.check(&cfg)?;
            Ok((inst, v))
        })
        .collect::<Result<_>>()?;
    let mut counts = Counts::default();
    let mut violated = Vec::new();
    let mut outcomes = Vec::with_capacity(results.len());
    for (index, (inst, v)) in (0u64..).zip(results) {
        counts.record(&v);
        let (n, m) = inst.dims();
        outcomes.push(Outcome {
            index,
            statement: inst.kind(),
            n,
            m,
            verdict: v.label().to_string(),
            gap_bound: match &v {
                Verdict::Undetermined { gap_bound } => gap_bound.to_string(),
                _ => String::new(),
            },
        });
        if v.is_violated() {
            violated.push(Witness {
                index,
                instance: inst,
                verdict: v,
            });
        }
    }
    let report = Report {
        command: command.to_string(),
        seed,
        trials,
        statement: params.spec.statement,
        parameters: params,
        counts,
        violated,
        runtime_ms: start.elapsed().as_millis() as u64,
        tool_version: TOOL_VERSION.to_string(),
    };
    debug_assert!(report.is_consistent());
    Ok(Campaign { report, outcomes })
}

pub fn outcomes_csv(outcomes: &[Outcome]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for o in outcomes {
        w.serialize(o).map_err(|e| Error::Parse(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// The JSON report with `runtime_ms` zeroed, for reproducibility checks.
pub fn normalized_json(report: &Report) -> String {
    Report {
        runtime_ms: 0,
        ..report.clone()
    }
    .to_json()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn campaign(kind: StatementKind, trials: u64, seed: Seed) -> Campaign {
        let params = CampaignParams::new(GenSpec::for_statement(kind), &CheckConfig::default());
        run_campaign("test", seed, trials, params).unwrap()
    }

    #[test]
    fn counts_are_consistent() {
        for k in StatementKind::ALL {
            let c = campaign(k, 40, 2);
            assert!(c.report.is_consistent());
            assert_eq!(c.report.counts.violated, 0);
            assert_eq!(c.outcomes.len(), 40);
        }
    }

    #[test]
    fn reports_are_reproducible() {
        let a = campaign(StatementKind::Minkowski, 50, 7);
        let b = campaign(StatementKind::Minkowski, 50, 7);
        assert_eq!(normalized_json(&a.report), normalized_json(&b.report));
        assert_eq!(outcomes_csv(&a.outcomes).unwrap(), outcomes_csv(&b.outcomes).unwrap());
    }

    #[test]
    fn exit_code_contract() {
        let c = |holds, equality, undetermined, violated| Counts {
            holds,
            equality,
            undetermined,
            violated,
        };
        assert_eq!(exit_code(&c(5, 1, 0, 0), None), exit::OK);
        assert_eq!(exit_code(&c(5, 1, 3, 0), None), exit::OK);
        assert_eq!(exit_code(&c(5, 1, 3, 0), Some(3)), exit::OK);
        assert_eq!(exit_code(&c(5, 1, 4, 0), Some(3)), exit::UNDETERMINED);
        assert_eq!(exit_code(&c(5, 1, 4, 1), Some(3)), exit::VIOLATED);
        assert_eq!(exit_code(&c(0, 0, 0, 1), None), exit::VIOLATED);
    }

    #[test]
    fn csv_header_and_rows() {
        let c = campaign(StatementKind::Cbs, 3, 1);
        let text = outcomes_csv(&c.outcomes).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("index,statement,n,m,verdict,gap_bound"));
        assert_eq!(lines.count(), 3);
    }
}
