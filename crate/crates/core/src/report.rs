//! JSON verification reports and precision sweeps.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::engine::{explore, EngineError, ExploreOptions, Model, Trace, TraceStep, Verdict};
use crate::protocols::{build_model, ProtocolConfig, ProtocolError};
use crate::reduct::{prune_model, select_keep};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub model: String,
    pub verdict: String,
    pub states: usize,
    pub rules_fired: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violated_invariant: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// Width of the explored state vector.
    pub state_vars: usize,
    pub symmetry: bool,
    pub pruned: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_initial: Option<String>,
    pub trace: Vec<TraceStep>,
    pub wall_time_ms: f64,
}

impl VerifyReport {
    pub fn from_verdict(model: &Model, verdict: &Verdict, opts: &ExploreOptions, pruned: bool, wall_time_ms: f64) -> Self {
        let (reason, trace) = match verdict {
            Verdict::Inconclusive { reason, .. } => (Some(reason.clone()), None),
            Verdict::Fail { trace, .. } => (None, Some(trace)),
            Verdict::Pass { .. } => (None, None),
        };
        VerifyReport {
            model: model.name.clone(),
            verdict: verdict.outcome().to_string(),
            states: verdict.states(),
            rules_fired: verdict.rules_fired(),
            violated_invariant: verdict.violated_invariant().map(str::to_string),
            reason,
            state_vars: model.layout.width(),
            symmetry: opts.symmetry,
            pruned,
            trace_initial: trace.map(|t| t.initial.clone()),
            trace: trace.map(|t| t.steps.clone()).unwrap_or_default(),
            wall_time_ms,
        }
    }

    /// The trace in replayable form, if the run failed.
    pub fn to_trace(&self) -> Option<Trace> {
        Some(Trace {
            canonical: self.symmetry,
            initial: self.trace_initial.clone()?,
            steps: self.trace.clone(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON with the wall-time field removed, for byte comparisons.
    pub fn to_stable_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v.as_object_mut().expect("object").remove("wall_time_ms");
        serde_json::to_string_pretty(&v).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "model: {}\nverdict: {}\nstates: {}\nrules fired: {}\n",
            self.model, self.verdict, self.states, self.rules_fired
        );
        if let Some(inv) = &self.violated_invariant {
            out += &format!("violated invariant: {inv}\n");
        }
        if let Some(r) = &self.reason {
            out += &format!("reason: {r}\n");
        }
        for s in &self.trace {
            let obs: Vec<String> = s.observables.iter().map(|(k, v)| format!("{k}={v}")).collect();
            out += &format!("{:>3}. {} [{}]\n", s.step, s.rule, obs.join(", "));
        }
        out += &format!("wall time: {:.1} ms\n", self.wall_time_ms);
        out
    }

    pub fn exit_code(&self) -> i32 {
        match self.verdict.as_str() {
            "pass" => 0,
            "fail" => 1,
            _ => 2,
        }
    }
}

pub fn verify_model(model: &Model, opts: &ExploreOptions, pruned: bool) -> Result<VerifyReport, EngineError> {
    let t = Instant::now();
    let verdict = explore(model, opts)?;
    let ms = t.elapsed().as_secs_f64() * 1e3;
    Ok(VerifyReport::from_verdict(model, &verdict, opts, pruned, ms))
}

/// Builds a registry model, optionally pruned to its selected reduct.
pub fn build_named(name: &str, cfg: &ProtocolConfig, pruned: bool) -> Result<Model, ProtocolError> {
    let m = build_model(name, cfg)?;
    if !pruned {
        return Ok(m);
    }
    let keep = select_keep(&m)?;
    Ok(prune_model(&m, &keep)?)
}

pub fn verify_named(
    name: &str,
    cfg: &ProtocolConfig,
    opts: &ExploreOptions,
    pruned: bool,
) -> Result<VerifyReport, ProtocolError> {
    let m = build_named(name, cfg, pruned)?;
    Ok(verify_model(&m, opts, pruned)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub precision: u32,
    pub delta: f64,
    pub verdict: String,
    pub states: usize,
    pub rules_fired: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violated_invariant: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub model: String,
    pub settings: Vec<SweepEntry>,
    pub all_verdicts_equal: bool,
}

impl SweepReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("model: {}\n", self.model);
        for e in &self.settings {
            out += &format!(
                "precision {} delta {}: {} ({} states)\n",
                e.precision, e.delta, e.verdict, e.states
            );
        }
        out += &format!("all verdicts equal: {}\n", self.all_verdicts_equal);
        out
    }
}

/// Runs `name` once per (precision, delta) pair, precision-major.
pub fn sweep(
    name: &str,
    base: &ProtocolConfig,
    precisions: &[u32],
    deltas: &[f64],
    opts: &ExploreOptions,
    pruned: bool,
) -> Result<SweepReport, ProtocolError> {
    if precisions.len() < 2 {
        return Err(ProtocolError::InvalidConfig(
            "a sweep needs at least two precision settings".into(),
        ));
    }
    let deltas = if deltas.is_empty() { vec![base.delta] } else { deltas.to_vec() };
    let mut settings = Vec::new();
    for &precision in precisions {
        for &delta in &deltas {
            let cfg = ProtocolConfig {
                precision,
                delta,
                ..base.clone()
            };
            let r = verify_named(name, &cfg, opts, pruned)?;
            settings.push(SweepEntry {
                precision,
                delta,
                verdict: r.verdict,
                states: r.states,
                rules_fired: r.rules_fired,
                violated_invariant: r.violated_invariant,
            });
        }
    }
    let all_verdicts_equal = settings.windows(2).all(|w| w[0].verdict == w[1].verdict);
    Ok(SweepReport {
        model: build_model(name, base)?.name,
        settings,
        all_verdicts_equal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::replay;

    #[test]
    fn failing_report_round_trips_and_replays() {
        let opts = ExploreOptions::default();
        let r = verify_named("ns_fuzzy_conf", &ProtocolConfig::default(), &opts, false).unwrap();
        assert_eq!(r.exit_code(), 1);
        let back: VerifyReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        let m = build_model("ns_fuzzy_conf", &ProtocolConfig::default()).unwrap();
        let end = replay(&m, &back.to_trace().unwrap()).unwrap();
        assert_eq!(m.check_invariants(&end).first(), r.violated_invariant.as_ref());
        assert!(!r.to_stable_json().contains("wall_time_ms"));
    }

    #[test]
    fn sweep_needs_two_precisions() {
        let opts = ExploreOptions::default();
        let cfg = ProtocolConfig::default();
        assert!(sweep("nssk_safe", &cfg, &[2], &[], &opts, false).is_err());
        let s = sweep("nssk_leaky", &cfg, &[2, 4], &[], &opts, false).unwrap();
        assert_eq!(s.settings.len(), 2);
        assert!(s.all_verdicts_equal);
        assert!(s.settings.iter().all(|e| e.verdict == "fail"));
    }
}
