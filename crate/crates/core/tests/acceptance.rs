//! Acceptance runner: one line per criterion, nonzero exit on any failure.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use fuzzydy_core::engine::{explore, ExploreOptions, Model, Rule, RuleKind, Verdict};
use fuzzydy_core::fuzzy::{
    fuse, propagate_interval, quantize_decimal, AffineMap, GaussianFuzzyNumber, Grid, Interval,
    LeakEstimate,
};
use fuzzydy_core::protocols::{build_model, model_names, nsl, symmetric, ProtocolConfig};
use fuzzydy_core::reduct::{enumerate_e_reducts, prune_model, select_keep, FormalContext};
use fuzzydy_core::report::{sweep, verify_named};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

mod common;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const PAIRS: [(&str, &str, &str); 6] = [
    ("ns_fuzzy_auth_safe", "ns_fuzzy_auth", nsl::INV_INITIATOR_AUTH),
    ("ns_fuzzy_conf_safe", "ns_fuzzy_conf", nsl::INV_NB_SECRET),
    ("nssk_safe", "nssk_leaky", symmetric::INV_RESPONDER_AUTH),
    ("yahalom_safe", "yahalom_leaky", symmetric::INV_RESPONDER_AUTH),
    ("otway_rees_safe", "otway_rees_leaky", symmetric::INV_RESPONDER_AUTH),
    ("woo_lam_safe", "woo_lam_leaky", symmetric::INV_RESPONDER_AUTH),
];

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn model(name: &str) -> Result<Model, String> {
    build_model(name, &ProtocolConfig::default()).map_err(|e| e.to_string())
}

fn run(m: &Model) -> Result<Verdict, String> {
    explore(m, &ExploreOptions::default()).map_err(|e| e.to_string())
}

type Shape = (String, String, Vec<u16>, Vec<(u16, Vec<u16>)>);

fn shape(r: &Rule) -> Shape {
    (
        r.name.clone(),
        r.group.clone(),
        r.guard.reads.iter().map(|v| v.0).collect(),
        r.assigns.iter().map(|a| (a.target.0, a.reads.iter().map(|v| v.0).collect())).collect(),
    )
}

fn verdict_matrix() -> Outcome {
    let mut log = Vec::new();
    for (safe, leaky, inv) in PAIRS {
        let (s, l) = (model(safe)?, model(leaky)?);
        let (vs, vl) = (run(&s)?, run(&l)?);
        ensure(vs.is_pass(), || format!("{safe} is {}", vs.outcome()))?;
        ensure(vl.is_fail() && vl.violated_invariant() == Some(inv), || {
            format!("{leaky}: {} {:?}", vl.outcome(), vl.violated_invariant())
        })?;
        let honest = |m: &Model| -> Vec<Shape> {
            m.rules.iter().filter(|r| r.kind == RuleKind::Honest).map(shape).collect()
        };
        ensure(honest(&s) == honest(&l), || format!("{safe}/{leaky}: honest rules differ"))?;
        let base: BTreeSet<Shape> = s.rules.iter().map(shape).collect();
        for r in l.rules.iter().filter(|r| !base.contains(&shape(r))) {
            ensure(r.kind == RuleKind::Leak || r.group == "intruder_forge", || {
                format!("{leaky}: unexpected extra rule {}", r.name)
            })?;
        }
        log.push(format!("{safe} {}/{leaky} {}", vs.states(), vl.states()));
    }
    Ok(log.join(", "))
}

fn counterexample_trace() -> Outcome {
    let v = run(&model("ns_fuzzy_auth")?)?;
    let t = v.trace().ok_or("no counterexample")?;
    let labels = t.labels();
    let expected = [
        nsl::LEAK_COARSE,
        nsl::LEAK_FINE,
        nsl::INITIATOR_START,
        nsl::INTERCEPT,
        nsl::REPLAY_RESPONDER,
        nsl::RESPONDER_REACT,
        nsl::INTERCEPT,
        nsl::FORGE,
        nsl::RESPONDER_CHECK,
    ];
    ensure(labels == expected, || format!("trace {labels:?}"))?;
    let last = t.steps.last().unwrap();
    ensure(last.observables["responder state"] == "commit", || "responder did not commit".into())?;
    let sigma = |i: usize| t.steps[i].observables["sigma_leak"].as_f64().unwrap_or(f64::NAN);
    let obs = |m, s| GaussianFuzzyNumber::new(m, s).map_err(|e| e.to_string());
    let coarse = fuse(LeakEstimate::NonInformative, obs(50.0, 37.95)?).map_err(|e| e.to_string())?;
    let fine = fuse(LeakEstimate::Gaussian(coarse), obs(50.0, 5.0)?).map_err(|e| e.to_string())?;
    let (c, f) = (quantize_decimal(coarse.sigma(), 2), quantize_decimal(fine.sigma(), 2));
    ensure((sigma(0) - c).abs() <= 0.01 && (c - 37.95).abs() <= 0.01, || format!("coarse σ {} vs {c}", sigma(0)))?;
    ensure((sigma(1) - f).abs() <= 0.01 && (f - 4.96).abs() <= 0.01, || format!("fine σ {} vs {f}", sigma(1)))?;
    Ok(format!("{} steps, σ {:.2} then {:.2}", t.len(), sigma(0), sigma(1)))
}

fn support_golden() -> Outcome {
    let d = propagate_interval(Interval::new(38.23, 61.77).unwrap(), AffineMap::shift(10.0)).map_err(|e| e.to_string())?;
    ensure(d.cardinality == 25 && (d.bits - 4.6439).abs() <= 0.001, || format!("{d:?}"))?;
    Ok(format!("[{}, {}], {} cells, {:.4} bits", d.lo, d.hi, d.cardinality, d.bits))
}

fn crisp_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut targets = 0;
    for case in 0..1000 {
        let s = common::random_knowledge(&mut rng);
        targets += common::check_crisp_equivalence(&s, &mut rng).map_err(|e| format!("case {case}: {e}"))?;
    }
    Ok(format!("1000 sets, {targets} targets, 0 discrepancies"))
}

fn leak_monotonicity() -> Outcome {
    let grid = Grid::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut steps, mut halvings) = (0, 0);
    for case in 0..1000 {
        let seq = common::random_leak_sequence(&mut rng, &grid);
        let st = common::check_leak_sequence(&seq, &grid).map_err(|e| format!("sequence {case}: {e}"))?;
        steps += st.steps;
        halvings += st.halvings;
    }
    ensure(halvings > 0, || "no halving exercised".into())?;
    Ok(format!("1000 sequences, {steps} steps, {halvings} exact halvings"))
}

fn cosimulation() -> Outcome {
    let st = common::cosimulate(10);
    ensure(st.violations.is_empty(), || format!("{} violations, first {}", st.violations.len(), st.violations[0]))?;
    ensure(st.pairs > 0, || "no pairs".into())?;
    Ok(format!("{} matched pairs, {} α-checks, 0 violations", st.pairs, st.checks))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn reduct_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for case in 0..200 {
        let ctx = common::random_context(&mut rng, 8, 12);
        let bin = ctx.binarize();
        let oracle = common::brute_force(&bin.columns, bin.universe());
        let r = enumerate_e_reducts(&ctx).map_err(|e| e.to_string())?;
        let got: BTreeSet<Vec<usize>> = r.reduct_indices.iter().cloned().collect();
        ensure(got == oracle.reducts && r.core_indices == oracle.core, || format!("context {case} disagrees"))?;
    }
    let ctx = FormalContext::from_csv_path(fixture("synthetic_10x17.csv"), 0.5).map_err(|e| e.to_string())?;
    let r = enumerate_e_reducts(&ctx).map_err(|e| e.to_string())?;
    let text = std::fs::read_to_string(fixture("synthetic_10x17.oracle.json")).map_err(|e| e.to_string())?;
    let oracle: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let same = serde_json::to_value(&r.reducts).unwrap() == oracle["reducts"]
        && serde_json::to_value(&r.core).unwrap() == oracle["core"]
        && serde_json::to_value(&r.redundant).unwrap() == oracle["redundant"];
    ensure(same, || "synthetic fixture differs from its oracle".into())?;
    Ok(format!("200 contexts agree, fixture has {} reducts", r.reducts.len()))
}

fn pruning() -> Outcome {
    let full = model("nsl_safe_fullctx")?;
    let keep = select_keep(&full).map_err(|e| e.to_string())?;
    let pruned = prune_model(&full, &keep).map_err(|e| e.to_string())?;
    let (a, b) = (run(&full)?, run(&pruned)?);
    ensure(a.outcome() == b.outcome() && a.violated_invariant() == b.violated_invariant(), || {
        format!("{} vs {}", a.outcome(), b.outcome())
    })?;
    let bundled = run(&model("nsl_safe")?)?;
    ensure(bundled.states() == b.states(), || "bundled pruned model differs".into())?;
    let reduction = 1.0 - b.states() as f64 / a.states() as f64;
    ensure(reduction >= 0.40, || format!("reduction {:.1}%", reduction * 100.0))?;
    Ok(format!("{} verdicts, {} → {} states, {:.1}% reduction", a.outcome(), a.states(), b.states(), reduction * 100.0))
}

fn precision_sweep() -> Outcome {
    let opts = ExploreOptions::default();
    for name in model_names() {
        let r = sweep(name, &ProtocolConfig::default(), &[2, 4], &[0.01, 0.0001], &opts, false).map_err(|e| e.to_string())?;
        ensure(r.settings.len() == 4 && r.all_verdicts_equal, || format!("{name}: {}", r.to_text()))?;
    }
    Ok(format!("{} models × 4 settings", model_names().len()))
}

fn determinism() -> Outcome {
    let cfg = ProtocolConfig::default();
    let reports = |workers: &str| -> Result<Vec<String>, String> {
        std::env::set_var("FUZZYDY_WORKERS", workers);
        let opts = ExploreOptions {
            workers: ExploreOptions::workers_from_env()?,
            ..ExploreOptions::default()
        };
        model_names()
            .iter()
            .map(|n| verify_named(n, &cfg, &opts, false).map(|r| r.to_stable_json()).map_err(|e| e.to_string()))
            .collect()
    };
    let (a, b) = (reports("1")?, reports("1")?);
    ensure(a == b, || "two runs produced different reports".into())?;
    let c = reports("4")?;
    std::env::remove_var("FUZZYDY_WORKERS");
    ensure(a == c, || "workers=4 changed a report".into())?;
    Ok(format!("{} reports byte-identical across runs and worker counts", a.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("verdict divergence matrix", verdict_matrix),
        ("leaky NSL counterexample trace", counterexample_trace),
        ("support propagation golden", support_golden),
        ("binary grades match crisp closure", crisp_equivalence),
        ("leak updates shrink supports", leak_monotonicity),
        ("crisp runs embed in graded runs", cosimulation),
        ("reducts match exhaustive search", reduct_oracle),
        ("pruning preserves verdict", pruning),
        ("precision sweep stability", precision_sweep),
        ("determinism", determinism),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = check();
        let ms = t.elapsed().as_millis();
        match res {
            Ok(detail) => println!("[PASS] {:>2}. {name}: {detail} ({ms} ms)", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {:>2}. {name}: {why} ({ms} ms)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed in {:.1} s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
