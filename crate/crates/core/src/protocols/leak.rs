use std::sync::Arc;

use super::{MessageRecord, ProtocolConfig, ProtocolError};
use crate::engine::{Domain, ModelBuilder, Rule, RuleKind, Value, VarId, View};
use crate::fuzzy::{
    fuse_quantized, one_bit_event, GaussianFuzzyNumber, Grade, Grid, LeakEstimate,
    MembershipVector, KEY_DOMAIN,
};

pub const LP_NONE: Value = 0;
pub const LP_COARSE_DONE: Value = 1;
pub const LP_FINE_DONE: Value = 2;

/// The attacker's running estimate of the leak target, evaluated through
/// Gaussian fusion. σ is kept as a fixed-point integer; 0 stands for the
/// non-informative prior.
#[derive(Debug, Clone)]
pub struct LeakModel {
    grid: Grid,
    alpha: f64,
    mean: f64,
    scale: f64,
    precision: u32,
    bound: f64,
}

impl LeakModel {
    pub fn new(cfg: &ProtocolConfig) -> Result<Self, ProtocolError> {
        Ok(LeakModel {
            grid: cfg.grid()?,
            alpha: cfg.alpha_threshold,
            mean: cfg.leak_mean,
            scale: cfg.sigma_scale(),
            precision: cfg.precision,
            bound: cfg.forge_sigma_bound,
        })
    }

    pub fn sigma_domain(&self) -> Domain {
        Domain::Fixed {
            lo: 0,
            hi: (KEY_DOMAIN as f64 * self.scale) as Value,
            places: self.precision,
        }
    }

    pub fn estimate(&self, sigma: Value) -> LeakEstimate {
        if sigma == 0 {
            LeakEstimate::NonInformative
        } else {
            let g = GaussianFuzzyNumber::new(self.mean, sigma as f64 / self.scale)
                .expect("stored sigma is positive");
            LeakEstimate::Gaussian(g)
        }
    }

    pub fn sigma_value(&self, sigma: Value) -> Option<f64> {
        self.estimate(sigma).sigma()
    }

    /// Fuses one observation into the stored estimate.
    pub fn observe(&self, sigma: Value, obs_sigma: f64) -> Value {
        let obs = GaussianFuzzyNumber::new(self.mean, obs_sigma).expect("validated sigma");
        let fused = fuse_quantized(self.estimate(sigma), obs, self.precision)
            .expect("fusion of positive sigmas");
        (fused.sigma() * self.scale).round() as Value
    }

    /// `|Supp^α|` of the discretized estimate.
    pub fn support(&self, sigma: Value) -> usize {
        match self.estimate(sigma) {
            LeakEstimate::NonInformative => KEY_DOMAIN,
            LeakEstimate::Gaussian(g) => MembershipVector::from_gaussian(&self.grid, &g)
                .alpha_cut(self.alpha)
                .expect("validated alpha")
                .cardinality(),
        }
    }

    /// Grade of the responder-expected value of the leak target.
    ///
    /// Chosen so that the grade reaches α exactly when σ falls to the forge
    /// bound: `min(1, α·bound/σ)`, discretized.
    pub fn grade(&self, sigma: Value) -> Grade {
        match self.sigma_value(sigma) {
            None => Grade::ZERO,
            Some(s) => self.grid.quantize((self.alpha * self.bound / s).min(1.0)),
        }
    }

    /// Epistemic half of the forge guard.
    pub fn actionable(&self, sigma: Value) -> bool {
        self.grade(sigma).value() >= self.alpha
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

pub struct LeakVars {
    pub phase: VarId,
    pub one_bit: VarId,
    pub sigma: VarId,
    pub support: Option<VarId>,
}

impl LeakVars {
    /// Declares the epistemic variables. The support tracker only exists in
    /// leaky variants; everything else is present in both so the two
    /// variants share one state layout for the protocol part.
    pub fn declare(b: &mut ModelBuilder, leak: &LeakModel, leak_enabled: bool) -> LeakVars {
        let phase = b.var(
            "leakPhase",
            Domain::labels(&["none", "coarse-done", "fine-done"]),
            LP_NONE,
        );
        let one_bit = b.var("leakOneBit", Domain::Bool, 0);
        let sigma = b.var("leak_sigma", leak.sigma_domain(), 0);
        let support = leak_enabled.then(|| {
            b.var(
                "leak_support",
                Domain::Range {
                    lo: 0,
                    hi: KEY_DOMAIN as Value,
                },
                KEY_DOMAIN as Value,
            )
        });
        LeakVars {
            phase,
            one_bit,
            sigma,
            support,
        }
    }
}

pub type Carrier = Arc<dyn Fn(&MessageRecord) -> bool + Send + Sync>;

/// What the leak rules update besides the estimate itself: the intruder
/// store is scanned for the carrier message, and `target_known` (if any) is
/// raised once the carrier is held and the estimate is actionable.
pub struct LeakTarget {
    pub store: Vec<VarId>,
    pub carrier: Carrier,
    pub target_known: Option<VarId>,
}

pub fn carrier_held(v: &View, store: &[VarId], carrier: &Carrier) -> bool {
    store
        .iter()
        .any(|&s| MessageRecord::unpack(v[s]).is_some_and(|m| carrier(&m)))
}

/// Coarse and fine stuttering observation rules; no protocol control
/// variable is written.
pub fn leak_rules(
    cfg: &ProtocolConfig,
    leak: &Arc<LeakModel>,
    vars: &LeakVars,
    target: &LeakTarget,
    labels: [&str; 2],
    coarse_sigma: f64,
    fine_sigma: f64,
) -> Vec<Rule> {
    debug_assert!(cfg.leak_enabled);
    let support = vars.support.expect("leaky variant declares leak_support");
    let steps = [
        ("leak_coarse", labels[0], LP_NONE, LP_COARSE_DONE, coarse_sigma),
        ("leak_fine", labels[1], LP_COARSE_DONE, LP_FINE_DONE, fine_sigma),
    ];
    steps
        .into_iter()
        .map(|(group, label, from, to, obs)| {
            let (phase, sigma, one_bit) = (vars.phase, vars.sigma, vars.one_bit);
            let mut rule = Rule::new(label, RuleKind::Leak)
                .group(group)
                .when(&[phase], move |v| v[phase] == from)
                .set_const(phase, to);
            let l = leak.clone();
            rule = rule.set(sigma, &[sigma], move |v| l.observe(v[sigma], obs));
            let l = leak.clone();
            rule = rule.set(support, &[sigma], move |v| l.support(l.observe(v[sigma], obs)) as Value);
            let l = leak.clone();
            rule = rule.set(one_bit, &[one_bit, support, sigma], move |v| {
                let cur = l.support(l.observe(v[sigma], obs));
                (v.flag(one_bit) || one_bit_event(v[support] as usize, cur)) as Value
            });
            if let Some(known) = target.target_known {
                let l = leak.clone();
                let store = target.store.clone();
                let carrier = target.carrier.clone();
                let mut reads = vec![known, sigma];
                reads.extend(&store);
                rule = rule.set(known, &reads, move |v| {
                    let now = l.actionable(l.observe(v[sigma], obs)) && carrier_held(v, &store, &carrier);
                    (v.flag(known) || now) as Value
                });
            }
            rule
        })
        .collect()
}

/// Forgery precondition: the estimate is actionable and the carrier of the
/// leak target has been intercepted.
pub fn forge_guard(v: &View, leak: &LeakModel, sigma: VarId, store: &[VarId], carrier: &Carrier) -> bool {
    leak.actionable(v[sigma]) && carrier_held(v, store, carrier)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> LeakModel {
        LeakModel::new(&ProtocolConfig::leaky()).unwrap()
    }

    #[test]
    fn staged_observations_match_recorded_sigmas() {
        let l = model();
        let coarse = l.observe(0, 37.95);
        assert_eq!(coarse, 3795);
        let fine = l.observe(coarse, 5.0);
        assert_eq!(fine, 496);
    }

    #[test]
    fn grade_crosses_alpha_at_the_bound() {
        let l = model();
        assert_eq!(l.grade(0), Grade::ZERO);
        assert!(!l.actionable(3795));
        assert!(l.actionable(496));
        assert!(l.actionable(500));
        assert!(!l.actionable(501));
    }

    #[test]
    fn supports_shrink_by_more_than_half() {
        let l = model();
        assert_eq!(l.support(0), 256);
        let coarse = l.support(3795);
        let fine = l.support(496);
        assert!(one_bit_event(256, coarse));
        assert!(one_bit_event(coarse, fine));
        assert_eq!(fine, 11);
    }
}
