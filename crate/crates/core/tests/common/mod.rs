//! Generators and oracles shared by the property suites and the acceptance
//! runner.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};

use fuzzydy_core::engine::{Model, ModelState};
use fuzzydy_core::fuzzy::{
    hartley, hartley_drop, leak_update, GaussianFuzzyNumber, Grid, MembershipVector, TNorm,
};
use fuzzydy_core::protocols::knowledge::nsl_knowledge;
use fuzzydy_core::protocols::{build_model, LeakModel, ProtocolConfig};
use fuzzydy_core::reduct::FormalContext;
use fuzzydy_core::terms::{
    alpha_project, crisp_closure, derivable, graded_closure, graded_degree, KnowledgeMap,
    KnowledgeSet, Term, Universe, DEFAULT_DEPTH,
};
use rand::seq::SliceRandom;
use rand::Rng;

pub const ALPHAS: [f64; 10] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

// ---- terms ----

const AGENTS: [char; 3] = ['A', 'B', 'I'];

pub fn random_atom<R: Rng>(rng: &mut R) -> Term {
    let a = *AGENTS.choose(rng).unwrap();
    match rng.gen_range(0..5) {
        0 => Term::agent(a),
        1 => Term::nonce(a, rng.gen_range(1..=2)),
        2 => Term::key(rng.gen_range(1..=3)),
        3 => Term::pk(a),
        _ => Term::sk(a),
    }
}

pub fn random_term<R: Rng>(rng: &mut R, depth: usize) -> Term {
    if depth == 0 || rng.gen_bool(0.35) {
        return random_atom(rng);
    }
    let m = random_term(rng, depth - 1);
    let a = *AGENTS.choose(rng).unwrap();
    match rng.gen_range(0..4) {
        0 => Term::pair(m, random_term(rng, depth - 1)),
        1 => Term::senc(m, Term::key(rng.gen_range(1..=3))),
        2 => Term::penc(m, Term::pk(a)),
        _ => Term::sign(m, Term::sk(a)),
    }
}

/// A knowledge set of depth-≤3 terms whose subterm universe has at most 40
/// members.
pub fn random_knowledge<R: Rng>(rng: &mut R) -> KnowledgeSet {
    loop {
        let n = rng.gen_range(1..=6);
        let s: KnowledgeSet = (0..n).map(|_| random_term(rng, DEFAULT_DEPTH)).collect();
        if Universe::of(DEFAULT_DEPTH, s.iter()).len() <= 40 {
            return s;
        }
    }
}

pub fn random_grade_map<R: Rng>(rng: &mut R, grid: &Grid) -> KnowledgeMap {
    random_knowledge(rng)
        .iter()
        .map(|t| (t.clone(), grid.quantize(rng.gen_range(0.0..=1.0))))
        .collect()
}

/// Binary grades: degree 1 exactly where the crisp closure derives.
/// Returns the number of targets compared.
pub fn check_crisp_equivalence<R: Rng>(s: &KnowledgeSet, rng: &mut R) -> Result<usize, String> {
    let mu: KnowledgeMap = s.iter().map(|t| (t.clone(), fuzzydy_core::fuzzy::Grade::ONE)).collect();
    let closure = crisp_closure(s, DEFAULT_DEPTH);
    let mut targets: Vec<Term> = Universe::of(DEFAULT_DEPTH, s.iter()).terms().iter().cloned().collect();
    targets.extend((0..4).map(|_| random_term(rng, 2)));
    let known: Vec<&Term> = closure.iter().collect();
    if known.len() >= 2 {
        targets.push(Term::pair(known[0].clone(), known[known.len() - 1].clone()));
    }
    for t in &targets {
        let g = graded_degree(&mu, t, DEFAULT_DEPTH);
        let d = derivable(s, t, DEFAULT_DEPTH);
        if g.is_one() != d || !(g.is_one() || g.value() == 0.0) {
            return Err(format!("{t}: graded {} vs crisp {d} from {:?}", g.value(), s));
        }
        if closure.contains(t) && !d {
            return Err(format!("{t}: closure and derivable disagree"));
        }
    }
    Ok(targets.len())
}

/// `crisp_closure(π_α(μ)) ⊆ π_α(graded_closure(μ))`.
pub fn check_alpha_monotonicity(mu: &KnowledgeMap, alpha: f64) -> Result<(), String> {
    let crisp = crisp_closure(&alpha_project(mu, alpha).unwrap(), DEFAULT_DEPTH);
    let graded = alpha_project(&graded_closure(mu, DEFAULT_DEPTH), alpha).unwrap();
    let missing = crisp.iter().find(|t| !graded.contains(t)).cloned();
    match missing {
        None => Ok(()),
        Some(t) => Err(format!("α={alpha}: {t} is crisp-derivable but below the cut")),
    }
}

// ---- leak sequences ----

/// Gaussian readings mixed with crisp observations that keep exactly half
/// of the current support.
pub fn random_leak_sequence<R: Rng>(rng: &mut R, grid: &Grid) -> Vec<MembershipVector> {
    let len = rng.gen_range(1..=10);
    let mut prior = MembershipVector::full();
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        let obs = if rng.gen_bool(0.3) {
            let alpha = *ALPHAS.choose(rng).unwrap();
            let mut cells: Vec<usize> = prior.alpha_cut(alpha).unwrap().support.into_iter().collect();
            cells.shuffle(rng);
            let keep: BTreeSet<usize> = cells.iter().take(cells.len() / 2).copied().collect();
            let mut v = MembershipVector::empty();
            for x in keep {
                v.set(x, fuzzydy_core::fuzzy::Grade::ONE);
            }
            v
        } else {
            let g = GaussianFuzzyNumber::new(rng.gen_range(0.0..255.0), rng.gen_range(1.0..80.0)).unwrap();
            MembershipVector::from_gaussian(grid, &g)
        };
        prior = leak_update(&prior, &obs, TNorm::Product, grid);
        out.push(obs);
    }
    out
}

#[derive(Debug, Default, Clone, Copy)]
pub struct LeakStats {
    pub steps: usize,
    pub halvings: usize,
}

/// Support is non-increasing at every α, and each exact halving of a
/// support drops the Hartley measure by exactly one bit.
pub fn check_leak_sequence(obs: &[MembershipVector], grid: &Grid) -> Result<LeakStats, String> {
    let mut stats = LeakStats::default();
    let mut prior = MembershipVector::full();
    for (i, o) in obs.iter().enumerate() {
        let next = leak_update(&prior, o, TNorm::Product, grid);
        for alpha in ALPHAS {
            let before = prior.alpha_cut(alpha).unwrap();
            let after = next.alpha_cut(alpha).unwrap();
            if !after.is_subset(&before) {
                return Err(format!("step {i}, α={alpha}: support grew"));
            }
            let (p, c) = (before.cardinality(), after.cardinality());
            if c > 0 && p == 2 * c {
                stats.halvings += 1;
                let drop = hartley_drop(p, c).unwrap();
                if drop != 1.0 {
                    return Err(format!("step {i}, α={alpha}: halving {p}→{c} dropped {drop} bits"));
                }
                let h = hartley(p).unwrap() - hartley(c).unwrap();
                if (h - 1.0).abs() > 1e-12 {
                    return Err(format!("step {i}: H difference {h}"));
                }
            }
        }
        if !next.le(&prior) {
            return Err(format!("step {i}: update raised a cell"));
        }
        prior = next;
        stats.steps += 1;
    }
    Ok(stats)
}

// ---- reducts ----

/// `A'` for every attribute mask `A`, straight from the derivation operator.
pub fn derivations(cols: &[u64], universe: u64) -> Vec<u64> {
    let n = cols.len();
    let mut ext = vec![universe; 1 << n];
    for a in 1..(1usize << n) {
        let low = a.trailing_zeros() as usize;
        ext[a] = ext[a & (a - 1)] & cols[low];
    }
    ext
}

pub struct Brute {
    pub reducts: BTreeSet<Vec<usize>>,
    pub core: Vec<usize>,
}

/// Exhaustive search: `B` is consistent iff `{A' : A ⊆ B}` equals
/// `{A' : A ⊆ V}`.
pub fn brute_force(cols: &[u64], universe: u64) -> Brute {
    let n = cols.len();
    let ext = derivations(cols, universe);
    let family = |b: usize| -> BTreeSet<u64> {
        let mut fam = BTreeSet::new();
        let mut a = b;
        loop {
            fam.insert(ext[a]);
            if a == 0 {
                break;
            }
            a = (a - 1) & b;
        }
        fam
    };
    let full = family((1 << n) - 1);
    let consistent: Vec<bool> = (0..1usize << n).map(|b| family(b) == full).collect();
    let mut reducts = BTreeSet::new();
    for b in 0..1usize << n {
        if consistent[b] && (0..n).all(|a| b >> a & 1 == 0 || !consistent[b & !(1 << a)]) {
            reducts.insert((0..n).filter(|&a| b >> a & 1 == 1).collect::<Vec<_>>());
        }
    }
    let core = (0..n).filter(|a| reducts.iter().all(|r| r.contains(a))).collect();
    Brute { reducts, core }
}

pub fn random_context<R: Rng>(rng: &mut R, max_objects: usize, max_attributes: usize) -> FormalContext {
    let u = rng.gen_range(1..=max_objects);
    let v = rng.gen_range(1..=max_attributes);
    let density = rng.gen_range(0.2..0.8);
    let rows = (0..u)
        .map(|_| {
            (0..v)
                .map(|_| {
                    if rng.gen_bool(density) {
                        *[1.0, 0.75, 0.5].choose(rng).unwrap()
                    } else {
                        *[0.0, 0.25, 0.49].choose(rng).unwrap()
                    }
                })
                .collect()
        })
        .collect();
    FormalContext::new(
        (0..u).map(|i| format!("u{i}")).collect(),
        (0..v).map(|j| format!("v{j}")).collect(),
        rows,
        0.5,
    )
    .unwrap()
}

// ---- co-simulation ----

#[derive(Debug, Default, Clone)]
pub struct CosimStats {
    pub pairs: usize,
    pub checks: usize,
    pub violations: Vec<String>,
}

/// Runs every leak-free NSL path of length ≤ `depth` alongside the leaky
/// model (after zero, one or two leak steps) and compares the crisp
/// knowledge with the α-cut of the graded knowledge at every matched step.
pub fn cosimulate(depth: usize) -> CosimStats {
    let cfg = ProtocolConfig::default();
    let crisp = build_model("ns_fuzzy_auth_safe", &cfg).unwrap();
    let fuzzy = build_model("ns_fuzzy_auth", &cfg).unwrap();
    let leak = LeakModel::new(&ProtocolConfig::leaky()).unwrap();
    let leak_rules: Vec<usize> = fuzzy
        .rules
        .iter()
        .enumerate()
        .filter(|(_, r)| r.kind == fuzzydy_core::engine::RuleKind::Leak)
        .map(|(i, _)| i)
        .collect();

    let mut crisp_cache: HashMap<ModelState, KnowledgeSet> = HashMap::new();
    let mut fuzzy_cache: HashMap<ModelState, KnowledgeMap> = HashMap::new();
    let mut stats = CosimStats::default();
    let mut seen: BTreeSet<(Vec<i32>, Vec<i32>)> = BTreeSet::new();
    let mut queue: VecDeque<(ModelState, ModelState, usize)> = VecDeque::new();

    for prefix in 0..=leak_rules.len() {
        let mut f = fuzzy.initial[0].clone();
        for &r in &leak_rules[..prefix] {
            f = fuzzy.rules[r].fire(&f, &fuzzy.layout);
        }
        queue.push_back((crisp.initial[0].clone(), f, 0));
    }
    while let Some((c, f, d)) = queue.pop_front() {
        if !seen.insert((c.values().to_vec(), f.values().to_vec())) {
            continue;
        }
        stats.pairs += 1;
        let k = crisp_cache
            .entry(c.clone())
            .or_insert_with(|| crisp_closure(&nsl_knowledge(&crisp, None, &c).support().cloned().collect(), DEFAULT_DEPTH))
            .clone();
        let mu = fuzzy_cache
            .entry(f.clone())
            .or_insert_with(|| graded_closure(&nsl_knowledge(&fuzzy, Some(&leak), &f), DEFAULT_DEPTH));
        for alpha in ALPHAS {
            stats.checks += 1;
            let cut = alpha_project(mu, alpha).unwrap();
            if let Some(t) = k.iter().find(|t| !cut.contains(t)) {
                stats.violations.push(format!("depth {d}, α={alpha}: {t}"));
            }
        }
        if d == depth {
            continue;
        }
        for r in crisp.rules.iter().filter(|r| r.enabled(&c, &crisp.layout)) {
            let fr = &fuzzy.rules[fuzzy.rule(&r.name).expect("shared rule")];
            if !fr.enabled(&f, &fuzzy.layout) {
                stats.violations.push(format!("depth {d}: {} not enabled in the graded run", r.name));
                continue;
            }
            queue.push_back((r.fire(&c, &crisp.layout), fr.fire(&f, &fuzzy.layout), d + 1));
        }
    }
    stats
}

pub fn model(name: &str) -> Model {
    build_model(name, &ProtocolConfig::default()).unwrap()
}
