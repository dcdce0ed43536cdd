use indexmap::IndexSet;
use rayon::prelude::*;

use super::{reconstruct_trace, EngineError, Model, ModelState, Symmetry, Trace};

pub const DEFAULT_MAX_STATES: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExploreOptions {
    pub max_states: usize,
    pub max_depth: Option<usize>,
    pub symmetry: bool,
    pub workers: usize,
}

impl Default for ExploreOptions {
    fn default() -> Self {
        ExploreOptions {
            max_states: DEFAULT_MAX_STATES,
            max_depth: None,
            symmetry: true,
            workers: 1,
        }
    }
}

impl ExploreOptions {
    /// Worker count from `FUZZYDY_WORKERS`, defaulting to one.
    pub fn workers_from_env() -> Result<usize, String> {
        match std::env::var("FUZZYDY_WORKERS") {
            Err(_) => Ok(1),
            Ok(s) => match s.trim().parse::<usize>() {
                Ok(n) if n >= 1 => Ok(n),
                _ => Err(format!("FUZZYDY_WORKERS must be an integer >= 1, got `{s}`")),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Pass {
        states: usize,
        rules_fired: u64,
    },
    Fail {
        violated_invariant: String,
        trace: Trace,
        states: usize,
        rules_fired: u64,
    },
    Inconclusive {
        reason: String,
        states: usize,
        rules_fired: u64,
    },
}

impl Verdict {
    pub fn outcome(&self) -> &'static str {
        match self {
            Verdict::Pass { .. } => "pass",
            Verdict::Fail { .. } => "fail",
            Verdict::Inconclusive { .. } => "inconclusive",
        }
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass { .. })
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail { .. })
    }

    pub fn states(&self) -> usize {
        match self {
            Verdict::Pass { states, .. }
            | Verdict::Fail { states, .. }
            | Verdict::Inconclusive { states, .. } => *states,
        }
    }

    pub fn rules_fired(&self) -> u64 {
        match self {
            Verdict::Pass { rules_fired, .. }
            | Verdict::Fail { rules_fired, .. }
            | Verdict::Inconclusive { rules_fired, .. } => *rules_fired,
        }
    }

    pub fn violated_invariant(&self) -> Option<&str> {
        match self {
            Verdict::Fail {
                violated_invariant, ..
            } => Some(violated_invariant),
            _ => None,
        }
    }

    pub fn trace(&self) -> Option<&Trace> {
        match self {
            Verdict::Fail { trace, .. } => Some(trace),
            _ => None,
        }
    }
}

/// How a stored state was first reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Parent {
    pub state: u32,
    pub rule: u16,
}

/// Everything a finished search keeps: the verdict plus the visited store
/// and its parent links.
pub struct Exploration {
    pub verdict: Verdict,
    pub visited: IndexSet<ModelState>,
    pub parents: Vec<Option<Parent>>,
}

struct Successor {
    rule: u16,
    state: ModelState,
    violated: Option<usize>,
}

fn expand(
    model: &Model,
    sym: Option<&Symmetry>,
    s: &ModelState,
) -> Result<Vec<Successor>, EngineError> {
    let mut out = Vec::new();
    for (i, rule) in model.rules.iter().enumerate() {
        if !rule.enabled(s, &model.layout) {
            continue;
        }
        let next = rule.fire(s, &model.layout);
        model.check_domains(rule, &next)?;
        let state = match sym {
            Some(sym) => sym.canonicalize(&next),
            None => next,
        };
        let violated = model.first_violation(&state);
        out.push(Successor {
            rule: i as u16,
            state,
            violated,
        });
    }
    Ok(out)
}

pub fn explore(model: &Model, opts: &ExploreOptions) -> Result<Verdict, EngineError> {
    explore_full(model, opts).map(|e| e.verdict)
}

/// Level-synchronous breadth-first search.
///
/// Successor generation for a level may run on several workers, but results
/// are merged in frontier order and rule order, so the visited store, its
/// numbering and every reported trace are independent of the worker count.
pub fn explore_full(model: &Model, opts: &ExploreOptions) -> Result<Exploration, EngineError> {
    let symmetry = Symmetry::new(model);
    let sym = if opts.symmetry && !symmetry.is_trivial() {
        Some(&symmetry)
    } else {
        None
    };
    let pool = if opts.workers > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(opts.workers)
                .build()
                .expect("thread pool"),
        )
    } else {
        None
    };

    let mut visited: IndexSet<ModelState> = IndexSet::new();
    let mut parents: Vec<Option<Parent>> = Vec::new();
    let mut rules_fired: u64 = 0;

    let finish = |verdict: Verdict, visited, parents| Exploration {
        verdict,
        visited,
        parents,
    };

    for s in &model.initial {
        let s = match sym {
            Some(sym) => sym.canonicalize(s),
            None => s.clone(),
        };
        let (idx, fresh) = visited.insert_full(s);
        if !fresh {
            continue;
        }
        parents.push(None);
        if let Some(inv) = model.first_violation(&visited[idx]) {
            let trace = reconstruct_trace(model, &visited, &parents, idx, sym.is_some())?;
            let verdict = Verdict::Fail {
                violated_invariant: model.invariants[inv].name.clone(),
                trace,
                states: visited.len(),
                rules_fired,
            };
            return Ok(finish(verdict, visited, parents));
        }
    }

    let mut level_start = 0;
    let mut depth = 0;
    while level_start < visited.len() {
        let level_end = visited.len();
        let frontier: Vec<&ModelState> = (level_start..level_end).map(|i| &visited[i]).collect();
        let expanded: Vec<Result<Vec<Successor>, EngineError>> = match &pool {
            Some(pool) => pool.install(|| {
                frontier
                    .par_iter()
                    .map(|s| expand(model, sym, s))
                    .collect()
            }),
            None => frontier.iter().map(|s| expand(model, sym, s)).collect(),
        };
        drop(frontier);

        for (offset, succs) in expanded.into_iter().enumerate() {
            let parent = (level_start + offset) as u32;
            for succ in succs? {
                rules_fired += 1;
                if visited.contains(&succ.state) {
                    continue;
                }
                if opts.max_depth.is_some_and(|d| depth >= d) {
                    let verdict = Verdict::Inconclusive {
                        reason: format!("depth limit {} reached", depth),
                        states: visited.len(),
                        rules_fired,
                    };
                    return Ok(finish(verdict, visited, parents));
                }
                if visited.len() >= opts.max_states {
                    let verdict = Verdict::Inconclusive {
                        reason: format!("state limit {} reached", opts.max_states),
                        states: visited.len(),
                        rules_fired,
                    };
                    return Ok(finish(verdict, visited, parents));
                }
                let (idx, _) = visited.insert_full(succ.state);
                parents.push(Some(Parent {
                    state: parent,
                    rule: succ.rule,
                }));
                if let Some(inv) = succ.violated {
                    let trace = reconstruct_trace(model, &visited, &parents, idx, sym.is_some())?;
                    let verdict = Verdict::Fail {
                        violated_invariant: model.invariants[inv].name.clone(),
                        trace,
                        states: visited.len(),
                        rules_fired,
                    };
                    return Ok(finish(verdict, visited, parents));
                }
            }
        }
        level_start = level_end;
        depth += 1;
    }

    let verdict = Verdict::Pass {
        states: visited.len(),
        rules_fired,
    };
    Ok(finish(verdict, visited, parents))
}
