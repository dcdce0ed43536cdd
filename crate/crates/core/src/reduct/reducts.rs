use std::collections::BTreeSet;

use itertools::Itertools;
use serde::Serialize;

use super::{BinaryContext, FormalContext, ReductError};

/// Reduct search refuses contexts with more attributes than this.
pub const MAX_ATTRIBUTES: usize = 20;

/// Object sets closed under intersection, as bitmasks over `U`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtentFamily(BTreeSet<u64>);

impl ExtentFamily {
    pub fn contains(&self, extent: u64) -> bool {
        self.0.contains(&extent)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().copied()
    }
}

/// Extents of the context restricted to `subset`: every intersection of
/// attribute columns, with the empty intersection giving `U`.
pub fn extents(ctx: &BinaryContext, subset: &[usize]) -> ExtentFamily {
    let mut family = BTreeSet::from([ctx.universe()]);
    for &a in subset {
        let col = ctx.columns[a];
        let new: Vec<u64> = family.iter().map(|e| e & col).collect();
        family.extend(new);
    }
    ExtentFamily(family)
}

fn closure_of(ctx: &BinaryContext, subset: u32, col: u64) -> u64 {
    (0..ctx.columns.len())
        .filter(|&b| subset >> b & 1 == 1 && ctx.columns[b] & col == col)
        .fold(ctx.universe(), |acc, b| acc & ctx.columns[b])
}

fn consistent_mask(ctx: &BinaryContext, subset: u32) -> bool {
    // The restricted family is always contained in the full one; they agree
    // iff every dropped column is itself an intersection of kept columns.
    (0..ctx.columns.len())
        .filter(|&a| subset >> a & 1 == 0)
        .all(|a| closure_of(ctx, subset, ctx.columns[a]) == ctx.columns[a])
}

fn mask(subset: &[usize]) -> u32 {
    subset.iter().fold(0, |m, &a| m | 1 << a)
}

/// Whether `subset` induces the same extent family as the full attribute set.
pub fn is_e_consistent(ctx: &BinaryContext, subset: &[usize]) -> bool {
    assert!(ctx.columns.len() <= 32, "attribute masks are 32 bits wide");
    consistent_mask(ctx, mask(subset))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductReport {
    pub reducts: Vec<Vec<String>>,
    pub core: Vec<String>,
    pub redundant: Vec<String>,
    #[serde(skip)]
    pub reduct_indices: Vec<Vec<usize>>,
    #[serde(skip)]
    pub core_indices: Vec<usize>,
    #[serde(skip)]
    pub redundant_indices: Vec<usize>,
}

impl ReductReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn enumerate_e_reducts(ctx: &FormalContext) -> Result<ReductReport, ReductError> {
    enumerate_e_reducts_bounded(ctx, MAX_ATTRIBUTES)
}

/// All minimal E-consistent attribute sets, by increasing cardinality and
/// then lexicographically.
pub fn enumerate_e_reducts_bounded(
    ctx: &FormalContext,
    bound: usize,
) -> Result<ReductReport, ReductError> {
    let n = ctx.attributes().len();
    if n > bound.min(32) {
        return Err(ReductError::TooManyAttributes {
            got: n,
            bound: bound.min(32),
        });
    }
    let bin = ctx.binarize();
    let full: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };

    // Any consistent set keeps every attribute whose removal alone breaks
    // consistency, so the search only visits supersets of the core.
    let core: u32 = (0..n)
        .filter(|&a| !consistent_mask(&bin, full & !(1 << a)))
        .fold(0, |m, a| m | 1 << a);
    let rest: Vec<usize> = (0..n).filter(|&a| core >> a & 1 == 0).collect();

    let mut found: Vec<u32> = Vec::new();
    for k in 0..=rest.len() {
        for comb in rest.iter().copied().combinations(k) {
            let cand = comb.iter().fold(core, |m, &a| m | 1 << a);
            if found.iter().any(|r| r & !cand == 0) {
                continue;
            }
            if consistent_mask(&bin, cand) {
                found.push(cand);
            }
        }
    }

    let members = |m: u32| -> Vec<usize> { (0..n).filter(|&a| m >> a & 1 == 1).collect() };
    let mut reduct_indices: Vec<Vec<usize>> = found.iter().map(|&m| members(m)).collect();
    reduct_indices.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let union = found.iter().fold(0, |m, &r| m | r);
    let core_mask = found.iter().fold(full, |m, &r| m & r);
    debug_assert_eq!(core_mask, core);
    let names = |ix: &[usize]| -> Vec<String> {
        ix.iter().map(|&a| ctx.attributes()[a].clone()).collect()
    };
    let core_indices = members(core_mask);
    let redundant_indices = members(full & !union);
    Ok(ReductReport {
        reducts: reduct_indices.iter().map(|r| names(r)).collect(),
        core: names(&core_indices),
        redundant: names(&redundant_indices),
        reduct_indices,
        core_indices,
        redundant_indices,
    })
}
