use std::collections::BTreeSet;
use std::io::Read;
use std::path::Path;

use indexmap::IndexMap;

use super::ReductError;
use crate::engine::{Model, VarId};

pub const DEFAULT_LAMBDA: f64 = 0.5;

/// `(U, V, R, λ)`: objects, attributes, a graded incidence relation and the
/// binarization threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalContext {
    objects: Vec<String>,
    attributes: Vec<String>,
    relation: Vec<Vec<f64>>,
    lambda: f64,
}

impl FormalContext {
    pub fn new(
        objects: Vec<String>,
        attributes: Vec<String>,
        relation: Vec<Vec<f64>>,
        lambda: f64,
    ) -> Result<Self, ReductError> {
        if objects.is_empty() || attributes.is_empty() {
            return Err(ReductError::EmptyContext);
        }
        if objects.len() > 64 {
            return Err(ReductError::TooManyObjects(objects.len()));
        }
        if !(lambda > 0.0 && lambda <= 1.0) {
            return Err(ReductError::InvalidLambda(lambda));
        }
        if relation.len() != objects.len() {
            return Err(ReductError::Shape {
                row: relation.len(),
                got: 0,
                expected: attributes.len(),
            });
        }
        for (row, r) in relation.iter().enumerate() {
            if r.len() != attributes.len() {
                return Err(ReductError::Shape {
                    row,
                    got: r.len(),
                    expected: attributes.len(),
                });
            }
            for (col, &value) in r.iter().enumerate() {
                if !(0.0..=1.0).contains(&value) {
                    return Err(ReductError::OutOfRange { row, col, value });
                }
            }
        }
        Ok(FormalContext {
            objects,
            attributes,
            relation,
            lambda,
        })
    }

    /// Crisp context from a boolean incidence matrix.
    pub fn crisp(
        objects: Vec<String>,
        attributes: Vec<String>,
        incidence: &[Vec<bool>],
    ) -> Result<Self, ReductError> {
        let relation = incidence
            .iter()
            .map(|r| r.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect())
            .collect();
        Self::new(objects, attributes, relation, 1.0)
    }

    /// Header row holds attribute names (its first cell is ignored); each
    /// further row is an object name followed by one value per attribute.
    pub fn from_csv<R: Read>(reader: R, lambda: f64) -> Result<Self, ReductError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let err = |line: u64, col: usize, msg: String| ReductError::Csv { line, col, msg };
        let headers = rdr.headers().map_err(|e| err(1, 0, e.to_string()))?.clone();
        let attributes: Vec<String> = headers.iter().skip(1).map(str::to_string).collect();
        let mut objects = Vec::new();
        let mut relation = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| {
                let line = e.position().map_or(0, |p| p.line());
                err(line, 0, e.to_string())
            })?;
            let line = rec.position().map_or(0, |p| p.line());
            if rec.len() != attributes.len() + 1 {
                return Err(err(
                    line,
                    rec.len(),
                    format!("expected {} fields, found {}", attributes.len() + 1, rec.len()),
                ));
            }
            objects.push(rec[0].to_string());
            let mut row = Vec::with_capacity(attributes.len());
            for (i, cell) in rec.iter().enumerate().skip(1) {
                let value: f64 = cell
                    .parse()
                    .map_err(|_| err(line, i + 1, format!("`{cell}` is not a number")))?;
                if !(0.0..=1.0).contains(&value) {
                    return Err(err(line, i + 1, format!("{value} is outside [0, 1]")));
                }
                row.push(value);
            }
            relation.push(row);
        }
        Self::new(objects, attributes, relation, lambda)
    }

    pub fn from_csv_path(path: impl AsRef<Path>, lambda: f64) -> Result<Self, ReductError> {
        let file = std::fs::File::open(path.as_ref()).map_err(|e| ReductError::Csv {
            line: 0,
            col: 0,
            msg: format!("{}: {e}", path.as_ref().display()),
        })?;
        Self::from_csv(file, lambda)
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn relation(&self) -> &[Vec<f64>] {
        &self.relation
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a == name)
    }

    /// `I(u, v)` iff `R(u, v) ≥ λ`.
    pub fn binarize(&self) -> BinaryContext {
        let columns = (0..self.attributes.len())
            .map(|v| {
                self.relation
                    .iter()
                    .enumerate()
                    .filter(|(_, row)| row[v] >= self.lambda)
                    .fold(0u64, |acc, (u, _)| acc | 1 << u)
            })
            .collect();
        BinaryContext {
            n_objects: self.objects.len(),
            columns,
        }
    }
}

/// Crisp incidence stored column-wise: bit `u` of `columns[v]` is `I(u, v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryContext {
    pub n_objects: usize,
    pub columns: Vec<u64>,
}

impl BinaryContext {
    pub fn universe(&self) -> u64 {
        if self.n_objects == 64 {
            u64::MAX
        } else {
            (1u64 << self.n_objects) - 1
        }
    }

    pub fn incident(&self, u: usize, v: usize) -> bool {
        self.columns[v] >> u & 1 == 1
    }
}

/// Objects are rule groups (in declaration order) followed by invariants;
/// attributes are the live state variables. An object is incident to every
/// variable it reads or writes.
pub fn extract_context(m: &Model) -> FormalContext {
    let mut groups: IndexMap<&str, BTreeSet<VarId>> = IndexMap::new();
    for r in &m.rules {
        let e = groups.entry(r.group.as_str()).or_default();
        e.extend(r.reads());
        e.extend(r.writes());
    }
    let mut objects: Vec<(String, BTreeSet<VarId>)> = groups
        .into_iter()
        .map(|(g, vs)| (g.to_string(), vs))
        .collect();
    for inv in &m.invariants {
        objects.push((inv.name.clone(), inv.reads.iter().copied().collect()));
    }
    let live = m.live_vars();
    let attributes = live.iter().map(|v| m.vars[v.index()].name.clone()).collect();
    let incidence: Vec<Vec<bool>> = objects
        .iter()
        .map(|(_, vs)| live.iter().map(|v| vs.contains(v)).collect())
        .collect();
    FormalContext::crisp(
        objects.into_iter().map(|(n, _)| n).collect(),
        attributes,
        &incidence,
    )
    .expect("a built model has rules or invariants and variables")
}
