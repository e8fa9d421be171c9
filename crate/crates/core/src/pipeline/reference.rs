use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::RunOutput;
use crate::constructions::Operation;
use crate::{Error, Result};

const COUNTS: &str = include_str!("../../data/counts.csv");
const LOW_DIM: &str = include_str!("../../data/low_dim.csv");
const DIM4: &str = include_str!("../../data/dim4_classes.csv");

/// Counts of four-dimensional 0/1-polytopes per number of vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRow {
    pub vertices: usize,
    pub polytopes: usize,
    pub zero_one_classes: usize,
    pub affine_classes: usize,
}

/// Polytopes of dimension at most three.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowDimRow {
    pub name: String,
    pub id: u64,
    pub dim: usize,
    pub vertices: usize,
    pub facets: usize,
    pub xcs: usize,
}

#[derive(Deserialize)]
struct RawDim4Row {
    id: u64,
    vertices: usize,
    facets: usize,
    omega: usize,
    rc: usize,
    rrc: usize,
    xcs: usize,
    op: String,
    pred_id: Option<u64>,
    pred_class: Option<u64>,
    further_reps: String,
}

/// Affine classes of four-dimensional 0/1-polytopes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dim4Row {
    pub id: u64,
    pub vertices: usize,
    pub facets: usize,
    pub omega: usize,
    pub rc: usize,
    pub rrc: usize,
    pub xcs: usize,
    pub op: Operation,
    pub pred_id: Option<u64>,
    pub pred_class: Option<u64>,
    pub further_reps: Vec<u64>,
}

impl TryFrom<RawDim4Row> for Dim4Row {
    type Error = Error;

    fn try_from(raw: RawDim4Row) -> Result<Self> {
        let op = Operation::from_symbol(&raw.op)
            .ok_or_else(|| Error::Config(format!("row {}: unknown operation {:?}", raw.id, raw.op)))?;
        let further_reps = raw
            .further_reps
            .split_whitespace()
            .map(|s| s.parse().map_err(|_| Error::Config(format!("row {}: bad representative {s:?}", raw.id))))
            .collect::<Result<_>>()?;
        Ok(Dim4Row {
            id: raw.id,
            vertices: raw.vertices,
            facets: raw.facets,
            omega: raw.omega,
            rc: raw.rc,
            rrc: raw.rrc,
            xcs: raw.xcs,
            op,
            pred_id: raw.pred_id,
            pred_class: raw.pred_class,
            further_reps,
        })
    }
}

/// The reference tables the computation is checked against.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReferenceTables {
    pub counts: Vec<CountRow>,
    pub low_dim: Vec<LowDimRow>,
    pub dim4: Vec<Dim4Row>,
}

fn parse<T: for<'de> Deserialize<'de>>(name: &str, text: &str) -> Result<Vec<T>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<std::result::Result<Vec<T>, _>>()
        .map_err(|e| Error::Config(format!("{name}: {e}")))
}

impl ReferenceTables {
    /// Tables compiled into the library.
    pub fn bundled() -> Result<Self> {
        Self::parse(COUNTS, LOW_DIM, DIM4)
    }

    /// Reads `counts.csv`, `low_dim.csv` and `dim4_classes.csv` from `dir`.
    pub fn load(dir: &Path) -> Result<Self> {
        let read = |name: &str| {
            let path = dir.join(name);
            std::fs::read_to_string(&path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))
        };
        Self::parse(&read("counts.csv")?, &read("low_dim.csv")?, &read("dim4_classes.csv")?)
    }

    fn parse(counts: &str, low_dim: &str, dim4: &str) -> Result<Self> {
        let dim4 = parse::<RawDim4Row>("dim4_classes.csv", dim4)?
            .into_iter()
            .map(Dim4Row::try_from)
            .collect::<Result<_>>()?;
        Ok(ReferenceTables { counts: parse("counts.csv", counts)?, low_dim: parse("low_dim.csv", low_dim)?, dim4 })
    }
}

/// Differences between a run and the reference tables. Only `errors` count as a mismatch.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DiffReport {
    pub errors: Vec<String>,
    pub warnings: Vec<String>,
}

impl DiffReport {
    pub fn is_clean(&self) -> bool {
        self.errors.is_empty()
    }
}

impl fmt::Display for DiffReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.errors {
            writeln!(f, "error: {e}")?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

fn compare<T: PartialEq + fmt::Display>(out: &mut Vec<String>, what: &str, column: &str, got: T, expected: T) {
    if got != expected {
        out.push(format!("{what}: {column} {got} != reference {expected}"));
    }
}

fn show(id: Option<u64>) -> String {
    id.map_or_else(|| "-".to_string(), |v| v.to_string())
}

/// Compares counts, bound columns and class structure; predecessor choices only warn.
///
/// Tables are compared as far as the run's `dim_max` covers them.
pub fn verify_against_reference(run: &RunOutput, reference: &ReferenceTables) -> DiffReport {
    let mut diff = DiffReport::default();
    let errors = &mut diff.errors;

    if run.dim_max == 4 {
        let got: BTreeMap<usize, _> = run.counts.iter().map(|c| (c.vertices, c)).collect();
        for row in &reference.counts {
            let what = format!("{} vertices", row.vertices);
            match got.get(&row.vertices) {
                None => errors.push(format!("{what}: missing from the run")),
                Some(c) => {
                    compare(errors, &what, "polytopes", c.polytopes, row.polytopes);
                    compare(errors, &what, "0/1-classes", c.zero_one_classes, row.zero_one_classes);
                    compare(errors, &what, "affine classes", c.affine_classes, row.affine_classes);
                }
            }
        }
        for v in got.keys().filter(|v| !reference.counts.iter().any(|r| r.vertices == **v)) {
            errors.push(format!("{v} vertices: not in the reference"));
        }
    }

    for row in reference.low_dim.iter().filter(|r| r.dim <= run.dim_max) {
        let what = format!("class {} ({})", row.id, row.name);
        match run.records.iter().find(|r| r.rep_id == row.id && r.dim == row.dim) {
            None => errors.push(format!("{what}: missing from the run")),
            Some(r) => {
                compare(errors, &what, "vertices", r.n_vertices, row.vertices);
                compare(errors, &what, "facets", r.n_facets, row.facets);
                compare(errors, &what, "xcs", r.xcs, row.xcs);
            }
        }
    }
    for r in run.records.iter().filter(|r| r.dim <= 3) {
        if !reference.low_dim.iter().any(|row| row.id == r.rep_id && row.dim == r.dim) {
            errors.push(format!("class {}: dimension {} class not in the reference", r.rep_id, r.dim));
        }
    }

    if run.dim_max == 4 {
        for row in &reference.dim4 {
            let what = format!("class {}", row.id);
            let Some(r) = run.records.iter().find(|r| r.rep_id == row.id && r.dim == 4) else {
                errors.push(format!("{what}: missing from the run"));
                continue;
            };
            compare(errors, &what, "vertices", r.n_vertices, row.vertices);
            compare(errors, &what, "facets", r.n_facets, row.facets);
            compare(errors, &what, "omega", r.omega, row.omega);
            compare(errors, &what, "rc", r.rc, row.rc);
            compare(errors, &what, "rrc", r.rrc, row.rrc);
            compare(errors, &what, "xcs", r.xcs, row.xcs);
            if r.further_representatives != row.further_reps {
                errors.push(format!("{what}: further representatives differ from the reference"));
            }
            let cert = &r.certificate;
            if cert.op != row.op {
                diff.warnings.push(format!("{what}: operation {} where the reference uses {}", cert.op, row.op));
            } else if cert.pred_class != row.pred_class || cert.pred_id != row.pred_id {
                diff.warnings.push(format!(
                    "{what}: predecessor {} (class {}) where the reference uses {} (class {})",
                    show(cert.pred_id),
                    show(cert.pred_class),
                    show(row.pred_id),
                    show(row.pred_class)
                ));
            }
        }
        for r in run.records.iter().filter(|r| r.dim == 4) {
            if !reference.dim4.iter().any(|row| row.id == r.rep_id) {
                errors.push(format!("class {}: not in the reference", r.rep_id));
            }
        }
    }
    diff
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_tables_parse() {
        let t = ReferenceTables::bundled().unwrap();
        assert_eq!(t.counts.len(), 12);
        assert_eq!(t.low_dim.len(), 12);
        assert_eq!(t.dim4.len(), 202);
        assert_eq!(t.counts.iter().map(|r| r.polytopes).sum::<usize>(), 60879);
        let last = t.dim4.last().unwrap();
        assert_eq!((last.id, last.xcs, last.op), (65535, 8, Operation::None));
        let r383 = t.dim4.iter().find(|r| r.id == 383).unwrap();
        assert_eq!((r383.op, r383.pred_id, r383.pred_class), (Operation::UnionPoint, Some(375), Some(319)));
    }

    #[test]
    fn missing_directory_is_a_config_error() {
        let err = ReferenceTables::load(Path::new("/nonexistent/reference")).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }
}
