//! End-to-end computation: classification, slack matrices, lower bounds, upper bounds
//! and certificate checks, plus reports and comparison with the bundled tables.

mod reference;
mod report;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::{build_and_verify_nice_extension, fixpoint_upper_bounds, Certificate, VerificationReport};
use crate::core_types::{VertexSet, MAX_DIM};
use crate::equivalence::{CubeCatalog, EquivClass};
use crate::exact_geometry::PolytopeData;
use crate::lower_bounds::all_bounds;
use crate::{Error, Result};

pub use reference::{verify_against_reference, DiffReport, ReferenceTables, CountRow, LowDimRow, Dim4Row};
pub use report::{emit_report, ReportFormat, CSV_HEADER};

/// One affine equivalence class with all its bounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub rep_id: u64,
    pub dim: usize,
    pub n_vertices: usize,
    pub n_facets: usize,
    pub omega: usize,
    pub rc: usize,
    pub rrc: usize,
    pub xcs: usize,
    pub certificate: Certificate,
    pub further_representatives: Vec<u64>,
}

impl ClassRecord {
    /// Checks the bound sandwich, the trivial bounds and that some lower bound is tight.
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |reason: String| Err(Error::Invariant { id: self.rep_id, reason });
        if !(self.omega <= self.rc && self.rc <= self.rrc && self.rrc <= self.xcs) {
            return fail(format!(
                "bounds out of order: omega {} rc {} rrc {} xcs {}",
                self.omega, self.rc, self.rrc, self.xcs
            ));
        }
        if self.xcs > self.n_vertices.min(self.n_facets) {
            return fail(format!("xcs {} exceeds min(vertices, facets)", self.xcs));
        }
        // A point needs no inequalities at all, so the dimension bound starts at dimension one.
        if self.dim >= 1 && self.xcs < self.dim + 1 {
            return fail(format!("xcs {} is below dim + 1", self.xcs));
        }
        if self.certificate.bound != self.xcs {
            return fail("certificate bound differs from xcs".into());
        }
        if self.best_lower_bound() != self.xcs {
            return fail(format!("no lower bound reaches xcs {}", self.xcs));
        }
        Ok(())
    }

    /// Largest of the combinatorial lower bounds.
    pub fn best_lower_bound(&self) -> usize {
        self.omega.max(self.rc).max(self.rrc)
    }
}

/// One row of the per-vertex-count summary of a full-dimensional classification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexCountRow {
    pub vertices: usize,
    pub polytopes: usize,
    pub zero_one_classes: usize,
    pub affine_classes: usize,
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Skip building and checking the explicit extensions.
    pub skip_certificates: bool,
}

/// Everything a full run produces.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunOutput {
    pub dim_max: usize,
    /// Records ordered by `(dim, n_vertices, n_facets, rep_id)`.
    pub records: Vec<ClassRecord>,
    /// Counts for the full-dimensional polytopes of dimension `dim_max`, by vertex count.
    pub counts: Vec<VertexCountRow>,
    pub zero_one_classes: Vec<EquivClass>,
    pub fixpoint_rounds: usize,
    pub verification: Vec<VerificationReport>,
}

impl RunOutput {
    pub fn records_of_dim(&self, dim: usize) -> impl Iterator<Item = &ClassRecord> {
        self.records.iter().filter(move |r| r.dim == dim)
    }

    pub fn record(&self, rep_id: u64) -> Option<&ClassRecord> {
        self.records.iter().find(|r| r.rep_id == rep_id)
    }
}

/// Per-vertex-count summary of the full-dimensional classes of the catalog's cube.
pub fn vertex_counts(catalog: &CubeCatalog) -> Vec<VertexCountRow> {
    let n = catalog.ambient_dim();
    let mut rows: BTreeMap<usize, VertexCountRow> = BTreeMap::new();
    let blank = |v| VertexCountRow { vertices: v, polytopes: 0, zero_one_classes: 0, affine_classes: 0 };
    for c in &catalog.zero_one_by_dim[n] {
        let row = rows.entry(c.n_vertices).or_insert_with(|| blank(c.n_vertices));
        row.polytopes += c.polytopes;
        row.zero_one_classes += 1;
    }
    for c in &catalog.classes_by_dim[n] {
        rows.entry(c.n_vertices).or_insert_with(|| blank(c.n_vertices)).affine_classes += 1;
    }
    rows.into_values().collect()
}

/// Lower bounds of one class, computed on its slack matrix in its own cube.
pub fn class_bounds(class: &EquivClass) -> Result<(usize, usize, usize)> {
    let data = PolytopeData::compute(&VertexSet::from_id(class.rep_id, class.dim)?)?;
    all_bounds(&data.slack)
}

/// Runs the whole computation for every class of dimension at most `dim_max`.
///
/// Fails with [`Error::Invariant`] on a violated bound relation and with
/// [`Error::CertificateInvalid`] when an extension does not check out.
pub fn run_full(dim_max: usize, options: &RunOptions) -> Result<RunOutput> {
    if dim_max > MAX_DIM {
        return Err(Error::invalid(format!("dimension {dim_max} exceeds {MAX_DIM}")));
    }
    let catalog = CubeCatalog::build(dim_max)?;
    let upper = fixpoint_upper_bounds(&catalog)?;
    let classes: Vec<&EquivClass> = catalog.all_classes().collect();

    let mut records = classes
        .par_iter()
        .map(|class| {
            let (omega, rc, rrc) = class_bounds(class)?;
            let certificate = upper
                .get(class.rep_id)
                .cloned()
                .ok_or_else(|| Error::Inconsistency(format!("class {} has no upper bound", class.rep_id)))?;
            Ok(ClassRecord {
                rep_id: class.rep_id,
                dim: class.dim,
                n_vertices: class.n_vertices,
                n_facets: class.n_facets,
                omega,
                rc,
                rrc,
                xcs: certificate.bound,
                certificate,
                further_representatives: class.member_ids.iter().copied().filter(|&m| m != class.rep_id).collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    records.sort_by_key(|r| (r.dim, r.n_vertices, r.n_facets, r.rep_id));
    for r in &records {
        r.check_invariants()?;
    }

    let verification = if options.skip_certificates {
        Vec::new()
    } else {
        records
            .par_iter()
            .map(|r| build_and_verify_nice_extension(&catalog, &upper, r.rep_id))
            .collect::<Result<Vec<_>>>()?
    };

    Ok(RunOutput {
        dim_max,
        records,
        counts: vertex_counts(&catalog),
        zero_one_classes: catalog.zero_one_by_dim.iter().flatten().cloned().collect(),
        fixpoint_rounds: upper.rounds,
        verification,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::Operation;

    #[test]
    fn three_dimensional_run() {
        let out = run_full(3, &RunOptions::default()).unwrap();
        let got: Vec<(u64, usize, usize, usize)> =
            out.records.iter().map(|r| (r.rep_id, r.n_vertices, r.n_facets, r.xcs)).collect();
        let expected: Vec<(u64, usize, usize, usize)> = ReferenceTables::bundled()
            .unwrap()
            .low_dim
            .iter()
            .map(|r| (r.id, r.vertices, r.facets, r.xcs))
            .collect();
        assert_eq!(got, expected);
        assert_eq!(out.verification.len(), 12);
        assert_eq!(out.counts.iter().map(|c| c.affine_classes).sum::<usize>(), 8);
    }

    #[test]
    fn invariant_violations_are_reported() {
        let cert = Certificate { op: Operation::None, pred_id: None, pred_class: None, bound: 6, target_id: None };
        let ok = ClassRecord {
            rep_id: 255,
            dim: 3,
            n_vertices: 8,
            n_facets: 6,
            omega: 6,
            rc: 6,
            rrc: 6,
            xcs: 6,
            certificate: cert,
            further_representatives: Vec::new(),
        };
        ok.check_invariants().unwrap();
        let bad = ClassRecord { rc: 7, rrc: 7, ..ok.clone() };
        assert!(matches!(bad.check_invariants(), Err(Error::Invariant { id: 255, .. })));
        let loose = ClassRecord { omega: 5, rc: 5, rrc: 5, ..ok };
        assert!(loose.check_invariants().is_err());
    }
}
