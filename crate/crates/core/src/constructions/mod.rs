//! Upper bounds on the 0/1-extension complexity from geometric operations.
//!
//! Every class starts from its trivial bound (facets or vertices). Bounds are then pushed
//! forward through three operations until nothing improves:
//!
//! * adding a single cube vertex (`xcs + 1`),
//! * reflecting at a hyperplane inducing a cube symmetry (`xcs + 2`, or `#facets + 1` when
//!   the hyperplane cuts out a facet),
//! * down-monotonizing one coordinate (`xcs + 2`).
//!
//! The winning operation of each class is recorded as a [`Certificate`] which
//! [`build_and_verify_nice_extension`] turns into an explicit extension and checks.

mod extension;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::core_types::{permute_mask, CubeSymmetry, VertexSet};
use crate::equivalence::{CubeCatalog, EquivClass};
use crate::exact_geometry::affine_dimension;
use crate::{Error, Result};

pub use extension::{build_and_verify_nice_extension, build_nice_extension, NiceExtension, VerificationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Operation {
    None,
    Simplex,
    UnionPoint,
    Reflect,
    ReflectFacet,
    Down,
}

impl Operation {
    pub const ALL: [Operation; 6] = [
        Operation::None,
        Operation::Simplex,
        Operation::UnionPoint,
        Operation::Reflect,
        Operation::ReflectFacet,
        Operation::Down,
    ];

    /// Symbol used in the printed tables.
    pub fn symbol(self) -> &'static str {
        match self {
            Operation::None => "-",
            Operation::Simplex => "Δ",
            Operation::UnionPoint => "∪",
            Operation::Reflect => "÷",
            Operation::ReflectFacet => "÷*",
            Operation::Down => "↓",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|op| op.symbol() == s)
    }

    pub fn has_predecessor(self) -> bool {
        !matches!(self, Operation::None | Operation::Simplex)
    }
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// How a class obtains its upper bound.
///
/// `pred_id` is the vertex set the operation is applied to and `target_id` the set it
/// produces, both as masks of the ambient cube. `target_id` is omitted when it is the
/// class representative itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub op: Operation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pred_id: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pred_class: Option<u64>,
    pub bound: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_id: Option<u64>,
}

impl Certificate {
    fn trivial(op: Operation, bound: usize) -> Self {
        Certificate { op, pred_id: None, pred_class: None, bound, target_id: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HyperplaneKind {
    Flip(usize),
    Swap(usize, usize),
}

/// Hyperplane `⟨a, x⟩ = β` whose reflection is a symmetry of the cube.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hyperplane {
    pub a: Vec<i64>,
    pub beta: i64,
    pub kind: HyperplaneKind,
}

impl Hyperplane {
    pub fn ambient_dim(&self) -> usize {
        self.a.len()
    }

    pub fn value(&self, x: &[i64]) -> i64 {
        self.a.iter().zip(x).map(|(a, x)| a * x).sum()
    }

    pub fn symmetry(&self) -> CubeSymmetry {
        let n = self.ambient_dim();
        match self.kind {
            HyperplaneKind::Flip(i) => CubeSymmetry::flip(n, i),
            HyperplaneKind::Swap(i, j) => CubeSymmetry::swap(n, i, j),
        }
        .expect("hyperplane indices are in range")
    }

    /// Cube vertices with `⟨a, x⟩ ≤ β`.
    pub fn lower_mask(&self) -> u32 {
        self.mask_where(|v| v <= self.beta)
    }

    /// Cube vertices on the hyperplane.
    pub fn on_mask(&self) -> u32 {
        self.mask_where(|v| v == self.beta)
    }

    fn mask_where(&self, keep: impl Fn(i64) -> bool) -> u32 {
        let n = self.ambient_dim();
        (0..1usize << n)
            .filter(|&b| keep(self.value(&crate::core_types::vertex_coords(b, n))))
            .fold(0, |m, b| m | 1 << b)
    }
}

/// The `2n` flip and `n(n-1)` swap half-space orientations of the `n`-cube.
pub fn cube_hyperplanes(n: usize) -> Vec<Hyperplane> {
    let unit = |i: usize, s: i64| (0..n).map(|k| if k == i { s } else { 0 }).collect::<Vec<i64>>();
    let mut out = Vec::new();
    for i in 0..n {
        out.push(Hyperplane { a: unit(i, 2), beta: 1, kind: HyperplaneKind::Flip(i) });
        out.push(Hyperplane { a: unit(i, -2), beta: -1, kind: HyperplaneKind::Flip(i) });
    }
    for i in 0..n {
        for j in i + 1..n {
            let a: Vec<i64> = (0..n).map(|k| (k == i) as i64 - (k == j) as i64).collect();
            out.push(Hyperplane { a: a.clone(), beta: 0, kind: HyperplaneKind::Swap(i, j) });
            out.push(Hyperplane { a: a.iter().map(|x| -x).collect(), beta: 0, kind: HyperplaneKind::Swap(i, j) });
        }
    }
    out
}

/// A vertex set together with the data of its class that the operations need.
#[derive(Clone, Debug)]
pub struct Predecessor {
    pub set: VertexSet,
    pub class_id: u64,
    pub xcs: usize,
    pub n_facets: usize,
}

/// The better of the facet and vertex bounds; ties go to the facet description.
pub fn trivial_bounds(class: &EquivClass) -> Certificate {
    if class.n_vertices < class.n_facets {
        Certificate::trivial(Operation::Simplex, class.n_vertices)
    } else {
        Certificate::trivial(Operation::None, class.n_facets)
    }
}

// Precomputed bitmask data for the operations on one cube.
struct CubeOps {
    n: usize,
    hyperplanes: Vec<(u32, u32, Vec<u8>)>,
    // Vertices with x_j = 1, per coordinate.
    upper: Vec<u32>,
}

impl CubeOps {
    fn new(n: usize) -> Self {
        let hyperplanes = cube_hyperplanes(n)
            .iter()
            .map(|h| (h.lower_mask(), h.on_mask(), h.symmetry().vertex_permutation()))
            .collect();
        let upper = (0..n)
            .map(|j| (0..1usize << n).filter(|b| b >> j & 1 == 1).fold(0, |m, b| m | 1 << b))
            .collect();
        CubeOps { n, hyperplanes, upper }
    }

    fn full(&self) -> u32 {
        ((1u64 << (1 << self.n)) - 1) as u32
    }

    /// Calls `emit(target, op, bound)` for every operation applicable to `mask`.
    fn successors(
        &self,
        mask: u32,
        dim: &impl Fn(u32) -> usize,
        xcs: usize,
        n_facets: usize,
        mut emit: impl FnMut(u32, Operation, usize),
    ) {
        let d = dim(mask);
        if d >= 1 {
            let mut free = self.full() & !mask;
            while free != 0 {
                let w = free & free.wrapping_neg();
                free &= free - 1;
                emit(mask | w, Operation::UnionPoint, xcs + 1);
            }
        }
        for (le, on, perm) in &self.hyperplanes {
            if mask & !le != 0 || mask & !on == 0 {
                continue;
            }
            let target = mask | permute_mask(perm, mask);
            emit(target, Operation::Reflect, xcs + 2);
            let cut = mask & on;
            if d >= 1 && cut != 0 && dim(cut) + 1 == d {
                emit(target, Operation::ReflectFacet, n_facets + 1);
            }
        }
        for j in 0..self.n {
            if let Some(target) = self.down(mask, j) {
                emit(target, Operation::Down, xcs + 2);
            }
        }
    }

    fn down(&self, mask: u32, j: usize) -> Option<u32> {
        let hi = mask & self.upper[j];
        let shifted = hi >> (1u32 << j);
        (hi != 0 && shifted & mask == 0).then_some(mask | shifted)
    }
}

fn geometric_dim(n: usize) -> impl Fn(u32) -> usize {
    move |m| affine_dimension(&VertexSet::from_mask_unchecked(n, m)).expect("nonempty vertex set")
}

fn certificate_for(pred: &Predecessor, target: u32, op: Operation, bound: usize) -> (VertexSet, Certificate) {
    let n = pred.set.ambient_dim();
    let cert = Certificate {
        op,
        pred_id: Some(pred.set.id()),
        pred_class: Some(pred.class_id),
        bound,
        target_id: Some(target as u64),
    };
    (VertexSet::from_mask_unchecked(n, target), cert)
}

/// Sets obtained by adding one cube vertex, each with bound `xcs + 1`.
/// Zero-dimensional predecessors yield nothing.
pub fn union_point_targets(pred: &Predecessor) -> Vec<(VertexSet, Certificate)> {
    let n = pred.set.ambient_dim();
    let mut out = Vec::new();
    CubeOps::new(n).successors(pred.set.mask(), &geometric_dim(n), pred.xcs, pred.n_facets, |t, op, b| {
        if op == Operation::UnionPoint {
            out.push(certificate_for(pred, t, op, b));
        }
    });
    out
}

/// Reflections at every cube-symmetry hyperplane with the predecessor on its lower side.
/// Hyperplanes cutting out a facet yield both a plain and a facet certificate.
pub fn reflection_targets(pred: &Predecessor) -> Vec<(VertexSet, Certificate)> {
    let n = pred.set.ambient_dim();
    let mut out = Vec::new();
    CubeOps::new(n).successors(pred.set.mask(), &geometric_dim(n), pred.xcs, pred.n_facets, |t, op, b| {
        if matches!(op, Operation::Reflect | Operation::ReflectFacet) {
            out.push(certificate_for(pred, t, op, b));
        }
    });
    out
}

/// `conv(V' ∪ down_j(V'))` when `down_j` is injective on `V'` and moves some vertex.
pub fn downmono_targets(pred: &Predecessor, j: usize) -> Option<(VertexSet, Certificate)> {
    let n = pred.set.ambient_dim();
    if j >= n {
        return None;
    }
    let target = CubeOps::new(n).down(pred.set.mask(), j)?;
    Some(certificate_for(pred, target, Operation::Down, pred.xcs + 2))
}

/// Final upper bounds of every class of a catalog, keyed by class representative.
#[derive(Clone, Debug)]
pub struct UpperBounds {
    pub certificates: BTreeMap<u64, Certificate>,
    /// Number of improvement rounds until the fixpoint was reached.
    pub rounds: usize,
}

impl UpperBounds {
    pub fn get(&self, class_id: u64) -> Option<&Certificate> {
        self.certificates.get(&class_id)
    }

    pub fn bound(&self, class_id: u64) -> Option<usize> {
        self.get(class_id).map(|c| c.bound)
    }
}

/// Runs every operation from every vertex subset of the catalog's cube until no class
/// bound improves, then picks one certificate per class.
///
/// Among certificates achieving a class's final bound, trivial ones win, then those
/// producing the class representative itself, then the operation in the order of
/// [`Operation`], then the smallest predecessor ID.
pub fn fixpoint_upper_bounds(catalog: &CubeCatalog) -> Result<UpperBounds> {
    let n = catalog.ambient_dim();
    let ops = CubeOps::new(n);
    let classes: Vec<&EquivClass> = catalog.all_classes().collect();
    let index: HashMap<u64, usize> = classes.iter().enumerate().map(|(i, c)| (c.rep_id, i)).collect();
    let masks: Vec<u32> = (1..=catalog.mask_count() as u32).collect();
    let class_of: Vec<u32> = std::iter::once(u32::MAX)
        .chain(masks.iter().map(|&m| index[&catalog.affine_class_of_mask(m)] as u32))
        .collect();
    let dim = |m: u32| catalog.dim_of_mask(m);

    let mut bound: Vec<usize> = classes.iter().map(|c| trivial_bounds(c).bound).collect();
    let mut rounds = 0;
    loop {
        rounds += 1;
        let proposed = masks
            .par_iter()
            .fold(
                || bound.clone(),
                |mut acc, &m| {
                    let c = class_of[m as usize] as usize;
                    ops.successors(m, &dim, bound[c], classes[c].n_facets, |t, _, b| {
                        let tc = class_of[t as usize] as usize;
                        acc[tc] = acc[tc].min(b);
                    });
                    acc
                },
            )
            .reduce(|| bound.clone(), |a, b| a.into_iter().zip(b).map(|(x, y)| x.min(y)).collect());
        if proposed == bound {
            break;
        }
        bound = proposed;
    }

    // Deterministic choice of certificate for the final bounds.
    type Key = (bool, Operation, u64, u64);
    let best: Vec<Option<(Key, Certificate)>> = masks
        .par_iter()
        .fold(
            || vec![None; classes.len()],
            |mut acc: Vec<Option<(Key, Certificate)>>, &m| {
                let c = class_of[m as usize] as usize;
                ops.successors(m, &dim, bound[c], classes[c].n_facets, |t, op, b| {
                    let tc = class_of[t as usize] as usize;
                    if b != bound[tc] {
                        return;
                    }
                    let rep = classes[tc].rep_id;
                    let key = (t as u64 != rep, op, m as u64, t as u64);
                    if acc[tc].as_ref().is_none_or(|(k, _)| key < *k) {
                        let cert = Certificate {
                            op,
                            pred_id: Some(m as u64),
                            pred_class: Some(classes[c].rep_id),
                            bound: b,
                            target_id: (t as u64 != rep).then_some(t as u64),
                        };
                        acc[tc] = Some((key, cert));
                    }
                });
                acc
            },
        )
        .reduce(
            || vec![None; classes.len()],
            |a, b| {
                a.into_iter()
                    .zip(b)
                    .map(|(x, y)| match (x, y) {
                        (Some(x), Some(y)) => Some(if y.0 < x.0 { y } else { x }),
                        (x, y) => x.or(y),
                    })
                    .collect()
            },
        );

    let mut certificates = BTreeMap::new();
    for (i, class) in classes.iter().enumerate() {
        let trivial = trivial_bounds(class);
        let cert = if trivial.bound == bound[i] {
            trivial
        } else {
            best[i]
                .clone()
                .map(|(_, c)| c)
                .ok_or_else(|| Error::Inconsistency(format!("no certificate reaches the bound of class {}", class.rep_id)))?
        };
        certificates.insert(class.rep_id, cert);
    }
    Ok(UpperBounds { certificates, rounds })
}
