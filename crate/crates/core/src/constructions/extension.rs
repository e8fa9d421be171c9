use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{cube_hyperplanes, CubeOps, Operation, UpperBounds};
use crate::core_types::{permute_mask, vertex_index, VertexSet};
use crate::equivalence::{find_affine_map, CubeCatalog};
use crate::exact_geometry::{embedding, facet_enumeration};
use crate::linalg::{dot, AffineMap, Matrix};
use crate::{Error, Rational, Result};

/// Polytope `Q = {y ∈ R^q : rows·y ≤ rhs}` with an affine map `pi` into the cube's space.
#[derive(Clone, Debug)]
pub struct NiceExtension {
    pub rows: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
    pub pi: AffineMap<Rational>,
}

/// Outcome of a successful check of a nice extension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub class_id: u64,
    pub target_id: u64,
    pub op: Operation,
    pub bound: usize,
    /// Dimension of the extension polytope.
    pub dim: usize,
    pub n_vertices: usize,
    pub n_facets: usize,
}

fn r(x: i64) -> Rational {
    Rational::from_integer(x as i128)
}

fn affine_rank(points: &[&Vec<Rational>]) -> usize {
    match points.split_first() {
        None => 0,
        Some((p0, rest)) => {
            let diffs: Vec<Vec<Rational>> =
                rest.iter().map(|p| p.iter().zip(p0.iter()).map(|(a, b)| a - b).collect()).collect();
            Matrix::from_rows(p0.len(), &diffs).rank()
        }
    }
}

impl NiceExtension {
    pub fn dim(&self) -> usize {
        self.pi.input_dim()
    }

    /// Facet description of `conv(V)` in the coordinates of its embedding.
    pub fn from_facets(v: &VertexSet) -> Result<Self> {
        let emb = embedding(v)?;
        if emb.dim() == 0 {
            return Ok(NiceExtension { rows: Vec::new(), rhs: Vec::new(), pi: emb.lift });
        }
        let facets = facet_enumeration(&emb.project_set(v))?;
        let (rows, rhs) = facets
            .rows
            .iter()
            .map(|f| (f.normal.iter().map(|&a| r(a)).collect(), r(f.rhs)))
            .unzip();
        Ok(NiceExtension { rows, rhs, pi: emb.lift })
    }

    /// Standard simplex `{λ ≥ 0, Σλ ≤ 1}` mapped onto the vertices of `V`.
    pub fn simplex(v: &VertexSet) -> Self {
        let points = v.points();
        let (last, others) = points.split_last().expect("nonempty vertex set");
        let q = others.len();
        let n = v.ambient_dim();
        let mut rows: Vec<Vec<Rational>> =
            (0..q).map(|i| (0..q).map(|k| if k == i { -Rational::one() } else { Rational::zero() }).collect()).collect();
        let mut rhs = vec![Rational::zero(); q];
        if q > 0 {
            rows.push(vec![Rational::one(); q]);
            rhs.push(Rational::one());
        }
        let cols: Vec<Vec<Rational>> = others.iter().map(|p| p.iter().zip(last).map(|(a, b)| r(a - b)).collect()).collect();
        let linear = Matrix::from_rows(n, &cols).transpose();
        let linear = if q == 0 { Matrix::zeros(n, 0) } else { linear };
        NiceExtension { rows, rhs, pi: AffineMap { linear, offset: last.iter().map(|&x| r(x)).collect() } }
    }

    fn extended_rows(&self) -> Vec<Vec<Rational>> {
        self.rows.iter().map(|row| row.iter().cloned().chain([Rational::zero()]).collect()).collect()
    }

    fn unit_row(q: usize, last: Rational) -> Vec<Rational> {
        (0..q).map(|_| Rational::zero()).chain([last]).collect()
    }

    // Columns of the linear part followed by one extra column.
    fn extended_pi(&self, extra: Vec<Rational>, offset: Vec<Rational>) -> AffineMap<Rational> {
        let n = self.pi.output_dim();
        let q = self.dim();
        let mut linear = Matrix::zeros(n, q + 1);
        for i in 0..n {
            for k in 0..q {
                linear[(i, k)] = self.pi.linear[(i, k)];
            }
            linear[(i, q)] = extra[i];
        }
        AffineMap { linear, offset }
    }

    /// `conv(P ∪ {w})` through the homogenization of `Q`.
    pub fn union_point(&self, w: &[i64]) -> Self {
        let q = self.dim();
        let mut rows: Vec<Vec<Rational>> = self
            .rows
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| row.iter().cloned().chain([-*b]).collect())
            .collect();
        let mut rhs = vec![Rational::zero(); rows.len()];
        rows.push(Self::unit_row(q, Rational::one()));
        rhs.push(Rational::one());
        rows.push(Self::unit_row(q, -Rational::one()));
        rhs.push(Rational::zero());
        let w: Vec<Rational> = w.iter().map(|&x| r(x)).collect();
        let extra = self.pi.offset.iter().zip(&w).map(|(c, w)| c - w).collect();
        NiceExtension { rows, rhs, pi: self.extended_pi(extra, w) }
    }

    /// `conv(P ∪ φ(P))` for the reflection `φ` at `⟨a, x⟩ = β`, with `P` in `⟨a, x⟩ ≤ β`.
    pub fn reflect(&self, a: &[i64], beta: i64) -> Self {
        let q = self.dim();
        let a: Vec<Rational> = a.iter().map(|&x| r(x)).collect();
        let mut rows = self.extended_rows();
        let mut rhs = self.rhs.clone();
        rows.push(Self::unit_row(q, -Rational::one()));
        rhs.push(Rational::zero());
        // λ + ⟨a, π(y)⟩ ≤ β
        let mut row: Vec<Rational> = (0..q).map(|k| dot(&a, &self.pi.linear.column(k))).collect();
        row.push(Rational::one());
        rows.push(row);
        rhs.push(r(beta) - dot(&a, &self.pi.offset));
        let scale = Rational::new(2, dot(&a, &a).to_integer());
        let extra = a.iter().map(|x| x * scale).collect();
        NiceExtension { rows, rhs, pi: self.extended_pi(extra, self.pi.offset.clone()) }
    }

    /// `conv(P ∪ down_j(P))`.
    pub fn down(&self, j: usize) -> Self {
        let q = self.dim();
        let n = self.pi.output_dim();
        let mut rows = self.extended_rows();
        let mut rhs = self.rhs.clone();
        rows.push(Self::unit_row(q, -Rational::one()));
        rhs.push(Rational::zero());
        // λ ≤ π(y)_j
        let mut row: Vec<Rational> = self.pi.linear.row(j).iter().map(|x| -x).collect();
        row.push(Rational::one());
        rows.push(row);
        rhs.push(self.pi.offset[j]);
        let mut pi = self.extended_pi((0..n).map(|i| r((i == j) as i64)).collect(), self.pi.offset.clone());
        for k in 0..q {
            pi.linear[(j, k)] = Rational::zero();
        }
        pi.offset[j] = Rational::zero();
        NiceExtension { rows, rhs, pi }
    }

    /// Precomposes nothing, post-composes `pi` with `map`.
    pub fn map_into(&self, map: &AffineMap<Rational>) -> Self {
        NiceExtension { rows: self.rows.clone(), rhs: self.rhs.clone(), pi: map.compose(&self.pi) }
    }

    fn feasible(&self, y: &[Rational]) -> bool {
        self.rows.iter().zip(&self.rhs).all(|(row, b)| dot(row, y) <= *b)
    }

    /// Vertices of `Q`, or an error if `Q` is empty or unbounded.
    pub fn vertices(&self) -> Result<Vec<Vec<Rational>>> {
        let q = self.dim();
        if q == 0 {
            return if self.rhs.iter().all(|b| *b >= Rational::zero()) {
                Ok(vec![Vec::new()])
            } else {
                Err(Error::Inconsistency("empty extension".into()))
            };
        }
        let a = Matrix::from_rows(q, &self.rows);
        if a.rank() < q {
            return Err(Error::Inconsistency("extension has a lineality space".into()));
        }
        for basis in (0..self.rows.len()).combinations(q - 1) {
            let sub = Matrix::from_rows(q, &basis.iter().map(|&i| self.rows[i].clone()).collect::<Vec<_>>());
            if sub.rank() != q - 1 {
                continue;
            }
            let ray = &sub.nullspace()[0];
            let signs: Vec<Rational> = self.rows.iter().map(|row| dot(row, ray)).collect();
            if signs.iter().all(|s| *s <= Rational::zero()) || signs.iter().all(|s| *s >= Rational::zero()) {
                return Err(Error::Inconsistency("extension is unbounded".into()));
            }
        }
        let mut found = BTreeSet::new();
        for basis in (0..self.rows.len()).combinations(q) {
            let sub = Matrix::from_rows(q, &basis.iter().map(|&i| self.rows[i].clone()).collect::<Vec<_>>());
            let b: Vec<Rational> = basis.iter().map(|&i| self.rhs[i]).collect();
            if let Some(y) = sub.solve(&b) {
                if self.feasible(&y) {
                    found.insert(y);
                }
            }
        }
        if found.is_empty() {
            return Err(Error::Inconsistency("empty extension".into()));
        }
        Ok(found.into_iter().collect())
    }

    /// Number of facets of `Q`, given its vertices.
    pub fn facet_count(&self, vertices: &[Vec<Rational>]) -> usize {
        let q = self.dim();
        if q == 0 {
            return 0;
        }
        let tight_sets: BTreeSet<Vec<usize>> = self
            .rows
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| (0..vertices.len()).filter(|&v| dot(row, &vertices[v]) == *b).collect::<Vec<_>>())
            .filter(|tight| {
                let pts: Vec<&Vec<Rational>> = tight.iter().map(|&v| &vertices[v]).collect();
                !pts.is_empty() && affine_rank(&pts) == q - 1
            })
            .collect();
        tight_sets.len()
    }

    /// Checks that `Q` is a full-dimensional 0/1-polytope whose vertices map bijectively
    /// onto `target` and that it has at most `bound` facets. Returns `(dim, #vertices, #facets)`.
    pub fn verify(&self, target: &VertexSet, bound: usize) -> std::result::Result<(usize, usize, usize), String> {
        let vertices = self.vertices().map_err(|e| e.to_string())?;
        let q = self.dim();
        let all: Vec<&Vec<Rational>> = vertices.iter().collect();
        if affine_rank(&all) != q {
            return Err(format!("extension is not full-dimensional in R^{q}"));
        }
        let is01 = |x: &Rational| x.is_zero() || x.is_one();
        if let Some(bad) = vertices.iter().find(|y| !y.iter().all(is01)) {
            return Err(format!("vertex {bad:?} of the extension is not a 0/1 point"));
        }
        let mut image = 0u32;
        for y in &vertices {
            let x = self.pi.apply(y);
            let coords: Option<Vec<i64>> = x.iter().map(|c| is01(c).then(|| c.to_integer() as i64)).collect();
            let idx = coords
                .and_then(|c| vertex_index(&c).ok())
                .filter(|&i| target.contains_index(i))
                .ok_or_else(|| format!("vertex {y:?} maps to {x:?}, not a vertex of the target"))?;
            if image >> idx & 1 == 1 {
                return Err(format!("two extension vertices map to target vertex {idx}"));
            }
            image |= 1 << idx;
        }
        if image != target.mask() {
            return Err(format!("image {image} misses target vertices {}", target.mask() & !image));
        }
        let facets = self.facet_count(&vertices);
        if facets > bound {
            return Err(format!("extension has {facets} facets, more than the bound {bound}"));
        }
        Ok((q, vertices.len(), facets))
    }
}

// Affine map of the cube's space sending `from` onto `to` (same affine class).
fn transport(from: &VertexSet, to: &VertexSet) -> Result<AffineMap<Rational>> {
    let n = from.ambient_dim();
    let (ef, et) = (embedding(from)?, embedding(to)?);
    let d = ef.dim();
    let mut proj = Matrix::zeros(d, n);
    for (row, &c) in ef.coords.iter().enumerate() {
        proj[(row, c)] = Rational::one();
    }
    let proj = AffineMap { linear: proj, offset: vec![Rational::zero(); d] };
    let inner = if d == 0 {
        AffineMap { linear: Matrix::zeros(0, 0), offset: Vec::new() }
    } else {
        find_affine_map(&ef.project_set(from), &et.project_set(to)).ok_or_else(|| {
            Error::Inconsistency(format!("vertex sets {} and {} are not affinely equivalent", from.id(), to.id()))
        })?
    };
    Ok(et.lift.compose(&inner).compose(&proj))
}

struct Builder<'a> {
    catalog: &'a CubeCatalog,
    bounds: &'a UpperBounds,
    ops: CubeOps,
}

impl Builder<'_> {
    fn set(&self, mask: u64) -> VertexSet {
        VertexSet::from_mask_unchecked(self.catalog.ambient_dim(), mask as u32)
    }

    fn invalid(&self, class_id: u64, reason: impl Into<String>) -> Error {
        Error::CertificateInvalid { id: class_id, reason: reason.into() }
    }

    /// Extension of the set the class certificate produces.
    fn for_class(&self, class_id: u64) -> Result<(VertexSet, NiceExtension)> {
        let cert = self
            .bounds
            .get(class_id)
            .ok_or_else(|| self.invalid(class_id, "class has no certificate"))?;
        let target = self.set(cert.target_id.unwrap_or(class_id));
        if self.catalog.affine_class_of_mask(target.mask()) != class_id {
            return Err(self.invalid(class_id, format!("target {} lies outside the class", target.id())));
        }
        let ext = match cert.op {
            Operation::None => NiceExtension::from_facets(&target)?,
            Operation::Simplex => NiceExtension::simplex(&target),
            op => {
                let (pred_id, pred_class) = cert
                    .pred_id
                    .zip(cert.pred_class)
                    .ok_or_else(|| self.invalid(class_id, "missing predecessor"))?;
                let pred = self.set(pred_id);
                if self.catalog.affine_class_of_mask(pred.mask()) != pred_class {
                    return Err(self.invalid(class_id, format!("predecessor {pred_id} is not in class {pred_class}")));
                }
                let base = if op == Operation::ReflectFacet {
                    NiceExtension::from_facets(&pred)?
                } else {
                    self.for_set(pred_class, &pred)?
                };
                self.apply(class_id, op, &pred, &base, &target)?
            }
        };
        Ok((target, ext))
    }

    fn for_set(&self, class_id: u64, v: &VertexSet) -> Result<NiceExtension> {
        let (t, ext) = self.for_class(class_id)?;
        if t == *v {
            return Ok(ext);
        }
        Ok(ext.map_into(&transport(&t, v)?))
    }

    fn apply(&self, class_id: u64, op: Operation, pred: &VertexSet, base: &NiceExtension, target: &VertexSet) -> Result<NiceExtension> {
        let (p, t) = (pred.mask(), target.mask());
        match op {
            Operation::UnionPoint => {
                let extra = t & !p;
                if extra.count_ones() != 1 || p & !t != 0 {
                    return Err(self.invalid(class_id, "target is not the predecessor plus one point"));
                }
                let w = crate::core_types::vertex_coords(extra.trailing_zeros() as usize, pred.ambient_dim());
                Ok(base.union_point(&w))
            }
            Operation::Reflect | Operation::ReflectFacet => {
                let n = pred.ambient_dim();
                let h = cube_hyperplanes(n)
                    .into_iter()
                    .find(|h| {
                        let perm = h.symmetry().vertex_permutation();
                        p & !h.lower_mask() == 0 && p & !h.on_mask() != 0 && (p | permute_mask(&perm, p)) == t
                    })
                    .ok_or_else(|| self.invalid(class_id, "no cube hyperplane reflects the predecessor onto the target"))?;
                Ok(base.reflect(&h.a, h.beta))
            }
            Operation::Down => {
                let j = (0..pred.ambient_dim())
                    .find(|&j| self.ops.down(p, j) == Some(t))
                    .ok_or_else(|| self.invalid(class_id, "no coordinate down-monotonizes onto the target"))?;
                Ok(base.down(j))
            }
            Operation::None | Operation::Simplex => unreachable!("handled by the caller"),
        }
    }
}

/// Explicit extension of the representative of `class_id` following its certificate chain.
pub fn build_nice_extension(catalog: &CubeCatalog, bounds: &UpperBounds, class_id: u64) -> Result<(VertexSet, NiceExtension)> {
    let builder = Builder { catalog, bounds, ops: CubeOps::new(catalog.ambient_dim()) };
    let rep = builder.set(class_id);
    let ext = builder.for_set(class_id, &rep)?;
    Ok((rep, ext))
}

/// Builds the extension certified for `class_id` and checks it exactly.
pub fn build_and_verify_nice_extension(catalog: &CubeCatalog, bounds: &UpperBounds, class_id: u64) -> Result<VerificationReport> {
    let cert = bounds
        .get(class_id)
        .ok_or_else(|| Error::CertificateInvalid { id: class_id, reason: "class has no certificate".into() })?;
    let (rep, ext) = build_nice_extension(catalog, bounds, class_id)?;
    let (dim, n_vertices, n_facets) =
        ext.verify(&rep, cert.bound).map_err(|reason| Error::CertificateInvalid { id: class_id, reason })?;
    Ok(VerificationReport {
        class_id,
        target_id: cert.target_id.unwrap_or(class_id),
        op: cert.op,
        bound: cert.bound,
        dim,
        n_vertices,
        n_facets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, id: u64) -> VertexSet {
        VertexSet::from_id(id, n).unwrap()
    }

    #[test]
    fn simplex_and_facets() {
        let s = set(4, 279);
        let ext = NiceExtension::simplex(&s);
        assert_eq!(ext.verify(&s, 5), Ok((4, 5, 5)));
        let cube = set(3, 255);
        assert_eq!(NiceExtension::from_facets(&cube).unwrap().verify(&cube, 6), Ok((3, 8, 6)));
        let point = set(3, 1);
        assert_eq!(NiceExtension::from_facets(&point).unwrap().verify(&point, 0), Ok((0, 1, 0)));
    }

    #[test]
    fn sliced_cube_from_prism() {
        let prism = set(3, 63);
        let ext = NiceExtension::from_facets(&prism).unwrap().union_point(&[0, 1, 1]);
        assert_eq!(ext.verify(&set(3, 127), 6), Ok((4, 7, 6)));
    }

    #[test]
    fn reflections_and_down() {
        // Triangle {00, 10, 11} reflected at x1 = x2 by its facet: the square with 4 facets.
        let tri = set(2, 0b1011);
        let ext = NiceExtension::from_facets(&tri).unwrap().reflect(&[-1, 1], 0);
        assert_eq!(ext.verify(&set(2, 15), 4), Ok((3, 4, 4)));
        // Interval {10, 11} pushed down along x1.
        let iv = set(2, 0b1010);
        let ext = NiceExtension::from_facets(&iv).unwrap().down(0);
        assert_eq!(ext.verify(&set(2, 15), 4).map(|r| r.1), Ok(4));
    }

    #[test]
    fn wrong_target_rejected() {
        let tri = set(2, 7);
        let ext = NiceExtension::from_facets(&tri).unwrap();
        assert!(ext.verify(&set(2, 15), 10).is_err());
        assert!(ext.verify(&tri, 2).is_err());
    }

    #[test]
    fn three_cube_certificates_verify() {
        let cat = CubeCatalog::build(3).unwrap();
        let ub = super::super::fixpoint_upper_bounds(&cat).unwrap();
        for &id in ub.certificates.keys() {
            build_and_verify_nice_extension(&cat, &ub, id).unwrap();
        }
    }
}
