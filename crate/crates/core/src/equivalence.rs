//! 0/1-equivalence and affine equivalence of 0/1-polytopes.
//!
//! 0/1-classes are orbits of the cube's symmetry group; the representative is the smallest
//! ID in the orbit. Affine classes merge 0/1-classes that are related by an arbitrary
//! invertible affine map, found by exact search over images of a fixed affine basis.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::core_types::{permute_mask, symmetry_tables, VertexSet, MAX_DIM};
use crate::exact_geometry::{affine_dimension, embedding, extreme_points, PolytopeData};
use crate::linalg::{int_determinant, AffineMap, Matrix};
use crate::{Error, Rational, RationalAffineMap, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassKind {
    ZeroOne,
    Affine,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivClass {
    pub rep_id: u64,
    pub kind: ClassKind,
    /// For affine classes, the representatives of the merged 0/1-classes; for a 0/1-class,
    /// just its own representative.
    pub member_ids: Vec<u64>,
    pub n_vertices: usize,
    pub n_facets: usize,
    pub f_vector: Vec<usize>,
    /// Ambient (= affine) dimension of the class.
    pub dim: usize,
    /// Number of distinct vertex sets in the class.
    pub polytopes: usize,
}

impl EquivClass {
    pub fn representative(&self) -> VertexSet {
        VertexSet::from_id(self.rep_id, self.dim).expect("representative fits its cube")
    }

    fn invariants(&self) -> (usize, usize, Vec<usize>) {
        (self.n_vertices, self.n_facets, self.f_vector.clone())
    }
}

/// Smallest ID over the orbit of `V` under the cube symmetries.
pub fn canonical_01_id(v: &VertexSet) -> u64 {
    canonical_mask(v.ambient_dim(), v.mask()) as u64
}

fn canonical_mask(n: usize, mask: u32) -> u32 {
    symmetry_tables(n)
        .iter()
        .map(|t| permute_mask(t, mask))
        .min()
        .unwrap_or(mask)
}

/// Orbits of nonempty vertex subsets of the `n`-cube, in increasing order of representative.
/// Yields `(representative mask, orbit size)`.
fn orbits(n: usize) -> Vec<(u32, usize)> {
    let tables = symmetry_tables(n);
    let count = 1usize << (1usize << n);
    let mut seen = vec![false; count];
    let mut out = Vec::new();
    for mask in 1..count {
        if seen[mask] {
            continue;
        }
        let mut size = 0;
        for t in tables {
            let img = permute_mask(t, mask as u32) as usize;
            if !seen[img] {
                seen[img] = true;
                size += 1;
            }
        }
        out.push((mask as u32, size));
    }
    out
}

/// All 0/1-equivalence classes of full-dimensional polytopes in the `d`-cube.
pub fn enumerate_01_classes(n: usize, d: usize) -> Result<Vec<EquivClass>> {
    if n != d {
        return Err(Error::invalid(format!("classification needs n = d, got n={n}, d={d}")));
    }
    if n > MAX_DIM {
        return Err(Error::invalid(format!("dimension {n} exceeds {MAX_DIM}")));
    }
    let candidates: Vec<(u32, usize)> = orbits(n)
        .into_iter()
        .filter(|&(mask, _)| {
            let v = VertexSet::from_mask_unchecked(n, mask);
            affine_dimension(&v).expect("nonempty") == d
        })
        .collect();
    let mut classes = candidates
        .par_iter()
        .map(|&(mask, size)| -> Result<Option<EquivClass>> {
            let v = VertexSet::from_mask_unchecked(n, mask);
            if extreme_points(&v)? != v {
                return Ok(None);
            }
            let data = PolytopeData::compute(&v)?;
            Ok(Some(EquivClass {
                rep_id: v.id(),
                kind: ClassKind::ZeroOne,
                member_ids: vec![v.id()],
                n_vertices: v.len(),
                n_facets: data.n_facets(),
                f_vector: data.f_vector,
                dim: d,
                polytopes: size,
            }))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect::<Vec<_>>();
    classes.sort_by_key(|c| c.rep_id);
    Ok(classes)
}

/// Per-vertex invariant used to prune the affine map search: the number of facets through it.
fn vertex_degrees(v: &VertexSet) -> Result<Vec<usize>> {
    let data = PolytopeData::compute(v)?;
    let s = &data.slack;
    Ok((0..s.cols()).map(|j| (0..s.rows()).filter(|&i| s.get(i, j) == 0).count()).collect())
}

/// An invertible affine map `x -> Tx + t` with `T(V) + t = W`, if one exists.
///
/// Both sets must be full-dimensional in the same ambient dimension.
pub fn find_affine_map(v: &VertexSet, w: &VertexSet) -> Option<RationalAffineMap> {
    let d = v.ambient_dim();
    if w.ambient_dim() != d || v.len() != w.len() || v.is_empty() {
        return None;
    }
    if affine_dimension(v).ok()? != d || affine_dimension(w).ok()? != d {
        return None;
    }
    let vp = v.points();
    let wp = w.points();
    if d == 0 {
        return Some(AffineMap::identity(0));
    }
    let deg_v = vertex_degrees(v).ok()?;
    let deg_w = vertex_degrees(w).ok()?;

    // Lexicographically first affine basis of V.
    let mut basis = vec![0usize];
    for j in 1..vp.len() {
        let mut trial = basis.clone();
        trial.push(j);
        let rows: Vec<Vec<i64>> = trial[1..]
            .iter()
            .map(|&k| vp[k].iter().zip(&vp[trial[0]]).map(|(a, b)| a - b).collect())
            .collect();
        if Matrix::<Rational>::from_i64_rows(d, &rows).rank() == rows.len() {
            basis = trial;
        }
        if basis.len() == d + 1 {
            break;
        }
    }
    // Columns b_k - b_0; det and adjugate give integer "barycentric" coordinates of V.
    let b0 = &vp[basis[0]];
    let cols: Vec<Vec<i64>> = basis[1..]
        .iter()
        .map(|&k| vp[k].iter().zip(b0).map(|(a, b)| a - b).collect())
        .collect();
    let base_rows: Vec<Vec<i64>> = (0..d).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
    let det = int_determinant(&base_rows);
    let base = Matrix::<Rational>::from_i64_rows(d, &base_rows);
    let inv = base.inverse()?;
    let det_q = Rational::from_integer(det as i128);
    // coords[j] = det * B^{-1} (v_j - b_0), integral by Cramer's rule.
    let coords: Vec<Vec<i64>> = vp
        .iter()
        .map(|p| {
            let diff: Vec<Rational> =
                p.iter().zip(b0).map(|(a, b)| Rational::from_integer((a - b) as i128)).collect();
            inv.mul_vec(&diff)
                .into_iter()
                .map(|x| {
                    let y = x * det_q;
                    debug_assert!(y.is_integer());
                    *y.numer() as i64
                })
                .collect()
        })
        .collect();

    let w_index: HashMap<&Vec<i64>, usize> = wp.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut tuple = Vec::with_capacity(d + 1);
    let mut used = vec![false; wp.len()];
    let found = search_tuple(&basis, &deg_v, &deg_w, &wp, &mut tuple, &mut used, &|tuple| {
        let w0 = &wp[tuple[0]];
        let dirs: Vec<Vec<i64>> = tuple[1..]
            .iter()
            .map(|&k| wp[k].iter().zip(w0).map(|(a, b)| a - b).collect())
            .collect();
        let mut hit = vec![false; wp.len()];
        for (j, c) in coords.iter().enumerate() {
            let mut img = Vec::with_capacity(d);
            for i in 0..d {
                let num: i64 = c.iter().zip(&dirs).map(|(ck, dir)| ck * dir[i]).sum();
                if num % det != 0 {
                    return false;
                }
                img.push(w0[i] + num / det);
            }
            match w_index.get(&img) {
                Some(&k) if !hit[k] && deg_w[k] == deg_v[j] => hit[k] = true,
                _ => return false,
            }
        }
        true
    })?;

    let from: Vec<Vec<Rational>> = basis.iter().map(|&k| to_q(&vp[k])).collect();
    let to: Vec<Vec<Rational>> = found.iter().map(|&k| to_q(&wp[k])).collect();
    AffineMap::through_points(&from, &to)
}

fn to_q(p: &[i64]) -> Vec<Rational> {
    p.iter().map(|&x| Rational::from_integer(x as i128)).collect()
}

/// Depth-first search over ordered tuples of distinct, affinely independent W-vertices whose
/// degrees match the basis vertices.
fn search_tuple(
    basis: &[usize],
    deg_v: &[usize],
    deg_w: &[usize],
    wp: &[Vec<i64>],
    tuple: &mut Vec<usize>,
    used: &mut [bool],
    accept: &dyn Fn(&[usize]) -> bool,
) -> Option<Vec<usize>> {
    let depth = tuple.len();
    if depth == basis.len() {
        return accept(tuple).then(|| tuple.clone());
    }
    let target = deg_v[basis[depth]];
    for k in 0..wp.len() {
        if used[k] || deg_w[k] != target {
            continue;
        }
        tuple.push(k);
        if depth >= 1 {
            let d = wp[0].len();
            let rows: Vec<Vec<i64>> = tuple[1..]
                .iter()
                .map(|&i| wp[i].iter().zip(&wp[tuple[0]]).map(|(a, b)| a - b).collect())
                .collect();
            if Matrix::<Rational>::from_i64_rows(d, &rows).rank() != rows.len() {
                tuple.pop();
                continue;
            }
        }
        used[k] = true;
        if let Some(t) = search_tuple(basis, deg_v, deg_w, wp, tuple, used, accept) {
            return Some(t);
        }
        used[k] = false;
        tuple.pop();
    }
    None
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller index as root so representatives are minimal
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Merges 0/1-classes (of one fixed dimension) into affine equivalence classes.
pub fn partition_affine_classes(classes: &[EquivClass]) -> Result<Vec<EquivClass>> {
    let mut sorted: Vec<&EquivClass> = classes.iter().collect();
    sorted.sort_by_key(|c| c.rep_id);
    let mut groups: BTreeMap<(usize, usize, Vec<usize>), Vec<usize>> = BTreeMap::new();
    for (i, c) in sorted.iter().enumerate() {
        groups.entry(c.invariants()).or_default().push(i);
    }
    // Pairwise tests run in parallel; merging is a sequential pass afterwards.
    let links: Vec<Vec<(usize, usize)>> = groups
        .values()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|members| {
            let mut roots: Vec<usize> = Vec::new();
            let mut links = Vec::new();
            for &i in members.iter() {
                let vi = sorted[i].representative();
                match roots
                    .iter()
                    .find(|&&r| find_affine_map(&sorted[r].representative(), &vi).is_some())
                {
                    Some(&r) => links.push((r, i)),
                    None => roots.push(i),
                }
            }
            links
        })
        .collect();
    let mut uf = UnionFind((0..sorted.len()).collect());
    for (a, b) in links.into_iter().flatten() {
        uf.union(a, b);
    }
    let mut merged: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..sorted.len() {
        let r = uf.find(i);
        merged.entry(r).or_default().push(i);
    }
    Ok(merged
        .into_values()
        .map(|members| {
            let first = sorted[members[0]];
            EquivClass {
                rep_id: first.rep_id,
                kind: ClassKind::Affine,
                member_ids: members.iter().map(|&i| sorted[i].rep_id).collect(),
                n_vertices: first.n_vertices,
                n_facets: first.n_facets,
                f_vector: first.f_vector.clone(),
                dim: first.dim,
                polytopes: members.iter().map(|&i| sorted[i].polytopes).sum(),
            }
        })
        .collect())
}

/// Affine classification of every nonempty vertex subset of the `n`-cube, all dimensions.
pub struct CubeCatalog {
    n: usize,
    /// 0/1-class representative of every mask (index 0 unused).
    orbit_rep: Vec<u32>,
    dims: Vec<u8>,
    affine_of_orbit: HashMap<u32, u64>,
    /// Affine classes of each dimension `0..=n`, computed in their own full-dimensional cube.
    pub classes_by_dim: Vec<Vec<EquivClass>>,
    /// 0/1-classes of each dimension `0..=n`.
    pub zero_one_by_dim: Vec<Vec<EquivClass>>,
}

impl CubeCatalog {
    pub fn build(n: usize) -> Result<Self> {
        if n > MAX_DIM {
            return Err(Error::invalid(format!("dimension {n} exceeds {MAX_DIM}")));
        }
        let mut zero_one_by_dim = Vec::new();
        let mut classes_by_dim = Vec::new();
        let mut lookup: HashMap<(usize, u64), u64> = HashMap::new();
        for d in 0..=n {
            let zo = enumerate_01_classes(d, d)?;
            let aff = partition_affine_classes(&zo)?;
            for c in &aff {
                for &m in &c.member_ids {
                    lookup.insert((d, m), c.rep_id);
                }
            }
            zero_one_by_dim.push(zo);
            classes_by_dim.push(aff);
        }
        let size = 1usize << (1usize << n);
        let mut orbit_rep = vec![0u32; size];
        let mut dims = vec![u8::MAX; size];
        let mut affine_of_orbit = HashMap::new();
        let tables = symmetry_tables(n);
        for (rep, _) in orbits(n) {
            let v = VertexSet::from_mask_unchecked(n, rep);
            let emb = embedding(&v)?;
            let d = emb.dim();
            let canon = canonical_01_id(&emb.project_set(&v));
            let class = *lookup.get(&(d, canon)).ok_or_else(|| {
                Error::Inconsistency(format!("vertex set {rep} maps to unknown class {canon} in dimension {d}"))
            })?;
            affine_of_orbit.insert(rep, class);
            for t in tables {
                let img = permute_mask(t, rep) as usize;
                orbit_rep[img] = rep;
                dims[img] = d as u8;
            }
        }
        Ok(CubeCatalog { n, orbit_rep, dims, affine_of_orbit, classes_by_dim, zero_one_by_dim })
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    /// Number of nonempty masks, i.e. `2^(2^n) - 1`.
    pub fn mask_count(&self) -> usize {
        self.orbit_rep.len() - 1
    }

    pub fn dim_of_mask(&self, mask: u32) -> usize {
        self.dims[mask as usize] as usize
    }

    pub fn zero_one_class_of_mask(&self, mask: u32) -> u64 {
        self.orbit_rep[mask as usize] as u64
    }

    pub fn affine_class_of_mask(&self, mask: u32) -> u64 {
        self.affine_of_orbit[&self.orbit_rep[mask as usize]]
    }

    pub fn affine_class(&self, v: &VertexSet) -> Result<u64> {
        if v.ambient_dim() != self.n || v.is_empty() {
            return Err(Error::invalid("vertex set outside the catalog"));
        }
        Ok(self.affine_class_of_mask(v.mask()))
    }

    /// All affine classes, every dimension, in (dimension, representative) order.
    pub fn all_classes(&self) -> impl Iterator<Item = &EquivClass> {
        self.classes_by_dim.iter().flatten()
    }

    pub fn class(&self, rep_id: u64) -> Option<&EquivClass> {
        self.all_classes().find(|c| c.rep_id == rep_id)
    }
}
