//! Vertex sets of the 0/1-cube, polytope IDs and cube symmetries.
//!
//! A vertex `v ∈ {0,1}^n` is identified with its index `b(v) = Σ v_i 2^(i-1)`; a set of
//! vertices is the bitmask with bit `b(v)` set for every member. The ID of the polytope
//! `conv(V)` is that bitmask read as an integer, so the origin has ID 1, the unit square
//! ID 15 and the full 4-cube ID 65535.

use std::fmt;
use std::sync::OnceLock;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest ambient dimension supported.
pub const MAX_DIM: usize = 4;

/// Index `b(v) = Σ v_i 2^(i-1)` of a 0/1 vector.
pub fn vertex_index(v: &[i64]) -> Result<usize> {
    if v.len() > MAX_DIM {
        return Err(Error::invalid(format!("vector of length {} exceeds dimension {MAX_DIM}", v.len())));
    }
    v.iter().enumerate().try_fold(0usize, |acc, (i, &x)| match x {
        0 => Ok(acc),
        1 => Ok(acc | (1 << i)),
        _ => Err(Error::invalid(format!("entry {x} at coordinate {} is not binary", i + 1))),
    })
}

/// Inverse of [`vertex_index`].
pub fn vertex_coords(index: usize, n: usize) -> Vec<i64> {
    (0..n).map(|i| ((index >> i) & 1) as i64).collect()
}

/// A set of vertices of the `n`-dimensional 0/1-cube.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet {
    dim: u8,
    mask: u32,
}

impl VertexSet {
    pub fn new(dim: usize, mask: u32) -> Result<Self> {
        if dim > MAX_DIM {
            return Err(Error::invalid(format!("ambient dimension {dim} exceeds {MAX_DIM}")));
        }
        if (mask as u64) >> (1u32 << dim) != 0 {
            return Err(Error::invalid(format!("mask {mask} does not fit {} cube vertices", 1u32 << dim)));
        }
        Ok(VertexSet { dim: dim as u8, mask })
    }

    pub(crate) fn from_mask_unchecked(dim: usize, mask: u32) -> Self {
        debug_assert!(dim <= MAX_DIM && (mask as u64) >> (1u32 << dim) == 0);
        VertexSet { dim: dim as u8, mask }
    }

    pub fn empty(dim: usize) -> Result<Self> {
        Self::new(dim, 0)
    }

    /// All `2^n` cube vertices.
    pub fn full_cube(dim: usize) -> Result<Self> {
        let size = 1u64 << dim;
        Self::new(dim, ((1u64 << size) - 1) as u32)
    }

    /// Reconstructs a vertex set from its polytope ID.
    pub fn from_id(id: u64, dim: usize) -> Result<Self> {
        let mask = u32::try_from(id).map_err(|_| Error::invalid(format!("ID {id} is out of range")))?;
        Self::new(dim, mask)
    }

    pub fn from_points<'a>(dim: usize, points: impl IntoIterator<Item = &'a [i64]>) -> Result<Self> {
        let mut mask = 0u32;
        for p in points {
            if p.len() != dim {
                return Err(Error::invalid(format!("point of length {} in dimension {dim}", p.len())));
            }
            mask |= 1 << vertex_index(p)?;
        }
        Self::new(dim, mask)
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim as usize
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    /// The polytope ID of `conv(self)`.
    pub fn id(&self) -> u64 {
        self.mask as u64
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains_index(&self, index: usize) -> bool {
        index < 32 && self.mask >> index & 1 == 1
    }

    pub fn with_index(&self, index: usize) -> Self {
        debug_assert!(index < 1 << self.dim);
        VertexSet { dim: self.dim, mask: self.mask | 1 << index }
    }

    pub fn without_index(&self, index: usize) -> Self {
        VertexSet { dim: self.dim, mask: self.mask & !(1 << index) }
    }

    pub fn union(&self, other: &VertexSet) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        VertexSet { dim: self.dim, mask: self.mask | other.mask }
    }

    pub fn intersection(&self, other: &VertexSet) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        VertexSet { dim: self.dim, mask: self.mask & other.mask }
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.mask & !other.mask == 0
    }

    /// Vertex indices in increasing order.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        let mask = self.mask;
        (0..1usize << self.dim).filter(move |&i| mask >> i & 1 == 1)
    }

    /// Vertex coordinates, ordered by increasing index.
    pub fn points(&self) -> Vec<Vec<i64>> {
        self.indices().map(|i| vertex_coords(i, self.ambient_dim())).collect()
    }

    /// The same vertices viewed inside a cube of larger dimension (trailing zero coordinates).
    pub fn lift_to(&self, dim: usize) -> Result<Self> {
        if dim < self.ambient_dim() {
            return Err(Error::invalid("cannot lift to a smaller cube"));
        }
        Self::new(dim, self.mask)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VertexSet(n={}, id={})", self.dim, self.mask)
    }
}

/// Polytope ID of `conv(V)`: the characteristic bitmask `Σ_{v∈V} 2^b(v)`.
pub fn polytope_id(v: &VertexSet) -> u64 {
    v.id()
}

/// Inverse of [`polytope_id`] for ambient dimension `n`.
pub fn id_to_vertex_set(id: u64, n: usize) -> Result<VertexSet> {
    VertexSet::from_id(id, n)
}

/// An affine symmetry of the 0/1-cube: a coordinate permutation followed by coordinate flips.
///
/// The image of `x` has coordinates `σ(x)_i = x_{perm[i]} XOR flip_i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CubeSymmetry {
    dim: u8,
    perm: [u8; MAX_DIM],
    flips: u8,
}

impl CubeSymmetry {
    pub fn identity(dim: usize) -> Self {
        let mut perm = [0u8; MAX_DIM];
        for (i, p) in perm.iter_mut().enumerate() {
            *p = i as u8;
        }
        CubeSymmetry { dim: dim as u8, perm, flips: 0 }
    }

    pub fn new(perm: &[usize], flips: u8) -> Result<Self> {
        let dim = perm.len();
        if dim > MAX_DIM {
            return Err(Error::invalid(format!("dimension {dim} exceeds {MAX_DIM}")));
        }
        if !perm.iter().copied().sorted().eq(0..dim) {
            return Err(Error::invalid(format!("{perm:?} is not a permutation")));
        }
        if flips as u32 >> dim != 0 {
            return Err(Error::invalid("flip mask exceeds dimension"));
        }
        let mut p = Self::identity(dim).perm;
        for (slot, &v) in p.iter_mut().zip(perm) {
            *slot = v as u8;
        }
        Ok(CubeSymmetry { dim: dim as u8, perm: p, flips })
    }

    /// `x_i -> 1 - x_i` (0-based coordinate).
    pub fn flip(dim: usize, i: usize) -> Result<Self> {
        if i >= dim {
            return Err(Error::invalid(format!("coordinate {i} out of range")));
        }
        Ok(CubeSymmetry { flips: 1 << i, ..Self::identity(dim) })
    }

    /// Exchange coordinates `i` and `j` (0-based).
    pub fn swap(dim: usize, i: usize, j: usize) -> Result<Self> {
        if i >= dim || j >= dim {
            return Err(Error::invalid("swap coordinate out of range"));
        }
        let mut s = Self::identity(dim);
        s.perm.swap(i, j);
        Ok(s)
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim as usize
    }

    pub fn perm(&self) -> &[u8] {
        &self.perm[..self.dim as usize]
    }

    pub fn flips(&self) -> u8 {
        self.flips
    }

    /// `self ∘ inner`, i.e. apply `inner` first.
    pub fn compose(&self, inner: &CubeSymmetry) -> Result<Self> {
        if self.dim != inner.dim {
            return Err(Error::invalid("composing symmetries of different dimensions"));
        }
        let mut out = Self::identity(self.ambient_dim());
        let mut flips = 0u8;
        for i in 0..self.ambient_dim() {
            let p = self.perm[i] as usize;
            out.perm[i] = inner.perm[p];
            flips |= ((inner.flips >> p & 1) ^ (self.flips >> i & 1)) << i;
        }
        out.flips = flips;
        Ok(out)
    }

    pub fn apply_index(&self, index: usize) -> usize {
        (0..self.ambient_dim()).fold(0, |acc, i| {
            let bit = (index >> self.perm[i] & 1) ^ (self.flips as usize >> i & 1);
            acc | bit << i
        })
    }

    /// Image of every vertex index, as a lookup table.
    pub fn vertex_permutation(&self) -> Vec<u8> {
        (0..1usize << self.dim).map(|i| self.apply_index(i) as u8).collect()
    }
}

impl fmt::Debug for CubeSymmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CubeSymmetry(perm={:?}, flips={:#b})", self.perm(), self.flips)
    }
}

/// `{σ(v) : v ∈ V}`.
pub fn apply_symmetry(sigma: &CubeSymmetry, v: &VertexSet) -> Result<VertexSet> {
    if sigma.ambient_dim() != v.ambient_dim() {
        return Err(Error::invalid(format!(
            "symmetry of dimension {} applied to vertex set of dimension {}",
            sigma.ambient_dim(),
            v.ambient_dim()
        )));
    }
    let mask = v.indices().fold(0u32, |m, i| m | 1 << sigma.apply_index(i));
    Ok(VertexSet::from_mask_unchecked(v.ambient_dim(), mask))
}

/// All `2^n · n!` symmetries, ordered lexicographically by (permutation, flip mask).
pub fn enumerate_symmetries(n: usize) -> Result<Vec<CubeSymmetry>> {
    if n > MAX_DIM {
        return Err(Error::invalid(format!("dimension {n} exceeds {MAX_DIM}")));
    }
    let mut out = Vec::new();
    for perm in (0..n).permutations(n) {
        for flips in 0..1u16 << n {
            out.push(CubeSymmetry::new(&perm, flips as u8)?);
        }
    }
    Ok(out)
}

/// Vertex permutation tables of every symmetry of the `n`-cube, built once per dimension.
pub(crate) fn symmetry_tables(n: usize) -> &'static [Vec<u8>] {
    static TABLES: [OnceLock<Vec<Vec<u8>>>; MAX_DIM + 1] =
        [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    TABLES[n].get_or_init(|| {
        enumerate_symmetries(n)
            .expect("dimension checked by caller")
            .iter()
            .map(CubeSymmetry::vertex_permutation)
            .collect()
    })
}

/// Applies a vertex permutation table to a mask.
#[inline]
pub(crate) fn permute_mask(table: &[u8], mut mask: u32) -> u32 {
    let mut out = 0u32;
    while mask != 0 {
        let i = mask.trailing_zeros() as usize;
        out |= 1 << table[i];
        mask &= mask - 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn vertex_index_examples() {
        assert_eq!(vertex_index(&[0, 0, 0, 0]).unwrap(), 0);
        assert_eq!(vertex_index(&[1, 0, 0, 0]).unwrap(), 1);
        assert_eq!(vertex_index(&[1, 1, 1, 1]).unwrap(), 15);
        assert!(matches!(vertex_index(&[0, 2, 0]), Err(Error::InvalidInput(_))));
        assert!(vertex_index(&[1, -1]).is_err());
    }

    #[test]
    fn vertex_index_is_a_bijection() {
        for n in 0..=MAX_DIM {
            let images: Vec<usize> = (0..1 << n)
                .map(|i| vertex_index(&vertex_coords(i, n)).unwrap())
                .collect();
            assert_eq!(images, (0..1 << n).collect::<Vec<_>>());
        }
    }

    #[test]
    fn polytope_id_examples() {
        let origin = VertexSet::from_points(3, [[0i64, 0, 0].as_slice()]).unwrap();
        assert_eq!(polytope_id(&origin), 1);
        let square: Vec<Vec<i64>> = vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]];
        let square = VertexSet::from_points(2, square.iter().map(Vec::as_slice)).unwrap();
        assert_eq!(polytope_id(&square), 15);
        assert_eq!(polytope_id(&VertexSet::full_cube(4).unwrap()), 65535);
    }

    #[test]
    fn mask_must_fit() {
        assert!(VertexSet::new(2, 16).is_err());
        assert!(VertexSet::new(2, 15).is_ok());
        assert!(VertexSet::new(5, 1).is_err());
        assert!(VertexSet::new(4, 65535).is_ok());
        assert!(VertexSet::new(4, 65536).is_err());
    }

    #[test]
    fn symmetry_examples() {
        let point = VertexSet::from_id(1, 2).unwrap();
        assert_eq!(apply_symmetry(&CubeSymmetry::identity(2), &point).unwrap(), point);
        let flipped = apply_symmetry(&CubeSymmetry::flip(2, 0).unwrap(), &point).unwrap();
        assert_eq!(flipped.id(), 2);
        let swapped = apply_symmetry(&CubeSymmetry::swap(2, 0, 1).unwrap(), &flipped).unwrap();
        assert_eq!(swapped.points(), vec![vec![0, 1]]);
        assert!(apply_symmetry(&CubeSymmetry::identity(3), &point).is_err());
    }

    #[test]
    fn group_sizes() {
        assert_eq!(enumerate_symmetries(0).unwrap().len(), 1);
        assert_eq!(enumerate_symmetries(1).unwrap().len(), 2);
        assert_eq!(enumerate_symmetries(2).unwrap().len(), 8);
        assert_eq!(enumerate_symmetries(3).unwrap().len(), 48);
        let g4 = enumerate_symmetries(4).unwrap();
        assert_eq!(g4.len(), 384);
        assert_eq!(g4.iter().collect::<std::collections::HashSet<_>>().len(), 384);
        assert!(enumerate_symmetries(5).is_err());
    }

    #[test]
    fn enumeration_order_is_lexicographic() {
        let g = enumerate_symmetries(3).unwrap();
        let keys: Vec<(Vec<u8>, u8)> = g.iter().map(|s| (s.perm().to_vec(), s.flips())).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert_eq!(g[0], CubeSymmetry::identity(3));
    }

    #[test]
    fn group_is_closed_under_composition() {
        let g = enumerate_symmetries(3).unwrap();
        let set: std::collections::HashSet<_> = g.iter().copied().collect();
        for a in &g {
            for b in &g {
                assert!(set.contains(&a.compose(b).unwrap()));
            }
        }
    }

    fn arb_symmetry() -> impl Strategy<Value = CubeSymmetry> {
        (0usize..384).prop_map(|i| enumerate_symmetries(4).unwrap()[i])
    }

    proptest! {
        #[test]
        fn id_round_trip(mask in 1u32..=65535) {
            let v = VertexSet::new(4, mask).unwrap();
            prop_assert_eq!(id_to_vertex_set(polytope_id(&v), 4).unwrap(), v);
        }

        #[test]
        fn action_is_compatible_with_composition(s in arb_symmetry(), t in arb_symmetry(), mask in 1u32..=65535) {
            let v = VertexSet::new(4, mask).unwrap();
            let lhs = apply_symmetry(&s, &apply_symmetry(&t, &v).unwrap()).unwrap();
            let rhs = apply_symmetry(&s.compose(&t).unwrap(), &v).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(lhs.len(), v.len());
            let table = s.vertex_permutation();
            prop_assert_eq!(permute_mask(&table, mask), apply_symmetry(&s, &v).unwrap().mask());
        }
    }
}
