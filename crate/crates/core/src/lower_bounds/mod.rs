//! Combinatorial lower bounds on the nonnegative rank of a slack matrix.
//!
//! All three quantities depend only on the support pattern of the matrix and, for the
//! refined covering number, on strict comparisons of 2x2 products. They satisfy
//! `ω ≤ rc ≤ rrc ≤ r₊`.

mod bitset;
mod cover;
mod fooling;
mod oracle;

use serde::{Deserialize, Serialize};

use crate::exact_geometry::SlackMatrix;
use crate::{Error, Result, SlackEntry};

pub(crate) use bitset::Bits256;
pub use cover::CoverInstance;
pub use oracle::min_cover_oracle;

/// Largest number of matrix cells the solvers accept.
pub const MAX_CELLS: usize = Bits256::CAPACITY;

/// Row and column count limit (rows and columns are stored as 32-bit masks).
pub const MAX_SIDE: usize = 32;

/// Support of a nonnegative matrix, one column bitmask per row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportPattern {
    rows: usize,
    cols: usize,
    row_masks: Vec<u32>,
}

impl SupportPattern {
    pub fn new<T: SlackEntry>(s: &SlackMatrix<T>) -> Result<Self> {
        let (rows, cols) = (s.rows(), s.cols());
        if rows > MAX_SIDE || cols > MAX_SIDE || rows * cols > MAX_CELLS {
            return Err(Error::SizeLimit(format!(
                "{rows}x{cols} matrix exceeds the {MAX_CELLS}-cell solver limit"
            )));
        }
        let zero = T::zero();
        let mut row_masks = Vec::with_capacity(rows);
        for (i, row) in s.entries().iter().enumerate() {
            let mut mask = 0u32;
            for (j, &x) in row.iter().enumerate() {
                if x < zero {
                    return Err(Error::invalid(format!("negative entry at ({i}, {j})")));
                }
                if x > zero {
                    mask |= 1 << j;
                }
            }
            row_masks.push(mask);
        }
        Ok(SupportPattern { rows, cols, row_masks })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.row_masks[i] >> j & 1 == 1
    }

    pub fn row_mask(&self, i: usize) -> u32 {
        self.row_masks[i]
    }

    pub fn n_cells(&self) -> usize {
        self.row_masks.iter().map(|m| m.count_ones() as usize).sum()
    }

    /// Support cells in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rows).flat_map(move |i| (0..self.cols).filter(move |&j| self.get(i, j)).map(move |j| (i, j)))
    }

    #[inline]
    pub(crate) fn cell_index(&self, i: usize, j: usize) -> usize {
        i * self.cols + j
    }

    pub(crate) fn cell_bits(&self) -> Bits256 {
        let mut b = Bits256::new();
        for (i, j) in self.cells() {
            b.insert(self.cell_index(i, j));
        }
        b
    }
}

/// Combinatorial rectangle `row_set × col_set`, both given as bitmasks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Rectangle {
    pub row_set: u32,
    pub col_set: u32,
}

impl Rectangle {
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.row_set >> i & 1 == 1 && self.col_set >> j & 1 == 1
    }

    pub fn rows(&self) -> impl Iterator<Item = usize> {
        bit_indices(self.row_set)
    }

    pub fn cols(&self) -> impl Iterator<Item = usize> {
        bit_indices(self.col_set)
    }

    pub fn area(&self) -> usize {
        (self.row_set.count_ones() * self.col_set.count_ones()) as usize
    }

    pub(crate) fn cell_bits(&self, cols: usize) -> Bits256 {
        let mut b = Bits256::new();
        for i in self.rows() {
            for j in self.cols() {
                b.insert(i * cols + j);
            }
        }
        b
    }
}

fn bit_indices(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |k| mask >> k & 1 == 1)
}

/// Two support cells in distinct rows and columns whose 2x2 minor is strictly positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DetPair {
    pub p1: (usize, usize),
    pub p2: (usize, usize),
}

/// Size of the largest fooling set of `s`.
pub fn fooling_set_number<T: SlackEntry>(s: &SlackMatrix<T>) -> Result<usize> {
    let pattern = SupportPattern::new(s)?;
    Ok(fooling::max_fooling_set(&pattern).len())
}

/// A maximum fooling set, as a list of cells.
pub fn maximum_fooling_set<T: SlackEntry>(s: &SlackMatrix<T>) -> Result<Vec<(usize, usize)>> {
    let pattern = SupportPattern::new(s)?;
    Ok(fooling::max_fooling_set(&pattern))
}

/// All inclusion-maximal rectangles of the support, sorted by `(row_set, col_set)`.
pub fn enumerate_maximal_rectangles<T: SlackEntry>(s: &SlackMatrix<T>) -> Result<Vec<Rectangle>> {
    Ok(maximal_rectangles(&SupportPattern::new(s)?))
}

pub(crate) fn maximal_rectangles(p: &SupportPattern) -> Vec<Rectangle> {
    // Column sets of maximal rectangles are exactly the nonempty intersections of
    // nonempty row supports.
    let mut closed: Vec<u32> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for &m in p.row_masks.iter().filter(|&&m| m != 0) {
        let mut fresh = vec![m];
        for &c in &closed {
            fresh.push(c & m);
        }
        for c in fresh {
            if c != 0 && seen.insert(c) {
                closed.push(c);
            }
        }
    }
    let mut rects: Vec<Rectangle> = closed
        .into_iter()
        .map(|col_set| {
            let row_set = (0..p.rows)
                .filter(|&i| p.row_masks[i] & col_set == col_set)
                .fold(0u32, |acc, i| acc | 1 << i);
            Rectangle { row_set, col_set }
        })
        .collect();
    rects.sort();
    rects
}

/// All cell pairs with `S[i1][j1]·S[i2][j2] > S[i1][j2]·S[i2][j1]`, each unordered pair once
/// with `p1` before `p2` in row-major order.
pub fn determinant_pairs<T: SlackEntry>(s: &SlackMatrix<T>) -> Result<Vec<DetPair>> {
    let pattern = SupportPattern::new(s)?;
    let cells: Vec<(usize, usize)> = pattern.cells().collect();
    let mut out = Vec::new();
    for (a, &(i1, j1)) in cells.iter().enumerate() {
        for &(i2, j2) in &cells[a + 1..] {
            if i1 == i2 || j1 == j2 {
                continue;
            }
            if s.get(i1, j1) * s.get(i2, j2) > s.get(i1, j2) * s.get(i2, j1) {
                out.push(DetPair { p1: (i1, j1), p2: (i2, j2) });
            }
        }
    }
    Ok(out)
}

/// Minimum number of rectangles covering the support.
pub fn rectangle_covering_number<T: SlackEntry>(s: &SlackMatrix<T>) -> Result<usize> {
    Ok(CoverInstance::new(s)?.minimum_cover(false).len())
}

/// Minimum size of a refined rectangle covering.
pub fn refined_rectangle_covering_number<T: SlackEntry>(s: &SlackMatrix<T>) -> Result<usize> {
    Ok(CoverInstance::new(s)?.minimum_cover(true).len())
}

/// The three bounds `(ω, rc, rrc)` computed on one shared instance.
pub fn all_bounds<T: SlackEntry>(s: &SlackMatrix<T>) -> Result<(usize, usize, usize)> {
    let inst = CoverInstance::new(s)?;
    let omega = fooling::max_fooling_set(inst.pattern()).len();
    let (plain, refined) = inst.minimum_covers();
    Ok((omega, plain.len(), refined.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sm(rows: &[&[i64]]) -> SlackMatrix<i64> {
        SlackMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn identity(d: usize) -> SlackMatrix<i64> {
        SlackMatrix::from_rows((0..d).map(|i| (0..d).map(|j| (i == j) as i64).collect()).collect())
            .unwrap()
    }

    #[test]
    fn two_by_two_example() {
        let s = sm(&[&[2, 1], &[1, 1]]);
        let rects = enumerate_maximal_rectangles(&s).unwrap();
        assert_eq!(rects, vec![Rectangle { row_set: 3, col_set: 3 }]);
        assert_eq!(rectangle_covering_number(&s).unwrap(), 1);
        assert_eq!(refined_rectangle_covering_number(&s).unwrap(), 2);
        assert_eq!(
            determinant_pairs(&s).unwrap(),
            vec![DetPair { p1: (0, 0), p2: (1, 1) }]
        );
        assert_eq!(fooling_set_number(&s).unwrap(), 1);
    }

    #[test]
    fn identity_patterns() {
        for d in 1..=6 {
            let s = identity(d);
            assert_eq!(fooling_set_number(&s).unwrap(), d);
            assert_eq!(rectangle_covering_number(&s).unwrap(), d);
            assert_eq!(refined_rectangle_covering_number(&s).unwrap(), d);
            assert_eq!(enumerate_maximal_rectangles(&s).unwrap().len(), d);
        }
        let pairs = determinant_pairs(&identity(2)).unwrap();
        assert_eq!(pairs, vec![DetPair { p1: (0, 0), p2: (1, 1) }]);
    }

    #[test]
    fn all_ones_and_zero() {
        let ones = sm(&[&[1, 1, 1], &[1, 1, 1]]);
        assert_eq!(enumerate_maximal_rectangles(&ones).unwrap().len(), 1);
        assert!(determinant_pairs(&ones).unwrap().is_empty());
        assert_eq!(all_bounds(&ones).unwrap(), (1, 1, 1));
        let zero = sm(&[&[0, 0], &[0, 0]]);
        assert_eq!(all_bounds(&zero).unwrap(), (0, 0, 0));
    }

    #[test]
    fn negative_entries_rejected() {
        assert!(matches!(
            fooling_set_number(&sm(&[&[1, -1]])),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn oversized_rejected() {
        let s = SlackMatrix::from_rows(vec![vec![1i64; 40]; 2]).unwrap();
        assert!(matches!(rectangle_covering_number(&s), Err(Error::SizeLimit(_))));
    }

    #[test]
    fn maximal_rectangles_are_maximal() {
        let s = sm(&[&[1, 1, 0, 1], &[0, 1, 1, 1], &[1, 1, 1, 0], &[1, 0, 1, 1]]);
        let p = SupportPattern::new(&s).unwrap();
        let rects = maximal_rectangles(&p);
        for r in &rects {
            assert!(r.rows().all(|i| r.cols().all(|j| p.get(i, j))));
            for i in (0..4).filter(|i| r.row_set >> i & 1 == 0) {
                assert!(r.cols().any(|j| !p.get(i, j)));
            }
            for j in (0..4).filter(|j| r.col_set >> j & 1 == 0) {
                assert!(r.rows().any(|i| !p.get(i, j)));
            }
        }
    }
}
