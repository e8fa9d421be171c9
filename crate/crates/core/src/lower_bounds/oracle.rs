use crate::exact_geometry::SlackMatrix;
use crate::{Error, Result, SlackEntry};

/// Largest support the exhaustive oracle accepts.
pub const ORACLE_MAX_CELLS: usize = 12;

/// Minimum (refined) covering number by brute force over every subset of every
/// rectangle of the support, maximal or not, in order of increasing size.
///
/// Meant as a reference for the branch-and-bound solvers on tiny instances.
pub fn min_cover_oracle<T: SlackEntry>(s: &SlackMatrix<T>, refined: bool) -> Result<usize> {
    let (m, k) = (s.rows(), s.cols());
    let zero = T::zero();
    if s.entries().iter().flatten().any(|&x| x < zero) {
        return Err(Error::invalid("negative entry"));
    }
    let pos = |i: usize, j: usize| s.get(i, j) > zero;
    let n_cells = (0..m).flat_map(|i| (0..k).map(move |j| (i, j))).filter(|&(i, j)| pos(i, j)).count();
    if n_cells > ORACLE_MAX_CELLS || m * k > 64 {
        return Err(Error::SizeLimit(format!(
            "oracle needs at most {ORACLE_MAX_CELLS} support cells and 64 matrix cells, got {n_cells} of {}",
            m * k
        )));
    }
    let bit = |i: usize, j: usize| 1u64 << (i * k + j);

    let mut support = 0u64;
    for i in 0..m {
        for j in 0..k {
            if pos(i, j) {
                support |= bit(i, j);
            }
        }
    }

    let mut rects = Vec::new();
    for rows in 1u32..1 << m {
        let common = (0..k)
            .filter(|&j| (0..m).filter(|i| rows >> i & 1 == 1).all(|i| pos(i, j)))
            .fold(0u32, |acc, j| acc | 1 << j);
        // Every nonempty subset of the common columns.
        let mut cols = common;
        while cols != 0 {
            let mut cells = 0u64;
            for i in (0..m).filter(|i| rows >> i & 1 == 1) {
                for j in (0..k).filter(|j| cols >> j & 1 == 1) {
                    cells |= bit(i, j);
                }
            }
            rects.push(cells);
            cols = (cols - 1) & common;
        }
    }

    let mut pairs = Vec::new();
    for i1 in 0..m {
        for i2 in i1 + 1..m {
            for j1 in 0..k {
                for j2 in 0..k {
                    if j1 == j2 || !pos(i1, j1) || !pos(i2, j2) {
                        continue;
                    }
                    if s.get(i1, j1) * s.get(i2, j2) > s.get(i1, j2) * s.get(i2, j1) {
                        pairs.push(bit(i1, j1) | bit(i2, j2));
                    }
                }
            }
        }
    }

    let accept = |chosen: &[u64]| {
        chosen.iter().fold(0, |a, &r| a | r) == support
            && (!refined || pairs.iter().all(|&p| chosen.iter().filter(|&&r| r & p != 0).count() >= 2))
    };
    for size in 0..=n_cells {
        let mut chosen = Vec::with_capacity(size);
        if subsets(&rects, 0, size, &mut chosen, &accept) {
            return Ok(size);
        }
    }
    unreachable!("singleton cells always form a refined covering")
}

fn subsets(rects: &[u64], from: usize, left: usize, chosen: &mut Vec<u64>, accept: &impl Fn(&[u64]) -> bool) -> bool {
    if left == 0 {
        return accept(chosen);
    }
    for r in from..=rects.len().saturating_sub(left) {
        if rects.len() < left {
            break;
        }
        chosen.push(rects[r]);
        let hit = subsets(rects, r + 1, left - 1, chosen, accept);
        chosen.pop();
        if hit {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let s = SlackMatrix::from_rows(vec![vec![2i64, 1], vec![1, 1]]).unwrap();
        assert_eq!(min_cover_oracle(&s, false).unwrap(), 1);
        assert_eq!(min_cover_oracle(&s, true).unwrap(), 2);
        let id3 = SlackMatrix::from_rows((0..3).map(|i| (0..3).map(|j| (i == j) as i64).collect()).collect())
            .unwrap();
        assert_eq!(min_cover_oracle(&id3, false).unwrap(), 3);
        let big = SlackMatrix::from_rows(vec![vec![1i64; 5]; 3]).unwrap();
        assert!(matches!(min_cover_oracle(&big, false), Err(Error::SizeLimit(_))));
    }
}
