use super::{maximal_rectangles, Bits256, Rectangle, SupportPattern};
use crate::exact_geometry::SlackMatrix;
use crate::{Result, SlackEntry};

/// Support pattern, maximal rectangles and the determinant-pair constraints of a matrix,
/// preprocessed for the covering searches.
#[derive(Clone, Debug)]
pub struct CoverInstance {
    pattern: SupportPattern,
    rects: Vec<Rectangle>,
    rect_cells: Vec<Bits256>,
    cell_rects: Vec<Vec<u32>>,
    // Cells sharing a rectangle with the given cell (itself included).
    neigh: Vec<Bits256>,
    // Support cells sorted by how many rectangles contain them.
    cells_by_rarity: Vec<usize>,
    support: Bits256,
    // Determinant pairs whose two cells fit into one rectangle; all others are met by
    // every covering automatically.
    pairs: Vec<(usize, usize)>,
    pair_rects: Vec<Vec<u32>>,
    rect_pairs: Vec<Vec<u32>>,
}

impl CoverInstance {
    pub fn new<T: SlackEntry>(s: &SlackMatrix<T>) -> Result<Self> {
        let pattern = SupportPattern::new(s)?;
        let rects = maximal_rectangles(&pattern);
        let cols = pattern.cols();
        let n_cells = pattern.rows() * cols;
        let rect_cells: Vec<Bits256> = rects.iter().map(|r| r.cell_bits(cols)).collect();
        let mut cell_rects = vec![Vec::new(); n_cells];
        for (r, bits) in rect_cells.iter().enumerate() {
            for c in bits.iter() {
                cell_rects[c].push(r as u32);
            }
        }
        let neigh: Vec<Bits256> = cell_rects
            .iter()
            .map(|rs| rs.iter().fold(Bits256::new(), |acc, &r| acc.or(&rect_cells[r as usize])))
            .collect();
        let support = pattern.cell_bits();
        let mut cells_by_rarity: Vec<usize> = support.iter().collect();
        cells_by_rarity.sort_by_key(|&c| (cell_rects[c].len(), c));

        let mut pairs = Vec::new();
        for dp in super::determinant_pairs(s)? {
            let ((i1, j1), (i2, j2)) = (dp.p1, dp.p2);
            if pattern.get(i1, j2) && pattern.get(i2, j1) {
                pairs.push((pattern.cell_index(i1, j1), pattern.cell_index(i2, j2)));
            }
        }
        let mut pair_rects = Vec::with_capacity(pairs.len());
        let mut rect_pairs = vec![Vec::new(); rects.len()];
        for (p, &(a, b)) in pairs.iter().enumerate() {
            let mut touching: Vec<u32> = cell_rects[a].iter().chain(&cell_rects[b]).copied().collect();
            touching.sort_unstable();
            touching.dedup();
            for &r in &touching {
                rect_pairs[r as usize].push(p as u32);
            }
            pair_rects.push(touching);
        }

        Ok(CoverInstance {
            pattern,
            rects,
            rect_cells,
            cell_rects,
            neigh,
            cells_by_rarity,
            support,
            pairs,
            pair_rects,
            rect_pairs,
        })
    }

    pub fn pattern(&self) -> &SupportPattern {
        &self.pattern
    }

    pub fn rectangles(&self) -> &[Rectangle] {
        &self.rects
    }

    /// Number of determinant pairs that a single rectangle could contain.
    pub fn n_active_pairs(&self) -> usize {
        self.pairs.len()
    }

    /// A minimum (refined) covering by maximal rectangles. Refined coverings may repeat
    /// a rectangle: two copies of the same maximal rectangle both count for a pair.
    pub fn minimum_cover(&self, refined: bool) -> Vec<Rectangle> {
        if refined {
            self.minimum_covers().1
        } else {
            self.plain_cover_indices().into_iter().map(|r| self.rects[r as usize]).collect()
        }
    }

    /// Minimum plain and minimum refined coverings, sharing the work between both.
    pub fn minimum_covers(&self) -> (Vec<Rectangle>, Vec<Rectangle>) {
        let plain = self.plain_cover_indices();
        let to_rects = |c: &[u32]| c.iter().map(|&r| self.rects[r as usize]).collect::<Vec<_>>();
        if self.is_refined(&plain) {
            return (to_rects(&plain), to_rects(&plain));
        }
        // Plain cover plus one extra rectangle per pair is always refined.
        let cap = self.support.len() + self.pairs.len();
        for limit in plain.len()..=cap {
            if let Some(cover) = self.search(true, limit) {
                return (to_rects(&plain), to_rects(&cover));
            }
        }
        unreachable!("a refined covering with at most {cap} rectangles always exists")
    }

    fn is_refined(&self, cover: &[u32]) -> bool {
        let mut count = vec![0u32; self.pairs.len()];
        for &r in cover {
            for &p in &self.rect_pairs[r as usize] {
                count[p as usize] += 1;
            }
        }
        count.iter().all(|&c| c >= 2)
    }

    fn plain_cover_indices(&self) -> Vec<u32> {
        let greedy = self.greedy_cover();
        let mut s = Search::new(self, false, greedy.len(), false);
        s.dfs(self.support);
        s.best_cover.unwrap_or(greedy)
    }

    fn search(&self, refined: bool, limit: usize) -> Option<Vec<u32>> {
        let mut s = Search::new(self, refined, limit + 1, true);
        s.dfs(self.support);
        s.best_cover
    }

    fn greedy_cover(&self) -> Vec<u32> {
        let mut uncovered = self.support;
        let mut out = Vec::new();
        while !uncovered.is_empty() {
            let (r, _) = self
                .rect_cells
                .iter()
                .enumerate()
                .map(|(r, bits)| (r, bits.and(&uncovered).len()))
                .max_by_key(|&(r, gain)| (gain, std::cmp::Reverse(r)))
                .expect("support cells always lie in some rectangle");
            uncovered = uncovered.and_not(&self.rect_cells[r]);
            out.push(r as u32);
        }
        out
    }

    // Cells picked greedily so that no two share a rectangle; each needs its own.
    fn lower_bound(&self, mut uncovered: Bits256) -> usize {
        let mut k = 0;
        for &c in &self.cells_by_rarity {
            if uncovered.contains(c) {
                k += 1;
                uncovered = uncovered.and_not(&self.neigh[c]);
                if uncovered.is_empty() {
                    break;
                }
            }
        }
        k
    }
}

struct Search<'a> {
    inst: &'a CoverInstance,
    refined: bool,
    forbidden: Vec<bool>,
    chosen: Vec<u32>,
    pair_count: Vec<u32>,
    unsatisfied: usize,
    // Only covers with fewer than `best` rectangles are of interest.
    best: usize,
    best_cover: Option<Vec<u32>>,
    first_only: bool,
}

impl<'a> Search<'a> {
    fn new(inst: &'a CoverInstance, refined: bool, best: usize, first_only: bool) -> Self {
        Search {
            inst,
            refined,
            forbidden: vec![false; inst.rects.len()],
            chosen: Vec::new(),
            pair_count: vec![0; inst.pairs.len()],
            unsatisfied: if refined { inst.pairs.len() } else { 0 },
            best,
            best_cover: None,
            first_only,
        }
    }

    fn done(&self) -> bool {
        self.first_only && self.best_cover.is_some()
    }

    fn push(&mut self, r: u32) {
        self.chosen.push(r);
        if self.refined {
            for &p in &self.inst.rect_pairs[r as usize] {
                let c = &mut self.pair_count[p as usize];
                *c += 1;
                if *c == 2 {
                    self.unsatisfied -= 1;
                }
            }
        }
    }

    fn pop(&mut self) {
        let r = self.chosen.pop().expect("pop without push");
        if self.refined {
            for &p in &self.inst.rect_pairs[r as usize] {
                let c = &mut self.pair_count[p as usize];
                if *c == 2 {
                    self.unsatisfied += 1;
                }
                *c -= 1;
            }
        }
    }

    // Try each candidate in turn; after a candidate's subtree is exhausted it is
    // excluded from the remaining siblings' subtrees.
    fn branch(&mut self, candidates: &[u32], uncovered: Bits256) {
        let mut excluded = Vec::new();
        for &r in candidates {
            if self.done() {
                break;
            }
            self.push(r);
            self.dfs(uncovered.and_not(&self.inst.rect_cells[r as usize]));
            self.pop();
            self.forbidden[r as usize] = true;
            excluded.push(r);
        }
        for r in excluded {
            self.forbidden[r as usize] = false;
        }
    }

    fn dfs(&mut self, uncovered: Bits256) {
        let depth = self.chosen.len();
        if uncovered.is_empty() {
            if self.unsatisfied == 0 {
                if depth < self.best {
                    self.best = depth;
                    self.best_cover = Some(self.chosen.clone());
                }
                return;
            }
            if depth + 1 >= self.best {
                return;
            }
            let Some(candidates) = self.pair_candidates() else { return };
            self.branch(&candidates, uncovered);
            return;
        }
        if depth + self.inst.lower_bound(uncovered) >= self.best {
            return;
        }
        let Some(cell) = self.branch_cell(uncovered) else { return };
        let mut candidates: Vec<(usize, u32)> = self.inst.cell_rects[cell]
            .iter()
            .filter(|&&r| !self.forbidden[r as usize])
            .map(|&r| (self.inst.rect_cells[r as usize].and(&uncovered).len(), r))
            .collect();
        candidates.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let candidates: Vec<u32> = candidates.into_iter().map(|(_, r)| r).collect();
        self.branch(&candidates, uncovered);
    }

    // Uncovered cell with the fewest available rectangles; `None` if one has none left.
    fn branch_cell(&self, uncovered: Bits256) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for c in uncovered.iter() {
            let avail = self.inst.cell_rects[c].iter().filter(|&&r| !self.forbidden[r as usize]).count();
            if avail == 0 {
                return None;
            }
            if best.is_none_or(|(b, _)| avail < b) {
                best = Some((avail, c));
            }
        }
        best.map(|(_, c)| c)
    }

    // Available rectangles touching the most constrained violated pair.
    fn pair_candidates(&self) -> Option<Vec<u32>> {
        let mut best: Option<Vec<u32>> = None;
        for (p, &count) in self.pair_count.iter().enumerate() {
            if count >= 2 {
                continue;
            }
            let avail: Vec<u32> = self.inst.pair_rects[p]
                .iter()
                .copied()
                .filter(|&r| !self.forbidden[r as usize])
                .collect();
            if avail.is_empty() {
                return None;
            }
            if best.as_ref().is_none_or(|b| avail.len() < b.len()) {
                best = Some(avail);
            }
        }
        best
    }
}
