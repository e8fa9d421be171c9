use super::{Bits256, SupportPattern};

/// Maximum fooling set via a coloring-bounded maximum-clique search on the
/// compatibility graph of support cells.
pub(crate) fn max_fooling_set(p: &SupportPattern) -> Vec<(usize, usize)> {
    let cells: Vec<(usize, usize)> = p.cells().collect();
    let n = cells.len();
    if n == 0 {
        return Vec::new();
    }
    let compatible = |a: (usize, usize), b: (usize, usize)| !p.get(a.0, b.1) || !p.get(b.0, a.1);
    let degree: Vec<usize> = (0..n)
        .map(|a| (0..n).filter(|&b| b != a && compatible(cells[a], cells[b])).count())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&a| (degree[a], a));

    let mut adj = vec![Bits256::new(); n];
    for (x, &a) in order.iter().enumerate() {
        for (y, &b) in order.iter().enumerate() {
            if x != y && compatible(cells[a], cells[b]) {
                adj[x].insert(y);
            }
        }
    }
    let mut all = Bits256::new();
    (0..n).for_each(|x| all.insert(x));

    let mut search = Clique { adj: &adj, current: Vec::new(), best: Vec::new() };
    search.expand(all);
    let mut out: Vec<(usize, usize)> = search.best.iter().map(|&x| cells[order[x]]).collect();
    out.sort();
    out
}

struct Clique<'a> {
    adj: &'a [Bits256],
    current: Vec<usize>,
    best: Vec<usize>,
}

impl Clique<'_> {
    fn expand(&mut self, mut cand: Bits256) {
        let mut order = Vec::with_capacity(cand.len());
        let mut colors = Vec::with_capacity(cand.len());
        let mut uncolored = cand;
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            let mut q = uncolored;
            while let Some(v) = q.first() {
                q.remove(v);
                q = q.and_not(&self.adj[v]);
                uncolored.remove(v);
                order.push(v);
                colors.push(color);
            }
        }
        for idx in (0..order.len()).rev() {
            if self.current.len() + colors[idx] <= self.best.len() {
                return;
            }
            let v = order[idx];
            self.current.push(v);
            let next = cand.and(&self.adj[v]);
            if next.is_empty() {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(next);
            }
            self.current.pop();
            cand.remove(v);
        }
    }
}
