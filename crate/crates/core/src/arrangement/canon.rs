//! Canonical labeling by partition refinement and individualization.
//!
//! The search tree is the usual one: refine the ordered partition to an
//! equitable one, pick the first smallest non-singleton cell, individualize
//! each of its vertices in turn and recurse. Every leaf is a discrete
//! partition, hence a relabeling; the canonical graph is the lexicographically
//! largest relabeled adjacency among all leaves.
//!
//! Two kinds of pruning keep symmetric graphs cheap. Twins (vertices with the
//! same neighbourhood apart from each other) are interchangeable, so only one
//! twin per target cell is explored. Automorphisms found when two leaves
//! produce the same graph are recorded, and a vertex is skipped when it lies
//! in the orbit of an explored sibling under the recorded automorphisms that
//! fix the current individualization sequence pointwise.

use serde::{Deserialize, Serialize};
use std::fmt;

use super::{bit, bits, encode_graph6, Arrangement};

/// Isomorphism-invariant string: the graph6 encoding of the canonical
/// relabeling. Equal strings iff isomorphic arrangements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalForm(String);

impl CanonicalForm {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn as_bytes(&self) -> &[u8] {
        self.0.as_bytes()
    }

    pub fn into_string(self) -> String {
        self.0
    }

    /// Wrap a string already known to be canonical (e.g. read back from a
    /// survivor file written by this crate).
    pub fn from_trusted(s: impl Into<String>) -> Self {
        CanonicalForm(s.into())
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn canonical_form(a: &Arrangement) -> CanonicalForm {
    CanonicalForm(encode_graph6(&canonical_graph(a)))
}

pub fn is_isomorphic(a: &Arrangement, b: &Arrangement) -> bool {
    if a.n() != b.n() || a.edge_count() != b.edge_count() {
        return false;
    }
    let mut da: Vec<usize> = (0..a.n()).map(|i| a.degree(i)).collect();
    let mut db: Vec<usize> = (0..b.n()).map(|i| b.degree(i)).collect();
    da.sort_unstable();
    db.sort_unstable();
    da == db && canonical_form(a) == canonical_form(b)
}

/// The relabeling `perm` (line `i` becomes line `perm[i]`) producing the
/// canonical graph.
pub fn canonical_labeling(a: &Arrangement) -> Vec<usize> {
    let mut s = Search::new(a);
    s.run();
    s.best.map(|(_, lab)| lab).unwrap_or_default()
}

/// The canonical relabeling of `a`; isomorphic inputs give identical output.
pub fn canonical_graph(a: &Arrangement) -> Arrangement {
    if a.n() <= 1 {
        return a.clone();
    }
    let mut s = Search::new(a);
    s.run();
    let (rows, _) = s.best.expect("search visits at least one leaf");
    Arrangement::from_rows_unchecked(a.n(), rows)
}

struct Search<'a> {
    rows: &'a [u64],
    n: usize,
    best: Option<(Vec<u64>, Vec<usize>)>,
    automorphisms: Vec<Vec<u8>>,
}

impl<'a> Search<'a> {
    fn new(a: &'a Arrangement) -> Self {
        Search { rows: a.rows(), n: a.n(), best: None, automorphisms: Vec::new() }
    }

    fn run(&mut self) {
        if self.n == 0 {
            self.best = Some((Vec::new(), Vec::new()));
            return;
        }
        let all = if self.n == 64 { u64::MAX } else { bit(self.n) - 1 };
        let mut cells = vec![all];
        refine(self.rows, &mut cells);
        let mut prefix = Vec::with_capacity(self.n);
        self.descend(cells, &mut prefix);
    }

    fn descend(&mut self, cells: Vec<u64>, prefix: &mut Vec<usize>) {
        let target = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.count_ones() > 1)
            .min_by_key(|(i, c)| (c.count_ones(), *i))
            .map(|(i, _)| i);
        let Some(t) = target else {
            self.leaf(&cells);
            return;
        };
        let cell = cells[t];
        let mut tried: Vec<usize> = Vec::new();
        for v in bits(cell) {
            if tried.iter().any(|&u| self.twins(u, v)) {
                continue;
            }
            if !tried.is_empty() && self.same_orbit(prefix, &tried, v) {
                continue;
            }
            tried.push(v);
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..t]);
            child.push(bit(v));
            child.push(cell & !bit(v));
            child.extend_from_slice(&cells[t + 1..]);
            refine(self.rows, &mut child);
            prefix.push(v);
            self.descend(child, prefix);
            prefix.pop();
        }
    }

    fn twins(&self, u: usize, v: usize) -> bool {
        self.rows[u] & !bit(v) == self.rows[v] & !bit(u)
    }

    /// Whether `v` shares an orbit with a vertex in `tried` under the
    /// recorded automorphisms fixing `prefix` pointwise.
    fn same_orbit(&self, prefix: &[usize], tried: &[usize], v: usize) -> bool {
        let gens: Vec<&Vec<u8>> = self
            .automorphisms
            .iter()
            .filter(|g| prefix.iter().all(|&p| g[p] as usize == p))
            .collect();
        if gens.is_empty() {
            return false;
        }
        // Closure of {v} under the generators.
        let mut orbit = bit(v);
        let mut frontier = bit(v);
        while frontier != 0 {
            let mut next = 0u64;
            for x in bits(frontier) {
                for g in &gens {
                    let y = g[x] as usize;
                    if orbit & bit(y) == 0 {
                        orbit |= bit(y);
                        next |= bit(y);
                    }
                }
            }
            frontier = next;
        }
        tried.iter().any(|&u| orbit & bit(u) != 0)
    }

    fn leaf(&mut self, cells: &[u64]) {
        let mut label = vec![0usize; self.n];
        for (pos, c) in cells.iter().enumerate() {
            label[c.trailing_zeros() as usize] = pos;
        }
        let mut relabeled = vec![0u64; self.n];
        for (v, &lv) in label.iter().enumerate() {
            let mut r = 0u64;
            for u in bits(self.rows[v]) {
                r |= bit(label[u]);
            }
            relabeled[lv] = r;
        }
        match &self.best {
            None => self.best = Some((relabeled, label)),
            Some((best_rows, best_label)) => match relabeled.cmp(best_rows) {
                std::cmp::Ordering::Greater => self.best = Some((relabeled, label)),
                std::cmp::Ordering::Equal => {
                    let mut inv = vec![0usize; self.n];
                    for (v, &p) in best_label.iter().enumerate() {
                        inv[p] = v;
                    }
                    let g: Vec<u8> = label.iter().map(|&p| inv[p] as u8).collect();
                    if g.iter().enumerate().any(|(i, &x)| x as usize != i) {
                        self.automorphisms.push(g);
                    }
                }
                std::cmp::Ordering::Less => {}
            },
        }
    }
}

/// Refine an ordered partition (cells as bitmasks) to the coarsest equitable
/// partition finer than it. Fragments of a split cell are ordered by their
/// neighbour count into the splitter, so the result is label-independent.
pub(crate) fn refine(rows: &[u64], cells: &mut Vec<u64>) {
    let mut queue: Vec<u64> = cells.clone();
    let mut head = 0;
    let mut counts = [0u32; 64];
    while head < queue.len() {
        let splitter = queue[head];
        head += 1;
        let mut c = 0;
        while c < cells.len() {
            let cell = cells[c];
            if cell & (cell - 1) == 0 {
                c += 1;
                continue;
            }
            let mut lo = u32::MAX;
            let mut hi = 0;
            for v in bits(cell) {
                let k = (rows[v] & splitter).count_ones();
                counts[v] = k;
                lo = lo.min(k);
                hi = hi.max(k);
            }
            if lo == hi {
                c += 1;
                continue;
            }
            let mut frags: Vec<(u32, u64)> = Vec::new();
            for v in bits(cell) {
                match frags.iter_mut().find(|(k, _)| *k == counts[v]) {
                    Some((_, m)) => *m |= bit(v),
                    None => frags.push((counts[v], bit(v))),
                }
            }
            frags.sort_unstable_by_key(|&(k, _)| k);
            let pending = queue[head..].iter().position(|&q| q == cell);
            if let Some(p) = pending {
                queue.remove(head + p);
            }
            queue.extend(frags.iter().map(|&(_, m)| m));
            cells.splice(c..c + 1, frags.iter().map(|&(_, m)| m));
            c += frags.len();
        }
    }
}
