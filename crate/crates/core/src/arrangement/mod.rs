//! Line arrangements as incidence graphs.
//!
//! An [`Arrangement`] keeps only pairwise incidence: `adj[i][j] = 1` when the
//! lines `L_i` and `L_j` meet. Three concurrent lines are recorded exactly like
//! a triangle, since concurrent lines on a smooth quartic are coplanar.
//!
//! Adjacency is stored as one `u64` bit row per line, which caps arrangements
//! at [`MAX_LINES`] lines (the short graph6 form).

mod canon;
mod components;
mod graph6;

pub use canon::{canonical_form, canonical_graph, canonical_labeling, is_isomorphic, CanonicalForm};
pub use components::{components, ComponentDecomposition, ComponentShape};
pub use graph6::{decode_graph6, encode_graph6};

use serde::Serialize;
use thiserror::Error;

/// Largest number of lines representable (short graph6 header).
pub const MAX_LINES: usize = 62;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArrangementError {
    #[error("matrix is not square: row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("asymmetric matrix at ({i}, {j}): {a_ij} != {a_ji}")]
    AsymmetricMatrix { i: usize, j: usize, a_ij: i64, a_ji: i64 },
    #[error("entry ({i}, {j}) = {value} is not 0 or 1")]
    NonBinaryEntry { i: usize, j: usize, value: i64 },
    #[error("nonzero diagonal entry at ({i}, {i})")]
    NonzeroDiagonal { i: usize },
    #[error("{n} lines exceeds the supported maximum of {MAX_LINES}")]
    TooManyLines { n: usize },
    #[error("edge ({i}, {j}) is out of range or a loop for {n} lines")]
    BadEdge { i: usize, j: usize, n: usize },
    #[error("malformed graph6: {0}")]
    MalformedGraph6(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arrangement {
    n: usize,
    rows: Vec<u64>,
}

#[inline]
pub(crate) fn bit(i: usize) -> u64 {
    1u64 << i
}

/// Iterate the set bits of a mask in increasing order.
pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

impl Arrangement {
    /// Validate a raw integer matrix. Checks are reported in row-major order,
    /// so the first offending entry is the one named in the error.
    pub fn validate(raw: &[Vec<i64>]) -> Result<Self, ArrangementError> {
        let n = raw.len();
        if n > MAX_LINES {
            return Err(ArrangementError::TooManyLines { n });
        }
        for (row, r) in raw.iter().enumerate() {
            if r.len() != n {
                return Err(ArrangementError::NotSquare { row, len: r.len(), n });
            }
        }
        let mut rows = vec![0u64; n];
        for i in 0..n {
            for j in 0..n {
                let value = raw[i][j];
                if i == j {
                    if value != 0 {
                        return Err(ArrangementError::NonzeroDiagonal { i });
                    }
                    continue;
                }
                if value != raw[j][i] {
                    return Err(ArrangementError::AsymmetricMatrix {
                        i,
                        j,
                        a_ij: value,
                        a_ji: raw[j][i],
                    });
                }
                match value {
                    0 => {}
                    1 => rows[i] |= bit(j),
                    _ => return Err(ArrangementError::NonBinaryEntry { i, j, value }),
                }
            }
        }
        Ok(Arrangement { n, rows })
    }

    /// `n` skew lines.
    pub fn empty(n: usize) -> Result<Self, ArrangementError> {
        if n > MAX_LINES {
            return Err(ArrangementError::TooManyLines { n });
        }
        Ok(Arrangement { n, rows: vec![0; n] })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, ArrangementError> {
        let mut a = Self::empty(n)?;
        for &(i, j) in edges {
            if i >= n || j >= n || i == j {
                return Err(ArrangementError::BadEdge { i, j, n });
            }
            a.rows[i] |= bit(j);
            a.rows[j] |= bit(i);
        }
        Ok(a)
    }

    /// Build from bit rows. Caller guarantees symmetry and an empty diagonal.
    pub(crate) fn from_rows_unchecked(n: usize, rows: Vec<u64>) -> Self {
        debug_assert_eq!(rows.len(), n);
        debug_assert!((0..n).all(|i| rows[i] & bit(i) == 0));
        debug_assert!((0..n).all(|i| bits(rows[i]).all(|j| rows[j] & bit(i) != 0)));
        Arrangement { n, rows }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// Bitmask of the lines meeting `L_i`.
    pub fn neighbors(&self, i: usize) -> u64 {
        self.rows[i]
    }

    pub fn meets(&self, i: usize, j: usize) -> bool {
        self.rows[i] & bit(j) != 0
    }

    pub fn degree(&self, i: usize) -> usize {
        self.rows[i].count_ones() as usize
    }

    /// Number of intersecting pairs.
    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for i in 0..self.n {
            for j in bits(self.rows[i] >> (i + 1)) {
                out.push((i, i + 1 + j));
            }
        }
        out
    }

    /// Mask with one bit per line.
    pub fn all_mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            bit(self.n) - 1
        }
    }

    pub fn matrix(&self) -> Vec<Vec<u8>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.meets(i, j) as u8).collect())
            .collect()
    }

    /// The sub-arrangement on the given lines, renumbered in the given order.
    pub fn induced(&self, lines: &[usize]) -> Arrangement {
        let m = lines.len();
        let mut rows = vec![0u64; m];
        for (a, &i) in lines.iter().enumerate() {
            for (b, &j) in lines.iter().enumerate() {
                if a != b && self.meets(i, j) {
                    rows[a] |= bit(b);
                }
            }
        }
        Arrangement { n: m, rows }
    }

    pub fn induced_mask(&self, mask: u64) -> Arrangement {
        let lines: Vec<usize> = bits(mask).collect();
        self.induced(&lines)
    }

    /// Relabel so that line `i` becomes line `perm[i]`.
    ///
    /// Panics if `perm` is not a permutation of `0..n`.
    pub fn relabel(&self, perm: &[usize]) -> Arrangement {
        assert_eq!(perm.len(), self.n, "permutation length mismatch");
        let mut seen = 0u64;
        for &p in perm {
            assert!(p < self.n && seen & bit(p) == 0, "not a permutation");
            seen |= bit(p);
        }
        let mut rows = vec![0u64; self.n];
        for i in 0..self.n {
            for j in bits(self.rows[i]) {
                rows[perm[i]] |= bit(perm[j]);
            }
        }
        Arrangement { n: self.n, rows }
    }

    /// Disjoint union, with `other`'s lines numbered after `self`'s.
    pub fn disjoint_union(&self, other: &Arrangement) -> Result<Arrangement, ArrangementError> {
        let n = self.n + other.n;
        if n > MAX_LINES {
            return Err(ArrangementError::TooManyLines { n });
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().map(|r| r << self.n));
        Ok(Arrangement { n, rows })
    }

    /// Size of a largest clique (largest set of pairwise meeting lines).
    pub fn clique_number(&self) -> usize {
        fn expand(rows: &[u64], size: usize, mut cand: u64, best: &mut usize) {
            if cand == 0 {
                *best = (*best).max(size);
                return;
            }
            while cand != 0 {
                if size + cand.count_ones() as usize <= *best {
                    return;
                }
                let v = cand.trailing_zeros() as usize;
                cand &= !bit(v);
                expand(rows, size + 1, cand & rows[v], best);
            }
        }
        let mut best = 0;
        expand(&self.rows, 0, self.all_mask(), &mut best);
        best
    }

    /// Whether any clique of `size` lines exists.
    pub fn has_clique_of_size(&self, size: usize) -> bool {
        fn find(rows: &[u64], need: usize, mut cand: u64) -> bool {
            if need == 0 {
                return true;
            }
            while cand.count_ones() as usize >= need {
                let v = cand.trailing_zeros() as usize;
                cand &= !bit(v);
                if find(rows, need - 1, cand & rows[v]) {
                    return true;
                }
            }
            false
        }
        find(&self.rows, size, self.all_mask())
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        DegreeProfile::of(self)
    }
}

/// Meet counts of an arrangement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeProfile {
    /// `k_i`, the number of arrangement lines meeting `L_i`.
    pub degrees: Vec<usize>,
    /// Number of intersecting pairs, half the degree sum.
    pub k: usize,
    /// `type_vector[l]` is the number of `l`-lines. Has length `n`
    /// (a line meets at most `n - 1` others), or 1 for the empty arrangement.
    pub type_vector: Vec<usize>,
}

impl DegreeProfile {
    pub fn of(a: &Arrangement) -> Self {
        let degrees: Vec<usize> = (0..a.n()).map(|i| a.degree(i)).collect();
        let sum: usize = degrees.iter().sum();
        debug_assert_eq!(sum % 2, 0);
        let mut type_vector = vec![0usize; a.n().max(1)];
        for &d in &degrees {
            type_vector[d] += 1;
        }
        DegreeProfile { degrees, k: sum / 2, type_vector }
    }

    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    /// `n_l`, the number of `l`-lines.
    pub fn count(&self, l: usize) -> usize {
        self.type_vector.get(l).copied().unwrap_or(0)
    }

    pub fn all_even(&self) -> bool {
        self.degrees.iter().all(|d| d % 2 == 0)
    }
}

pub fn degree_profile(a: &Arrangement) -> DegreeProfile {
    DegreeProfile::of(a)
}

/// Common small arrangements used throughout tests and the catalog.
pub mod shapes {
    use super::Arrangement;

    pub fn cycle(len: usize) -> Arrangement {
        let edges: Vec<(usize, usize)> = (0..len).map(|i| (i, (i + 1) % len)).collect();
        Arrangement::from_edges(len, &edges).expect("cycle fits")
    }

    pub fn path(len: usize) -> Arrangement {
        let edges: Vec<(usize, usize)> = (1..len).map(|i| (i - 1, i)).collect();
        Arrangement::from_edges(len, &edges).expect("path fits")
    }

    pub fn complete(n: usize) -> Arrangement {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        Arrangement::from_edges(n, &edges).expect("clique fits")
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Arrangement {
        let mut edges = Vec::new();
        for i in 0..a {
            for j in 0..b {
                edges.push((i, a + j));
            }
        }
        Arrangement::from_edges(a + b, &edges).expect("bipartite fits")
    }

    /// Disjoint union of all parts, in order.
    pub fn union(parts: &[Arrangement]) -> Arrangement {
        parts
            .iter()
            .try_fold(Arrangement::empty(0).unwrap(), |acc, p| acc.disjoint_union(p))
            .expect("union fits")
    }

    pub fn isolated(n: usize) -> Arrangement {
        Arrangement::empty(n).expect("empty fits")
    }
}

#[cfg(test)]
mod tests {
    use super::shapes::*;
    use super::*;

    #[test]
    fn validates_two_triangles() {
        let a = union(&[cycle(3), cycle(3)]);
        let raw: Vec<Vec<i64>> = a
            .matrix()
            .into_iter()
            .map(|r| r.into_iter().map(i64::from).collect())
            .collect();
        let v = Arrangement::validate(&raw).unwrap();
        assert_eq!(v.n(), 6);
        assert_eq!(v, a);
    }

    #[test]
    fn validates_eight_skew_lines() {
        let raw = vec![vec![0i64; 8]; 8];
        let a = Arrangement::validate(&raw).unwrap();
        assert_eq!(a.n(), 8);
        assert_eq!(a.edge_count(), 0);
    }

    #[test]
    fn rejects_asymmetric() {
        let mut raw = vec![vec![0i64; 4]; 4];
        raw[1][2] = 1;
        assert_eq!(
            Arrangement::validate(&raw),
            Err(ArrangementError::AsymmetricMatrix { i: 1, j: 2, a_ij: 1, a_ji: 0 })
        );
    }

    #[test]
    fn rejects_non_binary_and_diagonal() {
        let mut raw = vec![vec![0i64; 3]; 3];
        raw[0][2] = 2;
        raw[2][0] = 2;
        assert_eq!(
            Arrangement::validate(&raw),
            Err(ArrangementError::NonBinaryEntry { i: 0, j: 2, value: 2 })
        );
        let mut raw = vec![vec![0i64; 3]; 3];
        raw[1][1] = 1;
        assert_eq!(Arrangement::validate(&raw), Err(ArrangementError::NonzeroDiagonal { i: 1 }));
        let raw = vec![vec![0i64; 3], vec![0i64; 2], vec![0i64; 3]];
        assert!(matches!(Arrangement::validate(&raw), Err(ArrangementError::NotSquare { row: 1, .. })));
    }

    #[test]
    fn degree_profiles() {
        let k44 = complete_bipartite(4, 4);
        let p = k44.degree_profile();
        assert!(p.degrees.iter().all(|&d| d == 4));
        assert_eq!(p.k, 16);

        let c5c5 = union(&[cycle(5), cycle(5)]);
        let p = c5c5.degree_profile();
        assert!(p.degrees.iter().all(|&d| d == 2));
        assert_eq!(p.k, 10);

        let p = isolated(8).degree_profile();
        assert_eq!(p.k, 0);
        assert_eq!(p.count(0), 8);
        assert_eq!(p.type_vector.iter().sum::<usize>(), 8);
    }

    #[test]
    fn cliques() {
        assert_eq!(complete(5).clique_number(), 5);
        assert_eq!(complete_bipartite(4, 4).clique_number(), 2);
        assert_eq!(isolated(3).clique_number(), 1);
        assert_eq!(isolated(0).clique_number(), 0);
        assert!(complete(4).has_clique_of_size(4));
        assert!(!complete(4).has_clique_of_size(5));
    }

    #[test]
    fn induced_and_relabel() {
        let c6 = cycle(6);
        let sub = c6.induced(&[0, 1, 2]);
        assert_eq!(sub, path(3));
        let r = c6.relabel(&[1, 2, 3, 4, 5, 0]);
        assert_eq!(r, c6);
        assert_eq!(c6.edges().len(), 6);
    }
}
