#![allow(dead_code)]

use even_lines::arrangement::Arrangement;
use rand::seq::SliceRandom;
use rand::Rng;

/// Arrangement on `n` lines with each pair meeting with probability `p`.
pub fn random_arrangement(rng: &mut impl Rng, n: usize, p: f64) -> Arrangement {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Arrangement::from_edges(n, &edges).unwrap()
}

pub fn random_permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// The labeled graph on `n` vertices whose edge set is given by the bits of
/// `mask` over pairs in lexicographic order.
pub fn graph_from_mask(n: usize, mask: u64) -> Arrangement {
    let mut edges = Vec::new();
    let mut bit = 0;
    for i in 0..n {
        for j in i + 1..n {
            if mask >> bit & 1 == 1 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    Arrangement::from_edges(n, &edges).unwrap()
}

/// Isomorphism classes of graphs on `n` vertices, for `n ≤ 8`.
pub const GRAPH_COUNTS: [usize; 9] = [1, 1, 2, 4, 11, 34, 156, 1044, 12346];
