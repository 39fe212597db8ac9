//! Type-vector counting per `(n, k)` stratum.
//!
//! For an arrangement with all `k_i` even and `k_i ≤ n - 2`, the type vector
//! `(n_0, n_2, n_4, ...)` satisfies `Σ n_l = n` and `Σ l·n_l = 2k`. Extra
//! constraints (a line type ruled out by an argument, say) shrink the
//! solution set, sometimes to nothing.

use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TypeConstraints {
    /// `n_l` pinned to a value.
    pub fixed: BTreeMap<usize, usize>,
    /// Upper bounds on `n_l`.
    pub at_most: BTreeMap<usize, usize>,
}

impl TypeConstraints {
    pub fn absent(ls: &[usize]) -> Self {
        TypeConstraints { fixed: ls.iter().map(|&l| (l, 0)).collect(), ..Default::default() }
    }

    pub fn with_at_most(mut self, l: usize, bound: usize) -> Self {
        self.at_most.insert(l, bound);
        self
    }
}

/// A linear equation `Σ coeffs[l]·n_l = rhs` over the unconstrained types.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedEquation {
    pub coeffs: BTreeMap<usize, i64>,
    pub rhs: i64,
}

impl ReducedEquation {
    /// Divide through by the gcd of the coefficients when it divides `rhs`.
    pub fn normalized(&self) -> ReducedEquation {
        let g = self.coeffs.values().fold(0i64, |g, &c| gcd(g, c.abs()));
        if g > 1 && self.rhs % g == 0 {
            ReducedEquation {
                coeffs: self.coeffs.iter().map(|(&l, &c)| (l, c / g)).collect(),
                rhs: self.rhs / g,
            }
        } else {
            self.clone()
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for ReducedEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(l, &c)| if c == 1 { format!("n{l}") } else { format!("{c}n{l}") })
            .collect();
        write!(f, "{} = {}", if terms.is_empty() { "0".into() } else { terms.join("+") }, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeSolutions {
    pub n: usize,
    pub k: usize,
    /// Type vectors indexed by `l` (length `n.max(1)`), in descending
    /// lexicographic order; `case_of` labels them `a`, `b`, ...
    pub solutions: Vec<Vec<usize>>,
    /// The degree equation with the count equation (times the smallest free
    /// `l`) subtracted, over the remaining free types.
    pub reduced: ReducedEquation,
}

impl TypeSolutions {
    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn case_of(&self, type_vector: &[usize]) -> Option<char> {
        let width = self.n.max(1);
        let mut tv = type_vector.to_vec();
        tv.resize(width.max(tv.len()), 0);
        if tv[width..].iter().any(|&c| c > 0) {
            return None;
        }
        tv.truncate(width);
        self.solutions
            .iter()
            .position(|s| *s == tv)
            .map(|i| if i < 26 { (b'a' + i as u8) as char } else { '*' })
    }
}

/// All nonnegative type vectors over even `l ≤ n - 2` satisfying the two
/// counting equations and the constraints.
pub fn type_vector_solutions(n: usize, k: usize, constraints: &TypeConstraints) -> TypeSolutions {
    let width = n.max(1);
    let ls: Vec<usize> = (0..width).step_by(2).filter(|&l| l + 2 <= n.max(2)).collect();
    let fixed_count: usize = constraints.fixed.iter().filter(|(l, _)| ls.contains(l)).map(|(_, &c)| c).sum();
    let fixed_deg: usize = constraints.fixed.iter().filter(|(l, _)| ls.contains(l)).map(|(l, &c)| l * c).sum();
    let bad_fixed = constraints.fixed.iter().any(|(l, &c)| c > 0 && !ls.contains(l));
    let free: Vec<usize> = ls.iter().copied().filter(|l| !constraints.fixed.contains_key(l)).collect();

    let rem_count = n as i64 - fixed_count as i64;
    let rem_deg = 2 * k as i64 - fixed_deg as i64;
    let reduced = match free.first() {
        Some(&l0) => ReducedEquation {
            coeffs: free[1..].iter().map(|&l| (l, (l - l0) as i64)).collect(),
            rhs: rem_deg - l0 as i64 * rem_count,
        },
        None => ReducedEquation { coeffs: BTreeMap::new(), rhs: rem_deg },
    };

    let mut solutions = Vec::new();
    if !bad_fixed && rem_count >= 0 && rem_deg >= 0 {
        let mut current = vec![0usize; width];
        for (&l, &c) in &constraints.fixed {
            if l < width {
                current[l] = c;
            }
        }
        fill(&free, 0, rem_count as usize, rem_deg as usize, constraints, &mut current, &mut solutions);
    }
    solutions.sort_unstable_by(|a, b| b.cmp(a));
    TypeSolutions { n, k, solutions, reduced }
}

fn fill(
    free: &[usize],
    idx: usize,
    count: usize,
    deg: usize,
    constraints: &TypeConstraints,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if idx == free.len() {
        if count == 0 && deg == 0 {
            out.push(current.clone());
        }
        return;
    }
    let l = free[idx];
    let mut max = count;
    if l > 0 {
        max = max.min(deg / l);
    }
    if let Some(&b) = constraints.at_most.get(&l) {
        max = max.min(b);
    }
    for c in 0..=max {
        current[l] = c;
        fill(free, idx + 1, count - c, deg - l * c, constraints, current, out);
    }
    current[l] = 0;
}
