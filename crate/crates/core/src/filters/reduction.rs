//! Reduction by a pair of disjoint fibres.
//!
//! A chordless cycle of lines is an `I_m` configuration: its class `E` has
//! `E² = 0` and is nef, so it is a fibre of an elliptic fibration. Two such
//! cycles `E_1, E_2` with no line of one meeting a line of the other satisfy
//! `E_1·E_2 = 0`, hence `E_1 ∼ E_2` and `E_1 + E_2 = 2E_1`. Subtracting them
//! from an even `Λ` leaves an even divisor, so the remaining lines are an even
//! set themselves (or nothing).

use std::collections::BTreeSet;

use super::{label_set, passes, run_pipeline, Rule, Verdict};
use crate::arrangement::{bit, bits, Arrangement};

/// Vertex masks of all induced cycles of length at least 3, sorted.
pub fn induced_cycles(a: &Arrangement) -> Vec<u64> {
    let mut found = BTreeSet::new();
    for s in 0..a.n() {
        let above = a.all_mask() & !((bit(s) << 1) - 1);
        for v1 in bits(a.neighbors(s) & above) {
            extend(a, s, v1, v1, bit(s) | bit(v1), above, &mut found);
        }
    }
    found.into_iter().collect()
}

/// Extend the induced path `s, v1, ..., last`, keeping only vertices above `s`.
fn extend(a: &Arrangement, s: usize, v1: usize, last: usize, path: u64, above: u64, found: &mut BTreeSet<u64>) {
    let others = path & !bit(s) & !bit(last);
    for w in bits(a.neighbors(last) & above & !path) {
        if a.neighbors(w) & others != 0 {
            continue;
        }
        if a.meets(s, w) {
            // each cycle is seen from both directions; keep one
            if v1 < w {
                found.insert(path | bit(w));
            }
            continue;
        }
        extend(a, s, v1, w, path | bit(w), above, found);
    }
}

/// Pairs of induced cycles of equal length, vertex-disjoint, with no line of
/// one meeting a line of the other.
pub fn even_cycle_pairs(a: &Arrangement) -> Vec<(u64, u64)> {
    let cycles = induced_cycles(a);
    let mut out = Vec::new();
    for (x, &c1) in cycles.iter().enumerate() {
        let reach1 = bits(c1).fold(c1, |m, v| m | a.neighbors(v));
        for &c2 in &cycles[x + 1..] {
            if c1.count_ones() == c2.count_ones() && reach1 & c2 == 0 {
                out.push((c1, c2));
            }
        }
    }
    out
}

/// Every pair from [`even_cycle_pairs`] must leave an admissible remainder.
pub fn complement_reduction(a: &Arrangement) -> Verdict {
    let rule = Rule::ComplementReduction;
    let pairs = even_cycle_pairs(a);
    if pairs.is_empty() {
        return Verdict::inapplicable(rule, "no pair of disjoint equal cycles");
    }
    for &(c1, c2) in &pairs {
        let rest = a.all_mask() & !(c1 | c2);
        if rest == 0 {
            continue;
        }
        let sub = a.induced_mask(rest);
        if !passes(&sub) {
            let report = run_pipeline(&sub);
            let why = report
                .first_failure()
                .map(|v| format!("{}: {}", v.rule.id(), v.detail))
                .unwrap_or_default();
            return Verdict::fail(
                rule,
                format!(
                    "removing cycles {} and {} leaves {} lines that are not even ({why})",
                    label_set(c1),
                    label_set(c2),
                    rest.count_ones()
                ),
            );
        }
    }
    Verdict::pass(rule, format!("{} cycle pair(s), every remainder admissible", pairs.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::shapes::*;
    use crate::filters::Status;

    fn naive_induced_cycles(a: &Arrangement) -> Vec<u64> {
        let mut out = Vec::new();
        for mask in 1u64..(1 << a.n()) {
            if mask.count_ones() < 3 {
                continue;
            }
            let sub = a.induced_mask(mask);
            let conn = crate::arrangement::components(&sub).len() == 1;
            if conn && (0..sub.n()).all(|v| sub.degree(v) == 2) {
                out.push(mask);
            }
        }
        out
    }

    #[test]
    fn cycles_of_small_graphs() {
        assert_eq!(induced_cycles(&cycle(5)), vec![0b11111]);
        assert_eq!(induced_cycles(&complete(4)).len(), 4);
        assert_eq!(induced_cycles(&complete_bipartite(3, 3)).len(), 9);
        assert!(induced_cycles(&path(6)).is_empty());
        for a in [complete_bipartite(4, 4), union(&[cycle(3), cycle(4), complete(4)]), cycle(8)] {
            assert_eq!(induced_cycles(&a), naive_induced_cycles(&a));
        }
    }

    #[test]
    fn pairs() {
        let a = union(&[cycle(3), cycle(3), isolated(2)]);
        assert_eq!(even_cycle_pairs(&a), vec![(0b111, 0b111000)]);
        assert!(even_cycle_pairs(&complete_bipartite(4, 4)).is_empty());
    }

    #[test]
    fn remainder_must_be_even() {
        let v = complement_reduction(&union(&[cycle(3), cycle(3), isolated(2)]));
        assert_eq!(v.status, Status::Fail);
        assert_eq!(complement_reduction(&union(&[cycle(3), cycle(3)])).status, Status::Pass);
        assert_eq!(complement_reduction(&isolated(8)).status, Status::Inapplicable);
    }
}
