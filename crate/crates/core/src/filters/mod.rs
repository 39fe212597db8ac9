//! Admissibility pipeline for even sets of lines.
//!
//! Every rule is a necessary condition: an arrangement that fails any of them
//! cannot be an even divisor on a smooth quartic. Passing all of them proves
//! nothing positive.
//!
//! Rule order in [`run_pipeline`]:
//!
//! | rule                   | condition                                              |
//! |------------------------|--------------------------------------------------------|
//! | `planes`               | clique number ≤ 4, plus the plane closure              |
//! | `parity`               | `n` even                                               |
//! | `even-degrees`         | every `k_i` even                                       |
//! | `k-bound`              | `k ≤ n(n-2)/2`                                         |
//! | `mod4`                 | `4 | k - n`                                            |
//! | `type-count`           | type vector solves the stratum's counting equations    |
//! | `pi1`                  | edgeless even sets have 8 or 16 lines                  |
//! | `pi2-pi3`              | a single cycle is not even; two cycles are equal       |
//! | `complement-reduction` | removing an even pair of cycles leaves an even set     |
//! | `deduce`               | split-off deductions on `𝓛`                            |
//!
//! The plane closure: if `L_i` and `L_j` meet
//! they span a plane `P`, and any line meeting both either passes through
//! their common point (and is then coplanar with them) or meets `P` in two
//! points. Either way it lies in `P`, so all common neighbours of an edge are
//! coplanar with it and meet each other.

mod counting;
mod deduce;
mod reduction;

pub use counting::{type_vector_solutions, TypeConstraints, TypeSolutions};
pub use deduce::{deduce, deduce_through, forcing_cost, DeductionRule, DeductionStep, DeductionTrace, Outcome, DEGREE_BOUNDS};
pub use reduction::{complement_reduction, even_cycle_pairs, induced_cycles};

use serde::Serialize;

use crate::arrangement::{bit, bits, components, encode_graph6, Arrangement, ComponentShape};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Planes,
    Parity,
    EvenDegrees,
    KBound,
    Mod4,
    TypeCount,
    Pi1,
    Pi2Pi3,
    ComplementReduction,
    Deduce,
}

impl Rule {
    pub const PIPELINE: [Rule; 10] = [
        Rule::Planes,
        Rule::Parity,
        Rule::EvenDegrees,
        Rule::KBound,
        Rule::Mod4,
        Rule::TypeCount,
        Rule::Pi1,
        Rule::Pi2Pi3,
        Rule::ComplementReduction,
        Rule::Deduce,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Rule::Planes => "planes",
            Rule::Parity => "parity",
            Rule::EvenDegrees => "even-degrees",
            Rule::KBound => "k-bound",
            Rule::Mod4 => "mod4",
            Rule::TypeCount => "type-count",
            Rule::Pi1 => "pi1",
            Rule::Pi2Pi3 => "pi2-pi3",
            Rule::ComplementReduction => "complement-reduction",
            Rule::Deduce => "deduce",
        }
    }

    pub fn cite(self) -> &'static str {
        match self {
            Rule::Planes => "no five coplanar lines; meeting lines span a plane holding every line meeting both",
            Rule::Parity => "an even set has an even number of lines",
            Rule::EvenDegrees => "Λ·L_i = k_i - 2 is even",
            Rule::KBound => "k_i ≤ n - 2",
            Rule::Mod4 => "Λ² = 2(k - n) is divisible by 8",
            Rule::TypeCount => "Σ n_l = n and Σ l·n_l = 2k",
            Rule::Pi1 => "even sets of disjoint smooth rational curves on a K3 surface have 8 or 16 members",
            Rule::Pi2Pi3 => "an elliptic fibre is not even; disjoint fibres have equal degree",
            Rule::ComplementReduction => "removing a pair of disjoint fibres of one elliptic pencil leaves an even set",
            Rule::Deduce => "Riemann–Roch: 𝓛 effective when k > n - 8; split-off rules",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inapplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub rule: Rule,
    pub status: Status,
    pub detail: String,
    pub cite: &'static str,
}

impl Verdict {
    fn new(rule: Rule, status: Status, detail: impl Into<String>) -> Self {
        Verdict { rule, status, detail: detail.into(), cite: rule.cite() }
    }

    fn pass(rule: Rule, detail: impl Into<String>) -> Self {
        Self::new(rule, Status::Pass, detail)
    }

    fn fail(rule: Rule, detail: impl Into<String>) -> Self {
        Self::new(rule, Status::Fail, detail)
    }

    fn inapplicable(rule: Rule, detail: impl Into<String>) -> Self {
        Self::new(rule, Status::Inapplicable, detail)
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FilterReport {
    pub graph6: String,
    pub verdicts: Vec<Verdict>,
    pub overall: bool,
}

impl FilterReport {
    pub fn verdict(&self, rule: Rule) -> &Verdict {
        self.verdicts.iter().find(|v| v.rule == rule).expect("every rule is reported")
    }

    pub fn failed_rules(&self) -> Vec<Rule> {
        self.verdicts.iter().filter(|v| !v.passed()).map(|v| v.rule).collect()
    }

    pub fn first_failure(&self) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| !v.passed())
    }
}

pub(crate) fn label(i: usize) -> String {
    format!("L{}", i + 1)
}

pub(crate) fn label_set(mask: u64) -> String {
    let names: Vec<String> = bits(mask).map(label).collect();
    format!("{{{}}}", names.join(","))
}

/// Clique number at most 4, and the plane closure.
pub fn check_planes(a: &Arrangement) -> Verdict {
    let rule = Rule::Planes;
    if let Some(clique) = find_clique(a, 5) {
        return Verdict::fail(rule, format!("five pairwise meeting lines {}", label_set(clique)));
    }
    for (i, j) in a.edges() {
        let common = a.neighbors(i) & a.neighbors(j);
        for x in bits(common) {
            let missing = common & !a.neighbors(x) & !bit(x);
            if missing != 0 {
                let y = missing.trailing_zeros() as usize;
                return Verdict::fail(
                    rule,
                    format!(
                        "{} and {} both meet the meeting pair {},{} but not each other",
                        label(x),
                        label(y),
                        label(i),
                        label(j)
                    ),
                );
            }
        }
    }
    Verdict::pass(rule, format!("clique number {}", a.clique_number()))
}

/// The plane closure alone, without a witness.
pub fn plane_closed(a: &Arrangement) -> bool {
    a.edges().into_iter().all(|(i, j)| {
        let common = a.neighbors(i) & a.neighbors(j);
        bits(common).all(|x| common & !a.neighbors(x) & !bit(x) == 0)
    })
}

fn find_clique(a: &Arrangement, size: usize) -> Option<u64> {
    fn go(a: &Arrangement, need: usize, chosen: u64, mut cand: u64) -> Option<u64> {
        if need == 0 {
            return Some(chosen);
        }
        while cand.count_ones() as usize >= need {
            let v = cand.trailing_zeros() as usize;
            cand &= !bit(v);
            if let Some(c) = go(a, need - 1, chosen | bit(v), cand & a.neighbors(v)) {
                return Some(c);
            }
        }
        None
    }
    go(a, size, 0, a.all_mask())
}

/// `n` even.
pub fn check_parity(a: &Arrangement) -> Verdict {
    if a.n() % 2 == 0 {
        Verdict::pass(Rule::Parity, format!("n = {}", a.n()))
    } else {
        Verdict::fail(Rule::Parity, format!("n = {} is odd", a.n()))
    }
}

/// Every `k_i` even.
pub fn check_degrees_even(a: &Arrangement) -> Verdict {
    let odd: Vec<String> = (0..a.n())
        .filter(|&i| a.degree(i) % 2 == 1)
        .map(|i| format!("{} meets {}", label(i), a.degree(i)))
        .collect();
    if odd.is_empty() {
        Verdict::pass(Rule::EvenDegrees, "all k_i even")
    } else {
        Verdict::fail(Rule::EvenDegrees, format!("odd meet counts: {}", odd.join(", ")))
    }
}

/// `k ≤ n(n-2)/2`, implied by parity and even degrees.
pub fn check_k_bound(a: &Arrangement) -> Verdict {
    let n = a.n();
    let k = a.edge_count();
    let bound = n * n.saturating_sub(2) / 2;
    if k <= bound {
        Verdict::pass(Rule::KBound, format!("k = {k} ≤ {bound}"))
    } else {
        Verdict::fail(Rule::KBound, format!("k = {k} > n(n-2)/2 = {bound}"))
    }
}

/// `4 | k - n`.
pub fn check_mod4(a: &Arrangement) -> Verdict {
    let n = a.n() as i64;
    let k = a.edge_count() as i64;
    if (k - n).rem_euclid(4) == 0 {
        Verdict::pass(Rule::Mod4, format!("k - n = {}", k - n))
    } else {
        Verdict::fail(Rule::Mod4, format!("k - n = {} is not divisible by 4", k - n))
    }
}

/// Counting equations on the type vector, with the stratum's case label.
pub fn check_type_count(a: &Arrangement) -> Verdict {
    let p = a.degree_profile();
    if !p.all_even() {
        return Verdict::inapplicable(Rule::TypeCount, "odd meet counts");
    }
    let sols = type_vector_solutions(p.n(), p.k, &TypeConstraints::default());
    match sols.case_of(&p.type_vector) {
        Some(case) => Verdict::pass(
            Rule::TypeCount,
            format!("type {} is case {case} of {} for (n, k) = ({}, {})", format_type(&p.type_vector), sols.len(), p.n(), p.k),
        ),
        None => Verdict::fail(
            Rule::TypeCount,
            format!("type {} solves no counting equation for (n, k) = ({}, {})", format_type(&p.type_vector), p.n(), p.k),
        ),
    }
}

pub(crate) fn format_type(tv: &[usize]) -> String {
    let parts: Vec<String> = tv
        .iter()
        .enumerate()
        .filter(|(l, &c)| c > 0 || *l == 0)
        .map(|(l, c)| format!("n{l}={c}"))
        .collect();
    format!("({})", parts.join(","))
}

/// Edgeless arrangements must have 8 or 16 lines.
pub fn check_pi1(a: &Arrangement) -> Verdict {
    if a.edge_count() > 0 {
        return Verdict::inapplicable(Rule::Pi1, "lines are not pairwise disjoint");
    }
    match a.n() {
        0 => Verdict::inapplicable(Rule::Pi1, "empty arrangement"),
        8 | 16 => Verdict::pass(Rule::Pi1, format!("{} disjoint lines", a.n())),
        n => Verdict::fail(Rule::Pi1, format!("{n} disjoint lines, not 8 or 16")),
    }
}

/// A single chordless cycle is never even; two chordless cycles must have
/// equal length.
pub fn check_pi2_pi3(a: &Arrangement) -> Verdict {
    let rule = Rule::Pi2Pi3;
    let dec = components(a);
    let shapes: Vec<ComponentShape> = dec.components.iter().map(|c| c.shape).collect();
    match shapes.as_slice() {
        [ComponentShape::ChordlessCycle(len)] => {
            Verdict::fail(rule, format!("the whole arrangement is one cycle of {len} lines, an elliptic fibre"))
        }
        [ComponentShape::ChordlessCycle(x), ComponentShape::ChordlessCycle(y)] if x != y => {
            Verdict::fail(rule, format!("two disjoint cycles of unequal lengths {x} and {y}"))
        }
        [ComponentShape::ChordlessCycle(x), ComponentShape::ChordlessCycle(_)] => {
            Verdict::pass(rule, format!("two disjoint cycles of length {x}"))
        }
        _ => Verdict::inapplicable(rule, "not one or two cycle components"),
    }
}

/// Run every rule on `a` and collect the verdicts; nothing short-circuits.
pub fn run_pipeline(a: &Arrangement) -> FilterReport {
    let verdicts = vec![
        check_planes(a),
        check_parity(a),
        check_degrees_even(a),
        check_k_bound(a),
        check_mod4(a),
        check_type_count(a),
        check_pi1(a),
        check_pi2_pi3(a),
        complement_reduction(a),
        deduce(a).verdict(),
    ];
    debug_assert!(verdicts.iter().map(|v| v.rule).eq(Rule::PIPELINE));
    let overall = verdicts.iter().all(Verdict::passed);
    FilterReport { graph6: encode_graph6(a), verdicts, overall }
}

/// Pipeline outcome only, stopping at the first failure. Same answer as
/// `run_pipeline(a).overall`.
pub fn passes(a: &Arrangement) -> bool {
    check_parity(a).passed()
        && check_degrees_even(a).passed()
        && check_mod4(a).passed()
        && check_k_bound(a).passed()
        && check_planes(a).passed()
        && check_type_count(a).passed()
        && check_pi1(a).passed()
        && check_pi2_pi3(a).passed()
        && deduce(a).outcome != Outcome::Contradiction
        && complement_reduction(a).passed()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::shapes::*;

    fn status(v: &Verdict) -> Status {
        v.status
    }

    #[test]
    fn planes() {
        assert_eq!(status(&check_planes(&complete_bipartite(4, 4))), Status::Pass);
        let k5 = union(&[complete(5), isolated(1)]);
        let v = check_planes(&k5);
        assert_eq!(v.status, Status::Fail);
        assert!(v.detail.contains("five"));
        // edge (0,1), common neighbours 2 and 3, which do not meet
        let a = Arrangement::from_edges(4, &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 3)]).unwrap();
        let v = check_planes(&a);
        assert_eq!(v.status, Status::Fail);
        assert!(v.detail.contains("L3") && v.detail.contains("L4"), "{}", v.detail);
        assert_eq!(status(&check_planes(&complete(4))), Status::Pass);
    }

    #[test]
    fn arithmetic_conditions() {
        let two = complete(2);
        assert_eq!(status(&check_mod4(&two)), Status::Fail);

        let lambda6 = union(&[cycle(3), cycle(3)]);
        for v in [check_parity(&lambda6), check_degrees_even(&lambda6), check_k_bound(&lambda6), check_mod4(&lambda6)] {
            assert_eq!(v.status, Status::Pass, "{v:?}");
        }

        let tri_iso = union(&[cycle(3), isolated(1)]);
        assert_eq!(status(&check_degrees_even(&tri_iso)), Status::Pass);
        assert_eq!(status(&check_mod4(&tri_iso)), Status::Fail);

        assert_eq!(status(&check_parity(&isolated(5))), Status::Fail);
        assert_eq!(status(&check_k_bound(&complete(4))), Status::Fail);
        assert_eq!(status(&check_degrees_even(&path(3))), Status::Fail);
    }

    #[test]
    fn pi1() {
        assert_eq!(status(&check_pi1(&isolated(8))), Status::Pass);
        assert_eq!(status(&check_pi1(&isolated(16))), Status::Pass);
        assert_eq!(status(&check_pi1(&isolated(4))), Status::Fail);
        assert_eq!(status(&check_pi1(&cycle(4))), Status::Inapplicable);
    }

    #[test]
    fn pi2_pi3() {
        assert_eq!(status(&check_pi2_pi3(&cycle(4))), Status::Fail);
        assert_eq!(status(&check_pi2_pi3(&union(&[cycle(3), cycle(7)]))), Status::Fail);
        assert_eq!(status(&check_pi2_pi3(&union(&[cycle(5), cycle(5)]))), Status::Pass);
        assert_eq!(status(&check_pi2_pi3(&union(&[cycle(5), cycle(5), isolated(1)]))), Status::Inapplicable);
    }

    #[test]
    fn pipeline_reports_every_rule_once() {
        let r = run_pipeline(&cycle(6));
        assert_eq!(r.verdicts.len(), Rule::PIPELINE.len());
        assert!(r.verdicts.iter().map(|v| v.rule).eq(Rule::PIPELINE));
        assert!(!r.overall);
        assert_eq!(r.failed_rules(), vec![Rule::Pi2Pi3]);
    }

    #[test]
    fn two_triangles_pass() {
        let r = run_pipeline(&union(&[cycle(3), cycle(3)]));
        assert!(r.overall, "{r:#?}");
    }

    #[test]
    fn fast_path_agrees() {
        for a in [
            cycle(6),
            union(&[cycle(3), cycle(3)]),
            union(&[cycle(4), isolated(4)]),
            complete_bipartite(4, 4),
            isolated(8),
            union(&[cycle(3), cycle(3), isolated(4)]),
        ] {
            assert_eq!(passes(&a), run_pipeline(&a).overall);
        }
    }

    #[test]
    fn report_json_shape() {
        let r = run_pipeline(&cycle(4));
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(|s| s.as_str()).collect();
        assert_eq!(keys, vec!["graph6", "overall", "verdicts"]);
        assert_eq!(v["verdicts"][7]["rule"], "pi2-pi3");
        assert_eq!(v["verdicts"][7]["status"], "fail");
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.starts_with(r#"{"graph6":"Cl","verdicts":[{"rule":"planes","status":"pass""#), "{text}");
    }
}
