//! Split-off deductions on the half class.
//!
//! When `k > n - 8`, Riemann–Roch gives `χ(𝓛) > 0`, and `h²(𝓛) = h⁰(-𝓛) = 0`
//! because `2𝓛 = Λ` is effective; so `𝓛` is effective. This is taken as the
//! starting axiom. From an effective class `C` the engine applies, to a
//! fixpoint:
//!
//! * `R-split`: if `C·L_i < 0` then `L_i` is a fixed component and `C - L_i`
//!   is effective. All such lines split off together, since removing one
//!   cannot raise the pairing with another; the checks below run between
//!   batches.
//! * `R-neg`: an effective class has nonnegative degree.
//! * `R-deg0`: an effective class of degree 0 is zero, so its square and all
//!   its line pairings vanish.
//! * `R-bound`: an effective class of degree `d ∈ {1, 2, 3, 4}` has
//!   `C² ≤ B(d)`, see [`DEGREE_BOUNDS`].
//! * `R-plane`: an effective class of degree 4 with `C² ≥ 2` is a plane
//!   section. Indeed `(C - H)² = C² - 4 ≥ -2` makes `C - H` or `H - C`
//!   effective by Riemann–Roch, and both have degree 0, so `C ~ H`. Then
//!   `C² = 4` and `C·L_i = 1` for every line.
//!
//! Degree bounds, maximum `C²` among effective divisors of degree `d` on a
//! smooth quartic:
//!
//! | d | extremal configuration                    | B(d) |
//! |---|-------------------------------------------|------|
//! | 1 | a line                                    | -2   |
//! | 2 | a conic, or two meeting lines             | -2   |
//! | 3 | a plane cubic, or a triangle of lines     | 0    |
//! | 4 | a plane section                           | 4    |
//!
//! Non-reduced members (double lines and the like) only lower `C²`.
//!
//! [`deduce_through`] adds `R-force`: since `h⁰(𝓛) ≥ χ(𝓛)`, a member of `|𝓛|`
//! can be made to pass through `χ(𝓛) - 1` chosen points. Putting `𝓛·M + 1`
//! points on a line `M` makes `M` a component. The engine then continues
//! from `𝓛` minus the forced lines.

use num_rational::Rational64;
use serde::Serialize;

use super::{label, Rule, Verdict};
use crate::arrangement::Arrangement;
use crate::lattice::{ambient, DivisorClass};

/// `B(d)` for `d = 1..=4`.
pub const DEGREE_BOUNDS: [i64; 4] = [-2, -2, 0, 4];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DeductionRule {
    #[serde(rename = "R-effective")]
    Effective,
    #[serde(rename = "R-split")]
    Split,
    #[serde(rename = "R-neg")]
    Negative,
    #[serde(rename = "R-deg0")]
    DegreeZero,
    #[serde(rename = "R-bound")]
    Bound,
    #[serde(rename = "R-plane")]
    Plane,
    #[serde(rename = "R-force")]
    Force,
}

impl DeductionRule {
    pub fn tag(self) -> &'static str {
        match self {
            DeductionRule::Effective => "R-effective",
            DeductionRule::Split => "R-split",
            DeductionRule::Negative => "R-neg",
            DeductionRule::DegreeZero => "R-deg0",
            DeductionRule::Bound => "R-bound",
            DeductionRule::Plane => "R-plane",
            DeductionRule::Force => "R-force",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    /// A rule was violated: the arrangement cannot be even.
    Contradiction,
    /// No rule applies any more.
    Exhausted,
    /// The starting axiom does not apply.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeductionStep {
    /// The effective class after this step.
    pub class: DivisorClass,
    pub rule: DeductionRule,
    pub justification: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeductionTrace {
    pub steps: Vec<DeductionStep>,
    pub outcome: Outcome,
}

#[derive(Serialize)]
struct StepJson<'a> {
    rule: &'static str,
    doubled_coeffs: &'a [i64],
    justification: &'a str,
}

#[derive(Serialize)]
struct TraceJson<'a> {
    steps: Vec<StepJson<'a>>,
    outcome: Outcome,
}

impl Serialize for DeductionTrace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TraceJson {
            steps: self
                .steps
                .iter()
                .map(|st| StepJson {
                    rule: st.rule.tag(),
                    doubled_coeffs: st.class.doubled_coeffs(),
                    justification: &st.justification,
                })
                .collect(),
            outcome: self.outcome,
        }
        .serialize(s)
    }
}

impl DeductionTrace {
    pub fn rule_tags(&self) -> Vec<&'static str> {
        self.steps.iter().map(|s| s.rule.tag()).collect()
    }

    pub fn last(&self) -> Option<&DeductionStep> {
        self.steps.last()
    }

    pub fn verdict(&self) -> Verdict {
        let last = self.steps.last().map(|s| s.justification.clone()).unwrap_or_default();
        match self.outcome {
            Outcome::Contradiction => Verdict::fail(Rule::Deduce, last),
            Outcome::Exhausted => Verdict::pass(
                Rule::Deduce,
                format!("no contradiction after {} step(s): {last}", self.steps.len()),
            ),
            Outcome::Inconclusive => Verdict::inapplicable(Rule::Deduce, last),
        }
    }
}

fn fmt_q(q: Rational64) -> String {
    if q.is_integer() {
        q.to_integer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Run the deduction engine from `𝓛`.
pub fn deduce(a: &Arrangement) -> DeductionTrace {
    deduce_through(a, &[])
}

/// Points needed on each line of `forced` to make it a component of a member
/// of `|𝓛|`, or `None` if some index is out of range, repeated, a 0-line, or
/// of odd degree.
pub fn forcing_cost(a: &Arrangement, forced: &[usize]) -> Option<i64> {
    let mut seen = 0u64;
    let mut total = 0;
    for &m in forced {
        if m >= a.n() || seen >> m & 1 == 1 || a.degree(m) == 0 || a.degree(m) % 2 == 1 {
            return None;
        }
        seen |= 1 << m;
        total += a.degree(m) as i64 / 2;
    }
    Some(total)
}

/// Like [`deduce`], but first forces the lines `forced` into a member of `|𝓛|`.
/// Inconclusive when `forced` costs more than `χ(𝓛) - 1` points.
pub fn deduce_through(a: &Arrangement, forced: &[usize]) -> DeductionTrace {
    let n = a.n();
    let k = a.edge_count();
    let amb = ambient(a);
    let half = DivisorClass::half(amb.clone());
    let mut steps = Vec::new();

    if n % 2 == 1 || k + 8 <= n {
        let why = if n % 2 == 1 {
            format!("n = {n} is odd, 𝓛 is not defined")
        } else {
            format!("k = {k} ≤ n - 8 = {}, effectivity of 𝓛 not available", n as i64 - 8)
        };
        steps.push(DeductionStep { class: half, rule: DeductionRule::Effective, justification: why });
        return DeductionTrace { steps, outcome: Outcome::Inconclusive };
    }

    let half_sq = half.square();
    steps.push(DeductionStep {
        class: half.clone(),
        rule: DeductionRule::Effective,
        justification: format!(
            "𝓛 effective: χ(𝓛) = 2 + (k-n)/4 = {} > 0; degree {}, 𝓛² = {}",
            fmt_q(Rational64::from_integer(2) + half_sq / 2),
            fmt_q(half.degree()),
            fmt_q(half_sq)
        ),
    });

    let mut current = half.clone();
    let mut split: Vec<usize> = Vec::new();
    if !forced.is_empty() {
        let points = 1 + (k as i64 - n as i64).div_euclid(4);
        let cost = forcing_cost(a, forced);
        if (k as i64 - n as i64) % 4 != 0 || cost.map_or(true, |c| c > points) {
            let names = split_names(forced);
            let why = match cost {
                Some(c) => format!("forcing {names} needs {c} point(s), only {points} available"),
                None => format!("cannot force {names}: repeated, out of range, a 0-line, or of odd degree"),
            };
            steps.push(DeductionStep { class: half, rule: DeductionRule::Force, justification: why });
            return DeductionTrace { steps, outcome: Outcome::Inconclusive };
        }
        for &m in forced {
            let pairing = current.pair_line(m);
            let line = DivisorClass::line(amb.clone(), m).expect("line index in range");
            current = &current - &line;
            split.push(m);
            steps.push(DeductionStep {
                class: current.clone(),
                rule: DeductionRule::Force,
                justification: format!(
                    "{} point(s) on {} against 𝓛·{} = {} force {} into the member; remainder has degree {}, square {}",
                    a.degree(m) / 2,
                    label(m),
                    label(m),
                    fmt_q(pairing),
                    label(m),
                    fmt_q(current.degree()),
                    fmt_q(current.square())
                ),
            });
        }
    }
    let contradiction = |steps: &mut Vec<DeductionStep>, class: &DivisorClass, rule, why: String| {
        steps.push(DeductionStep { class: class.clone(), rule, justification: why });
        DeductionTrace { steps: std::mem::take(steps), outcome: Outcome::Contradiction }
    };

    loop {
        let d = current.degree();
        let sq = current.square();
        let desc = || {
            if split.is_empty() {
                "𝓛".to_string()
            } else {
                let names: Vec<String> = split.iter().map(|&i| label(i)).collect();
                format!("𝓛 - ({})", names.join("+"))
            }
        };

        if d < Rational64::from_integer(0) {
            let why = format!("{} is effective of negative degree {}", desc(), fmt_q(d));
            return contradiction(&mut steps, &current, DeductionRule::Negative, why);
        }
        if d == Rational64::from_integer(0) {
            let nonzero_line = (0..n).find(|&i| current.pair_line(i) != Rational64::from_integer(0));
            if sq != Rational64::from_integer(0) || nonzero_line.is_some() {
                let line_sum = split_sum(&amb, &split);
                let why = format!(
                    "degree 0 forces 𝓛 ∼ {}, but ({})² = {} ≠ 𝓛² = {}{}",
                    split_names(&split),
                    split_names(&split),
                    fmt_q(line_sum.square()),
                    fmt_q(half_sq),
                    match nonzero_line {
                        Some(i) if sq == Rational64::from_integer(0) => format!(
                            "; {}·{} = {} ≠ 0",
                            desc(),
                            label(i),
                            fmt_q(current.pair_line(i))
                        ),
                        _ => String::new(),
                    }
                );
                return contradiction(&mut steps, &current, DeductionRule::DegreeZero, why);
            }
        }
        if d.is_integer() && (1..=4).contains(&d.to_integer()) {
            let di = d.to_integer();
            let bound = DEGREE_BOUNDS[(di - 1) as usize];
            if sq > Rational64::from_integer(bound) {
                let why = format!(
                    "{} is effective of degree {di} with square {} > B({di}) = {bound}",
                    desc(),
                    fmt_q(sq)
                );
                return contradiction(&mut steps, &current, DeductionRule::Bound, why);
            }
            if di == 4 && sq >= Rational64::from_integer(2) {
                let off = (0..n).find(|&i| current.pair_line(i) != Rational64::from_integer(1));
                if sq != Rational64::from_integer(4) || off.is_some() {
                    let why = match off {
                        Some(i) if sq == Rational64::from_integer(4) => format!(
                            "{} has degree 4 and square 4, so it is a plane section, but it meets {} with {} ≠ 1",
                            desc(),
                            label(i),
                            fmt_q(current.pair_line(i))
                        ),
                        _ => format!(
                            "{} has degree 4 and square {}: (C - H)² = {} ≥ -2 forces C ∼ H, in conflict with C² = {}",
                            desc(),
                            fmt_q(sq),
                            fmt_q(sq - 4),
                            fmt_q(sq)
                        ),
                    };
                    return contradiction(&mut steps, &current, DeductionRule::Plane, why);
                }
            }
        }

        let negative: Vec<usize> = (0..n).filter(|&i| current.pair_line(i) < Rational64::from_integer(0)).collect();
        if negative.is_empty() {
            steps.push(DeductionStep {
                class: current.clone(),
                rule: DeductionRule::Effective,
                justification: format!(
                    "fixpoint: {} effective, degree {}, square {}, pairs nonnegatively with every line",
                    desc(),
                    fmt_q(d),
                    fmt_q(sq)
                ),
            });
            return DeductionTrace { steps, outcome: Outcome::Exhausted };
        }
        // Splitting one line only lowers the pairings with the others, so the
        // whole batch splits off; checks wait for the batch so the outcome
        // does not depend on line order.
        let before = desc();
        let pairings: Vec<Rational64> = negative.iter().map(|&i| current.pair_line(i)).collect();
        for (&i, &pairing) in negative.iter().zip(&pairings) {
            let line = DivisorClass::line(amb.clone(), i).expect("line index in range");
            current = &current - &line;
            split.push(i);
            steps.push(DeductionStep {
                class: current.clone(),
                rule: DeductionRule::Split,
                justification: format!(
                    "({before})·{} = {} < 0 splits off {}; remainder has degree {}, square {}",
                    label(i),
                    fmt_q(pairing),
                    label(i),
                    fmt_q(current.degree()),
                    fmt_q(current.square())
                ),
            });
        }
    }
}

fn split_sum(amb: &std::sync::Arc<crate::lattice::GramData>, split: &[usize]) -> DivisorClass {
    let mut s = DivisorClass::zero(amb.clone());
    for &i in split {
        s = &s + &DivisorClass::line(amb.clone(), i).expect("line index in range");
    }
    s
}

fn split_names(split: &[usize]) -> String {
    if split.is_empty() {
        "0".into()
    } else {
        split.iter().map(|&i| label(i)).collect::<Vec<_>>().join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::shapes::*;

    #[test]
    fn quadrangle_plus_four_skew_lines() {
        let a = union(&[cycle(4), isolated(4)]);
        let t = deduce(&a);
        assert_eq!(t.outcome, Outcome::Contradiction);
        assert_eq!(t.rule_tags(), vec!["R-effective", "R-split", "R-split", "R-split", "R-split", "R-deg0"]);
        let last = &t.last().unwrap().justification;
        assert!(last.contains("𝓛 ∼ L5+L6+L7+L8"), "{last}");
        assert!(last.contains("= -8 ≠ 𝓛² = -2"), "{last}");
    }

    #[test]
    fn bowtie_plus_skew_line() {
        let bowtie = Arrangement::from_edges(5, &[(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4)]).unwrap();
        let a = union(&[bowtie, isolated(1)]);
        let t = deduce(&a);
        assert_eq!(t.outcome, Outcome::Contradiction);
        assert_eq!(t.rule_tags(), vec!["R-effective", "R-split", "R-bound"]);
        let last = t.last().unwrap();
        assert_eq!(last.class.degree(), Rational64::from_integer(2));
        assert_eq!(last.class.square(), Rational64::from_integer(0));
    }

    #[test]
    fn two_triangles_survive() {
        let t = deduce(&union(&[cycle(3), cycle(3)]));
        assert_eq!(t.outcome, Outcome::Exhausted);
        assert_eq!(t.rule_tags(), vec!["R-effective", "R-effective"]);
    }

    #[test]
    fn inconclusive_without_effectivity() {
        assert_eq!(deduce(&isolated(8)).outcome, Outcome::Inconclusive);
        assert_eq!(deduce(&isolated(5)).outcome, Outcome::Inconclusive);
    }

    #[test]
    fn zero_line_with_degree_four_remainder() {
        // n = 10, k = 14 with a 0-line: 𝓛 - L10 has degree 4 and square 2
        let a = union(&[cycle(3), cycle(3), cycle(3), isolated(1)]);
        let mut edges = a.edges();
        edges.extend([(0, 3), (1, 4), (2, 5), (6, 0), (7, 1)]);
        let a = Arrangement::from_edges(10, &edges).unwrap();
        assert_eq!(a.edge_count(), 14);
        let t = deduce(&a);
        assert_eq!(t.outcome, Outcome::Contradiction);
        assert_eq!(*t.rule_tags().last().unwrap(), "R-plane");
    }

    #[test]
    fn splits_strictly_lower_degree() {
        let a = union(&[cycle(4), isolated(4)]);
        let t = deduce(&a);
        let degrees: Vec<Rational64> = t.steps.iter().map(|s| s.class.degree()).collect();
        for (w, s) in degrees.windows(2).zip(&t.steps[1..]) {
            if s.rule == DeductionRule::Split {
                assert_eq!(w[1], w[0] - 1);
            }
        }
    }

    #[test]
    fn forcing_a_two_line() {
        // two quadrangles sharing L8, plus the skew line L7
        let a = Arrangement::from_edges(8, &[(0, 1), (1, 2), (2, 7), (7, 0), (3, 4), (4, 5), (5, 7), (7, 3)]).unwrap();
        assert_eq!(deduce(&a).outcome, Outcome::Exhausted);
        let t = deduce_through(&a, &[0]);
        assert_eq!(t.outcome, Outcome::Contradiction, "{:?}", t.rule_tags());
        assert_eq!(t.rule_tags()[1], "R-force");
        assert_eq!(forcing_cost(&a, &[0]), Some(1));
        assert_eq!(forcing_cost(&a, &[6]), None);
        assert_eq!(forcing_cost(&a, &[0, 0]), None);
    }

    #[test]
    fn forcing_beyond_budget_is_inconclusive() {
        let a = union(&[cycle(4), cycle(4)]);
        let t = deduce_through(&a, &[0, 1]);
        assert_eq!(t.outcome, Outcome::Inconclusive);
        assert!(t.last().unwrap().justification.contains("needs 2 point(s), only 1"));
    }

    #[test]
    fn trace_serializes() {
        let t = deduce(&union(&[cycle(4), isolated(4)]));
        let v = serde_json::to_value(&t).unwrap();
        assert_eq!(v["outcome"], "contradiction");
        assert_eq!(v["steps"][1]["rule"], "R-split");
        assert_eq!(v["steps"][1]["doubled_coeffs"], serde_json::json!([0, 1, 1, 1, 1, -1, 1, 1, 1]));
    }
}
