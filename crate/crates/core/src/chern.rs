//! Chern numbers of the minimal double cover `Y` branched along an even
//! arrangement, and the numerical checks they feed.
//!
//! Blowing up the `k` intersection points and taking the double cover gives
//! `Ỹ` with `c₁²(Ỹ) = k - n` and `c₂(Ỹ) = 48 + 2(k - n)`. Each 0-line lifts to
//! a (-1)-curve; contracting them gives `Y`. All of this assumes that no three
//! lines of the arrangement pass through one point, which a graph cannot
//! express, so reports carry the assumption as a flag.

use std::fmt::Write as _;

use serde::Serialize;

use crate::arrangement::Arrangement;

pub const NO_CONCURRENT_LINES: &str = "no three lines of the arrangement pass through a common point";

/// Ids of the catalog entries whose cover is not of general type; the Noether
/// inequality is not checked for them.
pub const NOT_GENERAL_TYPE: [&str; 5] = ["Λ(6)", "Λ_1(8)", "Λ_2(8)", "Λ_1(10)", "Λ_2(10)"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChernReport {
    pub n: usize,
    pub k: usize,
    pub n0: usize,
    pub c1sq_ytilde: i64,
    pub c2_ytilde: i64,
    pub c1sq_y: i64,
    pub c2_y: i64,
    /// `(c₁² + c₂)/12` when integral.
    pub chi_oy: Option<i64>,
    pub my_slack: i64,
    pub noether_slack: i64,
    pub assumption: &'static str,
}

impl ChernReport {
    pub fn from_profile(n: usize, k: usize, n0: usize) -> Self {
        let (n_, k_, n0_) = (n as i64, k as i64, n0 as i64);
        let c1sq_ytilde = k_ - n_;
        let c2_ytilde = 48 + 2 * (k_ - n_);
        let c1sq_y = c1sq_ytilde + n0_;
        let c2_y = c2_ytilde - n0_;
        let total = c1sq_y + c2_y;
        ChernReport {
            n,
            k,
            n0,
            c1sq_ytilde,
            c2_ytilde,
            c1sq_y,
            c2_y,
            chi_oy: (total % 12 == 0).then_some(total / 12),
            my_slack: 144 + 5 * k_ - (5 * n_ + 4 * n0_),
            noether_slack: 3 * (k_ - n_) + 6 * n0_ - 12,
            assumption: NO_CONCURRENT_LINES,
        }
    }

    /// `c₁² ≤ 3c₂` for `Y`.
    pub fn miyaoka_yau_holds(&self) -> bool {
        self.my_slack >= 0
    }

    /// `c₁² ≥ 2χ - 6`, meaningful only when `Y` is of general type.
    pub fn noether_holds(&self) -> bool {
        self.noether_slack >= 0
    }
}

pub fn chern_numbers(a: &Arrangement) -> ChernReport {
    let p = a.degree_profile();
    ChernReport::from_profile(a.n(), a.edge_count(), p.count(0))
}

pub fn miyaoka_yau(a: &Arrangement) -> i64 {
    chern_numbers(a).my_slack
}

pub fn noether_inequality(a: &Arrangement) -> i64 {
    chern_numbers(a).noether_slack
}

/// Aligned text table, one row per `(label, report, noether_checked)`.
pub fn chern_table<'a>(rows: impl IntoIterator<Item = (&'a str, &'a ChernReport, bool)>) -> String {
    let rows: Vec<_> = rows.into_iter().collect();
    let width = rows.iter().map(|(l, _, _)| l.chars().count()).max().unwrap_or(0).max(5);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<width$}  {:>3} {:>3} {:>3}  {:>5} {:>5} {:>4}  {:>7} {:>7}",
        "label", "n", "k", "n0", "c1^2", "c2", "chi", "MY", "Noether"
    );
    for (label, r, checked) in rows {
        let chi = r.chi_oy.map(|c| c.to_string()).unwrap_or_else(|| "-".into());
        let noether = if checked { r.noether_slack.to_string() } else { "skip".into() };
        let _ = writeln!(
            out,
            "{:<width$}  {:>3} {:>3} {:>3}  {:>5} {:>5} {:>4}  {:>7} {:>7}",
            label, r.n, r.k, r.n0, r.c1sq_y, r.c2_y, chi, r.my_slack, noether
        );
    }
    out.push_str(&format!("assuming {NO_CONCURRENT_LINES}\n"));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::shapes::*;

    #[test]
    fn two_triangles() {
        let r = chern_numbers(&union(&[cycle(3), cycle(3)]));
        assert_eq!((r.c1sq_y, r.c2_y, r.chi_oy), (0, 48, Some(4)));
    }

    #[test]
    fn eight_skew_lines() {
        let r = chern_numbers(&isolated(8));
        assert_eq!((r.c1sq_y, r.c2_y), (0, 24));
        assert_eq!(r.chi_oy, Some(2));
    }

    #[test]
    fn double_four() {
        let r = chern_numbers(&complete_bipartite(4, 4));
        assert_eq!(r.my_slack, 184);
        assert!(r.noether_holds());
    }

    #[test]
    fn sum_identity() {
        for n in 0..=16 {
            for k in 0..=n * n / 2 {
                for n0 in 0..=n {
                    let r = ChernReport::from_profile(n, k, n0);
                    assert_eq!(r.c1sq_y + r.c2_y, 48 + 3 * (k as i64 - n as i64));
                }
            }
        }
    }

    #[test]
    fn table_is_aligned() {
        let r = ChernReport::from_profile(10, 14, 0);
        let t = chern_table([("Λ_5(10)", &r, true), ("Λ(6)", &ChernReport::from_profile(6, 6, 0), false)]);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines[0].chars().count(), lines[1].chars().count());
        assert!(lines[1].contains("    4    56    5"), "{t}");
        assert!(lines[2].ends_with("skip"), "{t}");
    }
}
