//! Isomorph-free generation of admissible arrangements on `n` lines.
//!
//! Graphs are grown one vertex at a time. Level `m` holds one canonical
//! representative of every graph on `m` vertices that satisfies the
//! hereditary constraints (clique number at most 4, plane closure, at most
//! `k_max` edges); level `m + 1` is obtained by attaching a new vertex to every
//! subset of a level-`m` representative and deduplicating by canonical graph.
//! Since every induced subgraph of an admissible arrangement satisfies the
//! hereditary constraints, every admissible arrangement minus any one line is
//! in level `n - 1`.
//!
//! The last line is not searched: in a graph with all degrees even, the
//! neighbours of a vertex `v` are exactly the odd-degree vertices of `G - v`.
//! So `G` is determined by `G - v`, and each level-`(n - 1)` graph has exactly
//! one even completion.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arrangement::{bit, bits, canonical_graph, encode_graph6, Arrangement, CanonicalForm};
use crate::filters::{passes, plane_closed, run_pipeline, FilterReport};

/// Largest `n` accepted by [`brute_force_oracle`].
pub const ORACLE_MAX_LINES: usize = 6;

/// Largest `n` accepted by [`enumerate`]; masks are 64-bit but the level
/// sizes explode long before that.
pub const MAX_ENUMERATION_LINES: usize = 16;

#[derive(Debug, Error)]
pub enum EnumerationError {
    #[error("node budget {budget} exhausted after {used} nodes; {} partial survivor(s)", partial.len())]
    ResourceLimit { budget: u64, used: u64, partial: Box<SurvivorSet> },
    #[error("brute-force oracle supports n ≤ {ORACLE_MAX_LINES}, got {0}")]
    OracleTooLarge(usize),
    #[error("enumeration supports n ≤ {MAX_ENUMERATION_LINES}, got {0}")]
    TooManyLines(usize),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

/// `k` values that survive the arithmetic conditions before any search.
///
/// `k ≡ n (mod 4)` and `0 ≤ k ≤ n(n-2)/2`, intersected with
/// [`quadric_cutoff`] where one is known.
pub fn admissible_k(n: usize) -> Vec<usize> {
    let upper = n * n.saturating_sub(2) / 2;
    let upper = quadric_cutoff(n).map_or(upper, |c| upper.min(c));
    (0..=upper).filter(|k| k % 4 == n % 4).collect()
}

/// Stratum cut for `n = 10`: `χ(2H - Λ) = k - 20`, so for `k ≥ 22` the ten
/// lines lie on a quadric, which the case analysis excludes. Applied as
/// metadata, not as a per-graph filter.
pub fn quadric_cutoff(n: usize) -> Option<usize> {
    (n == 10).then_some(18)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationTask {
    n: usize,
    ks: BTreeSet<usize>,
    budget: Option<u64>,
    jobs: Option<usize>,
}

impl EnumerationTask {
    pub fn new(n: usize) -> Self {
        EnumerationTask { n, ks: admissible_k(n).into_iter().collect(), budget: None, jobs: None }
    }

    /// Restrict to one stratum. A `k` outside [`admissible_k`] leaves nothing
    /// to search.
    pub fn with_k(mut self, k: usize) -> Self {
        self.ks.retain(|&x| x == k);
        self
    }

    /// Cap on search nodes: one node per candidate extension plus one per
    /// completion.
    pub fn with_budget(mut self, nodes: u64) -> Self {
        self.budget = Some(nodes);
        self
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = Some(jobs.max(1));
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ks(&self) -> &BTreeSet<usize> {
        &self.ks
    }

    pub fn budget(&self) -> Option<u64> {
        self.budget
    }

    pub fn jobs(&self) -> Option<usize> {
        self.jobs
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Survivor {
    pub canonical: CanonicalForm,
    pub k: usize,
    pub report: FilterReport,
}

impl Survivor {
    fn of(canonical: &Arrangement) -> Self {
        Survivor {
            canonical: CanonicalForm::from_trusted(encode_graph6(canonical)),
            k: canonical.edge_count(),
            report: run_pipeline(canonical),
        }
    }

    pub fn arrangement(&self) -> Arrangement {
        crate::arrangement::decode_graph6(self.canonical.as_str()).expect("survivors hold valid graph6")
    }
}

/// Survivors sorted by `(k, canonical string)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurvivorSet {
    pub n: usize,
    pub ks: Vec<usize>,
    pub survivors: Vec<Survivor>,
    pub complete: bool,
    pub nodes_used: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumerationSummary {
    pub n: usize,
    pub k: Vec<usize>,
    pub count: usize,
    pub count_by_k: BTreeMap<usize, usize>,
    pub complete: bool,
    pub node_budget_used: u64,
}

impl SurvivorSet {
    pub fn len(&self) -> usize {
        self.survivors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.survivors.is_empty()
    }

    pub fn canonical_strings(&self) -> Vec<&str> {
        self.survivors.iter().map(|s| s.canonical.as_str()).collect()
    }

    pub fn by_k(&self) -> BTreeMap<usize, Vec<&Survivor>> {
        let mut out: BTreeMap<usize, Vec<&Survivor>> = BTreeMap::new();
        for s in &self.survivors {
            out.entry(s.k).or_default().push(s);
        }
        out
    }

    pub fn summary(&self) -> EnumerationSummary {
        EnumerationSummary {
            n: self.n,
            k: self.ks.clone(),
            count: self.len(),
            count_by_k: self.by_k().into_iter().map(|(k, v)| (k, v.len())).collect(),
            complete: self.complete,
            node_budget_used: self.nodes_used,
        }
    }

    fn from_canonical(n: usize, ks: Vec<usize>, graphs: Vec<Arrangement>, complete: bool, nodes_used: u64) -> Self {
        let mut survivors: Vec<Survivor> = graphs.par_iter().map(Survivor::of).collect();
        survivors.sort_by(|a, b| (a.k, &a.canonical).cmp(&(b.k, &b.canonical)));
        SurvivorSet { n, ks, survivors, complete, nodes_used }
    }
}

struct Meter {
    budget: Option<u64>,
    used: u64,
}

impl Meter {
    fn remaining(&self) -> u64 {
        self.budget.map_or(u64::MAX, |b| b.saturating_sub(self.used))
    }
}

/// One representative per isomorphism class of arrangements on `task.n()`
/// lines with `k` in the task's strata that pass the full pipeline.
pub fn enumerate(task: &EnumerationTask) -> Result<SurvivorSet, EnumerationError> {
    if task.n > MAX_ENUMERATION_LINES {
        return Err(EnumerationError::TooManyLines(task.n));
    }
    match task.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| EnumerationError::ThreadPool(e.to_string()))?
            .install(|| run(task)),
        None => run(task),
    }
}

fn run(task: &EnumerationTask) -> Result<SurvivorSet, EnumerationError> {
    let n = task.n;
    let ks: Vec<usize> = task.ks.iter().copied().collect();
    let mut meter = Meter { budget: task.budget, used: 0 };
    let Some(&k_max) = ks.last() else {
        return Ok(SurvivorSet { n, ks, survivors: Vec::new(), complete: true, nodes_used: 0 });
    };
    if n == 0 {
        let empty = Arrangement::empty(0).expect("zero lines");
        let found = if passes(&empty) { vec![empty] } else { Vec::new() };
        return Ok(SurvivorSet::from_canonical(0, ks, found, true, 0));
    }

    let mut level = vec![Arrangement::empty(0).expect("zero lines")];
    for m in 0..n - 1 {
        let cost = (level.len() as u64).saturating_mul(1u64 << m);
        if cost > meter.remaining() {
            return Err(limit(task, &meter, SurvivorSet::from_canonical(n, ks, Vec::new(), false, meter.used)));
        }
        meter.used += cost;
        level = next_level(&level, k_max);
    }

    // even completion
    let allowed = (level.len() as u64).min(meter.remaining()) as usize;
    let complete = allowed == level.len();
    meter.used += allowed as u64;
    let completed: Result<Vec<Option<Arrangement>>, EnumerationError> =
        level[..allowed].par_iter().map(|q| complete_even(q, &task.ks)).collect();
    let mut graphs: Vec<Arrangement> = completed?.into_iter().flatten().collect();
    graphs.par_sort_unstable();
    graphs.dedup();
    let survivors: Vec<Arrangement> = graphs.into_par_iter().filter(passes).collect();
    let set = SurvivorSet::from_canonical(n, ks, survivors, complete, meter.used);
    if complete {
        Ok(set)
    } else {
        Err(limit(task, &meter, set))
    }
}

fn limit(task: &EnumerationTask, meter: &Meter, partial: SurvivorSet) -> EnumerationError {
    EnumerationError::ResourceLimit {
        budget: task.budget.unwrap_or(u64::MAX),
        used: meter.used,
        partial: Box::new(partial),
    }
}

fn hereditary_ok(a: &Arrangement, k_max: usize) -> bool {
    a.edge_count() <= k_max && !a.has_clique_of_size(5) && plane_closed(a)
}

fn next_level(level: &[Arrangement], k_max: usize) -> Vec<Arrangement> {
    let mut out: Vec<Arrangement> = level
        .par_iter()
        .flat_map_iter(|parent| {
            let m = parent.n();
            let room = k_max - parent.edge_count();
            let mut local = Vec::new();
            for s in 0u64..(1u64 << m) {
                if s.count_ones() as usize > room {
                    continue;
                }
                let child = attach(parent, s);
                if hereditary_ok(&child, k_max) {
                    local.push(canonical_graph(&child));
                }
            }
            local.sort_unstable();
            local.dedup();
            local
        })
        .collect();
    out.par_sort_unstable();
    out.dedup();
    out
}

fn attach(parent: &Arrangement, neighbours: u64) -> Arrangement {
    let m = parent.n();
    let mut rows = parent.rows().to_vec();
    for i in bits(neighbours) {
        rows[i] |= bit(m);
    }
    rows.push(neighbours);
    Arrangement::from_rows_unchecked(m + 1, rows)
}

fn complete_even(q: &Arrangement, ks: &BTreeSet<usize>) -> Result<Option<Arrangement>, EnumerationError> {
    let odd = (0..q.n()).filter(|&i| q.degree(i) % 2 == 1).fold(0u64, |m, i| m | bit(i));
    let k = q.edge_count() + odd.count_ones() as usize;
    if !ks.contains(&k) {
        return Ok(None);
    }
    let g = attach(q, odd);
    let n = g.n();
    // every degree is even, hence at most n - 2 when n is even
    if n % 2 == 0 {
        if let Some(i) = (0..n).find(|&i| g.degree(i) + 2 > n) {
            return Err(EnumerationError::InternalInconsistency(format!(
                "even completion of {} has degree {} at line {}",
                encode_graph6(q),
                g.degree(i),
                i + 1
            )));
        }
    }
    if g.has_clique_of_size(5) || !plane_closed(&g) {
        return Ok(None);
    }
    Ok(Some(canonical_graph(&g)))
}

/// Exhaustive reference: every labeled graph on `n ≤ 6` vertices through the
/// pipeline, deduplicated by canonical form.
pub fn brute_force_oracle(n: usize) -> Result<SurvivorSet, EnumerationError> {
    if n > ORACLE_MAX_LINES {
        return Err(EnumerationError::OracleTooLarge(n));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let total = 1u64 << pairs.len();
    let mut found = BTreeSet::new();
    for mask in 0..total {
        let mut rows = vec![0u64; n];
        for (e, &(i, j)) in pairs.iter().enumerate() {
            if mask >> e & 1 == 1 {
                rows[i] |= bit(j);
                rows[j] |= bit(i);
            }
        }
        let a = Arrangement::from_rows_unchecked(n, rows);
        if passes(&a) {
            found.insert(canonical_graph(&a));
        }
    }
    let ks = {
        let mut ks: Vec<usize> = found.iter().map(Arrangement::edge_count).collect();
        ks.dedup();
        ks
    };
    Ok(SurvivorSet::from_canonical(n, ks, found.into_iter().collect(), true, total))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissible_strata() {
        assert_eq!(admissible_k(10), vec![2, 6, 10, 14, 18]);
        assert_eq!(admissible_k(8), vec![0, 4, 8, 12, 16, 20, 24]);
        assert_eq!(admissible_k(6), vec![2, 6, 10]);
        assert!(admissible_k(2).is_empty());
    }

    #[test]
    fn small_n() {
        for n in [1, 2, 3, 4, 5] {
            assert!(enumerate(&EnumerationTask::new(n)).unwrap().is_empty(), "n = {n}");
        }
        let six = enumerate(&EnumerationTask::new(6)).unwrap();
        assert_eq!(six.len(), 1);
        assert_eq!(six.survivors[0].k, 6);
    }

    #[test]
    fn budget_is_reported() {
        let err = enumerate(&EnumerationTask::new(8).with_budget(100)).unwrap_err();
        match err {
            EnumerationError::ResourceLimit { partial, .. } => assert!(!partial.complete),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn oracle_limit() {
        assert!(matches!(brute_force_oracle(7), Err(EnumerationError::OracleTooLarge(7))));
    }
}
