mod common;

use std::collections::BTreeSet;

use rayon::prelude::*;

use even_lines::arrangement::{canonical_form, CanonicalForm};
use even_lines::enumerator::{admissible_k, brute_force_oracle, enumerate, EnumerationTask};
use even_lines::filters::passes;

use common::graph_from_mask;

fn strings(set: &even_lines::enumerator::SurvivorSet) -> Vec<String> {
    set.canonical_strings().into_iter().map(String::from).collect()
}

#[test]
fn matches_brute_force_up_to_six() {
    for n in [2, 4, 6] {
        let fast = enumerate(&EnumerationTask::new(n)).unwrap();
        let slow = brute_force_oracle(n).unwrap();
        assert_eq!(strings(&fast), strings(&slow), "n = {n}");
    }
}

/// Every even graph on 8 vertices is a graph on the first 7 plus a last
/// vertex joined to exactly the odd-degree ones, so walking all 2^21 labeled
/// graphs on 7 vertices covers the stratum.
#[test]
fn matches_naive_generator_at_eight() {
    let found: BTreeSet<CanonicalForm> = (0u64..1 << 21)
        .into_par_iter()
        .filter_map(|mask| {
            let base = graph_from_mask(7, mask);
            let mut edges = base.edges();
            edges.extend((0..7).filter(|&i| base.degree(i) % 2 == 1).map(|i| (i, 7)));
            let a = even_lines::arrangement::Arrangement::from_edges(8, &edges).unwrap();
            passes(&a).then(|| canonical_form(&a))
        })
        .collect();
    let fast = enumerate(&EnumerationTask::new(8)).unwrap();
    let expected: BTreeSet<String> = found.into_iter().map(CanonicalForm::into_string).collect();
    let got: BTreeSet<String> = strings(&fast).into_iter().collect();
    assert_eq!(got, expected);
}

#[test]
fn runs_are_deterministic() {
    for n in [6, 8] {
        let a = enumerate(&EnumerationTask::new(n)).unwrap();
        let b = enumerate(&EnumerationTask::new(n).with_jobs(1)).unwrap();
        assert_eq!(strings(&a), strings(&b));
        assert_eq!(a.summary(), b.summary());
    }
}

#[test]
fn survivors_sit_in_admissible_strata() {
    let set = enumerate(&EnumerationTask::new(8)).unwrap();
    let strata = admissible_k(8);
    for s in &set.survivors {
        assert!(strata.contains(&s.k));
        let a = s.arrangement();
        assert_eq!(a.edge_count(), s.k);
        assert!(a.degree_profile().all_even());
        assert_eq!(canonical_form(&a).as_str(), s.canonical.as_str());
    }
}

#[test]
fn restricting_k_selects_a_stratum() {
    let all = enumerate(&EnumerationTask::new(8)).unwrap();
    let only = enumerate(&EnumerationTask::new(8).with_k(16)).unwrap();
    let expected: Vec<String> = all.survivors.iter().filter(|s| s.k == 16).map(|s| s.canonical.as_str().into()).collect();
    assert_eq!(strings(&only), expected);
}
