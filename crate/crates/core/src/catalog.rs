//! Known even arrangements for `n ≤ 10`, the exclusion ledger for survivors
//! removed by arguments outside the pipeline, and the classifier reconciling
//! enumerator output with both.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrangement::shapes::{complete_bipartite, cycle, isolated, union};
use crate::arrangement::{canonical_form, decode_graph6, Arrangement, ArrangementError, CanonicalForm};
use crate::filters::{deduce_through, DeductionTrace, Outcome};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("ledger: {0}")]
    Ledger(#[from] serde_json::Error),
    #[error("ledger entry {graph6}: {source}")]
    LedgerGraph { graph6: String, source: ArrangementError },
    #[error("ledger entry {graph6}: {msg}")]
    LedgerEntry { graph6: String, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    /// Two disjoint fibres of one elliptic fibration.
    FibrationPair,
    /// Cut out by a smooth quadric.
    QuadricSection,
    /// Cut out by two planes.
    PlanePair,
    /// Reduced to a known even set by elliptic or quadratic reduction.
    ReductionChain,
    /// A weight-8 word of the even-set code of sixteen disjoint lines.
    EvenEight,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Realization {
    /// Exists on some smooth quartic.
    Realized,
    /// Even if it exists; existence is open.
    Candidate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub argument: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduces_to: Option<String>,
    /// Set when the evenness argument is incomplete.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    pub n: usize,
    pub k: usize,
    pub graphs: Vec<CanonicalForm>,
    pub realization: Realization,
    pub certificate: Certificate,
    /// Lines off the arrangement used by the certificate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub auxiliary_lines: Option<usize>,
}

impl CatalogEntry {
    pub fn arrangements(&self) -> Vec<Arrangement> {
        self.graphs.iter().map(|g| decode_graph6(g.as_str()).expect("catalog graph6 is valid")).collect()
    }
}

/// Arrangement from 1-based line pairs.
fn lines(n: usize, pairs: &[(usize, usize)]) -> Arrangement {
    let edges: Vec<(usize, usize)> = pairs.iter().map(|&(i, j)| (i - 1, j - 1)).collect();
    Arrangement::from_edges(n, &edges).expect("catalog edges are valid")
}

/// `L_2L_3L_4` triangle with each of `L_2, L_3, L_4` meeting one of
/// `L_5, L_6, L_7` and one of `L_8, L_9, L_10`; `L_1` isolated.
fn triangle_with_spokes() -> Vec<(usize, usize)> {
    vec![(2, 3), (3, 4), (2, 4), (2, 5), (2, 8), (3, 6), (3, 9), (4, 7), (4, 10)]
}

/// The `Λ_11(10)` family: three triangles, the first joined to the other two
/// by fixed spokes, and a perfect matching `σ` between the second and third.
/// The six choices of `σ` fall into three isomorphism classes.
pub fn derive_lambda11_subcases() -> Result<Vec<Arrangement>, CatalogError> {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut classes: BTreeMap<CanonicalForm, Arrangement> = BTreeMap::new();
    for sigma in PERMS {
        let mut pairs = triangle_with_spokes();
        pairs.extend([(5, 6), (6, 7), (5, 7), (8, 9), (9, 10), (8, 10)]);
        pairs.extend((0..3).map(|i| (5 + i, 8 + sigma[i])));
        let a = lines(10, &pairs);
        classes.entry(canonical_form(&a)).or_insert(a);
    }
    if classes.len() != 3 {
        return Err(CatalogError::InternalInconsistency(format!(
            "Λ_11(10) matchings give {} classes, expected 3",
            classes.len()
        )));
    }
    Ok(classes.into_values().collect())
}

fn entry(
    id: &str,
    graphs: &[Arrangement],
    realization: Realization,
    kind: CertificateKind,
    argument: &str,
    reduces_to: Option<&str>,
    auxiliary_lines: Option<usize>,
) -> CatalogEntry {
    CatalogEntry {
        id: id.to_string(),
        n: graphs[0].n(),
        k: graphs[0].edge_count(),
        graphs: graphs.iter().map(canonical_form).collect(),
        realization,
        certificate: Certificate {
            kind,
            argument: argument.to_string(),
            reduces_to: reduces_to.map(str::to_string),
            gap: None,
        },
        auxiliary_lines,
    }
}

/// Sixteen entries holding eighteen classes (`Λ_11(10)` holds three).
pub fn builtin_catalog() -> Vec<CatalogEntry> {
    use CertificateKind::*;
    use Realization::*;

    let mut out = vec![
        entry(
            "Λ(6)",
            &[union(&[cycle(3), cycle(3)])],
            Realized,
            FibrationPair,
            "two disjoint triangles are two fibres of one elliptic fibration",
            None,
            None,
        ),
        entry(
            "Λ_1(8)",
            &[isolated(8)],
            Realized,
            EvenEight,
            "on a quartic with sixteen disjoint lines the even sets form a 5-dimensional code whose 30 nonzero proper words have weight 8",
            None,
            None,
        ),
        entry(
            "Λ_2(8)",
            &[union(&[cycle(4), cycle(4)])],
            Realized,
            FibrationPair,
            "two disjoint space quadrangles are two fibres of one elliptic fibration",
            None,
            None,
        ),
        entry(
            "Λ_3(8)",
            &[complete_bipartite(4, 4)],
            Realized,
            QuadricSection,
            "four lines from each ruling of a smooth quadric are cut out by that quadric",
            None,
            None,
        ),
        entry(
            "Λ_4(8)",
            &[lines(
                8,
                &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4), (5, 6), (5, 7), (5, 8), (6, 7), (6, 8), (7, 8), (1, 5), (2, 6), (3, 7), (4, 8)],
            )],
            Realized,
            PlanePair,
            "a quadrangle in each of two planes, corresponding lines meeting on the common line, cut out by the two planes",
            None,
            None,
        ),
        entry(
            "Λ_1(10)",
            &[union(&[isolated(4), cycle(6)])],
            Candidate,
            FibrationPair,
            "the hexagon is a fibre; the four 0-lines plus twice a fifth line meeting all of them form a second fibre of type D4~; subtract twice the fifth line",
            None,
            Some(1),
        ),
        entry(
            "Λ_2(10)",
            &[union(&[cycle(5), cycle(5)])],
            Candidate,
            FibrationPair,
            "two disjoint space pentagons are two fibres of one elliptic fibration",
            None,
            None,
        ),
        entry(
            "Λ_3(10)",
            &[lines(10, &[(3, 4), (5, 6), (7, 8), (9, 10), (3, 9), (5, 9), (7, 9), (4, 10), (6, 10), (8, 10)])],
            Candidate,
            ReductionChain,
            "two auxiliary lines close the pairs L3L4 and L5L6 into disjoint triangles; elliptic reduction by them leaves two disjoint quadrangles",
            Some("Λ_2(8)"),
            Some(2),
        ),
        entry(
            "Λ_4(10)",
            &[lines(10, &[(3, 4), (5, 6), (3, 9), (5, 9), (7, 9), (8, 9), (4, 10), (6, 10), (7, 10), (8, 10)])],
            Candidate,
            ReductionChain,
            "two auxiliary lines close the pairs L3L4 and L5L6 into disjoint triangles; elliptic reduction by them leaves two disjoint quadrangles",
            Some("Λ_2(8)"),
            Some(2),
        ),
        entry(
            "Λ_5(10)",
            &[lines(
                10,
                &[(1, 2), (3, 4), (1, 9), (3, 9), (5, 9), (6, 9), (7, 9), (8, 9), (2, 10), (4, 10), (5, 10), (6, 10), (7, 10), (8, 10)],
            )],
            Candidate,
            ReductionChain,
            "two auxiliary lines close the pairs L1L2 and L3L4 into disjoint triangles; elliptic reduction by them leaves a 4+4 quadric configuration",
            Some("Λ_3(8)"),
            Some(2),
        ),
        entry(
            "Λ_6(10)",
            &[lines(
                10,
                &[(1, 2), (3, 4), (1, 10), (2, 10), (3, 10), (4, 10), (8, 10), (9, 10), (5, 8), (6, 8), (7, 8), (5, 9), (6, 9), (7, 9)],
            )],
            Candidate,
            ReductionChain,
            "the residual lines in the planes of L1L2L10 and L3L4L10 close two disjoint triangles; elliptic reduction by them leaves a 4+4 quadric configuration",
            Some("Λ_3(8)"),
            Some(2),
        ),
        entry(
            "Λ_7(10)",
            &[lines(
                10,
                &[(7, 8), (9, 10), (1, 7), (2, 7), (3, 7), (1, 9), (2, 9), (3, 9), (4, 8), (5, 8), (6, 8), (4, 10), (5, 10), (6, 10)],
            )],
            Candidate,
            ReductionChain,
            "L1+L2+L7+L9 is a fibre; elliptic reduction by it and the fibre through L4 leaves two disjoint fibres of degree four",
            Some("two disjoint fibres"),
            None,
        ),
        entry(
            "Λ_8(10)",
            &[lines(
                10,
                &[(2, 3), (7, 8), (8, 9), (9, 10), (1, 8), (1, 9), (2, 8), (3, 9), (4, 7), (5, 7), (6, 7), (4, 10), (5, 10), (6, 10)],
            )],
            Candidate,
            ReductionChain,
            "L2+L3+L8+L9 is a fibre; elliptic reduction by it and the fibre through L4 leaves two disjoint fibres of degree four",
            Some("two disjoint fibres"),
            None,
        ),
        entry(
            "Λ_9(10)",
            &[lines(
                10,
                &[(7, 8), (8, 9), (9, 10), (7, 10), (2, 3), (5, 6), (1, 7), (2, 7), (1, 8), (3, 8), (4, 9), (5, 9), (4, 10), (6, 10)],
            )],
            Candidate,
            ReductionChain,
            "L2+L3+L7+L8 is a fibre; elliptic reduction by it and the fibre through L4 leaves two disjoint fibres",
            Some("two disjoint fibres"),
            None,
        ),
        {
            let mut pairs = triangle_with_spokes();
            for i in 5..=7 {
                for j in 8..=10 {
                    pairs.push((i, j));
                }
            }
            let mut e = entry(
                "Λ_10(10)",
                &[lines(10, &pairs)],
                Candidate,
                ReductionChain,
                "L5..L10 lie on a smooth quadric; quadratic reduction modulo it leaves two disjoint cubic fibres",
                Some("two disjoint fibres"),
                None,
            );
            e.certificate.gap = Some(
                "the step from the reduced divisor back to evenness of the original arrangement is left open".into(),
            );
            e
        },
    ];
    let sub = derive_lambda11_subcases().expect("Λ_11(10) has three subcases");
    out.push(entry(
        "Λ_11(10)",
        &sub,
        Candidate,
        ReductionChain,
        "quadratic reduction modulo the planes of two of the triangles leaves two disjoint triangles",
        Some("Λ(6)"),
        Some(2),
    ));
    out
}

/// Canonical form → catalog ids, in catalog order.
///
/// Λ_10(10) and the Λ_11(10) subcase whose matching is a transposition are
/// the same class, so that form carries two ids.
pub fn catalog_index(catalog: &[CatalogEntry]) -> BTreeMap<CanonicalForm, Vec<String>> {
    let mut out: BTreeMap<CanonicalForm, Vec<String>> = BTreeMap::new();
    for e in catalog {
        for g in &e.graphs {
            let ids = out.entry(g.clone()).or_default();
            if !ids.contains(&e.id) {
                ids.push(e.id.clone());
            }
        }
    }
    out
}

/// Catalog id of the class containing `a`; the first one if several.
pub fn match_catalog(a: &Arrangement) -> Option<String> {
    match_catalog_all(a).into_iter().next()
}

/// Every catalog id whose class contains `a`.
pub fn match_catalog_all(a: &Arrangement) -> Vec<String> {
    let c = canonical_form(a);
    builtin_catalog().into_iter().filter(|e| e.graphs.contains(&c)).map(|e| e.id).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArgumentTag {
    /// A fibration has a line of the arrangement as fibre component or
    /// section, with a count that cannot be met.
    FibrationComponent,
    /// `h⁰(𝓛)` is large enough to force a member through chosen points,
    /// which then splits off too many lines.
    H0Splitting,
    /// Meeting points on a few lines cannot be matched with the lines
    /// available without forcing coplanarity.
    PlanarCount,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    pub n: usize,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Citation {
    /// Which case of the stratum analysis applies.
    pub case: String,
    /// A formula fragment from the source argument, verbatim, for auditing.
    pub anchor: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExclusionEntry {
    pub graph6: CanonicalForm,
    pub stratum: Stratum,
    pub citation: Citation,
    pub argument_tag: ArgumentTag,
    pub argument: String,
    /// Lines (labels of the canonical graph) to force into a member of `|𝓛|`;
    /// [`audit_entry`] replays the resulting deduction.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub forced_lines: Vec<String>,
}

/// A survivor for which no exclusion is known. Listed for the record; it
/// still classifies as unknown.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpenCase {
    pub graph6: CanonicalForm,
    pub stratum: Stratum,
    pub case: String,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ledger {
    pub version: u32,
    pub entries: Vec<ExclusionEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub open: Vec<OpenCase>,
}

const BUILTIN_LEDGER: &str = include_str!("../data/ledger.json");

/// The shipped exclusion ledger.
pub fn builtin_ledger() -> Ledger {
    parse_ledger(BUILTIN_LEDGER).expect("shipped ledger is valid")
}

/// Parse a ledger and check that each entry's graph is canonical and lies in
/// its stated stratum.
pub fn parse_ledger(text: &str) -> Result<Ledger, CatalogError> {
    let ledger: Ledger = serde_json::from_str(text)?;
    let strata = ledger
        .entries
        .iter()
        .map(|e| (&e.graph6, &e.stratum))
        .chain(ledger.open.iter().map(|o| (&o.graph6, &o.stratum)));
    let mut seen = BTreeSet::new();
    for (graph6, stratum) in strata {
        let g = graph6.as_str();
        let a = decode_graph6(g).map_err(|source| CatalogError::LedgerGraph { graph6: g.into(), source })?;
        let bad = |msg: String| CatalogError::LedgerEntry { graph6: g.into(), msg };
        if canonical_form(&a) != *graph6 {
            return Err(bad("not in canonical form".into()));
        }
        if a.n() != stratum.n || a.edge_count() != stratum.k {
            return Err(bad(format!("graph has (n, k) = ({}, {})", a.n(), a.edge_count())));
        }
        if !seen.insert(graph6) {
            return Err(bad("listed twice".into()));
        }
    }
    Ok(ledger)
}

/// Replay an entry's forced-line derivation. Succeeds when forcing its lines
/// into a member of `|𝓛|` ends in a contradiction.
pub fn audit_entry(e: &ExclusionEntry) -> Result<DeductionTrace, CatalogError> {
    let g = e.graph6.as_str();
    let bad = |msg: String| CatalogError::LedgerEntry { graph6: g.into(), msg };
    let a = decode_graph6(g).map_err(|source| CatalogError::LedgerGraph { graph6: g.into(), source })?;
    if e.forced_lines.is_empty() {
        return Err(bad("no forced lines to replay".into()));
    }
    let forced = e
        .forced_lines
        .iter()
        .map(|l| {
            l.strip_prefix('L')
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|&i| (1..=a.n()).contains(&i))
                .map(|i| i - 1)
                .ok_or_else(|| bad(format!("bad line label {l:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let trace = deduce_through(&a, &forced);
    match trace.outcome {
        Outcome::Contradiction => Ok(trace),
        other => Err(bad(format!(
            "forcing {} ends {:?}: {}",
            e.forced_lines.join("+"),
            other,
            trace.last().map(|s| s.justification.as_str()).unwrap_or("")
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Matched {
    pub graph6: CanonicalForm,
    pub id: String,
    /// Further ids of the same class.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub also: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Excluded {
    pub graph6: CanonicalForm,
    pub case: String,
    pub argument_tag: ArgumentTag,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub matched: Vec<Matched>,
    pub excluded: Vec<Excluded>,
    pub unknown: Vec<CanonicalForm>,
}

impl Classification {
    pub fn matched_ids(&self) -> BTreeSet<&str> {
        self.matched.iter().flat_map(|m| std::iter::once(&m.id).chain(&m.also)).map(String::as_str).collect()
    }

    pub fn len(&self) -> usize {
        self.matched.len() + self.excluded.len() + self.unknown.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Partition survivors into catalog matches, ledger exclusions and the rest.
/// Catalog matches take precedence; inputs are canonicalized first, so any
/// labeling works.
pub fn classify_survivors<'a>(
    survivors: impl IntoIterator<Item = &'a Arrangement>,
    catalog: &[CatalogEntry],
    ledger: &Ledger,
) -> Classification {
    let index = catalog_index(catalog);
    let excluded: BTreeMap<&CanonicalForm, &ExclusionEntry> = ledger.entries.iter().map(|e| (&e.graph6, e)).collect();
    let mut out = Classification::default();
    for a in survivors {
        let c = canonical_form(a);
        if let Some(ids) = index.get(&c) {
            out.matched.push(Matched { graph6: c, id: ids[0].clone(), also: ids[1..].to_vec() });
        } else if let Some(e) = excluded.get(&c) {
            out.excluded.push(Excluded { graph6: c, case: e.citation.case.clone(), argument_tag: e.argument_tag });
        } else {
            out.unknown.push(c);
        }
    }
    out
}
