//! Deciding whether the bicircular matroid of a multigraph is a lattice path
//! matroid, by graph family membership, by excluded minors, or by the
//! exhaustive oracle, and comparing the three.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bicircular::{bicircular, BicircularError};
use crate::catalog::{family_member, has_excluded_bicircular_minor, CatalogError, ExcludedMinorName, FamilyWitness};
use crate::latticepath::{is_lpm, BoundedPathPair, LatticePath, LpmError, LpmWitness, MAX_ORACLE_GROUND};
use crate::matroid::{MinorCertificate, MAX_GROUND};
use crate::multigraph::{EdgeId, Multigraph};

/// Default edge budget for the excluded-minor route.
pub const DEFAULT_MINOR_BUDGET: usize = 12;

/// Largest graph `cross_check` accepts.
pub const CROSS_CHECK_MAX_EDGES: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecognizerError {
    #[error(
        "the bicircular matroid is not connected, so the family characterisation does not apply; \
         decide each connected component separately (per-component mode)"
    )]
    NotConnected,
    #[error("{edges} edges exceed the budget of {budget} for this route")]
    Budget { edges: usize, budget: usize },
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Bicircular(#[from] BicircularError),
    #[error(transparent)]
    Lpm(#[from] LpmError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
}

impl Verdict {
    fn from(yes: bool) -> Verdict {
        if yes {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Verdict::Yes
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Family,
    ExcludedMinor,
    Oracle,
}

/// Why family matching failed, in terms of the block structure and the
/// smoothed graph it inspected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchTrace {
    pub blocks: usize,
    pub block_tree_is_path: bool,
    pub middle_blocks_have_two_vertices: bool,
    /// Vertex count after smoothing, for a single block.
    pub smoothed_vertices: Option<usize>,
    pub reason: String,
}

/// The decision for one connected piece of a disconnected matroid.
#[derive(Clone, Debug, Serialize)]
pub struct ComponentDecision {
    pub edges: Vec<EdgeId>,
    pub decision: Decision,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    Family { witness: FamilyWitness },
    FamilyMiss { trace: MatchTrace },
    ExcludedMinor { name: ExcludedMinorName, embedding: MinorCertificate },
    /// No excluded minor embeds; the search itself is the evidence.
    MinorFree { searched: Vec<ExcludedMinorName> },
    PathPair { witness: LpmWitness },
    /// The oracle found no path pair for the named component.
    NoPathPair { component: Vec<EdgeId> },
    PerComponent { parts: Vec<ComponentDecision> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectivityReport {
    pub matroid_connected: bool,
    /// Number of connected components of the matroid, when it was built.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub components: Option<usize>,
    /// Set when the verdict conjoins per-component decisions (the
    /// disjoint-union extension).
    pub per_component: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Decision {
    pub verdict: Verdict,
    pub route: Route,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub excluded: Option<ExcludedMinorName>,
    pub certificate: Certificate,
    pub connectivity: ConnectivityReport,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DecideOptions {
    /// Decide each connected component of a disconnected matroid and conjoin.
    pub per_component: bool,
}

fn empty_witness() -> LpmWitness {
    let empty = LatticePath::new(Vec::new());
    let pair = BoundedPathPair::new(empty.clone(), empty).expect("empty paths are bounded");
    LpmWitness { pair, order: Vec::new() }
}

fn trace_of(g: &Multigraph) -> MatchTrace {
    let Ok(bd) = g.block_structure() else {
        return MatchTrace {
            blocks: 0,
            block_tree_is_path: false,
            middle_blocks_have_two_vertices: false,
            smoothed_vertices: None,
            reason: "graph is not connected".into(),
        };
    };
    let blocks = bd.blocks.len();
    let smoothed_vertices = (blocks <= 1).then(|| g.smooth().graph.vertex_count());
    let reason = if blocks <= 1 {
        "the smoothed block matches no template".to_string()
    } else if !bd.is_path {
        "the block tree is not a path".to_string()
    } else if !bd.middle_blocks_have_two_vertices {
        "a middle block has more than two vertices".to_string()
    } else {
        "an end block has a shape no end template allows".to_string()
    };
    MatchTrace {
        blocks,
        block_tree_is_path: bd.is_path,
        middle_blocks_have_two_vertices: bd.middle_blocks_have_two_vertices,
        smoothed_vertices,
        reason,
    }
}

/// The family decision for a graph whose bicircular matroid is connected.
fn family_decision(g: &Multigraph) -> Result<Decision, RecognizerError> {
    let connectivity = ConnectivityReport { matroid_connected: true, components: None, per_component: false };
    if g.edge_count() == 0 {
        return Ok(Decision {
            verdict: Verdict::Yes,
            route: Route::Family,
            family: None,
            excluded: None,
            certificate: Certificate::PathPair { witness: empty_witness() },
            connectivity,
        });
    }
    let core = g.without_isolated_vertices();
    Ok(match family_member(&core)? {
        Some(witness) => Decision {
            verdict: Verdict::Yes,
            route: Route::Family,
            family: Some(witness.family()),
            excluded: None,
            certificate: Certificate::Family { witness },
            connectivity,
        },
        None => Decision {
            verdict: Verdict::No,
            route: Route::Family,
            family: None,
            excluded: None,
            certificate: Certificate::FamilyMiss { trace: trace_of(&core) },
            connectivity,
        },
    })
}

/// Splits `g` along the connected components of its bicircular matroid and
/// decides each piece with `decide`.
fn per_component(
    g: &Multigraph,
    route: Route,
    decide: impl Fn(&Multigraph) -> Result<Decision, RecognizerError>,
) -> Result<Decision, RecognizerError> {
    if g.edge_count() > MAX_GROUND {
        return Err(RecognizerError::Budget { edges: g.edge_count(), budget: MAX_GROUND });
    }
    let m = bicircular(g)?;
    let comps = m.components();
    let mut parts = Vec::with_capacity(comps.len());
    for edges in comps {
        let piece = g.edge_subgraph(&edges).map_err(BicircularError::from)?.without_isolated_vertices();
        parts.push(ComponentDecision { edges, decision: decide(&piece)? });
    }
    let yes = parts.iter().all(|p| p.decision.verdict.is_yes());
    Ok(Decision {
        verdict: Verdict::from(yes),
        route,
        family: None,
        excluded: parts.iter().find_map(|p| p.decision.excluded),
        certificate: Certificate::PerComponent { parts },
        connectivity: ConnectivityReport {
            matroid_connected: m.is_connected(),
            components: Some(m.components().len()),
            per_component: true,
        },
    })
}

/// Family route: `B(G)` is a lattice path matroid exactly when `G` lies in
/// one of the five families. Refuses graphs whose bicircular matroid is
/// disconnected.
pub fn decide_lpm(g: &Multigraph) -> Result<Decision, RecognizerError> {
    decide_lpm_with(g, DecideOptions::default())
}

pub fn decide_lpm_with(g: &Multigraph, opts: DecideOptions) -> Result<Decision, RecognizerError> {
    if g.bicircular_is_connected() {
        return family_decision(g);
    }
    if !opts.per_component {
        return Err(RecognizerError::NotConnected);
    }
    per_component(g, Route::Family, family_decision)
}

/// Excluded-minor route with the default edge budget.
pub fn decide_lpm_via_minors(g: &Multigraph) -> Result<Decision, RecognizerError> {
    decide_lpm_via_minors_within(g, DEFAULT_MINOR_BUDGET)
}

/// Excluded-minor route: `B(G)` is a lattice path matroid exactly when none
/// of the eight excluded minors embeds in it.
pub fn decide_lpm_via_minors_within(g: &Multigraph, budget: usize) -> Result<Decision, RecognizerError> {
    if g.edge_count() > budget.min(MAX_GROUND) {
        return Err(RecognizerError::Budget { edges: g.edge_count(), budget: budget.min(MAX_GROUND) });
    }
    let m = bicircular(g)?;
    let connectivity = ConnectivityReport {
        matroid_connected: m.is_connected(),
        components: Some(m.components().len()),
        per_component: false,
    };
    Ok(match has_excluded_bicircular_minor(&m) {
        Some((name, embedding)) => Decision {
            verdict: Verdict::No,
            route: Route::ExcludedMinor,
            family: None,
            excluded: Some(name),
            certificate: Certificate::ExcludedMinor { name, embedding },
            connectivity,
        },
        None => Decision {
            verdict: Verdict::Yes,
            route: Route::ExcludedMinor,
            family: None,
            excluded: None,
            certificate: Certificate::MinorFree { searched: ExcludedMinorName::ALL.to_vec() },
            connectivity,
        },
    })
}

/// Oracle route: match `B(G)` against every lattice path matroid of its size.
pub fn decide_lpm_via_oracle(g: &Multigraph) -> Result<Decision, RecognizerError> {
    if g.edge_count() > MAX_ORACLE_GROUND {
        return Err(RecognizerError::Budget { edges: g.edge_count(), budget: MAX_ORACLE_GROUND });
    }
    let m = bicircular(g)?;
    let connectivity = ConnectivityReport {
        matroid_connected: m.is_connected(),
        components: Some(m.components().len()),
        per_component: false,
    };
    let (verdict, certificate) = match is_lpm(&m)? {
        Some(witness) => (Verdict::Yes, Certificate::PathPair { witness }),
        None => {
            // name the first component without a presentation
            let component = m
                .components()
                .into_iter()
                .find(|c| m.restrict(c).ok().and_then(|r| is_lpm(&r).ok().flatten()).is_none())
                .unwrap_or_default();
            (Verdict::No, Certificate::NoPathPair { component })
        }
    };
    Ok(Decision { verdict, route: Route::Oracle, family: None, excluded: None, certificate, connectivity })
}

/// Outcome of one route inside a cross-check: a verdict, or the reason the
/// route declined.
#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum RouteOutcome {
    Decided(Decision),
    Refused { error: String },
}

impl RouteOutcome {
    fn from(r: Result<Decision, RecognizerError>) -> RouteOutcome {
        match r {
            Ok(d) => RouteOutcome::Decided(d),
            Err(e) => RouteOutcome::Refused { error: e.to_string() },
        }
    }

    pub fn verdict(&self) -> Option<Verdict> {
        match self {
            RouteOutcome::Decided(d) => Some(d.verdict),
            RouteOutcome::Refused { .. } => None,
        }
    }
}

/// The three routes run on one graph.
#[derive(Clone, Debug, Serialize)]
pub struct CrossCheckReport {
    pub graph: String,
    pub matroid_connected: bool,
    pub family: RouteOutcome,
    pub minors: RouteOutcome,
    pub oracle: RouteOutcome,
    pub agree: bool,
}

/// Runs all three routes. The family route decides a disconnected matroid
/// per component so that every route has a verdict to compare.
pub fn cross_check(g: &Multigraph) -> Result<CrossCheckReport, RecognizerError> {
    if g.edge_count() > CROSS_CHECK_MAX_EDGES {
        return Err(RecognizerError::Budget { edges: g.edge_count(), budget: CROSS_CHECK_MAX_EDGES });
    }
    let family = RouteOutcome::from(decide_lpm_with(g, DecideOptions { per_component: true }));
    let minors = RouteOutcome::from(decide_lpm_via_minors(g));
    let oracle = RouteOutcome::from(decide_lpm_via_oracle(g));
    let verdicts = [family.verdict(), minors.verdict(), oracle.verdict()];
    let agree = verdicts[0].is_some() && verdicts.iter().all(|v| *v == verdicts[0]);
    Ok(CrossCheckReport {
        graph: g.to_mg(),
        matroid_connected: g.bicircular_is_connected(),
        family,
        minors,
        oracle,
        agree,
    })
}

/// Summary of a cross-check over a population of graphs.
#[derive(Clone, Debug, Serialize)]
pub struct PopulationReport {
    pub checked: usize,
    pub yes: usize,
    pub agreements: usize,
    /// Reports that disagree, in input order.
    pub disagreements: Vec<CrossCheckReport>,
}

/// Cross-checks every graph in parallel; disagreements come back in input
/// order regardless of scheduling.
pub fn cross_check_all(graphs: &[Multigraph]) -> Result<PopulationReport, RecognizerError> {
    let reports: Vec<CrossCheckReport> = graphs.par_iter().map(cross_check).collect::<Result<_, _>>()?;
    let yes = reports.iter().filter(|r| r.oracle.verdict() == Some(Verdict::Yes)).count();
    let agreements = reports.iter().filter(|r| r.agree).count();
    Ok(PopulationReport {
        checked: reports.len(),
        yes,
        agreements,
        disagreements: reports.into_iter().filter(|r| !r.agree).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{excluded_minor, family_generate, FamilySpec};

    fn spec(json: &str) -> FamilySpec {
        serde_json::from_str(json).unwrap()
    }

    #[test]
    fn k4_is_in_f0() {
        let k4 = Multigraph::from_edges(&[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]);
        let d = decide_lpm(&k4).unwrap();
        assert_eq!((d.verdict, d.route, d.family), (Verdict::Yes, Route::Family, Some("F0")));
    }

    #[test]
    fn g1_210_is_in_f1() {
        let g = family_generate(&spec(r#"{"family":"F1","r":2,"d":1,"b":0}"#)).unwrap().graph;
        let d = decide_lpm(&g).unwrap();
        assert!(d.verdict.is_yes());
        assert_eq!(d.family, Some("F1"));
    }

    #[test]
    fn w3_is_refused_by_every_route() {
        let w3 = &excluded_minor(ExcludedMinorName::W3).0;
        let d = decide_lpm(w3).unwrap();
        assert_eq!(d.verdict, Verdict::No);
        assert!(matches!(d.certificate, Certificate::FamilyMiss { .. }));
        let r = cross_check(w3).unwrap();
        assert!(r.agree);
    }

    #[test]
    fn triple_triangle_names_b1_with_identity_embedding() {
        let g = &excluded_minor(ExcludedMinorName::B1).0;
        let d = decide_lpm_via_minors(g).unwrap();
        assert_eq!(d.verdict, Verdict::No);
        match d.certificate {
            Certificate::ExcludedMinor { name, embedding } => {
                assert_eq!(name, ExcludedMinorName::B1);
                assert!(embedding.delete.is_empty() && embedding.contract.is_empty());
            }
            other => panic!("unexpected certificate {other:?}"),
        }
    }

    #[test]
    fn theta_is_minor_free() {
        let theta = Multigraph::from_edges(&[(1, 2), (2, 3), (1, 4), (4, 3), (1, 3)]);
        assert!(decide_lpm_via_minors(&theta).unwrap().verdict.is_yes());
    }

    #[test]
    fn three_subdivided_k4_edges_contain_c24() {
        let mut k4 = Multigraph::from_edges(&[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]);
        let ids = k4.edge_ids();
        for e in [ids[0], ids[1], ids[5]] {
            k4 = k4.subdivide_edge(e, 2).unwrap().0;
        }
        let d = decide_lpm_via_minors(&k4).unwrap();
        assert_eq!(d.excluded, Some(ExcludedMinorName::C24));
        assert_eq!(decide_lpm(&k4).unwrap().verdict, Verdict::No);
    }

    #[test]
    fn disconnected_matroid_is_refused_unless_split() {
        // a pendant edge is a coloop
        let g = Multigraph::from_edges(&[(1, 2), (1, 2), (1, 2), (2, 3)]);
        assert_eq!(decide_lpm(&g).unwrap_err(), RecognizerError::NotConnected);
        let d = decide_lpm_with(&g, DecideOptions { per_component: true }).unwrap();
        assert!(d.verdict.is_yes());
        assert!(d.connectivity.per_component);
        assert_eq!(d.connectivity.components, Some(2));
    }

    #[test]
    fn two_k3_agrees_three_ways() {
        let g = family_generate(&spec(r#"{"family":"F2","r":1,"b":1}"#)).unwrap().graph;
        let r = cross_check(&g).unwrap();
        assert!(r.agree);
        assert_eq!(r.oracle.verdict(), Some(Verdict::Yes));
    }

    #[test]
    fn oracle_certificates_replay() {
        let g = Multigraph::from_edges(&[(1, 2), (1, 2), (2, 3), (3, 3), (1, 3)]);
        let d = decide_lpm_via_oracle(&g).unwrap();
        let Certificate::PathPair { witness } = d.certificate else { panic!("expected a path pair") };
        assert_eq!(witness.replay().unwrap(), bicircular(&g).unwrap());
    }

    #[test]
    fn budgets_are_enforced() {
        let edges: Vec<(u32, u32)> = (0..13).map(|_| (1, 2)).collect();
        let g = Multigraph::from_edges(&edges);
        assert!(matches!(decide_lpm_via_minors(&g), Err(RecognizerError::Budget { .. })));
        assert!(matches!(cross_check(&g), Err(RecognizerError::Budget { .. })));
    }

    #[test]
    fn decision_json_has_the_summary_keys() {
        let k4 = Multigraph::from_edges(&[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]);
        let v = serde_json::to_value(decide_lpm(&k4).unwrap()).unwrap();
        assert_eq!(v["verdict"], "yes");
        assert_eq!(v["route"], "family");
        assert_eq!(v["family"], "F0");
    }
}
