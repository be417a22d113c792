//! The eight bicircular excluded minors for lattice path matroids and the
//! five generator-based graph families whose bicircular matroids are the
//! connected lattice path bicircular matroids.

mod member;
mod spec;

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::bicircular::bicircular;
use crate::matroid::{Matroid, MatroidError, MinorCertificate};
use crate::multigraph::{GraphError, Multigraph};

pub use member::{family_member, FamilyWitness};
pub use spec::{
    family_generate, ChainSpec, Colour, EndBlock, EndEdge, F0Template, F3Shape, FamilySpec, Role, Split,
    Subdivisions, TaggedGraph,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown excluded minor `{0}`")]
    UnknownName(String),
    #[error("invalid family spec: {0}")]
    InvalidSpec(String),
    #[error("no template edge accepts a {role} subdivision{}", edge.as_ref().map(|e| format!(" at {e}")).unwrap_or_default())]
    IllegalRole { role: Role, edge: Option<String> },
    #[error("graph is not connected")]
    Disconnected,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

/// The eight excluded minors, in the order minor searches try them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ExcludedMinorName {
    C24,
    W3,
    A3,
    R3,
    R4,
    D4,
    B1,
    S1,
}

impl ExcludedMinorName {
    pub const ALL: [ExcludedMinorName; 8] = [
        ExcludedMinorName::C24,
        ExcludedMinorName::W3,
        ExcludedMinorName::A3,
        ExcludedMinorName::R3,
        ExcludedMinorName::R4,
        ExcludedMinorName::D4,
        ExcludedMinorName::B1,
        ExcludedMinorName::S1,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExcludedMinorName::C24 => "C24",
            ExcludedMinorName::W3 => "W3",
            ExcludedMinorName::A3 => "A3",
            ExcludedMinorName::R3 => "R3",
            ExcludedMinorName::R4 => "R4",
            ExcludedMinorName::D4 => "D4",
            ExcludedMinorName::B1 => "B1",
            ExcludedMinorName::S1 => "S1",
        }
    }

    /// The presentation graph with the fewest loops.
    fn presentation(self) -> Multigraph {
        let edges: &[(u32, u32)] = match self {
            ExcludedMinorName::C24 => &C24_PANELS[1],
            ExcludedMinorName::W3 => &[(1, 2), (2, 3), (1, 3), (1, 1), (2, 2), (3, 3)],
            ExcludedMinorName::A3 => &[(1, 2), (3, 3), (2, 3), (2, 3), (1, 3), (1, 3)],
            ExcludedMinorName::R3 => &[(1, 2), (2, 3), (1, 3), (1, 1), (1, 1), (2, 2), (2, 2)],
            ExcludedMinorName::R4 => &[(1, 2), (1, 4), (2, 4), (1, 3), (1, 3), (4, 4), (4, 4)],
            ExcludedMinorName::D4 => &[(1, 5), (5, 2), (1, 4), (1, 4), (1, 4), (2, 4), (2, 4), (2, 4)],
            ExcludedMinorName::B1 => &[(1, 2), (1, 2), (1, 2), (2, 3), (2, 3), (2, 3), (1, 3), (1, 3), (1, 3)],
            ExcludedMinorName::S1 => &[(1, 2), (4, 3), (1, 5), (5, 4), (1, 3), (1, 3), (2, 4), (2, 4)],
        };
        Multigraph::from_edges(edges)
    }
}

impl fmt::Display for ExcludedMinorName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExcludedMinorName {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ExcludedMinorName::ALL
            .into_iter()
            .find(|n| n.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| CatalogError::UnknownName(s.to_string()))
    }
}

/// Four graphs on a centre 1 and leaves 2, 3, 4 with isomorphic bicircular
/// matroids: a star with a loop at each leaf, doubled spokes, and two mixed
/// forms.
const C24_PANELS: [[(u32, u32); 6]; 4] = [
    [(1, 2), (1, 3), (1, 4), (2, 2), (3, 3), (4, 4)],
    [(1, 2), (1, 2), (1, 3), (1, 3), (1, 4), (1, 4)],
    [(1, 2), (2, 2), (1, 3), (1, 3), (1, 4), (1, 4)],
    [(1, 2), (1, 3), (2, 2), (3, 3), (1, 4), (1, 4)],
];

/// The four presentations of `C24`.
pub fn c24_presentations() -> [Multigraph; 4] {
    C24_PANELS.map(|edges| Multigraph::from_edges(&edges))
}

/// Presentation graph and bicircular matroid of an excluded minor.
pub fn excluded_minor(name: ExcludedMinorName) -> &'static (Multigraph, Matroid) {
    static CACHE: OnceLock<Vec<(Multigraph, Matroid)>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        ExcludedMinorName::ALL
            .iter()
            .map(|n| {
                let g = n.presentation();
                let m = bicircular(&g).expect("presentations are small");
                (g, m)
            })
            .collect()
    });
    &all[name as usize]
}

/// The first excluded minor (in [`ExcludedMinorName::ALL`] order) that `m`
/// contains, with a certificate.
pub fn has_excluded_bicircular_minor(m: &Matroid) -> Option<(ExcludedMinorName, MinorCertificate)> {
    ExcludedMinorName::ALL.into_iter().find_map(|name| m.has_minor(&excluded_minor(name).1).map(|c| (name, c)))
}
