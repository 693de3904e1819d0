//! Finite forbidden-pattern catalog for the deletion problems.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use crate::error::{domain, Error, Result};
use crate::exact::Instance;
use crate::instance::{DigraphInstance, GraphInstance, SetFamilyInstance, Vertex};

/// Small induced patterns, each recognized by a hard-coded test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pattern {
    K2,
    K3,
    P3,
    P4,
    TwoK2,
    C4,
    C5,
    /// Directed triangle.
    DirectedC3,
}

impl Pattern {
    pub fn size(self) -> usize {
        match self {
            Pattern::K2 => 2,
            Pattern::K3 | Pattern::P3 | Pattern::DirectedC3 => 3,
            Pattern::P4 | Pattern::TwoK2 | Pattern::C4 => 4,
            Pattern::C5 => 5,
        }
    }

    /// Whether `g[s]` is isomorphic to this (undirected) pattern.
    pub fn matches_graph(self, g: &GraphInstance, s: &[Vertex]) -> bool {
        if s.len() != self.size() || self == Pattern::DirectedC3 {
            return false;
        }
        let mut deg = [0usize; 5];
        let mut edges = 0;
        for (a, b) in (0..s.len()).tuple_combinations() {
            if g.has_edge(s[a], s[b]) {
                deg[a] += 1;
                deg[b] += 1;
                edges += 1;
            }
        }
        let deg = &mut deg[..s.len()];
        deg.sort_unstable();
        match self {
            Pattern::K2 => edges == 1,
            Pattern::K3 => edges == 3,
            Pattern::P3 => edges == 2,
            Pattern::P4 => deg == [1, 1, 2, 2],
            Pattern::TwoK2 => deg == [1, 1, 1, 1],
            Pattern::C4 => deg == [2, 2, 2, 2],
            // 2-regular on five vertices has to be a single 5-cycle
            Pattern::C5 => deg == [2, 2, 2, 2, 2],
            Pattern::DirectedC3 => unreachable!(),
        }
    }

    /// Whether `d[s]` is a directed triangle.
    pub fn matches_digraph(self, d: &DigraphInstance, s: &[Vertex]) -> bool {
        if self != Pattern::DirectedC3 || s.len() != 3 {
            return false;
        }
        let (a, b, c) = (s[0], s[1], s[2]);
        (d.has_arc(a, b) && d.has_arc(b, c) && d.has_arc(c, a))
            || (d.has_arc(a, c) && d.has_arc(c, b) && d.has_arc(b, a))
    }
}

/// Vertex-deletion problems whose target class has a finite forbidden set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeletionProblem {
    VertexCover,
    TriangleVd,
    ClusterVd,
    CographVd,
    ThresholdVd,
    SplitVd,
    TournamentFvs,
}

impl DeletionProblem {
    pub const ALL: [DeletionProblem; 7] = [
        DeletionProblem::VertexCover,
        DeletionProblem::TriangleVd,
        DeletionProblem::ClusterVd,
        DeletionProblem::CographVd,
        DeletionProblem::ThresholdVd,
        DeletionProblem::SplitVd,
        DeletionProblem::TournamentFvs,
    ];

    pub fn patterns(self) -> &'static [Pattern] {
        match self {
            DeletionProblem::VertexCover => &[Pattern::K2],
            DeletionProblem::TriangleVd => &[Pattern::K3],
            DeletionProblem::ClusterVd => &[Pattern::P3],
            DeletionProblem::CographVd => &[Pattern::P4],
            DeletionProblem::ThresholdVd => &[Pattern::TwoK2, Pattern::P4, Pattern::C4],
            DeletionProblem::SplitVd => &[Pattern::TwoK2, Pattern::C4, Pattern::C5],
            DeletionProblem::TournamentFvs => &[Pattern::DirectedC3],
        }
    }

    /// Largest pattern size.
    pub fn d(self) -> usize {
        self.patterns().iter().map(|p| p.size()).max().unwrap_or(0)
    }

    pub fn name(self) -> &'static str {
        match self {
            DeletionProblem::VertexCover => "vc",
            DeletionProblem::TriangleVd => "triangle-vd",
            DeletionProblem::ClusterVd => "cluster-vd",
            DeletionProblem::CographVd => "cograph-vd",
            DeletionProblem::ThresholdVd => "threshold-vd",
            DeletionProblem::SplitVd => "split-vd",
            DeletionProblem::TournamentFvs => "tournament-fvs",
        }
    }

    pub fn is_directed(self) -> bool {
        self == DeletionProblem::TournamentFvs
    }
}

impl fmt::Display for DeletionProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DeletionProblem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DeletionProblem::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| domain(format!("unknown deletion problem '{s}'")))
    }
}

/// The family of vertex sets inducing a pattern of `problem`, over ground set `V`.
///
/// Sets come out by size, then lexicographically. A vertex set hits this
/// family iff deleting it leaves no forbidden induced pattern.
pub fn forbidden_family(instance: Instance<'_>, problem: DeletionProblem) -> Result<SetFamilyInstance> {
    let patterns = problem.patterns();
    let d = problem.d();
    let mut sets = Vec::new();
    match (instance, problem.is_directed()) {
        (Instance::Digraph(g), true) => {
            if !g.is_tournament() {
                return Err(domain("tournament-fvs needs a tournament"));
            }
            for s in (1..=g.n() as Vertex).combinations(3) {
                if Pattern::DirectedC3.matches_digraph(g, &s) {
                    sets.push(s);
                }
            }
            SetFamilyInstance::new(g.n(), d, sets)
        }
        (Instance::Graph(g), false) => {
            for size in 1..=d {
                if !patterns.iter().any(|p| p.size() == size) {
                    continue;
                }
                for s in (1..=g.n() as Vertex).combinations(size) {
                    if patterns.iter().any(|p| p.matches_graph(g, &s)) {
                        sets.push(s);
                    }
                }
            }
            SetFamilyInstance::new(g.n(), d, sets)
        }
        _ => Err(domain(format!("{problem} does not apply to this instance"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sets(f: &SetFamilyInstance) -> Vec<Vec<u32>> {
        f.sets().map(<[u32]>::to_vec).collect()
    }

    #[test]
    fn catalog_examples() {
        let tri = GraphInstance::from_edges(3, [(1, 2), (2, 3), (1, 3)]).unwrap();
        let f = forbidden_family(Instance::Graph(&tri), DeletionProblem::VertexCover).unwrap();
        assert_eq!(sets(&f), vec![vec![1, 2], vec![1, 3], vec![2, 3]]);

        let k4 = GraphInstance::from_edges(4, (1..=4).tuple_combinations()).unwrap();
        let f = forbidden_family(Instance::Graph(&k4), DeletionProblem::TriangleVd).unwrap();
        assert_eq!(f.m(), 4);

        let p4 = GraphInstance::from_edges(4, [(1, 2), (2, 3), (3, 4)]).unwrap();
        let f = forbidden_family(Instance::Graph(&p4), DeletionProblem::ClusterVd).unwrap();
        assert_eq!(sets(&f), vec![vec![1, 2, 3], vec![2, 3, 4]]);
    }

    #[test]
    fn pattern_recognition() {
        let c5 = GraphInstance::from_edges(5, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]).unwrap();
        assert!(Pattern::C5.matches_graph(&c5, &[1, 2, 3, 4, 5]));
        assert!(Pattern::P4.matches_graph(&c5, &[1, 2, 3, 4]));
        assert!(!Pattern::C4.matches_graph(&c5, &[1, 2, 3, 4]));
        let m = GraphInstance::from_edges(4, [(1, 2), (3, 4)]).unwrap();
        assert!(Pattern::TwoK2.matches_graph(&m, &[1, 2, 3, 4]));
        let split = forbidden_family(Instance::Graph(&c5), DeletionProblem::SplitVd).unwrap();
        assert_eq!(split.m(), 1);
    }

    #[test]
    fn tournaments_only() {
        let cyc = DigraphInstance::from_arcs(3, [(1, 2), (2, 3), (3, 1)]).unwrap();
        let f = forbidden_family(Instance::Digraph(&cyc), DeletionProblem::TournamentFvs).unwrap();
        assert_eq!(sets(&f), vec![vec![1, 2, 3]]);
        let path = DigraphInstance::from_arcs(3, [(1, 2), (2, 3)]).unwrap();
        assert!(forbidden_family(Instance::Digraph(&path), DeletionProblem::TournamentFvs).is_err());
        assert!(forbidden_family(Instance::Digraph(&cyc), DeletionProblem::ClusterVd).is_err());
        assert_eq!("split-vd".parse::<DeletionProblem>().unwrap(), DeletionProblem::SplitVd);
        assert!("chordal-vd".parse::<DeletionProblem>().is_err());
    }
}
