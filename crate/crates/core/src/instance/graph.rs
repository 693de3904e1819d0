use std::fmt;
use std::str::FromStr;

use super::{check_count, header, records, Meter, Vertex};
use crate::error::{domain, Error, Result};

/// Metered, read-only view of an undirected simple graph.
///
/// `ith_neighbor` is the only primitive; everything else is derived from it
/// so that implicit graphs (intersection graphs, stage graphs) plug into the
/// same algorithms.
pub trait GraphAccess {
    /// Vertices are `1..=order()`.
    fn order(&self) -> usize;

    /// The `i`-th neighbour of `v` (1-based) in adjacency order.
    fn ith_neighbor(&self, v: Vertex, i: usize, meter: &Meter) -> Option<Vertex>;

    /// The `j`-th edge (1-based) in the instance's edge order.
    ///
    /// The default walks vertices in id order and reports each edge at its
    /// smaller endpoint.
    fn edge_at(&self, j: usize, meter: &Meter) -> Option<(Vertex, Vertex)> {
        let _f = meter.frame(4);
        let mut seen = 0;
        for u in 1..=self.order() as Vertex {
            let mut i = 1;
            while let Some(v) = self.ith_neighbor(u, i, meter) {
                if u < v {
                    seen += 1;
                    if seen == j {
                        return Some((u, v));
                    }
                }
                i += 1;
            }
        }
        None
    }
}

pub fn degree<G: GraphAccess + ?Sized>(g: &G, v: Vertex, meter: &Meter) -> usize {
    let _f = meter.frame(1);
    let mut i = 0;
    while g.ith_neighbor(v, i + 1, meter).is_some() {
        i += 1;
    }
    i
}

/// Position (1-based) of `target` in the adjacency list of `v`.
pub fn neighbor_position<G: GraphAccess + ?Sized>(
    g: &G,
    v: Vertex,
    target: Vertex,
    meter: &Meter,
) -> Option<usize> {
    let _f = meter.frame(1);
    let mut i = 1;
    while let Some(w) = g.ith_neighbor(v, i, meter) {
        if w == target {
            return Some(i);
        }
        i += 1;
    }
    None
}

pub fn adjacent<G: GraphAccess + ?Sized>(g: &G, u: Vertex, v: Vertex, meter: &Meter) -> bool {
    neighbor_position(g, u, v, meter).is_some()
}

pub fn max_degree<G: GraphAccess + ?Sized>(g: &G, meter: &Meter) -> usize {
    let _f = meter.frame(2);
    (1..=g.order() as Vertex).map(|v| degree(g, v, meter)).max().unwrap_or(0)
}

/// Undirected simple graph in CSR form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphInstance {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    offsets: Vec<usize>,
    adj: Vec<Vertex>,
}

impl GraphInstance {
    /// Build from an edge list. Adjacency lists follow edge order.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let edges: Vec<_> = edges.into_iter().collect();
        let mut deg = vec![0usize; n];
        for (j, &(u, v)) in edges.iter().enumerate() {
            if u == 0 || v == 0 || u as usize > n || v as usize > n {
                return Err(domain(format!("edge {} = ({u},{v}) outside 1..={n}", j + 1)));
            }
            if u == v {
                return Err(domain(format!("self-loop at {u}")));
            }
            deg[u as usize - 1] += 1;
            deg[v as usize - 1] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &deg {
            offsets.push(offsets.last().unwrap() + d);
        }
        // deg becomes the fill cursor, then the duplicate stamp
        let mut fill = deg;
        fill.copy_from_slice(&offsets[..n]);
        let mut adj = vec![0; offsets[n]];
        for &(u, v) in &edges {
            adj[fill[u as usize - 1]] = v;
            fill[u as usize - 1] += 1;
            adj[fill[v as usize - 1]] = u;
            fill[v as usize - 1] += 1;
        }
        let g = GraphInstance { n, edges, offsets, adj };
        let mut stamp = fill;
        stamp.iter_mut().for_each(|x| *x = 0);
        for v in 1..=n {
            for &w in g.neighbors(v as Vertex) {
                if stamp[w as usize - 1] == v {
                    return Err(domain(format!("duplicate edge ({v},{w})")));
                }
                stamp[w as usize - 1] = v;
            }
        }
        Ok(g)
    }

    pub fn empty(n: usize) -> Self {
        GraphInstance { n, edges: Vec::new(), offsets: vec![0; n + 1], adj: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        1..=self.n as Vertex
    }

    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        let i = v as usize - 1;
        &self.adj[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        let i = v as usize - 1;
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn max_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.neighbors(a).contains(&b)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut recs = records(text);
        let head = header(&mut recs, "p", 2)?;
        let (n, m) = (head.num(0)?, head.num(1)?);
        let mut edges = Vec::with_capacity(m);
        let mut last = head.line;
        for rec in recs {
            last = rec.line;
            if rec.tag != "e" {
                return Err(rec.err(format!("expected edge line, found {:?}", rec.tag)));
            }
            rec.expect_len(2)?;
            let (u, v) = (rec.id(0, n, "vertex")?, rec.id(1, n, "vertex")?);
            if u == v {
                return Err(rec.err(format!("self-loop at {u}")));
            }
            edges.push((u, v));
            if edges.len() > m {
                return Err(rec.err(format!("more than the {m} declared edges")));
            }
        }
        check_count(m, edges.len(), last, "edges")?;
        GraphInstance::from_edges(n, edges).map_err(|e| match e {
            Error::Domain(message) => Error::Parse { line: last, message },
            other => other,
        })
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for GraphInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p {} {}", self.n, self.m())?;
        for (u, v) in &self.edges {
            writeln!(f, "e {u} {v}")?;
        }
        Ok(())
    }
}

impl FromStr for GraphInstance {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl GraphAccess for GraphInstance {
    fn order(&self) -> usize {
        self.n
    }

    #[inline(always)]
    fn ith_neighbor(&self, v: Vertex, i: usize, meter: &Meter) -> Option<Vertex> {
        let k = v as usize - 1;
        let (lo, hi) = (self.offsets[k], self.offsets[k + 1]);
        meter.touch((lo + i.saturating_sub(1).min(hi - lo)) as u64);
        if i >= 1 && lo + i <= hi {
            Some(self.adj[lo + i - 1])
        } else {
            None
        }
    }

    fn edge_at(&self, j: usize, meter: &Meter) -> Option<(Vertex, Vertex)> {
        meter.touch((self.adj.len() + j) as u64);
        self.edges.get(j.wrapping_sub(1)).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjacency_follows_edge_order() {
        let g = GraphInstance::parse("p 4 3\ne 1 3\ne 1 2\ne 4 1\n").unwrap();
        assert_eq!(g.neighbors(1), &[3, 2, 4]);
        let m = Meter::new();
        assert_eq!(g.ith_neighbor(1, 2, &m), Some(2));
        assert_eq!(g.ith_neighbor(1, 4, &m), None);
        assert_eq!(degree(&g, 1, &m), 3);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = GraphInstance::parse("c hi\np 3 1\ne 1 4\n").unwrap_err();
        assert_eq!(err, Error::Parse { line: 3, message: "vertex 4 outside 1..=3".into() });
        assert!(matches!(
            GraphInstance::parse("p 3 2\ne 1 2\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(GraphInstance::parse("p 3 2\ne 1 2\ne 2 1\n").is_err());
        assert!(GraphInstance::parse("p 3 1\ne 2 2\n").is_err());
    }

    #[test]
    fn text_round_trip() {
        let g = GraphInstance::from_edges(5, [(1, 2), (5, 3), (2, 3)]).unwrap();
        assert_eq!(GraphInstance::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn default_edge_order_scans_smaller_endpoint() {
        struct Wrap(GraphInstance);
        impl GraphAccess for Wrap {
            fn order(&self) -> usize {
                self.0.n()
            }
            fn ith_neighbor(&self, v: Vertex, i: usize, m: &Meter) -> Option<Vertex> {
                self.0.ith_neighbor(v, i, m)
            }
        }
        let w = Wrap(GraphInstance::from_edges(3, [(2, 3), (1, 2)]).unwrap());
        let m = Meter::new();
        assert_eq!(w.edge_at(1, &m), Some((1, 2)));
        assert_eq!(w.edge_at(2, &m), Some((2, 3)));
        assert_eq!(w.edge_at(3, &m), None);
    }
}
