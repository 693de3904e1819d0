use std::fmt;
use std::str::FromStr;

use super::{check_count, header, records, GraphInstance, Meter, Vertex};
use crate::error::{domain, Error, Result};

/// Directed simple graph with out- and in-lists, both in arc order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigraphInstance {
    n: usize,
    arcs: Vec<(Vertex, Vertex)>,
    out_off: Vec<usize>,
    out: Vec<Vertex>,
    in_off: Vec<usize>,
    inc: Vec<Vertex>,
}

fn csr(n: usize, pairs: impl Iterator<Item = (Vertex, Vertex)> + Clone) -> (Vec<usize>, Vec<Vertex>) {
    let mut off = vec![0usize; n + 1];
    for (u, _) in pairs.clone() {
        off[u as usize] += 1;
    }
    for i in 0..n {
        off[i + 1] += off[i];
    }
    let mut fill = off.clone();
    let mut list = vec![0; off[n]];
    for (u, v) in pairs {
        list[fill[u as usize - 1]] = v;
        fill[u as usize - 1] += 1;
    }
    (off, list)
}

impl DigraphInstance {
    pub fn from_arcs(n: usize, arcs: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let arcs: Vec<_> = arcs.into_iter().collect();
        for &(u, v) in &arcs {
            if u == 0 || v == 0 || u as usize > n || v as usize > n {
                return Err(domain(format!("arc ({u},{v}) outside 1..={n}")));
            }
            if u == v {
                return Err(domain(format!("self-loop at {u}")));
            }
        }
        let (out_off, out) = csr(n, arcs.iter().copied());
        let (in_off, inc) = csr(n, arcs.iter().map(|&(u, v)| (v, u)));
        let d = DigraphInstance { n, arcs, out_off, out, in_off, inc };
        let mut stamp = vec![0 as Vertex; n + 1];
        for v in 1..=n as Vertex {
            for &w in d.out_neighbors(v) {
                if stamp[w as usize] == v {
                    return Err(domain(format!("duplicate arc ({v},{w})")));
                }
                stamp[w as usize] = v;
            }
        }
        Ok(d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[(Vertex, Vertex)] {
        &self.arcs
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        1..=self.n as Vertex
    }

    pub fn out_neighbors(&self, v: Vertex) -> &[Vertex] {
        let i = v as usize - 1;
        &self.out[self.out_off[i]..self.out_off[i + 1]]
    }

    pub fn in_neighbors(&self, v: Vertex) -> &[Vertex] {
        let i = v as usize - 1;
        &self.inc[self.in_off[i]..self.in_off[i + 1]]
    }

    pub fn has_arc(&self, u: Vertex, v: Vertex) -> bool {
        self.out_neighbors(u).contains(&v)
    }

    pub fn max_out_degree(&self) -> usize {
        self.vertices().map(|v| self.out_neighbors(v).len()).max().unwrap_or(0)
    }

    /// Every out-degree is at most one.
    pub fn is_functional(&self) -> bool {
        self.max_out_degree() <= 1
    }

    /// Exactly one arc between every pair of distinct vertices.
    pub fn is_tournament(&self) -> bool {
        let n = self.n;
        self.m() == n * n.saturating_sub(1) / 2
            && self.arcs.iter().all(|&(u, v)| !self.has_arc(v, u))
    }

    /// Underlying undirected graph; antiparallel arc pairs collapse to one edge.
    pub fn underlying(&self) -> GraphInstance {
        let edges = self.arcs.iter().copied().filter(|&(u, v)| !(v < u && self.has_arc(v, u)));
        GraphInstance::from_edges(self.n, edges).expect("arcs are valid")
    }

    /// Metered out-neighbour read.
    pub fn ith_out(&self, v: Vertex, i: usize, meter: &Meter) -> Option<Vertex> {
        let k = v as usize - 1;
        let (lo, hi) = (self.out_off[k], self.out_off[k + 1]);
        meter.touch((lo + i.saturating_sub(1).min(hi - lo)) as u64);
        (i >= 1 && lo + i <= hi).then(|| self.out[lo + i - 1])
    }

    /// Metered in-neighbour read.
    pub fn ith_in(&self, v: Vertex, i: usize, meter: &Meter) -> Option<Vertex> {
        let k = v as usize - 1;
        let (lo, hi) = (self.in_off[k], self.in_off[k + 1]);
        meter.touch((self.out.len() + lo + i.saturating_sub(1).min(hi - lo)) as u64);
        (i >= 1 && lo + i <= hi).then(|| self.inc[lo + i - 1])
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut recs = records(text);
        let head = header(&mut recs, "q", 2)?;
        let (n, m) = (head.num(0)?, head.num(1)?);
        let mut arcs = Vec::with_capacity(m);
        let mut last = head.line;
        for rec in recs {
            last = rec.line;
            if rec.tag != "a" {
                return Err(rec.err(format!("expected arc line, found {:?}", rec.tag)));
            }
            rec.expect_len(2)?;
            let (u, v) = (rec.id(0, n, "vertex")?, rec.id(1, n, "vertex")?);
            if u == v {
                return Err(rec.err(format!("self-loop at {u}")));
            }
            arcs.push((u, v));
            if arcs.len() > m {
                return Err(rec.err(format!("more than the {m} declared arcs")));
            }
        }
        check_count(m, arcs.len(), last, "arcs")?;
        DigraphInstance::from_arcs(n, arcs).map_err(|e| match e {
            Error::Domain(message) => Error::Parse { line: last, message },
            other => other,
        })
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for DigraphInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "q {} {}", self.n, self.m())?;
        for (u, v) in &self.arcs {
            writeln!(f, "a {u} {v}")?;
        }
        Ok(())
    }
}

impl FromStr for DigraphInstance {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_and_checks() {
        let d = DigraphInstance::parse("q 3 3\na 1 2\na 2 3\na 3 1\n").unwrap();
        assert!(d.is_functional());
        assert!(d.is_tournament());
        assert_eq!(d.in_neighbors(1), &[3]);
        assert_eq!(d.underlying().m(), 3);
        assert!(DigraphInstance::parse("q 2 2\na 1 2\na 1 2\n").is_err());
        let two = DigraphInstance::from_arcs(2, [(1, 2), (2, 1)]).unwrap();
        assert!(!two.is_tournament());
        assert_eq!(two.underlying().m(), 1);
    }
}
