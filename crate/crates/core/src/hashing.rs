//! Carter-Wegman hash families and the derandomized independent set.

use crate::error::{domain, Result};
use crate::instance::{GraphAccess, Meter, Vertex};

/// `f(x) = ((a x + b) mod p) mod k + 1` for `1 <= a < p`, `0 <= b < p`,
/// where `p` is the smallest prime at least `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HashFamily {
    pub n: u64,
    pub k: u64,
    pub p: u64,
}

fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|t| t * t <= q).all(|t| q % t != 0)
}

pub fn cw_family(n: usize, k: usize, meter: &Meter) -> Result<HashFamily> {
    if k == 0 || k > n {
        return Err(domain(format!("hash range {k} must lie in 1..={n}")));
    }
    let _p = meter.primitive(2);
    let p = (n as u64..).find(|&q| is_prime(q)).expect("primes are unbounded");
    Ok(HashFamily { n: n as u64, k: k as u64, p })
}

impl HashFamily {
    pub fn len(&self) -> u64 {
        self.p * (self.p - 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn eval(&self, a: u64, b: u64, x: u64) -> u64 {
        (a * x + b) % self.p % self.k + 1
    }

    /// Parameters `(a, b)` in lexicographic order.
    pub fn members(&self) -> impl Iterator<Item = (u64, u64)> {
        let p = self.p;
        (1..p).flat_map(move |a| (0..p).map(move |b| (a, b)))
    }
}

/// `|S| - m_S` for `S = f^{-1}(1)`, computed by rescanning the input.
pub fn score<G: GraphAccess + ?Sized>(g: &G, fam: &HashFamily, a: u64, b: u64, meter: &Meter) -> i64 {
    let _f = meter.frame(3);
    let in_s = |v: Vertex| fam.eval(a, b, u64::from(v)) == 1;
    let size = (1..=g.order() as Vertex).filter(|&v| in_s(v)).count() as i64;
    let mut inside = 0i64;
    let mut j = 1;
    while let Some((u, v)) = g.edge_at(j, meter) {
        if in_s(u) && in_s(v) {
            inside += 1;
        }
        j += 1;
    }
    size - inside
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AvgDegreeIs {
    pub solution: Vec<Vertex>,
    /// Hash range; 0 for edgeless input.
    pub k: usize,
    /// Chosen member, absent for edgeless input.
    pub member: Option<(u64, u64)>,
    pub score: i64,
}

/// Independent set of size at least `n / (2 ceil(avg degree))`.
///
/// Sweeps the family for the member whose preimage of 1 has the best
/// `|S| - m_S`, then keeps each vertex of `S` that is the smallest in its
/// closed neighbourhood inside `G[S]`.
pub fn avg_degree_is<G: GraphAccess + ?Sized>(g: &G, meter: &Meter) -> Result<AvgDegreeIs> {
    let n = g.order();
    let _f = meter.frame(6);
    let m = {
        let mut j = 0;
        while g.edge_at(j + 1, meter).is_some() {
            j += 1;
        }
        j
    };
    if m == 0 {
        let all = (1..=n as Vertex).collect::<Vec<_>>();
        return Ok(AvgDegreeIs { score: n as i64, solution: all, k: 0, member: None });
    }
    let k = (2 * m).div_ceil(n);
    let fam = cw_family(n, k, meter)?;
    let mut best: Option<((u64, u64), i64)> = None;
    for (a, b) in fam.members() {
        let s = score(g, &fam, a, b, meter);
        if best.is_none_or(|(_, top)| s > top) {
            best = Some(((a, b), s));
        }
    }
    let ((a, b), top) = best.expect("family is nonempty");
    let in_s = |v: Vertex| fam.eval(a, b, u64::from(v)) == 1;
    let solution = (1..=n as Vertex)
        .filter(|&v| {
            if !in_s(v) {
                return false;
            }
            let mut i = 1;
            while let Some(w) = g.ith_neighbor(v, i, meter) {
                if w < v && in_s(w) {
                    return false;
                }
                i += 1;
            }
            true
        })
        .collect();
    Ok(AvgDegreeIs { solution, k, member: Some((a, b)), score: top })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{validate, Instance, ProblemKind};
    use crate::instance::GraphInstance;

    #[test]
    fn family_examples() {
        let m = Meter::new();
        let f = cw_family(2, 2, &m).unwrap();
        assert_eq!((f.p, f.len()), (2, 2));
        assert_eq!(f.members().collect::<Vec<_>>(), vec![(1, 0), (1, 1)]);
        let clashes = f.members().filter(|&(a, b)| f.eval(a, b, 1) == f.eval(a, b, 2)).count();
        assert_eq!(clashes, 0);
        let one = cw_family(6, 1, &m).unwrap();
        assert_eq!(one.p, 7);
        assert!(one.members().all(|(a, b)| (1..=6).all(|x| one.eval(a, b, x) == 1)));
        assert!(cw_family(3, 0, &m).is_err());
        assert!(cw_family(3, 4, &m).is_err());
        assert_eq!(m.stats().primitive_words, 2);
    }

    #[test]
    fn five_into_two() {
        let m = Meter::new();
        let f = cw_family(5, 2, &m).unwrap();
        assert_eq!(f.len(), 20);
        for i in 1..=5u64 {
            for j in i + 1..=5 {
                let c = f.members().filter(|&(a, b)| f.eval(a, b, i) == f.eval(a, b, j)).count();
                assert!(c <= 10);
            }
        }
    }

    #[test]
    fn is_examples() {
        let m = Meter::new();
        let k2 = GraphInstance::from_edges(2, [(1, 2)]).unwrap();
        let r = avg_degree_is(&k2, &m).unwrap();
        assert_eq!((r.solution, r.k, r.score), (vec![1], 1, 1));
        let empty = GraphInstance::empty(3);
        assert_eq!(avg_degree_is(&empty, &m).unwrap().solution, vec![1, 2, 3]);
        let c4 = GraphInstance::from_edges(4, [(1, 2), (2, 3), (3, 4), (4, 1)]).unwrap();
        let r = avg_degree_is(&c4, &m).unwrap();
        assert_eq!(r.k, 2);
        assert!(r.score >= 1 && !r.solution.is_empty());
        assert!(validate(ProblemKind::IndependentSet, Instance::Graph(&c4), &r.solution).ok);
    }
}
