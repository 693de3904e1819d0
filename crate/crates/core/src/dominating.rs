//! Dominating set approximations on C4-free, degenerate and regular graphs.

use std::cell::{Cell, RefCell};

use crate::error::{domain, Result};
use crate::hashing::cw_family;
use crate::instance::{degree, word_bits, GraphAccess, Meter, Vertex};
use crate::oracle::{Mode, DEAD, FRAME_WORDS, LIVE, UNKNOWN};
use crate::staggered::{Budgeted, KSearch};

fn any_neighbor<G: GraphAccess + ?Sized>(g: &G, v: Vertex, meter: &Meter, mut p: impl FnMut(Vertex) -> bool) -> bool {
    let _f = meter.frame(2);
    let mut i = 1;
    while let Some(w) = g.ith_neighbor(v, i, meter) {
        if p(w) {
            return true;
        }
        i += 1;
    }
    false
}

/// Neighbours of `v` passing `p`, counted up to `limit`.
fn count_neighbors<G: GraphAccess + ?Sized>(
    g: &G,
    v: Vertex,
    limit: usize,
    meter: &Meter,
    mut p: impl FnMut(Vertex) -> bool,
) -> usize {
    let _f = meter.frame(3);
    let (mut i, mut c) = (1, 0);
    while c < limit {
        let Some(w) = g.ith_neighbor(v, i, meter) else { break };
        if p(w) {
            c += 1;
        }
        i += 1;
    }
    c
}

/// Budgeted dominating set on a C4-free graph.
///
/// Vertices of degree above `2k` are forced; NO if more than `k` are, or if
/// more than `(2k+1)(k - forced)` vertices are left undominated by them.
/// Otherwise returns the forced vertices plus the undominated ones.
pub fn c4free_ds_bounded_k<G: GraphAccess + ?Sized>(g: &G, k: usize, meter: &Meter) -> Budgeted<Vec<Vertex>> {
    let _f = meter.frame(4);
    let n = g.order() as Vertex;
    let forced = |v: Vertex| degree(g, v, meter) > 2 * k;
    let free = |v: Vertex| !forced(v) && !any_neighbor(g, v, meter, forced);
    let s = (1..=n).filter(|&v| forced(v)).count();
    if s > k {
        return Budgeted::No;
    }
    let rest = (1..=n).filter(|&v| free(v)).count();
    if rest > (2 * k + 1) * (k - s) {
        return Budgeted::No;
    }
    Budgeted::Found((1..=n).filter(|&v| forced(v) || free(v)).collect())
}

/// Tries `k = 1, 2, ...` and returns every vertex once `k` reaches `ceil(sqrt n)`.
pub fn c4free_ds_approx<G: GraphAccess + ?Sized>(g: &G, meter: &Meter) -> KSearch {
    let n = g.order();
    let cap = ((n as f64).sqrt() - 1e-9).ceil().max(1.0) as usize;
    let _f = meter.frame(2);
    let mut k = 1;
    loop {
        if let Budgeted::Found(solution) = c4free_ds_bounded_k(g, k, meter) {
            return KSearch { solution, k, capped: false };
        }
        if k >= cap {
            return KSearch { solution: (1..=n as Vertex).collect(), k, capped: true };
        }
        k += 1;
    }
}

/// Largest number of rounds the degenerate algorithm may take on `n` vertices.
pub fn round_cap(n: usize) -> usize {
    2 * (usize::BITS - n.leading_zeros()) as usize + 2
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DgnRun {
    pub solution: Vec<Vertex>,
    pub d: usize,
    pub rounds: usize,
    /// `|W_h|` before each round, then after the last.
    pub trace: Vec<usize>,
}

/// Partition of the vertices after `r` rounds, answered by recursion on `r`.
///
/// Only the chosen set `Y` carries state from one round to the next; the
/// dominated set `B`, the undominated set `W` and their splits are derived
/// from it by neighbourhood tests. In memoized mode `Y` is cached per round.
struct Partition<'a, G: GraphAccess + ?Sized> {
    g: &'a G,
    meter: &'a Meter,
    d: usize,
    memo: Option<RefCell<Vec<Vec<u8>>>>,
    memo_words: Cell<u64>,
}

impl<G: GraphAccess + ?Sized> Partition<'_, G> {
    fn in_y(&self, r: usize, v: Vertex) -> bool {
        if r == 0 {
            return false;
        }
        if let Some(memo) = &self.memo {
            let mut tables = memo.borrow_mut();
            while tables.len() < r {
                tables.push(Vec::new());
            }
            if let Some(&k) = tables[r - 1].get(v as usize) {
                if k != UNKNOWN {
                    return k == LIVE;
                }
            }
        }
        let _f = self.meter.frame(FRAME_WORDS);
        let y = self.in_y(r - 1, v)
            || (self.in_wstar(r - 1, v) && any_neighbor(self.g, v, self.meter, |w| self.in_s(r - 1, w)));
        if let Some(memo) = &self.memo {
            let mut tables = memo.borrow_mut();
            let table = &mut tables[r - 1];
            if table.is_empty() {
                let n = self.g.order();
                table.resize(n + 1, UNKNOWN);
                let words = (2 * n as u64).div_ceil(u64::from(word_bits(n)));
                self.meter.charge(words);
                self.memo_words.set(self.memo_words.get() + words);
            }
            table[v as usize] = if y { LIVE } else { DEAD };
        }
        y
    }

    /// Undominated: nothing in the closed neighbourhood is chosen.
    fn in_w(&self, r: usize, v: Vertex) -> bool {
        !self.in_y(r, v) && !any_neighbor(self.g, v, self.meter, |w| self.in_y(r, w))
    }

    fn in_b(&self, r: usize, v: Vertex) -> bool {
        !self.in_y(r, v) && any_neighbor(self.g, v, self.meter, |w| self.in_y(r, w))
    }

    fn in_bh(&self, r: usize, v: Vertex) -> bool {
        let t = 2 * self.d + 1;
        r > 0 && self.in_b(r, v) && count_neighbors(self.g, v, t, self.meter, |w| self.in_w(r, w)) >= t
    }

    fn in_wstar(&self, r: usize, v: Vertex) -> bool {
        self.in_w(r, v) || self.in_bh(r, v)
    }

    fn in_wh(&self, r: usize, v: Vertex) -> bool {
        // before the first round every vertex counts as high
        self.in_w(r, v) && (r == 0 || any_neighbor(self.g, v, self.meter, |w| self.in_wstar(r, w)))
    }

    fn in_wl(&self, r: usize, v: Vertex) -> bool {
        self.in_w(r, v) && !self.in_wh(r, v)
    }

    fn in_s(&self, r: usize, v: Vertex) -> bool {
        let t = 2 * self.d + 1;
        self.in_wh(r, v) && count_neighbors(self.g, v, t, self.meter, |w| self.in_wstar(r, w)) < t
    }
}

impl<G: GraphAccess + ?Sized> Drop for Partition<'_, G> {
    fn drop(&mut self) {
        let _ = self.meter.release(self.memo_words.get());
    }
}

/// Dominating set within `O(d^2)` of optimum on a `d`-degenerate graph.
///
/// Fails if the rounds exceed [`round_cap`], which happens only when `d` is
/// below the true degeneracy.
pub fn dgn_dom_set<G: GraphAccess + ?Sized>(g: &G, d: usize, mode: Mode, meter: &Meter) -> Result<DgnRun> {
    let n = g.order() as Vertex;
    let part = Partition {
        g,
        meter,
        d,
        memo: (mode == Mode::Memoized).then(|| RefCell::new(Vec::new())),
        memo_words: Cell::new(0),
    };
    let _f = meter.frame(3);
    let cap = round_cap(n as usize);
    let mut trace = Vec::new();
    let mut r = 0;
    loop {
        let high = (1..=n).filter(|&v| part.in_wh(r, v)).count();
        trace.push(high);
        if high == 0 {
            break;
        }
        if r == cap {
            return Err(domain(format!("no progress after {cap} rounds; is the graph {d}-degenerate?")));
        }
        r += 1;
    }
    let solution = (1..=n).filter(|&v| part.in_y(r, v) || part.in_wl(r, v)).collect();
    Ok(DgnRun { solution, d, rounds: r, trace })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularDs {
    pub solution: Vec<Vertex>,
    pub d: usize,
    /// Sampling threshold: `v` is sampled when `f(v) <= t`.
    pub t: u64,
    pub member: (u64, u64),
}

/// Dominating set on a `d`-regular graph of size at most about
/// `n (ln(d+1) + 1) / (d+1)`, from the best member of a pairwise
/// independent family.
pub fn regular_ds_derand<G: GraphAccess + ?Sized>(g: &G, meter: &Meter) -> Result<RegularDs> {
    let n = g.order() as Vertex;
    if n == 0 {
        return Ok(RegularDs { solution: Vec::new(), d: 0, t: 1, member: (1, 0) });
    }
    let _f = meter.frame(6);
    let d = degree(g, 1, meter);
    if let Some(v) = (2..=n).find(|&v| degree(g, v, meter) != d) {
        return Err(domain(format!("graph is not regular: vertex {v} has degree other than {d}")));
    }
    let fam = cw_family(n as usize, d + 1, meter)?;
    let t = (((d + 1) as f64).ln().ceil() as u64).max(1);
    let sampled = |a: u64, b: u64, v: Vertex| fam.eval(a, b, u64::from(v)) <= t;
    let picked = |a: u64, b: u64, v: Vertex| sampled(a, b, v) || !any_neighbor(g, v, meter, |w| sampled(a, b, w));
    let mut best: Option<((u64, u64), usize)> = None;
    for (a, b) in fam.members() {
        let size = (1..=n).filter(|&v| picked(a, b, v)).count();
        if best.is_none_or(|(_, s)| size < s) {
            best = Some(((a, b), size));
        }
    }
    let ((a, b), _) = best.expect("family is nonempty");
    let solution = (1..=n).filter(|&v| picked(a, b, v)).collect();
    Ok(RegularDs { solution, d, t, member: (a, b) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{exact_opt, validate, Instance, ProblemKind};
    use crate::instance::GraphInstance;

    fn path(n: u32) -> GraphInstance {
        GraphInstance::from_edges(n as usize, (1..n).map(|v| (v, v + 1))).unwrap()
    }

    fn star(leaves: u32) -> GraphInstance {
        GraphInstance::from_edges(leaves as usize + 1, (2..=leaves + 1).map(|v| (1, v))).unwrap()
    }

    fn cycle(n: u32) -> GraphInstance {
        GraphInstance::from_edges(n as usize, (1..=n).map(|v| (v, v % n + 1))).unwrap()
    }

    fn dominates(g: &GraphInstance, s: &[Vertex]) -> bool {
        validate(ProblemKind::DominatingSet, Instance::Graph(g), s).ok
    }

    #[test]
    fn c4free_examples() {
        let m = Meter::new();
        assert_eq!(c4free_ds_bounded_k(&star(6), 2, &m), Budgeted::Found(vec![1]));
        assert!(c4free_ds_bounded_k(&path(5), 1, &m).is_no());
        assert!(c4free_ds_bounded_k(&GraphInstance::empty(1), 0, &m).is_no());
        assert_eq!(c4free_ds_approx(&star(6), &m).solution, vec![1]);
        let r = c4free_ds_approx(&path(5), &m);
        assert_eq!(r.k, 2);
        assert!(dominates(&path(5), &r.solution) && r.solution.len() <= 12);
        assert_eq!(c4free_ds_approx(&GraphInstance::empty(1), &m).solution, vec![1]);
    }

    #[test]
    fn degenerate_examples() {
        for mode in [Mode::Layered, Mode::Memoized] {
            let m = Meter::new();
            let r = dgn_dom_set(&GraphInstance::empty(4), 0, mode, &m).unwrap();
            assert_eq!(r.solution, vec![1, 2, 3, 4]);
            let s = star(5);
            let r = dgn_dom_set(&s, 1, mode, &m).unwrap();
            assert!(r.solution.contains(&1) && dominates(&s, &r.solution));
            for g in [path(7), cycle(6)] {
                let r = dgn_dom_set(&g, 2, mode, &m).unwrap();
                assert!(dominates(&g, &r.solution));
                assert!(r.rounds <= round_cap(g.n()));
                assert!(r.trace.windows(2).skip(1).all(|w| w[1] < w[0]), "{:?}", r.trace);
            }
            assert_eq!(m.charged(), 0);
        }
    }

    #[test]
    fn modes_agree() {
        let g = GraphInstance::from_edges(8, [(1, 2), (2, 3), (3, 1), (3, 4), (4, 5), (5, 6), (6, 4), (7, 8), (2, 7)])
            .unwrap();
        let m = Meter::new();
        let a = dgn_dom_set(&g, 2, Mode::Layered, &m).unwrap();
        let b = dgn_dom_set(&g, 2, Mode::Memoized, &m).unwrap();
        assert_eq!(a, b);
        let opt = exact_opt(ProblemKind::DominatingSet, Instance::Graph(&g), 16).unwrap().value;
        assert!(a.solution.len() <= 25 * opt);
    }

    #[test]
    fn too_small_d_is_caught() {
        let k6 = GraphInstance::from_edges(6, (1..=6).flat_map(|a| (a + 1..=6).map(move |b| (a, b)))).unwrap();
        assert!(dgn_dom_set(&k6, 0, Mode::Memoized, &Meter::new()).is_err());
    }

    #[test]
    fn regular_examples() {
        let m = Meter::new();
        let k4 = GraphInstance::from_edges(4, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap();
        let r = regular_ds_derand(&k4, &m).unwrap();
        assert!(dominates(&k4, &r.solution) && r.solution.len() <= 2);
        let c6 = cycle(6);
        let r = regular_ds_derand(&c6, &m).unwrap();
        assert!(dominates(&c6, &r.solution) && r.solution.len() <= 4);
        assert_eq!(regular_ds_derand(&GraphInstance::empty(1), &m).unwrap().solution, vec![1]);
        assert!(regular_ds_derand(&path(3), &m).is_err());
    }
}
