//! Staggered greedy hitting set and the deletion problems built on it.
//!
//! With budget `k` the family is first kernelized. Then, for a schedule of
//! falling thresholds, every element lying in many live sets is deleted
//! together with the sets it meets, and the run gives up if too many sets
//! survive a round. Whatever is left is hit by taking all its elements.
//! Every round is an oracle layer over the kernel; nothing is copied.

mod catalog;

pub use catalog::{forbidden_family, DeletionProblem, Pattern};

use crate::error::{domain, Result};
use crate::exact::Instance;
use crate::instance::{Element, FamilyAccess, Meter, SubFamily};
use crate::kernels::{fk_hs_kernel, fk_retention, KernelOutcome};
use crate::oracle::{FamilyPredicate, LayeredFamilyView, Mode};

const TOL: f64 = 1e-9;

/// Outcome of a budgeted run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Budgeted<T> {
    No,
    Found(T),
}

impl<T> Budgeted<T> {
    pub fn is_no(&self) -> bool {
        matches!(self, Budgeted::No)
    }

    pub fn found(self) -> Option<T> {
        match self {
            Budgeted::No => None,
            Budgeted::Found(t) => Some(t),
        }
    }
}

/// Result of a search over increasing budgets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KSearch {
    pub solution: Vec<u32>,
    /// Last budget tried.
    pub k: usize,
    /// True when the search hit its cap and fell back to a trivial answer.
    pub capped: bool,
}

/// Round thresholds for budget `k`, sets of size at most `d` and exponent step `eps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsSchedule {
    pub eps: f64,
    pub d: usize,
    pub k: usize,
    /// Number of rounds `i`; rounds `1..i` are thresholded, round `i` takes the rest.
    pub rounds: usize,
}

impl EpsSchedule {
    pub fn new(d: usize, k: usize, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(domain(format!("epsilon {eps} outside (0, 1]")));
        }
        let rounds = (((d.max(1) - 1) as f64 / eps - TOL).ceil() as usize).max(1);
        Ok(EpsSchedule { eps, d, k, rounds })
    }

    fn pow(&self, exp: f64) -> f64 {
        (self.k as f64 + 1.0).powf(exp)
    }

    /// `(k+1)^(d-1-j*eps)`.
    pub fn theta(&self, j: usize) -> f64 {
        self.pow(self.d as f64 - 1.0 - j as f64 * self.eps)
    }

    /// `(k+1)^(d-j*eps)`.
    pub fn kappa(&self, j: usize) -> f64 {
        self.pow(self.d as f64 - j as f64 * self.eps)
    }

    /// Least integer count that reaches `theta(j)`.
    pub fn theta_count(&self, j: usize) -> usize {
        (self.theta(j) - TOL).ceil().max(1.0) as usize
    }

    pub fn too_many(&self, j: usize, survivors: usize) -> bool {
        survivors as f64 > self.kappa(j) + TOL
    }

    /// Bound on the size of any non-NO answer.
    pub fn size_cap(&self) -> f64 {
        let steps = ((self.d.max(1) - 1) as f64 / self.eps - TOL).ceil();
        (steps + self.d as f64) * self.pow(1.0 + self.eps)
    }
}

/// Budgeted hitting set: NO, or a hitting set within [`EpsSchedule::size_cap`].
///
/// A NO means no hitting set of size `k` exists.
pub fn hs_bounded_k<F: FamilyAccess + ?Sized>(
    f: &F,
    k: usize,
    eps: f64,
    mode: Mode,
    meter: &Meter,
) -> Result<Budgeted<Vec<Element>>> {
    let sched = EpsSchedule::new(f.rank(), k, eps)?;
    let Some(keep) = fk_retention(f, k, meter) else {
        return Ok(Budgeted::No);
    };
    let kernel = SubFamily::new(f, keep, meter);
    let mut view = LayeredFamilyView::new(&kernel, meter, mode);
    let _f = meter.frame(3);
    for j in 1..sched.rounds {
        view.push(FamilyPredicate::Frequent(sched.theta_count(j)));
        if sched.too_many(j, view.level(j).live_set_count()) {
            return Ok(Budgeted::No);
        }
    }
    // last round: everything still covered by a live set
    view.push(FamilyPredicate::Frequent(1));
    let i = view.depth();
    let out = (1..=f.ground_size() as Element).filter(|&e| !view.level(i).element_live(e)).collect();
    Ok(Budgeted::Found(out))
}

fn search_cap(x: f64) -> usize {
    ((x - TOL).ceil() as usize).max(1)
}

/// Elements lying in at least one set.
fn covered_elements<F: FamilyAccess + ?Sized>(f: &F, meter: &Meter) -> Vec<Element> {
    let _f = meter.frame(1);
    (1..=f.ground_size() as Element).filter(|&e| f.ith_set_of(e, 1, meter).is_some()).collect()
}

/// Tries `k = 1, 2, ...` until [`hs_bounded_k`] answers, giving up at
/// `k = ceil(n^(1-eps))` with every covered element.
pub fn hs_eps_approx<F: FamilyAccess + ?Sized>(f: &F, eps: f64, mode: Mode, meter: &Meter) -> Result<KSearch> {
    EpsSchedule::new(f.rank(), 1, eps)?;
    let cap = search_cap((f.ground_size() as f64).powf(1.0 - eps));
    let _f = meter.frame(2);
    let mut k = 1;
    loop {
        if let Budgeted::Found(solution) = hs_bounded_k(f, k, eps, mode, meter)? {
            return Ok(KSearch { solution, k, capped: false });
        }
        if k >= cap {
            return Ok(KSearch { solution: covered_elements(f, meter), k, capped: true });
        }
        k += 1;
    }
}

/// Tries `k = 1, 2, ...` until the kernel answers and returns the kernel's
/// elements; at `k = ceil(n^(1/d))` returns the whole ground set.
pub fn hs_sqrt_approx<F: FamilyAccess + ?Sized>(f: &F, meter: &Meter) -> KSearch {
    let n = f.ground_size();
    let d = f.rank().max(1);
    let cap = search_cap((n as f64).powf(1.0 / d as f64));
    let _f = meter.frame(2);
    let mut k = 1;
    loop {
        if let KernelOutcome::Kernel(kept) = fk_hs_kernel(f, k, meter) {
            let mut solution: Vec<Element> = Vec::new();
            for j in kept {
                solution.extend((1..=f.set_len(j, meter)).filter_map(|t| f.set_element(j, t, meter)));
            }
            solution.sort_unstable();
            solution.dedup();
            return KSearch { solution, k, capped: false };
        }
        if k >= cap {
            return KSearch { solution: (1..=n as Element).collect(), k, capped: true };
        }
        k += 1;
    }
}

/// Approximate vertex deletion into the class `problem` describes.
pub fn del_pi_approx(
    instance: Instance<'_>,
    problem: DeletionProblem,
    eps: f64,
    mode: Mode,
    meter: &Meter,
) -> Result<KSearch> {
    let family = forbidden_family(instance, problem)?;
    hs_eps_approx(&family, eps, mode, meter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{exact_opt, residual_violation, validate, ProblemKind};
    use crate::instance::{GraphInstance, SetFamilyInstance};

    fn fam(n: usize, d: usize, sets: &[&[u32]]) -> SetFamilyInstance {
        SetFamilyInstance::new(n, d, sets.iter().map(|s| s.to_vec())).unwrap()
    }

    #[test]
    fn schedule_shape() {
        let s = EpsSchedule::new(3, 2, 0.5).unwrap();
        assert_eq!(s.rounds, 4);
        assert!((s.theta(1) - 3f64.powf(1.5)).abs() < 1e-12);
        assert_eq!(s.theta_count(2), 3);
        assert!(s.kappa(1) > s.kappa(2) && s.theta(1) > s.theta(2));
        assert_eq!(EpsSchedule::new(1, 5, 1.0).unwrap().rounds, 1);
        assert!(EpsSchedule::new(2, 1, 0.0).is_err());
        assert!(EpsSchedule::new(2, 1, 1.5).is_err());
    }

    #[test]
    fn bounded_examples() {
        let m = Meter::new();
        let f = fam(4, 2, &[&[1, 2], &[2, 3], &[3, 4]]);
        let out = hs_bounded_k(&f, 2, 1.0, Mode::Layered, &m).unwrap().found().unwrap();
        assert_eq!(out, vec![1, 2, 3, 4]);
        assert!(validate(ProblemKind::HittingSet, Instance::Family(&f), &out).ok);
        assert!(hs_bounded_k(&f, 0, 1.0, Mode::Layered, &m).unwrap().is_no());
        assert!(hs_bounded_k(&f, 1, 1.0, Mode::Layered, &m).is_ok());
    }

    #[test]
    fn modes_agree_with_rounds() {
        let f = fam(7, 3, &[&[1, 2, 3], &[1, 4, 5], &[1, 6, 7], &[2, 4, 6], &[3, 5, 7], &[2, 5], &[1, 7]]);
        for k in 1..=3 {
            let m = Meter::new();
            let a = hs_bounded_k(&f, k, 0.5, Mode::Layered, &m).unwrap();
            let b = hs_bounded_k(&f, k, 0.5, Mode::Memoized, &m).unwrap();
            assert_eq!(a, b);
            if let Budgeted::Found(s) = a {
                assert!(validate(ProblemKind::HittingSet, Instance::Family(&f), &s).ok);
            }
        }
    }

    #[test]
    fn wrappers() {
        let m = Meter::new();
        let pairs = fam(6, 2, &[&[1, 2], &[3, 4], &[5, 6]]);
        let r = hs_eps_approx(&pairs, 1.0, Mode::Layered, &m).unwrap();
        assert!(validate(ProblemKind::HittingSet, Instance::Family(&pairs), &r.solution).ok);
        let opt = exact_opt(ProblemKind::HittingSet, Instance::Family(&pairs), 12).unwrap().value;
        assert!(r.solution.len() <= 6 * opt);

        let one = fam(1, 1, &[&[1]]);
        assert_eq!(hs_eps_approx(&one, 0.5, Mode::Layered, &m).unwrap().solution, vec![1]);
        assert_eq!(hs_sqrt_approx(&one, &m).solution, vec![1]);

        let singles = fam(4, 1, &[&[1], &[2], &[3]]);
        let r = hs_sqrt_approx(&singles, &m);
        assert!(validate(ProblemKind::HittingSet, Instance::Family(&singles), &r.solution).ok);
    }

    #[test]
    fn deletion_residuals() {
        let m = Meter::new();
        let tri = GraphInstance::from_edges(3, [(1, 2), (2, 3), (1, 3)]).unwrap();
        let k4 = GraphInstance::from_edges(4, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap();
        let p4 = GraphInstance::from_edges(4, [(1, 2), (2, 3), (3, 4)]).unwrap();
        for (g, p) in [(&tri, DeletionProblem::VertexCover), (&k4, DeletionProblem::TriangleVd), (&p4, DeletionProblem::ClusterVd)] {
            let out = del_pi_approx(Instance::Graph(g), p, 1.0, Mode::Layered, &m).unwrap();
            assert_eq!(residual_violation(p, Instance::Graph(g), &out.solution).unwrap(), None);
        }
    }
}
