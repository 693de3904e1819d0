use std::str::FromStr;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use roapprox::dominating::{c4free_ds_approx, c4free_ds_bounded_k, dgn_dom_set, regular_ds_derand};
use roapprox::exact::{
    degeneracy, exact_opt, residual_violation, validate, validate_structure, Instance, ProblemKind,
    StructureKind, FAMILY_CAP, GRAPH_CAP,
};
use roapprox::hashing::avg_degree_is;
use roapprox::kernels::{buss_vc_kernel, fk_hs_kernel};
use roapprox::layered::{bd_maximal_is, bd_vc_2approx, bounded_mult_hs};
use roapprox::staggered::{forbidden_family, hs_bounded_k, hs_eps_approx, hs_sqrt_approx, Budgeted, DeletionProblem};
use roapprox::tree::{functional_max_is, functional_min_vc, tree_max_is, tree_min_vc};
use roapprox::{with_meter, GraphInstance, Meter, Mode};
use serde_json::json;

use crate::load::Loaded;
use crate::report::{ratio, MeterReport, NoReport, Params, SolutionReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Problem {
    Vc,
    Is,
    Mis,
    Ds,
    Hs,
    Delete(DeletionProblem),
}

impl FromStr for Problem {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        Ok(match s {
            "vc" => Problem::Vc,
            "is" => Problem::Is,
            "mis" => Problem::Mis,
            "ds" => Problem::Ds,
            "hs" => Problem::Hs,
            other => Problem::Delete(
                other.parse().map_err(|_| anyhow!("unknown problem {other:?}"))?,
            ),
        })
    }
}

impl Problem {
    pub fn kind(self) -> ProblemKind {
        match self {
            Problem::Vc => ProblemKind::VertexCover,
            Problem::Is => ProblemKind::IndependentSet,
            Problem::Mis => ProblemKind::MaximalIndependentSet,
            Problem::Ds => ProblemKind::DominatingSet,
            Problem::Hs | Problem::Delete(_) => ProblemKind::HittingSet,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Problem::Vc => "vc",
            Problem::Is => "is",
            Problem::Mis => "mis",
            Problem::Ds => "ds",
            Problem::Hs => "hs",
            Problem::Delete(p) => p.name(),
        }
    }
}

/// Flags shared by the solving subcommands.
#[derive(Debug, Clone, Default)]
pub struct Options {
    pub k: Option<usize>,
    pub epsilon: Option<f64>,
    pub d: Option<usize>,
    pub delta: Option<usize>,
    pub root: Option<u32>,
    pub compare_exact: bool,
    pub check_structure: bool,
    pub space_audit: bool,
}

impl Options {
    fn mode(&self) -> Mode {
        if self.space_audit {
            Mode::Layered
        } else {
            Mode::Memoized
        }
    }
}

pub enum Outcome {
    Report(SolutionReport),
    No(NoReport),
}

enum Raw {
    Found(Vec<u32>, Params),
    No,
}

fn found(solution: Vec<u32>) -> anyhow::Result<Raw> {
    Ok(Raw::Found(solution, Params::new()))
}

fn budgeted(b: Budgeted<Vec<u32>>) -> Raw {
    match b {
        Budgeted::No => Raw::No,
        Budgeted::Found(s) => Raw::Found(s, Params::new()),
    }
}

/// Resolve `(problem, algorithm)` after aliases.
fn canonical(problem: Problem, algorithm: &str) -> anyhow::Result<(Problem, &'static str)> {
    let alg = match (problem, algorithm) {
        (Problem::Vc, "staggered") => return Ok((Problem::Delete(DeletionProblem::VertexCover), "staggered")),
        (Problem::Vc | Problem::Mis, "bounded-degree") => "bounded-degree",
        (Problem::Vc | Problem::Is, "tree") => "tree",
        (Problem::Vc | Problem::Is, "functional") => "functional",
        (Problem::Is, "avg-degree") => "avg-degree",
        (Problem::Ds, "c4free") => "c4free",
        (Problem::Ds, "degenerate") => "degenerate",
        (Problem::Ds, "regular") => "regular",
        (Problem::Hs, "bounded-mult") => "bounded-mult",
        (Problem::Hs, "staggered") => "staggered",
        (Problem::Hs, "sqrt") => "sqrt",
        (Problem::Delete(_), "staggered") => "staggered",
        (p, a) => bail!("algorithm {a:?} does not solve problem {:?}", p.name()),
    };
    Ok((problem, alg))
}

/// Structure the algorithm assumes, if it is one `validate_structure` knows.
fn required_structure(problem: Problem, alg: &str, input: &Loaded, opts: &Options) -> anyhow::Result<Option<StructureKind>> {
    Ok(match alg {
        "tree" => Some(StructureKind::Tree),
        "functional" => Some(StructureKind::Functional),
        "c4free" => Some(StructureKind::C4Free),
        "degenerate" => Some(StructureKind::Degenerate(resolve_d(input.graph()?, opts.d))),
        "regular" => Some(StructureKind::Regular(regular_degree(input.graph()?, opts.d))),
        _ if problem == Problem::Delete(DeletionProblem::TournamentFvs) => Some(StructureKind::Tournament),
        _ => None,
    })
}

fn regular_degree(g: &GraphInstance, d: Option<usize>) -> usize {
    d.unwrap_or_else(|| if g.n() == 0 { 0 } else { g.degree(1) })
}

fn resolve_d(g: &GraphInstance, d: Option<usize>) -> usize {
    d.unwrap_or_else(|| degeneracy(g).0)
}

fn check_structure(problem: Problem, alg: &str, input: &Loaded, opts: &Options) -> anyhow::Result<()> {
    if let Some(kind) = required_structure(problem, alg, input, opts)? {
        let v = validate_structure(kind, input.as_instance());
        if !v.ok {
            bail!("input is not {kind:?}: {:?}", v.witness);
        }
    }
    if let (Some(delta), "bounded-degree") = (opts.delta, alg) {
        let actual = input.graph()?.max_degree();
        if actual > delta {
            bail!("maximum degree {actual} exceeds --delta {delta}");
        }
    }
    if let (Some(delta), "bounded-mult") = (opts.delta, alg) {
        let actual = input.family()?.max_multiplicity();
        if actual > delta {
            bail!("maximum multiplicity {actual} exceeds --delta {delta}");
        }
    }
    Ok(())
}

fn run_algorithm(problem: Problem, alg: &str, input: &Loaded, opts: &Options, m: &Meter) -> anyhow::Result<Raw> {
    let mode = opts.mode();
    let eps = opts.epsilon.unwrap_or(1.0);
    match (problem, alg) {
        (Problem::Vc, "bounded-degree") => found(bd_vc_2approx(input.graph()?, opts.delta, mode, m).flatten()),
        (Problem::Mis, "bounded-degree") => found(bd_maximal_is(input.graph()?, opts.delta, mode, m).flatten()),
        (Problem::Vc, "tree") => found(tree_min_vc(input.graph()?, opts.root.unwrap_or(1), m)?),
        (Problem::Is, "tree") => found(tree_max_is(input.graph()?, opts.root.unwrap_or(1), m)?),
        (Problem::Vc, "functional") => found(functional_min_vc(input.digraph()?, m)?),
        (Problem::Is, "functional") => found(functional_max_is(input.digraph()?, m)?),
        (Problem::Is, "avg-degree") => {
            let r = avg_degree_is(input.graph()?, m)?;
            let mut p = Params::new();
            p.insert("hash_range".into(), json!(r.k));
            p.insert("member".into(), json!(r.member.map(|(a, b)| [a, b])));
            Ok(Raw::Found(r.solution, p))
        }
        (Problem::Ds, "c4free") => match opts.k {
            Some(k) => Ok(budgeted(c4free_ds_bounded_k(input.graph()?, k, m))),
            None => {
                let r = c4free_ds_approx(input.graph()?, m);
                Ok(Raw::Found(r.solution, search_params(r.k, r.capped)))
            }
        },
        (Problem::Ds, "degenerate") => {
            let g = input.graph()?;
            let r = dgn_dom_set(g, resolve_d(g, opts.d), mode, m)?;
            let mut p = Params::new();
            p.insert("rounds".into(), json!(r.rounds));
            p.insert("trace".into(), json!(r.trace));
            Ok(Raw::Found(r.solution, p))
        }
        (Problem::Ds, "regular") => {
            let r = regular_ds_derand(input.graph()?, m)?;
            let mut p = Params::new();
            p.insert("threshold".into(), json!(r.t));
            p.insert("member".into(), json!([r.member.0, r.member.1]));
            Ok(Raw::Found(r.solution, p))
        }
        (Problem::Hs, "bounded-mult") => found(bounded_mult_hs(input.family()?, opts.delta, mode, m)?.flatten()),
        (Problem::Hs, "sqrt") => {
            let r = hs_sqrt_approx(input.family()?, m);
            Ok(Raw::Found(r.solution, search_params(r.k, r.capped)))
        }
        (Problem::Hs, "staggered") => {
            let f = input.family()?;
            match opts.k {
                Some(k) => Ok(budgeted(hs_bounded_k(f, k, eps, mode, m)?)),
                None => {
                    let r = hs_eps_approx(f, eps, mode, m)?;
                    Ok(Raw::Found(r.solution, search_params(r.k, r.capped)))
                }
            }
        }
        (Problem::Delete(dp), "staggered") => {
            let family = forbidden_family(input.as_instance(), dp)?;
            match opts.k {
                Some(k) => Ok(budgeted(hs_bounded_k(&family, k, eps, mode, m)?)),
                None => {
                    let r = hs_eps_approx(&family, eps, mode, m)?;
                    Ok(Raw::Found(r.solution, search_params(r.k, r.capped)))
                }
            }
        }
        (p, a) => bail!("algorithm {a:?} does not solve problem {:?}", p.name()),
    }
}

fn search_params(k: usize, capped: bool) -> Params {
    let mut p = Params::new();
    p.insert("k_reached".into(), json!(k));
    p.insert("capped".into(), json!(capped));
    p
}

/// Graph the validator and the exact solver see for this problem.
fn checked_view(problem: Problem, input: &Loaded) -> anyhow::Result<Checked> {
    Ok(match (problem, input) {
        (Problem::Delete(dp), _) => Checked::Family(forbidden_family(input.as_instance(), dp)?),
        (_, Loaded::Digraph(d)) => Checked::Graph(d.underlying()),
        _ => Checked::Borrowed,
    })
}

enum Checked {
    Borrowed,
    Graph(GraphInstance),
    Family(roapprox::SetFamilyInstance),
}

impl Checked {
    fn instance<'a>(&'a self, input: &'a Loaded) -> Instance<'a> {
        match self {
            Checked::Borrowed => input.as_instance(),
            Checked::Graph(g) => Instance::Graph(g),
            Checked::Family(f) => Instance::Family(f),
        }
    }
}

fn is_valid(problem: Problem, input: &Loaded, checked: &Checked, solution: &[u32]) -> anyhow::Result<bool> {
    if let Problem::Delete(dp) = problem {
        let covered = validate(ProblemKind::HittingSet, checked.instance(input), solution).ok;
        let residual = residual_violation(dp, input.as_instance(), solution)?;
        return Ok(covered && residual.is_none());
    }
    Ok(validate(problem.kind(), checked.instance(input), solution).ok)
}

/// Optimum for `--compare-exact`, or `None` with a note when the instance is too large.
fn optimum(problem: Problem, input: &Loaded, checked: &Checked) -> anyhow::Result<Option<usize>> {
    let inst = checked.instance(input);
    let cap = if matches!(inst, Instance::Family(_)) { FAMILY_CAP } else { GRAPH_CAP };
    match exact_opt(problem.kind(), inst, cap) {
        Ok(o) => Ok(Some(o.value)),
        Err(roapprox::Error::Refused { size, cap }) => {
            eprintln!("note: exact optimum skipped, {size} items exceed the cap of {cap}");
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

fn base_params(problem: Problem, opts: &Options) -> Params {
    let mut p = Params::new();
    p.insert("problem".into(), json!(problem.name()));
    p.insert("mode".into(), json!(if opts.space_audit { "layered" } else { "memoized" }));
    if let Some(k) = opts.k {
        p.insert("k".into(), json!(k));
    }
    if let Some(e) = opts.epsilon {
        p.insert("epsilon".into(), json!(e));
    }
    if let Some(d) = opts.d {
        p.insert("d".into(), json!(d));
    }
    if let Some(delta) = opts.delta {
        p.insert("delta".into(), json!(delta));
    }
    if let Some(r) = opts.root {
        p.insert("root".into(), json!(r));
    }
    p
}

pub fn solve(problem: Problem, algorithm: &str, input: &Loaded, opts: &Options) -> anyhow::Result<Outcome> {
    let (problem, alg) = canonical(problem, algorithm)?;
    if opts.check_structure {
        check_structure(problem, alg, input, opts).context("structural precondition")?;
    }
    let mut params = base_params(problem, opts);
    let start = Instant::now();
    let (raw, stats) = with_meter(|m| run_algorithm(problem, alg, input, opts, m))?;
    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    let meter = MeterReport::from(stats);
    let (mut solution, extra) = match raw? {
        Raw::No => {
            return Ok(Outcome::No(NoReport { algorithm: alg.into(), params, verdict: "NO", meter, runtime_ms }));
        }
        Raw::Found(s, extra) => (s, extra),
    };
    params.extend(extra);
    solution.sort_unstable();
    let checked = checked_view(problem, input)?;
    let valid = is_valid(problem, input, &checked, &solution)?;
    let opt = if opts.compare_exact { optimum(problem, input, &checked)? } else { None };
    let ratio = opt.and_then(|o| ratio(solution.len(), o, problem.kind().is_maximization()));
    Ok(Outcome::Report(SolutionReport {
        algorithm: alg.into(),
        params,
        size: solution.len(),
        solution,
        valid,
        opt,
        ratio,
        meter,
        runtime_ms,
    }))
}

pub fn kernel(problem: Problem, input: &Loaded, k: usize) -> anyhow::Result<Outcome> {
    let mut params = Params::new();
    params.insert("problem".into(), json!(problem.name()));
    params.insert("k".into(), json!(k));
    let start = Instant::now();
    let (alg, out, stats) = match problem {
        Problem::Vc => {
            let g = input.graph()?;
            let (o, s) = with_meter(|m| buss_vc_kernel(g, k, m).kernel())?;
            ("buss", o, s)
        }
        Problem::Hs => {
            let f = input.family()?;
            let (o, s) = with_meter(|m| fk_hs_kernel(f, k, m).kernel())?;
            ("threshold", o, s)
        }
        p => bail!("no kernel for problem {:?}", p.name()),
    };
    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    let meter = MeterReport::from(stats);
    let Some(payload) = out else {
        return Ok(Outcome::No(NoReport { algorithm: alg.into(), params, verdict: "NO", meter, runtime_ms }));
    };
    let valid = match problem {
        Problem::Vc => validate(ProblemKind::VertexCover, input.as_instance(), &payload).ok,
        _ => {
            let f = input.family()?;
            let mut elements: Vec<u32> = payload.iter().flat_map(|&j| f.set(j).iter().copied()).collect();
            elements.sort_unstable();
            elements.dedup();
            let ok = validate(ProblemKind::HittingSet, input.as_instance(), &elements).ok;
            params.insert("elements".into(), json!(elements));
            ok
        }
    };
    Ok(Outcome::Report(SolutionReport {
        algorithm: alg.into(),
        params,
        size: payload.len(),
        solution: payload,
        valid,
        opt: None,
        ratio: None,
        meter,
        runtime_ms,
    }))
}

pub fn exact(problem: Problem, input: &Loaded) -> anyhow::Result<SolutionReport> {
    let checked = checked_view(problem, input)?;
    let inst = checked.instance(input);
    let cap = if matches!(inst, Instance::Family(_)) { FAMILY_CAP } else { GRAPH_CAP };
    let start = Instant::now();
    let o = exact_opt(problem.kind(), inst, cap)?;
    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    let valid = is_valid(problem, input, &checked, &o.solution)?;
    let mut params = Params::new();
    params.insert("problem".into(), json!(problem.name()));
    Ok(SolutionReport {
        algorithm: "exact".into(),
        params,
        size: o.value,
        solution: o.solution,
        valid,
        opt: Some(o.value),
        ratio: Some(1.0),
        meter: MeterReport::default(),
        runtime_ms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri() -> Loaded {
        Loaded::parse("p 3 3\ne 1 2\ne 2 3\ne 1 3\n").unwrap()
    }

    #[test]
    fn triangle_bounded_degree() {
        let opts = Options { compare_exact: true, ..Options::default() };
        let Outcome::Report(r) = solve(Problem::Vc, "bounded-degree", &tri(), &opts).unwrap() else {
            panic!("expected a report")
        };
        assert!(r.valid);
        assert_eq!((r.size, r.opt, r.ratio), (2, Some(2), Some(1.0)));
    }

    #[test]
    fn mismatched_pair_is_rejected() {
        assert!(solve(Problem::Hs, "tree", &tri(), &Options::default()).is_err());
        assert!("nope".parse::<Problem>().is_err());
        assert_eq!("split-vd".parse::<Problem>().unwrap(), Problem::Delete(DeletionProblem::SplitVd));
    }

    #[test]
    fn c4free_budget_no() {
        // C5 is C4-free and needs two dominators
        let c5 = Loaded::parse("p 5 5\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 1\n").unwrap();
        let opts = Options { k: Some(1), ..Options::default() };
        assert!(matches!(solve(Problem::Ds, "c4free", &c5, &opts).unwrap(), Outcome::No(_)));
    }
}
