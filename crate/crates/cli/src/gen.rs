use std::str::FromStr;

use anyhow::{anyhow, bail};
use roapprox::exact::{validate_structure, StructureKind};
use roapprox::generate::{
    gadget_union, random_c4free, random_degenerate, random_family, random_functional, random_graph,
    random_regular, random_tournament, random_tree, rng,
};

use crate::load::Loaded;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    Tree,
    Graph,
    Regular,
    C4Free,
    Degenerate,
    Functional,
    Tournament,
    Family,
    Gadget,
}

impl FromStr for GenKind {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        Ok(match s {
            "tree" => GenKind::Tree,
            "graph" => GenKind::Graph,
            "regular" => GenKind::Regular,
            "c4free" => GenKind::C4Free,
            "degenerate" => GenKind::Degenerate,
            "functional" => GenKind::Functional,
            "tournament" => GenKind::Tournament,
            "family" => GenKind::Family,
            "gadget" => GenKind::Gadget,
            _ => bail!("unknown instance kind {s:?}"),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub kind: GenKind,
    pub n: usize,
    pub d: Option<usize>,
    pub m: Option<usize>,
    pub delta: Option<usize>,
    pub p: Option<f64>,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(kind: GenKind) -> Self {
        GenSpec { kind, n: 10, d: None, m: None, delta: None, p: None, seed: 0 }
    }

    /// Apply one `key=value` override.
    pub fn set(&mut self, pair: &str) -> anyhow::Result<()> {
        let (key, value) = pair.split_once('=').ok_or_else(|| anyhow!("expected key=value, got {pair:?}"))?;
        let int = || value.parse::<usize>().map_err(|_| anyhow!("{key} wants an integer, got {value:?}"));
        match key {
            "n" => self.n = int()?,
            "d" => self.d = Some(int()?),
            "m" => self.m = Some(int()?),
            "delta" => self.delta = Some(int()?),
            "seed" => self.seed = value.parse().map_err(|_| anyhow!("seed wants an integer, got {value:?}"))?,
            "p" => self.p = Some(value.parse().map_err(|_| anyhow!("p wants a number, got {value:?}"))?),
            _ => bail!("unknown parameter {key:?}"),
        }
        Ok(())
    }

    fn need_d(&self) -> anyhow::Result<usize> {
        self.d.ok_or_else(|| anyhow!("{:?} needs d=", self.kind))
    }

    fn structure(&self) -> Option<StructureKind> {
        match self.kind {
            GenKind::Tree => Some(StructureKind::Tree),
            GenKind::Regular => self.d.map(StructureKind::Regular),
            GenKind::C4Free => Some(StructureKind::C4Free),
            GenKind::Degenerate => self.d.map(StructureKind::Degenerate),
            GenKind::Functional => Some(StructureKind::Functional),
            GenKind::Tournament => Some(StructureKind::Tournament),
            GenKind::Graph | GenKind::Family | GenKind::Gadget => None,
        }
    }

    /// Build the instance and check it against the structure its kind promises.
    pub fn generate(&self) -> anyhow::Result<Loaded> {
        let mut r = rng(self.seed);
        let n = self.n;
        let p = self.p.unwrap_or(0.5);
        if !(0.0..=1.0).contains(&p) {
            bail!("p must lie in [0, 1]");
        }
        let out = match self.kind {
            GenKind::Tree => Loaded::Graph(random_tree(n, &mut r)),
            GenKind::Graph => Loaded::Graph(random_graph(n, self.delta.unwrap_or(3), p, &mut r)),
            GenKind::Regular => Loaded::Graph(random_regular(n, self.need_d()?, &mut r)?),
            GenKind::C4Free => Loaded::Graph(random_c4free(n, p, &mut r)),
            GenKind::Degenerate => Loaded::Graph(random_degenerate(n, self.need_d()?, &mut r)),
            GenKind::Functional => Loaded::Digraph(random_functional(n, &mut r)),
            GenKind::Tournament => Loaded::Digraph(random_tournament(n, &mut r)),
            GenKind::Family => {
                Loaded::Family(random_family(n, self.m.unwrap_or(n), self.d.unwrap_or(3), &mut r))
            }
            GenKind::Gadget => Loaded::Graph(gadget_union(n, &mut r)),
        };
        if let Some(kind) = self.structure() {
            let v = validate_structure(kind, out.as_instance());
            if !v.ok {
                bail!("generated instance fails {kind:?}: {:?}", v.witness);
            }
        }
        Ok(out)
    }
}
