use std::path::Path;

use anyhow::{bail, Context};
use roapprox::exact::Instance;
use roapprox::{DigraphInstance, GraphInstance, SetFamilyInstance};

/// An instance file of any of the three formats, told apart by the header tag.
#[derive(Debug)]
pub enum Loaded {
    Graph(GraphInstance),
    Digraph(DigraphInstance),
    Family(SetFamilyInstance),
}

impl Loaded {
    pub fn read(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let tag = text
            .lines()
            .filter_map(|l| l.split_whitespace().next())
            .find(|t| *t != "c" && !t.starts_with('#'));
        Ok(match tag {
            Some("p") => Loaded::Graph(text.parse()?),
            Some("q") => Loaded::Digraph(text.parse()?),
            Some("h") => Loaded::Family(text.parse()?),
            Some(t) => bail!("unknown header tag {t:?}, expected p, q or h"),
            None => bail!("empty instance file"),
        })
    }

    pub fn as_instance(&self) -> Instance<'_> {
        match self {
            Loaded::Graph(g) => Instance::Graph(g),
            Loaded::Digraph(d) => Instance::Digraph(d),
            Loaded::Family(f) => Instance::Family(f),
        }
    }

    pub fn graph(&self) -> anyhow::Result<&GraphInstance> {
        match self {
            Loaded::Graph(g) => Ok(g),
            _ => bail!("this algorithm needs an undirected graph (header 'p')"),
        }
    }

    pub fn digraph(&self) -> anyhow::Result<&DigraphInstance> {
        match self {
            Loaded::Digraph(d) => Ok(d),
            _ => bail!("this algorithm needs a digraph (header 'q')"),
        }
    }

    pub fn family(&self) -> anyhow::Result<&SetFamilyInstance> {
        match self {
            Loaded::Family(f) => Ok(f),
            _ => bail!("this algorithm needs a set family (header 'h')"),
        }
    }

    pub fn text(&self) -> String {
        match self {
            Loaded::Graph(g) => g.to_text(),
            Loaded::Digraph(d) => d.to_text(),
            Loaded::Family(f) => f.to_text(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_picks_format() {
        assert!(matches!(Loaded::parse("c hi\np 2 1\ne 1 2\n").unwrap(), Loaded::Graph(_)));
        assert!(matches!(Loaded::parse("q 2 1\na 1 2\n").unwrap(), Loaded::Digraph(_)));
        assert!(matches!(Loaded::parse("h 2 1 2\ns 1 2\n").unwrap(), Loaded::Family(_)));
        assert!(Loaded::parse("x 1\n").is_err());
        assert!(Loaded::parse("").is_err());
    }
}
