use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use super::{check_count, header, records, word_bits, Element, Meter, SetIndex};
use crate::error::{domain, Error, Result};

/// Metered, read-only view of a set family.
pub trait FamilyAccess {
    fn ground_size(&self) -> usize;
    fn set_count(&self) -> usize;
    /// Upper bound on set sizes.
    fn rank(&self) -> usize;
    fn set_len(&self, j: SetIndex, meter: &Meter) -> usize;
    /// The `t`-th element (1-based) of set `j`, in listing order.
    fn set_element(&self, j: SetIndex, t: usize, meter: &Meter) -> Option<Element>;
    /// The `i`-th set (1-based) containing `e`, in set order.
    fn ith_set_of(&self, e: Element, i: usize, meter: &Meter) -> Option<SetIndex>;

    fn contains(&self, j: SetIndex, e: Element, meter: &Meter) -> bool {
        let _f = meter.frame(1);
        (1..=self.set_len(j, meter)).any(|t| self.set_element(j, t, meter) == Some(e))
    }
}

/// Set system over `1..=n` with sets of size at most `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFamilyInstance {
    n: usize,
    d: usize,
    set_off: Vec<usize>,
    elems: Vec<Element>,
    idx_off: Vec<usize>,
    idx: Vec<SetIndex>,
}

impl SetFamilyInstance {
    /// Build from sets in order. Rejects repeated elements inside a set and
    /// repeated sets.
    pub fn new(n: usize, d: usize, sets: impl IntoIterator<Item = Vec<Element>>) -> Result<Self> {
        let mut set_off = vec![0];
        let mut elems = Vec::new();
        let mut seen: HashSet<Vec<Element>> = HashSet::new();
        for (j, set) in sets.into_iter().enumerate() {
            if set.is_empty() || set.len() > d {
                return Err(domain(format!("set {} has size {}, expected 1..={d}", j + 1, set.len())));
            }
            for &e in &set {
                if e == 0 || e as usize > n {
                    return Err(domain(format!("set {} has element {e} outside 1..={n}", j + 1)));
                }
            }
            let mut key = set.clone();
            key.sort_unstable();
            if key.windows(2).any(|w| w[0] == w[1]) {
                return Err(domain(format!("set {} repeats an element", j + 1)));
            }
            if !seen.insert(key) {
                return Err(domain(format!("set {} repeats an earlier set", j + 1)));
            }
            elems.extend_from_slice(&set);
            set_off.push(elems.len());
        }
        let m = set_off.len() - 1;
        let mut idx_off = vec![0usize; n + 1];
        for &e in &elems {
            idx_off[e as usize] += 1;
        }
        for i in 0..n {
            idx_off[i + 1] += idx_off[i];
        }
        let mut fill = idx_off.clone();
        let mut idx = vec![0; elems.len()];
        for j in 0..m {
            for &e in &elems[set_off[j]..set_off[j + 1]] {
                idx[fill[e as usize - 1]] = j as SetIndex + 1;
                fill[e as usize - 1] += 1;
            }
        }
        Ok(SetFamilyInstance { n, d, set_off, elems, idx_off, idx })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.set_off.len() - 1
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn set(&self, j: SetIndex) -> &[Element] {
        let j = j as usize - 1;
        &self.elems[self.set_off[j]..self.set_off[j + 1]]
    }

    pub fn sets(&self) -> impl Iterator<Item = &[Element]> {
        (1..=self.m() as SetIndex).map(|j| self.set(j))
    }

    pub fn sets_of(&self, e: Element) -> &[SetIndex] {
        let i = e as usize - 1;
        &self.idx[self.idx_off[i]..self.idx_off[i + 1]]
    }

    pub fn multiplicity(&self, e: Element) -> usize {
        self.sets_of(e).len()
    }

    pub fn max_multiplicity(&self) -> usize {
        (1..=self.n as Element).map(|e| self.multiplicity(e)).max().unwrap_or(0)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut recs = records(text);
        let head = header(&mut recs, "h", 3)?;
        let (n, m, d) = (head.num(0)?, head.num(1)?, head.num(2)?);
        let mut sets = Vec::with_capacity(m);
        let mut keys: HashSet<Vec<Element>> = HashSet::new();
        let mut last = head.line;
        for rec in recs {
            last = rec.line;
            if rec.tag != "s" {
                return Err(rec.err(format!("expected set line, found {:?}", rec.tag)));
            }
            let k = rec.fields.len();
            if k == 0 || k > d {
                return Err(rec.err(format!("set has {k} elements, expected 1..={d}")));
            }
            let set = (0..k).map(|t| rec.id(t, n, "element")).collect::<Result<Vec<_>>>()?;
            let mut key = set.clone();
            key.sort_unstable();
            if key.windows(2).any(|w| w[0] == w[1]) {
                return Err(rec.err("set repeats an element"));
            }
            if !keys.insert(key) {
                return Err(rec.err("set repeats an earlier set"));
            }
            sets.push(set);
            if sets.len() > m {
                return Err(rec.err(format!("more than the {m} declared sets")));
            }
        }
        check_count(m, sets.len(), last, "sets")?;
        SetFamilyInstance::new(n, d, sets)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for SetFamilyInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "h {} {} {}", self.n, self.m(), self.d)?;
        for s in self.sets() {
            write!(f, "s")?;
            for e in s {
                write!(f, " {e}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl FromStr for SetFamilyInstance {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl FamilyAccess for SetFamilyInstance {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn set_count(&self) -> usize {
        self.m()
    }

    fn rank(&self) -> usize {
        self.d
    }

    fn set_len(&self, j: SetIndex, meter: &Meter) -> usize {
        let k = j as usize - 1;
        meter.touch(self.set_off[k] as u64);
        self.set_off[k + 1] - self.set_off[k]
    }

    fn set_element(&self, j: SetIndex, t: usize, meter: &Meter) -> Option<Element> {
        let k = j as usize - 1;
        let (lo, hi) = (self.set_off[k], self.set_off[k + 1]);
        meter.touch((lo + t.saturating_sub(1).min(hi - lo)) as u64);
        (t >= 1 && lo + t <= hi).then(|| self.elems[lo + t - 1])
    }

    fn ith_set_of(&self, e: Element, i: usize, meter: &Meter) -> Option<SetIndex> {
        let k = e as usize - 1;
        let (lo, hi) = (self.idx_off[k], self.idx_off[k + 1]);
        meter.touch((self.elems.len() + lo + i.saturating_sub(1).min(hi - lo)) as u64);
        (i >= 1 && lo + i <= hi).then(|| self.idx[lo + i - 1])
    }
}

/// The retained part of a family, renumbered `1..=kept` in original order.
///
/// Holds one bit per original set, charged to the meter for its lifetime.
#[derive(Debug)]
pub struct SubFamily<'a, F: FamilyAccess + ?Sized> {
    base: &'a F,
    keep: Vec<bool>,
    rank: Vec<u32>,
    kept: usize,
    _charge: super::Frame<'a>,
}

impl<'a, F: FamilyAccess + ?Sized> SubFamily<'a, F> {
    pub fn new(base: &'a F, keep: Vec<bool>, meter: &'a Meter) -> Self {
        let bits = u64::from(word_bits(base.ground_size().max(keep.len())));
        let charge = meter.frame((keep.len() as u64).div_ceil(bits));
        let mut rank = Vec::with_capacity(keep.len());
        let mut kept = 0;
        for &k in &keep {
            if k {
                kept += 1;
            }
            rank.push(kept as u32);
        }
        SubFamily { base, keep, rank, kept, _charge: charge }
    }

    pub fn base(&self) -> &F {
        self.base
    }

    pub fn is_kept(&self, original: SetIndex) -> bool {
        self.keep[original as usize - 1]
    }

    /// Original indices of the retained sets, in order.
    pub fn kept_indices(&self) -> impl Iterator<Item = SetIndex> + '_ {
        self.keep.iter().enumerate().filter(|(_, &k)| k).map(|(j, _)| j as SetIndex + 1)
    }

    fn original(&self, j: SetIndex) -> SetIndex {
        // rank is a prefix count, so the j-th kept set is the first index with rank j
        let pos = self.rank.partition_point(|&r| r < j);
        pos as SetIndex + 1
    }
}

impl<F: FamilyAccess + ?Sized> FamilyAccess for SubFamily<'_, F> {
    fn ground_size(&self) -> usize {
        self.base.ground_size()
    }

    fn set_count(&self) -> usize {
        self.kept
    }

    fn rank(&self) -> usize {
        self.base.rank()
    }

    fn set_len(&self, j: SetIndex, meter: &Meter) -> usize {
        self.base.set_len(self.original(j), meter)
    }

    fn set_element(&self, j: SetIndex, t: usize, meter: &Meter) -> Option<Element> {
        self.base.set_element(self.original(j), t, meter)
    }

    fn ith_set_of(&self, e: Element, i: usize, meter: &Meter) -> Option<SetIndex> {
        let mut seen = 0;
        let mut t = 1;
        while let Some(j) = self.base.ith_set_of(e, t, meter) {
            if self.is_kept(j) {
                seen += 1;
                if seen == i {
                    return Some(self.rank[j as usize - 1]);
                }
            }
            t += 1;
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam() -> SetFamilyInstance {
        SetFamilyInstance::parse("h 4 3 2\ns 1 2\ns 2 3\ns 4\n").unwrap()
    }

    #[test]
    fn index_is_in_set_order() {
        let f = fam();
        assert_eq!(f.sets_of(2), &[1, 2]);
        assert_eq!(f.max_multiplicity(), 2);
        let m = Meter::new();
        assert_eq!(f.ith_set_of(2, 2, &m), Some(2));
        assert_eq!(f.set_element(2, 2, &m), Some(3));
        assert!(f.contains(1, 2, &m));
    }

    #[test]
    fn rejects_bad_sets() {
        assert!(matches!(
            SetFamilyInstance::parse("h 3 2 2\ns 1 2\ns 2 1\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(SetFamilyInstance::parse("h 3 1 2\ns 1 1\n").is_err());
        assert!(SetFamilyInstance::parse("h 3 1 1\ns 1 2\n").is_err());
        assert!(SetFamilyInstance::parse("h 3 1 2\ns\n").is_err());
    }

    #[test]
    fn subfamily_renumbers() {
        let f = fam();
        let m = Meter::new();
        let sub = SubFamily::new(&f, vec![false, true, true], &m);
        assert_eq!(sub.set_count(), 2);
        assert_eq!(sub.set_element(1, 1, &m), Some(2));
        assert_eq!(sub.ith_set_of(2, 1, &m), Some(1));
        assert_eq!(sub.ith_set_of(4, 1, &m), Some(2));
        assert_eq!(sub.ith_set_of(1, 1, &m), None);
        assert_eq!(sub.kept_indices().collect::<Vec<_>>(), vec![2, 3]);
    }

    #[test]
    fn text_round_trip() {
        let f = fam();
        assert_eq!(SetFamilyInstance::parse(&f.to_text()).unwrap(), f);
    }
}
