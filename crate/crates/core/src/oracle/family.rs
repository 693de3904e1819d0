use std::cell::{Cell, RefCell};

use super::{Mode, DEAD, FRAME_WORDS, LIVE, UNKNOWN};
use crate::error::{domain, Result};
use crate::instance::{word_bits, Element, FamilyAccess, Meter, SetIndex};

/// Decides whether an element live at level `i - 1` is deleted by stage `i`.
pub trait ElementStage<F: FamilyAccess + ?Sized> {
    fn words(&self) -> u64;
    fn check(&self, prev: &FamilyLevel<'_, F>, e: Element) -> bool;
}

/// Stack of element-deletion stages over a read-only family.
///
/// A set is live at level `i` iff all of its elements are: it was live
/// before and stage `i` removed none of its elements.
pub struct LayeredFamilyView<'a, F: FamilyAccess + ?Sized> {
    base: &'a F,
    meter: &'a Meter,
    stages: Vec<Box<dyn ElementStage<F> + 'a>>,
    memo: Option<RefCell<Vec<Vec<u8>>>>,
    memo_words: Cell<u64>,
}

impl<'a, F: FamilyAccess + ?Sized> LayeredFamilyView<'a, F> {
    pub fn new(base: &'a F, meter: &'a Meter, mode: Mode) -> Self {
        let memo = (mode == Mode::Memoized).then(|| RefCell::new(Vec::new()));
        LayeredFamilyView { base, meter, stages: Vec::new(), memo, memo_words: Cell::new(0) }
    }

    pub fn push(&mut self, stage: impl ElementStage<F> + 'a) {
        self.stages.push(Box::new(stage));
        if let Some(memo) = &self.memo {
            memo.borrow_mut().push(Vec::new());
        }
    }

    pub fn depth(&self) -> usize {
        self.stages.len()
    }

    pub fn base(&self) -> &'a F {
        self.base
    }

    pub fn meter(&self) -> &'a Meter {
        self.meter
    }

    pub fn level(&self, i: usize) -> FamilyLevel<'_, F> {
        FamilyLevel { view: self, depth: i.min(self.depth()) }
    }

    fn check_depth(&self, i: usize) -> Result<()> {
        if i > self.depth() {
            return Err(domain(format!("depth {i} exceeds view depth {}", self.depth())));
        }
        Ok(())
    }

    pub fn element_live(&self, i: usize, e: Element) -> Result<bool> {
        self.check_depth(i)?;
        Ok(self.live(i, e))
    }

    pub fn set_live(&self, i: usize, j: SetIndex) -> Result<bool> {
        self.check_depth(i)?;
        if j == 0 || j as usize > self.base.set_count() {
            return Err(domain(format!("set {j} outside 1..={}", self.base.set_count())));
        }
        Ok(self.level(i).set_live(j))
    }

    pub fn in_stage(&self, i: usize, e: Element) -> Result<bool> {
        self.check_depth(i)?;
        if i == 0 {
            return Err(domain("stage sets start at depth 1"));
        }
        Ok(self.live(i - 1, e) && !self.live(i, e))
    }

    /// Elements deleted by stage `i`, in id order.
    pub fn stage_elements(&self, i: usize) -> Result<impl Iterator<Item = Element> + '_> {
        self.check_depth(i)?;
        if i == 0 {
            return Err(domain("stage sets start at depth 1"));
        }
        let guard = self.meter.frame(1);
        Ok((1..=self.base.ground_size() as Element).filter(move |&e| {
            let _ = &guard;
            self.live(i - 1, e) && !self.live(i, e)
        }))
    }

    pub fn live_elements(&self, i: usize) -> Result<impl Iterator<Item = Element> + '_> {
        self.check_depth(i)?;
        let guard = self.meter.frame(1);
        Ok((1..=self.base.ground_size() as Element).filter(move |&e| {
            let _ = &guard;
            self.live(i, e)
        }))
    }

    /// Sets live at level `i`, in input order.
    pub fn live_sets(&self, i: usize) -> Result<impl Iterator<Item = SetIndex> + '_> {
        self.check_depth(i)?;
        let guard = self.meter.frame(1);
        Ok((1..=self.base.set_count() as SetIndex).filter(move |&j| {
            let _ = &guard;
            self.level(i).set_live(j)
        }))
    }

    pub(crate) fn live(&self, i: usize, e: Element) -> bool {
        if i == 0 {
            return true;
        }
        match &self.memo {
            None => {
                let _f = self.meter.frame(FRAME_WORDS);
                for j in 1..=i {
                    if self.run_check(j, e) {
                        return false;
                    }
                }
                true
            }
            Some(memo) => {
                let known = memo.borrow()[i - 1].get(e as usize).copied().unwrap_or(UNKNOWN);
                if known != UNKNOWN {
                    return known == LIVE;
                }
                let _f = self.meter.frame(FRAME_WORDS);
                let alive = self.live(i - 1, e) && !self.run_check(i, e);
                self.remember(i, e, alive);
                alive
            }
        }
    }

    fn remember(&self, i: usize, x: u32, alive: bool) {
        let memo = self.memo.as_ref().expect("memoized view");
        let mut tables = memo.borrow_mut();
        let table = &mut tables[i - 1];
        if table.is_empty() {
            let n = self.base.ground_size();
            table.resize(n + 1, UNKNOWN);
            let words = (2 * n as u64).div_ceil(u64::from(word_bits(n)));
            self.meter.charge(words);
            self.memo_words.set(self.memo_words.get() + words);
        }
        table[x as usize] = if alive { LIVE } else { DEAD };
    }

    fn run_check(&self, j: usize, e: Element) -> bool {
        let stage = &self.stages[j - 1];
        let _f = self.meter.frame(stage.words());
        stage.check(&self.level(j - 1), e)
    }
}

impl<F: FamilyAccess + ?Sized> Drop for LayeredFamilyView<'_, F> {
    fn drop(&mut self) {
        let _ = self.meter.release(self.memo_words.get());
    }
}

/// Read handle on one level of a family view.
pub struct FamilyLevel<'v, F: FamilyAccess + ?Sized> {
    view: &'v LayeredFamilyView<'v, F>,
    depth: usize,
}

impl<'v, F: FamilyAccess + ?Sized> FamilyLevel<'v, F> {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn base(&self) -> &'v F {
        self.view.base
    }

    pub fn meter(&self) -> &'v Meter {
        self.view.meter
    }

    pub fn element_live(&self, e: Element) -> bool {
        self.view.live(self.depth, e)
    }

    pub fn set_live(&self, j: SetIndex) -> bool {
        let base = self.view.base;
        let meter = self.meter();
        let _f = meter.frame(2);
        (1..=base.set_len(j, meter)).all(|t| {
            let e = base.set_element(j, t, meter).expect("t within set length");
            self.element_live(e)
        })
    }

    /// Live sets containing `e`, in set order.
    pub fn live_sets_of(&self, e: Element) -> impl Iterator<Item = SetIndex> + '_ {
        let guard = self.meter().frame(2);
        let mut i = 0;
        std::iter::from_fn(move || {
            let _ = &guard;
            loop {
                i += 1;
                let j = self.view.base.ith_set_of(e, i, self.meter())?;
                if self.set_live(j) {
                    return Some(j);
                }
            }
        })
    }

    pub fn live_count_of(&self, e: Element) -> usize {
        self.live_sets_of(e).count()
    }

    pub fn live_set_count(&self) -> usize {
        let _f = self.meter().frame(2);
        (1..=self.view.base.set_count() as SetIndex).filter(|&j| self.set_live(j)).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::SetFamilyInstance;
    use crate::oracle::FamilyPredicate;

    #[test]
    fn deleting_shared_element_kills_both_sets() {
        let f = SetFamilyInstance::new(3, 2, vec![vec![1, 2], vec![2, 3]]).unwrap();
        let m = Meter::new();
        let mut view = LayeredFamilyView::new(&f, &m, Mode::Layered);
        view.push(FamilyPredicate::Frequent(2));
        assert_eq!(view.stage_elements(1).unwrap().collect::<Vec<_>>(), vec![2]);
        assert_eq!(view.live_sets(1).unwrap().count(), 0);
        assert!(view.set_live(0, 1).unwrap());
        assert!(!view.set_live(1, 2).unwrap());
        assert!(view.element_live(1, 1).unwrap());
        assert!(view.set_live(1, 3).is_err());
    }
}
