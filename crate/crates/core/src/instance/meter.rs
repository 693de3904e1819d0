use std::cell::Cell;

/// Errors raised by workspace accounting.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MeterError {
    #[error("release of {requested} words but only {held} are charged")]
    Underflow { requested: u64, held: u64 },
    #[error("scope left {exit} charged words, expected {entry}")]
    Unbalanced { entry: u64, exit: u64 },
}

/// Snapshot of what a computation cost.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MeterStats {
    /// Largest number of simultaneously charged workspace words.
    pub charged_peak_words: u64,
    /// Largest number of simultaneously charged primitive words.
    pub primitive_words: u64,
    pub input_accesses: u64,
    /// Number of times the read head had to move backwards, plus one for the first read.
    pub pass_estimate: u64,
}

impl MeterStats {
    /// Charged peak in bits for a universe of `n` items.
    pub fn charged_peak_bits(&self, n: usize) -> u64 {
        self.charged_peak_words * u64::from(word_bits(n))
    }
}

/// Bits needed to hold one id in `0..=n`.
pub fn word_bits(n: usize) -> u32 {
    (usize::BITS - n.leading_zeros()).max(1)
}

/// Workspace accountant shared by every metered routine.
///
/// Charged words model `O(log n)`-bit registers. Primitive words are
/// the handful of cursors that primitive walks (Euler tours, prime search)
/// keep; they are tracked separately so the layer bound can be audited on
/// charged words alone.
#[derive(Debug, Default)]
pub struct Meter {
    current: Cell<u64>,
    peak: Cell<u64>,
    prim_current: Cell<u64>,
    prim_peak: Cell<u64>,
    accesses: Cell<u64>,
    passes: Cell<u64>,
    head: Cell<Option<u64>>,
}

impl Meter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn charge(&self, words: u64) {
        let now = self.current.get() + words;
        self.current.set(now);
        if now > self.peak.get() {
            self.peak.set(now);
        }
    }

    pub fn release(&self, words: u64) -> Result<(), MeterError> {
        let held = self.current.get();
        if words > held {
            return Err(MeterError::Underflow { requested: words, held });
        }
        self.current.set(held - words);
        Ok(())
    }

    /// Charge `words` until the guard drops.
    pub fn frame(&self, words: u64) -> Frame<'_> {
        self.charge(words);
        Frame { meter: self, words }
    }

    /// Charge primitive words until the guard drops.
    pub fn primitive(&self, words: u64) -> PrimitiveFrame<'_> {
        let now = self.prim_current.get() + words;
        self.prim_current.set(now);
        if now > self.prim_peak.get() {
            self.prim_peak.set(now);
        }
        PrimitiveFrame { meter: self, words }
    }

    /// Record one read of the input cell at `position`.
    #[inline(always)]
    pub fn touch(&self, position: u64) {
        self.accesses.set(self.accesses.get() + 1);
        match self.head.get() {
            Some(h) if position > h => {}
            _ => self.passes.set(self.passes.get() + 1),
        }
        self.head.set(Some(position));
    }

    pub fn charged(&self) -> u64 {
        self.current.get()
    }

    pub fn stats(&self) -> MeterStats {
        MeterStats {
            charged_peak_words: self.peak.get(),
            primitive_words: self.prim_peak.get(),
            input_accesses: self.accesses.get(),
            pass_estimate: self.passes.get(),
        }
    }

    /// Run `body` and report what it cost on top of what was already charged.
    ///
    /// Fails if the body leaves the charged total different from its entry value.
    pub fn measure<R>(&self, body: impl FnOnce() -> R) -> Result<(R, MeterStats), MeterError> {
        let entry = self.current.get();
        let prim_entry = self.prim_current.get();
        let saved = (self.peak.get(), self.prim_peak.get());
        let (acc0, pass0) = (self.accesses.get(), self.passes.get());
        self.peak.set(entry);
        self.prim_peak.set(prim_entry);
        let head0 = self.head.replace(None);

        let out = body();

        let stats = MeterStats {
            charged_peak_words: self.peak.get() - entry,
            primitive_words: self.prim_peak.get() - prim_entry,
            input_accesses: self.accesses.get() - acc0,
            pass_estimate: self.passes.get() - pass0,
        };
        self.peak.set(self.peak.get().max(saved.0));
        self.prim_peak.set(self.prim_peak.get().max(saved.1));
        if self.head.get().is_none() {
            self.head.set(head0);
        }
        let exit = self.current.get();
        if exit != entry {
            return Err(MeterError::Unbalanced { entry, exit });
        }
        Ok((out, stats))
    }
}

/// Run `body` against a fresh meter.
pub fn with_meter<R>(body: impl FnOnce(&Meter) -> R) -> Result<(R, MeterStats), MeterError> {
    let meter = Meter::new();
    meter.measure(|| body(&meter))
}

#[must_use]
#[derive(Debug)]
pub struct Frame<'m> {
    meter: &'m Meter,
    words: u64,
}

impl Drop for Frame<'_> {
    fn drop(&mut self) {
        let held = self.meter.current.get();
        self.meter.current.set(held.saturating_sub(self.words));
    }
}

#[must_use]
#[derive(Debug)]
pub struct PrimitiveFrame<'m> {
    meter: &'m Meter,
    words: u64,
}

impl Drop for PrimitiveFrame<'_> {
    fn drop(&mut self) {
        let held = self.meter.prim_current.get();
        self.meter.prim_current.set(held.saturating_sub(self.words));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frames_nest_and_peak() {
        let (_, stats) = with_meter(|m| {
            let _a = m.frame(3);
            {
                let _b = m.frame(4);
            }
            let _c = m.frame(2);
        })
        .unwrap();
        assert_eq!(stats.charged_peak_words, 7);
    }

    #[test]
    fn release_without_charge_fails() {
        let m = Meter::new();
        assert_eq!(
            m.release(1),
            Err(MeterError::Underflow { requested: 1, held: 0 })
        );
    }

    #[test]
    fn leak_is_reported() {
        let r = with_meter(|m| m.charge(2));
        assert_eq!(r.unwrap_err(), MeterError::Unbalanced { entry: 0, exit: 2 });
    }

    #[test]
    fn passes_count_rewinds() {
        let (_, s) = with_meter(|m| {
            for p in [0, 1, 2, 0, 5, 1] {
                m.touch(p);
            }
        })
        .unwrap();
        assert_eq!(s.input_accesses, 6);
        assert_eq!(s.pass_estimate, 3);
    }

    #[test]
    fn word_bits_small() {
        assert_eq!(word_bits(0), 1);
        assert_eq!(word_bits(1), 1);
        assert_eq!(word_bits(7), 3);
        assert_eq!(word_bits(8), 4);
    }
}
