//! Kernels for budgeted vertex cover and hitting set.

use crate::instance::{degree, word_bits, Element, FamilyAccess, GraphAccess, Meter, SetIndex, Vertex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KernelOutcome<T> {
    /// No solution of the given size exists.
    No,
    Kernel(T),
}

impl<T> KernelOutcome<T> {
    pub fn is_no(&self) -> bool {
        matches!(self, KernelOutcome::No)
    }

    pub fn kernel(self) -> Option<T> {
        match self {
            KernelOutcome::No => None,
            KernelOutcome::Kernel(t) => Some(t),
        }
    }
}

/// High-degree kernel for vertex cover with budget `k`.
///
/// Vertices of degree above `k` are forced. If more than `k` are forced,
/// or more than `k^2` edges avoid them, the answer is NO. Otherwise the
/// payload is the forced vertices plus every endpoint of an unforced edge,
/// in id order; it is itself a vertex cover.
pub fn buss_vc_kernel<G: GraphAccess + ?Sized>(g: &G, k: usize, meter: &Meter) -> KernelOutcome<Vec<Vertex>> {
    let _f = meter.frame(4);
    let n = g.order() as Vertex;
    let high = |v: Vertex| degree(g, v, meter) > k;
    if (1..=n).filter(|&v| high(v)).nth(k).is_some() {
        return KernelOutcome::No;
    }
    let mut low_edges = 0usize;
    for u in 1..=n {
        if high(u) {
            continue;
        }
        let mut i = 1;
        while let Some(v) = g.ith_neighbor(u, i, meter) {
            if u < v && !high(v) {
                low_edges += 1;
                if low_edges > k * k {
                    return KernelOutcome::No;
                }
            }
            i += 1;
        }
    }
    let keep = |v: Vertex| {
        if high(v) {
            return true;
        }
        let mut i = 1;
        while let Some(w) = g.ith_neighbor(v, i, meter) {
            if !high(w) {
                return true;
            }
            i += 1;
        }
        false
    };
    KernelOutcome::Kernel((1..=n).filter(|&v| keep(v)).collect())
}

fn threshold(k: usize, exp: usize) -> u128 {
    (k as u128 + 1).checked_pow(exp as u32).unwrap_or(u128::MAX)
}

/// Retention decisions of the thresholded hitting-set kernel, one per set,
/// or `None` for a NO verdict.
///
/// Sets are processed in input order. Set `A` is kept iff for every proper
/// subset `B` of `A` (the empty set included) fewer than `(k+1)^(d-|B|)`
/// earlier kept sets contain `B`. A discarded set whose only witness is
/// the empty set means `(k+1)^d` kept sets already exist; that is a NO.
///
/// The decisions made so far are the only state carried between sets; they
/// are charged as one bit per set.
pub fn fk_retention<F: FamilyAccess + ?Sized>(f: &F, k: usize, meter: &Meter) -> Option<Vec<bool>> {
    let m = f.set_count();
    let d = f.rank();
    let bits = u64::from(word_bits(f.ground_size().max(m)));
    let _bitmap = meter.frame((m as u64).div_ceil(bits));
    let _f = meter.frame(d as u64 + 4);
    let mut keep = vec![false; m];
    let mut a: Vec<Element> = Vec::with_capacity(d);
    for j in 1..=m as SetIndex {
        a.clear();
        a.extend((1..=f.set_len(j, meter)).map(|t| f.set_element(j, t, meter).expect("within set")));
        let mut empty_witness = false;
        let mut other_witness = false;
        for mask in 0u32..(1 << a.len()) - 1 {
            let size = mask.count_ones() as usize;
            let limit = threshold(k, d - size);
            let mut count: u128 = 0;
            for (jj, _) in keep[..j as usize - 1].iter().enumerate().filter(|(_, &kp)| kp) {
                let jj = jj as SetIndex + 1;
                let inside = a
                    .iter()
                    .enumerate()
                    .filter(|(t, _)| mask >> t & 1 == 1)
                    .all(|(_, &e)| f.contains(jj, e, meter));
                if inside {
                    count += 1;
                    if count >= limit {
                        break;
                    }
                }
            }
            if count >= limit {
                if size == 0 {
                    empty_witness = true;
                } else {
                    other_witness = true;
                    break;
                }
            }
        }
        if empty_witness && !other_witness {
            return None;
        }
        keep[j as usize - 1] = !empty_witness && !other_witness;
    }
    Some(keep)
}

/// Thresholded kernel for `d`-hitting set with budget `k`; the payload is
/// the kept set indices in input order.
pub fn fk_hs_kernel<F: FamilyAccess + ?Sized>(f: &F, k: usize, meter: &Meter) -> KernelOutcome<Vec<SetIndex>> {
    match fk_retention(f, k, meter) {
        None => KernelOutcome::No,
        Some(keep) => KernelOutcome::Kernel(
            keep.iter().enumerate().filter(|(_, &kp)| kp).map(|(j, _)| j as SetIndex + 1).collect(),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{GraphInstance, SetFamilyInstance};

    #[test]
    fn buss_examples() {
        let m = Meter::new();
        let star = GraphInstance::from_edges(6, (2..=6).map(|v| (1, v))).unwrap();
        assert_eq!(buss_vc_kernel(&star, 1, &m), KernelOutcome::Kernel(vec![1]));
        let matching = GraphInstance::from_edges(8, [(1, 2), (3, 4), (5, 6), (7, 8)]).unwrap();
        assert_eq!(buss_vc_kernel(&matching, 2, &m), KernelOutcome::Kernel((1..=8).collect()));
        assert_eq!(buss_vc_kernel(&matching, 1, &m), KernelOutcome::No);
        assert_eq!(buss_vc_kernel(&GraphInstance::empty(3), 0, &m), KernelOutcome::Kernel(vec![]));
    }

    #[test]
    fn fk_examples() {
        let m = Meter::new();
        let two = SetFamilyInstance::new(2, 1, vec![vec![1], vec![2]]).unwrap();
        assert!(fk_hs_kernel(&two, 0, &m).is_no());
        let three = SetFamilyInstance::new(3, 1, vec![vec![1], vec![2], vec![3]]).unwrap();
        assert!(fk_hs_kernel(&three, 1, &m).is_no());
        assert_eq!(fk_hs_kernel(&three, 2, &m), KernelOutcome::Kernel(vec![1, 2, 3]));
    }

    #[test]
    fn sunflower_core_is_kept_once_saturated() {
        // five pairs through element 1; with k = 1 only (k+1)^(2-1) = 2 may share it
        let m = Meter::new();
        let f = SetFamilyInstance::new(6, 2, (2..=6).map(|e| vec![1, e])).unwrap();
        assert_eq!(fk_hs_kernel(&f, 1, &m), KernelOutcome::Kernel(vec![1, 2]));
    }
}
