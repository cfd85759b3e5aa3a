//! Exhaustive enumeration of subset pairs as `u64` masks.
//!
//! For a fixed `A`, the products `AB` for all `B` follow from
//! `A(B ∪ {b}) = AB ∪ Ab`, one OR per mask.

use rayon::prelude::*;

use crate::group::FiniteGroup;

/// Largest order the pair sweep accepts: `4^16` pairs is already far past
/// anything that finishes.
pub const MAX_SWEEP_ORDER: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("pair sweep over a group of order {order} exceeds the limit {limit}")]
pub struct SweepTooLarge {
    pub order: usize,
    pub limit: usize,
}

/// Mask arithmetic in a group of order at most [`MAX_SWEEP_ORDER`].
pub struct MaskGroup<'g> {
    group: &'g FiniteGroup,
    n: usize,
}

impl<'g> MaskGroup<'g> {
    pub fn new(group: &'g FiniteGroup) -> Result<Self, SweepTooLarge> {
        let n = group.order();
        if n > MAX_SWEEP_ORDER {
            return Err(SweepTooLarge {
                order: n,
                limit: MAX_SWEEP_ORDER,
            });
        }
        Ok(MaskGroup { group, n })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Number of nonempty subsets.
    pub fn nonempty(&self) -> u64 {
        (1u64 << self.n) - 1
    }

    /// `Ab`.
    pub fn translate_right(&self, a: u64, b: usize) -> u64 {
        let mut out = 0u64;
        let mut m = a;
        while m != 0 {
            let x = m.trailing_zeros() as usize;
            out |= 1 << self.group.mul(x, b);
            m &= m - 1;
        }
        out
    }

    /// `bA`.
    pub fn translate_left(&self, a: u64, b: usize) -> u64 {
        let mut out = 0u64;
        let mut m = a;
        while m != 0 {
            let x = m.trailing_zeros() as usize;
            out |= 1 << self.group.mul(b, x);
            m &= m - 1;
        }
        out
    }

    pub fn product(&self, a: u64, b: u64) -> u64 {
        let mut out = 0u64;
        let mut m = b;
        while m != 0 {
            let y = m.trailing_zeros() as usize;
            out |= self.translate_right(a, y);
            m &= m - 1;
        }
        out
    }

    /// `AB` for every mask `B`, indexed by `B` (entry 0 is empty).
    pub fn products_with_all(&self, a: u64) -> Vec<u64> {
        let shifts: Vec<u64> = (0..self.n).map(|b| self.translate_right(a, b)).collect();
        let mut out = vec![0u64; 1 << self.n];
        for bm in 1..out.len() {
            let low = bm & bm.wrapping_neg();
            out[bm] = out[bm & (bm - 1)] | shifts[low.trailing_zeros() as usize];
        }
        out
    }
}

/// Visits every pair of nonempty subsets in `(A, B)` mask order and keeps
/// what `f(A, B, AB)` returns. Work is split over `A`; the result order does
/// not depend on the thread count.
pub fn sweep_pairs<T, F>(group: &FiniteGroup, f: F) -> Result<Vec<T>, SweepTooLarge>
where
    T: Send,
    F: Fn(u64, u64, u64) -> Option<T> + Sync,
{
    let mg = MaskGroup::new(group)?;
    let chunks: Vec<Vec<T>> = (1..=mg.nonempty())
        .into_par_iter()
        .map(|a| {
            let prods = mg.products_with_all(a);
            (1..prods.len())
                .filter_map(|b| f(a, b as u64, prods[b]))
                .collect()
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

/// Like [`sweep_pairs`] but only counts the pairs accepted by `f`.
pub fn count_pairs<F>(group: &FiniteGroup, f: F) -> Result<u64, SweepTooLarge>
where
    F: Fn(u64, u64, u64) -> bool + Sync,
{
    let mg = MaskGroup::new(group)?;
    Ok((1..=mg.nonempty())
        .into_par_iter()
        .map(|a| {
            let prods = mg.products_with_all(a);
            (1..prods.len()).filter(|&b| f(a, b as u64, prods[b])).count() as u64
        })
        .sum())
}
