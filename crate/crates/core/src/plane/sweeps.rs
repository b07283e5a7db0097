use num_bigint::BigInt;

use super::{
    fermat, h_bound_gap, h_index, klein_closed_forms, klein_h_formula, klein_recursion, theorem_b_family,
    theorem_b_formula, PlaneConfig,
};
use crate::error::Result;
use crate::exec::{try_map, Mode};
use crate::field::{q, Rational};

/// One value of a family sweep next to its closed form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRow {
    pub k: u32,
    pub value: Rational,
    pub expected: Rational,
}

impl SweepRow {
    pub fn matches(&self) -> bool {
        self.value == self.expected
    }
}

/// `h` of the Fermat arrangements against `−3k²/(k²+3)`.
pub fn fermat_sweep(ks: Vec<u32>, mode: Mode, seed: u64) -> Result<Vec<SweepRow>> {
    try_map(mode, ks, |k| {
        let value = h_index(&fermat(k, seed)?)?;
        let k2 = (k as i64).pow(2);
        Ok(SweepRow { k, value, expected: q(-3 * k2, k2 + 3) })
    })
}

pub fn theorem_b_sweep(ks: Vec<u32>, mode: Mode, seed: u64) -> Result<Vec<SweepRow>> {
    try_map(mode, ks, |k| Ok(SweepRow { k, value: theorem_b_family(k, seed)?, expected: theorem_b_formula(k) }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KleinRow {
    pub k: u32,
    pub k2: BigInt,
    pub size_bound: BigInt,
    pub h_bound: Rational,
    pub expected: Rational,
    pub k2_closed: Rational,
    pub size_closed: Rational,
}

impl KleinRow {
    /// Whether the alternative closed forms disagree with the component sums.
    pub fn discrepancy(&self) -> bool {
        self.k2_closed != Rational::from_integer(self.k2.clone())
            || self.size_closed != Rational::from_integer(self.size_bound.clone())
    }
}

pub fn klein_sweep(kmax: u32, mode: Mode) -> Result<Vec<KleinRow>> {
    try_map(mode, (2..=kmax).collect(), |k| {
        let b = klein_recursion(k)?;
        let (k2_closed, size_closed) = klein_closed_forms(k);
        Ok(KleinRow {
            k,
            k2: b.k2,
            size_bound: b.size_bound,
            h_bound: b.h_bound,
            expected: klein_h_formula(k),
            k2_closed,
            size_closed,
        })
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HBoundRow {
    pub k: u32,
    pub value: Rational,
    pub limit: Rational,
}

pub fn h_bound_sweep(c: &PlaneConfig, ks: Vec<u32>, mode: Mode) -> Result<Vec<HBoundRow>> {
    try_map(mode, ks, |k| {
        let g = h_bound_gap(c, k)?;
        Ok(HBoundRow { k, value: g.value, limit: g.limit })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::wiman;

    #[test]
    fn modes_agree() {
        let a = theorem_b_sweep((2..=6).collect(), Mode::Sequential, 0).unwrap();
        let b = theorem_b_sweep((2..=6).collect(), Mode::Parallel, 0).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(SweepRow::matches));
        let rows = klein_sweep(5, Mode::Parallel).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.h_bound == r.expected && r.discrepancy()));
        let h = h_bound_sweep(&wiman(), vec![2, 10], Mode::Sequential).unwrap();
        assert!(h[0].value > h[1].value && h[1].value > h[1].limit);
    }
}
