//! Exact sample moments.
//!
//! Tree-size samples span more than twenty orders of magnitude, so sums and
//! sums of squares are kept as exact integers. Floats appear only when a
//! summary is rendered.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use crate::count::{ratio_to_f64, sci_ratio, BigCount};

/// Running `n`, `Σx`, `Σx²`, `min`, `max` over nonnegative integer samples.
///
/// Values that fit in `u128` are summed in machine words and spilled into the
/// big-integer totals on overflow.
#[derive(Debug, Clone, Default)]
pub struct MomentAccumulator {
    n: u64,
    sum: BigCount,
    sum_sq: BigCount,
    min: Option<BigCount>,
    max: Option<BigCount>,
    sum_small: u128,
    sq_small: u128,
    min_small: Option<u128>,
    max_small: Option<u128>,
}

impl MomentAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn push_u128(&mut self, x: u128) {
        self.n += 1;
        match self.sum_small.checked_add(x) {
            Some(s) => self.sum_small = s,
            None => {
                self.sum += self.sum_small;
                self.sum_small = x;
            }
        }
        match x.checked_mul(x) {
            Some(sq) => match self.sq_small.checked_add(sq) {
                Some(s) => self.sq_small = s,
                None => {
                    self.sum_sq += self.sq_small;
                    self.sq_small = sq;
                }
            },
            None => {
                let b = BigUint::from(x);
                self.sum_sq += &b * &b;
            }
        }
        self.min_small = Some(self.min_small.map_or(x, |m| m.min(x)));
        self.max_small = Some(self.max_small.map_or(x, |m| m.max(x)));
    }

    pub fn push(&mut self, x: &BigCount) {
        if let Ok(small) = u128::try_from(x) {
            self.push_u128(small);
            return;
        }
        self.n += 1;
        self.sum += x;
        self.sum_sq += x * x;
        if self.min.as_ref().is_none_or(|m| x < m) {
            self.min = Some(x.clone());
        }
        if self.max.as_ref().is_none_or(|m| x > m) {
            self.max = Some(x.clone());
        }
    }

    /// Folds `other` into `self`. Exact, so order never matters.
    pub fn merge(&mut self, other: &MomentAccumulator) {
        self.n += other.n;
        self.sum += other.sum();
        self.sum_sq += other.sum_sq();
        self.min = pick(self.min.take(), other.min(), Ordering::Less);
        self.max = pick(self.max.take(), other.max(), Ordering::Greater);
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn sum(&self) -> BigCount {
        &self.sum + self.sum_small
    }

    pub fn sum_sq(&self) -> BigCount {
        &self.sum_sq + self.sq_small
    }

    pub fn min(&self) -> Option<BigCount> {
        pick(self.min.clone(), self.min_small.map(BigUint::from), Ordering::Less)
    }

    pub fn max(&self) -> Option<BigCount> {
        pick(self.max.clone(), self.max_small.map(BigUint::from), Ordering::Greater)
    }

    /// Mean as an exact fraction `(Σx, n)`.
    pub fn mean_ratio(&self) -> Option<(BigCount, BigCount)> {
        (self.n > 0).then(|| (self.sum(), BigCount::from(self.n)))
    }

    /// Unbiased sample variance as an exact fraction
    /// `(nΣx² − (Σx)², n(n−1))`.
    pub fn variance_ratio(&self) -> Option<(BigCount, BigCount)> {
        if self.n < 2 {
            return None;
        }
        let n = BigCount::from(self.n);
        let s = self.sum();
        let num = &n * self.sum_sq() - &s * &s;
        Some((num, &n * (&n - 1u32)))
    }

    pub fn mean(&self) -> f64 {
        self.mean_ratio().map_or(f64::NAN, |(a, b)| ratio_to_f64(&a, &b))
    }

    pub fn variance(&self) -> f64 {
        self.variance_ratio().map_or(f64::NAN, |(a, b)| ratio_to_f64(&a, &b))
    }

    pub fn stddev(&self) -> f64 {
        self.variance().sqrt()
    }

    /// Standard error of the mean, `s / √n`.
    pub fn stderr(&self) -> f64 {
        self.variance_ratio().map_or(f64::NAN, |(a, b)| {
            ratio_to_f64(&a, &(b * self.n)).sqrt()
        })
    }

    pub fn summary(&self) -> MomentSummary {
        let exact = |r: Option<(BigCount, BigCount)>| r.map(|(a, b)| render_ratio(&a, &b));
        let sci = |r: &Option<(BigCount, BigCount)>| r.as_ref().map(|(a, b)| sci_ratio(a, b, 4));
        let mean = self.mean_ratio();
        let var = self.variance_ratio();
        MomentSummary {
            n: self.n,
            mean: exact(mean.clone()),
            mean_approx: self.mean(),
            mean_sci: sci(&mean),
            variance: exact(var),
            stddev_approx: self.stddev(),
            stderr_approx: self.stderr(),
            min: self.min().map(|m| m.to_str_radix(10)),
            min_approx: self.min().map(|m| crate::count::to_f64(&m)),
            max: self.max().map(|m| m.to_str_radix(10)),
            max_approx: self.max().map(|m| crate::count::to_f64(&m)),
        }
    }
}

fn pick(a: Option<BigCount>, b: Option<BigCount>, want: Ordering) -> Option<BigCount> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if b.cmp(&a) == want { b } else { a }),
        (a, b) => a.or(b),
    }
}

impl PartialEq for MomentAccumulator {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.sum() == other.sum()
            && self.sum_sq() == other.sum_sq()
            && self.min() == other.min()
            && self.max() == other.max()
    }
}

impl Eq for MomentAccumulator {}

/// Reduced fraction as `"p/q"`, or `"p"` when integral.
pub fn render_ratio(num: &BigCount, den: &BigCount) -> String {
    use num_integer::Integer;
    if num.is_zero() {
        return "0".into();
    }
    let g = num.gcd(den);
    let (p, q) = (num / &g, den / &g);
    if q == BigCount::from(1u32) {
        p.to_str_radix(10)
    } else {
        format!("{}/{}", p.to_str_radix(10), q.to_str_radix(10))
    }
}

/// Rendered statistics: exact decimal strings next to float approximations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentSummary {
    pub n: u64,
    pub mean: Option<String>,
    pub mean_approx: f64,
    pub mean_sci: Option<String>,
    pub variance: Option<String>,
    pub stddev_approx: f64,
    pub stderr_approx: f64,
    pub min: Option<String>,
    pub min_approx: Option<f64>,
    pub max: Option<String>,
    pub max_approx: Option<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_sample_moments() {
        let mut acc = MomentAccumulator::new();
        for x in [2u128, 4, 4, 4, 5, 5, 7, 9] {
            acc.push_u128(x);
        }
        assert_eq!(acc.n(), 8);
        assert_eq!(acc.mean(), 5.0);
        // sample variance with n-1: 32/7
        assert!((acc.variance() - 32.0 / 7.0).abs() < 1e-12);
        assert_eq!(acc.min(), Some(BigUint::from(2u32)));
        assert_eq!(acc.max(), Some(BigUint::from(9u32)));
        assert_eq!(acc.summary().variance.as_deref(), Some("32/7"));
    }

    #[test]
    fn spills_past_u128() {
        let big = u128::MAX / 3;
        let mut acc = MomentAccumulator::new();
        for _ in 0..5 {
            acc.push_u128(big);
        }
        let b = BigUint::from(big);
        assert_eq!(acc.sum(), &b * 5u32);
        assert_eq!(acc.sum_sq(), &b * &b * 5u32);
        assert_eq!(acc.variance_ratio().unwrap().0, BigUint::zero());
        let huge = crate::count::factorial(13).pow(4);
        acc.push(&huge);
        assert_eq!(acc.max(), Some(huge.clone()));
        assert_eq!(acc.sum(), &b * 5u32 + &huge);
    }

    #[test]
    fn single_sample_has_no_variance() {
        let mut acc = MomentAccumulator::new();
        acc.push_u128(3);
        assert!(acc.variance_ratio().is_none());
        assert!(acc.stderr().is_nan());
        assert_eq!(acc.mean(), 3.0);
    }

    proptest! {
        #[test]
        fn merge_is_order_independent(xs in proptest::collection::vec(any::<u128>(), 0..40), split in 0usize..40) {
            let split = split.min(xs.len());
            let mut whole = MomentAccumulator::new();
            xs.iter().for_each(|&x| whole.push_u128(x));
            let mut a = MomentAccumulator::new();
            let mut b = MomentAccumulator::new();
            xs[..split].iter().for_each(|&x| a.push_u128(x));
            xs[split..].iter().rev().for_each(|&x| b.push(&BigUint::from(x)));
            let mut ab = a.clone();
            ab.merge(&b);
            let mut ba = b.clone();
            ba.merge(&a);
            prop_assert_eq!(&ab, &whole);
            prop_assert_eq!(&ba, &whole);
            let naive: BigUint = xs.iter().map(|&x| BigUint::from(x)).sum();
            prop_assert_eq!(whole.sum(), naive);
        }
    }
}
