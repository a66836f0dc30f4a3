use std::collections::BTreeMap;

use rayon::prelude::*;

use super::poly;
use super::qp::QuasiPolynomial;
use crate::rational::{format_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FitError {
    #[error(
        "fit with period {period} and degree {degree} disagrees at m = {at}: counted {expected}, interpolated {fitted}"
    )]
    Mismatch { period: usize, degree: usize, at: u64, expected: u64, fitted: String },
    #[error("period {period} and degree {degree} need samples up to m = {needed}, above the limit {limit}")]
    InsufficientSamples { period: usize, degree: usize, needed: u64, limit: u64 },
    #[error("no period up to {max_period} fits with degree at most {max_degree}")]
    NoPeriodFound { max_period: usize, max_degree: usize },
    #[error("period and base must be at least 1")]
    BadParameters,
}

/// Where samples are taken and how many are held out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FitOptions {
    /// Smallest sampled argument.
    pub base: u64,
    /// Held-out samples per residue class beyond the `D + 1` interpolation points.
    pub validation: usize,
    /// Largest argument the counter may be asked for.
    pub max_sample: Option<u64>,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { base: 1, validation: 2, max_sample: None }
    }
}

impl FitOptions {
    pub fn with_base(base: u64) -> Self {
        FitOptions { base, ..Self::default() }
    }
}

/// A counting function with memoized values, so that trying several periods
/// never recounts the same argument.
pub struct Sampler<F> {
    counter: F,
    memo: BTreeMap<u64, u64>,
}

impl<F: Fn(u64) -> u64 + Sync> Sampler<F> {
    pub fn new(counter: F) -> Self {
        Sampler { counter, memo: BTreeMap::new() }
    }

    /// Counts every missing argument, concurrently.
    pub fn prefetch(&mut self, args: impl IntoIterator<Item = u64>) {
        let mut missing: Vec<u64> = args.into_iter().filter(|m| !self.memo.contains_key(m)).collect();
        missing.sort_unstable();
        missing.dedup();
        let counter = &self.counter;
        let values: Vec<(u64, u64)> = missing.into_par_iter().map(|m| (m, counter(m))).collect();
        self.memo.extend(values);
    }

    pub fn get(&mut self, m: u64) -> u64 {
        if let Some(&v) = self.memo.get(&m) {
            return v;
        }
        let v = (self.counter)(m);
        self.memo.insert(m, v);
        v
    }

    /// Every value counted so far.
    pub fn samples(&self) -> &BTreeMap<u64, u64> {
        &self.memo
    }

    /// Fits with the given period and degree bound.
    ///
    /// Residue class `r` is sampled at `r', r' + K, …` where `r'` is the
    /// smallest argument `≥ base` in that class: the first `D + 1` samples are
    /// interpolated exactly and the next `validation` must agree.
    pub fn fit(&mut self, period: usize, degree: usize, opts: &FitOptions) -> Result<QuasiPolynomial, FitError> {
        if period == 0 || opts.base == 0 {
            return Err(FitError::BadParameters);
        }
        let k = period as u64;
        let per_class = degree + 1 + opts.validation;
        let starts: Vec<u64> = (0..k).map(|r| opts.base + (r + k - opts.base % k) % k).collect();
        let args = |r: usize| {
            let start = starts[r];
            (0..per_class as u64).map(move |i| start + i * k)
        };
        let needed = starts.iter().max().expect("period is positive") + (per_class as u64 - 1) * k;
        if let Some(limit) = opts.max_sample {
            if needed > limit {
                return Err(FitError::InsufficientSamples { period, degree, needed, limit });
            }
        }
        self.prefetch((0..period).flat_map(&args));

        let mut polys = vec![Vec::new(); period];
        for (r, start) in starts.iter().enumerate() {
            let xs: Vec<i64> = args(r).map(|m| m as i64).collect();
            let ys: Vec<Rational> = args(r).map(|m| Rational::from_integer(self.memo[&m].into())).collect();
            let p = poly::interpolate(&xs[..=degree], &ys[..=degree]);
            for (x, y) in xs.iter().zip(&ys).skip(degree + 1) {
                let v = poly::evaluate(&p, &Rational::from_integer((*x).into()));
                if v != *y {
                    return Err(FitError::Mismatch {
                        period,
                        degree,
                        at: *x as u64,
                        expected: self.memo[&(*x as u64)],
                        fitted: format_rational(&v),
                    });
                }
            }
            polys[(*start % k) as usize] = p;
        }
        Ok(QuasiPolynomial::new(polys))
    }

    /// Smallest period `≤ max_period` that fits with degree `≤ max_degree`.
    pub fn detect_period(
        &mut self,
        max_degree: usize,
        max_period: usize,
        opts: &FitOptions,
    ) -> Result<QuasiPolynomial, FitError> {
        for k in 1..=max_period {
            match self.fit(k, max_degree, opts) {
                Ok(q) => return Ok(q),
                Err(FitError::Mismatch { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(FitError::NoPeriodFound { max_period, max_degree })
    }
}

/// One-shot [`Sampler::fit`].
pub fn fit(
    counter: impl Fn(u64) -> u64 + Sync,
    period: usize,
    degree: usize,
    opts: &FitOptions,
) -> Result<QuasiPolynomial, FitError> {
    Sampler::new(counter).fit(period, degree, opts)
}

/// One-shot [`Sampler::detect_period`]; the period is `result.period()`.
pub fn detect_period(
    counter: impl Fn(u64) -> u64 + Sync,
    max_degree: usize,
    max_period: usize,
    opts: &FitOptions,
) -> Result<QuasiPolynomial, FitError> {
    Sampler::new(counter).detect_period(max_degree, max_period, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ehrhart::LeadingCoefficient;
    use crate::rational::{int, rat};

    fn n1(f: u64) -> u64 {
        if f < 2 {
            0
        } else {
            (f - 1) / 2
        }
    }

    /// Integers in the open interval (f/3, f/2).
    fn q2(f: u64) -> u64 {
        (f / 3 + 1..f.div_ceil(2)).count() as u64
    }

    #[test]
    fn fits_n1() {
        let q = fit(n1, 2, 1, &FitOptions::with_base(4)).unwrap();
        assert_eq!(q.polys()[0], vec![int(-1), rat(1, 2)]);
        assert_eq!(q.polys()[1], vec![rat(-1, 2), rat(1, 2)]);
        assert_eq!(q.leading_coefficient(), LeadingCoefficient::Constant(rat(1, 2)));
    }

    #[test]
    fn fits_q2_six_branches() {
        let q = fit(q2, 6, 1, &FitOptions::default()).unwrap();
        let consts = [-6, -1, -2, -3, -4, 1];
        for (r, c) in consts.iter().enumerate() {
            assert_eq!(q.polys()[r], vec![rat(*c, 6), rat(1, 6)], "residue {r}");
        }
    }

    #[test]
    fn constant_counter() {
        let q = fit(|_| 5, 1, 0, &FitOptions::default()).unwrap();
        assert_eq!(q, QuasiPolynomial::constant(int(5)));
        assert_eq!(detect_period(|_| 5, 3, 10, &FitOptions::default()).unwrap(), q);
    }

    #[test]
    fn wrong_period_is_a_mismatch() {
        let err = fit(q2, 3, 1, &FitOptions::default()).unwrap_err();
        assert!(matches!(err, FitError::Mismatch { period: 3, .. }), "{err}");
        assert!(matches!(fit(q2, 0, 1, &FitOptions::default()), Err(FitError::BadParameters)));
    }

    #[test]
    fn detects_periods() {
        assert_eq!(detect_period(n1, 1, 10, &FitOptions::with_base(4)).unwrap().period(), 2);
        assert_eq!(detect_period(q2, 1, 10, &FitOptions::with_base(2)).unwrap().period(), 6);
        assert_eq!(
            detect_period(q2, 1, 5, &FitOptions::with_base(2)),
            Err(FitError::NoPeriodFound { max_period: 5, max_degree: 1 })
        );
    }

    #[test]
    fn too_few_samples_can_accept_a_wrong_period() {
        // q2 is 0 on 1..=4, so a constant passes two held-out checks from base 1
        let q = detect_period(q2, 1, 10, &FitOptions::default()).unwrap();
        assert_eq!(q, QuasiPolynomial::zero());
        let opts = FitOptions { validation: 4, ..FitOptions::default() };
        assert_eq!(detect_period(q2, 1, 10, &opts).unwrap().period(), 6);
    }

    #[test]
    fn sample_limit() {
        let opts = FitOptions { base: 1, validation: 2, max_sample: Some(20) };
        // period 6, 4 samples per class: largest is 6 + 3 * 6 = 24
        assert_eq!(
            fit(q2, 6, 1, &opts),
            Err(FitError::InsufficientSamples { period: 6, degree: 1, needed: 24, limit: 20 })
        );
        let opts = FitOptions { validation: 1, max_sample: Some(20), ..opts };
        assert!(fit(q2, 6, 1, &opts).is_ok());
    }

    #[test]
    fn doubled_period_agrees_with_minimal() {
        let opts = FitOptions::default();
        let mut s = Sampler::new(q2);
        let q6 = s.fit(6, 1, &opts).unwrap();
        let q12 = s.fit(12, 1, &opts).unwrap();
        assert!(q6.same_function(&q12));
        for (&m, &v) in s.samples() {
            assert_eq!(q12.evaluate(m as i64), int(v as i64));
        }
    }
}
