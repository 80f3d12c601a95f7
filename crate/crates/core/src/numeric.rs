//! Small numerical kernels shared by the inference modules.

use std::f64::consts::PI;

/// Neumaier-compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    values.into_iter().collect::<CompensatedSum>().total()
}

/// Table of `ln k!` for `k = 0..=n`, accumulated in compensated arithmetic.
pub fn ln_factorials(n: usize) -> Vec<f64> {
    let mut table = Vec::with_capacity(n + 1);
    let mut acc = CompensatedSum::new();
    table.push(0.0);
    for k in 1..=n {
        acc.add((k as f64).ln());
        table.push(acc.total());
    }
    table
}

/// `x * ln(p)` with the convention `0 * ln(0) = 0`.
pub fn xlogy(x: f64, p: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * p.ln()
    }
}

/// Binomial probability mass function evaluated in log space.
pub fn binomial_pmf(x: usize, n: usize, p: f64, ln_fact: &[f64]) -> f64 {
    debug_assert!(ln_fact.len() > n);
    if x > n {
        return 0.0;
    }
    let ln_choose = ln_fact[n] - ln_fact[x] - ln_fact[n - x];
    let ll = ln_choose + xlogy(x as f64, p) + xlogy((n - x) as f64, 1.0 - p);
    ll.exp()
}

/// Complementary error function, accurate to a few ulps in relative terms.
///
/// Uses the all-positive series `erf(x) = 2/sqrt(pi) e^{-x^2} sum 2^k x^{2k+1} / (2k+1)!!`
/// for `|x| < 2.5` and a Lentz continued fraction for the upper tail.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < 2.5 {
        return 1.0 - erf_series(x);
    }
    erfc_continued_fraction(x)
}

pub fn erf(x: f64) -> f64 {
    if x.abs() < 2.5 {
        erf_series(x)
    } else if x > 0.0 {
        1.0 - erfc(x)
    } else {
        erfc(-x) - 1.0
    }
}

fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= 2.0 * x2 / (2.0 * k + 1.0);
        sum += term;
        if term.abs() <= sum.abs() * 1e-17 {
            break;
        }
        if k > 500.0 {
            break;
        }
    }
    2.0 / PI.sqrt() * (-x2).exp() * sum
}

// erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + 2/(x + ...)))))
fn erfc_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for k in 1..500 {
        let a = k as f64 / 2.0;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / PI.sqrt() / f
}

/// Solves `erfc(t) = q` for `t >= 0`, `0 < q <= 1`.
pub fn erfc_inv(q: f64) -> f64 {
    assert!(q > 0.0 && q <= 1.0, "erfc_inv argument {q} outside (0, 1]");
    if q == 1.0 {
        return 0.0;
    }
    // Bracket and refine with safeguarded Newton steps.
    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    while erfc(hi) > q {
        hi *= 2.0;
    }
    let mut t = 0.5 * (lo + hi);
    for _ in 0..200 {
        let value = erfc(t) - q;
        if value > 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let deriv = -2.0 / PI.sqrt() * (-t * t).exp();
        let mut next = t - value / deriv;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - t).abs() <= 1e-15 * t.max(1.0) {
            return next;
        }
        t = next;
    }
    t
}

/// Quantile of the chi-square distribution with one degree of freedom.
///
/// With `Z ~ N(0,1)`, `P(Z^2 <= c) = erf(sqrt(c/2))`, so the `p`-quantile
/// is `2 * erfinv(p)^2 = 2 * erfc_inv(1 - p)^2`.
pub fn chi_square1_quantile(p: f64) -> f64 {
    assert!((0.0..1.0).contains(&p), "probability {p} outside [0, 1)");
    if p == 0.0 {
        return 0.0;
    }
    let t = erfc_inv(1.0 - p);
    2.0 * t * t
}
