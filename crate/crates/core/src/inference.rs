//! Likelihood-based fuzzy mass functions and binomial inference on a finite parameter grid.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{Frame, FuzzySet};
use crate::fuzzy_mass::FuzzyMassFunction;
use crate::mass::MassFunction;
use crate::numeric::{binomial_pmf, chi_square1_quantile, ln_factorials, xlogy, CompensatedSum};

/// Largest grid or sample size accepted by the binomial model.
pub const MAX_BINOMIAL_SIZE: usize = 1_000_000;

/// A statistical model with a finite parameter frame and a finite sample space.
pub trait DiscreteModel: Sync {
    fn param_frame(&self) -> &Frame;

    /// Number of outcomes; outcomes are indexed `0..outcome_count()`.
    fn outcome_count(&self) -> usize;

    /// `f(x; θ)` for the parameter at `theta_index`.
    fn pmf(&self, theta_index: usize, outcome: usize) -> f64;

    /// `ln L(θ; x)` up to an additive constant independent of `θ`.
    fn ln_likelihood(&self, theta_index: usize, outcome: usize) -> f64 {
        self.pmf(theta_index, outcome).ln()
    }

    fn check_outcome(&self, outcome: usize) -> Result<()> {
        if outcome < self.outcome_count() {
            Ok(())
        } else {
            Err(Error::InvalidOutcome {
                outcome,
                size: self.outcome_count(),
            })
        }
    }
}

/// Number of black balls in `n` draws with replacement from an urn of `N` balls,
/// with `θ ∈ {0, 1/N, …, 1}` the unknown proportion of black balls.
#[derive(Debug, Clone)]
pub struct BinomialModel {
    grid_size: usize,
    n: usize,
    frame: Frame,
    thetas: Vec<f64>,
    ln_fact: Vec<f64>,
}

impl BinomialModel {
    pub fn new(grid_size: usize, n: usize) -> Result<Self> {
        if grid_size == 0 {
            return Err(Error::InvalidArgument("grid size N must be at least 1".into()));
        }
        if n == 0 {
            return Err(Error::InvalidArgument("sample size n must be at least 1".into()));
        }
        for (what, value) in [("grid size N", grid_size), ("sample size n", n)] {
            if value > MAX_BINOMIAL_SIZE {
                return Err(Error::TooLarge {
                    what,
                    value,
                    max: MAX_BINOMIAL_SIZE,
                });
            }
        }
        let thetas: Vec<f64> = (0..=grid_size)
            .map(|i| i as f64 / grid_size as f64)
            .collect();
        let frame = Frame::new((0..=grid_size).map(|i| format!("{i}/{grid_size}")))?;
        Ok(BinomialModel {
            grid_size,
            n,
            frame,
            thetas,
            ln_fact: ln_factorials(n),
        })
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    /// Index of a grid value; fails when `theta` is not `i/N` for an integer `i`.
    pub fn theta_index(&self, theta: f64) -> Result<usize> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::NotOnGrid(theta));
        }
        let i = (theta * self.grid_size as f64).round() as usize;
        if (self.thetas[i] - theta).abs() <= 1e-9 {
            Ok(i)
        } else {
            Err(Error::NotOnGrid(theta))
        }
    }

    /// `P(X = x | θ)` for an arbitrary `θ ∈ [0, 1]`.
    pub fn pmf_at(&self, x: usize, theta: f64) -> f64 {
        binomial_pmf(x, self.n, theta, &self.ln_fact)
    }

    /// `ln θˣ(1−θ)ⁿ⁻ˣ` with `0·ln 0 = 0`.
    pub fn ln_kernel(&self, theta: f64, x: usize) -> f64 {
        xlogy(x as f64, theta) + xlogy((self.n - x) as f64, 1.0 - theta)
    }
}

impl DiscreteModel for BinomialModel {
    fn param_frame(&self) -> &Frame {
        &self.frame
    }

    fn outcome_count(&self) -> usize {
        self.n + 1
    }

    fn pmf(&self, theta_index: usize, outcome: usize) -> f64 {
        self.pmf_at(outcome, self.thetas[theta_index])
    }

    fn ln_likelihood(&self, theta_index: usize, outcome: usize) -> f64 {
        self.ln_kernel(self.thetas[theta_index], outcome)
    }
}

/// Model given by an explicit table `pmf[θ][x]`.
#[derive(Debug, Clone)]
pub struct TabularModel {
    frame: Frame,
    table: Vec<Vec<f64>>,
}

impl TabularModel {
    pub fn new(frame: &Frame, table: Vec<Vec<f64>>) -> Result<Self> {
        if table.len() != frame.len() {
            return Err(Error::LengthMismatch {
                expected: frame.len(),
                got: table.len(),
            });
        }
        let outcomes = table[0].len();
        for row in &table {
            if row.len() != outcomes {
                return Err(Error::LengthMismatch {
                    expected: outcomes,
                    got: row.len(),
                });
            }
            if let Some(&bad) = row.iter().find(|p| !(0.0..=1.0).contains(*p)) {
                return Err(Error::InvalidArgument(format!("probability {bad} outside [0, 1]")));
            }
            let total = row.iter().copied().collect::<CompensatedSum>().total();
            if (total - 1.0).abs() > 1e-10 {
                return Err(Error::MassSum(total));
            }
        }
        Ok(TabularModel {
            frame: frame.clone(),
            table,
        })
    }
}

impl DiscreteModel for TabularModel {
    fn param_frame(&self) -> &Frame {
        &self.frame
    }

    fn outcome_count(&self) -> usize {
        self.table[0].len()
    }

    fn pmf(&self, theta_index: usize, outcome: usize) -> f64 {
        self.table[theta_index][outcome]
    }
}

/// Two independent observations sharing one parameter.
/// The joint outcome `(x, y)` has index `x · |Ω_Y| + y`.
#[derive(Debug, Clone)]
pub struct JointModel<A, B> {
    pub first: A,
    pub second: B,
}

impl<A: DiscreteModel, B: DiscreteModel> JointModel<A, B> {
    pub fn new(first: A, second: B) -> Result<Self> {
        first.param_frame().ensure_same(second.param_frame())?;
        Ok(JointModel { first, second })
    }

    pub fn outcome(&self, x: usize, y: usize) -> Result<usize> {
        self.first.check_outcome(x)?;
        self.second.check_outcome(y)?;
        Ok(x * self.second.outcome_count() + y)
    }

    fn split(&self, outcome: usize) -> (usize, usize) {
        let m = self.second.outcome_count();
        (outcome / m, outcome % m)
    }
}

impl<A: DiscreteModel, B: DiscreteModel> DiscreteModel for JointModel<A, B> {
    fn param_frame(&self) -> &Frame {
        self.first.param_frame()
    }

    fn outcome_count(&self) -> usize {
        self.first.outcome_count() * self.second.outcome_count()
    }

    fn pmf(&self, theta_index: usize, outcome: usize) -> f64 {
        let (x, y) = self.split(outcome);
        self.first.pmf(theta_index, x) * self.second.pmf(theta_index, y)
    }

    fn ln_likelihood(&self, theta_index: usize, outcome: usize) -> f64 {
        let (x, y) = self.split(outcome);
        self.first.ln_likelihood(theta_index, x) + self.second.ln_likelihood(theta_index, y)
    }
}

/// Relative likelihood `L(θ; x) / max L` as a normal fuzzy set of parameter values.
#[derive(Debug, Clone)]
pub struct LikelihoodFuzzySet {
    pub set: FuzzySet,
    /// First maximizer of the likelihood on the grid.
    pub mle_index: usize,
}

/// `θ ↦ L(θ; x) / max_θ' L(θ'; x)`, evaluated in log space.
pub fn relative_likelihood<M: DiscreteModel + ?Sized>(
    model: &M,
    outcome: usize,
) -> Result<LikelihoodFuzzySet> {
    model.check_outcome(outcome)?;
    let q = model.param_frame().len();
    let ll: Vec<f64> = (0..q).map(|i| model.ln_likelihood(i, outcome)).collect();
    let (mle_index, max) = ll
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, v)| if v > best.1 { (i, v) } else { best });
    if max == f64::NEG_INFINITY || max.is_nan() {
        return Err(Error::ZeroLikelihood);
    }
    let mu = ll.iter().map(|&v| (v - max).exp()).collect();
    Ok(LikelihoodFuzzySet {
        set: FuzzySet::new(model.param_frame(), mu)?,
        mle_index,
    })
}

/// Logical fuzzy mass function on the relative likelihood.
pub fn likelihood_mass<M: DiscreteModel + ?Sized>(
    model: &M,
    outcome: usize,
) -> Result<FuzzyMassFunction> {
    FuzzyMassFunction::logical(&relative_likelihood(model, outcome)?.set)
}

/// Bayesian posterior `p(θ | x) ∝ L(θ; x) π(θ)`.
pub fn posterior<M: DiscreteModel + ?Sized>(
    prior: &MassFunction,
    model: &M,
    outcome: usize,
) -> Result<MassFunction> {
    prior.frame().ensure_same(model.param_frame())?;
    let pi = prior.probabilities()?;
    let lik = relative_likelihood(model, outcome)?;
    let weights: Vec<f64> = pi.iter().zip(lik.set.grades()).map(|(p, l)| p * l).collect();
    let total = weights.iter().copied().collect::<CompensatedSum>().total();
    if total <= 0.0 {
        return Err(Error::ZeroNormalizer);
    }
    let post: Vec<f64> = weights.iter().map(|w| w / total).collect();
    MassFunction::bayesian(prior.frame(), &post)
}

fn check_significance(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidSignificance(alpha))
    }
}

/// `c_α = exp(−χ²₁;₁₋α / 2)`.
pub fn wilks_cut_level(alpha: f64) -> Result<f64> {
    check_significance(alpha)?;
    Ok((-0.5 * chi_square1_quantile(1.0 - alpha)).exp())
}

/// The `c_α`-cut of the relative likelihood, an asymptotic `1 − α` confidence region.
pub fn confidence_region(likelihood: &LikelihoodFuzzySet, alpha: f64) -> Result<FuzzySet> {
    likelihood.set.alpha_cut(wilks_cut_level(alpha)?)
}

/// Coverage probabilities of the Wilks confidence regions at one true parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageTable {
    pub grid_size: usize,
    pub n: usize,
    pub theta0: f64,
    pub alphas: Vec<f64>,
    pub coverage: Vec<f64>,
}

/// `L̃ₓ(θ)` at one grid index.
fn relative_likelihood_at(model: &BinomialModel, theta_index: usize, x: usize) -> f64 {
    let max = model
        .thetas()
        .iter()
        .map(|&t| model.ln_kernel(t, x))
        .fold(f64::NEG_INFINITY, f64::max);
    (model.ln_kernel(model.thetas()[theta_index], x) - max).exp()
}

/// `Σ_x P(X = x | θ₀) · I(L̃ₓ(θ₀) ≥ c_α)` by exact enumeration over `x = 0..=n`.
pub fn coverage_experiment(
    grid_size: usize,
    n: usize,
    theta0: f64,
    alphas: &[f64],
) -> Result<CoverageTable> {
    let model = BinomialModel::new(grid_size, n)?;
    let t0 = model.theta_index(theta0)?;
    let cuts = alphas
        .iter()
        .map(|&a| wilks_cut_level(a))
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<(f64, f64)> = (0..=n)
        .into_par_iter()
        .map(|x| (model.pmf_at(x, theta0), relative_likelihood_at(&model, t0, x)))
        .collect();
    let coverage = cuts
        .iter()
        .map(|&c| {
            rows.iter()
                .filter(|(_, pl)| *pl >= c)
                .map(|(p, _)| *p)
                .collect::<CompensatedSum>()
                .total()
        })
        .collect();
    Ok(CoverageTable {
        grid_size,
        n,
        theta0,
        alphas: alphas.to_vec(),
        coverage,
    })
}
