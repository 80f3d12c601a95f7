//! Monte-Carlo predictive belief functions for a future binomial count.
//!
//! With `U₁, …, U_r` uniform, `Y = Σ I(Uᵢ ≤ θ)`. For each draw `u` the relative
//! likelihood of `θ` is pushed to `Ω_Y = {0, …, r}` by the extension principle.
//! Draw `k` uses its own ChaCha stream, so results do not depend on how the
//! work is split across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{Frame, FuzzySet, LevelDecomposition};
use crate::inference::{
    relative_likelihood, wilks_cut_level, BinomialModel, DiscreteModel, LikelihoodFuzzySet,
};
use crate::numeric::{binomial_pmf, ln_factorials, CompensatedSum};
use crate::possibility::{integrate_cuts, EventExtension};

/// Largest `r` for which all `2^(r+1)` events are enumerated.
pub const MAX_ENUMERATED_DRAWS: usize = 16;

/// Default number of standard errors allowed when comparing estimated beliefs with probabilities.
pub const DEFAULT_DOMINANCE_SLACK: f64 = 3.0;

/// Observation and prediction horizon.
#[derive(Debug, Clone)]
pub struct PredictionSetup {
    model: BinomialModel,
    x: usize,
    r: usize,
    y_frame: Frame,
}

impl PredictionSetup {
    pub fn new(model: BinomialModel, x: usize, r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidArgument("number of future draws r must be at least 1".into()));
        }
        if x > model.n() {
            return Err(Error::InvalidOutcome {
                outcome: x,
                size: model.n() + 1,
            });
        }
        let y_frame = Frame::new((0..=r).map(|y| y.to_string()))?;
        Ok(PredictionSetup {
            model,
            x,
            r,
            y_frame,
        })
    }

    pub fn model(&self) -> &BinomialModel {
        &self.model
    }

    pub fn x(&self) -> usize {
        self.x
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn y_frame(&self) -> &Frame {
        &self.y_frame
    }

    pub fn likelihood(&self) -> Result<LikelihoodFuzzySet> {
        relative_likelihood(&self.model, self.x)
    }

    /// Pushes `likelihood` through `y = Σ I(uᵢ ≤ θ)`. Values of `y` reached by no
    /// grid point get membership zero.
    pub fn push_forward(&self, likelihood: &LikelihoodFuzzySet, u: &[f64]) -> Result<FuzzySet> {
        self.model.param_frame().ensure_same(likelihood.set.frame())?;
        if u.len() != self.r {
            return Err(Error::LengthMismatch {
                expected: self.r,
                got: u.len(),
            });
        }
        if let Some(&bad) = u.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidArgument(format!("uniform draw {bad} outside [0, 1]")));
        }
        let mut sorted = u.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(FuzzySet::from_unchecked(
            &self.y_frame,
            push_sorted(self.model.thetas(), likelihood.set.grades(), &sorted),
        ))
    }
}

/// One pass over the increasing grid; `sorted_u` must be sorted.
fn push_sorted(thetas: &[f64], grades: &[f64], sorted_u: &[f64]) -> Vec<f64> {
    let mut mu = vec![0.0_f64; sorted_u.len() + 1];
    let mut y = 0;
    for (&theta, &g) in thetas.iter().zip(grades) {
        while y < sorted_u.len() && sorted_u[y] <= theta {
            y += 1;
        }
        mu[y] = mu[y].max(g);
    }
    mu
}

/// `r` uniforms for draw `k`.
fn draw_uniforms(seed: u64, k: usize, r: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k as u64);
    (0..r).map(|_| rng.gen::<f64>()).collect()
}

/// `K` pushed fuzzy sets with equal weights `1/K`.
#[derive(Debug, Clone)]
pub struct PredictiveSample {
    pub setup: PredictionSetup,
    pub pushed: Vec<FuzzySet>,
    pub seed: u64,
}

impl PredictiveSample {
    pub fn len(&self) -> usize {
        self.pushed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pushed.is_empty()
    }
}

/// Draws `k` uniform vectors and pushes the likelihood forward through each.
pub fn sample_predictive(
    setup: &PredictionSetup,
    likelihood: &LikelihoodFuzzySet,
    k: usize,
    seed: u64,
) -> Result<PredictiveSample> {
    if k == 0 {
        return Err(Error::InvalidArgument("sample count K must be at least 1".into()));
    }
    setup.model.param_frame().ensure_same(likelihood.set.frame())?;
    let thetas = setup.model.thetas();
    let grades = likelihood.set.grades();
    let pushed = (0..k)
        .into_par_iter()
        .map(|i| {
            let mut u = draw_uniforms(seed, i, setup.r);
            u.sort_by(f64::total_cmp);
            FuzzySet::from_unchecked(&setup.y_frame, push_sorted(thetas, grades, &u))
        })
        .collect();
    Ok(PredictiveSample {
        setup: setup.clone(),
        pushed,
        seed,
    })
}

/// Monte-Carlo belief and plausibility with their standard errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EventEstimate {
    pub bel: f64,
    pub pl: f64,
    pub bel_se: f64,
    pub pl_se: f64,
}

fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let k = values.len() as f64;
    let mean = values.iter().copied().collect::<CompensatedSum>().total() / k;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss = values
        .iter()
        .map(|v| (v - mean) * (v - mean))
        .collect::<CompensatedSum>()
        .total();
    (mean, (ss / (k - 1.0) / k).sqrt())
}

/// Per-draw `(Bel, Pl)` of an event. Crisp events use the crisp formulas; fuzzy
/// events use `kind`.
fn per_draw(y: &FuzzySet, event: &FuzzySet, levels: &LevelDecomposition, kind: EventExtension) -> (f64, f64) {
    if event.is_crisp() {
        let mut inside = 0.0_f64;
        let mut outside = 0.0_f64;
        for (&g, &a) in y.grades().iter().zip(event.grades()) {
            if a == 1.0 {
                inside = inside.max(g);
            } else {
                outside = outside.max(g);
            }
        }
        return (1.0 - outside, inside);
    }
    match kind {
        EventExtension::Sugeno => {
            let mut bel = 1.0_f64;
            let mut pl = 0.0_f64;
            for (&g, &a) in y.grades().iter().zip(event.grades()) {
                bel = bel.min(a.max(1.0 - g));
                pl = pl.max(a.min(g));
            }
            (bel, pl)
        }
        EventExtension::Choquet => {
            let (pl, bel, _) = integrate_cuts(y, levels);
            (bel, pl)
        }
    }
}

/// Monte-Carlo `Bel` and `Pl` of an event on `Ω_Y`.
pub fn predictive_measures(
    sample: &PredictiveSample,
    event: &FuzzySet,
    kind: EventExtension,
) -> Result<EventEstimate> {
    sample.setup.y_frame.ensure_same(event.frame())?;
    let levels = event.level_decompose();
    let (bels, pls): (Vec<f64>, Vec<f64>) =
        sample.pushed.iter().map(|y| per_draw(y, event, &levels, kind)).unzip();
    let (bel, bel_se) = mean_and_se(&bels);
    let (pl, pl_se) = mean_and_se(&pls);
    Ok(EventEstimate {
        bel,
        pl,
        bel_se,
        pl_se,
    })
}

/// Contour, lower and upper CDFs of the predictive belief function, with the plug-in
/// distribution at the maximum-likelihood estimate for comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictiveSummary {
    pub contour: Vec<f64>,
    pub lower_cdf: Vec<f64>,
    pub upper_cdf: Vec<f64>,
    pub plugin_pmf: Vec<f64>,
    pub plugin_cdf: Vec<f64>,
}

pub fn contour_and_cdfs(sample: &PredictiveSample) -> Result<PredictiveSummary> {
    let r = sample.setup.r;
    let k = sample.len() as f64;
    let mut contour = vec![CompensatedSum::new(); r + 1];
    let mut lower = vec![CompensatedSum::new(); r + 1];
    let mut upper = vec![CompensatedSum::new(); r + 1];
    for y in &sample.pushed {
        let g = y.grades();
        let mut prefix_max = 0.0_f64;
        let mut suffix_max = vec![0.0_f64; r + 2];
        for j in (0..=r).rev() {
            suffix_max[j] = suffix_max[j + 1].max(g[j]);
        }
        for j in 0..=r {
            contour[j].add(g[j]);
            prefix_max = prefix_max.max(g[j]);
            upper[j].add(prefix_max);
            lower[j].add(1.0 - suffix_max[j + 1]);
        }
    }
    let finish = |v: Vec<CompensatedSum>| v.iter().map(|s| s.total() / k).collect::<Vec<_>>();
    let likelihood = sample.setup.likelihood()?;
    let theta_hat = sample.setup.model.thetas()[likelihood.mle_index];
    let ln_fact = ln_factorials(r);
    let plugin_pmf: Vec<f64> = (0..=r).map(|y| binomial_pmf(y, r, theta_hat, &ln_fact)).collect();
    let plugin_cdf = plugin_pmf
        .iter()
        .scan(CompensatedSum::new(), |acc, p| {
            acc.add(*p);
            Some(acc.total().min(1.0))
        })
        .collect();
    Ok(PredictiveSummary {
        contour: finish(contour),
        lower_cdf: finish(lower),
        upper_cdf: finish(upper),
        plugin_pmf,
        plugin_cdf,
    })
}

/// Parameters of the dominance-coverage experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceConfig {
    pub grid_size: usize,
    pub n: usize,
    pub theta0: f64,
    pub r: usize,
    pub k: usize,
    pub seed: u64,
    /// A belief estimate may exceed the true probability by this many standard errors
    /// `sqrt(P(1−P)/K)` before dominance is declared violated. Zero gives the strict check.
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceTable {
    pub alphas: Vec<f64>,
    pub coverage: Vec<f64>,
}

/// One point of the belief-versus-probability scatter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterPoint {
    pub x: usize,
    pub event: Vec<usize>,
    pub belief: f64,
    pub probability: f64,
}

/// Shared state: the model, `P_{Y|θ₀}` on every event, and for every draw the
/// sorted grid indices `jᵢ = min{j : uᵢ ≤ θ_j}`.
struct DominanceContext {
    model: BinomialModel,
    r: usize,
    k: usize,
    event_probability: Vec<f64>,
    draws: Vec<Vec<usize>>,
}

impl DominanceContext {
    fn new(config: &DominanceConfig) -> Result<Self> {
        if config.r == 0 {
            return Err(Error::InvalidArgument("number of future draws r must be at least 1".into()));
        }
        if config.r > MAX_ENUMERATED_DRAWS {
            return Err(Error::TooLarge {
                what: "future draws r",
                value: config.r,
                max: MAX_ENUMERATED_DRAWS,
            });
        }
        if config.k == 0 {
            return Err(Error::InvalidArgument("sample count K must be at least 1".into()));
        }
        if config.slack.is_nan() || config.slack < 0.0 {
            return Err(Error::InvalidArgument(format!("slack {} must be non-negative", config.slack)));
        }
        let model = BinomialModel::new(config.grid_size, config.n)?;
        model.theta_index(config.theta0)?;
        let ln_fact = ln_factorials(config.r);
        let pmf: Vec<f64> = (0..=config.r)
            .map(|y| binomial_pmf(y, config.r, config.theta0, &ln_fact))
            .collect();
        let event_probability = (0..1usize << (config.r + 1))
            .map(|code| {
                (0..=config.r)
                    .filter(|y| code >> y & 1 == 1)
                    .map(|y| pmf[y])
                    .collect::<CompensatedSum>()
                    .total()
            })
            .collect();
        let thetas = model.thetas().to_vec();
        let draws = (0..config.k)
            .into_par_iter()
            .map(|i| {
                let mut j: Vec<usize> = draw_uniforms(config.seed, i, config.r)
                    .into_iter()
                    .map(|u| first_grid_index_at_or_above(&thetas, u))
                    .collect();
                j.sort_unstable();
                j
            })
            .collect();
        Ok(DominanceContext {
            model,
            r: config.r,
            k: config.k,
            event_probability,
            draws,
        })
    }

    /// Grid interval `[a, b]` where `L̃ₓ ≥ c`.
    fn cut_interval(&self, likelihood: &FuzzySet, c: f64) -> (usize, usize) {
        let g = likelihood.grades();
        let a = g.iter().position(|&v| v >= c).expect("relative likelihood is normal");
        let b = g.iter().rposition(|&v| v >= c).expect("relative likelihood is normal");
        debug_assert!(g[a..=b].iter().all(|&v| v >= c), "binomial likelihood cuts are intervals");
        (a, b)
    }

    /// Bit mask over `Ω_Y` of the `c`-cut of the pushed set for one draw.
    fn cut_mask(draw: &[usize], a: usize, b: usize) -> usize {
        let at_a = draw.partition_point(|&j| j <= a);
        let mut mask = 1usize << at_a;
        for (i, &j) in draw.iter().enumerate() {
            if j > a && j <= b && (i + 1 == draw.len() || draw[i + 1] != j) {
                mask |= 1 << (i + 1);
            }
        }
        mask
    }

    /// Estimated `Bel(A)` for every event `A`, via a subset-sum transform of the cut histogram.
    fn beliefs(&self, likelihood: &FuzzySet, c: f64) -> Vec<f64> {
        let (a, b) = self.cut_interval(likelihood, c);
        let events = 1usize << (self.r + 1);
        let mut counts = vec![0u64; events];
        for draw in &self.draws {
            counts[Self::cut_mask(draw, a, b)] += 1;
        }
        for bit in 0..=self.r {
            for code in 0..events {
                if code >> bit & 1 == 1 {
                    counts[code] += counts[code ^ (1 << bit)];
                }
            }
        }
        counts.iter().map(|&n| n as f64 / self.k as f64).collect()
    }

    fn dominates(&self, beliefs: &[f64], slack: f64) -> bool {
        beliefs
            .iter()
            .zip(&self.event_probability)
            .all(|(&bel, &p)| {
                let se = ((p * (1.0 - p)).max(0.0) / self.k as f64).sqrt();
                bel <= p + 1e-12 + slack * se
            })
    }
}

fn first_grid_index_at_or_above(thetas: &[f64], u: f64) -> usize {
    thetas.partition_point(|&t| t < u).min(thetas.len() - 1)
}

/// `Σ_x P(X = x | θ₀) · I(Bel̂ ≤ P_{Y|θ₀} on every event)` for each significance level.
pub fn dominance_coverage(config: &DominanceConfig, alphas: &[f64]) -> Result<DominanceTable> {
    let ctx = DominanceContext::new(config)?;
    let cuts = alphas
        .iter()
        .map(|&a| wilks_cut_level(a))
        .collect::<Result<Vec<_>>>()?;
    let per_x: Vec<(f64, Vec<bool>)> = (0..=config.n)
        .into_par_iter()
        .map(|x| {
            let l = relative_likelihood(&ctx.model, x)?;
            let ok = cuts
                .iter()
                .map(|&c| ctx.dominates(&ctx.beliefs(&l.set, c), config.slack))
                .collect();
            Ok((ctx.model.pmf_at(x, config.theta0), ok))
        })
        .collect::<Result<_>>()?;
    let coverage = (0..alphas.len())
        .map(|i| {
            per_x
                .iter()
                .filter(|(_, ok)| ok[i])
                .map(|(p, _)| *p)
                .collect::<CompensatedSum>()
                .total()
        })
        .collect();
    Ok(DominanceTable {
        alphas: alphas.to_vec(),
        coverage,
    })
}

/// Estimated `Bel(A)` and `P_{Y|θ₀}(A)` for all `2^(r+1)` events at each requested `x`.
pub fn dominance_scatter(
    config: &DominanceConfig,
    x_values: &[usize],
    alpha: f64,
) -> Result<Vec<ScatterPoint>> {
    let ctx = DominanceContext::new(config)?;
    let c = wilks_cut_level(alpha)?;
    let mut points = Vec::with_capacity(x_values.len() << (config.r + 1));
    for &x in x_values {
        let l = relative_likelihood(&ctx.model, x)?;
        let beliefs = ctx.beliefs(&l.set, c);
        for (code, (&belief, &probability)) in beliefs.iter().zip(&ctx.event_probability).enumerate() {
            points.push(ScatterPoint {
                x,
                event: (0..=config.r).filter(|y| code >> y & 1 == 1).collect(),
                belief,
                probability,
            });
        }
    }
    Ok(points)
}
