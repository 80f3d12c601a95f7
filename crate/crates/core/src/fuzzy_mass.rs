//! Fuzzy mass functions: finite random fuzzy sets with normal focal elements.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::frame::{Frame, FuzzySet, TConorm, TNorm};
use crate::mass::{BeliefTriple, MassFunction, MASS_DUST, MASS_SUM_TOLERANCE};
use crate::numeric::CompensatedSum;
use crate::possibility::{integrate_cuts, measures_fuzzy_sugeno, EventExtension};

/// Conflict above this is flagged as near-total.
pub const DEFAULT_CONFLICT_WARNING: f64 = 0.99;

/// Tolerance used when comparing a contour with a target membership function.
pub const CONTOUR_TOLERANCE: f64 = 1e-12;

/// Mass function whose focal elements are normal fuzzy sets.
#[derive(Debug, Clone)]
pub struct FuzzyMassFunction {
    frame: Frame,
    focal: Vec<(FuzzySet, f64)>,
}

/// Normalized combination with its degree of conflict.
#[derive(Debug, Clone)]
pub struct FuzzyCombinationResult {
    pub mass: FuzzyMassFunction,
    pub conflict: f64,
}

impl FuzzyCombinationResult {
    pub fn near_total_conflict(&self, threshold: f64) -> bool {
        self.conflict > threshold
    }
}

type FocalMap = BTreeMap<Vec<i64>, (FuzzySet, f64)>;

fn accumulate(map: &mut FocalMap, set: FuzzySet, w: f64) {
    map.entry(set.canonical_key())
        .and_modify(|(_, m)| *m += w)
        .or_insert((set, w));
}

impl FuzzyMassFunction {
    pub fn new(frame: &Frame, focal: Vec<(FuzzySet, f64)>) -> Result<Self> {
        let mut map = FocalMap::new();
        for (set, m) in focal {
            frame.ensure_same(set.frame())?;
            set.ensure_normal()?;
            if !(m > 0.0 && m <= 1.0) {
                return Err(Error::InvalidMass(m));
            }
            accumulate(&mut map, set, m);
        }
        if map.is_empty() {
            return Err(Error::NoFocalSets);
        }
        let total = map.values().map(|(_, m)| *m).collect::<CompensatedSum>().total();
        if (total - 1.0).abs() > MASS_SUM_TOLERANCE {
            return Err(Error::MassSum(total));
        }
        Ok(FuzzyMassFunction::from_map(frame, map, total))
    }

    fn from_map(frame: &Frame, map: FocalMap, normalizer: f64) -> Self {
        let focal: Vec<(FuzzySet, f64)> = map
            .into_values()
            .map(|(s, m)| (s, m / normalizer))
            .filter(|(_, m)| *m >= MASS_DUST)
            .collect();
        let total = focal.iter().map(|(_, m)| *m).collect::<CompensatedSum>().total();
        let focal = focal.into_iter().map(|(s, m)| (s, m / total)).collect();
        FuzzyMassFunction {
            frame: frame.clone(),
            focal,
        }
    }

    /// `m̃(F̃) = 1`.
    pub fn logical(set: &FuzzySet) -> Result<Self> {
        FuzzyMassFunction::new(set.frame(), vec![(set.clone(), 1.0)])
    }

    /// `m̃(Θ) = 1`.
    pub fn vacuous(frame: &Frame) -> Self {
        FuzzyMassFunction {
            frame: frame.clone(),
            focal: vec![(frame.full(), 1.0)],
        }
    }

    /// Lifts a crisp mass function.
    pub fn from_crisp(m: &MassFunction) -> Self {
        FuzzyMassFunction {
            frame: m.frame().clone(),
            focal: m.focal_sets(),
        }
    }

    /// The crisp mass function, when every focal element is crisp.
    pub fn to_crisp(&self) -> Option<MassFunction> {
        if self.focal.iter().all(|(s, _)| s.is_crisp()) {
            MassFunction::new(&self.frame, self.focal.clone()).ok()
        } else {
            None
        }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn len(&self) -> usize {
        self.focal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.focal.is_empty()
    }

    pub fn focal_sets(&self) -> &[(FuzzySet, f64)] {
        &self.focal
    }

    /// Mass of a focal element, matched on the canonical form; zero otherwise.
    pub fn mass_of(&self, set: &FuzzySet) -> f64 {
        self.focal
            .iter()
            .find(|(s, _)| s == set)
            .map_or(0.0, |(_, m)| *m)
    }

    pub fn total_mass(&self) -> f64 {
        self.focal.iter().map(|(_, m)| *m).collect::<CompensatedSum>().total()
    }

    pub fn is_logical(&self) -> bool {
        self.focal.len() == 1
    }

    /// Bel, Pl and Q of a crisp event as mixtures of `N`, `Π` and `Δ` of the focal elements.
    pub fn bel_pl_q_crisp(&self, event: &FuzzySet) -> Result<BeliefTriple> {
        self.frame.ensure_same(event.frame())?;
        event.ensure_crisp()?;
        let a = event.grades();
        let mut bel = CompensatedSum::new();
        let mut pl = CompensatedSum::new();
        let mut q = CompensatedSum::new();
        for (f, m) in &self.focal {
            let mut inside_max = 0.0_f64;
            let mut inside_min = 1.0_f64;
            let mut outside_max = 0.0_f64;
            for (&g, &in_a) in f.grades().iter().zip(a) {
                if in_a == 1.0 {
                    inside_max = inside_max.max(g);
                    inside_min = inside_min.min(g);
                } else {
                    outside_max = outside_max.max(g);
                }
            }
            bel.add(m * (1.0 - outside_max));
            pl.add(m * inside_max);
            q.add(m * inside_min);
        }
        Ok(BeliefTriple {
            bel: bel.total(),
            pl: pl.total(),
            q: q.total(),
        })
    }

    /// `pl(θ) = Σ mᵢ F̃ᵢ(θ)`.
    pub fn contour(&self) -> FuzzySet {
        let mut acc = vec![CompensatedSum::new(); self.frame.len()];
        for (f, m) in &self.focal {
            for (a, g) in acc.iter_mut().zip(f.grades()) {
                a.add(m * g);
            }
        }
        let mu = acc.iter().map(|s| s.total().clamp(0.0, 1.0)).collect();
        FuzzySet::from_unchecked(&self.frame, mu)
    }

    /// Crisp mass function on the α-cuts of the focal elements.
    pub fn alpha_cut_mass(&self, alpha: f64) -> Result<MassFunction> {
        let focal = self
            .focal
            .iter()
            .map(|(f, m)| Ok((f.alpha_cut(alpha)?, *m)))
            .collect::<Result<Vec<_>>>()?;
        MassFunction::new(&self.frame, focal)
    }

    /// Soft-normalized ⊤-intersection rule.
    ///
    /// Each pair of focal elements is intersected with `t`, renormalized, and
    /// weighted by the height of the raw intersection. With `TNorm::Min` the
    /// rule is not associative; fold explicitly.
    pub fn combine_soft(&self, other: &FuzzyMassFunction, t: TNorm) -> Result<FuzzyCombinationResult> {
        self.frame.ensure_same(&other.frame)?;
        let mut map = FocalMap::new();
        let mut agreement = CompensatedSum::new();
        let mut conflict = CompensatedSum::new();
        for (g, m1) in &self.focal {
            for (h, m2) in &other.focal {
                let w = m1 * m2;
                let raw = g.combine(h, t)?;
                let height = raw.height();
                conflict.add((1.0 - height) * w);
                if height > 0.0 {
                    agreement.add(height * w);
                    accumulate(&mut map, raw.normalize()?, height * w);
                }
            }
        }
        let denominator = agreement.total();
        if denominator <= 0.0 || map.is_empty() {
            return Err(Error::TotalConflict);
        }
        Ok(FuzzyCombinationResult {
            mass: FuzzyMassFunction::from_map(&self.frame, map, denominator),
            conflict: conflict.total().clamp(0.0, 1.0),
        })
    }

    /// Generalized product-intersection rule (associative).
    pub fn orthogonal_sum(&self, other: &FuzzyMassFunction) -> Result<FuzzyCombinationResult> {
        self.combine_soft(other, TNorm::Product)
    }

    /// ⊥-union rule; no normalization.
    pub fn disjunctive(&self, other: &FuzzyMassFunction, s: TConorm) -> Result<FuzzyMassFunction> {
        self.frame.ensure_same(&other.frame)?;
        let mut map = FocalMap::new();
        for (g, m1) in &self.focal {
            for (h, m2) in &other.focal {
                accumulate(&mut map, g.combine_disjunctive(h, s)?, m1 * m2);
            }
        }
        Ok(FuzzyMassFunction::from_map(&self.frame, map, 1.0))
    }

    /// Bel, Pl and Q of a fuzzy event under the chosen extension.
    pub fn bel_pl_q_fuzzy(&self, event: &FuzzySet, kind: EventExtension) -> Result<BeliefTriple> {
        self.frame.ensure_same(event.frame())?;
        let mut bel = CompensatedSum::new();
        let mut pl = CompensatedSum::new();
        let mut q = CompensatedSum::new();
        match kind {
            EventExtension::Sugeno => {
                for (f, m) in &self.focal {
                    let b = measures_fuzzy_sugeno(f, event)?;
                    bel.add(m * b.necessity);
                    pl.add(m * b.possibility);
                    q.add(m * b.guaranteed);
                }
            }
            EventExtension::Choquet => {
                let levels = event.level_decompose();
                for (f, m) in &self.focal {
                    let (p, n, d) = integrate_cuts(f, &levels);
                    bel.add(m * n);
                    pl.add(m * p);
                    q.add(m * d);
                }
            }
        }
        Ok(BeliefTriple {
            bel: bel.total(),
            pl: pl.total(),
            q: q.total(),
        })
    }
}

/// Conditions a Bayesian mass function on a fuzzy event: `p(θ)Ã(θ) / Σ p Ã`.
pub fn bayes_condition(p: &MassFunction, event: &FuzzySet) -> Result<MassFunction> {
    p.frame().ensure_same(event.frame())?;
    let probs = p.probabilities()?;
    let weights: Vec<f64> = probs.iter().zip(event.grades()).map(|(p, a)| p * a).collect();
    let total = weights.iter().copied().collect::<CompensatedSum>().total();
    if total <= 0.0 {
        return Err(Error::ZeroNormalizer);
    }
    let posterior: Vec<f64> = weights.iter().map(|w| w / total).collect();
    MassFunction::bayesian(p.frame(), &posterior)
}

/// Whether `m` induces the same belief function as the logical fuzzy mass on `l`:
/// its contour equals `l` and all focal elements are ordered by one common permutation.
pub fn check_bel0_representation(m: &FuzzyMassFunction, l: &FuzzySet) -> bool {
    if m.frame() != l.frame() || !l.is_normal() {
        return false;
    }
    let contour = m.contour();
    if !contour.approx_eq(l, CONTOUR_TOLERANCE) {
        return false;
    }
    // A common non-decreasing order, if one exists, is also an order of the contour;
    // ties are split lexicographically on the focal grades.
    let mut order: Vec<usize> = (0..m.frame().len()).collect();
    order.sort_by(|&i, &j| {
        contour.grade(i).total_cmp(&contour.grade(j)).then_with(|| {
            m.focal_sets()
                .iter()
                .map(|(f, _)| f.grade(i).total_cmp(&f.grade(j)))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    });
    m.focal_sets().iter().all(|(f, _)| {
        order
            .windows(2)
            .all(|w| f.grade(w[0]) <= f.grade(w[1]))
    })
}
