//! Crisp Dempster-Shafer mass functions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{CrispBits, Frame, FuzzySet};
use crate::numeric::CompensatedSum;

/// Masses below this are treated as accumulation noise and dropped.
pub const MASS_DUST: f64 = 1e-15;

/// Accepted deviation of the total mass from one on construction.
pub const MASS_SUM_TOLERANCE: f64 = 1e-9;

/// Largest frame for which full event tables are produced.
pub const MAX_EVENT_TABLE_SIZE: usize = 16;

/// Belief, plausibility and commonality of one event.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeliefTriple {
    pub bel: f64,
    pub pl: f64,
    pub q: f64,
}

/// Row of an event table: an event given by member indices and its measures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventRow {
    pub members: Vec<usize>,
    pub bel: f64,
    pub pl: f64,
    pub q: f64,
}

/// Finite mass function with crisp, nonempty focal sets.
#[derive(Debug, Clone)]
pub struct MassFunction {
    frame: Frame,
    focal: Vec<(CrispBits, f64)>,
}

/// Normalized combination with its degree of conflict.
#[derive(Debug, Clone)]
pub struct CombinationResult {
    pub mass: MassFunction,
    pub conflict: f64,
}

impl MassFunction {
    /// Builds a mass function from crisp focal sets. Repeated sets are merged.
    pub fn new(frame: &Frame, focal: Vec<(FuzzySet, f64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (set, m) in focal {
            frame.ensure_same(set.frame())?;
            let bits = set.to_bits()?;
            insert_checked(&mut map, bits, m)?;
        }
        MassFunction::from_checked_map(frame, map)
    }

    /// Builds a mass function from focal sets given as element indices.
    pub fn from_index_sets(frame: &Frame, focal: Vec<(Vec<usize>, f64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (members, m) in focal {
            if let Some(&bad) = members.iter().find(|&&i| i >= frame.len()) {
                return Err(Error::IndexOutOfRange {
                    index: bad,
                    size: frame.len(),
                });
            }
            insert_checked(&mut map, CrispBits::from_indices(frame.len(), &members), m)?;
        }
        MassFunction::from_checked_map(frame, map)
    }

    /// `m(Θ) = 1`.
    pub fn vacuous(frame: &Frame) -> Self {
        MassFunction {
            frame: frame.clone(),
            focal: vec![(CrispBits::full(frame.len()), 1.0)],
        }
    }

    /// `m(A) = 1` for a nonempty crisp `A`.
    pub fn logical(set: &FuzzySet) -> Result<Self> {
        MassFunction::new(set.frame(), vec![(set.clone(), 1.0)])
    }

    /// Bayesian mass function from a probability vector. Zero entries are skipped.
    pub fn bayesian(frame: &Frame, probabilities: &[f64]) -> Result<Self> {
        if probabilities.len() != frame.len() {
            return Err(Error::LengthMismatch {
                expected: frame.len(),
                got: probabilities.len(),
            });
        }
        let focal = probabilities
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != 0.0)
            .map(|(i, &p)| (vec![i], p))
            .collect();
        MassFunction::from_index_sets(frame, focal)
    }

    fn from_checked_map(frame: &Frame, map: BTreeMap<CrispBits, f64>) -> Result<Self> {
        if map.is_empty() {
            return Err(Error::NoFocalSets);
        }
        let total: f64 = map.values().copied().collect::<CompensatedSum>().total();
        if (total - 1.0).abs() > MASS_SUM_TOLERANCE {
            return Err(Error::MassSum(total));
        }
        Ok(MassFunction::from_accumulated(frame, map, total))
    }

    /// Drops dust and divides by `normalizer`.
    pub(crate) fn from_accumulated(
        frame: &Frame,
        map: BTreeMap<CrispBits, f64>,
        normalizer: f64,
    ) -> Self {
        let focal = map
            .into_iter()
            .map(|(k, m)| (k, m / normalizer))
            .filter(|(_, m)| *m >= MASS_DUST)
            .collect::<Vec<_>>();
        let total: f64 = focal.iter().map(|(_, m)| *m).collect::<CompensatedSum>().total();
        let focal = focal.into_iter().map(|(k, m)| (k, m / total)).collect();
        MassFunction {
            frame: frame.clone(),
            focal,
        }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// Number of focal sets.
    pub fn len(&self) -> usize {
        self.focal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.focal.is_empty()
    }

    pub fn focal_sets(&self) -> Vec<(FuzzySet, f64)> {
        self.focal
            .iter()
            .map(|(bits, m)| (FuzzySet::from_bits(&self.frame, bits), *m))
            .collect()
    }

    /// Focal sets as sorted element-index lists.
    pub fn focal_indices(&self) -> Vec<(Vec<usize>, f64)> {
        self.focal.iter().map(|(b, m)| (b.indices(), *m)).collect()
    }

    /// Mass of a crisp set; zero when it is not focal.
    pub fn mass_of(&self, set: &FuzzySet) -> Result<f64> {
        self.frame.ensure_same(set.frame())?;
        let bits = set.to_bits()?;
        Ok(self
            .focal
            .iter()
            .find(|(b, _)| *b == bits)
            .map_or(0.0, |(_, m)| *m))
    }

    pub fn total_mass(&self) -> f64 {
        self.focal.iter().map(|(_, m)| *m).collect::<CompensatedSum>().total()
    }

    fn event_bits(&self, event: &FuzzySet) -> Result<CrispBits> {
        self.frame.ensure_same(event.frame())?;
        event.to_bits()
    }

    /// Bel, Pl and Q of a crisp event.
    pub fn bel_pl_q(&self, event: &FuzzySet) -> Result<BeliefTriple> {
        let a = self.event_bits(event)?;
        Ok(self.bel_pl_q_bits(&a))
    }

    pub(crate) fn bel_pl_q_bits(&self, a: &CrispBits) -> BeliefTriple {
        let mut bel = CompensatedSum::new();
        let mut pl = CompensatedSum::new();
        let mut q = CompensatedSum::new();
        for (f, m) in &self.focal {
            if f.is_subset_of(a) {
                bel.add(*m);
            }
            if f.intersects(a) {
                pl.add(*m);
            }
            if a.is_subset_of(f) {
                q.add(*m);
            }
        }
        BeliefTriple {
            bel: bel.total(),
            pl: pl.total(),
            q: q.total(),
        }
    }

    pub fn bel(&self, event: &FuzzySet) -> Result<f64> {
        self.bel_pl_q(event).map(|t| t.bel)
    }

    pub fn pl(&self, event: &FuzzySet) -> Result<f64> {
        self.bel_pl_q(event).map(|t| t.pl)
    }

    pub fn commonality(&self, event: &FuzzySet) -> Result<f64> {
        self.bel_pl_q(event).map(|t| t.q)
    }

    /// Contour function `θ ↦ Pl({θ})`.
    pub fn contour(&self) -> FuzzySet {
        let q = self.frame.len();
        let mut acc = vec![CompensatedSum::new(); q];
        for (f, m) in &self.focal {
            for i in f.indices() {
                acc[i].add(*m);
            }
        }
        let mu = acc.iter().map(|s| s.total().clamp(0.0, 1.0)).collect();
        FuzzySet::from_unchecked(&self.frame, mu)
    }

    /// Dempster's rule: conjunctive combination normalized by `1 − κ`.
    pub fn dempster(&self, other: &MassFunction) -> Result<CombinationResult> {
        self.frame.ensure_same(&other.frame)?;
        let mut map: BTreeMap<CrispBits, f64> = BTreeMap::new();
        let mut agreement = CompensatedSum::new();
        let mut conflict = CompensatedSum::new();
        for (f, m1) in &self.focal {
            for (g, m2) in &other.focal {
                let w = m1 * m2;
                let inter = f.intersection(g);
                if inter.is_empty() {
                    conflict.add(w);
                } else {
                    agreement.add(w);
                    *map.entry(inter).or_insert(0.0) += w;
                }
            }
        }
        let denominator = agreement.total();
        if denominator <= 0.0 || map.is_empty() {
            return Err(Error::TotalConflict);
        }
        Ok(CombinationResult {
            mass: MassFunction::from_accumulated(&self.frame, map, denominator),
            conflict: conflict.total().clamp(0.0, 1.0),
        })
    }

    /// Disjunctive rule: masses flow to unions of focal sets.
    pub fn disjunctive(&self, other: &MassFunction) -> Result<MassFunction> {
        self.frame.ensure_same(&other.frame)?;
        let mut map: BTreeMap<CrispBits, f64> = BTreeMap::new();
        for (f, m1) in &self.focal {
            for (g, m2) in &other.focal {
                *map.entry(f.union(g)).or_insert(0.0) += m1 * m2;
            }
        }
        Ok(MassFunction::from_accumulated(&self.frame, map, 1.0))
    }

    /// Bel, Pl and Q of a fuzzy event:
    /// `Σ mᵢ min_{Fᵢ} Ã`, `Σ mᵢ max_{Fᵢ} Ã` and `Σ mᵢ (1 − max_{θ∉Fᵢ} Ã(θ))`.
    pub fn bel_pl_q_fuzzy(&self, event: &FuzzySet) -> Result<BeliefTriple> {
        self.frame.ensure_same(event.frame())?;
        let a = event.grades();
        let mut bel = CompensatedSum::new();
        let mut pl = CompensatedSum::new();
        let mut q = CompensatedSum::new();
        for (f, m) in &self.focal {
            let mut inside_min = 1.0_f64;
            let mut inside_max = 0.0_f64;
            let mut outside_max = 0.0_f64;
            for (i, &g) in a.iter().enumerate() {
                if f.contains(i) {
                    inside_min = inside_min.min(g);
                    inside_max = inside_max.max(g);
                } else {
                    outside_max = outside_max.max(g);
                }
            }
            bel.add(m * inside_min);
            pl.add(m * inside_max);
            q.add(m * (1.0 - outside_max));
        }
        Ok(BeliefTriple {
            bel: bel.total(),
            pl: pl.total(),
            q: q.total(),
        })
    }

    /// Probability vector of a Bayesian mass function.
    pub fn probabilities(&self) -> Result<Vec<f64>> {
        if !self.is_bayesian() {
            return Err(Error::NotBayesian);
        }
        let mut p = vec![0.0; self.frame.len()];
        for (f, m) in &self.focal {
            p[f.indices()[0]] = *m;
        }
        Ok(p)
    }

    /// `P(Ã) = Σ_θ p(θ) Ã(θ)` for a Bayesian mass function.
    pub fn probability_fuzzy_event(&self, event: &FuzzySet) -> Result<f64> {
        self.frame.ensure_same(event.frame())?;
        let p = self.probabilities()?;
        Ok(p.iter()
            .zip(event.grades())
            .map(|(p, a)| p * a)
            .collect::<CompensatedSum>()
            .total())
    }

    /// All focal sets are singletons.
    pub fn is_bayesian(&self) -> bool {
        self.focal.iter().all(|(f, _)| f.count() == 1)
    }

    /// Focal sets are totally ordered by inclusion.
    pub fn is_consonant(&self) -> bool {
        let mut sets: Vec<&CrispBits> = self.focal.iter().map(|(f, _)| f).collect();
        sets.sort_by_key(|f| f.count());
        sets.windows(2).all(|w| w[0].is_subset_of(w[1]))
    }

    /// A single focal set.
    pub fn is_logical(&self) -> bool {
        self.focal.len() == 1
    }

    /// Bel, Pl and Q for every subset of the frame, in binary-counter order.
    pub fn event_table(&self) -> Result<Vec<EventRow>> {
        let q = self.frame.len();
        if q > MAX_EVENT_TABLE_SIZE {
            return Err(Error::TooLarge {
                what: "frame size",
                value: q,
                max: MAX_EVENT_TABLE_SIZE,
            });
        }
        Ok((0..1usize << q)
            .map(|code| {
                let members: Vec<usize> = (0..q).filter(|i| code >> i & 1 == 1).collect();
                let t = self.bel_pl_q_bits(&CrispBits::from_indices(q, &members));
                EventRow {
                    members,
                    bel: t.bel,
                    pl: t.pl,
                    q: t.q,
                }
            })
            .collect())
    }
}

fn insert_checked(map: &mut BTreeMap<CrispBits, f64>, bits: CrispBits, m: f64) -> Result<()> {
    if bits.is_empty() {
        return Err(Error::EmptyFocalSet);
    }
    if !(m > 0.0 && m <= 1.0) {
        return Err(Error::InvalidMass(m));
    }
    *map.entry(bits).or_insert(0.0) += m;
    Ok(())
}
