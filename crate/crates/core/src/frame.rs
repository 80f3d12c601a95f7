//! Finite frames and the fuzzy-set algebra used throughout the crate.
//!
//! A [`Frame`] is an immutable, ordered list of labels. A [`FuzzySet`] is a
//! membership vector indexed against one frame; every binary operation checks
//! that both operands share the same frame and fails fast otherwise.
//!
//! Grades are `f64`. Two fuzzy sets are considered the same focal element when
//! they agree after rounding to [`CANONICAL_DECIMALS`] decimal places; see
//! [`FuzzySet::canonical_key`].

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of decimals kept in the canonical form of a membership grade.
pub const CANONICAL_DECIMALS: i32 = 12;

/// Heights below this value are reported as near-total conflict.
pub const DEFAULT_HEIGHT_WARNING: f64 = 1e-6;

const CANONICAL_SCALE: f64 = 1e12;

/// Rounds a grade to its canonical 12-decimal representation.
pub fn canonical_grade(value: f64) -> f64 {
    (value * CANONICAL_SCALE).round() / CANONICAL_SCALE
}

/// Stable identity of a frame: FNV-1a over its labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FrameId(u64);

impl FrameId {
    fn of_labels(labels: &[String]) -> Self {
        const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
        const PRIME: u64 = 0x0000_0100_0000_01b3;
        let mut hash = OFFSET;
        for label in labels {
            for byte in label.as_bytes().iter().chain(std::iter::once(&0xffu8)) {
                hash ^= u64::from(*byte);
                hash = hash.wrapping_mul(PRIME);
            }
        }
        FrameId(hash)
    }

    pub fn parse(text: &str) -> Option<Self> {
        u64::from_str_radix(text, 16).ok().map(FrameId)
    }
}

impl fmt::Display for FrameId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

#[derive(Debug)]
struct FrameInner {
    id: FrameId,
    labels: Vec<String>,
}

/// An ordered finite universe `{θ₁, …, θ_q}`.
///
/// Cloning is cheap (reference counted).
#[derive(Clone)]
pub struct Frame {
    inner: Arc<FrameInner>,
}

impl Frame {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyFrame);
        }
        let mut seen = HashSet::with_capacity(labels.len());
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        let id = FrameId::of_labels(&labels);
        Ok(Frame {
            inner: Arc::new(FrameInner { id, labels }),
        })
    }

    /// Frame with labels `θ1 … θq`.
    pub fn indexed(size: usize) -> Result<Self> {
        Frame::new((1..=size).map(|i| format!("θ{i}")))
    }

    pub fn id(&self) -> FrameId {
        self.inner.id
    }

    pub fn len(&self) -> usize {
        self.inner.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &[String] {
        &self.inner.labels
    }

    pub fn label(&self, index: usize) -> Option<&str> {
        self.inner.labels.get(index).map(String::as_str)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.inner.labels.iter().position(|l| l == label)
    }

    pub fn ensure_same(&self, other: &Frame) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FrameMismatch {
                left: self.id().to_string(),
                right: other.id().to_string(),
            })
        }
    }

    /// The full frame Θ as a crisp set.
    pub fn full(&self) -> FuzzySet {
        FuzzySet::constant(self, 1.0)
    }

    pub fn empty_set(&self) -> FuzzySet {
        FuzzySet::constant(self, 0.0)
    }

    pub fn singleton(&self, index: usize) -> Result<FuzzySet> {
        FuzzySet::crisp(self, [index])
    }
}

impl PartialEq for Frame {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.id == other.inner.id && self.inner.labels == other.inner.labels)
    }
}

impl Eq for Frame {}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Frame")
            .field("id", &self.inner.id)
            .field("labels", &self.inner.labels)
            .finish()
    }
}

/// Triangular norms used by the conjunctive rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TNorm {
    Min,
    Product,
}

impl TNorm {
    pub fn apply(self, u: f64, v: f64) -> f64 {
        match self {
            TNorm::Min => u.min(v),
            TNorm::Product => u * v,
        }
    }

    /// The dual t-conorm `u ⊥ v = 1 − (1−u) ⊤ (1−v)`.
    pub fn dual(self) -> TConorm {
        match self {
            TNorm::Min => TConorm::Max,
            TNorm::Product => TConorm::ProbabilisticSum,
        }
    }
}

/// Triangular conorms used by the disjunctive rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TConorm {
    Max,
    ProbabilisticSum,
}

impl TConorm {
    pub fn apply(self, u: f64, v: f64) -> f64 {
        match self {
            TConorm::Max => u.max(v),
            TConorm::ProbabilisticSum => 1.0 - (1.0 - u) * (1.0 - v),
        }
    }

    pub fn dual(self) -> TNorm {
        match self {
            TConorm::Max => TNorm::Min,
            TConorm::ProbabilisticSum => TNorm::Product,
        }
    }
}

/// Membership function over a [`Frame`].
#[derive(Clone)]
pub struct FuzzySet {
    frame: Frame,
    mu: Arc<[f64]>,
}

impl FuzzySet {
    pub fn new(frame: &Frame, mu: Vec<f64>) -> Result<Self> {
        if mu.len() != frame.len() {
            return Err(Error::LengthMismatch {
                expected: frame.len(),
                got: mu.len(),
            });
        }
        if let Some(bad) = mu.iter().copied().find(|g| !(0.0..=1.0).contains(g)) {
            return Err(Error::InvalidGrade(bad));
        }
        Ok(FuzzySet::from_unchecked(frame, mu))
    }

    /// Builds a set whose grades are already known to be in `[0, 1]`.
    pub(crate) fn from_unchecked(frame: &Frame, mu: Vec<f64>) -> Self {
        debug_assert_eq!(mu.len(), frame.len());
        FuzzySet {
            frame: frame.clone(),
            mu: mu.into(),
        }
    }

    pub fn constant(frame: &Frame, grade: f64) -> Self {
        FuzzySet::from_unchecked(frame, vec![grade.clamp(0.0, 1.0); frame.len()])
    }

    /// Crisp set from element indices.
    pub fn crisp<I: IntoIterator<Item = usize>>(frame: &Frame, members: I) -> Result<Self> {
        let mut mu = vec![0.0; frame.len()];
        for i in members {
            if i >= frame.len() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    size: frame.len(),
                });
            }
            mu[i] = 1.0;
        }
        Ok(FuzzySet::from_unchecked(frame, mu))
    }

    pub(crate) fn from_bits(frame: &Frame, bits: &CrispBits) -> Self {
        let mu = (0..frame.len())
            .map(|i| if bits.contains(i) { 1.0 } else { 0.0 })
            .collect();
        FuzzySet::from_unchecked(frame, mu)
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.iter().all(|&g| g == 0.0)
    }

    pub fn grades(&self) -> &[f64] {
        &self.mu
    }

    pub fn grade(&self, index: usize) -> f64 {
        self.mu[index]
    }

    pub fn height(&self) -> f64 {
        self.mu.iter().copied().fold(0.0, f64::max)
    }

    pub fn is_normal(&self) -> bool {
        self.height() == 1.0
    }

    pub fn is_crisp(&self) -> bool {
        self.mu.iter().all(|&g| g == 0.0 || g == 1.0)
    }

    /// Indices with positive membership.
    pub fn support(&self) -> Vec<usize> {
        self.indices_where(|g| g > 0.0)
    }

    /// Indices with membership one.
    pub fn core(&self) -> Vec<usize> {
        self.indices_where(|g| g == 1.0)
    }

    fn indices_where(&self, pred: impl Fn(f64) -> bool) -> Vec<usize> {
        self.mu
            .iter()
            .enumerate()
            .filter(|(_, &g)| pred(g))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn ensure_same_frame(&self, other: &FuzzySet) -> Result<()> {
        self.frame.ensure_same(&other.frame)
    }

    pub fn ensure_crisp(&self) -> Result<()> {
        if self.is_crisp() {
            Ok(())
        } else {
            Err(Error::NotCrisp)
        }
    }

    pub fn ensure_normal(&self) -> Result<()> {
        if self.is_normal() {
            Ok(())
        } else {
            Err(Error::NotNormal(self.height()))
        }
    }

    fn zip_with(&self, other: &FuzzySet, f: impl Fn(f64, f64) -> f64) -> Result<FuzzySet> {
        self.ensure_same_frame(other)?;
        let mu = self
            .mu
            .iter()
            .zip(other.mu.iter())
            .map(|(&a, &b)| f(a, b).clamp(0.0, 1.0))
            .collect();
        Ok(FuzzySet::from_unchecked(&self.frame, mu))
    }

    /// Pointwise t-norm intersection `F ∩⊤ G`.
    pub fn combine(&self, other: &FuzzySet, t: TNorm) -> Result<FuzzySet> {
        self.zip_with(other, |a, b| t.apply(a, b))
    }

    /// Pointwise t-conorm union `F ∪⊥ G`.
    pub fn combine_disjunctive(&self, other: &FuzzySet, s: TConorm) -> Result<FuzzySet> {
        self.zip_with(other, |a, b| s.apply(a, b))
    }

    pub fn min(&self, other: &FuzzySet) -> Result<FuzzySet> {
        self.combine(other, TNorm::Min)
    }

    pub fn max(&self, other: &FuzzySet) -> Result<FuzzySet> {
        self.combine_disjunctive(other, TConorm::Max)
    }

    pub fn complement(&self) -> FuzzySet {
        let mu = self.mu.iter().map(|&g| 1.0 - g).collect();
        FuzzySet::from_unchecked(&self.frame, mu)
    }

    /// Divides by the height. Fails with [`Error::TotalConflict`] on an all-zero set.
    pub fn normalize(&self) -> Result<FuzzySet> {
        let h = self.height();
        if h <= 0.0 {
            return Err(Error::TotalConflict);
        }
        if h == 1.0 {
            return Ok(self.clone());
        }
        let mu = self.mu.iter().map(|&g| (g / h).min(1.0)).collect::<Vec<_>>();
        Ok(FuzzySet::from_unchecked(&self.frame, force_peak(mu, h, &self.mu)))
    }

    /// Normalized ⊤-intersection together with the height of the raw intersection.
    pub fn normalized_intersection(&self, other: &FuzzySet, t: TNorm) -> Result<(FuzzySet, f64)> {
        let raw = self.combine(other, t)?;
        let h = raw.height();
        Ok((raw.normalize()?, h))
    }

    /// Normalized product intersection `F ⊙ G = F·G / h(F·G)`.
    pub fn normalized_product(&self, other: &FuzzySet) -> Result<FuzzySet> {
        self.normalized_intersection(other, TNorm::Product).map(|(f, _)| f)
    }

    /// `{θ : F(θ) ≥ α}` for `α ∈ (0, 1]`.
    pub fn alpha_cut(&self, alpha: f64) -> Result<FuzzySet> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidAlpha(alpha));
        }
        let mu = self
            .mu
            .iter()
            .map(|&g| if g >= alpha { 1.0 } else { 0.0 })
            .collect();
        Ok(FuzzySet::from_unchecked(&self.frame, mu))
    }

    /// Exact level-set decomposition over the distinct positive grades.
    pub fn level_decompose(&self) -> LevelDecomposition {
        let mut levels: Vec<f64> = self.mu.iter().copied().filter(|&g| g > 0.0).collect();
        levels.sort_by(f64::total_cmp);
        levels.dedup();
        let cuts = levels
            .iter()
            .map(|&a| {
                let mu = self
                    .mu
                    .iter()
                    .map(|&g| if g >= a { 1.0 } else { 0.0 })
                    .collect();
                FuzzySet::from_unchecked(&self.frame, mu)
            })
            .collect();
        let weights = levels
            .iter()
            .scan(0.0, |prev, &a| {
                let w = a - *prev;
                *prev = a;
                Some(w)
            })
            .collect();
        LevelDecomposition {
            levels,
            cuts,
            weights,
        }
    }

    /// `Int(A, F) = h(A ∧ F)`.
    pub fn degree_intersection(&self, other: &FuzzySet) -> Result<f64> {
        Ok(self.min(other)?.height())
    }

    /// Degree of inclusion of `self` in `container`: `min_θ (container ∨ selfᶜ)(θ)`.
    pub fn degree_inclusion(&self, container: &FuzzySet) -> Result<f64> {
        self.ensure_same_frame(container)?;
        Ok(self
            .mu
            .iter()
            .zip(container.mu.iter())
            .map(|(&f, &a)| a.max(1.0 - f))
            .fold(1.0, f64::min))
    }

    /// Key identifying the set up to 12-decimal rounding.
    pub fn canonical_key(&self) -> Vec<i64> {
        self.mu
            .iter()
            .map(|&g| (g * CANONICAL_SCALE).round() as i64)
            .collect()
    }

    pub fn canonical_grades(&self) -> Vec<f64> {
        self.mu.iter().map(|&g| canonical_grade(g)).collect()
    }

    /// Pointwise agreement within `tol`.
    pub fn approx_eq(&self, other: &FuzzySet, tol: f64) -> bool {
        self.frame == other.frame
            && self
                .mu
                .iter()
                .zip(other.mu.iter())
                .all(|(a, b)| (a - b).abs() <= tol)
    }

    /// `self ⊆ other` in the Zadeh sense (pointwise `≤`).
    pub fn is_subset_of(&self, other: &FuzzySet) -> Result<bool> {
        self.ensure_same_frame(other)?;
        Ok(self.mu.iter().zip(other.mu.iter()).all(|(a, b)| a <= b))
    }

    pub(crate) fn to_bits(&self) -> Result<CrispBits> {
        self.ensure_crisp()?;
        Ok(CrispBits::from_indicator(&self.mu))
    }
}

// Dividing by the height may leave the maximum a hair below one; pin it.
fn force_peak(mut mu: Vec<f64>, h: f64, raw: &[f64]) -> Vec<f64> {
    for (g, &r) in mu.iter_mut().zip(raw) {
        if r == h {
            *g = 1.0;
        }
    }
    mu
}

impl PartialEq for FuzzySet {
    /// Equality up to the canonical 12-decimal form.
    fn eq(&self, other: &Self) -> bool {
        self.frame == other.frame && self.canonical_key() == other.canonical_key()
    }
}

impl fmt::Debug for FuzzySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FuzzySet")
            .field("frame", &self.frame.id())
            .field("mu", &&*self.mu)
            .finish()
    }
}

impl fmt::Display for FuzzySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, g) in self.mu.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}/{}", self.frame.labels()[i], canonical_grade(*g))?;
        }
        write!(f, "}}")
    }
}

/// Level sets `0 < α₁ < … < α_k` of a fuzzy set with their cuts.
///
/// For any set function `g`, `∫₀¹ g(ᵅF) dα = Σ_j weights[j] · g(cuts[j]) + (1 − α_k)·g(∅)`.
#[derive(Debug, Clone)]
pub struct LevelDecomposition {
    pub levels: Vec<f64>,
    pub cuts: Vec<FuzzySet>,
    /// `α_j − α_{j−1}` with `α₀ = 0`, aligned with `levels`.
    pub weights: Vec<f64>,
}

impl LevelDecomposition {
    pub fn height(&self) -> f64 {
        self.levels.last().copied().unwrap_or(0.0)
    }

    /// `∫₀¹ g(ᵅF) dα`, where `empty_value = g(∅)` covers `α ∈ (h, 1]`.
    pub fn integrate<E>(
        &self,
        empty_value: f64,
        mut g: impl FnMut(&FuzzySet) -> std::result::Result<f64, E>,
    ) -> std::result::Result<f64, E> {
        let mut total = (1.0 - self.height()) * empty_value;
        for (w, cut) in self.weights.iter().zip(&self.cuts) {
            total += w * g(cut)?;
        }
        Ok(total)
    }

    /// Rebuilds the membership vector: each element gets the highest level whose cut contains it.
    pub fn reconstruct(&self, frame: &Frame) -> FuzzySet {
        let mut mu = vec![0.0; frame.len()];
        for (level, cut) in self.levels.iter().zip(&self.cuts) {
            for i in cut.core() {
                mu[i] = *level;
            }
        }
        FuzzySet::from_unchecked(frame, mu)
    }
}

/// Bit-packed crisp subset used as a map key for crisp focal sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct CrispBits {
    words: Vec<u64>,
    len: usize,
}

impl CrispBits {
    pub fn empty(len: usize) -> Self {
        CrispBits {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn full(len: usize) -> Self {
        let mut bits = CrispBits::empty(len);
        for i in 0..len {
            bits.insert(i);
        }
        bits
    }

    pub fn from_indicator(mu: &[f64]) -> Self {
        let mut bits = CrispBits::empty(mu.len());
        for (i, &g) in mu.iter().enumerate() {
            if g >= 1.0 {
                bits.insert(i);
            }
        }
        bits
    }

    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut bits = CrispBits::empty(len);
        for &i in indices {
            bits.insert(i);
        }
        bits
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn intersection(&self, other: &CrispBits) -> CrispBits {
        CrispBits {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
            len: self.len,
        }
    }

    pub fn union(&self, other: &CrispBits) -> CrispBits {
        CrispBits {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
            len: self.len,
        }
    }

    pub fn is_subset_of(&self, other: &CrispBits) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &CrispBits) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.contains(i)).collect()
    }
}
