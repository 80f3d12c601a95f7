#![allow(dead_code)]

use erfs::{Frame, FuzzyMassFunction, FuzzySet, MassFunction};
use proptest::prelude::*;

pub const CASES: u32 = 256;

pub fn config() -> ProptestConfig {
    ProptestConfig {
        cases: CASES,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

/// Grades on a coarse grid (to produce ties) or anywhere in [0, 1].
pub fn grade() -> impl Strategy<Value = f64> {
    prop_oneof![(0u32..=20).prop_map(|k| f64::from(k) / 20.0), 0.0..=1.0f64]
}

pub fn grades(q: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(grade(), q)
}

pub fn normal_grades(q: usize) -> impl Strategy<Value = Vec<f64>> {
    (grades(q), 0..q).prop_map(|(mut v, i)| {
        v[i] = 1.0;
        v
    })
}

/// Normal grades bounded away from zero, so products never vanish.
pub fn positive_normal_grades(q: usize) -> impl Strategy<Value = Vec<f64>> {
    (prop::collection::vec(0.05..=1.0f64, q), 0..q).prop_map(|(mut v, i)| {
        v[i] = 1.0;
        v
    })
}

pub fn set(frame: &Frame, mu: Vec<f64>) -> FuzzySet {
    FuzzySet::new(frame, mu).unwrap()
}

/// Weights normalized to sum to one.
pub fn weights(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05..=1.0f64, n).prop_map(|w| {
        let total: f64 = w.iter().sum();
        w.iter().map(|x| x / total).collect()
    })
}

/// Nonempty subsets as bit masks over `q` elements.
pub fn subset_mask(q: usize) -> impl Strategy<Value = u32> {
    1u32..(1u32 << q)
}

pub fn members(mask: u32, q: usize) -> Vec<usize> {
    (0..q).filter(|i| mask >> i & 1 == 1).collect()
}

pub fn crisp(frame: &Frame, mask: u32) -> FuzzySet {
    FuzzySet::crisp(frame, members(mask, frame.len())).unwrap()
}

/// All subsets of the frame, the empty set included.
pub fn all_events(frame: &Frame) -> Vec<FuzzySet> {
    (0..1u32 << frame.len()).map(|m| crisp(frame, m)).collect()
}

/// `(q, focal masks, weights)` for a crisp mass function.
pub fn crisp_mass_parts(max_q: usize, max_focal: usize) -> impl Strategy<Value = (usize, Vec<u32>, Vec<f64>)> {
    (1..=max_q, 1..=max_focal).prop_flat_map(|(q, n)| {
        (Just(q), prop::collection::vec(subset_mask(q), n), weights(n))
    })
}

pub fn build_crisp_mass(frame: &Frame, masks: &[u32], w: &[f64]) -> MassFunction {
    let focal = masks
        .iter()
        .zip(w)
        .map(|(&m, &x)| (members(m, frame.len()), x))
        .collect();
    MassFunction::from_index_sets(frame, focal).unwrap()
}

/// Focal membership vectors (normal) with weights, for frames of size `q`.
pub fn fuzzy_focal(q: usize, max_focal: usize) -> impl Strategy<Value = Vec<(Vec<f64>, f64)>> {
    (1..=max_focal).prop_flat_map(move |n| {
        (prop::collection::vec(normal_grades(q), n), weights(n))
            .prop_map(|(sets, w)| sets.into_iter().zip(w).collect())
    })
}

pub fn positive_fuzzy_focal(q: usize, max_focal: usize) -> impl Strategy<Value = Vec<(Vec<f64>, f64)>> {
    (1..=max_focal).prop_flat_map(move |n| {
        (prop::collection::vec(positive_normal_grades(q), n), weights(n))
            .prop_map(|(sets, w)| sets.into_iter().zip(w).collect())
    })
}

pub fn build_fuzzy_mass(frame: &Frame, focal: &[(Vec<f64>, f64)]) -> FuzzyMassFunction {
    let focal = focal
        .iter()
        .map(|(mu, m)| (set(frame, mu.clone()), *m))
        .collect();
    FuzzyMassFunction::new(frame, focal).unwrap()
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
