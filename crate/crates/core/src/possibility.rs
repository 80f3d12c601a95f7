//! Possibility, necessity, guaranteed possibility and potential certainty
//! induced by a normal fuzzy restriction `θ is F̃`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{FuzzySet, LevelDecomposition};
use crate::mass::MassFunction;

/// The four measures of one event.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureBundle {
    pub possibility: f64,
    pub necessity: f64,
    pub guaranteed: f64,
    pub potential: f64,
}

/// How a measure is extended to fuzzy events.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventExtension {
    /// Max-min forms.
    Sugeno,
    /// Integrals over the α-cuts of the event.
    Choquet,
}

impl std::str::FromStr for EventExtension {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sugeno" => Ok(EventExtension::Sugeno),
            "choquet" => Ok(EventExtension::Choquet),
            other => Err(Error::InvalidArgument(format!(
                "unknown event extension `{other}` (expected sugeno or choquet)"
            ))),
        }
    }
}

fn check_pair(f: &FuzzySet, a: &FuzzySet) -> Result<()> {
    f.ensure_same_frame(a)?;
    f.ensure_normal()
}

fn max_where(f: &FuzzySet, a: &FuzzySet, inside: bool, value: impl Fn(f64) -> f64) -> f64 {
    f.grades()
        .iter()
        .zip(a.grades())
        .filter(|(_, &m)| (m == 1.0) == inside)
        .map(|(&g, _)| value(g))
        .fold(0.0, f64::max)
}

/// `Π(A) = max_{θ∈A} F(θ)`; zero on the empty event.
pub fn possibility(f: &FuzzySet, a: &FuzzySet) -> Result<f64> {
    check_pair(f, a)?;
    a.ensure_crisp()?;
    Ok(max_where(f, a, true, |g| g))
}

/// `N(A) = 1 − max_{θ∉A} F(θ)`.
pub fn necessity(f: &FuzzySet, a: &FuzzySet) -> Result<f64> {
    check_pair(f, a)?;
    a.ensure_crisp()?;
    Ok(1.0 - max_where(f, a, false, |g| g))
}

/// `Δ(A) = min_{θ∈A} F(θ)`; undefined on the empty event.
pub fn guaranteed_possibility(f: &FuzzySet, a: &FuzzySet) -> Result<f64> {
    check_pair(f, a)?;
    a.ensure_crisp()?;
    if a.is_empty() {
        return Err(Error::EmptyEvent);
    }
    Ok(f.grades()
        .iter()
        .zip(a.grades())
        .filter(|(_, &m)| m == 1.0)
        .map(|(&g, _)| g)
        .fold(1.0, f64::min))
}

/// `∇(A) = max_{θ∉A} (1 − F(θ))`; zero on the full frame.
pub fn potential_certainty(f: &FuzzySet, a: &FuzzySet) -> Result<f64> {
    check_pair(f, a)?;
    a.ensure_crisp()?;
    Ok(max_where(f, a, false, |g| 1.0 - g))
}

/// All four measures of a crisp event.
pub fn measures_crisp(f: &FuzzySet, a: &FuzzySet) -> Result<MeasureBundle> {
    Ok(MeasureBundle {
        possibility: possibility(f, a)?,
        necessity: necessity(f, a)?,
        guaranteed: guaranteed_possibility(f, a)?,
        potential: potential_certainty(f, a)?,
    })
}

/// Max-min measures of a fuzzy event.
///
/// `Π = h(Ã ∧ F̃)`, `N = min(Ã ∨ F̃ᶜ)`, `Δ = min(Ãᶜ ∨ F̃)`, `∇ = 1 − min(Ã ∨ F̃)`.
pub fn measures_fuzzy_sugeno(f: &FuzzySet, a: &FuzzySet) -> Result<MeasureBundle> {
    check_pair(f, a)?;
    let mut possibility = 0.0_f64;
    let mut necessity = 1.0_f64;
    let mut guaranteed = 1.0_f64;
    let mut union_min = 1.0_f64;
    for (&fg, &ag) in f.grades().iter().zip(a.grades()) {
        possibility = possibility.max(ag.min(fg));
        necessity = necessity.min(ag.max(1.0 - fg));
        guaranteed = guaranteed.min((1.0 - ag).max(fg));
        union_min = union_min.min(ag.max(fg));
    }
    Ok(MeasureBundle {
        possibility,
        necessity,
        guaranteed,
        potential: 1.0 - union_min,
    })
}

/// Crisp measures of one cut, with `Δ(∅) = 1` so that the integrals stay total.
fn cut_measures(f: &FuzzySet, cut: &FuzzySet) -> (f64, f64, f64) {
    let mut inside_max = 0.0_f64;
    let mut inside_min = 1.0_f64;
    let mut outside_max = 0.0_f64;
    for (&g, &m) in f.grades().iter().zip(cut.grades()) {
        if m == 1.0 {
            inside_max = inside_max.max(g);
            inside_min = inside_min.min(g);
        } else {
            outside_max = outside_max.max(g);
        }
    }
    (inside_max, 1.0 - outside_max, inside_min)
}

/// `(Π, N, Δ)` of a fuzzy event integrated over the cuts in `levels`.
pub(crate) fn integrate_cuts(f: &FuzzySet, levels: &LevelDecomposition) -> (f64, f64, f64) {
    let empty = 1.0 - levels.height();
    let (mut pi, mut nec, mut gp) = (0.0, 0.0, empty);
    for (w, cut) in levels.weights.iter().zip(&levels.cuts) {
        let (p, n, d) = cut_measures(f, cut);
        pi += w * p;
        nec += w * n;
        gp += w * d;
    }
    (pi, nec, gp)
}

/// Measures of a fuzzy event as integrals over its α-cuts, evaluated exactly.
pub fn measures_fuzzy_choquet(f: &FuzzySet, a: &FuzzySet) -> Result<MeasureBundle> {
    check_pair(f, a)?;
    let (possibility, necessity, guaranteed) = integrate_cuts(f, &a.level_decompose());
    let (_, _, guaranteed_of_complement) = integrate_cuts(f, &a.complement().level_decompose());
    Ok(MeasureBundle {
        possibility,
        necessity,
        guaranteed,
        potential: 1.0 - guaranteed_of_complement,
    })
}

/// Fuzzy-event measures under the requested extension.
pub fn measures_fuzzy(f: &FuzzySet, a: &FuzzySet, kind: EventExtension) -> Result<MeasureBundle> {
    match kind {
        EventExtension::Sugeno => measures_fuzzy_sugeno(f, a),
        EventExtension::Choquet => measures_fuzzy_choquet(f, a),
    }
}

/// Consonant mass function whose contour is `pi`: nested level cuts weighted by the level gaps.
pub fn consonant_mass(pi: &FuzzySet) -> Result<MassFunction> {
    pi.ensure_normal()?;
    let levels = pi.level_decompose();
    let focal = levels.cuts.into_iter().zip(levels.weights).collect();
    MassFunction::new(pi.frame(), focal)
}
