//! Belief functions induced by random fuzzy sets on finite frames.
//!
//! Crisp Dempster-Shafer mass functions and possibility distributions are both
//! special cases of [`FuzzyMassFunction`]. The crate also covers likelihood-based
//! inference for a binomial proportion and Monte-Carlo predictive belief functions.

pub mod codec;
pub mod error;
pub mod frame;
pub mod fuzzy_mass;
pub mod inference;
pub mod mass;
pub mod numeric;
pub mod possibility;
pub mod predict;
pub mod worked_examples;

pub use codec::Table;
pub use error::{Error, Result};
pub use frame::{Frame, FrameId, FuzzySet, LevelDecomposition, TConorm, TNorm};
pub use fuzzy_mass::{
    bayes_condition, check_bel0_representation, FuzzyCombinationResult, FuzzyMassFunction,
};
pub use inference::{
    confidence_region, coverage_experiment, likelihood_mass, posterior, relative_likelihood,
    wilks_cut_level, BinomialModel, CoverageTable, DiscreteModel, JointModel, LikelihoodFuzzySet,
    TabularModel,
};
pub use mass::{BeliefTriple, CombinationResult, EventRow, MassFunction};
pub use possibility::{
    consonant_mass, measures_crisp, measures_fuzzy, measures_fuzzy_choquet, measures_fuzzy_sugeno,
    EventExtension, MeasureBundle,
};
pub use predict::{
    contour_and_cdfs, dominance_coverage, dominance_scatter, predictive_measures,
    sample_predictive, DominanceConfig, DominanceTable, EventEstimate, PredictionSetup,
    PredictiveSample, PredictiveSummary, ScatterPoint,
};
pub use worked_examples::{list_worked_examples, run_worked_examples, CheckOutcome, ExampleReport};
