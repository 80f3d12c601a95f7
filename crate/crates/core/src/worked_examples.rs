//! Worked examples on a four-element frame, checked against pinned constants.
//!
//! The fixture uses `F̃ = (0.5, 1, 0.8, 0.3)`, `G̃ = (0.3, 0.7, 1, 0.2)` and
//! `H̃ = (1, 0.6, 0, 0.1)`. Examples 1 to 3 work with possibility distributions,
//! example 4 with the simple fuzzy mass functions `m₁(F̃) = 0.6` and `m₂(G̃) = 0.7`.

use serde::{Deserialize, Serialize};

use crate::codec::{format_number, Table};
use crate::error::Result;
use crate::frame::{Frame, FuzzySet};
use crate::fuzzy_mass::{FuzzyCombinationResult, FuzzyMassFunction};
use crate::mass::{CombinationResult, MassFunction};
use crate::possibility::{consonant_mass, measures_fuzzy_choquet, measures_fuzzy_sugeno};

/// Tolerance for values given to two to four significant figures.
pub const ROUNDED_TOLERANCE: f64 = 5e-3;
/// Tolerance for values given to three significant figures after a division.
pub const THREE_FIGURE_TOLERANCE: f64 = 5e-4;
/// Tolerance for finite sums that are exact in decimal arithmetic.
pub const EXACT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// `|got − expected| ≤ tolerance`.
    Equal,
    /// `|got − expected| > tolerance`.
    Differ,
}

pub struct Fixture {
    pub frame: Frame,
    pub f: FuzzySet,
    pub g: FuzzySet,
    pub h: FuzzySet,
    pub fg: FuzzySet,
    pub mf: MassFunction,
    pub mg: MassFunction,
    pub dempster: CombinationResult,
    pub soft: FuzzyCombinationResult,
}

impl Fixture {
    pub fn new() -> Result<Self> {
        let frame = Frame::indexed(4)?;
        let f = FuzzySet::new(&frame, vec![0.5, 1.0, 0.8, 0.3])?;
        let g = FuzzySet::new(&frame, vec![0.3, 0.7, 1.0, 0.2])?;
        let h = FuzzySet::new(&frame, vec![1.0, 0.6, 0.0, 0.1])?;
        let fg = f.normalized_product(&g)?;
        let mf = consonant_mass(&f)?;
        let mg = consonant_mass(&g)?;
        let dempster = mf.dempster(&mg)?;
        let m1 = FuzzyMassFunction::new(&frame, vec![(f.clone(), 0.6), (frame.full(), 0.4)])?;
        let m2 = FuzzyMassFunction::new(&frame, vec![(g.clone(), 0.7), (frame.full(), 0.3)])?;
        let soft = m1.orthogonal_sum(&m2)?;
        Ok(Fixture {
            frame,
            f,
            g,
            h,
            fg,
            mf,
            mg,
            dempster,
            soft,
        })
    }

    fn crisp(&self, members: &[usize]) -> Result<FuzzySet> {
        FuzzySet::crisp(&self.frame, members.iter().copied())
    }

    fn crisp_mass(&self, m: &MassFunction, members: &[usize]) -> Result<f64> {
        m.mass_of(&self.crisp(members)?)
    }
}

type Compute = fn(&Fixture) -> Result<f64>;

/// One pinned value and how to recompute it.
pub struct Check {
    pub example: &'static str,
    pub name: &'static str,
    pub expected: f64,
    pub tolerance: f64,
    pub relation: Relation,
    compute: Compute,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub example: String,
    pub name: String,
    pub expected: f64,
    pub got: f64,
    pub delta: f64,
    pub tolerance: f64,
    pub relation: Relation,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ExampleReport {
    pub checks: Vec<CheckOutcome>,
}

impl ExampleReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_table(&self) -> Table {
        let header = ["example", "check", "expected", "got", "delta", "tolerance", "status"];
        let mut t = Table::new(header.map(String::from).to_vec());
        for c in &self.checks {
            let expected = match c.relation {
                Relation::Equal => format_number(c.expected),
                Relation::Differ => format!("!= {}", format_number(c.expected)),
            };
            t.rows.push(vec![
                c.example.clone(),
                c.name.clone(),
                expected,
                format_number(c.got),
                format!("{:.3e}", c.delta),
                format!("{:e}", c.tolerance),
                if c.passed { "PASS" } else { "FAIL" }.to_string(),
            ]);
        }
        t
    }
}

fn check(
    example: &'static str,
    name: &'static str,
    expected: f64,
    tolerance: f64,
    compute: Compute,
) -> Check {
    Check {
        example,
        name,
        expected,
        tolerance,
        relation: Relation::Equal,
        compute,
    }
}

/// Every pinned check, in report order.
pub fn worked_example_checks() -> Vec<Check> {
    const R3: f64 = THREE_FIGURE_TOLERANCE;
    const EX: f64 = EXACT_TOLERANCE;
    const RD: f64 = ROUNDED_TOLERANCE;
    vec![
        check("1", "(F⊙G)(θ1)", 0.1875, EX, |x| Ok(x.fg.grade(0))),
        check("1", "(F⊙G)(θ2)", 0.875, EX, |x| Ok(x.fg.grade(1))),
        check("1", "(F⊙G)(θ3)", 1.0, EX, |x| Ok(x.fg.grade(2))),
        check("1", "(F⊙G)(θ4)", 0.075, EX, |x| Ok(x.fg.grade(3))),
        check("1", "m_F⊙G({θ3})", 0.125, EX, |x| x.crisp_mass(&consonant_mass(&x.fg)?, &[2])),
        check("1", "m_F⊙G({θ2,θ3})", 0.6875, EX, |x| x.crisp_mass(&consonant_mass(&x.fg)?, &[1, 2])),
        check("1", "m_F⊙G({θ1,θ2,θ3})", 0.1125, EX, |x| {
            x.crisp_mass(&consonant_mass(&x.fg)?, &[0, 1, 2])
        }),
        check("1", "m_F⊙G(Θ)", 0.075, EX, |x| x.crisp_mass(&consonant_mass(&x.fg)?, &[0, 1, 2, 3])),
        check("1", "m_F({θ2})", 0.2, EX, |x| x.crisp_mass(&x.mf, &[1])),
        check("1", "m_F({θ2,θ3})", 0.3, EX, |x| x.crisp_mass(&x.mf, &[1, 2])),
        check("1", "m_F({θ1,θ2,θ3})", 0.2, EX, |x| x.crisp_mass(&x.mf, &[0, 1, 2])),
        check("1", "m_F(Θ)", 0.3, EX, |x| x.crisp_mass(&x.mf, &[0, 1, 2, 3])),
        check("1", "m_G({θ3})", 0.3, EX, |x| x.crisp_mass(&x.mg, &[2])),
        check("1", "m_G({θ2,θ3})", 0.4, EX, |x| x.crisp_mass(&x.mg, &[1, 2])),
        check("1", "m_G({θ1,θ2,θ3})", 0.1, EX, |x| x.crisp_mass(&x.mg, &[0, 1, 2])),
        check("1", "m_G(Θ)", 0.2, EX, |x| x.crisp_mass(&x.mg, &[0, 1, 2, 3])),
        check("1", "conflict of m_F and m_G", 0.06, EX, |x| Ok(x.dempster.conflict)),
        check("1", "(m_F⊕m_G)({θ3})", 0.255, R3, |x| x.crisp_mass(&x.dempster.mass, &[2])),
        check("1", "(m_F⊕m_G)({θ2})", 0.149, R3, |x| x.crisp_mass(&x.dempster.mass, &[1])),
        check("1", "(m_F⊕m_G)({θ2,θ3})", 0.436, R3, |x| x.crisp_mass(&x.dempster.mass, &[1, 2])),
        check("1", "(m_F⊕m_G)({θ1,θ2,θ3})", 0.0957, R3, |x| {
            x.crisp_mass(&x.dempster.mass, &[0, 1, 2])
        }),
        check("1", "(m_F⊕m_G)(Θ)", 0.0638, R3, |x| x.crisp_mass(&x.dempster.mass, &[0, 1, 2, 3])),
        check("1", "pl(θ1)", 0.160, R3, |x| Ok(x.dempster.mass.contour().grade(0))),
        check("1", "pl(θ2)", 0.745, R3, |x| Ok(x.dempster.mass.contour().grade(1))),
        check("1", "pl(θ3)", 0.851, R3, |x| Ok(x.dempster.mass.contour().grade(2))),
        check("1", "pl(θ4)", 0.0638, R3, |x| Ok(x.dempster.mass.contour().grade(3))),
        check("1", "(F⊙G)(θ1) / pl(θ1)", 1.175, RD, |x| Ok(x.fg.grade(0) / x.dempster.mass.contour().grade(0))),
        check("1", "(F⊙G)(θ2) / pl(θ2)", 1.175, RD, |x| Ok(x.fg.grade(1) / x.dempster.mass.contour().grade(1))),
        check("1", "(F⊙G)(θ3) / pl(θ3)", 1.175, RD, |x| Ok(x.fg.grade(2) / x.dempster.mass.contour().grade(2))),
        check("1", "(F⊙G)(θ4) / pl(θ4)", 1.175, RD, |x| Ok(x.fg.grade(3) / x.dempster.mass.contour().grade(3))),
        check("1", "m_F⊕m_G is not consonant", 0.0, EX, |x| Ok(f64::from(u8::from(x.dempster.mass.is_consonant())))),
        check("2", "Sugeno Π_F(G)", 0.8, EX, |x| Ok(measures_fuzzy_sugeno(&x.f, &x.g)?.possibility)),
        check("2", "Sugeno N_F(G)", 0.5, EX, |x| Ok(measures_fuzzy_sugeno(&x.f, &x.g)?.necessity)),
        check("2", "Choquet Π_F(G)", 0.94, EX, |x| Ok(measures_fuzzy_choquet(&x.f, &x.g)?.possibility)),
        check("2", "Choquet N_F(G)", 0.47, EX, |x| Ok(measures_fuzzy_choquet(&x.f, &x.g)?.necessity)),
        check("3", "Sugeno Δ_F(G)", 0.7, EX, |x| Ok(measures_fuzzy_sugeno(&x.f, &x.g)?.guaranteed)),
        check("3", "Choquet Δ_F(G)", 0.67, EX, |x| Ok(measures_fuzzy_choquet(&x.f, &x.g)?.guaranteed)),
        check("3", "Sugeno Δ_F(H)", 0.5, EX, |x| Ok(measures_fuzzy_sugeno(&x.f, &x.h)?.guaranteed)),
        check("3", "Choquet Δ_F(H)", 0.48, EX, |x| Ok(measures_fuzzy_choquet(&x.f, &x.h)?.guaranteed)),
        check("3", "Choquet Δ_F(G∨H)", 0.46, EX, |x| {
            Ok(measures_fuzzy_choquet(&x.f, &x.g.max(&x.h)?)?.guaranteed)
        }),
        check("3", "Sugeno Δ_F(G∨H) − min(Δ_F(G), Δ_F(H))", 0.0, EX, |x| {
            let joint = measures_fuzzy_sugeno(&x.f, &x.g.max(&x.h)?)?.guaranteed;
            let g = measures_fuzzy_sugeno(&x.f, &x.g)?.guaranteed;
            let h = measures_fuzzy_sugeno(&x.f, &x.h)?.guaranteed;
            Ok(joint - g.min(h))
        }),
        Check {
            relation: Relation::Differ,
            ..check("3", "Choquet Δ_F(G∨H) − min(Δ_F(G), Δ_F(H))", 0.0, EX, |x| {
                let joint = measures_fuzzy_choquet(&x.f, &x.g.max(&x.h)?)?.guaranteed;
                let g = measures_fuzzy_choquet(&x.f, &x.g)?.guaranteed;
                let h = measures_fuzzy_choquet(&x.f, &x.h)?.guaranteed;
                Ok(joint - g.min(h))
            })
        },
        check("4", "conflict of m1 and m2", 0.084, EX, |x| Ok(x.soft.conflict)),
        check("4", "(m1⊕m2)(F⊙G)", 0.336 / 0.916, R3, |x| Ok(x.soft.mass.mass_of(&x.fg))),
        check("4", "(m1⊕m2)(F)", 0.18 / 0.916, R3, |x| Ok(x.soft.mass.mass_of(&x.f))),
        check("4", "(m1⊕m2)(G)", 0.28 / 0.916, R3, |x| Ok(x.soft.mass.mass_of(&x.g))),
        check("4", "(m1⊕m2)(Θ)", 0.12 / 0.916, R3, |x| Ok(x.soft.mass.mass_of(&x.frame.full()))),
        check("4", "(m1⊕m2)(F⊙G) rounded", 0.37, RD, |x| Ok(x.soft.mass.mass_of(&x.fg))),
        check("4", "(m1⊕m2)(F) rounded", 0.20, RD, |x| Ok(x.soft.mass.mass_of(&x.f))),
        check("4", "(m1⊕m2)(G) rounded", 0.31, RD, |x| Ok(x.soft.mass.mass_of(&x.g))),
        check("4", "(m1⊕m2)(Θ) rounded", 0.13, RD, |x| Ok(x.soft.mass.mass_of(&x.frame.full()))),
    ]
}

/// Report listing the checks without evaluating them.
pub fn list_worked_examples() -> Vec<(&'static str, &'static str)> {
    worked_example_checks().iter().map(|c| (c.example, c.name)).collect()
}

/// Evaluates every check. A check whose computation errors counts as failed with `got = NaN`.
pub fn run_worked_examples() -> Result<ExampleReport> {
    let fixture = Fixture::new()?;
    let checks = worked_example_checks()
        .into_iter()
        .map(|c| {
            let got = (c.compute)(&fixture).unwrap_or(f64::NAN);
            let delta = (got - c.expected).abs();
            let passed = match c.relation {
                Relation::Equal => delta <= c.tolerance,
                Relation::Differ => delta > c.tolerance,
            };
            CheckOutcome {
                example: c.example.to_string(),
                name: c.name.to_string(),
                expected: c.expected,
                got,
                delta,
                tolerance: c.tolerance,
                relation: c.relation,
                passed,
            }
        })
        .collect();
    Ok(ExampleReport { checks })
}
