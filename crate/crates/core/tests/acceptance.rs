//! Acceptance criteria. Each test prints one `PASS` or `FAIL` line and then asserts.

use std::io::{self, Write};
use std::time::{Duration, Instant};

use erfs::possibility::{consonant_mass, measures_fuzzy_choquet, measures_fuzzy_sugeno};
use erfs::predict::DEFAULT_DOMINANCE_SLACK;
use erfs::{
    bayes_condition, contour_and_cdfs, coverage_experiment, dominance_coverage, likelihood_mass,
    predictive_measures, sample_predictive, BinomialModel, DominanceConfig, Error, EventExtension,
    Frame, FuzzyMassFunction, FuzzySet, JointModel, MassFunction, PredictionSetup, TNorm,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

const EXACT: f64 = 1e-12;
const SEED: u64 = 20_240_917;
const K: usize = 15_000;

struct Outcome {
    failures: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { failures: Vec::new() }
    }

    fn check(&mut self, what: &str, got: f64, expected: f64, tol: f64) {
        let within = (got - expected).abs() <= tol;
        if !within {
            self.failures.push(format!("{what}: got {got:.6}, expected {expected} ± {tol:e}"));
        }
    }

    fn require(&mut self, what: &str, ok: bool) {
        if !ok {
            self.failures.push(what.to_string());
        }
    }

    fn within(&mut self, what: &str, elapsed: Duration, limit: Duration) {
        if elapsed > limit {
            self.failures.push(format!("{what}: took {elapsed:.2?}, limit {limit:?}"));
        }
    }

    fn finish(self, id: &str, title: &str, elapsed: Duration) {
        let mut line = if self.failures.is_empty() {
            format!("PASS [{id}] {title} ({elapsed:.2?})\n")
        } else {
            format!("FAIL [{id}] {title} ({elapsed:.2?})\n")
        };
        for f in &self.failures {
            line.push_str(&format!("    {f}\n"));
        }
        let _ = io::stderr().lock().write_all(line.as_bytes());
        if !self.failures.is_empty() {
            panic!("criterion {id} failed: {}", self.failures.join("; "));
        }
    }
}

struct Sets {
    frame: Frame,
    f: FuzzySet,
    g: FuzzySet,
    h: FuzzySet,
}

fn sets() -> Sets {
    let frame = Frame::indexed(4).unwrap();
    let f = FuzzySet::new(&frame, vec![0.5, 1.0, 0.8, 0.3]).unwrap();
    let g = FuzzySet::new(&frame, vec![0.3, 0.7, 1.0, 0.2]).unwrap();
    let h = FuzzySet::new(&frame, vec![1.0, 0.6, 0.0, 0.1]).unwrap();
    Sets { frame, f, g, h }
}

fn crisp(frame: &Frame, members: &[usize]) -> FuzzySet {
    FuzzySet::crisp(frame, members.iter().copied()).unwrap()
}

#[test]
fn criterion_1_normalized_product_and_dempster_example() {
    let start = Instant::now();
    let mut out = Outcome::new();
    let s = sets();
    let fg = s.f.normalized_product(&s.g).unwrap();
    for (i, e) in [0.1875, 0.875, 1.0, 0.075].into_iter().enumerate() {
        out.check(&format!("(F⊙G)(θ{})", i + 1), fg.grade(i), e, EXACT);
    }
    let m_fg = consonant_mass(&fg).unwrap();
    for (members, e) in [(vec![2], 0.125), (vec![1, 2], 0.6875), (vec![0, 1, 2], 0.1125), (vec![0, 1, 2, 3], 0.075)] {
        let got = m_fg.mass_of(&crisp(&s.frame, &members)).unwrap();
        out.check(&format!("m_F⊙G({members:?})"), got, e, EXACT);
    }
    let r = consonant_mass(&s.f).unwrap().dempster(&consonant_mass(&s.g).unwrap()).unwrap();
    out.check("conflict", r.conflict, 0.06, EXACT);
    let expected = [
        (vec![2], 0.255),
        (vec![1], 0.149),
        (vec![1, 2], 0.436),
        (vec![0, 1, 2], 0.0957),
        (vec![0, 1, 2, 3], 0.0638),
    ];
    out.require("five focal sets", r.mass.len() == expected.len());
    for (members, e) in expected {
        let got = r.mass.mass_of(&crisp(&s.frame, &members)).unwrap();
        out.check(&format!("(m_F⊕m_G)({members:?})"), got, e, 5e-4);
    }
    let pl = r.mass.contour();
    for i in 0..4 {
        out.check(&format!("ratio at θ{}", i + 1), fg.grade(i) / pl.grade(i), 1.175, 5e-3);
    }
    let elapsed = start.elapsed();
    out.within("runtime", elapsed, Duration::from_secs(1));
    out.finish("1", "normalized product, consonant masses, Dempster combination, contour ratio", elapsed);
}

#[test]
fn criterion_2_fuzzy_event_measures() {
    let start = Instant::now();
    let mut out = Outcome::new();
    let s = sets();
    let sg = measures_fuzzy_sugeno(&s.f, &s.g).unwrap();
    let cg = measures_fuzzy_choquet(&s.f, &s.g).unwrap();
    let sh = measures_fuzzy_sugeno(&s.f, &s.h).unwrap();
    let ch = measures_fuzzy_choquet(&s.f, &s.h).unwrap();
    let cgh = measures_fuzzy_choquet(&s.f, &s.g.max(&s.h).unwrap()).unwrap();
    out.check("Sugeno Π(G)", sg.possibility, 0.8, EXACT);
    out.check("Sugeno N(G)", sg.necessity, 0.5, EXACT);
    out.check("Choquet Π(G)", cg.possibility, 0.94, EXACT);
    out.check("Choquet N(G)", cg.necessity, 0.47, EXACT);
    out.check("Sugeno Δ(G)", sg.guaranteed, 0.7, EXACT);
    out.check("Choquet Δ(G)", cg.guaranteed, 0.67, EXACT);
    out.check("Sugeno Δ(H)", sh.guaranteed, 0.5, EXACT);
    out.check("Choquet Δ(H)", ch.guaranteed, 0.48, EXACT);
    out.check("Choquet Δ(G∨H)", cgh.guaranteed, 0.46, EXACT);
    out.require(
        "Choquet Δ(G∨H) differs from min(Δ(G), Δ(H))",
        (cgh.guaranteed - cg.guaranteed.min(ch.guaranteed)).abs() > EXACT,
    );
    out.finish("2", "Sugeno and Choquet measures of fuzzy events", start.elapsed());
}

#[test]
fn criterion_3_orthogonal_sum_of_fuzzy_masses() {
    let start = Instant::now();
    let mut out = Outcome::new();
    let s = sets();
    let m1 = FuzzyMassFunction::new(&s.frame, vec![(s.f.clone(), 0.6), (s.frame.full(), 0.4)]).unwrap();
    let m2 = FuzzyMassFunction::new(&s.frame, vec![(s.g.clone(), 0.7), (s.frame.full(), 0.3)]).unwrap();
    let r = m1.orthogonal_sum(&m2).unwrap();
    let fg = s.f.normalized_product(&s.g).unwrap();
    out.require("four focal sets", r.mass.len() == 4);
    for (name, set, e) in [
        ("F⊙G", &fg, 0.336),
        ("F", &s.f, 0.18),
        ("G", &s.g, 0.28),
        ("Θ", &s.frame.full(), 0.12),
    ] {
        out.check(name, r.mass.mass_of(set), e / 0.916, 5e-4);
    }
    out.finish("3", "orthogonal sum of two simple fuzzy mass functions", start.elapsed());
}

const TABLE1: [(usize, usize, [f64; 3]); 3] = [
    (100, 50, [0.9927, 0.9570, 0.8825]),
    (100, 100, [0.9922, 0.9525, 0.9025]),
    (1000, 1000, [0.9894, 0.9511, 0.8955]),
];
const ALPHAS: [f64; 3] = [0.01, 0.05, 0.1];

fn table1_check(theta0: impl Fn(usize) -> f64) -> (Outcome, Duration) {
    let start = Instant::now();
    let mut out = Outcome::new();
    for (grid, n, expected) in TABLE1 {
        let t = coverage_experiment(grid, n, theta0(grid), &ALPHAS).unwrap();
        for (i, e) in expected.into_iter().enumerate() {
            out.check(
                &format!("N={grid} n={n} θ0={} 1-α={}", t.theta0, 1.0 - ALPHAS[i]),
                t.coverage[i],
                e,
                5e-4,
            );
        }
    }
    let elapsed = start.elapsed();
    out.within("runtime", elapsed, Duration::from_secs(10));
    (out, elapsed)
}

#[test]
fn criterion_4_wilks_coverage_table() {
    let (out, elapsed) = table1_check(|_| 0.3);
    out.finish("4", "Wilks confidence-region coverage at θ0 = 0.3 by exact enumeration", elapsed);
}

/// The same nine values evaluated one grid step below 0.3.
#[test]
fn wilks_coverage_table_one_grid_step_below() {
    let (out, elapsed) = table1_check(|grid| ((grid as f64 * 0.3).round() - 1.0) / grid as f64);
    out.finish("4-info", "Wilks coverage at θ0 = 0.3 − 1/N", elapsed);
}

#[test]
fn criterion_5_predictive_dominance_coverage() {
    let start = Instant::now();
    let mut out = Outcome::new();
    let config = DominanceConfig {
        grid_size: 100,
        n: 100,
        theta0: 0.3,
        r: 4,
        k: K,
        seed: SEED,
        slack: DEFAULT_DOMINANCE_SLACK,
    };
    let t = dominance_coverage(&config, &ALPHAS).unwrap();
    for ((a, c), e) in ALPHAS.iter().zip(&t.coverage).zip([0.9907, 0.9496, 0.8913]) {
        out.check(&format!("1-α={}", 1.0 - a), *c, e, 0.01);
    }
    let elapsed = start.elapsed();
    let threads = rayon::current_num_threads();
    let limit = if threads >= 8 { 30 } else { 120 };
    out.within(&format!("runtime on {threads} thread(s)"), elapsed, Duration::from_secs(limit));
    out.finish("5", "dominance coverage of the cut predictive belief function", elapsed);
}

fn prediction_setup() -> (PredictionSetup, erfs::LikelihoodFuzzySet) {
    let model = BinomialModel::new(100, 100).unwrap();
    let setup = PredictionSetup::new(model, 28, 4).unwrap();
    let l = setup.likelihood().unwrap();
    (setup, l)
}

#[test]
fn criterion_6_fuzzy_event_prediction() {
    let start = Instant::now();
    let mut out = Outcome::new();
    let (setup, l) = prediction_setup();
    let sample = sample_predictive(&setup, &l, K, SEED).unwrap();
    let most = FuzzySet::new(setup.y_frame(), vec![0.0, 0.0, 0.5, 0.75, 1.0]).unwrap();
    let s = predictive_measures(&sample, &most, EventExtension::Sugeno).unwrap();
    let c = predictive_measures(&sample, &most, EventExtension::Choquet).unwrap();
    out.check("Sugeno Bel", s.bel, 0.143, 0.02);
    out.check("Sugeno Pl", s.pl, 0.253, 0.02);
    out.check("Choquet Bel", c.bel, 0.128, 0.02);
    out.check("Choquet Pl", c.pl, 0.236, 0.02);
    out.finish("6", "belief and plausibility of the fuzzy event \"most\"", start.elapsed());
}

fn run_property<S: Strategy>(
    out: &mut Outcome,
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) {
    let mut runner = TestRunner::new(Config {
        cases: 256,
        failure_persistence: None,
        ..Config::default()
    });
    if let Err(e) = runner.run(&strategy, test) {
        out.failures.push(format!("{name}: {e}"));
    }
}

fn normal(q: usize) -> impl Strategy<Value = Vec<f64>> {
    (prop::collection::vec(0.05..=1.0f64, q), 0..q).prop_map(|(mut v, i)| {
        v[i] = 1.0;
        v
    })
}

fn fuzzy_mass(frame: &Frame, parts: &[(Vec<f64>, f64)]) -> FuzzyMassFunction {
    let total: f64 = parts.iter().map(|p| p.1).sum();
    let focal = parts
        .iter()
        .map(|(mu, w)| (FuzzySet::new(frame, mu.clone()).unwrap(), w / total))
        .collect();
    FuzzyMassFunction::new(frame, focal).unwrap()
}

fn fuzzy_mass_parts(q: usize, n: usize) -> impl Strategy<Value = Vec<Vec<(Vec<f64>, f64)>>> {
    prop::collection::vec(prop::collection::vec((normal(q), 0.05..=1.0f64), 1..=3), n)
}

fn close(a: f64, b: f64, tol: f64) -> Result<(), TestCaseError> {
    if (a - b).abs() <= tol {
        Ok(())
    } else {
        Err(TestCaseError::fail(format!("{a} vs {b} (tolerance {tol:e})")))
    }
}

#[test]
fn criterion_7_property_suites() {
    let start = Instant::now();
    let mut out = Outcome::new();
    let sized = |n| (1usize..=6).prop_flat_map(move |q| (Just(q), prop::collection::vec(normal(q), n)));

    run_property(&mut out, "normalized product associativity", sized(3), |(q, v)| {
        let frame = Frame::indexed(q).unwrap();
        let [f, g, h] = [0, 1, 2].map(|i| FuzzySet::new(&frame, v[i].clone()).unwrap());
        let l = f.normalized_product(&g).unwrap().normalized_product(&h).unwrap();
        let r = f.normalized_product(&g.normalized_product(&h).unwrap()).unwrap();
        prop_assert!(l.approx_eq(&r, 1e-10));
        Ok(())
    });

    let masses = |n| (1usize..=6).prop_flat_map(move |q| (Just(q), fuzzy_mass_parts(q, n)));
    run_property(&mut out, "orthogonal sum associativity", masses(3), |(q, parts)| {
        let frame = Frame::indexed(q).unwrap();
        let ms: Vec<_> = parts.iter().map(|p| fuzzy_mass(&frame, p)).collect();
        let l = ms[0].orthogonal_sum(&ms[1]).unwrap().mass.orthogonal_sum(&ms[2]).unwrap().mass;
        let r = ms[0].orthogonal_sum(&ms[1].orthogonal_sum(&ms[2]).unwrap().mass).unwrap().mass;
        for mask in 0u32..(1 << q) {
            let e = FuzzySet::crisp(&frame, (0..q).filter(|i| mask >> i & 1 == 1)).unwrap();
            let (a, b) = (l.bel_pl_q_crisp(&e).unwrap(), r.bel_pl_q_crisp(&e).unwrap());
            close(a.bel, b.bel, 1e-10)?;
            close(a.pl, b.pl, 1e-10)?;
            close(a.q, b.q, 1e-10)?;
        }
        Ok(())
    });

    run_property(&mut out, "contour product law", masses(2), |(q, parts)| {
        let frame = Frame::indexed(q).unwrap();
        let ms: Vec<_> = parts.iter().map(|p| fuzzy_mass(&frame, p)).collect();
        let r = ms[0].orthogonal_sum(&ms[1]).unwrap();
        let (p0, p1, p) = (ms[0].contour(), ms[1].contour(), r.mass.contour());
        for i in 0..q {
            close(p.grade(i), p0.grade(i) * p1.grade(i) / (1.0 - r.conflict), 1e-12)?;
        }
        Ok(())
    });

    let with_probs = (1usize..=6).prop_flat_map(|q| {
        (Just(q), fuzzy_mass_parts(q, 1), prop::collection::vec(0.01..=1.0f64, q), normal(q))
    });
    run_property(&mut out, "Bayesian combination and conditioning", with_probs, |(q, parts, raw, event)| {
        let frame = Frame::indexed(q).unwrap();
        let m = fuzzy_mass(&frame, &parts[0]);
        let total: f64 = raw.iter().sum();
        let p: Vec<f64> = raw.iter().map(|v| v / total).collect();
        let prior = MassFunction::bayesian(&frame, &p).unwrap();
        let combined = m
            .orthogonal_sum(&FuzzyMassFunction::from_crisp(&prior))
            .unwrap()
            .mass
            .to_crisp()
            .unwrap();
        prop_assert!(combined.is_bayesian());
        let pl = m.contour();
        let w: Vec<f64> = (0..q).map(|i| pl.grade(i) * p[i]).collect();
        let wt: f64 = w.iter().sum();
        for (i, got) in combined.probabilities().unwrap().iter().enumerate() {
            close(*got, w[i] / wt, 1e-12)?;
        }
        let a = FuzzySet::new(&frame, event).unwrap();
        let direct = bayes_condition(&prior, &a).unwrap().probabilities().unwrap();
        let routed = FuzzyMassFunction::from_crisp(&prior)
            .orthogonal_sum(&FuzzyMassFunction::logical(&a).unwrap())
            .unwrap()
            .mass
            .to_crisp()
            .unwrap()
            .probabilities()
            .unwrap();
        for (x, y) in direct.iter().zip(&routed) {
            close(*x, *y, 1e-12)?;
        }
        Ok(())
    });

    let with_event = (1usize..=6).prop_flat_map(|q| {
        (Just(q), fuzzy_mass_parts(q, 1), prop::collection::vec(0.0..=1.0f64, q))
    });
    run_property(&mut out, "duality Bel(A) = 1 - Pl(complement)", with_event.clone(), |(q, parts, event)| {
        let frame = Frame::indexed(q).unwrap();
        let m = fuzzy_mass(&frame, &parts[0]);
        for mask in 0u32..(1 << q) {
            let e = FuzzySet::crisp(&frame, (0..q).filter(|i| mask >> i & 1 == 1)).unwrap();
            close(m.bel_pl_q_crisp(&e).unwrap().bel, 1.0 - m.bel_pl_q_crisp(&e.complement()).unwrap().pl, 1e-12)?;
        }
        let a = FuzzySet::new(&frame, event).unwrap();
        for kind in [EventExtension::Sugeno, EventExtension::Choquet] {
            let bel = m.bel_pl_q_fuzzy(&a, kind).unwrap().bel;
            close(bel, 1.0 - m.bel_pl_q_fuzzy(&a.complement(), kind).unwrap().pl, 1e-12)?;
        }
        Ok(())
    });

    run_property(&mut out, "alpha-cut integral oracle", with_event, |(q, parts, event)| {
        let frame = Frame::indexed(q).unwrap();
        let m = fuzzy_mass(&frame, &parts[0]);
        let a = FuzzySet::new(&frame, event).unwrap();
        let mut levels: Vec<f64> = a.grades().iter().copied().filter(|&v| v > 0.0).collect();
        levels.sort_by(f64::total_cmp);
        levels.dedup();
        for (f, _) in m.focal_sets() {
            let c = measures_fuzzy_choquet(f, &a).unwrap();
            let (mut pi, mut n, mut delta, mut prev) = (0.0, 0.0, 0.0, 0.0);
            for &lv in &levels {
                let cut = a.alpha_cut(lv).unwrap();
                let inside: Vec<f64> = (0..q).filter(|&i| cut.grade(i) == 1.0).map(|i| f.grade(i)).collect();
                let outside = (0..q).filter(|&i| cut.grade(i) == 0.0).map(|i| f.grade(i)).fold(0.0, f64::max);
                pi += (lv - prev) * inside.iter().copied().fold(0.0, f64::max);
                n += (lv - prev) * (1.0 - outside);
                delta += (lv - prev) * inside.iter().copied().fold(1.0, f64::min);
                prev = lv;
            }
            delta += 1.0 - prev;
            close(c.possibility, pi, 1e-12)?;
            close(c.necessity, n, 1e-12)?;
            close(c.guaranteed, delta, 1e-12)?;
        }
        Ok(())
    });

    let crisp_parts = (1usize..=6).prop_flat_map(|q| {
        (Just(q), prop::collection::vec(prop::collection::vec((1u32..(1 << q), 0.05..=1.0f64), 1..=4), 2))
    });
    run_property(&mut out, "reduction to crisp Dempster-Shafer", crisp_parts, |(q, parts)| {
        let frame = Frame::indexed(q).unwrap();
        let ms: Vec<MassFunction> = parts
            .iter()
            .map(|p| {
                let total: f64 = p.iter().map(|x| x.1).sum();
                let focal = p
                    .iter()
                    .map(|(mask, w)| ((0..q).filter(|i| mask >> i & 1 == 1).collect(), w / total))
                    .collect();
                MassFunction::from_index_sets(&frame, focal).unwrap()
            })
            .collect();
        let (f0, f1) = (FuzzyMassFunction::from_crisp(&ms[0]), FuzzyMassFunction::from_crisp(&ms[1]));
        match (ms[0].dempster(&ms[1]), f0.combine_soft(&f1, TNorm::Product)) {
            (Ok(d), Ok(s)) => {
                close(d.conflict, s.conflict, 1e-12)?;
                let s = s.mass.to_crisp().unwrap();
                let (a, b) = (d.mass.focal_indices(), s.focal_indices());
                prop_assert_eq!(a.len(), b.len());
                for ((sa, ma), (sb, mb)) in a.iter().zip(&b) {
                    prop_assert_eq!(sa, sb);
                    close(*ma, *mb, 1e-12)?;
                }
            }
            (Err(Error::TotalConflict), Err(Error::TotalConflict)) => {}
            (a, b) => prop_assert!(false, "{:?} / {:?}", a.err(), b.err()),
        }
        Ok(())
    });

    let binomial = (2usize..=12, 1usize..=8, 1usize..=8, 0usize..=8, 0usize..=8);
    run_property(&mut out, "likelihood masses of independent outcomes", binomial, |(grid, n1, n2, x, y)| {
        let (x, y) = (x % (n1 + 1), y % (n2 + 1));
        let (a, b) = (BinomialModel::new(grid, n1).unwrap(), BinomialModel::new(grid, n2).unwrap());
        let joint = JointModel::new(a.clone(), b.clone()).unwrap();
        let direct = likelihood_mass(&joint, joint.outcome(x, y).unwrap()).unwrap();
        let combined = likelihood_mass(&a, x).unwrap().orthogonal_sum(&likelihood_mass(&b, y).unwrap()).unwrap().mass;
        prop_assert_eq!(direct.len(), 1);
        prop_assert_eq!(combined.len(), 1);
        prop_assert!(direct.focal_sets()[0].0.approx_eq(&combined.focal_sets()[0].0, 1e-12));
        Ok(())
    });

    out.finish("7", "randomized property suites (256 cases each, frames up to 6 elements)", start.elapsed());
}

#[test]
fn criterion_8_cdf_bracketing() {
    let start = Instant::now();
    let mut out = Outcome::new();
    let (setup, l) = prediction_setup();
    let sample = sample_predictive(&setup, &l, K, SEED).unwrap();
    let summary = contour_and_cdfs(&sample).unwrap();
    let tol = 3.0 / (K as f64).sqrt();
    for y in 0..=setup.r() {
        let (lo, mid, hi) = (summary.lower_cdf[y], summary.plugin_cdf[y], summary.upper_cdf[y]);
        out.require(&format!("y={y}: {lo:.4} <= {mid:.4} <= {hi:.4} within {tol:.4}"), lo <= mid + tol && mid <= hi + tol);
    }
    out.finish("8", "lower and upper predictive CDFs bracket the plug-in CDF", start.elapsed());
}
