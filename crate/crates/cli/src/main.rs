use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use erfs::codec::{self, Table};
use erfs::possibility::{measures_crisp, measures_fuzzy};
use erfs::predict::DEFAULT_DOMINANCE_SLACK;
use erfs::{
    contour_and_cdfs, coverage_experiment, dominance_coverage, dominance_scatter, list_worked_examples,
    predictive_measures, relative_likelihood, run_worked_examples, sample_predictive, wilks_cut_level,
    BinomialModel, DiscreteModel, DominanceConfig, EventExtension, Frame, FuzzyMassFunction, FuzzySet,
    MassFunction, PredictionSetup, TConorm, TNorm,
};
use serde_json::{json, Value};

const DEFAULT_SEED: u64 = 20_240_917;

/// Belief functions induced by random fuzzy sets.
#[derive(Debug, Parser)]
#[command(name = "erfs", version)]
struct Cli {
    /// Seed for every random draw. All Monte-Carlo output is a function of this value.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Output format. Defaults to the extension of --output, else json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write output to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Rule {
    /// Dempster's rule; both inputs must have crisp focal sets.
    Dempster,
    /// Product intersection with height-weighted normalization.
    SoftProduct,
    /// Minimum intersection with height-weighted normalization.
    SoftMin,
    /// Pointwise maximum of focal sets, no normalization.
    DisjunctiveMax,
    /// Probabilistic sum of focal sets, no normalization.
    DisjunctiveProbsum,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Sugeno,
    Choquet,
}

impl From<Kind> for EventExtension {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Sugeno => EventExtension::Sugeno,
            Kind::Choquet => EventExtension::Choquet,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the identifier that documents on a frame must carry.
    FrameId {
        /// Frame document: {"labels": [...]}.
        #[arg(long)]
        frame: PathBuf,
    },
    /// Combine two mass functions.
    Combine {
        #[arg(long)]
        frame: PathBuf,
        /// Mass document, crisp ({"set": [...]}) or fuzzy ({"mu": [...]}) focal sets.
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long, value_enum, default_value_t = Rule::SoftProduct)]
        rule: Rule,
    },
    /// Measures of an event under a possibility distribution or a mass function.
    Measures {
        #[arg(long)]
        frame: PathBuf,
        /// Fuzzy-set document for the event.
        #[arg(long)]
        event: Option<PathBuf>,
        /// Possibility distribution (fuzzy-set document). Gives Π, N, Δ and ∇.
        #[arg(long, conflicts_with = "mass")]
        restriction: Option<PathBuf>,
        /// Mass document. Gives Bel, Pl and Q.
        #[arg(long)]
        mass: Option<PathBuf>,
        /// Extension used when the event is fuzzy.
        #[arg(long, value_enum, default_value_t = Kind::Choquet)]
        kind: Kind,
        /// List Bel, Pl and Q of every crisp event (crisp mass only, at most 16 elements).
        #[arg(long, requires = "mass")]
        event_table: bool,
    },
    /// Relative likelihood of a binomial proportion on the grid {0, 1/N, ..., 1}.
    Likelihood {
        #[arg(long = "N")]
        grid: usize,
        #[arg(long = "n")]
        n: usize,
        /// Observed count.
        #[arg(long)]
        x: usize,
        /// Significance levels whose Wilks cuts are reported.
        #[arg(long, value_delimiter = ',', default_value = "0.01,0.05,0.1")]
        alphas: Vec<f64>,
    },
    /// Exact coverage of the Wilks likelihood regions.
    Coverage {
        /// Grid sizes, one per column.
        #[arg(long = "N", value_delimiter = ',', default_value = "100,100,1000")]
        grid: Vec<usize>,
        /// Sample sizes, paired with --N.
        #[arg(long = "n", value_delimiter = ',', default_value = "50,100,1000")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 0.3)]
        theta0: f64,
        #[arg(long, value_delimiter = ',', default_value = "0.01,0.05,0.1")]
        alphas: Vec<f64>,
    },
    /// Monte-Carlo predictive belief function for the count in r future draws.
    Predict {
        #[arg(long = "N", default_value_t = 100)]
        grid: usize,
        #[arg(long = "n", default_value_t = 100)]
        n: usize,
        #[arg(long)]
        x: usize,
        #[arg(long, default_value_t = 4)]
        r: usize,
        /// Number of Monte-Carlo draws.
        #[arg(long = "K", default_value_t = 15_000)]
        k: usize,
        /// Membership grades of an event on {0, ..., r}. Without it, contour and CDFs are printed.
        #[arg(long, value_delimiter = ',')]
        event: Option<Vec<f64>>,
        #[arg(long, value_enum, default_value_t = Kind::Sugeno)]
        kind: Kind,
    },
    /// Probability that the cut predictive belief function is dominated by the true distribution.
    Dominance {
        #[arg(long = "N", default_value_t = 100)]
        grid: usize,
        #[arg(long = "n", default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 0.3)]
        theta0: f64,
        #[arg(long, default_value_t = 4)]
        r: usize,
        #[arg(long = "K", default_value_t = 15_000)]
        k: usize,
        #[arg(long, value_delimiter = ',', default_value = "0.01,0.05,0.1")]
        alphas: Vec<f64>,
        /// Standard errors a belief estimate may exceed the true probability by. 0 is the strict check.
        #[arg(long, default_value_t = DEFAULT_DOMINANCE_SLACK)]
        slack: f64,
        /// Instead of coverage, list belief and probability of every event at these x values.
        #[arg(long, value_delimiter = ',')]
        scatter: Option<Vec<usize>>,
        /// Significance level for --scatter.
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
    /// Recompute the worked examples and compare with the pinned constants. Exits 1 on any mismatch.
    #[command(alias = "paper-examples")]
    WorkedExamples {
        /// Only list the checks.
        #[arg(long)]
        list: bool,
    },
}

enum Output {
    Json(Value),
    Both(Value, Table),
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_frame(path: &Path) -> Result<Frame> {
    codec::decode_frame(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn load_set(path: &Path, frame: &Frame) -> Result<FuzzySet> {
    codec::decode_fuzzy_set(&read(path)?, frame).with_context(|| format!("in {}", path.display()))
}

enum AnyMass {
    Crisp(MassFunction),
    Fuzzy(FuzzyMassFunction),
}

impl AnyMass {
    fn fuzzy(&self) -> FuzzyMassFunction {
        match self {
            AnyMass::Crisp(m) => FuzzyMassFunction::from_crisp(m),
            AnyMass::Fuzzy(m) => m.clone(),
        }
    }
}

fn load_mass(path: &Path, frame: &Frame) -> Result<AnyMass> {
    let text = read(path)?;
    let value: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let crisp = value["focal"]
        .as_array()
        .is_some_and(|f| f.iter().all(|e| e.get("set").is_some()));
    let loaded = if crisp {
        codec::decode_mass(&text, frame).map(AnyMass::Crisp)
    } else {
        codec::decode_fuzzy_mass(&text, frame).map(AnyMass::Fuzzy)
    };
    loaded.with_context(|| format!("in {}", path.display()))
}

fn parse_json(text: String) -> Value {
    serde_json::from_str(&text).expect("codec output is valid JSON")
}

fn fuzzy_mass_table(m: &FuzzyMassFunction) -> Table {
    let mut header = m.frame().labels().to_vec();
    header.push("mass".into());
    let mut t = Table::new(header);
    for (set, w) in m.focal_sets() {
        let mut row: Vec<String> = set.grades().iter().map(|&g| codec::format_number(g)).collect();
        row.push(codec::format_number(*w));
        t.rows.push(row);
    }
    t
}

fn combine(frame: &Path, left: &Path, right: &Path, rule: Rule) -> Result<Output> {
    let frame = load_frame(frame)?;
    let (a, b) = (load_mass(left, &frame)?, load_mass(right, &frame)?);
    let (mass, conflict) = match rule {
        Rule::Dempster => {
            let (AnyMass::Crisp(a), AnyMass::Crisp(b)) = (&a, &b) else {
                bail!("dempster needs crisp focal sets in both inputs; use soft-product for fuzzy ones");
            };
            let r = a.dempster(b)?;
            (FuzzyMassFunction::from_crisp(&r.mass), Some(r.conflict))
        }
        Rule::SoftProduct | Rule::SoftMin => {
            let t = if matches!(rule, Rule::SoftMin) { TNorm::Min } else { TNorm::Product };
            let r = a.fuzzy().combine_soft(&b.fuzzy(), t)?;
            (r.mass, Some(r.conflict))
        }
        Rule::DisjunctiveMax | Rule::DisjunctiveProbsum => {
            let s = if matches!(rule, Rule::DisjunctiveMax) { TConorm::Max } else { TConorm::ProbabilisticSum };
            (a.fuzzy().disjunctive(&b.fuzzy(), s)?, None)
        }
    };
    let doc = match mass.to_crisp() {
        Some(c) => codec::encode_mass(&c),
        None => codec::encode_fuzzy_mass(&mass),
    };
    let json = json!({ "conflict": conflict, "mass": parse_json(doc) });
    Ok(Output::Both(json, fuzzy_mass_table(&mass)))
}

fn triple_table(bel: f64, pl: f64, q: f64) -> Table {
    Table {
        header: vec!["bel".into(), "pl".into(), "q".into()],
        rows: vec![vec![codec::format_number(bel), codec::format_number(pl), codec::format_number(q)]],
    }
}

fn measures(
    frame: &Path,
    event: Option<&Path>,
    restriction: Option<&Path>,
    mass: Option<&Path>,
    kind: Kind,
    event_table: bool,
) -> Result<Output> {
    let frame = load_frame(frame)?;
    if event_table {
        let AnyMass::Crisp(m) = load_mass(mass.expect("clap enforces --mass"), &frame)? else {
            bail!("--event-table needs a mass document with crisp focal sets");
        };
        let rows = m.event_table()?;
        return Ok(Output::Both(json!(rows), codec::event_table(&rows, &frame)));
    }
    let event = load_set(event.context("--event is required")?, &frame)?;
    match (restriction, mass) {
        (Some(r), None) => {
            let f = load_set(r, &frame)?;
            let b = if event.is_crisp() {
                measures_crisp(&f, &event)?
            } else {
                measures_fuzzy(&f, &event, kind.into())?
            };
            let table = Table {
                header: ["possibility", "necessity", "guaranteed", "potential"].map(String::from).to_vec(),
                rows: vec![[b.possibility, b.necessity, b.guaranteed, b.potential]
                    .map(codec::format_number)
                    .to_vec()],
            };
            Ok(Output::Both(parse_json(codec::encode_measure_bundle(&b)), table))
        }
        (None, Some(m)) => {
            let m = load_mass(m, &frame)?.fuzzy();
            let t = if event.is_crisp() {
                m.bel_pl_q_crisp(&event)?
            } else {
                m.bel_pl_q_fuzzy(&event, kind.into())?
            };
            Ok(Output::Both(json!(t), triple_table(t.bel, t.pl, t.q)))
        }
        _ => bail!("give exactly one of --restriction or --mass"),
    }
}

fn likelihood(grid: usize, n: usize, x: usize, alphas: &[f64]) -> Result<Output> {
    let model = BinomialModel::new(grid, n)?;
    let l = relative_likelihood(&model, x)?;
    let cuts = alphas.iter().map(|&a| wilks_cut_level(a)).collect::<erfs::Result<Vec<_>>>()?;
    let mut header = vec!["theta".to_string(), "likelihood".to_string()];
    header.extend(alphas.iter().map(|a| format!("in_region_{}", codec::format_number(1.0 - a))));
    let mut table = Table::new(header);
    for (i, &theta) in model.thetas().iter().enumerate() {
        let g = l.set.grade(i);
        let mut row = vec![codec::format_number(theta), codec::format_number(g)];
        row.extend(cuts.iter().map(|&c| u8::from(g >= c).to_string()));
        table.rows.push(row);
    }
    let regions: Vec<Value> = alphas
        .iter()
        .zip(&cuts)
        .map(|(&a, &c)| {
            let members: Vec<&str> = (0..model.param_frame().len())
                .filter(|&i| l.set.grade(i) >= c)
                .filter_map(|i| model.param_frame().label(i))
                .collect();
            json!({ "alpha": a, "cut_level": c, "region": members })
        })
        .collect();
    let json = json!({
        "mle": model.thetas()[l.mle_index],
        "likelihood": l.set.canonical_grades(),
        "regions": regions,
    });
    Ok(Output::Both(json, table))
}

fn coverage(grid: &[usize], n: &[usize], theta0: f64, alphas: &[f64]) -> Result<Output> {
    if grid.len() != n.len() {
        bail!("--N has {} values but --n has {}", grid.len(), n.len());
    }
    let tables = grid
        .iter()
        .zip(n)
        .map(|(&g, &n)| coverage_experiment(g, n, theta0, alphas))
        .collect::<erfs::Result<Vec<_>>>()?;
    Ok(Output::Both(json!(tables), codec::coverage_table(&tables)?))
}

#[allow(clippy::too_many_arguments)]
fn predict(grid: usize, n: usize, x: usize, r: usize, k: usize, event: Option<&[f64]>, kind: Kind, seed: u64) -> Result<Output> {
    let setup = PredictionSetup::new(BinomialModel::new(grid, n)?, x, r)?;
    let l = setup.likelihood()?;
    let sample = sample_predictive(&setup, &l, k, seed)?;
    match event {
        Some(grades) => {
            let a = FuzzySet::new(setup.y_frame(), grades.to_vec())?;
            let e = predictive_measures(&sample, &a, kind.into())?;
            let table = Table {
                header: ["bel", "pl", "bel_se", "pl_se"].map(String::from).to_vec(),
                rows: vec![[e.bel, e.pl, e.bel_se, e.pl_se].map(codec::format_number).to_vec()],
            };
            Ok(Output::Both(json!(e), table))
        }
        None => {
            let s = contour_and_cdfs(&sample)?;
            Ok(Output::Both(json!(s), codec::predictive_table(&s)))
        }
    }
}

fn worked_examples(list: bool) -> Result<(Output, bool)> {
    if list {
        let mut t = Table::new(vec!["example".into(), "check".into()]);
        let checks = list_worked_examples();
        for (ex, name) in &checks {
            t.rows.push(vec![ex.to_string(), name.to_string()]);
        }
        let json = json!(checks.iter().map(|(e, n)| json!({ "example": e, "check": n })).collect::<Vec<_>>());
        return Ok((Output::Both(json, t), true));
    }
    let report = run_worked_examples()?;
    let ok = report.all_passed();
    Ok((Output::Both(json!(report), report.to_table()), ok))
}

fn render(out: Output, format: Format) -> String {
    match (out, format) {
        (Output::Json(v) | Output::Both(v, _), Format::Json) => {
            let mut s = serde_json::to_string_pretty(&v).expect("JSON values serialize");
            s.push('\n');
            s
        }
        (Output::Both(_, t), Format::Csv) => t.to_csv(),
        (Output::Json(v), Format::Csv) => match v {
            Value::String(s) => s + "\n",
            v => v.to_string() + "\n",
        },
    }
}

fn format_for(cli: &Cli) -> Format {
    cli.format.unwrap_or_else(|| match cli.output.as_ref().and_then(|p| p.extension()) {
        Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
        _ => Format::Json,
    })
}

fn run(cli: &Cli) -> Result<bool> {
    let (out, ok) = match &cli.command {
        Command::FrameId { frame } => (Output::Json(json!(load_frame(frame)?.id().to_string())), true),
        Command::Combine { frame, left, right, rule } => (combine(frame, left, right, *rule)?, true),
        Command::Measures { frame, event, restriction, mass, kind, event_table } => (
            measures(frame, event.as_deref(), restriction.as_deref(), mass.as_deref(), *kind, *event_table)?,
            true,
        ),
        Command::Likelihood { grid, n, x, alphas } => (likelihood(*grid, *n, *x, alphas)?, true),
        Command::Coverage { grid, n, theta0, alphas } => (coverage(grid, n, *theta0, alphas)?, true),
        Command::Predict { grid, n, x, r, k, event, kind } => {
            (predict(*grid, *n, *x, *r, *k, event.as_deref(), *kind, cli.seed)?, true)
        }
        Command::Dominance { grid, n, theta0, r, k, alphas, slack, scatter, alpha } => {
            let config = DominanceConfig {
                grid_size: *grid,
                n: *n,
                theta0: *theta0,
                r: *r,
                k: *k,
                seed: cli.seed,
                slack: *slack,
            };
            let out = match scatter {
                Some(xs) => {
                    let points = dominance_scatter(&config, xs, *alpha)?;
                    Output::Both(json!(points), codec::scatter_table(&points))
                }
                None => {
                    let t = dominance_coverage(&config, alphas)?;
                    Output::Both(json!(t), codec::dominance_table(&t))
                }
            };
            (out, true)
        }
        Command::WorkedExamples { list } => worked_examples(*list)?,
    };
    let text = render(out, format_for(cli));
    match &cli.output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
