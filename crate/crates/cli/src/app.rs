use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use condset::corpus::Generator;
use condset::exec::Mode;
use condset::randset::{cond_core, cond_expectation, cond_hull, maxingale_check};
use condset::rational::{format_rat, parse_rat};
use condset::risk::{avar_sub, avar_super, lifted_core_hull, solvency_cone};
use condset::suite::{check_cone, check_set, companion, run_suite, SuiteConfig, SuiteReport};
use condset::{BidAsk, Partition, Polyhedron, RandomPolyhedron, Rat};
use serde_json::Value;

use crate::error::{CliError, CliResult};
use crate::json;
use crate::scenario::Scenario;

/// Scenarios shipped with the binary and checked by `check` when no
/// scenario file is given.
pub const BUNDLED: [(&str, &str); 4] = [
    ("intervals", include_str!("../scenarios/intervals.json")),
    ("squares", include_str!("../scenarios/squares.json")),
    ("bid_ask", include_str!("../scenarios/bid_ask.json")),
    ("cones", include_str!("../scenarios/cones.json")),
];

#[derive(Debug, Parser)]
#[command(
    name = "condset",
    version,
    about = "Exact conditional operators on polyhedral random sets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct Conditional {
    /// Scenario file (`-` for standard input).
    pub scenario: PathBuf,
    #[arg(long)]
    pub set: String,
    #[arg(long, default_value = "trivial")]
    pub partition: String,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct Risk {
    #[command(flatten)]
    pub base: Conditional,
    /// Level in (0, 1], as `p/q`.
    #[arg(long)]
    pub alpha: String,
}

#[derive(Debug, Args)]
pub struct Pointwise {
    pub scenario: PathBuf,
    #[arg(long)]
    pub set: String,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct Solvency {
    pub scenario: PathBuf,
    /// Scalar holding bid prices.
    #[arg(long)]
    pub bid: String,
    /// Scalar holding ask prices.
    #[arg(long)]
    pub ask: String,
    #[arg(long, default_value = "trivial")]
    pub partition: String,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct Check {
    /// Scenario to check; without one, the bundled scenarios and a random
    /// corpus are checked.
    pub scenario: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random bounded instances in the corpus.
    #[arg(long, default_value_t = SuiteConfig::default().instances)]
    pub instances: usize,
    /// Run the corpus on one thread.
    #[arg(long)]
    pub sequential: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct Maxingale {
    pub scenario: PathBuf,
    /// Sets of the sequence in time order, one per filtration step.
    #[arg(long = "set", required = true)]
    pub sets: Vec<String>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Conditional core: atom-wise intersection.
    Core(Conditional),
    /// Conditional convex hull: atom-wise hull of the union.
    Hull(Conditional),
    /// Conditional expectation: atom-wise weighted Minkowski combination.
    Expect(Conditional),
    /// Sublinear conditional AV@R.
    AvarSub(Risk),
    /// Superlinear conditional AV@R.
    AvarSuper(Risk),
    Polar(Pointwise),
    DualCone(Pointwise),
    /// Cone over each value at height one.
    Lift(Pointwise),
    /// Epigraph cone of each value's support function.
    Epigraph(Pointwise),
    /// Solvency cones and conditional price cones of a bid-ask spread.
    Solvency(Solvency),
    /// Run the identity suite.
    Check(Check),
    /// Test whether a sequence of sets is a maxingale for the filtration.
    Maxingale(Maxingale),
}

/// A finished report.
pub struct Report {
    pub json: Value,
    pub text: String,
    /// Set when `check` found a violated identity.
    pub violation: bool,
}

fn load(path: &Path) -> CliResult<Scenario> {
    let text = if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    }
    .map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Scenario::parse(&text)
}

fn vec_text(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(format_rat).collect();
    format!("({})", parts.join(", "))
}

fn polyhedron_text(p: &Polyhedron, out: &mut String) {
    if p.is_empty() {
        out.push_str("  empty\n");
        return;
    }
    for v in p.vertices() {
        let _ = writeln!(out, "  vertex    {}", vec_text(v));
    }
    for r in p.extreme_rays() {
        let _ = writeln!(out, "  ray       {}", vec_text(r));
    }
    for l in p.lines() {
        let _ = writeln!(out, "  line      {}", vec_text(l));
    }
    for e in p.equalities() {
        let _ = writeln!(
            out,
            "  equation  {} . x = {}",
            vec_text(&e.normal),
            format_rat(&e.offset)
        );
    }
    for h in p.inequalities() {
        let _ = writeln!(
            out,
            "  facet     {} . x <= {}",
            vec_text(&h.normal),
            format_rat(&h.offset)
        );
    }
}

fn points_json(points: &[usize]) -> Value {
    Value::Array(points.iter().map(|&i| Value::from(i)).collect())
}

/// One entry per group of points sharing a value.
fn grouped(x: &RandomPolyhedron, groups: &[Vec<usize>], text: &mut String) -> Value {
    Value::Array(
        groups
            .iter()
            .map(|g| {
                let p = &x.sets()[g[0]];
                let names: Vec<String> = g.iter().map(usize::to_string).collect();
                let _ = writeln!(text, "points {}", names.join(" "));
                polyhedron_text(p, text);
                json::obj([("points", points_json(g)), ("set", json::polyhedron(p))])
            })
            .collect(),
    )
}

fn conditional_report(
    command: &str,
    args: &Conditional,
    alpha: Option<&Rat>,
    op: impl Fn(&RandomPolyhedron, &Partition) -> condset::Result<RandomPolyhedron>,
) -> CliResult<Report> {
    let s = load(&args.scenario)?;
    let x = s.set(&args.set)?;
    let h = s.partition(&args.partition)?;
    let result = op(x, &h)?;
    let mut text = format!("{command} of {} given {}", args.set, args.partition);
    if let Some(a) = alpha {
        let _ = write!(text, " at alpha {}", format_rat(a));
    }
    text.push('\n');
    let values = grouped(&result, h.atoms(), &mut text);
    let mut fields = vec![
        ("command", Value::from(command)),
        ("set", Value::from(args.set.clone())),
        ("partition", Value::from(args.partition.clone())),
        ("values", values),
    ];
    if let Some(a) = alpha {
        fields.push(("alpha", json::rat(a)));
    }
    Ok(Report {
        json: json::obj(fields),
        text,
        violation: false,
    })
}

fn pointwise_report(
    command: &str,
    args: &Pointwise,
    op: impl Fn(&Polyhedron) -> condset::Result<Polyhedron> + Sync + Send,
) -> CliResult<Report> {
    let s = load(&args.scenario)?;
    let x = s.set(&args.set)?;
    let result = x.map(op)?;
    let mut text = format!("{command} of {}\n", args.set);
    let singles: Vec<Vec<usize>> = (0..x.len()).map(|i| vec![i]).collect();
    let values = grouped(&result, &singles, &mut text);
    Ok(Report {
        json: json::obj([
            ("command", Value::from(command)),
            ("set", Value::from(args.set.clone())),
            ("values", values),
        ]),
        text,
        violation: false,
    })
}

fn solvency_report(args: &Solvency) -> CliResult<Report> {
    let s = load(&args.scenario)?;
    let ba = BidAsk::new(s.space.clone(), s.scalar(&args.bid)?, s.scalar(&args.ask)?)?;
    let h = s.partition(&args.partition)?;
    let cones = solvency_cone(&ba)?;
    let bounds = lifted_core_hull(&ba, &h)?;
    let crossed: Vec<usize> = h
        .atoms()
        .iter()
        .enumerate()
        .filter(|(_, a)| {
            let (b, a) = &bounds.core_prices[a[0]];
            b > a
        })
        .map(|(k, _)| k)
        .collect();

    let mut text = format!("solvency cones of bid {} / ask {}\n", args.bid, args.ask);
    let singles: Vec<Vec<usize>> = (0..s.space.len()).map(|i| vec![i]).collect();
    let solvency = grouped(&cones, &singles, &mut text);
    let _ = writeln!(text, "core of the lifted spread given {}", args.partition);
    let core = grouped(&bounds.core, h.atoms(), &mut text);
    let _ = writeln!(text, "hull of the lifted spread given {}", args.partition);
    let hull = grouped(&bounds.hull, h.atoms(), &mut text);
    let prices = |v: &[(Rat, Rat)]| {
        Value::Array(
            h.atoms()
                .iter()
                .map(|a| {
                    let (lo, hi) = &v[a[0]];
                    json::obj([
                        ("points", points_json(a)),
                        ("interval", json::vector(&[lo.clone(), hi.clone()])),
                    ])
                })
                .collect(),
        )
    };
    for k in &crossed {
        let _ = writeln!(text, "crossed spread on atom {k}: core is {{0}}");
    }
    Ok(Report {
        json: json::obj([
            ("command", Value::from("solvency")),
            ("partition", Value::from(args.partition.clone())),
            ("solvency", solvency),
            ("core", core),
            ("hull", hull),
            ("core_prices", prices(&bounds.core_prices)),
            ("hull_prices", prices(&bounds.hull_prices)),
            (
                "crossed_atoms",
                Value::Array(crossed.into_iter().map(Value::from).collect()),
            ),
        ]),
        text,
        violation: false,
    })
}

/// Identity suite over every set and partition of a scenario.
pub fn check_scenario(s: &Scenario, seed: u64, label: &str) -> CliResult<SuiteReport> {
    let mut g = Generator::new(seed);
    let mut report = SuiteReport::default();
    let mut names: Vec<&String> = s.partitions.keys().collect();
    let trivial = "trivial".to_string();
    if !s.partitions.contains_key("trivial") {
        names.push(&trivial);
    }
    let filtration = s.filtration()?;
    for (set_name, x) in &s.sets {
        for p_name in &names {
            let h = s.partition(p_name)?;
            let coarse = Partition::trivial(x.len());
            let y = companion(x, &mut g);
            let context = format!("{label}: set {set_name}, partition {p_name}");
            report.merge(check_set(x, &y, &h, &coarse, &mut g, 10), &context);
            if x.sets().iter().all(Polyhedron::is_cone) {
                report.merge(check_cone(x, &h), &context);
            }
        }
        if !filtration.is_empty() {
            let sequence = filtration
                .iter()
                .map(|f| cond_hull(x, f))
                .collect::<condset::Result<Vec<_>>>()?;
            let ok = maxingale_check(&filtration, &sequence)?;
            report.record(
                "maxingale-filtration",
                if ok {
                    condset::suite::Outcome::Pass
                } else {
                    condset::suite::Outcome::Fail("hull sequence is not a maxingale".into())
                },
                &format!("{label}: set {set_name}"),
            );
        }
    }
    Ok(report)
}

fn suite_json(r: &SuiteReport) -> Value {
    json::obj(r.tallies.iter().map(|(name, t)| {
        let mut fields = vec![
            ("passed", Value::from(t.passed)),
            ("failed", Value::from(t.failed)),
            ("skipped", Value::from(t.skipped)),
        ];
        if let Some(f) = &t.first_failure {
            fields.push(("first_failure", Value::from(f.clone())));
        }
        (name.to_string(), json::obj(fields))
    }))
}

fn suite_text(title: &str, r: &SuiteReport, out: &mut String) {
    let _ = writeln!(out, "{title}");
    let _ = writeln!(
        out,
        "  {:<22} {:>7} {:>7} {:>7}",
        "identity", "passed", "failed", "skipped"
    );
    for (name, t) in &r.tallies {
        let _ = writeln!(
            out,
            "  {name:<22} {:>7} {:>7} {:>7}",
            t.passed, t.failed, t.skipped
        );
        if let Some(f) = &t.first_failure {
            let _ = writeln!(out, "    first failure: {f}");
        }
    }
}

fn check_report(args: &Check) -> CliResult<Report> {
    let mut sections: Vec<(String, SuiteReport)> = Vec::new();
    match &args.scenario {
        Some(path) => {
            let s = load(path)?;
            sections.push((
                path.display().to_string(),
                check_scenario(&s, args.seed, "scenario")?,
            ));
        }
        None => {
            for (name, text) in BUNDLED {
                let s = Scenario::parse(text)?;
                sections.push((format!("bundled:{name}"), check_scenario(&s, args.seed, name)?));
            }
            let mode = if args.sequential {
                Mode::Sequential
            } else {
                Mode::Parallel
            };
            let config = SuiteConfig {
                instances: args.instances,
                ..SuiteConfig::default()
            };
            sections.push((
                format!("corpus:seed={}", args.seed),
                run_suite(args.seed, mode, &config),
            ));
        }
    }
    let passed = sections.iter().all(|(_, r)| r.passed());
    let mut text = String::new();
    for (title, r) in &sections {
        suite_text(title, r, &mut text);
    }
    let _ = writeln!(
        text,
        "{}",
        if passed {
            "all identities hold"
        } else {
            "VIOLATION"
        }
    );
    Ok(Report {
        json: json::obj([
            ("command", Value::from("check")),
            ("seed", Value::from(args.seed)),
            ("passed", Value::Bool(passed)),
            (
                "sections",
                json::obj(sections.iter().map(|(t, r)| (t.clone(), suite_json(r)))),
            ),
        ]),
        text,
        violation: !passed,
    })
}

fn maxingale_report(args: &Maxingale) -> CliResult<Report> {
    let s = load(&args.scenario)?;
    let filtration = s.filtration()?;
    let sequence = args
        .sets
        .iter()
        .map(|n| s.set(n).cloned())
        .collect::<CliResult<Vec<_>>>()?;
    let ok = maxingale_check(&filtration, &sequence)?;
    Ok(Report {
        json: json::obj([
            ("command", Value::from("maxingale")),
            (
                "sets",
                Value::Array(args.sets.iter().map(|n| Value::from(n.clone())).collect()),
            ),
            (
                "filtration",
                Value::Array(s.filtration.iter().map(|n| Value::from(n.clone())).collect()),
            ),
            ("maxingale", Value::Bool(ok)),
        ]),
        text: format!("maxingale: {ok}\n"),
        violation: false,
    })
}

fn alpha_of(args: &Risk) -> CliResult<Rat> {
    parse_rat(&args.alpha).map_err(|e| CliError::parse("--alpha", e.to_string()))
}

impl Command {
    pub fn output(&self) -> &Output {
        match self {
            Command::Core(a) | Command::Hull(a) | Command::Expect(a) => &a.output,
            Command::AvarSub(a) | Command::AvarSuper(a) => &a.base.output,
            Command::Polar(a) | Command::DualCone(a) | Command::Lift(a) | Command::Epigraph(a) => &a.output,
            Command::Solvency(a) => &a.output,
            Command::Check(a) => &a.output,
            Command::Maxingale(a) => &a.output,
        }
    }

    pub fn run(&self) -> CliResult<Report> {
        match self {
            Command::Core(a) => conditional_report("core", a, None, cond_core),
            Command::Hull(a) => conditional_report("hull", a, None, cond_hull),
            Command::Expect(a) => conditional_report("expect", a, None, cond_expectation),
            Command::AvarSub(a) => {
                let alpha = alpha_of(a)?;
                conditional_report("avar-sub", &a.base, Some(&alpha), |x, h| avar_sub(x, h, &alpha))
            }
            Command::AvarSuper(a) => {
                let alpha = alpha_of(a)?;
                conditional_report("avar-super", &a.base, Some(&alpha), |x, h| {
                    avar_super(x, h, &alpha)
                })
            }
            Command::Polar(a) => pointwise_report("polar", a, |p| Ok(p.polar())),
            Command::DualCone(a) => pointwise_report("dual-cone", a, Polyhedron::dual_cone),
            Command::Lift(a) => pointwise_report("lift", a, Polyhedron::lift_cone),
            Command::Epigraph(a) => pointwise_report("epigraph", a, |p| Ok(p.epigraph_cone())),
            Command::Solvency(a) => solvency_report(a),
            Command::Check(a) => check_report(a),
            Command::Maxingale(a) => maxingale_report(a),
        }
    }
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("values serialize");
                s.push('\n');
                s
            }
            Format::Text => self.text.clone(),
        }
    }
}

/// Runs a parsed command line: 0 on success, 1 when `check` finds a
/// violation, 2 on usage, parse or precondition errors.
pub fn execute(cli: &Cli) -> u8 {
    let output = cli.command.output();
    let report = match cli.command.run() {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let rendered = report.render(output.format);
    match &output.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, rendered) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 2;
            }
        }
        None => print!("{rendered}"),
    }
    u8::from(report.violation)
}
