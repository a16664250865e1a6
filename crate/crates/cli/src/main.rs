use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use bcm_core::descent::{self, Rule};
use bcm_core::diffusion::{self, DiffusionVariant};
use bcm_core::geometry::{parse_rational, to_f64};
use bcm_core::io::{self, LoadError};
use bcm_core::suites::{self, Suite};
use bcm_core::{epigraph, lp, Error, Instance, LpOutcome, Picker, QVector, RiStrategy};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "bcm", version, about = "Exact block-coordinate minimization over polyhedra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimize the instance objective over its polyhedron with the simplex method.
    Solve { instance: PathBuf },
    /// Run the three local-minimum classifiers at a point.
    Classify {
        instance: PathBuf,
        /// Comma-separated rationals, e.g. `3,1/2`. Defaults to the instance start.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
    },
    /// Run block-coordinate descent and write its trace.
    Run {
        instance: PathBuf,
        /// Trace output path; stdout when omitted.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, value_enum)]
        rule: Option<RuleArg>,
        #[arg(long, value_enum)]
        picker: Option<PickerArg>,
        #[arg(long, value_enum)]
        strategy: Option<StrategyArg>,
        #[arg(long, allow_hyphen_values = true)]
        start: Option<String>,
        #[arg(long)]
        max_rounds: Option<usize>,
        /// JSON array of polyhedra; adds per-round distances to the report.
        #[arg(long)]
        targets: Option<PathBuf>,
        /// Convergence report output path.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check a property suite on random instances.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: u64,
        /// Where to write the reproducer of the first failing instance.
        #[arg(long, default_value = "reproducer.json")]
        reproducer: PathBuf,
        /// Full JSON report output path.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Minimize a piecewise-affine function over a polyhedron through its epigraph.
    Epigraph { polyhedron: PathBuf, function: PathBuf },
    /// Run averaging diffusion sweeps on a pairwise model.
    Diffusion {
        model: PathBuf,
        #[arg(long, default_value_t = 10)]
        sweeps: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    Ri,
    Plain,
}

#[derive(Clone, Copy, ValueEnum)]
enum PickerArg {
    LexMin,
    LexMax,
    Sticky,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    SlackAverage,
    VertexBarycenter,
}

impl From<StrategyArg> for RiStrategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::SlackAverage => RiStrategy::SlackAverage,
            StrategyArg::VertexBarycenter => RiStrategy::VertexBarycenter,
        }
    }
}

impl From<PickerArg> for Picker {
    fn from(p: PickerArg) -> Self {
        match p {
            PickerArg::LexMin => Picker::LexMinVertex,
            PickerArg::LexMax => Picker::LexMaxVertex,
            PickerArg::Sticky => Picker::Sticky,
        }
    }
}

/// Failure with the process exit code it maps to.
#[derive(Debug)]
struct Exit {
    code: u8,
    error: anyhow::Error,
}

impl Exit {
    fn new(code: u8, error: anyhow::Error) -> Self {
        Exit { code, error }
    }
}

impl From<anyhow::Error> for Exit {
    fn from(error: anyhow::Error) -> Self {
        let code = match error.downcast_ref::<Error>() {
            Some(Error::UnboundedDirection | Error::PointNotInPolyhedron) => 2,
            _ => 1,
        };
        Exit { code, error }
    }
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

type CliResult<T = ()> = Result<T, Exit>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(exit) => {
            eprintln!("error: {:#}", exit.error);
            ExitCode::from(exit.code)
        }
    }
}

fn dispatch(command: Command) -> CliResult {
    match command {
        Command::Solve { instance } => solve(&instance),
        Command::Classify { instance, point } => classify(&instance, point.as_deref()),
        Command::Run {
            instance,
            trace,
            rule,
            picker,
            strategy,
            start,
            max_rounds,
            targets,
            report,
        } => {
            let mut inst = load_instance(&instance)?;
            if let Some(s) = start {
                inst.start = parse_point(&s)?;
            }
            if let Some(n) = max_rounds {
                inst.stop.max_rounds = n;
            }
            inst.rule = override_rule(inst.rule, rule, picker, strategy);
            run(&inst, trace.as_deref(), targets.as_deref(), report.as_deref())
        }
        Command::Verify {
            suite,
            seed,
            count,
            reproducer,
            report,
        } => verify(&suite, seed, count, &reproducer, report.as_deref()),
        Command::Epigraph {
            polyhedron,
            function,
        } => epigraph_cmd(&polyhedron, &function),
        Command::Diffusion { model, sweeps } => diffusion_cmd(&model, sweeps),
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(|e| Exit::new(1, e))
}

fn write(path: &Path, text: &str) -> CliResult {
    fs::write(path, text)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(|e| Exit::new(1, e))
}

fn loaded<T>(path: &Path, r: Result<T, LoadError>) -> CliResult<T> {
    r.map_err(|e| Exit::new(1, anyhow!(e).context(format!("loading {}", path.display()))))
}

fn load_instance(path: &Path) -> CliResult<Instance> {
    loaded(path, io::parse_instance(&read(path)?))
}

fn parse_point(text: &str) -> CliResult<QVector> {
    text.split(',')
        .map(|s| parse_rational(s.trim()))
        .collect::<Result<Vec<_>, _>>()
        .map(QVector::new)
        .map_err(|e| Exit::new(1, anyhow!("bad point {text:?}: {e}")))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn override_rule(
    base: Rule,
    rule: Option<RuleArg>,
    picker: Option<PickerArg>,
    strategy: Option<StrategyArg>,
) -> Rule {
    let strategy = strategy
        .map(RiStrategy::from)
        .unwrap_or_else(|| base.classification_strategy());
    let rule = rule.unwrap_or(match base {
        Rule::Ri { .. } => RuleArg::Ri,
        Rule::Plain { .. } => RuleArg::Plain,
    });
    match rule {
        RuleArg::Ri => Rule::Ri { strategy },
        RuleArg::Plain => {
            let picker = match (picker, base) {
                (Some(p), _) => p.into(),
                (None, Rule::Plain { picker }) => picker,
                (None, Rule::Ri { .. }) => Picker::LexMinVertex,
            };
            Rule::Plain { picker }
        }
    }
}

fn solve(path: &Path) -> CliResult {
    let inst = load_instance(path)?;
    let outcome = lp::solve(&inst.polyhedron, &inst.objective)?;
    let mut out = json!({ "schema": 1, "status": outcome.status() });
    if let LpOutcome::Optimal(sol) = &outcome {
        out["value"] = json!(sol.value.to_string());
        out["point"] = json!(sol.point);
        out["ineq_duals"] = json!(sol.ineq_duals.iter().map(ToString::to_string).collect::<Vec<_>>());
        out["eq_duals"] = json!(sol.eq_duals.iter().map(ToString::to_string).collect::<Vec<_>>());
        out["certificate_ok"] = json!(lp::verify_certificate(&inst.polyhedron, &inst.objective, sol));
    }
    print!("{}", pretty(&out));
    Ok(())
}

fn classify(path: &Path, point: Option<&str>) -> CliResult {
    let inst = load_instance(path)?;
    let x = match point {
        Some(text) => parse_point(text)?,
        None => inst.start.clone(),
    };
    if x.dim() != inst.polyhedron.ambient_dim() || !inst.polyhedron.contains(&x) {
        return Err(Error::PointNotInPolyhedron.into());
    }
    let c = descent::classify(
        &inst.polyhedron,
        &inst.objective,
        &x,
        &inst.directions,
        &inst.schedule,
        inst.rule.classification_strategy(),
    )?;
    let face = inst.polyhedron.smallest_face(&x)?;
    let out = json!({
        "schema": 1,
        "point": x,
        "objective": inst.objective.eval(&x).to_string(),
        "is_local": c.is_local,
        "is_interior_local": c.is_interior_local,
        "is_pre_interior_local": c.is_pre_interior_local,
        "witness": c.witness,
        "face": face,
    });
    print!("{}", pretty(&out));
    Ok(())
}

fn run(inst: &Instance, trace_path: Option<&Path>, targets: Option<&Path>, report: Option<&Path>) -> CliResult {
    let targets = match targets {
        Some(p) => loaded(p, serde_json::from_str(&read(p)?).map_err(LoadError::from))?,
        None => Vec::new(),
    };
    let trace = descent::run(
        &inst.polyhedron,
        &inst.objective,
        &inst.start,
        &inst.directions,
        &inst.schedule,
        inst.rule,
        inst.stop,
    )?;
    let text = pretty(&serde_json::to_value(&trace).expect("trace serializes"));
    match trace_path {
        Some(p) => {
            write(p, &text)?;
            println!(
                "rounds {} stop {:?} f = {} certified {}",
                trace.rounds, trace.stop_reason, trace.final_objective, trace.certified
            );
        }
        None => print!("{text}"),
    }
    if let Some(p) = report {
        let mut rounds = Vec::new();
        for (k, x) in trace.round_points(inst.schedule.order().len()).iter().enumerate() {
            let mut entry = json!({
                "round": k,
                "point": x,
                "objective": inst.objective.eval(x).to_string(),
            });
            if !targets.is_empty() {
                entry["distance"] = json!(descent::distance_to_union(&targets, x)?);
            }
            rounds.push(entry);
        }
        let out = json!({
            "schema": 1,
            "rule": trace.rule,
            "final_objective": trace.final_objective.to_string(),
            "final_objective_f64": to_f64(&trace.final_objective),
            "certified": trace.certified,
            "classification": trace.classification,
            "rounds": rounds,
        });
        write(p, &pretty(&out))?;
    }
    Ok(())
}

fn verify(name: &str, seed: u64, count: u64, reproducer: &Path, report_path: Option<&Path>) -> CliResult {
    let suite = Suite::from_name(name).ok_or_else(|| {
        let known: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        Exit::new(3, anyhow!("unknown suite {name:?}; known: {}", known.join(", ")))
    })?;
    let report = suites::run_suite(suite, seed, count);
    for case in &report.cases {
        match &case.failure {
            None => println!("{suite} #{}: pass ({} checks)", case.index, case.checks),
            Some(f) => println!("{suite} #{}: FAIL {}", case.index, f.message),
        }
    }
    println!(
        "{suite}: {} passed, {} failed (seed {seed}, rng {})",
        report.passed, report.failed, report.rng
    );
    if let Some(p) = report_path {
        write(p, &pretty(&serde_json::to_value(&report).expect("report serializes")))?;
    }
    if let Some(first) = report.failures().next() {
        let failure = first.failure.as_ref().expect("failing case");
        write(reproducer, &pretty(&failure.reproducer))?;
        return Err(Exit::new(
            4,
            anyhow!("{} violation(s); reproducer written to {}", report.failed, reproducer.display()),
        ));
    }
    Ok(())
}

fn epigraph_cmd(poly_path: &Path, f_path: &Path) -> CliResult {
    let x = loaded(poly_path, io::parse_polyhedron(&read(poly_path)?))?;
    let f = loaded(f_path, io::parse_piecewise(&read(f_path)?))?;
    let problem = epigraph::lift(&x, &f)?;
    let lifted = lp::solve(&problem.lifted, &problem.objective)?;
    let mut out = json!({
        "schema": 1,
        "lifted_dim": problem.lifted.ambient_dim(),
        "status": lifted.status(),
    });
    if let LpOutcome::Optimal(sol) = &lifted {
        let minimizers = epigraph::minimizer_set(&x, &f)?;
        out["minimum"] = json!(sol.value.to_string());
        out["minimum_by_pieces"] = json!(epigraph::minimum_by_pieces(&x, &f)?.map(|v| v.to_string()));
        out["argmin"] = json!(epigraph::project_down(&sol.point));
        out["minimizer_set_dim"] = json!(minimizers.dimension()?);
        out["minimizer_ri_point"] = json!(minimizers.relative_interior_point(RiStrategy::SlackAverage)?);
    }
    print!("{}", pretty(&out));
    Ok(())
}

fn diffusion_cmd(path: &Path, sweeps: usize) -> CliResult {
    let m = loaded(path, io::parse_model(&read(path)?))?;
    let mut phi = m.zero_shift();
    let mut bounds = vec![diffusion::dual_bound(&m, &phi)?.to_string()];
    let mut ri_ok = true;
    for _ in 0..sweeps {
        for pivot in m.pivots() {
            ri_ok &= diffusion::verify_ri_property(&m, &phi, pivot, DiffusionVariant::Averaging)?;
            phi = diffusion::diffusion_step(&m, &phi, pivot, DiffusionVariant::Averaging)?;
        }
        bounds.push(diffusion::dual_bound(&m, &phi)?.to_string());
    }
    let out = json!({
        "schema": 1,
        "bounds": bounds,
        "primal_minimum": m.brute_force_minimum().to_string(),
        "ri_property_held": ri_ok,
        "shift": phi,
    });
    print!("{}", pretty(&out));
    Ok(())
}
