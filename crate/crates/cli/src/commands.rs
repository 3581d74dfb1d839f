use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use graphsched::io::{self, DecompositionDoc, GraphDoc, ScheduleDoc};
use graphsched::schedule::{self, ValidationReport};
use graphsched::sim::{distribution_equivalence, stream_simulate};
use graphsched::solver::{self, Strategy};
use graphsched::{
    BasisAssignment, Budget, FamilyDescriptor, Graph, MeasurementSchedule, Real, SolverError,
    SolverReport,
};

use crate::doc::{self, CheckDoc, ReportDoc, SimulationDoc, VerificationDoc};
use crate::error::{CmdResult, Failure, EXIT_LIMIT, EXIT_OK, EXIT_VALIDATION};
use crate::input::{self, Loaded, PayloadKind};
use crate::{out_path, Ctx, Format};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    Complete,
    Path,
    Cycle,
    Grid,
    Caterpillar,
    Random,
}

#[derive(Args)]
pub struct GenerateArgs {
    pub family: FamilyKind,
    /// Family parameters: `n` (complete, path, cycle), `m n` (grid),
    /// `spine legs` (caterpillar), `n p [seed]` (random; seed defaults to --seed).
    #[arg(allow_negative_numbers = true)]
    pub params: Vec<String>,
    /// Write the graph here instead of stdout.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

fn number<T: std::str::FromStr>(s: &str) -> Result<T, Failure> {
    s.parse()
        .map_err(|_| Failure::input(format!("invalid family parameter `{s}`")))
}

pub fn family_from_params(
    kind: FamilyKind,
    params: &[String],
    seed: u64,
) -> Result<FamilyDescriptor, Failure> {
    let want = |count: &[usize]| {
        if count.contains(&params.len()) {
            Ok(())
        } else {
            Err(Failure::input(format!(
                "{kind:?} takes {count:?} parameters, got {}",
                params.len()
            )))
        }
    };
    Ok(match kind {
        FamilyKind::Complete | FamilyKind::Path | FamilyKind::Cycle => {
            want(&[1])?;
            let n = number(&params[0])?;
            match kind {
                FamilyKind::Complete => FamilyDescriptor::Complete { n },
                FamilyKind::Path => FamilyDescriptor::Path { n },
                _ => FamilyDescriptor::Cycle { n },
            }
        }
        FamilyKind::Grid => {
            want(&[2])?;
            FamilyDescriptor::Grid {
                m: number(&params[0])?,
                n: number(&params[1])?,
            }
        }
        FamilyKind::Caterpillar => {
            want(&[2])?;
            FamilyDescriptor::Caterpillar {
                spine: number(&params[0])?,
                legs: number(&params[1])?,
            }
        }
        FamilyKind::Random => {
            want(&[2, 3])?;
            FamilyDescriptor::Random {
                n: number(&params[0])?,
                p: number(&params[1])?,
                seed: params
                    .get(2)
                    .map(|s| number(s))
                    .transpose()?
                    .unwrap_or(seed),
            }
        }
    })
}

pub fn generate(ctx: &Ctx, args: &GenerateArgs) -> CmdResult {
    let family = family_from_params(args.family, &args.params, ctx.seed)?;
    let g = family.generate()?;
    let text = match ctx.format {
        Format::Structured => doc::to_pretty(&GraphDoc::from_graph(&g).with_family(family)),
        Format::Text => io::write_edge_list(&g),
    };
    match out_path(&args.out) {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Failure::input(format!("cannot write {}: {e}", p.display())))?,
        None => ctx.emit(&text)?,
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    /// Branch and bound within the budget, falling back to the heuristic.
    Auto,
    Brute,
    Dp,
    Bnb,
    Heuristic,
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Greedy,
    RandomRestart,
}

#[derive(Args, Clone)]
pub struct SolverOptions {
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
    /// Node budget for branch and bound, in addition to --budget.
    #[arg(long)]
    pub nodes: Option<u64>,
    /// Heuristic strategy.
    #[arg(long, value_enum, default_value_t = StrategyArg::RandomRestart)]
    pub strategy: StrategyArg,
    /// Number of heuristic restarts.
    #[arg(long, default_value_t = 16)]
    pub restarts: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            method: MethodArg::Auto,
            nodes: None,
            strategy: StrategyArg::RandomRestart,
            restarts: 16,
        }
    }
}

pub enum Solution {
    Report {
        report: SolverReport,
        /// The requested exact method ran out of budget or exceeded its size
        /// cap; `report` holds the best bound found instead.
        limited: bool,
    },
    ClosedForm(usize),
}

fn run_heuristic(ctx: &Ctx, g: &Graph, opts: &SolverOptions) -> Result<SolverReport, Failure> {
    let strategy = match opts.strategy {
        StrategyArg::Greedy => Strategy::GreedyBoundary,
        StrategyArg::RandomRestart => Strategy::RandomRestart {
            seed: ctx.seed,
            restarts: opts.restarts,
        },
    };
    Ok(solver::heuristic(g, strategy)?)
}

pub fn run_solver(
    ctx: &Ctx,
    g: &Graph,
    family: Option<&FamilyDescriptor>,
    opts: &SolverOptions,
) -> Result<Solution, Failure> {
    let budget = Budget {
        time: ctx.budget,
        nodes: opts.nodes,
    };
    let capped = |r: Result<SolverReport, SolverError>| -> Result<Solution, Failure> {
        match r {
            Ok(report) => Ok(Solution::Report {
                report,
                limited: false,
            }),
            Err(e @ SolverError::TooLarge { .. }) => {
                ctx.note(&format!("{e}; reporting the heuristic bound instead"));
                Ok(Solution::Report {
                    report: run_heuristic(ctx, g, opts)?,
                    limited: true,
                })
            }
            Err(e) => Err(e.into()),
        }
    };
    match opts.method {
        MethodArg::Brute => capped(solver::brute_force(g)),
        MethodArg::Dp => capped(solver::exact_dp(g)),
        MethodArg::Heuristic => Ok(Solution::Report {
            report: run_heuristic(ctx, g, opts)?,
            limited: false,
        }),
        MethodArg::Bnb | MethodArg::Auto => {
            let report = solver::branch_and_bound(g, budget)?;
            if !report.exact {
                ctx.note("search budget exhausted; reporting the best bound found");
            }
            let limited = !report.exact && opts.method == MethodArg::Bnb;
            Ok(Solution::Report { report, limited })
        }
        MethodArg::ClosedForm => {
            let family = family.ok_or_else(|| {
                Failure::input("closed-form needs a generated graph that records its family")
            })?;
            solver::closed_form(family)
                .map(Solution::ClosedForm)
                .ok_or_else(|| Failure::input(format!("no closed form for {}", family.name())))
        }
    }
}

#[derive(Args)]
pub struct SolveArgs {
    /// Graph or bundle; stdin when omitted.
    pub input: Option<PathBuf>,
    /// Graph file (alternative to the positional input).
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverOptions,
    /// Include wall-clock time in the report (makes output nondeterministic).
    #[arg(long)]
    pub timings: bool,
}

pub fn solve(ctx: &Ctx, args: &SolveArgs) -> CmdResult {
    let source = args.graph.as_deref().or(args.input.as_deref());
    let loaded = input::load(ctx, source, None, PayloadKind::Auto)?;
    let g = loaded.graph()?;
    let family = loaded.family.as_ref();
    let formula = family.and_then(solver::closed_form);
    let mut bundle = loaded.bundle.clone();
    bundle.clear_derived();

    let (report_doc, code) = match run_solver(ctx, g, family, &args.solver)? {
        Solution::Report { report, limited } => {
            bundle.schedule = Some(ScheduleDoc::from_schedule(g, &report.schedule));
            bundle.decomposition = Some(DecompositionDoc::from_decomposition(
                g,
                &report.decomposition,
            ));
            let code = if limited { EXIT_LIMIT } else { EXIT_OK };
            (ReportDoc::new(g, &report, formula, args.timings), code)
        }
        Solution::ClosedForm(width) => {
            bundle.schedule = None;
            bundle.decomposition = None;
            let doc = ReportDoc {
                method: "closed-form".into(),
                exact: true,
                width,
                spatial_cost: if g.n() == 0 { 0 } else { width + 1 },
                lower_bound: width,
                nodes_expanded: 0,
                ordering: Vec::new(),
                closed_form: Some(width),
                elapsed_seconds: None,
            };
            (doc, EXIT_OK)
        }
    };

    match ctx.format {
        Format::Structured => {
            bundle.set("report", &report_doc);
            ctx.emit(&doc::to_pretty(&bundle))?;
        }
        Format::Text => {
            let r = &report_doc;
            let mut out = String::new();
            let _ = writeln!(out, "method        {}", r.method);
            let _ = writeln!(out, "exact         {}", r.exact);
            let _ = writeln!(out, "width         {}", r.width);
            let _ = writeln!(out, "spatial_cost  {}", r.spatial_cost);
            let _ = writeln!(out, "lower_bound   {}", r.lower_bound);
            let _ = writeln!(out, "nodes         {}", r.nodes_expanded);
            if let Some(cf) = r.closed_form {
                let _ = writeln!(out, "closed_form   {cf}");
            }
            if let Some(t) = r.elapsed_seconds {
                let _ = writeln!(out, "elapsed       {t:.6}s");
            }
            if !r.ordering.is_empty() {
                let _ = writeln!(out, "ordering      {}", r.ordering.join(" "));
            }
            if let Some(d) = &bundle.decomposition {
                out.push_str("\n# decomposition\n");
                out.push_str(&io::write_decomposition_text(d));
            }
            if let Some(s) = &bundle.schedule {
                out.push_str("\n# schedule\n");
                out.push_str(&io::write_schedule_text(s));
            }
            ctx.emit(&out)?;
        }
    }
    Ok(code)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Auto,
    Schedule,
    Decomposition,
}

impl From<KindArg> for PayloadKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Auto => PayloadKind::Auto,
            KindArg::Schedule => PayloadKind::Schedule,
            KindArg::Decomposition => PayloadKind::Decomposition,
        }
    }
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Bundle, or a schedule/decomposition when --graph is given; stdin when omitted.
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// What the input holds. `auto` checks everything present.
    #[arg(long, value_enum, default_value_t = KindArg::Auto)]
    pub kind: KindArg,
}

fn check_schedule(g: &Graph, s: &MeasurementSchedule) -> Result<CheckDoc, Failure> {
    let report = schedule::validate_schedule(g, s)?;
    Ok(CheckDoc {
        valid: Some(report.is_valid()),
        cost: schedule::cost(s).ok(),
        width: None,
        violations: doc::violations(g, &report),
    })
}

fn check_decomposition(loaded: &Loaded, d: &DecompositionDoc) -> Result<CheckDoc, Failure> {
    match &loaded.graph {
        Some(g) => {
            let pd = d.to_decomposition(g)?;
            let report = schedule::validate_decomposition(g, &pd)?;
            Ok(CheckDoc {
                valid: Some(report.is_valid()),
                cost: None,
                width: pd.width().ok(),
                violations: doc::violations(g, &report),
            })
        }
        None => {
            // Width only: the largest bag, counting each label once.
            let width = d
                .bags
                .iter()
                .map(|b| b.iter().collect::<std::collections::BTreeSet<_>>().len())
                .max()
                .map(|m| m.saturating_sub(1));
            Ok(CheckDoc {
                valid: None,
                cost: None,
                width,
                violations: Vec::new(),
            })
        }
    }
}

fn render_check(out: &mut String, name: &str, c: &CheckDoc) {
    let status = match c.valid {
        Some(true) => "valid",
        Some(false) => "invalid",
        None => "not validated (no graph)",
    };
    let _ = write!(out, "{name}: {status}");
    if let Some(cost) = c.cost {
        let _ = write!(out, ", cost {cost}");
    }
    if let Some(w) = c.width {
        let _ = write!(out, ", width {w}");
    }
    out.push('\n');
    for v in &c.violations {
        let _ = writeln!(out, "  {}: {}", v.condition, v.message);
    }
}

pub fn verify(ctx: &Ctx, args: &VerifyArgs) -> CmdResult {
    let loaded = input::load(
        ctx,
        args.input.as_deref(),
        args.graph.as_deref(),
        args.kind.into(),
    )?;
    let want_schedule = matches!(args.kind, KindArg::Auto | KindArg::Schedule);
    let want_decomposition = matches!(args.kind, KindArg::Auto | KindArg::Decomposition);
    let mut verification = VerificationDoc::default();
    if want_schedule {
        if let Some(s) = loaded.schedule()? {
            verification.schedule = Some(check_schedule(loaded.graph()?, &s)?);
        }
    }
    if want_decomposition {
        if let Some(d) = &loaded.bundle.decomposition {
            verification.decomposition = Some(check_decomposition(&loaded, d)?);
        }
    }
    if verification.schedule.is_none() && verification.decomposition.is_none() {
        return Err(Failure::input(
            "nothing to verify: no schedule or decomposition in the input",
        ));
    }
    if loaded.graph.is_none() {
        ctx.note("no graph given; only the width was computed");
    }

    let code = if verification.all_valid() {
        EXIT_OK
    } else {
        EXIT_VALIDATION
    };
    match ctx.format {
        Format::Structured => {
            let mut bundle = loaded.bundle.clone();
            bundle.set("verification", &verification);
            ctx.emit(&doc::to_pretty(&bundle))?;
        }
        Format::Text => {
            let mut out = String::new();
            if let Some(c) = &verification.schedule {
                render_check(&mut out, "schedule", c);
            }
            if let Some(c) = &verification.decomposition {
                render_check(&mut out, "decomposition", c);
            }
            ctx.emit(&out)?;
        }
    }
    Ok(code)
}

fn invalid(g: &Graph, what: &str, report: &ValidationReport) -> Failure {
    let details: Vec<String> = doc::violations(g, report)
        .into_iter()
        .map(|v| format!("{}: {}", v.condition, v.message))
        .collect();
    Failure::validation(format!("invalid {what}: {}", details.join("; ")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Schedule,
    Decomposition,
}

#[derive(Args)]
pub struct ConvertArgs {
    /// Bundle, or the source object when --graph is given; stdin when omitted.
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Kind of object to produce; the source is the other kind.
    #[arg(long, value_enum)]
    pub to: Target,
}

/// Validates `pd` and converts it, with label-based diagnostics.
fn decomposition_schedule(
    g: &Graph,
    pd: &graphsched::PathDecomposition,
) -> Result<MeasurementSchedule, Failure> {
    let report = schedule::validate_decomposition(g, pd)?;
    if !report.is_valid() {
        return Err(invalid(g, "decomposition", &report));
    }
    Ok(schedule::decomposition_to_schedule(g, pd)?)
}

pub fn convert(ctx: &Ctx, args: &ConvertArgs) -> CmdResult {
    let kind = match args.to {
        Target::Schedule => PayloadKind::Decomposition,
        Target::Decomposition => PayloadKind::Schedule,
    };
    let loaded = input::load(ctx, args.input.as_deref(), args.graph.as_deref(), kind)?;
    let g = loaded.graph()?;
    let mut bundle = loaded.bundle.clone();
    bundle.clear_derived();
    let text = match args.to {
        Target::Decomposition => {
            let s = loaded
                .schedule()?
                .ok_or_else(|| Failure::input("no schedule to convert"))?;
            let report = schedule::validate_schedule(g, &s)?;
            if !report.is_valid() {
                return Err(invalid(g, "schedule", &report));
            }
            let pd = schedule::schedule_to_decomposition(g, &s)?;
            let d = DecompositionDoc::from_decomposition(g, &pd);
            let text = io::write_decomposition_text(&d);
            bundle.decomposition = Some(d);
            text
        }
        Target::Schedule => {
            let pd = loaded
                .decomposition()?
                .ok_or_else(|| Failure::input("no decomposition to convert"))?;
            let s = decomposition_schedule(g, &pd)?;
            let d = ScheduleDoc::from_schedule(g, &s);
            let text = io::write_schedule_text(&d);
            bundle.schedule = Some(d);
            text
        }
    };
    match ctx.format {
        Format::Structured => ctx.emit(&doc::to_pretty(&bundle))?,
        Format::Text => ctx.emit(&text)?,
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Sample one run and report outcomes and peak memory.
    Sample,
    /// Compare every outcome probability against the full state-vector reference.
    Check,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Precision {
    Double,
    Single,
}

#[derive(Args)]
pub struct SimulateArgs {
    /// Bundle, or a schedule/decomposition when --graph is given; stdin when omitted.
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Measurement bases as one letter per vertex (Z, X, Y), or one letter for all.
    #[arg(long, default_value = "Z")]
    pub bases: String,
    #[arg(long, value_enum, default_value_t = Mode::Sample)]
    pub mode: Mode,
    #[arg(long, value_enum, default_value_t = Precision::Double)]
    pub precision: Precision,
}

/// The schedule to simulate: given, converted from a decomposition, or solved for.
fn schedule_for(ctx: &Ctx, loaded: &Loaded) -> Result<MeasurementSchedule, Failure> {
    if let Some(s) = loaded.schedule()? {
        return Ok(s);
    }
    let g = loaded.graph()?;
    if let Some(pd) = loaded.decomposition()? {
        return decomposition_schedule(g, &pd);
    }
    ctx.note("no schedule given; using one from the default solver");
    match run_solver(ctx, g, loaded.family.as_ref(), &SolverOptions::default())? {
        Solution::Report { report, .. } => Ok(report.schedule),
        Solution::ClosedForm(_) => unreachable!("the default solver produces certificates"),
    }
}

fn simulate_as<T: Real>(
    ctx: &Ctx,
    args: &SimulateArgs,
    g: &Graph,
    s: &MeasurementSchedule,
    bases: &BasisAssignment,
) -> Result<(serde_json::Value, String, u8), Failure> {
    match args.mode {
        Mode::Sample => {
            let r = stream_simulate::<T>(g, s, bases, ctx.seed)?;
            let sim = SimulationDoc {
                bases: bases.to_string(),
                seed: ctx.seed,
                outcomes: r
                    .outcomes
                    .iter()
                    .enumerate()
                    .map(|(v, &b)| (g.label(v), b))
                    .collect(),
                probability: r.probability,
                schedule_cost: schedule::cost(s)?,
                peak_active: r.peak_active,
                peak_amplitude_length: r.peak_amplitude_length,
            };
            let mut text = String::new();
            let outcomes: Vec<String> = sim
                .outcomes
                .iter()
                .map(|(l, b)| format!("{l}={b}"))
                .collect();
            let _ = writeln!(text, "outcomes               {}", outcomes.join(" "));
            let _ = writeln!(text, "probability            {}", sim.probability);
            let _ = writeln!(text, "schedule_cost          {}", sim.schedule_cost);
            let _ = writeln!(text, "peak_active            {}", sim.peak_active);
            let _ = writeln!(text, "peak_amplitude_length  {}", sim.peak_amplitude_length);
            Ok((serde_json::to_value(sim)?, text, EXIT_OK))
        }
        Mode::Check => {
            let r = distribution_equivalence::<T>(g, s, bases)?;
            let text = format!(
                "equivalence {} (max deviation {:e}, tolerance {:e}, {} outcomes)\n",
                if r.pass { "pass" } else { "FAIL" },
                r.max_deviation,
                r.tolerance,
                r.outcomes_checked
            );
            let code = if r.pass { EXIT_OK } else { EXIT_VALIDATION };
            Ok((serde_json::to_value(r)?, text, code))
        }
    }
}

pub fn simulate(ctx: &Ctx, args: &SimulateArgs) -> CmdResult {
    let loaded = input::load(
        ctx,
        args.input.as_deref(),
        args.graph.as_deref(),
        PayloadKind::Auto,
    )?;
    let g = loaded.graph()?;
    let s = schedule_for(ctx, &loaded)?;
    let bases = BasisAssignment::parse(&args.bases, g.n())?;
    let (value, text, code) = match args.precision {
        Precision::Double => simulate_as::<f64>(ctx, args, g, &s, &bases)?,
        Precision::Single => simulate_as::<f32>(ctx, args, g, &s, &bases)?,
    };
    match ctx.format {
        Format::Structured => {
            let mut bundle = loaded.bundle.clone();
            bundle.schedule = Some(ScheduleDoc::from_schedule(g, &s));
            let key = match args.mode {
                Mode::Sample => "simulation",
                Mode::Check => "equivalence",
            };
            bundle.set(key, value);
            ctx.emit(&doc::to_pretty(&bundle))?;
        }
        Format::Text => ctx.emit(&text)?,
    }
    Ok(code)
}

/// Lists graph files in `dir`, sorted by name.
pub fn graph_files(dir: &Path) -> Result<Vec<PathBuf>, Failure> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    Ok(files)
}
