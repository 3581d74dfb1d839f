//! Corpus benchmarking.
//!
//! Corpus specs, comma-separated or repeated:
//!
//! - `complete:3..8`, `path:2..10`, `cycle:3..6` (ranges are inclusive; a
//!   single number also works)
//! - `grid:2..5` (all `m x n` with both sides in range) or `grid:2..3x4..5`
//! - `caterpillar:2..6:3` (spine range, legs)
//! - `random:10:0.3:50` (vertex count or range, edge probability, instances
//!   per size; instance `i` uses seed `--seed + i`)

use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::Args;
use graphsched::{FamilyDescriptor, Graph};
use rayon::prelude::*;
use serde::Serialize;

use crate::commands::{self, MethodArg, Solution, SolverOptions};
use crate::doc;
use crate::error::{CmdResult, Failure, EXIT_OK};
use crate::input;
use crate::{Ctx, Format};

#[derive(Args)]
pub struct BenchArgs {
    /// Corpus spec(s), comma-separated or repeated: `complete:3..8`,
    /// `path:2..10`, `cycle:3..6`, `grid:2..5` or `grid:2..3x4..5`,
    /// `caterpillar:2..6:3` (spine range, legs), `random:10:0.3:50`
    /// (n, edge probability, count; instance i uses seed --seed + i).
    #[arg(long, value_delimiter = ',')]
    pub corpus: Vec<String>,
    /// Directory of graph files to add to the corpus.
    #[arg(long)]
    pub dir: Option<PathBuf>,
    /// Methods to run on every instance.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "auto")]
    pub methods: Vec<MethodArg>,
    #[arg(long)]
    pub nodes: Option<u64>,
    #[arg(long, default_value_t = 16)]
    pub restarts: usize,
    /// Include wall-clock times in the structured output (makes it nondeterministic).
    #[arg(long)]
    pub timings: bool,
}

struct Instance {
    name: String,
    graph: Graph,
    family: Option<FamilyDescriptor>,
}

#[derive(Debug, Serialize)]
struct Row {
    instance: String,
    n: usize,
    edges: usize,
    method: String,
    /// `ok`, `limited` (fell back to a bound) or an error message.
    status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    width: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    spatial_cost: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lower_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nodes_expanded: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_seconds: Option<f64>,
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, Failure> {
    let bad = || Failure::input(format!("invalid range `{s}`"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?),
        None => {
            let v = s.parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

fn parse_spec(spec: &str, seed: u64) -> Result<Vec<FamilyDescriptor>, Failure> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Failure::input(format!("invalid corpus spec `{spec}`"));
    let mut out = Vec::new();
    match parts.as_slice() {
        ["complete", r] => out.extend(parse_range(r)?.map(|n| FamilyDescriptor::Complete { n })),
        ["path", r] => out.extend(parse_range(r)?.map(|n| FamilyDescriptor::Path { n })),
        ["cycle", r] => out.extend(parse_range(r)?.map(|n| FamilyDescriptor::Cycle { n })),
        ["grid", r] => {
            let (rows, cols) = match r.split_once('x') {
                Some((a, b)) => (parse_range(a)?, parse_range(b)?),
                None => (parse_range(r)?, parse_range(r)?),
            };
            for m in rows {
                out.extend(cols.clone().map(|n| FamilyDescriptor::Grid { m, n }));
            }
        }
        ["caterpillar", r, legs] => {
            let legs = legs.parse().map_err(|_| bad())?;
            out.extend(parse_range(r)?.map(|spine| FamilyDescriptor::Caterpillar { spine, legs }));
        }
        ["random", r, p, count] => {
            let p: f64 = p.parse().map_err(|_| bad())?;
            let count: u64 = count.parse().map_err(|_| bad())?;
            for n in parse_range(r)? {
                out.extend((0..count).map(|i| FamilyDescriptor::Random {
                    n,
                    p,
                    seed: seed.wrapping_add(i),
                }));
            }
        }
        _ => return Err(bad()),
    }
    Ok(out)
}

fn collect_instances(ctx: &Ctx, args: &BenchArgs) -> Result<Vec<Instance>, Failure> {
    let mut instances = Vec::new();
    for spec in &args.corpus {
        for family in parse_spec(spec.trim(), ctx.seed)? {
            instances.push(Instance {
                name: family.name(),
                graph: family.generate()?,
                family: Some(family),
            });
        }
    }
    if let Some(dir) = &args.dir {
        for path in commands::graph_files(dir)? {
            let loaded = input::load(ctx, Some(&path), None, input::PayloadKind::Auto)?;
            let name = path
                .file_name()
                .map(|f| f.to_string_lossy().into_owned())
                .unwrap_or_default();
            instances.push(Instance {
                name,
                graph: loaded.graph()?.clone(),
                family: loaded.family,
            });
        }
    }
    Ok(instances)
}

fn run_row(
    ctx: &Ctx,
    inst: &Instance,
    method: MethodArg,
    opts: &SolverOptions,
    timings: bool,
) -> Row {
    let opts = SolverOptions {
        method,
        ..opts.clone()
    };
    let mut row = Row {
        instance: inst.name.clone(),
        n: inst.graph.n(),
        edges: inst.graph.edge_count(),
        method: method_name(method).into(),
        status: "ok".into(),
        width: None,
        spatial_cost: None,
        exact: None,
        lower_bound: None,
        nodes_expanded: None,
        elapsed_seconds: None,
    };
    match commands::run_solver(ctx, &inst.graph, inst.family.as_ref(), &opts) {
        Ok(Solution::Report { report, limited }) => {
            if limited {
                row.status = "limited".into();
            }
            row.width = Some(report.width);
            row.spatial_cost = Some(report.spatial_cost());
            row.exact = Some(report.exact);
            row.lower_bound = Some(report.lower_bound);
            row.nodes_expanded = Some(report.nodes_expanded);
            row.elapsed_seconds = timings.then_some(report.elapsed.as_secs_f64());
        }
        Ok(Solution::ClosedForm(w)) => {
            row.width = Some(w);
            row.spatial_cost = Some(if inst.graph.n() == 0 { 0 } else { w + 1 });
            row.exact = Some(true);
        }
        Err(f) => row.status = f.message,
    }
    row
}

fn method_name(m: MethodArg) -> &'static str {
    match m {
        MethodArg::Auto => "auto",
        MethodArg::Brute => "brute",
        MethodArg::Dp => "dp",
        MethodArg::Bnb => "bnb",
        MethodArg::Heuristic => "heuristic",
        MethodArg::ClosedForm => "closed-form",
    }
}

fn table(rows: &[Row], timings: bool) -> String {
    let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
    let mut header = vec![
        "instance", "n", "edges", "method", "width", "cost", "exact", "lb", "nodes",
    ];
    if timings {
        header.push("elapsed_ms");
    }
    header.push("status");
    let mut cells: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
    for r in rows {
        let mut line = vec![
            r.instance.clone(),
            r.n.to_string(),
            r.edges.to_string(),
            r.method.clone(),
            opt(r.width.map(|v| v.to_string())),
            opt(r.spatial_cost.map(|v| v.to_string())),
            opt(r.exact.map(|v| v.to_string())),
            opt(r.lower_bound.map(|v| v.to_string())),
            opt(r.nodes_expanded.map(|v| v.to_string())),
        ];
        if timings {
            line.push(opt(r.elapsed_seconds.map(|t| format!("{:.3}", t * 1e3))));
        }
        line.push(r.status.clone());
        cells.push(line);
    }
    let columns = cells[0].len();
    let widths: Vec<usize> = (0..columns)
        .map(|c| cells.iter().map(|l| l[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for line in &cells {
        let padded: Vec<String> = line
            .iter()
            .zip(&widths)
            .map(|(cell, &w)| format!("{cell:<w$}"))
            .collect();
        out.push_str(padded.join("  ").trim_end());
        out.push('\n');
    }
    out
}

pub fn bench(ctx: &Ctx, args: &BenchArgs) -> CmdResult {
    let instances = collect_instances(ctx, args)?;
    if instances.is_empty() {
        return Err(Failure::input("empty corpus: give --corpus or --dir"));
    }
    let opts = SolverOptions {
        nodes: args.nodes,
        restarts: args.restarts,
        ..SolverOptions::default()
    };
    let jobs: Vec<(&Instance, MethodArg)> = instances
        .iter()
        .flat_map(|inst| args.methods.iter().map(move |&m| (inst, m)))
        .collect();
    let quiet = Ctx {
        quiet: true,
        ..*ctx
    };
    let rows: Vec<Row> = jobs
        .par_iter()
        .map(|&(inst, m)| run_row(&quiet, inst, m, &opts, args.timings))
        .collect();
    match ctx.format {
        Format::Structured => ctx.emit(&doc::to_pretty(&serde_json::json!({ "rows": rows })))?,
        Format::Text => ctx.emit(&table(&rows, args.timings))?,
    }
    Ok(EXIT_OK)
}
