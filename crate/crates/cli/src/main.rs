use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use lappoly_core::complex::SimplicialComplex;
use lappoly_core::ehrhart::{is_palindromic, is_real_rooted, is_unimodal, laplacian_hstar, peak, HstarMethod, IntPolynomial};
use lappoly_core::exec::{ENV_BUDGET_CELLS, ENV_BUDGET_POINTS};
use lappoly_core::laplacian::{laplacian_polytope, reduce_general};
use lappoly_core::table::{verify_table, ReferenceTable};
use lappoly_core::triangulate::{is_regular, laplacian_triangulation, verify_triangulation, Disjointness, Regularity};
use lappoly_core::{Budget, Error, Exec};

const EXIT_MISMATCH: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "lappoly", version, about = "Laplacian polytopes of simplicial complexes")]
struct Cli {
    /// Lattice points a box scan may visit.
    #[arg(long, global = true, env = ENV_BUDGET_POINTS)]
    budget_points: Option<u64>,
    /// Cells or parallelepiped points a method may materialize.
    #[arg(long, global = true, env = ENV_BUDGET_CELLS)]
    budget_cells: Option<u64>,
    /// Run every data-parallel loop on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the k-th Laplacian polytope and describe it.
    Build(BuildArgs),
    /// h*-vector of the Laplacian polytope of the boundary of the (d+1)-simplex.
    Hstar {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value = "structural")]
        method: HstarMethod,
    },
    /// Build and certify the regular unimodular triangulation.
    Triangulate {
        #[arg(long)]
        d: usize,
        /// Write the triangulation (vertices, cells, checks) to this file.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compare computed h*-vectors with the reference table.
    VerifyTable {
        #[arg(long, default_value_t = 8)]
        max_d: usize,
        /// Use this table file instead of the embedded one.
        #[arg(long)]
        table: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Boundary of the D-simplex on labels 1..=D+1.
    #[arg(long, value_name = "D")]
    boundary_simplex: Option<usize>,
    /// Complex file: `order: ...` line, then one facet per line.
    #[arg(long, value_name = "FILE")]
    complex: Option<PathBuf>,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    k: usize,
}

#[derive(Serialize)]
struct BudgetUsage {
    points: u64,
    cells: u64,
}

#[derive(Serialize)]
struct RunReport {
    command: &'static str,
    inputs_digest: String,
    results: Value,
    timings_ms: f64,
    budget: BudgetUsage,
}

enum Failure {
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(Error::Budget { .. } | Error::Overflow(_)) => EXIT_BUDGET,
            Failure::Core(Error::Verification(_)) => EXIT_MISMATCH,
            _ => EXIT_INPUT,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Io(s) => s.clone(),
        }
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn digest(inputs: &Value) -> String {
    hex::encode(Sha256::digest(inputs.to_string().as_bytes()))
}

fn poly_json(p: &IntPolynomial) -> Value {
    match p.to_i64_vec() {
        Some(v) => json!(v),
        None => json!(p.coeffs().iter().map(ToString::to_string).collect::<Vec<_>>()),
    }
}

fn build(args: &BuildArgs) -> Result<(Value, Value, bool), Failure> {
    let (complex, inputs) = match (&args.source.boundary_simplex, &args.source.complex) {
        (Some(d), None) => (SimplicialComplex::boundary_of_simplex(*d), json!({"boundary_simplex": d, "k": args.k})),
        (None, Some(path)) => {
            let text = read(path)?;
            (SimplicialComplex::parse(&text)?, json!({"complex": text, "k": args.k}))
        }
        _ => return Err(Failure::Io("exactly one of --boundary-simplex and --complex is required".into())),
    };
    let lp = laplacian_polytope(&complex, args.k)?;
    let p = &lp.polytope;
    let vertex_idx = p.vertex_indices();
    let hull = p.affine_hull();
    let reduction = reduce_general(p.points())?;
    let facets: Vec<Value> = if hull.dim == 0 {
        Vec::new()
    } else {
        let red = &reduction.polytope;
        let red_idx = red.vertex_indices();
        red.facets()?
            .iter()
            .map(|f| {
                let verts: Vec<usize> = f
                    .vertices
                    .iter()
                    .map(|&rv| vertex_idx.iter().position(|&pi| pi == red_idx[rv]).expect("affine maps keep vertices"))
                    .collect();
                json!({"normal": f.halfspace.normal, "offset": f.halfspace.offset, "vertices": verts})
            })
            .collect()
    };
    let results = json!({
        "ambient_dimension": p.ambient_dim(),
        "dimension": hull.dim,
        "vertices": p.vertices(),
        "vertex_faces": vertex_idx.iter().map(|&i| lp.faces[i].clone()).collect::<Vec<_>>(),
        "affine_hull": hull.equations.iter().map(|(a, b)| json!({"normal": a, "rhs": b})).collect::<Vec<_>>(),
        "reduction": reduction.certificate,
        "facet_count": facets.len(),
        "facets": facets,
    });
    Ok((inputs, results, true))
}

fn hstar(d: usize, method: HstarMethod, budget: &Budget, exec: Exec) -> Result<(Value, Value, bool), Failure> {
    let h = laplacian_hstar(d, method, budget, exec)?;
    let dim = h.len() - 1;
    let expected = BigInt::from(d + 2).pow(d as u32);
    let results = json!({
        "d": d,
        "method": method,
        "dimension": dim,
        "hstar": poly_json(&h),
        "normalized_volume": h.sum().to_string(),
        "volume_matches": h.sum() == expected,
        "unimodal": is_unimodal(&h),
        "peak": peak(&h),
        "palindromic": is_palindromic(&h, dim),
        "real_rooted": is_real_rooted(&h)?,
    });
    Ok((json!({"d": d, "method": method}), results, true))
}

fn triangulate(d: usize, output: Option<&PathBuf>, budget: &Budget, exec: Exec) -> Result<(Value, Value, bool), Failure> {
    let t = laplacian_triangulation(d, budget, exec)?;
    let report = verify_triangulation(&t, exec)?;
    let regular = is_regular(&t, exec)?;
    let (disjoint_mode, pairs) = match report.disjointness {
        Disjointness::Exhaustive { pairs } => ("exhaustive", pairs),
        Disjointness::Sampled { pairs } => ("sampled", pairs),
    };
    let checks = json!({
        "affinely_independent": report.affinely_independent,
        "unimodular": report.unimodular,
        "volume_sum": report.volume_sum.to_string(),
        "carrier_volume": report.carrier_volume.to_string(),
        "ridges": report.ridges_ok,
        "disjointness": {"mode": disjoint_mode, "pairs": pairs},
        "regular": matches!(regular, Regularity::Regular { .. }),
        "violation": report.violation,
    });
    let ok = report.passed() && report.unimodular && regular.is_regular();
    if let Some(path) = output {
        let body = serde_json::to_string(&t.to_json(checks.clone())).expect("json");
        std::fs::write(path, body).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    }
    let results = json!({
        "d": d,
        "cells": t.num_cells(),
        "pool_points": t.vertices().len(),
        "checks": checks,
        "passed": ok,
    });
    Ok((json!({"d": d}), results, ok))
}

fn verify(max_d: usize, table: Option<&PathBuf>, budget: &Budget, exec: Exec) -> Result<(Value, Value, bool), Failure> {
    let (table, text) = match table {
        Some(path) => {
            let text = read(path)?;
            (ReferenceTable::parse(&text)?, Some(text))
        }
        None => (ReferenceTable::embedded(), None),
    };
    let rows = verify_table(&table, max_d, budget, exec)?;
    let ok = rows.iter().all(|r| r.passed());
    let results = json!({
        "max_d": max_d,
        "passed": ok,
        "rows": rows,
        "table": table,
    });
    Ok((json!({"max_d": max_d, "table": text}), results, ok))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut budget = Budget::default();
    if let Some(p) = cli.budget_points {
        budget.points = p;
    }
    if let Some(c) = cli.budget_cells {
        budget.cells = c;
    }
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    let start = Instant::now();
    let (name, outcome) = match &cli.command {
        Command::Build(args) => ("build", build(args)),
        Command::Hstar { d, method } => ("hstar", hstar(*d, *method, &budget, exec)),
        Command::Triangulate { d, output } => ("triangulate", triangulate(*d, output.as_ref(), &budget, exec)),
        Command::VerifyTable { max_d, table } => ("verify-table", verify(*max_d, table.as_ref(), &budget, exec)),
    };
    match outcome {
        Ok((inputs, results, ok)) => {
            let report = RunReport {
                command: name,
                inputs_digest: digest(&inputs),
                results,
                timings_ms: start.elapsed().as_secs_f64() * 1e3,
                budget: BudgetUsage {
                    points: budget.points,
                    cells: budget.cells,
                },
            };
            let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(&report).expect("json"));
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_MISMATCH)
            }
        }
        Err(f) => {
            eprintln!("{}", json!({"command": name, "error": f.message()}));
            ExitCode::from(f.exit_code())
        }
    }
}
