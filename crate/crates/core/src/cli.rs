//! Command-line front end.
//!
//! [`run`] parses arguments, performs one computation and returns the rendered
//! report together with the process exit code: 0 for a definite verdict,
//! 2 when a budget ran out and the verdict is `unknown`, 1 on input errors.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use crate::cpa::{self, CpaProduct};
use crate::eqn::{self, PairPolicy, PropertyF};
use crate::format::{AlgebraFile, ProductFile};
use crate::freelie::{build_free_nilpotent, witt_dimension};
use crate::liealg::catalog::{catalog, catalog_names};
use crate::liealg::LieAlgebraTable;
use crate::polysolve::{self, GroebnerBudget, SolveBudget, Ternary};

#[derive(Parser, Debug)]
#[command(name = "nilcpa", version, about = "Nilpotent Lie algebras and CPA structures, exactly")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Seed for randomly chosen generating pairs.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// S-pairs reduced before a Gröbner computation gives up.
    #[arg(long, global = true, default_value_t = GroebnerBudget::default().max_pairs)]
    pub budget_spairs: usize,
    /// Largest S-pair degree considered.
    #[arg(long, global = true, default_value_t = GroebnerBudget::default().max_degree)]
    pub budget_degree: u32,
    /// Wall-clock limit for Gröbner computations.
    #[arg(long, global = true)]
    pub budget_seconds: Option<f64>,
    /// Emit a single JSON object instead of text.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dimensions of F(g,c) for classes 1..=c.
    Dims { g: u64, c: u64 },
    /// Structure constants of F(g,c) on the Lyndon basis.
    Build { g: usize, c: usize },
    /// Series, center and invariants of an algebra.
    Info { algebra: String },
    /// Check the CPA axioms for a product file.
    CpaVerify { algebra: String, product: String },
    /// Solve for all CPA structures and decide whether they are central.
    CpaSolve { algebra: String },
    /// Test property F of a two-generated algebra.
    PropertyF {
        algebra: String,
        /// Random generating pairs tested besides the canonical one.
        #[arg(long, default_value_t = PairPolicy::default().random_pairs)]
        pairs: usize,
    },
    /// Solve the grid system on the canonical generators.
    Grid { algebra: String },
    /// Check the pair systems of F(2,c) for 3 <= c <= cmax.
    Conjecture {
        #[arg(long, default_value_t = 10)]
        cmax: usize,
    },
    /// Catalog access.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand, Debug)]
pub enum CatalogAction {
    /// Accepted names.
    List,
    /// Print the structure constants of a catalog algebra as an algebra file.
    Export { name: String },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
}

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

/// Rendered result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    definite: bool,
    json: Value,
    text: String,
}

impl Report {
    fn definite(json: Value, text: String) -> Self {
        Report {
            definite: true,
            json,
            text,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (rendered, String::new()) } else { (String::new(), rendered) };
            return Outcome { code, stdout, stderr };
        }
    };
    let json = cli.config.json;
    let result = match cli.config.threads {
        0 => execute(&cli.config, &cli.command),
        n => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&cli.config, &cli.command)),
            Err(e) => Err(input(e)),
        },
    };
    match result {
        Ok(report) => {
            let stdout = if json {
                let mut s = serde_json::to_string_pretty(&report.json).expect("serializable");
                s.push('\n');
                s
            } else {
                report.text
            };
            Outcome {
                code: if report.definite { 0 } else { 2 },
                stdout,
                stderr: String::new(),
            }
        }
        Err(CliError::Input(msg)) => {
            let stdout = if json {
                let mut s = serde_json::to_string_pretty(&json!({"verdict": "error", "error": msg}))
                    .expect("serializable");
                s.push('\n');
                s
            } else {
                String::new()
            };
            Outcome {
                code: 1,
                stdout,
                stderr: format!("error: {msg}\n"),
            }
        }
    }
}

/// A catalog algebra, or one read from an algebra file.
pub struct ResolvedAlgebra {
    pub table: LieAlgebraTable,
    pub free_nilpotent: Option<(usize, usize)>,
}

pub fn resolve_algebra(arg: &str) -> Result<ResolvedAlgebra, CliError> {
    let path = Path::new(arg);
    if path.is_file() || arg.ends_with(".json") {
        let text = std::fs::read_to_string(path).map_err(|e| input(format!("{arg}: {e}")))?;
        let file: AlgebraFile = serde_json::from_str(&text).map_err(|e| input(format!("{arg}: {e}")))?;
        let table = LieAlgebraTable::from_file(&file).map_err(|e| input(format!("{arg}: {e}")))?;
        return Ok(ResolvedAlgebra {
            table,
            free_nilpotent: None,
        });
    }
    let entry = catalog(arg).map_err(input)?;
    Ok(ResolvedAlgebra {
        table: entry.table,
        free_nilpotent: entry.free_nilpotent,
    })
}

fn solve_budget(config: &RunConfig) -> SolveBudget {
    let deadline = config
        .budget_seconds
        .map(|s| Instant::now() + Duration::from_secs_f64(s.max(0.0)));
    SolveBudget {
        groebner: GroebnerBudget {
            max_pairs: config.budget_spairs,
            max_degree: config.budget_degree,
            deadline,
        },
        ..SolveBudget::default()
    }
}

fn ternary_str(t: Ternary) -> &'static str {
    match t {
        Ternary::Yes => "yes",
        Ternary::No => "no",
        Ternary::Unknown => "unknown",
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn products_text(p: &CpaProduct) -> String {
    let t = p.algebra();
    let mut out = String::new();
    for ((i, j), v) in cpa::nonzero_products(p) {
        let _ = writeln!(out, "  {} . {} = {}", t.name(i), t.name(j), t.format_vector(&v));
    }
    if out.is_empty() {
        out.push_str("  (all products zero)\n");
    }
    out
}

fn execute(config: &RunConfig, command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Dims { g, c } => dims(*g, *c),
        Command::Build { g, c } => build(*g, *c),
        Command::Info { algebra } => info(&resolve_algebra(algebra)?.table),
        Command::CpaVerify { algebra, product } => cpa_verify(resolve_algebra(algebra)?.table, product),
        Command::CpaSolve { algebra } => cpa_solve(resolve_algebra(algebra)?.table, &solve_budget(config)),
        Command::PropertyF { algebra, pairs } => {
            let resolved = resolve_algebra(algebra)?;
            let policy = PairPolicy {
                random_pairs: *pairs,
                seed: config.seed,
                transitive: matches!(resolved.free_nilpotent, Some((2, _))),
                ..PairPolicy::default()
            };
            property_f(&resolved.table, &policy)
        }
        Command::Grid { algebra } => grid(&resolve_algebra(algebra)?.table),
        Command::Conjecture { cmax } => conjecture(*cmax, &solve_budget(config)),
        Command::Catalog { action } => match action {
            CatalogAction::List => Ok(catalog_list()),
            CatalogAction::Export { name } => {
                let entry = catalog(name).map_err(input)?;
                let file = entry.table.to_file();
                let text = serde_json::to_string_pretty(&file).expect("serializable") + "\n";
                Ok(Report::definite(json!({"verdict": "ok", "name": name, "algebra": file}), text))
            }
        },
    }
}

fn dims(g: u64, c: u64) -> Result<Report, CliError> {
    if g == 0 || c == 0 {
        return Err(input("g and c must be positive"));
    }
    let w = witt_dimension(g, c);
    let cumulative: Vec<String> = w.cumulative().iter().map(ToString::to_string).collect();
    let graded: Vec<String> = w.per_degree.iter().map(ToString::to_string).collect();
    let text = format!(
        "{}\ndim F({g},{c}) = {}, center dimension {}\n",
        cumulative.join(","),
        w.total(),
        w.center_dim()
    );
    let json = json!({
        "verdict": "ok",
        "generators": g,
        "class": c,
        "graded": graded,
        "cumulative": cumulative,
        "dim": w.total().to_string(),
        "center_dim": w.center_dim().to_string(),
    });
    Ok(Report::definite(json, text))
}

fn build(g: usize, c: usize) -> Result<Report, CliError> {
    let p = build_free_nilpotent(g, c).map_err(input)?;
    let file = p.to_file();
    let degrees: Vec<usize> = (0..p.dim()).map(|i| p.degree(i)).collect();
    let text = serde_json::to_string_pretty(&file).expect("serializable") + "\n";
    let json = json!({"verdict": "ok", "generators": g, "class": c, "degrees": degrees, "algebra": file});
    Ok(Report::definite(json, text))
}

fn info(t: &LieAlgebraTable) -> Result<Report, CliError> {
    t.validate().map_err(input)?;
    let series = t.series();
    let inv = t.invariants();
    let mut text = String::new();
    let _ = writeln!(text, "dimension {}", t.dim());
    let _ = writeln!(text, "basis {}", t.names().join(" "));
    let _ = writeln!(text, "brackets");
    for (i, j, _) in t.nonzero_brackets() {
        let v = t.bracket_with_basis(i, &crate::exact::unit_vector(t.dim(), j));
        let _ = writeln!(text, "  [{}, {}] = {}", t.name(i), t.name(j), t.format_vector(&v));
    }
    let _ = writeln!(text, "lower central series dims {}", join(&series.lower_central_dims()));
    let _ = writeln!(text, "lower central quotients {}", join(&series.lower_central_quotient_dims()));
    let _ = writeln!(text, "derived series dims {}", join(&series.derived_dims()));
    match series.nilpotency_class {
        Some(c) => {
            let _ = writeln!(text, "nilpotent of class {c}");
        }
        None => {
            let _ = writeln!(text, "not nilpotent");
        }
    }
    let _ = writeln!(text, "center dim {}, commutator dim {}", series.center.dim(), series.commutator.dim());
    let _ = writeln!(text, "stem {}, z = {}", yes_no(inv.is_stem), inv.z_ratio);
    let json = json!({
        "verdict": "ok",
        "dim": t.dim(),
        "names": t.names(),
        "algebra": t.to_file(),
        "lower_central_dims": series.lower_central_dims(),
        "lower_central_quotient_dims": series.lower_central_quotient_dims(),
        "derived_dims": series.derived_dims(),
        "nilpotency_class": series.nilpotency_class,
        "center_dim": series.center.dim(),
        "commutator_dim": series.commutator.dim(),
        "invariants": inv,
    });
    Ok(Report::definite(json, text))
}

fn cpa_verify(t: LieAlgebraTable, product: &str) -> Result<Report, CliError> {
    let raw = std::fs::read_to_string(product).map_err(|e| input(format!("{product}: {e}")))?;
    let file: ProductFile = serde_json::from_str(&raw).map_err(|e| input(format!("{product}: {e}")))?;
    let p = CpaProduct::from_file(Arc::new(t), &file).map_err(input)?;
    let report = cpa::verify(&p);
    let fitting = cpa::fitting_null(&p).dim();
    let verdict = yes_no(report.is_cpa());
    let mut text = format!("CPA structure: {verdict}\n");
    for (label, v) in [
        ("symmetry", &report.symmetry),
        ("representation identity", &report.representation),
        ("derivation identity", &report.derivation),
    ] {
        match v {
            None => {
                let _ = writeln!(text, "  {label}: ok");
            }
            Some(v) => {
                let idx: Vec<&str> = v.indices.iter().map(|&i| p.algebra().name(i)).collect();
                let _ = writeln!(
                    text,
                    "  {label}: fails at ({}) with residual {}",
                    idx.join(", "),
                    p.algebra().format_vector(&v.residual)
                );
            }
        }
    }
    let _ = writeln!(text, "complete {}", yes_no(report.is_complete));
    let _ = writeln!(text, "central {}", yes_no(report.is_central));
    let _ = writeln!(text, "g.Z(g) = 0 {}", yes_no(report.g_z_is_zero));
    let _ = writeln!(text, "g.[g,g] = 0 {}", yes_no(report.g_comm_is_zero));
    let _ = writeln!(text, "Fitting null component dim {fitting}");
    text.push_str("products\n");
    text.push_str(&products_text(&p));
    let json = json!({"verdict": verdict, "report": report, "fitting_null_dim": fitting});
    Ok(Report::definite(json, text))
}

fn cpa_solve(t: LieAlgebraTable, budget: &SolveBudget) -> Result<Report, CliError> {
    t.validate().map_err(input)?;
    let t = Arc::new(t);
    let center = t.center();
    let variety = polysolve::solve_cpa(t.clone(), budget);
    let central = polysolve::variety_is_central(&variety, &center, budget);
    let verdict = ternary_str(central.verdict);
    let export = variety.export();
    let mut text = String::new();
    let _ = writeln!(text, "unknowns {}, parameters {}", export.unknowns, export.parameters);
    let _ = writeln!(text, "quadratic conditions {}", export.quadratic.len());
    let _ = writeln!(text, "status {}", serde_json::to_value(export.status).expect("enum").as_str().unwrap_or(""));
    let _ = writeln!(text, "non-central linear forms {}", central.noncentral_forms);
    let _ = writeln!(text, "all CPA structures central: {verdict}");
    let witness = central.witness.as_ref().map(|w| {
        let _ = writeln!(text, "witness (central {}, g.Z(g) = 0 {})", yes_no(w.central), yes_no(w.g_z_is_zero));
        text.push_str(&products_text(&w.product));
        json!({
            "parameters": w.parameters,
            "central": w.central,
            "g_z_is_zero": w.g_z_is_zero,
            "product": w.product.to_file(None),
        })
    });
    let json = json!({
        "verdict": verdict,
        "noncentral_forms": central.noncentral_forms,
        "variety": export,
        "witness": witness,
    });
    Ok(Report {
        definite: central.verdict != Ternary::Unknown,
        json,
        text,
    })
}

fn property_f(t: &LieAlgebraTable, policy: &PairPolicy) -> Result<Report, CliError> {
    t.validate().map_err(input)?;
    let report = eqn::has_property_f(t, policy).map_err(input)?;
    let verdict = serde_json::to_value(report.verdict).expect("enum");
    let mut text = format!("property F: {}\n", verdict.as_str().unwrap_or(""));
    let _ = writeln!(text, "z = {}{}", report.z_ratio, if report.obstructed { " (< 1/3)" } else { "" });
    let _ = writeln!(text, "pairs tested {}", report.pairs.len());
    if let Some(w) = &report.witness {
        let _ = writeln!(text, "non-central solution");
        for (label, v) in [("x", &w.x), ("y", &w.y), ("u", &w.u), ("v", &w.v), ("w", &w.w)] {
            let _ = writeln!(text, "  {label} = {}", t.format_vector(v));
        }
    }
    if report.verdict == PropertyF::TrueForTestedPairs {
        text.push_str("(not certified for all generating pairs)\n");
    }
    let json = json!({
        "verdict": verdict,
        "z_ratio": report.z_ratio,
        "obstructed": report.obstructed,
        "pairs": report.pairs,
        "witness": report.witness,
    });
    Ok(Report::definite(json, text))
}

fn grid(t: &LieAlgebraTable) -> Result<Report, CliError> {
    t.validate().map_err(input)?;
    let generators = eqn::canonical_generators(t);
    let system = eqn::solve_grid(t, &generators).map_err(input)?;
    let center = t.center();
    let central = system.is_central(&center);
    let equal = system.equals_central_assignments(&center);
    let verdict = yes_no(central);
    let text = format!(
        "generators {}\nsystem {} x {}\nsolution dim {}\nall solutions central: {verdict}\nequals central assignments: {}\n",
        generators.len(),
        system.rows,
        system.cols,
        system.solution.dim(),
        yes_no(equal)
    );
    let json = json!({
        "verdict": verdict,
        "generators": generators.len(),
        "rows": system.rows,
        "cols": system.cols,
        "solution_dim": system.solution.dim(),
        "central_assignment_dim": system.central_assignments(&center).dim(),
        "equals_central_assignments": equal,
    });
    Ok(Report::definite(json, text))
}

fn conjecture(cmax: usize, budget: &SolveBudget) -> Result<Report, CliError> {
    let report = eqn::conjecture_scan(cmax, budget).map_err(input)?;
    let verdict = match report.base_case.central {
        Ternary::Unknown if report.classes.iter().all(|c| c.central) => Ternary::Unknown,
        _ => {
            if report.all_central {
                Ternary::Yes
            } else {
                Ternary::No
            }
        }
    };
    let mut text = String::from("class   dim  center  [g,g]   rows   cols  solutions  central\n");
    for c in &report.classes {
        let _ = writeln!(
            text,
            "{:>5} {:>5} {:>7} {:>6} {:>6} {:>6} {:>10}  {}",
            c.class,
            c.dim,
            c.center_dim,
            c.commutator_dim,
            c.system_rows,
            c.system_cols,
            c.solution_dim,
            c.central
        );
    }
    let _ = writeln!(
        text,
        "base case F(2,{}): {} parameters, central {}",
        report.base_case.class,
        report.base_case.parameters,
        ternary_str(report.base_case.central)
    );
    let _ = writeln!(text, "all central: {}", ternary_str(verdict));
    let json = json!({
        "verdict": ternary_str(verdict),
        "classes": report.classes,
        "base_case": report.base_case,
        "reasoning": report.reasoning,
    });
    Ok(Report {
        definite: verdict != Ternary::Unknown,
        json,
        text,
    })
}

fn catalog_list() -> Report {
    let names = catalog_names();
    let mut text = String::new();
    for (pattern, description) in &names {
        let _ = writeln!(text, "{pattern:<12} {description}");
    }
    let entries: Vec<Value> = names
        .iter()
        .map(|(pattern, description)| json!({"name": pattern, "description": description}))
        .collect();
    Report::definite(json!({"verdict": "ok", "entries": entries}), text)
}
