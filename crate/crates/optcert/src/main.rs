use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use optcert_core::constants::{eta, gn_constant_with, q_of_r, BoundSelection};
use optcert_core::experiments::{nodal_fields, run_scenario, Case, Desired, Example, ScenarioResult, ScenarioSpec, DEFAULT_ALPHAS};
use optcert_core::fem::NormQuadrature;
use optcert_core::kkt::DesiredLoad;
use optcert_core::nonlinearity::Nonlinearity;
use optcert::{featured_alphas, parse_alphas, scenario_tag, sci, write_field, write_mesh, write_table, Selection};

#[derive(Parser)]
#[command(name = "optcert", version, about = "Solve and certify discretized semilinear optimal control problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run alpha sweeps and write the certificate table as CSV.
    Run(RunArgs),
    /// Print the Gagliardo-Nirenberg bounds at exponent q.
    Constants {
        #[arg(long)]
        q: f64,
        #[arg(long, value_enum, default_value_t = BoundArg::Product)]
        bound: BoundArg,
    },
    /// Print the certificate threshold eta(alpha, r) for a given M.
    Eta {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        r: f64,
        #[arg(long = "M")]
        m: f64,
        #[arg(long, value_enum, default_value_t = BoundArg::Product)]
        bound: BoundArg,
    },
}

#[derive(Parser)]
struct RunArgs {
    /// cubic, quintic or a comma list.
    #[arg(long, value_delimiter = ',', required = true)]
    example: Vec<String>,
    /// unconstrained, control, state, neitzel or a comma list.
    #[arg(long, value_delimiter = ',', required = true)]
    case: Vec<String>,
    /// a1, a2 or a comma list; not needed for the neitzel case.
    #[arg(long, value_delimiter = ',')]
    desired: Vec<String>,
    /// Comma-separated alpha values (sorted descending before the sweep).
    #[arg(long)]
    alphas: Option<String>,
    #[arg(long, default_value_t = 32)]
    n: usize,
    /// Table path. With several scenarios the scenario name is appended to the file stem.
    #[arg(long)]
    out: PathBuf,
    /// Directory for mesh and nodal field CSVs.
    #[arg(long)]
    fields_out: Option<PathBuf>,
    /// Alphas to export fields for; defaults to the featured values of each scenario.
    #[arg(long)]
    fields_alphas: Option<String>,
    /// Sample the clamped control at quadrature points instead of splitting triangles.
    #[arg(long)]
    approx_clamp: bool,
    /// Newton iteration budget per alpha.
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
    /// Number of scenarios solved in parallel.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Override the nonlinearity: cubic, quintic or power:<k>.
    #[arg(long)]
    phi: Option<String>,
    #[arg(long, value_enum, default_value_t = NormArg::Exact)]
    norm: NormArg,
    /// Quadrature of the desired-state load in the adjoint equation.
    #[arg(long, value_enum, default_value_t = LoadArg::Centroid)]
    desired_load: LoadArg,
    /// Suppress the table on stdout.
    #[arg(long, short)]
    quiet: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundArg {
    Product,
    Minimum,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormArg {
    Exact,
    Centroid,
}

#[derive(Clone, Copy, ValueEnum)]
enum LoadArg {
    Quadrature,
    Centroid,
}

impl From<BoundArg> for BoundSelection {
    fn from(b: BoundArg) -> Self {
        match b {
            BoundArg::Product => BoundSelection::Product,
            BoundArg::Minimum => BoundSelection::Minimum,
        }
    }
}

fn main() -> ExitCode {
    // exit code 2 is reserved for failed sweep rows
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

/// `Ok(false)` when some sweep row failed.
fn dispatch(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run(args) => run(&args),
        Command::Constants { q, bound } => {
            let b = gn_constant_with(q, bound.into())?;
            let opt = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), sci);
            println!("q        {}", sci(b.q));
            println!("theta    {}", sci(b.theta));
            println!("C1       {}", opt(b.c1));
            println!("C2       {}", opt(b.c2));
            println!("C3       {}  ({} factors)", sci(b.c3), b.truncation_terms);
            println!("minimum  {}  ({:?})", sci(b.minimum), b.attained_by);
            println!("C_q      {}  ({:?})", sci(b.c_q), b.selection);
            println!("1/C_q    {}", sci(1.0 / b.c_q));
            println!("C_q^-1/2 {}", sci(1.0 / b.c_q.sqrt()));
            Ok(true)
        }
        Command::Eta { alpha, r, m, bound } => {
            let b = gn_constant_with(q_of_r(r)?, bound.into())?;
            let t = eta(alpha, r, m, b.c_q)?;
            if t.unbounded {
                println!("inf");
            } else {
                println!("{}", sci(t.value));
            }
            Ok(true)
        }
    }
}

fn parse_list<T: std::str::FromStr<Err = optcert_core::Error>>(items: &[String]) -> Result<Vec<T>> {
    items.iter().map(|s| s.trim().parse::<T>().map_err(Into::into)).collect()
}

fn table_path(out: &Path, tag: &str, several: bool) -> PathBuf {
    if !several {
        return out.to_path_buf();
    }
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("table");
    let ext = out.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    out.with_file_name(format!("{stem}_{tag}.{ext}"))
}

fn run(args: &RunArgs) -> Result<bool> {
    let selection = Selection {
        examples: parse_list::<Example>(&args.example)?,
        cases: parse_list::<Case>(&args.case)?,
        desired: parse_list::<Desired>(&args.desired)?,
    };
    let alphas = match &args.alphas {
        Some(s) => parse_alphas(s)?,
        None => DEFAULT_ALPHAS.to_vec(),
    };
    let phi = args.phi.as_deref().map(Nonlinearity::parse).transpose()?;
    let mut specs = selection.expand(&alphas, args.n)?;
    for s in &mut specs {
        s.exact_clamp = !args.approx_clamp;
        s.max_iter = args.max_iter;
        s.phi = phi.clone();
        s.norm = match args.norm {
            NormArg::Exact => NormQuadrature::Exact,
            NormArg::Centroid => NormQuadrature::Centroid,
        };
        s.desired_load = match args.desired_load {
            LoadArg::Quadrature => DesiredLoad::Quadrature,
            LoadArg::Centroid => DesiredLoad::Centroid,
        };
    }
    if args.jobs == 0 {
        bail!("--jobs must be at least 1");
    }
    if let Some(dir) = &args.fields_out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let field_alphas = args.fields_alphas.as_deref().map(parse_alphas).transpose()?;

    let results: Vec<Mutex<Option<Result<ScenarioResult>>>> = specs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..args.jobs.min(specs.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= specs.len() {
                    break;
                }
                let r = run_scenario(&specs[i]).map_err(anyhow::Error::from);
                *results[i].lock().unwrap() = Some(r);
            });
        }
    });

    let several = specs.len() > 1;
    let mut all_ok = true;
    for (spec, slot) in specs.iter().zip(results) {
        let result = slot.into_inner().unwrap().expect("scenario ran")?;
        let tag = scenario_tag(spec);
        let path = table_path(&args.out, &tag, several);
        let file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        write_table(file, &result)?;
        if !args.quiet {
            print_table(&tag, &result)?;
        }
        for row in &result.rows {
            if let Err(e) = &row.outcome {
                eprintln!("{tag}: alpha {} failed: {e}", sci(row.alpha));
                all_ok = false;
            }
        }
        if let Some(dir) = &args.fields_out {
            export_fields(dir, spec, &tag, &result, field_alphas.as_deref())?;
        }
    }
    Ok(all_ok)
}

fn print_table(tag: &str, result: &ScenarioResult) -> Result<()> {
    let mut out = io::stdout().lock();
    writeln!(out, "# {tag}")?;
    write_table(&mut out, result)?;
    Ok(())
}

fn export_fields(dir: &Path, spec: &ScenarioSpec, tag: &str, result: &ScenarioResult, wanted: Option<&[f64]>) -> Result<()> {
    write_mesh(dir, &result.mesh)?;
    let wanted = wanted.map_or_else(|| featured_alphas(spec), <[f64]>::to_vec);
    let close = |a: f64, b: f64| ((a - b) / b).abs() < 1e-12;
    for row in &result.rows {
        if !wanted.iter().any(|&a| close(a, row.alpha)) {
            continue;
        }
        let Ok(d) = &row.outcome else { continue };
        for (name, f) in nodal_fields(&d.solution, &result.mesh) {
            let path = dir.join(format!("{tag}_alpha{:e}_{name}.csv", row.alpha));
            write_field(&path, &result.mesh, &f)?;
        }
    }
    Ok(())
}
