//! `mzvodd`: exact matrices, kernels, relations and verification suites for
//! totally odd depth-graded multiple zeta values.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use mzvodd::cache::{matrix_cached, Cache};
use mzvodd::indices::{index_count, IndexSet};
use mzvodd::linalg::{left_kernel, right_kernel, KernelSide};
use mzvodd::matrix::MatrixKind;
use mzvodd::verify::{run_suite, Status, Suite, SuiteOptions};
use mzvodd::{ihara, io, period, relations, report, series};

#[derive(Parser)]
#[command(name = "mzvodd", version, about, disable_help_subcommand = true)]
struct Cli {
    /// Output format; commands reject formats they cannot render.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Cache directory for matrix/kernel files (also MZVODD_CACHE).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Worker pool size for verification suites.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Weight sweep limit for verify and report.
    #[arg(long, global = true)]
    max_weight: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
    Markdown,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the totally odd index set S_{N,r}.
    Indices(IndicesArgs),
    /// Evaluate a single b, e or c coefficient.
    Coeff(CoeffArgs),
    /// Build one of the matrices E, Eq, C, F.
    Matrix(MatrixArgs),
    /// Compute a left or right kernel basis.
    Kernel(KernelArgs),
    /// Emit certified relations among totally odd values.
    Relations(PairArgs),
    /// Period polynomial spaces and their checks.
    #[command(name = "period-poly")]
    PeriodPoly(PeriodArgs),
    /// Coefficient tables of O(x), S(x) and the BK rows.
    Series(SeriesArgs),
    /// Run a named verification suite.
    Verify(VerifyArgs),
    /// Rank/kernel/BK summary grid.
    Report,
}

#[derive(Args)]
struct IndicesArgs {
    #[arg(long)]
    weight: u32,
    #[arg(long)]
    depth: usize,
    /// Print only |S_{N,r}|.
    #[arg(long)]
    count_only: bool,
}

#[derive(Args)]
struct CoeffArgs {
    #[arg(long, value_enum)]
    kind: CoeffKind,
    /// Comma-separated parts, e.g. "5,3,7" (a single integer for kind b).
    #[arg(long)]
    m: String,
    /// Comma-separated parts; two integers "n,n'" for kind b.
    #[arg(long)]
    n: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoeffKind {
    B,
    E,
    C,
}

#[derive(Args)]
struct MatrixArgs {
    #[arg(long, value_enum)]
    kind: MatrixKindArg,
    #[arg(long)]
    weight: u32,
    #[arg(long)]
    depth: usize,
    /// Block parameter for kind Eq (2 <= q <= r).
    #[arg(long)]
    q: Option<usize>,
    /// Write to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixKindArg {
    #[value(name = "E")]
    E,
    #[value(name = "Eq")]
    Eq,
    #[value(name = "C")]
    C,
    #[value(name = "F")]
    F,
}

impl From<MatrixKindArg> for MatrixKind {
    fn from(k: MatrixKindArg) -> MatrixKind {
        match k {
            MatrixKindArg::E => MatrixKind::E,
            MatrixKindArg::Eq => MatrixKind::Eq,
            MatrixKindArg::C => MatrixKind::C,
            MatrixKindArg::F => MatrixKind::F,
        }
    }
}

#[derive(Args)]
struct KernelArgs {
    #[arg(long, value_enum)]
    side: SideArg,
    /// Read the matrix from a v1 file instead of building it.
    #[arg(long, conflicts_with_all = ["kind", "weight", "depth", "q"])]
    matrix: Option<PathBuf>,
    #[arg(long, value_enum, requires = "weight", requires = "depth")]
    kind: Option<MatrixKindArg>,
    #[arg(long)]
    weight: Option<u32>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Args)]
struct PairArgs {
    #[arg(long)]
    weight: u32,
    #[arg(long)]
    depth: usize,
}

#[derive(Args)]
struct PeriodArgs {
    #[arg(long)]
    weight: u32,
    #[arg(long)]
    depth: usize,
    /// Run a named check instead of printing the basis.
    #[arg(long, value_enum)]
    check: Option<PeriodCheck>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PeriodCheck {
    Prop35,
    Thm37,
    Surjectivity,
}

#[derive(Args)]
struct SeriesArgs {
    #[arg(long, value_enum)]
    which: SeriesWhich,
    /// Truncation order.
    #[arg(long, default_value_t = 40)]
    order: usize,
    /// Row selector for the BK table.
    #[arg(long)]
    depth: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeriesWhich {
    #[value(name = "O")]
    O,
    #[value(name = "S")]
    S,
    #[value(name = "BK")]
    Bk,
}

#[derive(Args)]
struct VerifyArgs {
    /// One of: prop33, prop35, thm37, cor36, cor38, lemma41, cor42, eq418,
    /// lyndon, dm, bk, surjectivity.
    #[arg(long)]
    suite: String,
    /// Restrict the sweep to a single weight.
    #[arg(long)]
    weight: Option<u32>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let cache = Cache::from_flag_or_env(cli.cache_dir.clone())?;
    match &cli.command {
        Command::Indices(args) => cmd_indices(&cli, args)?,
        Command::Coeff(args) => cmd_coeff(&cli, args, cache.as_ref())?,
        Command::Matrix(args) => cmd_matrix(&cli, args, cache.as_ref())?,
        Command::Kernel(args) => cmd_kernel(&cli, args, cache.as_ref())?,
        Command::Relations(args) => cmd_relations(&cli, args)?,
        Command::PeriodPoly(args) => cmd_period(&cli, args)?,
        Command::Series(args) => cmd_series(&cli, args)?,
        Command::Verify(args) => return cmd_verify(&cli, args),
        Command::Report => cmd_report(&cli, cache.as_ref())?,
    }
    Ok(ExitCode::SUCCESS)
}

fn reject_format(cli: &Cli, allowed: &[Format]) -> Result<()> {
    if allowed.contains(&cli.format) {
        Ok(())
    } else {
        bail!("this subcommand does not support the requested output format")
    }
}

fn cmd_indices(cli: &Cli, args: &IndicesArgs) -> Result<()> {
    let set = IndexSet::shared(args.weight, args.depth);
    if args.count_only {
        match cli.format {
            Format::Json => println!(
                "{}",
                serde_json::json!({
                    "weight": args.weight,
                    "depth": args.depth,
                    "count": index_count(args.weight, args.depth),
                })
            ),
            _ => println!("{}", index_count(args.weight, args.depth)),
        }
        return Ok(());
    }
    match cli.format {
        Format::Text => {
            for idx in set.members() {
                println!("{idx}");
            }
        }
        Format::Csv => {
            for idx in set.members() {
                let parts: Vec<String> = idx.parts().iter().map(u32::to_string).collect();
                println!("{}", parts.join(","));
            }
        }
        Format::Json => {
            let members: Vec<Vec<u32>> =
                set.members().iter().map(|i| i.parts().to_vec()).collect();
            println!(
                "{}",
                serde_json::json!({
                    "weight": args.weight,
                    "depth": args.depth,
                    "count": members.len(),
                    "members": members,
                })
            );
        }
        Format::Markdown => bail!("indices supports text, csv or json output"),
    }
    Ok(())
}

fn parse_tuple(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|_| anyhow!("invalid part {t:?}")))
        .collect()
}

fn cmd_coeff(cli: &Cli, args: &CoeffArgs, cache: Option<&Cache>) -> Result<()> {
    reject_format(cli, &[Format::Text, Format::Json])?;
    let m = parse_tuple(&args.m)?;
    let n = parse_tuple(&args.n)?;
    let value = match args.kind {
        CoeffKind::B => {
            if m.len() != 1 || n.len() != 2 {
                bail!("kind b expects --m with one part and --n with two");
            }
            ihara::b_coeff(m[0], n[0], n[1])
        }
        CoeffKind::E => {
            if m.len() != n.len() {
                bail!("kind e expects tuples of equal length");
            }
            ihara::e_coeff(&m, &n)
        }
        CoeffKind::C => {
            if m.len() != n.len() {
                bail!("kind c expects tuples of equal length");
            }
            c_coeff_production(&m, &n, cache)?
        }
    };
    match cli.format {
        Format::Json => println!("{}", serde_json::json!({ "value": value.to_string() })),
        _ => println!("{value}"),
    }
    Ok(())
}

/// Production route for `c`: the matrix factorization when both tuples are
/// totally odd labels, the nested expansion otherwise.
fn c_coeff_production(m: &[u32], n: &[u32], cache: Option<&Cache>) -> Result<num_bigint::BigInt> {
    let weight: u32 = m.iter().sum();
    let depth = m.len();
    let labels = IndexSet::shared(weight, depth);
    let m_idx = mzvodd::indices::OddIndex::new(m.to_vec()).ok();
    let n_idx = mzvodd::indices::OddIndex::new(n.to_vec()).ok();
    if let (Some(mi), Some(ni)) = (m_idx, n_idx) {
        if labels.position(&mi).is_some() && labels.position(&ni).is_some() {
            let c = matrix_cached(cache, MatrixKind::C, weight, depth, None)?;
            return Ok(c.entry(&mi, &ni).expect("labeled entry").clone());
        }
    }
    Ok(ihara::c_coeff(m, n))
}

fn cmd_matrix(cli: &Cli, args: &MatrixArgs, cache: Option<&Cache>) -> Result<()> {
    reject_format(cli, &[Format::Text, Format::Json])?;
    let kind: MatrixKind = args.kind.into();
    if kind == MatrixKind::Eq && args.q.is_none() {
        bail!("kind Eq requires --q");
    }
    let m = matrix_cached(cache, kind, args.weight, args.depth, args.q)?;
    let payload = match cli.format {
        Format::Json => {
            let rows: Vec<Vec<String>> = (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| m.get(i, j).to_string()).collect())
                .collect();
            serde_json::json!({
                "kind": m.kind().as_str(),
                "weight": args.weight,
                "depth": args.depth,
                "q": args.q,
                "rows": rows,
            })
            .to_string()
                + "\n"
        }
        _ => io::matrix_to_string(&m),
    };
    emit(&args.out, &payload)
}

fn cmd_kernel(cli: &Cli, args: &KernelArgs, cache: Option<&Cache>) -> Result<()> {
    reject_format(cli, &[Format::Text, Format::Json])?;
    let side = match args.side {
        SideArg::Left => KernelSide::Left,
        SideArg::Right => KernelSide::Right,
    };
    let kb = if let Some(path) = &args.matrix {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading matrix file {}", path.display()))?;
        let m = io::matrix_from_str(&text)?;
        match side {
            KernelSide::Left => left_kernel(&m),
            KernelSide::Right => right_kernel(&m),
        }
    } else {
        let kind: MatrixKind = args
            .kind
            .ok_or_else(|| anyhow!("kernel needs --matrix FILE or --kind/--weight/--depth"))?
            .into();
        let weight = args.weight.ok_or_else(|| anyhow!("missing --weight"))?;
        let depth = args.depth.ok_or_else(|| anyhow!("missing --depth"))?;
        match cache {
            Some(c) => c.kernel(side, kind, weight, depth, args.q)?,
            None => {
                let m = mzvodd::cache::build_matrix(kind, weight, depth, args.q)?;
                match side {
                    KernelSide::Left => left_kernel(&m),
                    KernelSide::Right => right_kernel(&m),
                }
            }
        }
    };
    let payload = match cli.format {
        Format::Json => {
            let vectors: Vec<Vec<String>> = kb
                .vectors
                .iter()
                .map(|v| {
                    v.integer_entries()
                        .expect("kernel vectors are integral")
                        .iter()
                        .map(|x| x.to_string())
                        .collect()
                })
                .collect();
            serde_json::json!({
                "side": kb.side.as_str(),
                "dim": kb.dim(),
                "vectors": vectors,
            })
            .to_string()
                + "\n"
        }
        _ => io::kernel_to_string(&kb),
    };
    emit(&args.out, &payload)
}

fn emit(out: &Option<PathBuf>, payload: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, payload)
                .with_context(|| format!("writing {}", path.display()))?;
        }
        None => print!("{payload}"),
    }
    Ok(())
}

fn cmd_relations(cli: &Cli, args: &PairArgs) -> Result<()> {
    reject_format(cli, &[Format::Text, Format::Json])?;
    let rels = relations::relations_for(args.weight, args.depth);
    match cli.format {
        Format::Json => {
            let json: Vec<_> = rels.iter().map(relations::Relation::to_json).collect();
            println!("{}", serde_json::to_string(&json)?);
        }
        _ => {
            for rel in &rels {
                println!("[{}] {}", rel.source.as_str(), rel.display());
            }
        }
    }
    Ok(())
}

fn cmd_period(cli: &Cli, args: &PeriodArgs) -> Result<()> {
    reject_format(cli, &[Format::Text, Format::Json])?;
    match args.check {
        None => {
            let w = period::build_w(args.weight, args.depth)
                .map_err(|e| anyhow!("{e}"))?;
            match cli.format {
                Format::Json => {
                    let basis: Vec<String> = w.basis.iter().map(|p| p.to_string()).collect();
                    println!(
                        "{}",
                        serde_json::json!({
                            "weight": w.weight,
                            "depth": w.depth,
                            "dim": w.dim(),
                            "basis": basis,
                        })
                    );
                }
                _ => {
                    println!("dim W_({},{}) = {}", w.weight, w.depth, w.dim());
                    for p in &w.basis {
                        println!("{p}");
                    }
                }
            }
        }
        Some(PeriodCheck::Prop35) => {
            let report = period::check_prop35(args.weight);
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string(&report)?),
                _ => println!(
                    "prop35 N={}: dim W = {}, dim ker = {}, equal = {}",
                    report.weight,
                    report.dim_w,
                    report.dim_kernel,
                    report.equal()
                ),
            }
        }
        Some(PeriodCheck::Thm37) => {
            let t = period::theorem37_images(args.weight, args.depth)
                .map_err(|e| anyhow!("{e}"))?;
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::json!({
                        "weight": t.weight,
                        "depth": t.depth,
                        "dim_w": t.dim_w,
                        "all_annihilate": t.all_annihilate,
                        "independent": t.independent,
                    })
                ),
                _ => println!(
                    "thm37 N={} r={}: dim W = {}, annihilate = {}, independent = {}",
                    t.weight, t.depth, t.dim_w, t.all_annihilate, t.independent
                ),
            }
        }
        Some(PeriodCheck::Surjectivity) => {
            let s = period::check_surjectivity(args.weight, args.depth)
                .map_err(|e| anyhow!("{e}"))?;
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string(&s)?),
                _ => println!(
                    "surjectivity N={} r={}: dim ker E = {}, predicted = {}, observed {}",
                    s.weight,
                    s.depth,
                    s.kernel_dim,
                    s.predicted,
                    if s.equal { "equal" } else { "different" }
                ),
            }
        }
    }
    Ok(())
}

fn cmd_series(cli: &Cli, args: &SeriesArgs) -> Result<()> {
    reject_format(cli, &[Format::Text, Format::Json, Format::Csv])?;
    let rows: Vec<(usize, mzvodd::series::IntSeries)> = match (args.which, args.depth) {
        (SeriesWhich::O, _) => vec![(1, series::series_o(args.order))],
        (SeriesWhich::S, _) => vec![(0, series::series_s(args.order))],
        (SeriesWhich::Bk, Some(r)) => vec![(r, series::bk_row(r, args.order))],
        (SeriesWhich::Bk, None) => series::bk_table(args.order, 4)
            .into_iter()
            .enumerate()
            .collect(),
    };
    match cli.format {
        Format::Json => {
            let table: Vec<_> = rows
                .iter()
                .map(|(r, s)| {
                    let coeffs: Vec<String> =
                        s.coeffs().iter().map(|c| c.to_string()).collect();
                    serde_json::json!({ "depth": r, "coefficients": coeffs })
                })
                .collect();
            println!("{}", serde_json::to_string(&table)?);
        }
        Format::Csv => {
            println!("depth,exponent,coefficient");
            for (r, s) in &rows {
                for (n, c) in s.coeffs().iter().enumerate() {
                    println!("{r},{n},{c}");
                }
            }
        }
        _ => {
            for (r, s) in &rows {
                let label = match args.which {
                    SeriesWhich::O => "O".to_string(),
                    SeriesWhich::S => "S".to_string(),
                    SeriesWhich::Bk => format!("BK row {r}"),
                };
                println!("# {label}");
                for (n, c) in s.coeffs().iter().enumerate() {
                    if !c.to_string().eq("0") {
                        println!("{n} {c}");
                    }
                }
            }
        }
    }
    Ok(())
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> Result<ExitCode> {
    reject_format(cli, &[Format::Text, Format::Json])?;
    let suite = Suite::parse(&args.suite).map_err(|e| anyhow!("{e}"))?;
    let report = run_suite(
        suite,
        &SuiteOptions {
            max_weight: cli.max_weight,
            weight: args.weight,
            jobs: cli.jobs,
        },
    );
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string(&report)?),
        _ => {
            for check in &report.checks {
                let tag = match check.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::ObservedEqual => "OBSERVED equal",
                    Status::ObservedDiffer => "OBSERVED differ",
                };
                if check.detail.is_empty() {
                    println!("{tag:>15}  {}", check.name);
                } else {
                    println!("{tag:>15}  {} ({})", check.name, check.detail);
                }
            }
            let (pass, fail, observed) = report.counts();
            println!(
                "suite {}: {pass} passed, {fail} failed, {observed} observations (max weight {})",
                report.suite, report.max_weight
            );
        }
    }
    Ok(if report.failed() {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_report(cli: &Cli, cache: Option<&Cache>) -> Result<()> {
    let max_weight = cli.max_weight.unwrap_or(20);
    let rows = report::build_report(max_weight, 4, cache)?;
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string(&rows)?),
        Format::Csv => print!("{}", report::to_csv(&rows)),
        _ => print!("{}", report::to_markdown(&rows)),
    }
    Ok(())
}
