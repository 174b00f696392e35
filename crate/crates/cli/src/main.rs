use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::panic;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qshelf_core::hmatrix::{build_transfer, h_build, h_limit, TransferKind};
use qshelf_core::partitions::{
    count, count_official, ghost_profile, h_vanishes, witnesses, ConditionProfile,
};
use qshelf_core::series::{product_side, theta_quotient};
use qshelf_core::shelves::{closed_form_ghost, closed_form_official, ShelfIndex, Strength};
use qshelf_core::verify::{run, Report, Suite, SuiteConfig};
use qshelf_core::xq::{jtilde, jtildetilde};
use serde::Serialize;
use serde_json::json;

mod render;

use render::{Format, Rendered};

#[derive(Parser)]
#[command(
    name = "qshelf",
    version,
    about = "Shelves of Andrews-Bressoud series, checked exactly"
)]
struct Cli {
    /// Truncation order N.
    #[arg(long, global = true, env = "QSHELF_DEFAULT_ORDER", default_value_t = 60)]
    order: i64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Add 1 to the coefficient of q^E of every compared series.
    #[arg(
        long,
        global = true,
        hide = true,
        value_name = "E",
        allow_negative_numbers = true
    )]
    inject_fault: Option<i64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print one series.
    Series(SeriesArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Count partitions under the official, ghost or h conditions.
    Count(CountArgs),
    /// Print an h-matrix, a transfer matrix or an h-limit.
    Hmatrix(HmatrixArgs),
    /// Print a J~ or J~~ series, or its specialization at x = q^j.
    Dictionary(DictionaryArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeriesKindArg {
    Official,
    Ghost,
    Product,
    Theta,
}

#[derive(Args)]
struct SeriesArgs {
    #[arg(long)]
    k: u32,
    /// Shelf number.
    #[arg(long, visible_alias = "j", default_value_t = 0)]
    shelf: u32,
    #[arg(long)]
    i: u32,
    /// Shorthand for --kind ghost.
    #[arg(long)]
    ghost: bool,
    #[arg(long, value_enum, default_value_t = SeriesKindArg::Official)]
    kind: SeriesKindArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrengthArg {
    Weak,
    Standard,
    Strong,
}

impl From<StrengthArg> for Strength {
    fn from(s: StrengthArg) -> Self {
        match s {
            StrengthArg::Weak => Strength::Weak,
            StrengthArg::Standard => Strength::Standard,
            StrengthArg::Strong => Strength::Strong,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name, or `all`.
    suite: String,
    /// Values of k (comma separated); defaults depend on the suite.
    #[arg(long, value_delimiter = ',')]
    k: Vec<u32>,
    #[arg(long, default_value_t = 30)]
    n_max: u32,
    #[arg(long)]
    j_max: Option<u32>,
    /// Largest starting shelf J.
    #[arg(long = "J-max")]
    start_max: Option<u32>,
    #[arg(long, value_enum, default_value_t = StrengthArg::Strong)]
    strength: StrengthArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CountKind {
    Official,
    Ghost,
    H,
}

#[derive(Args)]
struct CountArgs {
    #[arg(long)]
    k: u32,
    /// Series index r (official and ghost counts).
    #[arg(long)]
    r: Option<u32>,
    #[arg(long, value_enum, default_value_t = CountKind::Official)]
    kind: CountKind,
    /// Shorthand for --kind ghost.
    #[arg(long)]
    ghost: bool,
    /// Starting shelf J (h counts).
    #[arg(long = "J")]
    start: Option<u32>,
    /// Current shelf j (h counts).
    #[arg(long)]
    j: Option<u32>,
    /// Column l (h counts).
    #[arg(long)]
    l: Option<u32>,
    /// Row i (h counts).
    #[arg(long)]
    i: Option<u32>,
    #[arg(long, default_value_t = 30)]
    n_max: u32,
    /// Count only this n.
    #[arg(long)]
    n: Option<u32>,
    /// Stream the qualifying partitions as JSON arrays.
    #[arg(long)]
    witness: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MatrixKind {
    H,
    A,
    B,
    Btilde,
}

#[derive(Args)]
struct HmatrixArgs {
    #[arg(long)]
    k: u32,
    /// Starting shelf J.
    #[arg(long = "J", default_value_t = 0)]
    start: u32,
    #[arg(long, required_unless_present = "limit")]
    j: Option<u32>,
    #[arg(long, value_enum, default_value_t = MatrixKind::H)]
    kind: MatrixKind,
    /// Print the stabilized limit of row i instead of a matrix.
    #[arg(long)]
    limit: bool,
    #[arg(long)]
    i: Option<u32>,
}

#[derive(Args)]
struct DictionaryArgs {
    #[arg(long)]
    k: u32,
    #[arg(long)]
    i: u32,
    /// Use J~~ instead of J~.
    #[arg(long)]
    ghost: bool,
    /// Specialize x = q^j.
    #[arg(long)]
    j: Option<u32>,
}

enum Outcome {
    Pass,
    Falsified(String),
}

#[derive(Debug)]
struct UsageError(String);

impl<E: std::error::Error> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

fn check_k(k: u32) -> Result<(), UsageError> {
    if k < 2 {
        return Err(usage(format!("k must be at least 2, got {k}")));
    }
    Ok(())
}

fn check_range(name: &str, v: u32, lo: u32, hi: u32) -> Result<(), UsageError> {
    if v < lo || v > hi {
        return Err(usage(format!("{name} must lie in {lo}..={hi}, got {v}")));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.order < 0 {
        eprintln!("error: order must be nonnegative");
        return ExitCode::from(2);
    }
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build_global()
    {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    // Remaining panics are violated parameter preconditions in the core crate.
    let result = panic::catch_unwind(|| dispatch(&cli))
        .unwrap_or_else(|_| Err(usage("parameters outside the supported range")))
        .and_then(|(rendered, outcome)| {
            emit(&cli, &rendered)?;
            Ok(outcome)
        });
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Falsified(certificate)) => {
            eprintln!("{certificate}");
            ExitCode::from(1)
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(cli: &Cli, rendered: &Rendered) -> Result<(), UsageError> {
    match &cli.output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            rendered.write_to(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            rendered.write_to(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<(Rendered, Outcome), UsageError> {
    let order = cli.order;
    match &cli.command {
        Command::Series(a) => series_cmd(a, order, cli.format),
        Command::Verify(a) => verify_cmd(a, order, cli.format, cli.inject_fault),
        Command::Count(a) => count_cmd(a, cli.format),
        Command::Hmatrix(a) => hmatrix_cmd(a, order, cli.format),
        Command::Dictionary(a) => dictionary_cmd(a, order, cli.format),
    }
}

fn series_cmd(a: &SeriesArgs, order: i64, format: Format) -> Result<(Rendered, Outcome), UsageError> {
    check_k(a.k)?;
    let kind = if a.ghost { SeriesKindArg::Ghost } else { a.kind };
    let (label, series) = match kind {
        SeriesKindArg::Official => {
            check_range("i", a.i, 1, a.k)?;
            let r = ShelfIndex::new(a.k, a.shelf, a.i).r();
            (format!("B_{r}"), closed_form_official(a.k, a.shelf, a.i, order))
        }
        SeriesKindArg::Ghost => {
            check_range("i", a.i, 2, a.k)?;
            let r = ShelfIndex::new(a.k, a.shelf, a.i).r();
            (format!("~B_{r}"), closed_form_ghost(a.k, a.shelf, a.i, order))
        }
        SeriesKindArg::Product | SeriesKindArg::Theta => {
            check_range("i", a.i, 1, a.k)?;
            if a.shelf != 0 {
                return Err(usage("product and theta forms exist on shelf 0 only"));
            }
            let s = if kind == SeriesKindArg::Product {
                product_side(a.k, a.i, order)
            } else {
                theta_quotient(a.k, a.i, order)
            };
            (format!("B_{}", a.i), s)
        }
    };
    let meta = json!({ "k": a.k, "j": a.shelf, "i": a.i, "name": label });
    Ok((render::series(format, &label, meta, &series), Outcome::Pass))
}

fn verify_cmd(
    a: &VerifyArgs,
    order: i64,
    format: Format,
    fault: Option<i64>,
) -> Result<(Rendered, Outcome), UsageError> {
    let suites: Vec<Suite> = if a.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![a.suite.parse().map_err(UsageError)?]
    };
    for &k in &a.k {
        check_k(k)?;
    }
    let reports: Vec<Report> = suites
        .iter()
        .map(|&suite| {
            let mut cfg = SuiteConfig::defaults(suite, order, a.n_max);
            if !a.k.is_empty() {
                cfg.ks = a.k.clone();
            }
            if let Some(j) = a.j_max {
                cfg.j_max = j;
            }
            if let Some(s) = a.start_max {
                cfg.start_max = s;
            }
            cfg.strength = a.strength.into();
            cfg.fault = fault;
            run(suite, &cfg)
        })
        .collect();
    let outcome = match reports.iter().find_map(Report::first_failure) {
        Some(cert) => Outcome::Falsified(serde_json::to_string(cert).expect("certificate serializes")),
        None => Outcome::Pass,
    };
    Ok((render::reports(format, &reports)?, outcome))
}

#[derive(Clone, Copy, Serialize)]
struct CountRow {
    k: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<u32>,
    #[serde(rename = "J", skip_serializing_if = "Option::is_none")]
    start: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    j: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    i: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    l: Option<u32>,
    n: u32,
    kind: &'static str,
    count: u64,
}

fn count_cmd(a: &CountArgs, format: Format) -> Result<(Rendered, Outcome), UsageError> {
    check_k(a.k)?;
    let kind = if a.ghost { CountKind::Ghost } else { a.kind };
    let ns: Vec<u32> = match a.n {
        Some(n) => vec![n],
        None => (0..=a.n_max).collect(),
    };
    let need = |v: Option<u32>, name: &str| v.ok_or_else(|| usage(format!("--{name} is required")));
    let (profile, template) = match kind {
        CountKind::Official | CountKind::Ghost => {
            let r = need(a.r, "r")?;
            if r == 0 {
                return Err(usage("r must be positive"));
            }
            let ghost = kind == CountKind::Ghost;
            let profile = if ghost {
                ghost_profile(a.k, r)
            } else {
                let idx = ShelfIndex::official(a.k, r);
                ConditionProfile::official(a.k, idx.j, idx.i)
            };
            let row = CountRow {
                k: a.k,
                r: Some(r),
                start: None,
                j: None,
                i: None,
                l: None,
                n: 0,
                kind: if ghost { "ghost" } else { "official" },
                count: 0,
            };
            (profile, row)
        }
        CountKind::H => {
            let (start, j) = (need(a.start, "J")?, need(a.j, "j")?);
            let (l, i) = (need(a.l, "l")?, need(a.i, "i")?);
            if j <= start {
                return Err(usage("h counts need j >= J + 1"));
            }
            check_range("l", l, 1, a.k)?;
            check_range("i", i, 1, a.k)?;
            let row = CountRow {
                k: a.k,
                r: None,
                start: Some(start),
                j: Some(j),
                i: Some(i),
                l: Some(l),
                n: 0,
                kind: "h",
                count: 0,
            };
            (ConditionProfile::h(a.k, start, j, l, i), row)
        }
    };
    let vanishes = kind == CountKind::H
        && h_vanishes(
            a.k,
            template.start.unwrap(),
            template.j.unwrap(),
            template.l.unwrap(),
            template.i.unwrap(),
        );

    if a.witness {
        let mut lines = Vec::new();
        if !vanishes {
            for &n in &ns {
                for pi in witnesses(&profile, n) {
                    lines.push(serde_json::to_string(&pi).expect("partition serializes"));
                }
            }
        }
        return Ok((Rendered::lines(lines), Outcome::Pass));
    }

    let mut rows = Vec::with_capacity(ns.len());
    for &n in &ns {
        let c = match kind {
            CountKind::Official => {
                count_official(a.k, template.r.unwrap(), n).map_err(|e| usage(e.to_string()))?
            }
            _ if vanishes => 0,
            _ => count(&profile, n),
        };
        rows.push(CountRow {
            n,
            count: c,
            ..template
        });
    }
    Ok((render::rows(format, &rows)?, Outcome::Pass))
}

fn hmatrix_cmd(a: &HmatrixArgs, order: i64, format: Format) -> Result<(Rendered, Outcome), UsageError> {
    check_k(a.k)?;
    if a.limit {
        let i = a.i.ok_or_else(|| usage("--limit needs --i"))?;
        check_range("i", i, 1, a.k)?;
        let lim = h_limit(a.k, a.start, i, order).map_err(|e| usage(e.to_string()))?;
        let meta = json!({ "k": a.k, "J": a.start, "i": i, "name": "h_inf" });
        return Ok((render::series(format, "h_inf", meta, &lim), Outcome::Pass));
    }
    let j = a.j.expect("clap enforces --j");
    let rendered = match a.kind {
        MatrixKind::H => {
            if j < a.start {
                return Err(usage("need j >= J"));
            }
            let h = h_build(a.k, a.start, j, order);
            render::matrix(format, &h, h.entries())?
        }
        kind => {
            let kind = match kind {
                MatrixKind::A => TransferKind::A,
                MatrixKind::B => TransferKind::B,
                _ => TransferKind::Btilde,
            };
            if kind != TransferKind::Btilde && j == 0 {
                return Err(usage("A and B are defined for j >= 1"));
            }
            let t = build_transfer(a.k, j, kind, order);
            render::matrix(format, &t, t.entries())?
        }
    };
    Ok((rendered, Outcome::Pass))
}

fn dictionary_cmd(a: &DictionaryArgs, order: i64, format: Format) -> Result<(Rendered, Outcome), UsageError> {
    check_k(a.k)?;
    let s = if a.ghost {
        check_range("i", a.i, 1, a.k - 1)?;
        jtildetilde(a.k, a.i, order)
    } else {
        check_range("i", a.i, 1, a.k)?;
        jtilde(a.k, a.i, order)
    };
    let name = if a.ghost { "J~~" } else { "J~" };
    let rendered = match a.j {
        Some(j) => {
            let meta = json!({ "k": a.k, "i": a.i, "j": j, "name": name });
            render::series(
                format,
                &format!("{name}_{{{},{}}}(q^{j}, q)", a.k, a.i),
                meta,
                &s.specialize(j),
            )
        }
        None => render::bivariate(format, &s)?,
    };
    Ok((rendered, Outcome::Pass))
}
