//! `fordpoly`: Farey–Ford polygons, statistics and reports from the command
//! line.
//!
//! Exit status: 0 on success, 2 for usage errors, 3 for numeric or tolerance
//! failures, 4 for I/O errors.

mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand};
use farey_ford::bcz::orbit;
use farey_ford::distributions::{
    empirical_survival, euclid_closed_form, hyperbolic_closed_form, linear_grid, log_grid,
    quadrature_survival, IndicatorConfig, SurvivalCurve, SurvivalSource,
};
use farey_ford::farey::{cardinality, denominator_pairs, enumerate, order_from_delta};
use farey_ford::geom::{normalize, NormalizedPair, StatisticKind};
use farey_ford::moments::{angle_pair_moment, empirical_moment, fit_moment_constants};
use farey_ford::polygon::{build_polygon, EdgeKind};
use farey_ford::report::{format_report, write_report, Report, ReportFormat};
use farey_ford::sums::{inverse_window_count, totient_ratio_sum};
use farey_ford::svg::{render_svg, SvgOptions};
use farey_ford::sweep::SweepConfig;
use farey_ford::{Error, Fraction, PositiveRational, RationalInterval};

#[derive(Parser, Debug)]
#[command(name = "fordpoly", version, about = "Farey-Ford polygons and the statistics of consecutive Ford circles")]
struct Cli {
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// File of `key = value` lines supplying any long option; command-line
    /// options win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Chunks a Farey window is cut into for parallel sweeps. Results depend
    /// on this, never on the thread count.
    #[arg(long, global = true, default_value_t = farey_ford::sweep::DEFAULT_CHUNKS)]
    chunks: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Farey sequences.
    #[command(subcommand)]
    Farey(FareyCmd),
    /// Statistics of consecutive pairs.
    #[command(subcommand)]
    Stats(StatsCmd),
    /// Moments and their predicted leading terms.
    #[command(subcommand)]
    Moments(MomentsCmd),
    /// Survival functions.
    #[command(subcommand)]
    Dist(DistCmd),
    /// The BCZ map.
    #[command(subcommand)]
    Bcz(BczCmd),
    /// Totient sums and inverse counts.
    #[command(subcommand)]
    Sums(SumsCmd),
    /// Draw a Farey-Ford polygon as SVG.
    Render(RenderArgs),
}

/// `--q` or `--delta`, one of them required.
#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
struct OrderArg {
    /// Farey order Q.
    #[arg(long)]
    q: Option<u64>,
    /// Gap δ; the order is floor((2δ)^(-1/2)).
    #[arg(long)]
    delta: Option<PositiveRational>,
}

impl OrderArg {
    fn order(&self) -> farey_ford::Result<u64> {
        match (self.q, self.delta) {
            (Some(q), _) => Ok(q),
            (None, Some(d)) => order_from_delta(d),
            (None, None) => Err(Error::Usage("--q or --delta is required".into())),
        }
    }
}

#[derive(Args, Debug, Clone)]
struct WindowArg {
    /// Window `a/b:c/d` inside [0, 1].
    #[arg(long, default_value = "0/1:1/1")]
    interval: RationalInterval,
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => ReportFormat::Csv,
            Format::Json => ReportFormat::Json,
        }
    }
}

#[derive(Subcommand, Debug)]
enum FareyCmd {
    /// List the fractions of the window.
    List {
        #[command(flatten)]
        order: OrderArg,
        #[command(flatten)]
        window: WindowArg,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Count the fractions of the window.
    Count {
        #[command(flatten)]
        order: OrderArg,
        #[command(flatten)]
        window: WindowArg,
    },
}

#[derive(Subcommand, Debug)]
enum StatsCmd {
    /// Evaluate a statistic on every consecutive pair.
    Eval {
        #[arg(long)]
        stat: StatisticKind,
        #[command(flatten)]
        order: OrderArg,
        #[command(flatten)]
        window: WindowArg,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
}

#[derive(Subcommand, Debug)]
enum MomentsCmd {
    /// Moment of a statistic, or constant fits over a list of orders.
    Run {
        /// Statistic; omit together with --angle-pair.
        #[arg(long, required_unless_present = "angle_pair")]
        stat: Option<StatisticKind>,
        #[command(flatten)]
        order: OrderArg,
        /// Orders for a constant fit (at least three, increasing).
        #[arg(long, value_delimiter = ',')]
        q_list: Vec<u64>,
        /// Compute the angle-pair moment instead.
        #[arg(long)]
        angle_pair: bool,
        #[command(flatten)]
        window: WindowArg,
        #[arg(long)]
        out: PathBuf,
        /// Output format; taken from the extension when omitted.
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

#[derive(Subcommand, Debug)]
enum DistCmd {
    /// Empirical survival function, optionally with limiting curves.
    Run {
        #[arg(long)]
        stat: StatisticKind,
        #[command(flatten)]
        order: OrderArg,
        #[command(flatten)]
        window: WindowArg,
        /// `lin:lo:hi:n` or `log:lo:hi:n`.
        #[arg(long)]
        t_grid: String,
        /// Extra curves: closed-form, quadrature.
        #[arg(long, value_delimiter = ',')]
        compare: Vec<String>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

#[derive(Subcommand, Debug)]
enum BczCmd {
    /// Iterate the map from (x, y).
    Orbit {
        #[arg(long)]
        x: Fraction,
        #[arg(long)]
        y: Fraction,
        /// Steps in exact integers when Q·x and Q·y are integers.
        #[arg(long, group = "ord")]
        order: Option<u64>,
        #[arg(long, group = "ord")]
        delta: Option<PositiveRational>,
        #[arg(long)]
        steps: usize,
    },
}

#[derive(Subcommand, Debug)]
enum SumsCmd {
    /// Sum of φ(q)/q² for q ≤ Q.
    Totient {
        #[command(flatten)]
        order: OrderArg,
    },
    /// Count of q' ≤ t coprime to the modulus with inverse in the window.
    InverseCount {
        #[arg(long)]
        modulus: u64,
        #[arg(long)]
        t: f64,
        #[command(flatten)]
        window: WindowArg,
    },
}

#[derive(Args, Debug)]
struct RenderArgs {
    #[command(flatten)]
    order: OrderArg,
    #[command(flatten)]
    window: WindowArg,
    #[arg(long, value_enum, default_value = "euclidean")]
    edges: EdgeArg,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1200)]
    width: u32,
    #[arg(long)]
    no_circles: bool,
    #[arg(long)]
    labels: bool,
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
enum EdgeArg {
    Euclidean,
    Hyperbolic,
}

enum Failure {
    Usage(String),
    Numeric(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Numeric { .. } => Failure::Numeric(msg),
            Error::Io(_) | Error::Json(_) | Error::Csv(_) => Failure::Io(msg),
            _ => Failure::Usage(msg),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn parse_cli(args: Vec<OsString>) -> Result<Cli, clap::Error> {
    let Some(path) = config::find_path(&args) else {
        return Cli::try_parse_from(args);
    };
    let fail = |msg: String| Cli::command().error(clap::error::ErrorKind::InvalidValue, msg);
    let text = config::read(&path).map_err(|e| fail(format!("cannot read config {}: {e}", path.display())))?;
    let entries = config::parse(&text).map_err(fail)?;
    let merged = config::merge(Cli::command(), args, &entries).map_err(fail)?;
    Cli::try_parse_from(merged)
}

fn main() -> ExitCode {
    let cli = match parse_cli(std::env::args_os().collect()) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(4)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    if cli.chunks == 0 {
        return Err(Failure::Usage("--chunks must be positive".into()));
    }
    let sweep = SweepConfig { chunks: cli.chunks };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match &cli.command {
        Command::Farey(FareyCmd::List { order, window, format }) => {
            let fracs: Vec<Fraction> = enumerate(order.order()?, window.interval)?.collect();
            match format {
                Format::Csv => {
                    writeln!(out, "p,q")?;
                    for f in fracs {
                        writeln!(out, "{},{}", f.numer(), f.denom())?;
                    }
                }
                Format::Json => {
                    let v = serde_json::to_string(&fracs).map_err(Error::from)?;
                    writeln!(out, "{v}")?;
                }
            }
        }
        Command::Farey(FareyCmd::Count { order, window }) => {
            writeln!(out, "{}", cardinality(order.order()?, window.interval)?)?;
        }
        Command::Stats(StatsCmd::Eval {
            stat,
            order,
            window,
            format,
        }) => {
            let q = order.order()?;
            let rows: Vec<(u64, u64, f64, f64, f64)> = denominator_pairs(q, window.interval)?
                .map(|(a, b)| {
                    let p = normalize(a, b, q)?;
                    Ok((a, b, p.x(), p.y(), stat.value(p.x(), p.y())))
                })
                .collect::<farey_ford::Result<_>>()?;
            match format {
                Format::Csv => {
                    writeln!(out, "q_j,q_next,x,y,{stat}")?;
                    for (a, b, x, y, v) in rows {
                        writeln!(out, "{a},{b},{x},{y},{v}")?;
                    }
                }
                Format::Json => {
                    let v: Vec<serde_json::Value> = rows
                        .into_iter()
                        .map(|(a, b, x, y, v)| serde_json::json!({"q_j": a, "q_next": b, "x": x, "y": y, "value": v}))
                        .collect();
                    writeln!(out, "{}", serde_json::Value::Array(v))?;
                }
            }
        }
        Command::Moments(MomentsCmd::Run {
            stat,
            order,
            q_list,
            angle_pair,
            window,
            out: path,
            format,
        }) => {
            let q = order.order()?;
            let report: Report = if *angle_pair {
                let r = angle_pair_moment(q, window.interval, sweep)?;
                writeln!(
                    out,
                    "angle moment / Q^2 = {} (limit {}, 12/pi {})",
                    r.moment_over_q2, r.oracle, r.stated_constant
                )?;
                r.into()
            } else {
                let kind = stat.ok_or_else(|| Failure::Usage("--stat is required".into()))?;
                if q_list.is_empty() {
                    let r = empirical_moment(kind, q, window.interval, sweep)?;
                    writeln!(out, "{kind} Q={q}: normalized/Q^2 = {}", r.normalized_over_q2)?;
                    r.into()
                } else {
                    let mut orders = q_list.clone();
                    if !orders.contains(&q) {
                        orders.push(q);
                        orders.sort_unstable();
                    }
                    let fit = fit_moment_constants(kind, &orders, window.interval, sweep)?;
                    writeln!(out, "{kind}: fitted constant {} (last gap {})", fit.fitted_constant, fit.last_gap)?;
                    Report::Moments(fit.reports)
                }
            };
            write_report(&report, output_format(*format, path)?, path)?;
        }
        Command::Dist(DistCmd::Run {
            stat,
            order,
            window,
            t_grid,
            compare,
            out: path,
            format,
        }) => {
            let q = order.order()?;
            let grid = parse_grid(t_grid)?;
            let mut curves = vec![empirical_survival(*stat, q, window.interval, &grid, sweep)?];
            for c in compare {
                curves.push(match c.as_str() {
                    "closed-form" => closed_form_curve(*stat, &grid)?,
                    "quadrature" => quadrature_survival(*stat, &grid, IndicatorConfig::default())?,
                    other => {
                        return Err(Failure::Usage(format!(
                            "unknown comparison `{other}` (expected closed-form or quadrature)"
                        )))
                    }
                });
            }
            write_report(&Report::Survival(curves), output_format(*format, path)?, path)?;
        }
        Command::Bcz(BczCmd::Orbit {
            x,
            y,
            order,
            delta,
            steps,
        }) => {
            let q = match (order, delta) {
                (Some(q), _) => Some(*q),
                (None, Some(d)) => Some(order_from_delta(*d)?),
                _ => None,
            };
            let start = start_pair(*x, *y, q)?;
            writeln!(out, "step,x,y,q_j,q_next")?;
            for (i, p) in orbit(start, *steps).iter().enumerate() {
                match p.exact() {
                    Some(e) => writeln!(out, "{i},{},{},{},{}", p.x(), p.y(), e.q_j, e.q_next)?,
                    None => writeln!(out, "{i},{},{},,", p.x(), p.y())?,
                }
            }
        }
        Command::Sums(SumsCmd::Totient { order }) => {
            let r = totient_ratio_sum(order.order()?)?;
            print_report(&mut out, r.into())?;
        }
        Command::Sums(SumsCmd::InverseCount { modulus, t, window }) => {
            let r = inverse_window_count(*modulus, *t, window.interval)?;
            print_report(&mut out, r.into())?;
        }
        Command::Render(a) => {
            let edges = match a.edges {
                EdgeArg::Euclidean => EdgeKind::Euclidean,
                EdgeArg::Hyperbolic => EdgeKind::Hyperbolic,
            };
            let g = build_polygon(a.order.order()?, a.window.interval, edges)?;
            let options = SvgOptions {
                width: a.width,
                show_circles: !a.no_circles,
                show_labels: a.labels,
                ..Default::default()
            };
            let svg = render_svg(&g, &options)?;
            std::fs::write(&a.out, svg)?;
        }
    }
    Ok(())
}

fn print_report(out: &mut impl Write, r: Report) -> Outcome {
    out.write_all(&format_report(&r, ReportFormat::Json)?)?;
    Ok(())
}

fn output_format(f: Option<Format>, path: &Path) -> Result<ReportFormat, Failure> {
    match f {
        Some(f) => Ok(f.into()),
        None => Ok(ReportFormat::from_path(path).unwrap_or(ReportFormat::Json)),
    }
}

fn parse_grid(spec: &str) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::Usage(format!("bad grid `{spec}` (expected lin:lo:hi:n or log:lo:hi:n)"));
    let parts: Vec<&str> = spec.split(':').collect();
    let [kind, lo, hi, n] = parts.as_slice() else {
        return Err(bad());
    };
    let lo: f64 = lo.parse().map_err(|_| bad())?;
    let hi: f64 = hi.parse().map_err(|_| bad())?;
    let n: usize = n.parse().map_err(|_| bad())?;
    Ok(match *kind {
        "lin" => linear_grid(lo, hi, n)?,
        "log" => log_grid(lo, hi, n)?,
        _ => return Err(bad()),
    })
}

fn closed_form_curve(kind: StatisticKind, grid: &[f64]) -> Result<SurvivalCurve, Failure> {
    let f: fn(f64) -> f64 = match kind {
        StatisticKind::EuclideanDistance => euclid_closed_form,
        StatisticKind::HyperbolicDistance => hyperbolic_closed_form,
        _ => return Err(Failure::Usage(format!("no closed form for `{kind}`; use quadrature"))),
    };
    Ok(SurvivalCurve::new(kind, SurvivalSource::ClosedForm, grid.to_vec(), grid.iter().map(|&t| f(t)).collect())?)
}

/// Exact start `(Q x, Q y)` when both are integers, floating otherwise.
fn start_pair(x: Fraction, y: Fraction, order: Option<u64>) -> Result<NormalizedPair, Failure> {
    if let Some(q) = order {
        let scaled = |f: Fraction| (q as u128 * f.numer() as u128 % f.denom() as u128 == 0)
            .then(|| (q as u128 * f.numer() as u128 / f.denom() as u128) as u64);
        if let (Some(a), Some(b)) = (scaled(x), scaled(y)) {
            return Ok(normalize(a, b, q)?);
        }
    }
    Ok(NormalizedPair::new(x.to_f64(), y.to_f64())?)
}
