//! Batch CLI for HEALPix-indexed spherical datasets.
//!
//! Subcommands: `convert` (CSV to sphds), `info`, `stats`, `extrema`,
//! `hist`, `render`. Exit codes: 0 success, 2 usage error, 3 empty or
//! insufficient data, 4 separation failure with `--nside auto`, 5 I/O.

use clap::{Args, Parser, Subcommand, ValueEnum};
use sphds::dataset::{
    from_points, from_points_auto, ingest_cart_csv, ingest_geo_csv, ingest_sph_csv, AngleUnit,
    CenterSpec, DedupPolicy, Ingest,
};
use sphds::fmt::sig;
use sphds::geom::CartCoord;
use sphds::render::{render_equirect, ColorRamp, RenderSpec};
use sphds::stats::{self, BinCount, Side};
use sphds::{Error, Scheme, SphCoord, SphericalDataset, SphericalWindow};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "sphds", version, about = "HEALPix-indexed spherical data tool")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ingest a CSV file and write a sphds v1 dataset
    Convert(ConvertArgs),
    /// Print dataset header facts
    Info(InfoArgs),
    /// Compute a statistic, optionally within a window
    Stats(StatsArgs),
    /// Print the n most extreme rows as CSV
    Extrema(ExtremaArgs),
    /// Export angular marginal histograms as CSV
    Hist(HistArgs),
    /// Render an equirectangular PPM heat map
    Render(RenderArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Geo,
    Cart,
    Sph,
}

#[derive(Clone, Copy, ValueEnum)]
enum UnitArg {
    Deg,
    Rad,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderingArg {
    Ring,
    Nested,
}

impl From<OrderingArg> for Scheme {
    fn from(o: OrderingArg) -> Scheme {
        match o {
            OrderingArg::Ring => Scheme::Ring,
            OrderingArg::Nested => Scheme::Nested,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DedupArg {
    First,
    Fail,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Smallest,
    Largest,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Smallest => Side::Smallest,
            SideArg::Largest => Side::Largest,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RampArg {
    Gray,
    Bluered,
}

#[derive(Args)]
struct ConvertArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    kind: KindArg,
    /// Pixel grid nside (power of two) or "auto"
    #[arg(long)]
    nside: String,
    /// Highest level tried by auto resolution
    #[arg(long, default_value_t = 13)]
    j_max: u8,
    #[arg(long, value_enum, default_value_t = OrderingArg::Ring)]
    ordering: OrderingArg,
    #[arg(long, value_enum, default_value_t = DedupArg::First)]
    dedup: DedupArg,
    #[arg(long)]
    out: PathBuf,
    /// Coordinate unit (default: degrees for geo, radians for sph)
    #[arg(long, value_enum)]
    unit: Option<UnitArg>,
    #[arg(long, default_value_t = 0.0)]
    lon_offset_deg: f64,
    #[arg(long, default_value = "lon")]
    lon_col: String,
    #[arg(long, default_value = "lat")]
    lat_col: String,
    #[arg(long, default_value = "theta")]
    theta_col: String,
    #[arg(long, default_value = "phi")]
    phi_col: String,
    #[arg(long, default_value = "x")]
    x_col: String,
    #[arg(long, default_value = "y")]
    y_col: String,
    #[arg(long, default_value = "z")]
    z_col: String,
    /// Comma-separated value column names (geo and sph kinds)
    #[arg(long, default_value = "I")]
    value_cols: String,
    /// Cartesian centering: "centroid" or "x,y,z"
    #[arg(long, default_value = "centroid")]
    center: String,
}

#[derive(Args)]
struct InfoArgs {
    #[arg(long)]
    ds: PathBuf,
}

#[derive(Args)]
struct WindowArgs {
    /// Convex polygon "theta1,phi1;theta2,phi2;..." (radians unless --deg)
    #[arg(long)]
    win_polygon: Option<String>,
    /// Disc "theta,phi,radius" (radians unless --deg)
    #[arg(long, conflicts_with = "win_polygon")]
    win_disc: Option<String>,
    /// Interpret window angles as degrees
    #[arg(long)]
    deg: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum StatArg {
    Mean,
    Exprob,
    Entropy,
    Fmf,
    Mindist,
    AsymMean,
    AsymExtrema,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long)]
    ds: PathBuf,
    #[arg(long, default_value = "I")]
    col: String,
    #[arg(long, value_enum)]
    stat: StatArg,
    /// Exceedance level for exprob
    #[arg(long)]
    alpha: Option<f64>,
    /// Excursion level for fmf
    #[arg(long)]
    level: Option<f64>,
    /// Extreme count for asym-extrema
    #[arg(long)]
    n: Option<usize>,
    /// Histogram bins for entropy (default: Sturges)
    #[arg(long)]
    bins: Option<usize>,
    #[arg(long, value_enum, default_value_t = SideArg::Smallest)]
    side: SideArg,
    /// Report fmf as a fraction of the dataset's own area
    #[arg(long)]
    relative: bool,
    #[command(flatten)]
    window: WindowArgs,
}

#[derive(Args)]
struct ExtremaArgs {
    #[arg(long)]
    ds: PathBuf,
    #[arg(long, default_value = "I")]
    col: String,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = SideArg::Smallest)]
    side: SideArg,
    #[command(flatten)]
    window: WindowArgs,
}

#[derive(Args)]
struct HistArgs {
    #[arg(long)]
    ds: PathBuf,
    #[arg(long, default_value = "I")]
    col: String,
    #[arg(long, default_value_t = 20)]
    bins: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    ds: PathBuf,
    #[arg(long, default_value = "I")]
    col: String,
    #[arg(long, default_value_t = 720)]
    width: u32,
    #[arg(long, default_value_t = 360)]
    height: u32,
    #[arg(long, value_enum, default_value_t = RampArg::Bluered)]
    ramp: RampArg,
    /// Gray level painted where the dataset has no pixel
    #[arg(long, default_value_t = 255)]
    background: u8,
    #[arg(long)]
    out: PathBuf,
}

/// CLI failure carrying the exit code contract.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn separation(message: impl Into<String>) -> Self {
        Failure {
            code: 4,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match &err {
            Error::InvalidNside(_)
            | Error::LevelOutOfRange(_)
            | Error::InvalidWindow(_)
            | Error::InvalidCoord(_) => 2,
            Error::Io(_) => 5,
            Error::Csv(e) if e.is_io_error() => 5,
            _ => 3,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Convert(args) => cmd_convert(args),
        Command::Info(args) => cmd_info(args),
        Command::Stats(args) => cmd_stats(args),
        Command::Extrema(args) => cmd_extrema(args),
        Command::Hist(args) => cmd_hist(args),
        Command::Render(args) => cmd_render(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn ingest(args: &ConvertArgs) -> Result<Ingest, Failure> {
    let value_cols: Vec<&str> = args
        .value_cols
        .split(',')
        .filter(|s| !s.is_empty())
        .collect();
    match args.kind {
        KindArg::Geo => {
            let unit = match args.unit.unwrap_or(UnitArg::Deg) {
                UnitArg::Deg => AngleUnit::Degrees,
                UnitArg::Rad => AngleUnit::Radians,
            };
            Ok(ingest_geo_csv(
                &args.input,
                &args.lon_col,
                &args.lat_col,
                &value_cols,
                unit,
                args.lon_offset_deg.to_radians(),
            )?)
        }
        KindArg::Sph => {
            let unit = match args.unit.unwrap_or(UnitArg::Rad) {
                UnitArg::Deg => AngleUnit::Degrees,
                UnitArg::Rad => AngleUnit::Radians,
            };
            Ok(ingest_sph_csv(
                &args.input,
                &args.theta_col,
                &args.phi_col,
                &value_cols,
                unit,
            )?)
        }
        KindArg::Cart => {
            let center = if args.center == "centroid" {
                CenterSpec::Centroid
            } else {
                let parts: Vec<f64> = args
                    .center
                    .split(',')
                    .map(|s| s.trim().parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| Failure::usage(format!("bad --center {:?}", args.center)))?;
                if parts.len() != 3 {
                    return Err(Failure::usage(
                        "--center needs \"centroid\" or three numbers",
                    ));
                }
                CenterSpec::Explicit(CartCoord::new(parts[0], parts[1], parts[2]))
            };
            Ok(ingest_cart_csv(
                &args.input,
                &args.x_col,
                &args.y_col,
                &args.z_col,
                center,
            )?)
        }
    }
}

fn cmd_convert(args: ConvertArgs) -> Result<(), Failure> {
    let dedup = match args.dedup {
        DedupArg::First => DedupPolicy::KeepFirst,
        DedupArg::Fail => DedupPolicy::Fail,
    };
    let scheme: Scheme = args.ordering.into();
    let ingest = ingest(&args)?;
    let rows_read = ingest.table.len() + ingest.dropped;
    let ds = if args.nside == "auto" {
        let (ds, auto) = from_points_auto(&ingest.table, args.j_max, scheme, dedup)?;
        if !auto.separated {
            return Err(Failure::separation(format!(
                "points not separable up to nside {} ({} rows collide)",
                auto.res.nside(),
                ingest.table.len() - ds.len()
            )));
        }
        ds
    } else {
        let nside: u64 = args.nside.parse().map_err(|_| {
            Failure::usage(format!(
                "--nside must be an integer or \"auto\", got {:?}",
                args.nside
            ))
        })?;
        let res = sphds::Resolution::from_nside(nside)?;
        from_points(&ingest.table, res, scheme, dedup)?
    };
    ds.save(&args.out)?;
    println!(
        "n={} nside={} dropped={}",
        ds.len(),
        ds.res().nside(),
        rows_read - ds.len()
    );
    Ok(())
}

fn cmd_info(args: InfoArgs) -> Result<(), Failure> {
    let ds = SphericalDataset::load(&args.ds)?;
    println!(
        "nside={} ordering={} n={} columns={}",
        ds.res().nside(),
        ds.scheme(),
        ds.len(),
        ds.column_names().join(",")
    );
    Ok(())
}

fn parse_window(w: &WindowArgs) -> Result<Option<SphericalWindow>, Failure> {
    let scale = if w.deg {
        std::f64::consts::PI / 180.0
    } else {
        1.0
    };
    let parse_pair = |s: &str| -> Result<SphCoord, Failure> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 2 {
            return Err(Failure::usage(format!("bad window vertex {s:?}")));
        }
        let theta: f64 = parts[0]
            .parse()
            .map_err(|_| Failure::usage(format!("bad angle {:?}", parts[0])))?;
        let phi: f64 = parts[1]
            .parse()
            .map_err(|_| Failure::usage(format!("bad angle {:?}", parts[1])))?;
        Ok(SphCoord::new(theta * scale, phi * scale)?)
    };
    if let Some(spec) = &w.win_polygon {
        let vertices: Vec<SphCoord> = spec
            .split(';')
            .filter(|s| !s.trim().is_empty())
            .map(parse_pair)
            .collect::<Result<_, _>>()?;
        return Ok(Some(SphericalWindow::polygon(vertices)?));
    }
    if let Some(spec) = &w.win_disc {
        let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Failure::usage("--win-disc needs \"theta,phi,radius\""));
        }
        let nums: Vec<f64> = parts
            .iter()
            .map(|s| s.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| Failure::usage(format!("bad disc spec {spec:?}")))?;
        let center = SphCoord::new(nums[0] * scale, nums[1] * scale)?;
        return Ok(Some(SphericalWindow::disc(center, nums[2] * scale)?));
    }
    Ok(None)
}

fn cmd_stats(args: StatsArgs) -> Result<(), Failure> {
    let ds = SphericalDataset::load(&args.ds)?;
    let window = parse_window(&args.window)?;
    let col = args.col.as_str();
    let need_window = || {
        window
            .as_ref()
            .ok_or_else(|| Failure::usage("this statistic needs --win-polygon or --win-disc"))
    };
    let (name, value) = match args.stat {
        StatArg::Mean => ("mean", stats::mean_value(&ds, col)?),
        StatArg::Exprob => {
            let alpha = args
                .alpha
                .ok_or_else(|| Failure::usage("exprob needs --alpha"))?;
            ("exprob", stats::exprob(&ds, window.as_ref(), col, alpha)?)
        }
        StatArg::Entropy => {
            let bins = match args.bins {
                Some(k) => BinCount::Fixed(k),
                None => BinCount::Auto,
            };
            ("entropy", stats::entropy(&ds, window.as_ref(), col, bins)?)
        }
        StatArg::Fmf => {
            let level = args
                .level
                .ok_or_else(|| Failure::usage("fmf needs --level"))?;
            let raw = stats::fmf(&ds, level, col)?;
            let value = if args.relative {
                if ds.is_empty() {
                    return Err(Failure::from(Error::EmptySelection(
                        "relative fmf of an empty dataset".into(),
                    )));
                }
                raw / (ds.len() as f64 * ds.res().pixel_area())
            } else {
                raw
            };
            ("fmf", value)
        }
        StatArg::Mindist => ("mindist", stats::min_dist(&ds)?),
        StatArg::AsymMean => (
            "asym-mean",
            stats::asymmetry_mean(&ds, need_window()?, col)?,
        ),
        StatArg::AsymExtrema => {
            let n = args
                .n
                .ok_or_else(|| Failure::usage("asym-extrema needs --n"))?;
            (
                "asym-extrema",
                stats::asymmetry_extrema(&ds, need_window()?, n, args.side.into(), col)?,
            )
        }
    };
    println!("stat={name} value={}", sig(value, 7));
    Ok(())
}

fn cmd_extrema(args: ExtremaArgs) -> Result<(), Failure> {
    let ds = SphericalDataset::load(&args.ds)?;
    let window = parse_window(&args.window)?;
    let rows = stats::extrema(&ds, window.as_ref(), args.n, args.side.into(), &args.col)?;
    let mut out = std::io::stdout().lock();
    writeln!(out, "pix,theta,phi,value").map_err(Error::from)?;
    for row in rows {
        writeln!(
            out,
            "{},{},{},{}",
            row.pix.index,
            sig(row.coord.theta(), 7),
            sig(row.coord.phi(), 7),
            sig(row.value, 7)
        )
        .map_err(Error::from)?;
    }
    Ok(())
}

fn cmd_hist(args: HistArgs) -> Result<(), Failure> {
    if args.bins == 0 {
        return Err(Failure::usage("--bins must be at least 1"));
    }
    let ds = SphericalDataset::load(&args.ds)?;
    let (theta, phi) = stats::ang_distribution(&ds, &args.col, args.bins, args.bins)?;
    let mut body = String::from("axis,bin_lo,bin_hi,count,mean\n");
    for h in [&theta, &phi] {
        for b in 0..h.counts.len() {
            body.push_str(&format!(
                "{},{},{},{},{}\n",
                h.axis.as_str(),
                sig(h.edges[b], 7),
                sig(h.edges[b + 1], 7),
                h.counts[b],
                sig(h.means[b], 7)
            ));
        }
    }
    std::fs::write(&args.out, body).map_err(Error::from)?;
    Ok(())
}

fn cmd_render(args: RenderArgs) -> Result<(), Failure> {
    if args.width == 0 || args.height == 0 {
        return Err(Failure::usage("--width and --height must be positive"));
    }
    let ds = SphericalDataset::load(&args.ds)?;
    let spec = RenderSpec {
        width: args.width,
        height: args.height,
        column: args.col.clone(),
        ramp: match args.ramp {
            RampArg::Gray => ColorRamp::Grayscale,
            RampArg::Bluered => ColorRamp::BlueRed,
        },
        background: [args.background; 3],
    };
    let bytes = render_equirect(&ds, &spec)?;
    std::fs::write(&args.out, bytes).map_err(Error::from)?;
    Ok(())
}
