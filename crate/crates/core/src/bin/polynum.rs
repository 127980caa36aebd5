use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use polynum::embed::{Geometry, TileParams};
use polynum::format::{fmt_sig, round_json, SIGNIFICANT_DIGITS};
use polynum::numsys::{verify_number_system, VerifyReport, DEFAULT_SEARCH_SLACK};
use polynum::parse::{parse_int_list, parse_poly};
use polynum::spectra::{count_region, enumerate_region_coeffs, region_bounds, DEFAULT_BUDGET};
use polynum::stats::{
    border_hits, clt_harness, pattern_count, weyl_sum, AdditiveFunction, HarnessOptions, ResiduePoly,
    SamplePoly,
};
use polynum::{Error, ModulusContext, NumberSystem};

/// Digit expansions and number systems in Z[X]/(p).
#[derive(Parser, Serialize)]
#[command(name = "polynum", version)]
struct Cli {
    /// Seed recorded for randomized routines.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Path for the primary artifact (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Serialize, Clone)]
struct System {
    /// Modulus: ascending coefficients ("2,2,1") or symbolic ("X^2+2*X+2").
    #[arg(long, allow_hyphen_values = true)]
    poly: String,
    /// Digit set (default: 0..|p(0)|-1).
    #[arg(long, allow_hyphen_values = true)]
    digits: Option<String>,
}

#[derive(Args, Serialize, Clone)]
struct Sample {
    /// Polynomial in Y with integer coefficients.
    #[arg(long = "P", default_value = "Y")]
    p: String,
    #[arg(long = "T")]
    t: f64,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
enum Command {
    /// Decide whether (p, N) is a number system.
    Verify {
        #[command(flatten)]
        system: System,
        #[arg(long, default_value_t = DEFAULT_SEARCH_SLACK)]
        slack: f64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Digit expansion of an element.
    Expand {
        #[command(flatten)]
        system: System,
        #[arg(long, allow_hyphen_values = true)]
        element: String,
        #[arg(long)]
        step_cap: Option<usize>,
    },
    /// List R(T) as CSV.
    Enumerate {
        #[command(flatten)]
        system: System,
        #[arg(long = "T")]
        t: f64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Count R(T).
    Count {
        #[command(flatten)]
        system: System,
        #[arg(long = "T")]
        t: f64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Rasterize the fundamental domain.
    Tile {
        #[command(flatten)]
        system: System,
        #[arg(long, default_value_t = 14)]
        depth: u32,
        /// Pixels per unit.
        #[arg(long, default_value_t = 512)]
        size: u32,
        #[arg(long)]
        image: Option<PathBuf>,
        #[arg(long)]
        points: Option<PathBuf>,
    },
    /// Box-counting statistics of the tile boundary.
    Boundary {
        #[command(flatten)]
        system: System,
        #[arg(long, default_value_t = 20)]
        depth: u32,
        #[arg(long, default_value_t = 4)]
        min_scale: u32,
        #[arg(long, default_value_t = 8)]
        max_scale: u32,
    },
    /// Distribution of truncated additive values over P(z), z in R(T).
    Stats {
        #[command(flatten)]
        system: System,
        #[command(flatten)]
        sample: Sample,
        /// sumdigits | zero | indicator:A | weights:A=W,...
        #[arg(long = "f", default_value = "sumdigits")]
        f: String,
        /// Truncation constant.
        #[arg(long = "C", default_value_t = 3.0)]
        c: f64,
        #[arg(long, default_value_t = 64)]
        bins: usize,
        #[arg(long, default_value_t = 4)]
        moments: usize,
        #[arg(long)]
        eta: bool,
        /// Depth for integer parts on real-coefficient inputs.
        #[arg(long, default_value_t = 12)]
        depth: u32,
        #[arg(long)]
        histogram: Option<PathBuf>,
    },
    /// Weyl sum over P(z), z in R(T).
    Weyl {
        #[command(flatten)]
        system: System,
        #[command(flatten)]
        sample: Sample,
        /// Frequency vector, repeatable (paired with --l).
        #[arg(long = "h", required = true, allow_hyphen_values = true)]
        h: Vec<String>,
        /// Digit position, repeatable.
        #[arg(long = "l", required = true)]
        l: Vec<usize>,
    },
    /// Count digit patterns of P(z).
    Patterns {
        #[command(flatten)]
        system: System,
        #[command(flatten)]
        sample: Sample,
        #[arg(long)]
        positions: String,
        #[arg(long)]
        pattern: String,
    },
    /// Count border hits F_l.
    Border {
        #[command(flatten)]
        system: System,
        #[command(flatten)]
        sample: Sample,
        #[arg(long = "l")]
        l: usize,
        #[arg(long, default_value_t = 12)]
        depth: u32,
    },
}

enum Failure {
    Domain(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn error_line(kind: &str, message: &str) {
    eprintln!("{}", json!({ "error": message, "kind": kind }));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            let first = e.to_string();
            error_line("usage", first.lines().next().unwrap_or("usage error"));
            return ExitCode::from(2);
        }
    };
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            error_line("usage", &e.to_string());
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    match run(&cli, start) {
        Ok(code) => code,
        Err(Failure::Domain(m)) => {
            error_line("domain", &m);
            ExitCode::from(1)
        }
        Err(Failure::Io(m)) => {
            error_line("io", &m);
            ExitCode::from(1)
        }
    }
}

fn system(s: &System) -> Result<NumberSystem, Error> {
    let ctx = ModulusContext::new(parse_poly(&s.poly)?)?;
    match &s.digits {
        Some(d) => NumberSystem::new(ctx, parse_int_list(d)?),
        None => NumberSystem::canonical(ctx),
    }
}

fn meta(cli: &Cli, start: Instant) -> Value {
    json!({
        "tool": "polynum",
        "version": env!("CARGO_PKG_VERSION"),
        "config": cli,
        "workers": rayon::current_num_threads(),
        "float_digits": SIGNIFICANT_DIGITS,
        "wall_time_ms": start.elapsed().as_millis() as u64,
    })
}

fn emit(cli: &Cli, start: Instant, result: Value) -> Result<(), Failure> {
    let mut doc = json!({ "meta": meta(cli, start), "result": result });
    round_json(&mut doc);
    let text = format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable"));
    match &cli.out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn additive(text: &str, ns: &NumberSystem) -> Result<AdditiveFunction, Error> {
    match text {
        "sumdigits" => Ok(AdditiveFunction::sum_of_digits(ns)),
        "zero" => Ok(AdditiveFunction::zero()),
        t if t.starts_with("indicator:") => {
            let a = t["indicator:".len()..]
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad indicator digit in {t:?}")))?;
            AdditiveFunction::indicator(a)
        }
        t if t.starts_with("weights:") => {
            let mut w = std::collections::BTreeMap::new();
            for item in t["weights:".len()..].split(',') {
                let (a, v) = item
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("expected digit=weight, got {item:?}")))?;
                let a: i64 = a.trim().parse().map_err(|_| Error::Parse(format!("bad digit {a:?}")))?;
                let v: f64 = v.trim().parse().map_err(|_| Error::Parse(format!("bad weight {v:?}")))?;
                w.insert(a, v);
            }
            AdditiveFunction::new("weights", w)
        }
        t => Err(Error::Parse(format!("unknown additive function {t:?}"))),
    }
}

fn run(cli: &Cli, start: Instant) -> Result<ExitCode, Failure> {
    match &cli.command {
        Command::Verify { system: s, slack, budget } => {
            let p = parse_poly(&s.poly)?;
            let digits = match &s.digits {
                Some(d) => parse_int_list(d)?,
                None => {
                    let ctx = ModulusContext::new(p.clone())?;
                    NumberSystem::canonical(ctx)?.digits().to_vec()
                }
            };
            match verify_number_system(&p, &digits, *slack, *budget) {
                Ok(report) => emit(cli, start, to_value(&report))?,
                Err(e @ Error::Budget { .. }) => {
                    let ctx = ModulusContext::new(p)?;
                    let conds = polynum::numsys::necessary_conditions(&ctx, &digits);
                    emit(cli, start, to_value(&VerifyReport::inconclusive(conds, e.to_string())))?;
                    return Ok(ExitCode::from(1));
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Expand { system: s, element, step_cap } => {
            let ns = system(s)?;
            let g = ns.ctx().reduce(&parse_poly(element)?);
            let e = ns.expand(&g, *step_cap)?;
            emit(
                cli,
                start,
                json!({ "element": g.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                        "digits": e.digits, "length": e.length() }),
            )?;
        }
        Command::Enumerate { system: s, t, budget } => {
            let ns = system(s)?;
            let region = region_bounds(*t, ns.ctx())?;
            let e = enumerate_region_coeffs(ns.ctx(), &region, *budget)?;
            let n = ns.ctx().degree();
            let mut csv = (0..n).map(|i| format!("coeff_{i}")).collect::<Vec<_>>().join(",");
            csv.push('\n');
            for p in &e.points {
                csv.push_str(&p.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","));
                csv.push('\n');
            }
            let mut summary = json!({ "meta": meta(cli, start),
                "result": { "count": e.points.len(), "boundary_band": e.boundary_band } });
            round_json(&mut summary);
            match &cli.out {
                Some(path) => {
                    write_file(path, csv.as_bytes())?;
                    println!("{}", serde_json::to_string_pretty(&summary).expect("serializable"));
                }
                None => {
                    std::io::stdout().write_all(csv.as_bytes())?;
                    eprintln!("{summary}");
                }
            }
        }
        Command::Count { system: s, t, budget } => {
            let ns = system(s)?;
            let c = count_region(ns.ctx(), &region_bounds(*t, ns.ctx())?, *budget)?;
            emit(cli, start, to_value(&c))?;
        }
        Command::Tile { system: s, depth, size, image, points } => {
            let ns = system(s)?;
            let geom = Geometry::new(&ns);
            let raster = geom.rasterize_tile(&TileParams {
                depth: *depth,
                grid: *size,
                ..Default::default()
            })?;
            if let Some(path) = image {
                write_file(path, &raster.to_ppm()?)?;
            }
            if let Some(path) = points {
                let n = raster.dim;
                let names = ["x", "y", "z"];
                let mut csv = (0..n)
                    .map(|i| names.get(i).map(|s| s.to_string()).unwrap_or(format!("x{i}")))
                    .collect::<Vec<_>>()
                    .join(",");
                csv.push('\n');
                for p in &raster.points {
                    csv.push_str(&p.iter().map(|c| fmt_sig(*c, SIGNIFICANT_DIGITS)).collect::<Vec<_>>().join(","));
                    csv.push('\n');
                }
                write_file(path, csv.as_bytes())?;
            }
            emit(
                cli,
                start,
                json!({ "points": raster.points.len(), "covered_cells": raster.cells.len(),
                        "area_estimate": raster.area_estimate, "max_sup_norm": raster.max_sup_norm,
                        "rho": geom.rho() }),
            )?;
        }
        Command::Boundary { system: s, depth, min_scale, max_scale } => {
            let ns = system(s)?;
            let b = Geometry::new(&ns).boundary_stats(*depth, *min_scale..=*max_scale)?;
            let mut v = to_value(&b);
            v["abs_det"] = json!(ns.ctx().abs_det().to_string());
            emit(cli, start, v)?;
        }
        Command::Stats { system: s, sample, f, c, bins, moments, eta, depth, histogram } => {
            let ns = system(s)?;
            let p = ResiduePoly::parse(ns.ctx(), &sample.p)?;
            let f = additive(f, &ns)?;
            let opts = HarnessOptions {
                truncation: *c,
                bins: *bins,
                max_moment: *moments,
                budget: sample.budget,
                eta: *eta,
                depth: *depth,
            };
            let report = clt_harness(&SamplePoly::Exact(p), &f, sample.t, &ns, &opts)?;
            if let Some(path) = histogram {
                let mut csv = String::from("bin_left,bin_right,count\n");
                for b in &report.histogram {
                    csv.push_str(&format!(
                        "{},{},{}\n",
                        fmt_sig(b.left, SIGNIFICANT_DIGITS),
                        fmt_sig(b.right, SIGNIFICANT_DIGITS),
                        b.count
                    ));
                }
                write_file(path, csv.as_bytes())?;
            }
            emit(cli, start, to_value(&report))?;
        }
        Command::Weyl { system: s, sample, h, l } => {
            let ns = system(s)?;
            if h.len() != l.len() {
                return Err(Failure::Domain("--h and --l must be given the same number of times".into()));
            }
            let terms = h
                .iter()
                .zip(l)
                .map(|(h, &l)| Ok((parse_int_list(h)?, l)))
                .collect::<Result<Vec<_>, Error>>()?;
            let p = ResiduePoly::parse(ns.ctx(), &sample.p)?;
            let w = weyl_sum(&terms, &p, sample.t, &ns, sample.budget)?;
            emit(cli, start, to_value(&w))?;
        }
        Command::Patterns { system: s, sample, positions, pattern } => {
            let ns = system(s)?;
            let positions: Vec<usize> = parse_int_list(positions)?
                .into_iter()
                .map(|x| usize::try_from(x).map_err(|_| Error::Parse(format!("negative position {x}"))))
                .collect::<Result<_, _>>()?;
            let digits = parse_int_list(pattern)?;
            let p = ResiduePoly::parse(ns.ctx(), &sample.p)?;
            let r = pattern_count(&positions, &digits, &p, sample.t, &ns, sample.budget)?;
            emit(cli, start, to_value(&r))?;
        }
        Command::Border { system: s, sample, l, depth } => {
            let ns = system(s)?;
            let p = ResiduePoly::parse(ns.ctx(), &sample.p)?;
            let r = border_hits(*l, &p, sample.t, &ns, *depth, sample.budget)?;
            emit(cli, start, to_value(&r))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}
