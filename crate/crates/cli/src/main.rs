mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use lattice_rotation::lattice::lattice_orbit;
use lattice_rotation::poincare::return_map;
use lattice_rotation::reduced::block_decomposition;
use lattice_rotation::reduced::classify::{classify_range, Classifier};
use lattice_rotation::reduced::{ClassifyConfig, OrbitClassification, ReducedSystem};
use lattice_rotation::verify::run_check;
use lattice_rotation::{Iet, LatticePoint, Params};
use num_bigint::BigInt;
use output::{Field, Format, Report};

#[derive(Parser)]
#[command(name = "latrot", version, about = "Exact integer dynamics of the lattice rotation map")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, allow_hyphen_values = true)]
    alpha: BigInt,
    #[arg(long, allow_hyphen_values = true)]
    beta: BigInt,
    /// Output format; sweeps default to csv, single results to json.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write data here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Lattice orbit of (x0, y0).
    Orbit {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        x0: BigInt,
        #[arg(long, allow_hyphen_values = true)]
        y0: BigInt,
        #[arg(long)]
        steps: u64,
    },
    /// Orbit of the first-return map on the positive x-axis.
    ReturnOrbit {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        x0: BigInt,
        #[arg(long)]
        returns: u64,
    },
    /// Minimal period of every x in [xmin, xmax]; blank when none is found.
    Periods {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        xmin: u64,
        #[arg(long)]
        xmax: u64,
        /// Return steps searched for a revisit (default 4 times the reduced modulus).
        #[arg(long)]
        max_period: Option<u64>,
    },
    /// Periodic or escaping, with the certificate used.
    Classify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        x: BigInt,
    },
    /// Fractions of periodic and escaping orbits on [0, xmax).
    Density {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        xmax: u64,
    },
    /// Orbit of the reduced system (canonical parameters only).
    ReducedOrbit {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        z: BigInt,
        #[arg(long)]
        steps: u64,
    },
    /// Cells of equal code in block n.
    Decompose {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        block: u64,
    },
    /// Run one check or all of them; exit status 1 if any fails.
    Verify {
        #[arg(value_parser = ["oracle", "sigma", "symmetry", "conjugacy", "special", "reduced", "invariants", "escape", "all"])]
        check: String,
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Orbit { common, .. }
            | Command::ReturnOrbit { common, .. }
            | Command::Periods { common, .. }
            | Command::Classify { common, .. }
            | Command::Density { common, .. }
            | Command::ReducedOrbit { common, .. }
            | Command::Decompose { common, .. }
            | Command::Verify { common, .. } => common,
        }
    }
}

type Failure = Box<dyn std::error::Error>;

/// Builds the report; the flag is false when a requested check failed.
fn execute(cmd: &Command, p: &Params) -> Result<(Report, bool), Failure> {
    let common = cmd.common();
    let mut r;
    let mut ok = true;
    match cmd {
        Command::Orbit { x0, y0, steps, .. } => {
            r = Report::new("orbit");
            r.table("points", &["t", "x", "y"]);
            let mut rows = Vec::new();
            let summary = lattice_orbit(p, LatticePoint::new(x0.clone(), y0.clone()), *steps, |t, pt| {
                rows.push(vec![t.into(), (&pt.x).into(), (&pt.y).into()]);
            });
            r.rows = rows;
            r.field("steps", *steps).field("returns", summary.return_events.len());
        }
        Command::ReturnOrbit { x0, returns, .. } => {
            r = Report::new("return-orbit");
            r.table("points", &["n", "x", "interval", "translation"]);
            let iet = if p.is_trivial() { None } else { Some(Iet::new(p)?) };
            let mut x = x0.clone();
            for n in 0..=*returns {
                let next = return_map(p, &x)?;
                let interval = iet.as_ref().map(|i| i.interval_of(&x)).transpose()?;
                let step = &next - &x;
                r.row(vec![n.into(), (&x).into(), interval.into(), step.into()]);
                x = next;
            }
            r.field("returns", *returns);
        }
        Command::Periods { xmin, xmax, max_period, .. } => {
            r = Report::new("periods");
            r.table("points", &["x", "period"]);
            let mut cfg = ClassifyConfig::for_params(p);
            if let Some(m) = max_period {
                cfg.period_budget = *m;
            }
            let classifier = Classifier::new(p, cfg)?;
            let mut rows = Vec::new();
            let end = xmax.checked_add(1).ok_or("xmax too large")?;
            let counts = classify_range(&classifier, *xmin, end.max(*xmin), |x, c| {
                let period = match c {
                    OrbitClassification::Periodic { period } => Some(*period),
                    _ => None,
                };
                rows.push(vec![x.into(), period.into()]);
            })?;
            r.rows = rows;
            r.field("total", counts.total).field("periodic", counts.periodic);
        }
        Command::Classify { x, .. } => {
            r = Report::new("classify");
            r.field("x", x);
            let c = Classifier::new(p, ClassifyConfig::for_params(p))?.classify(x)?;
            r.field("class", c.label());
            match c {
                OrbitClassification::Periodic { period } => {
                    r.field("period", period);
                }
                OrbitClassification::Escaping { direction, certified } => {
                    r.field("direction", direction).field("certified", certified);
                }
                OrbitClassification::Unresolved { budget } => {
                    r.field("budget", budget);
                }
            }
        }
        Command::Density { xmax, .. } => {
            r = Report::new("density");
            let classifier = Classifier::new(p, ClassifyConfig::for_params(p))?;
            let d = classify_range(&classifier, 0, *xmax, |_, _| {})?;
            r.field("total", d.total)
                .field("periodic", d.periodic)
                .field("escaping", d.escaping)
                .field("unresolved", d.unresolved)
                .field("periodic_fraction", d.periodic_fraction())
                .field("escaping_fraction", d.escaping_fraction());
        }
        Command::ReducedOrbit { z, steps, .. } => {
            r = Report::new("reduced-orbit");
            if !p.is_canonical() {
                let n = p.normalize().canonical;
                return Err(format!("reduced system needs canonical parameters; try --alpha {} --beta {}", n.alpha(), n.beta()).into());
            }
            let rs = ReducedSystem::new(p)?;
            r.table("points", &["t", "z", "interval", "block"]);
            let mut cur = z.clone();
            for t in 0..=*steps {
                r.row(vec![t.into(), (&cur).into(), rs.interval_of(&cur).into(), rs.block_of(&cur).into()]);
                cur = rs.step(&cur);
            }
            r.field("steps", *steps);
        }
        Command::Decompose { block, .. } => {
            r = Report::new("decompose");
            let d = block_decomposition(p, *block)?;
            r.field("block", d.n)
                .field("block_size", d.block_size)
                .field("regular_cells", d.regular_cells)
                .field("residual", d.residual);
            r.table("cells", &["start", "size", "k", "z"]);
            for c in &d.cells {
                r.row(vec![(&c.start).into(), c.size.into(), c.k.into(), c.z.as_ref().into()]);
            }
        }
        Command::Verify { check, .. } => {
            r = Report::new("verify");
            let results = run_check(check, p, common.seed)?;
            ok = results.iter().all(|c| c.passed);
            r.field("check", check.as_str()).field("seed", common.seed).field("passed", ok);
            r.table("checks", &["name", "passed", "detail"]);
            for c in results {
                r.row(vec![c.name.into(), c.passed.into(), c.detail.into()]);
            }
        }
    }
    Ok((r, ok))
}

fn default_format(cmd: &Command) -> Format {
    match cmd {
        Command::Classify { .. } | Command::Density { .. } | Command::Verify { .. } => Format::Json,
        _ => Format::Csv,
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let common = cli.command.common().clone();
    let p = Params::new(common.alpha.clone(), common.beta.clone())?;
    let start = Instant::now();
    let (mut report, ok) = execute(&cli.command, &p)?;
    let command = report.command;
    let mut head = vec![("alpha", Field::from(p.alpha())), ("beta", Field::from(p.beta()))];
    head.append(&mut report.fields);
    report.fields = head;
    let format = common.format.unwrap_or_else(|| default_format(&cli.command));
    let mut out: Box<dyn Write> = match &common.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    report.write(format, &mut out)?;
    out.flush()?;
    // Timing stays off stdout so repeated runs are byte-identical.
    eprintln!("latrot {command}: {:.3}s wall", start.elapsed().as_secs_f64());
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("latrot: error: {e}");
            ExitCode::from(2)
        }
    }
}
