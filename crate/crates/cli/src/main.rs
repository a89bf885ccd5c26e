use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use shallowpack::fit::fit_loglog;
use shallowpack::setsystem::{Family, Generator};

mod config;
mod experiment;

use config::{Config, Format};
use experiment::Experiment;

#[derive(Parser)]
#[command(name = "shallowpack", version, about = "Packing, sampling and spanning-tree experiments on set systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
        /// Write the report here instead of the config's `output`.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Print the validated config, overrides applied, instead of running it.
        #[arg(long)]
        print_config: bool,
    },
    /// Fit the log-log slope of a CSV column against another.
    Fit {
        csv: PathBuf,
        /// Column holding the swept variable.
        #[arg(long)]
        col: String,
        /// Column holding the measured size.
        #[arg(long, default_value = "packing_size")]
        y: String,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Generate a set system and write it in text form.
    Gen {
        /// halfplanes, discs, slabs or grid (also halfspaces, balls, rectangle-grid).
        generator: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Cell size of the grid family.
        #[arg(long, default_value_t = 1)]
        delta: usize,
        /// Keep only sets of size at most k.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
        /// Also write the ground points as CSV.
        #[arg(long)]
        points: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Overrides {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

enum Failure {
    Validation(String),
    Runtime(String),
}

impl Failure {
    fn exit(self) -> ExitCode {
        match self {
            Failure::Validation(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(1)
            }
            Failure::Runtime(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("SHALLOWPACK_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::Validation(format!("SHALLOWPACK_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Runtime(e.to_string()))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", p.display()))),
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            // a closed pipe (`| head`) is not a failure
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Runtime(e.to_string())),
            _ => Ok(()),
        },
    }
}

fn run(config: &Path, overrides: Overrides, output: Option<PathBuf>, print_config: bool) -> Result<(), Failure> {
    let text = fs::read_to_string(config)
        .map_err(|e| Failure::Validation(format!("cannot read {}: {e}", config.display())))?;
    let mut cfg = Config::parse(&text).map_err(|e| Failure::Validation(format!("{}: {e}", config.display())))?;
    if let Some(seed) = overrides.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = overrides.trials {
        if trials == 0 {
            return Err(Failure::Validation("--trials must be >= 1".into()));
        }
        cfg.trials = trials;
    }
    if let Some(format) = overrides.format {
        cfg.format = format;
    }
    // built after the overrides: the scaling spec copies seed and trials
    let exp = match Experiment::from_config(&cfg) {
        Ok(e) => e,
        Err(e) => return Err(Failure::Validation(format!("{}: {e}", config.display()))),
    };
    if print_config {
        return write_output(None, &cfg.to_text());
    }
    let report = experiment::run(&exp, cfg.seed, cfg.trials, cfg.format).map_err(|e| Failure::Runtime(e.to_string()))?;
    let target = output.or_else(|| {
        cfg.output
            .as_ref()
            .map(|o| config.parent().unwrap_or(Path::new("")).join(o))
    });
    write_output(target.as_deref(), &report)
}

fn column(headers: &csv::StringRecord, name: &str) -> Result<usize, Failure> {
    headers.iter().position(|h| h == name).ok_or_else(|| {
        Failure::Validation(format!(
            "no column `{name}` (columns: {})",
            headers.iter().collect::<Vec<_>>().join(", ")
        ))
    })
}

fn fit(path: &Path, col: &str, y: &str, format: Format) -> Result<(), Failure> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .from_path(path)
        .map_err(|e| Failure::Validation(format!("cannot read {}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| Failure::Validation(e.to_string()))?
        .clone();
    let (xi, yi) = (column(&headers, col)?, column(&headers, y)?);
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Failure::Validation(e.to_string()))?;
        // a blank line ends the table
        if record.iter().all(str::is_empty) {
            break;
        }
        let value = |i: usize, name: &str| -> Result<f64, Failure> {
            record
                .get(i)
                .and_then(|v| v.trim().parse().ok())
                .ok_or_else(|| Failure::Validation(format!("row {}: column `{name}` is not a number", row + 2)))
        };
        xs.push(value(xi, col)?);
        ys.push(value(yi, y)?);
    }
    let f = fit_loglog(&xs, &ys).map_err(|e| Failure::Validation(e.to_string()))?;
    let text = match format {
        Format::Csv => format!("column,slope,slope_se,points\n{col},{},{},{}\n", f.slope, f.slope_se, f.points),
        Format::Json => {
            let v = serde_json::json!({"column": col, "slope": f.slope, "slope_se": f.slope_se, "points": f.points});
            serde_json::to_string_pretty(&v).expect("json") + "\n"
        }
    };
    write_output(None, &text)
}

#[allow(clippy::too_many_arguments)]
fn gen(
    id: &str,
    n: usize,
    dim: usize,
    delta: usize,
    k: Option<usize>,
    seed: u64,
    output: &Path,
    points: Option<&Path>,
) -> Result<(), Failure> {
    let family: Family = id.parse().map_err(|e: shallowpack::Error| Failure::Validation(e.to_string()))?;
    let generator = Generator::new(family, dim).map_err(|e| Failure::Validation(e.to_string()))?;
    let mut sys = generator.build(n, delta, seed).map_err(|e| Failure::Runtime(e.to_string()))?;
    if let Some(k) = k {
        sys = shallowpack::packing::shallow_filter(&sys, k);
    }
    write_output(Some(output), &sys.to_text())?;
    if let Some(p) = points {
        if family == Family::Grid {
            return Err(Failure::Validation("the grid family has no ground points".into()));
        }
        let pts = generator.points(n, seed).map_err(|e| Failure::Runtime(e.to_string()))?;
        write_output(Some(p), &pts.to_csv())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Run {
            config,
            overrides,
            output,
            print_config,
        } => run(&config, overrides, output, print_config),
        Command::Fit { csv, col, y, format } => fit(&csv, &col, &y, format),
        Command::Gen {
            generator,
            n,
            dim,
            delta,
            k,
            seed,
            output,
            points,
        } => gen(&generator, n, dim, delta, k, seed, &output, points.as_deref()),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.exit(),
    }
}
