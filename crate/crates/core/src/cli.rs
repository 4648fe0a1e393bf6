//! Batch commands behind the `lotforge` binary.
//!
//! Exit codes: 0 success, 1 validation failure, 2 input error, 3 internal
//! error.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::catalog::{builtin_catalog, load_catalog, Catalog};
use crate::metric::Metric;
use crate::metrics::{score_scene, MetricError, ScoreConfig, SunSample};
use crate::render::{render_plan, RenderOptions};
use crate::scene::{decode_scene, validate_scene, Scene, ValidationIssue};
use crate::service::{AppState, ServiceConfig, Store, StoreError};
use crate::survey::{analyze, ingest_ratings, ingest_responses};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Ok = 0,
    ValidationFailure = 1,
    InputError = 2,
    InternalError = 3,
}

impl From<ExitStatus> for ExitCode {
    fn from(s: ExitStatus) -> Self {
        ExitCode::from(s as u8)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "lotforge",
    version,
    about = "Validate, score, render and analyze lot designs"
)]
pub struct Cli {
    /// Catalog document to use instead of the built-in one.
    #[arg(long, global = true, value_name = "PATH")]
    pub catalog: Option<PathBuf>,
    /// Print nothing on success.
    #[arg(long, short, global = true)]
    pub quiet: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a scene document against the catalog.
    Validate { scene: PathBuf },
    /// Print the eight metric scores of a scene.
    Score {
        scene: PathBuf,
        /// Scoring constants (JSON); defaults are used for missing keys.
        #[arg(long, value_name = "PATH")]
        config: Option<PathBuf>,
        /// Also print the intermediate quantities.
        #[arg(long)]
        breakdown: bool,
    },
    /// Write an SVG plan view.
    Render {
        scene: PathBuf,
        /// Output file; stdout when absent.
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
        #[arg(long)]
        shadows: bool,
        /// Sun for the shadow layer as `altitude,azimuth` in degrees.
        #[arg(long, value_name = "ALT,AZ", allow_hyphen_values = true)]
        sun: Option<String>,
        #[arg(long)]
        legend: bool,
    },
    /// Aggregate survey ratings and compare against designated metrics.
    Analyze {
        ratings: PathBuf,
        /// Catalog holding the designated metrics and lexicons.
        #[arg(long, value_name = "PATH")]
        designated: Option<PathBuf>,
        /// Free-text responses to code.
        #[arg(long, value_name = "PATH")]
        responses: Option<PathBuf>,
        /// Write the report here instead of stdout.
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Run the HTTP design service until interrupted.
    Serve {
        #[arg(long, env = "LOTFORGE_PORT", default_value_t = crate::service::DEFAULT_PORT)]
        port: u16,
        #[arg(long, env = "LOTFORGE_DATA_DIR", default_value = "lotforge-data")]
        data_dir: PathBuf,
        #[arg(long, env = "LOTFORGE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "127.0.0.1")]
        bind: std::net::IpAddr,
    },
}

/// A failed command: exit status plus message for stderr.
#[derive(Debug)]
pub struct Failure {
    pub status: ExitStatus,
    pub message: String,
}

fn input(message: impl Into<String>) -> Failure {
    Failure {
        status: ExitStatus::InputError,
        message: message.into(),
    }
}

fn internal(message: impl Into<String>) -> Failure {
    Failure {
        status: ExitStatus::InternalError,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load_scene(path: &Path) -> Result<Scene, Failure> {
    decode_scene(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn catalog_from(path: Option<&Path>) -> Result<Catalog, Failure> {
    match path {
        None => Ok(builtin_catalog()),
        Some(p) => load_catalog(&read(p)?).map_err(|e| input(format!("{}: {e}", p.display()))),
    }
}

fn issues_text(issues: &[ValidationIssue]) -> String {
    let mut out = String::new();
    for i in issues {
        let _ = writeln!(out, "{i}");
    }
    let n = issues.len();
    let _ = writeln!(out, "{n} issue{}", if n == 1 { "" } else { "s" });
    out
}

fn issues_json(issues: &[ValidationIssue]) -> String {
    let errors = issues.iter().filter(|i| i.is_error()).count();
    serde_json::to_string_pretty(&serde_json::json!({ "errors": errors, "issues": issues }))
        .expect("issues serialize")
        + "\n"
}

/// Runs one command, writing its report to `out`. Returns the exit status
/// or a failure whose message belongs on stderr.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<ExitStatus, Failure> {
    let catalog = catalog_from(cli.catalog.as_deref())?;
    let mut emit = |text: &str| -> Result<(), Failure> {
        out.write_all(text.as_bytes())
            .map_err(|e| internal(format!("write failed: {e}")))
    };
    match &cli.command {
        Command::Validate { scene } => {
            let scene = load_scene(scene)?;
            let issues = validate_scene(&scene, &catalog);
            let failed = issues.iter().any(|i| i.is_error());
            if !cli.quiet || failed {
                emit(&match cli.format {
                    Format::Text => issues_text(&issues),
                    Format::Json => issues_json(&issues),
                })?;
            }
            Ok(if failed {
                ExitStatus::ValidationFailure
            } else {
                ExitStatus::Ok
            })
        }
        Command::Score {
            scene,
            config,
            breakdown,
        } => {
            let scene = load_scene(scene)?;
            let config = match config {
                None => ScoreConfig::default(),
                Some(p) => ScoreConfig::from_json(&read(p)?)
                    .map_err(|e| input(format!("{}: {e}", p.display())))?,
            };
            let report = match score_scene(&scene, &catalog, &config) {
                Ok(r) => r,
                Err(MetricError::InvalidScene(issues)) => {
                    emit(&match cli.format {
                        Format::Text => issues_text(&issues),
                        Format::Json => issues_json(&issues),
                    })?;
                    return Ok(ExitStatus::ValidationFailure);
                }
                Err(e) => return Err(internal(e.to_string())),
            };
            if cli.quiet {
                return Ok(ExitStatus::Ok);
            }
            let text = match cli.format {
                Format::Json => {
                    let json = if *breakdown {
                        serde_json::to_string_pretty(&report)
                    } else {
                        serde_json::to_string_pretty(&report.scores)
                    };
                    json.map_err(|e| internal(e.to_string()))? + "\n"
                }
                Format::Text => {
                    let mut s = String::new();
                    for m in Metric::ALL {
                        let _ = writeln!(s, "{:<14}{:.2}", m.id(), report.scores.get(m));
                    }
                    if *breakdown {
                        let b = &report.breakdown;
                        let _ = writeln!(s);
                        let _ = writeln!(s, "shaded fraction           {:.4}", b.shaded_fraction);
                        let _ =
                            writeln!(s, "shaded seat fraction      {:.4}", b.shaded_seat_fraction);
                        let _ = writeln!(s, "seats                     {}", b.seats);
                        let _ = writeln!(s, "lighting coverage         {:.4}", b.lighting_coverage);
                        let _ = writeln!(
                            s,
                            "supervised play fraction  {:.4}",
                            b.supervised_play_fraction
                        );
                        let _ = writeln!(s, "play capacity             {}", b.play_capacity);
                        let _ =
                            writeln!(s, "adult activity capacity   {}", b.adult_activity_capacity);
                        let _ = writeln!(s, "green area m2             {:.2}", b.green_area);
                        let _ = writeln!(s, "animals                   {}", b.animal_count);
                        let _ =
                            writeln!(s, "open area near stage m2   {:.2}", b.open_area_near_stage);
                        let _ = writeln!(s, "sociability pairs         {}", b.sociability_pairs);
                    }
                    s
                }
            };
            emit(&text)?;
            Ok(ExitStatus::Ok)
        }
        Command::Render {
            scene,
            output,
            shadows,
            sun,
            legend,
        } => {
            let sun = sun
                .as_deref()
                .map(SunSample::parse_pair)
                .transpose()
                .map_err(|e| input(e.to_string()))?;
            let scene = load_scene(scene)?;
            let options = RenderOptions {
                show_shadows: *shadows || sun.is_some(),
                sun,
                legend: *legend,
            };
            let svg =
                render_plan(&scene, &catalog, &options).map_err(|e| internal(e.to_string()))?;
            match output {
                Some(p) => {
                    fs::write(p, svg).map_err(|e| input(format!("{}: {e}", p.display())))?;
                }
                None => emit(&svg)?,
            }
            Ok(ExitStatus::Ok)
        }
        Command::Analyze {
            ratings,
            designated,
            responses,
            output,
        } => {
            let designations = match designated {
                Some(p) => catalog_from(Some(p))?,
                None => catalog,
            };
            let file = fs::File::open(ratings)
                .map_err(|e| input(format!("{}: {e}", ratings.display())))?;
            let dataset =
                ingest_ratings(file).map_err(|e| input(format!("{}: {e}", ratings.display())))?;
            let responses = match responses {
                Some(p) => {
                    let f =
                        fs::File::open(p).map_err(|e| input(format!("{}: {e}", p.display())))?;
                    Some(ingest_responses(f).map_err(|e| input(format!("{}: {e}", p.display())))?)
                }
                None => None,
            };
            let report = analyze(&dataset, &designations, responses.as_deref())
                .map_err(|e| input(e.to_string()))?;
            let text = match cli.format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json(),
            };
            match output {
                Some(p) => {
                    fs::write(p, &text).map_err(|e| input(format!("{}: {e}", p.display())))?;
                    if !cli.quiet {
                        emit(&format!(
                            "agreement {}/{}, {} rater(s) excluded; report written to {}\n",
                            report.agreement.agree_count,
                            report.agreement.total,
                            report.excluded_raters.len(),
                            p.display()
                        ))?;
                    }
                }
                None => {
                    if !cli.quiet {
                        emit(&text)?;
                    }
                }
            }
            Ok(ExitStatus::Ok)
        }
        Command::Serve {
            port,
            data_dir,
            seed,
            bind,
        } => {
            let config = ServiceConfig {
                data_dir: data_dir.clone(),
                bind: *bind,
                port: *port,
                seed: *seed,
            };
            serve_blocking(config, catalog, cli.quiet)?;
            Ok(ExitStatus::Ok)
        }
    }
}

fn serve_blocking(config: ServiceConfig, catalog: Catalog, quiet: bool) -> Result<(), Failure> {
    let store = Store::open(&config.data_dir).map_err(|e| match e {
        StoreError::Io(e) => input(format!("{}: {e}", config.data_dir.display())),
        other => internal(other.to_string()),
    })?;
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(|e| internal(e.to_string()))?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(config.addr())
            .await
            .map_err(|e| input(format!("cannot listen on {}: {e}", config.addr())))?;
        if !quiet {
            let addr = listener.local_addr().map_err(|e| internal(e.to_string()))?;
            eprintln!("lotforge: serving on http://{addr}");
        }
        let state = AppState::new(store, catalog, config.seed);
        crate::service::serve(listener, state, shutdown_signal())
            .await
            .map_err(|e| internal(e.to_string()))
    })
}

async fn shutdown_signal() {
    let ctrl_c = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    #[cfg(unix)]
    let term = async {
        match tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
            Ok(mut s) => {
                s.recv().await;
            }
            Err(_) => std::future::pending::<()>().await,
        }
    };
    #[cfg(not(unix))]
    let term = std::future::pending::<()>();
    tokio::select! {
        _ = ctrl_c => {},
        _ = term => {},
    }
}

/// Entry point for the binary: parse arguments, run, map to an exit code.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(&cli, &mut lock) {
        Ok(status) => status.into(),
        Err(f) => {
            let _ = lock.flush();
            eprintln!("lotforge: {}", f.message);
            f.status.into()
        }
    }
}
