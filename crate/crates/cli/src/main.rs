use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use blockenc::gallery::{random_structured32, random_tridiagonal, tridiagonal_coefficients, tridiagonal_from};
use blockenc::pipeline::plan_table;
use blockenc::{
    compile, stats, verify_circuit, CompileConfig, DiagonalStrategy, FixedIndexPolicy, IrFile, SparseMatrix,
    VerificationReport,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};

#[derive(Parser)]
#[command(name = "blockenc", version, about = "Compile sparse matrices into block-encoding circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a matrix JSON file into a circuit.
    Compile {
        #[arg(long = "in")]
        input: PathBuf,
        /// Circuit output; `.json` selects the JSON form, anything else text.
        #[arg(long)]
        out: PathBuf,
        /// Where to write the stats JSON (stdout when absent).
        #[arg(long)]
        stats: Option<PathBuf>,
        #[command(flatten)]
        options: CompileOptions,
    },
    /// Check a circuit against a matrix by dense simulation.
    Verify {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Subnormalization; read from the circuit file when absent.
        #[arg(long)]
        alpha: Option<f64>,
        /// Where to write the JSON report.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Print compilation statistics for a matrix.
    Stats {
        #[arg(long = "in")]
        input: PathBuf,
        /// Also print the per-item plan table.
        #[arg(long)]
        plan: bool,
        #[command(flatten)]
        options: CompileOptions,
    },
    /// Convert a circuit between the text and JSON forms.
    Export {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build, compile and verify one of the built-in examples.
    Demo {
        #[arg(value_enum)]
        example: Example,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Six comma-separated coefficients `a,b,c,d,e,f` for the tridiagonal
        /// values `a+bi`, `c+di`, `e+fi`.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        coeffs: Option<Vec<f64>>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Also write the circuit.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the generated matrix as JSON.
        #[arg(long)]
        matrix_out: Option<PathBuf>,
        #[command(flatten)]
        options: CompileOptions,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Example {
    Tridiagonal,
    Structured,
}

#[derive(Args, Clone)]
struct CompileOptions {
    /// Main-diagonal strategy: auto, 1, 2 or 3.
    #[arg(long, default_value = "auto", value_parser = parse_strategy)]
    strategy: DiagonalStrategy,
    /// Fixed positions on the data register: right, left or
    /// explicit:<comma-separated bit positions>.
    #[arg(long = "fixed-index", default_value = "right", value_parser = parse_policy)]
    fixed_index: FixedIndexPolicy,
    #[arg(long)]
    no_zero_pad: bool,
    /// Leave out the index-mapping stage.
    #[arg(long)]
    skip_oc: bool,
    #[arg(long)]
    defer_restore: bool,
}

impl CompileOptions {
    fn config(&self) -> CompileConfig {
        CompileConfig {
            strategy: self.strategy,
            data_policy: self.fixed_index.clone(),
            zero_pad: !self.no_zero_pad,
            skip_oc: self.skip_oc,
            defer_restore: self.defer_restore,
            ..CompileConfig::default()
        }
    }
}

fn parse_strategy(s: &str) -> std::result::Result<DiagonalStrategy, String> {
    if s == "auto" {
        return Ok(DiagonalStrategy::Auto);
    }
    s.parse::<u8>()
        .ok()
        .and_then(DiagonalStrategy::from_number)
        .ok_or_else(|| format!("expected auto, 1, 2 or 3, got {s:?}"))
}

fn parse_policy(s: &str) -> std::result::Result<FixedIndexPolicy, String> {
    match s {
        "right" => Ok(FixedIndexPolicy::RightEnded),
        "left" => Ok(FixedIndexPolicy::LeftEnded),
        _ => {
            let list = s
                .strip_prefix("explicit:")
                .ok_or_else(|| format!("expected right, left or explicit:<bits>, got {s:?}"))?;
            let bits = list
                .split(',')
                .map(|b| b.trim().parse::<usize>().map_err(|_| format!("bad bit position {b:?}")))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            Ok(FixedIndexPolicy::Explicit(bits))
        }
    }
}

fn read_matrix(path: &Path) -> Result<SparseMatrix> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    SparseMatrix::from_json(&text).with_context(|| format!("parsing matrix {}", path.display()))
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn read_ir(path: &Path) -> Result<IrFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let parsed = if is_json(path) {
        IrFile::from_json(&text)
    } else {
        IrFile::from_text(&text)
    };
    parsed.with_context(|| format!("parsing circuit {}", path.display()))
}

fn write_ir(path: &Path, ir: &IrFile) -> Result<()> {
    let text = if is_json(path) { ir.to_json() } else { ir.to_text() };
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn check_output(path: &Path) -> Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() && !dir.is_dir() => {
            bail!("output directory {} does not exist", dir.display())
        }
        _ => Ok(()),
    }
}

fn check_input(path: &Path) -> Result<()> {
    if !path.is_file() {
        bail!("input file {} does not exist", path.display());
    }
    Ok(())
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn as_value(json: &str) -> Result<serde_json::Value> {
    Ok(serde_json::from_str(json)?)
}

fn report_outcome(report: &VerificationReport) -> ExitCode {
    eprintln!("{}", report.summary());
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Compile {
            input,
            out,
            stats: stats_path,
            options,
        } => {
            check_input(&input)?;
            check_output(&out)?;
            if let Some(p) = &stats_path {
                check_output(p)?;
            }
            let matrix = read_matrix(&input)?;
            let encoded = compile(&matrix, &options.config())?;
            info!(
                "compiled {} gates on {} qubits, alpha {}",
                encoded.circuit.len(),
                encoded.layout.total(),
                encoded.alpha
            );
            write_ir(
                &out,
                &IrFile {
                    circuit: encoded.circuit.clone(),
                    alpha: Some(encoded.alpha),
                },
            )?;
            emit(stats_path.as_deref(), &stats(&encoded)?.to_json())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            matrix,
            circuit,
            tol,
            alpha,
            report,
        } => {
            check_input(&matrix)?;
            check_input(&circuit)?;
            if let Some(p) = &report {
                check_output(p)?;
            }
            let a = read_matrix(&matrix)?;
            let ir = read_ir(&circuit)?;
            let alpha = match (alpha, ir.alpha) {
                (Some(x), _) | (None, Some(x)) => x,
                (None, None) => bail!("circuit file has no alpha line; pass --alpha"),
            };
            let result = verify_circuit(&a, &ir.circuit, alpha, tol)?;
            emit(report.as_deref(), &result.to_json())?;
            Ok(report_outcome(&result))
        }
        Command::Stats { input, plan, options } => {
            check_input(&input)?;
            let matrix = read_matrix(&input)?;
            let encoded = compile(&matrix, &options.config())?;
            println!("{}", stats(&encoded)?.to_json());
            if plan {
                let rows = plan_table(&encoded.plan);
                println!("{}", serde_json::to_string_pretty(&rows)?);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Export { input, out } => {
            check_input(&input)?;
            check_output(&out)?;
            if is_json(&input) == is_json(&out) {
                warn!("input and output use the same format");
            }
            write_ir(&out, &read_ir(&input)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Demo {
            example,
            seed,
            coeffs,
            tol,
            out,
            matrix_out,
            options,
        } => {
            for p in out.iter().chain(&matrix_out) {
                check_output(p)?;
            }
            let matrix = match example {
                Example::Tridiagonal => match coeffs {
                    Some(c) => {
                        let Ok(c) = <[f64; 6]>::try_from(c) else {
                            bail!("--coeffs takes exactly six values");
                        };
                        tridiagonal_from(c)?
                    }
                    None => {
                        info!("coefficients {:?}", tridiagonal_coefficients(seed));
                        random_tridiagonal(seed)
                    }
                },
                Example::Structured => {
                    if coeffs.is_some() {
                        bail!("--coeffs applies to the tridiagonal example only");
                    }
                    random_structured32(seed)
                }
            };
            if let Some(p) = &matrix_out {
                fs::write(p, matrix.to_json()).with_context(|| format!("writing {}", p.display()))?;
            }
            let encoded = compile(&matrix, &options.config())?;
            if let Some(p) = &out {
                write_ir(
                    p,
                    &IrFile {
                        circuit: encoded.circuit.clone(),
                        alpha: Some(encoded.alpha),
                    },
                )?;
            }
            let report = verify_circuit(&matrix, &encoded.circuit, encoded.alpha, tol)?;
            let st = stats(&encoded)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::json!({
                    "stats": as_value(&st.to_json())?,
                    "verification": as_value(&report.to_json())?,
                }))?
            );
            Ok(report_outcome(&report))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("BLOCKENC_LOG", "warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
