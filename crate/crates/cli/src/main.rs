use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cvswap_core::sweep::{dump_state, load_params, load_spec, run_point, run_sweep};
use cvswap_core::Error;

#[derive(Debug, Parser)]
#[command(name = "cvswap", version, about = "Entanglement swapping with optomechanical sources")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one parameter point.
    Point {
        /// Site parameter file.
        #[arg(long)]
        config: PathBuf,
        /// Directory for covariance-matrix dumps.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Evaluate a two-axis grid and write CSV plus gnuplot matrices.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Axis and linkage file.
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, env = "CVSWAP_WORKERS")]
        workers: Option<usize>,
    },
}

const EXIT_CONFIG: u8 = 2;
const EXIT_FLAGGED: u8 = 3;

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        Error::Config { .. } | Error::InvalidArgument(_) => ExitCode::from(EXIT_CONFIG),
        Error::Io { .. } => ExitCode::from(EXIT_CONFIG),
        _ => ExitCode::FAILURE,
    }
}

fn point(config: PathBuf, dump: Option<PathBuf>) -> ExitCode {
    let params = match load_params(&config) {
        Ok(p) => p,
        Err(e) => return fail(&e),
    };
    let record = match dump {
        Some(dir) => match dump_state(&params, &dir) {
            Ok(r) => r,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_FLAGGED);
            }
        },
        None => run_point(&params),
    };
    println!("status={}", record.status);
    if let Some(msg) = &record.message {
        println!("message={msg}");
        return ExitCode::from(EXIT_FLAGGED);
    }
    let class = record.class.expect("ok records carry a class");
    println!("class={class} ({})", class.number());
    println!("G_b/omega_m={:.6} G_c/omega_m={:.6}", record.couplings[0], record.couplings[1]);
    println!("mu_B={:.8} mu_RB={:.8} mu_BC={:.8} chi={:.6}", record.mu_b, record.mu_rb, record.mu_bc, record.chi);
    println!("E_N_RRE={:.6} E_N_CCE={:.6}", record.e_n_rre, record.e_n_cce);
    ExitCode::SUCCESS
}

fn sweep(config: PathBuf, spec: PathBuf, out: PathBuf, workers: Option<usize>) -> ExitCode {
    let spec = match load_params(&config).and_then(|base| load_spec(&spec, base)) {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };
    let workers = workers
        .or_else(|| std::thread::available_parallelism().ok().map(|n| n.get()))
        .unwrap_or(1);
    if workers == 0 {
        eprintln!("error: workers must be at least 1");
        return ExitCode::from(EXIT_CONFIG);
    }
    let result = run_sweep(&spec, workers);
    if let Err(e) = result.write(&out) {
        eprintln!("error: {e}");
        return ExitCode::FAILURE;
    }
    println!("{}", result.summary());
    println!("wrote {}", out.display());
    if result.flagged() > 0 {
        ExitCode::from(EXIT_FLAGGED)
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Point { config, dump } => point(config, dump),
        Command::Sweep { config, spec, out, workers } => sweep(config, spec, out, workers),
    }
}
