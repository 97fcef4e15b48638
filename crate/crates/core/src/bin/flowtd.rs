use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::AtomicBool;
use std::sync::Arc;

use clap::Parser;
use signal_hook::consts::{SIGINT, SIGTERM};

use flowtd::anytime::{self, Mode, RunConfig, RunError, DEFAULT_LARGE_THRESHOLD};
use flowtd::io::parse_gr;
use flowtd::SeparatorMode;

/// Computes tree decompositions of PACE .gr graphs, printing better .td
/// solutions as they are found.
#[derive(Parser, Debug)]
#[command(version)]
struct Args {
    /// Input graph; standard input if omitted.
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1800)]
    max_seconds: u64,
    /// Minimum number of seconds between two printed solutions; 30 or
    /// max-seconds, whichever is smaller, if omitted.
    #[arg(long)]
    output_interval: Option<u64>,
    /// auto, flowcutter, min-degree or min-fill.
    #[arg(long, default_value = "auto")]
    mode: Mode,
    /// node or edge; chosen by instance size if omitted.
    #[arg(long)]
    separator_mode: Option<SeparatorMode>,
    /// Edge count above which an instance counts as large.
    #[arg(long, default_value_t = DEFAULT_LARGE_THRESHOLD)]
    large_threshold: usize,
    /// Check every decomposition before printing it.
    #[arg(long)]
    validate: bool,
    /// Stop after this many nested-dissection runs.
    #[arg(long)]
    max_iterations: Option<usize>,
}

fn read_input(path: Option<&PathBuf>) -> io::Result<String> {
    match path {
        Some(p) => std::fs::read_to_string(p),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            // --help and --version also arrive here
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let stop = Arc::new(AtomicBool::new(false));
    for sig in [SIGINT, SIGTERM] {
        if let Err(e) = signal_hook::flag::register(sig, Arc::clone(&stop)) {
            eprintln!("cannot install signal handler: {e}");
            return ExitCode::from(2);
        }
    }

    let text = match read_input(args.input.as_ref()) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read input: {e}");
            return ExitCode::from(1);
        }
    };
    let parsed = match parse_gr(&text) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("invalid graph: {e}");
            return ExitCode::from(1);
        }
    };
    if parsed.dropped_edges > 0 {
        eprintln!("warning: dropped {} self-loops or repeated edges", parsed.dropped_edges);
    }

    let cfg = RunConfig {
        seed: args.seed,
        max_seconds: args.max_seconds,
        output_interval_seconds: args.output_interval.unwrap_or(args.max_seconds.min(30)),
        mode: args.mode,
        separator_mode: args.separator_mode,
        large_instance_edge_threshold: args.large_threshold,
        validate: args.validate,
        max_iterations: args.max_iterations,
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match anytime::run(&parsed.graph, &cfg, &stop, &mut out) {
        Ok(summary) => {
            eprintln!(
                "width {} ({}, after {:.1}s), {} runs, {} outputs, stopped: {:?}",
                summary.best.width,
                summary.best.producer,
                summary.best.found_after.as_secs_f64(),
                summary.iterations,
                summary.emissions,
                summary.stop
            );
            ExitCode::SUCCESS
        }
        Err(e @ RunError::Config(_)) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}
