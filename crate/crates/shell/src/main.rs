use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use eigenlogic_shell::cli;
use eigenlogic_shell::config::SimConfig;
use eigenlogic_shell::server::{serve_on, ServeOptions, DEFAULT_CADENCE_HZ};
use eigenlogic_shell::session::Session;

#[derive(Parser)]
#[command(name = "eigenlogic", version, about = "Logical observables, fuzzy membership and vehicle simulation")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the truth table and diagonal of a connective or formula.
    TruthTable {
        /// Connective name (AND, XOR, ...), 4-bit string, min, max, or a formula.
        connective: String,
        /// Number of truth values.
        #[arg(long, default_value_t = 2)]
        m: u32,
    },
    /// Fuzzy membership of a formula given one degree of truth per variable.
    Membership {
        formula: String,
        #[arg(required = true)]
        mu: Vec<f64>,
    },
    /// Classical value of a formula, variables in order of first appearance.
    Eval {
        formula: String,
        values: Vec<u32>,
        #[arg(long, default_value_t = 2)]
        m: u32,
    },
    /// Run a config to completion and write the trajectory CSV.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Serve a live session over WebSocket at /ws.
    Serve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        /// Steps per second while running.
        #[arg(long, default_value_t = DEFAULT_CADENCE_HZ)]
        cadence: f64,
        #[arg(long)]
        paused: bool,
    },
}

fn run(args: Args) -> anyhow::Result<()> {
    match args.command {
        Command::TruthTable { connective, m } => print!("{}", cli::truth_table(&connective, m)?),
        Command::Membership { formula, mu } => print!("{}", cli::membership_report(&formula, &mu)?),
        Command::Eval { formula, values, m } => print!("{}", cli::eval_report(&formula, &values, m)?),
        Command::Simulate { config, out } => print!("{}", cli::simulate(&config, &out)?),
        Command::Serve { config, port, host, cadence, paused } => {
            let config = SimConfig::load(&config)?;
            let session = Session::new(config.world()?, config.dt);
            let opts = ServeOptions { cadence_hz: cadence, start_paused: paused };
            tokio::runtime::Runtime::new()?.block_on(async {
                let listener = tokio::net::TcpListener::bind(SocketAddr::new(host, port)).await?;
                eprintln!("listening on ws://{}/ws", listener.local_addr()?);
                serve_on(listener, session, opts).await
            })?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    tracing_subscriber::fmt().with_writer(std::io::stderr).init();
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
