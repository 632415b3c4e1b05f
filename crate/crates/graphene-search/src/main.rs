use std::path::PathBuf;

use clap::{Parser, Subcommand};

use graphene_search::cli::{
    cmd_scaling, cmd_search, cmd_spectrum, cmd_transfer, ScalingOptions, SearchOptions,
    SpectrumOptions, TransferOptions,
};

/// Continuous-time quantum search on honeycomb tori.
#[derive(Parser)]
#[command(name = "graphene-search", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spectrum of H_gamma over a gamma grid (avoided-crossing picture)
    Spectrum {
        /// Torus size as MxN cells
        #[arg(long, default_value = "12x12")]
        cells: String,
        /// Gamma grid as FROM:TO:STEP
        #[arg(long, default_value = "0:1.2:0.005")]
        gamma: String,
        /// Marked site as alpha,beta,sublattice
        #[arg(long, default_value = "0,0,A")]
        mark: String,
        /// CSV output path
        #[arg(long, default_value = "spectrum.csv")]
        out: PathBuf,
        /// Optional SVG replica of the spectrum-vs-gamma figure
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Search run at gamma = 1: neighbor probabilities over time
    Search {
        #[arg(long, default_value = "12x12")]
        cells: String,
        #[arg(long, default_value = "0,0,A")]
        mark: String,
        /// Starting state: optimal | uniform-dirac
        #[arg(long, default_value = "optimal")]
        start: String,
        /// Time step (default: reduced rotation time / 200)
        #[arg(long)]
        dt: Option<f64>,
        /// Last time on the grid (default: 2.5 x reduced rotation time)
        #[arg(long)]
        tmax: Option<f64>,
        #[arg(long, default_value = "search.csv")]
        out: PathBuf,
        /// Optional SVG of the probability time series
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Scaling studies across lattice sizes
    Scaling {
        /// gap | time | amplitude | moments
        #[arg(long, default_value = "gap")]
        study: String,
        /// Sizes as LO..HI:STEP (inclusive) or a comma list; multiples of 3
        #[arg(long, default_value = "6..24:3")]
        sizes: String,
        #[arg(long, default_value = "0,0,A")]
        mark: String,
        #[arg(long, default_value = "scaling.csv")]
        out: PathBuf,
    },
    /// Two-perturbation state transfer
    Transfer {
        #[arg(long, default_value = "12x12")]
        cells: String,
        #[arg(long, default_value = "0,0,A")]
        mark1: String,
        #[arg(long, default_value = "6,6,A")]
        mark2: String,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        tmax: Option<f64>,
        #[arg(long, default_value = "transfer.csv")]
        out: PathBuf,
    },
}

fn configure_threads() {
    if let Ok(raw) = std::env::var("GRAPHENE_SEARCH_THREADS") {
        if let Ok(n) = raw.trim().parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn main() {
    configure_threads();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Spectrum {
            cells,
            gamma,
            mark,
            out,
            svg,
        } => cmd_spectrum(&SpectrumOptions {
            cells,
            gamma,
            mark,
            out,
            svg,
        }),
        Command::Search {
            cells,
            mark,
            start,
            dt,
            tmax,
            out,
            svg,
        } => cmd_search(&SearchOptions {
            cells,
            mark,
            start,
            dt,
            tmax,
            out,
            svg,
        }),
        Command::Scaling {
            study,
            sizes,
            mark,
            out,
        } => cmd_scaling(&ScalingOptions {
            study,
            sizes,
            mark,
            out,
        }),
        Command::Transfer {
            cells,
            mark1,
            mark2,
            dt,
            tmax,
            out,
        } => cmd_transfer(&TransferOptions {
            cells,
            mark1,
            mark2,
            dt,
            tmax,
            out,
        }),
    };
    match result {
        Ok(()) => {}
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}
