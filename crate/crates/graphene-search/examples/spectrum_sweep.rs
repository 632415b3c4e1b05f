//! Sweep the perturbation strength gamma and watch the two perturber
//! levels work through the spectrum into the central avoided crossing.
//! Writes the same CSV/SVG/manifest set as `graphene-search spectrum`.
//!
//! Run: cargo run --release --example spectrum_sweep

use graphene_search::cli::{cmd_spectrum, SpectrumOptions};
use graphene_search::spectral::gamma_sweep;
use graphene_search::{LatticeSpec, SiteId, Sublattice};

fn main() {
    let spec = LatticeSpec::new(12, 12).unwrap();
    let marked = SiteId::new(0, 0, Sublattice::A);

    let sweep = gamma_sweep(spec, marked, 0.0, 1.2, 241).expect("sweep");
    println!("gamma    E_-branch   E_+branch   |<l|v>|");
    for step in (0..sweep.gammas.len()).step_by(20) {
        let (up, lo) = sweep.branch_values(step);
        println!(
            "{:5.3}   {lo:+9.5}   {up:+9.5}    {:.3}",
            sweep.gammas[step], sweep.branch_plus.character[step]
        );
    }
    let (step, separation) = sweep.closest_approach();
    println!(
        "\nclosest approach: gamma = {:.3}, branch separation = {separation:.5}",
        sweep.gammas[step]
    );

    let opts = SpectrumOptions {
        out: "spectrum.csv".into(),
        svg: Some("spectrum.svg".into()),
        ..SpectrumOptions::default()
    };
    match cmd_spectrum(&opts) {
        Ok(()) => println!("wrote spectrum.csv, spectrum.svg, spectrum.manifest.json"),
        Err(e) => eprintln!("spectrum command failed: {e}"),
    }
}
