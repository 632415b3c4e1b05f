//! The quantization condition F(E) = 0 reproduces the eigensolver's
//! perturbed level E+ (two independent algorithms), F'(E+) approaches
//! -2 I_2, and the resolvent amplitude sum matches direct propagation.
//!
//! Run: cargo run --release --example resolvent_check

use graphene_search::dynamics::{propagate, ResolventAmplitude};
use graphene_search::spectral::{moment_sums, resolvent_df, resolvent_root};
use graphene_search::{
    build_search_hamiltonian, gap_at_crossing, neighbor_state, optimal_start_state, LatticeSpec,
    SiteId, Sublattice,
};

fn main() {
    let marked = SiteId::new(0, 0, Sublattice::A);

    println!(" m      E+ (eig)        E+ (resolvent)   |diff|     F'(E+)/(-2 I2)");
    for m in [6usize, 9, 12, 15, 18] {
        let spec = LatticeSpec::new(m, m).unwrap();
        let gap = gap_at_crossing(spec, marked).unwrap();
        let root = resolvent_root(spec).unwrap();
        let i2 = moment_sums(spec, 1).unwrap()[0];
        let fp = resolvent_df(spec, root).unwrap();
        println!(
            "{m:2}   {:.12}   {root:.12}   {:.1e}   {:.4}",
            gap.e_plus,
            (gap.e_plus - root).abs(),
            fp / (-2.0 * i2)
        );
    }

    // amplitude duality on 12x12: spectral propagation vs the resolvent sum
    let spec = LatticeSpec::new(12, 12).unwrap();
    let h = build_search_hamiltonian(spec, 1.0, marked).unwrap();
    let psi0 = optimal_start_state(spec, marked).unwrap();
    let ell = neighbor_state(spec, marked).unwrap();
    let amp = ResolventAmplitude::new(spec, marked).unwrap();
    let times: Vec<f64> = (1..=6).map(|k| 4.0 * k as f64).collect();
    let states = propagate(&h, &psi0, &times).unwrap();
    println!("\n t      |<l|psi(t)>| direct   resolvent sum   envelope");
    for (t, st) in times.iter().zip(&states) {
        let direct = ell.overlap(st).norm();
        let via_roots = amp.amplitude(*t).norm();
        println!(
            "{t:5.1}   {direct:.12}      {via_roots:.12}  {:.4}",
            amp.envelope(*t)
        );
    }
}
