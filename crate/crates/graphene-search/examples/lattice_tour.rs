//! Build a honeycomb torus, inspect its geometry and the momentum-space
//! structure: 3-regular bipartite adjacency, the two-band dispersion and
//! the four exact zero-energy Dirac states.
//!
//! Run: cargo run --release --example lattice_tour

use graphene_search::bloch::{dirac_momenta, dirac_states, dispersion, QuasiMomentum};
use graphene_search::{build_lattice, LatticeSpec, SiteId, Sublattice};

fn main() {
    let spec = LatticeSpec::new(12, 12).expect("valid torus");
    println!(
        "torus {spec}: N = {} sites, dirac_exact = {}",
        spec.site_count(),
        spec.dirac_exact()
    );

    let origin = SiteId::new(0, 0, Sublattice::A);
    let neighbors = spec.neighbors_of(origin).unwrap();
    println!("neighbors of {origin}: {} {} {}", neighbors[0], neighbors[1], neighbors[2]);

    let adjacency = build_lattice(spec);
    let degrees_ok = (0..adjacency.dim())
        .all(|i| adjacency.dense().row(i).iter().sum::<f64>() == 3.0);
    println!("adjacency: dim = {}, 3-regular = {degrees_ok}", adjacency.dim());

    // band edges at the zone center, zeros at the Dirac points
    let gamma_point = QuasiMomentum::new(spec, 0, 0);
    let (upper, lower) = dispersion(gamma_point, 1.0, 0.0).unwrap();
    println!("bands at k = 0: ({lower:+.3}, {upper:+.3})");
    for (p, q) in dirac_momenta(spec) {
        let k = QuasiMomentum::new(spec, p, q);
        let (e, _) = dispersion(k, 1.0, 0.0).unwrap();
        println!("Dirac point (p,q) = ({p},{q}): k_x = {:.4}, eps = {e:.2e}", k.kx);
    }

    let states = dirac_states(spec).unwrap();
    for st in &states {
        let mut out = vec![num_complex::Complex64::new(0.0, 0.0); adjacency.dim()];
        adjacency
            .dense()
            .matvec_complex(st.amplitudes.as_slice(), &mut out);
        let residual = out.iter().map(|z| z.norm()).fold(0.0, f64::max);
        println!(
            "Dirac state ({}, {}): norm = {:.12}, ||A psi||_max = {residual:.1e}",
            st.valley,
            st.sublattice,
            st.amplitudes.norm()
        );
    }
}
