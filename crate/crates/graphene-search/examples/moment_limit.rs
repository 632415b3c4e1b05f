//! Growth of the resolvent moments: I_2 is logarithmic in N, and
//! I_4/N converges to an Epstein zeta value of the Dirac-point form —
//! settling which prefactor (4 sqrt 3 or 2 sqrt 3) the limit carries.
//!
//! Run: cargo run --release --example moment_limit

use graphene_search::analysis::moment_study;
use graphene_search::spectral::{epstein_zeta, s_dirac};

fn main() {
    let sizes = [6, 9, 12, 15, 18, 21, 24, 27, 30];
    let study = moment_study(&sizes).expect("moment study");

    println!(" m     N      ln N     I2        I4/N");
    for r in &study.rows {
        println!(
            "{:2}  {:5}   {:.3}   {:.5}   {:.6e}",
            r.cells,
            r.n_sites,
            (r.n_sites as f64).ln(),
            r.i2,
            r.i4 / r.n_sites as f64
        );
    }
    println!(
        "I2 = {:.5} ln N + {:+.5}   (R^2 = {:.6})",
        study.log_fit.c,
        study.log_fit.intercept.unwrap(),
        study.log_fit.r_squared
    );

    let z = epstein_zeta(s_dirac(), 2.0, 800).unwrap();
    println!(
        "\nZ2(S_K, 2) = {:.8e} (tail bound {:.1e})",
        z.value, z.tail_bound
    );
    let limit = &study.limit_report;
    println!(
        "candidate limits for I4/N: 4sqrt3*(Z+Z) = {:.6e},  2sqrt3*(Z+Z) = {:.6e}",
        limit.limit_four, limit.limit_two
    );
    let last = limit.rows.last().unwrap();
    println!(
        "ratio to the 4sqrt3 candidate at m={}: {:.4}  ->  verdict: {} prefactor",
        last.cells,
        last.ratio / limit.limit_four,
        limit.verdict
    );
}
