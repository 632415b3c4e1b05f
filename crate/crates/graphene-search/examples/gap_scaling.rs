//! How the avoided-crossing gap closes with system size: least-squares
//! comparison of c1/sqrt(N) against the log-corrected c2/sqrt(N ln N).
//!
//! Run: cargo run --release --example gap_scaling

use graphene_search::analysis::gap_scaling_study;
use graphene_search::{SiteId, Sublattice};

fn main() {
    let sizes = [6, 9, 12, 15, 18, 21, 24];
    let marked = SiteId::new(0, 0, Sublattice::A);
    let study = gap_scaling_study(&sizes, marked).expect("gap study");

    println!(" m     N      E+          gap        gap*sqrt(N)   gap*sqrt(N lnN)");
    for r in &study.rows {
        let n = r.n_sites as f64;
        println!(
            "{:2}  {:5}   {:.6}   {:.6}    {:.4}        {:.4}",
            r.cells,
            r.n_sites,
            r.e_plus,
            r.delta,
            r.delta * n.sqrt(),
            r.delta * (n * n.ln()).sqrt()
        );
    }
    for fit in [&study.fit_sqrt, &study.fit_log] {
        println!(
            "fit {:16}  c = {:.5}, rss = {:.3e}, R^2 = {:.5}",
            fit.model.label(),
            fit.c,
            fit.rss,
            fit.r_squared
        );
    }
    println!("verdict: {}", study.verdict());
}
