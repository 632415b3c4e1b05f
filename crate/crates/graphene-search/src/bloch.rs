//! Momentum-space layer: quantized momenta, the graphene dispersion and the
//! exact Dirac-point eigenstates of the torus.
//!
//! With lattice constant a = 1 and basis vectors a1 = (1, 0),
//! a2 = (1/2, sqrt(3)/2), Bloch momenta on the m x n torus are
//!
//!   k_x = 2 pi p / m,    k_y = (4 pi q / n - k_x) / sqrt(3),
//!
//! and the two bands are eps_D +- v |f(k)| with
//! |f|^2 = 1 + 4 cos^2(k_x/2) + 4 cos(k_x/2) cos(sqrt(3) k_y/2).
//! The bands touch at the two Dirac points K = (m/3, 2n/3) and
//! K' = (2m/3, n/3), which lie on the grid exactly when 3 | m and 3 | n.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, SiteId, Sublattice};
use crate::search::WaveFunction;

/// Third roots of unity with exactly representable real parts, so that
/// omega^0 + omega^1 + omega^2 sums to exactly zero in f64 arithmetic.
const OMEGA: [Complex64; 3] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(-0.5, 0.866_025_403_784_438_6),
    Complex64::new(-0.5, -0.866_025_403_784_438_6),
];

/// omega^j = exp(2 pi i j / 3), reduced by integer arithmetic first.
#[inline]
pub(crate) fn omega_pow(j: i64) -> Complex64 {
    OMEGA[j.rem_euclid(3) as usize]
}

/// One quantized quasi-momentum of the torus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiMomentum {
    pub p: usize,
    pub q: usize,
    pub kx: f64,
    pub ky: f64,
}

impl QuasiMomentum {
    pub fn new(spec: LatticeSpec, p: usize, q: usize) -> Self {
        let kx = 2.0 * std::f64::consts::PI * p as f64 / spec.m() as f64;
        let ky = (4.0 * std::f64::consts::PI * q as f64 / spec.n() as f64 - kx)
            / 3.0f64.sqrt();
        Self { p, q, kx, ky }
    }
}

/// All m*n quantized momenta, ordered by (p, q).
pub fn momentum_grid(spec: LatticeSpec) -> Vec<QuasiMomentum> {
    let mut grid = Vec::with_capacity(spec.cell_count());
    for p in 0..spec.m() {
        for q in 0..spec.n() {
            grid.push(QuasiMomentum::new(spec, p, q));
        }
    }
    grid
}

/// The (upper, lower) band pair eps_D +- v |f(k)|.
///
/// The radicand vanishes at the Dirac points up to roundoff; values within
/// -1e-12 of zero are clamped, anything more negative is a hard error.
pub fn dispersion(k: QuasiMomentum, v: f64, eps_d: f64) -> Result<(f64, f64)> {
    let ch = (0.5 * k.kx).cos();
    let cy = (0.5 * 3.0f64.sqrt() * k.ky).cos();
    let radicand = 1.0 + 4.0 * ch * ch + 4.0 * ch * cy;
    if radicand < -1e-12 {
        return Err(Error::NegativeRadicand { value: radicand });
    }
    let eps = v * radicand.max(0.0).sqrt();
    Ok((eps_d + eps, eps_d - eps))
}

/// |f(k)| >= 0 for every grid momentum, in grid order (v = 1, eps_D = 0).
/// This is the positive half of the unperturbed spectrum, one entry per
/// momentum, zero exactly at the Dirac points of a `dirac_exact` torus.
pub fn band_magnitudes(spec: LatticeSpec) -> Vec<f64> {
    momentum_grid(spec)
        .into_iter()
        .map(|k| {
            dispersion(k, 1.0, 0.0)
                .expect("grid radicand within clamp tolerance")
                .0
        })
        .collect()
}

/// Sorted list of all N = 2mn unperturbed energies eps_D +- v |f(k)|.
pub fn unperturbed_spectrum(spec: LatticeSpec, v: f64, eps_d: f64) -> Vec<f64> {
    let mut energies = Vec::with_capacity(spec.site_count());
    for k in momentum_grid(spec) {
        let (up, lo) = dispersion(k, v, eps_d).expect("grid radicand within clamp tolerance");
        energies.push(up);
        energies.push(lo);
    }
    energies.sort_by(|a, b| a.partial_cmp(b).unwrap());
    energies
}

/// The (p, q) grid labels of the two Dirac points. Exact only when the spec
/// is `dirac_exact`.
pub fn dirac_momenta(spec: LatticeSpec) -> [(usize, usize); 2] {
    [
        (spec.m() / 3, 2 * spec.n() / 3),
        (2 * spec.m() / 3, spec.n() / 3),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valley {
    K,
    KPrime,
}

impl std::fmt::Display for Valley {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Valley::K => write!(f, "K"),
            Valley::KPrime => write!(f, "K'"),
        }
    }
}

/// One of the four degenerate zero-energy Dirac states; supported on a
/// single sublattice with all amplitude moduli equal to sqrt(2/N).
#[derive(Debug, Clone)]
pub struct DiracState {
    pub valley: Valley,
    pub sublattice: Sublattice,
    pub amplitudes: WaveFunction,
}

/// Phase exponent (as an integer multiple of 2 pi / 3) of the Dirac state
/// at cell (alpha, beta).
#[inline]
pub(crate) fn dirac_exponent(
    valley: Valley,
    sublattice: Sublattice,
    alpha: usize,
    beta: usize,
) -> i64 {
    let (a, b) = (alpha as i64, beta as i64);
    match valley {
        Valley::K => {
            let sigma = match sublattice {
                Sublattice::A => 0,
                Sublattice::B => 1,
            };
            a + 2 * b + 2 * sigma
        }
        Valley::KPrime => 2 * a + b,
    }
}

fn dirac_state(spec: LatticeSpec, valley: Valley, sublattice: Sublattice) -> DiracState {
    let n_sites = spec.site_count();
    let amp = (2.0 / n_sites as f64).sqrt();
    let mut v = vec![Complex64::new(0.0, 0.0); n_sites];
    for alpha in 0..spec.m() {
        for beta in 0..spec.n() {
            let idx = spec
                .site_index(SiteId::new(alpha, beta, sublattice))
                .expect("site in range");
            v[idx] = omega_pow(dirac_exponent(valley, sublattice, alpha, beta)) * amp;
        }
    }
    DiracState {
        valley,
        sublattice,
        amplitudes: WaveFunction::from_raw(v),
    }
}

/// The four degenerate Dirac states, ordered (K,A), (K,B), (K',A), (K',B).
///
/// Errors with `DiracUnavailable` unless both cell counts are multiples
/// of 3.
pub fn dirac_states(spec: LatticeSpec) -> Result<[DiracState; 4]> {
    spec.require_dirac_exact()?;
    Ok([
        dirac_state(spec, Valley::K, Sublattice::A),
        dirac_state(spec, Valley::K, Sublattice::B),
        dirac_state(spec, Valley::KPrime, Sublattice::A),
        dirac_state(spec, Valley::KPrime, Sublattice::B),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_lattice;
    use crate::matrix::inner_complex;

    fn spec(m: usize, n: usize) -> LatticeSpec {
        LatticeSpec::new(m, n).unwrap()
    }

    #[test]
    fn gamma_point_is_zero_momentum() {
        let k = QuasiMomentum::new(spec(6, 6), 0, 0);
        assert_eq!(k.kx, 0.0);
        assert_eq!(k.ky, 0.0);
    }

    #[test]
    fn grid_size_and_uniqueness() {
        let grid = momentum_grid(spec(12, 12));
        assert_eq!(grid.len(), 144);
        for (i, a) in grid.iter().enumerate() {
            for b in grid.iter().skip(i + 1) {
                assert!((a.p, a.q) != (b.p, b.q));
            }
        }
    }

    #[test]
    fn band_edges_at_gamma() {
        let k = QuasiMomentum::new(spec(6, 6), 0, 0);
        let (up, lo) = dispersion(k, 1.0, 0.0).unwrap();
        assert!((up - 3.0).abs() < 1e-14);
        assert!((lo + 3.0).abs() < 1e-14);
    }

    #[test]
    fn dirac_point_on_12x12_grid() {
        let s = spec(12, 12);
        let k = QuasiMomentum::new(s, 4, 8);
        assert!((k.kx - 2.0 * std::f64::consts::PI / 3.0).abs() < 1e-14);
        let (up, lo) = dispersion(k, 1.0, 0.0).unwrap();
        assert!(up.abs() < 1e-7, "upper band {up} should vanish at K");
        assert!(lo.abs() < 1e-7);
        assert_eq!(dirac_momenta(s), [(4, 8), (8, 4)]);
    }

    #[test]
    fn linearization_slope_near_k() {
        // finite-difference slope of the upper band at K along k_x should
        // be sqrt(3)/2 per Eq. of the linearized cone (v = a = 1)
        let s = spec(12, 12);
        let k0 = QuasiMomentum::new(s, 4, 8);
        let h = 1e-6;
        let kp = QuasiMomentum {
            kx: k0.kx + h,
            ..k0
        };
        let (ep, _) = dispersion(kp, 1.0, 0.0).unwrap();
        let slope = ep / h;
        let expected = 3.0f64.sqrt() / 2.0;
        assert!(
            (slope - expected).abs() / expected < 0.01,
            "slope {slope} vs {expected}"
        );
    }

    #[test]
    fn four_zero_energies_iff_multiple_of_three() {
        for m in 2..=15usize {
            for n in 2..=15usize {
                let s = spec(m, n);
                let zeros = unperturbed_spectrum(s, 1.0, 0.0)
                    .iter()
                    .filter(|e| e.abs() < 1e-9)
                    .count();
                if s.dirac_exact() {
                    assert_eq!(zeros, 4, "{m}x{n}");
                } else {
                    assert_ne!(zeros, 4, "{m}x{n}");
                }
            }
        }
    }

    #[test]
    fn spectrum_symmetric_about_onsite_energy() {
        let s = spec(5, 7);
        let eps_d = 0.25;
        let es = unperturbed_spectrum(s, 1.0, eps_d);
        for &e in &es {
            let mirror = 2.0 * eps_d - e;
            assert!(
                es.iter().any(|&x| (x - mirror).abs() < 1e-9),
                "missing mirror of {e}"
            );
        }
    }

    #[test]
    fn dirac_states_unavailable_off_multiple_of_three() {
        assert!(matches!(
            dirac_states(spec(4, 6)),
            Err(crate::error::Error::DiracUnavailable { .. })
        ));
    }

    #[test]
    fn dirac_states_are_orthonormal_zero_modes() {
        let s = spec(6, 6);
        let adj = build_lattice(s);
        let states = dirac_states(s).unwrap();
        for (i, a) in states.iter().enumerate() {
            assert!((a.amplitudes.norm() - 1.0).abs() < 1e-12);
            // exact zero mode of the adjacency: the three neighbor phases
            // are the full set of third roots of unity and cancel exactly
            let mut out = vec![Complex64::new(0.0, 0.0); adj.dim()];
            adj.dense()
                .matvec_complex(a.amplitudes.as_slice(), &mut out);
            let res: f64 = out.iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert_eq!(res, 0.0, "state {i} not an exact zero mode");
            for b in states.iter().skip(i + 1) {
                let ov = inner_complex(a.amplitudes.as_slice(), b.amplitudes.as_slice());
                assert!(ov.norm() < 1e-12, "overlap {}", ov.norm());
            }
        }
    }

    #[test]
    fn dirac_amplitude_modulus_is_sqrt_2_over_n() {
        let s = spec(12, 12);
        let states = dirac_states(s).unwrap();
        let expected = (2.0 / 288.0f64).sqrt();
        assert!((expected - 0.08333333333).abs() < 1e-9);
        let ka = &states[0];
        assert_eq!(ka.sublattice, Sublattice::A);
        for alpha in 0..12 {
            for beta in 0..12 {
                let idx = s
                    .site_index(SiteId::new(alpha, beta, Sublattice::A))
                    .unwrap();
                assert!((ka.amplitudes.as_slice()[idx].norm() - expected).abs() < 1e-15);
                let bidx = s
                    .site_index(SiteId::new(alpha, beta, Sublattice::B))
                    .unwrap();
                assert_eq!(ka.amplitudes.as_slice()[bidx], Complex64::new(0.0, 0.0));
            }
        }
    }
}
