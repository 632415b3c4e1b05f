//! Time evolution: search runs under the full Hamiltonian, the
//! resolvent-based amplitude cross-check and two-perturbation state
//! transfer.
//!
//! Propagation goes through the full spectral decomposition,
//! psi(t) = sum_a e^{-i E_a t} |psi_a><psi_a|psi_0>, which is unitary on
//! the time grid by construction and reuses eigenpairs the analysis needs
//! anyway.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{build_lattice, LatticeSpec, SiteId};
use crate::matrix::norm2_complex;
use crate::search::{
    build_search_hamiltonian, neighbor_state, optimal_start_state, uniform_dirac_state,
    Perturbation, SearchHamiltonian, WaveFunction,
};
use crate::spectral::{
    crossing_gap_from_spectrum, eig_sym, ResolventContext, SpectrumResult, ZERO_MODE_TOLERANCE,
};

/// Choice of initial state for a search run.
#[derive(Debug, Clone)]
pub enum StartState {
    Optimal,
    UniformDirac,
    Custom(WaveFunction),
}

/// Eigenbasis coefficients of a state, for repeated time evaluation.
struct EigenCoefficients {
    values: Vec<f64>,
    coefficients: Vec<Complex64>,
}

impl EigenCoefficients {
    fn new(spectrum: &SpectrumResult, psi0: &WaveFunction) -> Self {
        let coefficients = (0..spectrum.dim())
            .map(|a| {
                spectrum
                    .eigenvector(a)
                    .iter()
                    .zip(psi0.as_slice())
                    .map(|(v, z)| v * z)
                    .sum()
            })
            .collect();
        Self {
            values: spectrum.eigenvalues().to_vec(),
            coefficients,
        }
    }

    /// Full state at time t.
    fn state_at(&self, spectrum: &SpectrumResult, t: f64, out: &mut [Complex64]) {
        out.fill(Complex64::new(0.0, 0.0));
        for (a, (&e, &c)) in self.values.iter().zip(&self.coefficients).enumerate() {
            let w = Complex64::from_polar(1.0, -e * t) * c;
            if w.norm_sqr() < 1e-64 {
                continue;
            }
            for (o, &v) in out.iter_mut().zip(spectrum.eigenvector(a)) {
                *o += w * v;
            }
        }
    }
}

/// Evolve `psi0` under H to each requested time. Times must be ascending
/// and psi0 unit-norm; the norm is re-checked at every output time.
pub fn propagate(
    h: &SearchHamiltonian,
    psi0: &WaveFunction,
    times: &[f64],
) -> Result<Vec<WaveFunction>> {
    let spectrum = eig_sym(h.matrix())?;
    propagate_with(&spectrum, psi0, times)
}

/// Same as [`propagate`] but reusing an existing decomposition.
pub fn propagate_with(
    spectrum: &SpectrumResult,
    psi0: &WaveFunction,
    times: &[f64],
) -> Result<Vec<WaveFunction>> {
    if (psi0.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::NormDrift { norm: psi0.norm() });
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(
            "propagation times must be strictly ascending".into(),
        ));
    }
    let coeffs = EigenCoefficients::new(spectrum, psi0);
    let mut states = Vec::with_capacity(times.len());
    let mut buffer = vec![Complex64::new(0.0, 0.0); psi0.len()];
    for &t in times {
        coeffs.state_at(spectrum, t, &mut buffer);
        let norm = norm2_complex(&buffer);
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NormDrift { norm });
        }
        states.push(WaveFunction::from_raw(buffer.clone()));
    }
    Ok(states)
}

/// Time series of a search run plus the peak statistics and the two
/// analytic time predictions.
#[derive(Debug, Clone)]
pub struct SearchRun {
    pub times: Vec<f64>,
    /// |<l|psi(t)>|^2.
    pub p_ell: Vec<f64>,
    /// Probability at each of the three neighbor sites.
    pub p_sites: [Vec<f64>; 3],
    pub p_marked: Vec<f64>,
    /// Total three-neighbor probability (the success probability).
    pub p_total: Vec<f64>,
    /// Parabolically refined time of the grid maximum of `p_total`.
    pub t_peak: f64,
    pub p_peak: f64,
    pub e_plus: f64,
    /// Reduced-model rotation time (pi/4) sqrt(N/3).
    pub prediction_reduced: f64,
    /// Log-corrected prediction pi/(2 E+).
    pub prediction_exact: f64,
    /// max_t | ||psi(t)|| - 1 |.
    pub norm_drift: f64,
}

/// Reduced-model rotation time (pi/4) sqrt(N/3).
pub fn reduced_rotation_time(spec: LatticeSpec) -> f64 {
    std::f64::consts::FRAC_PI_4 * (spec.site_count() as f64 / 3.0).sqrt()
}

fn peak_refine(times: &[f64], values: &[f64]) -> (f64, f64) {
    let mut k = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[k] {
            k = i;
        }
    }
    if k == 0 || k + 1 == values.len() {
        return (times[k], values[k]);
    }
    let (y0, y1, y2) = (values[k - 1], values[k], values[k + 1]);
    let denom = y0 - 2.0 * y1 + y2;
    if denom.abs() < 1e-300 {
        return (times[k], values[k]);
    }
    let dt = times[k + 1] - times[k];
    let shift = 0.5 * (y0 - y2) / denom;
    let t = times[k] + shift * dt;
    let p = y1 - 0.25 * (y0 - y2) * shift;
    (t, p.max(y1))
}

/// Run the gamma = 1 search from the requested start state, recording the
/// neighbor probabilities on a uniform grid 0, dt, ..., <= t_max.
pub fn run_search(
    spec: LatticeSpec,
    marked: SiteId,
    start: StartState,
    dt: f64,
    t_max: f64,
) -> Result<SearchRun> {
    if dt <= 0.0 || t_max <= dt {
        return Err(Error::InvalidParameter(format!(
            "need 0 < dt < t_max, got dt={dt} t_max={t_max}"
        )));
    }
    let h = build_search_hamiltonian(spec, 1.0, marked)?;
    let spectrum = eig_sym(h.matrix())?;

    let e_plus = if spec.dirac_exact() {
        crossing_gap_from_spectrum(spec, marked, &spectrum)?.e_plus
    } else {
        spectrum
            .eigenvalues()
            .iter()
            .copied()
            .find(|&e| e > ZERO_MODE_TOLERANCE)
            .ok_or(Error::NoGapState)?
    };
    let max_dt = std::f64::consts::PI / (8.0 * e_plus);
    if dt > max_dt {
        return Err(Error::TimeStepTooCoarse { dt, max_dt });
    }

    let psi0 = match start {
        StartState::Optimal => optimal_start_state(spec, marked)?,
        StartState::UniformDirac => uniform_dirac_state(spec)?,
        StartState::Custom(psi) => {
            if psi.len() != spec.site_count() {
                return Err(Error::InvalidParameter(format!(
                    "custom state has {} amplitudes for {} sites",
                    psi.len(),
                    spec.site_count()
                )));
            }
            psi
        }
    };
    if (psi0.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::NormDrift { norm: psi0.norm() });
    }

    let steps = (t_max / dt + 1e-9).floor() as usize;
    let times: Vec<f64> = (0..=steps).map(|k| k as f64 * dt).collect();
    let ell = neighbor_state(spec, marked)?;
    let neighbor_idx = spec.neighbor_indices(marked)?;
    let marked_idx = spec.site_index(marked)?;

    let coeffs = EigenCoefficients::new(&spectrum, &psi0);
    let n = spec.site_count();
    let mut buffer = vec![Complex64::new(0.0, 0.0); n];
    let mut p_ell = Vec::with_capacity(times.len());
    let mut p_sites = [
        Vec::with_capacity(times.len()),
        Vec::with_capacity(times.len()),
        Vec::with_capacity(times.len()),
    ];
    let mut p_marked = Vec::with_capacity(times.len());
    let mut p_total = Vec::with_capacity(times.len());
    let mut norm_drift = 0.0f64;
    for &t in &times {
        coeffs.state_at(&spectrum, t, &mut buffer);
        norm_drift = norm_drift.max((norm2_complex(&buffer) - 1.0).abs());
        let mut amp_ell = Complex64::new(0.0, 0.0);
        for (z, l) in buffer.iter().zip(ell.as_slice()) {
            amp_ell += l.conj() * z;
        }
        p_ell.push(amp_ell.norm_sqr());
        let mut total = 0.0;
        for (slot, &j) in p_sites.iter_mut().zip(neighbor_idx.iter()) {
            let p = buffer[j].norm_sqr();
            slot.push(p);
            total += p;
        }
        p_total.push(total);
        p_marked.push(buffer[marked_idx].norm_sqr());
    }
    if norm_drift > 1e-10 {
        return Err(Error::NormDrift {
            norm: 1.0 + norm_drift,
        });
    }

    let (t_peak, p_peak) = peak_refine(&times, &p_total);
    Ok(SearchRun {
        times,
        p_ell,
        p_sites,
        p_marked,
        p_total,
        t_peak,
        p_peak,
        e_plus,
        prediction_reduced: reduced_rotation_time(spec),
        prediction_exact: std::f64::consts::PI / (2.0 * e_plus),
        norm_drift,
    })
}

/// The amplitude <l| e^{-iHt} |s> assembled from the resolvent data:
/// all roots E_a of F weighted by 1/(E_a |F'(E_a)|), plus the two-level
/// sine envelope.
pub struct ResolventAmplitude {
    energies: Vec<f64>,
    weights: Vec<f64>,
    marked_overlap: Complex64,
    e_plus: f64,
    envelope_scale: f64,
}

impl ResolventAmplitude {
    pub fn new(spec: LatticeSpec, marked: SiteId) -> Result<Self> {
        spec.require_dirac_exact()?;
        let ctx = ResolventContext::new(spec);
        let positive = ctx.positive_roots();
        if positive.is_empty() {
            return Err(Error::NoGapState);
        }
        let e_plus = positive[0];
        let mut energies = Vec::with_capacity(2 * positive.len());
        let mut weights = Vec::with_capacity(2 * positive.len());
        for &root in &positive {
            let df = ctx.df(root)?.abs();
            for e in [root, -root] {
                energies.push(e);
                weights.push(1.0 / (e * df));
            }
        }
        let start = optimal_start_state(spec, marked)?;
        let marked_overlap = start.as_slice()[spec.site_index(marked)?];
        let i2 = crate::spectral::moment_sums(spec, 1)?[0];
        let envelope_scale = 1.0 / (3.0f64.powf(0.25) * i2.sqrt());
        Ok(Self {
            energies,
            weights,
            marked_overlap,
            e_plus,
            envelope_scale,
        })
    }

    pub fn e_plus(&self) -> f64 {
        self.e_plus
    }

    /// Full sum over all perturbed levels.
    pub fn amplitude(&self, t: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&e, &w) in self.energies.iter().zip(&self.weights) {
            acc += Complex64::from_polar(w, -e * t);
        }
        self.marked_overlap * acc
    }

    /// Two-level envelope |sin(E+ t)| / (3^(1/4) sqrt(I2)).
    pub fn envelope(&self, t: f64) -> f64 {
        self.envelope_scale * (self.e_plus * t).sin().abs()
    }
}

/// One-shot version of [`ResolventAmplitude`] for a single time.
pub fn amplitude_via_resolvent(
    spec: LatticeSpec,
    marked: SiteId,
    t: f64,
) -> Result<(Complex64, f64)> {
    let amp = ResolventAmplitude::new(spec, marked)?;
    Ok((amp.amplitude(t), amp.envelope(t)))
}

/// Two-perturbation transfer run.
#[derive(Debug, Clone)]
pub struct TransferRun {
    pub times: Vec<f64>,
    pub p_ell1: Vec<f64>,
    pub p_ell2: Vec<f64>,
    /// Time of the first dominant maximum of the site-2 probability.
    pub period: Option<f64>,
    pub same_sublattice: bool,
    /// p_ell1 at t = 0 (how well the initial state localizes).
    pub initial_localization: f64,
    /// Number of sub-band eigenstates the initial state was built from.
    pub cluster_size: usize,
}

/// Evolve a state initially localized on the first perturbation of
/// H = -A + W1 + W2 and record both neighbor-triple probabilities.
///
/// The initial state projects |l_1> onto the sub-band cluster
/// (|E| < eps_min/2): the perturber levels plus the zero modes, whose
/// frozen antisymmetric perturber combination carries part of |l_1>.
pub fn run_transfer(
    spec: LatticeSpec,
    marked_a: SiteId,
    marked_b: SiteId,
    dt: f64,
    t_max: f64,
) -> Result<TransferRun> {
    if marked_a == marked_b {
        return Err(Error::IdenticalMarks);
    }
    if dt <= 0.0 || t_max <= dt {
        return Err(Error::InvalidParameter(format!(
            "need 0 < dt < t_max, got dt={dt} t_max={t_max}"
        )));
    }
    let adjacency = build_lattice(spec);
    let n = spec.site_count();
    let mut matrix = adjacency.dense().clone();
    for x in matrix.as_mut_slice() {
        *x = -*x;
    }
    Perturbation::new(marked_a).add_to(spec, &mut matrix)?;
    Perturbation::new(marked_b).add_to(spec, &mut matrix)?;
    let spectrum = eig_sym(&matrix)?;

    let ell1 = neighbor_state(spec, marked_a)?;
    let ell2 = neighbor_state(spec, marked_b)?;
    let eps_min = ResolventContext::new(spec).eps_min();

    // project |l_1> onto the sub-band cluster and renormalize
    let cluster: Vec<usize> = (0..n)
        .filter(|&a| spectrum.eigenvalues()[a].abs() < 0.5 * eps_min)
        .collect();
    let mut c: Vec<f64> = Vec::with_capacity(cluster.len());
    for &a in &cluster {
        let dot: f64 = spectrum
            .eigenvector(a)
            .iter()
            .zip(ell1.as_slice())
            .map(|(v, z)| v * z.re)
            .sum();
        c.push(dot);
    }
    let norm: f64 = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm < 1e-12 {
        return Err(Error::NoGapState);
    }
    for x in &mut c {
        *x /= norm;
    }

    // observables in the cluster basis
    let amp = |ell: &WaveFunction| -> Vec<f64> {
        cluster
            .iter()
            .map(|&a| {
                spectrum
                    .eigenvector(a)
                    .iter()
                    .zip(ell.as_slice())
                    .map(|(v, z)| v * z.re)
                    .sum()
            })
            .collect()
    };
    let a1 = amp(&ell1);
    let a2 = amp(&ell2);
    let energies: Vec<f64> = cluster
        .iter()
        .map(|&a| spectrum.eigenvalues()[a])
        .collect();

    let steps = (t_max / dt + 1e-9).floor() as usize;
    let times: Vec<f64> = (0..=steps).map(|k| k as f64 * dt).collect();
    let mut p_ell1 = Vec::with_capacity(times.len());
    let mut p_ell2 = Vec::with_capacity(times.len());
    for &t in &times {
        let mut s1 = Complex64::new(0.0, 0.0);
        let mut s2 = Complex64::new(0.0, 0.0);
        for ((&e, &ci), (&x1, &x2)) in energies
            .iter()
            .zip(&c)
            .zip(a1.iter().zip(a2.iter()))
        {
            let phase = Complex64::from_polar(ci, -e * t);
            s1 += phase * x1;
            s2 += phase * x2;
        }
        p_ell1.push(s1.norm_sqr());
        p_ell2.push(s2.norm_sqr());
    }

    // first local maximum of p_ell2 at dominant height
    let p2_max = p_ell2.iter().copied().fold(0.0f64, f64::max);
    let mut period = None;
    for k in 1..times.len().saturating_sub(1) {
        if p_ell2[k] >= p_ell2[k - 1]
            && p_ell2[k] >= p_ell2[k + 1]
            && p_ell2[k] >= 0.5 * p2_max
        {
            period = Some(times[k]);
            break;
        }
    }

    Ok(TransferRun {
        initial_localization: p_ell1[0],
        times,
        p_ell1,
        p_ell2,
        period,
        same_sublattice: marked_a.sublattice == marked_b.sublattice,
        cluster_size: cluster.len(),
    })
}
