//! Spectral analysis: dense symmetric eigendecomposition, gamma sweeps for
//! the avoided-crossing picture, gap extraction at the crossing, and the
//! resolvent machinery (quantization condition, moments, Epstein zeta).

mod eigh;
mod resolvent;
mod zeta;

pub use resolvent::{
    moment_sums, resolvent_df, resolvent_f, resolvent_root, resolvent_series, verify_moment_limit,
    MomentLimitReport, MomentLimitRow, MomentPrefactor, ResolventContext, ResolventSeries,
};
pub use zeta::{epstein_zeta, s_dirac, EpsteinZeta, Sym2};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bloch::dirac_states;
use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, SiteId};
use crate::matrix::DenseMatrix;
use crate::search::{build_search_hamiltonian, SearchHamiltonian};

/// Absolute threshold separating exact zero modes from the perturbed pair.
pub const ZERO_MODE_TOLERANCE: f64 = 1e-10;

/// Eigenvalues within this distance form one degeneracy group.
pub const DEGENERACY_TOLERANCE: f64 = 1e-9;

/// Eigendecomposition of a real symmetric operator: ascending eigenvalues
/// with orthonormal eigenvectors (row j of `vectors` pairs with
/// eigenvalue j).
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    eigenvalues: Vec<f64>,
    vectors: DenseMatrix,
}

impl SpectrumResult {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, j: usize) -> &[f64] {
        self.vectors.row(j)
    }

    /// Ranges of indices whose eigenvalues agree within
    /// `DEGENERACY_TOLERANCE`.
    pub fn degeneracy_groups(&self) -> Vec<std::ops::Range<usize>> {
        let mut groups = Vec::new();
        let mut start = 0;
        for i in 1..=self.eigenvalues.len() {
            if i == self.eigenvalues.len()
                || self.eigenvalues[i] - self.eigenvalues[i - 1] > DEGENERACY_TOLERANCE
            {
                groups.push(start..i);
                start = i;
            }
        }
        groups
    }

    /// max_i ||H v_i - lambda_i v_i|| / max(1, |lambda_i|).
    pub fn residual_max(&self, h: &DenseMatrix) -> f64 {
        let n = self.dim();
        let mut out = vec![0.0; n];
        let mut worst = 0.0f64;
        for (i, &lambda) in self.eigenvalues.iter().enumerate() {
            h.matvec(self.eigenvector(i), &mut out);
            let res: f64 = out
                .iter()
                .zip(self.eigenvector(i))
                .map(|(a, b)| (a - lambda * b).powi(2))
                .sum::<f64>()
                .sqrt();
            worst = worst.max(res / lambda.abs().max(1.0));
        }
        worst
    }

    /// max |<v_i|v_j> - delta_ij|.
    pub fn orthonormality_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let dot: f64 = self
                    .eigenvector(i)
                    .iter()
                    .zip(self.eigenvector(j))
                    .map(|(a, b)| a * b)
                    .sum();
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - want).abs());
            }
        }
        worst
    }
}

/// Dense symmetric eigendecomposition (Householder + implicit-shift QL).
/// Rejects matrices whose asymmetry exceeds 1e-12.
pub fn eig_sym(matrix: &DenseMatrix) -> Result<SpectrumResult> {
    if matrix.dim() == 0 {
        return Err(Error::EmptyMatrix);
    }
    let asym = matrix.max_asymmetry();
    if asym > 1e-12 {
        return Err(Error::NotSymmetric { max_asym: asym });
    }
    let (eigenvalues, vectors) = eigh::decompose(matrix)?;
    Ok(SpectrumResult {
        eigenvalues,
        vectors,
    })
}

/// One tracked perturber branch of a gamma sweep.
///
/// The branch follows the diabatic perturber character, not the adiabatic
/// level: at each gamma the eigenvector with the largest |<l|v>| on its
/// sign side is selected. (Previous-step overlap continuation degenerates
/// to adiabatic following for small steps and rides the band edge to the
/// spectrum top instead of through the cascade of narrow anticrossings.)
#[derive(Debug, Clone)]
pub struct TrackedBranch {
    /// Eigenvalue index at each gamma grid point.
    pub indices: Vec<usize>,
    /// |<l|v>| of the selected eigenvector.
    pub character: Vec<f64>,
    /// Overlap with the previous step's tracked vector (continuity
    /// diagnostic).
    pub overlaps: Vec<f64>,
    /// First grid point where the continuation overlap dropped below 0.5.
    pub broken_at: Option<usize>,
}

impl TrackedBranch {
    fn new() -> Self {
        Self {
            indices: Vec::new(),
            character: Vec::new(),
            overlaps: Vec::new(),
            broken_at: None,
        }
    }

    fn record(&mut self, step: usize, index: usize, character: f64, overlap: f64) {
        self.indices.push(index);
        self.character.push(character);
        self.overlaps.push(overlap);
        if overlap < 0.5 && self.broken_at.is_none() {
            self.broken_at = Some(step);
        }
    }
}

/// Spectrum of H_gamma over a uniform gamma grid with the two perturber
/// states followed by eigenvector-overlap continuation.
#[derive(Debug, Clone)]
pub struct GammaSweep {
    pub gammas: Vec<f64>,
    /// Sorted eigenvalues per grid point.
    pub spectra: Vec<Vec<f64>>,
    /// Branch seeded from the +sqrt(3) eigenvector of W.
    pub branch_plus: TrackedBranch,
    /// Branch seeded from the -sqrt(3) eigenvector of W.
    pub branch_minus: TrackedBranch,
}

impl GammaSweep {
    /// Tracked eigenvalue of each branch at grid point s.
    pub fn branch_values(&self, s: usize) -> (f64, f64) {
        (
            self.spectra[s][self.branch_plus.indices[s]],
            self.spectra[s][self.branch_minus.indices[s]],
        )
    }

    /// Grid point where the tracked branches come closest, with the
    /// separation there.
    pub fn closest_approach(&self) -> (usize, f64) {
        let mut best = (0, f64::INFINITY);
        for s in 0..self.gammas.len() {
            let (up, lo) = self.branch_values(s);
            let sep = (up - lo).abs();
            if sep < best.1 {
                best = (s, sep);
            }
        }
        best
    }
}

/// Most perturber-like eigenvector on one sign side of the spectrum:
/// argmax |<l|v>| over eigenvalues of the requested sign. Exact zero
/// modes never carry |l> weight and are excluded by the threshold.
fn select_by_character(
    spectrum: &SpectrumResult,
    neighbor_idx: &[usize; 3],
    positive: bool,
) -> (usize, f64) {
    let inv_sqrt3 = 1.0 / crate::search::SQRT_3;
    let mut best = (0usize, -1.0f64);
    for j in 0..spectrum.dim() {
        let e = spectrum.eigenvalues()[j];
        if positive && e <= ZERO_MODE_TOLERANCE {
            continue;
        }
        if !positive && e >= -ZERO_MODE_TOLERANCE {
            continue;
        }
        let row = spectrum.eigenvector(j);
        let dot = (row[neighbor_idx[0]] + row[neighbor_idx[1]] + row[neighbor_idx[2]])
            * inv_sqrt3;
        if dot.abs() > best.1 {
            best = (j, dot.abs());
        }
    }
    best
}

/// Sweep gamma over `[gamma_from, gamma_to]` with `steps` grid points
/// (inclusive endpoints). Per-gamma eigendecompositions run in parallel;
/// tracking is a deterministic sequential pass seeded by the rank-2
/// eigenpair of W, whose shared localized component |l> is the character
/// witness at every gamma.
pub fn gamma_sweep(
    spec: LatticeSpec,
    marked: SiteId,
    gamma_from: f64,
    gamma_to: f64,
    steps: usize,
) -> Result<GammaSweep> {
    if steps < 2 {
        return Err(Error::InvalidParameter(format!(
            "gamma sweep needs at least 2 grid points, got {steps}"
        )));
    }
    if !(gamma_from < gamma_to) {
        return Err(Error::InvalidParameter(format!(
            "gamma range must be increasing, got {gamma_from}..{gamma_to}"
        )));
    }
    let gammas: Vec<f64> = (0..steps)
        .map(|i| gamma_from + (gamma_to - gamma_from) * i as f64 / (steps - 1) as f64)
        .collect();
    let neighbor_idx = spec.neighbor_indices(marked)?;

    let mut spectra: Vec<Vec<f64>> = Vec::with_capacity(steps);
    let mut branch_plus = TrackedBranch::new();
    let mut branch_minus = TrackedBranch::new();
    let mut prev_plus: Option<Vec<f64>> = None;
    let mut prev_minus: Option<Vec<f64>> = None;

    // batches keep peak memory at a handful of eigenvector matrices while
    // the sequential fold keeps the output order deterministic
    let batch = rayon::current_num_threads().max(1) * 2;
    let mut step = 0;
    for chunk in gammas.chunks(batch) {
        let results: Vec<Result<SpectrumResult>> = chunk
            .par_iter()
            .map(|&gamma| {
                let h = build_search_hamiltonian(spec, gamma, marked)?;
                eig_sym(h.matrix())
            })
            .collect();
        for result in results {
            let spectrum = result?;
            for (branch, prev, positive) in [
                (&mut branch_plus, &mut prev_plus, true),
                (&mut branch_minus, &mut prev_minus, false),
            ] {
                let (idx, character) = select_by_character(&spectrum, &neighbor_idx, positive);
                let row = spectrum.eigenvector(idx);
                let continuity = match prev {
                    Some(p) => p
                        .iter()
                        .zip(row)
                        .map(|(a, b)| a * b)
                        .sum::<f64>()
                        .abs(),
                    None => 1.0,
                };
                branch.record(step, idx, character, continuity);
                *prev = Some(row.to_vec());
            }
            spectra.push(spectrum.eigenvalues.clone());
            step += 1;
        }
    }

    Ok(GammaSweep {
        gammas,
        spectra,
        branch_plus,
        branch_minus,
    })
}

/// The perturbed pair straddling zero at the crossing.
#[derive(Debug, Clone, Copy)]
pub struct CrossingGap {
    pub e_plus: f64,
    pub e_minus: f64,
    pub delta: f64,
}

/// Analytic zero modes of H_{gamma=1}: the decoupled marked site, the two
/// B-lattice Dirac states (A-lattice pair for a B-site perturbation) and
/// the dark Dirac combination psi_0.
fn analytic_zero_modes(spec: LatticeSpec, marked: SiteId) -> Result<[Vec<Complex64>; 4]> {
    let n = spec.site_count();
    let states = dirac_states(spec)?;
    let mi = spec.site_index(marked)?;
    let mut site = vec![Complex64::new(0.0, 0.0); n];
    site[mi] = Complex64::new(1.0, 0.0);

    // Dirac pair on the opposite sublattice is W-annihilated; on the marked
    // sublattice only the combination orthogonal to the start state stays
    // dark. reduced_hamiltonian's psi_0 eigenvector gives its coefficients.
    let (same, opposite): (Vec<usize>, Vec<usize>) = match marked.sublattice {
        crate::lattice::Sublattice::A => (vec![0, 2], vec![1, 3]),
        crate::lattice::Sublattice::B => (vec![1, 3], vec![0, 2]),
    };
    let red = crate::search::reduced_hamiltonian(spec, marked)?;
    let dark_coeffs = red.eigenvectors()[1];
    let mut dark = vec![Complex64::new(0.0, 0.0); n];
    for (c, &si) in dark_coeffs.iter().take(2).zip(same.iter()) {
        for (out, amp) in dark.iter_mut().zip(states[si].amplitudes.as_slice()) {
            *out += c * amp;
        }
    }

    Ok([
        site,
        states[opposite[0]].amplitudes.as_slice().to_vec(),
        states[opposite[1]].amplitudes.as_slice().to_vec(),
        dark,
    ])
}

/// Extract E+ and E- from an existing decomposition of H_{gamma=1},
/// excluding the four exact zero modes by threshold and verifying them
/// against the known analytic modes.
pub fn crossing_gap_from_spectrum(
    spec: LatticeSpec,
    marked: SiteId,
    spectrum: &SpectrumResult,
) -> Result<CrossingGap> {
    spec.require_dirac_exact()?;
    let zeros: Vec<usize> = (0..spectrum.dim())
        .filter(|&i| spectrum.eigenvalues()[i].abs() <= ZERO_MODE_TOLERANCE)
        .collect();
    if zeros.len() != 4 {
        return Err(Error::UnexpectedZeroModes { count: zeros.len() });
    }
    let known = analytic_zero_modes(spec, marked)?;
    for &i in &zeros {
        let v: Vec<Complex64> = spectrum
            .eigenvector(i)
            .iter()
            .map(|&x| Complex64::new(x, 0.0))
            .collect();
        let mut residual = v.clone();
        for z in &known {
            let coeff = crate::matrix::inner_complex(z, &v);
            for (r, zc) in residual.iter_mut().zip(z.iter()) {
                *r -= coeff * zc;
            }
        }
        let defect = crate::matrix::norm2_complex(&residual);
        if defect > 1e-6 {
            return Err(Error::UnexpectedZeroModes { count: zeros.len() });
        }
    }

    let e_plus = spectrum
        .eigenvalues()
        .iter()
        .copied()
        .find(|&e| e > ZERO_MODE_TOLERANCE)
        .ok_or(Error::NoGapState)?;
    let e_minus = spectrum
        .eigenvalues()
        .iter()
        .copied()
        .rev()
        .find(|&e| e < -ZERO_MODE_TOLERANCE)
        .ok_or(Error::NoGapState)?;
    let eps_min = ResolventContext::new(spec).eps_min();
    if e_plus >= eps_min {
        return Err(Error::NoGapState);
    }
    if (e_plus + e_minus).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "crossing pair not symmetric: {e_plus} vs {e_minus}"
        )));
    }
    Ok(CrossingGap {
        e_plus,
        e_minus,
        delta: e_plus - e_minus,
    })
}

/// Diagonalize H_{gamma=1} for `marked` and extract the crossing gap.
pub fn gap_at_crossing(spec: LatticeSpec, marked: SiteId) -> Result<CrossingGap> {
    let h = build_search_hamiltonian(spec, 1.0, marked)?;
    let spectrum = eig_sym(h.matrix())?;
    crossing_gap_from_spectrum(spec, marked, &spectrum)
}

/// Convenience: gamma = 1 Hamiltonian plus its decomposition, reused by
/// the dynamics layer.
pub fn crossing_decomposition(
    spec: LatticeSpec,
    marked: SiteId,
) -> Result<(SearchHamiltonian, SpectrumResult)> {
    let h = build_search_hamiltonian(spec, 1.0, marked)?;
    let spectrum = eig_sym(h.matrix())?;
    Ok((h, spectrum))
}
