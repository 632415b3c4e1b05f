//! The marked-site search Hamiltonian H_gamma = -gamma A + W, the neighbor
//! state |l>, the reduced 3-state model at the crossing and the optimal
//! starting states.
//!
//! W couples the marked site to the symmetric superposition of its three
//! neighbors with prefactor sqrt(3), so at gamma = 1 the -gamma A bond
//! entries (-1) and the W entries (+1) cancel exactly and the marked site
//! decouples from the lattice.

use num_complex::Complex64;

use crate::bloch::{dirac_exponent, dirac_states, omega_pow, Valley};
use crate::error::{Error, Result};
use crate::lattice::{build_lattice, LatticeSpec, SiteId, Sublattice};
use crate::matrix::{inner_complex, norm2_complex, DenseMatrix};

pub const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// Complex amplitude vector over the lattice sites.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction(Vec<Complex64>);

impl WaveFunction {
    pub fn zeros(n: usize) -> Self {
        Self(vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn from_raw(v: Vec<Complex64>) -> Self {
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.0
    }

    pub fn norm(&self) -> f64 {
        norm2_complex(&self.0)
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            for z in &mut self.0 {
                *z /= n;
            }
        }
    }

    /// <self|other>.
    pub fn overlap(&self, other: &WaveFunction) -> Complex64 {
        inner_complex(&self.0, &other.0)
    }

    pub fn probability_at(&self, index: usize) -> f64 {
        self.0[index].norm_sqr()
    }
}

/// Rank-2 bond perturbation marking one site.
#[derive(Debug, Clone, Copy)]
pub struct Perturbation {
    pub marked: SiteId,
    /// Coupling prefactor in front of |marked><l| + |l><marked|.
    pub prefactor: f64,
}

impl Perturbation {
    pub fn new(marked: SiteId) -> Self {
        Self {
            marked,
            prefactor: SQRT_3,
        }
    }

    /// Matrix element between the marked site and each single neighbor:
    /// prefactor / sqrt(3). Computed as a division so the default
    /// prefactor sqrt(3) yields exactly 1.0 and the gamma = 1 cancellation
    /// against the adjacency is exact.
    pub fn bond_weight(&self) -> f64 {
        self.prefactor / SQRT_3
    }

    /// Add W to a dense matrix in place.
    pub fn add_to(&self, spec: LatticeSpec, matrix: &mut DenseMatrix) -> Result<()> {
        let mi = spec.site_index(self.marked)?;
        let w = self.bond_weight();
        for j in spec.neighbor_indices(self.marked)? {
            matrix.add_to(mi, j, w);
            matrix.add_to(j, mi, w);
        }
        Ok(())
    }
}

/// H_gamma = -gamma A + W on an m x n torus.
#[derive(Debug, Clone)]
pub struct SearchHamiltonian {
    spec: LatticeSpec,
    gamma: f64,
    marked: SiteId,
    matrix: DenseMatrix,
}

impl SearchHamiltonian {
    pub fn spec(&self) -> LatticeSpec {
        self.spec
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn marked(&self) -> SiteId {
        self.marked
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }
}

pub fn build_search_hamiltonian(
    spec: LatticeSpec,
    gamma: f64,
    marked: SiteId,
) -> Result<SearchHamiltonian> {
    if !spec.contains(marked) {
        return Err(Error::SiteOutOfRange {
            alpha: marked.alpha,
            beta: marked.beta,
            m: spec.m(),
            n: spec.n(),
        });
    }
    let adjacency = build_lattice(spec);
    let dim = adjacency.dim();
    let mut matrix = DenseMatrix::zeros(dim);
    for i in 0..dim {
        for &j in &adjacency.neighbor_lists()[i] {
            matrix.set(i, j, -gamma);
        }
    }
    Perturbation::new(marked).add_to(spec, &mut matrix)?;
    Ok(SearchHamiltonian {
        spec,
        gamma,
        marked,
        matrix,
    })
}

/// |l>: unit-norm symmetric superposition of the marked site's three
/// neighbors.
pub fn neighbor_state(spec: LatticeSpec, marked: SiteId) -> Result<WaveFunction> {
    let mut psi = WaveFunction::zeros(spec.site_count());
    let amp = Complex64::new(1.0 / SQRT_3, 0.0);
    for j in spec.neighbor_indices(marked)? {
        psi.as_mut_slice()[j] = amp;
    }
    Ok(psi)
}

/// Dirac-phase coefficients (a, b) = conj(phase of K at marked),
/// conj(phase of K' at marked) entering the reduced model and the start
/// state for a perturbation on `marked`.
fn marked_phases(marked: SiteId) -> (Complex64, Complex64) {
    let a = omega_pow(-dirac_exponent(
        Valley::K,
        marked.sublattice,
        marked.alpha,
        marked.beta,
    ));
    let b = omega_pow(-dirac_exponent(
        Valley::KPrime,
        marked.sublattice,
        marked.alpha,
        marked.beta,
    ));
    (a, b)
}

/// The 3x3 Hermitian reduction of H_{gamma=1} onto the basis
/// (|K>, |K'>, |l>) on the marked sublattice.
#[derive(Debug, Clone)]
pub struct ReducedHamiltonian {
    marked: SiteId,
    n_sites: usize,
    matrix: [[Complex64; 3]; 3],
}

impl ReducedHamiltonian {
    pub fn marked(&self) -> SiteId {
        self.marked
    }

    pub fn matrix(&self) -> &[[Complex64; 3]; 3] {
        &self.matrix
    }

    /// +2 sqrt(3/N).
    pub fn eigenvalue_plus(&self) -> f64 {
        2.0 * (3.0 / self.n_sites as f64).sqrt()
    }

    /// Eigenvalues in the order (+2 sqrt(3/N), 0, -2 sqrt(3/N)).
    pub fn eigenvalues(&self) -> [f64; 3] {
        let e = self.eigenvalue_plus();
        [e, 0.0, -e]
    }

    /// Eigenvectors over the 3-basis, columns aligned with `eigenvalues`:
    /// psi_+- = (a|K> + b|K'> +- sqrt(2)|l>)/2 and
    /// psi_0 = (a|K> - b|K'>)/sqrt(2).
    pub fn eigenvectors(&self) -> [[Complex64; 3]; 3] {
        let (a, b) = marked_phases(self.marked);
        let half = Complex64::new(0.5, 0.0);
        let r2 = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        [
            [a * half, b * half, Complex64::new(0.5 * 2.0f64.sqrt(), 0.0)],
            [a * r2, -b * r2, Complex64::new(0.0, 0.0)],
            [a * half, b * half, Complex64::new(-0.5 * 2.0f64.sqrt(), 0.0)],
        ]
    }
}

pub fn reduced_hamiltonian(spec: LatticeSpec, marked: SiteId) -> Result<ReducedHamiltonian> {
    spec.require_dirac_exact()?;
    if !spec.contains(marked) {
        return Err(Error::SiteOutOfRange {
            alpha: marked.alpha,
            beta: marked.beta,
            m: spec.m(),
            n: spec.n(),
        });
    }
    let n_sites = spec.site_count();
    let scale = (6.0 / n_sites as f64).sqrt();
    let (a, b) = marked_phases(marked);
    let zero = Complex64::new(0.0, 0.0);
    // a = e^{-i 2pi/3 (alpha0 + 2 beta0 [+2 on B])}: column/row 3 couples
    // |l> to the two Dirac states
    let matrix = [
        [zero, zero, a * scale],
        [zero, zero, b * scale],
        [a.conj() * scale, b.conj() * scale, zero],
    ];
    Ok(ReducedHamiltonian {
        marked,
        n_sites,
        matrix,
    })
}

/// Optimal starting state |s> = (psi_+ + psi_-)/sqrt(2): the phase-weighted
/// combination of the two Dirac states on the marked site's sublattice.
pub fn optimal_start_state(spec: LatticeSpec, marked: SiteId) -> Result<WaveFunction> {
    spec.require_dirac_exact()?;
    if !spec.contains(marked) {
        return Err(Error::SiteOutOfRange {
            alpha: marked.alpha,
            beta: marked.beta,
            m: spec.m(),
            n: spec.n(),
        });
    }
    let states = dirac_states(spec)?;
    let (k, kp) = match marked.sublattice {
        Sublattice::A => (&states[0], &states[2]),
        Sublattice::B => (&states[1], &states[3]),
    };
    let (a, b) = marked_phases(marked);
    let r2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut psi = WaveFunction::zeros(spec.site_count());
    for (out, (x, y)) in psi.as_mut_slice().iter_mut().zip(
        k.amplitudes
            .as_slice()
            .iter()
            .zip(kp.amplitudes.as_slice().iter()),
    ) {
        *out = (a * x + b * y) * r2;
    }
    Ok(psi)
}

/// The six optimal starting states: one per residue class of
/// alpha - beta mod 3 on each sublattice (A classes 0,1,2 first, then B).
/// States within a sublattice are pairwise non-orthogonal.
pub fn enumerate_start_states(spec: LatticeSpec) -> Result<Vec<WaveFunction>> {
    spec.require_dirac_exact()?;
    let mut states = Vec::with_capacity(6);
    for sublattice in [Sublattice::A, Sublattice::B] {
        for r in 0..3 {
            states.push(optimal_start_state(spec, SiteId::new(r, 0, sublattice))?);
        }
    }
    Ok(states)
}

/// Equal-weight superposition of the four Dirac states with quadrature
/// phases, (|K,A> + |K,B> + i|K',A> + i|K',B>)/2. Models excitation at the
/// Dirac energy without knowledge of the marked site; its projection onto
/// the optimal state carries probability 1/4 at the default marked site.
pub fn uniform_dirac_state(spec: LatticeSpec) -> Result<WaveFunction> {
    let states = dirac_states(spec)?;
    let coef = [
        Complex64::new(0.5, 0.0),
        Complex64::new(0.5, 0.0),
        Complex64::new(0.0, 0.5),
        Complex64::new(0.0, 0.5),
    ];
    let mut psi = WaveFunction::zeros(spec.site_count());
    for (c, st) in coef.iter().zip(states.iter()) {
        for (out, x) in psi
            .as_mut_slice()
            .iter_mut()
            .zip(st.amplitudes.as_slice().iter())
        {
            *out += c * x;
        }
    }
    Ok(psi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec12() -> LatticeSpec {
        LatticeSpec::new(12, 12).unwrap()
    }

    fn origin_a() -> SiteId {
        SiteId::new(0, 0, Sublattice::A)
    }

    #[test]
    fn marked_site_decouples_at_gamma_one() {
        for marked in [origin_a(), SiteId::new(2, 1, Sublattice::B)] {
            let h = build_search_hamiltonian(spec12(), 1.0, marked).unwrap();
            let mi = spec12().site_index(marked).unwrap();
            let mut e = vec![0.0; h.matrix().dim()];
            e[mi] = 1.0;
            let mut out = vec![0.0; e.len()];
            h.matrix().matvec(&e, &mut out);
            assert!(out.iter().all(|&x| x == 0.0), "H e_marked != 0 exactly");
        }
    }

    #[test]
    fn gamma_zero_is_pure_perturbation() {
        let s = spec12();
        let h = build_search_hamiltonian(s, 0.0, origin_a()).unwrap();
        let ell = neighbor_state(s, origin_a()).unwrap();
        let mi = s.site_index(origin_a()).unwrap();

        // W|l> = sqrt(3)|marked> and W|marked> = sqrt(3)|l>
        let mut out = vec![Complex64::new(0.0, 0.0); ell.len()];
        h.matrix().matvec_complex(ell.as_slice(), &mut out);
        for (i, z) in out.iter().enumerate() {
            let expect = if i == mi { SQRT_3 } else { 0.0 };
            assert!((z.re - expect).abs() < 1e-14 && z.im == 0.0);
        }

        let mut e = vec![Complex64::new(0.0, 0.0); ell.len()];
        e[mi] = Complex64::new(1.0, 0.0);
        h.matrix().matvec_complex(&e, &mut out);
        for (z, l) in out.iter().zip(ell.as_slice()) {
            assert!((z - l * SQRT_3).norm() < 1e-14);
        }
    }

    #[test]
    fn bond_entry_combines_gamma_and_w() {
        let s = spec12();
        let h = build_search_hamiltonian(s, 0.5, origin_a()).unwrap();
        let mi = s.site_index(origin_a()).unwrap();
        for j in s.neighbor_indices(origin_a()).unwrap() {
            assert_eq!(h.matrix().get(mi, j), 0.5);
            assert_eq!(h.matrix().get(j, mi), 0.5);
        }
        assert!(h.matrix().max_asymmetry() == 0.0);
    }

    #[test]
    fn neighbor_state_properties() {
        let s = spec12();
        let ell = neighbor_state(s, origin_a()).unwrap();
        assert!((ell.norm() - 1.0).abs() < 1e-12);
        let mi = s.site_index(origin_a()).unwrap();
        assert_eq!(ell.as_slice()[mi], Complex64::new(0.0, 0.0));
        let support: Vec<usize> = (0..ell.len())
            .filter(|&i| ell.as_slice()[i].norm() > 0.0)
            .collect();
        assert_eq!(support, {
            let mut v = s.neighbor_indices(origin_a()).unwrap().to_vec();
            v.sort_unstable();
            v
        });
    }

    #[test]
    fn reduced_model_matches_closed_forms() {
        let s = spec12();
        let red = reduced_hamiltonian(s, origin_a()).unwrap();
        let e = red.eigenvalue_plus();
        assert!((e - 0.204_124_1).abs() < 1e-6);
        assert!((e - 2.0 * (3.0 / 288.0f64).sqrt()).abs() < 1e-15);

        // marked at the origin: all phases are 1 and the matrix is real
        for row in red.matrix() {
            for z in row {
                assert_eq!(z.im, 0.0);
            }
        }

        // eigenvector equations H~ v = E v for all three closed forms
        let m = red.matrix();
        for (vec, ev) in red.eigenvectors().iter().zip(red.eigenvalues()) {
            for r in 0..3 {
                let lhs: Complex64 = (0..3).map(|c| m[r][c] * vec[c]).sum();
                assert!(
                    (lhs - vec[r] * ev).norm() < 1e-12,
                    "row {r} of eigenvector at {ev}"
                );
            }
        }

        // |<l|psi_+>| = 1/sqrt(2)
        let plus = red.eigenvectors()[0];
        assert!((plus[2].norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn reduced_model_requires_dirac_exact() {
        let s = LatticeSpec::new(10, 12).unwrap();
        assert!(matches!(
            reduced_hamiltonian(s, origin_a()),
            Err(Error::DiracUnavailable { .. })
        ));
    }

    #[test]
    fn optimal_start_state_geometry() {
        let s = spec12();
        for marked in [origin_a(), SiteId::new(2, 1, Sublattice::A)] {
            let st = optimal_start_state(s, marked).unwrap();
            assert!((st.norm() - 1.0).abs() < 1e-12);
            let ell = neighbor_state(s, marked).unwrap();
            assert!(st.overlap(&ell).norm() < 1e-14, "s must live off |l>'s sublattice");
            let ka = &dirac_states(s).unwrap()[0];
            assert!(
                (st.overlap(&ka.amplitudes).norm() - std::f64::consts::FRAC_1_SQRT_2).abs()
                    < 1e-12
            );
        }
    }

    #[test]
    fn start_state_site_probabilities() {
        // per A-site probability is 4/N on the marked residue class and
        // 1/N on the other two; B amplitudes vanish; total is 1
        let s = spec12();
        let n = s.site_count() as f64;
        let st = optimal_start_state(s, origin_a()).unwrap();
        let mut total = 0.0;
        for alpha in 0..12 {
            for beta in 0..12usize {
                let p = st.probability_at(
                    s.site_index(SiteId::new(alpha, beta, Sublattice::A)).unwrap(),
                );
                let expected = if (alpha + 2 * beta) % 3 == (2 * alpha + beta) % 3 {
                    4.0 / n
                } else {
                    1.0 / n
                };
                assert!((p - expected).abs() < 1e-12, "site ({alpha},{beta})");
                total += p;
                let pb = st.probability_at(
                    s.site_index(SiteId::new(alpha, beta, Sublattice::B)).unwrap(),
                );
                assert_eq!(pb, 0.0);
            }
        }
        assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn six_start_states() {
        let s = spec12();
        let states = enumerate_start_states(s).unwrap();
        assert_eq!(states.len(), 6);

        // the state for the true marked site is the one of its residue class
        let marked = SiteId::new(5, 2, Sublattice::A); // residue (5-2) % 3 = 0
        let direct = optimal_start_state(s, marked).unwrap();
        let diff: f64 = states[0]
            .as_slice()
            .iter()
            .zip(direct.as_slice())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-14);

        // Gram matrix of the A-type triple: off-diagonal modulus 1/2
        for i in 0..3 {
            for j in 0..3 {
                let g = states[i].overlap(&states[j]).norm();
                let expected = if i == j { 1.0 } else { 0.5 };
                assert!((g - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn uniform_dirac_state_overlaps() {
        let s = spec12();
        let u = uniform_dirac_state(s).unwrap();
        assert!((u.norm() - 1.0).abs() < 1e-12);
        for st in dirac_states(s).unwrap() {
            assert!((u.overlap(&st.amplitudes).norm() - 0.5).abs() < 1e-12);
        }
        let opt = optimal_start_state(s, origin_a()).unwrap();
        let p = opt.overlap(&u).norm_sqr();
        assert!((p - 0.25).abs() < 1e-12, "projection {p}");
        // half the weight sits on the B sublattice
        let cells = s.cell_count();
        let pb: f64 = (cells..2 * cells).map(|i| u.probability_at(i)).sum();
        assert!((pb - 0.5).abs() < 1e-12);
    }

    #[test]
    fn perturbation_annihilates_b_dirac_states() {
        // W|K>^B = W|K'>^B = 0 exactly, and they stay exact zero modes of
        // H_gamma for any gamma
        let s = spec12();
        let states = dirac_states(s).unwrap();
        for gamma in [0.0, 0.37, 1.0] {
            let h = build_search_hamiltonian(s, gamma, origin_a()).unwrap();
            for st in [&states[1], &states[3]] {
                let mut out = vec![Complex64::new(0.0, 0.0); st.amplitudes.len()];
                h.matrix().matvec_complex(st.amplitudes.as_slice(), &mut out);
                let worst = out.iter().map(|z| z.norm()).fold(0.0, f64::max);
                assert_eq!(worst, 0.0, "gamma={gamma}");
            }
        }
    }

    #[test]
    fn full_hamiltonian_projects_onto_reduced_model() {
        let s = spec12();
        for marked in [origin_a(), SiteId::new(3, 7, Sublattice::A)] {
            let h = build_search_hamiltonian(s, 1.0, marked).unwrap();
            let states = dirac_states(s).unwrap();
            let basis = [
                states[0].amplitudes.clone(),
                states[2].amplitudes.clone(),
                neighbor_state(s, marked).unwrap(),
            ];
            let red = reduced_hamiltonian(s, marked).unwrap();
            for r in 0..3 {
                for c in 0..3 {
                    let got = h
                        .matrix()
                        .sandwich_complex(basis[r].as_slice(), basis[c].as_slice());
                    let want = red.matrix()[r][c];
                    assert!(
                        (got - want).norm() < 1e-12,
                        "entry ({r},{c}): {got} vs {want}"
                    );
                }
            }
        }
    }
}
