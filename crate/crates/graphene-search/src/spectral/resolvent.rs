//! Resolvent analysis of the perturbed spectrum.
//!
//! Eigenenergies of H_{gamma=1} that are not in the unperturbed spectrum
//! satisfy the quantization condition
//!
//!   F(E) = (sqrt(3)/N) sum_k [ 1/(E - eps(k)) + 1/(E + eps(k)) ] = 0
//!
//! with eps(k) >= 0 the positive band over the momentum grid (the two
//! Dirac momenta contribute the 4 sqrt(3)/(N E) pole). F is odd and
//! strictly decreasing between consecutive poles, so every interior gap
//! holds exactly one root, bracketable by bisection.

use crate::bloch::{band_magnitudes, dirac_momenta};
use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;
use crate::spectral::zeta::{epstein_zeta, s_dirac, Sym2};

/// Precomputed grid energies for repeated F evaluations.
pub struct ResolventContext {
    n_sites: f64,
    eps: Vec<f64>,
    distinct_positive: Vec<f64>,
}

impl ResolventContext {
    pub fn new(spec: LatticeSpec) -> Self {
        let eps = band_magnitudes(spec);
        let mut positive: Vec<f64> = eps.iter().copied().filter(|&e| e > 1e-9).collect();
        positive.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut distinct_positive = Vec::new();
        for e in positive {
            match distinct_positive.last() {
                Some(&last) if e - last < 1e-9 => {}
                _ => distinct_positive.push(e),
            }
        }
        Self {
            n_sites: spec.site_count() as f64,
            eps,
            distinct_positive,
        }
    }

    /// Smallest positive unperturbed energy.
    pub fn eps_min(&self) -> f64 {
        self.distinct_positive[0]
    }

    pub fn distinct_positive(&self) -> &[f64] {
        &self.distinct_positive
    }

    fn check_pole(&self, e: f64) -> Result<()> {
        for &eps in &self.eps {
            if (e - eps).abs() < 1e-12 || (e + eps).abs() < 1e-12 {
                return Err(Error::PoleProximity {
                    energy: e,
                    pole: eps,
                });
            }
        }
        Ok(())
    }

    /// F(E); errors within 1e-12 of any pole.
    pub fn f(&self, e: f64) -> Result<f64> {
        self.check_pole(e)?;
        Ok(self.f_unchecked(e))
    }

    fn f_unchecked(&self, e: f64) -> f64 {
        let mut acc = 0.0;
        for &eps in &self.eps {
            acc += 1.0 / (e - eps) + 1.0 / (e + eps);
        }
        3.0f64.sqrt() / self.n_sites * acc
    }

    /// F'(E) by term-wise differentiation.
    pub fn df(&self, e: f64) -> Result<f64> {
        self.check_pole(e)?;
        let mut acc = 0.0;
        for &eps in &self.eps {
            let a = e - eps;
            let b = e + eps;
            acc -= 1.0 / (a * a) + 1.0 / (b * b);
        }
        Ok(3.0f64.sqrt() / self.n_sites * acc)
    }

    /// The unique root of F in the open interval (lo, hi) between two
    /// poles. F(lo+) = +inf and F(hi-) = -inf, so a sign change is
    /// guaranteed; bisect to 1e-13 then polish with a secant step.
    fn root_in_gap(&self, lo: f64, hi: f64) -> Result<f64> {
        let width = hi - lo;
        let mut a = lo + 1e-9 * width;
        let mut b = hi - 1e-9 * width;
        let mut fa = self.f_unchecked(a);
        let mut fb = self.f_unchecked(b);
        if !(fa > 0.0 && fb < 0.0) {
            return Err(Error::NoBracket { lo: a, hi: b });
        }
        let mut iterations = 0;
        while b - a > 1e-13 && iterations < 200 {
            let mid = 0.5 * (a + b);
            let fm = self.f_unchecked(mid);
            if fm > 0.0 {
                a = mid;
                fa = fm;
            } else {
                b = mid;
                fb = fm;
            }
            iterations += 1;
        }
        // one secant step inside the final bracket
        let mut root = b - fb * (b - a) / (fb - fa);
        if !root.is_finite() || root <= lo || root >= hi {
            root = 0.5 * (a + b);
        }
        Ok(root)
    }

    /// All positive perturbed eigenenergies: one root per gap of the
    /// positive spectrum, including the (0, eps_min) gap when the Dirac
    /// pole at E = 0 is present. Gaps without a sign change are skipped.
    pub fn positive_roots(&self) -> Vec<f64> {
        let mut bounds = Vec::with_capacity(self.distinct_positive.len() + 1);
        bounds.push(0.0);
        bounds.extend_from_slice(&self.distinct_positive);
        let mut roots = Vec::new();
        for w in bounds.windows(2) {
            if let Ok(root) = self.root_in_gap(w[0], w[1]) {
                roots.push(root);
            }
        }
        roots
    }
}

/// F(E) for the spec's torus.
pub fn resolvent_f(spec: LatticeSpec, e: f64) -> Result<f64> {
    ResolventContext::new(spec).f(e)
}

/// F'(E) for the spec's torus.
pub fn resolvent_df(spec: LatticeSpec, e: f64) -> Result<f64> {
    ResolventContext::new(spec).df(e)
}

/// The perturbed level E_+ in (0, eps_min): bracketed bisection plus a
/// final secant polish. Requires exact Dirac points so F has its 1/E pole.
pub fn resolvent_root(spec: LatticeSpec) -> Result<f64> {
    spec.require_dirac_exact()?;
    let ctx = ResolventContext::new(spec);
    let eps_min = ctx.eps_min();
    let root = ctx.root_in_gap(0.0, eps_min).map_err(|_| Error::NoBracket {
        lo: 1e-6 * eps_min,
        hi: eps_min * (1.0 - 1e-6),
    })?;
    // accuracy contract: |F(E+)| <= 1e-12 |F'(E+)| E+
    let residual = ctx.f_unchecked(root).abs();
    let scale = ctx.df(root)?.abs() * root;
    if residual > 1e-12 * scale {
        return Err(Error::RootTolerance { f_abs: residual });
    }
    Ok(root)
}

/// Inverse-power moments I_{2n} = (sqrt(3)/N) sum_{k != K,K'} 2/eps^{2n}
/// for n = 1..=n_max. Odd moments vanish identically by the +-eps symmetry
/// and are skipped.
pub fn moment_sums(spec: LatticeSpec, n_max: usize) -> Result<Vec<f64>> {
    spec.require_dirac_exact()?;
    let dirac = dirac_momenta(spec);
    let mut moments = vec![0.0; n_max];
    let n_sites = spec.site_count() as f64;
    let prefactor = 2.0 * 3.0f64.sqrt() / n_sites;
    for p in 0..spec.m() {
        for q in 0..spec.n() {
            if dirac.contains(&(p, q)) {
                continue;
            }
            let k = crate::bloch::QuasiMomentum::new(spec, p, q);
            let (eps, _) = crate::bloch::dispersion(k, 1.0, 0.0)?;
            let inv2 = 1.0 / (eps * eps);
            let mut power = 1.0;
            for moment in moments.iter_mut() {
                power *= inv2;
                *moment += prefactor * power;
            }
        }
    }
    Ok(moments)
}

/// Which asymptotic prefactor the moment data approaches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentPrefactor {
    /// lim I_{2k} / N^{k-1} = 4 sqrt(3) (Z2(S_K,k) + Z2(S_K',k))
    FourSqrtThree,
    /// the same expression with prefactor 2 sqrt(3)
    TwoSqrtThree,
}

impl std::fmt::Display for MomentPrefactor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MomentPrefactor::FourSqrtThree => write!(f, "4*sqrt(3)"),
            MomentPrefactor::TwoSqrtThree => write!(f, "2*sqrt(3)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MomentLimitRow {
    pub cells: usize,
    pub n_sites: usize,
    pub ratio: f64,
}

/// Comparison of I_{2k}/N^{k-1} against the two candidate limits.
#[derive(Debug, Clone)]
pub struct MomentLimitReport {
    pub k: usize,
    pub rows: Vec<MomentLimitRow>,
    /// 4 sqrt(3) (Z2(S_K,k) + Z2(S_K',k))
    pub limit_four: f64,
    /// 2 sqrt(3) (Z2(S_K,k) + Z2(S_K',k))
    pub limit_two: f64,
    pub verdict: MomentPrefactor,
}

/// Tabulate I_{2k}/N^{k-1} over square tori and report which candidate
/// prefactor the data approaches.
pub fn verify_moment_limit(sizes: &[usize], k: usize) -> Result<MomentLimitReport> {
    if k < 2 {
        return Err(Error::InvalidParameter(
            "moment limit comparison needs k >= 2".into(),
        ));
    }
    if sizes.is_empty() {
        return Err(Error::InvalidParameter("no sizes given".into()));
    }
    let zeta = epstein_zeta(s_dirac(), k as f64, 600)?;
    let limit_four = 4.0 * 3.0f64.sqrt() * 2.0 * zeta.value;
    let limit_two = 0.5 * limit_four;
    let mut rows = Vec::with_capacity(sizes.len());
    for &cells in sizes {
        let spec = LatticeSpec::new(cells, cells)?;
        let moments = moment_sums(spec, k)?;
        let n = spec.site_count() as f64;
        let ratio = moments[k - 1] / n.powi(k as i32 - 1);
        rows.push(MomentLimitRow {
            cells,
            n_sites: spec.site_count(),
            ratio,
        });
    }
    let last = rows.last().expect("at least one size").ratio;
    let verdict = if (last - limit_four).abs() <= (last - limit_two).abs() {
        MomentPrefactor::FourSqrtThree
    } else {
        MomentPrefactor::TwoSqrtThree
    };
    Ok(MomentLimitReport {
        k,
        rows,
        limit_four,
        limit_two,
        verdict,
    })
}

/// Bundle of the resolvent expansion data for one torus.
#[derive(Debug, Clone)]
pub struct ResolventSeries {
    pub e_plus: f64,
    pub f_prime_at_root: f64,
    /// I_2, I_4, ..., I_{2 n_max}
    pub moments: Vec<f64>,
    /// Z2(S_K, k) for k = 2..=k_max
    pub zeta_values: Vec<f64>,
    pub s_matrix: Sym2,
}

pub fn resolvent_series(spec: LatticeSpec, n_max: usize, k_max: usize) -> Result<ResolventSeries> {
    let e_plus = resolvent_root(spec)?;
    let f_prime_at_root = resolvent_df(spec, e_plus)?;
    let moments = moment_sums(spec, n_max)?;
    let mut zeta_values = Vec::new();
    for k in 2..=k_max {
        zeta_values.push(epstein_zeta(s_dirac(), k as f64, 400)?.value);
    }
    Ok(ResolventSeries {
        e_plus,
        f_prime_at_root,
        moments,
        zeta_values,
        s_matrix: s_dirac(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(m: usize) -> LatticeSpec {
        LatticeSpec::new(m, m).unwrap()
    }

    #[test]
    fn f_is_odd() {
        let s = spec(12);
        let ctx = ResolventContext::new(s);
        for e in [0.03, 0.11, 0.4] {
            let plus = ctx.f(e).unwrap();
            let minus = ctx.f(-e).unwrap();
            assert!((plus + minus).abs() < 1e-12 * plus.abs().max(1.0));
        }
    }

    #[test]
    fn dirac_pole_dominates_near_zero() {
        let s = spec(12);
        let n = s.site_count() as f64;
        let e = 1e-7;
        let f = resolvent_f(s, e).unwrap();
        let pole = 4.0 * 3.0f64.sqrt() / (n * e);
        assert!((f - pole).abs() / pole < 1e-4, "F={f} pole={pole}");
    }

    #[test]
    fn pole_proximity_rejected() {
        let s = spec(12);
        let ctx = ResolventContext::new(s);
        let eps_min = ctx.eps_min();
        assert!(matches!(
            ctx.f(eps_min),
            Err(Error::PoleProximity { .. })
        ));
        assert!(matches!(ctx.f(0.0), Err(Error::PoleProximity { .. })));
    }

    #[test]
    fn single_sign_change_below_band() {
        let s = spec(12);
        let ctx = ResolventContext::new(s);
        let eps_min = ctx.eps_min();
        let mut crossings = 0;
        let mut prev = ctx.f(1e-4).unwrap();
        let samples = 2000;
        for i in 1..=samples {
            let e = 1e-4 + (eps_min - 1e-6 - 1e-4) * i as f64 / samples as f64;
            let cur = ctx.f(e).unwrap();
            if prev > 0.0 && cur <= 0.0 {
                crossings += 1;
            }
            prev = cur;
        }
        assert_eq!(crossings, 1);
    }

    #[test]
    fn root_below_leading_order_estimate() {
        // the neglected I_{2n} terms all push the root down, so
        // E+ < sqrt(4 sqrt(3) / (N I_2)), approaching it from below as the
        // log corrections fade
        let mut prev_ratio = 0.0;
        for m in [6, 12, 18] {
            let s = spec(m);
            let root = resolvent_root(s).unwrap();
            let i2 = moment_sums(s, 1).unwrap()[0];
            let estimate = (4.0 * 3.0f64.sqrt() / (s.site_count() as f64 * i2)).sqrt();
            assert!(root < estimate, "m={m}: root {root} est {estimate}");
            // E+^2 N I2 / (4 sqrt 3) climbs toward 1
            let ratio = (root / estimate).powi(2);
            assert!(ratio > prev_ratio && ratio > 0.8, "m={m}: ratio {ratio}");
            prev_ratio = ratio;
        }
    }

    #[test]
    fn root_requires_dirac_exact() {
        assert!(matches!(
            resolvent_root(LatticeSpec::new(10, 10).unwrap()),
            Err(Error::DiracUnavailable { .. })
        ));
    }

    #[test]
    fn moments_positive_and_log_growing() {
        let i2_6 = moment_sums(spec(6), 3).unwrap();
        let i2_12 = moment_sums(spec(12), 3).unwrap();
        assert!(i2_6.iter().all(|&x| x > 0.0));
        assert!(i2_12[0] > i2_6[0], "I2 grows with N");
    }

    #[test]
    fn frozen_i2_values() {
        // frozen from an independent momentum-grid summation oracle
        let i2 = moment_sums(spec(12), 1).unwrap()[0];
        assert!((i2 - 1.403_301).abs() < 1e-5, "I2(12x12) = {i2}");
        let i2 = moment_sums(spec(6), 1).unwrap()[0];
        assert!((i2 - 0.936_667).abs() < 1e-5, "I2(6x6) = {i2}");
    }

    #[test]
    fn moment_limit_prefers_four_sqrt_three() {
        let report = verify_moment_limit(&[6, 9, 12, 15, 18], 2).unwrap();
        assert_eq!(report.verdict, MomentPrefactor::FourSqrtThree);
        // ratios decrease monotonically toward the limit
        for w in report.rows.windows(2) {
            assert!(w[1].ratio < w[0].ratio);
        }
        assert!(report.rows.last().unwrap().ratio > report.limit_four);
    }

    #[test]
    fn f_prime_approaches_minus_two_i2() {
        let mut prev_dev = f64::INFINITY;
        for m in [6, 12, 24] {
            let s = spec(m);
            let root = resolvent_root(s).unwrap();
            let df = resolvent_df(s, root).unwrap();
            let i2 = moment_sums(s, 1).unwrap()[0];
            let dev = (df / (-2.0 * i2) - 1.0).abs();
            assert!(dev < prev_dev, "m={m}: deviation {dev} grew");
            prev_dev = dev;
        }
        assert!(prev_dev < 0.12);
    }

    #[test]
    fn positive_roots_interlace_the_band() {
        let s = spec(6);
        let ctx = ResolventContext::new(s);
        let roots = ctx.positive_roots();
        assert_eq!(roots.len(), ctx.distinct_positive().len());
        assert!(roots[0] < ctx.eps_min());
        for (i, w) in roots.windows(2).enumerate() {
            assert!(w[0] < w[1]);
            assert!(w[1] > ctx.distinct_positive()[i]);
        }
    }
}
