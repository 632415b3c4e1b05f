//! Scaling studies: gap vs N, search time vs N, amplitude envelope vs N,
//! moment growth, and the least-squares machinery comparing candidate
//! scaling laws on the raw values.

use rayon::prelude::*;

use crate::dynamics::{reduced_rotation_time, run_search, StartState};
use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, SiteId};
use crate::spectral::{
    gap_at_crossing, moment_sums, verify_moment_limit, MomentLimitReport,
};

/// Candidate scaling laws. All single-constant models except the affine
/// log fit used for I_2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalingModel {
    /// c / sqrt(N)
    InvSqrtN,
    /// c / sqrt(N ln N)
    InvSqrtNLogN,
    /// c ln N + b
    LinearLogN,
    /// c sqrt(N ln N)
    SqrtNLogN,
    /// c sqrt(N): baseline the time fit is compared against
    SqrtN,
}

impl ScalingModel {
    fn regressor(&self, n: f64) -> f64 {
        match self {
            ScalingModel::InvSqrtN => 1.0 / n.sqrt(),
            ScalingModel::InvSqrtNLogN => 1.0 / (n * n.ln()).sqrt(),
            ScalingModel::LinearLogN => n.ln(),
            ScalingModel::SqrtNLogN => (n * n.ln()).sqrt(),
            ScalingModel::SqrtN => n.sqrt(),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ScalingModel::InvSqrtN => "c/sqrt(N)",
            ScalingModel::InvSqrtNLogN => "c/sqrt(N ln N)",
            ScalingModel::LinearLogN => "c*ln(N) + b",
            ScalingModel::SqrtNLogN => "c*sqrt(N ln N)",
            ScalingModel::SqrtN => "c*sqrt(N)",
        }
    }
}

impl std::fmt::Display for ScalingModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// A fitted scaling law with its residual diagnostics.
#[derive(Debug, Clone)]
pub struct ScalingFit {
    pub model: ScalingModel,
    pub c: f64,
    /// Present only for the affine log model.
    pub intercept: Option<f64>,
    pub rss: f64,
    pub r_squared: f64,
    pub points: usize,
}

/// Deterministic least squares (normal equations, fixed summation order)
/// of `ys` against the model's N-dependence. Needs at least 4 points.
pub fn fit_scaling(model: ScalingModel, n_sites: &[f64], ys: &[f64]) -> Result<ScalingFit> {
    if n_sites.len() != ys.len() || n_sites.len() < 4 {
        return Err(Error::InvalidParameter(format!(
            "scaling fit needs >= 4 aligned points, got {} / {}",
            n_sites.len(),
            ys.len()
        )));
    }
    let xs: Vec<f64> = n_sites.iter().map(|&n| model.regressor(n)).collect();
    let (c, intercept) = if model == ScalingModel::LinearLogN {
        let k = xs.len() as f64;
        let sx: f64 = xs.iter().sum();
        let sy: f64 = ys.iter().sum();
        let sxx: f64 = xs.iter().map(|x| x * x).sum();
        let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
        let denom = k * sxx - sx * sx;
        let c = (k * sxy - sx * sy) / denom;
        let b = (sy - c * sx) / k;
        (c, Some(b))
    } else {
        let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
        let sxx: f64 = xs.iter().map(|x| x * x).sum();
        (sxy / sxx, None)
    };
    let mut rss = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let pred = c * x + intercept.unwrap_or(0.0);
        rss += (y - pred) * (y - pred);
    }
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let sst: f64 = ys.iter().map(|y| (y - mean) * (y - mean)).sum();
    let r_squared = if sst > 0.0 { 1.0 - rss / sst } else { 1.0 };
    Ok(ScalingFit {
        model,
        c,
        intercept,
        rss,
        r_squared,
        points: ys.len(),
    })
}

fn square_specs(sizes: &[usize]) -> Result<Vec<LatticeSpec>> {
    if sizes.is_empty() {
        return Err(Error::InvalidParameter("no sizes given".into()));
    }
    let mut specs = Vec::with_capacity(sizes.len());
    for &cells in sizes {
        let spec = LatticeSpec::new(cells, cells)?;
        spec.require_dirac_exact()?;
        specs.push(spec);
    }
    Ok(specs)
}

#[derive(Debug, Clone)]
pub struct GapRow {
    pub cells: usize,
    pub n_sites: usize,
    pub e_plus: f64,
    pub delta: f64,
}

#[derive(Debug, Clone)]
pub struct GapScalingStudy {
    pub rows: Vec<GapRow>,
    pub fit_sqrt: ScalingFit,
    pub fit_log: ScalingFit,
}

impl GapScalingStudy {
    /// The model with the smaller residual sum of squares.
    pub fn verdict(&self) -> ScalingModel {
        if self.fit_log.rss < self.fit_sqrt.rss {
            self.fit_log.model
        } else {
            self.fit_sqrt.model
        }
    }
}

/// Per-size crossing gap plus least-squares fits of both candidate laws.
pub fn gap_scaling_study(sizes: &[usize], marked: SiteId) -> Result<GapScalingStudy> {
    let specs = square_specs(sizes)?;
    let rows: Vec<GapRow> = specs
        .par_iter()
        .map(|&spec| {
            let gap = gap_at_crossing(spec, marked)?;
            Ok(GapRow {
                cells: spec.m(),
                n_sites: spec.site_count(),
                e_plus: gap.e_plus,
                delta: gap.delta,
            })
        })
        .collect::<Result<_>>()?;
    let ns: Vec<f64> = rows.iter().map(|r| r.n_sites as f64).collect();
    let deltas: Vec<f64> = rows.iter().map(|r| r.delta).collect();
    let fit_sqrt = fit_scaling(ScalingModel::InvSqrtN, &ns, &deltas)?;
    let fit_log = fit_scaling(ScalingModel::InvSqrtNLogN, &ns, &deltas)?;
    Ok(GapScalingStudy {
        rows,
        fit_sqrt,
        fit_log,
    })
}

#[derive(Debug, Clone)]
pub struct TimeRow {
    pub cells: usize,
    pub n_sites: usize,
    pub t_peak: f64,
    pub p_peak: f64,
    pub e_plus: f64,
    /// pi / (2 E+).
    pub prediction_exact: f64,
    /// T_peak * E+, compared against pi/2.
    pub t_times_e: f64,
}

#[derive(Debug, Clone)]
pub struct SearchTimeStudy {
    pub rows: Vec<TimeRow>,
    pub fit_log: ScalingFit,
    pub fit_sqrt: ScalingFit,
}

impl SearchTimeStudy {
    pub fn verdict(&self) -> ScalingModel {
        if self.fit_log.rss < self.fit_sqrt.rss {
            self.fit_log.model
        } else {
            self.fit_sqrt.model
        }
    }
}

/// Measured search peak time per size with the sqrt(N ln N) fit and the
/// plain sqrt(N) baseline.
pub fn search_time_study(sizes: &[usize], marked: SiteId) -> Result<SearchTimeStudy> {
    let specs = square_specs(sizes)?;
    let rows: Vec<TimeRow> = specs
        .par_iter()
        .map(|&spec| {
            let t_red = reduced_rotation_time(spec);
            let run = run_search(
                spec,
                marked,
                StartState::Optimal,
                t_red / 200.0,
                2.5 * t_red,
            )?;
            Ok(TimeRow {
                cells: spec.m(),
                n_sites: spec.site_count(),
                t_peak: run.t_peak,
                p_peak: run.p_peak,
                e_plus: run.e_plus,
                prediction_exact: run.prediction_exact,
                t_times_e: run.t_peak * run.e_plus,
            })
        })
        .collect::<Result<_>>()?;
    let ns: Vec<f64> = rows.iter().map(|r| r.n_sites as f64).collect();
    let ts: Vec<f64> = rows.iter().map(|r| r.t_peak).collect();
    let fit_log = fit_scaling(ScalingModel::SqrtNLogN, &ns, &ts)?;
    let fit_sqrt = fit_scaling(ScalingModel::SqrtN, &ns, &ts)?;
    Ok(SearchTimeStudy {
        rows,
        fit_log,
        fit_sqrt,
    })
}

#[derive(Debug, Clone)]
pub struct EnvelopeRow {
    pub cells: usize,
    pub n_sites: usize,
    /// |<l|psi(T_peak)>| from the full run.
    pub measured: f64,
    /// 1 / (3^(1/4) sqrt(I2)).
    pub predicted: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone)]
pub struct EnvelopeStudy {
    pub rows: Vec<EnvelopeRow>,
}

/// Measured localization amplitude at the peak against the resolvent
/// envelope prediction.
pub fn amplitude_envelope_study(sizes: &[usize], marked: SiteId) -> Result<EnvelopeStudy> {
    let specs = square_specs(sizes)?;
    let rows: Vec<EnvelopeRow> = specs
        .par_iter()
        .map(|&spec| {
            let t_red = reduced_rotation_time(spec);
            let run = run_search(
                spec,
                marked,
                StartState::Optimal,
                t_red / 200.0,
                2.5 * t_red,
            )?;
            // amplitude at the grid point where the 3-site total peaks
            let mut k = 0;
            for (i, &v) in run.p_total.iter().enumerate() {
                if v > run.p_total[k] {
                    k = i;
                }
            }
            let measured = run.p_ell[k].sqrt();
            let i2 = moment_sums(spec, 1)?[0];
            let predicted = 1.0 / (3.0f64.powf(0.25) * i2.sqrt());
            Ok(EnvelopeRow {
                cells: spec.m(),
                n_sites: spec.site_count(),
                measured,
                predicted,
                ratio: measured / predicted,
            })
        })
        .collect::<Result<_>>()?;
    Ok(EnvelopeStudy { rows })
}

#[derive(Debug, Clone)]
pub struct MomentRow {
    pub cells: usize,
    pub n_sites: usize,
    pub i2: f64,
    pub i4: f64,
}

#[derive(Debug, Clone)]
pub struct MomentStudy {
    pub rows: Vec<MomentRow>,
    /// I_2 = c ln N + b.
    pub log_fit: ScalingFit,
    pub limit_report: MomentLimitReport,
}

/// I_2 growth against ln N plus the empirical resolution of the
/// higher-moment limit prefactor.
pub fn moment_study(sizes: &[usize]) -> Result<MomentStudy> {
    let specs = square_specs(sizes)?;
    let rows: Vec<MomentRow> = specs
        .iter()
        .map(|&spec| {
            let moments = moment_sums(spec, 2)?;
            Ok(MomentRow {
                cells: spec.m(),
                n_sites: spec.site_count(),
                i2: moments[0],
                i4: moments[1],
            })
        })
        .collect::<Result<_>>()?;
    let ns: Vec<f64> = rows.iter().map(|r| r.n_sites as f64).collect();
    let i2s: Vec<f64> = rows.iter().map(|r| r.i2).collect();
    let log_fit = fit_scaling(ScalingModel::LinearLogN, &ns, &i2s)?;
    let limit_report = verify_moment_limit(sizes, 2)?;
    Ok(MomentStudy {
        rows,
        log_fit,
        limit_report,
    })
}
