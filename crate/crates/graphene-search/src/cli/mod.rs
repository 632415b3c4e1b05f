//! Command-line entry points: flag parsing, CSV/JSON/SVG emission and run
//! manifests.
//!
//! Output contract: CSV with 17-significant-digit floats and `\n` line
//! endings so identical invocations produce byte-identical files; a JSON
//! summary next to tabular outputs where a run has headline numbers; and
//! a `<stem>.manifest.json` listing every output with its SHA-256 digest.

pub mod svg;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::analysis::{
    amplitude_envelope_study, gap_scaling_study, moment_study, search_time_study,
};
use crate::dynamics::{reduced_rotation_time, run_search, run_transfer, StartState};
use crate::error::Error;
use crate::lattice::{LatticeSpec, SiteId, Sublattice};
use crate::spectral::{gamma_sweep, MomentPrefactor};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric { stage: &'static str, source: Error },
    Io { stage: &'static str, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numeric { .. } => EXIT_NUMERIC,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage: {msg}"),
            CliError::Numeric { stage, source } => write!(f, "{stage} failed: {source}"),
            CliError::Io { stage, source } => write!(f, "{stage} failed: {source}"),
        }
    }
}

fn numeric(stage: &'static str) -> impl Fn(Error) -> CliError {
    move |source| CliError::Numeric { stage, source }
}

fn io_err(stage: &'static str) -> impl Fn(std::io::Error) -> CliError {
    move |source| CliError::Io { stage, source }
}

/// 17 significant digits, '.' separator; byte-stable across runs.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// "MxN" -> LatticeSpec.
pub fn parse_cells(text: &str) -> Result<LatticeSpec, CliError> {
    let (m, n) = text
        .split_once(['x', 'X'])
        .ok_or_else(|| CliError::Usage(format!("--cells expects MxN, got '{text}'")))?;
    let m: usize = m
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("bad cell count '{m}'")))?;
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("bad cell count '{n}'")))?;
    LatticeSpec::new(m, n).map_err(|e| CliError::Usage(e.to_string()))
}

/// "alpha,beta,A|B" -> SiteId.
pub fn parse_mark(text: &str) -> Result<SiteId, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!(
            "--mark expects alpha,beta,sublattice, got '{text}'"
        )));
    }
    let alpha: usize = parts[0]
        .parse()
        .map_err(|_| CliError::Usage(format!("bad alpha '{}'", parts[0])))?;
    let beta: usize = parts[1]
        .parse()
        .map_err(|_| CliError::Usage(format!("bad beta '{}'", parts[1])))?;
    let sublattice = match parts[2] {
        "A" | "a" => Sublattice::A,
        "B" | "b" => Sublattice::B,
        other => {
            return Err(CliError::Usage(format!(
                "sublattice must be A or B, got '{other}'"
            )))
        }
    };
    Ok(SiteId::new(alpha, beta, sublattice))
}

/// "FROM:TO:STEP" -> (from, to, grid point count).
pub fn parse_gamma_range(text: &str) -> Result<(f64, f64, usize), CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!(
            "--gamma expects FROM:TO:STEP, got '{text}'"
        )));
    }
    let from: f64 = parts[0]
        .parse()
        .map_err(|_| CliError::Usage(format!("bad gamma '{}'", parts[0])))?;
    let to: f64 = parts[1]
        .parse()
        .map_err(|_| CliError::Usage(format!("bad gamma '{}'", parts[1])))?;
    let step: f64 = parts[2]
        .parse()
        .map_err(|_| CliError::Usage(format!("bad gamma step '{}'", parts[2])))?;
    if !(step > 0.0 && to > from) {
        return Err(CliError::Usage(format!(
            "gamma range must increase with a positive step, got '{text}'"
        )));
    }
    let steps = ((to - from) / step).round() as usize + 1;
    Ok((from, to, steps))
}

/// "LO..HI:STEP" (inclusive) or a comma list -> sizes.
pub fn parse_sizes(text: &str) -> Result<Vec<usize>, CliError> {
    let bad = |t: &str| CliError::Usage(format!("--sizes expects LO..HI:STEP or a comma list, got '{t}'"));
    if let Some((range, step)) = text.split_once(':') {
        let (lo, hi) = range.split_once("..").ok_or_else(|| bad(text))?;
        let lo: usize = lo.trim().parse().map_err(|_| bad(text))?;
        let hi: usize = hi.trim().parse().map_err(|_| bad(text))?;
        let step: usize = step.trim().parse().map_err(|_| bad(text))?;
        if step == 0 || hi < lo {
            return Err(bad(text));
        }
        Ok((lo..=hi).step_by(step).collect())
    } else if text.contains("..") {
        Err(bad(text))
    } else {
        text.split(',')
            .map(|t| t.trim().parse().map_err(|_| bad(text)))
            .collect()
    }
}

pub fn parse_start(text: &str) -> Result<StartState, CliError> {
    match text {
        "optimal" => Ok(StartState::Optimal),
        "uniform-dirac" => Ok(StartState::UniformDirac),
        other => Err(CliError::Usage(format!(
            "--start must be optimal or uniform-dirac, got '{other}'"
        ))),
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        let _ = write!(out, "{b:02x}");
    }
    out
}

fn write_file(stage: &'static str, path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(io_err(stage))
}

fn sibling(path: &Path, extension: &str) -> PathBuf {
    path.with_extension(extension)
}

/// Every run records its parameters and the digests of everything it wrote.
fn write_manifest(
    subcommand: &str,
    parameters: Value,
    outputs: &[PathBuf],
    started: Instant,
    manifest_path: &Path,
) -> Result<(), CliError> {
    let mut listed = Vec::with_capacity(outputs.len());
    for path in outputs {
        let bytes = std::fs::read(path).map_err(io_err("manifest digesting"))?;
        listed.push(json!({
            "path": path.to_string_lossy(),
            "sha256": sha256_hex(&bytes),
        }));
    }
    let manifest = json!({
        "subcommand": subcommand,
        "parameters": parameters,
        "version": env!("CARGO_PKG_VERSION"),
        "duration_seconds": started.elapsed().as_secs_f64(),
        "outputs": listed,
    });
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    write_file("manifest writing", manifest_path, &(text + "\n"))
}

#[derive(Debug, Clone)]
pub struct SpectrumOptions {
    pub cells: String,
    pub gamma: String,
    pub mark: String,
    pub out: PathBuf,
    pub svg: Option<PathBuf>,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self {
            cells: "12x12".into(),
            gamma: "0:1.2:0.005".into(),
            mark: "0,0,A".into(),
            out: PathBuf::from("spectrum.csv"),
            svg: None,
        }
    }
}

pub fn cmd_spectrum(opts: &SpectrumOptions) -> Result<(), CliError> {
    let started = Instant::now();
    let spec = parse_cells(&opts.cells)?;
    let marked = parse_mark(&opts.mark)?;
    let (from, to, steps) = parse_gamma_range(&opts.gamma)?;

    let sweep =
        gamma_sweep(spec, marked, from, to, steps).map_err(numeric("gamma sweep"))?;

    let mut csv = String::from("gamma,index,eigenvalue\n");
    for (s, gamma) in sweep.gammas.iter().enumerate() {
        for (index, value) in sweep.spectra[s].iter().enumerate() {
            let _ = writeln!(csv, "{},{index},{}", fmt_f64(*gamma), fmt_f64(*value));
        }
    }
    write_file("spectrum CSV writing", &opts.out, &csv)?;
    let mut outputs = vec![opts.out.clone()];

    if let Some(svg_path) = &opts.svg {
        write_file("SVG writing", svg_path, &svg::spectrum_svg(&sweep))?;
        outputs.push(svg_path.clone());
    }

    let (closest_step, separation) = sweep.closest_approach();
    write_manifest(
        "spectrum",
        json!({
            "cells": format!("{spec}"),
            "gamma": {"from": from, "to": to, "grid_points": steps},
            "mark": format!("{marked}"),
            "crossing_gamma": sweep.gammas[closest_step],
            "crossing_separation": separation,
            "tracking_broken_at": [
                sweep.branch_plus.broken_at,
                sweep.branch_minus.broken_at,
            ],
        }),
        &outputs,
        started,
        &sibling(&opts.out, "manifest.json"),
    )
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub cells: String,
    pub mark: String,
    pub start: String,
    pub dt: Option<f64>,
    pub tmax: Option<f64>,
    pub out: PathBuf,
    pub svg: Option<PathBuf>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            cells: "12x12".into(),
            mark: "0,0,A".into(),
            start: "optimal".into(),
            dt: None,
            tmax: None,
            out: PathBuf::from("search.csv"),
            svg: None,
        }
    }
}

pub fn cmd_search(opts: &SearchOptions) -> Result<(), CliError> {
    let started = Instant::now();
    let spec = parse_cells(&opts.cells)?;
    let marked = parse_mark(&opts.mark)?;
    let start = parse_start(&opts.start)?;
    let t_red = reduced_rotation_time(spec);
    let dt = opts.dt.unwrap_or(t_red / 200.0);
    let t_max = opts.tmax.unwrap_or(2.5 * t_red);

    let run =
        run_search(spec, marked, start, dt, t_max).map_err(numeric("search run"))?;

    let mut csv = String::from("t,P_total,P_site1,P_site2,P_site3,P_marked\n");
    for (k, t) in run.times.iter().enumerate() {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            fmt_f64(*t),
            fmt_f64(run.p_total[k]),
            fmt_f64(run.p_sites[0][k]),
            fmt_f64(run.p_sites[1][k]),
            fmt_f64(run.p_sites[2][k]),
            fmt_f64(run.p_marked[k]),
        );
    }
    write_file("search CSV writing", &opts.out, &csv)?;
    let mut outputs = vec![opts.out.clone()];

    let summary = json!({
        "cells": format!("{spec}"),
        "mark": format!("{marked}"),
        "start": opts.start,
        "t_peak": run.t_peak,
        "p_peak": run.p_peak,
        "e_plus": run.e_plus,
        "prediction_reduced": run.prediction_reduced,
        "prediction_exact": run.prediction_exact,
        "average_site_probability": 1.0 / spec.site_count() as f64,
        "norm_drift": run.norm_drift,
    });
    let summary_path = sibling(&opts.out, "summary.json");
    write_file(
        "summary writing",
        &summary_path,
        &(serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n"),
    )?;
    outputs.push(summary_path);

    if let Some(svg_path) = &opts.svg {
        let plot = svg::timeseries_svg(
            &run.times,
            &[
                ("3-neighbor total", &run.p_total, "#d62728"),
                ("single neighbor", &run.p_sites[0], "#1f77b4"),
                ("marked site", &run.p_marked, "#2ca02c"),
            ],
        );
        write_file("SVG writing", svg_path, &plot)?;
        outputs.push(svg_path.clone());
    }

    write_manifest(
        "search",
        json!({
            "cells": format!("{spec}"),
            "mark": format!("{marked}"),
            "start": opts.start,
            "dt": dt,
            "t_max": t_max,
        }),
        &outputs,
        started,
        &sibling(&opts.out, "manifest.json"),
    )
}

#[derive(Debug, Clone)]
pub struct ScalingOptions {
    pub study: String,
    pub sizes: String,
    pub mark: String,
    pub out: PathBuf,
}

impl Default for ScalingOptions {
    fn default() -> Self {
        Self {
            study: "gap".into(),
            sizes: "6..24:3".into(),
            mark: "0,0,A".into(),
            out: PathBuf::from("scaling.csv"),
        }
    }
}

fn fit_json(fit: &crate::analysis::ScalingFit) -> Value {
    json!({
        "model": fit.model.label(),
        "c": fit.c,
        "intercept": fit.intercept,
        "rss": fit.rss,
        "r_squared": fit.r_squared,
        "points": fit.points,
    })
}

pub fn cmd_scaling(opts: &ScalingOptions) -> Result<(), CliError> {
    let started = Instant::now();
    let sizes = parse_sizes(&opts.sizes)?;
    let marked = parse_mark(&opts.mark)?;

    let (csv, report) = match opts.study.as_str() {
        "gap" => {
            let study =
                gap_scaling_study(&sizes, marked).map_err(numeric("gap scaling study"))?;
            let mut csv = String::from("cells,n_sites,e_plus,delta\n");
            for r in &study.rows {
                let _ = writeln!(
                    csv,
                    "{},{},{},{}",
                    r.cells,
                    r.n_sites,
                    fmt_f64(r.e_plus),
                    fmt_f64(r.delta)
                );
            }
            let report = json!({
                "study": "gap",
                "fits": [fit_json(&study.fit_sqrt), fit_json(&study.fit_log)],
                "verdict": study.verdict().label(),
            });
            (csv, report)
        }
        "time" => {
            let study =
                search_time_study(&sizes, marked).map_err(numeric("search time study"))?;
            let mut csv = String::from(
                "cells,n_sites,t_peak,p_peak,e_plus,pi_over_2e,t_peak_times_e_plus,t_peak_times_ln_n\n",
            );
            for r in &study.rows {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{},{},{}",
                    r.cells,
                    r.n_sites,
                    fmt_f64(r.t_peak),
                    fmt_f64(r.p_peak),
                    fmt_f64(r.e_plus),
                    fmt_f64(r.prediction_exact),
                    fmt_f64(r.t_times_e),
                    fmt_f64(r.t_peak * (r.n_sites as f64).ln()),
                );
            }
            let report = json!({
                "study": "time",
                "fits": [fit_json(&study.fit_sqrt), fit_json(&study.fit_log)],
                "verdict": study.verdict().label(),
            });
            (csv, report)
        }
        "amplitude" => {
            let study = amplitude_envelope_study(&sizes, marked)
                .map_err(numeric("amplitude envelope study"))?;
            let mut csv = String::from("cells,n_sites,measured,predicted,ratio\n");
            for r in &study.rows {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{}",
                    r.cells,
                    r.n_sites,
                    fmt_f64(r.measured),
                    fmt_f64(r.predicted),
                    fmt_f64(r.ratio)
                );
            }
            let ratios: Vec<f64> = study.rows.iter().map(|r| r.ratio).collect();
            let report = json!({
                "study": "amplitude",
                "ratios": ratios,
            });
            (csv, report)
        }
        "moments" => {
            let study = moment_study(&sizes).map_err(numeric("moment study"))?;
            let mut csv = String::from("cells,n_sites,ln_n,i2,i4,i4_over_n\n");
            for r in &study.rows {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{}",
                    r.cells,
                    r.n_sites,
                    fmt_f64((r.n_sites as f64).ln()),
                    fmt_f64(r.i2),
                    fmt_f64(r.i4),
                    fmt_f64(r.i4 / r.n_sites as f64),
                );
            }
            let limit = &study.limit_report;
            let report = json!({
                "study": "moments",
                "log_fit": fit_json(&study.log_fit),
                "limit": {
                    "k": limit.k,
                    "limit_four_sqrt3": limit.limit_four,
                    "limit_two_sqrt3": limit.limit_two,
                    "ratios": limit.rows.iter().map(|r| r.ratio).collect::<Vec<_>>(),
                    "verdict": match limit.verdict {
                        MomentPrefactor::FourSqrtThree => "4*sqrt(3)",
                        MomentPrefactor::TwoSqrtThree => "2*sqrt(3)",
                    },
                },
            });
            (csv, report)
        }
        other => {
            return Err(CliError::Usage(format!(
                "--study must be gap|time|amplitude|moments, got '{other}'"
            )))
        }
    };

    write_file("scaling CSV writing", &opts.out, &csv)?;
    let report_path = sibling(&opts.out, "fit.json");
    write_file(
        "fit report writing",
        &report_path,
        &(serde_json::to_string_pretty(&report).expect("report serializes") + "\n"),
    )?;

    write_manifest(
        "scaling",
        json!({
            "study": opts.study,
            "sizes": sizes,
            "mark": format!("{marked}"),
        }),
        &[opts.out.clone(), report_path],
        started,
        &sibling(&opts.out, "manifest.json"),
    )
}

#[derive(Debug, Clone)]
pub struct TransferOptions {
    pub cells: String,
    pub mark1: String,
    pub mark2: String,
    pub dt: Option<f64>,
    pub tmax: Option<f64>,
    pub out: PathBuf,
}

impl Default for TransferOptions {
    fn default() -> Self {
        Self {
            cells: "12x12".into(),
            mark1: "0,0,A".into(),
            mark2: "6,6,A".into(),
            dt: None,
            tmax: None,
            out: PathBuf::from("transfer.csv"),
        }
    }
}

pub fn cmd_transfer(opts: &TransferOptions) -> Result<(), CliError> {
    let started = Instant::now();
    let spec = parse_cells(&opts.cells)?;
    let mark1 = parse_mark(&opts.mark1)?;
    let mark2 = parse_mark(&opts.mark2)?;
    if mark1 == mark2 {
        return Err(CliError::Usage(
            "the two marked sites must be distinct".into(),
        ));
    }
    let t_red = reduced_rotation_time(spec);
    let dt = opts.dt.unwrap_or(t_red / 100.0);
    let t_max = opts.tmax.unwrap_or(100.0 * t_red);

    let run = run_transfer(spec, mark1, mark2, dt, t_max).map_err(numeric("transfer run"))?;

    let mut csv = String::from("t,P_ell1,P_ell2\n");
    for (k, t) in run.times.iter().enumerate() {
        let _ = writeln!(
            csv,
            "{},{},{}",
            fmt_f64(*t),
            fmt_f64(run.p_ell1[k]),
            fmt_f64(run.p_ell2[k])
        );
    }
    write_file("transfer CSV writing", &opts.out, &csv)?;

    let summary = json!({
        "cells": format!("{spec}"),
        "mark1": format!("{mark1}"),
        "mark2": format!("{mark2}"),
        "classification": if run.same_sublattice { "same-sublattice" } else { "cross-sublattice" },
        "period": run.period,
        "initial_localization": run.initial_localization,
        "cluster_size": run.cluster_size,
        "initial_state": "projection of |l1> onto the sub-band cluster |E| < eps_min/2",
    });
    let summary_path = sibling(&opts.out, "summary.json");
    write_file(
        "summary writing",
        &summary_path,
        &(serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n"),
    )?;

    write_manifest(
        "transfer",
        json!({
            "cells": format!("{spec}"),
            "mark1": format!("{mark1}"),
            "mark2": format!("{mark2}"),
            "dt": dt,
            "t_max": t_max,
        }),
        &[opts.out.clone(), summary_path],
        started,
        &sibling(&opts.out, "manifest.json"),
    )
}
