//! Minimal static SVG emission for the two replica figures: the spectrum
//! vs gamma scatter and the search probability time series. No scripts,
//! no external assets.

use crate::spectral::GammaSweep;

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 60.0;

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        MARGIN + (v - self.x_min) / (self.x_max - self.x_min) * (WIDTH - 2.0 * MARGIN)
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT - MARGIN - (v - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn open_svg(out: &mut String) {
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    ));
}

fn axes(out: &mut String, frame: &Frame, x_label: &str, y_label: &str) {
    let x0 = frame.x(frame.x_min);
    let x1 = frame.x(frame.x_max);
    let y0 = frame.y(frame.y_min);
    let y1 = frame.y(frame.y_max);
    out.push_str(&format!(
        "<line x1=\"{x0:.1}\" y1=\"{y0:.1}\" x2=\"{x1:.1}\" y2=\"{y0:.1}\" stroke=\"black\"/>\n\
         <line x1=\"{x0:.1}\" y1=\"{y0:.1}\" x2=\"{x0:.1}\" y2=\"{y1:.1}\" stroke=\"black\"/>\n"
    ));
    for i in 0..=6 {
        let t = i as f64 / 6.0;
        let xv = frame.x_min + t * (frame.x_max - frame.x_min);
        let yv = frame.y_min + t * (frame.y_max - frame.y_min);
        let xp = frame.x(xv);
        let yp = frame.y(yv);
        out.push_str(&format!(
            "<line x1=\"{xp:.1}\" y1=\"{y0:.1}\" x2=\"{xp:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n\
             <text x=\"{xp:.1}\" y=\"{:.1}\" font-size=\"12\" text-anchor=\"middle\">{xv:.2}</text>\n",
            y0 + 5.0,
            y0 + 20.0
        ));
        out.push_str(&format!(
            "<line x1=\"{x0:.1}\" y1=\"{yp:.1}\" x2=\"{:.1}\" y2=\"{yp:.1}\" stroke=\"black\"/>\n\
             <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\" text-anchor=\"end\">{yv:.2}</text>\n",
            x0 - 5.0,
            x0 - 8.0,
            yp + 4.0
        ));
    }
    out.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"14\" text-anchor=\"middle\">{x_label}</text>\n",
        (x0 + x1) / 2.0,
        HEIGHT - 15.0
    ));
    out.push_str(&format!(
        "<text x=\"18\" y=\"{:.1}\" font-size=\"14\" text-anchor=\"middle\" \
         transform=\"rotate(-90 18 {:.1})\">{y_label}</text>\n",
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    ));
}

fn polyline(out: &mut String, pts: &[(f64, f64)], color: &str, width: f64) {
    if pts.is_empty() {
        return;
    }
    out.push_str(&format!(
        "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"{width}\" points=\""
    ));
    for (x, y) in pts {
        out.push_str(&format!("{x:.1},{y:.1} "));
    }
    out.push_str("\"/>\n");
}

/// Spectrum of H_gamma against gamma: one gray polyline per eigenvalue
/// index with the two tracked perturber branches highlighted.
pub fn spectrum_svg(sweep: &GammaSweep) -> String {
    let n = sweep.spectra[0].len();
    let y_max = sweep
        .spectra
        .iter()
        .flat_map(|s| s.iter())
        .fold(0.0f64, |acc, &v| acc.max(v.abs()));
    let frame = Frame {
        x_min: sweep.gammas[0],
        x_max: *sweep.gammas.last().unwrap(),
        y_min: -1.05 * y_max,
        y_max: 1.05 * y_max,
    };
    let mut out = String::new();
    open_svg(&mut out);
    for i in 0..n {
        let pts: Vec<(f64, f64)> = sweep
            .gammas
            .iter()
            .zip(&sweep.spectra)
            .map(|(&g, es)| (frame.x(g), frame.y(es[i])))
            .collect();
        polyline(&mut out, &pts, "#b0b0b0", 0.6);
    }
    for (branch, color) in [
        (&sweep.branch_plus, "#d62728"),
        (&sweep.branch_minus, "#1f77b4"),
    ] {
        let pts: Vec<(f64, f64)> = sweep
            .gammas
            .iter()
            .enumerate()
            .map(|(s, &g)| (frame.x(g), frame.y(sweep.spectra[s][branch.indices[s]])))
            .collect();
        polyline(&mut out, &pts, color, 1.8);
    }
    axes(&mut out, &frame, "gamma", "E");
    out.push_str("</svg>\n");
    out
}

/// Probability time series (search or transfer runs).
pub fn timeseries_svg(times: &[f64], series: &[(&str, &[f64], &str)]) -> String {
    let y_max = series
        .iter()
        .flat_map(|(_, ys, _)| ys.iter())
        .fold(0.0f64, |acc, &v| acc.max(v));
    let frame = Frame {
        x_min: times[0],
        x_max: *times.last().unwrap(),
        y_min: 0.0,
        y_max: (1.1 * y_max).max(1e-12),
    };
    let mut out = String::new();
    open_svg(&mut out);
    for (idx, (label, ys, color)) in series.iter().enumerate() {
        let pts: Vec<(f64, f64)> = times
            .iter()
            .zip(ys.iter())
            .map(|(&t, &p)| (frame.x(t), frame.y(p)))
            .collect();
        polyline(&mut out, &pts, color, 1.5);
        out.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"13\" fill=\"{color}\">{label}</text>\n",
            WIDTH - MARGIN - 150.0,
            MARGIN + 18.0 * idx as f64
        ));
    }
    axes(&mut out, &frame, "t", "probability");
    out.push_str("</svg>\n");
    out
}
