//! Text artifacts: profile CSV, fit report JSON, table rows and SVG plots.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use crate::fit::{LogBase, Model, ModelComparison};
use crate::profile::EntropyProfile;

/// Seventeen significant digits, `.` decimal separator.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn json_num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

/// Quotes a CSV field when it holds a separator, quote or newline.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub const PROFILE_HEADER: &str = "epsilon,n_boxes,entropy_bits,nonspecificity,discord,mode";

pub fn profile_csv(profile: &EntropyProfile) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# network={} seed={} repetitions={} mode={}",
        profile.network_name, profile.seed, profile.repetitions, profile.mode
    );
    out.push_str(PROFILE_HEADER);
    out.push('\n');
    for p in &profile.points {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            p.epsilon,
            p.n_boxes,
            num(p.entropy.total),
            num(p.entropy.nonspecificity),
            num(p.entropy.discord),
            p.entropy.mode
        );
    }
    out
}

#[derive(Serialize)]
struct CoveringSummary {
    epsilon: u32,
    n_boxes: usize,
    n_boxes_mean: f64,
    n_boxes_variance: f64,
}

pub fn fits_json(profile: &EntropyProfile, comparison: &ModelComparison, log_base: LogBase) -> String {
    let delta = |m: Model| comparison.delta_for(m).map_or(Value::Null, json_num);
    let coverings: Vec<CoveringSummary> = profile
        .points
        .iter()
        .map(|p| CoveringSummary {
            epsilon: p.epsilon,
            n_boxes: p.n_boxes,
            n_boxes_mean: p.n_boxes_mean,
            n_boxes_variance: p.n_boxes_variance,
        })
        .collect();
    let report = json!({
        "network": profile.network_name,
        "nodes": profile.node_count,
        "edges": profile.edge_count,
        "delta": profile.delta,
        "mode": profile.mode,
        "log_base": log_base,
        "seed": profile.seed,
        "repetitions": profile.repetitions,
        "fits": comparison.fits,
        "aic_min": json_num(comparison.aic_min),
        "delta_aic": {
            "deng": delta(Model::Deng),
            "dsummable": delta(Model::Dsummable),
        },
        "selected": comparison.selected,
        "coverings": coverings,
    });
    let mut text = serde_json::to_string_pretty(&report).expect("report is valid JSON");
    text.push('\n');
    text
}

pub const TABLE_HEADER: &str = "name,nodes,edges,d_D,d_dD,nu";

pub fn table_row(name: &str, nodes: usize, edges: usize, comparison: &ModelComparison) -> String {
    let deng = comparison.fit(Model::Deng);
    let dsum = comparison.fit(Model::Dsummable);
    format!(
        "{},{},{},{},{},{}",
        csv_field(name),
        nodes,
        edges,
        opt_num(deng.map(|f| f.d)),
        opt_num(dsum.map(|f| f.d)),
        opt_num(dsum.and_then(|f| f.nu)),
    )
}

/// Empirical points with both fitted curves.
pub fn plot_svg(profile: &EntropyProfile, comparison: &ModelComparison) -> String {
    const W: f64 = 640.0;
    const H: f64 = 420.0;
    const LEFT: f64 = 70.0;
    const RIGHT: f64 = 20.0;
    const TOP: f64 = 40.0;
    const BOTTOM: f64 = 50.0;

    let eps: Vec<f64> = profile.points.iter().map(|p| p.epsilon as f64).collect();
    let ys: Vec<f64> = profile.entropies();
    let (x_lo, x_hi) = (eps[0], *eps.last().unwrap());
    let samples: Vec<f64> = (0..=100).map(|i| x_lo + (x_hi - x_lo) * i as f64 / 100.0).collect();
    let curves: Vec<(Model, Vec<f64>)> = comparison
        .fits
        .iter()
        .map(|f| (f.model, samples.iter().map(|&e| f.predict(e)).collect()))
        .collect();
    let finite = ys.iter().chain(curves.iter().flat_map(|(_, c)| c)).copied().filter(|v| v.is_finite());
    let (mut y_lo, mut y_hi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if y_hi.is_nan() || y_hi <= y_lo {
        y_lo -= 1.0;
        y_hi += 1.0;
    }
    let sx = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo).max(f64::MIN_POSITIVE) * (W - LEFT - RIGHT);
    let sy = |y: f64| H - BOTTOM - (y - y_lo) / (y_hi - y_lo) * (H - TOP - BOTTOM);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{} ({})</text>"#,
        W / 2.0,
        xml_escape(&profile.network_name),
        profile.mode
    );
    let _ = writeln!(
        svg,
        r#"<path d="M{LEFT} {TOP} V{} H{}" fill="none" stroke="black"/>"#,
        H - BOTTOM,
        W - RIGHT
    );
    for p in &profile.points {
        let x = sx(p.epsilon as f64);
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            H - BOTTOM + 18.0,
            p.epsilon
        );
    }
    for (value, label) in [(y_lo, y_lo), (y_hi, y_hi)] {
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{label:.3}</text>"#,
            LEFT - 6.0,
            sy(value) + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">box diameter</text>"#,
        (LEFT + W - RIGHT) / 2.0,
        H - 12.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">Deng entropy (bits)</text>"#,
        H / 2.0,
        H / 2.0
    );
    for (model, curve) in &curves {
        let (color, dash) = match model {
            Model::Deng => ("#1f77b4", ""),
            Model::Dsummable => ("#d62728", r#" stroke-dasharray="6 4""#),
        };
        let mut d = String::new();
        for (i, (&x, &y)) in samples.iter().zip(curve).enumerate() {
            if y.is_finite() {
                let _ = write!(d, "{}{:.2} {:.2} ", if i == 0 { 'M' } else { 'L' }, sx(x), sy(y));
            }
        }
        let _ = writeln!(
            svg,
            r#"<path d="{}" fill="none" stroke="{color}" stroke-width="2"{dash}/>"#,
            d.trim_end()
        );
    }
    for (x, y) in eps.iter().zip(&ys) {
        let _ = writeln!(
            svg,
            r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="black"/>"#,
            sx(*x),
            sy(*y)
        );
    }
    let legend = [
        ("#1f77b4", "", format_fit_label(comparison, Model::Deng)),
        ("#d62728", r#" stroke-dasharray="6 4""#, format_fit_label(comparison, Model::Dsummable)),
    ];
    for (i, (color, dash, text)) in legend.iter().enumerate() {
        let y = TOP + 10.0 + 18.0 * i as f64;
        let _ = writeln!(
            svg,
            r#"<path d="M{:.2} {y:.2} h24" stroke="{color}" stroke-width="2"{dash}/><text x="{:.2}" y="{:.2}">{}</text>"#,
            LEFT + 12.0,
            LEFT + 42.0,
            y + 4.0,
            xml_escape(text)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn format_fit_label(comparison: &ModelComparison, model: Model) -> String {
    match comparison.fit(model) {
        Some(f) => match f.nu {
            Some(nu) => format!("{}: d = {:.4}, nu = {:.4}", model.as_str(), f.d, nu),
            None => format!("{}: d = {:.4}", model.as_str(), f.d),
        },
        None => model.as_str().to_string(),
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
