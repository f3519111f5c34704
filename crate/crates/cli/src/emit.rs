//! Cluster report documents: JSON, CSV, plain text and SVG.

use std::fmt::Write as _;

use rootclust::geometry::{ClusterReport, Disc, Square};
use rootclust::numerics::{Dyadic, DyadicComplex};
use serde::{Deserialize, Serialize};

use crate::args::Format;

/// What the report document says besides the clusters.
#[derive(Clone, Debug)]
pub struct ReportMeta {
    pub degree: usize,
    pub roi: Square,
    pub eps_exp: u32,
    pub algo: String,
    /// result of the annulus check, when it was run
    pub annulus_certified: Option<bool>,
    pub stats: bool,
    pub svg_tree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonRoi {
    pub cx: String,
    pub cy: String,
    pub w: String,
    pub bits: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonCluster {
    pub center_re: String,
    pub center_im: String,
    pub radius: String,
    pub multiplicity: u64,
    /// largest mantissa length among the three numbers
    pub bits: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonStats {
    pub depth: usize,
    pub tree_size: usize,
    pub c0_calls: usize,
    pub cstar_calls: usize,
    pub pstar_calls: usize,
    pub tstar_calls: usize,
    pub wall_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonReport {
    pub degree: usize,
    pub roi: JsonRoi,
    pub epsilon_exp: u32,
    pub algo: String,
    pub clusters: Vec<JsonCluster>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annulus_certified: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<JsonStats>,
}

pub fn emit_report(report: &ClusterReport, meta: &ReportMeta, format: Format) -> String {
    match format {
        Format::Json => to_json(report, meta),
        Format::Csv => to_csv(report),
        Format::Txt => to_txt(report, meta),
        Format::Svg => to_svg(report, meta),
    }
}

fn json_report(report: &ClusterReport, meta: &ReportMeta) -> JsonReport {
    let dec = Dyadic::to_decimal_string;
    let roi = &meta.roi;
    let clusters = report
        .clusters
        .iter()
        .map(|(d, m)| JsonCluster {
            center_re: dec(&d.center.re),
            center_im: dec(&d.center.im),
            radius: dec(&d.radius),
            multiplicity: *m,
            bits: d.center.bits().max(d.radius.bits()),
        })
        .collect();
    let s = &report.stats;
    JsonReport {
        degree: meta.degree,
        roi: JsonRoi { cx: dec(&roi.center.re), cy: dec(&roi.center.im), w: dec(&roi.width), bits: roi.center.bits().max(roi.width.bits()) },
        epsilon_exp: meta.eps_exp,
        algo: meta.algo.clone(),
        clusters,
        annulus_certified: meta.annulus_certified,
        stats: meta.stats.then(|| JsonStats {
            depth: s.depth,
            tree_size: s.tree_size,
            c0_calls: s.c0_calls,
            cstar_calls: s.cstar_calls,
            pstar_calls: s.pstar_calls + s.pstar_approx_calls,
            tstar_calls: s.tstar_calls,
            wall_ms: s.wall_time.as_millis() as u64,
        }),
    }
}

pub fn to_json(report: &ClusterReport, meta: &ReportMeta) -> String {
    let mut s = serde_json::to_string_pretty(&json_report(report, meta)).expect("plain data serializes");
    s.push('\n');
    s
}

/// Clusters of a JSON report, exactly as they were stored.
pub fn clusters_from_json(text: &str) -> Result<Vec<(Disc, u64)>, String> {
    let doc: JsonReport = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let num = |s: &str| Dyadic::parse(s).map_err(|e| e.to_string());
    doc.clusters
        .iter()
        .map(|c| {
            let center = DyadicComplex::new(num(&c.center_re)?, num(&c.center_im)?);
            Ok((Disc::new(center, num(&c.radius)?), c.multiplicity))
        })
        .collect()
}

pub fn to_csv(report: &ClusterReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["center_re", "center_im", "radius", "multiplicity"]).expect("in-memory write");
    for (d, m) in &report.clusters {
        w.write_record([
            d.center.re.to_decimal_string(),
            d.center.im.to_decimal_string(),
            d.radius.to_decimal_string(),
            m.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

pub fn to_txt(report: &ClusterReport, meta: &ReportMeta) -> String {
    let mut s = String::new();
    let roi = &meta.roi;
    let _ = writeln!(s, "degree {}  algo {}  eps 2^-{}", meta.degree, meta.algo, meta.eps_exp);
    let _ = writeln!(s, "roi center ({}, {}) width {}", roi.center.re, roi.center.im, roi.width);
    if let Some(ok) = meta.annulus_certified {
        let _ = writeln!(s, "annulus {}", if ok { "certified root-free" } else { "not certified" });
    }
    let _ = writeln!(s, "{} clusters, {} roots", report.clusters.len(), report.total_roots());
    for (d, m) in &report.clusters {
        let _ = writeln!(s, "{m:>4}  {:+.17e} {:+.17e}i  r {:.3e}", d.center.re.to_f64(), d.center.im.to_f64(), d.radius.to_f64());
    }
    if meta.stats {
        let st = &report.stats;
        let _ = writeln!(
            s,
            "depth {} tree {} c0 {} cstar {} tstar {} pstar {} approx {} wall {} ms",
            st.depth,
            st.tree_size,
            st.c0_calls,
            st.cstar_calls,
            st.tstar_calls,
            st.pstar_calls,
            st.pstar_approx_calls,
            st.wall_time.as_millis()
        );
    }
    s
}

const SVG_SIZE: f64 = 640.0;
const MIN_DISC_PX: f64 = 2.5;

pub fn to_svg(report: &ClusterReport, meta: &ReportMeta) -> String {
    let roi = &meta.roi;
    let w = roi.width.to_f64();
    let (x0, y1) = (roi.x_min().to_f64(), roi.y_max().to_f64());
    let px = |x: f64| (x - x0) / w * SVG_SIZE;
    let py = |y: f64| (y1 - y) / w * SVG_SIZE;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}" viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{SVG_SIZE}" height="{SVG_SIZE}" fill="white" stroke="black" stroke-width="1"/>"#);
    if meta.svg_tree {
        let _ = writeln!(s, r#"<g fill="none" stroke="gray" stroke-width="0.3">"#);
        for b in &report.tree {
            let side = b.width.to_f64() / w * SVG_SIZE;
            let _ = writeln!(
                s,
                r#"<rect x="{:.3}" y="{:.3}" width="{side:.3}" height="{side:.3}"/>"#,
                px(b.x_min().to_f64()),
                py(b.y_max().to_f64())
            );
        }
        let _ = writeln!(s, "</g>");
    }
    let _ = writeln!(s, r#"<g fill="firebrick" fill-opacity="0.6" stroke="darkred" stroke-width="0.5">"#);
    for (d, _) in &report.clusters {
        let r = (d.radius.to_f64() / w * SVG_SIZE).max(MIN_DISC_PX);
        let _ = writeln!(s, r#"<circle cx="{:.3}" cy="{:.3}" r="{r:.3}"/>"#, px(d.center.re.to_f64()), py(d.center.im.to_f64()));
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g font-family="sans-serif" font-size="10" fill="black">"#);
    for (d, m) in report.clusters.iter().filter(|(_, m)| *m >= 2) {
        let r = (d.radius.to_f64() / w * SVG_SIZE).max(MIN_DISC_PX);
        let _ = writeln!(s, r#"<text x="{:.3}" y="{:.3}">{m}</text>"#, px(d.center.re.to_f64()) + r + 1.0, py(d.center.im.to_f64()) - r - 1.0);
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}
