//! Static SVG renderings of the b–c and μ–ω diagrams.

use std::fmt::Write as _;
use std::path::Path;

use crate::table::{read_csv, BranchRow};
use crate::{io_err, CliError, CliResult};

pub const WIDTH: f64 = 700.0;
pub const HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 70.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotKind {
    BVsC,
    MuVsOmega,
}

impl PlotKind {
    pub fn file_name(self) -> &'static str {
        match self {
            PlotKind::BVsC => "b_vs_c.svg",
            PlotKind::MuVsOmega => "mu_vs_omega.svg",
        }
    }
}

/// Round tick spacing giving roughly `target` intervals over `span`.
fn tick_step(span: f64, target: f64) -> f64 {
    let raw = span / target;
    let mag = 10f64.powf(raw.log10().floor());
    let r = raw / mag;
    let nice = if r < 1.5 {
        1.0
    } else if r < 3.0 {
        2.0
    } else if r < 7.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    let span = hi - lo;
    let pad = if span > 0.0 { 0.05 * span } else { 0.5 * lo.abs().max(1.0) };
    (lo - pad, hi + pad)
}

fn fmt_tick(v: f64, step: f64) -> String {
    let digits = (-step.log10().floor()).max(0.0) as usize;
    let s = format!("{v:.digits$}");
    if s.starts_with('-') && s[1..].chars().all(|ch| ch == '0' || ch == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN_LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN_BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }
}

fn axes(svg: &mut String, f: &Frame, xlabel: &str, ylabel: &str, title: &str) {
    let (x0, x1) = (MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
    let (y0, y1) = (HEIGHT - MARGIN_BOTTOM, MARGIN_TOP);
    let _ = writeln!(
        svg,
        r#"<rect x="{x0}" y="{y1}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        x1 - x0,
        y0 - y1
    );
    let sx = tick_step(f.x.1 - f.x.0, 6.0);
    let mut t = (f.x.0 / sx).ceil() * sx;
    while t <= f.x.1 {
        let p = f.px(t);
        let _ = writeln!(svg, r#"<line x1="{p:.2}" y1="{y0}" x2="{p:.2}" y2="{:.2}" stroke="black"/>"#, y0 + 6.0);
        let _ = writeln!(
            svg,
            r#"<text x="{p:.2}" y="{:.2}" font-size="13" text-anchor="middle">{}</text>"#,
            y0 + 22.0,
            fmt_tick(t, sx)
        );
        t += sx;
    }
    let sy = tick_step(f.y.1 - f.y.0, 6.0);
    let mut t = (f.y.0 / sy).ceil() * sy;
    while t <= f.y.1 {
        let p = f.py(t);
        let _ = writeln!(svg, r#"<line x1="{:.2}" y1="{p:.2}" x2="{x0}" y2="{p:.2}" stroke="black"/>"#, x0 - 6.0);
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="13" text-anchor="end">{}</text>"#,
            x0 - 10.0,
            p + 4.0,
            fmt_tick(t, sy)
        );
        t += sy;
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-size="16" text-anchor="middle" font-style="italic">{xlabel}</text>"#,
        0.5 * (x0 + x1),
        HEIGHT - 20.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{:.2}" font-size="16" text-anchor="middle" font-style="italic" transform="rotate(-90 20 {:.2})">{ylabel}</text>"#,
        0.5 * (y0 + y1),
        0.5 * (y0 + y1)
    );
    let _ =
        writeln!(svg, r#"<text x="{:.2}" y="24" font-size="15" text-anchor="middle">{title}</text>"#, 0.5 * (x0 + x1));
}

fn polyline(svg: &mut String, f: &Frame, pts: &[(f64, f64)], style: &str) {
    if pts.is_empty() {
        return;
    }
    let coords: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", f.px(x), f.py(y))).collect();
    let _ = writeln!(svg, r#"<polyline points="{}" fill="none" {style}/>"#, coords.join(" "));
}

fn markers(svg: &mut String, f: &Frame, rows: &[BranchRow], xy: impl Fn(&BranchRow) -> (f64, f64)) {
    for r in rows {
        let (x, y) = xy(r);
        let (px, py) = (f.px(x), f.py(y));
        if r.verdict.is_stable() {
            let _ = writeln!(svg, r##"<circle cx="{px:.2}" cy="{py:.2}" r="3" fill="#1f5fa8" class="stable"/>"##);
        } else {
            let _ = writeln!(
                svg,
                r##"<rect x="{:.2}" y="{:.2}" width="6" height="6" fill="none" stroke="#c0392b" class="unstable"/>"##,
                px - 3.0,
                py - 3.0
            );
        }
    }
}

fn legend(svg: &mut String, extra: Option<&str>) {
    let x = MARGIN_LEFT + 15.0;
    let y = MARGIN_TOP + 20.0;
    let _ = writeln!(svg, r##"<circle cx="{x}" cy="{y}" r="3" fill="#1f5fa8"/>"##);
    let _ = writeln!(svg, r#"<text x="{}" y="{}" font-size="13">stable</text>"#, x + 10.0, y + 4.0);
    let _ = writeln!(
        svg,
        r##"<rect x="{}" y="{}" width="6" height="6" fill="none" stroke="#c0392b"/>"##,
        x - 3.0,
        y + 15.0
    );
    let _ = writeln!(svg, r#"<text x="{}" y="{}" font-size="13">unstable</text>"#, x + 10.0, y + 22.0);
    if let Some(label) = extra {
        let _ = writeln!(
            svg,
            r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#555" stroke-dasharray="6 4"/>"##,
            x - 8.0,
            y + 38.0,
            x + 6.0,
            y + 38.0
        );
        let _ = writeln!(svg, r#"<text x="{}" y="{}" font-size="13">{label}</text>"#, x + 10.0, y + 42.0);
    }
}

/// Renders the diagram of `kind` from branch rows.
pub fn render(rows: &[BranchRow], kind: PlotKind, alpha: Option<f64>) -> CliResult<String> {
    if rows.is_empty() {
        return Err(CliError::Config("cannot plot an empty branch".into()));
    }
    let xy = |r: &BranchRow| match kind {
        PlotKind::BVsC => (r.c, r.b),
        PlotKind::MuVsOmega => (r.omega, r.mu),
    };
    let pts: Vec<(f64, f64)> = rows.iter().map(xy).collect();
    let xmin = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let xmax = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let mut ymin = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let mut ymax = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let (x0, x1) = padded(xmin, xmax);
    let constant: Vec<(f64, f64)> = if kind == PlotKind::MuVsOmega {
        let n = 200;
        let c: Vec<(f64, f64)> =
            (0..=n).map(|i| x0 + (x1 - x0) * i as f64 / n as f64).filter(|w| *w > 0.0).map(|w| (w, w * w)).collect();
        for p in &c {
            ymin = ymin.min(p.1);
            ymax = ymax.max(p.1);
        }
        c
    } else {
        Vec::new()
    };
    let frame = Frame { x: (x0, x1), y: padded(ymin, ymax) };
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let title = alpha.map(|a| format!("α = {a}")).unwrap_or_default();
    match kind {
        PlotKind::BVsC => axes(&mut svg, &frame, "c", "b", &title),
        PlotKind::MuVsOmega => axes(&mut svg, &frame, "ω", "μ", &title),
    }
    let _ = writeln!(
        svg,
        r#"<clipPath id="plot"><rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{}" height="{}"/></clipPath>"#,
        WIDTH - MARGIN_LEFT - MARGIN_RIGHT,
        HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    );
    let _ = writeln!(svg, r#"<g clip-path="url(#plot)">"#);
    polyline(&mut svg, &frame, &constant, r##"stroke="#555" stroke-dasharray="6 4" class="constant""##);
    polyline(&mut svg, &frame, &pts, r##"stroke="#1f5fa8" stroke-width="1.5" class="branch""##);
    markers(&mut svg, &frame, rows, xy);
    let _ = writeln!(svg, "</g>");
    legend(&mut svg, (kind == PlotKind::MuVsOmega).then_some("μ = ω²"));
    let _ = writeln!(svg, "</svg>");
    Ok(svg)
}

/// Reads a branch CSV and writes the SVG of `kind` next to it, returning the SVG path.
pub fn emit_plot(csv_path: &Path, kind: PlotKind) -> CliResult<std::path::PathBuf> {
    let rows = read_csv(csv_path)?;
    let svg = render(&rows, kind, None)?;
    let out = csv_path.parent().unwrap_or(Path::new(".")).join(kind.file_name());
    std::fs::write(&out, svg).map_err(io_err(&out))?;
    Ok(out)
}
