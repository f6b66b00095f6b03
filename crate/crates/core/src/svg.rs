//! Minimal standalone SVG plots of subsets of the complex plane.

use std::fmt::Write;

use num_complex::Complex64;

use crate::grid::Region;

const MARGIN: f64 = 48.0;

/// Maps a region of the complex plane onto a canvas with equal margins, so
/// the centre of the region lands on the centre of the canvas.
#[derive(Debug, Clone, Copy)]
pub struct Viewport {
    pub region: Region,
    pub width: f64,
    pub height: f64,
}

impl Viewport {
    /// Canvas `width` wide; the height follows the aspect ratio of the region.
    pub fn new(region: Region, width: f64) -> Self {
        let plot_w = width - 2.0 * MARGIN;
        let span_re = (region.re_max - region.re_min).max(f64::MIN_POSITIVE);
        let span_im = (region.im_max - region.im_min).max(f64::MIN_POSITIVE);
        let plot_h = (plot_w * span_im / span_re).clamp(plot_w / 8.0, plot_w * 4.0);
        Self {
            region,
            width,
            height: plot_h + 2.0 * MARGIN,
        }
    }

    pub fn map(&self, z: Complex64) -> (f64, f64) {
        let r = &self.region;
        let x = MARGIN + (z.re - r.re_min) / (r.re_max - r.re_min) * (self.width - 2.0 * MARGIN);
        let y = MARGIN + (r.im_max - z.im) / (r.im_max - r.im_min) * (self.height - 2.0 * MARGIN);
        (x, y)
    }

    fn scale_x(&self, w: f64) -> f64 {
        w / (self.region.re_max - self.region.re_min) * (self.width - 2.0 * MARGIN)
    }

    fn scale_y(&self, h: f64) -> f64 {
        h / (self.region.im_max - self.region.im_min) * (self.height - 2.0 * MARGIN)
    }
}

#[derive(Debug, Clone)]
pub enum Layer {
    /// Filled axis-aligned cells of a common size, given by their centres.
    Cells {
        label: String,
        color: String,
        centers: Vec<Complex64>,
        cell_w: f64,
        cell_h: f64,
    },
    /// A polyline whose last vertex repeats the first is drawn closed.
    Polylines {
        label: String,
        color: String,
        lines: Vec<Vec<Complex64>>,
    },
    Points {
        label: String,
        color: String,
        points: Vec<Complex64>,
    },
}

impl Layer {
    fn label(&self) -> &str {
        match self {
            Layer::Cells { label, .. } | Layer::Polylines { label, .. } | Layer::Points { label, .. } => label,
        }
    }

    fn color(&self) -> &str {
        match self {
            Layer::Cells { color, .. } | Layer::Polylines { color, .. } | Layer::Points { color, .. } => color,
        }
    }
}

/// Fixed palette used for categorical layers.
pub const PALETTE: [&str; 10] = [
    "#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860", "#da8bc3", "#8c8c8c", "#ccb974", "#64b5cd",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn path_data(vp: &Viewport, line: &[Complex64]) -> Option<String> {
    let closed = line.len() > 2 && (line[0] - line[line.len() - 1]).norm() <= 1e-12;
    let verts = if closed { &line[..line.len() - 1] } else { line };
    if verts.len() < 2 {
        return None;
    }
    let mut d = String::new();
    for (k, z) in verts.iter().enumerate() {
        let (x, y) = vp.map(*z);
        let _ = write!(d, "{}{x:.2} {y:.2}", if k == 0 { "M " } else { " L " });
    }
    if closed {
        d.push_str(" Z");
    }
    Some(d)
}

/// Renders the layers in order over a frame with axes, a title and a legend.
pub fn emit_svg(title: &str, layers: &[Layer], vp: &Viewport) -> String {
    let (w, h) = (vp.width, vp.height);
    let r = vp.region;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{w:.0}" height="{h:.0}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{MARGIN:.0}" y="20" font-size="14" font-family="sans-serif">{}</text>"#, escape(title));

    let (x0, y0) = vp.map(Complex64::new(r.re_min, r.im_max));
    let (x1, y1) = vp.map(Complex64::new(r.re_max, r.im_min));
    let _ = writeln!(s, r#"<g id="axes" stroke="black" fill="none" stroke-width="1">"#);
    let _ = writeln!(s, r#"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}"/>"#, x1 - x0, y1 - y0);
    if r.re_min < 0.0 && r.re_max > 0.0 {
        let (x, _) = vp.map(Complex64::new(0.0, 0.0));
        let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{y1:.2}" stroke-dasharray="3 3"/>"#);
    }
    if r.im_min < 0.0 && r.im_max > 0.0 {
        let (_, y) = vp.map(Complex64::new(0.0, 0.0));
        let _ = writeln!(s, r#"<line x1="{x0:.2}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}" stroke-dasharray="3 3"/>"#);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g id="ticks" font-size="11" font-family="sans-serif" fill="black">"#);
    let _ = writeln!(s, r#"<text x="{x0:.2}" y="{:.2}" text-anchor="start">{:.3}</text>"#, y1 + 16.0, r.re_min);
    let _ = writeln!(s, r#"<text x="{x1:.2}" y="{:.2}" text-anchor="end">{:.3}</text>"#, y1 + 16.0, r.re_max);
    let _ = writeln!(s, r#"<text x="{:.2}" y="{y1:.2}" text-anchor="end">{:.3}</text>"#, x0 - 4.0, r.im_min);
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{:.3}</text>"#, x0 - 4.0, y0 + 10.0, r.im_max);
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">Re</text>"#, 0.5 * (x0 + x1), y1 + 30.0);
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">Im</text>"#, x0 - 30.0, 0.5 * (y0 + y1));
    let _ = writeln!(s, "</g>");

    for (idx, layer) in layers.iter().enumerate() {
        let _ = writeln!(s, r#"<g id="layer{idx}">"#);
        match layer {
            Layer::Cells {
                color,
                centers,
                cell_w,
                cell_h,
                ..
            } => {
                let (cw, ch) = (vp.scale_x(*cell_w), vp.scale_y(*cell_h));
                for z in centers {
                    let (x, y) = vp.map(*z);
                    let _ = writeln!(
                        s,
                        r#"<rect x="{:.2}" y="{:.2}" width="{cw:.2}" height="{ch:.2}" fill="{color}" fill-opacity="0.5"/>"#,
                        x - 0.5 * cw,
                        y - 0.5 * ch
                    );
                }
            }
            Layer::Polylines { color, lines, .. } => {
                for line in lines {
                    if let Some(d) = path_data(vp, line) {
                        let _ = writeln!(s, r#"<path d="{d}" fill="none" stroke="{color}" stroke-width="1.5"/>"#);
                    }
                }
            }
            Layer::Points { color, points, .. } => {
                for z in points {
                    let (x, y) = vp.map(*z);
                    let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{color}"/>"#);
                }
            }
        }
        let _ = writeln!(s, "</g>");
    }

    let _ = writeln!(s, r#"<g id="legend" font-size="11" font-family="sans-serif">"#);
    for (idx, layer) in layers.iter().enumerate() {
        let y = MARGIN + 4.0 + 16.0 * idx as f64;
        let x = w - MARGIN - 150.0;
        let _ = writeln!(
            s,
            r#"<rect x="{x:.2}" y="{y:.2}" width="10" height="10" fill="{}" stroke="black" stroke-width="0.5"/>"#,
            layer.color()
        );
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, x + 14.0, y + 9.0, escape(layer.label()));
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}
