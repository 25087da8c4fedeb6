//! Hand-written SVG for type-set regions in `(1/p, α/p)` coordinates.

use std::fmt::Write as _;

use crate::typeset::TypeSetRegion;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 520.0;
const MARGIN: f64 = 60.0;

#[derive(Debug, Clone, Default)]
pub struct SvgOptions {
    pub title: String,
    /// Text placed verbatim in a leading XML comment (config echo).
    pub comment: String,
    pub zoom_inset: bool,
}

/// Affine map from a data window onto a pixel box.
#[derive(Clone, Copy)]
struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    left: f64,
    top: f64,
    w: f64,
    h: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        self.left + (x - self.x0) / (self.x1 - self.x0) * self.w
    }

    fn py(&self, y: f64) -> f64 {
        self.top + (self.y1 - y) / (self.y1 - self.y0) * self.h
    }

    fn points(&self, pts: &[(f64, f64)]) -> String {
        pts.iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", self.px(x), self.py(y)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace("--", "- -")
}

fn region_polygon(region: &TypeSetRegion) -> Vec<(f64, f64)> {
    let mut b = region.boundary.clone();
    b.sort_by(|a, c| a.inv_p.total_cmp(&c.inv_p));
    let mut pts: Vec<(f64, f64)> = b.iter().map(|p| (p.inv_p, p.upper)).collect();
    pts.extend(b.iter().rev().map(|p| (p.inv_p, p.lower)));
    pts
}

fn trapezoid(region: &TypeSetRegion) -> Vec<(f64, f64)> {
    let dm1 = (region.d - 1) as f64;
    let xb = 1.0 / region.p_beta;
    vec![(0.0, 0.0), (0.0, dm1), (xb, 0.0), (xb, -dm1 * xb)]
}

fn draw_panel(out: &mut String, region: &TypeSetRegion, f: &Frame, detailed: bool) {
    let trap = trapezoid(region);
    let _ = writeln!(
        out,
        r##"<polygon points="{}" fill="none" stroke="#555" stroke-dasharray="5,3"/>"##,
        f.points(&[trap[0], trap[1], trap[2], trap[3]])
    );
    let _ = writeln!(
        out,
        r##"<polygon points="{}" fill="#4a7fbf" fill-opacity="0.45" stroke="#1f3f73" stroke-width="1.2"/>"##,
        f.points(&region_polygon(region))
    );
    let xb = 1.0 / region.p_beta;
    let xg = 1.0 / region.p_gamma;
    for (x, label, color) in [(xb, "1/p_β", "#b03030"), (xg, "1/p_γ", "#2e8b57")] {
        if x < f.x0 || x > f.x1 {
            continue;
        }
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-dasharray="2,2"/>"#,
            f.px(x),
            f.top,
            f.px(x),
            f.top + f.h
        );
        if detailed {
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" font-size="11" fill="{color}" text-anchor="middle">{label}</text>"#,
                f.px(x),
                f.top - 4.0
            );
        }
    }
    let _ = writeln!(
        out,
        r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        f.left, f.top, f.w, f.h
    );
}

/// Figure of the region: shaded type set, dashed necessary-condition
/// trapezoid, markers at `1/p_β` and `1/p_γ`, optional zoom inset around
/// the kink.
pub fn region_svg(region: &TypeSetRegion, opts: &SvgOptions) -> String {
    let dm1 = (region.d - 1) as f64;
    let main = Frame {
        x0: 0.0,
        x1: 1.0,
        y0: -dm1 - 0.1,
        y1: dm1 + 0.1,
        left: MARGIN,
        top: MARGIN,
        w: WIDTH - 2.0 * MARGIN,
        h: HEIGHT - 2.0 * MARGIN,
    };
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    if !opts.comment.is_empty() {
        let _ = writeln!(out, "<!-- {} -->", escape(&opts.comment));
    }
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    draw_panel(&mut out, region, &main, true);

    for k in 0..=4 {
        let x = k as f64 / 4.0;
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="middle">{x}</text>"#,
            main.px(x),
            main.top + main.h + 16.0
        );
    }
    let ticks = (2.0 * dm1) as i32;
    for k in -ticks..=ticks {
        let y = k as f64 / 2.0;
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{y}</text>"#,
            main.left - 6.0,
            main.py(y) + 4.0
        );
    }
    let _ = writeln!(
        out,
        r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#999"/>"##,
        main.left,
        main.py(0.0),
        main.left + main.w,
        main.py(0.0)
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="13" text-anchor="middle">1/p</text>"#,
        main.left + main.w / 2.0,
        HEIGHT - 18.0
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.2}" font-size="13" text-anchor="middle" transform="rotate(-90 16 {:.2})">α/p</text>"#,
        main.top + main.h / 2.0,
        main.top + main.h / 2.0
    );
    if !opts.title.is_empty() {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="24" font-size="14" text-anchor="middle">{}</text>"#,
            WIDTH / 2.0,
            escape(&opts.title)
        );
    }

    if opts.zoom_inset {
        let xb = 1.0 / region.p_beta;
        let xg = (1.0 / region.p_gamma).min(xb);
        let pad = ((xb - xg) * 0.3).max(0.04);
        let near: Vec<_> = region
            .boundary
            .iter()
            .filter(|b| b.inv_p >= xg - pad && b.inv_p <= xb + pad)
            .collect();
        if !near.is_empty() {
            let lo = near.iter().map(|b| b.lower).fold(f64::INFINITY, f64::min);
            let hi = near.iter().map(|b| b.upper).fold(f64::NEG_INFINITY, f64::max);
            let ypad = ((hi - lo) * 0.15).max(0.02);
            let inset = Frame {
                x0: xg - pad,
                x1: xb + pad,
                y0: lo - ypad,
                y1: hi + ypad,
                left: main.left + main.w * 0.06,
                top: main.top + main.h * 0.62,
                w: main.w * 0.34,
                h: main.h * 0.32,
            };
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="white"/>"#,
                inset.left, inset.top, inset.w, inset.h
            );
            let _ = writeln!(
                out,
                r#"<clipPath id="inset"><rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}"/></clipPath>"#,
                inset.left, inset.top, inset.w, inset.h
            );
            out.push_str("<g clip-path=\"url(#inset)\">\n");
            draw_panel(&mut out, region, &inset, false);
            out.push_str("</g>\n");
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
                inset.left, inset.top, inset.w, inset.h
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimension::closed_form_profile;
    use crate::typeset::{default_p_grid, region_boundary};

    #[test]
    fn svg_has_labels_markers_and_comment() {
        let p = closed_form_profile(0.5, 1.0).unwrap();
        let region = region_boundary(&p, 2, &default_p_grid(&p, 2, 40)).unwrap();
        let svg = region_svg(
            &region,
            &SvgOptions { title: "test".into(), comment: "cfg -- x".into(), zoom_inset: true },
        );
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains(">1/p</text>"));
        assert!(svg.contains(">α/p</text>"));
        assert!(svg.contains("1/p_β") && svg.contains("1/p_γ"));
        assert!(svg.contains("<!-- cfg - - x -->"));
        assert!(svg.contains("clipPath"));
    }
}
