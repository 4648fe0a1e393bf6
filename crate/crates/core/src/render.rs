//! Top-down plan drawing of a scene as SVG 1.1.
//!
//! One meter is ten user units. North is up. Output depends only on the
//! inputs, so equal scenes render to identical bytes.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::catalog::{Catalog, Category, Glyph};
use crate::geometry::{Polygon, Vec2};
use crate::metrics::{default_sun_samples, scene_shadows, MetricError, SunSample};
use crate::scene::{entry_footprint, ElementInstance, Scene};

/// User units per meter.
pub const UNITS_PER_METER: f64 = 10.0;
const MARGIN: f64 = 20.0;
const FOOTER: f64 = 60.0;
const LEGEND_WIDTH: f64 = 220.0;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RenderOptions {
    pub show_shadows: bool,
    /// Sun used for shadows; the default noon sample when absent.
    pub sun: Option<SunSample>,
    pub legend: bool,
}

fn num(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".to_string()
    } else {
        s
    }
}

struct Canvas {
    depth: f64,
    out: String,
}

impl Canvas {
    fn x(&self, v: f64) -> String {
        num(v * UNITS_PER_METER)
    }

    fn y(&self, v: f64) -> String {
        num((self.depth - v) * UNITS_PER_METER)
    }

    fn points(&self, poly: &Polygon) -> String {
        poly.vertices
            .iter()
            .map(|v| format!("{},{}", self.x(v.x), self.y(v.y)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Renders the plan. Instances whose entry is not in the catalog are
/// skipped; validate the scene first if that matters.
pub fn render_plan(
    scene: &Scene,
    catalog: &Catalog,
    options: &RenderOptions,
) -> Result<String, MetricError> {
    let w = scene.lot.width();
    let d = scene.lot.depth();
    let legend_w = if options.legend { LEGEND_WIDTH } else { 0.0 };
    let vb_w = w * UNITS_PER_METER + 2.0 * MARGIN + legend_w;
    let vb_h = d * UNITS_PER_METER + 2.0 * MARGIN + FOOTER;
    let mut c = Canvas {
        depth: d,
        out: String::new(),
    };

    let _ = writeln!(c.out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        c.out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {} {}" width="{}" height="{}">"#,
        num(-MARGIN),
        num(-MARGIN),
        num(vb_w),
        num(vb_h),
        num(vb_w),
        num(vb_h)
    );
    let _ = writeln!(
        c.out,
        r##"<rect class="lot" x="0.00" y="0.00" width="{}" height="{}" fill="#f4f1ea" stroke="#333333" stroke-width="2"/>"##,
        num(w * UNITS_PER_METER),
        num(d * UNITS_PER_METER)
    );

    let mut instances: Vec<&ElementInstance> = scene.instances.iter().collect();
    instances.sort_by(|a, b| a.instance_id.cmp(&b.instance_id));

    if options.show_shadows {
        let sun = options.sun.unwrap_or_else(|| default_sun_samples()[0]);
        let mut ordered = scene.clone();
        ordered.instances = instances.iter().map(|i| (*i).clone()).collect();
        ordered
            .instances
            .retain(|i| catalog.entry(&i.entry_id).is_some());
        for poly in scene_shadows(&ordered, catalog, &sun)? {
            let _ = writeln!(
                c.out,
                r##"<polygon class="shadow" points="{}" fill="#000000" fill-opacity="0.25"/>"##,
                c.points(&poly)
            );
        }
    }

    let mut present = BTreeSet::new();
    for inst in &instances {
        let Some(entry) = catalog.entry(&inst.entry_id) else {
            continue;
        };
        present.insert(entry.category);
        let style = entry.category.style();
        let scale = inst.pose.scale();
        let pos = inst.pose.position();
        let attrs = format!(
            r#"data-id="{}" data-entry="{}" fill="{}" stroke="{}""#,
            escape(inst.instance_id.as_str()),
            escape(inst.entry_id.as_str()),
            style.fill,
            style.stroke
        );
        match style.glyph {
            Glyph::Canopy if entry.canopy_radius > 0.0 => {
                let _ = writeln!(
                    c.out,
                    r#"<circle class="canopy" cx="{}" cy="{}" r="{}" {attrs} fill-opacity="0.8"/>"#,
                    c.x(pos.x),
                    c.y(pos.y),
                    num(entry.canopy_radius * scale * UNITS_PER_METER)
                );
            }
            Glyph::Marker => {
                if entry.light_radius > 0.0 {
                    let _ = writeln!(
                        c.out,
                        r#"<circle class="light-pool" cx="{}" cy="{}" r="{}" fill="none" stroke="{}" stroke-dasharray="6 4"/>"#,
                        c.x(pos.x),
                        c.y(pos.y),
                        num(entry.light_radius * scale * UNITS_PER_METER),
                        style.stroke
                    );
                }
                let _ = writeln!(
                    c.out,
                    r#"<circle class="marker" cx="{}" cy="{}" r="{}" {attrs}/>"#,
                    c.x(pos.x),
                    c.y(pos.y),
                    num(entry.footprint_w.max(entry.footprint_d).max(0.4)
                        * scale
                        * UNITS_PER_METER
                        / 2.0)
                );
            }
            _ => {
                let fp = entry_footprint(entry.footprint_w, entry.footprint_d, &inst.pose);
                let _ = writeln!(
                    c.out,
                    r#"<polygon class="footprint" points="{}" {attrs}/>"#,
                    c.points(&fp)
                );
            }
        }
    }

    scale_bar(&mut c, w, d);
    north_arrow(&mut c, w);
    if options.legend {
        legend(&mut c, w, &present);
    }
    c.out.push_str("</svg>\n");
    Ok(c.out)
}

fn scale_bar(c: &mut Canvas, w: f64, d: f64) {
    let meters = if w >= 20.0 { 10.0 } else { 5.0 };
    let y0 = d * UNITS_PER_METER + 30.0;
    let len = meters * UNITS_PER_METER;
    let _ = writeln!(
        c.out,
        r##"<g class="scale-bar"><rect x="0.00" y="{}" width="{}" height="6.00" fill="#333333"/><text x="{}" y="{}" font-family="sans-serif" font-size="12">{} m</text></g>"##,
        num(y0),
        num(len),
        num(len + 6.0),
        num(y0 + 6.0),
        meters as u32
    );
}

fn north_arrow(c: &mut Canvas, w: f64) {
    let x = w * UNITS_PER_METER - 10.0;
    let tip = Vec2::new(x, 6.0);
    let _ = writeln!(
        c.out,
        r##"<g class="north-arrow"><polygon points="{},{} {},{} {},{}" fill="#333333"/><text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">N</text></g>"##,
        num(tip.x),
        num(tip.y),
        num(x - 6.0),
        num(tip.y + 18.0),
        num(x + 6.0),
        num(tip.y + 18.0),
        num(x),
        num(tip.y + 32.0)
    );
}

fn legend(c: &mut Canvas, w: f64, present: &BTreeSet<Category>) {
    let x0 = w * UNITS_PER_METER + 20.0;
    let _ = write!(c.out, r#"<g class="legend">"#);
    for (k, cat) in present.iter().enumerate() {
        let style = cat.style();
        let y = 10.0 + 22.0 * k as f64;
        let _ = write!(
            c.out,
            r#"<rect x="{}" y="{}" width="14.00" height="14.00" fill="{}" stroke="{}"/><text x="{}" y="{}" font-family="sans-serif" font-size="12">{}</text>"#,
            num(x0),
            num(y),
            style.fill,
            style.stroke,
            num(x0 + 20.0),
            num(y + 12.0),
            cat.id()
        );
    }
    c.out.push_str("</g>\n");
}
