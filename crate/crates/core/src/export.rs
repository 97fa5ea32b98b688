//! Development export: CSV table and SVG drawing of a developed cone.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::cone::ConeDevelopment;
use crate::error::Result;
use crate::spaceform::Model;

/// One row per sample: edge id, s, r, θ, k̂·ν. The angle accumulates across
/// edges, so the last row holds 2π·Θ(Ĉ, p).
pub fn development_csv(dev: &ConeDevelopment) -> String {
    let mut out = String::from("edge,s,r,theta,khat_nu\n");
    let mut offset = 0.0;
    for e in &dev.per_edge {
        for i in 0..e.s.len() {
            let _ = writeln!(
                out,
                "{},{:.12e},{:.12e},{:.12e},{:.12e}",
                e.edge,
                e.s[i],
                e.r[i],
                offset + e.theta[i],
                e.khat_nu[i]
            );
        }
        offset += e.swept_angle();
    }
    out
}

const SIZE: f64 = 512.0;
const HALF: f64 = SIZE / 2.0;
const RADIUS: f64 = 240.0;

/// Radial coordinate of the drawing: polar for the flat model, Poincaré
/// disk for the hyperbolic one, orthographic for the sphere.
fn projected_radius(dev: &ConeDevelopment, r: f64) -> f64 {
    let c = dev.model.curv();
    match dev.model.model() {
        Model::Flat => r,
        Model::Hyperbolic => (0.5 * c * r).tanh(),
        Model::Spherical => (c * r).sin(),
    }
}

/// One polyline per edge and a marker at the apex.
pub fn development_svg(dev: &ConeDevelopment) -> String {
    let extent = match dev.model.model() {
        Model::Flat => dev
            .per_edge
            .iter()
            .flat_map(|e| e.r.iter().copied())
            .fold(0.0, f64::max),
        _ => 1.0,
    };
    let scale = if extent > 0.0 { RADIUS / extent } else { 1.0 };
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    if dev.model.model() != Model::Flat {
        let _ = writeln!(
            out,
            r##"<circle cx="{HALF}" cy="{HALF}" r="{RADIUS}" fill="none" stroke="#999999" stroke-width="0.5"/>"##
        );
    }
    let mut offset = 0.0;
    for e in &dev.per_edge {
        let pts: Vec<String> = e
            .r
            .iter()
            .zip(&e.theta)
            .map(|(&r, &t)| {
                let rho = projected_radius(dev, r) * scale;
                let a = offset + t;
                format!("{:.4},{:.4}", HALF + rho * a.cos(), HALF - rho * a.sin())
            })
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline id="{}" fill="none" stroke="black" stroke-width="1" points="{}"/>"#,
            e.edge,
            pts.join(" ")
        );
        offset += e.swept_angle();
    }
    let _ = writeln!(out, r#"<circle cx="{HALF}" cy="{HALF}" r="3" fill="red"/>"#);
    out.push_str("</svg>\n");
    out
}

/// Writes through a temporary sibling file and a rename, so a failed write
/// leaves no partial output behind.
pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.partial"));
    let result = fs::File::create(&tmp)
        .and_then(|mut f| {
            f.write_all(contents.as_bytes())?;
            f.sync_all()
        })
        .and_then(|_| fs::rename(&tmp, path));
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}
