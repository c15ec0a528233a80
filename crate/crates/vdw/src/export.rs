//! Deterministic serialization of orbits: SVG figures, CSV/JSON point data,
//! and OBJ surface-of-revolution meshes.
//!
//! Identical inputs produce byte-identical output: floats are printed with
//! Rust's shortest round-trip formatting, nothing is timestamped, and all
//! iteration orders are fixed.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::levelset::OrbitResult;
use crate::potential::SystemConfig;

/// SVG viewport and styling knobs.
#[derive(Debug, Clone)]
pub struct SvgStyle {
    pub width: f64,
    pub height: f64,
    /// Fraction of the data extent left as margin on every side.
    pub margin: f64,
}

impl Default for SvgStyle {
    fn default() -> Self {
        SvgStyle {
            width: 800.0,
            height: 600.0,
            margin: 0.05,
        }
    }
}

struct Frame {
    scale: f64,
    x_off: f64,
    y_off: f64,
    height: f64,
}

impl Frame {
    /// Map data coordinates to screen space; y flips here and only here.
    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (
            self.x_off + x * self.scale,
            self.height - (self.y_off + y * self.scale),
        )
    }
}

/// Render the four-quadrant figure: each first-quadrant branch reflected
/// across both axes, particle markers at `(±l/2, 0)`, and a legend carrying
/// the level value.
pub fn to_svg(result: &OrbitResult, cfg: &SystemConfig, style: &SvgStyle) -> Vec<u8> {
    let half = cfg.separation() / 2.0;

    // Data extent over reflected branches plus the particles.
    let mut x_ext = half;
    let mut y_ext: f64 = 0.5;
    for b in &result.branches {
        for p in &b.points {
            x_ext = x_ext.max(p.x.abs());
            y_ext = y_ext.max(p.y.abs());
        }
    }
    x_ext = x_ext.max(0.5);

    let usable_w = style.width * (1.0 - 2.0 * style.margin);
    let usable_h = style.height * (1.0 - 2.0 * style.margin);
    let scale = (usable_w / (2.0 * x_ext)).min(usable_h / (2.0 * y_ext));
    let frame = Frame {
        scale,
        x_off: style.width / 2.0,
        y_off: style.height / 2.0,
        height: style.height,
    };

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        style.width, style.height, style.width, style.height
    );

    // Axes through the data origin.
    let (ax0, ay0) = frame.map(-x_ext, 0.0);
    let (ax1, ay1) = frame.map(x_ext, 0.0);
    let _ = writeln!(
        svg,
        r##"  <line x1="{ax0}" y1="{ay0}" x2="{ax1}" y2="{ay1}" stroke="#cccccc" stroke-width="1"/>"##
    );
    let (bx0, by0) = frame.map(0.0, -y_ext);
    let (bx1, by1) = frame.map(0.0, y_ext);
    let _ = writeln!(
        svg,
        r##"  <line x1="{bx0}" y1="{by0}" x2="{bx1}" y2="{by1}" stroke="#cccccc" stroke-width="1"/>"##
    );

    const REFLECTIONS: [(f64, f64); 4] = [(1.0, 1.0), (-1.0, 1.0), (1.0, -1.0), (-1.0, -1.0)];

    for branch in &result.branches {
        if branch.points.len() == 1 {
            let p = branch.points[0];
            let mut seen: Vec<(u64, u64)> = Vec::new();
            for (sx, sy) in REFLECTIONS {
                let (cx, cy) = frame.map(sx * p.x, sy * p.y);
                let key = (cx.to_bits(), cy.to_bits());
                if seen.contains(&key) {
                    continue;
                }
                seen.push(key);
                let _ = writeln!(
                    svg,
                    r##"  <circle cx="{cx}" cy="{cy}" r="3" fill="#1f77b4"/>"##
                );
            }
            continue;
        }
        for (sx, sy) in REFLECTIONS {
            let mut points = String::new();
            for p in &branch.points {
                let (cx, cy) = frame.map(sx * p.x, sy * p.y);
                if !points.is_empty() {
                    points.push(' ');
                }
                let _ = write!(points, "{cx},{cy}");
            }
            let _ = writeln!(
                svg,
                r##"  <polyline points="{points}" fill="none" stroke="#1f77b4" stroke-width="1.5"/>"##
            );
        }
    }

    for (px, py) in cfg.particles() {
        let (cx, cy) = frame.map(px, py);
        let _ = writeln!(
            svg,
            r##"  <circle cx="{cx}" cy="{cy}" r="4" fill="#d62728"/>"##
        );
    }

    let _ = writeln!(
        svg,
        r#"  <text x="10" y="20" font-family="monospace" font-size="14">l = {}, G = {}, topology = {}</text>"#,
        result.l, result.g, result.topology
    );
    let _ = writeln!(svg, "</svg>");
    svg.into_bytes()
}

/// Sweep every branch point `(x, y)` around the first axis into the vertices
/// `(x, y cos t, y sin t)` on `theta_steps` angles, stitching consecutive
/// samples and angle steps into triangulated quads. The angle seam is welded
/// by index reuse, so vertex count is exactly `points * theta_steps`.
///
/// Single-point branches become a degenerate ring: a comment plus the circle
/// of vertices, no faces.
pub fn to_mesh(result: &OrbitResult, theta_steps: usize) -> Result<Vec<u8>> {
    if theta_steps < 3 {
        return Err(Error::domain("theta_steps must be >= 3"));
    }
    let mut obj = String::new();
    let _ = writeln!(obj, "# orbit surface of revolution");
    let _ = writeln!(
        obj,
        "# l = {}, G = {}, theta_steps = {}",
        result.l, result.g, theta_steps
    );
    let _ = writeln!(obj, "o orbit");

    let mut vertex_base = 1usize; // OBJ indices are 1-based.
    for branch in &result.branches {
        let n = branch.points.len();
        if n == 0 {
            continue;
        }
        let _ = writeln!(obj, "g branch_{}", branch.id);
        if n == 1 {
            let _ = writeln!(obj, "# ring (degenerate single-point branch)");
        }
        for p in &branch.points {
            for j in 0..theta_steps {
                let theta = std::f64::consts::TAU * j as f64 / theta_steps as f64;
                let (s, c) = theta.sin_cos();
                let _ = writeln!(obj, "v {} {} {}", p.x, p.y * c, p.y * s);
            }
        }
        if n >= 2 {
            for i in 0..n - 1 {
                for j in 0..theta_steps {
                    let jn = (j + 1) % theta_steps;
                    let a = vertex_base + i * theta_steps + j;
                    let b = vertex_base + i * theta_steps + jn;
                    let c = vertex_base + (i + 1) * theta_steps + jn;
                    let d = vertex_base + (i + 1) * theta_steps + j;
                    let _ = writeln!(obj, "f {a} {b} {c}");
                    let _ = writeln!(obj, "f {a} {c} {d}");
                }
            }
        }
        vertex_base += n * theta_steps;
    }
    Ok(obj.into_bytes())
}

/// CSV: one metadata comment line, a header record, one record per point.
pub fn to_csv(result: &OrbitResult) -> Vec<u8> {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# l={} g={} topology={} provenance={:?}",
        result.l, result.g, result.topology, result.provenance
    );
    let _ = writeln!(out, "x,y,u,branch_id");
    for branch in &result.branches {
        for p in &branch.points {
            let _ = writeln!(out, "{},{},{},{}", p.x, p.y, p.u, p.branch_id);
        }
    }
    out.into_bytes()
}

/// JSON mirror of [`OrbitResult`]; `orbit_from_json` inverts it and the
/// composition is byte-identical.
pub fn to_json(result: &OrbitResult) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(result).expect("orbit serialization cannot fail");
    bytes.push(b'\n');
    bytes
}

pub fn orbit_from_json(bytes: &[u8]) -> Result<OrbitResult> {
    serde_json::from_slice(bytes).map_err(|e| Error::domain(format!("invalid orbit JSON: {e}")))
}

/// Count of `v` records in OBJ bytes (test and CLI helper).
pub fn obj_vertex_count(bytes: &[u8]) -> usize {
    bytes
        .split(|&b| b == b'\n')
        .filter(|line| line.starts_with(b"v "))
        .count()
}

/// Parse `v x y z` records back out of OBJ bytes.
pub fn obj_vertices(bytes: &[u8]) -> Vec<(f64, f64, f64)> {
    bytes
        .split(|&b| b == b'\n')
        .filter(|line| line.starts_with(b"v "))
        .filter_map(|line| {
            let text = std::str::from_utf8(line).ok()?;
            let mut it = text.split_whitespace().skip(1);
            let x = it.next()?.parse().ok()?;
            let y = it.next()?.parse().ok()?;
            let z = it.next()?.parse().ok()?;
            Some((x, y, z))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levelset::trace_orbit;
    use crate::potential::SystemConfig;

    fn cfg1() -> SystemConfig {
        SystemConfig::new(1.0).unwrap()
    }

    fn ring_orbit() -> OrbitResult {
        trace_orbit(&cfg1(), -2.0, 3.0, 200).unwrap()
    }

    #[test]
    fn svg_point_topology_markers() {
        let orbit = trace_orbit(&cfg1(), -3.0, 2.0, 801).unwrap();
        let svg = String::from_utf8(to_svg(&orbit, &cfg1(), &SvgStyle::default())).unwrap();
        // One marker plus its x-axis mirror, and the two particles.
        assert_eq!(svg.matches(r#"r="3""#).count(), 2);
        assert_eq!(svg.matches(r#"r="4""#).count(), 2);
        assert!(svg.contains("topology = Point"));
    }

    #[test]
    fn svg_empty_orbit_has_particles_and_no_curves() {
        let orbit = trace_orbit(&cfg1(), -4.0, 2.0, 100).unwrap();
        let svg = String::from_utf8(to_svg(&orbit, &cfg1(), &SvgStyle::default())).unwrap();
        assert!(!svg.contains("polyline"));
        assert_eq!(svg.matches(r#"r="4""#).count(), 2);
    }

    #[test]
    fn svg_is_deterministic() {
        let orbit = ring_orbit();
        let a = to_svg(&orbit, &cfg1(), &SvgStyle::default());
        let b = to_svg(&orbit, &cfg1(), &SvgStyle::default());
        assert_eq!(a, b);
    }

    #[test]
    fn mesh_vertex_count_and_membership() {
        let orbit = ring_orbit();
        let obj = to_mesh(&orbit, 24).unwrap();
        let vertices = obj_vertices(&obj);
        assert_eq!(vertices.len(), orbit.total_points() * 24);
        let cfg = cfg1();
        for (x, y, z) in vertices {
            let v = cfg.total_3d(x, y, z).unwrap();
            assert!(
                (v - orbit.g).abs() <= 1e-6 * orbit.g.abs().max(1.0),
                "vertex ({x},{y},{z}) residual {}",
                v - orbit.g
            );
        }
    }

    #[test]
    fn mesh_single_point_is_degenerate_ring() {
        let orbit = trace_orbit(&cfg1(), -3.0, 2.0, 801).unwrap();
        let obj = to_mesh(&orbit, 16).unwrap();
        let text = String::from_utf8(obj.clone()).unwrap();
        assert!(text.contains("# ring"));
        assert_eq!(obj_vertex_count(&obj), 16);
        assert!(!text.contains("\nf "));
        // The degenerate ring is the circle of radius sqrt(3)/2 in x = 0.
        for (x, y, z) in obj_vertices(&obj) {
            assert!(x.abs() < 1e-9);
            assert!((y.hypot(z) - 3.0f64.sqrt() / 2.0).abs() < 1e-6);
        }
    }

    #[test]
    fn mesh_rejects_too_few_steps() {
        assert!(to_mesh(&ring_orbit(), 2).is_err());
    }

    #[test]
    fn csv_shape() {
        let orbit = ring_orbit();
        let text = String::from_utf8(to_csv(&orbit)).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# l=1 g=-2 topology=TwoBranches"));
        assert_eq!(lines[1], "x,y,u,branch_id");
        assert_eq!(lines.len(), 2 + orbit.total_points());

        let empty = trace_orbit(&cfg1(), -4.0, 2.0, 100).unwrap();
        let text = String::from_utf8(to_csv(&empty)).unwrap();
        assert_eq!(text.lines().count(), 2);
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let orbit = trace_orbit(&cfg1(), 0.0, 3.0, 300).unwrap();
        let first = to_json(&orbit);
        let parsed = orbit_from_json(&first).unwrap();
        assert_eq!(parsed, orbit);
        let second = to_json(&parsed);
        assert_eq!(first, second);
    }
}
