//! SVG rendering of curves on the flattened surface.
//!
//! The eight pentagonal faces are drawn on a fixed 4x2 grid (the layout is
//! static data; rendering never recomputes it). Every edge of the complex
//! appears on two pentagons; matching labels and direction ticks encode the
//! identification. Sides are colored by the named curve they belong to, and
//! the input curve is drawn as black chords through the faces, placed by its
//! derived strand order along each edge.

use std::fmt::Write as _;

use goeritz_core::curve::{self, TransversePath};
use goeritz_core::surface::{CurveName, SurfaceModel, EDGE_NAMES};

const RADIUS: f64 = 95.0;
const CELL: f64 = 235.0;
const MARGIN: f64 = 130.0;

/// Grid slots of the eight faces; committed layout.
const FACE_GRID: [(usize, usize); 8] = [
    (0, 0),
    (1, 0),
    (2, 0),
    (3, 0),
    (0, 1),
    (1, 1),
    (2, 1),
    (3, 1),
];

fn curve_color(name: CurveName) -> &'static str {
    match name {
        CurveName::A => "#c0392b",
        CurveName::B => "#27ae60",
        CurveName::C => "#2980b9",
        CurveName::X => "#e67e22",
        CurveName::Y => "#8e44ad",
        CurveName::Z => "#16a085",
        CurveName::P => "#555555",
    }
}

fn face_center(f: usize) -> (f64, f64) {
    let (gx, gy) = FACE_GRID[f];
    (
        MARGIN + gx as f64 * CELL,
        MARGIN + gy as f64 * CELL,
    )
}

/// Corner `k` of the pentagon for face `f`.
fn corner(f: usize, k: usize) -> (f64, f64) {
    let (cx, cy) = face_center(f);
    let angle = -std::f64::consts::FRAC_PI_2 + (k as f64) * 2.0 * std::f64::consts::PI / 5.0;
    (cx + RADIUS * angle.cos(), cy + RADIUS * angle.sin())
}

/// Point at parameter `t` along side `slot` of face `f` (in the boundary
/// direction of that slot).
fn side_point(f: usize, slot: usize, t: f64) -> (f64, f64) {
    let (x0, y0) = corner(f, slot);
    let (x1, y1) = corner(f, (slot + 1) % 5);
    (x0 + (x1 - x0) * t, y0 + (y1 - y0) * t)
}

pub fn render_svg(
    model: &SurfaceModel,
    path: &TransversePath,
) -> Result<String, goeritz_core::CurveError> {
    let orders = curve::strand_orders(model, path)?;
    let mut pos_on_edge = vec![0usize; path.len()];
    for per_edge in &orders {
        for (rank, &idx) in per_edge.iter().enumerate() {
            pos_on_edge[idx] = rank;
        }
    }
    let count_on_edge = |e: usize| orders[e].len();

    let width = MARGIN * 2.0 + 3.0 * CELL;
    let height = MARGIN * 2.0 + CELL;
    let mut svg = String::new();
    writeln!(
        svg,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="monospace" font-size="11">
<rect width="{w}" height="{h}" fill="white"/>"#,
        w = width,
        h = height
    )
    .unwrap();

    // Faces: colored sides with labels and direction ticks.
    for (f, cycle) in model.faces.iter().enumerate() {
        let (cx, cy) = face_center(f);
        writeln!(
            svg,
            r#"<text x="{}" y="{}" text-anchor="middle" fill="#999">face {}</text>"#,
            cx, cy, f
        )
        .unwrap();
        for (slot, &d) in cycle.iter().enumerate() {
            let name = model.edge_curve[d.edge()];
            let color = curve_color(name);
            let (x0, y0) = side_point(f, slot, 0.0);
            let (x1, y1) = side_point(f, slot, 1.0);
            writeln!(
                svg,
                r#"<line x1="{x0:.1}" y1="{y0:.1}" x2="{x1:.1}" y2="{y1:.1}" stroke="{color}" stroke-width="2"/>"#
            )
            .unwrap();
            // Direction tick: a small arrowhead at 70% along the slot,
            // pointing with the edge's forward direction.
            let t_head = if d.is_forward() { 0.7 } else { 0.3 };
            let sgn = if d.is_forward() { 1.0 } else { -1.0 };
            let (hx, hy) = side_point(f, slot, t_head);
            let (dx, dy) = (x1 - x0, y1 - y0);
            let len = (dx * dx + dy * dy).sqrt();
            let (ux, uy) = (sgn * dx / len, sgn * dy / len);
            let (nx, ny) = (-uy, ux);
            writeln!(
                svg,
                r#"<path d="M {:.1} {:.1} L {:.1} {:.1} L {:.1} {:.1}" fill="{color}"/>"#,
                hx + 6.0 * ux,
                hy + 6.0 * uy,
                hx - 4.0 * ux + 4.0 * nx,
                hy - 4.0 * uy + 4.0 * ny,
                hx - 4.0 * ux - 4.0 * nx,
                hy - 4.0 * uy - 4.0 * ny
            )
            .unwrap();
            let (lx, ly) = side_point(f, slot, 0.5);
            let (ox, oy) = ((lx - cx) * 0.18, (ly - cy) * 0.18);
            writeln!(
                svg,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" fill="{color}">{}</text>"#,
                lx + ox,
                ly + oy,
                EDGE_NAMES[d.edge()]
            )
            .unwrap();
        }
    }

    // Input curve: one chord per consecutive crossing pair.
    let n = path.len();
    for i in 0..n {
        let d = path.crossings()[i];
        let d_next = path.crossings()[(i + 1) % n];
        let f = model.right(d);
        // Entry point: this crossing on the slot of rev(d); exit: next
        // crossing on its own slot.
        let entry_slot = model.slot_in_left_face[d.rev().index()];
        let exit_slot = model.slot_in_left_face[d_next.index()];
        // A boundary slot is traversed in its own directed edge's direction;
        // crossing positions along the underlying edge flip accordingly.
        let place = |slot: usize, slot_dir: goeritz_core::surface::Dir, idx: usize| {
            let e = slot_dir.edge();
            let k = count_on_edge(e);
            let t_fwd = (pos_on_edge[idx] + 1) as f64 / (k + 1) as f64;
            let t = if slot_dir.is_forward() { t_fwd } else { 1.0 - t_fwd };
            side_point(f, slot, t)
        };
        let (x0, y0) = place(entry_slot, d.rev(), i);
        let (x1, y1) = place(exit_slot, d_next, (i + 1) % n);
        let (cx, cy) = face_center(f);
        // Bend the chord toward the face center.
        let (mx, my) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
        let (qx, qy) = (mx + (cx - mx) * 0.35, my + (cy - my) * 0.35);
        writeln!(
            svg,
            r#"<path d="M {x0:.1} {y0:.1} Q {qx:.1} {qy:.1} {x1:.1} {y1:.1}" fill="none" stroke="black" stroke-width="1.6"/>"#
        )
        .unwrap();
    }

    // Legend.
    let mut lx = MARGIN * 0.4;
    for name in CurveName::ALL {
        writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" fill="{}">{}</text>"#,
            lx,
            height - 18.0,
            curve_color(name),
            name.letter()
        )
        .unwrap();
        lx += 24.0;
    }
    writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" fill="black">input curve ({} crossings)</text>"#,
        lx,
        height - 18.0,
        n
    )
    .unwrap();
    svg.push_str("</svg>\n");
    Ok(svg)
}
