//! Deterministic SVG rendering of a fan: lattice dots over the bounding box
//! of the ray tips with margin one, and one arrow per primitive ray
//! generator. Pure integer coordinates at a fixed unit; paths only.

use std::fmt::Write;

use fanfold::fan::Fan2D;

const UNIT: i64 = 40;
const DOT_RADIUS: i64 = 3;

pub fn render(fan: &Fan2D) -> String {
    let rays = fan.rays();
    let min_x = rays.iter().map(|r| r.x).min().unwrap().min(0) - 1;
    let max_x = rays.iter().map(|r| r.x).max().unwrap().max(0) + 1;
    let min_y = rays.iter().map(|r| r.y).min().unwrap().min(0) - 1;
    let max_y = rays.iter().map(|r| r.y).max().unwrap().max(0) + 1;
    let width = (max_x - min_x) * UNIT + 2 * UNIT;
    let height = (max_y - min_y) * UNIT + 2 * UNIT;
    // Lattice (x, y) to SVG: shift by the margin, flip the y axis.
    let sx = |x: i64| (x - min_x + 1) * UNIT;
    let sy = |y: i64| (max_y - y + 1) * UNIT;

    let mut out = String::new();
    let _ = write!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width} {height}">"#
    );
    out.push('\n');
    for y in min_y..=max_y {
        for x in min_x..=max_x {
            let _ = write!(
                out,
                r#"<circle cx="{}" cy="{}" r="{DOT_RADIUS}" fill="#666"/>"#,
                sx(x),
                sy(y)
            );
            out.push('\n');
        }
    }
    let (ox, oy) = (sx(0), sy(0));
    for r in rays {
        let (tx, ty) = (sx(r.x), sy(r.y));
        let _ = write!(
            out,
            r#"<path class="ray" d="M {ox} {oy} L {tx} {ty}" stroke="#000" stroke-width="2" fill="none"/>"#
        );
        out.push('\n');
        // Arrowhead: an integer V from the tip, scaled off the dominant
        // coordinate of the direction.
        let q = r.x.abs().max(r.y.abs());
        let (dx, dy) = (r.x * 12 / q, -r.y * 12 / q); // SVG y grows downward
        let (px, py) = (-dy, dx);
        let _ = write!(
            out,
            r#"<path class="head" d="M {} {} L {tx} {ty} L {} {}" stroke="#000" stroke-width="2" fill="none"/>"#,
            tx - dx + px / 3,
            ty - dy + py / 3,
            tx - dx - px / 3,
            ty - dy - py / 3
        );
        out.push('\n');
    }
    out.push_str("</svg>\n");
    out
}
