//! Planar polygon predicates and the 2.5D prism occlusion test.
//!
//! Buildings are vertical prisms: a simple footprint polygon extruded from
//! ground level to its roof height. Visibility between two points is decided
//! by intersecting the open 3D segment with each prism. Grazing contact with
//! a prism boundary (walls, roof plane, ground plane) does not occlude.

/// Twice the signed area of a polygon (positive for counterclockwise rings).
pub(crate) fn polygon_signed_area2(pts: &[[f64; 2]]) -> f64 {
    let n = pts.len();
    let mut acc = 0.0;
    for i in 0..n {
        let [x0, y0] = pts[i];
        let [x1, y1] = pts[(i + 1) % n];
        acc += x0 * y1 - x1 * y0;
    }
    acc
}

/// Even-odd point-in-polygon test. Points exactly on an edge may land on
/// either side; callers that care about boundaries must handle them upstream.
pub(crate) fn point_in_polygon(p: [f64; 2], poly: &[[f64; 2]]) -> bool {
    let n = poly.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let [xi, yi] = poly[i];
        let [xj, yj] = poly[j];
        if (yi > p[1]) != (yj > p[1]) && p[0] < (xj - xi) * (p[1] - yi) / (yj - yi) + xi {
            inside = !inside;
        }
        j = i;
    }
    inside
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn on_segment(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> bool {
    c[0] >= a[0].min(b[0]) && c[0] <= a[0].max(b[0]) && c[1] >= a[1].min(b[1]) && c[1] <= a[1].max(b[1])
}

/// Inclusive segment intersection test (shared endpoints count).
fn segments_intersect(p1: [f64; 2], p2: [f64; 2], p3: [f64; 2], p4: [f64; 2]) -> bool {
    let d1 = orient(p3, p4, p1);
    let d2 = orient(p3, p4, p2);
    let d3 = orient(p1, p2, p3);
    let d4 = orient(p1, p2, p4);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(p3, p4, p1))
        || (d2 == 0.0 && on_segment(p3, p4, p2))
        || (d3 == 0.0 && on_segment(p1, p2, p3))
        || (d4 == 0.0 && on_segment(p1, p2, p4))
}

/// A ring is simple when no two non-adjacent edges touch and no edge is
/// degenerate.
pub(crate) fn polygon_is_simple(pts: &[[f64; 2]]) -> bool {
    let n = pts.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        let a = pts[i];
        let b = pts[(i + 1) % n];
        if a == b {
            return false;
        }
        for j in (i + 1)..n {
            // Skip the edge itself and the two edges sharing a vertex with it.
            if j == i || (j + 1) % n == i || (i + 1) % n == j {
                continue;
            }
            let c = pts[j];
            let d = pts[(j + 1) % n];
            if segments_intersect(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

/// Parameter values in (0, 1) where the projected segment `a + t*dir`
/// crosses an edge of the polygon.
fn crossing_params(a: [f64; 2], dir: [f64; 2], poly: &[[f64; 2]], out: &mut Vec<f64>) {
    let n = poly.len();
    for i in 0..n {
        let p = poly[i];
        let q = poly[(i + 1) % n];
        let e = [q[0] - p[0], q[1] - p[1]];
        let det = e[0] * dir[1] - e[1] * dir[0];
        if det.abs() < 1e-30 {
            continue; // parallel edge; interval midpoints still classify correctly
        }
        let rx = p[0] - a[0];
        let ry = p[1] - a[1];
        let t = (e[0] * ry - e[1] * rx) / det;
        let s = (dir[0] * ry - dir[1] * rx) / det;
        if t > 0.0 && t < 1.0 && (0.0..=1.0).contains(&s) {
            out.push(t);
        }
    }
}

/// True when the open segment `a`-`b` passes through the interior of the
/// prism obtained by extruding `footprint` from `z_min` to `z_max`.
pub(crate) fn prism_blocks_segment(
    footprint: &[[f64; 2]],
    z_min: f64,
    z_max: f64,
    a: [f64; 3],
    b: [f64; 3],
) -> bool {
    let dir = [b[0] - a[0], b[1] - a[1]];
    let horiz2 = dir[0] * dir[0] + dir[1] * dir[1];

    if horiz2 == 0.0 {
        // Vertical segment: a single footprint test decides.
        let lo = a[2].min(b[2]);
        let hi = a[2].max(b[2]);
        return point_in_polygon([a[0], a[1]], footprint) && lo < z_max && hi > z_min;
    }

    let mut ts = vec![0.0, 1.0];
    crossing_params([a[0], a[1]], dir, footprint, &mut ts);
    ts.sort_by(|x, y| x.partial_cmp(y).unwrap());

    for w in ts.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        if t1 - t0 <= 1e-12 {
            continue; // vertex touch or duplicate crossing; grazing does not occlude
        }
        let tm = 0.5 * (t0 + t1);
        let mid = [a[0] + tm * dir[0], a[1] + tm * dir[1]];
        if !point_in_polygon(mid, footprint) {
            continue;
        }
        let z0 = a[2] + t0 * (b[2] - a[2]);
        let z1 = a[2] + t1 * (b[2] - a[2]);
        if z0.min(z1) < z_max && z0.max(z1) > z_min {
            return true;
        }
    }
    false
}
