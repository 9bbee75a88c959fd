//! Planar polygon helpers: area, centroid, simplicity and sub-triangulation.

pub type Point = [f64; 2];

#[inline]
pub fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

#[inline]
pub fn dist(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Shoelace area, positive for counter-clockwise polygons.
pub fn signed_area(pts: &[Point]) -> f64 {
    let n = pts.len();
    let mut s = 0.0;
    for i in 0..n {
        let p = pts[i];
        let q = pts[(i + 1) % n];
        s += p[0] * q[1] - q[0] * p[1];
    }
    0.5 * s
}

/// Area centroid of a simple polygon.
pub fn centroid(pts: &[Point]) -> Point {
    let n = pts.len();
    let a = signed_area(pts);
    if a.abs() < f64::MIN_POSITIVE {
        let inv = 1.0 / n as f64;
        return [
            pts.iter().map(|p| p[0]).sum::<f64>() * inv,
            pts.iter().map(|p| p[1]).sum::<f64>() * inv,
        ];
    }
    // shift to the first vertex to limit cancellation
    let o = pts[0];
    let (mut cx, mut cy) = (0.0, 0.0);
    for i in 0..n {
        let p = [pts[i][0] - o[0], pts[i][1] - o[1]];
        let q = [pts[(i + 1) % n][0] - o[0], pts[(i + 1) % n][1] - o[1]];
        let w = p[0] * q[1] - q[0] * p[1];
        cx += (p[0] + q[0]) * w;
        cy += (p[1] + q[1]) * w;
    }
    [o[0] + cx / (6.0 * a), o[1] + cy / (6.0 * a)]
}

/// Largest pairwise vertex distance.
pub fn diameter(pts: &[Point]) -> f64 {
    let mut h: f64 = 0.0;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            h = h.max(dist(pts[i], pts[j]));
        }
    }
    h
}

fn on_segment(p: Point, a: Point, b: Point) -> bool {
    p[0] >= a[0].min(b[0]) && p[0] <= a[0].max(b[0]) && p[1] >= a[1].min(b[1]) && p[1] <= a[1].max(b[1])
}

/// Closed-segment intersection test (touching counts).
pub fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = cross(c, d, a);
    let d2 = cross(c, d, b);
    let d3 = cross(a, b, c);
    let d4 = cross(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(a, c, d))
        || (d2 == 0.0 && on_segment(b, c, d))
        || (d3 == 0.0 && on_segment(c, a, b))
        || (d4 == 0.0 && on_segment(d, a, b))
}

/// True when no two non-adjacent edges meet and no vertex repeats.
pub fn is_simple(pts: &[Point]) -> bool {
    let n = pts.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        for j in i + 1..n {
            if pts[i] == pts[j] {
                return false;
            }
        }
    }
    if n == 3 {
        return true;
    }
    for i in 0..n {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        for j in i + 1..n {
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let (c, d) = (pts[j], pts[(j + 1) % n]);
            if segments_intersect(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

/// Sub-triangles of a counter-clockwise simple polygon, as point triples.
///
/// A fan from the area centroid is used whenever every fan triangle has
/// positive area; otherwise the polygon is ear-clipped.
pub fn triangulate(pts: &[Point]) -> Vec<[Point; 3]> {
    let n = pts.len();
    if n == 3 {
        return vec![[pts[0], pts[1], pts[2]]];
    }
    let c = centroid(pts);
    let scale = signed_area(pts).abs();
    let fan_ok = (0..n).all(|i| cross(c, pts[i], pts[(i + 1) % n]) > 1e-12 * scale);
    if fan_ok {
        return (0..n).map(|i| [c, pts[i], pts[(i + 1) % n]]).collect();
    }
    ear_clip(pts)
}

fn point_in_triangle(p: Point, a: Point, b: Point, c: Point) -> bool {
    cross(a, b, p) >= 0.0 && cross(b, c, p) >= 0.0 && cross(c, a, p) >= 0.0
}

fn ear_clip(pts: &[Point]) -> Vec<[Point; 3]> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    let mut out = Vec::with_capacity(pts.len() - 2);
    while idx.len() > 3 {
        let m = idx.len();
        let mut clipped = false;
        for k in 0..m {
            let (ip, ic, inx) = (idx[(k + m - 1) % m], idx[k], idx[(k + 1) % m]);
            let (a, b, c) = (pts[ip], pts[ic], pts[inx]);
            if cross(a, b, c) <= 0.0 {
                continue;
            }
            let blocked = idx
                .iter()
                .any(|&j| j != ip && j != ic && j != inx && point_in_triangle(pts[j], a, b, c));
            if blocked {
                continue;
            }
            out.push([a, b, c]);
            idx.remove(k);
            clipped = true;
            break;
        }
        if !clipped {
            // only collinear chains remain; they carry no area
            let m = idx.len();
            let best = (0..m)
                .max_by(|&x, &y| {
                    let cx = cross(pts[idx[(x + m - 1) % m]], pts[idx[x]], pts[idx[(x + 1) % m]]);
                    let cy = cross(pts[idx[(y + m - 1) % m]], pts[idx[y]], pts[idx[(y + 1) % m]]);
                    cx.total_cmp(&cy)
                })
                .unwrap();
            let t = [pts[idx[(best + m - 1) % m]], pts[idx[best]], pts[idx[(best + 1) % m]]];
            if cross(t[0], t[1], t[2]) > 0.0 {
                out.push(t);
            }
            idx.remove(best);
        }
    }
    let t = [pts[idx[0]], pts[idx[1]], pts[idx[2]]];
    if cross(t[0], t[1], t[2]) > 0.0 {
        out.push(t);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_area_and_centroid() {
        let sq = [[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [0.0, 1.0]];
        assert_eq!(signed_area(&sq), 2.0);
        assert_eq!(centroid(&sq), [1.0, 0.5]);
        assert!((diameter(&sq) - 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn bowtie_is_not_simple() {
        let bow = [[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]];
        assert!(!is_simple(&bow));
    }

    #[test]
    fn nonconvex_polygon_is_ear_clipped_with_full_area() {
        // U shape: centroid lies outside the polygon
        let u = [
            [0.0, 0.0],
            [3.0, 0.0],
            [3.0, 3.0],
            [2.0, 3.0],
            [2.0, 1.0],
            [1.0, 1.0],
            [1.0, 3.0],
            [0.0, 3.0],
        ];
        assert!(is_simple(&u));
        let tris = triangulate(&u);
        let total: f64 = tris.iter().map(|t| 0.5 * cross(t[0], t[1], t[2])).sum();
        assert!((total - signed_area(&u)).abs() < 1e-13);
        assert!(tris.iter().all(|t| cross(t[0], t[1], t[2]) > 0.0));
    }

    #[test]
    fn collinear_vertices_keep_fan() {
        let p = [[0.0, 0.0], [0.5, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let tris = triangulate(&p);
        assert_eq!(tris.len(), 5);
    }
}
