//! Planar geometry primitives on the periodic rectangle.

use super::Point;

/// Minimum-image displacement along a periodic axis of length `period`.
#[inline]
pub fn wrap_delta(d: f64, period: f64) -> f64 {
    d - period * (d / period).round()
}

/// Wraps a coordinate into `[0, period)`.
#[inline]
pub fn wrap_coord(x: f64, period: f64) -> f64 {
    let w = x.rem_euclid(period);
    // rem_euclid can return `period` itself for tiny negative inputs
    if w >= period {
        0.0
    } else {
        w
    }
}

#[inline]
pub fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn add(a: Point, b: Point) -> Point {
    [a[0] + b[0], a[1] + b[1]]
}

#[inline]
pub fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn cross(a: Point, b: Point) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

#[inline]
pub fn norm(a: Point) -> f64 {
    a[0].hypot(a[1])
}

/// Signed area of triangle `abc` (positive when counter-clockwise).
#[inline]
pub fn signed_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * cross(sub(b, a), sub(c, a))
}

pub fn circumcenter(a: Point, b: Point, c: Point) -> Point {
    // work relative to `a` to limit cancellation
    let b = sub(b, a);
    let c = sub(c, a);
    let d = 2.0 * cross(b, c);
    let b2 = dot(b, b);
    let c2 = dot(c, c);
    let ux = (c[1] * b2 - b[1] * c2) / d;
    let uy = (b[0] * c2 - c[0] * b2) / d;
    [a[0] + ux, a[1] + uy]
}

/// Shoelace area of a simple polygon (positive when counter-clockwise).
pub fn polygon_area(poly: &[Point]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    let mut s = 0.0;
    for k in 0..n {
        s += cross(poly[k], poly[(k + 1) % n]);
    }
    0.5 * s
}

/// Sutherland–Hodgman clipping of `subject` against a convex,
/// counter-clockwise `clip` polygon.
pub fn clip_polygon(subject: &[Point], clip: &[Point]) -> Vec<Point> {
    let mut output: Vec<Point> = subject.to_vec();
    let m = clip.len();
    for k in 0..m {
        if output.is_empty() {
            break;
        }
        let a = clip[k];
        let b = clip[(k + 1) % m];
        let edge = sub(b, a);
        let inside = |p: Point| cross(edge, sub(p, a)) >= 0.0;
        let input = std::mem::take(&mut output);
        let n = input.len();
        for idx in 0..n {
            let cur = input[idx];
            let prev = input[(idx + n - 1) % n];
            let cur_in = inside(cur);
            let prev_in = inside(prev);
            if cur_in {
                if !prev_in {
                    output.push(intersect(prev, cur, a, b));
                }
                output.push(cur);
            } else if prev_in {
                output.push(intersect(prev, cur, a, b));
            }
        }
    }
    output
}

fn intersect(p: Point, q: Point, a: Point, b: Point) -> Point {
    let r = sub(q, p);
    let s = sub(b, a);
    let denom = cross(r, s);
    let t = cross(sub(a, p), s) / denom;
    [p[0] + t * r[0], p[1] + t * r[1]]
}
