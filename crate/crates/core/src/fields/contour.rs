//! Marching squares with linear interpolation along cell edges; segments are
//! joined into polylines through the grid edges they share.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::Serialize;

use super::ScalarField;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Polyline {
    pub points: Vec<(f64, f64)>,
    pub closed: bool,
}

impl Polyline {
    /// Ray casting; always false for open curves.
    pub fn contains(&self, z: Complex64) -> bool {
        if !self.closed {
            return false;
        }
        let mut inside = false;
        let n = self.points.len();
        for i in 0..n {
            let (x1, y1) = self.points[i];
            let (x2, y2) = self.points[(i + 1) % n];
            if (y1 > z.im) != (y2 > z.im) && z.re < x1 + (z.im - y1) * (x2 - x1) / (y2 - y1) {
                inside = !inside;
            }
        }
        inside
    }

    /// Enclosed area by the shoelace formula (zero for open curves).
    pub fn area(&self) -> f64 {
        if !self.closed {
            return 0.0;
        }
        let n = self.points.len();
        let twice: f64 = (0..n)
            .map(|i| {
                let (x1, y1) = self.points[i];
                let (x2, y2) = self.points[(i + 1) % n];
                x1 * y2 - x2 * y1
            })
            .sum();
        0.5 * twice.abs()
    }

    pub fn centroid(&self) -> Complex64 {
        let n = self.points.len().max(1) as f64;
        let (sx, sy) = self.points.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
        Complex64::new(sx / n, sy / n)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContourLevel {
    pub level: f64,
    pub polylines: Vec<Polyline>,
}

impl ContourLevel {
    pub fn closed(&self) -> impl Iterator<Item = &Polyline> {
        self.polylines.iter().filter(|p| p.closed)
    }

    /// True when some closed curve at this level surrounds `z`.
    pub fn encloses(&self, z: Complex64) -> bool {
        self.closed().any(|p| p.contains(z))
    }
}

/// Level curves of `f` at each of `levels`. A level outside the range of the
/// field gives an empty set. Cells touching an invalid node are skipped.
pub fn contour_extract(f: &ScalarField, levels: &[f64]) -> Vec<ContourLevel> {
    levels
        .iter()
        .map(|&level| ContourLevel {
            level,
            polylines: trace_level(f, level),
        })
        .collect()
}

fn trace_level(f: &ScalarField, level: f64) -> Vec<Polyline> {
    let g = &f.spec;
    let (nx, ny) = (g.nx, g.ny);
    if nx < 2 || ny < 2 {
        return Vec::new();
    }
    let h_edge = |ix: usize, iy: usize| 2 * (iy * nx + ix);
    let v_edge = |ix: usize, iy: usize| 2 * (iy * nx + ix) + 1;
    let mut points: HashMap<usize, (f64, f64)> = HashMap::new();
    let mut segments: Vec<[usize; 2]> = Vec::new();

    let crossing = |va: f64, vb: f64, a: (f64, f64), b: (f64, f64)| {
        let t = (level - va) / (vb - va);
        (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1))
    };

    for iy in 0..ny - 1 {
        for ix in 0..nx - 1 {
            let v = [
                f.value(ix, iy),
                f.value(ix + 1, iy),
                f.value(ix + 1, iy + 1),
                f.value(ix, iy + 1),
            ];
            if v.iter().any(|x| !x.is_finite()) {
                continue;
            }
            let inside: Vec<bool> = v.iter().map(|&x| x < level).collect();
            let case = inside.iter().enumerate().fold(0, |acc, (i, &b)| acc | (usize::from(b) << i));
            if case == 0 || case == 15 {
                continue;
            }
            let p = [
                (g.x(ix), g.y(iy)),
                (g.x(ix + 1), g.y(iy)),
                (g.x(ix + 1), g.y(iy + 1)),
                (g.x(ix), g.y(iy + 1)),
            ];
            // bottom, right, top, left with their corner pairs
            let edges = [
                (h_edge(ix, iy), 0, 1),
                (v_edge(ix + 1, iy), 1, 2),
                (h_edge(ix, iy + 1), 3, 2),
                (v_edge(ix, iy), 0, 3),
            ];
            let mut crossed = Vec::with_capacity(4);
            for (slot, &(id, a, b)) in edges.iter().enumerate() {
                if inside[a] != inside[b] {
                    points.entry(id).or_insert_with(|| crossing(v[a], v[b], p[a], p[b]));
                    crossed.push((slot, id));
                }
            }
            if crossed.len() == 2 {
                segments.push([crossed[0].1, crossed[1].1]);
                continue;
            }
            // saddle: decide the connection from the cell average
            let center_inside = v.iter().sum::<f64>() / 4.0 < level;
            let id = |slot: usize| crossed.iter().find(|c| c.0 == slot).expect("saddle crosses all edges").1;
            let (b, r, t, l) = (id(0), id(1), id(2), id(3));
            // case 5 has corners 0 and 2 inside, case 10 corners 1 and 3
            let around_corner_1_and_3 = (case == 5) == center_inside;
            if around_corner_1_and_3 {
                segments.push([b, r]);
                segments.push([t, l]);
            } else {
                segments.push([l, b]);
                segments.push([r, t]);
            }
        }
    }
    chain(&segments, &points)
}

fn chain(segments: &[[usize; 2]], points: &HashMap<usize, (f64, f64)>) -> Vec<Polyline> {
    let mut at_edge: HashMap<usize, Vec<usize>> = HashMap::new();
    for (s, seg) in segments.iter().enumerate() {
        for &e in seg {
            at_edge.entry(e).or_default().push(s);
        }
    }
    let mut used = vec![false; segments.len()];
    let mut out = Vec::new();
    // follow unused segments from `edge`, appending edge ids to `path`
    let walk = |mut edge: usize, path: &mut Vec<usize>, used: &mut Vec<bool>| {
        while let Some(&s) = at_edge[&edge].iter().find(|&&s| !used[s]) {
            used[s] = true;
            edge = if segments[s][0] == edge { segments[s][1] } else { segments[s][0] };
            path.push(edge);
        }
    };
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let [a, b] = segments[start];
        let mut forward = vec![a, b];
        walk(b, &mut forward, &mut used);
        let closed = forward.len() > 2 && forward.last() == forward.first();
        if closed {
            forward.pop();
        } else {
            let mut backward = Vec::new();
            walk(a, &mut backward, &mut used);
            backward.reverse();
            backward.extend(forward);
            forward = backward;
        }
        out.push(Polyline {
            points: forward.iter().map(|e| points[e]).collect(),
            closed,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{FieldKind, GridSpec};

    fn synthetic(g: GridSpec, f: impl Fn(Complex64) -> f64) -> ScalarField {
        ScalarField {
            spec: g,
            kind: FieldKind::Pseudospectrum,
            k: 0,
            values: (0..g.len()).map(|i| f(g.node(i))).collect(),
            invalid: Vec::new(),
        }
    }

    #[test]
    fn constant_field_has_no_contours() {
        let g = GridSpec::new((-1.0, 1.0), (-1.0, 1.0), 10, 10).unwrap();
        let c = contour_extract(&synthetic(g, |_| 0.5), &[1.0]);
        assert!(c[0].polylines.is_empty());
    }

    #[test]
    fn modulus_level_one_is_the_unit_circle() {
        let g = GridSpec::new((-2.0, 2.0), (-2.0, 2.0), 81, 81).unwrap();
        let c = contour_extract(&synthetic(g, |z| z.norm()), &[1.0]);
        assert_eq!(c[0].polylines.len(), 1);
        let p = &c[0].polylines[0];
        assert!(p.closed);
        for &(x, y) in &p.points {
            assert!((x.hypot(y) - 1.0).abs() < 2e-3);
        }
        assert!((p.area() - std::f64::consts::PI).abs() < 1e-2);
        assert!(c[0].encloses(Complex64::new(0.3, -0.2)));
        assert!(!c[0].encloses(Complex64::new(1.3, 0.0)));
    }

    #[test]
    fn curves_cut_by_the_boundary_stay_open() {
        let g = GridSpec::new((0.0, 2.0), (-1.0, 1.0), 41, 41).unwrap();
        let c = contour_extract(&synthetic(g, |z| z.norm()), &[1.0]);
        assert_eq!(c[0].polylines.len(), 1);
        assert!(!c[0].polylines[0].closed);
    }

    #[test]
    fn two_wells_give_two_loops_then_one() {
        let g = GridSpec::new((-2.0, 2.0), (-1.5, 1.5), 121, 91).unwrap();
        let f = synthetic(g, |z| (z - 0.8).norm().min((z + 0.8).norm()));
        let c = contour_extract(&f, &[0.5, 1.2]);
        assert_eq!(c[0].closed().count(), 2);
        assert_eq!(c[1].closed().count(), 1);
    }
}
