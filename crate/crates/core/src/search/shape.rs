//! Geometric labels for certified configurations.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeClass {
    CollinearX,
    CollinearY,
    IsoscelesTriangle,
    TriangleWithInteriorPoint,
    EquilateralInIsosceles,
    Rhombus,
    Rectangle,
    SlantedRhombus,
    Other,
}

impl ShapeClass {
    pub const ALL: [ShapeClass; 9] = [
        ShapeClass::CollinearX,
        ShapeClass::CollinearY,
        ShapeClass::IsoscelesTriangle,
        ShapeClass::TriangleWithInteriorPoint,
        ShapeClass::EquilateralInIsosceles,
        ShapeClass::Rhombus,
        ShapeClass::Rectangle,
        ShapeClass::SlantedRhombus,
        ShapeClass::Other,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ShapeClass::CollinearX => "collinear-x",
            ShapeClass::CollinearY => "collinear-y",
            ShapeClass::IsoscelesTriangle => "isosceles-triangle",
            ShapeClass::TriangleWithInteriorPoint => "triangle-with-interior-point",
            ShapeClass::EquilateralInIsosceles => "equilateral-in-isosceles",
            ShapeClass::Rhombus => "rhombus",
            ShapeClass::Rectangle => "rectangle",
            ShapeClass::SlantedRhombus => "slanted-rhombus",
            ShapeClass::Other => "other",
        }
    }
}

impl fmt::Display for ShapeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

type Pt = (f64, f64);

fn dist(p: Pt, q: Pt) -> f64 {
    (p.0 - q.0).hypot(p.1 - q.1)
}

/// True if the point set is mapped onto itself by `map` (within `tol`).
fn invariant(points: &[Pt], tol: f64, map: impl Fn(Pt) -> Pt) -> bool {
    points
        .iter()
        .all(|&p| points.iter().any(|&q| dist(map(p), q) < tol))
}

/// Labels a planar configuration (already centered) by its symmetries.
pub fn classify_points(points: &[Pt], tol: f64) -> ShapeClass {
    if points.iter().all(|p| p.1.abs() < tol) {
        return ShapeClass::CollinearX;
    }
    if points.iter().all(|p| p.0.abs() < tol) {
        return ShapeClass::CollinearY;
    }
    let sym_x = invariant(points, tol, |(x, y)| (x, -y));
    let sym_y = invariant(points, tol, |(x, y)| (-x, y));
    let central = invariant(points, tol, |(x, y)| (-x, -y));
    match points.len() {
        3 => {
            let d = [
                dist(points[0], points[1]),
                dist(points[1], points[2]),
                dist(points[0], points[2]),
            ];
            let iso =
                (d[0] - d[1]).abs() < tol || (d[1] - d[2]).abs() < tol || (d[0] - d[2]).abs() < tol;
            if sym_x || sym_y || iso {
                ShapeClass::IsoscelesTriangle
            } else {
                ShapeClass::Other
            }
        }
        4 => classify_four(points, tol, sym_x, sym_y, central),
        _ => ShapeClass::Other,
    }
}

fn classify_four(points: &[Pt], tol: f64, sym_x: bool, sym_y: bool, central: bool) -> ShapeClass {
    let on_x = points.iter().filter(|p| p.1.abs() < tol).count();
    let on_y = points.iter().filter(|p| p.0.abs() < tol).count();
    if sym_x && sym_y {
        return match (on_x, on_y) {
            (2, 2) => ShapeClass::Rhombus,
            (0, 0) => ShapeClass::Rectangle,
            _ => ShapeClass::Other,
        };
    }
    if sym_x || sym_y {
        // Rotate so the symmetry axis is the first coordinate.
        let pts: Vec<Pt> = if sym_x {
            points.to_vec()
        } else {
            points.iter().map(|&(x, y)| (y, x)).collect()
        };
        let (axis, off): (Vec<Pt>, Vec<Pt>) = pts.iter().partition(|p| p.1.abs() < tol);
        if axis.len() != 2 || off.len() != 2 {
            return ShapeClass::Other;
        }
        let base = 0.5 * (off[0].0 + off[1].0);
        let half = 0.5 * (off[0].1 - off[1].1).abs();
        let inner = axis
            .iter()
            .map(|p| (p.0 - base).abs())
            .fold(f64::INFINITY, f64::min);
        // An equilateral triangle on the pair puts the inner point at
        // sqrt(3) * half from the base; a point near the base sits at ~0.
        return if inner < 0.5 * 3f64.sqrt() * half {
            ShapeClass::TriangleWithInteriorPoint
        } else {
            ShapeClass::EquilateralInIsosceles
        };
    }
    // 'Slanted' rhombus: centrally symmetric with no mirror axis. The sides
    // need not be equal, so this is really a parallelogram.
    if central {
        return ShapeClass::SlantedRhombus;
    }
    ShapeClass::Other
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-6;

    #[test]
    fn tabulated_shapes() {
        let rh = [
            (0.8517357111, 0.0),
            (-0.8517357111, 0.0),
            (0.0, 0.3392209571),
            (0.0, -0.3392209571),
        ];
        assert_eq!(classify_points(&rh, TOL), ShapeClass::Rhombus);
        let (x, y) = (0.5124981464, 0.3168767565);
        let re = [(x, y), (x, -y), (-x, y), (-x, -y)];
        assert_eq!(classify_points(&re, TOL), ShapeClass::Rectangle);
        let vy = [(0.0, 0.5699919822), (0.0, -0.5699919822), (0.0, 0.0)];
        assert_eq!(classify_points(&vy, TOL), ShapeClass::CollinearY);
        let tri = [
            (-0.6964118400, 0.0),
            (0.3482059200, 0.3466806372),
            (0.3482059200, -0.3466806372),
        ];
        assert_eq!(classify_points(&tri, TOL), ShapeClass::IsoscelesTriangle);
    }

    #[test]
    fn one_axis_families() {
        let near_base = [(-0.9, 0.0), (0.3, 0.0), (0.35, 0.4), (0.35, -0.4)];
        assert_eq!(
            classify_points(&near_base, TOL),
            ShapeClass::TriangleWithInteriorPoint
        );
        let h = 0.3;
        let equi = [
            (-1.0, 0.0),
            (0.5 - 3f64.sqrt() * h, 0.0),
            (0.5, h),
            (0.5, -h),
        ];
        assert_eq!(
            classify_points(&equi, TOL),
            ShapeClass::EquilateralInIsosceles
        );
    }

    #[test]
    fn slanted_rhombus_is_centrally_symmetric() {
        // Certified k = 4 configuration with a = 3/4, b = 9/4.
        let u = (0.8585655725, 0.0422893776);
        let v = (-0.1119747216, 0.3242535741);
        let pts = [u, (-u.0, -u.1), v, (-v.0, -v.1)];
        assert_eq!(classify_points(&pts, TOL), ShapeClass::SlantedRhombus);
        let lopsided = [u, (-u.0, -u.1), v, (0.2, -0.3)];
        assert_eq!(classify_points(&lopsided, TOL), ShapeClass::Other);
    }
}
