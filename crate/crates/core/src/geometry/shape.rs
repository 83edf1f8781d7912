use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::Dim;

/// Region description. Lengths are in arbitrary user units.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShapeSpec {
    /// Disk (2D) or ball (3D).
    Ball { center: Vec<f64>, radius: f64 },
    /// `x = center + R y` with `sum (y_i / a_i)^2 <= 1`; `R` defaults to the identity.
    Ellipsoid {
        center: Vec<f64>,
        semi_axes: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rotation: Option<Vec<Vec<f64>>>,
    },
    /// Simple polygon, counterclockwise.
    Polygon { vertices: Vec<[f64; 2]> },
    /// Closed polyhedron; each face lists vertex indices counterclockwise when
    /// seen from outside.
    Polyhedron {
        vertices: Vec<[f64; 3]>,
        faces: Vec<Vec<usize>>,
    },
    /// Signed union: `+1` parts add material, `-1` parts remove it.
    Composite { parts: Vec<SignedShape> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignedShape {
    pub sign: i32,
    pub shape: ShapeSpec,
}

impl ShapeSpec {
    pub fn ball(center: &[f64], radius: f64) -> Self {
        ShapeSpec::Ball {
            center: center.to_vec(),
            radius,
        }
    }

    /// Axis-aligned rectangle (2D) or box (3D) centred at `center`.
    pub fn rectangle(center: [f64; 2], sides: [f64; 2]) -> Self {
        let (hx, hy) = (0.5 * sides[0], 0.5 * sides[1]);
        let [cx, cy] = center;
        ShapeSpec::Polygon {
            vertices: vec![
                [cx - hx, cy - hy],
                [cx + hx, cy - hy],
                [cx + hx, cy + hy],
                [cx - hx, cy + hy],
            ],
        }
    }

    pub fn cuboid(center: [f64; 3], sides: [f64; 3]) -> Self {
        let h = [0.5 * sides[0], 0.5 * sides[1], 0.5 * sides[2]];
        let mut vertices = Vec::with_capacity(8);
        for k in 0..8 {
            let s = |b: usize| if k & (1 << b) != 0 { 1.0 } else { -1.0 };
            vertices.push([
                center[0] + s(0) * h[0],
                center[1] + s(1) * h[1],
                center[2] + s(2) * h[2],
            ]);
        }
        // vertex k has bits (x, y, z)
        let faces = vec![
            vec![0, 2, 3, 1], // z-
            vec![4, 5, 7, 6], // z+
            vec![0, 1, 5, 4], // y-
            vec![2, 6, 7, 3], // y+
            vec![0, 4, 6, 2], // x-
            vec![1, 3, 7, 5], // x+
        ];
        ShapeSpec::Polyhedron { vertices, faces }
    }

    /// `outer` minus `inner`.
    pub fn difference(outer: ShapeSpec, inner: ShapeSpec) -> Self {
        ShapeSpec::Composite {
            parts: vec![
                SignedShape {
                    sign: 1,
                    shape: outer,
                },
                SignedShape {
                    sign: -1,
                    shape: inner,
                },
            ],
        }
    }

    /// True if any part is a polygon or polyhedron.
    pub fn is_meshed(&self) -> bool {
        match self {
            ShapeSpec::Polygon { .. } | ShapeSpec::Polyhedron { .. } => true,
            ShapeSpec::Composite { parts } => parts.iter().any(|p| p.shape.is_meshed()),
            _ => false,
        }
    }

    /// Spatial dimension implied by the description (not validated further).
    pub fn dim(&self) -> Result<Dim> {
        match self {
            ShapeSpec::Ball { center, .. } | ShapeSpec::Ellipsoid { center, .. } => Dim::new(center.len()),
            ShapeSpec::Polygon { .. } => Ok(Dim::Two),
            ShapeSpec::Polyhedron { .. } => Ok(Dim::Three),
            ShapeSpec::Composite { parts } => {
                let first = parts
                    .first()
                    .ok_or_else(|| Error::InvalidShape("empty composite".into()))?
                    .shape
                    .dim()?;
                for p in &parts[1..] {
                    crate::tensor::check_same(first, p.shape.dim()?)?;
                }
                Ok(first)
            }
        }
    }

    /// Homothety about the origin.
    pub fn scaled(&self, s: f64) -> Self {
        self.map_points(&|x: &[f64]| x.iter().map(|v| v * s).collect(), s)
    }

    pub fn translated(&self, d: &[f64]) -> Self {
        self.map_points(&|x: &[f64]| x.iter().zip(d).map(|(a, b)| a + b).collect(), 1.0)
    }

    fn map_points(&self, f: &dyn Fn(&[f64]) -> Vec<f64>, length_scale: f64) -> Self {
        match self {
            ShapeSpec::Ball { center, radius } => ShapeSpec::Ball {
                center: f(center),
                radius: radius * length_scale,
            },
            ShapeSpec::Ellipsoid {
                center,
                semi_axes,
                rotation,
            } => ShapeSpec::Ellipsoid {
                center: f(center),
                semi_axes: semi_axes.iter().map(|a| a * length_scale).collect(),
                rotation: rotation.clone(),
            },
            ShapeSpec::Polygon { vertices } => ShapeSpec::Polygon {
                vertices: vertices
                    .iter()
                    .map(|v| {
                        let p = f(v);
                        [p[0], p[1]]
                    })
                    .collect(),
            },
            ShapeSpec::Polyhedron { vertices, faces } => ShapeSpec::Polyhedron {
                vertices: vertices
                    .iter()
                    .map(|v| {
                        let p = f(v);
                        [p[0], p[1], p[2]]
                    })
                    .collect(),
                faces: faces.clone(),
            },
            ShapeSpec::Composite { parts } => ShapeSpec::Composite {
                parts: parts
                    .iter()
                    .map(|p| SignedShape {
                        sign: p.sign,
                        shape: p.shape.map_points(f, length_scale),
                    })
                    .collect(),
            },
        }
    }

    /// Checks the structural invariants of the description and returns its
    /// dimension. Composite containment is checked separately by sampling.
    pub fn validate(&self) -> Result<Dim> {
        let bad = |m: String| Err(Error::InvalidShape(m));
        match self {
            ShapeSpec::Ball { center, radius } => {
                let dim = Dim::new(center.len())?;
                if !(*radius > 0.0) || !radius.is_finite() {
                    return bad(format!("ball radius must be positive, got {radius}"));
                }
                finite(center)?;
                Ok(dim)
            }
            ShapeSpec::Ellipsoid {
                center,
                semi_axes,
                rotation,
            } => {
                let dim = Dim::new(center.len())?;
                let n = dim.n();
                finite(center)?;
                if semi_axes.len() != n || semi_axes.iter().any(|a| !(*a > 0.0) || !a.is_finite()) {
                    return bad(format!("ellipsoid needs {n} positive semi-axes"));
                }
                if let Some(r) = rotation {
                    check_rotation(r, n)?;
                }
                Ok(dim)
            }
            ShapeSpec::Polygon { vertices } => {
                validate_polygon(vertices)?;
                Ok(Dim::Two)
            }
            ShapeSpec::Polyhedron { vertices, faces } => {
                validate_polyhedron(vertices, faces)?;
                Ok(Dim::Three)
            }
            ShapeSpec::Composite { parts } => {
                let dim = self.dim()?;
                if !parts.iter().any(|p| p.sign == 1) {
                    return bad("composite needs at least one +1 part".into());
                }
                for p in parts {
                    if p.sign != 1 && p.sign != -1 {
                        return bad(format!("composite sign must be +1 or -1, got {}", p.sign));
                    }
                    p.shape.validate()?;
                }
                let solid = ShapeSpec::Composite {
                    parts: parts.iter().filter(|p| p.sign == 1).cloned().collect(),
                };
                for p in parts.iter().filter(|p| p.sign == -1) {
                    super::contain::sampled_containment(&p.shape, &solid, 512, 0x401e)?;
                }
                Ok(dim)
            }
        }
    }

    /// Rotation matrix of an ellipsoid (identity when absent).
    pub(crate) fn rotation_or_identity(rotation: &Option<Vec<Vec<f64>>>, n: usize) -> Vec<Vec<f64>> {
        rotation.clone().unwrap_or_else(|| {
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
                .collect()
        })
    }
}

fn finite(v: &[f64]) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidShape("non-finite coordinate".into()))
    }
}

fn check_rotation(r: &[Vec<f64>], n: usize) -> Result<()> {
    if r.len() != n || r.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidShape(format!("rotation must be {n}x{n}")));
    }
    for i in 0..n {
        for j in 0..n {
            let dot: f64 = (0..n).map(|k| r[k][i] * r[k][j]).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            if (dot - target).abs() > 1e-9 {
                return Err(Error::InvalidShape("rotation is not orthonormal".into()));
            }
        }
    }
    let det = if n == 2 {
        r[0][0] * r[1][1] - r[0][1] * r[1][0]
    } else {
        r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1]) - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
            + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
    };
    if det < 0.0 {
        return Err(Error::InvalidShape("rotation must have determinant +1".into()));
    }
    Ok(())
}

fn cross2(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn segments_intersect(p1: [f64; 2], p2: [f64; 2], q1: [f64; 2], q2: [f64; 2]) -> bool {
    let d1 = cross2(q1, q2, p1);
    let d2 = cross2(q1, q2, p2);
    let d3 = cross2(p1, p2, q1);
    let d4 = cross2(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |a: [f64; 2], b: [f64; 2], p: [f64; 2], d: f64| {
        d == 0.0
            && p[0] >= a[0].min(b[0])
            && p[0] <= a[0].max(b[0])
            && p[1] >= a[1].min(b[1])
            && p[1] <= a[1].max(b[1])
    };
    on(q1, q2, p1, d1) || on(q1, q2, p2, d2) || on(p1, p2, q1, d3) || on(p1, p2, q2, d4)
}

fn validate_polygon(v: &[[f64; 2]]) -> Result<()> {
    let m = v.len();
    if m < 3 {
        return Err(Error::InvalidShape("polygon needs at least 3 vertices".into()));
    }
    if v.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
        return Err(Error::InvalidShape("non-finite coordinate".into()));
    }
    for a in 0..m {
        for b in a + 1..m {
            // skip edges sharing a vertex
            if b == a + 1 || (a == 0 && b == m - 1) {
                continue;
            }
            if segments_intersect(v[a], v[(a + 1) % m], v[b], v[(b + 1) % m]) {
                return Err(Error::InvalidShape(format!(
                    "polygon edges {a} and {b} intersect"
                )));
            }
        }
    }
    let twice_area: f64 = (0..m)
        .map(|k| {
            let (p, q) = (v[k], v[(k + 1) % m]);
            p[0] * q[1] - q[0] * p[1]
        })
        .sum();
    if !(twice_area > 0.0) {
        return Err(Error::InvalidShape(
            "polygon must be counterclockwise with positive area".into(),
        ));
    }
    Ok(())
}

fn validate_polyhedron(v: &[[f64; 3]], faces: &[Vec<usize>]) -> Result<()> {
    use std::collections::BTreeMap;
    if v.len() < 4 || faces.len() < 4 {
        return Err(Error::InvalidShape(
            "polyhedron needs at least 4 vertices and 4 faces".into(),
        ));
    }
    if v.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::InvalidShape("non-finite coordinate".into()));
    }
    let mut edges: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (fi, face) in faces.iter().enumerate() {
        if face.len() < 3 {
            return Err(Error::InvalidShape(format!(
                "face {fi} has fewer than 3 vertices"
            )));
        }
        for (k, &a) in face.iter().enumerate() {
            let b = face[(k + 1) % face.len()];
            if a >= v.len() || b >= v.len() {
                return Err(Error::InvalidShape(format!(
                    "face {fi} references a missing vertex"
                )));
            }
            *edges.entry((a, b)).or_default() += 1;
        }
    }
    for (&(a, b), &count) in &edges {
        if count != 1 || edges.get(&(b, a)) != Some(&1) {
            return Err(Error::InvalidShape(format!(
                "faces are not consistently oriented around edge ({a},{b})"
            )));
        }
    }
    Ok(())
}
