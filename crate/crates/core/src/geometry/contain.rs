use std::f64::consts::PI;

use rand::Rng;

use crate::error::{Error, Result};
use crate::sampling;

use super::shape::ShapeSpec;

/// Axis-aligned box enclosing a region.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundingBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoundingBox {
    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(l, h)| h - l).product()
    }

    fn union(mut self, other: &BoundingBox) -> Self {
        for k in 0..self.lo.len() {
            self.lo[k] = self.lo[k].min(other.lo[k]);
            self.hi[k] = self.hi[k].max(other.hi[k]);
        }
        self
    }

    fn of_points<'a>(pts: impl Iterator<Item = &'a [f64]>) -> Self {
        let mut it = pts.peekable();
        let n = it.peek().map_or(0, |p| p.len());
        let mut bb = BoundingBox {
            lo: vec![f64::INFINITY; n],
            hi: vec![f64::NEG_INFINITY; n],
        };
        for p in it {
            for (k, &x) in p.iter().enumerate().take(n) {
                bb.lo[k] = bb.lo[k].min(x);
                bb.hi[k] = bb.hi[k].max(x);
            }
        }
        bb
    }
}

impl ShapeSpec {
    pub fn bounding_box(&self) -> BoundingBox {
        match self {
            ShapeSpec::Ball { center, radius } => BoundingBox {
                lo: center.iter().map(|c| c - radius).collect(),
                hi: center.iter().map(|c| c + radius).collect(),
            },
            ShapeSpec::Ellipsoid {
                center,
                semi_axes,
                rotation,
            } => {
                let n = center.len();
                let r = ShapeSpec::rotation_or_identity(rotation, n);
                let half: Vec<f64> = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|k| (r[i][k] * semi_axes[k]).powi(2))
                            .sum::<f64>()
                            .sqrt()
                    })
                    .collect();
                BoundingBox {
                    lo: center.iter().zip(&half).map(|(c, h)| c - h).collect(),
                    hi: center.iter().zip(&half).map(|(c, h)| c + h).collect(),
                }
            }
            ShapeSpec::Polygon { vertices } => BoundingBox::of_points(vertices.iter().map(|v| v.as_slice())),
            ShapeSpec::Polyhedron { vertices, .. } => {
                BoundingBox::of_points(vertices.iter().map(|v| v.as_slice()))
            }
            ShapeSpec::Composite { parts } => parts
                .iter()
                .filter(|p| p.sign > 0)
                .map(|p| p.shape.bounding_box())
                .reduce(|a, b| a.union(&b))
                .unwrap_or(BoundingBox {
                    lo: vec![],
                    hi: vec![],
                }),
        }
    }
}

/// Point membership. Boundary points may go either way.
pub fn contains(shape: &ShapeSpec, x: &[f64]) -> bool {
    match shape {
        ShapeSpec::Ball { center, radius } => {
            center.iter().zip(x).map(|(c, p)| (p - c).powi(2)).sum::<f64>() <= radius * radius
        }
        ShapeSpec::Ellipsoid {
            center,
            semi_axes,
            rotation,
        } => {
            let n = center.len();
            let r = ShapeSpec::rotation_or_identity(rotation, n);
            (0..n)
                .map(|k| {
                    let y: f64 = (0..n).map(|i| r[i][k] * (x[i] - center[i])).sum();
                    (y / semi_axes[k]).powi(2)
                })
                .sum::<f64>()
                <= 1.0
        }
        ShapeSpec::Polygon { vertices } => winding_number(vertices, x) != 0,
        ShapeSpec::Polyhedron { vertices, faces } => solid_angle_sum(vertices, faces, x) > 2.0 * PI,
        ShapeSpec::Composite { parts } => {
            parts
                .iter()
                .map(|p| if contains(&p.shape, x) { p.sign } else { 0 })
                .sum::<i32>()
                > 0
        }
    }
}

fn winding_number(v: &[[f64; 2]], x: &[f64]) -> i32 {
    let mut w = 0;
    for k in 0..v.len() {
        let (a, b) = (v[k], v[(k + 1) % v.len()]);
        let side = (b[0] - a[0]) * (x[1] - a[1]) - (x[0] - a[0]) * (b[1] - a[1]);
        if a[1] <= x[1] {
            if b[1] > x[1] && side > 0.0 {
                w += 1;
            }
        } else if b[1] <= x[1] && side < 0.0 {
            w -= 1;
        }
    }
    w
}

/// Total solid angle subtended by the surface at `x`: `4 pi` inside, `0` outside.
fn solid_angle_sum(v: &[[f64; 3]], faces: &[Vec<usize>], x: &[f64]) -> f64 {
    let sub = |p: &[f64; 3]| [p[0] - x[0], p[1] - x[1], p[2] - x[2]];
    let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let norm = |a: [f64; 3]| dot(a, a).sqrt();
    let mut total = 0.0;
    for face in faces {
        let a = sub(&v[face[0]]);
        for t in 1..face.len() - 1 {
            let b = sub(&v[face[t]]);
            let c = sub(&v[face[t + 1]]);
            let triple = a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
                + a[2] * (b[0] * c[1] - b[1] * c[0]);
            let (la, lb, lc) = (norm(a), norm(b), norm(c));
            let den = la * lb * lc + dot(a, b) * lc + dot(a, c) * lb + dot(b, c) * la;
            total += 2.0 * triple.atan2(den);
        }
    }
    total
}

/// `count` points drawn uniformly from the region by rejection from its
/// bounding box.
pub fn sample_inside<R: Rng + ?Sized>(shape: &ShapeSpec, count: usize, rng: &mut R) -> Result<Vec<Vec<f64>>> {
    let bb = shape.bounding_box();
    let mut out = Vec::with_capacity(count);
    let max_draws = 1000 * count.max(1) + 10_000;
    let mut draws = 0;
    while out.len() < count {
        if draws == max_draws {
            return Err(Error::DegenerateShape(
                "rejection sampling found too few interior points".into(),
            ));
        }
        draws += 1;
        let p: Vec<f64> = bb
            .lo
            .iter()
            .zip(&bb.hi)
            .map(|(l, h)| l + (h - l) * rng.random::<f64>())
            .collect();
        if contains(shape, &p) {
            out.push(p);
        }
    }
    Ok(out)
}

/// Checks `inner ⊂ outer` on `count` random points of `inner`, plus the
/// vertices of meshed parts.
pub fn sampled_containment(inner: &ShapeSpec, outer: &ShapeSpec, count: usize, seed: u64) -> Result<()> {
    let mut rng = sampling::rng(seed, 0x6e6f);
    let mut pts = sample_inside(inner, count, &mut rng)?;
    collect_vertices(inner, &mut pts);
    for p in &pts {
        if !contains(outer, p) {
            return Err(Error::Containment(format!(
                "point {p:?} of the inner region lies outside the outer region"
            )));
        }
    }
    Ok(())
}

fn collect_vertices(shape: &ShapeSpec, out: &mut Vec<Vec<f64>>) {
    match shape {
        ShapeSpec::Polygon { vertices } => out.extend(vertices.iter().map(|v| v.to_vec())),
        ShapeSpec::Polyhedron { vertices, .. } => out.extend(vertices.iter().map(|v| v.to_vec())),
        ShapeSpec::Composite { parts } => {
            for p in parts.iter().filter(|p| p.sign > 0) {
                collect_vertices(&p.shape, out);
            }
        }
        _ => {}
    }
}
