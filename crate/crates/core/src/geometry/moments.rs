use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::tensor::{Dim, Tensor2Sym};

use super::shape::ShapeSpec;

/// Zeroth, first and second moments of a region about the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct MassProperties {
    pub dim: Dim,
    pub volume: f64,
    /// `S_i = int x_i dV`.
    pub static_moment: Vec<f64>,
    /// `E_ij = int x_i x_j dV`.
    pub euler: Tensor2Sym,
    /// `rho^2` with `E = rho^2 V I`; set only when `E` is spherical within the
    /// default tolerance for the shape kind.
    pub rho2: Option<f64>,
}

impl MassProperties {
    fn zero(dim: Dim) -> Self {
        MassProperties {
            dim,
            volume: 0.0,
            static_moment: vec![0.0; dim.n()],
            euler: Tensor2Sym::zeros(dim),
            rho2: None,
        }
    }

    fn add_scaled(&mut self, other: &MassProperties, s: f64) {
        self.volume += s * other.volume;
        for (a, b) in self.static_moment.iter_mut().zip(&other.static_moment) {
            *a += s * b;
        }
        self.euler = self
            .euler
            .checked_add(&other.euler.scale(s))
            .expect("same dimension");
    }

    /// `E_ij / V`, the mean of `x_i x_j`.
    pub fn normalized_euler(&self) -> Tensor2Sym {
        self.euler.scale(1.0 / self.volume)
    }

    /// `tr(E) / (n V)`: the squared gyration radius when `E` is spherical.
    pub fn mean_rho2(&self) -> f64 {
        self.euler.trace() / (self.dim.n() as f64 * self.volume)
    }

    /// `|S| / V`, distance of the centroid from the origin.
    pub fn centroid_offset(&self) -> f64 {
        self.static_moment.iter().map(|s| s * s).sum::<f64>().sqrt() / self.volume
    }

    /// `|dev E| / |E|`: zero exactly when `E` is a multiple of the identity.
    pub fn anisotropy(&self) -> f64 {
        let norm = self.euler.norm();
        if norm == 0.0 {
            0.0
        } else {
            self.euler.deviator().norm() / norm
        }
    }
}

/// Exact moments of a validated shape. Fails on invalid descriptions and on
/// regions with non-positive volume.
pub fn mass_properties(shape: &ShapeSpec) -> Result<MassProperties> {
    shape.validate()?;
    let mut mp = raw_moments(shape)?;
    if !(mp.volume > 0.0) || !mp.volume.is_finite() {
        return Err(Error::DegenerateShape(format!("region volume is {}", mp.volume)));
    }
    let scale = mp.euler.norm() / mp.volume;
    if mp.volume <= 1e-14 * scale.powf(mp.dim.n() as f64 / 2.0) {
        return Err(Error::DegenerateShape("region volume is negligible".into()));
    }
    if mp.anisotropy() <= super::gp::default_tol(shape) {
        mp.rho2 = Some(mp.mean_rho2());
    }
    Ok(mp)
}

fn unit_ball_volume(dim: Dim) -> f64 {
    match dim {
        Dim::Two => PI,
        Dim::Three => 4.0 * PI / 3.0,
    }
}

fn shifted(dim: Dim, volume: f64, center: &[f64], central: Tensor2Sym) -> MassProperties {
    let euler = Tensor2Sym::from_fn(dim, |i, j| central.get(i, j) + volume * center[i] * center[j]);
    MassProperties {
        dim,
        volume,
        static_moment: center.iter().map(|c| volume * c).collect(),
        euler,
        rho2: None,
    }
}

fn raw_moments(shape: &ShapeSpec) -> Result<MassProperties> {
    let dim = shape.dim()?;
    let n = dim.n();
    let np2 = (n + 2) as f64;
    Ok(match shape {
        ShapeSpec::Ball { center, radius } => {
            let v = unit_ball_volume(dim) * radius.powi(n as i32);
            let c = v * radius * radius / np2;
            shifted(dim, v, center, Tensor2Sym::identity(dim).scale(c))
        }
        ShapeSpec::Ellipsoid {
            center,
            semi_axes,
            rotation,
        } => {
            let r = ShapeSpec::rotation_or_identity(rotation, n);
            let v = unit_ball_volume(dim) * semi_axes.iter().product::<f64>();
            let central = Tensor2Sym::from_fn(dim, |i, j| {
                (0..n)
                    .map(|k| r[i][k] * r[j][k] * semi_axes[k] * semi_axes[k])
                    .sum::<f64>()
                    * v
                    / np2
            });
            shifted(dim, v, center, central)
        }
        ShapeSpec::Polygon { vertices } => polygon_moments(vertices),
        ShapeSpec::Polyhedron { vertices, faces } => polyhedron_moments(vertices, faces),
        ShapeSpec::Composite { parts } => {
            let mut acc = MassProperties::zero(dim);
            for p in parts {
                acc.add_scaled(&raw_moments(&p.shape)?, p.sign as f64);
            }
            acc
        }
    })
}

/// Simplex with one vertex at the origin: `int x x = V/((n+1)(n+2)) [sum v v + (sum v)(sum v)]`.
fn accumulate_simplex(acc: &mut MassProperties, vol: f64, verts: &[&[f64]]) {
    let n = acc.dim.n();
    let k = verts.len() as f64 + 1.0;
    let mut sum = [0.0; 3];
    for v in verts {
        for (s, x) in sum.iter_mut().zip(&v[..n]) {
            *s += x;
        }
    }
    acc.volume += vol;
    for (m, s) in acc.static_moment.iter_mut().zip(sum) {
        *m += vol * s / k;
    }
    let w = vol / (k * (k + 1.0));
    for i in 0..n {
        for j in i..n {
            let vv: f64 = verts.iter().map(|v| v[i] * v[j]).sum();
            let e = acc.euler.get(i, j) + w * (vv + sum[i] * sum[j]);
            acc.euler.set(i, j, e);
        }
    }
}

fn polygon_moments(v: &[[f64; 2]]) -> MassProperties {
    let mut acc = MassProperties::zero(Dim::Two);
    for k in 0..v.len() {
        let (a, b) = (&v[k], &v[(k + 1) % v.len()]);
        let area = 0.5 * (a[0] * b[1] - b[0] * a[1]);
        accumulate_simplex(&mut acc, area, &[a, b]);
    }
    acc
}

fn polyhedron_moments(v: &[[f64; 3]], faces: &[Vec<usize>]) -> MassProperties {
    let mut acc = MassProperties::zero(Dim::Three);
    for face in faces {
        let a = &v[face[0]];
        for t in 1..face.len() - 1 {
            let (b, c) = (&v[face[t]], &v[face[t + 1]]);
            let det = a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
                + a[2] * (b[0] * c[1] - b[1] * c[0]);
            accumulate_simplex(&mut acc, det / 6.0, &[a, b, c]);
        }
    }
    acc
}
