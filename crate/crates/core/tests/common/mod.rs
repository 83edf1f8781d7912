//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use mindlin_core::batch::{sum_chunked_vec, Execution};
use mindlin_core::energy::QuadraticBC;
use mindlin_core::geometry::ShapeSpec;
use mindlin_core::sampling;
use mindlin_core::{Dim, Tensor6Sge};
use nalgebra::{DMatrix, DVector};
use rand::Rng;

const PRIMES: [u64; 4] = [2, 3, 5, 7];

/// Radical inverse of `i` in `base`.
pub fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let (mut r, mut scale) = (0.0, inv);
    while i > 0 {
        r += (i % base) as f64 * scale;
        i /= base;
        scale *= inv;
    }
    r
}

/// Halton point `i` (skipping the origin) in `d` dimensions.
pub fn halton(i: usize, d: usize) -> [f64; 4] {
    let mut p = [0.0; 4];
    for k in 0..d {
        p[k] = radical_inverse(i as u64 + 1, PRIMES[k]);
    }
    p
}

/// `int_ball g(x) dx` for the centred ball of radius `r`, by a polar map of
/// Halton points. `g` writes `width` values into the accumulator slice after
/// scaling by the weight it is given.
pub fn qmc_ball(
    dim: Dim,
    r: f64,
    points: usize,
    width: usize,
    g: impl Fn(&[f64], f64, &mut [f64]) + Sync + Send,
) -> Vec<f64> {
    let n = dim.n();
    let vol = match dim {
        Dim::Two => PI * r * r,
        Dim::Three => 4.0 / 3.0 * PI * r.powi(3),
    };
    let w = vol / points as f64;
    sum_chunked_vec(Execution::Parallel, points, 4096, width, |i, acc| {
        let h = halton(i, n);
        let x: Vec<f64> = match dim {
            Dim::Two => {
                let rr = r * h[0].sqrt();
                let t = 2.0 * PI * h[1];
                vec![rr * t.cos(), rr * t.sin()]
            }
            Dim::Three => {
                let rr = r * h[0].cbrt();
                let c = 2.0 * h[1] - 1.0;
                let s = (1.0 - c * c).max(0.0).sqrt();
                let ph = 2.0 * PI * h[2];
                vec![rr * s * ph.cos(), rr * s * ph.sin(), rr * c]
            }
        };
        g(&x, w, acc);
    })
}

/// Volume, first and second moments of a simplex fan by QMC on the unit cube
/// mapped onto each simplex. Returns `[V, S_0.., E_00, E_01, ..]` with `E`
/// row-major.
pub fn qmc_simplices(simplices: &[Vec<Vec<f64>>], n: usize, points: usize) -> Vec<f64> {
    let width = 1 + n + n * n;
    let mut total = vec![0.0; width];
    for s in simplices {
        let p0 = &s[0];
        let edges: Vec<Vec<f64>> = (1..=n)
            .map(|k| (0..n).map(|i| s[k][i] - s[k - 1][i]).collect())
            .collect();
        let det = if n == 2 {
            let a: Vec<f64> = (0..2).map(|i| s[1][i] - p0[i]).collect();
            let b: Vec<f64> = (0..2).map(|i| s[2][i] - p0[i]).collect();
            a[0] * b[1] - a[1] * b[0]
        } else {
            let a: Vec<f64> = (0..3).map(|i| s[1][i] - p0[i]).collect();
            let b: Vec<f64> = (0..3).map(|i| s[2][i] - p0[i]).collect();
            let c: Vec<f64> = (0..3).map(|i| s[3][i] - p0[i]).collect();
            a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
                + a[2] * (b[0] * c[1] - b[1] * c[0])
        };
        let part = sum_chunked_vec(Execution::Parallel, points, 4096, width, |i, acc| {
            let h = halton(i, n);
            // x = p0 + u e1 + u v e2 (+ u v w e3); jacobian |det| u^(n-1) v^(n-2)
            let mut x = p0.clone();
            let mut coef = 1.0;
            for k in 0..n {
                coef *= h[k];
                for d in 0..n {
                    x[d] += coef * edges[k][d];
                }
            }
            let jac = det * if n == 2 { h[0] } else { h[0] * h[0] * h[1] } / points as f64;
            acc[0] += jac;
            for a in 0..n {
                acc[1 + a] += jac * x[a];
                for b in 0..n {
                    acc[1 + n + a * n + b] += jac * x[a] * x[b];
                }
            }
        });
        for (t, p) in total.iter_mut().zip(part) {
            *t += p;
        }
    }
    total
}

/// Random convex polygon: points on an ellipse at sorted random angles,
/// rotated and translated.
pub fn random_convex_polygon<R: Rng>(rng: &mut R) -> ShapeSpec {
    let m = rng.random_range(3..9);
    let mut angles: Vec<f64> = (0..m).map(|_| rng.random::<f64>() * 2.0 * PI).collect();
    angles.sort_by(f64::total_cmp);
    let (a, b) = (0.5 + rng.random::<f64>(), 0.5 + rng.random::<f64>());
    let rot = rng.random::<f64>() * PI;
    let (c, s) = (rot.cos(), rot.sin());
    let t = [rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5];
    let vertices: Vec<[f64; 2]> = angles
        .iter()
        .map(|&th| {
            let (x, y) = (a * th.cos(), b * th.sin());
            [c * x - s * y + t[0], s * x + c * y + t[1]]
        })
        .collect();
    ShapeSpec::Polygon { vertices }
}

/// Random convex polyhedron: an affine image (positive determinant) of a
/// cube, octahedron or tetrahedron.
pub fn random_convex_polyhedron<R: Rng>(rng: &mut R) -> ShapeSpec {
    let (verts, faces): (Vec<[f64; 3]>, Vec<Vec<usize>>) = match rng.random_range(0..3) {
        0 => match ShapeSpec::cuboid([0.0; 3], [1.0; 3]) {
            ShapeSpec::Polyhedron { vertices, faces } => (vertices, faces),
            _ => unreachable!(),
        },
        1 => (
            vec![
                [1.0, 0.0, 0.0],
                [-1.0, 0.0, 0.0],
                [0.0, 1.0, 0.0],
                [0.0, -1.0, 0.0],
                [0.0, 0.0, 1.0],
                [0.0, 0.0, -1.0],
            ],
            vec![
                vec![0, 2, 4],
                vec![2, 1, 4],
                vec![1, 3, 4],
                vec![3, 0, 4],
                vec![2, 0, 5],
                vec![1, 2, 5],
                vec![3, 1, 5],
                vec![0, 3, 5],
            ],
        ),
        _ => (
            vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            vec![vec![0, 2, 1], vec![0, 1, 3], vec![0, 3, 2], vec![1, 2, 3]],
        ),
    };
    let mut m = DMatrix::from_fn(
        3,
        3,
        |i, j| if i == j { 1.0 } else { 0.0 } + 0.3 * sampling::normal(rng),
    );
    if m.determinant() < 0.0 {
        m.column_mut(0).neg_mut();
    }
    let t: Vec<f64> = (0..3).map(|_| 0.5 * sampling::normal(rng)).collect();
    let vertices = verts
        .iter()
        .map(|v| {
            let y = &m * DVector::from_column_slice(v);
            [y[0] + t[0], y[1] + t[1], y[2] + t[2]]
        })
        .collect();
    // keep faces outward under the orientation-preserving map
    ShapeSpec::Polyhedron { vertices, faces }
}

/// Vertex-centroid fan of a convex polygon or polyhedron.
pub fn centroid_fan(shape: &ShapeSpec) -> (usize, Vec<Vec<Vec<f64>>>) {
    match shape {
        ShapeSpec::Polygon { vertices } => {
            let m = vertices.len() as f64;
            let c = vec![
                vertices.iter().map(|v| v[0]).sum::<f64>() / m,
                vertices.iter().map(|v| v[1]).sum::<f64>() / m,
            ];
            let tris = (0..vertices.len())
                .map(|k| {
                    vec![
                        c.clone(),
                        vertices[k].to_vec(),
                        vertices[(k + 1) % vertices.len()].to_vec(),
                    ]
                })
                .collect();
            (2, tris)
        }
        ShapeSpec::Polyhedron { vertices, faces } => {
            let m = vertices.len() as f64;
            let c: Vec<f64> = (0..3)
                .map(|d| vertices.iter().map(|v| v[d]).sum::<f64>() / m)
                .collect();
            let mut tets = Vec::new();
            for f in faces {
                for t in 1..f.len() - 1 {
                    tets.push(vec![
                        c.clone(),
                        vertices[f[0]].to_vec(),
                        vertices[f[t]].to_vec(),
                        vertices[f[t + 1]].to_vec(),
                    ]);
                }
            }
            (3, tets)
        }
        _ => panic!("meshed shapes only"),
    }
}

/// Central-difference strain and curvature of the quadratic displacement.
pub fn fd_fields(bc: &QuadraticBC, x: &[f64], h: f64) -> (Vec<f64>, Vec<f64>) {
    let n = x.len();
    let shifted = |d: &[(usize, f64)]| {
        let mut y = x.to_vec();
        for &(k, s) in d {
            y[k] += s;
        }
        bc.displacement(&y)
    };
    let mut grad = vec![0.0; n * n]; // u_i,j
    for j in 0..n {
        let (p, m) = (shifted(&[(j, h)]), shifted(&[(j, -h)]));
        for i in 0..n {
            grad[i * n + j] = (p[i] - m[i]) / (2.0 * h);
        }
    }
    let eps: Vec<f64> = (0..n * n)
        .map(|p| 0.5 * (grad[p] + grad[(p % n) * n + p / n]))
        .collect();
    let mut chi = vec![0.0; n * n * n]; // chi_ijk = u_k,ij
    for i in 0..n {
        for j in 0..n {
            let pp = shifted(&[(i, h), (j, h)]);
            let pm = shifted(&[(i, h), (j, -h)]);
            let mp = shifted(&[(i, -h), (j, h)]);
            let mm = shifted(&[(i, -h), (j, -h)]);
            for k in 0..n {
                chi[(i * n + j) * n + k] = (pp[k] - pm[k] - mp[k] + mm[k]) / (4.0 * h * h);
            }
        }
    }
    (eps, chi)
}

/// Least-squares coefficients of `a` on the five isotropic basis tensors and
/// the relative residual of the fit.
pub fn isotropic_projection(a: &Tensor6Sge) -> ([f64; 5], f64) {
    let dim = a.dim();
    let basis: Vec<Tensor6Sge> = (0..5)
        .map(|k| {
            let mut e = [0.0; 5];
            e[k] = 1.0;
            Tensor6Sge::isotropic(e, dim)
        })
        .collect();
    let rows = a.data().len();
    let m = DMatrix::from_fn(rows, 5, |r, k| basis[k].data()[r]);
    let rhs = DVector::from_column_slice(a.data());
    let sol = m.clone().svd(true, true).solve(&rhs, 1e-13).expect("svd solve");
    let fit = &m * &sol;
    let norm = rhs.norm();
    let res = (&rhs - fit).norm();
    (
        [sol[0], sol[1], sol[2], sol[3], sol[4]],
        if norm > 0.0 { res / norm } else { res },
    )
}

pub fn rel(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 {
        0.0
    } else {
        (a - b).abs() / s
    }
}
