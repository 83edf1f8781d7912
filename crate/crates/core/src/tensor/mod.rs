//! Dense symmetric tensors of order 2, 3, 4 and 6 in two or three dimensions.
//!
//! All tensors are stored as full row-major component arrays. Every write goes
//! through the owning type, which copies the value to the whole orbit of index
//! permutations allowed by the type's symmetry, so symmetric partners are
//! always bit-identical.
//!
//! Operators (`Tensor4Elastic`, `Tensor6Sge`) are analysed on their physically
//! meaningful subspaces through an orthonormal Mandel-type basis; see
//! [`subspace`].

mod dim;
pub mod subspace;
mod tensor2;
mod tensor3;
mod tensor4;
mod tensor6;

pub(crate) use dim::check_same;
pub use dim::{delta, Dim};
pub use subspace::{eig_min_on_sym, Definiteness, SymmetricSubspace, PD_REL_TOL};
pub use tensor2::{Tensor2, Tensor2Sym};
pub use tensor3::{BetaField, PairSym, Tensor3PairSym};
pub use tensor4::Tensor4Elastic;
pub use tensor6::Tensor6Sge;

use crate::error::{fmt_indices, Error, Result};

/// Flat positions of one symmetry orbit, sorted and deduplicated.
#[derive(Clone, Copy)]
pub(crate) struct Orbit {
    idx: [usize; 8],
    len: usize,
}

impl Orbit {
    pub(crate) fn new(members: &[usize]) -> Self {
        let mut idx = [usize::MAX; 8];
        idx[..members.len()].copy_from_slice(members);
        idx[..members.len()].sort_unstable();
        let mut len = 0;
        for k in 0..members.len() {
            if len == 0 || idx[k] != idx[len - 1] {
                idx[len] = idx[k];
                len += 1;
            }
        }
        Orbit { idx, len }
    }

    #[inline]
    pub(crate) fn members(&self) -> &[usize] {
        &self.idx[..self.len]
    }

    #[inline]
    pub(crate) fn canonical(&self) -> usize {
        self.idx[0]
    }
}

pub(crate) fn unflatten(mut p: usize, n: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = p % n;
        p /= n;
    }
}

pub(crate) fn flatten(idx: &[usize], n: usize) -> usize {
    idx.iter().fold(0, |acc, &i| acc * n + i)
}

/// Builds a component array by evaluating `f` once per orbit (at its smallest
/// flat position) and writing the value to every member.
pub(crate) fn fill_orbits(
    len: usize,
    orbit: impl Fn(usize) -> Orbit,
    mut f: impl FnMut(usize) -> f64,
) -> Vec<f64> {
    let mut data = vec![0.0; len];
    for p in 0..len {
        let o = orbit(p);
        if o.canonical() == p {
            let v = f(p);
            for &q in o.members() {
                data[q] = v;
            }
        }
    }
    data
}

/// Validates raw components against the orbit structure and returns the
/// canonicalized array. Orbit members may differ by at most
/// `rel_tol * max|component|`; accepted orbits are replaced by their mean.
pub(crate) fn canonicalize(
    raw: &[f64],
    n: usize,
    order: usize,
    orbit: impl Fn(usize) -> Orbit,
    rel_tol: f64,
) -> Result<Vec<f64>> {
    let expected = n.pow(order as u32);
    if raw.len() != expected {
        return Err(Error::ComponentCount {
            expected,
            got: raw.len(),
        });
    }
    let scale = raw.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let mut data = raw.to_vec();
    let mut buf = [0usize; 6];
    for p in 0..expected {
        let o = orbit(p);
        if o.canonical() != p {
            continue;
        }
        let v0 = raw[p];
        let members = o.members();
        if members.iter().all(|&q| raw[q].to_bits() == v0.to_bits()) {
            continue;
        }
        for &q in members {
            if (raw[q] - v0).abs() > rel_tol * scale || !raw[q].is_finite() {
                let mut a = buf;
                unflatten(p, n, &mut a[..order]);
                unflatten(q, n, &mut buf[..order]);
                return Err(Error::Symmetry {
                    at: fmt_indices(&a[..order]),
                    value: v0,
                    partner: fmt_indices(&buf[..order]),
                    partner_value: raw[q],
                });
            }
        }
        let mean = members.iter().map(|&q| raw[q]).sum::<f64>() / members.len() as f64;
        for &q in members {
            data[q] = mean;
        }
    }
    Ok(data)
}

#[inline]
pub(crate) fn frobenius(data: &[f64]) -> f64 {
    data.iter().map(|v| v * v).sum::<f64>().sqrt()
}
