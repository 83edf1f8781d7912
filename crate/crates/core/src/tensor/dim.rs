use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Spatial dimension of the problem: plane (2) or three-dimensional (3).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub enum Dim {
    Two,
    Three,
}

impl Dim {
    pub fn new(n: usize) -> Result<Self> {
        match n {
            2 => Ok(Dim::Two),
            3 => Ok(Dim::Three),
            _ => Err(Error::InvalidDim(n)),
        }
    }

    #[inline]
    pub const fn n(self) -> usize {
        match self {
            Dim::Two => 2,
            Dim::Three => 3,
        }
    }

    /// Dimension of the space of symmetric second-order tensors.
    #[inline]
    pub const fn sym_dim(self) -> usize {
        let n = self.n();
        n * (n + 1) / 2
    }

    /// Dimension of the space of third-order tensors symmetric in one index pair.
    #[inline]
    pub const fn pair_sym_dim(self) -> usize {
        self.sym_dim() * self.n()
    }

    /// Index pairs (i <= j) in Mandel order: diagonal first, then off-diagonal.
    pub fn mandel_pairs(self) -> &'static [(usize, usize)] {
        match self {
            Dim::Two => &[(0, 0), (1, 1), (0, 1)],
            Dim::Three => &[(0, 0), (1, 1), (2, 2), (0, 1), (1, 2), (0, 2)],
        }
    }

    /// Position of the unordered pair {i, j} in [`Dim::mandel_pairs`].
    pub fn mandel_index(self, i: usize, j: usize) -> usize {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        if a == b {
            return a;
        }
        match (self, a, b) {
            (Dim::Two, 0, 1) => 2,
            (Dim::Three, 0, 1) => 3,
            (Dim::Three, 1, 2) => 4,
            (Dim::Three, 0, 2) => 5,
            _ => unreachable!("index out of range for {self:?}"),
        }
    }
}

impl TryFrom<usize> for Dim {
    type Error = Error;
    fn try_from(n: usize) -> Result<Self> {
        Dim::new(n)
    }
}

impl From<Dim> for usize {
    fn from(d: Dim) -> usize {
        d.n()
    }
}

#[inline]
pub fn delta(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

pub(crate) fn check_same(a: Dim, b: Dim) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimMismatch {
            left: a.n(),
            right: b.n(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_other_dimensions() {
        assert_eq!(Dim::new(1), Err(Error::InvalidDim(1)));
        assert_eq!(Dim::new(4), Err(Error::InvalidDim(4)));
        assert_eq!(Dim::new(3).unwrap().sym_dim(), 6);
        assert_eq!(Dim::new(2).unwrap().pair_sym_dim(), 6);
    }

    #[test]
    fn mandel_index_inverts_pairs() {
        for dim in [Dim::Two, Dim::Three] {
            for (a, &(i, j)) in dim.mandel_pairs().iter().enumerate() {
                assert_eq!(dim.mandel_index(i, j), a);
                assert_eq!(dim.mandel_index(j, i), a);
            }
        }
    }
}
