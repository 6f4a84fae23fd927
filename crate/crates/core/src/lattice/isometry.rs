//! Isometries act on coordinate columns: `v -> M v`, preserving `Mᵀ G M = G`.

use num_integer::Integer;
use num_traits::One;

use super::Lattice;
use crate::error::{Error, Result};
use crate::matrix::{smith_normal_form, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedSublattice {
    /// Columns span the invariant vectors.
    pub basis: IntMatrix,
    pub gram: IntMatrix,
}

impl FixedSublattice {
    pub fn rank(&self) -> usize {
        self.basis.cols()
    }
}

pub fn is_isometry(lattice: &Lattice, m: &IntMatrix) -> Result<bool> {
    let g = lattice.gram();
    if m.rows() != g.rows() || m.cols() != g.cols() {
        return Err(Error::DimensionMismatch { expected: g.rows(), found: m.rows() });
    }
    Ok(&m.transpose().mul(g)?.mul(m)? == g)
}

fn require_isometry(lattice: &Lattice, m: &IntMatrix) -> Result<()> {
    if is_isometry(lattice, m)? {
        Ok(())
    } else {
        Err(Error::NotIsometry("matrix does not preserve the form".into()))
    }
}

/// Smallest `k >= 1` with `M^k = I`, searching up to `bound`.
pub fn isometry_order(m: &IntMatrix, bound: u32) -> Result<u32> {
    if !m.is_square() {
        return Err(Error::NotSquare);
    }
    let id = IntMatrix::identity(m.rows());
    let mut power = m.clone();
    for k in 1..=bound {
        if power == id {
            return Ok(k);
        }
        power = power.mul(m)?;
    }
    Err(Error::OrderExceedsBound(bound))
}

/// The invariant sublattice, a primitive sublattice given by an integer kernel basis of `M - I`.
pub fn fixed_sublattice(lattice: &Lattice, m: &IntMatrix) -> Result<FixedSublattice> {
    require_isometry(lattice, m)?;
    let n = lattice.rank();
    let shifted = m.sub(&IntMatrix::identity(n))?;
    let snf = smith_normal_form(&shifted);
    let kernel = snf.kernel_basis();
    let basis = IntMatrix::from_fn(n, kernel.len(), |i, j| kernel[j][i].clone());
    let gram = basis.transpose().mul(lattice.gram())?.mul(&basis)?;
    Ok(FixedSublattice { basis, gram })
}

/// Whether the induced action on the discriminant group is the identity.
pub fn acts_trivially_on_discriminant(lattice: &Lattice, m: &IntMatrix) -> Result<bool> {
    require_isometry(lattice, m)?;
    let n = lattice.rank();
    let shifted = m.sub(&IntMatrix::identity(n))?;
    let snf = lattice.smith();
    for (i, d) in snf.diagonal.iter().enumerate() {
        if d.is_one() {
            continue;
        }
        let v = snf.right.column(i);
        if shifted.mul_vec(&v)?.iter().any(|x| !x.is_multiple_of(d)) {
            return Ok(false);
        }
    }
    Ok(true)
}
