//! An explicit isometry of order 7 on `U ⊕ U ⊕ K7 ⊕ A6 ⊕ A6` without fixed
//! vectors and acting trivially on the discriminant group, together with
//! eigenvectors in `Q(ζ_7)` and their hermitian norms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::lattice::{
    acts_trivially_on_discriminant, fixed_sublattice, is_isometry, isometry_order, standard_lattice, FixedSublattice,
    Lattice,
};
use crate::matrix::IntMatrix;

const P: u32 = 7;

/// An integer matrix preserving the form of `lattice`; columns are images of
/// basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerIsometry {
    lattice: Lattice,
    matrix: IntMatrix,
}

impl IntegerIsometry {
    pub fn new(lattice: Lattice, matrix: IntMatrix) -> Result<Self> {
        if !is_isometry(&lattice, &matrix)? {
            return Err(Error::NotIsometry("matrix does not preserve the form".into()));
        }
        if matrix.determinant()?.abs() != BigInt::from(1) {
            return Err(Error::NotIsometry("determinant is not ±1".into()));
        }
        Ok(Self { lattice, matrix })
    }

    pub fn identity(lattice: Lattice) -> Self {
        let matrix = IntMatrix::identity(lattice.rank());
        Self { lattice, matrix }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self {
            lattice: self.lattice.direct_sum(&other.lattice),
            matrix: self.matrix.block_diag(&other.matrix),
        }
    }

    pub fn order(&self, bound: u32) -> Result<u32> {
        isometry_order(&self.matrix, bound)
    }

    pub fn fixed_sublattice(&self) -> Result<FixedSublattice> {
        fixed_sublattice(&self.lattice, &self.matrix)
    }

    pub fn discriminant_action_trivial(&self) -> Result<bool> {
        acts_trivially_on_discriminant(&self.lattice, &self.matrix)
    }

    /// `M v = ζ^k v` coordinatewise.
    pub fn eigen_check(&self, v: &CycVector, k: i64) -> Result<bool> {
        let n = self.lattice.rank();
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
        let zk = Cyclotomic::zeta_pow(v.p, k)?;
        for i in 0..n {
            let mut image = Cyclotomic::zero(v.p)?;
            for j in 0..n {
                let c = &self.matrix[(i, j)];
                if !c.is_zero() {
                    image = &image + &v.entries[j].scale(&BigRational::from_integer(c.clone()));
                }
            }
            if image != &zk * &v.entries[i] {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Coordinates over `Q(ζ_p)` with respect to a lattice basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycVector {
    p: u32,
    entries: Vec<Cyclotomic>,
}

impl CycVector {
    pub fn new(p: u32, entries: Vec<Cyclotomic>) -> Result<Self> {
        Cyclotomic::zero(p)?;
        if let Some(bad) = entries.iter().find(|c| c.prime() != p) {
            return Err(Error::FieldMismatch(p, bad.prime()));
        }
        Ok(Self { p, entries })
    }

    pub fn zero(p: u32, n: usize) -> Result<Self> {
        Self::new(p, vec![Cyclotomic::zero(p)?; n])
    }

    /// Each entry is given by its coefficients on `1, ζ, ζ^2, ...`.
    pub fn from_exponents(p: u32, rows: &[&[i64]]) -> Result<Self> {
        Self::new(p, rows.iter().map(|r| Cyclotomic::from_int_exponents(p, r)).collect::<Result<_>>()?)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Cyclotomic] {
        &self.entries
    }
}

/// `Σ G_ij v_i conj(v_j)`.
pub fn hermitian_norm(lattice: &Lattice, v: &CycVector) -> Result<Cyclotomic> {
    let n = lattice.rank();
    if v.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: v.len() });
    }
    let conj: Vec<Cyclotomic> = v.entries.iter().map(Cyclotomic::conj).collect();
    let mut total = Cyclotomic::zero(v.p)?;
    for i in 0..n {
        for j in 0..n {
            let g = &lattice.gram()[(i, j)];
            if !g.is_zero() {
                total = &total + &(&v.entries[i] * &conj[j]).scale(&BigRational::from_integer(g.clone()));
            }
        }
    }
    Ok(total)
}

/// `U ⊕ U ⊕ K7` in the basis `e1, f1, e2, f2, x, y` with `x^2 = -2`,
/// `y^2 = -4`, `x.y = 1`.
pub fn lattice_t0() -> Result<Lattice> {
    Ok(Lattice::from_rows(&[
        vec![0, 1, 0, 0, 0, 0],
        vec![1, 0, 0, 0, 0, 0],
        vec![0, 0, 0, 1, 0, 0],
        vec![0, 0, 1, 0, 0, 0],
        vec![0, 0, 0, 0, -2, 1],
        vec![0, 0, 0, 0, 1, -4],
    ])?
    .with_label("U+U+K7"))
}

pub fn rho0() -> Result<IntegerIsometry> {
    // images of e1, f1, e2, f2, x, y
    const IMAGES: [[i64; 6]; 6] = [
        [1, 1, 1, 1, 0, -1],
        [2, 0, 1, 2, 0, -1],
        [0, -1, 1, 1, 1, 0],
        [0, -1, 1, 0, 0, 0],
        [1, 2, -1, 1, -1, -1],
        [3, -1, 4, 3, 1, -2],
    ];
    let m = IntMatrix::from_fn(6, 6, |i, j| BigInt::from(IMAGES[j][i]));
    IntegerIsometry::new(lattice_t0()?, m)
}

/// `r_i ↦ r_{i+1}` and `r_6 ↦ -(r_1 + ... + r_6)`.
pub fn rho6() -> Result<IntegerIsometry> {
    let m = IntMatrix::from_fn(6, 6, |i, j| {
        BigInt::from(match j {
            5 => -1,
            _ if i == j + 1 => 1,
            _ => 0,
        })
    });
    IntegerIsometry::new(standard_lattice("A", Some(6))?, m)
}

/// `ρ0 ⊕ ρ6 ⊕ ρ6` on the rank 18 lattice.
pub fn rho_full() -> Result<IntegerIsometry> {
    let r6 = rho6()?;
    Ok(rho0()?.direct_sum(&r6).direct_sum(&r6))
}

/// Eigenvector of `ρ0` for `ζ`.
pub fn eigenvector_v() -> Result<CycVector> {
    CycVector::from_exponents(
        P,
        &[&[-1, 0, 1, 0, 1, -1], &[-1, 0, 0, 1], &[0, 1, 0, 0, 0, -1], &[0, 0, 1, 0, 0, -1], &[1], &[1, 0, 0, 0, 0, 1]],
    )
}

/// Eigenvector of `ρ6` for `ζ`.
pub fn eigenvector_w() -> Result<CycVector> {
    CycVector::from_exponents(
        P,
        &[&[1], &[1, 0, 0, 0, 0, 0, 1], &[1, 0, 0, 0, 0, 1, 1], &[0, -1, -1, -1], &[0, -1, -1], &[0, -1]],
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AppendixCheck {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

fn check(name: &str, expected: impl ToString, actual: impl ToString) -> AppendixCheck {
    let (expected, actual) = (expected.to_string(), actual.to_string());
    let pass = expected == actual;
    AppendixCheck { name: name.into(), expected, actual, pass }
}

/// Every verifiable claim about the construction.
pub fn appendix_checks() -> Result<Vec<AppendixCheck>> {
    let r0 = rho0()?;
    let r6 = rho6()?;
    let full = rho_full()?;
    let v = eigenvector_v()?;
    let w = eigenvector_w()?;
    let seven_re = Cyclotomic::from_int_exponents(P, &[0, 7, 0, 0, 0, 0, 7])?;
    let minus_seven = Cyclotomic::from_int(P, -7)?;
    let nv = hermitian_norm(r0.lattice(), &v)?;
    let nw = hermitian_norm(r6.lattice(), &w)?;

    let mut out = Vec::new();
    for (label, iso) in [("rho0", &r0), ("rho6", &r6), ("rho", &full)] {
        out.push(check(&format!("{label} rank"), if label == "rho" { 18 } else { 6 }, iso.lattice().rank()));
        out.push(check(&format!("{label} order"), 7, iso.order(10)?));
        out.push(check(&format!("{label} trivial on discriminant"), true, iso.discriminant_action_trivial()?));
        out.push(check(&format!("{label} fixed sublattice rank"), 0, iso.fixed_sublattice()?.rank()));
    }
    out.push(check("rho0 v = zeta v", true, r0.eigen_check(&v, 1)?));
    out.push(check("(v, conj v)", &seven_re, &nv));
    out.push(check("(v, conj v) is real", true, nv.conj() == nv));
    out.push(check("rho6 w = zeta w", true, r6.eigen_check(&w, 1)?));
    out.push(check("(w, conj w)", &minus_seven, &nw));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass() {
        for c in appendix_checks().unwrap() {
            assert!(c.pass, "{}: expected {} got {}", c.name, c.expected, c.actual);
        }
    }

    #[test]
    fn seventh_power_is_identity() {
        let r6 = rho6().unwrap();
        assert_eq!(r6.matrix().pow(7).unwrap(), IntMatrix::identity(6));
    }

    #[test]
    fn identity_on_u() {
        let u = standard_lattice("U", None).unwrap();
        let id = IntegerIsometry::identity(u.clone());
        assert_eq!(id.order(10).unwrap(), 1);
        assert_eq!(&id.fixed_sublattice().unwrap().gram, u.gram());
    }

    #[test]
    fn negation_on_u7_moves_discriminant() {
        let u7 = standard_lattice("U", None).unwrap().twist(&BigInt::from(7)).unwrap();
        let neg = IntegerIsometry::new(u7, IntMatrix::identity(2).scale(&BigInt::from(-1))).unwrap();
        assert!(!neg.discriminant_action_trivial().unwrap());
        assert_eq!(neg.order(10).unwrap(), 2);
    }

    #[test]
    fn eigen_check_rejects_wrong_eigenvalue_and_length() {
        let r0 = rho0().unwrap();
        let v = eigenvector_v().unwrap();
        assert!(!r0.eigen_check(&v, 2).unwrap());
        assert!(r0.eigen_check(&CycVector::zero(7, 5).unwrap(), 1).is_err());
    }

    #[test]
    fn zero_vector_has_zero_norm() {
        let l = lattice_t0().unwrap();
        assert!(hermitian_norm(&l, &CycVector::zero(7, 6).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn rejects_non_isometry() {
        let l = lattice_t0().unwrap();
        let mut rows = vec![vec![0i64; 6]; 6];
        for (i, r) in rows.iter_mut().enumerate() {
            r[i] = 1;
        }
        rows[0][1] = 1;
        let m = IntMatrix::from_rows(&rows).unwrap();
        assert!(matches!(IntegerIsometry::new(l, m), Err(Error::NotIsometry(_))));
    }
}
