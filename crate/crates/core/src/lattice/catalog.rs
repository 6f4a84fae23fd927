use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::Lattice;
use crate::error::{Error, Result};
use crate::matrix::{rational_inverse, IntMatrix};

/// Named building blocks. Root lattices are negative definite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StandardLattice {
    U,
    A(usize),
    D(usize),
    E(usize),
    K(u64),
    H(u64),
    A4Star5,
    L17,
}

impl StandardLattice {
    pub fn build(self) -> Result<Lattice> {
        let (gram, label) = match self {
            StandardLattice::U => (from_i64(&[vec![0, 1], vec![1, 0]]), "U".to_string()),
            StandardLattice::A(n) => {
                if n == 0 {
                    return Err(invalid("A", "rank must be at least 1"));
                }
                (dynkin(n, &path_edges(n)), format!("A{n}"))
            }
            StandardLattice::D(n) => {
                if n < 4 {
                    return Err(invalid("D", "rank must be at least 4"));
                }
                let mut edges = path_edges(n - 1);
                edges.push((n - 3, n - 1));
                (dynkin(n, &edges), format!("D{n}"))
            }
            StandardLattice::E(n) => {
                if !(6..=8).contains(&n) {
                    return Err(invalid("E", "rank must be 6, 7 or 8"));
                }
                let mut edges = path_edges(n - 1);
                edges.push((2, n - 1));
                (dynkin(n, &edges), format!("E{n}"))
            }
            StandardLattice::K(p) => {
                if p % 4 != 3 {
                    return Err(invalid("K", "parameter must be 3 mod 4"));
                }
                let a = -((p as i64 + 1) / 2);
                (from_i64(&[vec![a, 1], vec![1, -2]]), format!("K{p}"))
            }
            StandardLattice::H(p) => {
                if p % 4 != 1 {
                    return Err(invalid("H", "parameter must be 1 mod 4"));
                }
                let a = (p as i64 - 1) / 2;
                (from_i64(&[vec![a, 1], vec![1, -2]]), format!("H{p}"))
            }
            StandardLattice::A4Star5 => (
                from_i64(&[
                    vec![-4, 1, 1, 1],
                    vec![1, -4, 1, 1],
                    vec![1, 1, -4, 1],
                    vec![1, 1, 1, -4],
                ]),
                "A4*5".to_string(),
            ),
            StandardLattice::L17 => (
                from_i64(&[
                    vec![-2, 1, 0, 1],
                    vec![1, -2, 0, 0],
                    vec![0, 0, -2, 1],
                    vec![1, 0, 1, -4],
                ]),
                "L17".to_string(),
            ),
        };
        Ok(Lattice::new(gram)?.with_label(label))
    }
}

/// Looks up a standard lattice by family name and optional parameter.
pub fn standard_lattice(name: &str, param: Option<u64>) -> Result<Lattice> {
    let need = |family: &str| param.ok_or_else(|| invalid(family, "missing parameter"));
    let std = match name {
        "U" => StandardLattice::U,
        "A" => StandardLattice::A(need("A")? as usize),
        "D" => StandardLattice::D(need("D")? as usize),
        "E" => StandardLattice::E(need("E")? as usize),
        "K" => StandardLattice::K(need("K")?),
        "H" => StandardLattice::H(need("H")?),
        "A4*5" => StandardLattice::A4Star5,
        "L17" => StandardLattice::L17,
        other => return Err(Error::UnknownLattice(other.to_string())),
    };
    std.build()
}

/// The lattice with Gram matrix `c * G^{-1}`, which must be even and integral.
pub fn scaled_dual(base: &Lattice, c: &BigInt) -> Result<Lattice> {
    if c.is_zero() {
        return Err(Error::ZeroTwist);
    }
    let inv = rational_inverse(base.gram()).ok_or(Error::Degenerate)?;
    let n = base.rank();
    let mut gram = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v = &inv[i][j] * c;
            if !v.is_integer() {
                return Err(invalid("dual", &format!("scaling by {c} is not integral")));
            }
            gram[(i, j)] = v.to_integer();
        }
    }
    if (0..n).any(|i| gram[(i, i)].is_odd()) {
        return Err(Error::NotEven);
    }
    let label = base.label().map(|l| format!("{l}*({c})"));
    let mut out = Lattice::new(gram)?;
    if let Some(l) = label {
        out = out.with_label(l);
    }
    Ok(out)
}

fn invalid(name: &str, reason: &str) -> Error {
    Error::InvalidParameter { name: name.to_string(), reason: reason.to_string() }
}

fn from_i64(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(rows).expect("rectangular literal")
}

fn path_edges(n: usize) -> Vec<(usize, usize)> {
    (1..n).map(|i| (i - 1, i)).collect()
}

fn dynkin(n: usize, edges: &[(usize, usize)]) -> IntMatrix {
    let mut g = IntMatrix::zeros(n, n);
    for i in 0..n {
        g[(i, i)] = BigInt::from(-2);
    }
    for &(a, b) in edges {
        g[(a, b)] = BigInt::from(1);
        g[(b, a)] = BigInt::from(1);
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Elementary, Signature};

    #[test]
    fn root_lattice_determinants() {
        let det = |s: StandardLattice| s.build().unwrap().determinant();
        assert_eq!(det(StandardLattice::A(4)), BigInt::from(5));
        assert_eq!(det(StandardLattice::D(4)), BigInt::from(4));
        assert_eq!(det(StandardLattice::E(6)), BigInt::from(3));
        assert_eq!(det(StandardLattice::E(7)), BigInt::from(-2));
        assert_eq!(det(StandardLattice::E(8)), BigInt::from(1));
    }

    #[test]
    fn k3_coincides_with_a2() {
        let k3 = StandardLattice::K(3).build().unwrap();
        let a2 = StandardLattice::A(2).build().unwrap();
        assert_eq!(k3.gram(), a2.gram());
    }

    #[test]
    fn residue_conditions() {
        assert!(StandardLattice::K(5).build().is_err());
        assert!(StandardLattice::H(7).build().is_err());
        assert!(StandardLattice::E(9).build().is_err());
    }

    #[test]
    fn e6_scaled_dual() {
        let e6 = StandardLattice::E(6).build().unwrap();
        let d = scaled_dual(&e6, &BigInt::from(3)).unwrap();
        let inv = d.invariants();
        assert_eq!(inv.signature, Signature { positive: 0, negative: 6 });
        assert_eq!(inv.elementary, Some(Elementary::Prime { p: 3, a: 5 }));
    }

    #[test]
    fn a4_dual_scaled_matches_literal() {
        let a4 = StandardLattice::A(4).build().unwrap();
        let d = scaled_dual(&a4, &BigInt::from(5)).unwrap();
        let lit = StandardLattice::A4Star5.build().unwrap();
        assert_eq!(d.invariants().elementary, lit.invariants().elementary);
        assert_eq!(d.determinant(), lit.determinant());
    }
}
