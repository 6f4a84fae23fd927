//! Even non-degenerate integral lattices given by Gram matrices.

mod catalog;
mod expr;
mod isometry;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{smith_normal_form, IntMatrix, SmithForm};

pub use catalog::{scaled_dual, standard_lattice, StandardLattice};
pub use expr::parse_lattice_expr;
pub use isometry::{acts_trivially_on_discriminant, fixed_sublattice, is_isometry, isometry_order, FixedSublattice};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    gram: IntMatrix,
    label: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.positive, self.negative)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Elementary {
    Unimodular,
    Prime { p: u64, a: usize },
}

impl Elementary {
    /// The length `a` if the discriminant group is (Z/p)^a; unimodular counts for every `p`.
    pub fn length_for(&self, p: u64) -> Option<usize> {
        match *self {
            Elementary::Unimodular => Some(0),
            Elementary::Prime { p: q, a } if q == p => Some(a),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeInvariants {
    pub rank: usize,
    pub signature: Signature,
    #[serde(with = "bigint_string")]
    pub det: BigInt,
    #[serde(with = "bigint_vec_string")]
    pub discriminant: Vec<BigInt>,
    pub elementary: Option<Elementary>,
    pub delta: Option<u8>,
}

impl fmt::Display for LatticeInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rank {}, signature {}, det {}", self.rank, self.signature, self.det)?;
        match self.elementary {
            Some(Elementary::Unimodular) => write!(f, ", unimodular")?,
            Some(Elementary::Prime { p, a }) => write!(f, ", {p}-elementary a={a}")?,
            None => {
                let parts: Vec<String> = self.discriminant.iter().map(|d| format!("Z/{d}")).collect();
                write!(f, ", discriminant {}", parts.join(" + "))?
            }
        }
        if let Some(d) = self.delta {
            write!(f, ", delta={d}")?;
        }
        Ok(())
    }
}

impl Lattice {
    /// Validates squareness, symmetry, evenness and non-degeneracy.
    pub fn new(gram: IntMatrix) -> Result<Self> {
        if !gram.is_square() || gram.rows() == 0 {
            return Err(Error::NotSquare);
        }
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        if (0..gram.rows()).any(|i| gram[(i, i)].is_odd()) {
            return Err(Error::NotEven);
        }
        if gram.determinant()?.is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(Lattice { gram, label: None })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(IntMatrix::from_rows(rows)?)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        let label = match (&self.label, &other.label) {
            (Some(a), Some(b)) => Some(format!("{a}+{b}")),
            _ => None,
        };
        Lattice { gram: self.gram.block_diag(&other.gram), label }
    }

    /// Scales the form by `c`.
    pub fn twist(&self, c: &BigInt) -> Result<Lattice> {
        if c.is_zero() {
            return Err(Error::ZeroTwist);
        }
        let label = self.label.as_ref().map(|l| format!("{l}({c})"));
        Ok(Lattice { gram: self.gram.scale(c), label })
    }

    pub fn power(&self, k: usize) -> Result<Lattice> {
        if k == 0 {
            return Err(Error::InvalidParameter { name: "power".into(), reason: "exponent must be positive".into() });
        }
        let mut out = self.clone();
        for _ in 1..k {
            out = out.direct_sum(self);
        }
        out.label = self.label.as_ref().map(|l| if k == 1 { l.clone() } else { format!("{l}^{k}") });
        Ok(out)
    }

    pub fn determinant(&self) -> BigInt {
        self.gram.determinant().expect("Gram matrix is square")
    }

    /// Counts positive and negative pivots of a rational congruence diagonalization.
    pub fn signature(&self) -> Signature {
        let n = self.rank();
        let mut a = self.gram.to_rational();
        let mut sig = Signature { positive: 0, negative: 0 };
        for k in 0..n {
            if a[k][k].is_zero() {
                if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                    a.swap(k, j);
                    for row in a.iter_mut() {
                        row.swap(k, j);
                    }
                } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                    // both diagonal entries vanish: e_k += e_j gives 2 a_kj on the diagonal
                    for c in 0..n {
                        let v = a[j][c].clone();
                        a[k][c] += v;
                    }
                    for row in a.iter_mut() {
                        let v = row[j].clone();
                        row[k] += v;
                    }
                }
            }
            let pivot = a[k][k].clone();
            assert!(!pivot.is_zero(), "non-degenerate form has a pivot");
            if pivot.is_positive() {
                sig.positive += 1;
            } else {
                sig.negative += 1;
            }
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let f = &a[i][k] / &pivot;
                for c in 0..n {
                    let v = &f * &a[k][c];
                    a[i][c] -= v;
                }
                for row in a.iter_mut() {
                    let v = &f * &row[k];
                    row[i] -= v;
                }
            }
        }
        sig
    }

    pub fn smith(&self) -> SmithForm {
        smith_normal_form(&self.gram)
    }

    /// Generators of the discriminant group as rational vectors in the dual,
    /// paired with their orders.
    pub fn discriminant_generators(&self) -> Vec<(Vec<BigRational>, BigInt)> {
        let snf = self.smith();
        snf.diagonal
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_one())
            .map(|(i, d)| {
                let coords = snf
                    .right
                    .column(i)
                    .into_iter()
                    .map(|x| BigRational::new(x, d.clone()))
                    .collect();
                (coords, d.clone())
            })
            .collect()
    }

    pub fn invariants(&self) -> LatticeInvariants {
        let snf = self.smith();
        let discriminant = snf.nontrivial_factors();
        let elementary = elementary_type(&discriminant);
        let delta = match elementary {
            Some(Elementary::Unimodular) => Some(0),
            Some(Elementary::Prime { p: 2, .. }) => Some(self.delta_from(&snf)),
            _ => None,
        };
        LatticeInvariants {
            rank: self.rank(),
            signature: self.signature(),
            det: self.determinant(),
            discriminant,
            elementary,
            delta,
        }
    }

    /// 0 when the discriminant form is integer valued on every generator.
    fn delta_from(&self, snf: &SmithForm) -> u8 {
        for (i, d) in snf.diagonal.iter().enumerate() {
            if d.is_one() {
                continue;
            }
            let v = snf.right.column(i);
            let q = self.gram.bilinear(&v, &v).expect("dimensions agree");
            if !q.is_multiple_of(&(d * d)) {
                return 1;
            }
        }
        0
    }
}

fn elementary_type(factors: &[BigInt]) -> Option<Elementary> {
    let Some(first) = factors.first() else { return Some(Elementary::Unimodular) };
    if factors.iter().any(|f| f != first) {
        return None;
    }
    let p = first.to_u64()?;
    is_prime(p).then_some(Elementary::Prime { p, a: factors.len() })
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.label {
            Some(l) => write!(f, "{l}"),
            None => write!(f, "<rank {} lattice>", self.rank()),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct LatticeRepr {
    label: Option<String>,
    rank: usize,
    gram: Vec<i64>,
}

impl Serialize for Lattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let gram = self
            .gram
            .as_flat()
            .iter()
            .map(|x| x.to_i64().ok_or_else(|| serde::ser::Error::custom("Gram entry exceeds i64")))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        LatticeRepr { label: self.label.clone(), rank: self.rank(), gram }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Lattice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = LatticeRepr::deserialize(d)?;
        let data = repr.gram.into_iter().map(BigInt::from).collect();
        let gram = IntMatrix::from_flat(repr.rank, repr.rank, data).map_err(serde::de::Error::custom)?;
        let mut lattice = Lattice::new(gram).map_err(serde::de::Error::custom)?;
        lattice.label = repr.label;
        Ok(lattice)
    }
}

pub(crate) mod bigint_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

pub(crate) mod bigint_vec_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(ToString::to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|x| x.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv(expr: &str) -> LatticeInvariants {
        parse_lattice_expr(expr).unwrap().invariants()
    }

    #[test]
    fn hyperbolic_plane() {
        let i = inv("U");
        assert_eq!(i.signature, Signature { positive: 1, negative: 1 });
        assert_eq!(i.det, BigInt::from(-1));
        assert_eq!(i.elementary, Some(Elementary::Unimodular));
    }

    #[test]
    fn e8_is_negative_definite_unimodular() {
        let i = inv("E8");
        assert_eq!(i.signature, Signature { positive: 0, negative: 8 });
        assert_eq!(i.det, BigInt::one());
        assert_eq!(i.delta, Some(0));
    }

    #[test]
    fn e7_two_elementary_odd_delta() {
        let i = inv("E7");
        assert_eq!(i.elementary, Some(Elementary::Prime { p: 2, a: 1 }));
        assert_eq!(i.delta, Some(1));
    }

    #[test]
    fn twisted_hyperbolic_has_delta_zero() {
        let i = inv("U(2)");
        assert_eq!(i.elementary, Some(Elementary::Prime { p: 2, a: 2 }));
        assert_eq!(i.delta, Some(0));
        assert_eq!(inv("A1(-1)").delta, Some(1));
        assert_eq!(inv("E8(2)").delta, Some(0));
    }

    #[test]
    fn mixed_discriminant_not_elementary() {
        let i = inv("A1+A2");
        assert_eq!(i.elementary, None);
        assert_eq!(i.discriminant, vec![BigInt::from(6)]);
    }

    #[test]
    fn rejects_bad_gram() {
        assert_eq!(Lattice::from_rows(&[vec![1, 0], vec![0, 2]]), Err(Error::NotEven));
        assert_eq!(Lattice::from_rows(&[vec![2, 1], vec![0, 2]]), Err(Error::NotSymmetric));
        assert_eq!(Lattice::from_rows(&[vec![2, 2], vec![2, 2]]), Err(Error::Degenerate));
    }

    #[test]
    fn json_round_trip() {
        let l = parse_lattice_expr("U+A2").unwrap();
        let s = serde_json::to_string(&l).unwrap();
        let back: Lattice = serde_json::from_str(&s).unwrap();
        assert_eq!(back, l);
    }

    #[test]
    fn signature_of_isotropic_block() {
        // zero diagonal everywhere forces the hyperbolic split
        let l = Lattice::from_rows(&[vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]).unwrap();
        assert_eq!(l.signature(), Signature { positive: 1, negative: 2 });
        let l = parse_lattice_expr("U+U(3)").unwrap();
        assert_eq!(l.signature(), Signature { positive: 2, negative: 2 });
    }
}
