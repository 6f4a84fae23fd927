//! Exact arithmetic in Q(ζ_p) for a prime `p`.
//!
//! Elements are stored in the power basis `1, ζ, ..., ζ^{p-2}`; the relation
//! `ζ^{p-1} = -(1 + ζ + ... + ζ^{p-2})` reduces anything longer.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::is_prime;
use crate::poly::RatPoly;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    p: u32,
    coeffs: Vec<BigRational>,
}

fn check_prime(p: u32) -> Result<()> {
    if is_prime(p as u64) {
        Ok(())
    } else {
        Err(Error::NotPrime(p as u64))
    }
}

impl Cyclotomic {
    pub fn zero(p: u32) -> Result<Self> {
        check_prime(p)?;
        Ok(Cyclotomic { p, coeffs: vec![BigRational::zero(); p as usize - 1] })
    }

    pub fn one(p: u32) -> Result<Self> {
        Self::from_rational(p, BigRational::one())
    }

    pub fn from_rational(p: u32, c: BigRational) -> Result<Self> {
        let mut z = Self::zero(p)?;
        z.coeffs[0] = c;
        Ok(z)
    }

    pub fn from_int(p: u32, c: i64) -> Result<Self> {
        Self::from_rational(p, BigRational::from_integer(c.into()))
    }

    /// `ζ^k`; negative exponents are allowed.
    pub fn zeta_pow(p: u32, k: i64) -> Result<Self> {
        check_prime(p)?;
        let mut ext = vec![BigRational::zero(); p as usize];
        ext[k.rem_euclid(p as i64) as usize] = BigRational::one();
        Ok(Self::reduce(p, ext))
    }

    /// Builds `Σ c_i ζ^i` from any number of coefficients.
    pub fn from_exponents(p: u32, coeffs: &[BigRational]) -> Result<Self> {
        check_prime(p)?;
        let mut ext = vec![BigRational::zero(); p as usize];
        for (i, c) in coeffs.iter().enumerate() {
            ext[i % p as usize] += c;
        }
        Ok(Self::reduce(p, ext))
    }

    pub fn from_int_exponents(p: u32, coeffs: &[i64]) -> Result<Self> {
        let q: Vec<BigRational> = coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect();
        Self::from_exponents(p, &q)
    }

    fn reduce(p: u32, mut ext: Vec<BigRational>) -> Self {
        let top = ext.pop().expect("length p");
        for c in ext.iter_mut() {
            *c -= &top;
        }
        Cyclotomic { p, coeffs: ext }
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value if the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| self.coeffs[0].clone())
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.p, other.p))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Cyclotomic { p: self.p, coeffs })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let p = self.p as usize;
        let mut ext = vec![BigRational::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    ext[(i + j) % p] += a * b;
                }
            }
        }
        Ok(Self::reduce(self.p, ext))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Cyclotomic { p: self.p, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.p).expect("prime already checked");
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Galois automorphism `ζ -> ζ^k` for `k` prime to `p`.
    pub fn galois(&self, k: i64) -> Result<Self> {
        if k.rem_euclid(self.p as i64) == 0 {
            return Err(Error::InvalidParameter {
                name: "galois".into(),
                reason: format!("{k} is not invertible modulo {}", self.p),
            });
        }
        let p = self.p as i64;
        let mut ext = vec![BigRational::zero(); self.p as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            ext[((i as i64) * k).rem_euclid(p) as usize] += c;
        }
        Ok(Self::reduce(self.p, ext))
    }

    pub fn conj(&self) -> Self {
        self.galois(-1).expect("-1 is a unit")
    }

    /// Product of all Galois conjugates.
    pub fn norm(&self) -> BigRational {
        let mut prod = self.clone();
        for k in 2..self.p as i64 {
            prod = &prod * &self.galois(k).expect("unit");
        }
        prod.as_rational().expect("norm is rational")
    }

    fn as_poly(&self) -> RatPoly {
        RatPoly::from_coeffs(self.coeffs.clone())
    }

    /// Cyclotomic polynomial `1 + x + ... + x^{p-1}`.
    fn modulus(p: u32) -> RatPoly {
        RatPoly::from_coeffs(vec![BigRational::one(); p as usize])
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (g, s, _) = self.as_poly().ext_gcd(&Self::modulus(self.p));
        debug_assert!(g == RatPoly::one(), "Φ_p is irreducible");
        let s = s.rem(&Self::modulus(self.p))?;
        Self::from_exponents(self.p, s.coeffs())
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        self.try_mul(&other.inv()?)
    }

    /// Rational coordinates in the power basis, as `num/den` strings.
    pub fn coordinate_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| format!("{}/{}", c.numer(), c.denom())).collect()
    }
}

macro_rules! op {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr for &Cyclotomic {
            type Output = Cyclotomic;
            /// Panics when the operands live in different fields; use the `try_` form to get an error.
            fn $m(self, rhs: &Cyclotomic) -> Cyclotomic {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$m(&rhs)
            }
        }
    };
}
op!(Add, add, try_add);
op!(Sub, sub, try_sub);
op!(Mul, mul, try_mul);

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { p: self.p, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.as_poly().display_in("ζ"))
    }
}

#[derive(Serialize, Deserialize)]
struct CyclotomicRepr {
    p: u32,
    coeffs: Vec<String>,
}

impl Serialize for Cyclotomic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CyclotomicRepr { p: self.p, coeffs: self.coordinate_strings() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = CyclotomicRepr::deserialize(d)?;
        if repr.coeffs.len() + 1 != repr.p as usize {
            return Err(serde::de::Error::custom("coefficient count must be p - 1"));
        }
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| parse_rational(s).ok_or_else(|| serde::de::Error::custom(format!("bad rational `{s}`"))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        check_prime(repr.p).map_err(serde::de::Error::custom)?;
        Ok(Cyclotomic { p: repr.p, coeffs })
    }
}

/// Parses `n` or `n/d`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn zeta_has_order_p() {
        for p in [2, 3, 5, 7, 11, 13] {
            let z = Cyclotomic::zeta_pow(p, 1).unwrap();
            assert!(z.pow(p).is_one());
            assert!(!z.is_one());
        }
    }

    #[test]
    fn norm_of_one_minus_zeta_is_p() {
        for p in [2, 3, 5, 7, 11, 13, 17, 19] {
            let x = &Cyclotomic::one(p).unwrap() - &Cyclotomic::zeta_pow(p, 1).unwrap();
            assert_eq!(x.norm(), q(p as i64));
        }
    }

    #[test]
    fn inverse_round_trip() {
        let x = Cyclotomic::from_int_exponents(7, &[2, -1, 0, 3]).unwrap();
        assert!((&x * &x.inv().unwrap()).is_one());
        assert_eq!(Cyclotomic::zero(7).unwrap().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn p_two_is_rational() {
        let z = Cyclotomic::zeta_pow(2, 1).unwrap();
        assert_eq!(z.as_rational(), Some(q(-1)));
    }

    #[test]
    fn mixing_fields_is_an_error() {
        let a = Cyclotomic::one(5).unwrap();
        let b = Cyclotomic::one(7).unwrap();
        assert_eq!(a.try_add(&b), Err(Error::FieldMismatch(5, 7)));
        assert!(Cyclotomic::one(9).is_err());
    }

    #[test]
    fn conj_inverts_zeta() {
        let z = Cyclotomic::zeta_pow(11, 3).unwrap();
        assert!((&z * &z.conj()).is_one());
    }

    #[test]
    fn json_round_trip() {
        let x = Cyclotomic::from_exponents(5, &[q(1) / q(2), q(-3)]).unwrap();
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"p":5,"coeffs":["1/2","-3/1","0/1","0/1"]}"#);
        assert_eq!(serde_json::from_str::<Cyclotomic>(&s).unwrap(), x);
    }
}
