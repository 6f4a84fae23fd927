//! Semi-invariance of polynomials under diagonal actions of `μ_p`.
//!
//! A diagonal action multiplies variable `i` by `ζ^{w_i}`; a polynomial is
//! semi-invariant with character `c` when every monomial it contains has
//! weight `Σ e_i w_i ≡ c (mod p)`.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use serde::Serialize;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::poly::RatPoly;

use super::WeierstrassModel;

/// Polynomial in a fixed number of variables with coefficients in `Q(ζ_p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    p: u32,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Cyclotomic>,
}

impl MultiPoly {
    pub fn zero(p: u32, nvars: usize) -> Result<Self> {
        Cyclotomic::zero(p)?;
        Ok(Self { p, nvars, terms: BTreeMap::new() })
    }

    pub fn constant(nvars: usize, c: Cyclotomic) -> Self {
        let mut out = Self { p: c.prime(), nvars, terms: BTreeMap::new() };
        out.add_term(vec![0; nvars], c);
        out
    }

    /// The `i`-th coordinate function.
    pub fn var(p: u32, nvars: usize, i: usize) -> Result<Self> {
        if i >= nvars {
            return Err(Error::DimensionMismatch { expected: nvars, found: i + 1 });
        }
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut out = Self::zero(p, nvars)?;
        out.add_term(e, Cyclotomic::one(p)?);
        Ok(out)
    }

    /// A rational polynomial placed in variable `i`.
    pub fn from_univariate(p: u32, nvars: usize, i: usize, f: &RatPoly) -> Result<Self> {
        let mut out = Self::zero(p, nvars)?;
        if i >= nvars {
            return Err(Error::DimensionMismatch { expected: nvars, found: i + 1 });
        }
        for (k, c) in f.coeffs().iter().enumerate() {
            let mut e = vec![0; nvars];
            e[i] = k as u32;
            out.add_term(e, Cyclotomic::from_rational(p, c.clone())?);
        }
        Ok(out)
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Cyclotomic> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degrees of the monomials present.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(|e| e.iter().sum()).collect();
        d.dedup();
        d
    }

    fn add_term(&mut self, exps: Vec<u32>, c: Cyclotomic) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixed cyclotomic fields");
        assert_eq!(self.nvars, other.nvars, "mixed numbers of variables");
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        let mut out = Self { p: self.p, nvars: self.nvars, terms: BTreeMap::new() };
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(self.nvars, Cyclotomic::one(self.p).expect("prime")), |acc, _| &acc * self)
    }

    /// Applies `x_i ↦ ζ^{w_i} x_i`.
    pub fn act(&self, weights: &[i64]) -> Result<Self> {
        if weights.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: weights.len() });
        }
        let mut out = Self { p: self.p, nvars: self.nvars, terms: BTreeMap::new() };
        for (e, v) in &self.terms {
            let zeta = Cyclotomic::zeta_pow(self.p, monomial_weight(e, weights))?;
            out.add_term(e.clone(), v * &zeta);
        }
        Ok(out)
    }
}

fn monomial_weight(exps: &[u32], weights: &[i64]) -> i64 {
    exps.iter().zip(weights).map(|(&e, &w)| e as i64 * w).sum()
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.check(rhs);
        let mut out = self.clone();
        for (e, v) in &rhs.terms {
            out.add_term(e.clone(), v.clone());
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = -&*v;
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.check(rhs);
        let mut out = MultiPoly { p: self.p, nvars: self.nvars, terms: BTreeMap::new() };
        for (ea, va) in &self.terms {
            for (eb, vb) in &rhs.terms {
                // exponents add when monomials multiply
                #[allow(clippy::suspicious_arithmetic_impl)]
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, va * vb);
            }
        }
        out
    }
}

/// True iff every monomial of `poly` has weight `≡ character (mod p)`.
pub fn weighted_invariance(poly: &MultiPoly, p: u32, weights: &[i64], character: i64) -> bool {
    let p = p as i64;
    weights.len() == poly.nvars
        && poly
            .terms
            .keys()
            .all(|e| (monomial_weight(e, weights) - character).rem_euclid(p) == 0)
}

/// `(x, y, t) ↦ (ζ^u x, ζ^v y, ζ^w t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Action {
    pub p: u32,
    pub u: i64,
    pub v: i64,
    pub w: i64,
}

impl Action {
    pub fn weights(&self) -> [i64; 3] {
        [self.u, self.v, self.w]
    }

    /// Replaces the generator `ζ` by `ζ^k`.
    pub fn power(&self, k: i64) -> Self {
        let p = self.p as i64;
        Self { p: self.p, u: (self.u * k).rem_euclid(p), v: (self.v * k).rem_euclid(p), w: (self.w * k).rem_euclid(p) }
    }
}

/// `y^2 - x^3 - f(t) x - g(t)` in the variables `(x, y, t)`.
pub fn weierstrass_equation(model: &WeierstrassModel, p: u32) -> Result<MultiPoly> {
    let x = MultiPoly::var(p, 3, 0)?;
    let y = MultiPoly::var(p, 3, 1)?;
    let f = MultiPoly::from_univariate(p, 3, 2, model.f())?;
    let g = MultiPoly::from_univariate(p, 3, 2, model.g())?;
    Ok(&(&(&y.pow(2) - &x.pow(3)) - &(&f * &x)) - &g)
}

/// The action preserves the surface iff the equation is semi-invariant with
/// the character of `y^2`: `3u ≡ 2v`, `wk ≡ 2v - u` on `f`, `wk ≡ 2v` on `g`.
pub fn weierstrass_invariance(model: &WeierstrassModel, action: &Action) -> Result<bool> {
    let eq = weierstrass_equation(model, action.p)?;
    Ok(weighted_invariance(&eq, action.p, &action.weights(), 2 * action.v))
}

fn linear(p: u32, c0: &Cyclotomic, c1: &Cyclotomic) -> Result<MultiPoly> {
    let x0 = MultiPoly::var(p, 3, 0)?;
    let x1 = MultiPoly::var(p, 3, 1)?;
    Ok(&x0.scale(c0) + &x1.scale(c1))
}

/// `x0 (x0 - x1) Π (x0 - λ_i x1) + x2^5 x1` over `Q(ζ_5)`.
pub fn sextic_family_a(lambdas: &[Cyclotomic; 4]) -> Result<MultiPoly> {
    let p = 5;
    let one = Cyclotomic::one(p)?;
    let x0 = MultiPoly::var(p, 3, 0)?;
    let x1 = MultiPoly::var(p, 3, 1)?;
    let x2 = MultiPoly::var(p, 3, 2)?;
    let mut prod = &x0 * &linear(p, &one, &-&one)?;
    for l in lambdas {
        if l.prime() != p {
            return Err(Error::FieldMismatch(p, l.prime()));
        }
        prod = &prod * &linear(p, &one, &-l)?;
    }
    Ok(&prod + &(&x2.pow(5) * &x1))
}

/// `a1 x0^6 + a2 x0^3 x1 x2^2 + a3 x0^2 x1^3 x2 + x0 (a4 x1^5 + a5 x2^5) + a6 x1^2 x2^4`.
pub fn sextic_family_b(a: &[Cyclotomic; 6]) -> Result<MultiPoly> {
    const MONOMIALS: [[u32; 3]; 6] = [[6, 0, 0], [3, 1, 2], [2, 3, 1], [1, 5, 0], [1, 0, 5], [0, 2, 4]];
    let p = 5;
    let mut out = MultiPoly::zero(p, 3)?;
    for (c, e) in a.iter().zip(MONOMIALS) {
        if c.prime() != p {
            return Err(Error::FieldMismatch(p, c.prime()));
        }
        out.add_term(e.to_vec(), c.clone());
    }
    Ok(out)
}

/// Weights of the plane actions preserving the two sextic families.
pub const SEXTIC_A_WEIGHTS: [i64; 3] = [0, 0, 1];
pub const SEXTIC_B_WEIGHTS: [i64; 3] = [0, 1, 2];

/// Parameters `λ_i` for the members of family A: distinct values for the
/// smooth member, then coincidences with `0` and `1` for each degeneration.
pub fn sextic_a_members() -> Result<Vec<(&'static str, [Cyclotomic; 4])>> {
    let c = |n: i64, k: i64| -> Result<Cyclotomic> {
        Ok(&Cyclotomic::from_int(5, n)? + &Cyclotomic::zeta_pow(5, k)?)
    };
    let z = || Cyclotomic::zero(5);
    let o = || Cyclotomic::one(5);
    Ok(vec![
        ("smooth", [c(2, 1)?, c(3, 2)?, c(-1, 3)?, c(4, 4)?]),
        ("A4", [z()?, c(3, 2)?, c(-1, 3)?, c(4, 4)?]),
        ("E8", [z()?, z()?, c(-1, 3)?, c(4, 4)?]),
        ("2A4", [z()?, o()?, c(-1, 3)?, c(4, 4)?]),
        ("A4+E8", [z()?, z()?, o()?, c(4, 4)?]),
        ("2E8", [z()?, z()?, o()?, o()?]),
    ])
}

pub fn sextic_b_coefficients() -> Result<[Cyclotomic; 6]> {
    let mut out = Vec::new();
    for k in 1..=6i64 {
        out.push(&Cyclotomic::from_int(5, k)? + &Cyclotomic::zeta_pow(5, k)?.scale(&BigRational::from_integer(2.into())));
    }
    Ok(out.try_into().expect("six coefficients"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(f: &str, g: &str) -> WeierstrassModel {
        WeierstrassModel::parse(f, g, &BTreeMap::new()).unwrap()
    }

    #[test]
    fn order_thirteen_action() {
        let m = model("t^5", "t");
        assert!(weierstrass_invariance(&m, &Action { p: 13, u: 5, v: 1, w: 2 }).unwrap());
        assert!(!weierstrass_invariance(&m, &Action { p: 13, u: 5, v: 1, w: 3 }).unwrap());
        assert!(!weierstrass_invariance(&m, &Action { p: 13, u: 1, v: 1, w: 2 }).unwrap());
    }

    #[test]
    fn semi_invariant_means_eigenvector() {
        let m = model("t^5", "t");
        let a = Action { p: 13, u: 5, v: 1, w: 2 };
        let eq = weierstrass_equation(&m, 13).unwrap();
        let moved = eq.act(&a.weights()).unwrap();
        assert_eq!(moved, eq.scale(&Cyclotomic::zeta_pow(13, 2).unwrap()));
    }

    #[test]
    fn sextic_families() {
        for (name, l) in sextic_a_members().unwrap() {
            let s = sextic_family_a(&l).unwrap();
            assert_eq!(s.degrees(), vec![6], "{name}");
            assert!(weighted_invariance(&s, 5, &SEXTIC_A_WEIGHTS, 0), "{name}");
            assert!(!weighted_invariance(&s, 5, &SEXTIC_B_WEIGHTS, 0), "{name}");
        }
        let b = sextic_family_b(&sextic_b_coefficients().unwrap()).unwrap();
        assert_eq!(b.terms().len(), 6);
        assert!(weighted_invariance(&b, 5, &SEXTIC_B_WEIGHTS, 0));
        assert!(!weighted_invariance(&b, 5, &SEXTIC_A_WEIGHTS, 0));
    }

    #[test]
    fn zero_is_invariant_for_any_character() {
        let z = MultiPoly::zero(7, 2).unwrap();
        assert!(weighted_invariance(&z, 7, &[1, 2], 3));
    }
}
