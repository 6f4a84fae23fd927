//! The holomorphic Lefschetz system for an order-`p` automorphism.
//!
//! An isolated fixed point of type `t` has local action `diag(ζ^{t+1}, ζ^{p-t})`.
//! Types `t` and `p-1-t` differ only by the order of the eigenvalues, so the
//! distinct types are `t = 1, ..., (p-1)/2`. Curves of genus `g` contribute
//! `(1-g)(1+ζ)/(1-ζ)^2`, and the total must equal `1 + ζ^{p-1}`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::lattice::is_prime;
use crate::matrix::rref;

/// Primes that can occur as orders of non-symplectic automorphisms.
pub const SUPPORTED_PRIMES: [u32; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

pub fn check_supported(p: u32) -> Result<()> {
    if SUPPORTED_PRIMES.contains(&p) {
        Ok(())
    } else if !is_prime(p as u64) {
        Err(Error::NotPrime(p as u64))
    } else {
        Err(Error::UnsupportedPrime(p))
    }
}

/// Number of distinct isolated point types.
pub fn point_type_count(p: u32) -> usize {
    (p as usize - 1) / 2
}

/// `det(I - A_t) = (1 - ζ^{t+1})(1 - ζ^{p-t})` for `1 <= t <= p-2`.
pub fn local_determinant(p: u32, t: u32) -> Result<Cyclotomic> {
    if p < 3 || t == 0 || t > p - 2 {
        return Err(Error::TypeOutOfRange { p, t });
    }
    let one = Cyclotomic::one(p)?;
    let a = &one - &Cyclotomic::zeta_pow(p, (t + 1) as i64)?;
    let b = &one - &Cyclotomic::zeta_pow(p, (p - t) as i64)?;
    Ok(&a * &b)
}

pub fn local_contribution(p: u32, t: u32) -> Result<Cyclotomic> {
    local_determinant(p, t)?.inv()
}

/// Contribution `(1-g)(1+ζ)/(1-ζ)^2` of a fixed curve of genus `g`.
pub fn curve_contribution(p: u32, genus: i64) -> Result<Cyclotomic> {
    let one = Cyclotomic::one(p)?;
    let zeta = Cyclotomic::zeta_pow(p, 1)?;
    let denom = (&one - &zeta).pow(2);
    let num = (&one + &zeta).scale(&BigRational::from_integer(BigInt::from(1 - genus)));
    num.try_div(&denom)
}

pub fn holomorphic_lefschetz_number(p: u32) -> Result<Cyclotomic> {
    Ok(&Cyclotomic::one(p)? + &Cyclotomic::zeta_pow(p, p as i64 - 1)?)
}

/// `constant + slope * α`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearInAlpha {
    #[serde(serialize_with = "ser_rational")]
    pub constant: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub slope: BigRational,
}

impl LinearInAlpha {
    pub fn eval(&self, alpha: &BigRational) -> BigRational {
        &self.constant + &self.slope * alpha
    }
}

impl fmt::Display for LinearInAlpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        if !self.slope.is_zero() {
            if self.slope == -BigRational::one() {
                out.push('-');
            } else if !self.slope.is_one() {
                out.push_str(&self.slope.to_string());
            }
            out.push('α');
        }
        if !self.constant.is_zero() || out.is_empty() {
            if !out.is_empty() && self.constant.is_positive() {
                out.push('+');
            }
            out.push_str(&self.constant.to_string());
        }
        f.write_str(&out)
    }
}

/// `slope * r + intercept`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffineInRank {
    #[serde(serialize_with = "ser_rational")]
    pub slope: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub intercept: BigRational,
}

impl AffineInRank {
    pub fn eval(&self, r: i64) -> BigRational {
        &self.slope * BigRational::from_integer(r.into()) + &self.intercept
    }
}

impl fmt::Display for AffineInRank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let den = self.slope.denom().lcm(self.intercept.denom());
        let scale = BigRational::from_integer(den.clone());
        let a = (&self.slope * &scale).to_integer();
        let b = (&self.intercept * &scale).to_integer();
        let mut num = match a.to_string().as_str() {
            "1" => "r".to_string(),
            "-1" => "-r".to_string(),
            s => format!("{s}r"),
        };
        if b.is_positive() {
            num.push_str(&format!("+{b}"));
        } else if b.is_negative() {
            num.push_str(&b.to_string());
        }
        if den.is_one() {
            f.write_str(&num)
        } else {
            write!(f, "({num})/{den}")
        }
    }
}

fn ser_rational<S: serde::Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LefschetzSolution {
    pub p: u32,
    /// Entry `i` is the number of isolated points of type `t = i + 1`.
    pub point_counts: Vec<LinearInAlpha>,
    pub total_points: LinearInAlpha,
    pub alpha_of_r: AffineInRank,
}

impl LefschetzSolution {
    pub fn points_at(&self, alpha: &BigRational) -> Vec<BigRational> {
        self.point_counts.iter().map(|n| n.eval(alpha)).collect()
    }

    /// Left side minus right side of the holomorphic Lefschetz identity for
    /// point counts `n`, total curve term `alpha = Σ(1 - g)`.
    pub fn residual(p: u32, n: &[BigRational], alpha: &BigRational) -> Result<Cyclotomic> {
        let columns = system_columns(p)?;
        if n.len() > columns.len() - 2 {
            return Err(Error::TypeOutOfRange { p, t: n.len() as u32 });
        }
        let mut rhs = columns[columns.len() - 2].scale(alpha);
        for (count, c) in n.iter().zip(&columns) {
            rhs = &rhs + &c.scale(count);
        }
        columns[columns.len() - 1].try_sub(&rhs)
    }
}

/// Solves for the point counts as functions of `α = Σ(1 - g(C))`, then uses
/// the topological count `n + 2α = 2 + r - (22 - r)/(p - 1)` to express `α` in `r`.
pub fn solve_table1(p: u32) -> Result<LefschetzSolution> {
    check_supported(p)?;
    static SOLUTIONS: OnceLock<BTreeMap<u32, Result<LefschetzSolution>>> = OnceLock::new();
    SOLUTIONS
        .get_or_init(|| SUPPORTED_PRIMES.iter().map(|&q| (q, solve(q))).collect())
        .get(&p)
        .expect("supported prime")
        .clone()
}

/// Point contributions for each type, then the rational curve term, then the
/// holomorphic Lefschetz number.
fn system_columns(p: u32) -> Result<Vec<Cyclotomic>> {
    static COLUMNS: OnceLock<BTreeMap<u32, Result<Vec<Cyclotomic>>>> = OnceLock::new();
    if let Some(c) = COLUMNS.get_or_init(|| SUPPORTED_PRIMES.iter().map(|&q| (q, columns_for(q))).collect()).get(&p) {
        return c.clone();
    }
    columns_for(p)
}

fn columns_for(p: u32) -> Result<Vec<Cyclotomic>> {
    let types = point_type_count(p);
    let mut columns: Vec<Cyclotomic> = Vec::with_capacity(types + 2);
    if p >= 3 {
        for t in 1..=types as u32 {
            columns.push(local_contribution(p, t)?);
        }
    }
    columns.push(curve_contribution(p, 0)?);
    columns.push(holomorphic_lefschetz_number(p)?);
    Ok(columns)
}

fn solve(p: u32) -> Result<LefschetzSolution> {
    let types = point_type_count(p);
    let dim = p as usize - 1;
    let columns = system_columns(p)?;

    let mut rows: Vec<Vec<BigRational>> =
        (0..dim).map(|i| columns.iter().map(|c| c.coeffs()[i].clone()).collect()).collect();
    let pivots = rref(&mut rows);
    let alpha_col = types;
    let rhs_col = types + 1;
    if pivots.contains(&rhs_col) {
        return Err(Error::InconsistentSystem(format!("no solution for p = {p}")));
    }
    if pivots.contains(&alpha_col) || pivots.len() != types {
        return Err(Error::InconsistentSystem(format!("solution for p = {p} is not a line in α")));
    }

    let point_counts: Vec<LinearInAlpha> = (0..types)
        .map(|t| {
            let row = &rows[pivots.iter().position(|&c| c == t).unwrap()];
            LinearInAlpha { constant: row[rhs_col].clone(), slope: -row[alpha_col].clone() }
        })
        .collect();
    let total_points = LinearInAlpha {
        constant: point_counts.iter().map(|n| n.constant.clone()).sum(),
        slope: point_counts.iter().map(|n| n.slope.clone()).sum(),
    };

    let q = |n: i64| BigRational::from_integer(n.into());
    let pm1 = q(p as i64 - 1);
    let denom = &total_points.slope + q(2);
    let alpha_of_r = AffineInRank {
        slope: (q(1) + q(1) / &pm1) / &denom,
        intercept: (q(2) - q(22) / &pm1 - &total_points.constant) / &denom,
    };
    Ok(LefschetzSolution { p, point_counts, total_points, alpha_of_r })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn local_determinant_examples() {
        let one = Cyclotomic::one(5).unwrap();
        let z3 = Cyclotomic::zeta_pow(5, 3).unwrap();
        assert_eq!(local_determinant(5, 2).unwrap(), (&one - &z3).pow(2));
        assert!(local_determinant(5, 0).is_err());
        assert!(local_determinant(5, 4).is_err());
    }

    #[test]
    fn mirrored_types_agree() {
        for p in [5u32, 7, 11, 13, 17, 19] {
            for t in 1..=p - 2 {
                assert_eq!(local_determinant(p, t).unwrap(), local_determinant(p, p - 1 - t).unwrap());
            }
        }
    }

    #[test]
    fn order_five_line() {
        let s = solve_table1(5).unwrap();
        assert_eq!(s.point_counts[0], LinearInAlpha { constant: q(3), slope: q(2) });
        assert_eq!(s.point_counts[1], LinearInAlpha { constant: q(1), slope: q(1) });
        assert_eq!(s.alpha_of_r.to_string(), "(r-6)/4");
        assert_eq!(s.point_counts[0].to_string(), "2α+3");
    }

    #[test]
    fn involution_has_no_points() {
        let s = solve_table1(2).unwrap();
        assert!(s.point_counts.is_empty());
        assert_eq!(s.alpha_of_r.to_string(), "r-10");
    }

    #[test]
    fn residual_vanishes_on_solution() {
        for &p in &SUPPORTED_PRIMES {
            let s = solve_table1(p).unwrap();
            for a in -2..4 {
                let alpha = q(a);
                assert!(LefschetzSolution::residual(p, &s.points_at(&alpha), &alpha).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn rejects_unsupported() {
        assert_eq!(solve_table1(23), Err(Error::UnsupportedPrime(23)));
        assert_eq!(solve_table1(9), Err(Error::NotPrime(9)));
    }
}
