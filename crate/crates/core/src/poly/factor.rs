//! Factorization over Q: squarefree decomposition followed by modular
//! factorization, Hensel lifting and recombination of the lifted factors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::modp::{self, Fp};
use super::RatPoly;
use crate::lattice::is_prime;

/// `unit * prod(factor^multiplicity)` with monic irreducible factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: BigRational,
    pub factors: Vec<(RatPoly, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> RatPoly {
        self.factors
            .iter()
            .fold(RatPoly::constant(self.unit.clone()), |acc, (f, k)| &acc * &f.pow(*k))
    }
}

/// Monic squarefree parts `a_i` with `f = lc * prod a_i^i` (Yun's algorithm).
pub fn squarefree_decomposition(f: &RatPoly) -> Vec<(RatPoly, u32)> {
    let mut out = Vec::new();
    if f.degree().is_none_or(|d| d == 0) {
        return out;
    }
    let f = f.monic();
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.exact_div(&a0).expect("gcd divides");
    let c = df.exact_div(&a0).expect("gcd divides");
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while b.degree().is_some_and(|k| k > 0) {
        let a = b.gcd(&d);
        let next_b = b.exact_div(&a).expect("gcd divides");
        let next_c = d.exact_div(&a).expect("gcd divides");
        if a.degree().is_some_and(|k| k > 0) {
            out.push((a, i));
        }
        d = &next_c - &next_b.derivative();
        b = next_b;
        i += 1;
    }
    out
}

pub fn factor_rational(f: &RatPoly) -> Factorization {
    let unit = f.leading();
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decomposition(f) {
        let (_, prim) = part.primitive_integer();
        for g in factor_squarefree_integer(&prim) {
            factors.push((RatPoly::from_integer_coeffs(&g).monic(), mult));
        }
    }
    factors.sort_by(|(a, ka), (b, kb)| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| a.coeffs().cmp(b.coeffs()))
            .then(ka.cmp(kb))
    });
    Factorization { unit, factors }
}

const PRIME_TRIALS: usize = 6;

/// Irreducible primitive factors of a squarefree primitive integer polynomial.
fn factor_squarefree_integer(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let mut f = f.to_vec();
    let mut out = Vec::new();
    if f.len() > 2 && f[0].is_zero() {
        out.push(vec![BigInt::zero(), BigInt::one()]);
        f.remove(0);
    }
    if f.len() <= 2 {
        out.push(f);
        return out;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut best: Option<(u64, Vec<Fp>)> = None;
    let mut tried = 0;
    for p in (3u64..).filter(|&p| is_prime(p)).take(60) {
        let lc = f.last().unwrap();
        if lc.is_multiple_of(&BigInt::from(p)) {
            continue;
        }
        let fp = reduce(&f, p);
        if modp::degree(&modp::gcd(&fp, &modp::derivative(&fp, p), p)) != Some(0) {
            continue;
        }
        let facs = modp::factor_squarefree(&modp::monic(&fp, p), p, &mut rng);
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= PRIME_TRIALS || best.as_ref().is_some_and(|(_, b)| b.len() == 1) {
            break;
        }
    }
    let (p, local) = best.expect("some prime keeps the polynomial squarefree");
    if local.len() == 1 {
        out.push(f);
        return out;
    }

    let bound = coefficient_bound(&f);
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut modulus = pb.clone();
    while modulus <= bound {
        modulus *= &pb;
        k += 1;
    }
    let lifted = hensel_lift(&f, &local, p, k);
    out.extend(recombine(f, lifted, &modulus));
    out
}

/// `2 |lc| 2^n ||f||_2`, enough to recognise any true factor scaled by `lc`.
fn coefficient_bound(f: &[BigInt]) -> BigInt {
    let n = f.len() - 1;
    let norm_sq: BigInt = f.iter().map(|c| c * c).sum();
    let norm = norm_sq.sqrt() + BigInt::one();
    BigInt::from(2) * f.last().unwrap().abs() * (BigInt::one() << n) * norm
}

fn reduce(f: &[BigInt], p: u64) -> Fp {
    let pb = BigInt::from(p);
    modp::trim(f.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect())
}

fn to_int(f: &Fp) -> Vec<BigInt> {
    f.iter().map(|&c| BigInt::from(c)).collect()
}

fn int_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn int_mod(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = a.iter().map(|c| c.mod_floor(m)).collect();
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

/// Lifts `f = lc * prod g_i (mod p)` with monic `g_i` to the same shape modulo `p^k`.
fn hensel_lift(f: &[BigInt], local: &[Fp], p: u64, k: u32) -> Vec<Vec<BigInt>> {
    let pk = BigInt::from(p).pow(k);
    let mut current = f.to_vec();
    let mut out = Vec::new();
    for j in 0..local.len() - 1 {
        let g0 = local[j].clone();
        let lc_mod = reduce(&[current.last().unwrap().clone()], p);
        let rest = local[j + 1..].iter().fold(lc_mod, |acc, g| modp::mul(&acc, g, p));
        let (g, h) = lift_pair(&current, &g0, &rest, p, k);
        out.push(int_mod(&g, &pk));
        current = int_mod(&h, &pk);
    }
    let lc = current.last().unwrap().clone();
    let inv = lc.modinv(&pk).expect("leading coefficient is a unit");
    out.push(int_mod(&current.iter().map(|c| c * &inv).collect::<Vec<_>>(), &pk));
    out
}

/// Lifts `f = g0 * h0 (mod p)`, `g0` monic, to `f = g * h (mod p^k)`.
fn lift_pair(f: &[BigInt], g0: &Fp, h0: &Fp, p: u64, k: u32) -> (Vec<BigInt>, Vec<BigInt>) {
    let (_, t) = modp::bezout(g0, h0, p);
    let pb = BigInt::from(p);
    let mut g = to_int(g0);
    let mut h = to_int(h0);
    *h.last_mut().unwrap() = f.last().unwrap().clone();
    let mut pi = pb.clone();
    for _ in 1..k {
        let next = &pi * &pb;
        let gh = int_mul(&g, &h);
        let n = f.len().max(gh.len());
        let diff: Vec<BigInt> = (0..n)
            .map(|i| f.get(i).cloned().unwrap_or_default() - gh.get(i).cloned().unwrap_or_default())
            .collect();
        let e: Vec<BigInt> = int_mod(&diff, &next).iter().map(|c| c / &pi).collect();
        let e = reduce(&e, p);
        let dg = modp::rem(&modp::mul(&t, &e, p), g0, p);
        let dh = modp::div_rem(&modp::sub(&e, &modp::mul(&dg, h0, p), p), g0, p).0;
        for (i, c) in dg.iter().enumerate() {
            g[i] += &pi * BigInt::from(*c);
        }
        for (i, c) in dh.iter().enumerate() {
            h[i] += &pi * BigInt::from(*c);
        }
        pi = next;
    }
    (g, h)
}

fn symmetric(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m / 2;
    a.iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect()
}

fn primitive(a: Vec<BigInt>) -> Vec<BigInt> {
    let mut g = a.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return a;
    }
    if a.last().unwrap().is_negative() {
        g = -g;
    }
    a.into_iter().map(|c| c / &g).collect()
}

/// Exact quotient over Z, or `None`.
fn int_div_exact(f: &[BigInt], d: &[BigInt]) -> Option<Vec<BigInt>> {
    let dd = d.len() - 1;
    let lead = d.last().unwrap();
    let mut rem = f.to_vec();
    if rem.len() < d.len() {
        return None;
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    while rem.len() > dd {
        let top = rem.last().unwrap().clone();
        let (q, r) = top.div_rem(lead);
        if !r.is_zero() {
            return None;
        }
        let k = rem.len() - 1 - dd;
        for (i, c) in d.iter().enumerate() {
            rem[k + i] -= &q * c;
        }
        quot[k] = q;
        rem.pop();
    }
    rem.iter().all(Zero::is_zero).then_some(quot)
}

fn recombine(mut f: Vec<BigInt>, mut lifted: Vec<Vec<BigInt>>, modulus: &BigInt) -> Vec<Vec<BigInt>> {
    let mut out = Vec::new();
    let mut s = 1;
    'outer: while 2 * s <= lifted.len() {
        for subset in combinations(lifted.len(), s) {
            let lc = f.last().unwrap().clone();
            let prod = subset.iter().fold(vec![lc], |acc, &i| int_mod(&int_mul(&acc, &lifted[i]), modulus));
            let cand = primitive(symmetric(&prod, modulus));
            if let Some(q) = int_div_exact(&f, &cand) {
                out.push(cand);
                f = q;
                for &i in subset.iter().rev() {
                    lifted.remove(i);
                }
                continue 'outer;
            }
        }
        s += 1;
    }
    out.push(primitive(f));
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else { return out };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> RatPoly {
        RatPoly::from_ints(c)
    }

    #[test]
    fn yun_separates_multiplicities() {
        // (t - 1)^3 (t + 2)^2 t
        let f = &(&poly(&[-1, 1]).pow(3) * &poly(&[2, 1]).pow(2)) * &RatPoly::x();
        let parts = squarefree_decomposition(&f);
        assert_eq!(parts, vec![(RatPoly::x(), 1), (poly(&[2, 1]), 2), (poly(&[-1, 1]), 3)]);
    }

    #[test]
    fn cyclotomic_factors_of_t12_minus_1() {
        let fac = factor_rational(&poly(&[-1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]));
        let degrees: Vec<usize> = fac.factors.iter().map(|(f, _)| f.degree().unwrap()).collect();
        assert_eq!(degrees, vec![1, 1, 2, 2, 2, 4]);
        assert_eq!(fac.expand(), poly(&[-1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]));
    }

    #[test]
    fn swinnerton_dyer_style_irreducible() {
        // t^4 - 10 t^2 + 1 splits modulo every prime but is irreducible over Q
        let fac = factor_rational(&poly(&[1, 0, -10, 0, 1]));
        assert_eq!(fac.factors.len(), 1);
    }

    #[test]
    fn non_monic_rational_input() {
        // (2t - 1)(3t^2 + 1) / 5
        let f = (&poly(&[-1, 2]) * &poly(&[1, 0, 3])).scale(&BigRational::new(1.into(), 5.into()));
        let fac = factor_rational(&f);
        assert_eq!(fac.factors.len(), 2);
        assert_eq!(fac.expand(), f);
    }
}
