//! Dense polynomials over F_p for word-sized primes, lowest degree first.

use rand::Rng;

pub(crate) type Fp = Vec<u64>;

pub(crate) fn trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub(crate) fn degree(a: &Fp) -> Option<usize> {
    a.len().checked_sub(1)
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

#[cfg(test)]
pub(crate) fn add(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| (a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)) % p).collect())
}

pub(crate) fn sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| (a.get(i).unwrap_or(&0) + p - b.get(i).unwrap_or(&0)) % p).collect())
}

pub(crate) fn mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
        }
    }
    trim(out)
}

pub(crate) fn scale(a: &Fp, c: u64, p: u64) -> Fp {
    trim(a.iter().map(|&x| mulmod(x, c, p)).collect())
}

pub(crate) fn div_rem(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let db = degree(b).expect("division by zero polynomial");
    let inv = inv_mod(*b.last().unwrap(), p);
    let mut rem = a.clone();
    let mut quot = vec![0u64; a.len().saturating_sub(db)];
    while rem.len() > db && !rem.is_empty() {
        let k = rem.len() - 1 - db;
        let c = mulmod(*rem.last().unwrap(), inv, p);
        if c != 0 {
            for (i, &y) in b.iter().enumerate() {
                rem[k + i] = (rem[k + i] + p - mulmod(c, y, p)) % p;
            }
        }
        quot[k] = c;
        rem.pop();
    }
    (trim(quot), trim(rem))
}

pub(crate) fn rem(a: &Fp, b: &Fp, p: u64) -> Fp {
    div_rem(a, b, p).1
}

pub(crate) fn monic(a: &Fp, p: u64) -> Fp {
    match a.last() {
        Some(&l) => scale(a, inv_mod(l, p), p),
        None => Vec::new(),
    }
}

pub(crate) fn gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(&x, p)
}

/// `(s, t)` with `s a + t b = 1` for coprime `a`, `b`.
pub(crate) fn bezout(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = div_rem(&r0, &r1, p);
        r0 = std::mem::replace(&mut r1, r);
        let s = sub(&s0, &mul(&q, &s1, p), p);
        s0 = std::mem::replace(&mut s1, s);
        let t = sub(&t0, &mul(&q, &t1, p), p);
        t0 = std::mem::replace(&mut t1, t);
    }
    assert_eq!(degree(&r0), Some(0), "bezout requires coprime inputs");
    let inv = inv_mod(r0[0], p);
    (scale(&s0, inv, p), scale(&t0, inv, p))
}

pub(crate) fn derivative(a: &Fp, p: u64) -> Fp {
    trim(a.iter().enumerate().skip(1).map(|(i, &c)| mulmod(c, i as u64 % p, p)).collect())
}

fn powmod_poly(base: &Fp, mut e: u128, m: &Fp, p: u64) -> Fp {
    let mut result = vec![1u64];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = rem(&mul(&result, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        e >>= 1;
    }
    result
}

/// Raises `base` to `p^k` modulo `m` by repeated Frobenius.
fn frobenius_pow(base: &Fp, k: usize, m: &Fp, p: u64) -> Fp {
    let mut r = rem(base, m, p);
    for _ in 0..k {
        r = powmod_poly(&r, p as u128, m, p);
    }
    r
}

/// Distinct-degree factorization of a monic squarefree polynomial.
fn distinct_degree(f: &Fp, p: u64) -> Vec<(Fp, usize)> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = vec![0u64, 1];
    let mut h = x.clone();
    let mut d = 0;
    while degree(&rest).is_some_and(|deg| deg >= 2 * (d + 1)) {
        d += 1;
        h = frobenius_pow(&h, 1, &rest, p);
        let g = gcd(&sub(&h, &x, p), &rest, p);
        if degree(&g) != Some(0) {
            out.push((g.clone(), d));
            rest = div_rem(&rest, &g, p).0;
            h = rem(&h, &rest, p);
        }
    }
    if degree(&rest).is_some_and(|deg| deg > 0) {
        let deg = degree(&rest).unwrap();
        out.push((rest, deg));
    }
    out
}

/// Splits a product of distinct monic irreducibles of degree `d` (odd `p`).
fn equal_degree<R: Rng>(f: &Fp, d: usize, p: u64, rng: &mut R) -> Vec<Fp> {
    let n = degree(f).unwrap();
    if n == d {
        return vec![f.clone()];
    }
    loop {
        let a: Fp = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if degree(&a).is_none_or(|k| k == 0) {
            continue;
        }
        let g = gcd(&a, f, p);
        let split = if degree(&g).is_some_and(|k| k > 0 && k < n) {
            g
        } else {
            // a^((p^d - 1)/2) = (a * a^p * ... * a^(p^(d-1)))^((p - 1)/2)
            let mut conj = rem(&a, f, p);
            let mut norm = conj.clone();
            for _ in 1..d {
                conj = frobenius_pow(&conj, 1, f, p);
                norm = rem(&mul(&norm, &conj, p), f, p);
            }
            let b = powmod_poly(&norm, ((p - 1) / 2) as u128, f, p);
            gcd(&sub(&b, &vec![1], p), f, p)
        };
        if degree(&split).is_some_and(|k| k > 0 && k < n) {
            let other = div_rem(f, &split, p).0;
            let mut out = equal_degree(&split, d, p, rng);
            out.extend(equal_degree(&other, d, p, rng));
            return out;
        }
    }
}

/// Monic irreducible factors of a monic squarefree polynomial over F_p, p odd.
pub(crate) fn factor_squarefree<R: Rng>(f: &Fp, p: u64, rng: &mut R) -> Vec<Fp> {
    let mut out = Vec::new();
    for (g, d) in distinct_degree(f, p) {
        out.extend(equal_degree(&g, d, p, rng));
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn factors_multiply_back() {
        let p = 7;
        // (x+1)(x+2)(x^2+1) over F_7; x^2+1 is irreducible since 7 = 3 mod 4
        let f = mul(&mul(&vec![1, 1], &vec![2, 1], p), &vec![1, 0, 1], p);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let factors = factor_squarefree(&f, p, &mut rng);
        assert_eq!(factors.len(), 3);
        let prod = factors.iter().fold(vec![1u64], |acc, g| mul(&acc, g, p));
        assert_eq!(prod, f);
    }

    #[test]
    fn bezout_identity() {
        let p = 11;
        let a = vec![3, 0, 1];
        let b = vec![1, 1];
        let (s, t) = bezout(&a, &b, p);
        assert_eq!(add(&mul(&s, &a, p), &mul(&t, &b, p), p), vec![1]);
        assert_eq!(derivative(&vec![1, 2, 3], p), vec![2, 6]);
    }
}
