use std::collections::BTreeMap;

use k3auto::cyclotomic::Cyclotomic;
use k3auto::fibers::{kodaira_type, weighted_invariance, KodairaType, MultiPoly, PolyExpr, WeierstrassModel};
use k3auto::lattice::Lattice;
use k3auto::matrix::{smith_normal_form, IntMatrix};
use k3auto::poly::{factor_rational, squarefree_decomposition, RatPoly};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

const PRIMES: [u32; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

fn config() -> ProptestConfig {
    ProptestConfig { cases: 64, ..ProptestConfig::default() }
}

fn int_matrix(max: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(-6i64..=6, r * c)
            .prop_map(move |v| IntMatrix::from_fn(r, c, |i, j| BigInt::from(v[i * c + j])))
    })
}

/// Symmetric with even diagonal and nonzero determinant.
fn even_lattice(max: usize) -> impl Strategy<Value = Lattice> {
    (1..=max)
        .prop_flat_map(|n| prop::collection::vec(-4i64..=4, n * n).prop_map(move |v| (n, v)))
        .prop_filter_map("degenerate", |(n, v)| {
            let g = IntMatrix::from_fn(n, n, |i, j| {
                let (a, b) = if i <= j { (i, j) } else { (j, i) };
                let x = v[a * n + b];
                BigInt::from(if i == j { 2 * x } else { x })
            });
            Lattice::new(g).ok().filter(|l| !l.determinant().is_zero())
        })
}

fn unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
    // a product of elementary transvections and sign changes
    prop::collection::vec((0..n, 0..n, -2i64..=2, any::<bool>()), 0..8).prop_map(move |ops| {
        let mut m = IntMatrix::identity(n);
        for (i, j, c, flip) in ops {
            let mut e = IntMatrix::identity(n);
            if i != j {
                e = IntMatrix::from_fn(n, n, |r, s| BigInt::from(i64::from(r == s) + if (r, s) == (i, j) { c } else { 0 }));
            } else if flip {
                e = IntMatrix::from_fn(n, n, |r, s| BigInt::from(if r != s { 0 } else if r == i { -1 } else { 1 }));
            }
            m = m.mul(&e).unwrap();
        }
        m
    })
}

fn cyclotomic(p: u32) -> impl Strategy<Value = Cyclotomic> {
    prop::collection::vec(-5i64..=5, p as usize).prop_map(move |c| Cyclotomic::from_int_exponents(p, &c).unwrap())
}

fn field_triple() -> impl Strategy<Value = (Cyclotomic, Cyclotomic, Cyclotomic)> {
    prop::sample::select(PRIMES.to_vec()).prop_flat_map(|p| (cyclotomic(p), cyclotomic(p), cyclotomic(p)))
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn rat_poly(max_degree: usize) -> impl Strategy<Value = RatPoly> {
    prop::collection::vec(rational(), 0..=max_degree + 1).prop_map(RatPoly::from_coeffs)
}

fn small_int_poly(max_degree: usize) -> impl Strategy<Value = RatPoly> {
    prop::collection::vec(-3i64..=3, 1..=max_degree + 1).prop_map(|c| RatPoly::from_ints(&c))
}

fn diag(d: &[BigInt], rows: usize, cols: usize) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |i, j| if i == j && i < d.len() { d[i].clone() } else { BigInt::zero() })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn smith_form_reconstructs(a in int_matrix(5)) {
        let s = smith_normal_form(&a);
        let d = diag(&s.diagonal, a.rows(), a.cols());
        prop_assert_eq!(s.left.mul(&a).unwrap().mul(&s.right).unwrap(), d);
        prop_assert_eq!(s.left.determinant().unwrap().abs(), BigInt::one());
        prop_assert_eq!(s.right.determinant().unwrap().abs(), BigInt::one());
        for w in s.diagonal.windows(2) {
            prop_assert!(w[1].is_zero() || (!w[0].is_zero() && w[1].is_multiple_of(&w[0])));
        }
        prop_assert!(s.diagonal.iter().all(|x| !x.is_negative()));
    }

    #[test]
    fn smith_form_invariant_under_unimodular_change(
        (a, u, v) in int_matrix(4).prop_flat_map(|a| {
            let (r, c) = (a.rows(), a.cols());
            (Just(a), unimodular(r), unimodular(c))
        })
    ) {
        let b = u.mul(&a).unwrap().mul(&v).unwrap();
        prop_assert_eq!(smith_normal_form(&a).diagonal, smith_normal_form(&b).diagonal);
    }

    #[test]
    fn determinant_is_product_of_smith_factors(a in (1usize..=5).prop_flat_map(|n| {
        prop::collection::vec(-6i64..=6, n * n).prop_map(move |v| IntMatrix::from_fn(n, n, |i, j| BigInt::from(v[i * n + j])))
    })) {
        let product: BigInt = smith_normal_form(&a).diagonal.iter().product();
        prop_assert_eq!(a.determinant().unwrap().abs(), product);
    }

    #[test]
    fn direct_sum_is_additive(a in even_lattice(4), b in even_lattice(4)) {
        let s = a.direct_sum(&b);
        prop_assert_eq!(s.rank(), a.rank() + b.rank());
        prop_assert_eq!(s.determinant(), a.determinant() * b.determinant());
        let (sa, sb, ss) = (a.signature(), b.signature(), s.signature());
        prop_assert_eq!(ss.positive, sa.positive + sb.positive);
        prop_assert_eq!(ss.negative, sa.negative + sb.negative);
        let mut disc: Vec<BigInt> = a.invariants().discriminant;
        disc.extend(b.invariants().discriminant);
        let order: BigInt = disc.iter().product();
        let s_order: BigInt = s.invariants().discriminant.iter().product();
        prop_assert_eq!(s_order, s.determinant().abs());
        prop_assert_eq!(order, s.determinant().abs());
    }

    #[test]
    fn invariants_survive_change_of_basis(
        (l, u) in even_lattice(5).prop_flat_map(|l| { let n = l.rank(); (Just(l), unimodular(n)) })
    ) {
        let g = u.transpose().mul(l.gram()).unwrap().mul(&u).unwrap();
        let m = Lattice::new(g).unwrap();
        prop_assert_eq!(l.invariants(), m.invariants());
    }

    #[test]
    fn signature_counts_rank(l in even_lattice(6)) {
        let s = l.signature();
        prop_assert_eq!(s.positive + s.negative, l.rank());
        let sign = if s.negative % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(l.determinant().signum(), BigInt::from(sign));
    }

    #[test]
    fn field_is_a_commutative_ring((a, b, c) in field_triple()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
    }

    #[test]
    fn conjugation_and_norm((a, b, _) in field_triple()) {
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a * &b).norm(), a.norm() * b.norm());
        let re = &a * &a.conj();
        prop_assert_eq!(re.conj(), re);
    }

    #[test]
    fn nonzero_elements_are_invertible((a, b, _) in field_triple()) {
        prop_assume!(!a.is_zero());
        let one = Cyclotomic::one(a.prime()).unwrap();
        prop_assert_eq!(&a * &a.inv().unwrap(), one);
        prop_assert_eq!(&b.try_div(&a).unwrap() * &a, b);
    }

    #[test]
    fn galois_action_is_a_ring_map((a, b, _) in field_triple(), k in 1i64..40) {
        let p = a.prime() as i64;
        prop_assume!(k % p != 0);
        prop_assert_eq!((&a * &b).galois(k).unwrap(), &a.galois(k).unwrap() * &b.galois(k).unwrap());
        prop_assert_eq!(a.galois(-1).unwrap(), a.conj());
    }

    #[test]
    fn division_with_remainder(a in rat_poly(8), b in rat_poly(5)) {
        prop_assume!(!b.is_zero());
        let (q, r) = a.div_rem(&b).unwrap();
        prop_assert_eq!(&(&q * &b) + &r, a);
        prop_assert!(r.is_zero() || r.degree() < b.degree());
    }

    #[test]
    fn factorization_round_trip(fs in prop::collection::vec(small_int_poly(3), 1..=3)) {
        let f = fs.iter().fold(RatPoly::one(), |acc, g| &acc * g);
        prop_assume!(!f.is_zero());
        let fac = factor_rational(&f);
        prop_assert_eq!(fac.expand(), f.clone());
        for (g, k) in &fac.factors {
            prop_assert!(*k >= 1);
            prop_assert!(g.leading().is_one());
            prop_assert!(g.degree().unwrap_or(0) >= 1);
            // an irreducible factor must not split again
            let again = factor_rational(g);
            prop_assert_eq!(again.factors.len(), 1);
        }
        let sq = squarefree_decomposition(&f);
        for (g, _) in &sq {
            prop_assert!(g.gcd(&g.derivative()).degree() == Some(0));
        }
    }

    #[test]
    fn expression_round_trip(f in rat_poly(10)) {
        let parsed = PolyExpr::parse(&f.to_string()).unwrap();
        prop_assert_eq!(parsed.eval(&BTreeMap::new()).unwrap(), f);
    }

    #[test]
    fn discriminant_orders_sum_to_24(f in small_int_poly(3), g in small_int_poly(4)) {
        let Ok(model) = WeierstrassModel::new(f, g) else { return Ok(()) };
        let delta = model.discriminant();
        let (_, _, at_inf) = model.at_infinity();
        prop_assert_eq!(delta.degree().unwrap() as u32 + at_inf.order_at_zero().unwrap(), 24);
        if let Ok(report) = model.classify_fibers() {
            prop_assert_eq!(report.euler_total, 24);
        }
    }

    #[test]
    fn kodaira_names_round_trip(f in prop::option::of(0u32..5), g in prop::option::of(0u32..7), d in 0u32..14) {
        if let Ok(Some(k)) = kodaira_type(f, g, d) {
            prop_assert_eq!(k.to_string().parse::<KodairaType>().unwrap(), k);
            prop_assert_eq!(k.euler(), d);
        }
    }

    #[test]
    fn invariance_depends_only_on_the_action_subgroup(
        p in prop::sample::select(vec![3u32, 5, 7, 11, 13, 17, 19]),
        exps in prop::collection::vec(prop::collection::vec(0u32..6, 3), 1..5),
        weights in prop::collection::vec(0i64..19, 3),
        unit in 1i64..19,
    ) {
        prop_assume!(unit % p as i64 != 0);
        let mut poly = MultiPoly::zero(p, 3).unwrap();
        for e in &exps {
            let mut m = MultiPoly::constant(3, Cyclotomic::one(p).unwrap());
            for (i, &k) in e.iter().enumerate() {
                m = &m * &MultiPoly::var(p, 3, i).unwrap().pow(k);
            }
            poly = &poly + &m;
        }
        let first = &exps[0];
        let character: i64 = first.iter().zip(&weights).map(|(&k, &w)| k as i64 * w).sum();
        let before = weighted_invariance(&poly, p, &weights, character);
        let scaled: Vec<i64> = weights.iter().map(|w| w * unit).collect();
        prop_assert_eq!(before, weighted_invariance(&poly, p, &scaled, character * unit));
        // a single monomial is always semi-invariant for its own character
        if exps.iter().all(|e| e == first) {
            prop_assert!(before);
        }
    }
}
