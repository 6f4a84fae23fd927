//! End-to-end checks of computed output against the shipped reference data,
//! grouped into ten numbered criteria.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::appendix::appendix_checks;
use crate::classify::{
    admissible_pairs, classification_table, euler_target, irreducible_components, moduli_dimension, ClassificationRow,
    SpecialLocus,
};
use crate::cyclotomic::Cyclotomic;
use crate::error::Result;
use crate::fibers::catalog::DEFAULT_SEED;
use crate::fibers::invariance::{
    sextic_a_members, sextic_b_coefficients, sextic_family_a, sextic_family_b, weierstrass_invariance,
    SEXTIC_A_WEIGHTS, SEXTIC_B_WEIGHTS,
};
use crate::fibers::{example_catalog, weighted_invariance, PolyExpr};
use crate::lattice::{parse_lattice_expr, Elementary, Lattice, Signature};
use crate::lefschetz::{solve_table1, LefschetzSolution, LinearInAlpha, SUPPORTED_PRIMES};
use crate::matrix::{smith_normal_form, IntMatrix};
use crate::poly::RatPoly;
use crate::reference::{self, TableConvention};

/// Seed of the randomized property checks.
pub const PROPERTY_SEED: u64 = 20_240_601;
const PROPERTY_CASES: usize = 100;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub checks: usize,
    pub failures: Vec<String>,
}

/// Collects individual comparisons for one criterion.
#[derive(Default)]
struct Tally {
    checks: usize,
    failures: Vec<String>,
}

impl Tally {
    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, what: &str, expected: T, actual: T) {
        let ok = expected == actual;
        self.expect(ok, || format!("{what}: expected {expected:?}, got {actual:?}"));
    }
}

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "Lefschetz point counts"),
    (2, "classification tables"),
    (3, "order 2 and 3 charts"),
    (4, "lattice catalog"),
    (5, "Euler and Lefschetz consistency"),
    (6, "fiber catalog"),
    (7, "invariance checks"),
    (8, "order 7 isometry"),
    (9, "moduli components"),
    (10, "property suites"),
];

pub fn run(id: u8) -> CriterionResult {
    let name = CRITERIA.iter().find(|(i, _)| *i == id).map_or("unknown", |(_, n)| n);
    let mut tally = Tally::default();
    let outcome = match id {
        1 => lefschetz_lines(&mut tally, None),
        2 => tables(&mut tally, None),
        3 => charts(&mut tally),
        4 => lattice_catalog(&mut tally),
        5 => consistency(&mut tally),
        6 => fibers(&mut tally),
        7 => invariance(&mut tally),
        8 => appendix(&mut tally),
        9 => moduli(&mut tally, None),
        10 => properties(&mut tally),
        _ => {
            tally.expect(false, || format!("no criterion {id}"));
            Ok(())
        }
    };
    if let Err(e) = outcome {
        tally.expect(false, || format!("error: {e}"));
    }
    finish(id, name, tally)
}

fn finish(id: u8, name: &'static str, tally: Tally) -> CriterionResult {
    CriterionResult { id, name, pass: tally.failures.is_empty(), checks: tally.checks, failures: tally.failures }
}

/// Criteria 1, 2 and 9 restricted to a single prime; other ids run in full.
pub fn run_for_prime(id: u8, p: u32) -> CriterionResult {
    let name = CRITERIA.iter().find(|(i, _)| *i == id).map_or("unknown", |(_, n)| n);
    let mut tally = Tally::default();
    let outcome = match id {
        1 => lefschetz_lines(&mut tally, Some(p)),
        2 => tables(&mut tally, Some(p)),
        9 => moduli(&mut tally, Some(p)),
        _ => return run(id),
    };
    if let Err(e) = outcome {
        tally.expect(false, || format!("error: {e}"));
    }
    finish(id, name, tally)
}

pub fn run_all() -> Vec<CriterionResult> {
    CRITERIA.iter().map(|&(id, _)| run(id)).collect()
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Evaluates a formula in the named variables to a rational constant.
fn evaluate(formula: &str, vars: &[(&str, i64)]) -> Result<BigRational> {
    let bindings: BTreeMap<String, BigRational> = vars.iter().map(|&(k, v)| (k.to_string(), q(v))).collect();
    let value = PolyExpr::parse(formula)?.eval(&bindings)?;
    Ok(value.coeff(0))
}

/// Reads an affine formula in one variable as `(constant, slope)`.
fn affine(formula: &str, var: &str) -> Result<(BigRational, BigRational)> {
    let c = evaluate(formula, &[(var, 0)])?;
    let s = evaluate(formula, &[(var, 1)])? - &c;
    let check = evaluate(formula, &[(var, 2)])?;
    if check != &c + &s * q(2) {
        return Err(crate::Error::Reference(format!("`{formula}` is not affine in {var}")));
    }
    Ok((c, s))
}

fn lefschetz_lines(t: &mut Tally, only: Option<u32>) -> Result<()> {
    let data = reference::lefschetz_lines()?;
    if only.is_none() {
        t.eq("primes covered", SUPPORTED_PRIMES.to_vec(), data.rows.iter().map(|r| r.p).collect());
    }
    for row in data.rows.iter().filter(|r| only.is_none_or(|p| p == r.p)) {
        let s = solve_table1(row.p)?;
        let (c, k) = affine(&row.alpha, "r")?;
        t.eq(&format!("p={} alpha(r)", row.p), (k, c), (s.alpha_of_r.slope.clone(), s.alpha_of_r.intercept.clone()));
        t.eq(&format!("p={} number of types", row.p), row.n.len(), s.point_counts.len());
        for (i, (text, got)) in row.n.iter().zip(&s.point_counts).enumerate() {
            let (constant, slope) = affine(text, "a")?;
            t.eq(&format!("p={} n_{}", row.p, i + 1), LinearInAlpha { constant, slope }, got.clone());
        }
        let (constant, slope) = affine(&row.total, "a")?;
        t.eq(&format!("p={} total", row.p), LinearInAlpha { constant, slope }, s.total_points.clone());
    }
    Ok(())
}

/// `(g, k)` in the genus-and-rational convention, `None` without fixed curves.
fn genus_view(row: &ClassificationRow) -> (Option<u32>, Option<u32>) {
    if row.profile.curve_genera.is_empty() {
        return (None, None);
    }
    let g = row.g_thm.map(|g| g as u32);
    let k = row.k_thm.map(|k| k as u32);
    (g, k)
}

fn tables(t: &mut Tally, only: Option<u32>) -> Result<()> {
    let data = reference::classification_tables()?;
    let keep = |p: u32| only.is_none_or(|q| q == p);
    for table in data.tables.iter().filter(|x| keep(x.p)) {
        let p = table.p;
        let rows = classification_table(p)?;
        t.eq(&format!("p={p} row count"), table.rows.len(), rows.len());
        for (i, (want, got)) in table.rows.iter().zip(&rows).enumerate() {
            let at = format!("p={p} row {}", i + 1);
            t.eq(&format!("{at} n_t"), want.n.clone(), got.profile.points.clone());
            t.eq(&format!("{at} S"), Some(want.s.clone()), got.s_name.clone());
            t.eq(&format!("{at} T"), Some(want.t.clone()), got.t_name.clone());
            match table.convention {
                TableConvention::GenusAndRational => {
                    t.eq(&format!("{at} (g, k)"), (want.g, want.k), genus_view(got));
                    t.eq(
                        &format!("{at} curve decomposition"),
                        want.g.zip(want.k),
                        got.profile.curve_and_rationals(),
                    );
                }
                TableConvention::RationalCount => {
                    t.eq(&format!("{at} rational curves"), want.k, Some(got.profile.rational_curve_count() as u32));
                }
            }
        }
    }
    for form in data.closed_forms.rows.iter().filter(|x| keep(x.p)) {
        let p = form.p;
        for row in classification_table(p)? {
            if row.profile.special != SpecialLocus::Generic {
                continue;
            }
            let vars = [("p", p as i64), ("r", row.r as i64), ("a", row.a as i64)];
            let at = format!("p={p} (r,a)=({},{})", row.r, row.a);
            t.eq(&format!("{at} closed form n"), evaluate(&form.n, &vars)?, q(row.profile.n as i64));
            let k = evaluate(&form.k, &vars)?;
            if p >= 13 {
                t.eq(&format!("{at} closed form k"), k, q(row.profile.rational_curve_count() as i64));
            } else {
                t.eq(&format!("{at} closed form k"), Some(k), row.k_thm.map(q));
            }
        }
    }
    Ok(())
}

fn charts(t: &mut Tally) -> Result<()> {
    let pts = reference::order3_points()?;
    let rows = classification_table(3)?;
    let computed: BTreeSet<(u32, u32)> = admissible_pairs(3)?.iter().map(|&(r, a)| ((22 - r) / 2, a)).collect();
    let plotted: BTreeSet<(u32, u32)> = pts.points.iter().copied().collect();
    t.eq("order 3 point set", plotted, computed);
    for row in &rows {
        let (m, a) = (row.m as i64, row.a as i64);
        let at = format!("p=3 (m,a)=({m},{a})");
        t.eq(&format!("{at} n"), 10 - m, row.profile.n as i64);
        t.eq(&format!("{at} g"), Some((m - a) / 2), row.g_thm);
        t.eq(&format!("{at} k"), Some(6 - (m + a) / 2), row.k_thm);
        if m == 7 && a == 7 {
            t.eq("three isolated points only", (3, true), (row.profile.n, row.profile.curve_genera.is_empty()));
        }
    }
    // n depends on m alone, so its labels sit on the axis
    let find = |m: u32, a: Option<u32>| rows.iter().find(|r| r.m == m && a.is_none_or(|a| r.a == a));
    for (labels, what) in [(&pts.k_labels, "k"), (&pts.g_labels, "g"), (&pts.n_labels, "n")] {
        for l in labels {
            let row = find(l.m, (what != "n").then_some(l.a));
            let got = row.map(|r| match what {
                "k" => r.k_thm.unwrap_or(-99),
                "g" => r.g_thm.unwrap_or(-99),
                _ => r.profile.n as i64,
            });
            t.eq(&format!("p=3 label {what} at (m,a)=({},{})", l.m, l.a), Some(l.value as i64), got);
        }
    }

    let inv = reference::involution_triples()?;
    let rows = classification_table(2)?;
    t.eq("order 2 triple count", inv.triples.len(), rows.len());
    for row in &rows {
        let (r, a, delta) = (row.r, row.a, row.delta.unwrap_or(9));
        let at = format!("p=2 (r,a,delta)=({r},{a},{delta})");
        match (r, a, delta) {
            (10, 10, 0) => t.eq(&format!("{at} empty"), Vec::<u32>::new(), row.profile.curve_genera.clone()),
            (10, 8, 0) => t.eq(&format!("{at} two elliptic curves"), vec![1, 1], row.profile.curve_genera.clone()),
            _ => {
                let want = Some(((22 - r - a) / 2, (r - a) / 2));
                t.eq(&format!("{at} (g,k)"), want, row.profile.curve_and_rationals());
            }
        }
    }
    let find = |r: u32, a: u32| rows.iter().find(|x| x.r == r && x.a == a && x.profile.special == SpecialLocus::Generic);
    for l in &inv.genus_labels {
        let got = find(l.r, l.a).and_then(|x| x.profile.curve_and_rationals()).map(|(g, _)| g);
        t.eq(&format!("p=2 genus label at ({},{})", l.r, l.a), Some(l.g), got);
    }
    for l in &inv.rational_labels {
        let got = find(l.r, l.a).and_then(|x| x.profile.curve_and_rationals()).map(|(_, k)| k);
        t.eq(&format!("p=2 rational label at ({},{})", l.r, l.a), Some(l.k), got);
    }
    Ok(())
}

fn lattice_catalog(t: &mut Tally) -> Result<()> {
    let data = reference::lattice_catalog()?;
    for entry in &data.entries {
        let l = parse_lattice_expr(&entry.expr)?;
        let inv = l.invariants();
        let rank = inv.rank;
        let signature = match entry.kind.as_str() {
            "hyperbolic" => Signature { positive: 1, negative: rank - 1 },
            _ => Signature { positive: 0, negative: rank },
        };
        t.eq(&format!("{} signature", entry.expr), signature, inv.signature);
        match (entry.elementary.as_deref(), entry.p, entry.a) {
            (Some("unimodular"), _, _) => {
                t.eq(&format!("{} unimodular", entry.expr), Some(Elementary::Unimodular), inv.elementary);
                t.eq(&format!("{} |det|", entry.expr), BigInt::one(), inv.det.abs());
            }
            (_, Some(p), Some(a)) => {
                t.eq(&format!("{} elementary", entry.expr), Some(Elementary::Prime { p, a }), inv.elementary);
                t.eq(&format!("{} |det|", entry.expr), BigInt::from(p).pow(a as u32), inv.det.abs());
            }
            _ => t.expect(false, || format!("{}: incomplete catalog entry", entry.expr)),
        }
        if let Some(other) = &entry.same_as {
            let o = parse_lattice_expr(other)?;
            t.eq(&format!("{} Gram equals {other}", entry.expr), o.gram(), l.gram());
        }
    }
    let e8_2 = parse_lattice_expr("E8(2)")?.invariants();
    t.eq("E8(2) elementary", Some(Elementary::Prime { p: 2, a: 8 }), e8_2.elementary);
    let u2 = parse_lattice_expr("U(2)")?.invariants();
    t.eq("U(2) delta", Some(0), u2.delta);
    let literal = parse_lattice_expr("A4*5")?.invariants();
    let dual = parse_lattice_expr("A4*(5)")?.invariants();
    t.eq("A4*5 and A4*(5) invariants", literal.to_string(), dual.to_string());
    Ok(())
}

fn consistency(t: &mut Tally) -> Result<()> {
    for &p in &SUPPORTED_PRIMES {
        for row in classification_table(p)? {
            let at = format!("p={p} (r,a)=({},{})", row.r, row.a);
            t.eq(&format!("{at} Euler"), euler_target(&row), row.profile.euler_characteristic());
            t.eq(
                &format!("{at} n + 2 alpha"),
                2 + row.r as i64 - row.m as i64,
                row.profile.n as i64 + 2 * row.profile.alpha,
            );
            if p > 2 {
                let n: Vec<BigRational> = row.profile.points.iter().map(|&x| q(x as i64)).collect();
                let residual = LefschetzSolution::residual(p, &n, &q(row.profile.alpha))?;
                t.expect(residual.is_zero(), || format!("{at} holomorphic Lefschetz residual {residual}"));
            }
        }
    }
    Ok(())
}

fn fibers(t: &mut Tally) -> Result<()> {
    for entry in example_catalog() {
        let out = entry.verify(DEFAULT_SEED)?;
        t.expect(out.matches, || format!("example {}: expected {}, got {}", entry.key, out.expected, out.summary));
        t.eq(&format!("example {} Euler sum", entry.key), 24, out.report.euler_total);
        if !entry.generic.is_empty() {
            let again = entry.verify(DEFAULT_SEED + 1)?;
            t.eq(&format!("example {} reseeded", entry.key), out.summary.clone(), again.summary);
        }
    }
    Ok(())
}

fn invariance(t: &mut Tally) -> Result<()> {
    for entry in example_catalog() {
        let model = entry.instantiate(DEFAULT_SEED, &BTreeMap::new())?;
        t.expect(weierstrass_invariance(&model, &entry.action)?, || {
            format!("example {}: action {:?} does not preserve the model", entry.key, entry.action)
        });
    }
    for (name, lambdas) in sextic_a_members()? {
        let s = sextic_family_a(&lambdas)?;
        t.expect(weighted_invariance(&s, 5, &SEXTIC_A_WEIGHTS, 0), || format!("family A member {name}"));
    }
    let b = sextic_family_b(&sextic_b_coefficients()?)?;
    t.expect(weighted_invariance(&b, 5, &SEXTIC_B_WEIGHTS, 0), || "family B".to_string());
    Ok(())
}

fn appendix(t: &mut Tally) -> Result<()> {
    for c in appendix_checks()? {
        t.expect(c.pass, || format!("{}: expected {}, got {}", c.name, c.expected, c.actual));
    }
    Ok(())
}

fn moduli(t: &mut Tally, only: Option<u32>) -> Result<()> {
    let data = reference::moduli_components()?;
    if only.is_none() {
        t.eq("primes covered", SUPPORTED_PRIMES.to_vec(), data.components.iter().map(|c| c.p).collect());
    }
    for entry in data.components.iter().filter(|c| only.is_none_or(|p| p == c.p)) {
        let p = entry.p;
        let comps = irreducible_components(p)?;
        t.eq(&format!("p={p} count"), entry.count, comps.len());
        t.eq(&format!("p={p} dimensions"), entry.dims.clone(), comps.iter().map(|c| c.dimension).collect());
        let rows = classification_table(p)?;
        for c in &comps {
            let row = rows.iter().find(|r| r.r == c.r && r.a == c.a && (p != 2 || r.delta == c.delta));
            t.eq(
                &format!("p={p} {} matches a table row", c.s_name),
                Some(c.dimension),
                row.map(moduli_dimension),
            );
        }
    }
    Ok(())
}

fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            continue;
        }
        let c: i64 = rng.gen_range(-2..=2);
        let e = IntMatrix::from_fn(n, n, |r, s| {
            BigInt::from(if r == s {
                1
            } else if r == i && s == j {
                c
            } else {
                0
            })
        });
        m = m.mul(&e).expect("square");
    }
    m
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(-6..=6i64)))
}

fn random_lattice(rng: &mut ChaCha8Rng) -> Lattice {
    loop {
        let n = rng.gen_range(1..=4);
        let mut rows = vec![vec![0i64; n]; n];
        for i in 0..n {
            rows[i][i] = 2 * rng.gen_range(-3..=3);
            for j in 0..i {
                let v = rng.gen_range(-3..=3);
                rows[i][j] = v;
                rows[j][i] = v;
            }
        }
        if let Ok(l) = Lattice::from_rows(&rows) {
            return l;
        }
    }
}

fn random_cyclotomic(rng: &mut ChaCha8Rng, p: u32) -> Cyclotomic {
    let coeffs: Vec<BigRational> = (0..p - 1)
        .map(|_| BigRational::new(rng.gen_range(-5..=5i64).into(), rng.gen_range(1..=4i64).into()))
        .collect();
    Cyclotomic::from_exponents(p, &coeffs).expect("prime")
}

fn properties(t: &mut Tally) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(PROPERTY_SEED);
    for case in 0..PROPERTY_CASES {
        let (r, c) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let a = random_matrix(&mut rng, r, c);
        let u = random_unimodular(&mut rng, r);
        let v = random_unimodular(&mut rng, c);
        let b = u.mul(&a)?.mul(&v)?;
        t.eq(&format!("case {case}: SNF invariant"), smith_normal_form(&a).diagonal, smith_normal_form(&b).diagonal);
        let s = smith_normal_form(&a);
        t.eq(&format!("case {case}: SNF transforms"), s.left.mul(&a)?.mul(&s.right)?, {
            IntMatrix::from_fn(r, c, |i, j| if i == j && i < s.diagonal.len() { s.diagonal[i].clone() } else { BigInt::zero() })
        });

        let l1 = random_lattice(&mut rng);
        let l2 = random_lattice(&mut rng);
        let sum = l1.direct_sum(&l2);
        t.eq(&format!("case {case}: det of sum"), l1.determinant() * l2.determinant(), sum.determinant());
        let (s1, s2) = (l1.signature(), l2.signature());
        t.eq(
            &format!("case {case}: signature of sum"),
            Signature { positive: s1.positive + s2.positive, negative: s1.negative + s2.negative },
            sum.signature(),
        );
        let g = l1.smith();
        let product: BigInt = g.diagonal.iter().product();
        t.eq(&format!("case {case}: |det| is SNF product"), l1.determinant().abs(), product);

        let p = SUPPORTED_PRIMES[1 + case % 7];
        let (x, y, z) = (random_cyclotomic(&mut rng, p), random_cyclotomic(&mut rng, p), random_cyclotomic(&mut rng, p));
        t.eq(&format!("case {case}: associativity"), &(&x * &y) * &z, &x * &(&y * &z));
        t.eq(&format!("case {case}: distributivity"), &x * &(&y + &z), &(&x * &y) + &(&x * &z));
        t.eq(&format!("case {case}: commutativity"), &x * &y, &y * &x);
        if !x.is_zero() {
            t.expect((&x * &x.inv()?).is_one(), || format!("case {case}: inverse of {x}"));
        }
        t.eq(&format!("case {case}: conjugation is multiplicative"), (&x * &y).conj(), &x.conj() * &y.conj());

        let sol = solve_table1(p)?;
        let alpha = BigRational::new(rng.gen_range(-20..=20i64).into(), rng.gen_range(1..=6i64).into());
        let residual = LefschetzSolution::residual(p, &sol.points_at(&alpha), &alpha)?;
        t.expect(residual.is_zero(), || format!("case {case}: back-substitution for p={p}"));

        let f = RatPoly::from_coeffs((0..rng.gen_range(1..=6)).map(|_| q(rng.gen_range(-9..=9))).collect());
        let h = RatPoly::from_coeffs((0..rng.gen_range(1..=5)).map(|_| q(rng.gen_range(-9..=9))).collect());
        let prod = &f * &h;
        if !prod.is_zero() {
            t.eq(&format!("case {case}: factorization round trip"), prod.clone(), crate::poly::factor_rational(&prod).expand());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_reader() {
        assert_eq!(affine("(r-6)/4", "r").unwrap(), (BigRational::new((-3).into(), 2.into()), BigRational::new(1.into(), 4.into())));
        assert_eq!(affine("2a+3", "a").unwrap(), (q(3), q(2)));
        assert!(affine("a^2", "a").is_err());
    }

    #[test]
    fn unknown_criterion_fails() {
        assert!(!run(11).pass);
    }
}
