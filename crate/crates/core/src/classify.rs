//! Admissible invariant lattices, fixed-locus profiles and moduli components.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{parse_lattice_expr, Signature};
use crate::lefschetz::{check_supported, solve_table1, LefschetzSolution};
use crate::reference;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SpecialLocus {
    Generic,
    Empty,
    TwoEllipticCurves,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedLocusProfile {
    pub special: SpecialLocus,
    /// Genera of the pointwise fixed curves, largest first.
    pub curve_genera: Vec<u32>,
    /// Isolated points by type `t = 1, ..., (p-1)/2`.
    pub points: Vec<u32>,
    pub n: u32,
    /// `Σ (1 - g)` over fixed curves.
    pub alpha: i64,
    /// Genus of the distinguished curve, `(m - a)/2`; absent for the special loci.
    pub g_prime: Option<i64>,
}

impl FixedLocusProfile {
    pub fn euler_characteristic(&self) -> i64 {
        self.n as i64 + self.curve_genera.iter().map(|&g| 2 - 2 * g as i64).sum::<i64>()
    }

    pub fn rational_curve_count(&self) -> usize {
        self.curve_genera.iter().filter(|&&g| g == 0).count()
    }

    /// `(g, k)` for a curve of genus `g` plus `k` further rational curves,
    /// or `None` when nothing one-dimensional is fixed.
    pub fn curve_and_rationals(&self) -> Option<(u32, u32)> {
        if self.special != SpecialLocus::Generic || self.curve_genera.is_empty() {
            return None;
        }
        Some((self.curve_genera[0], self.curve_genera.len() as u32 - 1))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationRow {
    pub p: u32,
    pub r: u32,
    pub a: u32,
    pub delta: Option<u8>,
    pub m: u32,
    pub profile: FixedLocusProfile,
    pub s_name: Option<String>,
    pub t_name: Option<String>,
    pub g_thm: Option<i64>,
    pub k_thm: Option<i64>,
}

/// Flat record used for JSON and CSV output.
#[derive(Clone, Debug, Serialize)]
pub struct RowRecord {
    pub p: u32,
    pub r: u32,
    pub a: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<u8>,
    pub m: u32,
    pub special: SpecialLocus,
    pub curve_genera: Vec<u32>,
    pub n_t: Vec<u32>,
    pub n: u32,
    pub alpha: i64,
    pub g_thm: Option<i64>,
    pub k_thm: Option<i64>,
    #[serde(rename = "S")]
    pub s: Option<String>,
    #[serde(rename = "T")]
    pub t: Option<String>,
    pub moduli_dim: u32,
}

impl ClassificationRow {
    pub fn record(&self) -> RowRecord {
        RowRecord {
            p: self.p,
            r: self.r,
            a: self.a,
            delta: self.delta,
            m: self.m,
            special: self.profile.special,
            curve_genera: self.profile.curve_genera.clone(),
            n_t: self.profile.points.clone(),
            n: self.profile.n,
            alpha: self.profile.alpha,
            g_thm: self.g_thm,
            k_thm: self.k_thm,
            s: self.s_name.clone(),
            t: self.t_name.clone(),
            moduli_dim: moduli_dimension(self),
        }
    }
}

fn check_odd(p: u32) -> Result<()> {
    check_supported(p)?;
    if p == 2 {
        return Err(Error::UnsupportedPrime(p));
    }
    Ok(())
}

/// Invariants `(r, a)` of hyperbolic p-elementary lattices that occur as invariant lattices.
pub fn admissible_pairs(p: u32) -> Result<Vec<(u32, u32)>> {
    check_odd(p)?;
    let mut out = Vec::new();
    for r in (2..=20u32).step_by(2) {
        if (22 - r) % (p - 1) != 0 {
            continue;
        }
        let m = (22 - r) / (p - 1);
        for a in 0..=r.min(m) {
            if !(m - a).is_multiple_of(2) {
                continue;
            }
            let parity_ok = if a % 2 == 0 {
                r % 4 == 2
            } else {
                let sign = if (r / 2 - 1) % 2 == 0 { 1 } else { 3 };
                p % 4 == sign
            };
            if !parity_ok {
                continue;
            }
            if r % 8 != 2 && (a == 0 || a == r) {
                continue;
            }
            out.push((r, a));
        }
    }
    Ok(out)
}

fn involution_triples() -> Result<Vec<(u32, u32, u8)>> {
    Ok(reference::involution_triples()?.triples)
}

fn to_count(x: &BigRational, what: &str) -> Result<u32> {
    if !x.is_integer() || x.is_negative() {
        return Err(Error::CatalogMismatch(format!("{what} = {x} is not a non-negative integer")));
    }
    Ok(x.to_integer().to_u32().expect("small count"))
}

fn curves(g_prime: i64, extra: i64) -> Vec<u32> {
    if extra < 0 {
        return Vec::new();
    }
    let mut genera = vec![g_prime as u32];
    genera.extend(std::iter::repeat_n(0, extra as usize));
    genera
}

fn profile_from(solution: &LefschetzSolution, r: u32, a: u32) -> Result<FixedLocusProfile> {
    let p = solution.p;
    let m = (22 - r) / (p - 1);
    let alpha_q = solution.alpha_of_r.eval(r as i64);
    if !alpha_q.is_integer() {
        return Err(Error::CatalogMismatch(format!("alpha = {alpha_q} is not integral for p = {p}, r = {r}")));
    }
    let alpha = alpha_q.to_integer().to_i64().expect("small");
    let points = solution
        .points_at(&alpha_q)
        .iter()
        .map(|x| to_count(x, "isolated point count"))
        .collect::<Result<Vec<_>>>()?;
    let g_prime = (m as i64 - a as i64) / 2;
    Ok(FixedLocusProfile {
        special: SpecialLocus::Generic,
        curve_genera: curves(g_prime, alpha + g_prime - 1),
        n: points.iter().sum(),
        points,
        alpha,
        g_prime: Some(g_prime),
    })
}

fn involution_profile(r: u32, a: u32, delta: u8) -> FixedLocusProfile {
    let alpha = r as i64 - 10;
    let special = match (r, a, delta) {
        (10, 10, 0) => SpecialLocus::Empty,
        (10, 8, 0) => SpecialLocus::TwoEllipticCurves,
        _ => SpecialLocus::Generic,
    };
    let (curve_genera, g_prime) = match special {
        SpecialLocus::Empty => (Vec::new(), None),
        SpecialLocus::TwoEllipticCurves => (vec![1, 1], None),
        SpecialLocus::Generic => {
            let g = (22 - r - a) as i64 / 2;
            (curves(g, (r - a) as i64 / 2), Some(g))
        }
    };
    FixedLocusProfile { special, curve_genera, points: Vec::new(), n: 0, alpha, g_prime }
}

pub fn fixed_locus(p: u32, r: u32, a: u32, delta: Option<u8>) -> Result<FixedLocusProfile> {
    check_supported(p)?;
    if p == 2 {
        let delta = delta.ok_or(Error::MissingDelta)?;
        if !involution_triples()?.contains(&(r, a, delta)) {
            return Err(Error::Inadmissible { p, r, a });
        }
        return Ok(involution_profile(r, a, delta));
    }
    if !admissible_pairs(p)?.contains(&(r, a)) {
        return Err(Error::Inadmissible { p, r, a });
    }
    profile_from(&solve_table1(p)?, r, a)
}

/// Invariant and transcendental lattices for rows that are pinned down by name.
fn named_lattices(p: u32, r: u32, a: u32) -> Option<(&'static str, &'static str)> {
    let names = match (p, r, a) {
        (5, 2, 1) => ("H5", "H5+U+E8+E8"),
        (5, 6, 2) => ("H5+A4", "H5+U+E8+A4"),
        (5, 6, 4) => ("H5+A4*(5)", "H5+U(5)+E8+A4"),
        (5, 10, 1) => ("H5+E8", "U+H5+E8"),
        (5, 10, 3) => ("H5+A4^2", "U+H5+A4^2"),
        (5, 14, 2) => ("H5+A4+E8", "U+H5+A4"),
        (5, 18, 1) => ("H5+E8+E8", "U+H5"),
        (7, 4, 1) => ("U+K7", "U+U+E8+A6"),
        (7, 4, 3) => ("U(7)+K7", "U(7)+U+E8+A6"),
        (7, 10, 0) => ("U+E8", "U+U+E8"),
        (7, 10, 2) => ("U(7)+E8", "U(7)+U+E8"),
        (7, 16, 1) => ("U+E8+A6", "U+U+K7"),
        (11, 2, 0) => ("U", "U+U+E8+E8"),
        (11, 2, 2) => ("U(11)", "U+U(11)+E8+E8"),
        (11, 12, 1) => ("U+A10", "K11(-1)+E8"),
        (13, 10, 1) => ("H13+E8", "U+H13+E8"),
        (17, 6, 1) => ("U+L17", "U+U+E8+L17"),
        (19, 4, 1) => ("U+K19", "K19(-1)+E8+E8"),
        _ => return None,
    };
    Some(names)
}

/// Component lattices for small primes, keyed by their invariants.
fn component_name(p: u32, r: u32, a: u32, delta: Option<u8>) -> Result<Option<String>> {
    for c in irreducible_components(p)? {
        if c.r == r && c.a == a && c.delta == delta {
            return Ok(Some(c.s_name));
        }
    }
    Ok(None)
}

/// Checks rank, signature and p-elementary length of a named lattice.
pub fn verify_named(expr: &str, p: u32, rank: u32, a: u32, positive: usize, delta: Option<u8>) -> Result<()> {
    let lattice = parse_lattice_expr(expr)?;
    let inv = lattice.invariants();
    let expected_sig = Signature { positive, negative: rank as usize - positive };
    let length = inv.elementary.and_then(|e| e.length_for(p as u64));
    if inv.rank != rank as usize || inv.signature != expected_sig || length != Some(a as usize) {
        return Err(Error::CatalogMismatch(format!(
            "{expr}: expected rank {rank}, signature {expected_sig}, {p}-elementary a={a}; found {inv}"
        )));
    }
    if delta.is_some() && inv.delta != delta {
        return Err(Error::CatalogMismatch(format!("{expr}: expected delta {delta:?}, found {:?}", inv.delta)));
    }
    Ok(())
}

fn attach_names(row: &mut ClassificationRow) -> Result<()> {
    let (p, r, a) = (row.p, row.r, row.a);
    if p >= 5 {
        let (s, t) = named_lattices(p, r, a)
            .ok_or_else(|| Error::CatalogMismatch(format!("no lattice names for p = {p}, (r, a) = ({r}, {a})")))?;
        row.s_name = Some(s.to_string());
        row.t_name = Some(t.to_string());
    } else {
        row.s_name = component_name(p, r, a, row.delta)?;
    }
    if let Some(s) = &row.s_name {
        verify_named(s, p, r, a, 1, row.delta)?;
    }
    if let Some(t) = &row.t_name {
        verify_named(t, p, 22 - r, a, 2, None)?;
    }
    Ok(())
}

fn curve_pair(profile: &FixedLocusProfile) -> (Option<i64>, Option<i64>) {
    match profile.g_prime {
        Some(g) => (Some(g), Some(profile.alpha + g - 1)),
        None => (None, None),
    }
}

pub fn classification_table(p: u32) -> Result<Vec<ClassificationRow>> {
    check_supported(p)?;
    let mut rows = Vec::new();
    if p == 2 {
        let mut triples = involution_triples()?;
        triples.sort();
        for (r, a, delta) in triples {
            let profile = involution_profile(r, a, delta);
            let (g_thm, k_thm) = curve_pair(&profile);
            let mut row = ClassificationRow {
                p, r, a, delta: Some(delta), m: 22 - r, profile, s_name: None, t_name: None, g_thm, k_thm,
            };
            attach_names(&mut row)?;
            rows.push(row);
        }
        return Ok(rows);
    }
    let solution = solve_table1(p)?;
    for (r, a) in admissible_pairs(p)? {
        let profile = profile_from(&solution, r, a)?;
        let (g_thm, k_thm) = curve_pair(&profile);
        let mut row = ClassificationRow {
            p, r, a, delta: None, m: (22 - r) / (p - 1), profile, s_name: None, t_name: None, g_thm, k_thm,
        };
        attach_names(&mut row)?;
        rows.push(row);
    }
    Ok(rows)
}

/// Dimension of the family of pairs with the given invariants.
pub fn moduli_dimension(row: &ClassificationRow) -> u32 {
    dimension_for(row.p, row.r)
}

fn dimension_for(p: u32, r: u32) -> u32 {
    if p == 2 {
        20 - r
    } else {
        (22 - r) / (p - 1) - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    #[serde(rename = "S")]
    pub s_name: String,
    pub display: String,
    pub dimension: u32,
    pub r: u32,
    pub a: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<u8>,
}

pub fn irreducible_components(p: u32) -> Result<Vec<Component>> {
    check_supported(p)?;
    let data = reference::moduli_components()?;
    let entry = data
        .components
        .iter()
        .find(|c| c.p == p)
        .ok_or_else(|| Error::Reference(format!("no component data for p = {p}")))?;
    if entry.lattices.len() != entry.count || entry.dims.len() != entry.count {
        return Err(Error::Reference(format!("component count mismatch for p = {p}")));
    }
    let mut out = Vec::new();
    for (i, expr) in entry.lattices.iter().enumerate() {
        let inv = parse_lattice_expr(expr)?.invariants();
        let r = inv.rank as u32;
        let a = match inv.elementary {
            Some(e) => e.length_for(p as u64),
            None => None,
        }
        .ok_or_else(|| Error::CatalogMismatch(format!("{expr} is not {p}-elementary")))? as u32;
        let delta = if p == 2 { inv.delta } else { None };
        let expected_delta = entry.delta.as_ref().map(|d| d[i]);
        if p == 2 && delta != expected_delta {
            return Err(Error::CatalogMismatch(format!("{expr}: delta {delta:?} differs from {expected_delta:?}")));
        }
        verify_named(expr, p, r, a, 1, delta)?;
        let admissible = if p == 2 {
            involution_triples()?.contains(&(r, a, delta.unwrap_or(0)))
        } else {
            admissible_pairs(p)?.contains(&(r, a))
        };
        if !admissible {
            return Err(Error::Inadmissible { p, r, a });
        }
        let dimension = dimension_for(p, r);
        if dimension != entry.dims[i] {
            return Err(Error::CatalogMismatch(format!(
                "{expr}: computed dimension {dimension}, reference {}",
                entry.dims[i]
            )));
        }
        let display = entry.display.as_ref().map_or_else(|| expr.clone(), |d| d[i].clone());
        out.push(Component { s_name: expr.clone(), display, dimension, r, a, delta });
    }
    Ok(out)
}

/// `Σ(2 - 2g) + n = 24 - m p`.
pub fn euler_target(row: &ClassificationRow) -> i64 {
    24 - row.m as i64 * row.p as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_five_pairs() {
        assert_eq!(
            admissible_pairs(5).unwrap(),
            vec![(2, 1), (6, 2), (6, 4), (10, 1), (10, 3), (14, 2), (18, 1)]
        );
        assert_eq!(admissible_pairs(13).unwrap(), vec![(10, 1)]);
        assert_eq!(admissible_pairs(19).unwrap(), vec![(4, 1)]);
        assert_eq!(admissible_pairs(3).unwrap().len(), 24);
        assert!(admissible_pairs(2).is_err());
    }

    #[test]
    fn profiles() {
        let f = fixed_locus(5, 2, 1, None).unwrap();
        assert_eq!(f.curve_genera, vec![2]);
        assert_eq!(f.points, vec![1, 0]);
        let f = fixed_locus(7, 4, 3, None).unwrap();
        assert!(f.curve_genera.is_empty());
        assert_eq!(f.points, vec![2, 1, 0]);
        let f = fixed_locus(13, 10, 1, None).unwrap();
        assert_eq!(f.curve_genera, vec![0]);
        assert_eq!(f.n, 9);
        assert_eq!(fixed_locus(2, 10, 10, Some(0)).unwrap().special, SpecialLocus::Empty);
        assert_eq!(fixed_locus(2, 10, 8, Some(0)).unwrap().curve_genera, vec![1, 1]);
        assert!(matches!(fixed_locus(5, 4, 1, None), Err(Error::Inadmissible { .. })));
        assert_eq!(fixed_locus(2, 3, 1, None), Err(Error::MissingDelta));
    }

    #[test]
    fn order_seven_table() {
        let rows = classification_table(7).unwrap();
        assert_eq!(rows.len(), 5);
        let row = rows.iter().find(|r| r.r == 10 && r.a == 0).unwrap();
        assert_eq!(row.s_name.as_deref(), Some("U+E8"));
        assert_eq!(row.profile.curve_genera, vec![1, 0]);
        assert_eq!(row.profile.points, vec![4, 3, 1]);
    }

    #[test]
    fn euler_identity_everywhere() {
        for p in [2, 3, 5, 7, 11, 13, 17, 19] {
            for row in classification_table(p).unwrap() {
                assert_eq!(row.profile.euler_characteristic(), euler_target(&row), "{row:?}");
            }
        }
    }

    #[test]
    fn components() {
        let c = irreducible_components(3).unwrap();
        assert_eq!(c.iter().map(|c| c.dimension).collect::<Vec<_>>(), vec![9, 9, 6]);
        let c = irreducible_components(2).unwrap();
        assert_eq!(c.iter().map(|c| c.dimension).collect::<Vec<_>>(), vec![19, 18]);
        assert_eq!(irreducible_components(17).unwrap()[0].s_name, "U+L17");
    }
}
