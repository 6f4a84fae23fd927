//! Singular fibers of elliptic K3 surfaces `y^2 = x^3 + f(t) x + g(t)` over
//! the projective line, with `deg f <= 8` and `deg g <= 12`.

pub mod catalog;
pub mod expr;
pub mod invariance;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::{factor_rational, RatPoly};

pub use catalog::{example_catalog, find_example, CatalogEntry, EntryOutcome};
pub use expr::{parse_binding, PolyExpr};
pub use invariance::{weighted_invariance, Action, MultiPoly};

pub const F_DEGREE_BOUND: usize = 8;
pub const G_DEGREE_BOUND: usize = 12;
pub const DELTA_DEGREE_BOUND: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassModel {
    f: RatPoly,
    g: RatPoly,
    bindings: BTreeMap<String, BigRational>,
}

impl WeierstrassModel {
    pub fn new(f: RatPoly, g: RatPoly) -> Result<Self> {
        Self::with_bindings(f, g, BTreeMap::new())
    }

    pub fn with_bindings(f: RatPoly, g: RatPoly, bindings: BTreeMap<String, BigRational>) -> Result<Self> {
        for (name, p, bound) in [("f", &f, F_DEGREE_BOUND), ("g", &g, G_DEGREE_BOUND)] {
            if let Some(d) = p.degree().filter(|&d| d > bound) {
                return Err(Error::DegreeBound { name: name.into(), degree: d, bound });
            }
        }
        let model = Self { f, g, bindings };
        if model.discriminant_unchecked().is_zero() {
            return Err(Error::ZeroDiscriminant);
        }
        Ok(model)
    }

    /// Parses both coefficients and binds their parameters.
    pub fn parse(f: &str, g: &str, bindings: &BTreeMap<String, BigRational>) -> Result<Self> {
        let fe = PolyExpr::parse(f)?;
        let ge = PolyExpr::parse(g)?;
        let used: BTreeMap<String, BigRational> = fe
            .parameters()
            .into_iter()
            .chain(ge.parameters())
            .filter_map(|k| bindings.get(&k).map(|v| (k, v.clone())))
            .collect();
        Self::with_bindings(fe.eval(bindings)?, ge.eval(bindings)?, used)
    }

    pub fn f(&self) -> &RatPoly {
        &self.f
    }

    pub fn g(&self) -> &RatPoly {
        &self.g
    }

    pub fn bindings(&self) -> &BTreeMap<String, BigRational> {
        &self.bindings
    }

    fn discriminant_unchecked(&self) -> RatPoly {
        let four = RatPoly::constant(BigRational::from_integer(BigInt::from(4)));
        let tw7 = RatPoly::constant(BigRational::from_integer(BigInt::from(27)));
        &(&four * &self.f.pow(3)) + &(&tw7 * &self.g.pow(2))
    }

    /// `4 f^3 + 27 g^2`.
    pub fn discriminant(&self) -> RatPoly {
        self.discriminant_unchecked()
    }

    /// Coefficients in the chart `s = 1/t`.
    pub fn at_infinity(&self) -> (RatPoly, RatPoly, RatPoly) {
        (
            self.f.reversed(F_DEGREE_BOUND),
            self.g.reversed(G_DEGREE_BOUND),
            self.discriminant().reversed(DELTA_DEGREE_BOUND),
        )
    }

    pub fn classify_fibers(&self) -> Result<FibrationReport> {
        classify_fibers(self)
    }
}

impl fmt::Display for WeierstrassModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + ({})*x + ({})", self.f, self.g)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KodairaType {
    I(u32),
    II,
    III,
    IV,
    IStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl KodairaType {
    pub fn euler(&self) -> u32 {
        match *self {
            KodairaType::I(n) => n,
            KodairaType::II => 2,
            KodairaType::III => 3,
            KodairaType::IV => 4,
            KodairaType::IStar(n) => n + 6,
            KodairaType::IVStar => 8,
            KodairaType::IIIStar => 9,
            KodairaType::IIStar => 10,
        }
    }
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::I(n) => write!(f, "I{n}"),
            KodairaType::II => f.write_str("II"),
            KodairaType::III => f.write_str("III"),
            KodairaType::IV => f.write_str("IV"),
            KodairaType::IStar(n) => write!(f, "I{n}*"),
            KodairaType::IVStar => f.write_str("IV*"),
            KodairaType::IIIStar => f.write_str("III*"),
            KodairaType::IIStar => f.write_str("II*"),
        }
    }
}

impl std::str::FromStr for KodairaType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter { name: "fiber type".into(), reason: format!("`{s}`") };
        Ok(match s {
            "II" => KodairaType::II,
            "III" => KodairaType::III,
            "IV" => KodairaType::IV,
            "IV*" => KodairaType::IVStar,
            "III*" => KodairaType::IIIStar,
            "II*" => KodairaType::IIStar,
            _ => {
                let rest = s.strip_prefix('I').ok_or_else(bad)?;
                match rest.strip_suffix('*') {
                    Some(n) => KodairaType::IStar(n.parse().map_err(|_| bad())?),
                    None => KodairaType::I(rest.parse().ok().filter(|&n: &u32| n > 0).ok_or_else(bad)?),
                }
            }
        })
    }
}

impl Serialize for KodairaType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `None` stands for the order of the zero polynomial.
fn at_least(order: Option<u32>, k: u32) -> bool {
    order.is_none_or(|o| o >= k)
}

fn show(order: Option<u32>) -> String {
    order.map_or_else(|| "inf".to_string(), |o| o.to_string())
}

/// Kodaira type from the vanishing orders of `f`, `g` and `Δ` at a place;
/// `Ok(None)` for a smooth fiber.
pub fn kodaira_type(ord_f: Option<u32>, ord_g: Option<u32>, ord_delta: u32) -> Result<Option<KodairaType>> {
    if at_least(ord_f, 4) && at_least(ord_g, 6) {
        return Err(Error::NonMinimal(format!("orders ({}, {})", show(ord_f), show(ord_g))));
    }
    let inconsistent = || Error::InconsistentOrders { f: show(ord_f), g: show(ord_g), delta: ord_delta };
    if ord_f == Some(0) || ord_g == Some(0) {
        // the two cannot vanish independently when exactly one is a unit
        let both = ord_f == Some(0) && ord_g == Some(0);
        return match (ord_delta, both) {
            (0, _) => Ok(None),
            (n, true) => Ok(Some(KodairaType::I(n))),
            _ => Err(inconsistent()),
        };
    }
    let f = ord_f.unwrap_or(u32::MAX);
    let g = ord_g.unwrap_or(u32::MAX);
    let t = match (f, g, ord_delta) {
        (f, 1, 2) if f >= 1 => KodairaType::II,
        (1, g, 3) if g >= 2 => KodairaType::III,
        (f, 2, 4) if f >= 2 => KodairaType::IV,
        (2, 3, d) if d >= 6 => KodairaType::IStar(d - 6),
        (f, 3, 6) if f >= 3 => KodairaType::IStar(0),
        (2, g, 6) if g >= 4 => KodairaType::IStar(0),
        (f, 4, 8) if f >= 3 => KodairaType::IVStar,
        (3, g, 9) if g >= 5 => KodairaType::IIIStar,
        (f, 5, 10) if f >= 4 => KodairaType::IIStar,
        _ => return Err(inconsistent()),
    };
    Ok(Some(t))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Place {
    /// A monic irreducible factor of the discriminant.
    Finite(RatPoly),
    Infinity,
}

impl Place {
    /// Number of geometric points.
    pub fn degree(&self) -> u32 {
        match self {
            Place::Finite(p) => p.degree().unwrap_or(0) as u32,
            Place::Infinity => 1,
        }
    }

    pub fn is_origin(&self) -> bool {
        matches!(self, Place::Finite(p) if *p == RatPoly::x())
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => f.write_str(&p.display_in("t")),
            Place::Infinity => f.write_str("infinity"),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// One singular fiber type over a place; a place of degree `d` carries `d`
/// conjugate fibers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    #[serde(rename = "factor")]
    pub place: Place,
    pub ord_f: Option<u32>,
    pub ord_g: Option<u32>,
    pub ord_delta: u32,
    #[serde(rename = "type")]
    pub kodaira: KodairaType,
    /// Euler number of a single fiber.
    pub euler: u32,
    pub count: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FibrationReport {
    pub places: Vec<FiberReport>,
    pub euler_total: u32,
}

impl FibrationReport {
    /// Fiber type counts over all geometric points.
    pub fn configuration(&self) -> BTreeMap<KodairaType, u32> {
        let mut out = BTreeMap::new();
        for r in &self.places {
            *out.entry(r.kodaira).or_insert(0) += r.count;
        }
        out
    }

    pub fn at_infinity(&self) -> Option<KodairaType> {
        self.places.iter().find(|r| r.place == Place::Infinity).map(|r| r.kodaira)
    }

    pub fn at_origin(&self) -> Option<KodairaType> {
        self.places.iter().find(|r| r.place.is_origin()).map(|r| r.kodaira)
    }

    /// E.g. `IV + 20 I1`, larger fibers first.
    pub fn summary(&self) -> String {
        configuration_string(&self.configuration())
    }
}

pub fn configuration_string(config: &BTreeMap<KodairaType, u32>) -> String {
    config
        .iter()
        .rev()
        .map(|(t, &n)| if n == 1 { t.to_string() } else { format!("{n} {t}") })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Classifies every singular fiber: finite places are the irreducible rational
/// factors of `Δ`, the place at infinity is read off in the chart `s = 1/t`.
pub fn classify_fibers(model: &WeierstrassModel) -> Result<FibrationReport> {
    let delta = model.discriminant();
    let mut places = Vec::new();
    for (pi, mult) in factor_rational(&delta).factors {
        let ord_f = model.f.order_at(&pi);
        let ord_g = model.g.order_at(&pi);
        let place = Place::Finite(pi);
        let kodaira = kodaira_type(ord_f, ord_g, mult)
            .map_err(|e| relabel(e, &place))?
            .expect("factor of the discriminant");
        let count = place.degree();
        places.push(FiberReport { place, ord_f, ord_g, ord_delta: mult, kodaira, euler: kodaira.euler(), count });
    }
    let (f_inf, g_inf, d_inf) = model.at_infinity();
    let ord_delta = d_inf.order_at_zero().expect("nonzero discriminant");
    let (ord_f, ord_g) = (f_inf.order_at_zero(), g_inf.order_at_zero());
    if let Some(kodaira) = kodaira_type(ord_f, ord_g, ord_delta).map_err(|e| relabel(e, &Place::Infinity))? {
        places.push(FiberReport {
            place: Place::Infinity,
            ord_f,
            ord_g,
            ord_delta,
            kodaira,
            euler: kodaira.euler(),
            count: 1,
        });
    }
    let euler_total = places.iter().map(|r| r.euler * r.count).sum();
    Ok(FibrationReport { places, euler_total })
}

fn relabel(e: Error, place: &Place) -> Error {
    match e {
        Error::NonMinimal(_) => Error::NonMinimal(place.to_string()),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(f: &str, g: &str) -> WeierstrassModel {
        WeierstrassModel::parse(f, g, &BTreeMap::new()).unwrap()
    }

    #[test]
    fn kodaira_table() {
        assert_eq!(kodaira_type(Some(3), Some(2), 4).unwrap(), Some(KodairaType::IV));
        assert_eq!(kodaira_type(Some(0), Some(0), 1).unwrap(), Some(KodairaType::I(1)));
        assert_eq!(kodaira_type(Some(3), Some(5), 9).unwrap(), Some(KodairaType::IIIStar));
        assert_eq!(kodaira_type(Some(2), Some(3), 8).unwrap(), Some(KodairaType::IStar(2)));
        assert_eq!(kodaira_type(None, Some(5), 10).unwrap(), Some(KodairaType::IIStar));
        assert_eq!(kodaira_type(Some(1), None, 3).unwrap(), Some(KodairaType::III));
        assert_eq!(kodaira_type(Some(0), Some(3), 0).unwrap(), None);
        assert!(matches!(kodaira_type(Some(4), Some(6), 12), Err(Error::NonMinimal(_))));
        assert!(matches!(kodaira_type(None, None, 0), Err(Error::NonMinimal(_))));
        assert!(matches!(kodaira_type(Some(1), Some(1), 3), Err(Error::InconsistentOrders { .. })));
        assert!(matches!(kodaira_type(Some(0), Some(2), 1), Err(Error::InconsistentOrders { .. })));
    }

    #[test]
    fn kodaira_names_round_trip() {
        for t in [
            KodairaType::I(1),
            KodairaType::I(11),
            KodairaType::II,
            KodairaType::III,
            KodairaType::IV,
            KodairaType::IStar(0),
            KodairaType::IStar(3),
            KodairaType::IVStar,
            KodairaType::IIIStar,
            KodairaType::IIStar,
        ] {
            assert_eq!(t.to_string().parse::<KodairaType>().unwrap(), t);
        }
        assert!("I0".parse::<KodairaType>().is_err());
        assert!("V".parse::<KodairaType>().is_err());
    }

    #[test]
    fn discriminant_examples() {
        let m = model("0", "t^5 - 1");
        assert_eq!(m.discriminant(), RatPoly::from_ints(&[-1, 0, 0, 0, 0, 1]).pow(2).scale(&BigRational::from_integer(27.into())));
        let mut d = vec![0i64; 22];
        d[21] = 4;
        d[4] = 27;
        assert_eq!(model("t^7", "t^2").discriminant(), RatPoly::from_ints(&d));
    }

    #[test]
    fn rejects_invalid_models() {
        let empty = BTreeMap::new();
        assert_eq!(WeierstrassModel::parse("0", "0", &empty), Err(Error::ZeroDiscriminant));
        assert!(matches!(WeierstrassModel::parse("t^9", "1", &empty), Err(Error::DegreeBound { .. })));
        assert_eq!(
            model("t^4", "t^6").classify_fibers(),
            Err(Error::NonMinimal("t".into()))
        );
        assert_eq!(model("1", "1").classify_fibers(), Err(Error::NonMinimal("infinity".into())));
    }

    #[test]
    fn order_nineteen_model() {
        let r = model("t^7", "t").classify_fibers().unwrap();
        assert_eq!(r.euler_total, 24);
        assert_eq!(r.at_origin(), Some(KodairaType::II));
        assert_eq!(r.at_infinity(), Some(KodairaType::III));
        assert_eq!(r.summary(), "III + II + 19 I1");
    }
}
