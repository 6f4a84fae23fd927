//! Elliptic K3 surfaces with a non-symplectic automorphism of prime order,
//! with their expected singular fibers.
//!
//! Parameters marked generic are sampled from small nonzero rationals with a
//! seeded generator; a sample is accepted once `Δ` is squarefree away from
//! the places the entry declares special.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::invariance::{weierstrass_invariance, Action};
use super::KodairaType::{self, IIIStar, IIStar, IVStar, I, II, III, IV};
use super::{configuration_string, FibrationReport, Place, WeierstrassModel};
use crate::error::{Error, Result};
use crate::poly::factor_rational;

pub const DEFAULT_SEED: u64 = 0x6b33;
const SAMPLING_BUDGET: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub key: &'static str,
    pub name: &'static str,
    pub f: &'static str,
    pub g: &'static str,
    /// `(parameter, numerator, denominator)`.
    pub fixed: &'static [(&'static str, i64, i64)],
    pub generic: &'static [&'static str],
    /// Whether `t = 0` may carry a degenerate fiber.
    pub special_origin: bool,
    pub action: Action,
    pub expected: &'static [(KodairaType, u32)],
    pub at_infinity: Option<KodairaType>,
    pub at_origin: Option<KodairaType>,
}

const fn act(p: u32, u: i64, v: i64, w: i64) -> Action {
    Action { p, u, v, w }
}

const ORDER5_F: &str = "t^5 + alpha";
const ORDER5_G: &str = "beta*t^10 + t^5 + gamma";
const ORDER7_F: &str = "a*t^7 + b";
const ORDER7_G: &str = "t^7 + c";
const ORDER11_F: &str = "a";
const ORDER11_G: &str = "t^11 + c";

static CATALOG: [CatalogEntry; 17] = [
    CatalogEntry {
        key: "5.6",
        name: "order5-generic",
        f: ORDER5_F,
        g: ORDER5_G,
        fixed: &[],
        generic: &["alpha", "beta", "gamma"],
        special_origin: false,
        action: act(5, 0, 0, 1),
        expected: &[(IV, 1), (I(1), 20)],
        at_infinity: Some(IV),
        at_origin: None,
    },
    CatalogEntry {
        key: "5.6.1",
        name: "order5-beta0",
        f: ORDER5_F,
        g: ORDER5_G,
        fixed: &[("beta", 0, 1)],
        generic: &["alpha", "gamma"],
        special_origin: false,
        action: act(5, 0, 0, 1),
        expected: &[(IIIStar, 1), (I(1), 15)],
        at_infinity: Some(IIIStar),
        at_origin: None,
    },
    CatalogEntry {
        key: "5.6.2",
        name: "order5-i5",
        f: ORDER5_F,
        g: ORDER5_G,
        fixed: &[("alpha", -3, 1), ("gamma", 2, 1)],
        generic: &["beta"],
        special_origin: true,
        action: act(5, 0, 0, 1),
        expected: &[(IV, 1), (I(5), 1), (I(1), 15)],
        at_infinity: Some(IV),
        at_origin: Some(I(5)),
    },
    CatalogEntry {
        key: "5.6.3",
        name: "order5-alpha0-gamma0",
        f: ORDER5_F,
        g: ORDER5_G,
        fixed: &[("alpha", 0, 1), ("gamma", 0, 1)],
        generic: &["beta"],
        special_origin: true,
        action: act(5, 0, 0, 1),
        expected: &[(IV, 1), (IIStar, 1), (I(1), 10)],
        at_infinity: Some(IV),
        at_origin: Some(IIStar),
    },
    CatalogEntry {
        key: "5.6.4",
        name: "order5-all0",
        f: ORDER5_F,
        g: ORDER5_G,
        fixed: &[("alpha", 0, 1), ("beta", 0, 1), ("gamma", 0, 1)],
        generic: &[],
        special_origin: true,
        action: act(5, 0, 0, 1),
        expected: &[(IIIStar, 1), (IIStar, 1), (I(1), 5)],
        at_infinity: Some(IIIStar),
        at_origin: Some(IIStar),
    },
    CatalogEntry {
        key: "7.1",
        name: "order7-generic",
        f: ORDER7_F,
        g: ORDER7_G,
        fixed: &[("c", -1, 1)],
        generic: &["a", "b"],
        special_origin: false,
        action: act(7, 0, 0, 1),
        expected: &[(III, 1), (I(1), 21)],
        at_infinity: Some(III),
        at_origin: None,
    },
    CatalogEntry {
        key: "7.1.1",
        name: "order7-a0",
        f: ORDER7_F,
        g: ORDER7_G,
        fixed: &[("a", 0, 1), ("c", -1, 1)],
        generic: &["b"],
        special_origin: false,
        action: act(7, 0, 0, 1),
        expected: &[(IIStar, 1), (I(1), 14)],
        at_infinity: Some(IIStar),
        at_origin: None,
    },
    CatalogEntry {
        key: "7.1.2",
        name: "order7-i7",
        f: ORDER7_F,
        g: ORDER7_G,
        fixed: &[("b", -3, 1), ("c", -2, 1)],
        generic: &["a"],
        special_origin: true,
        action: act(7, 0, 0, 1),
        expected: &[(III, 1), (I(7), 1), (I(1), 14)],
        at_infinity: Some(III),
        at_origin: Some(I(7)),
    },
    CatalogEntry {
        key: "7.1.3",
        name: "order7-a0-i7",
        f: ORDER7_F,
        g: ORDER7_G,
        fixed: &[("a", 0, 1), ("b", -3, 1), ("c", -2, 1)],
        generic: &[],
        special_origin: true,
        action: act(7, 0, 0, 1),
        expected: &[(IIStar, 1), (I(7), 1), (I(1), 7)],
        at_infinity: Some(IIStar),
        at_origin: Some(I(7)),
    },
    CatalogEntry {
        key: "11.1",
        name: "order11-generic",
        f: ORDER11_F,
        g: ORDER11_G,
        fixed: &[("c", -1, 1)],
        generic: &["a"],
        special_origin: false,
        action: act(11, 0, 0, 1),
        expected: &[(II, 1), (I(1), 22)],
        at_infinity: Some(II),
        at_origin: None,
    },
    CatalogEntry {
        key: "11.1.a",
        name: "order11-i11",
        f: ORDER11_F,
        g: ORDER11_G,
        fixed: &[("a", -3, 1), ("c", -2, 1)],
        generic: &[],
        special_origin: true,
        action: act(11, 0, 0, 1),
        expected: &[(II, 1), (I(11), 1), (I(1), 11)],
        at_infinity: Some(II),
        at_origin: Some(I(11)),
    },
    CatalogEntry {
        key: "8.1",
        name: "order13",
        f: "t^5",
        g: "t",
        fixed: &[],
        generic: &[],
        special_origin: true,
        action: act(13, 5, 1, 2),
        expected: &[(II, 1), (IIIStar, 1), (I(1), 13)],
        at_infinity: Some(IIIStar),
        at_origin: Some(II),
    },
    CatalogEntry {
        key: "8.2",
        name: "order17",
        f: "t^7",
        g: "t^2",
        fixed: &[],
        generic: &[],
        special_origin: true,
        action: act(17, 7, 2, 2),
        expected: &[(IV, 1), (III, 1), (I(1), 17)],
        at_infinity: Some(III),
        at_origin: Some(IV),
    },
    CatalogEntry {
        key: "8.3",
        name: "order19",
        f: "t^7",
        g: "t",
        fixed: &[],
        generic: &[],
        special_origin: true,
        action: act(19, 7, 1, 2),
        expected: &[(II, 1), (III, 1), (I(1), 19)],
        at_infinity: Some(III),
        at_origin: Some(II),
    },
    CatalogEntry {
        key: "x5",
        name: "order5-isotrivial",
        f: "t^3",
        g: "t^7",
        fixed: &[],
        generic: &[],
        special_origin: true,
        action: act(5, 3, 2, 2),
        expected: &[(IIIStar, 1), (IIStar, 1), (I(1), 5)],
        at_infinity: Some(IIStar),
        at_origin: Some(IIIStar),
    },
    CatalogEntry {
        key: "x7",
        name: "order7-rank-one",
        f: "t^3",
        g: "t^8",
        fixed: &[],
        generic: &[],
        special_origin: true,
        action: act(7, 3, 1, 2),
        expected: &[(IIIStar, 1), (IVStar, 1), (I(1), 7)],
        at_infinity: Some(IVStar),
        at_origin: Some(IIIStar),
    },
    CatalogEntry {
        key: "x11",
        name: "order11-rank-ten",
        f: "t^5",
        g: "t^2",
        fixed: &[],
        generic: &[],
        special_origin: true,
        action: act(11, 5, 2, 2),
        expected: &[(IV, 1), (IIIStar, 1), (I(1), 11)],
        at_infinity: Some(IIIStar),
        at_origin: Some(IV),
    },
];

pub fn example_catalog() -> &'static [CatalogEntry] {
    &CATALOG
}

/// Looks up an entry by key or by descriptive name.
pub fn find_example(key: &str) -> Result<&'static CatalogEntry> {
    CATALOG
        .iter()
        .find(|e| e.key == key || e.name == key)
        .ok_or_else(|| Error::UnknownExample(key.to_string()))
}

fn key_hash(key: &str) -> u64 {
    // FNV-1a, so each entry draws from its own stream
    key.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn sample_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let mut n: i64 = rng.gen_range(1..=9);
    if rng.gen_bool(0.5) {
        n = -n;
    }
    BigRational::new(BigInt::from(n), BigInt::from(rng.gen_range(1..=5i64)))
}

impl CatalogEntry {
    pub fn fixed_bindings(&self) -> BTreeMap<String, BigRational> {
        self.fixed
            .iter()
            .map(|&(k, n, d)| (k.to_string(), BigRational::new(n.into(), d.into())))
            .collect()
    }

    pub fn expected_configuration(&self) -> BTreeMap<KodairaType, u32> {
        self.expected.iter().copied().collect()
    }

    pub fn expected_summary(&self) -> String {
        configuration_string(&self.expected_configuration())
    }

    /// `Δ` is squarefree at every finite place other than the declared ones.
    pub fn is_generic(&self, model: &WeierstrassModel) -> bool {
        factor_rational(&model.discriminant()).factors.iter().all(|(pi, mult)| {
            *mult == 1 || (self.special_origin && Place::Finite(pi.clone()).is_origin())
        })
    }

    /// Builds the model, sampling the generic parameters not listed in
    /// `overrides`. Genericity is only enforced when nothing is overridden.
    pub fn instantiate(&self, seed: u64, overrides: &BTreeMap<String, BigRational>) -> Result<WeierstrassModel> {
        for name in overrides.keys() {
            if !self.generic.contains(&name.as_str()) && !self.fixed.iter().any(|(k, _, _)| k == name) {
                return Err(Error::InvalidParameter {
                    name: name.clone(),
                    reason: format!("not a parameter of example {}", self.key),
                });
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ key_hash(self.key));
        for _ in 0..SAMPLING_BUDGET {
            let mut bindings = self.fixed_bindings();
            for &name in self.generic {
                bindings.insert(name.to_string(), sample_rational(&mut rng));
            }
            bindings.extend(overrides.iter().map(|(k, v)| (k.clone(), v.clone())));
            let model = match WeierstrassModel::parse(self.f, self.g, &bindings) {
                Ok(m) => m,
                Err(Error::ZeroDiscriminant) if !self.generic.is_empty() => continue,
                Err(e) => return Err(e),
            };
            if !overrides.is_empty() || self.is_generic(&model) {
                return Ok(model);
            }
            if self.generic.is_empty() {
                break;
            }
        }
        Err(Error::SamplingFailed(format!("example {} after {SAMPLING_BUDGET} attempts", self.key)))
    }

    pub fn verify(&self, seed: u64) -> Result<EntryOutcome> {
        self.verify_with(seed, &BTreeMap::new())
    }

    /// Like [`CatalogEntry::verify`] with some parameters pinned; the expected
    /// configuration need not survive arbitrary overrides.
    pub fn verify_with(&self, seed: u64, overrides: &BTreeMap<String, BigRational>) -> Result<EntryOutcome> {
        let model = self.instantiate(seed, overrides)?;
        let report = model.classify_fibers()?;
        let invariant = weierstrass_invariance(&model, &self.action)?;
        let matches = report.configuration() == self.expected_configuration()
            && report.at_infinity() == self.at_infinity
            && report.at_origin() == self.at_origin
            && report.euler_total == 24;
        Ok(EntryOutcome {
            key: self.key.to_string(),
            model: model.to_string(),
            bindings: model.bindings().iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
            summary: report.summary(),
            expected: self.expected_summary(),
            action: self.action,
            report,
            invariant,
            matches,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryOutcome {
    pub key: String,
    pub model: String,
    pub bindings: BTreeMap<String, String>,
    pub summary: String,
    pub expected: String,
    pub action: Action,
    pub report: FibrationReport,
    pub invariant: bool,
    pub matches: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_are_unique() {
        let mut keys: Vec<_> = CATALOG.iter().flat_map(|e| [e.key, e.name]).collect();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), 2 * CATALOG.len());
    }

    #[test]
    fn expected_configurations_sum_to_24() {
        for e in example_catalog() {
            let total: u32 = e.expected.iter().map(|(t, n)| t.euler() * n).sum();
            assert_eq!(total, 24, "{}", e.key);
        }
    }

    #[test]
    fn every_entry_reproduces() {
        for e in example_catalog() {
            let out = e.verify(DEFAULT_SEED).unwrap();
            assert!(out.matches, "{}: got {} expected {}", e.key, out.summary, out.expected);
            assert!(out.invariant, "{}", e.key);
        }
    }

    #[test]
    fn lookup() {
        assert_eq!(find_example("order17").unwrap().key, "8.2");
        assert!(matches!(find_example("9.9"), Err(Error::UnknownExample(_))));
    }

    #[test]
    fn overrides_replace_samples() {
        let e = find_example("5.6").unwrap();
        let mut o = BTreeMap::new();
        o.insert("alpha".to_string(), BigRational::from_integer((-3).into()));
        o.insert("gamma".to_string(), BigRational::from_integer(2.into()));
        o.insert("beta".to_string(), BigRational::from_integer(1.into()));
        let r = e.instantiate(1, &o).unwrap().classify_fibers().unwrap();
        assert_eq!(r.at_origin(), Some(I(5)));
        o.insert("delta".to_string(), BigRational::from_integer(1.into()));
        assert!(e.instantiate(1, &o).is_err());
    }
}
