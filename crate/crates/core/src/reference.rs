//! Versioned reference data shipped with the crate.
//!
//! The involution triples and the moduli components are inputs to
//! classification; the remaining files are transcriptions used only to verify
//! computed output.

use serde::Deserialize;

use crate::error::{Error, Result};

pub const INVOLUTION_TRIPLES: &str = include_str!("../data/involution_triples.json");
pub const MODULI_COMPONENTS: &str = include_str!("../data/moduli_components.json");
pub const LEFSCHETZ_LINES: &str = include_str!("../data/lefschetz_lines.json");
pub const CLASSIFICATION_TABLES: &str = include_str!("../data/classification_tables.json");
pub const ORDER3_POINTS: &str = include_str!("../data/order3_points.json");
pub const LATTICE_CATALOG: &str = include_str!("../data/lattice_catalog.json");

fn load<'a, T: Deserialize<'a>>(name: &str, text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Reference(format!("{name}: {e}")))
}

#[derive(Clone, Debug, Deserialize)]
pub struct GenusLabel {
    pub r: u32,
    pub a: u32,
    pub g: u32,
}

#[derive(Clone, Debug, Deserialize)]
pub struct RationalLabel {
    pub r: u32,
    pub a: u32,
    pub k: u32,
}

#[derive(Clone, Debug, Deserialize)]
pub struct InvolutionTriples {
    pub version: u32,
    pub triples: Vec<(u32, u32, u8)>,
    pub genus_labels: Vec<GenusLabel>,
    pub rational_labels: Vec<RationalLabel>,
}

pub fn involution_triples() -> Result<InvolutionTriples> {
    load("involution_triples.json", INVOLUTION_TRIPLES)
}

#[derive(Clone, Debug, Deserialize)]
pub struct ComponentRow {
    pub p: u32,
    pub count: usize,
    pub dims: Vec<u32>,
    pub lattices: Vec<String>,
    #[serde(default)]
    pub display: Option<Vec<String>>,
    #[serde(default)]
    pub delta: Option<Vec<u8>>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ModuliComponents {
    pub version: u32,
    pub components: Vec<ComponentRow>,
}

pub fn moduli_components() -> Result<ModuliComponents> {
    load("moduli_components.json", MODULI_COMPONENTS)
}

#[derive(Clone, Debug, Deserialize)]
pub struct LefschetzLine {
    pub p: u32,
    pub alpha: String,
    pub n: Vec<String>,
    pub total: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct LefschetzLines {
    pub version: u32,
    pub rows: Vec<LefschetzLine>,
}

pub fn lefschetz_lines() -> Result<LefschetzLines> {
    load("lefschetz_lines.json", LEFSCHETZ_LINES)
}

#[derive(Clone, Debug, Deserialize)]
pub struct TableRow {
    pub n: Vec<u32>,
    #[serde(default)]
    pub g: Option<u32>,
    pub k: Option<u32>,
    #[serde(rename = "T")]
    pub t: String,
    #[serde(rename = "S")]
    pub s: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableConvention {
    GenusAndRational,
    RationalCount,
}

#[derive(Clone, Debug, Deserialize)]
pub struct PrimeTable {
    pub p: u32,
    pub convention: TableConvention,
    pub rows: Vec<TableRow>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ClosedForm {
    pub p: u32,
    pub n: String,
    pub k: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ClosedForms {
    pub rows: Vec<ClosedForm>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ClassificationTables {
    pub version: u32,
    pub tables: Vec<PrimeTable>,
    pub closed_forms: ClosedForms,
}

pub fn classification_tables() -> Result<ClassificationTables> {
    load("classification_tables.json", CLASSIFICATION_TABLES)
}

#[derive(Clone, Debug, Deserialize)]
pub struct ChartLabel {
    pub m: u32,
    #[serde(default)]
    pub a: u32,
    #[serde(alias = "k", alias = "g", alias = "n")]
    pub value: u32,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Order3Points {
    pub version: u32,
    pub points: Vec<(u32, u32)>,
    pub k_labels: Vec<ChartLabel>,
    pub g_labels: Vec<ChartLabel>,
    pub n_labels: Vec<ChartLabel>,
}

pub fn order3_points() -> Result<Order3Points> {
    load("order3_points.json", ORDER3_POINTS)
}

#[derive(Clone, Debug, Deserialize)]
pub struct CatalogEntry {
    pub expr: String,
    pub kind: String,
    #[serde(default)]
    pub elementary: Option<String>,
    #[serde(default)]
    pub p: Option<u64>,
    #[serde(default)]
    pub a: Option<usize>,
    #[serde(default)]
    pub same_as: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct LatticeCatalog {
    pub version: u32,
    pub entries: Vec<CatalogEntry>,
}

pub fn lattice_catalog() -> Result<LatticeCatalog> {
    load("lattice_catalog.json", LATTICE_CATALOG)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_reference_files_parse() {
        assert_eq!(involution_triples().unwrap().triples.len(), 75);
        assert_eq!(moduli_components().unwrap().components.len(), 8);
        assert_eq!(lefschetz_lines().unwrap().rows.len(), 8);
        assert_eq!(classification_tables().unwrap().tables.len(), 6);
        assert_eq!(order3_points().unwrap().points.len(), 24);
        assert!(!lattice_catalog().unwrap().entries.is_empty());
    }
}
