//! Bundled fixture instances with their expected results.
//!
//! Each fixture is a `.pap` file under `corpus/` with a sidecar
//! `<name>.expected.json`. The sidecar's `provenance` map says where each
//! expected value comes from: `published` for values stated with the
//! original worked example, `oracle` for values computed by the
//! brute-force reference in [`crate::oracle`], `by-construction` for
//! values that follow directly from the shape of the instance.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::kernel::{PapInstance, Solution};
use crate::parser::{parse_ground_atom_list, parse_pap, ParseError};
use crate::tsp::WeightMatrix;

/// Expected results; absent entries are not asserted.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    pub consistent: bool,
    pub optimal_cost: Option<f64>,
    /// Admissible solutions with their costs, sorted by solution.
    #[serde(default)]
    pub admissible: Option<Vec<ExpectedSolution>>,
    pub optimal: Vec<Vec<String>>,
    pub relevant: Vec<String>,
    pub necessary: Vec<String>,
    /// Stable models of the program with no hypothesis assumed.
    #[serde(default)]
    pub models: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub brave: Option<Vec<String>>,
    #[serde(default)]
    pub cautious: Option<Vec<String>>,
    pub provenance: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedSolution {
    pub atoms: Vec<String>,
    pub cost: f64,
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub source: &'static str,
    pub expected: Expected,
}

impl Fixture {
    pub fn instance(&self) -> Result<PapInstance, ParseError> {
        parse_pap(self.source)
    }
}

/// Converts rendered atoms back into a solution.
pub fn solution_of(atoms: &[String]) -> Result<Solution, ParseError> {
    Ok(parse_ground_atom_list(&atoms.join(", "))?
        .into_iter()
        .collect())
}

macro_rules! fixture {
    ($name:literal) => {
        (
            $name,
            include_str!(concat!("../corpus/", $name, ".pap")),
            include_str!(concat!("../corpus/", $name, ".expected.json")),
        )
    };
}

const RAW: [(&str, &str, &str); 8] = [
    fixture!("fishing"),
    fixture!("ex21"),
    fixture!("network_count"),
    fixture!("network_prob"),
    fixture!("tsp4"),
    fixture!("strategic4"),
    fixture!("blocks2"),
    fixture!("empty"),
];

/// Weight matrix the `tsp4` fixture was generated from.
pub const TSP4_WEIGHTS: &str = include_str!("../corpus/tsp4.weights");

pub fn tsp4_weights() -> WeightMatrix {
    WeightMatrix::parse(TSP4_WEIGHTS).expect("bundled weight matrix is valid")
}

pub fn fixtures() -> Vec<Fixture> {
    RAW.iter()
        .map(|&(name, source, expected)| Fixture {
            name,
            source,
            expected: serde_json::from_str(expected)
                .unwrap_or_else(|e| panic!("corpus/{name}.expected.json: {e}")),
        })
        .collect()
}

pub fn fixture(name: &str) -> Option<Fixture> {
    fixtures().into_iter().find(|f| f.name == name)
}
