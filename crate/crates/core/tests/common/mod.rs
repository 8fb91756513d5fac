#![allow(dead_code)]

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;

use pap_core::{CostFunction, Solution, WeightMatrix};

/// Size limits for random propositional instances.
#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub atoms: usize,
    pub hypotheses: usize,
    pub rules: usize,
}

pub const SMALL: Shape = Shape {
    atoms: 14,
    hypotheses: 10,
    rules: 14,
};

/// A random propositional instance in `.pap` syntax over atoms `p0..`,
/// with negation in bodies and a random cost function.
pub fn random_pap(rng: &mut impl Rng, shape: Shape) -> String {
    let n = rng.gen_range(1..=shape.atoms);
    let atoms: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let mut text = String::new();
    for _ in 0..rng.gen_range(0..=shape.rules) {
        let head = atoms.choose(rng).unwrap();
        let mut body = Vec::new();
        for _ in 0..rng.gen_range(0..=2) {
            body.push(atoms.choose(rng).unwrap().clone());
        }
        for _ in 0..rng.gen_range(0..=2) {
            body.push(format!("not {}", atoms.choose(rng).unwrap()));
        }
        if body.is_empty() {
            writeln!(text, "{head}.").unwrap();
        } else {
            writeln!(text, "{head} :- {}.", body.join(", ")).unwrap();
        }
    }
    let cost = *CostFunction::ALL.choose(rng).unwrap();
    let k = rng.gen_range(0..=shape.hypotheses.min(n));
    for h in atoms.choose_multiple(rng, k) {
        let penalty = match cost {
            CostFunction::Prob => format!("0.{}", rng.gen_range(1..=9)),
            _ => rng.gen_range(1..=5).to_string(),
        };
        writeln!(text, "#hypothesis {h} penalty {penalty}.").unwrap();
    }
    for _ in 0..rng.gen_range(0..=3) {
        let neg = if rng.gen_bool(0.4) { "not " } else { "" };
        writeln!(text, "#observe {neg}{}.", atoms.choose(rng).unwrap()).unwrap();
    }
    writeln!(text, "#cost {cost}.").unwrap();
    text
}

/// Random weights in `1..=max` off the diagonal.
pub fn random_matrix(rng: &mut impl Rng, n: usize, max: i64) -> WeightMatrix {
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { 0 } else { rng.gen_range(1..=max) })
                .collect()
        })
        .collect();
    WeightMatrix::new(rows).unwrap()
}

pub fn show(s: &Solution) -> String {
    let atoms: Vec<String> = s.iter().map(|a| a.to_string()).collect();
    format!("{{{}}}", atoms.join(", "))
}

/// Arc `(i, j)` of a solution atom `c(i,j)`.
pub fn arcs(s: &Solution) -> std::collections::BTreeSet<(usize, usize)> {
    s.iter()
        .map(|a| {
            let n: Vec<usize> = a
                .args
                .iter()
                .map(|v| v.to_string().parse().unwrap())
                .collect();
            (n[0], n[1])
        })
        .collect()
}
