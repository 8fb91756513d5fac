//! Brute-force reference implementations for differential testing.
//!
//! Nothing here shares code with the stable engine or the solver: the
//! reduct and least model are recomputed naively, every hypothesis subset
//! is grounded from scratch as `LP ∪ S`, and tours are plain permutations.

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::cost::{eval_cost, EPSILON};
use crate::error::{OracleError, TspError};
use crate::grounder::{ground, GroundProgram};
use crate::kernel::{GroundAtom, Interpretation, PapInstance, Program, Rule, Solution};
use crate::tsp::WeightMatrix;

/// Largest number of guessed atoms in [`oracle_stable_models`].
pub const GUESS_CAP: usize = 24;
/// Largest atom table for [`oracle_stable_models_exhaustive`].
pub const BASE_CAP: usize = 20;
/// Largest hypothesis set for [`oracle_pap`].
pub const HYPOTHESIS_CAP: usize = 16;

/// Least model of the reduct with respect to `guess`, by repeated passes.
fn naive_lm(g: &GroundProgram, active: &[bool], guess: &[bool]) -> Vec<bool> {
    let mut m = active.to_vec();
    loop {
        let mut changed = false;
        for r in &g.rules {
            if m[r.head.index()] || r.neg.iter().any(|a| guess[a.index()]) {
                continue;
            }
            if r.pos.iter().all(|a| m[a.index()]) {
                m[r.head.index()] = true;
                changed = true;
            }
        }
        if !changed {
            return m;
        }
    }
}

fn active_mask(g: &GroundProgram, active: &BTreeSet<crate::kernel::AtomId>) -> Vec<bool> {
    let mut v = vec![false; g.num_atoms()];
    for a in active {
        v[a.index()] = true;
    }
    v
}

fn to_interp(m: &[bool]) -> Interpretation {
    Interpretation::from_mask(m)
}

/// Stable models by guessing which negated atoms are true.
///
/// The reduct depends only on the negated atoms, so every stable model is
/// `lm(P^N)` for the guess `N` it induces on them. Guesses are restricted
/// to negated atoms derivable when negation is ignored.
pub fn oracle_stable_models(
    g: &GroundProgram,
    active: &BTreeSet<crate::kernel::AtomId>,
) -> Result<Vec<Interpretation>, OracleError> {
    let n = g.num_atoms();
    let act = active_mask(g, active);
    let upper = naive_lm(g, &act, &vec![false; n]);
    let mut negated = vec![false; n];
    for r in &g.rules {
        for a in &r.neg {
            negated[a.index()] = true;
        }
    }
    let cands: Vec<usize> = (0..n).filter(|&a| negated[a] && upper[a]).collect();
    if cands.len() > GUESS_CAP {
        return Err(OracleError::Cap {
            what: "guessed atom count",
            size: cands.len(),
            limit: GUESS_CAP,
        });
    }
    let mut out = Vec::new();
    for bits in 0u32..(1u32 << cands.len()) {
        let mut guess = vec![false; n];
        for (k, &a) in cands.iter().enumerate() {
            guess[a] = bits >> k & 1 == 1;
        }
        let m = naive_lm(g, &act, &guess);
        if cands.iter().all(|&a| m[a] == guess[a]) {
            out.push(to_interp(&m));
        }
    }
    out.sort();
    Ok(out)
}

/// Stable models by testing every subset of the atom table.
pub fn oracle_stable_models_exhaustive(
    g: &GroundProgram,
    active: &BTreeSet<crate::kernel::AtomId>,
) -> Result<Vec<Interpretation>, OracleError> {
    let n = g.num_atoms();
    if n > BASE_CAP {
        return Err(OracleError::Cap {
            what: "atom count",
            size: n,
            limit: BASE_CAP,
        });
    }
    let act = active_mask(g, active);
    let mut out = Vec::new();
    for bits in 0u32..(1u32 << n) {
        let i: Vec<bool> = (0..n).map(|a| bits >> a & 1 == 1).collect();
        if naive_lm(g, &act, &i) == i {
            out.push(to_interp(&i));
        }
    }
    out.sort();
    Ok(out)
}

/// Admissible and optimal solutions of an instance by full enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    /// Every admissible solution with its cost, sorted by solution.
    pub admissible: Vec<(Solution, f64)>,
    pub optimal: Vec<Solution>,
    pub optimal_cost: Option<f64>,
}

impl OracleReport {
    pub fn consistent(&self) -> bool {
        !self.admissible.is_empty()
    }

    pub fn is_admissible(&self, s: &Solution) -> bool {
        self.admissible.iter().any(|(a, _)| a == s)
    }

    pub fn is_optimal(&self, s: &Solution) -> bool {
        self.optimal.contains(s)
    }

    pub fn relevant(&self, h: &GroundAtom) -> bool {
        self.optimal.iter().any(|s| s.contains(h))
    }

    /// Vacuously true when there is no optimal solution.
    pub fn necessary(&self, h: &GroundAtom) -> bool {
        self.optimal.iter().all(|s| s.contains(h))
    }
}

/// Whether `LP ∪ S` has a stable model satisfying the observations.
pub fn oracle_admissible(p: &PapInstance, s: &Solution) -> Result<bool, OracleError> {
    let mut rules = p.program.rules.clone();
    rules.extend(s.iter().map(|a| Rule::fact(a.to_atom())));
    let g = ground(&Program::new(rules), &[])?;
    let models = oracle_stable_models(&g, &g.facts)?;
    Ok(models.iter().any(|m| {
        p.observations.iter().all(|o| {
            let holds = g.atom_id(&o.atom).is_some_and(|id| m.contains(id));
            holds != o.negated
        })
    }))
}

pub fn oracle_pap(p: &PapInstance) -> Result<OracleReport, OracleError> {
    let h = p.hypothesis_atoms();
    if h.len() > HYPOTHESIS_CAP {
        return Err(OracleError::Cap {
            what: "hypothesis count",
            size: h.len(),
            limit: HYPOTHESIS_CAP,
        });
    }
    let penalties = p.penalties();
    let mut admissible = Vec::new();
    for bits in 0u32..(1u32 << h.len()) {
        let idx: Vec<usize> = (0..h.len()).filter(|&i| bits >> i & 1 == 1).collect();
        let s: Solution = idx.iter().map(|&i| h[i].clone()).collect();
        if oracle_admissible(p, &s)? {
            let c = eval_cost(p.cost, &penalties, idx)?;
            admissible.push((s, c));
        }
    }
    admissible.sort_by(|a, b| a.0.cmp(&b.0));
    let optimal_cost = admissible.iter().map(|(_, c)| *c).reduce(f64::min);
    let optimal = match optimal_cost {
        Some(best) => admissible
            .iter()
            .filter(|(_, c)| *c <= best + EPSILON)
            .map(|(s, _)| s.clone())
            .collect(),
        None => Vec::new(),
    };
    Ok(OracleReport {
        admissible,
        optimal,
        optimal_cost,
    })
}

/// A closed tour visiting cities `1..=n`, always starting at city 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Tour {
    pub order: Vec<usize>,
}

impl Tour {
    pub fn arcs(&self) -> BTreeSet<(usize, usize)> {
        let n = self.order.len();
        (0..n)
            .map(|k| (self.order[k], self.order[(k + 1) % n]))
            .collect()
    }

    pub fn weight(&self, w: &WeightMatrix) -> i64 {
        self.arcs().iter().map(|&(i, j)| w.weight(i, j)).sum()
    }
}

/// Minimum tour weight and every tour attaining it.
pub fn oracle_tsp(w: &WeightMatrix) -> Result<(i64, Vec<Tour>), TspError> {
    let n = w.n();
    if !(2..=8).contains(&n) {
        return Err(TspError::OutOfRange(n));
    }
    let tours: Vec<(i64, Tour)> = (2..=n)
        .permutations(n - 1)
        .map(|rest| {
            let mut order = vec![1];
            order.extend(rest);
            let t = Tour { order };
            (t.weight(w), t)
        })
        .collect();
    let best = tours
        .iter()
        .map(|(c, _)| *c)
        .min()
        .expect("at least one tour");
    let optimal = tours
        .into_iter()
        .filter(|(c, _)| *c == best)
        .map(|(_, t)| t)
        .collect();
    Ok((best, optimal))
}
