//! Admissibility, optimization and the decision problems over an instance.
//!
//! The program is grounded once over `LP ∪ H`; a candidate set `S` is
//! tested by activating its hypotheses as facts and asking the stable
//! engine for a model satisfying the observations.
//!
//! Candidate sets are explored depth first, deciding hypotheses in order
//! of descending penalty. Two prunings apply at every node:
//!
//! * bound: all cost functions are monotone, so the cost of the hypotheses
//!   included so far bounds every completion from below;
//! * envelope: the least model of the negation-free rules plus the included
//!   hypotheses lies inside every stable model of every completion, so a
//!   negative observation already in it rules the whole subtree out.

use std::collections::BTreeSet;
use std::time::Instant;

use crate::cost::{eval_cost, EPSILON};
use crate::error::SolveError;
use crate::grounder::{ground, optimize_ground, GroundProgram};
use crate::kernel::{GroundAtom, Interpretation, PapInstance, SearchStats, Solution, SolveResult};
use crate::stable::{Check, Engine, EngineOptions, DEFAULT_NODE_CAP};

/// A solution as hypothesis indices, with its cost.
type Scored = (f64, BTreeSet<usize>);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverOptions {
    /// Cap on search nodes, applied separately to the subset search and to
    /// each stable model enumeration.
    pub node_cap: u64,
    /// Largest `|H|` accepted by [`Solver::admissible_solutions`].
    pub exhaustive_cap: usize,
    pub envelope_pruning: bool,
    pub bound_pruning: bool,
    pub stratified_fast_path: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            node_cap: DEFAULT_NODE_CAP,
            exhaustive_cap: 20,
            envelope_pruning: true,
            bound_pruning: true,
            stratified_fast_path: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Mode {
    /// Every admissible set.
    Enumerate,
    /// Least cost; all minimizers or the first one found.
    Best { all: bool },
    /// Stop at the first admissible set costing at most `limit`.
    Within { limit: f64 },
}

pub struct Solver<'p> {
    p: &'p PapInstance,
    g: GroundProgram,
    penalties: Vec<f64>,
    order: Vec<usize>,
    negative_observations: Vec<usize>,
    opts: SolverOptions,
}

struct Search<'s, 'g> {
    engine: Engine<'g>,
    checks: Vec<Check>,
    mode: Mode,
    forced: Vec<Option<bool>>,
    active: Vec<bool>,
    included: Vec<usize>,
    /// Lower bounds along the current path.
    bounds: Vec<f64>,
    incumbent: Option<f64>,
    found: Vec<(f64, BTreeSet<usize>)>,
    done: bool,
    nodes: u64,
    leaf_checks: u64,
    solver: &'s Solver<'s>,
}

impl<'p> Solver<'p> {
    pub fn new(p: &'p PapInstance) -> Result<Self, SolveError> {
        Self::with_options(p, SolverOptions::default())
    }

    pub fn with_options(p: &'p PapInstance, opts: SolverOptions) -> Result<Self, SolveError> {
        let g = optimize_ground(&ground(&p.program, &p.hypothesis_atoms())?);
        let penalties = p.penalties();
        // Fails early on penalties outside the cost function's domain.
        eval_cost(p.cost, &penalties, 0..penalties.len())?;
        let mut order: Vec<usize> = (0..penalties.len()).collect();
        order.sort_by(|&a, &b| {
            penalties[b]
                .total_cmp(&penalties[a])
                .then(g.assumables[a].cmp(&g.assumables[b]))
        });
        let negative_observations = p
            .observations
            .iter()
            .filter(|o| o.negated)
            .filter_map(|o| g.atom_id(&o.atom))
            .map(|id| id.index())
            .collect();
        Ok(Solver {
            p,
            g,
            penalties,
            order,
            negative_observations,
            opts,
        })
    }

    pub fn instance(&self) -> &PapInstance {
        self.p
    }

    pub fn ground_program(&self) -> &GroundProgram {
        &self.g
    }

    fn engine(&self) -> Engine<'_> {
        Engine::new(
            &self.g,
            EngineOptions {
                node_cap: self.opts.node_cap,
                stratified_fast_path: self.opts.stratified_fast_path,
            },
        )
    }

    fn active_for(&self, s: &BTreeSet<usize>) -> Vec<bool> {
        let chosen = self.g.active_facts(s.iter().copied());
        Interpretation(chosen).to_mask(self.g.num_atoms())
    }

    fn cost_of(&self, s: &BTreeSet<usize>) -> Result<f64, SolveError> {
        Ok(eval_cost(self.p.cost, &self.penalties, s.iter().copied())?)
    }

    /// `LP ∪ S` has a stable model satisfying every observation.
    pub fn is_admissible(&self, s: &Solution) -> Result<bool, SolveError> {
        let idx = self.p.indices_of(s)?;
        let e = self.engine();
        let checks = e.resolve(&self.p.observations);
        Ok(e.brave_mask(&self.active_for(&idx), &checks)?)
    }

    /// Every admissible solution, sorted.
    pub fn admissible_solutions(&self) -> Result<Vec<Solution>, SolveError> {
        let n = self.penalties.len();
        if n > self.opts.exhaustive_cap {
            return Err(SolveError::TooManyHypotheses {
                count: n,
                cap: self.opts.exhaustive_cap,
            });
        }
        let (found, _) = self.search(Mode::Enumerate, vec![None; n])?;
        let mut out: Vec<Solution> = found
            .into_iter()
            .map(|(_, s)| self.p.atoms_of(&s))
            .collect();
        out.sort();
        Ok(out)
    }

    /// Optimal cost with one minimizer, or all minimizers with `want_all`.
    pub fn solve(&self, want_all: bool) -> Result<SolveResult, SolveError> {
        let start = Instant::now();
        let n = self.penalties.len();
        let (found, mut stats) = self.search(Mode::Best { all: want_all }, vec![None; n])?;
        stats.elapsed = start.elapsed();
        let Some(best) = found.iter().map(|(c, _)| *c).reduce(f64::min) else {
            return Ok(SolveResult::inconsistent(stats));
        };
        let mut solutions: Vec<Solution> = found
            .into_iter()
            .filter(|(c, _)| *c <= best + EPSILON)
            .map(|(_, s)| self.p.atoms_of(&s))
            .collect();
        solutions.sort();
        solutions.dedup();
        Ok(SolveResult {
            consistent: true,
            optimal_cost: Some(best),
            solutions,
            stats,
        })
    }

    pub fn is_consistent(&self) -> Result<bool, SolveError> {
        let n = self.penalties.len();
        let (found, _) = self.search(
            Mode::Within {
                limit: f64::INFINITY,
            },
            vec![None; n],
        )?;
        Ok(!found.is_empty())
    }

    fn optimal_cost(&self) -> Result<Option<f64>, SolveError> {
        Ok(self.solve(false)?.optimal_cost)
    }

    pub fn is_optimal(&self, s: &Solution) -> Result<bool, SolveError> {
        let idx = self.p.indices_of(s)?;
        if !self.is_admissible(s)? {
            return Ok(false);
        }
        let c = self.cost_of(&idx)?;
        let best = self.optimal_cost()?.expect("an admissible set exists");
        Ok(c <= best + EPSILON)
    }

    /// Whether `h` belongs to some optimal solution. False on inconsistent
    /// instances, where there is none.
    pub fn is_relevant(&self, h: &GroundAtom) -> Result<bool, SolveError> {
        self.constrained(h, true)
            .map(|found| found.unwrap_or(false))
    }

    /// Whether `h` belongs to every optimal solution. True on inconsistent
    /// instances, where there is none.
    pub fn is_necessary(&self, h: &GroundAtom) -> Result<bool, SolveError> {
        self.constrained(h, false).map(|found| found != Some(true))
    }

    /// Whether an admissible set of optimal cost exists with `h` forced to
    /// `value`; `None` if the instance is inconsistent.
    fn constrained(&self, h: &GroundAtom, value: bool) -> Result<Option<bool>, SolveError> {
        let i = self
            .p
            .hypothesis_index(h)
            .ok_or_else(|| crate::error::InstanceError::NotAHypothesis(h.to_string()))?;
        let Some(best) = self.optimal_cost()? else {
            return Ok(None);
        };
        let mut forced = vec![None; self.penalties.len()];
        forced[i] = Some(value);
        let (found, _) = self.search(Mode::Within { limit: best }, forced)?;
        Ok(Some(!found.is_empty()))
    }

    fn search(
        &self,
        mode: Mode,
        forced: Vec<Option<bool>>,
    ) -> Result<(Vec<Scored>, SearchStats), SolveError> {
        let engine = self.engine();
        let checks = engine.resolve(&self.p.observations);
        let mut s = Search {
            engine,
            checks,
            mode,
            forced,
            active: self.active_for(&BTreeSet::new()),
            included: Vec::new(),
            bounds: Vec::new(),
            incumbent: None,
            found: Vec::new(),
            done: false,
            nodes: 0,
            leaf_checks: 0,
            solver: self,
        };
        s.visit(0)?;
        let stats = SearchStats {
            nodes_explored: s.nodes,
            admissibility_checks: s.leaf_checks,
            ..SearchStats::default()
        };
        Ok((s.found, stats))
    }
}

impl Search<'_, '_> {
    fn lower_bound(&self) -> Result<f64, SolveError> {
        let s = self.solver;
        Ok(eval_cost(
            s.p.cost,
            &s.penalties,
            self.included.iter().copied(),
        )?)
    }

    fn pruned_by_bound(&self, lb: f64) -> bool {
        if !self.solver.opts.bound_pruning {
            return false;
        }
        match self.mode {
            Mode::Enumerate => false,
            Mode::Within { limit } => lb > limit + EPSILON,
            Mode::Best { all } => match self.incumbent {
                None => false,
                Some(inc) if all => lb > inc + EPSILON,
                Some(inc) => lb >= inc - EPSILON,
            },
        }
    }

    fn pruned_by_envelope(&self) -> bool {
        if !self.solver.opts.envelope_pruning || self.solver.negative_observations.is_empty() {
            return false;
        }
        let env = self.engine.envelope_mask(&self.active);
        self.solver.negative_observations.iter().any(|&a| env[a])
    }

    fn visit(&mut self, depth: usize) -> Result<(), SolveError> {
        self.nodes += 1;
        let cap = self.solver.opts.node_cap;
        if self.nodes > cap {
            return Err(crate::error::EngineError::Capacity { cap }.into());
        }
        let lb = self.lower_bound()?;
        if self.pruned_by_bound(lb) || self.pruned_by_envelope() {
            return Ok(());
        }
        let order = &self.solver.order;
        if depth == order.len() {
            return self.leaf(lb);
        }
        let h = order[depth];
        self.bounds.push(lb);
        let branches: &[bool] = match self.forced[h] {
            Some(true) => &[true],
            Some(false) => &[false],
            None if self.incumbent.is_some() => &[true, false],
            None => &[false, true],
        };
        for &include in branches {
            if include {
                let id = self.solver.g.assumables[h].index();
                let was_active = self.active[id];
                self.active[id] = true;
                self.included.push(h);
                self.visit(depth + 1)?;
                self.included.pop();
                self.active[id] = was_active;
            } else {
                self.visit(depth + 1)?;
            }
            if self.done {
                break;
            }
        }
        self.bounds.pop();
        Ok(())
    }

    /// `lb` is the cost of the complete candidate at a leaf.
    fn leaf(&mut self, cost: f64) -> Result<(), SolveError> {
        self.leaf_checks += 1;
        if !self.engine.brave_mask(&self.active, &self.checks)? {
            return Ok(());
        }
        debug_assert!(self.bounds.iter().all(|&lb| lb <= cost + EPSILON));
        let set: BTreeSet<usize> = self.included.iter().copied().collect();
        match self.mode {
            Mode::Enumerate => self.found.push((cost, set)),
            Mode::Within { limit } => {
                if cost <= limit + EPSILON {
                    self.found.push((cost, set));
                    self.done = true;
                }
            }
            Mode::Best { all } => match self.incumbent {
                Some(inc) if cost > inc + EPSILON => {}
                Some(inc) if !all && cost >= inc - EPSILON => {}
                _ => {
                    let inc = self.incumbent.map_or(cost, |inc| inc.min(cost));
                    self.incumbent = Some(inc);
                    if all {
                        self.found.retain(|(c, _)| *c <= inc + EPSILON);
                    } else {
                        self.found.clear();
                    }
                    self.found.push((cost, set));
                }
            },
        }
        Ok(())
    }
}

pub fn is_admissible(p: &PapInstance, s: &Solution) -> Result<bool, SolveError> {
    Solver::new(p)?.is_admissible(s)
}

pub fn admissible_solutions(p: &PapInstance) -> Result<Vec<Solution>, SolveError> {
    Solver::new(p)?.admissible_solutions()
}

pub fn solve(p: &PapInstance, want_all: bool) -> Result<SolveResult, SolveError> {
    Solver::new(p)?.solve(want_all)
}

pub fn is_consistent(p: &PapInstance) -> Result<bool, SolveError> {
    Solver::new(p)?.is_consistent()
}

pub fn is_optimal(p: &PapInstance, s: &Solution) -> Result<bool, SolveError> {
    Solver::new(p)?.is_optimal(s)
}

pub fn is_relevant(p: &PapInstance, h: &GroundAtom) -> Result<bool, SolveError> {
    Solver::new(p)?.is_relevant(h)
}

pub fn is_necessary(p: &PapInstance, h: &GroundAtom) -> Result<bool, SolveError> {
    Solver::new(p)?.is_necessary(h)
}
