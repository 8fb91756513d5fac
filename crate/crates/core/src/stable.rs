//! Stable model engine.
//!
//! Stable models of a ground program are computed by branching on the atoms
//! that occur under default negation. Once all of them are decided the
//! Gelfond-Lifschitz reduct is fixed, so its least model is the only
//! candidate for that branch; it is kept if it agrees with every decision.
//! Unit-style propagation (forward firing, unsupported atoms are false, a
//! false head falsifies the last open body literal, a true atom with a
//! single live rule forces that body) prunes branches early.
//!
//! Stratified programs skip the search and are evaluated stratum by stratum.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::error::EngineError;
use crate::grounder::{GroundProgram, GroundRule};
use crate::kernel::{AtomId, GroundLiteral, Interpretation};

/// Default cap on search nodes per enumeration.
pub const DEFAULT_NODE_CAP: u64 = 1 << 20;

/// A negation-free ground program.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReductProgram {
    /// `(head, positive body)` pairs.
    pub rules: Vec<(AtomId, Vec<AtomId>)>,
}

/// Gelfond-Lifschitz reduct of `g` plus `active_facts` with respect to `i`:
/// rules with a negative body atom in `i` are dropped, the remaining ones
/// lose their negative body.
pub fn reduct(
    g: &GroundProgram,
    active_facts: &BTreeSet<AtomId>,
    i: &Interpretation,
) -> ReductProgram {
    let mut rules: Vec<(AtomId, Vec<AtomId>)> =
        active_facts.iter().map(|&f| (f, Vec::new())).collect();
    rules.extend(
        g.rules
            .iter()
            .filter(|r| r.neg.iter().all(|n| !i.contains(*n)))
            .map(|r| (r.head, r.pos.clone())),
    );
    ReductProgram { rules }
}

/// Least model of a positive program, by counting unsatisfied body atoms.
pub fn least_model(p: &ReductProgram) -> Interpretation {
    let n = p
        .rules
        .iter()
        .flat_map(|(h, b)| std::iter::once(h).chain(b))
        .map(|a| a.index() + 1)
        .max()
        .unwrap_or(0);
    let mut watch: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut missing: Vec<usize> = Vec::with_capacity(p.rules.len());
    let mut model = vec![false; n];
    let mut queue = Vec::new();
    for (ri, (head, body)) in p.rules.iter().enumerate() {
        for a in body {
            watch[a.index()].push(ri);
        }
        missing.push(body.len());
        if body.is_empty() && !model[head.index()] {
            model[head.index()] = true;
            queue.push(*head);
        }
    }
    while let Some(a) = queue.pop() {
        for &ri in &watch[a.index()] {
            missing[ri] -= 1;
            let head = p.rules[ri].0;
            if missing[ri] == 0 && !model[head.index()] {
                model[head.index()] = true;
                queue.push(head);
            }
        }
    }
    Interpretation::from_mask(&model)
}

/// `i` is a stable model iff it is the least model of its own reduct.
pub fn is_stable(g: &GroundProgram, active_facts: &BTreeSet<AtomId>, i: &Interpretation) -> bool {
    least_model(&reduct(g, active_facts, i)) == *i
}

pub fn stable_models(
    g: &GroundProgram,
    active_facts: &BTreeSet<AtomId>,
) -> Result<Vec<Interpretation>, EngineError> {
    Engine::new(g, EngineOptions::default()).stable_models(active_facts)
}

pub fn brave_entails(
    g: &GroundProgram,
    active_facts: &BTreeSet<AtomId>,
    lits: &[GroundLiteral],
) -> Result<bool, EngineError> {
    Engine::new(g, EngineOptions::default()).brave_entails(active_facts, lits)
}

pub fn cautious_entails(
    g: &GroundProgram,
    active_facts: &BTreeSet<AtomId>,
    lits: &[GroundLiteral],
) -> Result<bool, EngineError> {
    Engine::new(g, EngineOptions::default()).cautious_entails(active_facts, lits)
}

/// Least model of the negation-free rules plus `active_facts`. It is
/// contained in every stable model of the program under any superset of
/// `active_facts`.
pub fn positive_envelope(g: &GroundProgram, active_facts: &BTreeSet<AtomId>) -> Interpretation {
    let e = Engine::new(g, EngineOptions::default());
    Interpretation::from_mask(&e.envelope_mask(&e.mask(active_facts)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineOptions {
    pub node_cap: u64,
    pub stratified_fast_path: bool,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            node_cap: DEFAULT_NODE_CAP,
            stratified_fast_path: true,
        }
    }
}

/// A literal resolved against the atom table. Atoms unknown to the ground
/// program are false in every model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Check {
    Atom { id: usize, negated: bool },
    Absent { negated: bool },
}

impl Check {
    fn holds(self, model: &[bool]) -> bool {
        match self {
            Check::Atom { id, negated } => model[id] != negated,
            Check::Absent { negated } => negated,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Val {
    Unknown,
    True,
    False,
}

/// Indexed view of a ground program, reused across many calls with
/// different active fact sets.
#[derive(Debug)]
pub struct Engine<'g> {
    g: &'g GroundProgram,
    opts: EngineOptions,
    heads_of: Vec<Vec<usize>>,
    /// Rules per positive body occurrence.
    watch: Vec<Vec<usize>>,
    neg_atoms: Vec<usize>,
    positive_rules: Vec<usize>,
    /// Rule indices per stratum, lowest first; `None` if not stratified.
    strata: Option<Vec<Vec<usize>>>,
}

impl<'g> Engine<'g> {
    pub fn new(g: &'g GroundProgram, opts: EngineOptions) -> Self {
        let n = g.num_atoms();
        let mut heads_of = vec![Vec::new(); n];
        let mut watch = vec![Vec::new(); n];
        let mut is_neg = vec![false; n];
        let mut positive_rules = Vec::new();
        for (ri, r) in g.rules.iter().enumerate() {
            heads_of[r.head.index()].push(ri);
            for a in &r.pos {
                watch[a.index()].push(ri);
            }
            for a in &r.neg {
                is_neg[a.index()] = true;
            }
            if r.neg.is_empty() {
                positive_rules.push(ri);
            }
        }
        let neg_atoms = (0..n).filter(|&a| is_neg[a]).collect();
        Engine {
            g,
            opts,
            heads_of,
            watch,
            neg_atoms,
            positive_rules,
            strata: stratify(g),
        }
    }

    pub fn program(&self) -> &GroundProgram {
        self.g
    }

    /// Whether negation lies on no cycle of the predicate dependency graph.
    pub fn is_stratified(&self) -> bool {
        self.strata.is_some()
    }

    pub(crate) fn mask(&self, set: &BTreeSet<AtomId>) -> Vec<bool> {
        Interpretation(set.clone()).to_mask(self.g.num_atoms())
    }

    pub(crate) fn resolve(&self, lits: &[GroundLiteral]) -> Vec<Check> {
        lits.iter()
            .map(|l| match self.g.atom_id(&l.atom) {
                Some(id) => Check::Atom {
                    id: id.index(),
                    negated: l.negated,
                },
                None => Check::Absent { negated: l.negated },
            })
            .collect()
    }

    pub fn stable_models(
        &self,
        active_facts: &BTreeSet<AtomId>,
    ) -> Result<Vec<Interpretation>, EngineError> {
        let mut out = Vec::new();
        self.each_model(&self.mask(active_facts), &[], &mut |m| {
            out.push(Interpretation::from_mask(m));
            ControlFlow::Continue(())
        })?;
        out.sort();
        Ok(out)
    }

    pub fn brave_entails(
        &self,
        active_facts: &BTreeSet<AtomId>,
        lits: &[GroundLiteral],
    ) -> Result<bool, EngineError> {
        self.brave_mask(&self.mask(active_facts), &self.resolve(lits))
    }

    pub fn cautious_entails(
        &self,
        active_facts: &BTreeSet<AtomId>,
        lits: &[GroundLiteral],
    ) -> Result<bool, EngineError> {
        let checks = self.resolve(lits);
        let mut all = true;
        self.each_model(&self.mask(active_facts), &[], &mut |m| {
            if checks.iter().all(|c| c.holds(m)) {
                ControlFlow::Continue(())
            } else {
                all = false;
                ControlFlow::Break(())
            }
        })?;
        Ok(all)
    }

    /// Some stable model satisfies every check.
    pub(crate) fn brave_mask(
        &self,
        active: &[bool],
        checks: &[Check],
    ) -> Result<bool, EngineError> {
        let mut constraints = Vec::with_capacity(checks.len());
        for c in checks {
            match *c {
                Check::Absent { negated: false } => return Ok(false),
                Check::Absent { negated: true } => {}
                Check::Atom { id, negated } => constraints.push((id, !negated)),
            }
        }
        let mut found = false;
        self.each_model(active, &constraints, &mut |m| {
            if checks.iter().all(|c| c.holds(m)) {
                found = true;
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        Ok(found)
    }

    pub(crate) fn envelope_mask(&self, active: &[bool]) -> Vec<bool> {
        let mut model = active.to_vec();
        self.saturate(&mut model, self.positive_rules.iter().copied());
        model
    }

    /// Calls `visit` on stable models until it breaks. With constraints
    /// `(atom, value)`, models violating them may be skipped.
    fn each_model(
        &self,
        active: &[bool],
        constraints: &[(usize, bool)],
        visit: &mut dyn FnMut(&[bool]) -> ControlFlow<()>,
    ) -> Result<(), EngineError> {
        if self.opts.stratified_fast_path {
            if let Some(strata) = &self.strata {
                let m = self.stratified_model(active, strata);
                debug_assert!(self.check_stable(active, &m));
                if constraints.iter().all(|&(a, v)| m[a] == v) {
                    let _ = visit(&m);
                }
                return Ok(());
            }
        }
        let mut assign = vec![Val::Unknown; self.g.num_atoms()];
        for &(a, v) in constraints {
            let want = if v { Val::True } else { Val::False };
            if assign[a] != Val::Unknown && assign[a] != want {
                return Ok(());
            }
            assign[a] = want;
        }
        let mut nodes = 0u64;
        self.branch(active, assign, &mut nodes, visit).map(|_| ())
    }

    fn branch(
        &self,
        active: &[bool],
        mut assign: Vec<Val>,
        nodes: &mut u64,
        visit: &mut dyn FnMut(&[bool]) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>, EngineError> {
        *nodes += 1;
        if *nodes > self.opts.node_cap {
            return Err(EngineError::Capacity {
                cap: self.opts.node_cap,
            });
        }
        if !self.propagate(active, &mut assign) {
            return Ok(ControlFlow::Continue(()));
        }
        let Some(&pick) = self.neg_atoms.iter().find(|&&a| assign[a] == Val::Unknown) else {
            let m = self.reduct_model(active, &assign);
            let agrees = assign.iter().zip(&m).all(|(v, &t)| match v {
                Val::Unknown => true,
                Val::True => t,
                Val::False => !t,
            });
            if agrees && self.check_stable(active, &m) {
                return Ok(visit(&m));
            }
            return Ok(ControlFlow::Continue(()));
        };
        for v in [Val::True, Val::False] {
            let mut next = assign.clone();
            next[pick] = v;
            if self.branch(active, next, nodes, visit)?.is_break() {
                return Ok(ControlFlow::Break(()));
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    fn body_state(&self, r: &GroundRule, assign: &[Val]) -> (bool, usize, Option<(usize, bool)>) {
        let mut falsified = false;
        let mut open = 0;
        let mut last = None;
        for a in &r.pos {
            match assign[a.index()] {
                Val::False => falsified = true,
                Val::Unknown => {
                    open += 1;
                    last = Some((a.index(), false));
                }
                Val::True => {}
            }
        }
        for a in &r.neg {
            match assign[a.index()] {
                Val::True => falsified = true,
                Val::Unknown => {
                    open += 1;
                    last = Some((a.index(), true));
                }
                Val::False => {}
            }
        }
        (falsified, open, last)
    }

    /// Returns false on conflict.
    fn propagate(&self, active: &[bool], assign: &mut [Val]) -> bool {
        fn set(assign: &mut [Val], a: usize, v: Val, changed: &mut bool) -> bool {
            match assign[a] {
                Val::Unknown => {
                    assign[a] = v;
                    *changed = true;
                    true
                }
                cur => cur == v,
            }
        }
        loop {
            let mut changed = false;
            for r in &self.g.rules {
                let (falsified, open, last) = self.body_state(r, assign);
                if falsified {
                    continue;
                }
                if open == 0 {
                    if !set(assign, r.head.index(), Val::True, &mut changed) {
                        return false;
                    }
                } else if open == 1 && assign[r.head.index()] == Val::False {
                    let (a, under_not) = last.expect("one open literal");
                    let v = if under_not { Val::True } else { Val::False };
                    if !set(assign, a, v, &mut changed) {
                        return false;
                    }
                }
            }
            for a in 0..assign.len() {
                if active[a] {
                    if !set(assign, a, Val::True, &mut changed) {
                        return false;
                    }
                    continue;
                }
                let mut live = self.heads_of[a]
                    .iter()
                    .filter(|&&ri| !self.body_state(&self.g.rules[ri], assign).0);
                match (live.next(), live.next()) {
                    (None, _) => {
                        if !set(assign, a, Val::False, &mut changed) {
                            return false;
                        }
                    }
                    (Some(&ri), None) if assign[a] == Val::True => {
                        let r = &self.g.rules[ri];
                        for p in &r.pos {
                            if !set(assign, p.index(), Val::True, &mut changed) {
                                return false;
                            }
                        }
                        for n in &r.neg {
                            if !set(assign, n.index(), Val::False, &mut changed) {
                                return false;
                            }
                        }
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    /// Least model of the reduct once every negated atom is decided.
    fn reduct_model(&self, active: &[bool], assign: &[Val]) -> Vec<bool> {
        let mut m = active.to_vec();
        let rules = (0..self.g.rules.len()).filter(|&ri| {
            self.g.rules[ri]
                .neg
                .iter()
                .all(|n| assign[n.index()] == Val::False)
        });
        self.saturate(&mut m, rules);
        m
    }

    fn check_stable(&self, active: &[bool], m: &[bool]) -> bool {
        let mut lm = active.to_vec();
        let rules = (0..self.g.rules.len())
            .filter(|&ri| self.g.rules[ri].neg.iter().all(|n| !m[n.index()]));
        self.saturate(&mut lm, rules);
        lm == m
    }

    fn stratified_model(&self, active: &[bool], strata: &[Vec<usize>]) -> Vec<bool> {
        let mut m = active.to_vec();
        for stratum in strata {
            let enabled: Vec<usize> = stratum
                .iter()
                .copied()
                .filter(|&ri| self.g.rules[ri].neg.iter().all(|n| !m[n.index()]))
                .collect();
            self.saturate(&mut m, enabled.into_iter());
        }
        m
    }

    /// Closes `model` under the given rules, ignoring their negative bodies.
    fn saturate(&self, model: &mut [bool], rules: impl Iterator<Item = usize>) {
        let mut missing: Vec<Option<usize>> = vec![None; self.g.rules.len()];
        let mut ready = Vec::new();
        for ri in rules {
            let m = self.g.rules[ri]
                .pos
                .iter()
                .filter(|a| !model[a.index()])
                .count();
            missing[ri] = Some(m);
            if m == 0 {
                ready.push(ri);
            }
        }
        let mut queue = Vec::new();
        for ri in ready {
            let head = self.g.rules[ri].head.index();
            if !model[head] {
                model[head] = true;
                queue.push(head);
            }
        }
        while let Some(a) = queue.pop() {
            for &ri in &self.watch[a] {
                if let Some(m) = missing[ri].as_mut() {
                    *m -= 1;
                    let head = self.g.rules[ri].head.index();
                    if *m == 0 && !model[head] {
                        model[head] = true;
                        queue.push(head);
                    }
                }
            }
        }
    }
}

/// Groups rules into strata along the predicate dependency graph, or
/// returns `None` when some negative dependency lies on a cycle.
fn stratify(g: &GroundProgram) -> Option<Vec<Vec<usize>>> {
    let mut graph: DiGraph<(), bool> = DiGraph::new();
    let mut node_of = std::collections::HashMap::new();
    let mut node = |graph: &mut DiGraph<(), bool>, id: AtomId| -> NodeIndex {
        let a = g.atom(id);
        *node_of
            .entry((a.predicate.clone(), a.arity()))
            .or_insert_with(|| graph.add_node(()))
    };
    let mut rule_node = Vec::with_capacity(g.rules.len());
    for r in &g.rules {
        let h = node(&mut graph, r.head);
        rule_node.push(h);
        for &b in &r.pos {
            let b = node(&mut graph, b);
            graph.add_edge(b, h, false);
        }
        for &b in &r.neg {
            let b = node(&mut graph, b);
            graph.add_edge(b, h, true);
        }
    }
    // tarjan_scc yields components in reverse topological order.
    let mut sccs = tarjan_scc(&graph);
    sccs.reverse();
    let mut comp = vec![0usize; graph.node_count()];
    for (i, scc) in sccs.iter().enumerate() {
        for n in scc {
            comp[n.index()] = i;
        }
    }
    for e in graph.edge_indices() {
        let (from, to) = graph.edge_endpoints(e).expect("edge exists");
        if graph[e] && comp[from.index()] == comp[to.index()] {
            return None;
        }
    }
    let mut strata = vec![Vec::new(); sccs.len()];
    for (ri, h) in rule_node.into_iter().enumerate() {
        strata[comp[h.index()]].push(ri);
    }
    strata.retain(|s| !s.is_empty());
    Some(strata)
}
