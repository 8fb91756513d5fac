//! Herbrand instantiation.
//!
//! The program is grounded once over `LP ∪ H`, with the hypotheses present
//! as *assumable* atoms rather than facts. Any `S ⊆ H` is then evaluated by
//! activating the assumables of `S` next to the program facts, so a single
//! ground program serves every candidate explanation.
//!
//! Instantiation is naive bottom-up: non-ground rules are joined against the
//! atoms that may become true (facts, assumables and heads produced so far)
//! until no new ground rule appears. Comparisons are evaluated as soon as
//! their variables are bound and never survive into the ground program.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::error::GroundError;
use crate::kernel::{
    ArithOp, Atom, AtomId, CmpOp, Comparison, Expr, GroundAtom, Interpretation, Program, Rule,
    Term, Value,
};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundRule {
    pub head: AtomId,
    pub pos: Vec<AtomId>,
    pub neg: Vec<AtomId>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroundProgram {
    atoms: Vec<GroundAtom>,
    index: HashMap<GroundAtom, AtomId>,
    /// Rules with a non-empty body.
    pub rules: Vec<GroundRule>,
    /// Program facts.
    pub facts: BTreeSet<AtomId>,
    /// Atom ids of the hypotheses, in hypothesis order.
    pub assumables: Vec<AtomId>,
}

impl GroundProgram {
    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn atom(&self, id: AtomId) -> &GroundAtom {
        &self.atoms[id.index()]
    }

    pub fn atoms(&self) -> &[GroundAtom] {
        &self.atoms
    }

    pub fn atom_id(&self, atom: &GroundAtom) -> Option<AtomId> {
        self.index.get(atom).copied()
    }

    fn intern(&mut self, atom: GroundAtom) -> AtomId {
        if let Some(&id) = self.index.get(&atom) {
            return id;
        }
        let id = AtomId(self.atoms.len() as u32);
        self.index.insert(atom.clone(), id);
        self.atoms.push(atom);
        id
    }

    /// Facts plus the assumables selected by `chosen` (hypothesis indices).
    pub fn active_facts(&self, chosen: impl IntoIterator<Item = usize>) -> BTreeSet<AtomId> {
        let mut f = self.facts.clone();
        f.extend(chosen.into_iter().map(|i| self.assumables[i]));
        f
    }

    /// Renders an interpretation as sorted atom text.
    pub fn render(&self, i: &Interpretation) -> Vec<String> {
        let mut v: Vec<String> = i.iter().map(|id| self.atom(id).to_string()).collect();
        v.sort();
        v
    }

    pub fn rule_to_string(&self, r: &GroundRule) -> String {
        let mut s = self.atom(r.head).to_string();
        if !r.pos.is_empty() || !r.neg.is_empty() {
            s.push_str(" :- ");
            let body: Vec<String> = r
                .pos
                .iter()
                .map(|&a| self.atom(a).to_string())
                .chain(r.neg.iter().map(|&a| format!("not {}", self.atom(a))))
                .collect();
            s.push_str(&body.join(", "));
        }
        s.push('.');
        s
    }

    /// Byte-stable text dump: sorted facts, then sorted rules, one per line.
    pub fn dump(&self) -> String {
        let mut facts: Vec<String> = self
            .facts
            .iter()
            .map(|&f| format!("{}.", self.atom(f)))
            .collect();
        facts.sort();
        let mut rules: Vec<String> = self.rules.iter().map(|r| self.rule_to_string(r)).collect();
        rules.sort();
        let mut out = String::new();
        for line in facts.iter().chain(rules.iter()) {
            out.push_str(line);
            out.push('\n');
        }
        out
    }
}

/// All constants occurring as atom arguments in `p` or in `h`.
pub fn herbrand_universe(p: &Program, h: &[GroundAtom]) -> BTreeSet<Value> {
    let mut out: BTreeSet<Value> = p
        .rules
        .iter()
        .flat_map(Rule::atoms)
        .flat_map(|a| a.args.iter().filter_map(Term::as_value))
        .collect();
    out.extend(h.iter().flat_map(|a| a.args.iter().cloned()));
    out
}

type Binding = HashMap<String, Value>;

fn render_binding(b: &Binding) -> String {
    let mut v: Vec<String> = b.iter().map(|(k, v)| format!("{k}={v}")).collect();
    v.sort();
    v.join(", ")
}

enum Evaluated {
    Int(i64),
    Plain(Value),
}

fn eval_expr(e: &Expr, b: &Binding) -> Result<Evaluated, String> {
    match e {
        Expr::Int(i) => Ok(Evaluated::Int(*i)),
        Expr::Var(v) => Ok(match &b[v] {
            Value::Int(i) => Evaluated::Int(*i),
            other => Evaluated::Plain(other.clone()),
        }),
        Expr::Bin(l, op, r) => {
            let l = eval_int(l, b, *op)?;
            let r = eval_int(r, b, *op)?;
            op.apply(l, r)
                .map(Evaluated::Int)
                .ok_or_else(|| format!("integer overflow in `{e}`"))
        }
    }
}

fn eval_int(e: &Expr, b: &Binding, op: ArithOp) -> Result<i64, String> {
    match eval_expr(e, b)? {
        Evaluated::Int(i) => Ok(i),
        Evaluated::Plain(v) => Err(format!(
            "arithmetic `{}` on non-integer constant `{v}`",
            op.symbol()
        )),
    }
}

/// Evaluates a comparison. `=` and `!=` compare symbolic constants by
/// identity; ordering and arithmetic require integers.
fn eval_comparison(c: &Comparison, b: &Binding) -> Result<bool, String> {
    let l = eval_expr(&c.lhs, b)?;
    let r = eval_expr(&c.rhs, b)?;
    match (l, r) {
        (Evaluated::Int(x), Evaluated::Int(y)) => Ok(c.op.holds(&x, &y)),
        (l, r) if c.op.is_equality() => {
            let as_value = |e: Evaluated| match e {
                Evaluated::Int(i) => Value::Int(i),
                Evaluated::Plain(v) => v,
            };
            let equal = as_value(l) == as_value(r);
            Ok(if c.op == CmpOp::Eq { equal } else { !equal })
        }
        (Evaluated::Plain(v), _) | (_, Evaluated::Plain(v)) => Err(format!(
            "comparison `{}` on non-integer constant `{v}`",
            c.op.symbol()
        )),
    }
}

fn instantiate(atom: &Atom, b: &Binding) -> GroundAtom {
    GroundAtom {
        predicate: atom.predicate.clone(),
        args: atom
            .args
            .iter()
            .map(|t| match t {
                Term::Const(s) => Value::Sym(s.clone()),
                Term::Int(i) => Value::Int(*i),
                Term::Var(v) => b[v].clone(),
                Term::Anon => unreachable!("anonymous variables only occur in positive bodies"),
            })
            .collect(),
    }
}

/// Extends `b` so that `atom` matches `ground`; returns the variables bound.
fn unify(atom: &Atom, ground: &[Value], b: &mut Binding) -> Option<Vec<String>> {
    let mut added = Vec::new();
    for (t, v) in atom.args.iter().zip(ground) {
        let ok = match t {
            Term::Anon => true,
            Term::Const(s) => matches!(v, Value::Sym(x) if x == s),
            Term::Int(i) => matches!(v, Value::Int(x) if x == i),
            Term::Var(name) => match b.get(name) {
                Some(bound) => bound == v,
                None => {
                    b.insert(name.clone(), v.clone());
                    added.push(name.clone());
                    true
                }
            },
        };
        if !ok {
            for a in added {
                b.remove(&a);
            }
            return None;
        }
    }
    Some(added)
}

/// Atoms that may become true, grouped by predicate, in discovery order.
#[derive(Default)]
struct Possible {
    by_pred: HashMap<(String, usize), Vec<Vec<Value>>>,
    members: HashSet<GroundAtom>,
}

impl Possible {
    fn insert(&mut self, a: GroundAtom) -> bool {
        if self.members.contains(&a) {
            return false;
        }
        self.by_pred
            .entry((a.predicate.clone(), a.arity()))
            .or_default()
            .push(a.args.clone());
        self.members.insert(a);
        true
    }

    fn candidates(&self, atom: &Atom) -> &[Vec<Value>] {
        self.by_pred
            .get(&(atom.predicate.clone(), atom.arity()))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

struct RulePlan<'r> {
    rule: &'r Rule,
    index: usize,
    /// Comparisons to test once the first `k` positive atoms are joined.
    cmps_at: Vec<Vec<&'r Comparison>>,
    /// Variable-free rules are emitted as written, whatever their body.
    is_ground: bool,
}

impl<'r> RulePlan<'r> {
    fn new(index: usize, rule: &'r Rule) -> Self {
        let n = rule.body_pos.len();
        let mut cmps_at = vec![Vec::new(); n + 1];
        for c in &rule.body_cmp {
            let mut level = 0;
            for v in c.variables() {
                let first = rule
                    .body_pos
                    .iter()
                    .position(|a| a.variables().any(|x| x == v))
                    .map_or(n, |p| p + 1);
                level = level.max(first);
            }
            cmps_at[level].push(c);
        }
        let is_ground = rule.atoms().all(Atom::is_ground)
            && rule.body_cmp.iter().all(|c| c.variables().is_empty());
        RulePlan {
            rule,
            index,
            cmps_at,
            is_ground,
        }
    }

    fn join(
        &self,
        depth: usize,
        possible: &Possible,
        b: &mut Binding,
        matched: &mut Vec<GroundAtom>,
        out: &mut Vec<Instance>,
    ) -> Result<(), GroundError> {
        for c in &self.cmps_at[depth] {
            let holds = eval_comparison(c, b).map_err(|message| GroundError::Arithmetic {
                rule: self.index,
                substitution: render_binding(b),
                message,
            })?;
            if !holds {
                return Ok(());
            }
        }
        let body = &self.rule.body_pos;
        if self.is_ground {
            out.push((
                instantiate(&self.rule.head, b),
                body.iter().map(|a| instantiate(a, b)).collect(),
                self.rule
                    .body_neg
                    .iter()
                    .map(|a| instantiate(a, b))
                    .collect(),
            ));
            return Ok(());
        }
        if depth == body.len() {
            out.push((
                instantiate(&self.rule.head, b),
                matched.clone(),
                self.rule
                    .body_neg
                    .iter()
                    .map(|a| instantiate(a, b))
                    .collect(),
            ));
            return Ok(());
        }
        let atom = &body[depth];
        for cand in possible.candidates(atom) {
            if let Some(added) = unify(atom, cand, b) {
                matched.push(GroundAtom::new(atom.predicate.clone(), cand.clone()));
                let r = self.join(depth + 1, possible, b, matched, out);
                matched.pop();
                for a in added {
                    b.remove(&a);
                }
                r?;
            }
        }
        Ok(())
    }
}

type Instance = (GroundAtom, Vec<GroundAtom>, Vec<GroundAtom>);

/// Grounds `p` with the atoms of `h` as assumables.
pub fn ground(p: &Program, h: &[GroundAtom]) -> Result<GroundProgram, GroundError> {
    let mut g = GroundProgram::default();
    let mut possible = Possible::default();
    for a in h {
        let id = g.intern(a.clone());
        g.assumables.push(id);
        possible.insert(a.clone());
    }
    let plans: Vec<RulePlan> = p
        .rules
        .iter()
        .enumerate()
        .map(|(i, r)| RulePlan::new(i, r))
        .collect();
    let mut emitted: HashSet<Instance> = HashSet::new();
    loop {
        let mut produced = Vec::new();
        for plan in &plans {
            plan.join(
                0,
                &possible,
                &mut Binding::new(),
                &mut Vec::new(),
                &mut produced,
            )?;
        }
        let mut changed = false;
        for inst in produced {
            if emitted.contains(&inst) {
                continue;
            }
            emitted.insert(inst.clone());
            changed = true;
            let (head, pos, neg) = inst;
            possible.insert(head.clone());
            let head = g.intern(head);
            let pos: Vec<AtomId> = pos.into_iter().map(|a| g.intern(a)).collect();
            let neg: Vec<AtomId> = neg.into_iter().map(|a| g.intern(a)).collect();
            if pos.is_empty() && neg.is_empty() {
                g.facts.insert(head);
            } else {
                g.rules.push(GroundRule { head, pos, neg });
            }
        }
        if !changed {
            break;
        }
    }
    Ok(g)
}

/// Drops rules whose positive body can never hold (an atom that is no fact,
/// no assumable and heads no remaining rule) and removes duplicate rules.
/// Atom ids are preserved.
pub fn optimize_ground(g: &GroundProgram) -> GroundProgram {
    let n = g.num_atoms();
    let mut rules: Vec<GroundRule> = Vec::new();
    let mut seen = HashSet::new();
    for r in &g.rules {
        let mut norm = r.clone();
        norm.pos.sort();
        norm.pos.dedup();
        norm.neg.sort();
        norm.neg.dedup();
        if seen.insert(norm.clone()) {
            rules.push(norm);
        }
    }
    loop {
        let mut supported = vec![false; n];
        for &f in g.facts.iter().chain(g.assumables.iter()) {
            supported[f.index()] = true;
        }
        for r in &rules {
            supported[r.head.index()] = true;
        }
        let before = rules.len();
        rules.retain(|r| r.pos.iter().all(|a| supported[a.index()]));
        if rules.len() == before {
            break;
        }
    }
    GroundProgram { rules, ..g.clone() }
}

impl fmt::Display for GroundProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_pap;

    fn prog(text: &str) -> (Program, Vec<GroundAtom>) {
        let p = parse_pap(text).unwrap();
        let h = p.hypothesis_atoms();
        (p.program, h)
    }

    #[test]
    fn propositional_universe_is_empty() {
        let (p, h) = prog("a :- not b. b :- not a. c :- a. c :- b.");
        assert!(herbrand_universe(&p, &h).is_empty());
        let (p, h) = prog("go_fishing :- is_saturday, not rains. is_saturday. #hypothesis rains.");
        assert!(herbrand_universe(&p, &h).is_empty());
    }

    #[test]
    fn hypotheses_contribute_constants() {
        let (p, h) = prog("p(X) :- q(X). #hypothesis q(k).");
        let u = herbrand_universe(&p, &h);
        assert_eq!(u, [Value::Sym("k".into())].into_iter().collect());
    }

    #[test]
    fn propositional_program_grounds_to_itself() {
        let (p, h) = prog("a :- not b. b :- not a. c :- a. c :- b.");
        let g = ground(&p, &h).unwrap();
        assert_eq!(g.rules.len(), 4);
        assert_eq!(g.dump(), "a :- not b.\nb :- not a.\nc :- a.\nc :- b.\n");
    }

    #[test]
    fn inequality_filters_substitutions() {
        let (p, h) = prog("p(X,Y) :- q(X), q(Y), X != Y. q(1). q(2).");
        let g = ground(&p, &h).unwrap();
        assert_eq!(g.facts.len(), 2);
        let mut rules: Vec<String> = g.rules.iter().map(|r| g.rule_to_string(r)).collect();
        rules.sort();
        assert_eq!(
            rules,
            vec!["p(1,2) :- q(1), q(2).", "p(2,1) :- q(2), q(1)."]
        );
    }

    #[test]
    fn tsp_badtour_rule_count() {
        let mut text = String::from(
            "badtour :- c(I, J), c(I, K), J != K.\nbadtour :- c(J, I), c(K, I), J != K.\n",
        );
        for i in 1..=3 {
            for j in 1..=3 {
                text.push_str(&format!("#hypothesis c({i},{j}).\n"));
            }
        }
        let (p, h) = prog(&text);
        let g = ground(&p, &h).unwrap();
        assert_eq!(g.rules.len(), 36);
        assert_eq!(g.assumables.len(), 9);
    }

    #[test]
    fn symbolic_arithmetic_is_an_error() {
        let (p, h) = prog("big(X) :- s(X, N), N > 50. s(a, b).");
        let err = ground(&p, &h).unwrap_err();
        let GroundError::Arithmetic {
            rule, substitution, ..
        } = err;
        assert_eq!(rule, 0);
        assert!(substitution.contains("N=b"));
    }

    #[test]
    fn symbolic_equality_is_allowed() {
        let (p, h) = prog("d(X, Y) :- n(X), n(Y), X != Y. n(a). n(b).");
        assert_eq!(ground(&p, &h).unwrap().rules.len(), 2);
    }

    #[test]
    fn ground_comparison_only_rule() {
        let (p, h) = prog("a :- 1 < 2. b :- 2 < 1.");
        let g = ground(&p, &h).unwrap();
        assert_eq!(g.dump(), "a.\n");
    }

    #[test]
    fn grounding_is_deterministic() {
        let text = "reaches(X,X) :- node(X), not offline(X).\n\
                    reaches(X,Z) :- reaches(X,Y), connected(Y,Z), not offline(Z).\n\
                    node(a). node(b). node(c). connected(a,b). connected(b,c). connected(c,a).\n\
                    #hypothesis offline(b).";
        let (p, h) = prog(text);
        let a = ground(&p, &h).unwrap();
        let b = ground(&p, &h).unwrap();
        assert_eq!(a.atoms(), b.atoms());
        assert_eq!(a.rules, b.rules);
        assert_eq!(a.dump(), b.dump());
    }

    #[test]
    fn unreachable_body_rule_removed() {
        let (p, h) = prog("a :- ghost. b. c :- b.");
        let g = ground(&p, &h).unwrap();
        assert_eq!(g.rules.len(), 2);
        let o = optimize_ground(&g);
        assert_eq!(o.dump(), "b.\nc :- b.\n");
    }

    #[test]
    fn optimize_is_identity_on_minimal_program() {
        let (p, h) = prog("a :- not b. b :- not a. c :- a. c :- b.");
        let g = ground(&p, &h).unwrap();
        assert_eq!(optimize_ground(&g), g);
    }

    #[test]
    fn optimize_removes_duplicates() {
        let (p, h) = prog("a :- b, c. a :- c, b. b. c.");
        let g = ground(&p, &h).unwrap();
        assert_eq!(optimize_ground(&g).rules.len(), 1);
    }

    #[test]
    fn anonymous_variables_are_independent() {
        let (p, h) = prog("loc(B) :- block(B, _). block(a, 1). block(b, 2).");
        let g = ground(&p, &h).unwrap();
        assert_eq!(g.rules.len(), 2);
    }
}
