//! Abstract syntax and semantic domain types shared by every other module.
//!
//! Programs are normal logic programs without function symbols: each rule has
//! a single head atom and a body made of positive atoms, default-negated atoms
//! and integer comparisons. Everything here is immutable once built.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::time::Duration;

use crate::cost::CostFunction;
use crate::error::InstanceError;

/// A term in a non-ground atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    /// Symbolic constant, lowercase-initial.
    Const(String),
    /// Integer constant.
    Int(i64),
    /// Named variable, uppercase-initial.
    Var(String),
    /// `_`; every occurrence is a distinct variable.
    Anon,
}

impl Term {
    pub fn is_ground(&self) -> bool {
        matches!(self, Term::Const(_) | Term::Int(_))
    }

    pub fn as_value(&self) -> Option<Value> {
        match self {
            Term::Const(s) => Some(Value::Sym(s.clone())),
            Term::Int(i) => Some(Value::Int(*i)),
            _ => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(s) | Term::Var(s) => f.write_str(s),
            Term::Int(i) => write!(f, "{i}"),
            Term::Anon => f.write_str("_"),
        }
    }
}

/// A constant of the Herbrand universe.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Int(i64),
    Sym(String),
}

impl From<&Value> for Term {
    fn from(v: &Value) -> Self {
        match v {
            Value::Int(i) => Term::Int(*i),
            Value::Sym(s) => Term::Const(s.clone()),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Sym(s) => f.write_str(s),
        }
    }
}

fn write_args<T: fmt::Display>(f: &mut fmt::Formatter<'_>, pred: &str, args: &[T]) -> fmt::Result {
    f.write_str(pred)?;
    if !args.is_empty() {
        f.write_str("(")?;
        for (i, a) in args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")?;
    }
    Ok(())
}

/// `predicate(t1, ..., tn)`; arity is the length of `args`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Atom {
            predicate: predicate.into(),
            args,
        }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn to_ground(&self) -> Option<GroundAtom> {
        let args = self
            .args
            .iter()
            .map(Term::as_value)
            .collect::<Option<Vec<_>>>()?;
        Some(GroundAtom {
            predicate: self.predicate.clone(),
            args,
        })
    }

    /// Named variables, in order of first occurrence.
    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(|t| match t {
            Term::Var(v) => Some(v.as_str()),
            _ => None,
        })
    }

    pub fn has_anonymous(&self) -> bool {
        self.args.iter().any(|t| matches!(t, Term::Anon))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_args(f, &self.predicate, &self.args)
    }
}

/// A variable-free atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundAtom {
    pub predicate: String,
    pub args: Vec<Value>,
}

impl GroundAtom {
    pub fn new(predicate: impl Into<String>, args: Vec<Value>) -> Self {
        GroundAtom {
            predicate: predicate.into(),
            args,
        }
    }

    /// A zero-arity atom such as `rains`.
    pub fn prop(predicate: impl Into<String>) -> Self {
        Self::new(predicate, Vec::new())
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn to_atom(&self) -> Atom {
        Atom {
            predicate: self.predicate.clone(),
            args: self.args.iter().map(Term::from).collect(),
        }
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_args(f, &self.predicate, &self.args)
    }
}

/// An atom or its default negation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal<A = Atom> {
    pub atom: A,
    pub negated: bool,
}

pub type GroundLiteral = Literal<GroundAtom>;

impl<A> Literal<A> {
    pub fn pos(atom: A) -> Self {
        Literal {
            atom,
            negated: false,
        }
    }

    pub fn neg(atom: A) -> Self {
        Literal {
            atom,
            negated: true,
        }
    }
}

impl<A: Clone> Literal<A> {
    pub fn complement(&self) -> Self {
        Literal {
            atom: self.atom.clone(),
            negated: !self.negated,
        }
    }
}

/// Complementary literal: `a` becomes `not a` and vice versa.
pub fn complement<A: Clone>(l: &Literal<A>) -> Literal<A> {
    l.complement()
}

impl<A: fmt::Display> fmt::Display for Literal<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("not ")?;
        }
        write!(f, "{}", self.atom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }

    pub fn holds<T: Ord>(self, lhs: &T, rhs: &T) -> bool {
        match self {
            CmpOp::Eq => lhs == rhs,
            CmpOp::Ne => lhs != rhs,
            CmpOp::Lt => lhs < rhs,
            CmpOp::Le => lhs <= rhs,
            CmpOp::Gt => lhs > rhs,
            CmpOp::Ge => lhs >= rhs,
        }
    }

    pub fn is_equality(self) -> bool {
        matches!(self, CmpOp::Eq | CmpOp::Ne)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl ArithOp {
    pub fn symbol(self) -> char {
        match self {
            ArithOp::Add => '+',
            ArithOp::Sub => '-',
            ArithOp::Mul => '*',
        }
    }

    /// Checked integer arithmetic; `None` on overflow.
    pub fn apply(self, a: i64, b: i64) -> Option<i64> {
        match self {
            ArithOp::Add => a.checked_add(b),
            ArithOp::Sub => a.checked_sub(b),
            ArithOp::Mul => a.checked_mul(b),
        }
    }

    fn precedence(self) -> u8 {
        match self {
            ArithOp::Add | ArithOp::Sub => 1,
            ArithOp::Mul => 2,
        }
    }
}

/// Integer arithmetic expression inside a comparison.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expr {
    Int(i64),
    Var(String),
    Bin(Box<Expr>, ArithOp, Box<Expr>),
}

impl Expr {
    pub fn bin(lhs: Expr, op: ArithOp, rhs: Expr) -> Self {
        Expr::Bin(Box::new(lhs), op, Box::new(rhs))
    }

    pub fn variables(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Expr::Int(_) => {}
            Expr::Var(v) => out.push(v),
            Expr::Bin(a, _, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(i) => write!(f, "{i}"),
            Expr::Var(v) => f.write_str(v),
            Expr::Bin(a, op, b) => {
                a.fmt_prec(f)?;
                write!(f, " {} ", op.symbol())?;
                b.fmt_prec(f)
            }
        }
    }

    /// True when printing without parentheses re-parses to the same tree,
    /// i.e. the tree is left-associative and respects operator precedence.
    pub fn is_canonical(&self) -> bool {
        match self {
            Expr::Int(_) | Expr::Var(_) => true,
            Expr::Bin(a, op, b) => {
                let left_ok = match a.as_ref() {
                    Expr::Bin(_, lop, _) => lop.precedence() >= op.precedence(),
                    _ => true,
                };
                let right_ok = !matches!(b.as_ref(), Expr::Bin(_, rop, _) if rop.precedence() <= op.precedence());
                left_ok && right_ok && a.is_canonical() && b.is_canonical()
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f)
    }
}

/// Built-in comparison `lhs op rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Comparison {
    pub op: CmpOp,
    pub lhs: Expr,
    pub rhs: Expr,
}

impl Comparison {
    pub fn new(lhs: Expr, op: CmpOp, rhs: Expr) -> Self {
        Comparison { op, lhs, rhs }
    }

    pub fn variables(&self) -> Vec<&str> {
        let mut v = self.lhs.variables();
        v.extend(self.rhs.variables());
        v
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.op.symbol(), self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: Atom,
    pub body_pos: Vec<Atom>,
    pub body_neg: Vec<Atom>,
    pub body_cmp: Vec<Comparison>,
}

impl Rule {
    pub fn fact(head: Atom) -> Self {
        Rule {
            head,
            body_pos: Vec::new(),
            body_neg: Vec::new(),
            body_cmp: Vec::new(),
        }
    }

    pub fn is_fact(&self) -> bool {
        self.body_pos.is_empty() && self.body_neg.is_empty() && self.body_cmp.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        std::iter::once(&self.head)
            .chain(self.body_pos.iter())
            .chain(self.body_neg.iter())
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        if !self.is_fact() {
            f.write_str(" :- ")?;
            let mut first = true;
            let mut sep = |f: &mut fmt::Formatter<'_>| {
                if !std::mem::take(&mut first) {
                    f.write_str(", ")?;
                }
                Ok::<_, fmt::Error>(())
            };
            for a in &self.body_pos {
                sep(f)?;
                write!(f, "{a}")?;
            }
            for a in &self.body_neg {
                sep(f)?;
                write!(f, "not {a}")?;
            }
            for c in &self.body_cmp {
                sep(f)?;
                write!(f, "{c}")?;
            }
        }
        f.write_str(".")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Program {
    pub rules: Vec<Rule>,
}

impl Program {
    pub fn new(rules: Vec<Rule>) -> Self {
        Program { rules }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Structural problem found by [`validate_program`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProblemKind {
    /// Variable in head, negative body or comparison not bound by the positive body.
    Unsafe { variable: String },
    /// Predicate used with two different arities.
    ArityConflict {
        predicate: String,
        expected: usize,
        found: usize,
    },
    /// `_` outside a positive body atom.
    MisplacedAnonymous,
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemKind::Unsafe { variable } => {
                write!(
                    f,
                    "unsafe rule: variable {variable} does not occur in a positive body atom"
                )
            }
            ProblemKind::ArityConflict {
                predicate,
                expected,
                found,
            } => write!(
                f,
                "arity conflict on {predicate}: used with arity {found}, previously {expected}"
            ),
            ProblemKind::MisplacedAnonymous => {
                f.write_str("anonymous variable `_` may only occur in positive body atoms")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    /// Index of the offending rule in `Program::rules`.
    pub rule: usize,
    pub kind: ProblemKind,
}

/// Tracks the arity each predicate was first seen with.
#[derive(Debug, Default)]
pub struct ArityTable {
    seen: HashMap<String, usize>,
}

impl ArityTable {
    /// Records `pred/arity`; returns the conflicting earlier arity if any.
    pub fn check(&mut self, pred: &str, arity: usize) -> Option<usize> {
        match self.seen.get(pred) {
            Some(&a) if a != arity => Some(a),
            Some(_) => None,
            None => {
                self.seen.insert(pred.to_string(), arity);
                None
            }
        }
    }
}

/// Checks safety, anonymous-variable placement and arity consistency.
/// An empty result means the program is well-formed.
pub fn validate_program(p: &Program) -> Vec<Diagnostic> {
    let mut arities = ArityTable::default();
    validate_with(p, &mut arities)
}

pub(crate) fn validate_with(p: &Program, arities: &mut ArityTable) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (idx, rule) in p.rules.iter().enumerate() {
        for atom in rule.atoms() {
            if let Some(expected) = arities.check(&atom.predicate, atom.arity()) {
                out.push(Diagnostic {
                    rule: idx,
                    kind: ProblemKind::ArityConflict {
                        predicate: atom.predicate.clone(),
                        expected,
                        found: atom.arity(),
                    },
                });
            }
        }
        if rule.head.has_anonymous() || rule.body_neg.iter().any(Atom::has_anonymous) {
            out.push(Diagnostic {
                rule: idx,
                kind: ProblemKind::MisplacedAnonymous,
            });
        }
        let bound: BTreeSet<&str> = rule.body_pos.iter().flat_map(Atom::variables).collect();
        let mut reported = BTreeSet::new();
        let needed = rule
            .head
            .variables()
            .chain(rule.body_neg.iter().flat_map(Atom::variables))
            .chain(rule.body_cmp.iter().flat_map(Comparison::variables));
        for v in needed {
            if !bound.contains(v) && reported.insert(v) {
                out.push(Diagnostic {
                    rule: idx,
                    kind: ProblemKind::Unsafe {
                        variable: v.to_string(),
                    },
                });
            }
        }
    }
    out
}

/// Dense identifier of a ground atom inside a [`crate::grounder::GroundProgram`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomId(pub u32);

impl AtomId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A set of ground atoms, by id.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interpretation(pub BTreeSet<AtomId>);

impl Interpretation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, id: AtomId) -> bool {
        self.0.contains(&id)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.0.iter().copied()
    }

    pub fn is_subset(&self, other: &Interpretation) -> bool {
        self.0.is_subset(&other.0)
    }

    pub(crate) fn from_mask(mask: &[bool]) -> Self {
        Interpretation(
            mask.iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| AtomId(i as u32))
                .collect(),
        )
    }

    pub(crate) fn to_mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for id in &self.0 {
            if id.index() < n {
                m[id.index()] = true;
            }
        }
        m
    }
}

impl FromIterator<AtomId> for Interpretation {
    fn from_iter<T: IntoIterator<Item = AtomId>>(iter: T) -> Self {
        Interpretation(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hypothesis {
    pub atom: GroundAtom,
    pub penalty: f64,
}

/// A problem of abduction with penalization: hypotheses with penalties, a
/// program, observations and the cost function aggregating penalties.
#[derive(Debug, Clone, PartialEq)]
pub struct PapInstance {
    pub hypotheses: Vec<Hypothesis>,
    pub program: Program,
    pub observations: Vec<GroundLiteral>,
    pub cost: CostFunction,
}

impl PapInstance {
    /// Builds an instance after checking its invariants: positive penalties,
    /// distinct hypotheses, a well-formed program, and consistent arities
    /// across program, hypotheses and observations.
    pub fn new(
        hypotheses: Vec<Hypothesis>,
        program: Program,
        observations: Vec<GroundLiteral>,
        cost: CostFunction,
    ) -> Result<Self, InstanceError> {
        let mut arities = ArityTable::default();
        let diagnostics = validate_with(&program, &mut arities);
        if let Some(d) = diagnostics.into_iter().next() {
            return Err(InstanceError::InvalidProgram(d));
        }
        let mut seen = BTreeSet::new();
        for h in &hypotheses {
            if !h.penalty.is_finite() || h.penalty <= 0.0 {
                return Err(InstanceError::NonPositivePenalty {
                    atom: h.atom.to_string(),
                    penalty: h.penalty,
                });
            }
            if !seen.insert(&h.atom) {
                return Err(InstanceError::DuplicateHypothesis(h.atom.to_string()));
            }
            if let Some(expected) = arities.check(&h.atom.predicate, h.atom.arity()) {
                return Err(InstanceError::ArityConflict {
                    atom: h.atom.to_string(),
                    expected,
                });
            }
        }
        for o in &observations {
            if let Some(expected) = arities.check(&o.atom.predicate, o.atom.arity()) {
                return Err(InstanceError::ArityConflict {
                    atom: o.atom.to_string(),
                    expected,
                });
            }
        }
        let mut obs = Vec::with_capacity(observations.len());
        for o in observations {
            if !obs.contains(&o) {
                obs.push(o);
            }
        }
        Ok(PapInstance {
            hypotheses,
            program,
            observations: obs,
            cost,
        })
    }

    pub fn hypothesis_atoms(&self) -> Vec<GroundAtom> {
        self.hypotheses.iter().map(|h| h.atom.clone()).collect()
    }

    pub fn penalties(&self) -> Vec<f64> {
        self.hypotheses.iter().map(|h| h.penalty).collect()
    }

    pub fn hypothesis_index(&self, atom: &GroundAtom) -> Option<usize> {
        self.hypotheses.iter().position(|h| &h.atom == atom)
    }

    /// Maps a set of atoms to hypothesis indices; fails on atoms outside H.
    pub fn indices_of<'a>(
        &self,
        atoms: impl IntoIterator<Item = &'a GroundAtom>,
    ) -> Result<BTreeSet<usize>, InstanceError> {
        atoms
            .into_iter()
            .map(|a| {
                self.hypothesis_index(a)
                    .ok_or_else(|| InstanceError::NotAHypothesis(a.to_string()))
            })
            .collect()
    }

    pub fn atoms_of(&self, indices: &BTreeSet<usize>) -> Solution {
        indices
            .iter()
            .map(|&i| self.hypotheses[i].atom.clone())
            .collect()
    }

    pub fn with_cost(mut self, cost: CostFunction) -> Self {
        self.cost = cost;
        self
    }
}

/// A set of assumed hypotheses.
pub type Solution = BTreeSet<GroundAtom>;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes_explored: u64,
    pub admissibility_checks: u64,
    pub elapsed: Duration,
}

/// Outcome of an optimization run. `optimal_cost` is `None` exactly when the
/// instance is inconsistent, in which case `solutions` is empty.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub consistent: bool,
    pub optimal_cost: Option<f64>,
    pub solutions: Vec<Solution>,
    pub stats: SearchStats,
}

impl SolveResult {
    pub fn inconsistent(stats: SearchStats) -> Self {
        SolveResult {
            consistent: false,
            optimal_cost: None,
            solutions: Vec::new(),
            stats,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(p: &str, args: &[Term]) -> Atom {
        Atom::new(p, args.to_vec())
    }

    fn var(v: &str) -> Term {
        Term::Var(v.into())
    }

    #[test]
    fn ground_horn_program_is_valid() {
        let p = Program::new(vec![
            Rule {
                head: atom("c", &[]),
                body_pos: vec![atom("a", &[])],
                body_neg: vec![],
                body_cmp: vec![],
            },
            Rule::fact(atom("a", &[])),
        ]);
        assert!(validate_program(&p).is_empty());
    }

    #[test]
    fn variable_only_under_negation_is_unsafe() {
        let p = Program::new(vec![Rule {
            head: atom("p", &[var("X")]),
            body_pos: vec![],
            body_neg: vec![atom("q", &[var("X")])],
            body_cmp: vec![],
        }]);
        let d = validate_program(&p);
        assert_eq!(
            d,
            vec![Diagnostic {
                rule: 0,
                kind: ProblemKind::Unsafe {
                    variable: "X".into()
                }
            }]
        );
    }

    #[test]
    fn arity_conflict_reported() {
        let c = |s: &str| Term::Const(s.into());
        let p = Program::new(vec![
            Rule::fact(atom("share", &[c("a"), c("b"), Term::Int(3)])),
            Rule::fact(atom("share", &[c("a"), c("b")])),
        ]);
        let d = validate_program(&p);
        assert_eq!(d.len(), 1);
        assert!(
            matches!(&d[0].kind, ProblemKind::ArityConflict { predicate, .. } if predicate == "share")
        );
        assert_eq!(d[0].rule, 1);
    }

    #[test]
    fn comparison_variables_need_binding() {
        let p = Program::new(vec![Rule {
            head: atom("p", &[var("X")]),
            body_pos: vec![atom("q", &[var("X")])],
            body_neg: vec![],
            body_cmp: vec![Comparison::new(
                Expr::Var("Y".into()),
                CmpOp::Gt,
                Expr::Int(1),
            )],
        }]);
        assert!(matches!(
            validate_program(&p)[0].kind,
            ProblemKind::Unsafe { ref variable } if variable == "Y"
        ));
    }

    #[test]
    fn anonymous_in_head_rejected() {
        let p = Program::new(vec![Rule {
            head: atom("p", &[Term::Anon]),
            body_pos: vec![atom("q", &[Term::Anon])],
            body_neg: vec![],
            body_cmp: vec![],
        }]);
        assert!(validate_program(&p)
            .iter()
            .any(|d| d.kind == ProblemKind::MisplacedAnonymous));
    }

    #[test]
    fn complement_examples() {
        let off = GroundAtom::new("offline", vec![Value::Sym("a".into())]);
        let l = Literal::pos(off.clone());
        assert_eq!(complement(&l), Literal::neg(off));
        assert_eq!(complement(&l).to_string(), "not offline(a)");

        let rains = Literal::neg(GroundAtom::prop("rains"));
        assert_eq!(complement(&rains), Literal::pos(GroundAtom::prop("rains")));

        let r = Literal::pos(GroundAtom::new(
            "reaches",
            vec![Value::Sym("a".into()), Value::Sym("e".into())],
        ));
        assert_eq!(complement(&complement(&r)), r);
    }

    #[test]
    fn rule_display() {
        let r = Rule {
            head: atom("go_fishing", &[]),
            body_pos: vec![atom("is_saturday", &[])],
            body_neg: vec![atom("rains", &[])],
            body_cmp: vec![],
        };
        assert_eq!(r.to_string(), "go_fishing :- is_saturday, not rains.");
    }

    #[test]
    fn canonical_expressions() {
        let x = || Expr::Var("X".into());
        let one = || Expr::Int(1);
        assert!(Expr::bin(Expr::bin(x(), ArithOp::Add, one()), ArithOp::Sub, one()).is_canonical());
        assert!(
            !Expr::bin(x(), ArithOp::Sub, Expr::bin(one(), ArithOp::Sub, one())).is_canonical()
        );
        assert!(Expr::bin(x(), ArithOp::Add, Expr::bin(one(), ArithOp::Mul, one())).is_canonical());
        assert!(
            !Expr::bin(Expr::bin(x(), ArithOp::Add, one()), ArithOp::Mul, one()).is_canonical()
        );
    }

    #[test]
    fn instance_rejects_bad_penalty() {
        let h = Hypothesis {
            atom: GroundAtom::prop("h"),
            penalty: 0.0,
        };
        let err =
            PapInstance::new(vec![h], Program::default(), vec![], CostFunction::Sum).unwrap_err();
        assert!(matches!(err, InstanceError::NonPositivePenalty { .. }));
    }
}
