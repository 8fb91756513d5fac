//! The `.pap` surface syntax: rules in conventional Datalog notation plus
//! `#hypothesis`, `#observe` and `#cost` directives.
//!
//! ```text
//! go_fishing :- is_saturday, not rains.
//! is_saturday.
//! #hypothesis rains penalty 1.
//! #observe not go_fishing.
//! #cost sum.
//! ```
//!
//! Every error carries a 1-based line/column position.

use std::collections::BTreeSet;
use std::fmt;

use crate::cost::CostFunction;
use crate::kernel::{
    validate_with, ArithOp, ArityTable, Atom, CmpOp, Comparison, Expr, GroundAtom, GroundLiteral,
    Hypothesis, Literal, PapInstance, Program, Rule, Term,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceDiagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub severity: Severity,
}

impl SourceDiagnostic {
    fn error(pos: Pos, message: impl Into<String>) -> Self {
        SourceDiagnostic {
            line: pos.line,
            column: pos.column,
            message: message.into(),
            severity: Severity::Error,
        }
    }

    fn warning(pos: Pos, message: impl Into<String>) -> Self {
        SourceDiagnostic {
            severity: Severity::Warning,
            ..Self::error(pos, message)
        }
    }
}

impl fmt::Display for SourceDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(
            f,
            "{}:{}: {}: {}",
            self.line, self.column, sev, self.message
        )
    }
}

/// One or more positioned errors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub diagnostics: Vec<SourceDiagnostic>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.diagnostics.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

impl From<SourceDiagnostic> for ParseError {
    fn from(d: SourceDiagnostic) -> Self {
        ParseError {
            diagnostics: vec![d],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Var(String),
    Anon,
    /// Digits only; interpreted as an integer or a penalty by context.
    Int(String),
    /// Digits with a fractional part.
    Decimal(String),
    Directive(String),
    If,
    Dot,
    Comma,
    LParen,
    RParen,
    Cmp(CmpOp),
    Arith(ArithOp),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Var(s) | Tok::Int(s) | Tok::Decimal(s) => write!(f, "`{s}`"),
            Tok::Anon => f.write_str("`_`"),
            Tok::Directive(d) => write!(f, "`#{d}`"),
            Tok::If => f.write_str("`:-`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Cmp(op) => write!(f, "`{}`", op.symbol()),
            Tok::Arith(op) => write!(f, "`{}`", op.symbol()),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, SourceDiagnostic> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let mut last = Pos { line: 1, column: 1 };
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        last = pos;
        let start = i;
        let mut advance = |i: &mut usize, n: usize| {
            *i += n;
            col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                advance(&mut i, 1);
                continue;
            }
            '%' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                    col += 1;
                }
                continue;
            }
            _ => {}
        }
        let tok = match c {
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut j = i + 1;
                while j < chars.len() && is_word_char(chars[j]) {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                advance(&mut i, j - start);
                if word == "_" {
                    Tok::Anon
                } else if c == '_' {
                    return Err(SourceDiagnostic::error(
                        pos,
                        format!("`{word}`: identifiers must start with a letter"),
                    ));
                } else if c.is_ascii_uppercase() {
                    Tok::Var(word)
                } else {
                    Tok::Ident(word)
                }
            }
            '0'..='9' => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let decimal =
                    j + 1 < chars.len() && chars[j] == '.' && chars[j + 1].is_ascii_digit();
                if decimal {
                    j += 1;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                }
                let s: String = chars[i..j].iter().collect();
                advance(&mut i, j - start);
                if decimal {
                    Tok::Decimal(s)
                } else {
                    Tok::Int(s)
                }
            }
            '#' => {
                let mut j = i + 1;
                while j < chars.len() && is_word_char(chars[j]) {
                    j += 1;
                }
                let name: String = chars[i + 1..j].iter().collect();
                advance(&mut i, j - start);
                match name.as_str() {
                    "hypothesis" | "observe" | "cost" => Tok::Directive(name),
                    _ => {
                        return Err(SourceDiagnostic::error(
                            pos,
                            format!("unknown directive `#{name}`"),
                        ))
                    }
                }
            }
            ':' if chars.get(i + 1) == Some(&'-') => {
                advance(&mut i, 2);
                Tok::If
            }
            '!' if chars.get(i + 1) == Some(&'=') => {
                advance(&mut i, 2);
                Tok::Cmp(CmpOp::Ne)
            }
            '<' | '>' => {
                let eq = chars.get(i + 1) == Some(&'=');
                advance(&mut i, if eq { 2 } else { 1 });
                Tok::Cmp(match (c, eq) {
                    ('<', false) => CmpOp::Lt,
                    ('<', true) => CmpOp::Le,
                    ('>', false) => CmpOp::Gt,
                    _ => CmpOp::Ge,
                })
            }
            _ => {
                let t = match c {
                    '=' => Tok::Cmp(CmpOp::Eq),
                    '.' => Tok::Dot,
                    ',' => Tok::Comma,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '+' => Tok::Arith(ArithOp::Add),
                    '-' => Tok::Arith(ArithOp::Sub),
                    '*' => Tok::Arith(ArithOp::Mul),
                    other => {
                        return Err(SourceDiagnostic::error(
                            pos,
                            format!("unexpected character `{other}`"),
                        ))
                    }
                };
                advance(&mut i, 1);
                t
            }
        };
        out.push((tok, pos));
    }
    out.push((Tok::Eof, last));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

type PResult<T> = Result<T, SourceDiagnostic>;

struct Located<T> {
    item: T,
    pos: Pos,
}

#[derive(Default)]
struct Document {
    rules: Vec<Located<Rule>>,
    hypotheses: Vec<Located<Hypothesis>>,
    observations: Vec<Located<GroundLiteral>>,
    cost: Option<Located<CostFunction>>,
    warnings: Vec<SourceDiagnostic>,
}

impl Parser {
    fn new(text: &str) -> PResult<Self> {
        Ok(Parser {
            toks: lex(text)?,
            at: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected<T>(&self, wanted: &str) -> PResult<T> {
        Err(SourceDiagnostic::error(
            self.pos(),
            format!("expected {wanted}, found {}", self.peek()),
        ))
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.unexpected(wanted)
        }
    }

    fn document(&mut self) -> PResult<Document> {
        let mut doc = Document::default();
        loop {
            match self.peek().clone() {
                Tok::Eof => break,
                Tok::Directive(d) => self.directive(&d, &mut doc)?,
                _ => {
                    let pos = self.pos();
                    let item = self.rule()?;
                    doc.rules.push(Located { item, pos });
                }
            }
        }
        Ok(doc)
    }

    fn atom(&mut self) -> PResult<Atom> {
        let name = match self.peek() {
            Tok::Ident(name) if name == "not" => {
                return Err(SourceDiagnostic::error(
                    self.pos(),
                    "`not` is reserved and cannot name a predicate",
                ))
            }
            Tok::Ident(name) => name.clone(),
            _ => return self.unexpected("an atom"),
        };
        self.bump();
        let mut args = Vec::new();
        if *self.peek() == Tok::LParen {
            self.bump();
            loop {
                args.push(self.term()?);
                match self.peek() {
                    Tok::Comma => {
                        self.bump();
                    }
                    Tok::RParen => {
                        self.bump();
                        break;
                    }
                    _ => return self.unexpected("`,` or `)`"),
                }
            }
        }
        Ok(Atom::new(name, args))
    }

    fn int(&self, digits: &str, pos: Pos) -> PResult<i64> {
        digits
            .parse()
            .map_err(|_| SourceDiagnostic::error(pos, format!("integer `{digits}` out of range")))
    }

    fn term(&mut self) -> PResult<Term> {
        let (tok, pos) = self.bump();
        Ok(match tok {
            Tok::Ident(s) => Term::Const(s),
            Tok::Var(s) => Term::Var(s),
            Tok::Anon => Term::Anon,
            Tok::Int(d) => Term::Int(self.int(&d, pos)?),
            Tok::Arith(ArithOp::Sub) => match self.bump() {
                (Tok::Int(d), p) => Term::Int(self.int(&format!("-{d}"), p)?),
                (other, p) => {
                    return Err(SourceDiagnostic::error(
                        p,
                        format!("expected an integer after `-`, found {other}"),
                    ))
                }
            },
            other => {
                return Err(SourceDiagnostic::error(
                    pos,
                    format!("expected a term, found {other}"),
                ))
            }
        })
    }

    fn rule(&mut self) -> PResult<Rule> {
        let head = self.atom()?;
        let mut rule = Rule::fact(head);
        if *self.peek() == Tok::If {
            self.bump();
            loop {
                match self.peek() {
                    Tok::Ident(n) if n == "not" => {
                        self.bump();
                        rule.body_neg.push(self.atom()?);
                    }
                    Tok::Ident(_) => rule.body_pos.push(self.atom()?),
                    Tok::Var(_) | Tok::Int(_) | Tok::Arith(ArithOp::Sub) => {
                        rule.body_cmp.push(self.comparison()?)
                    }
                    _ => return self.unexpected("a body literal"),
                }
                match self.peek() {
                    Tok::Comma => {
                        self.bump();
                    }
                    Tok::Dot => break,
                    _ => return self.unexpected("`,` or `.`"),
                }
            }
        }
        self.expect(Tok::Dot, "`.`")?;
        Ok(rule)
    }

    fn comparison(&mut self) -> PResult<Comparison> {
        let lhs = self.expr()?;
        let op = match self.peek() {
            Tok::Cmp(op) => *op,
            _ => return self.unexpected("a comparison operator"),
        };
        self.bump();
        let rhs = self.expr()?;
        Ok(Comparison::new(lhs, op, rhs))
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.product()?;
        while let Tok::Arith(op @ (ArithOp::Add | ArithOp::Sub)) = *self.peek() {
            self.bump();
            let rhs = self.product()?;
            lhs = Expr::bin(lhs, op, rhs);
        }
        Ok(lhs)
    }

    fn product(&mut self) -> PResult<Expr> {
        let mut lhs = self.operand()?;
        while *self.peek() == Tok::Arith(ArithOp::Mul) {
            self.bump();
            let rhs = self.operand()?;
            lhs = Expr::bin(lhs, ArithOp::Mul, rhs);
        }
        Ok(lhs)
    }

    fn operand(&mut self) -> PResult<Expr> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Int(d) => Ok(Expr::Int(self.int(&d, pos)?)),
            Tok::Var(v) => Ok(Expr::Var(v)),
            Tok::Arith(ArithOp::Sub) => match self.bump() {
                (Tok::Int(d), p) => Ok(Expr::Int(self.int(&format!("-{d}"), p)?)),
                (other, p) => Err(SourceDiagnostic::error(
                    p,
                    format!("expected an integer after `-`, found {other}"),
                )),
            },
            other => Err(SourceDiagnostic::error(
                pos,
                format!("expected an integer or a variable, found {other}"),
            )),
        }
    }

    fn ground_atom(&mut self, what: &str) -> PResult<GroundAtom> {
        let pos = self.pos();
        let atom = self.atom()?;
        atom.to_ground()
            .ok_or_else(|| SourceDiagnostic::error(pos, format!("{what} `{atom}` must be ground")))
    }

    fn directive(&mut self, name: &str, doc: &mut Document) -> PResult<()> {
        let dpos = self.pos();
        self.bump();
        match name {
            "hypothesis" => {
                let pos = self.pos();
                let atom = self.ground_atom("hypothesis")?;
                let mut penalty = 1.0;
                if matches!(self.peek(), Tok::Ident(k) if k == "penalty") {
                    self.bump();
                    penalty = self.number()?;
                }
                self.expect(Tok::Dot, "`.`")?;
                doc.hypotheses.push(Located {
                    item: Hypothesis { atom, penalty },
                    pos,
                });
            }
            "observe" => {
                let negated = matches!(self.peek(), Tok::Ident(k) if k == "not");
                if negated {
                    self.bump();
                }
                let pos = self.pos();
                let atom = self.ground_atom("observation")?;
                self.expect(Tok::Dot, "`.`")?;
                doc.observations.push(Located {
                    item: Literal { atom, negated },
                    pos,
                });
            }
            _ => {
                let (tok, pos) = self.bump();
                let id = match tok {
                    Tok::Ident(id) => id,
                    other => {
                        return Err(SourceDiagnostic::error(
                            pos,
                            format!("expected a cost function name, found {other}"),
                        ))
                    }
                };
                let cost = CostFunction::from_id(&id).ok_or_else(|| {
                    SourceDiagnostic::error(pos, format!("unknown cost function `{id}`"))
                })?;
                self.expect(Tok::Dot, "`.`")?;
                if doc.cost.is_some() {
                    doc.warnings.push(SourceDiagnostic::warning(
                        dpos,
                        "`#cost` given more than once; the last one applies",
                    ));
                }
                doc.cost = Some(Located { item: cost, pos });
            }
        }
        Ok(())
    }

    fn number(&mut self) -> PResult<f64> {
        let pos = self.pos();
        let negative = *self.peek() == Tok::Arith(ArithOp::Sub);
        if negative {
            self.bump();
        }
        let text = match self.bump() {
            (Tok::Int(s) | Tok::Decimal(s), _) => s,
            (other, p) => {
                return Err(SourceDiagnostic::error(
                    p,
                    format!("expected a number, found {other}"),
                ))
            }
        };
        let value: f64 = text
            .parse()
            .map_err(|_| SourceDiagnostic::error(pos, format!("invalid number `{text}`")))?;
        let value = if negative { -value } else { value };
        if !value.is_finite() || value <= 0.0 {
            return Err(SourceDiagnostic::error(
                pos,
                format!("penalty must be positive, got {value}"),
            ));
        }
        Ok(value)
    }
}

fn check_document(doc: Document) -> Result<(PapInstance, Vec<SourceDiagnostic>), ParseError> {
    let mut errors = Vec::new();
    let program = Program::new(doc.rules.iter().map(|r| r.item.clone()).collect());
    let mut arities = ArityTable::default();
    for d in validate_with(&program, &mut arities) {
        errors.push(SourceDiagnostic::error(
            doc.rules[d.rule].pos,
            d.kind.to_string(),
        ));
    }
    let mut seen = BTreeSet::new();
    for h in &doc.hypotheses {
        let atom = &h.item.atom;
        if !seen.insert(atom.clone()) {
            errors.push(SourceDiagnostic::error(
                h.pos,
                format!("duplicate hypothesis `{atom}`"),
            ));
        }
        if let Some(expected) = arities.check(&atom.predicate, atom.arity()) {
            errors.push(SourceDiagnostic::error(
                h.pos,
                format!(
                    "arity conflict on {}: used with arity {}, previously {expected}",
                    atom.predicate,
                    atom.arity()
                ),
            ));
        }
    }
    for o in &doc.observations {
        let atom = &o.item.atom;
        if let Some(expected) = arities.check(&atom.predicate, atom.arity()) {
            errors.push(SourceDiagnostic::error(
                o.pos,
                format!(
                    "arity conflict on {}: used with arity {}, previously {expected}",
                    atom.predicate,
                    atom.arity()
                ),
            ));
        }
    }
    if !errors.is_empty() {
        return Err(ParseError {
            diagnostics: errors,
        });
    }
    let mut warnings = doc.warnings;
    let cost = doc.cost.as_ref().map(|c| c.item).unwrap_or_default();
    if let Some(limit) = cost.penalty_limit() {
        for h in doc.hypotheses.iter().filter(|h| h.item.penalty > limit) {
            warnings.push(SourceDiagnostic::warning(
                h.pos,
                format!(
                    "penalty {} of `{}` exceeds {limit}, which cost `{cost}` requires",
                    h.item.penalty, h.item.atom
                ),
            ));
        }
    }
    let instance = PapInstance::new(
        doc.hypotheses.into_iter().map(|h| h.item).collect(),
        program,
        doc.observations.into_iter().map(|o| o.item).collect(),
        cost,
    )
    .map_err(|e| SourceDiagnostic::error(Pos { line: 1, column: 1 }, e.to_string()))?;
    Ok((instance, warnings))
}

/// Parses a `.pap` document into a validated instance.
pub fn parse_pap(text: &str) -> Result<PapInstance, ParseError> {
    parse_pap_with_warnings(text).map(|(p, _)| p)
}

/// Like [`parse_pap`], also returning non-fatal warnings.
pub fn parse_pap_with_warnings(
    text: &str,
) -> Result<(PapInstance, Vec<SourceDiagnostic>), ParseError> {
    let doc = Parser::new(text)?.document()?;
    check_document(doc)
}

/// Parses a single ground atom, e.g. `offline(f)`.
pub fn parse_ground_atom(text: &str) -> Result<GroundAtom, ParseError> {
    let mut p = Parser::new(text)?;
    let atom = p.ground_atom("atom")?;
    p.expect(Tok::Eof, "end of input")?;
    Ok(atom)
}

/// Parses a comma-separated list of ground atoms; the empty string is the
/// empty list.
pub fn parse_ground_atom_list(text: &str) -> Result<Vec<GroundAtom>, ParseError> {
    let mut p = Parser::new(text)?;
    let mut out = Vec::new();
    if *p.peek() == Tok::Eof {
        return Ok(out);
    }
    loop {
        out.push(p.ground_atom("atom")?);
        match p.peek() {
            Tok::Comma => {
                p.bump();
            }
            Tok::Eof => break,
            _ => p.unexpected::<()>("`,` or end of input")?,
        }
    }
    Ok(out)
}

/// Canonical text of an instance: rules, hypotheses with explicit penalties,
/// observations, then the cost directive.
pub fn print_pap(p: &PapInstance) -> String {
    let mut out = p.program.to_string();
    for h in &p.hypotheses {
        out.push_str(&format!("#hypothesis {} penalty {}.\n", h.atom, h.penalty));
    }
    for o in &p.observations {
        out.push_str(&format!("#observe {o}.\n"));
    }
    out.push_str(&format!("#cost {}.\n", p.cost));
    out
}
