//! Text formats for problems, formulas and order clauses.
//!
//! Problem grammar, loosest binding first:
//!
//! ```text
//! problem  := conj ((';' | newline) conj)*
//! iff      := imp ('<->' imp)*
//! imp      := or ('->' imp)?
//! or       := and ('|' and)*
//! and      := unary ('&' unary)*
//! unary    := '~' unary | 'D' unary | ('A' | 'E') ident '.' iff | primary
//! primary  := 'top' | 'bot' | '(' iff ')' | ident ('(' term (',' term)* ')')?
//! ```
//!
//! A newline only separates conjuncts outside parentheses, and not when the
//! line ends in an operator or the next one starts with a binary operator.
//! `#` starts a comment. In term position an identifier bound by an
//! enclosing quantifier is a variable; an unbound nullary identifier is a
//! constant unless it starts with a letter from `u` to `z`, in which case it
//! is a free variable and the conjunct is rejected as not closed.
//!
//! Clause files hold one clause per line, `{s < t, u <= v}`; there the
//! `u`..`z` identifiers are the variables.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::clause::{OrderClause, OrderLiteral};
use crate::formula::{
    expand_abbreviations, to_prenex_decomposition, Atom, Formula, FormulaError, PrenexFormula, SurfaceFormula,
};
use crate::term::{Origin, Symbol, Term, Var, BOTTOM_NAME, TOP_NAME};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("conjunct {index}: {source}")]
    Conjunct {
        index: usize,
        #[source]
        source: FormulaError,
    },
}

impl ParseError {
    /// The underlying formula error, if this is not a syntax error.
    pub fn formula_error(&self) -> Option<&FormulaError> {
        match self {
            ParseError::Conjunct { source, .. } => Some(source),
            ParseError::Syntax { .. } => None,
        }
    }
}

/// A parsed problem: the conjuncts of a conjunction of closed prenex formulas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemFile {
    pub conjuncts: Vec<PrenexFormula>,
}

impl ProblemFile {
    pub fn formulas(&self) -> Vec<Formula> {
        self.conjuncts.iter().map(PrenexFormula::to_formula).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Semi,
    Newline,
    And,
    Or,
    Arrow,
    Iff,
    Not,
    Lt,
    Le,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Newline => f.write_str("end of line"),
            Tok::And => f.write_str("`&`"),
            Tok::Or => f.write_str("`|`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Iff => f.write_str("`<->`"),
            Tok::Not => f.write_str("`~`"),
            Tok::Lt => f.write_str("`<`"),
            Tok::Le => f.write_str("`<=`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    for (li, raw) in text.lines().enumerate() {
        let line = li + 1;
        let chars: Vec<char> = raw.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            let push = |out: &mut Vec<Spanned>, tok| out.push(Spanned { tok, line, column });
            match c {
                '#' => break,
                c if c.is_whitespace() => {}
                '(' => push(&mut out, Tok::LParen),
                ')' => push(&mut out, Tok::RParen),
                '{' => push(&mut out, Tok::LBrace),
                '}' => push(&mut out, Tok::RBrace),
                ',' => push(&mut out, Tok::Comma),
                '.' => push(&mut out, Tok::Dot),
                ';' => push(&mut out, Tok::Semi),
                '&' => push(&mut out, Tok::And),
                '|' => push(&mut out, Tok::Or),
                '~' => push(&mut out, Tok::Not),
                '-' if chars.get(i + 1) == Some(&'>') => {
                    push(&mut out, Tok::Arrow);
                    i += 1;
                }
                '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                    push(&mut out, Tok::Iff);
                    i += 2;
                }
                '<' if chars.get(i + 1) == Some(&'=') => {
                    push(&mut out, Tok::Le);
                    i += 1;
                }
                '<' => push(&mut out, Tok::Lt),
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let start = i;
                    while i + 1 < chars.len() && (chars[i + 1].is_ascii_alphanumeric() || chars[i + 1] == '_') {
                        i += 1;
                    }
                    let word: String = chars[start..=i].iter().collect();
                    push(&mut out, Tok::Ident(word));
                }
                other => return Err(syntax(line, column, format!("unexpected character `{other}`"))),
            }
            i += 1;
        }
        out.push(Spanned {
            tok: Tok::Newline,
            line,
            column: chars.len() + 1,
        });
    }
    let (line, column) = out.last().map(|s| (s.line, s.column)).unwrap_or((1, 1));
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

/// Drops newlines that do not separate conjuncts.
fn significant_newlines(toks: Vec<Spanned>) -> Vec<Spanned> {
    let continues = |t: &Tok| {
        matches!(
            t,
            Tok::And | Tok::Or | Tok::Arrow | Tok::Iff | Tok::Not | Tok::Dot | Tok::LParen | Tok::Comma | Tok::Semi
        ) || matches!(t, Tok::Ident(s) if s == "D" || s == "A" || s == "E")
    };
    let starts_binary = |t: &Tok| matches!(t, Tok::And | Tok::Or | Tok::Arrow | Tok::Iff | Tok::RParen | Tok::Comma);
    let mut out: Vec<Spanned> = Vec::new();
    let mut depth: i64 = 0;
    for (i, s) in toks.iter().enumerate() {
        match s.tok {
            Tok::LParen => depth += 1,
            Tok::RParen => depth -= 1,
            Tok::Newline => {
                let prev = out.last().map(|p| &p.tok);
                let next = toks[i + 1..].iter().map(|n| &n.tok).find(|t| **t != Tok::Newline);
                let keep = depth <= 0
                    && prev.is_some_and(|p| !continues(p) && *p != Tok::Newline)
                    && next.is_some_and(|n| !starts_binary(n));
                if !keep {
                    continue;
                }
            }
            _ => {}
        }
        out.push(s.clone());
    }
    out
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "A" | "E" | "D") || s == TOP_NAME || s == BOTTOM_NAME
}

/// Identifiers from `u` to `z` name variables where no binder decides.
pub fn is_variable_name(s: &str) -> bool {
    s.chars().next().is_some_and(|c| ('u'..='z').contains(&c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Predicate,
    Function,
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    bound: Vec<String>,
    signature: HashMap<String, (Kind, usize)>,
    constants: Vec<String>,
}

impl Parser {
    fn new(toks: Vec<Spanned>) -> Self {
        Parser {
            toks,
            pos: 0,
            bound: Vec::new(),
            signature: HashMap::new(),
            constants: Vec::new(),
        }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let s = &self.toks[self.pos];
        (s.line, s.column)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let (l, c) = self.here();
        syntax(l, c, message)
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {want}, found {}", self.peek())))
        }
    }

    fn declare(&mut self, name: &str, kind: Kind, arity: usize) -> Result<(), ParseError> {
        match self.signature.get(name) {
            Some(&(k, a)) if k != kind || a != arity => {
                let what = |k: Kind| match k {
                    Kind::Predicate => "predicate",
                    Kind::Function => "function",
                };
                Err(self.error(format!(
                    "`{name}` used as {} of arity {arity} but earlier as {} of arity {a}",
                    what(kind),
                    what(k)
                )))
            }
            Some(_) => Ok(()),
            None => {
                self.signature.insert(name.to_string(), (kind, arity));
                Ok(())
            }
        }
    }

    fn iff(&mut self) -> Result<SurfaceFormula, ParseError> {
        let mut l = self.imp()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let r = self.imp()?;
            l = SurfaceFormula::Iff(Box::new(l), Box::new(r));
        }
        Ok(l)
    }

    fn imp(&mut self) -> Result<SurfaceFormula, ParseError> {
        let l = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let r = self.imp()?;
            return Ok(SurfaceFormula::Implies(Box::new(l), Box::new(r)));
        }
        Ok(l)
    }

    fn or(&mut self) -> Result<SurfaceFormula, ParseError> {
        let mut l = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let r = self.and()?;
            l = SurfaceFormula::Or(Box::new(l), Box::new(r));
        }
        Ok(l)
    }

    fn and(&mut self) -> Result<SurfaceFormula, ParseError> {
        let mut l = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let r = self.unary()?;
            l = SurfaceFormula::And(Box::new(l), Box::new(r));
        }
        Ok(l)
    }

    fn unary(&mut self) -> Result<SurfaceFormula, ParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(SurfaceFormula::Not(Box::new(self.unary()?)))
            }
            Tok::Ident(s) if s == "D" => {
                self.bump();
                Ok(SurfaceFormula::Delta(Box::new(self.unary()?)))
            }
            Tok::Ident(s) if s == "A" || s == "E" => {
                self.bump();
                let v = match self.bump() {
                    Tok::Ident(v) if !is_keyword(&v) => v,
                    other => {
                        self.pos -= usize::from(other != Tok::Eof);
                        return Err(self.error(format!("expected a variable after `{s}`, found {other}")));
                    }
                };
                self.expect(Tok::Dot)?;
                self.bound.push(v.clone());
                let body = self.iff();
                self.bound.pop();
                let body = Box::new(body?);
                Ok(if s == "A" {
                    SurfaceFormula::Forall(Var::new(v.as_str()), body)
                } else {
                    SurfaceFormula::Exists(Var::new(v.as_str()), body)
                })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<SurfaceFormula, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.iff()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(s) if s == TOP_NAME => {
                self.bump();
                Ok(SurfaceFormula::Top)
            }
            Tok::Ident(s) if s == BOTTOM_NAME => {
                self.bump();
                Ok(SurfaceFormula::Bottom)
            }
            Tok::Ident(s) if !is_keyword(&s) => {
                self.bump();
                let args = self.arguments()?;
                self.declare(&s, Kind::Predicate, args.len())?;
                let pred = Symbol::new(s.as_str(), args.len(), Origin::Predicate);
                Ok(SurfaceFormula::Atom(Atom::new(pred, args)))
            }
            other => Err(self.error(format!("expected a formula, found {other}"))),
        }
    }

    fn arguments(&mut self) -> Result<Vec<Term>, ParseError> {
        let mut args = Vec::new();
        if *self.peek() == Tok::LParen {
            self.bump();
            loop {
                args.push(self.term()?);
                match self.bump() {
                    Tok::Comma => continue,
                    Tok::RParen => break,
                    other => {
                        self.pos -= usize::from(other != Tok::Eof);
                        return Err(self.error(format!("expected `,` or `)`, found {other}")));
                    }
                }
            }
        }
        Ok(args)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let name = match self.peek().clone() {
            Tok::Ident(s) if !matches!(s.as_str(), "A" | "E" | "D") => s,
            other => return Err(self.error(format!("expected a term, found {other}"))),
        };
        self.bump();
        if name == TOP_NAME || name == BOTTOM_NAME {
            if *self.peek() == Tok::LParen {
                return Err(self.error(format!("`{name}` takes no arguments")));
            }
            return Ok(if name == TOP_NAME { Term::top() } else { Term::bottom() });
        }
        if *self.peek() != Tok::LParen
            && (self.bound.contains(&name) || (is_variable_name(&name) && !self.constants.contains(&name)))
        {
            return Ok(Term::var(name.as_str()));
        }
        let args = self.arguments()?;
        self.declare(&name, Kind::Function, args.len())?;
        let origin = if args.is_empty() {
            Origin::Constant
        } else {
            Origin::Function
        };
        Ok(Term::app(Symbol::new(name.as_str(), args.len(), origin), args))
    }

    fn at_separator(&self) -> bool {
        matches!(self.peek(), Tok::Semi | Tok::Newline | Tok::Eof)
    }

    fn skip_separators(&mut self) {
        while matches!(self.peek(), Tok::Semi | Tok::Newline) {
            self.bump();
        }
    }
}

/// Parses a problem file into its closed prenex conjuncts.
pub fn parse_problem(text: &str) -> Result<ProblemFile, ParseError> {
    let surface = parse_surface_conjuncts(text)?;
    let mut conjuncts = Vec::new();
    for (i, f) in surface.iter().enumerate() {
        let f = expand_abbreviations(f).rename_bound_apart();
        let p = to_prenex_decomposition(&f).map_err(|source| ParseError::Conjunct { index: i + 1, source })?;
        conjuncts.push(p);
    }
    Ok(ProblemFile { conjuncts })
}

/// Parses a single formula, which need be neither closed nor prenex.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let toks = significant_newlines(tokenize(text)?);
    let mut p = Parser::new(toks);
    p.skip_separators();
    let f = p.iff()?;
    p.skip_separators();
    if *p.peek() != Tok::Eof {
        return Err(p.error(format!("unexpected {}", p.peek())));
    }
    Ok(expand_abbreviations(&f).rename_bound_apart())
}

fn parse_surface_conjuncts(text: &str) -> Result<Vec<SurfaceFormula>, ParseError> {
    let toks = significant_newlines(tokenize(text)?);
    let mut p = Parser::new(toks);
    let mut out = Vec::new();
    p.skip_separators();
    while *p.peek() != Tok::Eof {
        out.push(p.iff()?);
        if !p.at_separator() {
            return Err(p.error(format!("expected `;` or a new line, found {}", p.peek())));
        }
        p.skip_separators();
    }
    if out.is_empty() {
        return Err(syntax(1, 1, "empty problem"));
    }
    Ok(out)
}

/// Parses one clause `{s < t, u <= v}`.
pub fn parse_clause(text: &str) -> Result<OrderClause, ParseError> {
    let cs = parse_clauses(text)?;
    match cs.len() {
        1 => Ok(cs.into_iter().next().unwrap()),
        n => Err(syntax(1, 1, format!("expected one clause, found {n}"))),
    }
}

/// Parses a clause list, one or more clauses per line.
pub fn parse_clauses(text: &str) -> Result<Vec<OrderClause>, ParseError> {
    parse_clauses_with(text, &[])
}

/// Like [`parse_clauses`], but the nullary symbols in `known` stay constants
/// even when their names look like variables.
pub fn parse_clauses_with(text: &str, known: &[Symbol]) -> Result<Vec<OrderClause>, ParseError> {
    clauses(text, known, true)
}

/// Literal order is kept as written.
pub(crate) fn parse_clause_verbatim(text: &str, known: &[Symbol]) -> Result<OrderClause, ParseError> {
    let cs = clauses(text, known, false)?;
    match cs.len() {
        1 => Ok(cs.into_iter().next().unwrap()),
        n => Err(syntax(1, 1, format!("expected one clause, found {n}"))),
    }
}

fn clauses(text: &str, known: &[Symbol], normalize: bool) -> Result<Vec<OrderClause>, ParseError> {
    let toks: Vec<Spanned> = tokenize(text)?.into_iter().filter(|s| s.tok != Tok::Newline).collect();
    let mut p = Parser::new(toks);
    p.constants = known
        .iter()
        .filter(|s| s.arity() == 0)
        .map(|s| s.name().to_string())
        .collect();
    let mut out = Vec::new();
    while *p.peek() != Tok::Eof {
        p.expect(Tok::LBrace)?;
        let mut lits = Vec::new();
        if *p.peek() != Tok::RBrace {
            loop {
                let left = p.term()?;
                let strict = match p.bump() {
                    Tok::Lt => true,
                    Tok::Le => false,
                    other => {
                        p.pos -= usize::from(other != Tok::Eof);
                        return Err(p.error(format!("expected `<` or `<=`, found {other}")));
                    }
                };
                let right = p.term()?;
                lits.push(OrderLiteral { left, right, strict });
                if *p.peek() == Tok::Comma {
                    p.bump();
                } else {
                    break;
                }
            }
        }
        p.expect(Tok::RBrace)?;
        out.push(if normalize {
            OrderClause::new(lits)
        } else {
            OrderClause::verbatim(lits)
        });
    }
    Ok(out)
}

const PREC_IMP: u8 = 2;
const PREC_OR: u8 = 3;
const PREC_AND: u8 = 4;
const PREC_UNARY: u8 = 5;

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Forall(..) | Formula::Exists(..) => 0,
        Formula::Implies(..) => PREC_IMP,
        Formula::Or(..) => PREC_OR,
        Formula::And(..) => PREC_AND,
        _ => PREC_UNARY,
    }
}

/// Renders a formula in the problem grammar with minimal parentheses.
pub fn render_formula(f: &Formula) -> String {
    let mut s = String::new();
    render_into(f, &mut s);
    s
}

fn render_child(f: &Formula, min: u8, out: &mut String) {
    if prec(f) < min {
        out.push('(');
        render_into(f, out);
        out.push(')');
    } else {
        render_into(f, out);
    }
}

fn render_into(f: &Formula, out: &mut String) {
    match f {
        Formula::Atom(a) => {
            out.push_str(&a.to_term().to_string());
        }
        Formula::Top => out.push_str(TOP_NAME),
        Formula::Bottom => out.push_str(BOTTOM_NAME),
        Formula::And(l, r) => {
            render_child(l, PREC_AND, out);
            out.push_str(" & ");
            render_child(r, PREC_AND + 1, out);
        }
        Formula::Or(l, r) => {
            render_child(l, PREC_OR, out);
            out.push_str(" | ");
            render_child(r, PREC_OR + 1, out);
        }
        Formula::Implies(l, r) => {
            render_child(l, PREC_IMP + 1, out);
            out.push_str(" -> ");
            render_child(r, PREC_IMP, out);
        }
        Formula::Delta(g) => {
            out.push_str("D ");
            render_child(g, PREC_UNARY, out);
        }
        Formula::Forall(v, g) | Formula::Exists(v, g) => {
            out.push_str(if matches!(f, Formula::Forall(..)) { "A " } else { "E " });
            out.push_str(v.name());
            out.push_str(". ");
            render_into(g, out);
        }
    }
}

pub fn render_clause(c: &OrderClause) -> String {
    c.to_string()
}

/// One clause per line.
pub fn render_clauses(cs: &[OrderClause]) -> String {
    let mut s = String::new();
    for c in cs {
        s.push_str(&c.to_string());
        s.push('\n');
    }
    s
}
