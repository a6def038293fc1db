//! Expression language for defining arithmetic functions and operator
//! applications: a hand-written recursive-descent parser producing a
//! spanned AST, a pretty-printer that round-trips, and an evaluator
//! delegating to the ring/operator modules.
//!
//! Grammar:
//!
//! ```text
//! expr  := ["-"] term (("+" | "-") term)*
//! term  := unary (("*" unary) | ("." unary))*    // "*" convolution, "." pointwise
//! unary := atom ["^" int]                        // convolution power
//! atom  := coeffLit | builtin | func "(" args ")" | "(" expr ")"
//! ```
//!
//! Pure-coefficient subtrees (rationals and `L_p` symbols combined with
//! `+ - * ^`) fold to a single coefficient during parsing, so
//! `L2*(f^2 - f)` scales a function while `5/6 + 2*L2*L3^2` is one
//! exact coefficient.

use std::fmt::Write as _;

use crate::arithfun::{ArithFun, BuiltinParam};
use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::numtheory;
use crate::operators::{self, OperatorSpec};
use crate::rearick;

pub type Span = (usize, usize);

#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub expr: Expr,
    pub span: Span,
}

impl Node {
    fn new(expr: Expr, span: Span) -> Box<Node> {
        Box::new(Node { expr, span })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    /// A folded pure-coefficient literal.
    Coeff(Coefficient),
    Builtin { name: String, params: Vec<BuiltinParam> },
    Conv(Box<Node>, Box<Node>),
    Pointwise(Box<Node>, Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Scale(Coefficient, Box<Node>),
    ConvPow(Box<Node>, i64),
    Exp(Box<Node>),
    Log(Box<Node>),
    /// `pow(f, g) = Exp(g * Log f)`.
    Pow(Box<Node>, Box<Node>),
    Inverse(Box<Node>),
    OpApply(OpExpr, Box<Node>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum OpExpr {
    LogDeriv,
    BasicDeriv(u64),
    CompositeDk(u64),
    DkHat(u64),
    Mg { g: Box<Node>, exponent: i64 },
    Shift(i64),
}

#[derive(Clone, Debug)]
pub struct Parsed {
    pub root: Node,
    pub warnings: Vec<String>,
}

// ---------------------------------------------------------------- lexer

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    LSym(u64),
    Plus,
    Minus,
    Star,
    Dot,
    Caret,
    Slash,
    LParen,
    RParen,
    Comma,
    LBrace,
    RBrace,
    Colon,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(v) => format!("integer {v}"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LSym(p) => format!("`L{p}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Slash => "`/`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Lexeme {
    tok: Tok,
    start: usize,
    end: usize,
}

fn lex(text: &str) -> Result<Vec<Lexeme>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match b {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'.' => Tok::Dot,
            b'^' => Tok::Caret,
            b'/' => Tok::Slash,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'{' => Tok::LBrace,
            b'}' => Tok::RBrace,
            b':' => Tok::Colon,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = &text[start..i];
                let value: i64 = digits.parse().map_err(|_| Error::Syntax {
                    position: start,
                    expected: "a smaller integer".into(),
                    found: digits.into(),
                })?;
                out.push(Lexeme { tok: Tok::Int(value), start, end: i });
                continue;
            }
            b'A'..=b'Z' | b'a'..=b'z' | b'_' => {
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                let word = &text[start..i];
                let tok = if word.len() > 1
                    && word.starts_with('L')
                    && word[1..].bytes().all(|b| b.is_ascii_digit())
                {
                    let p: u64 = word[1..].parse().map_err(|_| Error::Syntax {
                        position: start,
                        expected: "a smaller symbol index".into(),
                        found: word.into(),
                    })?;
                    Tok::LSym(p)
                } else {
                    Tok::Ident(word.into())
                };
                out.push(Lexeme { tok, start, end: i });
                continue;
            }
            other => {
                return Err(Error::Syntax {
                    position: i,
                    expected: "an operator, literal or name".into(),
                    found: (other as char).to_string(),
                })
            }
        };
        i += 1;
        out.push(Lexeme { tok, start, end: i });
    }
    out.push(Lexeme { tok: Tok::Eof, start: text.len(), end: text.len() });
    Ok(out)
}

// --------------------------------------------------------------- parser

const ZERO_ARG_BUILTINS: &[&str] =
    &["one", "eps", "mu", "Lambda", "Omega", "kappa", "tau_star", "ind_prime"];
const INT_ARG_BUILTINS: &[(&str, usize)] = &[
    ("e", 1),
    ("I", 1),
    ("ind_p", 1),
    ("ind_ppowers", 1),
    ("recur", 4),
];

struct Parser {
    lexemes: Vec<Lexeme>,
    pos: usize,
    warnings: Vec<String>,
}

pub fn parse(text: &str) -> Result<Parsed> {
    let mut parser = Parser { lexemes: lex(text)?, pos: 0, warnings: Vec::new() };
    let root = parser.expr()?;
    parser.expect(Tok::Eof, "end of input")?;
    Ok(Parsed { root: *root, warnings: parser.warnings })
}

/// Parses text that must fold to a single exact coefficient; this is
/// the round-trip entry point for the coefficient textual form.
pub fn parse_coefficient(text: &str) -> Result<Coefficient> {
    let parsed = parse(text)?;
    match parsed.root.expr {
        Expr::Coeff(c) => Ok(c),
        _ => Err(Error::Syntax {
            position: parsed.root.span.0,
            expected: "a pure coefficient expression".into(),
            found: "a function-valued expression".into(),
        }),
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.lexemes[self.pos].tok
    }

    fn here(&self) -> usize {
        self.lexemes[self.pos].start
    }

    fn advance(&mut self) -> Lexeme {
        let lexeme = self.lexemes[self.pos].clone();
        if self.pos + 1 < self.lexemes.len() {
            self.pos += 1;
        }
        lexeme
    }

    fn err(&self, expected: &str) -> Error {
        Error::Syntax {
            position: self.here(),
            expected: expected.into(),
            found: self.peek().describe(),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<Lexeme> {
        if *self.peek() == tok {
            Ok(self.advance())
        } else {
            Err(self.err(expected))
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Box<Node>> {
        let start = self.here();
        let negate = self.eat(&Tok::Minus);
        let mut node = self.term()?;
        if negate {
            let span = (start, node_end(&node));
            node = mk_scale(Coefficient::from_int(-1), node, span);
        }
        loop {
            if self.eat(&Tok::Plus) {
                let rhs = self.term()?;
                let span = (start, node_end(&rhs));
                node = mk_add(node, rhs, span);
            } else if self.eat(&Tok::Minus) {
                let rhs = self.term()?;
                let span = (start, node_end(&rhs));
                node = mk_sub(node, rhs, span);
            } else {
                break;
            }
        }
        Ok(node)
    }

    fn term(&mut self) -> Result<Box<Node>> {
        let start = self.here();
        let mut node = self.unary()?;
        let mut saw_conv = false;
        let mut saw_pointwise = false;
        let mut warned = false;
        loop {
            let pointwise = match self.peek() {
                Tok::Star => false,
                Tok::Dot => true,
                _ => break,
            };
            let op_pos = self.here();
            self.advance();
            if pointwise {
                saw_pointwise = true;
            } else {
                saw_conv = true;
            }
            if saw_conv && saw_pointwise && !warned {
                self.warnings.push(format!(
                    "byte {op_pos}: chain mixes convolution `*` and pointwise `.` without \
                     parentheses; both associate left at equal precedence"
                ));
                warned = true;
            }
            let rhs = self.unary()?;
            let span = (start, node_end(&rhs));
            node = if pointwise { mk_pointwise(node, rhs, span) } else { mk_conv(node, rhs, span) };
        }
        Ok(node)
    }

    fn unary(&mut self) -> Result<Box<Node>> {
        let start = self.here();
        let node = self.atom()?;
        if self.eat(&Tok::Caret) {
            let k = self.int_literal()?;
            let end = self.lexemes[self.pos - 1].end;
            return Ok(mk_convpow(node, k, (start, end)));
        }
        Ok(node)
    }

    fn int_literal(&mut self) -> Result<i64> {
        let negate = self.eat(&Tok::Minus);
        match self.peek().clone() {
            Tok::Int(v) => {
                self.advance();
                Ok(if negate { -v } else { v })
            }
            _ => Err(self.err("an integer")),
        }
    }

    fn prime_literal(&mut self, role: &str) -> Result<u64> {
        let position = self.here();
        match self.peek().clone() {
            Tok::Int(v) if v >= 2 && numtheory::is_prime(v as u64) => {
                self.advance();
                Ok(v as u64)
            }
            tok => Err(Error::Syntax {
                position,
                expected: format!("a prime for {role}"),
                found: tok.describe(),
            }),
        }
    }

    fn atom(&mut self) -> Result<Box<Node>> {
        let start = self.here();
        match self.peek().clone() {
            Tok::Int(_) => {
                let num = self.int_literal()?;
                let mut end = self.lexemes[self.pos - 1].end;
                let coeff = if self.eat(&Tok::Slash) {
                    let den_pos = self.here();
                    let den = self.int_literal()?;
                    end = self.lexemes[self.pos - 1].end;
                    if den == 0 {
                        return Err(Error::Syntax {
                            position: den_pos,
                            expected: "a nonzero denominator".into(),
                            found: "0".into(),
                        });
                    }
                    Coefficient::rational(num, den)
                } else {
                    Coefficient::from_int(num)
                };
                Ok(Node::new(Expr::Coeff(coeff), (start, end)))
            }
            Tok::LSym(p) => {
                if !numtheory::is_prime(p) {
                    return Err(Error::Syntax {
                        position: start,
                        expected: "a prime index for an L symbol".into(),
                        found: format!("L{p}"),
                    });
                }
                let lexeme = self.advance();
                Ok(Node::new(Expr::Coeff(Coefficient::symbol(p)), (start, lexeme.end)))
            }
            Tok::LParen => {
                self.advance();
                let inner = self.expr()?;
                let close = self.expect(Tok::RParen, "`)`")?;
                // parentheses only group; the folded inner node survives
                Ok(Node::new(inner.expr, (start, close.end)))
            }
            Tok::Ident(name) => {
                self.advance();
                self.ident_expr(&name, start)
            }
            _ => Err(self.err("a literal, builtin or `(`")),
        }
    }

    fn ident_expr(&mut self, name: &str, start: usize) -> Result<Box<Node>> {
        match name {
            "Exp" | "Log" | "inv" => {
                self.expect(Tok::LParen, "`(`")?;
                let arg = self.expr()?;
                let close = self.expect(Tok::RParen, "`)`")?;
                let span = (start, close.end);
                Ok(Node::new(
                    match name {
                        "Exp" => Expr::Exp(arg),
                        "Log" => Expr::Log(arg),
                        _ => Expr::Inverse(arg),
                    },
                    span,
                ))
            }
            "pow" => {
                self.expect(Tok::LParen, "`(`")?;
                let base = self.expr()?;
                self.expect(Tok::Comma, "`,`")?;
                let exponent = self.expr()?;
                let close = self.expect(Tok::RParen, "`)`")?;
                Ok(Node::new(Expr::Pow(base, exponent), (start, close.end)))
            }
            "pw" => {
                // pointwise power: pw(f, k) = m_f^k applied to one
                self.expect(Tok::LParen, "`(`")?;
                let g = self.expr()?;
                self.expect(Tok::Comma, "`,`")?;
                let k = self.int_literal()?;
                let close = self.expect(Tok::RParen, "`)`")?;
                let span = (start, close.end);
                let one = Node::new(
                    Expr::Builtin { name: "one".into(), params: vec![] },
                    span,
                );
                Ok(Node::new(Expr::OpApply(OpExpr::Mg { g, exponent: k }, one), span))
            }
            "dL" => {
                self.expect(Tok::LParen, "`(`")?;
                let arg = self.expr()?;
                let close = self.expect(Tok::RParen, "`)`")?;
                Ok(Node::new(Expr::OpApply(OpExpr::LogDeriv, arg), (start, close.end)))
            }
            "dp" => {
                self.expect(Tok::LParen, "`(`")?;
                let p = self.prime_literal("a basic derivation")?;
                self.expect(Tok::Comma, "`,`")?;
                let arg = self.expr()?;
                let close = self.expect(Tok::RParen, "`)`")?;
                Ok(Node::new(Expr::OpApply(OpExpr::BasicDeriv(p), arg), (start, close.end)))
            }
            "dhat" | "dk" => {
                self.expect(Tok::LParen, "`(`")?;
                let pos = self.here();
                let k = self.int_literal()?;
                let k = u64::try_from(k).ok().filter(|&k| k >= 1).ok_or_else(|| {
                    Error::Syntax {
                        position: pos,
                        expected: format!("{name} index >= 1"),
                        found: k.to_string(),
                    }
                })?;
                self.expect(Tok::Comma, "`,`")?;
                let arg = self.expr()?;
                let close = self.expect(Tok::RParen, "`)`")?;
                let op = if name == "dhat" { OpExpr::DkHat(k) } else { OpExpr::CompositeDk(k) };
                Ok(Node::new(Expr::OpApply(op, arg), (start, close.end)))
            }
            "mg" => {
                self.expect(Tok::LParen, "`(`")?;
                let g = self.expr()?;
                self.expect(Tok::Comma, "`,`")?;
                let exponent = self.int_literal()?;
                self.expect(Tok::Comma, "`,`")?;
                let arg = self.expr()?;
                let close = self.expect(Tok::RParen, "`)`")?;
                Ok(Node::new(
                    Expr::OpApply(OpExpr::Mg { g, exponent }, arg),
                    (start, close.end),
                ))
            }
            "T" => {
                self.expect(Tok::LParen, "`(`")?;
                let alpha = self.int_literal()?;
                self.expect(Tok::Comma, "`,`")?;
                let arg = self.expr()?;
                let close = self.expect(Tok::RParen, "`)`")?;
                Ok(Node::new(Expr::OpApply(OpExpr::Shift(alpha), arg), (start, close.end)))
            }
            "addfun" | "mulfun" => {
                self.expect(Tok::LBrace, "`{`")?;
                let mut pairs = Vec::new();
                loop {
                    let p = self.prime_literal("a builder key")?;
                    self.expect(Tok::Colon, "`:`")?;
                    let value_node = self.expr()?;
                    let Expr::Coeff(value) = value_node.expr else {
                        return Err(Error::Syntax {
                            position: value_node.span.0,
                            expected: "a coefficient value".into(),
                            found: "a function-valued expression".into(),
                        });
                    };
                    pairs.push((p, value));
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                let close = self.expect(Tok::RBrace, "`}`")?;
                Ok(Node::new(
                    Expr::Builtin {
                        name: name.into(),
                        params: vec![BuiltinParam::Pairs(pairs)],
                    },
                    (start, close.end),
                ))
            }
            "ind_set" => {
                self.expect(Tok::LParen, "`(`")?;
                let mut params = Vec::new();
                loop {
                    params.push(BuiltinParam::Int(self.int_literal()?));
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                let close = self.expect(Tok::RParen, "`)`")?;
                Ok(Node::new(
                    Expr::Builtin { name: name.into(), params },
                    (start, close.end),
                ))
            }
            _ => {
                if ZERO_ARG_BUILTINS.contains(&name) {
                    let end = self.lexemes[self.pos - 1].end;
                    return Ok(Node::new(
                        Expr::Builtin { name: name.into(), params: vec![] },
                        (start, end),
                    ));
                }
                if let Some(&(_, arity)) = INT_ARG_BUILTINS.iter().find(|&&(n, _)| n == name) {
                    self.expect(Tok::LParen, "`(`")?;
                    let mut params = Vec::new();
                    for i in 0..arity {
                        if i > 0 {
                            self.expect(Tok::Comma, "`,`")?;
                        }
                        params.push(BuiltinParam::Int(self.int_literal()?));
                    }
                    let close = self.expect(Tok::RParen, "`)`")?;
                    return Ok(Node::new(
                        Expr::Builtin { name: name.into(), params },
                        (start, close.end),
                    ));
                }
                Err(Error::Syntax {
                    position: start,
                    expected: "a builtin or function name".into(),
                    found: format!("`{name}`"),
                })
            }
        }
    }
}

fn node_end(node: &Node) -> usize {
    node.span.1
}

// constructors that fold pure-coefficient subtrees

fn mk_add(l: Box<Node>, r: Box<Node>, span: Span) -> Box<Node> {
    if let (Expr::Coeff(a), Expr::Coeff(b)) = (&l.expr, &r.expr) {
        return Node::new(Expr::Coeff(a + b), span);
    }
    Node::new(Expr::Add(l, r), span)
}

fn mk_sub(l: Box<Node>, r: Box<Node>, span: Span) -> Box<Node> {
    if let (Expr::Coeff(a), Expr::Coeff(b)) = (&l.expr, &r.expr) {
        return Node::new(Expr::Coeff(a - b), span);
    }
    Node::new(Expr::Sub(l, r), span)
}

fn mk_conv(l: Box<Node>, r: Box<Node>, span: Span) -> Box<Node> {
    match (&l.expr, &r.expr) {
        (Expr::Coeff(a), Expr::Coeff(b)) => Node::new(Expr::Coeff(a * b), span),
        (Expr::Coeff(a), _) => mk_scale(a.clone(), r, span),
        _ => Node::new(Expr::Conv(l, r), span),
    }
}

fn mk_pointwise(l: Box<Node>, r: Box<Node>, span: Span) -> Box<Node> {
    // pointwise product of two coefficient masses at 1 is their product
    if let (Expr::Coeff(a), Expr::Coeff(b)) = (&l.expr, &r.expr) {
        return Node::new(Expr::Coeff(a * b), span);
    }
    Node::new(Expr::Pointwise(l, r), span)
}

fn mk_scale(c: Coefficient, e: Box<Node>, span: Span) -> Box<Node> {
    match e.expr {
        Expr::Coeff(ref d) => Node::new(Expr::Coeff(&c * d), span),
        Expr::Scale(ref d, ref inner) => {
            Node::new(Expr::Scale(&c * d, inner.clone()), span)
        }
        _ => Node::new(Expr::Scale(c, e), span),
    }
}

fn mk_convpow(e: Box<Node>, k: i64, span: Span) -> Box<Node> {
    if let Expr::Coeff(ref c) = e.expr {
        if k >= 0 {
            return Node::new(Expr::Coeff(c.pow(k as u32)), span);
        }
        if let Ok(inv) = c.powi(k) {
            return Node::new(Expr::Coeff(inv), span);
        }
    }
    Node::new(Expr::ConvPow(e, k), span)
}

// --------------------------------------------------------------- pretty

/// Precedence levels: 0 expression-start constructs (leading minus),
/// 1 additive, 2 multiplicative, 3 power, 4 atoms.
fn coeff_level(s: &str) -> u8 {
    if s.contains(" + ") || s.contains(" - ") || s.starts_with('-') {
        0
    } else if s.contains('*') {
        2
    } else if s.contains('^') {
        3
    } else {
        4
    }
}

fn wrap(node: &Node, need: u8) -> String {
    let (s, level) = render(node);
    if level < need {
        format!("({s})")
    } else {
        s
    }
}

fn render(node: &Node) -> (String, u8) {
    match &node.expr {
        Expr::Coeff(c) => {
            let s = c.to_string();
            let level = coeff_level(&s);
            (s, level)
        }
        Expr::Builtin { name, params } => {
            let s = match params.as_slice() {
                [] => name.clone(),
                [BuiltinParam::Pairs(pairs)] => {
                    let mut s = format!("{name}{{");
                    for (i, (p, v)) in pairs.iter().enumerate() {
                        if i > 0 {
                            s.push_str(", ");
                        }
                        let _ = write!(s, "{p}: {v}");
                    }
                    s.push('}');
                    s
                }
                ints => {
                    let parts: Vec<String> = ints
                        .iter()
                        .map(|p| match p {
                            BuiltinParam::Int(v) => v.to_string(),
                            BuiltinParam::Pairs(_) => unreachable!("pairs are a sole param"),
                        })
                        .collect();
                    format!("{name}({})", parts.join(","))
                }
            };
            (s, 4)
        }
        Expr::Conv(l, r) => (format!("{}*{}", wrap(l, 2), wrap(r, 3)), 2),
        Expr::Pointwise(l, r) => (format!("{}.{}", wrap(l, 2), wrap(r, 3)), 2),
        Expr::Add(l, r) => (format!("{} + {}", wrap(l, 1), wrap(r, 2)), 1),
        Expr::Sub(l, r) => (format!("{} - {}", wrap(l, 1), wrap(r, 2)), 1),
        Expr::Scale(c, e) => {
            if c == &Coefficient::from_int(-1) {
                return (format!("-{}", wrap(e, 2)), 0);
            }
            let cs = c.to_string();
            if cs.contains(" + ") || cs.contains(" - ") {
                (format!("({cs})*{}", wrap(e, 3)), 2)
            } else {
                let level = if cs.starts_with('-') { 0 } else { 2 };
                (format!("{cs}*{}", wrap(e, 3)), level)
            }
        }
        Expr::ConvPow(e, k) => (format!("{}^{k}", wrap(e, 4)), 3),
        Expr::Exp(e) => (format!("Exp({})", wrap(e, 0)), 4),
        Expr::Log(e) => (format!("Log({})", wrap(e, 0)), 4),
        Expr::Pow(b, g) => (format!("pow({}, {})", wrap(b, 0), wrap(g, 0)), 4),
        Expr::Inverse(e) => (format!("inv({})", wrap(e, 0)), 4),
        Expr::OpApply(op, e) => {
            let s = match op {
                OpExpr::LogDeriv => format!("dL({})", wrap(e, 0)),
                OpExpr::BasicDeriv(p) => format!("dp({p}, {})", wrap(e, 0)),
                OpExpr::CompositeDk(k) => format!("dk({k}, {})", wrap(e, 0)),
                OpExpr::DkHat(k) => format!("dhat({k}, {})", wrap(e, 0)),
                OpExpr::Mg { g, exponent } => {
                    format!("mg({}, {exponent}, {})", wrap(g, 0), wrap(e, 0))
                }
                OpExpr::Shift(alpha) => format!("T({alpha}, {})", wrap(e, 0)),
            };
            (s, 4)
        }
    }
}

/// Canonical text for an AST; `parse` of the result reproduces the AST.
pub fn pretty(node: &Node) -> String {
    render(node).0
}

// ----------------------------------------------------------------- eval

fn spanned(span: Span, e: Error) -> Error {
    match e {
        Error::EvalAt { .. } | Error::Syntax { .. } => e,
        other => Error::EvalAt { span, source: Box::new(other) },
    }
}

/// Evaluates an expression at the requested horizon. Horizon shrink
/// propagates bottom-up: the result's own horizon is the effective one.
pub fn eval_expr(node: &Node, horizon: u64) -> Result<ArithFun> {
    let result = match &node.expr {
        Expr::Coeff(c) => ArithFun::epsilon(horizon).map(|eps| eps.scale(c)),
        Expr::Builtin { name, params } => ArithFun::builtin(name, params, horizon),
        Expr::Conv(l, r) => {
            let (a, b) = (eval_expr(l, horizon)?, eval_expr(r, horizon)?);
            Ok(a.conv(&b))
        }
        Expr::Pointwise(l, r) => {
            let (a, b) = (eval_expr(l, horizon)?, eval_expr(r, horizon)?);
            Ok(a.pointwise_mul(&b))
        }
        Expr::Add(l, r) => {
            let (a, b) = (eval_expr(l, horizon)?, eval_expr(r, horizon)?);
            Ok(a.add(&b))
        }
        Expr::Sub(l, r) => {
            let (a, b) = (eval_expr(l, horizon)?, eval_expr(r, horizon)?);
            Ok(a.sub(&b))
        }
        Expr::Scale(c, e) => eval_expr(e, horizon).map(|f| f.scale(c)),
        Expr::ConvPow(e, k) => eval_expr(e, horizon).and_then(|f| f.conv_power(*k)),
        Expr::Exp(e) => eval_expr(e, horizon).and_then(|f| rearick::exp0(&f)),
        Expr::Log(e) => eval_expr(e, horizon).and_then(|f| rearick::log1(&f)),
        Expr::Pow(b, g) => {
            let (base, exponent) = (eval_expr(b, horizon)?, eval_expr(g, horizon)?);
            rearick::power_fg(&base, &exponent)
        }
        Expr::Inverse(e) => eval_expr(e, horizon).and_then(|f| f.conv_inverse()),
        Expr::OpApply(op, e) => {
            let f = eval_expr(e, horizon)?;
            let spec = match op {
                OpExpr::LogDeriv => OperatorSpec::LogDeriv,
                OpExpr::BasicDeriv(p) => OperatorSpec::BasicDeriv(*p),
                OpExpr::CompositeDk(k) => OperatorSpec::CompositeDk(*k),
                OpExpr::DkHat(k) => OperatorSpec::DkHat(*k),
                OpExpr::Mg { g, exponent } => OperatorSpec::PointwiseMul {
                    g: eval_expr(g, horizon)?,
                    exponent: *exponent,
                },
                OpExpr::Shift(alpha) => OperatorSpec::Shift(*alpha),
            };
            operators::apply(&spec, &f)
        }
    };
    result.map_err(|e| spanned(node.span, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;

    fn parse_ok(text: &str) -> Node {
        parse(text).unwrap_or_else(|e| panic!("parse `{text}`: {e}")).root
    }

    #[test]
    fn parses_builtins_and_calls() {
        let node = parse_ok("Log(one)");
        assert!(matches!(node.expr, Expr::Log(_)));

        let node = parse_ok("e(2)*e(3)");
        match node.expr {
            Expr::Conv(l, r) => {
                assert!(matches!(l.expr, Expr::Builtin { ref name, .. } if name == "e"));
                assert!(matches!(r.expr, Expr::Builtin { ref name, .. } if name == "e"));
            }
            other => panic!("expected Conv, got {other:?}"),
        }
    }

    #[test]
    fn parses_the_differential_equation_shape() {
        let node = parse_ok("dL(ind_p(2)) - L2*(ind_p(2)^2 - ind_p(2))");
        match node.expr {
            Expr::Sub(l, r) => {
                assert!(matches!(l.expr, Expr::OpApply(OpExpr::LogDeriv, _)));
                match r.expr {
                    Expr::Scale(c, inner) => {
                        assert_eq!(c, Coefficient::symbol(2));
                        assert!(matches!(inner.expr, Expr::Sub(_, _)));
                    }
                    other => panic!("expected Scale, got {other:?}"),
                }
            }
            other => panic!("expected Sub, got {other:?}"),
        }
    }

    #[test]
    fn coefficient_subtrees_fold() {
        let node = parse_ok("5/6 + 2*L2*L3^2");
        let Expr::Coeff(c) = node.expr else { panic!("expected folded coefficient") };
        assert_eq!(c.to_string(), "5/6 + 2*L2*L3^2");
        assert_eq!(parse_coefficient("5/6 + 2*L2*L3^2").unwrap(), c);

        // and the folded literal scales a function
        let node = parse_ok("(1/2 + L2)*one");
        assert!(matches!(node.expr, Expr::Scale(_, _)));

        assert!(parse_coefficient("e(2)").is_err());
    }

    #[test]
    fn display_of_coefficients_reparses() {
        let c = &(&Coefficient::rational(-5, 6) + &Coefficient::symbol(2))
            * &Coefficient::one();
        let text = c.to_string();
        assert_eq!(parse_coefficient(&text).unwrap(), c);
    }

    #[test]
    fn syntax_error_positions_point_into_input() {
        for text in ["", "e(", "Log(one", "1 + * 2", "foo(3)", "L4", "dp(4, one)", "e(2)^"] {
            match parse(text) {
                Err(Error::Syntax { position, .. }) => {
                    assert!(position <= text.len(), "position {position} in `{text}`");
                }
                other => panic!("expected syntax error for `{text}`, got {other:?}"),
            }
        }
    }

    #[test]
    fn mixed_chain_warns() {
        let parsed = parse("one*one.one").unwrap();
        assert_eq!(parsed.warnings.len(), 1);
        assert!(parse("one*(one.one)").unwrap().warnings.is_empty());
    }

    #[test]
    fn eval_kappa_via_log() {
        let f = eval_expr(&parse_ok("Log(one)"), 16).unwrap();
        assert_eq!(f, ArithFun::kappa(16).unwrap());
    }

    #[test]
    fn eval_geometric_inverse() {
        let f = eval_expr(&parse_ok("inv(eps - e(2))"), 32).unwrap();
        assert_eq!(f, ArithFun::ind_prime_powers(2, 32).unwrap());
    }

    #[test]
    fn eval_power_zero_is_eps() {
        let f = eval_expr(&parse_ok("e(2)^0"), 8).unwrap();
        assert_eq!(f, ArithFun::epsilon(8).unwrap());
    }

    #[test]
    fn eval_propagates_horizon_shrink() {
        let f = eval_expr(&parse_ok("dp(3, one)"), 10).unwrap();
        assert_eq!(f.horizon(), 3);
        let f = eval_expr(&parse_ok("dhat(4, Lambda)"), 64).unwrap();
        assert_eq!(f.horizon(), 16);
    }

    #[test]
    fn eval_errors_carry_spans() {
        let text = "one + Exp(one)";
        let err = eval_expr(&parse_ok(text), 16).unwrap_err();
        match err {
            Error::EvalAt { span, source } => {
                assert_eq!(&text[span.0..span.1], "Exp(one)");
                assert!(matches!(*source, Error::NotInA0(_)));
            }
            other => panic!("expected EvalAt, got {other}"),
        }
    }

    #[test]
    fn eval_pw_is_pointwise_power() {
        let f = eval_expr(&parse_ok("pw(Omega, 2)"), 32).unwrap();
        let omega = ArithFun::omega(32).unwrap();
        assert_eq!(f, omega.pointwise_pow(2));
    }

    #[test]
    fn eval_builders() {
        let f = eval_expr(&parse_ok("addfun{2: 1, 3: 1}"), 32).unwrap();
        assert_eq!(f.at(12).as_rational(), Some(&rat(3, 1)));
        let g = eval_expr(&parse_ok("mulfun{2: L2}"), 16).unwrap();
        assert_eq!(g.at(8), &Coefficient::symbol(2).pow(3));
    }

    #[test]
    fn pretty_round_trips_hand_cases() {
        for text in [
            "Log(one)",
            "e(2)*e(3)",
            "dL(ind_p(2)) - L2*(ind_p(2)^2 - ind_p(2))",
            "one.Omega",
            "(one + eps)^3",
            "pow(one, eps)",
            "mg(Omega, 2, one)",
            "T(-1, mu)",
            "inv(eps - e(2))",
            "ind_set(2,3,5)",
            "recur(1,-1,1,1)",
            "addfun{2: L2, 3: 1/2}",
            "-one",
            "2*one - 3/2*eps",
            "dhat(4, Lambda)",
            "dk(6, one)",
        ] {
            let first = parse_ok(text);
            let printed = pretty(&first);
            let second = parse(&printed)
                .unwrap_or_else(|e| panic!("reparse `{printed}`: {e}"))
                .root;
            assert_eq!(strip_spans(&first), strip_spans(&second), "via `{printed}`");
        }
    }

    // spans differ between original and pretty-printed text; compare shape
    fn strip_spans(node: &Node) -> Node {
        let expr = match &node.expr {
            Expr::Coeff(c) => Expr::Coeff(c.clone()),
            Expr::Builtin { name, params } => {
                Expr::Builtin { name: name.clone(), params: params.clone() }
            }
            Expr::Conv(l, r) => {
                Expr::Conv(Box::new(strip_spans(l)), Box::new(strip_spans(r)))
            }
            Expr::Pointwise(l, r) => {
                Expr::Pointwise(Box::new(strip_spans(l)), Box::new(strip_spans(r)))
            }
            Expr::Add(l, r) => Expr::Add(Box::new(strip_spans(l)), Box::new(strip_spans(r))),
            Expr::Sub(l, r) => Expr::Sub(Box::new(strip_spans(l)), Box::new(strip_spans(r))),
            Expr::Scale(c, e) => Expr::Scale(c.clone(), Box::new(strip_spans(e))),
            Expr::ConvPow(e, k) => Expr::ConvPow(Box::new(strip_spans(e)), *k),
            Expr::Exp(e) => Expr::Exp(Box::new(strip_spans(e))),
            Expr::Log(e) => Expr::Log(Box::new(strip_spans(e))),
            Expr::Pow(b, g) => Expr::Pow(Box::new(strip_spans(b)), Box::new(strip_spans(g))),
            Expr::Inverse(e) => Expr::Inverse(Box::new(strip_spans(e))),
            Expr::OpApply(op, e) => {
                let op = match op {
                    OpExpr::Mg { g, exponent } => {
                        OpExpr::Mg { g: Box::new(strip_spans(g)), exponent: *exponent }
                    }
                    other => other.clone(),
                };
                Expr::OpApply(op, Box::new(strip_spans(e)))
            }
        };
        Node { expr, span: (0, 0) }
    }
}
