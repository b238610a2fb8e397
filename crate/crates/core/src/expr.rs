//! Arithmetic expressions for boundary functions.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := number | 'x' index | func '(' expr (',' expr)* ')' | '(' expr ')'
//! func    := 'min' | 'max' | 'sqrt' | 'abs'
//! ```
//!
//! `^` binds tighter than unary minus and is right-associative, so
//! `-2^2 = -4` and `2^3^2 = 512`. Variables are 1-based (`x1 … xn`).
//! Positions in errors are 1-based character columns.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum ParseError {
    Empty,
    UnexpectedChar { pos: usize, ch: char },
    BadNumber { pos: usize, text: String },
    Syntax { pos: usize, expected: &'static str },
    UnknownIdentifier { pos: usize, name: String },
    VariableOutOfRange { pos: usize, index: usize, dim: usize },
    Arity { pos: usize, func: &'static str, found: usize },
}

impl ParseError {
    pub fn position(&self) -> Option<usize> {
        match self {
            ParseError::Empty => None,
            ParseError::UnexpectedChar { pos, .. }
            | ParseError::BadNumber { pos, .. }
            | ParseError::Syntax { pos, .. }
            | ParseError::UnknownIdentifier { pos, .. }
            | ParseError::VariableOutOfRange { pos, .. }
            | ParseError::Arity { pos, .. } => Some(*pos),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Empty => f.write_str("empty expression"),
            ParseError::UnexpectedChar { pos, ch } => {
                write!(f, "unexpected character {ch:?} at position {pos}")
            }
            ParseError::BadNumber { pos, text } => write!(f, "malformed number {text:?} at position {pos}"),
            ParseError::Syntax { pos, expected } => {
                write!(f, "syntax error at position {pos}: expected {expected}")
            }
            ParseError::UnknownIdentifier { pos, name } => {
                write!(f, "unknown identifier {name:?} at position {pos}")
            }
            ParseError::VariableOutOfRange { pos, index, dim } => write!(
                f,
                "variable x{index} at position {pos} is outside x1..x{dim}"
            ),
            ParseError::Arity { pos, func, found } => {
                write!(f, "{func} at position {pos} called with {found} arguments")
            }
        }
    }
}

impl core::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
pub enum EvalError {
    DimensionMismatch { expected: usize, found: usize },
    DivisionByZero,
    SqrtOfNegative(f64),
    NonFinite,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::DimensionMismatch { expected, found } => {
                write!(f, "point has {found} coordinates, expression expects {expected}")
            }
            EvalError::DivisionByZero => f.write_str("division by zero"),
            EvalError::SqrtOfNegative(v) => write!(f, "square root of negative value {v}"),
            EvalError::NonFinite => f.write_str("expression evaluated to a non-finite value"),
        }
    }
}

impl core::error::Error for EvalError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Min,
    Max,
    Sqrt,
    Abs,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Min => "min",
            Func::Max => "max",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Num(f64),
    /// 0-based coordinate index.
    Var(usize),
    Neg(Box<Node>),
    Bin(BinOp, Box<Node>, Box<Node>),
    Call(Func, Vec<Node>),
}

impl Node {
    fn eval(&self, x: &[f64]) -> Result<f64, EvalError> {
        Ok(match self {
            Node::Num(v) => *v,
            Node::Var(k) => x[*k],
            Node::Neg(e) => -e.eval(x)?,
            Node::Bin(op, a, b) => {
                let (a, b) = (a.eval(x)?, b.eval(x)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div if b == 0.0 => return Err(EvalError::DivisionByZero),
                    BinOp::Div => a / b,
                    BinOp::Pow => libm::pow(a, b),
                }
            }
            Node::Call(f, args) => {
                let vals = args.iter().map(|a| a.eval(x)).collect::<Result<Vec<_>, _>>()?;
                match f {
                    Func::Min => vals.iter().copied().fold(f64::INFINITY, f64::min),
                    Func::Max => vals.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                    Func::Sqrt if vals[0] < 0.0 => return Err(EvalError::SqrtOfNegative(vals[0])),
                    Func::Sqrt => libm::sqrt(vals[0]),
                    Func::Abs => vals[0].abs(),
                }
            }
        })
    }

    fn visit_vars(&self, out: &mut Vec<usize>) {
        match self {
            Node::Num(_) => {}
            Node::Var(k) => out.push(*k),
            Node::Neg(e) => e.visit_vars(out),
            Node::Bin(_, a, b) => {
                a.visit_vars(out);
                b.visit_vars(out);
            }
            Node::Call(_, args) => args.iter().for_each(|a| a.visit_vars(out)),
        }
    }
}

/// Fully parenthesised rendering; parsing it back yields the same tree.
impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Num(v) => write!(f, "{v}"),
            Node::Var(k) => write!(f, "x{}", k + 1),
            Node::Neg(e) => write!(f, "(-{e})"),
            Node::Bin(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Node::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// A parsed boundary expression over `dim` variables.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryExpr {
    root: Node,
    dim: usize,
    source: String,
}

impl BoundaryExpr {
    pub fn parse(src: &str, dim: usize) -> Result<Self, ParseError> {
        let tokens = lex(src)?;
        if tokens.is_empty() {
            return Err(ParseError::Empty);
        }
        let end = src.chars().count() + 1;
        let mut p = Parser { tokens, at: 0, dim, end };
        let root = p.expr()?;
        if p.at < p.tokens.len() {
            return Err(ParseError::Syntax { pos: p.tokens[p.at].pos, expected: "operator or end of input" });
        }
        Ok(BoundaryExpr { root, dim, source: src.to_string() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64, EvalError> {
        if x.len() != self.dim {
            return Err(EvalError::DimensionMismatch { expected: self.dim, found: x.len() });
        }
        let v = self.root.eval(x)?;
        if !v.is_finite() {
            return Err(EvalError::NonFinite);
        }
        Ok(v)
    }

    /// Whether coordinate `k` (0-based) appears in the expression.
    pub fn uses_var(&self, k: usize) -> bool {
        let mut vars = Vec::new();
        self.root.visit_vars(&mut vars);
        vars.contains(&k)
    }
}

impl fmt::Display for BoundaryExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    Comma,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // Exponent, only if followed by digits.
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v: f64 = text.parse().map_err(|_| ParseError::BadNumber { pos, text: text.clone() })?;
            out.push(Token { tok: Tok::Num(v), pos });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), pos });
            continue;
        }
        let tok = match c {
            '+' | '-' | '*' | '/' | '^' => Tok::Op(c),
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            _ => return Err(ParseError::UnexpectedChar { pos, ch: c }),
        };
        out.push(Token { tok, pos });
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
    dim: usize,
    /// Position reported for errors at end of input.
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.at).map(|t| &t.tok)
    }

    fn pos(&self) -> usize {
        self.tokens.get(self.at).map_or(self.end, |t| t.pos)
    }

    fn eat_op(&mut self, ops: &[char]) -> Option<char> {
        match self.peek() {
            Some(Tok::Op(c)) if ops.contains(c) => {
                let c = *c;
                self.at += 1;
                Some(c)
            }
            _ => None,
        }
    }

    fn expect(&mut self, tok: Tok, expected: &'static str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.at += 1;
            Ok(())
        } else {
            Err(ParseError::Syntax { pos: self.pos(), expected })
        }
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        while let Some(c) = self.eat_op(&['+', '-']) {
            let op = if c == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = Node::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(c) = self.eat_op(&['*', '/']) {
            let op = if c == '*' { BinOp::Mul } else { BinOp::Div };
            lhs = Node::Bin(op, Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        if self.eat_op(&['-']).is_some() {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, ParseError> {
        let base = self.primary()?;
        if self.eat_op(&['^']).is_some() {
            return Ok(Node::Bin(BinOp::Pow, Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Node, ParseError> {
        let pos = self.pos();
        let Some(tok) = self.peek().cloned() else {
            return Err(ParseError::Syntax { pos, expected: "operand" });
        };
        match tok {
            Tok::Num(v) => {
                self.at += 1;
                Ok(Node::Num(v))
            }
            Tok::LParen => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.at += 1;
                let func = match name.as_str() {
                    "min" => Some(Func::Min),
                    "max" => Some(Func::Max),
                    "sqrt" => Some(Func::Sqrt),
                    "abs" => Some(Func::Abs),
                    _ => None,
                };
                if let Some(func) = func {
                    return self.call(func, pos);
                }
                self.variable(&name, pos)
            }
            _ => Err(ParseError::Syntax { pos, expected: "operand" }),
        }
    }

    fn variable(&self, name: &str, pos: usize) -> Result<Node, ParseError> {
        let index = name
            .strip_prefix('x')
            .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
            .and_then(|d| d.parse::<usize>().ok())
            .ok_or_else(|| ParseError::UnknownIdentifier { pos, name: name.to_string() })?;
        if index == 0 || index > self.dim {
            return Err(ParseError::VariableOutOfRange { pos, index, dim: self.dim });
        }
        Ok(Node::Var(index - 1))
    }

    fn call(&mut self, func: Func, pos: usize) -> Result<Node, ParseError> {
        self.expect(Tok::LParen, "'(' after function name")?;
        let mut args = alloc::vec![self.expr()?];
        while self.peek() == Some(&Tok::Comma) {
            self.at += 1;
            args.push(self.expr()?);
        }
        self.expect(Tok::RParen, "',' or ')'")?;
        let ok = match func {
            Func::Min | Func::Max => args.len() >= 2,
            Func::Sqrt | Func::Abs => args.len() == 1,
        };
        if !ok {
            return Err(ParseError::Arity { pos, func: func.name(), found: args.len() });
        }
        Ok(Node::Call(func, args))
    }
}
