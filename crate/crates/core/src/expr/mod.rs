//! Scalar expressions in one variable.
//!
//! Grammar, loosest to tightest: `+ -`, then `* /`, then unary minus, then
//! `^` (right associative). So `-2^2` is `-(2^2)` and `2^-1` is allowed.
//! Functions take exactly one argument: `sin cos tan sqrt exp log abs atan`.
//! Named constants: `pi`, `e`. There is no implicit multiplication.

mod lexer;
mod parser;

use std::fmt;
use std::str::FromStr;

use crate::numkit::jet::Jet;

pub const DEFAULT_VAR: &str = "s";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("empty expression")]
    Empty,
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier '{name}' at offset {offset}")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("function '{function}' at offset {offset} takes {expected} argument(s), got {found}")]
    Arity {
        offset: usize,
        function: String,
        expected: usize,
        found: usize,
    },
    #[error("expression nested too deeply at offset {offset}")]
    TooDeep { offset: usize },
    #[error("'{0}' cannot be used as the variable name")]
    InvalidVariable(String),
}

impl ParseError {
    pub fn offset(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownIdentifier { offset, .. }
            | ParseError::Arity { offset, .. }
            | ParseError::TooDeep { offset } => Some(*offset),
            ParseError::Empty | ParseError::InvalidVariable(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("{function}({arg}) is outside the function's domain")]
    Domain { function: &'static str, arg: f64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("non-finite result from {0}")]
    NonFinite(&'static str),
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
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Sqrt,
    Exp,
    Log,
    Abs,
    Atan,
}

impl Func {
    pub const ALL: [Func; 8] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Sqrt,
        Func::Exp,
        Func::Log,
        Func::Abs,
        Func::Atan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sqrt => "sqrt",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Abs => "abs",
            Func::Atan => "atan",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedConst {
    Pi,
    E,
}

impl NamedConst {
    fn from_name(name: &str) -> Option<NamedConst> {
        match name {
            "pi" => Some(NamedConst::Pi),
            "e" => Some(NamedConst::E),
            _ => None,
        }
    }

    fn name(self) -> &'static str {
        match self {
            NamedConst::Pi => "pi",
            NamedConst::E => "e",
        }
    }

    fn value(self) -> f64 {
        match self {
            NamedConst::Pi => std::f64::consts::PI,
            NamedConst::E => std::f64::consts::E,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Num(f64),
    Var,
    Const(NamedConst),
    Neg(Box<Node>),
    Bin(BinOp, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

/// A parsed expression together with the name of its free variable.
///
/// Immutable once built; evaluation takes `&self` and has no side effects.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    root: Node,
    var: String,
}

impl Expr {
    /// Parses `text` with the default variable `s`.
    pub fn parse(text: &str) -> Result<Expr, ParseError> {
        Expr::parse_in(text, DEFAULT_VAR)
    }

    /// Parses `text` treating `var` as the free variable.
    pub fn parse_in(text: &str, var: &str) -> Result<Expr, ParseError> {
        let valid = !var.is_empty()
            && var
                .bytes()
                .enumerate()
                .all(|(i, b)| b == b'_' || b.is_ascii_alphabetic() || (i > 0 && b.is_ascii_digit()));
        if !valid || Func::from_name(var).is_some() || NamedConst::from_name(var).is_some() {
            return Err(ParseError::InvalidVariable(var.to_string()));
        }
        let root = parser::parse_node(text, var)?;
        Ok(Expr {
            root,
            var: var.to_string(),
        })
    }

    /// Builds an expression from a tree. Trees deeper than the parser's limit
    /// are accepted here but may not print back into parseable text.
    pub fn from_node(root: Node, var: &str) -> Expr {
        Expr {
            root,
            var: var.to_string(),
        }
    }

    pub fn constant(v: f64) -> Expr {
        Expr::from_node(Node::Num(v), DEFAULT_VAR)
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// True when the tree does not reference the variable.
    pub fn is_constant(&self) -> bool {
        fn walk(n: &Node) -> bool {
            match n {
                Node::Var => false,
                Node::Num(_) | Node::Const(_) => true,
                Node::Neg(a) | Node::Call(_, a) => walk(a),
                Node::Bin(_, a, b) => walk(a) && walk(b),
            }
        }
        walk(&self.root)
    }

    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        eval_node(&self.root, x)
    }

    /// Evaluates value and first three derivatives at `x`.
    pub fn eval_jet(&self, x: f64) -> Result<Jet, EvalError> {
        eval_node(&self.root, Jet::variable(x))
    }

    /// Same tree, different variable name.
    pub fn with_var(&self, var: &str) -> Expr {
        Expr::from_node(self.root.clone(), var)
    }

    /// Replaces every occurrence of the variable by `with`.
    pub fn substitute(&self, with: &Node) -> Expr {
        fn walk(n: &Node, with: &Node) -> Node {
            match n {
                Node::Var => with.clone(),
                Node::Num(_) | Node::Const(_) => n.clone(),
                Node::Neg(a) => Node::Neg(Box::new(walk(a, with))),
                Node::Call(f, a) => Node::Call(*f, Box::new(walk(a, with))),
                Node::Bin(op, a, b) => Node::Bin(*op, Box::new(walk(a, with)), Box::new(walk(b, with))),
            }
        }
        Expr::from_node(walk(&self.root, with), &self.var)
    }
}

impl Node {
    pub fn num(v: f64) -> Node {
        Node::Num(v)
    }

    pub fn bin(op: BinOp, a: Node, b: Node) -> Node {
        Node::Bin(op, Box::new(a), Box::new(b))
    }
}

impl FromStr for Expr {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Expr::parse(s)
    }
}

/// Fully parenthesized; constants use the shortest round-tripping decimal
/// form, so printing and re-parsing evaluates bit-identically.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(f, &self.root, &self.var)
    }
}

fn write_node(f: &mut fmt::Formatter<'_>, n: &Node, var: &str) -> fmt::Result {
    match n {
        Node::Num(v) if *v < 0.0 || (*v == 0.0 && v.is_sign_negative()) => write!(f, "(-{:?})", -v),
        Node::Num(v) => write!(f, "{v:?}"),
        Node::Var => f.write_str(var),
        Node::Const(c) => f.write_str(c.name()),
        Node::Neg(a) => {
            f.write_str("(-")?;
            write_node(f, a, var)?;
            f.write_str(")")
        }
        Node::Bin(op, a, b) => {
            f.write_str("(")?;
            write_node(f, a, var)?;
            write!(f, " {} ", op.symbol())?;
            write_node(f, b, var)?;
            f.write_str(")")
        }
        Node::Call(func, a) => {
            write!(f, "{}(", func.name())?;
            write_node(f, a, var)?;
            f.write_str(")")
        }
    }
}

/// The arithmetic the evaluator needs, shared by plain values and jets.
trait Scalar: Copy {
    fn lift(v: f64) -> Self;
    fn val(&self) -> f64;
    fn finite(&self) -> bool;
    fn is_const(&self) -> bool;
    fn add(self, o: Self) -> Self;
    fn sub(self, o: Self) -> Self;
    fn mul(self, o: Self) -> Self;
    fn div(self, o: Self) -> Self;
    fn neg(self) -> Self;
    fn pow(self, o: Self) -> Self;
    fn apply(self, f: Func) -> Self;
}

impl Scalar for f64 {
    fn lift(v: f64) -> Self {
        v
    }
    fn val(&self) -> f64 {
        *self
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
    fn is_const(&self) -> bool {
        true
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn sub(self, o: Self) -> Self {
        self - o
    }
    fn mul(self, o: Self) -> Self {
        self * o
    }
    fn div(self, o: Self) -> Self {
        self / o
    }
    fn neg(self) -> Self {
        -self
    }
    fn pow(self, o: Self) -> Self {
        self.powf(o)
    }
    fn apply(self, f: Func) -> Self {
        match f {
            Func::Sin => self.sin(),
            Func::Cos => self.cos(),
            Func::Tan => self.tan(),
            Func::Sqrt => self.sqrt(),
            Func::Exp => self.exp(),
            Func::Log => self.ln(),
            Func::Abs => self.abs(),
            Func::Atan => self.atan(),
        }
    }
}

impl Scalar for Jet {
    fn lift(v: f64) -> Self {
        Jet::constant(v)
    }
    fn val(&self) -> f64 {
        self.value()
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
    fn is_const(&self) -> bool {
        self.d[1] == 0.0 && self.d[2] == 0.0 && self.d[3] == 0.0
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn sub(self, o: Self) -> Self {
        self - o
    }
    fn mul(self, o: Self) -> Self {
        self * o
    }
    fn div(self, o: Self) -> Self {
        self / o
    }
    fn neg(self) -> Self {
        -self
    }
    fn pow(self, o: Self) -> Self {
        Jet::pow(&self, &o)
    }
    fn apply(self, f: Func) -> Self {
        match f {
            Func::Sin => self.sin(),
            Func::Cos => self.cos(),
            Func::Tan => self.tan(),
            Func::Sqrt => self.sqrt(),
            Func::Exp => self.exp(),
            Func::Log => self.ln(),
            Func::Abs => Jet::abs(&self),
            Func::Atan => Jet::atan(&self),
        }
    }
}

fn checked<T: Scalar>(v: T, what: &'static str) -> Result<T, EvalError> {
    if v.finite() {
        Ok(v)
    } else {
        Err(EvalError::NonFinite(what))
    }
}

fn eval_node<T: Scalar>(n: &Node, x: T) -> Result<T, EvalError> {
    match n {
        Node::Num(v) => Ok(T::lift(*v)),
        Node::Var => Ok(x),
        Node::Const(c) => Ok(T::lift(c.value())),
        Node::Neg(a) => Ok(eval_node(a, x)?.neg()),
        Node::Bin(op, a, b) => {
            let l = eval_node(a, x)?;
            let r = eval_node(b, x)?;
            match op {
                BinOp::Add => checked(l.add(r), "addition"),
                BinOp::Sub => checked(l.sub(r), "subtraction"),
                BinOp::Mul => checked(l.mul(r), "multiplication"),
                BinOp::Div => {
                    if r.val() == 0.0 {
                        return Err(EvalError::DivisionByZero);
                    }
                    checked(l.div(r), "division")
                }
                BinOp::Pow => {
                    let (base, e) = (l.val(), r.val());
                    if base == 0.0 && e < 0.0 {
                        return Err(EvalError::DivisionByZero);
                    }
                    if base < 0.0 && (!r.is_const() || e.fract() != 0.0) {
                        return Err(EvalError::Domain {
                            function: "pow",
                            arg: base,
                        });
                    }
                    if base == 0.0 && !r.is_const() {
                        return Err(EvalError::Domain {
                            function: "pow",
                            arg: base,
                        });
                    }
                    checked(l.pow(r), "power")
                }
            }
        }
        Node::Call(func, a) => {
            let arg = eval_node(a, x)?;
            let v = arg.val();
            let bad = match func {
                Func::Sqrt => v < 0.0,
                Func::Log => v <= 0.0,
                _ => false,
            };
            if bad {
                return Err(EvalError::Domain {
                    function: func.name(),
                    arg: v,
                });
            }
            checked(arg.apply(*func), func.name())
        }
    }
}
