//! Scalar expressions over declared coordinates.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := '-' unary | power
//! power    := primary ('^' exponent)?
//! exponent := '-' exponent | primary ('^' exponent)?
//! primary  := number | name | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! `^` is right-associative and its exponent must not mention any variable.
//! Expressions evaluate over any [`Scalar`], so evaluating over jets yields
//! exact partial derivatives.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::scalar::{pow_by_squaring, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown variable `{name}` at offset {offset}")]
    UnknownVariable { name: String, offset: usize },
    #[error("unknown function `{name}` at offset {offset}")]
    UnknownFunction { name: String, offset: usize },
    #[error("`{name}` takes {expected} argument(s), got {found} (offset {offset})")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
        offset: usize,
    },
    #[error("exponent at offset {offset} must be constant")]
    NonConstantExponent { offset: usize },
    #[error("domain error: {message} in `{subexpr}`")]
    Domain { message: String, subexpr: String },
    #[error("environment binds {found} values but the expression needs {expected}")]
    Environment { expected: usize, found: usize },
    #[error("variable `{0}` is not bound")]
    Unbound(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryFn {
    Neg,
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Exp,
    Log,
    Sqrt,
}

impl UnaryFn {
    fn from_name(name: &str) -> Option<UnaryFn> {
        Some(match name {
            "sin" => UnaryFn::Sin,
            "cos" => UnaryFn::Cos,
            "tan" => UnaryFn::Tan,
            "sinh" => UnaryFn::Sinh,
            "cosh" => UnaryFn::Cosh,
            "exp" => UnaryFn::Exp,
            "log" => UnaryFn::Log,
            "sqrt" => UnaryFn::Sqrt,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            UnaryFn::Neg => "neg",
            UnaryFn::Sin => "sin",
            UnaryFn::Cos => "cos",
            UnaryFn::Tan => "tan",
            UnaryFn::Sinh => "sinh",
            UnaryFn::Cosh => "cosh",
            UnaryFn::Exp => "exp",
            UnaryFn::Log => "log",
            UnaryFn::Sqrt => "sqrt",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
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

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

const NEG_PRECEDENCE: u8 = 3;
const ATOM_PRECEDENCE: u8 = 5;

/// Immutable expression tree. Variables carry their position in the
/// coordinate list the expression was parsed against.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var { index: usize, name: String },
    Unary { func: UnaryFn, arg: Box<Expr> },
    Binary { op: BinOp, lhs: Box<Expr>, rhs: Box<Expr> },
}

impl Expr {
    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Const(_) | Expr::Var { .. } => ATOM_PRECEDENCE,
            Expr::Unary { func: UnaryFn::Neg, .. } => NEG_PRECEDENCE,
            Expr::Unary { .. } => ATOM_PRECEDENCE,
            Expr::Binary { op, .. } => op.precedence(),
        }
    }

    /// Names of the variables occurring in the tree, without simplification.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Const(_) => {}
            Expr::Var { name, .. } => {
                out.insert(name.clone());
            }
            Expr::Unary { arg, .. } => arg.collect_vars(out),
            Expr::Binary { lhs, rhs, .. } => {
                lhs.collect_vars(out);
                rhs.collect_vars(out);
            }
        }
    }

    fn max_var_index(&self) -> Option<usize> {
        match self {
            Expr::Const(_) => None,
            Expr::Var { index, .. } => Some(*index),
            Expr::Unary { arg, .. } => arg.max_var_index(),
            Expr::Binary { lhs, rhs, .. } => lhs.max_var_index().max(rhs.max_var_index()),
        }
    }

    /// Evaluates with `env[i]` bound to the `i`-th declared variable.
    pub fn eval<S: Scalar>(&self, env: &[S]) -> Result<S, ExprError> {
        if let Some(max) = self.max_var_index() {
            if max >= env.len() {
                return Err(ExprError::Environment {
                    expected: max + 1,
                    found: env.len(),
                });
            }
        }
        let Some(probe) = env.first() else {
            // variable-free: evaluate over the reals is all we can do for S
            return Err(ExprError::Environment { expected: 1, found: 0 });
        };
        if env.iter().any(|e| !probe.compatible(e)) {
            return Err(ExprError::Domain {
                message: "environment values have different shapes".into(),
                subexpr: self.to_string(),
            });
        }
        self.eval_inner(env, probe)
    }

    /// Evaluates with variables looked up by name.
    pub fn eval_map<S: Scalar>(&self, env: &HashMap<String, S>) -> Result<S, ExprError> {
        let names = self.free_vars();
        let Some(probe) = names.iter().find_map(|n| env.get(n)).or_else(|| env.values().next()) else {
            return match self.eval_const() {
                Some(_) => Err(ExprError::Environment { expected: 1, found: 0 }),
                None => Err(ExprError::Unbound(names.into_iter().next().unwrap_or_default())),
            };
        };
        for n in &names {
            if !env.contains_key(n) {
                return Err(ExprError::Unbound(n.clone()));
            }
        }
        let max = self.max_var_index().map_or(0, |m| m + 1);
        let mut slots: Vec<S> = vec![probe.clone(); max];
        self.fill_slots(env, &mut slots);
        self.eval_inner(&slots, probe)
    }

    fn fill_slots<S: Scalar>(&self, env: &HashMap<String, S>, slots: &mut [S]) {
        match self {
            Expr::Const(_) => {}
            Expr::Var { index, name } => slots[*index] = env[name].clone(),
            Expr::Unary { arg, .. } => arg.fill_slots(env, slots),
            Expr::Binary { lhs, rhs, .. } => {
                lhs.fill_slots(env, slots);
                rhs.fill_slots(env, slots);
            }
        }
    }

    /// Value of a variable-free expression.
    pub fn eval_const(&self) -> Option<f64> {
        if self.max_var_index().is_some() {
            return None;
        }
        self.eval_inner::<f64>(&[], &0.0).ok()
    }

    fn eval_inner<S: Scalar>(&self, env: &[S], probe: &S) -> Result<S, ExprError> {
        match self {
            Expr::Const(c) => Ok(probe.lift_const(*c)),
            Expr::Var { index, .. } => Ok(env[*index].clone()),
            Expr::Unary { func, arg } => {
                let a = arg.eval_inner(env, probe)?;
                let v = a.value();
                let domain = |message: &str| ExprError::Domain {
                    message: format!("{message} (argument value {v})"),
                    subexpr: self.to_string(),
                };
                Ok(match func {
                    UnaryFn::Neg => -a,
                    UnaryFn::Sin => a.sin(),
                    UnaryFn::Cos => a.cos(),
                    UnaryFn::Tan => {
                        if v.cos() == 0.0 {
                            return Err(domain("tan at a pole"));
                        }
                        a.tan()
                    }
                    UnaryFn::Sinh => a.sinh(),
                    UnaryFn::Cosh => a.cosh(),
                    UnaryFn::Exp => a.exp(),
                    UnaryFn::Log => {
                        if v <= 0.0 {
                            return Err(domain("log of a nonpositive value"));
                        }
                        a.ln()
                    }
                    UnaryFn::Sqrt => {
                        if v <= 0.0 {
                            return Err(domain("sqrt of a nonpositive value"));
                        }
                        a.sqrt()
                    }
                })
            }
            Expr::Binary { op, lhs, rhs } => {
                let a = lhs.eval_inner(env, probe)?;
                if *op == BinOp::Pow {
                    let e = rhs.eval_const().ok_or(ExprError::NonConstantExponent { offset: 0 })?;
                    return self.power(a, e);
                }
                let b = rhs.eval_inner(env, probe)?;
                Ok(match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b.value() == 0.0 {
                            return Err(ExprError::Domain {
                                message: "division by zero".into(),
                                subexpr: self.to_string(),
                            });
                        }
                        a / b
                    }
                    BinOp::Pow => unreachable!(),
                })
            }
        }
    }

    fn power<S: Scalar>(&self, base: S, e: f64) -> Result<S, ExprError> {
        let v = base.value();
        if e.fract() == 0.0 && e.abs() <= i32::MAX as f64 {
            let n = e as i32;
            if n >= 0 {
                return Ok(pow_by_squaring(base, n as u32));
            }
            if v == 0.0 {
                return Err(ExprError::Domain {
                    message: "negative power of zero".into(),
                    subexpr: self.to_string(),
                });
            }
            let recip = base.lift_const(1.0) / base;
            return Ok(pow_by_squaring(recip, n.unsigned_abs()));
        }
        if v <= 0.0 {
            return Err(ExprError::Domain {
                message: format!("real exponent {e} needs a positive base (got {v})"),
                subexpr: self.to_string(),
            });
        }
        Ok(base.powf(e))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var { name, .. } => f.write_str(name),
            Expr::Unary {
                func: UnaryFn::Neg,
                arg,
            } => {
                f.write_str("-")?;
                write_child(f, arg, arg.precedence() < NEG_PRECEDENCE)
            }
            Expr::Unary { func, arg } => write!(f, "{}({arg})", func.name()),
            Expr::Binary { op, lhs, rhs } => {
                let p = op.precedence();
                if *op == BinOp::Pow {
                    write_child(f, lhs, lhs.precedence() <= p)?;
                    f.write_str("^")?;
                    return write_child(f, rhs, rhs.precedence() < NEG_PRECEDENCE);
                }
                write_child(f, lhs, lhs.precedence() < p)?;
                write!(f, " {} ", op.symbol())?;
                write_child(f, rhs, rhs.precedence() <= p)
            }
        }
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Op(char),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokenize(src: &'a str) -> Result<Vec<(Token, usize)>, ExprError> {
        let mut lexer = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        loop {
            let (tok, at) = lexer.next_token()?;
            let end = tok == Token::End;
            out.push((tok, at));
            if end {
                return Ok(out);
            }
        }
    }

    fn next_token(&mut self) -> Result<(Token, usize), ExprError> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&b) = bytes.get(self.pos) else {
            return Ok((Token::End, start));
        };
        if b.is_ascii_digit() || b == b'.' {
            return self.number(start);
        }
        if b.is_ascii_alphabetic() || b == b'_' {
            while self.pos < bytes.len() && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_') {
                self.pos += 1;
            }
            return Ok((Token::Ident(self.src[start..self.pos].to_string()), start));
        }
        if b"+-*/^(),".contains(&b) {
            self.pos += 1;
            return Ok((Token::Op(b as char), start));
        }
        let ch = self.src[start..].chars().next().unwrap_or('?');
        Err(ExprError::Syntax {
            offset: start,
            message: format!("unexpected character `{ch}`"),
        })
    }

    fn number(&mut self, start: usize) -> Result<(Token, usize), ExprError> {
        let bytes = self.src.as_bytes();
        let digits = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
        };
        digits(&mut self.pos);
        if self.pos < bytes.len() && bytes[self.pos] == b'.' {
            self.pos += 1;
            digits(&mut self.pos);
        }
        if self.pos < bytes.len() && (bytes[self.pos] == b'e' || bytes[self.pos] == b'E') {
            let mut look = self.pos + 1;
            if look < bytes.len() && (bytes[look] == b'+' || bytes[look] == b'-') {
                look += 1;
            }
            if look < bytes.len() && bytes[look].is_ascii_digit() {
                self.pos = look;
                digits(&mut self.pos);
            }
        }
        let text = &self.src[start..self.pos];
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok((Token::Num(v), start)),
            _ => Err(ExprError::Syntax {
                offset: start,
                message: format!("invalid number `{text}`"),
            }),
        }
    }
}

struct Parser<'v> {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    vars: &'v [String],
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].0
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].1
    }

    fn bump(&mut self) -> (Token, usize) {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, what: &str) -> ExprError {
        let found = match self.peek() {
            Token::Num(v) => format!("number {v}"),
            Token::Ident(s) => format!("`{s}`"),
            Token::Op(c) => format!("`{c}`"),
            Token::End => "end of input".to_string(),
        };
        ExprError::Syntax {
            offset: self.offset(),
            message: format!("expected {what}, found {found}"),
        }
    }

    fn expect_op(&mut self, c: char) -> Result<(), ExprError> {
        if *self.peek() == Token::Op(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{c}`")))
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Token::Op('+') => BinOp::Add,
                Token::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Token::Op('*') => BinOp::Mul,
                Token::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if *self.peek() == Token::Op('-') {
            self.bump();
            let arg = self.unary()?;
            return Ok(Expr::Unary {
                func: UnaryFn::Neg,
                arg: Box::new(arg),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.primary()?;
        if *self.peek() != Token::Op('^') {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        let exponent = self.exponent()?;
        if exponent.max_var_index().is_some() {
            return Err(ExprError::NonConstantExponent { offset: at });
        }
        Ok(binary(BinOp::Pow, base, exponent))
    }

    fn exponent(&mut self) -> Result<Expr, ExprError> {
        if *self.peek() == Token::Op('-') {
            self.bump();
            let arg = self.exponent()?;
            return Ok(Expr::Unary {
                func: UnaryFn::Neg,
                arg: Box::new(arg),
            });
        }
        self.power()
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        let at = self.offset();
        match self.peek().clone() {
            Token::Num(v) => {
                self.bump();
                Ok(Expr::Const(v))
            }
            Token::Op('(') => {
                self.bump();
                let inner = self.expr()?;
                self.expect_op(')')?;
                Ok(inner)
            }
            Token::Ident(name) => {
                self.bump();
                let is_call = *self.peek() == Token::Op('(');
                if let Some(func) = UnaryFn::from_name(&name) {
                    if !is_call {
                        return Err(ExprError::Syntax {
                            offset: self.offset(),
                            message: format!("function `{name}` must be applied with parentheses"),
                        });
                    }
                    self.bump();
                    let mut args = vec![self.expr()?];
                    while *self.peek() == Token::Op(',') {
                        self.bump();
                        args.push(self.expr()?);
                    }
                    self.expect_op(')')?;
                    if args.len() != 1 {
                        return Err(ExprError::Arity {
                            name,
                            expected: 1,
                            found: args.len(),
                            offset: at,
                        });
                    }
                    return Ok(Expr::Unary {
                        func,
                        arg: Box::new(args.pop().expect("one argument")),
                    });
                }
                if is_call {
                    return Err(ExprError::UnknownFunction { name, offset: at });
                }
                match self.vars.iter().position(|v| *v == name) {
                    Some(index) => Ok(Expr::Var { index, name }),
                    None => Err(ExprError::UnknownVariable { name, offset: at }),
                }
            }
            _ => Err(self.unexpected("a number, variable, function or `(`")),
        }
    }
}

fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
    Expr::Binary {
        op,
        lhs: Box::new(lhs),
        rhs: Box::new(rhs),
    }
}

/// Parses `text`; identifiers must be one of `vars` or a known function.
pub fn parse<S: AsRef<str>>(text: &str, vars: &[S]) -> Result<Expr, ExprError> {
    if text.trim().is_empty() {
        return Err(ExprError::Syntax {
            offset: 0,
            message: "empty expression".into(),
        });
    }
    let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
    let tokens = Lexer::tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        vars: &vars,
    };
    let expr = parser.expr()?;
    if *parser.peek() != Token::End {
        return Err(parser.unexpected("an operator or end of input"));
    }
    Ok(expr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::Jet;

    fn var(index: usize, name: &str) -> Box<Expr> {
        Box::new(Expr::Var {
            index,
            name: name.into(),
        })
    }

    #[test]
    fn precedence_of_division_and_power() {
        let e = parse("1/y^2", &["x", "y"]).unwrap();
        assert_eq!(
            e,
            Expr::Binary {
                op: BinOp::Div,
                lhs: Box::new(Expr::Const(1.0)),
                rhs: Box::new(Expr::Binary {
                    op: BinOp::Pow,
                    lhs: var(1, "y"),
                    rhs: Box::new(Expr::Const(2.0)),
                }),
            }
        );
    }

    #[test]
    fn function_then_power() {
        let e = parse("sin(t)^2", &["t", "phi"]).unwrap();
        assert_eq!(
            e,
            Expr::Binary {
                op: BinOp::Pow,
                lhs: Box::new(Expr::Unary {
                    func: UnaryFn::Sin,
                    arg: var(0, "t"),
                }),
                rhs: Box::new(Expr::Const(2.0)),
            }
        );
    }

    #[test]
    fn negation_binds_looser_than_power() {
        let e = parse("-x^2", &["x"]).unwrap();
        assert_eq!(e.eval(&[3.0]).unwrap(), -9.0);
        let e = parse("2^3^2", &["x"]).unwrap();
        assert_eq!(e.eval(&[0.0]).unwrap(), 512.0);
        let e = parse("x^-2", &["x"]).unwrap();
        assert_eq!(e.eval(&[2.0]).unwrap(), 0.25);
        let e = parse("2*-x - -x", &["x"]).unwrap();
        assert_eq!(e.eval(&[1.5]).unwrap(), -1.5);
    }

    #[test]
    fn syntax_error_offset() {
        assert!(matches!(
            parse("x + * y", &["x", "y"]),
            Err(ExprError::Syntax { offset: 4, .. })
        ));
        assert!(matches!(parse("(x", &["x"]), Err(ExprError::Syntax { offset: 2, .. })));
        assert!(matches!(
            parse("x y", &["x", "y"]),
            Err(ExprError::Syntax { offset: 2, .. })
        ));
        assert!(matches!(parse("", &["x"]), Err(ExprError::Syntax { offset: 0, .. })));
        assert!(matches!(
            parse("x $ 1", &["x"]),
            Err(ExprError::Syntax { offset: 2, .. })
        ));
    }

    #[test]
    fn rejections() {
        assert_eq!(
            parse("x + z", &["x", "y"]),
            Err(ExprError::UnknownVariable {
                name: "z".into(),
                offset: 4
            })
        );
        assert!(matches!(
            parse("sin(x, y)", &["x", "y"]),
            Err(ExprError::Arity {
                expected: 1,
                found: 2,
                ..
            })
        ));
        assert!(matches!(parse("sin x", &["x"]), Err(ExprError::Syntax { .. })));
        assert!(matches!(
            parse("foo(x)", &["x"]),
            Err(ExprError::UnknownFunction { .. })
        ));
        assert_eq!(parse("2^x", &["x"]), Err(ExprError::NonConstantExponent { offset: 2 }));
    }

    #[test]
    fn evaluation() {
        let e = parse("1/y^2", &["x", "y"]).unwrap();
        assert_eq!(e.eval(&[0.0, 2.0]).unwrap(), 0.25);
        let mut env = HashMap::new();
        env.insert("y".to_string(), 2.0);
        assert_eq!(e.eval_map(&env).unwrap(), 0.25);
    }

    #[test]
    fn jet_evaluation() {
        let e = parse("sin(t)", &["t", "phi"]).unwrap();
        let t = Jet::variable(2, 1, 0, 0.0).unwrap();
        let phi = Jet::variable(2, 1, 1, 0.3).unwrap();
        let v = e.eval(&[t, phi]).unwrap();
        assert_eq!(v.value(), 0.0);
        assert_eq!(v.d(0), 1.0);
        assert_eq!(v.d(1), 0.0);
    }

    #[test]
    fn domain_errors_name_the_subexpression() {
        let e = parse("1 + log(x - 1)", &["x"]).unwrap();
        match e.eval(&[1.0]) {
            Err(ExprError::Domain { subexpr, .. }) => assert_eq!(subexpr, "log(x - 1)"),
            other => panic!("unexpected {other:?}"),
        }
        let e = parse("x / (x - 2)", &["x"]).unwrap();
        assert!(matches!(e.eval(&[2.0]), Err(ExprError::Domain { .. })));
        let e = parse("sqrt(x)", &["x"]).unwrap();
        assert!(matches!(e.eval(&[-1.0]), Err(ExprError::Domain { .. })));
        let e = parse("x^0.5", &["x"]).unwrap();
        assert!(matches!(e.eval(&[-1.0]), Err(ExprError::Domain { .. })));
        assert!(e.eval(&[4.0]).is_ok());
    }

    #[test]
    fn free_variables() {
        let vars = ["t", "phi", "y"];
        let fv = |s: &str| parse(s, &vars).unwrap().free_vars();
        assert_eq!(fv("1/y^2"), BTreeSet::from(["y".to_string()]));
        assert!(fv("3.5").is_empty());
        assert_eq!(
            fv("sin(t)^2 + phi - phi"),
            BTreeSet::from(["t".to_string(), "phi".to_string()])
        );
    }

    #[test]
    fn printing() {
        let vars = ["x", "y"];
        for (src, printed) in [
            ("1/y^2", "1 / y^2"),
            ("(x+y)*(x-y)", "(x + y) * (x - y)"),
            ("x-(y-x)", "x - (y - x)"),
            ("(-x)^2", "(-x)^2"),
            ("x^(-2)", "x^-2"),
            ("(x^2)^3", "(x^2)^3"),
            ("sin(x)^2", "sin(x)^2"),
        ] {
            assert_eq!(parse(src, &vars).unwrap().to_string(), printed);
        }
    }
}
