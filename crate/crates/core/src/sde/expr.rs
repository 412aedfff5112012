//! Tiny arithmetic language for user drifts, e.g.
//! `-sgn(x - 1)` or `clamp(m - x, -1, 1) * sin(t)`.
//!
//! Variables: `x` (state), `m` (running maximum), `t` (time).
//! Functions: `sgn`, `sin`, `cos`, `abs`, `tanh`, `min`, `max`, `clamp`.
//! Operators: `+ - * /`, unary minus, parentheses.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Expr(Node);

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(f64),
    Var(Var),
    Neg(Box<Node>),
    Bin(Op, Box<Node>, Box<Node>),
    Call(Func, Vec<Node>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Var {
    X,
    M,
    T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Func {
    Sgn,
    Sin,
    Cos,
    Abs,
    Tanh,
    Min,
    Max,
    Clamp,
}

impl Func {
    fn lookup(name: &str) -> Option<(Func, usize)> {
        Some(match name {
            "sgn" => (Func::Sgn, 1),
            "sin" => (Func::Sin, 1),
            "cos" => (Func::Cos, 1),
            "abs" => (Func::Abs, 1),
            "tanh" => (Func::Tanh, 1),
            "min" => (Func::Min, 2),
            "max" => (Func::Max, 2),
            "clamp" => (Func::Clamp, 3),
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
}

fn syntax(msg: impl Into<String>) -> Error {
    Error::DriftSyntax(msg.into())
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // exponent, e.g. 1e-3
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let s: String = chars[start..i].iter().collect();
            let v = s.parse::<f64>().map_err(|_| syntax(format!("bad number '{s}'")))?;
            toks.push(Tok::Num(v));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            toks.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/(),".contains(c) {
            toks.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(syntax(format!("unexpected character '{c}'")));
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(syntax(format!("expected '{c}' at token {}", self.pos)))
        }
    }

    fn sum(&mut self) -> Result<Node> {
        let mut lhs = self.product()?;
        loop {
            let op = if self.eat('+') {
                Op::Add
            } else if self.eat('-') {
                Op::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.product()?;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn product(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat('*') {
                Op::Mul
            } else if self.eat('/') {
                Op::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Node> {
        if self.eat('-') {
            Ok(Node::Neg(Box::new(self.unary()?)))
        } else if self.eat('+') {
            self.unary()
        } else {
            self.atom()
        }
    }

    fn atom(&mut self) -> Result<Node> {
        let tok = self.peek().cloned().ok_or_else(|| syntax("unexpected end of expression"))?;
        self.pos += 1;
        match tok {
            Tok::Num(v) => Ok(Node::Num(v)),
            Tok::Sym('(') => {
                let inner = self.sum()?;
                self.expect(')')?;
                Ok(inner)
            }
            Tok::Ident(name) => match name.as_str() {
                "x" => Ok(Node::Var(Var::X)),
                "m" => Ok(Node::Var(Var::M)),
                "t" => Ok(Node::Var(Var::T)),
                _ => {
                    let (func, arity) =
                        Func::lookup(&name).ok_or_else(|| syntax(format!("unknown name '{name}'")))?;
                    self.expect('(')?;
                    let mut args = vec![self.sum()?];
                    while self.eat(',') {
                        args.push(self.sum()?);
                    }
                    self.expect(')')?;
                    if args.len() != arity {
                        return Err(syntax(format!(
                            "'{name}' takes {arity} argument(s), got {}",
                            args.len()
                        )));
                    }
                    Ok(Node::Call(func, args))
                }
            },
            Tok::Sym(c) => Err(syntax(format!("unexpected '{c}'"))),
        }
    }
}

impl Expr {
    pub fn parse(src: &str) -> Result<Self> {
        let toks = tokenize(src)?;
        if toks.is_empty() {
            return Err(syntax("empty expression"));
        }
        let mut p = Parser { toks, pos: 0 };
        let node = p.sum()?;
        if p.pos != p.toks.len() {
            return Err(syntax(format!("trailing input at token {}", p.pos)));
        }
        Ok(Expr(node))
    }

    pub fn uses_running_max(&self) -> bool {
        fn walk(n: &Node) -> bool {
            match n {
                Node::Var(Var::M) => true,
                Node::Num(_) | Node::Var(_) => false,
                Node::Neg(a) => walk(a),
                Node::Bin(_, a, b) => walk(a) || walk(b),
                Node::Call(_, args) => args.iter().any(walk),
            }
        }
        walk(&self.0)
    }

    pub fn eval(&self, t: f64, x: f64, m: f64) -> f64 {
        fn go(n: &Node, t: f64, x: f64, m: f64) -> f64 {
            match n {
                Node::Num(v) => *v,
                Node::Var(Var::X) => x,
                Node::Var(Var::M) => m,
                Node::Var(Var::T) => t,
                Node::Neg(a) => -go(a, t, x, m),
                Node::Bin(op, a, b) => {
                    let (a, b) = (go(a, t, x, m), go(b, t, x, m));
                    match op {
                        Op::Add => a + b,
                        Op::Sub => a - b,
                        Op::Mul => a * b,
                        Op::Div => a / b,
                    }
                }
                Node::Call(f, args) => {
                    let a = go(&args[0], t, x, m);
                    match f {
                        Func::Sgn => crate::bounds::sgn(a),
                        Func::Sin => a.sin(),
                        Func::Cos => a.cos(),
                        Func::Abs => a.abs(),
                        Func::Tanh => a.tanh(),
                        Func::Min => a.min(go(&args[1], t, x, m)),
                        Func::Max => a.max(go(&args[1], t, x, m)),
                        Func::Clamp => {
                            let lo = go(&args[1], t, x, m);
                            let hi = go(&args[2], t, x, m);
                            a.max(lo).min(hi)
                        }
                    }
                }
            }
        }
        go(&self.0, t, x, m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(src: &str, t: f64, x: f64, m: f64) -> f64 {
        Expr::parse(src).unwrap().eval(t, x, m)
    }

    #[test]
    fn precedence_and_unary_minus() {
        assert_eq!(ev("1 + 2 * 3", 0.0, 0.0, 0.0), 7.0);
        assert_eq!(ev("-(1 + 2) * 3", 0.0, 0.0, 0.0), -9.0);
        assert_eq!(ev("8 / 2 / 2", 0.0, 0.0, 0.0), 2.0);
        assert_eq!(ev("2 - -1", 0.0, 0.0, 0.0), 3.0);
        assert_eq!(ev("1e-1 * 10", 0.0, 0.0, 0.0), 1.0);
    }

    #[test]
    fn variables_and_functions() {
        assert_eq!(ev("-sgn(x - 1)", 0.0, 0.5, 0.0), 1.0);
        assert_eq!(ev("-sgn(x - 1)", 0.0, 1.0, 0.0), 0.0);
        assert_eq!(ev("clamp(m - x, -1, 1)", 0.0, 0.0, 3.0), 1.0);
        assert_eq!(ev("max(t, abs(x))", 0.2, -0.7, 0.0), 0.7);
        assert!((ev("sin(t) + cos(0) + tanh(0)", 0.0, 0.0, 0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn running_max_detection() {
        assert!(Expr::parse("clamp(m - x, -1, 1)").unwrap().uses_running_max());
        assert!(!Expr::parse("sgn(x)").unwrap().uses_running_max());
    }

    #[test]
    fn syntax_errors() {
        for bad in ["", "1 +", "sgn(1, 2)", "foo(x)", "(x", "x y", "2 $ 3", "clamp(x)"] {
            assert!(matches!(Expr::parse(bad), Err(Error::DriftSyntax(_))), "{bad}");
        }
    }
}
