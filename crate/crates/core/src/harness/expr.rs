//! Scalar expressions of the cell centre `x = (x1, .., xN)`.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := number | var | call | '(' expr ')' | '|' expr '|'
//! var     := 'x1' .. 'xN' | 'x' | 'y' | 'z' | 'r' | 'pi'
//! call    := name '(' expr (',' expr)* ')'
//! ```
//!
//! `x`, `y`, `z` alias `x1`, `x2`, `x3`; `r` and `|x|` are the Euclidean norm.
//! Functions: `abs`, `sqrt`, `exp`, `log` (natural), `min`, `max`, and
//! `ind(a1, b1, .., aN, bN)`, the indicator of the closed box
//! `[a1, b1] x .. x [aN, bN]`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(f64),
    Coord(usize),
    Norm,
    Neg(Box<Node>),
    Bin(char, Box<Node>, Box<Node>),
    Call(Func, Vec<Node>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Func {
    Abs,
    Sqrt,
    Exp,
    Log,
    Min,
    Max,
    Ind,
}

/// A parsed expression bound to a dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    source: String,
    dim: usize,
    root: Node,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
}

fn err<T>(col: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line: 1,
        column: col,
        message: message.into(),
    })
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
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
            let text: String = chars[start..i].iter().collect();
            match text.parse::<f64>() {
                Ok(v) => out.push((Tok::Num(v), col)),
                Err(_) => return err(col, format!("malformed number {text:?}")),
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*/^(),|".contains(c) {
            out.push((Tok::Sym(c), col));
            i += 1;
        } else {
            return err(col, format!("unexpected character {c:?}"));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    dim: usize,
    end_col: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.1)
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
            err(self.col(), format!("expected '{c}'"))
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Sym(c)) if *c == '+' || *c == '-' => *c,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Sym(c)) if *c == '*' || *c == '/' => *c,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(self.unary()?));
        }
    }

    fn unary(&mut self) -> Result<Node> {
        if self.eat('-') {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.primary()?;
        if self.eat('^') {
            return Ok(Node::Bin('^', Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn variable(&self, name: &str, col: usize) -> Result<Node> {
        let axis = match name {
            "x" | "y" | "z" => Some("xyz".find(name).unwrap()),
            "r" => return Ok(Node::Norm),
            "pi" => return Ok(Node::Num(std::f64::consts::PI)),
            _ => name
                .strip_prefix('x')
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|&k| k >= 1)
                .map(|k| k - 1),
        };
        match axis {
            Some(a) if a < self.dim => Ok(Node::Coord(a)),
            Some(a) => err(col, format!("coordinate x{} exceeds dimension {}", a + 1, self.dim)),
            None => err(col, format!("unknown name {name:?}")),
        }
    }

    fn primary(&mut self) -> Result<Node> {
        let col = self.col();
        let Some((tok, _)) = self.toks.get(self.pos).cloned() else {
            return err(col, "unexpected end of expression");
        };
        self.pos += 1;
        match tok {
            Tok::Num(v) => Ok(Node::Num(v)),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Sym('|') => {
                if self.peek() == Some(&Tok::Ident("x".into()))
                    && self.toks.get(self.pos + 1).map(|t| &t.0) == Some(&Tok::Sym('|'))
                {
                    self.pos += 2;
                    return Ok(Node::Norm);
                }
                let e = self.expr()?;
                self.expect('|')?;
                Ok(Node::Call(Func::Abs, vec![e]))
            }
            Tok::Ident(name) if self.peek() == Some(&Tok::Sym('(')) => {
                self.pos += 1;
                let f = match name.as_str() {
                    "abs" => Func::Abs,
                    "sqrt" => Func::Sqrt,
                    "exp" => Func::Exp,
                    "log" | "ln" => Func::Log,
                    "min" => Func::Min,
                    "max" => Func::Max,
                    "ind" => Func::Ind,
                    _ => return err(col, format!("unknown function {name:?}")),
                };
                let mut args = vec![self.expr()?];
                while self.eat(',') {
                    args.push(self.expr()?);
                }
                self.expect(')')?;
                let ok = match f {
                    Func::Min | Func::Max => args.len() >= 2,
                    Func::Ind => args.len() == 2 * self.dim,
                    _ => args.len() == 1,
                };
                if !ok {
                    return err(col, format!("wrong number of arguments to {name}"));
                }
                Ok(Node::Call(f, args))
            }
            Tok::Ident(name) => self.variable(&name, col),
            Tok::Sym(c) => err(col, format!("unexpected '{c}'")),
        }
    }
}

fn eval(node: &Node, x: &[f64]) -> f64 {
    match node {
        Node::Num(v) => *v,
        Node::Coord(a) => x[*a],
        Node::Norm => x.iter().map(|c| c * c).sum::<f64>().sqrt(),
        Node::Neg(e) => -eval(e, x),
        Node::Bin(op, a, b) => {
            let (a, b) = (eval(a, x), eval(b, x));
            match op {
                '+' => a + b,
                '-' => a - b,
                '*' => a * b,
                '/' => a / b,
                _ => a.powf(b),
            }
        }
        Node::Call(f, args) => {
            let v: Vec<f64> = args.iter().map(|a| eval(a, x)).collect();
            match f {
                Func::Abs => v[0].abs(),
                Func::Sqrt => v[0].sqrt(),
                Func::Exp => v[0].exp(),
                Func::Log => v[0].ln(),
                Func::Min => v.iter().cloned().fold(f64::INFINITY, f64::min),
                Func::Max => v.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
                Func::Ind => {
                    let inside = v.chunks(2).zip(x).all(|(ab, xi)| *xi >= ab[0] && *xi <= ab[1]);
                    f64::from(u8::from(inside))
                }
            }
        }
    }
}

impl Expr {
    pub fn parse(source: &str, dim: usize) -> Result<Self> {
        let toks = lex(source)?;
        let mut p = Parser {
            toks: &toks,
            pos: 0,
            dim,
            end_col: source.chars().count() + 1,
        };
        let root = p.expr()?;
        if p.pos < toks.len() {
            return err(p.col(), "trailing input");
        }
        Ok(Self {
            source: source.to_string(),
            dim,
            root,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        eval(&self.root, x)
    }

    /// True when the expression is the literal zero.
    pub fn is_zero(&self) -> bool {
        self.root == Node::Num(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(src: &str, x: &[f64]) -> f64 {
        Expr::parse(src, x.len()).unwrap().eval(x)
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(at("1 + 2 * 3", &[0.0, 0.0]), 7.0);
        assert_eq!(at("2 ^ 3 ^ 2", &[0.0, 0.0]), 512.0);
        assert_eq!(at("-2 ^ 2", &[0.0, 0.0]), -4.0);
        assert_eq!(at("8 / 4 / 2", &[0.0, 0.0]), 1.0);
        assert_eq!(at("2^-1", &[0.0, 0.0]), 0.5);
        assert_eq!(at("1.5e1 - 5", &[0.0, 0.0]), 10.0);
    }

    #[test]
    fn coordinates_norms_and_functions() {
        let x = [3.0, -4.0];
        assert_eq!(at("x1 + 2*x2", &x), -5.0);
        assert_eq!(at("x - y", &x), 7.0);
        assert_eq!(at("|x|", &x), 5.0);
        assert_eq!(at("r^2", &x), 25.0);
        assert_eq!(at("|x2|", &x), 4.0);
        assert_eq!(at("|x|^-1", &x), 0.2);
        assert_eq!(at("| x1 - |x| |", &x), 2.0);
        assert_eq!(at("max(x1, x2, 0)", &x), 3.0);
        assert!((at("log(exp(2))", &x) - 2.0).abs() < 1e-15);
        assert_eq!(at("sqrt(abs(x2))", &x), 2.0);
    }

    #[test]
    fn indicator_of_sub_boxes() {
        let e = Expr::parse("ind(0, 1, -1, 0) + 2*ind(-1, 0, 0, 1)", 2).unwrap();
        assert_eq!(e.eval(&[0.5, -0.5]), 1.0);
        assert_eq!(e.eval(&[-0.5, 0.5]), 2.0);
        assert_eq!(e.eval(&[0.5, 0.5]), 0.0);
        assert_eq!(e.eval(&[1.0, 0.0]), 1.0);
    }

    #[test]
    fn errors_carry_columns() {
        let col = |src: &str, dim| match Expr::parse(src, dim) {
            Err(Error::Parse { line, column, .. }) => (line, column),
            other => panic!("{other:?}"),
        };
        assert_eq!(col("1 + * 2", 2), (1, 5));
        assert_eq!(col("x3", 2), (1, 1));
        assert_eq!(col("foo(1)", 2), (1, 1));
        assert_eq!(col("(1 + 2", 2), (1, 7));
        assert_eq!(col("ind(0, 1)", 2), (1, 1));
        assert_eq!(col("1 $ 2", 1), (1, 3));
        assert_eq!(col("1 2", 1), (1, 3));
        assert!(Expr::parse("x", 1).is_ok());
    }

    #[test]
    fn zero_literal() {
        assert!(Expr::parse("0", 2).unwrap().is_zero());
        assert!(!Expr::parse("0*x1", 2).unwrap().is_zero());
    }
}
