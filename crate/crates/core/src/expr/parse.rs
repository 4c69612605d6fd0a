//! Recursive-descent parser for the expression DSL.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' unary)?
//! atom   := INT | IDENT | IDENT '(' args ')' | 'D' '[' ints ']' IDENT '(' args ')'
//!         | '(' expr ')'
//! ```

use std::collections::BTreeSet;

use num_bigint::BigInt;

use super::{Expr, Func, Rational, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol `{name}` at {pos}")]
    UnknownSymbol { name: String, pos: usize },
    #[error("zero denominator at {pos}")]
    ZeroDenominator { pos: usize },
}

#[derive(Debug, Clone, Default)]
pub struct ParseOptions {
    /// Accept any identifier as a free symbol.
    pub auto_declare: bool,
    /// Extra symbol names accepted besides the reserved ones.
    pub declared: BTreeSet<String>,
}

pub fn parse(text: &str) -> Result<Expr, ParseError> {
    parse_with(text, &ParseOptions::default())
}

pub fn parse_with(text: &str, opts: &ParseOptions) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, i: 0, opts };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        t => Err(p.err(format!("unexpected {}", t.describe()))),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("number `{n}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Op(c) => format!("`{c}`"),
            Tok::End => "end of input".to_string(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|(_, c)| c).collect();
            out.push((Tok::Int(s.parse().unwrap()), pos));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|(_, c)| c).collect();
            out.push((Tok::Ident(s), pos));
        } else if "+-*/^(),[]".contains(c) {
            out.push((Tok::Op(c), pos));
            i += 1;
        } else if c == '\u{2212}' {
            out.push((Tok::Op('-'), pos));
            i += 1;
        } else {
            return Err(ParseError::Syntax {
                pos,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    i: usize,
    opts: &'a ParseOptions,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn pos(&self) -> usize {
        self.toks[self.i].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].0.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn err(&self, msg: String) -> ParseError {
        ParseError::Syntax {
            pos: self.pos(),
            msg,
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Op(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`, found {}", self.peek().describe())))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.term()?];
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    terms.push(self.term()?);
                }
                Tok::Op('-') => {
                    self.bump();
                    terms.push(-self.term()?);
                }
                _ => break,
            }
        }
        Ok(Expr::sum(terms))
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.bump();
                    let r = self.unary()?;
                    acc = acc * r;
                }
                Tok::Op('/') => {
                    self.bump();
                    let pos = self.pos();
                    let r = self.unary()?;
                    if r.is_zero_literal() {
                        return Err(ParseError::ZeroDenominator { pos });
                    }
                    acc = acc / r;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Tok::Op('-') => {
                self.bump();
                Ok(-self.unary()?)
            }
            Tok::Op('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Op('^') {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        let ex = self.unary()?;
        let e: Rational = match ex.as_rational() {
            Some(r) => r.clone(),
            None => {
                return Err(ParseError::Syntax {
                    pos,
                    msg: "exponent must be a rational constant".into(),
                })
            }
        };
        if base.is_zero_literal() && e < Rational::from_integer(0.into()) {
            return Err(ParseError::ZeroDenominator { pos });
        }
        Ok(base.pow(e))
    }

    fn args(&mut self) -> Result<Vec<Expr>, ParseError> {
        self.expect('(')?;
        let mut args = vec![self.expr()?];
        while *self.peek() == Tok::Op(',') {
            self.bump();
            args.push(self.expr()?);
        }
        self.expect(')')?;
        Ok(args)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Int(n) => Ok(Expr::rational(Rational::from_integer(n))),
            Tok::Op('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) if name == "D" && *self.peek() == Tok::Op('[') => {
                self.bump();
                let mut slots = Vec::new();
                loop {
                    let p = self.pos();
                    match self.bump() {
                        Tok::Int(n) if n >= 1.into() && n <= 255.into() => {
                            let k: u8 = n.try_into().unwrap();
                            slots.push(k - 1);
                        }
                        t => {
                            return Err(ParseError::Syntax {
                                pos: p,
                                msg: format!("expected argument index, found {}", t.describe()),
                            })
                        }
                    }
                    match self.bump() {
                        Tok::Op(',') => continue,
                        Tok::Op(']') => break,
                        t => return Err(self.err(format!("expected `,` or `]`, found {}", t.describe()))),
                    }
                }
                let p = self.pos();
                let fname = match self.bump() {
                    Tok::Ident(f) => f,
                    t => {
                        return Err(ParseError::Syntax {
                            pos: p,
                            msg: format!("expected function name, found {}", t.describe()),
                        })
                    }
                };
                let args = self.args()?;
                if slots.iter().any(|&s| s as usize >= args.len()) {
                    return Err(ParseError::Syntax {
                        pos,
                        msg: "derivative index exceeds arity".into(),
                    });
                }
                Ok(Expr::call_func(Func::with_derivs(&fname, slots), args))
            }
            Tok::Ident(name) => {
                if *self.peek() == Tok::Op('(') {
                    let args = self.args()?;
                    if name == "sqrt" {
                        if args.len() != 1 {
                            return Err(ParseError::Syntax {
                                pos,
                                msg: "sqrt takes one argument".into(),
                            });
                        }
                        return Ok(args[0].sqrt());
                    }
                    return Ok(Expr::call(&name, args));
                }
                if Symbol::is_reserved(&name)
                    || is_placeholder(&name)
                    || self.opts.auto_declare
                    || self.opts.declared.contains(&name)
                {
                    Ok(Expr::named(&name))
                } else {
                    Err(ParseError::UnknownSymbol { name, pos })
                }
            }
            t => Err(ParseError::Syntax {
                pos,
                msg: format!("unexpected {}", t.describe()),
            }),
        }
    }
}

fn is_placeholder(name: &str) -> bool {
    name.len() > 1 && name.starts_with('_') && name[1..].chars().all(|c| c.is_ascii_digit())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{rat, Node, Var};

    #[test]
    fn euler_number_parses() {
        let e = parse("p/(u^2+v^2+w^2)").unwrap();
        let s2 = Expr::var(Var::U).powi(2) + Expr::var(Var::V).powi(2) + Expr::var(Var::W).powi(2);
        assert_eq!(e, Expr::var(Var::P) / s2);
    }

    #[test]
    fn atoms_and_calls() {
        assert_eq!(parse("x").unwrap(), Expr::var(Var::X));
        let e = parse("(x/(t+tau))*F1(y/x, z/x)").unwrap();
        match e.node() {
            Node::Mul(fs) => assert!(fs.iter().any(|f| matches!(f.node(), Node::Call(..)))),
            _ => panic!("expected a product"),
        }
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(parse("2^3^2").unwrap(), Expr::num(512));
        assert_eq!(parse("-2^2").unwrap(), Expr::num(-4));
        assert_eq!(parse("1 - 2 - 3").unwrap(), Expr::num(-4));
        assert_eq!(parse("12/2/3").unwrap(), Expr::num(2));
        assert_eq!(parse("x^(-1/2)").unwrap(), Expr::var(Var::X).pow(rat(-1, 2)));
        assert_eq!(parse("sqrt(x)").unwrap(), Expr::var(Var::X).pow(rat(1, 2)));
        assert_eq!(parse("x \u{2212} x").unwrap(), Expr::zero());
    }

    #[test]
    fn derivative_heads() {
        let e = parse("D[2,1]F(x, y)").unwrap();
        match e.node() {
            Node::Call(f, _) => assert_eq!(f.derivs(), &[0, 1]),
            _ => panic!(),
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(parse("x +"), Err(ParseError::Syntax { pos: 3, .. })));
        assert!(matches!(parse("x $ y"), Err(ParseError::Syntax { pos: 2, .. })));
        assert_eq!(
            parse("q + 1"),
            Err(ParseError::UnknownSymbol {
                name: "q".into(),
                pos: 0
            })
        );
        assert_eq!(parse("x/0"), Err(ParseError::ZeroDenominator { pos: 2 }));
        assert!(parse("x^y").is_err());
        let opts = ParseOptions {
            auto_declare: true,
            ..Default::default()
        };
        assert!(parse_with("q + 1", &opts).is_ok());
    }
}
