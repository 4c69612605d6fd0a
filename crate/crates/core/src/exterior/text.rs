//! Text syntax for forms: `(coef) dx /\ dy + (coef) dt /\ dp - ...`.
//! A coefficient containing `+` or `-` must be parenthesized.

use std::fmt;

use num_traits::Signed;

use super::{vars_of, KForm};
use crate::expr::{parse_with, Expr, Node, ParseError, ParseOptions, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormParseError {
    #[error("in coefficient `{text}`: {source}")]
    Coefficient { text: String, source: ParseError },
    #[error("bad differential `{0}`")]
    Differential(String),
    #[error("terms of different degree ({0} and {1})")]
    MixedDegree(usize, usize),
    #[error("repeated differential in `{0}`")]
    Repeated(String),
    #[error("empty form")]
    Empty,
}

pub fn parse_form(text: &str, opts: &ParseOptions) -> Result<KForm, FormParseError> {
    let mut out: Option<KForm> = None;
    for (negative, term) in split_terms(text) {
        let (coef_text, diffs) = split_differentials(&term)?;
        let coef_text = coef_text.trim().trim_end_matches('*').trim();
        let coef = if coef_text.is_empty() {
            Expr::one()
        } else {
            parse_with(coef_text, opts).map_err(|source| FormParseError::Coefficient {
                text: coef_text.to_string(),
                source,
            })?
        };
        let coef = if negative { -coef } else { coef };
        if super::mask_of(&diffs).is_none() {
            return Err(FormParseError::Repeated(term.clone()));
        }
        let piece = KForm::term(coef, &diffs);
        out = Some(match out {
            None => piece,
            Some(acc) => {
                if acc.degree() != piece.degree() {
                    return Err(FormParseError::MixedDegree(acc.degree(), piece.degree()));
                }
                acc + piece
            }
        });
    }
    out.ok_or(FormParseError::Empty)
}

/// Splits on `+`/`-` at parenthesis depth zero that are binary operators.
fn split_terms(text: &str) -> Vec<(bool, String)> {
    let text = text.replace('\u{2212}', "-").replace('∧', "/\\");
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut negative = false;
    let mut prev_sig: Option<char> = None;
    for c in text.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        let binary = matches!(prev_sig, Some(p) if !"+-*/^(,\\".contains(p));
        if depth == 0 && (c == '+' || c == '-') && (binary || prev_sig.is_none()) {
            if !cur.trim().is_empty() {
                out.push((negative, cur.trim().to_string()));
                negative = c == '-';
            } else if c == '-' {
                negative = !negative;
            }
            cur.clear();
            prev_sig = Some(c);
            continue;
        }
        if !c.is_whitespace() {
            prev_sig = Some(c);
        }
        cur.push(c);
    }
    if !cur.trim().is_empty() {
        out.push((negative, cur.trim().to_string()));
    }
    out
}

/// Separates a term into its coefficient text and differentials.
fn split_differentials(term: &str) -> Result<(String, Vec<Var>), FormParseError> {
    let bytes: Vec<char> = term.chars().collect();
    let mut depth = 0;
    let mut start = None;
    for i in 0..bytes.len() {
        match bytes[i] {
            '(' => depth += 1,
            ')' => depth -= 1,
            'd' if depth == 0 => {
                let before_ok = i == 0 || !(bytes[i - 1].is_ascii_alphanumeric() || bytes[i - 1] == '_');
                let after = bytes.get(i + 1).copied();
                let after2 = bytes.get(i + 2).copied();
                let is_var = after.is_some_and(|c| "xyztuvwp".contains(c));
                let ends = after2.is_none_or(|c| !(c.is_ascii_alphanumeric() || c == '_'));
                if before_ok && is_var && ends {
                    start = Some(i);
                    break;
                }
            }
            _ => {}
        }
    }
    let Some(s) = start else {
        return Ok((term.to_string(), Vec::new()));
    };
    let coef: String = bytes[..s].iter().collect();
    let rest: String = bytes[s..].iter().collect();
    let mut vars = Vec::new();
    for piece in rest.split("/\\") {
        let p = piece.trim();
        let v = p
            .strip_prefix('d')
            .and_then(Var::from_name)
            .ok_or_else(|| FormParseError::Differential(p.to_string()))?;
        vars.push(v);
    }
    Ok((coef, vars))
}

impl fmt::Display for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let negative = match c.node() {
                Node::Num(r) => r.is_negative(),
                Node::Mul(fs) => fs[0].as_rational().is_some_and(|r| r.is_negative()),
                _ => false,
            };
            let mag = if negative { -c } else { c.clone() };
            if i > 0 {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            } else if negative {
                write!(f, "-")?;
            }
            let diffs: Vec<String> = vars_of(m).iter().map(|v| format!("d{v}")).collect();
            if diffs.is_empty() {
                write!(f, "({mag})")?;
            } else if mag.is_one_literal() {
                write!(f, "{}", diffs.join(" /\\ "))?;
            } else {
                write!(f, "({mag}) {}", diffs.join(" /\\ "))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::expr::Var::*;

    fn opts() -> ParseOptions {
        ParseOptions::default()
    }

    #[test]
    fn parses_catalog_style_lines() {
        let f = parse_form("(p/(u^2+v^2+w^2)) dt /\\ dp", &opts()).unwrap();
        assert_eq!(f, KForm::term(parse("p/(u^2+v^2+w^2)").unwrap(), &[T, P]));
        let g = parse_form("dx /\\ du - (u*v) dy /\\ dx + 2 dz/\\dw", &opts()).unwrap();
        assert_eq!(g.coefficient(&[X, Y]), parse("u*v").unwrap());
        assert_eq!(g.coefficient(&[X, U]), Expr::one());
        assert_eq!(g.coefficient(&[Z, W]), Expr::num(2));
        let s = parse_form("p/(u^2+v^2)", &opts()).unwrap();
        assert_eq!(s.degree(), 0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            parse_form("dx /\\ dq", &opts()),
            Err(FormParseError::Differential(_))
        ));
        assert!(matches!(
            parse_form("dx + dx /\\ dy", &opts()),
            Err(FormParseError::MixedDegree(1, 2))
        ));
        assert!(matches!(parse_form("dx /\\ dx", &opts()), Err(FormParseError::Repeated(_))));
    }

    #[test]
    fn display_round_trips() {
        let f = parse_form("(p/(u^2+v^2+w^2)) dt /\\ dp - (u*w/(u^2+v^2+w^2)^(1/2)) dx /\\ dy", &opts()).unwrap();
        let again = parse_form(&f.to_string(), &opts()).unwrap();
        assert_eq!(f, again);
    }
}
