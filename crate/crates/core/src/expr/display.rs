use std::fmt;

use num_traits::{One, Signed};

use super::{Expr, Node, Rational};

const SUM: u8 = 1;
const PROD: u8 = 2;
const ATOM: u8 = 5;

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self, 0))
    }
}

fn wrap(s: String, own: u8, ctx: u8) -> String {
    if own < ctx {
        format!("({s})")
    } else {
        s
    }
}

fn render(e: &Expr, ctx: u8) -> String {
    match e.node() {
        Node::Num(r) => {
            let own = if r.is_negative() {
                SUM
            } else if r.is_integer() {
                ATOM
            } else {
                PROD
            };
            wrap(rational_text(r), own, ctx)
        }
        Node::Sym(s) => s.name().to_string(),
        Node::Call(func, args) => {
            let args: Vec<String> = args.iter().map(|a| render(a, 0)).collect();
            let head = if func.derivs().is_empty() {
                func.name().to_string()
            } else {
                let idx: Vec<String> = func.derivs().iter().map(|d| (d + 1).to_string()).collect();
                format!("D[{}]{}", idx.join(","), func.name())
            };
            format!("{head}({})", args.join(", "))
        }
        Node::Add(ts) => {
            let mut out = String::new();
            for (i, t) in ts.iter().enumerate() {
                let (neg, mag) = split_sign(t);
                if i == 0 {
                    if neg {
                        out.push('-');
                        out.push_str(&render(&mag, PROD));
                    } else {
                        out.push_str(&render(t, SUM));
                    }
                } else if neg {
                    out.push_str(" - ");
                    out.push_str(&render(&mag, PROD));
                } else {
                    out.push_str(" + ");
                    out.push_str(&render(t, SUM + 1));
                }
            }
            wrap(out, SUM, ctx)
        }
        Node::Mul(_) | Node::Pow(..) => render_product(e, ctx),
    }
}

/// Sign of a term and its magnitude.
fn split_sign(t: &Expr) -> (bool, Expr) {
    match t.node() {
        Node::Num(r) if r.is_negative() => (true, Expr::rational(-r)),
        Node::Mul(fs) => match fs[0].node() {
            Node::Num(r) if r.is_negative() => (true, -t),
            _ => (false, t.clone()),
        },
        _ => (false, t.clone()),
    }
}

fn exponent_text(e: &Rational) -> String {
    if e.is_integer() && !e.is_negative() {
        e.to_string()
    } else {
        format!("({})", rational_text(e))
    }
}

fn rational_text(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn power_text(base: &Expr, e: &Rational) -> String {
    let b = render(base, ATOM);
    if e.is_one() {
        b
    } else {
        format!("{b}^{}", exponent_text(e))
    }
}

fn render_product(e: &Expr, ctx: u8) -> String {
    let factors: Vec<Expr> = match e.node() {
        Node::Mul(fs) => fs.clone(),
        _ => vec![e.clone()],
    };
    let mut coeff = Rational::one();
    let mut num = Vec::new();
    let mut den = Vec::new();
    for f in &factors {
        match f.node() {
            Node::Num(r) => coeff = r.clone(),
            Node::Pow(b, ex) if ex.is_negative() => den.push(power_text(b, &-ex)),
            Node::Pow(b, ex) => num.push(power_text(b, ex)),
            _ => num.push(render(f, PROD + 1)),
        }
    }
    let neg = coeff.is_negative();
    let c = coeff.abs();
    if !c.numer().is_one() || num.is_empty() {
        num.insert(0, c.numer().to_string());
    }
    if !c.denom().is_one() {
        den.insert(0, c.denom().to_string());
    }
    let mut s = num.join("*");
    if !den.is_empty() {
        s.push('/');
        if den.len() == 1 && !den[0].contains('*') {
            s.push_str(&den[0]);
        } else {
            s.push('(');
            s.push_str(&den.join("*"));
            s.push(')');
        }
    }
    if neg {
        wrap(format!("-{s}"), SUM, ctx)
    } else if den.is_empty() && num.len() == 1 && matches!(e.node(), Node::Pow(..)) {
        wrap(s, PROD + 1, ctx)
    } else {
        wrap(s, PROD, ctx)
    }
}

#[cfg(test)]
mod tests {
    use crate::expr::parse;

    fn round_trip(text: &str) {
        let e = parse(text).unwrap();
        let printed = e.to_string();
        let again = parse(&printed).unwrap_or_else(|err| panic!("{printed}: {err}"));
        assert_eq!(again, e, "{text} printed as {printed}");
    }

    #[test]
    fn printing_round_trips() {
        for t in [
            "p/(u^2+v^2+w^2)",
            "-x/(y+z)",
            "x - y + 3/2",
            "(x/(t+tau))*F1(y/x, z/x)",
            "(u^2+v^2+w^2)^(-3/2)*u*w",
            "D[1]F1(y/x, z/x)*(-y/x^2)",
            "2^(1/2)*x",
            "(5/2)^(1/3)",
            "(x^2)^(1/2)",
            "-(x+y)^2",
            "x^(-1)",
            "(x - y)^(1/2)",
        ] {
            round_trip(t);
        }
    }

    #[test]
    fn readable_forms() {
        assert_eq!(parse("p/(u^2+v^2+w^2)").unwrap().to_string(), "p/(u^2 + v^2 + w^2)");
        assert_eq!(parse("x - y").unwrap().to_string(), "x - y");
        assert_eq!(parse("x^(-1/2)").unwrap().to_string(), "1/x^(1/2)");
    }
}
