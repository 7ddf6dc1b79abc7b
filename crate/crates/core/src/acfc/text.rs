//! S-expression syntax for terms and formulas.
//!
//! ```text
//! (forall (x y) (=> (= (* x y) 1) (not (= x 0))))
//! ```
//!
//! Numerals `n >= 2` abbreviate `(+ 1 (+ 1 ... 1))`.

use super::{is_valid_name, AcfcError, Formula, Term};

/// Largest numeral the parser expands.
pub const MAX_NUMERAL: u64 = 4096;

pub fn emit_text(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, &mut out);
    out
}

fn write_term(t: &Term, out: &mut String) {
    if let Some(n) = t.as_numeral() {
        out.push_str(&n.to_string());
        return;
    }
    match t {
        Term::Zero | Term::One => unreachable!("handled as numerals"),
        Term::Var(v) => out.push_str(v),
        Term::Sum(a, b) | Term::Product(a, b) => {
            out.push_str(if matches!(t, Term::Sum(..)) { "(+ " } else { "(* " });
            write_term(a, out);
            out.push(' ');
            write_term(b, out);
            out.push(')');
        }
    }
}

fn write_formula(f: &Formula, out: &mut String) {
    match f {
        Formula::Eq(a, b) => {
            out.push_str("(= ");
            write_term(a, out);
            out.push(' ');
            write_term(b, out);
            out.push(')');
        }
        Formula::Not(g) => {
            out.push_str("(not ");
            write_formula(g, out);
            out.push(')');
        }
        Formula::And(gs) | Formula::Or(gs) => {
            out.push_str(if matches!(f, Formula::And(_)) { "(and" } else { "(or" });
            for g in gs {
                out.push(' ');
                write_formula(g, out);
            }
            out.push(')');
        }
        Formula::Implies(a, b) => {
            out.push_str("(=> ");
            write_formula(a, out);
            out.push(' ');
            write_formula(b, out);
            out.push(')');
        }
        Formula::Exists(vs, g) | Formula::Forall(vs, g) => {
            out.push_str(if matches!(f, Formula::Exists(..)) { "(exists (" } else { "(forall (" });
            out.push_str(&vs.join(" "));
            out.push_str(") ");
            write_formula(g, out);
            out.push(')');
        }
    }
}

#[derive(Debug)]
enum Sexp {
    Atom(String, usize),
    List(Vec<Sexp>, usize),
}

impl Sexp {
    fn offset(&self) -> usize {
        match self {
            Sexp::Atom(_, o) | Sexp::List(_, o) => *o,
        }
    }
}

fn err(offset: usize, msg: impl Into<String>) -> AcfcError {
    AcfcError::Parse { offset, msg: msg.into() }
}

fn read_sexp(text: &str) -> Result<Sexp, AcfcError> {
    let bytes = text.as_bytes();
    let mut stack: Vec<(Vec<Sexp>, usize)> = Vec::new();
    let mut result: Option<Sexp> = None;
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if result.is_some() {
            return Err(err(i, "trailing input after expression"));
        }
        let done = match c {
            b'(' => {
                stack.push((Vec::new(), i));
                i += 1;
                None
            }
            b')' => {
                let (items, start) = stack.pop().ok_or_else(|| err(i, "unbalanced `)`"))?;
                i += 1;
                Some(Sexp::List(items, start))
            }
            _ => {
                let start = i;
                while i < bytes.len() && !bytes[i].is_ascii_whitespace() && bytes[i] != b'(' && bytes[i] != b')' {
                    i += 1;
                }
                Some(Sexp::Atom(text[start..i].to_string(), start))
            }
        };
        if let Some(s) = done {
            match stack.last_mut() {
                Some((items, _)) => items.push(s),
                None => result = Some(s),
            }
        }
    }
    if let Some((_, start)) = stack.last() {
        return Err(err(*start, "unclosed `(`"));
    }
    result.ok_or_else(|| err(0, "empty input"))
}

fn to_term(s: &Sexp) -> Result<Term, AcfcError> {
    match s {
        Sexp::Atom(a, o) => {
            if a.bytes().all(|b| b.is_ascii_digit()) {
                let n: u64 = a.parse().map_err(|_| err(*o, "numeral too large"))?;
                if n > MAX_NUMERAL {
                    return Err(err(*o, format!("numeral exceeds {MAX_NUMERAL}")));
                }
                Ok(Term::numeral(n))
            } else if is_valid_name(a) {
                Ok(Term::Var(a.clone()))
            } else {
                Err(err(*o, format!("invalid term `{a}`")))
            }
        }
        Sexp::List(items, o) => match items.as_slice() {
            [Sexp::Atom(h, _), x, y] if h == "+" => Ok(Term::sum(to_term(x)?, to_term(y)?)),
            [Sexp::Atom(h, _), x, y] if h == "*" => Ok(Term::product(to_term(x)?, to_term(y)?)),
            _ => Err(err(*o, "expected (+ t t) or (* t t)")),
        },
    }
}

fn to_vars(s: &Sexp) -> Result<Vec<String>, AcfcError> {
    let Sexp::List(items, o) = s else {
        return Err(err(s.offset(), "expected a variable list"));
    };
    let mut out: Vec<String> = Vec::new();
    for it in items {
        match it {
            Sexp::Atom(a, ao) if is_valid_name(a) => {
                if out.contains(a) {
                    return Err(err(*ao, format!("variable `{a}` bound twice")));
                }
                out.push(a.clone());
            }
            _ => return Err(err(*o, "expected variable names")),
        }
    }
    Ok(out)
}

fn to_formula(s: &Sexp) -> Result<Formula, AcfcError> {
    let Sexp::List(items, o) = s else {
        return Err(err(s.offset(), "expected a formula"));
    };
    let Some(Sexp::Atom(head, _)) = items.first() else {
        return Err(err(*o, "expected a formula head"));
    };
    let args = &items[1..];
    match (head.as_str(), args) {
        ("=", [a, b]) => Ok(Formula::Eq(to_term(a)?, to_term(b)?)),
        ("not", [a]) => Ok(Formula::not(to_formula(a)?)),
        ("and", _) => Ok(Formula::And(args.iter().map(to_formula).collect::<Result<_, _>>()?)),
        ("or", _) => Ok(Formula::Or(args.iter().map(to_formula).collect::<Result<_, _>>()?)),
        ("=>", [a, b]) => Ok(Formula::implies(to_formula(a)?, to_formula(b)?)),
        ("exists", [vs, body]) => Ok(Formula::exists(to_vars(vs)?, to_formula(body)?)),
        ("forall", [vs, body]) => Ok(Formula::forall(to_vars(vs)?, to_formula(body)?)),
        _ => Err(err(*o, format!("malformed `{head}` form"))),
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, AcfcError> {
    to_formula(&read_sexp(text)?)
}

pub fn parse_term(text: &str) -> Result<Term, AcfcError> {
    to_term(&read_sexp(text)?)
}
