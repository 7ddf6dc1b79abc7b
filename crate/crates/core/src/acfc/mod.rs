//! First-order sentences over the language of fields `{0, 1, +, *, =}`.
//!
//! A presentation compiles to predicates on matrix-entry variables (`M`,
//! `REP`, `RED`, `IRREP`, `CONJ`) and to the sentence `Σ_{G,n}` stating that
//! there are exactly `n` irreducible representations up to conjugacy. The
//! same data also compiles to the integer polynomial ideal cutting out the
//! representation variety. Formulas can be printed as S-expressions, parsed
//! back, and evaluated by brute force over a small finite field.

mod eval;
pub mod poly;
mod text;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::GfError;
use crate::presentation::{Presentation, Word};
use crate::sl2::fingerprint_words;

pub use eval::{eval_formula, evaluate, EvalOutcome, DEFAULT_GUARD};
pub use poly::Poly;
pub use text::{emit_text, parse_formula, parse_term, MAX_NUMERAL};

use poly::{mat_adjugate, mat_identity, mat_mul, mat_vars, PolyMat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AcfcError {
    #[error("variable `{0}` appears twice")]
    DuplicateVariable(String),
    #[error("`{0}` is not a valid variable name")]
    InvalidName(String),
    #[error("parse error at byte {offset}: {msg}")]
    Parse { offset: usize, msg: String },
    #[error("free variable `{0}` has no value")]
    UnboundVariable(String),
    #[error("evaluation guard exceeded: more than {guard} assignments")]
    GuardExceeded { guard: u64 },
    #[error("polynomial expansion too large")]
    ExpansionTooLarge,
    #[error(transparent)]
    Field(#[from] GfError),
}

const RESERVED: [&str; 5] = ["forall", "exists", "and", "or", "not"];

/// True for identifiers `[A-Za-z_][A-Za-z0-9_]*` other than the quantifier and
/// connective keywords.
pub fn is_valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !RESERVED.contains(&s)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Zero,
    One,
    Var(String),
    Sum(Box<Term>, Box<Term>),
    Product(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn sum(a: Term, b: Term) -> Term {
        Term::Sum(Box::new(a), Box::new(b))
    }

    pub fn product(a: Term, b: Term) -> Term {
        Term::Product(Box::new(a), Box::new(b))
    }

    /// `0`, `1`, or the chain `1 + (1 + (... + 1))` with `n` ones.
    pub fn numeral(n: u64) -> Term {
        match n {
            0 => Term::Zero,
            _ => (1..n).fold(Term::One, |acc, _| Term::sum(Term::One, acc)),
        }
    }

    /// The value `n` if this term is exactly the chain built by [`Term::numeral`].
    pub fn as_numeral(&self) -> Option<u64> {
        match self {
            Term::Zero => Some(0),
            Term::One => Some(1),
            Term::Sum(a, b) if **a == Term::One => match b.as_numeral() {
                Some(n) if n >= 1 => Some(n + 1),
                _ => None,
            },
            _ => None,
        }
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Zero | Term::One => {}
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Sum(a, b) | Term::Product(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(Vec<String>, Box<Formula>),
    Forall(Vec<String>, Box<Formula>),
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(vars: Vec<String>, body: Formula) -> Formula {
        Formula::Exists(vars, Box::new(body))
    }

    pub fn forall(vars: Vec<String>, body: Formula) -> Formula {
        Formula::Forall(vars, Box::new(body))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Eq(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Formula::Not(f) => f.collect_free(out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_free(out)),
            Formula::Implies(a, b) => {
                a.collect_free(out);
                b.collect_free(out);
            }
            Formula::Exists(vs, f) | Formula::Forall(vs, f) => {
                let mut inner = BTreeSet::new();
                f.collect_free(&mut inner);
                out.extend(inner.into_iter().filter(|v| !vs.contains(v)));
            }
        }
    }

    /// Number of quantified variables along the deepest nesting path.
    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::Eq(..) => 0,
            Formula::Not(f) => f.quantifier_depth(),
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().map(Formula::quantifier_depth).max().unwrap_or(0)
            }
            Formula::Implies(a, b) => a.quantifier_depth().max(b.quantifier_depth()),
            Formula::Exists(vs, f) | Formula::Forall(vs, f) => vs.len() + f.quantifier_depth(),
        }
    }

    /// Total node count, a size measure for reports.
    pub fn size(&self) -> usize {
        match self {
            Formula::Eq(..) => 1,
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.size(),
            Formula::And(fs) | Formula::Or(fs) => 1 + fs.iter().map(Formula::size).sum::<usize>(),
            Formula::Implies(a, b) => 1 + a.size() + b.size(),
        }
    }
}

/// How `CONJ` between two tuples is stated.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConjSemantics {
    /// Equal trace fingerprints: conjugacy over the algebraic closure.
    #[default]
    Closure,
    /// An explicit determinant-one conjugator with entries in the field.
    Literal,
}

impl std::str::FromStr for ConjSemantics {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "closure" => Ok(ConjSemantics::Closure),
            "literal" => Ok(ConjSemantics::Literal),
            _ => Err(format!("unknown conjugacy semantics `{s}` (closure|literal)")),
        }
    }
}

/// Names for a tuple of matrices: generator `i` gets `{prefix}a{i+1}`,
/// `{prefix}b{i+1}`, `{prefix}c{i+1}`, `{prefix}d{i+1}`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TupleVars {
    prefix: String,
}

impl TupleVars {
    pub fn new(prefix: impl Into<String>) -> Self {
        TupleVars { prefix: prefix.into() }
    }

    pub fn prefix(&self) -> &str {
        &self.prefix
    }

    pub fn name(&self, gen: usize, entry: usize) -> String {
        format!("{}{}{}", self.prefix, ["a", "b", "c", "d"][entry], gen + 1)
    }

    pub fn block(&self, gen: usize) -> [String; 4] {
        [0, 1, 2, 3].map(|e| self.name(gen, e))
    }

    pub fn names(&self, rank: usize) -> Vec<String> {
        (0..rank).flat_map(|g| self.block(g)).collect()
    }
}

fn eq_zero(p: &Poly, names: &[String]) -> Formula {
    let (pos, neg) = p.split_signs();
    Formula::Eq(pos.to_term(names), neg.to_term(names))
}

/// `M(x1, x2, x3, x4)`: the matrix `[[x1, x2], [x3, x4]]` has determinant one.
pub fn build_m(vars: [&str; 4]) -> Result<Formula, AcfcError> {
    for (i, v) in vars.iter().enumerate() {
        if !is_valid_name(v) {
            return Err(AcfcError::InvalidName(v.to_string()));
        }
        if vars[..i].contains(v) {
            return Err(AcfcError::DuplicateVariable(v.to_string()));
        }
    }
    let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
    Ok(eq_zero(&determinant_minus_one(4, 0)?, &names))
}

fn determinant_minus_one(nvars: usize, base: usize) -> Result<Poly, AcfcError> {
    let m = mat_vars(nvars, base);
    m[0].mul(&m[3])?
        .sub(&m[1].mul(&m[2])?)?
        .sub(&Poly::constant(nvars, 1))
}

fn word_matrix(w: &Word, nvars: usize, base: usize) -> Result<PolyMat, AcfcError> {
    let mut acc = mat_identity(nvars);
    for l in w.letters() {
        let g = mat_vars(nvars, base + 4 * l.gen);
        let g = if l.inverse { mat_adjugate(&g) } else { g };
        acc = mat_mul(&acc, &g)?;
    }
    Ok(acc)
}

/// Entry polynomials of `f_r(A) - I`, row-major.
fn relator_polys(w: &Word, rank: usize) -> Result<[Poly; 4], AcfcError> {
    let n = 4 * rank;
    let m = word_matrix(w, n, 0)?;
    let id = mat_identity(n);
    Ok([
        m[0].sub(&id[0])?,
        m[1].sub(&id[1])?,
        m[2].sub(&id[2])?,
        m[3].sub(&id[3])?,
    ])
}

/// `REP(A)`: every generator block has determinant one and every relator
/// evaluates to the identity, entry by entry.
pub fn build_rep(p: &Presentation, t: &TupleVars) -> Result<Formula, AcfcError> {
    let names = t.names(p.rank());
    let mut parts = Vec::new();
    for g in 0..p.rank() {
        let b = t.block(g);
        parts.push(build_m([&b[0], &b[1], &b[2], &b[3]])?);
    }
    for r in p.relators() {
        for e in relator_polys(r, p.rank())? {
            parts.push(eq_zero(&e, &names));
        }
    }
    Ok(Formula::And(parts))
}

/// `RED(A)`: some nonzero `(x, y)` is an eigenvector of every `A_i`.
pub fn build_red(p: &Presentation, t: &TupleVars) -> Formula {
    let x = format!("{}ev_a", t.prefix);
    let y = format!("{}ev_b", t.prefix);
    let lams: Vec<String> = (1..=p.rank()).map(|i| format!("{}lam{i}", t.prefix)).collect();
    let mut parts = vec![Formula::not(Formula::And(vec![
        Formula::Eq(Term::var(&x), Term::Zero),
        Formula::Eq(Term::var(&y), Term::Zero),
    ]))];
    for (g, lam) in lams.iter().enumerate() {
        let [a, b, c, d] = t.block(g);
        let row = |u: &str, v: &str| {
            Term::sum(
                Term::product(Term::var(u), Term::var(&x)),
                Term::product(Term::var(v), Term::var(&y)),
            )
        };
        parts.push(Formula::Eq(row(&a, &b), Term::product(Term::var(lam), Term::var(&x))));
        parts.push(Formula::Eq(row(&c, &d), Term::product(Term::var(lam), Term::var(&y))));
    }
    let mut bound = vec![x, y];
    bound.extend(lams);
    Formula::exists(bound, Formula::And(parts))
}

/// `IRREP(A) = REP(A) and not RED(A)`.
pub fn build_irrep(p: &Presentation, t: &TupleVars) -> Result<Formula, AcfcError> {
    Ok(Formula::And(vec![build_rep(p, t)?, Formula::not(build_red(p, t))]))
}

/// `CONJ(A, B)`: `B` is conjugate to `A`.
///
/// Under [`ConjSemantics::Literal`] this is `exists C: M(C) and C A_j = B_j C`.
/// Under [`ConjSemantics::Closure`] it is equality of the trace fingerprints
/// (singles, pairs, triples of generators), which decides conjugacy of
/// absolutely irreducible tuples over the algebraic closure.
pub fn build_conj(
    p: &Presentation,
    a: &TupleVars,
    b: &TupleVars,
    semantics: ConjSemantics,
) -> Result<Formula, AcfcError> {
    let l = p.rank();
    match semantics {
        ConjSemantics::Closure => {
            let n = 8 * l;
            let mut names = a.names(l);
            names.extend(b.names(l));
            let mut parts = Vec::new();
            for w in fingerprint_words(l) {
                let trace = |base: usize| -> Result<Poly, AcfcError> {
                    let mut acc = mat_identity(n);
                    for &g in &w {
                        acc = mat_mul(&acc, &mat_vars(n, base + 4 * g))?;
                    }
                    acc[0].add(&acc[3])
                };
                let diff = trace(0)?.sub(&trace(4 * l)?)?;
                parts.push(eq_zero(&diff, &names));
            }
            Ok(Formula::And(parts))
        }
        ConjSemantics::Literal => {
            let c: [String; 4] = ["a", "b", "c", "d"].map(|e| format!("{}{}cj_{e}", b.prefix, a.prefix));
            let mut parts = vec![build_m([&c[0], &c[1], &c[2], &c[3]])?];
            for g in 0..l {
                let x = a.block(g);
                let y = b.block(g);
                // (L R)[i][k] = L[i][0] R[0][k] + L[i][1] R[1][k]
                let entry = |lm: &[String; 4], rm: &[String; 4], i: usize, k: usize| {
                    Term::sum(
                        Term::product(Term::var(&lm[2 * i]), Term::var(&rm[k])),
                        Term::product(Term::var(&lm[2 * i + 1]), Term::var(&rm[2 + k])),
                    )
                };
                for (i, k) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                    parts.push(Formula::Eq(entry(&c, &x, i, k), entry(&y, &c, i, k)));
                }
            }
            Ok(Formula::exists(c.to_vec(), Formula::And(parts)))
        }
    }
}

/// `Σ_{G,n}`: there are exactly `n` irreducible representations up to `CONJ`.
///
/// ```text
/// exists A^1..A^n [ and_j IRREP(A^j)
///                   and_{j<j'} not CONJ(A^j, A^j')
///                   and forall B (IRREP(B) => or_j CONJ(A^j, B)) ]
/// ```
///
/// For `n = 0` this is `forall B not IRREP(B)`.
pub fn build_sigma(p: &Presentation, n: usize, semantics: ConjSemantics) -> Result<Formula, AcfcError> {
    let l = p.rank();
    let u = TupleVars::new("u_");
    if n == 0 {
        return Ok(Formula::forall(u.names(l), Formula::not(build_irrep(p, &u)?)));
    }
    let blocks: Vec<TupleVars> = (1..=n).map(|j| TupleVars::new(format!("t{j}_"))).collect();
    let mut parts = Vec::new();
    for t in &blocks {
        parts.push(build_irrep(p, t)?);
    }
    for j in 0..n {
        for k in j + 1..n {
            parts.push(Formula::not(build_conj(p, &blocks[j], &blocks[k], semantics)?));
        }
    }
    let cover = blocks
        .iter()
        .map(|t| build_conj(p, t, &u, semantics))
        .collect::<Result<Vec<_>, _>>()?;
    parts.push(Formula::forall(
        u.names(l),
        Formula::implies(build_irrep(p, &u)?, Formula::Or(cover)),
    ));
    let vars = blocks.iter().flat_map(|t| t.names(l)).collect();
    Ok(Formula::exists(vars, Formula::And(parts)))
}

/// The representation variety as an integer polynomial system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealPresentation {
    pub variables: Vec<String>,
    pub polynomials: Vec<Poly>,
}

impl IdealPresentation {
    /// Header line `vars: a1 b1 c1 d1 ...` then one polynomial per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("vars: {}\n", self.variables.join(" "));
        for p in &self.polynomials {
            out.push_str(&p.render(&self.variables));
            out.push('\n');
        }
        out
    }

    /// True iff every polynomial vanishes at `point`.
    pub fn vanishes_at(&self, f: &crate::gf::FieldSpec, point: &[crate::gf::GFElem]) -> bool {
        self.polynomials.iter().all(|p| p.eval(f, point) == f.zero())
    }
}

/// Determinant polynomials `a_i d_i - b_i c_i - 1`, then the four entries of
/// `f_r - I` for each relator.
pub fn emit_ideal(p: &Presentation) -> Result<IdealPresentation, AcfcError> {
    let l = p.rank();
    let n = 4 * l;
    let mut polynomials = Vec::new();
    for g in 0..l {
        polynomials.push(determinant_minus_one(n, 4 * g)?);
    }
    for r in p.relators() {
        polynomials.extend(relator_polys(r, l)?);
    }
    Ok(IdealPresentation {
        variables: TupleVars::default().names(l),
        polynomials,
    })
}
