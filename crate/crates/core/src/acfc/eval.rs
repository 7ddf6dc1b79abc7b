//! Exhaustive evaluation over a finite field.
//!
//! Names are resolved to slots once. An existential block binds its variables
//! one at a time and checks each conjunct of its body as soon as every
//! variable the conjunct mentions is bound; universals are evaluated as
//! `not exists not`. Every value tried for a bound variable costs one unit
//! against the guard.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::gf::{FieldSpec, GFElem};

use super::{AcfcError, Formula, Term};

/// Default evaluation budget, in tried assignments.
pub const DEFAULT_GUARD: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalOutcome {
    pub value: bool,
    /// Number of variable assignments tried.
    pub assignments: u64,
}

enum CTerm {
    Zero,
    One,
    Slot(usize),
    Sum(Box<CTerm>, Box<CTerm>),
    Prod(Box<CTerm>, Box<CTerm>),
}

enum CForm {
    Eq(CTerm, CTerm),
    Not(Box<CForm>),
    And(Vec<CForm>),
    Or(Vec<CForm>),
    /// `stages[0]` is checked before binding, `stages[i + 1]` after `slots[i]`.
    Exists { slots: Vec<usize>, stages: Vec<Vec<CForm>> },
}

struct Compiler {
    scope: HashMap<String, Vec<usize>>,
    next: usize,
}

impl Compiler {
    fn lookup(&self, name: &str) -> Result<usize, AcfcError> {
        self.scope
            .get(name)
            .and_then(|s| s.last().copied())
            .ok_or_else(|| AcfcError::UnboundVariable(name.to_string()))
    }

    fn term(&self, t: &Term, used: &mut BTreeSet<usize>) -> Result<CTerm, AcfcError> {
        Ok(match t {
            Term::Zero => CTerm::Zero,
            Term::One => CTerm::One,
            Term::Var(v) => {
                let s = self.lookup(v)?;
                used.insert(s);
                CTerm::Slot(s)
            }
            Term::Sum(a, b) => CTerm::Sum(Box::new(self.term(a, used)?), Box::new(self.term(b, used)?)),
            Term::Product(a, b) => CTerm::Prod(Box::new(self.term(a, used)?), Box::new(self.term(b, used)?)),
        })
    }

    /// Compiles `f`, recording every slot it reads from an enclosing scope.
    fn formula(&mut self, f: &Formula, used: &mut BTreeSet<usize>) -> Result<CForm, AcfcError> {
        Ok(match f {
            Formula::Eq(a, b) => CForm::Eq(self.term(a, used)?, self.term(b, used)?),
            Formula::Not(g) => CForm::Not(Box::new(self.formula(g, used)?)),
            Formula::And(gs) => CForm::And(gs.iter().map(|g| self.formula(g, used)).collect::<Result<_, _>>()?),
            Formula::Or(gs) => CForm::Or(gs.iter().map(|g| self.formula(g, used)).collect::<Result<_, _>>()?),
            Formula::Implies(a, b) => CForm::Or(vec![
                CForm::Not(Box::new(self.formula(a, used)?)),
                self.formula(b, used)?,
            ]),
            Formula::Exists(vs, body) => self.exists(vs, conjuncts(body, false), used)?,
            Formula::Forall(vs, body) => {
                CForm::Not(Box::new(self.exists(vs, conjuncts(body, true), used)?))
            }
        })
    }

    fn exists(&mut self, vs: &[String], parts: Vec<Formula>, used: &mut BTreeSet<usize>) -> Result<CForm, AcfcError> {
        let slots: Vec<usize> = (0..vs.len()).map(|i| self.next + i).collect();
        self.next += vs.len();
        for (v, &s) in vs.iter().zip(&slots) {
            self.scope.entry(v.clone()).or_default().push(s);
        }
        let mut stages: Vec<Vec<CForm>> = (0..=vs.len()).map(|_| Vec::new()).collect();
        let result = (|| -> Result<(), AcfcError> {
            for part in &parts {
                let mut inner = BTreeSet::new();
                let c = self.formula(part, &mut inner)?;
                let stage = slots
                    .iter()
                    .rposition(|s| inner.contains(s))
                    .map_or(0, |i| i + 1);
                used.extend(inner.into_iter().filter(|s| !slots.contains(s)));
                stages[stage].push(c);
            }
            Ok(())
        })();
        for v in vs {
            self.scope.get_mut(v).map(Vec::pop);
        }
        result?;
        Ok(CForm::Exists { slots, stages })
    }
}

/// Flattens `f` (or `not f` when `negate`) into a list of conjuncts.
fn conjuncts(f: &Formula, negate: bool) -> Vec<Formula> {
    match (f, negate) {
        (Formula::And(gs), false) => gs.iter().flat_map(|g| conjuncts(g, false)).collect(),
        (Formula::Or(gs), true) => gs.iter().flat_map(|g| conjuncts(g, true)).collect(),
        (Formula::Not(g), n) => conjuncts(g, !n),
        (Formula::Implies(a, b), true) => {
            let mut out = conjuncts(a, false);
            out.extend(conjuncts(b, true));
            out
        }
        (Formula::Forall(vs, body), true) => vec![Formula::exists(vs.clone(), Formula::not((**body).clone()))],
        (g, false) => vec![g.clone()],
        (g, true) => vec![Formula::not(g.clone())],
    }
}

struct Machine<'a> {
    f: &'a FieldSpec,
    elems: Vec<GFElem>,
    env: Vec<GFElem>,
    spent: u64,
    guard: u64,
}

impl Machine<'_> {
    fn term(&self, t: &CTerm) -> GFElem {
        match t {
            CTerm::Zero => self.f.zero(),
            CTerm::One => self.f.one(),
            CTerm::Slot(s) => self.env[*s],
            CTerm::Sum(a, b) => self.f.add(self.term(a), self.term(b)),
            CTerm::Prod(a, b) => self.f.mul(self.term(a), self.term(b)),
        }
    }

    fn eval(&mut self, c: &CForm) -> Result<bool, AcfcError> {
        match c {
            CForm::Eq(a, b) => Ok(self.term(a) == self.term(b)),
            CForm::Not(g) => Ok(!self.eval(g)?),
            CForm::And(gs) => {
                for g in gs {
                    if !self.eval(g)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            CForm::Or(gs) => {
                for g in gs {
                    if self.eval(g)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            CForm::Exists { slots, stages } => self.search(slots, stages, 0),
        }
    }

    fn search(&mut self, slots: &[usize], stages: &[Vec<CForm>], depth: usize) -> Result<bool, AcfcError> {
        for g in &stages[depth] {
            if !self.eval(g)? {
                return Ok(false);
            }
        }
        if depth == slots.len() {
            return Ok(true);
        }
        for i in 0..self.elems.len() {
            self.spent += 1;
            if self.spent > self.guard {
                return Err(AcfcError::GuardExceeded { guard: self.guard });
            }
            self.env[slots[depth]] = self.elems[i];
            if self.search(slots, stages, depth + 1)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Truth value of `formula` over `field`, with the work spent.
pub fn evaluate(
    formula: &Formula,
    field: &FieldSpec,
    assignment: &BTreeMap<String, GFElem>,
    guard: u64,
) -> Result<EvalOutcome, AcfcError> {
    let mut compiler = Compiler { scope: HashMap::new(), next: 0 };
    let mut env = Vec::new();
    for (name, &v) in assignment {
        if !field.contains(v) {
            return Err(AcfcError::Field(crate::gf::GfError::FieldMismatch));
        }
        compiler.scope.insert(name.clone(), vec![env.len()]);
        env.push(v);
    }
    compiler.next = env.len();
    let compiled = compiler.formula(formula, &mut BTreeSet::new())?;
    env.resize(compiler.next, field.zero());
    let mut m = Machine {
        f: field,
        elems: field.elements().collect(),
        env,
        spent: 0,
        guard,
    };
    let value = m.eval(&compiled)?;
    Ok(EvalOutcome { value, assignments: m.spent })
}

pub fn eval_formula(
    formula: &Formula,
    field: &FieldSpec,
    assignment: &BTreeMap<String, GFElem>,
    guard: u64,
) -> Result<bool, AcfcError> {
    evaluate(formula, field, assignment, guard).map(|o| o.value)
}
