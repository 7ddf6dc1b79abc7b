//! Sparse multivariate polynomials with integer coefficients.

use std::collections::BTreeMap;

use crate::gf::{FieldSpec, GFElem};

use super::{AcfcError, Term};

/// Largest number of monomials a single expanded polynomial may have.
pub const MAX_MONOMIALS: usize = 1 << 16;

/// Polynomial over a fixed ordered variable list, keyed by exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, i128>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: i128) -> Self {
        let mut p = Poly::zero(nvars);
        if c != 0 {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Poly::zero(nvars);
        p.terms.insert(e, 1);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Monomials in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], i128)> + '_ {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn coefficient(&self, exps: &[u32]) -> i128 {
        self.terms.get(exps).copied().unwrap_or(0)
    }

    fn add_term(&mut self, e: Vec<u32>, c: i128) -> Result<(), AcfcError> {
        let slot = self.terms.entry(e).or_insert(0);
        *slot = slot.checked_add(c).ok_or(AcfcError::ExpansionTooLarge)?;
        if *slot == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
        Ok(())
    }

    pub fn add(&self, o: &Poly) -> Result<Poly, AcfcError> {
        assert_eq!(self.nvars, o.nvars);
        let mut out = self.clone();
        for (e, &c) in &o.terms {
            out.add_term(e.clone(), c)?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, &c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, o: &Poly) -> Result<Poly, AcfcError> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Result<Poly, AcfcError> {
        assert_eq!(self.nvars, o.nvars);
        let mut out: BTreeMap<Vec<u32>, i128> = BTreeMap::new();
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let c = c1.checked_mul(c2).ok_or(AcfcError::ExpansionTooLarge)?;
                let slot = out.entry(e).or_insert(0);
                *slot = slot.checked_add(c).ok_or(AcfcError::ExpansionTooLarge)?;
            }
            if out.len() > MAX_MONOMIALS {
                return Err(AcfcError::ExpansionTooLarge);
            }
        }
        out.retain(|_, c| *c != 0);
        Ok(Poly { nvars: self.nvars, terms: out })
    }

    /// Splits `self` as `pos - neg` with both parts having positive coefficients.
    pub fn split_signs(&self) -> (Poly, Poly) {
        let mut pos = Poly::zero(self.nvars);
        let mut neg = Poly::zero(self.nvars);
        for (e, &c) in &self.terms {
            if c > 0 {
                pos.terms.insert(e.clone(), c);
            } else {
                neg.terms.insert(e.clone(), -c);
            }
        }
        (pos, neg)
    }

    /// Signature term for a polynomial with nonnegative coefficients.
    pub fn to_term(&self, names: &[String]) -> Term {
        assert_eq!(names.len(), self.nvars);
        let monos: Vec<Term> = self
            .terms
            .iter()
            .map(|(e, &c)| {
                assert!(c > 0, "to_term needs nonnegative coefficients");
                let factors: Vec<Term> = e
                    .iter()
                    .enumerate()
                    .flat_map(|(i, &k)| std::iter::repeat(Term::var(&names[i])).take(k as usize))
                    .collect();
                let mono = right_fold(factors, Term::product);
                match (mono, c) {
                    (None, c) => Term::numeral(c as u64),
                    (Some(m), 1) => m,
                    (Some(m), c) => Term::product(Term::numeral(c as u64), m),
                }
            })
            .collect();
        right_fold(monos, Term::sum).unwrap_or(Term::Zero)
    }

    pub fn eval(&self, f: &FieldSpec, values: &[GFElem]) -> GFElem {
        assert_eq!(values.len(), self.nvars);
        let p = i128::from(f.p());
        self.terms.iter().fold(f.zero(), |acc, (e, &c)| {
            let coeff = f.from_int(c.rem_euclid(p) as i64);
            let mono = e
                .iter()
                .zip(values)
                .fold(coeff, |m, (&k, &v)| f.mul(m, f.pow(v, u64::from(k))));
            f.add(acc, mono)
        })
    }

    /// ASCII rendering, highest monomial first: `a1*d1 - b1*c1 - 1`.
    pub fn render(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.nvars);
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, &c)) in self.terms.iter().rev().enumerate() {
            let sign = if c < 0 { "-" } else { "+" };
            if i == 0 {
                if c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            let mut factors: Vec<String> = Vec::new();
            let mag = c.unsigned_abs();
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|&(_, &k)| k > 0)
                .map(|(j, &k)| if k == 1 { names[j].clone() } else { format!("{}^{k}", names[j]) })
                .collect();
            if mag != 1 || mono.is_empty() {
                factors.push(mag.to_string());
            }
            factors.extend(mono);
            out.push_str(&factors.join("*"));
        }
        out
    }
}

fn right_fold(items: Vec<Term>, join: fn(Term, Term) -> Term) -> Option<Term> {
    let mut it = items.into_iter().rev();
    let last = it.next()?;
    Some(it.fold(last, |acc, t| join(t, acc)))
}

/// 2x2 matrix of polynomials, row-major.
pub type PolyMat = [Poly; 4];

pub fn mat_identity(nvars: usize) -> PolyMat {
    [
        Poly::constant(nvars, 1),
        Poly::zero(nvars),
        Poly::zero(nvars),
        Poly::constant(nvars, 1),
    ]
}

/// Generic matrix whose entries are the variables `base..base + 4`.
pub fn mat_vars(nvars: usize, base: usize) -> PolyMat {
    [0, 1, 2, 3].map(|i| Poly::var(nvars, base + i))
}

/// Adjugate, which is the inverse on determinant-one matrices.
pub fn mat_adjugate(m: &PolyMat) -> PolyMat {
    [m[3].clone(), m[1].neg(), m[2].neg(), m[0].clone()]
}

pub fn mat_mul(x: &PolyMat, y: &PolyMat) -> Result<PolyMat, AcfcError> {
    let entry = |i: usize, k: usize| -> Result<Poly, AcfcError> {
        x[2 * i].mul(&y[k])?.add(&x[2 * i + 1].mul(&y[2 + k])?)
    };
    Ok([entry(0, 0)?, entry(0, 1)?, entry(1, 0)?, entry(1, 1)?])
}
