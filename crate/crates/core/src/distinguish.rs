//! Finite-quotient fingerprints of presentations and pairwise comparison.
//!
//! Two kinds of difference are reported. Different abelianizations are a
//! certificate: finite abelian quotients are invariants of the profinite
//! completion. Different character counts at a level both towers flag as
//! stable are only evidence, since stabilization is a heuristic.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::is_prime;
use crate::presentation::{AbelianInvariants, Presentation};
use crate::repvar::{stabilize, EnumOptions, LevelSummary, RepvarError, TowerLevel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DistinguishError {
    #[error("at least one prime is required")]
    NoPrimes,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("tower height must be at least 1")]
    EmptyTower,
    #[error("fingerprints were computed with different options: {0}")]
    IncomparableOptions(String),
    #[error(transparent)]
    Repvar(#[from] RepvarError),
}

/// Everything about how a fingerprint was computed, except the input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FingerprintOptions {
    pub primes: Vec<u64>,
    pub max_k: u32,
    pub ceiling: u64,
    pub prune: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FingerprintMeta {
    pub presentation_hash: String,
    pub options: FingerprintOptions,
}

#[derive(Debug, Clone)]
pub struct Fingerprint {
    pub abelian: AbelianInvariants,
    pub per_prime: BTreeMap<u64, Vec<TowerLevel>>,
    pub meta: FingerprintMeta,
}

impl PartialEq for Fingerprint {
    fn eq(&self, o: &Self) -> bool {
        self.summary() == o.summary()
    }
}

/// Serializable view of a [`Fingerprint`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FingerprintSummary {
    pub abelian: AbelianInvariants,
    pub abelian_text: String,
    pub per_prime: BTreeMap<String, Vec<LevelSummary>>,
    pub meta: FingerprintMeta,
}

impl Fingerprint {
    pub fn summary(&self) -> FingerprintSummary {
        FingerprintSummary {
            abelian: self.abelian.clone(),
            abelian_text: self.abelian.to_string(),
            per_prime: self
                .per_prime
                .iter()
                .map(|(p, levels)| (p.to_string(), levels.iter().map(TowerLevel::summary).collect()))
                .collect(),
            meta: self.meta.clone(),
        }
    }

    /// Count at the top counted level of the tower over `p`, if any.
    pub fn final_count(&self, p: u64) -> Option<(u32, usize, bool)> {
        self.per_prime
            .get(&p)?
            .iter()
            .rev()
            .find_map(TowerLevel::counted)
            .map(|c| (c.field.k(), c.char_count, c.stable))
    }
}

pub fn fingerprint(
    p: &Presentation,
    primes: &[u64],
    max_k: u32,
    opts: &EnumOptions,
) -> Result<Fingerprint, DistinguishError> {
    if primes.is_empty() {
        return Err(DistinguishError::NoPrimes);
    }
    if max_k == 0 {
        return Err(DistinguishError::EmptyTower);
    }
    if let Some(&bad) = primes.iter().find(|&&q| !is_prime(q)) {
        return Err(DistinguishError::NotPrime(bad));
    }
    let mut sorted = primes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();

    let towers = sorted
        .par_iter()
        .map(|&q| stabilize(p, q, max_k, opts).map(|t| (q, t)))
        .collect::<Result<Vec<_>, _>>()?;

    Ok(Fingerprint {
        abelian: p.abelianize(),
        per_prime: towers.into_iter().collect(),
        meta: FingerprintMeta {
            presentation_hash: p.structural_hash(),
            options: FingerprintOptions {
                primes: sorted,
                max_k,
                ceiling: opts.ceiling,
                prune: opts.prune,
            },
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictKind {
    Distinguished,
    Indistinct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    /// Backed by an exact invariant of the profinite completion.
    Certified,
    /// Backed by heuristically stabilized character counts, or by nothing.
    Evidence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub prime: u64,
    pub k: u32,
    /// `None` when the level was skipped.
    pub left: Option<usize>,
    pub right: Option<usize>,
    pub left_stable: bool,
    pub right_stable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub tier: Tier,
    pub witness: String,
    pub abelian: (String, String),
    pub table: Vec<ComparisonRow>,
    pub annotations: Vec<String>,
}

const CAVEAT: &str = "character counts come from finite tower levels; stabilization is heuristic, \
so a count difference is evidence rather than proof";

pub fn compare(x: &Fingerprint, y: &Fingerprint) -> Result<Verdict, DistinguishError> {
    let (ox, oy) = (&x.meta.options, &y.meta.options);
    if ox != oy {
        return Err(DistinguishError::IncomparableOptions(format!(
            "primes {:?}/{:?}, max_k {}/{}, ceiling {}/{}, prune {}/{}",
            ox.primes, oy.primes, ox.max_k, oy.max_k, ox.ceiling, oy.ceiling, ox.prune, oy.prune
        )));
    }

    let mut table = Vec::new();
    for &p in &ox.primes {
        let (lx, ly) = (&x.per_prime[&p], &y.per_prime[&p]);
        for (a, b) in lx.iter().zip(ly) {
            let (ca, cb) = (a.counted(), b.counted());
            table.push(ComparisonRow {
                prime: p,
                k: a.k(),
                left: ca.map(|c| c.char_count),
                right: cb.map(|c| c.char_count),
                left_stable: ca.is_some_and(|c| c.stable),
                right_stable: cb.is_some_and(|c| c.stable),
            });
        }
    }

    let abelian = (x.abelian.to_string(), y.abelian.to_string());
    let mut annotations = Vec::new();

    let (kind, tier, witness) = if x.abelian != y.abelian {
        (
            VerdictKind::Distinguished,
            Tier::Certified,
            format!(
                "abelianizations differ: {} (torsion order {}) vs {} (torsion order {})",
                abelian.0,
                x.abelian.torsion_order(),
                abelian.1,
                y.abelian.torsion_order()
            ),
        )
    } else if let Some(row) = table
        .iter()
        .find(|r| r.left_stable && r.right_stable && r.left != r.right)
    {
        annotations.push(CAVEAT.to_string());
        (
            VerdictKind::Distinguished,
            Tier::Evidence,
            format!(
                "stable character counts differ over F_{}^{}: {} vs {}",
                row.prime,
                row.k,
                row.left.unwrap_or_default(),
                row.right.unwrap_or_default()
            ),
        )
    } else {
        annotations.push(CAVEAT.to_string());
        (
            VerdictKind::Indistinct,
            Tier::Evidence,
            "no difference in abelianization or in stable character counts".to_string(),
        )
    };

    annotations.extend(cross_prime_note("left", x, &ox.primes));
    annotations.extend(cross_prime_note("right", y, &ox.primes));
    if table.iter().any(|r| r.left.is_none() || r.right.is_none()) {
        annotations.push("some levels were skipped for budget; see table".to_string());
    }

    Ok(Verdict {
        kind,
        tier,
        witness,
        abelian,
        table,
        annotations,
    })
}

/// Whether the top counts of one fingerprint agree across primes.
fn cross_prime_note(side: &str, f: &Fingerprint, primes: &[u64]) -> Option<String> {
    let finals: Vec<(u64, usize)> = primes
        .iter()
        .filter_map(|&p| f.final_count(p).map(|(_, n, _)| (p, n)))
        .collect();
    let (_, first) = *finals.first()?;
    if finals.iter().all(|&(_, n)| n == first) {
        if finals.len() > 1 {
            Some(format!(
                "{side}: counts agree across all computed primes ({first}), consistent with a common |χ^I_C|"
            ))
        } else {
            None
        }
    } else {
        let listed: Vec<String> = finals.iter().map(|(p, n)| format!("p={p}: {n}")).collect();
        Some(format!("{side}: counts vary across primes ({}), possible exceptional prime", listed.join(", ")))
    }
}

impl Verdict {
    /// Plain-text report with the comparison table.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let kind = match self.kind {
            VerdictKind::Distinguished => "DISTINGUISHED",
            VerdictKind::Indistinct => "INDISTINCT",
        };
        let tier = match self.tier {
            Tier::Certified => "certified",
            Tier::Evidence => "evidence",
        };
        let _ = writeln!(out, "verdict: {kind} ({tier})");
        let _ = writeln!(out, "witness: {}", self.witness);
        let _ = writeln!(out, "H1: {} | {}", self.abelian.0, self.abelian.1);
        let _ = writeln!(out, "{:>6} {:>3} {:>8} {:>8}", "p", "k", "left", "right");
        let cell = |n: Option<usize>, stable: bool| match n {
            Some(n) => format!("{n}{}", if stable { "*" } else { "" }),
            None => "skip".to_string(),
        };
        for r in &self.table {
            let _ = writeln!(
                out,
                "{:>6} {:>3} {:>8} {:>8}",
                r.prime,
                r.k,
                cell(r.left, r.left_stable),
                cell(r.right, r.right_stable)
            );
        }
        let _ = writeln!(out, "(* = flagged stable)");
        for a in &self.annotations {
            let _ = writeln!(out, "note: {a}");
        }
        out
    }
}
