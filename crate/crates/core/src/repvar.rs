//! Representation varieties `V(F_q)` and absolutely irreducible character
//! counts, level by level up the tower `F_p ⊂ F_{p^2} ⊂ ...`.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{divisors, make_field, Embedding, FieldInfo, FieldSpec, GfError};
use crate::presentation::{Letter, Presentation, Word};
use crate::sl2::{
    character_of, conjugacy_class_reps, eval_word_unchecked, is_absolutely_irreducible,
    is_reducible_over_base, sl2_elements, sl2_order, Character, Mat2, Sl2Error,
    DEFAULT_ENUMERATION_CEILING,
};

/// Default bound on the number of tuples a single count may scan.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// Bound on `(q^3 - q)^l` for the unpruned oracle.
pub const NAIVE_GUARD: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepvarError {
    #[error("budget exceeded: {} tuples needed, ceiling {ceiling} ({reason})", show_needed(*.needed))]
    BudgetExceeded {
        needed: u128,
        ceiling: u64,
        reason: String,
    },
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Sl2(#[from] Sl2Error),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

fn show_needed(n: u128) -> String {
    if n == u128::MAX {
        "unboundedly many".into()
    } else {
        n.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumOptions {
    /// Maximum number of tuples scanned by one count.
    pub ceiling: u64,
    /// Restrict the first generator to conjugacy class representatives.
    pub prune: bool,
    /// Worker threads; results do not depend on this.
    #[serde(skip)]
    pub workers: usize,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            ceiling: DEFAULT_BUDGET,
            prune: true,
            workers: 1,
        }
    }
}

/// Absolutely irreducible characters of a presentation over one field.
#[derive(Debug, Clone)]
pub struct CharVarCount {
    pub field: FieldSpec,
    pub char_count: usize,
    pub characters: BTreeSet<Character>,
    pub rep_tuples_scanned: u64,
    pub stable: bool,
    /// Characters whose traces generate a subfield of exactly this degree.
    pub per_degree: BTreeMap<u32, usize>,
}

impl PartialEq for CharVarCount {
    fn eq(&self, o: &Self) -> bool {
        self.field == o.field
            && self.char_count == o.char_count
            && self.characters == o.characters
            && self.stable == o.stable
            && self.per_degree == o.per_degree
    }
}

impl CharVarCount {
    fn new(field: &FieldSpec, characters: BTreeSet<Character>, scanned: u64) -> Self {
        let mut per_degree: BTreeMap<u32, usize> =
            divisors(field.k()).into_iter().map(|d| (d, 0)).collect();
        for c in &characters {
            *per_degree.entry(field.subfield_degree(&c.traces)).or_default() += 1;
        }
        CharVarCount {
            field: field.clone(),
            char_count: characters.len(),
            characters,
            rep_tuples_scanned: scanned,
            stable: false,
            per_degree,
        }
    }

    pub fn summary(&self) -> CountSummary {
        CountSummary {
            field: FieldInfo::from(&self.field),
            char_count: self.char_count,
            characters: self
                .characters
                .iter()
                .map(|c| c.format(&self.field))
                .collect(),
            rep_tuples_scanned: self.rep_tuples_scanned,
            stable: self.stable,
            per_degree: self
                .per_degree
                .iter()
                .map(|(d, n)| (d.to_string(), *n))
                .collect(),
        }
    }
}

/// Serializable view of a [`CharVarCount`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountSummary {
    pub field: FieldInfo,
    pub char_count: usize,
    pub characters: Vec<Vec<String>>,
    pub rep_tuples_scanned: u64,
    pub stable: bool,
    pub per_degree: BTreeMap<String, usize>,
}

/// True iff every relator evaluates to the identity.
pub fn satisfies_relators(p: &Presentation, f: &FieldSpec, t: &[Mat2]) -> bool {
    assert_eq!(t.len(), p.rank(), "tuple length must match generator count");
    let id = Mat2::identity(f);
    p.relators()
        .iter()
        .all(|r| eval_word_unchecked(f, t, r) == id)
}

fn class_count_bound(q: u64) -> u64 {
    if q % 2 == 0 {
        q + 1
    } else {
        q + 4
    }
}

fn budget_check(p: &Presentation, f: &FieldSpec, first_choices: u64, ceiling: u64) -> Result<(), RepvarError> {
    let q = u64::from(f.order());
    let l = p.rank();
    if p.relators().is_empty() && l >= 2 && q > 3 {
        return Err(RepvarError::BudgetExceeded {
            needed: u128::MAX,
            ceiling,
            reason: "non-rigid input: free group of rank >= 2 has a growing character set".into(),
        });
    }
    let group = u128::from(sl2_order(q));
    let needed = if l == 0 {
        1
    } else {
        (1..l).try_fold(u128::from(first_choices), |acc, _| acc.checked_mul(group))
            .unwrap_or(u128::MAX)
    };
    if needed > u128::from(ceiling) {
        return Err(RepvarError::BudgetExceeded {
            needed,
            ceiling,
            reason: format!("{} over {}", if first_choices < sl2_order(q) { "pruned scan" } else { "full scan" }, f),
        });
    }
    Ok(())
}

/// Counts absolutely irreducible characters of `p` over `f`.
pub fn count_characters(p: &Presentation, f: &FieldSpec, opts: &EnumOptions) -> Result<CharVarCount, RepvarError> {
    let q = u64::from(f.order());
    let first_choices = if opts.prune { class_count_bound(q) } else { sl2_order(q) };
    budget_check(p, f, first_choices.min(sl2_order(q)), opts.ceiling)?;
    let group = sl2_elements(f, DEFAULT_ENUMERATION_CEILING)?;
    if p.rank() == 0 {
        return Ok(CharVarCount::new(f, BTreeSet::new(), 1));
    }
    let firsts = if opts.prune {
        conjugacy_class_reps(f, DEFAULT_ENUMERATION_CEILING)?
    } else {
        group.clone()
    };
    Ok(scan(p, f, &firsts, &group, opts.workers))
}

/// Relators grouped by the depth at which all their generators are assigned.
fn relators_by_depth(p: &Presentation) -> Vec<Vec<&Word>> {
    let mut out = vec![Vec::new(); p.rank() + 1];
    for r in p.relators() {
        out[r.max_gen().map_or(0, |g| g + 1)].push(r);
    }
    out
}

fn scan(p: &Presentation, f: &FieldSpec, firsts: &[Mat2], group: &[Mat2], workers: usize) -> CharVarCount {
    let by_depth = relators_by_depth(p);
    let id = Mat2::identity(f);
    // Relators mentioning no generator are trivially satisfied or not.
    if by_depth[0].iter().any(|r| eval_word_unchecked(f, &[], r) != id) {
        return CharVarCount::new(f, BTreeSet::new(), 0);
    }
    let l = p.rank();
    let per_first = u64::try_from(group.len()).unwrap().pow(l as u32 - 1);

    let work = |first: &Mat2| -> BTreeSet<Character> {
        let mut found = BTreeSet::new();
        let mut tuple = vec![*first; l];
        if by_depth[1].iter().all(|r| eval_word_unchecked(f, &tuple[..1], r) == id) {
            extend(f, &by_depth, group, &mut tuple, 1, &mut found);
        }
        found
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool");
    let characters = pool.install(|| {
        firsts
            .par_iter()
            .map(work)
            .reduce(BTreeSet::new, |mut a, b| {
                a.extend(b);
                a
            })
    });
    CharVarCount::new(f, characters, per_first * firsts.len() as u64)
}

fn extend(
    f: &FieldSpec,
    by_depth: &[Vec<&Word>],
    group: &[Mat2],
    tuple: &mut Vec<Mat2>,
    depth: usize,
    found: &mut BTreeSet<Character>,
) {
    if depth == tuple.len() {
        if is_absolutely_irreducible(f, tuple) {
            found.insert(character_of(f, tuple));
        }
        return;
    }
    let id = Mat2::identity(f);
    for m in group {
        tuple[depth] = *m;
        if by_depth[depth + 1]
            .iter()
            .all(|r| eval_word_unchecked(f, &tuple[..=depth], r) == id)
        {
            extend(f, by_depth, group, tuple, depth + 1, found);
        }
    }
}

/// Unpruned single-threaded count used as an oracle for [`count_characters`].
///
/// Scans every tuple, checks every relator at the end, and decides absolute
/// irreducibility by looking for a common eigenline over `F_{q^2}` (where
/// every eigenvector of a 2x2 matrix over `F_q` is defined) rather than by
/// the span test.
pub fn naive_count(p: &Presentation, f: &FieldSpec) -> Result<CharVarCount, RepvarError> {
    let q = u64::from(f.order());
    let l = p.rank() as u32;
    let needed = u128::from(sl2_order(q)).checked_pow(l).unwrap_or(u128::MAX);
    if needed > NAIVE_GUARD {
        return Err(RepvarError::BudgetExceeded {
            needed,
            ceiling: NAIVE_GUARD as u64,
            reason: "naive oracle guard".into(),
        });
    }
    budget_check(p, f, sl2_order(q), NAIVE_GUARD as u64)?;
    let group = sl2_elements(f, DEFAULT_ENUMERATION_CEILING)?;
    let big = make_field(u64::from(f.p()), 2 * f.k())?;
    let lift = Embedding::new(f, &big)?;
    let id = Mat2::identity(f);

    let mut characters = BTreeSet::new();
    let mut scanned = 0u64;
    let mut digits = vec![0usize; l as usize];
    loop {
        let tuple: Vec<Mat2> = digits.iter().map(|&i| group[i]).collect();
        scanned += 1;
        if p.relators().iter().all(|r| eval_word_unchecked(f, &tuple, r) == id) {
            let lifted: Vec<Mat2> = tuple
                .iter()
                .map(|m| {
                    let [a, b, c, d] = m.entries().map(|x| lift.apply(x));
                    Mat2::new(&big, a, b, c, d).expect("embedding preserves determinant")
                })
                .collect();
            if !is_reducible_over_base(&big, &lifted) {
                characters.insert(character_of(f, &tuple));
            }
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == digits.len() {
                return Ok(CharVarCount::new(f, characters, scanned));
            }
            digits[pos] += 1;
            if digits[pos] < group.len() {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

/// One level of a field tower.
#[derive(Debug, Clone, PartialEq)]
pub enum TowerLevel {
    Counted(CharVarCount),
    Skipped { p: u32, k: u32, reason: String },
}

impl TowerLevel {
    pub fn k(&self) -> u32 {
        match self {
            TowerLevel::Counted(c) => c.field.k(),
            TowerLevel::Skipped { k, .. } => *k,
        }
    }

    pub fn counted(&self) -> Option<&CharVarCount> {
        match self {
            TowerLevel::Counted(c) => Some(c),
            TowerLevel::Skipped { .. } => None,
        }
    }

    pub fn summary(&self) -> LevelSummary {
        match self {
            TowerLevel::Counted(c) => LevelSummary::Counted(c.summary()),
            TowerLevel::Skipped { p, k, reason } => LevelSummary::Skipped {
                field: format!("{p}^{k}"),
                reason: reason.clone(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LevelSummary {
    Counted(CountSummary),
    Skipped { field: String, reason: String },
}

/// Counts at `F_{p^k}` for `k = 1..=max_k`.
///
/// Levels over budget are recorded as skipped. The final counted level is
/// flagged `stable` when it agrees with every counted level of divisor degree
/// and with the previous counted level. This is a heuristic: nothing bounds
/// how far up the tower new characters may still appear.
pub fn stabilize(p: &Presentation, prime: u64, max_k: u32, opts: &EnumOptions) -> Result<Vec<TowerLevel>, RepvarError> {
    let mut levels = Vec::new();
    for k in 1..=max_k {
        let f = make_field(prime, k)?;
        match count_characters(p, &f, opts) {
            Ok(c) => levels.push(TowerLevel::Counted(c)),
            Err(RepvarError::BudgetExceeded { reason, needed, ceiling }) => levels.push(TowerLevel::Skipped {
                p: f.p(),
                k,
                reason: format!("{reason}; needs {} tuples, ceiling {ceiling}", show_needed(needed)),
            }),
            Err(e) => return Err(e),
        }
    }
    check_tower(&levels)?;

    let counted: Vec<usize> = (0..levels.len())
        .filter(|&i| levels[i].counted().is_some())
        .collect();
    if let [.., prev, last] = counted[..] {
        let top = levels[last].counted().unwrap();
        let top_k = top.field.k();
        let agrees_with_divisors = counted.iter().filter_map(|&i| levels[i].counted()).all(|c| {
            top_k % c.field.k() != 0 || c.char_count == top.char_count
        });
        let agrees_with_prev = levels[prev].counted().unwrap().char_count == top.char_count;
        if agrees_with_divisors && agrees_with_prev {
            if let TowerLevel::Counted(c) = &mut levels[last] {
                c.stable = true;
            }
        }
    }
    Ok(levels)
}

/// Characters at level `d` embed into level `k` whenever `d | k`.
fn check_tower(levels: &[TowerLevel]) -> Result<(), RepvarError> {
    for small in levels.iter().filter_map(TowerLevel::counted) {
        for large in levels.iter().filter_map(TowerLevel::counted) {
            let (d, k) = (small.field.k(), large.field.k());
            if d == k || k % d != 0 {
                continue;
            }
            if small.char_count > large.char_count {
                return Err(RepvarError::Internal(format!(
                    "character count drops from {} at {} to {} at {}",
                    small.char_count,
                    small.field,
                    large.char_count,
                    large.field
                )));
            }
            let e = Embedding::new(&small.field, &large.field)?;
            for c in &small.characters {
                let image = Character {
                    traces: c.traces.iter().map(|&x| e.apply(x)).collect(),
                };
                if !large.characters.contains(&image) {
                    return Err(RepvarError::Internal(format!(
                        "character {:?} over {} missing over {}",
                        c.format(&small.field),
                        small.field,
                        large.field
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Frobenius permutes the character set, and each orbit has size equal to
/// the degree of the field generated by the character's traces.
pub fn frobenius_orbit_check(c: &CharVarCount) -> bool {
    let f = &c.field;
    c.characters.iter().all(|ch| {
        let mut orbit = 1;
        let mut image = ch.frobenius(f);
        while image != *ch {
            if !c.characters.contains(&image) || orbit > f.k() {
                return false;
            }
            image = image.frobenius(f);
            orbit += 1;
        }
        c.characters.contains(&ch.frobenius(f)) && orbit == f.subfield_degree(&ch.traces)
    })
}

/// A random presentation with `1..=max_gens` generators, `0..=max_rels`
/// relators of length `1..=max_len` (before free reduction).
pub fn random_presentation<R: Rng>(rng: &mut R, max_gens: usize, max_rels: usize, max_len: usize) -> Presentation {
    let l = rng.gen_range(1..=max_gens);
    let names: Vec<String> = ["a", "b", "c", "d"].iter().take(l).map(|s| s.to_string()).collect();
    let relators = (0..rng.gen_range(0..=max_rels))
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            Word::new((0..len).map(|_| Letter::new(rng.gen_range(0..l), rng.gen_bool(0.5))))
        })
        .collect();
    Presentation::new(names, relators, None).expect("generated words use declared generators")
}

/// Outcome of comparing pruned and naive counts on one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCase {
    pub presentation: String,
    pub field: String,
    pub pruned: Option<usize>,
    pub naive: Option<usize>,
    pub agree: bool,
}

/// Compares [`count_characters`] against [`naive_count`]. Both refusing the
/// instance for the same reason counts as agreement.
pub fn oracle_compare(p: &Presentation, f: &FieldSpec, opts: &EnumOptions) -> OracleCase {
    oracle_compare_impl(p, f, opts, false)
}

fn oracle_compare_impl(p: &Presentation, f: &FieldSpec, opts: &EnumOptions, inject_fault: bool) -> OracleCase {
    let pruned = if inject_fault && p.rank() > 0 {
        // Deliberately unsound: only the identity class for the first generator.
        sl2_elements(f, DEFAULT_ENUMERATION_CEILING)
            .map(|g| scan(p, f, &[Mat2::identity(f)], &g, opts.workers))
            .map_err(RepvarError::from)
    } else {
        count_characters(p, f, opts)
    };
    let naive = naive_count(p, f);
    let agree = match (&pruned, &naive) {
        (Ok(a), Ok(b)) => a.characters == b.characters,
        (Err(RepvarError::BudgetExceeded { reason: ra, .. }), Err(RepvarError::BudgetExceeded { reason: rb, .. })) => {
            ra.starts_with("non-rigid") && rb.starts_with("non-rigid")
        }
        _ => false,
    };
    OracleCase {
        presentation: p.render(),
        field: f.name(),
        pruned: pruned.ok().map(|c| c.char_count),
        naive: naive.ok().map(|c| c.char_count),
        agree,
    }
}

/// Seeded randomized equivalence suite: `cases` presentations (at most two
/// generators, two relators of length six) each over every field in
/// `fields`. Stops at the first disagreement.
pub fn oracle_suite(seed: u64, cases: usize, fields: &[FieldSpec], opts: &EnumOptions, inject_fault: bool) -> Vec<OracleCase> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..cases {
        let p = random_presentation(&mut rng, 2, 2, 6);
        for f in fields {
            let case = oracle_compare_impl(&p, f, opts, inject_fault);
            let failed = !case.agree;
            out.push(case);
            if failed {
                return out;
            }
        }
    }
    out
}
