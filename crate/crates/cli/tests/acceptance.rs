//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any failed.
//!
//! Run with `cargo test -p charvar-cli --test acceptance`.

use std::collections::BTreeSet;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use charvar_cli::corpus;
use charvar_core::acfc::{
    build_rep, build_sigma, emit_ideal, emit_text, eval_formula, evaluate, parse_formula, AcfcError,
    ConjSemantics, TupleVars, DEFAULT_GUARD,
};
use charvar_core::distinguish::{compare, fingerprint, Tier, VerdictKind};
use charvar_core::gf::{embed, make_field, FieldSpec, GFElem};
use charvar_core::presentation::{parse, FillingSlope, Presentation, SlopeConvention};
use charvar_core::repvar::{
    count_characters, oracle_compare, oracle_suite, satisfies_relators, CharVarCount, EnumOptions,
    RepvarError,
};
use charvar_core::sl2::{sl2_elements, Character, Mat2};
use num_bigint::BigInt;
use serde_json::Value;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn field(p: u64, k: u32) -> FieldSpec {
    make_field(p, k).expect("valid field")
}

fn corpus_entries() -> Vec<(&'static str, Presentation)> {
    corpus::ENTRIES.iter().map(|(n, t)| (*n, parse(t).expect("corpus parses"))).collect()
}

fn opts(workers: usize) -> EnumOptions {
    EnumOptions { workers, ..EnumOptions::default() }
}

fn is_refusal(e: &RepvarError) -> bool {
    matches!(e, RepvarError::BudgetExceeded { .. })
}

// 1. |SL(2, F_q)| = q^3 - q, with the enumeration checked against brute force.
fn sl2_enumeration() -> Outcome {
    for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13] {
        let (p, k) = charvar_core::gf::parse_field_name(&q.to_string()).unwrap();
        let f = field(p, k);
        let g = sl2_elements(&f, u64::MAX).map_err(|e| e.to_string())?;
        let distinct: BTreeSet<u64> = g.iter().map(|m| m.index(&f)).collect();
        ensure!(g.len() as u64 == q * q * q - q, "q = {q}: {} elements", g.len());
        ensure!(distinct.len() == g.len(), "q = {q}: duplicates");
        if q <= 5 {
            let elems: Vec<GFElem> = f.elements().collect();
            let mut brute = 0u64;
            for &a in &elems {
                for &b in &elems {
                    for &c in &elems {
                        for &d in &elems {
                            brute += u64::from(f.sub(f.mul(a, d), f.mul(b, c)) == f.one());
                        }
                    }
                }
            }
            ensure!(brute == g.len() as u64, "q = {q}: brute force gives {brute}");
        }
    }
    Ok("9 fields".into())
}

// 2. Pruned parallel counting agrees with the naive oracle.
fn oracle_equivalence() -> Outcome {
    let mut compared = 0;
    for (name, p) in corpus_entries() {
        for f in [field(2, 1), field(3, 1), field(5, 1)] {
            let case = oracle_compare(&p, &f, &opts(4));
            ensure!(case.agree, "{name} over F_{}: pruned {:?}, naive {:?}", f.name(), case.pruned, case.naive);
            compared += 1;
        }
    }
    let suite = oracle_suite(20260, 20, &[field(2, 1), field(3, 1)], &opts(4), false);
    ensure!(suite.len() == 40, "random suite stopped after {} comparisons", suite.len());
    if let Some(bad) = suite.iter().find(|c| !c.agree) {
        return Err(format!("random case disagrees: {bad:?}"));
    }
    let counted = suite.iter().filter(|c| c.pruned.is_some()).count();
    ensure!(counted >= 20, "only {counted} random comparisons produced counts");
    Ok(format!("{compared} corpus + {} random comparisons", suite.len()))
}

// 3. Exact small counts.
fn known_counts() -> Outcome {
    let fields = [2u64, 3, 4, 5, 7, 8, 9];
    let split = |q: u64| charvar_core::gf::parse_field_name(&q.to_string()).unwrap();
    for name in ["trivial", "z", "zmod2", "zmod3", "zmod4", "zmod6"] {
        let p = parse(corpus::get(name).unwrap()).unwrap();
        for q in fields {
            let (pr, k) = split(q);
            let c = count_characters(&p, &field(pr, k), &opts(4)).map_err(|e| e.to_string())?;
            ensure!(c.char_count == 0, "{name} over F_{q}: {}", c.char_count);
        }
    }
    let q8 = parse(corpus::get("q8").unwrap()).unwrap();
    for (q, want) in [(3u64, 1usize), (5, 1), (7, 1), (9, 1), (2, 0), (4, 0)] {
        let (pr, k) = split(q);
        let c = count_characters(&q8, &field(pr, k), &opts(4)).map_err(|e| e.to_string())?;
        ensure!(c.char_count == want, "Q8 over F_{q}: {} (want {want})", c.char_count);
    }
    Ok("trivial, Z, Z/n, Q8".into())
}

/// Degree over F_p of the field generated by `xs`, computed from powers.
fn generated_degree(f: &FieldSpec, xs: &[GFElem]) -> u32 {
    let p = u64::from(f.p());
    (1..=f.k())
        .filter(|d| f.k() % d == 0)
        .find(|&d| xs.iter().all(|&x| f.pow(x, p.pow(d)) == x))
        .unwrap()
}

fn frobenius_closed(c: &CharVarCount) -> Result<usize, String> {
    let f = &c.field;
    let p = u64::from(f.p());
    let frob = |ch: &Character| Character { traces: ch.traces.iter().map(|&x| f.pow(x, p)).collect() };
    let mut partners = 0;
    for ch in &c.characters {
        let mut orbit = 1;
        let mut image = frob(ch);
        while image != *ch {
            ensure!(c.characters.contains(&image), "Frobenius image missing over F_{}", f.name());
            ensure!(orbit <= f.k(), "orbit longer than the field degree");
            image = frob(&image);
            orbit += 1;
        }
        let degree = generated_degree(f, &ch.traces);
        ensure!(orbit == degree, "orbit {orbit} vs trace degree {degree} over F_{}", f.name());
        if degree == 2 {
            ensure!(frob(ch) != *ch, "degree-2 character fixed by Frobenius");
            partners += 1;
        }
    }
    Ok(partners)
}

// 4. Frobenius permutes characters with orbit size = trace-field degree.
fn frobenius_orbits() -> Outcome {
    let mut checked = 0;
    let mut refused = 0;
    for (name, p) in corpus_entries() {
        for (pr, k) in [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1), (5, 2)] {
            match count_characters(&p, &field(pr, k), &opts(4)) {
                Ok(c) => {
                    frobenius_closed(&c).map_err(|e| format!("{name}: {e}"))?;
                    checked += 1;
                }
                Err(e) if is_refusal(&e) => refused += 1,
                Err(e) => return Err(format!("{name}: {e}")),
            }
        }
    }
    // A filling whose characters over F_9 all have quadratic traces.
    let fig8 = parse(corpus::get("fig8").unwrap()).unwrap();
    let filled = fig8.dehn_fill(FillingSlope::new(1, 2).unwrap(), SlopeConvention::QmPl).unwrap();
    let c = count_characters(&filled, &field(3, 2), &opts(4)).map_err(|e| e.to_string())?;
    let partners = frobenius_closed(&c)?;
    ensure!(partners >= 2, "fig8(1/2) over F_9 has {partners} quadratic characters");
    Ok(format!("{checked} character sets, {refused} non-rigid refusals, {partners} paired on fig8(1/2)"))
}

// 5. Counts never drop from F_p to F_{p^2}, and characters embed.
fn tower_monotonicity() -> Outcome {
    let mut towers = 0;
    for (name, p) in corpus_entries() {
        for pr in [2u64, 3, 5, 7] {
            let (small, large) = (field(pr, 1), field(pr, 2));
            let lo = match count_characters(&p, &small, &opts(4)) {
                Ok(c) => c,
                Err(e) if is_refusal(&e) => continue,
                Err(e) => return Err(e.to_string()),
            };
            let hi = match count_characters(&p, &large, &opts(4)) {
                Ok(c) => c,
                Err(e) if is_refusal(&e) => continue,
                Err(e) => return Err(e.to_string()),
            };
            ensure!(
                lo.char_count <= hi.char_count,
                "{name}: {} over F_{pr} but {} over F_{pr}^2",
                lo.char_count,
                hi.char_count
            );
            for ch in &lo.characters {
                let image = Character {
                    traces: ch.traces.iter().map(|&x| embed(x, &small, &large).unwrap()).collect(),
                };
                ensure!(hi.characters.contains(&image), "{name}: character lost from F_{pr} to F_{pr}^2");
            }
            towers += 1;
        }
    }
    ensure!(towers >= 30, "only {towers} towers computed");
    Ok(format!("{towers} towers"))
}

fn det2(m: &[Vec<i64>]) -> i64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

// 6. Homology separates fig8 fillings 1/q, q = 2..7.
fn homology_certificates() -> Outcome {
    let fig8 = parse(corpus::get("fig8").unwrap()).unwrap();
    let options = opts(4);
    let mut prints = Vec::new();
    for q in 2..=7i64 {
        let filled = fig8.dehn_fill(FillingSlope::new(1, q).unwrap(), SlopeConvention::QmPl).unwrap();
        let inv = filled.abelianize();
        ensure!(inv.free_rank == 0, "1/{q}: infinite H1");
        ensure!(inv.torsion_order() == BigInt::from(q), "1/{q}: torsion order {}", inv.torsion_order());
        // Independent oracle: for a square relation matrix |H1| = |det|.
        let m = filled.relation_matrix();
        ensure!(m.len() == 2 && det2(&m).abs() == q, "1/{q}: determinant {}", det2(&m));
        prints.push(fingerprint(&filled, &[3], 1, &options).map_err(|e| e.to_string())?);
    }
    let mut pairs = 0;
    for i in 0..prints.len() {
        for j in i + 1..prints.len() {
            let v = compare(&prints[i], &prints[j]).map_err(|e| e.to_string())?;
            ensure!(
                v.kind == VerdictKind::Distinguished && v.tier == Tier::Certified,
                "1/{} vs 1/{}: {:?}/{:?}",
                i + 2,
                j + 2,
                v.kind,
                v.tier
            );
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs certified"))
}

fn points(f: &FieldSpec, n: usize) -> Vec<Vec<GFElem>> {
    let elems: Vec<GFElem> = f.elements().collect();
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                elems.iter().map(move |&e| {
                    let mut w = v.clone();
                    w.push(e);
                    w
                })
            })
            .collect();
    }
    out
}

/// Entries of every relator-satisfying tuple, by direct enumeration.
fn variety(p: &Presentation, f: &FieldSpec) -> BTreeSet<Vec<GFElem>> {
    let g = sl2_elements(f, u64::MAX).unwrap();
    let mut tuples: Vec<Vec<Mat2>> = vec![vec![]];
    for _ in 0..p.rank() {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                g.iter().map(move |m| {
                    let mut u = t.clone();
                    u.push(*m);
                    u
                })
            })
            .collect();
    }
    tuples
        .into_iter()
        .filter(|t| satisfies_relators(p, f, t))
        .map(|t| t.iter().flat_map(Mat2::entries).collect())
        .collect()
}

// 7. REP defines exactly the representation variety; text and ideal agree.
fn compiler_soundness() -> Outcome {
    let t = TupleVars::default();
    let mut points_checked = 0usize;
    for (name, p) in corpus_entries().into_iter().filter(|(_, p)| p.rank() <= 2) {
        let rep = build_rep(&p, &t).map_err(|e| e.to_string())?;
        let names = t.names(p.rank());
        ensure!(parse_formula(&emit_text(&rep)).ok() == Some(rep.clone()), "{name}: REP text round trip");
        for sem in [ConjSemantics::Closure, ConjSemantics::Literal] {
            for n in 0..=2 {
                let s = build_sigma(&p, n, sem).map_err(|e| e.to_string())?;
                ensure!(parse_formula(&emit_text(&s)).ok() == Some(s), "{name}: sigma n={n} round trip");
            }
        }
        let ideal = emit_ideal(&p).map_err(|e| e.to_string())?;
        for (pr, k) in [(2, 1), (3, 1)] {
            let f = field(pr, k);
            let want = variety(&p, &f);
            let mut by_formula = BTreeSet::new();
            let mut by_ideal = BTreeSet::new();
            for v in points(&f, 4 * p.rank()) {
                let env = names.iter().cloned().zip(v.iter().copied()).collect();
                if eval_formula(&rep, &f, &env, DEFAULT_GUARD).map_err(|e| e.to_string())? {
                    by_formula.insert(v.clone());
                }
                if pr == 3 && ideal.vanishes_at(&f, &v) {
                    by_ideal.insert(v);
                }
                points_checked += 1;
            }
            ensure!(by_formula == want, "{name} over F_{pr}: {} REP points vs {} reps", by_formula.len(), want.len());
            if pr == 3 {
                ensure!(by_ideal == want, "{name}: ideal cuts out {} points vs {}", by_ideal.len(), want.len());
            }
        }
    }
    Ok(format!("{points_checked} assignments"))
}

// 8. Sigma for Q8 over F_3 holds exactly at n = 1.
fn sigma_exclusivity() -> Outcome {
    let q8 = parse(corpus::get("q8").unwrap()).unwrap();
    let f = field(3, 1);
    let empty = Default::default();
    let mut used = Vec::new();
    for (n, want) in [(0, false), (1, true), (2, false)] {
        let s = build_sigma(&q8, n, ConjSemantics::Closure).map_err(|e| e.to_string())?;
        let out = evaluate(&s, &f, &empty, DEFAULT_GUARD).map_err(|e| e.to_string())?;
        ensure!(out.value == want, "n = {n}: {}", out.value);
        ensure!(out.assignments <= DEFAULT_GUARD, "n = {n}: {} assignments", out.assignments);
        used.push(out.assignments);
    }
    let s = build_sigma(&q8, 1, ConjSemantics::Closure).unwrap();
    let tight = used[1] - 1;
    match evaluate(&s, &f, &empty, tight) {
        Err(AcfcError::GuardExceeded { guard }) => ensure!(guard == tight, "guard reported as {guard}"),
        other => return Err(format!("guard {tight} not enforced: {other:?}")),
    }
    ensure!(evaluate(&s, &f, &empty, used[1]).is_ok(), "exact guard rejected");
    Ok(format!("assignments {used:?}"))
}

fn run_cli(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_charvar"))
        .arg("--json")
        .args(args)
        .env_remove("CHARVAR_CEILING")
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(out.status.success(), "{args:?} exited {:?}", out.status.code());
    let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    let v: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    ensure!(v["timing_ms"].is_u64(), "{args:?}: no timing field");
    Ok(text.lines().filter(|l| !l.trim_start().starts_with("\"timing_ms\"")).collect::<Vec<_>>().join("\n"))
}

// 9. The binary's JSON is byte-identical across runs and worker counts.
fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("charvar-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let filled = dir.join("fig8_1_3.pres");
    let filled = filled.to_str().unwrap();
    run_cli(&["fill", "corpus:fig8", "--slope", "1/3", "-o", filled])?;

    let fixed: Vec<Vec<&str>> = vec![
        vec!["parse", "corpus:fig8"],
        vec!["parse", filled],
        vec!["fill", "corpus:fig8", "--slope", "1/3"],
        vec!["compile", "corpus:q8", "--n", "1", "--eval", "3"],
        vec!["compile", "corpus:fig8", "--emit", "ideal"],
    ];
    let parallel: Vec<Vec<&str>> = vec![
        vec!["count", "corpus:fig8", "--field", "7"],
        vec!["count", "corpus:q8", "--field", "9"],
        vec!["count", filled, "--field", "9"],
        vec!["stabilize", "corpus:q8", "--prime", "5", "--max-k", "2"],
        vec!["stabilize", "corpus:free2", "--prime", "3", "--max-k", "2"],
        vec!["distinguish", "corpus:zmod2", "corpus:zmod3"],
        vec!["distinguish", "corpus:q8", "corpus:q8", "--primes", "3,5", "--max-k", "2"],
        vec!["oracle-check", "--cases", "10"],
    ];
    let mut runs = 0;
    for args in &fixed {
        let a = run_cli(args)?;
        ensure!(a == run_cli(args)?, "{args:?} differs between runs");
        runs += 2;
    }
    for args in &parallel {
        let mut base = None;
        for w in ["1", "4", "1", "4"] {
            let mut full = args.clone();
            full.extend(["--workers", w]);
            let out = run_cli(&full)?;
            match &base {
                None => base = Some(out),
                Some(b) => ensure!(*b == out, "{args:?} differs at --workers {w}"),
            }
            runs += 1;
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("{runs} invocations"))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "SL(2,q) enumeration", limit: Some(Duration::from_secs(1)), run: sl2_enumeration },
        Criterion { id: 2, name: "pruned vs naive oracle", limit: Some(Duration::from_secs(60)), run: oracle_equivalence },
        Criterion { id: 3, name: "known counts", limit: Some(Duration::from_secs(120)), run: known_counts },
        Criterion { id: 4, name: "Frobenius orbits", limit: None, run: frobenius_orbits },
        Criterion { id: 5, name: "tower monotonicity", limit: None, run: tower_monotonicity },
        Criterion { id: 6, name: "homology certificates", limit: Some(Duration::from_secs(5)), run: homology_certificates },
        Criterion { id: 7, name: "compiler soundness", limit: Some(Duration::from_secs(60)), run: compiler_soundness },
        Criterion { id: 8, name: "sigma exclusivity", limit: Some(Duration::from_secs(30)), run: sigma_exclusivity },
        Criterion { id: 9, name: "determinism", limit: None, run: determinism },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let result = match (result, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            (r, _) => r,
        };
        let (tag, detail) = match &result {
            Ok(d) => ("PASS", d.clone()),
            Err(e) => ("FAIL", e.clone()),
        };
        let limit = c.limit.map(|l| format!(" / {l:?}")).unwrap_or_default();
        println!("[{tag}] {}. {:<24} {:>9.2?}{limit:<6}  {detail}", c.id, c.name, elapsed);
        failed += usize::from(result.is_err());
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
