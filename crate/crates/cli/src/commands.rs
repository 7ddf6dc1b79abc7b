use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use charvar_core::acfc::{self, ConjSemantics};
use charvar_core::distinguish::{compare, fingerprint};
use charvar_core::gf::{make_field, parse_field_name, FieldSpec};
use charvar_core::presentation::{parse, FillingSlope, Presentation, SlopeConvention};
use charvar_core::repvar::{
    count_characters, frobenius_orbit_check, oracle_suite, stabilize, EnumOptions, TowerLevel,
};
use serde_json::{json, Value};

use crate::corpus;
use crate::error::CliError;
use crate::report::{sha256_hex, EvalSummary, Payload, PresentationDump, Report, SCHEMA_VERSION};

/// Environment variable overriding the default tuple budget.
pub const CEILING_ENV: &str = "CHARVAR_CEILING";

/// Presentation text plus where it came from.
#[derive(Debug, Clone)]
pub struct Source {
    pub label: String,
    pub text: String,
}

impl Source {
    /// `corpus:NAME` selects a bundled example; anything else is a path.
    pub fn load(spec: &str) -> Result<Source, CliError> {
        if let Some(name) = spec.strip_prefix("corpus:") {
            let text = corpus::get(name).ok_or_else(|| {
                let known: Vec<&str> = corpus::names().collect();
                CliError::Usage(format!("no bundled example `{name}` (have: {})", known.join(", ")))
            })?;
            return Ok(Source { label: format!("{name}.pres"), text: text.to_string() });
        }
        let text = std::fs::read_to_string(spec).map_err(|source| CliError::Io {
            path: spec.to_string(),
            source,
        })?;
        Ok(Source { label: spec.to_string(), text })
    }

    pub fn presentation(&self) -> Result<Presentation, CliError> {
        parse(&self.text).map_err(|e| CliError::Parse(format!("{}: {e}", self.label)))
    }

    fn hash(&self) -> String {
        sha256_hex(&[self.text.as_bytes()])
    }
}

/// Search options shared by the counting commands.
#[derive(Debug, Clone, Copy)]
pub struct Engine {
    pub ceiling: u64,
    pub prune: bool,
    pub workers: usize,
}

impl Default for Engine {
    fn default() -> Self {
        let d = EnumOptions::default();
        Engine { ceiling: d.ceiling, prune: d.prune, workers: d.workers }
    }
}

impl Engine {
    fn options(&self) -> EnumOptions {
        EnumOptions { ceiling: self.ceiling, prune: self.prune, workers: self.workers }
    }

    // Worker count is deliberately left out: it never changes results.
    fn record(&self, opts: &mut BTreeMap<String, Value>) {
        opts.insert("ceiling".into(), json!(self.ceiling));
        opts.insert("prune".into(), json!(self.prune));
    }
}

pub fn parse_field(name: &str) -> Result<FieldSpec, CliError> {
    let (p, k) = parse_field_name(name)
        .ok_or_else(|| CliError::Usage(format!("bad field `{name}`; expected p or p^k")))?;
    Ok(make_field(p, k)?)
}

fn report(command: &str, input_hash: String, options: BTreeMap<String, Value>, payload: Payload, start: Instant) -> Report {
    Report {
        tool: "charvar".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        schema_version: SCHEMA_VERSION,
        input_hash,
        command: command.into(),
        options,
        payload,
        timing_ms: start.elapsed().as_millis() as u64,
    }
}

pub fn cmd_parse(src: &Source) -> Result<Report, CliError> {
    let start = Instant::now();
    let p = src.presentation()?;
    Ok(report("parse", src.hash(), BTreeMap::new(), Payload::Presentation(PresentationDump::new(&p)), start))
}

pub fn cmd_fill(
    src: &Source,
    slope: &str,
    convention: SlopeConvention,
    output: Option<&Path>,
) -> Result<Report, CliError> {
    let start = Instant::now();
    let p = src.presentation()?;
    let slope: FillingSlope = slope.parse().map_err(CliError::Usage)?;
    let filled = p.dehn_fill(slope, convention)?;
    if let Some(path) = output {
        std::fs::write(path, filled.render()).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    let added = filled.relators().last().expect("filling adds a relator");
    let options = BTreeMap::from([
        ("slope".to_string(), json!(slope.to_string())),
        ("slope_convention".to_string(), json!(convention)),
    ]);
    let payload = Payload::Fill {
        slope: slope.to_string(),
        convention,
        filling_relator: added.render(filled.generators()),
        original_abelian: p.abelianize().to_string(),
        filled: PresentationDump::new(&filled),
    };
    Ok(report("fill", src.hash(), options, payload, start))
}

pub fn cmd_count(src: &Source, field: &str, engine: &Engine) -> Result<Report, CliError> {
    let start = Instant::now();
    let p = src.presentation()?;
    let f = parse_field(field)?;
    let c = count_characters(&p, &f, &engine.options())?;
    let mut options = BTreeMap::from([("field".to_string(), json!(f.name()))]);
    engine.record(&mut options);
    let payload = Payload::Count { frobenius_closed: frobenius_orbit_check(&c), count: c.summary() };
    Ok(report("count", src.hash(), options, payload, start))
}

pub fn cmd_stabilize(src: &Source, prime: u64, max_k: u32, engine: &Engine) -> Result<Report, CliError> {
    let start = Instant::now();
    let p = src.presentation()?;
    if max_k == 0 {
        return Err(CliError::Usage("--max-k must be at least 1".into()));
    }
    let levels = stabilize(&p, prime, max_k, &engine.options())?;
    let mut options = BTreeMap::from([
        ("prime".to_string(), json!(prime)),
        ("max_k".to_string(), json!(max_k)),
    ]);
    engine.record(&mut options);
    let payload = Payload::Tower {
        prime,
        max_k,
        levels: levels.iter().map(TowerLevel::summary).collect(),
    };
    Ok(report("stabilize", src.hash(), options, payload, start))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Emit {
    Sigma,
    Ideal,
}

#[derive(Debug, Clone)]
pub struct CompileArgs {
    pub emit: Emit,
    pub n: usize,
    pub semantics: ConjSemantics,
    /// Evaluate the sentence over this field after emitting it.
    pub eval_field: Option<String>,
    pub guard: u64,
}

impl Default for CompileArgs {
    fn default() -> Self {
        CompileArgs {
            emit: Emit::Sigma,
            n: 1,
            semantics: ConjSemantics::default(),
            eval_field: None,
            guard: acfc::DEFAULT_GUARD,
        }
    }
}

pub fn cmd_compile(src: &Source, args: &CompileArgs) -> Result<Report, CliError> {
    let start = Instant::now();
    let p = src.presentation()?;
    let mut options = BTreeMap::new();
    let payload = match args.emit {
        Emit::Ideal => {
            options.insert("emit".to_string(), json!("ideal"));
            let ideal = acfc::emit_ideal(&p)?;
            Payload::Ideal {
                polynomials: ideal.polynomials.iter().map(|q| q.render(&ideal.variables)).collect(),
                text: ideal.to_text(),
                variables: ideal.variables,
            }
        }
        Emit::Sigma => {
            options.insert("emit".to_string(), json!("sigma"));
            options.insert("n".to_string(), json!(args.n));
            options.insert("semantics".to_string(), json!(args.semantics));
            let sigma = acfc::build_sigma(&p, args.n, args.semantics)?;
            let text = acfc::emit_text(&sigma);
            if acfc::parse_formula(&text)? != sigma {
                return Err(CliError::Internal("emitted sentence does not reparse to itself".into()));
            }
            let evaluation = match &args.eval_field {
                None => None,
                Some(name) => {
                    let f = parse_field(name)?;
                    options.insert("eval_field".to_string(), json!(f.name()));
                    options.insert("guard".to_string(), json!(args.guard));
                    let out = acfc::evaluate(&sigma, &f, &BTreeMap::new(), args.guard)?;
                    Some(EvalSummary {
                        field: f.name(),
                        value: out.value,
                        assignments: out.assignments,
                        guard: args.guard,
                    })
                }
            };
            Payload::Formula {
                n: args.n,
                semantics: format!("{:?}", args.semantics).to_lowercase(),
                size: sigma.size(),
                quantifier_depth: sigma.quantifier_depth(),
                text,
                evaluation,
            }
        }
    };
    Ok(report("compile", src.hash(), options, payload, start))
}

pub fn cmd_distinguish(
    a: &Source,
    b: &Source,
    primes: &[u64],
    max_k: u32,
    engine: &Engine,
) -> Result<Report, CliError> {
    let start = Instant::now();
    let (pa, pb) = (a.presentation()?, b.presentation()?);
    let fa = fingerprint(&pa, primes, max_k, &engine.options())?;
    let fb = fingerprint(&pb, primes, max_k, &engine.options())?;
    let verdict = compare(&fa, &fb)?;
    let mut options = BTreeMap::from([
        ("primes".to_string(), json!(fa.meta.options.primes)),
        ("max_k".to_string(), json!(max_k)),
    ]);
    engine.record(&mut options);
    let payload = Payload::Distinguish {
        left: fa.summary(),
        right: fb.summary(),
        text: verdict.render_text(),
        verdict,
    };
    let hash = sha256_hex(&[a.text.as_bytes(), b.text.as_bytes()]);
    Ok(report("distinguish", hash, options, payload, start))
}

pub fn cmd_oracle_check(
    seed: u64,
    cases: usize,
    fields: &[String],
    engine: &Engine,
    inject_fault: bool,
) -> Result<Report, CliError> {
    let start = Instant::now();
    let specs = fields.iter().map(|f| parse_field(f)).collect::<Result<Vec<_>, _>>()?;
    let results = oracle_suite(seed, cases, &specs, &engine.options(), inject_fault);
    let first_bad = results.iter().find(|c| !c.agree).cloned();
    let mut options = BTreeMap::from([
        ("seed".to_string(), json!(seed)),
        ("cases".to_string(), json!(cases)),
        ("fields".to_string(), json!(specs.iter().map(FieldSpec::name).collect::<Vec<_>>())),
    ]);
    if inject_fault {
        options.insert("inject_fault".to_string(), json!(true));
    }
    engine.record(&mut options);
    let payload = Payload::Oracle {
        seed,
        cases,
        fields: specs.iter().map(FieldSpec::name).collect(),
        checked: results.len(),
        passed: first_bad.is_none(),
        first_counterexample: first_bad,
    };
    Ok(report("oracle-check", sha256_hex(&[]), options, payload, start))
}
