use std::collections::BTreeMap;
use std::fmt::Write as _;

use charvar_core::distinguish::{FingerprintSummary, Verdict};
use charvar_core::presentation::{AbelianInvariants, Presentation, SlopeConvention};
use charvar_core::repvar::{CountSummary, LevelSummary, OracleCase};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

/// Envelope around every command result. Apart from `timing_ms` it is a
/// pure function of the inputs and the serialized options.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub schema_version: u32,
    pub input_hash: String,
    pub command: String,
    pub options: BTreeMap<String, serde_json::Value>,
    pub payload: Payload,
    pub timing_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationDump {
    pub generators: Vec<String>,
    pub relators: Vec<String>,
    pub peripheral: Option<Peripheral>,
    pub abelian: AbelianInvariants,
    pub abelian_text: String,
    pub structural_hash: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Peripheral {
    pub meridian: String,
    pub longitude: String,
}

impl PresentationDump {
    pub fn new(p: &Presentation) -> Self {
        let names = p.generators();
        let abelian = p.abelianize();
        PresentationDump {
            generators: names.to_vec(),
            relators: p.relators().iter().map(|r| r.render(names)).collect(),
            peripheral: p.peripheral().map(|(m, l)| Peripheral {
                meridian: m.render(names),
                longitude: l.render(names),
            }),
            abelian_text: abelian.to_string(),
            abelian,
            structural_hash: p.structural_hash(),
            text: p.render(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalSummary {
    pub field: String,
    pub value: bool,
    pub assignments: u64,
    pub guard: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Presentation(PresentationDump),
    Fill {
        slope: String,
        convention: SlopeConvention,
        filling_relator: String,
        original_abelian: String,
        filled: PresentationDump,
    },
    Count {
        #[serde(flatten)]
        count: CountSummary,
        frobenius_closed: bool,
    },
    Tower {
        prime: u64,
        max_k: u32,
        levels: Vec<LevelSummary>,
    },
    Formula {
        n: usize,
        semantics: String,
        size: usize,
        quantifier_depth: usize,
        text: String,
        evaluation: Option<EvalSummary>,
    },
    Ideal {
        variables: Vec<String>,
        polynomials: Vec<String>,
        text: String,
    },
    Distinguish {
        left: FingerprintSummary,
        right: FingerprintSummary,
        verdict: Verdict,
        text: String,
    },
    Oracle {
        seed: u64,
        cases: usize,
        fields: Vec<String>,
        checked: usize,
        passed: bool,
        first_counterexample: Option<OracleCase>,
    },
}

pub fn sha256_hex(chunks: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for c in chunks {
        h.update((c.len() as u64).to_le_bytes());
        h.update(c);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// JSON with `timing_ms` zeroed, for reproducibility checks.
    pub fn to_json_without_timing(&self) -> String {
        Report { timing_ms: 0, ..self.clone() }.to_json()
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {} {} ({}, input {})", self.tool, self.command, self.version, &self.input_hash[..12]);
        match &self.payload {
            Payload::Presentation(d) => dump_text(&mut out, d),
            Payload::Fill { slope, filling_relator, original_abelian, filled, .. } => {
                let _ = writeln!(out, "slope {slope}: added relator {filling_relator}");
                let _ = writeln!(out, "H1 before: {original_abelian}");
                dump_text(&mut out, filled);
            }
            Payload::Count { count, frobenius_closed } => {
                let _ = writeln!(out, "field F_{} (modulus {})", count.field.name, count.field.modulus);
                let _ = writeln!(out, "absolutely irreducible characters: {}", count.char_count);
                let _ = writeln!(out, "tuples scanned: {}", count.rep_tuples_scanned);
                for (d, n) in &count.per_degree {
                    let _ = writeln!(out, "  trace field degree {d}: {n}");
                }
                for c in &count.characters {
                    let _ = writeln!(out, "  ({})", c.join(", "));
                }
                let _ = writeln!(out, "frobenius closed: {frobenius_closed}");
            }
            Payload::Tower { prime, levels, .. } => {
                let _ = writeln!(out, "tower over p = {prime}");
                for l in levels {
                    match l {
                        LevelSummary::Counted(c) => {
                            let _ = writeln!(
                                out,
                                "  F_{}: {}{}",
                                c.field.name,
                                c.char_count,
                                if c.stable { " (stable)" } else { "" }
                            );
                        }
                        LevelSummary::Skipped { field, reason } => {
                            let _ = writeln!(out, "  F_{field}: skipped ({reason})");
                        }
                    }
                }
            }
            Payload::Formula { text, evaluation, .. } => {
                let _ = writeln!(out, "{text}");
                if let Some(e) = evaluation {
                    let _ = writeln!(out, "# over F_{}: {} ({} assignments, guard {})", e.field, e.value, e.assignments, e.guard);
                }
            }
            Payload::Ideal { text, .. } => out.push_str(text),
            Payload::Distinguish { text, .. } => out.push_str(text),
            Payload::Oracle { seed, checked, passed, first_counterexample, .. } => {
                let _ = writeln!(out, "seed {seed}: {checked} comparisons, {}", if *passed { "all agree" } else { "MISMATCH" });
                if let Some(c) = first_counterexample {
                    let _ = writeln!(out, "counterexample over F_{}: {} (pruned {:?}, naive {:?})", c.field, c.presentation.trim().replace('\n', " "), c.pruned, c.naive);
                }
            }
        }
        out
    }
}

fn dump_text(out: &mut String, d: &PresentationDump) {
    let _ = writeln!(out, "generators: {}", d.generators.join(" "));
    let _ = writeln!(out, "relators: {}", d.relators.len());
    for r in &d.relators {
        let _ = writeln!(out, "  {r}");
    }
    if let Some(p) = &d.peripheral {
        let _ = writeln!(out, "peripheral: m = {}, l = {}", p.meridian, p.longitude);
    }
    let _ = writeln!(out, "H1: {}", d.abelian_text);
}
