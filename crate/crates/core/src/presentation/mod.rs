//! Finite group presentations `<gens | relators>` with optional peripheral data.

mod parse;
mod snf;
mod word;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use parse::parse;
pub use snf::{smith_normal_form, smith_normal_form_i64};
pub use word::{free_reduce, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("duplicate generator `{name}` at {line}:{col}")]
    DuplicateGenerator { name: String, line: usize, col: usize },
    #[error("unknown symbol `{name}` at {line}:{col}")]
    UnknownSymbol { name: String, line: usize, col: usize },
    #[error("invalid generator name `{0}`")]
    InvalidName(String),
    #[error("word refers to generator {gen} but only {count} exist")]
    GeneratorOutOfRange { gen: usize, count: usize },
    #[error("presentation has no peripheral pair")]
    MissingPeripheral,
    #[error("invalid filling slope {p}/{q}")]
    InvalidSlope { p: i64, q: i64 },
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A finite presentation. Relators are freely reduced but not cyclically
/// reduced; see [`Presentation::cyclically_reduced`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<String>,
    relators: Vec<Word>,
    peripheral: Option<(Word, Word)>,
}

impl Presentation {
    pub fn new(
        generators: Vec<String>,
        relators: Vec<Word>,
        peripheral: Option<(Word, Word)>,
    ) -> Result<Self, PresentationError> {
        for (i, g) in generators.iter().enumerate() {
            if !valid_name(g) {
                return Err(PresentationError::InvalidName(g.clone()));
            }
            if generators[..i].contains(g) {
                return Err(PresentationError::DuplicateGenerator {
                    name: g.clone(),
                    line: 0,
                    col: 0,
                });
            }
        }
        let count = generators.len();
        let words = relators
            .iter()
            .chain(peripheral.iter().flat_map(|(m, l)| [m, l]));
        for w in words {
            if let Some(gen) = w.max_gen().filter(|&g| g >= count) {
                return Err(PresentationError::GeneratorOutOfRange { gen, count });
            }
        }
        Ok(Presentation {
            generators,
            relators,
            peripheral,
        })
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn peripheral(&self) -> Option<(&Word, &Word)> {
        self.peripheral.as_ref().map(|(m, l)| (m, l))
    }

    /// Same group with every relator cyclically reduced.
    pub fn cyclically_reduced(&self) -> Presentation {
        Presentation {
            relators: self.relators.iter().map(Word::cyclically_reduced).collect(),
            ..self.clone()
        }
    }

    pub fn with_relator(&self, r: Word) -> Result<Presentation, PresentationError> {
        let mut relators = self.relators.clone();
        relators.push(r);
        Presentation::new(self.generators.clone(), relators, self.peripheral.clone())
    }

    /// Renames generators; structure is unchanged.
    pub fn renamed(&self, names: Vec<String>) -> Result<Presentation, PresentationError> {
        assert_eq!(names.len(), self.generators.len());
        Presentation::new(names, self.relators.clone(), self.peripheral.clone())
    }

    /// Text form accepted by [`parse`].
    pub fn render(&self) -> String {
        let mut out = String::new();
        if !self.generators.is_empty() {
            out.push_str(&format!("gens {};\n", self.generators.join(" ")));
        }
        for r in &self.relators {
            out.push_str(&format!("rel {};\n", r.render(&self.generators)));
        }
        if let Some((m, l)) = &self.peripheral {
            out.push_str(&format!(
                "per m = {}, l = {};\n",
                m.render(&self.generators),
                l.render(&self.generators)
            ));
        }
        out
    }

    /// SHA-256 over the index-level structure only, so renaming generators
    /// does not change it.
    pub fn structural_hash(&self) -> String {
        let mut h = Sha256::new();
        let put_word = |h: &mut Sha256, w: &Word| {
            h.update((w.len() as u64).to_le_bytes());
            for l in w.letters() {
                h.update((l.gen as u64).to_le_bytes());
                h.update([u8::from(l.inverse)]);
            }
        };
        h.update((self.generators.len() as u64).to_le_bytes());
        h.update((self.relators.len() as u64).to_le_bytes());
        for r in &self.relators {
            put_word(&mut h, r);
        }
        match &self.peripheral {
            Some((m, l)) => {
                h.update([1]);
                put_word(&mut h, m);
                put_word(&mut h, l);
            }
            None => h.update([0]),
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Relator exponent-sum matrix, one row per relator.
    pub fn relation_matrix(&self) -> Vec<Vec<i64>> {
        self.relators
            .iter()
            .map(|r| r.exponent_sums(self.rank()))
            .collect()
    }

    pub fn abelianize(&self) -> AbelianInvariants {
        let diag = smith_normal_form_i64(&self.relation_matrix());
        let rank = diag.iter().filter(|d| !d.is_zero()).count();
        AbelianInvariants {
            torsion: diag.into_iter().filter(|d| *d > BigInt::one()).collect(),
            free_rank: self.rank() - rank,
        }
    }

    /// Appends the filling relator for `slope`. The default convention kills
    /// `meridian^q * longitude^p`.
    pub fn dehn_fill(
        &self,
        slope: FillingSlope,
        convention: SlopeConvention,
    ) -> Result<Presentation, PresentationError> {
        let (m, l) = self
            .peripheral
            .as_ref()
            .ok_or(PresentationError::MissingPeripheral)?;
        let (m_exp, l_exp) = match convention {
            SlopeConvention::QmPl => (slope.q, slope.p),
            SlopeConvention::PmQl => (slope.p, slope.q),
        };
        self.with_relator(m.pow(m_exp).concat(&l.pow(l_exp)))
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// A filling slope `p/q` with `gcd(|p|, |q|) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FillingSlope {
    pub p: i64,
    pub q: i64,
}

impl FillingSlope {
    pub fn new(p: i64, q: i64) -> Result<Self, PresentationError> {
        if p.gcd(&q) != 1 {
            return Err(PresentationError::InvalidSlope { p, q });
        }
        Ok(FillingSlope { p, q })
    }
}

impl std::str::FromStr for FillingSlope {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (p, q) = s
            .split_once('/')
            .ok_or_else(|| format!("slope `{s}` is not of the form p/q"))?;
        let p = p.trim().parse().map_err(|_| format!("bad numerator in `{s}`"))?;
        let q = q.trim().parse().map_err(|_| format!("bad denominator in `{s}`"))?;
        FillingSlope::new(p, q).map_err(|e| e.to_string())
    }
}

impl fmt::Display for FillingSlope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// Which peripheral word carries which slope coefficient.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum SlopeConvention {
    /// `m^q l^p`: meridian takes the denominator.
    #[default]
    QmPl,
    /// `m^p l^q`.
    PmQl,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianInvariants {
    #[serde(with = "bigint_strings")]
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

impl AbelianInvariants {
    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|t| format!("Z/{t}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

mod bigint_strings {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    // Decimal strings keep arbitrarily large invariants lossless in JSON.
    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|b| b.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        raw.iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}
