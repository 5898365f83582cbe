//! Project files: one JSON document holding the orbit universe, named trees,
//! an optional count table and computation options.

use serde::{Deserialize, Serialize};
use sft_core::cobordism::{validate_cobordism_tree, CobordismTree};
use sft_core::homology::{build_generators, validate_counts, CountTable, Cutoff};
use sft_core::rational::serde_opt_q;
use sft_core::trees::validate_tree;
use sft_core::{DecoratedTree, Error, OrbitUniverse, Q};
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;

fn default_schema() -> u32 {
    SCHEMA_VERSION
}

/// A tree entry. When any star map is present the entry is a cobordism tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeEntry {
    #[serde(flatten)]
    pub tree: DecoratedTree,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_star: Option<BTreeMap<String, u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vstar_plus: Option<BTreeMap<String, u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vstar_minus: Option<BTreeMap<String, u8>>,
}

impl TreeEntry {
    pub fn is_cobordism(&self) -> bool {
        self.edge_star.is_some() || self.vstar_plus.is_some() || self.vstar_minus.is_some()
    }

    pub fn cobordism(&self) -> Option<CobordismTree> {
        self.is_cobordism().then(|| CobordismTree {
            tree: self.tree.clone(),
            edge_star: self.edge_star.clone().unwrap_or_default(),
            vstar_plus: self.vstar_plus.clone().unwrap_or_default(),
            vstar_minus: self.vstar_minus.clone().unwrap_or_default(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Breaking {
    pub positive: String,
    pub negative: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default, with = "serde_opt_q", skip_serializing_if = "Option::is_none")]
    pub cutoff_action: Option<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff_length: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_plus: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_minus: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectInput {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub universe: OrbitUniverse,
    #[serde(default)]
    pub trees: BTreeMap<String, TreeEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<CountTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub breakings: Option<Vec<Breaking>>,
    #[serde(default)]
    pub options: Options,
}

/// Problem with the input file, located by a JSON pointer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputError {
    pub pointer: String,
    pub message: String,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pointer.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.pointer, self.message)
        }
    }
}

impl InputError {
    pub fn new(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        InputError { pointer: pointer.into(), message: message.into() }
    }

    fn core(pointer: impl Into<String>, e: &Error) -> Self {
        InputError::new(pointer, e.to_string())
    }
}

fn escape_token(s: &str) -> String {
    s.replace('~', "~0").replace('/', "~1")
}

/// Converts a serde path into an RFC 6901 pointer.
pub fn pointer_of(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", escape_token(key))),
            Segment::Enum { variant } => out.push_str(&format!("/{}", escape_token(variant))),
            Segment::Unknown => {}
        }
    }
    out
}

pub fn parse_input(text: &str) -> Result<ProjectInput, InputError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let input: ProjectInput = serde_path_to_error::deserialize(de).map_err(|e| {
        let pointer = pointer_of(e.path());
        InputError::new(pointer, e.into_inner().to_string())
    })?;
    check_input(&input)?;
    Ok(input)
}

pub fn load_input(path: &Path) -> Result<ProjectInput, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError::new("", format!("cannot read {}: {e}", path.display())))?;
    parse_input(&text)
}

/// Count validation reports `/counts/k: message`; rebase the location onto
/// the file layout, where entries live under `/counts/counts`.
fn count_error(e: &Error) -> InputError {
    if let Error::Invalid(m) = e {
        if let Some((k, msg)) = m.strip_prefix("/counts/").and_then(|r| r.split_once(": ")) {
            return InputError::new(format!("/counts/counts/{k}"), msg);
        }
    }
    InputError::core("/counts/counts", e)
}

/// Runs every module-level validator over a parsed input.
pub fn check_input(input: &ProjectInput) -> Result<(), InputError> {
    if input.schema != SCHEMA_VERSION {
        return Err(InputError::new("/schema", format!("unsupported schema {}, expected {SCHEMA_VERSION}", input.schema)));
    }
    input.universe.validate().map_err(|e| InputError::core("/universe", &e))?;
    for (name, entry) in &input.trees {
        let at = format!("/trees/{}", escape_token(name));
        let r = validate_tree(&entry.tree, Some(&input.universe));
        if !r.valid() {
            let (loc, msg) = r.diagnostics.first().map_or((String::new(), "invalid tree".to_string()), |d| (d.location.clone(), d.message.clone()));
            return Err(InputError::new(format!("{at}{loc}"), msg));
        }
        if let Some(c) = entry.cobordism() {
            let r = validate_cobordism_tree(&c);
            if !r.valid {
                return Err(InputError::new(at, r.diagnostics.join("; ")));
            }
        }
    }
    if let Some(counts) = &input.counts {
        let basis = build_generators(&input.universe, &Cutoff::length(1)).map_err(|e| InputError::core("/counts", &e))?;
        validate_counts(&input.universe, &basis, counts).map_err(|e| count_error(&e))?;
    }
    if let Some(bs) = &input.breakings {
        for (k, b) in bs.iter().enumerate() {
            for id in std::iter::once(&b.positive).chain(&b.negative) {
                if !input.universe.contains(id) {
                    return Err(InputError::new(format!("/breakings/{k}"), format!("unknown orbit `{id}`")));
                }
            }
        }
    }
    if let Some(p) = input.options.p {
        if !sft_core::grading::is_prime(p) {
            return Err(InputError::new("/options/p", format!("{p} is not prime")));
        }
    }
    Ok(())
}
