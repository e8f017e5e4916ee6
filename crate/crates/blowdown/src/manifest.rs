//! Plain-text manifests describing a lattice model: ambient form, named
//! vectors, sphere configurations, a chamber, and optional complement
//! basis and glue data.
//!
//! Grammar (one directive per line, `#` starts a comment):
//!
//! ```text
//! ambient <positive> <negative>       # must precede every vector
//! vector <name> <c0> <c1> ...         # h-coordinate first
//! config <name> <p> <sphere> ...      # spheres are vector names
//! chamber <name>
//! orientation <name>                  # optional; defaults to h
//! basis <name> ...                    # optional complement basis
//! glue <name> <denominator>           # optional glue vector
//! ```
//!
//! Parsing preserves directive order, so `parse -> to_text -> parse` is
//! the identity on the structure. [`Manifest::resolve`] turns names into
//! lattice data, and [`Manifest::to_json`] renders a deterministic JSON
//! mirror (object keys sorted, coordinates as numbers where they fit).

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::{ClassVector, Lattice};
use crate::rbd::CpConfiguration;
use crate::swchamber::ManifoldModel;

/// One manifest directive, in source order.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Entry {
    Ambient { positive: usize, negative: usize },
    Vector { name: String, coords: ClassVector },
    Config { name: String, p: u32, spheres: Vec<String> },
    Chamber { name: String },
    Orientation { name: String },
    Basis { names: Vec<String> },
    Glue { name: String, denominator: u32 },
}

/// A parsed manifest: an ordered list of directives with name lookups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Manifest {
    entries: Vec<Entry>,
}

fn parse_err(line: usize, reason: impl Into<String>) -> Error {
    Error::ManifestParse {
        line,
        reason: reason.into(),
    }
}

fn parse_int<T: std::str::FromStr>(line: usize, token: &str, what: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| parse_err(line, format!("expected {what}, found `{token}`")))
}

impl Manifest {
    /// Parses a manifest from text.
    pub fn parse(text: &str) -> Result<Manifest> {
        let mut entries: Vec<Entry> = Vec::new();
        let mut dim: Option<usize> = None;
        let mut names: Vec<String> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = content.split_whitespace().collect();
            let entry = match tokens[0] {
                "ambient" => {
                    if tokens.len() != 3 {
                        return Err(parse_err(line, "usage: ambient <positive> <negative>"));
                    }
                    if dim.is_some() {
                        return Err(parse_err(line, "ambient declared twice"));
                    }
                    let positive: usize = parse_int(line, tokens[1], "a count of +1 squares")?;
                    let negative: usize = parse_int(line, tokens[2], "a count of -1 squares")?;
                    dim = Some(positive + negative);
                    Entry::Ambient { positive, negative }
                }
                "vector" => {
                    let dim = dim.ok_or_else(|| {
                        parse_err(line, "vector declared before the ambient form")
                    })?;
                    if tokens.len() < 2 {
                        return Err(parse_err(line, "usage: vector <name> <c0> <c1> ..."));
                    }
                    let name = tokens[1].to_owned();
                    if names.contains(&name) {
                        return Err(parse_err(line, format!("duplicate name `{name}`")));
                    }
                    if tokens.len() - 2 != dim {
                        return Err(parse_err(
                            line,
                            format!("vector has {} coordinates, ambient rank is {dim}", tokens.len() - 2),
                        ));
                    }
                    let coords = tokens[2..]
                        .iter()
                        .map(|t| {
                            t.parse::<BigInt>()
                                .map_err(|_| parse_err(line, format!("expected an integer, found `{t}`")))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    names.push(name.clone());
                    Entry::Vector {
                        name,
                        coords: ClassVector::new(coords),
                    }
                }
                "config" => {
                    if tokens.len() < 4 {
                        return Err(parse_err(line, "usage: config <name> <p> <sphere> ..."));
                    }
                    let name = tokens[1].to_owned();
                    if names.contains(&name) {
                        return Err(parse_err(line, format!("duplicate name `{name}`")));
                    }
                    let p: u32 = parse_int(line, tokens[2], "a blow-down order")?;
                    let spheres: Vec<String> = tokens[3..].iter().map(|t| t.to_string()).collect();
                    for s in &spheres {
                        if !names.contains(s) {
                            return Err(parse_err(line, format!("unknown vector `{s}`")));
                        }
                    }
                    names.push(name.clone());
                    Entry::Config { name, p, spheres }
                }
                "chamber" | "orientation" => {
                    if tokens.len() != 2 {
                        return Err(parse_err(line, format!("usage: {} <name>", tokens[0])));
                    }
                    let name = tokens[1].to_owned();
                    if !names.contains(&name) {
                        return Err(parse_err(line, format!("unknown vector `{name}`")));
                    }
                    if tokens[0] == "chamber" {
                        Entry::Chamber { name }
                    } else {
                        Entry::Orientation { name }
                    }
                }
                "basis" => {
                    if tokens.len() < 2 {
                        return Err(parse_err(line, "usage: basis <name> ..."));
                    }
                    let list: Vec<String> = tokens[1..].iter().map(|t| t.to_string()).collect();
                    for s in &list {
                        if !names.contains(s) {
                            return Err(parse_err(line, format!("unknown vector `{s}`")));
                        }
                    }
                    Entry::Basis { names: list }
                }
                "glue" => {
                    if tokens.len() != 3 {
                        return Err(parse_err(line, "usage: glue <name> <denominator>"));
                    }
                    let name = tokens[1].to_owned();
                    if !names.contains(&name) {
                        return Err(parse_err(line, format!("unknown vector `{name}`")));
                    }
                    Entry::Glue {
                        name,
                        denominator: parse_int(line, tokens[2], "a denominator")?,
                    }
                }
                other => return Err(parse_err(line, format!("unknown directive `{other}`"))),
            };
            entries.push(entry);
        }
        if dim.is_none() {
            return Err(parse_err(0, "manifest has no ambient declaration"));
        }
        Ok(Manifest { entries })
    }

    /// Serializes back to the manifest grammar, in directive order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for entry in &self.entries {
            match entry {
                Entry::Ambient { positive, negative } => {
                    out.push_str(&format!("ambient {positive} {negative}\n"));
                }
                Entry::Vector { name, coords } => {
                    let nums: Vec<String> =
                        coords.coords().iter().map(|c| c.to_string()).collect();
                    out.push_str(&format!("vector {name} {}\n", nums.join(" ")));
                }
                Entry::Config { name, p, spheres } => {
                    out.push_str(&format!("config {name} {p} {}\n", spheres.join(" ")));
                }
                Entry::Chamber { name } => out.push_str(&format!("chamber {name}\n")),
                Entry::Orientation { name } => {
                    out.push_str(&format!("orientation {name}\n"));
                }
                Entry::Basis { names } => {
                    out.push_str(&format!("basis {}\n", names.join(" ")));
                }
                Entry::Glue { name, denominator } => {
                    out.push_str(&format!("glue {name} {denominator}\n"));
                }
            }
        }
        out
    }

    /// Ambient signature `(positive, negative)`.
    pub fn ambient(&self) -> (usize, usize) {
        for entry in &self.entries {
            if let Entry::Ambient { positive, negative } = entry {
                return (*positive, *negative);
            }
        }
        unreachable!("parse requires an ambient declaration")
    }

    /// Looks up a named vector.
    pub fn vector(&self, name: &str) -> Option<&ClassVector> {
        self.entries.iter().find_map(|e| match e {
            Entry::Vector { name: n, coords } if n == name => Some(coords),
            _ => None,
        })
    }

    /// All named vectors, in declaration order.
    pub fn vectors(&self) -> Vec<(&str, &ClassVector)> {
        self.entries
            .iter()
            .filter_map(|e| match e {
                Entry::Vector { name, coords } => Some((name.as_str(), coords)),
                _ => None,
            })
            .collect()
    }

    /// Deterministic JSON mirror: keys sorted, directive order preserved
    /// inside arrays, coordinates as numbers when they fit in 64 bits and
    /// decimal strings otherwise.
    pub fn to_json(&self) -> Value {
        let (positive, negative) = self.ambient();
        let vectors: Vec<Value> = self
            .entries
            .iter()
            .filter_map(|e| match e {
                Entry::Vector { name, coords } => Some(json!({
                    "name": name,
                    "coords": coords.coords().iter().map(big_to_json).collect::<Vec<_>>(),
                })),
                _ => None,
            })
            .collect();
        let configs: Vec<Value> = self
            .entries
            .iter()
            .filter_map(|e| match e {
                Entry::Config { name, p, spheres } => Some(json!({
                    "name": name,
                    "p": p,
                    "spheres": spheres,
                })),
                _ => None,
            })
            .collect();
        let mut doc = json!({
            "ambient": { "positive": positive, "negative": negative },
            "vectors": vectors,
            "configs": configs,
        });
        let obj = doc.as_object_mut().expect("document is an object");
        for entry in &self.entries {
            match entry {
                Entry::Chamber { name } => {
                    obj.insert("chamber".into(), json!(name));
                }
                Entry::Orientation { name } => {
                    obj.insert("orientation".into(), json!(name));
                }
                Entry::Basis { names } => {
                    obj.insert("basis".into(), json!(names));
                }
                Entry::Glue { name, denominator } => {
                    obj.insert(
                        "glue".into(),
                        json!({ "name": name, "denominator": denominator }),
                    );
                }
                _ => {}
            }
        }
        doc
    }

    /// Resolves names into lattice data.
    pub fn resolve(&self, label: impl Into<String>) -> Result<ResolvedManifest> {
        let (positive, negative) = self.ambient();
        let label = label.into();
        let ambient = Lattice::diagonal(positive, negative).with_label(&label);
        let lookup = |name: &str| -> Result<ClassVector> {
            self.vector(name)
                .cloned()
                .ok_or_else(|| Error::UnknownName {
                    name: name.to_owned(),
                })
        };
        let mut configs = Vec::new();
        let mut chamber = None;
        let mut orientation = None;
        let mut basis = None;
        let mut glue = None;
        for entry in &self.entries {
            match entry {
                Entry::Config { name, p, spheres } => {
                    let resolved = spheres
                        .iter()
                        .map(|s| lookup(s))
                        .collect::<Result<Vec<_>>>()?;
                    configs.push((name.clone(), CpConfiguration::new(*p, resolved)?));
                }
                Entry::Chamber { name } => chamber = Some(lookup(name)?),
                Entry::Orientation { name } => orientation = Some(lookup(name)?),
                Entry::Basis { names } => {
                    basis = Some(
                        names
                            .iter()
                            .map(|s| lookup(s))
                            .collect::<Result<Vec<_>>>()?,
                    );
                }
                Entry::Glue { name, denominator } => {
                    glue = Some((lookup(name)?, *denominator));
                }
                _ => {}
            }
        }
        let orientation =
            orientation.unwrap_or_else(|| ClassVector::standard_basis(positive + negative, 0));
        Ok(ResolvedManifest {
            ambient,
            label,
            configs,
            chamber,
            orientation,
            basis,
            glue,
        })
    }
}

/// A manifest with names resolved to vectors and forms.
#[derive(Clone, Debug)]
pub struct ResolvedManifest {
    pub ambient: Lattice,
    pub label: String,
    pub configs: Vec<(String, CpConfiguration)>,
    pub chamber: Option<ClassVector>,
    pub orientation: ClassVector,
    pub basis: Option<Vec<ClassVector>>,
    pub glue: Option<(ClassVector, u32)>,
}

impl ResolvedManifest {
    /// The manifold model for the ambient form and orientation class.
    pub fn model(&self) -> Result<ManifoldModel> {
        ManifoldModel::new(self.ambient.clone(), self.orientation.clone(), &self.label)
    }

    /// The named configuration, or the only one if `name` is `None`.
    pub fn config(&self, name: Option<&str>) -> Result<&CpConfiguration> {
        match name {
            Some(n) => self
                .configs
                .iter()
                .find(|(cn, _)| cn == n)
                .map(|(_, c)| c)
                .ok_or_else(|| Error::UnknownName { name: n.to_owned() }),
            None => match self.configs.as_slice() {
                [(_, only)] => Ok(only),
                [] => Err(Error::precondition("config", "manifest declares no configuration")),
                _ => Err(Error::precondition(
                    "config",
                    "manifest declares several configurations; name one",
                )),
            },
        }
    }
}

/// Converts a big integer to a JSON number when it fits, else a string.
pub(crate) fn big_to_json(n: &BigInt) -> Value {
    match i64::try_from(n) {
        Ok(v) => json!(v),
        Err(_) => json!(n.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{builtin_manifest, MANIFEST_NAMES};

    #[test]
    fn builtin_manifests_parse_and_round_trip() {
        for name in MANIFEST_NAMES {
            let text = builtin_manifest(name).unwrap();
            let parsed = Manifest::parse(text).unwrap_or_else(|e| panic!("{name}: {e}"));
            let reparsed = Manifest::parse(&parsed.to_text()).unwrap();
            assert_eq!(parsed, reparsed, "{name}: round trip through to_text");
        }
    }

    #[test]
    fn builtin_manifests_resolve() {
        for name in MANIFEST_NAMES {
            let parsed = Manifest::parse(builtin_manifest(name).unwrap()).unwrap();
            let resolved = parsed.resolve(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            let model = resolved.model().unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(model.label(), name);
        }
    }

    #[test]
    fn chain_manifest_matches_the_data_set() {
        let data = crate::dataset::builtin();
        let parsed = Manifest::parse(builtin_manifest("r11-c3").unwrap()).unwrap();
        let resolved = parsed.resolve("r11-c3").unwrap();
        assert_eq!(resolved.ambient.rank(), 12);
        let (name, config) = &resolved.configs[0];
        assert_eq!(name, "c3");
        assert_eq!(config.spheres(), data.q3_config.spheres());
        assert_eq!(resolved.chamber.as_ref(), Some(&data.q3_chamber));
        assert_eq!(
            resolved.basis.as_deref(),
            Some(data.q3_complement_basis.as_slice())
        );
        assert_eq!(resolved.glue.as_ref().map(|(v, d)| (v, *d)), Some((&data.q3_beta, 3)));
        assert_eq!(parsed.vector("K"), Some(&data.q3_k_up));
    }

    #[test]
    fn parse_rejects_malformed_input() {
        // Vector before ambient.
        assert!(matches!(
            Manifest::parse("vector v 1 0\nambient 1 1\n"),
            Err(Error::ManifestParse { line: 1, .. })
        ));
        // Wrong coordinate count.
        assert!(matches!(
            Manifest::parse("ambient 1 2\nvector v 1 0\n"),
            Err(Error::ManifestParse { line: 2, .. })
        ));
        // Unknown sphere name in a config.
        assert!(matches!(
            Manifest::parse("ambient 1 2\nvector v 1 0 0\nconfig c 3 v w\n"),
            Err(Error::ManifestParse { line: 3, .. })
        ));
        // Duplicate names.
        assert!(matches!(
            Manifest::parse("ambient 1 2\nvector v 1 0 0\nvector v 0 1 0\n"),
            Err(Error::ManifestParse { line: 3, .. })
        ));
        // No ambient at all.
        assert!(Manifest::parse("# nothing\n").is_err());
    }

    #[test]
    fn json_mirror_is_deterministic() {
        let parsed = Manifest::parse(builtin_manifest("r11-c3").unwrap()).unwrap();
        let a = serde_json::to_string(&parsed.to_json()).unwrap();
        let b = serde_json::to_string(&parsed.to_json()).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("\"chamber\":\"H\""));
        assert!(a.contains("\"denominator\":3"));
    }

    #[test]
    fn default_orientation_is_h() {
        let parsed = Manifest::parse("ambient 1 3\nvector H 2 -1 -1 -1\nchamber H\n").unwrap();
        let resolved = parsed.resolve("test").unwrap();
        assert_eq!(
            resolved.orientation,
            ClassVector::from_i64(&[1, 0, 0, 0])
        );
        let model = resolved.model().unwrap();
        assert_eq!(model.orientation(), &resolved.orientation);
    }
}
