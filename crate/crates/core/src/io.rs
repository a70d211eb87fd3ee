//! Field and group files, and CSV report emission.
//!
//! A field file is JSON: `{"label", "poly": [c0, ..., cn], "overrides": {"p":
//! [[e, f], ...]}}` with `overrides` optional. A group file is JSON:
//! `{"degree", "generators": [[...]], "subgroups": {name: [entry, ...]}}`
//! where each entry is a generator index or an explicit permutation.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::Poly;
use crate::error::{Error, Result};
use crate::gassmann::{Perm, PermGroup, Subgroup};
use crate::number_field::{NumberField, SplittingType};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldFile {
    pub label: String,
    pub poly: Vec<i64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub overrides: BTreeMap<String, Vec<[u32; 2]>>,
}

impl FieldFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_field(&self) -> Result<NumberField> {
        let mut overrides = BTreeMap::new();
        for (p, pairs) in &self.overrides {
            let p: u64 = p.parse().map_err(|_| Error::Parse(format!("override key {p:?} is not a prime")))?;
            overrides.insert(p, SplittingType::new(pairs.iter().map(|&[e, f]| (e, f)).collect()));
        }
        let poly = Poly::new(self.poly.iter().map(|&c| BigInt::from(c)).collect());
        NumberField::new(self.label.clone(), poly, overrides)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("field file serializes") + "\n"
    }
}

pub fn load_field(path: impl AsRef<Path>) -> Result<NumberField> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    FieldFile::parse(&text)?.to_field()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SubgroupEntry {
    Generator(usize),
    Perm(Perm),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub degree: usize,
    pub generators: Vec<Perm>,
    #[serde(default)]
    pub subgroups: BTreeMap<String, Vec<SubgroupEntry>>,
}

impl GroupFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Generates the group and every named subgroup.
    pub fn build(&self) -> Result<(PermGroup, BTreeMap<String, Subgroup>)> {
        let group = PermGroup::generate(self.degree, self.generators.clone())?;
        let mut subgroups = BTreeMap::new();
        for (name, entries) in &self.subgroups {
            let gens = entries
                .iter()
                .map(|e| match e {
                    SubgroupEntry::Generator(i) => self
                        .generators
                        .get(*i)
                        .cloned()
                        .ok_or_else(|| Error::Parse(format!("subgroup {name}: no generator {i}"))),
                    SubgroupEntry::Perm(p) => Ok(p.clone()),
                })
                .collect::<Result<Vec<_>>>()?;
            subgroups.insert(name.clone(), group.subgroup(&gens)?);
        }
        Ok((group, subgroups))
    }
}

pub fn load_group(path: impl AsRef<Path>) -> Result<(PermGroup, BTreeMap<String, Subgroup>)> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    GroupFile::parse(&text)?.build()
}

/// A CSV table preceded by `# key=value` comment lines.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { meta: Vec::new(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            out.push_str(&format!("# {k}={v}\n"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8"));
        out
    }

    /// Column-aligned text.
    pub fn to_pretty(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            out.push_str(&format!("{k}: {v}\n"));
        }
        let mut widths: Vec<usize> = self.header.iter().map(String::len).collect();
        for r in &self.rows {
            for (i, c) in r.iter().enumerate() {
                if i < widths.len() {
                    widths[i] = widths[i].max(c.len());
                }
            }
        }
        let line = |cells: &[String]| {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
                + "\n"
        };
        out.push_str(&line(&self.header));
        for r in &self.rows {
            out.push_str(&line(r));
        }
        out
    }
}

/// Writes `contents` to `path` through a temporary sibling file and a rename,
/// so readers never see a partial file.
pub fn write_atomic(path: impl AsRef<Path>, contents: &str) -> Result<()> {
    let path = path.as_ref();
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| Error::Io(format!("{} has no file name", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(Error::from)
}
