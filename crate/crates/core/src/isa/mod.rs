//! AVX10.2 mnemonic classification and rewriting into a takum-based
//! nomenclature.
//!
//! The shipped instruction list is the source of truth; the legacy patterns
//! in the group table classify it, the proposed patterns define the renamed
//! set and the ordered rules map one onto the other.

mod pattern;
mod table;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

pub use pattern::{expand_pattern, Pattern};
pub use table::{GroupDef, GroupTable, Rule};

use crate::{Error, Result};

/// The shipped AVX10.2 mnemonic list.
pub const LEGACY_LIST: &str = include_str!("../../data/isa/avx10_2.txt");
/// The shipped group table.
pub const GROUP_TABLE: &str = include_str!("../../data/isa/groups.txt");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    Bitwise,
    Mask,
    Integer,
    FloatingPoint,
    Cryptographic,
}

impl Category {
    pub const ALL: [Category; 5] = [
        Category::Bitwise,
        Category::Mask,
        Category::Integer,
        Category::FloatingPoint,
        Category::Cryptographic,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Category::Bitwise => "bitwise",
            Category::Mask => "mask",
            Category::Integer => "integer",
            Category::FloatingPoint => "floating_point",
            Category::Cryptographic => "cryptographic",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Category::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown category '{s}'"))
    }
}

/// An instruction name: non-empty, over `[A-Z0-9]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mnemonic(String);

impl Mnemonic {
    /// Accepts lower case and surrounding whitespace.
    pub fn new(text: &str) -> Result<Mnemonic> {
        let t = text.trim().to_ascii_uppercase();
        if t.is_empty() || !t.bytes().all(|b| b.is_ascii_uppercase() || b.is_ascii_digit()) {
            return Err(Error::Usage(format!("'{text}' is not a mnemonic")));
        }
        Ok(Mnemonic(t))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Mnemonic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Mnemonic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mnemonic::new(s)
    }
}

/// Per-category counts of a classified list.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CategoryCounts {
    pub total: usize,
    pub by_category: BTreeMap<Category, usize>,
}

impl CategoryCounts {
    pub fn get(&self, c: Category) -> usize {
        self.by_category.get(&c).copied().unwrap_or(0)
    }
}

impl fmt::Display for CategoryCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "total {}", self.total)?;
        for c in Category::ALL {
            writeln!(f, "{c} {}", self.get(c))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classified {
    pub mnemonic: Mnemonic,
    pub group: String,
    pub category: Category,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum DiffKind {
    /// Already in the proposed set.
    Unchanged,
    Renamed,
    /// No proposed counterpart.
    Removed,
    /// Proposed but not the direct image of any legacy mnemonic.
    Added,
}

impl DiffKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            DiffKind::Unchanged => "unchanged",
            DiffKind::Renamed => "renamed",
            DiffKind::Removed => "removed",
            DiffKind::Added => "added",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffRow {
    pub kind: DiffKind,
    pub group: String,
    pub legacy: Option<String>,
    pub proposed: Option<String>,
}

#[derive(Clone, Debug, Default)]
pub struct DiffReport {
    pub rows: Vec<DiffRow>,
}

impl DiffReport {
    /// Distinct legacy or proposed mnemonics per kind.
    pub fn count(&self, kind: DiffKind) -> usize {
        let set: BTreeSet<_> = self
            .rows
            .iter()
            .filter(|r| r.kind == kind)
            .map(|r| if kind == DiffKind::Added { &r.proposed } else { &r.legacy })
            .collect();
        set.len()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("kind,group,legacy,proposed\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                r.kind.as_str(),
                r.group,
                r.legacy.as_deref().unwrap_or(""),
                r.proposed.as_deref().unwrap_or("")
            ));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for kind in [DiffKind::Unchanged, DiffKind::Renamed, DiffKind::Removed, DiffKind::Added] {
            out.push_str(&format!("{}: {}\n", kind.as_str(), self.count(kind)));
        }
        let mut renamed: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for r in &self.rows {
            match (r.kind, &r.legacy, &r.proposed) {
                (DiffKind::Renamed, Some(l), Some(p)) => renamed.entry(l).or_default().push(p),
                (DiffKind::Removed, Some(l), _) => out.push_str(&format!("- {l} ({})\n", r.group)),
                (DiffKind::Added, _, Some(p)) => out.push_str(&format!("+ {p} ({})\n", r.group)),
                _ => {}
            }
        }
        for (l, ps) in renamed {
            out.push_str(&format!("~ {l} -> {}\n", ps.join(" ")));
        }
        out
    }
}

/// A loaded legacy list and group table.
#[derive(Clone, Debug)]
pub struct Isa {
    legacy: Vec<Mnemonic>,
    table: GroupTable,
    proposed: BTreeSet<String>,
}

impl Isa {
    /// The embedded list and table.
    pub fn shipped() -> Result<Isa> {
        Isa::from_sources(LEGACY_LIST, GROUP_TABLE)
    }

    pub fn load(list: &Path, groups: &Path) -> Result<Isa> {
        let read = |p: &Path| std::fs::read_to_string(p).map_err(|e| Error::io(p, e));
        Isa::from_sources(&read(list)?, &read(groups)?)
    }

    pub fn from_sources(list: &str, groups: &str) -> Result<Isa> {
        let table = GroupTable::parse(groups)?;
        let legacy = parse_list(list)?;
        let proposed = table.groups.iter().flat_map(|g| g.proposed.expand()).collect();
        Ok(Isa {
            legacy,
            table,
            proposed,
        })
    }

    pub fn table(&self) -> &GroupTable {
        &self.table
    }

    pub fn legacy(&self) -> &[Mnemonic] {
        &self.legacy
    }

    /// The unique group whose legacy pattern matches `m`.
    pub fn classify(&self, m: &Mnemonic) -> Result<&GroupDef> {
        let hits: Vec<&GroupDef> = self.table.groups.iter().filter(|g| g.legacy.is_match(m.as_str())).collect();
        match hits.as_slice() {
            [g] => Ok(g),
            [] => Err(Error::Unclassified {
                mnemonic: m.to_string(),
                nearest: self.nearest_groups(m.as_str(), 3).join(", "),
            }),
            many => Err(Error::Integrity(format!(
                "{m} matches several groups: {}",
                many.iter().map(|g| g.id.as_str()).collect::<Vec<_>>().join(", ")
            ))),
        }
    }

    /// Group ids ordered by edit distance from `m` to the closest member of
    /// their legacy language.
    fn nearest_groups(&self, m: &str, k: usize) -> Vec<String> {
        let mut scored: Vec<(usize, &GroupDef)> = self
            .table
            .groups
            .iter()
            .map(|g| {
                let d = g.legacy.expand().iter().map(|s| strsim::levenshtein(m, s)).min().unwrap_or(usize::MAX);
                (d, g)
            })
            .collect();
        scored.sort_by_key(|(d, _)| *d);
        scored
            .into_iter()
            .take(k)
            .map(|(_, g)| format!("{} {}", g.id, g.legacy.source()))
            .collect()
    }

    /// Classifies the whole legacy list, failing on the first mnemonic that
    /// does not land in exactly one group.
    pub fn classify_all(&self) -> Result<Vec<Classified>> {
        self.legacy
            .iter()
            .map(|m| {
                let g = self.classify(m)?;
                Ok(Classified {
                    mnemonic: m.clone(),
                    group: g.id.clone(),
                    category: g.category,
                })
            })
            .collect()
    }

    pub fn enumerate_legacy(&self) -> Result<(Vec<Classified>, CategoryCounts)> {
        let all = self.classify_all()?;
        let mut counts = CategoryCounts {
            total: all.len(),
            ..Default::default()
        };
        for c in &all {
            *counts.by_category.entry(c.category).or_default() += 1;
        }
        Ok((all, counts))
    }

    /// Union of every proposed language, sorted.
    pub fn enumerate_proposed(&self) -> &BTreeSet<String> {
        &self.proposed
    }

    /// Direct image of `m` under its group's rules. Proposed mnemonics map to
    /// themselves; an empty set means the instruction has no counterpart.
    pub fn rewrite(&self, m: &Mnemonic) -> Result<BTreeSet<String>> {
        if self.proposed.contains(m.as_str()) {
            return Ok(BTreeSet::from([m.to_string()]));
        }
        let g = self.classify(m)?;
        for rule in &g.rules {
            if let Some(out) = rule.apply(m.as_str(), &self.table.maps) {
                return Ok(out?.into_iter().collect());
            }
        }
        Err(Error::Integrity(format!("no rule in {} rewrites {m}", g.id)))
    }

    /// [`rewrite`](Self::rewrite) plus every member of the same group's
    /// proposed language that differs from a direct image only in its
    /// width digits.
    pub fn rewrite_generalised(&self, m: &Mnemonic) -> Result<BTreeSet<String>> {
        let direct = self.rewrite(m)?;
        let lang = match self.classify(m) {
            Ok(g) => g.proposed.expand(),
            Err(_) => self.proposed.clone(),
        };
        let shapes: BTreeSet<String> = direct.iter().map(|s| skeleton(s)).collect();
        let mut out = direct;
        out.extend(lang.into_iter().filter(|p| shapes.contains(&skeleton(p))));
        Ok(out)
    }

    pub fn diff(&self) -> Result<DiffReport> {
        let mut rows = Vec::new();
        let mut image = BTreeSet::new();
        for m in &self.legacy {
            let group = self.classify(m)?.id.clone();
            let out = self.rewrite(m)?;
            let legacy = Some(m.to_string());
            if out.is_empty() {
                rows.push(DiffRow {
                    kind: DiffKind::Removed,
                    group,
                    legacy,
                    proposed: None,
                });
                continue;
            }
            for p in &out {
                let kind = if p == m.as_str() { DiffKind::Unchanged } else { DiffKind::Renamed };
                rows.push(DiffRow {
                    kind,
                    group: group.clone(),
                    legacy: legacy.clone(),
                    proposed: Some(p.clone()),
                });
            }
            image.extend(out);
        }
        for g in &self.table.groups {
            for p in g.proposed.expand() {
                if !image.contains(&p) && !rows.iter().any(|r| r.kind == DiffKind::Added && r.proposed.as_ref() == Some(&p)) {
                    rows.push(DiffRow {
                        kind: DiffKind::Added,
                        group: g.id.clone(),
                        legacy: None,
                        proposed: Some(p),
                    });
                }
            }
        }
        Ok(DiffReport { rows })
    }
}

/// `mnemonic,group,category` rows.
pub fn classification_csv(rows: &[Classified]) -> String {
    let mut out = String::from("mnemonic,group,category\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", r.mnemonic, r.group, r.category));
    }
    out
}

/// Digit runs collapsed to `#`.
fn skeleton(s: &str) -> String {
    let mut out = String::new();
    for c in s.chars() {
        if c.is_ascii_digit() {
            if !out.ends_with('#') {
                out.push('#');
            }
        } else {
            out.push(c);
        }
    }
    out
}

fn parse_list(text: &str) -> Result<Vec<Mnemonic>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let m = Mnemonic::new(line)
            .map_err(|_| Error::Integrity(format!("instruction list line {}: bad mnemonic '{line}'", i + 1)))?;
        if !seen.insert(m.clone()) {
            return Err(Error::Integrity(format!("instruction list line {}: duplicate {m}", i + 1)));
        }
        out.push(m);
    }
    if out.is_empty() {
        return Err(Error::Integrity("instruction list is empty".into()));
    }
    Ok(out)
}
