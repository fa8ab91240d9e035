//! Loader for the line-oriented group table.

use std::collections::BTreeMap;

use super::pattern::Pattern;
use super::Category;
use crate::{Error, Result};

#[derive(Clone, Debug)]
enum Piece {
    Lit(String),
    Cap(usize),
    Map(String, usize),
}

/// One output of a rewrite rule, e.g. `VP$1B{q:$3}`.
#[derive(Clone, Debug)]
pub(crate) struct Template(Vec<Piece>);

#[derive(Clone, Debug)]
pub struct Rule {
    pub pattern: Pattern,
    pub(crate) outputs: Vec<Template>,
}

#[derive(Clone, Debug)]
pub struct GroupDef {
    pub id: String,
    pub category: Category,
    pub legacy: Pattern,
    pub proposed: Pattern,
    pub rules: Vec<Rule>,
}

pub(crate) type Maps = BTreeMap<String, BTreeMap<String, String>>;

#[derive(Clone, Debug)]
pub struct GroupTable {
    pub(crate) maps: Maps,
    pub groups: Vec<GroupDef>,
}

fn integrity(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Integrity(format!("group table line {line}: {msg}"))
}

impl GroupTable {
    pub fn parse(text: &str) -> Result<GroupTable> {
        let mut maps = Maps::new();
        let mut groups: Vec<GroupDef> = Vec::new();
        let mut cur: Option<Section> = None;
        for (i, raw) in text.lines().enumerate() {
            let n = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("map ") {
                let mut words = rest.split_whitespace();
                let name = words.next().ok_or_else(|| integrity(n, "map without a name"))?;
                let mut entries = BTreeMap::new();
                for w in words {
                    let (k, v) = w.split_once('=').ok_or_else(|| integrity(n, format!("bad map entry '{w}'")))?;
                    let k = if k == "_" { "" } else { k };
                    entries.insert(k.to_string(), v.to_string());
                }
                if maps.insert(name.to_string(), entries).is_some() {
                    return Err(integrity(n, format!("duplicate map {name}")));
                }
            } else if let Some(id) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                if let Some(sec) = cur.take() {
                    groups.push(sec.finish(&maps, &groups)?);
                }
                cur = Some(Section::new(n, id.trim()));
            } else {
                let Some(section) = cur.as_mut() else {
                    return Err(integrity(n, "entry outside a group section"));
                };
                if let Some(rule) = line.strip_prefix("rule ") {
                    section.rules.push((n, rule.to_string()));
                    continue;
                }
                let (key, value) = line
                    .split_once('=')
                    .ok_or_else(|| integrity(n, format!("expected 'key = value', got '{line}'")))?;
                let value = value.trim();
                let pattern = || Pattern::parse(value).map_err(|e| integrity(n, e));
                match key.trim() {
                    "category" => {
                        section.category = Some(value.parse().map_err(|e| integrity(n, e))?);
                    }
                    "legacy" => section.legacy = Some(pattern()?),
                    "proposed" => section.proposed = Some(pattern()?),
                    other => return Err(integrity(n, format!("unknown key '{other}'"))),
                }
            }
        }
        if let Some(sec) = cur.take() {
            groups.push(sec.finish(&maps, &groups)?);
        }
        if groups.is_empty() {
            return Err(Error::Integrity("group table defines no groups".into()));
        }
        Ok(GroupTable { maps, groups })
    }

    pub fn group(&self, id: &str) -> Option<&GroupDef> {
        self.groups.iter().find(|g| g.id == id)
    }
}

struct Section {
    line: usize,
    id: String,
    category: Option<Category>,
    legacy: Option<Pattern>,
    proposed: Option<Pattern>,
    rules: Vec<(usize, String)>,
}

impl Section {
    fn new(line: usize, id: &str) -> Section {
        Section {
            line,
            id: id.to_string(),
            category: None,
            legacy: None,
            proposed: None,
            rules: Vec::new(),
        }
    }

    fn finish(self, maps: &Maps, done: &[GroupDef]) -> Result<GroupDef> {
        let (line, id) = (self.line, self.id);
        let missing = |what: &str| integrity(line, format!("[{id}] has no {what}"));
        if done.iter().any(|g| g.id == id) {
            return Err(integrity(line, format!("duplicate group {id}")));
        }
        Ok(GroupDef {
            category: self.category.ok_or_else(|| missing("category"))?,
            legacy: self.legacy.ok_or_else(|| missing("legacy pattern"))?,
            proposed: self.proposed.ok_or_else(|| missing("proposed pattern"))?,
            rules: self
                .rules
                .into_iter()
                .map(|(n, r)| parse_rule(&r, maps).map_err(|m| integrity(n, m)))
                .collect::<Result<_>>()?,
            id,
        })
    }
}

fn parse_rule(text: &str, maps: &Maps) -> std::result::Result<Rule, String> {
    let (lhs, rhs) = text.split_once("=>").ok_or("rule needs '=>'")?;
    let pattern = Pattern::parse(lhs.trim()).map_err(|e| e.to_string())?;
    let outputs = rhs
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|t| parse_template(t, pattern.groups(), maps))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(Rule { pattern, outputs })
}

fn parse_template(t: &str, groups: usize, maps: &Maps) -> std::result::Result<Template, String> {
    let mut pieces = Vec::new();
    let mut rest = t;
    let cap = |digits: &str| -> std::result::Result<usize, String> {
        match digits.parse::<usize>() {
            Ok(i) if (1..=groups).contains(&i) => Ok(i),
            _ => Err(format!("template '{t}' refers to missing capture ${digits}")),
        }
    };
    while !rest.is_empty() {
        if let Some(r) = rest.strip_prefix('$') {
            let end = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
            pieces.push(Piece::Cap(cap(&r[..end])?));
            rest = &r[end..];
        } else if let Some(r) = rest.strip_prefix('{') {
            let end = r.find('}').ok_or_else(|| format!("unclosed '{{' in '{t}'"))?;
            let (name, c) = r[..end]
                .split_once(":$")
                .ok_or_else(|| format!("expected {{map:$n}} in '{t}'"))?;
            if !maps.contains_key(name) {
                return Err(format!("unknown map '{name}'"));
            }
            pieces.push(Piece::Map(name.to_string(), cap(c)?));
            rest = &r[end + 1..];
        } else {
            let end = rest.find(['$', '{']).unwrap_or(rest.len());
            let lit = &rest[..end];
            if !lit.bytes().all(|b| b.is_ascii_uppercase() || b.is_ascii_digit()) {
                return Err(format!("bad literal '{lit}' in '{t}'"));
            }
            pieces.push(Piece::Lit(lit.to_string()));
            rest = &rest[end..];
        }
    }
    Ok(Template(pieces))
}

impl Rule {
    /// Outputs for `m`, or `None` when the rule does not match.
    pub(crate) fn apply(&self, m: &str, maps: &Maps) -> Option<Result<Vec<String>>> {
        let caps = self.pattern.captures(m)?;
        Some(
            self.outputs
                .iter()
                .map(|Template(pieces)| {
                    let mut s = String::new();
                    for p in pieces {
                        match p {
                            Piece::Lit(l) => s.push_str(l),
                            Piece::Cap(i) => s.push_str(&caps[*i]),
                            Piece::Map(name, i) => {
                                let v = maps[name].get(&caps[*i]).ok_or_else(|| {
                                    Error::Integrity(format!(
                                        "map {name} has no entry for '{}' (rule {}, mnemonic {m})",
                                        caps[*i],
                                        self.pattern.source()
                                    ))
                                })?;
                                s.push_str(v);
                            }
                        }
                    }
                    Ok(s)
                })
                .collect(),
        )
    }
}
