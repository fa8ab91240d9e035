//! Finite patterns: literals, `(a|b)` capturing groups, `?` and `[a,b]` lists.

use std::collections::BTreeSet;

use regex::Regex;

use crate::{Error, Result};

#[derive(Clone, Debug)]
enum Node {
    Lit(String),
    /// Alternatives; `capture` is false for `[a,b]` lists.
    Alt { arms: Vec<Vec<Node>>, capture: bool },
    Opt(Box<Node>),
}

/// A parsed pattern together with its anchored regex.
#[derive(Clone, Debug)]
pub struct Pattern {
    source: String,
    seq: Vec<Node>,
    regex: Regex,
    groups: usize,
}

impl Pattern {
    pub fn parse(source: &str) -> Result<Pattern> {
        let mut p = Parser {
            src: source,
            chars: source.chars().collect(),
            pos: 0,
            groups: 0,
        };
        let seq = p.alternation_top()?;
        let mut re = String::from("^(?:");
        emit(&seq, &mut re);
        re.push_str(")$");
        let regex = Regex::new(&re).map_err(|e| p.err(&e.to_string()))?;
        Ok(Pattern {
            source: source.to_string(),
            seq,
            regex,
            groups: p.groups,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Number of capturing groups.
    pub fn groups(&self) -> usize {
        self.groups
    }

    pub fn is_match(&self, s: &str) -> bool {
        self.regex.is_match(s)
    }

    /// Captures 1..=groups of a whole-string match; groups that did not take
    /// part come back empty.
    pub fn captures(&self, s: &str) -> Option<Vec<String>> {
        let caps = self.regex.captures(s)?;
        Some(
            (0..=self.groups)
                .map(|i| caps.get(i).map_or(String::new(), |m| m.as_str().to_string()))
                .collect(),
        )
    }

    /// The finite language, sorted and de-duplicated.
    pub fn expand(&self) -> BTreeSet<String> {
        expand_seq(&self.seq).into_iter().collect()
    }
}

/// Expands a pattern into its sorted finite language.
pub fn expand_pattern(source: &str) -> Result<Vec<String>> {
    Ok(Pattern::parse(source)?.expand().into_iter().collect())
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
    groups: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::UnsupportedPattern {
            pattern: self.src.to_string(),
            msg: msg.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn alternation_top(&mut self) -> Result<Vec<Node>> {
        let arms = self.arms(None)?;
        if self.pos != self.chars.len() {
            return Err(self.err(&format!("unexpected '{}' at {}", self.chars[self.pos], self.pos)));
        }
        if arms.len() == 1 {
            Ok(arms.into_iter().next().unwrap())
        } else {
            Ok(vec![Node::Alt { arms, capture: false }])
        }
    }

    /// Parses `a|b|...` up to `close` (not consumed).
    fn arms(&mut self, close: Option<char>) -> Result<Vec<Vec<Node>>> {
        let mut arms = vec![self.sequence()?];
        while self.peek() == Some('|') {
            self.pos += 1;
            arms.push(self.sequence()?);
        }
        match (self.peek(), close) {
            (Some(c), Some(want)) if c == want => Ok(arms),
            (None, None) => Ok(arms),
            (Some(')'), None) => Err(self.err("unbalanced ')'")),
            (_, Some(want)) => Err(self.err(&format!("missing '{want}'"))),
            (Some(c), None) => Err(self.err(&format!("unexpected '{c}'"))),
        }
    }

    fn sequence(&mut self) -> Result<Vec<Node>> {
        let mut seq: Vec<Node> = Vec::new();
        while let Some(c) = self.peek() {
            let node = match c {
                '|' | ')' => break,
                '(' => {
                    self.pos += 1;
                    self.groups += 1;
                    let arms = self.arms(Some(')'))?;
                    self.pos += 1;
                    Node::Alt { arms, capture: true }
                }
                '[' => self.list()?,
                '?' => {
                    self.pos += 1;
                    let last = seq.pop().ok_or_else(|| self.err("'?' with nothing to repeat"))?;
                    let opt = match last {
                        // `?` binds to the final character of a literal run.
                        Node::Lit(mut s) if s.chars().count() > 1 => {
                            let ch = s.pop().unwrap();
                            seq.push(Node::Lit(s));
                            Node::Opt(Box::new(Node::Lit(ch.to_string())))
                        }
                        Node::Opt(_) => return Err(self.err("repeated '?'")),
                        other => Node::Opt(Box::new(other)),
                    };
                    seq.push(opt);
                    continue;
                }
                '*' | '+' | '{' => return Err(self.err(&format!("unbounded repetition '{c}'"))),
                c if c.is_ascii_alphanumeric() => {
                    self.pos += 1;
                    match seq.last_mut() {
                        Some(Node::Lit(s)) => {
                            s.push(c.to_ascii_uppercase());
                            continue;
                        }
                        _ => Node::Lit(c.to_ascii_uppercase().to_string()),
                    }
                }
                c => return Err(self.err(&format!("unsupported character '{c}'"))),
            };
            seq.push(node);
        }
        Ok(seq)
    }

    /// `[a,b,c]`: a non-capturing choice between literal words.
    fn list(&mut self) -> Result<Node> {
        self.pos += 1;
        let mut arms = vec![String::new()];
        loop {
            match self.peek() {
                Some(']') => break,
                Some(',') => arms.push(String::new()),
                Some(c) if c.is_ascii_alphanumeric() => arms.last_mut().unwrap().push(c.to_ascii_uppercase()),
                Some(c) => return Err(self.err(&format!("unsupported character '{c}' in list"))),
                None => return Err(self.err("missing ']'")),
            }
            self.pos += 1;
        }
        self.pos += 1;
        Ok(Node::Alt {
            arms: arms.into_iter().map(|a| vec![Node::Lit(a)]).collect(),
            capture: false,
        })
    }
}

fn emit(seq: &[Node], out: &mut String) {
    for node in seq {
        match node {
            Node::Lit(s) => out.push_str(s),
            Node::Alt { arms, capture } => {
                out.push_str(if *capture { "(" } else { "(?:" });
                for (i, arm) in arms.iter().enumerate() {
                    if i > 0 {
                        out.push('|');
                    }
                    emit(arm, out);
                }
                out.push(')');
            }
            Node::Opt(inner) => {
                if matches!(**inner, Node::Lit(_)) {
                    out.push_str("(?:");
                    emit(std::slice::from_ref(inner), out);
                    out.push_str(")?");
                } else {
                    emit(std::slice::from_ref(inner), out);
                    out.push('?');
                }
            }
        }
    }
}

fn expand_seq(seq: &[Node]) -> Vec<String> {
    let mut acc = vec![String::new()];
    for node in seq {
        let tails = expand_node(node);
        acc = acc
            .iter()
            .flat_map(|head| tails.iter().map(move |t| format!("{head}{t}")))
            .collect();
    }
    acc
}

fn expand_node(node: &Node) -> Vec<String> {
    match node {
        Node::Lit(s) => vec![s.clone()],
        Node::Alt { arms, .. } => arms.iter().flat_map(|a| expand_seq(a)).collect(),
        Node::Opt(inner) => {
            let mut v = vec![String::new()];
            v.extend(expand_node(inner));
            v
        }
    }
}
