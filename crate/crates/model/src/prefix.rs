use std::collections::BTreeMap;
use std::fmt;

use crate::{Alphabet, Letter, ModelError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    L,
    R,
}

/// A finite partial tree: a prefix-closed set of nodes with letters.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FinitePrefix {
    label: BTreeMap<Vec<Dir>, Letter>,
}

impl FinitePrefix {
    pub fn insert(&mut self, node: Vec<Dir>, a: Letter) {
        self.label.insert(node, a);
    }

    pub fn get(&self, node: &[Dir]) -> Option<Letter> {
        self.label.get(node).copied()
    }

    pub fn len(&self) -> usize {
        self.label.len()
    }

    pub fn is_empty(&self) -> bool {
        self.label.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<Dir>, &Letter)> {
        self.label.iter()
    }

    /// Every node's parent belongs to the domain.
    pub fn is_prefix_closed(&self) -> bool {
        self.label.keys().all(|k| k.is_empty() || self.label.contains_key(&k[..k.len() - 1]))
    }

    /// Whether `self` is contained in `other` (same letters on shared nodes).
    pub fn is_subprefix_of(&self, other: &FinitePrefix) -> bool {
        self.label.iter().all(|(k, a)| other.label.get(k) == Some(a))
    }

    /// Parses `eps=a L=b LR=c`; `eps` (or `.`) names the root.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Self, ModelError> {
        let mut p = FinitePrefix::default();
        for item in text.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()) {
            let bad = || ModelError::Syntax { line: 1, msg: format!("bad prefix item {item:?}") };
            let (node, letter) = item.split_once('=').ok_or_else(bad)?;
            let mut path = Vec::new();
            if node != "eps" && node != "." {
                for c in node.chars() {
                    path.push(match c {
                        'L' => Dir::L,
                        'R' => Dir::R,
                        _ => return Err(bad()),
                    });
                }
            }
            let a = alphabet
                .index(letter)
                .ok_or_else(|| ModelError::UnknownLetter { line: 1, letter: letter.to_string() })?;
            p.insert(path, a);
        }
        if !p.is_empty() && !p.is_prefix_closed() {
            return Err(ModelError::Syntax { line: 1, msg: "prefix is not prefix-closed".into() });
        }
        Ok(p)
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        struct Show<'a>(&'a FinitePrefix, &'a Alphabet);
        impl fmt::Display for Show<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let mut first = true;
                for (k, &a) in &self.0.label {
                    if !first {
                        write!(f, " ")?;
                    }
                    first = false;
                    if k.is_empty() {
                        write!(f, "eps")?;
                    }
                    for d in k {
                        write!(f, "{}", if *d == Dir::L { 'L' } else { 'R' })?;
                    }
                    write!(f, "={}", self.1.name(a))?;
                }
                Ok(())
            }
        }
        Show(self, alphabet)
    }
}
