use std::fmt;

use crate::ModelError;

/// Index of a letter inside its alphabet.
pub type Letter = usize;

/// A nonempty ordered set of letter names. Iteration follows declaration order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Vec<String>,
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self, ModelError> {
        if names.is_empty() {
            return Err(ModelError::Alphabet("empty alphabet".into()));
        }
        let mut letters: Vec<String> = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref();
            if n.is_empty() || n.chars().any(|c| c.is_whitespace() || c == '#' || c == ',') {
                return Err(ModelError::Alphabet(format!("bad letter name {n:?}")));
            }
            if letters.iter().any(|l| l == n) {
                return Err(ModelError::Alphabet(format!("duplicate letter {n}")));
            }
            letters.push(n.to_string());
        }
        Ok(Alphabet { letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn name(&self, a: Letter) -> &str {
        &self.letters[a]
    }

    pub fn index(&self, name: &str) -> Option<Letter> {
        self.letters.iter().position(|l| l == name)
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        0..self.letters.len()
    }

    pub fn names(&self) -> &[String] {
        &self.letters
    }

    /// The alphabet extended by the two marker letters used by the port
    /// encodings. `PORT` gets index `len()`, `PAD` gets `len() + 1`.
    pub fn extended(&self) -> Result<Alphabet, ModelError> {
        let mut names = self.letters.clone();
        names.push(crate::PORT.to_string());
        names.push(crate::PAD.to_string());
        Alphabet::new(&names)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letters.join(" "))
    }
}
