use std::fmt;

use crate::error::{Error, Result};

/// Left end-marker.
pub const CENT: char = '¢';
/// Right end-marker.
pub const DOLLAR: char = '$';

/// Input alphabet. Tape symbols are indexed `0 = ¢`, `1..=k` for the input
/// symbols in order, and `k + 1 = $`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(Error::Invariant("alphabet must be nonempty".into()));
        }
        for (i, &c) in symbols.iter().enumerate() {
            if c == CENT || c == DOLLAR {
                return Err(Error::Invariant(format!("`{c}` is a reserved end-marker")));
            }
            if c.is_whitespace() || c == '#' || c == ':' {
                return Err(Error::Invariant(format!("`{c}` cannot be an input symbol")));
            }
            if symbols[..i].contains(&c) {
                return Err(Error::Invariant(format!("duplicate symbol `{c}`")));
            }
        }
        Ok(Self { symbols })
    }

    /// The two-letter alphabet `{a, b}` used by the witness machines.
    pub fn ab() -> Self {
        Self { symbols: vec!['a', 'b'] }
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Number of tape symbols, end-markers included.
    pub fn tape_len(&self) -> usize {
        self.symbols.len() + 2
    }

    pub fn cent(&self) -> usize {
        0
    }

    pub fn dollar(&self) -> usize {
        self.symbols.len() + 1
    }

    /// Tape index of an input symbol.
    pub fn index_of(&self, c: char) -> Result<usize> {
        self.symbols
            .iter()
            .position(|&s| s == c)
            .map(|i| i + 1)
            .ok_or(Error::ForeignSymbol(c))
    }

    /// Tape indices of `w`, without end-markers.
    pub fn encode(&self, w: &str) -> Result<Vec<usize>> {
        w.chars().map(|c| self.index_of(c)).collect()
    }

    /// Tape indices of `¢w$`.
    pub fn tape(&self, w: &str) -> Result<Vec<usize>> {
        let mut tape = Vec::with_capacity(w.len() + 2);
        tape.push(self.cent());
        tape.extend(self.encode(w)?);
        tape.push(self.dollar());
        Ok(tape)
    }

    /// Name of a tape symbol as written in machine files.
    pub fn tape_label(&self, index: usize) -> String {
        if index == 0 {
            "cent".into()
        } else if index == self.dollar() {
            "dollar".into()
        } else {
            self.symbols[index - 1].to_string()
        }
    }

    /// Inverse of [`tape_label`](Self::tape_label); also accepts `¢` and `$`.
    pub fn parse_tape_label(&self, label: &str) -> Option<usize> {
        match label {
            "cent" | "¢" => Some(self.cent()),
            "dollar" | "$" => Some(self.dollar()),
            _ => {
                let mut chars = label.chars();
                let c = chars.next()?;
                if chars.next().is_some() {
                    return None;
                }
                self.index_of(c).ok()
            }
        }
    }

    /// All words of length `<= max_len` in length-then-lexicographic order
    /// (lexicographic with respect to the alphabet's declared order).
    pub fn words_up_to(&self, max_len: usize) -> Vec<String> {
        let mut out = vec![String::new()];
        let mut level = vec![String::new()];
        for _ in 0..max_len {
            let mut next = Vec::with_capacity(level.len() * self.symbols.len());
            for w in &level {
                for &c in &self.symbols {
                    let mut v = w.clone();
                    v.push(c);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            level = next;
        }
        out
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.symbols.iter().map(char::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_reserved_and_duplicates() {
        assert!(Alphabet::new(['a', '$']).is_err());
        assert!(Alphabet::new(['¢']).is_err());
        assert!(Alphabet::new(['a', 'a']).is_err());
        assert!(Alphabet::new([]).is_err());
    }

    #[test]
    fn tape_layout() {
        let a = Alphabet::ab();
        assert_eq!(a.tape("ba").unwrap(), vec![0, 2, 1, 3]);
        assert_eq!(a.tape("").unwrap(), vec![0, 3]);
        assert_eq!(a.tape("c"), Err(Error::ForeignSymbol('c')));
        assert_eq!(a.parse_tape_label("dollar"), Some(3));
        assert_eq!(a.parse_tape_label("b"), Some(2));
        assert_eq!(a.parse_tape_label("ab"), None);
    }

    #[test]
    fn enumeration_order() {
        let w = Alphabet::ab().words_up_to(2);
        assert_eq!(w, vec!["", "a", "b", "aa", "ab", "ba", "bb"]);
        assert_eq!(Alphabet::ab().words_up_to(12).len(), 8191);
    }
}
