//! Input alphabets, tape symbols and the circular input tape.

use std::fmt;

use thiserror::Error;

/// Spelling of the left end-marker in every textual format.
pub const LEFT_END_TOKEN: char = '^';
/// Spelling of the right end-marker in every textual format.
pub const RIGHT_END_TOKEN: char = '$';

/// A symbol of the work alphabet: an input letter or one of the two end-markers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    LeftEnd,
    Letter(char),
    RightEnd,
}

impl Symbol {
    /// Parses the textual spelling used in documents (`^`, `$` or a letter).
    pub fn from_token(token: char) -> Symbol {
        match token {
            LEFT_END_TOKEN => Symbol::LeftEnd,
            RIGHT_END_TOKEN => Symbol::RightEnd,
            c => Symbol::Letter(c),
        }
    }

    pub fn token(self) -> char {
        match self {
            Symbol::LeftEnd => LEFT_END_TOKEN,
            Symbol::RightEnd => RIGHT_END_TOKEN,
            Symbol::Letter(c) => c,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.token())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlphabetError {
    #[error("input alphabet is empty")]
    Empty,
    #[error("input alphabet lists {0:?} twice")]
    Duplicate(char),
    #[error("{0:?} is a reserved end-marker and cannot be an input letter")]
    Reserved(char),
}

/// Errors raised when a word is checked against an alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("input contains the reserved end-marker {token:?} at offset {offset}")]
    ReservedToken { token: char, offset: usize },
    #[error("input symbol {token:?} at offset {offset} is not in the input alphabet")]
    UnknownSymbol { token: char, offset: usize },
}

/// The input alphabet Σ. The work alphabet is Σ plus the two end-markers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    letters: Vec<char>,
}

impl Alphabet {
    pub fn new(letters: impl IntoIterator<Item = char>) -> Result<Self, AlphabetError> {
        let mut out: Vec<char> = Vec::new();
        for c in letters {
            if c == LEFT_END_TOKEN || c == RIGHT_END_TOKEN {
                return Err(AlphabetError::Reserved(c));
            }
            if out.contains(&c) {
                return Err(AlphabetError::Duplicate(c));
            }
            out.push(c);
        }
        if out.is_empty() {
            return Err(AlphabetError::Empty);
        }
        Ok(Alphabet { letters: out })
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    /// Number of work-alphabet symbols, |Σ| + 2.
    pub fn symbol_count(&self) -> usize {
        self.letters.len() + 2
    }

    /// Work-alphabet symbols in canonical order: left end-marker, letters, right end-marker.
    pub fn symbols(&self) -> Vec<Symbol> {
        let mut out = Vec::with_capacity(self.symbol_count());
        out.push(Symbol::LeftEnd);
        out.extend(self.letters.iter().map(|&c| Symbol::Letter(c)));
        out.push(Symbol::RightEnd);
        out
    }

    /// Dense index of a work symbol, consistent with [`Alphabet::symbols`].
    pub fn index_of(&self, symbol: Symbol) -> Option<usize> {
        match symbol {
            Symbol::LeftEnd => Some(0),
            Symbol::RightEnd => Some(self.letters.len() + 1),
            Symbol::Letter(c) => self.letters.iter().position(|&l| l == c).map(|i| i + 1),
        }
    }

    pub fn symbol_at(&self, index: usize) -> Symbol {
        if index == 0 {
            Symbol::LeftEnd
        } else if index == self.letters.len() + 1 {
            Symbol::RightEnd
        } else {
            Symbol::Letter(self.letters[index - 1])
        }
    }

    pub fn contains(&self, symbol: Symbol) -> bool {
        self.index_of(symbol).is_some()
    }

    /// Checks that every token of `word` is an input letter.
    pub fn validate(&self, word: &str) -> Result<(), InputError> {
        for (offset, token) in word.chars().enumerate() {
            if token == LEFT_END_TOKEN || token == RIGHT_END_TOKEN {
                return Err(InputError::ReservedToken { token, offset });
            }
            if !self.letters.contains(&token) {
                return Err(InputError::UnknownSymbol { token, offset });
            }
        }
        Ok(())
    }
}

/// The circular tape `^ x $` for an input word `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tape {
    cells: Vec<Symbol>,
}

impl Tape {
    /// Builds the tape without an alphabet check; only end-markers are rejected.
    pub fn new(word: &str) -> Result<Self, InputError> {
        let mut cells = Vec::with_capacity(word.len() + 2);
        cells.push(Symbol::LeftEnd);
        for (offset, token) in word.chars().enumerate() {
            if token == LEFT_END_TOKEN || token == RIGHT_END_TOKEN {
                return Err(InputError::ReservedToken { token, offset });
            }
            cells.push(Symbol::Letter(token));
        }
        cells.push(Symbol::RightEnd);
        Ok(Tape { cells })
    }

    /// Builds the tape for `word` after checking it against `alphabet`.
    pub fn for_alphabet(alphabet: &Alphabet, word: &str) -> Result<Self, InputError> {
        alphabet.validate(word)?;
        Tape::new(word)
    }

    /// Input length n; the tape has n + 2 cells.
    pub fn input_len(&self) -> usize {
        self.cells.len() - 2
    }

    /// Number of cells, n + 2.
    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// Symbol under an in-range head position.
    pub fn at(&self, head: usize) -> Symbol {
        self.cells[head]
    }

    /// Symbol at any integer position, wrapping modulo n + 2.
    pub fn symbol(&self, position: i64) -> Symbol {
        self.cells[self.wrap(position)]
    }

    pub fn wrap(&self, position: i64) -> usize {
        position.rem_euclid(self.cells.len() as i64) as usize
    }

    pub fn cells(&self) -> &[Symbol] {
        &self.cells
    }
}

/// The symbol of `^ input $` at `position`, read circularly.
pub fn tape_symbol(input: &str, position: i64) -> Result<Symbol, InputError> {
    Ok(Tape::new(input)?.symbol(position))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tape_symbol_reads_end_markers_and_wraps() {
        assert_eq!(tape_symbol("ab", 0).unwrap(), Symbol::LeftEnd);
        assert_eq!(tape_symbol("ab", 1).unwrap(), Symbol::Letter('a'));
        assert_eq!(tape_symbol("ab", 3).unwrap(), Symbol::RightEnd);
        assert_eq!(tape_symbol("ab", 4).unwrap(), Symbol::LeftEnd);
        assert_eq!(tape_symbol("ab", -1).unwrap(), Symbol::RightEnd);
        assert_eq!(tape_symbol("", 1).unwrap(), Symbol::RightEnd);
    }

    #[test]
    fn tape_rejects_end_markers_in_input() {
        assert_eq!(
            tape_symbol("a$b", 0),
            Err(InputError::ReservedToken { token: '$', offset: 1 })
        );
        assert!(matches!(Tape::new("^"), Err(InputError::ReservedToken { .. })));
    }

    #[test]
    fn alphabet_invariants() {
        assert_eq!(Alphabet::new([]), Err(AlphabetError::Empty));
        assert_eq!(Alphabet::new(['a', 'a']), Err(AlphabetError::Duplicate('a')));
        assert_eq!(Alphabet::new(['a', '^']), Err(AlphabetError::Reserved('^')));
        let ab = Alphabet::new(['a', 'b']).unwrap();
        assert_eq!(
            ab.symbols(),
            vec![Symbol::LeftEnd, Symbol::Letter('a'), Symbol::Letter('b'), Symbol::RightEnd]
        );
        for (i, s) in ab.symbols().into_iter().enumerate() {
            assert_eq!(ab.index_of(s), Some(i));
            assert_eq!(ab.symbol_at(i), s);
        }
        assert_eq!(ab.index_of(Symbol::Letter('c')), None);
    }

    #[test]
    fn validate_reports_offsets() {
        let ab = Alphabet::new(['a', 'b']).unwrap();
        assert!(ab.validate("abba").is_ok());
        assert_eq!(
            ab.validate("abc"),
            Err(InputError::UnknownSymbol { token: 'c', offset: 2 })
        );
        assert_eq!(
            ab.validate("a$"),
            Err(InputError::ReservedToken { token: '$', offset: 1 })
        );
    }
}
