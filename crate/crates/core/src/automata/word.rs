use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use super::AutomataError;

/// Index of the symbol `a` in the canonical binary alphabet.
pub const A: u8 = 0;
/// Index of the symbol `b` in the canonical binary alphabet.
pub const B: u8 = 1;

/// An ordered, duplicate-free set of symbol characters. Symbols are addressed
/// by their position, so `Word` only ever stores indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: Vec<char>) -> Result<Self, AutomataError> {
        if symbols.is_empty() {
            return Err(AutomataError::InvalidAlphabet("alphabet is empty".into()));
        }
        if symbols.len() > u8::MAX as usize {
            return Err(AutomataError::InvalidAlphabet(format!(
                "{} symbols exceed the supported maximum",
                symbols.len()
            )));
        }
        let distinct: BTreeSet<char> = symbols.iter().copied().collect();
        if distinct.len() != symbols.len() {
            return Err(AutomataError::InvalidAlphabet("duplicate symbol".into()));
        }
        if symbols.iter().any(|c| c.is_whitespace() || *c == ',' || *c == 'ε') {
            return Err(AutomataError::InvalidAlphabet(
                "symbols may not be whitespace, ',' or 'ε'".into(),
            ));
        }
        Ok(Alphabet { symbols })
    }

    /// The canonical alphabet `{a, b}`.
    pub fn binary() -> Self {
        Alphabet {
            symbols: vec!['a', 'b'],
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbol(&self, index: u8) -> Option<char> {
        self.symbols.get(index as usize).copied()
    }

    pub fn index_of(&self, symbol: char) -> Option<u8> {
        self.symbols.iter().position(|&c| c == symbol).map(|i| i as u8)
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn contains(&self, word: &Word) -> bool {
        word.first_foreign_symbol(self.len()).is_none()
    }

    /// Parses a word written with this alphabet's characters. The empty string
    /// and `ε` both denote the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word, AutomataError> {
        let text = text.trim();
        if text == "ε" {
            return Ok(Word::empty());
        }
        text.chars()
            .enumerate()
            .map(|(position, c)| {
                self.index_of(c)
                    .ok_or(AutomataError::SymbolNotInAlphabet {
                        symbol: c.to_string(),
                        position,
                    })
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word::new)
    }

    pub fn render(&self, word: &Word) -> String {
        if word.is_empty() {
            return "ε".to_string();
        }
        word.symbols()
            .iter()
            .map(|&s| self.symbol(s).unwrap_or('?'))
            .collect()
    }

    /// Every word over this alphabet of exactly `length` symbols, in
    /// lexicographic order.
    pub fn words_of_length(&self, length: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..length {
            out = out
                .into_iter()
                .flat_map(|w| (0..self.len() as u8).map(move |s| w.then(s)))
                .collect();
        }
        out
    }
}

/// A finite sequence of symbol indices.
///
/// Words are ordered shortest-first, then lexicographically by symbol index,
/// which is the order used everywhere a deterministic pick is needed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(symbols: Vec<u8>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// `symbol` repeated `count` times.
    pub fn power(symbol: u8, count: usize) -> Self {
        Word(vec![symbol; count])
    }

    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// This word followed by a single symbol.
    pub fn then(&self, symbol: u8) -> Word {
        let mut symbols = self.0.clone();
        symbols.push(symbol);
        Word(symbols)
    }

    /// This word followed by `symbol^count`.
    pub fn then_power(mut self, symbol: u8, count: usize) -> Word {
        self.0.extend(std::iter::repeat_n(symbol, count));
        self
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut symbols = self.0.clone();
        symbols.extend_from_slice(&other.0);
        Word(symbols)
    }

    pub(crate) fn first_foreign_symbol(&self, alphabet_size: usize) -> Option<(usize, u8)> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &s)| s as usize >= alphabet_size)
            .map(|(i, &s)| (i, s))
    }
}

impl From<Vec<u8>> for Word {
    fn from(symbols: Vec<u8>) -> Self {
        Word(symbols)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Renders with canonical letters (`0 → a`, `1 → b`, ...) and `ε` for the
/// empty word.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for &s in &self.0 {
            let c = if s < 26 { (b'a' + s) as char } else { '?' };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shortest_first_order() {
        let ab = Alphabet::binary();
        let mut words: Vec<Word> = ["ba", "b", "ε", "aa", "a", "ab"]
            .iter()
            .map(|w| ab.parse_word(w).unwrap())
            .collect();
        words.sort();
        let rendered: Vec<String> = words.iter().map(|w| w.to_string()).collect();
        assert_eq!(rendered, ["ε", "a", "b", "aa", "ab", "ba"]);
    }

    #[test]
    fn parse_rejects_foreign_symbol_with_position() {
        let err = Alphabet::binary().parse_word("abca").unwrap_err();
        assert_eq!(
            err,
            AutomataError::SymbolNotInAlphabet {
                symbol: "c".into(),
                position: 2
            }
        );
    }

    #[test]
    fn empty_word_forms() {
        let ab = Alphabet::binary();
        assert_eq!(ab.parse_word("").unwrap(), Word::empty());
        assert_eq!(ab.parse_word("ε").unwrap(), Word::empty());
        assert_eq!(Word::empty().len(), 0);
        assert_eq!(ab.render(&Word::empty()), "ε");
    }

    #[test]
    fn alphabet_validation() {
        assert!(Alphabet::new(vec![]).is_err());
        assert!(Alphabet::new(vec!['a', 'a']).is_err());
        assert!(Alphabet::new(vec!['a', ',']).is_err());
        assert_eq!(Alphabet::new(vec!['0', '1']).unwrap().len(), 2);
    }

    #[test]
    fn words_of_length_enumerates_all() {
        let ab = Alphabet::binary();
        let words = ab.words_of_length(3);
        assert_eq!(words.len(), 8);
        assert_eq!(words[0].to_string(), "aaa");
        assert_eq!(words[7].to_string(), "bbb");
    }
}
