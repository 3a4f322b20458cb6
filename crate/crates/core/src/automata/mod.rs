//! Automaton representations over small alphabets: words, labeled samples,
//! complete DFAs, binary-output Mealy machines, and DOT export.
//!
//! States are dense indices `0..state_count`. Human-readable state names are
//! a presentation concern and are passed separately to [`to_dot`].

mod dfa;
mod dot;
mod mealy;
mod word;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub use dfa::{Dfa, DfaBuilder};
pub use dot::{parse_dot, to_dot};
pub use mealy::{MealyMachine, Output, OutputAlphabet};
pub use word::{Alphabet, Word, A, B};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomataError {
    #[error("symbol '{symbol}' at position {position} is not in the alphabet")]
    SymbolNotInAlphabet { symbol: String, position: usize },
    #[error("sample alphabet {sample:?} does not match automaton alphabet {automaton:?}")]
    AlphabetMismatch {
        sample: Vec<char>,
        automaton: Vec<char>,
    },
    #[error("word {word} is labeled both positive and negative")]
    ConflictingLabels { word: String },
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("an automaton needs at least one state")]
    NoStates,
    #[error("state {state} is out of range for {state_count} states")]
    StateOutOfRange { state: usize, state_count: usize },
    #[error("missing transition from state {state} on '{symbol}'")]
    MissingTransition { state: usize, symbol: char },
    #[error("malformed DOT input at line {line}: {reason}")]
    Dot { line: usize, reason: String },
}

/// The side of a sample a word belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Positive,
    Negative,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Positive => "positive",
            Label::Negative => "negative",
        })
    }
}

/// Disjoint sets of positive and negative words over a declared alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    alphabet: Alphabet,
    positives: BTreeSet<Word>,
    negatives: BTreeSet<Word>,
}

impl Sample {
    pub fn new(
        alphabet: Alphabet,
        positives: impl IntoIterator<Item = Word>,
        negatives: impl IntoIterator<Item = Word>,
    ) -> Result<Self, AutomataError> {
        let positives: BTreeSet<Word> = positives.into_iter().collect();
        let negatives: BTreeSet<Word> = negatives.into_iter().collect();
        for word in positives.iter().chain(&negatives) {
            if let Some((position, symbol)) = word.first_foreign_symbol(alphabet.len()) {
                return Err(AutomataError::SymbolNotInAlphabet {
                    symbol: symbol.to_string(),
                    position,
                });
            }
        }
        if let Some(word) = positives.intersection(&negatives).next() {
            return Err(AutomataError::ConflictingLabels {
                word: alphabet.render(word),
            });
        }
        Ok(Sample {
            alphabet,
            positives,
            negatives,
        })
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Sample {
            alphabet,
            positives: BTreeSet::new(),
            negatives: BTreeSet::new(),
        }
    }

    /// Builds a binary-alphabet sample from words spelled with `a` and `b`.
    pub fn from_strs(positives: &[&str], negatives: &[&str]) -> Result<Self, AutomataError> {
        let ab = Alphabet::binary();
        let parse = |words: &[&str]| {
            words
                .iter()
                .map(|w| ab.parse_word(w))
                .collect::<Result<Vec<_>, _>>()
        };
        let p = parse(positives)?;
        let n = parse(negatives)?;
        Sample::new(ab, p, n)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn positives(&self) -> &BTreeSet<Word> {
        &self.positives
    }

    pub fn negatives(&self) -> &BTreeSet<Word> {
        &self.negatives
    }

    pub fn len(&self) -> usize {
        self.positives.len() + self.negatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positives.is_empty() && self.negatives.is_empty()
    }

    pub fn label_of(&self, word: &Word) -> Option<Label> {
        if self.positives.contains(word) {
            Some(Label::Positive)
        } else if self.negatives.contains(word) {
            Some(Label::Negative)
        } else {
            None
        }
    }

    /// All labeled words, shortest-first then lexicographic.
    pub fn labeled_words(&self) -> Vec<(&Word, Label)> {
        let mut all: Vec<(&Word, Label)> = self
            .positives
            .iter()
            .map(|w| (w, Label::Positive))
            .chain(self.negatives.iter().map(|w| (w, Label::Negative)))
            .collect();
        all.sort();
        all
    }
}

/// Outcome of checking an automaton against a sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Consistent,
    /// The least offending word (shortest-first, then lexicographic) together
    /// with the label it carries in the sample.
    Violation { word: Word, label: Label },
}

impl Verdict {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Verdict::Consistent)
    }
}

/// Checks that `dfa` accepts every positive and rejects every negative word.
pub fn is_consistent(dfa: &Dfa, sample: &Sample) -> Result<Verdict, AutomataError> {
    if dfa.alphabet() != sample.alphabet() {
        return Err(AutomataError::AlphabetMismatch {
            sample: sample.alphabet().symbols().to_vec(),
            automaton: dfa.alphabet().symbols().to_vec(),
        });
    }
    let misfit_positive = sample.positives().iter().find(|w| !dfa.accepts_unchecked(w));
    let misfit_negative = sample.negatives().iter().find(|w| dfa.accepts_unchecked(w));
    let violation = match (misfit_positive, misfit_negative) {
        (None, None) => return Ok(Verdict::Consistent),
        (Some(p), None) => (p, Label::Positive),
        (None, Some(n)) => (n, Label::Negative),
        (Some(p), Some(n)) if p < n => (p, Label::Positive),
        (Some(_), Some(n)) => (n, Label::Negative),
    };
    Ok(Verdict::Violation {
        word: violation.0.clone(),
        label: violation.1,
    })
}
