//! Line-oriented file formats.
//!
//! Sample files use the Abbadingo layout:
//!
//! ```text
//! <word count> <alphabet size>
//! <label> <length> <symbol> <symbol> ...
//! ```
//!
//! with label `1` for positive and `0` for negative words, and symbols as
//! integers (`0 → a`, `1 → b`, ...).
//!
//! DFA files list a complete transition table:
//!
//! ```text
//! states <n> initial <i>
//! accepting <i> <j> ...
//! <state> <symbol> <target>
//! ```
//!
//! Symbols are written as letters; integer indices are accepted on input.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::automata::{Alphabet, AutomataError, Dfa, DfaBuilder, Label, Sample, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("line {line}: word {word} appears as both positive and negative")]
    ConflictingLabels { line: usize, word: String },
    #[error("header declares {declared} words but {found} were read")]
    WordCount { declared: usize, found: usize },
    #[error(transparent)]
    Automata(#[from] AutomataError),
}

fn syntax(line: usize, reason: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        reason: reason.into(),
    }
}

fn parse_usize(token: &str, line: usize, what: &str) -> Result<usize, FormatError> {
    token
        .parse()
        .map_err(|_| syntax(line, format!("expected {what}, found '{token}'")))
}

/// The alphabet used for `size` integer symbols: the first `size` letters.
pub fn letter_alphabet(size: usize) -> Result<Alphabet, FormatError> {
    if size == 0 || size > 26 {
        return Err(syntax(1, format!("unsupported alphabet size {size}")));
    }
    Ok(Alphabet::new((0..size as u8).map(|i| (b'a' + i) as char).collect())?)
}

/// Non-blank lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

pub fn parse_sample(text: &str) -> Result<Sample, FormatError> {
    let mut lines = content_lines(text);
    let (header_line, header) = lines.next().ok_or_else(|| syntax(1, "empty sample file"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [count, size] = fields.as_slice() else {
        return Err(syntax(header_line, "header must be '<word count> <alphabet size>'"));
    };
    let declared = parse_usize(count, header_line, "word count")?;
    let size = parse_usize(size, header_line, "alphabet size")?;
    let alphabet = letter_alphabet(size).map_err(|_| syntax(header_line, format!("unsupported alphabet size {size}")))?;

    let mut labels: BTreeMap<Word, Label> = BTreeMap::new();
    let mut found = 0;
    for (line, content) in lines {
        let mut tokens = content.split_whitespace();
        let label = match tokens.next() {
            Some("1") => Label::Positive,
            Some("0") => Label::Negative,
            Some(other) => return Err(syntax(line, format!("label must be 0 or 1, found '{other}'"))),
            None => unreachable!("content lines are nonempty"),
        };
        let length = parse_usize(
            tokens.next().ok_or_else(|| syntax(line, "missing word length"))?,
            line,
            "word length",
        )?;
        let symbols = tokens
            .map(|t| {
                let s = parse_usize(t, line, "symbol")?;
                if s >= size {
                    return Err(syntax(line, format!("symbol {s} outside alphabet of size {size}")));
                }
                Ok(s as u8)
            })
            .collect::<Result<Vec<u8>, _>>()?;
        if symbols.len() != length {
            return Err(syntax(
                line,
                format!("declared length {length} but {} symbols given", symbols.len()),
            ));
        }
        let word = Word::new(symbols);
        match labels.get(&word) {
            Some(&existing) if existing != label => {
                return Err(FormatError::ConflictingLabels {
                    line,
                    word: alphabet.render(&word),
                })
            }
            _ => {
                labels.insert(word, label);
            }
        }
        found += 1;
    }
    if found != declared {
        return Err(FormatError::WordCount { declared, found });
    }
    let (positives, negatives): (Vec<_>, Vec<_>) =
        labels.into_iter().partition(|(_, label)| *label == Label::Positive);
    Ok(Sample::new(
        alphabet,
        positives.into_iter().map(|(w, _)| w),
        negatives.into_iter().map(|(w, _)| w),
    )?)
}

/// Writes the sample in shortest-first, lexicographic word order.
pub fn write_sample(sample: &Sample) -> String {
    let mut out = format!("{} {}\n", sample.len(), sample.alphabet().len());
    for (word, label) in sample.labeled_words() {
        let bit = if label == Label::Positive { 1 } else { 0 };
        out.push_str(&format!("{bit} {}", word.len()));
        for s in word.symbols() {
            out.push_str(&format!(" {s}"));
        }
        out.push('\n');
    }
    out
}

pub fn parse_dfa(text: &str, alphabet: &Alphabet) -> Result<Dfa, FormatError> {
    let mut lines = content_lines(text);
    let (line, header) = lines.next().ok_or_else(|| syntax(1, "empty DFA file"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let ["states", n, "initial", i] = fields.as_slice() else {
        return Err(syntax(line, "expected 'states <n> initial <i>'"));
    };
    let state_count = parse_usize(n, line, "state count")?;
    let initial = parse_usize(i, line, "initial state")?;
    let mut builder = DfaBuilder::new(alphabet.clone(), state_count)?;
    builder.set_initial(initial)?;

    let (line, accepting) = lines
        .next()
        .ok_or_else(|| syntax(line + 1, "missing 'accepting' line"))?;
    let mut tokens = accepting.split_whitespace();
    if tokens.next() != Some("accepting") {
        return Err(syntax(line, "expected 'accepting <states...>'"));
    }
    for token in tokens {
        let q = parse_usize(token, line, "accepting state")?;
        builder.set_accepting(q, true).map_err(|e| syntax(line, e.to_string()))?;
    }

    for (line, content) in lines {
        let fields: Vec<&str> = content.split_whitespace().collect();
        let [state, symbol, target] = fields.as_slice() else {
            return Err(syntax(line, "expected '<state> <symbol> <target>'"));
        };
        let state = parse_usize(state, line, "state")?;
        let target = parse_usize(target, line, "target state")?;
        let symbol = symbol
            .parse::<u8>()
            .ok()
            .filter(|&s| (s as usize) < alphabet.len())
            .or_else(|| {
                let mut cs = symbol.chars();
                match (cs.next(), cs.next()) {
                    (Some(c), None) => alphabet.index_of(c),
                    _ => None,
                }
            })
            .ok_or_else(|| syntax(line, format!("unknown symbol '{symbol}'")))?;
        if builder.transition(state, symbol).is_some() {
            return Err(syntax(line, format!("duplicate transition for state {state}")));
        }
        builder
            .set_transition(state, symbol, target)
            .map_err(|e| syntax(line, e.to_string()))?;
    }
    Ok(builder.build()?)
}

pub fn write_dfa(dfa: &Dfa) -> String {
    let accepting: Vec<String> = dfa.accepting_states().map(|q| q.to_string()).collect();
    let mut out = format!("states {} initial {}\n", dfa.state_count(), dfa.initial());
    if accepting.is_empty() {
        out.push_str("accepting\n");
    } else {
        out.push_str(&format!("accepting {}\n", accepting.join(" ")));
    }
    for q in 0..dfa.state_count() {
        for (s, c) in dfa.alphabet().symbols().iter().enumerate() {
            out.push_str(&format!("{q} {c} {}\n", dfa.target(q, s as u8)));
        }
    }
    out
}
