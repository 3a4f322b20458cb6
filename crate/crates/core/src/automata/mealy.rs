use super::{Alphabet, AutomataError, Word};

/// Binary output of a Mealy machine read as an acceptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Output {
    Accept,
    Reject,
}

/// The two output characters; always exactly two, one per [`Output`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OutputAlphabet {
    accept: char,
    reject: char,
}

impl OutputAlphabet {
    pub fn new(accept: char, reject: char) -> Result<Self, AutomataError> {
        if accept == reject {
            return Err(AutomataError::InvalidAlphabet(
                "output alphabet needs two distinct symbols".into(),
            ));
        }
        Ok(OutputAlphabet { accept, reject })
    }

    pub fn symbol(&self, output: Output) -> char {
        match output {
            Output::Accept => self.accept,
            Output::Reject => self.reject,
        }
    }
}

impl Default for OutputAlphabet {
    fn default() -> Self {
        OutputAlphabet {
            accept: '1',
            reject: '0',
        }
    }
}

/// A deterministic transducer emitting one binary output per transition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MealyMachine {
    input_alphabet: Alphabet,
    output_alphabet: OutputAlphabet,
    state_count: usize,
    transitions: Vec<usize>,
    outputs: Vec<Output>,
    initial: usize,
}

impl MealyMachine {
    /// `table[state][symbol]` is `(target, output)`.
    pub fn new(
        input_alphabet: Alphabet,
        output_alphabet: OutputAlphabet,
        table: Vec<Vec<(usize, Output)>>,
        initial: usize,
    ) -> Result<Self, AutomataError> {
        let state_count = table.len();
        if state_count == 0 {
            return Err(AutomataError::NoStates);
        }
        if initial >= state_count {
            return Err(AutomataError::StateOutOfRange {
                state: initial,
                state_count,
            });
        }
        let width = input_alphabet.len();
        let mut transitions = Vec::with_capacity(state_count * width);
        let mut outputs = Vec::with_capacity(state_count * width);
        for (state, row) in table.into_iter().enumerate() {
            if row.len() != width {
                let symbol = input_alphabet.symbol(row.len().min(width) as u8).unwrap_or('?');
                return Err(AutomataError::MissingTransition { state, symbol });
            }
            for (target, output) in row {
                if target >= state_count {
                    return Err(AutomataError::StateOutOfRange {
                        state: target,
                        state_count,
                    });
                }
                transitions.push(target);
                outputs.push(output);
            }
        }
        Ok(MealyMachine {
            input_alphabet,
            output_alphabet,
            state_count,
            transitions,
            outputs,
            initial,
        })
    }

    pub fn input_alphabet(&self) -> &Alphabet {
        &self.input_alphabet
    }

    pub fn output_alphabet(&self) -> OutputAlphabet {
        self.output_alphabet
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    /// The output emitted on the last transition of the run of `word`.
    ///
    /// A Mealy machine emits nothing on the empty word; `ε` is reported as
    /// [`Output::Reject`].
    pub fn output(&self, word: &Word) -> Result<Output, AutomataError> {
        if let Some((position, symbol)) = word.first_foreign_symbol(self.input_alphabet.len()) {
            return Err(AutomataError::SymbolNotInAlphabet {
                symbol: symbol.to_string(),
                position,
            });
        }
        let width = self.input_alphabet.len();
        let mut state = self.initial;
        let mut last = Output::Reject;
        for &s in word.symbols() {
            let cell = state * width + s as usize;
            last = self.outputs[cell];
            state = self.transitions[cell];
        }
        Ok(last)
    }

    pub fn output_symbol(&self, word: &Word) -> Result<char, AutomataError> {
        self.output(word).map(|o| self.output_alphabet.symbol(o))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{Dfa, A, B};

    fn last_symbol_is_a() -> MealyMachine {
        MealyMachine::new(
            Alphabet::binary(),
            OutputAlphabet::default(),
            vec![vec![(0, Output::Accept), (0, Output::Reject)]],
            0,
        )
        .unwrap()
    }

    fn w(s: &str) -> Word {
        Alphabet::binary().parse_word(s).unwrap()
    }

    #[test]
    fn one_state_machine_outputs() {
        let m = last_symbol_is_a();
        assert_eq!(m.output(&w("ba")).unwrap(), Output::Accept);
        assert_eq!(m.output(&w("ab")).unwrap(), Output::Reject);
        assert_eq!(m.output(&Word::empty()).unwrap(), Output::Reject);
        assert_eq!(m.output_symbol(&w("a")).unwrap(), '1');
    }

    #[test]
    fn agrees_with_two_state_dfa_on_nonempty_words() {
        // state 1 = "last symbol was a"
        let dfa = Dfa::from_table(Alphabet::binary(), vec![vec![1, 0], vec![1, 0]], 0, &[1]).unwrap();
        let m = last_symbol_is_a();
        for len in 1..=7 {
            for word in Alphabet::binary().words_of_length(len) {
                let mealy = m.output(&word).unwrap() == Output::Accept;
                assert_eq!(mealy, dfa.accepts(&word).unwrap(), "{word}");
            }
        }
    }

    #[test]
    fn construction_errors() {
        assert!(OutputAlphabet::new('x', 'x').is_err());
        assert!(MealyMachine::new(Alphabet::binary(), OutputAlphabet::default(), vec![], 0).is_err());
        assert!(MealyMachine::new(
            Alphabet::binary(),
            OutputAlphabet::default(),
            vec![vec![(0, Output::Accept)]],
            0
        )
        .is_err());
        let err = last_symbol_is_a().output(&Word::new(vec![A, B, 5])).unwrap_err();
        assert!(matches!(err, AutomataError::SymbolNotInAlphabet { position: 2, .. }));
    }
}
