use super::{Alphabet, AutomataError, Word};

/// A complete deterministic finite automaton with states `0..state_count`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dfa {
    alphabet: Alphabet,
    state_count: usize,
    /// Row-major `state * |alphabet| + symbol`.
    transitions: Vec<usize>,
    initial: usize,
    accepting: Vec<bool>,
}

impl Dfa {
    /// Builds a DFA from one row of targets per state, one entry per symbol.
    pub fn from_table(
        alphabet: Alphabet,
        table: Vec<Vec<usize>>,
        initial: usize,
        accepting: &[usize],
    ) -> Result<Self, AutomataError> {
        let mut builder = DfaBuilder::new(alphabet, table.len())?;
        for (state, row) in table.iter().enumerate() {
            for (symbol, &target) in row.iter().enumerate() {
                if symbol >= builder.alphabet.len() {
                    return Err(AutomataError::SymbolNotInAlphabet {
                        symbol: symbol.to_string(),
                        position: symbol,
                    });
                }
                builder.set_transition(state, symbol as u8, target)?;
            }
        }
        builder.set_initial(initial)?;
        for &q in accepting {
            builder.set_accepting(q, true)?;
        }
        builder.build()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = usize> + '_ {
        self.accepting
            .iter()
            .enumerate()
            .filter(|(_, &f)| f)
            .map(|(q, _)| q)
    }

    /// Target of the transition from `state` on `symbol`. Both must be in range.
    pub fn target(&self, state: usize, symbol: u8) -> usize {
        self.transitions[state * self.alphabet.len() + symbol as usize]
    }

    /// Folds the transition function over `word` starting at `state`.
    pub fn run_from(&self, state: usize, word: &Word) -> Result<usize, AutomataError> {
        if state >= self.state_count {
            return Err(AutomataError::StateOutOfRange {
                state,
                state_count: self.state_count,
            });
        }
        if let Some((position, symbol)) = word.first_foreign_symbol(self.alphabet.len()) {
            return Err(AutomataError::SymbolNotInAlphabet {
                symbol: symbol.to_string(),
                position,
            });
        }
        Ok(self.run_unchecked(state, word))
    }

    pub fn run(&self, word: &Word) -> Result<usize, AutomataError> {
        self.run_from(self.initial, word)
    }

    pub fn accepts(&self, word: &Word) -> Result<bool, AutomataError> {
        self.run(word).map(|q| self.accepting[q])
    }

    pub(crate) fn run_unchecked(&self, state: usize, word: &Word) -> usize {
        word.symbols()
            .iter()
            .fold(state, |q, &s| self.target(q, s))
    }

    pub(crate) fn accepts_unchecked(&self, word: &Word) -> bool {
        self.accepting[self.run_unchecked(self.initial, word)]
    }

    /// A copy with one transition redirected.
    pub fn with_transition(
        &self,
        state: usize,
        symbol: u8,
        target: usize,
    ) -> Result<Dfa, AutomataError> {
        let mut builder = DfaBuilder::from_dfa(self);
        builder.set_transition(state, symbol, target)?;
        builder.build()
    }

    /// Transition table rows, one per state.
    pub fn table(&self) -> Vec<Vec<usize>> {
        self.transitions
            .chunks(self.alphabet.len())
            .map(|row| row.to_vec())
            .collect()
    }
}

/// Incremental construction of a [`Dfa`]; `build` insists on a total
/// transition function.
#[derive(Debug, Clone)]
pub struct DfaBuilder {
    alphabet: Alphabet,
    state_count: usize,
    transitions: Vec<Option<usize>>,
    initial: usize,
    accepting: Vec<bool>,
}

impl DfaBuilder {
    pub fn new(alphabet: Alphabet, state_count: usize) -> Result<Self, AutomataError> {
        if state_count == 0 {
            return Err(AutomataError::NoStates);
        }
        let cells = state_count * alphabet.len();
        Ok(DfaBuilder {
            alphabet,
            state_count,
            transitions: vec![None; cells],
            initial: 0,
            accepting: vec![false; state_count],
        })
    }

    fn from_dfa(dfa: &Dfa) -> Self {
        DfaBuilder {
            alphabet: dfa.alphabet.clone(),
            state_count: dfa.state_count,
            transitions: dfa.transitions.iter().map(|&t| Some(t)).collect(),
            initial: dfa.initial,
            accepting: dfa.accepting.clone(),
        }
    }

    fn check_state(&self, state: usize) -> Result<(), AutomataError> {
        if state < self.state_count {
            Ok(())
        } else {
            Err(AutomataError::StateOutOfRange {
                state,
                state_count: self.state_count,
            })
        }
    }

    pub fn set_transition(
        &mut self,
        state: usize,
        symbol: u8,
        target: usize,
    ) -> Result<&mut Self, AutomataError> {
        self.check_state(state)?;
        self.check_state(target)?;
        if symbol as usize >= self.alphabet.len() {
            return Err(AutomataError::SymbolNotInAlphabet {
                symbol: symbol.to_string(),
                position: 0,
            });
        }
        self.transitions[state * self.alphabet.len() + symbol as usize] = Some(target);
        Ok(self)
    }

    pub fn transition(&self, state: usize, symbol: u8) -> Option<usize> {
        self.transitions
            .get(state * self.alphabet.len() + symbol as usize)
            .copied()
            .flatten()
    }

    pub fn set_initial(&mut self, state: usize) -> Result<&mut Self, AutomataError> {
        self.check_state(state)?;
        self.initial = state;
        Ok(self)
    }

    pub fn set_accepting(&mut self, state: usize, accepting: bool) -> Result<&mut Self, AutomataError> {
        self.check_state(state)?;
        self.accepting[state] = accepting;
        Ok(self)
    }

    /// Fills every undefined transition with a self-loop.
    pub fn complete_with_self_loops(&mut self) -> &mut Self {
        let width = self.alphabet.len();
        for (cell, slot) in self.transitions.iter_mut().enumerate() {
            slot.get_or_insert(cell / width);
        }
        self
    }

    pub fn build(&self) -> Result<Dfa, AutomataError> {
        let width = self.alphabet.len();
        let transitions = self
            .transitions
            .iter()
            .enumerate()
            .map(|(cell, t)| {
                t.ok_or_else(|| AutomataError::MissingTransition {
                    state: cell / width,
                    symbol: self.alphabet.symbol((cell % width) as u8).unwrap_or('?'),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Dfa {
            alphabet: self.alphabet.clone(),
            state_count: self.state_count,
            transitions,
            initial: self.initial,
            accepting: self.accepting.clone(),
        })
    }
}
