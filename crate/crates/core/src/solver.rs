//! Exact DFA consistency.
//!
//! [`find_consistent_dfa`] colors the nodes of the sample's prefix tree with
//! at most `k` colors (colors become states). Coloring a node with `c`, and
//! fixing `δ(c, s) = d`, forces every `s`-child of a `c`-colored node to `d`;
//! accepting and rejecting nodes never share a color. Branching always
//! happens at the least undecided node in breadth-first order, and a fresh
//! color is only ever the next unused index, so relabelings of one automaton
//! are explored once.
//!
//! [`brute_force_oracle`] enumerates whole transition tables and exists to
//! cross-check the search on tiny bounds.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use thiserror::Error;

use crate::automata::{is_consistent, Alphabet, Dfa, DfaBuilder, Label, Sample, Word};

/// Largest `k` accepted by [`brute_force_oracle`].
pub const ORACLE_MAX_STATES: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("the brute-force oracle supports at most {limit} states, got {k}")]
    TooManyStates { k: usize, limit: usize },
    #[error("the brute-force oracle requires a binary alphabet, got {size} symbols")]
    AlphabetSize { size: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeLabel {
    Accepting,
    Rejecting,
    Unlabeled,
}

/// Trie of every prefix of the sample words, numbered breadth-first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixTree {
    alphabet_size: usize,
    words: Vec<Word>,
    labels: Vec<NodeLabel>,
    /// Row-major `node * alphabet_size + symbol`.
    children: Vec<Option<usize>>,
    parents: Vec<Option<(usize, u8)>>,
}

impl PrefixTree {
    pub fn build(sample: &Sample) -> Self {
        let alphabet_size = sample.alphabet().len();
        let mut prefixes: BTreeSet<Word> = BTreeSet::new();
        prefixes.insert(Word::empty());
        for (word, _) in sample.labeled_words() {
            for len in 1..=word.len() {
                prefixes.insert(Word::new(word.symbols()[..len].to_vec()));
            }
        }
        // shortest-first lexicographic order is breadth-first order
        let words: Vec<Word> = prefixes.into_iter().collect();
        let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut children = vec![None; words.len() * alphabet_size];
        let mut parents = vec![None; words.len()];
        for (i, word) in words.iter().enumerate().skip(1) {
            let (&last, init) = word.symbols().split_last().expect("non-root prefix is nonempty");
            let parent = index[&Word::new(init.to_vec())];
            children[parent * alphabet_size + last as usize] = Some(i);
            parents[i] = Some((parent, last));
        }
        let labels = words
            .iter()
            .map(|w| match sample.label_of(w) {
                Some(Label::Positive) => NodeLabel::Accepting,
                Some(Label::Negative) => NodeLabel::Rejecting,
                None => NodeLabel::Unlabeled,
            })
            .collect();
        PrefixTree {
            alphabet_size,
            words,
            labels,
            children,
            parents,
        }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn word(&self, node: usize) -> &Word {
        &self.words[node]
    }

    pub fn label(&self, node: usize) -> NodeLabel {
        self.labels[node]
    }

    pub fn child(&self, node: usize, symbol: u8) -> Option<usize> {
        self.children[node * self.alphabet_size + symbol as usize]
    }

    pub fn parent(&self, node: usize) -> Option<(usize, u8)> {
        self.parents[node]
    }

    pub fn node_of(&self, word: &Word) -> Option<usize> {
        word.symbols()
            .iter()
            .try_fold(0, |node, &s| self.child(node, s))
    }
}

pub fn build_prefix_tree(sample: &Sample) -> PrefixTree {
    PrefixTree::build(sample)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolverOptions {
    /// Explore top-level branches on a thread pool. The yes/no answer is the
    /// same as the sequential search.
    pub parallel: bool,
}

#[derive(Debug, Clone, Copy)]
enum Undo {
    NodeColor(usize),
    Transition(usize),
    ColorLabel(usize),
    Member(usize),
    Open(usize),
}

#[derive(Clone)]
struct Search<'t> {
    tree: &'t PrefixTree,
    k: usize,
    width: usize,
    node_color: Vec<Option<usize>>,
    transitions: Vec<Option<usize>>,
    color_label: Vec<Option<bool>>,
    members: Vec<Vec<usize>>,
    open: usize,
    trail: Vec<Undo>,
    queue: Vec<(usize, usize)>,
}

fn label_bit(label: NodeLabel) -> Option<bool> {
    match label {
        NodeLabel::Accepting => Some(true),
        NodeLabel::Rejecting => Some(false),
        NodeLabel::Unlabeled => None,
    }
}

impl<'t> Search<'t> {
    fn new(tree: &'t PrefixTree, k: usize) -> Self {
        let width = tree.alphabet_size();
        Search {
            tree,
            k,
            width,
            node_color: vec![None; tree.len()],
            transitions: vec![None; k * width],
            color_label: vec![None; k],
            members: vec![Vec::new(); k],
            open: 0,
            trail: Vec::new(),
            queue: Vec::new(),
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().expect("trail above mark") {
                Undo::NodeColor(v) => self.node_color[v] = None,
                Undo::Transition(cell) => self.transitions[cell] = None,
                Undo::ColorLabel(c) => self.color_label[c] = None,
                Undo::Member(c) => {
                    self.members[c].pop();
                }
                Undo::Open(previous) => self.open = previous,
            }
        }
    }

    /// Drains the work queue of forced `(node, color)` pairs. Returns false
    /// on a determinism or label conflict; the caller undoes the trail.
    fn propagate(&mut self) -> bool {
        while let Some((v, c)) = self.queue.pop() {
            if let Some(existing) = self.node_color[v] {
                if existing != c {
                    self.queue.clear();
                    return false;
                }
                continue;
            }
            if let Some(bit) = label_bit(self.tree.label(v)) {
                match self.color_label[c] {
                    Some(existing) if existing != bit => {
                        self.queue.clear();
                        return false;
                    }
                    Some(_) => {}
                    None => {
                        self.color_label[c] = Some(bit);
                        self.trail.push(Undo::ColorLabel(c));
                    }
                }
            }
            self.node_color[v] = Some(c);
            self.trail.push(Undo::NodeColor(v));
            self.members[c].push(v);
            self.trail.push(Undo::Member(c));
            for s in 0..self.width {
                if let (Some(u), Some(d)) = (
                    self.tree.child(v, s as u8),
                    self.transitions[c * self.width + s],
                ) {
                    self.queue.push((u, d));
                }
            }
        }
        true
    }

    /// Fixes `δ(color, symbol) = target` and pushes every consequence.
    fn set_transition(&mut self, color: usize, symbol: usize, target: usize) -> bool {
        let cell = color * self.width + symbol;
        self.transitions[cell] = Some(target);
        self.trail.push(Undo::Transition(cell));
        if target == self.open {
            self.trail.push(Undo::Open(self.open));
            self.open += 1;
        }
        for i in 0..self.members[color].len() {
            let v = self.members[color][i];
            if let Some(u) = self.tree.child(v, symbol as u8) {
                self.queue.push((u, target));
            }
        }
        self.propagate()
    }

    /// Least undecided node at or after `from`; all earlier nodes are colored.
    fn next_undecided(&self, from: usize) -> Option<usize> {
        (from..self.tree.len()).find(|&v| self.node_color[v].is_none())
    }

    /// `(parent color, symbol, candidate colors)` for the branching node.
    fn branch_point(&self, node: usize) -> (usize, usize, Vec<usize>) {
        let (parent, symbol) = self.tree.parent(node).expect("root is colored first");
        let parent_color = self.node_color[parent].expect("parents precede children");
        let bit = label_bit(self.tree.label(node));
        let limit = if self.open < self.k { self.open + 1 } else { self.open };
        let candidates = (0..limit)
            .filter(|&d| match (bit, self.color_label.get(d).copied().flatten()) {
                (Some(x), Some(y)) => x == y,
                _ => true,
            })
            .collect();
        (parent_color, symbol as usize, candidates)
    }

    fn start(&mut self) -> bool {
        if self.k == 0 {
            return false;
        }
        self.trail.push(Undo::Open(0));
        self.open = 1;
        self.queue.push((0, 0));
        self.propagate()
    }

    fn solve(&mut self, from: usize) -> bool {
        let Some(node) = self.next_undecided(from) else {
            return true;
        };
        let (color, symbol, candidates) = self.branch_point(node);
        for target in candidates {
            let mark = self.trail.len();
            if self.set_transition(color, symbol, target) && self.solve(node + 1) {
                return true;
            }
            self.undo_to(mark);
        }
        false
    }

    /// Search states after fixing up to `depth` branching decisions, in the
    /// order the sequential search would visit them. Completed colorings
    /// found on the way are included as-is.
    fn split(&self, depth: usize) -> Vec<(Search<'t>, usize)> {
        let mut layer = vec![(self.clone(), 0usize)];
        for _ in 0..depth {
            let mut next = Vec::new();
            for (state, from) in layer {
                let Some(node) = state.next_undecided(from) else {
                    next.push((state, from));
                    continue;
                };
                let (color, symbol, candidates) = state.branch_point(node);
                for target in candidates {
                    let mut child = state.clone();
                    if child.set_transition(color, symbol, target) {
                        next.push((child, node + 1));
                    }
                }
            }
            layer = next;
        }
        layer
    }

    fn into_dfa(self, alphabet: &Alphabet) -> Dfa {
        let mut builder =
            DfaBuilder::new(alphabet.clone(), self.open).expect("search opens the root color");
        for c in 0..self.open {
            for s in 0..self.width {
                if let Some(d) = self.transitions[c * self.width + s] {
                    builder
                        .set_transition(c, s as u8, d)
                        .expect("colors are below the open count");
                }
            }
            builder
                .set_accepting(c, self.color_label[c] == Some(true))
                .expect("color in range");
        }
        builder
            .set_initial(0)
            .expect("root color exists")
            .complete_with_self_loops();
        builder.build().expect("completed builder is total")
    }
}

/// A DFA with at most `k` states consistent with `sample`, or `None` if no
/// such automaton exists. Transitions no sample word uses become self-loops.
pub fn find_consistent_dfa(sample: &Sample, k: usize) -> Option<Dfa> {
    find_consistent_dfa_with(sample, k, SolverOptions::default())
}

pub fn find_consistent_dfa_with(sample: &Sample, k: usize, options: SolverOptions) -> Option<Dfa> {
    let tree = PrefixTree::build(sample);
    let mut search = Search::new(&tree, k);
    if !search.start() {
        return None;
    }
    let solved = if options.parallel {
        search
            .split(3)
            .into_par_iter()
            .find_map_first(|(mut state, from)| state.solve(from).then_some(state))
    } else {
        search.solve(1).then_some(search)
    };
    let dfa = solved?.into_dfa(sample.alphabet());
    debug_assert!(is_consistent(&dfa, sample).is_ok_and(|v| v.is_consistent()));
    Some(dfa)
}

/// The least `k` in `1..=k_max` admitting a consistent DFA.
pub fn min_states(sample: &Sample, k_max: usize) -> Option<usize> {
    (1..=k_max).find(|&k| find_consistent_dfa(sample, k).is_some())
}

/// Result of an exhaustive oracle run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleSearch {
    pub dfa: Option<Dfa>,
    /// Candidate automata examined, including the returned one.
    pub examined: u64,
}

/// Tries every complete `k`-state DFA over a binary alphabet with initial
/// state 0: transition tables in base-`k` counting order (state 0 on `a`
/// most significant), and for each table every accepting set by bitmask.
pub fn brute_force_search(sample: &Sample, k: usize) -> Result<OracleSearch, SolverError> {
    if k > ORACLE_MAX_STATES {
        return Err(SolverError::TooManyStates {
            k,
            limit: ORACLE_MAX_STATES,
        });
    }
    let width = sample.alphabet().len();
    if width != 2 {
        return Err(SolverError::AlphabetSize { size: width });
    }
    let mut examined = 0;
    if k == 0 {
        return Ok(OracleSearch { dfa: None, examined });
    }
    let cells = k * width;
    let tables = (k as u64).pow(cells as u32);
    for code in 0..tables {
        let mut digits = vec![0usize; cells];
        let mut rest = code;
        for cell in (0..cells).rev() {
            digits[cell] = (rest % k as u64) as usize;
            rest /= k as u64;
        }
        let table: Vec<Vec<usize>> = digits.chunks(width).map(|row| row.to_vec()).collect();
        for mask in 0u32..1 << k {
            examined += 1;
            let accepting: Vec<usize> = (0..k).filter(|q| mask >> q & 1 == 1).collect();
            let dfa = Dfa::from_table(sample.alphabet().clone(), table.clone(), 0, &accepting)
                .expect("enumerated table is total and in range");
            if is_consistent(&dfa, sample).is_ok_and(|v| v.is_consistent()) {
                return Ok(OracleSearch {
                    dfa: Some(dfa),
                    examined,
                });
            }
        }
    }
    Ok(OracleSearch { dfa: None, examined })
}

/// The first consistent DFA with exactly `k` states in enumeration order.
pub fn brute_force_oracle(sample: &Sample, k: usize) -> Result<Option<Dfa>, SolverError> {
    brute_force_search(sample, k).map(|s| s.dfa)
}
