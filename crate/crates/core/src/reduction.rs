//! Reductions from pure-polarity 3SAT to DFA consistency over `{a, b}`.
//!
//! [`gold_reduce`] is the cycle construction with `k = n + m` states: the
//! first `m` states of an `a`-cycle stand for clauses, the last `n` for
//! variables, and `b`-edges encode which variable satisfies each clause and
//! whether each variable is true. [`witness_dfa`] and [`extract_assignment`]
//! are its two proof directions.
//!
//! [`dlh_reduce`] generates the textbook-style instance whose state bound is
//! refuted in [`crate::counterexamples`].

use thiserror::Error;

use crate::automata::{is_consistent, Alphabet, AutomataError, Dfa, Label, Sample, Verdict, Word, A, B};
use crate::cnf::{Assignment, CnfError, PureCnf};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error(transparent)]
    Cnf(#[from] CnfError),
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error("assignment falsifies clause {clause}")]
    Falsified { clause: usize },
    #[error("automaton has {got} states but the instance requires exactly {expected}")]
    StateCount { expected: usize, got: usize },
    #[error("automaton is inconsistent with the instance: {label} word {word}")]
    Inconsistent { word: String, label: Label },
    #[error("a^{later} reaches the same state as a^{earlier}; the a-transitions do not form a {k}-cycle")]
    RepeatedState { earlier: usize, later: usize, k: usize },
    #[error("extracted assignment {assignment} falsifies clause {clause}")]
    ExtractionFailed { assignment: String, clause: usize },
}

/// Which construction produced an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Construction {
    /// The `k = n + m` cycle construction.
    GoldStyle,
    /// The textbook construction with the bound chosen by [`DlhBound`].
    DeLaHiguera(DlhBound),
}

/// The two state bounds the textbook construction is stated with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DlhBound {
    /// `n` states.
    #[default]
    Variables,
    /// `n + 1` states.
    VariablesPlusOne,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionInstance {
    pub sample: Sample,
    pub k: usize,
    pub construction: Construction,
    pub source: PureCnf,
}

fn a_pow(count: usize) -> Word {
    Word::power(A, count)
}

/// `a^prefix b a^suffix`
fn a_b_a(prefix: usize, suffix: usize) -> Word {
    a_pow(prefix).then(B).then_power(A, suffix)
}

fn binary_sample(positives: Vec<Word>, negatives: Vec<Word>) -> Sample {
    Sample::new(Alphabet::binary(), positives, negatives)
        .expect("reduction word sets are disjoint binary words by construction")
}

/// Builds the DFA-consistency instance with `k = n + m`:
///
/// * `P = {ε, a^k} ∪ {a^i bb | C_i positive}`
/// * `N = {a^i | 0 < i < k} ∪ {a^i bb | C_i negative}
///   ∪ {a^i b a^(k-r) | 0 ≤ r < k, r < m or x_(r-m) ∉ C_i}`
///
/// Membership `x_(r-m) ∉ C_i` looks only at the clause's variable set.
pub fn gold_reduce(cnf: &PureCnf) -> ReductionInstance {
    let n = cnf.variable_count();
    let m = cnf.clause_count();
    let k = n + m;

    let mut positives = vec![Word::empty(), a_pow(k)];
    let mut negatives: Vec<Word> = (1..k).map(a_pow).collect();
    for (i, clause) in cnf.clauses().iter().enumerate() {
        let abb = a_pow(i).then(B).then(B);
        if clause.is_positive() {
            positives.push(abb);
        } else {
            negatives.push(abb);
        }
        for r in 0..k {
            if r < m || !clause.contains(r - m) {
                negatives.push(a_b_a(i, k - r));
            }
        }
    }
    ReductionInstance {
        sample: binary_sample(positives, negatives),
        k,
        construction: Construction::GoldStyle,
        source: cnf.clone(),
    }
}

/// The `k`-state automaton for a satisfying assignment.
///
/// States `0..m` are clause states and `m..m+n` variable states; `a` walks
/// the cycle, clause state `i` sends `b` to the state of the smallest-index
/// variable that satisfies `C_i`, and variable state `m+j` sends `b` to the
/// initial state when `β(x_j)` is true and to itself otherwise.
pub fn witness_dfa(cnf: &PureCnf, beta: &Assignment) -> Result<Dfa, ReductionError> {
    if let Some(clause) = cnf.first_falsified(beta)? {
        return Err(ReductionError::Falsified { clause });
    }
    let n = cnf.variable_count();
    let m = cnf.clause_count();
    let k = n + m;
    let mut table = vec![[0usize; 2]; k];
    for (q, row) in table.iter_mut().enumerate() {
        row[A as usize] = (q + 1) % k;
    }
    for (i, clause) in cnf.clauses().iter().enumerate() {
        let j = clause
            .variables()
            .iter()
            .copied()
            .find(|&j| clause.satisfied_by_value(beta.value(j)))
            .expect("satisfied clause has a satisfying member");
        table[i][B as usize] = m + j;
    }
    for j in 0..n {
        table[m + j][B as usize] = if beta.value(j) { 0 } else { m + j };
    }
    let table = table.into_iter().map(|row| row.to_vec()).collect();
    Ok(Dfa::from_table(Alphabet::binary(), table, 0, &[0])?)
}

/// States reached by `a^0 .. a^(k-1)`, failing if any two coincide.
pub fn a_cycle(dfa: &Dfa, k: usize) -> Result<Vec<usize>, ReductionError> {
    let mut states = Vec::with_capacity(k);
    let mut q = dfa.initial();
    for later in 0..k {
        if let Some(earlier) = states.iter().position(|&s| s == q) {
            return Err(ReductionError::RepeatedState { earlier, later, k });
        }
        states.push(q);
        q = dfa.target(q, A);
    }
    Ok(states)
}

/// Reads `β` off a `k`-state automaton consistent with `gold_reduce(cnf)`:
/// with `s_i` the state reached by `a^i`, `β(x_j)` is true iff
/// `δ(s_(m+j), b) = s_0`.
pub fn extract_assignment(cnf: &PureCnf, dfa: &Dfa) -> Result<Assignment, ReductionError> {
    let instance = gold_reduce(cnf);
    if dfa.state_count() != instance.k {
        return Err(ReductionError::StateCount {
            expected: instance.k,
            got: dfa.state_count(),
        });
    }
    if let Verdict::Violation { word, label } = is_consistent(dfa, &instance.sample)? {
        return Err(ReductionError::Inconsistent {
            word: word.to_string(),
            label,
        });
    }
    let states = a_cycle(dfa, instance.k)?;
    let m = cnf.clause_count();
    let beta = Assignment::new(
        (0..cnf.variable_count())
            .map(|j| dfa.target(states[m + j], B) == states[0])
            .collect(),
    );
    if let Some(clause) = cnf.first_falsified(&beta)? {
        return Err(ReductionError::ExtractionFailed {
            assignment: beta.to_string(),
            clause,
        });
    }
    Ok(beta)
}

/// The textbook construction with the `n`-state bound. See
/// [`dlh_reduce_with_bound`].
pub fn dlh_reduce(cnf: &PureCnf) -> ReductionInstance {
    dlh_reduce_with_bound(cnf, DlhBound::Variables)
}

/// Builds the textbook-style instance, with clauses `C_1..C_m` and
/// variables `x_1..x_n` numbered from one:
///
/// * `P = {a^n} ∪ {a^(i-1) b a^n b | C_i positive}`
/// * `N = {a^t, a^(n+t) | 1 ≤ t < n} ∪ {a^(i-1) b a^n b | C_i negative}
///   ∪ {a^(i-1) b a^(n-j+1) | x_j ∉ C_i}`
pub fn dlh_reduce_with_bound(cnf: &PureCnf, bound: DlhBound) -> ReductionInstance {
    let n = cnf.variable_count();
    let mut positives = vec![a_pow(n)];
    let mut negatives: Vec<Word> = (1..n).flat_map(|t| [a_pow(t), a_pow(n + t)]).collect();
    for (clause_index, clause) in cnf.clauses().iter().enumerate() {
        let probe = a_b_a(clause_index, n).then(B);
        if clause.is_positive() {
            positives.push(probe);
        } else {
            negatives.push(probe);
        }
        // 0-based variable v is x_(v+1), so a^(n-j+1) becomes a^(n-v)
        for v in (0..n).filter(|&v| !clause.contains(v)) {
            negatives.push(a_b_a(clause_index, n - v));
        }
    }
    let k = match bound {
        DlhBound::Variables => n,
        DlhBound::VariablesPlusOne => n + 1,
    };
    ReductionInstance {
        sample: binary_sample(positives, negatives),
        k,
        construction: Construction::DeLaHiguera(bound),
        source: cnf.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::Clause;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn three_clause() -> PureCnf {
        PureCnf::new(
            3,
            vec![
                Clause::negative([0]).unwrap(),
                Clause::positive([1]).unwrap(),
                Clause::positive([2]).unwrap(),
            ],
        )
        .unwrap()
    }

    fn unit_positive() -> PureCnf {
        PureCnf::new(1, vec![Clause::positive([0]).unwrap()]).unwrap()
    }

    fn words(list: &[&str]) -> BTreeSet<Word> {
        list.iter()
            .map(|w| Alphabet::binary().parse_word(w).unwrap())
            .collect()
    }

    fn cycle_witness() -> Dfa {
        Dfa::from_table(
            Alphabet::binary(),
            vec![
                vec![1, 3],
                vec![2, 4],
                vec![3, 5],
                vec![4, 3],
                vec![5, 0],
                vec![0, 0],
            ],
            0,
            &[0],
        )
        .unwrap()
    }

    #[test]
    fn gold_reduce_three_clause_sets() {
        let instance = gold_reduce(&three_clause());
        assert_eq!(instance.k, 6);
        assert_eq!(instance.sample.positives(), &words(&["", "aaaaaa", "abb", "aabb"]));
        // hand expansion: a..a^5, bb, and per clause i every a^i b a^(6-r)
        // except r = 3 + i
        let mut expected: Vec<String> = (1..6).map(|i| "a".repeat(i)).collect();
        expected.push("bb".into());
        for i in 0..3 {
            for r in (0..6).filter(|&r| r != 3 + i) {
                expected.push(format!("{}b{}", "a".repeat(i), "a".repeat(6 - r)));
            }
        }
        let expected: Vec<&str> = expected.iter().map(String::as_str).collect();
        assert_eq!(instance.sample.negatives(), &words(&expected));
        assert_eq!(instance.sample.negatives().len(), 21);
        for w in ["bb", "abaaa", "baaaaaa"] {
            assert!(instance.sample.negatives().contains(&Alphabet::binary().parse_word(w).unwrap()));
        }
    }

    #[test]
    fn gold_reduce_single_unit_clause() {
        let instance = gold_reduce(&unit_positive());
        assert_eq!(instance.k, 2);
        assert_eq!(instance.sample.positives(), &words(&["", "aa", "bb"]));
        // r = 0 gives ba²; r = 1 is excluded because x_0 ∈ C_0
        assert_eq!(instance.sample.negatives(), &words(&["a", "baa"]));
    }

    #[test]
    fn witness_reproduces_cycle() {
        let beta = Assignment::new(vec![false, true, true]);
        let dfa = witness_dfa(&three_clause(), &beta).unwrap();
        assert_eq!(dfa, cycle_witness());
        assert!(is_consistent(&dfa, &gold_reduce(&three_clause()).sample)
            .unwrap()
            .is_consistent());
    }

    #[test]
    fn witness_for_unit_clause() {
        let dfa = witness_dfa(&unit_positive(), &Assignment::new(vec![true])).unwrap();
        assert_eq!(dfa.table(), vec![vec![1, 1], vec![0, 0]]);
        assert!(is_consistent(&dfa, &gold_reduce(&unit_positive()).sample)
            .unwrap()
            .is_consistent());
    }

    #[test]
    fn witness_picks_smallest_satisfying_variable() {
        let cnf = PureCnf::new(3, vec![Clause::positive([0, 1, 2]).unwrap()]).unwrap();
        let dfa = witness_dfa(&cnf, &Assignment::new(vec![false, true, true])).unwrap();
        assert_eq!(dfa.target(0, B), 1 + 1);
    }

    #[test]
    fn witness_rejects_falsifying_assignment() {
        let err = witness_dfa(&three_clause(), &Assignment::new(vec![true, true, true])).unwrap_err();
        assert_eq!(err, ReductionError::Falsified { clause: 0 });
        assert!(matches!(
            witness_dfa(&three_clause(), &Assignment::new(vec![true])),
            Err(ReductionError::Cnf(CnfError::AssignmentLength { .. }))
        ));
    }

    #[test]
    fn extraction_from_cycle_and_unit() {
        assert_eq!(
            extract_assignment(&three_clause(), &cycle_witness()).unwrap(),
            Assignment::new(vec![false, true, true])
        );
        let unit = witness_dfa(&unit_positive(), &Assignment::new(vec![true])).unwrap();
        assert_eq!(
            extract_assignment(&unit_positive(), &unit).unwrap(),
            Assignment::new(vec![true])
        );
    }

    #[test]
    fn extraction_is_label_invariant() {
        // swap states 1 and 4 of the cycle witness; s_i is recovered from the a-run
        let perm = [0usize, 4, 2, 3, 1, 5];
        let original = cycle_witness();
        let mut table = vec![vec![0; 2]; 6];
        for q in 0..6 {
            for s in [A, B] {
                table[perm[q]][s as usize] = perm[original.target(q, s)];
            }
        }
        let relabeled = Dfa::from_table(Alphabet::binary(), table, 0, &[0]).unwrap();
        assert_eq!(
            extract_assignment(&three_clause(), &relabeled).unwrap(),
            Assignment::new(vec![false, true, true])
        );
    }

    #[test]
    fn extraction_preconditions() {
        let small = Dfa::from_table(Alphabet::binary(), vec![vec![0, 0]], 0, &[0]).unwrap();
        assert_eq!(
            extract_assignment(&three_clause(), &small).unwrap_err(),
            ReductionError::StateCount { expected: 6, got: 1 }
        );
        let broken = cycle_witness().with_transition(3, B, 0).unwrap();
        assert_eq!(
            extract_assignment(&three_clause(), &broken).unwrap_err(),
            ReductionError::Inconsistent {
                word: "bb".into(),
                label: Label::Negative
            }
        );
    }

    #[test]
    fn a_cycle_detects_repeats() {
        let dfa = Dfa::from_table(Alphabet::binary(), vec![vec![1, 0], vec![1, 1], vec![2, 2]], 0, &[0]).unwrap();
        assert_eq!(
            a_cycle(&dfa, 3).unwrap_err(),
            ReductionError::RepeatedState { earlier: 1, later: 2, k: 3 }
        );
        assert_eq!(a_cycle(&cycle_witness(), 6).unwrap(), vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn dlh_reduce_small_formula() {
        let instance = dlh_reduce(&three_clause());
        assert_eq!(instance.k, 3);
        let p = instance.sample.positives();
        let n = instance.sample.negatives();
        for w in words(&["aaa", "abaaab"]) {
            assert!(p.contains(&w), "{w}");
        }
        for w in words(&["a", "aa", "aaaa", "aaaaa", "aba", "abaaa"]) {
            assert!(n.contains(&w), "{w}");
        }
        assert_eq!(dlh_reduce_with_bound(&three_clause(), DlhBound::VariablesPlusOne).k, 4);
    }

    fn arb_pure_cnf() -> impl Strategy<Value = PureCnf> {
        (1usize..=5).prop_flat_map(|n| {
            let clause = (any::<bool>(), prop::collection::btree_set(0..n, 1..=3.min(n)));
            prop::collection::vec(clause, 1..=5).prop_map(move |clauses| {
                let clauses = clauses
                    .into_iter()
                    .map(|(pos, vars)| {
                        if pos {
                            Clause::positive(vars).unwrap()
                        } else {
                            Clause::negative(vars).unwrap()
                        }
                    })
                    .collect();
                PureCnf::new(n, clauses).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn gold_size_laws(cnf in arb_pure_cnf()) {
            let instance = gold_reduce(&cnf);
            let (n, m) = (cnf.variable_count(), cnf.clause_count());
            let k = n + m;
            prop_assert_eq!(instance.k, k);
            prop_assert_eq!(instance.sample.positives().len(), 2 + cnf.positive_clause_count());
            prop_assert!(instance.sample.negatives().len() <= (k - 1) + m + m * k);
            prop_assert!(instance.sample.positives().is_disjoint(instance.sample.negatives()));
        }

        #[test]
        fn every_satisfying_assignment_yields_consistent_witness(cnf in arb_pure_cnf()) {
            let instance = gold_reduce(&cnf);
            for beta in cnf.all_satisfying().unwrap() {
                let dfa = witness_dfa(&cnf, &beta).unwrap();
                prop_assert!(is_consistent(&dfa, &instance.sample).unwrap().is_consistent());
                let back = extract_assignment(&cnf, &dfa).unwrap();
                prop_assert!(cnf.evaluate(&back).unwrap());
            }
        }

        #[test]
        fn dlh_sets_are_disjoint(cnf in arb_pure_cnf()) {
            let instance = dlh_reduce(&cnf);
            prop_assert!(instance.sample.positives().is_disjoint(instance.sample.negatives()));
            prop_assert_eq!(instance.sample.positives().len(), 1 + cnf.positive_clause_count());
        }
    }
}
