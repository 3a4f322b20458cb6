use dfacons::automata::{is_consistent, Alphabet, Dfa, Label, Sample, Verdict, Word};
use dfacons::solver::{brute_force_oracle, find_consistent_dfa, find_consistent_dfa_with, SolverOptions};
use proptest::prelude::*;

fn arb_word(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0u8..2, 0..=max_len).prop_map(Word::new)
}

fn arb_dfa() -> impl Strategy<Value = Dfa> {
    (1usize..6).prop_flat_map(|n| {
        (
            prop::collection::vec(prop::collection::vec(0..n, 2), n),
            0..n,
            prop::collection::btree_set(0..n, 0..=n),
        )
            .prop_map(|(table, initial, accepting)| {
                let accepting: Vec<usize> = accepting.into_iter().collect();
                Dfa::from_table(Alphabet::binary(), table, initial, &accepting).unwrap()
            })
    })
}

fn arb_sample(words: usize, max_len: usize) -> impl Strategy<Value = Sample> {
    prop::collection::btree_map(arb_word(max_len), any::<bool>(), 0..=words).prop_map(|labeled| {
        let (p, n): (Vec<_>, Vec<_>) = labeled.into_iter().partition(|(_, pos)| *pos);
        Sample::new(
            Alphabet::binary(),
            p.into_iter().map(|(w, _)| w),
            n.into_iter().map(|(w, _)| w),
        )
        .unwrap()
    })
}

proptest! {
    #[test]
    fn runs_compose_over_concatenation(dfa in arb_dfa(), u in arb_word(6), v in arb_word(6)) {
        let mid = dfa.run(&u).unwrap();
        prop_assert_eq!(dfa.run(&u.concat(&v)).unwrap(), dfa.run_from(mid, &v).unwrap());
    }

    #[test]
    fn consistency_decomposes_over_words(dfa in arb_dfa(), sample in arb_sample(8, 5)) {
        let direct = sample.positives().iter().all(|w| dfa.accepts(w).unwrap())
            && sample.negatives().iter().all(|w| !dfa.accepts(w).unwrap());
        let verdict = is_consistent(&dfa, &sample).unwrap();
        prop_assert_eq!(verdict.is_consistent(), direct);
        if let Verdict::Violation { word, label } = verdict {
            prop_assert_eq!(dfa.accepts(&word).unwrap(), label == Label::Negative);
            // no smaller offender exists
            for (w, l) in sample.labeled_words() {
                if w < &word {
                    prop_assert_eq!(dfa.accepts(w).unwrap(), l == Label::Positive);
                }
            }
        }
    }

    #[test]
    fn solver_is_sound_and_complete_for_small_k(sample in arb_sample(6, 4), k in 1usize..=3) {
        let found = find_consistent_dfa(&sample, k);
        if let Some(dfa) = &found {
            prop_assert!(dfa.state_count() <= k);
            prop_assert!(is_consistent(dfa, &sample).unwrap().is_consistent());
        }
        let oracle = (1..=k).any(|j| brute_force_oracle(&sample, j).unwrap().is_some());
        prop_assert_eq!(found.is_some(), oracle);
    }

    #[test]
    fn solver_is_monotone_in_k(sample in arb_sample(8, 5)) {
        let answers: Vec<bool> = (1..=5).map(|k| find_consistent_dfa(&sample, k).is_some()).collect();
        for pair in answers.windows(2) {
            prop_assert!(!pair[0] || pair[1]);
        }
    }

    #[test]
    fn solver_is_deterministic(sample in arb_sample(8, 5), k in 1usize..=4) {
        prop_assert_eq!(find_consistent_dfa(&sample, k), find_consistent_dfa(&sample, k));
    }

    #[test]
    fn parallel_mode_agrees_on_existence(sample in arb_sample(8, 5), k in 1usize..=4) {
        let parallel = find_consistent_dfa_with(&sample, k, SolverOptions { parallel: true });
        prop_assert_eq!(parallel.is_some(), find_consistent_dfa(&sample, k).is_some());
        if let Some(dfa) = parallel {
            prop_assert!(is_consistent(&dfa, &sample).unwrap().is_consistent());
        }
    }
}
