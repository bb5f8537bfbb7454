mod common;

use num_bigint::BigUint;
use proptest::prelude::*;

use common::*;
use ulcode_core::codeword::CodeAssignment;
use ulcode_core::convert::convert_codewords;
use ulcode_core::cost_graph::{extend_beyond_k, CostGraph};
use ulcode_core::driver::{
    check_grouping, enumerate_guesses, f0_candidates, raw_guess_count, solve_tiny_ell1_unchecked,
    Method,
};
use ulcode_core::instance::CostGrid;
use ulcode_core::kprefix::Placement;
use ulcode_core::rational::{self, int, ratio, to_f64, Rational};
use ulcode_core::*;

/// Slack allowed between the best leveled k-prefix code and the optimal
/// prefix code: `1 + C7 * epsilon`.
const C7: i64 = 1;
/// Largest unpruned guess space the exhaustive cross-check will walk.
const EXHAUSTIVE_GUESS_LIMIT: u64 = 20_000;

fn eps_strategy() -> impl Strategy<Value = Rational> {
    prop_oneof![Just(ratio(1, 5)), Just(ratio(3, 10)), Just(ratio(1, 2)), Just(int(1))]
}

fn instance_strategy(max_n: usize) -> impl Strategy<Value = Instance> {
    (
        prop::collection::vec(1i64..=20, 2..=max_n),
        prop::collection::vec(1i64..=4, 2..=3),
        eps_strategy(),
    )
        .prop_map(|(mut w, mut c, eps)| {
            w.sort_unstable_by(|a, b| b.cmp(a));
            c.sort_unstable();
            Instance::from_integers(&w, &c, eps).unwrap()
        })
}

fn word_strategy(r: u32) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(0..r, 1..=5)
}

fn grid_strategy() -> impl Strategy<Value = (Vec<u64>, u64)> {
    prop::collection::vec(1u64..=3, 2..=3).prop_flat_map(|mut units| {
        units.sort_unstable();
        let one = units[1];
        (Just(units), one..=7u64)
    })
}

fn normalized_cost(inst: &Instance, costs_units: u128, quantum: &Rational) -> Rational {
    rational::from_u128(costs_units) * quantum / rational::from_u128(inst.total_int_weight())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn trie_check_matches_pairwise(
        words in prop::collection::vec(word_strategy(3), 1..=6),
        units in prop::collection::vec(1u64..=3, 3),
        k in 0u64..=10,
    ) {
        let mut units = units;
        units.sort_unstable();
        let codewords: Vec<Codeword> = words.iter().map(|w| Codeword::from_letters(w)).collect();
        let expected = brute_k_prefix_free(&words, &units, k);
        let got = CodewordTrie::from_codewords(&codewords)
            .is_ok_and(|t| t.is_k_prefix_free_units(&units, k));
        prop_assert_eq!(got, expected);
        prop_assert_eq!(is_prefix_free(&codewords), brute_prefix_free(&words));
    }

    #[test]
    fn codeword_cost_is_additive(a in word_strategy(3), b in word_strategy(3)) {
        let letters = LetterCosts::new(vec![ratio(1, 3), int(1), ratio(5, 2)]).unwrap();
        let (x, y) = (Codeword::from_letters(&a), Codeword::from_letters(&b));
        prop_assert_eq!(
            codeword_cost(&x.concat(&y), &letters),
            codeword_cost(&x, &letters) + codeword_cost(&y, &letters)
        );
    }

    #[test]
    fn reorder_orders_and_never_costs_more(
        inst in instance_strategy(6),
        words in prop::collection::vec(word_strategy(2), 6),
    ) {
        let n = inst.n();
        let code = CodeAssignment::new(words[..n].iter().map(|w| Codeword::from_letters(w)).collect());
        let fixed = reorder(&code, inst.letters());
        prop_assert!(fixed.is_ordered(inst.letters()));
        prop_assert!(code_cost(&fixed, &inst).unwrap() <= code_cost(&code, &inst).unwrap());
    }

    #[test]
    fn normalization_shape(inst in instance_strategy(4)) {
        let norm = normalize(&inst).unwrap();
        let costs = norm.letters().costs();
        prop_assert_eq!(&costs[1], &int(1));
        prop_assert!(&norm.epsilon_prime <= inst.epsilon());
        for c in &costs[1..] {
            prop_assert!((c / &norm.epsilon_prime).is_integer());
        }
        let l1 = &costs[0];
        let ep = &norm.epsilon_prime;
        prop_assert!((ep / l1).is_integer() || (l1 / ep).is_integer());
        let again = normalize(&norm.instance).unwrap();
        prop_assert_eq!(again.letters().costs(), costs);
        prop_assert_eq!(&again.epsilon_prime, ep);
    }

    #[test]
    fn free_counts_match_enumeration(
        (units, k) in grid_strategy(),
        picks in prop::collection::vec(any::<prop::sample::Index>(), 0..=3),
    ) {
        let graph = CostGraph::from_grid(CostGrid::from_units(units.clone(), units[1], 1), k).unwrap();
        let pool: Vec<Vec<Letter>> = strings_up_to(&units, k)
            .into_iter()
            .map(|(s, _)| s)
            .filter(|s| !s.is_empty())
            .collect();
        let mut set: Vec<Vec<Letter>> = picks.iter().map(|i| pool[i.index(pool.len())].clone()).collect();
        set.sort();
        set.dedup();
        let words: Vec<Codeword> = set.iter().map(|s| Codeword::from_letters(s)).collect();
        let table = count_free_strings(&graph, &CodewordTrie::from_codewords(&words).unwrap());
        let expected = brute_free_counts(&units, &set, k);
        for x in 0..=k {
            prop_assert_eq!(table.get(x), BigUint::from(expected[x as usize]));
        }
    }

    #[test]
    fn extension_is_sorted_and_k_prefix_free(
        (units, k) in grid_strategy(),
        picks in prop::collection::vec(any::<prop::sample::Index>(), 0..=3),
        m in 0u64..=12,
    ) {
        let graph = CostGraph::from_grid(CostGrid::from_units(units.clone(), units[1], 1), k).unwrap();
        // S: prefix-free strings of cost below k.
        let pool: Vec<Vec<Letter>> = strings_up_to(&units, k - 1)
            .into_iter()
            .map(|(s, _)| s)
            .filter(|s| !s.is_empty())
            .collect();
        let mut set: Vec<Vec<Letter>> = Vec::new();
        for i in picks.iter().filter(|_| !pool.is_empty()) {
            let s = pool[i.index(pool.len())].clone();
            let mut trial = set.clone();
            trial.push(s);
            if brute_prefix_free(&trial) {
                set = trial;
            }
        }
        let words: Vec<Codeword> = set.iter().map(|s| Codeword::from_letters(s)).collect();
        let mut table = count_free_strings(&graph, &CodewordTrie::from_codewords(&words).unwrap());
        match extend_beyond_k(&graph, &mut table, m) {
            Ok(tail) => {
                prop_assert_eq!(tail.len() as u64, m);
                let costs: Vec<u64> = tail.iter().map(|c| c.cost_units(&units)).collect();
                prop_assert!(costs.windows(2).all(|w| w[0] <= w[1]));
                prop_assert!(costs.iter().all(|&c| c >= k));
                let mut all: Vec<Vec<Letter>> = set.clone();
                all.extend(tail.iter().map(to_letters));
                prop_assert!(brute_k_prefix_free(&all, &units, k));
                // Nothing cheaper was skipped.
                if let Some(&last) = costs.last() {
                    let eligible = strings_up_to(&units, last)
                        .into_iter()
                        .filter(|(s, c)| *c >= k && *c < last && !has_prefix_in(s, &set))
                        .count();
                    prop_assert!(eligible as u64 <= m);
                    let below = costs.iter().filter(|&&c| c < last).count();
                    prop_assert_eq!(below, eligible);
                }
            }
            Err(short) => {
                // Every long string must have a prefix in S.
                let window = k + units[units.len() - 1];
                let eligible = strings_up_to(&units, window)
                    .into_iter()
                    .filter(|(s, c)| *c >= k && !has_prefix_in(s, &set))
                    .count();
                prop_assert!((eligible as u64) < m);
                prop_assert_eq!(short.wanted, m);
            }
        }
    }

    #[test]
    fn leveled_codes_are_k_prefix_free_and_maximal(
        (units, _) in grid_strategy(),
        levels in prop::collection::vec(0u64..=3, 1..=4),
        extra in 0usize..=6,
    ) {
        let one = units[1];
        let k = one + levels.len() as u64;
        let graph = CostGraph::from_grid(CostGrid::from_units(units.clone(), one, 1), k).unwrap();
        let n = levels.iter().sum::<u64>() as usize + extra;
        prop_assume!(n > 0);
        let guess = Guess::new(0, levels.clone());
        if let Ok(code) = construct_leveled(&graph, &guess, n) {
            prop_assert_eq!(code.len(), n);
            let words: Vec<Vec<Letter>> = code.codewords().iter().map(to_letters).collect();
            prop_assert!(brute_k_prefix_free(&words, &units, k));
            for ((c, &cost), place) in code.codewords().iter().zip(code.costs()).zip(code.placement()) {
                prop_assert_eq!(c.cost_units(&units), cost);
                match place {
                    Placement::Level(i) => prop_assert_eq!(cost, graph.level_top(*i)),
                    Placement::Tail => prop_assert!(cost >= k),
                }
            }
            for (i, &f) in levels.iter().enumerate() {
                let on = code.placement().iter().filter(|p| **p == Placement::Level(i + 1)).count();
                prop_assert_eq!(on as u64, f);
            }
        }
    }

    #[test]
    fn level_zero_codeword_is_the_only_run_of_a(
        f0 in 1u64..=3,
        levels in prop::collection::vec(0u64..=2, 4),
        extra in 0usize..=3,
    ) {
        // l = (1/4, 1) on quarters, eps = 1/4.
        let graph = CostGraph::from_grid(CostGrid::from_units(vec![1, 4], 4, 1), 8).unwrap();
        let n = 1 + levels.iter().sum::<u64>() as usize + extra;
        if let Ok(code) = construct_leveled(&graph, &Guess::new(f0, levels), n) {
            prop_assert_eq!(&code.codewords()[0], &Codeword::repeat(0, f0));
            prop_assert!(code.codewords()[1..].iter().all(|c| c.count(1) > 0));
        }
    }

    #[test]
    fn escape_blocks_are_doubled(i in 0u64..1_000_000) {
        let e: Vec<Letter> = enc(i).letters().collect();
        let body = &e[..e.len() - 2];
        prop_assert_eq!(&e[e.len() - 2..], &[0, 1]);
        prop_assert!(body.chunks(2).all(|p| p[0] == p[1]));
        if i > 0 {
            let bits: Vec<Letter> = body.iter().step_by(2).copied().collect();
            let value = bits.iter().fold(0u64, |acc, &b| 2 * acc + b as u64);
            prop_assert_eq!(value, i);
            prop_assert_eq!(e.len() as u32, 2 * (63 - i.leading_zeros()) + 4);
        }
    }

    #[test]
    fn conversion_output_is_prefix_free(
        (units, _) in grid_strategy(),
        levels in prop::collection::vec(0u64..=2, 1..=3),
        extra in 0usize..=10,
    ) {
        let one = units[1];
        let k = one + levels.len() as u64;
        let graph = CostGraph::from_grid(CostGrid::from_units(units.clone(), one, 1), k).unwrap();
        let n = levels.iter().sum::<u64>() as usize + extra;
        prop_assume!(n > 0);
        if let Ok(code) = construct_leveled(&graph, &Guess::new(0, levels), n) {
            let done = convert_codewords(code.codewords(), &units, k);
            let words: Vec<Vec<Letter>> = done.codewords.iter().map(to_letters).collect();
            prop_assert!(brute_prefix_free(&words));
            for (old, new) in code.codewords().iter().zip(&done.codewords) {
                let (c0, c1) = (old.cost_units(&units), new.cost_units(&units));
                if c0 < k {
                    prop_assert_eq!(old, new);
                } else {
                    let allowed = one as f64 * (5.0 + 2.0 * (c0 as f64 / one as f64).log2());
                    prop_assert!((c1 - c0) as f64 <= allowed);
                }
            }
        }
    }

    #[test]
    fn groupings_keep_their_invariants(
        mut w in prop::collection::vec(1i64..=1000, 1..=150),
        eps in eps_strategy(),
    ) {
        w.sort_unstable_by(|a, b| b.cmp(a));
        let inst = Instance::from_integers(&w, &[1, 2], eps).unwrap();
        let norm = normalize(&inst).unwrap();
        let k = choose_k(&norm.epsilon_prime);
        let g = group_words(&norm, &k);
        prop_assert!(check_grouping(&g, &norm.instance, &norm.epsilon_prime, &k));
    }

    #[test]
    fn k_grows_as_epsilon_shrinks(m in 1i64..=40) {
        prop_assert!(choose_k(&ratio(1, m + 1)) >= choose_k(&ratio(1, m)));
        let k = choose_k(&ratio(1, m));
        prop_assert!(((&k - int(1)) * int(m)).is_integer());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solve_is_near_optimal(inst in instance_strategy(7)) {
        let report = solve(&inst).unwrap();
        let exact = exact_optimal(&inst, 2 * inst.n() as u32).unwrap();
        prop_assert!(report.total_cost >= exact.optimal_cost);
        prop_assert!(report.total_cost <= &exact.optimal_cost * &report.ratio_bound);
        prop_assert!(report.lower_bound <= report.normalized_cost);
        prop_assert!(is_prefix_free(report.code.codewords()));
        prop_assert!(report.code.is_ordered(inst.letters()));
    }

    #[test]
    fn search_finds_the_best_enumerated_guess(inst in instance_strategy(5)) {
        let report = solve(&inst).unwrap();
        prop_assume!(report.method == Method::Leveled);
        let norm = normalize(&inst).unwrap();
        let k = report.k.clone().unwrap();
        let graph = build_cost_graph(&norm, &k).unwrap();
        let grouping = group_words(&norm, &k);
        let f0s = f0_candidates(&norm);
        let raw = raw_guess_count(grouping.len(), f0s.len(), graph.level_count());
        prop_assume!(raw <= BigUint::from(EXHAUSTIVE_GUESS_LIMIT));
        let mut best: Option<u128> = None;
        for g in enumerate_guesses(&grouping, &f0s, graph.level_count()) {
            if let Ok(code) = construct_leveled(&graph, &g.to_guess(&grouping), inst.n()) {
                let c = code.cost_units(norm.instance.int_weights());
                if best.is_none_or(|b| c < b) {
                    best = Some(c);
                }
            }
        }
        let best = normalized_cost(&inst, best.unwrap(), &norm.cost_quantum);
        prop_assert_eq!(report.kprefix_cost.clone().unwrap(), best.clone());

        // Some guess is within 1 + C7 eps of the optimal prefix code.
        let exact = exact_optimal(&inst, 2 * inst.n() as u32).unwrap();
        let opt = &exact.optimal_cost / (inst.total_weight() * inst.letters().cost(1));
        prop_assert!(best <= opt * (int(1) + int(C7) * inst.epsilon()));
    }

    #[test]
    fn exact_matches_huffman_on_equal_costs(
        mut w in prop::collection::vec(1i64..=30, 1..=8),
        r in 2usize..=3,
        c in 1i64..=3,
    ) {
        w.sort_unstable_by(|a, b| b.cmp(a));
        let inst = Instance::from_integers(&w, &vec![c; r], int(1)).unwrap();
        let exact = exact_optimal(&inst, 2 * w.len() as u32).unwrap();
        let huff = huffman_equal_costs(&inst).unwrap();
        prop_assert_eq!(&exact.optimal_cost, &huff.optimal_cost);
        prop_assert_eq!(code_cost(&huff.optimal_code, &inst).unwrap(), huff.optimal_cost);
    }

    #[test]
    fn exact_code_is_ordered_prefix_free_and_stable(
        w in prop::collection::vec(1i64..=9, 1..=7),
        mut c in prop::collection::vec(1i64..=4, 2..=3),
    ) {
        c.sort_unstable();
        let costs: Vec<Rational> = c.iter().map(|&x| int(x)).collect();
        let weights: Vec<Rational> = w.iter().map(|&x| int(x)).collect();
        let (inst, _) = Instance::from_unsorted(
            weights.clone(),
            LetterCosts::new(costs.clone()).unwrap(),
            int(1),
        ).unwrap();
        let n = inst.n() as u32;
        let exact = exact_optimal(&inst, 2 * n).unwrap();
        prop_assert!(is_prefix_free(exact.optimal_code.codewords()));
        prop_assert!(exact.optimal_code.is_ordered(inst.letters()));
        prop_assert_eq!(code_cost(&exact.optimal_code, &inst).unwrap(), exact.optimal_cost.clone());
        prop_assert!(lower_bound(&inst) * inst.total_weight() * inst.letters().cost(1) <= exact.optimal_cost);

        let mut reversed = weights.clone();
        reversed.reverse();
        let (flipped, _) = Instance::from_unsorted(reversed, LetterCosts::new(costs).unwrap(), int(1)).unwrap();
        prop_assert_eq!(&exact_optimal(&flipped, 2 * n).unwrap().optimal_cost, &exact.optimal_cost);

        // A deeper cap finds nothing cheaper.
        prop_assert_eq!(&exact_optimal(&inst, 2 * n + 2).unwrap().optimal_cost, &exact.optimal_cost);
    }

    #[test]
    fn adding_a_light_word_never_helps(
        mut w in prop::collection::vec(2i64..=9, 1..=6),
        mut c in prop::collection::vec(1i64..=4, 2..=3),
    ) {
        w.sort_unstable_by(|a, b| b.cmp(a));
        c.sort_unstable();
        let base = Instance::from_integers(&w, &c, int(1)).unwrap();
        w.push(1);
        let more = Instance::from_integers(&w, &c, int(1)).unwrap();
        let a = exact_optimal(&base, 2 * base.n() as u32).unwrap().optimal_cost;
        let b = exact_optimal(&more, 2 * more.n() as u32).unwrap().optimal_cost;
        prop_assert!(b >= a);
    }

    #[test]
    fn dispatch_boundary_solvers_agree(
        n in 2usize..=6,
        mut w in prop::collection::vec(1i64..=20, 6),
        eps in prop_oneof![Just(ratio(1, 2)), Just(ratio(1, 3)), Just(ratio(1, 4))],
        side in 0i64..=1,
    ) {
        w.truncate(n);
        w.sort_unstable_by(|a, b| b.cmp(a));
        // l_1 / l_2 on either side of eps / n.
        let l2 = rational::ceil_u64(&(int(n as i64) / &eps)).unwrap() as i64 * 4;
        let l1 = 4 + side;
        let inst = Instance::from_integers(&w, &[l1, l2], eps.clone()).unwrap();
        let dispatched = solve(&inst).unwrap();
        let small = solve_tiny_ell1_unchecked(&inst).unwrap();
        let slack = (int(1) + &eps) * (int(1) + &eps);
        prop_assert!(dispatched.total_cost <= &small.total_cost * &slack);
        prop_assert!(small.total_cost <= &dispatched.total_cost * &slack);
    }
}

#[test]
fn tiny_solver_example() {
    let inst = Instance::from_integers(&[6, 3, 1], &[1, 1000], ratio(1, 2)).unwrap();
    let report = driver::solve_tiny_ell1(&inst).unwrap();
    let exact = exact_optimal(&inst, 6).unwrap();
    assert!(report.total_cost <= exact.optimal_cost * (int(1) + ratio(1, 2)));
    assert!(is_prefix_free(report.code.codewords()));
    assert!(to_f64(&report.total_cost) > 0.0);
}

use ulcode_core::driver;
