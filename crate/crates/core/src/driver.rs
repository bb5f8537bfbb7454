//! End-to-end solver: parameter choice, word grouping, the search over level
//! guesses, and conversion of the winner into a prefix code.

use std::ops::Range;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::codeword::{code_cost, reorder, CodeAssignment, Codeword};
use crate::convert::convert_codewords;
use crate::cost_graph::{build_cost_graph, pre_count, Capped, CostGraph};
use crate::error::{Error, Result};
use crate::instance::{normalize, Instance, NormalizedInstance};
use crate::kprefix::{construct_leveled, Guess};
use crate::oracles::lower_bound;
use crate::rational::{self, int, ratio, Rational};

/// Default cap on search nodes explored by [`solve`].
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Approximation constant: [`solve`] returns codes of cost at most
/// `(1 + C_TOTAL_NUM / C_TOTAL_DEN * epsilon) * OPT`.
///
/// Measured against the exact solver on 60,000 random instances (`n <= 8`,
/// `r <= 3`, integer costs up to 4, `epsilon` in {0.2, 0.3, 0.5}): the worst
/// `(ratio - 1) / epsilon` was 0.44 for the leveled search and 0.80 for the
/// small-letter solver, whose construction caps it at 1.
pub const C_TOTAL_NUM: i64 = 1;
pub const C_TOTAL_DEN: i64 = 1;

pub fn c_total() -> Rational {
    ratio(C_TOTAL_NUM, C_TOTAL_DEN)
}

/// `1 + C_total * epsilon`.
pub fn ratio_bound(epsilon: &Rational) -> Rational {
    Rational::one() + c_total() * epsilon
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Overrides the threshold `k`; must be `1 + m * epsilon'` with `m >= 1`.
    pub k: Option<Rational>,
    /// Maximum number of search nodes before giving up.
    pub budget: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            k: None,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Which solver produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// One word; its codeword is `a`.
    SingleWord,
    /// Search over leveled k-prefix codes.
    Leveled,
    /// The cheapest letter costs at most `epsilon / n`.
    SmallLetter,
}

#[derive(Debug, Clone)]
pub struct CodeReport {
    /// Word `j` of the (sorted) instance gets codeword `j`.
    pub code: CodeAssignment,
    /// Sum of raw weight times codeword cost, in the input's units.
    pub total_cost: Rational,
    /// Expected codeword cost with costs divided by `l_2`.
    pub normalized_cost: Rational,
    /// `1 - p_1`, in the same units as `normalized_cost`.
    pub lower_bound: Rational,
    /// The factor `1 + C_total * epsilon` the code is guaranteed to meet.
    pub ratio_bound: Rational,
    /// Expected cost of the leveled k-prefix code before conversion, under the
    /// normalized letter costs.
    pub kprefix_cost: Option<Rational>,
    /// Complete guesses evaluated.
    pub guess_count: u64,
    /// Search nodes explored, complete or not.
    pub search_nodes: u64,
    pub method: Method,
    pub k: Option<Rational>,
    pub epsilon_prime: Option<Rational>,
    pub elapsed: Duration,
}

/// Smallest `k = 1 + m*epsilon` with `(5 + 2 log2 k) / k <= 2 epsilon`, so that
/// conversion inflates the cost by at most `1 + 2 epsilon`.
pub fn choose_k(epsilon: &Rational) -> Rational {
    let eps = rational::to_f64(epsilon);
    let mut m = 1i64;
    loop {
        let k = Rational::one() + epsilon * int(m);
        let kf = rational::to_f64(&k);
        if (5.0 + 2.0 * kf.log2()) / kf <= 2.0 * eps {
            return k;
        }
        m += 1;
    }
}

/// Contiguous word groups; every word in a group goes to the same level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grouping {
    groups: Vec<Range<usize>>,
    singleton_prefix: usize,
    weights: Vec<u128>,
    total_weight: u128,
}

impl Grouping {
    pub fn groups(&self) -> &[Range<usize>] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Number of leading singleton groups, `G_1` included.
    pub fn singleton_prefix(&self) -> usize {
        self.singleton_prefix
    }

    /// Group weights as integer weights (see [`Instance::int_weights`]).
    pub fn group_weights(&self) -> &[u128] {
        &self.weights
    }

    pub fn group_probabilities(&self) -> Vec<Rational> {
        self.weights
            .iter()
            .map(|&w| rational::from_u128(w) / rational::from_u128(self.total_weight))
            .collect()
    }

    /// Index of the first word of each group, then `n`.
    pub fn starts(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.groups.iter().map(|g| g.start).collect();
        out.push(self.groups.last().map_or(0, |g| g.end));
        out
    }
}

/// Packing threshold `(1 - p_1) epsilon^2 / k` as a fraction of total weight.
fn packing_threshold(instance: &Instance, epsilon: &Rational, k: &Rational) -> Rational {
    (Rational::one() - instance.probability(0)) * epsilon * epsilon / k
}

/// `G_1 = {w_1}`; words above half the packing threshold are singletons; the
/// rest are packed greedily into groups of probability at most the threshold.
pub fn group_words(norm: &NormalizedInstance, k: &Rational) -> Grouping {
    group_with(&norm.instance, &norm.epsilon_prime, k)
}

fn group_with(instance: &Instance, epsilon: &Rational, k: &Rational) -> Grouping {
    let n = instance.n();
    let w = instance.int_weights();
    let total = instance.total_int_weight();
    // Compare integer weights against threshold * total weight.
    let limit = packing_threshold(instance, epsilon, k) * rational::from_u128(total);
    let half = &limit / int(2);
    let mut groups = vec![0..1];
    let mut i = 1;
    while i < n && rational::from_u128(w[i] as u128) > half {
        groups.push(i..i + 1);
        i += 1;
    }
    let singleton_prefix = groups.len();
    while i < n {
        let start = i;
        let mut sum = w[i] as u128;
        i += 1;
        while i < n && rational::from_u128(sum + w[i] as u128) <= limit {
            sum += w[i] as u128;
            i += 1;
        }
        groups.push(start..i);
    }
    let weights = groups
        .iter()
        .map(|g| w[g.clone()].iter().map(|&x| x as u128).sum())
        .collect();
    Grouping {
        groups,
        singleton_prefix,
        weights,
        total_weight: total,
    }
}

/// Checks the grouping invariants: contiguity, `G_1 = {w_1}`, the size of
/// non-singleton groups, and the group count bound `1 + 4k/epsilon^2`.
pub fn check_grouping(grouping: &Grouping, instance: &Instance, epsilon: &Rational, k: &Rational) -> bool {
    let groups = grouping.groups();
    if groups.first() != Some(&(0..1)) {
        return false;
    }
    if groups.windows(2).any(|p| p[0].end != p[1].start) || groups.last().map(|g| g.end) != Some(instance.n()) {
        return false;
    }
    let limit = packing_threshold(instance, epsilon, k);
    let total = rational::from_u128(instance.total_int_weight());
    let sized_ok = groups.iter().zip(grouping.group_weights()).all(|(g, &wt)| {
        g.len() == 1 || rational::from_u128(wt) / &total <= limit
    });
    let count_bound = Rational::one() + int(4) * k / (epsilon * epsilon);
    sized_ok && rational::from_u128(groups.len() as u128) <= count_bound
}

/// Level-0 codeword sizes worth trying: `0..=ceil(1/eps)` and
/// `ceil((1/eps)(1+eps)^j)`, restricted to `a^f0` costing less than 1.
pub fn f0_candidates(norm: &NormalizedInstance) -> Vec<u64> {
    f0_candidates_on(norm.grid.cheapest(), norm.grid.one, &norm.epsilon_prime)
}

fn f0_candidates_on(a_units: u64, one: u64, epsilon: &Rational) -> Vec<u64> {
    let fits = |f: u64| f.checked_mul(a_units).is_some_and(|c| c < one);
    let mut out: Vec<u64> = Vec::new();
    let base = Rational::one() / epsilon;
    let top = rational::ceil_u64(&base).unwrap_or(u64::MAX);
    for f in 0..=top {
        if f > 0 && !fits(f) {
            break;
        }
        out.push(f);
    }
    let growth = Rational::one() + epsilon;
    let mut value = base * &growth;
    loop {
        let Some(f) = rational::ceil_u64(&value) else {
            break;
        };
        if !fits(f) {
            break;
        }
        if out.last() != Some(&f) {
            out.push(f);
        }
        value *= &growth;
    }
    out
}

/// A guess in terms of groups: `per_level[i - 1]` groups on level `i`, taken in
/// order after `G_1` (which sits on level 0 when `f0 > 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupGuess {
    pub f0: u64,
    pub per_level: Vec<usize>,
}

impl GroupGuess {
    pub fn to_guess(&self, grouping: &Grouping) -> Guess {
        let starts = grouping.starts();
        let mut g = usize::from(self.f0 > 0);
        let levels = self
            .per_level
            .iter()
            .map(|&t| {
                let words = starts[g + t] - starts[g];
                g += t;
                words as u64
            })
            .collect();
        Guess::new(self.f0, levels)
    }
}

/// Every guess, ordered by `f0` (as given) and then by decreasing
/// lexicographic order of the per-level group counts.
pub fn enumerate_guesses<'a>(
    grouping: &'a Grouping,
    f0: &'a [u64],
    levels: usize,
) -> impl Iterator<Item = GroupGuess> + 'a {
    let g = grouping.len();
    f0.iter().flat_map(move |&f| {
        let groups = if f > 0 { g - 1 } else { g };
        Compositions::new(groups, levels).map(move |per_level| GroupGuess { f0: f, per_level })
    })
}

/// Vectors `(t_1..t_L)` with sum at most `total`, lexicographically decreasing.
struct Compositions {
    current: Option<Vec<usize>>,
    total: usize,
}

impl Compositions {
    fn new(total: usize, levels: usize) -> Self {
        let mut first = vec![0; levels];
        if let Some(x) = first.first_mut() {
            *x = total;
        }
        Compositions {
            current: Some(first),
            total,
        }
    }
}

impl Iterator for Compositions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        let len = next.len();
        if let Some(p) = next.iter().rposition(|&t| t > 0) {
            if p + 1 == len {
                next[p] -= 1;
            } else {
                let used: usize = next[..p].iter().sum::<usize>() + next[p] - 1;
                next[p] -= 1;
                next[p + 1] = self.total - used;
            }
            self.current = Some(next);
        }
        Some(out)
    }
}

/// `|f0 candidates| * C(groups + levels, levels)`: the guess space before any
/// pruning, with every `f0` paired with every assignment of all groups.
pub fn raw_guess_count(groups: usize, f0_count: usize, levels: usize) -> BigUint {
    let mut c = BigUint::one();
    for i in 1..=levels {
        c = c * BigUint::from(groups + i) / BigUint::from(i);
    }
    c * BigUint::from(f0_count)
}

pub fn solve(instance: &Instance) -> Result<CodeReport> {
    solve_with(instance, &SolveOptions::default())
}

/// Solves the instance, routing tiny cheapest letters (`l_1 <= epsilon l_2 / n`)
/// to [`solve_tiny_ell1`].
pub fn solve_with(instance: &Instance, options: &SolveOptions) -> Result<CodeReport> {
    let started = Instant::now();
    let n = instance.n();
    if n == 1 {
        let code = CodeAssignment::new(vec![Codeword::from_letters(&[0])]);
        return finish(instance, code, Method::SingleWord, (0, 0), None, None, started);
    }
    if is_tiny(instance) {
        return solve_tiny_ell1(instance);
    }
    let norm = normalize(instance)?;
    let k = resolve_k(&norm, options.k.as_ref())?;
    let graph = build_cost_graph(&norm, &k)?;
    let grouping = group_words(&norm, &k);
    assert!(check_grouping(&grouping, &norm.instance, &norm.epsilon_prime, &k));
    let f0s = f0_candidates(&norm);

    let outcome = search(&graph, &grouping, norm.instance.int_weights(), &f0s, options.budget);
    let (winner, guesses, nodes) = match outcome {
        SearchOutcome::Done { best, leaves, nodes } => (best, leaves, nodes),
        SearchOutcome::Aborted => {
            return Err(Error::BudgetExceeded {
                budget: options.budget,
                suggested: suggest_epsilon(instance, options.budget),
            })
        }
    };
    let (_, group_guess) = winner.ok_or(Error::NoFeasibleGuess)?;
    let guess = group_guess.to_guess(&grouping);
    let leveled = construct_leveled(&graph, &guess, n)
        .map_err(|why| Error::InvalidGuess(why.to_string()))?;
    let kprefix_cost = rational::from_u128(leveled.cost_units(norm.instance.int_weights()))
        * &norm.cost_quantum
        / rational::from_u128(norm.instance.total_int_weight());
    let converted = convert_codewords(leveled.codewords(), graph.letter_units(), graph.k_units());
    let code = reorder(&CodeAssignment::new(converted.codewords), instance.letters());
    let mut report = finish(
        instance,
        code,
        Method::Leveled,
        (guesses, nodes),
        Some(k),
        Some(norm.epsilon_prime.clone()),
        started,
    )?;
    report.kprefix_cost = Some(kprefix_cost);
    Ok(report)
}

/// The override if it is `1 + m * epsilon'` for some `m >= 1`, else [`choose_k`].
pub fn resolve_k(norm: &NormalizedInstance, k: Option<&Rational>) -> Result<Rational> {
    match k {
        Some(k) => {
            let steps = (k - Rational::one()) / &norm.epsilon_prime;
            if !steps.is_integer() || steps < Rational::one() {
                return Err(Error::InvalidK(rational::format_rational(k)));
            }
            Ok(k.clone())
        }
        None => Ok(choose_k(&norm.epsilon_prime)),
    }
}

fn is_tiny(instance: &Instance) -> bool {
    let letters = instance.letters();
    let n = int(instance.n() as i64);
    letters.cost(0) / letters.cost(1) <= instance.epsilon() / n
}

fn finish(
    instance: &Instance,
    code: CodeAssignment,
    method: Method,
    (guess_count, search_nodes): (u64, u64),
    k: Option<Rational>,
    epsilon_prime: Option<Rational>,
    started: Instant,
) -> Result<CodeReport> {
    let total_cost = code_cost(&code, instance)?;
    let normalized_cost = &total_cost / (instance.total_weight() * instance.letters().cost(1));
    Ok(CodeReport {
        code,
        total_cost,
        normalized_cost,
        lower_bound: lower_bound(instance),
        ratio_bound: ratio_bound(instance.epsilon()),
        kprefix_cost: None,
        guess_count,
        search_nodes,
        method,
        k,
        epsilon_prime,
        elapsed: started.elapsed(),
    })
}

/// Largest `epsilon = 1/m` (`m <= 20`) whose unpruned guess space fits the budget.
fn suggest_epsilon(instance: &Instance, budget: u64) -> String {
    let budget = BigUint::from(budget);
    let mut best = None;
    for m in 1..=20 {
        let eps = ratio(1, m);
        let Ok(candidate) = instance.with_epsilon(eps.clone()) else {
            continue;
        };
        let Ok(norm) = normalize(&candidate) else {
            continue;
        };
        let k = choose_k(&norm.epsilon_prime);
        let levels = ((&k - Rational::one()) / &norm.epsilon_prime)
            .to_integer()
            .to_usize()
            .unwrap_or(usize::MAX);
        let groups = group_words(&norm, &k).len();
        if raw_guess_count(groups, f0_candidates(&norm).len(), levels) <= budget {
            best = Some(eps);
        }
    }
    best.map_or_else(|| "1".to_string(), |e| rational::format_rational(&e))
}

enum SearchOutcome {
    Done {
        best: Option<(u128, GroupGuess)>,
        leaves: u64,
        nodes: u64,
    },
    Aborted,
}

/// Branch and bound over guesses, one parallel branch per `f0`. Within a branch
/// levels are filled in order, trying the largest group count first; a branch
/// keeps the first minimum it meets, and branches are reduced by `(cost, f0
/// position)`, so the winner is the first cheapest guess in enumeration order.
fn search(
    graph: &CostGraph,
    grouping: &Grouping,
    weights: &[u64],
    f0s: &[u64],
    budget: u64,
) -> SearchOutcome {
    let spent = AtomicU64::new(0);
    let starts = grouping.starts();
    let mut prefix = vec![0u128; weights.len() + 1];
    for (i, &w) in weights.iter().enumerate() {
        prefix[i + 1] = prefix[i] + w as u128;
    }
    let results: Vec<Branch> = f0s
        .par_iter()
        .map(|&f0| {
            let mut branch = Branch {
                graph,
                starts: &starts,
                prefix: &prefix,
                weights,
                counts: Vec::with_capacity(graph.k_units() as usize + 1),
                path: Vec::new(),
                best: None,
                hole: (f0 > 0).then(|| f0 * graph.grid().cheapest()),
                leaves: 0,
                nodes: 0,
                unflushed: 0,
                spent: &spent,
                budget,
                aborted: false,
            };
            let (g, cost) = match branch.hole {
                Some(at) => (1, weights[0] as u128 * at as u128),
                None => (0, 0),
            };
            branch.dfs(1, g, cost);
            branch
        })
        .collect();
    if results.iter().any(|b| b.aborted) {
        return SearchOutcome::Aborted;
    }
    let nodes: u64 = results.iter().map(|b| b.nodes).sum();
    if nodes > budget {
        return SearchOutcome::Aborted;
    }
    let leaves = results.iter().map(|b| b.leaves).sum();
    let levels = graph.level_count();
    let best = results
        .into_iter()
        .zip(f0s)
        .filter_map(|(b, &f0)| {
            b.best.map(|(cost, mut per_level)| {
                per_level.resize(levels, 0);
                (cost, GroupGuess { f0, per_level })
            })
        })
        .min_by_key(|(cost, _)| *cost);
    SearchOutcome::Done { best, leaves, nodes }
}

const FLUSH_EVERY: u64 = 1024;

struct Branch<'a> {
    graph: &'a CostGraph,
    starts: &'a [usize],
    prefix: &'a [u128],
    weights: &'a [u64],
    counts: Vec<Capped>,
    path: Vec<usize>,
    best: Option<(u128, Vec<usize>)>,
    hole: Option<u64>,
    leaves: u64,
    nodes: u64,
    unflushed: u64,
    spent: &'a AtomicU64,
    budget: u64,
    aborted: bool,
}

impl Branch<'_> {
    fn beats(&self, bound: u128) -> bool {
        self.best.as_ref().is_none_or(|(b, _)| bound < *b)
    }

    fn weight(&self, words: Range<usize>) -> u128 {
        self.prefix[words.end] - self.prefix[words.start]
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        self.unflushed += 1;
        if self.unflushed == FLUSH_EVERY {
            let total = self.spent.fetch_add(self.unflushed, Ordering::Relaxed) + self.unflushed;
            self.unflushed = 0;
            if total > self.budget {
                self.aborted = true;
            }
        }
        !self.aborted
    }

    /// Extends the count table through cost `x`.
    fn fill_to(&mut self, x: u64) {
        let distinct = self.graph.distinct();
        while self.counts.len() as u64 <= x {
            let at = self.counts.len() as u64;
            let mut v = pre_count(&self.counts, at, distinct);
            if Some(at) == self.hole {
                v = Capped(v.0 - 1);
            }
            self.counts.push(v);
        }
    }

    fn dfs(&mut self, level: usize, g: usize, cost: u128) {
        if !self.tick() {
            return;
        }
        let n = self.weights.len();
        let word = self.starts[g];
        if word == n {
            self.leaf(cost);
            return;
        }
        let levels = self.graph.level_count();
        if level > levels {
            self.tail(word, cost);
            return;
        }
        let top = self.graph.level_top(level);
        if !self.beats(cost + self.weight(word..n) * top as u128) {
            return;
        }
        self.counts.truncate(top as usize);
        self.fill_to(top);
        let available = self.counts[top as usize];
        let groups = self.starts.len() - 1;
        let mut t_max = 0;
        while g + t_max < groups && Capped((self.starts[g + t_max + 1] - word) as u64) <= available {
            t_max += 1;
        }
        let next_top = if level < levels {
            self.graph.level_top(level + 1)
        } else {
            self.graph.k_units()
        };
        for t in (0..=t_max).rev() {
            let end = self.starts[g + t];
            let placed = cost + self.weight(word..end) * top as u128;
            // Fewer groups here only pushes more weight to costlier levels.
            if !self.beats(placed + self.weight(end..n) * next_top as u128) {
                break;
            }
            self.counts.truncate(top as usize + 1);
            self.counts[top as usize] = Capped(available.0.saturating_sub((end - word) as u64));
            if available == Capped::SATURATED {
                self.counts[top as usize] = available;
            }
            self.path.push(t);
            self.dfs(level + 1, g + t, placed);
            self.path.pop();
            if self.aborted {
                return;
            }
        }
    }

    /// Gives the remaining words the cheapest strings of cost `>= k`.
    fn tail(&mut self, word: usize, cost: u128) {
        let k = self.graph.k_units();
        let max_letter = self.graph.grid().max_letter();
        let distinct = self.graph.distinct();
        self.counts.truncate(k as usize);
        let n = self.weights.len();
        let mut next = word;
        let mut total = cost;
        let mut zero_run = 0u64;
        let mut x = k;
        while next < n {
            if !self.beats(total + self.weight(next..n) * x as u128) {
                break;
            }
            let v = pre_count(&self.counts, x, distinct);
            self.counts.push(v);
            if v.0 == 0 {
                zero_run += 1;
                if zero_run >= max_letter && x + 1 >= k + max_letter {
                    break;
                }
            } else {
                zero_run = 0;
                let take = (v.0.min((n - next) as u64)) as usize;
                total += self.weight(next..next + take) * x as u128;
                next += take;
            }
            x += 1;
        }
        self.counts.truncate(k as usize);
        if next == n {
            self.leaf(total);
        }
    }

    fn leaf(&mut self, cost: u128) {
        self.leaves += 1;
        if self.beats(cost) {
            self.best = Some((cost, self.path.clone()));
        }
    }
}

/// Small-letter solver for `l_1 <= epsilon l_2 / n`: for each `i0` among the
/// distinct `floor((1+eps)^j)` up to the first value `>= n`, take the `n`
/// cheapest strings among `a^i0`, `b a^j b` (`j < n`) and `a^j x a^n`
/// (`x != a`, `j < i0`), and keep the cheapest resulting code.
pub fn solve_tiny_ell1(instance: &Instance) -> Result<CodeReport> {
    if !is_tiny(instance) {
        let letters = instance.letters();
        return Err(Error::CheapestLetterTooLarge {
            ell1: rational::format_rational(&(letters.cost(0) / letters.cost(1))),
            bound: rational::format_rational(&(instance.epsilon() / int(instance.n() as i64))),
        });
    }
    solve_tiny_ell1_unchecked(instance)
}

/// [`solve_tiny_ell1`] without the precondition check.
pub fn solve_tiny_ell1_unchecked(instance: &Instance) -> Result<CodeReport> {
    let started = Instant::now();
    let n = instance.n();
    let (units, _) = instance.letters().integer_grid()?;
    let weights = instance.int_weights();
    let mut best: Option<(u128, Vec<Codeword>)> = None;
    let mut evaluated = 0;
    for i0 in tiny_i0_candidates(n, instance.epsilon()) {
        evaluated += 1;
        let words = tiny_candidates(&units, n as u64, i0, n);
        let cost: u128 = weights
            .iter()
            .zip(&words)
            .map(|(&w, c)| w as u128 * c.cost_units(&units) as u128)
            .sum();
        if best.as_ref().is_none_or(|(b, _)| cost < *b) {
            best = Some((cost, words));
        }
    }
    let (_, words) = best.ok_or(Error::NoFeasibleGuess)?;
    let code = reorder(&CodeAssignment::new(words), instance.letters());
    finish(
        instance,
        code,
        Method::SmallLetter,
        (evaluated, evaluated),
        None,
        None,
        started,
    )
}

/// Distinct values `floor((1+eps)^j)`, `j = 0, 1, ...`, through the first one `>= n`.
pub fn tiny_i0_candidates(n: usize, epsilon: &Rational) -> Vec<u64> {
    let growth = Rational::one() + epsilon;
    let mut value = Rational::one();
    let mut out: Vec<u64> = Vec::new();
    loop {
        let v = rational::floor_u64(&value).unwrap_or(u64::MAX);
        if out.last() != Some(&v) {
            out.push(v);
        }
        if v >= n as u64 {
            return out;
        }
        value *= &growth;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum TinyShape {
    /// `a^i0`
    Run,
    /// `b a^j b`
    Bracket(u64),
    /// `a^j x a^n`
    Marker(u64, u32),
}

/// The `count` cheapest strings for one `i0`, cheapest first; ties keep the
/// order run, brackets by `j`, markers by `(j, x)`.
fn tiny_candidates(units: &[u64], n: u64, i0: u64, count: usize) -> Vec<Codeword> {
    let (a, b) = (units[0], units[1]);
    let mut pool: Vec<(u64, TinyShape)> = Vec::new();
    pool.push((i0 * a, TinyShape::Run));
    for j in 0..n {
        pool.push((2 * b + j * a, TinyShape::Bracket(j)));
    }
    for j in 0..i0 {
        for (x, &u) in units.iter().enumerate().skip(1) {
            pool.push(((j + n) * a + u, TinyShape::Marker(j, x as u32)));
        }
    }
    pool.sort();
    pool.truncate(count);
    pool.into_iter()
        .map(|(_, shape)| match shape {
            TinyShape::Run => Codeword::repeat(0, i0),
            TinyShape::Bracket(j) => {
                let mut c = Codeword::from_letters(&[1]);
                c.push_run(0, j);
                c.push(1);
                c
            }
            TinyShape::Marker(j, x) => {
                let mut c = Codeword::repeat(0, j);
                c.push(x);
                c.push_run(0, n);
                c
            }
        })
        .collect()
}
