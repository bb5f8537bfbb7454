//! The graph of achievable codeword costs in `[0, k]` and the table of
//! strings with no prefix in a codeword set, counted per cost.
//!
//! Costs live on an integer grid (see [`CostGrid`]), so graph nodes are bucket
//! indices and every lookup is a vector access.
//!
//! Free strings of cost `x` are kept in a canonical order: grouped by last
//! letter (letter order), and within a group in the order of their parents.
//! Codewords removed at cost `x` are recorded as "holes" in that order, which
//! is all that is needed to turn a rank back into a concrete string.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::codeword::{Codeword, Letter};
use crate::error::{Error, Result};
use crate::instance::{CostGrid, NormalizedInstance};
use crate::rational::{self, Rational};
use crate::trie::CodewordTrie;

/// Largest cost grid (in units) a graph may span.
pub const MAX_GRID_UNITS: u64 = 1 << 28;

/// Arithmetic needed to count and rank strings.
pub trait StringCount: Clone + Ord + Debug + Send + Sync {
    fn zero() -> Self;
    fn from_u64(v: u64) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul_small(&self, k: u64) -> Self;
    /// `self - other`; callers guarantee `self >= other`.
    fn sub(&self, other: &Self) -> Self;
    fn div_rem(&self, d: &Self) -> (Self, Self);
    fn to_u64(&self) -> Option<u64>;
    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
}

impl StringCount for BigUint {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_u64(v: u64) -> Self {
        BigUint::from(v)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul_small(&self, k: u64) -> Self {
        self * k
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn div_rem(&self, d: &Self) -> (Self, Self) {
        Integer::div_rem(self, d)
    }
    fn to_u64(&self) -> Option<u64> {
        ToPrimitive::to_u64(self)
    }
}

/// A count that saturates at `u64::MAX` and then stays there.
///
/// The construction only ever compares counts against quantities at most `2n`,
/// so saturated values behave exactly like the true (larger) counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Capped(pub u64);

impl Capped {
    pub const SATURATED: Capped = Capped(u64::MAX);
}

impl StringCount for Capped {
    fn zero() -> Self {
        Capped(0)
    }
    fn from_u64(v: u64) -> Self {
        Capped(v)
    }
    fn add(&self, other: &Self) -> Self {
        Capped(self.0.saturating_add(other.0))
    }
    fn mul_small(&self, k: u64) -> Self {
        Capped(self.0.saturating_mul(k))
    }
    fn sub(&self, other: &Self) -> Self {
        if *self == Capped::SATURATED {
            *self
        } else {
            Capped(self.0 - other.0)
        }
    }
    fn div_rem(&self, d: &Self) -> (Self, Self) {
        (Capped(self.0 / d.0), Capped(self.0 % d.0))
    }
    fn to_u64(&self) -> Option<u64> {
        (*self != Capped::SATURATED).then_some(self.0)
    }
}

/// DAG of achievable codeword costs in `[0, k]`; arcs add one letter.
#[derive(Debug, Clone)]
pub struct CostGraph {
    grid: CostGrid,
    distinct: Vec<(u64, usize)>,
    k_units: u64,
    reachable: Vec<bool>,
    nodes: Vec<u64>,
    arcs: usize,
}

impl CostGraph {
    /// Builds the graph straight from a grid. `k_units - grid.one` must be a
    /// multiple of `grid.eps`.
    pub fn from_grid(grid: CostGrid, k_units: u64) -> Result<Self> {
        if k_units < grid.one || !(k_units - grid.one).is_multiple_of(grid.eps) {
            return Err(Error::InvalidK(k_units.to_string()));
        }
        if k_units > MAX_GRID_UNITS {
            return Err(Error::CostOverflow);
        }
        // Level 0 (costs below 1) can only hold runs of the cheapest letter.
        assert!(
            grid.letter_units.iter().skip(1).all(|&u| u >= grid.one),
            "only the cheapest letter may cost less than 1"
        );
        let distinct = grid.distinct();
        let mut reachable = vec![false; k_units as usize + 1];
        reachable[0] = true;
        let mut nodes = vec![0];
        let mut arcs = 0;
        for x in 1..=k_units {
            let hit = distinct
                .iter()
                .any(|&(u, _)| u <= x && reachable[(x - u) as usize]);
            if hit {
                reachable[x as usize] = true;
                nodes.push(x);
            }
        }
        for &x in &nodes {
            arcs += distinct.iter().filter(|&&(u, _)| x + u <= k_units).count();
        }
        Ok(CostGraph {
            grid,
            distinct,
            k_units,
            reachable,
            nodes,
            arcs,
        })
    }

    pub fn grid(&self) -> &CostGrid {
        &self.grid
    }

    pub fn letter_units(&self) -> &[u64] {
        &self.grid.letter_units
    }

    pub fn distinct(&self) -> &[(u64, usize)] {
        &self.distinct
    }

    pub fn k_units(&self) -> u64 {
        self.k_units
    }

    pub fn nodes(&self) -> &[u64] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs
    }

    pub fn contains(&self, x: u64) -> bool {
        self.reachable.get(x as usize).copied().unwrap_or(false)
    }

    /// Number of levels `(k - 1) / epsilon`.
    pub fn level_count(&self) -> usize {
        ((self.k_units - self.grid.one) / self.grid.eps) as usize
    }

    /// Level 0 holds costs below 1; level `i >= 1` holds `[1 + (i-1)eps, 1 + i*eps)`.
    pub fn level_of(&self, x: u64) -> usize {
        if x < self.grid.one {
            0
        } else {
            ((x - self.grid.one) / self.grid.eps) as usize + 1
        }
    }

    /// Half-open unit range of level `i >= 1`.
    pub fn level_range(&self, i: usize) -> (u64, u64) {
        let lo = self.grid.one + (i as u64 - 1) * self.grid.eps;
        (lo, lo + self.grid.eps)
    }

    /// Cost of every codeword on level `i >= 1` of a leveled code:
    /// `1 + i*eps - min(l_1, eps)`.
    pub fn level_top(&self, i: usize) -> u64 {
        let (_, hi) = self.level_range(i);
        hi - self.grid.cheapest().min(self.grid.eps)
    }

    /// `n k / eps` and `d n k / eps`, the node and arc budgets of the graph.
    pub fn size_bounds(&self, n: usize) -> (Rational, Rational) {
        let nodes = Rational::new(
            (n as u64 * self.k_units).into(),
            self.grid.eps.into(),
        );
        let arcs = &nodes * rational::int(self.distinct.len() as i64);
        (nodes, arcs)
    }
}

/// Builds the cost graph for a normalized instance and a `k` with `k - 1` a
/// multiple of epsilon'. Rejects instances whose cheapest letter costs at most
/// `epsilon'/n`; those belong to the small-letter solver.
pub fn build_cost_graph(norm: &NormalizedInstance, k: &Rational) -> Result<CostGraph> {
    let grid = &norm.grid;
    let n = norm.n() as u64;
    if grid.cheapest() * n <= grid.eps {
        return Err(Error::TinyCheapestLetter {
            ell1: rational::format_rational(norm.letters().cheapest()),
            bound: rational::format_rational(
                &(&norm.epsilon_prime / rational::int(n as i64)),
            ),
        });
    }
    let k_units = rational::to_u64_exact(&(k / &norm.cost_quantum))
        .ok_or_else(|| Error::InvalidK(rational::format_rational(k)))?;
    CostGraph::from_grid(grid.clone(), k_units)
}

/// Pre-removal count at `x`: free strings of cost `x - l` extended by a letter.
pub(crate) fn pre_count<C: StringCount>(counts: &[C], x: u64, distinct: &[(u64, usize)]) -> C {
    if x == 0 {
        return C::from_u64(1);
    }
    let mut total = C::zero();
    for &(u, mult) in distinct {
        if u > x {
            break;
        }
        let below = &counts[(x - u) as usize];
        if !below.is_zero() {
            total = total.add(&below.mul_small(mult as u64));
        }
    }
    total
}

/// Removed strings at one cost, as ranks in the canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Holes<C> {
    /// The first `f` strings were removed.
    Prefix(u64),
    /// Sorted ranks.
    Ranks(Vec<C>),
}

impl<C: StringCount> Holes<C> {
    /// Maps a rank among surviving strings to a rank in the pre-removal order.
    fn lift(&self, j: &C) -> C {
        match self {
            Holes::Prefix(f) => j.add(&C::from_u64(*f)),
            Holes::Ranks(ranks) => {
                // Number of holes h_t with h_t - t <= j; h_t - t is nondecreasing.
                let (mut lo, mut hi) = (0usize, ranks.len());
                while lo < hi {
                    let mid = (lo + hi) / 2;
                    if ranks[mid].sub(&C::from_u64(mid as u64)) <= *j {
                        lo = mid + 1;
                    } else {
                        hi = mid;
                    }
                }
                j.add(&C::from_u64(lo as u64))
            }
        }
    }
}

/// `v[x]`: number of strings of cost `x` with no prefix in the codeword set.
#[derive(Debug, Clone)]
pub struct FreeStringTable<C> {
    counts: Vec<C>,
    holes: BTreeMap<u64, Holes<C>>,
    k_units: u64,
    work: u64,
}

impl<C: StringCount> FreeStringTable<C> {
    pub(crate) fn with_capacity(k_units: u64) -> Self {
        FreeStringTable {
            counts: Vec::with_capacity(k_units as usize + 1),
            holes: BTreeMap::new(),
            k_units,
            work: 0,
        }
    }

    pub fn get(&self, x: u64) -> C {
        self.counts.get(x as usize).cloned().unwrap_or_else(C::zero)
    }

    pub fn counts(&self) -> &[C] {
        &self.counts
    }

    pub fn k_units(&self) -> u64 {
        self.k_units
    }

    /// Elementary steps spent building and querying the table.
    pub fn work(&self) -> u64 {
        self.work
    }

    /// Appends the count for the next cost, `x = len`, before any removal there.
    pub(crate) fn push_next(&mut self, distinct: &[(u64, usize)]) -> C {
        let x = self.counts.len() as u64;
        let v = pre_count(&self.counts, x, distinct);
        self.work += distinct.len() as u64;
        self.counts.push(v.clone());
        v
    }

    /// Removes the first `f` strings of the last pushed cost.
    pub(crate) fn take_prefix(&mut self, f: u64) {
        if f == 0 {
            return;
        }
        let x = self.counts.len() as u64 - 1;
        let slot = &mut self.counts[x as usize];
        *slot = slot.sub(&C::from_u64(f));
        self.holes.insert(x, Holes::Prefix(f));
    }

    fn pre_index(&self, x: u64, j: &C) -> C {
        if x >= self.k_units {
            return j.clone();
        }
        match self.holes.get(&x) {
            Some(h) => h.lift(j),
            None => j.clone(),
        }
    }

    /// String with rank `j` in the pre-removal order at cost `x`.
    pub(crate) fn unrank_pre(&mut self, grid: &CostGrid, x: u64, j: C) -> Codeword {
        let mut rev = Codeword::new();
        let (mut x, mut j) = (x, j);
        while x > 0 {
            let mut acc = C::zero();
            let mut chosen = None;
            for (letter, &u) in grid.letter_units.iter().enumerate() {
                self.work += 1;
                if u > x {
                    break;
                }
                let block = &self.counts[(x - u) as usize];
                let next = acc.add(block);
                if j < next {
                    chosen = Some((letter as Letter, u, j.sub(&acc)));
                    break;
                }
                acc = next;
            }
            let (letter, u, rest) = chosen.expect("rank within the free-string count");
            rev.push(letter);
            x -= u;
            j = self.pre_index(x, &rest);
        }
        debug_assert!(j.is_zero());
        rev.reversed()
    }

    /// String with rank `j` among the surviving strings at cost `x`.
    pub(crate) fn unrank(&mut self, grid: &CostGrid, x: u64, j: C) -> Codeword {
        let j = self.pre_index(x, &j);
        self.unrank_pre(grid, x, j)
    }
}

/// Exact `v_S(x)` for every cost `x <= k`, with `S` the codewords in `trie`.
pub fn count_free_strings(graph: &CostGraph, trie: &CodewordTrie) -> FreeStringTable<BigUint> {
    let units = graph.letter_units();
    let k = graph.k_units();
    let mut by_cost: BTreeMap<u64, Vec<Codeword>> = BTreeMap::new();
    for (word, cost) in trie.minimal_codewords(units) {
        if cost <= k {
            by_cost.entry(cost).or_default().push(word);
        }
    }
    // Holes apply below k only for the extension; keep them up to k here so the
    // counts at k itself are exact.
    let mut table = FreeStringTable::<BigUint>::with_capacity(k);
    table.k_units = k + 1;
    for x in 0..=k {
        let pre = table.push_next(graph.distinct());
        if let Some(members) = by_cost.get(&x) {
            let mut ranks: Vec<BigUint> = members
                .iter()
                .map(|m| rank_pre(&table, graph.grid(), m))
                .collect();
            ranks.sort();
            let removed = BigUint::from(ranks.len());
            debug_assert!(removed <= pre);
            table.counts[x as usize] = pre - removed;
            table.holes.insert(x, Holes::Ranks(ranks));
        }
    }
    table
}

/// Rank of `word` in the pre-removal order at its own cost. Every proper prefix
/// of `word` must be free.
fn rank_pre(table: &FreeStringTable<BigUint>, grid: &CostGrid, word: &Codeword) -> BigUint {
    let units = &grid.letter_units;
    let mut x = 0u64;
    let mut rank = <BigUint as Zero>::zero();
    let mut first = true;
    for letter in word.letters() {
        if !first {
            // Surviving rank of the prefix at cost x.
            rank = survivor_rank(table, x, &rank);
        }
        first = false;
        let u = units[letter as usize];
        let next = x + u;
        let mut offset = <BigUint as Zero>::zero();
        for &uu in units.iter().take(letter as usize) {
            offset += &table.counts[(next - uu) as usize];
        }
        rank += offset;
        x = next;
    }
    rank
}

fn survivor_rank(table: &FreeStringTable<BigUint>, x: u64, pre: &BigUint) -> BigUint {
    match table.holes.get(&x) {
        None => pre.clone(),
        Some(Holes::Prefix(f)) => pre - BigUint::from(*f),
        Some(Holes::Ranks(r)) => pre - BigUint::from(r.partition_point(|h| h < pre)),
    }
}

/// Counts of the cheapest eligible strings of cost `>= k`, as `(cost, count)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shortfall {
    pub found: u64,
    pub wanted: u64,
}

/// Extends the table past `k` (where nothing is removed) and picks the `m`
/// cheapest strings of cost `>= k` with no prefix of cost `< k` in the set.
/// Returns `(cost, count)` batches in increasing cost order.
pub fn extend_counts<C: StringCount>(
    graph: &CostGraph,
    table: &mut FreeStringTable<C>,
    m: u64,
) -> std::result::Result<Vec<(u64, u64)>, Shortfall> {
    let k = graph.k_units();
    let max_letter = graph.grid().max_letter();
    table.counts.truncate(k as usize);
    table.k_units = k;
    let mut batches = Vec::new();
    let mut left = m;
    let mut zero_run = 0u64;
    let mut x = k;
    while left > 0 {
        let v = table.push_next(graph.distinct());
        let take = match v.to_u64() {
            Some(v) => v.min(left),
            None => left,
        };
        if take > 0 {
            batches.push((x, take));
            left -= take;
            zero_run = 0;
        } else {
            zero_run += 1;
            if zero_run >= max_letter && x + 1 >= k + max_letter {
                return Err(Shortfall {
                    found: m - left,
                    wanted: m,
                });
            }
        }
        x += 1;
    }
    Ok(batches)
}

/// Like [`extend_counts`], then materializes the strings.
pub fn extend_beyond_k<C: StringCount>(
    graph: &CostGraph,
    table: &mut FreeStringTable<C>,
    m: u64,
) -> std::result::Result<Vec<Codeword>, Shortfall> {
    let batches = extend_counts(graph, table, m)?;
    let mut out = Vec::with_capacity(m as usize);
    for (x, count) in batches {
        for j in 0..count {
            out.push(table.unrank(graph.grid(), x, C::from_u64(j)));
        }
    }
    Ok(out)
}
