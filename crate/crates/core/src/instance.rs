//! Problem instances: word frequencies, letter costs, and the rescaling that puts
//! every codeword cost on an integer grid.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Letter costs `l_1 <= l_2 <= ... <= l_r`. Letter `i` of every codeword refers
/// to position `i` in this sorted list, so letter 0 is always the cheapest (`a`)
/// and letter 1 the second cheapest (`b`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LetterCosts {
    costs: Vec<Rational>,
    distinct: Vec<(Rational, usize)>,
}

impl LetterCosts {
    pub fn new(costs: Vec<Rational>) -> Result<Self> {
        if costs.len() < 2 {
            return Err(Error::TooFewLetters(costs.len()));
        }
        if costs.iter().any(|c| !c.is_positive()) {
            return Err(Error::NonPositiveCost);
        }
        if costs.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Unsorted("letter costs", "nondecreasing"));
        }
        let mut distinct: Vec<(Rational, usize)> = Vec::new();
        for c in &costs {
            match distinct.last_mut() {
                Some((last, mult)) if last == c => *mult += 1,
                _ => distinct.push((c.clone(), 1)),
            }
        }
        Ok(LetterCosts { costs, distinct })
    }

    /// Sorts `costs` and returns the permutation `perm[sorted] = original`.
    pub fn from_unsorted(costs: Vec<Rational>) -> Result<(Self, Vec<usize>)> {
        let mut perm: Vec<usize> = (0..costs.len()).collect();
        perm.sort_by(|&i, &j| costs[i].cmp(&costs[j]).then(i.cmp(&j)));
        let sorted = perm.iter().map(|&i| costs[i].clone()).collect();
        Ok((Self::new(sorted)?, perm))
    }

    pub fn from_integers(costs: &[i64]) -> Result<Self> {
        Self::new(costs.iter().map(|&c| rational::int(c)).collect())
    }

    pub fn len(&self) -> usize {
        self.costs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.costs.is_empty()
    }

    pub fn costs(&self) -> &[Rational] {
        &self.costs
    }

    pub fn cost(&self, letter: usize) -> &Rational {
        &self.costs[letter]
    }

    /// `(cost, multiplicity)` pairs in increasing cost order.
    pub fn distinct(&self) -> &[(Rational, usize)] {
        &self.distinct
    }

    /// Number of distinct letter costs, `d`.
    pub fn distinct_count(&self) -> usize {
        self.distinct.len()
    }

    pub fn cheapest(&self) -> &Rational {
        &self.costs[0]
    }

    pub fn all_equal(&self) -> bool {
        self.distinct.len() == 1
    }

    /// Expresses every cost as an integer multiple of a common unit.
    /// Returns `(units, unit)` with `costs[i] == units[i] * unit`.
    pub fn integer_grid(&self) -> Result<(Vec<u64>, Rational)> {
        let den = rational::common_denominator(&self.costs);
        let scaled: Vec<BigInt> = self
            .costs
            .iter()
            .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
            .collect();
        let g = scaled.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        let unit = Rational::new(g.clone(), den);
        let units = scaled
            .iter()
            .map(|v| (v / &g).to_u64().ok_or(Error::CostOverflow))
            .collect::<Result<Vec<_>>>()?;
        Ok((units, unit))
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        LetterCosts::new(self.costs.iter().map(|c| c * factor).collect())
            .expect("positive scaling keeps costs valid")
    }
}

/// An instance of the unequal-letter-cost prefix coding problem.
///
/// Weights are kept as given (any positive rationals, sorted nonincreasing) and
/// also as integers `int_weights = weights / weight_unit`, which is what the
/// search routines use for exact cost comparisons.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    weights: Vec<Rational>,
    int_weights: Vec<u64>,
    weight_unit: Rational,
    letters: LetterCosts,
    epsilon: Rational,
}

impl Instance {
    pub fn new(weights: Vec<Rational>, letters: LetterCosts, epsilon: Rational) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::NoWords);
        }
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(Error::NonPositiveWeight);
        }
        if weights.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Unsorted("word frequencies", "nonincreasing"));
        }
        check_epsilon(&epsilon)?;
        let den = rational::common_denominator(&weights);
        let scaled: Vec<BigInt> = weights
            .iter()
            .map(|w| (w * Rational::from_integer(den.clone())).to_integer())
            .collect();
        let g = scaled.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        let int_weights = scaled
            .iter()
            .map(|v| (v / &g).to_u64().ok_or(Error::WeightOverflow))
            .collect::<Result<Vec<_>>>()?;
        let total: u128 = int_weights.iter().map(|&w| w as u128).sum();
        if total > u64::MAX as u128 {
            return Err(Error::WeightOverflow);
        }
        Ok(Instance {
            weights,
            int_weights,
            weight_unit: Rational::new(g, den),
            letters,
            epsilon,
        })
    }

    /// Sorts `weights` into nonincreasing order (stable) and returns the
    /// permutation `perm[sorted] = original`.
    pub fn from_unsorted(
        weights: Vec<Rational>,
        letters: LetterCosts,
        epsilon: Rational,
    ) -> Result<(Self, Vec<usize>)> {
        let mut perm: Vec<usize> = (0..weights.len()).collect();
        perm.sort_by(|&i, &j| weights[j].cmp(&weights[i]).then(i.cmp(&j)));
        let sorted = perm.iter().map(|&i| weights[i].clone()).collect();
        Ok((Self::new(sorted, letters, epsilon)?, perm))
    }

    /// Convenience constructor for integer frequencies and letter costs.
    pub fn from_integers(weights: &[i64], costs: &[i64], epsilon: Rational) -> Result<Self> {
        let letters = LetterCosts::from_integers(costs)?;
        Self::new(
            weights.iter().map(|&w| rational::int(w)).collect(),
            letters,
            epsilon,
        )
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn int_weights(&self) -> &[u64] {
        &self.int_weights
    }

    pub fn total_int_weight(&self) -> u128 {
        self.int_weights.iter().map(|&w| w as u128).sum()
    }

    /// `weights[i] == int_weights[i] * weight_unit`.
    pub fn weight_unit(&self) -> &Rational {
        &self.weight_unit
    }

    pub fn total_weight(&self) -> Rational {
        rational::from_u128(self.total_int_weight()) * &self.weight_unit
    }

    pub fn probability(&self, word: usize) -> Rational {
        Rational::new(
            BigInt::from(self.int_weights[word]),
            BigInt::from(self.total_int_weight()),
        )
    }

    pub fn probabilities(&self) -> Vec<Rational> {
        (0..self.n()).map(|i| self.probability(i)).collect()
    }

    pub fn letters(&self) -> &LetterCosts {
        &self.letters
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    pub fn with_epsilon(&self, epsilon: Rational) -> Result<Self> {
        check_epsilon(&epsilon)?;
        Ok(Instance {
            epsilon,
            ..self.clone()
        })
    }

    pub fn with_letters(&self, letters: LetterCosts) -> Self {
        Instance {
            letters,
            ..self.clone()
        }
    }
}

fn check_epsilon(epsilon: &Rational) -> Result<()> {
    if !epsilon.is_positive() || *epsilon > Rational::one() {
        return Err(Error::EpsilonOutOfRange(rational::format_rational(epsilon)));
    }
    Ok(())
}

/// Letter costs, `1` and `epsilon` as integer multiples of the cost quantum
/// `min(l_1, epsilon)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostGrid {
    pub letter_units: Vec<u64>,
    /// Units per cost 1 (the cost of letter `b`).
    pub one: u64,
    /// Units per epsilon.
    pub eps: u64,
    pub quantum: Rational,
}

impl CostGrid {
    /// Builds a grid directly from integer letter costs, skipping the rescaling.
    /// Used to run the level machinery on hand-picked cost sets.
    pub fn from_units(letter_units: Vec<u64>, one: u64, eps: u64) -> Self {
        debug_assert!(letter_units.windows(2).all(|w| w[0] <= w[1]));
        CostGrid {
            letter_units,
            one,
            eps,
            quantum: Rational::one(),
        }
    }

    pub fn cheapest(&self) -> u64 {
        self.letter_units[0]
    }

    pub fn max_letter(&self) -> u64 {
        *self.letter_units.last().expect("at least two letters")
    }

    /// `(units, multiplicity)` per distinct letter cost.
    pub fn distinct(&self) -> Vec<(u64, usize)> {
        let mut out: Vec<(u64, usize)> = Vec::new();
        for &u in &self.letter_units {
            match out.last_mut() {
                Some((last, mult)) if *last == u => *mult += 1,
                _ => out.push((u, 1)),
            }
        }
        out
    }

    pub fn to_cost(&self, units: u64) -> Rational {
        Rational::from_integer(BigInt::from(units)) * &self.quantum
    }
}

/// An instance rescaled so that `l_2 = 1`, every `l_i` for `i >= 2` is a multiple
/// of `epsilon'`, and `epsilon'` is a multiple or a divisor of `l_1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedInstance {
    /// Same weights as the source; letters and epsilon are the rescaled ones.
    pub instance: Instance,
    pub source_letters: LetterCosts,
    pub epsilon_prime: Rational,
    /// `min(l_1, epsilon')`; every codeword cost is an integer multiple of it.
    pub cost_quantum: Rational,
    /// Multiply normalized costs by this to return to source units (before rounding).
    pub scale_factor: Rational,
    pub grid: CostGrid,
}

impl NormalizedInstance {
    pub fn n(&self) -> usize {
        self.instance.n()
    }

    pub fn letters(&self) -> &LetterCosts {
        self.instance.letters()
    }
}

/// Rescales letter costs and epsilon into the integer cost grid.
///
/// 1. divide all costs by `l_2`;
/// 2. lower epsilon to the nearest multiple or divisor of `l_1`;
/// 3. raise each `l_i`, `i >= 2`, to a multiple of epsilon;
/// 4. divide costs and epsilon by the new `l_2`.
pub fn normalize(instance: &Instance) -> Result<NormalizedInstance> {
    let epsilon = instance.epsilon().clone();
    check_epsilon(&epsilon)?;
    let letters = instance.letters();
    let first_scale = letters.cost(1).clone();
    let mut costs: Vec<Rational> = letters.costs().iter().map(|c| c / &first_scale).collect();

    let ell1 = costs[0].clone();
    let eps_adjusted = if epsilon >= ell1 {
        (&epsilon / &ell1).floor() * &ell1
    } else {
        &ell1 / (&ell1 / &epsilon).ceil()
    };

    for c in costs.iter_mut().skip(1) {
        *c = (&*c / &eps_adjusted).ceil() * &eps_adjusted;
    }

    let second_scale = costs[1].clone();
    for c in costs.iter_mut() {
        *c = &*c / &second_scale;
    }
    let epsilon_prime = eps_adjusted / &second_scale;
    let scale_factor = first_scale * second_scale;

    let quantum = if costs[0] < epsilon_prime {
        costs[0].clone()
    } else {
        epsilon_prime.clone()
    };
    let to_units = |value: &Rational| -> Result<u64> {
        rational::to_u64_exact(&(value / &quantum)).ok_or(Error::CostOverflow)
    };
    let grid = CostGrid {
        letter_units: costs.iter().map(to_units).collect::<Result<Vec<_>>>()?,
        one: to_units(&Rational::one())?,
        eps: to_units(&epsilon_prime)?,
        quantum: quantum.clone(),
    };
    let normalized_letters = LetterCosts::new(costs)?;
    let normalized = instance
        .with_letters(normalized_letters)
        .with_epsilon(epsilon_prime.clone())?;
    Ok(NormalizedInstance {
        instance: normalized,
        source_letters: letters.clone(),
        epsilon_prime,
        cost_quantum: quantum,
        scale_factor,
        grid,
    })
}
