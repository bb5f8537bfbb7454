//! Doubling ladders for the cost graph, leveled construction and conversion.

use std::io::Write;
use std::time::Instant;

use ulcode_core::convert::convert_codewords;
use ulcode_core::rational::{format_rational, ratio};
use ulcode_core::{build_cost_graph, choose_k, construct_leveled, normalize, Guess, Instance};

use crate::CliError;

/// Words in the `inv-eps` ladder.
const FIXED_N: usize = 256;
/// `1/epsilon` in the `n` ladder.
const FIXED_INV_EPS: i64 = 2;
const LETTERS: [i64; 3] = [1, 2, 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Words { from: u64, to: u64 },
    InverseEpsilon { from: u64, to: u64 },
}

pub fn parse_spec(spec: &str) -> Option<Ladder> {
    let (kind, range) = spec.split_once(':')?;
    let (from, to) = range.split_once("..")?;
    let (from, to): (u64, u64) = (from.trim().parse().ok()?, to.trim().parse().ok()?);
    if from == 0 || to < from {
        return None;
    }
    match kind.trim() {
        "n" => Some(Ladder::Words { from, to }),
        "inv-eps" => Some(Ladder::InverseEpsilon { from, to }),
        _ => None,
    }
}

impl Ladder {
    /// `(n, 1/epsilon)` for each rung.
    fn rungs(self) -> Vec<(usize, i64)> {
        let (from, to) = match self {
            Ladder::Words { from, to } | Ladder::InverseEpsilon { from, to } => (from, to),
        };
        let mut out = Vec::new();
        let mut x = from;
        while x <= to {
            out.push(match self {
                Ladder::Words { .. } => (x as usize, FIXED_INV_EPS),
                Ladder::InverseEpsilon { .. } => (FIXED_N, x as i64),
            });
            x = match x.checked_mul(2) {
                Some(next) => next,
                None => break,
            };
        }
        out
    }
}

pub fn cmd_bench(spec: &str, out: &mut dyn Write) -> Result<(), CliError> {
    let ladder = parse_spec(spec).ok_or_else(|| CliError::BenchSpec(spec.to_string()))?;
    writeln!(out, "n\tinv_eps\tk\tnodes\tarcs\tbuild_work\tconvert_work\tmillis")?;
    for (n, inv_eps) in ladder.rungs() {
        let started = Instant::now();
        let inst = Instance::from_integers(&vec![1; n], &LETTERS, ratio(1, inv_eps))?;
        let norm = normalize(&inst)?;
        let k = choose_k(&norm.epsilon_prime);
        let graph = build_cost_graph(&norm, &k)?;
        // One codeword on each of the first three reachable levels.
        let mut levels = vec![0u64; graph.level_count()];
        for i in (1..=levels.len()).filter(|&i| graph.contains(graph.level_top(i))).take(3) {
            levels[i - 1] = 1;
        }
        let (build, convert) = match construct_leveled(&graph, &Guess::new(0, levels), n) {
            Ok(code) => {
                let done = convert_codewords(code.codewords(), graph.letter_units(), graph.k_units());
                (code.work().to_string(), done.work.to_string())
            }
            Err(why) => (format!("inconsistent: {why}"), "-".into()),
        };
        writeln!(
            out,
            "{n}\t{inv_eps}\t{}\t{}\t{}\t{build}\t{convert}\t{}",
            format_rational(&k),
            graph.node_count(),
            graph.arc_count(),
            started.elapsed().as_millis()
        )?;
    }
    Ok(())
}
