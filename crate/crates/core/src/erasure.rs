//! Erasure patterns, encoding, two-stage decoding and capability sweeps.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinat::binomial;
use crate::field::Elem;
use crate::pmds::{BlockLayout, CodeArtifact, PmdsParams};
use crate::Error;

/// Sorted, distinct erased coordinates of a length-`n` codeword.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ErasurePattern {
    indices: Vec<usize>,
}

impl ErasurePattern {
    pub fn new(mut indices: Vec<usize>, n: usize) -> Result<Self, Error> {
        indices.sort_unstable();
        if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
            return Err(Error::OutOfBounds { index: bad, len: n });
        }
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParams("erasure pattern repeats an index".into()));
        }
        Ok(ErasurePattern { indices })
    }

    pub fn empty() -> Self {
        ErasurePattern { indices: Vec::new() }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// Erasures per block, `e_1..e_m`.
    pub fn block_counts(&self, layout: &BlockLayout) -> Vec<usize> {
        let mut counts = vec![0; layout.m()];
        for &i in &self.indices {
            counts[layout.block_of(i)] += 1;
        }
        counts
    }

    /// Surviving coordinates of a length-`n` word.
    pub fn survivors(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|&i| !self.contains(i)).collect()
    }

    /// At most `r_i` erasures per block plus at most `s` more anywhere.
    pub fn within_budget(&self, params: &PmdsParams) -> bool {
        within_budget(&self.block_counts(&params.layout()), &params.r, params.s)
    }

    /// `received[i] = None` on erased positions.
    pub fn apply(&self, codeword: &[Elem]) -> Vec<Option<Elem>> {
        codeword.iter().enumerate().map(|(i, &c)| (!self.contains(i)).then_some(c)).collect()
    }
}

/// Whether `pattern` splits into at most `r_i` erasures per block plus at
/// most `s` further erasures anywhere.
fn within_budget(counts: &[usize], r: &[usize], s: usize) -> bool {
    counts.iter().zip(r).map(|(&e, &ri)| e.saturating_sub(ri)).sum::<usize>() <= s
}

/// Every pattern made of at most `r_i` erasures in block `i` plus at most `s`
/// more anywhere, each exactly once, in lexicographic order of the sorted
/// index lists (the empty pattern first).
pub struct Lemma3Patterns {
    layout: BlockLayout,
    r: Vec<usize>,
    s: usize,
    n: usize,
    stack: Vec<usize>,
    counts: Vec<usize>,
    excess: usize,
    started: bool,
    done: bool,
}

impl Lemma3Patterns {
    /// `s = 0` is allowed here even though it is not a valid PMDS parameter.
    pub fn new(widths: Vec<usize>, r: Vec<usize>, s: usize) -> Self {
        let m = widths.len();
        assert_eq!(r.len(), m, "one redundancy value per block");
        let layout = BlockLayout::new(1, widths);
        let n = layout.n();
        Lemma3Patterns {
            layout,
            r,
            s,
            n,
            stack: Vec::new(),
            counts: vec![0; m],
            excess: 0,
            started: false,
            done: false,
        }
    }

    fn excess_if_added(&self, i: usize) -> usize {
        let b = self.layout.block_of(i);
        self.excess + usize::from(self.counts[b] >= self.r[b])
    }

    fn push(&mut self, i: usize) {
        self.excess = self.excess_if_added(i);
        self.counts[self.layout.block_of(i)] += 1;
        self.stack.push(i);
    }

    fn pop(&mut self) -> usize {
        let i = self.stack.pop().expect("non-empty");
        let b = self.layout.block_of(i);
        self.counts[b] -= 1;
        if self.counts[b] >= self.r[b] {
            self.excess -= 1;
        }
        i
    }
}

impl Iterator for Lemma3Patterns {
    type Item = ErasurePattern;

    fn next(&mut self) -> Option<ErasurePattern> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(ErasurePattern::empty());
        }
        // Descend: smallest index above the current top that stays in budget.
        let start = self.stack.last().map_or(0, |&t| t + 1);
        if let Some(i) = (start..self.n).find(|&i| self.excess_if_added(i) <= self.s) {
            self.push(i);
            return Some(ErasurePattern { indices: self.stack.clone() });
        }
        // Otherwise replace the top by the next admissible larger index,
        // popping further when none exists.
        while !self.stack.is_empty() {
            let top = self.pop();
            if let Some(i) = (top + 1..self.n).find(|&i| self.excess_if_added(i) <= self.s) {
                self.push(i);
                return Some(ErasurePattern { indices: self.stack.clone() });
            }
        }
        self.done = true;
        None
    }
}

pub fn lemma3_patterns(params: &PmdsParams) -> Lemma3Patterns {
    Lemma3Patterns::new(params.block_widths(), params.r.clone(), params.s)
}

/// Size of the [`lemma3_patterns`] family without enumerating it.
pub fn count_lemma3_patterns(params: &PmdsParams) -> BigUint {
    // dist[x] = number of choices over the blocks so far with total excess x.
    let s = params.s;
    let mut dist = vec![BigUint::zero(); s + 1];
    dist[0] = BigUint::one();
    for (w, &ri) in params.block_widths().into_iter().zip(&params.r) {
        let mut next = vec![BigUint::zero(); s + 1];
        for (x, ways) in dist.iter().enumerate() {
            if ways.is_zero() {
                continue;
            }
            for e in 0..=w {
                let y = x + e.saturating_sub(ri);
                if y > s {
                    break;
                }
                next[y] += ways * binomial(w as i64, e as i64);
            }
        }
        dist = next;
    }
    dist.into_iter().sum()
}

/// A uniformly chosen decomposition: `|A_i|` uniform in `0..=r_i`, then `A_i`
/// uniform of that size; `|S|` uniform in `0..=s`, then `S` uniform among the
/// remaining coordinates.
pub fn random_lemma3_pattern<R: Rng + ?Sized>(params: &PmdsParams, rng: &mut R) -> ErasurePattern {
    let layout = params.layout();
    let mut erased = Vec::new();
    for (b, &ri) in params.r.iter().enumerate() {
        let range = layout.range(b);
        let size = rng.gen_range(0..=ri);
        erased.extend(sample(rng, range.len(), size).into_iter().map(|i| range.start + i));
    }
    let n = layout.n();
    let rest: Vec<usize> = (0..n).filter(|i| !erased.contains(i)).collect();
    let size = rng.gen_range(0..=params.s.min(rest.len()));
    erased.extend(sample(rng, rest.len(), size).into_iter().map(|i| rest[i]));
    ErasurePattern::new(erased, n).expect("distinct and in range")
}

/// `message · G`.
pub fn encode(code: &CodeArtifact, message: &[Elem]) -> Result<Vec<Elem>, Error> {
    code.generator.left_mul_vec(message)
}

/// The surviving columns of `G` have rank `k`.
pub fn is_correctable(code: &CodeArtifact, pattern: &ErasurePattern) -> bool {
    let surviving = pattern.survivors(code.generator.cols());
    surviving.len() >= code.generator.rows()
        && code.generator.select_columns(&surviving).rank() == code.generator.rows()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    RecoveredLocally,
    RecoveredGlobally,
    Unrecoverable,
}

/// How one block's erased coordinates were handled.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockRoute {
    Intact,
    /// Rebuilt from the listed in-block coordinates only.
    Local {
        contacted: Vec<usize>,
    },
    Global,
    Unrecovered,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecoveryReport {
    pub pattern: ErasurePattern,
    pub outcome: Outcome,
    pub codeword: Option<Vec<Elem>>,
    pub routes: Vec<BlockRoute>,
}

/// Local repair of every block that has at least ℓ survivors spanning its
/// row space, then a global solve for anything left.
pub fn decode(code: &CodeArtifact, received: &[Option<Elem>]) -> Result<RecoveryReport, Error> {
    let g = &code.generator;
    let (k, n) = (g.rows(), g.cols());
    if received.len() != n {
        return Err(Error::Dimension(format!("received word of length {} for n = {n}", received.len())));
    }
    let f = g.field();
    let erased: Vec<usize> = (0..n).filter(|&i| received[i].is_none()).collect();
    let pattern = ErasurePattern { indices: erased };
    let layout = code.layout();
    let ell = layout.ell;
    let mut word: Vec<Option<Elem>> = received.to_vec();
    let mut routes = Vec::with_capacity(layout.m());

    for b in 0..layout.m() {
        let range = layout.range(b);
        let lost: Vec<usize> = range.clone().filter(|&i| received[i].is_none()).collect();
        if lost.is_empty() {
            routes.push(BlockRoute::Intact);
            continue;
        }
        let alive: Vec<usize> = range.filter(|&i| received[i].is_some()).collect();
        if alive.len() < ell {
            routes.push(BlockRoute::Global);
            continue;
        }
        let contacted = alive[..ell].to_vec();
        let basis = g.select_columns(&contacted);
        let mut repaired = Vec::with_capacity(lost.len());
        for &c in &lost {
            match basis.solve(&g.column(c))? {
                Some(x) => {
                    let v = x
                        .iter()
                        .zip(&contacted)
                        .fold(Elem::ZERO, |acc, (&xi, &j)| f.add(acc, f.mul(xi, received[j].expect("survivor"))));
                    repaired.push((c, v));
                }
                None => break,
            }
        }
        if repaired.len() == lost.len() {
            for (c, v) in repaired {
                word[c] = Some(v);
            }
            routes.push(BlockRoute::Local { contacted });
        } else {
            routes.push(BlockRoute::Global);
        }
    }

    if word.iter().all(Option::is_some) {
        let codeword = word.into_iter().map(|v| v.expect("filled")).collect();
        return Ok(RecoveryReport { pattern, outcome: Outcome::RecoveredLocally, codeword: Some(codeword), routes });
    }

    let surviving = pattern.survivors(n);
    let sub = g.select_columns(&surviving);
    if sub.rank() < k {
        for route in &mut routes {
            if *route == BlockRoute::Global {
                *route = BlockRoute::Unrecovered;
            }
        }
        return Ok(RecoveryReport { pattern, outcome: Outcome::Unrecoverable, codeword: None, routes });
    }
    let values: Vec<Elem> = surviving.iter().map(|&i| received[i].expect("survivor")).collect();
    let message = sub.transpose().solve(&values)?.ok_or(Error::Inconsistent)?;
    let codeword = g.left_mul_vec(&message)?;
    if word.iter().zip(&codeword).any(|(w, c)| w.is_some_and(|w| w != *c)) {
        return Err(Error::Inconsistent);
    }
    Ok(RecoveryReport { pattern, outcome: Outcome::RecoveredGlobally, codeword: Some(codeword), routes })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepVerdict {
    pub all_correctable: bool,
    pub patterns_tested: u64,
    pub first_counterexample: Option<ErasurePattern>,
}

const SWEEP_CHUNK: usize = 4096;

/// [`is_correctable`] over every pattern of [`lemma3_patterns`]; stops at the
/// first (in enumeration order) pattern that is not.
pub fn capability_sweep(code: &CodeArtifact) -> SweepVerdict {
    let mut patterns = lemma3_patterns(&code.params);
    let mut tested = 0u64;
    loop {
        let chunk: Vec<ErasurePattern> = patterns.by_ref().take(SWEEP_CHUNK).collect();
        if chunk.is_empty() {
            return SweepVerdict { all_correctable: true, patterns_tested: tested, first_counterexample: None };
        }
        if let Some(pos) = chunk.par_iter().position_first(|p| !is_correctable(code, p)) {
            return SweepVerdict {
                all_correctable: false,
                patterns_tested: tested + pos as u64 + 1,
                first_counterexample: Some(chunk[pos].clone()),
            };
        }
        tested += chunk.len() as u64;
    }
}
