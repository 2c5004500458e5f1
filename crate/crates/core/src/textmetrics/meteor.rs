use std::collections::HashMap;
use std::hash::Hash;

use serde::Serialize;

use crate::error::{Error, Result};

/// Sentences up to this length get an exact minimum-chunk alignment.
const EXACT_SEARCH_MAX_LEN: usize = 20;
/// Node cap for the exact search; the best alignment found so far is kept if
/// it is reached.
const SEARCH_NODE_BUDGET: usize = 2_000_000;

const FMEAN_RECALL_WEIGHT: f64 = 9.0;
const PENALTY_GAMMA: f64 = 0.5;
const PENALTY_BETA: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeteorResult {
    pub matches: usize,
    pub chunks: usize,
    pub precision: f64,
    pub recall: f64,
    pub fmean: f64,
    pub penalty: f64,
    pub score: f64,
}

struct Search<'a> {
    hyp: &'a [usize],
    /// Reference positions per token class.
    ref_positions: Vec<Vec<usize>>,
    /// Hypothesis occurrences of each class at or after the current position.
    hyp_left: Vec<usize>,
    /// Matches still owed per class to reach the maximum matching.
    need: Vec<usize>,
    used: Vec<bool>,
    best: usize,
    nodes: usize,
    budget: usize,
}

impl Search<'_> {
    /// Once a first alignment exists, stop exploring past the node budget.
    fn exhausted(&self) -> bool {
        self.best != usize::MAX && self.nodes > self.budget
    }

    /// `prev` is the reference position of hypothesis token `i - 1` when it
    /// was matched.
    fn run(&mut self, i: usize, prev: Option<usize>, chunks: usize) {
        self.nodes += 1;
        if chunks >= self.best {
            return;
        }
        if i == self.hyp.len() {
            self.best = chunks;
            return;
        }
        let class = self.hyp[i];
        self.hyp_left[class] -= 1;

        if self.need[class] > 0 {
            // Continuing the current chunk is tried first so the first leaf
            // reached is the greedy alignment.
            let mut order: Vec<usize> = Vec::with_capacity(self.ref_positions[class].len());
            if let Some(p) = prev.map(|p| p + 1) {
                if self.ref_positions[class].contains(&p) && !self.used[p] {
                    order.push(p);
                }
            }
            for &p in &self.ref_positions[class] {
                if !self.used[p] && Some(p) != prev.map(|q| q + 1) {
                    order.push(p);
                }
            }
            for p in order {
                if self.exhausted() {
                    break;
                }
                let extends = prev.is_some_and(|q| q + 1 == p);
                self.used[p] = true;
                self.need[class] -= 1;
                self.run(i + 1, Some(p), chunks + usize::from(!extends));
                self.need[class] += 1;
                self.used[p] = false;
            }
        }
        // Leaving this token unmatched is only allowed if the remaining
        // occurrences can still cover what is owed.
        if self.hyp_left[class] >= self.need[class] && !self.exhausted() {
            self.run(i + 1, None, chunks);
        }
        self.hyp_left[class] += 1;
    }
}

/// Returns (matches, chunks) for a maximum one-to-one exact-match alignment
/// with as few chunks as the search finds.
fn align_chunks<T: Hash + Eq>(hyp: &[T], refr: &[T]) -> (usize, usize) {
    let mut classes: HashMap<&T, usize> = HashMap::new();
    let mut hyp_ids = Vec::with_capacity(hyp.len());
    for t in hyp {
        let next = classes.len();
        hyp_ids.push(*classes.entry(t).or_insert(next));
    }
    let mut ref_ids = Vec::with_capacity(refr.len());
    for t in refr {
        let next = classes.len();
        ref_ids.push(*classes.entry(t).or_insert(next));
    }
    let k = classes.len();

    let mut ref_positions = vec![Vec::new(); k];
    for (p, &c) in ref_ids.iter().enumerate() {
        ref_positions[c].push(p);
    }
    let mut hyp_left = vec![0; k];
    for &c in &hyp_ids {
        hyp_left[c] += 1;
    }
    let need: Vec<usize> = (0..k)
        .map(|c| hyp_left[c].min(ref_positions[c].len()))
        .collect();
    let matches: usize = need.iter().sum();
    if matches == 0 {
        return (0, 0);
    }

    let exact = hyp.len().max(refr.len()) <= EXACT_SEARCH_MAX_LEN;
    let mut search = Search {
        hyp: &hyp_ids,
        ref_positions,
        hyp_left,
        need,
        used: vec![false; refr.len()],
        best: usize::MAX,
        nodes: 0,
        budget: if exact { SEARCH_NODE_BUDGET } else { 0 },
    };
    search.run(0, None, 0);
    (matches, search.best)
}

/// METEOR with exact unigram matching only (no stemming or synonyms) and the
/// original parameters: `fmean = 10PR / (R + 9P)`,
/// `penalty = 0.5 (chunks / matches)^3`.
pub fn meteor_lite<T: Hash + Eq>(hyp: &[T], refr: &[T]) -> Result<MeteorResult> {
    if refr.is_empty() {
        return Err(Error::EmptyReference);
    }
    let (matches, chunks) = align_chunks(hyp, refr);
    if matches == 0 {
        return Ok(MeteorResult {
            matches: 0,
            chunks: 0,
            precision: 0.0,
            recall: 0.0,
            fmean: 0.0,
            penalty: 0.0,
            score: 0.0,
        });
    }
    let precision = matches as f64 / hyp.len() as f64;
    let recall = matches as f64 / refr.len() as f64;
    let fmean = (1.0 + FMEAN_RECALL_WEIGHT) * precision * recall
        / (recall + FMEAN_RECALL_WEIGHT * precision);
    let penalty = PENALTY_GAMMA * (chunks as f64 / matches as f64).powf(PENALTY_BETA);
    Ok(MeteorResult {
        matches,
        chunks,
        precision,
        recall,
        fmean,
        penalty,
        score: fmean * (1.0 - penalty),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn toks(s: &str) -> Vec<&str> {
        s.split_whitespace().collect()
    }

    #[test]
    fn no_overlap() {
        let m = meteor_lite(&toks("x y"), &toks("a b")).unwrap();
        assert_eq!(m.matches, 0);
        assert_eq!(m.score, 0.0);
    }

    #[test]
    fn identical_pair() {
        let m = meteor_lite(&toks("a b"), &toks("a b")).unwrap();
        assert_eq!((m.matches, m.chunks), (2, 1));
        assert_relative_eq!(m.fmean, 1.0, epsilon = 1e-12);
        assert_relative_eq!(m.penalty, 0.0625, epsilon = 1e-12);
        assert_relative_eq!(m.score, 0.9375, epsilon = 1e-12);
    }

    #[test]
    fn half_match() {
        let m = meteor_lite(&toks("the cat"), &toks("the dog")).unwrap();
        assert_eq!((m.matches, m.chunks), (1, 1));
        assert_relative_eq!(m.precision, 0.5);
        assert_relative_eq!(m.recall, 0.5);
        assert_relative_eq!(m.fmean, 0.5, epsilon = 1e-12);
        assert_relative_eq!(m.penalty, 0.5, epsilon = 1e-12);
        assert_relative_eq!(m.score, 0.25, epsilon = 1e-12);
    }

    #[test]
    fn prefers_fewer_chunks_with_repeats() {
        // a greedy left-to-right pairing of "the" would split the phrase
        let m = meteor_lite(&toks("the cat on the mat"), &toks("the mat and the cat on")).unwrap();
        assert_eq!(m.matches, 5);
        assert_eq!(m.chunks, 2);
    }

    #[test]
    fn empty_reference() {
        assert_eq!(
            meteor_lite(&toks("a"), &toks("")).unwrap_err(),
            Error::EmptyReference
        );
    }

    /// Enumerates every maximum one-to-one matching and returns the minimum
    /// chunk count.
    fn brute_force_chunks(hyp: &[u8], refr: &[u8]) -> (usize, usize) {
        fn rec(hyp: &[u8], refr: &[u8], i: usize, used: &mut Vec<bool>, pairs: &mut Vec<(usize, usize)>, best: &mut (usize, usize)) {
            if i == hyp.len() {
                let mut chunks = 0;
                let mut prev: Option<(usize, usize)> = None;
                for &(h, r) in pairs.iter() {
                    if !matches!(prev, Some((ph, pr)) if ph + 1 == h && pr + 1 == r) {
                        chunks += 1;
                    }
                    prev = Some((h, r));
                }
                let m = pairs.len();
                if m > best.0 || (m == best.0 && chunks < best.1) {
                    *best = (m, chunks);
                }
                return;
            }
            rec(hyp, refr, i + 1, used, pairs, best);
            for p in 0..refr.len() {
                if !used[p] && refr[p] == hyp[i] {
                    used[p] = true;
                    pairs.push((i, p));
                    rec(hyp, refr, i + 1, used, pairs, best);
                    pairs.pop();
                    used[p] = false;
                }
            }
        }
        let mut best = (0, 0);
        rec(hyp, refr, 0, &mut vec![false; refr.len()], &mut Vec::new(), &mut best);
        best
    }

    proptest! {
        #[test]
        fn search_matches_enumeration(h in proptest::collection::vec(0u8..3, 0..7), r in proptest::collection::vec(0u8..3, 1..7)) {
            prop_assert_eq!(align_chunks(&h, &r), brute_force_chunks(&h, &r));
        }

        #[test]
        fn ranges_and_self_match(h in proptest::collection::vec(0u8..6, 1..30), r in proptest::collection::vec(0u8..6, 1..30)) {
            let m = meteor_lite(&h, &r).unwrap();
            prop_assert!(m.chunks <= m.matches);
            prop_assert!(m.matches <= h.len().min(r.len()));
            prop_assert!((0.0..=1.0).contains(&m.score));
            prop_assert!((0.0..=0.5).contains(&m.penalty));
            prop_assert_eq!(m.score == 0.0, m.matches == 0);
            let s = meteor_lite(&h, &h).unwrap();
            prop_assert_eq!((s.matches, s.chunks), (h.len(), 1));
        }
    }
}
