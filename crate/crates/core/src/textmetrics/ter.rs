use serde::Serialize;

use super::edit_distance::{align, Op};
use crate::error::{Error, Result};

/// Longest block of hypothesis tokens a single shift may move.
pub const MAX_SHIFT_BLOCK: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct EditBreakdown {
    pub insertions: usize,
    pub deletions: usize,
    pub substitutions: usize,
    pub shifts: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TerResult {
    pub edits: usize,
    pub ref_len: usize,
    pub score: f64,
    pub breakdown: EditBreakdown,
}

#[derive(Debug, Clone, Copy)]
struct Shift {
    start: usize,
    len: usize,
    dest: usize,
}

/// Writes `hyp` with `hyp[start..start + len]` moved before the token
/// originally at index `dest` (`dest == hyp.len()` appends) into `out`.
fn apply_shift_into<T: Clone>(hyp: &[T], s: Shift, out: &mut Vec<T>) {
    let block = &hyp[s.start..s.start + s.len];
    out.clear();
    if s.dest < s.start {
        out.extend_from_slice(&hyp[..s.dest]);
        out.extend_from_slice(block);
        out.extend_from_slice(&hyp[s.dest..s.start]);
        out.extend_from_slice(&hyp[s.start + s.len..]);
    } else {
        out.extend_from_slice(&hyp[..s.start]);
        out.extend_from_slice(&hyp[s.start + s.len..s.dest]);
        out.extend_from_slice(block);
        out.extend_from_slice(&hyp[s.dest..]);
    }
}

fn apply_shift<T: Clone>(hyp: &[T], s: Shift) -> Vec<T> {
    let mut out = Vec::with_capacity(hyp.len());
    apply_shift_into(hyp, s, &mut out);
    out
}

/// Edit distance, or `None` as soon as it is certain to be `>= bound`.
/// Every alignment path crosses every row and costs never decrease along
/// it, so a row whose minimum reaches `bound` settles the question.
fn edit_distance_below(hyp: &[u32], refr: &[u32], bound: usize, prev: &mut Vec<usize>, row: &mut Vec<usize>) -> Option<usize> {
    prev.clear();
    prev.extend(0..=refr.len());
    for (i, h) in hyp.iter().enumerate() {
        row.clear();
        row.push(i + 1);
        let mut row_min = i + 1;
        for (j, r) in refr.iter().enumerate() {
            let v = (prev[j] + usize::from(h != r)).min(prev[j + 1] + 1).min(row[j] + 1);
            row_min = row_min.min(v);
            row.push(v);
        }
        if row_min >= bound {
            return None;
        }
        std::mem::swap(prev, row);
    }
    let d = prev[refr.len()];
    (d < bound).then_some(d)
}

/// For each hypothesis position, the reference position it is matched to
/// (exact match only) under the given alignment.
fn matched_positions(ops: &[Op], hyp_len: usize) -> Vec<Option<usize>> {
    let mut out = vec![None; hyp_len];
    let (mut i, mut j) = (0, 0);
    for op in ops {
        match op {
            Op::Match => {
                out[i] = Some(j);
                i += 1;
                j += 1;
            }
            Op::Substitute => {
                i += 1;
                j += 1;
            }
            Op::Delete => i += 1,
            Op::Insert => j += 1,
        }
    }
    out
}

/// Whether the block at `start` has a misaligned copy somewhere in `refr`.
fn is_shift_candidate<T: PartialEq>(
    hyp: &[T],
    refr: &[T],
    matched: &[Option<usize>],
    start: usize,
    len: usize,
) -> bool {
    let block = &hyp[start..start + len];
    (0..=refr.len().saturating_sub(len)).any(|j| {
        refr.len() >= len
            && &refr[j..j + len] == block
            && !(0..len).all(|k| matched[start + k] == Some(j + k))
    })
}

fn best_shift(hyp: &[u32], refr: &[u32], cur: usize, ops: &[Op]) -> Option<(Shift, usize)> {
    let matched = matched_positions(ops, hyp.len());
    let mut best: Option<(Shift, usize)> = None;
    let (mut shifted, mut prev, mut row) = (Vec::new(), Vec::new(), Vec::new());
    for start in 0..hyp.len() {
        for len in 1..=MAX_SHIFT_BLOCK.min(hyp.len() - start) {
            if !is_shift_candidate(hyp, refr, &matched, start, len) {
                continue;
            }
            for dest in (0..=hyp.len()).filter(|d| *d < start || *d > start + len) {
                let shift = Shift { start, len, dest };
                apply_shift_into(hyp, shift, &mut shifted);
                let bound = best.map_or(cur, |(_, r)| r);
                if let Some(remaining) = edit_distance_below(&shifted, refr, bound, &mut prev, &mut row) {
                    best = Some((shift, remaining));
                }
            }
        }
    }
    best
}

/// Maps tokens to dense ids so the search compares integers.
fn intern<T: PartialEq>(hyp: &[T], refr: &[T]) -> (Vec<u32>, Vec<u32>) {
    let mut seen: Vec<&T> = Vec::new();
    let mut ids = Vec::with_capacity(hyp.len() + refr.len());
    for t in hyp.iter().chain(refr) {
        let k = match seen.iter().position(|s| *s == t) {
            Some(k) => k,
            None => {
                seen.push(t);
                seen.len() - 1
            }
        };
        ids.push(k as u32);
    }
    let r = ids.split_off(hyp.len());
    (ids, r)
}

/// Translation edit rate with greedy block shifts.
///
/// Each round applies the single block shift that lowers the remaining edit
/// distance the most; ties go to the smallest block start, then the shortest
/// block, then the leftmost destination. A block is eligible only if it
/// equals some reference span it is not already aligned to. Rounds stop when
/// no shift strictly lowers the distance.
pub fn ter<T: PartialEq>(hyp: &[T], refr: &[T]) -> Result<TerResult> {
    if refr.is_empty() {
        return Err(Error::EmptyReference);
    }
    let (mut cur_hyp, refr) = intern(hyp, refr);
    let refr = refr.as_slice();
    let (mut cur, mut ops) = align(&cur_hyp, refr);
    let mut shifts = 0;
    while cur > 0 {
        let Some((shift, _)) = best_shift(&cur_hyp, refr, cur, &ops) else {
            break;
        };
        cur_hyp = apply_shift(&cur_hyp, shift);
        shifts += 1;
        (cur, ops) = align(&cur_hyp, refr);
    }

    let mut breakdown = EditBreakdown {
        shifts,
        ..Default::default()
    };
    for op in &ops {
        match op {
            Op::Match => {}
            Op::Substitute => breakdown.substitutions += 1,
            Op::Delete => breakdown.deletions += 1,
            Op::Insert => breakdown.insertions += 1,
        }
    }
    let edits = cur + shifts;
    Ok(TerResult {
        edits,
        ref_len: refr.len(),
        score: edits as f64 / refr.len() as f64,
        breakdown,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textmetrics::word_edit_distance;
    use proptest::prelude::*;

    fn toks(s: &str) -> Vec<&str> {
        s.split_whitespace().collect()
    }

    #[test]
    fn identical() {
        let r = ter(&toks("a b"), &toks("a b")).unwrap();
        assert_eq!(r.edits, 0);
        assert_eq!(r.score, 0.0);
    }

    #[test]
    fn empty_hypothesis_is_all_insertions() {
        let r = ter(&toks(""), &toks("a b")).unwrap();
        assert_eq!(r.edits, 2);
        assert_eq!(r.score, 1.0);
        assert_eq!(r.breakdown.insertions, 2);
    }

    #[test]
    fn single_swap_is_one_shift() {
        let r = ter(&toks("a c b d"), &toks("a b c d")).unwrap();
        assert_eq!(r.edits, 1);
        assert_eq!(r.breakdown.shifts, 1);
        assert_eq!(r.score, 0.25);
    }

    #[test]
    fn block_shift() {
        // "on the mat" moved to the front: one shift
        let r = ter(
            &toks("on the mat the cat sat"),
            &toks("the cat sat on the mat"),
        )
        .unwrap();
        assert_eq!(r.edits, 1);
    }

    #[test]
    fn empty_reference() {
        assert_eq!(ter(&toks("a"), &toks("")).unwrap_err(), Error::EmptyReference);
    }

    #[test]
    fn apply_shift_both_directions() {
        let h = toks("a b c d e");
        let s = apply_shift(&h, Shift { start: 3, len: 2, dest: 1 });
        assert_eq!(s, toks("a d e b c"));
        let s = apply_shift(&h, Shift { start: 0, len: 2, dest: 5 });
        assert_eq!(s, toks("c d e a b"));
    }

    fn seq() -> impl Strategy<Value = Vec<u8>> {
        proptest::collection::vec(0u8..4, 0..7)
    }

    proptest! {
        #[test]
        fn bounded_by_edit_distance(h in seq(), r in proptest::collection::vec(0u8..4, 1..7)) {
            let res = ter(&h, &r).unwrap();
            prop_assert!(res.edits <= word_edit_distance(&h, &r));
            prop_assert_eq!(res.score == 0.0, h == r);
            let b = res.breakdown;
            prop_assert_eq!(b.insertions + b.deletions + b.substitutions + b.shifts, res.edits);
            prop_assert_eq!(ter(&h, &r).unwrap(), res);
        }
    }
}
