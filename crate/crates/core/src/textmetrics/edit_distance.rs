/// Token-level Levenshtein distance with unit costs.
pub fn word_edit_distance<T: PartialEq>(hyp: &[T], refr: &[T]) -> usize {
    if hyp.is_empty() {
        return refr.len();
    }
    if refr.is_empty() {
        return hyp.len();
    }
    let mut prev: Vec<usize> = (0..=refr.len()).collect();
    let mut cur = vec![0; refr.len() + 1];
    for (i, h) in hyp.iter().enumerate() {
        cur[0] = i + 1;
        for (j, r) in refr.iter().enumerate() {
            let sub = prev[j] + usize::from(h != r);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[refr.len()]
}

/// One step of a minimum-cost alignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Op {
    Match,
    Substitute,
    /// Hypothesis token with no counterpart.
    Delete,
    /// Reference token with no counterpart.
    Insert,
}

/// Full-table edit distance with a deterministic backtrace. Ties prefer
/// match/substitution, then deletion, then insertion.
pub(crate) fn align<T: PartialEq>(hyp: &[T], refr: &[T]) -> (usize, Vec<Op>) {
    let (n, m) = (hyp.len(), refr.len());
    let w = m + 1;
    let mut d = vec![0usize; (n + 1) * w];
    for j in 0..=m {
        d[j] = j;
    }
    for i in 1..=n {
        d[i * w] = i;
        for j in 1..=m {
            let sub = d[(i - 1) * w + j - 1] + usize::from(hyp[i - 1] != refr[j - 1]);
            d[i * w + j] = sub.min(d[(i - 1) * w + j] + 1).min(d[i * w + j - 1] + 1);
        }
    }
    let mut ops = Vec::with_capacity(n.max(m));
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let here = d[i * w + j];
        if i > 0 && j > 0 {
            let same = hyp[i - 1] == refr[j - 1];
            if d[(i - 1) * w + j - 1] + usize::from(!same) == here {
                ops.push(if same { Op::Match } else { Op::Substitute });
                i -= 1;
                j -= 1;
                continue;
            }
        }
        if i > 0 && d[(i - 1) * w + j] + 1 == here {
            ops.push(Op::Delete);
            i -= 1;
        } else {
            ops.push(Op::Insert);
            j -= 1;
        }
    }
    ops.reverse();
    (d[n * w + m], ops)
}
