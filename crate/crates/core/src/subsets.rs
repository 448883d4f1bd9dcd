//! Revolving-door enumeration of k-subsets and a fixed block partition used
//! to spread subset sums over workers.

use crate::par::{map_blocks, KahanSum};

/// One element removed and one added between consecutive subsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Swap {
    pub removed: usize,
    pub added: usize,
}

/// Iterator over the k-subsets of `{0, …, n-1}` in revolving-door order
/// (Knuth, Algorithm 7.2.1.3R). Each item is the sorted subset and the swap
/// that produced it from its predecessor.
#[derive(Debug, Clone)]
pub struct RevolvingDoor {
    n: usize,
    k: usize,
    // c[1..=k] hold the subset, c[k+1] = n is a sentinel.
    c: Vec<usize>,
    started: bool,
    done: bool,
}

impl RevolvingDoor {
    pub fn new(n: usize, k: usize) -> Self {
        let mut c = vec![0; k + 2];
        for (j, cj) in c.iter_mut().enumerate().take(k + 1).skip(1) {
            *cj = j - 1;
        }
        c[k + 1] = n;
        Self {
            n,
            k,
            c,
            started: false,
            done: k > n,
        }
    }

    pub fn current(&self) -> &[usize] {
        &self.c[1..=self.k]
    }

    fn advance(&mut self) -> bool {
        let k = self.k;
        if k == 0 || k == self.n {
            return false;
        }
        let c = &mut self.c;
        let mut j;
        // R3
        if k % 2 == 1 {
            if c[1] + 1 < c[2] {
                c[1] += 1;
                return true;
            }
            j = 2;
        } else {
            if c[1] > 0 {
                c[1] -= 1;
                return true;
            }
            j = 2;
            // R5 entry
            if j > k {
                return false;
            }
            if c[j] + 1 < c[j + 1] {
                c[j - 1] = c[j];
                c[j] += 1;
                return true;
            }
            j += 1;
        }
        loop {
            if j > k {
                return false;
            }
            // R4: try to decrease c[j]
            if c[j] >= j {
                c[j] = c[j - 1];
                c[j - 1] = j - 2;
                return true;
            }
            j += 1;
            if j > k {
                return false;
            }
            // R5: try to increase c[j]
            if c[j] + 1 < c[j + 1] {
                c[j - 1] = c[j];
                c[j] += 1;
                return true;
            }
            j += 1;
        }
    }
}

impl Iterator for RevolvingDoor {
    type Item = (Vec<usize>, Option<Swap>);

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some((self.current().to_vec(), None));
        }
        let before = self.current().to_vec();
        if !self.advance() {
            self.done = true;
            return None;
        }
        let after = self.current().to_vec();
        let removed = *before.iter().find(|x| !after.contains(x)).expect("one element leaves");
        let added = *after.iter().find(|x| !before.contains(x)).expect("one element enters");
        Some((after, Some(Swap { removed, added })))
    }
}

/// `gray_code_subsets(n, k)`: every k-subset of `{0..n}` exactly once, with
/// single-swap deltas between consecutive subsets.
pub fn gray_code_subsets(n: usize, k: usize) -> RevolvingDoor {
    RevolvingDoor::new(n, k)
}

/// Visits every k-subset of `{0..n}` in revolving-door order without
/// allocating per step.
pub fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    let mut rd = RevolvingDoor::new(n, k);
    if rd.done {
        return;
    }
    f(rd.current());
    while rd.advance() {
        f(rd.current());
    }
}

/// Fixed partition of the k-subsets of `{0..n}` by their largest one or two
/// elements. Independent of the number of workers.
#[derive(Debug, Clone)]
pub struct SubsetBlocks {
    n: usize,
    k: usize,
    tops: Vec<Vec<usize>>,
}

impl SubsetBlocks {
    pub fn new(n: usize, k: usize) -> Self {
        let mut tops = Vec::new();
        if k > n {
        } else if k == 0 {
            tops.push(Vec::new());
        } else if k == 1 {
            tops.extend((0..n).map(|m| vec![m]));
        } else {
            for m1 in k - 1..n {
                for m2 in k - 2..m1 {
                    tops.push(vec![m2, m1]);
                }
            }
        }
        Self { n, k, tops }
    }

    pub fn len(&self) -> usize {
        self.tops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tops.is_empty()
    }

    /// Visits every subset of block `b` (sorted ascending).
    pub fn for_each_in_block(&self, b: usize, mut f: impl FnMut(&[usize])) {
        let top = &self.tops[b];
        let rest = self.k - top.len();
        let below = top.first().copied().unwrap_or(self.n);
        let mut buf = vec![0usize; self.k];
        buf[rest..].copy_from_slice(top);
        for_each_subset(below, rest, |s| {
            buf[..rest].copy_from_slice(s);
            f(&buf);
        });
    }
}

/// `Σ_{|I| = k} term(I)` over all k-subsets of `{0..n}` with compensated
/// summation; deterministic for any worker count.
pub fn subset_sum<F>(n: usize, k: usize, term: F) -> f64
where
    F: Fn(&[usize]) -> f64 + Sync + Send,
{
    let blocks = SubsetBlocks::new(n, k);
    let partial = map_blocks(blocks.len(), |b| {
        let mut acc = KahanSum::new();
        blocks.for_each_in_block(b, |s| acc.add(term(s)));
        acc.value()
    });
    partial.into_iter().collect::<KahanSum>().value()
}

/// Like [`subset_sum`] but `make_state` builds per-block scratch space that
/// `term` may reuse.
pub fn subset_sum_with<S, M, F>(n: usize, k: usize, make_state: M, term: F) -> f64
where
    M: Fn() -> S + Sync + Send,
    F: Fn(&mut S, &[usize]) -> f64 + Sync + Send,
{
    let blocks = SubsetBlocks::new(n, k);
    let partial = map_blocks(blocks.len(), |b| {
        let mut state = make_state();
        let mut acc = KahanSum::new();
        blocks.for_each_in_block(b, |s| acc.add(term(&mut state, s)));
        acc.value()
    });
    partial.into_iter().collect::<KahanSum>().value()
}
