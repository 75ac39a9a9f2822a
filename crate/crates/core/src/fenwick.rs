/// Fenwick tree over 0/1 occupancy flags of `1..=len`, with k-th order statistic lookup.
#[derive(Clone, Debug)]
pub(crate) struct OrderStatTree {
    tree: Vec<i64>,
    top: usize,
}

impl OrderStatTree {
    /// All of `1..=len` present.
    pub fn full(len: usize) -> Self {
        let mut tree = vec![0i64; len + 1];
        for i in 1..=len {
            tree[i] += 1;
            let parent = i + (i & i.wrapping_neg());
            if parent <= len {
                let v = tree[i];
                tree[parent] += v;
            }
        }
        OrderStatTree {
            tree,
            top: top_bit(len),
        }
    }

    /// None of `1..=len` present.
    pub fn empty(len: usize) -> Self {
        OrderStatTree {
            tree: vec![0; len + 1],
            top: top_bit(len),
        }
    }

    pub fn len(&self) -> usize {
        self.tree.len() - 1
    }

    pub fn add(&mut self, mut i: usize, delta: i64) {
        let n = self.len();
        while i <= n {
            self.tree[i] += delta;
            i += i & i.wrapping_neg();
        }
    }

    /// Number of present elements in `1..=i`.
    #[cfg(test)]
    pub fn prefix(&self, mut i: usize) -> i64 {
        let mut s = 0;
        while i > 0 {
            s += self.tree[i];
            i &= i - 1;
        }
        s
    }

    /// Smallest `i` with `prefix(i) >= k`, for `k >= 1`; `len + 1` if none.
    pub fn kth(&self, mut k: i64) -> usize {
        let n = self.len();
        let mut pos = 0;
        let mut step = self.top;
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next] < k {
                pos = next;
                k -= self.tree[next];
            }
            step >>= 1;
        }
        pos + 1
    }

    /// Smallest `i` such that `i - prefix(i) >= k`: the k-th absent element.
    /// Returns a value past `len` when fewer than `k` elements are absent.
    pub fn kth_absent(&self, mut k: i64) -> usize {
        let n = self.len();
        let mut pos = 0;
        let mut step = self.top;
        while step > 0 {
            let next = pos + step;
            if next <= n {
                let absent = step as i64 - self.tree[next];
                if absent < k {
                    pos = next;
                    k -= absent;
                }
            }
            step >>= 1;
        }
        pos + k as usize
    }
}

fn top_bit(len: usize) -> usize {
    if len == 0 {
        0
    } else {
        1 << (usize::BITS - 1 - len.leading_zeros())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kth_matches_linear_scan() {
        for len in 1..40 {
            let mut t = OrderStatTree::full(len);
            let mut present: Vec<bool> = vec![true; len + 1];
            present[0] = false;
            for (step, remove) in (1..=len).rev().step_by(3).enumerate() {
                t.add(remove, -1);
                present[remove] = false;
                let live: Vec<usize> = (1..=len).filter(|&i| present[i]).collect();
                let dead: Vec<usize> = (1..=len).filter(|&i| !present[i]).collect();
                for (k, &v) in live.iter().enumerate() {
                    assert_eq!(t.kth(k as i64 + 1), v, "len={len} step={step}");
                    assert_eq!(t.prefix(v), k as i64 + 1);
                }
                let mut e = OrderStatTree::empty(len);
                for &v in &live {
                    e.add(v, 1);
                }
                for (k, &v) in dead.iter().enumerate() {
                    assert_eq!(e.kth_absent(k as i64 + 1), v);
                }
                assert_eq!(e.kth_absent(dead.len() as i64 + 1), len + 1);
                assert_eq!(e.kth_absent(dead.len() as i64 + 3), len + 3);
            }
        }
    }
}
