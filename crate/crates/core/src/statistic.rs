//! Integer-valued block statistics.
//!
//! A statistic that is additive over self-mapped blocks (or anti-additive over
//! symmetric pair blocks) can be fed to the regenerative estimators in
//! [`crate::constants`]. Cycle counts are the shipped instance.

/// A vector-valued integer statistic of a permutation given in one-line notation.
pub trait BlockStatistic: Sync {
    /// Component names, one per output coordinate.
    fn names(&self) -> Vec<String>;

    fn dim(&self) -> usize {
        self.names().len()
    }

    /// Writes the statistic of `image` (a permutation of `1..=image.len()`) into `out`.
    fn evaluate(&self, image: &[usize], out: &mut [i64]);
}

/// Cycle counts `C_{s}, C_{2s}, ..., C_{m s}` with `s` the stride (1, or 2 for
/// even cycles only), followed by the number of longer cycles of that stride,
/// the number of points on those longer cycles, and the total cycle count `C`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CycleProfile {
    pub i_max: usize,
    pub stride: usize,
}

impl CycleProfile {
    /// `C_1..C_imax`.
    pub fn all(i_max: usize) -> Self {
        CycleProfile { i_max, stride: 1 }
    }

    /// `C_2, C_4, ..., C_{2 imax}`.
    pub fn even(i_max: usize) -> Self {
        CycleProfile { i_max, stride: 2 }
    }

    pub fn tail_cycles_index(&self) -> usize {
        self.i_max
    }

    pub fn tail_points_index(&self) -> usize {
        self.i_max + 1
    }

    pub fn total_index(&self) -> usize {
        self.i_max + 2
    }
}

impl BlockStatistic for CycleProfile {
    fn names(&self) -> Vec<String> {
        let mut v: Vec<String> = (1..=self.i_max)
            .map(|i| format!("C{}", i * self.stride))
            .collect();
        v.push(format!("C>{}", self.i_max * self.stride));
        v.push(format!("points>{}", self.i_max * self.stride));
        v.push("C".into());
        v
    }

    fn dim(&self) -> usize {
        self.i_max + 3
    }

    fn evaluate(&self, image: &[usize], out: &mut [i64]) {
        out.iter_mut().for_each(|x| *x = 0);
        let mut seen = vec![false; image.len()];
        let top = self.i_max * self.stride;
        for start in 0..image.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = image[i] - 1;
                len += 1;
            }
            out[self.i_max + 2] += 1;
            if len % self.stride != 0 {
                continue;
            }
            if len <= top {
                out[len / self.stride - 1] += 1;
            } else {
                out[self.i_max] += 1;
                out[self.i_max + 1] += len as i64;
            }
        }
    }
}
