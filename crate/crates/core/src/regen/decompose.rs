//! Block decompositions of a finite permutation.
//!
//! Additive cuts split `w` into consecutive self-mapped intervals. Anti-additive
//! (symmetric) cuts peel off pairs of end intervals that `w` swaps, leaving a
//! self-mapped central block. Cycles never cross a cut of either kind.

use serde::{Deserialize, Serialize};

use crate::perm::{cycle_counts, CycleCounts, Permutation};

/// All `k` in `1..=n` with `w([1, k]) = [1, k]`.
pub fn additive_cuts(w: &Permutation) -> Vec<usize> {
    let mut max = 0;
    let mut cuts = Vec::new();
    for (i, &v) in w.as_slice().iter().enumerate() {
        max = max.max(v);
        if max == i + 1 {
            cuts.push(i + 1);
        }
    }
    cuts
}

/// All `k <= n/2` with `w([1, k]) = [n-k+1, n]` and `w([n-k+1, n]) = [1, k]`.
pub fn antiadditive_cuts(w: &Permutation) -> Vec<usize> {
    let img = w.as_slice();
    let n = img.len();
    let mut min_left = usize::MAX;
    let mut max_right = 0;
    let mut cuts = Vec::new();
    for k in 1..=n / 2 {
        min_left = min_left.min(img[k - 1]);
        max_right = max_right.max(img[n - k]);
        // k distinct values all >= n-k+1 fill [n-k+1, n]; likewise on the right
        if min_left == n - k + 1 && max_right == k {
            cuts.push(k);
        }
    }
    cuts
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockKind {
    /// Irreducible self-mapped interval.
    Excursion,
    /// Two end intervals swapped with each other.
    Pair,
    /// Innermost self-mapped interval of a symmetric decomposition.
    Central,
}

/// An irreducible block of an additive decomposition, relabeled to `1..=T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Excursion {
    pub block: Permutation,
}

impl Excursion {
    pub fn length(&self) -> usize {
        self.block.len()
    }

    /// No `k < T` with `block([1, k]) = [1, k]`.
    pub fn is_irreducible(&self) -> bool {
        additive_cuts(&self.block) == [self.block.len()]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetricBlock {
    pub kind: BlockKind,
    pub block: Permutation,
}

impl SymmetricBlock {
    pub fn length(&self) -> usize {
        self.block.len()
    }

    /// Pair blocks swap the halves and carry only even cycles; central blocks
    /// admit no symmetric cut.
    pub fn satisfies_invariants(&self) -> bool {
        let s = self.block.len();
        match self.kind {
            BlockKind::Pair => {
                if s == 0 || s % 2 == 1 {
                    return false;
                }
                let half = s / 2;
                let swaps = self
                    .block
                    .as_slice()
                    .iter()
                    .enumerate()
                    .all(|(i, &v)| (i < half) == (v > half));
                swaps && cycle_counts(&self.block).odd_total() == 0
            }
            BlockKind::Central => antiadditive_cuts(&self.block).is_empty(),
            BlockKind::Excursion => false,
        }
    }
}

/// One block of a [`Decomposition`], with the source positions it occupies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub kind: BlockKind,
    pub perm: Permutation,
    /// Set on the block nearest the finite boundary (`w'` or `v'`): it is not
    /// a regeneration block in law and estimators skip it.
    pub trailing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecompositionKind {
    Additive,
    AntiAdditive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub kind: DecompositionKind,
    pub source: Permutation,
    pub cut_points: Vec<usize>,
    /// Additive: left to right. Anti-additive: pair blocks outermost first,
    /// then the central block (possibly empty).
    pub blocks: Vec<Block>,
}

pub(crate) fn relabel_interval(img: &[usize], start: usize, end: usize) -> Permutation {
    // positions start+1..=end map into the same interval
    Permutation::from_vec_unchecked(img[start..end].iter().map(|&v| v - start).collect())
}

pub fn decompose_additive(w: &Permutation) -> Decomposition {
    let img = w.as_slice();
    let cuts = additive_cuts(w);
    let mut blocks = Vec::with_capacity(cuts.len());
    let mut start = 0;
    for &end in &cuts {
        blocks.push(Block {
            kind: BlockKind::Excursion,
            perm: relabel_interval(img, start, end),
            trailing: end == img.len(),
        });
        start = end;
    }
    Decomposition {
        kind: DecompositionKind::Additive,
        source: w.clone(),
        cut_points: cuts,
        blocks,
    }
}

/// Relabels the union of `[a+1, b]` and `[n-b+1, n-a]` to `1..=2(b-a)`.
pub(crate) fn pair_block(img: &[usize], a: usize, b: usize) -> Permutation {
    let n = img.len();
    let d = b - a;
    let to_block = |x: usize| if x <= b { x - a } else { x - (n - b) + d };
    let mut out = Vec::with_capacity(2 * d);
    for pos in (a + 1..=b).chain(n - b + 1..=n - a) {
        out.push(to_block(img[pos - 1]));
    }
    Permutation::from_vec_unchecked(out)
}

pub fn decompose_antiadditive(w: &Permutation) -> Decomposition {
    let img = w.as_slice();
    let n = img.len();
    let cuts = antiadditive_cuts(w);
    let mut blocks = Vec::with_capacity(cuts.len() + 1);
    let mut prev = 0;
    for (j, &k) in cuts.iter().enumerate() {
        blocks.push(Block {
            kind: BlockKind::Pair,
            perm: pair_block(img, prev, k),
            trailing: j == 0,
        });
        prev = k;
    }
    blocks.push(Block {
        kind: BlockKind::Central,
        perm: relabel_interval(img, prev, n - prev),
        trailing: false,
    });
    Decomposition {
        kind: DecompositionKind::AntiAdditive,
        source: w.clone(),
        cut_points: cuts,
        blocks,
    }
}

impl Decomposition {
    /// Rebuilds the source permutation from `cut_points` and `blocks` alone.
    pub fn reassemble(&self) -> Permutation {
        let n = self.source.len();
        let mut img = vec![0usize; n];
        match self.kind {
            DecompositionKind::Additive => {
                let mut start = 0;
                for (block, &end) in self.blocks.iter().zip(&self.cut_points) {
                    for (i, &v) in block.perm.as_slice().iter().enumerate() {
                        img[start + i] = v + start;
                    }
                    start = end;
                }
            }
            DecompositionKind::AntiAdditive => {
                let mut prev = 0;
                for (block, &k) in self.blocks.iter().zip(&self.cut_points) {
                    let d = k - prev;
                    let from_block = |x: usize| if x <= d { x + prev } else { x - d + n - k };
                    for (i, &v) in block.perm.as_slice().iter().enumerate() {
                        img[from_block(i + 1) - 1] = from_block(v);
                    }
                    prev = k;
                }
                if let Some(central) = self.blocks.last() {
                    for (i, &v) in central.perm.as_slice().iter().enumerate() {
                        img[prev + i] = v + prev;
                    }
                }
            }
        }
        Permutation::new(img).expect("blocks do not tile the source")
    }

    /// Sum of the blocks' cycle counts.
    pub fn block_cycle_counts(&self) -> CycleCounts {
        let mut total = CycleCounts::new();
        for b in &self.blocks {
            total += &cycle_counts(&b.perm);
        }
        total
    }

    pub fn summary(&self, include_perms: bool) -> DecompositionSummary {
        DecompositionSummary {
            kind: self.kind,
            n: self.source.len(),
            cut_points: self.cut_points.clone(),
            blocks: self
                .blocks
                .iter()
                .map(|b| BlockSummary {
                    kind: b.kind,
                    length: b.perm.len(),
                    trailing: b.trailing,
                    cycle_counts: cycle_counts(&b.perm),
                    perm: include_perms.then(|| b.perm.clone()),
                })
                .collect(),
        }
    }
}

/// JSON form of a decomposition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionSummary {
    pub kind: DecompositionKind,
    pub n: usize,
    pub cut_points: Vec<usize>,
    pub blocks: Vec<BlockSummary>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockSummary {
    pub kind: BlockKind,
    pub length: usize,
    pub trailing: bool,
    pub cycle_counts: CycleCounts,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub perm: Option<Permutation>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn additive_cut_examples() {
        assert_eq!(additive_cuts(&Permutation::identity(4)), vec![1, 2, 3, 4]);
        assert_eq!(additive_cuts(&p(&[2, 1, 4, 3])), vec![2, 4]);
        assert_eq!(additive_cuts(&p(&[3, 1, 2])), vec![3]);
        assert!(additive_cuts(&Permutation::empty()).is_empty());
    }

    #[test]
    fn antiadditive_cut_examples() {
        assert_eq!(antiadditive_cuts(&p(&[4, 3, 2, 1])), vec![1, 2]);
        assert!(antiadditive_cuts(&Permutation::identity(4)).is_empty());
        assert_eq!(antiadditive_cuts(&p(&[3, 4, 1, 2])), vec![2]);
        assert_eq!(antiadditive_cuts(&p(&[3, 2, 1])), vec![1]);
    }

    #[test]
    fn additive_decomposition_examples() {
        let d = decompose_additive(&p(&[2, 1, 4, 3]));
        let perms: Vec<_> = d.blocks.iter().map(|b| b.perm.clone()).collect();
        assert_eq!(perms, vec![p(&[2, 1]), p(&[2, 1])]);
        assert_eq!(d.blocks.iter().map(|b| b.trailing).collect::<Vec<_>>(), [false, true]);
        let w = p(&[3, 1, 2]);
        let d = decompose_additive(&w);
        assert_eq!(d.blocks.len(), 1);
        assert_eq!(d.blocks[0].perm, w);
        assert_eq!(d.reassemble(), w);
    }

    #[test]
    fn antiadditive_decomposition_examples() {
        let d = decompose_antiadditive(&p(&[4, 3, 2, 1]));
        assert_eq!(d.blocks.len(), 3);
        assert_eq!(d.blocks[0].perm, p(&[2, 1]));
        assert_eq!(d.blocks[1].perm, p(&[2, 1]));
        assert_eq!(d.blocks[2].kind, BlockKind::Central);
        assert!(d.blocks[2].perm.is_empty());
        assert_eq!(d.reassemble(), p(&[4, 3, 2, 1]));

        let d = decompose_antiadditive(&Permutation::identity(3));
        assert_eq!(d.blocks.len(), 1);
        assert_eq!(d.blocks[0].perm, Permutation::identity(3));

        // two transposition pairs around a fixed central block
        let w = p(&[6, 5, 3, 4, 2, 1]);
        let d = decompose_antiadditive(&w);
        assert_eq!(d.cut_points, vec![1, 2]);
        assert_eq!(d.reassemble(), w);
        assert_eq!(d.block_cycle_counts(), cycle_counts(&w));
        let w = p(&[6, 5, 3, 4, 1, 2]);
        let d = decompose_antiadditive(&w);
        assert_eq!(d.cut_points, vec![2]);
        assert_eq!(d.blocks[0].perm, p(&[4, 3, 1, 2]));
        for b in &d.blocks {
            let sb = SymmetricBlock {
                kind: b.kind,
                block: b.perm.clone(),
            };
            assert!(sb.satisfies_invariants(), "{:?}", b);
        }
    }

    #[test]
    fn empty_and_singleton() {
        for w in [Permutation::empty(), Permutation::identity(1)] {
            assert_eq!(decompose_additive(&w).reassemble(), w);
            assert_eq!(decompose_antiadditive(&w).reassemble(), w);
        }
    }

    #[test]
    fn summary_serializes() {
        let d = decompose_antiadditive(&p(&[4, 3, 2, 1]));
        let json = serde_json::to_value(d.summary(false)).unwrap();
        assert_eq!(json["cut_points"], serde_json::json!([1, 2]));
        assert_eq!(json["blocks"][0]["kind"], "pair");
        assert_eq!(json["blocks"][0]["cycle_counts"]["counts"]["2"], 1);
        assert!(json["blocks"][0].get("perm").is_none());
        let with = serde_json::to_value(d.summary(true)).unwrap();
        assert_eq!(with["blocks"][0]["perm"], serde_json::json!([2, 1]));
    }
}
