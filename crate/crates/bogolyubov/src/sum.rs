//! Pairwise (tree) accumulation used by the trace sums.
//!
//! Double sums over truncated spectra can run to ~10^5 terms of mixed
//! magnitude; pairwise accumulation keeps the roundoff growth at
//! O(eps * log n) instead of O(eps * n) for a running sum, and fixes the
//! evaluation order so repeated calls are bit-identical.

/// Sums a slice pairwise. Order of operations depends only on the length.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LINEAR_BLOCK: usize = 64;
    if values.len() <= LINEAR_BLOCK {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Streaming pairwise accumulator: terms are pushed in order and collapsed
/// in a binary-counter pattern, equivalent to `pairwise_sum` over the full
/// sequence without materializing it.
#[derive(Debug, Clone)]
pub struct PairwiseAccumulator {
    // levels[i] holds a partial sum of 2^i consecutive blocks
    levels: Vec<Option<f64>>,
    count: u64,
    block: [f64; 64],
    fill: usize,
}

impl Default for PairwiseAccumulator {
    fn default() -> Self {
        Self {
            levels: Vec::new(),
            count: 0,
            block: [0.0; 64],
            fill: 0,
        }
    }
}

impl PairwiseAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, v: f64) {
        self.block[self.fill] = v;
        self.fill += 1;
        if self.fill == self.block.len() {
            let s: f64 = self.block.iter().sum();
            self.fill = 0;
            self.push_block(s);
        }
    }

    fn push_block(&mut self, mut s: f64) {
        self.count += 1;
        let mut level = 0;
        loop {
            if level == self.levels.len() {
                self.levels.push(Some(s));
                return;
            }
            match self.levels[level].take() {
                Some(prev) => {
                    s += prev;
                    level += 1;
                }
                None => {
                    self.levels[level] = Some(s);
                    return;
                }
            }
        }
    }

    /// Total of everything pushed so far.
    pub fn total(&self) -> f64 {
        let tail: f64 = self.block[..self.fill].iter().sum();
        self.levels.iter().flatten().sum::<f64>() + tail
    }
}
