/// Tally of comparison operations spent by an estimator.
///
/// Counted: every adjacency-matrix membership test and every explicit branch
/// comparison in estimator inner loops (set membership, size checks, pattern
/// matches, Metropolis acceptance tests). Loop index bookkeeping is not counted.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct OpCounter {
    comparisons: u64,
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline(always)]
    pub fn tick(&mut self) {
        self.comparisons += 1;
    }

    #[inline(always)]
    pub fn add(&mut self, n: u64) {
        self.comparisons += n;
    }

    pub fn comparisons(&self) -> u64 {
        self.comparisons
    }
}
