/// Upper (`↑` or `τ = +`) or lower (`↓` or `τ = −`) spin component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinBlock {
    Up,
    Down,
}

impl SpinBlock {
    pub fn sign(self) -> f64 {
        match self {
            SpinBlock::Up => 1.0,
            SpinBlock::Down => -1.0,
        }
    }

    pub fn from_sign(sigma: i32) -> Self {
        if sigma >= 0 {
            SpinBlock::Up
        } else {
            SpinBlock::Down
        }
    }

    fn offset(self) -> usize {
        match self {
            SpinBlock::Up => 0,
            SpinBlock::Down => 1,
        }
    }
}

/// Fock levels `0..=n_max` for each of the two spin components.
///
/// Flat index is `block · (n_max + 1) + n` with the upper block first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TruncatedFockBasis {
    n_max: usize,
}

impl TruncatedFockBasis {
    pub fn new(n_max: usize) -> Self {
        TruncatedFockBasis { n_max }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Number of Fock levels per spin block.
    pub fn levels(&self) -> usize {
        self.n_max + 1
    }

    pub fn dim(&self) -> usize {
        2 * (self.n_max + 1)
    }

    pub fn index(&self, block: SpinBlock, n: usize) -> usize {
        debug_assert!(n <= self.n_max);
        block.offset() * self.levels() + n
    }

    pub fn decompose(&self, i: usize) -> (SpinBlock, usize) {
        if i < self.levels() {
            (SpinBlock::Up, i)
        } else {
            (SpinBlock::Down, i - self.levels())
        }
    }
}

/// `ceil((2g̃ + 6)²) + 20`, enough to hold both displaced ladders' low states.
pub fn default_n_max(g_tilde: f64) -> usize {
    ((2.0 * g_tilde + 6.0).powi(2)).ceil() as usize + 20
}
