/// Neumaier compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
    abs: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs += x.abs();
    }

    pub fn scale(&mut self, f: f64) {
        self.sum *= f;
        self.comp *= f;
        self.abs *= f;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// Sum of magnitudes, the natural scale for rounding error.
    pub fn abs_sum(&self) -> f64 {
        self.abs
    }
}
