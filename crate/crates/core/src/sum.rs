//! Compensated summation and dot products.

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    values.into_iter().collect::<NeumaierSum>().value()
}

/// Dot product accurate to roughly twice working precision.
///
/// Each product is split exactly into `p + e` with a fused multiply-add and
/// both parts are accumulated with compensated summation. The result is
/// symmetric in its arguments.
pub fn compensated_dot(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    let mut acc = NeumaierSum::new();
    let mut err = NeumaierSum::new();
    for (&xi, &yi) in x.iter().zip(y) {
        let p = xi * yi;
        err.add(xi.mul_add(yi, -p));
        acc.add(p);
    }
    acc.add(err.value());
    acc.value()
}
