//! Piecewise cubic Hermite interpolation on a sorted node grid.
//!
//! The tables built from cumulative quadrature know exact derivatives at
//! every node (the integrand itself), so cubic Hermite segments reproduce
//! the tabulated antiderivative to O(Δx⁴) without any fitting step.

/// Interpolant through `(xs[i], ys[i])` with prescribed slopes `ds[i]`.
#[derive(Debug, Clone)]
pub struct CubicHermite {
    xs: Vec<f64>,
    ys: Vec<f64>,
    ds: Vec<f64>,
}

impl CubicHermite {
    /// `xs` must be strictly increasing; all three slices equal length ≥ 2.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, ds: Vec<f64>) -> CubicHermite {
        assert!(xs.len() >= 2, "need at least two nodes");
        assert_eq!(xs.len(), ys.len());
        assert_eq!(xs.len(), ds.len());
        assert!(
            xs.windows(2).all(|w| w[1] > w[0]),
            "nodes must be strictly increasing"
        );
        CubicHermite { xs, ys, ds }
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }

    /// Index of the segment containing `x` (clamped to the boundary
    /// segments for arguments just outside the grid).
    fn segment(&self, x: f64) -> usize {
        let n = self.xs.len();
        let i = self.xs.partition_point(|&t| t <= x);
        i.clamp(1, n - 1) - 1
    }

    /// Interpolated value at `x`. Arguments outside the grid are evaluated
    /// on the nearest boundary segment (callers stay inside by contract;
    /// this only absorbs last-ulp excursions).
    pub fn eval(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let h = x1 - x0;
        let t = (x - x0) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[i] + h10 * h * self.ds[i] + h01 * self.ys[i + 1] + h11 * h * self.ds[i + 1]
    }

    /// Derivative of the interpolant at `x`.
    pub fn deriv(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let h = x1 - x0;
        let t = (x - x0) / h;
        let t2 = t * t;
        let d00 = (6.0 * t2 - 6.0 * t) / h;
        let d10 = 3.0 * t2 - 4.0 * t + 1.0;
        let d01 = (-6.0 * t2 + 6.0 * t) / h;
        let d11 = 3.0 * t2 - 2.0 * t;
        d00 * self.ys[i] + d10 * self.ds[i] + d01 * self.ys[i + 1] + d11 * self.ds[i + 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_cubics_exactly() {
        let f = |x: f64| x * x * x - 2.0 * x + 1.0;
        let df = |x: f64| 3.0 * x * x - 2.0;
        let xs: Vec<f64> = (0..=4).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        let ds: Vec<f64> = xs.iter().map(|&x| df(x)).collect();
        let h = CubicHermite::new(xs, ys, ds);
        for k in 0..=40 {
            let x = k as f64 * 0.1;
            assert!((h.eval(x) - f(x)).abs() < 1e-12);
            assert!((h.deriv(x) - df(x)).abs() < 1e-11);
        }
    }

    #[test]
    fn fourth_order_for_smooth_functions() {
        let xs: Vec<f64> = (0..=64).map(|i| i as f64 / 64.0 * 3.0).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| x.sin()).collect();
        let ds: Vec<f64> = xs.iter().map(|&x| x.cos()).collect();
        let h = CubicHermite::new(xs, ys, ds);
        let mut worst = 0.0f64;
        for k in 0..=300 {
            let x = k as f64 * 0.01;
            worst = worst.max((h.eval(x) - x.sin()).abs());
        }
        // Δx ≈ 0.047 ⇒ error ≈ Δx⁴/384 ≈ 1.3e-8
        assert!(worst < 5e-8, "worst Hermite error {worst:e}");
    }
}
