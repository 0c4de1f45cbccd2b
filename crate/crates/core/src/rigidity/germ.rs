//! Conjugating a germ at `a` by `g(x) = a + e^{−1/(x−a)²}`.
//!
//! For `h > 0`, `g(a+h) − a = e^{−1/h²}` underflows long before `h = 10⁻²`,
//! so the computation runs on `L = ln(g(a+h) − a) = −1/h²`. If
//! `f(a+y) − a = y·e^{δ(y)}`, the conjugate satisfies
//! `F(a+h) − a = 1/√(1/h² − δ)`, and its difference quotient at scale `h` is
//! `1/√(1 − δh²)`.

use super::RigidityError;

/// A map with a fixed point at `a`, seen through its log-multiplier
/// `δ(y) = ln((f(a+y) − a)/y)` at offsets `y = e^{L}`.
pub trait GermMap {
    fn eval(&self, x: f64) -> f64;

    /// `δ` at `y = e^{log_y}`. When `y` underflows, the germ is replaced by
    /// its linear part, estimated from a difference quotient at `a`.
    fn log_multiplier(&self, a: f64, log_y: f64) -> f64 {
        let y = log_y.exp();
        if y > f64::MIN_POSITIVE * 1e10 {
            ((self.eval(a + y) - a) / y).ln()
        } else {
            let eta = 1e-8 * a.abs().max(1.0);
            ((self.eval(a + eta) - a) / eta).ln()
        }
    }
}

impl<F: Fn(f64) -> f64> GermMap for F {
    fn eval(&self, x: f64) -> f64 {
        self(x)
    }
}

/// `x ↦ a + slope·(x − a)`, with the log-multiplier known in closed form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearGerm {
    pub a: f64,
    pub slope: f64,
}

impl GermMap for LinearGerm {
    fn eval(&self, x: f64) -> f64 {
        self.a + self.slope * (x - self.a)
    }

    fn log_multiplier(&self, _a: f64, _log_y: f64) -> f64 {
        self.slope.ln()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GermReport {
    pub scales: Vec<f64>,
    /// `(F(a+h) − a)/h` at each scale.
    pub quotients: Vec<f64>,
    /// `|quotient − 1|` never increases as the scale shrinks.
    pub monotone: bool,
    pub final_error: f64,
}

pub const PROBE_SCALES: [f64; 4] = [1e-2, 1e-3, 1e-4, 1e-5];

/// Difference quotients at `a` of `g⁻¹ ∘ f ∘ g` at scales `10⁻²…10⁻⁵`.
pub fn flat_germ_probe(f: &dyn GermMap, a: f64) -> Result<GermReport, RigidityError> {
    let fa = f.eval(a);
    if (fa - a).abs() > 1e-12 * a.abs().max(1.0) {
        return Err(RigidityError::NotFixed(fa));
    }
    let quotients: Vec<f64> = PROBE_SCALES
        .iter()
        .map(|&h| {
            let delta = f.log_multiplier(a, -1.0 / (h * h));
            1.0 / (1.0 - delta * h * h).sqrt()
        })
        .collect();
    let errors: Vec<f64> = quotients.iter().map(|q| (q - 1.0).abs()).collect();
    Ok(GermReport {
        scales: PROBE_SCALES.to_vec(),
        monotone: errors.windows(2).all(|w| w[1] <= w[0]),
        final_error: *errors.last().expect("four scales"),
        quotients,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_exactly_tangent() {
        let r = flat_germ_probe(&LinearGerm { a: 0.3, slope: 1.0 }, 0.3).unwrap();
        assert!(r.quotients.iter().all(|&q| q == 1.0));
        let r = flat_germ_probe(&|x: f64| x, 0.0).unwrap();
        assert!(r.quotients.iter().all(|&q| q == 1.0));
    }

    #[test]
    fn doubling_becomes_tangent() {
        let r = flat_germ_probe(&LinearGerm { a: 0.0, slope: 2.0 }, 0.0).unwrap();
        assert!(r.monotone);
        assert!(r.final_error < 0.05);
        // closed form 1/√(1 − h² ln 2)
        for (h, q) in r.scales.iter().zip(&r.quotients) {
            assert!((q - 1.0 / (1.0 - h * h * 2f64.ln()).sqrt()).abs() < 1e-15);
        }
        assert!(r.quotients.windows(2).all(|w| w[1] <= w[0]));
        // the generic path agrees through the linear part
        let g = flat_germ_probe(&|x: f64| 0.5 + 2.0 * (x - 0.5), 0.5).unwrap();
        for (p, q) in g.quotients.iter().zip(&r.quotients) {
            assert!((p - q).abs() < 1e-9);
        }
    }

    #[test]
    fn moved_base_point_is_rejected() {
        assert!(matches!(flat_germ_probe(&|x: f64| x + 0.1, 0.0), Err(RigidityError::NotFixed(_))));
    }
}
