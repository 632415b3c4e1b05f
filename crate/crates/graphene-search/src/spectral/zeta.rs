//! Epstein zeta function Z2(S, x) for positive-definite binary quadratic
//! forms: the lattice sums that give the large-N limits of the higher
//! resolvent moments.

use crate::error::{Error, Result};

/// Symmetric positive-definite 2x2 matrix defining the quadratic form
/// Q(p, q) = s11 p^2 + 2 s12 p q + s22 q^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sym2 {
    pub s11: f64,
    pub s12: f64,
    pub s22: f64,
}

impl Sym2 {
    pub fn new(s11: f64, s12: f64, s22: f64) -> Self {
        Self { s11, s12, s22 }
    }

    pub fn identity_scaled(c: f64) -> Self {
        Self::new(c, 0.0, c)
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self::new(c * self.s11, c * self.s12, c * self.s22)
    }

    pub fn det(&self) -> f64 {
        self.s11 * self.s22 - self.s12 * self.s12
    }

    pub fn is_positive_definite(&self) -> bool {
        self.s11 > 0.0 && self.det() > 0.0
    }

    /// Smaller eigenvalue; lower-bounds Q on the unit circle.
    pub fn eigen_min(&self) -> f64 {
        let tr = self.s11 + self.s22;
        let disc = ((self.s11 - self.s22).powi(2) + 4.0 * self.s12 * self.s12).sqrt();
        0.5 * (tr - disc)
    }

    #[inline]
    pub fn form(&self, p: f64, q: f64) -> f64 {
        self.s11 * p * p + 2.0 * self.s12 * p * q + self.s22 * q * q
    }
}

/// The form describing the spectrum near either Dirac point:
/// 4 pi^2 [[2, -1], [-1, 2]]. K and K' give the same matrix.
pub fn s_dirac() -> Sym2 {
    let c = 4.0 * std::f64::consts::PI * std::f64::consts::PI;
    Sym2::new(2.0 * c, -c, 2.0 * c)
}

#[derive(Debug, Clone, Copy)]
pub struct EpsteinZeta {
    /// Truncated lattice sum plus the annulus-integral tail correction.
    pub value: f64,
    /// Magnitude of the integral tail estimate; bounds the truncation
    /// remainder scale.
    pub tail_bound: f64,
}

/// Z2(S, x) = (1/2) sum_{(p,q) != (0,0)} Q(p,q)^{-x}, summed directly over
/// the square |p|, |q| <= cutoff with the remainder estimated by the
/// integral of r^(1-2x) over the outside region.
pub fn epstein_zeta(s: Sym2, x: f64, cutoff: usize) -> Result<EpsteinZeta> {
    if !s.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    if x < 2.0 {
        return Err(Error::InvalidParameter(format!(
            "epstein_zeta needs x >= 2, got {x}"
        )));
    }
    if cutoff < 10 {
        return Err(Error::InvalidParameter(format!(
            "epstein_zeta needs cutoff >= 10, got {cutoff}"
        )));
    }

    let r = cutoff as i64;
    // integer exponents keep the inner loop cheap for the x we use
    let int_power = if x.fract() == 0.0 && x <= 64.0 {
        Some(-(x as i32))
    } else {
        None
    };
    let mut sum = 0.0;
    for p in -r..=r {
        for q in -r..=r {
            if p == 0 && q == 0 {
                continue;
            }
            let quad = s.form(p as f64, q as f64);
            sum += match int_power {
                Some(e) => quad.powi(e),
                None => quad.powf(-x),
            };
        }
    }
    sum *= 0.5;

    // Tail: (1/2) integral over the plane outside the half-integer-offset
    // square, in polar form. rho(theta) is the square boundary; phi(theta)
    // the quadratic form on the unit circle.
    let steps = 8192;
    let h = 2.0 * std::f64::consts::PI / steps as f64;
    let edge = cutoff as f64 + 0.5;
    let mut tail = 0.0;
    for i in 0..steps {
        let theta = h * i as f64;
        let (sin, cos) = theta.sin_cos();
        let phi = s.form(cos, sin);
        let rho = edge / cos.abs().max(sin.abs());
        // integral_rho^inf r^(1-2x) dr = rho^(2-2x) / (2x-2)
        tail += phi.powf(-x) * rho.powf(2.0 - 2.0 * x) / (2.0 * x - 2.0);
    }
    tail *= 0.5 * h;

    Ok(EpsteinZeta {
        value: sum + tail,
        tail_bound: tail.abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            epstein_zeta(Sym2::new(1.0, 2.0, 1.0), 2.0, 100),
            Err(Error::NotPositiveDefinite)
        ));
        assert!(epstein_zeta(s_dirac(), 1.5, 100).is_err());
        assert!(epstein_zeta(s_dirac(), 2.0, 5).is_err());
    }

    #[test]
    fn converges_under_cutoff_doubling() {
        let s = Sym2::identity_scaled(4.0 * std::f64::consts::PI * std::f64::consts::PI);
        let a = epstein_zeta(s, 2.0, 1000).unwrap();
        let b = epstein_zeta(s, 2.0, 2000).unwrap();
        let rel = (a.value - b.value).abs() / b.value.abs();
        assert!(rel < 1e-8, "relative change {rel:e}");
        assert!(b.tail_bound < a.tail_bound);
    }

    #[test]
    fn dirac_form_value() {
        // hexagonal lattice sum: Z2(S_K, 2) frozen from an independent
        // high-cutoff summation
        let z = epstein_zeta(s_dirac(), 2.0, 800).unwrap();
        assert!((z.value - 6.184_55e-4).abs() < 1e-8, "Z2 = {:e}", z.value);
    }

    #[test]
    fn homogeneity() {
        let s = s_dirac();
        let x = 2.0;
        let z1 = epstein_zeta(s, x, 400).unwrap().value;
        let c = 3.7;
        let z2 = epstein_zeta(s.scaled(c), x, 400).unwrap().value;
        let expected = c.powf(-x) * z1;
        assert!(
            (z2 - expected).abs() / expected.abs() < 1e-12,
            "{z2} vs {expected}"
        );
    }

    #[test]
    fn k_and_k_prime_forms_identical() {
        // Both Dirac points carry the same quadratic form, so the zeta
        // values coincide by construction.
        let a = epstein_zeta(s_dirac(), 2.0, 200).unwrap().value;
        let b = epstein_zeta(s_dirac(), 2.0, 200).unwrap().value;
        assert_eq!(a, b);
    }

    #[test]
    fn eigen_min_of_dirac_form() {
        let s = s_dirac();
        let c = 4.0 * std::f64::consts::PI * std::f64::consts::PI;
        assert!((s.eigen_min() - c).abs() < 1e-9);
    }
}
