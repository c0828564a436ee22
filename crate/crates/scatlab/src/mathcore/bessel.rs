use crate::error::{Error, Result};
use num_complex::Complex64;

/// Which spherical Bessel function to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BesselKind {
    /// j_l(x), regular at the origin.
    Regular,
    /// y_l(x), irregular.
    Irregular,
    /// h_l^{(1)}(x) = j_l(x) + i y_l(x), outgoing.
    Outgoing,
}

/// Spherical Bessel function of order `l` at `x > 0`.
pub fn sph_bessel(kind: BesselKind, l: usize, x: f64) -> Result<Complex64> {
    if x <= 0.0 || !x.is_finite() {
        return Err(Error::Domain(format!("sph_bessel: x={x} must be positive")));
    }
    Ok(match kind {
        BesselKind::Regular => Complex64::new(sph_j_single(l, x), 0.0),
        BesselKind::Irregular => Complex64::new(sph_y_single(l, x), 0.0),
        BesselKind::Outgoing => Complex64::new(sph_j_single(l, x), sph_y_single(l, x)),
    })
}

fn sph_j_single(l: usize, x: f64) -> f64 {
    sph_j_all(l, x)[l]
}

fn sph_y_single(l: usize, x: f64) -> f64 {
    sph_y_all(l, x)[l]
}

/// j_0 .. j_lmax by Miller's downward recurrence, normalized at j_0.
pub fn sph_j_all(lmax: usize, x: f64) -> Vec<f64> {
    let j0 = x.sin() / x;
    if lmax == 0 {
        return vec![j0];
    }
    // Start far enough above lmax and above the turning point l ~ x.
    let start = lmax.max(x as usize) + 32 + (x.sqrt() as usize);
    let mut fp = 0.0_f64; // f_{start+1}
    let mut fc = 1e-300_f64; // f_{start}
    let mut out = vec![0.0; lmax + 1];
    for l in (0..=start).rev() {
        let fnext = (2.0 * l as f64 + 3.0) / x * fc - fp;
        fp = fc;
        fc = fnext;
        if l <= lmax {
            out[l] = fc;
        }
        // rescale to avoid overflow of the unnormalized recurrence
        if fc.abs() > 1e250 {
            fp /= 1e250;
            fc /= 1e250;
            for v in out.iter_mut() {
                *v /= 1e250;
            }
        }
    }
    let scale = j0 / out[0];
    for v in out.iter_mut() {
        *v *= scale;
    }
    out
}

/// y_0 .. y_lmax by upward recurrence (stable for y).
pub fn sph_y_all(lmax: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(lmax + 1);
    let y0 = -x.cos() / x;
    out.push(y0);
    if lmax == 0 {
        return out;
    }
    let y1 = -x.cos() / (x * x) - x.sin() / x;
    out.push(y1);
    for l in 1..lmax {
        let next = (2.0 * l as f64 + 1.0) / x * out[l] - out[l - 1];
        out.push(next);
    }
    out
}

/// Derivatives j_l'(x) for l = 0..=lmax given the values.
pub fn sph_deriv(values: &[f64], x: f64) -> Vec<f64> {
    assert!(values.len() >= 2, "sph_deriv needs values up to at least l=1");
    let lmax = values.len() - 1;
    let mut out = vec![0.0; lmax + 1];
    out[0] = -values[1];
    for l in 1..=lmax {
        out[l] = values[l - 1] - (l as f64 + 1.0) / x * values[l];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    /// Independent oracle: ascending Taylor series for j_l, accurate for
    /// moderate x where the series converges quickly.
    fn j_series(l: usize, x: f64) -> f64 {
        let mut double_fact = 1.0; // (2l+1)!!
        for k in 0..=l {
            double_fact *= 2.0 * k as f64 + 1.0;
        }
        let mut term = x.powi(l as i32) / double_fact;
        let mut sum = term;
        for k in 1..60 {
            let kf = k as f64;
            term *= -(x * x / 2.0) / (kf * (2.0 * (l as f64 + kf) + 1.0));
            sum += term;
        }
        sum
    }

    #[test]
    fn j0_at_pi_is_zero() {
        let v = sph_bessel(BesselKind::Regular, 0, PI).unwrap();
        assert_abs_diff_eq!(v.re, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn h0_closed_form() {
        // h_0^{(1)}(x) = -i e^{ix}/x; at x = 1 this is sin 1 - i cos 1.
        let v = sph_bessel(BesselKind::Outgoing, 0, 1.0).unwrap();
        assert_abs_diff_eq!(v.re, 1.0f64.sin(), epsilon = 1e-14);
        assert_abs_diff_eq!(v.im, -(1.0f64.cos()), epsilon = 1e-14);
    }

    #[test]
    fn j_against_series_oracle() {
        for &(l, x) in &[(5usize, 2.5f64), (2, 0.7), (10, 6.0), (20, 11.0)] {
            let v = sph_bessel(BesselKind::Regular, l, x).unwrap().re;
            let s = j_series(l, x);
            assert_abs_diff_eq!(v, s, epsilon = 1e-12 * s.abs().max(1e-10));
        }
    }

    #[test]
    fn domain_errors() {
        assert!(sph_bessel(BesselKind::Regular, 3, 0.0).is_err());
        assert!(sph_bessel(BesselKind::Regular, 3, -1.0).is_err());
    }

    #[test]
    fn wronskian() {
        // j_l y_l' - j_l' y_l = 1/x^2
        for &l in &[0usize, 1, 3, 10, 25, 40] {
            for &x in &[0.1f64, 0.9, 2.0, 7.3, 20.0, 50.0] {
                let lmax = l + 1;
                let j = sph_j_all(lmax, x);
                let y = sph_y_all(lmax, x);
                let jp = sph_deriv(&j, x);
                let yp = sph_deriv(&y, x);
                let w = j[l] * yp[l] - jp[l] * y[l];
                let exact = 1.0 / (x * x);
                assert!(
                    ((w - exact) / exact).abs() < 1e-10,
                    "l={l} x={x} w={w} exact={exact}"
                );
            }
        }
    }

    #[test]
    fn high_order_regime() {
        // relative sanity at the edge of the supported range
        let j = sph_j_all(80, 100.0);
        let y = sph_y_all(80, 100.0);
        let jp = sph_deriv(&j, 100.0);
        let yp = sph_deriv(&y, 100.0);
        let w = j[80] * yp[80] - jp[80] * y[80];
        assert_abs_diff_eq!(w * 1e4, 1.0, epsilon = 1e-9);
    }
}
