use crate::error::{Error, Result};

/// Legendre polynomial P_l(t) by the three-term recurrence.
pub fn legendre_p(l: usize, t: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("legendre_p: t={t} outside [-1,1]")));
    }
    Ok(legendre_p_unchecked(l, t))
}

pub(crate) fn legendre_p_unchecked(l: usize, t: f64) -> f64 {
    let mut p0 = 1.0;
    if l == 0 {
        return p0;
    }
    let mut p1 = t;
    for k in 1..l {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * t * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Partial sum of Legendre polynomials, sum_{l=0}^{lmax} P_l(t).
///
/// These are the product-integration factors for kernels with a
/// 1/|x-y| singularity on the unit sphere.
pub fn legendre_partial_sum(lmax: usize, t: f64) -> f64 {
    let mut sum = 1.0;
    if lmax == 0 {
        return sum;
    }
    let mut p0 = 1.0;
    let mut p1 = t;
    sum += p1;
    for k in 1..lmax {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * t * p1 - kf * p0) / (kf + 1.0);
        sum += p2;
        p0 = p1;
        p1 = p2;
    }
    sum
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess for the i-th root (descending order).
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        let (_, dp) = legendre_with_derivative(n, 0.0);
        weights[n / 2] = 2.0 / (dp * dp);
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn low_order_values() {
        assert_abs_diff_eq!(legendre_p(0, 0.3).unwrap(), 1.0);
        assert_abs_diff_eq!(legendre_p(2, 1.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            legendre_p(2, 0.4).unwrap(),
            0.5 * (3.0 * 0.4f64.powi(2) - 1.0),
            epsilon = 1e-15
        );
    }

    #[test]
    fn p7_against_expanded_coefficients() {
        // P_7(t) = (429 t^7 - 693 t^5 + 315 t^3 - 35 t)/16
        let t: f64 = -0.5;
        let expect =
            (429.0 * t.powi(7) - 693.0 * t.powi(5) + 315.0 * t.powi(3) - 35.0 * t) / 16.0;
        assert_abs_diff_eq!(legendre_p(7, t).unwrap(), expect, epsilon = 1e-13);
    }

    #[test]
    fn domain_error() {
        assert!(legendre_p(3, 1.2).is_err());
    }

    #[test]
    fn bounded_by_one() {
        for l in 0..30 {
            for i in 0..100 {
                let t = -1.0 + 2.0 * i as f64 / 99.0;
                assert!(legendre_p(l, t).unwrap().abs() <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn partial_sum_matches_direct() {
        let t = 0.37;
        let direct: f64 = (0..=12).map(|l| legendre_p(l, t).unwrap()).sum();
        assert_abs_diff_eq!(legendre_partial_sum(12, t), direct, epsilon = 1e-13);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(8);
        // exact through degree 15
        for deg in 0..=15usize {
            let q: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(deg as i32)).sum();
            let exact = if deg % 2 == 0 { 2.0 / (deg as f64 + 1.0) } else { 0.0 };
            assert_abs_diff_eq!(q, exact, epsilon = 1e-13);
        }
    }
}
