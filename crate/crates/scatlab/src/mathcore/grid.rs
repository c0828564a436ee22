use crate::error::{Error, Result};
use crate::mathcore::legendre::gauss_legendre;

/// Quadrature nodes and weights on the unit sphere.
///
/// Product rule: Gauss-Legendre in the polar cosine (order+1 points) times a
/// uniform azimuthal grid (2*(order+1) points). Integrates all spherical
/// harmonics of degree <= order exactly, and is closed under the antipodal
/// map by construction (the polar nodes are symmetric and the azimuth count
/// is even).
#[derive(Clone, Debug)]
pub struct SphereGrid {
    pub order: usize,
    pub nodes: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
    n_polar: usize,
    n_azimuth: usize,
}

impl SphereGrid {
    pub fn build(order: usize) -> Result<Self> {
        if order < 1 {
            return Err(Error::InvalidArgument(format!(
                "sphere grid order must be >= 1, got {order}"
            )));
        }
        let n_polar = order + 1;
        let n_azimuth = 2 * n_polar;
        let (ct, wp) = gauss_legendre(n_polar);
        let mut nodes = Vec::with_capacity(n_polar * n_azimuth);
        let mut weights = Vec::with_capacity(n_polar * n_azimuth);
        let waz = 2.0 * std::f64::consts::PI / n_azimuth as f64;
        for p in 0..n_polar {
            let cos_t = ct[p];
            let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
            for q in 0..n_azimuth {
                let phi = 2.0 * std::f64::consts::PI * q as f64 / n_azimuth as f64;
                nodes.push([sin_t * phi.cos(), sin_t * phi.sin(), cos_t]);
                weights.push(wp[p] * waz);
            }
        }
        Ok(Self { order, nodes, weights, n_polar, n_azimuth })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Index of the node antipodal to node `i`; exact by grid construction.
    pub fn antipode(&self, i: usize) -> usize {
        let p = i / self.n_azimuth;
        let q = i % self.n_azimuth;
        (self.n_polar - 1 - p) * self.n_azimuth + (q + self.n_azimuth / 2) % self.n_azimuth
    }

    /// Quadrature of a function sampled at the nodes.
    pub fn integrate<F: Fn(&[f64; 3]) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(n, w)| w * f(n)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mathcore::harmonics::{sh_basis, sh_index, sh_len};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn rejects_order_zero() {
        assert!(SphereGrid::build(0).is_err());
    }

    #[test]
    fn weights_sum_to_sphere_area() {
        for order in [1usize, 4, 8, 17] {
            let g = SphereGrid::build(order).unwrap();
            let total: f64 = g.weights.iter().sum();
            assert_abs_diff_eq!(total, 4.0 * PI, epsilon = 1e-12);
            assert!(g.weights.iter().all(|&w| w > 0.0));
            for n in &g.nodes {
                let r = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
                assert_abs_diff_eq!(r, 1.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn integrates_harmonics_exactly() {
        for order in [3usize, 8] {
            let g = SphereGrid::build(order).unwrap();
            let mut sums = vec![0.0; sh_len(order)];
            for (n, w) in g.nodes.iter().zip(&g.weights) {
                let basis = sh_basis(order, *n);
                for (s, b) in sums.iter_mut().zip(&basis) {
                    *s += w * b;
                }
            }
            for l in 1..=order {
                for m in -(l as i64)..=(l as i64) {
                    assert!(
                        sums[sh_index(l, m)].abs() <= 1e-10,
                        "order={order} l={l} m={m}: {}",
                        sums[sh_index(l, m)]
                    );
                }
            }
        }
    }

    #[test]
    fn cos_squared_moment() {
        let g = SphereGrid::build(12).unwrap();
        let v = g.integrate(|n| n[2] * n[2]);
        // analytic: 2 pi * int_{-1}^{1} t^2 dt = 4 pi / 3
        assert_abs_diff_eq!(v, 4.0 * PI / 3.0, epsilon = 1e-10);
    }

    #[test]
    fn grid_convergence_on_smooth_integrand() {
        // exact: 2 pi (e - 1/e)
        let exact = 2.0 * PI * (1.0f64.exp() - (-1.0f64).exp());
        let mut prev = f64::INFINITY;
        for order in [2usize, 4, 8, 16] {
            let g = SphereGrid::build(order).unwrap();
            let v = g.integrate(|n| n[2].exp());
            let err = (v - exact).abs();
            assert!(err <= prev + 1e-14, "order {order}: err {err} prev {prev}");
            prev = err;
            if order == 16 {
                assert!(err < 1e-10);
            }
        }
    }

    #[test]
    fn antipode_map_is_exact() {
        let g = SphereGrid::build(9).unwrap();
        for i in 0..g.len() {
            let j = g.antipode(i);
            for k in 0..3 {
                assert_abs_diff_eq!(g.nodes[i][k], -g.nodes[j][k], epsilon = 1e-14);
            }
            assert_eq!(g.antipode(j), i);
        }
    }
}
