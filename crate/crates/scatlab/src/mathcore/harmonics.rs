use crate::error::{Error, Result};

/// Flat index of (l, m) in a packed coefficient vector, m in -l..=l.
pub fn sh_index(l: usize, m: i64) -> usize {
    (l * l) as usize + (l as i64 + m) as usize
}

/// Number of coefficients for degrees 0..=lmax.
pub fn sh_len(lmax: usize) -> usize {
    (lmax + 1) * (lmax + 1)
}

/// Real orthonormal spherical harmonic Y_{l,m}(dir).
///
/// Convention: m = 0 zonal, m > 0 with cos(m phi), m < 0 with sin(|m| phi);
/// normalized so that the L2(S^2) inner product of two harmonics is the
/// Kronecker delta. No Condon-Shortley phase.
pub fn real_sph_harm(l: usize, m: i64, dir: [f64; 3]) -> Result<f64> {
    if m.unsigned_abs() as usize > l {
        return Err(Error::InvalidArgument(format!(
            "real_sph_harm: |m|={} exceeds l={l}",
            m.unsigned_abs()
        )));
    }
    let basis = sh_basis(l, dir);
    Ok(basis[sh_index(l, m)])
}

/// All Y_{l,m}(dir) for l <= lmax, packed by `sh_index`.
pub fn sh_basis(lmax: usize, dir: [f64; 3]) -> Vec<f64> {
    let (ct, st, cphi, sphi) = angles(dir);
    let q = normalized_assoc_legendre(lmax, ct, st);
    let (cos_m, sin_m) = azimuth_table(lmax, cphi, sphi);
    let mut out = vec![0.0; sh_len(lmax)];
    let sqrt2 = std::f64::consts::SQRT_2;
    for l in 0..=lmax {
        out[sh_index(l, 0)] = q[tri(l, 0)];
        for m in 1..=l {
            let v = q[tri(l, m)];
            out[sh_index(l, m as i64)] = sqrt2 * v * cos_m[m];
            out[sh_index(l, -(m as i64))] = sqrt2 * v * sin_m[m];
        }
    }
    out
}

/// Y values together with tangential (surface) gradients on the unit sphere,
/// as Cartesian 3-vectors. Directions within ~1e-8 of the poles are nudged
/// off-axis; shapes are evaluated on quadrature grids that exclude the poles.
pub fn sh_basis_with_grad(lmax: usize, dir: [f64; 3]) -> (Vec<f64>, Vec<[f64; 3]>) {
    let (ct, st_raw, cphi, sphi) = angles(dir);
    let st = st_raw.max(1e-8);
    let q = normalized_assoc_legendre(lmax, ct, st);
    let dq = assoc_legendre_theta_deriv(lmax, ct, st, &q);
    let (cos_m, sin_m) = azimuth_table(lmax, cphi, sphi);
    let e_theta = [ct * cphi, ct * sphi, -st];
    let e_phi = [-sphi, cphi, 0.0];
    let sqrt2 = std::f64::consts::SQRT_2;
    let mut vals = vec![0.0; sh_len(lmax)];
    let mut grads = vec![[0.0; 3]; sh_len(lmax)];
    let mut set = |idx: usize, v: f64, dth: f64, dphi_over_st: f64| {
        vals[idx] = v;
        for k in 0..3 {
            grads[idx][k] = dth * e_theta[k] + dphi_over_st * e_phi[k];
        }
    };
    for l in 0..=lmax {
        set(sh_index(l, 0), q[tri(l, 0)], dq[tri(l, 0)], 0.0);
        for m in 1..=l {
            let v = q[tri(l, m)];
            let dv = dq[tri(l, m)];
            let mf = m as f64;
            set(
                sh_index(l, m as i64),
                sqrt2 * v * cos_m[m],
                sqrt2 * dv * cos_m[m],
                -sqrt2 * mf * v * sin_m[m] / st,
            );
            set(
                sh_index(l, -(m as i64)),
                sqrt2 * v * sin_m[m],
                sqrt2 * dv * sin_m[m],
                sqrt2 * mf * v * cos_m[m] / st,
            );
        }
    }
    (vals, grads)
}

fn angles(dir: [f64; 3]) -> (f64, f64, f64, f64) {
    let norm = (dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]).sqrt();
    let ct = (dir[2] / norm).clamp(-1.0, 1.0);
    let st = (1.0 - ct * ct).max(0.0).sqrt();
    let rho = (dir[0] * dir[0] + dir[1] * dir[1]).sqrt();
    if rho < 1e-300 {
        (ct, st, 1.0, 0.0)
    } else {
        (ct, st, dir[0] / rho, dir[1] / rho)
    }
}

fn azimuth_table(lmax: usize, cphi: f64, sphi: f64) -> (Vec<f64>, Vec<f64>) {
    let mut cos_m = vec![1.0; lmax + 1];
    let mut sin_m = vec![0.0; lmax + 1];
    for m in 1..=lmax {
        cos_m[m] = cos_m[m - 1] * cphi - sin_m[m - 1] * sphi;
        sin_m[m] = sin_m[m - 1] * cphi + cos_m[m - 1] * sphi;
    }
    (cos_m, sin_m)
}

/// Triangular index for 0 <= m <= l.
fn tri(l: usize, m: usize) -> usize {
    l * (l + 1) / 2 + m
}

/// Orthonormalized associated Legendre values Q_{l,m}(cos theta) for
/// 0 <= m <= l <= lmax, such that Y_{l,0} = Q_{l,0} and
/// Y_{l,+-m} = sqrt(2) Q_{l,m} {cos,sin}(m phi).
fn normalized_assoc_legendre(lmax: usize, ct: f64, st: f64) -> Vec<f64> {
    let mut q = vec![0.0; tri(lmax, lmax) + 1];
    q[tri(0, 0)] = 1.0 / (4.0 * std::f64::consts::PI).sqrt();
    for m in 1..=lmax {
        let mf = m as f64;
        q[tri(m, m)] = q[tri(m - 1, m - 1)] * st * ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt();
    }
    for m in 0..lmax {
        let mf = m as f64;
        q[tri(m + 1, m)] = q[tri(m, m)] * ct * (2.0 * mf + 3.0).sqrt();
    }
    for m in 0..=lmax {
        for l in (m + 2)..=lmax {
            let lf = l as f64;
            let mf = m as f64;
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0))
                .sqrt();
            q[tri(l, m)] = a * (ct * q[tri(l - 1, m)] - b * q[tri(l - 2, m)]);
        }
    }
    q
}

/// d/d(theta) of the Q_{l,m}, using
/// dQ_lm/dtheta = (l ct Q_lm - sqrt((2l+1)(l^2-m^2)/(2l-1)) Q_{l-1,m}) / st.
fn assoc_legendre_theta_deriv(lmax: usize, ct: f64, st: f64, q: &[f64]) -> Vec<f64> {
    let mut dq = vec![0.0; q.len()];
    for m in 0..=lmax {
        for l in m..=lmax {
            let lf = l as f64;
            let mf = m as f64;
            let below = if l > m { q[tri(l - 1, m)] } else { 0.0 };
            let c = if l > 0 {
                ((2.0 * lf + 1.0) * (lf * lf - mf * mf) / (2.0 * lf - 1.0)).sqrt()
            } else {
                0.0
            };
            dq[tri(l, m)] = (lf * ct * q[tri(l, m)] - c * below) / st;
        }
    }
    dq
}
