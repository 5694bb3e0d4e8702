//! Closed-form eigen-decomposition of symmetric 3×3 matrices.
//!
//! Eigenvalues come from the trigonometric solution of the characteristic
//! polynomial of the deviator. Eigenvectors: the most isolated eigenvalue's
//! vector from cross products of rows of `A − λ𝟙`, the remaining pair by an
//! exact 2×2 rotation in the orthogonal plane.

use std::f64::consts::PI;

use crate::tensor::{Mat3, Vec3};

/// Eigenvalues of the symmetric part of `a`, sorted ascending.
pub fn sym_eigenvalues(a: &Mat3) -> [f64; 3] {
    let a = a.sym();
    let scale = a.max_abs();
    if scale == 0.0 || !scale.is_finite() {
        return [0.0; 3];
    }
    let b = a.scale(1.0 / scale);
    let q = b.trace() / 3.0;
    let p1 = b[(0, 1)].powi(2) + b[(0, 2)].powi(2) + b[(1, 2)].powi(2);
    let p2 = (b[(0, 0)] - q).powi(2) + (b[(1, 1)] - q).powi(2) + (b[(2, 2)] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    if p == 0.0 {
        return [q * scale; 3];
    }
    let dev = (b - Mat3::scalar(q)).scale(1.0 / p);
    let r = (dev.det() / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let hi = q + 2.0 * p * phi.cos();
    let lo = q + 2.0 * p * (phi + 2.0 * PI / 3.0).cos();
    let mid = 3.0 * q - hi - lo;
    let mut ev = [lo * scale, mid * scale, hi * scale];
    ev.sort_by(f64::total_cmp);
    ev
}

/// Eigenvalues (ascending) and matching orthonormal eigenvectors of the
/// symmetric part of `a`.
pub fn sym_eigen(a: &Mat3) -> ([f64; 3], [Vec3; 3]) {
    let a = a.sym();
    let scale = a.max_abs();
    let e = [Vec3::unit(0), Vec3::unit(1), Vec3::unit(2)];
    if scale == 0.0 || !scale.is_finite() {
        return ([0.0; 3], e);
    }
    let b = a.scale(1.0 / scale);
    let ev = sym_eigenvalues(&b);
    let spread = ev[2] - ev[0];
    if spread <= 1e-15 {
        return (ev.map(|x| x * scale), e);
    }

    // the eigenvalue farther from the middle one is the better isolated
    let first = if ev[1] - ev[0] > ev[2] - ev[1] { 0 } else { 2 };
    let v0 = null_vector(&(b - Mat3::scalar(ev[first])));
    let (u, w) = orthonormal_complement(&v0);

    // restriction of b to span{u, w}
    let bu = b.mul_vec(&u);
    let bw = b.mul_vec(&w);
    let (m00, m01, m11) = (u.dot(&bu), u.dot(&bw), w.dot(&bw));
    let (c, s) = jacobi_rotation(m00, m01, m11);
    let x = u.scale(c) - w.scale(s);
    let y = u.scale(s) + w.scale(c);

    let mut pairs: Vec<(f64, Vec3)> = [v0, x, y].into_iter().map(|v| (v.dot(&b.mul_vec(&v)), v)).collect();
    pairs.sort_by(|l, r| l.0.total_cmp(&r.0));
    (
        [pairs[0].0 * scale, pairs[1].0 * scale, pairs[2].0 * scale],
        [pairs[0].1, pairs[1].1, pairs[2].1],
    )
}

/// Unit vector spanning the (numerical) kernel of a rank-2 symmetric `m`.
fn null_vector(m: &Mat3) -> Vec3 {
    let (r0, r1, r2) = (m.row(0), m.row(1), m.row(2));
    let candidates = [r0.cross(&r1), r0.cross(&r2), r1.cross(&r2)];
    let best = candidates
        .iter()
        .max_by(|a, b| a.norm_squared().total_cmp(&b.norm_squared()))
        .copied()
        .unwrap_or(Vec3::ZERO);
    best.normalized().unwrap_or(Vec3::unit(0))
}

fn orthonormal_complement(v: &Vec3) -> (Vec3, Vec3) {
    let helper = if v[0].abs() > v[1].abs() {
        Vec3::unit(1)
    } else {
        Vec3::unit(0)
    };
    let u = v.cross(&helper).normalized().unwrap_or(Vec3::unit(2));
    let w = v.cross(&u);
    (u, w)
}

/// `(c, s)` diagonalizing `[[a, b], [b, d]]` by `[[c, s], [-s, c]]`.
fn jacobi_rotation(a: f64, b: f64, d: f64) -> (f64, f64) {
    if b == 0.0 {
        return (1.0, 0.0);
    }
    let tau = (d - a) / (2.0 * b);
    let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
    let t = if tau == 0.0 { 1.0 } else { t };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, t * c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn residual(a: &Mat3, l: f64, v: &Vec3) -> f64 {
        (a.mul_vec(v) - v.scale(l)).norm()
    }

    #[test]
    fn diagonal_and_repeated() {
        let l = sym_eigenvalues(&Mat3::diag(3.0, -1.0, 2.0));
        for (x, y) in l.iter().zip([-1.0, 2.0, 3.0]) {
            assert!((x - y).abs() < 1e-14);
        }
        assert_eq!(sym_eigenvalues(&Mat3::scalar(4.0)), [4.0; 3]);
        let (l, v) = sym_eigen(&Mat3::diag(2.0, 2.0, 5.0));
        assert!((l[2] - 5.0).abs() < 1e-14);
        for i in 0..3 {
            assert!(residual(&Mat3::diag(2.0, 2.0, 5.0), l[i], &v[i]) < 1e-14);
        }
    }

    #[test]
    fn known_spectrum() {
        // eigenvalues 1, 2, 4 rotated
        let r = Mat3::rotation(&Vec3::new(0.4, -0.2, 0.9));
        let a = r * Mat3::diag(1.0, 2.0, 4.0) * r.transpose();
        let l = sym_eigenvalues(&a);
        for (x, y) in l.iter().zip([1.0, 2.0, 4.0]) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    fn sym_matrix() -> impl Strategy<Value = Mat3> {
        proptest::array::uniform6(-10.0f64..10.0)
            .prop_map(|v| Mat3::from_rows([[v[0], v[1], v[2]], [v[1], v[3], v[4]], [v[2], v[4], v[5]]]))
    }

    proptest! {
        #[test]
        fn residual_and_orthonormality(a in sym_matrix()) {
            let (l, v) = sym_eigen(&a);
            let scale = a.max_abs().max(1e-300);
            for i in 0..3 {
                prop_assert!(residual(&a, l[i], &v[i]) <= 1e-12 * scale);
                prop_assert!((v[i].norm() - 1.0).abs() < 1e-13);
                for j in (i + 1)..3 {
                    prop_assert!(v[i].dot(&v[j]).abs() < 1e-12);
                }
            }
            prop_assert!(l[0] <= l[1] && l[1] <= l[2]);
            prop_assert!((l[0] + l[1] + l[2] - a.trace()).abs() <= 1e-12 * scale);
        }

        #[test]
        fn values_agree_with_vectors_route(a in sym_matrix()) {
            let l = sym_eigenvalues(&a);
            let (l2, _) = sym_eigen(&a);
            for i in 0..3 {
                prop_assert!((l[i] - l2[i]).abs() <= 1e-12 * a.max_abs().max(1e-300));
            }
        }
    }
}
