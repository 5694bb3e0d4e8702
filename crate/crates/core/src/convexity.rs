//! Numerical evidence for (strict) rank-one convexity.
//!
//! Three views of the same property: convexity of `W` on rank-one segments,
//! monotonicity of `S₁` along rank-one lines, and positivity of the second
//! derivative `D²W(F)(ξ⊗η, ξ⊗η)` (equivalently of the acoustic tensor).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigen::sym_eigen;
use crate::error::{domain, Error, Result};
use crate::materials::{cauchy, MaterialModel};
use crate::optimize::{nelder_mead, NelderMeadOptions};
use crate::sampling::{Sampler, Seed};
use crate::scan::ScanConfig;
use crate::tensor::{dyad, segment_in_gl_plus, Mat3, RankOnePerturbation, Vec3};

/// Values below `-VIOLATION_FACTOR × noise floor` count as violations.
pub const VIOLATION_FACTOR: f64 = 10.0;

/// Records kept verbatim in a report; the rest are only counted.
pub const MAX_RECORDED_VIOLATIONS: usize = 1000;

/// Second-difference step, `1e-4 (1 + ‖F‖)`.
pub fn second_derivative_step(f: &Mat3) -> f64 {
    1e-4 * (1.0 + f.norm())
}

/// Roundoff floor of the central second difference at `F` with step `h`.
pub fn noise_floor(m: &dyn MaterialModel, f: &Mat3, h: f64) -> f64 {
    let w = m.energy(f).map(f64::abs).unwrap_or(0.0);
    4.0 * f64::EPSILON * (w + m.stress_scale()) / (h * h)
}

/// `⟨S₁(F + ξ⊗η) − S₁(F), ξ⊗η⟩`.
pub fn monotonicity_gap(m: &dyn MaterialModel, f: &Mat3, p: &RankOnePerturbation) -> Result<f64> {
    if !segment_in_gl_plus(f, p) {
        return Err(domain("rank-one segment leaves GL+(3)"));
    }
    if p.is_zero() {
        return Ok(0.0);
    }
    let d = p.matrix();
    Ok((m.piola(&(*f + d))? - m.piola(f)?).inner(&d))
}

fn check_unit(v: &Vec3, what: &str) -> Result<()> {
    if (v.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!("{what} must be a unit vector")));
    }
    Ok(())
}

/// `(W(F + hξ⊗η) − 2W(F) + W(F − hξ⊗η)) / h²` for unit `ξ`, `η`.
pub fn rank_one_second_derivative(m: &dyn MaterialModel, f: &Mat3, xi: &Vec3, eta: &Vec3, h: f64) -> Result<f64> {
    check_unit(xi, "xi")?;
    check_unit(eta, "eta")?;
    let d = dyad(xi, eta).scale(h);
    let (plus, mid, minus) = (m.energy(&(*f + d))?, m.energy(f)?, m.energy(&(*f - d))?);
    Ok((plus - 2.0 * mid + minus) / (h * h))
}

/// A point `θ` on the rank-one segment from `F` to `F + ξ⊗η`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentProbe {
    f: Mat3,
    p: RankOnePerturbation,
    theta: f64,
}

impl SegmentProbe {
    pub fn new(f: Mat3, p: RankOnePerturbation, theta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::InvalidArgument(format!("theta = {theta} not in [0, 1]")));
        }
        if !segment_in_gl_plus(&f, &p) {
            return Err(domain("rank-one segment leaves GL+(3)"));
        }
        Ok(SegmentProbe { f, p, theta })
    }

    pub fn f(&self) -> &Mat3 {
        &self.f
    }
    pub fn perturbation(&self) -> &RankOnePerturbation {
        &self.p
    }
    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// `θ W(F) + (1−θ) W(F + ξ⊗η) − W(F + (1−θ) ξ⊗η)`.
pub fn convexity_on_segment(m: &dyn MaterialModel, probe: &SegmentProbe) -> Result<f64> {
    let theta = probe.theta;
    if probe.p.is_zero() || theta == 0.0 || theta == 1.0 {
        return Ok(0.0);
    }
    let d = probe.p.matrix();
    let w0 = m.energy(&probe.f)?;
    let w1 = m.energy(&(probe.f + d))?;
    let wt = m.energy(&(probe.f + d.scale(1.0 - theta)))?;
    Ok(theta * w0 + (1.0 - theta) * w1 - wt)
}

/// Acoustic tensor before symmetrization: column `k` is the central difference
/// of `S₁(F + t e_k⊗η) η` at `t = 0`.
pub fn acoustic_tensor_unsymmetrized(m: &dyn MaterialModel, f: &Mat3, eta: &Vec3, h: f64) -> Result<Mat3> {
    check_unit(eta, "eta")?;
    if !(f.det() > 0.0) {
        return Err(domain("F is not in GL+(3)"));
    }
    let mut q = Mat3::ZERO;
    for k in 0..3 {
        let d = dyad(&Vec3::unit(k), eta).scale(h);
        let col = (m.piola(&(*f + d))? - m.piola(&(*f - d))?)
            .mul_vec(eta)
            .scale(1.0 / (2.0 * h));
        for i in 0..3 {
            q[(i, k)] = col[i];
        }
    }
    Ok(q)
}

/// Symmetric `Q(η)` with `⟨Q(η)ξ, ξ⟩ = D²W(F)(ξ⊗η, ξ⊗η)`.
pub fn acoustic_tensor(m: &dyn MaterialModel, f: &Mat3, eta: &Vec3, h: f64) -> Result<Mat3> {
    Ok(acoustic_tensor_unsymmetrized(m, f, eta, h)?.sym())
}

/// Weak Baker-Ericksen check: principal Cauchy stresses never order opposite
/// to distinct principal stretches.
pub fn baker_ericksen_check(m: &dyn MaterialModel, f: &Mat3) -> Result<bool> {
    if !m.is_isotropic() {
        return Err(Error::NotIsotropic(m.name().to_string()));
    }
    let sigma = cauchy(m, f)?;
    let (b_eigs, vecs) = sym_eigen(&(*f * f.transpose()));
    let stretches = b_eigs.map(|x| x.max(0.0).sqrt());
    let stresses = vecs.map(|v| v.dot(&sigma.mul_vec(&v)));
    let stretch_tol = 1e-8 * stretches[2];
    let stress_tol = 1e-10 * (sigma.norm() + m.stress_scale());
    for i in 0..3 {
        for j in (i + 1)..3 {
            let dl = stretches[j] - stretches[i];
            if dl.abs() <= stretch_tol {
                continue;
            }
            if (stresses[j] - stresses[i]) * dl.signum() < -stress_tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionalProbe {
    pub f: Mat3,
    pub xi: Vec3,
    pub eta: Vec3,
    pub value: f64,
    pub noise_floor: f64,
    /// Global sample index; refined points carry the index of their seed candidate.
    pub index: u64,
    pub refined: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EllipticityReport {
    pub model: String,
    pub seed: Seed,
    pub samples_tested: usize,
    /// Probes whose stencil left GL⁺(3).
    pub skipped: usize,
    pub refined: usize,
    pub min_second_derivative: Option<f64>,
    pub argmin: Option<DirectionalProbe>,
    pub violation_count: usize,
    /// Values within the noise band below zero; never counted as violations.
    pub indeterminate_count: usize,
    /// At most [`MAX_RECORDED_VIOLATIONS`] entries, ordered by sample index.
    pub violations: Vec<DirectionalProbe>,
}

fn classify(p: &DirectionalProbe) -> (bool, bool) {
    let band = VIOLATION_FACTOR * p.noise_floor;
    let violation = p.value < -band;
    let indeterminate = !violation && p.value < 0.0;
    (violation, indeterminate)
}

fn probe_at(m: &dyn MaterialModel, f: &Mat3, xi: Vec3, eta: Vec3, index: u64) -> Option<DirectionalProbe> {
    let h = second_derivative_step(f);
    let value = rank_one_second_derivative(m, f, &xi, &eta, h).ok()?;
    value.is_finite().then(|| DirectionalProbe {
        f: *f,
        xi,
        eta,
        value,
        noise_floor: noise_floor(m, f, h),
        index,
        refined: false,
    })
}

/// Scan `D²W(F)(ξ⊗η, ξ⊗η)` over the configured `F` set and random unit
/// directions, then refine the lowest candidates on S² × S².
pub fn ellipticity_scan(m: &dyn MaterialModel, cfg: &ScanConfig) -> Result<EllipticityReport> {
    let n_probe = cfg.probe_f.len();
    let n_total_f = if cfg.n_dir == 0 { 0 } else { n_probe + cfg.n_f };

    let per_f: Vec<Result<(usize, Vec<DirectionalProbe>)>> = (0..n_total_f)
        .into_par_iter()
        .map(|k| {
            let mut s = Sampler::new(cfg.seed.derive(k as u64));
            let f = if k < n_probe {
                cfg.probe_f[k]
            } else {
                s.gl_plus(cfg.spread)?
            };
            let mut skipped = 0;
            let mut out = Vec::with_capacity(cfg.n_dir);
            for d in 0..cfg.n_dir {
                let (xi, eta) = (s.unit_vec(), s.unit_vec());
                let index = (k * cfg.n_dir + d) as u64;
                match probe_at(m, &f, xi, eta, index) {
                    Some(p) => out.push(p),
                    None => skipped += 1,
                }
            }
            Ok((skipped, out))
        })
        .collect();

    let mut probes = Vec::with_capacity(n_total_f * cfg.n_dir);
    let mut skipped = 0;
    for r in per_f {
        let (sk, p) = r?;
        skipped += sk;
        probes.extend(p);
    }
    let samples_tested = probes.len();

    // lowest candidates, ties by index
    let mut order: Vec<usize> = (0..probes.len()).collect();
    order.sort_by(|&a, &b| {
        probes[a]
            .value
            .total_cmp(&probes[b].value)
            .then(probes[a].index.cmp(&probes[b].index))
    });
    let candidates: Vec<DirectionalProbe> = order.iter().take(cfg.refine_k).map(|&i| probes[i].clone()).collect();
    let refined: Vec<DirectionalProbe> = candidates.par_iter().filter_map(|c| refine_candidate(m, c)).collect();

    let mut violation_count = 0;
    let mut indeterminate_count = 0;
    let mut violations = Vec::new();
    for p in probes.iter().chain(refined.iter()) {
        let (v, ind) = classify(p);
        if v {
            violation_count += 1;
            if violations.len() < MAX_RECORDED_VIOLATIONS {
                violations.push(p.clone());
            }
        }
        if ind {
            indeterminate_count += 1;
        }
    }

    let argmin = probes
        .iter()
        .chain(refined.iter())
        .min_by(|a, b| a.value.total_cmp(&b.value).then(a.index.cmp(&b.index)))
        .cloned();

    Ok(EllipticityReport {
        model: m.name().to_string(),
        seed: cfg.seed,
        samples_tested,
        skipped,
        refined: refined.len(),
        min_second_derivative: argmin.as_ref().map(|p| p.value),
        argmin,
        violation_count,
        indeterminate_count,
        violations,
    })
}

/// Nelder-Mead on the angle chart `(θ_ξ, φ_ξ, θ_η, φ_η)`, 200 iterations.
fn refine_candidate(m: &dyn MaterialModel, c: &DirectionalProbe) -> Option<DirectionalProbe> {
    let (t1, p1) = c.xi.to_spherical();
    let (t2, p2) = c.eta.to_spherical();
    let objective = |x: &[f64]| {
        let xi = Vec3::from_spherical(x[0], x[1]);
        let eta = Vec3::from_spherical(x[2], x[3]);
        let h = second_derivative_step(&c.f);
        rank_one_second_derivative(m, &c.f, &xi, &eta, h).unwrap_or(f64::INFINITY)
    };
    let opts = NelderMeadOptions {
        max_iterations: 200,
        x_tolerance: 1e-10,
        f_tolerance: 0.0,
        initial_step: 0.1,
    };
    let best = nelder_mead(objective, &[t1, p1, t2, p2], &opts);
    let xi = Vec3::from_spherical(best.x[0], best.x[1]);
    let eta = Vec3::from_spherical(best.x[2], best.x[3]);
    let mut p = probe_at(m, &c.f, xi, eta, c.index)?;
    p.refined = true;
    (p.value < c.value).then_some(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::{BlatzKoUniConstant, Material, SaintVenantKirchhoff, VolumetricCubic};
    use approx::assert_relative_eq;

    fn e(i: usize) -> Vec3 {
        Vec3::unit(i)
    }

    struct Quadratic(f64);
    impl MaterialModel for Quadratic {
        fn name(&self) -> &str {
            "quadratic"
        }
        fn energy(&self, f: &Mat3) -> Result<f64> {
            Ok(self.0 * f.norm_squared())
        }
        fn piola(&self, f: &Mat3) -> Result<Mat3> {
            Ok(f.scale(2.0 * self.0))
        }
        fn stress_scale(&self) -> f64 {
            self.0
        }
    }

    #[test]
    fn monotonicity_examples() {
        let bk = BlatzKoUniConstant { mu: 1.0 };
        assert_eq!(
            monotonicity_gap(&bk, &Mat3::IDENTITY, &RankOnePerturbation::ZERO).unwrap(),
            0.0
        );
        let vc = VolumetricCubic { c: 2.0 };
        let p = RankOnePerturbation::new(e(0).scale(2.0), e(0));
        assert!(monotonicity_gap(&vc, &Mat3::IDENTITY, &p).unwrap().abs() <= 1e-14);
        let bad = RankOnePerturbation::new(e(0).scale(-2.0), e(0));
        assert!(monotonicity_gap(&bk, &Mat3::IDENTITY, &bad).is_err());
    }

    #[test]
    fn blatzko_monotone_on_random_lines() {
        let bk = BlatzKoUniConstant { mu: 1.0 };
        let mut s = Sampler::new(Seed(31));
        for _ in 0..10_000 {
            let (f, p) = s.admissible_pair(0.4, 0.01, 1.5).unwrap();
            assert!(monotonicity_gap(&bk, &f, &p).unwrap() > 0.0);
        }
    }

    #[test]
    fn scale_invariance_of_direction() {
        let bk = BlatzKoUniConstant { mu: 1.0 };
        let mut s = Sampler::new(Seed(32));
        for _ in 0..200 {
            let (f, p) = s.admissible_pair(0.4, 0.1, 1.0).unwrap();
            let base = monotonicity_gap(&bk, &f, &p).unwrap();
            for c in [-3.0, 0.01, 7.5] {
                let q = RankOnePerturbation::new(p.xi.scale(c), p.eta.scale(1.0 / c));
                let g = monotonicity_gap(&bk, &f, &q).unwrap();
                assert!((g - base).abs() <= 1e-12 * base.abs());
            }
        }
    }

    #[test]
    fn blatzko_second_derivative_at_identity() {
        // W(diag(1+t,1,1)) = μ/2((1+t)² + 2 + 2/(1+t) − 5) ⇒ W''(0) = 3μ
        let bk = BlatzKoUniConstant { mu: 1.0 };
        let v = rank_one_second_derivative(&bk, &Mat3::IDENTITY, &e(0), &e(0), 1e-4).unwrap();
        assert_relative_eq!(v, 3.0, max_relative = 1e-6);
        // second oracle: slope of ⟨S₁(F + tξ⊗η), ξ⊗η⟩
        let d = dyad(&e(0), &e(0));
        let h = 1e-5;
        let g = |t: f64| bk.piola(&(Mat3::IDENTITY + d.scale(t))).unwrap().inner(&d);
        let slope = (g(h) - g(-h)) / (2.0 * h);
        assert_relative_eq!(v, slope, max_relative = 1e-4);
    }

    #[test]
    fn second_derivative_oracles_agree_random() {
        let mut s = Sampler::new(Seed(33));
        for name in Material::NAMES {
            let m = Material::with_defaults(name).unwrap();
            for _ in 0..50 {
                let f = s.gl_plus(0.4).unwrap();
                let (xi, eta) = (s.unit_vec(), s.unit_vec());
                let v = rank_one_second_derivative(&m, &f, &xi, &eta, second_derivative_step(&f)).unwrap();
                let d = dyad(&xi, &eta);
                let g = |t: f64| m.piola(&(f + d.scale(t))).unwrap().inner(&d);
                let h = 1e-5;
                let slope = (g(h) - g(-h)) / (2.0 * h);
                assert!((v - slope).abs() <= 1e-4 * slope.abs().max(m.stress_scale()), "{name}");
            }
        }
    }

    #[test]
    fn quadratic_second_derivative_exact() {
        let q = Quadratic(0.75);
        let (xi, eta) = (Vec3::new(0.6, 0.8, 0.0), Vec3::new(0.0, 0.0, 1.0));
        // exact up to cancellation roundoff ~ ε W / h²
        for h in [0.5, 1e-1, 1e-2] {
            let v = rank_one_second_derivative(&q, &Mat3::IDENTITY, &xi, &eta, h).unwrap();
            assert_relative_eq!(v, 1.5, max_relative = 1e-15 / (h * h));
        }
        assert!(rank_one_second_derivative(&q, &Mat3::IDENTITY, &xi.scale(2.0), &eta, 1e-3).is_err());
    }

    #[test]
    fn svk_loses_ellipticity_under_compression() {
        // W(diag(a,1,1)) = (λ/2 + μ)(a² − 1)²/4 ⇒ W'' = (λ/2 + μ)(3a² − 1)
        let svk = SaintVenantKirchhoff { mu: 1.0, lambda: 1.0 };
        let f = Mat3::diag(0.4, 1.0, 1.0);
        let v = rank_one_second_derivative(&svk, &f, &e(0), &e(0), second_derivative_step(&f)).unwrap();
        assert_relative_eq!(v, -0.78, max_relative = 1e-6);
        let q = acoustic_tensor(&svk, &f, &e(0), 1e-5).unwrap();
        let (l, _) = sym_eigen(&q);
        assert!(l[0] < 0.0);
    }

    #[test]
    fn convexity_on_segment_examples() {
        let bk = BlatzKoUniConstant { mu: 1.0 };
        let p = RankOnePerturbation::new(Vec3::new(0.3, 0.2, -0.1), Vec3::new(0.1, 0.5, 0.2));
        for theta in [0.0, 1.0] {
            let probe = SegmentProbe::new(Mat3::IDENTITY, p, theta).unwrap();
            assert_eq!(convexity_on_segment(&bk, &probe).unwrap(), 0.0);
        }
        let zero = SegmentProbe::new(Mat3::IDENTITY, RankOnePerturbation::ZERO, 0.3).unwrap();
        assert_eq!(convexity_on_segment(&bk, &zero).unwrap(), 0.0);
        assert!(SegmentProbe::new(Mat3::IDENTITY, p, 1.5).is_err());

        let mut s = Sampler::new(Seed(34));
        for _ in 0..2000 {
            let (f, p) = s.admissible_pair(0.4, 0.1, 1.5).unwrap();
            let probe = SegmentProbe::new(f, p, 0.5).unwrap();
            assert!(convexity_on_segment(&bk, &probe).unwrap() > 0.0);
        }
    }

    #[test]
    fn quadratic_segment_closed_form() {
        // a‖F‖²: θW(F) + (1−θ)W(F+D) − W(F+(1−θ)D) = θ(1−θ) a ‖D‖²
        let q = Quadratic(1.25);
        let mut s = Sampler::new(Seed(35));
        for _ in 0..100 {
            let (f, p) = s.admissible_pair(0.4, 0.1, 1.0).unwrap();
            let theta = s.uniform(0.0, 1.0);
            let probe = SegmentProbe::new(f, p, theta).unwrap();
            let expected = theta * (1.0 - theta) * 1.25 * p.amplitude().powi(2);
            let got = convexity_on_segment(&q, &probe).unwrap();
            assert!((got - expected).abs() <= 1e-12 * (1.0 + f.norm_squared()));
        }
    }

    #[test]
    fn acoustic_tensor_matches_directional() {
        let mut s = Sampler::new(Seed(36));
        for name in Material::NAMES {
            let m = Material::with_defaults(name).unwrap();
            for _ in 0..30 {
                let f = s.gl_plus(0.4).unwrap();
                let (xi, eta) = (s.unit_vec(), s.unit_vec());
                let raw = acoustic_tensor_unsymmetrized(&m, &f, &eta, 1e-5).unwrap();
                assert!(raw.asymmetry() <= 1e-6 * (raw.norm() + m.stress_scale()));
                let q = raw.sym();
                let quad = xi.dot(&q.mul_vec(&xi));
                let v = rank_one_second_derivative(&m, &f, &xi, &eta, second_derivative_step(&f)).unwrap();
                assert!((quad - v).abs() <= 1e-4 * v.abs().max(m.stress_scale()), "{name}");
            }
        }
    }

    #[test]
    fn blatzko_acoustic_positive_at_identity() {
        let bk = BlatzKoUniConstant { mu: 1.0 };
        let mut s = Sampler::new(Seed(37));
        for _ in 0..20 {
            let eta = s.unit_vec();
            let (l, _) = sym_eigen(&acoustic_tensor(&bk, &Mat3::IDENTITY, &eta, 1e-5).unwrap());
            assert!(l[0] > 0.0);
        }
    }

    #[test]
    fn baker_ericksen_examples() {
        let bk = Material::with_defaults("blatz-ko").unwrap();
        assert!(baker_ericksen_check(&bk, &Mat3::IDENTITY).unwrap());
        assert!(baker_ericksen_check(&bk, &Mat3::diag(2.0, 1.0, 1.0)).unwrap());
        let svk = Material::with_defaults("svk").unwrap();
        assert!(baker_ericksen_check(&svk, &Mat3::diag(1.3, 0.9, 1.0)).is_ok());
        let vc = Material::with_defaults("volumetric-cubic").unwrap();
        let mut s = Sampler::new(Seed(38));
        for _ in 0..100 {
            let f = s.gl_plus(0.4).unwrap();
            assert!(baker_ericksen_check(&vc, &f).unwrap());
            assert!(baker_ericksen_check(&bk, &f).unwrap());
            let nh = Material::with_defaults("neo-hooke").unwrap();
            assert!(baker_ericksen_check(&nh, &f).unwrap());
        }
        assert!(matches!(
            baker_ericksen_check(&Quadratic(1.0), &Mat3::IDENTITY),
            Err(Error::NotIsotropic(_))
        ));
    }

    #[test]
    fn baker_ericksen_detects_reversed_order() {
        // σ = −B: stresses ordered opposite to stretches
        struct Reversed;
        impl MaterialModel for Reversed {
            fn name(&self) -> &str {
                "reversed"
            }
            fn energy(&self, f: &Mat3) -> Result<f64> {
                Ok(-0.5 * f.norm_squared())
            }
            fn piola(&self, f: &Mat3) -> Result<Mat3> {
                Ok(-*f)
            }
            fn stress_scale(&self) -> f64 {
                1.0
            }
            fn is_isotropic(&self) -> bool {
                true
            }
        }
        assert!(!baker_ericksen_check(&Reversed, &Mat3::diag(2.0, 1.0, 1.0)).unwrap());
    }

    fn small_cfg(seed: u64) -> ScanConfig {
        ScanConfig {
            seed: Seed(seed),
            n_f: 50,
            n_dir: 20,
            refine_k: 4,
            ..ScanConfig::default()
        }
    }

    #[test]
    fn scan_blatzko_clean_and_reproducible() {
        let bk = BlatzKoUniConstant { mu: 1.0 };
        let a = ellipticity_scan(&bk, &small_cfg(1)).unwrap();
        assert_eq!(a.samples_tested + a.skipped, 52 * 20);
        assert_eq!(a.violation_count, 0);
        assert!(a.min_second_derivative.unwrap() > 0.0);
        let b = ellipticity_scan(&bk, &small_cfg(1)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn scan_svk_finds_violations() {
        let svk = SaintVenantKirchhoff { mu: 1.0, lambda: 1.0 };
        let r = ellipticity_scan(&svk, &small_cfg(2)).unwrap();
        assert!(r.violation_count > 0);
        assert!(!r.violations.is_empty());
        assert!(r.min_second_derivative.unwrap() < 0.0);
    }

    #[test]
    fn zero_budget_scan() {
        let cfg = ScanConfig {
            n_f: 0,
            n_dir: 0,
            ..ScanConfig::default()
        };
        let r = ellipticity_scan(&BlatzKoUniConstant { mu: 1.0 }, &cfg).unwrap();
        assert_eq!(r.samples_tested, 0);
        assert!(r.min_second_derivative.is_none() && r.argmin.is_none());
        assert_eq!(r.violation_count, 0);
    }
}
