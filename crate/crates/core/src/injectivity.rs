//! Rank-one injectivity of the Cauchy stress.
//!
//! For any energy, `⟨S₁(F̂) − S₁(F), ξ⊗η⟩ = ⟨σ(F̂) − σ(F), ξ ⊗ Cof(F) η⟩` with
//! `F̂ = F + ξ⊗η`; so a Cauchy-stress collision along a rank-one line forces a
//! zero Piola monotonicity gap, which strict rank-one convexity forbids. This
//! module checks the identity, searches for collisions, and runs the
//! companion checks on `B = F Fᵀ` and on the Blatz-Ko spherical response.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::materials::{blatzko_cauchy_from_b, cauchy, spherical_stress, MaterialModel};
use crate::optimize::{nelder_mead, NelderMeadOptions};
use crate::sampling::{Sampler, Seed};
use crate::scan::ScanConfig;
use crate::tensor::{segment_in_gl_plus, Mat3, RankOnePerturbation, Vec3};

/// Certificates need `‖σ(F̂) − σ(F)‖ ≤ TOL_COLLISION · stress scale`.
pub const TOL_COLLISION: f64 = 1e-8;
/// Smallest certified `‖ξ⊗η‖`.
pub const MIN_CERTIFIED_NORM: f64 = 0.1;
/// Threshold for the implication `‖F̂F̂ᵀ − FFᵀ‖ ≤ tol ⟹ ‖ξ⊗η‖ ≤ tol`.
pub const TWIN_TOL: f64 = 1e-6;
/// Half-width of the excluded window around `λ = 1` in the pressure check.
pub const UNIT_STRETCH_TOL: f64 = 1e-6;

/// Seed-stream offset separating search starts from ellipticity-scan streams.
const SEARCH_STREAM: u64 = 1 << 40;

fn require_gl_plus(f: &Mat3, what: &str) -> Result<f64> {
    let j = f.det();
    if !(j > 0.0) || !f.is_finite() {
        return Err(domain(format!("{what} is not in GL+(3) (det = {j:e})")));
    }
    Ok(j)
}

/// Both sides of the rank-one identity: `(⟨ΔS₁, ξ⊗η⟩, ⟨Δσ, ξ ⊗ Cof(F)η⟩)`.
pub fn theorem_identity_sides(m: &dyn MaterialModel, f: &Mat3, p: &RankOnePerturbation) -> Result<(f64, f64)> {
    require_gl_plus(f, "F")?;
    let f_hat = *f + p.matrix();
    require_gl_plus(&f_hat, "F + xi⊗eta")?;
    if p.is_zero() {
        return Ok((0.0, 0.0));
    }
    let d = p.matrix();
    let lhs = (m.piola(&f_hat)? - m.piola(f)?).inner(&d);
    let direction = crate::tensor::dyad(&p.xi, &f.cofactor().mul_vec(&p.eta));
    let rhs = (cauchy(m, &f_hat)? - cauchy(m, f)?).inner(&direction);
    Ok((lhs, rhs))
}

/// `|⟨ΔS₁, ξ⊗η⟩ − ⟨Δσ, ξ ⊗ Cof(F)η⟩|`; roundoff-level for every model.
pub fn theorem_identity_gap(m: &dyn MaterialModel, f: &Mat3, p: &RankOnePerturbation) -> Result<f64> {
    let (lhs, rhs) = theorem_identity_sides(m, f, p)?;
    Ok((lhs - rhs).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineGap {
    pub s: f64,
    /// `None` when `F + s ξ⊗η` leaves GL⁺(3).
    pub gap: Option<f64>,
}

/// `‖σ(F + s ξ⊗η) − σ(F)‖` for each `s`.
pub fn cauchy_gap_along_line(
    m: &dyn MaterialModel,
    f: &Mat3,
    p: &RankOnePerturbation,
    s_values: &[f64],
) -> Result<Vec<LineGap>> {
    require_gl_plus(f, "F")?;
    let base = cauchy(m, f)?;
    let d = p.matrix();
    s_values
        .iter()
        .map(|&s| {
            let g = *f + d.scale(s);
            if !(g.det() > 0.0) {
                return Ok(LineGap { s, gap: None });
            }
            Ok(LineGap {
                s,
                gap: Some((cauchy(m, &g)? - base).norm()),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollisionCertificate {
    pub model: String,
    pub f: Mat3,
    pub p: RankOnePerturbation,
    /// `‖σ(F + ξ⊗η) − σ(F)‖`.
    pub residual: f64,
    /// `‖ξ⊗η‖`.
    pub perturbation_norm: f64,
    pub segment_ok: bool,
    pub start_index: u64,
}

impl CollisionCertificate {
    pub fn is_valid(&self, stress_scale: f64) -> bool {
        self.residual <= TOL_COLLISION * stress_scale && self.perturbation_norm >= MIN_CERTIFIED_NORM && self.segment_ok
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InjectivitySearchResult {
    pub model: String,
    pub seed: Seed,
    pub starts: usize,
    pub tol_collision: f64,
    /// Lowest residual over all starts; `None` when nothing was run.
    pub min_residual_found: Option<f64>,
    pub best: Option<CollisionCertificate>,
    /// Valid certificates ordered by start index.
    pub certificates: Vec<CollisionCertificate>,
}

/// Amplitude chart `s = lo + (hi − lo) sin²(u)`.
fn amplitude(u: f64, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * u.sin().powi(2)
}

fn decode(x: &[f64], lo: f64, hi: f64) -> RankOnePerturbation {
    let xi = Vec3::from_spherical(x[0], x[1]);
    let eta = Vec3::from_spherical(x[2], x[3]);
    RankOnePerturbation::from_directions(xi, eta, amplitude(x[4], lo, hi))
}

/// Multi-start Nelder-Mead minimization of `‖σ(F + sξ⊗η) − σ(F)‖²` over unit
/// `ξ`, `η` and `s ∈ [0.1, s_max]`, keeping the segment in GL⁺(3).
pub fn injectivity_search(m: &dyn MaterialModel, cfg: &ScanConfig) -> Result<InjectivitySearchResult> {
    let scale = m.stress_scale();
    let (lo, hi) = (MIN_CERTIFIED_NORM, cfg.s_max);
    let empty = InjectivitySearchResult {
        model: m.name().to_string(),
        seed: cfg.seed,
        starts: 0,
        tol_collision: TOL_COLLISION * scale,
        min_residual_found: None,
        best: None,
        certificates: Vec::new(),
    };
    if !(hi >= lo) || cfg.n_starts == 0 {
        return Ok(empty);
    }

    let n_probe = cfg.probe_f.len();
    let n_f = n_probe + cfg.search_n_f;
    let base_seed = cfg.seed.derive(SEARCH_STREAM);
    let fs: Vec<Mat3> = (0..n_f)
        .map(|k| {
            if k < n_probe {
                Ok(cfg.probe_f[k])
            } else {
                Sampler::new(base_seed.derive(k as u64)).gl_plus(cfg.spread)
            }
        })
        .collect::<Result<_>>()?;
    let sigmas: Vec<Mat3> = fs.iter().map(|f| cauchy(m, f)).collect::<Result<_>>()?;

    let total = n_f * cfg.n_starts;
    let outcomes: Vec<Option<CollisionCertificate>> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let k = idx / cfg.n_starts;
            let (f, sigma0) = (&fs[k], &sigmas[k]);
            let mut s = Sampler::new(base_seed.derive((1 << 32) + idx as u64));
            let start = (0..100).find_map(|_| {
                let (xi, eta) = (s.unit_vec(), s.unit_vec());
                let amp = s.uniform(lo, hi);
                let p = RankOnePerturbation::from_directions(xi, eta, amp);
                segment_in_gl_plus(f, &p).then(|| {
                    let (t1, p1) = xi.to_spherical();
                    let (t2, p2) = eta.to_spherical();
                    let frac = if hi > lo { (amp - lo) / (hi - lo) } else { 0.0 };
                    [t1, p1, t2, p2, frac.sqrt().asin()]
                })
            })?;
            let objective = |x: &[f64]| {
                let p = decode(x, lo, hi);
                if !segment_in_gl_plus(f, &p) {
                    return f64::INFINITY;
                }
                match cauchy(m, &(*f + p.matrix())) {
                    Ok(sig) => (sig - *sigma0).norm_squared() / (scale * scale),
                    Err(_) => f64::INFINITY,
                }
            };
            let mut best = nelder_mead(
                objective,
                &start,
                &NelderMeadOptions {
                    max_iterations: 600,
                    x_tolerance: 1e-12,
                    f_tolerance: 0.0,
                    initial_step: 0.3,
                },
            );
            // one restart from the best vertex with a fresh, smaller simplex
            best = nelder_mead(
                objective,
                &best.x,
                &NelderMeadOptions {
                    max_iterations: 400,
                    x_tolerance: 1e-13,
                    f_tolerance: 0.0,
                    initial_step: 0.01,
                },
            );
            let p = decode(&best.x, lo, hi);
            let f_hat = *f + p.matrix();
            let residual = (cauchy(m, &f_hat).ok()? - *sigma0).norm();
            Some(CollisionCertificate {
                model: m.name().to_string(),
                f: *f,
                p,
                residual,
                perturbation_norm: p.amplitude(),
                segment_ok: segment_in_gl_plus(f, &p),
                start_index: idx as u64,
            })
        })
        .collect();

    let ran: Vec<CollisionCertificate> = outcomes.into_iter().flatten().collect();
    let best = ran
        .iter()
        .min_by(|a, b| {
            a.residual
                .total_cmp(&b.residual)
                .then(a.start_index.cmp(&b.start_index))
        })
        .cloned();
    let certificates = ran.iter().filter(|c| c.is_valid(scale)).cloned().collect();
    Ok(InjectivitySearchResult {
        starts: ran.len(),
        min_residual_found: best.as_ref().map(|c| c.residual),
        best,
        certificates,
        ..empty
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwinCheck {
    /// `‖F̂F̂ᵀ − FFᵀ‖`.
    pub b_gap: f64,
    pub perturbation_norm: f64,
    /// `b_gap ≤ tol ⟹ ‖ξ⊗η‖ ≤ tol`.
    pub verdict: bool,
}

/// Compare `B̂ = F̂F̂ᵀ` with `B = FFᵀ` for `F̂ = F + ξ⊗η`, both in GL⁺(3).
pub fn twin_check(f: &Mat3, p: &RankOnePerturbation) -> Result<TwinCheck> {
    require_gl_plus(f, "F")?;
    let f_hat = *f + p.matrix();
    require_gl_plus(&f_hat, "F + xi⊗eta")?;
    let b_gap = (f_hat * f_hat.transpose() - *f * f.transpose()).norm();
    let perturbation_norm = p.amplitude();
    Ok(TwinCheck {
        b_gap,
        perturbation_norm,
        verdict: b_gap > TWIN_TOL || perturbation_norm <= TWIN_TOL,
    })
}

/// `det(F + ξ⊗η)` for the `B`-preserving choice `ξ = −(2/‖η‖²) F η`; equals `−det F`.
pub fn twin_det_contradiction(f: &Mat3, eta: &Vec3) -> Result<f64> {
    require_gl_plus(f, "F")?;
    let n2 = eta.norm_squared();
    if !(n2 > 0.0) {
        return Err(domain("eta must be nonzero"));
    }
    let xi = f.mul_vec(eta).scale(-2.0 / n2);
    Ok((*f + crate::tensor::dyad(&xi, eta)).det())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PressureScanRecord {
    pub alpha: f64,
    pub spherical: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PressureScanSummary {
    pub is_monotone: bool,
    /// Strictly increasing up to the grid maximum and strictly decreasing after.
    pub increasing_then_decreasing: bool,
    pub alpha_star: Option<f64>,
    pub spherical_max: Option<f64>,
    /// `(α₁, α₂)` with `α₁ < α* < α₂` and equal spherical stress.
    pub collision_pair: Option<(f64, f64)>,
    pub collision_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PressureScan {
    pub mu: f64,
    pub records: Vec<PressureScanRecord>,
    pub summary: PressureScanSummary,
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-14 * (a.abs() + b.abs()) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Root of `g` in `[a, b]` given a sign change.
fn bisect(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> Option<f64> {
    let (mut ga, gb) = (g(a), g(b));
    if ga == 0.0 {
        return Some(a);
    }
    if gb == 0.0 {
        return Some(b);
    }
    if ga.signum() == gb.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let gm = g(mid);
        if gm == 0.0 {
            return Some(mid);
        }
        if gm.signum() == ga.signum() {
            a = mid;
            ga = gm;
        } else {
            b = mid;
        }
    }
    Some(0.5 * (a + b))
}

fn unimodal_shape(values: &[f64], peak: usize) -> bool {
    values[..=peak].windows(2).all(|w| w[1] > w[0]) && values[peak..].windows(2).all(|w| w[1] < w[0])
}

fn is_monotone(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] >= w[0]) || values.windows(2).all(|w| w[1] <= w[0])
}

/// Index of the interior grid maximum, if the maximum is not at an endpoint.
fn interior_peak(values: &[f64]) -> Option<usize> {
    let peak = (0..values.len()).max_by(|&a, &b| values[a].total_cmp(&values[b]).then(b.cmp(&a)))?;
    (peak > 0 && peak + 1 < values.len()).then_some(peak)
}

/// Lower end of the left bisection bracket for the collision pair.
const COLLISION_LEFT: f64 = 1.0 + 1e-6;
/// Upper end of the right bisection bracket for the collision pair.
const COLLISION_RIGHT: f64 = 50.0;

/// Spherical Blatz-Ko stress `t(α) = ⅓ tr σ̃(α𝟙) = μ(α^{-1/2} − α^{-3})` on a
/// log-uniform grid, with its maximum and an equal-stress pair.
pub fn blatzko_pressure_scan(mu: f64, alpha_min: f64, alpha_max: f64, n: usize) -> Result<PressureScan> {
    if !(alpha_min > 0.0 && alpha_max > alpha_min && alpha_max.is_finite()) {
        return Err(domain(format!(
            "need 0 < alpha_min < alpha_max, got [{alpha_min}, {alpha_max}]"
        )));
    }
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(domain(format!("mu must be positive, got {mu}")));
    }
    if n < 3 {
        return Err(Error::InvalidArgument(format!("need at least 3 grid points, got {n}")));
    }
    let t = |alpha: f64| {
        blatzko_cauchy_from_b(mu, &Mat3::scalar(alpha))
            .map(|s| spherical_stress(&s))
            .unwrap_or(f64::NAN)
    };
    let ratio = alpha_max / alpha_min;
    let records: Vec<PressureScanRecord> = (0..n)
        .map(|i| {
            let alpha = if i == n - 1 {
                alpha_max
            } else {
                alpha_min * ratio.powf(i as f64 / (n - 1) as f64)
            };
            PressureScanRecord {
                alpha,
                spherical: t(alpha),
            }
        })
        .collect();
    let values: Vec<f64> = records.iter().map(|r| r.spherical).collect();
    let peak = interior_peak(&values);

    let mut summary = PressureScanSummary {
        is_monotone: is_monotone(&values),
        increasing_then_decreasing: peak.is_some_and(|p| unimodal_shape(&values, p)),
        alpha_star: None,
        spherical_max: None,
        collision_pair: None,
        collision_residual: None,
    };
    if let Some(p) = peak {
        let a_star = golden_max(t, records[p - 1].alpha, records[p + 1].alpha);
        let t_star = t(a_star);
        summary.alpha_star = Some(a_star);
        summary.spherical_max = Some(t_star);
        let level = 0.5 * t_star;
        if a_star > COLLISION_LEFT && a_star < COLLISION_RIGHT {
            let g = |a: f64| t(a) - level;
            if let (Some(a1), Some(a2)) = (bisect(g, COLLISION_LEFT, a_star), bisect(g, a_star, COLLISION_RIGHT)) {
                summary.collision_pair = Some((a1, a2));
                summary.collision_residual = Some((t(a1) - t(a2)).abs());
            }
        }
    }
    Ok(PressureScan { mu, records, summary })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PressurePoint {
    pub lambda: f64,
    pub spherical: f64,
    /// `⅓ tr σ(λ𝟙) · (λ − 1)`; `None` when `λ` is within tolerance of 1.
    pub product: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PressureCheck {
    pub model: String,
    pub points: Vec<PressurePoint>,
    pub skipped: usize,
    /// All evaluated products strictly positive.
    pub verdict: bool,
    /// `λ ↦ ⅓ tr σ(λ𝟙)` monotone over the (sorted) grid.
    pub spherical_monotone: bool,
    /// Refined interior maximum of the spherical stress, if the grid has one.
    pub interior_max: Option<f64>,
}

/// Pressure-compression sign condition `⅓ tr σ(λ𝟙) (λ − 1) > 0`.
pub fn pressure_compression_check(m: &dyn MaterialModel, lambda_values: &[f64]) -> Result<PressureCheck> {
    if let Some(bad) = lambda_values.iter().find(|l| !(**l > 0.0 && l.is_finite())) {
        return Err(domain(format!("stretch must be positive, got {bad}")));
    }
    let spherical = |l: f64| cauchy(m, &Mat3::scalar(l)).map(|s| spherical_stress(&s));
    let mut sorted = lambda_values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let points: Vec<PressurePoint> = sorted
        .iter()
        .map(|&lambda| {
            let sph = spherical(lambda)?;
            let product = ((lambda - 1.0).abs() > UNIT_STRETCH_TOL).then_some(sph * (lambda - 1.0));
            Ok(PressurePoint {
                lambda,
                spherical: sph,
                product,
            })
        })
        .collect::<Result<_>>()?;
    let skipped = points.iter().filter(|p| p.product.is_none()).count();
    let verdict = points.iter().filter_map(|p| p.product).all(|v| v > 0.0);
    let values: Vec<f64> = points.iter().map(|p| p.spherical).collect();
    let interior_max = interior_peak(&values).map(|k| {
        golden_max(
            |l| spherical(l).unwrap_or(f64::NEG_INFINITY),
            points[k - 1].lambda,
            points[k + 1].lambda,
        )
    });
    Ok(PressureCheck {
        model: m.name().to_string(),
        skipped,
        verdict,
        spherical_monotone: is_monotone(&values),
        interior_max,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::{BlatzKoUniConstant, CompressibleNeoHooke, Material, VolumetricCubic};
    use crate::tensor::{dyad, rank_one_factor};
    use approx::assert_relative_eq;

    fn e(i: usize) -> Vec3 {
        Vec3::unit(i)
    }

    #[test]
    fn identity_gap_zero_perturbation() {
        for name in Material::NAMES {
            let m = Material::with_defaults(name).unwrap();
            assert_eq!(
                theorem_identity_gap(&m, &Mat3::IDENTITY, &RankOnePerturbation::ZERO).unwrap(),
                0.0
            );
        }
    }

    #[test]
    fn identity_gap_is_roundoff_for_all_models() {
        let mut s = Sampler::new(Seed(41));
        for name in Material::NAMES {
            let m = Material::with_defaults(name).unwrap();
            for _ in 0..500 {
                let (f, p) = s.admissible_pair(0.4, 0.1, 1.5).unwrap();
                let gap = theorem_identity_gap(&m, &f, &p).unwrap();
                assert!(gap <= 1e-9 * m.stress_scale() * f.norm().powi(3), "{name}: {gap:e}");
            }
        }
    }

    #[test]
    fn volumetric_collision_zeroes_both_sides() {
        let vc = VolumetricCubic { c: 1.0 };
        let p = RankOnePerturbation::new(e(0).scale(2.0), e(0));
        let (lhs, rhs) = theorem_identity_sides(&vc, &Mat3::IDENTITY, &p).unwrap();
        assert!(lhs.abs() <= 1e-14);
        assert!(rhs.abs() <= 1e-14);
    }

    #[test]
    fn line_gap_examples() {
        let vc = VolumetricCubic { c: 1.0 };
        let p = RankOnePerturbation::new(e(0), e(0));
        let g = cauchy_gap_along_line(&vc, &Mat3::IDENTITY, &p, &[0.0, 2.0, -2.0]).unwrap();
        assert_eq!(g[0].gap, Some(0.0));
        assert!(g[1].gap.unwrap() <= 1e-15);
        assert_relative_eq!(p.scaled(2.0).amplitude(), 2.0, max_relative = 1e-15);
        assert_eq!(g[2].gap, None);

        let bk = BlatzKoUniConstant { mu: 1.0 };
        let mut s = Sampler::new(Seed(42));
        let svals: Vec<f64> = (1..=10).flat_map(|k| [k as f64 / 10.0, -(k as f64) / 10.0]).collect();
        for _ in 0..200 {
            let (f, p) = s.admissible_pair(0.4, 1.0, 1.0).unwrap();
            for lg in cauchy_gap_along_line(&bk, &f, &p, &svals).unwrap() {
                if let Some(gap) = lg.gap {
                    assert!(gap > 0.0);
                }
            }
        }
    }

    #[test]
    fn twin_examples() {
        let zero = twin_check(&Mat3::IDENTITY, &RankOnePerturbation::ZERO).unwrap();
        assert_eq!(zero.b_gap, 0.0);
        assert!(zero.verdict);
        // B̂ − B = e₁⊗e₂ + e₂⊗e₁ + e₁⊗e₁
        let t = twin_check(&Mat3::IDENTITY, &RankOnePerturbation::new(e(0), e(1))).unwrap();
        assert_relative_eq!(t.b_gap, 3f64.sqrt(), max_relative = 1e-15);
        assert!(t.verdict);
        assert!(twin_check(&Mat3::IDENTITY, &RankOnePerturbation::new(e(0).scale(-2.0), e(0))).is_err());
    }

    #[test]
    fn twin_det_examples() {
        assert_eq!(twin_det_contradiction(&Mat3::IDENTITY, &e(0)).unwrap(), -1.0);
        assert!(twin_det_contradiction(&Mat3::IDENTITY, &Vec3::ZERO).is_err());
        let mut s = Sampler::new(Seed(43));
        for _ in 0..1000 {
            let f = s.gl_plus(0.4).unwrap();
            let eta = s.unit_vec().scale(s.uniform(0.1, 3.0));
            let d = twin_det_contradiction(&f, &eta).unwrap();
            assert!((d + f.det()).abs() <= 1e-12 * f.det());
            // the B-preserving choice does preserve B
            let xi = f.mul_vec(&eta).scale(-2.0 / eta.norm_squared());
            let fh = f + dyad(&xi, &eta);
            assert!((fh * fh.transpose() - f * f.transpose()).norm() <= 1e-12 * (1.0 + f.norm_squared()));
        }
    }

    #[test]
    fn pressure_scan_examples() {
        let scan = blatzko_pressure_scan(1.0, 0.5, 8.0, 200).unwrap();
        let t = |a: f64| a.powf(-0.5) - a.powi(-3);
        assert_eq!(t(1.0), 0.0);
        assert_relative_eq!(t(4.0), 0.484375, max_relative = 1e-15);
        for r in &scan.records {
            assert_relative_eq!(r.spherical, t(r.alpha), max_relative = 1e-12, epsilon = 1e-14);
        }
        let s = &scan.summary;
        assert!(!s.is_monotone);
        assert!(s.increasing_then_decreasing);
        assert!((s.alpha_star.unwrap() - 6f64.powf(0.4)).abs() < 1e-6);
        let (a1, a2) = s.collision_pair.unwrap();
        assert!(a1 < a2 && s.collision_residual.unwrap() <= 1e-10);
        let diff = Mat3::scalar(a2.sqrt() - a1.sqrt());
        assert!(rank_one_factor(&diff).is_none());
    }

    #[test]
    fn pressure_scan_errors() {
        assert!(matches!(
            blatzko_pressure_scan(1.0, 0.0, 4.0, 10),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            blatzko_pressure_scan(1.0, 2.0, 1.0, 10),
            Err(Error::Domain(_))
        ));
        assert!(blatzko_pressure_scan(1.0, 1.0, 4.0, 2).is_err());
    }

    #[test]
    fn pressure_check_examples() {
        let grid = [0.2, 0.5, 2.0, 5.0];
        let nh = CompressibleNeoHooke { mu: 1.0, lambda: 1.0 };
        let r = pressure_compression_check(&nh, &grid).unwrap();
        assert!(r.verdict);
        // ⅓ tr σ(λ𝟙) = (μ(λ² − 1) + 3 λ_L ln λ) / λ³
        for p in &r.points {
            let l: f64 = p.lambda;
            assert_relative_eq!(
                p.spherical,
                ((l * l - 1.0) + 3.0 * l.ln()) / l.powi(3),
                max_relative = 1e-12
            );
        }

        let bk = BlatzKoUniConstant { mu: 1.0 };
        let r = pressure_compression_check(&bk, &grid).unwrap();
        assert!(r.verdict);
        for p in &r.points {
            let l: f64 = p.lambda;
            let expected = (1.0 / l - l.powi(-6)) * (l - 1.0);
            assert_relative_eq!(p.product.unwrap(), expected, max_relative = 1e-12);
        }
        assert!(!r.spherical_monotone);
        assert!((r.interior_max.unwrap() - 6f64.powf(0.2)).abs() < 1e-6);

        let r = pressure_compression_check(&bk, &[0.5, 1.0 + 1e-8, 2.0]).unwrap();
        assert_eq!(r.skipped, 1);
        assert!(r.verdict);
        assert!(matches!(
            pressure_compression_check(&bk, &[0.5, -1.0]),
            Err(Error::Domain(_))
        ));
    }

    fn small_search(seed: u64) -> ScanConfig {
        ScanConfig {
            seed: Seed(seed),
            search_n_f: 2,
            n_starts: 8,
            probe_f: vec![Mat3::IDENTITY],
            ..ScanConfig::default()
        }
    }

    #[test]
    fn search_finds_volumetric_collision() {
        let vc = VolumetricCubic { c: 1.0 };
        let r = injectivity_search(&vc, &small_search(3)).unwrap();
        assert_eq!(r.starts, 24);
        assert!(!r.certificates.is_empty());
        let c = r.certificates.iter().find(|c| c.f == Mat3::IDENTITY).unwrap();
        assert!(c.residual <= 1e-10);
        assert!(c.perturbation_norm >= MIN_CERTIFIED_NORM);
        // strict monotonicity fails exactly at the collision
        let gap = crate::convexity::monotonicity_gap(&vc, &c.f, &c.p).unwrap();
        assert!(gap.abs() <= 1e-8);
    }

    #[test]
    fn search_blatzko_has_no_certificates() {
        let bk = BlatzKoUniConstant { mu: 1.0 };
        let r = injectivity_search(&bk, &small_search(4)).unwrap();
        assert!(r.certificates.is_empty());
        assert!(r.min_residual_found.unwrap() > 1e-3);
        assert_eq!(r, injectivity_search(&bk, &small_search(4)).unwrap());
    }

    #[test]
    fn search_empty_amplitude_window() {
        let cfg = ScanConfig {
            s_max: 0.05,
            ..small_search(5)
        };
        let r = injectivity_search(&VolumetricCubic { c: 1.0 }, &cfg).unwrap();
        assert_eq!(r.starts, 0);
        assert!(r.certificates.is_empty());
    }
}
