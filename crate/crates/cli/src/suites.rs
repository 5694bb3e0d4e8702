//! Seeded suites run by the driver. Each suite is a pure function of its
//! inputs; parallel sections collect in index order so reports are
//! reproducible bit for bit.

use rayon::prelude::*;
use serde::Serialize;

use rank1lab_core::convexity::{
    ellipticity_scan, monotonicity_gap, noise_floor, second_derivative_step, EllipticityReport,
};
use rank1lab_core::injectivity::{
    blatzko_pressure_scan, injectivity_search, pressure_compression_check, theorem_identity_gap, twin_check,
    twin_det_contradiction, InjectivitySearchResult, PressureCheck, PressureScan,
};
use rank1lab_core::materials::{default_fd_step, piola_fd, EllipticityClass};
use rank1lab_core::tensor::{
    cof_directional_derivative, cof_rank_one_expansion, det_rank_one_update, dyad, dyad_compose, rank_one_factor,
};
use rank1lab_core::{Mat3, Material, MaterialModel, Result, Sampler, ScanConfig, Seed};

/// Relative tolerance for exact algebraic identities.
pub const IDENTITY_RTOL: f64 = 1e-11;
/// Relative tolerance for checks against finite differences.
pub const FD_RTOL: f64 = 1e-6;
/// `theorem_identity_gap ≤ THEOREM_RTOL · stress scale`.
pub const THEOREM_RTOL: f64 = 1e-9;
/// `|det(F + ξ⊗η) + det F| ≤ TWIN_DET_RTOL · det F`.
pub const TWIN_DET_RTOL: f64 = 1e-12;
pub const RICHARDSON_RANGE: (f64, f64) = (50.0, 200.0);

// stream offsets so the suites never share random numbers
const IDENTITY_STREAM: u64 = 0x1d;
const GRADIENT_STREAM: u64 = 0x6c;
const THEOREM_STREAM: u64 = 0x7e;
const TWIN_STREAM: u64 = 0x72;
const TWIN_DET_STREAM: u64 = 0x73;

/// Amplitude window for sampled rank-one perturbations.
const AMPLITUDE: (f64, f64) = (0.1, 1.0);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub samples: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn new(name: &str, samples: usize, max_error: f64, tolerance: f64) -> Check {
        Check {
            name: name.to_string(),
            samples,
            max_error,
            tolerance,
            pass: max_error <= tolerance,
        }
    }
}

fn max_of(rows: &[Vec<f64>], k: usize) -> f64 {
    rows.iter()
        .fold(0.0_f64, |m, r| if r[k] > m || r[k].is_nan() { r[k] } else { m })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentitySuite {
    pub samples: usize,
    pub checks: Vec<Check>,
    pub pass: bool,
}

const IDENTITY_NAMES: [(&str, f64); 8] = [
    ("cofactor_multiplicativity", IDENTITY_RTOL),
    ("adjugate", IDENTITY_RTOL),
    ("inverse_commutation", IDENTITY_RTOL),
    ("cofactor_expansion", IDENTITY_RTOL),
    ("cofactor_derivative_fd", FD_RTOL),
    ("det_rank_one_update", IDENTITY_RTOL),
    ("jump_identity", IDENTITY_RTOL),
    ("dyad_algebra", IDENTITY_RTOL),
];

fn identity_sample(seed: Seed, spread: f64) -> Result<Vec<f64>> {
    let mut s = Sampler::new(seed);
    let a = s.gl_plus(spread)?;
    let b = s.gl_plus(spread)?;
    let h = s.uniform_mat();
    let (f, p) = s.admissible_pair(spread, AMPLITUDE.0, AMPLITUDE.1)?;
    let (c, d) = (
        s.unit_vec().scale(s.uniform(0.5, 2.0)),
        s.unit_vec().scale(s.uniform(0.5, 2.0)),
    );

    let (cof_a, cof_b) = (a.cofactor(), b.cofactor());
    let mult = ((a * b).cofactor() - cof_a * cof_b).norm() / (cof_a.norm() * cof_b.norm());
    let adj = (a * cof_a.transpose() - Mat3::scalar(a.det())).norm() / (a.norm() * cof_a.norm());
    let cof_a_inv = cof_a.inverse()?;
    let commute = (a.inverse()?.cofactor() - cof_a_inv).norm() / cof_a_inv.norm();
    let expansion = ((Mat3::IDENTITY + h).cofactor() - cof_rank_one_expansion(&h)).norm() / (1.0 + h.norm()).powi(2);

    // Cof is quadratic, so the central difference is exact up to roundoff
    let t = 1e-4;
    let fd = ((f + h.scale(t)).cofactor() - (f - h.scale(t)).cofactor()).scale(0.5 / t);
    let deriv = cof_directional_derivative(&f, &h)?;
    let deriv_err = (fd - deriv).norm() / (f.norm() * h.norm());

    let f_hat = f + p.matrix();
    let det_scale = f.norm().max(f_hat.norm()).max(1.0).powi(3);
    let det_err = (f_hat.det() - det_rank_one_update(&f, &p)).abs() / det_scale;
    let jump = (f_hat.cofactor().mul_vec(&p.eta) - f.cofactor().mul_vec(&p.eta)).norm()
        / ((f.cofactor().norm() + f_hat.cofactor().norm()) * p.eta.norm());

    let (u, v) = (p.xi, p.eta);
    let size = u.norm() * v.norm() * c.norm() * d.norm();
    let dyad_err = [
        (dyad(&u, &v) * dyad(&c, &d) - dyad_compose(&u, &v, &c, &d)).norm() / size,
        (dyad(&u, &v).transpose() - dyad(&v, &u)).norm() / (u.norm() * v.norm()),
        (dyad(&u, &v).mul_vec(&c) - u.scale(v.dot(&c))).norm() / (u.norm() * v.norm() * c.norm()),
        (dyad(&u, &v).inner(&dyad(&c, &d)) - u.dot(&c) * v.dot(&d)).abs() / size,
    ]
    .into_iter()
    .fold(0.0, f64::max);

    Ok(vec![mult, adj, commute, expansion, deriv_err, det_err, jump, dyad_err])
}

/// Exact tensor identities over `n` seeded samples.
pub fn identity_suite(seed: Seed, spread: f64, n: usize) -> Result<IdentitySuite> {
    let stream = seed.derive(IDENTITY_STREAM);
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| identity_sample(stream.derive(i as u64), spread))
        .collect::<Result<_>>()?;
    let checks: Vec<Check> = IDENTITY_NAMES
        .iter()
        .enumerate()
        .map(|(k, (name, tol))| Check::new(name, n, max_of(&rows, k), *tol))
        .collect();
    Ok(IdentitySuite {
        samples: n,
        pass: checks.iter().all(|c| c.pass),
        checks,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradientCheck {
    pub model: String,
    pub samples: usize,
    /// `max ‖S₁ᶠᵈ − S₁‖ / (‖S₁‖ + scale)` at the default step.
    pub max_rel_error: f64,
    pub tolerance: f64,
    /// `Σ err(h = 1e-3) / Σ err(h = 1e-4)` over the samples.
    pub richardson_ratio: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradientSuite {
    pub models: Vec<GradientCheck>,
    pub pass: bool,
}

pub fn gradient_suite(models: &[Material], seed: Seed, spread: f64, n: usize) -> Result<GradientSuite> {
    let stream = seed.derive(GRADIENT_STREAM);
    let fs: Vec<Mat3> = (0..n)
        .map(|i| Sampler::new(stream.derive(i as u64)).gl_plus(spread))
        .collect::<Result<_>>()?;
    let checks = models
        .iter()
        .map(|m| {
            let rows: Vec<[f64; 3]> = fs
                .par_iter()
                .map(|f| {
                    let an = m.piola(f)?;
                    let rel = (piola_fd(m, f, default_fd_step(f))? - an).norm() / (an.norm() + m.stress_scale());
                    let e3 = (piola_fd(m, f, 1e-3)? - an).norm();
                    let e4 = (piola_fd(m, f, 1e-4)? - an).norm();
                    Ok([rel, e3, e4])
                })
                .collect::<Result<_>>()?;
            let max_rel_error = rows.iter().fold(0.0_f64, |a, r| a.max(r[0]));
            let (s3, s4) = rows.iter().fold((0.0, 0.0), |(a, b), r| (a + r[1], b + r[2]));
            let richardson_ratio = s3 / s4;
            Ok(GradientCheck {
                model: m.name().to_string(),
                samples: n,
                max_rel_error,
                tolerance: FD_RTOL,
                richardson_ratio,
                pass: max_rel_error <= FD_RTOL && (RICHARDSON_RANGE.0..=RICHARDSON_RANGE.1).contains(&richardson_ratio),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GradientSuite {
        pass: checks.iter().all(|c| c.pass),
        models: checks,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremGap {
    pub model: String,
    pub samples: usize,
    /// `max gap / stress scale`.
    pub max_scaled_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremSuite {
    pub samples: usize,
    pub tolerance: f64,
    pub models: Vec<TheoremGap>,
    pub pass: bool,
}

/// The rank-one identity between Piola and Cauchy differences, sampled
/// round-robin over `models`.
pub fn theorem_suite(models: &[Material], seed: Seed, spread: f64, n: usize) -> Result<TheoremSuite> {
    let stream = seed.derive(THEOREM_STREAM);
    let gaps: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let m = &models[i % models.len()];
            let (f, p) = Sampler::new(stream.derive(i as u64)).admissible_pair(spread, AMPLITUDE.0, AMPLITUDE.1)?;
            Ok(theorem_identity_gap(m, &f, &p)? / m.stress_scale())
        })
        .collect::<Result<_>>()?;
    let per_model: Vec<TheoremGap> = models
        .iter()
        .enumerate()
        .map(|(k, m)| {
            let mine: Vec<f64> = gaps.iter().skip(k).step_by(models.len()).copied().collect();
            TheoremGap {
                model: m.name().to_string(),
                samples: mine.len(),
                max_scaled_gap: mine.iter().fold(0.0, |a: f64, &g| a.max(g)),
            }
        })
        .collect();
    Ok(TheoremSuite {
        samples: n,
        tolerance: THEOREM_RTOL,
        pass: per_model.iter().all(|g| g.max_scaled_gap <= THEOREM_RTOL),
        models: per_model,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwinSuite {
    pub samples: usize,
    pub failed_verdicts: usize,
    pub min_b_gap: f64,
    /// `min b_gap / ‖ξ⊗η‖`.
    pub min_gap_ratio: f64,
    pub det_samples: usize,
    /// `max |det(F + ξ⊗η) + det F| / det F`.
    pub det_max_rel_error: f64,
    pub det_tolerance: f64,
    pub pass: bool,
}

pub fn twin_suite(seed: Seed, spread: f64, n: usize, n_det: usize) -> Result<TwinSuite> {
    let stream = seed.derive(TWIN_STREAM);
    let rows: Vec<(bool, f64, f64)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let (f, p) = Sampler::new(stream.derive(i as u64)).admissible_pair(spread, AMPLITUDE.0, AMPLITUDE.1)?;
            let t = twin_check(&f, &p)?;
            Ok((t.verdict, t.b_gap, t.b_gap / t.perturbation_norm))
        })
        .collect::<Result<_>>()?;
    let det_stream = seed.derive(TWIN_DET_STREAM);
    let det_errs: Vec<f64> = (0..n_det)
        .into_par_iter()
        .map(|i| {
            let mut s = Sampler::new(det_stream.derive(i as u64));
            let f = s.gl_plus(spread)?;
            let eta = s.unit_vec().scale(s.uniform(0.5, 2.0));
            let d = twin_det_contradiction(&f, &eta)?;
            Ok((d + f.det()).abs() / f.det())
        })
        .collect::<Result<_>>()?;

    let failed_verdicts = rows.iter().filter(|r| !r.0).count();
    let min_b_gap = rows.iter().fold(f64::INFINITY, |a, r| a.min(r.1));
    let min_gap_ratio = rows.iter().fold(f64::INFINITY, |a, r| a.min(r.2));
    let det_max_rel_error = det_errs.iter().fold(0.0, |a: f64, &e| a.max(e));
    Ok(TwinSuite {
        samples: n,
        failed_verdicts,
        min_b_gap,
        min_gap_ratio,
        det_samples: n_det,
        det_max_rel_error,
        det_tolerance: TWIN_DET_RTOL,
        pass: failed_verdicts == 0
            && min_gap_ratio > rank1lab_core::injectivity::TWIN_TOL
            && det_max_rel_error <= TWIN_DET_RTOL,
    })
}

/// Whether a finding of the given kind contradicts the declared class.
fn contradicts(class: Option<EllipticityClass>, found: bool) -> bool {
    found && class == Some(EllipticityClass::StrictlyElliptic)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EllipticitySuite {
    pub declared_class: Option<EllipticityClass>,
    #[serde(flatten)]
    pub report: EllipticityReport,
    pub consistent: bool,
}

pub fn ellipticity_suite(m: &Material, scan: &ScanConfig) -> Result<EllipticitySuite> {
    let report = ellipticity_scan(m, scan)?;
    let class = m.ellipticity_class();
    Ok(EllipticitySuite {
        declared_class: class,
        consistent: !contradicts(class, report.violation_count > 0),
        report,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InjectivitySuite {
    pub model: String,
    pub declared_class: Option<EllipticityClass>,
    pub theorem_identity: TheoremSuite,
    pub search: InjectivitySearchResult,
    /// Piola monotonicity gap at the best collision found, with its noise floor.
    pub monotonicity_gap_at_best: Option<f64>,
    pub noise_floor_at_best: Option<f64>,
    pub consistent: bool,
}

impl InjectivitySuite {
    pub fn violations(&self) -> bool {
        !self.search.certificates.is_empty() || !self.theorem_identity.pass
    }
}

pub fn injectivity_suite(m: &Material, scan: &ScanConfig, theorem_n: usize) -> Result<InjectivitySuite> {
    let theorem = theorem_suite(std::slice::from_ref(m), scan.seed, scan.spread, theorem_n)?;
    let search = injectivity_search(m, scan)?;
    let (gap, floor) = match &search.best {
        Some(c) => (
            Some(monotonicity_gap(m, &c.f, &c.p)?),
            Some(noise_floor(m, &c.f, second_derivative_step(&c.f))),
        ),
        None => (None, None),
    };
    let class = m.ellipticity_class();
    Ok(InjectivitySuite {
        model: m.name().to_string(),
        declared_class: class,
        consistent: theorem.pass && !contradicts(class, !search.certificates.is_empty()),
        theorem_identity: theorem,
        search,
        monotonicity_gap_at_best: gap,
        noise_floor_at_best: floor,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlatzKoSuite {
    pub mu: f64,
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub grid_points: usize,
    #[serde(flatten)]
    pub summary: rank1lab_core::injectivity::PressureScanSummary,
    /// Whether `√α₂ 𝟙 − √α₁ 𝟙` for the collision pair is rank-one.
    pub collision_rank_one: Option<bool>,
    #[serde(skip)]
    pub scan: PressureScan,
}

pub fn blatzko_suite(mu: f64, alpha_min: f64, alpha_max: f64, n: usize) -> Result<BlatzKoSuite> {
    let scan = blatzko_pressure_scan(mu, alpha_min, alpha_max, n)?;
    let collision_rank_one = scan
        .summary
        .collision_pair
        .map(|(a1, a2)| rank_one_factor(&(Mat3::scalar(a2.sqrt()) - Mat3::scalar(a1.sqrt()))).is_some());
    Ok(BlatzKoSuite {
        mu,
        alpha_min,
        alpha_max,
        grid_points: n,
        summary: scan.summary.clone(),
        collision_rank_one,
        scan,
    })
}

/// Log-uniform grid on `[lo, hi]` with exact endpoints.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo * (hi / lo).powf(i as f64 / (n - 1) as f64)
            }
        })
        .collect()
}

pub fn pressure_suite(m: &Material, lo: f64, hi: f64, n: usize) -> Result<PressureCheck> {
    pressure_compression_check(m, &log_grid(lo, hi, n))
}
