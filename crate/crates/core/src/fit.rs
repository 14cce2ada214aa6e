//! Scaling-law fits of an entropy profile and AIC model selection.
//!
//! Two models are fitted to the points `(eps, I)`:
//!
//! ```text
//! deng:       I(eps) = d log(eps) + beta
//! dsummable:  I(eps) = (d log(eps) + beta) * eps^(1 - nu)
//! ```
//!
//! The second reduces to the first at `nu = 1`. `d` is the reported
//! dimension. The base of `log(eps)` is configurable; `eps^(1 - nu)` is a
//! plain power and does not depend on it.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::profile::{EntropyProfile, Provenance, MIN_POINTS};

/// Parameters of the coarse start grid over `nu`: `-10.0, -9.5, ..., 1.5`.
pub const NU_GRID_MIN: f64 = -10.0;
pub const NU_GRID_STEP: f64 = 0.5;
pub const NU_GRID_LEN: usize = 24;

pub const MAX_ITERATIONS: usize = 500;
pub const RELATIVE_RSS_TOLERANCE: f64 = 1e-12;

/// Refinement starts from this many of the best local minima of a finer
/// scan of the grid range, not just the global one.
const GRID_STARTS: usize = 3;
const NU_SCAN_SUBDIVISIONS: usize = 10;

/// Two models fit equally well when their AIC differ by less than this.
pub const AIC_TIE_THRESHOLD: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LogBase {
    #[default]
    E,
    Two,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::E => x.ln(),
            LogBase::Two => x.log2(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LogBase::E => "e",
            LogBase::Two => "2",
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "e" | "ln" => Ok(LogBase::E),
            "2" => Ok(LogBase::Two),
            other => Err(Error::Config(format!("unknown log base {other:?}, expected e or 2"))),
        }
    }
}

impl Serialize for LogBase {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Deng,
    Dsummable,
}

impl Model {
    /// Number of fitted parameters, not counting the noise variance.
    pub fn parameter_count(self) -> usize {
        match self {
            Model::Deng => 2,
            Model::Dsummable => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Model::Deng => "deng",
            Model::Dsummable => "dsummable",
        }
    }
}

pub fn deng_prediction(d: f64, beta: f64, epsilon: f64, base: LogBase) -> f64 {
    d * base.log(epsilon) + beta
}

pub fn dsummable_prediction(d: f64, beta: f64, nu: f64, epsilon: f64, base: LogBase) -> f64 {
    (d * base.log(epsilon) + beta) * epsilon.powf(1.0 - nu)
}

fn serialize_aic<S: Serializer>(aic: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if aic.is_finite() {
        s.serialize_f64(*aic)
    } else {
        s.serialize_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub model: Model,
    pub d: f64,
    pub beta: f64,
    pub nu: Option<f64>,
    pub rss: f64,
    pub n: usize,
    pub k: usize,
    /// `None` when the profile is flat (zero total sum of squares).
    pub r2_adj: Option<f64>,
    /// `-inf` for an exact fit; serialized as `null` next to `exact_fit`.
    #[serde(serialize_with = "serialize_aic")]
    pub aic: f64,
    pub exact_fit: bool,
    /// Small-sample AIC; `None` when `n <= k + 2`.
    pub aicc: Option<f64>,
    pub log_base: LogBase,
    #[serde(skip)]
    pub provenance: Provenance,
}

impl FitResult {
    pub fn predict(&self, epsilon: f64) -> f64 {
        match self.nu {
            None => deng_prediction(self.d, self.beta, epsilon, self.log_base),
            Some(nu) => dsummable_prediction(self.d, self.beta, nu, epsilon, self.log_base),
        }
    }
}

/// Gaussian least-squares AIC, `n ln(rss / n) + 2 (k + 1)`, where the extra
/// parameter is the noise variance. An exact fit gives `-inf`.
pub fn aic(rss: f64, n: usize, k: usize) -> Result<f64> {
    if n <= k {
        return Err(Error::DegreesOfFreedom { n, k });
    }
    if rss.is_nan() || rss < 0.0 {
        return Err(Error::Domain(format!("invalid residual sum of squares {rss}")));
    }
    if rss == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let n_f = n as f64;
    Ok(n_f * (rss / n_f).ln() + 2.0 * (k as f64 + 1.0))
}

/// AIC with the small-sample correction; needs `n > k + 2`.
pub fn aicc(rss: f64, n: usize, k: usize) -> Option<f64> {
    let p = k as f64 + 1.0;
    let value = aic(rss, n, k).ok()?;
    (n > k + 2).then(|| value + 2.0 * p * (p + 1.0) / (n as f64 - p - 1.0))
}

pub fn r2_adj(rss: f64, tss: f64, n: usize, k: usize) -> Result<f64> {
    if n <= k || n < 2 {
        return Err(Error::DegreesOfFreedom { n, k });
    }
    if tss.is_nan() || tss <= 0.0 {
        return Err(Error::Domain("total sum of squares is zero".into()));
    }
    Ok(1.0 - (rss / (n - k) as f64) / (tss / (n - 1) as f64))
}

struct Data {
    epsilons: Vec<f64>,
    logs: Vec<f64>,
    ln_eps: Vec<f64>,
    values: Vec<f64>,
}

impl Data {
    fn new(profile: &EntropyProfile, base: LogBase) -> Result<Self> {
        profile.validate()?;
        if profile.points.len() < MIN_POINTS {
            return Err(Error::Fit(format!(
                "{} points, need at least {MIN_POINTS}",
                profile.points.len()
            )));
        }
        let epsilons: Vec<f64> = profile.points.iter().map(|p| p.epsilon as f64).collect();
        Ok(Data {
            logs: epsilons.iter().map(|&e| base.log(e)).collect(),
            ln_eps: epsilons.iter().map(|&e| e.ln()).collect(),
            values: profile.entropies(),
            epsilons,
        })
    }

    fn tss(&self) -> f64 {
        let mean = self.values.iter().sum::<f64>() / self.values.len() as f64;
        self.values.iter().map(|y| (y - mean).powi(2)).sum()
    }
}

fn finish(
    model: Model,
    (d, beta, nu): (f64, f64, Option<f64>),
    rss: f64,
    data: &Data,
    profile: &EntropyProfile,
    base: LogBase,
) -> Result<FitResult> {
    let n = data.values.len();
    let k = model.parameter_count();
    let aic_value = aic(rss, n, k)?;
    Ok(FitResult {
        model,
        d,
        beta,
        nu,
        rss,
        n,
        k,
        r2_adj: r2_adj(rss, data.tss(), n, k).ok(),
        aic: aic_value,
        exact_fit: rss == 0.0,
        aicc: aicc(rss, n, k),
        log_base: base,
        provenance: profile.provenance(),
    })
}

/// Ordinary least squares of entropy on `log(eps)`.
pub fn fit_deng(profile: &EntropyProfile, base: LogBase) -> Result<FitResult> {
    let data = Data::new(profile, base)?;
    let n = data.logs.len() as f64;
    let x_mean = data.logs.iter().sum::<f64>() / n;
    let y_mean = data.values.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (x, y) in data.logs.iter().zip(&data.values) {
        sxx += (x - x_mean) * (x - x_mean);
        sxy += (x - x_mean) * (y - y_mean);
    }
    if sxx.is_nan() || sxx <= 0.0 {
        return Err(Error::Fit("all box diameters share the same logarithm".into()));
    }
    let d = sxy / sxx;
    let beta = y_mean - d * x_mean;
    let rss = data
        .logs
        .iter()
        .zip(&data.values)
        .map(|(x, y)| (d * x + beta - y).powi(2))
        .sum();
    finish(Model::Deng, (d, beta, None), rss, &data, profile, base)
}

/// A point of the dsummable parameter space with its residual sum of squares.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DsummableStart {
    pub d: f64,
    pub beta: f64,
    pub nu: f64,
    pub rss: f64,
}

/// For a fixed `nu` the dsummable model is linear in `(d, beta)`; solve it.
pub fn solve_fixed_nu(profile: &EntropyProfile, base: LogBase, nu: f64) -> Result<DsummableStart> {
    let data = Data::new(profile, base)?;
    solve_linear_at(&data, nu)
}

fn solve_linear_at(data: &Data, nu: f64) -> Result<DsummableStart> {
    let n = data.values.len();
    let weights: Vec<f64> = data.epsilons.iter().map(|e| e.powf(1.0 - nu)).collect();
    let col_d: Vec<f64> = data.logs.iter().zip(&weights).map(|(x, w)| x * w).collect();
    // scale columns to unit norm so the solve does not depend on eps^(1-nu)
    let norm = |c: &[f64]| c.iter().map(|v| v * v).sum::<f64>().sqrt();
    let (sd, sb) = (norm(&col_d), norm(&weights));
    if !(sd.is_finite() && sb.is_finite()) || sd == 0.0 || sb == 0.0 {
        return Err(Error::Domain(format!("design matrix overflows at nu = {nu}")));
    }
    let a = DMatrix::from_fn(n, 2, |i, j| if j == 0 { col_d[i] / sd } else { weights[i] / sb });
    let y = DVector::from_column_slice(&data.values);
    let coef = a
        .svd(true, true)
        .solve(&y, 1e-14)
        .map_err(|e| Error::Fit(format!("linear solve failed at nu = {nu}: {e}")))?;
    let (d, beta) = (coef[0] / sd, coef[1] / sb);
    let rss = residuals(data, d, beta, nu)?.iter().map(|r| r * r).sum();
    Ok(DsummableStart { d, beta, nu, rss })
}

fn residuals(data: &Data, d: f64, beta: f64, nu: f64) -> Result<Vec<f64>> {
    let out: Vec<f64> = data
        .logs
        .iter()
        .zip(&data.epsilons)
        .zip(&data.values)
        .map(|((x, e), y)| (d * x + beta) * e.powf(1.0 - nu) - y)
        .collect();
    if out.iter().all(|r| r.is_finite()) {
        Ok(out)
    } else {
        Err(Error::Domain(format!(
            "non-finite residual at d = {d}, beta = {beta}, nu = {nu}"
        )))
    }
}

pub fn nu_grid() -> impl Iterator<Item = f64> {
    (0..NU_GRID_LEN).map(|i| NU_GRID_MIN + NU_GRID_STEP * i as f64)
}

/// The grid with every step split into `NU_SCAN_SUBDIVISIONS`; contains every
/// grid value exactly.
fn nu_scan() -> impl Iterator<Item = f64> {
    let len = (NU_GRID_LEN - 1) * NU_SCAN_SUBDIVISIONS + 1;
    (0..len).map(|i| NU_GRID_MIN + NU_GRID_STEP * i as f64 / NU_SCAN_SUBDIVISIONS as f64)
}

/// Exact `(d, beta)` solutions on the `nu` grid, in grid order.
pub fn grid_search(profile: &EntropyProfile, base: LogBase) -> Result<Vec<DsummableStart>> {
    let data = Data::new(profile, base)?;
    nu_grid().map(|nu| solve_linear_at(&data, nu)).collect()
}

enum Refinement {
    Converged(DsummableStart),
    Exhausted(DsummableStart),
}

/// Levenberg-Marquardt with the analytic Jacobian and Marquardt scaling.
fn refine(data: &Data, start: DsummableStart) -> Result<Refinement> {
    let mut p = Vector3::new(start.d, start.beta, start.nu);
    let mut r = residuals(data, p[0], p[1], p[2])?;
    let mut rss: f64 = r.iter().map(|v| v * v).sum();
    let mut lambda = 1e-3;
    let scale = data.values.iter().map(|v| v * v).sum::<f64>().max(f64::MIN_POSITIVE);
    for _ in 0..MAX_ITERATIONS {
        if rss <= scale * 1e-30 {
            return Ok(Refinement::Converged(point(p, rss)));
        }
        let mut jtj = Matrix3::zeros();
        let mut jtr = Vector3::zeros();
        for (((&x, &e), &ln_e), &ri) in data.logs.iter().zip(&data.epsilons).zip(&data.ln_eps).zip(&r) {
            let w = e.powf(1.0 - p[2]);
            let row = Vector3::new(x * w, w, -(p[0] * x + p[1]) * w * ln_e);
            jtj += row * row.transpose();
            jtr += row * ri;
        }
        let diag_floor = jtj.diagonal().max() * 1e-15;
        loop {
            let mut damped = jtj;
            for j in 0..3 {
                damped[(j, j)] += lambda * jtj[(j, j)].max(diag_floor);
            }
            let step = damped.lu().solve(&(-jtr));
            let candidate = step.map(|s| p + s);
            let trial = candidate.and_then(|c| residuals(data, c[0], c[1], c[2]).ok().map(|r| (c, r)));
            if let Some((c, new_r)) = trial {
                let new_rss: f64 = new_r.iter().map(|v| v * v).sum();
                if new_rss < rss {
                    let relative = (rss - new_rss) / rss;
                    p = c;
                    r = new_r;
                    rss = new_rss;
                    lambda = (lambda / 10.0).max(1e-12);
                    if relative < RELATIVE_RSS_TOLERANCE {
                        return Ok(Refinement::Converged(point(p, rss)));
                    }
                    break;
                }
            }
            lambda *= 10.0;
            if lambda > 1e16 {
                // no descent direction left: a stationary point
                return Ok(Refinement::Converged(point(p, rss)));
            }
        }
    }
    Ok(Refinement::Exhausted(point(p, rss)))
}

fn point(p: Vector3<f64>, rss: f64) -> DsummableStart {
    DsummableStart {
        d: p[0],
        beta: p[1],
        nu: p[2],
        rss,
    }
}

/// Local minima of the grid RSS, best first; ties keep the lower `nu`.
fn grid_starts(grid: &[DsummableStart]) -> Vec<DsummableStart> {
    let mut minima: Vec<(usize, DsummableStart)> = grid
        .iter()
        .enumerate()
        .filter(|&(i, s)| {
            let left = i == 0 || grid[i - 1].rss >= s.rss;
            let right = i + 1 == grid.len() || grid[i + 1].rss >= s.rss;
            left && right
        })
        .map(|(i, s)| (i, *s))
        .collect();
    minima.sort_by(|a, b| a.1.rss.total_cmp(&b.1.rss).then(a.0.cmp(&b.0)));
    minima.truncate(GRID_STARTS);
    minima.into_iter().map(|(_, s)| s).collect()
}

/// Nonlinear least squares of the dsummable model over `(d, beta, nu)`.
///
/// The `nu` grid gives exact linear solutions; the best local minima seed a
/// Levenberg-Marquardt refinement of all three parameters and the lowest
/// final RSS wins. The result never has a larger RSS than the best grid
/// point.
pub fn fit_dsummable(profile: &EntropyProfile, base: LogBase) -> Result<FitResult> {
    let data = Data::new(profile, base)?;
    let grid: Vec<DsummableStart> = nu_grid().map(|nu| solve_linear_at(&data, nu)).collect::<Result<_>>()?;
    let best_grid = grid_starts(&grid)[0];
    // narrow wells of the profiled RSS can sit between grid values
    let scan: Vec<DsummableStart> = nu_scan().map(|nu| solve_linear_at(&data, nu)).collect::<Result<_>>()?;
    let starts = grid_starts(&scan);
    let mut best: Option<DsummableStart> = None;
    let mut converged = false;
    for start in starts {
        // an exhausted run still ends below its start
        let found = match refine(&data, start)? {
            Refinement::Converged(found) => {
                converged = true;
                found
            }
            Refinement::Exhausted(found) => found,
        };
        if best.is_none_or(|b| found.rss < b.rss) {
            best = Some(found);
        }
    }
    let (true, Some(best)) = (converged, best) else {
        return Err(Error::NonConvergence {
            iterations: MAX_ITERATIONS,
            grid_d: best_grid.d,
            grid_beta: best_grid.beta,
            grid_nu: best_grid.nu,
            grid_rss: best_grid.rss,
        });
    };
    finish(
        Model::Dsummable,
        (best.d, best.beta, Some(best.nu)),
        best.rss,
        &data,
        profile,
        base,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Selection {
    Deng,
    Dsummable,
    Tie,
}

impl From<Model> for Selection {
    fn from(m: Model) -> Self {
        match m {
            Model::Deng => Selection::Deng,
            Model::Dsummable => Selection::Dsummable,
        }
    }
}

impl Selection {
    pub fn as_str(self) -> &'static str {
        match self {
            Selection::Deng => "deng",
            Selection::Dsummable => "dsummable",
            Selection::Tie => "tie",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelComparison {
    pub fits: [FitResult; 2],
    /// `-inf` when some model fits exactly.
    pub aic_min: f64,
    /// `AIC_i - AIC_min`, aligned with `fits`.
    pub delta_aic: [f64; 2],
    pub selected: Selection,
}

impl ModelComparison {
    pub fn fit(&self, model: Model) -> Option<&FitResult> {
        self.fits.iter().find(|f| f.model == model)
    }

    pub fn delta_for(&self, model: Model) -> Option<f64> {
        self.fits
            .iter()
            .zip(self.delta_aic)
            .find(|(f, _)| f.model == model)
            .map(|(_, d)| d)
    }
}

/// Computes both `AIC_i - AIC_min` and picks a model, or a tie when the
/// larger difference is below [`AIC_TIE_THRESHOLD`]. When both fits are
/// exact, the difference falls back to the parameter penalty `2 (k_i - k_min)`.
pub fn compare(first: FitResult, second: FitResult) -> Result<ModelComparison> {
    if first.provenance != second.provenance {
        return Err(Error::Comparison(format!(
            "fits come from different profiles ({:?} vs {:?})",
            first.provenance.network, second.provenance.network
        )));
    }
    if first.log_base != second.log_base {
        return Err(Error::Comparison("fits use different log bases".into()));
    }
    if first.model == second.model {
        return Err(Error::Comparison(format!("both fits use the {} model", first.model.as_str())));
    }
    let (a, b) = (first.aic, second.aic);
    let (aic_min, delta_aic) = match (a.is_finite(), b.is_finite()) {
        (true, true) => {
            let m = a.min(b);
            (m, [a - m, b - m])
        }
        (false, true) => (a, [0.0, f64::INFINITY]),
        (true, false) => (b, [f64::INFINITY, 0.0]),
        (false, false) => {
            let k_min = first.k.min(second.k);
            (
                f64::NEG_INFINITY,
                [2.0 * (first.k - k_min) as f64, 2.0 * (second.k - k_min) as f64],
            )
        }
    };
    let selected = if delta_aic[0].max(delta_aic[1]) < AIC_TIE_THRESHOLD {
        Selection::Tie
    } else if delta_aic[0] == 0.0 {
        first.model.into()
    } else {
        second.model.into()
    };
    Ok(ModelComparison {
        fits: [first, second],
        aic_min,
        delta_aic,
        selected,
    })
}

/// Fits both models to `profile` and compares them.
pub fn fit_and_compare(profile: &EntropyProfile, base: LogBase) -> Result<ModelComparison> {
    compare(fit_deng(profile, base)?, fit_dsummable(profile, base)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn profile_from(f: impl Fn(f64) -> f64, epsilons: impl Iterator<Item = u32>) -> EntropyProfile {
        let points: Vec<(u32, f64)> = epsilons.map(|e| (e, f(e as f64))).collect();
        EntropyProfile::from_points("synthetic", &points).unwrap()
    }

    fn fake_fit(model: Model, aic_value: f64) -> FitResult {
        FitResult {
            model,
            d: 0.0,
            beta: 0.0,
            nu: None,
            rss: 1.0,
            n: 10,
            k: model.parameter_count(),
            r2_adj: None,
            aic: aic_value,
            exact_fit: aic_value == f64::NEG_INFINITY,
            aicc: None,
            log_base: LogBase::E,
            provenance: Provenance {
                network: "n".into(),
                mode: Default::default(),
                seed: 0,
                repetitions: 1,
                epsilons: vec![2, 3, 4, 5],
            },
        }
    }

    #[test]
    fn deng_recovers_noiseless_line() {
        let p = profile_from(|e| 3.0 * e.ln() + 10.0, 2..12);
        let fit = fit_deng(&p, LogBase::E).unwrap();
        assert_relative_eq!(fit.d, 3.0, epsilon = 1e-12);
        assert_relative_eq!(fit.beta, 10.0, epsilon = 1e-12);
        assert!(fit.rss < 1e-24);
        assert_eq!(fit.nu, None);
    }

    #[test]
    fn deng_constant_profile() {
        let p = profile_from(|_| 7.5, 2..8);
        let fit = fit_deng(&p, LogBase::Two).unwrap();
        assert_eq!(fit.d, 0.0);
        assert_relative_eq!(fit.beta, 7.5);
        assert_eq!(fit.r2_adj, None);
        assert!(fit.exact_fit);
        assert_eq!(fit.aic, f64::NEG_INFINITY);
    }

    #[test]
    fn log_base_rescales_deng_slope() {
        let p = profile_from(|e| 2.0 * e.ln() + 1.0 + 0.01 * (e * 7.0).sin(), 2..10);
        let natural = fit_deng(&p, LogBase::E).unwrap();
        let binary = fit_deng(&p, LogBase::Two).unwrap();
        assert_relative_eq!(binary.d, natural.d * std::f64::consts::LN_2, epsilon = 1e-12);
        assert_relative_eq!(binary.rss, natural.rss, epsilon = 1e-9);
    }

    #[test]
    fn too_few_points() {
        let p = profile_from(|e| e, 2..5);
        assert!(matches!(fit_deng(&p, LogBase::E), Err(Error::Fit(_))));
        assert!(matches!(fit_dsummable(&p, LogBase::E), Err(Error::Fit(_))));
    }

    #[test]
    fn dsummable_recovers_noiseless_curve() {
        let p = profile_from(|e| (2.0 * e.ln() + 5.0) * e.powf(1.0 - 0.4), 2..16);
        let fit = fit_dsummable(&p, LogBase::E).unwrap();
        assert_relative_eq!(fit.d, 2.0, epsilon = 1e-7);
        assert_relative_eq!(fit.beta, 5.0, epsilon = 1e-7);
        assert_relative_eq!(fit.nu.unwrap(), 0.4, epsilon = 1e-8);
        assert!(fit.rss < 1e-12);
    }

    #[test]
    fn dsummable_on_a_line_reduces_to_deng() {
        let p = profile_from(|e| 4.0 * e.ln() - 1.0, 2..10);
        let grid = grid_search(&p, LogBase::E).unwrap();
        let at_one = grid.iter().find(|s| s.nu == 1.0).unwrap();
        let deng = fit_deng(&p, LogBase::E).unwrap();
        assert_relative_eq!(at_one.d, deng.d, epsilon = 1e-10);
        assert_relative_eq!(at_one.beta, deng.beta, epsilon = 1e-10);
        let fit = fit_dsummable(&p, LogBase::E).unwrap();
        assert_relative_eq!(fit.nu.unwrap(), 1.0, epsilon = 1e-8);
    }

    #[test]
    fn grid_covers_expected_range() {
        let grid: Vec<f64> = nu_grid().collect();
        assert_eq!(grid.first(), Some(&-10.0));
        assert_eq!(grid.last(), Some(&1.5));
        assert!(grid.contains(&1.0));
    }

    #[test]
    fn refined_rss_never_exceeds_grid() {
        let p = profile_from(|e| 3.0 + 0.2 * e * e - (e * 1.3).cos(), 2..9);
        let best_grid = grid_search(&p, LogBase::E)
            .unwrap()
            .into_iter()
            .map(|s| s.rss)
            .fold(f64::INFINITY, f64::min);
        let fit = fit_dsummable(&p, LogBase::E).unwrap();
        assert!(fit.rss <= best_grid);
    }

    #[test]
    fn aic_arithmetic() {
        assert_eq!(aic(0.0, 5, 2).unwrap(), f64::NEG_INFINITY);
        let a2 = aic(3.0, 10, 2).unwrap();
        let a3 = aic(3.0, 10, 3).unwrap();
        assert_relative_eq!(a3 - a2, 2.0);
        assert_relative_eq!(a2, 10.0 * (0.3f64).ln() + 6.0);
        assert!(matches!(aic(1.0, 3, 3), Err(Error::DegreesOfFreedom { .. })));
        assert!(aic(1.0, 4, 3).is_ok());
        assert_eq!(aicc(1.0, 5, 3), None);
        assert_relative_eq!(aicc(1.0, 10, 2).unwrap(), aic(1.0, 10, 2).unwrap() + 24.0 / 6.0);
    }

    #[test]
    fn r2_adj_arithmetic() {
        assert_relative_eq!(r2_adj(1.0, 10.0, 10, 2).unwrap(), 1.0 - (1.0 / 8.0) / (10.0 / 9.0));
        assert!(r2_adj(1.0, 0.0, 10, 2).is_err());
        assert!(r2_adj(1.0, 1.0, 2, 2).is_err());
    }

    #[test]
    fn comparison_tie_rule() {
        let c = compare(fake_fit(Model::Deng, 10.0), fake_fit(Model::Dsummable, 10.5)).unwrap();
        assert_eq!(c.selected, Selection::Tie);
        assert_eq!(c.delta_aic, [0.0, 0.5]);
        let c = compare(fake_fit(Model::Deng, 10.0), fake_fit(Model::Dsummable, 13.0)).unwrap();
        assert_eq!(c.selected, Selection::Deng);
        let c = compare(fake_fit(Model::Deng, 12.0), fake_fit(Model::Dsummable, 10.0)).unwrap();
        assert_eq!(c.selected, Selection::Dsummable);
        assert_eq!(c.delta_for(Model::Deng), Some(2.0));
        assert_eq!(c.aic_min, 10.0);
    }

    #[test]
    fn comparison_with_exact_fits() {
        let c = compare(
            fake_fit(Model::Deng, f64::NEG_INFINITY),
            fake_fit(Model::Dsummable, f64::NEG_INFINITY),
        )
        .unwrap();
        assert_eq!(c.delta_aic, [0.0, 2.0]);
        assert_eq!(c.selected, Selection::Deng);
        let c = compare(fake_fit(Model::Deng, 5.0), fake_fit(Model::Dsummable, f64::NEG_INFINITY)).unwrap();
        assert_eq!(c.selected, Selection::Dsummable);
        assert_eq!(c.delta_aic[1], 0.0);
    }

    #[test]
    fn comparison_rejects_mismatched_inputs() {
        let mut other = fake_fit(Model::Dsummable, 1.0);
        other.provenance.seed = 9;
        assert!(matches!(
            compare(fake_fit(Model::Deng, 1.0), other),
            Err(Error::Comparison(_))
        ));
        assert!(compare(fake_fit(Model::Deng, 1.0), fake_fit(Model::Deng, 2.0)).is_err());
        let mut base2 = fake_fit(Model::Dsummable, 1.0);
        base2.log_base = LogBase::Two;
        assert!(compare(fake_fit(Model::Deng, 1.0), base2).is_err());
    }

    #[test]
    fn serialized_fit_reports_exact_fit_as_null() {
        let fit = fake_fit(Model::Deng, f64::NEG_INFINITY);
        let v = serde_json::to_value(&fit).unwrap();
        assert!(v["aic"].is_null());
        assert_eq!(v["exact_fit"], true);
        assert_eq!(v["model"], "deng");
        assert_eq!(v["log_base"], "e");
    }
}
