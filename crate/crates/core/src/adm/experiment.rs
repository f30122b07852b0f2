//! Estimators and experiments built on empirical ADM distributions.

use rand::Rng;
use rayon::prelude::*;

use super::{adm_sample, adm_wasserstein};
use crate::error::{Error, Result};
use crate::field::MMField;
use crate::gw::{gw_distance, Exponent, GwOptions};
use crate::io::format_number;
use crate::matrix::Matrix;
use crate::rng;
use crate::transport::{wasserstein_inf, wasserstein_p, DEFAULT_SUPPORT_EPS};

pub const CSV_HEADER: &str = "n,p,N,seed,estimate,lower_noise,upper_noise,oracle";

/// Number of independent replicate samples behind the noise band.
pub const NOISE_REPLICATES: u64 = 4;

/// Seed of the `k`-th independent replicate.
fn replicate_seed(seed: u64, k: u64) -> u64 {
    seed ^ 0x9E37_79B9_7F4A_7C15u64.wrapping_mul(k + 1)
}

/// One row of a convergence table.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub p: Exponent,
    pub count: usize,
    pub seed: u64,
    pub estimate: f64,
    pub lower_noise: f64,
    pub upper_noise: f64,
    /// Exact `d_GW,∞` when the pair is small enough for the oracle.
    pub oracle: Option<f64>,
}

impl ConvergenceRow {
    pub fn noise(&self) -> f64 {
        self.upper_noise - self.estimate
    }
}

/// Sampling-noise scale for an estimate between `fx` and `fy`.
///
/// The estimate is off by at most the sum of the two sample-to-population
/// distances. Each is stood in for by the distance from the main sample to an
/// independent replicate; the band is the largest such sum over
/// [`NOISE_REPLICATES`] replicates.
pub fn sampling_noise(
    fx: &MMField,
    fy: &MMField,
    n: usize,
    count: usize,
    seed: u64,
    p: Exponent,
) -> Result<f64> {
    let (sx, sy) = (adm_sample(fx, n, count, seed)?, adm_sample(fy, n, count, seed)?);
    let mut band = 0.0f64;
    for k in 0..NOISE_REPLICATES {
        let other = replicate_seed(seed, k);
        let x = adm_wasserstein(&sx, &adm_sample(fx, n, count, other)?, p)?;
        let y = adm_wasserstein(&sy, &adm_sample(fy, n, count, other)?, p)?;
        band = band.max(x + y);
    }
    Ok(band)
}

/// Estimates `d_W,p(D^n_X, D^n_Y)` for every order in `orders`, with a noise
/// band and, when available, the exact `d_GW,∞` the estimates approach.
pub fn convergence_experiment(
    fx: &MMField,
    fy: &MMField,
    orders: &[usize],
    count: usize,
    p: Exponent,
    seed: u64,
) -> Result<Vec<ConvergenceRow>> {
    let oracle = match gw_distance(fx, fy, Exponent::Infinity, &GwOptions::exact()) {
        Ok(r) => Some(r.value),
        Err(Error::SizeLimit { .. }) => None,
        Err(e) => return Err(e),
    };
    orders
        .iter()
        .map(|&n| {
            let estimate = adm_wasserstein(&adm_sample(fx, n, count, seed)?, &adm_sample(fy, n, count, seed)?, p)?;
            let noise = sampling_noise(fx, fy, n, count, seed, p)?;
            Ok(ConvergenceRow {
                n,
                p,
                count,
                seed,
                estimate,
                lower_noise: (estimate - noise).max(0.0),
                upper_noise: estimate + noise,
                oracle,
            })
        })
        .collect()
}

/// Renders rows as CSV with a header line.
pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let oracle = r.oracle.map(format_number).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.n,
            r.p,
            r.count,
            r.seed,
            format_number(r.estimate),
            format_number(r.lower_noise),
            format_number(r.upper_noise),
            oracle
        ));
    }
    out
}

/// Outcome of [`reconstruction_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reconstruction {
    pub estimate: f64,
    pub tol: f64,
    /// `estimate <= tol`. Isomorphic fields always pass up to sampling noise;
    /// a failure is evidence that the fields are not isomorphic. Passing does
    /// not prove isomorphism.
    pub indistinguishable: bool,
}

/// Order-`n` distinguishability test between two fields with fully supported
/// measures, using the `p = 1` estimator.
pub fn reconstruction_check(
    fx: &MMField,
    fy: &MMField,
    n: usize,
    count: usize,
    seed: u64,
    tol: f64,
) -> Result<Reconstruction> {
    for f in [fx, fy] {
        if let Some(i) = f.measure().iter().position(|&w| !(w > 0.0)) {
            return Err(Error::InvalidParameter(format!("measure is not fully supported (point {i})")));
        }
    }
    let p = Exponent::Finite(1.0);
    let estimate = adm_wasserstein(&adm_sample(fx, n, count, seed)?, &adm_sample(fy, n, count, seed)?, p)?;
    Ok(Reconstruction { estimate, tol, indistinguishable: estimate <= tol })
}

/// Fraction of `count` random `n`-tuples whose empirical measure lies within
/// `eps` of the field's measure in `d_W,p`.
pub fn uniformity_fraction(
    field: &MMField,
    n: usize,
    count: usize,
    p: Exponent,
    eps: f64,
    seed: u64,
) -> Result<f64> {
    if n == 0 || count == 0 {
        return Err(Error::InvalidParameter("tuple size and count must be positive".into()));
    }
    let mu = field.measure();
    if !(mu.iter().filter(|&&w| w > 0.0).sum::<f64>() > 0.0) {
        return Err(Error::ZeroMeasure);
    }
    let total: f64 = mu.iter().sum();
    let cost = Matrix::from_fn(field.len(), field.len(), |i, j| field.metric().get(i, j));
    let hits = (0..count as u64)
        .into_par_iter()
        .map(|draw| {
            let mut empirical = vec![0.0; field.len()];
            for k in 0..n as u64 {
                empirical[rng::categorical(mu, seed, draw, k)] += total / n as f64;
            }
            let w = match p {
                Exponent::Finite(q) => wasserstein_p(&cost, &empirical, mu, q)?.0,
                Exponent::Infinity => wasserstein_inf(&cost, &empirical, mu, DEFAULT_SUPPORT_EPS)?.0,
            };
            Ok(usize::from(w <= eps))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(hits.iter().sum::<usize>() as f64 / count as f64)
}

/// 95% percentile bootstrap interval for the mean of `values`.
pub fn bootstrap_mean_interval(values: &[f64], resamples: usize, seed: u64) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mut rng = rng::stream_rng(seed, 0xB007);
    let k = values.len();
    let mut means: Vec<f64> = (0..resamples.max(1))
        .map(|_| (0..k).map(|_| values[rng.gen_range(0..k)]).sum::<f64>() / k as f64)
        .collect();
    means.sort_by(f64::total_cmp);
    let at = |q: f64| means[((means.len() - 1) as f64 * q).round() as usize];
    (at(0.025), at(0.975))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::worked_pair;
    use crate::metric::FiniteMetric;

    #[test]
    fn identical_fields_estimate_zero() {
        let (fx, _) = worked_pair();
        let rows = convergence_experiment(&fx, &fx, &[1, 2, 4], 100, Exponent::Finite(1.0), 3).unwrap();
        assert!(rows.iter().all(|r| r.estimate == 0.0));
        assert!(rows.iter().all(|r| r.oracle == Some(0.0)));
    }

    #[test]
    fn csv_layout() {
        let (fx, fy) = worked_pair();
        let rows = convergence_experiment(&fx, &fy, &[1, 2], 50, Exponent::Finite(1.0), 11).unwrap();
        let csv = convergence_csv(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("1,1,50,11,"));
        assert!(lines[1].ends_with(",1"));
        assert!(csv.ends_with('\n'));
    }

    #[test]
    fn reconstruction_examples() {
        let (fx, fy) = worked_pair();
        let r = reconstruction_check(&fx, &fy, 4, 500, 1, 0.5).unwrap();
        assert!(!r.indistinguishable);
        let same = reconstruction_check(&fx, &fx, 4, 200, 1, 0.0).unwrap();
        assert!(same.indistinguishable);

        let (m, _, t, v) = fx.clone().into_parts();
        let partial = MMField::new(m, vec![1.0, 0.0], t, v).unwrap();
        assert!(reconstruction_check(&partial, &fx, 2, 10, 0, 0.1).is_err());
    }

    #[test]
    fn uniformity_examples() {
        let (fx, _) = worked_pair();
        let f = uniformity_fraction(&fx, 50, 400, Exponent::Finite(1.0), 0.2, 5).unwrap();
        assert!(f >= 0.96, "{f}");
        // eps at the diameter always succeeds.
        assert_eq!(uniformity_fraction(&fx, 3, 100, Exponent::Finite(1.0), 1.0, 5).unwrap(), 1.0);

        let one = MMField::real_uniform(FiniteMetric::from_rows(vec![vec![0.0]]).unwrap(), &[0.0]).unwrap();
        assert_eq!(uniformity_fraction(&one, 5, 10, Exponent::Infinity, 1e-6, 0).unwrap(), 1.0);
    }

    #[test]
    fn bootstrap_interval_brackets_mean() {
        let values = [0.9, 0.95, 1.0, 0.97, 0.93];
        let (lo, hi) = bootstrap_mean_interval(&values, 1000, 1);
        let mean = values.iter().sum::<f64>() / 5.0;
        assert!(lo <= mean && mean <= hi);
        assert!(lo >= 0.9 && hi <= 1.0);
        assert_eq!(bootstrap_mean_interval(&[2.0], 10, 0), (2.0, 2.0));
    }
}
