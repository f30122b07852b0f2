//! Augmented distance matrices (ADMs).
//!
//! Drawing `n` points `x_1..x_n` i.i.d. from a field's measure and recording
//! `(d(x_i, x_j), pi(x_i))` gives an ADM of order `n`. The law of that pair is
//! the order-`n` distance-matrix distribution `D^n` of the field; two fields
//! with fully supported measures are isomorphic exactly when all these laws
//! agree, and the Wasserstein distance between `D^n_X` and `D^n_Y` (ground
//! cost [`rho_n`]) increases with `n` towards `d_GW,∞(X, Y)`.
//!
//! Here `D^n` is replaced by an empirical sample of `N` ADMs drawn with a
//! counter-based generator, so each draw depends only on
//! `(seed, draw, position)`.

mod experiment;

pub use experiment::{
    bootstrap_mean_interval, convergence_csv, convergence_experiment, reconstruction_check,
    sampling_noise, uniformity_fraction, ConvergenceRow, Reconstruction, CSV_HEADER, NOISE_REPLICATES,
};

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::MMField;
use crate::gw::Exponent;
use crate::matrix::Matrix;
use crate::metric::FiniteMetric;
use crate::rng;
use crate::target::{TargetPoint, TargetSpace};
use crate::transport::{wasserstein_inf, wasserstein_p, DEFAULT_SUPPORT_EPS};

/// One ADM: a sampled distance matrix and the sampled values.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmSample {
    pub r: FiniteMetric,
    pub b: Vec<TargetPoint>,
    /// Indices of the drawn points in the source field.
    pub points: Vec<usize>,
    pub seed: u64,
    pub draw: u64,
}

impl AdmSample {
    pub fn order(&self) -> usize {
        self.b.len()
    }

    /// The north-west `k x k` block: the ADM of the first `k` draws.
    pub fn truncate(&self, k: usize) -> Result<AdmSample> {
        if k == 0 || k > self.order() {
            return Err(Error::InvalidParameter(format!("cannot truncate order {} to {k}", self.order())));
        }
        let idx: Vec<usize> = (0..k).collect();
        Ok(AdmSample {
            r: self.r.submetric(&idx)?,
            b: self.b[..k].to_vec(),
            points: self.points[..k].to_vec(),
            seed: self.seed,
            draw: self.draw,
        })
    }
}

/// An empirical distance-matrix distribution: `N` ADMs of order `n`, each
/// with weight `1/N`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalAdm {
    pub n: usize,
    pub samples: Vec<AdmSample>,
    pub target: TargetSpace,
    pub seed: u64,
}

impl EmpiricalAdm {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Maps a tuple of point indices to its ADM.
pub fn adm_of(field: &MMField, points: &[usize]) -> Result<AdmSample> {
    if points.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(AdmSample {
        r: field.metric().submetric(points)?,
        b: points.iter().map(|&i| field.values()[i].clone()).collect(),
        points: points.to_vec(),
        seed: 0,
        draw: 0,
    })
}

/// Draws `count` ADMs of order `n` from `field`.
///
/// Point `k` of draw `t` is drawn from the measure using the random number
/// addressed by `(seed, t, k)`.
pub fn adm_sample(field: &MMField, n: usize, count: usize, seed: u64) -> Result<EmpiricalAdm> {
    if n == 0 || count == 0 {
        return Err(Error::InvalidParameter("order and sample count must be positive".into()));
    }
    let mass: f64 = field.measure().iter().filter(|&&w| w > 0.0).sum();
    if !(mass > 0.0) {
        return Err(Error::ZeroMeasure);
    }
    let samples = (0..count as u64)
        .into_par_iter()
        .map(|draw| {
            let points: Vec<usize> =
                (0..n as u64).map(|k| rng::categorical(field.measure(), seed, draw, k)).collect();
            let mut s = adm_of(field, &points)?;
            s.seed = seed;
            s.draw = draw;
            Ok(s)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EmpiricalAdm { n, samples, target: field.target().clone(), seed })
}

/// `ρ_n(a, a') = max(½ max_ij |r_ij - r'_ij|, max_i d_B(b_i, b'_i))`.
pub fn rho_n(target: &TargetSpace, a: &AdmSample, b: &AdmSample) -> Result<f64> {
    if a.order() != b.order() {
        return Err(Error::DimensionMismatch { what: "ADM order", got: b.order(), expected: a.order() });
    }
    for v in a.b.iter().chain(&b.b) {
        target.check_point(v)?;
    }
    Ok(rho_unchecked(target, a, b))
}

fn rho_unchecked(target: &TargetSpace, a: &AdmSample, b: &AdmSample) -> f64 {
    let n = a.order();
    let mut half = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            half = half.max((a.r.get(i, j) - b.r.get(i, j)).abs());
        }
    }
    let gap = a.b.iter().zip(&b.b).map(|(x, y)| target.distance(x, y)).fold(0.0, f64::max);
    (0.5 * half).max(gap)
}

fn check_compatible(dx: &EmpiricalAdm, dy: &EmpiricalAdm) -> Result<()> {
    if dx.n != dy.n {
        return Err(Error::DimensionMismatch { what: "ADM order", got: dy.n, expected: dx.n });
    }
    if dx.target != dy.target {
        return Err(Error::TargetMismatch);
    }
    if dx.is_empty() || dy.is_empty() {
        return Err(Error::InvalidParameter("empty ADM sample".into()));
    }
    Ok(())
}

/// Pairwise `ρ_n` costs between two empirical distributions.
pub fn rho_cost_matrix(dx: &EmpiricalAdm, dy: &EmpiricalAdm) -> Result<Matrix> {
    check_compatible(dx, dy)?;
    let a: Vec<&AdmSample> = dx.samples.iter().collect();
    let b: Vec<&AdmSample> = dy.samples.iter().collect();
    Ok(rho_costs(&dx.target, &a, &b))
}

fn rho_costs(target: &TargetSpace, a: &[&AdmSample], b: &[&AdmSample]) -> Matrix {
    let rows: Vec<Vec<f64>> =
        a.par_iter().map(|s| b.iter().map(|t| rho_unchecked(target, s, t)).collect()).collect();
    Matrix::from_rows(rows).expect("rows have equal length")
}

fn sample_key(s: &AdmSample) -> Vec<u64> {
    let mut key: Vec<u64> = s.r.rows().iter().flatten().map(|x| x.to_bits()).collect();
    for v in &s.b {
        match v {
            TargetPoint::Vector(x) => key.extend(x.iter().map(|c| c.to_bits())),
            TargetPoint::Index(i) => key.push(*i as u64),
            TargetPoint::Bits(bits) => key.extend(bits.iter().map(|&b| u64::from(b))),
        }
    }
    key
}

/// Distinct ADMs in order of first appearance, with their empirical weights.
fn atoms(d: &EmpiricalAdm) -> (Vec<&AdmSample>, Vec<f64>) {
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    let (mut samples, mut counts) = (Vec::new(), Vec::<usize>::new());
    for s in &d.samples {
        let k = *index.entry(sample_key(s)).or_insert_with(|| {
            samples.push(s);
            counts.push(0);
            samples.len() - 1
        });
        counts[k] += 1;
    }
    let total = d.len() as f64;
    (samples, counts.into_iter().map(|c| c as f64 / total).collect())
}

/// `d_W,p` between two empirical distributions with ground cost `ρ_n`.
/// Repeated ADMs are merged into one atom first.
pub fn adm_wasserstein(dx: &EmpiricalAdm, dy: &EmpiricalAdm, p: Exponent) -> Result<f64> {
    check_compatible(dx, dy)?;
    let (a, mu) = atoms(dx);
    let (b, nu) = atoms(dy);
    let cost = rho_costs(&dx.target, &a, &b);
    Ok(match p {
        Exponent::Finite(q) => wasserstein_p(&cost, &mu, &nu, q)?.0,
        Exponent::Infinity => wasserstein_inf(&cost, &mu, &nu, DEFAULT_SUPPORT_EPS)?.0,
    })
}
