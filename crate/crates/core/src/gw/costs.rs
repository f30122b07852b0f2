use crate::error::{Error, Result};
use crate::field::MMField;
use crate::matrix::Matrix;

/// The two cost functions of a pair of fields.
///
/// Cells of `X x Y` are indexed row-major, `a = i * m + j`. The distortion
/// tensor is evaluated lazily from the two distance matrices; the value-gap
/// matrix is stored.
#[derive(Debug, Clone)]
pub struct FieldPairCosts {
    n: usize,
    m: usize,
    dx: Vec<f64>,
    dy: Vec<f64>,
    gap: Matrix,
}

impl FieldPairCosts {
    pub fn new(fx: &MMField, fy: &MMField) -> Result<Self> {
        if fx.target() != fy.target() {
            return Err(Error::TargetMismatch);
        }
        let (n, m) = (fx.len(), fy.len());
        let flat = |f: &MMField| (0..f.len()).flat_map(|i| f.metric().row(i).to_vec()).collect();
        let target = fx.target();
        let gap = Matrix::from_fn(n, m, |i, j| target.distance(&fx.values()[i], &fy.values()[j]));
        Ok(FieldPairCosts { n, m, dx: flat(fx), dy: flat(fy), gap })
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> usize {
        self.m
    }

    pub fn cells(&self) -> usize {
        self.n * self.m
    }

    /// `|d_X(i, i') - d_Y(j, j')|`.
    #[inline]
    pub fn distortion(&self, i: usize, j: usize, i2: usize, j2: usize) -> f64 {
        (self.dx[i * self.n + i2] - self.dy[j * self.m + j2]).abs()
    }

    #[inline]
    pub(crate) fn distortion_cells(&self, a: usize, b: usize) -> f64 {
        self.distortion(a / self.m, a % self.m, b / self.m, b % self.m)
    }

    /// `d_B(pi_X(i), pi_Y(j))`.
    #[inline]
    pub fn value_gap(&self, i: usize, j: usize) -> f64 {
        self.gap.get(i, j)
    }

    pub fn value_gaps(&self) -> &Matrix {
        &self.gap
    }

    /// Largest entry of either distance matrix or of the value gaps.
    pub fn scale(&self) -> f64 {
        self.dx.iter().chain(&self.dy).chain(self.gap.as_slice()).copied().fold(0.0, f64::max)
    }

    /// `(∫ m^p d(P⊗P), ∫ d_B^p dP)` for a plan given cell-wise.
    pub fn power_integrals(&self, plan: &[f64], p: f64) -> (f64, f64) {
        let mut a = 0.0;
        let mut b = 0.0;
        for (x, &px) in plan.iter().enumerate() {
            if px <= 0.0 {
                continue;
            }
            b += px * self.gap.as_slice()[x].powf(p);
            let mut inner = 0.0;
            for (y, &py) in plan.iter().enumerate() {
                if py > 0.0 {
                    inner += py * self.distortion_cells(x, y).powf(p);
                }
            }
            a += px * inner;
        }
        (a, b)
    }

    /// The `p = ∞` objective of any coupling whose support is `cells`:
    /// `max{ ½ max_{a,b} m(a, b), max_a d_B(a) }`.
    pub fn support_objective(&self, cells: &[usize]) -> f64 {
        let mut half = 0.0f64;
        let mut gap = 0.0f64;
        for (k, &a) in cells.iter().enumerate() {
            gap = gap.max(self.gap.as_slice()[a]);
            for &b in &cells[k + 1..] {
                half = half.max(self.distortion_cells(a, b));
            }
        }
        (0.5 * half).max(gap)
    }

    /// `m^p` over all pairs of cells, row-major `(nm) x (nm)`.
    pub(crate) fn powered_distortion(&self, p: f64) -> Vec<f64> {
        let c = self.cells();
        let mut out = Vec::with_capacity(c * c);
        for a in 0..c {
            for b in 0..c {
                out.push(self.distortion_cells(a, b).powf(p));
            }
        }
        out
    }

    pub(crate) fn powered_gaps(&self, p: f64) -> Vec<f64> {
        self.gap.as_slice().iter().map(|g| g.powf(p)).collect()
    }
}

/// The finite-`p` objective from precomputed powers.
pub(crate) fn objective_from_powers(plan: &[f64], mp: &[f64], gp: &[f64], p: f64) -> f64 {
    let c = plan.len();
    let mut a = 0.0;
    let mut b = 0.0;
    for x in 0..c {
        let px = plan[x];
        if px <= 0.0 {
            continue;
        }
        b += px * gp[x];
        let row = &mp[x * c..(x + 1) * c];
        let inner: f64 = plan.iter().zip(row).map(|(py, v)| py * v).sum();
        a += px * inner;
    }
    (0.5 * a.max(0.0).powf(1.0 / p)).max(b.max(0.0).powf(1.0 / p))
}
