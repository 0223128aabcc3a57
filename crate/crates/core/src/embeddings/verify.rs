//! Recomputes certificate residuals without using the construction code:
//! the group generators are rebuilt from digit swaps, numeric products use a
//! plain dense kernel, and exact products use sparse rational arithmetic.

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{EmbeddingCertificate, ExactZeroFlags, Mode, Residuals, ResidualsWire, TargetAlgebra};
use crate::linalg::format_residual;
use crate::ExactMatrix;

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub valid: bool,
    pub mode: Mode,
    pub tolerance: f64,
    pub residuals: Residuals,
    pub exact_zero: ExactZeroFlags,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReportWire {
    pub valid: bool,
    pub mode: Mode,
    pub tolerance: String,
    pub residuals: ResidualsWire,
    pub exact_zero: ExactZeroFlags,
    pub failures: Vec<String>,
}

impl From<&ValidationReport> for ValidationReportWire {
    fn from(r: &ValidationReport) -> Self {
        Self {
            valid: r.valid,
            mode: r.mode,
            tolerance: format_residual(r.tolerance),
            residuals: ResidualsWire::from(&r.residuals),
            exact_zero: r.exact_zero,
            failures: r.failures.clone(),
        }
    }
}

/// Index maps of the adjacent slot swaps on `(C^m)^{⊗n}`, slot 0 most
/// significant.
fn swap_generators(m: usize, n: usize) -> Vec<Vec<usize>> {
    let dim = m.pow(n as u32);
    (0..n.saturating_sub(1))
        .map(|i| {
            let hi = m.pow((n - 1 - i) as u32);
            let lo = m.pow((n - 2 - i) as u32);
            (0..dim)
                .map(|f| {
                    let a = (f / hi) % m;
                    let b = (f / lo) % m;
                    f - a * hi - b * lo + b * hi + a * lo
                })
                .collect()
        })
        .collect()
}

/// Every nonzero entry `(r, c)` of an image in `M_{p+q}^{⊗n}` must have, in
/// each slot, both digits below `p` or both at least `p`.
fn block_support_violations(images: &[ExactMatrix], p: usize, q: usize, n: usize) -> usize {
    let m = p + q;
    let pattern = |mut f: usize| {
        let mut bits = 0usize;
        for _ in 0..n {
            bits = (bits << 1) | usize::from(f % m >= p);
            f /= m;
        }
        bits
    };
    images
        .iter()
        .map(|x| x.iter().filter(|(r, c, _)| pattern(*r) != pattern(*c)).count())
        .sum()
}

struct Dense {
    n: usize,
    data: Vec<f64>,
}

impl Dense {
    fn from_exact(x: &ExactMatrix) -> Self {
        let n = x.dim();
        let mut data = vec![0.0; n * n];
        for (r, c, v) in x.iter() {
            data[r * n + c] = v.to_f64().unwrap_or(f64::NAN);
        }
        Self { n, data }
    }

    fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let out = &mut data[i * n..(i + 1) * n];
                for (o, b) in out.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Self { n, data }
    }

    fn dist(&self, other: Option<&Self>) -> f64 {
        match other {
            Some(o) => self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt(),
            None => self.data.iter().map(|a| a * a).sum::<f64>().sqrt(),
        }
    }

    fn transpose_dist(&self, other: &Self) -> f64 {
        let n = self.n;
        let mut s = 0.0;
        for r in 0..n {
            for c in 0..n {
                let d = self.data[r * n + c] - other.data[c * n + r];
                s += d * d;
            }
        }
        s.sqrt()
    }

    fn conjugation_dist(&self, g: &[usize]) -> f64 {
        let n = self.n;
        let mut s = 0.0;
        for r in 0..n {
            for c in 0..n {
                let d = self.data[g[r] * n + g[c]] - self.data[r * n + c];
                s += d * d;
            }
        }
        s.sqrt()
    }
}

fn norm(x: &ExactMatrix) -> f64 {
    x.frobenius_norm()
}

fn conjugation_diff(x: &ExactMatrix, g: &[usize]) -> ExactMatrix {
    let mut moved = ExactMatrix::zeros(x.dim());
    for (r, c, v) in x.iter() {
        moved.set(g[r], g[c], v.clone());
    }
    &moved - x
}

pub fn verify_certificate(cert: &EmbeddingCertificate) -> ValidationReport {
    let mut failures = Vec::new();
    let sizes = &cert.source.summands;
    let expected_units: usize = sizes.iter().map(|s| s * s).sum();
    let dim = cert.target.ambient_dim();
    let mut report = ValidationReport {
        valid: false,
        mode: cert.mode,
        tolerance: cert.tolerance,
        residuals: Residuals {
            unital: f64::INFINITY,
            multiplicative: f64::INFINITY,
            star: f64::INFINITY,
            equivariance: f64::INFINITY,
        },
        exact_zero: ExactZeroFlags::default(),
        failures: Vec::new(),
    };
    if cert.images.len() != expected_units {
        report.failures.push(format!(
            "expected {expected_units} matrix-unit images, found {}",
            cert.images.len()
        ));
        return report;
    }
    if let Some(bad) = cert.images.iter().position(|x| x.dim() != dim) {
        report.failures.push(format!(
            "image {bad} has dimension {}, target needs {dim}",
            cert.images[bad].dim()
        ));
        return report;
    }

    // (summand, row, col) -> position, recomputed from the source sizes
    let mut offsets = Vec::with_capacity(sizes.len());
    let mut acc = 0;
    for s in sizes {
        offsets.push(acc);
        acc += s * s;
    }
    let at = |s: usize, r: usize, c: usize| offsets[s] + r * sizes[s] + c;

    let generators = match cert.target {
        TargetAlgebra::FixedPoint { m, n } => swap_generators(m, n),
        TargetAlgebra::SymmetricBlockAlgebra { p, q, n } => {
            let bad = block_support_violations(&cert.images, p, q, n);
            if bad > 0 {
                failures.push(format!("{bad} image entries lie outside the block algebra"));
            }
            swap_generators(p + q, n)
        }
        TargetAlgebra::FullMatrix { .. } => Vec::new(),
    };

    let mut unit_sum = ExactMatrix::zeros(dim);
    for (s, &size) in sizes.iter().enumerate() {
        for i in 0..size {
            unit_sum = &unit_sum + &cert.images[at(s, i, i)];
        }
    }
    let unital = &unit_sum - &ExactMatrix::identity(dim);
    let mut residuals = Residuals {
        unital: norm(&unital),
        ..Residuals::default()
    };
    let mut exact = ExactZeroFlags {
        unital: unital.is_zero(),
        multiplicative: true,
        star: true,
        equivariance: true,
    };

    match cert.mode {
        Mode::Exact => {
            for (s, &size) in sizes.iter().enumerate() {
                for i in 0..size {
                    for j in 0..size {
                        let x = &cert.images[at(s, i, j)];
                        let star = &cert.images[at(s, j, i)] - &x.transpose();
                        exact.star &= star.is_zero();
                        residuals.star = residuals.star.max(norm(&star));
                        for g in &generators {
                            let d = conjugation_diff(x, g);
                            exact.equivariance &= d.is_zero();
                            residuals.equivariance = residuals.equivariance.max(norm(&d));
                        }
                        for (t, &tsize) in sizes.iter().enumerate() {
                            for k in 0..tsize {
                                for l in 0..tsize {
                                    let prod = x * &cert.images[at(t, k, l)];
                                    let d = if s == t && j == k {
                                        &prod - &cert.images[at(s, i, l)]
                                    } else {
                                        prod
                                    };
                                    exact.multiplicative &= d.is_zero();
                                    residuals.multiplicative = residuals.multiplicative.max(norm(&d));
                                }
                            }
                        }
                    }
                }
            }
        }
        Mode::Numeric => {
            exact.multiplicative = false;
            exact.star = false;
            exact.equivariance = false;
            let dense: Vec<Dense> = cert.images.iter().map(Dense::from_exact).collect();
            for (s, &size) in sizes.iter().enumerate() {
                for i in 0..size {
                    for j in 0..size {
                        let x = &dense[at(s, i, j)];
                        residuals.star = residuals.star.max(dense[at(s, j, i)].transpose_dist(x));
                        for g in &generators {
                            residuals.equivariance = residuals.equivariance.max(x.conjugation_dist(g));
                        }
                        for (t, &tsize) in sizes.iter().enumerate() {
                            for k in 0..tsize {
                                for l in 0..tsize {
                                    let prod = x.mul(&dense[at(t, k, l)]);
                                    let expected = (s == t && j == k).then(|| &dense[at(s, i, l)]);
                                    residuals.multiplicative = residuals.multiplicative.max(prod.dist(expected));
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    let zero_images = cert
        .images
        .iter()
        .filter(|x| x.iter().all(|(_, _, v)| v.is_zero()))
        .count();
    if zero_images > 0 {
        failures.push(format!("{zero_images} matrix-unit images are zero"));
    }
    let within = match cert.mode {
        Mode::Exact => exact.all(),
        Mode::Numeric => {
            if !exact.unital {
                failures.push("unitality is not exact".into());
            }
            exact.unital && residuals.max() <= cert.tolerance
        }
    };
    for (name, value, is_exact) in [
        ("unital", residuals.unital, exact.unital),
        ("multiplicative", residuals.multiplicative, exact.multiplicative),
        ("star", residuals.star, exact.star),
        ("equivariance", residuals.equivariance, exact.equivariance),
    ] {
        let bad = match cert.mode {
            Mode::Exact => !is_exact,
            Mode::Numeric => value.is_nan() || value > cert.tolerance,
        };
        if bad {
            failures.push(format!("{name} residual {} exceeds tolerance", format_residual(value)));
        }
    }
    report.valid = within && failures.is_empty();
    report.residuals = residuals;
    report.exact_zero = exact;
    report.failures = failures;
    report
}
