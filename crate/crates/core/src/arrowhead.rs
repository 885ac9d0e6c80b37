//! Eigendecomposition of real symmetric arrowhead matrices
//!
//! ```text
//!     ⎡ α   z₁  z₂  …  z_m ⎤
//!     ⎢ z₁  d₁             ⎥
//! A = ⎢ z₂      d₂         ⎥
//!     ⎢ ⋮           ⋱      ⎥
//!     ⎣ z_m             d_m⎦
//! ```
//!
//! Eigenvalues are the roots of the secular function
//! `f(λ) = α − λ + Σ z_j²/(λ − d_j)`, one in each gap of the sorted poles
//! plus one on either side. Each root is located relative to its nearest
//! pole so that the differences `λ_k − d_j` keep full relative accuracy.
//! Eigenvectors are then formed from couplings `ẑ` recomputed from the
//! computed eigenvalues (Löwner's formula), which keeps them numerically
//! orthogonal regardless of eigenvalue clustering.
//!
//! Cost is `O(n²)` time for the eigenvalues and `O(n²)` time and memory for
//! the eigenvector matrix.

use crate::error::{invalid, Error, Result};

const MAX_ITERATIONS: usize = 200;

/// Eigenpairs of an arrowhead matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct ArrowheadEigen {
    pub eigenvalues: Vec<f64>,
    /// Row-major `n × n`: entry `(i, k)` is component `i` of eigenvector `k`.
    pub vectors: Vec<f64>,
}

impl ArrowheadEigen {
    pub fn dimension(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector_entry(&self, row: usize, k: usize) -> f64 {
        self.vectors[row * self.dimension() + k]
    }
}

/// A root stored as `pole + offset` so that distances to poles stay exact.
#[derive(Debug, Clone, Copy)]
struct Root {
    origin: usize,
    offset: f64,
}

struct Secular<'a> {
    tip: f64,
    poles: &'a [f64],
    z2: Vec<f64>,
}

impl Secular<'_> {
    /// Distance `λ − d_j` for a root given relative to `origin`.
    #[inline]
    fn gap(&self, root: Root, j: usize) -> f64 {
        root.offset + (self.poles[root.origin] - self.poles[j])
    }

    /// Solve for the root in the gap `(d_{k−1}, d_k)`; `k = 0` is the
    /// exterior gap below the poles and `k = m` the one above.
    fn solve(&self, k: usize, spread: f64) -> Result<Root> {
        let m = self.poles.len();
        let lower = k.checked_sub(1);
        let upper = (k < m).then_some(k);

        let (origin, mut lo, mut hi) = match (lower, upper) {
            (Some(l), Some(u)) => {
                let half = 0.5 * (self.poles[u] - self.poles[l]);
                let (f_mid, _) = self.eval(l, half, Some(l), Some(u));
                if f_mid >= 0.0 {
                    // f is decreasing, so the root lies above the midpoint
                    (u, -half, 0.0)
                } else {
                    (l, 0.0, half)
                }
            }
            (None, Some(u)) => {
                let bottom = self.tip.min(self.poles[u]) - spread;
                (u, bottom - self.poles[u], 0.0)
            }
            (Some(l), None) => {
                let top = self.tip.max(self.poles[l]) + spread;
                (l, 0.0, top - self.poles[l])
            }
            (None, None) => unreachable!("at least one pole"),
        };

        let mut mu = 0.5 * (lo + hi);
        for _ in 0..MAX_ITERATIONS {
            let (phi, dphi) = self.eval(origin, mu, lower, upper);
            if phi == 0.0 {
                return Ok(Root { origin, offset: mu });
            }
            if phi > 0.0 {
                lo = mu;
            } else {
                hi = mu;
            }
            let mut next = mu - phi / dphi;
            if !(next.is_finite() && next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            let step = (next - mu).abs();
            let width = hi - lo;
            mu = next;
            let scale = mu.abs().max(f64::MIN_POSITIVE);
            if step <= 2.0 * f64::EPSILON * scale
                || width <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs())
            {
                return Ok(Root { origin, offset: mu });
            }
        }
        Err(Error::EigenNonConvergence { index: k })
    }

    /// Evaluates `φ = f·π` and `φ'`, where `π` is the product of distances to
    /// the poles bounding the gap. `φ` has the sign of `f` inside the gap but
    /// no poles there.
    fn eval(
        &self,
        origin: usize,
        mu: f64,
        lower: Option<usize>,
        upper: Option<usize>,
    ) -> (f64, f64) {
        let d_origin = self.poles[origin];
        let mut rest = (self.tip - d_origin) - mu;
        let mut drest = -1.0;
        for (j, &z2) in self.z2.iter().enumerate() {
            if Some(j) == lower || Some(j) == upper {
                continue;
            }
            let gap = mu + (d_origin - self.poles[j]);
            let t = z2 / gap;
            rest += t;
            drest -= t / gap;
        }
        match (lower, upper) {
            (Some(l), Some(u)) => {
                let a = mu - (self.poles[l] - d_origin);
                let b = (self.poles[u] - d_origin) - mu;
                let phi = a * b * rest + self.z2[l] * b - self.z2[u] * a;
                let dphi = (b - a) * rest + a * b * drest - self.z2[l] - self.z2[u];
                (phi, dphi)
            }
            (None, Some(u)) => {
                let b = (self.poles[u] - d_origin) - mu;
                (b * rest - self.z2[u], -rest + b * drest)
            }
            (Some(l), None) => {
                let a = mu - (self.poles[l] - d_origin);
                (a * rest + self.z2[l], rest + a * drest)
            }
            (None, None) => unreachable!(),
        }
    }
}

/// Full eigendecomposition of the arrowhead matrix with corner `tip`,
/// diagonal `poles` (strictly increasing) and first-row entries `arm`.
pub fn arrowhead_eigh(tip: f64, poles: &[f64], arm: &[f64]) -> Result<ArrowheadEigen> {
    if poles.len() != arm.len() {
        return Err(invalid("arm", "length must match the diagonal"));
    }
    if poles.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("poles", "must be strictly increasing"));
    }
    if !tip.is_finite() || poles.iter().chain(arm).any(|v| !v.is_finite()) {
        return Err(invalid("arrowhead", "entries must be finite"));
    }
    let n = poles.len() + 1;
    let arm_norm = arm.iter().map(|z| z * z).sum::<f64>().sqrt();
    let scale = tip.abs() + poles.iter().fold(0.0f64, |a, d| a.max(d.abs())) + arm_norm;
    let deflate_tol = 8.0 * f64::EPSILON * scale;

    let (active, deflated): (Vec<usize>, Vec<usize>) =
        (0..poles.len()).partition(|&j| arm[j].abs() > deflate_tol);

    // (eigenvalue, sparse column description)
    let mut pairs: Vec<(f64, Column)> = Vec::with_capacity(n);
    for &j in &deflated {
        pairs.push((poles[j], Column::Unit(j + 1)));
    }

    if active.is_empty() {
        pairs.push((tip, Column::Unit(0)));
    } else {
        let active_poles: Vec<f64> = active.iter().map(|&j| poles[j]).collect();
        let secular = Secular {
            tip,
            poles: &active_poles,
            z2: active.iter().map(|&j| arm[j] * arm[j]).collect(),
        };
        let m = active_poles.len();
        let spread = 2.0 * arm_norm;
        let roots = (0..=m)
            .map(|k| secular.solve(k, spread))
            .collect::<Result<Vec<_>>>()?;

        let z_hat = lowner_couplings(&secular, &roots, &active, arm);

        for root in &roots {
            let lambda = active_poles[root.origin] + root.offset;
            let mut comps = Vec::with_capacity(m + 1);
            comps.push(1.0);
            let mut norm2 = 1.0;
            for j in 0..m {
                let v = z_hat[j] / secular.gap(*root, j);
                norm2 += v * v;
                comps.push(v);
            }
            let inv = norm2.sqrt().recip();
            comps.iter_mut().for_each(|c| *c *= inv);
            pairs.push((lambda, Column::Dense(comps)));
        }
    }

    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(assemble(n, pairs, &active))
}

enum Column {
    Unit(usize),
    /// Components on `[tip, active poles…]`.
    Dense(Vec<f64>),
}

fn assemble(n: usize, pairs: Vec<(f64, Column)>, active: &[usize]) -> ArrowheadEigen {
    let mut vectors = vec![0.0; n * n];
    let mut eigenvalues = Vec::with_capacity(n);
    for (k, (lambda, column)) in pairs.into_iter().enumerate() {
        eigenvalues.push(lambda);
        match column {
            Column::Unit(row) => vectors[row * n + k] = 1.0,
            Column::Dense(comps) => {
                vectors[k] = comps[0];
                for (c, &j) in comps[1..].iter().zip(active) {
                    vectors[(j + 1) * n + k] = *c;
                }
            }
        }
    }
    ArrowheadEigen {
        eigenvalues,
        vectors,
    }
}

/// Couplings `ẑ_j` for which the computed roots are the exact eigenvalues:
/// `ẑ_j² = Π_k |λ_k − d_j| / Π_{i≠j} |d_i − d_j|`, paired so each factor
/// stays near one.
fn lowner_couplings(
    secular: &Secular<'_>,
    roots: &[Root],
    active: &[usize],
    arm: &[f64],
) -> Vec<f64> {
    let d = secular.poles;
    let m = d.len();
    (0..m)
        .map(|j| {
            let mut p = secular.gap(roots[j], j).abs() * secular.gap(roots[j + 1], j).abs();
            for i in 0..j {
                p *= secular.gap(roots[i], j).abs() / (d[j] - d[i]);
            }
            for i in (j + 1)..m {
                p *= secular.gap(roots[i + 1], j).abs() / (d[i] - d[j]);
            }
            p.sqrt().copysign(arm[active[j]])
        })
        .collect()
}
