//! Dense complex vectors and matrices over labeled tensor spaces.
//!
//! Everything here is immutable after construction and every operation is a
//! pure function, so values can be shared freely across threads.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

/// Complex amplitude scalar used throughout the crate.
pub type C64 = Complex64;

/// Tolerance on the L2 norm of a state vector.
pub const TOL_NORM: f64 = 1e-12;
/// Tolerance on the unitarity certificate `max |M†M - I|`.
pub const TOL_UNITARY: f64 = 1e-10;
/// Entrywise tolerance for state comparisons.
pub const TOL_STATE_EQ: f64 = 1e-12;
/// Largest dimension for which dense operators may be materialized (12^3).
pub const DENSE_DIM_CAP: usize = 1728;

fn check_finite(amps: &[C64]) -> Result<()> {
    for (idx, a) in amps.iter().enumerate() {
        if !a.re.is_finite() || !a.im.is_finite() {
            return Err(Error::NonFiniteAmplitude(idx));
        }
    }
    Ok(())
}

/// A unit-norm complex amplitude vector over an ordered list of subsystems.
///
/// The flat index is row-major over `dims` in declared order: for dims
/// `[d0, d1, d2]` the basis ket `|a, b, c>` sits at `a*d1*d2 + b*d2 + c`.
/// By convention the control subsystem, when present, is listed first.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    dims: Vec<usize>,
    amps: Array1<C64>,
}

impl StateVector {
    /// Validates subsystem dimensions, finiteness, and normalization.
    pub fn new(dims: Vec<usize>, amps: Vec<C64>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::ShapeMismatch("empty dimension list".into()));
        }
        for &d in &dims {
            if d < 2 {
                return Err(Error::DimensionTooSmall(d));
            }
        }
        let total: usize = dims.iter().product();
        if amps.len() != total {
            return Err(Error::ShapeMismatch(format!(
                "expected {} amplitudes for dims {:?}, got {}",
                total,
                dims,
                amps.len()
            )));
        }
        check_finite(&amps)?;
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        let defect = (norm_sq - 1.0).abs();
        if defect > 2.0 * TOL_NORM {
            return Err(Error::NotNormalized { defect });
        }
        Ok(Self {
            dims,
            amps: Array1::from_vec(amps),
        })
    }

    /// The computational basis ket `|levels[0], levels[1], ...>`.
    pub fn basis_state(dims: &[usize], levels: &[usize]) -> Result<Self> {
        if dims.len() != levels.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} dims vs {} levels",
                dims.len(),
                levels.len()
            )));
        }
        let mut flat = 0usize;
        for (i, (&lvl, &d)) in levels.iter().zip(dims).enumerate() {
            if lvl >= d {
                return Err(Error::IndexOutOfRange { index: lvl, dim: d });
            }
            let stride: usize = dims[i + 1..].iter().product();
            flat += lvl * stride;
        }
        let total: usize = dims.iter().product();
        let mut amps = vec![C64::ZERO; total];
        amps[flat] = C64::ONE;
        Self::new(dims.to_vec(), amps)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        self.amps.as_slice().expect("contiguous")
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Tensor product `self ⊗ other`; dims are concatenated.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let mut amps = Vec::with_capacity(self.total_dim() * other.total_dim());
        for a in self.amps.iter() {
            for b in other.amps.iter() {
                amps.push(a * b);
            }
        }
        Self {
            dims,
            amps: Array1::from_vec(amps),
        }
    }

    /// Largest entrywise difference `max |a_k - b_k|`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.dims != other.dims {
            return Err(Error::ShapeMismatch(format!(
                "dims {:?} vs {:?}",
                self.dims, other.dims
            )));
        }
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        matches!(self.max_abs_diff(other), Ok(d) if d <= tol)
    }

    pub(crate) fn from_raw(dims: Vec<usize>, amps: Vec<C64>) -> Self {
        Self {
            dims,
            amps: Array1::from_vec(amps),
        }
    }
}

/// A square complex matrix carrying a testable unitarity certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    entries: Array2<C64>,
}

impl UnitaryMatrix {
    /// Validates squareness, finiteness, and the unitarity certificate.
    pub fn new(entries: Array2<C64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::ShapeMismatch(format!(
                "matrix is {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        check_finite(entries.as_slice().expect("contiguous"))?;
        let m = Self { entries };
        let defect = m.unitarity_defect();
        if defect > TOL_UNITARY {
            return Err(Error::NotUnitary {
                defect,
                tol: TOL_UNITARY,
            });
        }
        Ok(m)
    }

    // For products/embeddings of already-certified unitaries, where the
    // O(dim^3) certificate re-check is redundant and too slow at d^3.
    pub(crate) fn from_unitary_parts(entries: Array2<C64>) -> Self {
        debug_assert_eq!(entries.nrows(), entries.ncols());
        Self { entries }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            entries: Array2::eye(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<C64> {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim();
        let mut out = Array2::zeros((n, n));
        for r in 0..n {
            for c in 0..n {
                out[[r, c]] = self.entries[[c, r]].conj();
            }
        }
        Self { entries: out }
    }

    /// The certificate `max |M†M - I|`; ≤ `TOL_UNITARY` for valid unitaries.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim();
        let prod = self.adjoint().entries.dot(&self.entries);
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in 0..n {
                let expect = if r == c { C64::ONE } else { C64::ZERO };
                worst = worst.max((prod[[r, c]] - expect).norm());
            }
        }
        worst
    }

    /// Largest entrywise difference against another matrix.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::ShapeMismatch(format!(
                "dim {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self
            .entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

impl std::ops::Mul for &UnitaryMatrix {
    type Output = UnitaryMatrix;

    /// Matrix product `self · rhs` (rhs acts first on kets).
    fn mul(self, rhs: &UnitaryMatrix) -> UnitaryMatrix {
        assert_eq!(self.dim(), rhs.dim(), "matrix product dimension mismatch");
        UnitaryMatrix::from_unitary_parts(self.entries.dot(&rhs.entries))
    }
}

/// Kronecker product with the left factor owning the coarse block index:
/// `out[p*db + q, r*db + s] = a[p, r] * b[q, s]`.
pub fn kron(a: &UnitaryMatrix, b: &UnitaryMatrix) -> Result<UnitaryMatrix> {
    let (da, db) = (a.dim(), b.dim());
    let dim = da
        .checked_mul(db)
        .filter(|&n| n <= DENSE_DIM_CAP)
        .ok_or(Error::SizeLimit {
            dim: da.saturating_mul(db),
            cap: DENSE_DIM_CAP,
            what: "dense operator",
        })?;
    let mut out = Array2::zeros((dim, dim));
    for p in 0..da {
        for r in 0..da {
            let apr = a.entries[[p, r]];
            if apr == C64::ZERO {
                continue;
            }
            for q in 0..db {
                for s in 0..db {
                    out[[p * db + q, r * db + s]] = apr * b.entries[[q, s]];
                }
            }
        }
    }
    Ok(UnitaryMatrix::from_unitary_parts(out))
}

/// `m` multiplied `e` times, by repeated squaring; `e = 0` gives the identity.
pub fn mat_pow(m: &UnitaryMatrix, e: usize) -> UnitaryMatrix {
    let mut result = UnitaryMatrix::identity(m.dim());
    let mut base = m.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = &base * &result;
        }
        base = &base * &base;
        e >>= 1;
    }
    result
}

/// Applies `m` to the addressed tensor factor of `v`, leaving the rest alone.
pub fn apply(m: &UnitaryMatrix, v: &StateVector, subsystem: usize) -> Result<StateVector> {
    let dims = v.dims();
    if subsystem >= dims.len() {
        return Err(Error::IndexOutOfRange {
            index: subsystem,
            dim: dims.len(),
        });
    }
    let d = dims[subsystem];
    if m.dim() != d {
        return Err(Error::ShapeMismatch(format!(
            "matrix dim {} vs subsystem dim {}",
            m.dim(),
            d
        )));
    }
    let stride: usize = dims[subsystem + 1..].iter().product();
    let block = d * stride;
    let amps = v.amplitudes();
    let mut out = amps.to_vec();
    let mut scratch = vec![C64::ZERO; d];
    for base in (0..amps.len()).step_by(block) {
        for r in 0..stride {
            for (k, slot) in scratch.iter_mut().enumerate() {
                *slot = amps[base + k * stride + r];
            }
            for row in 0..d {
                let mut acc = C64::ZERO;
                for (col, x) in scratch.iter().enumerate() {
                    acc += m.entries[[row, col]] * x;
                }
                out[base + row * stride + r] = acc;
            }
        }
    }
    Ok(StateVector::from_raw(dims.to_vec(), out))
}

/// Applies a dense operator on the whole space (`m.dim == v.total_dim`).
pub fn apply_full(m: &UnitaryMatrix, v: &StateVector) -> Result<StateVector> {
    if m.dim() != v.total_dim() {
        return Err(Error::ShapeMismatch(format!(
            "operator dim {} vs state dim {}",
            m.dim(),
            v.total_dim()
        )));
    }
    let amps = Array1::from_vec(v.amplitudes().to_vec());
    let out = m.entries.dot(&amps);
    Ok(StateVector::from_raw(v.dims().to_vec(), out.to_vec()))
}

/// Inner product `<a|b>`.
pub fn inner(a: &StateVector, b: &StateVector) -> Result<C64> {
    if a.dims() != b.dims() {
        return Err(Error::ShapeMismatch(format!(
            "dims {:?} vs {:?}",
            a.dims(),
            b.dims()
        )));
    }
    Ok(a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// `|<a|b>|^2`, clamped into [0, 1].
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(inner(a, b)?.norm_sqr().min(1.0))
}

/// Schmidt coefficients of `v` across the cut after the first `cut`
/// subsystems, sorted in descending order. There are
/// `min(left_dim, right_dim)` of them and their squares sum to 1 for a
/// normalized state.
pub fn schmidt_values(v: &StateVector, cut: usize) -> Result<Vec<f64>> {
    let dims = v.dims();
    if cut == 0 || cut >= dims.len() {
        return Err(Error::IndexOutOfRange {
            index: cut,
            dim: dims.len(),
        });
    }
    let left: usize = dims[..cut].iter().product();
    let right: usize = dims[cut..].iter().product();
    let amps = v.amplitudes();
    // Gram matrix on the smaller side; its eigenvalues are the squared
    // Schmidt coefficients.
    let n = left.min(right);
    let mut gram = Array2::zeros((n, n));
    if left <= right {
        for i in 0..n {
            for j in 0..n {
                let mut acc = C64::ZERO;
                for r in 0..right {
                    acc += amps[i * right + r] * amps[j * right + r].conj();
                }
                gram[[i, j]] = acc;
            }
        }
    } else {
        for i in 0..n {
            for j in 0..n {
                let mut acc = C64::ZERO;
                for l in 0..left {
                    acc += amps[l * right + i].conj() * amps[l * right + j];
                }
                gram[[i, j]] = acc;
            }
        }
    }
    let mut values: Vec<f64> = hermitian_eigenvalues(&gram)
        .into_iter()
        .map(|lambda| lambda.max(0.0).sqrt())
        .collect();
    values.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    Ok(values)
}

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi sweeps with complex
/// rotations. Sizes here are tiny (≤ 16), so no pivoting strategy is needed.
fn hermitian_eigenvalues(g: &Array2<C64>) -> Vec<f64> {
    let n = g.nrows();
    let mut a = g.clone();
    let scale: f64 = a.iter().map(|x| x.norm_sqr()).sum::<f64>().max(1.0);
    for _ in 0..60 {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[[p, q]].norm_sqr())
            .sum();
        if off <= 1e-28 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[[p, q]];
                let r = apq.norm();
                if r < 1e-300 {
                    continue;
                }
                // Absorb the phase of a_pq, then a standard real rotation.
                let phase = apq / r;
                let app = a[[p, p]].re;
                let aqq = a[[q, q]].re;
                let theta = 0.5 * (2.0 * r).atan2(aqq - app);
                let (c, s) = (theta.cos(), theta.sin());
                let jpq = C64::from(s);
                let jqq = phase.conj() * c;
                let jqp = -phase.conj() * s;
                // Columns: A <- A J.
                for k in 0..n {
                    let akp = a[[k, p]];
                    let akq = a[[k, q]];
                    a[[k, p]] = akp * c + akq * jqp;
                    a[[k, q]] = akp * jpq + akq * jqq;
                }
                // Rows: A <- J† A.
                for k in 0..n {
                    let apk = a[[p, k]];
                    let aqk = a[[q, k]];
                    a[[p, k]] = apk * c + aqk * jqp.conj();
                    a[[q, k]] = apk * jpq.conj() + aqk * jqq.conj();
                }
            }
        }
    }
    (0..n).map(|k| a[[k, k]].re).collect()
}

/// Uniformly seeded random normalized state (test and verification input).
pub fn random_state<R: Rng>(dims: &[usize], rng: &mut R) -> StateVector {
    let total: usize = dims.iter().product();
    let mut amps: Vec<C64> = (0..total)
        .map(|_| {
            C64::new(
                rng.random::<f64>() * 2.0 - 1.0,
                rng.random::<f64>() * 2.0 - 1.0,
            )
        })
        .collect();
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    StateVector::from_raw(dims.to_vec(), amps)
}

/// Random unitary via Gram–Schmidt on a random complex matrix.
pub fn random_unitary<R: Rng>(dim: usize, rng: &mut R) -> UnitaryMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<C64> = (0..dim)
            .map(|_| {
                C64::new(
                    rng.random::<f64>() * 2.0 - 1.0,
                    rng.random::<f64>() * 2.0 - 1.0,
                )
            })
            .collect();
        for prev in &cols {
            let overlap: C64 = prev.iter().zip(&v).map(|(p, x)| p.conj() * x).sum();
            for (x, p) in v.iter_mut().zip(prev) {
                *x -= overlap * p;
            }
        }
        let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue; // degenerate draw, retry this column
        }
        for x in &mut v {
            *x /= norm;
        }
        cols.push(v);
    }
    let mut entries = Array2::zeros((dim, dim));
    for (c, col) in cols.iter().enumerate() {
        for (r, x) in col.iter().enumerate() {
            entries[[r, c]] = *x;
        }
    }
    UnitaryMatrix::from_unitary_parts(entries)
}
