//! Constructors for the named gates and states: cyclic shift gates, Fourier
//! control states, and generalized Bell states in any dimension d ≥ 2.

use ndarray::Array2;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{StateVector, UnitaryMatrix, C64};

/// Identifies the generalized Bell state `|φ_{i,j}>` of a d×d system:
/// `i` is the phase index, `j` the shift index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BellIndex {
    d: usize,
    i: usize,
    j: usize,
}

impl BellIndex {
    pub fn new(d: usize, i: usize, j: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::DimensionTooSmall(d));
        }
        for idx in [i, j] {
            if idx >= d {
                return Err(Error::IndexOutOfRange { index: idx, dim: d });
            }
        }
        Ok(Self { d, i, j })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn j(&self) -> usize {
        self.j
    }

    /// Position in the lexicographic (i, j) enumeration of the d² states.
    pub fn flat(&self) -> usize {
        self.i * self.d + self.j
    }

    pub fn from_flat(d: usize, flat: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::DimensionTooSmall(d));
        }
        if flat >= d * d {
            return Err(Error::IndexOutOfRange {
                index: flat,
                dim: d * d,
            });
        }
        Ok(Self {
            d,
            i: flat / d,
            j: flat % d,
        })
    }
}

impl std::fmt::Display for BellIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// Index of a Fourier-basis control state `|D_idx>` in dimension d.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FourierIndex {
    d: usize,
    idx: usize,
}

impl FourierIndex {
    pub fn new(d: usize, idx: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::DimensionTooSmall(d));
        }
        if idx >= d {
            return Err(Error::IndexOutOfRange { index: idx, dim: d });
        }
        Ok(Self { d, idx })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn idx(&self) -> usize {
        self.idx
    }
}

/// `ω^exp` for `ω = e^{2πi/d}`, with the exponent reduced mod d first so the
/// angle never leaves [0, 2π).
pub fn root_of_unity(d: usize, exp: i64) -> C64 {
    let e = exp.rem_euclid(d as i64) as f64;
    C64::from_polar(1.0, 2.0 * std::f64::consts::PI * e / d as f64)
}

/// The cyclic shift gate `|k> -> |(k+1) mod d>`, an exact 0/1 permutation
/// matrix. At d = 2 this is Pauli-X.
pub fn shift(d: usize) -> Result<UnitaryMatrix> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    let mut entries = Array2::zeros((d, d));
    for k in 0..d {
        entries[[(k + 1) % d, k]] = C64::ONE;
    }
    Ok(UnitaryMatrix::new(entries).expect("permutation matrices are unitary"))
}

/// The Fourier control state `|D_idx> = (1/√d) Σ_k ω^{k·idx} |k>`.
pub fn fourier_state(idx: FourierIndex) -> StateVector {
    let d = idx.d();
    let scale = 1.0 / (d as f64).sqrt();
    let amps: Vec<C64> = (0..d)
        .map(|k| root_of_unity(d, (k * idx.idx()) as i64) * scale)
        .collect();
    StateVector::new(vec![d], amps).expect("Fourier states are normalized")
}

/// The generalized Bell state
/// `|φ_{i,j}> = (1/√d) Σ_k ω^{ik} |k>_A |(k+j) mod d>_B`
/// as a two-subsystem state with dims `[d, d]`.
pub fn bell_state(idx: BellIndex) -> StateVector {
    let d = idx.d();
    let scale = 1.0 / (d as f64).sqrt();
    let mut amps = vec![C64::ZERO; d * d];
    for k in 0..d {
        let partner = (k + idx.j()) % d;
        amps[k * d + partner] = root_of_unity(d, (idx.i() * k) as i64) * scale;
    }
    StateVector::new(vec![d, d], amps).expect("Bell states are normalized")
}

/// All d² Bell states in lexicographic (i, j) order.
pub fn bell_basis(d: usize) -> Result<Vec<StateVector>> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    let mut basis = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            basis.push(bell_state(BellIndex::new(d, i, j)?));
        }
    }
    Ok(basis)
}
