//! The LOCC discrimination bound: with local operations and classical
//! communication alone, at most `d1·d2 / (Σ_i α_i)²` equally entangled pure
//! states can be perfectly distinguished. For maximally entangled states of
//! two d-level systems that is exactly d, while the switch protocol
//! distinguishes all d² of them.

use crate::error::{Error, Result};

/// A bipartite discrimination problem: subsystem dimensions and the common
/// Schmidt spectrum of the states to be distinguished.
#[derive(Debug, Clone)]
pub struct LoccBoundInput {
    d1: usize,
    d2: usize,
    schmidt: Vec<f64>,
}

impl LoccBoundInput {
    /// Validates dimensions and that `schmidt` is a normalized amplitude
    /// list: nonnegative entries with Σ α_i² = 1.
    pub fn new(d1: usize, d2: usize, schmidt: Vec<f64>) -> Result<Self> {
        for d in [d1, d2] {
            if d < 2 {
                return Err(Error::DimensionTooSmall(d));
            }
        }
        if schmidt.is_empty() || schmidt.iter().all(|&a| a == 0.0) {
            return Err(Error::InvalidSchmidt(
                "all-zero Schmidt coefficient list".into(),
            ));
        }
        if schmidt.len() > d1.min(d2) {
            return Err(Error::InvalidSchmidt(format!(
                "{} coefficients exceed min(d1, d2) = {}",
                schmidt.len(),
                d1.min(d2)
            )));
        }
        if schmidt.iter().any(|&a| !a.is_finite() || a < 0.0) {
            return Err(Error::InvalidSchmidt(
                "coefficients must be finite and nonnegative".into(),
            ));
        }
        let norm_sq: f64 = schmidt.iter().map(|a| a * a).sum();
        if (norm_sq - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidSchmidt(format!(
                "squares sum to {norm_sq}, expected 1"
            )));
        }
        Ok(Self { d1, d2, schmidt })
    }

    /// The maximally entangled spectrum: d coefficients, each 1/√d.
    pub fn maximally_entangled(d: usize) -> Result<Self> {
        Self::new(d, d, vec![1.0 / (d as f64).sqrt(); d])
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn d2(&self) -> usize {
        self.d2
    }

    pub fn schmidt(&self) -> &[f64] {
        &self.schmidt
    }
}

/// The bound itself: `d1·d2 / (Σ_i α_i)²`. Returned as a real number; the
/// caller decides whether to floor it (the count interpretation).
pub fn locc_bound(input: &LoccBoundInput) -> f64 {
    let sum: f64 = input.schmidt.iter().sum();
    (input.d1 * input.d2) as f64 / (sum * sum)
}

/// The maximally entangled case, floored to a count. Analytically the ratio
/// is d·d/d = d; the floor snaps to the nearest integer first because the
/// floating-point sum lands a few ulps on either side of it.
pub fn bell_bound(d: usize) -> Result<usize> {
    let bound = locc_bound(&LoccBoundInput::maximally_entangled(d)?);
    let nearest = bound.round();
    let snapped = if (bound - nearest).abs() <= 1e-9 {
        nearest
    } else {
        bound.floor()
    };
    Ok(snapped as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximal_entanglement_bound_is_d() {
        for d in 2..=12 {
            assert_eq!(bell_bound(d).unwrap(), d);
        }
    }

    #[test]
    fn product_state_bound_is_full_dimension() {
        let input = LoccBoundInput::new(2, 2, vec![1.0, 0.0]).unwrap();
        assert_eq!(locc_bound(&input), 4.0);
    }

    #[test]
    fn intermediate_spectrum_lands_strictly_between() {
        let input =
            LoccBoundInput::new(3, 3, vec![0.5f64.sqrt(), 0.3f64.sqrt(), 0.2f64.sqrt()]).unwrap();
        let bound = locc_bound(&input);
        let sum = 0.5f64.sqrt() + 0.3f64.sqrt() + 0.2f64.sqrt();
        assert!((bound - 9.0 / (sum * sum)).abs() <= 1e-12);
        assert!(bound > 3.0 && bound < 9.0);
    }

    #[test]
    fn partially_entangled_pair_example() {
        let input = LoccBoundInput::new(4, 4, vec![0.8, 0.6, 0.0, 0.0]).unwrap();
        let bound = locc_bound(&input);
        assert!((bound - 16.0 / (1.4 * 1.4)).abs() <= 1e-12);
        assert!((bound - 8.1632653).abs() <= 1e-6);
    }

    #[test]
    fn invalid_spectra_are_rejected() {
        assert!(matches!(
            LoccBoundInput::new(2, 2, vec![0.0, 0.0]),
            Err(Error::InvalidSchmidt(_))
        ));
        assert!(matches!(
            LoccBoundInput::new(2, 2, vec![1.0, 1.0]),
            Err(Error::InvalidSchmidt(_))
        ));
        assert!(matches!(
            LoccBoundInput::new(2, 2, vec![0.5, 0.5, 0.5, 0.5]),
            Err(Error::InvalidSchmidt(_))
        ));
        assert!(LoccBoundInput::new(1, 2, vec![1.0]).is_err());
    }

    #[test]
    fn flattening_the_spectrum_never_raises_the_bound() {
        // a Robin Hood transfer between two probabilities flattens the
        // spectrum; Σ√p can only grow, so the bound can only shrink
        let probs = [0.6, 0.25, 0.1, 0.05];
        let to_input =
            |p: &[f64]| LoccBoundInput::new(4, 4, p.iter().map(|&x| x.sqrt()).collect()).unwrap();
        let mut current = probs.to_vec();
        let mut last_bound = locc_bound(&to_input(&current));
        for _ in 0..10 {
            // move a quarter of the gap from the largest to the smallest
            let (hi, _) = current
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .unwrap();
            let (lo, _) = current
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .unwrap();
            let delta = 0.25 * (current[hi] - current[lo]);
            current[hi] -= delta;
            current[lo] += delta;
            let bound = locc_bound(&to_input(&current));
            assert!(bound <= last_bound + 1e-12);
            last_bound = bound;
        }
    }
}
