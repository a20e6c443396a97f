//! Trailing: marks accumulate on a uniform grid over `[0, 1]` and evaporate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mark::Mark;
use crate::scalar::Scalar;
use crate::smf::{smf, SmfParams};

/// Intensity field sampled at the centres of `bins` uniform bins on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Track<T = f64> {
    pub intensities: Vec<T>,
    /// Number of deposits made so far.
    pub step: u64,
}

/// Centre of bin `b` on a grid of `bins` bins.
#[inline]
pub fn bin_center<T: Scalar>(b: usize, bins: usize) -> T {
    (T::count(b) + T::lit(0.5)) / T::count(bins)
}

impl<T: Scalar> Track<T> {
    pub fn empty(bins: usize) -> Self {
        Self {
            intensities: vec![T::zero(); bins],
            step: 0,
        }
    }

    pub fn bins(&self) -> usize {
        self.intensities.len()
    }

    pub fn total(&self) -> T {
        self.intensities.iter().copied().sum()
    }

    pub fn max(&self) -> T {
        self.intensities.iter().copied().fold(T::zero(), T::max)
    }

    /// Evaporates the field by the retain factor `theta` and adds `mark`.
    pub fn deposit(&mut self, mark: &Mark<T>, theta: T) {
        let bins = self.bins();
        let n = T::count(bins);
        for v in self.intensities.iter_mut() {
            *v *= theta;
        }
        // Only bins whose centre falls inside the mark's base receive intensity.
        let (lo, hi) = mark.support();
        let first = ((lo * n - T::lit(0.5)).floor().max(T::zero())).to_usize().unwrap_or(0);
        let last = ((hi * n + T::lit(0.5)).ceil().to_usize().unwrap_or(bins)).min(bins);
        for b in first..last {
            self.intensities[b] += mark.intensity_at(bin_center(b, bins));
        }
        self.step += 1;
    }
}

/// Returns `track` evaporated by `theta` with `mark` added.
pub fn trail_step<T: Scalar>(track: &Track<T>, mark: &Mark<T>, theta: T) -> Track<T> {
    let mut next = track.clone();
    next.deposit(mark, theta);
    next
}

/// Asymptotic apex intensity under constant reinforcement, `I / (1 - theta)`.
pub fn saturation_height<T: Scalar>(intensity: T, theta: T) -> Result<T> {
    if !(theta > T::zero() && theta < T::one()) {
        return Err(Error::param("theta", format!("must lie in (0, 1), got {theta}")));
    }
    Ok(intensity / (T::one() - theta))
}

/// Pointwise unbiasing of a track, rescaled to intensity units:
/// `out[b] = i_max * smf(track[b])`.
pub fn unbias_track<T: Scalar>(track: &Track<T>, p: &SmfParams<T>, i_max: T) -> Track<T> {
    let mut out = Vec::with_capacity(track.bins());
    unbias_into(&track.intensities, p, i_max, &mut out);
    Track {
        intensities: out,
        step: track.step,
    }
}

pub(crate) fn unbias_into<T: Scalar>(src: &[T], p: &SmfParams<T>, i_max: T, out: &mut Vec<T>) {
    out.clear();
    out.extend(src.iter().map(|&v| i_max * smf(v, p)));
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn mark(center: f64, eps: f64) -> Mark<f64> {
        Mark::new(center, eps, 1.0)
    }

    #[test]
    fn first_deposit_samples_the_triangle() {
        let m = mark(0.25, 0.25);
        let t = trail_step(&Track::empty(1000), &m, 0.65);
        assert_eq!(t.step, 1);
        for (b, v) in t.intensities.iter().enumerate() {
            assert_abs_diff_eq!(*v, m.intensity_at(bin_center(b, 1000)), epsilon = 1e-15);
        }
    }

    #[test]
    fn deposit_touches_every_bin_under_the_base() {
        // brute force over all bins must agree with the windowed deposit
        for &(c, e) in &[(0.0, 0.2), (1.0, 0.2), (0.37, 0.013), (0.5, 0.9), (0.0004, 0.0003)] {
            let m = mark(c, e);
            let t = trail_step(&Track::empty(1000), &m, 0.5);
            for (b, v) in t.intensities.iter().enumerate() {
                assert_eq!(*v, m.intensity_at(bin_center(b, 1000)), "c={c} e={e} b={b}");
            }
        }
    }

    #[test]
    fn two_deposits_at_same_center() {
        // 1 + 0.65
        let m = mark(0.5005, 0.2);
        let t = trail_step(&trail_step(&Track::empty(1000), &m, 0.65), &m, 0.65);
        assert_abs_diff_eq!(t.intensities[500], 1.65, epsilon = 1e-12);
    }

    #[test]
    fn saturation_height_values() {
        assert_abs_diff_eq!(saturation_height(1.0, 0.65).unwrap(), 1.0 / 0.35, epsilon = 1e-12);
        assert_eq!(saturation_height(2.0, 0.5).unwrap(), 4.0);
        assert!(saturation_height(1.0, 1.0).is_err());
        assert!(saturation_height(1.0, 0.0).is_err());
        assert!(saturation_height(1.0, -0.1).is_err());
    }

    #[test]
    fn unbias_boundaries() {
        let p = SmfParams::new(0.15, 0.75).unwrap();
        let i_max = 1.0 / 0.35;
        let zero = unbias_track(&Track::empty(100), &p, i_max);
        assert!(zero.intensities.iter().all(|&v| v == 0.0));
        let sat = Track {
            intensities: vec![i_max; 100],
            step: 3,
        };
        assert!(unbias_track(&sat, &p, i_max).intensities.iter().all(|&v| v == i_max));
        let mid = Track {
            intensities: vec![0.45; 100],
            step: 3,
        };
        for v in unbias_track(&mid, &p, i_max).intensities {
            assert_abs_diff_eq!(v, 0.5 * i_max, epsilon = 1e-12);
        }
    }
}
