//! Prototyping: fit a congruent triangle to an unbiased track, and compare
//! triangles by the ratio of intersection to union.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mark::Mark;
use crate::scalar::Scalar;
use crate::track::{bin_center, Track};

/// Triangular abstraction of a track: base `2 * half_base`, apex at `center`
/// with the saturation height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prototype<T = f64> {
    pub center: T,
    pub half_base: T,
    pub height: T,
}

impl<T: Scalar> Prototype<T> {
    pub fn as_mark(&self) -> Mark<T> {
        Mark::new(self.center, self.half_base, self.height)
    }

    /// Samples the triangle at the centres of `bins` uniform bins.
    pub fn sample(&self, bins: usize) -> Vec<T> {
        let m = self.as_mark();
        (0..bins).map(|b| m.intensity_at(bin_center(b, bins))).collect()
    }
}

/// Intersection over union of two congruent triangles, in closed form.
///
/// With centre distance `d` and half base `e`, the overlap is a triangle of
/// area `h (2e - d)^2 / (4e)` and each shape has area `e h`. The height
/// cancels. Both prototypes are expected to share `half_base` and `height`.
pub fn shape_similarity<T: Scalar>(a: &Prototype<T>, b: &Prototype<T>) -> T {
    debug_assert!((a.half_base - b.half_base).abs() <= T::epsilon() * a.half_base.max(T::one()));
    let e = a.half_base;
    let d = (a.center - b.center).abs();
    let two_e = e + e;
    if d >= two_e {
        return T::zero();
    }
    // Areas in units of e*h.
    let gap = two_e - d;
    let inter = gap * gap / (T::lit(4.0) * e * e);
    inter / (T::lit(2.0) - inter)
}

/// Pointwise intersection over union of two sampled fields, `Σ min / Σ max`.
///
/// Returns 0 when both fields are identically zero.
pub fn grid_similarity<T: Scalar>(a: &[T], b: &[T]) -> T {
    assert_eq!(a.len(), b.len(), "fields must share a grid");
    let (mut inter, mut union) = (T::zero(), T::zero());
    for (&x, &y) in a.iter().zip(b) {
        inter += x.min(y);
        union += x.max(y);
    }
    if union > T::zero() {
        inter / union
    } else {
        T::zero()
    }
}

/// Similarities this close to the best one are treated as ties.
pub fn tie_tolerance<T: Scalar>() -> T {
    T::epsilon().sqrt()
}

/// Exhaustive best-fit search for the prototype centre over all bin centres.
///
/// Holds the prototype triangle as a kernel of offsets around its apex plus
/// scratch buffers, so repeated fits on the same grid do not allocate.
#[derive(Debug, Clone)]
pub struct PrototypeFitter<T = f64> {
    bins: usize,
    half_base: T,
    height: T,
    /// Kernel value at bin offset `o` is `kernel[o + radius]`.
    kernel: Vec<T>,
    radius: usize,
    /// `kernel_prefix[i]` is the sum of the first `i` kernel entries.
    kernel_prefix: Vec<T>,
    /// Half base in bins.
    reach: T,
    /// Mass of the domain-clipped prototype centred on each bin.
    proto_mass: Vec<T>,
    /// Difference arrays for the overlap as a function of the centre bin:
    /// `overlap(k) = Σ_{i<=k} flat[i] + k * Σ_{i<=k} slope[i]`.
    flat: Vec<T>,
    slope: Vec<T>,
    scores: Vec<T>,
}

impl<T: Scalar> PrototypeFitter<T> {
    pub fn new(bins: usize, half_base: T, height: T) -> Self {
        let n = T::count(bins);
        // Positive kernel support: |o| < half_base * bins.
        let reach = half_base * n;
        let radius = reach.ceil().to_usize().unwrap_or(bins).saturating_sub(1).min(bins);
        let kernel: Vec<T> = (0..=2 * radius)
            .map(|i| {
                let o = T::count(i) - T::count(radius);
                let r = T::one() - o.abs() / reach;
                if r > T::zero() {
                    height * r
                } else {
                    T::zero()
                }
            })
            .collect();
        let mut kernel_prefix = Vec::with_capacity(kernel.len() + 1);
        kernel_prefix.push(T::zero());
        let mut acc = T::zero();
        for &k in &kernel {
            acc += k;
            kernel_prefix.push(acc);
        }
        let mut fitter = Self {
            bins,
            half_base,
            height,
            kernel,
            radius,
            kernel_prefix,
            reach,
            proto_mass: Vec::new(),
            flat: vec![T::zero(); bins + 1],
            slope: vec![T::zero(); bins + 1],
            scores: Vec::with_capacity(bins),
        };
        fitter.proto_mass = (0..bins).map(|k| fitter.clipped_kernel_mass(k)).collect();
        fitter
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    /// Bin window `[lo, hi)` covered by a prototype centred on bin `k`.
    #[inline]
    fn window(&self, k: usize) -> (usize, usize) {
        (k.saturating_sub(self.radius), (k + self.radius + 1).min(self.bins))
    }

    #[inline]
    fn prototype_mass(&self, k: usize) -> T {
        self.proto_mass[k]
    }

    /// Mass of the (domain-clipped) prototype centred on bin `k`.
    fn clipped_kernel_mass(&self, k: usize) -> T {
        let (lo, hi) = self.window(k);
        let k0 = lo + self.radius - k;
        let k1 = hi + self.radius - k;
        self.kernel_prefix[k1] - self.kernel_prefix[k0]
    }

    #[inline]
    fn overlap(&self, field: &[T], k: usize) -> T {
        let (lo, hi) = self.window(k);
        let kern = &self.kernel[lo + self.radius - k..hi + self.radius - k];
        let field = &field[lo..hi];
        // four independent accumulators so the loop vectorizes
        let mut acc = [T::zero(); 4];
        let mut fc = field.chunks_exact(4);
        let mut kc = kern.chunks_exact(4);
        for (f, p) in (&mut fc).zip(&mut kc) {
            for i in 0..4 {
                acc[i] += if f[i] < p[i] { f[i] } else { p[i] };
            }
        }
        let tail: T = fc
            .remainder()
            .iter()
            .zip(kc.remainder())
            .map(|(&t, &p)| if t < p { t } else { p })
            .sum();
        (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
    }

    /// Similarity between the field and the prototype centred on bin `k`.
    pub fn similarity_at(&self, field: &[T], k: usize) -> T {
        let total: T = field.iter().copied().sum();
        let m = self.overlap(field, k);
        m / (total + self.prototype_mass(k) - m)
    }

    /// Overlap `Σ_j min(P_k[j], T[j])` for every centre bin `k`, in `O(bins + radius)`.
    ///
    /// With offset `o = j - k`, bin `j` contributes the prototype value
    /// `h (1 - |o| / R)` once that drops to `T[j]` or below, i.e. for
    /// `|o| >= q_j = ceil(R (1 - T[j] / h))`, and `T[j]` closer in. Seen as a
    /// function of `k`, that is one constant range and two linear ranges, which
    /// are accumulated in difference arrays.
    pub fn overlaps(&mut self, field: &[T]) -> Vec<T> {
        let mut out = Vec::with_capacity(self.bins);
        self.overlaps_into(field, &mut out);
        out
    }

    fn overlaps_into(&mut self, field: &[T], out: &mut Vec<T>) {
        assert_eq!(field.len(), self.bins, "track grid does not match fitter grid");
        let n = self.bins as isize;
        let r = self.radius as isize;
        let (h, reach) = (self.height, self.reach);
        let step = h / reach;
        self.flat.iter_mut().for_each(|v| *v = T::zero());
        self.slope.iter_mut().for_each(|v| *v = T::zero());
        let (flat, slope) = (&mut self.flat, &mut self.slope);
        let mut add = |a: isize, b: isize, c: T, s: T| {
            let (a, b) = (a.max(0), b.min(n - 1));
            if a > b {
                return;
            }
            flat[a as usize] += c;
            flat[b as usize + 1] -= c;
            slope[a as usize] += s;
            slope[b as usize + 1] -= s;
        };
        for (j, &t) in field.iter().enumerate() {
            if !(t > T::zero()) {
                continue;
            }
            let j = j as isize;
            let jt = T::count(j as usize);
            let q = if t >= h {
                0
            } else {
                (reach * (T::one() - t / h)).ceil().to_isize().unwrap_or(isize::MAX).max(0)
            };
            if q >= 1 {
                let span = (q - 1).min(r);
                add(j - span, j + span, t, T::zero());
            }
            if q <= r {
                // centre left of j: prototype value h - step * (j - k)
                add(j - r, j - q, h - step * jt, step);
                // centre right of j: h - step * (k - j)
                add(j + q.max(1), j + r, h + step * jt, -step);
            }
        }
        let (mut c, mut s) = (T::zero(), T::zero());
        out.clear();
        out.extend((0..self.bins).map(|k| {
            c += self.flat[k];
            s += self.slope[k];
            c + s * T::count(k)
        }));
    }

    /// Finds the bin whose centre maximizes the track/prototype similarity.
    ///
    /// Similarities within `sqrt(epsilon)` of the maximum count as ties and
    /// resolve to the smallest centre.
    pub fn best_bin(&mut self, field: &[T]) -> Result<(usize, T)> {
        let total: T = field.iter().copied().sum();
        if !(total > T::zero()) {
            return Err(Error::DegenerateTrack);
        }
        let mut scores = std::mem::take(&mut self.scores);
        self.overlaps_into(field, &mut scores);
        for (m, &p) in scores.iter_mut().zip(&self.proto_mass) {
            *m = *m / (total + p - *m);
        }
        let max = scores.iter().copied().fold(T::neg_infinity(), T::max);
        let tol = tie_tolerance::<T>();
        let k = scores.iter().position(|&s| s >= max - tol).unwrap_or(0);
        let best = (k, scores[k]);
        self.scores = scores;
        Ok(best)
    }

    /// Fits the prototype to an unbiased track.
    pub fn fit(&mut self, unbiased: &Track<T>) -> Result<Prototype<T>> {
        let (k, _) = self.best_bin(&unbiased.intensities)?;
        Ok(Prototype {
            center: bin_center(k, self.bins),
            half_base: self.half_base,
            height: self.height,
        })
    }
}

/// Fits a prototype of the given half base and height to an unbiased track.
pub fn fit_prototype<T: Scalar>(unbiased: &Track<T>, half_base: T, height: T) -> Result<Prototype<T>> {
    PrototypeFitter::new(unbiased.bins(), half_base, height).fit(unbiased)
}
