use crate::error::{Error, Result};
use crate::special::{gauss_weight, interval_mass, INV_SQRT_2PI};

/// Gaps and interval lengths below this are collapsed by
/// [`IntervalUnion1D::normalize`].
pub const MERGE_TOL: f64 = 1e-9;

/// A finite union of open intervals on the extended real line.
///
/// Intervals are sorted, pairwise disjoint and separated by strictly positive
/// gaps. Endpoints may be `±∞`; every finite endpoint is a boundary point.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalUnion1D {
    intervals: Vec<(f64, f64)>,
}

/// Exterior unit normal at a boundary point of a 1D set: `+1` at the right end
/// of an interval, `-1` at the left end.
pub type Normal = f64;

impl IntervalUnion1D {
    /// Sorts, merges and cleans an arbitrary list of intervals.
    ///
    /// Intervals shorter than [`MERGE_TOL`] are dropped and gaps shorter than
    /// it are closed, so the Gaussian measure moves by at most
    /// `MERGE_TOL / √(2π)` per collapsed feature.
    pub fn normalize<I>(raw: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let mut items = Vec::new();
        for (lo, hi) in raw {
            if lo.is_nan() || hi.is_nan() || lo > hi {
                return Err(Error::InvalidInterval { lo, hi });
            }
            if lo == hi || hi - lo < MERGE_TOL {
                continue;
            }
            items.push((lo, hi));
        }
        Ok(Self::merge_sorted(items, MERGE_TOL))
    }

    /// Canonicalization that only merges overlapping or touching intervals.
    /// Used for the results of set algebra, which must not lose mass.
    fn exact<I>(raw: I) -> Self
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let items = raw.into_iter().filter(|(lo, hi)| lo < hi).collect();
        Self::merge_sorted(items, 0.0)
    }

    fn merge_sorted(mut items: Vec<(f64, f64)>, gap_tol: f64) -> Self {
        items.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(items.len());
        for (lo, hi) in items {
            match out.last_mut() {
                Some(last) if lo <= last.1 || lo - last.1 < gap_tol => {
                    last.1 = last.1.max(hi);
                }
                _ => out.push((lo, hi)),
            }
        }
        Self { intervals: out }
    }

    pub fn empty() -> Self {
        Self { intervals: Vec::new() }
    }

    pub fn whole_line() -> Self {
        Self { intervals: vec![(f64::NEG_INFINITY, f64::INFINITY)] }
    }

    /// `(-∞, s)`.
    pub fn lower_half_line(s: f64) -> Self {
        Self::exact([(f64::NEG_INFINITY, s)])
    }

    /// `(t, ∞)`.
    pub fn upper_half_line(t: f64) -> Self {
        Self::exact([(t, f64::INFINITY)])
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// True for `(-∞, s)` and `(t, ∞)` with finite endpoint, the 1D half-spaces.
    pub fn is_half_line(&self) -> bool {
        match self.intervals.as_slice() {
            [(lo, hi)] => (lo.is_infinite()) != (hi.is_infinite()),
            _ => false,
        }
    }

    /// Finite endpoints with their exterior normals, in increasing order.
    pub fn boundary(&self) -> Vec<(f64, Normal)> {
        let mut pts = Vec::with_capacity(2 * self.intervals.len());
        for &(lo, hi) in &self.intervals {
            if lo.is_finite() {
                pts.push((lo, -1.0));
            }
            if hi.is_finite() {
                pts.push((hi, 1.0));
            }
        }
        pts
    }

    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|&(lo, hi)| interval_mass(lo, hi)).sum()
    }

    /// Gaussian perimeter: `Σ e^{-x²/2}` over finite endpoints.
    pub fn perimeter(&self) -> f64 {
        self.boundary().iter().map(|&(x, _)| gauss_weight(x)).sum()
    }

    /// `∫_E x dγ`.
    pub fn barycenter(&self) -> f64 {
        self.intervals.iter().map(|&(lo, hi)| (gauss_weight(lo) - gauss_weight(hi)) * INV_SQRT_2PI).sum()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|&(lo, hi)| lo < x && x < hi)
    }

    pub fn complement(&self) -> Self {
        let mut out = Vec::with_capacity(self.intervals.len() + 1);
        let mut cursor = f64::NEG_INFINITY;
        for &(lo, hi) in &self.intervals {
            if lo > cursor {
                out.push((cursor, lo));
            }
            cursor = hi;
        }
        if cursor < f64::INFINITY {
            out.push((cursor, f64::INFINITY));
        }
        Self::exact(out)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = a[i].0.max(b[j].0);
            let hi = a[i].1.min(b[j].1);
            if lo < hi {
                out.push((lo, hi));
            }
            if a[i].1 < b[j].1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::exact(out)
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::exact(self.intervals.iter().chain(other.intervals.iter()).copied())
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.intersection(&other.complement())
    }

    pub fn symmetric_difference(&self, other: &Self) -> Self {
        self.difference(other).union(&other.difference(self))
    }

    /// Image under `x ↦ -x`.
    pub fn reflect(&self) -> Self {
        Self::exact(self.intervals.iter().map(|&(lo, hi)| (-hi, -lo)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::phi;

    const INF: f64 = f64::INFINITY;

    #[test]
    fn normalize_merges_below_tolerance() {
        let u = IntervalUnion1D::normalize([(0.0, 1.0), (1.0 + 1e-15, 2.0)]).unwrap();
        assert_eq!(u.intervals(), &[(0.0, 2.0)]);
    }

    #[test]
    fn normalize_sorts() {
        let u = IntervalUnion1D::normalize([(2.0, 3.0), (-1.0, 0.0)]).unwrap();
        assert_eq!(u.intervals(), &[(-1.0, 0.0), (2.0, 3.0)]);
    }

    #[test]
    fn normalize_keeps_canonical_rays() {
        let raw = [(-INF, -1.0), (1.0, INF)];
        let u = IntervalUnion1D::normalize(raw).unwrap();
        assert_eq!(u.intervals(), &raw);
    }

    #[test]
    fn normalize_drops_degenerate_and_rejects_reversed() {
        let u = IntervalUnion1D::normalize([(0.5, 0.5), (1.0, 1.0 + 1e-12), (2.0, 3.0)]).unwrap();
        assert_eq!(u.intervals(), &[(2.0, 3.0)]);
        assert!(matches!(IntervalUnion1D::normalize([(1.0, 0.0)]), Err(Error::InvalidInterval { .. })));
    }

    #[test]
    fn overlapping_inputs_merge() {
        let u = IntervalUnion1D::normalize([(0.0, 2.0), (1.0, 3.0), (-INF, -5.0)]).unwrap();
        assert_eq!(u.intervals(), &[(-INF, -5.0), (0.0, 3.0)]);
    }

    #[test]
    fn complement_cases() {
        let l = IntervalUnion1D::lower_half_line(0.0);
        assert_eq!(l.complement().intervals(), &[(0.0, INF)]);
        let mid = IntervalUnion1D::normalize([(-1.0, 1.0)]).unwrap();
        assert_eq!(mid.complement().intervals(), &[(-INF, -1.0), (1.0, INF)]);
        assert_eq!(IntervalUnion1D::empty().complement(), IntervalUnion1D::whole_line());
        assert!(IntervalUnion1D::whole_line().complement().is_empty());
    }

    #[test]
    fn boundary_and_normals() {
        let u = IntervalUnion1D::normalize([(-INF, -1.0), (0.5, 2.0)]).unwrap();
        assert_eq!(u.boundary(), vec![(-1.0, 1.0), (0.5, -1.0), (2.0, 1.0)]);
    }

    #[test]
    fn symmetric_difference_two_rays_vs_half_line() {
        let a = 1.2;
        let e = IntervalUnion1D::normalize([(-INF, -a), (a, INF)]).unwrap();
        let h = IntervalUnion1D::lower_half_line(0.3);
        let d = e.symmetric_difference(&h);
        assert_eq!(d.intervals(), &[(-a, 0.3), (a, INF)]);
        let expected = phi(0.3) - phi(-a) + phi(-a);
        assert!((d.measure() - expected).abs() < 1e-15);
    }

    #[test]
    fn reflect_is_an_involution() {
        let u = IntervalUnion1D::normalize([(-INF, -2.0), (0.1, 0.4), (3.0, INF)]).unwrap();
        assert_eq!(u.reflect().reflect(), u);
        assert!((u.reflect().barycenter() + u.barycenter()).abs() < 1e-16);
    }

    #[test]
    fn half_line_detection() {
        assert!(IntervalUnion1D::lower_half_line(-1.0).is_half_line());
        assert!(IntervalUnion1D::upper_half_line(2.0).is_half_line());
        assert!(!IntervalUnion1D::whole_line().is_half_line());
        assert!(!IntervalUnion1D::normalize([(0.0, 1.0)]).unwrap().is_half_line());
    }
}
