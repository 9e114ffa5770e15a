//! Finite unions of closed intervals with exact rational endpoints.
//!
//! `IntervalSet` is the universal value type for lifetimes: the times during
//! which a link (or walk) is available. The representation is canonical —
//! sorted, disjoint, with touching intervals merged — so set equality is
//! plain structural equality.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A finite union of disjoint closed intervals of the real line.
///
/// Endpoints may be `-inf`/`+inf`; the empty list is the empty set and the
/// single interval `(-inf, +inf)` is all of the line. Degenerate intervals
/// `[x,x]` are legal members.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntervalSet {
    ivs: Vec<(Scalar, Scalar)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { ivs: Vec::new() }
    }

    /// The whole real line.
    pub fn full() -> Self {
        IntervalSet {
            ivs: vec![(Scalar::NegInf, Scalar::PosInf)],
        }
    }

    /// Single closed interval `[lo, hi]`. Panics if `lo > hi`.
    pub fn interval(lo: Scalar, hi: Scalar) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        IntervalSet { ivs: vec![(lo, hi)] }
    }

    /// Integer-endpoint convenience constructor.
    pub fn of(lo: i64, hi: i64) -> Self {
        Self::interval(Scalar::from_int(lo), Scalar::from_int(hi))
    }

    pub fn point(x: Scalar) -> Self {
        IntervalSet {
            ivs: vec![(x.clone(), x)],
        }
    }

    /// Builds a set from arbitrary (possibly overlapping, unsorted) intervals.
    pub fn from_intervals<I: IntoIterator<Item = (Scalar, Scalar)>>(iter: I) -> Self {
        let mut ivs: Vec<(Scalar, Scalar)> = iter
            .into_iter()
            .inspect(|(lo, hi)| assert!(lo <= hi, "interval endpoints out of order"))
            .collect();
        ivs.sort();
        let mut out: Vec<(Scalar, Scalar)> = Vec::with_capacity(ivs.len());
        for (lo, hi) in ivs {
            match out.last_mut() {
                // closed intervals merge when touching ([0,1] u [1,2] = [0,2])
                Some((_, phi)) if lo <= *phi => {
                    if hi > *phi {
                        *phi = hi;
                    }
                }
                _ => out.push((lo, hi)),
            }
        }
        IntervalSet { ivs: out }
    }

    pub fn intervals(&self) -> &[(Scalar, Scalar)] {
        &self.ivs
    }

    pub fn is_empty(&self) -> bool {
        self.ivs.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.ivs.len() == 1 && self.ivs[0] == (Scalar::NegInf, Scalar::PosInf)
    }

    pub fn is_bounded(&self) -> bool {
        self.ivs
            .iter()
            .all(|(lo, hi)| lo.is_finite() && hi.is_finite())
    }

    pub fn num_components(&self) -> usize {
        self.ivs.len()
    }

    pub fn contains(&self, t: &Scalar) -> bool {
        self.ivs
            .binary_search_by(|(lo, hi)| {
                if hi < t {
                    std::cmp::Ordering::Less
                } else if lo > t {
                    std::cmp::Ordering::Greater
                } else {
                    std::cmp::Ordering::Equal
                }
            })
            .is_ok()
    }

    pub fn is_subset_of(&self, other: &IntervalSet) -> bool {
        self.ivs.iter().all(|(lo, hi)| {
            other
                .ivs
                .iter()
                .any(|(olo, ohi)| olo <= lo && hi <= ohi)
        })
    }

    /// Set union; idempotent, commutative, associative.
    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        if self.is_empty() {
            return other.clone();
        }
        if other.is_empty() {
            return self.clone();
        }
        IntervalSet::from_intervals(self.ivs.iter().chain(other.ivs.iter()).cloned())
    }

    /// Set intersection.
    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.ivs.len() && j < other.ivs.len() {
            let (alo, ahi) = &self.ivs[i];
            let (blo, bhi) = &other.ivs[j];
            let lo = alo.clone().max(blo.clone());
            let hi = ahi.clone().min(bhi.clone());
            if lo <= hi {
                out.push((lo, hi));
            }
            if ahi <= bhi {
                i += 1;
            } else {
                j += 1;
            }
        }
        // pieces of an intersection are already disjoint and sorted
        IntervalSet { ivs: out }
    }

    /// Closure of `window \ self`, the set of disconnect times inside the window.
    ///
    /// The window must be a single interval (pass `IntervalSet::full()` to
    /// complement within the whole line).
    pub fn complement(&self, window: &IntervalSet) -> Result<IntervalSet> {
        if window.ivs.len() != 1 {
            return Err(Error::WindowNotSingleInterval(window.to_string()));
        }
        let (wlo, whi) = window.ivs[0].clone();
        let inside = self.intersect(window);
        let mut out = Vec::new();
        let mut cursor = wlo;
        for (lo, hi) in &inside.ivs {
            if *lo > cursor {
                // half-open gap [cursor, lo) closes to [cursor, lo]
                out.push((cursor.clone(), lo.clone()));
            }
            cursor = hi.clone();
        }
        if cursor < whi || (inside.is_empty() && cursor == whi) {
            out.push((cursor, whi));
        }
        Ok(IntervalSet::from_intervals(out))
    }

    /// Minkowski translate `{x + s : x in self}` by a finite shift.
    pub fn shift(&self, s: &Scalar) -> IntervalSet {
        assert!(s.is_finite(), "shift must be finite");
        IntervalSet {
            ivs: self
                .ivs
                .iter()
                .map(|(lo, hi)| (lo.add(s), hi.add(s)))
                .collect(),
        }
    }

    /// Thickening by `eps >= 0`: each `[lo,hi]` becomes `[lo-eps, hi+eps]`.
    pub fn thicken(&self, eps: &Scalar) -> IntervalSet {
        assert!(eps.is_finite() && !eps.is_negative(), "thicken needs finite eps >= 0");
        IntervalSet::from_intervals(
            self.ivs
                .iter()
                .map(|(lo, hi)| (lo.sub(eps), hi.add(eps))),
        )
    }

    /// Lebesgue measure; errors on unbounded sets.
    pub fn measure(&self) -> Result<Scalar> {
        let mut total = Scalar::zero();
        for (lo, hi) in &self.ivs {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InfiniteMeasure);
            }
            total = total.add(&hi.sub(lo));
        }
        Ok(total)
    }

    /// Distance from a finite point to this set (0 if inside, +inf if empty).
    pub fn distance_to_point(&self, x: &Scalar) -> Scalar {
        let mut best = Scalar::PosInf;
        for (lo, hi) in &self.ivs {
            if lo <= x && x <= hi {
                return Scalar::zero();
            }
            let d = if x < lo { lo.sub(x) } else { x.sub(hi) };
            best = best.min(d);
        }
        best
    }

    fn has_neg_ray(&self) -> bool {
        self.ivs.first().is_some_and(|(lo, _)| *lo == Scalar::NegInf)
    }

    fn has_pos_ray(&self) -> bool {
        self.ivs.last().is_some_and(|(_, hi)| *hi == Scalar::PosInf)
    }

    /// One-sided Hausdorff deviation `sup_{a in self} dist(a, other)`.
    fn directed_hausdorff(&self, other: &IntervalSet) -> Scalar {
        if self.is_empty() {
            return Scalar::zero();
        }
        if other.is_empty() {
            return Scalar::PosInf;
        }
        if (self.has_neg_ray() && !other.has_neg_ray())
            || (self.has_pos_ray() && !other.has_pos_ray())
        {
            return Scalar::PosInf;
        }
        let mut worst = Scalar::zero();
        // farthest point is an endpoint of self ...
        for (lo, hi) in &self.ivs {
            for e in [lo, hi] {
                if e.is_finite() {
                    worst = worst.max(other.distance_to_point(e));
                }
            }
        }
        // ... or an interior point of self spanning a gap of other, where the
        // tent function min(x - g_lo, g_hi - x) peaks at the gap midpoint
        for w in other.ivs.windows(2) {
            let glo = &w[0].1;
            let ghi = &w[1].0;
            let gap = self.intersect(&IntervalSet::interval(glo.clone(), ghi.clone()));
            let mid = glo.add(ghi).half();
            for (u, v) in &gap.ivs {
                let x = mid.clone().max(u.clone()).min(v.clone());
                let d = x.sub(glo).min(ghi.sub(&x));
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Exact Hausdorff distance. `0` when equal, `+inf` when exactly one side
    /// is empty or when thickening can never cover (bounded vs unbounded).
    pub fn hausdorff(&self, other: &IntervalSet) -> Scalar {
        self.directed_hausdorff(other)
            .max(other.directed_hausdorff(self))
    }
}

impl fmt::Display for IntervalSet {
    /// Canonical text form: `[a,b]u[c,d]`, `empty`, `R`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_canonical(f)
    }
}

impl IntervalSet {
    fn write_canonical(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "empty");
        }
        if self.is_full() {
            return write!(f, "R");
        }
        for (k, (lo, hi)) in self.ivs.iter().enumerate() {
            if k > 0 {
                write!(f, "u")?;
            }
            write!(f, "[{},{}]", lo, hi)?;
        }
        Ok(())
    }
}

impl fmt::Debug for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_canonical(f)
    }
}

impl FromStr for IntervalSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "empty" => return Ok(IntervalSet::empty()),
            "R" => return Ok(IntervalSet::full()),
            _ => {}
        }
        let err = || Error::IntervalParse(s.to_string());
        let mut ivs = Vec::new();
        for part in s.split('u') {
            let part = part.trim();
            let inner = part
                .strip_prefix('[')
                .and_then(|p| p.strip_suffix(']'))
                .ok_or_else(err)?;
            let (lo, hi) = inner.split_once(',').ok_or_else(err)?;
            let lo: Scalar = lo.parse()?;
            let hi: Scalar = hi.parse()?;
            if lo > hi {
                return Err(err());
            }
            ivs.push((lo, hi));
        }
        Ok(IntervalSet::from_intervals(ivs))
    }
}
