//! Barcodes (multisets of intervals) and optimal-matching distances.
//!
//! A matching between two barcodes pairs up some bars and charges each
//! unmatched bar the distance to its diagonal midpoint. The p-cost sums
//! p-th powers of per-bar costs (bars viewed as points `(birth, death)` in
//! the plane under the l^p norm); `p = inf` takes the max and is the
//! bottleneck distance. Everything is exact: finite-p distances are carried
//! as rational p-th powers, the bottleneck value is itself rational.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::interval::IntervalSet;
use crate::scalar::{Rat, Scalar};

/// One bar: birth/death endpoints with openness flags.
///
/// Openness is bookkeeping from zigzag extraction; matching costs ignore it
/// (a zero-measure effect on every p-cost).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BarcodeInterval {
    pub birth: Scalar,
    pub death: Scalar,
    pub open_left: bool,
    pub open_right: bool,
}

impl BarcodeInterval {
    pub fn closed(birth: Scalar, death: Scalar) -> Self {
        assert!(birth <= death, "bar endpoints out of order");
        BarcodeInterval {
            birth,
            death,
            open_left: false,
            open_right: false,
        }
    }

    pub fn length(&self) -> Scalar {
        self.death.sub(&self.birth)
    }

    pub fn contains(&self, t: &Scalar) -> bool {
        let left = if self.open_left {
            &self.birth < t
        } else {
            &self.birth <= t
        };
        let right = if self.open_right {
            t < &self.death
        } else {
            t <= &self.death
        };
        left && right
    }

    /// l^inf distance to another bar; mismatched infinite ends cost infinity.
    pub fn linf_to(&self, other: &BarcodeInterval) -> Scalar {
        self.birth
            .abs_diff(&other.birth)
            .max(self.death.abs_diff(&other.death))
    }

    /// l^inf distance to the diagonal midpoint: half the bar length.
    pub fn linf_diag(&self) -> Scalar {
        self.length().half()
    }

    /// p-th power of the l^p distance to another bar.
    pub fn lp_pow_to(&self, other: &BarcodeInterval, p: u32) -> Scalar {
        scalar_pow(&self.birth.abs_diff(&other.birth), p)
            .add(&scalar_pow(&self.death.abs_diff(&other.death), p))
    }

    /// p-th power of the l^p distance to the diagonal midpoint.
    pub fn lp_pow_diag(&self, p: u32) -> Scalar {
        let half = self.linf_diag();
        scalar_pow(&half, p).add(&scalar_pow(&half, p))
    }
}

fn scalar_pow(v: &Scalar, p: u32) -> Scalar {
    match v {
        Scalar::PosInf => Scalar::PosInf,
        Scalar::NegInf => unreachable!("distances are non-negative"),
        Scalar::Finite(r) => {
            let mut acc = Rat::from_integer(1);
            for _ in 0..p {
                acc *= r;
            }
            Scalar::Finite(acc)
        }
    }
}

impl fmt::Display for BarcodeInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.open_left { '(' } else { '[' };
        let r = if self.open_right { ')' } else { ']' };
        write!(f, "{}{},{}{}", l, self.birth, self.death, r)
    }
}

/// Finite multiset of bars.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Barcode {
    bars: Vec<(BarcodeInterval, usize)>,
}

impl Barcode {
    pub fn empty() -> Self {
        Barcode::default()
    }

    pub fn from_bars<I: IntoIterator<Item = BarcodeInterval>>(iter: I) -> Self {
        let mut bars: Vec<BarcodeInterval> = iter.into_iter().collect();
        bars.sort();
        let mut out: Vec<(BarcodeInterval, usize)> = Vec::new();
        for bar in bars {
            match out.last_mut() {
                Some((prev, m)) if *prev == bar => *m += 1,
                _ => out.push((bar, 1)),
            }
        }
        Barcode { bars: out }
    }

    /// Encodes the disconnect times of a lifetime as a barcode: one bar per
    /// gap between consecutive interval components, plus the two rays (kept
    /// unbounded — that is what makes the Hausdorff/bottleneck
    /// correspondence exact). Gaps are enumerated from the endpoints rather
    /// than through the closed complement, so the two gaps flanking a
    /// degenerate component stay separate bars.
    pub fn from_complement(set: &IntervalSet) -> Result<Self> {
        let ivs = set.intervals();
        if ivs.is_empty() {
            return Ok(Barcode::from_bars([BarcodeInterval {
                birth: Scalar::NegInf,
                death: Scalar::PosInf,
                open_left: false,
                open_right: false,
            }]));
        }
        let mut bars = Vec::new();
        let mut gap = |birth: &Scalar, death: &Scalar| {
            bars.push(BarcodeInterval {
                birth: birth.clone(),
                death: death.clone(),
                open_left: true,
                open_right: true,
            });
        };
        if ivs[0].0 != Scalar::NegInf {
            gap(&Scalar::NegInf, &ivs[0].0);
        }
        for w in ivs.windows(2) {
            gap(&w[0].1, &w[1].0);
        }
        if ivs.last().unwrap().1 != Scalar::PosInf {
            gap(&ivs.last().unwrap().1, &Scalar::PosInf);
        }
        Ok(Barcode::from_bars(bars))
    }

    pub fn multiset(&self) -> &[(BarcodeInterval, usize)] {
        &self.bars
    }

    pub fn push(&mut self, bar: BarcodeInterval, multiplicity: usize) {
        assert!(multiplicity >= 1);
        let mut bars: Vec<BarcodeInterval> = self.expanded();
        bars.extend(std::iter::repeat_n(bar, multiplicity));
        *self = Barcode::from_bars(bars);
    }

    pub fn expanded(&self) -> Vec<BarcodeInterval> {
        self.bars
            .iter()
            .flat_map(|(b, m)| std::iter::repeat_n(b.clone(), *m))
            .collect()
    }

    pub fn total_bars(&self) -> usize {
        self.bars.iter().map(|(_, m)| m).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    /// Number of bars whose interval contains `t` (with openness flags).
    pub fn bars_containing(&self, t: &Scalar) -> usize {
        self.bars
            .iter()
            .filter(|(b, _)| b.contains(t))
            .map(|(_, m)| m)
            .sum()
    }

    /// Sum of bar lengths (total persistence).
    pub fn total_persistence(&self) -> Scalar {
        self.bars.iter().fold(Scalar::zero(), |acc, (b, m)| {
            let mut len = Scalar::zero();
            for _ in 0..*m {
                len = len.add(&b.length());
            }
            acc.add(&len)
        })
    }
}

/// Matching-cost exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchP {
    Finite(u32),
    Infinity,
}

impl std::str::FromStr for MatchP {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" => Ok(MatchP::Infinity),
            other => {
                let p: u32 = other.parse().map_err(|_| Error::ValueParse {
                    kind: "matching exponent",
                    text: s.to_string(),
                })?;
                if p == 0 {
                    return Err(Error::ValueParse {
                        kind: "matching exponent",
                        text: s.to_string(),
                    });
                }
                Ok(MatchP::Finite(p))
            }
        }
    }
}

/// A non-negative distance value: a rational, the p-th root of a rational
/// (finite-p matching costs), or a floating-point fallback for aggregations
/// that mix exponents.
#[derive(Debug, Clone, PartialEq)]
pub enum Distance {
    Exact(Scalar),
    Root { pow: Scalar, p: u32 },
    Approx(f64),
}

impl Distance {
    pub fn zero() -> Self {
        Distance::Exact(Scalar::zero())
    }

    pub fn infinite() -> Self {
        Distance::Exact(Scalar::PosInf)
    }

    pub fn is_infinite(&self) -> bool {
        match self {
            Distance::Exact(v) | Distance::Root { pow: v, .. } => *v == Scalar::PosInf,
            Distance::Approx(v) => v.is_infinite(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Distance::Exact(v) | Distance::Root { pow: v, .. } => *v == Scalar::zero(),
            Distance::Approx(v) => *v == 0.0,
        }
    }

    /// Canonical form: `Root` with `p = 1` or zero/infinite pow collapses to
    /// `Exact`.
    pub fn normalized(self) -> Self {
        match self {
            Distance::Root { pow, p: 1 } => Distance::Exact(pow),
            Distance::Root { pow, .. }
                if pow == Scalar::zero() || pow == Scalar::PosInf =>
            {
                Distance::Exact(pow)
            }
            other => other,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Distance::Exact(v) => v.to_f64(),
            Distance::Root { pow, p } => pow.to_f64().powf(1.0 / *p as f64),
            Distance::Approx(v) => *v,
        }
    }

    /// Total order; exact whenever both sides are exact (cross-exponent
    /// comparison goes through integer powers).
    pub fn total_cmp(&self, other: &Distance) -> Ordering {
        match (self, other) {
            (Distance::Exact(a), Distance::Exact(b)) => a.cmp(b),
            (Distance::Root { pow: a, p }, Distance::Root { pow: b, p: q }) if p == q => a.cmp(b),
            (Distance::Approx(_), _) | (_, Distance::Approx(_)) => {
                self.to_f64().total_cmp(&other.to_f64())
            }
            _ => {
                // a^(1/p) vs b^(1/q) compares as a^q vs b^p
                let (a, p) = self.as_pow();
                let (b, q) = other.as_pow();
                scalar_pow_scalar(&a, q).cmp(&scalar_pow_scalar(&b, p))
            }
        }
    }

    fn as_pow(&self) -> (Scalar, u32) {
        match self {
            Distance::Exact(v) => (v.clone(), 1),
            Distance::Root { pow, p } => (pow.clone(), *p),
            Distance::Approx(_) => unreachable!("approx handled before"),
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Exact(v) => write!(f, "{v}"),
            _ => write!(f, "{}", self.to_f64()),
        }
    }
}

fn scalar_pow_scalar(v: &Scalar, p: u32) -> Scalar {
    scalar_pow(v, p)
}

struct MatchingInstance {
    left: Vec<BarcodeInterval>,
    right: Vec<BarcodeInterval>,
}

impl MatchingInstance {
    fn new(b: &Barcode, c: &Barcode) -> Self {
        MatchingInstance {
            left: b.expanded(),
            right: c.expanded(),
        }
    }
}

/// Optimal partial-matching distance between barcodes.
///
/// `p = inf` is the bottleneck distance, computed by bisection over the
/// finite set of candidate costs with a matching feasibility check; finite
/// `p` runs an exact Hungarian assignment on the diagonal-augmented cost
/// matrix.
pub fn matching_distance(b: &Barcode, c: &Barcode, p: MatchP) -> Distance {
    let inst = MatchingInstance::new(b, c);
    if inst.left.is_empty() && inst.right.is_empty() {
        return Distance::zero();
    }
    match p {
        MatchP::Infinity => bottleneck(&inst),
        MatchP::Finite(p) => wasserstein_pow(&inst, p),
    }
}

fn bottleneck(inst: &MatchingInstance) -> Distance {
    let m = inst.left.len();
    let n = inst.right.len();
    // candidate costs: all finite pair costs and diagonal costs, plus zero
    let mut candidates: Vec<Scalar> = vec![Scalar::zero()];
    for i in &inst.left {
        for j in &inst.right {
            let d = i.linf_to(j);
            if d.is_finite() {
                candidates.push(d);
            }
        }
    }
    for bar in inst.left.iter().chain(inst.right.iter()) {
        let d = bar.linf_diag();
        if d.is_finite() {
            candidates.push(d);
        }
    }
    candidates.sort();
    candidates.dedup();

    // smallest feasible candidate by bisection (feasibility is monotone)
    let feasible = |c: &Scalar| -> bool {
        bottleneck_feasible(inst, c, m, n)
    };
    if !feasible(candidates.last().unwrap()) {
        return Distance::infinite();
    }
    let mut lo = 0usize;
    let mut hi = candidates.len() - 1;
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(&candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Distance::Exact(candidates[lo].clone())
}

/// Perfect-matching feasibility at threshold `c` on the diagonal-augmented
/// bipartite graph (Kuhn's augmenting paths).
fn bottleneck_feasible(inst: &MatchingInstance, c: &Scalar, m: usize, n: usize) -> bool {
    // left: m real bars + n diagonal proxies; right: n real bars + m proxies
    let size_l = m + n;
    let size_r = n + m;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); size_l];
    for (i, bar) in inst.left.iter().enumerate() {
        for (j, other) in inst.right.iter().enumerate() {
            if bar.linf_to(other) <= *c {
                adj[i].push(j);
            }
        }
        if bar.linf_diag() <= *c {
            adj[i].push(n + i);
        }
    }
    for (j, other) in inst.right.iter().enumerate() {
        if other.linf_diag() <= *c {
            adj[m + j].push(j);
        }
        for i in 0..m {
            adj[m + j].push(n + i);
        }
    }

    let mut match_r: Vec<Option<usize>> = vec![None; size_r];
    let mut matched = 0;
    for u in 0..size_l {
        let mut seen = vec![false; size_r];
        if kuhn_augment(u, &adj, &mut seen, &mut match_r) {
            matched += 1;
        }
    }
    matched == size_l
}

fn kuhn_augment(
    u: usize,
    adj: &[Vec<usize>],
    seen: &mut [bool],
    match_r: &mut [Option<usize>],
) -> bool {
    for &v in &adj[u] {
        if !seen[v] {
            seen[v] = true;
            if match_r[v].is_none() || kuhn_augment(match_r[v].unwrap(), adj, seen, match_r) {
                match_r[v] = Some(u);
                return true;
            }
        }
    }
    false
}

/// Exact minimal p-cost (as the p-th power) via Hungarian assignment.
fn wasserstein_pow(inst: &MatchingInstance, p: u32) -> Distance {
    let m = inst.left.len();
    let n = inst.right.len();
    let size = m + n;

    // sum of all finite costs + 1 acts as the forbidden-edge sentinel: any
    // assignment using one exceeds every fully-finite assignment
    let mut finite_sum = Rat::from_integer(1);
    let mut add_finite = |v: &Scalar| {
        if let Scalar::Finite(r) = v {
            finite_sum += r;
        }
    };
    for i in &inst.left {
        for j in &inst.right {
            add_finite(&i.lp_pow_to(j, p));
        }
        add_finite(&i.lp_pow_diag(p));
    }
    for j in &inst.right {
        add_finite(&j.lp_pow_diag(p));
    }
    let big = finite_sum;

    let clamp = |v: Scalar| -> Rat {
        match v {
            Scalar::Finite(r) => {
                if r >= big {
                    big.clone()
                } else {
                    r
                }
            }
            _ => big.clone(),
        }
    };

    let mut cost: Vec<Vec<Rat>> = vec![vec![Rat::from_integer(0); size]; size];
    for (i, row) in cost.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = if i < m && j < n {
                clamp(inst.left[i].lp_pow_to(&inst.right[j], p))
            } else if i < m {
                // bar i may retire to its own diagonal slot only
                if j - n == i {
                    clamp(inst.left[i].lp_pow_diag(p))
                } else {
                    big.clone()
                }
            } else if j < n {
                if i - m == j {
                    clamp(inst.right[j].lp_pow_diag(p))
                } else {
                    big.clone()
                }
            } else {
                Rat::from_integer(0)
            };
        }
    }

    let total = hungarian_min_cost(&cost);
    if total >= big {
        return Distance::infinite();
    }
    Distance::Root {
        pow: Scalar::Finite(total),
        p,
    }
    .normalized()
}

/// Classic O(n^3) Hungarian algorithm with potentials, exact over rationals.
fn hungarian_min_cost(cost: &[Vec<Rat>]) -> Rat {
    let n = cost.len();
    if n == 0 {
        return Rat::from_integer(0);
    }
    let zero = Rat::from_integer(0);
    let mut u = vec![zero.clone(); n + 1];
    let mut v = vec![zero.clone(); n + 1];
    let mut assignment = vec![0usize; n + 1]; // assignment[j] = row matched to column j (1-based)
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        assignment[0] = i;
        let mut j0 = 0usize;
        let mut minv: Vec<Option<Rat>> = vec![None; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = assignment[j0];
            let mut delta: Option<Rat> = None;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = &cost[i0 - 1][j - 1] - &u[i0] - &v[j];
                if minv[j].as_ref().is_none_or(|mv| cur < *mv) {
                    minv[j] = Some(cur);
                    way[j] = j0;
                }
                if delta.as_ref().is_none_or(|d| minv[j].as_ref().unwrap() < d) {
                    delta = minv[j].clone();
                    j1 = j;
                }
            }
            let delta = delta.expect("augmenting path exists in complete matrix");
            for j in 0..=n {
                if used[j] {
                    u[assignment[j]] += &delta;
                    v[j] -= &delta;
                } else if let Some(mv) = &mut minv[j] {
                    *mv -= &delta;
                }
            }
            j0 = j1;
            if assignment[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            assignment[j0] = assignment[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut total = Rat::from_integer(0);
    for j in 1..=n {
        if assignment[j] != 0 {
            total += &cost[assignment[j] - 1][j - 1];
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::exhaustive_matching_distance;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bar(a: i64, b: i64) -> BarcodeInterval {
        BarcodeInterval::closed(Scalar::from_int(a), Scalar::from_int(b))
    }

    #[test]
    fn identical_barcodes_are_at_distance_zero() {
        let b = Barcode::from_bars([bar(0, 5), bar(1, 3), bar(1, 3)]);
        for p in [MatchP::Infinity, MatchP::Finite(1), MatchP::Finite(2)] {
            assert!(matching_distance(&b, &b, p).is_zero());
        }
    }

    #[test]
    fn lone_bar_retires_to_diagonal() {
        let b = Barcode::from_bars([bar(0, 2)]);
        let c = Barcode::empty();
        let d = matching_distance(&b, &c, MatchP::Infinity);
        assert_eq!(d, Distance::Exact(Scalar::from_int(1)));
    }

    #[test]
    fn unbounded_bars_must_match() {
        let ray = BarcodeInterval::closed(Scalar::from_int(3), Scalar::PosInf);
        let b = Barcode::from_bars([ray.clone()]);
        assert!(matching_distance(&b, &Barcode::empty(), MatchP::Infinity).is_infinite());
        let other = BarcodeInterval::closed(Scalar::from_int(5), Scalar::PosInf);
        let d = matching_distance(&b, &Barcode::from_bars([other]), MatchP::Infinity);
        assert_eq!(d, Distance::Exact(Scalar::from_int(2)));
    }

    #[test]
    fn matches_exhaustive_oracle_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for round in 0..150 {
            let gen_barcode = |rng: &mut ChaCha8Rng| {
                let k = rng.gen_range(0..=4);
                Barcode::from_bars((0..k).map(|_| {
                    let a = rng.gen_range(0..20);
                    let b = rng.gen_range(a..=20);
                    bar(a, b)
                }))
            };
            let b = gen_barcode(&mut rng);
            let c = gen_barcode(&mut rng);
            for p in [MatchP::Finite(1), MatchP::Finite(2), MatchP::Infinity] {
                let fast = matching_distance(&b, &c, p);
                let slow = exhaustive_matching_distance(&b, &c, p);
                assert_eq!(
                    fast.total_cmp(&slow),
                    Ordering::Equal,
                    "round {round} p={p:?}: {fast:?} vs {slow:?} on {b:?} / {c:?}"
                );
            }
        }
    }

    #[test]
    fn triangle_inequality_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..100 {
            let gen_barcode = |rng: &mut ChaCha8Rng| {
                let k = rng.gen_range(0..=3);
                Barcode::from_bars((0..k).map(|_| {
                    let a = rng.gen_range(0..12);
                    let b = rng.gen_range(a..=12);
                    bar(a, b)
                }))
            };
            let a = gen_barcode(&mut rng);
            let b = gen_barcode(&mut rng);
            let c = gen_barcode(&mut rng);
            for p in [MatchP::Finite(2), MatchP::Infinity] {
                let ab = matching_distance(&a, &b, p).to_f64();
                let bc = matching_distance(&b, &c, p).to_f64();
                let ac = matching_distance(&a, &c, p).to_f64();
                assert!(ac <= ab + bc + 1e-9, "p={p:?}: {ac} > {ab} + {bc}");
            }
        }
    }

    #[test]
    fn distance_total_order_is_exact() {
        let d1 = Distance::Root {
            pow: Scalar::from_int(2),
            p: 2,
        }; // sqrt(2)
        let d2 = Distance::Exact(Scalar::ratio(3, 2)); // 1.5
        assert_eq!(d1.total_cmp(&d2), Ordering::Less); // sqrt(2) < 1.5 since 2 < 2.25
        let d3 = Distance::Root {
            pow: Scalar::from_int(8),
            p: 2,
        };
        assert_eq!(d3.total_cmp(&d2), Ordering::Greater);
    }
}
