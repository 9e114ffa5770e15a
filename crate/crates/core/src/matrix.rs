//! Square matrices over a semi-ring, with the TVG-specific machinery:
//! snapshots, cumulants, Kleene star with convergence detection, lifetime
//! curves, temporal diameter, strong connectivity, and ping propagation.

use std::fmt;

use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::interval::IntervalSet;
use crate::scalar::Scalar;
use crate::semiring::{BoolSemiring, LifetimeSemiring, Semiring};

/// Square matrix with entries in a semi-ring `S` and labeled nodes.
///
/// Entry `(i, j)` is the weight of the directed edge `i -> j`. Label order is
/// fixed at construction; binary operations require identical label
/// sequences.
#[derive(Clone)]
pub struct TvgMatrix<S: Semiring> {
    ring: S,
    labels: Vec<String>,
    entries: Vec<S::Elem>,
}

impl<S: Semiring> TvgMatrix<S> {
    pub fn new(ring: S, labels: Vec<String>, entries: Vec<S::Elem>) -> Result<Self> {
        let n = labels.len();
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                left: entries.len(),
                right: n * n,
            });
        }
        Ok(TvgMatrix {
            ring,
            labels,
            entries,
        })
    }

    pub fn from_fn(ring: S, labels: Vec<String>, mut f: impl FnMut(usize, usize) -> S::Elem) -> Self {
        let n = labels.len();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        TvgMatrix {
            ring,
            labels,
            entries,
        }
    }

    /// All-zero matrix.
    pub fn zeros(ring: S, labels: Vec<String>) -> Self {
        let z = ring.zero();
        Self::from_fn(ring, labels, |_, _| z.clone())
    }

    /// Identity: multiplicative one on the diagonal, zero elsewhere.
    pub fn identity(ring: S, labels: Vec<String>) -> Self {
        let z = ring.zero();
        let o = ring.one();
        Self::from_fn(ring, labels, |i, j| if i == j { o.clone() } else { z.clone() })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn ring(&self) -> &S {
        &self.ring
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn get(&self, i: usize, j: usize) -> &S::Elem {
        &self.entries[i * self.n() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S::Elem) {
        let n = self.n();
        self.entries[i * n + j] = v;
    }

    pub fn map_entries<T: Semiring>(
        &self,
        ring: T,
        mut f: impl FnMut(usize, usize, &S::Elem) -> T::Elem,
    ) -> TvgMatrix<T> {
        TvgMatrix::from_fn(ring, self.labels.clone(), |i, j| f(i, j, self.get(i, j)))
    }

    /// Matrix with rows/columns re-indexed by a permutation:
    /// entry `(i,j)` of the result is entry `(perm[i], perm[j])` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> TvgMatrix<S> {
        assert_eq!(perm.len(), self.n());
        TvgMatrix::from_fn(self.ring.clone(), self.labels.clone(), |i, j| {
            self.get(perm[i], perm[j]).clone()
        })
    }

    fn check_conformable(&self, other: &TvgMatrix<S>) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        if self.labels != other.labels {
            return Err(Error::LabelMismatch);
        }
        Ok(())
    }

    /// Entry-wise semi-ring sum.
    pub fn add(&self, other: &TvgMatrix<S>) -> Result<TvgMatrix<S>> {
        self.check_conformable(other)?;
        let entries = self
            .entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| self.ring.add(a, b))
            .collect();
        TvgMatrix::new(self.ring.clone(), self.labels.clone(), entries)
    }

    /// Matrix product `(MN)_{ij} = ⊕_k M_{ik} ⊗ N_{kj}`.
    pub fn mul(&self, other: &TvgMatrix<S>) -> Result<TvgMatrix<S>> {
        self.check_conformable(other)?;
        let n = self.n();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = self.ring.zero();
                for k in 0..n {
                    let term = self.ring.mul(self.get(i, k), other.get(k, j))?;
                    acc = self.ring.add(&acc, &term);
                }
                entries.push(acc);
            }
        }
        TvgMatrix::new(self.ring.clone(), self.labels.clone(), entries)
    }

    /// Row-vector product `(vM)_j = ⊕_i v_i ⊗ M_{ij}`.
    pub fn row_mul(&self, v: &[S::Elem]) -> Result<Vec<S::Elem>> {
        if v.len() != self.n() {
            return Err(Error::DimensionMismatch {
                left: v.len(),
                right: self.n(),
            });
        }
        let n = self.n();
        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            let mut acc = self.ring.zero();
            for (i, vi) in v.iter().enumerate() {
                let term = self.ring.mul(vi, self.get(i, j))?;
                acc = self.ring.add(&acc, &term);
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// The k-cumulant `C_k = I ⊕ A ⊕ A² ⊕ … ⊕ A^k`, computed as the
    /// definitional sum with left-associated powers. For semi-rings with full
    /// distributivity this equals `(I ⊕ A)^k`; the delay semi-ring lacks
    /// distributivity, so the sum form is the one that is well defined
    /// everywhere.
    pub fn cumulant(&self, k: usize) -> Result<TvgMatrix<S>> {
        let mut acc = TvgMatrix::identity(self.ring.clone(), self.labels.clone());
        let mut power = acc.clone();
        for _ in 0..k {
            power = power.mul(self)?;
            acc = acc.add(&power)?;
        }
        Ok(acc)
    }

    /// Iterates cumulants until `C_{k+1} = C_k` (returns `Some(k)`) or the
    /// budget is reached (`None`; non-convergence is a value, not an error —
    /// Kleene stars over delay semi-rings provably may not converge).
    pub fn kleene_star(&self, max_k: usize) -> Result<(TvgMatrix<S>, Option<usize>)> {
        let mut acc = TvgMatrix::identity(self.ring.clone(), self.labels.clone());
        let mut power = acc.clone();
        for k in 1..=max_k {
            power = power.mul(self)?;
            let next = acc.add(&power)?;
            if next == acc {
                return Ok((next, Some(k - 1)));
            }
            acc = next;
        }
        Ok((acc, None))
    }

    /// Default Kleene budget: `4n`, overridable via [`TvgMatrix::kleene_star`].
    pub fn kleene_star_default(&self) -> Result<(TvgMatrix<S>, Option<usize>)> {
        self.kleene_star(4 * self.n().max(1))
    }

    /// Accumulated ping rows `v·C_k` for `k = 0..=k_max`, for a source vector
    /// with `seed` at `source` and zero elsewhere.
    pub fn ping(&self, source: usize, seed: S::Elem, k_max: usize) -> Result<Vec<Vec<S::Elem>>> {
        let n = self.n();
        let mut row: Vec<S::Elem> = (0..n)
            .map(|j| if j == source { seed.clone() } else { self.ring.zero() })
            .collect();
        let mut acc = row.clone();
        let mut out = vec![acc.clone()];
        for _ in 1..=k_max {
            row = self.row_mul(&row)?;
            acc = acc
                .iter()
                .zip(row.iter())
                .map(|(a, b)| self.ring.add(a, b))
                .collect();
            out.push(acc.clone());
        }
        Ok(out)
    }

    /// Random matrix over the ring's own sampler.
    pub fn sample(ring: S, labels: Vec<String>, rng: &mut ChaCha8Rng) -> Self {
        let mut m = TvgMatrix::zeros(ring, labels);
        let n = m.n();
        for i in 0..n {
            for j in 0..n {
                let v = m.ring.sample(rng);
                m.set(i, j, v);
            }
        }
        m
    }
}

impl<S: Semiring> PartialEq for TvgMatrix<S> {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
            && self
                .entries
                .iter()
                .zip(other.entries.iter())
                .all(|(a, b)| self.ring.eq(a, b))
    }
}

impl<S: Semiring> fmt::Debug for TvgMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "TvgMatrix over {:?}, nodes {:?}", self.ring, self.labels)?;
        let n = self.n();
        for i in 0..n {
            write!(f, "  [")?;
            for j in 0..n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:?}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Matrix semi-ring lift: `n x n` matrices over `S` form a semi-ring.
#[derive(Debug, Clone)]
pub struct MatrixSemiring<S: Semiring> {
    pub inner: S,
    pub labels: Vec<String>,
}

impl<S: Semiring> MatrixSemiring<S> {
    pub fn new(inner: S, n: usize) -> Self {
        MatrixSemiring {
            inner,
            labels: (0..n).map(|i| i.to_string()).collect(),
        }
    }
}

impl<S: Semiring> Semiring for MatrixSemiring<S> {
    type Elem = TvgMatrix<S>;

    fn zero(&self) -> TvgMatrix<S> {
        TvgMatrix::zeros(self.inner.clone(), self.labels.clone())
    }

    fn one(&self) -> TvgMatrix<S> {
        TvgMatrix::identity(self.inner.clone(), self.labels.clone())
    }

    fn add(&self, a: &TvgMatrix<S>, b: &TvgMatrix<S>) -> TvgMatrix<S> {
        a.add(b).expect("conformable by construction")
    }

    fn mul(&self, a: &TvgMatrix<S>, b: &TvgMatrix<S>) -> Result<TvgMatrix<S>> {
        a.mul(b)
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> TvgMatrix<S> {
        TvgMatrix::sample(self.inner.clone(), self.labels.clone(), rng)
    }
}

/// Lifetime-matrix specialization.
pub type LifetimeMatrix = TvgMatrix<LifetimeSemiring>;

/// Per-pair and average measures of `M^k ∩ W` as functions of `k`.
#[derive(Debug, Clone)]
pub struct LifetimeCurve {
    pub labels: Vec<String>,
    /// `pairs[i * n + j][k]` is the measure of entry `(i,j)` of `M^k` in `W`.
    pub pairs: Vec<Vec<Scalar>>,
    /// Mean over all ordered pairs, per `k`.
    pub average: Vec<Scalar>,
}

impl LifetimeMatrix {
    /// Zeroes the diagonal (adjacency convention).
    pub fn to_adjacency(&self) -> LifetimeMatrix {
        self.map_entries(LifetimeSemiring, |i, j, v| {
            if i == j {
                IntervalSet::empty()
            } else {
                v.clone()
            }
        })
    }

    /// Puts the full line on the diagonal (vertices always alive).
    pub fn with_full_diagonal(&self) -> LifetimeMatrix {
        self.map_entries(LifetimeSemiring, |i, j, v| {
            if i == j {
                IntervalSet::full()
            } else {
                v.clone()
            }
        })
    }

    /// Entry-wise intersection with a window.
    pub fn restrict_window(&self, w: &IntervalSet) -> LifetimeMatrix {
        self.map_entries(LifetimeSemiring, |_, _, v| v.intersect(w))
    }

    /// Boolean matrix of links alive at time `t`.
    pub fn snapshot(&self, t: &Scalar) -> TvgMatrix<BoolSemiring> {
        assert!(t.is_finite(), "snapshot time must be finite");
        self.map_entries(BoolSemiring, |_, _, v| v.contains(t))
    }

    /// Largest number of interval components in any entry; telemetry for
    /// experiments on entry growth under matrix powers.
    pub fn max_entry_components(&self) -> usize {
        self.entries
            .iter()
            .map(|e| e.num_components())
            .max()
            .unwrap_or(0)
    }

    /// All finite interval endpoints appearing in off-diagonal entries,
    /// sorted and deduplicated.
    pub fn entry_endpoints(&self) -> Vec<Scalar> {
        let mut out: Vec<Scalar> = Vec::new();
        let n = self.n();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                for (lo, hi) in self.get(i, j).intervals() {
                    if lo.is_finite() {
                        out.push(lo.clone());
                    }
                    if hi.is_finite() {
                        out.push(hi.clone());
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Sample times covering every constancy region of the snapshots: each
    /// endpoint, midpoints between consecutive endpoints, and one
    /// representative beyond each extreme.
    pub fn sample_times(&self) -> Vec<Scalar> {
        let endpoints = self.entry_endpoints();
        if endpoints.is_empty() {
            return vec![Scalar::zero()];
        }
        let mut out = Vec::with_capacity(2 * endpoints.len() + 1);
        out.push(endpoints[0].sub(&Scalar::from_int(1)));
        for (k, e) in endpoints.iter().enumerate() {
            out.push(e.clone());
            if let Some(next) = endpoints.get(k + 1) {
                out.push(e.add(next).half());
            }
        }
        out.push(endpoints.last().unwrap().add(&Scalar::from_int(1)));
        out
    }

    /// Per-pair and average lifetime curves `k -> measure(M^k ∩ W)`.
    ///
    /// Expects the lifetime-matrix convention (full diagonal) and a bounded
    /// window.
    pub fn lifetime_curve(&self, k_max: usize, w: &IntervalSet) -> Result<LifetimeCurve> {
        let n = self.n();
        let mut pairs: Vec<Vec<Scalar>> = vec![Vec::with_capacity(k_max + 1); n * n];
        let mut average: Vec<Scalar> = Vec::with_capacity(k_max + 1);
        let mut power = TvgMatrix::identity(LifetimeSemiring, self.labels.clone());
        for k in 0..=k_max {
            if k > 0 {
                power = power.mul(self)?;
            }
            let mut total = Scalar::zero();
            for (idx, cell) in pairs.iter_mut().enumerate() {
                let m = power.entries[idx].intersect(w).measure()?;
                total = total.add(&m);
                cell.push(m);
            }
            average.push(Scalar::Finite(
                total.expect_finite() / crate::scalar::Rat::from_integer((n * n) as i128),
            ));
        }
        Ok(LifetimeCurve {
            labels: self.labels.clone(),
            pairs,
            average,
        })
    }

    /// Per-snapshot directed shortest-path lengths, maximized over time.
    ///
    /// `d[i][j] = None` when no walk `i -> j` exists at any time; the
    /// diameter is the maximum over defined entries (0 for an edgeless TVG).
    pub fn temporal_diameter(&self) -> (Vec<Vec<Option<usize>>>, usize) {
        let n = self.n();
        let mut d: Vec<Vec<Option<usize>>> = vec![vec![None; n]; n];
        for (i, row) in d.iter_mut().enumerate() {
            row[i] = Some(0);
        }
        for t in self.sample_times() {
            let snap = self.snapshot(&t);
            let adj: Vec<Vec<usize>> = (0..n)
                .map(|i| (0..n).filter(|&j| j != i && *snap.get(i, j)).collect())
                .collect();
            for (src, row) in d.iter_mut().enumerate() {
                let mut dist: Vec<Option<usize>> = vec![None; n];
                dist[src] = Some(0);
                let mut queue = std::collections::VecDeque::from([src]);
                while let Some(u) = queue.pop_front() {
                    for &v in &adj[u] {
                        if dist[v].is_none() {
                            dist[v] = Some(dist[u].unwrap() + 1);
                            queue.push_back(v);
                        }
                    }
                }
                for (j, cell) in row.iter_mut().enumerate() {
                    if let Some(steps) = dist[j] {
                        *cell = Some(cell.map_or(steps, |prev| prev.max(steps)));
                    }
                }
            }
        }
        let diameter = d.iter().flatten().filter_map(|x| *x).max().unwrap_or(0);
        (d, diameter)
    }

    /// True iff every entry of the Kleene star, restricted to `W`, equals `W`.
    pub fn strongly_connected(&self, w: &IntervalSet) -> Result<bool> {
        let restricted = self.restrict_window(w);
        // lifetime Kleene stars converge within n-1 steps; the identity term
        // puts the full line on the diagonal, so window the star before
        // comparing
        let (star, _) = restricted.kleene_star(self.n().max(1))?;
        Ok(star.restrict_window(w).entries.iter().all(|e| e == w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::{DelaySemiring, DelayedLifetime, TropicalSemiring};
    use rand::SeedableRng;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| ((b'A' + i as u8) as char).to_string()).collect()
    }

    /// The worked 4-node delay network.
    fn cartoon() -> TvgMatrix<DelaySemiring> {
        let ring = DelaySemiring::default();
        let mut m = TvgMatrix::zeros(ring, labels(4));
        let dl = |lo, hi, d| DelayedLifetime::new(IntervalSet::of(lo, hi), Scalar::from_int(d));
        m.set(0, 1, dl(0, 10, 1)); // A -> B
        m.set(0, 2, dl(0, 10, 3)); // A -> C
        m.set(1, 3, dl(9, 15, 3)); // B -> D
        m.set(2, 3, dl(9, 10, 2)); // C -> D
        m
    }

    #[test]
    fn identity_laws() {
        let m = cartoon();
        let i = TvgMatrix::identity(DelaySemiring::default(), labels(4));
        assert_eq!(m.mul(&i).unwrap(), m);
        assert_eq!(i.mul(&m).unwrap(), m);
        let z = TvgMatrix::zeros(DelaySemiring::default(), labels(4));
        assert_eq!(m.add(&z).unwrap(), m);
    }

    #[test]
    fn two_hop_worst_case_aggregation() {
        let m = cartoon();
        let m2 = m.mul(&m).unwrap();
        let want = DelayedLifetime::new(
            IntervalSet::of(6, 7).union(&IntervalSet::of(8, 10)),
            Scalar::from_int(5),
        );
        assert_eq!(m2.get(0, 3), &want);
    }

    #[test]
    fn label_mismatch_rejected() {
        let a = cartoon();
        let mut other_labels = labels(4);
        other_labels.swap(0, 1);
        let b = TvgMatrix::zeros(DelaySemiring::default(), other_labels);
        assert!(matches!(a.mul(&b), Err(Error::LabelMismatch)));
    }

    #[test]
    fn cumulant_zero_is_identity() {
        let m = cartoon();
        let c0 = m.cumulant(0).unwrap();
        assert_eq!(c0, TvgMatrix::identity(DelaySemiring::default(), labels(4)));
    }

    #[test]
    fn directed_line_cumulants() {
        // 4-node directed line, every edge alive on [0,1]
        let mut m = TvgMatrix::zeros(LifetimeSemiring, labels(4));
        for i in 0..3 {
            m.set(i, i + 1, IntervalSet::of(0, 1));
        }
        let c2 = m.cumulant(2).unwrap();
        assert!(c2.get(0, 3).is_empty());
        let c3 = m.cumulant(3).unwrap();
        assert_eq!(c3.get(0, 3), &IntervalSet::of(0, 1));
    }

    #[test]
    fn empty_adjacency_star_converges_immediately() {
        let m: LifetimeMatrix = TvgMatrix::zeros(LifetimeSemiring, labels(3));
        let (star, at) = m.kleene_star(10).unwrap();
        assert_eq!(at, Some(0));
        assert_eq!(star, TvgMatrix::identity(LifetimeSemiring, labels(3)));
    }

    #[test]
    fn delay_cycle_never_converges() {
        // two nodes, always-alive edges with delay 1 each
        let ring = DelaySemiring::default();
        let mut m = TvgMatrix::zeros(ring, labels(2));
        let always = |d| DelayedLifetime::new(IntervalSet::full(), Scalar::from_int(d));
        m.set(0, 1, always(1));
        m.set(1, 0, always(1));
        let (_, at) = m.kleene_star(50).unwrap();
        assert_eq!(at, None);
    }

    #[test]
    fn cumulant_equals_power_form_for_lifetime() {
        // C_k(A) = (I + A)^k over a distributive semi-ring
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let a = TvgMatrix::sample(LifetimeSemiring, labels(4), &mut rng).to_adjacency();
            let c3 = a.cumulant(3).unwrap();
            let m = a.with_full_diagonal();
            let m3 = m.mul(&m).unwrap().mul(&m).unwrap();
            assert_eq!(c3, m3);
        }
    }

    #[test]
    fn tropical_shortest_paths_via_star() {
        let ring = TropicalSemiring;
        let mut m = TvgMatrix::zeros(ring, labels(3));
        // all-pairs shortest paths on a weighted triangle
        m.set(0, 1, Scalar::from_int(1));
        m.set(1, 2, Scalar::from_int(2));
        m.set(0, 2, Scalar::from_int(10));
        let (star, at) = m.kleene_star(10).unwrap();
        assert_eq!(star.get(0, 2), &Scalar::from_int(3));
        assert_eq!(star.get(0, 0), &Scalar::from_int(0));
        assert!(at.is_some());
    }

    #[test]
    fn diameter_of_line_and_complete_graphs() {
        let n = 5;
        let mut line = TvgMatrix::zeros(LifetimeSemiring, labels(n));
        for i in 0..n - 1 {
            line.set(i, i + 1, IntervalSet::full());
        }
        let (_, diam) = line.temporal_diameter();
        assert_eq!(diam, n - 1);

        let complete = TvgMatrix::from_fn(LifetimeSemiring, labels(n), |i, j| {
            if i == j {
                IntervalSet::empty()
            } else {
                IntervalSet::full()
            }
        });
        let (_, diam) = complete.temporal_diameter();
        assert_eq!(diam, 1);
    }

    #[test]
    fn strong_connectivity() {
        let w = IntervalSet::of(0, 10);
        let complete = TvgMatrix::from_fn(LifetimeSemiring, labels(3), |i, j| {
            if i == j {
                IntervalSet::empty()
            } else {
                IntervalSet::of(0, 10)
            }
        });
        assert!(complete.strongly_connected(&w).unwrap());

        let mut one_way = TvgMatrix::zeros(LifetimeSemiring, labels(2));
        one_way.set(0, 1, IntervalSet::of(0, 10));
        assert!(!one_way.strongly_connected(&w).unwrap());
    }

    fn cartoonish_lifetime() -> LifetimeMatrix {
        let mut m = TvgMatrix::zeros(LifetimeSemiring, labels(4));
        m.set(0, 1, IntervalSet::of(0, 10));
        m.set(0, 2, IntervalSet::of(0, 10));
        m.set(1, 3, IntervalSet::of(9, 15));
        m.set(2, 3, IntervalSet::of(9, 10));
        m.with_full_diagonal()
    }

    #[test]
    fn curve_starts_at_zero_off_diagonal() {
        let w = IntervalSet::of(0, 10);
        let m = cartoonish_lifetime();
        let curve = m.lifetime_curve(3, &w).unwrap();
        let n = m.n();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    assert_eq!(curve.pairs[i * n + j][0], Scalar::zero());
                }
            }
        }
        // non-decreasing in k
        for cell in &curve.pairs {
            for pair in cell.windows(2) {
                assert!(pair[0] <= pair[1]);
            }
        }
    }

    #[test]
    fn ping_without_edges_stays_at_source() {
        let ring = DelaySemiring::default();
        let m = TvgMatrix::zeros(ring, labels(3));
        let seed = DelayedLifetime::new(IntervalSet::point(Scalar::zero()), Scalar::zero());
        let rows = m.ping(0, seed.clone(), 4).unwrap();
        for row in rows {
            assert_eq!(row[0], seed);
            assert!(row[1].lifetime.is_empty());
            assert!(row[2].lifetime.is_empty());
        }
    }
}
