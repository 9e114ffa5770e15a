//! Brute-force oracles for tests. Everything here recomputes results by
//! direct enumeration, independent of the algorithmic paths it checks.
//! Test-only support: not part of the library API proper.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::barcode::{Barcode, BarcodeInterval, Distance, MatchP};
use crate::interval::IntervalSet;
use crate::matrix::LifetimeMatrix;
use crate::scalar::{Rat, Scalar};

/// Minimal matching cost by enumerating every partial bijection.
pub fn exhaustive_matching_distance(b: &Barcode, c: &Barcode, p: MatchP) -> Distance {
    let left = b.expanded();
    let right = c.expanded();

    fn combine(p: MatchP, acc: &Scalar, piece: &Scalar) -> Scalar {
        match p {
            MatchP::Infinity => acc.clone().max(piece.clone()),
            MatchP::Finite(_) => acc.add(piece),
        }
    }
    fn pair_cost(p: MatchP, a: &BarcodeInterval, b: &BarcodeInterval) -> Scalar {
        match p {
            MatchP::Infinity => a.linf_to(b),
            MatchP::Finite(q) => a.lp_pow_to(b, q),
        }
    }
    fn diag_cost(p: MatchP, a: &BarcodeInterval) -> Scalar {
        match p {
            MatchP::Infinity => a.linf_diag(),
            MatchP::Finite(q) => a.lp_pow_diag(q),
        }
    }

    fn rec(
        p: MatchP,
        left: &[BarcodeInterval],
        right: &[BarcodeInterval],
        i: usize,
        used: &mut Vec<bool>,
        acc: Scalar,
        best: &mut Scalar,
    ) {
        if acc >= *best {
            return;
        }
        if i == left.len() {
            let mut total = acc;
            for (j, bar) in right.iter().enumerate() {
                if !used[j] {
                    total = combine(p, &total, &diag_cost(p, bar));
                }
            }
            if total < *best {
                *best = total;
            }
            return;
        }
        // leave bar i unmatched
        let unmatched = combine(p, &acc, &diag_cost(p, &left[i]));
        rec(p, left, right, i + 1, used, unmatched, best);
        // or match it to any unused right bar
        for j in 0..right.len() {
            if !used[j] {
                used[j] = true;
                let cost = combine(p, &acc, &pair_cost(p, &left[i], &right[j]));
                rec(p, left, right, i + 1, used, cost, best);
                used[j] = false;
            }
        }
    }

    let mut best = Scalar::PosInf;
    let mut used = vec![false; right.len()];
    rec(p, &left, &right, 0, &mut used, Scalar::zero(), &mut best);
    // an empty instance costs zero
    if left.is_empty() && right.is_empty() {
        best = Scalar::zero();
    }
    match p {
        MatchP::Infinity => Distance::Exact(best),
        MatchP::Finite(q) => Distance::Root { pow: best, p: q }.normalized(),
    }
}

/// Union of walk lifetimes over every length-k vertex sequence `i -> j`,
/// straight from the definition.
pub fn walk_lifetime_union(m: &LifetimeMatrix, i: usize, j: usize, k: usize) -> IntervalSet {
    let n = m.n();
    fn rec(
        m: &LifetimeMatrix,
        current: usize,
        target: usize,
        remaining: usize,
        acc: &IntervalSet,
        out: &mut IntervalSet,
        n: usize,
    ) {
        if acc.is_empty() {
            return;
        }
        if remaining == 0 {
            if current == target {
                *out = out.union(acc);
            }
            return;
        }
        for next in 0..n {
            let step = acc.intersect(m.get(current, next));
            rec(m, next, target, remaining - 1, &step, out, n);
        }
    }
    let mut out = IntervalSet::empty();
    if k == 0 {
        return if i == j { IntervalSet::full() } else { IntervalSet::empty() };
    }
    rec(m, i, j, k, &IntervalSet::full(), &mut out, n);
    out
}

/// Betti numbers of the undirected snapshot at `t`: component count and
/// independent-cycle count `E - V + C`. Vertices are always alive.
pub fn snapshot_betti(m: &LifetimeMatrix, t: &Scalar) -> (usize, usize) {
    let n = m.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let root = find(parent, parent[x]);
            parent[x] = root;
        }
        parent[x]
    }
    let mut edges = 0usize;
    for i in 0..n {
        for j in (i + 1)..n {
            let alive = m.get(i, j).contains(t) || m.get(j, i).contains(t);
            if alive {
                edges += 1;
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let components = (0..n)
        .filter(|&x| find(&mut parent, x) == x)
        .count();
    let cycles = edges + components - n;
    (components, cycles)
}

/// Random bounded lifetime matrix inside a window, adjacency convention.
pub fn random_adjacency(
    n: usize,
    lo: i64,
    hi: i64,
    max_components: usize,
    density: f64,
    rng: &mut ChaCha8Rng,
) -> LifetimeMatrix {
    use crate::semiring::lifetime::sample_interval_set;
    use crate::semiring::LifetimeSemiring;
    let labels = (0..n).map(|i| format!("n{i}")).collect();
    crate::matrix::TvgMatrix::from_fn(LifetimeSemiring, labels, |i, j| {
        if i == j || rng.gen::<f64>() > density {
            IntervalSet::empty()
        } else {
            sample_interval_set(rng, max_components, lo, hi)
        }
    })
}

/// Shifts every endpoint by an independent rational in `[-eps, eps]`;
/// inverted intervals collapse to their perturbed midpoint, which stays
/// within `eps` of both original endpoints.
pub fn perturb_set(set: &IntervalSet, eps: &Rat, rng: &mut ChaCha8Rng) -> IntervalSet {
    let delta = |rng: &mut ChaCha8Rng| -> Rat {
        let steps = rng.gen_range(-8i128..=8);
        eps * Rat::new(steps, 8)
    };
    IntervalSet::from_intervals(set.intervals().iter().map(|(lo, hi)| {
        let l = lo.expect_finite() + delta(rng);
        let h = hi.expect_finite() + delta(rng);
        if l <= h {
            (Scalar::Finite(l), Scalar::Finite(h))
        } else {
            let mid = (&l + &h) / Rat::from_integer(2);
            (Scalar::Finite(mid.clone()), Scalar::Finite(mid))
        }
    }))
}

/// Entry-wise perturbation of a bounded lifetime matrix (diagonal untouched).
pub fn perturb_matrix(m: &LifetimeMatrix, eps: &Rat, rng: &mut ChaCha8Rng) -> LifetimeMatrix {
    use crate::semiring::LifetimeSemiring;
    m.map_entries(LifetimeSemiring, |i, j, v| {
        if i == j {
            v.clone()
        } else {
            perturb_set(v, eps, rng)
        }
    })
}

/// Membership-grid oracle: compares two interval sets on a half-step lattice.
pub fn sets_agree_on_grid(a: &IntervalSet, b: &IntervalSet, lo: i64, hi: i64) -> bool {
    let mut t = Rat::new(lo as i128 * 2, 2);
    let end = Rat::from_integer(hi as i128);
    let step = Rat::new(1, 2);
    while t <= end {
        let s = Scalar::Finite(t.clone());
        if a.contains(&s) != b.contains(&s) {
            return false;
        }
        t += &step;
    }
    true
}
