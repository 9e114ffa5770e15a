//! Distances between TVGs: per-entry Hausdorff, (p,q)-disconnect distances,
//! symmetrized Hausdorff over node relabelings, and the interleaving-distance
//! aliases that ride on them.

use crate::barcode::{matching_distance, Barcode, Distance, MatchP};
use crate::error::{Error, Result};
use crate::interval::IntervalSet;
use crate::matrix::LifetimeMatrix;
use crate::scalar::{Rat, Scalar};

fn check_same_shape(m: &LifetimeMatrix, n: &LifetimeMatrix) -> Result<()> {
    if m.n() != n.n() {
        return Err(Error::DimensionMismatch {
            left: m.n(),
            right: n.n(),
        });
    }
    if m.labels() != n.labels() {
        return Err(Error::LabelMismatch);
    }
    Ok(())
}

/// Max over entries of the exact Hausdorff distance (infinity possible).
pub fn tvg_hausdorff(m: &LifetimeMatrix, n: &LifetimeMatrix) -> Result<Scalar> {
    check_same_shape(m, n)?;
    let size = m.n();
    let mut worst = Scalar::zero();
    for i in 0..size {
        for j in 0..size {
            worst = worst.max(m.get(i, j).hausdorff(n.get(i, j)));
        }
    }
    Ok(worst)
}

/// The `(p,q)`-disconnect distance: per entry, the matching distance between
/// the barcodes of disconnect times (complements of the windowed entries,
/// with ray components kept unbounded); the `l^q` norm aggregates the
/// resulting length-`n²` vector.
///
/// With `p = q = inf` this equals [`tvg_hausdorff`] of the windowed matrices
/// exactly. Complements are taken in the whole line after windowing the
/// entries; clipping the rays to the window would break that identity at the
/// window boundary.
pub fn disconnect_distance(
    m: &LifetimeMatrix,
    n: &LifetimeMatrix,
    p: MatchP,
    q: MatchP,
    w: &IntervalSet,
) -> Result<Distance> {
    check_same_shape(m, n)?;
    let size = m.n();
    let mut per_entry: Vec<Distance> = Vec::with_capacity(size * size);
    for i in 0..size {
        for j in 0..size {
            let a = Barcode::from_complement(&m.get(i, j).intersect(w))?;
            let b = Barcode::from_complement(&n.get(i, j).intersect(w))?;
            per_entry.push(matching_distance(&a, &b, p));
        }
    }
    Ok(aggregate_lq(&per_entry, q))
}

/// `l^q` norm of a vector of exact distances. Exact whenever the entry
/// exponent divides `q` (in particular for `q = p`, `q = inf`, or rational
/// entries); mixed exponents fall back to floating point.
fn aggregate_lq(entries: &[Distance], q: MatchP) -> Distance {
    if entries.iter().any(|d| d.is_infinite()) {
        return Distance::infinite();
    }
    match q {
        MatchP::Infinity => entries
            .iter()
            .cloned()
            .max_by(|a, b| a.total_cmp(b))
            .unwrap_or_else(Distance::zero),
        MatchP::Finite(qv) => {
            let mut sum = Rat::from_integer(0);
            for d in entries {
                match d {
                    Distance::Exact(Scalar::Finite(r)) => {
                        let mut acc = Rat::from_integer(1);
                        for _ in 0..qv {
                            acc *= r;
                        }
                        sum += acc;
                    }
                    Distance::Root {
                        pow: Scalar::Finite(r),
                        p,
                    } if qv % p == 0 => {
                        // (r^(1/p))^q = r^(q/p)
                        let mut acc = Rat::from_integer(1);
                        for _ in 0..qv / p {
                            acc *= r;
                        }
                        sum += acc;
                    }
                    other => {
                        // mixed exponents: approximate
                        let total: f64 = entries
                            .iter()
                            .map(|d| d.to_f64().powi(qv as i32))
                            .sum();
                        let _ = other;
                        return Distance::Approx(total.powf(1.0 / qv as f64));
                    }
                }
            }
            Distance::Root {
                pow: Scalar::Finite(sum),
                p: qv,
            }
            .normalized()
        }
    }
}

/// Search strategy for the relabeling infimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Branch-and-bound over all permutations; rejected for n > 9.
    Exact,
    /// Greedy assignment; an upper bound only.
    Greedy,
}

pub const EXACT_SEARCH_MAX_N: usize = 9;

/// Infimum over node permutations of the Hausdorff distance to the
/// relabeled matrix. Returns the distance and a witnessing permutation
/// (`sigma[i]` is the row/column of `n` matched to row/column `i` of `m`).
pub fn symmetrized_hausdorff(
    m: &LifetimeMatrix,
    n: &LifetimeMatrix,
    mode: SearchMode,
) -> Result<(Scalar, Vec<usize>)> {
    check_same_shape(m, n)?;
    let size = m.n();
    if size == 0 {
        return Ok((Scalar::zero(), Vec::new()));
    }
    // identity assignment seeds the bound and wins ties
    let identity: Vec<usize> = (0..size).collect();
    let mut best = tvg_hausdorff(m, n)?;
    let mut best_perm = identity;

    match mode {
        SearchMode::Greedy => {
            let (d, perm) = greedy_assignment(m, n);
            if d < best {
                best = d;
                best_perm = perm;
            }
        }
        SearchMode::Exact => {
            if size > EXACT_SEARCH_MAX_N {
                return Err(Error::ExactSearchTooLarge {
                    n: size,
                    max: EXACT_SEARCH_MAX_N,
                });
            }
            let mut assigned: Vec<usize> = Vec::with_capacity(size);
            let mut used = vec![false; size];
            branch_and_bound(
                m,
                n,
                &mut assigned,
                &mut used,
                &Scalar::zero(),
                &mut best,
                &mut best_perm,
            );
        }
    }
    Ok((best, best_perm))
}

/// Extends a partial assignment row by row; the partial max-cost only grows,
/// which is the pruning bound.
fn branch_and_bound(
    m: &LifetimeMatrix,
    n: &LifetimeMatrix,
    assigned: &mut Vec<usize>,
    used: &mut Vec<bool>,
    partial: &Scalar,
    best: &mut Scalar,
    best_perm: &mut Vec<usize>,
) {
    let size = m.n();
    let i = assigned.len();
    if i == size {
        if *partial < *best {
            *best = partial.clone();
            *best_perm = assigned.clone();
        }
        return;
    }
    for target in 0..size {
        if used[target] {
            continue;
        }
        // cost added by pairing node i with target, against all prior pairs
        let mut cost = partial.clone();
        cost = cost.max(m.get(i, i).hausdorff(n.get(target, target)));
        for (prev_i, &prev_t) in assigned.iter().enumerate() {
            cost = cost.max(m.get(prev_i, i).hausdorff(n.get(prev_t, target)));
            cost = cost.max(m.get(i, prev_i).hausdorff(n.get(target, prev_t)));
            if cost >= *best {
                break;
            }
        }
        if cost >= *best {
            continue;
        }
        assigned.push(target);
        used[target] = true;
        branch_and_bound(m, n, assigned, used, &cost, best, best_perm);
        assigned.pop();
        used[target] = false;
    }
}

fn greedy_assignment(m: &LifetimeMatrix, n: &LifetimeMatrix) -> (Scalar, Vec<usize>) {
    let size = m.n();
    let mut perm: Vec<usize> = Vec::with_capacity(size);
    let mut used = vec![false; size];
    let mut cost = Scalar::zero();
    for i in 0..size {
        let mut best_t = None;
        let mut best_cost = Scalar::PosInf;
        for target in 0..size {
            if used[target] {
                continue;
            }
            let mut c = cost.clone().max(m.get(i, i).hausdorff(n.get(target, target)));
            for (prev_i, &prev_t) in perm.iter().enumerate() {
                c = c.max(m.get(prev_i, i).hausdorff(n.get(prev_t, target)));
                c = c.max(m.get(i, prev_i).hausdorff(n.get(target, prev_t)));
            }
            if best_t.is_none() || c < best_cost {
                best_t = Some(target);
                best_cost = c;
            }
        }
        let t = best_t.expect("targets remain");
        perm.push(t);
        used[t] = true;
        cost = best_cost;
    }
    (cost, perm)
}

/// The interleaving distance of the fixed-correspondence TVG summaries; by
/// the isometry with the Hausdorff distance it is computed as
/// [`tvg_hausdorff`], never by direct interleaving search.
pub fn interleaving_distance(m: &LifetimeMatrix, n: &LifetimeMatrix) -> Result<Scalar> {
    tvg_hausdorff(m, n)
}

/// The interleaving distance of label-free TVG summaries; computed as the
/// symmetrized Hausdorff distance via the corresponding isometry.
pub fn interleaving_distance_unlabeled(
    m: &LifetimeMatrix,
    n: &LifetimeMatrix,
    mode: SearchMode,
) -> Result<(Scalar, Vec<usize>)> {
    symmetrized_hausdorff(m, n, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::TvgMatrix;
    use crate::semiring::LifetimeSemiring;
    use crate::testutil::random_adjacency;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("n{i}")).collect()
    }

    #[test]
    fn hausdorff_zero_on_self_and_single_entry_difference() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_adjacency(4, 0, 50, 2, 0.7, &mut rng);
        assert_eq!(tvg_hausdorff(&m, &m).unwrap(), Scalar::zero());

        let mut n = m.clone();
        n.set(0, 1, IntervalSet::of(0, 3));
        let mut m2 = m.clone();
        m2.set(0, 1, IntervalSet::of(0, 1));
        assert_eq!(tvg_hausdorff(&m2, &n).unwrap(), Scalar::from_int(2));
    }

    #[test]
    fn hausdorff_equals_bottleneck_of_complements() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let a = crate::semiring::lifetime::sample_interval_set(&mut rng, 3, 0, 40);
            let b = crate::semiring::lifetime::sample_interval_set(&mut rng, 3, 0, 40);
            let direct = a.hausdorff(&b);
            let ba = Barcode::from_complement(&a).unwrap();
            let bb = Barcode::from_complement(&b).unwrap();
            let via = matching_distance(&ba, &bb, MatchP::Infinity);
            assert_eq!(
                via,
                Distance::Exact(direct.clone()),
                "mismatch for {a:?} vs {b:?}"
            );
        }
    }

    #[test]
    fn disconnect_inf_inf_equals_hausdorff() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let w = IntervalSet::of(0, 50);
        for _ in 0..25 {
            let m = random_adjacency(3, 0, 50, 2, 0.8, &mut rng).with_full_diagonal();
            let n = random_adjacency(3, 0, 50, 2, 0.8, &mut rng).with_full_diagonal();
            let dc = disconnect_distance(&m, &n, MatchP::Infinity, MatchP::Infinity, &w).unwrap();
            let dh = tvg_hausdorff(&m.restrict_window(&w), &n.restrict_window(&w)).unwrap();
            assert_eq!(dc, Distance::Exact(dh));
        }
    }

    #[test]
    fn disconnect_zero_on_identical() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let w = IntervalSet::of(0, 50);
        let m = random_adjacency(3, 0, 50, 2, 0.8, &mut rng);
        let d = disconnect_distance(&m, &m, MatchP::Finite(2), MatchP::Finite(2), &w).unwrap();
        assert!(d.is_zero());
    }

    #[test]
    fn symmetrized_is_relabeling_invariant_and_bounded_by_hausdorff() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..15 {
            let m = random_adjacency(4, 0, 30, 2, 0.7, &mut rng);
            // a relabeled copy is at symmetrized distance zero
            let perm = vec![2, 0, 3, 1];
            let relabeled = m.permuted(&perm);
            let (d, _) = symmetrized_hausdorff(&m, &relabeled, SearchMode::Exact).unwrap();
            assert_eq!(d, Scalar::zero());

            let n = random_adjacency(4, 0, 30, 2, 0.7, &mut rng);
            let (ds, _) = symmetrized_hausdorff(&m, &n, SearchMode::Exact).unwrap();
            let dh = tvg_hausdorff(&m, &n).unwrap();
            assert!(ds <= dh);
            // greedy is an upper bound on exact
            let (dg, _) = symmetrized_hausdorff(&m, &n, SearchMode::Greedy).unwrap();
            assert!(ds <= dg);
        }
    }

    #[test]
    fn exact_search_matches_full_enumeration_at_n3() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..20 {
            let m = random_adjacency(3, 0, 20, 2, 0.8, &mut rng);
            let n = random_adjacency(3, 0, 20, 2, 0.8, &mut rng);
            let (d, _) = symmetrized_hausdorff(&m, &n, SearchMode::Exact).unwrap();
            // all six permutations by hand
            let mut best = Scalar::PosInf;
            let perms: [[usize; 3]; 6] = [
                [0, 1, 2],
                [0, 2, 1],
                [1, 0, 2],
                [1, 2, 0],
                [2, 0, 1],
                [2, 1, 0],
            ];
            for perm in perms {
                let cost = tvg_hausdorff(&m, &n.permuted(&perm)).unwrap();
                best = best.min(cost);
            }
            assert_eq!(d, best);
        }
    }

    #[test]
    fn exact_search_size_limit() {
        let m = TvgMatrix::zeros(LifetimeSemiring, labels(10));
        let err = symmetrized_hausdorff(&m, &m, SearchMode::Exact).unwrap_err();
        assert!(matches!(err, Error::ExactSearchTooLarge { n: 10, max: 9 }));
    }

    #[test]
    fn eps_perturbation_bounds_hausdorff() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..30 {
            let m = random_adjacency(4, 0, 40, 2, 0.8, &mut rng);
            let eps = Rat::new(1, 2);
            let perturbed = crate::testutil::perturb_matrix(&m, &eps, &mut rng);
            let d = tvg_hausdorff(&m, &perturbed).unwrap();
            assert!(d <= Scalar::ratio(1, 2), "perturbation moved too far: {d}");
        }
    }

    #[test]
    fn size_mismatch_is_an_error() {
        let m = TvgMatrix::zeros(LifetimeSemiring, labels(3));
        let n = TvgMatrix::zeros(LifetimeSemiring, labels(4));
        assert!(tvg_hausdorff(&m, &n).is_err());
    }
}
