//! Synthetic TVG generators: random contact plans, sphere-sampled
//! constellations, and the two-class corpus for the classification harness.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::interval::IntervalSet;
use crate::matrix::{LifetimeMatrix, TvgMatrix};
use crate::scalar::{Rat, Scalar};
use crate::semiring::LifetimeSemiring;

fn node_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("n{i}")).collect()
}

/// Parameters for [`gen_random_tvg`].
#[derive(Debug, Clone)]
pub struct RandomTvgParams {
    pub n: usize,
    /// Analysis window (single bounded interval).
    pub window: IntervalSet,
    /// Maximum contact windows per ordered pair.
    pub max_contacts: usize,
    /// Probability that a pair gets any contacts at all.
    pub density: f64,
    /// Mirror every generated contact to the reverse direction.
    pub symmetric: bool,
    pub seed: u64,
}

/// Reproducible random lifetime TVG: contacts drawn on a 1/1000 grid of the
/// window, entries normalized and contained in the window, adjacency
/// convention (empty diagonal).
pub fn gen_random_tvg(params: &RandomTvgParams) -> Result<LifetimeMatrix> {
    if params.n < 2 {
        return Err(Error::InvalidInput("need at least 2 nodes".to_string()));
    }
    if params.window.num_components() != 1 || !params.window.is_bounded() {
        return Err(Error::WindowNotSingleInterval(params.window.to_string()));
    }
    let (wlo, whi) = params.window.intervals()[0].clone();
    let lo = wlo.expect_finite().clone();
    let len = whi.expect_finite() - &lo;
    let grid = 1000i128;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut m = TvgMatrix::zeros(LifetimeSemiring, node_labels(params.n));
    for i in 0..params.n {
        for j in 0..params.n {
            if i == j || (params.symmetric && j < i) {
                continue;
            }
            if rng.gen::<f64>() > params.density {
                continue;
            }
            let count = rng.gen_range(1..=params.max_contacts.max(1));
            let mut windows = Vec::with_capacity(count);
            for _ in 0..count {
                let a = rng.gen_range(0..grid);
                let b = rng.gen_range(a..=grid);
                let start = Scalar::Finite(&lo + &len * Rat::new(a, grid));
                let end = Scalar::Finite(&lo + &len * Rat::new(b, grid));
                windows.push((start, end));
            }
            let set = IntervalSet::from_intervals(windows);
            if params.symmetric {
                m.set(j, i, set.clone());
            }
            m.set(i, j, set);
        }
    }
    Ok(m)
}

/// Parameters for [`gen_sphere_constellation`].
#[derive(Debug, Clone)]
pub struct SphereParams {
    pub n: usize,
    /// Connectivity angle in radians; nodes link when their angular
    /// separation is at most `theta`.
    pub theta: f64,
    /// Simulation duration in seconds.
    pub duration: Scalar,
    /// Rotation rates: when set, each node circles the sphere on its own
    /// axis at a rate drawn from `[0.5, 1.0] * max_rate` radians/second and
    /// lifetimes are extracted by time-stepping at `duration / steps`.
    pub rotation: Option<f64>,
    /// Time-step count for the rotating case; `1000` is the default choice.
    pub steps: u32,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy)]
struct Vec3 {
    x: f64,
    y: f64,
    z: f64,
}

impl Vec3 {
    fn dot(&self, o: &Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    fn cross(&self, o: &Vec3) -> Vec3 {
        Vec3 {
            x: self.y * o.z - self.z * o.y,
            y: self.z * o.x - self.x * o.z,
            z: self.x * o.y - self.y * o.x,
        }
    }

    fn scale(&self, s: f64) -> Vec3 {
        Vec3 {
            x: self.x * s,
            y: self.y * s,
            z: self.z * s,
        }
    }

    fn add(&self, o: &Vec3) -> Vec3 {
        Vec3 {
            x: self.x + o.x,
            y: self.y + o.y,
            z: self.z + o.z,
        }
    }

    fn normalize(&self) -> Vec3 {
        let n = self.dot(self).sqrt();
        self.scale(1.0 / n)
    }

    /// Rodrigues rotation about a unit axis.
    fn rotate(&self, axis: &Vec3, angle: f64) -> Vec3 {
        let (s, c) = angle.sin_cos();
        self.scale(c)
            .add(&axis.cross(self).scale(s))
            .add(&axis.scale(axis.dot(self) * (1.0 - c)))
    }
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vec3 {
    // normalized gaussian triple is uniform on the sphere
    loop {
        let g = |rng: &mut ChaCha8Rng| -> f64 {
            let u: f64 = rng.gen_range(1e-12..1.0);
            let v: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            (-2.0 * u.ln()).sqrt() * v.cos()
        };
        let v = Vec3 {
            x: g(rng),
            y: g(rng),
            z: g(rng),
        };
        if v.dot(&v) > 1e-12 {
            return v.normalize();
        }
    }
}

/// Nodes sampled uniformly on the unit sphere; an (undirected) edge is alive
/// whenever the angular distance is at most `theta`. Static constellations
/// get exact lifetimes (the whole duration or never); rotating ones are
/// extracted by fine time-stepping on a rational grid.
pub fn gen_sphere_constellation(params: &SphereParams) -> Result<LifetimeMatrix> {
    if params.n < 2 {
        return Err(Error::InvalidInput("need at least 2 nodes".to_string()));
    }
    if !(params.theta > 0.0 && params.theta < std::f64::consts::PI) {
        return Err(Error::InvalidInput(format!(
            "connectivity angle {} outside (0, pi)",
            params.theta
        )));
    }
    if !params.duration.is_finite() || params.duration.is_negative() {
        return Err(Error::InvalidInput("duration must be finite and >= 0".to_string()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let points: Vec<Vec3> = (0..params.n).map(|_| random_unit(&mut rng)).collect();
    let cos_theta = params.theta.cos();
    let window = IntervalSet::interval(Scalar::zero(), params.duration.clone());
    let mut m = TvgMatrix::zeros(LifetimeSemiring, node_labels(params.n));

    match params.rotation {
        None => {
            for i in 0..params.n {
                for j in (i + 1)..params.n {
                    if points[i].dot(&points[j]) >= cos_theta {
                        m.set(i, j, window.clone());
                        m.set(j, i, window.clone());
                    }
                }
            }
        }
        Some(max_rate) => {
            let axes: Vec<Vec3> = (0..params.n).map(|_| random_unit(&mut rng)).collect();
            let rates: Vec<f64> = (0..params.n)
                .map(|_| max_rate * rng.gen_range(0.5..=1.0))
                .collect();
            let steps = params.steps.max(1) as i128;
            let dur = params.duration.expect_finite().clone();
            let dur_f = params.duration.to_f64();
            // alive mask per step, then maximal runs become closed intervals
            for i in 0..params.n {
                for j in (i + 1)..params.n {
                    let mut runs: Vec<(Scalar, Scalar)> = Vec::new();
                    let mut run_start: Option<i128> = None;
                    for k in 0..=steps {
                        let t = dur_f * (k as f64) / (steps as f64);
                        let pi = points[i].rotate(&axes[i], rates[i] * t);
                        let pj = points[j].rotate(&axes[j], rates[j] * t);
                        let alive = pi.dot(&pj) >= cos_theta;
                        match (alive, run_start) {
                            (true, None) => run_start = Some(k),
                            (false, Some(s)) => {
                                runs.push(grid_interval(&dur, s, k - 1, steps));
                                run_start = None;
                            }
                            _ => {}
                        }
                    }
                    if let Some(s) = run_start {
                        runs.push(grid_interval(&dur, s, steps, steps));
                    }
                    let set = IntervalSet::from_intervals(runs);
                    if !set.is_empty() {
                        m.set(i, j, set.clone());
                        m.set(j, i, set);
                    }
                }
            }
        }
    }
    Ok(m)
}

fn grid_interval(dur: &Rat, from: i128, to: i128, steps: i128) -> (Scalar, Scalar) {
    (
        Scalar::Finite(dur * Rat::new(from, steps)),
        Scalar::Finite(dur * Rat::new(to, steps)),
    )
}

/// One record of the hop-diameter / convergence-radius experiment.
#[derive(Debug, Clone)]
pub struct SphereTrial {
    pub n: usize,
    pub seed: u64,
    pub hop_diameter: usize,
    /// First cumulant index at which Boolean reachability stabilizes, or
    /// `None` within the budget.
    pub kleene_radius: Option<usize>,
    pub connected: bool,
}

/// Static-constellation experiment: hop diameters and Kleene convergence
/// radii over repeated seeds.
///
/// A static TVG is a single snapshot, so the radius is computed on the
/// Boolean reachability matrix (the snapshot map is a semi-ring isomorphism
/// onto its image for static lifetimes); bitset rows keep n = 500 cheap.
pub fn sphere_experiment(n: usize, theta: f64, seeds: &[u64], max_k: usize) -> Result<Vec<SphereTrial>> {
    let mut out = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let params = SphereParams {
            n,
            theta,
            duration: Scalar::from_int(1),
            rotation: None,
            steps: 1000,
            seed,
        };
        let m = gen_sphere_constellation(&params)?;
        let adj: Vec<Vec<bool>> = (0..n)
            .map(|i| (0..n).map(|j| i != j && !m.get(i, j).is_empty()).collect())
            .collect();
        let (diam, connected) = boolean_diameter(&adj);
        let radius = boolean_kleene_radius(&adj, max_k);
        out.push(SphereTrial {
            n,
            seed,
            hop_diameter: diam,
            kleene_radius: radius,
            connected,
        });
    }
    Ok(out)
}

/// BFS all-pairs: (max finite hop distance, whether all pairs connect).
pub fn boolean_diameter(adj: &[Vec<bool>]) -> (usize, bool) {
    let n = adj.len();
    let neighbors: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| adj[i][j]).collect())
        .collect();
    let mut diameter = 0;
    let mut connected = true;
    for src in 0..n {
        let mut dist = vec![usize::MAX; n];
        dist[src] = 0;
        let mut queue = std::collections::VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &v in &neighbors[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        for &d in &dist {
            if d == usize::MAX {
                connected = false;
            } else {
                diameter = diameter.max(d);
            }
        }
    }
    (diameter, connected)
}

/// First k with `C_{k+1} = C_k` for the Boolean reachability cumulants,
/// using bitset rows.
pub fn boolean_kleene_radius(adj: &[Vec<bool>], max_k: usize) -> Option<usize> {
    let n = adj.len();
    let words = n.div_ceil(64);
    let mut rows: Vec<Vec<u64>> = vec![vec![0u64; words]; n]; // C_0 = I
    let mut adj_rows: Vec<Vec<u64>> = vec![vec![0u64; words]; n];
    for i in 0..n {
        rows[i][i / 64] |= 1 << (i % 64);
        for j in 0..n {
            if adj[i][j] {
                adj_rows[i][j / 64] |= 1 << (j % 64);
            }
        }
    }
    for k in 1..=max_k {
        // next = C_k or C_k * A
        let mut next = rows.clone();
        for i in 0..n {
            for j in 0..n {
                if (rows[i][j / 64] >> (j % 64)) & 1 == 1 {
                    for w in 0..words {
                        next[i][w] |= adj_rows[j][w];
                    }
                }
            }
        }
        if next == rows {
            return Some(k - 1);
        }
        rows = next;
    }
    None
}

/// A labeled synthetic sample for the classification harness.
#[derive(Debug, Clone)]
pub struct CorpusTvg {
    pub id: String,
    pub label: String,
    pub matrix: LifetimeMatrix,
}

/// Two synthetic classes with distinguishable degree-1 barcodes:
///
/// * `churn` — dense constellations with many short contact windows; cycles
///   are born and die quickly, so degree-1 bars are short.
/// * `ring` — a persistent ring with a few long-lived chords behind a relay
///   bottleneck; the ring's cycle survives most of the window, so degree-1
///   bars are long.
pub fn gen_two_class_corpus(per_class: usize, seed: u64) -> Result<Vec<CorpusTvg>> {
    if per_class < 2 {
        return Err(Error::InvalidInput("need at least 2 samples per class".to_string()));
    }
    let mut out = Vec::with_capacity(2 * per_class);
    let n = 8usize;
    let horizon = 100i64;
    for s in 0..per_class {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0x1000 + s as u64));
        let mut m = TvgMatrix::zeros(LifetimeSemiring, node_labels(n));
        // churn: every pair occasionally connects for a short burst
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.gen::<f64>() > 0.55 {
                    continue;
                }
                let bursts = rng.gen_range(1..=3);
                let mut windows = Vec::new();
                for _ in 0..bursts {
                    let start = rng.gen_range(0..horizon - 8);
                    let len = rng.gen_range(2..=7);
                    windows.push((
                        Scalar::from_int(start),
                        Scalar::from_int((start + len).min(horizon)),
                    ));
                }
                let set = IntervalSet::from_intervals(windows);
                m.set(i, j, set.clone());
                m.set(j, i, set);
            }
        }
        out.push(CorpusTvg {
            id: format!("churn-{s}"),
            label: "churn".to_string(),
            matrix: m,
        });
    }
    for s in 0..per_class {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0x2000 + s as u64));
        let mut m = TvgMatrix::zeros(LifetimeSemiring, node_labels(n));
        // ring: long-lived cycle edges with jittered ends
        for i in 0..n {
            let j = (i + 1) % n;
            let start = rng.gen_range(0..6);
            let end = horizon - rng.gen_range(0..6);
            let set = IntervalSet::of(start, end);
            m.set(i.min(j), i.max(j), set.clone());
            m.set(i.max(j), i.min(j), set);
        }
        // a couple of medium-lived chords through a relay node
        let relay = rng.gen_range(0..n);
        for _ in 0..2 {
            let other = (relay + rng.gen_range(2..n - 1)) % n;
            let start = rng.gen_range(10..40);
            let end = start + rng.gen_range(20..45);
            let set = IntervalSet::of(start, end.min(horizon));
            m.set(relay.min(other), relay.max(other), set.clone());
            m.set(relay.max(other), relay.min(other), set);
        }
        out.push(CorpusTvg {
            id: format!("ring-{s}"),
            label: "ring".to_string(),
            matrix: m,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_tvg_is_deterministic_and_windowed() {
        let params = RandomTvgParams {
            n: 5,
            window: IntervalSet::of(0, 40),
            max_contacts: 3,
            density: 0.8,
            symmetric: false,
            seed: 99,
        };
        let a = gen_random_tvg(&params).unwrap();
        let b = gen_random_tvg(&params).unwrap();
        assert_eq!(a, b);
        for i in 0..5 {
            for j in 0..5 {
                assert!(a.get(i, j).is_subset_of(&params.window) || a.get(i, j).is_empty());
            }
        }
        let empty = gen_random_tvg(&RandomTvgParams {
            density: 0.0,
            ..params
        })
        .unwrap();
        assert_eq!(empty.max_entry_components(), 0);
    }

    #[test]
    fn antipodal_static_points_never_connect() {
        // force two antipodal points by checking the generated geometry:
        // theta = pi/3 keeps points with angular distance pi apart
        let params = SphereParams {
            n: 2,
            theta: std::f64::consts::FRAC_PI_3,
            duration: Scalar::from_int(10),
            rotation: None,
            steps: 1000,
            seed: 4,
        };
        // run many seeds; whenever the two points are far apart, no edge
        let mut saw_disconnected = false;
        for seed in 0..20 {
            let m = gen_sphere_constellation(&SphereParams { seed, ..params.clone() }).unwrap();
            if m.get(0, 1).is_empty() {
                saw_disconnected = true;
            } else {
                assert_eq!(m.get(0, 1), &IntervalSet::of(0, 10));
            }
        }
        assert!(saw_disconnected);
    }

    #[test]
    fn sphere_generation_is_seed_deterministic() {
        let params = SphereParams {
            n: 20,
            theta: 1.0,
            duration: Scalar::from_int(50),
            rotation: Some(0.05),
            steps: 1000,
            seed: 7,
        };
        let a = gen_sphere_constellation(&params).unwrap();
        let b = gen_sphere_constellation(&params).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rotating_endpoints_stabilize_under_refinement() {
        // doubling the step count moves each extracted endpoint by less
        // than the coarse step size
        let coarse = SphereParams {
            n: 6,
            theta: 1.2,
            duration: Scalar::from_int(100),
            rotation: Some(0.08),
            steps: 1000,
            seed: 21,
        };
        let fine = SphereParams {
            steps: 2000,
            ..coarse.clone()
        };
        let m = gen_sphere_constellation(&coarse).unwrap();
        let mf = gen_sphere_constellation(&fine).unwrap();
        let step = Scalar::Finite(Rat::new(100, 1000));
        for i in 0..6 {
            for j in 0..6 {
                let a = m.get(i, j);
                let b = mf.get(i, j);
                assert_eq!(a.num_components(), b.num_components(), "({i},{j})");
                for (x, y) in a.intervals().iter().zip(b.intervals().iter()) {
                    assert!(x.0.abs_diff(&y.0) < step, "lo drift at ({i},{j})");
                    assert!(x.1.abs_diff(&y.1) < step, "hi drift at ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn corpus_shape_and_determinism() {
        let corpus = gen_two_class_corpus(4, 5).unwrap();
        assert_eq!(corpus.len(), 8);
        assert_eq!(corpus.iter().filter(|c| c.label == "churn").count(), 4);
        assert_eq!(corpus.iter().filter(|c| c.label == "ring").count(), 4);
        let again = gen_two_class_corpus(4, 5).unwrap();
        for (a, b) in corpus.iter().zip(again.iter()) {
            assert_eq!(a.matrix, b.matrix);
        }
    }

    #[test]
    fn boolean_radius_matches_diameter_on_random_graphs() {
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..30 {
            let n = 8;
            let mut adj = vec![vec![false; n]; n];
            for i in 0..n {
                for j in 0..n {
                    if i != j && rng.gen::<f64>() < 0.3 {
                        adj[i][j] = true;
                    }
                }
            }
            let (diam, _) = boolean_diameter(&adj);
            let radius = boolean_kleene_radius(&adj, 4 * n).unwrap();
            assert_eq!(radius, diam);
        }
    }
}
