//! Zigzag persistence barcodes of a lifetime-matrix TVG.
//!
//! The interval endpoints of all edge lifetimes cut the time axis into
//! finitely many constancy regions. Snapshots at the critical values and on
//! the open regions between them form an alternating diagram of subgraph
//! inclusions (regions include into both neighboring critical snapshots);
//! applying degree-0 or degree-1 graph homology over GF(2) yields a zigzag
//! module whose interval decomposition is the barcode. Quiver positions map
//! back to real intervals: critical positions contribute closed endpoints,
//! region positions open ones.

use std::collections::VecDeque;

use crate::barcode::{matching_distance, Barcode, BarcodeInterval, Distance, MatchP};
use crate::error::{Error, Result};
use crate::matrix::LifetimeMatrix;
use crate::scalar::Scalar;

pub mod gf2 {
    //! Dense bit-vectors and column maps over the two-element field.

    /// Bit vector of fixed length.
    #[derive(Debug, Clone, PartialEq, Eq)]
    pub struct Gf2Vec {
        len: usize,
        words: Vec<u64>,
    }

    impl Gf2Vec {
        pub fn zero(len: usize) -> Self {
            Gf2Vec {
                len,
                words: vec![0; len.div_ceil(64)],
            }
        }

        pub fn unit(len: usize, bit: usize) -> Self {
            let mut v = Gf2Vec::zero(len);
            v.set(bit, true);
            v
        }

        pub fn len(&self) -> usize {
            self.len
        }

        pub fn is_empty(&self) -> bool {
            self.len == 0
        }

        pub fn get(&self, i: usize) -> bool {
            (self.words[i / 64] >> (i % 64)) & 1 == 1
        }

        pub fn set(&mut self, i: usize, v: bool) {
            if v {
                self.words[i / 64] |= 1 << (i % 64);
            } else {
                self.words[i / 64] &= !(1 << (i % 64));
            }
        }

        pub fn xor_assign(&mut self, other: &Gf2Vec) {
            debug_assert_eq!(self.len, other.len);
            for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
                *a ^= b;
            }
        }

        pub fn is_zero(&self) -> bool {
            self.words.iter().all(|w| *w == 0)
        }

        /// Index of the highest set bit.
        pub fn leading_bit(&self) -> Option<usize> {
            for (w, word) in self.words.iter().enumerate().rev() {
                if *word != 0 {
                    return Some(w * 64 + 63 - word.leading_zeros() as usize);
                }
            }
            None
        }

        pub fn ones(&self) -> Vec<usize> {
            (0..self.len).filter(|&i| self.get(i)).collect()
        }
    }

    /// Column-major matrix: `cols[j]` is the image of the j-th basis vector.
    #[derive(Debug, Clone, PartialEq, Eq)]
    pub struct Gf2Matrix {
        pub rows: usize,
        pub cols: Vec<Gf2Vec>,
    }

    impl Gf2Matrix {
        pub fn new(rows: usize, cols: Vec<Gf2Vec>) -> Self {
            debug_assert!(cols.iter().all(|c| c.len() == rows));
            Gf2Matrix { rows, cols }
        }

        pub fn zero(rows: usize, cols: usize) -> Self {
            Gf2Matrix {
                rows,
                cols: vec![Gf2Vec::zero(rows); cols],
            }
        }

        pub fn ncols(&self) -> usize {
            self.cols.len()
        }

        pub fn apply(&self, v: &Gf2Vec) -> Gf2Vec {
            debug_assert_eq!(v.len(), self.cols.len());
            let mut out = Gf2Vec::zero(self.rows);
            for (j, col) in self.cols.iter().enumerate() {
                if v.get(j) {
                    out.xor_assign(col);
                }
            }
            out
        }
    }
}

use gf2::{Gf2Matrix, Gf2Vec};

/// Sorted distinct interval endpoints of all edge lifetimes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalSequence {
    pub values: Vec<Scalar>,
}

impl CriticalSequence {
    /// Midpoints of the open regions between consecutive critical values.
    pub fn region_midpoints(&self) -> Vec<Scalar> {
        self.values
            .windows(2)
            .map(|w| w[0].add(&w[1]).half())
            .collect()
    }

    /// One representative per diagram position: critical values interleaved
    /// with region midpoints.
    pub fn position_times(&self) -> Vec<Scalar> {
        let mids = self.region_midpoints();
        let mut out = Vec::with_capacity(self.values.len() + mids.len());
        for (k, v) in self.values.iter().enumerate() {
            out.push(v.clone());
            if let Some(m) = mids.get(k) {
                out.push(m.clone());
            }
        }
        out
    }
}

/// Endpoints of every (undirected) edge lifetime. Off-diagonal entries must
/// be bounded; the always-alive diagonal contributes no critical values.
pub fn critical_values(m: &LifetimeMatrix) -> Result<CriticalSequence> {
    let n = m.n();
    for i in 0..n {
        for j in 0..n {
            if i != j && !m.get(i, j).is_bounded() {
                return Err(Error::UnboundedEntry { i, j });
            }
        }
    }
    Ok(CriticalSequence {
        values: m.entry_endpoints(),
    })
}

/// Arrow direction between adjacent diagram positions `p` and `p+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArrowDir {
    /// Map goes `V_p -> V_{p+1}`.
    Forward,
    /// Map goes `V_{p+1} -> V_p`.
    Backward,
}

/// A zigzag quiver representation: vector-space dimensions per position and
/// the GF(2) maps along alternating arrows.
#[derive(Debug, Clone)]
pub struct ZigzagRep {
    pub dims: Vec<usize>,
    pub arrows: Vec<(ArrowDir, Gf2Matrix)>,
}

/// The alternating snapshot diagram of a TVG together with its critical
/// values: even positions sit at critical values, odd positions on the open
/// regions between them (subgraphs of both neighbors).
#[derive(Debug, Clone)]
pub struct ZigzagDiagram {
    pub critical: CriticalSequence,
    /// Undirected edge universe as `(u, v)` pairs with `u < v`.
    pub edges: Vec<(usize, usize)>,
    /// Alive edge mask per diagram position.
    pub alive: Vec<Vec<bool>>,
    pub vertices: usize,
}

impl ZigzagDiagram {
    pub fn positions(&self) -> usize {
        self.alive.len()
    }
}

/// Builds the alternating diagram from a lifetime matrix. Edges are
/// undirected for homology: the edge `{i,j}` is alive whenever either
/// directed lifetime is.
pub fn build_diagram(m: &LifetimeMatrix) -> Result<ZigzagDiagram> {
    let critical = critical_values(m)?;
    let n = m.n();
    let mut edges = Vec::new();
    let mut lifetimes = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let lt = m.get(i, j).union(m.get(j, i));
            if !lt.is_empty() {
                edges.push((i, j));
                lifetimes.push(lt);
            }
        }
    }
    let times = critical.position_times();
    let alive = times
        .iter()
        .map(|t| lifetimes.iter().map(|lt| lt.contains(t)).collect())
        .collect();
    Ok(ZigzagDiagram {
        critical,
        edges,
        alive,
        vertices: n,
    })
}

/// Per-position homology data for one snapshot graph.
struct GraphHomology {
    /// Component id per vertex.
    comp: Vec<usize>,
    n_comps: usize,
    /// Fundamental cycles of the cotree edges, as bitsets over the edge
    /// universe; their cotree edge indices, in the same order.
    cycles: Vec<Gf2Vec>,
    cotree: Vec<usize>,
}

fn graph_homology(vertices: usize, edges: &[(usize, usize)], alive: &[bool]) -> GraphHomology {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); vertices];
    for (e, &(u, v)) in edges.iter().enumerate() {
        if alive[e] {
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
    }
    let mut comp = vec![usize::MAX; vertices];
    let mut parent_edge: Vec<Option<(usize, usize)>> = vec![None; vertices]; // (parent vertex, edge)
    let mut tree_edge = vec![false; edges.len()];
    let mut n_comps = 0;
    for start in 0..vertices {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = n_comps;
        n_comps += 1;
        comp[start] = id;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &(v, e) in &adj[u] {
                if comp[v] == usize::MAX {
                    comp[v] = id;
                    parent_edge[v] = Some((u, e));
                    tree_edge[e] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    // fundamental cycle of each alive cotree edge: the edge plus the forest
    // paths from its endpoints up to their meeting point
    let mut cycles = Vec::new();
    let mut cotree = Vec::new();
    let depth = {
        let mut d = vec![0usize; vertices];
        // recompute depths by walking parents (forest is shallow; fine)
        for v in 0..vertices {
            let mut x = v;
            let mut n = 0;
            while let Some((p, _)) = parent_edge[x] {
                x = p;
                n += 1;
            }
            d[v] = n;
        }
        d
    };
    for (e, &(u, v)) in edges.iter().enumerate() {
        if !alive[e] || tree_edge[e] {
            continue;
        }
        let mut z = Gf2Vec::zero(edges.len());
        z.set(e, true);
        let (mut a, mut b) = (u, v);
        while depth[a] > depth[b] {
            let (p, pe) = parent_edge[a].unwrap();
            z.set(pe, !z.get(pe));
            a = p;
        }
        while depth[b] > depth[a] {
            let (p, pe) = parent_edge[b].unwrap();
            z.set(pe, !z.get(pe));
            b = p;
        }
        while a != b {
            let (pa, ea) = parent_edge[a].unwrap();
            let (pb, eb) = parent_edge[b].unwrap();
            z.set(ea, !z.get(ea));
            z.set(eb, !z.get(eb));
            a = pa;
            b = pb;
        }
        cycles.push(z);
        cotree.push(e);
    }
    GraphHomology {
        comp,
        n_comps,
        cycles,
        cotree,
    }
}

/// Homology representation of the diagram in the given degree (0 or 1).
pub fn homology_rep(diagram: &ZigzagDiagram, degree: usize) -> Result<ZigzagRep> {
    if degree > 1 {
        return Err(Error::BadDegree(degree));
    }
    let positions = diagram.positions();
    let homs: Vec<GraphHomology> = diagram
        .alive
        .iter()
        .map(|alive| graph_homology(diagram.vertices, &diagram.edges, alive))
        .collect();

    let dims: Vec<usize> = homs
        .iter()
        .map(|h| if degree == 0 { h.n_comps } else { h.cycles.len() })
        .collect();

    let mut arrows = Vec::with_capacity(positions.saturating_sub(1));
    for p in 0..positions.saturating_sub(1) {
        // even positions are critical snapshots (supergraphs); odd are regions
        let (dir, small, big) = if p % 2 == 0 {
            (ArrowDir::Backward, &homs[p + 1], &homs[p])
        } else {
            (ArrowDir::Forward, &homs[p], &homs[p + 1])
        };
        let matrix = if degree == 0 {
            inclusion_h0(small, big)
        } else {
            inclusion_h1(small, big)
        };
        arrows.push((dir, matrix));
    }
    Ok(ZigzagRep { dims, arrows })
}

/// H0 of an inclusion: each component of the subgraph lands in the component
/// of the supergraph containing any of its vertices.
fn inclusion_h0(small: &GraphHomology, big: &GraphHomology) -> Gf2Matrix {
    let mut cols = vec![Gf2Vec::zero(big.n_comps); small.n_comps];
    let mut seen = vec![false; small.n_comps];
    for v in 0..small.comp.len() {
        let sc = small.comp[v];
        if !seen[sc] {
            seen[sc] = true;
            cols[sc].set(big.comp[v], true);
        }
    }
    Gf2Matrix::new(big.n_comps, cols)
}

/// H1 of an inclusion: a cycle of the subgraph, expanded in the fundamental
/// basis of the supergraph, is the indicator of the supergraph cotree edges
/// it uses.
fn inclusion_h1(small: &GraphHomology, big: &GraphHomology) -> Gf2Matrix {
    let dim_big = big.cycles.len();
    let cols = small
        .cycles
        .iter()
        .map(|z| {
            let mut col = Gf2Vec::zero(dim_big);
            for (k, &e) in big.cotree.iter().enumerate() {
                if z.get(e) {
                    col.set(k, true);
                }
            }
            col
        })
        .collect();
    Gf2Matrix::new(dim_big, cols)
}

/// A subspace relation `R ⊆ V_left × V_right`, kept as an echelonized
/// basis of concatenated bit-vectors (left coordinates first).
struct Relation {
    left: usize,
    right: usize,
    basis: Vec<Gf2Vec>,
}

impl Relation {
    /// The identity relation on a space.
    fn identity(dim: usize) -> Relation {
        let basis = (0..dim)
            .map(|i| {
                let mut v = Gf2Vec::zero(2 * dim);
                v.set(i, true);
                v.set(dim + i, true);
                v
            })
            .collect();
        Relation {
            left: dim,
            right: dim,
            basis,
        }
    }

    fn from_spanning(left: usize, right: usize, vecs: Vec<Gf2Vec>) -> Relation {
        let mut ech: Vec<(usize, Gf2Vec)> = Vec::new();
        for v in vecs {
            let mut r = v;
            reduce(&mut r, &ech);
            if let Some(p) = r.leading_bit() {
                ech.push((p, r));
            }
        }
        Relation {
            left,
            right,
            basis: ech.into_iter().map(|(_, v)| v).collect(),
        }
    }

    /// Number of interval summands whose support covers the whole segment
    /// this relation spans: `dim π_right(R) - (dim R - dim π_left(R))`.
    ///
    /// Pairs `(0, z)` come exactly from bars born strictly inside the
    /// segment at backward arrows; subtracting their count leaves the bars
    /// reaching all the way back to the left end.
    fn rank(&self) -> usize {
        let proj_rank = |from: usize, len: usize| -> usize {
            let mut ech: Vec<(usize, Gf2Vec)> = Vec::new();
            for v in &self.basis {
                let mut r = Gf2Vec::zero(len);
                for b in 0..len {
                    if v.get(from + b) {
                        r.set(b, true);
                    }
                }
                reduce(&mut r, &ech);
                if let Some(p) = r.leading_bit() {
                    ech.push((p, r));
                }
            }
            ech.len()
        };
        let right_rank = proj_rank(self.left, self.right);
        let left_rank = proj_rank(0, self.left);
        right_rank - (self.basis.len() - left_rank)
    }

    /// Extends the right end across a forward map `f: V_right -> V_next`:
    /// `R' = {(x, f(z)) : (x, z) ∈ R}`.
    fn push_forward(&self, f: &Gf2Matrix) -> Relation {
        let next = f.rows;
        let vecs = self
            .basis
            .iter()
            .map(|v| {
                let mut z = Gf2Vec::zero(self.right);
                for b in 0..self.right {
                    if v.get(self.left + b) {
                        z.set(b, true);
                    }
                }
                let fz = f.apply(&z);
                let mut out = Gf2Vec::zero(self.left + next);
                for b in 0..self.left {
                    if v.get(b) {
                        out.set(b, true);
                    }
                }
                for b in 0..next {
                    if fz.get(b) {
                        out.set(self.left + b, true);
                    }
                }
                out
            })
            .collect();
        Relation::from_spanning(self.left, next, vecs)
    }

    /// Extends the right end across a backward map `g: V_next -> V_right`:
    /// `R' = {(x, w) : (x, g(w)) ∈ R}`, the kernel of
    /// `(x, w) -> [(x, g(w))] mod R`.
    fn pull_back(&self, g: &Gf2Matrix) -> Relation {
        let next = g.ncols();
        let total = self.left + next;
        // echelon of R for reduction modulo R
        let mut r_ech: Vec<(usize, Gf2Vec)> = Vec::new();
        for v in &self.basis {
            let mut r = v.clone();
            reduce(&mut r, &r_ech);
            if let Some(p) = r.leading_bit() {
                r_ech.push((p, r));
            }
        }
        // kernel of `(x, w) -> [(x, g(w))] mod R`, tracking source
        // combinations; reductions interleave R pivots (free) with placed
        // image pivots (tracked)
        let mut img_ech: Vec<(usize, Gf2Vec, Gf2Vec)> = Vec::new();
        let mut kernel: Vec<Gf2Vec> = Vec::new();
        for u in 0..total {
            let mut img = Gf2Vec::zero(self.left + self.right);
            if u < self.left {
                img.set(u, true);
            } else {
                let gw = &g.cols[u - self.left];
                for b in 0..self.right {
                    if gw.get(b) {
                        img.set(self.left + b, true);
                    }
                }
            }
            let mut pre = Gf2Vec::unit(total, u);
            loop {
                match img.leading_bit() {
                    None => {
                        kernel.push(pre);
                        break;
                    }
                    Some(piv) => {
                        if let Some((_, v)) = r_ech.iter().find(|(pv, _)| *pv == piv) {
                            img.xor_assign(v);
                        } else if let Some((_, v, q)) =
                            img_ech.iter().find(|(pv, _, _)| *pv == piv)
                        {
                            img.xor_assign(v);
                            pre.xor_assign(q);
                        } else {
                            img_ech.push((piv, img, pre));
                            break;
                        }
                    }
                }
            }
        }
        Relation::from_spanning(self.left, next, kernel)
    }
}

/// Interval decomposition of a zigzag quiver representation over GF(2):
/// returns the multiset of position intervals `[birth, death]` (inclusive).
///
/// The number of bars covering a segment `[s, t]` is the rank of the
/// composite relation across the segment, which is monotone in `t`; bar
/// multiplicities follow by inclusion-exclusion over segment counts. The
/// per-start sweep stops as soon as the count hits zero.
pub fn interval_decomposition(rep: &ZigzagRep) -> Vec<(usize, usize)> {
    let len = rep.dims.len();
    let mut bars: Vec<(usize, usize)> = Vec::new();
    if len == 0 {
        return bars;
    }
    let counts = segment_counts(rep);
    let n = |s: isize, t: isize| -> isize {
        if s < 0 || t >= len as isize || s > t {
            return 0;
        }
        counts[s as usize]
            .get((t - s) as usize)
            .copied()
            .unwrap_or(0) as isize
    };
    for s in 0..len {
        let reach = counts[s]
            .len()
            .max(if s > 0 { counts[s - 1].len() } else { 0 });
        for t in s..(s + reach).min(len) {
            let (s, t) = (s as isize, t as isize);
            let mult = n(s, t) - n(s - 1, t) - n(s, t + 1) + n(s - 1, t + 1);
            debug_assert!(mult >= 0);
            for _ in 0..mult {
                bars.push((s as usize, t as usize));
            }
        }
    }
    bars
}

/// `counts[s][t - s]` = number of bars containing positions `[s, t]`,
/// truncated once it reaches zero (it is non-increasing in `t`).
pub fn segment_counts(rep: &ZigzagRep) -> Vec<Vec<usize>> {
    let len = rep.dims.len();
    let mut counts: Vec<Vec<usize>> = Vec::with_capacity(len);
    for s in 0..len {
        let mut row = Vec::new();
        let mut rel = Relation::identity(rep.dims[s]);
        for t in s..len {
            if t > s {
                let (dir, matrix) = &rep.arrows[t - 1];
                rel = match dir {
                    ArrowDir::Forward => rel.push_forward(matrix),
                    ArrowDir::Backward => rel.pull_back(matrix),
                };
            }
            let r = rel.rank();
            row.push(r);
            if r == 0 {
                break;
            }
        }
        counts.push(row);
    }
    counts
}

fn reduce(v: &mut Gf2Vec, echelon: &[(usize, Gf2Vec)]) {
    loop {
        match v.leading_bit() {
            None => return,
            Some(piv) => match echelon.iter().find(|(pv, _)| *pv == piv) {
                Some((_, col)) => v.xor_assign(col),
                None => return,
            },
        }
    }
}

/// Maps a diagram position interval to a real interval with openness flags:
/// critical positions give closed ends, region positions open ends.
fn position_interval_to_bar(critical: &CriticalSequence, b: usize, d: usize) -> BarcodeInterval {
    let tau = &critical.values;
    let (birth, open_left) = if b % 2 == 0 {
        (tau[b / 2].clone(), false)
    } else {
        (tau[(b - 1) / 2].clone(), true)
    };
    let (death, open_right) = if d % 2 == 0 {
        (tau[d / 2].clone(), false)
    } else {
        (tau[(d + 1) / 2].clone(), true)
    };
    BarcodeInterval {
        birth,
        death,
        open_left,
        open_right,
    }
}

/// Degree-0 or degree-1 zigzag barcode of a lifetime-matrix TVG.
///
/// Vertices are taken always alive; edges are undirected for homology.
pub fn zigzag_barcode(m: &LifetimeMatrix, degree: usize) -> Result<Barcode> {
    let diagram = build_diagram(m)?;
    if diagram.critical.values.is_empty() {
        return Ok(Barcode::empty());
    }
    let rep = homology_rep(&diagram, degree)?;
    let intervals = interval_decomposition(&rep);
    Ok(Barcode::from_bars(intervals.into_iter().map(|(b, d)| {
        position_interval_to_bar(&diagram.critical, b, d)
    })))
}

/// Matching distance between the degree-k barcodes of two TVGs.
pub fn barcode_feature_distance(
    g1: &LifetimeMatrix,
    g2: &LifetimeMatrix,
    degree: usize,
    p: MatchP,
) -> Result<Distance> {
    let b1 = zigzag_barcode(g1, degree)?;
    let b2 = zigzag_barcode(g2, degree)?;
    Ok(matching_distance(&b1, &b2, p))
}

/// Barcode file form: one `k birth death open_l open_r multiplicity` line
/// per bar.
pub fn barcode_lines(degree: usize, barcode: &Barcode) -> String {
    let mut out = String::new();
    for (bar, m) in barcode.multiset() {
        out.push_str(&format!(
            "{} {} {} {} {} {}\n",
            degree,
            bar.birth,
            bar.death,
            u8::from(bar.open_left),
            u8::from(bar.open_right),
            m
        ));
    }
    out
}
