//! The computable fragment of the universal contact semi-ring.
//!
//! An element maps each send time `t` to the set of achievable delivery
//! delays: if `x` is in `f(t)`, a message sent at `t` can arrive at `t + x`.
//! Values are finite unions of closed intervals whose endpoints are affine
//! in `t`, held piecewise over finitely many breakpoints. This fragment is
//! closed under both operations and covers contact windows, propagation
//! delay, and store-and-forward buffering (the self-loop `t -> [0, inf)`).
//!
//! The time axis is partitioned into alternating regions: open intervals
//! between breakpoints and the breakpoints themselves. Point regions carry
//! their own value so boundary behavior is exact.

use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::Semiring;
use crate::error::{Error, Result};
use crate::interval::IntervalSet;
use crate::semiring::delay::DelayedLifetime;
use crate::scalar::{Rat, Scalar};

fn rat(n: i64) -> Rat {
    Rat::from_integer(n as i128)
}

/// Affine function `a + b*t` with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Affine {
    pub a: Rat,
    pub b: Rat,
}

impl Affine {
    pub fn constant(a: Rat) -> Self {
        Affine { a, b: rat(0) }
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        &self.a + &self.b * t
    }

    /// Solves `self(t) == c`; `None` when parallel (no unique root).
    fn root(&self, c: &Rat) -> Option<Rat> {
        if self.b == rat(0) {
            None
        } else {
            Some((c - &self.a) / &self.b)
        }
    }

    /// Solves `self(t) == other(t)`.
    fn crossing(&self, other: &Affine) -> Option<Rat> {
        if self.b == other.b {
            None
        } else {
            Some((&other.a - &self.a) / (&self.b - &other.b))
        }
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |r: &Rat| -> String {
            if r.is_integer() {
                format!("{}", r.numer())
            } else {
                format!("{}/{}", r.numer(), r.denom())
            }
        };
        if self.b == rat(0) {
            write!(f, "{}", show(&self.a))
        } else if self.a == rat(0) {
            write!(f, "{}*t", show(&self.b))
        } else if self.b < rat(0) {
            write!(f, "{}{}*t", show(&self.a), show(&self.b))
        } else {
            write!(f, "{}+{}*t", show(&self.a), show(&self.b))
        }
    }
}

/// Upper endpoint of a parametric interval: affine or `+inf`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum UpperEnd {
    Fin(Affine),
    Inf,
}

impl UpperEnd {
    fn eval(&self, t: &Rat) -> Scalar {
        match self {
            UpperEnd::Fin(af) => Scalar::Finite(af.eval(t)),
            UpperEnd::Inf => Scalar::PosInf,
        }
    }
}

/// A parametric closed interval `[lo(t), hi(t)]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParamInterval {
    pub lo: Affine,
    pub hi: UpperEnd,
}

impl ParamInterval {
    pub fn point(v: Affine) -> Self {
        ParamInterval {
            lo: v.clone(),
            hi: UpperEnd::Fin(v),
        }
    }
}

/// Piecewise parametric-interval-valued map.
///
/// `values` has one entry per region of the break grid: index `2i+1` is the
/// point region at `breaks[i]`, even indices are the open regions between
/// (and beyond) breakpoints, left to right. `values.len() == 2*breaks.len()+1`.
#[derive(Clone, PartialEq, Eq)]
pub struct ContactMap {
    breaks: Vec<Rat>,
    values: Vec<Vec<ParamInterval>>,
}

/// Region bounds: `None` stands for the corresponding infinity.
#[derive(Debug, Clone)]
struct Region {
    lo: Option<Rat>,
    hi: Option<Rat>,
    is_point: bool,
}

impl Region {
    fn probe(&self) -> Rat {
        match (&self.lo, &self.hi) {
            _ if self.is_point => self.lo.clone().unwrap(),
            (None, None) => rat(0),
            (None, Some(h)) => h - rat(1),
            (Some(l), None) => l + rat(1),
            (Some(l), Some(h)) => (l + h) / rat(2),
        }
    }
}

impl ContactMap {
    pub fn zero() -> Self {
        ContactMap {
            breaks: Vec::new(),
            values: vec![Vec::new()],
        }
    }

    /// `t -> {0}` everywhere: immediate delivery, the multiplicative neutral.
    pub fn one() -> Self {
        ContactMap {
            breaks: Vec::new(),
            values: vec![vec![ParamInterval::point(Affine::constant(rat(0)))]],
        }
    }

    /// Unlimited storage: `t -> [0, inf)`. A bounded buffer uses `Some(limit)`.
    pub fn storage(limit: Option<Rat>) -> Self {
        let hi = match limit {
            Some(l) => UpperEnd::Fin(Affine::constant(l)),
            None => UpperEnd::Inf,
        };
        ContactMap {
            breaks: Vec::new(),
            values: vec![vec![ParamInterval {
                lo: Affine::constant(rat(0)),
                hi,
            }]],
        }
    }

    /// Contact window `[start, end]` with a fixed delivery delay set
    /// `[delay_lo, delay_hi]`; outside the window the value is empty.
    pub fn contact_window(start: Rat, end: Rat, delay_lo: Rat, delay_hi: UpperEnd) -> Self {
        assert!(start <= end);
        let iv = ParamInterval {
            lo: Affine::constant(delay_lo),
            hi: delay_hi,
        };
        let map = if start == end {
            ContactMap {
                breaks: vec![start],
                values: vec![Vec::new(), vec![iv], Vec::new()],
            }
        } else {
            ContactMap {
                breaks: vec![start, end],
                values: vec![
                    Vec::new(),
                    vec![iv.clone()],
                    vec![iv.clone()],
                    vec![iv],
                    Vec::new(),
                ],
            }
        };
        map.normalized()
    }

    /// Embedding of a lifetime: `t -> {0}` while the lifetime is active.
    pub fn from_lifetime(set: &IntervalSet) -> Self {
        let mut out = ContactMap::zero();
        let zero_iv = ParamInterval::point(Affine::constant(rat(0)));
        for (lo, hi) in set.intervals() {
            let piece = match (lo, hi) {
                (Scalar::NegInf, Scalar::PosInf) => ContactMap {
                    breaks: vec![],
                    values: vec![vec![zero_iv.clone()]],
                },
                (Scalar::NegInf, Scalar::Finite(h)) => ContactMap {
                    breaks: vec![h.clone()],
                    values: vec![vec![zero_iv.clone()], vec![zero_iv.clone()], Vec::new()],
                },
                (Scalar::Finite(l), Scalar::PosInf) => ContactMap {
                    breaks: vec![l.clone()],
                    values: vec![Vec::new(), vec![zero_iv.clone()], vec![zero_iv.clone()]],
                },
                (Scalar::Finite(l), Scalar::Finite(h)) if l == h => ContactMap {
                    breaks: vec![l.clone()],
                    values: vec![Vec::new(), vec![zero_iv.clone()], Vec::new()],
                },
                (Scalar::Finite(l), Scalar::Finite(h)) => ContactMap {
                    breaks: vec![l.clone(), h.clone()],
                    values: vec![
                        Vec::new(),
                        vec![zero_iv.clone()],
                        vec![zero_iv.clone()],
                        vec![zero_iv.clone()],
                        Vec::new(),
                    ],
                },
                _ => unreachable!("normalized interval"),
            };
            out = out.union(&piece);
        }
        out
    }

    fn regions(&self) -> Vec<Region> {
        if self.breaks.is_empty() {
            return vec![Region {
                lo: None,
                hi: None,
                is_point: false,
            }];
        }
        let mut out = Vec::with_capacity(2 * self.breaks.len() + 1);
        out.push(Region {
            lo: None,
            hi: Some(self.breaks[0].clone()),
            is_point: false,
        });
        for (i, b) in self.breaks.iter().enumerate() {
            out.push(Region {
                lo: Some(b.clone()),
                hi: Some(b.clone()),
                is_point: true,
            });
            let hi = self.breaks.get(i + 1).cloned();
            out.push(Region {
                lo: Some(b.clone()),
                hi,
                is_point: false,
            });
        }
        out
    }

    /// Value at a fixed time, as an interval set of delays.
    pub fn eval(&self, t: &Rat) -> IntervalSet {
        let idx = match self.breaks.binary_search(t) {
            Ok(i) => 2 * i + 1,
            Err(i) => 2 * i,
        };
        instantiate(&self.values[idx], t)
    }

    /// True when the value is empty for every `t`.
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_empty())
    }

    /// Pointwise union.
    pub fn union(&self, other: &ContactMap) -> ContactMap {
        let mut breaks: Vec<Rat> = self
            .breaks
            .iter()
            .chain(other.breaks.iter())
            .cloned()
            .collect();
        breaks.sort();
        breaks.dedup();
        let grid = grid_regions(&breaks);
        let values = grid
            .iter()
            .map(|r| {
                let mut list = self.list_on(r);
                list.extend(other.list_on(r));
                list
            })
            .collect();
        ContactMap { breaks, values }.normalized()
    }

    /// The semi-ring product: route through `self`, then through `other`.
    ///
    /// For each send time `t` and delay `x` in `self(t)`, the message sits at
    /// the relay at time `u = t + x`, picks up any delay in `other(u)`, and
    /// the total delay is `x + y`. The result sweeps `u` across `other`'s
    /// regions; endpoint extrema of affine functions land on sub-range ends,
    /// so the output stays piecewise affine.
    pub fn compose(&self, other: &ContactMap) -> Result<ContactMap> {
        let mut contribs: Vec<(TRange, ParamInterval)> = Vec::new();
        let f_regions = self.regions();
        let g_regions = other.regions();
        for (fi, fr) in f_regions.iter().enumerate() {
            for fiv in &self.values[fi] {
                for (gi, gr) in g_regions.iter().enumerate() {
                    for giv in &other.values[gi] {
                        sweep(fr, fiv, gr, giv, &mut contribs)?;
                    }
                }
            }
        }
        Ok(assemble(contribs).normalized())
    }

    fn list_on(&self, r: &Region) -> Vec<ParamInterval> {
        // the grid refines this map's regions, so one region contains r
        let probe = r.probe();
        let idx = match self.breaks.binary_search(&probe) {
            Ok(i) => 2 * i + 1,
            Err(i) => 2 * i,
        };
        self.values[idx].clone()
    }

    /// Canonical form: regions split until interval endpoints keep a fixed
    /// order, per-region lists sorted and merged, point regions instantiated,
    /// and removable breakpoints dropped.
    fn normalized(self) -> ContactMap {
        let ContactMap { mut breaks, values } = self;

        // collect extra breakpoints where endpoint functions cross
        let grid = grid_regions(&breaks);
        let mut extra: Vec<Rat> = Vec::new();
        for (idx, region) in grid.iter().enumerate() {
            if region.is_point {
                continue;
            }
            let list = &values[idx];
            let mut ends: Vec<&Affine> = Vec::new();
            for iv in list {
                ends.push(&iv.lo);
                if let UpperEnd::Fin(hi) = &iv.hi {
                    ends.push(hi);
                }
            }
            for i in 0..ends.len() {
                for j in (i + 1)..ends.len() {
                    if let Some(t) = ends[i].crossing(ends[j]) {
                        if region_contains_interior(region, &t) {
                            extra.push(t);
                        }
                    }
                }
            }
        }
        if !extra.is_empty() {
            let old = ContactMap {
                breaks: breaks.clone(),
                values,
            };
            breaks.extend(extra);
            breaks.sort();
            breaks.dedup();
            let grid = grid_regions(&breaks);
            let values: Vec<Vec<ParamInterval>> =
                grid.iter().map(|r| old.list_on(r)).collect();
            return ContactMap { breaks, values }.normalized();
        }

        // canonicalize each region
        let grid = grid_regions(&breaks);
        let mut canon: Vec<Vec<ParamInterval>> = Vec::with_capacity(grid.len());
        for (idx, region) in grid.iter().enumerate() {
            canon.push(canonical_list(&values[idx], region));
        }

        // drop breakpoints whose three surrounding regions agree
        let mut keep: Vec<bool> = vec![true; breaks.len()];
        for (i, b) in breaks.iter().enumerate() {
            let left = &canon[2 * i];
            let point = &canon[2 * i + 1];
            let right = &canon[2 * i + 2];
            if left == right && instantiate_list(left, b) == *point {
                keep[i] = false;
            }
        }
        if keep.iter().all(|k| *k) {
            return ContactMap {
                breaks,
                values: canon,
            };
        }
        let mut new_breaks = Vec::new();
        let mut new_values = vec![canon[0].clone()];
        for (i, b) in breaks.iter().enumerate() {
            if keep[i] {
                new_breaks.push(b.clone());
                new_values.push(canon[2 * i + 1].clone());
                new_values.push(canon[2 * i + 2].clone());
            } else {
                // merged region keeps the shared open-region list
                *new_values.last_mut().unwrap() = canon[2 * i + 2].clone();
            }
        }
        ContactMap {
            breaks: new_breaks,
            values: new_values,
        }
    }
}

fn grid_regions(breaks: &[Rat]) -> Vec<Region> {
    ContactMap {
        breaks: breaks.to_vec(),
        values: Vec::new(),
    }
    .regions()
}

fn region_contains_interior(region: &Region, t: &Rat) -> bool {
    let above = region.lo.as_ref().map_or(true, |lo| t > lo);
    let below = region.hi.as_ref().map_or(true, |hi| t < hi);
    above && below
}

fn instantiate(list: &[ParamInterval], t: &Rat) -> IntervalSet {
    IntervalSet::from_intervals(list.iter().filter_map(|iv| {
        let lo = Scalar::Finite(iv.lo.eval(t));
        let hi = iv.hi.eval(t);
        if lo <= hi {
            Some((lo, hi))
        } else {
            None
        }
    }))
}

fn instantiate_list(list: &[ParamInterval], t: &Rat) -> Vec<ParamInterval> {
    instantiate(list, t)
        .intervals()
        .iter()
        .map(|(lo, hi)| ParamInterval {
            lo: Affine::constant(lo.expect_finite().clone()),
            hi: match hi {
                Scalar::PosInf => UpperEnd::Inf,
                h => UpperEnd::Fin(Affine::constant(h.expect_finite().clone())),
            },
        })
        .collect()
}

/// Sorts and merges a region's intervals; endpoint order is constant across
/// the region (crossings were split off), so comparisons at the probe decide.
fn canonical_list(list: &[ParamInterval], region: &Region) -> Vec<ParamInterval> {
    if region.is_point {
        let b = region.lo.as_ref().unwrap();
        return instantiate_list(list, b);
    }
    let probe = region.probe();
    let mut items: Vec<(Rat, Scalar, ParamInterval)> = list
        .iter()
        .filter(|iv| {
            // drop intervals empty on this region
            Scalar::Finite(iv.lo.eval(&probe)) <= iv.hi.eval(&probe)
        })
        .map(|iv| (iv.lo.eval(&probe), iv.hi.eval(&probe), iv.clone()))
        .collect();
    items.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)));
    let mut out: Vec<(Rat, Scalar, ParamInterval)> = Vec::with_capacity(items.len());
    for (lo_v, hi_v, iv) in items {
        match out.last_mut() {
            Some((_, prev_hi, prev)) if Scalar::Finite(lo_v.clone()) <= *prev_hi => {
                if hi_v > *prev_hi {
                    prev.hi = iv.hi;
                    *prev_hi = hi_v;
                }
            }
            _ => out.push((lo_v, hi_v, iv)),
        }
    }
    out.into_iter().map(|(_, _, iv)| iv).collect()
}

/// A time range with explicit endpoint closedness; `None` bounds are infinite.
#[derive(Debug, Clone)]
struct TRange {
    lo: Option<Rat>,
    lo_closed: bool,
    hi: Option<Rat>,
    hi_closed: bool,
}

impl TRange {
    fn point(t: Rat) -> Self {
        TRange {
            lo: Some(t.clone()),
            lo_closed: true,
            hi: Some(t),
            hi_closed: true,
        }
    }

    fn covers_point(&self, b: &Rat) -> bool {
        let lo_ok = match &self.lo {
            None => true,
            Some(l) => l < b || (l == b && self.lo_closed),
        };
        let hi_ok = match &self.hi {
            None => true,
            Some(h) => h > b || (h == b && self.hi_closed),
        };
        lo_ok && hi_ok
    }

    fn covers_open(&self, lo: &Option<Rat>, hi: &Option<Rat>) -> bool {
        // grid regions never straddle a contribution endpoint, so covering
        // reduces to bound comparisons
        let lo_ok = match (&self.lo, lo) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(b)) => a <= b,
        };
        let hi_ok = match (&self.hi, hi) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(b)) => a >= b,
        };
        lo_ok && hi_ok
    }
}

/// One (f-interval, g-interval) pair swept over one pair of regions.
fn sweep(
    fr: &Region,
    fiv: &ParamInterval,
    gr: &Region,
    giv: &ParamInterval,
    out: &mut Vec<(TRange, ParamInterval)>,
) -> Result<()> {
    // closure bounds of the relay-time range allowed by g's region
    let sc_lo: Option<Rat> = gr.lo.clone();
    let sc_hi: Option<Rat> = gr.hi.clone();

    if fr.is_point {
        let t0 = fr.lo.as_ref().unwrap();
        if let Some(iv) = numeric_sweep(t0, fiv, &sc_lo, &sc_hi, giv)? {
            out.push((TRange::point(t0.clone()), iv));
        }
        return Ok(());
    }

    // relay-time window endpoints as affine functions of t
    let wlo = Affine {
        a: fiv.lo.a.clone(),
        b: &fiv.lo.b + rat(1),
    };
    let whi: Option<Affine> = match &fiv.hi {
        UpperEnd::Inf => None,
        UpperEnd::Fin(q) => Some(Affine {
            a: q.a.clone(),
            b: &q.b + rat(1),
        }),
    };

    // cut where the window boundary crosses the g-region boundary
    let mut cuts: Vec<Rat> = Vec::new();
    for bound in [&sc_lo, &sc_hi] {
        if let Some(c) = bound {
            if let Some(t) = wlo.root(c) {
                cuts.push(t);
            }
            if let Some(q) = &whi {
                if let Some(t) = q.root(c) {
                    cuts.push(t);
                }
            }
        }
    }
    cuts.retain(|t| region_contains_interior(fr, t));
    cuts.sort();
    cuts.dedup();

    // sub-regions between cuts, plus the cut points themselves
    let mut edges: Vec<Option<Rat>> = vec![fr.lo.clone()];
    for c in &cuts {
        edges.push(Some(c.clone()));
    }
    edges.push(fr.hi.clone());

    for k in 0..edges.len() - 1 {
        let lo = edges[k].clone();
        let hi = edges[k + 1].clone();
        let sub = Region {
            lo: lo.clone(),
            hi: hi.clone(),
            is_point: false,
        };
        let probe = sub.probe();
        if let Some(iv) = symbolic_sweep(&probe, &wlo, &whi, &sc_lo, &sc_hi, giv)? {
            out.push((
                TRange {
                    lo,
                    lo_closed: false,
                    hi,
                    hi_closed: false,
                },
                iv,
            ));
        }
    }
    for c in &cuts {
        if let Some(iv) = numeric_sweep(c, fiv, &sc_lo, &sc_hi, giv)? {
            out.push((TRange::point(c.clone()), iv));
        }
    }
    Ok(())
}

/// Sweep with `t` fixed: all quantities are numbers.
fn numeric_sweep(
    t0: &Rat,
    fiv: &ParamInterval,
    sc_lo: &Option<Rat>,
    sc_hi: &Option<Rat>,
    giv: &ParamInterval,
) -> Result<Option<ParamInterval>> {
    let w_lo = t0 + fiv.lo.eval(t0);
    let w_hi: Option<Rat> = match &fiv.hi {
        UpperEnd::Inf => None,
        UpperEnd::Fin(q) => Some(t0 + q.eval(t0)),
    };
    if Scalar::Finite(w_lo.clone())
        > match &w_hi {
            None => Scalar::PosInf,
            Some(h) => Scalar::Finite(h.clone()),
        }
    {
        return Ok(None);
    }

    let u_lo = match sc_lo {
        Some(c) if c > &w_lo => c.clone(),
        _ => w_lo,
    };
    let u_hi: Option<Rat> = match (sc_hi, w_hi) {
        (Some(c), Some(h)) => Some(if c < &h { c.clone() } else { h }),
        (Some(c), None) => Some(c.clone()),
        (None, Some(h)) => Some(h),
        (None, None) => None,
    };
    if let Some(h) = &u_hi {
        if &u_lo > h {
            return Ok(None);
        }
    }

    let sigma_r = &giv.lo.b + rat(1);
    let lo_out = if sigma_r >= rat(0) {
        giv.lo.eval(&u_lo) + &u_lo - t0
    } else {
        match &u_hi {
            Some(h) => giv.lo.eval(h) + h - t0,
            None => {
                return Err(Error::ContactFragment(
                    "delay set unbounded below under storage sweep".into(),
                ))
            }
        }
    };
    let hi_out = upper_sweep_numeric(&giv.hi, &u_lo, &u_hi, t0);
    Ok(Some(ParamInterval {
        lo: Affine::constant(lo_out),
        hi: hi_out,
    }))
}

fn upper_sweep_numeric(
    hi: &UpperEnd,
    u_lo: &Rat,
    u_hi: &Option<Rat>,
    t0: &Rat,
) -> UpperEnd {
    match hi {
        UpperEnd::Inf => UpperEnd::Inf,
        UpperEnd::Fin(s) => {
            let sigma = &s.b + rat(1);
            if sigma > rat(0) {
                match u_hi {
                    None => UpperEnd::Inf,
                    Some(h) => UpperEnd::Fin(Affine::constant(s.eval(h) + h - t0)),
                }
            } else if sigma == rat(0) {
                UpperEnd::Fin(Affine::constant(&s.a - t0))
            } else {
                UpperEnd::Fin(Affine::constant(s.eval(u_lo) + u_lo - t0))
            }
        }
    }
}

/// Sweep over an open t-sub-region where the active window/region bound
/// forms are constant (decided at the probe point).
fn symbolic_sweep(
    probe: &Rat,
    wlo: &Affine,
    whi: &Option<Affine>,
    sc_lo: &Option<Rat>,
    sc_hi: &Option<Rat>,
    giv: &ParamInterval,
) -> Result<Option<ParamInterval>> {
    // lower relay bound: window start or g-region start, whichever is higher
    let u_lo: Affine = match sc_lo {
        Some(c) if *c > wlo.eval(probe) => Affine::constant(c.clone()),
        _ => wlo.clone(),
    };
    // upper relay bound: min of window end and g-region end, or none
    let u_hi: Option<Affine> = match (whi, sc_hi) {
        (None, None) => None,
        (Some(q), None) => Some(q.clone()),
        (None, Some(c)) => Some(Affine::constant(c.clone())),
        (Some(q), Some(c)) => {
            if q.eval(probe) <= *c {
                Some(q.clone())
            } else {
                Some(Affine::constant(c.clone()))
            }
        }
    };
    // emptiness on this sub-region
    if let Some(h) = &u_hi {
        if u_lo.eval(probe) > h.eval(probe) {
            return Ok(None);
        }
    }

    let sigma_r = &giv.lo.b + rat(1);
    let lo_out = if sigma_r >= rat(0) {
        affine_relay(&giv.lo, &u_lo)
    } else {
        match &u_hi {
            Some(h) => affine_relay(&giv.lo, h),
            None => {
                return Err(Error::ContactFragment(
                    "delay set unbounded below under storage sweep".into(),
                ))
            }
        }
    };
    let hi_out = match &giv.hi {
        UpperEnd::Inf => UpperEnd::Inf,
        UpperEnd::Fin(s) => {
            let sigma = &s.b + rat(1);
            if sigma > rat(0) {
                match &u_hi {
                    None => UpperEnd::Inf,
                    Some(h) => UpperEnd::Fin(affine_relay(s, h)),
                }
            } else if sigma == rat(0) {
                UpperEnd::Fin(Affine {
                    a: s.a.clone(),
                    b: rat(-1),
                })
            } else {
                UpperEnd::Fin(affine_relay(s, &u_lo))
            }
        }
    };
    Ok(Some(ParamInterval { lo: lo_out, hi: hi_out }))
}

/// `g_end(u(t)) + u(t) - t` as an affine function of `t`.
fn affine_relay(g_end: &Affine, u: &Affine) -> Affine {
    let sigma = &g_end.b + rat(1);
    Affine {
        a: &g_end.a + &sigma * &u.a,
        b: &sigma * &u.b - rat(1),
    }
}

/// Collects contributions onto a fresh break grid.
fn assemble(contribs: Vec<(TRange, ParamInterval)>) -> ContactMap {
    let mut breaks: Vec<Rat> = Vec::new();
    for (r, _) in &contribs {
        if let Some(l) = &r.lo {
            breaks.push(l.clone());
        }
        if let Some(h) = &r.hi {
            breaks.push(h.clone());
        }
    }
    breaks.sort();
    breaks.dedup();
    let grid = grid_regions(&breaks);
    let mut values: Vec<Vec<ParamInterval>> = vec![Vec::new(); grid.len()];
    for (range, iv) in contribs {
        for (idx, region) in grid.iter().enumerate() {
            let covered = if region.is_point {
                range.covers_point(region.lo.as_ref().unwrap())
            } else {
                range.covers_open(&region.lo, &region.hi)
            };
            if covered {
                values[idx].push(iv.clone());
            }
        }
    }
    ContactMap { breaks, values }
}

/// Spec object for the contact semi-ring.
#[derive(Debug, Clone, Copy, Default)]
pub struct ContactSemiring;

impl Semiring for ContactSemiring {
    type Elem = ContactMap;

    fn zero(&self) -> ContactMap {
        ContactMap::zero()
    }

    fn one(&self) -> ContactMap {
        ContactMap::one()
    }

    fn add(&self, a: &ContactMap, b: &ContactMap) -> ContactMap {
        a.union(b)
    }

    fn mul(&self, a: &ContactMap, b: &ContactMap) -> Result<ContactMap> {
        a.compose(b)
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> ContactMap {
        // random mix of contact windows and storage loops keeps samples in
        // the closed fragment
        let mut map = ContactMap::zero();
        for _ in 0..rng.gen_range(0..=2usize) {
            let s = rat(rng.gen_range(-10..=10));
            let e = &s + rat(rng.gen_range(0..=8));
            let d = rat(rng.gen_range(0..=6));
            let hi = if rng.gen_ratio(1, 4) {
                UpperEnd::Fin(Affine::constant(&d + rat(rng.gen_range(0..=4))))
            } else {
                UpperEnd::Fin(Affine::constant(d.clone()))
            };
            map = map.union(&ContactMap::contact_window(s, e, d, hi));
        }
        if rng.gen_ratio(1, 6) {
            let limit = if rng.gen_ratio(1, 2) {
                Some(rat(rng.gen_range(0..=10)))
            } else {
                None
            };
            map = map.union(&ContactMap::storage(limit));
        }
        map
    }
}

impl fmt::Debug for ContactMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ContactMap {
    /// Text form: `piece <range>: {[lo, hi], ...}` records joined by `; `,
    /// with `empty` for the zero map. Ranges use `[b,b]` for breakpoints and
    /// `(x,y)` for open stretches; empty regions are omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "empty");
        }
        let regions = self.regions();
        let mut first = true;
        for (idx, region) in regions.iter().enumerate() {
            let list = &self.values[idx];
            if list.is_empty() {
                continue;
            }
            if !first {
                write!(f, "; ")?;
            }
            first = false;
            let show = |r: &Option<Rat>, inf: &str| -> String {
                match r {
                    None => inf.to_string(),
                    Some(v) if v.is_integer() => format!("{}", v.numer()),
                    Some(v) => format!("{}/{}", v.numer(), v.denom()),
                }
            };
            if region.is_point {
                let b = show(&region.lo, "");
                write!(f, "piece [{b},{b}]: {{")?;
            } else {
                write!(
                    f,
                    "piece ({},{}): {{",
                    show(&region.lo, "-inf"),
                    show(&region.hi, "inf")
                )?;
            }
            for (k, iv) in list.iter().enumerate() {
                if k > 0 {
                    write!(f, ", ")?;
                }
                match &iv.hi {
                    UpperEnd::Inf => write!(f, "[{}, inf]", iv.lo)?,
                    UpperEnd::Fin(hi) => write!(f, "[{}, {}]", iv.lo, hi)?,
                }
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

impl ContactMap {
    /// Embedding of the two-element semi-ring: false is the empty map, true
    /// immediate delivery.
    pub fn from_bool(b: bool) -> ContactMap {
        if b {
            ContactMap::one()
        } else {
            ContactMap::zero()
        }
    }

    /// Constant map to a finite set of delay points.
    pub fn constant_points(points: Vec<Rat>) -> ContactMap {
        let values = instantiate_list(
            &points
                .into_iter()
                .map(|p| ParamInterval::point(Affine::constant(p)))
                .collect::<Vec<_>>(),
            &rat(0),
        );
        ContactMap {
            breaks: Vec::new(),
            values: vec![values],
        }
    }

    /// Tropical image of a constant map to a finite set: the least delay,
    /// infinity for the empty map. Errors when the map is not constant or
    /// not finite-set valued.
    pub fn constant_min(&self) -> Result<Scalar> {
        if !self.breaks.is_empty() {
            return Err(Error::NotInSubSemiring("constant finite-set contact maps"));
        }
        let list = &self.values[0];
        let mut min: Option<Rat> = None;
        for iv in list {
            let degenerate =
                iv.lo.b == rat(0) && matches!(&iv.hi, UpperEnd::Fin(h) if *h == iv.lo);
            if !degenerate {
                return Err(Error::NotInSubSemiring("constant finite-set contact maps"));
            }
            if min.as_ref().is_none_or(|m| iv.lo.a < *m) {
                min = Some(iv.lo.a.clone());
            }
        }
        Ok(match min {
            Some(m) => Scalar::Finite(m),
            None => Scalar::PosInf,
        })
    }

    /// True when every value is a finite set of points (each parametric
    /// interval degenerate).
    fn is_point_valued(&self) -> bool {
        self.values.iter().flatten().all(|iv| {
            matches!(&iv.hi, UpperEnd::Fin(h) if *h == iv.lo)
        })
    }

    /// Per-region extremes of a degenerate point's position, respecting
    /// unbounded regions (where only constant points stay bounded).
    fn point_range_on(&self, region: &Region, af: &Affine) -> Result<(Rat, Rat)> {
        let unbounded = region.lo.is_none() || region.hi.is_none();
        if unbounded && af.b != rat(0) {
            return Err(Error::NotInSubSemiring("bounded-delay contact maps"));
        }
        if region.is_point || af.b == rat(0) {
            let t = region.probe();
            let v = af.eval(&t);
            return Ok((v.clone(), v));
        }
        let a = af.eval(region.lo.as_ref().unwrap());
        let b = af.eval(region.hi.as_ref().unwrap());
        Ok(if a <= b { (a, b) } else { (b, a) })
    }

    /// The additive homomorphism onto delay pairs: the support of the map
    /// (closed) together with the worst delay it ever offers. Requires
    /// finite point values with a finite supremum.
    pub fn support_and_max_delay(&self) -> Result<DelayedLifetime> {
        if !self.is_point_valued() {
            return Err(Error::NotInSubSemiring("finite-point contact maps"));
        }
        let mut support: Vec<(Scalar, Scalar)> = Vec::new();
        let mut worst: Option<Rat> = None;
        for (idx, region) in self.regions().iter().enumerate() {
            let list = &self.values[idx];
            if list.is_empty() {
                continue;
            }
            let lo = region
                .lo
                .as_ref()
                .map_or(Scalar::NegInf, |v| Scalar::Finite(v.clone()));
            let hi = region
                .hi
                .as_ref()
                .map_or(Scalar::PosInf, |v| Scalar::Finite(v.clone()));
            support.push((lo, hi));
            for iv in list {
                let (vmin, vmax) = self.point_range_on(region, &iv.lo)?;
                if vmin < rat(0) {
                    return Err(Error::NotInSubSemiring("non-negative-delay contact maps"));
                }
                if worst.as_ref().is_none_or(|w| vmax > *w) {
                    worst = Some(vmax);
                }
            }
        }
        Ok(DelayedLifetime::new(
            IntervalSet::from_intervals(support),
            worst.map_or_else(Scalar::zero, Scalar::Finite),
        )
        .normalized())
    }

    /// The surjection onto arrival functions: `t -> min(value) + t`, infinite
    /// where the map is empty. Requires finite non-negative point values, a
    /// non-decreasing minimal arrival, and a support that never resumes after
    /// going empty.
    pub fn min_arrival_endo(&self) -> Result<crate::semiring::endo::MonotoneEndo> {
        use crate::semiring::endo::{MonotoneEndo, Piece};
        if !self.is_point_valued() {
            return Err(Error::NotInSubSemiring("finite-point contact maps"));
        }
        let regions = self.regions();
        let mut pieces: Vec<(Scalar, Piece)> = Vec::new();
        let mut seen_empty = false;
        for (idx, region) in regions.iter().enumerate() {
            let list = &self.values[idx];
            let start = region
                .lo
                .as_ref()
                .map_or(Scalar::NegInf, |v| Scalar::Finite(v.clone()));
            if list.is_empty() {
                seen_empty = true;
                if region.is_point {
                    // an empty point between nonempty regions breaks the rule
                    // unless everything after is empty too; handled below
                    continue;
                }
                pieces.push((start, Piece::Inf));
                continue;
            }
            if seen_empty {
                return Err(Error::NotInSubSemiring(
                    "contact maps whose support never resumes",
                ));
            }
            for iv in list {
                let (vmin, _) = self.point_range_on(region, &iv.lo)?;
                if vmin < rat(0) {
                    return Err(Error::NotInSubSemiring("non-negative-delay contact maps"));
                }
            }
            if region.is_point {
                // arrival functions are right-continuous by convention: the
                // value at a breakpoint must agree with the limit from the
                // right, else the map is outside this sub-semi-ring
                let b = region.lo.as_ref().unwrap();
                let point_min = list
                    .iter()
                    .map(|iv| iv.lo.eval(b) + b)
                    .min()
                    .expect("nonempty list");
                let right = &self.values[idx + 1];
                let right_min = right
                    .iter()
                    .map(|iv| iv.lo.eval(b) + b)
                    .min()
                    .ok_or(Error::NotInSubSemiring(
                        "right-continuous-arrival contact maps",
                    ))?;
                if point_min != right_min {
                    return Err(Error::NotInSubSemiring(
                        "right-continuous-arrival contact maps",
                    ));
                }
                continue;
            }
            // lower envelope of `value + t` over this open region: split at
            // pairwise crossings, keep the min per sub-region
            let arrivals: Vec<Affine> = list
                .iter()
                .map(|iv| Affine {
                    a: iv.lo.a.clone(),
                    b: &iv.lo.b + rat(1),
                })
                .collect();
            let mut cuts: Vec<Rat> = Vec::new();
            for i in 0..arrivals.len() {
                for j in (i + 1)..arrivals.len() {
                    if let Some(t) = arrivals[i].crossing(&arrivals[j]) {
                        if region_contains_interior(region, &t) {
                            cuts.push(t);
                        }
                    }
                }
            }
            cuts.sort();
            cuts.dedup();
            let mut edges: Vec<Option<Rat>> = vec![region.lo.clone()];
            edges.extend(cuts.into_iter().map(Some));
            edges.push(region.hi.clone());
            for k in 0..edges.len() - 1 {
                let sub = Region {
                    lo: edges[k].clone(),
                    hi: edges[k + 1].clone(),
                    is_point: false,
                };
                let probe = sub.probe();
                let best = arrivals
                    .iter()
                    .min_by(|x, y| x.eval(&probe).cmp(&y.eval(&probe)))
                    .expect("nonempty list");
                let start = edges[k]
                    .as_ref()
                    .map_or(Scalar::NegInf, |v| Scalar::Finite(v.clone()));
                pieces.push((
                    start,
                    Piece::Affine {
                        slope: best.b.clone(),
                        offset: best.a.clone(),
                    },
                ));
            }
        }
        // collapse duplicate starts introduced by skipped point regions
        pieces.dedup_by(|later, earlier| later.0 == earlier.0);
        MonotoneEndo::from_pieces(pieces)
            .map_err(|_| Error::NotInSubSemiring("monotone-arrival contact maps"))
    }
}

impl ContactMap {
    /// Builds a map that takes the given interval list on one time range and
    /// is empty elsewhere; range ends may be open or infinite.
    pub fn from_piece(
        lo: Option<Rat>,
        lo_closed: bool,
        hi: Option<Rat>,
        hi_closed: bool,
        list: Vec<ParamInterval>,
    ) -> ContactMap {
        let mut breaks = Vec::new();
        if let Some(l) = &lo {
            breaks.push(l.clone());
        }
        if let Some(h) = &hi {
            if Some(h) != lo.as_ref() {
                breaks.push(h.clone());
            }
        }
        let grid = grid_regions(&breaks);
        let empty = Vec::new();
        let values = grid
            .iter()
            .map(|r| {
                let covered = if r.is_point {
                    let b = r.lo.as_ref().unwrap();
                    let lo_ok = match &lo {
                        None => true,
                        Some(l) => l < b || (l == b && lo_closed),
                    };
                    let hi_ok = match &hi {
                        None => true,
                        Some(h) => h > b || (h == b && hi_closed),
                    };
                    lo_ok && hi_ok
                } else {
                    let lo_ok = match (&lo, &r.lo) {
                        (None, _) => true,
                        (Some(_), None) => false,
                        (Some(a), Some(b)) => a <= b,
                    };
                    let hi_ok = match (&hi, &r.hi) {
                        (None, _) => true,
                        (Some(_), None) => false,
                        (Some(a), Some(b)) => a >= b,
                    };
                    lo_ok && hi_ok
                };
                if covered {
                    list.clone()
                } else {
                    empty.clone()
                }
            })
            .collect();
        ContactMap { breaks, values }.normalized()
    }
}

fn parse_rat(s: &str) -> Result<Rat> {
    match s.trim().parse::<Scalar>()? {
        Scalar::Finite(r) => Ok(r),
        other => Err(Error::ValueParse {
            kind: "rational",
            text: other.to_string(),
        }),
    }
}

/// Parses `a`, `a+b*t`, `a-b*t`, `b*t`, `t`, `-t`.
fn parse_affine(s: &str) -> Result<Affine> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || Error::ValueParse {
        kind: "affine expression",
        text: s.to_string(),
    };
    let mut a = Rat::from_integer(0);
    let mut b = Rat::from_integer(0);
    // split into signed terms
    let with_signs = compact.replace('-', "+-");
    for term in with_signs.split('+') {
        if term.is_empty() {
            continue;
        }
        if let Some(coef) = term.strip_suffix("*t") {
            b += parse_rat(coef).map_err(|_| err())?;
        } else if term == "t" {
            b += Rat::from_integer(1);
        } else if term == "-t" {
            b -= Rat::from_integer(1);
        } else {
            a += parse_rat(term).map_err(|_| err())?;
        }
    }
    Ok(Affine { a, b })
}

impl std::str::FromStr for ContactMap {
    type Err = Error;

    /// Parses the `piece <range>: {[lo, hi], ...}` text form; pieces combine
    /// by union. `empty` is the zero map.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "empty" {
            return Ok(ContactMap::zero());
        }
        let err = |text: &str| Error::ValueParse {
            kind: "contact map",
            text: text.to_string(),
        };
        let mut out = ContactMap::zero();
        for piece in s.split(';') {
            let piece = piece.trim();
            let rest = piece.strip_prefix("piece").ok_or_else(|| err(piece))?;
            let (range, braces) = rest.split_once(':').ok_or_else(|| err(piece))?;
            let range = range.trim();
            let (lo_closed, hi_closed, inner) = match (
                range.starts_with('['),
                range.starts_with('('),
                range.ends_with(']'),
                range.ends_with(')'),
            ) {
                (true, _, true, _) => (true, true, &range[1..range.len() - 1]),
                (true, _, _, true) => (true, false, &range[1..range.len() - 1]),
                (_, true, true, _) => (false, true, &range[1..range.len() - 1]),
                (_, true, _, true) => (false, false, &range[1..range.len() - 1]),
                _ => return Err(err(piece)),
            };
            let (lo_s, hi_s) = inner.split_once(',').ok_or_else(|| err(piece))?;
            let lo = match lo_s.trim() {
                "-inf" => None,
                v => Some(parse_rat(v)?),
            };
            let hi = match hi_s.trim() {
                "inf" => None,
                v => Some(parse_rat(v)?),
            };
            if let (Some(l), Some(h)) = (&lo, &hi) {
                if l > h {
                    return Err(err(piece));
                }
            }

            let braces = braces.trim();
            let body = braces
                .strip_prefix('{')
                .and_then(|x| x.strip_suffix('}'))
                .ok_or_else(|| err(piece))?;
            let mut list = Vec::new();
            let body = body.trim();
            if !body.is_empty() {
                // split "[..,..], [..,..]" on bracket boundaries
                for item in body.split(']') {
                    let item = item.trim().trim_start_matches(',').trim();
                    if item.is_empty() {
                        continue;
                    }
                    let inner = item.strip_prefix('[').ok_or_else(|| err(piece))?;
                    let (lo_e, hi_e) = inner.split_once(',').ok_or_else(|| err(piece))?;
                    let lo_af = parse_affine(lo_e)?;
                    let hi_end = match hi_e.trim() {
                        "inf" => UpperEnd::Inf,
                        v => UpperEnd::Fin(parse_affine(v)?),
                    };
                    list.push(ParamInterval {
                        lo: lo_af,
                        hi: hi_end,
                    });
                }
            }
            out = out.union(&ContactMap::from_piece(lo, lo_closed, hi, hi_closed, list));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn ivs(pairs: &[(i64, i64)]) -> IntervalSet {
        IntervalSet::from_intervals(
            pairs
                .iter()
                .map(|(a, b)| (Scalar::from_int(*a), Scalar::from_int(*b))),
        )
    }

    #[test]
    fn store_and_forward_products() {
        // A -> B -> D: window [0,1] delay 10, then window [10,11] delay 5
        let ab = ContactMap::contact_window(rat(0), rat(1), rat(10), UpperEnd::Fin(Affine::constant(rat(10))));
        let bd = ContactMap::contact_window(rat(10), rat(11), rat(5), UpperEnd::Fin(Affine::constant(rat(5))));
        let route = ab.compose(&bd).unwrap();
        assert_eq!(route.eval(&rat(0)), ivs(&[(15, 15)]));
        assert_eq!(route.eval(&Rat::new(1, 2)), ivs(&[(15, 15)]));
        assert_eq!(route.eval(&rat(1)), ivs(&[(15, 15)]));
        assert!(route.eval(&rat(2)).is_empty());

        // A -> C (-> store at C) -> D: [0,1] delay 0, storage, [5,6] delay 0
        let ac = ContactMap::contact_window(rat(0), rat(1), rat(0), UpperEnd::Fin(Affine::constant(rat(0))));
        let cc = ContactMap::storage(None);
        let cd = ContactMap::contact_window(rat(5), rat(6), rat(0), UpperEnd::Fin(Affine::constant(rat(0))));
        let route = ac.compose(&cc).unwrap().compose(&cd).unwrap();
        // t in [0,1] -> [5 - t, 6 - t]
        let v = route.eval(&Rat::new(1, 2));
        assert_eq!(
            v,
            IntervalSet::interval(Scalar::ratio(9, 2), Scalar::ratio(11, 2))
        );
        assert_eq!(route.eval(&rat(0)), ivs(&[(5, 6)]));
        assert_eq!(route.eval(&rat(1)), ivs(&[(4, 5)]));
        assert!(route.eval(&rat(3)).is_empty());
    }

    #[test]
    fn neutral_elements() {
        let ring = ContactSemiring;
        let f = ContactMap::contact_window(rat(0), rat(4), rat(2), UpperEnd::Fin(Affine::constant(rat(3))));
        assert_eq!(ring.mul(&f, &ring.one()).unwrap(), f);
        assert_eq!(ring.mul(&ring.one(), &f).unwrap(), f);
        assert_eq!(ring.add(&f, &ring.zero()), f);
        assert_eq!(ring.add(&f, &f), f);
        assert_eq!(ring.mul(&ring.zero(), &f).unwrap(), ring.zero());
        assert_eq!(ring.mul(&f, &ring.zero()).unwrap(), ring.zero());
    }

    #[test]
    fn embedding_multiplicativity_on_lifetimes() {
        let x = ivs(&[(0, 10)]);
        let y = ivs(&[(8, 14)]);
        let fx = ContactMap::from_lifetime(&x);
        let fy = ContactMap::from_lifetime(&y);
        let prod = fx.compose(&fy).unwrap();
        assert_eq!(prod, ContactMap::from_lifetime(&x.intersect(&y)));
        let sum = fx.union(&fy);
        assert_eq!(sum, ContactMap::from_lifetime(&x.union(&y)));
    }

    /// Direct evaluation of the product formula at a fixed time, used as an
    /// independent oracle for `compose`.
    fn compose_eval_oracle(f: &ContactMap, g: &ContactMap, t: &Rat) -> IntervalSet {
        let mut acc = IntervalSet::empty();
        let x_set = f.eval(t);
        for (xlo, xhi) in x_set.intervals() {
            let w_lo = t + xlo.expect_finite();
            let w_hi = match xhi {
                Scalar::PosInf => None,
                h => Some(t + h.expect_finite()),
            };
            for (gi, gr) in g.regions().iter().enumerate() {
                for giv in &g.values[gi] {
                    let u_lo = match &gr.lo {
                        Some(c) if c > &w_lo => c.clone(),
                        _ => w_lo.clone(),
                    };
                    let u_hi: Option<Rat> = match (&gr.hi, &w_hi) {
                        (Some(c), Some(h)) => Some(if c < h { c.clone() } else { h.clone() }),
                        (Some(c), None) => Some(c.clone()),
                        (None, Some(h)) => Some(h.clone()),
                        (None, None) => None,
                    };
                    if let Some(h) = &u_hi {
                        if &u_lo > h {
                            continue;
                        }
                    }
                    let sigma_r = &giv.lo.b + rat(1);
                    let lo = if sigma_r >= rat(0) {
                        giv.lo.eval(&u_lo) + &u_lo - t
                    } else {
                        let h = u_hi.clone().expect("unbounded below");
                        giv.lo.eval(&h) + &h - t
                    };
                    let hi = match &giv.hi {
                        UpperEnd::Inf => Scalar::PosInf,
                        UpperEnd::Fin(s) => {
                            let sigma = &s.b + rat(1);
                            if sigma > rat(0) {
                                match &u_hi {
                                    None => Scalar::PosInf,
                                    Some(h) => Scalar::Finite(s.eval(h) + h - t),
                                }
                            } else if sigma == rat(0) {
                                Scalar::Finite(&s.a - t)
                            } else {
                                Scalar::Finite(s.eval(&u_lo) + &u_lo - t)
                            }
                        }
                    };
                    acc = acc.union(&IntervalSet::interval(Scalar::Finite(lo), hi));
                }
            }
        }
        acc
    }

    #[test]
    fn compose_agrees_with_pointwise_oracle() {
        let ring = ContactSemiring;
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for round in 0..120 {
            let f = ring.sample(&mut rng);
            let g = ring.sample(&mut rng);
            let fg = f.compose(&g).unwrap();
            for k in -30..=30 {
                let t = Rat::new(k, 2);
                let got = fg.eval(&t);
                let want = compose_eval_oracle(&f, &g, &t);
                assert_eq!(got, want, "round {round} at t={t}: f={f:?} g={g:?}");
            }
        }
    }

    #[test]
    fn union_agrees_with_pointwise_oracle() {
        let ring = ContactSemiring;
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..120 {
            let f = ring.sample(&mut rng);
            let g = ring.sample(&mut rng);
            let sum = f.union(&g);
            for k in -30..=30 {
                let t = Rat::new(k, 2);
                assert_eq!(sum.eval(&t), f.eval(&t).union(&g.eval(&t)));
            }
        }
    }

    #[test]
    fn text_roundtrip() {
        let ring = ContactSemiring;
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..60 {
            let f = ring.sample(&mut rng);
            let text = f.to_string();
            let parsed: ContactMap = text.parse().unwrap_or_else(|e| {
                panic!("failed to parse {text:?}: {e}");
            });
            assert_eq!(parsed, f, "roundtrip failed for {text}");
        }
        assert_eq!("empty".parse::<ContactMap>().unwrap(), ContactMap::zero());
        let one: ContactMap = "piece (-inf,inf): {[0, 0]}".parse().unwrap();
        assert_eq!(one, ContactMap::one());
        let affine: ContactMap = "piece [0,1]: {[5-1*t, 6-1*t]}".parse().unwrap();
        assert_eq!(
            affine.eval(&Rat::new(1, 2)),
            IntervalSet::interval(Scalar::ratio(9, 2), Scalar::ratio(11, 2))
        );
    }

    #[test]
    fn canonical_equality_across_construction_orders() {
        let a = ContactMap::contact_window(rat(0), rat(5), rat(1), UpperEnd::Fin(Affine::constant(rat(1))));
        let b = ContactMap::contact_window(rat(3), rat(8), rat(1), UpperEnd::Fin(Affine::constant(rat(1))));
        let c = ContactMap::contact_window(rat(8), rat(9), rat(1), UpperEnd::Fin(Affine::constant(rat(1))));
        let left = a.union(&b).union(&c);
        let right = c.union(&a).union(&b);
        assert_eq!(left, right);
        // overlapping windows with one delay fuse into one big window
        let fused = ContactMap::contact_window(rat(0), rat(9), rat(1), UpperEnd::Fin(Affine::constant(rat(1))));
        assert_eq!(left, fused);
    }
}
