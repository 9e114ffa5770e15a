//! Non-decreasing piecewise-affine endomorphisms of the min-plus line.
//!
//! An element maps a transmission time to an arrival time: `w(t)` is when a
//! message sent at `t` arrives. Addition is pointwise min (take the faster
//! route); multiplication is composition (chain the hops). The additive
//! neutral is the constant-infinity map, the multiplicative neutral the
//! identity.

use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::Semiring;
use crate::error::{Error, Result};
use crate::scalar::{Rat, Scalar};

/// One piece of the map: affine with non-negative slope, or infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Piece {
    Affine { slope: Rat, offset: Rat },
    Inf,
}

impl Piece {
    fn eval(&self, t: &Rat) -> Scalar {
        match self {
            Piece::Affine { slope, offset } => Scalar::Finite(offset + slope * t),
            Piece::Inf => Scalar::PosInf,
        }
    }
}

/// Piecewise-affine non-decreasing map `R ∪ {∞} -> R ∪ {∞}`, right-continuous
/// at breakpoints, diverging to infinity (the constant-infinity map is the
/// single exception and acts as the zero).
///
/// `pieces[i]` is valid on `[start_i, start_{i+1})`; the first start is
/// `-inf` and the last piece extends to `+inf`. `w(∞) = ∞` by convention.
#[derive(Clone, PartialEq, Eq)]
pub struct MonotoneEndo {
    pieces: Vec<(Scalar, Piece)>,
}

impl MonotoneEndo {
    pub fn identity() -> Self {
        MonotoneEndo {
            pieces: vec![(
                Scalar::NegInf,
                Piece::Affine {
                    slope: Rat::from_integer(1),
                    offset: Rat::from_integer(0),
                },
            )],
        }
    }

    pub fn constant_inf() -> Self {
        MonotoneEndo {
            pieces: vec![(Scalar::NegInf, Piece::Inf)],
        }
    }

    /// Fixed transmission delay: `t -> t + d`.
    pub fn delay(d: Rat) -> Self {
        MonotoneEndo {
            pieces: vec![(
                Scalar::NegInf,
                Piece::Affine {
                    slope: Rat::from_integer(1),
                    offset: d,
                },
            )],
        }
    }

    /// Validating constructor; enforces ordering, non-negative slopes,
    /// monotonicity across junctions, the infinity tail rule, and divergence.
    pub fn from_pieces(pieces: Vec<(Scalar, Piece)>) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidInput(format!("invalid monotone endo: {msg}"));
        if pieces.is_empty() {
            return Err(bad("no pieces"));
        }
        if pieces[0].0 != Scalar::NegInf {
            return Err(bad("first piece must start at -inf"));
        }
        for w in pieces.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(bad("piece starts must increase"));
            }
            if !w[1].0.is_finite() {
                return Err(bad("interior starts must be finite"));
            }
        }
        let mut seen_inf = false;
        for (i, (start, piece)) in pieces.iter().enumerate() {
            match piece {
                Piece::Inf => seen_inf = true,
                Piece::Affine { slope, offset } => {
                    if seen_inf {
                        return Err(bad("finite piece after an infinite one"));
                    }
                    if slope < &Rat::from_integer(0) {
                        return Err(bad("negative slope"));
                    }
                    // junction with the next piece must not decrease
                    if let Some((next_start, next_piece)) = pieces.get(i + 1) {
                        let end = next_start.expect_finite();
                        let sup = Scalar::Finite(offset + slope * end);
                        if next_piece.eval(end) < sup {
                            return Err(bad("value decreases at a breakpoint"));
                        }
                    } else {
                        // final piece must diverge
                        if slope == &Rat::from_integer(0) {
                            return Err(bad("final affine piece must have positive slope"));
                        }
                    }
                    let _ = start;
                }
            }
        }
        Ok(MonotoneEndo { pieces }.normalized())
    }

    fn normalized(mut self) -> Self {
        let mut out: Vec<(Scalar, Piece)> = Vec::with_capacity(self.pieces.len());
        for (start, piece) in self.pieces.drain(..) {
            match out.last() {
                Some((_, prev)) if *prev == piece => {}
                _ => out.push((start, piece)),
            }
        }
        MonotoneEndo { pieces: out }
    }

    pub fn pieces(&self) -> &[(Scalar, Piece)] {
        &self.pieces
    }

    pub fn eval(&self, t: &Scalar) -> Scalar {
        match t {
            Scalar::PosInf => Scalar::PosInf,
            Scalar::NegInf => panic!("endomorphisms are evaluated on R ∪ {{∞}}"),
            Scalar::Finite(x) => {
                let idx = self
                    .pieces
                    .partition_point(|(start, _)| start <= t)
                    .saturating_sub(1);
                self.pieces[idx].1.eval(x)
            }
        }
    }

    /// Pointwise minimum.
    pub fn min(&self, other: &MonotoneEndo) -> MonotoneEndo {
        // refine to the common breakpoint grid, plus crossings inside regions
        let mut starts: Vec<Scalar> = Vec::new();
        for (s, _) in self.pieces.iter().chain(other.pieces.iter()) {
            starts.push(s.clone());
        }
        starts.sort();
        starts.dedup();

        let mut refined: Vec<Scalar> = Vec::new();
        for (k, s) in starts.iter().enumerate() {
            refined.push(s.clone());
            let end = starts.get(k + 1).cloned().unwrap_or(Scalar::PosInf);
            let a = self.piece_at(s);
            let b = other.piece_at(s);
            if let (
                Piece::Affine {
                    slope: s1,
                    offset: o1,
                },
                Piece::Affine {
                    slope: s2,
                    offset: o2,
                },
            ) = (a, b)
            {
                if s1 != s2 {
                    let t = Scalar::Finite((o2 - o1) / (s1 - s2));
                    if &t > s && t < end {
                        refined.push(t);
                    }
                }
            }
        }
        refined.sort();
        refined.dedup();

        let pieces = refined
            .iter()
            .enumerate()
            .map(|(i, s)| {
                // pieces cannot cross inside a refined region, so comparing at
                // an interior probe point decides the min region-wide
                let probe = region_probe(s, refined.get(i + 1));
                let pa = self.piece_at(&probe);
                let pb = other.piece_at(&probe);
                let min_piece = match (pa, pb) {
                    (Piece::Inf, p) | (p, Piece::Inf) => p.clone(),
                    _ => {
                        if self.eval(&probe) <= other.eval(&probe) {
                            pa.clone()
                        } else {
                            pb.clone()
                        }
                    }
                };
                (s.clone(), min_piece)
            })
            .collect();
        MonotoneEndo { pieces }.normalized()
    }

    /// Functional composition `self ∘ other`: `t -> self(other(t))`.
    pub fn compose(&self, other: &MonotoneEndo) -> MonotoneEndo {
        let mut pieces: Vec<(Scalar, Piece)> = Vec::new();
        for (k, (start, vp)) in other.pieces.iter().enumerate() {
            let end = other
                .pieces
                .get(k + 1)
                .map(|(s, _)| s.clone())
                .unwrap_or(Scalar::PosInf);
            match vp {
                Piece::Inf => pieces.push((start.clone(), Piece::Inf)),
                Piece::Affine { slope: b, offset: a } => {
                    if b == &Rat::from_integer(0) {
                        let val = self.eval(&Scalar::Finite(a.clone()));
                        let piece = match val {
                            Scalar::PosInf => Piece::Inf,
                            Scalar::Finite(v) => Piece::Affine {
                                slope: Rat::from_integer(0),
                                offset: v,
                            },
                            Scalar::NegInf => unreachable!(),
                        };
                        pieces.push((start.clone(), piece));
                        continue;
                    }
                    // split [start, end) at preimages of self's breakpoints
                    let mut cuts: Vec<Scalar> = vec![start.clone()];
                    for (x, _) in self.pieces.iter().skip(1) {
                        let t = Scalar::Finite((x.expect_finite() - a) / b);
                        if t > *start && t < end {
                            cuts.push(t);
                        }
                    }
                    cuts.sort();
                    cuts.dedup();
                    for cut in cuts {
                        let wp = match &cut {
                            // as t -> -inf the image a + b t lies in the leftmost piece
                            Scalar::NegInf => &self.pieces[0].1,
                            c => self.piece_at(&Scalar::Finite(a + b * c.expect_finite())),
                        };
                        let piece = match wp {
                            Piece::Inf => Piece::Inf,
                            Piece::Affine { slope: c, offset: d } => Piece::Affine {
                                slope: c * b,
                                offset: d + c * a,
                            },
                        };
                        pieces.push((cut, piece));
                    }
                }
            }
        }
        MonotoneEndo { pieces }.normalized()
    }

    fn piece_at(&self, t: &Scalar) -> &Piece {
        match t {
            Scalar::NegInf => &self.pieces[0].1,
            _ => {
                let idx = self
                    .pieces
                    .partition_point(|(start, _)| start <= t)
                    .saturating_sub(1);
                &self.pieces[idx].1
            }
        }
    }

    /// Structural validity check used by property tests.
    pub fn is_valid(&self) -> bool {
        MonotoneEndo::from_pieces(self.pieces.clone())
            .map(|normalized| normalized == *self)
            .unwrap_or(false)
    }
}

/// A finite sample point strictly inside the region `[s, next)`.
fn region_probe(s: &Scalar, next: Option<&Scalar>) -> Scalar {
    match (s, next) {
        (Scalar::NegInf, None) => Scalar::zero(),
        (Scalar::NegInf, Some(n)) => n.sub(&Scalar::from_int(1)),
        (s, None) => s.add(&Scalar::from_int(1)),
        (s, Some(n)) => s.add(n).half(),
    }
}

impl fmt::Debug for MonotoneEndo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (start, piece)) in self.pieces.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            match piece {
                Piece::Inf => write!(f, "[{start},..) -> inf")?,
                Piece::Affine { slope, offset } => {
                    write!(f, "[{start},..) -> {offset} + {slope}*t")?
                }
            }
        }
        Ok(())
    }
}

/// Spec object for the arrival-function semi-ring.
#[derive(Debug, Clone, Copy, Default)]
pub struct EndoSemiring;

impl Semiring for EndoSemiring {
    type Elem = MonotoneEndo;

    fn zero(&self) -> MonotoneEndo {
        MonotoneEndo::constant_inf()
    }

    fn one(&self) -> MonotoneEndo {
        MonotoneEndo::identity()
    }

    fn add(&self, a: &MonotoneEndo, b: &MonotoneEndo) -> MonotoneEndo {
        a.min(b)
    }

    fn mul(&self, a: &MonotoneEndo, b: &MonotoneEndo) -> Result<MonotoneEndo> {
        Ok(a.compose(b))
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> MonotoneEndo {
        if rng.gen_ratio(1, 16) {
            return MonotoneEndo::constant_inf();
        }
        let k = rng.gen_range(0..=2usize);
        let mut starts: Vec<i64> = (0..k).map(|_| rng.gen_range(-20..=20)).collect();
        starts.sort();
        starts.dedup();

        let mut pieces: Vec<(Scalar, Piece)> = Vec::new();
        let mut prev_sup: Option<Rat> = None;
        let total = starts.len() + 1;
        for (i, start) in std::iter::once(Scalar::NegInf)
            .chain(starts.iter().map(|s| Scalar::from_int(*s)))
            .enumerate()
        {
            let last = i + 1 == total;
            if last && rng.gen_ratio(1, 8) && i > 0 {
                pieces.push((start, Piece::Inf));
                break;
            }
            let slope = if last {
                Rat::from_integer(rng.gen_range(1..=3))
            } else {
                Rat::from_integer(rng.gen_range(0..=3))
            };
            let offset = match (&start, &prev_sup) {
                (Scalar::NegInf, _) => Rat::from_integer(rng.gen_range(-10..=10)),
                (s, Some(sup)) => {
                    // jump up by a non-negative amount at the junction
                    let jump = Rat::from_integer(rng.gen_range(0..=5));
                    sup + jump - slope * s.expect_finite()
                }
                _ => unreachable!(),
            };
            if let Some(next) = starts.get(i) {
                prev_sup = Some(offset + slope * Rat::from_integer(*next as i128));
            }
            pieces.push((start, Piece::Affine { slope, offset }));
        }
        MonotoneEndo::from_pieces(pieces).expect("sampler produced an invalid endo")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_then_shift(threshold: i64, shift: i64) -> MonotoneEndo {
        // t -> max(t, threshold) + shift
        MonotoneEndo::from_pieces(vec![
            (
                Scalar::NegInf,
                Piece::Affine {
                    slope: Rat::from_integer(0),
                    offset: Rat::from_integer((threshold + shift) as i128),
                },
            ),
            (
                Scalar::from_int(threshold),
                Piece::Affine {
                    slope: Rat::from_integer(1),
                    offset: Rat::from_integer(shift as i128),
                },
            ),
        ])
        .unwrap()
    }

    #[test]
    fn neutral_elements() {
        let ring = EndoSemiring;
        let w = max_then_shift(10, 2);
        assert_eq!(ring.mul(&ring.one(), &w).unwrap(), w);
        assert_eq!(ring.mul(&w, &ring.one()).unwrap(), w);
        assert_eq!(w.min(&MonotoneEndo::constant_inf()), w);
    }

    #[test]
    fn affine_composition_example() {
        // w(t) = t + 5 composed after v(t) = max(t,10) + 2
        let w = MonotoneEndo::delay(Rat::from_integer(5));
        let v = max_then_shift(10, 2);
        let wv = w.compose(&v);
        assert_eq!(wv, max_then_shift(10, 7));
    }

    #[test]
    fn eval_against_pieces() {
        let w = max_then_shift(10, 2);
        assert_eq!(w.eval(&Scalar::from_int(0)), Scalar::from_int(12));
        assert_eq!(w.eval(&Scalar::from_int(10)), Scalar::from_int(12));
        assert_eq!(w.eval(&Scalar::from_int(11)), Scalar::from_int(13));
        assert_eq!(w.eval(&Scalar::PosInf), Scalar::PosInf);
    }

    #[test]
    fn sampled_endos_stay_valid_under_ops() {
        use rand::SeedableRng;
        let ring = EndoSemiring;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let a = ring.sample(&mut rng);
            let b = ring.sample(&mut rng);
            assert!(a.is_valid(), "sample invalid: {a:?}");
            assert!(a.min(&b).is_valid(), "min invalid: {a:?}, {b:?}");
            let c = a.compose(&b);
            assert!(c.is_valid(), "compose invalid: {a:?}, {b:?} -> {c:?}");
        }
    }

    #[test]
    fn pointwise_oracle_agreement() {
        use rand::{Rng, SeedableRng};
        let ring = EndoSemiring;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let a = ring.sample(&mut rng);
            let b = ring.sample(&mut rng);
            let m = a.min(&b);
            let c = a.compose(&b);
            for _ in 0..50 {
                let t = Scalar::ratio(rng.gen_range(-200..=200), 4);
                let exp_min = a.eval(&t).min(b.eval(&t));
                assert_eq!(m.eval(&t), exp_min, "min mismatch at {t}");
                let exp_comp = a.eval(&b.eval(&t));
                assert_eq!(c.eval(&t), exp_comp, "compose mismatch at {t}");
            }
        }
    }
}
