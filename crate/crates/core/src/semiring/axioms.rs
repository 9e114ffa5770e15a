//! Randomized semi-ring axiom suite.
//!
//! Every identity required of a semi-ring is checked on random triples; a
//! violation is reported with the witness that produced it. This is the
//! test harness behind the `check-axioms` CLI subcommand and the regression
//! test for the delay semi-ring quotient.

use rand_chacha::ChaCha8Rng;

use super::Semiring;
use crate::error::Result;

#[derive(Debug, Clone)]
pub struct AxiomViolation {
    pub law: &'static str,
    pub witness: String,
}

#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub trials: usize,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

const LAWS: &[&str] = &[
    "add-associative",
    "add-commutative",
    "add-identity-left",
    "add-identity-right",
    "mul-associative",
    "mul-identity-left",
    "mul-identity-right",
    "distributive-left",
    "distributive-right",
    "annihilation-left",
    "annihilation-right",
];

/// Runs `trials` random triples through all semi-ring identities.
///
/// At most one witness per law is kept (the first found).
pub fn axioms_check<S: Semiring>(
    ring: &S,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<AxiomReport> {
    let mut violations: Vec<AxiomViolation> = Vec::new();
    let mut seen = [false; 11];
    let zero = ring.zero();
    let one = ring.one();

    let record = |idx: usize,
                      seen: &mut [bool; 11],
                      violations: &mut Vec<AxiomViolation>,
                      witness: String| {
        if !seen[idx] {
            seen[idx] = true;
            violations.push(AxiomViolation {
                law: LAWS[idx],
                witness,
            });
        }
    };

    for _ in 0..trials {
        let a = ring.sample(rng);
        let b = ring.sample(rng);
        let c = ring.sample(rng);

        let ab = ring.add(&a, &b);
        if !ring.eq(&ring.add(&ab, &c), &ring.add(&a, &ring.add(&b, &c))) {
            record(0, &mut seen, &mut violations, format!("{a:?}, {b:?}, {c:?}"));
        }
        if !ring.eq(&ab, &ring.add(&b, &a)) {
            record(1, &mut seen, &mut violations, format!("{a:?}, {b:?}"));
        }
        if !ring.eq(&ring.add(&zero, &a), &a) {
            record(2, &mut seen, &mut violations, format!("{a:?}"));
        }
        if !ring.eq(&ring.add(&a, &zero), &a) {
            record(3, &mut seen, &mut violations, format!("{a:?}"));
        }

        let bc = ring.mul(&b, &c)?;
        let ab_m = ring.mul(&a, &b)?;
        if !ring.eq(&ring.mul(&ab_m, &c)?, &ring.mul(&a, &bc)?) {
            record(4, &mut seen, &mut violations, format!("{a:?}, {b:?}, {c:?}"));
        }
        if !ring.eq(&ring.mul(&one, &a)?, &a) {
            record(5, &mut seen, &mut violations, format!("{a:?}"));
        }
        if !ring.eq(&ring.mul(&a, &one)?, &a) {
            record(6, &mut seen, &mut violations, format!("{a:?}"));
        }

        let b_plus_c = ring.add(&b, &c);
        let lhs = ring.mul(&a, &b_plus_c)?;
        let rhs = ring.add(&ring.mul(&a, &b)?, &ring.mul(&a, &c)?);
        if !ring.eq(&lhs, &rhs) {
            record(7, &mut seen, &mut violations, format!("{a:?}, {b:?}, {c:?}"));
        }
        let lhs = ring.mul(&ring.add(&a, &b), &c)?;
        let rhs = ring.add(&ring.mul(&a, &c)?, &ring.mul(&b, &c)?);
        if !ring.eq(&lhs, &rhs) {
            record(8, &mut seen, &mut violations, format!("{a:?}, {b:?}, {c:?}"));
        }

        if !ring.eq(&ring.mul(&zero, &a)?, &zero) {
            record(9, &mut seen, &mut violations, format!("{a:?}"));
        }
        if !ring.eq(&ring.mul(&a, &zero)?, &zero) {
            record(10, &mut seen, &mut violations, format!("{a:?}"));
        }
    }

    Ok(AxiomReport { trials, violations })
}
