//! The path semi-ring: formal sums of walks with concatenation as product.

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::Semiring;
use crate::error::{Error, Result};

/// A finite set of walks over a fixed vertex universe `0..n`.
///
/// Each walk is a vertex list `[v0, ..., vk]`; its length is `k` (edge count).
/// Addition is set union; the product concatenates walks whose endpoints
/// match and drops the rest.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PathSum {
    pub walks: BTreeSet<Vec<u32>>,
}

impl PathSum {
    pub fn empty() -> Self {
        PathSum::default()
    }

    pub fn walk(vs: &[u32]) -> Self {
        assert!(!vs.is_empty(), "a walk has at least one vertex");
        let mut walks = BTreeSet::new();
        walks.insert(vs.to_vec());
        PathSum { walks }
    }

    pub fn is_empty(&self) -> bool {
        self.walks.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct PathSemiring {
    /// Vertex universe size; `one` is the sum of all trivial walks `[v]`.
    pub vertices: u32,
    /// Maximum walk length (edge count) a product may produce.
    pub budget: usize,
    /// Optional ambient edge set; when present, walks are validated on
    /// construction via [`PathSemiring::checked_walk`].
    pub edges: Option<BTreeSet<(u32, u32)>>,
}

impl PathSemiring {
    pub fn new(vertices: u32, budget: usize) -> Self {
        PathSemiring {
            vertices,
            budget,
            edges: None,
        }
    }

    pub fn with_graph(vertices: u32, budget: usize, edges: BTreeSet<(u32, u32)>) -> Self {
        PathSemiring {
            vertices,
            budget,
            edges: Some(edges),
        }
    }

    /// Validates a walk against the ambient graph, when one is supplied.
    pub fn checked_walk(&self, vs: &[u32]) -> Result<PathSum> {
        if vs.is_empty() || vs.iter().any(|v| *v >= self.vertices) {
            return Err(Error::InvalidInput(format!("bad walk {vs:?}")));
        }
        if let Some(edges) = &self.edges {
            for w in vs.windows(2) {
                if !edges.contains(&(w[0], w[1])) {
                    return Err(Error::InvalidInput(format!(
                        "walk {vs:?} uses missing edge ({},{})",
                        w[0], w[1]
                    )));
                }
            }
        }
        Ok(PathSum::walk(vs))
    }
}

impl Semiring for PathSemiring {
    type Elem = PathSum;

    fn zero(&self) -> PathSum {
        PathSum::empty()
    }

    fn one(&self) -> PathSum {
        PathSum {
            walks: (0..self.vertices).map(|v| vec![v]).collect(),
        }
    }

    fn add(&self, a: &PathSum, b: &PathSum) -> PathSum {
        PathSum {
            walks: a.walks.union(&b.walks).cloned().collect(),
        }
    }

    fn mul(&self, a: &PathSum, b: &PathSum) -> Result<PathSum> {
        let mut walks = BTreeSet::new();
        for ga in &a.walks {
            for gb in &b.walks {
                if ga.last() == gb.first() {
                    let len = (ga.len() - 1) + (gb.len() - 1);
                    if len > self.budget {
                        return Err(Error::WalkBudgetExceeded {
                            len,
                            budget: self.budget,
                        });
                    }
                    let mut w = ga.clone();
                    w.extend_from_slice(&gb[1..]);
                    walks.insert(w);
                }
            }
        }
        Ok(PathSum { walks })
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> PathSum {
        let count = rng.gen_range(0..=3);
        let mut walks = BTreeSet::new();
        for _ in 0..count {
            let len = rng.gen_range(0..=2usize);
            let mut w = vec![rng.gen_range(0..self.vertices)];
            for _ in 0..len {
                w.push(rng.gen_range(0..self.vertices));
            }
            walks.insert(w);
        }
        PathSum { walks }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn concatenation_matches_endpoints() {
        let ring = PathSemiring::new(4, 16);
        let xy = PathSum::walk(&[0, 1]);
        let yz = PathSum::walk(&[1, 2]);
        let zw = PathSum::walk(&[2, 3]);
        assert_eq!(ring.mul(&xy, &yz).unwrap(), PathSum::walk(&[0, 1, 2]));
        assert!(ring.mul(&xy, &zw).unwrap().is_empty());
    }

    #[test]
    fn budget_is_an_error_not_truncation() {
        let ring = PathSemiring::new(2, 2);
        let w = PathSum::walk(&[0, 1, 0]);
        let err = ring.mul(&w, &PathSum::walk(&[0, 1])).unwrap_err();
        assert!(matches!(
            err,
            Error::WalkBudgetExceeded { len: 3, budget: 2 }
        ));
    }

    #[test]
    fn graph_validation() {
        let edges: BTreeSet<_> = [(0, 1), (1, 2)].into_iter().collect();
        let ring = PathSemiring::with_graph(3, 8, edges);
        assert!(ring.checked_walk(&[0, 1, 2]).is_ok());
        assert!(ring.checked_walk(&[0, 2]).is_err());
    }
}
