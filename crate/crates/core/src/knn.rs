//! Distance-matrix construction over a corpus of barcodes and K-nearest-
//! neighbor classification with stratified train/test splits.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::barcode::{matching_distance, Barcode, Distance, MatchP};
use crate::error::{Error, Result};
use crate::gen::CorpusTvg;
use crate::zigzag::zigzag_barcode;

/// A corpus of featurized samples with a cached pairwise distance matrix.
#[derive(Debug, Clone)]
pub struct LabeledCorpus {
    pub ids: Vec<String>,
    pub labels: Vec<String>,
    pub barcodes: Vec<Barcode>,
}

impl LabeledCorpus {
    pub fn from_barcodes(ids: Vec<String>, labels: Vec<String>, barcodes: Vec<Barcode>) -> Result<Self> {
        if ids.len() != labels.len() || ids.len() != barcodes.len() {
            return Err(Error::InvalidInput("corpus fields differ in length".to_string()));
        }
        Ok(LabeledCorpus { ids, labels, barcodes })
    }

    /// Featurizes TVGs by their degree-k zigzag barcode (parallel across
    /// samples).
    pub fn from_tvgs(samples: &[CorpusTvg], degree: usize) -> Result<Self> {
        let barcodes: Vec<Barcode> = samples
            .par_iter()
            .map(|s| zigzag_barcode(&s.matrix, degree))
            .collect::<Result<_>>()?;
        Ok(LabeledCorpus {
            ids: samples.iter().map(|s| s.id.clone()).collect(),
            labels: samples.iter().map(|s| s.label.clone()).collect(),
            barcodes,
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Pairwise matching distances: symmetric with a zero diagonal; the
    /// upper triangle is computed in parallel and mirrored.
    pub fn distance_matrix(&self, p: MatchP) -> DistanceMatrix {
        let n = self.len();
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .collect();
        let computed: Vec<Distance> = pairs
            .par_iter()
            .map(|&(i, j)| matching_distance(&self.barcodes[i], &self.barcodes[j], p))
            .collect();
        let mut entries = vec![Distance::zero(); n * n];
        for (&(i, j), d) in pairs.iter().zip(computed.into_iter()) {
            entries[i * n + j] = d.clone();
            entries[j * n + i] = d;
        }
        DistanceMatrix { n, entries }
    }
}

/// Symmetric distance matrix with zero diagonal.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<Distance>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Distance {
        &self.entries[i * self.n + j]
    }
}

/// Majority vote among the k nearest training samples.
///
/// Distance ties at the k-th neighbor include all tied samples; vote ties
/// break by smaller mean distance, then lexicographically by label.
pub fn knn_classify(
    dm: &DistanceMatrix,
    labels: &[String],
    train: &[usize],
    test: &[usize],
    k: usize,
) -> Result<(Vec<String>, f64)> {
    if train.is_empty() || test.is_empty() {
        return Err(Error::InvalidInput("empty train or test set".to_string()));
    }
    if k == 0 || k > train.len() {
        return Err(Error::InvalidInput(format!(
            "k = {k} outside 1..={}",
            train.len()
        )));
    }
    let mut predictions = Vec::with_capacity(test.len());
    let mut correct = 0usize;
    for &t in test {
        // distances to all training points, sorted ascending (stable on
        // index for determinism)
        let mut neighbors: Vec<(usize, &Distance)> =
            train.iter().map(|&s| (s, dm.get(t, s))).collect();
        neighbors.sort_by(|a, b| a.1.total_cmp(b.1).then(a.0.cmp(&b.0)));
        // include everything tied with the k-th smallest distance
        let cutoff = neighbors[k - 1].1.clone();
        let included: Vec<(usize, &Distance)> = neighbors
            .into_iter()
            .filter(|(_, d)| d.total_cmp(&cutoff) != std::cmp::Ordering::Greater)
            .collect();

        // votes and mean distances per label
        let mut tally: Vec<(String, usize, f64)> = Vec::new();
        for (s, d) in &included {
            let label = &labels[*s];
            match tally.iter_mut().find(|(l, _, _)| l == label) {
                Some((_, count, sum)) => {
                    *count += 1;
                    *sum += d.to_f64();
                }
                None => tally.push((label.clone(), 1, d.to_f64())),
            }
        }
        tally.sort_by(|a, b| {
            b.1.cmp(&a.1)
                .then_with(|| {
                    let ma = a.2 / a.1 as f64;
                    let mb = b.2 / b.1 as f64;
                    ma.total_cmp(&mb)
                })
                .then_with(|| a.0.cmp(&b.0))
        });
        let winner = tally[0].0.clone();
        if winner == labels[t] {
            correct += 1;
        }
        predictions.push(winner);
    }
    let accuracy = correct as f64 / test.len() as f64;
    Ok((predictions, accuracy))
}

/// Stratified train/test split: per class, a seeded shuffle and an 80/20-
/// style cut preserving class balance within one sample.
pub fn stratified_split(
    labels: &[String],
    train_fraction: f64,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(0.0 < train_fraction && train_fraction < 1.0) {
        return Err(Error::InvalidInput(format!(
            "train fraction {train_fraction} outside (0,1)"
        )));
    }
    let mut classes: Vec<(&String, Vec<usize>)> = Vec::new();
    for (i, l) in labels.iter().enumerate() {
        match classes.iter_mut().find(|(c, _)| *c == l) {
            Some((_, v)) => v.push(i),
            None => classes.push((l, vec![i])),
        }
    }
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (_, mut members) in classes {
        members.shuffle(rng);
        let cut = ((members.len() as f64) * train_fraction).round() as usize;
        if cut == 0 || cut == members.len() {
            return Err(Error::InvalidInput(
                "split leaves an empty train or test fold for some class".to_string(),
            ));
        }
        train.extend_from_slice(&members[..cut]);
        test.extend_from_slice(&members[cut..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

/// Accuracy-vs-k curves over repeated stratified splits; deterministic for a
/// fixed seed.
pub fn split_runner(
    dm: &DistanceMatrix,
    labels: &[String],
    train_fraction: f64,
    repeats: usize,
    k_max: usize,
    seed: u64,
) -> Result<Vec<(usize, f64)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sums = vec![0.0f64; k_max];
    let mut counts = vec![0usize; k_max];
    for _ in 0..repeats {
        let (train, test) = stratified_split(labels, train_fraction, &mut rng)?;
        for k in 1..=k_max.min(train.len()) {
            let (_, acc) = knn_classify(dm, labels, &train, &test, k)?;
            sums[k - 1] += acc;
            counts[k - 1] += 1;
        }
    }
    Ok((1..=k_max)
        .filter(|k| counts[k - 1] > 0)
        .map(|k| (k, sums[k - 1] / counts[k - 1] as f64))
        .collect())
}

/// Seeded label shuffle for permutation-null experiments.
pub fn shuffled_labels(labels: &[String], seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = labels.to_vec();
    out.shuffle(&mut rng);
    out
}
