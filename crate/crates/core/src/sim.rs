//! Monte Carlo simulation of the bounded-distance decoder.
//!
//! Random numbers come from ChaCha8 keyed by the master seed. Trials are cut
//! into fixed blocks of [`BLOCK_TRIALS`]; block `b` reads stream `b` of that
//! key, so every trial sees the same numbers whichever worker runs it and
//! tallies do not depend on the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Trials per random-number stream.
pub const BLOCK_TRIALS: u64 = 4096;
/// Largest codebook the decoder will search exhaustively.
pub const MAX_CODEWORDS: usize = 1 << 20;
pub const MAX_TRIALS: u64 = 100_000_000;
/// Smallest sample count accepted by the Monte Carlo oracles.
pub const MIN_ORACLE_SAMPLES: u64 = 10_000;
/// Two-sided 99% standard normal quantile.
pub const Z_99: f64 = 2.575_829_303_548_900_4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constellation {
    /// Binary `±√E_s`, one real dimension per symbol.
    Antipodal,
    /// `M`-PSK of radius `√E_s`, two real dimensions per symbol.
    Psk,
}

impl Constellation {
    fn dims_per_symbol(self) -> usize {
        match self {
            Constellation::Antipodal => 1,
            Constellation::Psk => 2,
        }
    }
}

/// An equal-energy codebook with its symbol-level words and their real
/// coordinates, both stored flat in index order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Codebook {
    m: u32,
    n: u32,
    k: u32,
    constellation: Constellation,
    es: f64,
    symbols: Vec<u32>,
    coords: Vec<f64>,
}

fn codebook_size(m: u32, k: u32) -> Result<usize> {
    (m as usize)
        .checked_pow(k)
        .filter(|&s| s <= MAX_CODEWORDS)
        .ok_or_else(|| Error::Size(format!("M^k = {m}^{k} exceeds the {MAX_CODEWORDS}-codeword limit")))
}

fn check_constellation(m: u32, constellation: Constellation) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidConfig(format!("alphabet size M must be at least 2, got {m}")));
    }
    if constellation == Constellation::Antipodal && m != 2 {
        return Err(Error::InvalidConfig(format!("antipodal symbols need M = 2, got {m}")));
    }
    Ok(())
}

impl Codebook {
    /// Builds a codebook from explicit symbol words (`words.len() / n`
    /// codewords over the alphabet `0..M`).
    pub fn from_symbols(m: u32, n: u32, k: u32, constellation: Constellation, es: f64, words: Vec<u32>) -> Result<Self> {
        check_constellation(m, constellation)?;
        if n == 0 || words.is_empty() || words.len() % n as usize != 0 {
            return Err(Error::InvalidConfig("word list must hold a positive number of length-n words".into()));
        }
        if !(es > 0.0) || !es.is_finite() {
            return Err(Error::InvalidConfig(format!("symbol energy must be positive, got {es}")));
        }
        if let Some(&s) = words.iter().find(|&&s| s >= m) {
            return Err(Error::InvalidConfig(format!("symbol {s} outside alphabet of size {m}")));
        }
        let amp = es.sqrt();
        let coords = match constellation {
            Constellation::Antipodal => words.iter().map(|&s| if s == 0 { amp } else { -amp }).collect(),
            Constellation::Psk => words
                .iter()
                .flat_map(|&s| {
                    let (sin, cos) = (2.0 * std::f64::consts::PI * s as f64 / m as f64).sin_cos();
                    [amp * cos, amp * sin]
                })
                .collect(),
        };
        Ok(Codebook {
            m,
            n,
            k,
            constellation,
            es,
            symbols: words,
            coords,
        })
    }

    /// Two binary antipodal words at Hamming distance `d`, used to drive the
    /// confusion path: word 0 is all `+√E_s`, word 1 flips its first `d`
    /// symbols.
    pub fn planted_pair(n: u32, es: f64, d: u32) -> Result<Self> {
        if d == 0 || d > n {
            return Err(Error::InvalidConfig(format!("planted distance must lie in 1..=n, got {d}")));
        }
        let mut words = vec![0u32; 2 * n as usize];
        for s in &mut words[n as usize..n as usize + d as usize] {
            *s = 1;
        }
        Codebook::from_symbols(2, n, 1, Constellation::Antipodal, es, words)
    }

    pub fn alphabet(&self) -> u32 {
        self.m
    }

    pub fn blocklength(&self) -> u32 {
        self.n
    }

    pub fn payload(&self) -> u32 {
        self.k
    }

    pub fn constellation(&self) -> Constellation {
        self.constellation
    }

    pub fn symbol_energy(&self) -> f64 {
        self.es
    }

    /// Codeword energy `E = n·E_s`.
    pub fn energy(&self) -> f64 {
        self.n as f64 * self.es
    }

    pub fn len(&self) -> usize {
        self.symbols.len() / self.n as usize
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Real dimension of a codeword.
    pub fn dim(&self) -> usize {
        self.n as usize * self.constellation.dims_per_symbol()
    }

    pub fn word(&self, i: usize) -> &[f64] {
        let d = self.dim();
        &self.coords[i * d..(i + 1) * d]
    }

    pub fn symbols(&self, i: usize) -> &[u32] {
        let n = self.n as usize;
        &self.symbols[i * n..(i + 1) * n]
    }

    pub fn hamming(&self, i: usize, j: usize) -> u32 {
        hamming(self.symbols(i), self.symbols(j))
    }

    /// Smallest pairwise Hamming distance, by exhaustive scan.
    pub fn min_hamming_distance(&self) -> u32 {
        let len = self.len();
        (0..len)
            .into_par_iter()
            .map(|i| (i + 1..len).map(|j| self.hamming(i, j)).min().unwrap_or(u32::MAX))
            .min()
            .unwrap_or(u32::MAX)
    }
}

fn hamming(a: &[u32], b: &[u32]) -> u32 {
    a.iter().zip(b).filter(|(x, y)| x != y).count() as u32
}

/// Draws `M^k` distinct words uniformly from the symbol space `M^n`,
/// rejecting duplicates and, when `min_distance > 1`, any candidate closer
/// than `min_distance` to an accepted word. With `k = n` and no distance
/// constraint the whole space is enumerated in lexicographic order.
pub fn gen_codebook(
    m: u32,
    n: u32,
    k: u32,
    constellation: Constellation,
    es: f64,
    min_distance: u32,
    seed: u64,
) -> Result<Codebook> {
    check_constellation(m, constellation)?;
    if k < 1 || k > n {
        return Err(Error::InvalidConfig(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let size = codebook_size(m, k)?;
    let nu = n as usize;
    if k == n && min_distance <= 1 {
        let mut words = Vec::with_capacity(size * nu);
        for index in 0..size {
            let mut rest = index;
            let start = words.len();
            words.resize(start + nu, 0);
            for slot in words[start..].iter_mut().rev() {
                *slot = (rest % m as usize) as u32;
                rest /= m as usize;
            }
        }
        return Codebook::from_symbols(m, n, k, constellation, es, words);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut words: Vec<u32> = Vec::with_capacity(size * nu);
    let mut seen = std::collections::HashSet::with_capacity(size);
    let max_attempts = 1000u64 * size as u64;
    let mut attempts = 0u64;
    let mut candidate = vec![0u32; nu];
    while words.len() < size * nu {
        attempts += 1;
        if attempts > max_attempts {
            return Err(Error::Generation(format!(
                "only {} of {size} words found after {max_attempts} draws (minimum distance {min_distance})",
                words.len() / nu
            )));
        }
        for s in candidate.iter_mut() {
            *s = rng.random_range(0..m);
        }
        if seen.contains(&candidate) {
            continue;
        }
        if min_distance > 1 && words.chunks_exact(nu).any(|w| hamming(w, &candidate) < min_distance) {
            continue;
        }
        seen.insert(candidate.clone());
        words.extend_from_slice(&candidate);
    }
    Codebook::from_symbols(m, n, k, constellation, es, words)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "decoded")]
pub enum OutcomeKind {
    Correct,
    /// Decoded to this wrong codeword index.
    Confusion(usize),
    Erasure,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecodeOutcome {
    pub kind: OutcomeKind,
    /// Euclidean distance from the received vector to the nearest codeword.
    pub nearest_distance: f64,
    /// More than one codeword lies within the decision radius.
    pub overlap: bool,
}

/// Nearest codeword (lowest index on exact ties), its squared distance and
/// how many codewords lie within squared radius `r2`.
fn nearest(cb: &Codebook, y: &[f64], r2: f64) -> (usize, f64, usize) {
    let mut best = (0usize, f64::INFINITY);
    let mut inside = 0;
    for i in 0..cb.len() {
        let d2: f64 = cb.word(i).iter().zip(y).map(|(x, v)| (v - x) * (v - x)).sum();
        if d2 <= r2 {
            inside += 1;
        }
        if d2 < best.1 {
            best = (i, d2);
        }
    }
    (best.0, best.1, inside)
}

fn classify(nearest_index: usize, nearest_d2: f64, r2: f64, sent: usize) -> OutcomeKind {
    if nearest_d2 > r2 {
        OutcomeKind::Erasure
    } else if nearest_index == sent {
        OutcomeKind::Correct
    } else {
        OutcomeKind::Confusion(nearest_index)
    }
}

/// Minimum-distance decoding with erasure outside radius `R`.
pub fn decode(cb: &Codebook, y: &[f64], radius: f64, sent: usize) -> Result<DecodeOutcome> {
    if y.len() != cb.dim() {
        return Err(Error::Dimension {
            expected: cb.dim(),
            actual: y.len(),
        });
    }
    if sent >= cb.len() {
        return Err(Error::InvalidConfig(format!("sent index {sent} outside codebook of {} words", cb.len())));
    }
    let r2 = radius * radius;
    let (index, d2, inside) = nearest(cb, y, r2);
    Ok(DecodeOutcome {
        kind: classify(index, d2, r2, sent),
        nearest_distance: d2.sqrt(),
        overlap: inside >= 2,
    })
}

/// A binomial proportion with its Wilson 99% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    pub count: u64,
    pub trials: u64,
    pub rate: f64,
    pub lower: f64,
    pub upper: f64,
}

impl RateEstimate {
    pub fn wilson(count: u64, trials: u64) -> Self {
        assert!(trials > 0 && count <= trials, "need 0 <= count <= trials, trials > 0");
        let nt = trials as f64;
        let p = count as f64 / nt;
        let z2 = Z_99 * Z_99;
        let denom = 1.0 + z2 / nt;
        let centre = (p + z2 / (2.0 * nt)) / denom;
        let half = Z_99 * (p * (1.0 - p) / nt + z2 / (4.0 * nt * nt)).sqrt() / denom;
        RateEstimate {
            count,
            trials,
            rate: p,
            lower: if count == 0 { 0.0 } else { (centre - half).max(0.0) },
            upper: if count == trials { 1.0 } else { (centre + half).min(1.0) },
        }
    }

    pub fn contains(&self, p: f64) -> bool {
        self.lower <= p && p <= self.upper
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub trials: u64,
    pub n_correct: u64,
    pub n_confusion: u64,
    pub n_erasure: u64,
    pub n_overlap_events: u64,
    pub correct: RateEstimate,
    pub confusion: RateEstimate,
    pub erasure: RateEstimate,
    /// Confusions plus erasures.
    pub error: RateEstimate,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Tally {
    correct: u64,
    confusion: u64,
    erasure: u64,
    overlap: u64,
}

impl Tally {
    fn add(self, o: Tally) -> Tally {
        Tally {
            correct: self.correct + o.correct,
            confusion: self.confusion + o.confusion,
            erasure: self.erasure + o.erasure,
            overlap: self.overlap + o.overlap,
        }
    }

    fn record(&mut self, kind: OutcomeKind, overlap: bool) {
        match kind {
            OutcomeKind::Correct => self.correct += 1,
            OutcomeKind::Confusion(_) => self.confusion += 1,
            OutcomeKind::Erasure => self.erasure += 1,
        }
        if overlap {
            self.overlap += 1;
        }
    }

    fn summary(self, trials: u64, seed: u64) -> TrialSummary {
        TrialSummary {
            trials,
            n_correct: self.correct,
            n_confusion: self.confusion,
            n_erasure: self.erasure,
            n_overlap_events: self.overlap,
            correct: RateEstimate::wilson(self.correct, trials),
            confusion: RateEstimate::wilson(self.confusion, trials),
            erasure: RateEstimate::wilson(self.erasure, trials),
            error: RateEstimate::wilson(self.confusion + self.erasure, trials),
            seed,
        }
    }
}

/// Which codeword each trial transmits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Prior {
    /// Uniform over the codebook.
    Uniform,
    /// Always this index.
    Fixed(usize),
}

/// Gaussian source over a counter stream: Box–Muller pairs, the spare value
/// kept for the next call.
struct Normals {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl Normals {
    fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Normals { rng, spare: None }
    }

    fn next(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // 1 - U lies in (0, 1], keeping the log finite.
        let u1 = 1.0 - self.rng.random::<f64>();
        let u2 = self.rng.random::<f64>();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * std::f64::consts::PI * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }

    fn index(&mut self, len: usize) -> usize {
        self.spare = None;
        self.rng.random_range(0..len)
    }
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    if trials > MAX_TRIALS {
        return Err(Error::Size(format!("{trials} trials exceed the {MAX_TRIALS} limit")));
    }
    Ok(())
}

fn check_positive(function: &'static str, name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::domain(function, format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

/// Runs `trials` block-wise in parallel; `body` sees one block's trial range
/// and its generator.
fn blocks<T, F>(trials: u64, seed: u64, body: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, &mut Normals) -> T + Sync,
{
    let count = trials.div_ceil(BLOCK_TRIALS);
    (0..count)
        .into_par_iter()
        .map(|b| {
            let mut normals = Normals::new(seed, b);
            let len = BLOCK_TRIALS.min(trials - b * BLOCK_TRIALS);
            body(len, &mut normals)
        })
        .collect()
}

/// Draws the transmitted index and the received vector for one trial.
fn draw(cb: &Codebook, prior: Prior, sigma: f64, normals: &mut Normals, y: &mut [f64]) -> usize {
    let sent = match prior {
        Prior::Uniform => normals.index(cb.len()),
        Prior::Fixed(i) => i,
    };
    for (v, x) in y.iter_mut().zip(cb.word(sent)) {
        *v = x + sigma * normals.next();
    }
    sent
}

fn check_prior(cb: &Codebook, prior: Prior) -> Result<()> {
    match prior {
        Prior::Fixed(i) if i >= cb.len() => Err(Error::InvalidConfig(format!(
            "fixed index {i} outside codebook of {} words",
            cb.len()
        ))),
        _ => Ok(()),
    }
}

/// Simulates transmission of uniformly chosen codewords over AWGN with
/// per-dimension variance `σ²` and decoding with radius `R`.
pub fn run_trials(cb: &Codebook, sigma: f64, radius: f64, trials: u64, seed: u64) -> Result<TrialSummary> {
    run_trials_with(cb, sigma, radius, trials, seed, Prior::Uniform)
}

pub fn run_trials_with(
    cb: &Codebook,
    sigma: f64,
    radius: f64,
    trials: u64,
    seed: u64,
    prior: Prior,
) -> Result<TrialSummary> {
    Ok(radius_sweep_with(cb, sigma, &[radius], trials, seed, prior)?.remove(0))
}

/// Classifies the same trials (common random numbers) at several radii.
pub fn radius_sweep(cb: &Codebook, sigma: f64, radii: &[f64], trials: u64, seed: u64) -> Result<Vec<TrialSummary>> {
    radius_sweep_with(cb, sigma, radii, trials, seed, Prior::Uniform)
}

pub fn radius_sweep_with(
    cb: &Codebook,
    sigma: f64,
    radii: &[f64],
    trials: u64,
    seed: u64,
    prior: Prior,
) -> Result<Vec<TrialSummary>> {
    check_trials(trials)?;
    check_prior(cb, prior)?;
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(Error::domain("run_trials", format!("sigma must be non-negative, got {sigma}")));
    }
    if radii.is_empty() || radii.iter().any(|r| !(*r >= 0.0)) {
        return Err(Error::domain("run_trials", "radii must be a non-empty list of non-negative values"));
    }
    let r2: Vec<f64> = radii.iter().map(|r| r * r).collect();
    let per_block = blocks(trials, seed, |len, normals| {
        let mut tallies = vec![Tally::default(); r2.len()];
        let mut y = vec![0.0; cb.dim()];
        let mut dist2 = vec![0.0; cb.len()];
        for _ in 0..len {
            let sent = draw(cb, prior, sigma, normals, &mut y);
            let mut best = (0usize, f64::INFINITY);
            for (i, d) in dist2.iter_mut().enumerate() {
                *d = cb.word(i).iter().zip(&y).map(|(x, v)| (v - x) * (v - x)).sum();
                if *d < best.1 {
                    best = (i, *d);
                }
            }
            for (tally, &r2) in tallies.iter_mut().zip(&r2) {
                let inside = dist2.iter().filter(|&&d| d <= r2).count();
                tally.record(classify(best.0, best.1, r2, sent), inside >= 2);
            }
        }
        tallies
    });
    let mut totals = vec![Tally::default(); r2.len()];
    for block in per_block {
        for (t, b) in totals.iter_mut().zip(block) {
            *t = t.add(b);
        }
    }
    Ok(totals.into_iter().map(|t| t.summary(trials, seed)).collect())
}

/// Monte Carlo estimate of `P(‖w − Δ‖ ≤ R)` with `Δ = (D, 0, …, 0)`.
pub fn mc_p_pair(n: u32, sigma: f64, radius: f64, distance: f64, samples: u64, seed: u64) -> Result<RateEstimate> {
    check_oracle("mc_p_pair", n, sigma, samples)?;
    check_positive("mc_p_pair", "R", radius)?;
    check_positive("mc_p_pair", "D", distance)?;
    let r2 = radius * radius;
    let hits: u64 = blocks(samples, seed, |len, normals| {
        let mut hits = 0u64;
        for _ in 0..len {
            let first = sigma * normals.next() - distance;
            let mut acc = first * first;
            for _ in 1..n {
                let z = sigma * normals.next();
                acc += z * z;
            }
            normals.spare = None;
            if acc <= r2 {
                hits += 1;
            }
        }
        hits
    })
    .into_iter()
    .sum();
    Ok(RateEstimate::wilson(hits, samples))
}

/// Monte Carlo estimate of `P(‖w‖ ≥ R)`.
pub fn mc_radius_check(n: u32, sigma: f64, radius: f64, samples: u64, seed: u64) -> Result<RateEstimate> {
    check_oracle("mc_radius_check", n, sigma, samples)?;
    if !(radius >= 0.0) {
        return Err(Error::domain("mc_radius_check", format!("R must be non-negative, got {radius}")));
    }
    let r2 = radius * radius;
    let hits: u64 = blocks(samples, seed, |len, normals| {
        let mut hits = 0u64;
        for _ in 0..len {
            let mut acc = 0.0;
            for _ in 0..n {
                let z = sigma * normals.next();
                acc += z * z;
            }
            normals.spare = None;
            if acc >= r2 {
                hits += 1;
            }
        }
        hits
    })
    .into_iter()
    .sum();
    Ok(RateEstimate::wilson(hits, samples))
}

fn check_oracle(function: &'static str, n: u32, sigma: f64, samples: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::domain(function, "dimension must be at least 1"));
    }
    check_positive(function, "sigma", sigma)?;
    if samples < MIN_ORACLE_SAMPLES {
        return Err(Error::domain(
            function,
            format!("need at least {MIN_ORACLE_SAMPLES} samples, got {samples}"),
        ));
    }
    if samples > MAX_TRIALS {
        return Err(Error::Size(format!("{samples} samples exceed the {MAX_TRIALS} limit")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exhaustive_binary_codebook() {
        let cb = gen_codebook(2, 4, 4, Constellation::Antipodal, 1.0, 1, 0).unwrap();
        assert_eq!(cb.len(), 16);
        assert_eq!(cb.min_hamming_distance(), 1);
        assert_eq!(cb.symbols(5), &[0, 1, 0, 1]);
        assert_eq!(cb.word(15), &[-1.0, -1.0, -1.0, -1.0]);
    }

    #[test]
    fn sampled_codebook_energy_and_distinctness() {
        for (m, c) in [(2u32, Constellation::Antipodal), (4, Constellation::Psk), (8, Constellation::Psk)] {
            let cb = gen_codebook(m, 8, 3, c, 1.5, 1, 11).unwrap();
            assert_eq!(cb.len(), (m as usize).pow(3));
            assert_eq!(cb.dim(), 8 * c.dims_per_symbol());
            for i in 0..cb.len() {
                let e: f64 = cb.word(i).iter().map(|x| x * x).sum();
                assert_relative_eq!(e, 12.0, epsilon = 1e-9);
            }
            assert!(cb.min_hamming_distance() >= 1);
        }
    }

    #[test]
    fn codebook_generation_is_deterministic() {
        let a = gen_codebook(2, 16, 8, Constellation::Antipodal, 1.0, 3, 99).unwrap();
        let b = gen_codebook(2, 16, 8, Constellation::Antipodal, 1.0, 3, 99).unwrap();
        assert_eq!(a, b);
        assert!(a.min_hamming_distance() >= 3);
        let c = gen_codebook(2, 16, 8, Constellation::Antipodal, 1.0, 3, 100).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn codebook_limits() {
        assert!(matches!(
            gen_codebook(2, 30, 21, Constellation::Antipodal, 1.0, 1, 0),
            Err(Error::Size(_))
        ));
        assert!(gen_codebook(3, 4, 2, Constellation::Antipodal, 1.0, 1, 0).is_err());
        assert!(matches!(
            gen_codebook(2, 4, 4, Constellation::Antipodal, 1.0, 3, 0),
            Err(Error::Generation(_))
        ));
    }

    #[test]
    fn decode_constructed_outcomes() {
        let cb = Codebook::planted_pair(6, 1.0, 2).unwrap();
        let y = cb.word(0).to_vec();
        let out = decode(&cb, &y, 1.0, 0).unwrap();
        assert_eq!(out.kind, OutcomeKind::Correct);
        assert_eq!(out.nearest_distance, 0.0);
        let out = decode(&cb, cb.word(1), 1.0, 0).unwrap();
        assert_eq!(out.kind, OutcomeKind::Confusion(1));
        // Both words within the radius: overlap is flagged.
        let out = decode(&cb, cb.word(1), 3.0, 0).unwrap();
        assert!(out.overlap);
        let mut far = cb.word(0).to_vec();
        far[5] += 10.0;
        let out = decode(&cb, &far, 1.0, 0).unwrap();
        assert_eq!(out.kind, OutcomeKind::Erasure);
        assert!(decode(&cb, &[0.0; 5], 1.0, 0).is_err());
    }

    #[test]
    fn noiseless_and_zero_radius() {
        let cb = gen_codebook(2, 8, 4, Constellation::Antipodal, 1.0, 1, 1).unwrap();
        let s = run_trials(&cb, 0.0, 0.5, 1000, 3).unwrap();
        assert_eq!(s.n_correct, 1000);
        let s = run_trials(&cb, 0.3, 0.0, 1000, 3).unwrap();
        assert_eq!((s.n_correct, s.n_confusion, s.n_erasure), (0, 0, 1000));
        assert!(run_trials(&cb, 0.3, 1.0, 0, 3).is_err());
    }

    #[test]
    fn tallies_independent_of_thread_count() {
        let cb = gen_codebook(2, 8, 4, Constellation::Antipodal, 0.5, 1, 5).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| run_trials(&cb, 0.7, 2.0, 50_000, 17).unwrap())
        };
        let one = run(1);
        assert_eq!(one, run(4));
        assert_eq!(one.n_correct + one.n_confusion + one.n_erasure, one.trials);
    }

    #[test]
    fn wilson_interval() {
        let e = RateEstimate::wilson(0, 100);
        assert_eq!(e.lower, 0.0);
        assert!(e.upper > 0.0 && e.upper < 0.1);
        let e = RateEstimate::wilson(500, 1000);
        assert!(e.contains(0.5));
        assert_relative_eq!(e.upper - 0.5, 0.5 - e.lower, epsilon = 1e-12);
        let e = RateEstimate::wilson(1000, 1000);
        assert_eq!(e.upper, 1.0);
    }

    #[test]
    fn oracle_limits() {
        assert_eq!(mc_radius_check(4, 1.0, 0.0, 10_000, 1).unwrap().rate, 1.0);
        assert_eq!(mc_radius_check(4, 1.0, 50.0, 10_000, 1).unwrap().rate, 0.0);
        assert_eq!(mc_p_pair(4, 1.0, 1.0, 1.0 + 6.0 * 2.0 + 20.0, 10_000, 1).unwrap().rate, 0.0);
        assert_eq!(mc_p_pair(4, 1.0, 1.0 + 6.0 * 2.0 + 5.0, 1.0, 10_000, 1).unwrap().rate, 1.0);
        assert!(mc_p_pair(4, 1.0, 1.0, 1.0, 100, 1).is_err());
    }
}
