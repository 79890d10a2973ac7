//! Independent verification of the symbolic expansion: an exact small-`N`
//! entry-level Wick evaluator and a seeded, counter-based Monte-Carlo
//! estimator.  Neither path touches the topological machinery.

use std::collections::HashMap;

use num::{BigInt, BigRational, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use thiserror::Error;

use crate::expr::{Expression, GaussKind, LetterKind, TraceMonomial, TraceWord};
use crate::gluing::{evaluate, EngineError, ExpansionTerm};

#[derive(Debug, Error)]
pub enum McError {
    #[error("exact Wick evaluation limited to ≤ {limit} Gaussian letters, got {got}")]
    TooManyLetters { limit: usize, got: usize },
    #[error("exact Wick evaluation limited to N, M ≤ {limit}, got {got}")]
    SizeLimit { limit: usize, got: usize },
    #[error("spectator letters are not supported by the exact Wick oracle")]
    SpectatorUnsupported,
    #[error("no matrix supplied for spectator Y{0}")]
    MissingYMatrix(u32),
    #[error("matrix dimensions do not match in trace product")]
    DimensionMismatch,
    #[error(transparent)]
    Engine(#[from] EngineError),
}

const EXACT_LETTER_LIMIT: usize = 8;
const EXACT_SIZE_LIMIT: usize = 4;

/// Dense row-major matrix of doubles.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix, McError> {
        if self.cols != other.rows {
            return Err(McError::DimensionMismatch);
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * out.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Result<f64, McError> {
        if self.rows != self.cols {
            return Err(McError::DimensionMismatch);
        }
        Ok((0..self.rows).map(|i| self.get(i, i)).sum())
    }
}

// ---------------------------------------------------------------------------
// Exact entry-level Wick evaluation
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq)]
struct Occurrence {
    kind: GaussKind, // Ginibre | Goe | Rect (Wishart rewritten)
    instance: u32,
    row: usize,
    col: usize,
}

/// Covariance numerator of two underlying Gaussian entries; the `1/N` factor
/// is accounted for globally.
fn cov_numerator(a: &Occurrence, b: &Occurrence) -> i64 {
    if a.kind != b.kind || a.instance != b.instance {
        return 0;
    }
    match a.kind {
        GaussKind::Goe => {
            let mut v = 0;
            if a.row == b.row && a.col == b.col {
                v += 1;
            }
            if a.row == b.col && a.col == b.row {
                v += 1;
            }
            v
        }
        _ => i64::from(a.row == b.row && a.col == b.col),
    }
}

fn pairing_sum(occ: &[Occurrence]) -> i64 {
    if occ.is_empty() {
        return 1;
    }
    let first = occ[0];
    let mut total = 0;
    for i in 1..occ.len() {
        let c = cov_numerator(&first, &occ[i]);
        if c == 0 {
            continue;
        }
        let rest: Vec<Occurrence> = occ[1..]
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i - 1)
            .map(|(_, o)| *o)
            .collect();
        total += c * pairing_sum(&rest);
    }
    total
}

/// Exact expectation of a product of normalized traces of Gaussian letters,
/// by direct index enumeration and pairwise Isserlis on scalar entries.
pub fn exact_isserlis(expr: &Expression, n: usize, m: usize) -> Result<BigRational, McError> {
    if n == 0 || n > EXACT_SIZE_LIMIT || m == 0 || m > EXACT_SIZE_LIMIT {
        return Err(McError::SizeLimit {
            limit: EXACT_SIZE_LIMIT,
            got: n.max(m),
        });
    }
    // Rewrite into per-trace flat letter lists, expanding Wishart letters.
    #[derive(Clone, Copy)]
    struct Flat {
        kind: GaussKind,
        instance: u32,
        transposed: bool,
    }
    let mut traces: Vec<Vec<Flat>> = Vec::new();
    for word in &expr.0 {
        let mut flat = Vec::new();
        for letter in &word.0 {
            match letter.kind {
                LetterKind::Spectator { .. } => return Err(McError::SpectatorUnsupported),
                LetterKind::Gaussian { kind, instance } => match kind {
                    GaussKind::Wishart => {
                        flat.push(Flat {
                            kind: GaussKind::Rect,
                            instance: 1_000_000 + instance,
                            transposed: true,
                        });
                        flat.push(Flat {
                            kind: GaussKind::Rect,
                            instance: 1_000_000 + instance,
                            transposed: false,
                        });
                    }
                    k => flat.push(Flat {
                        kind: k,
                        instance,
                        transposed: letter.transpose,
                    }),
                },
            }
        }
        traces.push(flat);
    }
    let total_letters: usize = traces.iter().map(|t| t.len()).sum();
    if total_letters > EXACT_LETTER_LIMIT {
        return Err(McError::TooManyLetters {
            limit: EXACT_LETTER_LIMIT,
            got: total_letters,
        });
    }

    // One summation slot per letter: the index between the previous letter and
    // this one (cyclically within each trace).  Its range is the row dimension
    // of this letter as it appears in the product.
    let mut slot_ranges: Vec<usize> = Vec::new();
    for flat in &traces {
        for l in flat {
            let rows = match (l.kind, l.transposed) {
                (GaussKind::Rect, false) => m,
                (GaussKind::Rect, true) => n,
                _ => n,
            };
            slot_ranges.push(rows);
        }
    }
    // Column dimension must close up cyclically; mismatched words are a
    // user error surfaced as DimensionMismatch.
    {
        let mut slot = 0;
        for flat in &traces {
            let base = slot;
            for (i, l) in flat.iter().enumerate() {
                let cols = match (l.kind, l.transposed) {
                    (GaussKind::Rect, false) => n,
                    (GaussKind::Rect, true) => m,
                    _ => n,
                };
                let next = if i + 1 < flat.len() { base + i + 1 } else { base };
                if slot_ranges[next] != cols {
                    return Err(McError::DimensionMismatch);
                }
                slot += 1;
            }
        }
    }

    // Early exit: odd class sizes have no pairings.
    {
        let mut class_count: HashMap<(GaussKind, u32), usize> = HashMap::new();
        for flat in &traces {
            for l in flat {
                *class_count.entry((l.kind, l.instance)).or_insert(0) += 1;
            }
        }
        if class_count.values().any(|&c| c % 2 == 1) {
            return Ok(BigRational::zero());
        }
    }

    let mut acc: i128 = 0;
    let mut indices = vec![0usize; total_letters];
    loop {
        // Build the occurrence list for this index assignment.
        let mut occ = Vec::with_capacity(total_letters);
        let mut slot = 0;
        for flat in &traces {
            let base = slot;
            for (i, l) in flat.iter().enumerate() {
                let a = indices[base + i];
                let b = indices[if i + 1 < flat.len() { base + i + 1 } else { base }];
                let (row, col) = if l.transposed { (b, a) } else { (a, b) };
                occ.push(Occurrence {
                    kind: l.kind,
                    instance: l.instance,
                    row,
                    col,
                });
                slot += 1;
            }
        }
        acc += pairing_sum(&occ) as i128;

        // odometer
        let mut s = 0;
        loop {
            if s == total_letters {
                let num = BigInt::from(acc);
                let nonempty = traces.iter().filter(|t| !t.is_empty()).count();
                let den = BigInt::from(n).pow((total_letters / 2 + nonempty) as u32);
                return Ok(BigRational::new(num, den));
            }
            indices[s] += 1;
            if indices[s] < slot_ranges[s] {
                break;
            }
            indices[s] = 0;
            s += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Seeded sampling
// ---------------------------------------------------------------------------

/// Sampling configuration.  `M = round(c·N)`.
#[derive(Clone, Debug)]
pub struct SampleConfig {
    pub n: usize,
    pub c: f64,
    pub samples: u64,
    pub seed: u64,
    pub y_matrices: HashMap<u32, Matrix>,
}

impl SampleConfig {
    pub fn new(n: usize, samples: u64, seed: u64) -> SampleConfig {
        SampleConfig {
            n,
            c: 1.0,
            samples,
            seed,
            y_matrices: HashMap::new(),
        }
    }

    pub fn m(&self) -> usize {
        (self.c * self.n as f64).round() as usize
    }
}

#[derive(Clone, Debug)]
pub struct EstimateReport {
    pub mean: f64,
    pub std_error: f64,
    pub expansion_value: f64,
    pub z_score: f64,
}

fn rng_for(seed: u64, sample_index: u64, kind: GaussKind, instance: u32) -> ChaCha8Rng {
    let tag = match kind {
        GaussKind::Ginibre => 1u64,
        GaussKind::Goe => 2,
        GaussKind::Rect => 3,
        GaussKind::Wishart => 4,
    };
    let mut bytes = [0u8; 32];
    bytes[0..8].copy_from_slice(&seed.to_le_bytes());
    bytes[8..16].copy_from_slice(&sample_index.to_le_bytes());
    bytes[16..24].copy_from_slice(&(tag | (u64::from(instance) << 8)).to_le_bytes());
    bytes[24..32].copy_from_slice(&0x9e37_79b9_7f4a_7c15u64.to_le_bytes());
    ChaCha8Rng::from_seed(bytes)
}

/// Draws one matrix of the given ensemble; randomness is a pure function of
/// `(seed, sample_index, kind, instance)`.
pub fn sample_ensemble(
    kind: GaussKind,
    instance: u32,
    config: &SampleConfig,
    sample_index: u64,
) -> Matrix {
    let n = config.n;
    let m = config.m();
    let mut rng = rng_for(config.seed, sample_index, kind, instance);
    let scale = 1.0 / (n as f64).sqrt();
    match kind {
        GaussKind::Ginibre => {
            let mut mat = Matrix::zeros(n, n);
            for v in mat.data.iter_mut() {
                let g: f64 = rng.sample(StandardNormal);
                *v = g * scale;
            }
            mat
        }
        GaussKind::Rect => {
            let mut mat = Matrix::zeros(m, n);
            for v in mat.data.iter_mut() {
                let g: f64 = rng.sample(StandardNormal);
                *v = g * scale;
            }
            mat
        }
        GaussKind::Goe => {
            let mut mat = Matrix::zeros(n, n);
            for i in 0..n {
                for j in i..n {
                    let g: f64 = rng.sample(StandardNormal);
                    let v = if i == j {
                        g * scale * std::f64::consts::SQRT_2
                    } else {
                        g * scale
                    };
                    mat.set(i, j, v);
                    mat.set(j, i, v);
                }
            }
            mat
        }
        GaussKind::Wishart => {
            // W = XᵀX on the hidden rectangular factor.
            let x = sample_ensemble(GaussKind::Rect, 1_000_000 + instance, config, sample_index);
            x.transpose().matmul(&x).expect("XᵀX is square")
        }
    }
}

fn realize_letters(
    expr: &Expression,
    config: &SampleConfig,
    sample_index: u64,
) -> HashMap<(GaussKind, u32), Matrix> {
    let mut out = HashMap::new();
    for word in &expr.0 {
        for letter in &word.0 {
            if let LetterKind::Gaussian { kind, instance } = letter.kind {
                out.entry((kind, instance))
                    .or_insert_with(|| sample_ensemble(kind, instance, config, sample_index));
            }
        }
    }
    out
}

fn trace_value(
    word: &TraceWord,
    letters: &HashMap<(GaussKind, u32), Matrix>,
    config: &SampleConfig,
) -> Result<f64, McError> {
    if word.0.is_empty() {
        return Ok(1.0);
    }
    let mut product: Option<Matrix> = None;
    for letter in &word.0 {
        let mat = match letter.kind {
            LetterKind::Gaussian { kind, instance } => {
                let m = letters
                    .get(&(kind, instance))
                    .expect("letter realized")
                    .clone();
                if letter.transpose && kind != GaussKind::Goe && kind != GaussKind::Wishart {
                    m.transpose()
                } else {
                    m
                }
            }
            LetterKind::Spectator { label } => {
                let y = config
                    .y_matrices
                    .get(&label)
                    .ok_or(McError::MissingYMatrix(label))?;
                if letter.transpose {
                    y.transpose()
                } else {
                    y.clone()
                }
            }
        };
        product = Some(match product {
            None => mat,
            Some(p) => p.matmul(&mat)?,
        });
    }
    Ok(product.unwrap().trace()? / config.n as f64)
}

fn per_sample_value(
    expr: &Expression,
    config: &SampleConfig,
    sample_index: u64,
) -> Result<f64, McError> {
    let letters = realize_letters(expr, config, sample_index);
    let mut v = 1.0;
    for word in &expr.0 {
        v *= trace_value(word, &letters, config)?;
    }
    Ok(v)
}

/// Normalized-trace values of the spectator monomials appearing in `terms`,
/// measured from the configured Y matrices.
pub fn y_values_for(
    terms: &[ExpansionTerm],
    config: &SampleConfig,
) -> Result<HashMap<TraceMonomial, f64>, McError> {
    let mut out = HashMap::new();
    for t in terms {
        for mono in &t.monomials {
            if mono.is_identity() || out.contains_key(mono) {
                continue;
            }
            let mut product: Option<Matrix> = None;
            for &(label, transpose) in mono.entries() {
                let y = config
                    .y_matrices
                    .get(&label)
                    .ok_or(McError::MissingYMatrix(label))?;
                let m = if transpose { y.transpose() } else { y.clone() };
                product = Some(match product {
                    None => m,
                    Some(p) => p.matmul(&m)?,
                });
            }
            out.insert(mono.clone(), product.unwrap().trace()? / config.n as f64);
        }
    }
    Ok(out)
}

/// Monte-Carlo estimate of `E(Π tr(...))`, compared against the symbolic
/// expansion at `(N, c)`.
pub fn estimate(expr: &Expression, config: &SampleConfig) -> Result<EstimateReport, McError> {
    let terms = crate::gluing::expand(expr)?;
    let y_values = y_values_for(&terms, config)?;
    let expansion_value = evaluate(&terms, config.n as f64, config.c, &y_values)?;

    let values: Vec<f64> = (0..config.samples)
        .into_par_iter()
        .map(|i| per_sample_value(expr, config, i))
        .collect::<Result<_, _>>()?;
    let (mean, std_error) = mean_and_se(&values);
    let z_score = if std_error > 0.0 {
        (mean - expansion_value) / std_error
    } else {
        0.0
    };
    Ok(EstimateReport {
        mean,
        std_error,
        expansion_value,
        z_score,
    })
}

/// Monte-Carlo estimate of `k₂(Tr(t1), Tr(t2))` on unnormalized traces,
/// compared against the finite-`N` connected expansion.
pub fn estimate_covariance(
    t1: &TraceWord,
    t2: &TraceWord,
    config: &SampleConfig,
) -> Result<EstimateReport, McError> {
    let expr = Expression(vec![t1.clone(), t2.clone()]);
    let conn = crate::cumulants::connected_expand(&expr)?;
    let y_values = y_values_for(&conn, config)?;
    // normalized k₂ × N² = Tr covariance
    let expansion_value = evaluate(&conn, config.n as f64, config.c, &y_values)?
        * (config.n as f64).powi(2);

    let n_f = config.n as f64;
    let pairs: Vec<(f64, f64)> = (0..config.samples)
        .into_par_iter()
        .map(|i| {
            let letters = realize_letters(&expr, config, i);
            let a = trace_value(t1, &letters, config)? * n_f;
            let b = trace_value(t2, &letters, config)? * n_f;
            Ok((a, b))
        })
        .collect::<Result<_, McError>>()?;
    let s = pairs.len() as f64;
    let mean_a: f64 = pairs.iter().map(|p| p.0).sum::<f64>() / s;
    let mean_b: f64 = pairs.iter().map(|p| p.1).sum::<f64>() / s;
    let products: Vec<f64> = pairs
        .iter()
        .map(|(a, b)| (a - mean_a) * (b - mean_b))
        .collect();
    let (raw_mean, std_error) = mean_and_se(&products);
    let mean = raw_mean * s / (s - 1.0);
    let z_score = if std_error > 0.0 {
        (mean - expansion_value) / std_error
    } else {
        0.0
    };
    Ok(EstimateReport {
        mean,
        std_error,
        expansion_value,
        z_score,
    })
}

fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let s = values.len() as f64;
    let mean = values.iter().sum::<f64>() / s;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (s - 1.0);
    (mean, (var / s).sqrt())
}
