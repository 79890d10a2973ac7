//! Compiles trace expressions into face data, enumerates the Wick gluings
//! consistent with each ensemble, and collects the Euler-characteristic
//! expansion in `N`, `c = M/N` and canonical spectator trace monomials.

use std::collections::{BTreeMap, HashMap};

use num::{BigRational, Zero};
use thiserror::Error;

use crate::expr::{Expression, GaussKind, LetterKind, TraceMonomial};
use crate::perm::{FaceData, PermError, Premap, SignedPermutation};

/// Instance offset for the hidden rectangular factor of a Wishart letter, so
/// `W1` and an explicit `X1` never alias.
const WISHART_INSTANCE_OFFSET: u32 = 1_000_000;

/// Default per-class letter cap; (n−1)!! growth beyond this is refused.
pub const DEFAULT_MAX_CLASS_LETTERS: usize = 16;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("empty expression")]
    EmptyExpression,
    #[error("ensemble class has {count} letters, above the enumeration guard of {limit}")]
    GuardExceeded { count: usize, limit: usize },
    #[error("rectangular letter dimensions do not match at position {0}")]
    DimensionMismatch(usize),
    #[error("spectator adjacent to the row side of a rectangular letter at position {0}")]
    SpectatorOnRowSide(usize),
    #[error("vertex mixes row and column sides (positions {0:?})")]
    SideInconsistency(Vec<i64>),
    #[error("no value supplied for trace monomial {0}")]
    MissingMonomial(TraceMonomial),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// Ensemble tag of a compiled Gaussian position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ensemble {
    Ginibre,
    Goe,
    Rect,
}

/// A compiled trace expression: `γ`, the transpose signature `ε`, ensemble
/// tags per position, and spectator fragments hanging after each position.
#[derive(Clone, Debug)]
pub struct GluingSpec {
    n: usize,
    faces: FaceData,
    transposed: Vec<bool>,              // ε(k) = −1 iff transposed[k−1]
    ensemble: Vec<(Ensemble, u32)>,     // per position
    y_after: Vec<Vec<(u32, bool)>>,     // spectator fragment after position k
    constant_monomials: Vec<TraceMonomial>, // from traces without Gaussians
    classes: Vec<((Ensemble, u32), Vec<usize>)>, // positions per ensemble class
}

impl GluingSpec {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn faces(&self) -> &FaceData {
        &self.faces
    }

    /// ε as ±1.
    pub fn epsilon(&self, position: usize) -> i8 {
        if self.transposed[position - 1] {
            -1
        } else {
            1
        }
    }

    pub fn ensemble(&self, position: usize) -> (Ensemble, u32) {
        self.ensemble[position - 1]
    }

    pub fn constant_monomials(&self) -> &[TraceMonomial] {
        &self.constant_monomials
    }

    pub fn classes(&self) -> &[((Ensemble, u32), Vec<usize>)] {
        &self.classes
    }
}

/// The involution fixing ±k when ε(k)=+1 and swapping k↔−k when ε(k)=−1.
pub fn delta_epsilon(spec: &GluingSpec) -> SignedPermutation {
    let cycles: Vec<Vec<i64>> = (1..=spec.n as i64)
        .filter(|&k| spec.transposed[k as usize - 1])
        .map(|k| vec![k, -k])
        .collect();
    SignedPermutation::from_cycles(&cycles, spec.n).expect("involution is well formed")
}

/// One edge identification: positions `a < b`, glued with or without a twist.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GluingPair {
    pub a: usize,
    pub b: usize,
    pub twisted: bool,
}

/// One complete surface gluing.
#[derive(Clone, Debug)]
pub struct Gluing {
    pub pairs: Vec<GluingPair>,
    pub pi: Premap,
}

/// Matrix side a vertex lives on; `Row` vertices range over `[M]` and carry a
/// factor `c` each in the normalized expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Row,
    Column,
}

/// Boundary dimension between adjacent letters of a trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Dim {
    N,
    M,
}

/// Compiles an expression.  Wishart letters are rewritten as `XᵀX` on a
/// per-instance hidden rectangular factor; consecutive spectators merge into
/// one fragment per Gaussian position.
pub fn compile(expr: &Expression) -> Result<GluingSpec, EngineError> {
    if expr.0.is_empty() {
        return Err(EngineError::EmptyExpression);
    }
    // Rewrite each trace into (gaussian items | spectator items).
    enum Item {
        Gauss {
            ensemble: Ensemble,
            instance: u32,
            transposed: bool,
        },
        Spec(u32, bool),
    }
    let mut traces_items: Vec<Vec<Item>> = Vec::new();
    for word in &expr.0 {
        let mut items = Vec::new();
        for letter in &word.0 {
            match letter.kind {
                LetterKind::Spectator { label } => {
                    items.push(Item::Spec(label, letter.transpose))
                }
                LetterKind::Gaussian { kind, instance } => match kind {
                    GaussKind::Ginibre => items.push(Item::Gauss {
                        ensemble: Ensemble::Ginibre,
                        instance,
                        transposed: letter.transpose,
                    }),
                    GaussKind::Goe => items.push(Item::Gauss {
                        ensemble: Ensemble::Goe,
                        instance,
                        transposed: letter.transpose,
                    }),
                    GaussKind::Rect => items.push(Item::Gauss {
                        ensemble: Ensemble::Rect,
                        instance,
                        transposed: letter.transpose,
                    }),
                    GaussKind::Wishart => {
                        // W = XᵀX; Wᵀ = W, so the rewriting ignores the flag.
                        let inst = WISHART_INSTANCE_OFFSET + instance;
                        items.push(Item::Gauss {
                            ensemble: Ensemble::Rect,
                            instance: inst,
                            transposed: true,
                        });
                        items.push(Item::Gauss {
                            ensemble: Ensemble::Rect,
                            instance: inst,
                            transposed: false,
                        });
                    }
                },
            }
        }
        traces_items.push(items);
    }

    let mut transposed = Vec::new();
    let mut ensemble = Vec::new();
    let mut y_after: Vec<Vec<(u32, bool)>> = Vec::new();
    let mut constant_monomials = Vec::new();
    let mut gamma_cycles: Vec<Vec<i64>> = Vec::new();
    let mut next_pos = 1usize;

    for items in &traces_items {
        let gauss_count = items
            .iter()
            .filter(|i| matches!(i, Item::Gauss { .. }))
            .count();
        if gauss_count == 0 {
            let entries: Vec<(u32, bool)> = items
                .iter()
                .map(|i| match i {
                    Item::Spec(l, t) => (*l, *t),
                    _ => unreachable!(),
                })
                .collect();
            if !entries.is_empty() {
                constant_monomials.push(TraceMonomial::new(entries));
            }
            continue;
        }
        // Rotate so the trace starts at its first Gaussian letter.
        let first_gauss = items
            .iter()
            .position(|i| matches!(i, Item::Gauss { .. }))
            .unwrap();
        let rotated: Vec<&Item> = items[first_gauss..]
            .iter()
            .chain(items[..first_gauss].iter())
            .collect();
        let mut cycle = Vec::new();
        for item in rotated {
            match item {
                Item::Gauss {
                    ensemble: ens,
                    instance,
                    transposed: t,
                } => {
                    cycle.push(next_pos as i64);
                    transposed.push(*t);
                    ensemble.push((*ens, *instance));
                    y_after.push(Vec::new());
                    next_pos += 1;
                }
                Item::Spec(label, t) => {
                    y_after.last_mut().unwrap().push((*label, *t));
                }
            }
        }
        gamma_cycles.push(cycle);
    }

    let n = next_pos - 1;

    // Rectangular dimension consistency: walk each trace cyclically and check
    // that column and row dimensions agree at every boundary.  Spectators live
    // in N×N, so they may only touch N-sided boundaries.
    {
        let dims = |pos: usize| -> (Dim, Dim) {
            match ensemble[pos - 1].0 {
                Ensemble::Rect => {
                    if transposed[pos - 1] {
                        (Dim::N, Dim::M)
                    } else {
                        (Dim::M, Dim::N)
                    }
                }
                _ => (Dim::N, Dim::N),
            }
        };
        for cycle in &gamma_cycles {
            for (i, &pos) in cycle.iter().enumerate() {
                let pos = pos as usize;
                let next = cycle[(i + 1) % cycle.len()] as usize;
                let out = dims(pos).1;
                let into = dims(next).0;
                if !y_after[pos - 1].is_empty() {
                    if out != Dim::N || into != Dim::N {
                        return Err(EngineError::SpectatorOnRowSide(pos));
                    }
                } else if out != into {
                    return Err(EngineError::DimensionMismatch(pos));
                }
            }
        }
    }

    let gamma = SignedPermutation::from_cycles(&gamma_cycles, n).expect("positions are distinct");
    let faces = FaceData::lift_faces(&gamma)?;

    let mut class_map: BTreeMap<(Ensemble, u32), Vec<usize>> = BTreeMap::new();
    for pos in 1..=n {
        class_map.entry(ensemble[pos - 1]).or_default().push(pos);
    }
    let classes = class_map.into_iter().collect();

    Ok(GluingSpec {
        n,
        faces,
        transposed,
        ensemble,
        y_after,
        constant_monomials,
        classes,
    })
}

/// Options controlling enumeration.
#[derive(Clone, Copy, Debug)]
pub struct ExpandOptions {
    pub max_class_letters: usize,
    pub connected_only: bool,
}

impl Default for ExpandOptions {
    fn default() -> Self {
        ExpandOptions {
            max_class_letters: DEFAULT_MAX_CLASS_LETTERS,
            connected_only: false,
        }
    }
}

fn pair_cycles(a: usize, b: usize, twisted: bool) -> [Vec<i64>; 2] {
    let (a, b) = (a as i64, b as i64);
    if twisted {
        [vec![a, -b], vec![-a, b]]
    } else {
        [vec![a, b], vec![-a, -b]]
    }
}

/// Streams every model-consistent gluing, in deterministic order: matchings
/// are enumerated smallest-unmatched-first within each ensemble class (classes
/// in sorted key order), and GOE pairs branch untwisted before twisted.
pub fn for_each_gluing<F: FnMut(&Gluing)>(
    spec: &GluingSpec,
    opts: &ExpandOptions,
    mut f: F,
) -> Result<(), EngineError> {
    for (_, positions) in &spec.classes {
        if positions.len() > opts.max_class_letters {
            return Err(EngineError::GuardExceeded {
                count: positions.len(),
                limit: opts.max_class_letters,
            });
        }
        if positions.len() % 2 != 0 {
            return Ok(()); // empty stream
        }
    }

    fn matchings_of_class(positions: &[usize]) -> Vec<Vec<(usize, usize)>> {
        if positions.is_empty() {
            return vec![Vec::new()];
        }
        let first = positions[0];
        let mut out = Vec::new();
        for i in 1..positions.len() {
            let partner = positions[i];
            let rest: Vec<usize> = positions[1..]
                .iter()
                .copied()
                .filter(|&p| p != partner)
                .collect();
            for mut tail in matchings_of_class(&rest) {
                let mut m = vec![(first, partner)];
                m.append(&mut tail);
                out.push(m);
            }
        }
        out
    }

    // Cartesian product over classes of per-class matchings, then over twist
    // choices for GOE pairs.
    let per_class: Vec<(Ensemble, Vec<Vec<(usize, usize)>>)> = spec
        .classes
        .iter()
        .map(|((ens, _), positions)| (*ens, matchings_of_class(positions)))
        .collect();

    let mut indices = vec![0usize; per_class.len()];
    loop {
        // Assemble the pair skeleton for this combination of matchings.
        let mut base_pairs: Vec<(usize, usize, Option<bool>)> = Vec::new();
        for (ci, (ens, matchings)) in per_class.iter().enumerate() {
            for &(a, b) in &matchings[indices[ci]] {
                let twist = match ens {
                    Ensemble::Ginibre | Ensemble::Rect => {
                        Some(spec.epsilon(a) == spec.epsilon(b))
                    }
                    Ensemble::Goe => None, // both variants
                };
                base_pairs.push((a, b, twist));
            }
        }
        base_pairs.sort_by_key(|&(a, _, _)| a);
        let free: Vec<usize> = base_pairs
            .iter()
            .enumerate()
            .filter(|(_, p)| p.2.is_none())
            .map(|(i, _)| i)
            .collect();
        for mask in 0..(1u64 << free.len()) {
            let mut pairs = Vec::with_capacity(base_pairs.len());
            let mut cycles = Vec::with_capacity(2 * base_pairs.len());
            for (i, &(a, b, twist)) in base_pairs.iter().enumerate() {
                let twisted = match twist {
                    Some(t) => t,
                    None => {
                        let bit = free.iter().position(|&x| x == i).unwrap();
                        mask >> bit & 1 == 1
                    }
                };
                pairs.push(GluingPair { a, b, twisted });
                let [c1, c2] = pair_cycles(a, b, twisted);
                cycles.push(c1);
                cycles.push(c2);
            }
            let perm = SignedPermutation::from_cycles(&cycles, spec.n)
                .expect("pair cycles are disjoint");
            let pi = Premap::new(perm).expect("pair gluings are premaps");
            f(&Gluing { pairs, pi });
        }
        // advance the odometer
        let mut ci = 0;
        loop {
            if ci == per_class.len() {
                return Ok(());
            }
            indices[ci] += 1;
            if indices[ci] < per_class[ci].1.len() {
                break;
            }
            indices[ci] = 0;
            ci += 1;
        }
    }
}

/// Collects the gluing stream into a vector.
pub fn enumerate_gluings(
    spec: &GluingSpec,
    opts: &ExpandOptions,
) -> Result<Vec<Gluing>, EngineError> {
    let mut out = Vec::new();
    for_each_gluing(spec, opts, |g| out.push(g.clone()))?;
    Ok(out)
}

/// Reads the spectator trace monomials off the vertices of a gluing, and
/// counts the vertices on the row (`[M]`) side.
pub fn read_vertices(
    spec: &GluingSpec,
    gluing: &Gluing,
) -> Result<(Vec<TraceMonomial>, u32), EngineError> {
    let verts = spec.faces.vertex_premap(&gluing.pi)?;
    let mut monomials = Vec::new();
    let mut row_vertices = 0u32;
    for cyc in verts.half_quotient() {
        let mut entries: Vec<(u32, bool)> = Vec::new();
        let mut side: Option<Side> = None;
        for &e in &cyc {
            let k = e.unsigned_abs() as usize;
            if spec.ensemble[k - 1].0 == Ensemble::Rect {
                // Corner ±k carries the right-hand index of the k-th letter
                // as written: `[N]` for X, `[M]` for Xᵀ.  The sign only
                // distinguishes the two sheets of the double cover.
                let s = if spec.epsilon(k) == 1 {
                    Side::Column
                } else {
                    Side::Row
                };
                match side {
                    None => side = Some(s),
                    Some(prev) if prev != s => {
                        return Err(EngineError::SideInconsistency(cyc.clone()))
                    }
                    _ => {}
                }
            }
            let frag = &spec.y_after[k - 1];
            if e > 0 {
                entries.extend(frag.iter().copied());
            } else {
                entries.extend(frag.iter().rev().map(|&(l, t)| (l, !t)));
            }
        }
        if side == Some(Side::Row) {
            if !entries.is_empty() {
                return Err(EngineError::SpectatorOnRowSide(
                    cyc[0].unsigned_abs() as usize
                ));
            }
            row_vertices += 1;
        }
        let m = TraceMonomial::new(entries);
        if !m.is_identity() {
            monomials.push(m);
        }
    }
    Ok((monomials, row_vertices))
}

/// One collected summand of the expansion: `coefficient · N^{n_exponent} ·
/// c^{c_exponent} · Π tr(monomial)` under the normalized-trace convention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionTerm {
    pub coefficient: i64,
    pub n_exponent: i64,
    pub c_exponent: u32,
    pub monomials: Vec<TraceMonomial>,
}

/// Expands an expression into collected terms, sorted by descending power of
/// `N`, then ascending power of `c`, then monomials.
pub fn expand_with(
    spec: &GluingSpec,
    opts: &ExpandOptions,
) -> Result<Vec<ExpansionTerm>, EngineError> {
    let mut acc: BTreeMap<(i64, u32, Vec<TraceMonomial>), i64> = BTreeMap::new();
    let face_count = spec.faces.gamma_cycle_count() as i64;
    let spectator_traces = spec.constant_monomials.len();
    let mut err = None;
    for_each_gluing(spec, opts, |gluing| {
        if err.is_some() {
            return;
        }
        if opts.connected_only {
            let total_components =
                spec.faces.face_components(&gluing.pi).len() + spectator_traces;
            if total_components > 1 {
                return;
            }
        }
        let chi = match spec.faces.euler_characteristic(&gluing.pi) {
            Ok(v) => v,
            Err(e) => {
                err = Some(EngineError::Perm(e));
                return;
            }
        };
        let (mut monomials, row_vertices) = match read_vertices(spec, gluing) {
            Ok(v) => v,
            Err(e) => {
                err = Some(e);
                return;
            }
        };
        monomials.extend(spec.constant_monomials.iter().cloned());
        monomials.sort();
        let n_exp = chi - 2 * face_count;
        *acc.entry((n_exp, row_vertices, monomials)).or_insert(0) += 1;
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    let mut terms: Vec<ExpansionTerm> = acc
        .into_iter()
        .map(|((n_exponent, c_exponent, monomials), coefficient)| ExpansionTerm {
            coefficient,
            n_exponent,
            c_exponent,
            monomials,
        })
        .collect();
    terms.sort_by(|a, b| {
        b.n_exponent
            .cmp(&a.n_exponent)
            .then(a.c_exponent.cmp(&b.c_exponent))
            .then(a.monomials.cmp(&b.monomials))
    });
    Ok(terms)
}

pub fn expand(expr: &Expression) -> Result<Vec<ExpansionTerm>, EngineError> {
    expand_with(&compile(expr)?, &ExpandOptions::default())
}

/// Multiplies two collected term lists (product of independent expectations).
pub fn multiply_terms(a: &[ExpansionTerm], b: &[ExpansionTerm]) -> Vec<ExpansionTerm> {
    let mut acc: BTreeMap<(i64, u32, Vec<TraceMonomial>), i64> = BTreeMap::new();
    for ta in a {
        for tb in b {
            let mut monomials = ta.monomials.clone();
            monomials.extend(tb.monomials.iter().cloned());
            monomials.sort();
            *acc.entry((
                ta.n_exponent + tb.n_exponent,
                ta.c_exponent + tb.c_exponent,
                monomials,
            ))
            .or_insert(0) += ta.coefficient * tb.coefficient;
        }
    }
    collect_map(acc)
}

/// Adds `scale` times `b` into collected form together with `a`.
pub fn add_terms(a: &[ExpansionTerm], b: &[ExpansionTerm], scale: i64) -> Vec<ExpansionTerm> {
    let mut acc: BTreeMap<(i64, u32, Vec<TraceMonomial>), i64> = BTreeMap::new();
    for t in a {
        *acc.entry((t.n_exponent, t.c_exponent, t.monomials.clone()))
            .or_insert(0) += t.coefficient;
    }
    for t in b {
        *acc.entry((t.n_exponent, t.c_exponent, t.monomials.clone()))
            .or_insert(0) += scale * t.coefficient;
    }
    collect_map(acc)
}

pub(crate) fn collect_map(
    acc: BTreeMap<(i64, u32, Vec<TraceMonomial>), i64>,
) -> Vec<ExpansionTerm> {
    let mut terms: Vec<ExpansionTerm> = acc
        .into_iter()
        .filter(|(_, c)| *c != 0)
        .map(|((n_exponent, c_exponent, monomials), coefficient)| ExpansionTerm {
            coefficient,
            n_exponent,
            c_exponent,
            monomials,
        })
        .collect();
    terms.sort_by(|a, b| {
        b.n_exponent
            .cmp(&a.n_exponent)
            .then(a.c_exponent.cmp(&b.c_exponent))
            .then(a.monomials.cmp(&b.monomials))
    });
    terms
}

/// `Σ coeff · N^{n_exp} · c^{c_exp} · Π y(monomial)` in double precision.
/// The identity monomial has value 1; all others must be supplied.
pub fn evaluate(
    terms: &[ExpansionTerm],
    n: f64,
    c: f64,
    y_values: &HashMap<TraceMonomial, f64>,
) -> Result<f64, EngineError> {
    let mut total = 0.0;
    for t in terms {
        let mut v = t.coefficient as f64 * n.powi(t.n_exponent as i32) * c.powi(t.c_exponent as i32);
        for m in &t.monomials {
            if m.is_identity() {
                continue;
            }
            let y = y_values
                .get(m)
                .ok_or_else(|| EngineError::MissingMonomial(m.clone()))?;
            v *= y;
        }
        total += v;
    }
    Ok(total)
}

/// Exact-rational evaluation, used by the oracle-equivalence checks.
pub fn evaluate_exact(
    terms: &[ExpansionTerm],
    n: &BigRational,
    c: &BigRational,
    y_values: &HashMap<TraceMonomial, BigRational>,
) -> Result<BigRational, EngineError> {
    fn ipow(base: &BigRational, e: i64) -> BigRational {
        if e >= 0 {
            num::pow::pow(base.clone(), e as usize)
        } else {
            num::pow::pow(base.clone(), (-e) as usize).recip()
        }
    }
    let mut total = BigRational::zero();
    for t in terms {
        let mut v = BigRational::from_integer(t.coefficient.into())
            * ipow(n, t.n_exponent)
            * ipow(c, t.c_exponent as i64);
        for m in &t.monomials {
            if m.is_identity() {
                continue;
            }
            let y = y_values
                .get(m)
                .ok_or_else(|| EngineError::MissingMonomial(m.clone()))?;
            v *= y;
        }
        total += v;
    }
    Ok(total)
}
