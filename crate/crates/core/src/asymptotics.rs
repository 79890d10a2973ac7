//! Large-`N` asymptotics: leading (sphere) terms, limit moments, annular
//! noncrossing covariances, and spoke-diagram second-order contributions.

use std::collections::BTreeMap;

use crate::expr::{Expression, LetterKind, TraceWord};
use crate::gluing::{compile, expand_with, EngineError, ExpandOptions, ExpansionTerm};

/// A polynomial in the aspect ratio `c = M/N` with integer coefficients,
/// keyed by exponent.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CPoly(pub BTreeMap<u32, i64>);

impl CPoly {
    pub fn zero() -> CPoly {
        CPoly(BTreeMap::new())
    }

    pub fn constant(v: i64) -> CPoly {
        let mut m = BTreeMap::new();
        if v != 0 {
            m.insert(0, v);
        }
        CPoly(m)
    }

    pub fn add_term(&mut self, exp: u32, coeff: i64) {
        let e = self.0.entry(exp).or_insert(0);
        *e += coeff;
        if *e == 0 {
            self.0.remove(&exp);
        }
    }

    pub fn add(&self, other: &CPoly) -> CPoly {
        let mut out = self.clone();
        for (&e, &c) in &other.0 {
            out.add_term(e, c);
        }
        out
    }

    pub fn sub(&self, other: &CPoly) -> CPoly {
        let mut out = self.clone();
        for (&e, &c) in &other.0 {
            out.add_term(e, -c);
        }
        out
    }

    pub fn mul(&self, other: &CPoly) -> CPoly {
        let mut out = CPoly::zero();
        for (&e1, &c1) in &self.0 {
            for (&e2, &c2) in &other.0 {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }

    pub fn eval(&self, c: f64) -> f64 {
        self.0
            .iter()
            .map(|(&e, &coeff)| coeff as f64 * c.powi(e as i32))
            .sum()
    }

    /// Value at `c = 1`: the plain coefficient sum.
    pub fn at_one(&self) -> i64 {
        self.0.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

/// Maximal `N`-exponent and the terms attaining it.
pub fn leading(terms: &[ExpansionTerm]) -> Result<(i64, Vec<ExpansionTerm>), EngineError> {
    let max = terms
        .iter()
        .map(|t| t.n_exponent)
        .max()
        .ok_or(EngineError::EmptyExpression)?;
    Ok((
        max,
        terms
            .iter()
            .filter(|t| t.n_exponent == max)
            .cloned()
            .collect(),
    ))
}

fn assert_y_free(word: &TraceWord) {
    debug_assert!(
        word.0
            .iter()
            .all(|l| !matches!(l.kind, LetterKind::Spectator { .. })),
        "asymptotic quantities are defined for Y-free words"
    );
}

/// Limit of `E(tr(word))` as a polynomial in `c`: total coefficient of the
/// `N⁰` terms.
pub fn limit_moment_poly(word: &TraceWord) -> Result<CPoly, EngineError> {
    assert_y_free(word);
    let terms = expand_with(
        &compile(&Expression::single(word.clone()))?,
        &ExpandOptions::default(),
    )?;
    let mut poly = CPoly::zero();
    for t in terms.iter().filter(|t| t.n_exponent == 0) {
        poly.add_term(t.c_exponent, t.coefficient);
    }
    Ok(poly)
}

pub fn limit_moment(word: &TraceWord, c: f64) -> Result<f64, EngineError> {
    Ok(limit_moment_poly(word)?.eval(c))
}

/// Limit of `k₂(Tr(t1), Tr(t2))` as a polynomial in `c`: total coefficient of
/// the connected terms at `N⁻²` (normalized convention; unnormalized after
/// multiplying by `N²`, which the limit absorbs).
pub fn limit_covariance_poly(t1: &TraceWord, t2: &TraceWord) -> Result<CPoly, EngineError> {
    assert_y_free(t1);
    assert_y_free(t2);
    let expr = Expression(vec![t1.clone(), t2.clone()]);
    let terms = crate::cumulants::connected_expand(&expr)?;
    let mut poly = CPoly::zero();
    for t in terms.iter().filter(|t| t.n_exponent == -2) {
        poly.add_term(t.c_exponent, t.coefficient);
    }
    Ok(poly)
}

pub fn limit_covariance(t1: &TraceWord, t2: &TraceWord, c: f64) -> Result<f64, EngineError> {
    Ok(limit_covariance_poly(t1, t2)?.eval(c))
}

/// Counts the connected sphere gluings of a single-ensemble two-trace
/// expression, split by the relative orientation of the second face: the
/// first count keeps face 2 as drawn, the second flips it.
pub fn count_sphere_gluings(
    t1: &TraceWord,
    t2: &TraceWord,
) -> Result<(u64, u64), EngineError> {
    assert_y_free(t1);
    assert_y_free(t2);
    let expr = Expression(vec![t1.clone(), t2.clone()]);
    let spec = compile(&expr)?;
    let mut same = 0u64;
    let mut flipped = 0u64;
    let mut err = None;
    crate::gluing::for_each_gluing(&spec, &ExpandOptions::default(), |gluing| {
        if err.is_some() {
            return;
        }
        let faces = spec.faces();
        if faces.face_components(&gluing.pi).len() != 1 {
            return;
        }
        match faces.euler_characteristic(&gluing.pi) {
            Ok(2) => {}
            Ok(_) => return,
            Err(e) => {
                err = Some(EngineError::Perm(e));
                return;
            }
        }
        let analysis = faces.cover_analysis(&gluing.pi);
        // A sphere is orientable: its cover has two components, and face 2's
        // front sits either with face 1's front or with its back.
        if analysis.front_group[1] == analysis.front_group[0] {
            same += 1;
        } else {
            debug_assert_eq!(analysis.front_group[1], analysis.back_group[0]);
            flipped += 1;
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok((same, flipped))
}

/// The two circles of a second-order (fluctuation) problem: `s` centred terms
/// on each, cyclically alternating.
#[derive(Clone, Debug)]
pub struct SpokeProblem {
    pub a_words: Vec<TraceWord>,
    pub b_words: Vec<TraceWord>,
}

/// Contribution of one spoke: `lim E(tr(a·b)) − lim E(tr(a))·lim E(tr(b))`.
pub fn spoke_factor_poly(a: &TraceWord, b: &TraceWord) -> Result<CPoly, EngineError> {
    let joined = TraceWord::concat(&[a, b]);
    let m_ab = limit_moment_poly(&joined)?;
    let m_a = limit_moment_poly(a)?;
    let m_b = limit_moment_poly(b)?;
    Ok(m_ab.sub(&m_a.mul(&m_b)))
}

/// Sum over the `2s` spoke diagrams of the product of per-spoke factors.
/// Straight alignments pair `A_k` with `B_{l−k}`; reversed alignments pair
/// `A_k` with `B_{l+k}ᵀ` (word reversed, transposes toggled).  Unequal spoke
/// counts vanish at this order.
pub fn spoke_covariance_poly(p: &SpokeProblem) -> Result<CPoly, EngineError> {
    let s = p.a_words.len();
    if s == 0 || s != p.b_words.len() {
        return Ok(CPoly::zero());
    }
    for w in p.a_words.iter().chain(p.b_words.iter()) {
        assert_y_free(w);
    }
    let mut total = CPoly::zero();
    for offset in 0..s {
        // straight: A_k ↔ B_{(offset − k) mod s}
        let mut product = CPoly::constant(1);
        for k in 0..s {
            let b = &p.b_words[(offset + s - k) % s];
            let f = spoke_factor_poly(&p.a_words[k], b)?;
            if f.is_zero() {
                product = CPoly::zero();
                break;
            }
            product = product.mul(&f);
        }
        total = total.add(&product);
        // reversed: A_k ↔ B_{(offset + k) mod s}ᵀ
        let mut product = CPoly::constant(1);
        for k in 0..s {
            let b = p.b_words[(offset + k) % s].reversed_transposed();
            let f = spoke_factor_poly(&p.a_words[k], &b)?;
            if f.is_zero() {
                product = CPoly::zero();
                break;
            }
            product = product.mul(&f);
        }
        total = total.add(&product);
    }
    Ok(total)
}

pub fn spoke_covariance(p: &SpokeProblem, c: f64) -> Result<f64, EngineError> {
    Ok(spoke_covariance_poly(p)?.eval(c))
}
