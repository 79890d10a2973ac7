//! Classical cumulants of traces: set-partition Möbius inversion, the
//! connected-gluing filter, and inclusion–exclusion over centred terms.

use crate::expr::{Expression, TraceWord};
use crate::gluing::{
    add_terms, compile, expand_with, multiply_terms, EngineError, ExpandOptions, ExpansionTerm,
};

/// All set partitions of `[r]`, as block lists, via restricted growth strings.
pub fn set_partitions(r: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(rgs: &mut Vec<usize>, max: usize, r: usize, out: &mut Vec<Vec<Vec<usize>>>) {
        if rgs.len() == r {
            let blocks = max + 1;
            let mut part = vec![Vec::new(); blocks];
            for (i, &b) in rgs.iter().enumerate() {
                part[b].push(i);
            }
            out.push(part);
            return;
        }
        for b in 0..=max + 1 {
            rgs.push(b);
            rec(rgs, max.max(b), r, out);
            rgs.pop();
        }
    }
    let mut out = Vec::new();
    if r == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut rgs = vec![0usize];
    rec(&mut rgs, 0, r, &mut out);
    out
}

fn factorial(k: usize) -> i64 {
    (1..=k as i64).product()
}

/// Expands keeping only the gluings whose faces form a single connected
/// component.
pub fn connected_expand(expr: &Expression) -> Result<Vec<ExpansionTerm>, EngineError> {
    connected_expand_with(expr, &ExpandOptions::default())
}

pub fn connected_expand_with(
    expr: &Expression,
    opts: &ExpandOptions,
) -> Result<Vec<ExpansionTerm>, EngineError> {
    let spec = compile(expr)?;
    let opts = ExpandOptions {
        connected_only: true,
        ..*opts
    };
    expand_with(&spec, &opts)
}

/// The classical cumulant `k_r` of `r` traces, by Möbius inversion over the
/// partition lattice: `k_r = Σ_P (−1)^{#P−1}(#P−1)! Π_B E(Π_{i∈B} tr_i)`.
pub fn cumulant(traces: &[TraceWord]) -> Result<Vec<ExpansionTerm>, EngineError> {
    cumulant_with(traces, &ExpandOptions::default())
}

pub fn cumulant_with(
    traces: &[TraceWord],
    opts: &ExpandOptions,
) -> Result<Vec<ExpansionTerm>, EngineError> {
    let r = traces.len();
    let mut total: Vec<ExpansionTerm> = Vec::new();
    for partition in set_partitions(r) {
        let blocks = partition.len();
        let mobius = if blocks % 2 == 1 { 1 } else { -1 } * factorial(blocks - 1);
        let mut product: Vec<ExpansionTerm> = vec![ExpansionTerm {
            coefficient: 1,
            n_exponent: 0,
            c_exponent: 0,
            monomials: vec![],
        }];
        for block in &partition {
            let expr = Expression(block.iter().map(|&i| traces[i].clone()).collect());
            let moment = expand_with(&compile(&expr)?, opts)?;
            product = multiply_terms(&product, &moment);
        }
        total = add_terms(&total, &product, mobius);
    }
    Ok(total)
}

/// Moments reconstructed from cumulants over the partition lattice:
/// `E(Π tr_i) = Σ_P Π_B k(block)`.  Used as the Möbius round-trip check.
pub fn moment_from_cumulants(traces: &[TraceWord]) -> Result<Vec<ExpansionTerm>, EngineError> {
    let r = traces.len();
    let mut total: Vec<ExpansionTerm> = Vec::new();
    for partition in set_partitions(r) {
        let mut product: Vec<ExpansionTerm> = vec![ExpansionTerm {
            coefficient: 1,
            n_exponent: 0,
            c_exponent: 0,
            monomials: vec![],
        }];
        for block in &partition {
            let words: Vec<TraceWord> = block.iter().map(|&i| traces[i].clone()).collect();
            product = multiply_terms(&product, &cumulant(&words)?);
        }
        total = add_terms(&total, &product, 1);
    }
    Ok(total)
}

/// One contiguous segment of a trace word, optionally centred.
#[derive(Clone, Debug)]
pub struct Segment {
    pub word: TraceWord,
    pub centred: bool,
}

/// An expression whose traces are partitioned into contiguous segments, some
/// of which are centred (`Å = A − E(tr(A))·I`).
#[derive(Clone, Debug, Default)]
pub struct CentredExpression {
    pub traces: Vec<Vec<Segment>>,
}

/// Cumulant of traces of products of centred terms, via inclusion–exclusion
/// over subsets `K` of the centred segments with sign `(−1)^{|K|}`.
pub fn centred_cumulant(cexpr: &CentredExpression) -> Result<Vec<ExpansionTerm>, EngineError> {
    centred_cumulant_with(cexpr, &ExpandOptions::default())
}

pub fn centred_cumulant_with(
    cexpr: &CentredExpression,
    opts: &ExpandOptions,
) -> Result<Vec<ExpansionTerm>, EngineError> {
    // Global indices of centred segments: (trace, segment).
    let mut centred: Vec<(usize, usize)> = Vec::new();
    for (t, segs) in cexpr.traces.iter().enumerate() {
        for (s, seg) in segs.iter().enumerate() {
            if seg.centred {
                centred.push((t, s));
            }
        }
    }
    let mut total: Vec<ExpansionTerm> = Vec::new();
    for mask in 0..(1u64 << centred.len()) {
        let removed: Vec<(usize, usize)> = centred
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let sign = if removed.len() % 2 == 0 { 1 } else { -1 };
        // Product of expectations of the removed terms.
        let mut factor: Vec<ExpansionTerm> = vec![ExpansionTerm {
            coefficient: 1,
            n_exponent: 0,
            c_exponent: 0,
            monomials: vec![],
        }];
        for &(t, s) in &removed {
            let expr = Expression::single(cexpr.traces[t][s].word.clone());
            let moment = expand_with(&compile(&expr)?, opts)?;
            factor = multiply_terms(&factor, &moment);
        }
        // Cumulant of the traces with the removed segments deleted.
        let words: Vec<TraceWord> = cexpr
            .traces
            .iter()
            .enumerate()
            .map(|(t, segs)| {
                let kept: Vec<&TraceWord> = segs
                    .iter()
                    .enumerate()
                    .filter(|(s, _)| !removed.contains(&(t, *s)))
                    .map(|(_, seg)| &seg.word)
                    .collect();
                TraceWord::concat(&kept)
            })
            .collect();
        let cum = cumulant_with(&words, opts)?;
        let contribution = multiply_terms(&factor, &cum);
        total = add_terms(&total, &contribution, sign);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_expression, parse_word};
    use crate::gluing::expand;

    #[test]
    fn set_partition_counts() {
        // Bell numbers
        assert_eq!(set_partitions(1).len(), 1);
        assert_eq!(set_partitions(2).len(), 2);
        assert_eq!(set_partitions(3).len(), 5);
        assert_eq!(set_partitions(4).len(), 15);
    }

    #[test]
    fn connected_single_face_equals_expand() {
        let e = parse_expression("tr(T T)").unwrap();
        assert_eq!(connected_expand(&e).unwrap(), expand(&e).unwrap());
    }

    #[test]
    fn connected_two_traces_cross_only() {
        // tr(Z Z') tr(Z Z'): 3 matchings, 2 cross ones survive.
        let e = parse_expression("tr(Z Z') tr(Z Z')").unwrap();
        let all = expand(&e).unwrap();
        let total: i64 = all.iter().map(|t| t.coefficient).sum();
        assert_eq!(total, 3);
        let conn = connected_expand(&e).unwrap();
        let total: i64 = conn.iter().map(|t| t.coefficient).sum();
        assert_eq!(total, 2);
    }

    #[test]
    fn connected_single_cross_matching() {
        let e = parse_expression("tr(Z) tr(Z)").unwrap();
        let conn = connected_expand(&e).unwrap();
        assert_eq!(conn.len(), 1);
        assert_eq!(conn[0].coefficient, 1);
    }

    #[test]
    fn k1_is_expectation() {
        let terms = cumulant(&[parse_word("T T").unwrap()]).unwrap();
        assert_eq!(
            terms,
            expand(&parse_expression("tr(T T)").unwrap()).unwrap()
        );
    }

    #[test]
    fn k2_equals_connected() {
        let pairs = [
            ("Z Z'", "Z Z'"),
            ("Z Z Z'", "Z'"),
            ("T T", "T T"),
            ("Z Z Z' Z'", "Z Z' Z Z'"),
            ("W", "W"),
        ];
        for (a, b) in pairs {
            let t1 = parse_word(a).unwrap();
            let t2 = parse_word(b).unwrap();
            let k2 = cumulant(&[t1.clone(), t2.clone()]).unwrap();
            let conn = connected_expand(&Expression(vec![t1, t2])).unwrap();
            assert_eq!(k2, conn, "k2 vs connected for ({a}, {b})");
        }
    }

    #[test]
    fn centring_kills_k1() {
        let cexpr = CentredExpression {
            traces: vec![vec![Segment {
                word: parse_word("Z Z'").unwrap(),
                centred: true,
            }]],
        };
        let terms = centred_cumulant(&cexpr).unwrap();
        assert!(terms.is_empty(), "k1 of a centred term vanishes: {terms:?}");
    }

    #[test]
    fn k2_centring_invariance() {
        let word = parse_word("T T").unwrap();
        let cexpr = CentredExpression {
            traces: vec![
                vec![Segment {
                    word: word.clone(),
                    centred: true,
                }],
                vec![Segment {
                    word: word.clone(),
                    centred: true,
                }],
            ],
        };
        let centred = centred_cumulant(&cexpr).unwrap();
        let plain = cumulant(&[word.clone(), word]).unwrap();
        assert_eq!(centred, plain);
    }

    #[test]
    fn pie_cancellation_on_self_contained_segments() {
        // tr(Å₁Å₂) with A₁=A₂=ZZ': the self-paired sphere gluing cancels
        // against E(trA₁)E(trA₂); verified against the direct combination.
        let a = parse_word("Z Z'").unwrap();
        let cexpr = CentredExpression {
            traces: vec![vec![
                Segment {
                    word: a.clone(),
                    centred: true,
                },
                Segment {
                    word: a.clone(),
                    centred: true,
                },
            ]],
        };
        let centred = centred_cumulant(&cexpr).unwrap();
        // E tr(ZZ'ZZ') − E tr(ZZ')², collected
        let full = expand(&parse_expression("tr(Z Z' Z Z')").unwrap()).unwrap();
        let ea = expand(&parse_expression("tr(Z Z')").unwrap()).unwrap();
        let expected = add_terms(&full, &multiply_terms(&ea, &ea), -1);
        assert_eq!(centred, expected);
        // The N⁰ sphere coefficient drops from 2 to 1: the gluing in which
        // each segment pairs within itself has cancelled.
        let lead: i64 = centred
            .iter()
            .filter(|t| t.n_exponent == 0)
            .map(|t| t.coefficient)
            .sum();
        assert_eq!(lead, 1);
    }

    #[test]
    fn mobius_roundtrip_small() {
        let words = vec![parse_word("T T").unwrap(), parse_word("Z Z'").unwrap()];
        let direct = expand(&Expression(words.clone())).unwrap();
        let rebuilt = moment_from_cumulants(&words).unwrap();
        assert_eq!(direct, rebuilt);
    }
}
