//! DOT serialization of a surface gluing: face and vertex cycles as nodes,
//! edge identifications as edges carrying a `twist` attribute.

use std::fmt::Write;

use crate::gluing::{EngineError, Gluing, GluingSpec};

/// Renders one gluing as an undirected DOT graph with deterministic node
/// names: faces `f0, f1, …` in trace order, vertices `v0, v1, …` in
/// half-quotient order.
pub fn export_dot(spec: &GluingSpec, gluing: &Gluing) -> Result<String, EngineError> {
    let faces = spec.faces().gamma_cycles();
    let n = spec.n();
    let mut face_of = vec![0usize; n + 1];
    for (f, cyc) in faces.iter().enumerate() {
        for &x in cyc {
            face_of[x as usize] = f;
        }
    }
    let verts = spec.faces().vertex_premap(&gluing.pi)?;
    let vert_cycles = verts.half_quotient();

    let mut out = String::new();
    writeln!(out, "graph gluing {{").unwrap();
    for (f, cyc) in faces.iter().enumerate() {
        let label: Vec<String> = cyc.iter().map(|x| x.to_string()).collect();
        writeln!(
            out,
            "  f{f} [kind=face, label=\"({})\"];",
            label.join(",")
        )
        .unwrap();
    }
    for (v, cyc) in vert_cycles.iter().enumerate() {
        let label: Vec<String> = cyc.iter().map(|x| x.to_string()).collect();
        writeln!(
            out,
            "  v{v} [kind=vertex, label=\"({})\"];",
            label.join(",")
        )
        .unwrap();
    }
    for pair in &gluing.pairs {
        writeln!(
            out,
            "  f{} -- f{} [twist={}, pair=\"({},{})\"];",
            face_of[pair.a],
            face_of[pair.b],
            pair.twisted,
            pair.a,
            pair.b
        )
        .unwrap();
    }
    writeln!(out, "}}").unwrap();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expression;
    use crate::gluing::{compile, enumerate_gluings, ExpandOptions};

    #[test]
    fn goe_untwisted_edge() {
        let spec = compile(&parse_expression("tr(T T)").unwrap()).unwrap();
        let gluings = enumerate_gluings(&spec, &ExpandOptions::default()).unwrap();
        let dot = export_dot(&spec, &gluings[0]).unwrap();
        assert!(dot.contains("graph gluing {"));
        assert!(dot.contains("twist=false"));
        assert_eq!(dot.matches(" -- ").count(), 1);
    }

    #[test]
    fn deterministic_output() {
        let spec = compile(&parse_expression("tr(Z Z' Z Z')").unwrap()).unwrap();
        let gluings = enumerate_gluings(&spec, &ExpandOptions::default()).unwrap();
        let a = export_dot(&spec, &gluings[1]).unwrap();
        let b = export_dot(&spec, &gluings[1]).unwrap();
        assert_eq!(a, b);
    }
}
