//! Exact algebra of permutations on the signed ground set `{±1, …, ±n}`.
//!
//! Surfaces are encoded here in the orientable-double-cover convention: every
//! face and every hyperedge appears twice, once per local orientation, with the
//! back copy carrying negative labels.  A permutation whose cycle set is closed
//! under the negate-and-reverse involution (and where no cycle is its own
//! mirror) is a *premap*; premaps are the carriers of face, edge and vertex
//! data for possibly nonorientable gluings.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("element {0} out of range for ground set ±[{1}]")]
    OutOfRange(i64, usize),
    #[error("element {0} appears more than once")]
    Repeated(i64),
    #[error("malformed cycle notation near `{0}`")]
    Malformed(String),
    #[error("ground-set sizes differ: {0} vs {1}")]
    GroundSetMismatch(usize, usize),
    #[error("permutation is not a premap: mirror cycle of ({0}) is missing")]
    NotMirrorClosed(i64),
    #[error("cycle containing {0} is its own mirror")]
    SelfMirrorCycle(i64),
    #[error("gamma moves negative element {0}")]
    NegativeMoved(i64),
    #[error("orientable component has odd Euler characteristic {0}")]
    OddOrientableChi(i64),
}

fn slot(x: i64, n: usize) -> usize {
    debug_assert!(x != 0 && x.unsigned_abs() as usize <= n);
    if x > 0 {
        x as usize - 1
    } else {
        n + (-x) as usize - 1
    }
}

fn unslot(i: usize, n: usize) -> i64 {
    if i < n {
        (i + 1) as i64
    } else {
        -((i - n + 1) as i64)
    }
}

/// A bijection on the signed ground set `{+1..+n, -1..-n}`.
///
/// Composition convention: `compose(p, q)` applies `q` first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    n: usize,
    map: Vec<i64>, // slot-indexed images
}

impl SignedPermutation {
    pub fn identity(n: usize) -> Self {
        let map = (0..2 * n).map(|i| unslot(i, n)).collect();
        SignedPermutation { n, map }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn apply(&self, x: i64) -> i64 {
        self.map[slot(x, self.n)]
    }

    /// Builds a permutation from a list of cycles over signed elements.
    /// Elements not mentioned are fixed points.
    pub fn from_cycles(cycles: &[Vec<i64>], n: usize) -> Result<Self, PermError> {
        let mut p = Self::identity(n);
        let mut seen = vec![false; 2 * n];
        for cyc in cycles {
            for &x in cyc {
                if x == 0 || x.unsigned_abs() as usize > n {
                    return Err(PermError::OutOfRange(x, n));
                }
                let s = slot(x, n);
                if seen[s] {
                    return Err(PermError::Repeated(x));
                }
                seen[s] = true;
            }
            for i in 0..cyc.len() {
                let from = cyc[i];
                let to = cyc[(i + 1) % cyc.len()];
                p.map[slot(from, n)] = to;
            }
        }
        Ok(p)
    }

    /// Parses cycle notation like `"(1,-7)(-1,7)"`.  Whitespace is ignored;
    /// the empty string denotes the identity.
    pub fn parse_cycles(text: &str, n: usize) -> Result<Self, PermError> {
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut cycles: Vec<Vec<i64>> = Vec::new();
        let mut rest = cleaned.as_str();
        while !rest.is_empty() {
            if !rest.starts_with('(') {
                return Err(PermError::Malformed(rest.chars().take(8).collect()));
            }
            let close = rest
                .find(')')
                .ok_or_else(|| PermError::Malformed(rest.chars().take(8).collect()))?;
            let inner = &rest[1..close];
            if !inner.is_empty() {
                let mut cyc = Vec::new();
                for tok in inner.split(',') {
                    let v: i64 = tok
                        .parse()
                        .map_err(|_| PermError::Malformed(tok.to_string()))?;
                    cyc.push(v);
                }
                cycles.push(cyc);
            }
            rest = &rest[close + 1..];
        }
        Self::from_cycles(&cycles, n)
    }

    /// `(p ∘ q)(x) = p(q(x))`.
    pub fn compose(&self, q: &SignedPermutation) -> Result<SignedPermutation, PermError> {
        if self.n != q.n {
            return Err(PermError::GroundSetMismatch(self.n, q.n));
        }
        let map = (0..2 * self.n)
            .map(|i| self.apply(q.map[i]))
            .collect();
        Ok(SignedPermutation { n: self.n, map })
    }

    pub fn inverse(&self) -> SignedPermutation {
        let mut map = vec![0i64; 2 * self.n];
        for i in 0..2 * self.n {
            map[slot(self.map[i], self.n)] = unslot(i, self.n);
        }
        SignedPermutation { n: self.n, map }
    }

    /// Cycle decomposition.  Cycles are listed starting from the first
    /// unvisited element in scan order `1..n, -1..-n`; fixed points included.
    pub fn cycles(&self) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        let mut seen = vec![false; 2 * self.n];
        for start in 0..2 * self.n {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cyc.push(unslot(cur, self.n));
                cur = slot(self.map[cur], self.n);
            }
            out.push(cyc);
        }
        out
    }

    /// Number of cycles, fixed points included.
    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    pub fn is_identity(&self) -> bool {
        (0..2 * self.n).all(|i| self.map[i] == unslot(i, self.n))
    }
}

impl fmt::Debug for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignedPermutation[{self}]")
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for cyc in self.cycles() {
            if cyc.len() == 1 {
                continue;
            }
            wrote = true;
            write!(f, "(")?;
            for (i, x) in cyc.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        if !wrote {
            // identity prints as the empty cycle product
        }
        Ok(())
    }
}

/// A signed permutation whose cycle set is mirror-closed, with no self-mirror
/// cycle.  The mirror of a cycle `(c₁,…,c_m)` is `(-c_m,…,-c₁)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Premap(SignedPermutation);

impl Premap {
    pub fn new(p: SignedPermutation) -> Result<Self, PermError> {
        let n = p.n;
        // Mirror closure as a pointwise identity: p(-p(x)) = -x for all x.
        for i in 0..2 * n {
            let x = unslot(i, n);
            if p.apply(-p.apply(x)) != -x {
                return Err(PermError::NotMirrorClosed(x));
            }
        }
        // No cycle may contain both e and -e.
        for cyc in p.cycles() {
            for &x in &cyc {
                if cyc.contains(&-x) && x > 0 {
                    return Err(PermError::SelfMirrorCycle(x));
                }
            }
        }
        Ok(Premap(p))
    }

    pub fn perm(&self) -> &SignedPermutation {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn inverse(&self) -> Premap {
        // Premaps are closed under inverse.
        Premap(self.0.inverse())
    }

    /// One representative cycle per mirror pair: the cycle where the
    /// minimal-absolute-value element of the pair occurs with positive sign.
    /// Output sorted by that minimal absolute value.
    pub fn half_quotient(&self) -> Vec<Vec<i64>> {
        let mut reps: Vec<(i64, Vec<i64>)> = Vec::new();
        for cyc in self.0.cycles() {
            let min_abs = cyc.iter().map(|x| x.abs()).min().unwrap();
            if cyc.contains(&min_abs) {
                // Rotate so the minimal positive element leads.
                let pos = cyc.iter().position(|&x| x == min_abs).unwrap();
                let mut rot = cyc[pos..].to_vec();
                rot.extend_from_slice(&cyc[..pos]);
                reps.push((min_abs, rot));
            }
        }
        reps.sort_by_key(|(m, _)| *m);
        reps.into_iter().map(|(_, c)| c).collect()
    }
}

impl fmt::Display for Premap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Face data lifted to the double cover: `γ` acts on `[n]`, the fronts are
/// `γ₊` (γ on positives) and the backs `γ₋` with `γ₋(-k) = -γ(k)`.
#[derive(Clone, Debug)]
pub struct FaceData {
    gamma_plus: SignedPermutation,
    gamma_minus: SignedPermutation,
    faces: Premap, // γ₊γ₋⁻¹
    gamma_cycle_count: usize,
}

impl FaceData {
    /// `gamma` must fix every negative element.
    pub fn lift_faces(gamma: &SignedPermutation) -> Result<FaceData, PermError> {
        let n = gamma.n;
        for k in 1..=n as i64 {
            if gamma.apply(-k) != -k {
                return Err(PermError::NegativeMoved(-k));
            }
        }
        let gamma_plus = gamma.clone();
        let mut gamma_minus = SignedPermutation::identity(n);
        for k in 1..=n as i64 {
            gamma_minus.map[slot(-k, n)] = -gamma.apply(k);
        }
        let faces = Premap::new(gamma_plus.compose(&gamma_minus.inverse())?)?;
        let gamma_cycle_count = gamma_plus
            .cycles()
            .into_iter()
            .filter(|c| c[0] > 0)
            .count();
        Ok(FaceData {
            gamma_plus,
            gamma_minus,
            faces,
            gamma_cycle_count,
        })
    }

    pub fn n(&self) -> usize {
        self.gamma_plus.n
    }

    pub fn gamma_plus(&self) -> &SignedPermutation {
        &self.gamma_plus
    }

    pub fn gamma_minus(&self) -> &SignedPermutation {
        &self.gamma_minus
    }

    /// `γ₊γ₋⁻¹`, all faces of the covering space.
    pub fn faces_premap(&self) -> &Premap {
        &self.faces
    }

    /// Number of cycles of γ on `[n]`, fixed points included.
    pub fn gamma_cycle_count(&self) -> usize {
        self.gamma_cycle_count
    }

    /// Cycles of γ on the positive part, in scan order.
    pub fn gamma_cycles(&self) -> Vec<Vec<i64>> {
        self.gamma_plus
            .cycles()
            .into_iter()
            .filter(|c| c[0] > 0)
            .collect()
    }

    /// `γ₋⁻¹ π γ₊`: the (inverse of the) vertex permutation, read clockwise.
    pub fn vertex_premap(&self, pi: &Premap) -> Result<Premap, PermError> {
        let r = self
            .gamma_minus
            .inverse()
            .compose(&pi.perm().compose(&self.gamma_plus)?)?;
        Premap::new(r)
    }

    /// `χ(γ,π) = #(γ₊γ₋⁻¹)/2 + #(π)/2 + #(γ₋⁻¹π⁻¹γ₊)/2 − n`.
    pub fn euler_characteristic(&self, pi: &Premap) -> Result<i64, PermError> {
        if pi.n() != self.n() {
            return Err(PermError::GroundSetMismatch(self.n(), pi.n()));
        }
        let verts = self
            .gamma_minus
            .inverse()
            .compose(&pi.perm().inverse().compose(&self.gamma_plus)?)?;
        let total = self.faces.perm().cycle_count() as i64 / 2
            + pi.perm().cycle_count() as i64 / 2
            + verts.cycle_count() as i64 / 2
            - self.n() as i64;
        Ok(total)
    }

    /// Partition of the faces (cycles of γ) into connected components: two
    /// faces are joined whenever a cycle of π touches both.
    pub fn face_components(&self, pi: &Premap) -> Vec<Vec<usize>> {
        let gamma_cycles = self.gamma_cycles();
        let n = self.n();
        // face index of each positive element
        let mut face_of = vec![0usize; n + 1];
        for (f, cyc) in gamma_cycles.iter().enumerate() {
            for &x in cyc {
                face_of[x as usize] = f;
            }
        }
        let mut uf = UnionFind::new(gamma_cycles.len());
        for cyc in pi.perm().cycles() {
            let faces: Vec<usize> = cyc.iter().map(|x| face_of[x.unsigned_abs() as usize]).collect();
            for w in faces.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        uf.blocks()
    }

    /// Per-component orientability: a component is orientable iff no walk in
    /// the cycle-incidence graph of the cover connects a face front to its own
    /// mirror.
    pub fn orientability(&self, pi: &Premap) -> Vec<bool> {
        self.cover_analysis(pi).orientable
    }

    /// Per-component surface classification.
    pub fn classify_surface(&self, pi: &Premap) -> Result<Vec<SurfaceClass>, PermError> {
        let analysis = self.cover_analysis(pi);
        let comps = self.face_components(pi);
        let verts = self
            .gamma_minus
            .inverse()
            .compose(&pi.perm().inverse().compose(&self.gamma_plus)?)?;
        let n = self.n();
        let gamma_cycles = self.gamma_cycles();
        let mut face_of = vec![0usize; n + 1];
        for (f, cyc) in gamma_cycles.iter().enumerate() {
            for &x in cyc {
                face_of[x as usize] = f;
            }
        }
        // Which component a face belongs to.
        let mut comp_of_face = vec![0usize; gamma_cycles.len()];
        for (ci, block) in comps.iter().enumerate() {
            for &f in block {
                comp_of_face[f] = ci;
            }
        }
        let comp_of_elem = |x: i64| comp_of_face[face_of[x.unsigned_abs() as usize]];
        let mut half_faces = vec![0i64; comps.len()];
        let mut half_pi = vec![0i64; comps.len()];
        let mut half_verts = vec![0i64; comps.len()];
        let mut elems = vec![0i64; comps.len()];
        for cyc in self.faces.perm().cycles() {
            half_faces[comp_of_elem(cyc[0])] += 1;
        }
        for cyc in pi.perm().cycles() {
            half_pi[comp_of_elem(cyc[0])] += 1;
        }
        for cyc in verts.cycles() {
            half_verts[comp_of_elem(cyc[0])] += 1;
        }
        for x in 1..=n as i64 {
            elems[comp_of_elem(x)] += 1;
        }
        let mut out = Vec::with_capacity(comps.len());
        for ci in 0..comps.len() {
            let chi = half_faces[ci] / 2 + half_pi[ci] / 2 + half_verts[ci] / 2 - elems[ci];
            let class = if analysis.orientable[ci] {
                if chi == 2 {
                    SurfaceClass::Sphere
                } else if (2 - chi) % 2 == 0 {
                    SurfaceClass::TorusSum(((2 - chi) / 2) as u32)
                } else {
                    return Err(PermError::OddOrientableChi(chi));
                }
            } else {
                SurfaceClass::ProjectivePlaneSum((2 - chi) as u32)
            };
            out.push(class);
        }
        Ok(out)
    }

    /// Connectivity and orientability of the orientable double cover, plus the
    /// relative-orientation data used for annular counts.
    pub(crate) fn cover_analysis(&self, pi: &Premap) -> CoverAnalysis {
        let n = self.n();
        let face_cycles = self.faces.perm().cycles();
        let pi_cycles = pi.perm().cycles();
        let nodes = face_cycles.len() + pi_cycles.len();
        // node index of the face/π cycle containing each signed element
        let mut face_node = vec![0usize; 2 * n];
        let mut pi_node = vec![0usize; 2 * n];
        for (i, cyc) in face_cycles.iter().enumerate() {
            for &x in cyc {
                face_node[slot(x, n)] = i;
            }
        }
        for (i, cyc) in pi_cycles.iter().enumerate() {
            for &x in cyc {
                pi_node[slot(x, n)] = i + face_cycles.len();
            }
        }
        let mut uf = UnionFind::new(nodes);
        for i in 0..2 * n {
            uf.union(face_node[i], pi_node[i]);
        }
        // mirror node of each face cycle: the cycle containing the negated lead
        let comps = self.face_components(pi);
        let gamma_cycles = self.gamma_cycles();
        let mut face_of = vec![0usize; n + 1];
        for (f, cyc) in gamma_cycles.iter().enumerate() {
            for &x in cyc {
                face_of[x as usize] = f;
            }
        }
        let mut comp_of_face = vec![0usize; gamma_cycles.len()];
        for (ci, block) in comps.iter().enumerate() {
            for &f in block {
                comp_of_face[f] = ci;
            }
        }
        let mut orientable = vec![true; comps.len()];
        for cyc in &face_cycles {
            let lead = cyc[0];
            let mirror = face_node[slot(-lead, n)];
            let own = face_node[slot(lead, n)];
            if uf.find(own) == uf.find(mirror) {
                orientable[comp_of_face[face_of[lead.unsigned_abs() as usize]]] = false;
            }
        }
        // Cover-component id of the front cycle of each γ face.
        let mut front_group = vec![0usize; gamma_cycles.len()];
        for (f, cyc) in gamma_cycles.iter().enumerate() {
            front_group[f] = uf.find(face_node[slot(cyc[0], n)]);
        }
        let mut back_group = vec![0usize; gamma_cycles.len()];
        for (f, cyc) in gamma_cycles.iter().enumerate() {
            back_group[f] = uf.find(face_node[slot(-cyc[0], n)]);
        }
        CoverAnalysis {
            orientable,
            front_group,
            back_group,
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct CoverAnalysis {
    /// Per face-component orientability.
    pub orientable: Vec<bool>,
    /// Cover-component representative of each γ face's front copy.
    pub front_group: Vec<usize>,
    /// Cover-component representative of each γ face's back copy.
    pub back_group: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurfaceClass {
    Sphere,
    /// Connected sum of `g` tori, χ = 2 − 2g.
    TorusSum(u32),
    /// Connected sum of `m` projective planes, χ = 2 − m.
    ProjectivePlaneSum(u32),
}

impl fmt::Display for SurfaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceClass::Sphere => write!(f, "sphere"),
            SurfaceClass::TorusSum(1) => write!(f, "torus"),
            SurfaceClass::TorusSum(g) => write!(f, "connected sum of {g} tori"),
            SurfaceClass::ProjectivePlaneSum(1) => write!(f, "projective plane"),
            SurfaceClass::ProjectivePlaneSum(2) => write!(f, "Klein bottle"),
            SurfaceClass::ProjectivePlaneSum(m) => {
                write!(f, "connected sum of {m} projective planes")
            }
        }
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    /// Blocks in order of their smallest member.
    pub fn blocks(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
        for x in 0..n {
            let r = self.find(x);
            by_root[r].push(x);
        }
        by_root.into_iter().filter(|b| !b.is_empty()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(text: &str, n: usize) -> SignedPermutation {
        SignedPermutation::parse_cycles(text, n).unwrap()
    }

    #[test]
    fn parse_basic() {
        let p = sp("(1,2,3,4)(5,6)", 6);
        assert_eq!(p.apply(1), 2);
        assert_eq!(p.apply(4), 1);
        assert_eq!(p.apply(5), 6);
        assert_eq!(p.apply(-1), -1);
        assert!(sp("", 3).is_identity());
        let q = sp("(1,-2)", 2);
        assert_eq!(q.apply(1), -2);
        assert_eq!(q.apply(-2), 1);
        assert_eq!(q.apply(-1), -1);
        assert_eq!(q.apply(2), 2);
    }

    #[test]
    fn parse_errors() {
        assert!(SignedPermutation::parse_cycles("(1,1)", 2).is_err());
        assert!(SignedPermutation::parse_cycles("(1,3)", 2).is_err());
        assert!(SignedPermutation::parse_cycles("(1,2", 2).is_err());
        assert!(SignedPermutation::parse_cycles("(1,x)", 2).is_err());
        assert!(SignedPermutation::parse_cycles("(1,-1)", 2).is_ok());
    }

    #[test]
    fn compose_map_example() {
        let sigma = sp("(1,2,3,4)(5,6)", 6);
        let alpha = sp("(1,5)(2,3)(4,6)", 6);
        let phi = sigma.inverse().compose(&alpha.inverse()).unwrap();
        assert_eq!(phi, sp("(1,6,3)(2)(4,5)", 6));
    }

    #[test]
    fn compose_hypermap_example() {
        let sigma = sp("(1,2,3)(4,5)(6,7)", 7);
        let alpha = sp("(1,6,5)(2,7,3)(4)", 7);
        let phi = sigma.inverse().compose(&alpha.inverse()).unwrap();
        assert_eq!(phi, sp("(1,4,5,7)(2)(3,6)", 7));
    }

    #[test]
    fn cycle_counts() {
        let p = sp("(1,2,3,4,5)(6,7,8)(-5,-4,-3,-2,-1)(-8,-7,-6)", 8);
        assert_eq!(p.cycle_count(), 4);
        assert_eq!(SignedPermutation::identity(4).cycle_count(), 8);
        let q = sp("(1,6,3)", 6);
        assert_eq!(q.inverse(), sp("(3,6,1)", 6));
    }

    #[test]
    fn premap_examples() {
        let p = sp("(1,7,-6)(6,-7,-1)(2,5,-3)(3,-5,-2)(4)(-4)", 7);
        assert!(Premap::new(p).is_ok());
        assert!(Premap::new(sp("(1,2)(-1,-2)", 2)).is_ok());
        // (1,2) without its mirror
        assert!(Premap::new(sp("(1,2)", 2)).is_err());
        // self-mirror cycle (1,-1)
        assert!(Premap::new(sp("(1,-1)", 1)).is_err());
    }

    #[test]
    fn half_quotient_examples() {
        let p = Premap::new(sp("(1,-3,6,-5,-7)(7,5,-6,3,-1)(2,-8,-4)(4,8,-2)", 8)).unwrap();
        assert_eq!(
            p.half_quotient(),
            vec![vec![1, -3, 6, -5, -7], vec![2, -8, -4]]
        );
        let q = Premap::new(sp("(1,2)(-1,-2)", 2)).unwrap();
        assert_eq!(q.half_quotient(), vec![vec![1, 2]]);
        let id = Premap::new(SignedPermutation::identity(3)).unwrap();
        assert_eq!(id.half_quotient(), vec![vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn lift_faces_examples() {
        let fd = FaceData::lift_faces(&sp("(1,2,3,4,5)(6,7,8)", 8)).unwrap();
        assert_eq!(
            fd.faces_premap().perm(),
            &sp("(1,2,3,4,5)(6,7,8)(-5,-4,-3,-2,-1)(-8,-7,-6)", 8)
        );
        let id = FaceData::lift_faces(&SignedPermutation::identity(2)).unwrap();
        assert!(id.faces_premap().perm().is_identity());
        let swap = FaceData::lift_faces(&sp("(1,2)", 2)).unwrap();
        assert_eq!(swap.faces_premap().perm(), &sp("(1,2)(-2,-1)", 2));
        assert!(FaceData::lift_faces(&sp("(1,-2)", 2)).is_err());
    }

    #[test]
    fn chi_examples() {
        let fd = FaceData::lift_faces(&sp("(1,2,3,4,5)(6,7,8)", 8)).unwrap();
        let pi = Premap::new(sp("(1,-7)(-1,7)(2,-4)(-2,4)(3,-6)(-3,6)(5,8)(-5,-8)", 8)).unwrap();
        assert_eq!(fd.euler_characteristic(&pi).unwrap(), 0);

        let fd2 = FaceData::lift_faces(&sp("(1,2,3,4)(5,6,7,8)", 8)).unwrap();
        let pi2 = Premap::new(sp("(1,-7)(-1,7)(2,3)(-2,-3)(4,-6)(-4,6)(5,8)(-5,-8)", 8)).unwrap();
        assert_eq!(fd2.euler_characteristic(&pi2).unwrap(), 2);

        let fd3 = FaceData::lift_faces(&sp("(1,2)", 2)).unwrap();
        let pi3 = Premap::new(sp("(1,2)(-1,-2)", 2)).unwrap();
        assert_eq!(fd3.euler_characteristic(&pi3).unwrap(), 2);
    }

    #[test]
    fn vertex_premap_gluing_example() {
        let fd = FaceData::lift_faces(&sp("(1,2,3,4,5)(6,7,8)", 8)).unwrap();
        let pi = Premap::new(sp("(1,-7)(-1,7)(2,-4)(-2,4)(3,-6)(-3,6)(5,8)(-5,-8)", 8)).unwrap();
        let v = fd.vertex_premap(&pi).unwrap();
        assert_eq!(
            v.perm(),
            &sp("(1,-3,6,-5,-7)(7,5,-6,3,-1)(2,-8,-4)(4,8,-2)", 8)
        );
    }

    #[test]
    fn vertex_premap_nonorientable_example() {
        // γ₊⁻¹π⁻¹γ₋ is the inverse of γ₋⁻¹πγ₊.
        let fd = FaceData::lift_faces(&sp("(1,2,3,4,5)(6,7)", 7)).unwrap();
        let pi = Premap::new(sp("(1,7,-6)(6,-7,-1)(2,5,-3)(3,-5,-2)(4)(-4)", 7)).unwrap();
        let v = fd.vertex_premap(&pi).unwrap();
        let expected = sp("(1,-6,7,5)(-5,-7,6,-1)(2,-3,-4)(4,3,-2)", 7);
        assert_eq!(v.perm(), &expected.inverse());
    }

    #[test]
    fn components_and_orientability() {
        let fd = FaceData::lift_faces(&sp("(1,2,3,4,5)(6,7,8)", 8)).unwrap();
        let pi = Premap::new(sp("(1,-7)(-1,7)(2,-4)(-2,4)(3,-6)(-3,6)(5,8)(-5,-8)", 8)).unwrap();
        assert_eq!(fd.face_components(&pi), vec![vec![0, 1]]);
        assert_eq!(fd.orientability(&pi), vec![false]);
        assert_eq!(
            fd.classify_surface(&pi).unwrap(),
            vec![SurfaceClass::ProjectivePlaneSum(2)]
        );

        // GOE untwisted sphere vs twisted projective plane
        let fd2 = FaceData::lift_faces(&sp("(1,2)", 2)).unwrap();
        let untw = Premap::new(sp("(1,2)(-1,-2)", 2)).unwrap();
        let tw = Premap::new(sp("(1,-2)(-1,2)", 2)).unwrap();
        assert_eq!(fd2.orientability(&untw), vec![true]);
        assert_eq!(fd2.classify_surface(&untw).unwrap(), vec![SurfaceClass::Sphere]);
        assert_eq!(fd2.orientability(&tw), vec![false]);
        assert_eq!(
            fd2.classify_surface(&tw).unwrap(),
            vec![SurfaceClass::ProjectivePlaneSum(1)]
        );
    }

    #[test]
    fn disconnected_components() {
        // two faces, π pairing each face to itself
        let fd = FaceData::lift_faces(&sp("(1,2)(3,4)", 4)).unwrap();
        let pi = Premap::new(sp("(1,2)(-1,-2)(3,4)(-3,-4)", 4)).unwrap();
        assert_eq!(fd.face_components(&pi), vec![vec![0], vec![1]]);
        assert_eq!(
            fd.classify_surface(&pi).unwrap(),
            vec![SurfaceClass::Sphere, SurfaceClass::Sphere]
        );
    }

    #[test]
    fn display_roundtrip() {
        let p = sp("(1,-7)(-1,7)(2,3)(-2,-3)", 8);
        let q = SignedPermutation::parse_cycles(&p.to_string(), 8).unwrap();
        assert_eq!(p, q);
    }
}
