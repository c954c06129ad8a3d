//! The layered monodromy ideal triangulation of a once-punctured torus
//! bundle, with its combinatorial derived data.
//!
//! The fibre is the once-punctured torus, modelled as the plane minus the
//! integer lattice modulo lattice translations. A marking is an ordered
//! positive basis `(u, v)` of the lattice; the corresponding ideal
//! triangulation of the fibre has arc slopes `{u, v, u+v}` and two ideal
//! triangles `A = (0, u, u+v)` and `B = (0, v, u+v)`.
//!
//! Each letter of the monodromy word lays one tetrahedron on the fibre:
//! the square carrying a diagonal exchange, thickened. Vertex labels are
//! fixed so that faces 0 and 1 form the bottom square and faces 2 and 3 the
//! top square, with the flipped (new) diagonal the edge `{0,1}` shared by
//! the top faces and the old diagonal the edge `{2,3}`:
//!
//! ```text
//!   letter R at marking (u, v):  vertices (0, 2u+v, u,   u+v)
//!   letter L at marking (u, v):  vertices (0, u+2v, u+v, v)
//! ```
//!
//! Both layouts are positively oriented, so every gluing permutation of the
//! assembled triangulation is odd. Face gluings between consecutive layers
//! are found by matching coordinate triangles up to lattice translation;
//! the final top is carried onto the initial bottom by the inverse of the
//! monodromy matrix (composed with `x -> -x`, the elliptic involution, when
//! the sign is negative).

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::farey::{matrix_of_word, Letter, MonodromyWord, Slope, UnimodularMatrix};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TriangulationError {
    #[error("word uses only one letter; the monodromy is not pseudo-Anosov")]
    NotPseudoAnosov,
    #[error("Euler relation violated: e={e}, f={f}, p={p}")]
    EulerViolation { e: usize, f: usize, p: usize },
    #[error("no fibre-preserving involution found (construction bug)")]
    NoInvolution,
}

/// Edge index conventions: edges of a tetrahedron are the six vertex pairs
/// in the fixed order below; `EDGE_ENDS[i]` are the endpoints of edge `i`.
pub const EDGE_ENDS: [[u8; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];

/// Index of the edge with the given endpoints.
pub fn edge_index(a: u8, b: u8) -> u8 {
    EDGE_ENDS
        .iter()
        .position(|e| (e[0] == a && e[1] == b) || (e[0] == b && e[1] == a))
        .expect("distinct vertex labels") as u8
}

/// A marked ideal triangulation of the fibre: an ordered positive basis
/// `(u, v)` of the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurfaceMarking {
    pub u: [i64; 2],
    pub v: [i64; 2],
}

impl SurfaceMarking {
    pub fn initial() -> Self {
        SurfaceMarking { u: [1, 0], v: [0, 1] }
    }

    fn uv_sum(&self) -> [i64; 2] {
        [self.u[0] + self.v[0], self.u[1] + self.v[1]]
    }

    /// The three arc slopes, pairwise Farey neighbours.
    pub fn slopes(&self) -> [Slope; 3] {
        [
            Slope::of_vector(self.u).expect("basis vector is nonzero"),
            Slope::of_vector(self.v).expect("basis vector is nonzero"),
            Slope::of_vector(self.uv_sum()).expect("basis sum is nonzero"),
        ]
    }

    /// Vertex coordinates of the ideal triangle labelled A.
    pub fn triangle_a(&self) -> [[i64; 2]; 3] {
        [[0, 0], self.u, self.uv_sum()]
    }

    /// Vertex coordinates of the ideal triangle labelled B.
    pub fn triangle_b(&self) -> [[i64; 2]; 3] {
        [[0, 0], self.v, self.uv_sum()]
    }

    pub fn is_valid(&self) -> bool {
        self.u[0] * self.v[1] - self.u[1] * self.v[0] == 1
    }
}

/// One diagonal exchange: the marking matrix is multiplied on the right by
/// the generator, replacing exactly one slope by the other diagonal of the
/// square.
pub fn elementary_move(m: SurfaceMarking, letter: Letter) -> SurfaceMarking {
    match letter {
        // (u, v) -> (u, u+v): slope v is exchanged for 2u+v.
        Letter::R => SurfaceMarking { u: m.u, v: m.uv_sum() },
        // (u, v) -> (u+v, v): slope u is exchanged for u+2v.
        Letter::L => SurfaceMarking { u: m.uv_sum(), v: m.v },
    }
}

/// A tetrahedron of the layered triangulation, with the plane coordinates
/// of its four ideal vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tetrahedron {
    pub letter: Letter,
    pub vertices: [[i64; 2]; 4],
}

impl Tetrahedron {
    fn at(marking: SurfaceMarking, letter: Letter) -> Tetrahedron {
        let u = marking.u;
        let v = marking.v;
        let s = marking.uv_sum();
        let vertices = match letter {
            Letter::R => [[0, 0], [2 * u[0] + v[0], 2 * u[1] + v[1]], u, s],
            Letter::L => [[0, 0], [u[0] + 2 * v[0], u[1] + 2 * v[1]], s, v],
        };
        Tetrahedron { letter, vertices }
    }

    /// Coordinates of the face opposite vertex `f`.
    fn face_coords(&self, f: u8) -> [([i64; 2], u8); 3] {
        let mut out = [([0, 0], 0u8); 3];
        let mut k = 0;
        for i in 0..4u8 {
            if i != f {
                out[k] = (self.vertices[i as usize], i);
                k += 1;
            }
        }
        out
    }
}

/// A face gluing target: tetrahedron, face, and the vertex permutation
/// carrying source labels to target labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gluing {
    pub tet: usize,
    pub face: u8,
    pub perm: [u8; 4],
}

/// An edge class: the ordered cycle of tetrahedron corners around it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeClass {
    pub corners: Vec<(usize, u8)>,
}

impl EdgeClass {
    pub fn valence(&self) -> usize {
        self.corners.len()
    }
}

/// A combinatorial automorphism: per-tetrahedron target and vertex
/// permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automorphism {
    pub tet_map: Vec<usize>,
    pub vertex_maps: Vec<[u8; 4]>,
}

impl Automorphism {
    pub fn identity(n: usize) -> Self {
        Automorphism { tet_map: (0..n).collect(), vertex_maps: vec![[0, 1, 2, 3]; n] }
    }

    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        let n = self.tet_map.len();
        let mut tet_map = vec![0; n];
        let mut vertex_maps = vec![[0u8; 4]; n];
        for t in 0..n {
            let mid = other.tet_map[t];
            tet_map[t] = self.tet_map[mid];
            for v in 0..4 {
                vertex_maps[t][v] = self.vertex_maps[mid][other.vertex_maps[t][v] as usize];
            }
        }
        Automorphism { tet_map, vertex_maps }
    }

    pub fn is_identity(&self) -> bool {
        self.tet_map.iter().enumerate().all(|(i, &t)| i == t)
            && self.vertex_maps.iter().all(|p| *p == [0, 1, 2, 3])
    }
}

/// The assembled triangulation.
#[derive(Debug, Clone)]
pub struct Triangulation {
    pub word: MonodromyWord,
    pub tets: Vec<Tetrahedron>,
    /// `gluings[t][f]` is the partner of face `f` of tetrahedron `t`.
    pub gluings: Vec<[Gluing; 4]>,
}

/// Build the layered triangulation: one tetrahedron per letter, top glued
/// to bottom by the monodromy.
pub fn build_monodromy_triangulation(
    w: &MonodromyWord,
) -> Result<Triangulation, TriangulationError> {
    if !w.has_both_letters() {
        return Err(TriangulationError::NotPseudoAnosov);
    }
    let n = w.len();
    let mut marking = SurfaceMarking::initial();
    let mut tets = Vec::with_capacity(n);
    for &letter in w.letters() {
        debug_assert!(marking.is_valid());
        tets.push(Tetrahedron::at(marking, letter));
        marking = elementary_move(marking, letter);
    }

    let mut gluings: Vec<[Option<Gluing>; 4]> = vec![[None; 4]; n];
    // Faces 2, 3 of layer t are its top square; faces 0, 1 of layer t+1 the
    // next bottom square. They carry the same two fibre triangles.
    for t in 0..n {
        let t2 = (t + 1) % n;
        let last = t + 1 == n;
        for top_face in [2u8, 3u8] {
            let mut src = tets[t].face_coords(top_face);
            if last {
                let m = matrix_of_word(&w);
                let inv = m.inverse();
                for (p, _) in src.iter_mut() {
                    *p = apply_i64(&inv, *p);
                }
            }
            let mut matched = None;
            for bottom_face in [0u8, 1u8] {
                let dst = tets[t2].face_coords(bottom_face);
                if let Some(vmatch) = translate_match(&src, &dst) {
                    assert!(matched.is_none(), "top face matches two bottom faces");
                    matched = Some((bottom_face, vmatch));
                }
            }
            let (bottom_face, vmatch) = matched.expect("top face must match a bottom face");
            let mut perm = [4u8; 4];
            for (s, d) in vmatch {
                perm[s as usize] = d;
            }
            perm[top_face as usize] = bottom_face;
            debug_assert!(is_odd(&perm), "gluing permutation must be odd");
            let back = inverse_perm(&perm);
            gluings[t][top_face as usize] = Some(Gluing { tet: t2, face: bottom_face, perm });
            gluings[t2][bottom_face as usize] =
                Some(Gluing { tet: t, face: top_face, perm: back });
        }
    }
    let gluings: Vec<[Gluing; 4]> = gluings
        .into_iter()
        .map(|g| {
            [
                g[0].expect("face 0 glued"),
                g[1].expect("face 1 glued"),
                g[2].expect("face 2 glued"),
                g[3].expect("face 3 glued"),
            ]
        })
        .collect();
    let tri = Triangulation { word: w.clone(), tets, gluings };
    debug_assert!(tri.check_involutive());
    Ok(tri)
}

fn apply_i64(m: &UnimodularMatrix, v: [i64; 2]) -> [i64; 2] {
    [m.a * v[0] + m.b * v[1], m.c * v[0] + m.d * v[1]]
}

/// If `dst` is a lattice translate of `src`, return the vertex label
/// correspondence. The negative-sign flip is already folded into the
/// inverse monodromy matrix by the caller, so a pure translation suffices.
fn translate_match(
    src: &[([i64; 2], u8); 3],
    dst: &[([i64; 2], u8); 3],
) -> Option<Vec<(u8, u8)>> {
    let s0 = src[0].0;
    for &(d, _) in dst.iter() {
        let tau = [d[0] - s0[0], d[1] - s0[1]];
        let mut pairing = Vec::with_capacity(3);
        let ok = src.iter().all(|&(sp, sl)| {
            let moved = [sp[0] + tau[0], sp[1] + tau[1]];
            match dst.iter().find(|&&(dp, _)| dp == moved) {
                Some(&(_, dl)) => {
                    pairing.push((sl, dl));
                    true
                }
                None => false,
            }
        });
        if ok && pairing.len() == 3 {
            return Some(pairing);
        }
    }
    None
}

fn is_odd(p: &[u8; 4]) -> bool {
    let mut inv = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    inv % 2 == 1
}

fn inverse_perm(p: &[u8; 4]) -> [u8; 4] {
    let mut q = [0u8; 4];
    for i in 0..4 {
        q[p[i] as usize] = i as u8;
    }
    q
}

impl Triangulation {
    pub fn tet_count(&self) -> usize {
        self.tets.len()
    }

    /// Gluing involutivity and total face coverage.
    pub fn check_involutive(&self) -> bool {
        for t in 0..self.tets.len() {
            for f in 0..4u8 {
                let g = &self.gluings[t][f as usize];
                let back = &self.gluings[g.tet][g.face as usize];
                if back.tet != t || back.face != f {
                    return false;
                }
                for v in 0..4 {
                    if back.perm[g.perm[v] as usize] != v as u8 {
                        return false;
                    }
                }
                if !is_odd(&g.perm) {
                    return false;
                }
            }
        }
        true
    }
}

/// Orbits of tetrahedron edges under the face identifications, each with
/// its ordered corner cycle.
pub fn compute_edge_classes(t: &Triangulation) -> Vec<EdgeClass> {
    let n = t.tet_count();
    let mut seen = vec![[false; 6]; n];
    let mut classes = Vec::new();
    for t0 in 0..n {
        for e0 in 0..6u8 {
            if seen[t0][e0 as usize] {
                continue;
            }
            let [a0, b0] = EDGE_ENDS[e0 as usize];
            // Leave through the first face not containing the edge.
            let f0 = (0..4u8).find(|x| *x != a0 && *x != b0).unwrap();
            let mut corners = Vec::new();
            let (mut tet, mut a, mut b, mut leave) = (t0, a0, b0, f0);
            loop {
                let e = edge_index(a, b);
                assert!(!seen[tet][e as usize], "edge orbit revisits a corner");
                seen[tet][e as usize] = true;
                corners.push((tet, e));
                let g = &t.gluings[tet][leave as usize];
                let (na, nb, entered) =
                    (g.perm[a as usize], g.perm[b as usize], g.perm[leave as usize]);
                let next_leave =
                    (0..4u8).find(|x| *x != na && *x != nb && *x != entered).unwrap();
                tet = g.tet;
                a = na;
                b = nb;
                leave = next_leave;
                if tet == t0 && edge_index(a, b) == e0 && leave == f0 {
                    break;
                }
            }
            classes.push(EdgeClass { corners });
        }
    }
    debug_assert_eq!(classes.iter().map(|c| c.valence()).sum::<usize>(), 6 * n);
    classes
}

/// The Euler relation `e - f + p = 0` for an ideal triangulation with one
/// torus cusp per vertex orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EulerReport {
    pub e: usize,
    pub f: usize,
    pub p: usize,
}

pub fn euler_check(t: &Triangulation) -> Result<EulerReport, TriangulationError> {
    let e = compute_edge_classes(t).len();
    let f = 2 * t.tet_count();
    let p = t.tet_count();
    if e + p != f {
        return Err(TriangulationError::EulerViolation { e, f, p });
    }
    Ok(EulerReport { e, f, p })
}

/// Component count and Euler characteristic of the assembled vertex links.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CuspReport {
    pub components: usize,
    pub euler: Vec<i64>,
}

/// Assemble the 4n boundary triangles (links of ideal vertices) into
/// closed surfaces via the induced gluings.
pub fn vertex_link(t: &Triangulation) -> CuspReport {
    let n = t.tet_count();
    // Union-find over boundary triangles (tet, vertex).
    let node = |tet: usize, v: u8| tet * 4 + v as usize;
    let mut uf = UnionFind::new(4 * n);
    for tet in 0..n {
        for f in 0..4u8 {
            let g = &t.gluings[tet][f as usize];
            for v in 0..4u8 {
                if v != f {
                    uf.union(node(tet, v), node(g.tet, g.perm[v as usize]));
                }
            }
        }
    }
    // Union-find over link-triangle corners (tet, vertex v, edge end w):
    // the corner of link(v) on edge {v, w} is glued through both faces
    // that contain the edge.
    let cnode = |tet: usize, v: u8, w: u8| {
        let k = if w < v { w } else { w - 1 };
        tet * 12 + v as usize * 3 + k as usize
    };
    let mut cf = UnionFind::new(12 * n);
    for tet in 0..n {
        for f in 0..4u8 {
            let g = &t.gluings[tet][f as usize];
            for v in 0..4u8 {
                for w in 0..4u8 {
                    if v != w && v != f && w != f {
                        cf.union(
                            cnode(tet, v, w),
                            cnode(g.tet, g.perm[v as usize], g.perm[w as usize]),
                        );
                    }
                }
            }
        }
    }
    // Per component of the link: F triangles, E = 3F/2 sides, V corner
    // orbits.
    let mut comp_of_tri = vec![0usize; 4 * n];
    let mut reps = Vec::new();
    for i in 0..4 * n {
        let r = uf.find(i);
        let c = match reps.iter().position(|&x| x == r) {
            Some(c) => c,
            None => {
                reps.push(r);
                reps.len() - 1
            }
        };
        comp_of_tri[i] = c;
    }
    let ncomp = reps.len();
    let mut faces = vec![0i64; ncomp];
    for i in 0..4 * n {
        faces[comp_of_tri[i]] += 1;
    }
    let mut corner_seen = vec![false; 12 * n];
    let mut verts = vec![0i64; ncomp];
    for tet in 0..n {
        for v in 0..4u8 {
            for w in 0..4u8 {
                if v != w {
                    let r = cf.find(cnode(tet, v, w));
                    if !corner_seen[r] {
                        corner_seen[r] = true;
                        verts[comp_of_tri[node(tet, v)]] += 1;
                    }
                }
            }
        }
    }
    let euler = (0..ncomp).map(|c| verts[c] - 3 * faces[c] / 2 + faces[c]).collect();
    CuspReport { components: ncomp, euler }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// Whether `phi` commutes with every gluing of `t`.
pub fn is_automorphism(t: &Triangulation, phi: &Automorphism) -> bool {
    let n = t.tet_count();
    if phi.tet_map.len() != n {
        return false;
    }
    for s in 0..n {
        for f in 0..4u8 {
            let g = &t.gluings[s][f as usize];
            let sf2 = phi.vertex_maps[s][f as usize];
            let g2 = &t.gluings[phi.tet_map[s]][sf2 as usize];
            if g2.tet != phi.tet_map[g.tet] {
                return false;
            }
            for v in 0..4u8 {
                // Image gluing must carry phi_s(v) to phi_{g.tet}(perm(v)).
                if g2.perm[phi.vertex_maps[s][v as usize] as usize]
                    != phi.vertex_maps[g.tet][g.perm[v as usize] as usize]
                {
                    return false;
                }
            }
        }
    }
    true
}

const DOUBLE_TRANSPOSITIONS: [[u8; 4]; 3] = [[1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]];

/// Search for the fibre-preserving involution: an order-2 automorphism
/// fixing each tetrahedron by a double transposition.
pub fn find_involution(t: &Triangulation) -> Result<Automorphism, TriangulationError> {
    let n = t.tet_count();
    'seed: for seed in DOUBLE_TRANSPOSITIONS {
        let mut maps: Vec<Option<[u8; 4]>> = vec![None; n];
        maps[0] = Some(seed);
        let mut queue = VecDeque::from([0usize]);
        while let Some(s) = queue.pop_front() {
            let sigma = maps[s].unwrap();
            for f in 0..4u8 {
                let g = &t.gluings[s][f as usize];
                let g2 = &t.gluings[s][sigma[f as usize] as usize];
                if g2.tet != g.tet {
                    continue 'seed;
                }
                // Forced value: sigma' = g2.perm o sigma o g.perm^{-1}.
                let mut forced = [0u8; 4];
                for v in 0..4usize {
                    forced[g.perm[v] as usize] = g2.perm[sigma[v] as usize];
                }
                match maps[g.tet] {
                    None => {
                        if !DOUBLE_TRANSPOSITIONS.contains(&forced) {
                            continue 'seed;
                        }
                        maps[g.tet] = Some(forced);
                        queue.push_back(g.tet);
                    }
                    Some(existing) => {
                        if existing != forced {
                            continue 'seed;
                        }
                    }
                }
            }
        }
        if maps.iter().any(|m| m.is_none()) {
            continue;
        }
        let phi = Automorphism {
            tet_map: (0..n).collect(),
            vertex_maps: maps.into_iter().map(|m| m.unwrap()).collect(),
        };
        if is_automorphism(t, &phi) && phi.compose(&phi).is_identity() {
            return Ok(phi);
        }
    }
    Err(TriangulationError::NoInvolution)
}

const ALL_PERMS: [[u8; 4]; 24] = all_perms();

const fn all_perms() -> [[u8; 4]; 24] {
    let mut out = [[0u8; 4]; 24];
    let mut idx = 0;
    let mut a = 0u8;
    while a < 4 {
        let mut b = 0u8;
        while b < 4 {
            let mut c = 0u8;
            while c < 4 {
                let mut d = 0u8;
                while d < 4 {
                    if a != b && a != c && a != d && b != c && b != d && c != d {
                        out[idx] = [a, b, c, d];
                        idx += 1;
                    }
                    d += 1;
                }
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
}

/// Exhaustive seeded search for a combinatorial isomorphism.
pub fn are_isomorphic(t1: &Triangulation, t2: &Triangulation) -> bool {
    let n = t1.tet_count();
    if n != t2.tet_count() {
        return false;
    }
    'seed: for target0 in 0..n {
        for sigma0 in ALL_PERMS {
            let mut tet_map: Vec<Option<usize>> = vec![None; n];
            let mut vmaps: Vec<Option<[u8; 4]>> = vec![None; n];
            tet_map[0] = Some(target0);
            vmaps[0] = Some(sigma0);
            let mut queue = VecDeque::from([0usize]);
            let mut consistent = true;
            while let Some(s) = queue.pop_front() {
                let ts = tet_map[s].unwrap();
                let sigma = vmaps[s].unwrap();
                for f in 0..4u8 {
                    let g = &t1.gluings[s][f as usize];
                    let g2 = &t2.gluings[ts][sigma[f as usize] as usize];
                    let mut forced = [0u8; 4];
                    for v in 0..4usize {
                        forced[g.perm[v] as usize] = g2.perm[sigma[v] as usize];
                    }
                    match (tet_map[g.tet], vmaps[g.tet]) {
                        (None, _) => {
                            tet_map[g.tet] = Some(g2.tet);
                            vmaps[g.tet] = Some(forced);
                            queue.push_back(g.tet);
                        }
                        (Some(et), Some(ev)) => {
                            if et != g2.tet || ev != forced {
                                consistent = false;
                            }
                        }
                        _ => unreachable!(),
                    }
                    if !consistent {
                        break;
                    }
                }
                if !consistent {
                    continue 'seed;
                }
            }
            if tet_map.iter().any(|m| m.is_none()) {
                continue;
            }
            // Bijectivity plus a full recheck.
            let mut hit = vec![false; n];
            for m in tet_map.iter().flatten() {
                hit[*m] = true;
            }
            if hit.iter().any(|h| !h) {
                continue;
            }
            let phi = Automorphism {
                tet_map: tet_map.into_iter().map(|m| m.unwrap()).collect(),
                vertex_maps: vmaps.into_iter().map(|m| m.unwrap()).collect(),
            };
            if full_iso_check(t1, t2, &phi) {
                return true;
            }
        }
    }
    false
}

fn full_iso_check(t1: &Triangulation, t2: &Triangulation, phi: &Automorphism) -> bool {
    for s in 0..t1.tet_count() {
        for f in 0..4u8 {
            let g = &t1.gluings[s][f as usize];
            let g2 = &t2.gluings[phi.tet_map[s]][phi.vertex_maps[s][f as usize] as usize];
            if g2.tet != phi.tet_map[g.tet] {
                return false;
            }
            for v in 0..4usize {
                if g2.perm[phi.vertex_maps[s][v] as usize]
                    != phi.vertex_maps[g.tet][g.perm[v] as usize]
                {
                    return false;
                }
            }
        }
    }
    true
}

// ---------------------------------------------------------------------
// Export
// ---------------------------------------------------------------------

#[derive(Debug, Serialize)]
struct EdgeJson {
    valence: usize,
    corners: Vec<(usize, u8)>,
}

#[derive(Debug, Serialize)]
struct CuspJson {
    components: usize,
    euler: i64,
}

#[derive(Debug, Serialize)]
struct TriangulationJson {
    word: String,
    sign: i64,
    tetrahedra: usize,
    gluings: Vec<[(usize, u8, [u8; 4]); 4]>,
    edges: Vec<EdgeJson>,
    cusp: CuspJson,
}

/// Deterministic JSON export per the documented schema.
pub fn to_json(t: &Triangulation) -> String {
    let edges = compute_edge_classes(t);
    let cusp = vertex_link(t);
    let doc = TriangulationJson {
        word: {
            let mut s = String::new();
            for l in t.word.letters() {
                let _ = write!(s, "{l}");
            }
            s
        },
        sign: t.word.sign().as_i64(),
        tetrahedra: t.tet_count(),
        gluings: t
            .gluings
            .iter()
            .map(|row| {
                [
                    (row[0].tet, row[0].face, row[0].perm),
                    (row[1].tet, row[1].face, row[1].perm),
                    (row[2].tet, row[2].face, row[2].perm),
                    (row[3].tet, row[3].face, row[3].perm),
                ]
            })
            .collect(),
        edges: edges
            .iter()
            .map(|e| EdgeJson { valence: e.valence(), corners: e.corners.clone() })
            .collect(),
        cusp: CuspJson { components: cusp.components, euler: cusp.euler.iter().sum() },
    };
    serde_json::to_string_pretty(&doc).expect("serialization cannot fail")
}

/// Plain-text gluing table, one row per tetrahedron.
pub fn to_text(t: &Triangulation) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "word: {}", t.word);
    let _ = writeln!(out, "tet | face 0        | face 1        | face 2        | face 3");
    for (i, row) in t.gluings.iter().enumerate() {
        let _ = write!(out, "{i:3} |");
        for g in row {
            let p = g.perm;
            let _ = write!(out, " {}: ({}{}{}{}) |", g.tet, p[0], p[1], p[2], p[3]);
        }
        let _ = writeln!(out);
    }
    let edges = compute_edge_classes(t);
    let _ = writeln!(
        out,
        "edges: {} (valences: {})",
        edges.len(),
        edges.iter().map(|e| e.valence().to_string()).collect::<Vec<_>>().join(", ")
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::farey::{is_farey_neighbor, FareyError, MonodromyWord};

    fn word(s: &str) -> MonodromyWord {
        MonodromyWord::parse(s).unwrap()
    }

    fn build(s: &str) -> Triangulation {
        build_monodromy_triangulation(&word(s)).unwrap()
    }

    fn slope(p: i64, q: i64) -> Slope {
        Slope::new(p, q).unwrap()
    }

    #[test]
    fn elementary_move_examples() {
        let m0 = SurfaceMarking::initial();
        let mut s0 = m0.slopes();
        s0.sort();
        let mut expect0 = [slope(0, 1), slope(1, 0), slope(1, 1)];
        expect0.sort();
        assert_eq!(s0, expect0);

        let mut sr = elementary_move(m0, Letter::R).slopes();
        sr.sort();
        let mut er = [slope(1, 0), slope(1, 1), slope(2, 1)];
        er.sort();
        assert_eq!(sr, er);

        let mut sl = elementary_move(m0, Letter::L).slopes();
        sl.sort();
        let mut el = [slope(0, 1), slope(1, 1), slope(1, 2)];
        el.sort();
        assert_eq!(sl, el);
    }

    #[test]
    fn elementary_move_slopes_stay_neighbours() {
        let mut m = SurfaceMarking::initial();
        for letter in [Letter::R, Letter::L, Letter::L, Letter::R, Letter::L] {
            m = elementary_move(m, letter);
            assert!(m.is_valid());
            let s = m.slopes();
            assert!(is_farey_neighbor(s[0], s[1]));
            assert!(is_farey_neighbor(s[0], s[2]));
            assert!(is_farey_neighbor(s[1], s[2]));
        }
    }

    #[test]
    fn build_rejects_single_letter() {
        assert_eq!(
            build_monodromy_triangulation(&word("R")).unwrap_err(),
            TriangulationError::NotPseudoAnosov
        );
        assert!(matches!(MonodromyWord::parse(""), Err(FareyError::EmptyWord)));
    }

    #[test]
    fn figure_eight_complement() {
        let t = build("RL");
        assert_eq!(t.tet_count(), 2);
        assert!(t.check_involutive());
        let edges = compute_edge_classes(&t);
        assert_eq!(edges.len(), 2);
        let mut valences: Vec<usize> = edges.iter().map(|e| e.valence()).collect();
        valences.sort();
        assert_eq!(valences, vec![6, 6]);
    }

    #[test]
    fn euler_examples() {
        let r = euler_check(&build("RL")).unwrap();
        assert_eq!((r.e, r.f, r.p), (2, 4, 2));
        let r = euler_check(&build("RRL")).unwrap();
        assert_eq!((r.e, r.f, r.p), (3, 6, 3));
    }

    #[test]
    fn cusp_is_a_torus() {
        for w in ["RL", "RRL", "RRLL", "RLRLL", "-RL", "-RRLL"] {
            let t = build(w);
            let c = vertex_link(&t);
            assert_eq!(c.components, 1, "{w}");
            assert_eq!(c.euler, vec![0], "{w}");
        }
    }

    #[test]
    fn involution_exists_and_squares_to_identity() {
        for w in ["RL", "RRL", "RRLL", "RLRLL", "-RL"] {
            let t = build(w);
            let phi = find_involution(&t).unwrap();
            assert!(is_automorphism(&t, &phi), "{w}");
            assert!(phi.compose(&phi).is_identity(), "{w}");
            assert!(!phi.is_identity(), "{w}");
            // Lemma check: every edge class is mapped to itself.
            let edges = compute_edge_classes(&t);
            for e in &edges {
                let images: Vec<(usize, u8)> = e
                    .corners
                    .iter()
                    .map(|&(tet, ei)| {
                        let [a, b] = EDGE_ENDS[ei as usize];
                        let m = phi.vertex_maps[tet];
                        (phi.tet_map[tet], edge_index(m[a as usize], m[b as usize]))
                    })
                    .collect();
                let home = edges
                    .iter()
                    .position(|c| c.corners.contains(&images[0]))
                    .expect("image corner is in some class");
                assert_eq!(edges[home].corners.len(), e.corners.len());
                for im in &images {
                    assert!(edges[home].corners.contains(im), "{w}");
                }
                assert!(e.corners.contains(&images[0]), "edge class not invariant for {w}");
            }
        }
    }

    #[test]
    fn identity_is_always_an_automorphism() {
        let t = build("RRLL");
        assert!(is_automorphism(&t, &Automorphism::identity(4)));
    }

    #[test]
    fn isomorphism_basics() {
        let t1 = build("RL");
        assert!(are_isomorphic(&t1, &t1));
        assert!(are_isomorphic(&build("RRL"), &build("RLR")));
        assert!(!are_isomorphic(&t1, &build("RRLL")));
    }

    #[test]
    fn valences_at_least_three() {
        for w in ["RL", "RRL", "RLL", "RRLL", "RLRL", "RRRL", "RRLRLL"] {
            let t = build(w);
            for e in compute_edge_classes(&t) {
                assert!(e.valence() >= 3, "{w}: valence {}", e.valence());
            }
        }
    }

    #[test]
    fn negative_sign_builds() {
        let t = build("-RRL");
        assert!(t.check_involutive());
        assert!(euler_check(&t).is_ok());
    }

    #[test]
    fn export_is_deterministic() {
        let t = build("RRLL");
        let a = to_json(&t);
        let b = to_json(&build("RRLL"));
        assert_eq!(a, b);
        assert!(a.contains("\"word\": \"RRLL\""));
        assert!(to_text(&t).contains("word: RRLL"));
    }
}
