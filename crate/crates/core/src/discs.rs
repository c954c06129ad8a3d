//! Fairly normal discs in the truncated ideal tetrahedron: enumeration,
//! classification, the area functional, face compression detection, and
//! combinatorial Gauss-Bonnet for assembled surfaces.
//!
//! Truncating the four ideal vertices turns each face into a hexagon whose
//! sides alternate between boundary edges (on the vertex links) and
//! interior edges (the original edges), and turns each ideal vertex into a
//! boundary triangle. A disc type is recorded by the multiset of normal
//! arcs it traces on every face: hexagon arcs join distinct non-adjacent
//! sides (sides that do not share a hexagon corner), boundary faces carry
//! at most one arc (its endpoints may lie on one boundary edge or two).
//!
//! The enumerator works purely with boundary-curve combinatorics: a
//! candidate arc system is accepted when the slots on every edge pair up
//! into a single simple closed curve whose complementary discs both meet
//! the interior edges. Spanning discs exist automatically inside a ball,
//! so no three-dimensional reasoning is needed.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::angles::{rat_str, AngleAssignment};
use crate::simplex::{maximize, LpOutcome};
use crate::triangulation::{Triangulation, EDGE_ENDS};
use crate::{rat, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiscError {
    #[error("Gauss-Bonnet violated: total area {area} != -2 chi with chi = {chi}")]
    GaussBonnetViolation { area: String, chi: i64 },
    #[error("assembly is not closed: unmatched arc {0}")]
    UnmatchedArc(String),
}

// ---------------------------------------------------------------------
// The truncated tetrahedron
// ---------------------------------------------------------------------

/// Face cycles of the tetrahedron, coherently oriented (face `f` is
/// opposite vertex `f`, seen from outside).
pub const FACE_CYCLES: [[u8; 3]; 4] = [[1, 2, 3], [0, 3, 2], [0, 1, 3], [0, 2, 1]];

/// Interior edges have ids 0..6 (indexing [`EDGE_ENDS`]); boundary edges
/// have ids 6..18.
pub const INTERIOR_EDGES: usize = 6;
pub const EDGE_COUNT: usize = 18;

/// Id of the boundary edge where the link of vertex `v` meets face `f`.
pub fn boundary_edge(v: u8, f: u8) -> usize {
    debug_assert_ne!(v, f);
    let k = (0..4u8).filter(|x| *x != v).position(|x| x == f).unwrap();
    6 + v as usize * 3 + k
}

pub fn interior_edge(a: u8, b: u8) -> usize {
    EDGE_ENDS
        .iter()
        .position(|e| (e[0] == a && e[1] == b) || (e[0] == b && e[1] == a))
        .expect("distinct vertices")
}

/// A directed side of a face cycle: the edge id plus its endpoints, which
/// are truncation corners `(vertex, interior edge)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SideRef {
    pub edge: usize,
    pub from: (u8, usize),
    pub to: (u8, usize),
}

/// The boundary 2-complex: faces 0..4 are the hexagons (face `f` of the
/// tetrahedron), faces 4..8 the boundary triangles (vertex `face - 4`).
#[derive(Debug, Clone)]
pub struct TruncatedTetrahedron {
    pub faces: Vec<Vec<SideRef>>,
    /// Per edge id, its two (face, position) incidences; index 0 fixes the
    /// reference direction of the edge.
    pub edge_faces: Vec<[(usize, usize); 2]>,
}

static MODEL: OnceLock<TruncatedTetrahedron> = OnceLock::new();

pub fn model() -> &'static TruncatedTetrahedron {
    MODEL.get_or_init(build_model)
}

fn build_model() -> TruncatedTetrahedron {
    let mut faces: Vec<Vec<SideRef>> = Vec::with_capacity(8);
    for f in 0..4u8 {
        let [a, b, c] = FACE_CYCLES[f as usize];
        let eab = interior_edge(a, b);
        let ebc = interior_edge(b, c);
        let eca = interior_edge(c, a);
        faces.push(vec![
            SideRef { edge: boundary_edge(a, f), from: (a, eca), to: (a, eab) },
            SideRef { edge: eab, from: (a, eab), to: (b, eab) },
            SideRef { edge: boundary_edge(b, f), from: (b, eab), to: (b, ebc) },
            SideRef { edge: ebc, from: (b, ebc), to: (c, ebc) },
            SideRef { edge: boundary_edge(c, f), from: (c, ebc), to: (c, eca) },
            SideRef { edge: eca, from: (c, eca), to: (a, eca) },
        ]);
    }
    // Boundary triangles: the reversed boundary sides of the hexagons,
    // chained into cycles (this is forced by orientation coherence).
    for v in 0..4u8 {
        let mut pool: Vec<SideRef> = Vec::new();
        for f in 0..4 {
            for s in &faces[f] {
                if s.edge >= 6 && s.from.0 == v {
                    pool.push(SideRef { edge: s.edge, from: s.to, to: s.from });
                }
            }
        }
        assert_eq!(pool.len(), 3);
        let mut cycle = vec![pool.remove(0)];
        while !pool.is_empty() {
            let cur = cycle.last().unwrap().to;
            let k = pool.iter().position(|s| s.from == cur).expect("triangle closes");
            cycle.push(pool.remove(k));
        }
        assert_eq!(cycle.last().unwrap().to, cycle[0].from, "triangle cycle closes");
        faces.push(cycle);
    }
    let mut edge_faces: Vec<Vec<(usize, usize)>> = vec![Vec::new(); EDGE_COUNT];
    for (fi, f) in faces.iter().enumerate() {
        for (pos, s) in f.iter().enumerate() {
            edge_faces[s.edge].push((fi, pos));
        }
    }
    let edge_faces: Vec<[(usize, usize); 2]> = edge_faces
        .into_iter()
        .enumerate()
        .map(|(e, v)| {
            assert_eq!(v.len(), 2, "edge {e} lies on exactly two faces");
            let (f0, p0) = v[0];
            let (f1, p1) = v[1];
            let s0 = faces[f0][p0];
            let s1 = faces[f1][p1];
            assert_eq!(s0.from, s1.to, "opposite directions across edge {e}");
            assert_eq!(s0.to, s1.from, "opposite directions across edge {e}");
            [(f0, p0), (f1, p1)]
        })
        .collect();
    TruncatedTetrahedron { faces, edge_faces }
}

// ---------------------------------------------------------------------
// Disc types
// ---------------------------------------------------------------------

/// A boundary-curve pattern: arcs per face, by side positions within the
/// face cycle. Hexagon arcs are sorted pairs of non-adjacent positions;
/// each boundary triangle carries at most one arc (positions may coincide).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurvePattern {
    pub hex_arcs: [Vec<(u8, u8)>; 4],
    pub tri_arcs: [Option<(u8, u8)>; 4],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tag {
    VertexLink,
    Bigon,
    WeakBigon,
    Arclike,
    ModifiedVertexLink,
    FusedVertexLink,
    Generic,
}

/// A fairly normal disc type with its derived data.
#[derive(Debug, Clone)]
pub struct DiscType {
    pub pattern: CurvePattern,
    pub crossings: [u8; 6],
    pub boundary_arcs: u8,
    pub tag: Tag,
    pub face_compression: bool,
    /// For arclike types: whether some face compression lies off the
    /// associated-arc side. Equal to `face_compression` otherwise.
    pub compression_off_arc_side: bool,
}

/// The linear area functional of a disc type, in pi-units:
/// `sum crossings * (1 - theta) + boundary_arcs - 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AreaFunctional {
    pub crossings: [u8; 6],
    pub boundary_arcs: u8,
}

pub fn area_expr(d: &DiscType) -> AreaFunctional {
    AreaFunctional { crossings: d.crossings, boundary_arcs: d.boundary_arcs }
}

impl AreaFunctional {
    pub fn eval(&self, theta: &[Rat; 6]) -> Rat {
        let mut area = rat(self.boundary_arcs as i64 - 2, 1);
        for e in 0..6 {
            area += rat(self.crossings[e] as i64, 1) * (Rat::one() - theta[e].clone());
        }
        area
    }
}

// ---------------------------------------------------------------------
// Curve analysis: slots, pairing, regions
// ---------------------------------------------------------------------

/// One arc instance of a pattern.
#[derive(Debug, Clone, Copy)]
struct ArcInst {
    face: usize,
    sides: (u8, u8),
}

/// Per-region boundary items, in cyclic order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Item {
    /// Global edge-segment id: `3 * edge + index along the reference
    /// direction` (an edge with c slots has c + 1 segments).
    Seg(usize),
    /// An arc-instance id bordering the region.
    Chord(usize),
}

#[derive(Debug)]
struct Analysis {
    crossings: [u8; 6],
    boundary_arcs: u8,
    /// Per face, the regions of the face cut along the arcs; each region
    /// is its boundary cycle.
    face_regions: Vec<Vec<Vec<Item>>>,
    /// Global side (0 or 1) of every face region, flattened per face.
    region_side: Vec<Vec<usize>>,
    /// For each global segment id, the two (face, region) incidences.
    seg_regions: HashMap<usize, Vec<(usize, usize)>>,
    /// Whether each of the two global sides contains an interior-edge
    /// segment.
    side_has_interior: [bool; 2],
}

/// Analyze a pattern: pair slots along every edge and accept only single
/// simple closed curves; build the complementary region structure.
fn analyze(pattern: &CurvePattern) -> Option<Analysis> {
    let m = model();
    let mut arcs: Vec<ArcInst> = Vec::new();
    for (f, list) in pattern.hex_arcs.iter().enumerate() {
        for &sides in list {
            arcs.push(ArcInst { face: f, sides });
        }
    }
    for (v, a) in pattern.tri_arcs.iter().enumerate() {
        if let Some(sides) = *a {
            arcs.push(ArcInst { face: 4 + v, sides });
        }
    }
    if arcs.is_empty() {
        return None;
    }

    // Ordered slots per (face, position): arc-instance ends (2a, 2a+1).
    let mut slots: HashMap<(usize, u8), Vec<usize>> = HashMap::new();
    for (fi, face) in m.faces.iter().enumerate() {
        let len = face.len() as u8;
        for pos in 0..len {
            let mut ends: Vec<(u8, usize, usize)> = Vec::new(); // (d, arc, end)
            for (ai, a) in arcs.iter().enumerate() {
                if a.face != fi {
                    continue;
                }
                if a.sides.0 == pos {
                    ends.push(((a.sides.1 + len - pos) % len, ai, 0));
                }
                if a.sides.1 == pos {
                    ends.push(((a.sides.0 + len - pos) % len, ai, 1));
                }
            }
            if ends.is_empty() {
                continue;
            }
            // Along the side's direction: decreasing distance to the far
            // side; parallel copies ascend on the lower-numbered side and
            // descend on the other, which realizes the planar nesting.
            ends.sort_by(|x, y| {
                y.0.cmp(&x.0).then_with(|| {
                    let asc = pos < (pos + x.0) % len;
                    if asc {
                        x.1.cmp(&y.1)
                    } else {
                        y.1.cmp(&x.1)
                    }
                })
            });
            slots.insert((fi, pos), ends.iter().map(|&(_, a, e)| 2 * a + e).collect());
        }
    }

    // Pair slots across every edge (reference direction vs reversed).
    let empty: Vec<usize> = Vec::new();
    let mut partner: HashMap<usize, usize> = HashMap::new();
    let mut crossings = [0u8; 6];
    for e in 0..EDGE_COUNT {
        let [(f0, p0), (f1, p1)] = m.edge_faces[e];
        let s0 = slots.get(&(f0, p0 as u8)).unwrap_or(&empty);
        let s1 = slots.get(&(f1, p1 as u8)).unwrap_or(&empty);
        if s0.len() != s1.len() {
            return None;
        }
        if e < INTERIOR_EDGES {
            if s0.len() > 2 {
                return None;
            }
            crossings[e] = s0.len() as u8;
        }
        let c = s0.len();
        for k in 0..c {
            partner.insert(s0[k], s1[c - 1 - k]);
            partner.insert(s1[c - 1 - k], s0[k]);
        }
    }

    // Single closed curve: the graph with arc edges (2a)-(2a+1) and the
    // slot pairings must be one cycle.
    let total_ends = 2 * arcs.len();
    let mut seen = vec![false; total_ends];
    let mut cur = 0usize;
    let mut visited = 0usize;
    loop {
        if seen[cur] {
            break;
        }
        seen[cur] = true;
        visited += 1;
        let mate = cur ^ 1; // other end of the same arc
        if seen[mate] {
            break;
        }
        seen[mate] = true;
        visited += 1;
        cur = *partner.get(&mate)?;
    }
    if visited != total_ends {
        return None;
    }

    // Region decomposition of every face along its chords.
    let mut face_regions: Vec<Vec<Vec<Item>>> = Vec::new();
    for (fi, face) in m.faces.iter().enumerate() {
        let mut tokens: Vec<Token> = Vec::new();
        for (pos, s) in face.iter().enumerate() {
            let here = slots.get(&(fi, pos as u8)).unwrap_or(&empty);
            let n = here.len();
            // Segment j along this face's direction; convert to the
            // reference direction of the edge.
            let global = |j: usize| {
                if m.edge_faces[s.edge][0] == (fi, pos) {
                    3 * s.edge + j
                } else {
                    3 * s.edge + (n - j)
                }
            };
            tokens.push(Token::Seg(global(0)));
            for (j, &end) in here.iter().enumerate() {
                tokens.push(Token::Slot(end));
                tokens.push(Token::Seg(global(j + 1)));
            }
        }
        let mut regions = Vec::new();
        split_regions(&tokens, &mut regions);
        face_regions.push(regions);
    }

    // Glue face regions into global sides across shared segments.
    let mut flat: Vec<(usize, usize)> = Vec::new();
    for (fi, regs) in face_regions.iter().enumerate() {
        for ri in 0..regs.len() {
            flat.push((fi, ri));
        }
    }
    let idx_of = |fi: usize, ri: usize| flat.iter().position(|&x| x == (fi, ri)).unwrap();
    let mut seg_regions: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    for (fi, regs) in face_regions.iter().enumerate() {
        for (ri, reg) in regs.iter().enumerate() {
            for it in reg {
                if let Item::Seg(s) = it {
                    seg_regions.entry(*s).or_default().push((fi, ri));
                }
            }
        }
    }
    let mut parent: Vec<usize> = (0..flat.len()).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for regs in seg_regions.values() {
        debug_assert_eq!(regs.len(), 2, "every segment borders two face regions");
        let a = idx_of(regs[0].0, regs[0].1);
        let b = idx_of(regs[1].0, regs[1].1);
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    }
    let mut roots: Vec<usize> = Vec::new();
    for i in 0..flat.len() {
        let r = find(&mut parent, i);
        if !roots.contains(&r) {
            roots.push(r);
        }
    }
    if roots.len() != 2 {
        // A simple closed curve on the sphere has exactly two sides; any
        // other count means the pattern is not a simple curve.
        return None;
    }
    let mut region_side: Vec<Vec<usize>> = face_regions.iter().map(|r| vec![0; r.len()]).collect();
    for (i, &(fi, ri)) in flat.iter().enumerate() {
        let r = find(&mut parent, i);
        region_side[fi][ri] = roots.iter().position(|&x| x == r).unwrap();
    }
    let mut side_has_interior = [false; 2];
    for (s, regs) in &seg_regions {
        if s / 3 < INTERIOR_EDGES {
            side_has_interior[region_side[regs[0].0][regs[0].1]] = true;
        }
    }

    let boundary_arcs = pattern.tri_arcs.iter().flatten().count() as u8;
    Some(Analysis {
        crossings,
        boundary_arcs,
        face_regions,
        region_side,
        seg_regions,
        side_has_interior,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Token {
    Seg(usize),
    Slot(usize),
}

/// Recursively cut a face's boundary token cycle along its chords (the
/// arcs are mutually non-crossing, so each chord splits cleanly). A slot
/// token whose partner slot has already been consumed acts as the chord
/// border item of its region.
fn split_regions(tokens: &[Token], out: &mut Vec<Vec<Item>>) {
    // Find a chord with both ends present; else emit the region.
    let slot_arcs: Vec<(usize, usize)> = tokens
        .iter()
        .enumerate()
        .filter_map(|(k, t)| match t {
            Token::Slot(e) => Some((k, e / 2)),
            _ => None,
        })
        .collect();
    let mut split_at: Option<(usize, usize, usize)> = None;
    for (k, a) in &slot_arcs {
        if let Some((k2, _)) =
            slot_arcs.iter().find(|(k2, a2)| k2 > k && a2 == a)
        {
            split_at = Some((*k, *k2, *a));
            break;
        }
    }
    match split_at {
        None => {
            out.push(
                tokens
                    .iter()
                    .map(|t| match t {
                        Token::Seg(s) => Item::Seg(*s),
                        Token::Slot(e) => Item::Chord(e / 2),
                    })
                    .collect(),
            );
        }
        Some((i, j, arc)) => {
            let mut inner = tokens[i + 1..j].to_vec();
            inner.push(Token::Slot(2 * arc));
            let mut outer = tokens[j + 1..].to_vec();
            outer.extend_from_slice(&tokens[..i]);
            outer.push(Token::Slot(2 * arc));
            split_regions(&inner, out);
            split_regions(&outer, out);
        }
    }
}

// ---------------------------------------------------------------------
// Face compression search
// ---------------------------------------------------------------------

/// Collect the interior-segment content reachable from the given boundary
/// interval without re-entering the visited regions or crossing the curve.
fn interval_has_interior(
    an: &Analysis,
    interval: &[Item],
    visited: &mut Vec<(usize, usize)>,
    skip_seg: Option<usize>,
) -> bool {
    let mut stack: Vec<usize> = Vec::new();
    for it in interval {
        if let Item::Seg(s) = it {
            if Some(*s) == skip_seg {
                continue;
            }
            if *s / 3 < INTERIOR_EDGES {
                return true;
            }
            stack.push(*s);
        }
    }
    while let Some(s) = stack.pop() {
        for &(fi, ri) in &an.seg_regions[&s] {
            if visited.contains(&(fi, ri)) {
                continue;
            }
            visited.push((fi, ri));
            for it in &an.face_regions[fi][ri] {
                if let Item::Seg(s2) = it {
                    if Some(*s2) == skip_seg {
                        continue;
                    }
                    if *s2 / 3 < INTERIOR_EDGES {
                        return true;
                    }
                    stack.push(*s2);
                }
            }
        }
    }
    false
}

/// Cyclic interval of `cycle` strictly between positions `i` and `j`.
fn cyc_between(cycle: &[Item], i: usize, j: usize) -> Vec<Item> {
    let n = cycle.len();
    let mut out = Vec::new();
    let mut k = (i + 1) % n;
    while k != j {
        out.push(cycle[k]);
        k = (k + 1) % n;
    }
    out
}

/// Search for face compression discs: an arc on the truncated boundary,
/// disjoint from the interior edges, in one hexagon plus at most one
/// boundary face, joining two curve points and not boundary-parallel to
/// either curve subarc it cuts off. Returns, per global side, whether a
/// compression exists there.
fn compression_sides(an: &Analysis) -> [bool; 2] {
    let mut found = [false; 2];
    for fi in 0..4usize {
        for (ri, reg) in an.face_regions[fi].iter().enumerate() {
            let side = an.region_side[fi][ri];
            if found[side] {
                continue;
            }
            let chords: Vec<usize> = reg
                .iter()
                .enumerate()
                .filter_map(|(k, it)| match it {
                    Item::Chord(_) => Some(k),
                    _ => None,
                })
                .collect();
            // Arc within the hexagon region, between two distinct chords.
            for a in 0..chords.len() {
                for b in a + 1..chords.len() {
                    let i1 = cyc_between(reg, chords[a], chords[b]);
                    let i2 = cyc_between(reg, chords[b], chords[a]);
                    let mut v1 = vec![(fi, ri)];
                    let mut v2 = vec![(fi, ri)];
                    if interval_has_interior(an, &i1, &mut v1, None)
                        && interval_has_interior(an, &i2, &mut v2, None)
                    {
                        found[side] = true;
                    }
                }
            }
            if found[side] {
                continue;
            }
            // Arc extending across one boundary-edge segment into a
            // boundary-face region, ending on a chord there.
            for (k_sigma, it) in reg.iter().enumerate() {
                let Item::Seg(sigma) = it else { continue };
                if sigma / 3 < INTERIOR_EDGES {
                    continue;
                }
                let other = an.seg_regions[sigma]
                    .iter()
                    .copied()
                    .find(|&(f2, r2)| (f2, r2) != (fi, ri));
                let Some((ft, rt)) = other else { continue };
                if ft < 4 {
                    continue; // boundary edges always border one triangle
                }
                let treg = &an.face_regions[ft][rt];
                let k_sigma_t =
                    treg.iter().position(|x| *x == Item::Seg(*sigma)).expect("shared segment");
                let tchords: Vec<usize> = treg
                    .iter()
                    .enumerate()
                    .filter_map(|(k, it)| match it {
                        Item::Chord(_) => Some(k),
                        _ => None,
                    })
                    .collect();
                for &kc1 in &chords {
                    for &kc2 in &tchords {
                        // Theta regions: (c1 -> sigma) u (sigma -> c2) and
                        // the complementary halves.
                        let a1 = cyc_between(reg, kc1, k_sigma);
                        let b1 = cyc_between(treg, k_sigma_t, kc2);
                        let a2 = cyc_between(reg, k_sigma, kc1);
                        let b2 = cyc_between(treg, kc2, k_sigma_t);
                        let mut v1 = vec![(fi, ri), (ft, rt)];
                        let mut v2 = vec![(fi, ri), (ft, rt)];
                        let r1 = interval_has_interior(an, &a1, &mut v1, Some(*sigma))
                            || interval_has_interior(an, &b1, &mut v1, Some(*sigma));
                        let r2 = interval_has_interior(an, &a2, &mut v2, Some(*sigma))
                            || interval_has_interior(an, &b2, &mut v2, Some(*sigma));
                        if r1 && r2 {
                            found[side] = true;
                        }
                    }
                }
            }
        }
    }
    found
}

pub fn has_face_compression(d: &DiscType) -> (bool, bool) {
    (d.face_compression, d.compression_off_arc_side)
}

// ---------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------

fn vertex_link_pattern(v: u8) -> CurvePattern {
    let m = model();
    let mut hex_arcs: [Vec<(u8, u8)>; 4] = Default::default();
    for f in 0..4u8 {
        if f == v {
            continue;
        }
        let face = &m.faces[f as usize];
        let ps: Vec<u8> = (0..6u8)
            .filter(|&p| {
                let e = face[p as usize].edge;
                e < INTERIOR_EDGES && EDGE_ENDS[e].contains(&v)
            })
            .collect();
        assert_eq!(ps.len(), 2);
        hex_arcs[f as usize].push((ps[0].min(ps[1]), ps[0].max(ps[1])));
    }
    CurvePattern { hex_arcs, tri_arcs: Default::default() }
}

fn bigon_pattern(e: usize) -> CurvePattern {
    let m = model();
    let [a, b] = EDGE_ENDS[e];
    let mut hex_arcs: [Vec<(u8, u8)>; 4] = Default::default();
    for &(f, pos) in &m.edge_faces[e] {
        let lo = ((pos + 5) % 6) as u8;
        let hi = ((pos + 1) % 6) as u8;
        hex_arcs[f].push((lo.min(hi), lo.max(hi)));
    }
    let mut tri_arcs: [Option<(u8, u8)>; 4] = Default::default();
    for v in [a, b] {
        let tri = &m.faces[4 + v as usize];
        let ps: Vec<u8> = (0..3u8)
            .filter(|&p| {
                let be = tri[p as usize].edge;
                m.edge_faces[e].iter().any(|&(f, _)| be == boundary_edge(v, f as u8))
            })
            .collect();
        assert_eq!(ps.len(), 2);
        tri_arcs[v as usize] = Some((ps[0].min(ps[1]), ps[0].max(ps[1])));
    }
    CurvePattern { hex_arcs, tri_arcs }
}

/// All arclike patterns, found by walking associated arcs: paths over the
/// hexagons entering and leaving through non-adjacent sides, starting and
/// ending on boundary edges of distinct boundary faces, crossing each
/// interior edge at most once (and at least one, else the disc is a weak
/// bigon and not fairly normal).
fn arclike_patterns() -> &'static HashMap<CurvePattern, ()> {
    static TABLE: OnceLock<HashMap<CurvePattern, ()>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let m = model();
        let mut out = HashMap::new();
        // DFS state: current hexagon + entry side position.
        fn go(
            m: &TruncatedTetrahedron,
            start_vertex: u8,
            f: usize,
            entry: u8,
            crossed: &mut Vec<usize>,
            arcs: &mut Vec<(usize, (u8, u8))>,
            out: &mut HashMap<CurvePattern, ()>,
        ) {
            for exit in 0..6u8 {
                let dist = (exit + 6 - entry) % 6;
                if !(2..=4).contains(&dist) {
                    continue;
                }
                let new_arc = (f, (entry.min(exit), entry.max(exit)));
                // The arc must not cross earlier arcs of the path in this
                // hexagon (the associated arc is embedded).
                if arcs.iter().any(|&(f2, t)| f2 == f && crosses(t, new_arc.1)) {
                    continue;
                }
                arcs.push(new_arc);
                let side = m.faces[f][exit as usize];
                if side.edge >= INTERIOR_EDGES {
                    // Ends on a boundary edge: record if the boundary faces
                    // differ and the path crossed an interior edge.
                    let end_vertex = side.from.0;
                    if end_vertex != start_vertex && !crossed.is_empty() {
                        if let Some(p) = doubled_pattern(m, start_vertex, end_vertex, arcs) {
                            out.insert(p, ());
                        }
                    }
                } else if !crossed.contains(&side.edge) {
                    crossed.push(side.edge);
                    let (f2, p2) = m.edge_faces[side.edge]
                        .iter()
                        .copied()
                        .find(|&(f2, p2)| (f2, p2) != (f, exit as usize))
                        .unwrap();
                    go(m, start_vertex, f2, p2 as u8, crossed, arcs, out);
                    crossed.pop();
                }
                arcs.pop();
            }
        }
        for v in 0..4u8 {
            for f in 0..4u8 {
                if v == f {
                    continue;
                }
                let be = boundary_edge(v, f);
                let pos = (0..6u8)
                    .find(|&p| m.faces[f as usize][p as usize].edge == be)
                    .unwrap();
                let mut crossed = Vec::new();
                let mut arcs = Vec::new();
                go(m, v, f as usize, pos, &mut crossed, &mut arcs, &mut out);
            }
        }
        out
    })
}

fn crosses(a: (u8, u8), b: (u8, u8)) -> bool {
    // Strict interleaving of sorted position pairs on a cycle.
    (a.0 < b.0 && b.0 < a.1 && a.1 < b.1) || (b.0 < a.0 && a.0 < b.1 && b.1 < a.1)
}

/// The boundary curve of a neighbourhood of an associated arc: every
/// hexagon arc doubled plus one same-edge cap in each endpoint's boundary
/// face. `None` if the doubled system violates the side caps.
fn doubled_pattern(
    m: &TruncatedTetrahedron,
    start_vertex: u8,
    end_vertex: u8,
    arcs: &[(usize, (u8, u8))],
) -> Option<CurvePattern> {
    let mut hex_arcs: [Vec<(u8, u8)>; 4] = Default::default();
    for &(f, t) in arcs {
        hex_arcs[f].push(t);
        hex_arcs[f].push(t);
    }
    for list in hex_arcs.iter_mut() {
        list.sort();
    }
    // Side caps: at most two endpoints per side.
    for (f, list) in hex_arcs.iter().enumerate() {
        for pos in 0..6u8 {
            let k = list.iter().filter(|t| t.0 == pos || t.1 == pos).count();
            if k > 2 {
                return None;
            }
            let _ = f;
        }
    }
    let mut tri_arcs: [Option<(u8, u8)>; 4] = Default::default();
    // The cap sits on the boundary edge that carries the path's endpoint:
    // the first arc's start side and the last arc's end side.
    let first = arcs.first().unwrap();
    let last = arcs.last().unwrap();
    for (v, &(f, t)) in [(start_vertex, first), (end_vertex, last)] {
        // Which endpoint of the arc lies on a boundary edge of face v's
        // triangle.
        let tri = &m.faces[4 + v as usize];
        let mut placed = false;
        for p in [t.0, t.1] {
            let e = m.faces[f][p as usize].edge;
            if e >= INTERIOR_EDGES {
                if let Some(tp) = (0..3u8).find(|&q| tri[q as usize].edge == e) {
                    if tri_arcs[v as usize].is_some() {
                        return None;
                    }
                    tri_arcs[v as usize] = Some((tp, tp));
                    placed = true;
                    break;
                }
            }
        }
        if !placed {
            return None;
        }
    }
    Some(CurvePattern { hex_arcs, tri_arcs })
}

/// The link of vertex `v` after sliding its crossing with each edge in
/// `slides` off the far end of the edge into that vertex's boundary
/// triangle (the normalized form of a modified vertex link: its interior
/// arcs run from an interior edge to a boundary edge).
fn modified_vertex_link_pattern(v: u8, slides: &[u8]) -> CurvePattern {
    let m = model();
    let mut hex_arcs: [Vec<(u8, u8)>; 4] = Default::default();
    let mut tri_ends: [Vec<u8>; 4] = Default::default();
    for f in 0..4u8 {
        if f == v {
            continue;
        }
        // The corner arc of the link at v, with slid endpoints rerouted to
        // the far vertex's boundary side.
        let face = &m.faces[f as usize];
        let mut ends: Vec<u8> = Vec::new();
        for p in 0..6u8 {
            let e = face[p as usize].edge;
            if e >= INTERIOR_EDGES || !EDGE_ENDS[e].contains(&v) {
                continue;
            }
            let u = if EDGE_ENDS[e][0] == v { EDGE_ENDS[e][1] } else { EDGE_ENDS[e][0] };
            if slides.contains(&u) {
                let q = (0..6u8)
                    .find(|&q| face[q as usize].edge == boundary_edge(u, f))
                    .unwrap();
                ends.push(q);
                tri_ends[u as usize].push(boundary_edge(u, f) as u8);
            } else {
                ends.push(p);
            }
        }
        assert_eq!(ends.len(), 2);
        hex_arcs[f as usize].push((ends[0].min(ends[1]), ends[0].max(ends[1])));
    }
    let mut tri_arcs: [Option<(u8, u8)>; 4] = Default::default();
    for u in 0..4usize {
        if tri_ends[u].is_empty() {
            continue;
        }
        assert_eq!(tri_ends[u].len(), 2);
        let tri = &m.faces[4 + u];
        let ps: Vec<u8> = tri_ends[u]
            .iter()
            .map(|&be| (0..3u8).find(|&q| tri[q as usize].edge == be as usize).unwrap())
            .collect();
        tri_arcs[u] = Some((ps[0].min(ps[1]), ps[0].max(ps[1])));
    }
    CurvePattern { hex_arcs, tri_arcs }
}

/// Fusing two vertex links along an arc in an interior face and
/// normalizing (pushing the resulting same-edge arc across their common
/// edge) yields the quadrilateral pattern separating the two vertices
/// from the other two: the arc in face `f` cuts off the partner of `f`.
fn fused_vertex_link_pattern(partner: [u8; 4]) -> CurvePattern {
    let m = model();
    let mut hex_arcs: [Vec<(u8, u8)>; 4] = Default::default();
    for f in 0..4u8 {
        let w = partner[f as usize];
        let face = &m.faces[f as usize];
        let ps: Vec<u8> = (0..6u8)
            .filter(|&p| {
                let e = face[p as usize].edge;
                e < INTERIOR_EDGES && EDGE_ENDS[e].contains(&w)
            })
            .collect();
        assert_eq!(ps.len(), 2);
        hex_arcs[f as usize].push((ps[0].min(ps[1]), ps[0].max(ps[1])));
    }
    CurvePattern { hex_arcs, tri_arcs: Default::default() }
}

/// Deterministic tag by exact match against the constructed patterns of
/// each named family; generic otherwise. A fairly normal weak bigon is a
/// bigon, so the weak-bigon tag never appears here.
pub fn classify(pattern: &CurvePattern, _crossings: &[u8; 6], _boundary_arcs: u8) -> Tag {
    for v in 0..4u8 {
        if *pattern == vertex_link_pattern(v) {
            return Tag::VertexLink;
        }
    }
    for e in 0..INTERIOR_EDGES {
        if *pattern == bigon_pattern(e) {
            return Tag::Bigon;
        }
    }
    if arclike_patterns().contains_key(pattern) {
        return Tag::Arclike;
    }
    for partner in [[1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]] {
        if *pattern == fused_vertex_link_pattern(partner) {
            return Tag::FusedVertexLink;
        }
    }
    for v in 0..4u8 {
        let others: Vec<u8> = (0..4u8).filter(|&u| u != v).collect();
        for i in 0..3 {
            if *pattern == modified_vertex_link_pattern(v, &[others[i]]) {
                return Tag::ModifiedVertexLink;
            }
            for j in i + 1..3 {
                if *pattern == modified_vertex_link_pattern(v, &[others[i], others[j]]) {
                    return Tag::ModifiedVertexLink;
                }
            }
        }
    }
    Tag::Generic
}

// ---------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------

#[derive(Debug, Clone)]
struct HexConfig {
    arcs: Vec<(u8, u8)>,
    side_counts: [u8; 6],
}

/// All admissible arc multisets in one hexagon: pairwise non-crossing, at
/// most two endpoints per side.
fn hex_configs() -> &'static Vec<HexConfig> {
    static CONFIGS: OnceLock<Vec<HexConfig>> = OnceLock::new();
    CONFIGS.get_or_init(|| {
        let types: Vec<(u8, u8)> = {
            let mut t = Vec::new();
            for p in 0..6u8 {
                for q in p + 1..6 {
                    let d = (q - p).min(6 - (q - p));
                    if d >= 2 {
                        t.push((p, q));
                    }
                }
            }
            t
        };
        let mut out = Vec::new();
        fn go(
            types: &[(u8, u8)],
            k: usize,
            arcs: &mut Vec<(u8, u8)>,
            counts: &mut [u8; 6],
            out: &mut Vec<HexConfig>,
        ) {
            if k == types.len() {
                out.push(HexConfig { arcs: arcs.clone(), side_counts: *counts });
                return;
            }
            let t = types[k];
            go(types, k + 1, arcs, counts, out);
            let mut pushed = 0u8;
            for _mult in 1..=2u8 {
                if counts[t.0 as usize] + 1 > 2
                    || counts[t.1 as usize] + 1 > 2
                    || arcs.iter().any(|&a| crosses(a, t))
                {
                    break;
                }
                arcs.push(t);
                counts[t.0 as usize] += 1;
                counts[t.1 as usize] += 1;
                pushed += 1;
                go(types, k + 1, arcs, counts, out);
            }
            for _ in 0..pushed {
                arcs.pop();
                counts[t.0 as usize] -= 1;
                counts[t.1 as usize] -= 1;
            }
        }
        let mut arcs = Vec::new();
        let mut counts = [0u8; 6];
        go(&types, 0, &mut arcs, &mut counts, &mut out);
        out
    })
}

/// Exhaustive, duplicate-free enumeration of the fairly normal disc types
/// of the truncated tetrahedron.
pub fn enumerate_fairly_normal_types() -> Vec<DiscType> {
    let m = model();
    let cfgs = hex_configs();
    // Position of interior edge e in each of its two hexagons.
    let int_pos: Vec<[(usize, usize); 2]> =
        (0..INTERIOR_EDGES).map(|e| m.edge_faces[e]).collect();
    // Position of each boundary edge (v, f) in hexagon f and triangle v.
    let tri_side = |v: usize, p: u8| -> (usize, u8) {
        // hexagon side (face f, position p) -> triangle side position
        let e = m.faces[v][p as usize].edge;
        let tv = e - 6; // boundary edge id encodes its vertex
        let vert = tv / 3;
        let q = (0..3u8).find(|&q| m.faces[4 + vert][q as usize].edge == e).unwrap();
        (vert, q)
    };

    let mut out: Vec<DiscType> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    enumerate_rec(m, cfgs, &int_pos, &tri_side, &mut stack, &mut out);
    out.sort_by(|a, b| {
        (a.crossings, a.boundary_arcs, &a.pattern).cmp(&(b.crossings, b.boundary_arcs, &b.pattern))
    });
    out
}

fn enumerate_rec(
    m: &TruncatedTetrahedron,
    cfgs: &[HexConfig],
    int_pos: &[[(usize, usize); 2]],
    tri_side: &dyn Fn(usize, u8) -> (usize, u8),
    chosen: &mut Vec<usize>,
    out: &mut Vec<DiscType>,
) {
    if chosen.len() == 4 {
        finish_candidate(m, cfgs, tri_side, chosen, out);
        return;
    }
    let f = chosen.len();
    'cfg: for (ci, cfg) in cfgs.iter().enumerate() {
        // Interior-edge compatibility with already-chosen hexagons.
        for e in 0..INTERIOR_EDGES {
            let [(f0, p0), (f1, p1)] = int_pos[e];
            let (fa, pa, fb, pb) =
                if f0 == f { (f0, p0, f1, p1) } else if f1 == f { (f1, p1, f0, p0) } else { continue };
            let _ = fa;
            if fb < f {
                if cfg.side_counts[pa] != cfgs[chosen[fb]].side_counts[pb] {
                    continue 'cfg;
                }
            }
        }
        chosen.push(ci);
        // Triangle feasibility for every triangle whose three host
        // hexagons are all chosen.
        let mut ok = true;
        for v in 0..4usize {
            let hosts: Vec<usize> = (0..4).filter(|&g| g != v).collect();
            if hosts.iter().all(|&g| g < chosen.len()) {
                if tri_arc_for(m, cfgs, chosen, v).is_none() {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            enumerate_rec(m, cfgs, int_pos, tri_side, chosen, out);
        }
        chosen.pop();
    }
}

/// The forced boundary-face arc of triangle `v` given the hexagon
/// configurations, or `None` (inner) if infeasible; `Some(None)` is a
/// triangle with no arc.
fn tri_arc_for(
    m: &TruncatedTetrahedron,
    cfgs: &[HexConfig],
    chosen: &[usize],
    v: usize,
) -> Option<Option<(u8, u8)>> {
    let tri = &m.faces[4 + v];
    let mut counts = [0u8; 3];
    for q in 0..3usize {
        let e = tri[q].edge;
        let (f, p) = m.edge_faces[e]
            .iter()
            .copied()
            .find(|&(f, _)| f < 4)
            .expect("boundary edge borders one hexagon");
        counts[q] = cfgs[chosen[f]].side_counts[p];
    }
    let total: u8 = counts.iter().sum();
    match total {
        0 => Some(None),
        2 => {
            if counts.iter().any(|&c| c == 2) {
                let q = counts.iter().position(|&c| c == 2).unwrap() as u8;
                Some(Some((q, q)))
            } else {
                let qs: Vec<u8> =
                    (0..3u8).filter(|&q| counts[q as usize] == 1).collect();
                Some(Some((qs[0], qs[1])))
            }
        }
        _ => None,
    }
}

fn finish_candidate(
    m: &TruncatedTetrahedron,
    cfgs: &[HexConfig],
    _tri_side: &dyn Fn(usize, u8) -> (usize, u8),
    chosen: &[usize],
    out: &mut Vec<DiscType>,
) {
    let mut tri_arcs: [Option<(u8, u8)>; 4] = Default::default();
    for v in 0..4usize {
        match tri_arc_for(m, cfgs, chosen, v) {
            Some(a) => tri_arcs[v] = a,
            None => return,
        }
    }
    let hex_arcs: [Vec<(u8, u8)>; 4] =
        std::array::from_fn(|f| cfgs[chosen[f]].arcs.clone());
    let pattern = CurvePattern { hex_arcs, tri_arcs };
    let Some(an) = analyze(&pattern) else {
        return;
    };
    // Fourth bullet: neither complementary disc may be disjoint from the
    // interior edges.
    if an.crossings.iter().all(|&c| c == 0)
        && !(an.side_has_interior[0] && an.side_has_interior[1])
    {
        return;
    }
    let tag = classify(&pattern, &an.crossings, an.boundary_arcs);
    let comp = compression_sides(&an);
    let face_compression = comp[0] || comp[1];
    let compression_off_arc_side = if tag == Tag::Arclike {
        // The associated-arc side holds the middle segment of a
        // doubly-crossed interior edge.
        let e = (0..INTERIOR_EDGES).find(|&e| an.crossings[e] == 2).expect("arclike crosses");
        let seg = 3 * e + 1;
        let (fi, ri) = an.seg_regions[&seg][0];
        let arc_side = an.region_side[fi][ri];
        comp[1 - arc_side]
    } else {
        face_compression
    };
    out.push(DiscType {
        pattern,
        crossings: an.crossings,
        boundary_arcs: an.boundary_arcs,
        tag,
        face_compression,
        compression_off_arc_side,
    });
}

// ---------------------------------------------------------------------
// Area minimization over the local angle polytope
// ---------------------------------------------------------------------

fn polytope_rows() -> (Vec<Vec<Rat>>, Vec<Rat>) {
    let mut rows = Vec::new();
    for v in 0..4u8 {
        let mut row = vec![Rat::zero(); 6];
        for e in 0..6 {
            if EDGE_ENDS[e].contains(&v) {
                row[e] = Rat::one();
            }
        }
        rows.push(row);
    }
    (rows, vec![Rat::one(); 4])
}

fn extremize_crossing_sum(crossings: &[u8; 6], max: bool) -> Rat {
    let (rows, rhs) = polytope_rows();
    let sign = if max { 1 } else { -1 };
    let obj: Vec<Rat> = crossings.iter().map(|&c| rat(sign * c as i64, 1)).collect();
    match maximize(&rows, &rhs, &obj) {
        LpOutcome::Optimal { value, .. } => {
            if max {
                value
            } else {
                -value
            }
        }
        other => unreachable!("the closed angle polytope is nonempty and bounded: {other:?}"),
    }
}

/// Exact minimum of the area functional over the closure of the single
/// tetrahedron angle polytope (vertex equalities, angles in `[0, 1]`).
pub fn min_area_over_polytope(d: &DiscType) -> Rat {
    let af = area_expr(d);
    let c_sum: i64 = af.crossings.iter().map(|&c| c as i64).sum();
    rat(c_sum + af.boundary_arcs as i64 - 2, 1) - extremize_crossing_sum(&af.crossings, true)
}

/// Exact maximum of the area functional over the closed polytope. With
/// [`min_area_over_polytope`] this decides whether the functional vanishes
/// at an interior point: a non-negative linear functional is zero
/// somewhere in the open polytope iff it is identically zero.
pub fn max_area_over_polytope(d: &DiscType) -> Rat {
    let af = area_expr(d);
    let c_sum: i64 = af.crossings.iter().map(|&c| c as i64).sum();
    rat(c_sum + af.boundary_arcs as i64 - 2, 1) - extremize_crossing_sum(&af.crossings, false)
}

// ---------------------------------------------------------------------
// Surface assemblies and Gauss-Bonnet
// ---------------------------------------------------------------------

/// A disc piece living in one tetrahedron. Both kinds cross each interior
/// edge at most once, and their arc in face `f` cuts off a single vertex:
/// the linked vertex for a vertex link, the partner of `f` for a quad.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PieceKind {
    VertexLink(u8),
    /// A quadrilateral disc avoiding the two opposite edges `{a,b}` and
    /// `{c,d}` of its partition, stored as the partner of each vertex.
    Quad([u8; 4]),
}

impl PieceKind {
    /// The vertex cut off by this piece's arc in face `f`, if any.
    fn cutoff(&self, f: u8) -> Option<u8> {
        match self {
            PieceKind::VertexLink(v) => {
                if *v == f {
                    None
                } else {
                    Some(*v)
                }
            }
            PieceKind::Quad(partner) => Some(partner[f as usize]),
        }
    }

    fn kind_class(&self) -> u8 {
        match self {
            PieceKind::VertexLink(_) => 0,
            PieceKind::Quad(_) => 1,
        }
    }

    fn crossings(&self) -> [u8; 6] {
        match self {
            PieceKind::VertexLink(v) => {
                std::array::from_fn(|e| EDGE_ENDS[e].contains(v) as u8)
            }
            PieceKind::Quad(partner) => std::array::from_fn(|e| {
                let [a, b] = EDGE_ENDS[e];
                (partner[a as usize] != b) as u8
            }),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SurfaceAssembly {
    pub pieces: Vec<(usize, PieceKind)>,
}

impl SurfaceAssembly {
    pub fn union(mut self, other: SurfaceAssembly) -> SurfaceAssembly {
        self.pieces.extend(other.pieces);
        self
    }
}

/// One vertex link per tetrahedron ideal vertex: the canonical closed
/// fairly normal surface, a copy of the cusp torus.
pub fn assemble_vertex_link_surface(t: &Triangulation) -> SurfaceAssembly {
    let mut pieces = Vec::new();
    for tet in 0..t.tet_count() {
        for v in 0..4u8 {
            pieces.push((tet, PieceKind::VertexLink(v)));
        }
    }
    SurfaceAssembly { pieces }
}

/// All closed surfaces made of one quadrilateral per tetrahedron, found by
/// propagating the arc-matching constraints across every gluing.
pub fn find_quad_assemblies(t: &Triangulation) -> Vec<SurfaceAssembly> {
    let n = t.tet_count();
    let partitions: [[u8; 4]; 3] = [[1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]];
    let mut found = Vec::new();
    'seed: for seed in partitions {
        let mut choice: Vec<Option<[u8; 4]>> = vec![None; n];
        choice[0] = Some(seed);
        let mut queue = vec![0usize];
        while let Some(s) = queue.pop() {
            let part = choice[s].unwrap();
            for f in 0..4u8 {
                let g = &t.gluings[s][f as usize];
                // Arc in face f cuts off partner(f); across the gluing the
                // image must cut off perm(partner(f)) in face perm(f).
                let v = part[f as usize];
                let f2 = g.perm[f as usize];
                let v2 = g.perm[v as usize];
                let forced = partitions
                    .iter()
                    .copied()
                    .find(|p| p[f2 as usize] == v2)
                    .expect("a pair determines the partition");
                match choice[g.tet] {
                    None => {
                        choice[g.tet] = Some(forced);
                        queue.push(g.tet);
                    }
                    Some(existing) => {
                        if existing != forced {
                            continue 'seed;
                        }
                    }
                }
            }
        }
        if choice.iter().all(|c| c.is_some()) {
            found.push(SurfaceAssembly {
                pieces: choice
                    .into_iter()
                    .enumerate()
                    .map(|(tet, p)| (tet, PieceKind::Quad(p.unwrap())))
                    .collect(),
            });
        }
    }
    found
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussBonnetReport {
    pub faces: usize,
    pub edges: usize,
    pub vertices: usize,
    pub chi: i64,
    pub total_area: Rat,
}

/// Match the assembly's arcs across every gluing, compute the cell
/// structure of the assembled surface, and verify `sum of areas = -2 chi`
/// exactly.
pub fn gauss_bonnet_check(
    t: &Triangulation,
    s: &SurfaceAssembly,
    a: &AngleAssignment,
) -> Result<GaussBonnetReport, DiscError> {
    // Arcs: (piece index, face, cutoff vertex).
    let mut arcs: Vec<(usize, u8, u8)> = Vec::new();
    for (pi, &(_, kind)) in s.pieces.iter().enumerate() {
        for f in 0..4u8 {
            if let Some(v) = kind.cutoff(f) {
                arcs.push((pi, f, v));
            }
        }
    }
    // Match arcs across gluings by (target tet, face, cutoff, kind class).
    let key = |pi: usize, f: u8, v: u8| {
        (s.pieces[pi].0, f, v, s.pieces[pi].1.kind_class())
    };
    let mut buckets: HashMap<(usize, u8, u8, u8), Vec<usize>> = HashMap::new();
    for (ai, &(pi, f, v)) in arcs.iter().enumerate() {
        buckets.entry(key(pi, f, v)).or_default().push(ai);
    }
    let mut partner: Vec<Option<usize>> = vec![None; arcs.len()];
    for (ai, &(pi, f, v)) in arcs.iter().enumerate() {
        if partner[ai].is_some() {
            continue;
        }
        let (tet, _) = s.pieces[pi];
        let g = &t.gluings[tet][f as usize];
        let tkey = (g.tet, g.perm[f as usize], g.perm[v as usize], s.pieces[pi].1.kind_class());
        let mine = &buckets[&key(pi, f, v)];
        let theirs = buckets
            .get(&tkey)
            .ok_or_else(|| DiscError::UnmatchedArc(format!("{:?}", (pi, f, v))))?;
        if mine.len() != theirs.len() {
            return Err(DiscError::UnmatchedArc(format!("{:?}", (pi, f, v))));
        }
        let my_rank = mine.iter().position(|&x| x == ai).unwrap();
        let other = theirs[my_rank];
        partner[ai] = Some(other);
        partner[other] = Some(ai);
    }
    let edges = arcs.len() / 2;
    if arcs.len() % 2 != 0 {
        return Err(DiscError::UnmatchedArc("odd arc count".into()));
    }

    // Vertices: orbits of arc endpoints. The ends of arc (pi, f, v) are
    // the piece's crossing points on the two edges {v, x}, x in f \ {v,f}.
    let end_edges = |f: u8, v: u8| -> [usize; 2] {
        let xs: Vec<u8> = (0..4u8).filter(|&x| x != f && x != v).collect();
        [interior_edge(v, xs[0]), interior_edge(v, xs[1])]
    };
    // Corner nodes: (piece, interior edge).
    let node = |pi: usize, e: usize| pi * 6 + e;
    let mut parent: Vec<usize> = (0..s.pieces.len() * 6).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let union = |parent: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    };
    for (ai, &(pi, f, v)) in arcs.iter().enumerate() {
        let (tet, _) = s.pieces[pi];
        let g = &t.gluings[tet][f as usize];
        let other = partner[ai].unwrap();
        let (pj, _, _) = arcs[other];
        for e in end_edges(f, v) {
            let [x, y] = EDGE_ENDS[e];
            let e2 = interior_edge(g.perm[x as usize], g.perm[y as usize]);
            union(&mut parent, node(pi, e), node(pj, e2));
        }
    }
    // Count only corners the pieces actually have (crossed edges).
    let mut verts = 0usize;
    let mut seen: Vec<bool> = vec![false; parent.len()];
    for (pi, &(_, kind)) in s.pieces.iter().enumerate() {
        let cr = kind.crossings();
        for e in 0..6 {
            if cr[e] == 1 {
                let r = find(&mut parent, node(pi, e));
                if !seen[r] {
                    seen[r] = true;
                    verts += 1;
                }
            }
        }
    }

    let faces = s.pieces.len();
    let chi = verts as i64 - edges as i64 + faces as i64;
    let mut total_area = Rat::zero();
    for &(tet, kind) in &s.pieces {
        let af = AreaFunctional { crossings: kind.crossings(), boundary_arcs: 0 };
        total_area += af.eval(&a.theta[tet]);
    }
    if total_area != rat(-2 * chi, 1) {
        return Err(DiscError::GaussBonnetViolation { area: rat_str(&total_area), chi });
    }
    Ok(GaussBonnetReport { faces, edges, vertices: verts, chi, total_area })
}

// ---------------------------------------------------------------------
// Report export
// ---------------------------------------------------------------------

#[derive(Debug, Serialize)]
struct DiscRow {
    tag: Tag,
    crossings: [u8; 6],
    boundary_arcs: u8,
    min_area: String,
    face_compression: bool,
}

/// Deterministic JSON report of the full enumerated type table.
pub fn report_json(types: &[DiscType]) -> String {
    let rows: Vec<DiscRow> = types
        .iter()
        .map(|d| DiscRow {
            tag: d.tag,
            crossings: d.crossings,
            boundary_arcs: d.boundary_arcs,
            min_area: rat_str(&min_area_over_polytope(d)),
            face_compression: d.face_compression,
        })
        .collect();
    serde_json::to_string_pretty(&rows).expect("serialization cannot fail")
}

/// Plain-text summary of the type table.
pub fn report_text(types: &[DiscType]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "fairly normal disc types: {}", types.len());
    for d in types {
        let _ = writeln!(
            out,
            "{:?} crossings={:?} boundary_arcs={} min_area={} compression={}",
            d.tag,
            d.crossings,
            d.boundary_arcs,
            rat_str(&min_area_over_polytope(d)),
            d.face_compression
        );
    }
    out
}

/// A short stable signature for golden-file waivers.
pub fn signature(d: &DiscType) -> String {
    format!(
        "c={:?};k={};hex={:?};tri={:?}",
        d.crossings, d.boundary_arcs, d.pattern.hex_arcs, d.pattern.tri_arcs
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angles::{build_constraints, solve_max_min, SolveOutcome};
    use crate::farey::MonodromyWord;
    use crate::triangulation::build_monodromy_triangulation;

    fn types() -> &'static Vec<DiscType> {
        static TYPES: OnceLock<Vec<DiscType>> = OnceLock::new();
        TYPES.get_or_init(enumerate_fairly_normal_types)
    }

    #[test]
    fn model_is_coherent() {
        let m = model();
        assert_eq!(m.faces.len(), 8);
        for f in 0..4 {
            assert_eq!(m.faces[f].len(), 6);
            // Sides alternate boundary / interior.
            for (pos, s) in m.faces[f].iter().enumerate() {
                assert_eq!(pos % 2 == 0, s.edge >= INTERIOR_EDGES);
            }
        }
        for f in 4..8 {
            assert_eq!(m.faces[f].len(), 3);
        }
        assert_eq!(m.edge_faces.len(), EDGE_COUNT);
    }

    #[test]
    fn vertex_links_and_bigons_present() {
        let ts = types();
        for v in 0..4u8 {
            let p = vertex_link_pattern(v);
            let t = ts.iter().find(|d| d.pattern == p).expect("vertex link enumerated");
            assert_eq!(t.tag, Tag::VertexLink);
            assert_eq!(t.boundary_arcs, 0);
            assert_eq!(t.crossings.iter().map(|&c| c as usize).sum::<usize>(), 3);
        }
        for e in 0..INTERIOR_EDGES {
            let p = bigon_pattern(e);
            let t = ts.iter().find(|d| d.pattern == p).expect("bigon enumerated");
            assert_eq!(t.tag, Tag::Bigon);
            assert_eq!(t.boundary_arcs, 2);
            assert_eq!(t.crossings, [0; 6]);
        }
        assert_eq!(ts.iter().filter(|d| d.tag == Tag::VertexLink).count(), 4);
        assert_eq!(ts.iter().filter(|d| d.tag == Tag::Bigon).count(), 6);
        assert_eq!(ts.iter().filter(|d| d.tag == Tag::WeakBigon).count(), 0);
    }

    #[test]
    fn modified_and_fused_links_present() {
        let ts = types();
        // One slide per (vertex, far end) and one per (vertex, pair of far
        // ends); three quadrilateral fusions.
        assert_eq!(ts.iter().filter(|d| d.tag == Tag::ModifiedVertexLink).count(), 24);
        assert_eq!(ts.iter().filter(|d| d.tag == Tag::FusedVertexLink).count(), 3);
        for d in ts.iter().filter(|d| d.tag == Tag::ModifiedVertexLink) {
            // A slide removes one crossing per slid edge and adds one
            // boundary arc.
            let c: u8 = d.crossings.iter().sum();
            assert_eq!(c + d.boundary_arcs, 3);
            assert!((1..=2).contains(&d.boundary_arcs));
            // The crossed edges all share the modified vertex.
            assert!((0..4u8).any(|v| (0..6)
                .filter(|&e| d.crossings[e] > 0)
                .all(|e| EDGE_ENDS[e].contains(&v))));
        }
        for d in ts.iter().filter(|d| d.tag == Tag::FusedVertexLink) {
            assert_eq!(d.boundary_arcs, 0);
            assert_eq!(d.crossings.iter().filter(|&&c| c == 1).count(), 4);
        }
    }

    #[test]
    fn quads_present_with_positive_area() {
        // The three quadrilateral types: crossing profiles with two
        // opposite edges missed.
        let ts = types();
        let mut quads = 0;
        for d in ts.iter() {
            let is_quad = d.boundary_arcs == 0
                && d.crossings.iter().filter(|&&c| c == 1).count() == 4
                && d.crossings.iter().filter(|&&c| c == 0).count() == 2
                && {
                    let missed: Vec<usize> =
                        (0..6).filter(|&e| d.crossings[e] == 0).collect();
                    let [a, b] = EDGE_ENDS[missed[0]];
                    let [c, dd] = EDGE_ENDS[missed[1]];
                    a != c && a != dd && b != c && b != dd
                };
            if is_quad {
                quads += 1;
                assert_eq!(min_area_over_polytope(d), Rat::zero());
                assert!(max_area_over_polytope(d) > Rat::zero());
            }
        }
        assert_eq!(quads, 3);
    }

    #[test]
    fn every_type_passes_raw_definition() {
        // Re-validate against the four bullets, independently of the
        // enumerator's pruning.
        let m = model();
        for d in types().iter() {
            // Bullet 1: at most one arc per boundary face (by type shape).
            // Bullet 2: hexagon arcs join distinct non-adjacent sides.
            for (f, arcs) in d.pattern.hex_arcs.iter().enumerate() {
                for &(p, q) in arcs {
                    assert_ne!(p, q, "face {f}");
                    let dd = (q - p).min(6 - (q - p));
                    assert!(dd >= 2, "face {f}: adjacent sides {p},{q}");
                }
            }
            // Bullet 3: each interior edge at most twice.
            for e in 0..INTERIOR_EDGES {
                assert!(d.crossings[e] <= 2);
                // Crossing counts agree with endpoint counts in both
                // incident hexagons.
                for &(f, p) in &m.edge_faces[e] {
                    let k = d.pattern.hex_arcs[f]
                        .iter()
                        .filter(|&&(a, b)| a == p as u8 || b == p as u8)
                        .count();
                    assert_eq!(k as u8, d.crossings[e]);
                }
            }
            // Bullet 4 and simplicity: re-run the analysis.
            let an = analyze(&d.pattern).expect("single simple closed curve");
            assert!(
                an.crossings.iter().any(|&c| c > 0)
                    || (an.side_has_interior[0] && an.side_has_interior[1])
            );
        }
    }

    #[test]
    fn golden_type_count() {
        let golden: serde_json::Value =
            serde_json::from_str(include_str!("../data/disc_golden.json")).unwrap();
        assert_eq!(types().len() as u64, golden["type_count"].as_u64().unwrap());
    }

    #[test]
    fn lemma4_restricted() {
        for d in types().iter().filter(|d| d.crossings.iter().all(|&c| c <= 1)) {
            let lo = min_area_over_polytope(d);
            assert!(lo >= Rat::zero(), "negative min area: {}", signature(d));
            let interior_zero = lo.is_zero() && max_area_over_polytope(d).is_zero();
            assert_eq!(
                interior_zero,
                matches!(d.tag, Tag::VertexLink | Tag::Bigon),
                "interior zero exactly for vertex links and bigons: {}",
                signature(d)
            );
        }
    }

    #[test]
    fn lemma5_experiment() {
        let golden: serde_json::Value =
            serde_json::from_str(include_str!("../data/disc_golden.json")).unwrap();
        let waivers: Vec<String> = golden["lemma5_waivers"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_str().unwrap().to_string())
            .collect();
        let mut findings = Vec::new();
        for d in types().iter() {
            let qualifying = if d.tag == Tag::Arclike {
                d.compression_off_arc_side
            } else {
                d.face_compression
            };
            if qualifying && min_area_over_polytope(d) < Rat::one() {
                findings.push(signature(d));
            }
        }
        for f in &findings {
            assert!(
                waivers.contains(f),
                "unwaived Lemma 5 finding (min area < 1 with compression): {f}"
            );
        }
    }

    #[test]
    fn vertex_link_has_no_compression_and_bigon_neither() {
        for d in types().iter() {
            match d.tag {
                Tag::VertexLink | Tag::Bigon => {
                    assert!(!d.face_compression, "{}", signature(d));
                }
                _ => {}
            }
        }
    }

    #[test]
    fn arclike_types_exist_with_compressions() {
        // The discs of the paper's examples: enumerated types beyond the
        // classical ones that admit face compressions.
        let ts = types();
        assert!(ts.iter().any(|d| d.tag == Tag::Arclike));
        assert!(ts
            .iter()
            .any(|d| matches!(d.tag, Tag::Arclike | Tag::Generic) && d.face_compression));
    }

    #[test]
    fn area_matches_random_rational_substitution() {
        // area(theta) equals the per-edge exterior sum plus constants.
        let mut k = 1i64;
        for d in types().iter().take(40) {
            let af = area_expr(d);
            for _ in 0..3 {
                k = (k * 37 + 11) % 97;
                let theta: [Rat; 6] = std::array::from_fn(|e| rat(1 + (k + e as i64) % 7, 11));
                let direct = af.eval(&theta);
                let mut expect = rat(af.boundary_arcs as i64 - 2, 1);
                for e in 0..6 {
                    for _ in 0..af.crossings[e] {
                        expect += Rat::one() - theta[e].clone();
                    }
                }
                assert_eq!(direct, expect);
            }
        }
    }

    #[test]
    fn vertex_link_assembly_is_closed_torus() {
        let t = build_monodromy_triangulation(&MonodromyWord::parse("RL").unwrap()).unwrap();
        let c = build_constraints(&t);
        let SolveOutcome::Feasible { assignment, .. } = solve_max_min(&c) else {
            panic!("feasible");
        };
        let s = assemble_vertex_link_surface(&t);
        let rep = gauss_bonnet_check(&t, &s, &assignment).unwrap();
        assert_eq!(rep.faces, 8);
        assert_eq!(rep.chi, 0);
        assert_eq!(rep.total_area, Rat::zero());
    }

    #[test]
    fn quad_assemblies_satisfy_gauss_bonnet() {
        for w in ["RRLL", "RL", "RRL"] {
            let t =
                build_monodromy_triangulation(&MonodromyWord::parse(w).unwrap()).unwrap();
            let c = build_constraints(&t);
            let SolveOutcome::Feasible { assignment, .. } = solve_max_min(&c) else {
                panic!("feasible");
            };
            let vl = assemble_vertex_link_surface(&t);
            gauss_bonnet_check(&t, &vl, &assignment).unwrap();
            for q in find_quad_assemblies(&t) {
                let rep = gauss_bonnet_check(&t, &q, &assignment).unwrap();
                assert_eq!(rep.total_area, rat(-2 * rep.chi, 1));
                // Union with the vertex-link torus: areas and chi add.
                let u = q.clone().union(vl.clone());
                let urep = gauss_bonnet_check(&t, &u, &assignment).unwrap();
                assert_eq!(urep.chi, rep.chi);
                assert_eq!(urep.total_area, rep.total_area);
            }
        }
    }

    #[test]
    fn report_is_deterministic() {
        let a = report_json(&types()[..10.min(types().len())]);
        let b = report_json(&types()[..10.min(types().len())]);
        assert_eq!(a, b);
    }
}

