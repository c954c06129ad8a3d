//! Angle structures on the layered triangulation, as an exact linear
//! program over rational multiples of pi.
//!
//! An angle assignment gives every tetrahedron edge corner an interior
//! angle `theta * pi` with `0 < theta < 1`. The two axioms become linear
//! constraints: interior angles around each edge class sum to `2`, and the
//! curve condition holds for every closed normal curve on each polyhedron
//! boundary. For tetrahedra the curve condition reduces to the four
//! vertex-linking equalities (the three angles at each ideal vertex sum to
//! `1`); the quadrilateral curves' strict inequalities follow from those
//! equalities plus positivity, so the builder records them as a certified
//! remark instead of rows.

use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::simplex::{maximize, rref, LpOutcome};
use crate::triangulation::{compute_edge_classes, Triangulation, EDGE_ENDS};
use crate::{rat, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AngleError {
    #[error("no angle assignment with positive slack exists")]
    Infeasible,
    #[error("polyhedron has {0} edges; enumeration is capped at {1}")]
    TooLarge(usize, usize),
}

/// Interior angles in units of pi, one per (tetrahedron, edge 0..5).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AngleAssignment {
    pub theta: Vec<[Rat; 6]>,
}

impl AngleAssignment {
    pub fn get(&self, tet: usize, edge: u8) -> &Rat {
        &self.theta[tet][edge as usize]
    }
}

/// The linear system: equality rows over one variable per tetrahedron edge
/// corner; the strict bounds `0 < theta < 1` stay implicit.
#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    pub vars: usize,
    pub rows: Vec<Vec<Rat>>,
    pub rhs: Vec<Rat>,
    pub edge_equalities: usize,
    pub vertex_equalities: usize,
    /// Certified remark: constraints implied by the rows and positivity,
    /// recorded instead of emitted.
    pub remarks: Vec<String>,
}

/// Variable index of the corner (tet, edge).
pub fn var_index(tet: usize, edge: u8) -> usize {
    tet * 6 + edge as usize
}

/// Equalities of an angled decomposition by tetrahedra: one row per edge
/// class (sum = 2) and one per ideal vertex (sum of the three incident
/// corners = 1).
pub fn build_constraints(t: &Triangulation) -> ConstraintSystem {
    let n = t.tet_count();
    let vars = 6 * n;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let classes = compute_edge_classes(t);
    for class in &classes {
        let mut row = vec![Rat::zero(); vars];
        for &(tet, edge) in &class.corners {
            row[var_index(tet, edge)] += Rat::one();
        }
        rows.push(row);
        rhs.push(rat(2, 1));
    }
    let edge_equalities = classes.len();
    for tet in 0..n {
        for v in 0..4u8 {
            let mut row = vec![Rat::zero(); vars];
            for (e, ends) in EDGE_ENDS.iter().enumerate() {
                if ends.contains(&v) {
                    row[var_index(tet, e as u8)] += Rat::one();
                }
            }
            rows.push(row);
            rhs.push(Rat::one());
        }
    }
    ConstraintSystem {
        vars,
        rows,
        rhs,
        edge_equalities,
        vertex_equalities: 4 * n,
        remarks: vec![
            "non-vertex-linking curves on a tetrahedron cross >= 4 edges; \
             their strict exterior-angle inequality follows from the vertex \
             equalities and positivity (for a quad crossing pairs a,a,b,b \
             with a+b+c=1 the exterior sum is 2+2c > 2)"
                .to_string(),
        ],
    }
}

/// Outcome of the max-min slack optimization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Feasible { slack: Rat, assignment: AngleAssignment },
    Infeasible,
}

/// Maximize the slack `eps` subject to the equalities and
/// `eps <= theta <= 1 - eps`; infeasible iff the optimum is not positive.
///
/// The equalities are first reduced to echelon form, so the simplex only
/// sees the free coordinates; with deterministic pivoting and a fixed row
/// order the
/// returned optimum is a deterministic function of the system.
pub fn solve_max_min(c: &ConstraintSystem) -> SolveOutcome {
    let mut a = c.rows.clone();
    let mut b = c.rhs.clone();
    let Some(pivots) = rref(&mut a, &mut b) else {
        return SolveOutcome::Infeasible;
    };
    let free: Vec<usize> = (0..c.vars).filter(|v| !pivots.contains(v)).collect();
    let nf = free.len();

    // Affine expression of every variable in the free coordinates:
    // value = affine[v].0 + sum_j affine[v].1[j] * x_free[j].
    let mut affine: Vec<(Rat, Vec<Rat>)> = Vec::with_capacity(c.vars);
    for v in 0..c.vars {
        if let Some(r) = pivots.iter().position(|&p| p == v) {
            let coeffs = free.iter().map(|&j| -a[r][j].clone()).collect();
            affine.push((b[r].clone(), coeffs));
        } else {
            let j = free.iter().position(|&f| f == v).unwrap();
            let mut coeffs = vec![Rat::zero(); nf];
            coeffs[j] = Rat::one();
            affine.push((Rat::zero(), coeffs));
        }
    }

    // Inequalities expr - eps >= 0 and 1 - expr - eps >= 0, deduplicated.
    let mut ineqs: Vec<(Vec<Rat>, Rat)> = Vec::new();
    let push = |coeffs: Vec<Rat>, konst: Rat, ineqs: &mut Vec<(Vec<Rat>, Rat)>| {
        if !ineqs.iter().any(|(cc, kk)| *cc == coeffs && *kk == konst) {
            ineqs.push((coeffs, konst));
        }
    };
    for (konst, coeffs) in &affine {
        push(coeffs.clone(), konst.clone(), &mut ineqs);
        let neg: Vec<Rat> = coeffs.iter().map(|x| -x.clone()).collect();
        push(neg, Rat::one() - konst.clone(), &mut ineqs);
    }

    // Standard form: variables are (x_free, eps, one slack per inequality),
    // all non-negative; rows are coeffs.x - eps - s = -konst; maximize eps.
    let total = nf + 1 + ineqs.len();
    let mut lp_a = Vec::with_capacity(ineqs.len());
    let mut lp_b = Vec::with_capacity(ineqs.len());
    for (i, (coeffs, konst)) in ineqs.iter().enumerate() {
        let mut row = vec![Rat::zero(); total];
        row[..nf].clone_from_slice(coeffs);
        row[nf] = -Rat::one();
        row[nf + 1 + i] = -Rat::one();
        lp_a.push(row);
        lp_b.push(-konst.clone());
    }
    let mut obj = vec![Rat::zero(); total];
    obj[nf] = Rat::one();
    let (slack, xfree) = match maximize(&lp_a, &lp_b, &obj) {
        LpOutcome::Optimal { value, solution } => (value, solution[..nf].to_vec()),
        LpOutcome::Infeasible => return SolveOutcome::Infeasible,
        LpOutcome::Unbounded => unreachable!("eps <= 1/2 is implied by the paired bounds"),
    };
    if !slack.is_positive() {
        return SolveOutcome::Infeasible;
    }

    let n = c.vars / 6;
    let mut theta = vec![std::array::from_fn::<Rat, 6, _>(|_| Rat::zero()); n];
    for v in 0..c.vars {
        let (konst, coeffs) = &affine[v];
        let mut val = konst.clone();
        for (cf, x) in coeffs.iter().zip(&xfree) {
            val += cf.clone() * x.clone();
        }
        theta[v / 6][v % 6] = val;
    }
    let assignment = AngleAssignment { theta };

    // Exact re-substitution and the scale identity (sum of all interior
    // angles = 2e in pi-units).
    for (row, want) in c.rows.iter().zip(&c.rhs) {
        let mut s = Rat::zero();
        for (cf, v) in row.iter().zip(assignment.theta.iter().flatten()) {
            s += cf.clone() * v.clone();
        }
        assert_eq!(&s, want, "solver output violates an equality exactly");
    }
    let all: Rat = assignment.theta.iter().flatten().cloned().sum();
    assert_eq!(all, rat(2 * c.edge_equalities as i64, 1), "angle sum scale check");
    SolveOutcome::Feasible { slack, assignment }
}

/// A polyhedron boundary pattern: faces as cyclic vertex sequences.
#[derive(Debug, Clone)]
pub struct PolyhedronPattern {
    pub faces: Vec<Vec<usize>>,
}

impl PolyhedronPattern {
    pub fn tetrahedron() -> Self {
        PolyhedronPattern {
            faces: vec![vec![0, 2, 1], vec![1, 2, 3], vec![0, 3, 2], vec![0, 1, 3]],
        }
    }

    /// Undirected edges, each a sorted vertex pair, in first-seen order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for f in &self.faces {
            for i in 0..f.len() {
                let a = f[i];
                let b = f[(i + 1) % f.len()];
                let e = (a.min(b), a.max(b));
                if !out.contains(&e) {
                    out.push(e);
                }
            }
        }
        out.sort();
        out
    }

    fn vertex_count(&self) -> usize {
        self.faces.iter().flatten().max().map_or(0, |m| m + 1)
    }
}

/// A class of simple closed normal curves, identified by its crossed-edge
/// set (each edge crossed at most once).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalCurveClass {
    pub crossed_edges: Vec<(usize, usize)>,
    pub vertex_linking: bool,
}

const EDGE_CAP: usize = 16;

/// All simple closed normal-curve classes on the polyhedron boundary:
/// subsets of edges admitting a connected non-crossing chord realization.
pub fn enumerate_normal_curves(
    p: &PolyhedronPattern,
) -> Result<Vec<NormalCurveClass>, AngleError> {
    let edges = p.edges();
    let ne = edges.len();
    if ne > EDGE_CAP {
        return Err(AngleError::TooLarge(ne, EDGE_CAP));
    }
    let edge_id = |a: usize, b: usize| {
        edges.iter().position(|&e| e == (a.min(b), a.max(b))).expect("edge of a face")
    };
    let mut out = Vec::new();
    'subset: for mask in 1u32..(1 << ne) {
        // Points on face boundaries: (face, position of the crossed edge in
        // the face cycle). Every face must contain an even number.
        let mut face_points: Vec<Vec<(usize, usize)>> = Vec::new();
        for (fi, f) in p.faces.iter().enumerate() {
            let mut pts = Vec::new();
            for i in 0..f.len() {
                let e = edge_id(f[i], f[(i + 1) % f.len()]);
                if mask >> e & 1 == 1 {
                    pts.push((fi, i));
                }
            }
            if pts.len() % 2 != 0 {
                continue 'subset;
            }
            face_points.push(pts);
        }
        if !has_connected_realization(p, &edges, mask, &face_points) {
            continue;
        }
        let crossed: Vec<(usize, usize)> =
            (0..ne).filter(|e| mask >> e & 1 == 1).map(|e| edges[e]).collect();
        let vertex_linking = (0..p.vertex_count()).any(|v| {
            let star: Vec<(usize, usize)> =
                edges.iter().copied().filter(|&(a, b)| a == v || b == v).collect();
            star == crossed
        });
        out.push(NormalCurveClass { crossed_edges: crossed, vertex_linking });
    }
    Ok(out)
}

/// Whether some choice of non-crossing chord matchings in every face
/// assembles into a single closed curve.
fn has_connected_realization(
    p: &PolyhedronPattern,
    edges: &[(usize, usize)],
    mask: u32,
    face_points: &[Vec<(usize, usize)>],
) -> bool {
    // Node per crossed edge; a chord in a face joins its two edge nodes.
    let edge_id = |a: usize, b: usize| {
        edges.iter().position(|&e| e == (a.min(b), a.max(b))).expect("edge of a face")
    };
    let node_of = |fi: usize, i: usize| {
        let f = &p.faces[fi];
        edge_id(f[i], f[(i + 1) % f.len()])
    };
    let crossed: Vec<usize> = (0..edges.len()).filter(|e| mask >> e & 1 == 1).collect();

    // Enumerate the product of non-crossing matchings recursively.
    fn matchings(k: usize) -> Vec<Vec<(usize, usize)>> {
        // Non-crossing perfect matchings of k points on a circle, as index
        // pairs into the point list.
        fn go(pts: &[usize]) -> Vec<Vec<(usize, usize)>> {
            if pts.is_empty() {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for j in (1..pts.len()).step_by(2) {
                let inner = go(&pts[1..j]);
                let outer = go(&pts[j + 1..]);
                for a in &inner {
                    for b in &outer {
                        let mut m = vec![(pts[0], pts[j])];
                        m.extend_from_slice(a);
                        m.extend_from_slice(b);
                        out.push(m);
                    }
                }
            }
            out
        }
        go(&(0..k).collect::<Vec<_>>())
    }

    let per_face: Vec<Vec<Vec<(usize, usize)>>> =
        face_points.iter().map(|pts| matchings(pts.len())).collect();
    let mut choice = vec![0usize; per_face.len()];
    loop {
        // Build the curve graph for this choice and count its components.
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); edges.len()];
        for (fi, pts) in face_points.iter().enumerate() {
            for &(i, j) in &per_face[fi][choice[fi]] {
                let a = node_of(pts[i].0, pts[i].1);
                let b = node_of(pts[j].0, pts[j].1);
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        if !crossed.is_empty() {
            let mut seen = vec![false; edges.len()];
            let mut stack = vec![crossed[0]];
            seen[crossed[0]] = true;
            let mut count = 1;
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        count += 1;
                        stack.push(y);
                    }
                }
            }
            if count == crossed.len() {
                return true;
            }
        }
        // Next choice in the product.
        let mut k = 0;
        loop {
            if k == choice.len() {
                return false;
            }
            choice[k] += 1;
            if choice[k] < per_face[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Verification report for an assignment; violations are content, not
/// errors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AngleReport {
    pub violations: Vec<String>,
}

impl AngleReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check range, edge equalities, and the full curve condition (equality
/// for vertex-linking classes, strict inequality otherwise).
pub fn check_assignment(t: &Triangulation, a: &AngleAssignment) -> AngleReport {
    let mut violations = Vec::new();
    let n = t.tet_count();
    if a.theta.len() != n {
        violations.push(format!("expected {n} corner rows, got {}", a.theta.len()));
        return AngleReport { violations };
    }
    for (tet, row) in a.theta.iter().enumerate() {
        for (e, th) in row.iter().enumerate() {
            if !th.is_positive() || *th >= Rat::one() {
                violations.push(format!("theta[{tet}][{e}] = {th} outside (0, 1)"));
            }
        }
    }
    for (i, class) in compute_edge_classes(t).iter().enumerate() {
        let sum: Rat = class.corners.iter().map(|&(tet, e)| a.get(tet, e).clone()).sum();
        if sum != rat(2, 1) {
            violations.push(format!("edge class {i}: interior sum {sum} != 2"));
        }
    }
    let pattern = PolyhedronPattern::tetrahedron();
    let curves = enumerate_normal_curves(&pattern).expect("tetrahedron is under the cap");
    let edges = pattern.edges();
    for tet in 0..n {
        for class in &curves {
            let ext: Rat = class
                .crossed_edges
                .iter()
                .map(|&(x, y)| {
                    let e = edges.iter().position(|&p| p == (x, y)).unwrap() as u8;
                    Rat::one() - a.get(tet, e).clone()
                })
                .sum();
            if class.vertex_linking {
                if ext != rat(2, 1) {
                    violations.push(format!(
                        "tet {tet}: vertex-linking curve {:?} exterior sum {ext} != 2",
                        class.crossed_edges
                    ));
                }
            } else if ext <= rat(2, 1) {
                violations.push(format!(
                    "tet {tet}: curve {:?} exterior sum {ext} <= 2",
                    class.crossed_edges
                ));
            }
        }
    }
    AngleReport { violations }
}

/// Canonical rendering of a rational: `p/q`, or just `p` for integers.
pub fn rat_str(r: &Rat) -> String {
    if r.denom() == &crate::Int::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Serialize)]
struct AnglesJson {
    slack: String,
    angles: Vec<[String; 6]>,
}

/// Deterministic JSON export: `{"slack": "p/q", "angles": [["p/q" x6] xn]}`.
pub fn to_json(slack: &Rat, a: &AngleAssignment) -> String {
    let doc = AnglesJson {
        slack: rat_str(slack),
        angles: a
            .theta
            .iter()
            .map(|row| std::array::from_fn(|i| rat_str(&row[i])))
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("serialization cannot fail")
}

/// Plain-text rendering of an assignment.
pub fn to_text(slack: &Rat, a: &AngleAssignment) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "slack: {}", rat_str(slack));
    for (tet, row) in a.theta.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(rat_str).collect();
        let _ = writeln!(out, "tet {tet}: {}", cells.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::farey::MonodromyWord;
    use crate::triangulation::build_monodromy_triangulation;

    fn build(s: &str) -> Triangulation {
        build_monodromy_triangulation(&MonodromyWord::parse(s).unwrap()).unwrap()
    }

    fn all_third(n: usize) -> AngleAssignment {
        AngleAssignment { theta: vec![std::array::from_fn(|_| rat(1, 3)); n] }
    }

    #[test]
    fn constraint_counts_for_rl() {
        let c = build_constraints(&build("RL"));
        assert_eq!(c.vars, 12);
        assert_eq!(c.edge_equalities, 2);
        assert_eq!(c.vertex_equalities, 8);
        assert_eq!(c.rows.len(), 10);
        assert!(!c.remarks.is_empty());
    }

    #[test]
    fn all_third_satisfies_rl_equalities() {
        let c = build_constraints(&build("RL"));
        let a = all_third(2);
        let flat: Vec<Rat> = a.theta.iter().flatten().cloned().collect();
        for (row, want) in c.rows.iter().zip(&c.rhs) {
            let sum: Rat = row.iter().zip(&flat).map(|(x, y)| x.clone() * y.clone()).sum();
            assert_eq!(&sum, want);
        }
    }

    #[test]
    fn quad_exterior_identity() {
        // Opposite-edge pairs (a,a),(b,b),(c,c) with a+b+c=1: a quad curve
        // crossing the four edges of pairs a and b has exterior sum
        // 4 - 2(a+b) = 2 + 2c, strictly above 2 whenever c > 0.
        for (a, b) in [(rat(1, 3), rat(1, 3)), (rat(1, 2), rat(1, 4)), (rat(1, 5), rat(3, 5))] {
            let c = Rat::one() - a.clone() - b.clone();
            let ext = rat(4, 1) - rat(2, 1) * (a + b);
            assert_eq!(ext, rat(2, 1) + rat(2, 1) * c.clone());
            if c.is_positive() {
                assert!(ext > rat(2, 1));
            }
        }
    }

    #[test]
    fn rl_solves_to_one_third() {
        let c = build_constraints(&build("RL"));
        match solve_max_min(&c) {
            SolveOutcome::Feasible { slack, assignment } => {
                assert_eq!(slack, rat(1, 3));
                for row in &assignment.theta {
                    for th in row {
                        assert_eq!(th, &rat(1, 3));
                    }
                }
            }
            SolveOutcome::Infeasible => panic!("RL must be feasible"),
        }
    }

    #[test]
    fn valence_two_edge_is_infeasible() {
        // x1 + x2 = 2 with 0 < x < 1 forces x = 1, excluded.
        let c = ConstraintSystem {
            vars: 6,
            rows: vec![{
                let mut r = vec![Rat::zero(); 6];
                r[0] = Rat::one();
                r[1] = Rat::one();
                r
            }],
            rhs: vec![rat(2, 1)],
            edge_equalities: 1,
            vertex_equalities: 0,
            remarks: vec![],
        };
        assert_eq!(solve_max_min(&c), SolveOutcome::Infeasible);
    }

    #[test]
    fn longer_words_feasible_and_verified() {
        for w in ["RRLL", "RRL", "RLRLL", "-RRLL"] {
            let t = build(w);
            let c = build_constraints(&t);
            match solve_max_min(&c) {
                SolveOutcome::Feasible { slack, assignment } => {
                    assert!(slack.is_positive(), "{w}");
                    let rep = check_assignment(&t, &assignment);
                    assert!(rep.ok(), "{w}: {:?}", rep.violations);
                }
                SolveOutcome::Infeasible => panic!("{w} must be feasible"),
            }
        }
    }

    #[test]
    fn tetrahedron_has_seven_curve_classes() {
        let curves = enumerate_normal_curves(&PolyhedronPattern::tetrahedron()).unwrap();
        assert_eq!(curves.len(), 7);
        let linking = curves.iter().filter(|c| c.vertex_linking).count();
        assert_eq!(linking, 4);
        for c in &curves {
            assert!(
                c.crossed_edges.len() >= 3,
                "no curve crosses only 1 or 2 edges: {:?}",
                c.crossed_edges
            );
            if c.vertex_linking {
                assert_eq!(c.crossed_edges.len(), 3);
            } else {
                assert_eq!(c.crossed_edges.len(), 4);
            }
        }
    }

    #[test]
    fn check_assignment_flags_violations() {
        let t = build("RL");
        assert!(check_assignment(&t, &all_third(2)).ok());

        let half = AngleAssignment { theta: vec![std::array::from_fn(|_| rat(1, 2)); 2] };
        let rep = check_assignment(&t, &half);
        assert!(rep.violations.iter().any(|v| v.contains("edge class")));

        let mut zero = all_third(2);
        zero.theta[0][0] = Rat::zero();
        let rep = check_assignment(&t, &zero);
        assert!(rep.violations.iter().any(|v| v.contains("outside (0, 1)")));
    }

    #[test]
    fn json_shape() {
        let t = build("RL");
        let c = build_constraints(&t);
        let SolveOutcome::Feasible { slack, assignment } = solve_max_min(&c) else {
            panic!("feasible");
        };
        let s = to_json(&slack, &assignment);
        assert!(s.contains("\"slack\": \"1/3\""));
        assert!(s.contains("\"1/3\""));
    }
}
