//! Homology of the surface through the graph: tree–cotree decomposition,
//! a basis of H₁(Σ;ℤ) by fundamental cycles, dual GF(2)/integer cocycles,
//! and the mod-2 intersection form.
//!
//! Two cocycle families accompany the basis cycles C_j:
//!
//! - `beta[j]` is the dual basis: β_i(C_j) = δ_ij. Its support is the
//!   leftover edge e_j plus cotree edges, oriented along closed trails of
//!   the dual graph so evaluation is integer-valued.
//! - `push[j]` counts signed crossings with the curve running parallel to
//!   C_j just to its left. Its class is Poincaré dual to the class of C_j, so
//!   push_i(C_j) reduces to the intersection number C_i · C_j mod 2. The
//!   determinant identities in [`crate::dimer`] twist by these.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::surface::{Dart, EdgeId, FaceId, RhombicSurface, VertexId, Walk};

/// Spanning tree of Γ, spanning cotree of Γ*, and the 2g leftover edges.
#[derive(Clone, Debug)]
pub struct TreeCotree {
    pub root: VertexId,
    /// per vertex: (parent vertex, connecting edge); `None` at the root
    pub parent: Vec<Option<(VertexId, EdgeId)>>,
    pub depth: Vec<u32>,
    pub tree_edge: Vec<bool>,
    pub cotree_edge: Vec<bool>,
    pub leftover: Vec<EdgeId>,
    /// per face: (parent face, crossing edge) in the dual BFS tree
    pub face_parent: Vec<Option<(FaceId, EdgeId)>>,
    /// dual BFS order, root first
    pub face_order: Vec<FaceId>,
}

/// BFS spanning tree rooted at the lowest vertex id, then a BFS cotree in
/// the dual graph over the remaining edges. The edges in neither are the 2g
/// leftover edges, in increasing id order.
pub fn tree_cotree(s: &RhombicSurface) -> Result<TreeCotree> {
    let nv = s.vertex_count();
    let ne = s.edge_count();
    let root = VertexId(0);
    let mut parent = vec![None; nv];
    let mut depth = vec![0u32; nv];
    let mut tree_edge = vec![false; ne];
    let mut seen = vec![false; nv];
    seen[0] = true;
    let mut queue = VecDeque::from([root]);
    let mut reached = 1;
    while let Some(v) = queue.pop_front() {
        for &e in s.rotation(v) {
            let u = s.other_endpoint(e, v);
            if !seen[u.0 as usize] {
                seen[u.0 as usize] = true;
                parent[u.0 as usize] = Some((v, e));
                depth[u.0 as usize] = depth[v.0 as usize] + 1;
                tree_edge[e.0 as usize] = true;
                queue.push_back(u);
                reached += 1;
            }
        }
    }
    if reached != nv {
        return Err(Error::Disconnected);
    }

    // cotree: BFS over faces crossing only non-tree edges
    let nf = s.face_count();
    let mut face_parent = vec![None; nf];
    let mut face_seen = vec![false; nf];
    let mut cotree_edge = vec![false; ne];
    let mut face_order = vec![FaceId(0)];
    face_seen[0] = true;
    let mut fqueue = VecDeque::from([FaceId(0)]);
    while let Some(f) = fqueue.pop_front() {
        for &d in s.face(f).darts() {
            let e = d.edge;
            if tree_edge[e.0 as usize] || cotree_edge[e.0 as usize] {
                continue;
            }
            let g = s.face_left_of(d.reversed());
            if !face_seen[g.0 as usize] {
                face_seen[g.0 as usize] = true;
                face_parent[g.0 as usize] = Some((f, e));
                cotree_edge[e.0 as usize] = true;
                face_order.push(g);
                fqueue.push_back(g);
            }
        }
    }
    if face_order.len() != nf {
        return Err(Error::SingularSolve("dual graph on non-tree edges is disconnected".into()));
    }

    let leftover: Vec<EdgeId> = s
        .edges()
        .filter(|e| !tree_edge[e.0 as usize] && !cotree_edge[e.0 as usize])
        .collect();
    let expect = 2 * s.genus() as usize;
    if leftover.len() != expect {
        return Err(Error::SingularSolve(format!(
            "{} leftover edges, expected 2g = {expect}",
            leftover.len()
        )));
    }
    Ok(TreeCotree { root, parent, depth, tree_edge, cotree_edge, leftover, face_parent, face_order })
}

/// An integer-valued 1-cochain evaluated on the white→black orientation of
/// each edge. All cochains produced here are cocycles: they vanish on face
/// boundaries, so their evaluation on a cycle depends only on its class.
#[derive(Clone, Debug)]
pub struct SignedCocycle {
    values: Vec<i32>,
}

impl SignedCocycle {
    pub fn value(&self, e: EdgeId) -> i32 {
        self.values[e.0 as usize]
    }

    /// Nonzero mod 2: the underlying GF(2) cocycle.
    pub fn parity(&self, e: EdgeId) -> bool {
        self.values[e.0 as usize].rem_euclid(2) == 1
    }

    pub fn eval_dart(&self, d: Dart) -> i64 {
        let v = self.values[d.edge.0 as usize] as i64;
        if d.from_white {
            v
        } else {
            -v
        }
    }

    pub fn eval_walk(&self, walk: &Walk) -> i64 {
        walk.darts().iter().map(|&d| self.eval_dart(d)).sum()
    }

    /// Evaluate on a signed edge chain (coefficients on white→black).
    pub fn eval_chain(&self, chain: &[i64]) -> i64 {
        chain
            .iter()
            .enumerate()
            .map(|(e, &c)| c * self.values[e] as i64)
            .sum()
    }
}

/// Basis cycles C_1..C_2g with their dual cocycles and the mod-2
/// intersection matrix Q.
#[derive(Clone, Debug)]
pub struct CycleBasis {
    pub cycles: Vec<Walk>,
    pub beta: Vec<SignedCocycle>,
    pub push: Vec<SignedCocycle>,
    /// `Q[i][j] = C_i · C_j` over GF(2); symmetric, zero diagonal, nondegenerate.
    pub q: Vec<Vec<bool>>,
}

impl CycleBasis {
    pub fn rank(&self) -> usize {
        self.cycles.len()
    }
}

/// Dart leaving `v` along `e`.
fn dart_from(s: &RhombicSurface, v: VertexId, e: EdgeId) -> Dart {
    Dart { edge: e, from_white: s.white_end(e) == v }
}

/// Tree path from `u` to `v` as darts, using parent pointers.
fn tree_path(s: &RhombicSurface, tc: &TreeCotree, u: VertexId, v: VertexId) -> Vec<Dart> {
    let mut up_from_u = Vec::new();
    let mut down_to_v = Vec::new();
    let (mut a, mut b) = (u, v);
    while tc.depth[a.0 as usize] > tc.depth[b.0 as usize] {
        let (p, e) = tc.parent[a.0 as usize].expect("non-root has parent");
        up_from_u.push(dart_from(s, a, e));
        a = p;
    }
    while tc.depth[b.0 as usize] > tc.depth[a.0 as usize] {
        let (p, e) = tc.parent[b.0 as usize].expect("non-root has parent");
        down_to_v.push(dart_from(s, p, e));
        b = p;
    }
    while a != b {
        let (pa, ea) = tc.parent[a.0 as usize].expect("distinct vertices below root");
        let (pb, eb) = tc.parent[b.0 as usize].expect("distinct vertices below root");
        up_from_u.push(dart_from(s, a, ea));
        down_to_v.push(dart_from(s, pb, eb));
        a = pa;
        b = pb;
    }
    down_to_v.reverse();
    up_from_u.extend(down_to_v);
    up_from_u
}

/// Signed crossing cocycle of the curve parallel to `walk`, pushed off to
/// its left: +1 on each edge leaving the walk into a left corner sector
/// from a white vertex, -1 from a black one.
pub fn pushoff_cocycle(s: &RhombicSurface, walk: &Walk) -> SignedCocycle {
    let mut values = vec![0i32; s.edge_count()];
    for visit in walk.visits(s) {
        let v = visit.vertex;
        let theta = s.theta_vertex(v);
        let from = s.direction_at(v, visit.e_out);
        let span = (s.direction_at(v, visit.e_in) - from).rem_euclid(theta);
        for &e in s.rotation(v) {
            if e == visit.e_in || e == visit.e_out {
                continue;
            }
            let rel = (s.direction_at(v, e) - from).rem_euclid(theta);
            if rel > 0.0 && rel < span {
                values[e.0 as usize] += if s.is_white(v) { 1 } else { -1 };
            }
        }
    }
    SignedCocycle { values }
}

/// Mod-2 intersection number of two closed walks, by corner interleaving:
/// push `d` off to its left and count the rays of `c` it must cross.
pub fn intersection_mod2(s: &RhombicSurface, c: &Walk, d: &Walk) -> bool {
    let push = pushoff_cocycle(s, d);
    (push.eval_walk(c).rem_euclid(2)) == 1
}

/// GF(2) rank by elimination.
fn gf2_rank(m: &[Vec<bool>]) -> usize {
    let mut m: Vec<Vec<bool>> = m.to_vec();
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| m[i][c]) else { continue };
        m.swap(rank, p);
        for i in 0..rows {
            if i != rank && m[i][c] {
                let pivot_row = m[rank].clone();
                for j in 0..cols {
                    m[i][j] ^= pivot_row[j];
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

pub fn cycle_basis(s: &RhombicSurface) -> Result<CycleBasis> {
    let tc = tree_cotree(s)?;
    cycle_basis_from(s, &tc)
}

pub fn cycle_basis_from(s: &RhombicSurface, tc: &TreeCotree) -> Result<CycleBasis> {
    let rank = tc.leftover.len();

    // fundamental cycles: leftover edge white→black, then the tree path back
    let mut cycles = Vec::with_capacity(rank);
    for &e in &tc.leftover {
        let (w, b) = (s.white_end(e), s.black_end(e));
        let mut darts = vec![Dart::forward(e)];
        darts.extend(tree_path(s, tc, b, w));
        cycles.push(Walk::new(s, darts)?);
    }

    let beta: Vec<SignedCocycle> = tc
        .leftover
        .iter()
        .map(|&e| signed_dual_cocycle(s, tc, e))
        .collect::<Result<Vec<_>>>()?;

    // pairing must come out exactly δ_ij in integer arithmetic
    for (i, b) in beta.iter().enumerate() {
        for (j, c) in cycles.iter().enumerate() {
            let got = b.eval_walk(c);
            let want = i64::from(i == j);
            if got != want {
                return Err(Error::SingularSolve(format!(
                    "pairing beta_{i}(C_{j}) = {got}, expected {want}"
                )));
            }
        }
    }

    let push: Vec<SignedCocycle> = cycles.iter().map(|c| pushoff_cocycle(s, c)).collect();

    let mut q = vec![vec![false; rank]; rank];
    for i in 0..rank {
        for j in 0..rank {
            q[i][j] = push[i].eval_walk(&cycles[j]).rem_euclid(2) == 1;
        }
    }
    for i in 0..rank {
        if q[i][i] {
            return Err(Error::SingularSolve(format!("Q has nonzero diagonal at {i}")));
        }
        for j in 0..rank {
            if q[i][j] != q[j][i] {
                return Err(Error::SingularSolve(format!("Q is not symmetric at ({i},{j})")));
            }
        }
    }
    if gf2_rank(&q) != rank {
        return Err(Error::SingularSolve("intersection form is degenerate".into()));
    }

    Ok(CycleBasis { cycles, beta, push, q })
}

/// The GF(2) cocycle supported on non-tree edges with value 1 on `leftover`
/// and 0 on the other leftover edges, lifted to integers by orienting its
/// support as closed trails in the dual graph.
fn signed_dual_cocycle(s: &RhombicSurface, tc: &TreeCotree, leftover: EdgeId) -> Result<SignedCocycle> {
    let ne = s.edge_count();
    let mut on = vec![false; ne];
    on[leftover.0 as usize] = true;

    // Back-substitute cotree edges from the outer faces inward: each face's
    // boundary must carry an even number of support edges (counted with
    // multiplicity). The root face closes automatically because every edge
    // borders two face sides.
    for &f in tc.face_order.iter().skip(1).rev() {
        let (_, solve_edge) = tc.face_parent[f.0 as usize].expect("non-root face");
        let mut parity = false;
        let mut solve_count = 0u32;
        for d in s.face(f).darts() {
            let e = d.edge;
            if e == solve_edge {
                solve_count += 1;
            } else if !tc.tree_edge[e.0 as usize] && on[e.0 as usize] {
                parity ^= true;
            }
        }
        if solve_count % 2 == 0 {
            return Err(Error::SingularSolve(format!(
                "cotree edge {solve_edge} appears {solve_count} times on its face"
            )));
        }
        on[solve_edge.0 as usize] = parity;
    }
    // verify the root face closed up
    let root = tc.face_order[0];
    let mut parity = false;
    for d in s.face(root).darts() {
        if on[d.edge.0 as usize] {
            parity ^= true;
        }
    }
    if parity {
        return Err(Error::SingularSolve("root face parity did not close".into()));
    }

    // orient the support as closed trails in the dual graph; all dual
    // degrees are even, so Hierholzer walks close up
    let mut values = vec![0i32; ne];
    let mut used = vec![false; ne];
    let mut incident: Vec<Vec<EdgeId>> = vec![Vec::new(); s.face_count()];
    for e in s.edges() {
        if on[e.0 as usize] {
            let l = s.face_left_of(Dart::forward(e));
            let r = s.face_left_of(Dart::forward(e).reversed());
            incident[l.0 as usize].push(e);
            if r != l {
                incident[r.0 as usize].push(e);
            }
        }
    }
    for start in s.edges() {
        if !on[start.0 as usize] || used[start.0 as usize] {
            continue;
        }
        // walk a closed trail starting along `start` from its right face
        let mut here = s.face_left_of(Dart::forward(start).reversed());
        let mut e = start;
        loop {
            used[e.0 as usize] = true;
            let l = s.face_left_of(Dart::forward(e));
            let r = s.face_left_of(Dart::forward(e).reversed());
            // +1 when the trail crosses white→black from its right
            values[e.0 as usize] = if here == r { 1 } else { -1 };
            here = if here == r { l } else { r };
            match incident[here.0 as usize].iter().find(|&&x| !used[x.0 as usize]) {
                Some(&next) => e = next,
                None => break,
            }
        }
    }

    let mut cocycle = SignedCocycle { values };
    // normalize the sign of the pairing with the fundamental cycle
    if cocycle.value(leftover) < 0 {
        for v in &mut cocycle.values {
            *v = -*v;
        }
    }
    Ok(cocycle)
}

/// Signed edge chain: coefficient per edge on the white→black orientation.
pub fn chain_of_walk(s: &RhombicSurface, walk: &Walk) -> Vec<i64> {
    let mut chain = vec![0i64; s.edge_count()];
    for &d in walk.darts() {
        chain[d.edge.0 as usize] += if d.from_white { 1 } else { -1 };
    }
    chain
}

/// Verify that a signed edge chain has zero boundary at every vertex.
pub fn check_cycle(s: &RhombicSurface, chain: &[i64]) -> Result<()> {
    let mut defect = vec![0i64; s.vertex_count()];
    for (k, &c) in chain.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let e = EdgeId(k as u32);
        defect[s.white_end(e).0 as usize] -= c;
        defect[s.black_end(e).0 as usize] += c;
    }
    for (v, &d) in defect.iter().enumerate() {
        if d != 0 {
            return Err(Error::NotACycle { vertex: v as u32, defect: d });
        }
    }
    Ok(())
}

/// Class of a cycle in the dual-basis coordinates: component j is the
/// signed evaluation of β_j.
pub fn homology_class(s: &RhombicSurface, basis: &CycleBasis, chain: &[i64]) -> Result<Vec<i64>> {
    check_cycle(s, chain)?;
    Ok(basis.beta.iter().map(|b| b.eval_chain(chain)).collect())
}

/// Class of a cycle against the pushoff curves: component i is the signed
/// crossing number with the curve parallel to C_i. This is the grading the
/// partition-function identities use.
pub fn pushoff_class(s: &RhombicSurface, basis: &CycleBasis, chain: &[i64]) -> Result<Vec<i64>> {
    check_cycle(s, chain)?;
    Ok(basis.push.iter().map(|t| t.eval_chain(chain)).collect())
}
