//! Group-valued 1-cochains on the embedded graph: Kasteleyn curvature,
//! flatness, gauge equivalence, and the torsor of flat cochains.
//!
//! Values live on the white→black orientation; traversing an edge the other
//! way evaluates the inverse. The group is either the full unit circle or
//! its ±1 subgroup (Kasteleyn orientations).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::homology::CycleBasis;
use crate::surface::{Dart, EdgeId, FaceId, RhombicSurface, Walk, ANGLE_TOL};

/// Which subgroup of ℂ* the cochain takes values in.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GroupTag {
    Circle,
    Signs,
}

pub const UNIT_TOL: f64 = 1e-12;

/// How many factors to multiply before renormalizing to unit modulus.
const RENORM_EVERY: usize = 64;

#[derive(Clone, Debug)]
pub struct UnitCochain {
    values: Vec<Complex64>,
    tag: GroupTag,
}

impl UnitCochain {
    pub fn from_values(values: Vec<Complex64>, tag: GroupTag) -> Result<Self> {
        for (k, v) in values.iter().enumerate() {
            if (v.norm() - 1.0).abs() > UNIT_TOL {
                return Err(Error::InvalidSurface(format!(
                    "cochain value on e{k} has modulus {}",
                    v.norm()
                )));
            }
            if tag == GroupTag::Signs && v.im != 0.0 {
                return Err(Error::InvalidSurface(format!("cochain value on e{k} is not ±1")));
            }
        }
        Ok(UnitCochain { values, tag })
    }

    pub fn ones(s: &RhombicSurface, tag: GroupTag) -> Self {
        UnitCochain { values: vec![Complex64::new(1.0, 0.0); s.edge_count()], tag }
    }

    pub fn tag(&self) -> GroupTag {
        self.tag
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, e: EdgeId) -> Complex64 {
        self.values[e.0 as usize]
    }

    /// Value along a dart: `ω(e)` white→black, `ω(e)^{-1}` black→white.
    pub fn eval_dart(&self, d: Dart) -> Complex64 {
        let v = self.values[d.edge.0 as usize];
        if d.from_white {
            v
        } else {
            v.conj()
        }
    }

    /// Product along a closed walk, renormalized periodically against
    /// modulus drift.
    pub fn eval_walk(&self, walk: &Walk) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for (k, &d) in walk.darts().iter().enumerate() {
            acc *= self.eval_dart(d);
            if (k + 1) % RENORM_EVERY == 0 {
                acc /= acc.norm();
            }
        }
        acc / acc.norm()
    }

    /// Pointwise product.
    pub fn product(&self, other: &UnitCochain) -> UnitCochain {
        let values =
            self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        let tag = if self.tag == GroupTag::Signs && other.tag == GroupTag::Signs {
            GroupTag::Signs
        } else {
            GroupTag::Circle
        };
        UnitCochain { values, tag }
    }

    /// Multiply by -1 on the edges where `parity` holds.
    pub fn twist_by<F: Fn(EdgeId) -> bool>(&self, parity: F) -> UnitCochain {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(k, &v)| if parity(EdgeId(k as u32)) { -v } else { v })
            .collect();
        UnitCochain { values, tag: self.tag }
    }

    /// Gauge move: multiply every edge at `v` by `g`.
    pub fn gauge_move(&self, s: &RhombicSurface, v: crate::surface::VertexId, g: Complex64) -> UnitCochain {
        let mut values = self.values.clone();
        for &e in s.rotation(v) {
            values[e.0 as usize] *= g;
        }
        UnitCochain { values, tag: if g.im == 0.0 && g.re.abs() == 1.0 { self.tag } else { GroupTag::Circle } }
    }
}

/// Kasteleyn curvature at a face: `c_ω(f) = (-1)^{|∂f|/2 + 1} ω(∂f)`, the
/// boundary traversed with the face on the left.
pub fn curvature(s: &RhombicSurface, omega: &UnitCochain, f: FaceId) -> Complex64 {
    let walk = Walk::from_face(s.face(f));
    let sign = if (walk.len() / 2 + 1) % 2 == 0 { 1.0 } else { -1.0 };
    omega.eval_walk(&walk) * sign
}

/// Flat iff the curvature is 1 on every face (within 1e-9).
pub fn is_flat(s: &RhombicSurface, omega: &UnitCochain) -> bool {
    s.faces()
        .iter()
        .all(|f| (curvature(s, omega, f.id) - Complex64::new(1.0, 0.0)).norm() < ANGLE_TOL)
}

/// Trivialize the curvature: returns `φω` with `δφ = c_ω^{-1}`, hence flat.
/// Exists iff the vertex count is even. φ is solved face by face along the
/// dual spanning tree; the last face closes by the total-curvature identity
/// Π_f c_ω(f) = (-1)^V.
pub fn make_flat(s: &RhombicSurface, omega: &UnitCochain) -> Result<UnitCochain> {
    if s.vertex_count() % 2 != 0 {
        return Err(Error::OddVertexCount { count: s.vertex_count() });
    }
    let tc = crate::homology::tree_cotree(s)?;
    let mut phi = vec![Complex64::new(1.0, 0.0); s.edge_count()];
    // process leaves of the dual tree first
    for &f in tc.face_order.iter().skip(1).rev() {
        let (_, solve_edge) = tc.face_parent[f.0 as usize].expect("non-root face");
        let target = curvature(s, omega, f).conj(); // want φ(∂f) = c_ω(f)^{-1}
        let mut known = Complex64::new(1.0, 0.0);
        let mut solve_dart = None;
        for &d in s.face(f).darts() {
            if d.edge == solve_edge {
                solve_dart = Some(d);
            } else {
                let v = phi[d.edge.0 as usize];
                known *= if d.from_white { v } else { v.conj() };
            }
        }
        let d = solve_dart.expect("tree dual edge borders its face once");
        let needed = target * known.conj();
        phi[solve_edge.0 as usize] = if d.from_white { needed } else { needed.conj() };
    }
    let phi = UnitCochain {
        values: phi.iter().map(|v| v / v.norm()).collect(),
        tag: if omega.tag == GroupTag::Signs { GroupTag::Signs } else { GroupTag::Circle },
    };
    let result = phi.product(omega);
    // the root face is the one equation not solved explicitly
    let root = tc.face_order[0];
    let defect = (curvature(s, &result, root) - Complex64::new(1.0, 0.0)).norm();
    if defect > ANGLE_TOL {
        return Err(Error::Gf2Inconsistent(format!(
            "root face curvature defect {defect} after trivialization"
        )));
    }
    debug_assert!(is_flat(s, &result));
    Ok(result)
}

/// Gauge equivalence: `ω'` and `ω` differ by a coboundary, i.e. by vertex
/// gauge moves. Decided by normalizing the ratio to 1 on a spanning tree
/// and comparing the rest.
pub fn are_equivalent(s: &RhombicSurface, omega: &UnitCochain, other: &UnitCochain) -> bool {
    let tc = match crate::homology::tree_cotree(s) {
        Ok(tc) => tc,
        Err(_) => return false,
    };
    // ratio ρ = ω'/ω must equal δg: ρ(e) = g(w) g(b)
    let ratio: Vec<Complex64> = (0..s.edge_count())
        .map(|k| other.values[k] * omega.values[k].conj())
        .collect();
    let mut gauge = vec![Complex64::new(1.0, 0.0); s.vertex_count()];
    // BFS order from the parent pointers: parents come earlier in depth
    let mut order: Vec<u32> = (0..s.vertex_count() as u32).collect();
    order.sort_by_key(|&v| tc.depth[v as usize]);
    for v in order {
        if let Some((p, e)) = tc.parent[v as usize] {
            gauge[v as usize] = ratio[e.0 as usize] * gauge[p.0 as usize].conj();
        }
    }
    for e in s.edges() {
        let k = e.0 as usize;
        let expect = gauge[s.white_end(e).0 as usize] * gauge[s.black_end(e).0 as usize];
        if (ratio[k] * expect.conj() - Complex64::new(1.0, 0.0)).norm() > ANGLE_TOL {
            return false;
        }
    }
    true
}

/// One representative per equivalence class of ±1 flat cochains: the
/// trivialized base twisted by every subset of the dual cocycles β_j.
/// Exactly 2^{2g} pairwise non-equivalent classes (the H¹ torsor).
pub fn flat_classes(s: &RhombicSurface, basis: &CycleBasis) -> Result<Vec<UnitCochain>> {
    let base = make_flat(s, &UnitCochain::ones(s, GroupTag::Signs))?;
    let rank = basis.rank();
    let mut out = Vec::with_capacity(1 << rank);
    for mask in 0u32..(1 << rank) {
        let twisted = base.twist_by(|e| {
            (0..rank)
                .filter(|&j| mask & (1 << j) != 0)
                .fold(false, |acc, j| acc ^ basis.beta[j].parity(e))
        });
        out.push(twisted);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;
    use crate::homology::cycle_basis;
    use crate::surface::{Color, RhombicSurface, VertexId, TAU};
    use num_complex::Complex64 as C;

    fn ones(s: &RhombicSurface) -> UnitCochain {
        UnitCochain::ones(s, GroupTag::Signs)
    }

    #[test]
    fn curvature_sign_prefactor() {
        // ω ≡ 1: square face gives -1, hexagonal face +1
        let sq = builders::genus2_octagon(1).unwrap();
        let quad = sq.faces().iter().find(|f| f.len() == 4).unwrap().id;
        assert_eq!(curvature(&sq, &ones(&sq), quad), C::new(-1.0, 0.0));

        let hex = builders::honeycomb_torus(2, 3).unwrap();
        for f in hex.faces() {
            assert_eq!(f.len(), 6);
            assert_eq!(curvature(&hex, &ones(&hex), f.id), C::new(1.0, 0.0));
        }
        assert!(is_flat(&hex, &ones(&hex)));
        assert!(!is_flat(&sq, &ones(&sq)));
    }

    #[test]
    fn total_curvature_is_vertex_parity() {
        for s in [
            builders::honeycomb_torus(2, 3).unwrap(),
            builders::genus2_octagon(1).unwrap(),
        ] {
            let omega = ones(&s);
            let product = s
                .faces()
                .iter()
                .fold(C::new(1.0, 0.0), |acc, f| acc * curvature(&s, &omega, f.id));
            let expect = if s.vertex_count() % 2 == 0 { 1.0 } else { -1.0 };
            assert!((product - C::new(expect, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn make_flat_square_lattice() {
        let s = builders::genus2_octagon(1).unwrap();
        let flat = make_flat(&s, &ones(&s)).unwrap();
        assert!(is_flat(&s, &flat));
        assert_eq!(flat.tag(), GroupTag::Signs);
        for e in s.edges() {
            assert!(flat.value(e).im == 0.0 && flat.value(e).re.abs() == 1.0);
        }
    }

    #[test]
    fn make_flat_idempotent_up_to_gauge() {
        let s = builders::honeycomb_torus(2, 3).unwrap();
        let flat = make_flat(&s, &ones(&s)).unwrap();
        let again = make_flat(&s, &flat).unwrap();
        assert!(are_equivalent(&s, &flat, &again));
    }

    #[test]
    fn make_flat_respects_gauge_classes() {
        // gauge-equivalent inputs trivialize to gauge-equivalent outputs
        let s = builders::honeycomb_torus(2, 3).unwrap();
        let base = ones(&s);
        let moved = base
            .gauge_move(&s, VertexId(1), C::new(-1.0, 0.0))
            .gauge_move(&s, VertexId(8), C::new(-1.0, 0.0));
        let a = make_flat(&s, &base).unwrap();
        let b = make_flat(&s, &moved).unwrap();
        assert!(are_equivalent(&s, &a, &b));
    }

    #[test]
    fn odd_vertex_count_has_no_flat_cochain() {
        // two degree-3 whites joined to one black of cone angle 4π: a valid
        // torus with three vertices
        let colors = vec![Color::White, Color::White, Color::Black];
        let w = VertexId(0);
        let w2 = VertexId(1);
        let b = VertexId(2);
        let edges = vec![(w, b), (w, b), (w, b), (w2, b), (w2, b), (w2, b)];
        let e = |k: u32| crate::surface::EdgeId(k);
        let rotations = vec![
            vec![e(0), e(1), e(2)],
            vec![e(3), e(4), e(5)],
            vec![e(0), e(3), e(1), e(4), e(2), e(5)],
        ];
        let s = RhombicSurface::new(1.0, colors, edges, vec![TAU / 3.0; 6], rotations).unwrap();
        assert_eq!(s.genus(), 1);
        assert!(matches!(
            make_flat(&s, &ones(&s)),
            Err(Error::OddVertexCount { count: 3 })
        ));
    }

    #[test]
    fn gauge_move_preserves_class_and_flatness() {
        let s = builders::honeycomb_torus(2, 3).unwrap();
        let flat = make_flat(&s, &ones(&s)).unwrap();
        let moved = flat.gauge_move(&s, VertexId(3), C::new(-1.0, 0.0));
        assert!(is_flat(&s, &moved));
        assert!(are_equivalent(&s, &flat, &moved));
        // a unit-circle gauge move also stays in the class
        let rotated = flat.gauge_move(&s, VertexId(2), C::from_polar(1.0, 0.7));
        assert!(are_equivalent(&s, &flat, &rotated));
    }

    #[test]
    fn cocycle_twist_changes_class() {
        let s = builders::honeycomb_torus(2, 3).unwrap();
        let basis = cycle_basis(&s).unwrap();
        let flat = make_flat(&s, &ones(&s)).unwrap();
        let twisted = flat.twist_by(|e| basis.beta[0].parity(e));
        assert!(is_flat(&s, &twisted), "cocycle twists preserve flatness");
        assert!(!are_equivalent(&s, &flat, &twisted));
    }

    #[test]
    fn random_circle_cochains_flatten() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let s = builders::genus2_octagon(1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(27);
        for _ in 0..5 {
            let values: Vec<C> = (0..s.edge_count())
                .map(|_| C::from_polar(1.0, rng.gen_range(0.0..TAU)))
                .collect();
            let omega = UnitCochain::from_values(values, GroupTag::Circle).unwrap();
            let flat = make_flat(&s, &omega).unwrap();
            assert!(is_flat(&s, &flat));
            // pre-gauging the input does not move the output class
            let moved = omega.gauge_move(&s, VertexId(3), C::from_polar(1.0, 1.23));
            let flat2 = make_flat(&s, &moved).unwrap();
            assert!(are_equivalent(&s, &flat, &flat2));
        }
    }

    #[test]
    fn flat_classes_are_pairwise_distinct() {
        let s = builders::honeycomb_torus(2, 3).unwrap();
        let basis = cycle_basis(&s).unwrap();
        let classes = flat_classes(&s, &basis).unwrap();
        assert_eq!(classes.len(), 4);
        for c in &classes {
            assert!(is_flat(&s, c));
        }
        for i in 0..classes.len() {
            for j in i + 1..classes.len() {
                assert!(!are_equivalent(&s, &classes[i], &classes[j]));
            }
        }
    }
}
