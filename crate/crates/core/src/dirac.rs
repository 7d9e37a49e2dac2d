//! The reference cochain ω_V, the two Kasteleyn conditions of the main
//! equivalence, and the discrete Dirac matrices D_λ.

use num_complex::Complex64;

use crate::cochain::{curvature, GroupTag, UnitCochain};
use crate::error::{Error, Result};
use crate::homology::CycleBasis;
use crate::linalg::CMatrix;
use crate::spin::SpinCochain;
use crate::surface::{Nu, RhombicSurface, VertexId, Walk, ANGLE_TOL, TAU};

/// ω_V(e) = exp(iϑ_V(w,b)) for the default reference directions. The
/// curvature identity c_{ω_V}(f) = -exp(iθ_f/2) is asserted on every face;
/// a failure signals an orientation-convention bug.
pub fn omega_v(s: &RhombicSurface) -> Result<UnitCochain> {
    let values = s
        .edges()
        .map(|e| Complex64::from_polar(1.0, s.direction_at(s.white_end(e), e)))
        .collect();
    let omega = UnitCochain::from_values(values, GroupTag::Circle)?;
    for f in s.faces() {
        let c = curvature(s, &omega, f.id);
        let want = -Complex64::from_polar(1.0, s.theta_face(f.id) / 2.0);
        let defect = (c - want).norm();
        if defect > ANGLE_TOL * f.len() as f64 {
            return Err(Error::CurvatureIdentityFailed { face: f.id.0, defect });
        }
    }
    Ok(omega)
}

/// Condition (i): every dual-vertex cone angle is an odd multiple of 2π.
pub fn condition_i(s: &RhombicSurface) -> bool {
    s.faces().iter().all(|f| {
        let theta = s.theta_face(f.id);
        let n = (theta / TAU).round();
        (theta - n * TAU).abs() <= ANGLE_TOL && (n as i64).rem_euclid(2) == 1
    })
}

/// Condition (ii) residues: for each basis cycle,
/// `Σ_{b ∈ B∩C_j} α_b(C_j) - Σ_{w ∈ W∩C_j} α_w(C_j)` folded to (-π, π].
/// The condition holds iff every residue vanishes (within 1e-9).
pub fn condition_ii_residues(s: &RhombicSurface, basis: &CycleBasis) -> Result<Vec<f64>> {
    basis
        .cycles
        .iter()
        .map(|c| {
            let mut sum = 0.0;
            for vis in c.visits(s) {
                let a = s.corner_angle(vis.vertex, vis.e_in, vis.e_out)?;
                sum += if s.is_white(vis.vertex) { -a } else { a };
            }
            // fold to (-π, π]
            let folded = sum - TAU * (sum / TAU).round();
            Ok(if folded <= -std::f64::consts::PI { folded + TAU } else { folded })
        })
        .collect()
}

pub fn condition_ii(s: &RhombicSurface, basis: &CycleBasis) -> Result<bool> {
    Ok(condition_ii_residues(s, basis)?.iter().all(|r| r.abs() < ANGLE_TOL))
}

/// Row/column index maps of the Dirac matrix: whites and blacks in
/// increasing vertex order.
#[derive(Clone, Debug)]
pub struct DiracIndex {
    pub whites: Vec<VertexId>,
    pub blacks: Vec<VertexId>,
}

impl DiracIndex {
    pub fn new(s: &RhombicSurface) -> Self {
        DiracIndex { whites: s.white_vertices().collect(), blacks: s.black_vertices().collect() }
    }
}

/// Build the matrix of a weighted, cochain-twisted bipartite adjacency
/// operator: entry (w, b) sums ν(e)·ω(e) over the edges joining w and b.
pub fn adjacency_matrix(s: &RhombicSurface, omega: &UnitCochain, nu: Nu) -> (CMatrix, DiracIndex) {
    let index = DiracIndex::new(s);
    let mut row_of = vec![usize::MAX; s.vertex_count()];
    for (i, &w) in index.whites.iter().enumerate() {
        row_of[w.0 as usize] = i;
    }
    let mut col_of = vec![usize::MAX; s.vertex_count()];
    for (j, &b) in index.blacks.iter().enumerate() {
        col_of[b.0 as usize] = j;
    }
    let mut m = CMatrix::zeros(index.whites.len(), index.blacks.len());
    for e in s.edges() {
        let i = row_of[s.white_end(e).0 as usize];
        let j = col_of[s.black_end(e).0 as usize];
        m.add_assign(i, j, omega.value(e) * s.weight(e, nu));
    }
    (m, index)
}

/// The discrete Dirac operator D_λ: the (Γ,ν) adjacency matrix twisted by
/// ω_λ = ω_V·λ, rows over whites, columns over blacks.
pub fn dirac_matrix(s: &RhombicSurface, lambda: &SpinCochain, nu: Nu) -> Result<(CMatrix, DiracIndex)> {
    let omega = omega_v(s)?.product(&lambda.cochain());
    Ok(adjacency_matrix(s, &omega, nu))
}

/// Same with per-white reference rotations: row w is multiplied by
/// exp(-i·offset_w).
pub fn dirac_matrix_with_offsets(
    s: &RhombicSurface,
    lambda: &SpinCochain,
    nu: Nu,
    offsets: &[f64],
) -> Result<(CMatrix, DiracIndex)> {
    let (mut m, index) = dirac_matrix(s, lambda, nu)?;
    for (i, _) in index.whites.iter().enumerate() {
        let phase = Complex64::from_polar(1.0, -offsets[i]);
        for j in 0..index.blacks.len() {
            m.set(i, j, m.get(i, j) * phase);
        }
    }
    Ok((m, index))
}

/// Decides whether D_λ is a Kasteleyn matrix: by the main equivalence this
/// is condition (i) ∧ condition (ii), independent of λ.
pub fn is_kasteleyn(s: &RhombicSurface, basis: &CycleBasis) -> Result<bool> {
    Ok(condition_i(s) && condition_ii(s, basis)?)
}

/// Direct cross-check of the equivalence: ω_λ = ω_V·λ must square to 1 on
/// every basis cycle for D_λ to be gauge-equivalent to a real Kasteleyn
/// matrix.
pub fn kasteleyn_cross_check(
    s: &RhombicSurface,
    lambda: &SpinCochain,
    basis: &CycleBasis,
) -> Result<bool> {
    let omega = omega_v(s)?.product(&lambda.cochain());
    for c in &basis.cycles {
        let v = omega.eval_walk(c);
        let sq = v * v;
        if (sq - Complex64::new(1.0, 0.0)).norm() > ANGLE_TOL * c.len() as f64 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Walk evaluation helper for reporting: ω_λ on a cycle.
pub fn omega_lambda_on(s: &RhombicSurface, lambda: &SpinCochain, walk: &Walk) -> Result<Complex64> {
    Ok(omega_v(s)?.product(&lambda.cochain()).eval_walk(walk))
}
