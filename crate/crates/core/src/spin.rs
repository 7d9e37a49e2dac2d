//! Discrete canonical bundle, discrete spin structures, their quadratic
//! forms on H₁(Σ;ℤ₂), and Arf invariants.
//!
//! The canonical cochain κ encodes the inverse holonomy of the flat metric
//! through frame transport along edges; it exists once every cone angle is
//! a multiple of 2π. A discrete spin structure is a unit cocycle λ with
//! λ² = κ, constructed from the principal square root and a GF(2) face
//! correction, and the 2^{2g} equivalence classes form a torsor under
//! H¹(Σ;ℤ₂).

use num_complex::Complex64;

use crate::cochain::{GroupTag, UnitCochain};
use crate::error::{Error, Result};
use crate::homology::{cycle_basis, CycleBasis};
use crate::surface::{Dart, EdgeId, RhombicSurface, Walk, ANGLE_TOL, TAU};

/// Quantization tolerance for the winding integer in q_λ: looser than the
/// angle tolerance because the sum has one term per edge of the cycle.
pub const WINDING_TOL: f64 = 1e-6;

/// A unit cocycle λ with λ² = κ, stored with its branch angles
/// β_λ(e) ∈ [0, 2π), λ(e) = exp(iβ_λ(e)) on the white→black orientation.
#[derive(Clone, Debug)]
pub struct SpinCochain {
    branch: Vec<f64>,
}

impl SpinCochain {
    pub fn branch(&self, e: EdgeId) -> f64 {
        self.branch[e.0 as usize]
    }

    /// Signed branch angle along a dart: β_λ(-e) = -β_λ(e).
    pub fn branch_dart(&self, d: Dart) -> f64 {
        if d.from_white {
            self.branch[d.edge.0 as usize]
        } else {
            -self.branch[d.edge.0 as usize]
        }
    }

    pub fn value(&self, e: EdgeId) -> Complex64 {
        Complex64::from_polar(1.0, self.branch[e.0 as usize])
    }

    pub fn cochain(&self) -> UnitCochain {
        let values = self.branch.iter().map(|&b| Complex64::from_polar(1.0, b)).collect();
        UnitCochain::from_values(values, GroupTag::Circle).expect("unit by construction")
    }

    pub fn eval_walk(&self, walk: &Walk) -> Complex64 {
        self.cochain().eval_walk(walk)
    }

    /// Multiply by -1 on the edges where `parity` holds, folding the branch
    /// back into [0, 2π).
    pub fn twist_by<F: Fn(EdgeId) -> bool>(&self, parity: F) -> SpinCochain {
        let branch = self
            .branch
            .iter()
            .enumerate()
            .map(|(k, &b)| {
                if parity(EdgeId(k as u32)) {
                    (b + std::f64::consts::PI).rem_euclid(TAU)
                } else {
                    b
                }
            })
            .collect();
        SpinCochain { branch }
    }

    /// Gauge transform by a ±1 vertex function (spin-structure
    /// representatives of one class differ by exactly these).
    pub fn gauge_move(&self, s: &RhombicSurface, v: crate::surface::VertexId) -> SpinCochain {
        self.twist_by(|e| s.white_end(e) == v || s.black_end(e) == v)
    }
}

fn multiple_of_tau(theta: f64) -> Option<i64> {
    let n = (theta / TAU).round();
    if (theta - n * TAU).abs() <= ANGLE_TOL * (1.0 + n.abs()) {
        Some(n as i64)
    } else {
        None
    }
}

/// The discrete canonical bundle: κ(e) = exp(i(π + dir_b(e) - dir_w(e))),
/// the frame-transport rotation along the edge. Requires every cone angle
/// to be a positive multiple of 2π; validated against the face cocycle
/// condition and against the holonomy of the basis cycles.
pub fn canonical_cochain(s: &RhombicSurface) -> Result<UnitCochain> {
    for (point, theta) in s.cone_points() {
        match multiple_of_tau(theta) {
            Some(n) if n >= 1 => {}
            _ => {
                return Err(Error::NonIntegralConeAngle { location: point.to_string(), theta })
            }
        }
    }
    let values: Vec<Complex64> = s
        .edges()
        .map(|e| {
            let w = s.white_end(e);
            let b = s.black_end(e);
            let angle = std::f64::consts::PI + s.direction_at(b, e) - s.direction_at(w, e);
            Complex64::from_polar(1.0, angle)
        })
        .collect();
    let kappa = UnitCochain::from_values(values, GroupTag::Circle)?;

    // cocycle condition on every face
    for f in s.faces() {
        let val = kappa.eval_walk(&Walk::from_face(f));
        if (val - Complex64::new(1.0, 0.0)).norm() > ANGLE_TOL * f.len() as f64 {
            return Err(Error::HolonomyMismatch(format!(
                "κ(∂f) = {val} differs from 1 on face f{}",
                f.id.0
            )));
        }
    }
    // κ inverts the holonomy: on any cycle it equals exp(i Σ_v α_v(C))
    let basis = cycle_basis(s)?;
    for c in &basis.cycles {
        let got = kappa.eval_walk(c);
        let mut turning = 0.0;
        for vis in c.visits(s) {
            turning += s.corner_angle(vis.vertex, vis.e_in, vis.e_out)?;
        }
        let want = Complex64::from_polar(1.0, turning);
        if (got - want).norm() > ANGLE_TOL * c.len() as f64 {
            return Err(Error::HolonomyMismatch(format!(
                "κ(C) = {got} but exp(iΣα_v(C)) = {want}"
            )));
        }
    }
    Ok(kappa)
}

/// A base discrete spin structure: the principal square root of κ,
/// corrected on a GF(2) face system so that λ(∂f) = 1 everywhere.
pub fn spin_base(s: &RhombicSurface, kappa: &UnitCochain) -> Result<SpinCochain> {
    // principal branch: κ(e) = exp(iβ), β ∈ [0, 2π), λ_raw = exp(iβ/2)
    let raw: Vec<f64> = s
        .edges()
        .map(|e| {
            let v = kappa.value(e);
            v.im.atan2(v.re).rem_euclid(TAU) / 2.0
        })
        .collect();
    let lambda_raw = SpinCochain { branch: raw };

    // Face defects are ±1 because λ_raw² = κ and κ(∂f) = 1. Fix them with a
    // ±1 cochain solved along the dual spanning tree; the root face closes
    // since every edge borders two face sides.
    let tc = crate::homology::tree_cotree(s)?;
    let mut flip = vec![false; s.edge_count()];
    let defect_sign = |branches: &SpinCochain, flips: &[bool], f: &crate::surface::FaceWalk| -> Result<bool> {
        let mut angle = 0.0;
        let mut parity = false;
        for &d in f.darts() {
            angle += branches.branch_dart(d);
            if flips[d.edge.0 as usize] {
                parity ^= true;
            }
        }
        let val = Complex64::from_polar(1.0, angle) * if parity { -1.0 } else { 1.0 };
        if (val.re.abs() - 1.0).abs() > ANGLE_TOL * f.len() as f64 || val.im.abs() > ANGLE_TOL * f.len() as f64 {
            return Err(Error::Gf2Inconsistent(format!(
                "face defect {val} is not ±1 on face f{}",
                f.id.0
            )));
        }
        Ok(val.re < 0.0)
    };
    for &fid in tc.face_order.iter().skip(1).rev() {
        let (_, solve_edge) = tc.face_parent[fid.0 as usize].expect("non-root face");
        let f = s.face(fid);
        let without = {
            let mut tmp = flip.clone();
            tmp[solve_edge.0 as usize] = false;
            defect_sign(&lambda_raw, &tmp, f)?
        };
        flip[solve_edge.0 as usize] = without;
    }
    let root = s.face(tc.face_order[0]);
    if defect_sign(&lambda_raw, &flip, root)? {
        return Err(Error::Gf2Inconsistent("root face defect did not cancel".into()));
    }

    let lambda = lambda_raw.twist_by(|e| flip[e.0 as usize]);
    validate_spin(s, kappa, &lambda)?;
    Ok(lambda)
}

/// Check λ² = κ edgewise and λ(∂f) = 1 facewise.
pub fn validate_spin(s: &RhombicSurface, kappa: &UnitCochain, lambda: &SpinCochain) -> Result<()> {
    for e in s.edges() {
        let sq = Complex64::from_polar(1.0, 2.0 * lambda.branch(e));
        if (sq - kappa.value(e)).norm() > ANGLE_TOL {
            return Err(Error::HolonomyMismatch(format!(
                "λ² differs from κ on {e}: {sq} vs {}",
                kappa.value(e)
            )));
        }
    }
    for f in s.faces() {
        let angle: f64 = f.darts().iter().map(|&d| lambda.branch_dart(d)).sum();
        let val = Complex64::from_polar(1.0, angle);
        if (val - Complex64::new(1.0, 0.0)).norm() > ANGLE_TOL * f.len() as f64 {
            return Err(Error::HolonomyMismatch(format!(
                "λ(∂f) = {val} differs from 1 on face f{}",
                f.id.0
            )));
        }
    }
    Ok(())
}

/// All 2^{2g} spin structures: λ_ε = λ₀ · (-1)^{Σ_j ε_j β_j}, indexed by the
/// bitmask of ε over the dual cocycles of `basis`. Pairwise non-cohomologous.
pub fn spin_family(basis: &CycleBasis, base: &SpinCochain) -> Vec<SpinCochain> {
    let rank = basis.rank();
    (0u32..(1 << rank))
        .map(|mask| {
            base.twist_by(|e| {
                (0..rank)
                    .filter(|&j| mask & (1 << j) != 0)
                    .fold(false, |acc, j| acc ^ basis.beta[j].parity(e))
            })
        })
        .collect()
}

/// The star-normalization target on a basis cycle:
/// exp(iΣ_{w∈W∩C} α_w(C)) · (-1)^{|C|/2 + 1}.
pub fn star_target(s: &RhombicSurface, walk: &Walk) -> Result<Complex64> {
    let mut white_turning = 0.0;
    for vis in walk.visits(s) {
        if s.is_white(vis.vertex) {
            white_turning += s.corner_angle(vis.vertex, vis.e_in, vis.e_out)?;
        }
    }
    let sign = if (walk.len() / 2 + 1) % 2 == 0 { 1.0 } else { -1.0 };
    Ok(Complex64::from_polar(1.0, white_turning) * sign)
}

/// Normalize a spin structure so that λ₀(C_j) equals the star target on
/// every basis cycle. Under condition (ii) the mismatch is a sign, fixed by
/// twisting with the matching dual cocycles; anything else reports
/// `StarUnreachable`.
pub fn star_normalize(s: &RhombicSurface, basis: &CycleBasis, lambda: &SpinCochain) -> Result<SpinCochain> {
    let mut flips = Vec::with_capacity(basis.rank());
    for (j, c) in basis.cycles.iter().enumerate() {
        let target = star_target(s, c)?;
        let ratio = lambda.eval_walk(c) * target.conj();
        if (ratio - Complex64::new(1.0, 0.0)).norm() < ANGLE_TOL * c.len() as f64 {
            flips.push(false);
        } else if (ratio + Complex64::new(1.0, 0.0)).norm() < ANGLE_TOL * c.len() as f64 {
            flips.push(true);
        } else {
            return Err(Error::StarUnreachable(format!(
                "λ(C_{j}) misses the star target by the non-sign factor {ratio}"
            )));
        }
    }
    let result = lambda.twist_by(|e| {
        (0..basis.rank())
            .filter(|&j| flips[j])
            .fold(false, |acc, j| acc ^ basis.beta[j].parity(e))
    });
    for (j, c) in basis.cycles.iter().enumerate() {
        let target = star_target(s, c)?;
        let got = result.eval_walk(c);
        if (got - target).norm() > ANGLE_TOL * c.len() as f64 {
            return Err(Error::StarUnreachable(format!(
                "normalization failed on C_{j}: {got} vs {target}"
            )));
        }
    }
    Ok(result)
}

/// A ℤ₂ quadratic form on H₁(Σ;ℤ₂) refining the intersection form: values
/// on the basis classes plus the expansion rule
/// q(x + y) = q(x) + q(y) + x·y.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticForm {
    pub values: Vec<bool>,
    pub q_matrix: Vec<Vec<bool>>,
}

impl QuadraticForm {
    /// Evaluate on the class Σ ε_j c_j.
    pub fn eval(&self, eps: u32) -> bool {
        let rank = self.values.len();
        let mut acc = false;
        for i in 0..rank {
            if eps & (1 << i) == 0 {
                continue;
            }
            acc ^= self.values[i];
            for j in i + 1..rank {
                if eps & (1 << j) != 0 && self.q_matrix[i][j] {
                    acc ^= true;
                }
            }
        }
        acc
    }
}

/// The quadratic form of a spin structure, by the winding formula on the
/// basis cycles:
///
/// ```text
/// q_λ(C) = 1 + |C|/2 + (Σ_{e ⊂ C} 2β_λ(e) - Σ_{v ∈ C} α_v(C)) / 2π   (mod 2)
/// ```
///
/// Requires all cone angles to be odd multiples of 2π. The parenthesized
/// sum must quantize to a multiple of 2π within 1e-6.
pub fn quadratic_form(s: &RhombicSurface, lambda: &SpinCochain, basis: &CycleBasis) -> Result<QuadraticForm> {
    for (point, theta) in s.cone_points() {
        match multiple_of_tau(theta) {
            Some(n) if n.rem_euclid(2) == 1 => {}
            _ => return Err(Error::EvenConeAngle { location: point.to_string(), theta }),
        }
    }
    let mut values = Vec::with_capacity(basis.rank());
    for c in &basis.cycles {
        values.push(winding_parity(s, lambda, c)?);
    }
    Ok(QuadraticForm { values, q_matrix: basis.q.clone() })
}

/// The winding integer of the formula above, reduced mod 2.
fn winding_parity(s: &RhombicSurface, lambda: &SpinCochain, c: &Walk) -> Result<bool> {
    let mut sum = 0.0;
    for &d in c.darts() {
        sum += 2.0 * lambda.branch_dart(d);
    }
    for vis in c.visits(s) {
        sum -= s.corner_angle(vis.vertex, vis.e_in, vis.e_out)?;
    }
    let n = (sum / TAU).round();
    if (sum - n * TAU).abs() > WINDING_TOL {
        return Err(Error::NonIntegerWinding { value: sum / TAU });
    }
    let total = 1 + (c.len() / 2) as i64 + n as i64;
    Ok(total.rem_euclid(2) == 1)
}

/// Arf invariant by the democratic sum: Σ_x (-1)^{q(x)} = ±2^g, and the
/// invariant is the sign. Any other modulus means the input was not a
/// quadratic refinement.
pub fn arf(q: &QuadraticForm) -> Result<bool> {
    let rank = q.values.len();
    let mut sum: i64 = 0;
    for eps in 0u32..(1 << rank) {
        sum += if q.eval(eps) { -1 } else { 1 };
    }
    let g = rank / 2;
    if sum.abs() != 1 << g {
        return Err(Error::NotPlusMinus2g { sum });
    }
    Ok(sum < 0)
}
