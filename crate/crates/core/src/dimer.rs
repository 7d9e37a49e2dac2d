//! Exact dimer enumeration (the oracle) and both sides of the
//! partition-function identities: the alternating determinant sums over the
//! 2^{2g} spin sectors, with coefficients either from the intersection form
//! or from Arf invariants, and the character-twisted partial partition
//! functions.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::cochain::{make_flat, GroupTag, UnitCochain};
use crate::dirac::{adjacency_matrix, condition_i, condition_ii, dirac_matrix, omega_v};
use crate::error::{Error, Result};
use crate::homology::{cycle_basis_from, pushoff_cocycle, tree_cotree, CycleBasis};
use crate::spin::{arf, canonical_cochain, quadratic_form, spin_base, star_normalize, QuadraticForm, SpinCochain};
use crate::surface::{Dart, EdgeId, Nu, RhombicSurface, VertexId, Walk};

/// All perfect matchings, in the deterministic order produced by
/// lowest-unmatched-vertex backtracking. Empty when |W| ≠ |B|.
#[derive(Clone, Debug)]
pub struct DimerCensus {
    pub matchings: Vec<Vec<EdgeId>>,
}

impl DimerCensus {
    pub fn len(&self) -> usize {
        self.matchings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matchings.is_empty()
    }
}

/// Exhaustive backtracking on the lowest unmatched vertex. On graphs with
/// at most 20 vertices the count is re-derived independently by a Ryser
/// permanent and must agree.
pub fn enumerate_matchings(s: &RhombicSurface) -> Result<DimerCensus> {
    let whites = s.white_vertices().count();
    let blacks = s.black_vertices().count();
    if whites != blacks {
        return Ok(DimerCensus { matchings: Vec::new() });
    }
    let nv = s.vertex_count();
    let mut matched = vec![false; nv];
    let mut current: Vec<EdgeId> = Vec::with_capacity(whites);
    let mut out: Vec<Vec<EdgeId>> = Vec::new();

    // `from` is a scan hint: everything below it is already matched, since
    // we always branch on the lowest unmatched vertex
    fn recurse(
        s: &RhombicSurface,
        from: usize,
        matched: &mut [bool],
        current: &mut Vec<EdgeId>,
        out: &mut Vec<Vec<EdgeId>>,
    ) {
        let Some(v) = (from..matched.len()).find(|&v| !matched[v]) else {
            let mut m = current.clone();
            m.sort_unstable();
            out.push(m);
            return;
        };
        let vid = VertexId(v as u32);
        matched[v] = true;
        for &e in s.rotation(vid) {
            let u = s.other_endpoint(e, vid);
            if matched[u.0 as usize] {
                continue;
            }
            matched[u.0 as usize] = true;
            current.push(e);
            recurse(s, v + 1, matched, current, out);
            current.pop();
            matched[u.0 as usize] = false;
        }
        matched[v] = false;
    }
    recurse(s, 0, &mut matched, &mut current, &mut out);

    if nv <= 20 {
        let recount = ryser_matching_count(s);
        if recount != out.len() as i128 {
            return Err(Error::ConstructionInvalid(format!(
                "census size {} disagrees with permanent recount {recount}",
                out.len()
            )));
        }
    }
    Ok(DimerCensus { matchings: out })
}

/// Permanent of the white×black multiplicity matrix by Ryser's formula:
/// counts perfect matchings of the multigraph.
fn ryser_matching_count(s: &RhombicSurface) -> i128 {
    let whites: Vec<VertexId> = s.white_vertices().collect();
    let blacks: Vec<VertexId> = s.black_vertices().collect();
    let n = whites.len();
    if n != blacks.len() {
        return 0;
    }
    let mut col = vec![usize::MAX; s.vertex_count()];
    for (j, &b) in blacks.iter().enumerate() {
        col[b.0 as usize] = j;
    }
    let mut a = vec![vec![0i128; n]; n];
    for (i, &w) in whites.iter().enumerate() {
        for &e in s.rotation(w) {
            a[i][col[s.black_end(e).0 as usize]] += 1;
        }
    }
    // Σ over column subsets S of (-1)^{n-|S|} Π_i Σ_{j∈S} a[i][j]
    let mut total: i128 = 0;
    for mask in 1u32..(1 << n) {
        let bits = mask.count_ones() as usize;
        let mut prod: i128 = 1;
        for row in a.iter() {
            let mut sum = 0i128;
            for (j, &v) in row.iter().enumerate() {
                if mask & (1 << j) != 0 {
                    sum += v;
                }
            }
            prod *= sum;
            if prod == 0 {
                break;
            }
        }
        if (n - bits) % 2 == 0 {
            total += prod;
        } else {
            total -= prod;
        }
    }
    total
}

pub fn matching_weight(s: &RhombicSurface, matching: &[EdgeId], nu: Nu) -> f64 {
    matching.iter().map(|&e| s.weight(e, nu)).product()
}

/// Z(Γ,ν) = Σ_M Π_{e∈M} ν(e) over the census.
pub fn partition_brute(s: &RhombicSurface, census: &DimerCensus, nu: Nu) -> f64 {
    census.matchings.iter().map(|m| matching_weight(s, m, nu)).sum()
}

/// Signed chain of M − M₀ with M traversed white→black and M₀ black→white.
fn matching_difference(s: &RhombicSurface, m: &[EdgeId], m0: &[EdgeId]) -> Vec<i64> {
    let mut chain = vec![0i64; s.edge_count()];
    for &e in m {
        chain[e.0 as usize] += 1;
    }
    for &e in m0 {
        chain[e.0 as usize] -= 1;
    }
    chain
}

/// Partial partition functions: weights grouped by the class vector of
/// M − M₀ against the pushoff curves (the α_i · M grading of the
/// determinant identities), with M₀ the first matching of the census.
pub fn partial_partitions(
    s: &RhombicSurface,
    census: &DimerCensus,
    basis: &CycleBasis,
    nu: Nu,
) -> BTreeMap<Vec<i64>, f64> {
    let mut out = BTreeMap::new();
    if census.is_empty() {
        return out;
    }
    let m0 = &census.matchings[0];
    for m in &census.matchings {
        let chain = matching_difference(s, m, m0);
        let class: Vec<i64> = basis.push.iter().map(|t| t.eval_chain(&chain)).collect();
        *out.entry(class).or_insert(0.0) += matching_weight(s, m, nu);
    }
    out
}

/// Parity of the geometric integer q₀(α_j) on one basis cycle:
/// (Σ_{w∈W∩C} α_w(C) - Σ_{b∈B∩C} α_b(C)) / 2π, which condition (ii) makes
/// an integer.
fn q0_parity(s: &RhombicSurface, c: &Walk) -> Result<bool> {
    let mut sum = 0.0;
    for vis in c.visits(s) {
        let a = s.corner_angle(vis.vertex, vis.e_in, vis.e_out)?;
        sum += if s.is_white(vis.vertex) { a } else { -a };
    }
    let n = (sum / crate::surface::TAU).round();
    if (sum - n * crate::surface::TAU).abs() > crate::spin::WINDING_TOL {
        return Err(Error::ConditionsViolated(format!(
            "q0 sum {sum} is not a multiple of 2π (condition (ii) fails)"
        )));
    }
    Ok((n as i64).rem_euclid(2) == 1)
}

/// Replace a maximal face-aligned run of `walk` by the other side of the
/// face boundary. Returns `None` when the result would be degenerate.
fn splice_around_face(
    s: &RhombicSurface,
    walk: &Walk,
    face_darts: &[Dart],
    run_start: usize,
    run_len: usize,
) -> Option<Walk> {
    let n = walk.len();
    let run: Vec<Dart> = (0..run_len).map(|k| walk.darts()[(run_start + k) % n]).collect();
    // locate the run inside the face boundary
    let fpos = face_darts.iter().position(|&d| d == run[0])?;
    for (k, &d) in run.iter().enumerate() {
        if face_darts[(fpos + k) % face_darts.len()] != d {
            return None;
        }
    }
    if run_len >= face_darts.len() {
        return None;
    }
    let complement: Vec<Dart> = (run_len..face_darts.len())
        .map(|k| face_darts[(fpos + k) % face_darts.len()])
        .rev()
        .map(Dart::reversed)
        .collect();
    let mut darts = Vec::with_capacity(n - run_len + complement.len());
    for k in 0..n {
        let idx = (run_start + k) % n;
        if k < run_len {
            continue;
        }
        darts.push(walk.darts()[idx]);
    }
    let mut all = complement;
    all.extend(darts);
    let out = Walk::new(s, all).ok()?;
    // reject backtracking corners and self-crossing reroutes
    if !out.is_simple(s) {
        return None;
    }
    for vis in out.visits(s) {
        if vis.e_in == vis.e_out {
            return None;
        }
    }
    Some(out)
}

/// All single-face reroutes of a walk, deterministically ordered.
fn face_reroutes(s: &RhombicSurface, walk: &Walk) -> Vec<Walk> {
    let n = walk.len();
    let mut out = Vec::new();
    for f in s.faces() {
        let fd = f.darts();
        // positions of walk darts whose left face is f and that follow the
        // face walk; take maximal runs
        let on_face: Vec<bool> =
            walk.darts().iter().map(|&d| s.face_left_of(d) == f.id).collect();
        for start in 0..n {
            if !on_face[start] {
                continue;
            }
            let prev = (start + n - 1) % n;
            let continues_prev = on_face[prev]
                && s.next_in_face(walk.darts()[prev]) == walk.darts()[start];
            if continues_prev {
                continue; // not a run start
            }
            let mut len = 1;
            while len < n {
                let i = (start + len - 1) % n;
                let j = (start + len) % n;
                if on_face[j] && s.next_in_face(walk.darts()[i]) == walk.darts()[j] {
                    len += 1;
                } else {
                    break;
                }
            }
            for l in 1..=len {
                if let Some(w) = splice_around_face(s, walk, fd, start, l) {
                    out.push(w);
                }
            }
        }
    }
    out
}

/// Re-select basis cycles until every q₀(α_j) is even, by rerouting cycles
/// across faces (each move across one vertex flips the parity). The dual
/// cocycles are untouched: rerouting stays in the homology class.
pub fn even_q0_basis(s: &RhombicSurface, basis: &CycleBasis) -> Result<CycleBasis> {
    let mut cycles = basis.cycles.clone();
    for j in 0..cycles.len() {
        if !q0_parity(s, &cycles[j])? {
            continue;
        }
        let mut found = None;
        // breadth-first over reroutes, two levels deep
        let first: Vec<Walk> = face_reroutes(s, &cycles[j]);
        for cand in &first {
            if !q0_parity(s, cand)? {
                found = Some(cand.clone());
                break;
            }
        }
        if found.is_none() {
            'outer: for cand in &first {
                for second in face_reroutes(s, cand) {
                    if !q0_parity(s, &second)? {
                        found = Some(second);
                        break 'outer;
                    }
                }
            }
        }
        cycles[j] = found.ok_or(Error::OddQ0Unresolvable)?;
    }

    let push: Vec<_> = cycles.iter().map(|c| pushoff_cocycle(s, c)).collect();
    // classes are unchanged: the pairing and intersection data carry over,
    // but recompute Q from the new representatives and insist it agrees
    let rank = cycles.len();
    let mut q = vec![vec![false; rank]; rank];
    for i in 0..rank {
        for j in 0..rank {
            q[i][j] = push[i].eval_walk(&cycles[j]).rem_euclid(2) == 1;
        }
    }
    if q != basis.q {
        return Err(Error::SingularSolve("rerouting changed the intersection form".into()));
    }
    for (i, b) in basis.beta.iter().enumerate() {
        for (j, c) in cycles.iter().enumerate() {
            if b.eval_walk(c) != i64::from(i == j) {
                return Err(Error::SingularSolve("rerouting changed the pairing".into()));
            }
        }
    }
    Ok(CycleBasis { cycles, beta: basis.beta.clone(), push, q })
}

/// One spin sector: the ε-mask over the basis, its Dirac determinant, and
/// the two coefficient data (intersection-form parity and Arf invariant).
#[derive(Clone, Debug)]
pub struct SectorReport {
    pub mask: u32,
    pub det: Complex64,
    pub coeff_parity: bool,
    pub arf: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct DiracSectors {
    pub base: SpinCochain,
    pub q0: Option<QuadraticForm>,
    pub reports: Vec<SectorReport>,
    pub genus: u32,
}

/// Build the ⋆-normalized base structure and all 2^{2g} sector
/// determinants. The sector twists cross the pushoff curves, matching the
/// coefficients (-1)^{Σ_{i<j} ε_i ε_j Q_ij}. Requires conditions (i)/(ii).
pub fn dirac_sectors(s: &RhombicSurface, basis: &CycleBasis, nu: Nu) -> Result<DiracSectors> {
    if !condition_i(s) {
        return Err(Error::ConditionsViolated("condition (i) fails".into()));
    }
    if !condition_ii(s, basis)? {
        return Err(Error::ConditionsViolated("condition (ii) fails".into()));
    }
    let kappa = canonical_cochain(s)?;
    let base = star_normalize(s, basis, &spin_base(s, &kappa)?)?;
    let q0 = quadratic_form(s, &base, basis).ok();
    let rank = basis.rank();
    let genus = s.genus();

    let mut reports = Vec::with_capacity(1 << rank);
    for mask in 0u32..(1 << rank) {
        let lambda = base.twist_by(|e| {
            (0..rank)
                .filter(|&j| mask & (1 << j) != 0)
                .fold(false, |acc, j| acc ^ basis.push[j].parity(e))
        });
        let (m, _) = dirac_matrix(s, &lambda, nu)?;
        let det = m.determinant()?;
        let mut coeff = false;
        for i in 0..rank {
            for j in i + 1..rank {
                if mask & (1 << i) != 0 && mask & (1 << j) != 0 && basis.q[i][j] {
                    coeff ^= true;
                }
            }
        }
        let arf_eps = q0.as_ref().and_then(|q0| {
            // q_ε(c_i) = q₀(c_i) + Δ_ε·c_i with Δ_ε = Σ ε_j [C_j]
            let values: Vec<bool> = (0..rank)
                .map(|i| {
                    let mut v = q0.values[i];
                    for j in 0..rank {
                        if mask & (1 << j) != 0 && basis.q[j][i] {
                            v ^= true;
                        }
                    }
                    v
                })
                .collect();
            arf(&QuadraticForm { values, q_matrix: basis.q.clone() }).ok()
        });
        reports.push(SectorReport { mask, det, coeff_parity: coeff, arf: arf_eps });
    }
    Ok(DiracSectors { base, q0, reports, genus })
}

/// Z by the intersection-form determinant sum:
/// (1/2^g) |Σ_ε (-1)^{Σ_{i<j} ε_i ε_j Q_ij} det D_{λ_ε}|.
pub fn partition_via_determinants(s: &RhombicSurface, basis: &CycleBasis, nu: Nu) -> Result<f64> {
    let sectors = dirac_sectors(s, basis, nu)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for r in &sectors.reports {
        sum += r.det * if r.coeff_parity { -1.0 } else { 1.0 };
    }
    Ok(sum.norm() / (1 << sectors.genus) as f64)
}

/// Z by the Arf-weighted determinant sum:
/// (1/2^g) |Σ_ε (-1)^{Arf(λ_ε)} det D_{λ_ε}|, after
/// re-selecting basis cycles so that all q₀ values are even.
pub fn partition_via_arf(s: &RhombicSurface, basis: &CycleBasis, nu: Nu) -> Result<f64> {
    let even_basis = even_q0_basis(s, basis)?;
    let sectors = dirac_sectors(s, &even_basis, nu)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for r in &sectors.reports {
        let arf = r.arf.ok_or_else(|| {
            Error::ConditionsViolated("Arf invariants need all cone angles odd multiples of 2π".into())
        })?;
        sum += r.det * if arf { -1.0 } else { 1.0 };
    }
    Ok(sum.norm() / (1 << sectors.genus) as f64)
}

/// The ±1 flat cochain normalized by τ(C_j) = (-1)^{|C_j|/2 + 1}.
pub fn kasteleyn_tau(s: &RhombicSurface, basis: &CycleBasis) -> Result<UnitCochain> {
    let base = make_flat(s, &UnitCochain::ones(s, GroupTag::Signs))?;
    let mut flips = Vec::with_capacity(basis.rank());
    for c in &basis.cycles {
        let sign = if (c.len() / 2 + 1) % 2 == 0 { 1.0 } else { -1.0 };
        let val = base.eval_walk(c).re;
        flips.push((val - sign).abs() > 1.0);
    }
    let tau = base.twist_by(|e| {
        (0..basis.rank())
            .filter(|&j| flips[j])
            .fold(false, |acc, j| acc ^ basis.beta[j].parity(e))
    });
    Ok(tau)
}

#[derive(Clone, Debug)]
pub struct PfKReport {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// Check the character-twisted determinant identity for a unit character
/// φ on ℤ^{2g}, given as the
/// images u_j of the dual basis vectors. The left side grades the census by
/// pushoff classes; the right side twists the τ-normalized flat cochain by
/// Π u_j^{t_j} and sums the 2^{2g} determinants. Both sides are compared in
/// modulus (the equality holds up to a unit).
pub fn pf_k_check(
    s: &RhombicSurface,
    census: &DimerCensus,
    basis: &CycleBasis,
    phi: &[Complex64],
    nu: Nu,
) -> Result<PfKReport> {
    if !condition_i(s) {
        return Err(Error::ConditionsViolated("condition (i) fails".into()));
    }
    if phi.len() != basis.rank() {
        return Err(Error::ConditionsViolated(format!(
            "character has {} components, expected {}",
            phi.len(),
            basis.rank()
        )));
    }
    let mut lhs = Complex64::new(0.0, 0.0);
    for (class, z) in partial_partitions(s, census, basis, nu) {
        let mut factor = Complex64::new(1.0, 0.0);
        for (u, &n) in phi.iter().zip(&class) {
            factor *= u.powi(n as i32);
        }
        lhs += factor * z;
    }

    let tau = kasteleyn_tau(s, basis)?;
    let omega = {
        let values: Vec<Complex64> = s
            .edges()
            .map(|e| {
                let mut v = tau.value(e);
                for (u, t) in phi.iter().zip(&basis.push) {
                    v *= u.powi(t.value(e));
                }
                v
            })
            .collect();
        UnitCochain::from_values(values, GroupTag::Circle)?
    };

    let rank = basis.rank();
    let mut sum = Complex64::new(0.0, 0.0);
    for mask in 0u32..(1 << rank) {
        let twisted = omega.twist_by(|e| {
            (0..rank)
                .filter(|&j| mask & (1 << j) != 0)
                .fold(false, |acc, j| acc ^ basis.push[j].parity(e))
        });
        let (m, _) = adjacency_matrix(s, &twisted, nu);
        let det = m.determinant()?;
        let mut coeff = false;
        for i in 0..rank {
            for j in i + 1..rank {
                if mask & (1 << i) != 0 && mask & (1 << j) != 0 && basis.q[i][j] {
                    coeff ^= true;
                }
            }
        }
        sum += det * if coeff { -1.0 } else { 1.0 };
    }
    let rhs = sum.norm() / (1 << s.genus()) as f64;

    let lhs = lhs.norm();
    let pass = (lhs - rhs).abs() <= 1e-9 * lhs.abs().max(1.0);
    Ok(PfKReport { lhs, rhs, pass })
}

/// Every spin sector's ω_λ must be gauge equivalent to the τ normalization
/// when λ₀ is star-normalized: exposed for tests and reports.
pub fn tau_consistency(s: &RhombicSurface, basis: &CycleBasis) -> Result<bool> {
    let sectors = dirac_sectors(s, basis, Nu::Dual)?;
    let tau = kasteleyn_tau(s, basis)?;
    let omega = omega_v(s)?.product(&sectors.base.cochain());
    Ok(crate::cochain::are_equivalent(s, &omega, &tau))
}

/// Convenience wrapper: census + basis from scratch.
pub fn default_basis(s: &RhombicSurface) -> Result<CycleBasis> {
    let tc = tree_cotree(s)?;
    cycle_basis_from(s, &tc)
}
