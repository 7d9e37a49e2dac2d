//! Deterministic constructors for the example surfaces: honeycomb tori,
//! rhombus-strip tori R(m,n), the genus-2 octagon lattice, and isoradial
//! realization of abstract bipartite graphs by symmetric stars.

use crate::error::{Error, Result};
use crate::surface::{Color, EdgeId, RhombicSurface, VertexId, TAU};

/// rows × cols hexagons on a flat torus, all rhombus angles 2π/3, δ = 1.
///
/// Whites sit below blacks: white (r,c) has an up edge to black (r,c), a
/// down-left edge to black (r-1,c) and a down-right edge to black (r-1,c+1),
/// with both indices periodic. The first edge of every white rotation points
/// straight up, so the default reference direction is vertical and the
/// ω_V entries come out in {1, exp(2πi/3), exp(-2πi/3)}.
pub fn honeycomb_torus(rows: usize, cols: usize) -> Result<RhombicSurface> {
    if rows == 0 || cols == 0 {
        return Err(Error::ConstructionInvalid("honeycomb torus needs rows, cols >= 1".into()));
    }
    let cell = |r: usize, c: usize| (r % rows) * cols + (c % cols);
    let white = |r: usize, c: usize| VertexId(cell(r, c) as u32);
    let black = |r: usize, c: usize| VertexId((rows * cols + cell(r, c)) as u32);
    // edges of white (r,c): up / down-left / down-right
    let eu = |r: usize, c: usize| EdgeId((3 * cell(r, c)) as u32);
    let el = |r: usize, c: usize| EdgeId((3 * cell(r, c) + 1) as u32);
    let er = |r: usize, c: usize| EdgeId((3 * cell(r, c) + 2) as u32);

    let n = rows * cols;
    let mut colors = vec![Color::White; n];
    colors.extend(vec![Color::Black; n]);
    let mut edges = vec![(VertexId(0), VertexId(0)); 3 * n];
    let mut rotations = vec![Vec::new(); 2 * n];
    for r in 0..rows {
        for c in 0..cols {
            let w = white(r, c);
            edges[eu(r, c).0 as usize] = (w, black(r, c));
            edges[el(r, c).0 as usize] = (w, black(r + rows - 1, c));
            edges[er(r, c).0 as usize] = (w, black(r + rows - 1, c + 1));
            // CCW at the white: up (90°), down-left (210°), down-right (330°)
            rotations[w.0 as usize] = vec![eu(r, c), el(r, c), er(r, c)];
            // CCW at the black: down (270°), up-right (30°), up-left (150°)
            rotations[black(r, c).0 as usize] =
                vec![eu(r, c), el(r + 1, c), er(r + 1, c + cols - 1)];
        }
    }
    let alpha = vec![TAU / 3.0; 3 * n];
    RhombicSurface::new(1.0, colors, edges, alpha, rotations)
}

/// The torus built from m rows of n rhombi, each rhombus a pair of
/// triangles, with the bipartite graph on the triangles: white vertices on
/// the upward triangles, black on the downward ones, one edge per shared
/// triangle side.
///
/// `shift` rotates the top↔bottom identification by that many rhombi and is
/// the knob for condition-(ii) counterexamples. `shear` holds one angle per
/// row, each in (-π/3, π/3): row i gets rhombus angles 2π/3 + σ_i on the
/// shared-diagonal edges and 2π/3 - σ_i on the slanted ones, which keeps
/// every cone angle at exactly 2π.
pub fn rhombi_torus(m: usize, n: usize, shift: usize, shear: &[f64]) -> Result<RhombicSurface> {
    if m == 0 || n == 0 {
        return Err(Error::ConstructionInvalid("rhombi torus needs m, n >= 1".into()));
    }
    if n % 2 != 0 {
        return Err(Error::ConstructionInvalid(format!("n must be even, got {n}")));
    }
    if !shear.is_empty() && shear.len() != m {
        return Err(Error::ConstructionInvalid(format!(
            "shear must list one angle per row ({m}), got {}",
            shear.len()
        )));
    }
    let sigma = |i: usize| if shear.is_empty() { 0.0 } else { shear[i] };
    for i in 0..m {
        let s = sigma(i);
        if s.abs() >= std::f64::consts::PI / 3.0 {
            return Err(Error::AngleOutOfRange(format!(
                "row {i}: shear {s} leaves (0, π) for some rhombus angle"
            )));
        }
    }

    let cell = |i: usize, j: usize| (i % m) * n + (j % n);
    let up = |i: usize, j: usize| VertexId(cell(i, j) as u32);
    let down = |i: usize, j: usize| VertexId((m * n + cell(i, j)) as u32);
    // edges of up(i,j): shared diagonal / left slant / bottom
    let es = |i: usize, j: usize| EdgeId((3 * cell(i, j)) as u32);
    let el = |i: usize, j: usize| EdgeId((3 * cell(i, j) + 1) as u32);
    let eb = |i: usize, j: usize| EdgeId((3 * cell(i, j) + 2) as u32);

    let count = m * n;
    let mut colors = vec![Color::White; count];
    colors.extend(vec![Color::Black; count]);
    let mut edges = vec![(VertexId(0), VertexId(0)); 3 * count];
    let mut alpha = vec![0.0; 3 * count];
    let mut rotations = vec![Vec::new(); 2 * count];

    for i in 0..m {
        for j in 0..n {
            let w = up(i, j);
            edges[es(i, j).0 as usize] = (w, down(i, j));
            edges[el(i, j).0 as usize] = (w, down(i, j + n - 1));
            // below row 0 sits row m-1, shifted back
            let below = if i == 0 { down(m - 1, j + n - shift % n) } else { down(i - 1, j) };
            edges[eb(i, j).0 as usize] = (w, below);
            alpha[es(i, j).0 as usize] = TAU / 3.0 + sigma(i);
            alpha[el(i, j).0 as usize] = TAU / 3.0 - sigma(i);
            alpha[eb(i, j).0 as usize] = TAU / 3.0;
            // CCW at the up triangle: diagonal (30°), left slant (150°), bottom (270°)
            rotations[w.0 as usize] = vec![es(i, j), el(i, j), eb(i, j)];
            // CCW at the down triangle: top (90°), diagonal (210°), right slant (330°)
            let above = if i + 1 == m { eb(0, j + shift) } else { eb(i + 1, j) };
            rotations[down(i, j).0 as usize] = vec![above, es(i, j), el(i, j + 1)];
        }
    }
    RhombicSurface::new(1.0, colors, edges, alpha, rotations)
}

/// Square lattice on a genus-2 translation surface: a two-step staircase
/// octagon with opposite sides identified by translation. The eight polygon
/// corners glue to a single dual vertex of cone angle 6π; everything else is
/// flat. `n >= 1` scales the lattice (the staircase is built from two
/// 4n × 2n bricks), giving 16n² vertices.
pub fn genus2_octagon(n: usize) -> Result<RhombicSurface> {
    if n == 0 {
        return Err(Error::ConstructionInvalid("refinement must be >= 1".into()));
    }
    let (a, b, c, d) = (4 * n as i64, 2 * n as i64, 2 * n as i64, 2 * n as i64);

    // cells of the staircase: bottom brick [0,a)×[0,b), top brick [c,c+a)×[b,b+d)
    let in_region = |x: i64, y: i64| {
        (0..a).contains(&x) && (0..b).contains(&y)
            || (c..c + a).contains(&x) && (b..b + d).contains(&y)
    };
    // A unit step across a boundary side applies that side's gluing
    // translation. The crossed side is determined by the start cell and the
    // step direction; slot coordinates alone would be ambiguous near the
    // staircase corners.
    let step_to = |x: i64, y: i64, dx: i64, dy: i64| -> (i64, i64) {
        let (nx, ny) = (x + dx, y + dy);
        if in_region(nx, ny) {
            return (nx, ny);
        }
        match (dx, dy) {
            (0, -1) if y == 0 => (nx + c, ny + b + d), // bottom ↔ top
            (0, -1) if y == b => (nx - a, ny),         // under the overhang ↔ top of bottom-left
            (0, 1) if y == b + d - 1 => (nx - c, ny - b - d),
            (0, 1) if y == b - 1 => (nx + a, ny),
            (1, 0) if x == a - 1 => (nx + c - a, ny + d), // bottom-right ↔ top-left
            (1, 0) if x == c + a - 1 => (nx - a - c, ny - b), // top-right ↔ bottom-left
            (-1, 0) if x == 0 => (nx + a + c, ny + b),
            (-1, 0) if x == c => (nx + a - c, ny - d),
            _ => (nx, ny),
        }
    };

    let mut index = std::collections::HashMap::new();
    let mut cells = Vec::new();
    for y in 0..b + d {
        for x in 0..c + a {
            if in_region(x, y) {
                index.insert((x, y), cells.len());
                cells.push((x, y));
            }
        }
    }
    let lookup = |x: i64, y: i64, dx: i64, dy: i64| -> Result<usize> {
        let (nx, ny) = step_to(x, y, dx, dy);
        index.get(&(nx, ny)).copied().ok_or_else(|| {
            Error::ConstructionInvalid(format!("step ({dx},{dy}) from ({x},{y}) left the region"))
        })
    };

    let colors: Vec<Color> = cells
        .iter()
        .map(|&(x, y)| if (x + y).rem_euclid(2) == 0 { Color::White } else { Color::Black })
        .collect();

    // one edge east and one north of every cell
    let mut edges = Vec::with_capacity(2 * cells.len());
    let mut edge_of = std::collections::HashMap::new();
    for (k, &(x, y)) in cells.iter().enumerate() {
        for (dx, dy) in [(1, 0), (0, 1)] {
            let other = lookup(x, y, dx, dy)?;
            let id = EdgeId(edges.len() as u32);
            let (w, bk) = if colors[k] == Color::White { (k, other) } else { (other, k) };
            if colors[w] != Color::White || colors[bk] != Color::Black {
                return Err(Error::ConstructionInvalid(
                    "identification does not preserve the bipartition".into(),
                ));
            }
            edges.push((VertexId(w as u32), VertexId(bk as u32)));
            edge_of.insert((k, (dx, dy)), id);
            edge_of.insert((other, (-dx, -dy)), id);
        }
    }

    // CCW rotations: east, north, west, south
    let mut rotations = Vec::with_capacity(cells.len());
    for k in 0..cells.len() {
        let rot: Vec<EdgeId> = [(1, 0), (0, 1), (-1, 0), (0, -1)]
            .iter()
            .map(|&step| edge_of[&(k, step)])
            .collect();
        rotations.push(rot);
    }

    let alpha = vec![TAU / 4.0; edges.len()];
    let delta = 0.5_f64.sqrt();
    let s = RhombicSurface::new(delta, colors, edges, alpha, rotations)?;

    if s.genus() != 2 {
        return Err(Error::ConstructionInvalid(format!("expected genus 2, got {}", s.genus())));
    }
    let singular = s.singular_set();
    let ok = singular.len() == 1
        && matches!(singular[0].0, crate::surface::ConePoint::Face(_))
        && (singular[0].1 - 3.0 * TAU).abs() < 1e-9;
    if !ok {
        return Err(Error::ConstructionInvalid(format!(
            "expected one dual-vertex singularity of angle 6π, got {:?}",
            singular
        )));
    }
    Ok(s)
}

/// Isoradial realization of an abstract bipartite graph with prescribed
/// rotations: every white star is made symmetric, α(e) = 2π / deg(w).
/// Singularities then land on black vertices and dual vertices only.
pub fn realize_bipartite(
    colors: Vec<Color>,
    edges: Vec<(VertexId, VertexId)>,
    rotations: Vec<Vec<EdgeId>>,
    delta: f64,
) -> Result<RhombicSurface> {
    let mut degree = vec![0usize; colors.len()];
    for &(w, _) in &edges {
        if let Some(slot) = degree.get_mut(w.0 as usize) {
            *slot += 1;
        }
    }
    for (v, color) in colors.iter().enumerate() {
        if *color == Color::White && degree[v] < 3 {
            return Err(Error::WhiteDegreeTooSmall { vertex: v as u32, degree: degree[v] });
        }
    }
    let alpha: Vec<f64> = edges.iter().map(|&(w, _)| TAU / degree[w.0 as usize] as f64).collect();
    RhombicSurface::new(delta, colors, edges, alpha, rotations)
}

/// The cube graph on a genus-2 surface with exactly two faces, both
/// dodecagons of cone angle 4π: a valid surface that fails condition (i).
/// Used to exercise the condition checkers.
pub fn four_pi_cone_surface() -> Result<RhombicSurface> {
    // vertices = 3-bit strings colored by parity; edge 3i+k flips bit k of
    // the i-th white
    let whites = [0b000u8, 0b011, 0b101, 0b110];
    let blacks = [0b001u8, 0b010, 0b100, 0b111];
    let vid = |bits: u8| -> VertexId {
        match whites.iter().position(|&w| w == bits) {
            Some(i) => VertexId(i as u32),
            None => VertexId(4 + blacks.iter().position(|&b| b == bits).unwrap() as u32),
        }
    };
    let mut colors = vec![Color::White; 4];
    colors.extend(vec![Color::Black; 4]);
    let mut edges = Vec::new();
    for &w in &whites {
        for bit in 0..3 {
            edges.push((vid(w), vid(w ^ (1 << bit))));
        }
    }
    let mut rotations: Vec<Vec<EdgeId>> =
        (0..4).map(|i| (0..3).map(|k| EdgeId(3 * i + k)).collect()).collect();
    // swapping the last two edges at the first two whites turns the sphere
    // embedding into the two-face genus-2 one
    rotations[0].swap(1, 2);
    rotations[1].swap(1, 2);
    for b in 4..8u32 {
        let rot: Vec<EdgeId> = edges
            .iter()
            .enumerate()
            .filter(|(_, &(_, bk))| bk == VertexId(b))
            .map(|(k, _)| EdgeId(k as u32))
            .collect();
        rotations.push(rot);
    }
    let alpha = vec![TAU / 3.0; 12];
    let s = RhombicSurface::new(1.0, colors, edges, alpha, rotations)?;
    debug_assert_eq!(s.genus(), 2);
    debug_assert!(s.faces().iter().all(|f| f.len() == 12));
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::ConePoint;

    #[test]
    fn honeycomb_sizes() {
        let s = honeycomb_torus(3, 3).unwrap();
        assert_eq!(
            (s.vertex_count(), s.edge_count(), s.face_count(), s.genus()),
            (18, 27, 9, 1)
        );
        let s = honeycomb_torus(1, 1).unwrap();
        assert_eq!((s.vertex_count(), s.edge_count(), s.face_count()), (2, 3, 1));
        assert_eq!(s.genus(), 1);
    }

    #[test]
    fn rhombi_torus_shapes() {
        let s = rhombi_torus(6, 6, 0, &[]).unwrap();
        assert_eq!((s.vertex_count(), s.edge_count(), s.face_count()), (72, 108, 36));
        assert_eq!(s.genus(), 1);
        assert!(s.singular_set().is_empty());
        assert!(rhombi_torus(2, 3, 0, &[]).is_err(), "odd n must be rejected");
        assert!(matches!(
            rhombi_torus(2, 4, 0, &[2.0, 0.0]),
            Err(Error::AngleOutOfRange(_))
        ));
    }

    #[test]
    fn sheared_rhombi_torus_stays_flat() {
        let shear = [0.25, 0.0, 0.0, 0.0, 0.0, 0.0];
        let s = rhombi_torus(6, 6, 0, &shear).unwrap();
        for (point, theta) in s.cone_points() {
            assert!((theta - TAU).abs() < 1e-9, "cone angle {theta} at {point}");
        }
    }

    #[test]
    fn shear_moves_the_vertical_residue() {
        // the vertical condition-(ii) residue accumulates the shear sum, so
        // balanced rows keep the conditions and one tilted row breaks them
        let balanced = rhombi_torus(6, 6, 0, &[0.3, -0.3, 0.1, -0.1, 0.0, 0.0]).unwrap();
        let basis = crate::homology::cycle_basis(&balanced).unwrap();
        assert!(crate::dirac::condition_ii(&balanced, &basis).unwrap());

        let tilted = rhombi_torus(6, 6, 0, &[0.3, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let basis = crate::homology::cycle_basis(&tilted).unwrap();
        let residues = crate::dirac::condition_ii_residues(&tilted, &basis).unwrap();
        assert!(!crate::dirac::condition_ii(&tilted, &basis).unwrap());
        assert!(
            residues.iter().any(|r| (r.abs() - 0.3).abs() < 1e-9),
            "expected a residue of 0.3, got {residues:?}"
        );
    }

    #[test]
    fn genus2_shape() {
        let s = genus2_octagon(1).unwrap();
        assert_eq!(s.vertex_count(), 16);
        assert_eq!(s.edge_count(), 32);
        assert_eq!(s.face_count(), 14);
        assert_eq!(s.genus(), 2);
    }

    #[test]
    fn genus2_refined_still_passes_conditions() {
        let s = genus2_octagon(2).unwrap();
        assert_eq!(s.vertex_count(), 64);
        assert_eq!(s.genus(), 2);
        let basis = crate::homology::cycle_basis(&s).unwrap();
        assert!(crate::dirac::condition_i(&s));
        assert!(crate::dirac::condition_ii(&s, &basis).unwrap());
    }

    #[test]
    fn realize_k33_gives_honeycomb_torus() {
        // natural cyclic orders: white i sees blacks (0,1,2), black j sees whites (0,1,2)
        let mut colors = vec![Color::White; 3];
        colors.extend(vec![Color::Black; 3]);
        let mut edges = Vec::new();
        for i in 0..3u32 {
            for j in 0..3u32 {
                edges.push((VertexId(i), VertexId(3 + j)));
            }
        }
        let rot_white: Vec<Vec<EdgeId>> =
            (0..3).map(|i| (0..3).map(|j| EdgeId(3 * i + j)).collect()).collect();
        let rot_black: Vec<Vec<EdgeId>> =
            (0..3).map(|j| (0..3).map(|i| EdgeId(3 * i + j)).collect()).collect();
        let mut rotations = rot_white;
        rotations.extend(rot_black);
        let s = realize_bipartite(colors, edges, rotations, 1.0).unwrap();
        assert_eq!(s.genus(), 1);
        assert_eq!(s.face_count(), 3);
        for f in s.faces() {
            assert_eq!(f.len(), 6);
        }
        for e in s.edges() {
            assert!((s.alpha(e) - TAU / 3.0).abs() < 1e-12);
        }
        assert!(s.singular_set().is_empty());
    }

    #[test]
    fn realize_rejects_low_degree() {
        let colors = vec![Color::White, Color::Black];
        let edges = vec![(VertexId(0), VertexId(1)), (VertexId(0), VertexId(1))];
        let rot = vec![vec![EdgeId(0), EdgeId(1)], vec![EdgeId(0), EdgeId(1)]];
        assert!(matches!(
            realize_bipartite(colors, edges, rot, 1.0),
            Err(Error::WhiteDegreeTooSmall { .. })
        ));
    }

    #[test]
    fn four_pi_surface_has_even_cones() {
        let s = four_pi_cone_surface().unwrap();
        assert_eq!(s.genus(), 2);
        let singular = s.singular_set();
        assert_eq!(singular.len(), 2);
        for (p, theta) in singular {
            assert!(matches!(p, ConePoint::Face(_)));
            assert!((theta - 2.0 * TAU).abs() < 1e-9, "cone angle {theta}");
        }
    }
}
