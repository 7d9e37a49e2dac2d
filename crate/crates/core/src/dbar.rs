//! The discrete ∂̄ operator on functions of the black vertices, evaluated
//! against unit tangent vectors at the whites, and the discrete Morera
//! identity.
//!
//! At a white vertex w with star rhombi of angles α_1..α_m,
//!
//! ```text
//! (∂̄_w f)(V_w) = 1/(2 Area(St(w))) Σ_j ν_j exp(iϑ_j) f(b_j)
//! ```
//!
//! with `ϑ_j` the direction of the j-th edge against the reference tangent
//! `V_w` and `ν_j` the dual edge length. The reference is the first edge of
//! the rotation; rotating it by φ multiplies the value by `exp(iφ)`.

use num_complex::Complex64;

use crate::error::Result;
use crate::surface::{RhombicSurface, Star, VertexId};

/// Tolerance for discrete holomorphicity.
pub const HOLO_TOL: f64 = 1e-9;

/// A complex function on the black vertices, stored densely over all
/// vertices (white slots are ignored).
#[derive(Clone, Debug)]
pub struct BlackFunction {
    values: Vec<Complex64>,
}

impl BlackFunction {
    pub fn zeros(s: &RhombicSurface) -> Self {
        BlackFunction { values: vec![Complex64::new(0.0, 0.0); s.vertex_count()] }
    }

    pub fn constant(s: &RhombicSurface, c: Complex64) -> Self {
        BlackFunction { values: vec![c; s.vertex_count()] }
    }

    pub fn from_values(values: Vec<Complex64>) -> Self {
        BlackFunction { values }
    }

    pub fn get(&self, b: VertexId) -> Complex64 {
        self.values[b.0 as usize]
    }

    pub fn set(&mut self, b: VertexId, v: Complex64) {
        self.values[b.0 as usize] = v;
    }
}

/// ∂̄ on one developed star against the unit reference tangent:
/// `Σ_j ν_j exp(iϑ_j) f_j / (2 Area)`.
pub fn dbar_star(star: &Star, f: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..star.degree() {
        acc += star.dual_length(j) * Complex64::from_polar(1.0, star.dir(j)) * f[j];
    }
    acc / (2.0 * star.area())
}

/// The black-vertex values of a planar coordinate chart around the star:
/// `f_j = d_j exp(iϑ_j)` with the white vertex at the origin and the
/// reference tangent along the real axis. ∂̄ annihilates this.
pub fn coordinate_function(star: &Star) -> Vec<Complex64> {
    (0..star.degree())
        .map(|j| star.edge_length(j) * Complex64::from_polar(1.0, star.dir(j)))
        .collect()
}

/// Boundary integral of the piecewise extension of `f` around the star:
/// `Σ_j (x_j - x_{j-1}) f_j` over the developed dual vertices. Equals
/// `2i·Area·∂̄` exactly.
pub fn morera_star(star: &Star, f: &[Complex64]) -> Complex64 {
    let m = star.degree();
    let dual = |j: usize| -> Complex64 {
        // x_0 is the dual vertex before the first rhombus
        let dir = if j == 0 { -star.alpha(0) / 2.0 } else { star.dual_dir(j - 1) };
        Complex64::from_polar(star.delta(), dir)
    };
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..m {
        acc += (dual(j + 1) - dual(j)) * f[j];
    }
    acc
}

/// Restriction of `f` to the star of `w`, in rotation order.
pub fn star_values(s: &RhombicSurface, f: &BlackFunction, w: VertexId) -> Vec<Complex64> {
    s.rotation(w).iter().map(|&e| f.get(s.black_end(e))).collect()
}

/// `(∂̄_w f)(V_w)` with `|V_w| = 1` and the default reference direction.
pub fn dbar_apply(s: &RhombicSurface, f: &BlackFunction, w: VertexId) -> Complex64 {
    dbar_star(&s.star(w), &star_values(s, f, w))
}

/// `(∂̄_w f)` against a reference rotated CCW by `offset`.
pub fn dbar_apply_with_offset(
    s: &RhombicSurface,
    f: &BlackFunction,
    w: VertexId,
    offset: f64,
) -> Complex64 {
    dbar_apply(s, f, w) * Complex64::from_polar(1.0, -offset)
}

/// True iff |∂̄_w f| < 1e-9 at every white vertex.
pub fn is_discrete_holomorphic(s: &RhombicSurface, f: &BlackFunction) -> bool {
    s.white_vertices().all(|w| dbar_apply(s, f, w).norm() < HOLO_TOL)
}

/// Morera boundary integral around St(w); see [`morera_star`].
pub fn morera_integral(s: &RhombicSurface, f: &BlackFunction, w: VertexId) -> Result<Complex64> {
    Ok(morera_star(&s.star(w), &star_values(s, f, w)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;
    use crate::surface::TAU;
    use num_complex::Complex64 as C;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_star(rng: &mut impl Rng) -> Star {
        let degree = rng.gen_range(3..=8);
        loop {
            let mut raw: Vec<f64> = (0..degree).map(|_| rng.gen_range(0.05..1.0)).collect();
            let sum: f64 = raw.iter().sum();
            for a in &mut raw {
                *a *= TAU / sum;
            }
            if raw.iter().all(|&a| a > 0.01 && a < std::f64::consts::PI - 0.01) {
                return Star::new(rng.gen_range(0.5..2.0), raw).unwrap();
            }
        }
    }

    fn random_values(rng: &mut impl Rng, n: usize) -> Vec<C> {
        (0..n).map(|_| C::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))).collect()
    }

    #[test]
    fn constants_are_holomorphic() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let star = random_star(&mut rng);
            let c = C::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let f = vec![c; star.degree()];
            assert!(dbar_star(&star, &f).norm() < 1e-12);
        }
    }

    #[test]
    fn coordinates_are_holomorphic() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..50 {
            let star = random_star(&mut rng);
            let f = coordinate_function(&star);
            assert!(dbar_star(&star, &f).norm() < 1e-12);
        }
    }

    #[test]
    fn conjugate_coordinates_give_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let star = random_star(&mut rng);
            let f: Vec<C> = coordinate_function(&star).iter().map(|z| z.conj()).collect();
            assert!((dbar_star(&star, &f) - C::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn morera_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..50 {
            let star = random_star(&mut rng);
            let f = random_values(&mut rng, star.degree());
            let lhs = morera_star(&star, &f);
            let rhs = C::new(0.0, 2.0) * star.area() * dbar_star(&star, &f);
            assert!((lhs - rhs).norm() < 1e-12 * (1.0 + rhs.norm()));
        }
    }

    #[test]
    fn morera_constant_telescopes() {
        let star = Star::new(1.0, vec![TAU / 3.0; 3]).unwrap();
        let f = vec![C::new(3.0, -1.0); 3];
        assert!(morera_star(&star, &f).norm() < 1e-12);
    }

    #[test]
    fn linearity() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let star = random_star(&mut rng);
        let f = random_values(&mut rng, star.degree());
        let g = random_values(&mut rng, star.degree());
        let a = C::new(0.3, -1.2);
        let b = C::new(-0.7, 0.4);
        let combo: Vec<C> =
            f.iter().zip(&g).map(|(x, y)| a * x + b * y).collect();
        let lhs = dbar_star(&star, &combo);
        let rhs = a * dbar_star(&star, &f) + b * dbar_star(&star, &g);
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn surface_level_operator() {
        let s = builders::honeycomb_torus(3, 3).unwrap();
        let f = BlackFunction::constant(&s, C::new(1.5, 0.5));
        assert!(is_discrete_holomorphic(&s, &f));

        // indicator of one black vertex is not holomorphic
        let b = s.black_vertices().next().unwrap();
        let mut indicator = BlackFunction::zeros(&s);
        indicator.set(b, C::new(1.0, 0.0));
        assert!(!is_discrete_holomorphic(&s, &indicator));
        // the defect at an adjacent white is ν/(2 Area)
        let e = s.rotation(b)[0];
        let w = s.white_end(e);
        let expect = s.dual_length(e) / (2.0 * s.star_area(w));
        let pos = s.rotation(w).iter().position(|&x| x == e).unwrap();
        let got = dbar_apply(&s, &indicator, w);
        assert!((got.norm() - expect).abs() < 1e-12);
        let phase = C::from_polar(1.0, s.star(w).dir(pos));
        assert!((got - expect * phase).norm() < 1e-12);
    }

    #[test]
    fn random_function_is_not_holomorphic() {
        let s = builders::honeycomb_torus(3, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let mut f = BlackFunction::zeros(&s);
        for b in s.black_vertices() {
            f.set(b, C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        }
        assert!(!is_discrete_holomorphic(&s, &f));
    }

    #[test]
    fn offset_rotates_value() {
        let s = builders::honeycomb_torus(3, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut f = BlackFunction::zeros(&s);
        for b in s.black_vertices() {
            f.set(b, C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        }
        let w = s.white_vertices().next().unwrap();
        let base = dbar_apply(&s, &f, w);
        let rotated = dbar_apply_with_offset(&s, &f, w, 0.9);
        assert!((rotated - base * C::from_polar(1.0, -0.9)).norm() < 1e-12);
        assert!((rotated.norm() - base.norm()).abs() < 1e-12);
    }

    #[test]
    fn morera_on_surface_matches_dbar() {
        let s = builders::rhombi_torus(4, 4, 0, &[0.2, -0.1, 0.0, 0.1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        let mut f = BlackFunction::zeros(&s);
        for b in s.black_vertices() {
            f.set(b, C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        }
        for w in s.white_vertices() {
            let lhs = morera_integral(&s, &f, w).unwrap();
            let rhs = C::new(0.0, 2.0) * s.star_area(w) * dbar_apply(&s, &f, w);
            assert!((lhs - rhs).norm() < 1e-12 * (1.0 + rhs.norm()));
        }
    }
}
