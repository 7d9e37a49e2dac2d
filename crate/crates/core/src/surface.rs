//! Bipartite graphs isoradially embedded in flat surfaces with cone
//! singularities.
//!
//! A surface is stored purely combinatorially: a bipartite graph with a
//! rotation system (counterclockwise cyclic edge order at every vertex), one
//! rhombus angle per edge, and a common circumradius. Every metric quantity
//! — edge lengths, dual lengths, star areas, cone angles — derives from the
//! angles, so no coordinates are ever kept and no developing map around cone
//! points is needed.
//!
//! # Conventions
//!
//! Counterclockwise is the positive rotation direction at *every* vertex.
//! Around a vertex the incident edges are listed CCW; the first edge of each
//! rotation list is the reference direction. The edge through a rhombus
//! bisects the rhombus corner, so the direction of the j-th edge at a vertex
//! is
//!
//! ```text
//! dir(e_j) = α_1 + ... + α_{j-1} + (α_j - α_1)/2
//! ```
//!
//! measured CCW from the first edge, with values in `[0, θ_v)` where `θ_v`
//! is the total angle at the vertex. Faces are traced with the face on the
//! left: from a dart `u → v`, the walk continues along the predecessor (in
//! CCW order at `v`) of the arriving edge.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// Tolerance for angle identities (white sums, Gauss-Bonnet, cocycles).
pub const ANGLE_TOL: f64 = 1e-9;

pub const TAU: f64 = 2.0 * std::f64::consts::PI;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct EdgeId(pub u32);

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct FaceId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Color {
    White,
    Black,
}

/// An oriented edge. `from_white = true` is the reference orientation
/// white → black; cochains are evaluated as `ω(e)` along it and `ω(e)^{-1}`
/// against it.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Dart {
    pub edge: EdgeId,
    pub from_white: bool,
}

impl Dart {
    pub fn forward(edge: EdgeId) -> Self {
        Dart { edge, from_white: true }
    }

    pub fn reversed(self) -> Self {
        Dart { edge: self.edge, from_white: !self.from_white }
    }

    /// Dense index in `0..2E`: used to key per-dart tables.
    pub fn index(self) -> usize {
        self.edge.0 as usize * 2 + usize::from(self.from_white)
    }
}

/// Edge weight system for adjacency/Dirac matrices: `Dual` is the length of
/// the dual edge `ν(e) = 2δ sin(α/2)`, `Unit` sets every weight to 1.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Nu {
    #[default]
    Dual,
    Unit,
}

/// Oriented boundary of a face, with the face on the left. Darts alternate
/// white → black and black → white, so the length is always even.
#[derive(Clone, Debug)]
pub struct FaceWalk {
    pub id: FaceId,
    darts: Vec<Dart>,
}

impl FaceWalk {
    pub fn darts(&self) -> &[Dart] {
        &self.darts
    }

    /// Number of darts in the boundary, `|∂f|`.
    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }
}

/// A bipartite map with rhombus angles: the combinatorial encoding of the
/// graph Γ, the flat surface Σ it lives in, and the isoradial embedding, all
/// at once.
#[derive(Clone, Debug)]
pub struct RhombicSurface {
    delta: f64,
    colors: Vec<Color>,
    edge_white: Vec<VertexId>,
    edge_black: Vec<VertexId>,
    alpha: Vec<f64>,
    rotations: Vec<Vec<EdgeId>>,
    // derived tables
    rot_pos_white: Vec<u32>,
    rot_pos_black: Vec<u32>,
    dir_white: Vec<f64>,
    dir_black: Vec<f64>,
    theta_vertex: Vec<f64>,
    faces: Vec<FaceWalk>,
    face_of_dart: Vec<u32>,
    theta_face: Vec<f64>,
    genus: u32,
}

impl RhombicSurface {
    /// Build and validate a surface from raw combinatorial data.
    ///
    /// `edges[k] = (w, b)` joins white `w` to black `b` with rhombus angle
    /// `alpha[k]` at the white end; `rotations[v]` lists the edges at vertex
    /// `v` in CCW order.
    pub fn new(
        delta: f64,
        colors: Vec<Color>,
        edges: Vec<(VertexId, VertexId)>,
        alpha: Vec<f64>,
        rotations: Vec<Vec<EdgeId>>,
    ) -> Result<Self> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::InvalidSurface(format!("delta must be positive, got {delta}")));
        }
        let nv = colors.len();
        let ne = edges.len();
        if alpha.len() != ne {
            return Err(Error::InvalidSurface(format!(
                "{} edges but {} alpha values",
                ne,
                alpha.len()
            )));
        }
        if rotations.len() != nv {
            return Err(Error::InvalidSurface(format!(
                "{} vertices but {} rotation lists",
                nv,
                rotations.len()
            )));
        }
        if nv == 0 || ne == 0 {
            return Err(Error::InvalidSurface("empty graph".into()));
        }

        for (k, &(w, b)) in edges.iter().enumerate() {
            let check = |v: VertexId| -> Result<()> {
                if v.0 as usize >= nv {
                    return Err(Error::InvalidSurface(format!("edge e{k} references missing {v}")));
                }
                Ok(())
            };
            check(w)?;
            check(b)?;
            if colors[w.0 as usize] != Color::White || colors[b.0 as usize] != Color::Black {
                return Err(Error::NonBipartite(format!(
                    "edge e{k} must join a white vertex to a black vertex"
                )));
            }
        }
        for (k, &a) in alpha.iter().enumerate() {
            if !(a > 0.0 && a < std::f64::consts::PI) {
                return Err(Error::NonPositiveAngle { edge: k as u32, alpha: a });
            }
        }

        // Each edge must appear exactly once in the rotation of each endpoint.
        let mut rot_pos_white = vec![u32::MAX; ne];
        let mut rot_pos_black = vec![u32::MAX; ne];
        for (v, rot) in rotations.iter().enumerate() {
            if rot.is_empty() {
                return Err(Error::InvalidSurface(format!("vertex v{v} has empty rotation")));
            }
            for (pos, &e) in rot.iter().enumerate() {
                let k = e.0 as usize;
                if k >= ne {
                    return Err(Error::InvalidSurface(format!("rotation of v{v} references missing {e}")));
                }
                let (slot, expect) = match colors[v] {
                    Color::White => (&mut rot_pos_white[k], edges[k].0),
                    Color::Black => (&mut rot_pos_black[k], edges[k].1),
                };
                if expect.0 as usize != v {
                    return Err(Error::InvalidSurface(format!(
                        "rotation of v{v} lists {e}, which is not incident"
                    )));
                }
                if *slot != u32::MAX {
                    return Err(Error::InvalidSurface(format!("{e} listed twice at v{v}")));
                }
                *slot = pos as u32;
            }
        }
        for k in 0..ne {
            if rot_pos_white[k] == u32::MAX || rot_pos_black[k] == u32::MAX {
                return Err(Error::InvalidSurface(format!("e{k} missing from an endpoint rotation")));
            }
        }

        // Total angle at each vertex; whites must close up to exactly 2π.
        let mut theta_vertex = vec![0.0; nv];
        for (v, rot) in rotations.iter().enumerate() {
            let sum: f64 = rot.iter().map(|e| alpha[e.0 as usize]).sum();
            theta_vertex[v] = sum;
            if colors[v] == Color::White && (sum - TAU).abs() > ANGLE_TOL {
                return Err(Error::WhiteAngleSum { vertex: v as u32, sum });
            }
        }

        // Cumulative CCW directions: the edge bisects its rhombus corner.
        let mut dir_white = vec![0.0; ne];
        let mut dir_black = vec![0.0; ne];
        for (v, rot) in rotations.iter().enumerate() {
            let a0 = alpha[rot[0].0 as usize];
            let mut partial = 0.0;
            for &e in rot {
                let a = alpha[e.0 as usize];
                let d = partial + (a - a0) / 2.0;
                match colors[v] {
                    Color::White => dir_white[e.0 as usize] = d,
                    Color::Black => dir_black[e.0 as usize] = d,
                }
                partial += a;
            }
        }

        let mut s = RhombicSurface {
            delta,
            colors,
            edge_white: edges.iter().map(|&(w, _)| w).collect(),
            edge_black: edges.iter().map(|&(_, b)| b).collect(),
            alpha,
            rotations,
            rot_pos_white,
            rot_pos_black,
            dir_white,
            dir_black,
            theta_vertex,
            faces: Vec::new(),
            face_of_dart: Vec::new(),
            theta_face: Vec::new(),
            genus: 0,
        };
        s.check_connected()?;
        s.trace_faces();

        let chi = s.vertex_count() as i64 - s.edge_count() as i64 + s.face_count() as i64;
        if chi > 0 || chi % 2 != 0 {
            return Err(Error::EulerMismatch { chi });
        }
        s.genus = ((2 - chi) / 2) as u32;

        // Gauss-Bonnet is an identity once the white sums hold; check it as a
        // guard against tracing bugs.
        let defect: f64 = s
            .cone_points()
            .map(|(_, theta)| TAU - theta)
            .sum();
        let expect = TAU * chi as f64;
        if (defect - expect).abs() > ANGLE_TOL * (1.0 + s.edge_count() as f64) {
            return Err(Error::InvalidSurface(format!(
                "Gauss-Bonnet defect {defect} != 2πχ = {expect}"
            )));
        }
        Ok(s)
    }

    fn check_connected(&self) -> Result<()> {
        let nv = self.colors.len();
        let mut seen = vec![false; nv];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &e in &self.rotations[v] {
                let u = self.other_endpoint(e, VertexId(v as u32)).0 as usize;
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    queue.push_back(u);
                }
            }
        }
        if count != nv {
            return Err(Error::Disconnected);
        }
        Ok(())
    }

    /// Trace all faces with the face-on-the-left rule. Every dart lands in
    /// exactly one face, so Σ_f |∂f| = 2E.
    fn trace_faces(&mut self) {
        let ne = self.alpha.len();
        self.face_of_dart = vec![u32::MAX; 2 * ne];
        self.faces.clear();
        self.theta_face.clear();
        for e in 0..ne {
            for fw in [true, false] {
                let start = Dart { edge: EdgeId(e as u32), from_white: fw };
                if self.face_of_dart[start.index()] != u32::MAX {
                    continue;
                }
                let fid = self.faces.len() as u32;
                let mut darts = Vec::new();
                let mut d = start;
                loop {
                    self.face_of_dart[d.index()] = fid;
                    darts.push(d);
                    d = self.next_in_face(d);
                    if d == start {
                        break;
                    }
                }
                // one rhombus corner of angle π - α(e) at the dual vertex per
                // dart; an edge with both sides on f contributes twice
                let theta: f64 = darts
                    .iter()
                    .map(|d| std::f64::consts::PI - self.alpha[d.edge.0 as usize])
                    .sum();
                self.theta_face.push(theta);
                self.faces.push(FaceWalk { id: FaceId(fid), darts });
            }
        }
    }

    /// Face-on-the-left successor: reverse the dart, then take the CCW
    /// predecessor of the arriving edge at the head vertex.
    pub fn next_in_face(&self, d: Dart) -> Dart {
        let v = self.head(d);
        let e = self.pred_edge(v, d.edge);
        Dart { edge: e, from_white: self.colors[v.0 as usize] == Color::White }
    }

    // --- accessors ---

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn vertex_count(&self) -> usize {
        self.colors.len()
    }

    pub fn edge_count(&self) -> usize {
        self.alpha.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn color(&self, v: VertexId) -> Color {
        self.colors[v.0 as usize]
    }

    pub fn is_white(&self, v: VertexId) -> bool {
        self.color(v) == Color::White
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.colors.len() as u32).map(VertexId)
    }

    pub fn white_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices().filter(|&v| self.color(v) == Color::White)
    }

    pub fn black_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices().filter(|&v| self.color(v) == Color::Black)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.alpha.len() as u32).map(EdgeId)
    }

    pub fn white_end(&self, e: EdgeId) -> VertexId {
        self.edge_white[e.0 as usize]
    }

    pub fn black_end(&self, e: EdgeId) -> VertexId {
        self.edge_black[e.0 as usize]
    }

    pub fn other_endpoint(&self, e: EdgeId, v: VertexId) -> VertexId {
        if self.edge_white[e.0 as usize] == v {
            self.edge_black[e.0 as usize]
        } else {
            self.edge_white[e.0 as usize]
        }
    }

    /// Vertex a dart points away from.
    pub fn tail(&self, d: Dart) -> VertexId {
        if d.from_white {
            self.white_end(d.edge)
        } else {
            self.black_end(d.edge)
        }
    }

    /// Vertex a dart points into.
    pub fn head(&self, d: Dart) -> VertexId {
        if d.from_white {
            self.black_end(d.edge)
        } else {
            self.white_end(d.edge)
        }
    }

    pub fn alpha(&self, e: EdgeId) -> f64 {
        self.alpha[e.0 as usize]
    }

    /// Euclidean length of the edge (the primal rhombus diagonal).
    pub fn edge_length(&self, e: EdgeId) -> f64 {
        2.0 * self.delta * (self.alpha(e) / 2.0).cos()
    }

    /// Length of the dual edge (the other rhombus diagonal).
    pub fn dual_length(&self, e: EdgeId) -> f64 {
        2.0 * self.delta * (self.alpha(e) / 2.0).sin()
    }

    pub fn weight(&self, e: EdgeId, nu: Nu) -> f64 {
        match nu {
            Nu::Dual => self.dual_length(e),
            Nu::Unit => 1.0,
        }
    }

    pub fn rotation(&self, v: VertexId) -> &[EdgeId] {
        &self.rotations[v.0 as usize]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotations[v.0 as usize].len()
    }

    fn rot_pos(&self, v: VertexId, e: EdgeId) -> usize {
        match self.color(v) {
            Color::White => self.rot_pos_white[e.0 as usize] as usize,
            Color::Black => self.rot_pos_black[e.0 as usize] as usize,
        }
    }

    /// CCW predecessor of `e` around `v`.
    pub fn pred_edge(&self, v: VertexId, e: EdgeId) -> EdgeId {
        let rot = self.rotation(v);
        let pos = self.rot_pos(v, e);
        rot[(pos + rot.len() - 1) % rot.len()]
    }

    /// CCW successor of `e` around `v`.
    pub fn succ_edge(&self, v: VertexId, e: EdgeId) -> EdgeId {
        let rot = self.rotation(v);
        let pos = self.rot_pos(v, e);
        rot[(pos + 1) % rot.len()]
    }

    /// Total angle at a vertex: 2π at whites, the cone angle at blacks.
    pub fn theta_vertex(&self, v: VertexId) -> f64 {
        self.theta_vertex[v.0 as usize]
    }

    /// Cone angle of the dual vertex sitting in face `f`.
    pub fn theta_face(&self, f: FaceId) -> f64 {
        self.theta_face[f.0 as usize]
    }

    pub fn faces(&self) -> &[FaceWalk] {
        &self.faces
    }

    pub fn face(&self, f: FaceId) -> &FaceWalk {
        &self.faces[f.0 as usize]
    }

    /// Face to the left of a dart.
    pub fn face_left_of(&self, d: Dart) -> FaceId {
        FaceId(self.face_of_dart[d.index()])
    }

    /// Cumulative CCW direction of `e` seen from `v`, in `[0, θ_v)`,
    /// measured from the first edge of the rotation.
    pub fn direction_at(&self, v: VertexId, e: EdgeId) -> f64 {
        match self.color(v) {
            Color::White => self.dir_white[e.0 as usize],
            Color::Black => self.dir_black[e.0 as usize],
        }
    }

    /// The angle ϑ_V(w, b): direction of edge `e` at white `w` against the
    /// reference tangent V_w (the first edge of the rotation list).
    pub fn edge_direction(&self, w: VertexId, e: EdgeId) -> Result<f64> {
        self.check_incident(w, e)?;
        Ok(self.dir_white[e.0 as usize])
    }

    /// Same, with the reference V_w rotated CCW by `offset`: directions are
    /// measured relative to the rotated tangent, so they all shift by
    /// `-offset` (mod 2π).
    pub fn edge_direction_with_offset(&self, w: VertexId, e: EdgeId, offset: f64) -> Result<f64> {
        Ok((self.edge_direction(w, e)? - offset).rem_euclid(TAU))
    }

    fn check_incident(&self, v: VertexId, e: EdgeId) -> Result<()> {
        if e.0 as usize >= self.alpha.len()
            || (self.white_end(e) != v && self.black_end(e) != v)
        {
            return Err(Error::NotIncident { vertex: v.0, edge: e.0 });
        }
        Ok(())
    }

    /// Corner angle at `v` between an outgoing edge and an incoming edge:
    /// the CCW sweep from `e_out` to `e_in`, in `(0, θ_v)`. For a face walk
    /// this is the interior angle of the face at `v`.
    pub fn corner_angle(&self, v: VertexId, e_in: EdgeId, e_out: EdgeId) -> Result<f64> {
        self.check_incident(v, e_in)?;
        self.check_incident(v, e_out)?;
        if e_in == e_out {
            return Err(Error::DegenerateCorner { vertex: v.0 });
        }
        let theta = self.theta_vertex(v);
        let raw = (self.direction_at(v, e_in) - self.direction_at(v, e_out)).rem_euclid(theta);
        debug_assert!(raw > 0.0);
        Ok(raw)
    }

    /// Area of the star St(w): one rhombus of area δ² sin α per edge.
    pub fn star_area(&self, w: VertexId) -> f64 {
        self.rotation(w)
            .iter()
            .map(|e| self.delta * self.delta * self.alpha(*e).sin())
            .sum()
    }

    /// The star of a white vertex as a standalone developed object.
    pub fn star(&self, w: VertexId) -> Star {
        let alphas: Vec<f64> = self.rotation(w).iter().map(|e| self.alpha(*e)).collect();
        Star::new(self.delta, alphas).expect("validated surface star")
    }

    /// All cone points: black vertices and dual vertices with their total
    /// angles (singular where the angle differs from 2π).
    pub fn cone_points(&self) -> impl Iterator<Item = (ConePoint, f64)> + '_ {
        let blacks = self
            .black_vertices()
            .map(move |b| (ConePoint::Black(b), self.theta_vertex(b)));
        let faces = self
            .faces
            .iter()
            .map(move |f| (ConePoint::Face(f.id), self.theta_face(f.id)));
        blacks.chain(faces)
    }

    /// Cone points whose angle differs from 2π: the singular set S.
    pub fn singular_set(&self) -> Vec<(ConePoint, f64)> {
        self.cone_points()
            .filter(|&(_, theta)| (theta - TAU).abs() > ANGLE_TOL)
            .collect()
    }
}

/// A location that can carry a conical singularity: black vertices and dual
/// vertices (faces). White vertices never do.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ConePoint {
    Black(VertexId),
    Face(FaceId),
}

impl fmt::Display for ConePoint {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            ConePoint::Black(v) => write!(f, "black {v}"),
            ConePoint::Face(x) => write!(f, "face f{}", x.0),
        }
    }
}

/// A closed walk in Γ as a cyclic dart sequence: the head of each dart is
/// the tail of the next. Colors alternate along any walk in a bipartite
/// graph, so the length is even.
#[derive(Clone, Debug, PartialEq)]
pub struct Walk {
    darts: Vec<Dart>,
}

impl Walk {
    pub fn new(s: &RhombicSurface, darts: Vec<Dart>) -> Result<Self> {
        if darts.is_empty() {
            return Err(Error::InvalidSurface("empty walk".into()));
        }
        for (i, &d) in darts.iter().enumerate() {
            let next = darts[(i + 1) % darts.len()];
            if s.head(d) != s.tail(next) {
                return Err(Error::InvalidSurface(format!(
                    "walk breaks between positions {i} and {}",
                    (i + 1) % darts.len()
                )));
            }
        }
        Ok(Walk { darts })
    }

    pub fn darts(&self) -> &[Dart] {
        &self.darts
    }

    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.darts.iter().map(|d| d.edge)
    }

    /// Corner visits: `(vertex, incoming edge, outgoing edge)`, one per dart
    /// transition.
    pub fn visits<'a>(&'a self, s: &'a RhombicSurface) -> impl Iterator<Item = Visit> + 'a {
        (0..self.darts.len()).map(move |i| {
            let d = self.darts[i];
            let next = self.darts[(i + 1) % self.darts.len()];
            Visit { vertex: s.head(d), e_in: d.edge, e_out: next.edge }
        })
    }

    /// True when no vertex is visited twice.
    pub fn is_simple(&self, s: &RhombicSurface) -> bool {
        let mut seen = HashMap::new();
        for v in self.visits(s) {
            if seen.insert(v.vertex, ()).is_some() {
                return false;
            }
        }
        true
    }

    pub fn from_face(f: &FaceWalk) -> Walk {
        Walk { darts: f.darts().to_vec() }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Visit {
    pub vertex: VertexId,
    pub e_in: EdgeId,
    pub e_out: EdgeId,
}

/// Turning angle α_v(C) of an oriented closed walk at a vertex it passes
/// through: the CCW sweep at `v` from the outgoing edge to the reversed
/// incoming edge. Uses the first visit if the walk passes `v` several times.
pub fn turning_angle(s: &RhombicSurface, walk: &Walk, v: VertexId) -> Result<f64> {
    let visit = walk
        .visits(s)
        .find(|vis| vis.vertex == v)
        .ok_or(Error::NotIncident { vertex: v.0, edge: u32::MAX })?;
    s.corner_angle(v, visit.e_in, visit.e_out)
}

/// A white star developed in the plane: `k` rhombi of angles `alphas`
/// (summing to 2π) around the origin, the first edge along the positive real
/// axis.
#[derive(Clone, Debug)]
pub struct Star {
    delta: f64,
    alphas: Vec<f64>,
    dirs: Vec<f64>,
}

impl Star {
    pub fn new(delta: f64, alphas: Vec<f64>) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(Error::InvalidSurface(format!("delta must be positive, got {delta}")));
        }
        for (k, &a) in alphas.iter().enumerate() {
            if !(a > 0.0 && a < std::f64::consts::PI) {
                return Err(Error::NonPositiveAngle { edge: k as u32, alpha: a });
            }
        }
        let sum: f64 = alphas.iter().sum();
        if (sum - TAU).abs() > ANGLE_TOL {
            return Err(Error::WhiteAngleSum { vertex: 0, sum });
        }
        let a0 = alphas[0];
        let mut partial = 0.0;
        let dirs = alphas
            .iter()
            .map(|&a| {
                let d = partial + (a - a0) / 2.0;
                partial += a;
                d
            })
            .collect();
        Ok(Star { delta, alphas, dirs })
    }

    pub fn degree(&self) -> usize {
        self.alphas.len()
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn alpha(&self, j: usize) -> f64 {
        self.alphas[j]
    }

    /// Direction of the j-th edge, in `[0, 2π)`.
    pub fn dir(&self, j: usize) -> f64 {
        self.dirs[j]
    }

    pub fn edge_length(&self, j: usize) -> f64 {
        2.0 * self.delta * (self.alphas[j] / 2.0).cos()
    }

    pub fn dual_length(&self, j: usize) -> f64 {
        2.0 * self.delta * (self.alphas[j] / 2.0).sin()
    }

    pub fn area(&self) -> f64 {
        self.alphas.iter().map(|a| self.delta * self.delta * a.sin()).sum()
    }

    /// Direction of the dual vertex x_j shared by rhombi j and j+1 (x_0 =
    /// x_k sits between the last rhombus and the first).
    pub fn dual_dir(&self, j: usize) -> f64 {
        // side between rhombus j and j+1: cumulative alphas minus half the first
        let partial: f64 = self.alphas[..=j].iter().sum();
        partial - self.alphas[0] / 2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;
    use approx::assert_abs_diff_eq;

    #[test]
    fn surfaces_are_shareable_across_threads() {
        fn assert_sync_send<T: Sync + Send>() {}
        assert_sync_send::<RhombicSurface>();
        assert_sync_send::<Star>();
        assert_sync_send::<Walk>();
    }

    #[test]
    fn honeycomb_torus_is_flat() {
        let s = builders::honeycomb_torus(3, 3).unwrap();
        assert_eq!(s.vertex_count(), 18);
        assert_eq!(s.edge_count(), 27);
        assert_eq!(s.face_count(), 9);
        assert_eq!(s.genus(), 1);
        for (_, theta) in s.cone_points() {
            assert_abs_diff_eq!(theta, TAU, epsilon = 1e-12);
        }
        assert!(s.singular_set().is_empty());
    }

    #[test]
    fn face_tracing_covers_all_darts() {
        for s in [
            builders::honeycomb_torus(3, 3).unwrap(),
            builders::honeycomb_torus(1, 1).unwrap(),
            builders::rhombi_torus(6, 6, 0, &[]).unwrap(),
        ] {
            let total: usize = s.faces().iter().map(|f| f.len()).sum();
            assert_eq!(total, 2 * s.edge_count());
            for f in s.faces() {
                assert_eq!(f.len() % 2, 0);
                // colors alternate along the boundary
                for (i, &d) in f.darts().iter().enumerate() {
                    let next = f.darts()[(i + 1) % f.len()];
                    assert_eq!(s.head(d), s.tail(next));
                    assert_ne!(d.from_white, next.from_white);
                }
            }
        }
    }

    #[test]
    fn rhombus_diagonal_identity() {
        let s = builders::rhombi_torus(6, 6, 0, &[0.1, -0.2, 0.0, 0.05, 0.0, 0.05]).unwrap();
        for e in s.edges() {
            let lhs = s.dual_length(e) * s.edge_length(e);
            let rhs = 2.0 * s.delta() * s.delta() * s.alpha(e).sin();
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
        }
    }

    #[test]
    fn edge_directions_increase_and_span() {
        let s = builders::rhombi_torus(6, 6, 0, &[0.3, -0.1, 0.0, 0.2, -0.3, 0.0]).unwrap();
        for w in s.white_vertices() {
            let dirs: Vec<f64> = s
                .rotation(w)
                .iter()
                .map(|&e| s.edge_direction(w, e).unwrap())
                .collect();
            assert_eq!(dirs[0], 0.0);
            for pair in dirs.windows(2) {
                assert!(pair[0] < pair[1]);
            }
            assert!(*dirs.last().unwrap() < TAU);
        }
    }

    #[test]
    fn honeycomb_edge_direction_values() {
        let s = builders::honeycomb_torus(2, 3).unwrap();
        let w = s.white_vertices().next().unwrap();
        let rot = s.rotation(w).to_vec();
        assert_abs_diff_eq!(s.edge_direction(w, rot[0]).unwrap(), 0.0);
        assert_abs_diff_eq!(s.edge_direction(w, rot[1]).unwrap(), TAU / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.edge_direction(w, rot[2]).unwrap(), 2.0 * TAU / 3.0, epsilon = 1e-12);
        let e = rot[0];
        let b = s.black_end(e);
        assert!(matches!(
            s.edge_direction(b, e),
            Ok(_) | Err(Error::NotIncident { .. })
        ));
    }

    #[test]
    fn per_face_gauss_bonnet() {
        // Σ_{v ∈ ∂f} (π - α_v(∂f)) = θ_f on every face of every builder.
        for s in [
            builders::honeycomb_torus(3, 3).unwrap(),
            builders::rhombi_torus(6, 6, 1, &[0.2, 0.0, -0.2, 0.0, 0.0, 0.0]).unwrap(),
            builders::genus2_octagon(1).unwrap(),
        ] {
            for f in s.faces() {
                let walk = Walk::from_face(f);
                let sum: f64 = walk
                    .visits(&s)
                    .map(|vis| {
                        std::f64::consts::PI
                            - s.corner_angle(vis.vertex, vis.e_in, vis.e_out).unwrap()
                    })
                    .sum();
                assert_abs_diff_eq!(sum, s.theta_face(f.id), epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn white_angle_sum_error() {
        // degree-2 white with alphas summing to π
        let colors = vec![Color::White, Color::Black];
        let edges = vec![(VertexId(0), VertexId(1)), (VertexId(0), VertexId(1))];
        let alpha = vec![std::f64::consts::PI / 2.0; 2];
        let rot = vec![vec![EdgeId(0), EdgeId(1)], vec![EdgeId(0), EdgeId(1)]];
        let err = RhombicSurface::new(1.0, colors, edges, alpha, rot).unwrap_err();
        assert!(matches!(err, Error::WhiteAngleSum { .. }), "{err}");
    }

    #[test]
    fn non_bipartite_error() {
        let colors = vec![Color::White, Color::White];
        let edges = vec![(VertexId(0), VertexId(1))];
        let err = RhombicSurface::new(
            1.0,
            colors,
            edges,
            vec![1.0],
            vec![vec![EdgeId(0)], vec![EdgeId(0)]],
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonBipartite(_)));
    }

    #[test]
    fn star_area_values() {
        let hex = Star::new(1.0, vec![TAU / 3.0; 3]).unwrap();
        assert_abs_diff_eq!(hex.area(), 3.0 * (TAU / 3.0).sin(), epsilon = 1e-12);
        assert_abs_diff_eq!(hex.area(), 3.0 * 3f64.sqrt() / 2.0, epsilon = 1e-12);
        let square = Star::new(1.0, vec![TAU / 4.0; 4]).unwrap();
        assert_abs_diff_eq!(square.area(), 4.0, epsilon = 1e-12);
    }

    #[test]
    fn turning_angle_values() {
        // interior angle of a hexagonal face at a white vertex
        let hex = builders::honeycomb_torus(2, 3).unwrap();
        let f = &hex.faces()[0];
        let walk = Walk::from_face(f);
        let w = walk
            .visits(&hex)
            .find(|v| hex.is_white(v.vertex))
            .map(|v| v.vertex)
            .unwrap();
        let angle = turning_angle(&hex, &walk, w).unwrap();
        assert_abs_diff_eq!(angle, TAU / 3.0, epsilon = 1e-12);

        // a straight line through a degree-4 square-lattice vertex turns by π
        let sq = builders::genus2_octagon(1).unwrap();
        let w = sq.white_vertices().next().unwrap();
        let rot = sq.rotation(w).to_vec();
        let b_in = sq.black_end(rot[2]);
        let b_out = sq.black_end(rot[0]);
        let darts = vec![
            Dart { edge: rot[2], from_white: false },
            Dart { edge: rot[0], from_white: true },
            // close up through any path; only the corner at w matters, so
            // walk straight back the other way
            Dart { edge: rot[0], from_white: false },
            Dart { edge: rot[2], from_white: true },
        ];
        let _ = (b_in, b_out);
        let walk = Walk::new(&sq, darts).unwrap();
        let angle = turning_angle(&sq, &walk, w).unwrap();
        assert_abs_diff_eq!(angle, std::f64::consts::PI, epsilon = 1e-12);

        // degenerate corner: incoming and outgoing edge coincide
        let bounce = Walk::new(
            &sq,
            vec![
                Dart { edge: rot[0], from_white: true },
                Dart { edge: rot[0], from_white: false },
            ],
        )
        .unwrap();
        assert!(matches!(
            turning_angle(&sq, &bounce, sq.black_end(rot[0])),
            Err(Error::DegenerateCorner { .. })
        ));
    }

    #[test]
    fn sphere_is_rejected() {
        // the cube with its planar rotations traces six squares: χ = 2
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
        for b in 4..8u32 {
            let rot: Vec<EdgeId> = edges
                .iter()
                .enumerate()
                .filter(|(_, &(_, bk))| bk == VertexId(b))
                .map(|(k, _)| EdgeId(k as u32))
                .collect();
            rotations.push(rot);
        }
        rotations[4].swap(1, 2);
        rotations[6].swap(1, 2);
        let err = RhombicSurface::new(1.0, colors, edges, vec![TAU / 3.0; 12], rotations);
        assert!(
            matches!(err, Err(Error::EulerMismatch { chi: 2 })),
            "expected the sphere to be rejected, got {err:?}"
        );
    }

    #[test]
    fn star_area_bound() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let degree = rng.gen_range(3..=8);
            let mut raw: Vec<f64> = (0..degree).map(|_| rng.gen_range(0.05..1.0)).collect();
            let sum: f64 = raw.iter().sum();
            for a in &mut raw {
                *a *= TAU / sum;
            }
            if raw.iter().any(|&a| a <= 0.01 || a >= std::f64::consts::PI - 0.01) {
                continue;
            }
            let delta: f64 = rng.gen_range(0.5..2.0);
            let star = Star::new(delta, raw).unwrap();
            let area = star.area();
            assert!(area > 0.0);
            assert!(area <= std::f64::consts::PI * delta * delta * degree as f64 / 2.0);
        }
    }

    #[test]
    fn genus2_octagon_cone_angles() {
        let s = builders::genus2_octagon(1).unwrap();
        assert_eq!(s.genus(), 2);
        let singular = s.singular_set();
        assert_eq!(singular.len(), 1);
        match singular[0] {
            (ConePoint::Face(_), theta) => assert_abs_diff_eq!(theta, 3.0 * TAU, epsilon = 1e-9),
            _ => panic!("singularity must sit at a dual vertex"),
        }
    }

    #[test]
    fn regular_4g_gon_defect() {
        // total angle defect of the genus-2 builder equals 2πχ = -4π
        let s = builders::genus2_octagon(1).unwrap();
        let defect: f64 = s.cone_points().map(|(_, t)| TAU - t).sum();
        assert_abs_diff_eq!(defect, -2.0 * TAU, epsilon = 1e-9);
    }
}
