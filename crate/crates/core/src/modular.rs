//! The modular-group spacetime: Lorentzian suspensions of the two halves of
//! the `PSL(2, ℤ)` fundamental domain, glued by the generators, and the
//! polyhedral Cauchy surface cut out by a horizontal plane.
//!
//! `SL(2, ℝ)` acts on symmetric matrices `X = [[t + x, y], [y, t − x]]` by
//! `X ↦ g X gᵀ`, preserving `det X = t² − x² − y²`. The upper half-plane
//! embeds equivariantly as `z = u + iv ↦ (1/v) [[|z|², u], [u, 1]]`.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix3};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lorentz::{classify_isometry, q_form, IsometryClass, LorentzIsometry, LorentzVector};

/// Tolerance for gluing checks and generator relations.
pub const GLUING_TOL: f64 = 1e-9;

/// Image of `g ∈ SL(2, ℝ)` in `SO₀(1, 2)`.
pub fn adjoint(g: &Matrix2<f64>) -> Result<LorentzIsometry> {
    let det = g.determinant();
    if (det - 1.0).abs() > 1e-12 * g.norm_squared().max(1.0) {
        return Err(Error::InvalidIsometry(format!("det = {det} ≠ 1")));
    }
    let basis = [
        Matrix2::identity(),
        Matrix2::new(1.0, 0.0, 0.0, -1.0),
        Matrix2::new(0.0, 1.0, 1.0, 0.0),
    ];
    let mut m = Matrix3::zeros();
    for (col, b) in basis.iter().enumerate() {
        let y = g * b * g.transpose();
        m[(0, col)] = 0.5 * (y[(0, 0)] + y[(1, 1)]);
        m[(1, col)] = 0.5 * (y[(0, 0)] - y[(1, 1)]);
        m[(2, col)] = y[(0, 1)];
    }
    LorentzIsometry::linear_only(m)
}

/// Point of the hyperboloid `{q = −1, t > 0}` for `z` in the upper half-plane.
pub fn half_plane_to_hyperboloid(u: f64, v: f64) -> Result<LorentzVector> {
    if !(v > 0.0) || !u.is_finite() || !v.is_finite() {
        return Err(Error::OutOfRange(format!(
            "z = {u} + {v}i is not in the upper half-plane"
        )));
    }
    let m = u * u + v * v;
    Ok(LorentzVector::new(0.5 * (m + 1.0) / v, 0.5 * (m - 1.0) / v, u / v))
}

/// `(S, T)`: images of `z ↦ −1/z` and `z ↦ z + 1`.
pub fn psl2z_representation() -> (LorentzIsometry, LorentzIsometry) {
    let s = adjoint(&Matrix2::new(0.0, -1.0, 1.0, 0.0)).expect("det 1");
    let t = adjoint(&Matrix2::new(1.0, 1.0, 0.0, 1.0)).expect("det 1");
    (s, t)
}

/// `(‖S² − I‖, ‖(ST)³ − I‖)`.
pub fn relation_residuals() -> (f64, f64) {
    let (s, t) = psl2z_representation();
    let id = LorentzIsometry::identity();
    let st = s.compose(&t);
    (s.powi(2).distance(&id), st.powi(3).distance(&id))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Vertex {
    A,
    B,
    C,
    Infinity,
}

impl Vertex {
    pub fn label(self) -> &'static str {
        match self {
            Vertex::A => "A",
            Vertex::B => "B",
            Vertex::C => "C",
            Vertex::Infinity => "inf",
        }
    }
}

/// Ray through a vertex: a hyperboloid point or, for the cusp, the null
/// direction with `t = 1`.
pub fn vertex_ray(v: Vertex) -> LorentzVector {
    let h = 0.5 * 3f64.sqrt();
    match v {
        Vertex::A => half_plane_to_hyperboloid(-0.5, h).expect("valid"),
        Vertex::B => half_plane_to_hyperboloid(0.0, 1.0).expect("valid"),
        Vertex::C => half_plane_to_hyperboloid(0.5, h).expect("valid"),
        Vertex::Infinity => LorentzVector::new(1.0, 1.0, 0.0),
    }
}

/// An ideal hyperbolic triangle given by its vertex rays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Triangle {
    pub vertices: [Vertex; 3],
    pub rays: [LorentzVector; 3],
}

impl Triangle {
    pub fn new(vertices: [Vertex; 3]) -> Self {
        Self {
            vertices,
            rays: vertices.map(vertex_ray),
        }
    }

    fn local(&self, v: Vertex) -> Option<usize> {
        self.vertices.iter().position(|&w| w == v)
    }

    /// Hyperbolic angle at vertex `i`, `0` at an ideal vertex.
    pub fn angle_at(&self, i: usize) -> f64 {
        let p = self.rays[i];
        if q_form(&p).abs() < 1e-12 {
            return 0.0;
        }
        let p = p * (1.0 / (-q_form(&p)).sqrt());
        let tangent = |q: LorentzVector| q + p * p.dot(&q);
        let u = tangent(self.rays[(i + 1) % 3]);
        let w = tangent(self.rays[(i + 2) % 3]);
        (u.dot(&w) / (u.dot(&u) * w.dot(&w)).sqrt()).clamp(-1.0, 1.0).acos()
    }
}

/// The triangles `[A, B, ∞]` and `[C, B, ∞]`.
pub fn fundamental_triangles() -> [Triangle; 2] {
    [
        Triangle::new([Vertex::A, Vertex::B, Vertex::Infinity]),
        Triangle::new([Vertex::C, Vertex::B, Vertex::Infinity]),
    ]
}

/// An edge of a triangle, by its endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRef {
    pub triangle: usize,
    pub ends: [Vertex; 2],
}

/// `map` carries `from.ends[k]` onto `to.ends[k]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pairing {
    pub name: String,
    pub from: EdgeRef,
    pub to: EdgeRef,
    pub map: LorentzIsometry,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LineKind {
    Massive { cone_angle: f64 },
    ExtremeBtz,
    Regular,
}

/// Classification of the vertical edge over one vertex class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexCycle {
    pub vertices: Vec<Vertex>,
    /// `(triangle, local vertex index)` in traversal order.
    pub corners: Vec<(usize, usize)>,
    /// Sum of hyperbolic corner angles.
    pub angle_sum: f64,
    pub holonomy: LorentzIsometry,
    pub holonomy_class: IsometryClass,
    pub kind: LineKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuspensionComplex {
    pub triangles: Vec<Triangle>,
    pub pairings: Vec<Pairing>,
    pub cycles: Vec<VertexCycle>,
    /// Largest ray mismatch over all pairings.
    pub gluing_residual: f64,
    /// Largest difference of finite hyperbolic edge lengths over pairings.
    pub edge_length_residual: f64,
}

fn normalize_ray(v: &LorentzVector) -> LorentzVector {
    *v * (1.0 / v.t)
}

fn ray_distance(a: &LorentzVector, b: &LorentzVector) -> f64 {
    (normalize_ray(a) - normalize_ray(b)).euclidean_norm()
}

fn hyperbolic_distance(a: &LorentzVector, b: &LorentzVector) -> Option<f64> {
    let (qa, qb) = (q_form(a), q_form(b));
    if qa.abs() < 1e-12 || qb.abs() < 1e-12 {
        return None;
    }
    Some((-a.dot(b) / (qa * qb).sqrt()).max(1.0).acosh())
}

impl SuspensionComplex {
    /// Validate gluings and classify the vertex cycles.
    pub fn new(triangles: Vec<Triangle>, pairings: Vec<Pairing>) -> Result<Self> {
        let mut gluing_residual: f64 = 0.0;
        let mut edge_length_residual: f64 = 0.0;
        for p in &pairings {
            let (Some(tf), Some(tt)) = (triangles.get(p.from.triangle), triangles.get(p.to.triangle)) else {
                return Err(Error::GluingMismatch {
                    pairing: p.name.clone(),
                    residual: f64::INFINITY,
                });
            };
            let mut residual: f64 = 0.0;
            for k in 0..2 {
                let (i, j) = match (tf.local(p.from.ends[k]), tt.local(p.to.ends[k])) {
                    (Some(i), Some(j)) => (i, j),
                    _ => {
                        return Err(Error::GluingMismatch {
                            pairing: p.name.clone(),
                            residual: f64::INFINITY,
                        })
                    }
                };
                residual = residual.max(ray_distance(&p.map.apply_linear(&tf.rays[i]), &tt.rays[j]));
            }
            if residual > GLUING_TOL {
                return Err(Error::GluingMismatch {
                    pairing: p.name.clone(),
                    residual,
                });
            }
            gluing_residual = gluing_residual.max(residual);
            let ends =
                |t: &Triangle, e: &EdgeRef| (t.rays[t.local(e.ends[0]).unwrap()], t.rays[t.local(e.ends[1]).unwrap()]);
            let (a0, a1) = ends(tf, &p.from);
            let (b0, b1) = ends(tt, &p.to);
            if let (Some(la), Some(lb)) = (hyperbolic_distance(&a0, &a1), hyperbolic_distance(&b0, &b1)) {
                edge_length_residual = edge_length_residual.max((la - lb).abs());
            }
        }
        let mut c = Self {
            triangles,
            pairings,
            cycles: Vec::new(),
            gluing_residual,
            edge_length_residual,
        };
        c.cycles = c.vertex_cycles()?;
        Ok(c)
    }

    /// Partner of an edge and the map onto it, if paired.
    fn cross(&self, tri: usize, ends: [Vertex; 2]) -> Option<(usize, [Vertex; 2], LorentzIsometry)> {
        let same = |e: &EdgeRef| e.triangle == tri && (e.ends == ends || e.ends == [ends[1], ends[0]]);
        for p in &self.pairings {
            if same(&p.from) {
                let flip = p.from.ends != ends;
                let to = if flip { [p.to.ends[1], p.to.ends[0]] } else { p.to.ends };
                return Some((p.to.triangle, to, p.map));
            }
            if same(&p.to) {
                let flip = p.to.ends != ends;
                let to = if flip {
                    [p.from.ends[1], p.from.ends[0]]
                } else {
                    p.from.ends
                };
                return Some((p.from.triangle, to, p.map.inverse()));
            }
        }
        None
    }

    /// Walk around each vertex class, crossing paired edges.
    fn vertex_cycles(&self) -> Result<Vec<VertexCycle>> {
        let mut seen = vec![[false; 3]; self.triangles.len()];
        let mut cycles = Vec::new();
        for t0 in 0..self.triangles.len() {
            for i0 in 0..3 {
                if seen[t0][i0] {
                    continue;
                }
                let (mut t, mut i) = (t0, i0);
                // leave through the edge towards the next local vertex
                let mut other = self.triangles[t].vertices[(i + 1) % 3];
                let mut holonomy = LorentzIsometry::identity();
                let mut corners = Vec::new();
                let mut vertices = Vec::new();
                let mut angle_sum = 0.0;
                loop {
                    seen[t][i] = true;
                    corners.push((t, i));
                    let tri = &self.triangles[t];
                    if !vertices.contains(&tri.vertices[i]) {
                        vertices.push(tri.vertices[i]);
                    }
                    angle_sum += tri.angle_at(i);
                    let (nt, nends, g) =
                        self.cross(t, [tri.vertices[i], other])
                            .ok_or_else(|| Error::GluingMismatch {
                                pairing: format!(
                                    "unpaired edge {}{} of triangle {t}",
                                    tri.vertices[i].label(),
                                    other.label()
                                ),
                                residual: f64::INFINITY,
                            })?;
                    holonomy = g.compose(&holonomy);
                    let ntri = &self.triangles[nt];
                    let ni = ntri.local(nends[0]).expect("paired edge endpoint");
                    // continue through the other edge of the new corner
                    let third = (0..3)
                        .find(|&k| k != ni && ntri.vertices[k] != nends[1])
                        .expect("triangle");
                    t = nt;
                    i = ni;
                    other = ntri.vertices[third];
                    if t == t0 && i == i0 {
                        break;
                    }
                    if corners.len() > 4 * self.triangles.len() {
                        return Err(Error::GluingMismatch {
                            pairing: "vertex cycle does not close".into(),
                            residual: f64::INFINITY,
                        });
                    }
                }
                vertices.sort();
                let holonomy_class = classify_isometry(&holonomy)?;
                let ideal = q_form(&self.triangles[t0].rays[i0]).abs() < 1e-12;
                let kind = if ideal {
                    if holonomy_class == IsometryClass::Parabolic {
                        LineKind::ExtremeBtz
                    } else {
                        return Err(Error::GluingMismatch {
                            pairing: format!("cusp holonomy is {}", holonomy_class.name()),
                            residual: f64::INFINITY,
                        });
                    }
                } else if (angle_sum - 2.0 * PI).abs() < GLUING_TOL {
                    LineKind::Regular
                } else {
                    LineKind::Massive { cone_angle: angle_sum }
                };
                cycles.push(VertexCycle {
                    vertices,
                    corners,
                    angle_sum,
                    holonomy,
                    holonomy_class,
                    kind,
                });
            }
        }
        cycles.sort_by(|a, b| a.vertices.cmp(&b.vertices));
        Ok(cycles)
    }
}

/// The standard pairings: `S : [B, C] → [B, A]`, `T : [A, ∞] → [C, ∞]`,
/// and the shared edge `[B, ∞]`.
pub fn standard_pairings() -> Vec<Pairing> {
    let (s, t) = psl2z_representation();
    vec![
        Pairing {
            name: "S".into(),
            from: EdgeRef {
                triangle: 1,
                ends: [Vertex::B, Vertex::C],
            },
            to: EdgeRef {
                triangle: 0,
                ends: [Vertex::B, Vertex::A],
            },
            map: s,
        },
        Pairing {
            name: "T".into(),
            from: EdgeRef {
                triangle: 0,
                ends: [Vertex::A, Vertex::Infinity],
            },
            to: EdgeRef {
                triangle: 1,
                ends: [Vertex::C, Vertex::Infinity],
            },
            map: t,
        },
        Pairing {
            name: "shared".into(),
            from: EdgeRef {
                triangle: 0,
                ends: [Vertex::B, Vertex::Infinity],
            },
            to: EdgeRef {
                triangle: 1,
                ends: [Vertex::B, Vertex::Infinity],
            },
            map: LorentzIsometry::identity(),
        },
    ]
}

pub fn build_complex() -> Result<SuspensionComplex> {
    SuspensionComplex::new(fundamental_triangles().to_vec(), standard_pairings())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConePoint {
    pub vertices: Vec<Vertex>,
    /// Total Euclidean angle around the vertex.
    pub total_angle: f64,
    pub line: LineKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyhedralSurface {
    pub t0: f64,
    /// Euclidean triangles in the plane `t = t0`.
    pub triangles: Vec<[LorentzVector; 3]>,
    pub labels: Vec<[Vertex; 3]>,
    pub cone_points: Vec<ConePoint>,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub face_count: usize,
    /// Largest length difference over glued edges.
    pub edge_length_residual: f64,
}

impl PolyhedralSurface {
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count as i64 - self.edge_count as i64 + self.face_count as i64
    }

    pub fn cone_angle_sum(&self) -> f64 {
        self.cone_points.iter().map(|c| c.total_angle).sum()
    }

    /// `Σ (2π − kᵢ)`, equal to `2πχ` for a closed flat cone surface.
    pub fn curvature_sum(&self) -> f64 {
        self.cone_points.iter().map(|c| 2.0 * PI - c.total_angle).sum()
    }

    /// Edge lengths of each triangle, `[|v0v1|, |v1v2|, |v2v0|]`.
    pub fn edge_lengths(&self) -> Vec<[f64; 3]> {
        self.triangles
            .iter()
            .map(|t| [0, 1, 2].map(|k| (t[(k + 1) % 3] - t[k]).euclidean_norm()))
            .collect()
    }
}

fn euclidean_angle(p: &LorentzVector, q: &LorentzVector, r: &LorentzVector) -> f64 {
    let (u, w) = (*q - *p, *r - *p);
    let dot = u.x * w.x + u.y * w.y + u.t * w.t;
    (dot / (u.euclidean_norm() * w.euclidean_norm()))
        .clamp(-1.0, 1.0)
        .acos()
}

/// Section of the complex by the plane `{t = t0}`; the cusp contributes the
/// vertex on the light cone.
pub fn polyhedral_cauchy_surface(complex: &SuspensionComplex, t0: f64) -> Result<PolyhedralSurface> {
    if !(t0 > 0.0 && t0.is_finite()) {
        return Err(Error::OutOfRange(format!("t0 = {t0} must be positive")));
    }
    let triangles: Vec<[LorentzVector; 3]> = complex
        .triangles
        .iter()
        .map(|t| t.rays.map(|r| r * (t0 / r.t)))
        .collect();
    let labels: Vec<[Vertex; 3]> = complex.triangles.iter().map(|t| t.vertices).collect();
    let cone_points = complex
        .cycles
        .iter()
        .map(|c| ConePoint {
            vertices: c.vertices.clone(),
            total_angle: c
                .corners
                .iter()
                .map(|&(t, i)| {
                    let tri = &triangles[t];
                    euclidean_angle(&tri[i], &tri[(i + 1) % 3], &tri[(i + 2) % 3])
                })
                .sum(),
            line: c.kind,
        })
        .collect();
    let mut edge_length_residual: f64 = 0.0;
    for p in &complex.pairings {
        let len = |e: &EdgeRef| {
            let t = &complex.triangles[e.triangle];
            let tri = &triangles[e.triangle];
            (tri[t.local(e.ends[1]).unwrap()] - tri[t.local(e.ends[0]).unwrap()]).euclidean_norm()
        };
        edge_length_residual = edge_length_residual.max((len(&p.from) - len(&p.to)).abs());
    }
    let face_count = triangles.len();
    // each pairing identifies two of the 3F edges
    let edge_count = 3 * face_count - complex.pairings.len();
    Ok(PolyhedralSurface {
        t0,
        triangles,
        labels,
        cone_points,
        vertex_count: complex.cycles.len(),
        edge_count,
        face_count,
        edge_length_residual,
    })
}

/// Möller–Trumbore intersection of the ray `s·dir, s > 0` with a triangle,
/// with barycentric slack `eps` so that edges and vertices count.
pub fn ray_triangle(dir: &LorentzVector, tri: &[LorentzVector; 3], eps: f64) -> Option<LorentzVector> {
    let v = |p: &LorentzVector| nalgebra::Vector3::new(p.t, p.x, p.y);
    let d = v(dir);
    let (p0, p1, p2) = (v(&tri[0]), v(&tri[1]), v(&tri[2]));
    let e1 = p1 - p0;
    let e2 = p2 - p0;
    let h = d.cross(&e2);
    let a = e1.dot(&h);
    if a.abs() < 1e-14 {
        return None;
    }
    let s = -p0;
    let u = s.dot(&h) / a;
    let q = s.cross(&e1);
    let w = d.dot(&q) / a;
    if u < -eps || w < -eps || u + w > 1.0 + eps {
        return None;
    }
    let dist = e2.dot(&q) / a;
    (dist > 0.0).then(|| *dir * dist)
}

/// Number of distinct points where the ray meets the surface.
pub fn ray_intersection_count(surface: &PolyhedralSurface, dir: &LorentzVector) -> usize {
    let scale = surface.t0.max(1.0);
    let mut hits: Vec<LorentzVector> = Vec::new();
    for tri in &surface.triangles {
        if let Some(p) = ray_triangle(dir, tri, 1e-9) {
            if !hits.iter().any(|h| (*h - p).euclidean_norm() <= 1e-9 * scale) {
                hits.push(p);
            }
        }
    }
    hits.len()
}

/// A random future ray through the fundamental domain
/// `{|u| ≤ 1/2, |z| ≥ 1}`, drawn via the half-plane model.
pub fn random_sector_ray<R: Rng>(rng: &mut R) -> LorentzVector {
    let u: f64 = rng.random_range(-0.5..=0.5);
    let floor = (1.0 - u * u).sqrt();
    // 1/w with w ∈ (0, 1] reaches arbitrarily high into the cusp
    let w: f64 = 1.0 - rng.random::<f64>();
    half_plane_to_hyperboloid(u, floor / w).expect("v > 0")
}

/// Rays that meet the surface at its vertices and along its edges.
pub fn special_rays() -> Vec<(&'static str, LorentzVector)> {
    vec![
        ("B", vertex_ray(Vertex::B)),
        ("A", vertex_ray(Vertex::A)),
        ("C", vertex_ray(Vertex::C)),
        ("inf", vertex_ray(Vertex::Infinity)),
        ("edge B-inf", half_plane_to_hyperboloid(0.0, 3.0).unwrap()),
        (
            "edge B-C",
            half_plane_to_hyperboloid(0.3, (1.0 - 0.09f64).sqrt()).unwrap(),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn generators() {
        let (s, t) = psl2z_representation();
        assert_eq!(classify_isometry(&s).unwrap(), IsometryClass::Elliptic { angle: PI });
        assert_abs_diff_eq!(s.trace(), -1.0, epsilon = 1e-15);
        assert_eq!(classify_isometry(&t).unwrap(), IsometryClass::Parabolic);
        assert_abs_diff_eq!(t.trace(), 3.0, epsilon = 1e-15);
        let (r2, r3) = relation_residuals();
        assert!(r2 < 1e-9 && r3 < 1e-9);
        let n = vertex_ray(Vertex::Infinity);
        assert!((t.apply_linear(&n) - n).euclidean_norm() < 1e-9);
    }

    #[test]
    fn adjoint_is_equivariant() {
        // oracle: Möbius action on the half-plane
        let g = Matrix2::new(2.0, 1.0, 3.0, 2.0);
        let rho = adjoint(&g).unwrap();
        let z = nalgebra::Complex::new(0.3, 0.7);
        let gz = (z * 2.0 + 1.0) / (z * 3.0 + 2.0);
        let lhs = rho.apply_linear(&half_plane_to_hyperboloid(z.re, z.im).unwrap());
        let rhs = half_plane_to_hyperboloid(gz.re, gz.im).unwrap();
        assert!((lhs - rhs).euclidean_norm() < 1e-12);
        assert!(adjoint(&Matrix2::new(1.0, 1.0, 1.0, 1.0)).is_err());
    }

    #[test]
    fn triangle_angles() {
        let [t1, t2] = fundamental_triangles();
        assert_abs_diff_eq!(t1.angle_at(1), FRAC_PI_2, epsilon = 1e-9);
        assert_abs_diff_eq!(t1.angle_at(0), PI / 3.0, epsilon = 1e-9);
        assert_abs_diff_eq!(t2.angle_at(0), PI / 3.0, epsilon = 1e-9);
        assert_eq!(q_form(&t1.rays[2]), 0.0);
        assert_eq!(t1.angle_at(2), 0.0);
    }

    #[test]
    fn singular_lines() {
        let c = build_complex().unwrap();
        assert_eq!(c.cycles.len(), 3);
        let by = |v: Vertex| c.cycles.iter().find(|cy| cy.vertices.contains(&v)).unwrap();
        let LineKind::Massive { cone_angle } = by(Vertex::B).kind else {
            panic!()
        };
        assert_abs_diff_eq!(cone_angle, PI, epsilon = 1e-9);
        assert_eq!(by(Vertex::B).holonomy_class, IsometryClass::Elliptic { angle: PI });
        let ac = by(Vertex::A);
        assert_eq!(ac.vertices, vec![Vertex::A, Vertex::C]);
        let LineKind::Massive { cone_angle } = ac.kind else {
            panic!()
        };
        assert_abs_diff_eq!(cone_angle, 2.0 * PI / 3.0, epsilon = 1e-9);
        let IsometryClass::Elliptic { angle } = ac.holonomy_class else {
            panic!()
        };
        assert_abs_diff_eq!(angle, 2.0 * PI / 3.0, epsilon = 1e-9);
        assert_eq!(by(Vertex::Infinity).kind, LineKind::ExtremeBtz);
        assert!(c.gluing_residual < 1e-12 && c.edge_length_residual < 1e-12);
    }

    #[test]
    fn bad_gluing_is_rejected() {
        let mut pairings = standard_pairings();
        pairings[0].map = LorentzIsometry::rotation(PI / 2.0);
        assert!(matches!(
            SuspensionComplex::new(fundamental_triangles().to_vec(), pairings),
            Err(Error::GluingMismatch { .. })
        ));
    }

    #[test]
    fn polyhedral_surface() {
        let c = build_complex().unwrap();
        let s = polyhedral_cauchy_surface(&c, 1.0).unwrap();
        assert_eq!((s.vertex_count, s.edge_count, s.face_count), (3, 3, 2));
        assert_eq!(s.euler_characteristic(), 2);
        assert_abs_diff_eq!(s.cone_angle_sum(), 2.0 * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(s.curvature_sum(), 4.0 * PI, epsilon = 1e-12);
        assert!(s.edge_length_residual < 1e-12);
        let expected = [PI, 2.0 * 2f64.atan(), 2.0 * 0.5f64.atan()];
        let mut got: Vec<f64> = s.cone_points.iter().map(|p| p.total_angle).collect();
        got.sort_by(|a, b| b.total_cmp(a));
        for (g, e) in got.iter().zip(expected) {
            assert_abs_diff_eq!(*g, e, epsilon = 1e-12);
        }
        let s2 = polyhedral_cauchy_surface(&c, 2.0).unwrap();
        for (a, b) in s.edge_lengths().iter().zip(s2.edge_lengths()) {
            for k in 0..3 {
                assert_abs_diff_eq!(2.0 * a[k], b[k], epsilon = 1e-12);
            }
        }
        assert!(polyhedral_cauchy_surface(&c, 0.0).is_err());
    }

    #[test]
    fn special_rays_hit_once() {
        let s = polyhedral_cauchy_surface(&build_complex().unwrap(), 1.0).unwrap();
        for (name, r) in special_rays() {
            assert_eq!(ray_intersection_count(&s, &r), 1, "{name}");
        }
        // outside the sector
        let out = half_plane_to_hyperboloid(0.9, 0.2).unwrap();
        assert_eq!(ray_intersection_count(&s, &out), 0);
    }

    proptest! {
        #[test]
        fn sector_rays_hit_once(seed in any::<u64>(), t0 in 0.1f64..10.0) {
            let s = polyhedral_cauchy_surface(&build_complex().unwrap(), t0).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = random_sector_ray(&mut rng);
            prop_assert_eq!(ray_intersection_count(&s, &r), 1);
        }
    }
}
