use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};

use crate::mesh::vec3::{cross, dot, norm, norm2, sub, Vec3};
use crate::mesh::{FaceGeometry, TriangleMesh};

use super::{FieldKind, GeometryError, ScalarField};

/// How the surface area around a vertex is measured.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AreaMode {
    /// Mixed Voronoi cell: circumcentric Voronoi region for non-obtuse
    /// triangles, half or a quarter of the triangle area for obtuse ones.
    #[default]
    Mixed,
    /// One third of every incident face.
    Barycentric,
}

/// Interior angle at `p` of the triangle `(p, q, r)`.
fn corner_angle(p: Vec3, q: Vec3, r: Vec3) -> f64 {
    let u = sub(q, p);
    let v = sub(r, p);
    norm(cross(u, v)).atan2(dot(u, v))
}

/// Corners of face `f` rotated so that `v` comes first.
fn corners_from(mesh: &TriangleMesh, f: usize, v: u32) -> [Vec3; 3] {
    let idx = mesh.faces()[f];
    let k = idx.iter().position(|&x| x == v).expect("vertex is on face");
    let p = mesh.vertices();
    [
        p[idx[k] as usize],
        p[idx[(k + 1) % 3] as usize],
        p[idx[(k + 2) % 3] as usize],
    ]
}

fn face_area_share(corners: [Vec3; 3], geometry: &FaceGeometry, mode: AreaMode) -> f64 {
    match mode {
        AreaMode::Barycentric => geometry.area / 3.0,
        AreaMode::Mixed => {
            let [p, q, r] = corners;
            let at_p = corner_angle(p, q, r);
            let at_q = corner_angle(q, r, p);
            let at_r = corner_angle(r, p, q);
            if at_p > FRAC_PI_2 {
                geometry.area / 2.0
            } else if at_q > FRAC_PI_2 || at_r > FRAC_PI_2 {
                geometry.area / 4.0
            } else {
                let cot = |a: Vec3, b: Vec3, c: Vec3| {
                    let u = sub(b, a);
                    let v = sub(c, a);
                    dot(u, v) / norm(cross(u, v))
                };
                (norm2(sub(r, p)) * cot(q, r, p) + norm2(sub(q, p)) * cot(r, p, q)) / 8.0
            }
        }
    }
}

fn vertex_area(
    mesh: &TriangleMesh,
    geometry: &[FaceGeometry],
    vertex: usize,
    mode: AreaMode,
) -> f64 {
    mesh.vertex_faces(vertex)
        .iter()
        .map(|&f| f as usize)
        .filter(|&f| !geometry[f].degenerate)
        .map(|f| face_area_share(corners_from(mesh, f, vertex as u32), &geometry[f], mode))
        .sum()
}

/// Area attributed to `vertex`, summed over its non-degenerate incident faces.
pub fn voronoi_area(
    mesh: &TriangleMesh,
    vertex: usize,
    mode: AreaMode,
) -> Result<f64, GeometryError> {
    if vertex >= mesh.vertex_count() {
        return Err(GeometryError::VertexOutOfRange {
            vertex,
            vertex_count: mesh.vertex_count(),
        });
    }
    let geometry = mesh.face_geometries();
    let area = vertex_area(mesh, &geometry, vertex, mode);
    if area > 0.0 {
        Ok(area)
    } else {
        Err(GeometryError::ZeroArea(vertex))
    }
}

/// Angle defect `2*pi - sum of incident corner angles` per vertex, ignoring
/// degenerate faces.
pub fn angle_defects(mesh: &TriangleMesh) -> Vec<f64> {
    let geometry = mesh.face_geometries();
    (0..mesh.vertex_count())
        .map(|v| defect(mesh, &geometry, v))
        .collect()
}

fn defect(mesh: &TriangleMesh, geometry: &[FaceGeometry], vertex: usize) -> f64 {
    let angle_sum: f64 = mesh
        .vertex_faces(vertex)
        .iter()
        .map(|&f| f as usize)
        .filter(|&f| !geometry[f].degenerate)
        .map(|f| {
            let [p, q, r] = corners_from(mesh, f, vertex as u32);
            corner_angle(p, q, r)
        })
        .sum();
    TAU - angle_sum
}

/// Curvature of one vertex together with the area used to normalize it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexCurvature {
    pub vertex: usize,
    pub curvature: f64,
    pub area: f64,
}

/// Per-vertex Gaussian curvature with its area, for every vertex whose area
/// is positive. `curvature * area` is the angle defect.
pub fn vertex_curvatures(mesh: &TriangleMesh, mode: AreaMode) -> Vec<VertexCurvature> {
    let geometry = mesh.face_geometries();
    (0..mesh.vertex_count())
        .filter_map(|v| {
            let area = vertex_area(mesh, &geometry, v, mode);
            if area > 0.0 {
                let curvature = defect(mesh, &geometry, v) / area;
                curvature.is_finite().then_some(VertexCurvature {
                    vertex: v,
                    curvature,
                    area,
                })
            } else {
                None
            }
        })
        .collect()
}

/// Discrete Gaussian curvature `(2*pi - sum of corner angles) / area` at every
/// vertex with positive area. Vertices without area are counted in
/// `excluded`.
pub fn gaussian_curvature(
    mesh: &TriangleMesh,
    mode: AreaMode,
) -> Result<ScalarField, GeometryError> {
    let per_vertex = vertex_curvatures(mesh, mode);
    if per_vertex.is_empty() {
        return Err(GeometryError::EmptyField(FieldKind::Curvature));
    }
    Ok(ScalarField {
        kind: FieldKind::Curvature,
        excluded: mesh.vertex_count() - per_vertex.len(),
        values: per_vertex.into_iter().map(|c| c.curvature).collect(),
    })
}
