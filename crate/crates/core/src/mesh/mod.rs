//! Indexed triangle meshes with the adjacency needed by the geometry features.

mod error;
pub mod io;
pub mod primitives;
pub(crate) mod vec3;

use std::collections::HashMap;

pub use error::MeshError;
pub use io::{parse_mesh, parse_obj_str, parse_ply_str, write_obj, MeshFormat};

use vec3::{cross, norm, scale, sub, Vec3};

/// Faces whose area falls below this fraction of the squared bounding-box
/// diagonal are treated as degenerate.
pub const DEGENERATE_AREA_RATIO: f64 = 1e-12;

/// Unordered vertex pair, stored with the smaller index first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge(pub u32, pub u32);

impl Edge {
    pub fn new(a: u32, b: u32) -> Self {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }
}

/// A triangle mesh `(vertices, edges, faces)` with edge-face and vertex-face
/// incidence. Immutable once built.
#[derive(Debug, Clone)]
pub struct TriangleMesh {
    vertices: Vec<Vec3>,
    faces: Vec<[u32; 3]>,
    edges: Vec<Edge>,
    edge_faces: Vec<Vec<u32>>,
    vertex_faces: Vec<Vec<u32>>,
    bbox_diagonal: f64,
}

/// Normal and area of one face.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceGeometry {
    /// Unit normal, or the zero vector for a degenerate face.
    pub normal: Vec3,
    pub area: f64,
    pub degenerate: bool,
}

impl TriangleMesh {
    /// Builds a mesh and its adjacency from raw positions and triangles.
    ///
    /// Edges are numbered in order of first appearance when scanning faces,
    /// so the edge order is a pure function of the face list.
    pub fn new(vertices: Vec<Vec3>, faces: Vec<[u32; 3]>) -> Result<Self, MeshError> {
        if faces.is_empty() {
            return Err(MeshError::EmptyMesh);
        }
        if vertices.len() < 3 {
            return Err(MeshError::TooFewVertices(vertices.len()));
        }
        let n = vertices.len();
        for (fi, f) in faces.iter().enumerate() {
            if let Some(&bad) = f.iter().find(|&&v| v as usize >= n) {
                return Err(MeshError::IndexOutOfRange {
                    face: fi,
                    index: bad as usize,
                    vertex_count: n,
                });
            }
        }

        let mut edge_index: HashMap<Edge, u32> = HashMap::with_capacity(faces.len() * 3 / 2);
        let mut edges = Vec::with_capacity(faces.len() * 3 / 2);
        let mut edge_faces: Vec<Vec<u32>> = Vec::with_capacity(faces.len() * 3 / 2);
        let mut vertex_faces = vec![Vec::new(); n];

        for (fi, f) in faces.iter().enumerate() {
            let fi = fi as u32;
            for k in 0..3 {
                let v = f[k];
                if !vertex_faces[v as usize].contains(&fi) {
                    vertex_faces[v as usize].push(fi);
                }
                let (a, b) = (f[k], f[(k + 1) % 3]);
                if a == b {
                    continue;
                }
                let e = Edge::new(a, b);
                let id = *edge_index.entry(e).or_insert_with(|| {
                    edges.push(e);
                    edge_faces.push(Vec::new());
                    (edges.len() - 1) as u32
                });
                let incident = &mut edge_faces[id as usize];
                if incident.last() != Some(&fi) {
                    incident.push(fi);
                }
            }
        }

        let bbox_diagonal = bounding_box_diagonal(&vertices);
        Ok(TriangleMesh {
            vertices,
            faces,
            edges,
            edge_faces,
            vertex_faces,
            bbox_diagonal,
        })
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[u32; 3]] {
        &self.faces
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Faces incident to edge `e` (by edge index).
    pub fn edge_faces(&self, e: usize) -> &[u32] {
        &self.edge_faces[e]
    }

    /// Faces incident to vertex `v`.
    pub fn vertex_faces(&self, v: usize) -> &[u32] {
        &self.vertex_faces[v]
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn bbox_diagonal(&self) -> f64 {
        self.bbox_diagonal
    }

    /// `|V| - |E| + |F|`.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Corner positions of face `f` in stored winding order.
    pub fn face_positions(&self, f: usize) -> [Vec3; 3] {
        let [a, b, c] = self.faces[f];
        [
            self.vertices[a as usize],
            self.vertices[b as usize],
            self.vertices[c as usize],
        ]
    }

    /// Normal and area of face `f`.
    ///
    /// The normal is `(p1 - p0) x (p2 - p0)` normalized, so it follows the
    /// stored winding. Faces with area below
    /// [`DEGENERATE_AREA_RATIO`] times the squared bounding-box diagonal are
    /// flagged degenerate.
    pub fn face_geometry(&self, f: usize) -> Result<FaceGeometry, MeshError> {
        if f >= self.faces.len() {
            return Err(MeshError::FaceOutOfRange {
                face: f,
                face_count: self.faces.len(),
            });
        }
        Ok(self.face_geometry_unchecked(f))
    }

    pub(crate) fn face_geometry_unchecked(&self, f: usize) -> FaceGeometry {
        let [p0, p1, p2] = self.face_positions(f);
        let c = cross(sub(p1, p0), sub(p2, p0));
        let len = norm(c);
        let area = 0.5 * len;
        let threshold = DEGENERATE_AREA_RATIO * self.bbox_diagonal * self.bbox_diagonal;
        if area < threshold || len == 0.0 {
            FaceGeometry {
                normal: [0.0; 3],
                area,
                degenerate: true,
            }
        } else {
            FaceGeometry {
                normal: scale(c, 1.0 / len),
                area,
                degenerate: false,
            }
        }
    }

    /// Geometry of every face, indexed by face.
    pub fn face_geometries(&self) -> Vec<FaceGeometry> {
        (0..self.faces.len())
            .map(|f| self.face_geometry_unchecked(f))
            .collect()
    }

    /// Returns a copy with every vertex mapped through `f`; topology is kept.
    pub fn map_vertices(&self, f: impl Fn(Vec3) -> Vec3) -> TriangleMesh {
        let vertices: Vec<Vec3> = self.vertices.iter().map(|&p| f(p)).collect();
        let bbox_diagonal = bounding_box_diagonal(&vertices);
        TriangleMesh {
            vertices,
            bbox_diagonal,
            ..self.clone()
        }
    }

    /// Returns a copy with every face winding reversed.
    pub fn flipped(&self) -> TriangleMesh {
        let faces = self.faces.iter().map(|&[a, b, c]| [a, c, b]).collect();
        TriangleMesh::new(self.vertices.clone(), faces).expect("flipping keeps a valid mesh")
    }
}

fn bounding_box_diagonal(vertices: &[Vec3]) -> f64 {
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in vertices {
        for k in 0..3 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    if vertices.is_empty() {
        return 0.0;
    }
    norm(sub(hi, lo))
}
