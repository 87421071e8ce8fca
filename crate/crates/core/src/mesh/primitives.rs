//! Small closed and planar meshes used by tests, benchmarks and the
//! synthetic corpus generator.

use std::collections::HashMap;

use super::vec3::{add, normalize, scale, Vec3};
use super::TriangleMesh;

/// Axis-aligned unit cube `[0,1]^3`, two outward-wound triangles per side.
pub fn unit_cube() -> TriangleMesh {
    let vertices = vec![
        [0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [1.0, 1.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [1.0, 0.0, 1.0],
        [1.0, 1.0, 1.0],
        [0.0, 1.0, 1.0],
    ];
    let faces = vec![
        [0, 3, 2],
        [0, 2, 1],
        [4, 5, 6],
        [4, 6, 7],
        [0, 1, 5],
        [0, 5, 4],
        [1, 2, 6],
        [1, 6, 5],
        [2, 3, 7],
        [2, 7, 6],
        [3, 0, 4],
        [3, 4, 7],
    ];
    TriangleMesh::new(vertices, faces).expect("cube is valid")
}

/// Regular tetrahedron with unit edge length, outward winding.
pub fn regular_tetrahedron() -> TriangleMesh {
    let h = (2.0f64 / 3.0).sqrt();
    let r = 1.0 / 3.0f64.sqrt();
    let vertices = vec![
        [r, 0.0, 0.0],
        [-0.5 * r, 0.5, 0.0],
        [-0.5 * r, -0.5, 0.0],
        [0.0, 0.0, h],
    ];
    let faces = vec![[0, 2, 1], [0, 1, 3], [1, 2, 3], [2, 0, 3]];
    TriangleMesh::new(vertices, faces).expect("tetrahedron is valid")
}

/// Unit-radius icosphere: an icosahedron subdivided `level` times with every
/// new vertex projected back onto the sphere. Level `k` has
/// `10 * 4^k + 2` vertices and `20 * 4^k` faces.
pub fn icosphere(level: u32) -> TriangleMesh {
    let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
    let mut vertices: Vec<Vec3> = [
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ]
    .into_iter()
    .map(normalize)
    .collect();
    let mut faces: Vec<[u32; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];

    for _ in 0..level {
        let mut midpoints: HashMap<(u32, u32), u32> = HashMap::new();
        let mut midpoint = |a: u32, b: u32, vertices: &mut Vec<Vec3>| -> u32 {
            let key = (a.min(b), a.max(b));
            *midpoints.entry(key).or_insert_with(|| {
                let m = scale(add(vertices[a as usize], vertices[b as usize]), 0.5);
                vertices.push(normalize(m));
                (vertices.len() - 1) as u32
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for &[a, b, c] in &faces {
            let ab = midpoint(a, b, &mut vertices);
            let bc = midpoint(b, c, &mut vertices);
            let ca = midpoint(c, a, &mut vertices);
            next.extend_from_slice(&[[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    TriangleMesh::new(vertices, faces).expect("icosphere is valid")
}

/// Planar patch of equilateral triangles with side `side` in the `z = 0`
/// plane: `rows x cols` grid points on a sheared lattice. Interior vertices
/// have exactly six incident faces.
pub fn equilateral_grid(rows: usize, cols: usize, side: f64) -> TriangleMesh {
    let h = side * 3.0f64.sqrt() / 2.0;
    let mut vertices = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            vertices.push([side * (c as f64 + 0.5 * r as f64), h * r as f64, 0.0]);
        }
    }
    let id = |r: usize, c: usize| (r * cols + c) as u32;
    let mut faces = Vec::new();
    for r in 0..rows - 1 {
        for c in 0..cols - 1 {
            faces.push([id(r, c), id(r, c + 1), id(r + 1, c)]);
            faces.push([id(r, c + 1), id(r + 1, c + 1), id(r + 1, c)]);
        }
    }
    TriangleMesh::new(vertices, faces).expect("grid is valid")
}
