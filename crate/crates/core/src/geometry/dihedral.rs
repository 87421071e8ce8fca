use crate::mesh::vec3::dot;
use crate::mesh::TriangleMesh;

use super::{FieldKind, GeometryError, ScalarField};

/// Angle between the normals of the two faces sharing each edge, in `[0, pi]`.
///
/// Only edges with exactly two non-degenerate incident faces take part;
/// boundary, non-manifold and degenerate-adjacent edges are counted in
/// `excluded`. Reversing every face winding flips both normals and leaves the
/// angle unchanged.
pub fn dihedral_angles(mesh: &TriangleMesh) -> Result<ScalarField, GeometryError> {
    let geometry = mesh.face_geometries();
    let mut values = Vec::with_capacity(mesh.edge_count());
    let mut excluded = 0;
    for e in 0..mesh.edge_count() {
        let &[f1, f2] = mesh.edge_faces(e) else {
            excluded += 1;
            continue;
        };
        let (g1, g2) = (&geometry[f1 as usize], &geometry[f2 as usize]);
        if g1.degenerate || g2.degenerate {
            excluded += 1;
            continue;
        }
        let cos = dot(g1.normal, g2.normal).clamp(-1.0, 1.0);
        values.push(cos.acos());
    }
    if values.is_empty() {
        return Err(GeometryError::EmptyField(FieldKind::Dihedral));
    }
    Ok(ScalarField {
        kind: FieldKind::Dihedral,
        values,
        excluded,
    })
}
