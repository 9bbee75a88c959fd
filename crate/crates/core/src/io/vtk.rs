//! Legacy ASCII VTK unstructured grids with one `VTK_POLYGON` cell per
//! element.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::mesh::PolyMesh;

pub const VTK_POLYGON: u8 = 7;

/// A discontinuous field sampled at each element's own vertices.
pub struct VertexField<'a> {
    pub name: &'a str,
    /// `values[k][i]` at vertex `i` of element `k`, in element order.
    pub values: &'a [Vec<f64>],
}

pub struct CellField<'a> {
    pub name: &'a str,
    pub values: &'a [f64],
}

/// Renders the mesh with cell data, plus point data when vertex fields are
/// given. With vertex fields every element gets its own copy of its
/// vertices so that jumps between elements survive.
pub fn vtk_string(mesh: &PolyMesh, title: &str, cells: &[CellField], vertex: &[VertexField]) -> Result<String> {
    let ne = mesh.num_elements();
    for f in cells {
        if f.values.len() != ne {
            return Err(Error::DimensionMismatch {
                expected: ne,
                got: f.values.len(),
            });
        }
    }
    for f in vertex {
        let ok = f.values.len() == ne && f.values.iter().zip(mesh.elements()).all(|(v, e)| v.len() == e.len());
        if !ok {
            return Err(Error::invalid(format!("vertex field '{}' does not match the mesh", f.name)));
        }
    }
    let exploded = !vertex.is_empty();
    let mut s = String::new();
    let title = title.replace('\n', " ");
    let _ = write!(s, "# vtk DataFile Version 3.0\n{title}\nASCII\nDATASET UNSTRUCTURED_GRID\n");

    let corners: usize = mesh.elements().iter().map(Vec::len).sum();
    if exploded {
        let _ = writeln!(s, "POINTS {corners} double");
        for k in 0..ne {
            for p in mesh.element_points(k) {
                let _ = writeln!(s, "{:?} {:?} 0", p[0], p[1]);
            }
        }
    } else {
        let _ = writeln!(s, "POINTS {} double", mesh.vertices().len());
        for p in mesh.vertices() {
            let _ = writeln!(s, "{:?} {:?} 0", p[0], p[1]);
        }
    }

    let _ = writeln!(s, "CELLS {ne} {}", ne + corners);
    let mut next = 0usize;
    for e in mesh.elements() {
        let _ = write!(s, "{}", e.len());
        for &v in e {
            let id = if exploded {
                next += 1;
                next - 1
            } else {
                v
            };
            let _ = write!(s, " {id}");
        }
        s.push('\n');
    }
    let _ = writeln!(s, "CELL_TYPES {ne}");
    for _ in 0..ne {
        let _ = writeln!(s, "{VTK_POLYGON}");
    }

    let _ = writeln!(s, "CELL_DATA {ne}");
    let _ = writeln!(s, "SCALARS region int 1\nLOOKUP_TABLE default");
    for r in mesh.regions() {
        let _ = writeln!(s, "{}", r.code());
    }
    let _ = writeln!(s, "VECTORS axonal double");
    for a in mesh.axonal() {
        let _ = writeln!(s, "{:?} {:?} 0", a[0], a[1]);
    }
    for f in cells {
        let _ = writeln!(s, "SCALARS {} double 1\nLOOKUP_TABLE default", f.name);
        for v in f.values {
            let _ = writeln!(s, "{v:?}");
        }
    }
    if exploded {
        let _ = writeln!(s, "POINT_DATA {corners}");
        for f in vertex {
            let _ = writeln!(s, "SCALARS {} double 1\nLOOKUP_TABLE default", f.name);
            for v in f.values.iter().flatten() {
                let _ = writeln!(s, "{v:?}");
            }
        }
    }
    Ok(s)
}

pub fn write_vtk(path: &Path, mesh: &PolyMesh, title: &str, cells: &[CellField], vertex: &[VertexField]) -> Result<()> {
    let s = vtk_string(mesh, title, cells, vertex)?;
    std::fs::write(path, s).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_structured, RegionRule};

    #[test]
    fn polygon_cells_and_counts() {
        let m = generate_structured(2, 1, 2.0, 1.0, &RegionRule::AllGrey).unwrap();
        let s = vtk_string(&m, "t", &[CellField { name: "u", values: &[1.0, 2.0] }], &[]).unwrap();
        assert!(s.contains("POINTS 6 double"));
        assert!(s.contains("CELLS 2 10"));
        assert_eq!(s.lines().filter(|l| *l == "7").count(), 2);
        assert!(s.contains("SCALARS u double 1"));

        let vals = vec![vec![0.0; 4], vec![1.0; 4]];
        let s = vtk_string(&m, "t", &[], &[VertexField { name: "u", values: &vals }]).unwrap();
        assert!(s.contains("POINTS 8 double"));
        assert!(s.contains("POINT_DATA 8"));
    }
}
