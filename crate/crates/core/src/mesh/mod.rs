//! Polygonal meshes with face topology, white/grey region tags and a
//! per-element axonal direction field.

mod agglomerate;
mod generate;
pub mod geometry;
mod io;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use geometry::Point;

pub use agglomerate::agglomerate;
pub use generate::{generate_structured, triangulated_disc, triangulated_rectangle, RegionRule};
pub use io::{load_mesh, parse_mesh, save_mesh, write_mesh};

/// Tolerance on `|‖ā‖ − 1|` for axonal directions.
pub const AXONAL_UNIT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Grey,
    White,
}

impl Region {
    pub fn code(self) -> u8 {
        match self {
            Region::Grey => 0,
            Region::White => 1,
        }
    }

    pub fn from_code(c: u8) -> Option<Self> {
        match c {
            0 => Some(Region::Grey),
            1 => Some(Region::White),
            _ => None,
        }
    }
}

/// Mesh edge. `normal` points from `owner` towards `neighbor` (outward
/// from the owner on boundary faces).
#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub vertices: [usize; 2],
    pub owner: usize,
    pub neighbor: Option<usize>,
    pub normal: Point,
    pub length: f64,
}

impl Face {
    pub fn is_boundary(&self) -> bool {
        self.neighbor.is_none()
    }
}

/// Immutable polygonal mesh. Elements are counter-clockwise vertex loops.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMesh {
    vertices: Vec<Point>,
    elements: Vec<Vec<usize>>,
    regions: Vec<Region>,
    axonal: Vec<Point>,
    faces: Vec<Face>,
    areas: Vec<f64>,
    diameters: Vec<f64>,
    reoriented: usize,
}

impl PolyMesh {
    /// Validates the polygons, normalizes clockwise loops to counter-clockwise
    /// and builds the face list.
    pub fn new(
        vertices: Vec<Point>,
        mut elements: Vec<Vec<usize>>,
        regions: Vec<Region>,
        axonal: Vec<Point>,
    ) -> Result<Self> {
        let ne = elements.len();
        if ne == 0 {
            return Err(Error::Mesh("mesh has no elements".into()));
        }
        if regions.len() != ne || axonal.len() != ne {
            return Err(Error::Mesh(format!(
                "{} elements but {} region tags and {} axonal vectors",
                ne,
                regions.len(),
                axonal.len()
            )));
        }
        if let Some(i) = vertices.iter().position(|v| !v[0].is_finite() || !v[1].is_finite()) {
            return Err(Error::Mesh(format!("vertex {i} is not finite")));
        }
        let mut reoriented = 0;
        let mut areas = Vec::with_capacity(ne);
        let mut diameters = Vec::with_capacity(ne);
        for (k, poly) in elements.iter_mut().enumerate() {
            check_element(k, poly, &vertices)?;
            let pts: Vec<Point> = poly.iter().map(|&v| vertices[v]).collect();
            let mut a = geometry::signed_area(&pts);
            if a < 0.0 {
                poly.reverse();
                a = -a;
                reoriented += 1;
            }
            areas.push(a);
            diameters.push(geometry::diameter(&pts));
            check_axonal(k, regions[k], axonal[k])?;
        }
        let faces = build_faces(&vertices, &elements)?;
        Ok(Self {
            vertices,
            elements,
            regions,
            axonal,
            faces,
            areas,
            diameters,
            reoriented,
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn elements(&self) -> &[Vec<usize>] {
        &self.elements
    }

    pub fn element(&self, k: usize) -> &[usize] {
        &self.elements[k]
    }

    pub fn num_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn region(&self, k: usize) -> Region {
        self.regions[k]
    }

    pub fn axonal(&self) -> &[Point] {
        &self.axonal
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn interior_faces(&self) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(|f| f.neighbor.is_some())
    }

    pub fn boundary_faces(&self) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(|f| f.neighbor.is_none())
    }

    pub fn element_points(&self, k: usize) -> Vec<Point> {
        self.elements[k].iter().map(|&v| self.vertices[v]).collect()
    }

    pub fn area(&self, k: usize) -> f64 {
        self.areas[k]
    }

    pub fn total_area(&self) -> f64 {
        self.areas.iter().sum()
    }

    /// h_K, the largest vertex-to-vertex distance of element `k`.
    pub fn diameter(&self, k: usize) -> f64 {
        self.diameters[k]
    }

    pub fn centroid(&self, k: usize) -> Point {
        geometry::centroid(&self.element_points(k))
    }

    /// Number of clockwise input polygons that were reversed on construction.
    pub fn reoriented_count(&self) -> usize {
        self.reoriented
    }

    /// V − E + F over vertices referenced by elements.
    pub fn euler_characteristic(&self) -> i64 {
        let mut used = vec![false; self.vertices.len()];
        for e in &self.elements {
            for &v in e {
                used[v] = true;
            }
        }
        let nv = used.iter().filter(|&&u| u).count() as i64;
        nv - self.faces.len() as i64 + self.elements.len() as i64
    }

    /// Returns a copy with new region tags and axonal vectors.
    pub fn with_fields(&self, regions: Vec<Region>, axonal: Vec<Point>) -> Result<Self> {
        PolyMesh::new(self.vertices.clone(), self.elements.clone(), regions, axonal)
    }

    /// Element-to-element adjacency through interior faces, sorted per row.
    pub fn element_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.num_elements()];
        for f in self.interior_faces() {
            let n = f.neighbor.unwrap();
            adj[f.owner].push(n);
            adj[n].push(f.owner);
        }
        for row in &mut adj {
            row.sort_unstable();
            row.dedup();
        }
        adj
    }
}

fn check_element(k: usize, poly: &[usize], vertices: &[Point]) -> Result<()> {
    if poly.len() < 3 {
        return Err(Error::Mesh(format!("element {k} has {} vertices", poly.len())));
    }
    if let Some(&v) = poly.iter().find(|&&v| v >= vertices.len()) {
        return Err(Error::Mesh(format!("element {k}: vertex index out of range ({v})")));
    }
    let pts: Vec<Point> = poly.iter().map(|&v| vertices[v]).collect();
    let a = geometry::signed_area(&pts);
    let h = geometry::diameter(&pts);
    if !(a.abs() > 1e-14 * h * h) {
        return Err(Error::Mesh(format!("element {k} is degenerate (area {a:e})")));
    }
    if !geometry::is_simple(&pts) {
        return Err(Error::Mesh(format!("element {k} is not a simple polygon")));
    }
    Ok(())
}

pub(crate) fn check_axonal(k: usize, region: Region, a: Point) -> Result<()> {
    let norm = a[0].hypot(a[1]);
    let unit = (norm - 1.0).abs() <= AXONAL_UNIT_TOL;
    match region {
        Region::White if !unit => Err(Error::Mesh(format!(
            "element {k}: white-matter axonal vector ({}, {}) has norm {norm:.4}, expected 1",
            a[0], a[1]
        ))),
        Region::Grey if !(unit || norm == 0.0) => Err(Error::Mesh(format!(
            "element {k}: grey-matter axonal vector ({}, {}) has norm {norm:.4}, expected 0 or 1",
            a[0], a[1]
        ))),
        _ => Ok(()),
    }
}

fn build_faces(vertices: &[Point], elements: &[Vec<usize>]) -> Result<Vec<Face>> {
    // edge key -> face slot, in order of first appearance
    let mut slot: HashMap<(usize, usize), usize> = HashMap::new();
    let mut faces: Vec<Face> = Vec::new();
    for (k, poly) in elements.iter().enumerate() {
        let n = poly.len();
        for i in 0..n {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            let key = (a.min(b), a.max(b));
            match slot.get(&key) {
                None => {
                    let (pa, pb) = (vertices[a], vertices[b]);
                    let len = geometry::dist(pa, pb);
                    let normal = [(pb[1] - pa[1]) / len, -(pb[0] - pa[0]) / len];
                    slot.insert(key, faces.len());
                    faces.push(Face {
                        vertices: [a, b],
                        owner: k,
                        neighbor: None,
                        normal,
                        length: len,
                    });
                }
                Some(&s) => {
                    let f = &mut faces[s];
                    if f.neighbor.is_some() {
                        return Err(Error::Mesh(format!("edge ({a}, {b}) is shared by more than two elements")));
                    }
                    if f.owner == k {
                        return Err(Error::Mesh(format!("element {k} repeats edge ({a}, {b})")));
                    }
                    if f.vertices != [b, a] {
                        return Err(Error::Mesh(format!(
                            "edge ({a}, {b}) has the same orientation in elements {} and {k}",
                            f.owner
                        )));
                    }
                    f.neighbor = Some(k);
                }
            }
        }
    }
    Ok(faces)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_squares() -> PolyMesh {
        let v = vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [0.0, 1.0], [1.0, 1.0], [2.0, 1.0]];
        let e = vec![vec![0, 1, 4, 3], vec![1, 2, 5, 4]];
        PolyMesh::new(v, e, vec![Region::Grey; 2], vec![[0.0, 0.0]; 2]).unwrap()
    }

    #[test]
    fn faces_and_normals() {
        let m = two_squares();
        assert_eq!(m.faces().len(), 7);
        let interior: Vec<_> = m.interior_faces().collect();
        assert_eq!(interior.len(), 1);
        assert_eq!(interior[0].normal, [1.0, 0.0]);
        assert_eq!(interior[0].owner, 0);
        assert_eq!(interior[0].neighbor, Some(1));
        assert_eq!(m.euler_characteristic(), 1);
    }

    #[test]
    fn clockwise_polygons_are_reoriented() {
        let v = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let m = PolyMesh::new(v, vec![vec![0, 3, 2, 1]], vec![Region::Grey], vec![[0.0, 0.0]]).unwrap();
        assert_eq!(m.reoriented_count(), 1);
        assert_eq!(m.area(0), 1.0);
    }

    #[test]
    fn rejects_bad_axonal_and_degenerate() {
        let v = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let err = PolyMesh::new(v.clone(), vec![vec![0, 1, 2, 3]], vec![Region::White], vec![[0.6, 0.9]]);
        assert!(err.is_err());
        let err = PolyMesh::new(v.clone(), vec![vec![0, 1, 2, 3]], vec![Region::White], vec![[0.0, 0.0]]);
        assert!(err.is_err());
        let flat = vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]];
        assert!(PolyMesh::new(flat, vec![vec![0, 1, 2]], vec![Region::Grey], vec![[0.0, 0.0]]).is_err());
    }

    #[test]
    fn non_manifold_edge_rejected() {
        let v = vec![[0.0, 0.0], [1.0, 0.0], [0.5, 1.0], [0.5, -1.0], [0.5, 0.5]];
        let e = vec![vec![0, 1, 2], vec![1, 0, 3], vec![0, 1, 4]];
        assert!(PolyMesh::new(v, e, vec![Region::Grey; 3], vec![[0.0, 0.0]; 3]).is_err());
    }
}
