//! Synthetic meshes: quads, triangulated rectangle and disc, written in the
//! plain-text mesh format and as VTK.

use prion_dg::io::vtk::{write_vtk, CellField};
use prion_dg::mesh::{
    generate_structured, load_mesh, save_mesh, triangulated_disc, triangulated_rectangle, PolyMesh, RegionRule,
};

fn describe(name: &str, m: &PolyMesh) {
    let interior = m.interior_faces().count();
    let h = (0..m.num_elements()).map(|k| m.diameter(k)).fold(0.0, f64::max);
    println!(
        "{name:12} {:4} elements {:4} interior faces {:4} boundary faces  area {:.6}  h {:.4}  chi {}",
        m.num_elements(),
        interior,
        m.faces().len() - interior,
        m.total_area(),
        h,
        m.euler_characteristic()
    );
}

fn main() -> prion_dg::Result<()> {
    let two_region = RegionRule::WhiteBelow {
        white_below: 0.5,
        axonal: [1.0, 1.0],
    };
    let quads = generate_structured(10, 10, 1.0, 1.0, &two_region)?;
    let tris = triangulated_rectangle(10, 10, 1.0, 1.0, &RegionRule::AllGrey)?;
    let disc = triangulated_disc(6, 1.0, [0.0, 0.0], &RegionRule::AllGrey)?;
    describe("quads", &quads);
    describe("triangles", &tris);
    describe("disc", &disc);

    let dir = std::env::temp_dir().join("prion-dg-meshes");
    std::fs::create_dir_all(&dir).map_err(|e| prion_dg::Error::Io {
        path: dir.clone(),
        source: e,
    })?;
    let path = dir.join("quads.txt");
    save_mesh(&quads, &path)?;
    assert_eq!(load_mesh(&path)?, quads);
    let areas: Vec<f64> = (0..quads.num_elements()).map(|k| quads.area(k)).collect();
    write_vtk(&dir.join("quads.vtk"), &quads, "quads", &[CellField { name: "area", values: &areas }], &[])?;
    println!("wrote {}", dir.display());
    Ok(())
}
