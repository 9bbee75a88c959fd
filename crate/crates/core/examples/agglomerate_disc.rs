//! Greedy agglomeration of a triangulated disc into polygons.

use std::collections::BTreeMap;

use prion_dg::mesh::{agglomerate, triangulated_disc, RegionRule};

fn main() -> prion_dg::Result<()> {
    let tri = triangulated_disc(6, 1.0, [0.0, 0.0], &RegionRule::AllGrey)?;
    println!("input: {} triangles", tri.num_elements());
    for target in [tri.num_elements(), 60, 20, 5] {
        let poly = agglomerate(&tri, target, 7)?;
        let mut sides: BTreeMap<usize, usize> = BTreeMap::new();
        for e in poly.elements() {
            *sides.entry(e.len()).or_default() += 1;
        }
        println!(
            "target {target:3}: {:3} polygons, area {:.12}, vertex counts {:?}",
            poly.num_elements(),
            poly.total_area(),
            sides
        );
        assert_eq!(poly, agglomerate(&tri, target, 7)?);
    }
    Ok(())
}
