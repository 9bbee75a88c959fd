//! Greedy graph-growing agglomeration of a conforming triangle mesh into
//! polygonal elements.
//!
//! Seeds are placed by farthest-point sampling on the triangle adjacency
//! graph (the first one drawn from the seed RNG), then parts grow round-robin,
//! one triangle per part per round. A triangle is only absorbed if the part
//! stays a topological disc, so every output element is a simple polygon.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::geometry::Point;
use super::{PolyMesh, Region};
use crate::error::{Error, Result};

const UNASSIGNED: usize = usize::MAX;

struct Part {
    seed_centroid: Point,
    vertices: HashSet<usize>,
    frontier: BTreeSet<usize>,
    active: bool,
}

struct Triangles<'a> {
    mesh: &'a PolyMesh,
    /// neighbour across local edge i (between local vertices i and i+1)
    across: Vec<[Option<usize>; 3]>,
    centroids: Vec<Point>,
}

impl<'a> Triangles<'a> {
    fn new(mesh: &'a PolyMesh) -> Result<Self> {
        let n = mesh.num_elements();
        if let Some(k) = (0..n).find(|&k| mesh.element(k).len() != 3) {
            return Err(Error::invalid(format!(
                "agglomeration needs a triangle mesh; element {k} has {} vertices",
                mesh.element(k).len()
            )));
        }
        let mut across = vec![[None; 3]; n];
        let mut edge_owner: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
        for k in 0..n {
            let e = mesh.element(k);
            for i in 0..3 {
                let (a, b) = (e[i], e[(i + 1) % 3]);
                let key = (a.min(b), a.max(b));
                if let Some(&(other, li)) = edge_owner.get(&key) {
                    across[k][i] = Some(other);
                    across[other][li] = Some(k);
                } else {
                    edge_owner.insert(key, (k, i));
                }
            }
        }
        let centroids = (0..n).map(|k| mesh.centroid(k)).collect();
        Ok(Self { mesh, across, centroids })
    }

    fn len(&self) -> usize {
        self.across.len()
    }

    fn neighbours(&self, t: usize) -> impl Iterator<Item = usize> + '_ {
        self.across[t].iter().flatten().copied()
    }

    /// Whether adding `t` keeps `part` (given by `owner`) a topological disc.
    fn can_absorb(&self, t: usize, p: usize, owner: &[usize], part: &Part) -> bool {
        let shared: Vec<usize> = (0..3).filter(|&i| self.across[t][i].is_some_and(|n| owner[n] == p)).collect();
        match shared.len() {
            0 => false,
            1 => {
                let opposite = self.mesh.element(t)[(shared[0] + 2) % 3];
                !part.vertices.contains(&opposite)
            }
            _ => true,
        }
    }
}

fn check_connected(tris: &Triangles) -> Result<()> {
    let n = tris.len();
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(t) = queue.pop_front() {
        for nb in tris.neighbours(t) {
            if !seen[nb] {
                seen[nb] = true;
                queue.push_back(nb);
            }
        }
    }
    if let Some(first) = seen.iter().position(|&s| !s) {
        // size of the unreachable component containing `first`
        let mut size = 0;
        let mut comp = vec![false; n];
        let mut queue = VecDeque::from([first]);
        comp[first] = true;
        while let Some(t) = queue.pop_front() {
            size += 1;
            for nb in tris.neighbours(t) {
                if !comp[nb] {
                    comp[nb] = true;
                    queue.push_back(nb);
                }
            }
        }
        return Err(Error::Disconnected { element: first, size });
    }
    Ok(())
}

fn farthest_point_seeds(tris: &Triangles, count: usize, seed: u64) -> Vec<usize> {
    let n = tris.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seeds = vec![rng.random_range(0..n)];
    let mut dist = vec![usize::MAX; n];
    let relax = |s: usize, dist: &mut Vec<usize>| {
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(t) = queue.pop_front() {
            for nb in tris.neighbours(t) {
                if dist[t] + 1 < dist[nb] {
                    dist[nb] = dist[t] + 1;
                    queue.push_back(nb);
                }
            }
        }
    };
    relax(seeds[0], &mut dist);
    while seeds.len() < count {
        // farthest triangle, lowest index on ties
        let mut best = 0;
        for t in 1..n {
            if dist[t] > dist[best] {
                best = t;
            }
        }
        seeds.push(best);
        relax(best, &mut dist);
    }
    seeds
}

fn new_part(tris: &Triangles, p: usize, seed_tri: usize, owner: &mut [usize]) -> Part {
    owner[seed_tri] = p;
    let mut part = Part {
        seed_centroid: tris.centroids[seed_tri],
        vertices: tris.mesh.element(seed_tri).iter().copied().collect(),
        frontier: BTreeSet::new(),
        active: true,
    };
    part.frontier.extend(tris.neighbours(seed_tri).filter(|&nb| owner[nb] == UNASSIGNED));
    part
}

/// Absorbs the best admissible frontier triangle into part `p`; returns
/// false once the part can no longer grow.
fn grow_once(tris: &Triangles, p: usize, parts: &mut [Part], owner: &mut [usize]) -> bool {
    let part = &parts[p];
    let c0 = part.seed_centroid;
    let mut best: Option<(f64, usize)> = None;
    for &t in &part.frontier {
        if owner[t] != UNASSIGNED || !tris.can_absorb(t, p, owner, part) {
            continue;
        }
        let c = tris.centroids[t];
        let d = (c[0] - c0[0]).powi(2) + (c[1] - c0[1]).powi(2);
        if best.is_none_or(|(bd, _)| d < bd) {
            best = Some((d, t));
        }
    }
    let part = &mut parts[p];
    part.frontier.retain(|&t| owner[t] == UNASSIGNED);
    let Some((_, t)) = best else {
        return false;
    };
    owner[t] = p;
    part.frontier.remove(&t);
    part.vertices.extend(tris.mesh.element(t).iter().copied());
    part.frontier.extend(tris.neighbours(t).filter(|&nb| owner[nb] == UNASSIGNED));
    true
}

/// Agglomerates a conforming CCW triangle mesh into about `target_elements`
/// polygons. Deterministic for a fixed `seed`.
pub fn agglomerate(tri: &PolyMesh, target_elements: usize, seed: u64) -> Result<PolyMesh> {
    let tris = Triangles::new(tri)?;
    let n = tris.len();
    if target_elements == 0 || target_elements > n {
        return Err(Error::invalid(format!(
            "target_elements must be in 1..={n}, got {target_elements}"
        )));
    }
    check_connected(&tris)?;

    let mut owner = vec![UNASSIGNED; n];
    let mut parts: Vec<Part> = Vec::with_capacity(target_elements);
    for (p, s) in farthest_point_seeds(&tris, target_elements, seed).into_iter().enumerate() {
        parts.push(new_part(&tris, p, s, &mut owner));
    }
    let mut active = true;
    while active {
        active = false;
        for p in 0..parts.len() {
            if parts[p].active {
                parts[p].active = grow_once(&tris, p, &mut parts, &mut owner);
                active |= parts[p].active;
            }
        }
    }
    // leftovers the disc constraint shut out become parts of their own
    while let Some(t) = owner.iter().position(|&o| o == UNASSIGNED) {
        let p = parts.len();
        parts.push(new_part(&tris, p, t, &mut owner));
        while grow_once(&tris, p, &mut parts, &mut owner) {}
    }

    build_polygons(&tris, &owner, parts.len())
}

fn build_polygons(tris: &Triangles, owner: &[usize], nparts: usize) -> Result<PolyMesh> {
    let mesh = tris.mesh;
    let mut members = vec![Vec::new(); nparts];
    for (t, &p) in owner.iter().enumerate() {
        members[p].push(t);
    }
    let mut loops = Vec::with_capacity(nparts);
    let mut regions = Vec::with_capacity(nparts);
    let mut axonal = Vec::with_capacity(nparts);
    for (p, tlist) in members.iter().enumerate() {
        // boundary edges, oriented as in the (CCW) triangles
        let mut next: HashMap<usize, usize> = HashMap::new();
        let mut start = None;
        for &t in tlist {
            let e = mesh.element(t);
            for i in 0..3 {
                if tris.across[t][i].is_some_and(|nb| owner[nb] == p) {
                    continue;
                }
                let (a, b) = (e[i], e[(i + 1) % 3]);
                if next.insert(a, b).is_some() {
                    return Err(Error::Mesh(format!("agglomerate {p} has a pinched boundary at vertex {a}")));
                }
                start.get_or_insert(a);
            }
        }
        let start = start.expect("every part has a boundary");
        let mut poly = vec![start];
        let mut v = next[&start];
        while v != start {
            poly.push(v);
            v = *next
                .get(&v)
                .ok_or_else(|| Error::Mesh(format!("agglomerate {p} has an open boundary")))?;
            if poly.len() > next.len() {
                break;
            }
        }
        if poly.len() != next.len() {
            return Err(Error::Mesh(format!("agglomerate {p} boundary is not a single loop")));
        }
        loops.push(poly);

        let (region, ax) = majority_fields(mesh, tlist);
        regions.push(region);
        axonal.push(ax);
    }

    // compact the vertex set, keeping the original relative order
    let mut used = vec![false; mesh.vertices().len()];
    for l in &loops {
        for &v in l {
            used[v] = true;
        }
    }
    let mut remap = vec![usize::MAX; used.len()];
    let mut vertices = Vec::new();
    for (v, &u) in used.iter().enumerate() {
        if u {
            remap[v] = vertices.len();
            vertices.push(mesh.vertices()[v]);
        }
    }
    let elements = loops.into_iter().map(|l| l.into_iter().map(|v| remap[v]).collect()).collect();
    PolyMesh::new(vertices, elements, regions, axonal)
}

fn majority_fields(mesh: &PolyMesh, tlist: &[usize]) -> (Region, Point) {
    let white = tlist.iter().filter(|&&t| mesh.region(t) == Region::White).count();
    if 2 * white <= tlist.len() {
        return (Region::Grey, [0.0, 0.0]);
    }
    // area-weighted mean direction, signs aligned to the first white fibre
    let mut reference: Option<Point> = None;
    let mut acc = [0.0, 0.0];
    for &t in tlist {
        if mesh.region(t) != Region::White {
            continue;
        }
        let a = mesh.axonal()[t];
        let r = *reference.get_or_insert(a);
        let s = if a[0] * r[0] + a[1] * r[1] < 0.0 { -1.0 } else { 1.0 };
        let w = mesh.area(t);
        acc[0] += s * w * a[0];
        acc[1] += s * w * a[1];
    }
    let norm = acc[0].hypot(acc[1]);
    if norm > 1e-12 {
        (Region::White, [acc[0] / norm, acc[1] / norm])
    } else {
        (Region::White, reference.unwrap())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{triangulated_disc, triangulated_rectangle, RegionRule};

    fn boundary_edge_multiset(m: &PolyMesh) -> Vec<[u64; 4]> {
        let mut v: Vec<[u64; 4]> = m
            .boundary_faces()
            .map(|f| {
                let (a, b) = (m.vertices()[f.vertices[0]], m.vertices()[f.vertices[1]]);
                let (p, q) = if (a[0], a[1]) < (b[0], b[1]) { (a, b) } else { (b, a) };
                [p[0].to_bits(), p[1].to_bits(), q[0].to_bits(), q[1].to_bits()]
            })
            .collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn identity_when_target_equals_count() {
        let tri = triangulated_rectangle(3, 3, 1.0, 1.0, &RegionRule::AllGrey).unwrap();
        let out = agglomerate(&tri, tri.num_elements(), 1).unwrap();
        assert_eq!(out.num_elements(), tri.num_elements());
        assert!(out.elements().iter().all(|e| e.len() == 3));
    }

    #[test]
    fn two_triangles_make_the_square() {
        let tri = triangulated_rectangle(1, 1, 1.0, 1.0, &RegionRule::AllGrey).unwrap();
        let out = agglomerate(&tri, 1, 0).unwrap();
        assert_eq!(out.num_elements(), 1);
        assert_eq!(out.element(0).len(), 4);
        assert!((out.area(0) - 1.0).abs() < 1e-15);
        assert_eq!(out.faces().len(), 4);
    }

    #[test]
    fn disc_partition_properties() {
        let tri = triangulated_disc(6, 1.0, [0.0, 0.0], &RegionRule::AllGrey).unwrap();
        let a = agglomerate(&tri, 20, 7).unwrap();
        let b = agglomerate(&tri, 20, 7).unwrap();
        assert_eq!(a, b);
        let n = a.num_elements() as f64;
        assert!((18.0..=22.0).contains(&n), "got {n} elements");
        assert!(((a.total_area() - tri.total_area()) / tri.total_area()).abs() < 1e-12);
        assert_eq!(boundary_edge_multiset(&a), boundary_edge_multiset(&tri));
        assert_eq!(a.euler_characteristic(), 1);
    }

    #[test]
    fn disconnected_input_is_reported() {
        let v = vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [5.0, 5.0], [6.0, 5.0], [5.0, 6.0]];
        let m = PolyMesh::new(v, vec![vec![0, 1, 2], vec![3, 4, 5]], vec![Region::Grey; 2], vec![[0.0, 0.0]; 2])
            .unwrap();
        match agglomerate(&m, 1, 0) {
            Err(Error::Disconnected { element, size }) => {
                assert_eq!(element, 1);
                assert_eq!(size, 1);
            }
            other => panic!("expected disconnected error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_non_triangles_and_bad_target() {
        let quad = crate::mesh::generate_structured(2, 2, 1.0, 1.0, &RegionRule::AllGrey).unwrap();
        assert!(agglomerate(&quad, 2, 0).is_err());
        let tri = triangulated_rectangle(1, 1, 1.0, 1.0, &RegionRule::AllGrey).unwrap();
        assert!(agglomerate(&tri, 0, 0).is_err());
        assert!(agglomerate(&tri, 3, 0).is_err());
    }
}
