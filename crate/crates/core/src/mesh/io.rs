//! Plain-text mesh format:
//!
//! ```text
//! #vertices
//! x y
//! #elements
//! k v1 ... vk region ax ay
//! ```
//!
//! `region` is 0 (grey) or 1 (white). Blank lines are ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::geometry::Point;
use super::{check_axonal, PolyMesh, Region};
use crate::error::{Error, Result};

#[derive(PartialEq)]
enum Section {
    None,
    Vertices,
    Elements,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::MeshParse { line, msg: msg.into() }
}

fn parse_f64(tok: &str, line: usize) -> Result<f64> {
    tok.parse::<f64>()
        .map_err(|_| parse_err(line, format!("invalid number '{tok}'")))
        .and_then(|v| if v.is_finite() { Ok(v) } else { Err(parse_err(line, "non-finite number")) })
}

pub fn parse_mesh(text: &str) -> Result<PolyMesh> {
    let mut section = Section::None;
    let mut vertices: Vec<Point> = Vec::new();
    let mut elements = Vec::new();
    let mut regions = Vec::new();
    let mut axonal = Vec::new();
    let mut element_lines = Vec::new();
    let mut seen_vertices = false;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('#') {
            section = match header.trim() {
                "vertices" if !seen_vertices => {
                    seen_vertices = true;
                    Section::Vertices
                }
                "elements" if seen_vertices => Section::Elements,
                other => return Err(parse_err(line_no, format!("malformed section header '#{other}'"))),
            };
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match section {
            Section::None => return Err(parse_err(line_no, "data before the first section header")),
            Section::Vertices => {
                if toks.len() != 2 {
                    return Err(parse_err(line_no, format!("expected 'x y', found {} fields", toks.len())));
                }
                vertices.push([parse_f64(toks[0], line_no)?, parse_f64(toks[1], line_no)?]);
            }
            Section::Elements => {
                let k: usize = toks[0]
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("invalid vertex count '{}'", toks[0])))?;
                if k < 3 {
                    return Err(parse_err(line_no, format!("polygon needs at least 3 vertices, got {k}")));
                }
                if toks.len() != k + 4 {
                    return Err(parse_err(
                        line_no,
                        format!("expected {} fields for a {k}-gon, found {}", k + 4, toks.len()),
                    ));
                }
                let mut poly = Vec::with_capacity(k);
                for t in &toks[1..=k] {
                    let v: usize = t.parse().map_err(|_| parse_err(line_no, format!("invalid vertex index '{t}'")))?;
                    if v >= vertices.len() {
                        return Err(parse_err(
                            line_no,
                            format!("vertex index out of range ({v} >= {})", vertices.len()),
                        ));
                    }
                    poly.push(v);
                }
                let region = toks[k + 1]
                    .parse::<u8>()
                    .ok()
                    .and_then(Region::from_code)
                    .ok_or_else(|| parse_err(line_no, format!("region must be 0 or 1, got '{}'", toks[k + 1])))?;
                let ax = [parse_f64(toks[k + 2], line_no)?, parse_f64(toks[k + 3], line_no)?];
                check_axonal(elements.len(), region, ax).map_err(|e| parse_err(line_no, e.to_string()))?;
                elements.push(poly);
                regions.push(region);
                axonal.push(ax);
                element_lines.push(line_no);
            }
        }
    }
    if section != Section::Elements {
        return Err(parse_err(text.lines().count().max(1), "missing #elements section"));
    }
    PolyMesh::new(vertices, elements, regions, axonal).map_err(|e| match e {
        // point geometric failures back at the offending element line
        Error::Mesh(msg) => {
            let line = msg
                .strip_prefix("element ")
                .and_then(|r| r.split(|c: char| !c.is_ascii_digit()).next())
                .and_then(|d| d.parse::<usize>().ok())
                .and_then(|k| element_lines.get(k).copied())
                .unwrap_or(0);
            parse_err(line, msg)
        }
        other => other,
    })
}

pub fn load_mesh(path: impl AsRef<Path>) -> Result<PolyMesh> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_mesh(&text)
}

/// Serializes with shortest round-trip float formatting.
pub fn write_mesh(mesh: &PolyMesh) -> String {
    let mut s = String::from("#vertices\n");
    for v in mesh.vertices() {
        let _ = writeln!(s, "{:?} {:?}", v[0], v[1]);
    }
    s.push_str("#elements\n");
    for (k, e) in mesh.elements().iter().enumerate() {
        let _ = write!(s, "{}", e.len());
        for v in e {
            let _ = write!(s, " {v}");
        }
        let a = mesh.axonal()[k];
        let _ = writeln!(s, " {} {:?} {:?}", mesh.region(k).code(), a[0], a[1]);
    }
    s
}

pub fn save_mesh(mesh: &PolyMesh, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, write_mesh(mesh)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_structured, RegionRule};

    #[test]
    fn round_trip_structured() {
        let rule = RegionRule::WhiteBelow {
            white_below: 0.5,
            axonal: [1.0, 3.0],
        };
        let m = generate_structured(2, 2, 1.0, 1.0, &rule).unwrap();
        let back = parse_mesh(&write_mesh(&m)).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn index_out_of_range_names_line() {
        let text = "#vertices\n0 0\n1 0\n1 1\n#elements\n3 0 1 7 0 0 0\n";
        match parse_mesh(text) {
            Err(Error::MeshParse { line, msg }) => {
                assert_eq!(line, 6);
                assert!(msg.contains("vertex index out of range"), "{msg}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_unit_white_axonal_rejected() {
        // ‖(0.6, 0.9)‖ = 1.0817
        let text = "#vertices\n0 0\n1 0\n1 1\n0 1\n#elements\n4 0 1 2 3 1 0.6 0.9\n";
        match parse_mesh(text) {
            Err(Error::MeshParse { line, msg }) => {
                assert_eq!(line, 7);
                assert!(msg.contains("1.0817"), "{msg}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_header_and_clockwise_normalized() {
        assert!(matches!(
            parse_mesh("#verts\n0 0\n"),
            Err(Error::MeshParse { line: 1, .. })
        ));
        let cw = "#vertices\n0 0\n1 0\n1 1\n0 1\n#elements\n4 0 3 2 1 0 0 0\n";
        let m = parse_mesh(cw).unwrap();
        assert_eq!(m.reoriented_count(), 1);
    }

    #[test]
    fn self_intersecting_polygon_reports_line() {
        let text = "#vertices\n0 0\n1 1\n1 0\n0 1\n#elements\n\n4 0 1 2 3 0 0 0\n";
        match parse_mesh(text) {
            Err(Error::MeshParse { line, .. }) => assert_eq!(line, 8),
            other => panic!("unexpected {other:?}"),
        }
    }
}
