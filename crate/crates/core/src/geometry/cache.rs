//! Line-based on-disk cache of a [`QuadCatalog`].
//!
//! ```text
//! flipcenter-quads 1
//! hash <sha256 of the coordinates, hex>
//! count <number of quads>
//! c 0 1 2 3      # convex, boundary order
//! n 3 0 4 1      # non-convex, (v0, v2) is the diagonal
//! ```

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use sha2::{Digest, Sha256};

use super::{enumerate_quads, Grid, PointSet, Quad, QuadCatalog};

pub const CACHE_VERSION: u32 = 1;
const MAGIC: &str = "flipcenter-quads";

/// Content hash of the point coordinates, in order.
pub fn catalog_hash(ps: &PointSet) -> String {
    let mut h = Sha256::new();
    for p in ps.points() {
        h.update(p.x.to_le_bytes());
        h.update(p.y.to_le_bytes());
    }
    h.finalize().iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

pub fn save_catalog(path: &Path, ps: &PointSet, cat: &QuadCatalog) -> io::Result<()> {
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC} {CACHE_VERSION}");
    let _ = writeln!(out, "hash {}", catalog_hash(ps));
    let _ = writeln!(out, "count {}", cat.len());
    for q in cat.quads() {
        let v = q.verts;
        let _ = writeln!(out, "{} {} {} {} {}", if q.convex { 'c' } else { 'n' }, v[0], v[1], v[2], v[3]);
    }
    std::fs::write(path, out)
}

/// Reads a cached catalog. Returns `Ok(None)` when the file is missing,
/// malformed, of another version, or was built for different points.
pub fn load_catalog(path: &Path, ps: &PointSet) -> io::Result<Option<QuadCatalog>> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e),
    };
    Ok(parse(&text, ps))
}

fn parse(text: &str, ps: &PointSet) -> Option<QuadCatalog> {
    let mut lines = text.lines();
    let header = lines.next()?;
    if header != format!("{MAGIC} {CACHE_VERSION}") {
        return None;
    }
    let hash = lines.next()?.strip_prefix("hash ")?;
    if hash != catalog_hash(ps) {
        return None;
    }
    let count: usize = lines.next()?.strip_prefix("count ")?.parse().ok()?;
    let n = ps.len() as u32;
    let mut quads = Vec::with_capacity(count);
    for line in lines {
        let mut it = line.split_ascii_whitespace();
        let convex = match it.next()? {
            "c" => true,
            "n" => false,
            _ => return None,
        };
        let mut verts = [0u32; 4];
        for v in verts.iter_mut() {
            *v = it.next()?.parse().ok()?;
            if *v >= n {
                return None;
            }
        }
        quads.push(Quad { verts, convex });
    }
    (quads.len() == count).then(|| QuadCatalog::from_quads(quads))
}

/// Loads the catalog from `path` if it is current, otherwise enumerates it
/// and rewrites the file.
pub fn load_or_build_catalog(path: &Path, ps: &PointSet) -> io::Result<QuadCatalog> {
    if let Some(cat) = load_catalog(path, ps)? {
        return Ok(cat);
    }
    let cat = enumerate_quads(ps, &Grid::build(ps));
    save_catalog(path, ps, &cat)?;
    Ok(cat)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_stale_rejection() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("quads.txt");
        let ps = PointSet::from_coords(&[(0, 0), (5, 0), (5, 5), (0, 5), (2, 1)]).unwrap();
        let built = load_or_build_catalog(&path, &ps).unwrap();
        assert!(!built.is_empty());
        assert_eq!(load_catalog(&path, &ps).unwrap(), Some(built.clone()));

        let moved = PointSet::from_coords(&[(0, 0), (5, 0), (5, 5), (0, 5), (3, 1)]).unwrap();
        assert_eq!(load_catalog(&path, &moved).unwrap(), None);
        let rebuilt = load_or_build_catalog(&path, &moved).unwrap();
        assert_eq!(rebuilt, enumerate_quads(&moved, &Grid::build(&moved)));
        assert_eq!(load_catalog(&path, &moved).unwrap(), Some(rebuilt));
    }

    #[test]
    fn missing_and_corrupt_files() {
        let dir = tempfile::tempdir().unwrap();
        let ps = PointSet::from_coords(&[(0, 0), (1, 0), (0, 1)]).unwrap();
        assert_eq!(load_catalog(&dir.path().join("nope"), &ps).unwrap(), None);
        let path = dir.path().join("bad");
        std::fs::write(&path, format!("{MAGIC} {CACHE_VERSION}\nhash {}\ncount 1\nc 0 1 9 2\n", catalog_hash(&ps)))
            .unwrap();
        assert_eq!(load_catalog(&path, &ps).unwrap(), None);
    }
}
