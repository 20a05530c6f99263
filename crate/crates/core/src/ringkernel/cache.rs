//! On-disk cache of ideal Gröbner bases, keyed by a content hash of the ring
//! and the generators. Files hold one polynomial per line in the textual syntax.

use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use super::poly::Poly;
use super::ring::PolyRing;

pub(crate) fn key(ring: &PolyRing, gens: &[Poly]) -> String {
    let mut h = Sha256::new();
    h.update(ring.to_string().as_bytes());
    for g in gens {
        h.update(b"\n");
        h.update(ring.fmt_poly(g).as_bytes());
    }
    hex::encode(h.finalize())
}

pub(crate) fn load(dir: &Path, key: &str, ring: &PolyRing) -> Option<Vec<Poly>> {
    let text = fs::read_to_string(dir.join(format!("{key}.gb"))).ok()?;
    let ambient = ring.ambient();
    text.lines().filter(|l| !l.trim().is_empty()).map(|l| ambient.parse(l).ok()).collect()
}

/// Best effort: a failed write only costs a recomputation later.
pub(crate) fn store(dir: &Path, key: &str, ring: &PolyRing, basis: &[Poly]) {
    if fs::create_dir_all(dir).is_err() {
        return;
    }
    let mut text = String::new();
    for p in basis {
        text.push_str(&ring.fmt_poly(p));
        text.push('\n');
    }
    let tmp = dir.join(format!("{key}.tmp"));
    if fs::write(&tmp, text).is_ok() {
        let _ = fs::rename(&tmp, dir.join(format!("{key}.gb")));
    }
}
