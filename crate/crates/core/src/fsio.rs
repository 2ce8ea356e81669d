//! File output helpers shared by every emitter.
//!
//! All JSON leaves the pipeline through [`write_json`], which re-serializes
//! through `serde_json::Value` so object keys come out sorted; together with
//! sorted collections upstream this makes every output file byte-stable
//! across runs.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::io;
use std::path::Path;

/// Writes pretty-printed JSON with sorted keys and a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> io::Result<()> {
    let value = serde_json::to_value(value).map_err(io::Error::other)?;
    let mut text = serde_json::to_string_pretty(&value).map_err(io::Error::other)?;
    text.push('\n');
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, text)
}

pub fn write_string(path: &Path, text: &str) -> io::Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, text)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn sha256_file(path: &Path) -> io::Result<String> {
    Ok(sha256_hex(&std::fs::read(path)?))
}

fn collect_files(root: &Path, dir: &Path, out: &mut Vec<String>) -> io::Result<()> {
    let mut entries: Vec<_> = std::fs::read_dir(dir)?.collect::<Result<_, _>>()?;
    entries.sort_by_key(|e| e.file_name());
    for entry in entries {
        let path = entry.path();
        if path.is_dir() {
            collect_files(root, &path, out)?;
        } else {
            let rel = path
                .strip_prefix(root)
                .expect("walk stays under root")
                .to_string_lossy()
                .replace('\\', "/");
            out.push(rel);
        }
    }
    Ok(())
}

/// Digest of a directory tree: relative paths and file bytes, in sorted
/// order. Two trees hash equal iff they hold the same files with the same
/// contents.
pub fn hash_tree(root: &Path) -> io::Result<String> {
    let mut files = Vec::new();
    collect_files(root, root, &mut files)?;
    files.sort();
    let mut hasher = Sha256::new();
    for rel in files {
        hasher.update(rel.as_bytes());
        hasher.update([0u8]);
        hasher.update(std::fs::read(root.join(&rel))?);
        hasher.update([0xffu8]);
    }
    Ok(hex::encode(hasher.finalize()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_keys_come_out_sorted() {
        #[derive(Serialize)]
        struct Unsorted {
            zebra: u32,
            apple: u32,
            mango: u32,
        }
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.json");
        write_json(
            &path,
            &Unsorted {
                zebra: 1,
                apple: 2,
                mango: 3,
            },
        )
        .unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let apple = text.find("apple").unwrap();
        let mango = text.find("mango").unwrap();
        let zebra = text.find("zebra").unwrap();
        assert!(apple < mango && mango < zebra);
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn tree_hash_tracks_content_and_layout() {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path();
        std::fs::create_dir_all(root.join("sub")).unwrap();
        std::fs::write(root.join("a.txt"), b"one").unwrap();
        std::fs::write(root.join("sub/b.txt"), b"two").unwrap();
        let h1 = hash_tree(root).unwrap();
        assert_eq!(h1, hash_tree(root).unwrap());

        std::fs::write(root.join("sub/b.txt"), b"TWO").unwrap();
        assert_ne!(h1, hash_tree(root).unwrap());

        std::fs::write(root.join("sub/b.txt"), b"two").unwrap();
        assert_eq!(h1, hash_tree(root).unwrap());

        // Same bytes under a different name is a different tree.
        std::fs::rename(root.join("sub/b.txt"), root.join("sub/c.txt")).unwrap();
        assert_ne!(h1, hash_tree(root).unwrap());
    }
}
