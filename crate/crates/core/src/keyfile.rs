//! Raw key files: little-endian `u32` keys back to back, no header.

use std::fs;
use std::io;
use std::path::Path;

use crate::item::Key;

pub fn decode_keys(bytes: &[u8]) -> io::Result<Vec<Key>> {
    if !bytes.len().is_multiple_of(4) {
        return Err(io::Error::new(
            io::ErrorKind::InvalidData,
            format!("key file length {} is not a multiple of 4", bytes.len()),
        ));
    }
    Ok(bytes
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect())
}

pub fn encode_keys(keys: &[Key]) -> Vec<u8> {
    keys.iter().flat_map(|k| k.to_le_bytes()).collect()
}

pub fn read_keys(path: impl AsRef<Path>) -> io::Result<Vec<Key>> {
    decode_keys(&fs::read(path)?)
}

pub fn write_keys(path: impl AsRef<Path>, keys: &[Key]) -> io::Result<()> {
    fs::write(path, encode_keys(keys))
}
