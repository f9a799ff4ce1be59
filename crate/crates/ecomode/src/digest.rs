//! Content digests used to stamp outputs with their provenance.
//!
//! Outputs never embed paths or timestamps; instead each file carries the
//! digest of the resolved configuration that produced it, and reports also
//! carry digests of their input files. Identical configuration and inputs
//! therefore reproduce identical bytes.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Hex-encoded SHA-256 of raw bytes.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for byte in digest {
        use std::fmt::Write;
        write!(out, "{byte:02x}").expect("writing to a String cannot fail");
    }
    out
}

/// Digest of a configuration value via its canonical JSON form.
///
/// Canonical means compact separators and deterministic key order, which
/// the serializer guarantees for sorted-map-backed objects.
pub fn config_digest<T: Serialize>(config: &T) -> Result<String> {
    let json = serde_json::to_string(config)
        .map_err(|e| Error::Config(format!("config is not serializable: {e}")))?;
    Ok(sha256_hex(json.as_bytes()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha256_matches_known_vector() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn config_digest_is_stable_and_input_sensitive() {
        #[derive(Serialize)]
        struct Cfg {
            alpha: f64,
            modes: Vec<u8>,
        }
        let a = Cfg {
            alpha: 1.0,
            modes: vec![1, 2],
        };
        let b = Cfg {
            alpha: 1.0,
            modes: vec![1, 2],
        };
        let c = Cfg {
            alpha: 2.0,
            modes: vec![1, 2],
        };
        assert_eq!(config_digest(&a).unwrap(), config_digest(&b).unwrap());
        assert_ne!(config_digest(&a).unwrap(), config_digest(&c).unwrap());
    }
}
