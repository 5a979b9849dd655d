use std::fs::File;
use std::io::{self, BufReader, Read};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Length and SHA-256 of an input, as read.
#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub name: String,
    pub bytes: u64,
    pub sha256: String,
}

/// Everything needed to reproduce a run. Thread counts are left out on
/// purpose: results do not depend on them.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub subcommand: &'static str,
    pub params: serde_json::Value,
    pub inputs: Vec<InputDigest>,
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u128>,
}

impl Manifest {
    pub fn new<P: Serialize>(subcommand: &'static str, params: &P) -> Self {
        Manifest {
            subcommand,
            params: serde_json::to_value(params).expect("arguments serialize"),
            inputs: Vec::new(),
            version: env!("CARGO_PKG_VERSION"),
            seed: None,
            wall_time_ms: None,
        }
    }

    pub fn finish(&mut self, started: Option<Instant>) {
        self.wall_time_ms = started.map(|t| t.elapsed().as_millis());
    }
}

/// A reader that hashes everything passing through it.
pub struct HashingReader<R> {
    inner: R,
    hasher: Sha256,
    bytes: u64,
    name: String,
}

impl<R: Read> Read for HashingReader<R> {
    fn read(&mut self, buf: &mut [u8]) -> io::Result<usize> {
        let read = self.inner.read(buf)?;
        self.hasher.update(&buf[..read]);
        self.bytes += read as u64;
        Ok(read)
    }
}

impl<R> HashingReader<R> {
    pub fn digest(self) -> InputDigest {
        InputDigest {
            name: self.name,
            bytes: self.bytes,
            sha256: hex::encode(self.hasher.finalize()),
        }
    }
}

/// Opens a file, or standard input for `None` and `-`.
pub fn open(path: Option<&Path>) -> io::Result<HashingReader<Box<dyn Read>>> {
    let (inner, name): (Box<dyn Read>, String) = match path {
        Some(p) if p != Path::new("-") => (
            Box::new(BufReader::new(File::open(p)?)),
            p.display().to_string(),
        ),
        _ => (Box::new(io::stdin().lock()), "<stdin>".to_string()),
    };
    Ok(HashingReader {
        inner,
        hasher: Sha256::new(),
        bytes: 0,
        name,
    })
}

/// Reads a whole input and returns its text with its digest.
pub fn read_all(path: Option<&PathBuf>) -> io::Result<(String, InputDigest)> {
    let mut reader = open(path.map(PathBuf::as_path))?;
    let mut raw = Vec::new();
    reader.read_to_end(&mut raw)?;
    Ok((String::from_utf8_lossy(&raw).into_owned(), reader.digest()))
}
