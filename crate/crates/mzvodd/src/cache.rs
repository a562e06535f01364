//! Optional disk cache for matrices and kernel bases.
//!
//! Entries are the v1 text formats with a SHA-256 digest sidecar; a digest
//! mismatch (format drift, truncated write) causes a silent rebuild. Writes
//! go through a temp file and an atomic rename so concurrent suite cells can
//! share one cache directory.

use std::env;
use std::fs;
use std::path::{Path, PathBuf};
use std::process;

use sha2::{Digest, Sha256};

use crate::io;
use crate::linalg::{right_kernel, KernelBasis, KernelSide};
use crate::matrix::{self, IntMatrix, MatrixKind};
use crate::Error;

/// Environment variable consulted when no explicit cache directory is given.
pub const CACHE_ENV: &str = "MZVODD_CACHE";

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: PathBuf) -> Result<Cache, Error> {
        fs::create_dir_all(&dir)?;
        Ok(Cache { dir })
    }

    /// Explicit flag wins over the environment; neither means no cache.
    pub fn from_flag_or_env(flag: Option<PathBuf>) -> Result<Option<Cache>, Error> {
        match flag.or_else(|| env::var_os(CACHE_ENV).map(PathBuf::from)) {
            Some(dir) => Ok(Some(Cache::new(dir)?)),
            None => Ok(None),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn digest(payload: &str) -> String {
        let mut hasher = Sha256::new();
        hasher.update(payload.as_bytes());
        hex_string(&hasher.finalize())
    }

    fn load(&self, name: &str) -> Option<String> {
        let payload = fs::read_to_string(self.dir.join(name)).ok()?;
        let recorded = fs::read_to_string(self.dir.join(format!("{name}.sha256"))).ok()?;
        (recorded.trim() == Self::digest(&payload)).then_some(payload)
    }

    fn store(&self, name: &str, payload: &str) -> Result<(), Error> {
        let tmp = self.dir.join(format!("{name}.tmp.{}", process::id()));
        fs::write(&tmp, payload)?;
        fs::rename(&tmp, self.dir.join(name))?;
        let digest = Self::digest(payload);
        let tmp = self.dir.join(format!("{name}.sha256.tmp.{}", process::id()));
        fs::write(&tmp, format!("{digest}\n"))?;
        fs::rename(&tmp, self.dir.join(format!("{name}.sha256")))?;
        Ok(())
    }

    fn matrix_name(kind: MatrixKind, weight: u32, depth: usize, q: Option<usize>) -> String {
        match q {
            Some(q) => format!("matrix-{}-N{weight}-r{depth}-q{q}.v1.txt", kind.as_str()),
            None => format!("matrix-{}-N{weight}-r{depth}.v1.txt", kind.as_str()),
        }
    }

    /// Fetch or build one of the four named matrix families.
    pub fn matrix(
        &self,
        kind: MatrixKind,
        weight: u32,
        depth: usize,
        q: Option<usize>,
    ) -> Result<IntMatrix, Error> {
        let name = Self::matrix_name(kind, weight, depth, q);
        if let Some(payload) = self.load(&name) {
            if let Ok(m) = io::matrix_from_str(&payload) {
                let p = m.provenance();
                if p.kind == kind && p.weight == weight && p.depth == depth && p.q == q {
                    return Ok(m);
                }
            }
        }
        let m = build_matrix(kind, weight, depth, q)?;
        self.store(&name, &io::matrix_to_string(&m))?;
        Ok(m)
    }

    /// Fetch or build a kernel basis of one of the named matrices.
    pub fn kernel(
        &self,
        side: KernelSide,
        kind: MatrixKind,
        weight: u32,
        depth: usize,
        q: Option<usize>,
    ) -> Result<KernelBasis, Error> {
        let name = format!(
            "kernel-{}-{}",
            side.as_str(),
            Self::matrix_name(kind, weight, depth, q)
        );
        if let Some(payload) = self.load(&name) {
            if let Ok(kb) = io::kernel_from_str(&payload) {
                let p = kb.source;
                if kb.side == side && p.kind == kind && p.weight == weight && p.depth == depth {
                    return Ok(kb);
                }
            }
        }
        let m = self.matrix(kind, weight, depth, q)?;
        let kb = match side {
            KernelSide::Left => crate::linalg::left_kernel(&m),
            KernelSide::Right => right_kernel(&m),
        };
        self.store(&name, &io::kernel_to_string(&kb))?;
        Ok(kb)
    }
}

/// Build one of the named matrix families without a cache.
pub fn build_matrix(
    kind: MatrixKind,
    weight: u32,
    depth: usize,
    q: Option<usize>,
) -> Result<IntMatrix, Error> {
    match kind {
        MatrixKind::E => Ok(matrix::build_e(weight, depth)),
        MatrixKind::Eq => matrix::build_eq(weight, depth, q.unwrap_or(depth)),
        MatrixKind::C => Ok(matrix::build_c(weight, depth)),
        MatrixKind::F => Ok(matrix::build_f(weight, depth)),
        MatrixKind::Identity => Ok(matrix::identity(weight, depth)),
        _ => Err(Error::Parse {
            line: 0,
            msg: format!("matrix kind {:?} cannot be built from parameters", kind),
        }),
    }
}

/// Fetch through the cache when one is configured, otherwise build fresh.
pub fn matrix_cached(
    cache: Option<&Cache>,
    kind: MatrixKind,
    weight: u32,
    depth: usize,
    q: Option<usize>,
) -> Result<IntMatrix, Error> {
    match cache {
        Some(c) => c.matrix(kind, weight, depth, q),
        None => build_matrix(kind, weight, depth, q),
    }
}

fn hex_string(bytes: &[u8]) -> String {
    let mut out = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        out.push_str(&format!("{b:02x}"));
    }
    out
}
