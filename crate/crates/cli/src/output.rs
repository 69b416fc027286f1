//! Output plumbing: files are written to a temporary sibling and renamed
//! into place, so a failed run never leaves partial output behind.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};

pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating a temporary file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Writes to `path` if given, otherwise to stdout.
pub fn emit(path: Option<&Path>, contents: &str) -> Result<()> {
    match path {
        Some(p) => write_atomic(p, contents),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(contents.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

/// Writes every `(file name, contents)` pair into `dir`. All files are
/// staged in a temporary directory first and moved only once every artifact
/// has been produced.
pub fn write_bundle(dir: &Path, files: &[(String, String)]) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let staging = tempfile::tempdir_in(dir).context("creating a staging directory")?;
    for (name, contents) in files {
        std::fs::write(staging.path().join(name), contents).with_context(|| format!("staging {name}"))?;
    }
    for (name, _) in files {
        std::fs::rename(staging.path().join(name), dir.join(name))
            .with_context(|| format!("moving {name} into place"))?;
    }
    Ok(())
}
