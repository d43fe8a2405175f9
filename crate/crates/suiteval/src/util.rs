use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{io_err, HarnessResult};

/// Writes a file atomically: temp file in the target directory, then
/// rename.
pub fn atomic_write(path: &Path, contents: &str) -> HarnessResult<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let tmp = match dir {
        Some(d) => d.join(format!(
            ".{}.tmp",
            path.file_name().unwrap_or_default().to_string_lossy()
        )),
        None => Path::new(&format!(
            ".{}.tmp",
            path.file_name().unwrap_or_default().to_string_lossy()
        ))
        .to_path_buf(),
    };
    fs::write(&tmp, contents).map_err(io_err(&tmp))?;
    fs::rename(&tmp, path).map_err(io_err(path))?;
    Ok(())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn sha256_file(path: &Path) -> HarnessResult<String> {
    let bytes = fs::read(path).map_err(io_err(path))?;
    Ok(sha256_hex(&bytes))
}
