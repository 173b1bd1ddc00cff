use std::fs;
use std::io::Write;
use std::path::{Component, Path, PathBuf};

use serde::Serialize;

use crate::error::{CliError, CliResult};

fn normalize(path: &Path) -> PathBuf {
    let mut out = PathBuf::new();
    for c in path.components() {
        match c {
            Component::CurDir => {}
            Component::ParentDir => {
                if !out.pop() {
                    out.push("..");
                }
            }
            other => out.push(other.as_os_str()),
        }
    }
    out
}

/// Directory that every output of a run must stay inside.
#[derive(Debug, Clone)]
pub struct OutputRoot {
    root: PathBuf,
}

impl OutputRoot {
    pub fn new(root: &Path) -> CliResult<Self> {
        let abs = if root.is_absolute() { root.to_path_buf() } else { std::env::current_dir()?.join(root) };
        Ok(Self { root: normalize(&abs) })
    }

    /// Resolves `path` against the root, rejecting anything that lands
    /// outside of it after `.` and `..` are folded.
    pub fn resolve(&self, path: &Path) -> CliResult<PathBuf> {
        let joined = normalize(&self.root.join(path));
        if joined == self.root || !joined.starts_with(&self.root) {
            return Err(CliError::OutsideRoot(path.display().to_string()));
        }
        Ok(joined)
    }
}

/// A data file plus its `.config.json` sidecar, both stamped with the
/// config hash.
pub struct Artifact<'a> {
    pub root: &'a OutputRoot,
    pub command: &'a str,
    pub hash: &'a str,
}

impl Artifact<'_> {
    fn open(&self, rel: &Path) -> CliResult<(PathBuf, fs::File)> {
        let path = self.root.resolve(rel)?;
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        let file = fs::File::create(&path)?;
        Ok((path, file))
    }

    /// Writes `# config-sha256=<hash>` followed by whatever `body` emits.
    pub fn write_text<F>(&self, rel: &Path, body: F) -> CliResult<PathBuf>
    where
        F: FnOnce(&mut Vec<u8>) -> CliResult<()>,
    {
        let mut buf = format!("# config-sha256={}\n", self.hash).into_bytes();
        body(&mut buf)?;
        let (path, mut file) = self.open(rel)?;
        file.write_all(&buf)?;
        Ok(path)
    }

    /// Writes the resolved configuration next to `rel`.
    pub fn write_config<C: Serialize>(&self, rel: &Path, config: &C) -> CliResult<PathBuf> {
        let mut name = rel.as_os_str().to_owned();
        name.push(".config.json");
        let doc = serde_json::json!({ "command": self.command, "config_sha256": self.hash, "config": config });
        let (path, mut file) = self.open(Path::new(&name))?;
        serde_json::to_writer_pretty(&mut file, &doc)?;
        file.write_all(b"\n")?;
        Ok(path)
    }
}
