//! Loading inputs and writing results while keeping track of which file
//! holds which object, so that emitted maps can refer to existing files.

use std::path::{Path, PathBuf};

use sdcat::shift::format::{build_bmap, emit_bmap, emit_shift, load_shift, parse_bmap_text};
use sdcat::{BlockMap, Error, Presentation, Result};

struct Known {
    object: Presentation,
    path: PathBuf,
}

#[derive(Default)]
pub struct Files {
    known: Vec<Known>,
    pub written: Vec<PathBuf>,
}

fn absolute(p: &Path) -> PathBuf {
    std::fs::canonicalize(p).unwrap_or_else(|_| std::env::current_dir().map(|d| d.join(p)).unwrap_or_else(|_| p.to_path_buf()))
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Io { path: path.display().to_string(), msg: e.to_string() }
}

impl Files {
    pub fn shift(&mut self, path: &Path) -> Result<Presentation> {
        let x = load_shift(path)?;
        self.remember(&x, path);
        Ok(x)
    }

    /// Loads a `.bmap`; object paths inside it are relative to its directory.
    pub fn map(&mut self, path: &Path) -> Result<BlockMap> {
        let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
        let t = parse_bmap_text(&text)?;
        let dir = path.parent().unwrap_or(Path::new("."));
        let src = self.shift(&dir.join(&t.source))?;
        let tgt = self.shift(&dir.join(&t.target))?;
        build_bmap(&t, &src, &tgt)
    }

    fn remember(&mut self, x: &Presentation, path: &Path) {
        if self.lookup(x).is_none() {
            self.known.push(Known { object: x.clone(), path: absolute(path) });
        }
    }

    fn lookup(&self, x: &Presentation) -> Option<&Path> {
        self.known
            .iter()
            .find(|k| k.object.alphabet() == x.alphabet() && k.object == *x)
            .map(|k| k.path.as_path())
    }

    pub fn write_shift(&mut self, x: &Presentation, path: &Path) -> Result<PathBuf> {
        std::fs::write(path, emit_shift(x)).map_err(|e| io_error(path, e))?;
        self.known.retain(|k| k.path != absolute(path));
        self.remember(x, path);
        self.written.push(path.to_path_buf());
        Ok(path.to_path_buf())
    }

    /// Writes `f` to `path`. Source and target refer to already known files
    /// when possible; otherwise they are written next to `path`.
    pub fn write_map(&mut self, f: &BlockMap, path: &Path) -> Result<PathBuf> {
        let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("map").to_string();
        let mut refs = Vec::new();
        for (x, role) in [(f.source(), "source"), (f.target(), "target")] {
            let file = match self.lookup(x) {
                Some(p) => p.to_path_buf(),
                None => {
                    let p = dir.join(format!("{stem}.{role}.shift"));
                    self.write_shift(x, &p)?;
                    absolute(&p)
                }
            };
            refs.push(relative_to(&file, &absolute(dir)));
        }
        std::fs::write(path, emit_bmap(f, &refs[0], &refs[1])).map_err(|e| io_error(path, e))?;
        self.written.push(path.to_path_buf());
        Ok(path.to_path_buf())
    }
}

/// `file` as seen from `dir`: a bare name when it sits in `dir`, otherwise
/// the absolute path.
fn relative_to(file: &Path, dir: &Path) -> String {
    match (file.parent(), file.file_name()) {
        (Some(p), Some(name)) if p == dir => name.to_string_lossy().into_owned(),
        _ => file.display().to_string(),
    }
}

/// `base` with its extension replaced by `suffix`.
pub fn sibling(base: &Path, suffix: &str) -> PathBuf {
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    base.with_file_name(format!("{stem}{suffix}"))
}
