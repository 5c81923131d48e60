//! Output staging. Files are written into a hidden temporary directory next to
//! their destination and renamed into place only once all of them are done.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use tempfile::TempDir;

use crate::Failure;

pub struct Staging {
    out: PathBuf,
    tmp: TempDir,
    files: Vec<String>,
}

fn io_err(what: &str, path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Io(format!("{what} {}: {e}", path.display()))
}

impl Staging {
    pub fn new(out: &Path) -> Result<Self, Failure> {
        std::fs::create_dir_all(out).map_err(|e| io_err("cannot create", out, e))?;
        let tmp = tempfile::Builder::new()
            .prefix(".fracsys-")
            .tempdir_in(out)
            .map_err(|e| io_err("cannot stage in", out, e))?;
        Ok(Self {
            out: out.to_path_buf(),
            tmp,
            files: Vec::new(),
        })
    }

    fn path(&self, name: &str) -> PathBuf {
        self.tmp.path().join(name)
    }

    /// Stages `name`, filling it through `fill`.
    pub fn write<F>(&mut self, name: &str, fill: F) -> Result<(), Failure>
    where
        F: FnOnce(&mut BufWriter<File>) -> Result<(), Failure>,
    {
        let path = self.path(name);
        let file = File::create(&path).map_err(|e| io_err("cannot create", &path, e))?;
        let mut w = BufWriter::new(file);
        fill(&mut w)?;
        w.flush().map_err(|e| io_err("cannot write", &path, e))?;
        self.files.push(name.to_string());
        Ok(())
    }

    /// Moves every staged file into the output directory.
    pub fn commit(self) -> Result<PathBuf, Failure> {
        for name in &self.files {
            let to = self.out.join(name);
            std::fs::rename(self.tmp.path().join(name), &to)
                .map_err(|e| io_err("cannot move into", &to, e))?;
        }
        Ok(self.out)
    }
}
