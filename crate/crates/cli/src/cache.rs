//! Content-addressed store for character tables.
//!
//! Files are named by the SHA-256 of the group spec, so a table is looked up
//! without building anything. A cached table is used only if its class list
//! matches the freshly built group.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use torsionlab::characters::standard_table;
use torsionlab::groups::GroupSpec;
use torsionlab::{CharacterTable, FiniteSymmetryGroup};

use crate::CliError;

/// Bumped whenever the stored layout or the table conventions change.
const FORMAT_TAG: &str = "torsionlab-table-v1";
const PREFIX: &str = "table-";

#[derive(Serialize, Deserialize)]
struct Entry {
    spec: GroupSpec,
    table: CharacterTable,
}

pub struct TableCache {
    dir: Option<PathBuf>,
}

impl TableCache {
    /// `--cache-dir`, else `TORSIONLAB_CACHE`, else the per-user data
    /// directory. `None` disables caching.
    pub fn resolve(flag: Option<PathBuf>, disabled: bool) -> Self {
        if disabled {
            return Self { dir: None };
        }
        let dir = flag
            .or_else(|| std::env::var_os("TORSIONLAB_CACHE").map(PathBuf::from))
            .or_else(|| dirs::data_dir().map(|d| d.join("torsionlab")));
        Self { dir }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn path_for(&self, spec: &GroupSpec) -> Option<PathBuf> {
        let dir = self.dir.as_ref()?;
        let mut h = Sha256::new();
        h.update(FORMAT_TAG.as_bytes());
        h.update(serde_json::to_vec(spec).expect("specs serialize"));
        Some(dir.join(format!("{PREFIX}{:x}.json", h.finalize())))
    }

    /// The standard table of `g`, from the cache when a valid entry exists.
    pub fn table(&self, g: &FiniteSymmetryGroup) -> Result<CharacterTable, CliError> {
        let path = self.path_for(&g.spec);
        if let Some(p) = &path {
            if let Some(t) = read_entry(p, g) {
                return Ok(t);
            }
        }
        let table = standard_table(g).map_err(|e| CliError::Compute(e.to_string()))?;
        if let Some(p) = &path {
            write_entry(p, g.spec, &table).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
        }
        Ok(table)
    }

    /// Removes every cached table; returns how many were deleted.
    pub fn clear(&self) -> Result<usize, CliError> {
        let Some(dir) = &self.dir else { return Ok(0) };
        let entries = match fs::read_dir(dir) {
            Ok(e) => e,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(0),
            Err(e) => return Err(CliError::Io(format!("{}: {e}", dir.display()))),
        };
        let mut n = 0;
        for entry in entries {
            let entry = entry.map_err(|e| CliError::Io(e.to_string()))?;
            let name = entry.file_name();
            let name = name.to_string_lossy();
            if name.starts_with(PREFIX) && name.ends_with(".json") {
                fs::remove_file(entry.path()).map_err(|e| CliError::Io(format!("{name}: {e}")))?;
                n += 1;
            }
        }
        Ok(n)
    }
}

fn read_entry(path: &Path, g: &FiniteSymmetryGroup) -> Option<CharacterTable> {
    let bytes = fs::read(path).ok()?;
    let entry: Entry = serde_json::from_slice(&bytes).ok()?;
    (entry.spec == g.spec && entry.table.classes == g.summary().classes).then_some(entry.table)
}

fn write_entry(path: &Path, spec: GroupSpec, table: &CharacterTable) -> io::Result<()> {
    let dir = path.parent().expect("cache files live in a directory");
    fs::create_dir_all(dir)?;
    let entry = Entry {
        spec,
        table: table.clone(),
    };
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, serde_json::to_vec(&entry).map_err(io::Error::other)?)?;
    fs::rename(&tmp, path)
}
