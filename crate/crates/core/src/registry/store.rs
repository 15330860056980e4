//! On-disk nanopub store: one `<code>.trig` file per nanopub plus an
//! append-only `journal.txt` recording insertion order.

use std::collections::HashSet;
use std::fs::{self, File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

use thiserror::Error;

use crate::nanopub::Nanopub;
use crate::rdf::{Dataset, Format};
use crate::trusty::{verify_trusty, ArtifactCode, TrustyStatus, TrustyUri};

const JOURNAL: &str = "journal.txt";

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{}: {source}", .path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("<{0}> does not have a valid trusty URI")]
    NotTrusty(String),
    #[error("stored content for {0} is corrupt: {1}")]
    Corrupt(ArtifactCode, String),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> StoreError + '_ {
    move |source| StoreError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug)]
pub struct Store {
    dir: PathBuf,
    order: RwLock<Vec<ArtifactCode>>,
    /// Serializes writers; readers only take `order`.
    write: Mutex<HashSet<ArtifactCode>>,
}

impl Store {
    /// Opens or creates a store. Files that made it to disk without a
    /// journal entry (a crash between the two writes) are re-journaled.
    pub fn open(dir: impl Into<PathBuf>) -> Result<Store, StoreError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(io_err(&dir))?;
        let journal = dir.join(JOURNAL);
        let text = match fs::read_to_string(&journal) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => String::new(),
            Err(e) => return Err(io_err(&journal)(e)),
        };
        let mut order = Vec::new();
        let mut known = HashSet::new();
        for line in text.lines() {
            if let Ok(code) = line.trim().parse::<ArtifactCode>() {
                if dir.join(file_name(&code)).exists() && known.insert(code.clone()) {
                    order.push(code);
                }
            }
        }
        let mut stray: Vec<ArtifactCode> = fs::read_dir(&dir)
            .map_err(io_err(&dir))?
            .filter_map(|e| e.ok())
            .filter_map(|e| {
                let name = e.file_name().into_string().ok()?;
                name.strip_suffix(".trig")?.parse::<ArtifactCode>().ok()
            })
            .filter(|c| !known.contains(c))
            .collect();
        stray.sort();
        let store = Store {
            dir,
            order: RwLock::new(order),
            write: Mutex::new(known),
        };
        for code in stray {
            store.journal(&code)?;
            store.write.lock().unwrap().insert(code.clone());
            store.order.write().unwrap().push(code);
        }
        Ok(store)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn len(&self) -> usize {
        self.order.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, code: &ArtifactCode) -> bool {
        self.write.lock().unwrap().contains(code)
    }

    pub fn path_of(&self, code: &ArtifactCode) -> PathBuf {
        self.dir.join(file_name(code))
    }

    fn journal(&self, code: &ArtifactCode) -> Result<(), StoreError> {
        let path = self.dir.join(JOURNAL);
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(io_err(&path))?;
        writeln!(f, "{code}").map_err(io_err(&path))?;
        f.sync_data().map_err(io_err(&path))
    }

    /// Stores `np`. Returns false if it was already present.
    pub fn put(&self, np: &Nanopub) -> Result<bool, StoreError> {
        let code = match TrustyUri::parse(np.uri()) {
            Some(t) if verify_trusty(np) == TrustyStatus::Valid => t.code().clone(),
            _ => return Err(StoreError::NotTrusty(np.uri().to_string())),
        };
        let mut known = self.write.lock().unwrap();
        if known.contains(&code) {
            return Ok(false);
        }
        let text = np
            .to_dataset()
            .serialize(Format::TriG)
            .map_err(|e| StoreError::Corrupt(code.clone(), e.to_string()))?;
        let path = self.path_of(&code);
        let tmp = self.dir.join(format!(".{code}.tmp"));
        {
            let mut f = File::create(&tmp).map_err(io_err(&tmp))?;
            f.write_all(text.as_bytes()).map_err(io_err(&tmp))?;
            f.sync_all().map_err(io_err(&tmp))?;
        }
        fs::rename(&tmp, &path).map_err(io_err(&path))?;
        if let Ok(d) = File::open(&self.dir) {
            // directory fsync makes the rename durable; not supported everywhere
            let _ = d.sync_all();
        }
        self.journal(&code)?;
        known.insert(code.clone());
        self.order.write().unwrap().push(code);
        Ok(true)
    }

    /// Loads and re-verifies a stored nanopub.
    pub fn get(&self, code: &ArtifactCode) -> Result<Option<Nanopub>, StoreError> {
        if !self.contains(code) {
            return Ok(None);
        }
        let path = self.path_of(code);
        let text = fs::read_to_string(&path).map_err(io_err(&path))?;
        let corrupt = |why: String| StoreError::Corrupt(code.clone(), why);
        let ds = Dataset::parse(&text, Format::TriG).map_err(|e| corrupt(e.to_string()))?;
        let np = Nanopub::from_dataset(ds).map_err(|e| corrupt(e.to_string()))?;
        let matches = TrustyUri::parse(np.uri()).is_some_and(|t| t.code() == code);
        if !matches || verify_trusty(&np) != TrustyStatus::Valid {
            return Err(corrupt("content does not match its artifact code".into()));
        }
        Ok(Some(np))
    }

    /// Codes in insertion order; `page` counts from 1.
    pub fn page(&self, page: usize, size: usize) -> Vec<ArtifactCode> {
        let order = self.order.read().unwrap();
        let start = page.saturating_sub(1).saturating_mul(size);
        order.iter().skip(start).take(size).cloned().collect()
    }
}

fn file_name(code: &ArtifactCode) -> String {
    format!("{code}.trig")
}
