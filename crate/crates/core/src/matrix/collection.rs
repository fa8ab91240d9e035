use std::fmt::Write as _;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use super::{read_matrix_market, SparseMatrix};
use crate::{Error, Result};

pub const DEFAULT_BASE_URL: &str = "https://sparse.tamu.edu/MM";
pub const STATS_URL: &str = "https://sparse.tamu.edu/files/ssstats.csv";
/// Environment variable naming the cache root.
pub const CACHE_ENV: &str = "TAKUMLAB_CACHE";
/// Name of the index snapshot inside the cache root.
pub const INDEX_FILE: &str = "index.csv";

/// `$TAKUMLAB_CACHE`, else `$XDG_CACHE_HOME/takumlab`, else
/// `$HOME/.cache/takumlab`.
pub fn default_cache_dir() -> Option<PathBuf> {
    let var = |k: &str| std::env::var_os(k).filter(|v| !v.is_empty()).map(PathBuf::from);
    var(CACHE_ENV)
        .or_else(|| var("XDG_CACHE_HOME").map(|d| d.join("takumlab")))
        .or_else(|| var("HOME").map(|d| d.join(".cache").join("takumlab")))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexRecord {
    pub id: String,
    pub group: String,
    pub name: String,
    pub rows: u64,
    pub cols: u64,
    pub nnz: u64,
    /// `real`, `integer`, `pattern` or `complex`.
    pub field: String,
    /// Problem kind as reported by the collection.
    pub kind: String,
}

/// A pinned snapshot of the collection, sorted by id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CollectionIndex {
    records: Vec<IndexRecord>,
}

const INDEX_HEADER: [&str; 8] = ["id", "group", "name", "rows", "cols", "nnz", "field", "kind"];

impl CollectionIndex {
    pub fn new(mut records: Vec<IndexRecord>) -> Result<Self> {
        records.sort_by(|a, b| a.id.cmp(&b.id));
        if let Some(w) = records.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(Error::Integrity(format!("duplicate index id {}", w[0].id)));
        }
        Ok(CollectionIndex { records })
    }

    pub fn records(&self) -> &[IndexRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Reads the index CSV written by [`CollectionIndex::to_csv`].
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(text.as_bytes());
        let headers = rdr.headers().map_err(|e| Error::parse(1, e.to_string()))?.clone();
        if headers.iter().collect::<Vec<_>>() != INDEX_HEADER {
            return Err(Error::parse(1, format!("index header must be {}", INDEX_HEADER.join(","))));
        }
        let mut records = Vec::new();
        for (i, row) in rdr.records().enumerate() {
            let line = i + 2;
            let row = row.map_err(|e| Error::parse(line, e.to_string()))?;
            let num = |k: usize| -> Result<u64> {
                row[k]
                    .parse()
                    .map_err(|_| Error::parse(line, format!("bad {} '{}'", INDEX_HEADER[k], &row[k])))
            };
            records.push(IndexRecord {
                id: row[0].to_string(),
                group: row[1].to_string(),
                name: row[2].to_string(),
                rows: num(3)?,
                cols: num(4)?,
                nnz: num(5)?,
                field: row[6].to_string(),
                kind: row[7].to_string(),
            });
        }
        Self::new(records)
    }

    pub fn to_csv(&self) -> String {
        let mut out = INDEX_HEADER.join(",") + "\n";
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.id,
                r.group,
                r.name,
                r.rows,
                r.cols,
                r.nnz,
                r.field,
                csv_field(&r.kind)
            );
        }
        out
    }

    /// Converts the collection's own statistics file: a count line, a date
    /// line, then `Group,Name,nrows,ncols,nnz,isReal,isBinary,isND,posdef,
    /// psym,nsym,kind,...`.
    pub fn from_ssstats(text: &str) -> Result<Self> {
        let body: String = text.lines().skip(2).map(|l| format!("{l}\n")).collect();
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_reader(body.as_bytes());
        let mut records = Vec::new();
        for (i, row) in rdr.records().enumerate() {
            let line = i + 3;
            let row = row.map_err(|e| Error::parse(line, e.to_string()))?;
            if row.len() < 12 {
                return Err(Error::parse(line, format!("expected at least 12 columns, found {}", row.len())));
            }
            let num = |k: usize| -> Result<u64> {
                row[k].trim().parse().map_err(|_| Error::parse(line, format!("bad number '{}'", &row[k])))
            };
            let field = if row[6].trim() == "1" {
                "pattern"
            } else if row[5].trim() == "0" {
                "complex"
            } else {
                "real"
            };
            let (group, name) = (row[0].trim().to_string(), row[1].trim().to_string());
            records.push(IndexRecord {
                id: format!("{group}/{name}"),
                group,
                name,
                rows: num(2)?,
                cols: num(3)?,
                nnz: num(4)?,
                field: field.to_string(),
                kind: row[11].trim().to_string(),
            });
        }
        Self::new(records)
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// A completed HTTP GET.
pub struct Download {
    pub body: Vec<u8>,
    pub content_length: Option<u64>,
}

/// Fetches URLs. Failures are reported as plain messages and become
/// [`Error::Network`].
pub trait Transport: Sync {
    fn get(&self, url: &str) -> std::result::Result<Download, String>;
}

pub struct HttpTransport {
    agent: ureq::Agent,
}

impl Default for HttpTransport {
    fn default() -> Self {
        let config = ureq::Agent::config_builder()
            .timeout_global(Some(std::time::Duration::from_secs(300)))
            .build();
        HttpTransport {
            agent: config.into(),
        }
    }
}

impl Transport for HttpTransport {
    fn get(&self, url: &str) -> std::result::Result<Download, String> {
        let mut resp = self.agent.get(url).call().map_err(|e| e.to_string())?;
        let content_length = resp
            .headers()
            .get("content-length")
            .and_then(|v| v.to_str().ok())
            .and_then(|v| v.parse().ok());
        let body = resp
            .body_mut()
            .with_config()
            .limit(1 << 30)
            .read_to_vec()
            .map_err(|e| e.to_string())?;
        Ok(Download { body, content_length })
    }
}

#[derive(Clone, Debug)]
pub struct FetchOptions {
    pub max_nnz: u64,
    pub cache_dir: PathBuf,
    pub offline: bool,
    /// Concurrent downloads; at least one.
    pub jobs: usize,
    pub base_url: String,
}

impl FetchOptions {
    pub fn new(cache_dir: impl Into<PathBuf>) -> Self {
        FetchOptions {
            max_nnz: 50_000,
            cache_dir: cache_dir.into(),
            offline: false,
            jobs: 4,
            base_url: DEFAULT_BASE_URL.to_string(),
        }
    }

    pub fn cached_path(&self, group: &str, name: &str) -> PathBuf {
        self.cache_dir.join(group).join(name).join(format!("{name}.mtx"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestEntry {
    pub id: String,
    pub nnz: u64,
    /// `None` when included.
    pub excluded: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn included(&self) -> impl Iterator<Item = &ManifestEntry> {
        self.entries.iter().filter(|e| e.excluded.is_none())
    }

    pub fn included_count(&self) -> usize {
        self.included().count()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,status,nnz,reason\n");
        for e in &self.entries {
            let (status, reason) = match &e.excluded {
                None => ("included", ""),
                Some(r) => ("excluded", r.as_str()),
            };
            let _ = writeln!(out, "{},{},{},{}", e.id, status, e.nnz, csv_field(reason));
        }
        out
    }
}

pub struct FetchOutcome {
    /// Sorted by id.
    pub matrices: Vec<SparseMatrix>,
    pub manifest: Manifest,
}

/// Loads every real or integer matrix of the index with at most
/// `max_nnz` stored entries, downloading what the cache lacks.
pub fn fetch_collection(index: &CollectionIndex, opts: &FetchOptions, transport: &dyn Transport) -> Result<FetchOutcome> {
    let mut manifest = Vec::new();
    let mut wanted = Vec::new();
    for r in index.records() {
        let reason = if r.nnz > opts.max_nnz {
            Some(format!("nnz {} exceeds {}", r.nnz, opts.max_nnz))
        } else if r.field == "pattern" || r.field == "complex" {
            Some(format!("{} field", r.field))
        } else {
            None
        };
        match reason {
            Some(reason) => manifest.push(ManifestEntry {
                id: r.id.clone(),
                nnz: r.nnz,
                excluded: Some(reason),
            }),
            None => wanted.push(r),
        }
    }

    let missing: Vec<&IndexRecord> = wanted
        .iter()
        .copied()
        .filter(|r| !opts.cached_path(&r.group, &r.name).is_file())
        .collect();
    if !missing.is_empty() {
        if opts.offline {
            return Err(Error::NotCached(missing.iter().map(|r| r.id.clone()).collect()));
        }
        download_all(&missing, opts, transport)?;
    }

    let mut matrices = Vec::new();
    for r in wanted {
        let path = opts.cached_path(&r.group, &r.name);
        let excluded = match read_matrix_market(&path, &r.id) {
            Ok(m) if m.nnz() as u64 > opts.max_nnz => Some(format!("nnz {} exceeds {}", m.nnz(), opts.max_nnz)),
            Ok(m) => {
                matrices.push(m);
                None
            }
            Err(Error::UnsupportedFormat(what)) => Some(what),
            Err(e @ Error::Io { .. }) => return Err(e),
            Err(e) => return Err(Error::Integrity(format!("{}: {e}", r.id))),
        };
        manifest.push(ManifestEntry {
            id: r.id.clone(),
            nnz: r.nnz,
            excluded,
        });
    }
    manifest.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(FetchOutcome {
        matrices,
        manifest: Manifest { entries: manifest },
    })
}

fn download_all(records: &[&IndexRecord], opts: &FetchOptions, transport: &dyn Transport) -> Result<()> {
    let next = AtomicUsize::new(0);
    let errors = Mutex::new(Vec::new());
    std::thread::scope(|s| {
        for _ in 0..opts.jobs.max(1).min(records.len()) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(r) = records.get(i) else { break };
                if let Err(e) = download_one(r, opts, transport) {
                    errors.lock().expect("no panics while locked").push((r.id.clone(), e));
                }
            });
        }
    });
    let mut errors = errors.into_inner().expect("no panics while locked");
    errors.sort_by(|a, b| a.0.cmp(&b.0));
    match errors.into_iter().next() {
        Some((_, e)) => Err(e),
        None => Ok(()),
    }
}

fn download_one(r: &IndexRecord, opts: &FetchOptions, transport: &dyn Transport) -> Result<()> {
    let url = format!("{}/{}/{}.tar.gz", opts.base_url, r.group, r.name);
    let dl = transport.get(&url).map_err(|msg| Error::Network {
        matrix: r.id.clone(),
        msg,
    })?;
    if let Some(expected) = dl.content_length {
        if expected != dl.body.len() as u64 {
            return Err(Error::Integrity(format!(
                "{}: archive is {} bytes, server announced {expected}",
                r.id,
                dl.body.len()
            )));
        }
    }
    let mtx = extract_mtx(&dl.body, &r.name).map_err(|msg| Error::Integrity(format!("{}: {msg}", r.id)))?;
    let path = opts.cached_path(&r.group, &r.name);
    let dir = path.parent().expect("cache path has a parent");
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_atomic(&dir.join(format!("{}.tar.gz.size", r.name)), format!("{}\n", dl.body.len()).as_bytes())?;
    write_atomic(&path, &mtx)
}

/// Pulls `<name>/<name>.mtx` out of a gzipped tarball.
fn extract_mtx(archive: &[u8], name: &str) -> std::result::Result<Vec<u8>, String> {
    let want = format!("{name}/{name}.mtx");
    let mut tar = tar::Archive::new(flate2::read::GzDecoder::new(archive));
    for entry in tar.entries().map_err(|e| format!("corrupt archive: {e}"))? {
        let mut entry = entry.map_err(|e| format!("corrupt archive: {e}"))?;
        let path = entry.path().map_err(|e| format!("corrupt archive: {e}"))?;
        if path.to_string_lossy().trim_start_matches("./") == want {
            let mut out = Vec::new();
            entry.read_to_end(&mut out).map_err(|e| format!("corrupt archive: {e}"))?;
            return Ok(out);
        }
    }
    Err(format!("archive has no {want}"))
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("part");
    std::fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// Downloads the collection's statistics file and converts it.
pub fn refresh_index(transport: &dyn Transport) -> Result<CollectionIndex> {
    let dl = transport.get(STATS_URL).map_err(|msg| Error::Network {
        matrix: "index".into(),
        msg,
    })?;
    let text = String::from_utf8(dl.body).map_err(|_| Error::Integrity("index is not UTF-8".into()))?;
    CollectionIndex::from_ssstats(&text)
}
