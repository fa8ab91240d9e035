use std::path::PathBuf;

use takumlab::format::DEFAULT_FORMATS;
use takumlab::matrix::{self, FetchOptions};
use takumlab::{Error, FormatId, Result};

use crate::{BenchArgs, SourceArgs};

/// Widths offered on the command line; the library accepts 2..=64.
pub const CLI_WIDTHS: [u32; 4] = [8, 16, 32, 64];

pub fn check_widths(widths: &[u32]) -> Result<()> {
    if widths.is_empty() {
        return Err(Error::Usage("empty width list".into()));
    }
    match widths.iter().find(|w| !CLI_WIDTHS.contains(w)) {
        Some(w) => Err(Error::Usage(format!("width {w} not one of 8, 16, 32, 64"))),
        None => Ok(()),
    }
}

pub fn parse_format(name: &str) -> Result<FormatId> {
    let f: FormatId = name.parse()?;
    check_widths(&[f.width()])?;
    Ok(f)
}

/// Validated settings for a benchmark or fetch run.
pub struct RunConfig {
    pub formats: Vec<FormatId>,
    /// Chart panels, ascending.
    pub widths: Vec<u32>,
    pub collection: bool,
    pub fetch: FetchOptions,
    pub jobs: usize,
    pub threshold: f64,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_bench(args: BenchArgs) -> Result<RunConfig> {
        if args.threshold.is_nan() || args.threshold <= 0.0 {
            return Err(Error::Usage(format!("threshold must be positive, got {}", args.threshold)));
        }
        if !args.widths.is_empty() {
            check_widths(&args.widths)?;
        }
        let mut formats = if args.formats.is_empty() {
            DEFAULT_FORMATS.to_vec()
        } else {
            args.formats.iter().map(|f| parse_format(f)).collect::<Result<Vec<_>>>()?
        };
        if !args.widths.is_empty() {
            formats.retain(|f| args.widths.contains(&f.width()));
        }
        formats.sort();
        formats.dedup();
        if formats.is_empty() {
            return Err(Error::Usage("no formats left after width filter".into()));
        }
        let mut widths: Vec<u32> = formats.iter().map(FormatId::width).collect();
        widths.sort();
        widths.dedup();
        let (fetch, jobs) = if args.collection {
            fetch_options(&args.source)?
        } else {
            (FetchOptions::new(""), jobs(&args.source)?)
        };
        Ok(RunConfig {
            formats,
            widths,
            collection: args.collection,
            fetch,
            jobs,
            threshold: args.threshold,
            out: args.out,
            svg: args.svg,
        })
    }
}

pub fn fetch_options(src: &SourceArgs) -> Result<(FetchOptions, usize)> {
    let dir = match &src.cache_dir {
        Some(d) => d.clone(),
        None => matrix::default_cache_dir()
            .ok_or_else(|| Error::Usage("no cache directory: pass --cache-dir or set TAKUMLAB_CACHE".into()))?,
    };
    let jobs = jobs(src)?;
    let mut opts = FetchOptions::new(dir);
    opts.offline = src.offline;
    opts.max_nnz = src.max_nnz;
    opts.jobs = jobs;
    opts.base_url = src.base_url.trim_end_matches('/').to_string();
    Ok((opts, jobs))
}

fn jobs(src: &SourceArgs) -> Result<usize> {
    match src.jobs {
        Some(0) => Err(Error::Usage("--jobs must be at least 1".into())),
        Some(j) => Ok(j),
        None => Ok(std::thread::available_parallelism().map_or(4, |n| n.get())),
    }
}
