use std::fmt::Write as _;
use std::path::Path;

use takumlab::bench::{bench_all, build_cdfs, cdf_csv, dynamic_range_table, errors_csv, stability_csv, stability_fraction};
use takumlab::isa::{classification_csv, Isa, Mnemonic};
use takumlab::matrix::{self, desk, CollectionIndex, FetchOptions, HttpTransport, SparseMatrix};
use takumlab::svg::{cdf_chart, range_chart};
use takumlab::{Error, Result};

use crate::config::{check_widths, fetch_options, RunConfig};
use crate::{inspect, Command, IsaAction};

pub fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Inspect { args } => print!("{}", inspect::run(&args)?),
        Command::Range {
            widths,
            out,
            points,
            svg,
        } => {
            check_widths(&widths)?;
            let mut widths = widths;
            widths.sort();
            widths.dedup();
            let table = dynamic_range_table(&widths)?;
            emit(out.as_deref(), &table.to_csv())?;
            if let Some(p) = points {
                write(&p, &table.points_csv())?;
            }
            if let Some(p) = svg {
                write(&p, &range_chart(&table))?;
            }
        }
        Command::Bench(args) => bench(RunConfig::from_bench(args)?)?,
        Command::Fetch {
            source,
            refresh_index,
            out,
        } => {
            let (opts, _) = fetch_options(&source)?;
            let index = load_index(&opts, refresh_index)?;
            let fetched = matrix::fetch_collection(&index, &opts, &HttpTransport::default())?;
            let dest = out.unwrap_or_else(|| opts.cache_dir.join("manifest.csv"));
            write(&dest, &fetched.manifest.to_csv())?;
            println!(
                "{} of {} matrices included; manifest written to {}",
                fetched.manifest.included_count(),
                index.len(),
                dest.display()
            );
        }
        Command::Isa { action, list, groups } => {
            let isa = match (list, groups) {
                (Some(l), Some(g)) => Isa::load(&l, &g)?,
                _ => Isa::shipped()?,
            };
            isa_action(&isa, action)?;
        }
    }
    Ok(())
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// The cached index, rebuilt from the network when asked or when absent.
fn load_index(opts: &FetchOptions, refresh: bool) -> Result<CollectionIndex> {
    let path = opts.cache_dir.join(matrix::INDEX_FILE);
    if !refresh {
        match std::fs::read_to_string(&path) {
            Ok(text) => return CollectionIndex::from_csv(&text),
            Err(e) if e.kind() != std::io::ErrorKind::NotFound => return Err(Error::Io { path, source: e }),
            Err(_) => {}
        }
    }
    if opts.offline {
        return Err(Error::NotCached(vec![path.display().to_string()]));
    }
    let index = matrix::refresh_index(&HttpTransport::default())?;
    std::fs::create_dir_all(&opts.cache_dir).map_err(|e| Error::Io {
        path: opts.cache_dir.clone(),
        source: e,
    })?;
    write(&path, &index.to_csv())?;
    Ok(index)
}

fn bench(cfg: RunConfig) -> Result<()> {
    let matrices: Vec<SparseMatrix> = if cfg.collection {
        let index = load_index(&cfg.fetch, false)?;
        let fetched = matrix::fetch_collection(&index, &cfg.fetch, &HttpTransport::default())?;
        if let Some(dir) = &cfg.out {
            create_dir(dir)?;
            write(&dir.join("manifest.csv"), &fetched.manifest.to_csv())?;
        }
        eprintln!("{} matrices in manifest", fetched.manifest.included_count());
        fetched.matrices
    } else {
        desk::load()?
    };
    let report = bench_all(&matrices, &cfg.formats, cfg.jobs)?;
    for (id, why) in &report.skipped {
        eprintln!("skipped {id}: {why}");
    }
    let series = build_cdfs(&report.records);
    let errors = errors_csv(&report.records);
    match &cfg.out {
        Some(dir) => {
            create_dir(dir)?;
            write(&dir.join("errors.csv"), &errors)?;
            write(&dir.join("cdf.csv"), &cdf_csv(&series))?;
            write(&dir.join("stability.csv"), &stability_csv(&series, cfg.threshold))?;
        }
        None => print!("{errors}"),
    }
    let mut summary = String::new();
    for s in &series {
        let _ = writeln!(
            summary,
            "{}: {:.1}% of {} matrices below {}",
            s.format,
            100.0 * stability_fraction(s, cfg.threshold),
            s.len(),
            cfg.threshold
        );
    }
    eprint!("{summary}");
    if let Some(p) = &cfg.svg {
        let panels: Vec<(u32, Vec<_>)> = cfg
            .widths
            .iter()
            .map(|&w| (w, series.iter().filter(|s| s.format.width() == w).collect()))
            .collect();
        write(p, &cdf_chart(&panels))?;
    }
    Ok(())
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.to_path_buf(),
        source: e,
    })
}

fn isa_action(isa: &Isa, action: IsaAction) -> Result<()> {
    match action {
        IsaAction::Classify { mnemonics, all } => {
            if all {
                print!("{}", classification_csv(&isa.classify_all()?));
            } else if mnemonics.is_empty() {
                return Err(Error::Usage("name at least one mnemonic, or pass --all".into()));
            } else {
                for m in mnemonics {
                    let m = Mnemonic::new(&m)?;
                    let g = isa.classify(&m)?;
                    println!("{m},{},{}", g.id, g.category);
                }
            }
        }
        IsaAction::Rewrite { mnemonics, generalised } => {
            for m in mnemonics {
                let m = Mnemonic::new(&m)?;
                let set = if generalised {
                    isa.rewrite_generalised(&m)?
                } else {
                    isa.rewrite(&m)?
                };
                let rhs = if set.is_empty() {
                    "(none)".to_string()
                } else {
                    set.into_iter().collect::<Vec<_>>().join(" ")
                };
                println!("{m} -> {rhs}");
            }
        }
        IsaAction::Enumerate { proposed } => {
            if proposed {
                for p in isa.enumerate_proposed() {
                    println!("{p}");
                }
            } else {
                print!("{}", classification_csv(&isa.enumerate_legacy()?.0));
            }
        }
        IsaAction::Diff { text, out } => {
            let d = isa.diff()?;
            emit(out.as_deref(), &if text { d.to_text() } else { d.to_csv() })?;
        }
        IsaAction::Stats => print!("{}", isa.enumerate_legacy()?.1),
    }
    Ok(())
}
