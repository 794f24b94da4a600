//! Classification runs with an append-only progress log, so an interrupted
//! run can be resumed from its manifest.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use toric_ci::classification::{classify_tuple, enumerate_weight_tuples, BoundContext, WeightTuple};

use crate::format::{sort_records, table, FamilyRecord, MANIFEST_SCHEMA};
use crate::{to_json, CliError, CliResult};

pub const FAMILIES_JSONL: &str = "families.jsonl";
pub const FAMILIES_TABLE: &str = "families.txt";
pub const MANIFEST: &str = "manifest.json";
pub const PROGRESS: &str = "progress.jsonl";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub s: usize,
    pub weight_cap: i64,
    pub relaxed_torsion: bool,
    pub cover_pruning: bool,
    pub gcd_prefilter: bool,
}

impl Bounds {
    fn new(ctx: &BoundContext) -> Self {
        Bounds {
            s: ctx.s,
            weight_cap: ctx.weight_cap,
            relaxed_torsion: ctx.relaxed_torsion,
            cover_pruning: ctx.cover_pruning,
            gcd_prefilter: ctx.gcd_prefilter,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema: String,
    pub version: String,
    pub bounds: Vec<Bounds>,
    /// SHA-256 of the bounds document framed as a git blob.
    pub input_hash: String,
    pub tuples: usize,
    pub complete: bool,
    pub families: usize,
    /// SHA-256 of each output file, keyed by file name.
    pub outputs: BTreeMap<String, String>,
}

/// One finished weight tuple in the progress log.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgressEntry {
    pub run: String,
    pub s: usize,
    pub weights: Vec<i64>,
    pub relations: Vec<i64>,
    pub families: Vec<FamilyRecord>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// `sha256("blob <len>\0" + content)`.
pub fn blob_hash(content: &[u8]) -> String {
    let mut framed = format!("blob {}\0", content.len()).into_bytes();
    framed.extend_from_slice(content);
    sha256_hex(&framed)
}

fn contexts(s: &[usize]) -> CliResult<Vec<BoundContext>> {
    let set: BTreeSet<usize> = s.iter().copied().collect();
    Ok(set.into_iter().map(BoundContext::new).collect::<toric_ci::Result<_>>()?)
}

fn input_hash(bounds: &[Bounds]) -> String {
    let doc = serde_json::to_string(bounds).expect("bounds serialize");
    blob_hash(doc.as_bytes())
}

fn pool(jobs: usize) -> CliResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Parse(format!("cannot start {jobs} workers: {e}")))
}

struct Sink<'a> {
    run: String,
    file: &'a Mutex<File>,
}

fn work(ctxs: &[BoundContext], done: &BTreeSet<(usize, WeightTuple)>) -> Vec<(usize, WeightTuple)> {
    ctxs.iter()
        .flat_map(|c| enumerate_weight_tuples(c).into_iter().map(move |t| (c.s, t)))
        .filter(|k| !done.contains(k))
        .collect()
}

fn process(
    ctxs: &[BoundContext],
    todo: &[(usize, WeightTuple)],
    jobs: usize,
    sink: Option<Sink>,
) -> CliResult<Vec<FamilyRecord>> {
    let by_s: BTreeMap<usize, &BoundContext> = ctxs.iter().map(|c| (c.s, c)).collect();
    let per_tuple = |(s, t): &(usize, WeightTuple)| -> CliResult<Vec<FamilyRecord>> {
        let report = classify_tuple(by_s[s], t)?;
        let families: Vec<FamilyRecord> = report.families.iter().map(FamilyRecord::new).collect();
        if let Some(sink) = &sink {
            let entry = ProgressEntry {
                run: sink.run.clone(),
                s: *s,
                weights: t.weights.clone(),
                relations: t.relations.clone(),
                families: families.clone(),
            };
            let mut line = serde_json::to_string(&entry).expect("progress serializes");
            line.push('\n');
            let mut f = sink.file.lock().expect("progress log lock");
            f.write_all(line.as_bytes())?;
            f.flush()?;
        }
        Ok(families)
    };
    let chunks: Vec<Vec<FamilyRecord>> =
        pool(jobs)?.install(|| todo.par_iter().map(per_tuple).collect::<CliResult<_>>())?;
    Ok(chunks.into_iter().flatten().collect())
}

/// Classifies without touching the file system.
pub fn classify_records(s: &[usize], jobs: usize) -> CliResult<Vec<FamilyRecord>> {
    let ctxs = contexts(s)?;
    let todo = work(&ctxs, &BTreeSet::new());
    let mut records = process(&ctxs, &todo, jobs, None)?;
    sort_records(&mut records);
    Ok(records)
}

fn write_manifest(dir: &Path, m: &Manifest) -> CliResult<()> {
    fs::write(dir.join(MANIFEST), to_json(m))?;
    Ok(())
}

fn finish(dir: &Path, mut manifest: Manifest, mut records: Vec<FamilyRecord>) -> CliResult<Vec<FamilyRecord>> {
    sort_records(&mut records);
    let jsonl: String = records
        .iter()
        .map(|r| serde_json::to_string(r).expect("record serializes") + "\n")
        .collect();
    let text = table(&records);
    fs::write(dir.join(FAMILIES_JSONL), &jsonl)?;
    fs::write(dir.join(FAMILIES_TABLE), &text)?;
    manifest.outputs = BTreeMap::from([
        (FAMILIES_JSONL.to_string(), sha256_hex(jsonl.as_bytes())),
        (FAMILIES_TABLE.to_string(), sha256_hex(text.as_bytes())),
    ]);
    manifest.families = records.len();
    manifest.complete = true;
    write_manifest(dir, &manifest)?;
    Ok(records)
}

fn run_in(dir: &Path, ctxs: &[BoundContext], jobs: usize, done: Vec<ProgressEntry>) -> CliResult<Vec<FamilyRecord>> {
    let bounds: Vec<Bounds> = ctxs.iter().map(Bounds::new).collect();
    let run = input_hash(&bounds);
    let all = work(ctxs, &BTreeSet::new());
    let manifest = Manifest {
        schema: MANIFEST_SCHEMA.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        bounds,
        input_hash: run.clone(),
        tuples: all.len(),
        complete: false,
        families: 0,
        outputs: BTreeMap::new(),
    };
    write_manifest(dir, &manifest)?;
    let finished: BTreeSet<(usize, WeightTuple)> = done
        .iter()
        .map(|e| {
            (
                e.s,
                WeightTuple {
                    weights: e.weights.clone(),
                    relations: e.relations.clone(),
                },
            )
        })
        .collect();
    let mut records: Vec<FamilyRecord> = done.into_iter().flat_map(|e| e.families).collect();
    let todo = work(ctxs, &finished);
    let file = Mutex::new(OpenOptions::new().create(true).append(true).open(dir.join(PROGRESS))?);
    records.extend(process(ctxs, &todo, jobs, Some(Sink { run, file: &file }))?);
    finish(dir, manifest, records)
}

/// Starts a fresh run writing into `dir`.
pub fn start(s: &[usize], dir: &Path, jobs: usize) -> CliResult<Vec<FamilyRecord>> {
    fs::create_dir_all(dir)?;
    let progress = dir.join(PROGRESS);
    if progress.exists() {
        fs::remove_file(&progress)?;
    }
    run_in(dir, &contexts(s)?, jobs, Vec::new())
}

/// Continues the run described by `manifest`, skipping every weight tuple
/// already in its progress log.
pub fn resume(manifest: &Path, jobs: usize) -> CliResult<Vec<FamilyRecord>> {
    let m: Manifest = crate::read_json(manifest)?;
    if m.schema != MANIFEST_SCHEMA {
        return Err(CliError::Parse(format!("schema {:?}, expected {MANIFEST_SCHEMA:?}", m.schema)));
    }
    let dir: PathBuf = manifest.parent().map(Path::to_path_buf).unwrap_or_default();
    let s: Vec<usize> = m.bounds.iter().map(|b| b.s).collect();
    let ctxs = contexts(&s)?;
    let bounds: Vec<Bounds> = ctxs.iter().map(Bounds::new).collect();
    if bounds != m.bounds || input_hash(&bounds) != m.input_hash {
        return Err(CliError::Parse("manifest bounds do not match this version's search bounds".into()));
    }
    let mut done = Vec::new();
    let mut seen = BTreeSet::new();
    let mut kept = String::new();
    if let Ok(text) = fs::read_to_string(dir.join(PROGRESS)) {
        // a run killed mid-write leaves a truncated last line; that tuple
        // is redone
        for line in text.lines() {
            if let Ok(e) = serde_json::from_str::<ProgressEntry>(line) {
                if e.run == m.input_hash && seen.insert((e.s, e.weights.clone(), e.relations.clone())) {
                    kept.push_str(line);
                    kept.push('\n');
                    done.push(e);
                }
            }
        }
    }
    fs::write(dir.join(PROGRESS), kept)?;
    run_in(&dir, &ctxs, jobs, done)
}
