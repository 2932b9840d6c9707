//! Batch experiments: a JSON config names rings, theorems, set families and
//! seeds; `run` certifies each ring, evaluates every (ring, theorem, seed)
//! instance and writes CSV/JSON reports plus a manifest.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::graph::eigen::JacobiOptions;
use crate::graph::{build_graph, AdjacencyMode, SpectralCert, DEFAULT_MAX_MATERIALIZED};
use crate::harness::{evaluate_theorem, ExpansionReport, HarnessError, Theorem};
use crate::ring::{RingSpec, DEFAULT_ENUMERATION_CAP};
use crate::sets::{set_family, subgroup_generated_by, ElemLiteral, ElemSet, FuncTable, SetFamily};

/// Environment variable overriding the materialization cap.
pub const ENV_MAX_N: &str = "SUMPROD_MAX_N";
/// Environment variable overriding the enumeration cap.
pub const ENV_ENUM_CAP: &str = "SUMPROD_ENUM_CAP";

pub const CSV_HEADER: [&str; 15] = [
    "ring", "theorem", "A_size", "B_size", "C_size", "m", "f_size", "BC_size", "e_ST", "S_size",
    "T_size", "lambda", "chain_ok", "explicit_ok", "delta_emp",
];

#[derive(Debug, Error)]
#[error("config error at `{path}`: {message}")]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    fn new(path: impl Into<String>, message: impl ToString) -> Self {
        ConfigError {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("writing {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error("worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(v) => v,
        }
    }
}

/// A function descriptor, tabulated on the working subgroup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "func", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FuncSpec {
    Identity,
    Monomial { k: u64 },
    Constant { value: ElemLiteral },
    Table { pairs: Vec<(ElemLiteral, ElemLiteral)> },
}

impl FuncSpec {
    pub fn tabulate(&self, domain: &ElemSet) -> Result<FuncTable, HarnessError> {
        let ring = domain.ring();
        Ok(match self {
            FuncSpec::Identity => FuncTable::identity(domain)?,
            FuncSpec::Monomial { k } => FuncTable::monomial(domain, *k)?,
            FuncSpec::Constant { value } => FuncTable::constant(domain, value.resolve(ring)?)?,
            FuncSpec::Table { pairs } => {
                let pairs = pairs
                    .iter()
                    .map(|(x, y)| Ok((x.resolve(ring)?, y.resolve(ring)?)))
                    .collect::<Result<Vec<_>, HarnessError>>()?;
                FuncTable::from_pairs(domain, &pairs)?
            }
        })
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(alias = "ring")]
    rings: Option<OneOrMany<String>>,
    #[serde(alias = "theorem", default)]
    theorems: Option<OneOrMany<String>>,
    #[serde(alias = "seed")]
    seeds: Option<OneOrMany<u64>>,
    #[serde(rename = "A")]
    a: Option<SetFamily>,
    #[serde(rename = "B")]
    b: Option<SetFamily>,
    #[serde(rename = "C")]
    c: Option<SetFamily>,
    g: Option<FuncSpec>,
    h: Option<FuncSpec>,
    subgroup: Option<Vec<ElemLiteral>>,
    #[serde(default)]
    certify: bool,
    max_n: Option<u64>,
    enum_cap: Option<u64>,
}

/// A validated experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub rings: Vec<RingSpec>,
    pub theorems: Vec<Theorem>,
    pub seeds: Vec<u64>,
    pub sets: Option<[SetFamily; 3]>,
    pub g: FuncSpec,
    pub h: FuncSpec,
    /// Generators of the subgroup `G`; the full unit group when absent.
    pub subgroup: Option<Vec<ElemLiteral>>,
    pub certify: bool,
    pub max_n: u64,
    pub enum_cap: u64,
}

/// Cap values that take precedence over the config file.
#[derive(Debug, Clone, Copy, Default)]
pub struct CapOverrides {
    pub max_n: Option<u64>,
    pub enum_cap: Option<u64>,
}

impl CapOverrides {
    /// Read the caps from the environment.
    pub fn from_env() -> Result<Self, ConfigError> {
        let read = |name: &str| -> Result<Option<u64>, ConfigError> {
            match std::env::var(name) {
                Ok(text) => text
                    .trim()
                    .parse()
                    .map(Some)
                    .map_err(|e| ConfigError::new(format!("${name}"), e)),
                Err(_) => Ok(None),
            }
        };
        Ok(CapOverrides {
            max_n: read(ENV_MAX_N)?,
            enum_cap: read(ENV_ENUM_CAP)?,
        })
    }

    /// `self` where set, otherwise `fallback`.
    pub fn or(self, fallback: CapOverrides) -> CapOverrides {
        CapOverrides {
            max_n: self.max_n.or(fallback.max_n),
            enum_cap: self.enum_cap.or(fallback.enum_cap),
        }
    }
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    parse_config_with(text, CapOverrides::default())
}

pub fn parse_config_with(text: &str, caps: CapOverrides) -> Result<ExperimentConfig, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        ConfigError::new(path, e.into_inner())
    })?;

    let max_n = caps.max_n.or(raw.max_n).unwrap_or(DEFAULT_MAX_MATERIALIZED);
    let enum_cap = caps.enum_cap.or(raw.enum_cap).unwrap_or(DEFAULT_ENUMERATION_CAP);

    let rings = raw
        .rings
        .ok_or_else(|| ConfigError::new("rings", "missing field"))?
        .into_vec();
    if rings.is_empty() {
        return Err(ConfigError::new("rings", "at least one ring is required"));
    }
    let rings = rings
        .iter()
        .enumerate()
        .map(|(i, text)| {
            let path = format!("rings[{i}]");
            let ring: RingSpec = text.parse().map_err(|e| ConfigError::new(&path, e))?;
            if ring.order() > enum_cap {
                return Err(ConfigError::new(
                    &path,
                    format!("ring order {} exceeds enum_cap {enum_cap}", ring.order()),
                ));
            }
            let n = ring.order().saturating_mul(ring.order());
            if n > max_n {
                return Err(ConfigError::new(
                    &path,
                    format!("certification needs {n} vertices, above max_n {max_n}"),
                ));
            }
            Ok(ring)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let theorems = raw
        .theorems
        .map(OneOrMany::into_vec)
        .unwrap_or_default()
        .iter()
        .enumerate()
        .map(|(i, t)| t.parse().map_err(|e| ConfigError::new(format!("theorems[{i}]"), e)))
        .collect::<Result<Vec<Theorem>, _>>()?;
    if theorems.is_empty() && !raw.certify {
        return Err(ConfigError::new(
            "theorems",
            "no theorems selected and certify is false",
        ));
    }

    let (seeds, sets) = if theorems.is_empty() {
        (raw.seeds.map(OneOrMany::into_vec).unwrap_or_default(), None)
    } else {
        let seeds = raw
            .seeds
            .ok_or_else(|| ConfigError::new("seed", "missing field; every run needs an explicit seed"))?
            .into_vec();
        if seeds.is_empty() {
            return Err(ConfigError::new("seeds", "at least one seed is required"));
        }
        let a = raw.a.ok_or_else(|| ConfigError::new("A", "missing field"))?;
        let b = raw.b.ok_or_else(|| ConfigError::new("B", "missing field"))?;
        let c = raw.c.ok_or_else(|| ConfigError::new("C", "missing field"))?;
        (seeds, Some([a, b, c]))
    };

    Ok(ExperimentConfig {
        rings,
        theorems,
        seeds,
        sets,
        g: raw.g.unwrap_or(FuncSpec::Identity),
        h: raw.h.unwrap_or(FuncSpec::Constant {
            value: ElemLiteral::Code(1),
        }),
        subgroup: raw.subgroup,
        certify: raw.certify,
        max_n,
        enum_cap,
    })
}

impl ExperimentConfig {
    /// SHA-256 of the canonical JSON form of the validated config.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&canonical))
    }

    /// The run matrix in config order: rings, then theorems, then seeds.
    pub fn instances(&self) -> Vec<(usize, Theorem, u64)> {
        let mut out = Vec::new();
        for ri in 0..self.rings.len() {
            for &t in &self.theorems {
                for &s in &self.seeds {
                    out.push((ri, t, s));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InstanceStatus {
    Ok,
    ChainFailed,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceRecord {
    pub ring: String,
    pub theorem: Theorem,
    pub seed: u64,
    pub status: InstanceStatus,
    pub error: Option<String>,
    pub report: Option<ExpansionReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ManifestEntry {
    pub ring: String,
    pub theorem: Option<Theorem>,
    pub seed: Option<u64>,
    pub status: InstanceStatus,
    pub error: Option<String>,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub config_hash: String,
    pub certificates: Vec<ManifestEntry>,
    pub instances: Vec<ManifestEntry>,
    /// Paths relative to the output directory, including the manifest.
    pub files: Vec<String>,
}

impl RunManifest {
    /// True iff every evaluated instance satisfied the edge-count chain.
    pub fn all_chains_ok(&self) -> bool {
        self.instances
            .iter()
            .all(|e| e.status != InstanceStatus::ChainFailed)
    }
}

#[derive(Debug)]
pub struct RunOutcome {
    pub manifest: RunManifest,
    pub records: Vec<InstanceRecord>,
}

pub const REPORT_CSV: &str = "report.csv";
pub const REPORT_JSON: &str = "report.json";
pub const MANIFEST_JSON: &str = "manifest.json";

/// File name of a ring's certificate, e.g. `certificate_zpr_5_2.json`.
pub fn certificate_file_name(ring: &RingSpec) -> String {
    let slug: String = ring
        .to_string()
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    format!("certificate_{slug}.json")
}

/// Derive the seed of one set role from the instance seed.
fn role_seed(seed: u64, role: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(role)
}

pub fn certify_ring(ring: &RingSpec, max_n: u64) -> Result<SpectralCert, HarnessError> {
    let graph = build_graph(ring, AdjacencyMode::Materialized, max_n)?;
    Ok(graph.certify(JacobiOptions::default(), max_n)?)
}

fn run_instance(
    cfg: &ExperimentConfig,
    ring: &RingSpec,
    cert: &SpectralCert,
    theorem: Theorem,
    seed: u64,
) -> Result<ExpansionReport, HarnessError> {
    let group = match &cfg.subgroup {
        Some(gens) => {
            let gens = gens
                .iter()
                .map(|g| g.resolve(ring))
                .collect::<Result<Vec<_>, _>>()?;
            subgroup_generated_by(ring, &gens)?.elements().clone()
        }
        None => ElemSet::all_units(ring, cfg.enum_cap)?,
    };
    let families = cfg.sets.as_ref().expect("theorem runs carry set families");
    let draw = |role: usize| -> Result<ElemSet, HarnessError> {
        let within = if role == 0 || theorem == Theorem::ThreeSets {
            Some(&group)
        } else {
            None
        };
        Ok(set_family(
            ring,
            &families[role],
            role_seed(seed, role as u64),
            within,
            cfg.enum_cap,
        )?)
    };
    let (a, b, c) = (draw(0)?, draw(1)?, draw(2)?);
    let g = cfg.g.tabulate(&group)?;
    let h = cfg.h.tabulate(&group)?;
    let graph = build_graph(ring, AdjacencyMode::Implicit, cfg.max_n)?;
    evaluate_theorem(theorem, &g, Some(&h), [&a, &b, &c], &graph, cert)
}

fn fmt_float(x: f64) -> String {
    format!("{x:.6}")
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), RunError> {
    fs::write(path, bytes).map_err(|source| RunError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// CSV bytes for the successful instances, in order.
pub fn render_csv(records: &[InstanceRecord]) -> Result<Vec<u8>, RunError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for rep in records.iter().filter_map(|r| r.report.as_ref()) {
        w.write_record([
            rep.ring.clone(),
            rep.theorem.to_string(),
            rep.a_size.to_string(),
            rep.b_size.to_string(),
            rep.c_size.to_string(),
            rep.m.to_string(),
            rep.f_size.to_string(),
            rep.bc_size.to_string(),
            rep.e_st.to_string(),
            rep.s_size.to_string(),
            rep.t_size.to_string(),
            fmt_float(rep.lambda),
            rep.chain_ok.to_string(),
            rep.explicit_ok.to_string(),
            rep.delta_emp.map(fmt_float).unwrap_or_default(),
        ])?;
    }
    w.into_inner()
        .map_err(|e| RunError::Io {
            path: PathBuf::from(REPORT_CSV),
            source: e.into_error(),
        })
}

/// Execute the whole config with `jobs` worker threads and write the
/// reports under `out_dir`.
pub fn run(cfg: &ExperimentConfig, out_dir: &Path, jobs: usize) -> Result<RunOutcome, RunError> {
    fs::create_dir_all(out_dir).map_err(|source| RunError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;

    let (certs, cert_entries): (Vec<_>, Vec<_>) = pool.install(|| {
        cfg.rings
            .par_iter()
            .map(|ring| {
                let start = Instant::now();
                let cert = certify_ring(ring, cfg.max_n);
                let entry = ManifestEntry {
                    ring: ring.to_string(),
                    theorem: None,
                    seed: None,
                    status: if cert.is_ok() {
                        InstanceStatus::Ok
                    } else {
                        InstanceStatus::Error
                    },
                    error: cert.as_ref().err().map(|e| e.to_string()),
                    wall_ms: start.elapsed().as_secs_f64() * 1e3,
                };
                (cert, entry)
            })
            .unzip()
    });

    let results: Vec<(InstanceRecord, ManifestEntry)> = pool.install(|| {
        cfg.instances()
            .into_par_iter()
            .map(|(ri, theorem, seed)| {
                let ring = &cfg.rings[ri];
                let start = Instant::now();
                let outcome = match &certs[ri] {
                    Ok(cert) => run_instance(cfg, ring, cert, theorem, seed),
                    Err(e) => Err(e.clone()),
                };
                let (status, error, report) = match outcome {
                    Ok(rep) if rep.chain_ok => (InstanceStatus::Ok, None, Some(rep)),
                    Ok(rep) => (InstanceStatus::ChainFailed, None, Some(rep)),
                    Err(e) => (InstanceStatus::Error, Some(e.to_string()), None),
                };
                let entry = ManifestEntry {
                    ring: ring.to_string(),
                    theorem: Some(theorem),
                    seed: Some(seed),
                    status,
                    error: error.clone(),
                    wall_ms: start.elapsed().as_secs_f64() * 1e3,
                };
                let record = InstanceRecord {
                    ring: ring.to_string(),
                    theorem,
                    seed,
                    status,
                    error,
                    report,
                };
                (record, entry)
            })
            .collect()
    });
    let (records, instances): (Vec<_>, Vec<_>) = results.into_iter().unzip();

    let mut files = Vec::new();
    for (ring, cert) in cfg.rings.iter().zip(&certs) {
        if let Ok(cert) = cert {
            let name = certificate_file_name(ring);
            let body = serde_json::to_vec_pretty(&cert.record()).expect("certificate serializes");
            write_file(&out_dir.join(&name), &body)?;
            files.push(name);
        }
    }
    if !cfg.theorems.is_empty() {
        write_file(&out_dir.join(REPORT_CSV), &render_csv(&records)?)?;
        files.push(REPORT_CSV.to_string());
        let mut json = BTreeMap::new();
        json.insert("config_hash", serde_json::to_value(cfg.hash()).expect("string"));
        json.insert("instances", serde_json::to_value(&records).expect("records serialize"));
        let body = serde_json::to_vec_pretty(&json).expect("report serializes");
        write_file(&out_dir.join(REPORT_JSON), &body)?;
        files.push(REPORT_JSON.to_string());
    }
    files.push(MANIFEST_JSON.to_string());

    let manifest = RunManifest {
        config_hash: cfg.hash(),
        certificates: cert_entries,
        instances,
        files,
    };
    let body = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
    write_file(&out_dir.join(MANIFEST_JSON), &body)?;
    Ok(RunOutcome { manifest, records })
}
