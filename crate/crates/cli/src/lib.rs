//! Command-line front end: run configuration, commands and exit codes.

pub mod cache;

use std::path::PathBuf;
use std::sync::Arc;

use serde_json::{json, Value};

use preproj_core::algebra::{FDAlgebra, Presented};
use preproj_core::certify::{self, CertOptions, CertReport, ResolutionStore, Verdict};
use preproj_core::construction::{BuildOptions, ConstructionInput, Registry};
use preproj_core::derived::{cluster_tilting, gdim_from_table, neg_ext_table, vosnex, DerivedContext};
use preproj_core::error::Error;
use preproj_core::field::Fp;
use preproj_core::groebner::GroebnerBounds;
use preproj_core::io::{emit_algebra, read_input, Parsed};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INDETERMINATE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Build,
    Certify,
    Gorenstein,
    ClusterTilt,
    Reconstruct,
    SelfinjectiveCorrespondence,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub input: PathBuf,
    pub d: usize,
    pub field: u32,
    pub bounds: GroebnerBounds,
    pub max_resolution: usize,
    pub nilpotence_bound: usize,
    pub max_degree: usize,
    pub jmax_override: Option<usize>,
    pub seed: u64,
    pub format: Format,
    pub construction: String,
    pub cache_dir: Option<PathBuf>,
    pub timings: bool,
}

impl RunConfig {
    pub fn new(command: Command, input: impl Into<PathBuf>, d: usize) -> Self {
        let defaults = CertOptions::new(d);
        RunConfig {
            command,
            input: input.into(),
            d,
            field: 32003,
            bounds: GroebnerBounds::default(),
            max_resolution: defaults.resolution_bound,
            nilpotence_bound: defaults.nilpotence_bound,
            max_degree: defaults.max_degree,
            jmax_override: None,
            seed: defaults.seed,
            format: Format::Json,
            construction: "tensor".into(),
            cache_dir: None,
            timings: false,
        }
    }

    fn cert_options(&self) -> Result<CertOptions, Error> {
        let store: Option<Arc<dyn ResolutionStore>> = match &self.cache_dir {
            Some(dir) => Some(Arc::new(cache::DiskCache::new(dir)?)),
            None => None,
        };
        Ok(CertOptions {
            d: self.d,
            resolution_bound: self.max_resolution,
            max_degree: self.max_degree,
            nilpotence_bound: self.nilpotence_bound,
            jmax_override: self.jmax_override,
            seed: self.seed,
            timings: self.timings,
            store,
        })
    }

    fn validate(&self) -> Result<Fp, Error> {
        if self.d < 2 {
            return Err(Error::Validation(format!("d must be at least 2, got {}", self.d)));
        }
        if self.max_resolution == 0 || self.nilpotence_bound == 0 || self.max_degree == 0 {
            return Err(Error::Validation("bounds must be positive".into()));
        }
        if self.bounds.max_path_length == 0 || self.bounds.max_dimension == 0 {
            return Err(Error::Validation("bounds must be positive".into()));
        }
        Fp::new(self.field)
    }
}

/// Output of one run: the exit code and the text to print.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::MaxDegreeReached(_)
        | Error::NotGorenstein(_)
        | Error::GUnknown
        | Error::NilpotenceBoundExceeded(_)
        | Error::DimensionBoundExceeded(_)
        | Error::InfiniteGlobalDimension(_) => EXIT_INDETERMINATE,
        _ => EXIT_INPUT,
    }
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Pass => EXIT_PASS,
        Verdict::Fail => EXIT_FAIL,
        Verdict::Indeterminate => EXIT_INDETERMINATE,
    }
}

fn input_of(parsed: Parsed, bounds: GroebnerBounds) -> Result<ConstructionInput, Error> {
    Ok(match parsed {
        Parsed::Presentation(p) => ConstructionInput::Presentation(Presented::new(&p, bounds)?),
        Parsed::Potential(qp) => ConstructionInput::Potential(qp),
        Parsed::Algebra(a) => ConstructionInput::Algebra(Arc::new(a)),
    })
}

fn render_report(report: &CertReport, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("reports serialize"),
        Format::Text => {
            let mut s = String::new();
            for (k, v) in &report.verdicts {
                s.push_str(&format!("{k}: {}\n", serde_json::to_value(v).unwrap().as_str().unwrap_or("?")));
                if *v != Verdict::Pass {
                    if let Some(w) = report.witnesses.get(k) {
                        s.push_str(&format!("  witness: {w}\n"));
                    }
                }
            }
            for (k, t) in &report.timings {
                s.push_str(&format!("time {k}: {t:.3}s\n"));
            }
            s.push_str(&format!("overall: {}\n", serde_json::to_value(report.overall()).unwrap().as_str().unwrap()));
            s
        }
    }
}

fn render_algebra(alg: &FDAlgebra, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(&emit_algebra(alg)).expect("algebras serialize"),
        Format::Text => {
            let mut s = format!("dimension {}\n", alg.dim());
            for (p, n) in alg.graded_dims() {
                s.push_str(&format!("degree {p}: {n}\n"));
            }
            s
        }
    }
}

fn cluster_tilt_report(lambda: &Arc<FDAlgebra>, opts: &CertOptions) -> Result<CertReport, Error> {
    let mut report = CertReport::with_params(opts, lambda.field().modulus());
    let ctx = DerivedContext::new(lambda.clone(), opts.d)?;
    let rec = cluster_tilting(&ctx, opts.nilpotence_bound)?;
    let table = neg_ext_table(&rec);
    let witness: Value = json!({
        "tower_dims": rec.tower.iter().map(|m| m.dim()).collect::<Vec<_>>(),
        "total_dim": rec.total_dim(),
        "nilpotence_index": rec.nilpotence_index,
        "negative_ext": table.totals,
        "gdim_via_u": gdim_from_table(&table, opts.d)?,
        "vosnex": vosnex(&table, opts.d),
    });
    report.record("cluster_tilting", Verdict::from_bool(rec.in_left_aisle()), witness);
    Ok(report)
}

fn execute(cfg: &RunConfig) -> Result<Outcome, Error> {
    let field = cfg.validate()?;
    let parsed = read_input(&cfg.input, field)?;
    let input = input_of(parsed, cfg.bounds)?;
    let opts = cfg.cert_options()?;
    let report = match cfg.command {
        Command::Build => {
            let registry = Registry::default();
            let bopts = BuildOptions { d: cfg.d, bounds: cfg.bounds, max_degree: cfg.max_degree };
            let pi = registry.build(&cfg.construction, &input, &bopts)?;
            return Ok(Outcome { code: EXIT_PASS, output: render_algebra(&pi, cfg.format) });
        }
        Command::Certify => certify::certify(&input.algebra(cfg.bounds)?, &opts)?,
        Command::Reconstruct => certify::reconstruct(&input.algebra(cfg.bounds)?, &opts)?,
        Command::Gorenstein => {
            let pi = input.algebra(cfg.bounds)?;
            let g = certify::gorenstein_dimension(&pi, cfg.max_resolution)?;
            let mut r = CertReport::with_params(&opts, field.modulus());
            r.record("gorenstein_dimension", Verdict::Pass, json!({ "g": g }));
            r
        }
        Command::ClusterTilt => cluster_tilt_report(&input.algebra(cfg.bounds)?, &opts)?,
        Command::SelfinjectiveCorrespondence => {
            certify::selfinjective_correspondence(&input.algebra(cfg.bounds)?, &opts)?
        }
    };
    Ok(Outcome { code: verdict_code(report.overall()), output: render_report(&report, cfg.format) })
}

pub fn run(cfg: &RunConfig) -> Outcome {
    match execute(cfg) {
        Ok(o) => o,
        Err(e) => Outcome { code: exit_code(&e), output: format!("error: {e}\n") },
    }
}
