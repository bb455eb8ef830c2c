use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::generate::{generate, GeneratorSpec};
use crate::family::{CertifyConfig, ConstructionConfig};
use crate::protocol::{
    run_protocol, BackboneResult, EngineConfig, EngineStats, FamilySummary, ProtocolFamilies,
    ProtocolRun,
};
use crate::sinr::{
    build_graph, derive_dilution, DilutionConstants, PhysicalInstance, SinrParams,
    BOX_TRANSMITTER_CAP,
};
use crate::verifier::{verify_run, Verdict, VerifierConfig};
use crate::Result;

/// Largest ssf strength used in certified mode.
pub const C_CAP: u64 = 2048;

/// Random subsets per spot check in demo mode.
pub const DEMO_SAMPLES: usize = 10_000;

/// Label spaces up to this size always certify families exhaustively.
pub const FORCE_EXACT_LABELS: u32 = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InstanceSource {
    File(PathBuf),
    Generate(GeneratorSpec),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// `c` from the dilution constant, capped at [`C_CAP`]; every family
    /// must certify exactly.
    Certified,
    /// A small synthetic `c`; families may be spot-checked only and the run
    /// is labelled non-certified.
    Demo { c: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub source: InstanceSource,
    /// Used for generated instances; files carry their own.
    pub params: SinrParams,
    pub family_seed: u64,
    pub mode: Mode,
    pub verifier: VerifierConfig,
    /// `C_msg` in the message bound `C_msg · ⌈lg₂ N⌉`.
    pub c_msg: u64,
    /// Certify every family exhaustively regardless of its label space.
    pub exhaustive: bool,
    pub out_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn generated(spec: GeneratorSpec) -> Self {
        RunConfig {
            source: InstanceSource::Generate(spec),
            params: SinrParams::default(),
            family_seed: 0,
            mode: Mode::Certified,
            verifier: VerifierConfig::default(),
            c_msg: EngineConfig::default().c_msg,
            exhaustive: false,
            out_dir: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceSummary {
    pub n: usize,
    pub n_labels: u32,
    pub max_degree: usize,
    pub diameter: usize,
    pub edges: usize,
}

/// Deterministic summary of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub mode: Mode,
    /// Certified mode and every family certified exactly.
    pub certified: bool,
    pub instance: InstanceSummary,
    pub dilution: DilutionConstants,
    pub c: u64,
    pub families: Vec<FamilySummary>,
    pub rounds_used: u64,
    pub stage_rounds: BTreeMap<String, u64>,
    /// `rounds_used / (Δ · (lg₂ N)²)`.
    pub rounds_ratio: f64,
    pub backbone: BackboneResult,
    pub stats: EngineStats,
    pub verdicts: Vec<Verdict>,
    pub all_pass: bool,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Process exit status: 0 iff every verdict passed.
    pub fn exit_status(&self) -> i32 {
        i32::from(!self.all_pass)
    }
}

pub struct RunOutcome {
    pub instance: PhysicalInstance,
    pub families: ProtocolFamilies,
    pub run: ProtocolRun,
    pub report: RunReport,
}

/// `rounds / (Δ·(lg₂ N)²)` with `Δ` and `lg₂ N` floored at 1.
pub fn rounds_ratio(rounds: u64, delta: usize, n_labels: u32) -> f64 {
    let lg = f64::from(n_labels.max(2)).log2();
    rounds as f64 / (delta.max(1) as f64 * lg * lg)
}

pub fn load_instance(cfg: &RunConfig) -> Result<PhysicalInstance> {
    match &cfg.source {
        InstanceSource::File(p) => PhysicalInstance::load(p),
        InstanceSource::Generate(spec) => generate(spec, &cfg.params),
    }
}

/// Family construction settings for a mode and label space. Certified runs
/// over small label spaces always check exhaustively.
pub fn construction_for(mode: Mode, n_labels: u32, exhaustive: bool) -> ConstructionConfig {
    let certified = matches!(mode, Mode::Certified);
    let force = exhaustive || (certified && n_labels <= FORCE_EXACT_LABELS);
    ConstructionConfig {
        certify: CertifyConfig {
            force_exhaustive: force,
            samples: if certified {
                CertifyConfig::default().samples
            } else {
                DEMO_SAMPLES
            },
            ..Default::default()
        },
        require_exact: certified,
        ..Default::default()
    }
}

/// Loads or generates the instance, builds the families, runs the protocol,
/// verifies, and writes artifacts when an output directory is set.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome> {
    let inst = load_instance(cfg)?;
    run_instance(inst, cfg)
}

pub fn run_instance(inst: PhysicalInstance, cfg: &RunConfig) -> Result<RunOutcome> {
    let graph = build_graph(&inst)?;
    let dilution = derive_dilution(inst.params(), BOX_TRANSMITTER_CAP)?;
    let (c, strict) = match cfg.mode {
        Mode::Certified => (dilution.c.min(C_CAP), true),
        Mode::Demo { c } => (c.max(1), false),
    };
    let construction = construction_for(cfg.mode, inst.n_labels(), cfg.exhaustive);
    let families = ProtocolFamilies::build(
        inst.n_labels(),
        graph.max_degree(),
        c,
        cfg.family_seed,
        &construction,
    )?;
    let engine = EngineConfig {
        c_msg: cfg.c_msg,
        record_traces: true,
        strict_delivery: strict,
    };
    let run = run_protocol(&inst, &families, &engine)?;
    let mut verdicts = verify_run(&run, &inst, &graph, &cfg.verifier)?;
    let all_certified = families.all_certified();
    if matches!(cfg.mode, Mode::Certified) {
        let uncertified: Vec<String> = families
            .summaries()
            .into_iter()
            .filter(|f| !f.certified)
            .map(|f| f.role)
            .collect();
        verdicts.push(
            Verdict::from_witness(
                "families-certified",
                (!uncertified.is_empty()).then(|| serde_json::json!(uncertified)),
            )
            .metric("families", families.summaries().len() as f64),
        );
    }
    let all_pass = verdicts.iter().all(|v| v.pass);
    let report = RunReport {
        mode: cfg.mode,
        certified: matches!(cfg.mode, Mode::Certified) && all_certified,
        instance: InstanceSummary {
            n: graph.n(),
            n_labels: inst.n_labels(),
            max_degree: graph.max_degree(),
            diameter: graph.diameter().unwrap_or(0),
            edges: graph.edge_count(),
        },
        dilution,
        c,
        families: families.summaries(),
        rounds_used: run.result.rounds_used,
        stage_rounds: run.stage_rounds.clone(),
        rounds_ratio: rounds_ratio(run.result.rounds_used, graph.max_degree(), inst.n_labels()),
        backbone: run.result.clone(),
        stats: run.stats.clone(),
        verdicts,
        all_pass,
    };
    if let Some(dir) = &cfg.out_dir {
        write_artifacts(dir, &inst, &run, &report)?;
    }
    Ok(RunOutcome {
        instance: inst,
        families,
        run,
        report,
    })
}

/// `instance.json`, `trace.jsonl`, `backbone.json` and `report.json`.
pub fn write_artifacts(
    dir: &Path,
    inst: &PhysicalInstance,
    run: &ProtocolRun,
    report: &RunReport,
) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    inst.save(dir.join("instance.json"))?;
    let mut trace = BufWriter::new(File::create(dir.join("trace.jsonl"))?);
    for t in &run.traces {
        writeln!(trace, "{}", t.to_json_line())?;
    }
    trace.flush()?;
    std::fs::write(
        dir.join("backbone.json"),
        serde_json::to_string_pretty(&run.result)?,
    )?;
    std::fs::write(dir.join("report.json"), report.to_json())?;
    Ok(())
}
