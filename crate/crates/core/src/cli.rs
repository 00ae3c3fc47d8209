//! Command-line interface.
//!
//! Exit codes: 0 on success, 1 on usage errors (bad flags, out-of-range
//! thresholds), 2 on input or data errors (unreadable files, syntax errors,
//! unknown entity ids, irreparable entities). Output is a pure function of
//! the input file and flags, so repeated runs are byte-identical.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::contradiction::{
    self, minimal_repairs_capped, repaired_similarity, RepairPolicy, RepairReport,
    DEFAULT_PLAN_CAP,
};
use crate::format::parse_kb;
use crate::hierarchy::{
    build_hierarchy, build_supercategories, verify_disjunction, ClusterMode, HierarchyError,
    SuperCategoryPartition,
};
use crate::kb::{Entity, EntityId, KnowledgeBase};
use crate::render::{decimal_fixed, fraction, fraction_and_decimal, parse_rational, MAX_PRECISION};
use crate::similarity::{compare, jaccard, matrix, JaccardMode, SimilarityBreakdown};
use crate::structured;
use crate::Rational;

/// Presentation and policy settings shared by every command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub theta: Rational,
    pub mode: ClusterMode,
    pub repair_policy: RepairPolicy,
    pub output_format: OutputFormat,
    pub decimal_precision: u32,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            theta: Rational::new_raw(2, 5),
            mode: ClusterMode::ConnectedComponents,
            repair_policy: RepairPolicy::DropNegative,
            output_format: OutputFormat::Human,
            decimal_precision: 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Human,
    Tsv,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolicyArg {
    DropNegative,
    DropPositive,
}

impl From<PolicyArg> for RepairPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::DropNegative => RepairPolicy::DropNegative,
            PolicyArg::DropPositive => RepairPolicy::DropPositive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    ConnectedComponents,
    StrictClique,
}

impl From<ModeArg> for ClusterMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::ConnectedComponents => ClusterMode::ConnectedComponents,
            ModeArg::StrictClique => ClusterMode::StrictClique,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum JaccardArg {
    PositiveOnly,
    AllLiterals,
}

impl From<JaccardArg> for JaccardMode {
    fn from(m: JaccardArg) -> Self {
        match m {
            JaccardArg::PositiveOnly => JaccardMode::PositiveOnly,
            JaccardArg::AllLiterals => JaccardMode::AllLiterals,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "parasim",
    version,
    about = "Paraconsistent similarity, contradiction repair, and threshold clustering \
             over knowledge bases of ground literals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "human")]
    format: OutputFormat,

    /// Decimal digits used when rendering numbers.
    #[arg(long, global = true, default_value_t = 2,
          value_parser = clap::value_parser!(u32).range(0..=MAX_PRECISION as i64))]
    precision: u32,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Similarity breakdown (S+, D±, S*) for a pair of entities.
    Sim {
        file: PathBuf,
        id1: String,
        id2: String,
        /// Repair both entities first, then compare the repaired pair.
        #[arg(long)]
        repaired: bool,
        /// Repair policy used with --repaired.
        #[arg(long, value_enum, default_value = "drop-negative")]
        policy: PolicyArg,
    },
    /// Full pairwise S* matrix of a knowledge base.
    Matrix { file: PathBuf },
    /// Jaccard baseline for a pair of entities.
    Jaccard {
        file: PathBuf,
        id1: String,
        id2: String,
        /// Property sets the index is computed over.
        #[arg(long, value_enum, default_value = "positive-only")]
        mode: JaccardArg,
    },
    /// Contradiction extraction E(K) and repairability of one entity.
    Extract { file: PathBuf, id: String },
    /// Minimal repair plans for one entity.
    Repair {
        file: PathBuf,
        id: String,
        /// Which literal of each complementary pair the single plan drops.
        #[arg(long, value_enum, default_value = "drop-negative")]
        policy: PolicyArg,
        /// List every minimal plan instead of the single policy plan.
        #[arg(long)]
        enumerate: bool,
        /// Cap on the number of enumerated plans.
        #[arg(long, default_value_t = DEFAULT_PLAN_CAP)]
        max_plans: usize,
    },
    /// Group entities into super-categories at a threshold.
    Cluster {
        file: PathBuf,
        /// Threshold in [-1, 1], as a fraction (2/5) or decimal (0.4).
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
        #[arg(long, value_enum, default_value = "connected-components")]
        mode: ModeArg,
    },
    /// Partitions across strictly ascending thresholds.
    Hierarchy {
        file: PathBuf,
        /// Comma-separated thresholds, each in [-1, 1].
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        thetas: Vec<String>,
    },
    /// S* and the Jaccard baseline side by side.
    Compare {
        file: PathBuf,
        id1: String,
        id2: String,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) => m,
        }
    }
}

/// Parses `args` (including the program name), runs the command, prints the
/// result, and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(output) => {
            print!("{output}");
            0
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<String, CliError> {
    let mut config = RunConfig {
        output_format: cli.format,
        decimal_precision: cli.precision,
        ..RunConfig::default()
    };
    match cli.command {
        Command::Sim {
            file,
            id1,
            id2,
            repaired,
            policy,
        } => {
            config.repair_policy = policy.into();
            let kb = load_kb(&file)?;
            let k1 = find_entity(&kb, &id1)?;
            let k2 = find_entity(&kb, &id2)?;
            render_sim(k1, k2, repaired, &config)
        }
        Command::Matrix { file } => {
            let kb = load_kb(&file)?;
            Ok(render_matrix(&kb, &config))
        }
        Command::Jaccard {
            file,
            id1,
            id2,
            mode,
        } => {
            let kb = load_kb(&file)?;
            let k1 = find_entity(&kb, &id1)?;
            let k2 = find_entity(&kb, &id2)?;
            Ok(render_jaccard(k1, k2, mode.into(), &config))
        }
        Command::Extract { file, id } => {
            let kb = load_kb(&file)?;
            let entity = find_entity(&kb, &id)?;
            Ok(render_extract(entity, &config))
        }
        Command::Repair {
            file,
            id,
            policy,
            enumerate,
            max_plans,
        } => {
            config.repair_policy = if enumerate {
                RepairPolicy::Enumerate
            } else {
                policy.into()
            };
            let kb = load_kb(&file)?;
            let entity = find_entity(&kb, &id)?;
            let report = minimal_repairs_capped(entity, config.repair_policy, max_plans);
            Ok(render_repair(entity, &report, &config))
        }
        Command::Cluster { file, theta, mode } => {
            config.theta = parse_theta(&theta)?;
            config.mode = mode.into();
            let kb = load_kb(&file)?;
            let partition = build_supercategories(&kb, config.theta, config.mode)
                .map_err(hierarchy_usage_error)?;
            Ok(render_cluster(&kb, &partition, &config))
        }
        Command::Hierarchy { file, thetas } => {
            let thresholds: Vec<Rational> = thetas
                .iter()
                .map(|t| parse_theta(t))
                .collect::<Result<_, _>>()?;
            let kb = load_kb(&file)?;
            let trace = build_hierarchy(&kb, &thresholds).map_err(hierarchy_usage_error)?;
            Ok(render_hierarchy(&trace, &config))
        }
        Command::Compare { file, id1, id2 } => {
            let kb = load_kb(&file)?;
            let k1 = find_entity(&kb, &id1)?;
            let k2 = find_entity(&kb, &id2)?;
            Ok(render_compare(k1, k2, &config))
        }
    }
}

fn load_kb(path: &Path) -> Result<KnowledgeBase, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    parse_kb(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn find_entity<'a>(kb: &'a KnowledgeBase, id: &str) -> Result<&'a Entity, CliError> {
    let id = EntityId::new(id);
    kb.get(&id)
        .ok_or_else(|| CliError::Data(format!("unknown entity id {:?}", id.as_str())))
}

fn parse_theta(text: &str) -> Result<Rational, CliError> {
    let theta = parse_rational(text)
        .map_err(|e| CliError::Usage(format!("invalid threshold {text:?}: {e}")))?;
    let one = Rational::new_raw(1, 1);
    if theta < -one || theta > one {
        return Err(CliError::Usage(format!(
            "threshold {text:?} is outside [-1, 1]"
        )));
    }
    Ok(theta)
}

fn hierarchy_usage_error(e: HierarchyError) -> CliError {
    CliError::Usage(e.to_string())
}

fn num(r: Rational, config: &RunConfig) -> String {
    fraction_and_decimal(r, config.decimal_precision)
}

fn decimal(r: Rational, config: &RunConfig) -> String {
    decimal_fixed(r, config.decimal_precision)
}

fn set_string<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    let inner: Vec<String> = items.into_iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", inner.join(", "))
}

fn block_string(block: &[EntityId]) -> String {
    let inner: Vec<&str> = block.iter().map(EntityId::as_str).collect();
    format!("{{{}}}", inner.join(","))
}

fn blocks_line(partition: &SuperCategoryPartition) -> String {
    let blocks: Vec<String> = partition.blocks().iter().map(|b| block_string(b)).collect();
    blocks.join(" | ")
}

fn mode_name(mode: ClusterMode) -> &'static str {
    match mode {
        ClusterMode::ConnectedComponents => "connected-components",
        ClusterMode::StrictClique => "strict-clique",
    }
}

fn policy_name(policy: RepairPolicy) -> &'static str {
    match policy {
        RepairPolicy::DropNegative => "drop-negative",
        RepairPolicy::DropPositive => "drop-positive",
        RepairPolicy::Enumerate => "enumerate",
    }
}

fn jaccard_mode_name(mode: JaccardMode) -> &'static str {
    match mode {
        JaccardMode::PositiveOnly => "positive-only",
        JaccardMode::AllLiterals => "all-literals",
    }
}

fn to_json_string(value: serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(&value).expect("json output");
    text.push('\n');
    text
}

fn breakdown_lines(out: &mut String, b: &SimilarityBreakdown, config: &RunConfig) {
    let p = b.partition();
    writeln!(out, "shared: {}", set_string(&p.shared)).unwrap();
    writeln!(out, "contradictory: {}", set_string(&p.contradictory)).unwrap();
    writeln!(out, "total: {} literals", p.total_count()).unwrap();
    writeln!(out, "S+ = {}", num(b.shared_ratio(), config)).unwrap();
    writeln!(out, "D± = {}", num(b.contradiction_ratio(), config)).unwrap();
    writeln!(out, "S* = {}", num(b.score(), config)).unwrap();
}

fn render_sim(
    k1: &Entity,
    k2: &Entity,
    repaired: bool,
    config: &RunConfig,
) -> Result<String, CliError> {
    let (breakdown, repaired_pair) = if repaired {
        let b = repaired_similarity(k1, k2, config.repair_policy)
            .map_err(|e| CliError::Data(e.to_string()))?;
        let fix = |k: &Entity| {
            let report = contradiction::minimal_repairs(k, config.repair_policy);
            contradiction::apply_repair(k, &report.plans[0])
                .expect("plan comes from minimal_repairs")
        };
        (b, Some((fix(k1), fix(k2))))
    } else {
        (compare(k1, k2), None)
    };

    match config.output_format {
        OutputFormat::Human => {
            let mut out = String::new();
            writeln!(out, "{k1}").unwrap();
            writeln!(out, "{k2}").unwrap();
            if let Some((r1, r2)) = &repaired_pair {
                writeln!(out, "repaired with policy {}", policy_name(config.repair_policy))
                    .unwrap();
                writeln!(out, "{}' = {}", r1.id(), set_string(r1.literals())).unwrap();
                writeln!(out, "{}' = {}", r2.id(), set_string(r2.literals())).unwrap();
            }
            breakdown_lines(&mut out, &breakdown, config);
            Ok(out)
        }
        OutputFormat::Tsv => {
            let mut out = String::new();
            let p = breakdown.partition();
            for (label, value) in [
                ("s_plus", breakdown.shared_ratio()),
                ("d_pm", breakdown.contradiction_ratio()),
                ("s_star", breakdown.score()),
            ] {
                writeln!(out, "{label}\t{}\t{}", fraction(value), decimal(value, config))
                    .unwrap();
            }
            writeln!(out, "shared\t{}", join_display(&p.shared)).unwrap();
            writeln!(out, "contradictory\t{}", join_display(&p.contradictory)).unwrap();
            writeln!(out, "total_size\t{}", p.total_count()).unwrap();
            Ok(out)
        }
        OutputFormat::Structured => {
            let mut payload = json!({
                "first": structured::entity_to_json(k1),
                "second": structured::entity_to_json(k2),
                "repaired": repaired,
            });
            if let Some((r1, r2)) = &repaired_pair {
                payload["policy"] = json!(policy_name(config.repair_policy));
                payload["first_repaired"] = structured::entity_to_json(r1);
                payload["second_repaired"] = structured::entity_to_json(r2);
            }
            merge(
                &mut payload,
                structured::breakdown_to_json(&breakdown, config.decimal_precision),
            );
            Ok(to_json_string(structured::envelope("sim", payload)))
        }
    }
}

fn render_matrix(kb: &KnowledgeBase, config: &RunConfig) -> String {
    let m = matrix(kb);
    match config.output_format {
        OutputFormat::Human => {
            let n = m.len();
            let cells: Vec<Vec<String>> = (0..n)
                .map(|i| (0..n).map(|j| num(m.score(i, j), config)).collect())
                .collect();
            let id_width = m.ids().iter().map(|id| id.as_str().len()).max().unwrap_or(0);
            let col_widths: Vec<usize> = (0..n)
                .map(|j| {
                    cells
                        .iter()
                        .map(|row| row[j].len())
                        .chain([m.ids()[j].as_str().len()])
                        .max()
                        .unwrap()
                })
                .collect();
            let mut out = String::new();
            write!(out, "{:id_width$}", "").unwrap();
            for (j, id) in m.ids().iter().enumerate() {
                write!(out, "  {:>width$}", id.as_str(), width = col_widths[j]).unwrap();
            }
            out.push('\n');
            for (i, row) in cells.iter().enumerate() {
                write!(out, "{:<id_width$}", m.ids()[i].as_str()).unwrap();
                for (j, cell) in row.iter().enumerate() {
                    write!(out, "  {:>width$}", cell, width = col_widths[j]).unwrap();
                }
                out.push('\n');
            }
            out
        }
        OutputFormat::Tsv => {
            let mut out = String::from("first\tsecond\ts_star\tdecimal\n");
            for i in 0..m.len() {
                for j in 0..m.len() {
                    let s = m.score(i, j);
                    writeln!(
                        out,
                        "{}\t{}\t{}\t{}",
                        m.ids()[i],
                        m.ids()[j],
                        fraction(s),
                        decimal(s, config)
                    )
                    .unwrap();
                }
            }
            out
        }
        OutputFormat::Structured => to_json_string(structured::envelope(
            "matrix",
            structured::matrix_to_json(&m, config.decimal_precision),
        )),
    }
}

fn render_jaccard(k1: &Entity, k2: &Entity, mode: JaccardMode, config: &RunConfig) -> String {
    let value = jaccard(k1, k2, mode);
    match config.output_format {
        OutputFormat::Human => {
            format!(
                "mode: {}\nJ = {}\n",
                jaccard_mode_name(mode),
                num(value, config)
            )
        }
        OutputFormat::Tsv => format!(
            "jaccard\t{}\t{}\nmode\t{}\n",
            fraction(value),
            decimal(value, config),
            jaccard_mode_name(mode)
        ),
        OutputFormat::Structured => to_json_string(structured::envelope(
            "jaccard",
            json!({
                "first": k1.id().as_str(),
                "second": k2.id().as_str(),
                "mode": jaccard_mode_name(mode),
                "jaccard": structured::rational_to_json(value, config.decimal_precision),
            }),
        )),
    }
}

fn render_extract(entity: &Entity, config: &RunConfig) -> String {
    let extracted = contradiction::extract_contradictions(entity);
    let atoms = contradiction::conflicting_atoms(entity);
    let repairable = contradiction::is_repairable(entity);
    let strict = contradiction::is_repairable_strict(entity);
    match config.output_format {
        OutputFormat::Human => {
            let mut out = String::new();
            writeln!(out, "{entity}").unwrap();
            writeln!(out, "extracted: {}", set_string(&extracted)).unwrap();
            writeln!(out, "contradictory atoms: {}", set_string(&atoms)).unwrap();
            writeln!(out, "repairable: {repairable}").unwrap();
            writeln!(out, "repairable (strict): {strict}").unwrap();
            out
        }
        OutputFormat::Tsv => {
            let mut out = String::new();
            writeln!(out, "extracted\t{}", join_display(&extracted)).unwrap();
            writeln!(out, "contradictory_atoms\t{}", join_display(&atoms)).unwrap();
            writeln!(out, "repairable\t{repairable}").unwrap();
            writeln!(out, "repairable_strict\t{strict}").unwrap();
            out
        }
        OutputFormat::Structured => to_json_string(structured::envelope(
            "extract",
            json!({
                "entity": structured::entity_to_json(entity),
                "extracted": extracted.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
                "contradictory_atoms": atoms.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
                "repairable": repairable,
                "repairable_strict": strict,
            }),
        )),
    }
}

fn render_repair(entity: &Entity, report: &RepairReport, config: &RunConfig) -> String {
    match config.output_format {
        OutputFormat::Human => {
            let mut out = String::new();
            writeln!(out, "{entity}").unwrap();
            writeln!(out, "policy: {}", policy_name(config.repair_policy)).unwrap();
            writeln!(out, "extracted: {}", set_string(&report.extracted)).unwrap();
            writeln!(
                out,
                "contradictory atoms: {}",
                set_string(&report.contradictory_atoms)
            )
            .unwrap();
            writeln!(out, "repairable: {}", report.repairable).unwrap();
            writeln!(out, "minimal repair size: {}", report.minimal_size).unwrap();
            for (i, plan) in report.plans.iter().enumerate() {
                writeln!(out, "plan {}: remove {}", i + 1, set_string(plan.removals())).unwrap();
            }
            if report.truncated {
                writeln!(out, "plans truncated at {}", report.plans.len()).unwrap();
            }
            out
        }
        OutputFormat::Tsv => {
            let mut out = String::new();
            writeln!(out, "policy\t{}", policy_name(config.repair_policy)).unwrap();
            writeln!(out, "extracted\t{}", join_display(&report.extracted)).unwrap();
            writeln!(
                out,
                "contradictory_atoms\t{}",
                join_display(&report.contradictory_atoms)
            )
            .unwrap();
            writeln!(out, "repairable\t{}", report.repairable).unwrap();
            writeln!(out, "minimal_size\t{}", report.minimal_size).unwrap();
            for (i, plan) in report.plans.iter().enumerate() {
                writeln!(out, "plan\t{}\t{}", i + 1, join_display(plan.removals())).unwrap();
            }
            writeln!(out, "truncated\t{}", report.truncated).unwrap();
            out
        }
        OutputFormat::Structured => {
            let mut payload = json!({ "entity": structured::entity_to_json(entity) });
            merge(&mut payload, structured::repair_report_to_json(report));
            to_json_string(structured::envelope("repair", payload))
        }
    }
}

fn render_cluster(
    kb: &KnowledgeBase,
    partition: &SuperCategoryPartition,
    config: &RunConfig,
) -> String {
    let report = verify_disjunction(partition, kb);
    match config.output_format {
        OutputFormat::Human => {
            let mut out = String::new();
            writeln!(out, "theta = {}", num(partition.theta(), config)).unwrap();
            writeln!(out, "mode: {}", mode_name(partition.mode())).unwrap();
            writeln!(out, "{}", blocks_line(partition)).unwrap();
            writeln!(out, "disjunction violations: {}", report.violations.len()).unwrap();
            for v in &report.violations {
                writeln!(
                    out,
                    "violation: ({}, {}) S* = {}",
                    v.first,
                    v.second,
                    num(v.score, config)
                )
                .unwrap();
            }
            out
        }
        OutputFormat::Tsv => {
            let mut out = String::new();
            writeln!(
                out,
                "theta\t{}\t{}",
                fraction(partition.theta()),
                decimal(partition.theta(), config)
            )
            .unwrap();
            writeln!(out, "mode\t{}", mode_name(partition.mode())).unwrap();
            for (i, block) in partition.blocks().iter().enumerate() {
                let members: Vec<&str> = block.iter().map(EntityId::as_str).collect();
                writeln!(out, "block\t{}\t{}", i + 1, members.join(",")).unwrap();
            }
            writeln!(out, "violations\t{}", report.violations.len()).unwrap();
            for v in &report.violations {
                writeln!(
                    out,
                    "violation\t{}\t{}\t{}\t{}",
                    v.first,
                    v.second,
                    fraction(v.score),
                    decimal(v.score, config)
                )
                .unwrap();
            }
            out
        }
        OutputFormat::Structured => to_json_string(structured::envelope(
            "cluster",
            json!({
                "theta": structured::rational_to_json(partition.theta(), config.decimal_precision),
                "mode": mode_name(partition.mode()),
                "blocks": structured::blocks_to_json(partition),
                "disjunction": structured::disjunction_to_json(&report, config.decimal_precision),
            }),
        )),
    }
}

fn render_hierarchy(trace: &crate::hierarchy::HierarchyTrace, config: &RunConfig) -> String {
    match config.output_format {
        OutputFormat::Human => {
            let mut out = String::new();
            for (theta, partition) in trace.thresholds.iter().zip(&trace.partitions) {
                writeln!(out, "theta = {}: {}", num(*theta, config), blocks_line(partition))
                    .unwrap();
            }
            out
        }
        OutputFormat::Tsv => {
            let mut out = String::new();
            for (theta, partition) in trace.thresholds.iter().zip(&trace.partitions) {
                let blocks: Vec<String> = partition
                    .blocks()
                    .iter()
                    .map(|b| {
                        b.iter()
                            .map(EntityId::as_str)
                            .collect::<Vec<_>>()
                            .join(",")
                    })
                    .collect();
                writeln!(
                    out,
                    "{}\t{}\t{}",
                    fraction(*theta),
                    decimal(*theta, config),
                    blocks.join("|")
                )
                .unwrap();
            }
            out
        }
        OutputFormat::Structured => to_json_string(structured::envelope(
            "hierarchy",
            structured::hierarchy_to_json(trace, config.decimal_precision),
        )),
    }
}

fn render_compare(k1: &Entity, k2: &Entity, config: &RunConfig) -> String {
    let breakdown = compare(k1, k2);
    let positive = jaccard(k1, k2, JaccardMode::PositiveOnly);
    let all = jaccard(k1, k2, JaccardMode::AllLiterals);
    let zero = Rational::new_raw(0, 1);
    let opposite_signs = breakdown.score() < zero && positive > zero;
    match config.output_format {
        OutputFormat::Human => {
            let mut out = String::new();
            writeln!(out, "{k1}").unwrap();
            writeln!(out, "{k2}").unwrap();
            writeln!(out, "S* = {}", num(breakdown.score(), config)).unwrap();
            writeln!(out, "jaccard (positive-only) = {}", num(positive, config)).unwrap();
            writeln!(out, "jaccard (all-literals) = {}", num(all, config)).unwrap();
            if opposite_signs {
                writeln!(
                    out,
                    "note: opposite signs: the Jaccard baseline ignores {} contradictory atom(s)",
                    breakdown.partition().contradictory_count()
                )
                .unwrap();
            }
            out
        }
        OutputFormat::Tsv => {
            let mut out = String::new();
            for (label, value) in [
                ("s_star", breakdown.score()),
                ("jaccard_positive_only", positive),
                ("jaccard_all_literals", all),
            ] {
                writeln!(out, "{label}\t{}\t{}", fraction(value), decimal(value, config))
                    .unwrap();
            }
            writeln!(out, "opposite_signs\t{opposite_signs}").unwrap();
            out
        }
        OutputFormat::Structured => to_json_string(structured::envelope(
            "compare",
            json!({
                "first": k1.id().as_str(),
                "second": k2.id().as_str(),
                "s_star": structured::rational_to_json(breakdown.score(), config.decimal_precision),
                "jaccard_positive_only":
                    structured::rational_to_json(positive, config.decimal_precision),
                "jaccard_all_literals":
                    structured::rational_to_json(all, config.decimal_precision),
                "opposite_signs": opposite_signs,
            }),
        )),
    }
}

fn join_display<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn merge(target: &mut serde_json::Value, from: serde_json::Value) {
    if let (Some(target_map), serde_json::Value::Object(from_map)) =
        (target.as_object_mut(), from)
    {
        target_map.extend(from_map);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_run_config_matches_documented_defaults() {
        let config = RunConfig::default();
        assert_eq!(config.theta, Rational::new(2, 5));
        assert_eq!(config.mode, ClusterMode::ConnectedComponents);
        assert_eq!(config.repair_policy, RepairPolicy::DropNegative);
        assert_eq!(config.output_format, OutputFormat::Human);
        assert_eq!(config.decimal_precision, 2);
    }

    #[test]
    fn theta_parsing_enforces_range() {
        assert_eq!(parse_theta("0.4").unwrap(), Rational::new(2, 5));
        assert_eq!(parse_theta("-1/6").unwrap(), Rational::new(-1, 6));
        assert!(matches!(parse_theta("1.5"), Err(CliError::Usage(_))));
        assert!(matches!(parse_theta("x"), Err(CliError::Usage(_))));
    }

    #[test]
    fn block_formatting_matches_report_style() {
        let block = vec![EntityId::new("K1"), EntityId::new("K3")];
        assert_eq!(block_string(&block), "{K1,K3}");
    }
}
