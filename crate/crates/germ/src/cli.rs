//! Command surface: file-based ingestion of flow and morphism documents,
//! analyses, and deterministic report emission.
//!
//! Exit codes: 0 success, 1 parse error, 2 validation failure, 3 inexact
//! sequence or non-member verdict, 4 size guard exceeded.

use crate::branching::{germ_space_of_side, homotopy_germ_space, Mode, Side};
use crate::chains::is_homology_point;
use crate::dihomotopy::{check_st0, check_st1, check_st2, check_st3, essential_subsets};
use crate::documents::{DocumentError, FlowDocument, MorphismDocument};
use crate::flow::{Flow, FlowError, FlowMorphism};
use crate::homology::{homology_range, long_exact_sequence, verify_exactness, LesMap};
use crate::matrix::IntegerMatrix;
use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::sync::Arc;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_VERDICT: i32 = 3;
pub const EXIT_GUARD: i32 = 4;

#[derive(Parser)]
#[command(name = "germ", version, about = "Branching analysis of finite flows")]
pub struct Cli {
    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Cofibrancy handling for homotopy germ spaces
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Strict)]
    mode: ModeArg,
    /// Highest homology degree to report
    #[arg(long, global = true, default_value_t = 3)]
    max_dim: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Strict,
    Permissive,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Strict => Mode::Strict,
            ModeArg::Permissive => Mode::Permissive,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Minus,
    Plus,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Minus => Side::Minus,
            SideArg::Plus => Side::Plus,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    St0,
    St1,
    St2,
    St3,
}

#[derive(Subcommand)]
enum Command {
    /// Parse, build, and validate a flow document
    Validate { file: PathBuf },
    /// Branching space summary (germs of paths that start the same way)
    Branch {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = SideArg::Minus)]
        side: SideArg,
        /// Restrict the report to one state
        #[arg(long)]
        state: Option<String>,
        /// Include the full simplicial dump of the germ space
        #[arg(long)]
        dump: bool,
    },
    /// Merging space summary (germs of paths that end the same way)
    Merge {
        file: PathBuf,
        #[arg(long)]
        state: Option<String>,
        #[arg(long)]
        dump: bool,
    },
    /// Branching (or merging) homology groups
    Homology {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = SideArg::Minus)]
        side: SideArg,
    },
    /// The long exact sequence of the cone of a morphism
    Les {
        file: PathBuf,
        /// Self-test aid: zero the named map before verification
        #[arg(long)]
        zero_map: Option<String>,
    },
    /// Graded dihomotopy equivalence checks
    Check {
        file: PathBuf,
        #[arg(long, value_enum)]
        class: ClassArg,
    },
    /// Enumerate essential state subsets
    Essential { file: PathBuf },
}

fn read_file(path: &str) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
}

enum CliError {
    Parse(String),
    Validation(String),
    Guard(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Guard(_) => EXIT_GUARD,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Validation(m) | CliError::Guard(m) => m,
        }
    }
}

fn classify_flow_error(e: &FlowError) -> CliError {
    match e {
        FlowError::SizeGuard(m) => CliError::Guard(m.clone()),
        other => CliError::Validation(other.to_string()),
    }
}

fn classify_document_error(e: DocumentError) -> CliError {
    match e {
        DocumentError::Flow(fe) => classify_flow_error(&fe),
        other => CliError::Validation(other.to_string()),
    }
}

fn load_flow(path: &PathBuf) -> Result<Arc<Flow>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let doc: FlowDocument = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    doc.build().map_err(classify_document_error)
}

fn load_morphism(path: &PathBuf) -> Result<FlowMorphism, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let doc: MorphismDocument = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let m = doc.build(&read_file).map_err(classify_document_error)?;
    let report = m.validate();
    if !report.is_ok() {
        return Err(CliError::Validation(format!(
            "morphism does not commute with composition: {:?}",
            report.issues
        )));
    }
    Ok(m)
}

#[derive(serde::Serialize)]
struct ValidateReport {
    ok: bool,
    states: usize,
    path_simplices: usize,
    cofibrant: bool,
    issues: Vec<crate::flow::FlowIssue>,
}

#[derive(serde::Serialize)]
struct StateGermSummary {
    state: String,
    vertices: usize,
    simplices: usize,
    homology_point: bool,
}

#[derive(serde::Serialize)]
struct GermReport {
    side: String,
    warnings: Vec<String>,
    states: Vec<StateGermSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dump: Option<String>,
}

#[derive(serde::Serialize)]
struct HomologyReport {
    side: String,
    groups: Vec<GroupLine>,
}

#[derive(serde::Serialize)]
struct GroupLine {
    degree: usize,
    group: String,
}

#[derive(serde::Serialize)]
struct EssentialReport {
    subsets: Vec<EssentialLine>,
}

#[derive(serde::Serialize)]
struct EssentialLine {
    states: Vec<String>,
    minimal: bool,
}

fn emit<T: serde::Serialize>(format: Format, value: &T, text: String) {
    match format {
        Format::Structured => {
            println!("{}", serde_json::to_string_pretty(value).expect("serializable report"))
        }
        Format::Text => print!("{text}"),
    }
}

pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    let mode: Mode = cli.mode.into();
    match cli.command {
        Command::Validate { file } => {
            let flow = load_flow(&file)?;
            let report = flow.validate();
            let out = ValidateReport {
                ok: report.is_ok(),
                states: flow.state_count(),
                path_simplices: flow.total_path_simplices(),
                cofibrant: flow.is_cofibrant(),
                issues: report.issues.clone(),
            };
            let mut text = format!(
                "states: {}\npath simplices: {}\ncofibrant: {}\n",
                out.states, out.path_simplices, out.cofibrant
            );
            if out.ok {
                text.push_str("valid\n");
            } else {
                for i in &out.issues {
                    text.push_str(&format!("issue: {:?}\n", i));
                }
            }
            emit(cli.format, &out, text);
            Ok(if out.ok { EXIT_OK } else { EXIT_VALIDATION })
        }
        Command::Branch { file, side, state, dump } => {
            germ_report(&file, side.into(), state, dump, mode, cli.format)
        }
        Command::Merge { file, state, dump } => {
            germ_report(&file, Side::Plus, state, dump, mode, cli.format)
        }
        Command::Homology { file, side } => {
            let flow = load_flow(&file)?;
            let side: Side = side.into();
            let groups = homology_range(&flow, side, cli.max_dim, mode)
                .map_err(|e| classify_flow_error(&e))?;
            let out = HomologyReport {
                side: side.symbol().into(),
                groups: groups
                    .iter()
                    .enumerate()
                    .map(|(n, g)| GroupLine { degree: n, group: g.to_string() })
                    .collect(),
            };
            let text = out
                .groups
                .iter()
                .map(|l| format!("H^{}_{} = {}\n", out.side, l.degree, l.group))
                .collect::<String>();
            emit(cli.format, &out, text);
            Ok(EXIT_OK)
        }
        Command::Les { file, zero_map } => {
            let m = load_morphism(&file)?;
            let mut les =
                long_exact_sequence(&m, mode).map_err(|e| classify_flow_error(&e))?;
            if let Some(label) = zero_map {
                let Some(idx) = les.maps.iter().position(|mm| mm.label == label) else {
                    return Err(CliError::Validation(format!("no map labeled `{label}`")));
                };
                let shape = &les.maps[idx].matrix;
                les.maps[idx] = LesMap {
                    label: label.clone(),
                    matrix: IntegerMatrix::zeros(shape.rows, shape.cols),
                };
                let (ok, bad) = verify_exactness(&les);
                les.all_exact = ok;
                les.verdicts = bad.into_iter().collect();
            }
            let text = les.render_text();
            let code = if les.all_exact { EXIT_OK } else { EXIT_VERDICT };
            emit(cli.format, &les, text);
            Ok(code)
        }
        Command::Check { file, class } => {
            let m = load_morphism(&file)?;
            match class {
                ClassArg::St0 | ClassArg::St1 | ClassArg::St2 => {
                    let v = match class {
                        ClassArg::St0 => check_st0(&m),
                        ClassArg::St1 => check_st1(&m),
                        ClassArg::St2 => {
                            check_st2(&m, mode).map_err(|e| classify_flow_error(&e))?
                        }
                        ClassArg::St3 => unreachable!(),
                    };
                    let text = format!(
                        "class: {}\nmember: {}\nrestriction equivalence: {}\ngerm condition: {}\
                         \noffending states: [{}]\nsurrounded: {}\nnote: {}\n",
                        v.class_label,
                        v.overall,
                        v.restriction_equivalence,
                        v.germ_condition,
                        v.offending_states.join(", "),
                        v.surrounded_condition,
                        v.semi_decision_note
                    );
                    let code = if v.overall { EXIT_OK } else { EXIT_VERDICT };
                    emit(cli.format, &v, text);
                    Ok(code)
                }
                ClassArg::St3 => {
                    let v = check_st3(&m, mode).map_err(|e| classify_flow_error(&e))?;
                    let text = format!(
                        "class: ST3\nmember: {}\nclause1 (essential sets correspond): {}\
                         \nclause2 (essential restriction equivalences): {}\nnote: {}\n",
                        v.overall, v.clause1, v.clause2, v.semi_decision_note
                    );
                    let code = if v.overall { EXIT_OK } else { EXIT_VERDICT };
                    emit(cli.format, &v, text);
                    Ok(code)
                }
            }
        }
        Command::Essential { file } => {
            let flow = load_flow(&file)?;
            let subsets =
                essential_subsets(&flow, mode).map_err(|e| classify_flow_error(&e))?;
            let out = EssentialReport {
                subsets: subsets
                    .iter()
                    .map(|(a, minimal)| EssentialLine {
                        states: a.iter().map(|&s| flow.state_name(s).to_string()).collect(),
                        minimal: *minimal,
                    })
                    .collect(),
            };
            let text = out
                .subsets
                .iter()
                .map(|l| {
                    format!(
                        "{{{}}}{}\n",
                        l.states.join(", "),
                        if l.minimal { " (minimal)" } else { "" }
                    )
                })
                .collect::<String>();
            emit(cli.format, &out, text);
            Ok(EXIT_OK)
        }
    }
}

fn germ_report(
    file: &PathBuf,
    side: Side,
    state: Option<String>,
    dump: bool,
    mode: Mode,
    format: Format,
) -> Result<i32, CliError> {
    let flow = load_flow(file)?;
    let germ = if matches!(mode, Mode::Strict) && !flow.is_cofibrant() {
        // the plain germ space is always defined; strictness only guards
        // the homotopy variants used by homology and the ST2 check
        germ_space_of_side(&flow, side)
    } else {
        homotopy_germ_space(&flow, side, mode).map_err(|e| classify_flow_error(&e))?
    };
    let selected: Vec<usize> = match &state {
        Some(name) => vec![flow
            .state_index(name)
            .ok_or_else(|| CliError::Validation(format!("unknown state `{name}`")))?],
        None => (0..flow.state_count()).collect(),
    };
    let states: Vec<StateGermSummary> = selected
        .iter()
        .map(|&s| {
            let c = germ.component(s);
            StateGermSummary {
                state: flow.state_name(s).to_string(),
                vertices: c.count_in_dim(0),
                simplices: c.simplex_count(),
                homology_point: is_homology_point(&c),
            }
        })
        .collect();
    let out = GermReport {
        side: side.symbol().into(),
        warnings: germ.warnings.clone(),
        states,
        dump: dump.then(|| germ.total.dump()),
    };
    let mut text = String::new();
    for w in &out.warnings {
        text.push_str(&format!("warning: {w}\n"));
    }
    for s in &out.states {
        text.push_str(&format!(
            "P^{}_{{{}}}: {} vertices, {} simplices, homology point: {}\n",
            out.side, s.state, s.vertices, s.simplices, s.homology_point
        ));
    }
    if let Some(d) = &out.dump {
        text.push_str(d);
    }
    emit(format, &out, text);
    Ok(EXIT_OK)
}

pub fn cli_main() -> i32 {
    run(Cli::parse())
}
