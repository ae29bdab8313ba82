//! Command dispatch and rendering for the `semigroup-cm` binary.
//!
//! Every command produces a serializable result. JSON output wraps it in an
//! envelope with `"version": 1`; text output renders the same fields.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cohomology::{
    analyze_cohomology, default_bound, default_degree, format_j, goto_watanabe_check, verdict_of, Agreement,
    CmVerdict, CohomologyReport, GjStatus, GotoWatanabeReport, LevelVerdict,
};
use crate::error::Error;
use crate::homology::{build_pi_s, FieldSpec};
use crate::input::{parse_input, InputDocument};
use crate::matrix::IntMatrix;
use crate::semigroup::{AffineSemigroup, Profile, StandardReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_UNSUPPORTED: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Command {
    Facets,
    Transform,
    Standard,
    Complex,
    Cohomology,
    S2,
    Cm,
    Gw,
    Report,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::Facets,
        Command::Transform,
        Command::Standard,
        Command::Complex,
        Command::Cohomology,
        Command::S2,
        Command::Cm,
        Command::Gw,
        Command::Report,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Facets => "facets",
            Command::Transform => "transform",
            Command::Standard => "standard",
            Command::Complex => "complex",
            Command::Cohomology => "cohomology",
            Command::S2 => "s2",
            Command::Cm => "cm",
            Command::Gw => "gw",
            Command::Report => "report",
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Command::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| format!("unknown command `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            _ => Err(format!("invalid format `{s}`: expected `text` or `json`")),
        }
    }
}

/// `None` for `bound` and `degree` selects the defaults, 4 and 3 times the
/// largest generator degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunConfig {
    pub field: FieldSpec,
    pub bound: Option<u64>,
    pub degree: Option<u64>,
    pub format: Format,
}

/// What the binary prints and returns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub exit_code: i32,
}

impl Outcome {
    fn failure(message: impl std::fmt::Display, exit_code: i32) -> Self {
        Outcome { stdout: String::new(), stderr: format!("error: {message}\n"), exit_code }
    }
}

pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::NoGenerators
        | Error::ZeroGenerator { .. }
        | Error::NegativeEntry { .. }
        | Error::DimensionMismatch { .. }
        | Error::NotToricSurfaceInP4 => EXIT_INPUT,
        Error::NotPointed
        | Error::DimensionTooLarge(_)
        | Error::TooManyFacets(_)
        | Error::EntryTooLarge
        | Error::Overflow => EXIT_UNSUPPORTED,
        _ => EXIT_INTERNAL,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetRecord {
    pub label: usize,
    pub normal: Vec<i64>,
    /// 1-based generator labels on the facet.
    pub generators: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetsResult {
    pub ambient_dim: usize,
    pub rank: usize,
    pub lattice_basis: Vec<Vec<i64>>,
    pub lattice_index: u64,
    pub degree_functional: Vec<i64>,
    pub facets: Vec<FacetRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformResult {
    pub matrix: Vec<Vec<i64>>,
    pub image: Vec<Vec<i64>>,
    pub image_standard: StandardReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexResult {
    pub num_vertices: usize,
    pub faces: Vec<Vec<usize>>,
    pub non_faces: Vec<Vec<usize>>,
    /// Non-faces with `#J ≤ m - 2`.
    pub candidates: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct S2Result {
    pub degree: u64,
    pub sprime_minus_s: Vec<Vec<i64>>,
    pub equal_up_to_degree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmResult {
    pub field: FieldSpec,
    pub bound: u64,
    pub verdict: CmVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullReport {
    pub profile: Profile,
    pub facets: FacetsResult,
    pub transform: TransformResult,
    pub standard: StandardReport,
    pub complex: ComplexResult,
    pub cohomology: CohomologyReport,
    pub verdict: CmVerdict,
    pub s2: S2Result,
    /// Present for toric surfaces in `P^4`.
    pub gw: Option<GotoWatanabeReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", content = "result", rename_all = "lowercase")]
pub enum CommandOutput {
    Facets(FacetsResult),
    Transform(TransformResult),
    Standard(StandardReport),
    Complex(ComplexResult),
    Cohomology(CohomologyReport),
    S2(S2Result),
    Cm(CmResult),
    Gw(GotoWatanabeReport),
    Report(Box<FullReport>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Envelope {
    pub version: u32,
    pub label: Option<String>,
    pub generators: Vec<Vec<i64>>,
    #[serde(flatten)]
    pub output: CommandOutput,
}

fn i64_rows(m: &IntMatrix) -> Result<Vec<Vec<i64>>, Error> {
    m.to_i64_rows().ok_or(Error::EntryTooLarge)
}

fn facets_result(s: &AffineSemigroup) -> Result<FacetsResult, Error> {
    let normals = i64_rows(s.cone().facet_normals())?;
    let facets = normals
        .into_iter()
        .enumerate()
        .map(|(i, normal)| FacetRecord {
            label: i + 1,
            normal,
            generators: s.cone().incidence(i).iter().map(|g| g + 1).collect(),
        })
        .collect();
    let degree_functional = i64_rows(&IntMatrix::from_rows(s.ambient_dim(), &[s.degree_functional().to_vec()]))?
        .remove(0);
    let lattice_index = u64::try_from(s.lattice().index_in_saturation()).map_err(|_| Error::EntryTooLarge)?;
    Ok(FacetsResult {
        ambient_dim: s.ambient_dim(),
        rank: s.rank(),
        lattice_basis: i64_rows(s.lattice().basis())?,
        lattice_index,
        degree_functional,
        facets,
    })
}

fn transform_result(s: &AffineSemigroup) -> Result<TransformResult, Error> {
    let t = s.hochster_transform()?;
    Ok(TransformResult {
        matrix: i64_rows(&t.matrix)?,
        image: t.image.generator_rows(),
        image_standard: t.image.is_standard(),
    })
}

fn complex_result(s: &AffineSemigroup) -> ComplexResult {
    let k = build_pi_s(s);
    let m = s.num_facets();
    ComplexResult {
        num_vertices: m,
        faces: k.faces(),
        non_faces: k.non_faces(m),
        candidates: if m >= 2 { k.non_faces(m - 2) } else { Vec::new() },
    }
}

fn s2_result(s: &AffineSemigroup, d: u64) -> Result<S2Result, Error> {
    let sprime_minus_s = s.sprime_minus_s_up_to(d)?;
    Ok(S2Result { degree: d, equal_up_to_degree: sprime_minus_s.is_empty(), sprime_minus_s })
}

fn compute(cmd: Command, s: &AffineSemigroup, cfg: &RunConfig) -> Result<CommandOutput, Error> {
    let bound = cfg.bound.unwrap_or_else(|| default_bound(s));
    let degree = cfg.degree.unwrap_or_else(|| default_degree(s));
    Ok(match cmd {
        Command::Facets => CommandOutput::Facets(facets_result(s)?),
        Command::Transform => CommandOutput::Transform(transform_result(s)?),
        Command::Standard => CommandOutput::Standard(s.is_standard()),
        Command::Complex => CommandOutput::Complex(complex_result(s)),
        Command::Cohomology => CommandOutput::Cohomology(analyze_cohomology(s, cfg.field, bound)?),
        Command::S2 => CommandOutput::S2(s2_result(s, degree)?),
        Command::Cm => {
            let verdict = verdict_of(&analyze_cohomology(s, cfg.field, bound)?);
            CommandOutput::Cm(CmResult { field: cfg.field, bound, verdict })
        }
        Command::Gw => CommandOutput::Gw(goto_watanabe_check(s, degree, bound)?),
        Command::Report => {
            let profile = s.classify();
            let cohomology = analyze_cohomology(s, cfg.field, bound)?;
            let verdict = verdict_of(&cohomology);
            let gw = if profile.is_toric_surface_in_p4 { Some(goto_watanabe_check(s, degree, bound)?) } else { None };
            CommandOutput::Report(Box::new(FullReport {
                facets: facets_result(s)?,
                transform: transform_result(s)?,
                standard: s.is_standard(),
                complex: complex_result(s),
                s2: s2_result(s, degree)?,
                profile,
                cohomology,
                verdict,
                gw,
            }))
        }
    })
}

/// Runs `cmd` on a parsed document.
pub fn run_command(cmd: Command, doc: &InputDocument, cfg: &RunConfig) -> Outcome {
    let s = match AffineSemigroup::new(&doc.generators) {
        Ok(s) => s,
        Err(e) => return Outcome::failure(&e, exit_code_for(&e)),
    };
    let output = match compute(cmd, &s, cfg) {
        Ok(o) => o,
        Err(e) => return Outcome::failure(&e, exit_code_for(&e)),
    };
    let envelope = Envelope {
        version: SCHEMA_VERSION,
        label: doc.label.clone(),
        generators: doc.rows(),
        output,
    };
    let stdout = match cfg.format {
        Format::Json => match serde_json::to_string_pretty(&envelope) {
            Ok(s) => s + "\n",
            Err(e) => return Outcome::failure(e, EXIT_INTERNAL),
        },
        Format::Text => render_text(&envelope),
    };
    Outcome { stdout, stderr: String::new(), exit_code: EXIT_OK }
}

/// Parses `bytes` and runs `cmd`.
pub fn run(cmd: Command, bytes: &[u8], cfg: &RunConfig) -> Outcome {
    match parse_input(bytes) {
        Ok(doc) => run_command(cmd, &doc, cfg),
        Err(e) => Outcome::failure(e, EXIT_INPUT),
    }
}

fn vec_str(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn sets_str(sets: &[Vec<usize>]) -> String {
    if sets.is_empty() {
        return "none".to_string();
    }
    sets.iter().map(|j| format_j(j)).collect::<Vec<_>>().join(" ")
}

fn points_str(points: &[Vec<i64>]) -> String {
    if points.is_empty() {
        return "none".to_string();
    }
    points.iter().map(|p| vec_str(p)).collect::<Vec<_>>().join(" ")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn render_text(env: &Envelope) -> String {
    let mut out = String::new();
    if let Some(label) = &env.label {
        let _ = writeln!(out, "label: {label}");
    }
    match &env.output {
        CommandOutput::Facets(r) => write_facets(&mut out, r),
        CommandOutput::Transform(r) => write_transform(&mut out, r),
        CommandOutput::Standard(r) => write_standard(&mut out, r),
        CommandOutput::Complex(r) => write_complex(&mut out, r),
        CommandOutput::Cohomology(r) => write_cohomology(&mut out, r),
        CommandOutput::S2(r) => write_s2(&mut out, r),
        CommandOutput::Cm(r) => write_cm(&mut out, &r.verdict, r.field, r.bound),
        CommandOutput::Gw(r) => write_gw(&mut out, r),
        CommandOutput::Report(r) => write_report(&mut out, r, &env.generators),
    }
    out
}

fn write_facets(out: &mut String, r: &FacetsResult) {
    let _ = writeln!(out, "ambient dimension {}, rank {}, {} facets", r.ambient_dim, r.rank, r.facets.len());
    let _ = writeln!(out, "lattice basis: {}", points_str(&r.lattice_basis));
    let _ = writeln!(out, "lattice index in saturation: {}", r.lattice_index);
    let _ = writeln!(out, "degree functional: {}", vec_str(&r.degree_functional));
    for f in &r.facets {
        let gens: Vec<String> = f.generators.iter().map(|g| format!("g{g}")).collect();
        let _ = writeln!(out, "facet {}: normal {} contains {}", f.label, vec_str(&f.normal), gens.join(" "));
    }
}

fn write_transform(out: &mut String, r: &TransformResult) {
    let _ = writeln!(out, "transform rows: {}", points_str(&r.matrix));
    let _ = writeln!(out, "image generators: {}", points_str(&r.image));
    let _ = writeln!(out, "image standard: {}", yes_no(r.image_standard.standard));
}

fn write_standard(out: &mut String, r: &StandardReport) {
    let _ = writeln!(out, "saturation is orthant section: {}", yes_no(r.saturation_is_orthant_section));
    let _ = writeln!(out, "coordinate facets distinct: {}", yes_no(r.facets_distinct));
    let _ = writeln!(out, "coordinate faces of rank r-1: {}", yes_no(r.facet_ranks));
    let _ = writeln!(out, "standard: {}", yes_no(r.standard));
}

fn write_complex(out: &mut String, r: &ComplexResult) {
    let _ = writeln!(out, "vertices: {}", r.num_vertices);
    let _ = writeln!(out, "faces: {}", sets_str(&r.faces));
    let _ = writeln!(out, "non-faces: {}", sets_str(&r.non_faces));
    let _ = writeln!(out, "candidates (#J <= m-2): {}", sets_str(&r.candidates));
}

fn level_str(v: &LevelVerdict) -> String {
    match v {
        LevelVerdict::ZeroExact => "ZeroExact".to_string(),
        LevelVerdict::ZeroUpToBound { bound } => format!("ZeroUpToBound (bound {bound})"),
        LevelVerdict::Nonzero { j, witness } => format!(
            "Nonzero (J = {}, witness {} with facet values {})",
            format_j(j),
            vec_str(&witness.point),
            vec_str(&witness.facet_values)
        ),
    }
}

fn write_cohomology(out: &mut String, r: &CohomologyReport) {
    let _ = writeln!(out, "rank {}, {} facets, field {}, bound {}", r.rank, r.num_facets, r.field, r.bound);
    let _ = writeln!(out, "complex: {}", sets_str(&r.complex));
    let _ = writeln!(out, "candidates: {}", sets_str(&r.candidates));
    for c in &r.contributions {
        let betti: Vec<String> = c.betti.iter().map(|b| format!("H~{} = {}", b.q, b.dim)).collect();
        let status = match &c.gj_status {
            GjStatus::WitnessFound { witness, count } => {
                format!("{count} points of G_J, first {}", vec_str(&witness.point))
            }
            GjStatus::EmptyUpToBound { bound } => format!("G_J empty up to bound {bound}"),
        };
        let _ = writeln!(out, "J = {}: {}; {}", format_j(&c.j), betti.join(", "), status);
    }
    for level in &r.levels {
        let _ = writeln!(out, "H^{}: {}", level.i, level_str(&level.verdict));
    }
}

fn write_s2(out: &mut String, r: &S2Result) {
    let _ = writeln!(out, "S' \\ S up to degree {}: {}", r.degree, points_str(&r.sprime_minus_s));
    let _ = writeln!(out, "S = S' up to degree {}: {}", r.degree, yes_no(r.equal_up_to_degree));
}

fn verdict_str(v: &CmVerdict) -> String {
    match v {
        CmVerdict::CohenMacaulayExact => "CohenMacaulayExact".to_string(),
        CmVerdict::CohenMacaulayUpToBound { bound } => format!("CohenMacaulayUpToBound (bound {bound})"),
        CmVerdict::NotCohenMacaulay { level, j, witness } => format!(
            "NotCohenMacaulay (H^{level} at J = {}, witness {})",
            format_j(j),
            vec_str(&witness.point)
        ),
    }
}

fn write_cm(out: &mut String, v: &CmVerdict, field: FieldSpec, bound: u64) {
    let _ = writeln!(out, "{}", verdict_str(v));
    let _ = writeln!(out, "field {field}, bound {bound}");
}

fn write_gw(out: &mut String, r: &GotoWatanabeReport) {
    let _ = writeln!(out, "S' \\ S up to degree {}: {}", r.degree, points_str(&r.sprime_minus_s));
    let _ = writeln!(out, "k[S'] verdict: {}", verdict_str(&r.sprime_verdict));
    let agreement = match r.agreement {
        Agreement::BothHold => "consistent: S = S' and k[S] is Cohen-Macaulay",
        Agreement::BothFail => "consistent: S != S' and k[S] is not Cohen-Macaulay",
        Agreement::InconclusiveAtBound => "inconclusive at bound",
    };
    let _ = writeln!(out, "{agreement}");
}

fn write_report(out: &mut String, r: &FullReport, generators: &[Vec<i64>]) {
    let p = &r.profile;
    let _ = writeln!(out, "== input");
    let _ = writeln!(out, "generators: {}", points_str(generators));
    let _ = writeln!(
        out,
        "{} distinct generators, homogeneous: {}, toric surface in P4: {}",
        p.num_generators,
        yes_no(p.homogeneous),
        yes_no(p.is_toric_surface_in_p4)
    );
    if let (Some(h), Some(d)) = (&p.grading, p.generator_degree) {
        let _ = writeln!(out, "grading {} with generator degree {d}", vec_str(h));
    }
    let _ = writeln!(out, "== facets");
    write_facets(out, &r.facets);
    let _ = writeln!(out, "== transform");
    write_transform(out, &r.transform);
    let _ = writeln!(out, "== standard");
    write_standard(out, &r.standard);
    let _ = writeln!(out, "== complex");
    write_complex(out, &r.complex);
    let _ = writeln!(out, "== cohomology");
    write_cohomology(out, &r.cohomology);
    let _ = writeln!(out, "== s2");
    write_s2(out, &r.s2);
    if let Some(gw) = &r.gw {
        let _ = writeln!(out, "== gw");
        write_gw(out, gw);
    }
    let _ = writeln!(out, "== verdict");
    write_cm(out, &r.verdict, r.cohomology.field, r.cohomology.bound);
}
