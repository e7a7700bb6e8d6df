//! Output documents and their text, JSON and Markdown renderings.
//!
//! Every document is a plain serde structure. JSON is pretty-printed with a
//! trailing newline, and parsing then re-rendering it gives the same bytes.

use std::fmt::Write as _;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::cone::ConeSpace;
use crate::config::{builtin, ConfigError, InstanceConfig};
use crate::error::Error;
use crate::objects::{hom_objects, HomComputation};
use crate::objects::LadderCertificate;
use crate::tilting::{
    check_sod, fmt_dims, rank_square_identity, stack_exceptional_check, IdentityVerdict, SodReport, GENERATION_NOTE,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Markdown,
}

pub trait Render: Serialize + DeserializeOwned {
    fn text(&self) -> String;
    fn markdown(&self) -> String;

    fn json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Json => self.json(),
            Format::Markdown => self.markdown(),
        }
    }
}

/// `P(1,...,1,m)` spelled out.
pub fn space_name(space: [i64; 2]) -> String {
    let mut w = vec!["1".to_string(); space[0] as usize];
    w.push(space[1].to_string());
    format!("P({})", w.join(","))
}

fn space_pair(space: &ConeSpace) -> [i64; 2] {
    [space.n() as i64, space.m()]
}

/// Graded dimensions in shift notation: `(3, 15, 0)` is `k^3 ⊕ k^15[-1]`.
pub fn graded_string(dims: &[usize]) -> String {
    let parts: Vec<String> = dims
        .iter()
        .enumerate()
        .filter(|(_, &d)| d != 0)
        .map(|(i, &d)| {
            let base = if d == 1 { "k".to_string() } else { format!("k^{d}") };
            if i == 0 {
                base
            } else {
                format!("{base}[-{i}]")
            }
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" ⊕ ")
    }
}

fn flag(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn md_escape(s: &str) -> String {
    s.replace('|', "\\|")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyRow {
    pub twist: i64,
    pub dims: Vec<usize>,
}

/// `dim H^i` of `O_X(d)` or `O_Z(d)` over a range of twists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyTable {
    pub space: [i64; 2],
    pub sheaf: String,
    pub degrees: Vec<usize>,
    pub rows: Vec<CohomologyRow>,
}

pub fn cohomology_table(
    space: &ConeSpace,
    on_z: bool,
    twists: std::ops::RangeInclusive<i64>,
    degree: Option<usize>,
) -> Result<CohomologyTable, Error> {
    let top = if on_z { space.n() - 1 } else { space.n() };
    let degrees: Vec<usize> = match degree {
        Some(i) if i > top => return Err(Error::DegreeOutOfRange { degree: i, max: top }),
        Some(i) => vec![i],
        None => (0..=top).collect(),
    };
    let rows = twists
        .map(|d| {
            let dims = degrees
                .iter()
                .map(|&i| if on_z { space.coh_dim_oz(d, i) } else { space.coh_dim_ox(d, i) })
                .collect::<Result<_, _>>()?;
            Ok(CohomologyRow { twist: d, dims })
        })
        .collect::<Result<_, Error>>()?;
    Ok(CohomologyTable {
        space: space_pair(space),
        sheaf: if on_z { "O_Z" } else { "O_X" }.into(),
        degrees,
        rows,
    })
}

impl Render for CohomologyTable {
    fn text(&self) -> String {
        let mut s = format!("cohomology of {}(d) on {}\n", self.sheaf, space_name(self.space));
        let head: Vec<String> = self.degrees.iter().map(|i| format!("{:>6}", format!("H^{i}"))).collect();
        let _ = writeln!(s, "{:>6}{}", "d", head.join(""));
        for r in &self.rows {
            let cells: Vec<String> = r.dims.iter().map(|d| format!("{d:>6}")).collect();
            let _ = writeln!(s, "{:>6}{}", r.twist, cells.join(""));
        }
        s
    }

    fn markdown(&self) -> String {
        let mut s = format!("## Cohomology of {}(d) on {}\n\n", self.sheaf, space_name(self.space));
        let head: Vec<String> = self.degrees.iter().map(|i| format!("H^{i}")).collect();
        let _ = writeln!(s, "| d | {} |", head.join(" | "));
        let _ = writeln!(s, "|---|{}", "---|".repeat(self.degrees.len()));
        for r in &self.rows {
            let cells: Vec<String> = r.dims.iter().map(usize::to_string).collect();
            let _ = writeln!(s, "| {} | {} |", r.twist, cells.join(" | "));
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomReport {
    pub space: [i64; 2],
    pub source: String,
    pub target: String,
    pub dims: Vec<usize>,
    pub trace: Vec<String>,
    pub ladders: Vec<LadderCertificate>,
}

impl HomReport {
    pub fn new(space: &ConeSpace, source: &str, target: &str, h: HomComputation) -> Self {
        HomReport {
            space: space_pair(space),
            source: source.into(),
            target: target.into(),
            dims: h.dims,
            trace: h.trace,
            ladders: h.ladders,
        }
    }
}

impl Render for HomReport {
    fn text(&self) -> String {
        let mut s = format!(
            "Hom^*({}, {}) on {} = {}\n",
            self.source,
            self.target,
            space_name(self.space),
            graded_string(&self.dims)
        );
        for (i, d) in self.dims.iter().enumerate() {
            let _ = writeln!(s, "deg{i}: {d}");
        }
        if !self.trace.is_empty() {
            s.push_str("trace:\n");
            for t in &self.trace {
                let _ = writeln!(s, "  {t}");
            }
        }
        s
    }

    fn markdown(&self) -> String {
        let mut s = format!(
            "## Hom^*({}, {}) on {}\n\n| degree | dim |\n|---|---|\n",
            self.source,
            self.target,
            space_name(self.space)
        );
        for (i, d) in self.dims.iter().enumerate() {
            let _ = writeln!(s, "| {i} | {d} |");
        }
        if !self.trace.is_empty() {
            s.push_str("\nTrace:\n\n");
            for t in &self.trace {
                let _ = writeln!(s, "- {}", md_escape(t));
            }
        }
        s
    }
}

impl Render for SodReport {
    fn text(&self) -> String {
        let names: Vec<&str> = self.blocks.iter().map(|b| b.name.as_str()).collect();
        let mut s = format!("collection <{}> on {}\n", names.join(", "), space_name(self.space));
        s.push_str("blocks:\n");
        for b in &self.blocks {
            let _ = writeln!(
                s,
                "  {} = {}: rank {}, End^* = {}, {}",
                b.name,
                b.object,
                b.rank,
                fmt_dims(&b.end_dims),
                if b.tilting { "tilting" } else { "not tilting" }
            );
            if b.blocks.summands.len() > 1 {
                let rows: Vec<String> = b.blocks.dims.iter().map(|r| fmt_dims(r)).collect();
                let _ = writeln!(
                    s,
                    "    summand ranks {}, End blocks [{}], total {}",
                    fmt_dims(&b.blocks.ranks),
                    rows.join(", "),
                    b.blocks.total
                );
            }
        }
        s.push_str("pairwise Hom^*:\n");
        for p in &self.matrix {
            let v = match (&p.dims, &p.note) {
                (Some(d), _) => fmt_dims(d),
                (None, Some(n)) => format!("refused: {n}"),
                (None, None) => "refused".into(),
            };
            let _ = writeln!(s, "  ({}, {}): {v}", p.source, p.target);
        }
        let _ = writeln!(s, "note: {}", self.generation);
        match &self.first_violation {
            None => s.push_str("result: PASS\n"),
            Some(v) => {
                let _ = writeln!(s, "result: FAIL ({v})");
            }
        }
        s
    }

    fn markdown(&self) -> String {
        let names: Vec<&str> = self.blocks.iter().map(|b| b.name.as_str()).collect();
        let mut s = format!("## Collection ⟨{}⟩ on {}\n\n", names.join(", "), space_name(self.space));
        s.push_str("| block | object | rank | End^* | tilting |\n|---|---|---|---|---|\n");
        for b in &self.blocks {
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} | {} |",
                b.name,
                md_escape(&b.object),
                b.rank,
                fmt_dims(&b.end_dims),
                b.tilting
            );
        }
        s.push_str("\n| source | target | Hom^* |\n|---|---|---|\n");
        for p in &self.matrix {
            let v = p.dims.as_deref().map_or_else(|| "refused".to_string(), fmt_dims);
            let _ = writeln!(s, "| {} | {} | {v} |", p.source, p.target);
        }
        let _ = writeln!(s, "\n_{}_\n", self.generation);
        match &self.first_violation {
            None => s.push_str("**Result: PASS**\n"),
            Some(v) => {
                let _ = writeln!(s, "**Result: FAIL** ({})", md_escape(v));
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub section: String,
    pub id: String,
    pub source: String,
    pub target: String,
    pub expected: Vec<usize>,
    pub computed: Option<Vec<usize>>,
    pub note: Option<String>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRow {
    pub id: String,
    pub check: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceReport {
    pub instance: String,
    pub space: [i64; 2],
    pub rows: Vec<ReportRow>,
    pub verdicts: Vec<VerdictRow>,
    pub sod: Option<SodReport>,
    pub notes: Vec<String>,
    pub refusals: usize,
    pub passed: bool,
}

type Golden = (&'static str, &'static str, &'static str, &'static str, &'static [usize]);

const P1113_ROWS: &[Golden] = &[
    ("atoms", "atoms-1", "O_X(0)", "O_X(0)", &[1, 0, 0, 0]),
    ("atoms", "atoms-2", "O_X(0)", "O_Z(1)", &[3, 0, 0, 0]),
    ("atoms", "atoms-3", "O_X(0)", "O_Z(2)", &[6, 0, 0, 0]),
    ("atoms", "atoms-4", "O_Z(1)", "O_X(0)", &[0, 6, 0, 0]),
    ("atoms", "atoms-5", "O_Z(2)", "O_X(0)", &[0, 3, 0, 0]),
    ("atoms", "atoms-6", "O_Z(1)", "O_Z(1)", &[1, 10, 0, 0]),
    ("atoms", "atoms-7", "O_Z(1)", "O_Z(2)", &[3, 15, 0, 0]),
    ("atoms", "atoms-8", "O_Z(2)", "O_Z(1)", &[0, 6, 0, 0]),
    ("vanishing", "vanishing-1", "O_X(0)", "F", &[0, 0, 0, 0]),
    ("vanishing", "vanishing-2", "O_X(0)", "G", &[0, 0, 0, 0]),
    ("vanishing", "vanishing-3", "O_X(3)", "F", &[0, 0, 0, 0]),
    ("vanishing", "vanishing-4", "O_X(3)", "G", &[0, 0, 0, 0]),
    ("kernels to atoms", "kernel-atom-1", "F", "O_X(0)", &[9, 0, 0, 0]),
    ("kernels to atoms", "kernel-atom-2", "F", "O_Z(1)", &[18, 0, 0, 0]),
    ("kernels to atoms", "kernel-atom-3", "F", "O_Z(2)", &[30, 0, 0, 0]),
    ("kernels to atoms", "kernel-atom-4", "G", "O_X(0)", &[9, 0, 0, 0]),
    ("kernels to atoms", "kernel-atom-5", "G", "O_Z(1)", &[24, 0, 0, 0]),
    ("kernels to atoms", "kernel-atom-6", "G", "O_Z(2)", &[45, 0, 0, 0]),
    ("End blocks", "end-block-1", "F", "F", &[9, 0, 0, 0]),
    ("End blocks", "end-block-2", "G", "G", &[9, 0, 0, 0]),
    ("End blocks", "end-block-3", "F", "G", &[24, 0, 0, 0]),
    ("End blocks", "end-block-4", "G", "F", &[3, 0, 0, 0]),
];

const P112_ROWS: &[Golden] = &[
    ("End blocks", "end-FS", "F_S", "F_S", &[2, 0, 0]),
    ("vanishing", "vanishing-1", "F_S", "O_Sm2", &[0, 0, 0]),
    ("vanishing", "vanishing-2", "O_S", "O_Sm2", &[0, 0, 0]),
    ("vanishing", "vanishing-3", "O_S", "F_S", &[0, 0, 0]),
];

struct Instance {
    rows: &'static [Golden],
    collection: &'static str,
    sod_expected: &'static str,
    identity_block: &'static str,
    identity_expected: &'static str,
    stack: Option<(i64, i64, &'static str)>,
}

fn instance(name: &str) -> Option<Instance> {
    match name {
        "P1113" => Some(Instance {
            rows: P1113_ROWS,
            collection: "main",
            sod_expected: "pass; End (45, 1, 1); ranks (9, 1, 1)",
            identity_block: "FG",
            identity_expected: "45 = 3^2 + 6^2: holds",
            stack: Some((0, 5, "window 0..5: pass")),
        }),
        "P112" => Some(Instance {
            rows: P112_ROWS,
            collection: "sod",
            sod_expected: "pass; End (1, 2, 1); ranks (1, 2, 1)",
            identity_block: "F_S",
            identity_expected: "2 != 2^2: not applicable",
            stack: None,
        }),
        _ => None,
    }
}

pub fn identity_string(v: &IdentityVerdict, ranks: &[usize]) -> String {
    let squares: Vec<String> = ranks.iter().map(|r| format!("{r}^2")).collect();
    match v {
        IdentityVerdict::Holds { total, .. } => format!("{total} = {}: holds", squares.join(" + ")),
        IdentityVerdict::NotApplicable { total, .. } => {
            format!("{total} != {}: not applicable", squares.join(" + "))
        }
    }
}

/// Failures that stop a report from being produced at all.
#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("unknown instance {0:?}; expected P1113 or P112")]
    UnknownInstance(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Engine(#[from] Error),
}

/// Recomputes every golden row of a builtin instance.
pub fn instance_report(name: &str) -> Result<InstanceReport, ReportError> {
    let inst = instance(name).ok_or_else(|| ReportError::UnknownInstance(name.to_string()))?;
    let cfg = InstanceConfig::parse(builtin(name).expect("builtin exists"))?;
    let space = &cfg.space;
    let mut refusals = 0;
    let mut rows = Vec::new();
    for &(section, id, src, tgt, expected) in inst.rows {
        let a = cfg.object(src)?;
        let b = cfg.object(tgt)?;
        let (computed, note) = match hom_objects(space, &a, &b) {
            Ok(h) => (Some(h.dims), None),
            Err(e) if e.is_refusal() => {
                refusals += 1;
                (None, Some(e.to_string()))
            }
            Err(e) => return Err(e.into()),
        };
        rows.push(ReportRow {
            section: section.into(),
            id: id.into(),
            source: src.into(),
            target: tgt.into(),
            expected: expected.to_vec(),
            pass: computed.as_deref() == Some(expected),
            computed,
            note,
        });
    }

    let mut verdicts = Vec::new();
    let sod = check_sod(space, cfg.collection(inst.collection)?)?;
    let sod_string = format!(
        "{}; End {}; ranks {}",
        if sod.passed { "pass" } else { "fail" },
        fmt_dims(&sod.end_dims()),
        fmt_dims(&sod.ranks())
    );
    let names: Vec<&str> = sod.blocks.iter().map(|b| b.name.as_str()).collect();
    verdicts.push(VerdictRow {
        id: "sod".into(),
        check: format!("semiorthogonal collection <{}>", names.join(", ")),
        pass: sod_string == inst.sod_expected,
        expected: inst.sod_expected.into(),
        computed: sod_string,
    });
    if let Some((lo, hi, expected)) = inst.stack {
        let r = stack_exceptional_check(space, lo, hi)?;
        let computed = format!("window {lo}..{hi}: {}", if r.passed { "pass" } else { "fail" });
        verdicts.push(VerdictRow {
            id: "stack".into(),
            check: format!("exceptional line bundles O({lo}), ..., O({hi}) on the stack"),
            pass: computed == expected,
            expected: expected.into(),
            computed,
        });
    }
    let block = sod
        .blocks
        .iter()
        .find(|b| b.name == inst.identity_block)
        .expect("identity block is part of the collection");
    let verdict = rank_square_identity(&block.blocks);
    let computed = identity_string(&verdict, &block.blocks.ranks);
    verdicts.push(VerdictRow {
        id: "identity".into(),
        check: format!("dim End({}) against the squared summand ranks", block.name),
        pass: computed == inst.identity_expected,
        expected: inst.identity_expected.into(),
        computed,
    });

    let passed = rows.iter().all(|r| r.pass) && verdicts.iter().all(|v| v.pass);
    Ok(InstanceReport {
        instance: name.into(),
        space: space_pair(space),
        rows,
        verdicts,
        sod: Some(sod),
        notes: vec![GENERATION_NOTE.to_string()],
        refusals,
        passed,
    })
}

impl InstanceReport {
    fn counts(&self) -> (usize, usize) {
        let total = self.rows.len() + self.verdicts.len();
        let ok = self.rows.iter().filter(|r| r.pass).count() + self.verdicts.iter().filter(|v| v.pass).count();
        (ok, total)
    }
}

fn computed_string(r: &ReportRow) -> String {
    match (&r.computed, &r.note) {
        (Some(d), _) => graded_string(d),
        (None, Some(n)) => format!("refused ({n})"),
        (None, None) => "refused".into(),
    }
}

impl Render for InstanceReport {
    fn text(&self) -> String {
        let mut s = format!("report {} on {}\n", self.instance, space_name(self.space));
        let mut section = "";
        for r in &self.rows {
            if r.section != section {
                section = &r.section;
                let _ = writeln!(s, "\n[{section}]");
            }
            let pair = format!("Hom^*({}, {})", r.source, r.target);
            let _ = writeln!(
                s,
                "  {:<16} {:<26} computed {:<18} expected {:<18} {}",
                r.id,
                pair,
                computed_string(r),
                graded_string(&r.expected),
                flag(r.pass)
            );
        }
        s.push_str("\n[verdicts]\n");
        for v in &self.verdicts {
            let _ = writeln!(s, "  {:<9} {}", v.id, v.check);
            let _ = writeln!(
                s,
                "            computed {} | expected {} | {}",
                v.computed,
                v.expected,
                flag(v.pass)
            );
        }
        for n in &self.notes {
            let _ = writeln!(s, "\nnote: {n}");
        }
        let (ok, total) = self.counts();
        let _ = writeln!(s, "\nresult: {} ({ok}/{total} checks)", flag(self.passed));
        s
    }

    fn markdown(&self) -> String {
        let mut s = format!("# Report {} on {}\n", self.instance, space_name(self.space));
        let mut section = "";
        for r in &self.rows {
            if r.section != section {
                section = &r.section;
                let _ = writeln!(
                    s,
                    "\n## {section}\n\n| id | pair | computed | expected | status |\n|---|---|---|---|---|"
                );
            }
            let _ = writeln!(
                s,
                "| {} | Hom^*({}, {}) | {} | {} | {} |",
                r.id,
                r.source,
                r.target,
                md_escape(&computed_string(r)),
                graded_string(&r.expected),
                flag(r.pass)
            );
        }
        s.push_str("\n## Verdicts\n\n| id | check | computed | expected | status |\n|---|---|---|---|---|\n");
        for v in &self.verdicts {
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} | {} |",
                v.id,
                md_escape(&v.check),
                md_escape(&v.computed),
                md_escape(&v.expected),
                flag(v.pass)
            );
        }
        for n in &self.notes {
            let _ = writeln!(s, "\n_Note: {n}_");
        }
        let (ok, total) = self.counts();
        let _ = writeln!(s, "\n**Result: {}** ({ok}/{total} checks)", flag(self.passed));
        s
    }
}

/// Parse a JSON rendering back; used to check round trips.
pub fn from_json<T: Render>(s: &str) -> serde_json::Result<T> {
    serde_json::from_str(s)
}
