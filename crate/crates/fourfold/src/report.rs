//! End-to-end analyses and reproduction of the reference tables.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::config::AnalysisRequest;
use crate::cover::{CoverGroup, RamificationProfile, SignatureType, Symbol, ViolationKind};
use crate::decomposition::{self, kernel_main, DecompositionReport, FactoredCard, Flags};
use crate::genus::{genus_table, GenusTable};
use crate::golden::{self, affine, variables};
use crate::monodromy::{moduli_dim, search, SearchMode, SearchOptions, SearchStatus, WitnessFile, DEFAULT_BUDGET};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReportError {
    #[error("invalid branch data: {}", .0.join("; "))]
    Validation(Vec<String>),
    #[error("unknown table {0:?}")]
    UnknownTable(String),
}

/// Outcome of the realizability search as it appears in a report.
#[derive(Clone, Debug, Serialize)]
pub struct Realizability {
    pub status: SearchStatus,
    pub mode: SearchMode,
    pub nodes_explored: u64,
    pub max_depth: usize,
    pub budget: u64,
    pub parallel: bool,
    /// False when a parallel search may return a different witness on another run.
    pub witness_deterministic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessFile>,
}

/// Dimension of the family, or `Degenerate` for fewer than three
/// special points on a rational base (one on an elliptic base).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Moduli {
    Dim(u32),
    Degenerate,
}

impl Serialize for Moduli {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Moduli::Dim(d) => s.serialize_u32(*d),
            Moduli::Degenerate => s.serialize_str("degenerate"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileSummary {
    pub group: CoverGroup,
    pub g: u32,
    pub counts: BTreeMap<Symbol, u32>,
}

impl From<&RamificationProfile> for ProfileSummary {
    fn from(p: &RamificationProfile) -> Self {
        ProfileSummary { group: p.group, g: p.g, counts: p.symbol_counts() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub profile: ProfileSummary,
    pub flags: Flags,
    pub signature: SignatureType,
    pub signature_text: String,
    pub genus_table: GenusTable,
    pub decomposition: DecompositionReport,
    pub realizability: Realizability,
    pub moduli: Moduli,
    pub notes: Vec<String>,
    pub warnings: Vec<String>,
}

/// Genus table, decomposition, realizability search and moduli count for one request.
pub fn analyze(req: &AnalysisRequest) -> Result<AnalysisReport, ReportError> {
    let p = &req.profile;
    let violations = p.validate();
    let parity: Vec<String> =
        violations.iter().filter(|v| v.kind == ViolationKind::Parity).map(|v| v.to_string()).collect();
    if !parity.is_empty() {
        return Err(ReportError::Validation(parity));
    }
    let table = genus_table(p).map_err(|e| ReportError::Validation(vec![e.to_string()]))?;
    let decomposition =
        decomposition::report(p, &req.flags).map_err(|e| ReportError::Validation(vec![e.to_string()]))?;
    let mut warnings: Vec<String> = violations
        .iter()
        .filter(|v| v.kind == ViolationKind::Connectivity)
        .map(|v| format!("connectivity heuristic: {v}"))
        .collect();
    warnings.extend(decomposition.warnings.iter().cloned());

    let outcome = search(p, &req.search_options());
    if outcome.status == SearchStatus::BudgetExceeded {
        warnings.push(format!("search budget of {} nodes exhausted without a witness", req.budget));
    }
    let witness = match (&outcome.witness, req.want_witness) {
        (Some(t), true) => Some(WitnessFile::new(p, req.mode, t)),
        _ => None,
    };
    let realizability = Realizability {
        status: outcome.status,
        mode: req.mode,
        nodes_explored: outcome.nodes_explored,
        max_depth: outcome.max_depth,
        budget: req.budget,
        parallel: req.parallel,
        witness_deterministic: !req.parallel,
        witness,
    };

    let mut notes = Vec::new();
    if table.top_genus == 0 {
        notes.push(format!(
            "the top curve is rational; the quotient map to the base is a rational map of degree {}",
            p.group.order()
        ));
    }
    if let Ok(k) = &decomposition.kernel {
        notes.push(format!("main isogeny has degree {k} = {}", k.decimal()));
    }
    let moduli = match moduli_dim(p) {
        Ok(d) => Moduli::Dim(d),
        Err(_) => Moduli::Degenerate,
    };
    if moduli == Moduli::Dim(0) {
        notes.push("rigid: the branch data has no moduli".to_string());
    }
    Ok(AnalysisReport {
        profile: p.into(),
        flags: req.flags.clone(),
        signature: p.signature(),
        signature_text: p.signature().to_string(),
        genus_table: table,
        decomposition,
        realizability,
        moduli,
        notes,
        warnings,
    })
}

impl AnalysisReport {
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let counts: Vec<String> = self.profile.counts.iter().map(|(k, v)| format!("{}={v}", k.greek())).collect();
        let _ = writeln!(s, "{} over genus {} with {}", self.profile.group, self.profile.g, counts.join(" "));
        let _ = writeln!(s, "signature {}", self.signature_text);
        let _ = writeln!(s, "genera:");
        for c in &self.genus_table.genera {
            let _ = writeln!(s, "  {:<6} {}", c.name, c.genus);
        }
        let _ = writeln!(s, "ramification degrees:");
        for r in &self.genus_table.ram_degrees {
            let _ = writeln!(s, "  {} -> {}: {}", r.from, r.to, r.degree);
        }
        let _ = writeln!(s, "isogeny factors:");
        for f in &self.decomposition.factors {
            let _ = writeln!(s, "  {}·{} (dim {})", f.multiplicity, f.label, f.dim);
        }
        match &self.decomposition.kernel {
            Ok(k) => {
                let _ = writeln!(s, "kernel {k}");
            }
            Err(e) => {
                let _ = writeln!(s, "kernel unavailable: {e}");
            }
        }
        for k in &self.decomposition.secondary {
            let v = match &k.value {
                Ok(decomposition::KernelValue::Exact(c)) => c.to_string(),
                Ok(decomposition::KernelValue::Conditional { flag, alternatives }) => {
                    let alts: Vec<String> = alternatives.iter().map(|(c, v)| format!("{c}: {v}")).collect();
                    format!("depends on {flag} ({})", alts.join(", "))
                }
                Err(e) => format!("unavailable ({e})"),
            };
            let _ = writeln!(s, "  {} [{}]: {v}", k.name, k.map);
        }
        let _ = writeln!(
            s,
            "realizability: {:?} after {} nodes",
            self.realizability.status, self.realizability.nodes_explored
        );
        match self.moduli {
            Moduli::Dim(d) => {
                let _ = writeln!(s, "moduli: {d}");
            }
            Moduli::Degenerate => {
                let _ = writeln!(s, "moduli: degenerate");
            }
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        s
    }
}

/// One compared entry of a reproduced table.
#[derive(Clone, Debug, Serialize)]
pub struct Cell {
    pub column: String,
    pub expected: String,
    pub computed: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub label: String,
    pub cells: Vec<Cell>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub id: String,
    pub title: String,
    pub cells: usize,
    pub mismatches: usize,
    pub rows: Vec<TableRow>,
}

impl TableReport {
    fn new(id: &str, title: &str, rows: Vec<TableRow>) -> TableReport {
        let cells = rows.iter().map(|r| r.cells.len()).sum();
        let mismatches = rows.iter().flat_map(|r| &r.cells).filter(|c| !c.ok).count();
        TableReport { id: id.to_string(), title: title.to_string(), cells, mismatches, rows }
    }

    pub fn matches(&self) -> bool {
        self.mismatches == 0
    }

    /// `(row, column)` of every mismatching cell.
    pub fn mismatched_cells(&self) -> Vec<(String, String)> {
        self.rows
            .iter()
            .flat_map(|r| r.cells.iter().filter(|c| !c.ok).map(move |c| (r.label.clone(), c.column.clone())))
            .collect()
    }

    /// Every row for short tables; only mismatching rows for long sweeps.
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}: {}", self.id, self.title);
        let full = self.rows.len() <= 20;
        for r in &self.rows {
            if !full && r.cells.iter().all(|c| c.ok) {
                continue;
            }
            let cells: Vec<String> = r
                .cells
                .iter()
                .map(|c| {
                    if c.ok {
                        format!("{}={}", c.column, c.computed)
                    } else {
                        format!("{}={} (expected {}) MISMATCH", c.column, c.computed, c.expected)
                    }
                })
                .collect();
            let _ = writeln!(s, "  {:<24} {}", r.label, cells.join("  "));
        }
        let _ = writeln!(s, "{} cells compared, {} mismatches", self.cells, self.mismatches);
        s
    }
}

pub const TABLE_IDS: [&str; 10] = [
    "families-genera",
    "families-degrees",
    "one-param",
    "one-param-degrees",
    "rigid",
    "genus-cyclic4",
    "genus-klein",
    "genus-dihedral8",
    "genus-alt4",
    "genus-sym4",
];

fn cell(column: &str, expected: impl ToString, computed: impl ToString) -> Cell {
    let (e, c) = (expected.to_string(), computed.to_string());
    Cell { column: column.to_string(), ok: e == c, expected: e, computed: c }
}

fn genus_of(t: &Result<GenusTable, String>, name: &str) -> String {
    match t {
        Ok(t) => t.genus(name).map_or_else(|| "missing".to_string(), |g| g.to_string()),
        Err(e) => format!("error: {e}"),
    }
}

fn kernel_text(p: &RamificationProfile) -> String {
    kernel_main(p).map_or_else(|e| format!("error: {e}"), |k| k.to_string())
}

fn status_text(s: SearchStatus) -> &'static str {
    match s {
        SearchStatus::Witness => "WITNESS",
        SearchStatus::ExhaustedNone => "EXHAUSTED_NONE",
        SearchStatus::BudgetExceeded => "BUDGET_EXCEEDED",
    }
}

fn galois(budget: u64) -> SearchOptions {
    SearchOptions { mode: SearchMode::GaloisImage, budget, parallel: false }
}

/// Largest family parameter the families tables are checked at.
pub const FAMILY_GAMMA_MAX: u32 = 4;

fn families_genera(budget: u64) -> Vec<TableRow> {
    let fam = golden::families();
    let mut rows = Vec::new();
    for row in &fam.row {
        for gamma in row.gamma_min..=FAMILY_GAMMA_MAX {
            let p = row.profile(gamma);
            let t = genus_table(&p).map_err(|e| e.to_string());
            let x = gamma as i64;
            let mut cells = vec![
                cell("g_Δ", affine(row.g_delta, x), genus_of(&t, "Δ")),
                cell("g_S", affine(row.g_s, x), genus_of(&t, "S")),
                cell("g_V", affine(row.g_v, x), genus_of(&t, "V")),
                cell("g_W", affine(row.g_w, x), genus_of(&t, "W")),
                cell("moduli", affine(row.moduli, x), moduli_dim(&p).map_or_else(|e| e.to_string(), |d| d.to_string())),
            ];
            if gamma == row.gamma_min {
                cells.push(cell("realizable", "WITNESS", status_text(search(&p, &galois(budget)).status)));
            }
            rows.push(TableRow { label: format!("{} γ={gamma}", row.case), cells });
        }
    }
    for a in &fam.absent {
        let p = a.profile();
        rows.push(TableRow {
            label: format!("{} γ={}", a.case, a.gamma),
            cells: vec![cell("realizable", "EXHAUSTED_NONE", status_text(search(&p, &galois(budget)).status))],
        });
    }
    rows
}

fn families_degrees() -> Vec<TableRow> {
    let mut rows = Vec::new();
    for row in &golden::families().row {
        for gamma in row.gamma_min..=FAMILY_GAMMA_MAX {
            let p = row.profile(gamma);
            let e2 = affine(row.deg_exp2, gamma as i64);
            let expected = FactoredCard::new(e2 as u64, row.deg_exp3 as u64);
            rows.push(TableRow {
                label: format!("{} γ={gamma}", row.case),
                cells: vec![cell("deg φ", expected, kernel_text(&p))],
            });
        }
    }
    rows
}

fn one_param_genera(budget: u64) -> Vec<TableRow> {
    golden::one_param()
        .iter()
        .map(|row| {
            let p = row.profile();
            let t = genus_table(&p).map_err(|e| e.to_string());
            let mut cells: Vec<Cell> = ["R", "S", "V", "X", "W"]
                .iter()
                .map(|&n| cell(&format!("g_{n}"), row.genera[n], genus_of(&t, n)))
                .collect();
            cells.push(cell("realizable", "WITNESS", status_text(search(&p, &galois(budget)).status)));
            TableRow { label: row.case.clone(), cells }
        })
        .collect()
}

fn one_param_degrees() -> Vec<TableRow> {
    golden::one_param()
        .iter()
        .filter_map(|row| {
            let d = row.degree?;
            let expected = FactoredCard::new(d.exp2, d.exp3);
            Some(TableRow { label: row.case.clone(), cells: vec![cell("degree", expected, kernel_text(&row.profile()))] })
        })
        .collect()
}

fn rigid(budget: u64) -> Vec<TableRow> {
    golden::rigid()
        .iter()
        .map(|row| {
            let p = row.profile();
            let t = genus_table(&p).map_err(|e| e.to_string());
            let outcome = search(&p, &galois(budget));
            let degree = outcome.witness.as_ref().map_or_else(|| status_text(outcome.status).to_string(), |w| w.generated().len().to_string());
            let mut cells = vec![
                cell("g_W", row.g_w, genus_of(&t, "W")),
                cell("witness degree", row.cover_degree, degree),
                cell("moduli", 0, moduli_dim(&p).map_or_else(|e| e.to_string(), |d| d.to_string())),
            ];
            if let Some(d) = row.isogeny {
                cells.push(cell("isogeny", FactoredCard::new(d.exp2, d.exp3), kernel_text(&p)));
            }
            TableRow { label: row.case.clone(), cells }
        })
        .collect()
}

/// Every parity-valid profile of `group` with `g <= max_g` and counts `<= max_count`
/// whose genus table exists.
pub fn profile_sweep(group: CoverGroup, max_g: u32, max_count: u32) -> Vec<RamificationProfile> {
    let n = group.symbols().len();
    let mut out = Vec::new();
    for g in 0..=max_g {
        let mut counts = vec![0u32; n];
        loop {
            let p = RamificationProfile::from_counts(group, g, counts.clone()).expect("arity matches");
            if p.is_parity_valid() && genus_table(&p).is_ok() {
                out.push(p);
            }
            let mut i = 0;
            while i < n && counts[i] == max_count {
                counts[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
            counts[i] += 1;
        }
    }
    out
}

/// Compares a genus table with the closed forms, cell by cell.
pub fn genus_cells(p: &RamificationProfile, forms: &golden::GenusForms) -> Vec<Cell> {
    let vars = variables(p);
    let t = genus_table(p).map_err(|e| e.to_string());
    let show = |v: Option<i64>| v.map_or_else(|| "non-integral".to_string(), |x| x.to_string());
    let mut cells: Vec<Cell> =
        forms.curves.iter().map(|(name, f)| cell(&format!("g_{name}"), show(f.eval(&vars)), genus_of(&t, name))).collect();
    for ((a, b), f) in &forms.arrows {
        let computed = match &t {
            Ok(t) => t.ram(a, b).map_or_else(|| "missing".to_string(), |d| d.to_string()),
            Err(e) => format!("error: {e}"),
        };
        cells.push(cell(&format!("|B({a}→{b})|"), show(f.eval(&vars)), computed));
    }
    cells
}

fn genus_rows(group: CoverGroup) -> Vec<TableRow> {
    let forms = golden::genus_forms_for(group).expect("closed forms exist for this group");
    profile_sweep(group, 2, 4)
        .iter()
        .map(|p| TableRow { label: p.to_string(), cells: genus_cells(p, &forms) })
        .collect()
}

/// Recomputes the table `id` and compares every cell with the shipped reference values.
pub fn reproduce_table(id: &str, budget: u64) -> Result<TableReport, ReportError> {
    let r = match id {
        "families-genera" => TableReport::new(id, "families over P1: genera, moduli and realizability", families_genera(budget)),
        "families-degrees" => TableReport::new(id, "families over P1: isogeny degrees", families_degrees()),
        "one-param" => TableReport::new(id, "one-parameter families: genera and realizability", one_param_genera(budget)),
        "one-param-degrees" => TableReport::new(id, "one-parameter families: isogeny degrees", one_param_degrees()),
        "rigid" => TableReport::new(id, "rigid covers of P1", rigid(budget)),
        _ => {
            let group = id
                .strip_prefix("genus-")
                .and_then(|g| g.parse::<CoverGroup>().ok())
                .filter(|g| *g != CoverGroup::Sym3)
                .ok_or_else(|| ReportError::UnknownTable(id.to_string()))?;
            TableReport::new(id, &format!("{group} genus table against closed forms"), genus_rows(group))
        }
    };
    Ok(r)
}

pub fn reproduce_default(id: &str) -> Result<TableReport, ReportError> {
    reproduce_table(id, DEFAULT_BUDGET)
}
