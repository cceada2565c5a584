//! The verification suite behind `fourfold verify-suite`.

use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use crate::config::AnalysisRequest;
use crate::cover::{CoverGroup, RamificationProfile};
use crate::decomposition::{
    dimension_total, factors, kernel_bigonal, kernel_klein_stagewise, kernel_main, kernel_s4_iii, kernel_s4_iv,
    kernel_s4_stagewise, kernel_s4_v, kernel_trigonal_a4, FactoredCard, KernelValue,
};
use crate::golden;
use crate::monodromy::{search, verify_tuple, SearchMode, SearchOptions, SearchStatus, WitnessFile};
use crate::report::{analyze, genus_cells, profile_sweep};
use crate::symplectic::{
    all_submodules, klein_case_model, cardinality_law_check, degree3_l_count, p2_structure_count, KleinCase,
    SympModule,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    Fast,
    Exhaustive,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteSummary {
    pub scope: Scope,
    pub passed: bool,
    pub failures: usize,
    pub checks: Vec<CheckResult>,
}

impl SuiteSummary {
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "{mark} {:<40} {:>7} ms  {}", c.name, c.millis, c.detail);
        }
        let _ = writeln!(s, "{} checks, {} failures", self.checks.len(), self.failures);
        s
    }
}

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn genus_closed_forms() -> Result<String, String> {
    let mut n = 0;
    for forms in golden::genus_forms() {
        for p in profile_sweep(forms.group, 1, 3) {
            for c in genus_cells(&p, &forms) {
                ensure(c.ok, || format!("{p}: {} is {} but the closed form gives {}", c.column, c.computed, c.expected))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} cells"))
}

fn dimension_identity() -> Result<String, String> {
    let mut n = 0;
    for group in CoverGroup::ALL {
        for p in profile_sweep(group, 1, 3) {
            let f = factors(&p).map_err(|e| format!("{p}: {e}"))?;
            let top = crate::genus::genus_top(&p).map_err(|e| e.to_string())? as u64;
            ensure(dimension_total(&f) == top, || format!("{p}: factors add to {} not {top}", dimension_total(&f)))?;
            n += 1;
        }
    }
    Ok(format!("{n} profiles"))
}

fn s4_kernel_paths() -> Result<String, String> {
    let mut n = 0;
    for p in profile_sweep(CoverGroup::Sym4, 1, 3) {
        if let (Ok(a), Ok(b)) = (kernel_main(&p), kernel_s4_stagewise(&p)) {
            ensure(a == b.product, || format!("{p}: closed form {a} but stagewise {}", b.product))?;
            n += 1;
        }
    }
    ensure(n > 0, || "no profile evaluated".into())?;
    Ok(format!("{n} profiles"))
}

fn klein_kernel_paths() -> Result<String, String> {
    let mut n = 0;
    for p in profile_sweep(CoverGroup::Klein, 2, 4) {
        if let (Ok(a), Ok(b)) = (kernel_main(&p), kernel_klein_stagewise(&p)) {
            ensure(a == b, || format!("{p}: closed form {a} but stagewise {b}"))?;
            n += 1;
        }
    }
    ensure(n > 0, || "no profile evaluated".into())?;
    Ok(format!("{n} profiles"))
}

fn conditional_pairs() -> Result<String, String> {
    let both = |name: &str, v: Result<KernelValue, crate::decomposition::DecompError>| -> Result<(), String> {
        match v {
            Ok(KernelValue::Conditional { alternatives, .. }) => {
                ensure(alternatives.len() == 2, || format!("{name}: {} alternatives", alternatives.len()))
            }
            Ok(KernelValue::Exact(_)) => Err(format!("{name}: expected a conditional value")),
            Err(e) => Err(format!("{name}: {e}")),
        }
    };
    let d4 = RamificationProfile::new(
        CoverGroup::Dihedral8,
        1,
        &[(crate::cover::Symbol::Alpha, 0), (crate::cover::Symbol::Gamma1, 0), (crate::cover::Symbol::Delta, 0)],
    )
    .map_err(|e| e.to_string())?;
    both("bigonal", kernel_bigonal(&d4, None))?;
    let a4 = RamificationProfile::new(CoverGroup::Alt4, 1, &[(crate::cover::Symbol::Beta, 2)]).map_err(|e| e.to_string())?;
    both("A4 trigonal", kernel_trigonal_a4(&a4, None))?;
    let s4 = RamificationProfile::sym4(1, 2, 1, 0, 0);
    both("S4 iii", kernel_s4_iii(&s4, None))?;
    both("S4 iv", kernel_s4_iv(&s4, None))?;
    both("S4 v", kernel_s4_v(&s4, None))?;
    Ok("5 flag-dependent kernels emit both labelled values".into())
}

fn cardinality_law(cases: &[(u32, u32)]) -> Result<String, String> {
    let mut n = 0;
    for &(g, d) in cases {
        let m = SympModule::new(g, d).map_err(|e| e.to_string())?;
        for s in all_submodules(m) {
            let law = cardinality_law_check(&s);
            ensure(law.holds(), || format!("d={d} g={g}: {law:?}"))?;
            n += 1;
        }
    }
    Ok(format!("{n} submodules"))
}

fn symplectic_small() -> Result<String, String> {
    cardinality_law(&[(1, 2), (2, 2), (1, 3)])
}

fn symplectic_full() -> Result<String, String> {
    cardinality_law(&[(1, 2), (2, 2), (3, 2), (1, 3), (2, 3)])
}

fn klein_intersections(genera: &[u32]) -> Result<String, String> {
    for &g in genera {
        let ia = klein_case_model(KleinCase::Ia, g, 0, 0, 0).map_err(|e| e.to_string())?;
        let ib = klein_case_model(KleinCase::Ib, g, 0, 0, 0).map_err(|e| e.to_string())?;
        ensure(ia.intersection == [2 * g - 4; 3], || format!("Ia at g={g}: {:?}", ia.intersection))?;
        ensure(ib.intersection == [2 * g - 2; 3], || format!("Ib at g={g}: {:?}", ib.intersection))?;
    }
    Ok(format!("g in {genera:?}"))
}

fn klein_intersections_small() -> Result<String, String> {
    klein_intersections(&[2])
}

fn klein_intersections_full() -> Result<String, String> {
    klein_intersections(&[2, 3])
}

fn torsion_bookkeeping() -> Result<String, String> {
    for g in 0..=5u32 {
        for omega in (0..=10u32).step_by(2) {
            if g == 0 && omega == 0 {
                continue;
            }
            let p = p2_structure_count(g, omega).map_err(|e| e.to_string())?;
            let want = FactoredCard::pow2((2 * g + omega - 2) as u64);
            ensure(p.cardinality() == want, || format!("g={g} ω={omega}: {} vs {want}", p.cardinality()))?;
        }
    }
    for g in 0..=3u32 {
        for a in 0..=5u32 {
            let e = 2 * g + a.saturating_sub(1);
            let want = FactoredCard::new(0, e as u64);
            ensure(degree3_l_count(g, a) == want, || format!("g={g} α={a}"))?;
        }
    }
    Ok("P[2] and L counts".into())
}

fn round_trip(p: &RamificationProfile) -> Result<(), String> {
    let o = search(p, &SearchOptions::default());
    let t = o.witness.ok_or_else(|| format!("{p}: no witness ({:?})", o.status))?;
    let file = WitnessFile::new(p, SearchMode::GaloisImage, &t);
    let text = serde_json::to_string(&file).map_err(|e| e.to_string())?;
    let back: WitnessFile = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    ensure(back == file, || format!("{p}: witness file changed in a round trip"))?;
    let check = back.verify().map_err(|e| e.to_string())?;
    ensure(check.ok(), || format!("{p}: {:?}", check.diagnostics))?;
    for x in crate::perm::all_perms() {
        let c = t.conjugate_by(&x);
        let v = verify_tuple(&c, p, SearchMode::TransitiveImage).map_err(|e| e.to_string())?;
        ensure(v.ok(), || format!("{p}: conjugate by {x} fails: {:?}", v.diagnostics))?;
    }
    Ok(())
}

fn monodromy_round_trips() -> Result<String, String> {
    use crate::cover::Symbol::*;
    let profiles = vec![
        RamificationProfile::sym4(0, 2, 0, 0, 2),
        RamificationProfile::sym4(0, 1, 1, 0, 1),
        RamificationProfile::new(CoverGroup::Klein, 0, &[(S, 2), (T, 2), (R, 2)]).map_err(|e| e.to_string())?,
        RamificationProfile::new(CoverGroup::Cyclic4, 0, &[(Delta, 2), (Gamma, 2)]).map_err(|e| e.to_string())?,
        RamificationProfile::new(CoverGroup::Dihedral8, 0, &[(Alpha, 2), (Gamma1, 2), (Delta, 2)]).map_err(|e| e.to_string())?,
        RamificationProfile::new(CoverGroup::Alt4, 0, &[(Beta, 2), (Gamma1, 1)]).map_err(|e| e.to_string())?,
        RamificationProfile::new(CoverGroup::Sym3, 0, &[(Alpha, 1), (Beta, 2)]).map_err(|e| e.to_string())?,
        RamificationProfile::unramified(CoverGroup::Sym4, 2),
    ];
    for p in &profiles {
        round_trip(p)?;
    }
    Ok(format!("{} profiles, 24 conjugates each", profiles.len()))
}

fn empty_profile() -> Result<String, String> {
    let p = RamificationProfile::unramified(CoverGroup::Sym4, 2);
    let r = analyze(&AnalysisRequest::new(p)).map_err(|e| e.to_string())?;
    ensure(r.genus_table.top_genus == 25, || format!("top genus {}", r.genus_table.top_genus))?;
    Ok("unramified S4 cover of a genus-2 curve".into())
}

fn search_status(p: &RamificationProfile) -> SearchStatus {
    search(p, &SearchOptions::default()).status
}

fn families_search() -> Result<String, String> {
    let fam = golden::families();
    for row in &fam.row {
        let p = row.profile(row.gamma_min);
        ensure(search_status(&p) == SearchStatus::Witness, || format!("case {}: no witness at {p}", row.case))?;
    }
    for a in &fam.absent {
        let p = a.profile();
        let s = search_status(&p);
        ensure(s == SearchStatus::ExhaustedNone, || format!("case {}: {s:?} at {p}", a.case))?;
    }
    for row in golden::one_param() {
        let p = row.profile();
        ensure(search_status(&p) == SearchStatus::Witness, || format!("one-parameter case {}: no witness", row.case))?;
    }
    Ok(format!("{} families, {} exclusions", fam.row.len(), fam.absent.len()))
}

fn checks(scope: Scope) -> Vec<(&'static str, Check)> {
    let mut v: Vec<(&'static str, Check)> = vec![
        ("genus tables match closed forms", genus_closed_forms),
        ("dimension identity", dimension_identity),
        ("S4 kernel: closed form vs stages", s4_kernel_paths),
        ("Klein kernel: closed form vs stages", klein_kernel_paths),
        ("conditional kernels carry both values", conditional_pairs),
        ("torsion bookkeeping", torsion_bookkeeping),
        ("monodromy round trips", monodromy_round_trips),
        ("empty profile smoke", empty_profile),
    ];
    match scope {
        Scope::Fast => {
            v.push(("symplectic cardinality law (small)", symplectic_small));
            v.push(("unramified Klein intersections (g=2)", klein_intersections_small));
        }
        Scope::Exhaustive => {
            v.push(("symplectic cardinality law (all)", symplectic_full));
            v.push(("unramified Klein intersections (g=2,3)", klein_intersections_full));
            v.push(("family realizability and exclusions", families_search));
        }
    }
    v
}

/// Runs every check of `scope` and collects the outcomes.
pub fn verify_suite(scope: Scope) -> SuiteSummary {
    let results: Vec<CheckResult> = checks(scope)
        .into_iter()
        .map(|(name, f)| {
            let start = Instant::now();
            let r = f();
            let millis = start.elapsed().as_millis();
            let (passed, detail) = match r {
                Ok(d) => (true, d),
                Err(e) => (false, e),
            };
            CheckResult { name: name.to_string(), passed, detail, millis }
        })
        .collect();
    let failures = results.iter().filter(|c| !c.passed).count();
    SuiteSummary { scope, passed: failures == 0, failures, checks: results }
}
