//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! The process exits non-zero if any criterion fails for a reason other than
//! the documented divergences of the reference tables listed in `KNOWN`.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use fourfold::cover::{CoverGroup, RamificationProfile};
use fourfold::decomposition::{
    self, dimension_total, factors, kernel_bigonal, kernel_main, kernel_s4_iii, kernel_s4_iv, kernel_s4_stagewise,
    kernel_s4_v, kernel_trigonal_a4, FactoredCard, Flags, KernelValue,
};
use fourfold::genus::genus_table;
use fourfold::golden::genus_forms_for;
use fourfold::report::{genus_cells, reproduce_table, TableReport};
use fourfold::symplectic::{
    all_submodules, klein_case_model, cardinality_law_check, degree3_l_count, p2_structure_count, KleinCase,
    SympModule,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const SAMPLES: usize = 200;
const BUDGET: u64 = 100_000_000;

/// Cells of the reference tables that disagree with the computation; see README.
const KNOWN: [(&str, &str, &str); 3] =
    [("one-param", "X", "g_S"), ("one-param-degrees", "II", "degree"), ("one-param-degrees", "VI", "degree")];

struct Outcome {
    ok: bool,
    detail: String,
    /// Mismatching cells, as (table, row, column).
    cells: Vec<(String, String, String)>,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { ok: true, detail: detail.into(), cells: Vec::new() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { ok: false, detail: detail.into(), cells: Vec::new() }
}

fn random_profiles(group: CoverGroup, rng: &mut StdRng) -> Vec<RamificationProfile> {
    let n = group.symbols().len();
    let mut out = Vec::new();
    while out.len() < SAMPLES {
        let g = rng.random_range(0..=5);
        let counts: Vec<u32> = (0..n).map(|_| rng.random_range(0..=6)).collect();
        let p = RamificationProfile::from_counts(group, g, counts).unwrap();
        if p.is_valid() && genus_table(&p).is_ok() {
            out.push(p);
        }
    }
    out
}

const TABLE_GROUPS: [CoverGroup; 5] =
    [CoverGroup::Cyclic4, CoverGroup::Klein, CoverGroup::Dihedral8, CoverGroup::Alt4, CoverGroup::Sym4];

fn genus_tables() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x6e75);
    let mut cells = 0;
    for group in TABLE_GROUPS {
        let forms = genus_forms_for(group).unwrap();
        for p in random_profiles(group, &mut rng) {
            for c in genus_cells(&p, &forms) {
                if !c.ok {
                    return fail(format!("{p}: {} = {} but closed form gives {}", c.column, c.computed, c.expected));
                }
                cells += 1;
            }
        }
    }
    pass(format!("{cells} cells over {} profiles", 5 * SAMPLES))
}

fn dimension_identity() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x6e75);
    for group in CoverGroup::ALL {
        for p in random_profiles(group, &mut rng) {
            let f = factors(&p).unwrap();
            let top = genus_table(&p).unwrap().top_genus as u64;
            if dimension_total(&f) != top {
                return fail(format!("{p}: Σ mult·dim = {} but g_W = {top}", dimension_total(&f)));
            }
        }
    }
    pass(format!("{} profiles over six groups", 6 * SAMPLES))
}

fn kernel_consistency() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5334);
    for p in random_profiles(CoverGroup::Sym4, &mut rng) {
        let closed = match kernel_main(&p) {
            Ok(k) => k,
            Err(e) => return fail(format!("{p}: {e}")),
        };
        let stages = match kernel_s4_stagewise(&p) {
            Ok(s) => s,
            Err(e) => return fail(format!("{p}: {e}")),
        };
        if closed != stages.product {
            return fail(format!("{p}: closed form {closed}, stagewise {}", stages.product));
        }
    }
    pass(format!("{SAMPLES} SYM4 profiles"))
}

fn table_outcome(tables: &[TableReport]) -> Outcome {
    let cells: Vec<(String, String, String)> = tables
        .iter()
        .flat_map(|t| t.mismatched_cells().into_iter().map(move |(r, c)| (t.id.clone(), r, c)))
        .collect();
    let total: usize = tables.iter().map(|t| t.cells).sum();
    let ids: Vec<&str> = tables.iter().map(|t| t.id.as_str()).collect();
    if cells.is_empty() {
        pass(format!("{total} cells in {}", ids.join(", ")))
    } else {
        let listed: Vec<String> = cells.iter().map(|(t, r, c)| format!("{t}/{r}/{c}")).collect();
        Outcome { ok: false, detail: format!("{} of {total} cells differ: {}", cells.len(), listed.join(", ")), cells }
    }
}

fn tables(ids: &[&str]) -> Vec<TableReport> {
    ids.iter().map(|id| reproduce_table(id, BUDGET).unwrap()).collect()
}

fn families() -> Outcome {
    table_outcome(&tables(&["families-genera", "families-degrees"]))
}

fn one_param() -> Outcome {
    table_outcome(&tables(&["one-param", "one-param-degrees"]))
}

fn rigid() -> Outcome {
    table_outcome(&tables(&["rigid"]))
}

fn genus_seven() -> Outcome {
    let t = genus_table(&RamificationProfile::sym4(0, 2, 0, 0, 2)).unwrap();
    let want = [("W", 7), ("C", 3), ("Z", 3), ("Y", 3), ("U", 1), ("S", 1), ("V", 1), ("X", 1), ("Δ", 1), ("R", 0)];
    for (name, g) in want {
        if t.genus(name) != Some(g) {
            return fail(format!("g_{name} = {:?}, expected {g}", t.genus(name)));
        }
    }
    pass("ten genera match")
}

fn symplectic() -> Outcome {
    let mut n = 0;
    for (g, d) in [(1, 2), (2, 2), (3, 2), (1, 3), (2, 3)] {
        let m = SympModule::new(g, d).unwrap();
        for s in all_submodules(m) {
            let law = cardinality_law_check(&s);
            let total = (d as u64).pow(2 * g);
            if s.len() * s.orthogonal().len() != total || !law.holds() || s.orthogonal().orthogonal() != s {
                return fail(format!("d={d} g={g}: {law:?}"));
            }
            n += 1;
        }
    }
    for g in [2u32, 3] {
        let ia = klein_case_model(KleinCase::Ia, g, 0, 0, 0).unwrap();
        let ib = klein_case_model(KleinCase::Ib, g, 0, 0, 0).unwrap();
        if ia.intersection != [2 * g - 4; 3] || ib.intersection != [2 * g - 2; 3] {
            return fail(format!("g_T={g}: Ia {:?}, Ib {:?}", ia.intersection, ib.intersection));
        }
    }
    pass(format!("{n} submodules; unramified intersections at g_T = 2, 3"))
}

fn torsion() -> Outcome {
    for g in 0..=5u32 {
        for omega in (0..=10u32).step_by(2) {
            if g == 0 && omega == 0 {
                continue;
            }
            let got = p2_structure_count(g, omega).unwrap().cardinality();
            if got != FactoredCard::pow2((2 * g + omega - 2) as u64) {
                return fail(format!("|P[2]| at g={g}, ω={omega}: {got}"));
            }
        }
    }
    for g in 0..=3u32 {
        for a in 0..=5u32 {
            let e = if a <= 1 { 2 * g } else { 2 * g + a - 1 };
            if degree3_l_count(g, a) != FactoredCard::new(0, e as u64) {
                return fail(format!("|L| at g={g}, α={a}"));
            }
        }
    }
    pass("P[2] for g ≤ 5, ω ≤ 10; L for g ≤ 3, α ≤ 5")
}

/// Every flag-dependent kernel reports both candidates, labelled, and a
/// supplied flag selects exactly the matching candidate.
fn conditional_contract() -> Outcome {
    type Eval = fn(&RamificationProfile, Option<bool>) -> Result<KernelValue, decomposition::DecompError>;
    let bool_kernels: [(&str, CoverGroup, Eval); 4] = [
        ("bigonal", CoverGroup::Dihedral8, kernel_bigonal),
        ("A4 trigonal", CoverGroup::Alt4, kernel_trigonal_a4),
        ("S4 iii", CoverGroup::Sym4, kernel_s4_iii),
        ("S4 iv", CoverGroup::Sym4, kernel_s4_iv),
    ];
    let mut rng = StdRng::seed_from_u64(0xf1a9);
    let mut conditional = 0;
    for (name, group, eval) in bool_kernels {
        for p in random_profiles(group, &mut rng) {
            let Ok(v) = eval(&p, None) else { continue };
            if let KernelValue::Conditional { alternatives, .. } = v {
                if alternatives.len() != 2 || alternatives[0].0 == alternatives[1].0 {
                    return fail(format!("{name} at {p}: {alternatives:?}"));
                }
                for (flag, (_, value)) in [true, false].into_iter().zip(&alternatives) {
                    if eval(&p, Some(flag)).ok().and_then(|k| k.exact()) != Some(*value) {
                        return fail(format!("{name} at {p}: flag {flag} does not select {value}"));
                    }
                }
                conditional += 1;
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(0x2e7a);
    for p in random_profiles(CoverGroup::Sym4, &mut rng) {
        if let Ok(KernelValue::Conditional { alternatives, .. }) = kernel_s4_v(&p, None) {
            for (z, (_, value)) in [0u8, 1].into_iter().zip(&alternatives) {
                if kernel_s4_v(&p, Some(z)).ok().and_then(|k| k.exact()) != Some(*value) {
                    return fail(format!("S4 v at {p}: zeta={z} does not select {value}"));
                }
            }
            conditional += 1;
        }
    }
    let p = RamificationProfile::sym4(1, 2, 1, 0, 0);
    let r = decomposition::report(&p, &Flags::default()).unwrap();
    let json = serde_json::to_value(&r).unwrap();
    let labelled = json["secondary"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|k| k["value"].get("conditional_on").is_some())
        .all(|k| k["value"]["alternatives"].as_array().map(Vec::len) == Some(2));
    if conditional == 0 || !labelled {
        return fail("no labelled conditional values observed");
    }
    pass(format!("{conditional} conditional evaluations, both candidates labelled"))
}

fn main() {
    let criteria: [(u32, &str, Duration, fn() -> Outcome); 10] = [
        (1, "genus tables vs closed forms", Duration::from_secs(5), genus_tables),
        (2, "dimension identity", Duration::from_secs(5), dimension_identity),
        (3, "SYM4 kernel closed form vs stages", Duration::from_secs(10), kernel_consistency),
        (4, "families: genera, degrees, realizability", Duration::from_secs(60), families),
        (5, "one-parameter families", Duration::from_secs(60), one_param),
        (6, "rigid cases", Duration::from_secs(10), rigid),
        (7, "genus-7 example", Duration::from_secs(1), genus_seven),
        (8, "symplectic oracle", Duration::from_secs(120), symplectic),
        (9, "torsion bookkeeping", Duration::from_secs(1), torsion),
        (10, "conditional kernel contract", Duration::from_secs(10), conditional_contract),
    ];
    let known: BTreeSet<(String, String, String)> =
        KNOWN.iter().map(|(t, r, c)| (t.to_string(), r.to_string(), c.to_string())).collect();
    let mut unexpected = 0;
    for (n, name, limit, run) in criteria {
        let start = Instant::now();
        let mut o = run();
        let elapsed = start.elapsed();
        if elapsed > limit {
            o.ok = false;
            o.detail = format!("{} (took {elapsed:.2?}, limit {limit:?})", o.detail);
        }
        let mark = if o.ok { "PASS" } else { "FAIL" };
        println!("{mark} criterion {n:>2} {name}: {} [{elapsed:.2?}]", o.detail);
        if !o.ok {
            let documented = elapsed <= limit
                && !o.cells.is_empty()
                && o.cells.iter().cloned().collect::<BTreeSet<_>>()== known;
            if documented {
                println!("      documented divergence of the reference table; see README");
            } else {
                unexpected += 1;
            }
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} criteria failed unexpectedly");
        std::process::exit(1);
    }
}
