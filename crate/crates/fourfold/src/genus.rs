//! Riemann-Hurwitz over the quotient lattice of a Galois cover.

use serde::ser::{Serialize, SerializeMap, Serializer};
use thiserror::Error;

use crate::cover::{CoverGroup, RamificationProfile, Violation};
use crate::perm::{coset_orbits, left_cosets, Perm, PermSet, SubgroupSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenusError {
    #[error("profile breaks parity rules: {}", list(.0))]
    Parity(Vec<Violation>),
    #[error("Riemann-Hurwitz gives a fractional genus for {0}")]
    Fractional(String),
    #[error("Riemann-Hurwitz gives genus {value} for {curve}; the cover is disconnected")]
    Negative { curve: String, value: i64 },
    #[error("{sub} is not a subgroup of {group}")]
    NotSubgroup { sub: String, group: String },
    #[error("{sub} is not contained in {sup}")]
    NotNested { sub: String, sup: String },
    #[error("fixed points of the identity are not counted")]
    Identity,
    #[error("{0} is not an element of the group")]
    NotInGroup(String),
    #[error("no curve named {0:?}")]
    UnknownCurve(String),
}

fn list(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// A named quotient curve `W/H`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Curve {
    pub name: &'static str,
    pub subgroup: SubgroupSpec,
}

/// The named curves of each group's diagram, from the top curve down to the base.
pub fn lattice(group: CoverGroup) -> Vec<Curve> {
    use SubgroupSpec::*;
    let c = |name, subgroup| Curve { name, subgroup };
    match group {
        CoverGroup::Cyclic4 => vec![c("X", Trivial), c("F", T2x2(1, 2, 3, 4)), c("T", C4(1, 3, 2, 4))],
        CoverGroup::Klein => vec![
            c("X", Trivial),
            c("X_σ", T2x2(1, 2, 3, 4)),
            c("X_τ", T2x2(1, 3, 2, 4)),
            c("X_στ", T2x2(1, 4, 2, 3)),
            c("T", KleinNormal),
        ],
        CoverGroup::Dihedral8 => vec![
            c("W", Trivial),
            c("W_s", T2(1, 2)),
            c("W_rs", T2x2(1, 4, 2, 3)),
            c("W_r²", T2x2(1, 2, 3, 4)),
            c("W_Ks", Klein(1, 2, 3, 4)),
            c("W_Krs", KleinNormal),
            c("W_r", C4(1, 3, 2, 4)),
            c("T", D4(2)),
        ],
        CoverGroup::Alt4 => vec![
            c("W", Trivial),
            c("C", T2x2(1, 2, 3, 4)),
            c("Y", C3(1, 2, 3)),
            c("U", KleinNormal),
            c("Δ", A4),
        ],
        CoverGroup::Sym4 => vec![
            c("W", Trivial),
            c("C", T2x2(1, 2, 3, 4)),
            c("Z", T2(1, 2)),
            c("Y", C3(1, 2, 3)),
            c("U", KleinNormal),
            c("S", Klein(1, 2, 3, 4)),
            c("X", S3(4)),
            c("V", C4(1, 3, 2, 4)),
            c("R", D4(2)),
            c("Δ", A4),
            c("T", S4),
        ],
        CoverGroup::Sym3 => vec![c("W", Trivial), c("Z", T2(1, 2)), c("Y", C3(1, 2, 3)), c("X", S3(4))],
    }
}

/// The cover arrows `W/H -> W/K` drawn in each group's diagram.
pub fn arrows(group: CoverGroup) -> Vec<(&'static str, &'static str)> {
    match group {
        CoverGroup::Cyclic4 => vec![("X", "F"), ("F", "T")],
        CoverGroup::Klein => {
            vec![("X", "X_σ"), ("X", "X_τ"), ("X", "X_στ"), ("X_σ", "T"), ("X_τ", "T"), ("X_στ", "T")]
        }
        CoverGroup::Dihedral8 => vec![
            ("W", "W_s"),
            ("W", "W_rs"),
            ("W", "W_r²"),
            ("W_s", "W_Ks"),
            ("W_r²", "W_Ks"),
            ("W_rs", "W_Krs"),
            ("W_r²", "W_Krs"),
            ("W_r²", "W_r"),
            ("W_Ks", "T"),
            ("W_r", "T"),
            ("W_Krs", "T"),
        ],
        CoverGroup::Alt4 => vec![("W", "C"), ("W", "Y"), ("C", "U"), ("U", "Δ"), ("Y", "Δ")],
        CoverGroup::Sym4 => vec![
            ("W", "C"),
            ("W", "Z"),
            ("W", "Y"),
            ("C", "U"),
            ("Z", "S"),
            ("C", "S"),
            ("Y", "X"),
            ("Z", "X"),
            ("C", "V"),
            ("U", "R"),
            ("S", "R"),
            ("V", "R"),
            ("Y", "Δ"),
            ("U", "Δ"),
            ("R", "T"),
            ("X", "T"),
            ("Δ", "T"),
        ],
        CoverGroup::Sym3 => vec![("W", "Z"), ("W", "Y"), ("Z", "X"), ("Y", "X")],
    }
}

pub fn curve(group: CoverGroup, name: &str) -> Result<Curve, GenusError> {
    lattice(group)
        .into_iter()
        .find(|c| c.name == name)
        .ok_or_else(|| GenusError::UnknownCurve(name.to_string()))
}

fn require_parity(profile: &RamificationProfile) -> Result<(), GenusError> {
    let v = profile.parity_violations();
    if v.is_empty() {
        Ok(())
    } else {
        Err(GenusError::Parity(v))
    }
}

fn check_subgroup(profile: &RamificationProfile, h: &SubgroupSpec) -> Result<(PermSet, PermSet), GenusError> {
    let g = profile.group.elements();
    let he = h.elements();
    if !he.is_subset(&g) {
        return Err(GenusError::NotSubgroup { sub: h.to_string(), group: profile.group.to_string() });
    }
    Ok((g, he))
}

/// `2 g(W/H) - 2`, exact.
pub fn euler_char(profile: &RamificationProfile, h: &SubgroupSpec) -> Result<i64, GenusError> {
    require_parity(profile)?;
    let (g, he) = check_subgroup(profile, h)?;
    let index = (g.len() / he.len()) as i64;
    let mut total = index * (2 * profile.g as i64 - 2);
    for class in profile.group.branch_classes() {
        let points = profile.points(class.symbol) as i64;
        if points == 0 {
            continue;
        }
        let orbits = coset_orbits(g, he, &class.representative);
        let defect: i64 = orbits.iter().map(|&o| o as i64 - 1).sum();
        total += points * defect;
    }
    Ok(total)
}

pub fn genus_quotient(profile: &RamificationProfile, h: &SubgroupSpec) -> Result<u32, GenusError> {
    let chi = euler_char(profile, h)?;
    if chi % 2 != 0 {
        return Err(GenusError::Fractional(format!("W/{h}")));
    }
    let genus = chi / 2 + 1;
    if genus < 0 {
        return Err(GenusError::Negative { curve: format!("W/{h}"), value: genus });
    }
    Ok(genus as u32)
}

pub fn genus_top(profile: &RamificationProfile) -> Result<u32, GenusError> {
    genus_quotient(profile, &SubgroupSpec::Trivial)
}

/// Degree of the ramification divisor of `W/H -> W/K`.
pub fn ram_degree(profile: &RamificationProfile, h: &SubgroupSpec, k: &SubgroupSpec) -> Result<u32, GenusError> {
    let (_, he) = check_subgroup(profile, h)?;
    let (_, ke) = check_subgroup(profile, k)?;
    if !he.is_subset(&ke) {
        return Err(GenusError::NotNested { sub: h.to_string(), sup: k.to_string() });
    }
    genus_quotient(profile, h)?;
    genus_quotient(profile, k)?;
    let index = (ke.len() / he.len()) as i64;
    let d = euler_char(profile, h)? - index * euler_char(profile, k)?;
    Ok(d as u32)
}

/// Ramification degree counted orbit by orbit instead of by Euler defect.
pub fn ram_degree_by_orbits(
    profile: &RamificationProfile,
    h: &SubgroupSpec,
    k: &SubgroupSpec,
) -> Result<u32, GenusError> {
    require_parity(profile)?;
    let (g, he) = check_subgroup(profile, h)?;
    let (_, ke) = check_subgroup(profile, k)?;
    if !he.is_subset(&ke) {
        return Err(GenusError::NotNested { sub: h.to_string(), sup: k.to_string() });
    }
    let h_cosets = left_cosets(g, he);
    let k_cosets = left_cosets(g, ke);
    let parent = |c: &PermSet| k_cosets.iter().position(|kc| c.is_subset(kc)).expect("cosets nest");
    let mut total = 0u32;
    for class in profile.group.branch_classes() {
        let points = profile.points(class.symbol);
        if points == 0 {
            continue;
        }
        let c = class.representative;
        let orbit_len = |cosets: &[PermSet], start: usize| {
            let mut len = 0;
            let mut cur = cosets[start];
            loop {
                len += 1;
                cur = cur.left_mul(&c);
                if cur == cosets[start] {
                    return len;
                }
            }
        };
        let mut per_point = 0u32;
        let mut seen = vec![false; h_cosets.len()];
        for i in 0..h_cosets.len() {
            if seen[i] {
                continue;
            }
            let len = orbit_len(&h_cosets, i);
            let mut cur = h_cosets[i];
            for _ in 0..len {
                let j = h_cosets.iter().position(|x| *x == cur).unwrap();
                seen[j] = true;
                cur = cur.left_mul(&c);
            }
            let below = orbit_len(&k_cosets, parent(&h_cosets[i]));
            per_point += (len / below - 1) as u32;
        }
        total += points * per_point;
    }
    Ok(total)
}

/// Number of points of the top curve fixed by `h`.
pub fn fixed_points(profile: &RamificationProfile, h: &Perm) -> Result<u32, GenusError> {
    if *h == Perm::IDENTITY {
        return Err(GenusError::Identity);
    }
    let g = profile.group.elements();
    if !g.contains(h) {
        return Err(GenusError::NotInGroup(h.to_string()));
    }
    let mut total = 0u32;
    for class in profile.group.branch_classes() {
        let points = profile.points(class.symbol);
        if points == 0 {
            continue;
        }
        let c = class.representative;
        let cyclic = PermSet::from_iter([c]).generated();
        let fixed = left_cosets(g, cyclic)
            .iter()
            .filter(|coset| {
                let x = coset.iter().next().expect("cosets are nonempty");
                cyclic.conjugate_by(&x).contains(h)
            })
            .count() as u32;
        total += points * fixed;
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveGenus {
    pub name: &'static str,
    pub subgroup: SubgroupSpec,
    pub genus: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamEntry {
    pub from: &'static str,
    pub to: &'static str,
    pub degree: u32,
}

/// Genera of every named curve and ramification degrees of every drawn arrow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusTable {
    pub group: CoverGroup,
    pub base_genus: u32,
    pub top_genus: u32,
    pub genera: Vec<CurveGenus>,
    pub ram_degrees: Vec<RamEntry>,
}

impl GenusTable {
    pub fn genus(&self, name: &str) -> Option<u32> {
        self.genera.iter().find(|c| c.name == name).map(|c| c.genus)
    }

    pub fn ram(&self, from: &str, to: &str) -> Option<u32> {
        self.ram_degrees.iter().find(|r| r.from == from && r.to == to).map(|r| r.degree)
    }
}

impl Serialize for GenusTable {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        struct Genera<'a>(&'a [CurveGenus]);
        impl Serialize for Genera<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.len()))?;
                for c in self.0 {
                    m.serialize_entry(c.name, &c.genus)?;
                }
                m.end()
            }
        }
        struct Rams<'a>(&'a [RamEntry]);
        impl Serialize for Rams<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.len()))?;
                for r in self.0 {
                    m.serialize_entry(&format!("{}→{}", r.from, r.to), &r.degree)?;
                }
                m.end()
            }
        }
        let mut m = s.serialize_map(Some(4))?;
        m.serialize_entry("group", &self.group)?;
        m.serialize_entry("top_genus", &self.top_genus)?;
        m.serialize_entry("genera", &Genera(&self.genera))?;
        m.serialize_entry("ram_degrees", &Rams(&self.ram_degrees))?;
        m.end()
    }
}

pub fn genus_table(profile: &RamificationProfile) -> Result<GenusTable, GenusError> {
    let mut genera = Vec::new();
    for c in lattice(profile.group) {
        genera.push(CurveGenus { name: c.name, subgroup: c.subgroup, genus: genus_quotient(profile, &c.subgroup)? });
    }
    let mut ram_degrees = Vec::new();
    for (from, to) in arrows(profile.group) {
        let (h, k) = (curve(profile.group, from)?.subgroup, curve(profile.group, to)?.subgroup);
        ram_degrees.push(RamEntry { from, to, degree: ram_degree(profile, &h, &k)? });
    }
    Ok(GenusTable { group: profile.group, base_genus: profile.g, top_genus: genera[0].genus, genera, ram_degrees })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::Symbol::{self, *};
    use proptest::prelude::*;

    fn prof(group: CoverGroup, g: u32, c: &[(Symbol, u32)]) -> RamificationProfile {
        RamificationProfile::new(group, g, c).unwrap()
    }

    #[test]
    fn genus_top_examples() {
        assert_eq!(genus_top(&RamificationProfile::sym4(0, 4, 0, 3, 0)).unwrap(), 19);
        assert_eq!(genus_top(&RamificationProfile::unramified(CoverGroup::Alt4, 1)).unwrap(), 1);
        for g in CoverGroup::ALL {
            assert_eq!(genus_top(&RamificationProfile::unramified(g, 1)).unwrap(), 1);
        }
    }

    #[test]
    fn klein_quotient_formula() {
        for (g, r, s, t) in [(0, 2, 2, 0), (1, 0, 2, 4), (2, 2, 2, 2), (0, 4, 0, 2)] {
            let p = prof(CoverGroup::Klein, g, &[(R, r), (S, s), (T, t)]);
            let want = 2 * g as i64 - 1 + (r + t) as i64 / 2;
            assert_eq!(genus_quotient(&p, &SubgroupSpec::T2x2(1, 2, 3, 4)).unwrap() as i64, want);
        }
    }

    #[test]
    fn genus_seven_example() {
        let p = RamificationProfile::sym4(0, 2, 0, 0, 2);
        assert_eq!(genus_quotient(&p, &SubgroupSpec::S3(4)).unwrap(), 1);
        let t = genus_table(&p).unwrap();
        let got: Vec<u32> = ["W", "C", "Z", "Y", "U", "S", "X", "V", "R", "Δ"].iter().map(|n| t.genus(n).unwrap()).collect();
        assert_eq!(got, vec![7, 3, 3, 3, 1, 1, 1, 1, 0, 1]);
        assert_eq!(t.genus("T"), Some(0));
    }

    #[test]
    fn quotient_by_whole_group_is_base() {
        let p = RamificationProfile::sym4(3, 2, 1, 1, 0);
        assert_eq!(genus_quotient(&p, &SubgroupSpec::S4).unwrap(), 3);
    }

    #[test]
    fn ram_degree_examples() {
        let p = RamificationProfile::sym4(1, 2, 3, 1, 2);
        let (b, g, d) = (3, 1, 2);
        assert_eq!(ram_degree(&p, &SubgroupSpec::C3(1, 2, 3), &SubgroupSpec::A4).unwrap(), 4 * b + 4 * g + 2 * d);
        let q = prof(CoverGroup::Dihedral8, 1, &[(Delta, 3), (Alpha, 1), (Gamma1, 1)]);
        assert_eq!(ram_degree(&q, &SubgroupSpec::T2x2(1, 2, 3, 4), &SubgroupSpec::C4(1, 3, 2, 4)).unwrap(), 6);
        assert_eq!(ram_degree(&p, &SubgroupSpec::A4, &SubgroupSpec::A4).unwrap(), 0);
        assert!(matches!(
            ram_degree(&p, &SubgroupSpec::A4, &SubgroupSpec::C3(1, 2, 3)),
            Err(GenusError::NotNested { .. })
        ));
    }

    #[test]
    fn fixed_point_examples() {
        let d = prof(CoverGroup::Dihedral8, 1, &[(Delta, 4), (Alpha, 2), (Gamma1, 2), (Gamma2, 1)]);
        assert_eq!(fixed_points(&d, &"(1 3 2 4)".parse().unwrap()).unwrap(), 8);
        let k = prof(CoverGroup::Klein, 0, &[(S, 4), (T, 2), (R, 2)]);
        assert_eq!(fixed_points(&k, &"(1 2)(3 4)".parse().unwrap()).unwrap(), 8);
        let u = RamificationProfile::unramified(CoverGroup::Sym4, 2);
        assert_eq!(fixed_points(&u, &"(1 2)".parse().unwrap()).unwrap(), 0);
        assert_eq!(fixed_points(&u, &Perm::IDENTITY), Err(GenusError::Identity));
    }

    #[test]
    fn parity_violation_is_refused() {
        let p = RamificationProfile::sym4(0, 1, 1, 1, 0);
        assert!(matches!(genus_top(&p), Err(GenusError::Parity(_))));
    }

    #[test]
    fn foreign_subgroup_is_refused() {
        let p = RamificationProfile::unramified(CoverGroup::Klein, 2);
        assert!(matches!(genus_quotient(&p, &SubgroupSpec::T2(1, 2)), Err(GenusError::NotSubgroup { .. })));
    }

    #[test]
    fn genus_table_examples() {
        let a = prof(CoverGroup::Alt4, 0, &[(Beta, 2), (Gamma1, 1)]);
        assert_eq!(genus_table(&a).unwrap().top_genus, 0);
        let k = genus_table(&RamificationProfile::unramified(CoverGroup::Klein, 1)).unwrap();
        assert!(k.genera.iter().all(|c| c.genus == 1));
    }

    fn valid_profile() -> impl Strategy<Value = RamificationProfile> {
        (0usize..6, 0u32..4, proptest::collection::vec(0u32..7, 4))
            .prop_map(|(gi, g, counts)| {
                let group = CoverGroup::ALL[gi];
                let n = group.symbols().len();
                RamificationProfile::from_counts(group, g, counts[..n].to_vec()).unwrap()
            })
            .prop_filter("valid", |p| p.is_valid())
    }

    proptest! {
        #[test]
        fn nested_pairs_satisfy_the_hurwitz_inequality(p in valid_profile()) {
            let curves = lattice(p.group);
            for h in &curves {
                for k in &curves {
                    if !h.subgroup.elements().is_subset(&k.subgroup.elements()) {
                        continue;
                    }
                    let idx = (k.subgroup.order() / h.subgroup.order()) as i64;
                    let eh = euler_char(&p, &h.subgroup).unwrap();
                    let ek = euler_char(&p, &k.subgroup).unwrap();
                    let d = ram_degree(&p, &h.subgroup, &k.subgroup).unwrap();
                    prop_assert!(eh >= idx * ek);
                    prop_assert_eq!(eh == idx * ek, d == 0);
                    prop_assert_eq!(d, ram_degree_by_orbits(&p, &h.subgroup, &k.subgroup).unwrap());
                }
            }
        }

        #[test]
        fn fixed_points_are_class_functions(p in valid_profile()) {
            let g = p.group.elements();
            for h in g.iter().filter(|h| *h != Perm::IDENTITY) {
                let n = fixed_points(&p, &h).unwrap();
                for x in g.iter() {
                    prop_assert_eq!(fixed_points(&p, &h.conjugate_by(&x)).unwrap(), n);
                }
            }
        }

        #[test]
        fn top_genus_is_trivial_quotient(p in valid_profile()) {
            let t = genus_table(&p).unwrap();
            prop_assert_eq!(t.top_genus, genus_quotient(&p, &SubgroupSpec::Trivial).unwrap());
            prop_assert_eq!(t.genera.last().unwrap().genus, p.g);
        }

        /// The quotient by a cyclic group is the orbit space; its Euler
        /// characteristic equals the average number of fixed points (Burnside).
        #[test]
        fn cyclic_quotients_match_fixed_point_averages(p in valid_profile()) {
            let gw = genus_top(&p).unwrap() as i64;
            for x in p.group.elements().iter().filter(|x| *x != Perm::IDENTITY) {
                let cyc = PermSet::from_iter([x]).generated();
                let n = cyc.len() as i64;
                let fixed: i64 = cyc.iter().filter(|y| *y != Perm::IDENTITY)
                    .map(|y| fixed_points(&p, &y).unwrap() as i64).sum();
                // 2 - 2 g(W/<x>) = (1/n)((2 - 2 gw) + sum of fixed points)
                let q = genus_quotient(&p, &SubgroupSpec::Trivial).unwrap() as i64;
                prop_assert_eq!(q, gw);
                let lhs = n * (2 - 2 * cyclic_quotient_genus(&p, cyc));
                prop_assert_eq!(lhs, 2 - 2 * gw + fixed);
            }
        }
    }

    fn cyclic_quotient_genus(p: &RamificationProfile, cyc: PermSet) -> i64 {
        let spec = SubgroupSpec::catalog().into_iter().find(|s| s.elements() == cyc).unwrap();
        genus_quotient(p, &spec).unwrap() as i64
    }
}
