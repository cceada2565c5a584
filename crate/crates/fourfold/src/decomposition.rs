//! Equivariant isogeny decompositions of the top Jacobian and the exact
//! cardinalities of their kernels.

use std::fmt;

use num_bigint::BigUint;
use serde::ser::{Serialize, SerializeMap, Serializer};
use serde::Deserialize;
use thiserror::Error;

use crate::cover::{CoverGroup, RamificationProfile, Symbol};
use crate::genus::{genus_table, GenusError, GenusTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompError {
    #[error(transparent)]
    Genus(#[from] GenusError),
    #[error("{operation} needs a {expected} profile, got {got}")]
    WrongGroup { operation: &'static str, expected: &'static str, got: CoverGroup },
    #[error("{formula} gives a negative exponent ({exp2}, {exp3}) for this profile")]
    NegativeExponent { formula: &'static str, exp2: i64, exp3: i64 },
    #[error("the kernel table has no row for this profile ({0})")]
    UncoveredCase(String),
    #[error("flag {flag} is not used by {group} profiles")]
    UnusedFlag { flag: &'static str, group: CoverGroup },
    #[error("flag zeta must be 0 or 1, got {0}")]
    BadZeta(u8),
    #[error("dimension identity fails: factors add up to {total}, top genus is {top}")]
    Dimension { total: u64, top: u32 },
}

/// The positive integer `2^exp2 * 3^exp3`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FactoredCard {
    pub exp2: u64,
    pub exp3: u64,
}

impl FactoredCard {
    pub const ONE: FactoredCard = FactoredCard { exp2: 0, exp3: 0 };

    pub fn new(exp2: u64, exp3: u64) -> Self {
        FactoredCard { exp2, exp3 }
    }

    pub fn pow2(exp2: u64) -> Self {
        FactoredCard { exp2, exp3: 0 }
    }

    /// Checked conversion from signed exponents produced by a formula.
    pub fn from_signed(formula: &'static str, exp2: i64, exp3: i64) -> Result<Self, DecompError> {
        if exp2 < 0 || exp3 < 0 {
            return Err(DecompError::NegativeExponent { formula, exp2, exp3 });
        }
        Ok(FactoredCard { exp2: exp2 as u64, exp3: exp3 as u64 })
    }

    pub fn mul(self, other: FactoredCard) -> FactoredCard {
        FactoredCard { exp2: self.exp2 + other.exp2, exp3: self.exp3 + other.exp3 }
    }

    pub fn pow(self, n: u64) -> FactoredCard {
        FactoredCard { exp2: self.exp2 * n, exp3: self.exp3 * n }
    }

    pub fn to_biguint(self) -> BigUint {
        (BigUint::from(1u32) << self.exp2) * BigUint::from(3u32).pow(self.exp3 as u32)
    }

    pub fn decimal(self) -> String {
        self.to_biguint().to_str_radix(10)
    }
}

impl std::ops::Mul for FactoredCard {
    type Output = FactoredCard;
    fn mul(self, rhs: FactoredCard) -> FactoredCard {
        FactoredCard::mul(self, rhs)
    }
}

impl fmt::Display for FactoredCard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.exp2, self.exp3) {
            (0, 0) => write!(f, "1"),
            (a, 0) => write!(f, "2^{a}"),
            (0, b) => write!(f, "3^{b}"),
            (a, b) => write!(f, "2^{a}·3^{b}"),
        }
    }
}

impl Serialize for FactoredCard {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("exp2", &self.exp2)?;
        m.serialize_entry("exp3", &self.exp3)?;
        m.serialize_entry("decimal", &self.decimal())?;
        m.end()
    }
}

fn card(formula: &'static str, exp2: i64, exp3: i64) -> Result<FactoredCard, DecompError> {
    FactoredCard::from_signed(formula, exp2, exp3)
}

/// Case flags that cannot be read off the branch data.
#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize, serde::Serialize)]
#[serde(deny_unknown_fields)]
pub struct Flags {
    /// Whether the relevant subgroup of 2-torsion is isotropic (D4 bigonal, S4 iv).
    pub g_isotropic: Option<bool>,
    /// Whether the 2-torsion of the Prym lies in the orthogonal of the pullback kernel (A4 iii, S4 iii).
    pub p2_in_perp: Option<bool>,
    /// The index correction in the S4 trigonal kernel, 0 or 1.
    pub zeta: Option<u8>,
}

impl Flags {
    /// Rejects flags that no kernel of `group` consumes.
    pub fn check_for(&self, group: CoverGroup) -> Result<(), DecompError> {
        let allowed: &[&str] = match group {
            CoverGroup::Dihedral8 => &["g_isotropic"],
            CoverGroup::Alt4 => &["p2_in_perp"],
            CoverGroup::Sym4 => &["g_isotropic", "p2_in_perp", "zeta"],
            _ => &[],
        };
        for (name, set) in [
            ("g_isotropic", self.g_isotropic.is_some()),
            ("p2_in_perp", self.p2_in_perp.is_some()),
            ("zeta", self.zeta.is_some()),
        ] {
            if set && !allowed.contains(&name) {
                return Err(DecompError::UnusedFlag { flag: name, group });
            }
        }
        if let Some(z) = self.zeta {
            if z > 1 {
                return Err(DecompError::BadZeta(z));
            }
        }
        Ok(())
    }
}

/// A kernel cardinality, or both candidates when it hinges on an absent flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KernelValue {
    Exact(FactoredCard),
    Conditional { flag: &'static str, alternatives: Vec<(String, FactoredCard)> },
}

impl KernelValue {
    pub fn exact(&self) -> Option<FactoredCard> {
        match self {
            KernelValue::Exact(c) => Some(*c),
            KernelValue::Conditional { .. } => None,
        }
    }
}

impl fmt::Display for KernelValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelValue::Exact(c) => write!(f, "{c}"),
            KernelValue::Conditional { flag, alternatives } => {
                let parts: Vec<String> = alternatives.iter().map(|(l, c)| format!("{l}: {c}")).collect();
                write!(f, "depends on {flag} [{}]", parts.join(", "))
            }
        }
    }
}

impl Serialize for KernelValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            KernelValue::Exact(c) => c.serialize(s),
            KernelValue::Conditional { flag, alternatives } => {
                #[derive(serde::Serialize)]
                struct Alt<'a> {
                    condition: &'a str,
                    kernel: &'a FactoredCard,
                }
                let alts: Vec<Alt> = alternatives.iter().map(|(l, c)| Alt { condition: l, kernel: c }).collect();
                let mut m = s.serialize_map(Some(2))?;
                m.serialize_entry("conditional_on", flag)?;
                m.serialize_entry("alternatives", &alts)?;
                m.end()
            }
        }
    }
}

/// Resolves a two-way case split on a boolean flag.
fn branch_bool(
    flag: &'static str,
    value: Option<bool>,
    labels: (&str, &str),
    when_true: Result<FactoredCard, DecompError>,
    when_false: Result<FactoredCard, DecompError>,
    used: &mut Vec<&'static str>,
) -> Result<KernelValue, DecompError> {
    match value {
        Some(true) => {
            used.push(flag);
            Ok(KernelValue::Exact(when_true?))
        }
        Some(false) => {
            used.push(flag);
            Ok(KernelValue::Exact(when_false?))
        }
        None => Ok(KernelValue::Conditional {
            flag,
            alternatives: vec![(labels.0.to_string(), when_true?), (labels.1.to_string(), when_false?)],
        }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct IsogenyFactor {
    pub label: String,
    pub multiplicity: u32,
    pub dim: u32,
    pub rep_label: String,
}

fn require_parity(profile: &RamificationProfile) -> Result<(), DecompError> {
    let v = profile.parity_violations();
    if v.is_empty() {
        Ok(())
    } else {
        Err(GenusError::Parity(v).into())
    }
}

fn require(profile: &RamificationProfile, group: CoverGroup, operation: &'static str) -> Result<(), DecompError> {
    if profile.group == group {
        Ok(())
    } else {
        Err(DecompError::WrongGroup { operation, expected: group.name(), got: profile.group })
    }
}

/// Isogeny factors `(label, multiplicity, Prym curve pair, representation)` per group.
fn factor_template(group: CoverGroup) -> Vec<(&'static str, u32, &'static str, &'static str, &'static str)> {
    match group {
        CoverGroup::Cyclic4 => vec![
            ("JT", 1, "T", "", "trivial"),
            ("P(F/T)", 1, "F", "T", "order-2 character"),
            ("P(X/F)", 1, "X", "F", "faithful characters"),
        ],
        CoverGroup::Klein => vec![
            ("JT", 1, "T", "", "trivial"),
            ("P(X_στ/T)", 1, "X_στ", "T", "character with kernel <στ>"),
            ("P(X_σ/T)", 1, "X_σ", "T", "character with kernel <σ>"),
            ("P(X_τ/T)", 1, "X_τ", "T", "character with kernel <τ>"),
        ],
        CoverGroup::Dihedral8 => vec![
            ("JT", 1, "T", "", "trivial"),
            ("P(W_r/T)", 1, "W_r", "T", "r→1, s→-1"),
            ("P(W_Ks/T)", 1, "W_Ks", "T", "r→-1, s→1"),
            ("P(W_Krs/T)", 1, "W_Krs", "T", "r→-1, s→-1"),
            ("P(W_s/W_Ks)", 2, "W_s", "W_Ks", "degree 2"),
        ],
        CoverGroup::Alt4 => vec![
            ("JΔ", 1, "Δ", "", "trivial"),
            ("P(U/Δ)", 1, "U", "Δ", "nontrivial characters"),
            ("P(C/U)", 3, "C", "U", "degree 3"),
        ],
        CoverGroup::Sym4 => vec![
            ("JT", 1, "T", "", "trivial"),
            ("P(Δ/T)", 1, "Δ", "T", "sign"),
            ("P(R/T)", 2, "R", "T", "degree 2"),
            ("P(S/R)", 3, "S", "R", "standard"),
            ("P(V/R)", 3, "V", "R", "standard ⊗ sign"),
        ],
        CoverGroup::Sym3 => vec![
            ("JX", 1, "X", "", "trivial"),
            ("P(Y/X)", 1, "Y", "X", "sign"),
            ("P(Z/X)", 2, "Z", "X", "degree 2"),
        ],
    }
}

pub fn factors_from_table(table: &GenusTable) -> Vec<IsogenyFactor> {
    factor_template(table.group)
        .into_iter()
        .map(|(label, multiplicity, top, bottom, rep)| {
            let gt = table.genus(top).expect("template curves exist");
            let gb = if bottom.is_empty() { 0 } else { table.genus(bottom).expect("template curves exist") };
            IsogenyFactor { label: label.to_string(), multiplicity, dim: gt - gb, rep_label: rep.to_string() }
        })
        .collect()
}

pub fn factors(profile: &RamificationProfile) -> Result<Vec<IsogenyFactor>, DecompError> {
    Ok(factors_from_table(&genus_table(profile)?))
}

pub fn dimension_total(factors: &[IsogenyFactor]) -> u64 {
    factors.iter().map(|f| f.multiplicity as u64 * f.dim as u64).sum()
}

/// `d^(2 genus)`, the order of the d-torsion of a Jacobian.
pub fn torsion_card(genus: u32, d: u32) -> BigUint {
    BigUint::from(d).pow(2 * genus)
}

struct Counts {
    g: i64,
    a: i64,
    b: i64,
    c: i64,
    d: i64,
    r: i64,
    s: i64,
    t: i64,
    c1: i64,
    c2: i64,
}

fn counts(p: &RamificationProfile) -> Counts {
    let v = |s| p.count(s) as i64;
    use Symbol::*;
    Counts {
        g: p.g as i64,
        a: v(Alpha),
        b: v(Beta),
        c: v(Gamma),
        d: v(Delta),
        r: v(R),
        s: v(S),
        t: v(T),
        c1: v(Gamma1),
        c2: v(Gamma2),
    }
}

/// Kernel of the main equivariant isogeny onto the top Jacobian.
pub fn kernel_main(profile: &RamificationProfile) -> Result<FactoredCard, DecompError> {
    genus_table(profile)?;
    let Counts { g, a, b, c, d, r, s, t, c1, c2 } = counts(profile);
    match profile.group {
        CoverGroup::Cyclic4 => {
            if d > 0 {
                card("cyclic kernel", 6 * g - 2 + d, 0)
            } else if c > 0 {
                card("cyclic kernel", 6 * g - 3, 0)
            } else {
                card("cyclic kernel", 6 * g - 4, 0)
            }
        }
        CoverGroup::Klein => {
            let zeros = [r, s, t].iter().filter(|&&x| x == 0).count();
            match zeros {
                3 => card("Klein kernel", 8 * g - 6, 0),
                2 => card("Klein kernel", 8 * g - 4 + r + s + t, 0),
                _ => card("Klein kernel", 8 * g - 3 + r + s + t, 0),
            }
        }
        CoverGroup::Dihedral8 => d4_main(g, a, c1, c2, d),
        CoverGroup::Alt4 => {
            let e3 = if b == 0 { 2 * g - 1 } else { 2 * g };
            let e2 = if c1 == 0 { 24 * g - 22 + 8 * b } else { 24 * g - 19 + 8 * b + 3 * c1 };
            card("A4 kernel", e2, e3)
        }
        CoverGroup::Sym4 => s4_closed(g, a, b, c, d),
        CoverGroup::Sym3 => {
            if b == 0 {
                card("S3 kernel", 2 * g - 1, 6 * g - 3 + a)
            } else {
                card("S3 kernel", 2 * g, 6 * g - 3 + a + b)
            }
        }
    }
}

fn d4_main(g: i64, a: i64, c1: i64, c2: i64, d: i64) -> Result<FactoredCard, DecompError> {
    let f = "D4 kernel";
    let e = if a == 0 && c1 == 0 && c2 == 0 && d == 0 {
        20 * g - 17
    } else if a == 0 && c2 == 0 && d == 0 {
        20 * g - 15 + 4 * c1
    } else if a == 0 && c1 == 0 && d == 0 {
        20 * g - 15
    } else if c1 == 0 && c2 == 0 && d == 0 {
        20 * g - 14 + 3 * a
    } else if a == 0 && c1 == 0 {
        20 * g - 13 + 4 * d
    } else if a == 0 && d == 0 {
        20 * g - 13 + 4 * c1
    } else if a == 0 {
        20 * g - 12 + 4 * d + 4 * c1
    } else if d == 0 && (c1 == 0) != (c2 == 0) {
        20 * g - 13 + 3 * a + 4 * c1 + 2 * c2
    } else if c1 > 0 && c2 > 0 {
        20 * g - 12 + 3 * a + 4 * c1 + 2 * c2 + 5 * d
    } else {
        return Err(DecompError::UncoveredCase(format!(
            "alpha={a} > 0 and delta={d} > 0 with gamma1*gamma2 = 0"
        )));
    };
    card(f, e, 0)
}

fn s4_closed(g: i64, a: i64, b: i64, c: i64, d: i64) -> Result<FactoredCard, DecompError> {
    let f = "S4 kernel";
    if a == 0 && c == 0 && d == 0 {
        card(f, 68 * g - 65 + 22 * b, 6 * g - 3 + b)
    } else if c == 0 && d == 0 {
        card(f, 68 * g - 61 + 15 * a + 22 * b, 6 * g - 3 + a + b)
    } else if a == 0 && d == 0 {
        card(f, 68 * g - 59 + 22 * b + 12 * c, 6 * g - 3 + b)
    } else {
        card(f, 68 * g - 58 + 15 * a + 22 * b + 12 * c + 21 * d, 6 * g - 3 + a + b + d)
    }
}

/// The four stage kernels the S4 isogeny is assembled from.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct S4Stages {
    /// `JU × P(W/U) → JW`
    pub over_klein: FactoredCard,
    /// `JT × P(Δ/T) × 2P(R/T) → JU`
    pub s3_part: FactoredCard,
    /// `3P(C/U) → P(W/U)`
    pub three_copies: FactoredCard,
    /// `P(S/R) × P(V/R) → P(C/U)`, used three times.
    pub klein_pair: FactoredCard,
    pub product: FactoredCard,
}

pub fn kernel_s4_stagewise(profile: &RamificationProfile) -> Result<S4Stages, DecompError> {
    require(profile, CoverGroup::Sym4, "kernel_s4_stagewise")?;
    genus_table(profile)?;
    let Counts { g, a, b, c, d, .. } = counts(profile);
    let f = "S4 stage kernel";
    let over_klein = if c == 0 && d == 0 {
        card(f, 24 * g - 22 + 6 * a + 8 * b, 0)?
    } else {
        card(f, 24 * g - 20 + 6 * a + 8 * b + 6 * d, 0)?
    };
    let s3_part =
        if a == 0 && d == 0 { card(f, 2 * g - 1, 6 * g - 3 + b)? } else { card(f, 2 * g, 6 * g - 3 + a + b + d)? };
    let three_copies = if c == 0 && d == 0 {
        card(f, 24 * g - 24 + 6 * a + 8 * b, 0)?
    } else {
        card(f, 24 * g - 23 + 6 * a + 8 * b + 6 * c + 9 * d, 0)?
    };
    let klein_pair = if a == 0 && c == 0 && d == 0 {
        card(f, 6 * g - 6 + 2 * b, 0)?
    } else {
        card(f, 6 * g - 5 + a + 2 * b + 2 * c + 2 * d, 0)?
    };
    let product = over_klein * s3_part * three_copies * klein_pair.pow(3);
    Ok(S4Stages { over_klein, s3_part, three_copies, klein_pair, product })
}

/// One of the three order-2 elements of the Klein group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum KleinElement {
    Sigma,
    Tau,
    SigmaTau,
}

impl KleinElement {
    pub const ALL: [KleinElement; 3] = [KleinElement::Sigma, KleinElement::Tau, KleinElement::SigmaTau];

    pub fn label(self) -> &'static str {
        match self {
            KleinElement::Sigma => "σ",
            KleinElement::Tau => "τ",
            KleinElement::SigmaTau => "στ",
        }
    }

    /// The branch count whose monodromy is this element.
    fn own(self, c: &Counts) -> i64 {
        match self {
            KleinElement::Sigma => c.s,
            KleinElement::Tau => c.t,
            KleinElement::SigmaTau => c.r,
        }
    }

    fn others(self) -> [KleinElement; 2] {
        match self {
            KleinElement::Sigma => [KleinElement::Tau, KleinElement::SigmaTau],
            KleinElement::Tau => [KleinElement::Sigma, KleinElement::SigmaTau],
            KleinElement::SigmaTau => [KleinElement::Sigma, KleinElement::Tau],
        }
    }

    /// Degree of ramification of the quotient by this element over the base.
    fn bottom_ram(self, c: &Counts) -> i64 {
        let [k, l] = self.others();
        k.own(c) + l.own(c)
    }
}

/// Kernel of `P_k × P_l → P(X/X_j)` built from the two other intermediate Pryms.
pub fn kernel_klein_pair(profile: &RamificationProfile, j: KleinElement) -> Result<FactoredCard, DecompError> {
    require(profile, CoverGroup::Klein, "kernel_klein_pair")?;
    require_parity(profile)?;
    let c = counts(profile);
    let top = |e: KleinElement| 2 * e.own(&c);
    let [k, l] = j.others();
    let (bj, bk, bl) = (top(j), top(k), top(l));
    let f = "Klein pair kernel";
    if bj > 0 {
        card(f, 2 * c.g - 1 + bj / 2, 0)
    } else if bk == 0 && bl == 0 {
        card(f, 2 * c.g - 2, 0)
    } else if bk == 0 || bl == 0 {
        card(f, 2 * c.g - 1, 0)
    } else {
        card(f, 2 * c.g, 0)
    }
}

/// Kernel of `P_j × P(X/X_j) → P(X/T)`.
pub fn kernel_klein_psi(profile: &RamificationProfile, j: KleinElement) -> Result<FactoredCard, DecompError> {
    require(profile, CoverGroup::Klein, "kernel_klein_psi")?;
    genus_table(profile)?;
    let c = counts(profile);
    let zeros = [c.r, c.s, c.t].iter().filter(|&&x| x == 0).count();
    // With exactly one count zero, the element carrying it loses a factor 2.
    let correction = if zeros == 1 && j.own(&c) == 0 { 1 } else { 0 };
    card("Klein psi kernel", 2 * c.g - 2 + j.bottom_ram(&c) - correction, 0)
}

/// Kernel of `P(X_στ/T) × P(X_σ/T) × P(X_τ/T) → P(X/T)`.
pub fn kernel_klein_varphi(profile: &RamificationProfile) -> Result<FactoredCard, DecompError> {
    require(profile, CoverGroup::Klein, "kernel_klein_varphi")?;
    genus_table(profile)?;
    let c = counts(profile);
    if c.r == 0 && c.s == 0 && c.t == 0 {
        card("Klein varphi kernel", 4 * c.g - 4, 0)
    } else {
        card("Klein varphi kernel", 4 * c.g - 3 + c.r + c.s + c.t, 0)
    }
}

/// Order of the kernel of the pullback `JT → JX` for the Klein cover.
pub fn klein_pullback_kernel(profile: &RamificationProfile) -> Result<u64, DecompError> {
    require(profile, CoverGroup::Klein, "klein_pullback_kernel")?;
    let c = counts(profile);
    Ok(match [c.r, c.s, c.t].iter().filter(|&&x| x == 0).count() {
        3 => 4,
        2 => 2,
        _ => 1,
    })
}

/// Second evaluation of the Klein kernel: `JT × P(X/T) → JX` after `ψ_στ` and `φ_στ`.
pub fn kernel_klein_stagewise(profile: &RamificationProfile) -> Result<FactoredCard, DecompError> {
    let pullback = klein_pullback_kernel(profile)?;
    let torsion_exp = 4 * profile.g as u64;
    let first = FactoredCard::pow2(torsion_exp - pullback.trailing_zeros() as u64);
    let psi = kernel_klein_psi(profile, KleinElement::SigmaTau)?;
    let pair = kernel_klein_pair(profile, KleinElement::SigmaTau)?;
    Ok(first * psi * pair)
}

/// Kernel of the bigonal-construction isogeny for D4 covers.
pub fn kernel_bigonal(profile: &RamificationProfile, g_isotropic: Option<bool>) -> Result<KernelValue, DecompError> {
    require(profile, CoverGroup::Dihedral8, "kernel_bigonal")?;
    genus_table(profile)?;
    let Counts { g, a, c1, c2, d, .. } = counts(profile);
    let f = "bigonal kernel";
    let row1 = || card(f, 2 * g - 5 + 2 * d, 0);
    let row2 = || card(f, 2 * g - 4 + 2 * d + c1 + c2, 0);
    let row3 = || card(f, 2 * g - 3 + 2 * d + c1 + c2, 0);
    let row4 = || card(f, 2 * g - 2 + d + c1 + c2, 0);
    let row5 = || card(f, 2 * g - 1 + c2, 0);
    let row6 = || card(f, 2 * g, 0);
    let mut used = Vec::new();
    let labels = ("isotropic", "non-isotropic");
    let value = if d > 0 {
        if a == 0 && c1 == 0 && c2 == 0 {
            KernelValue::Exact(row1()?)
        } else if c1 == 0 || (a == 0 && c2 == 0) {
            KernelValue::Exact(row2()?)
        } else {
            KernelValue::Exact(row3()?)
        }
    } else if c1 > 0 {
        if a == 0 {
            KernelValue::Exact(row3()?)
        } else {
            KernelValue::Exact(row4()?)
        }
    } else if a == 0 {
        if c2 > 0 {
            KernelValue::Exact(row4()?)
        } else {
            branch_bool("g_isotropic", g_isotropic, labels, row4(), row5(), &mut used)?
        }
    } else if c2 > 0 {
        KernelValue::Exact(row5()?)
    } else {
        branch_bool("g_isotropic", g_isotropic, labels, row5(), row6(), &mut used)?
    };
    Ok(value)
}

/// Kernel of the trigonal-construction isogeny for A4 covers.
pub fn kernel_trigonal_a4(profile: &RamificationProfile, p2_in_perp: Option<bool>) -> Result<KernelValue, DecompError> {
    require(profile, CoverGroup::Alt4, "kernel_trigonal_a4")?;
    genus_table(profile)?;
    let Counts { g, b, c1, .. } = counts(profile);
    let f = "A4 trigonal kernel";
    let contained = || card(f, 4 * g - 5 + 2 * b + c1, 0);
    if c1 > 0 {
        return Ok(KernelValue::Exact(contained()?));
    }
    branch_bool(
        "p2_in_perp",
        p2_in_perp,
        ("contained", "not contained"),
        contained(),
        card(f, 4 * g - 6 + 2 * b, 0),
        &mut Vec::new(),
    )
}

/// Warning attached to A4 profiles where the stated table and its rational-base proof case differ.
pub fn trigonal_a4_warning(profile: &RamificationProfile) -> Option<String> {
    (profile.group == CoverGroup::Alt4 && profile.g == 0 && profile.count(Symbol::Gamma1) == 0).then(|| {
        "rational base with gamma1 = 0: the stated table is followed, but the rational-base argument \
         identifies the kernel with P(C/U)[2], which is the 'contained' value"
            .to_string()
    })
}

/// Kernel of `P(C/U) → P(Y/Δ)` for S4 covers.
pub fn kernel_s4_iii(profile: &RamificationProfile, p2_in_perp: Option<bool>) -> Result<KernelValue, DecompError> {
    require(profile, CoverGroup::Sym4, "kernel_s4_iii")?;
    genus_table(profile)?;
    let Counts { g, a, b, c, d, .. } = counts(profile);
    let f = "S4 iii kernel";
    let contained = || card(f, 8 * g - 9 + 4 * b + 2 * a + 2 * c + 3 * d, 0);
    if c > 0 || d > 0 {
        return Ok(KernelValue::Exact(contained()?));
    }
    branch_bool(
        "p2_in_perp",
        p2_in_perp,
        ("contained", "not contained"),
        contained(),
        card(f, 8 * g - 10 + 4 * b + 2 * a, 0),
        &mut Vec::new(),
    )
}

/// Kernel of the isogeny built from a `Z` and a `C` not over the same `S`.
pub fn kernel_s4_iv(profile: &RamificationProfile, g_isotropic: Option<bool>) -> Result<KernelValue, DecompError> {
    require(profile, CoverGroup::Sym4, "kernel_s4_iv")?;
    genus_table(profile)?;
    let Counts { g, a, b, c, d, .. } = counts(profile);
    let f = "S4 iv kernel";
    let row1 = || card(f, 6 * g - 8 + 2 * b + 4 * d, 0);
    let row2 = || card(f, 6 * g - 7 + a + 2 * b + 3 * c + 4 * d, 0);
    let row3 = || card(f, 6 * g - 6 + a + 2 * b + 3 * c, 0);
    let row4 = || card(f, 6 * g - 5 + a + 2 * b, 0);
    let row5 = || card(f, 6 * g - 4 + a + 2 * b, 0);
    let labels = ("isotropic", "non-isotropic");
    let mut used = Vec::new();
    Ok(if d > 0 {
        if a == 0 && c == 0 {
            KernelValue::Exact(row1()?)
        } else {
            KernelValue::Exact(row2()?)
        }
    } else if c > 0 {
        if a == 0 {
            KernelValue::Exact(row2()?)
        } else {
            KernelValue::Exact(row3()?)
        }
    } else if a == 0 {
        branch_bool("g_isotropic", g_isotropic, labels, row3(), row4(), &mut used)?
    } else {
        branch_bool("g_isotropic", g_isotropic, labels, row4(), row5(), &mut used)?
    })
}

/// Kernel of the trigonal construction `P(S/R) → P(X/T)`.
pub fn kernel_s4_v(profile: &RamificationProfile, zeta: Option<u8>) -> Result<KernelValue, DecompError> {
    require(profile, CoverGroup::Sym4, "kernel_s4_v")?;
    let table = genus_table(profile)?;
    let Counts { g, a, b, c, d, .. } = counts(profile);
    let f = "S4 trigonal kernel";
    let eps = if a > 0 { 0 } else { 1 };
    if g == 0 && c + d <= 1 {
        let dim = table.genus("S").unwrap() as i64 - table.genus("R").unwrap() as i64;
        return Ok(KernelValue::Exact(card(f, 2 * dim, 0)?));
    }
    if c + d > 1 {
        return Ok(KernelValue::Exact(card(f, 4 * g - 5 + a + 2 * b + c + 2 * d - eps, 0)?));
    }
    if c + d == 1 {
        return Ok(KernelValue::Exact(card(f, 4 * g - 4 + a + 2 * b + d - eps, 0)?));
    }
    let with = |z: i64| card(f, 4 * g - 5 + a + 2 * b - (eps + z), 0);
    match zeta {
        Some(z) if z <= 1 => Ok(KernelValue::Exact(with(z as i64)?)),
        Some(z) => Err(DecompError::BadZeta(z)),
        None => Ok(KernelValue::Conditional {
            flag: "zeta",
            alternatives: vec![("zeta=0".to_string(), with(0)?), ("zeta=1".to_string(), with(1)?)],
        }),
    }
}

/// A rational number `num / den` with big integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ratio {
    pub num: BigUint,
    pub den: BigUint,
}

impl Ratio {
    fn new(num: BigUint, den: BigUint) -> Ratio {
        Ratio { num, den }
    }

    pub fn is_integer(&self) -> bool {
        (&self.num % &self.den) == BigUint::ZERO
    }

    fn same(&self, other: &Ratio) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", &self.num / &self.den)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Both evaluations of the kernels attached to a composite cover `X → Y → Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionVerdict {
    pub consistent: bool,
    pub ker_psi: (Ratio, Ratio),
    pub ker_spp: (Ratio, Ratio),
    pub notes: Vec<String>,
}

/// Checks the kernel identities for `f : X → Y`, `g : Y → Z`, `h = g∘f`.
///
/// `ker_*star` are the orders of the kernels of the pullbacks on Jacobians.
pub fn composition_identity(
    g_y: u32,
    g_z: u32,
    deg_f: u32,
    deg_g: u32,
    ker_fstar: u64,
    ker_gstar: u64,
    ker_hstar: u64,
) -> CompositionVerdict {
    let big = |x: u64| BigUint::from(x);
    let mut notes = Vec::new();
    if g_y < g_z {
        notes.push(format!("genus of Y ({g_y}) is below genus of Z ({g_z})"));
    }
    let prym_exp = 2 * g_y.saturating_sub(g_z);
    let p_yz = BigUint::from(deg_f).pow(prym_exp);
    let kf_kg = big(ker_fstar) * big(ker_gstar);
    let psi_a = Ratio::new(torsion_card(g_y, deg_f) * torsion_card(g_z, deg_g), kf_kg.clone());
    let psi_b = Ratio::new(torsion_card(g_z, deg_f * deg_g) * &p_yz, kf_kg);
    // |g*(JZ) ∩ ker f*| = |ker h*| / |ker g*|
    let meet = Ratio::new(big(ker_hstar), big(ker_gstar));
    if !meet.is_integer() {
        notes.push(format!("|ker h*| = {ker_hstar} is not a multiple of |ker g*| = {ker_gstar}"));
    }
    let spp_a = Ratio::new(&p_yz * &meet.num, big(ker_fstar) * &meet.den);
    // ker psi = ker gamma * ker spp, with |ker gamma| = |JZ[deg h]| / |ker h*|
    let spp_b = Ratio::new(&psi_a.num * big(ker_hstar), &psi_a.den * torsion_card(g_z, deg_f * deg_g));
    for (name, r) in [("ker psi", &psi_a), ("ker spp", &spp_a)] {
        if !r.is_integer() {
            notes.push(format!("{name} = {r} is not an integer"));
        }
    }
    if ker_hstar < ker_gstar {
        notes.push("ker g* must inject into ker h*".to_string());
    }
    let consistent = notes.is_empty() && psi_a.same(&psi_b) && spp_a.same(&spp_b);
    CompositionVerdict { consistent, ker_psi: (psi_a, psi_b), ker_spp: (spp_a, spp_b), notes }
}

/// A named auxiliary kernel in a report.
#[derive(Clone, Debug, serde::Serialize)]
pub struct NamedKernel {
    pub name: String,
    pub map: String,
    #[serde(serialize_with = "ser_kernel_result")]
    pub value: Result<KernelValue, String>,
}

fn ser_kernel_result<S: Serializer>(v: &Result<KernelValue, String>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Ok(k) => k.serialize(s),
        Err(e) => {
            let mut m = s.serialize_map(Some(1))?;
            m.serialize_entry("unavailable", e)?;
            m.end()
        }
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct DecompositionReport {
    pub group: CoverGroup,
    pub factors: Vec<IsogenyFactor>,
    pub dimension_total: u64,
    pub top_genus: u32,
    #[serde(serialize_with = "ser_main")]
    pub kernel: Result<FactoredCard, String>,
    pub secondary: Vec<NamedKernel>,
    pub flags_used: Vec<&'static str>,
    pub warnings: Vec<String>,
}

fn ser_main<S: Serializer>(v: &Result<FactoredCard, String>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Ok(k) => k.serialize(s),
        Err(e) => {
            let mut m = s.serialize_map(Some(1))?;
            m.serialize_entry("unavailable", e)?;
            m.end()
        }
    }
}

impl DecompositionReport {
    pub fn secondary(&self, name: &str) -> Option<&Result<KernelValue, String>> {
        self.secondary.iter().find(|k| k.name == name).map(|k| &k.value)
    }
}

/// Factors, main kernel and every auxiliary kernel that applies to the profile's group.
pub fn report(profile: &RamificationProfile, flags: &Flags) -> Result<DecompositionReport, DecompError> {
    flags.check_for(profile.group)?;
    let table = genus_table(profile)?;
    let factors = factors_from_table(&table);
    let total = dimension_total(&factors);
    if total != table.top_genus as u64 {
        return Err(DecompError::Dimension { total, top: table.top_genus });
    }
    let kernel = kernel_main(profile).map_err(|e| e.to_string());
    let mut secondary = Vec::new();
    let mut warnings = Vec::new();
    let mut flags_used = Vec::new();
    let mut push = |name: &str, map: &str, v: Result<KernelValue, DecompError>| {
        secondary.push(NamedKernel { name: name.to_string(), map: map.to_string(), value: v.map_err(|e| e.to_string()) });
    };
    let exact = |r: Result<FactoredCard, DecompError>| r.map(KernelValue::Exact);
    match profile.group {
        CoverGroup::Klein => {
            for j in KleinElement::ALL {
                let map = match j {
                    KleinElement::Sigma => "P(X_τ/T) × P(X_στ/T) → P(X/X_σ)",
                    KleinElement::Tau => "P(X_σ/T) × P(X_στ/T) → P(X/X_τ)",
                    KleinElement::SigmaTau => "P(X_σ/T) × P(X_τ/T) → P(X/X_στ)",
                };
                push(&format!("pair_{}", j.label()), map, exact(kernel_klein_pair(profile, j)));
            }
            push("varphi", "P(X_στ/T) × P(X_σ/T) × P(X_τ/T) → P(X/T)", exact(kernel_klein_varphi(profile)));
        }
        CoverGroup::Dihedral8 => {
            let v = kernel_bigonal(profile, flags.g_isotropic);
            if flags.g_isotropic.is_some() {
                flags_used.push("g_isotropic");
            }
            push("bigonal", "P(W_s/W_Ks) → P(W_rs/W_Krs)", v);
        }
        CoverGroup::Alt4 => {
            let v = kernel_trigonal_a4(profile, flags.p2_in_perp);
            if flags.p2_in_perp.is_some() && profile.count(Symbol::Gamma1) == 0 {
                flags_used.push("p2_in_perp");
            }
            warnings.extend(trigonal_a4_warning(profile));
            push("trigonal", "P(C/U) → P(Y/Δ)", v);
        }
        CoverGroup::Sym4 => {
            let Counts { g, c, d, .. } = counts(profile);
            if flags.p2_in_perp.is_some() && c == 0 && d == 0 {
                flags_used.push("p2_in_perp");
            }
            push("iii", "P(C/U) → P(Y/Δ)", kernel_s4_iii(profile, flags.p2_in_perp));
            if let Ok(KernelValue::Conditional { .. }) = kernel_s4_iv(profile, None) {
                if flags.g_isotropic.is_some() {
                    flags_used.push("g_isotropic");
                }
            }
            push("iv", "P(Z/S) → P(C/V)", kernel_s4_iv(profile, flags.g_isotropic));
            if flags.zeta.is_some() && g > 0 && c == 0 && d == 0 {
                flags_used.push("zeta");
            }
            push("v", "P(S/R) → P(X/T)", kernel_s4_v(profile, flags.zeta));
            match kernel_s4_stagewise(profile) {
                Ok(st) => {
                    if let Ok(k) = &kernel {
                        if *k != st.product {
                            warnings.push(format!("stagewise S4 kernel {} differs from closed form {k}", st.product));
                        }
                    }
                    push("stagewise", "product of the four stage kernels", Ok(KernelValue::Exact(st.product)));
                }
                Err(e) => push("stagewise", "product of the four stage kernels", Err(e)),
            }
        }
        CoverGroup::Cyclic4 | CoverGroup::Sym3 => {}
    }
    if let Err(e) = &kernel {
        warnings.push(format!("main kernel unavailable: {e}"));
    }
    Ok(DecompositionReport {
        group: profile.group,
        factors,
        dimension_total: total,
        top_genus: table.top_genus,
        kernel,
        secondary,
        flags_used,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::Symbol::*;
    use proptest::prelude::*;

    fn prof(group: CoverGroup, g: u32, c: &[(Symbol, u32)]) -> RamificationProfile {
        RamificationProfile::new(group, g, c).unwrap()
    }

    fn ex(v: KernelValue) -> FactoredCard {
        v.exact().expect("exact value")
    }

    #[test]
    fn factored_card_arithmetic() {
        let a = FactoredCard::new(3, 1);
        assert_eq!(a.decimal(), "24");
        assert_eq!((a * a).decimal(), "576");
        assert_eq!(FactoredCard::ONE.decimal(), "1");
        let big = FactoredCard::new(1_000_000, 1_000_000) * FactoredCard::new(1, 0);
        assert_eq!(big.exp2, 1_000_001);
        assert!(FactoredCard::from_signed("x", -1, 0).is_err());
    }

    #[test]
    fn factor_examples() {
        let f = factors(&RamificationProfile::sym4(0, 4, 0, 3, 0)).unwrap();
        let dims: Vec<(u32, u32)> = f.iter().map(|x| (x.multiplicity, x.dim)).collect();
        assert_eq!(dims, vec![(1, 0), (1, 1), (2, 0), (3, 2), (3, 4)]);
        assert_eq!(dimension_total(&f), 19);
        let a = factors(&prof(CoverGroup::Alt4, 1, &[])).unwrap();
        let labels: Vec<&str> = a.iter().map(|x| x.label.as_str()).collect();
        assert_eq!(labels, vec!["JΔ", "P(U/Δ)", "P(C/U)"]);
        let k = factors(&RamificationProfile::unramified(CoverGroup::Klein, 1)).unwrap();
        assert_eq!(k[0].dim, 1);
        assert!(k[1..].iter().all(|x| x.dim == 0));
    }

    #[test]
    fn kernel_main_examples() {
        assert_eq!(kernel_main(&RamificationProfile::unramified(CoverGroup::Klein, 1)).unwrap(), FactoredCard::pow2(2));
        assert_eq!(kernel_main(&RamificationProfile::sym4(1, 0, 0, 0, 0)).unwrap(), FactoredCard::new(3, 3));
        let a = prof(CoverGroup::Alt4, 1, &[(Beta, 2)]);
        assert_eq!(kernel_main(&a).unwrap(), FactoredCard::new(18, 2));
    }

    #[test]
    fn d4_table_gap_is_reported() {
        let p = prof(CoverGroup::Dihedral8, 1, &[(Alpha, 2), (Delta, 2)]);
        assert!(matches!(kernel_main(&p), Err(DecompError::UncoveredCase(_))));
    }

    #[test]
    fn klein_pair_examples() {
        for j in KleinElement::ALL {
            let u = RamificationProfile::unramified(CoverGroup::Klein, 1);
            assert_eq!(kernel_klein_pair(&u, j).unwrap(), FactoredCard::ONE);
        }
        let p = prof(CoverGroup::Klein, 0, &[(S, 2)]);
        assert_eq!(kernel_klein_pair(&p, KleinElement::Sigma).unwrap(), FactoredCard::pow2(1));
        let q = prof(CoverGroup::Klein, 0, &[(R, 2), (T, 2)]);
        assert_eq!(kernel_klein_pair(&q, KleinElement::Tau).unwrap(), FactoredCard::pow2(1));
    }

    #[test]
    fn klein_varphi_examples() {
        let u = RamificationProfile::unramified(CoverGroup::Klein, 2);
        assert_eq!(kernel_klein_varphi(&u).unwrap(), FactoredCard::pow2(4));
        let p = prof(CoverGroup::Klein, 0, &[(R, 2), (S, 2), (T, 2)]);
        assert_eq!(kernel_klein_varphi(&p).unwrap(), FactoredCard::pow2(3));
        let q = prof(CoverGroup::Klein, 1, &[(R, 2)]);
        assert_eq!(kernel_klein_varphi(&q).unwrap(), FactoredCard::pow2(3));
    }

    #[test]
    fn bigonal_examples() {
        let p = prof(CoverGroup::Dihedral8, 1, &[(Delta, 2)]);
        assert_eq!(ex(kernel_bigonal(&p, None).unwrap()), FactoredCard::pow2(1));
        let q = prof(CoverGroup::Dihedral8, 2, &[(Alpha, 2)]);
        assert_eq!(ex(kernel_bigonal(&q, Some(false)).unwrap()), FactoredCard::pow2(4));
        let r = RamificationProfile::unramified(CoverGroup::Dihedral8, 1);
        match kernel_bigonal(&r, None).unwrap() {
            KernelValue::Conditional { flag, alternatives } => {
                assert_eq!(flag, "g_isotropic");
                assert_eq!(alternatives[0], ("isotropic".to_string(), FactoredCard::ONE));
                assert_eq!(alternatives[1], ("non-isotropic".to_string(), FactoredCard::pow2(1)));
            }
            other => panic!("expected a conditional pair, got {other}"),
        }
    }

    #[test]
    fn trigonal_a4_examples() {
        let p = prof(CoverGroup::Alt4, 0, &[(Beta, 3)]);
        assert_eq!(ex(kernel_trigonal_a4(&p, Some(false)).unwrap()), FactoredCard::ONE);
        assert!(trigonal_a4_warning(&p).is_some());
        let q = prof(CoverGroup::Alt4, 1, &[(Gamma1, 2)]);
        assert_eq!(ex(kernel_trigonal_a4(&q, None).unwrap()), FactoredCard::pow2(1));
        let r = prof(CoverGroup::Alt4, 2, &[]);
        assert_eq!(ex(kernel_trigonal_a4(&r, Some(true)).unwrap()), FactoredCard::pow2(3));
    }

    #[test]
    fn s4_secondary_examples() {
        let p = RamificationProfile::sym4(1, 2, 0, 0, 0);
        assert_eq!(ex(kernel_s4_iii(&p, Some(false)).unwrap()), FactoredCard::pow2(2));
        let q = RamificationProfile::sym4(0, 2, 1, 1, 0);
        assert_eq!(ex(kernel_s4_iii(&q, None).unwrap()), FactoredCard::pow2(1));
        let r = RamificationProfile::sym4(1, 0, 1, 0, 0);
        assert_eq!(ex(kernel_s4_iii(&r, Some(true)).unwrap()), FactoredCard::pow2(3));

        assert_eq!(ex(kernel_s4_iv(&RamificationProfile::sym4(1, 0, 0, 2, 0), None).unwrap()), FactoredCard::pow2(5));
        assert_eq!(
            ex(kernel_s4_iv(&RamificationProfile::sym4(1, 2, 0, 0, 0), Some(true)).unwrap()),
            FactoredCard::pow2(3)
        );
        assert_eq!(
            ex(kernel_s4_iv(&RamificationProfile::sym4(2, 2, 1, 0, 0), Some(false)).unwrap()),
            FactoredCard::pow2(12)
        );

        let s = RamificationProfile::sym4(0, 1, 1, 0, 1);
        let dim = {
            let t = genus_table(&s).unwrap();
            t.genus("S").unwrap() - t.genus("R").unwrap()
        };
        assert_eq!(ex(kernel_s4_v(&s, None).unwrap()), FactoredCard::pow2(2 * dim as u64));
        assert_eq!(ex(kernel_s4_v(&RamificationProfile::sym4(1, 2, 1, 0, 0), Some(0)).unwrap()), FactoredCard::pow2(3));
        assert_eq!(ex(kernel_s4_v(&RamificationProfile::sym4(1, 1, 0, 1, 1), None).unwrap()), FactoredCard::pow2(3));
    }

    #[test]
    fn composition_examples() {
        let v = composition_identity(3, 1, 2, 2, 1, 1, 1);
        assert!(v.consistent);
        assert_eq!(v.ker_psi.0.to_string(), "256");
        let w = composition_identity(2, 0, 2, 2, 2, 1, 1);
        assert!(w.consistent);
        assert_eq!(w.ker_psi.0.to_string(), "8");
        let z = composition_identity(0, 0, 2, 3, 1, 1, 1);
        assert_eq!(z.ker_psi.0.to_string(), "1");
        let bad = composition_identity(1, 0, 2, 2, 1, 2, 3);
        assert!(!bad.consistent);
    }

    #[test]
    fn torsion_examples() {
        assert_eq!(torsion_card(3, 2), BigUint::from(64u32));
        assert_eq!(torsion_card(0, 5), BigUint::from(1u32));
    }

    #[test]
    fn flags_are_strict() {
        let f = Flags { zeta: Some(1), ..Flags::default() };
        assert!(f.check_for(CoverGroup::Sym4).is_ok());
        assert!(f.check_for(CoverGroup::Alt4).is_err());
        let g = Flags { zeta: Some(2), ..Flags::default() };
        assert!(g.check_for(CoverGroup::Sym4).is_err());
    }

    fn valid(group: CoverGroup) -> impl Strategy<Value = RamificationProfile> {
        (0u32..6, proptest::collection::vec(0u32..7, 4))
            .prop_map(move |(g, counts)| {
                let n = group.symbols().len();
                RamificationProfile::from_counts(group, g, counts[..n].to_vec()).unwrap()
            })
            .prop_filter("valid", |p| p.is_valid())
    }

    proptest! {
        #[test]
        fn s4_two_paths_agree(p in valid(CoverGroup::Sym4)) {
            prop_assert_eq!(kernel_main(&p).unwrap(), kernel_s4_stagewise(&p).unwrap().product);
        }

        #[test]
        fn klein_two_paths_agree(p in valid(CoverGroup::Klein)) {
            prop_assert_eq!(kernel_main(&p).unwrap(), kernel_klein_stagewise(&p).unwrap());
            let varphi = kernel_klein_psi(&p, KleinElement::SigmaTau).unwrap()
                * kernel_klein_pair(&p, KleinElement::SigmaTau).unwrap();
            prop_assert_eq!(kernel_klein_varphi(&p).unwrap(), varphi);
        }

        #[test]
        fn dimension_identity_holds(gi in 0usize..6, g in 0u32..6, counts in proptest::collection::vec(0u32..7, 4)) {
            let group = CoverGroup::ALL[gi];
            let n = group.symbols().len();
            let p = RamificationProfile::from_counts(group, g, counts[..n].to_vec()).unwrap();
            prop_assume!(p.is_valid());
            let f = factors(&p).unwrap();
            prop_assert_eq!(dimension_total(&f), genus_table(&p).unwrap().top_genus as u64);
        }

        #[test]
        fn composition_identity_is_consistent_for_compatible_kernels(
            gz in 0u32..4, extra in 0u32..4, df in 1u32..4, dg in 1u32..4, kf in 0u32..3, kg in 0u32..3, meet in 0u32..2,
        ) {
            let gy = gz + extra;
            let (kf, kg) = (1u64 << kf, 1u64 << kg);
            let kh = kg << meet;
            let v = composition_identity(gy, gz, df, dg, kf, kg, kh);
            prop_assert!(v.ker_psi.0 == v.ker_psi.1 || v.ker_psi.0.num.clone() * &v.ker_psi.1.den == v.ker_psi.1.num.clone() * &v.ker_psi.0.den);
            if v.ker_psi.0.is_integer() && v.ker_spp.0.is_integer() {
                prop_assert!(v.consistent, "{:?}", v.notes);
            }
        }
    }
}
