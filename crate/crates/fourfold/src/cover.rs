//! Group kinds, ramification profiles and their consistency rules.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{ConjClass, Perm, PermSet, SubgroupSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProfileError {
    #[error("unknown group {0:?}")]
    UnknownGroup(String),
    #[error("symbol {symbol} is not used by group {group}")]
    UnknownSymbol { group: String, symbol: String },
    #[error("symbol {0} given twice")]
    DuplicateSymbol(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CoverGroup {
    Cyclic4,
    Klein,
    Dihedral8,
    Alt4,
    Sym4,
    Sym3,
}

/// A branch symbol. Config files use the lowercase ASCII name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symbol {
    Alpha,
    Beta,
    Gamma,
    Delta,
    R,
    S,
    T,
    Gamma1,
    Gamma2,
}

impl Symbol {
    pub const ALL: [Symbol; 9] = [
        Symbol::Alpha,
        Symbol::Beta,
        Symbol::Gamma,
        Symbol::Delta,
        Symbol::R,
        Symbol::S,
        Symbol::T,
        Symbol::Gamma1,
        Symbol::Gamma2,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Symbol::Alpha => "alpha",
            Symbol::Beta => "beta",
            Symbol::Gamma => "gamma",
            Symbol::Delta => "delta",
            Symbol::R => "r",
            Symbol::S => "s",
            Symbol::T => "t",
            Symbol::Gamma1 => "gamma1",
            Symbol::Gamma2 => "gamma2",
        }
    }

    pub fn greek(self) -> &'static str {
        match self {
            Symbol::Alpha => "α",
            Symbol::Beta => "β",
            Symbol::Gamma => "γ",
            Symbol::Delta => "δ",
            Symbol::R => "r",
            Symbol::S => "s",
            Symbol::T => "t",
            Symbol::Gamma1 => "γ1",
            Symbol::Gamma2 => "γ2",
        }
    }

    pub fn from_key(key: &str) -> Option<Symbol> {
        Symbol::ALL.into_iter().find(|s| s.key() == key)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

fn perm(s: &str) -> Perm {
    s.parse().expect("fixed representatives parse")
}

/// How one branch symbol is realized inside the group.
#[derive(Clone, Debug)]
pub struct BranchClass {
    pub symbol: Symbol,
    /// Fixed representative used for Riemann-Hurwitz counts.
    pub representative: Perm,
    /// Every element of the group allowed as local monodromy for this symbol.
    pub members: PermSet,
}

impl BranchClass {
    pub fn order(&self) -> u32 {
        self.representative.order()
    }

    pub fn class(&self) -> ConjClass {
        self.representative.cycle_type()
    }
}

impl CoverGroup {
    pub const ALL: [CoverGroup; 6] = [
        CoverGroup::Cyclic4,
        CoverGroup::Klein,
        CoverGroup::Dihedral8,
        CoverGroup::Alt4,
        CoverGroup::Sym4,
        CoverGroup::Sym3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CoverGroup::Cyclic4 => "CYCLIC4",
            CoverGroup::Klein => "KLEIN",
            CoverGroup::Dihedral8 => "DIHEDRAL8",
            CoverGroup::Alt4 => "ALT4",
            CoverGroup::Sym4 => "SYM4",
            CoverGroup::Sym3 => "SYM3",
        }
    }

    pub fn order(self) -> u32 {
        match self {
            CoverGroup::Cyclic4 | CoverGroup::Klein => 4,
            CoverGroup::Dihedral8 => 8,
            CoverGroup::Alt4 => 12,
            CoverGroup::Sym4 => 24,
            CoverGroup::Sym3 => 6,
        }
    }

    /// The embedding of the group in S4 used throughout.
    pub fn subgroup(self) -> SubgroupSpec {
        match self {
            CoverGroup::Cyclic4 => SubgroupSpec::C4(1, 3, 2, 4),
            CoverGroup::Klein => SubgroupSpec::KleinNormal,
            CoverGroup::Dihedral8 => SubgroupSpec::D4(2),
            CoverGroup::Alt4 => SubgroupSpec::A4,
            CoverGroup::Sym4 => SubgroupSpec::S4,
            CoverGroup::Sym3 => SubgroupSpec::S3(4),
        }
    }

    pub fn elements(self) -> PermSet {
        self.subgroup().elements()
    }

    /// Profile symbols in block order.
    pub fn symbols(self) -> &'static [Symbol] {
        use Symbol::*;
        match self {
            CoverGroup::Cyclic4 => &[Delta, Gamma],
            CoverGroup::Klein => &[S, T, R],
            CoverGroup::Dihedral8 => &[Alpha, Gamma1, Gamma2, Delta],
            CoverGroup::Alt4 => &[Beta, Gamma1],
            CoverGroup::Sym4 => &[Alpha, Beta, Gamma, Delta],
            CoverGroup::Sym3 => &[Alpha, Beta],
        }
    }

    /// Branch classes in block order.
    ///
    /// D4 is generated by `r = (1 3 2 4)` and `s = (1 2)`; Klein uses
    /// `σ = (1 2)(3 4)`, `τ = (1 3)(2 4)`.
    pub fn branch_classes(self) -> Vec<BranchClass> {
        let set = |xs: &[&str]| xs.iter().map(|s| perm(s)).collect::<PermSet>();
        let within = |c: ConjClass| c.elements().intersection(&self.elements());
        let bc = |symbol, rep: &str, members: PermSet| BranchClass { symbol, representative: perm(rep), members };
        use Symbol::*;
        match self {
            CoverGroup::Cyclic4 => vec![
                bc(Delta, "(1 3 2 4)", set(&["(1 3 2 4)", "(1 4 2 3)"])),
                bc(Gamma, "(1 2)(3 4)", set(&["(1 2)(3 4)"])),
            ],
            CoverGroup::Klein => vec![
                bc(S, "(1 2)(3 4)", set(&["(1 2)(3 4)"])),
                bc(T, "(1 3)(2 4)", set(&["(1 3)(2 4)"])),
                bc(R, "(1 4)(2 3)", set(&["(1 4)(2 3)"])),
            ],
            CoverGroup::Dihedral8 => vec![
                bc(Alpha, "(1 2)", set(&["(1 2)", "(3 4)"])),
                bc(Gamma1, "(1 4)(2 3)", set(&["(1 4)(2 3)", "(1 3)(2 4)"])),
                bc(Gamma2, "(1 2)(3 4)", set(&["(1 2)(3 4)"])),
                bc(Delta, "(1 3 2 4)", set(&["(1 3 2 4)", "(1 4 2 3)"])),
            ],
            CoverGroup::Alt4 => vec![
                bc(Beta, "(1 2 3)", within(ConjClass::ThreeCycle)),
                bc(Gamma1, "(1 2)(3 4)", within(ConjClass::DoubleTransposition)),
            ],
            CoverGroup::Sym4 => vec![
                bc(Alpha, "(1 2)", within(ConjClass::Transposition)),
                bc(Beta, "(1 2 3)", within(ConjClass::ThreeCycle)),
                bc(Gamma, "(1 2)(3 4)", within(ConjClass::DoubleTransposition)),
                bc(Delta, "(1 2 3 4)", within(ConjClass::FourCycle)),
            ],
            CoverGroup::Sym3 => vec![
                bc(Alpha, "(1 2 3)", within(ConjClass::ThreeCycle)),
                bc(Beta, "(1 2)", within(ConjClass::Transposition)),
            ],
        }
    }

    pub fn branch_class(self, symbol: Symbol) -> Option<BranchClass> {
        self.branch_classes().into_iter().find(|c| c.symbol == symbol)
    }
}

impl fmt::Display for CoverGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CoverGroup {
    type Err = ProfileError;

    fn from_str(s: &str) -> Result<CoverGroup, ProfileError> {
        match s.trim().to_uppercase().as_str() {
            "CYCLIC4" | "Z4" | "C4" => Ok(CoverGroup::Cyclic4),
            "KLEIN" | "K4" | "V4" => Ok(CoverGroup::Klein),
            "DIHEDRAL8" | "D4" | "D8" => Ok(CoverGroup::Dihedral8),
            "ALT4" | "A4" => Ok(CoverGroup::Alt4),
            "SYM4" | "S4" => Ok(CoverGroup::Sym4),
            "SYM3" | "S3" => Ok(CoverGroup::Sym3),
            _ => Err(ProfileError::UnknownGroup(s.to_string())),
        }
    }
}

/// Branch data of a Galois cover over a base of genus `g`.
///
/// For CYCLIC4 the `gamma` count is the paper-style even number of fixed
/// points; the number of order-2 branch points is `gamma / 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RamificationProfile {
    pub group: CoverGroup,
    pub g: u32,
    counts: Vec<u32>,
}

impl RamificationProfile {
    /// Builds a profile; symbols not mentioned are zero.
    pub fn new(group: CoverGroup, g: u32, counts: &[(Symbol, u32)]) -> Result<Self, ProfileError> {
        let mut values = vec![0u32; group.symbols().len()];
        let mut seen = Vec::new();
        for &(sym, n) in counts {
            let pos = group.symbols().iter().position(|&s| s == sym).ok_or_else(|| ProfileError::UnknownSymbol {
                group: group.name().to_string(),
                symbol: sym.key().to_string(),
            })?;
            if seen.contains(&sym) {
                return Err(ProfileError::DuplicateSymbol(sym.key().to_string()));
            }
            seen.push(sym);
            values[pos] = n;
        }
        Ok(RamificationProfile { group, g, counts: values })
    }

    /// Counts in [`CoverGroup::symbols`] order.
    pub fn from_counts(group: CoverGroup, g: u32, counts: Vec<u32>) -> Result<Self, ProfileError> {
        if counts.len() != group.symbols().len() {
            return Err(ProfileError::UnknownSymbol {
                group: group.name().to_string(),
                symbol: format!("{} counts given", counts.len()),
            });
        }
        Ok(RamificationProfile { group, g, counts })
    }

    pub fn sym4(g: u32, alpha: u32, beta: u32, gamma: u32, delta: u32) -> Self {
        RamificationProfile { group: CoverGroup::Sym4, g, counts: vec![alpha, beta, gamma, delta] }
    }

    pub fn unramified(group: CoverGroup, g: u32) -> Self {
        RamificationProfile { group, g, counts: vec![0; group.symbols().len()] }
    }

    /// The raw count of `sym`; zero for symbols foreign to the group.
    pub fn count(&self, sym: Symbol) -> u32 {
        self.group.symbols().iter().position(|&s| s == sym).map_or(0, |i| self.counts[i])
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn symbol_counts(&self) -> BTreeMap<Symbol, u32> {
        self.group.symbols().iter().copied().zip(self.counts.iter().copied()).collect()
    }

    /// Number of branch points carrying `sym`.
    pub fn points(&self, sym: Symbol) -> u32 {
        let n = self.count(sym);
        if self.group == CoverGroup::Cyclic4 && sym == Symbol::Gamma {
            n / 2
        } else {
            n
        }
    }

    /// Cyclic-case point count of order-2 branch points.
    pub fn gamma_half(&self) -> u32 {
        self.count(Symbol::Gamma) / 2
    }

    /// Branch points in block order, each with its class.
    pub fn branch_points(&self) -> Vec<BranchClass> {
        let mut out = Vec::new();
        for class in self.group.branch_classes() {
            for _ in 0..self.points(class.symbol) {
                out.push(class.clone());
            }
        }
        out
    }

    pub fn branch_count(&self) -> u32 {
        self.group.symbols().iter().map(|&s| self.points(s)).sum()
    }

    pub fn signature(&self) -> SignatureType {
        let periods = self.branch_points().iter().map(BranchClass::order).collect();
        SignatureType { genus: self.g, periods }
    }

    /// Every parity and genus-0 connectivity rule this profile breaks.
    pub fn validate(&self) -> Vec<Violation> {
        let c = |s| self.count(s) as i64;
        use Symbol::*;
        let mut parity: Vec<(String, i64)> = Vec::new();
        let mut minimum: Vec<(String, i64, i64)> = Vec::new();
        match self.group {
            CoverGroup::Cyclic4 => {
                parity.push(("gamma".into(), c(Gamma)));
                parity.push(("delta".into(), c(Delta)));
                minimum.push(("delta".into(), c(Delta), 2));
            }
            CoverGroup::Klein => {
                for s in [R, S, T] {
                    parity.push((s.key().into(), c(s)));
                }
                minimum.push(("r + s".into(), c(R) + c(S), 2));
                minimum.push(("r + t".into(), c(R) + c(T), 2));
                minimum.push(("s + t".into(), c(S) + c(T), 2));
            }
            CoverGroup::Dihedral8 => {
                for (label, v) in [
                    ("gamma1 + delta", c(Gamma1) + c(Delta)),
                    ("alpha + delta", c(Alpha) + c(Delta)),
                    ("alpha + gamma1", c(Alpha) + c(Gamma1)),
                ] {
                    parity.push((label.into(), v));
                    minimum.push((label.into(), v, 2));
                }
            }
            CoverGroup::Alt4 => {
                minimum.push(("beta".into(), c(Beta), 2));
                minimum.push(("beta + gamma1".into(), c(Beta) + c(Gamma1), 3));
            }
            CoverGroup::Sym4 => {
                parity.push(("alpha + delta".into(), c(Alpha) + c(Delta)));
                minimum.push(("alpha + delta".into(), c(Alpha) + c(Delta), 2));
                minimum.push(("beta".into(), c(Beta), 1));
                minimum.push(("gamma + delta".into(), c(Gamma) + c(Delta), 1));
            }
            CoverGroup::Sym3 => {
                parity.push(("beta".into(), c(Beta)));
                minimum.push(("beta".into(), c(Beta), 2));
                minimum.push(("2 alpha + beta".into(), 2 * c(Alpha) + c(Beta), 4));
            }
        }
        let mut out: Vec<Violation> = parity
            .into_iter()
            .filter(|(_, v)| v % 2 != 0)
            .map(|(expr, value)| Violation { kind: ViolationKind::Parity, expression: expr, value, bound: 0 })
            .collect();
        if self.g == 0 {
            out.extend(minimum.into_iter().filter(|(_, v, b)| v < b).map(|(expr, value, bound)| Violation {
                kind: ViolationKind::Connectivity,
                expression: expr,
                value,
                bound,
            }));
        }
        out
    }

    pub fn parity_violations(&self) -> Vec<Violation> {
        self.validate().into_iter().filter(|v| v.kind == ViolationKind::Parity).collect()
    }

    pub fn is_parity_valid(&self) -> bool {
        self.parity_violations().is_empty()
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }
}

impl fmt::Display for RamificationProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} g={}", self.group, self.g)?;
        for (s, n) in self.group.symbols().iter().zip(&self.counts) {
            write!(f, " {}={}", s.greek(), n)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// `expression` must be even.
    Parity,
    /// With a rational base, `expression >= bound` is needed for connected intermediate covers.
    Connectivity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub expression: String,
    pub value: i64,
    pub bound: i64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ViolationKind::Parity => write!(f, "{} = {} must be even", self.expression, self.value),
            ViolationKind::Connectivity => {
                write!(f, "{} = {} must be at least {} when g = 0", self.expression, self.value, self.bound)
            }
        }
    }
}

/// Base genus together with the branch orders.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureType {
    pub genus: u32,
    pub periods: Vec<u32>,
}

impl fmt::Display for SignatureType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.periods.is_empty() {
            return write!(f, "({}; -)", self.genus);
        }
        let p: Vec<String> = self.periods.iter().map(u32::to_string).collect();
        write!(f, "({}; {})", self.genus, p.join(", "))
    }
}
