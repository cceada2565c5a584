//! Reference tables shipped with the crate, and the linear-form language
//! used to state closed-form genera.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::Deserialize;
use thiserror::Error;

use crate::cover::{CoverGroup, RamificationProfile, Symbol};

pub const GENUS_FORMS: &str = include_str!("../data/genus_forms.toml");
pub const FAMILIES: &str = include_str!("../data/families.toml");
pub const ONE_PARAM: &str = include_str!("../data/one_param.toml");
pub const RIGID: &str = include_str!("../data/rigid.toml");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("cannot parse term {0:?}")]
    BadTerm(String),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
}

/// `c0 + Σ c_v · v`, divided by `den`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    pub constant: i64,
    pub terms: Vec<(String, i64)>,
    pub den: i64,
}

const VARIABLES: [&str; 10] = ["g", "alpha", "beta", "gamma", "delta", "r", "s", "t", "gamma1", "gamma2"];

impl FromStr for LinearForm {
    type Err = FormError;

    /// Accepts forms such as `24g - 23 + 6alpha + 9delta`.
    fn from_str(src: &str) -> Result<LinearForm, FormError> {
        let mut form = LinearForm { constant: 0, terms: Vec::new(), den: 1 };
        let spaced = src.replace('-', " - ").replace('+', " + ");
        let mut sign = 1i64;
        for tok in spaced.split_whitespace() {
            match tok {
                "+" => continue,
                "-" => {
                    sign = -sign;
                    continue;
                }
                _ => {}
            }
            let split = tok.find(|c: char| !c.is_ascii_digit()).unwrap_or(tok.len());
            let (digits, var) = tok.split_at(split);
            let coef: i64 = if digits.is_empty() {
                if var.is_empty() {
                    return Err(FormError::BadTerm(tok.to_string()));
                }
                1
            } else {
                digits.parse().map_err(|_| FormError::BadTerm(tok.to_string()))?
            };
            if var.is_empty() {
                form.constant += sign * coef;
            } else if VARIABLES.contains(&var) {
                form.terms.push((var.to_string(), sign * coef));
            } else {
                return Err(FormError::UnknownVariable(var.to_string()));
            }
            sign = 1;
        }
        Ok(form)
    }
}

impl LinearForm {
    /// `None` when the numerator is not divisible by `den`.
    pub fn eval(&self, vars: &BTreeMap<&str, i64>) -> Option<i64> {
        let mut n = self.constant;
        for (v, c) in &self.terms {
            n += c * vars.get(v.as_str()).copied().unwrap_or(0);
        }
        (n % self.den == 0).then_some(n / self.den)
    }
}

/// `g` and the raw branch counts of `profile`, keyed by their config names.
pub fn variables(profile: &RamificationProfile) -> BTreeMap<&'static str, i64> {
    let mut vars = BTreeMap::new();
    vars.insert("g", profile.g as i64);
    for &s in Symbol::ALL.iter() {
        vars.insert(s.key(), profile.count(s) as i64);
    }
    vars
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawForm {
    #[serde(default)]
    curve: Option<String>,
    #[serde(default)]
    from: Option<String>,
    #[serde(default)]
    to: Option<String>,
    form: String,
    #[serde(default = "one")]
    den: i64,
}

fn one() -> i64 {
    1
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroupForms {
    name: String,
    curves: Vec<RawForm>,
    arrows: Vec<RawForm>,
}

#[derive(Clone, Debug, Deserialize)]
struct RawGenusForms {
    group: Vec<RawGroupForms>,
}

/// Closed forms for the genus table of one group.
#[derive(Clone, Debug)]
pub struct GenusForms {
    pub group: CoverGroup,
    pub curves: Vec<(String, LinearForm)>,
    pub arrows: Vec<((String, String), LinearForm)>,
}

fn parse_form(raw: &RawForm) -> LinearForm {
    let mut f: LinearForm = raw.form.parse().expect("embedded forms parse");
    f.den = raw.den;
    f
}

/// Closed forms for every group that has them (all but SYM3).
pub fn genus_forms() -> Vec<GenusForms> {
    let raw: RawGenusForms = toml::from_str(GENUS_FORMS).expect("embedded genus forms parse");
    raw.group
        .iter()
        .map(|g| GenusForms {
            group: g.name.parse().expect("embedded group names parse"),
            curves: g.curves.iter().map(|c| (c.curve.clone().expect("curve name"), parse_form(c))).collect(),
            arrows: g
                .arrows
                .iter()
                .map(|a| ((a.from.clone().expect("arrow source"), a.to.clone().expect("arrow target")), parse_form(a)))
                .collect(),
        })
        .collect()
}

pub fn genus_forms_for(group: CoverGroup) -> Option<GenusForms> {
    genus_forms().into_iter().find(|f| f.group == group)
}

/// Affine function of the family parameter: `[a, b]` means `a + b·γ`.
pub type Affine = [i64; 2];

pub fn affine(a: Affine, x: i64) -> i64 {
    a[0] + a[1] * x
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyRow {
    pub case: String,
    pub alpha: u32,
    pub beta: u32,
    pub delta: u32,
    pub gamma_min: u32,
    pub g_delta: Affine,
    pub g_s: Affine,
    pub g_v: Affine,
    pub g_w: Affine,
    pub deg_exp2: Affine,
    pub deg_exp3: i64,
    pub moduli: Affine,
}

impl FamilyRow {
    pub fn profile(&self, gamma: u32) -> RamificationProfile {
        RamificationProfile::sym4(0, self.alpha, self.beta, gamma, self.delta)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbsentRow {
    pub case: String,
    pub alpha: u32,
    pub beta: u32,
    pub gamma: u32,
    pub delta: u32,
}

impl AbsentRow {
    pub fn profile(&self) -> RamificationProfile {
        RamificationProfile::sym4(0, self.alpha, self.beta, self.gamma, self.delta)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Families {
    pub row: Vec<FamilyRow>,
    pub absent: Vec<AbsentRow>,
}

pub fn families() -> Families {
    toml::from_str(FAMILIES).expect("embedded families table parses")
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct Degree {
    pub exp2: u64,
    pub exp3: u64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OneParamRow {
    pub case: String,
    pub g: u32,
    pub alpha: u32,
    pub beta: u32,
    pub gamma: u32,
    pub delta: u32,
    pub genera: BTreeMap<String, u32>,
    #[serde(default)]
    pub degree: Option<Degree>,
}

impl OneParamRow {
    pub fn profile(&self) -> RamificationProfile {
        RamificationProfile::sym4(self.g, self.alpha, self.beta, self.gamma, self.delta)
    }
}

#[derive(Clone, Debug, Deserialize)]
struct OneParamFile {
    row: Vec<OneParamRow>,
}

pub fn one_param() -> Vec<OneParamRow> {
    let f: OneParamFile = toml::from_str(ONE_PARAM).expect("embedded one-parameter table parses");
    f.row
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RigidRow {
    pub case: String,
    pub alpha: u32,
    pub beta: u32,
    pub gamma: u32,
    pub delta: u32,
    pub g_w: u32,
    pub cover_degree: u32,
    #[serde(default)]
    pub isogeny: Option<Degree>,
}

impl RigidRow {
    pub fn profile(&self) -> RamificationProfile {
        RamificationProfile::sym4(0, self.alpha, self.beta, self.gamma, self.delta)
    }
}

#[derive(Clone, Debug, Deserialize)]
struct RigidFile {
    row: Vec<RigidRow>,
}

pub fn rigid() -> Vec<RigidRow> {
    let f: RigidFile = toml::from_str(RIGID).expect("embedded rigid table parses");
    f.row
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms_parse_and_evaluate() {
        let f: LinearForm = "24g - 23 + 6alpha + 8beta".parse().unwrap();
        let mut v = BTreeMap::new();
        v.insert("g", 1);
        v.insert("alpha", 2);
        v.insert("beta", 0);
        assert_eq!(f.eval(&v), Some(13));
        let h = LinearForm { den: 2, ..f };
        assert_eq!(h.eval(&v), None);
        assert_eq!("-3 + gamma1".parse::<LinearForm>().unwrap().constant, -3);
        assert!(matches!("2x".parse::<LinearForm>(), Err(FormError::UnknownVariable(_))));
    }

    #[test]
    fn embedded_tables_load() {
        assert_eq!(genus_forms().len(), 5);
        let f = families();
        assert_eq!(f.row.len(), 8);
        assert_eq!(f.absent.len(), 2);
        assert_eq!(one_param().len(), 11);
        assert_eq!(rigid().len(), 2);
    }

    #[test]
    fn form_names_match_the_lattice() {
        for forms in genus_forms() {
            let names: Vec<&str> = crate::genus::lattice(forms.group).iter().map(|c| c.name).collect();
            for (c, _) in &forms.curves {
                assert!(names.contains(&c.as_str()), "{c}");
            }
            let arrows = crate::genus::arrows(forms.group);
            assert_eq!(arrows.len(), forms.arrows.len());
            for ((a, b), _) in &forms.arrows {
                assert!(arrows.contains(&(a.as_str(), b.as_str())), "{a} -> {b}");
            }
        }
    }
}
