//! Permutations of {1,2,3,4}, the named subgroups of S4 and coset actions.
//!
//! Composition is right-to-left: `p.compose(q)` applies `q` first.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("cannot parse permutation {0:?}")]
    Parse(String),
    #[error("unknown subgroup name {0:?}")]
    UnknownSubgroup(String),
    #[error("{sub} is not contained in {sup}")]
    NotContained { sub: String, sup: String },
    #[error("{elem} is not an element of {group}")]
    NotInGroup { elem: String, group: String },
}

/// A permutation of four symbols stored as 0-based images.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm([u8; 4]);

impl Perm {
    pub const IDENTITY: Perm = Perm([0, 1, 2, 3]);

    /// Builds from 1-based images: position `i` holds the image of `i + 1`.
    pub fn from_images(images: [u8; 4]) -> Result<Perm, PermError> {
        let mut seen = [false; 4];
        let mut out = [0u8; 4];
        for (i, &v) in images.iter().enumerate() {
            if !(1..=4).contains(&v) || seen[(v - 1) as usize] {
                return Err(PermError::Parse(format!("{images:?}")));
            }
            seen[(v - 1) as usize] = true;
            out[i] = v - 1;
        }
        Ok(Perm(out))
    }

    /// 1-based images.
    pub fn images(&self) -> [u8; 4] {
        self.0.map(|v| v + 1)
    }

    /// Image of the 1-based symbol `x`.
    pub fn apply(&self, x: u8) -> u8 {
        self.0[(x - 1) as usize] + 1
    }

    /// Builds the permutation with the given disjoint cycles (1-based symbols).
    pub fn from_cycles(cycles: &[&[u8]]) -> Result<Perm, PermError> {
        let mut img = [0u8, 1, 2, 3];
        let mut used = [false; 4];
        for cyc in cycles {
            for (i, &x) in cyc.iter().enumerate() {
                if !(1..=4).contains(&x) || used[(x - 1) as usize] {
                    return Err(PermError::Parse(format!("{cycles:?}")));
                }
                used[(x - 1) as usize] = true;
                let next = cyc[(i + 1) % cyc.len()];
                img[(x - 1) as usize] = next - 1;
            }
        }
        Ok(Perm(img))
    }

    pub fn compose(&self, q: &Perm) -> Perm {
        let mut out = [0u8; 4];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.0[q.0[i] as usize];
        }
        Perm(out)
    }

    pub fn inverse(&self) -> Perm {
        let mut out = [0u8; 4];
        for (i, &v) in self.0.iter().enumerate() {
            out[v as usize] = i as u8;
        }
        Perm(out)
    }

    /// `g p g^-1`.
    pub fn conjugate_by(&self, g: &Perm) -> Perm {
        g.compose(self).compose(&g.inverse())
    }

    /// Disjoint cycles of length at least two, each starting at its smallest symbol (1-based).
    pub fn cycles(&self) -> Vec<Vec<u8>> {
        let mut seen = [false; 4];
        let mut out = Vec::new();
        for start in 0..4u8 {
            if seen[start as usize] {
                continue;
            }
            let mut cyc = vec![start + 1];
            seen[start as usize] = true;
            let mut x = self.0[start as usize];
            while x != start {
                seen[x as usize] = true;
                cyc.push(x + 1);
                x = self.0[x as usize];
            }
            if cyc.len() > 1 {
                out.push(cyc);
            }
        }
        out
    }

    pub fn cycle_type(&self) -> ConjClass {
        let mut lens: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        lens.sort_unstable();
        match lens.as_slice() {
            [] => ConjClass::Id,
            [2] => ConjClass::Transposition,
            [2, 2] => ConjClass::DoubleTransposition,
            [3] => ConjClass::ThreeCycle,
            [4] => ConjClass::FourCycle,
            _ => unreachable!("degree four has no other cycle types"),
        }
    }

    pub fn order(&self) -> u32 {
        self.cycle_type().order()
    }

    /// +1 for even permutations, -1 for odd ones.
    pub fn sign(&self) -> i32 {
        self.cycle_type().sign()
    }

    /// Position of this permutation in [`all_perms`].
    pub fn index(&self) -> usize {
        // Lehmer code in lexicographic order.
        let mut idx = 0usize;
        for i in 0..4 {
            let smaller = (i + 1..4).filter(|&j| self.0[j] < self.0[i]).count();
            idx = idx * (4 - i) + smaller;
        }
        idx
    }

    pub fn from_index(i: usize) -> Perm {
        all_perms()[i]
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "e");
        }
        for cyc in cycles {
            let parts: Vec<String> = cyc.iter().map(u8::to_string).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Perm {
    type Err = PermError;

    /// Cycle notation such as `(1 2)(3 4)`, `(13)(24)` or `e`. Whitespace is ignored.
    fn from_str(s: &str) -> Result<Perm, PermError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let err = || PermError::Parse(s.to_string());
        if compact == "e" || compact == "id" || compact == "()" {
            return Ok(Perm::IDENTITY);
        }
        if compact.is_empty() {
            return Err(err());
        }
        let mut cycles: Vec<Vec<u8>> = Vec::new();
        let mut current: Option<Vec<u8>> = None;
        for ch in compact.chars() {
            match ch {
                '(' if current.is_none() => current = Some(Vec::new()),
                ')' => {
                    let cyc = current.take().ok_or_else(err)?;
                    if cyc.is_empty() {
                        return Err(err());
                    }
                    cycles.push(cyc);
                }
                ',' if current.is_some() => {}
                '1'..='4' => current.as_mut().ok_or_else(err)?.push(ch as u8 - b'0'),
                _ => return Err(err()),
            }
        }
        if current.is_some() {
            return Err(err());
        }
        let refs: Vec<&[u8]> = cycles.iter().map(Vec::as_slice).collect();
        Perm::from_cycles(&refs).map_err(|_| err())
    }
}

impl Serialize for Perm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Perm, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All 24 permutations in lexicographic order of their image arrays.
pub fn all_perms() -> &'static [Perm; 24] {
    static ALL: OnceLock<[Perm; 24]> = OnceLock::new();
    ALL.get_or_init(|| {
        let mut out = [Perm::IDENTITY; 24];
        let mut n = 0;
        for a in 0..4u8 {
            for b in 0..4u8 {
                for c in 0..4u8 {
                    for d in 0..4u8 {
                        let v = [a, b, c, d];
                        let mut seen = [false; 4];
                        if v.iter().all(|&x| !std::mem::replace(&mut seen[x as usize], true)) {
                            out[n] = Perm(v);
                            n += 1;
                        }
                    }
                }
            }
        }
        out
    })
}

fn mul_table() -> &'static [[u8; 24]; 24] {
    static TABLE: OnceLock<[[u8; 24]; 24]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let all = all_perms();
        let mut t = [[0u8; 24]; 24];
        for (i, p) in all.iter().enumerate() {
            for (j, q) in all.iter().enumerate() {
                t[i][j] = p.compose(q).index() as u8;
            }
        }
        t
    })
}

/// Index of `compose(all[i], all[j])`.
#[inline]
pub fn mul_index(i: usize, j: usize) -> usize {
    mul_table()[i][j] as usize
}

pub fn inv_index(i: usize) -> usize {
    static INV: OnceLock<[u8; 24]> = OnceLock::new();
    INV.get_or_init(|| {
        let mut t = [0u8; 24];
        for (i, p) in all_perms().iter().enumerate() {
            t[i] = p.inverse().index() as u8;
        }
        t
    })[i] as usize
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ConjClass {
    Id,
    Transposition,
    DoubleTransposition,
    ThreeCycle,
    FourCycle,
}

impl ConjClass {
    pub const ALL: [ConjClass; 5] = [
        ConjClass::Id,
        ConjClass::Transposition,
        ConjClass::DoubleTransposition,
        ConjClass::ThreeCycle,
        ConjClass::FourCycle,
    ];

    pub fn order(self) -> u32 {
        match self {
            ConjClass::Id => 1,
            ConjClass::Transposition | ConjClass::DoubleTransposition => 2,
            ConjClass::ThreeCycle => 3,
            ConjClass::FourCycle => 4,
        }
    }

    pub fn sign(self) -> i32 {
        match self {
            ConjClass::Transposition | ConjClass::FourCycle => -1,
            _ => 1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ConjClass::Id => "ID",
            ConjClass::Transposition => "TRANSPOSITION",
            ConjClass::DoubleTransposition => "DOUBLE_TRANSPOSITION",
            ConjClass::ThreeCycle => "THREE_CYCLE",
            ConjClass::FourCycle => "FOUR_CYCLE",
        }
    }

    pub fn elements(self) -> PermSet {
        PermSet::from_iter(all_perms().iter().copied().filter(|p| p.cycle_type() == self))
    }
}

/// A subset of S4 as a bitmask over [`Perm::index`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PermSet(pub u32);

impl PermSet {
    pub const EMPTY: PermSet = PermSet(0);
    pub const FULL: PermSet = PermSet((1 << 24) - 1);

    pub fn singleton(p: Perm) -> PermSet {
        PermSet(1 << p.index())
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.0 >> p.index() & 1 == 1
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, p: Perm) {
        self.0 |= 1 << p.index();
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(&self, other: &PermSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(&self, other: &PermSet) -> PermSet {
        PermSet(self.0 | other.0)
    }

    pub fn intersection(&self, other: &PermSet) -> PermSet {
        PermSet(self.0 & other.0)
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..24).filter(move |i| bits >> i & 1 == 1)
    }

    pub fn iter(self) -> impl Iterator<Item = Perm> {
        self.indices().map(Perm::from_index)
    }

    /// `{ p x : x in self }`.
    pub fn left_mul(&self, p: &Perm) -> PermSet {
        let pi = p.index();
        let mut out = 0u32;
        for i in self.indices() {
            out |= 1 << mul_index(pi, i);
        }
        PermSet(out)
    }

    /// `{ x p : x in self }`.
    pub fn right_mul(&self, p: &Perm) -> PermSet {
        let pi = p.index();
        let mut out = 0u32;
        for i in self.indices() {
            out |= 1 << mul_index(i, pi);
        }
        PermSet(out)
    }

    pub fn conjugate_by(&self, g: &Perm) -> PermSet {
        PermSet::from_iter(self.iter().map(|p| p.conjugate_by(g)))
    }

    /// The subgroup generated by the elements of `self`.
    pub fn generated(&self) -> PermSet {
        let gens: Vec<usize> = self.indices().collect();
        let mut group = 1u32 << Perm::IDENTITY.index();
        let mut frontier = vec![Perm::IDENTITY.index()];
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = mul_index(x, g);
                if group >> y & 1 == 0 {
                    group |= 1 << y;
                    frontier.push(y);
                }
            }
        }
        PermSet(group)
    }

    pub fn is_subgroup(&self) -> bool {
        if !self.contains(&Perm::IDENTITY) {
            return false;
        }
        self.indices().all(|i| {
            self.contains_index(inv_index(i)) && self.indices().all(|j| self.contains_index(mul_index(i, j)))
        })
    }

    /// True when the group acts transitively on the four symbols.
    pub fn is_transitive(&self) -> bool {
        let mut reached = [false; 4];
        reached[0] = true;
        for p in self.iter() {
            reached[p.apply(1) as usize - 1] = true;
        }
        reached.iter().all(|&r| r)
    }
}

impl FromIterator<Perm> for PermSet {
    fn from_iter<I: IntoIterator<Item = Perm>>(iter: I) -> PermSet {
        let mut s = PermSet::EMPTY;
        for p in iter {
            s.insert(p);
        }
        s
    }
}

/// Named subgroups of S4. Symbols are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubgroupSpec {
    Trivial,
    /// `<(a b)>`
    T2(u8, u8),
    /// `<(a b)(c d)>`
    T2x2(u8, u8, u8, u8),
    /// `<(a b c)>`
    C3(u8, u8, u8),
    /// `<(a b c d)>`
    C4(u8, u8, u8, u8),
    KleinNormal,
    /// `{e, (a b), (c d), (a b)(c d)}`
    Klein(u8, u8, u8, u8),
    /// Stabilizer of one symbol.
    S3(u8),
    /// Dihedral group whose central involution is `(1 j)(k l)`.
    D4(u8),
    A4,
    S4,
}

impl SubgroupSpec {
    pub fn generators(&self) -> Vec<Perm> {
        let c = |cycles: &[&[u8]]| Perm::from_cycles(cycles).expect("catalog entries are valid");
        match *self {
            SubgroupSpec::Trivial => vec![],
            SubgroupSpec::T2(a, b) => vec![c(&[&[a, b]])],
            SubgroupSpec::T2x2(a, b, x, y) => vec![c(&[&[a, b], &[x, y]])],
            SubgroupSpec::C3(a, b, x) => vec![c(&[&[a, b, x]])],
            SubgroupSpec::C4(a, b, x, y) => vec![c(&[&[a, b, x, y]])],
            SubgroupSpec::KleinNormal => vec![c(&[&[1, 2], &[3, 4]]), c(&[&[1, 3], &[2, 4]])],
            SubgroupSpec::Klein(a, b, x, y) => vec![c(&[&[a, b]]), c(&[&[x, y]])],
            SubgroupSpec::S3(n) => {
                let rest: Vec<u8> = (1..=4).filter(|&x| x != n).collect();
                vec![c(&[&[rest[0], rest[1]]]), c(&[&[rest[0], rest[1], rest[2]]])]
            }
            SubgroupSpec::D4(j) => {
                let (k, l) = other_pair(j);
                vec![c(&[&[1, k, j, l]]), c(&[&[k, l]])]
            }
            SubgroupSpec::A4 => vec![c(&[&[1, 2, 3]]), c(&[&[2, 3, 4]])],
            SubgroupSpec::S4 => vec![c(&[&[1, 2]]), c(&[&[1, 2, 3, 4]])],
        }
    }

    pub fn elements(&self) -> PermSet {
        PermSet::from_iter(self.generators()).generated()
    }

    pub fn order(&self) -> usize {
        self.elements().len()
    }

    fn validate(self) -> Result<SubgroupSpec, PermError> {
        let distinct = |xs: &[u8]| {
            xs.iter().all(|x| (1..=4).contains(x)) && (0..xs.len()).all(|i| !xs[i + 1..].contains(&xs[i]))
        };
        let ok = match self {
            SubgroupSpec::T2(a, b) => distinct(&[a, b]),
            SubgroupSpec::T2x2(a, b, c, d) | SubgroupSpec::C4(a, b, c, d) | SubgroupSpec::Klein(a, b, c, d) => {
                distinct(&[a, b, c, d])
            }
            SubgroupSpec::C3(a, b, c) => distinct(&[a, b, c]),
            SubgroupSpec::S3(n) => (1..=4).contains(&n),
            SubgroupSpec::D4(j) => (2..=4).contains(&j),
            _ => true,
        };
        if ok {
            Ok(self)
        } else {
            Err(PermError::UnknownSubgroup(self.to_string()))
        }
    }

    /// Every catalog entry, one per distinct subgroup where parameters coincide.
    pub fn catalog() -> Vec<SubgroupSpec> {
        use SubgroupSpec::*;
        let mut out = vec![Trivial, KleinNormal, A4, S4];
        for a in 1..=4u8 {
            for b in a + 1..=4 {
                out.push(T2(a, b));
            }
        }
        for j in 2..=4u8 {
            let (k, l) = other_pair(j);
            out.push(T2x2(1, j, k, l));
            out.push(Klein(1, j, k, l));
            out.push(D4(j));
            out.push(C4(1, k, j, l));
        }
        for skip in 1..=4u8 {
            let r: Vec<u8> = (1..=4).filter(|&x| x != skip).collect();
            out.push(C3(r[0], r[1], r[2]));
            out.push(S3(skip));
        }
        out
    }
}

fn other_pair(j: u8) -> (u8, u8) {
    let rest: Vec<u8> = (2..=4).filter(|&x| x != j).collect();
    (rest[0], rest[1])
}

impl fmt::Display for SubgroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SubgroupSpec::Trivial => write!(f, "TRIVIAL"),
            SubgroupSpec::T2(a, b) => write!(f, "T2({a}{b})"),
            SubgroupSpec::T2x2(a, b, c, d) => write!(f, "T2x2({a}{b},{c}{d})"),
            SubgroupSpec::C3(a, b, c) => write!(f, "C3({a}{b}{c})"),
            SubgroupSpec::C4(a, b, c, d) => write!(f, "C4({a}{b}{c}{d})"),
            SubgroupSpec::KleinNormal => write!(f, "KLEIN_NORMAL"),
            SubgroupSpec::Klein(a, b, c, d) => write!(f, "KLEIN({a}{b},{c}{d})"),
            SubgroupSpec::S3(n) => write!(f, "S3({n})"),
            SubgroupSpec::D4(j) => write!(f, "D4({j})"),
            SubgroupSpec::A4 => write!(f, "A4"),
            SubgroupSpec::S4 => write!(f, "S4"),
        }
    }
}

impl FromStr for SubgroupSpec {
    type Err = PermError;

    fn from_str(s: &str) -> Result<SubgroupSpec, PermError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_uppercase();
        let unknown = || PermError::UnknownSubgroup(s.to_string());
        let (head, args) = match compact.find('(') {
            Some(i) if compact.ends_with(')') => (&compact[..i], Some(&compact[i + 1..compact.len() - 1])),
            Some(_) => return Err(unknown()),
            None => (compact.as_str(), None),
        };
        let digits = |a: &str| -> Result<Vec<u8>, PermError> {
            a.chars()
                .filter(|&c| c != ',')
                .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(unknown))
                .collect()
        };
        let spec = match (head, args) {
            ("TRIVIAL", None) => SubgroupSpec::Trivial,
            ("KLEIN_NORMAL", None) => SubgroupSpec::KleinNormal,
            ("A4", None) => SubgroupSpec::A4,
            ("S4", None) => SubgroupSpec::S4,
            (h, Some(a)) => {
                let d = digits(a)?;
                match (h, d.as_slice()) {
                    ("T2", &[a, b]) => SubgroupSpec::T2(a, b),
                    ("T2X2", &[a, b, c, e]) => SubgroupSpec::T2x2(a, b, c, e),
                    ("C3", &[a, b, c]) => SubgroupSpec::C3(a, b, c),
                    ("C4", &[a, b, c, e]) => SubgroupSpec::C4(a, b, c, e),
                    ("KLEIN", &[a, b, c, e]) => SubgroupSpec::Klein(a, b, c, e),
                    ("S3", &[n]) => SubgroupSpec::S3(n),
                    ("D4", &[j]) => SubgroupSpec::D4(j),
                    _ => return Err(unknown()),
                }
            }
            _ => return Err(unknown()),
        };
        spec.validate().map_err(|_| unknown())
    }
}

/// Orbit lengths of `<c>` on the left cosets `G/H`, sorted descending.
pub fn coset_cycle_type(g: &SubgroupSpec, h: &SubgroupSpec, c: &Perm) -> Result<Vec<usize>, PermError> {
    let (ge, he) = (g.elements(), h.elements());
    if !he.is_subset(&ge) {
        return Err(PermError::NotContained { sub: h.to_string(), sup: g.to_string() });
    }
    if !ge.contains(c) {
        return Err(PermError::NotInGroup { elem: c.to_string(), group: g.to_string() });
    }
    Ok(coset_orbits(ge, he, c))
}

/// Left cosets `x H` of `h` inside `g`.
pub fn left_cosets(g: PermSet, h: PermSet) -> Vec<PermSet> {
    let mut remaining = g;
    let mut out = Vec::new();
    while let Some(i) = remaining.indices().next() {
        let coset = h.left_mul(&Perm::from_index(i));
        remaining = PermSet(remaining.0 & !coset.0);
        out.push(coset);
    }
    out
}

/// Unchecked form of [`coset_cycle_type`] on element sets.
pub fn coset_orbits(g: PermSet, h: PermSet, c: &Perm) -> Vec<usize> {
    let cosets = left_cosets(g, h);
    let mut seen = vec![false; cosets.len()];
    let mut out = Vec::new();
    for start in 0..cosets.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            len += 1;
            let image = cosets[cur].left_mul(c);
            cur = cosets.iter().position(|k| *k == image).expect("cosets are permuted");
        }
        out.push(len);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// All `g` in S4 with `g a g^-1 = b`.
pub fn conjugators_between(a: &Perm, b: &Perm) -> Vec<Perm> {
    all_perms().iter().copied().filter(|g| a.conjugate_by(g) == *b).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Perm {
        s.parse().unwrap()
    }

    #[test]
    fn compose_is_right_to_left() {
        assert_eq!(p("(1 2)").compose(&p("(1 2)")), Perm::IDENTITY);
        assert_eq!(p("(1 2)").compose(&p("(2 3)")), p("(1 2 3)"));
        for q in all_perms() {
            assert_eq!(Perm::IDENTITY.compose(q), *q);
        }
    }

    #[test]
    fn cycle_types_of_examples() {
        assert_eq!(Perm::IDENTITY.cycle_type(), ConjClass::Id);
        assert_eq!(p("(1 4)(2 3)").cycle_type(), ConjClass::DoubleTransposition);
        assert_eq!(p("(1 2 3)").cycle_type(), ConjClass::ThreeCycle);
    }

    #[test]
    fn class_sizes() {
        let sizes: Vec<usize> = ConjClass::ALL.iter().map(|c| c.elements().len()).collect();
        assert_eq!(sizes, vec![1, 6, 3, 8, 6]);
    }

    #[test]
    fn parse_and_display_round_trip() {
        for q in all_perms() {
            assert_eq!(q.to_string().parse::<Perm>().unwrap(), *q);
        }
        assert_eq!(p(" ( 1 3 ) ( 2 4 ) "), p("(13)(24)"));
        assert_eq!(p("e"), Perm::IDENTITY);
        for bad in ["", "(1 1)", "(5)", "(1 2", "1 2)", "(1 2)(2 3)", "x"] {
            assert!(bad.parse::<Perm>().is_err(), "{bad}");
        }
    }

    #[test]
    fn index_is_a_bijection() {
        for (i, q) in all_perms().iter().enumerate() {
            assert_eq!(q.index(), i);
        }
    }

    #[test]
    fn catalog_sizes_and_closure() {
        let cases = [
            ("TRIVIAL", 1),
            ("T2(12)", 2),
            ("T2x2(12,34)", 2),
            ("C3(123)", 3),
            ("C4(1324)", 4),
            ("KLEIN_NORMAL", 4),
            ("KLEIN(12,34)", 4),
            ("S3(4)", 6),
            ("D4(2)", 8),
            ("A4", 12),
            ("S4", 24),
        ];
        for (name, size) in cases {
            let spec: SubgroupSpec = name.parse().unwrap();
            let el = spec.elements();
            assert_eq!(el.len(), size, "{name}");
            assert!(el.is_subgroup(), "{name}");
            assert_eq!(spec.to_string().parse::<SubgroupSpec>().unwrap(), spec);
        }
        for spec in SubgroupSpec::catalog() {
            assert!(spec.elements().is_subgroup());
            assert_eq!(24 % spec.order(), 0);
        }
    }

    #[test]
    fn catalog_examples() {
        let k: PermSet = ["e", "(12)(34)", "(13)(24)", "(14)(23)"].iter().map(|s| p(s)).collect();
        assert_eq!(SubgroupSpec::KleinNormal.elements(), k);
        let c4 = SubgroupSpec::C4(1, 3, 2, 4);
        assert_eq!(c4.order(), 4);
        let gen = p("(1 3 2 4)");
        assert_eq!(gen.compose(&gen), p("(1 2)(3 4)"));
        assert_eq!(SubgroupSpec::Trivial.elements(), PermSet::singleton(Perm::IDENTITY));
        assert!("FOO".parse::<SubgroupSpec>().is_err());
        assert!("T2(11)".parse::<SubgroupSpec>().is_err());
    }

    #[test]
    fn d4_contains_its_central_involution() {
        for j in 2..=4u8 {
            let d4 = SubgroupSpec::D4(j).elements();
            let (k, l) = other_pair(j);
            let centre = Perm::from_cycles(&[&[1, j], &[k, l]]).unwrap();
            for x in d4.iter() {
                assert_eq!(x.compose(&centre), centre.compose(&x));
            }
        }
    }

    #[test]
    fn the_lattice_has_thirty_subgroups() {
        // Brute force: close every pair of elements and collect distinct subgroups.
        let mut subgroups = std::collections::BTreeSet::new();
        for a in all_perms() {
            for b in all_perms() {
                subgroups.insert(PermSet::from_iter([*a, *b]).generated().0);
            }
        }
        assert_eq!(subgroups.len(), 30);
        let catalog: std::collections::BTreeSet<u32> =
            SubgroupSpec::catalog().iter().map(|s| s.elements().0).collect();
        assert!(catalog.is_subset(&subgroups));
    }

    #[test]
    fn coset_cycle_type_examples() {
        let s4 = SubgroupSpec::S4;
        let s3 = SubgroupSpec::S3(4);
        assert_eq!(coset_cycle_type(&s4, &s3, &p("(1 2)")).unwrap(), vec![2, 1, 1]);
        assert_eq!(coset_cycle_type(&s4, &s3, &p("(1 2 3 4)")).unwrap(), vec![4]);
        for spec in SubgroupSpec::catalog() {
            let idx = 24 / spec.order();
            assert_eq!(coset_cycle_type(&s4, &spec, &Perm::IDENTITY).unwrap(), vec![1; idx]);
        }
        assert!(matches!(
            coset_cycle_type(&SubgroupSpec::A4, &SubgroupSpec::T2(1, 2), &Perm::IDENTITY),
            Err(PermError::NotContained { .. })
        ));
    }

    #[test]
    fn conjugator_examples() {
        assert_eq!(conjugators_between(&Perm::IDENTITY, &Perm::IDENTITY).len(), 24);
        assert_eq!(conjugators_between(&p("(1 2)"), &p("(3 4)")).len(), 4);
        assert!(conjugators_between(&p("(1 2)"), &p("(1 2 3)")).is_empty());
    }

    /// Orbit lengths computed from the permutation action on the symbols,
    /// valid when H is a point stabilizer.
    #[test]
    fn point_stabilizer_cosets_match_symbol_cycles() {
        for c in all_perms() {
            let mut lens: Vec<usize> = c.cycles().iter().map(Vec::len).collect();
            let fixed = 4 - lens.iter().sum::<usize>();
            lens.extend(std::iter::repeat_n(1, fixed));
            lens.sort_unstable_by(|a, b| b.cmp(a));
            assert_eq!(coset_cycle_type(&SubgroupSpec::S4, &SubgroupSpec::S3(4), c).unwrap(), lens);
        }
    }

    fn any_perm() -> impl Strategy<Value = Perm> {
        (0usize..24).prop_map(Perm::from_index)
    }

    proptest! {
        #[test]
        fn conjugation_preserves_cycle_type(a in any_perm(), q in any_perm()) {
            prop_assert_eq!(a.conjugate_by(&q).cycle_type(), a.cycle_type());
        }

        #[test]
        fn compose_matches_pointwise_evaluation(a in any_perm(), b in any_perm()) {
            let c = a.compose(&b);
            for x in 1..=4u8 {
                prop_assert_eq!(c.apply(x), a.apply(b.apply(x)));
            }
            prop_assert_eq!(mul_index(a.index(), b.index()), c.index());
        }

        #[test]
        fn coset_orbits_sum_to_index(gi in 0usize..24, hi in 0usize..24, c in any_perm()) {
            let cat = SubgroupSpec::catalog();
            let (g, h) = (cat[gi % cat.len()], cat[hi % cat.len()]);
            match coset_cycle_type(&g, &h, &c) {
                Ok(orbits) => prop_assert_eq!(orbits.iter().sum::<usize>(), g.order() / h.order()),
                Err(PermError::NotContained { .. }) => prop_assert!(!h.elements().is_subset(&g.elements())),
                Err(PermError::NotInGroup { .. }) => prop_assert!(!g.elements().contains(&c)),
                Err(e) => prop_assert!(false, "unexpected {e}"),
            }
        }

        #[test]
        fn conjugators_nonempty_iff_same_class(a in any_perm(), b in any_perm()) {
            let found = conjugators_between(&a, &b);
            prop_assert_eq!(found.is_empty(), a.cycle_type() != b.cycle_type());
            for g in found {
                prop_assert_eq!(a.conjugate_by(&g), b);
            }
        }
    }
}
