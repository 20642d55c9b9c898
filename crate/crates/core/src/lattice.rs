//! Finite bounded lattices: validation from order data, structural law
//! checks and a catalog of small named examples.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::rational::RationalString;

/// Index of a lattice element.
pub type Elem = usize;

/// Hard cap on the number of elements.
pub const MAX_ELEMENTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("lattice has no elements")]
    Empty,
    #[error("lattice has {0} elements, more than the cap of {MAX_ELEMENTS}")]
    TooLarge(usize),
    #[error("element {0:?} listed twice")]
    DuplicateElement(String),
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("order is not antisymmetric: {0:?} and {1:?} are mutually below each other")]
    NotAntisymmetric(String, String),
    #[error("order has no global bottom and top")]
    NoBounds,
    #[error("pair ({0:?}, {1:?}) lacks a meet or a join")]
    NotALattice(String, String),
    #[error("ortho map violates {law} at {element:?}")]
    BadOrtho { element: String, law: &'static str },
    #[error("operation needs an orthocomplement but the lattice has none")]
    MissingOrtho,
    #[error("unknown catalog lattice {0:?}")]
    UnknownName(String),
}

/// On-disk lattice description. `order` may be any generating set of `≤` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeFile {
    pub elements: Vec<String>,
    pub order: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ortho: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<BTreeMap<String, RationalString>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    names: Vec<String>,
    index: HashMap<String, Elem>,
    leq: Vec<Vec<bool>>,
    meet: Vec<Vec<Elem>>,
    join: Vec<Vec<Elem>>,
    bottom: Elem,
    top: Elem,
    ortho: Option<Vec<Elem>>,
}

impl Lattice {
    /// Builds a lattice from element names, generating `≤` pairs and an
    /// optional orthocomplement. The order is closed reflexively and
    /// transitively before meets and joins are computed.
    pub fn validate(
        elements: &[String],
        order: &[(String, String)],
        ortho: Option<&BTreeMap<String, String>>,
    ) -> Result<Self, LatticeError> {
        let n = elements.len();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        if n > MAX_ELEMENTS {
            return Err(LatticeError::TooLarge(n));
        }
        let mut index = HashMap::new();
        for (i, name) in elements.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(LatticeError::DuplicateElement(name.clone()));
            }
        }
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| LatticeError::UnknownElement(name.to_string()))
        };

        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (lo, hi) in order {
            leq[lookup(lo)?][lookup(hi)?] = true;
        }
        // Warshall closure
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i][j] && leq[j][i] {
                    return Err(LatticeError::NotAntisymmetric(
                        elements[i].clone(),
                        elements[j].clone(),
                    ));
                }
            }
        }
        let bottom = (0..n).find(|&b| (0..n).all(|x| leq[b][x]));
        let top = (0..n).find(|&t| (0..n).all(|x| leq[x][t]));
        let (Some(bottom), Some(top)) = (bottom, top) else {
            return Err(LatticeError::NoBounds);
        };

        let mut meet = vec![vec![0; n]; n];
        let mut join = vec![vec![0; n]; n];
        for a in 0..n {
            for b in a..n {
                let glb = extremal_bound(n, |x| leq[x][a] && leq[x][b], |x, y| leq[y][x]);
                let lub = extremal_bound(n, |x| leq[a][x] && leq[b][x], |x, y| leq[x][y]);
                match (glb, lub) {
                    (Some(m), Some(j)) => {
                        meet[a][b] = m;
                        meet[b][a] = m;
                        join[a][b] = j;
                        join[b][a] = j;
                    }
                    _ => {
                        return Err(LatticeError::NotALattice(
                            elements[a].clone(),
                            elements[b].clone(),
                        ))
                    }
                }
            }
        }

        let mut lattice = Lattice {
            names: elements.to_vec(),
            index,
            leq,
            meet,
            join,
            bottom,
            top,
            ortho: None,
        };
        if let Some(map) = ortho {
            let mut table = vec![usize::MAX; n];
            for (from, to) in map {
                table[lattice.elem(from)?] = lattice.elem(to)?;
            }
            if let Some(missing) = table.iter().position(|&t| t == usize::MAX) {
                return Err(LatticeError::BadOrtho {
                    element: elements[missing].clone(),
                    law: "totality",
                });
            }
            lattice.ortho = Some(table);
            if let Some((element, law)) = lattice.ortho_violation() {
                return Err(LatticeError::BadOrtho {
                    element: elements[element].clone(),
                    law,
                });
            }
        }
        Ok(lattice)
    }

    pub fn from_file(file: &LatticeFile) -> Result<Self, LatticeError> {
        let order: Vec<(String, String)> = file
            .order
            .iter()
            .map(|[a, b]| (a.clone(), b.clone()))
            .collect();
        Self::validate(&file.elements, &order, file.ortho.as_ref())
    }

    /// Serialises with covering pairs only (the Hasse diagram).
    pub fn to_file(&self) -> LatticeFile {
        let n = self.len();
        let mut order = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b
                    && self.leq[a][b]
                    && !(0..n).any(|c| c != a && c != b && self.leq[a][c] && self.leq[c][b])
                {
                    order.push([self.names[a].clone(), self.names[b].clone()]);
                }
            }
        }
        let ortho = self.ortho.as_ref().map(|t| {
            t.iter()
                .enumerate()
                .map(|(i, &j)| (self.names[i].clone(), self.names[j].clone()))
                .collect()
        });
        LatticeFile {
            elements: self.names.clone(),
            order,
            ortho,
            phi: None,
        }
    }

    fn ortho_violation(&self) -> Option<(Elem, &'static str)> {
        let o = self.ortho.as_ref()?;
        for x in self.elements() {
            if o[o[x]] != x {
                return Some((x, "involution"));
            }
            if self.meet(x, o[x]) != self.bottom {
                return Some((x, "x ∧ x⊥ = 0"));
            }
            if self.join(x, o[x]) != self.top {
                return Some((x, "x ∨ x⊥ = 1"));
            }
            for y in self.elements() {
                if self.leq(x, y) && !self.leq(o[y], o[x]) {
                    return Some((x, "order reversal"));
                }
            }
        }
        None
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.names.len()
    }

    pub fn name(&self, e: Elem) -> &str {
        &self.names[e]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn elem(&self, name: &str) -> Result<Elem, LatticeError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| LatticeError::UnknownElement(name.to_string()))
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq[a][b]
    }

    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a][b]
    }

    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a][b]
    }

    pub fn has_ortho(&self) -> bool {
        self.ortho.is_some()
    }

    pub fn ortho(&self, a: Elem) -> Option<Elem> {
        self.ortho.as_ref().map(|o| o[a])
    }

    pub fn try_ortho(&self, a: Elem) -> Result<Elem, LatticeError> {
        self.ortho(a).ok_or(LatticeError::MissingOrtho)
    }

    /// Elements covering the bottom.
    pub fn atoms(&self) -> Vec<Elem> {
        self.elements()
            .filter(|&a| {
                a != self.bottom
                    && !self
                        .elements()
                        .any(|c| c != a && c != self.bottom && self.leq(c, a))
            })
            .collect()
    }

    /// Join of a (possibly empty) list of elements.
    pub fn join_all(&self, items: impl IntoIterator<Item = Elem>) -> Elem {
        items
            .into_iter()
            .fold(self.bottom, |acc, x| self.join(acc, x))
    }

    /// Full structural analysis; ortho-dependent flags are false without an ortho map.
    pub fn analyze(&self) -> LatticeReport {
        let mut counterexamples = Vec::new();
        for law in [
            Law::Modular,
            Law::Distributive,
            Law::Ortholattice,
            Law::Orthomodular,
        ] {
            if let Some(c) = law.find_violation(self) {
                counterexamples.push(c);
            }
        }
        let fails = |law| {
            counterexamples
                .iter()
                .any(|c: &Counterexample| c.law == law)
        };
        LatticeReport {
            is_lattice: true,
            is_modular: !fails(Law::Modular),
            is_distributive: !fails(Law::Distributive),
            is_ortholattice: !fails(Law::Ortholattice),
            is_orthomodular: !fails(Law::Orthomodular),
            counterexamples,
        }
    }

    pub fn check_orthomodular(&self) -> Result<LatticeReport, LatticeError> {
        if !self.has_ortho() {
            return Err(LatticeError::MissingOrtho);
        }
        Ok(self.analyze())
    }

    pub fn is_orthomodular(&self) -> bool {
        self.has_ortho() && Law::Orthomodular.find_violation(self).is_none()
    }
}

fn extremal_bound(
    n: usize,
    is_bound: impl Fn(Elem) -> bool,
    dominates: impl Fn(Elem, Elem) -> bool,
) -> Option<Elem> {
    let bounds: Vec<Elem> = (0..n).filter(|&x| is_bound(x)).collect();
    bounds
        .iter()
        .copied()
        .find(|&c| bounds.iter().all(|&other| dominates(c, other)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Law {
    /// `x ≤ z ⇒ x ∨ (y ∧ z) = (x ∨ y) ∧ z`
    Modular,
    /// `x ∧ (y ∨ z) = (x ∧ y) ∨ (x ∧ z)`
    Distributive,
    /// an orthocomplement exists
    Ortholattice,
    /// `x ≤ y ⇒ y = x ∨ (y ∧ x⊥)`
    Orthomodular,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub law: Law,
    pub elements: Vec<Elem>,
}

impl Law {
    /// Whether the law holds at the given elements (`[]` for Ortholattice,
    /// a pair for Orthomodular, a triple otherwise).
    pub fn holds_at(&self, l: &Lattice, e: &[Elem]) -> bool {
        match self {
            Law::Modular => {
                let (x, y, z) = (e[0], e[1], e[2]);
                !l.leq(x, z) || l.join(x, l.meet(y, z)) == l.meet(l.join(x, y), z)
            }
            Law::Distributive => {
                let (x, y, z) = (e[0], e[1], e[2]);
                l.meet(x, l.join(y, z)) == l.join(l.meet(x, y), l.meet(x, z))
            }
            Law::Ortholattice => l.has_ortho() && l.ortho_violation().is_none(),
            Law::Orthomodular => match l.ortho(e[0]) {
                None => false,
                Some(xp) => {
                    let (x, y) = (e[0], e[1]);
                    !l.leq(x, y) || l.join(x, l.meet(y, xp)) == y
                }
            },
        }
    }

    fn find_violation(&self, l: &Lattice) -> Option<Counterexample> {
        let n = l.len();
        let hit = |elements: Vec<Elem>| {
            Some(Counterexample {
                law: *self,
                elements,
            })
        };
        match self {
            Law::Modular | Law::Distributive => {
                for x in 0..n {
                    for y in 0..n {
                        for z in 0..n {
                            if !self.holds_at(l, &[x, y, z]) {
                                return hit(vec![x, y, z]);
                            }
                        }
                    }
                }
                None
            }
            Law::Ortholattice => (!self.holds_at(l, &[])).then(|| Counterexample {
                law: *self,
                elements: Vec::new(),
            }),
            Law::Orthomodular => {
                if !l.has_ortho() {
                    return hit(Vec::new());
                }
                for x in 0..n {
                    for y in 0..n {
                        if !self.holds_at(l, &[x, y]) {
                            return hit(vec![x, y]);
                        }
                    }
                }
                None
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeReport {
    pub is_lattice: bool,
    pub is_modular: bool,
    pub is_distributive: bool,
    pub is_ortholattice: bool,
    pub is_orthomodular: bool,
    /// One entry per false flag.
    pub counterexamples: Vec<Counterexample>,
}

fn build(
    elements: &[&str],
    order: &[(&str, &str)],
    ortho: &[(&str, &str)],
) -> Result<Lattice, LatticeError> {
    let elements: Vec<String> = elements.iter().map(|s| s.to_string()).collect();
    let order: Vec<(String, String)> = order
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    let ortho: BTreeMap<String, String> = ortho
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    Lattice::validate(&elements, &order, (!ortho.is_empty()).then_some(&ortho))
}

/// Name of the subset `mask` of `n` atoms in [`boolean`].
pub fn subset_name(mask: u32, n: u32) -> String {
    if mask == 0 {
        return "0".into();
    }
    if mask == (1 << n) - 1 {
        return "1".into();
    }
    let letters: Vec<String> = (0..n)
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| ((b'a' + i as u8) as char).to_string())
        .collect();
    format!("{{{}}}", letters.join(","))
}

/// Power set of `n` atoms ordered by size, then by bitmask. Elements are
/// named `0`, `{a}`, `{a,b}`, …, `1`.
pub fn boolean(n: u32) -> Result<Lattice, LatticeError> {
    if n == 0 || (1usize << n) > MAX_ELEMENTS {
        return Err(LatticeError::UnknownName(format!("boolean_{n}")));
    }
    let full = (1u32 << n) - 1;
    let mut masks: Vec<u32> = (0..=full).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    let names: Vec<String> = masks.iter().map(|&m| subset_name(m, n)).collect();
    let mut order = Vec::new();
    for &a in &masks {
        for i in 0..n {
            if a & (1 << i) == 0 {
                order.push((subset_name(a, n), subset_name(a | (1 << i), n)));
            }
        }
    }
    let ortho: BTreeMap<String, String> = masks
        .iter()
        .map(|&m| (subset_name(m, n), subset_name(full & !m, n)))
        .collect();
    Lattice::validate(&names, &order, Some(&ortho))
}

/// Catalog lookup: `chain_n`, `boolean_n`, `m3`, `n5`, `mo2`, `o6`, `diamond`.
pub fn catalog(name: &str) -> Result<Lattice, LatticeError> {
    let unknown = || LatticeError::UnknownName(name.to_string());
    if let Some(k) = name.strip_prefix("boolean_") {
        let k: u32 = k.parse().map_err(|_| unknown())?;
        return boolean(k).map_err(|_| unknown());
    }
    if let Some(k) = name.strip_prefix("chain_") {
        let k: usize = k.parse().map_err(|_| unknown())?;
        if !(2..=MAX_ELEMENTS).contains(&k) {
            return Err(unknown());
        }
        let mut names = vec!["0".to_string()];
        names.extend((1..k - 1).map(|i| format!("c{i}")));
        names.push("1".into());
        let order: Vec<(String, String)> = names
            .windows(2)
            .map(|w| (w[0].clone(), w[1].clone()))
            .collect();
        let ortho: BTreeMap<String, String> = [
            ("0".to_string(), "1".to_string()),
            ("1".to_string(), "0".to_string()),
        ]
        .into();
        return Lattice::validate(&names, &order, (k == 2).then_some(&ortho));
    }
    match name {
        "diamond" => build(
            &["0", "A", "B", "1"],
            &[("0", "A"), ("0", "B"), ("A", "1"), ("B", "1")],
            &[("0", "1"), ("1", "0"), ("A", "B"), ("B", "A")],
        ),
        "m3" => build(
            &["0", "A", "B", "C", "1"],
            &[
                ("0", "A"),
                ("0", "B"),
                ("0", "C"),
                ("A", "1"),
                ("B", "1"),
                ("C", "1"),
            ],
            &[],
        ),
        "n5" => build(
            &["0", "A", "B", "C", "1"],
            &[("0", "A"), ("A", "1"), ("0", "B"), ("B", "C"), ("C", "1")],
            &[],
        ),
        "mo2" => build(
            &["0", "a", "a'", "b", "b'", "1"],
            &[
                ("0", "a"),
                ("0", "a'"),
                ("0", "b"),
                ("0", "b'"),
                ("a", "1"),
                ("a'", "1"),
                ("b", "1"),
                ("b'", "1"),
            ],
            &[
                ("0", "1"),
                ("1", "0"),
                ("a", "a'"),
                ("a'", "a"),
                ("b", "b'"),
                ("b'", "b"),
            ],
        ),
        "o6" => build(
            &["0", "a", "b", "b'", "a'", "1"],
            &[
                ("0", "a"),
                ("a", "b"),
                ("b", "1"),
                ("0", "b'"),
                ("b'", "a'"),
                ("a'", "1"),
            ],
            &[
                ("0", "1"),
                ("1", "0"),
                ("a", "a'"),
                ("a'", "a"),
                ("b", "b'"),
                ("b'", "b"),
            ],
        ),
        _ => Err(unknown()),
    }
}

/// Names accepted by [`catalog`] at desk scale, used by exhaustive test sweeps.
pub fn catalog_names() -> Vec<&'static str> {
    vec![
        "chain_2",
        "chain_3",
        "chain_4",
        "boolean_1",
        "boolean_2",
        "boolean_3",
        "boolean_4",
        "m3",
        "n5",
        "mo2",
        "o6",
        "diamond",
    ]
}
