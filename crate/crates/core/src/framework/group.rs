use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::AxiomLine;
use crate::rational::{format_rational, Rational};

/// The two ordered groups the framework ships with. Elements are stored by
/// their additive coordinate: the real itself, or `t` for the positive real
/// `2^t`. Both groups are ordered by the coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum GroupModel {
    #[default]
    Additive,
    Multiplicative,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElem(pub Rational);

impl GroupModel {
    pub fn neutral(&self) -> GroupElem {
        GroupElem(Rational::zero())
    }

    pub fn op(&self, a: &GroupElem, b: &GroupElem) -> GroupElem {
        GroupElem(&a.0 + &b.0)
    }

    pub fn inverse(&self, a: &GroupElem) -> GroupElem {
        GroupElem(-&a.0)
    }

    pub fn leq(&self, a: &GroupElem, b: &GroupElem) -> bool {
        a.0 <= b.0
    }

    /// Radius of `U_n`: the ball `|x| ≤ 2^{−n}` or the band `[2^{−2^{−n}}, 2^{2^{−n}}]`.
    pub fn radius(&self, n: u32) -> Rational {
        Rational::new(BigInt::one(), BigInt::from(2).pow(n))
    }

    pub fn in_neighbourhood(&self, n: u32, x: &GroupElem) -> bool {
        x.0.abs() <= self.radius(n)
    }

    /// `x ∈ c·U_n`.
    pub fn in_translate(&self, n: u32, center: &GroupElem, x: &GroupElem) -> bool {
        self.in_neighbourhood(n, &self.op(&self.inverse(center), x))
    }

    pub fn render(&self, x: &GroupElem) -> String {
        match self {
            GroupModel::Additive => format_rational(&x.0),
            GroupModel::Multiplicative => format!("2^({})", format_rational(&x.0)),
        }
    }

    /// Topological conditions recorded without a finite test.
    pub fn metadata(&self) -> Vec<(&'static str, &'static str)> {
        vec![
            ("locally compact", "yes"),
            ("topology stronger than order topology", "yes"),
            ("countable character", "yes, basis U_n"),
        ]
    }

    /// Translation compatibility and antitone inversion over all pairs and
    /// triples of `samples`, and strict decrease of `U_1 ⊋ … ⊋ U_depth`.
    pub fn check_axioms(&self, samples: &[Rational], depth: u32) -> Vec<AxiomLine> {
        let elems: Vec<GroupElem> = samples.iter().cloned().map(GroupElem).collect();
        let mut translation = AxiomLine::new("(1) x ≤ y implies zx ≤ zy and xz ≤ yz");
        let mut inversion = AxiomLine::new("(2) x ≤ y implies y⁻¹ ≤ x⁻¹");
        for x in &elems {
            for y in &elems {
                if !self.leq(x, y) {
                    continue;
                }
                inversion.record(self.leq(&self.inverse(y), &self.inverse(x)), || {
                    format!("x = {}, y = {}", self.render(x), self.render(y))
                });
                for z in &elems {
                    let ok = self.leq(&self.op(z, x), &self.op(z, y))
                        && self.leq(&self.op(x, z), &self.op(y, z));
                    translation.record(ok, || {
                        format!(
                            "x = {}, y = {}, z = {}",
                            self.render(x),
                            self.render(y),
                            self.render(z)
                        )
                    });
                }
            }
        }
        let mut basis = AxiomLine::new("U_{n+1} ⊊ U_n");
        for n in 1..depth {
            // The boundary point of U_n lies outside U_{n+1}.
            let edge = GroupElem(self.radius(n));
            basis.record(
                self.in_neighbourhood(n, &edge) && !self.in_neighbourhood(n + 1, &edge),
                || format!("n = {n}"),
            );
        }
        vec![translation, inversion, basis]
    }
}

impl fmt::Display for GroupModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupModel::Additive => "additive",
            GroupModel::Multiplicative => "multiplicative",
        })
    }
}

impl FromStr for GroupModel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "additive" => Ok(GroupModel::Additive),
            "multiplicative" => Ok(GroupModel::Multiplicative),
            other => Err(format!("unknown group model {other:?}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn samples() -> Vec<Rational> {
        (-4..=4).flat_map(|n| [ratio(n, 1), ratio(n, 3)]).collect()
    }

    #[test]
    fn both_models_pass() {
        for g in [GroupModel::Additive, GroupModel::Multiplicative] {
            for line in g.check_axioms(&samples(), 12) {
                assert!(line.passed(), "{g}: {line:?}");
                assert!(line.checked > 0);
            }
        }
    }

    #[test]
    fn neighbourhoods() {
        let g = GroupModel::Multiplicative;
        let c = GroupElem(ratio(1, 2));
        assert!(g.in_translate(3, &c, &GroupElem(ratio(5, 8))));
        assert!(!g.in_translate(3, &c, &GroupElem(ratio(3, 4))));
        assert_eq!(g.render(&c), "2^(1/2)");
    }
}
