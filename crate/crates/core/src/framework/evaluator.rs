use num_traits::Zero;

use super::fragment::{Fragment, PowerSet};
use super::group::GroupElem;
use super::{AxiomLine, FilterInstance};
use crate::density::UPSet;
use crate::rational::ratio;

/// A family `m_i : L → G` with supports `s_i`, indexed from 1.
pub trait Evaluator<F: Fragment> {
    fn eval(&self, i: u64, x: &F::Elem) -> GroupElem;
    fn support(&self, i: u64) -> F::Elem;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountingVariant {
    /// `m_i(A) = |A ∩ [1, i]| / i` with `s_i = [1, i]`.
    Standard,
    /// `m_i(A) = [A ∩ [1, i] ≠ ∅] / i`.
    MaxInsteadOfSum,
    /// Standard values with `s_i = [1, i − 1]`.
    ShortSupport,
}

/// The counting-density family on a power-set fragment.
#[derive(Debug, Clone, Copy)]
pub struct Counting {
    pub fragment: PowerSet,
    pub variant: CountingVariant,
}

impl Counting {
    pub fn new(fragment: PowerSet) -> Self {
        Counting {
            fragment,
            variant: CountingVariant::Standard,
        }
    }

    pub fn broken(fragment: PowerSet, variant: CountingVariant) -> Self {
        Counting { fragment, variant }
    }
}

impl Evaluator<PowerSet> for Counting {
    fn eval(&self, i: u64, x: &u64) -> GroupElem {
        let inside = x & self.fragment.initial(i);
        let count = match self.variant {
            CountingVariant::MaxInsteadOfSum => (inside != 0) as i64,
            _ => inside.count_ones() as i64,
        };
        GroupElem(ratio(count, i as i64))
    }

    fn support(&self, i: u64) -> u64 {
        match self.variant {
            CountingVariant::ShortSupport => self.fragment.initial(i.saturating_sub(1)),
            _ => self.fragment.initial(i),
        }
    }
}

/// Conditions (i)–(iv) on every element, pair and index `i ≤ i_max`.
/// Condition (iv) needs an orthocomplement and is skipped without one.
pub fn check_mi_axioms<F: Fragment, E: Evaluator<F>>(
    inst: &FilterInstance,
    fragment: &F,
    evaluator: &E,
) -> Vec<AxiomLine> {
    let g = &inst.group;
    let elems = fragment.elements();
    let mut zero = AxiomLine::new("(i) m_i(0) = e");
    let mut monotone = AxiomLine::new("(ii) m_i order-preserving");
    let mut subadd = AxiomLine::new("(iii) m_i(x ∨ y) ≤ m_i(x) m_i(y)");
    let mut ortho = AxiomLine::new("(iv) x ≤ y implies m_i(y) = m_i(x) m_i(y ∧ x⊥)");
    let orthocomplemented = fragment.complement(&fragment.bottom()).is_some();
    for i in 1..=inst.i_max {
        let values: Vec<GroupElem> = elems.iter().map(|x| evaluator.eval(i, x)).collect();
        zero.record(evaluator.eval(i, &fragment.bottom()) == g.neutral(), || {
            format!("i = {i}")
        });
        for (a, x) in elems.iter().enumerate() {
            for (b, y) in elems.iter().enumerate() {
                let witness = || {
                    format!(
                        "i = {i}, x = {}, y = {}",
                        fragment.render(x),
                        fragment.render(y)
                    )
                };
                let mx = &values[a];
                let my = &values[b];
                let le = fragment.leq(x, y);
                if le {
                    monotone.record(g.leq(mx, my), witness);
                }
                let joined = &values[fragment.index(&fragment.join(x, y))];
                subadd.record(g.leq(joined, &g.op(mx, my)), witness);
                if le && orthocomplemented {
                    let rest = fragment.meet(y, &fragment.complement(x).expect("orthocomplement"));
                    ortho.record(*my == g.op(mx, &values[fragment.index(&rest)]), witness);
                }
            }
        }
    }
    let mut out = vec![zero, monotone, subadd];
    if orthocomplemented {
        out.push(ortho);
    }
    out
}

/// The support identity `m_i(x) = m_i(x ∧ s_i)`, the nullity of
/// `⋁_{i ∉ F_n} s_i` for the cofinite filter base `F_n = {i ≥ n}`, and
/// `⋂ F_n = ∅` within the truncation.
pub fn check_supports(
    inst: &FilterInstance,
    fragment: &PowerSet,
    evaluator: &Counting,
) -> Vec<AxiomLine> {
    let mut identity = AxiomLine::new("support: m_i(x) = m_i(x ∧ s_i)");
    for i in 1..=inst.i_max {
        let s = evaluator.support(i);
        for x in fragment.elements() {
            identity.record(evaluator.eval(i, &x) == evaluator.eval(i, &(x & s)), || {
                format!("i = {i}, x = {}", fragment.render(&x))
            });
        }
    }
    let mut null = AxiomLine::new("support: ⋁_{i < n} s_i is null");
    for n in 1..=inst.i_max + 1 {
        let joined = (1..n).fold(0u64, |acc, i| acc | evaluator.support(i));
        let set = UPSet::finite(
            (0..fragment.k() as u64)
                .filter(|b| joined >> b & 1 == 1)
                .map(|b| b + 1),
        );
        null.record(set.density().is_zero(), || format!("n = {n}"));
    }
    let mut incomplete = AxiomLine::new("filter: F_{n+1} ⊆ F_n and ⋂ F_n = ∅");
    for n in 1..=inst.i_max {
        let next = inst.filter_base(n + 1);
        incomplete.record(next.iter().all(|i| inst.filter_base(n).contains(i)), || {
            format!("n = {n}")
        });
    }
    let mut common: Vec<u64> = inst.filter_base(1);
    for n in 2..=inst.i_max + 1 {
        let f = inst.filter_base(n);
        common.retain(|i| f.contains(i));
    }
    incomplete.record(common.is_empty(), || format!("⋂ F_n contains {common:?}"));
    vec![identity, null, incomplete]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::GroupModel;

    fn inst(group: GroupModel) -> FilterInstance {
        FilterInstance::new(group, 32)
    }

    #[test]
    fn counting_passes() {
        let frag = PowerSet::new(8);
        for g in [GroupModel::Additive, GroupModel::Multiplicative] {
            let lines = check_mi_axioms(&inst(g), &frag, &Counting::new(frag));
            assert_eq!(lines.len(), 4);
            assert!(lines.iter().all(AxiomLine::passed), "{lines:?}");
            let lines = check_supports(&inst(g), &frag, &Counting::new(frag));
            assert!(lines.iter().all(AxiomLine::passed), "{lines:?}");
        }
    }

    #[test]
    fn negative_controls() {
        let frag = PowerSet::new(8);
        let i = inst(GroupModel::Additive);
        let lines = check_mi_axioms(
            &i,
            &frag,
            &Counting::broken(frag, CountingVariant::MaxInsteadOfSum),
        );
        let failed: Vec<_> = lines.iter().filter(|l| !l.passed()).collect();
        assert_eq!(failed.len(), 1);
        assert!(failed[0].name.starts_with("(iv)"));

        let broken = Counting::broken(frag, CountingVariant::ShortSupport);
        let mut lines = check_mi_axioms(&i, &frag, &broken);
        lines.extend(check_supports(&i, &frag, &broken));
        let failed: Vec<_> = lines.iter().filter(|l| !l.passed()).collect();
        assert_eq!(failed.len(), 1);
        assert_eq!(failed[0].witness.as_deref(), Some("i = 1, x = {1}"));
    }
}
