use num_traits::Zero;

use super::{Exponent, NormContext, NormError, Submeasure};
use crate::rational::Rational;

/// `φ*(A) = ‖1⊗A‖` in `L¹(L, φ)`, using the semantics of `ctx` (its
/// exponent is ignored).
pub fn derive_phistar(ctx: &NormContext) -> Result<Submeasure, NormError> {
    let p1 = if ctx.p().is_one() {
        ctx.clone()
    } else {
        ctx.with_p(Exponent::one(), ctx.semantics())?
    };
    let l = ctx.lattice();
    let mut values = Vec::with_capacity(l.len());
    for e in l.elements() {
        let r = p1.norm(&p1.space().unit_vector(e))?;
        values.push(r.value.exact().cloned().unwrap_or_else(Rational::zero));
    }
    Ok(Submeasure::from_values(l, values))
}
