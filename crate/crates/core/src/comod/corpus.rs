use std::sync::Arc;

use super::{ComodError, GradedComodule};
use crate::graded::{Generator, Poly};
use crate::hopf::HopfAlgebroid;

#[derive(Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub comodule: GradedComodule,
}

/// Sample connective comodules over a BP-like algebroid: BP_*/I_n for n ≤ 2, a suspension, a
/// finite quotient and a two-cell extension.
pub fn corpus(h: Arc<HopfAlgebroid>, window: (i32, i32)) -> Result<Vec<CorpusEntry>, ComodError> {
    let p = h.base().domain().prime().ok_or_else(|| ComodError::Input("corpus needs a p-local base".into()))?;
    let mut out = Vec::new();
    for n in 0..=2 {
        let ideal = h.chromatic_ideal(n)?;
        let name = if n == 0 { "BP_*".to_string() } else { format!("BP_*/I_{n}") };
        out.push(CorpusEntry { name, comodule: GradedComodule::cyclic(h.clone(), &ideal, 0, window)? });
    }
    let i1 = h.chromatic_ideal(1)?;
    let shift = 2 * (p as i32 - 1);
    if shift <= window.1 {
        out.push(CorpusEntry { name: format!("Sigma^{shift} BP_*/I_1"), comodule: GradedComodule::cyclic(h.clone(), &i1, shift, window)? });
    }
    let v1 = Poly::generator(h.base(), "v1")?;
    let mut finite = i1.clone();
    finite.push(v1.pow(2));
    out.push(CorpusEntry { name: "BP_*/(p, v1^2)".into(), comodule: GradedComodule::cyclic(h.clone(), &finite, 0, window)? });
    let d1 = p as i32 - 1;
    if d1 <= window.1 {
        let two_cell = GradedComodule::new(
            h.clone(),
            &[Generator { name: "g".into(), degree: 0 }, Generator { name: "h".into(), degree: d1 }],
            &[format!("{p}*g"), format!("{p}*h")],
            &["(1)⊗(g)".into(), "(1)⊗(h) + (t1)⊗(g)".into()],
            window,
        )?;
        out.push(CorpusEntry { name: "two-cell BP_*/I_1".into(), comodule: two_cell });
    }
    Ok(out)
}
