//! Reference displays of the low-order Q-curvature recursions, stored as
//! text files under `tests/golden/`.

use std::path::Path;

use crate::error::{AlgebraError, Result};
use crate::qformula::{derive_q_formula, QFormula};

const BUILTIN: [&str; 4] = [
    include_str!("../tests/golden/q2.tex"),
    include_str!("../tests/golden/q4.tex"),
    include_str!("../tests/golden/q6.tex"),
    include_str!("../tests/golden/q8.tex"),
];

/// Highest order with a reference display.
pub const GOLDEN_MAX_ORDER: usize = 4;

pub fn file_name(order: usize) -> String {
    format!("q{}.tex", 2 * order)
}

/// Reference text for `Q_{2N}`, from `dir` when given, else the copy compiled
/// into the crate.
pub fn load(dir: Option<&Path>, order: usize) -> Result<String> {
    match dir {
        Some(d) => {
            let path = d.join(file_name(order));
            std::fs::read_to_string(&path)
                .map_err(|e| AlgebraError::Parse(format!("cannot read {}: {e}", path.display())))
        }
        None => BUILTIN
            .get(order.wrapping_sub(1))
            .map(|s| s.to_string())
            .ok_or_else(|| {
                AlgebraError::Precondition(format!("no reference display for order {order}"))
            }),
    }
}

/// Outcome of comparing a derived formula with its reference display.
#[derive(Clone, Debug)]
pub struct GoldenCheck {
    pub order: usize,
    pub reference: QFormula,
    pub derived: QFormula,
}

impl GoldenCheck {
    pub fn passed(&self) -> bool {
        self.reference == self.derived
    }

    pub fn mismatch(&self) -> Option<String> {
        if self.passed() {
            return None;
        }
        Some(format!(
            "reference `{}` vs derived `{}`",
            self.reference, self.derived
        ))
    }
}

pub fn check(dir: Option<&Path>, order: usize) -> Result<GoldenCheck> {
    let text = load(dir, order)?;
    Ok(GoldenCheck {
        order,
        reference: QFormula::parse_display(&text)?,
        derived: derive_q_formula(order)?,
    })
}
