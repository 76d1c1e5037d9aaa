use hpot::expansion::{
    fit_harmonic_numeric, fix_harmonic_exact_z2, is_simple_walk, solve_expansion, Expansion, FitOptions, FitReport,
};
use hpot::oracle::potential_fourier_many;
use hpot::walk::WalkSpec;
use rug::Float;

use crate::CliError;

/// A fully determined expansion and, for walks without an exact route, the
/// fit that produced it.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub expansion: Expansion,
    pub fit: Option<FitReport>,
}

impl Resolved {
    /// The expansion cut back to `order`.
    pub fn at_order(&self, order: u32) -> Expansion {
        self.expansion.truncated(order)
    }
}

/// Fourier values at lattice coordinates, as the fit expects them.
pub fn fourier_values(walk: &WalkSpec, pts: &[(i64, i64)], prec: u32) -> Result<Vec<Float>, String> {
    let vals = potential_fourier_many(walk, pts, prec).map_err(|e| e.to_string())?;
    Ok(vals.iter().map(|v| v.eval(prec)).collect())
}

/// The simple walk goes through the exact diagonal matching; everything else
/// is solved to `fit_order`, fitted against the Fourier oracle, and left at
/// that order so callers can truncate.
pub fn resolve_expansion(walk: &WalkSpec, order: u32, fit_order: u32, fit: &FitOptions) -> Result<Resolved, CliError> {
    if is_simple_walk(walk) {
        let e = solve_expansion(walk, order)?;
        return Ok(Resolved { expansion: fix_harmonic_exact_z2(&e)?, fit: None });
    }
    let e = solve_expansion(walk, fit_order.max(order))?;
    let rep = fit_harmonic_numeric(&e, |pts: &[(i64, i64)]| fourier_values(walk, pts, fit.prec), fit)?;
    Ok(Resolved { expansion: rep.expansion.clone(), fit: Some(rep) })
}
