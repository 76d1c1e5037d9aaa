//! Order-by-order solution of `(sum_n D_n) a = 0` for the coefficients of
//!
//! `a(z) = alpha log(z zbar) + lambda + sum beta_kl z^k zbar^l`,
//!
//! plus the real-form table, evaluation and the structural checks.
//!
//! Harmonic slots `zbar^-m`, `z^-m` are not determined by the recursion.
//! They enter as real unknowns `u_j`, and every coefficient is kept affine
//! in them until they are fixed exactly (`fix`) or numerically (`fit`).

mod fit;
mod fix;
mod verify;

use std::collections::BTreeMap;

use rug::{Float, Rational};
use thiserror::Error;

use crate::laplacian::{taylor_operator, DiffOperator, Monomial, Term};
use crate::numeric::MpComplex;
use crate::scalar::{eval_complex, ExactComplex, FieldElement, PiGraded, ScalarError, SymbolicConstant};
use crate::walk::{WalkError, WalkSpec};

pub use fit::{fit_harmonic_numeric, sample_points, FitOptions, FitReport, SamplePoint};
pub use fix::{fix_harmonic_exact_z2, is_simple_walk};
pub use verify::{decay_report, diagonal_points, geometric_radii, DecayReport, RayDecay};

#[derive(Debug, Error)]
pub enum ExpansionError {
    #[error("walk {0} is not spherical")]
    NotSpherical(String),
    #[error("expansion order must be at least 2, got {0}")]
    OrderTooSmall(u32),
    #[error("recursion left a nonzero residual at level {level} in slot ({k}, {l})")]
    Inconsistent { level: u32, k: i64, l: i64 },
    #[error("coefficients are not conjugate-symmetric at ({0}, {1})")]
    NotConjugateSymmetric(i64, i64),
    #[error("expansion has unresolved harmonic coefficients or constant")]
    Unresolved,
    #[error("cannot evaluate at z = 0")]
    ZeroPoint,
    #[error("exact harmonic fixing needs the simple walk on Z^2, got {0}")]
    NotSimpleWalk(String),
    #[error("diagonal series disagrees with the expansion at power m^-{0}")]
    DiagonalMismatch(u32),
    #[error("fit failed: {0}")]
    Fit(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Walk(#[from] WalkError),
}

/// `constant + sum_j coeffs[j] u_j` with real unknowns `u_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Affine {
    pub constant: PiGraded,
    pub coeffs: Vec<ExactComplex>,
}

impl Affine {
    pub fn zero() -> Self {
        Affine { constant: PiGraded::zero(), coeffs: Vec::new() }
    }

    pub fn constant(c: PiGraded) -> Self {
        Affine { constant: c, coeffs: Vec::new() }
    }

    pub fn unknown(j: usize, direction: ExactComplex) -> Self {
        let mut coeffs = vec![ExactComplex::zero(); j + 1];
        coeffs[j] = direction;
        Affine { constant: PiGraded::zero(), coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn coeff(&self, j: usize) -> ExactComplex {
        self.coeffs.get(j).cloned().unwrap_or_else(ExactComplex::zero)
    }

    /// `self += f * o`.
    pub fn add_scaled(&mut self, o: &Affine, f: &ExactComplex) -> Result<(), ScalarError> {
        self.constant = self.constant.checked_add(&o.constant.mul_exact(f)?)?;
        if self.coeffs.len() < o.coeffs.len() {
            self.coeffs.resize(o.coeffs.len(), ExactComplex::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&o.coeffs) {
            *a = a.checked_add(&b.checked_mul(f)?)?;
        }
        Ok(())
    }

    pub fn scaled(&self, f: &ExactComplex) -> Result<Affine, ScalarError> {
        let mut out = Affine::zero();
        out.add_scaled(self, f)?;
        Ok(out)
    }

    pub fn conj(&self) -> Affine {
        Affine { constant: self.constant.conj(), coeffs: self.coeffs.iter().map(|c| c.conj()).collect() }
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        self
    }
}

/// A real harmonic unknown: `beta_{0,-m} = direction * u` and
/// `beta_{-m,0} = conj(direction) * u`.
#[derive(Clone, Debug, PartialEq)]
pub struct Unknown {
    pub level: u32,
    pub direction: ExactComplex,
}

#[derive(Clone, Debug, PartialEq)]
pub enum UnknownValue {
    Exact(PiGraded),
    Numeric { value: Float, err: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Lambda {
    Unresolved,
    Exact(SymbolicConstant),
    Numeric { value: Float, err: f64 },
}

impl Lambda {
    pub fn eval(&self, prec: u32) -> Option<Float> {
        match self {
            Lambda::Unresolved => None,
            Lambda::Exact(c) => Some(c.eval(prec)),
            Lambda::Numeric { value, .. } => Some(Float::with_val(prec, value)),
        }
    }
}

/// A coefficient after substituting whatever unknowns are known.
#[derive(Clone, Debug, PartialEq)]
pub enum Coefficient {
    Exact(PiGraded),
    Numeric { value: MpComplex, err: f64 },
    Unresolved,
}

impl Coefficient {
    pub fn as_exact(&self) -> Option<&PiGraded> {
        match self {
            Coefficient::Exact(c) => Some(c),
            _ => None,
        }
    }

    pub fn eval(&self, prec: u32) -> Option<MpComplex> {
        match self {
            Coefficient::Exact(c) => Some(c.eval(prec)),
            Coefficient::Numeric { value, .. } => {
                Some(MpComplex::new(Float::with_val(prec, &value.re), Float::with_val(prec, &value.im)))
            }
            Coefficient::Unresolved => None,
        }
    }

    /// Real part as `f64`, for sign checks and display.
    pub fn re_f64(&self) -> Option<f64> {
        self.eval(96).map(|c| c.re.to_f64())
    }
}

#[derive(Clone, Debug)]
pub struct Expansion {
    walk: WalkSpec,
    order: u32,
    alpha: PiGraded,
    lambda: Lambda,
    terms: BTreeMap<(i64, i64), Affine>,
    unknowns: Vec<Unknown>,
    values: Vec<Option<UnknownValue>>,
}

/// `beta_{k'+1,l'+1}` is unreachable from `D_2` when `k' = -1` or `l' = -1`,
/// and would break the half-plane structure when both are below `-1`.
fn forbidden_slot(k: i64, l: i64) -> bool {
    k == -1 || l == -1 || (k <= -2 && l <= -2)
}

/// Directions of the real unknowns at level `m`.
fn unknown_directions(walk: &WalkSpec, m: u32) -> Result<Vec<ExactComplex>, ScalarError> {
    match walk.reflection() {
        Some(zeta) => {
            let r = zeta.pow(-(m as i64))?;
            let one = ExactComplex::one();
            let dir = if r == one {
                one
            } else if r == -&one {
                ExactComplex::i()
            } else {
                one.checked_add(&r)?
            };
            Ok(vec![dir])
        }
        None => Ok(vec![ExactComplex::one(), ExactComplex::i()]),
    }
}

/// Solves levels `1..=order`, leaving harmonic slots as unknowns.
pub fn solve_expansion(walk: &WalkSpec, order: u32) -> Result<Expansion, ExpansionError> {
    if !walk.is_spherical() {
        return Err(ExpansionError::NotSpherical(walk.name.clone()));
    }
    if order < 2 {
        return Err(ExpansionError::OrderTooSmall(order));
    }
    let alpha = walk.tau_constant()?.scale(&Rational::from((1, 2)));
    let mu11 = walk.d2_coefficient();
    let q = walk.rotational_symmetry_order();
    let ops: Vec<DiffOperator> = (0..=order + 2).map(|n| taylor_operator(walk, n)).collect();

    let mut levels: Vec<BTreeMap<(i64, i64), Affine>> = vec![BTreeMap::new()];
    let mut unknowns = Vec::new();
    for m in 1..=order {
        let mut delta: BTreeMap<(i64, i64), Affine> = BTreeMap::new();
        for n in 3..=m + 2 {
            let src = (m + 2 - n) as usize;
            let op = &ops[n as usize];
            if src == 0 {
                for (c, mono) in op.act(Monomial::LOG) {
                    let e = delta.entry((mono.k, mono.l)).or_insert_with(Affine::zero);
                    e.add_scaled(&Affine::constant(alpha.clone()), &c)?;
                }
                continue;
            }
            for ((k, l), aff) in &levels[src] {
                for (c, mono) in op.act(Monomial::power(*k, *l)) {
                    let e = delta.entry((mono.k, mono.l)).or_insert_with(Affine::zero);
                    e.add_scaled(aff, &c)?;
                }
            }
        }
        let mut level = BTreeMap::new();
        for ((k, l), d) in delta {
            if d.is_zero() {
                continue;
            }
            if forbidden_slot(k, l) {
                return Err(ExpansionError::Inconsistent { level: m, k, l });
            }
            let f = mu11.scale(&Rational::from((k + 1) * (l + 1)));
            let inv = ExactComplex::real(f).inverse()?;
            let beta = d.scaled(&-inv)?.trimmed();
            level.insert((k + 1, l + 1), beta);
        }
        if m % q == 0 {
            for dir in unknown_directions(walk, m)? {
                let j = unknowns.len();
                let lo = level.entry((0, -(m as i64))).or_insert_with(Affine::zero);
                lo.add_scaled(&Affine::unknown(j, dir.clone()), &ExactComplex::one())?;
                let hi = level.entry((-(m as i64), 0)).or_insert_with(Affine::zero);
                hi.add_scaled(&Affine::unknown(j, dir.conj()), &ExactComplex::one())?;
                unknowns.push(Unknown { level: m, direction: dir });
            }
        }
        levels.push(level);
    }
    let terms: BTreeMap<_, _> = levels.into_iter().flatten().filter(|(_, a)| !a.is_zero()).collect();
    let values = vec![None; unknowns.len()];
    Ok(Expansion { walk: walk.clone(), order, alpha, lambda: Lambda::Unresolved, terms, unknowns, values })
}

impl Expansion {
    /// An expansion with the given log coefficient and constant and no terms.
    pub fn bare(walk: &WalkSpec, order: u32, alpha: PiGraded, lambda: Lambda) -> Self {
        Expansion {
            walk: walk.clone(),
            order,
            alpha,
            lambda,
            terms: BTreeMap::new(),
            unknowns: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn walk(&self) -> &WalkSpec {
        &self.walk
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Coefficient of `log(z zbar)`; half the `log|z|` coefficient.
    pub fn alpha(&self) -> &PiGraded {
        &self.alpha
    }

    pub fn lambda(&self) -> &Lambda {
        &self.lambda
    }

    pub fn set_lambda(&mut self, lambda: Lambda) {
        self.lambda = lambda;
    }

    pub fn unknowns(&self) -> &[Unknown] {
        &self.unknowns
    }

    pub fn unknown_values(&self) -> &[Option<UnknownValue>] {
        &self.values
    }

    pub fn set_unknown(&mut self, j: usize, v: UnknownValue) {
        self.values[j] = Some(v);
    }

    /// Stored slots `(k, l)` in solver order.
    pub fn slots(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.terms.keys().copied()
    }

    pub fn affine(&self, k: i64, l: i64) -> Option<&Affine> {
        self.terms.get(&(k, l))
    }

    /// Inserts or overwrites a constant coefficient; zero removes the slot.
    pub fn insert_term(&mut self, k: i64, l: i64, c: PiGraded) {
        if c.is_zero() {
            self.terms.remove(&(k, l));
        } else {
            self.terms.insert((k, l), Affine::constant(c));
        }
    }

    pub fn is_resolved(&self) -> bool {
        self.values.iter().all(|v| v.is_some()) && self.lambda != Lambda::Unresolved
    }

    pub fn is_exact(&self) -> bool {
        self.values.iter().all(|v| matches!(v, Some(UnknownValue::Exact(_))))
            && matches!(self.lambda, Lambda::Exact(_))
    }

    /// `beta_kl` with known unknowns substituted.
    pub fn coefficient(&self, k: i64, l: i64) -> Coefficient {
        match self.terms.get(&(k, l)) {
            Some(a) => self.resolve(a),
            None => Coefficient::Exact(PiGraded::zero()),
        }
    }

    fn resolve(&self, a: &Affine) -> Coefficient {
        let mut exact = a.constant.clone();
        let mut numeric: Option<(MpComplex, f64)> = None;
        const PREC: u32 = 256;
        for (j, c) in a.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match &self.values[j] {
                None => return Coefficient::Unresolved,
                Some(UnknownValue::Exact(v)) => {
                    exact = exact.checked_add(&v.mul_exact(c).expect("coefficient field")).expect("coefficient field");
                }
                Some(UnknownValue::Numeric { value, err }) => {
                    let cz = eval_complex(c, PREC);
                    let term = cz.scale(value);
                    let e = err * cz.abs().to_f64();
                    numeric = Some(match numeric {
                        None => (term, e),
                        Some((s, se)) => (&s + &term, se + e),
                    });
                }
            }
        }
        match numeric {
            None => Coefficient::Exact(exact),
            Some((s, e)) => Coefficient::Numeric { value: &s + &exact.eval(PREC), err: e },
        }
    }

    /// The fully exact terms `beta_kl z^k zbar^l`, including the log term.
    pub fn exact_terms(&self) -> Result<Vec<Term>, ExpansionError> {
        let mut out = vec![Term { coeff: self.alpha.clone(), mono: Monomial::LOG }];
        for (k, l) in self.slots() {
            match self.coefficient(k, l) {
                Coefficient::Exact(c) if c.is_zero() => {}
                Coefficient::Exact(c) => out.push(Term { coeff: c, mono: Monomial::power(k, l) }),
                _ => return Err(ExpansionError::Unresolved),
            }
        }
        Ok(out)
    }

    /// The same expansion cut down to levels `1..=order`.
    pub fn truncated(&self, order: u32) -> Expansion {
        let keep = |m: u32| m <= order;
        let n = self.unknowns.iter().take_while(|u| keep(u.level)).count();
        let terms = self
            .terms
            .iter()
            .filter(|((k, l), _)| keep((-(k + l)) as u32))
            .map(|(s, a)| {
                let mut a = a.clone();
                a.coeffs.truncate(n);
                (*s, a)
            })
            .collect();
        Expansion {
            walk: self.walk.clone(),
            order: order.min(self.order),
            alpha: self.alpha.clone(),
            lambda: self.lambda.clone(),
            terms,
            unknowns: self.unknowns[..n].to_vec(),
            values: self.values[..n].to_vec(),
        }
    }

    /// `beta_lk = conj(beta_kl)` for every stored slot.
    pub fn is_conjugate_symmetric(&self) -> bool {
        self.terms.iter().all(|((k, l), a)| self.terms.get(&(*l, *k)).is_some_and(|b| *b == a.conj()))
    }

    /// `(alpha log(z zbar) + sum of resolved constant parts, [phi_j(z)])`
    /// where the unknown `u_j` contributes `u_j * phi_j(z)`; `lambda` is
    /// left out. Everything is real.
    pub fn evaluate_parts(&self, z: &MpComplex, prec: u32) -> Result<(Float, Vec<Float>), ExpansionError> {
        let wp = prec + 16;
        let z = MpComplex::new(Float::with_val(wp, &z.re), Float::with_val(wp, &z.im));
        let r2 = z.norm_sqr();
        if r2.is_zero() {
            return Err(ExpansionError::ZeroPoint);
        }
        let reach = self.terms.keys().map(|(k, l)| k.abs().max(l.abs())).max().unwrap_or(0);
        let powers = PowerTable::new(&z, reach);
        let mut base = MpComplex::real(r2.ln() * self.alpha.eval_re(wp));
        let mut phi = vec![MpComplex::zero(wp); self.unknowns.len()];
        for ((k, l), a) in &self.terms {
            let zkl = powers.monomial(*k, *l);
            if !a.constant.is_zero() {
                base = &base + &(&a.constant.eval(wp) * &zkl);
            }
            for (j, c) in a.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    phi[j] = &phi[j] + &(&eval_complex(c, wp) * &zkl);
                }
            }
        }
        Ok((Float::with_val(prec, &base.re), phi.into_iter().map(|p| Float::with_val(prec, &p.re)).collect()))
    }

    /// `alpha log(z zbar) + lambda + sum beta_kl z^k zbar^l` at a Cartesian
    /// point.
    pub fn evaluate(&self, z: &MpComplex, prec: u32) -> Result<Float, ExpansionError> {
        let lambda = self.lambda.eval(prec + 16).ok_or(ExpansionError::Unresolved)?;
        let (mut v, phi) = self.evaluate_parts(z, prec + 16)?;
        v += lambda;
        for (p, u) in phi.iter().zip(&self.values) {
            let u = match u {
                None => return Err(ExpansionError::Unresolved),
                Some(UnknownValue::Exact(c)) => c.eval_re(prec + 16),
                Some(UnknownValue::Numeric { value, .. }) => Float::with_val(prec + 16, value),
            };
            v += u * p;
        }
        Ok(Float::with_val(prec, v))
    }
}

/// `z^n` for `|n| <= max`.
struct PowerTable {
    pos: Vec<MpComplex>,
    neg: Vec<MpComplex>,
}

impl PowerTable {
    fn new(z: &MpComplex, max: i64) -> Self {
        let p = z.prec();
        let one = MpComplex::real(Float::with_val(p, 1));
        let inv = z.recip();
        let mut pos = vec![one.clone()];
        let mut neg = vec![one];
        for _ in 0..max {
            pos.push(pos.last().unwrap() * z);
            neg.push(neg.last().unwrap() * &inv);
        }
        PowerTable { pos, neg }
    }

    fn get(&self, n: i64) -> &MpComplex {
        if n >= 0 {
            &self.pos[n as usize]
        } else {
            &self.neg[(-n) as usize]
        }
    }

    /// `z^k conj(z)^l`.
    fn monomial(&self, k: i64, l: i64) -> MpComplex {
        self.get(k) * &self.get(l).conj()
    }
}

/// One entry `Re(coeff * z^power / |z|^exponent)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealFormEntry {
    pub power: u32,
    pub exponent: u32,
    pub coeff: Coefficient,
}

impl RealFormEntry {
    /// Homogeneity degree `power - exponent`.
    pub fn order(&self) -> i64 {
        self.power as i64 - self.exponent as i64
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RealFormTable {
    pub entries: Vec<RealFormEntry>,
}

/// Pairs `beta_kl, beta_lk` with `l < 0 <= k` into `Re(2 beta_kl z^(k-l) / |z|^(-2l))`.
pub fn to_real_form(e: &Expansion) -> Result<RealFormTable, ExpansionError> {
    for ((k, l), a) in &e.terms {
        if e.terms.get(&(*l, *k)).map(|b| *b != a.conj()).unwrap_or(true) {
            return Err(ExpansionError::NotConjugateSymmetric(*k, *l));
        }
    }
    let two = ExactComplex::from_int(2);
    let mut entries = Vec::new();
    for ((k, l), a) in &e.terms {
        if !(*l < 0 && *k >= 0) {
            continue;
        }
        let coeff = match e.resolve(&a.scaled(&two)?) {
            Coefficient::Exact(c) if c.is_zero() => continue,
            c => c,
        };
        entries.push(RealFormEntry { power: (k - l) as u32, exponent: (-2 * l) as u32, coeff });
    }
    entries.sort_by_key(|t| (-t.order(), t.power));
    Ok(RealFormTable { entries })
}

/// No stored coefficient with both exponents negative.
pub fn check_klhalf(e: &Expansion) -> bool {
    e.terms.iter().all(|((k, l), a)| a.is_zero() || !(*k < 0 && *l < 0))
}

/// Every entry at order `-j` has `exponent <= 4j` (or `3j` when the walk is
/// reversible).
pub fn check_degree_bounds(table: &RealFormTable, reversible: bool) -> bool {
    let slope = if reversible { 3 } else { 4 };
    table.entries.iter().all(|t| {
        let j = -t.order();
        j >= 1 && (t.exponent as i64) <= slope * j
    })
}

/// For reversible walks every term has even order.
pub fn check_parity(e: &Expansion, reversible: bool) -> bool {
    !reversible || e.terms.keys().all(|(k, l)| (k + l) % 2 == 0)
}

/// `tau / pi`-unit of the walk's coefficients: `1` or `sqrt d`.
pub fn coefficient_unit(walk: &WalkSpec) -> Result<FieldElement, ExpansionError> {
    let tau = walk.tau_constant()?;
    Ok(if tau.c1.re.is_rational() { FieldElement::one() } else { FieldElement::sqrt_of(walk.d) })
}

/// Real-form coefficients as floats, in table order.
pub fn real_form_values(table: &RealFormTable) -> Vec<f64> {
    table.entries.iter().filter_map(|t| t.coeff.re_f64()).collect()
}

/// Numeric `pi`-free check that a float is close to an exact graded value.
pub fn close_to(c: &PiGraded, x: &Float, tol: f64) -> bool {
    let v = c.eval_re(x.prec());
    (v - x).abs().to_f64() <= tol
}
