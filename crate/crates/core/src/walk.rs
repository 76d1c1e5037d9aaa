//! Walk specifications: validation, complex moments, correlation matrix,
//! sphericity and symmetry detection.

use std::collections::HashMap;
use std::path::Path;

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::scalar::{ExactComplex, FieldElement, PiGraded, ScalarError};

/// Moments are tabulated eagerly up to this total degree; the solver needs
/// `K + 2` for `K <= 24`.
pub const MOMENT_CACHE_DEGREE: u32 = 26;

#[derive(Debug, thiserror::Error)]
pub enum WalkError {
    #[error("walk file: {0}")]
    Io(#[from] std::io::Error),
    #[error("walk file is not valid: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("unknown bundled walk {0:?}")]
    Unknown(String),
    #[error("sqrt_d = {0} is not square-free")]
    Radicand(u32),
    #[error("walk has no steps")]
    Empty,
    #[error("step {0} has non-positive probability")]
    NonPositive(usize),
    #[error("probabilities sum to {0}, not 1")]
    ProbabilitySum(Rational),
    #[error("walk has nonzero drift {0}")]
    Drift(ExactComplex),
    #[error("declared lattice basis is degenerate")]
    DegenerateBasis,
    #[error("step {0} lies outside the declared lattice")]
    OffLattice(usize),
    #[error("steps span a set of rank < 2")]
    Degenerate,
    #[error("det M = {0} has no square root in the coefficient field")]
    NotSquare(FieldElement),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum RawNum {
    Text(String),
    Int(i64),
}

impl RawNum {
    fn parse(&self, d: u32) -> Result<FieldElement, ScalarError> {
        match self {
            RawNum::Text(s) => FieldElement::parse_with(s, d),
            RawNum::Int(n) => Ok(FieldElement::from_int(*n)),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawStep {
    p: RawNum,
    vx: RawNum,
    vy: RawNum,
}

/// The on-disk walk description, before validation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawWalk {
    name: String,
    #[serde(default)]
    sqrt_d: u32,
    basis: [[RawNum; 2]; 2],
    steps: Vec<RawStep>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub v: ExactComplex,
    pub p: Rational,
    /// Integer coordinates of `v` in the declared basis.
    pub coords: (i64, i64),
}

/// A validated bounded, balanced planar walk.
#[derive(Debug, Clone)]
pub struct WalkSpec {
    pub name: String,
    /// Radicand of the coefficient field, 0 for Q.
    pub d: u32,
    pub basis: [ExactComplex; 2],
    pub steps: Vec<Step>,
    moments: HashMap<(u32, u32), ExactComplex>,
}

/// `M_ij = E <R, e_i> <R, e_j>` in Cartesian coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    pub m: [[FieldElement; 2]; 2],
}

impl CorrelationMatrix {
    pub fn det(&self) -> FieldElement {
        &(&self.m[0][0] * &self.m[1][1]) - &(&self.m[0][1] * &self.m[1][0])
    }

    pub fn trace(&self) -> FieldElement {
        &self.m[0][0] + &self.m[1][1]
    }

    /// `Some(C)` when `M = C I` with `C > 0`.
    pub fn scalar_multiple(&self) -> Option<FieldElement> {
        (self.m[0][1].is_zero() && self.m[0][0] == self.m[1][1] && self.m[0][0].signum() > 0)
            .then(|| self.m[0][0].clone())
    }
}

const BUNDLED: &[(&str, &str)] = &[
    ("z2-simple", include_str!("../walks/z2-simple.json")),
    ("z2-king", include_str!("../walks/z2-king.json")),
    ("tri-directed", include_str!("../walks/tri-directed.json")),
    ("tri-six", include_str!("../walks/tri-six.json")),
];

pub fn bundled_names() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|(n, _)| *n)
}

/// Cartesian coordinates `(x, y)` of `n1 b1 + n2 b2`.
pub fn lattice_point(basis: &[ExactComplex; 2], n1: i64, n2: i64) -> ExactComplex {
    &basis[0].scale(&Rational::from(n1)) + &basis[1].scale(&Rational::from(n2))
}

impl WalkSpec {
    pub fn bundled(name: &str) -> Result<Self, WalkError> {
        let (_, text) = BUNDLED
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| WalkError::Unknown(name.to_string()))?;
        Self::from_json(text)
    }

    /// A bundled name or a path to a walk file.
    pub fn load(name_or_path: &str) -> Result<Self, WalkError> {
        if BUNDLED.iter().any(|(n, _)| *n == name_or_path) {
            return Self::bundled(name_or_path);
        }
        let p = Path::new(name_or_path);
        if !p.exists() {
            return Err(WalkError::Unknown(name_or_path.to_string()));
        }
        Self::from_json(&std::fs::read_to_string(p)?)
    }

    pub fn from_json(text: &str) -> Result<Self, WalkError> {
        let raw: RawWalk = serde_json::from_str(text)?;
        validate_walk(&raw)
    }

    pub fn moment(&self, a: u32, b: u32) -> ExactComplex {
        if let Some(m) = self.moments.get(&(a, b)) {
            return m.clone();
        }
        compute_moment(&self.steps, a, b)
    }

    /// The operator constant of `D_2 = mu11 d_z d_zbar` for spherical walks.
    pub fn d2_coefficient(&self) -> FieldElement {
        self.moment(1, 1).re
    }

    pub fn is_spherical(&self) -> bool {
        self.moment(2, 0).is_zero() && self.d2_coefficient().signum() > 0
    }

    pub fn correlation_matrix(&self) -> CorrelationMatrix {
        let mut m: [[FieldElement; 2]; 2] = Default::default();
        for s in &self.steps {
            let xy = [&s.v.re, &s.v.im];
            for i in 0..2 {
                for j in 0..2 {
                    let t = (xy[i] * xy[j]).scale(&s.p);
                    m[i][j] = &m[i][j] + &t;
                }
            }
        }
        CorrelationMatrix { m }
    }

    /// Whether the step distribution is invariant under `v -> k v`.
    pub fn invariant_under(&self, k: &ExactComplex) -> bool {
        self.maps_onto(|v| v.checked_mul(k).ok())
    }

    fn maps_onto(&self, f: impl Fn(&ExactComplex) -> Option<ExactComplex>) -> bool {
        self.steps.iter().all(|s| match f(&s.v) {
            Some(w) => self.steps.iter().any(|t| t.v == w && t.p == s.p),
            None => false,
        })
    }

    /// Largest `q` such that rotation by `2 pi / q` preserves the walk.
    pub fn rotational_symmetry_order(&self) -> u32 {
        let half = Rational::from((1, 2));
        let s3h = FieldElement::sqrt_of(3).scale(&half);
        let candidates = [
            (6, ExactComplex::new(FieldElement::rational(half.clone()), s3h.clone())),
            (4, ExactComplex::i()),
            (3, ExactComplex::new(FieldElement::rational(-half), s3h)),
            (2, ExactComplex::from_int(-1)),
        ];
        candidates
            .iter()
            .find(|(_, r)| self.invariant_under(r))
            .map(|(q, _)| *q)
            .unwrap_or(1)
    }

    /// Some unit `zeta` with `v -> zeta * conj(v)` preserving the walk.
    pub fn reflection(&self) -> Option<ExactComplex> {
        let v0 = &self.steps[0].v;
        let n0 = v0.norm_sqr().ok()?;
        self.steps.iter().find_map(|s| {
            if s.v.norm_sqr().ok()? != n0 {
                return None;
            }
            let zeta = s.v.checked_div(&v0.conj()).ok()?;
            self.maps_onto(|v| zeta.checked_mul(&v.conj()).ok()).then_some(zeta)
        })
    }

    /// Symmetric under `v -> -v` with equal probabilities.
    pub fn is_reversible(&self) -> bool {
        self.invariant_under(&ExactComplex::from_int(-1))
    }

    /// Area of the fundamental cell of the declared basis.
    pub fn cell_volume(&self) -> FieldElement {
        let [b1, b2] = &self.basis;
        let det = &(&b1.re * &b2.im) - &(&b1.im * &b2.re);
        if det.signum() < 0 {
            -det
        } else {
            det
        }
    }

    /// Coefficient of `log|z|` in the expansion: `vol Z / (pi sqrt(det M))`.
    pub fn tau_constant(&self) -> Result<PiGraded, WalkError> {
        let det = self.correlation_matrix().det();
        let root = det.sqrt_exact().ok_or_else(|| WalkError::NotSquare(det.clone()))?;
        let tau = self.cell_volume().checked_div(&root)?;
        Ok(PiGraded::over_pi(ExactComplex::real(tau)))
    }

    /// Cartesian position of lattice coordinates `(n1, n2)`.
    pub fn point(&self, n1: i64, n2: i64) -> ExactComplex {
        lattice_point(&self.basis, n1, n2)
    }

    /// Index of the lattice generated by the steps inside the declared one.
    pub fn lattice_index(&self) -> u64 {
        let mut g = Integer::new();
        for (i, s) in self.steps.iter().enumerate() {
            for t in &self.steps[i + 1..] {
                let m = s.coords.0 * t.coords.1 - s.coords.1 * t.coords.0;
                g = g.gcd(&Integer::from(m));
            }
        }
        g.to_u64().unwrap_or(0)
    }
}

fn compute_moment(steps: &[Step], a: u32, b: u32) -> ExactComplex {
    let mut acc = ExactComplex::zero();
    for s in steps {
        let t = &s.v.pow(a as i64).expect("nonnegative power")
            * &s.v.conj().pow(b as i64).expect("nonnegative power");
        acc = &acc + &t.scale(&s.p);
    }
    acc
}

fn integer_of(x: &FieldElement) -> Option<i64> {
    let r = x.as_rational()?;
    if *r.denom() != 1 {
        return None;
    }
    r.numer().to_i64()
}

/// Checks every walk invariant and tabulates moments.
pub fn validate_walk(raw: &RawWalk) -> Result<WalkSpec, WalkError> {
    let d = raw.sqrt_d;
    if d > 1 && FieldElement::sqrt_of(d).d() != d {
        return Err(WalkError::Radicand(d));
    }
    let parse_vec = |x: &RawNum, y: &RawNum| -> Result<ExactComplex, WalkError> {
        Ok(ExactComplex::new(x.parse(d)?, y.parse(d)?))
    };
    let basis = [
        parse_vec(&raw.basis[0][0], &raw.basis[0][1])?,
        parse_vec(&raw.basis[1][0], &raw.basis[1][1])?,
    ];
    let det = &(&basis[0].re * &basis[1].im) - &(&basis[0].im * &basis[1].re);
    if det.is_zero() {
        return Err(WalkError::DegenerateBasis);
    }
    if raw.steps.is_empty() {
        return Err(WalkError::Empty);
    }
    let mut steps = Vec::with_capacity(raw.steps.len());
    let mut total = Rational::new();
    let mut drift = ExactComplex::zero();
    for (i, s) in raw.steps.iter().enumerate() {
        let p = s.p.parse(d)?.as_rational().cloned().ok_or(WalkError::NonPositive(i))?;
        if p <= 0 {
            return Err(WalkError::NonPositive(i));
        }
        let v = parse_vec(&s.vx, &s.vy)?;
        // Cramer's rule for v = n1 b1 + n2 b2.
        let n1 = (&(&v.re * &basis[1].im) - &(&v.im * &basis[1].re)).checked_div(&det)?;
        let n2 = (&(&basis[0].re * &v.im) - &(&basis[0].im * &v.re)).checked_div(&det)?;
        let coords = match (integer_of(&n1), integer_of(&n2)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(WalkError::OffLattice(i)),
        };
        total += &p;
        drift = &drift + &v.scale(&p);
        steps.push(Step { v, p, coords });
    }
    if total != 1 {
        return Err(WalkError::ProbabilitySum(total));
    }
    if !drift.is_zero() {
        return Err(WalkError::Drift(drift));
    }
    let spans = steps.iter().enumerate().any(|(i, s)| {
        steps[i + 1..].iter().any(|t| s.coords.0 * t.coords.1 != s.coords.1 * t.coords.0)
    });
    if !spans {
        return Err(WalkError::Degenerate);
    }
    let n = MOMENT_CACHE_DEGREE as usize;
    let powers: Vec<(Vec<ExactComplex>, Vec<ExactComplex>)> = steps
        .iter()
        .map(|s| {
            let mut up = vec![ExactComplex::one()];
            let mut down = vec![ExactComplex::one()];
            let c = s.v.conj();
            for k in 0..n {
                up.push(&up[k] * &s.v);
                down.push(&down[k] * &c);
            }
            (up, down)
        })
        .collect();
    let mut moments = HashMap::new();
    for a in 0..=n {
        for b in 0..=n - a {
            let mut acc = ExactComplex::zero();
            for (s, (up, down)) in steps.iter().zip(&powers) {
                acc = &acc + &(&up[a] * &down[b]).scale(&s.p);
            }
            moments.insert((a as u32, b as u32), acc);
        }
    }
    Ok(WalkSpec { name: raw.name.clone(), d, basis, steps, moments })
}
