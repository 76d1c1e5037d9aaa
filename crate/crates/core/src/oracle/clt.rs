use super::OracleError;
use crate::walk::WalkSpec;

/// Largest period searched for.
const MAX_PERIOD: i64 = 64;

/// Leading-order Gaussian approximation of `P_n` in lattice coordinates.
///
/// `P_n(z)` vanishes unless `n = <kappa, z> (mod period)`; on that coset it
/// is close to `tau' n^-1 exp(-B(z)/n)` with `B(z) = <M^-1 z, z> / 2`.
#[derive(Clone, Debug)]
pub struct LatticeGaussian {
    pub period: u32,
    kappa: (i64, i64),
    m_inv: [[f64; 2]; 2],
    pub tau_prime: f64,
}

impl LatticeGaussian {
    pub fn new(walk: &WalkSpec) -> Result<Self, OracleError> {
        if walk.lattice_index() != 1 {
            return Err(OracleError::Unsupported(format!("{}: steps generate a proper sublattice", walk.name)));
        }
        let steps: Vec<((i64, i64), f64)> = walk.steps.iter().map(|s| (s.coords, s.p.to_f64())).collect();
        Self::from_steps(&steps).ok_or_else(|| OracleError::Unsupported(format!("{}: walk has nonzero drift", walk.name)))
    }

    /// From `(lattice step, probability)` pairs of a centred walk whose steps
    /// generate `Z^2`.
    pub(crate) fn from_steps(steps: &[((i64, i64), f64)]) -> Option<Self> {
        let mean = steps.iter().fold((0.0, 0.0), |m, ((x, y), p)| (m.0 + p * *x as f64, m.1 + p * *y as f64));
        if mean.0.abs() > 1e-12 || mean.1.abs() > 1e-12 {
            return None;
        }
        let mut m = [[0.0; 2]; 2];
        for ((x, y), p) in steps {
            let v = [*x as f64, *y as f64];
            for i in 0..2 {
                for j in 0..2 {
                    m[i][j] += p * v[i] * v[j];
                }
            }
        }
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let m_inv = [[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]];
        let (period, kappa) = (1..=MAX_PERIOD)
            .rev()
            .find_map(|q| {
                (0..q).flat_map(|a| (0..q).map(move |b| (a, b))).find_map(|k| {
                    steps
                        .iter()
                        .all(|((x, y), _)| (k.0 * x + k.1 * y - 1).rem_euclid(q) == 0)
                        .then_some((q, k))
                })
            })
            .expect("period 1 always works");
        let tau_prime = period as f64 / (2.0 * std::f64::consts::PI * det.sqrt());
        Some(LatticeGaussian { period: period as u32, kappa, m_inv, tau_prime })
    }

    /// The residue of `n` for which `P_n(z)` can be nonzero.
    pub fn residue(&self, z: (i64, i64)) -> u64 {
        (self.kappa.0 * z.0 + self.kappa.1 * z.1).rem_euclid(self.period as i64) as u64
    }

    /// `B(z) = <M^-1 z, z> / 2`.
    pub fn quadratic(&self, z: (i64, i64)) -> f64 {
        let (x, y) = (z.0 as f64, z.1 as f64);
        0.5 * (self.m_inv[0][0] * x * x + (self.m_inv[0][1] + self.m_inv[1][0]) * x * y + self.m_inv[1][1] * y * y)
    }

    pub fn density(&self, n: u64, z: (i64, i64)) -> f64 {
        if n == 0 || n % self.period as u64 != self.residue(z) {
            return 0.0;
        }
        self.tau_prime / n as f64 * (-self.quadratic(z) / n as f64).exp()
    }
}

/// Leading local CLT approximation of `P_n(z)`, zero off the reachable coset.
pub fn local_clt(walk: &WalkSpec, n: u64, z: (i64, i64)) -> Result<f64, OracleError> {
    Ok(LatticeGaussian::new(walk)?.density(n, z))
}
