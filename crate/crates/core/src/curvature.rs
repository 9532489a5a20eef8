//! Curvature quadruples and the parameter space they live in.
//!
//! A gasket geometry is described by the curvatures `(alpha, beta, gamma)` of
//! its three seed members together with the derived quantity
//! `kappa = sqrt(beta*gamma + gamma*alpha + alpha*beta)`. The space `Gamma`
//! of admissible quadruples requires nonnegative entries and `kappa > 0`,
//! i.e. at most one of the three curvatures vanishes (a half-plane).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{isqrt_u128, Backend, Scalar};

/// Relative tolerance for float equality checks throughout the crate.
pub const REL_TOL: f64 = 1e-12;

/// Largest float accepted for exact-integer detection; above this, `f64`
/// cannot represent every integer and "integral" would be a lie.
const EXACT_LIMIT: f64 = 9.007_199_254_740_992e15; // 2^53

/// `sqrt(beta*gamma + gamma*alpha + alpha*beta)`.
///
/// Returns 0 when two of the arguments vanish; callers that need membership
/// in the parameter space must reject that case themselves.
pub fn kappa_of(alpha: f64, beta: f64, gamma: f64) -> f64 {
    let radicand = f64::sum3(&(beta * gamma), &(gamma * alpha), &(alpha * beta))
        .expect("float sum is infallible");
    radicand.sqrt()
}

/// Exact integer kappa, when the radicand is a perfect square.
fn kappa_of_exact(alpha: u128, beta: u128, gamma: u128) -> Option<u128> {
    let radicand = beta
        .checked_mul(gamma)?
        .checked_add(gamma.checked_mul(alpha)?)?
        .checked_add(alpha.checked_mul(beta)?)?;
    let root = isqrt_u128(radicand);
    (root * root == radicand).then_some(root)
}

/// Membership in the parameter space: nonnegative entries, `kappa > 0`, and
/// the defining identity `kappa^2 = beta*gamma + gamma*alpha + alpha*beta`
/// within [`REL_TOL`].
pub fn in_gamma(alpha: f64, beta: f64, gamma: f64, kappa: f64) -> bool {
    if !(alpha >= 0.0 && beta >= 0.0 && gamma >= 0.0 && kappa > 0.0) {
        return false;
    }
    let radicand = beta * gamma + gamma * alpha + alpha * beta;
    let diff = (kappa * kappa - radicand).abs();
    diff <= REL_TOL * radicand.max(kappa * kappa)
}

/// The compactness parameter for the truncated spaces `Gamma_epsilon`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct GammaEpsilonParams {
    epsilon: f64,
}

impl GammaEpsilonParams {
    pub fn new(epsilon: f64) -> Result<Self> {
        if epsilon > 0.0 && epsilon < 1.0 {
            Ok(Self { epsilon })
        } else {
            Err(Error::InvalidArgument(format!(
                "epsilon must lie in (0, 1), got {epsilon}"
            )))
        }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// A permutation of the three seed positions. `perm[i]` is the (0-based)
/// source index for position `i`, so `new = (old[perm[0]], old[perm[1]],
/// old[perm[2]])`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Permutation(pub(crate) [usize; 3]);

impl Permutation {
    pub const IDENTITY: Permutation = Permutation([0, 1, 2]);

    pub fn new(map: [usize; 3]) -> Result<Self> {
        let mut seen = [false; 3];
        for &i in &map {
            if i > 2 || seen[i] {
                return Err(Error::InvalidArgument(format!(
                    "not a permutation of {{0,1,2}}: {map:?}"
                )));
            }
            seen[i] = true;
        }
        Ok(Self(map))
    }

    /// All six permutations, identity first.
    pub fn all() -> [Permutation; 6] {
        [
            Permutation([0, 1, 2]),
            Permutation([0, 2, 1]),
            Permutation([1, 0, 2]),
            Permutation([1, 2, 0]),
            Permutation([2, 0, 1]),
            Permutation([2, 1, 0]),
        ]
    }

    pub fn apply_indices(&self) -> [usize; 3] {
        self.0
    }

    /// The induced relabeling of letters: letter `j` of the permuted triple
    /// refers to member `perm[j]` of the original.
    pub fn letter_map(&self) -> [crate::word::Letter; 3] {
        let l = crate::word::Letter::ALL;
        [l[self.0[0]], l[self.0[1]], l[self.0[2]]]
    }
}

/// A point of the parameter space: `(alpha, beta, gamma, kappa)` with the
/// kappa identity enforced at construction.
///
/// When the quadruple is integral (including kappa) an exact `u128` view is
/// carried alongside the floats, and integer-backend operations act on it.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureVector {
    q: [f64; 4],
    exact: Option<[u128; 4]>,
}

impl CurvatureVector {
    /// Builds the quadruple from three curvatures, deriving kappa.
    ///
    /// Rejects negative or non-finite entries and configurations with two
    /// or more vanishing curvatures (kappa would be 0).
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite() && gamma.is_finite()) {
            return Err(Error::NotInGamma {
                alpha,
                beta,
                gamma,
                reason: "curvatures must be finite",
            });
        }
        if alpha < 0.0 || beta < 0.0 || gamma < 0.0 {
            return Err(Error::NotInGamma {
                alpha,
                beta,
                gamma,
                reason: "curvatures must be nonnegative",
            });
        }
        let kappa = kappa_of(alpha, beta, gamma);
        if kappa <= 0.0 {
            return Err(Error::NotInGamma {
                alpha,
                beta,
                gamma,
                reason: "at most one curvature may vanish (kappa must be positive)",
            });
        }
        let exact = Self::detect_exact(alpha, beta, gamma);
        let q = match exact {
            // derive the float view from the exact one so the two never drift
            Some(e) => [e[0] as f64, e[1] as f64, e[2] as f64, e[3] as f64],
            None => [alpha, beta, gamma, kappa],
        };
        Ok(Self { q, exact })
    }

    fn detect_exact(alpha: f64, beta: f64, gamma: f64) -> Option<[u128; 4]> {
        let as_int = |x: f64| (x.fract() == 0.0 && x <= EXACT_LIMIT).then_some(x as u128);
        let (a, b, c) = (as_int(alpha)?, as_int(beta)?, as_int(gamma)?);
        let k = kappa_of_exact(a, b, c)?;
        Some([a, b, c, k])
    }

    /// Rebuilds a vector from a raw quadruple, verifying the kappa identity.
    pub fn from_quadruple(q: [f64; 4]) -> Result<Self> {
        if !in_gamma(q[0], q[1], q[2], q[3]) {
            return Err(Error::NotInGamma {
                alpha: q[0],
                beta: q[1],
                gamma: q[2],
                reason: "quadruple fails the kappa identity or sign constraints",
            });
        }
        let exact = Self::detect_exact(q[0], q[1], q[2])
            .filter(|e| e[3] as f64 == q[3]);
        Ok(Self { q, exact })
    }

    pub(crate) fn from_exact(e: [u128; 4]) -> Self {
        debug_assert_eq!(
            e[3].checked_mul(e[3]),
            e[1].checked_mul(e[2])
                .and_then(|x| x.checked_add(e[2] * e[0]))
                .and_then(|x| x.checked_add(e[0] * e[1]))
        );
        Self {
            q: [e[0] as f64, e[1] as f64, e[2] as f64, e[3] as f64],
            exact: Some(e),
        }
    }

    pub fn alpha(&self) -> f64 {
        self.q[0]
    }

    pub fn beta(&self) -> f64 {
        self.q[1]
    }

    pub fn gamma(&self) -> f64 {
        self.q[2]
    }

    pub fn kappa(&self) -> f64 {
        self.q[3]
    }

    pub fn quadruple(&self) -> [f64; 4] {
        self.q
    }

    /// The exact integer view, when the quadruple is integral.
    pub fn exact(&self) -> Option<[u128; 4]> {
        self.exact
    }

    /// Drops the exact view, forcing float arithmetic downstream.
    pub fn to_float(&self) -> Self {
        Self {
            q: self.q,
            exact: None,
        }
    }

    pub fn in_gamma(&self) -> bool {
        in_gamma(self.q[0], self.q[1], self.q[2], self.q[3])
    }

    /// Interior membership: all four entries strictly positive.
    pub fn in_gamma_interior(&self) -> bool {
        self.q.iter().all(|&x| x > 0.0)
    }

    /// Membership in the compact truncation: entries bounded by `1/epsilon`
    /// and all pairwise sums of the first three at least `epsilon`.
    pub fn in_gamma_eps(&self, p: &GammaEpsilonParams) -> bool {
        let [a, b, g, _] = self.q;
        let inv = 1.0 / p.epsilon();
        a <= inv
            && b <= inv
            && g <= inv
            && self.min_pairwise_sum() >= p.epsilon()
    }

    /// `min(beta+gamma, gamma+alpha, alpha+beta)`.
    pub fn min_pairwise_sum(&self) -> f64 {
        let [a, b, g, _] = self.q;
        (b + g).min(g + a).min(a + b)
    }

    /// The largest `epsilon` for which this vector lies in `Gamma_epsilon`.
    pub fn gamma_eps_capacity(&self) -> f64 {
        let max_entry = self.q[0].max(self.q[1]).max(self.q[2]);
        self.min_pairwise_sum().min(1.0 / max_entry)
    }

    /// Curvature of the disk inscribed in the ideal triangle:
    /// `alpha + beta + gamma + 2*kappa`.
    pub fn inscribed_curvature(&self) -> f64 {
        let [a, b, g, k] = self.q;
        f64::sum3(&a, &b, &g).expect("infallible") + 2.0 * k
    }

    /// Curvature of the disk through the three tangency points: `kappa`.
    pub fn circumscribed_curvature(&self) -> f64 {
        self.q[3]
    }

    /// Scales all four entries by `s > 0`.
    ///
    /// The exact view survives when `s` is a positive integer.
    pub fn scale(&self, s: f64) -> Result<Self> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "scale factor must be positive and finite, got {s}"
            )));
        }
        if let Some(e) = self.exact {
            if s.fract() == 0.0 && s <= EXACT_LIMIT {
                let si = s as u128;
                let mut out = [0u128; 4];
                for (o, x) in out.iter_mut().zip(e) {
                    *o = x.checked_mul(si).ok_or(Error::Overflow { context: "scale" })?;
                }
                return Ok(Self::from_exact(out));
            }
        }
        Ok(Self {
            q: [
                s * self.q[0],
                s * self.q[1],
                s * self.q[2],
                s * self.q[3],
            ],
            exact: None,
        })
    }

    /// Permutes the first three entries; kappa is symmetric so it is fixed.
    pub fn permute(&self, pi: Permutation) -> Self {
        let m = pi.0;
        Self {
            q: [self.q[m[0]], self.q[m[1]], self.q[m[2]], self.q[3]],
            exact: self
                .exact
                .map(|e| [e[m[0]], e[m[1]], e[m[2]], e[3]]),
        }
    }

    /// Euclidean distance on the first three coordinates (the metric of the
    /// parameter space; kappa is redundant and excluded).
    pub fn rho(&self, other: &CurvatureVector) -> f64 {
        let d0 = self.q[0] - other.q[0];
        let d1 = self.q[1] - other.q[1];
        let d2 = self.q[2] - other.q[2];
        (d0 * d0 + d1 * d1 + d2 * d2).sqrt()
    }

    /// Converts to a backend quadruple for the counting engine.
    pub fn to_quad<N: Scalar>(&self) -> Result<crate::matrix::Quad<N>> {
        match N::BACKEND {
            Backend::Float64 => Ok(crate::matrix::Quad::from_f64_lossy(self.q)),
            _ => {
                let e = self.exact.ok_or(Error::BackendUnavailable {
                    backend: N::BACKEND,
                })?;
                Ok(crate::matrix::Quad::from_u128(e))
            }
        }
    }
}

impl std::fmt::Display for CurvatureVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({}, {}, {}, {})",
            self.q[0], self.q[1], self.q[2], self.q[3]
        )
    }
}

impl Serialize for CurvatureVector {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.q.serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn kappa_examples() {
        assert_relative_eq!(kappa_of(1.0, 1.0, 1.0), 3f64.sqrt(), max_relative = REL_TOL);
        // radicand 18 + 12 + 6 = 36
        assert_eq!(kappa_of(2.0, 3.0, 6.0), 6.0);
        assert_eq!(kappa_of(0.0, 0.0, 5.0), 0.0);
    }

    #[test]
    fn gamma_membership() {
        assert!(!in_gamma(0.0, 0.0, 5.0, 0.0));
        assert!(in_gamma(2.0, 3.0, 6.0, 6.0));
        assert!(in_gamma(0.0, 1.0, 1.0, 1.0));
        assert!(!in_gamma(-1.0, 2.0, 2.0, kappa_of(1.0, 2.0, 2.0)));
        // kappa identity violated
        assert!(!in_gamma(2.0, 3.0, 6.0, 7.0));
    }

    #[test]
    fn gamma_eps_examples() {
        let v = CurvatureVector::new(2.0, 3.0, 6.0).unwrap();
        let eps = GammaEpsilonParams::new(1.0 / 6.0).unwrap();
        assert!(v.in_gamma_eps(&eps));

        let hp = CurvatureVector::new(0.0, 1.0, 1.0).unwrap();
        let eps = GammaEpsilonParams::new(0.5).unwrap();
        assert!(hp.in_gamma_eps(&eps));
        assert!(!hp.in_gamma_interior());

        // entries exceed 1/eps
        let eps_tight = GammaEpsilonParams::new(0.9).unwrap();
        assert!(!v.in_gamma_eps(&eps_tight));
    }

    #[test]
    fn constructor_rejects_double_zero() {
        assert!(CurvatureVector::new(0.0, 0.0, 5.0).is_err());
        assert!(CurvatureVector::new(1.0, -1.0, 1.0).is_err());
        assert!(CurvatureVector::new(f64::NAN, 1.0, 1.0).is_err());
    }

    #[test]
    fn exact_detection() {
        let v = CurvatureVector::new(2.0, 3.0, 6.0).unwrap();
        assert_eq!(v.exact(), Some([2, 3, 6, 6]));

        // kappa = sqrt(3) is irrational: no exact view
        let w = CurvatureVector::new(1.0, 1.0, 1.0).unwrap();
        assert_eq!(w.exact(), None);
        assert_relative_eq!(w.kappa(), 3f64.sqrt(), max_relative = REL_TOL);

        // half-plane with integral kappa
        let h = CurvatureVector::new(0.0, 1.0, 1.0).unwrap();
        assert_eq!(h.exact(), Some([0, 1, 1, 1]));
    }

    #[test]
    fn inscribed_and_circumscribed() {
        let v = CurvatureVector::new(2.0, 3.0, 6.0).unwrap();
        assert_eq!(v.inscribed_curvature(), 23.0);
        assert_eq!(v.circumscribed_curvature(), 6.0);

        let w = CurvatureVector::new(1.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(
            w.inscribed_curvature(),
            3.0 + 2.0 * 3f64.sqrt(),
            max_relative = REL_TOL
        );
        assert_relative_eq!(w.circumscribed_curvature(), 3f64.sqrt(), max_relative = REL_TOL);

        let h = CurvatureVector::new(0.0, 1.0, 1.0).unwrap();
        assert_eq!(h.inscribed_curvature(), 4.0);
        assert_eq!(h.circumscribed_curvature(), 1.0);

        assert!(v.inscribed_curvature() > v.circumscribed_curvature());
    }

    #[test]
    fn scale_and_permute() {
        let v = CurvatureVector::new(2.0, 3.0, 6.0).unwrap();
        let s = v.scale(2.0).unwrap();
        assert_eq!(s.quadruple(), [4.0, 6.0, 12.0, 12.0]);
        assert_eq!(s.exact(), Some([4, 6, 12, 12]));

        let p = v.permute(Permutation::new([2, 0, 1]).unwrap());
        assert_eq!(p.quadruple(), [6.0, 2.0, 3.0, 6.0]);

        let id = v.permute(Permutation::IDENTITY).scale(1.0).unwrap();
        assert_eq!(id, v);

        assert!(v.scale(0.0).is_err());
        assert!(v.scale(-2.0).is_err());
    }

    #[test]
    fn non_integral_scale_drops_exact() {
        let v = CurvatureVector::new(2.0, 3.0, 6.0).unwrap();
        let s = v.scale(0.5).unwrap();
        assert_eq!(s.exact(), None);
        assert!(s.in_gamma());
    }

    #[test]
    fn rho_is_euclidean_on_first_three() {
        let v = CurvatureVector::new(2.0, 3.0, 6.0).unwrap();
        let w = CurvatureVector::new(2.0, 3.0, 7.0).unwrap();
        assert_relative_eq!(v.rho(&w), 1.0, max_relative = REL_TOL);
    }
}
