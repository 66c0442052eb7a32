//! The two identities, checked by brute force over the context types. The
//! side conditions are `𝒱_L` memberships supplied by an oracle.

use serde::Serialize;
use wadge_algebra::ThinAlgebra;

/// Which side condition licensed an eq-bool instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `(u, v, w) ∈ 𝒱_L`
    Forward,
    /// `(w, v, u) ∈ 𝒱_L`
    Backward,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EqBoolViolation {
    pub u: usize,
    pub v: usize,
    pub w: usize,
    pub orientation: Orientation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EqBool {
    pub holds: bool,
    pub violation: Option<EqBoolViolation>,
    /// instances whose side condition held
    pub instances: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EqLimitViolation {
    pub v: usize,
    pub u: (usize, usize),
    pub w: (usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EqLimit {
    pub holds: bool,
    pub violation: Option<EqLimitViolation>,
    pub instances: usize,
}

/// `u^♯ u w^♯ = u^♯ v w^♯ = u^♯ w w^♯` whenever `(u, v, w)` or `(w, v, u)`
/// is in `𝒱_L`. Instances are visited in lexicographic order and the first
/// failure is reported.
pub fn check_eq_bool<E>(alg: &ThinAlgebra, mut member: impl FnMut(&[usize]) -> Result<bool, E>) -> Result<EqBool, E> {
    let n = alg.num_context_types();
    let mut instances = 0;
    let mut violation = None;
    for u in 0..n {
        let us = alg.sharp_power(u);
        for v in 0..n {
            for w in 0..n {
                let orientation = if member(&[u, v, w])? {
                    Orientation::Forward
                } else if member(&[w, v, u])? {
                    Orientation::Backward
                } else {
                    continue;
                };
                instances += 1;
                let ws = alg.sharp_power(w);
                let side = |x| alg.compose(alg.compose(us, x), ws);
                let (a, b, c) = (side(u), side(v), side(w));
                if violation.is_none() && !(a == b && b == c) {
                    violation = Some(EqBoolViolation { u, v, w, orientation });
                }
            }
        }
    }
    Ok(EqBool { holds: violation.is_none(), violation, instances })
}

/// `(u₂ w₂^♯ v)^♯ u₁ w₁^∞ = (u₂ w₂^♯ v)^∞` for every context type `v` (the
/// unit excluded) and all pairs `(u₁, u₂)`, `(w₁, w₂)` in `𝒱_L`.
pub fn check_eq_limit<E>(alg: &ThinAlgebra, mut member: impl FnMut(&[usize]) -> Result<bool, E>) -> Result<EqLimit, E> {
    let n = alg.num_context_types();
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if member(&[a, b])? {
                pairs.push((a, b));
            }
        }
    }
    let mut instances = 0;
    let mut violation = None;
    for v in 0..n {
        for &(u1, u2) in &pairs {
            for &(w1, w2) in &pairs {
                instances += 1;
                let x = alg.compose(alg.compose(u2, alg.sharp_power(w2)), v);
                let lhs = alg.act(alg.compose(alg.sharp_power(x), u1), alg.omega(w1));
                if violation.is_none() && lhs != alg.omega(x) {
                    violation = Some(EqLimitViolation { v, u: (u1, u2), w: (w1, w2) });
                }
            }
        }
    }
    Ok(EqLimit { holds: violation.is_none(), violation, instances })
}
