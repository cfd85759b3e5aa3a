use crate::group::GroupRef;
use crate::hom::Homomorphism;
use crate::subset::{stabilizer, GroupSubset};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FactorizationError {
    #[error("tables must have one entry per domain element, each a target element")]
    Shape,
    #[error("alpha(x) beta(x^-1 z) != alpha(e) beta(z) at x = {x}, z = {z}")]
    NotBilinear { x: usize, z: usize },
    #[error("x -> s^-1 alpha(x) is not a homomorphism at ({x}, {y})")]
    NotHomomorphism { x: usize, y: usize },
    #[error("beta(y) != pi(y) t at y = {y}")]
    BetaMismatch { y: usize },
}

/// `α(x) = s π(x)` and `β(y) = π(y) t`.
#[derive(Debug, Clone)]
pub struct BilinearFactorization {
    pub s: usize,
    pub t: usize,
    pub pi: Homomorphism,
}

impl BilinearFactorization {
    pub fn alpha(&self) -> Vec<usize> {
        let m = self.pi.target();
        self.pi.source().elements().map(|x| m.mul(self.s, self.pi.apply(x))).collect()
    }

    pub fn beta(&self) -> Vec<usize> {
        let m = self.pi.target();
        self.pi.source().elements().map(|y| m.mul(self.pi.apply(y), self.t)).collect()
    }
}

/// Factors maps `α, β : G -> M` whose product `α(x)β(y)` only depends on
/// `xy`. Every domain element is used; the base points are the identity.
pub fn factorize_bilinear(
    domain: &GroupRef,
    target: &GroupRef,
    alpha: &[usize],
    beta: &[usize],
) -> Result<BilinearFactorization, FactorizationError> {
    let (g, m) = (domain, target);
    let n = g.order();
    if alpha.len() != n || beta.len() != n || alpha.iter().chain(beta).any(|&y| y >= m.order()) {
        return Err(FactorizationError::Shape);
    }
    let e = g.identity();
    // xy = z for y = x⁻¹z, so this covers every pair once
    for x in g.elements() {
        let xi = g.inv(x);
        for z in g.elements() {
            if m.mul(alpha[x], beta[g.mul(xi, z)]) != m.mul(alpha[e], beta[z]) {
                return Err(FactorizationError::NotBilinear { x, z });
            }
        }
    }
    let s = alpha[e];
    let t = beta[e];
    let si = m.inv(s);
    let map: Vec<usize> = g.elements().map(|x| m.mul(si, alpha[x])).collect();
    let pi = Homomorphism::new(g.clone(), m.clone(), map).map_err(|err| match err {
        crate::group::GroupError::NotAHomomorphism { x, y } => FactorizationError::NotHomomorphism { x, y },
        _ => FactorizationError::Shape,
    })?;
    if let Some(y) = g.elements().find(|&y| beta[y] != m.mul(pi.apply(y), t)) {
        return Err(FactorizationError::BetaMismatch { y });
    }
    Ok(BilinearFactorization { s, t, pi })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatchError {
    #[error("maps must be surjective with a common source and target")]
    Shape,
    #[error("kernels differ")]
    KernelsDiffer,
    #[error("stabilizer of I{0} is not trivial")]
    NontrivialStabilizer(u8),
    #[error("pullbacks of I1 and I2 differ")]
    PullbacksDiffer,
    #[error("no automorphism carries I2 onto I1")]
    NoMatchingAutomorphism,
}

/// The automorphism `α` of the target with `π₁ = α ∘ π₂` and `I₁ = α(I₂)`.
pub fn match_pullbacks(
    pi1: &Homomorphism,
    pi2: &Homomorphism,
    i1: &GroupSubset,
    i2: &GroupSubset,
) -> Result<Homomorphism, MatchError> {
    let g = pi1.source();
    let h = pi1.target();
    if !g.same_as(pi2.source())
        || !h.same_as(pi2.target())
        || !pi1.is_surjective()
        || !pi2.is_surjective()
        || !i1.group().same_as(h)
        || !i2.group().same_as(h)
    {
        return Err(MatchError::Shape);
    }
    if pi1.kernel() != pi2.kernel() {
        return Err(MatchError::KernelsDiffer);
    }
    if !stabilizer(i1).is_trivial() {
        return Err(MatchError::NontrivialStabilizer(1));
    }
    if !stabilizer(i2).is_trivial() {
        return Err(MatchError::NontrivialStabilizer(2));
    }
    if pi1.preimage_of(i1.bits()) != pi2.preimage_of(i2.bits()) {
        return Err(MatchError::PullbacksDiffer);
    }
    // equal kernels make α(π₂(x)) = π₁(x) well defined
    let mut map = vec![usize::MAX; h.order()];
    for x in g.elements() {
        map[pi2.apply(x)] = pi1.apply(x);
    }
    let alpha = Homomorphism::new(h.clone(), h.clone(), map).map_err(|_| MatchError::NoMatchingAutomorphism)?;
    if !alpha.is_bijective() || alpha.image_of(i2.bits()) != *i1.bits() {
        return Err(MatchError::NoMatchingAutomorphism);
    }
    Ok(alpha)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SplitError {
    #[error("characters must share one source and one target")]
    Shape,
    #[error("character {0} is its own inverse")]
    SelfInverse(usize),
    #[error("the inverse of character {0} is not in the list")]
    MissingInverse(usize),
    #[error("character {0} appears twice")]
    Duplicate(usize),
}

/// Splits characters closed under inversion into `S` and `Š`, where `S`
/// holds each character whose table is lexicographically below its
/// inverse's, and `Š[i]` is the inverse of `S[i]`.
pub fn split_characters(chars: &[Homomorphism]) -> Result<(Vec<Homomorphism>, Vec<Homomorphism>), SplitError> {
    let Some(first) = chars.first() else {
        return Ok((Vec::new(), Vec::new()));
    };
    let (g, m) = (first.source(), first.target());
    if chars.iter().any(|c| !c.source().same_as(g) || !c.target().same_as(m)) {
        return Err(SplitError::Shape);
    }
    let tables: Vec<Vec<usize>> = chars.iter().map(|c| c.table()).collect();
    for (i, t) in tables.iter().enumerate() {
        if tables[..i].contains(t) {
            return Err(SplitError::Duplicate(i));
        }
    }
    let mut s = Vec::new();
    let mut check = Vec::new();
    for (i, t) in tables.iter().enumerate() {
        let inv: Vec<usize> = t.iter().map(|&y| m.inv(y)).collect();
        if inv == *t {
            return Err(SplitError::SelfInverse(i));
        }
        let Some(j) = tables.iter().position(|u| *u == inv) else {
            return Err(SplitError::MissingInverse(i));
        };
        if *t < inv {
            s.push(chars[i].clone());
            check.push(chars[j].clone());
        }
    }
    Ok((s, check))
}
