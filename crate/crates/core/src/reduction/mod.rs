//! Reduction certificates, Vosper structure, bilinear factorization and
//! sturmian detection.

mod bilinear;
mod kneser;
mod sturmian;
mod vosper;

pub use bilinear::*;
pub use kneser::*;
pub use sturmian::*;
pub use vosper::*;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::bits::Bits;
use crate::group::{GroupJson, GroupRef};
use crate::hom::Homomorphism;
use crate::rational::Q;
use crate::subgroup::Subgroup;
use crate::subset::{GroupSubset, PairTag, SubsetError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error("pair is {found}, expected {expected}")]
    WrongClass { found: PairTag, expected: &'static str },
    #[error("this reduction needs an abelian group")]
    NonAbelian,
    #[error(transparent)]
    Subset(#[from] SubsetError),
    #[error(transparent)]
    Group(#[from] crate::group::GroupError),
}

/// A quotient map `p : G -> M` and image sets `(I, J)` with
/// `A ⊆ p⁻¹(I)`, `B ⊆ p⁻¹(J)`.
#[derive(Debug, Clone)]
pub struct ReductionCertificate {
    pub kernel: Subgroup,
    pub quotient: GroupRef,
    pub projection: Homomorphism,
    pub image_i: GroupSubset,
    pub image_j: GroupSubset,
    /// `m_G(AB) = m_M(IJ)`.
    pub product_measure_match: bool,
    /// `m_M(IJ) = m_M(I) + m_M(J) - m_M({e})`.
    pub overshoot_holds: bool,
}

/// Result of re-checking a certificate from scratch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateCheck {
    pub projection_is_homomorphism: bool,
    pub kernel_matches: bool,
    pub contains_a: bool,
    pub contains_b: bool,
    pub product_measure_match: bool,
    pub overshoot_holds: bool,
    /// The stored flags agree with the recomputed ones.
    pub flags_consistent: bool,
}

impl CertificateCheck {
    /// Everything except the overshoot identity, which Kemperman
    /// reductions do not promise.
    pub fn structurally_valid(&self) -> bool {
        self.projection_is_homomorphism
            && self.kernel_matches
            && self.contains_a
            && self.contains_b
            && self.product_measure_match
            && self.flags_consistent
    }

    pub fn all_hold(&self) -> bool {
        self.structurally_valid() && self.overshoot_holds
    }
}

fn brute_product(g: &crate::group::FiniteGroup, a: &[usize], b: &[usize]) -> Bits {
    let mut out = Bits::new(g.order());
    for &x in a {
        for &y in b {
            out.insert(g.mul(x, y));
        }
    }
    out
}

impl ReductionCertificate {
    /// Recomputes every claim for the pair `(a, b)` without reusing any
    /// intermediate result of the reduction.
    pub fn validate(&self, a: &GroupSubset, b: &GroupSubset) -> CertificateCheck {
        let g = a.group().clone();
        let m = self.quotient.clone();
        let map = self.projection.table();
        let mut hom = map.len() == g.order();
        if hom {
            'scan: for x in g.elements() {
                for y in g.elements() {
                    if map[g.mul(x, y)] != m.mul(map[x], map[y]) {
                        hom = false;
                        break 'scan;
                    }
                }
            }
        }
        let kernel_matches = hom
            && g.elements()
                .all(|x| (map[x] == m.identity()) == self.kernel.contains(x));
        let contains_a = hom && a.iter().all(|x| self.image_i.contains(map[x]));
        let contains_b = hom && b.iter().all(|x| self.image_j.contains(map[x]));
        let av: Vec<usize> = a.iter().collect();
        let bv: Vec<usize> = b.iter().collect();
        let ab = brute_product(&g, &av, &bv).count();
        let iv: Vec<usize> = self.image_i.iter().collect();
        let jv: Vec<usize> = self.image_j.iter().collect();
        let ij = brute_product(&m, &iv, &jv).count();
        let (ng, nm) = (g.order() as i64, m.order() as i64);
        let m_ij = Q::new(ij as i64, nm);
        let product_measure_match = Q::new(ab as i64, ng) == m_ij;
        let overshoot_holds =
            m_ij == Q::new(iv.len() as i64 + jv.len() as i64 - 1, nm);
        CertificateCheck {
            projection_is_homomorphism: hom,
            kernel_matches,
            contains_a,
            contains_b,
            product_measure_match,
            overshoot_holds,
            flags_consistent: product_measure_match == self.product_measure_match
                && overshoot_holds == self.overshoot_holds,
        }
    }

    /// JSON form with a fresh validation and a SHA-256 digest over the
    /// certificate fields and that validation.
    pub fn to_json(&self, a: &GroupSubset, b: &GroupSubset) -> serde_json::Value {
        let body = CertificateBody {
            kernel: GroupSubset::of_subgroup(&self.kernel).labels(),
            quotient: self.quotient.to_json(),
            projection: self.projection.table(),
            image_i: self.image_i.labels(),
            image_j: self.image_j.labels(),
            product_measure_match: self.product_measure_match,
            overshoot_holds: self.overshoot_holds,
            validation: self.validate(a, b),
        };
        let mut value = serde_json::to_value(&body).expect("certificate serializes");
        let digest = hex::encode(Sha256::digest(value.to_string().as_bytes()));
        value["digest"] = serde_json::Value::String(digest);
        value
    }
}

#[derive(Serialize)]
struct CertificateBody {
    kernel: Vec<String>,
    quotient: GroupJson,
    projection: Vec<usize>,
    image_i: Vec<String>,
    image_j: Vec<String>,
    product_measure_match: bool,
    overshoot_holds: bool,
    validation: CertificateCheck,
}

/// Builds the certificate for the quotient by `kernel`.
fn certificate_for(a: &GroupSubset, b: &GroupSubset, kernel: Subgroup) -> Result<ReductionCertificate, ReductionError> {
    let (quotient, projection) = crate::subgroup::quotient(&kernel)?;
    let image_i = GroupSubset::new(quotient.clone(), projection.image_of(a.bits()))?;
    let image_j = GroupSubset::new(quotient.clone(), projection.image_of(b.bits()))?;
    let ab = crate::subset::product_set(a, b)?;
    let ij = crate::subset::product_set(&image_i, &image_j)?;
    let (ng, nm) = (a.group().order() as i64, quotient.order() as i64);
    let m_ij = Q::new(ij.len() as i64, nm);
    Ok(ReductionCertificate {
        product_measure_match: Q::new(ab.len() as i64, ng) == m_ij,
        overshoot_holds: m_ij == Q::new(image_i.len() as i64 + image_j.len() as i64 - 1, nm),
        kernel,
        quotient,
        projection,
        image_i,
        image_j,
    })
}
