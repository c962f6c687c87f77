//! The Shimura–Taniyama slope computation.
//!
//! For a prime `p ∤ m`, the `p`-divisible group of the Jacobian splits
//! along the `⟨p⟩`-orbits on the nonzero residues mod `m` whose element
//! order divides none of the `a(i)`. The piece attached to such an orbit
//! `o` is isoclinic of slope `α_o/#o` and height `#o`, where
//! `α_o = #(o ∩ S_1)`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::arith::{self, ArithError, FrobeniusOrbit};
use crate::monodromy::MonodromyDatum;
use crate::polygon::NewtonPolygon;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ShimuraError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("subgroup is not cyclic: no member generates it")]
    NonCyclicSubgroup,
}

/// Per-orbit slope data. Excluded orbits (element order divides some
/// `a(i)`) carry no polygon contribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitSlopeReport {
    pub orbit: FrobeniusOrbit,
    pub alpha: u64,
    pub beta: u64,
    pub slope: Rational,
    pub excluded: bool,
}

impl OrbitSlopeReport {
    /// The isoclinic polygon contributed by this orbit; empty if excluded.
    pub fn polygon(&self) -> NewtonPolygon {
        if self.excluded {
            NewtonPolygon::empty()
        } else {
            NewtonPolygon::isoclinic(self.slope, self.orbit.len())
        }
    }
}

fn reports_from_orbits(
    datum: &MonodromyDatum,
    orbits: Vec<FrobeniusOrbit>,
) -> Vec<OrbitSlopeReport> {
    let sig = datum.signature();
    orbits
        .into_iter()
        .map(|orbit| {
            let d = orbit.order();
            let excluded = datum.a().iter().any(|&ai| ai % d == 0);
            let alpha = orbit.members().iter().filter(|n| sig.s1().contains(n)).count() as u64;
            let beta = orbit.members().iter().filter(|n| sig.s0().contains(n)).count() as u64;
            let slope = if excluded {
                Rational::new(0, 1)
            } else {
                debug_assert_eq!(alpha + beta, orbit.len());
                Rational::new(alpha as i64, orbit.len() as i64)
            };
            OrbitSlopeReport {
                orbit,
                alpha,
                beta,
                slope,
                excluded,
            }
        })
        .collect()
}

/// One report per `⟨p⟩`-orbit on the nonzero residues mod `m`; requires
/// `p` prime with `p ∤ m`.
pub fn orbit_slopes(
    datum: &MonodromyDatum,
    p: u64,
) -> Result<Vec<OrbitSlopeReport>, ShimuraError> {
    let part = arith::frobenius_orbits(datum.m(), p)?;
    let orbits = part.orbits().to_vec();
    Ok(reports_from_orbits(datum, orbits))
}

/// Orbit reports for the orbits of the subgroup generated by a unit `r`;
/// the polygon for any prime `p ≡ r mod m` only depends on `⟨r⟩`.
pub fn orbit_slopes_for_generator(
    datum: &MonodromyDatum,
    r: u64,
) -> Result<Vec<OrbitSlopeReport>, ShimuraError> {
    let part = arith::orbits_of_unit(datum.m(), r)?;
    Ok(reports_from_orbits(datum, part.orbits().to_vec()))
}

fn polygon_from_reports(reports: &[OrbitSlopeReport]) -> NewtonPolygon {
    NewtonPolygon::from_slopes(
        reports
            .iter()
            .filter(|rep| !rep.excluded)
            .map(|rep| (rep.slope, rep.orbit.len())),
    )
}

/// Newton polygon of the reduction at `p` of the Jacobian: the amalgamate
/// over non-excluded orbits of the isoclinic polygon of slope `α_o/#o`
/// and height `#o`.
pub fn newton_polygon_at_p(
    datum: &MonodromyDatum,
    p: u64,
) -> Result<NewtonPolygon, ShimuraError> {
    Ok(polygon_from_reports(&orbit_slopes(datum, p)?))
}

/// Same polygon computed from the congruence class of a unit `r`,
/// standing in for any prime `p ≡ r mod m`.
pub fn newton_polygon_for_generator(
    datum: &MonodromyDatum,
    r: u64,
) -> Result<NewtonPolygon, ShimuraError> {
    Ok(polygon_from_reports(&orbit_slopes_for_generator(datum, r)?))
}

/// Polygon from an explicitly given cyclic subgroup `H` of the units
/// mod `m`; rejects subgroups with no generator among their members.
pub fn newton_polygon_for_subgroup(
    datum: &MonodromyDatum,
    subgroup: &BTreeSet<u64>,
) -> Result<NewtonPolygon, ShimuraError> {
    let m = datum.m();
    let generator = subgroup
        .iter()
        .copied()
        .find(|&h| arith::subgroup_generated(m, h).map_or(false, |g| &g == subgroup))
        .ok_or(ShimuraError::NonCyclicSubgroup)?;
    newton_polygon_for_generator(datum, generator)
}

/// True iff every non-excluded orbit is self-dual; then the polygon is
/// guaranteed to be `ss^g`.
pub fn supersingular_by_self_duality(
    datum: &MonodromyDatum,
    p: u64,
) -> Result<bool, ShimuraError> {
    let reports = orbit_slopes_for_generator(datum, p % datum.m())?;
    Ok(reports
        .iter()
        .filter(|rep| !rep.excluded)
        .all(|rep| rep.orbit.self_dual()))
}
