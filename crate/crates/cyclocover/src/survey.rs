//! Batch enumeration: full tables for one `m`, and searches over ranges
//! of `m` for supersingular or otherwise prescribed Newton polygons.
//!
//! Congruence classes mod `m` are grouped by the subgroup they generate,
//! since the polygon only depends on that subgroup.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use num_integer::Integer;

use crate::arith::{self};
use crate::monodromy::{enumerate_classes, MonodromyDatum, Signature};
use crate::polygon::NewtonPolygon;
use crate::shimura::newton_polygon_for_generator;
use crate::Rational;

/// A group of unit residues mod `m` generating the same cyclic subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceClassGroup {
    pub subgroup: BTreeSet<u64>,
    pub members: Vec<u64>,
}

/// Unit residues mod `m` partitioned by the subgroup they generate,
/// ordered by least member.
pub fn congruence_classes_grouped(m: u64) -> Vec<CongruenceClassGroup> {
    let mut groups: Vec<CongruenceClassGroup> = arith::units_by_generated_subgroup(m)
        .into_iter()
        .map(|(subgroup, members)| CongruenceClassGroup { subgroup, members })
        .collect();
    groups.sort_by_key(|g| g.members[0]);
    groups
}

/// One row of the table for a given `m`: a canonical inertia type, its
/// signature, and one polygon per congruence-class group.
#[derive(Debug, Clone)]
pub struct TableRow {
    pub datum: MonodromyDatum,
    pub signature: Signature,
    pub cells: Vec<(CongruenceClassGroup, NewtonPolygon)>,
}

/// All Newton polygons for cyclic degree-`m` covers branched at three
/// points: one row per inertia type, one cell per congruence-class group.
pub fn table_for_m(m: u64) -> Vec<TableRow> {
    let groups = congruence_classes_grouped(m);
    enumerate_classes(m)
        .into_iter()
        .map(|datum| {
            let cells = groups
                .iter()
                .map(|g| {
                    let poly = newton_polygon_for_generator(&datum, g.members[0])
                        .expect("member is a unit");
                    (g.clone(), poly)
                })
                .collect();
            TableRow {
                signature: datum.signature(),
                datum,
                cells,
            }
        })
        .collect()
}

/// A search result: the residue classes mod `m` for which the stated
/// polygon occurs, either for a specific inertia type or for every one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchHit {
    pub m: u64,
    /// `None` means every inertia type yields the polygon ("any a").
    pub datum: Option<MonodromyDatum>,
    pub classes: BTreeSet<u64>,
    pub polygon: NewtonPolygon,
    pub genus: u64,
}

impl SearchHit {
    /// Residues compressed to a congruence mod the smallest divisor of `m`
    /// whose unit preimage reproduces the class set.
    pub fn compressed_congruence(&self) -> (u64, BTreeSet<u64>) {
        compress_congruence(self.m, &self.classes)
    }
}

/// Finds the smallest divisor `m'` of `m` such that the class set is
/// exactly the set of units of `m` reducing into a set of residues mod
/// `m'`; returns `(m', that set)`. Falls back to `(m, classes)`.
pub fn compress_congruence(m: u64, classes: &BTreeSet<u64>) -> (u64, BTreeSet<u64>) {
    for d in arith::divisors(m) {
        if d < 2 {
            continue;
        }
        let reduced: BTreeSet<u64> = classes.iter().map(|&r| r % d).collect();
        if reduced.iter().any(|&r| r.gcd(&d) != 1) {
            continue;
        }
        let preimage: BTreeSet<u64> = arith::units(m)
            .into_iter()
            .filter(|&u| reduced.contains(&(u % d)))
            .collect();
        if &preimage == classes {
            return (d, reduced);
        }
    }
    (m, classes.clone())
}

/// What a polygon search is looking for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolygonQuery {
    /// The whole polygon, exactly.
    Exact(NewtonPolygon),
    /// Any polygon containing the given slope.
    HasSlope(Rational),
    /// Any polygon with `p`-rank zero.
    PRankZero,
    /// Supersingular polygons only.
    Supersingular,
}

impl PolygonQuery {
    pub fn matches(&self, poly: &NewtonPolygon) -> bool {
        match self {
            PolygonQuery::Exact(target) => poly == target,
            PolygonQuery::HasSlope(s) => poly.multiplicity_of(*s) > 0,
            PolygonQuery::PRankZero => poly.p_rank() == 0 && poly.height() > 0,
            PolygonQuery::Supersingular => poly.is_supersingular(),
        }
    }
}

/// Search options shared by the finders.
#[derive(Debug, Clone, Copy, Default)]
pub struct SearchOptions {
    /// Drop the residue class of 2 mod `m` from reported class sets
    /// (for statements restricted to odd characteristic).
    pub exclude_two: bool,
}

fn search(
    m_min: u64,
    m_max: u64,
    query: &PolygonQuery,
    options: SearchOptions,
) -> Vec<SearchHit> {
    let mut hits = Vec::new();
    for m in m_min..=m_max.max(m_min) {
        let data = enumerate_classes(m);
        if data.is_empty() {
            continue;
        }
        // per datum: residues grouped by the polygon they produce
        let mut per_datum: Vec<(MonodromyDatum, Vec<(NewtonPolygon, BTreeSet<u64>)>)> = Vec::new();
        for datum in &data {
            let mut by_poly: Vec<(NewtonPolygon, BTreeSet<u64>)> = Vec::new();
            for group in congruence_classes_grouped(m) {
                let poly = newton_polygon_for_generator(datum, group.members[0])
                    .expect("member is a unit");
                if !query.matches(&poly) {
                    continue;
                }
                let members = group
                    .members
                    .iter()
                    .copied()
                    .filter(|&r| !(options.exclude_two && r == 2 % m));
                match by_poly.iter_mut().find(|(p, _)| *p == poly) {
                    Some((_, set)) => set.extend(members),
                    None => by_poly.push((poly, members.collect())),
                }
            }
            by_poly.retain(|(_, set)| !set.is_empty());
            per_datum.push((*datum, by_poly));
        }
        // merge to "any a" when every inertia type produces the same
        // polygon over the same classes (and the genus is constant)
        let first = &per_datum[0].1;
        let genus0 = data[0].genus();
        let all_same = per_datum.iter().all(|(d, v)| v == first && d.genus() == genus0);
        if all_same && !first.is_empty() {
            for (poly, classes) in first {
                hits.push(SearchHit {
                    m,
                    datum: None,
                    classes: classes.clone(),
                    polygon: poly.clone(),
                    genus: genus0,
                });
            }
        } else {
            for (datum, by_poly) in per_datum {
                for (poly, classes) in by_poly {
                    hits.push(SearchHit {
                        m,
                        datum: Some(datum),
                        classes,
                        polygon: poly,
                        genus: datum.genus(),
                    });
                }
            }
        }
    }
    hits
}

/// Classes (per `m` and inertia type, or "any a") whose polygon is `ss^g`.
pub fn find_supersingular(m_min: u64, m_max: u64, options: SearchOptions) -> Vec<SearchHit> {
    search(m_min, m_max, &PolygonQuery::Supersingular, options)
}

/// Classes whose polygon satisfies the query.
pub fn find_polygon(
    m_min: u64,
    m_max: u64,
    query: &PolygonQuery,
    options: SearchOptions,
) -> Vec<SearchHit> {
    search(m_min, m_max, query, options)
}

/// The target polygon of the large-genus construction: slopes `1/d` and
/// `(d-1)/d` with multiplicity `d` each, plus an ordinary part of
/// multiplicity `g - d`.
pub fn amalgamated_target(d: u64, g: u64) -> Result<NewtonPolygon, AmalgamatedTargetError> {
    if d < 2 {
        return Err(AmalgamatedTargetError::DenominatorTooSmall(d));
    }
    if g < d {
        return Err(AmalgamatedTargetError::GenusBelowDenominator { d, g });
    }
    let core = NewtonPolygon::from_slopes([
        (Rational::new(1, d as i64), d),
        (Rational::new(d as i64 - 1, d as i64), d),
    ]);
    Ok(NewtonPolygon::amalgamate([
        &core,
        &NewtonPolygon::ordinary(g - d),
    ]))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AmalgamatedTargetError {
    #[error("denominator must be at least 2, got {0}")]
    DenominatorTooSmall(u64),
    #[error("genus {g} is below the denominator {d}")]
    GenusBelowDenominator { d: u64, g: u64 },
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::parse_label;
    use alloc::vec;

    #[test]
    fn grouped_classes_examples() {
        let groups = |m: u64| -> Vec<Vec<u64>> {
            congruence_classes_grouped(m)
                .into_iter()
                .map(|g| g.members)
                .collect()
        };
        assert_eq!(groups(9), vec![vec![1], vec![2, 5], vec![4, 7], vec![8]]);
        assert_eq!(groups(7), vec![vec![1], vec![2, 4], vec![3, 5], vec![6]]);
        assert_eq!(groups(2), vec![vec![1]]);
        assert_eq!(groups(12), vec![vec![1], vec![5], vec![7], vec![11]]);
        assert_eq!(
            groups(11),
            vec![vec![1], vec![2, 6, 7, 8], vec![3, 4, 5, 9], vec![10]]
        );
    }

    #[test]
    fn table_m7_matches_paper() {
        let rows = table_for_m(7);
        assert_eq!(rows.len(), 2);
        let labels: Vec<Vec<_>> = rows
            .iter()
            .map(|r| r.cells.iter().map(|(_, p)| p.label()).collect())
            .collect();
        assert_eq!(
            labels,
            vec![
                vec!["ord^3", "(1/3,2/3)", "ss^3", "ss^3"],
                vec!["ord^3", "ord^3", "ss^3", "ss^3"],
            ]
        );
    }

    #[test]
    fn table_m3() {
        let rows = table_for_m(3);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].cells[0].1.label(), "ord");
        assert_eq!(rows[0].cells[1].1.label(), "ss");
    }

    #[test]
    fn all_table_cells_validate() {
        for m in 3..=12u64 {
            for row in table_for_m(m) {
                for (_, poly) in &row.cells {
                    poly.validate().unwrap();
                    assert_eq!(poly.height(), 2 * row.datum.genus());
                }
            }
        }
    }

    #[test]
    fn supersingular_search_m11() {
        let hits = find_supersingular(11, 11, SearchOptions::default());
        assert_eq!(hits.len(), 1);
        let hit = &hits[0];
        assert_eq!(hit.datum, None, "every inertia type is supersingular");
        assert_eq!(hit.classes, [2, 6, 7, 8, 10].into_iter().collect());
        assert_eq!(hit.genus, 5);
    }

    #[test]
    fn supersingular_search_m9_compresses_to_mod3() {
        let hits = find_supersingular(9, 9, SearchOptions::default());
        let hit = hits
            .iter()
            .find(|h| h.datum.map(|d| d.a()) == Some([1, 1, 7]))
            .expect("hit for a=(1,1,7)");
        assert_eq!(hit.classes, [2, 5, 8].into_iter().collect());
        let (md, residues) = hit.compressed_congruence();
        assert_eq!((md, residues), (3, [2].into_iter().collect()));
    }

    #[test]
    fn polygon_search_thm54_rows() {
        let q = PolygonQuery::Exact(parse_label("(1/5,4/5)").unwrap());
        let hits = find_polygon(11, 11, &q, SearchOptions::default());
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].datum.map(|d| d.a()), Some([1, 1, 9]));
        assert_eq!(hits[0].classes, [3, 4, 5, 9].into_iter().collect());

        let q = PolygonQuery::Exact(parse_label("(1/4,3/4) ⊕ ss^3").unwrap());
        let hits = find_polygon(15, 15, &q, SearchOptions::default());
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].datum.map(|d| d.a()), Some([1, 1, 13]));
        assert_eq!(hits[0].classes, [2, 8].into_iter().collect());

        // 11 = 2^5 generates the same subgroup mod 21 as 2, so it joins
        // the class set even though Thm 5.4 lists only p ≡ 2 mod 21.
        let q = PolygonQuery::Exact(parse_label("(1/3,2/3)^3 ⊕ ss").unwrap());
        let hits = find_polygon(21, 21, &q, SearchOptions::default());
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].datum.map(|d| d.a()), Some([1, 1, 19]));
        assert_eq!(hits[0].classes, [2, 11].into_iter().collect());
    }

    #[test]
    fn amalgamated_target_examples() {
        let t = amalgamated_target(5, 7).unwrap();
        assert_eq!(t, parse_label("ord^2 ⊕ (1/5,4/5)").unwrap());
        let t = amalgamated_target(5, 5).unwrap();
        assert_eq!(t, parse_label("(1/5,4/5)").unwrap());
        let t = amalgamated_target(11, 12).unwrap();
        assert_eq!(t, parse_label("ord ⊕ (1/11,10/11)").unwrap());
        assert!(amalgamated_target(5, 4).is_err());
    }

    #[test]
    fn self_dual_classes_are_supersingular_cells() {
        for m in 3..=12u64 {
            for row in table_for_m(m) {
                for (group, poly) in &row.cells {
                    let all_self_dual = crate::shimura::orbit_slopes_for_generator(
                        &row.datum,
                        group.members[0],
                    )
                    .unwrap()
                    .iter()
                    .filter(|r| !r.excluded)
                    .all(|r| r.orbit.self_dual());
                    if all_self_dual {
                        assert!(
                            poly.is_supersingular(),
                            "m={m} a={:?} class {:?}",
                            row.datum.a(),
                            group.members
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn exclude_two_option_drops_the_class_of_two() {
        let hits = find_polygon(
            21,
            21,
            &PolygonQuery::Exact(parse_label("(1/3,2/3)^3 ⊕ ss").unwrap()),
            SearchOptions { exclude_two: true },
        );
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].classes, [11].into_iter().collect());
    }
}
