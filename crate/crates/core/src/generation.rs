//! Generation of `G` and of direct powers `G^N` by `d`-tuples.
//!
//! For a finite simple group `G`, `Aut(G)` acts freely on generating
//! `d`-tuples, and `G^N` is `d`-generated exactly when `N` is at most the
//! number of orbits (Hall). [`hall_max_power`] computes that number from an
//! exact count and compares it with the bound `N ≤ 2√|G|` for `d = 2`.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::groups::{
    closure_indices, saturate, ElementSet, Group, GroupElement, GroupSpec, Idx, Quotient,
    STRUCTURE_CAP,
};
use crate::{exec, Error, Result};

/// Largest `|G|^d` enumerated by [`count_generating_tuples`].
pub const COUNT_BUDGET: u128 = 100_000_000;

/// True iff the tuple generates `G`.
pub fn is_generating(g: &Group, tuple: &[GroupElement]) -> Result<bool> {
    let idx = g.indices(tuple)?;
    Ok(g.is_generated_by(&idx))
}

/// Order of `Aut(G)` for the simple groups in the catalog.
pub fn aut_order(spec: &GroupSpec) -> Option<u64> {
    match *spec {
        GroupSpec::Alternating(5) | GroupSpec::Psl2(5) => Some(120),
        GroupSpec::Alternating(6) => Some(1440),
        GroupSpec::Psl2(7) => Some(336),
        GroupSpec::Psl2(11) => Some(1320),
        GroupSpec::Psl2(13) => Some(2184),
        _ => None,
    }
}

/// Number of `d`-tuples generating `G`.
///
/// The first entry runs over conjugacy-class representatives, weighted by
/// class size. Deeper levels recurse on the subgroup generated so far,
/// memoized by its membership set; at the last level every element of a
/// proper subgroup `⟨H, c⟩` is skipped once that subgroup is found.
pub fn count_generating_tuples(g: &Group, d: u32) -> Result<u64> {
    let n = g.order();
    let space = u128::from(n).checked_pow(d).unwrap_or(u128::MAX);
    if space > COUNT_BUDGET {
        return Err(Error::BudgetExceeded {
            needed: space,
            budget: COUNT_BUDGET,
        });
    }
    if n > STRUCTURE_CAP {
        return Err(Error::TooLarge {
            order: u64::from(n),
            cap: u64::from(STRUCTURE_CAP),
        });
    }
    if n == 1 {
        return Ok(1);
    }
    if d == 0 {
        return Ok(0);
    }
    let classes = g.conjugacy_classes()?;
    let parts = exec::map_chunks(classes.len(), |i| {
        let rep = classes[i][0];
        let sub = closure_indices(g, &[rep]);
        let mut memo = HashMap::new();
        classes[i].len() as u64 * completions(g, &sub, &[rep], d - 1, &mut memo)
    });
    Ok(parts.into_iter().sum())
}

/// Number of `r`-tuples that extend generators `gens` of `sub` to a
/// generating tuple of `G`.
fn completions(
    g: &Group,
    sub: &ElementSet,
    gens: &[Idx],
    r: u32,
    memo: &mut HashMap<(ElementSet, u32), u64>,
) -> u64 {
    let n = g.order() as usize;
    if sub.is_full() {
        return (n as u64).pow(r);
    }
    if r == 0 {
        return 0;
    }
    if let Some(&c) = memo.get(&(sub.clone(), r)) {
        return c;
    }
    let mut ext = gens.to_vec();
    ext.push(0);
    let mut total = 0u64;
    if r == 1 {
        let mut dead = sub.clone();
        for c in 0..n as Idx {
            if dead.contains(c) {
                continue;
            }
            *ext.last_mut().expect("nonempty") = c;
            let span = saturate(g, sub.clone(), &ext, Some(n / 2));
            if span.len() > n / 2 {
                total += 1;
            } else {
                for x in span.iter() {
                    dead.insert(x);
                }
            }
        }
    } else {
        for c in 0..n as Idx {
            if sub.contains(c) {
                total += completions(g, sub, gens, r - 1, memo);
                continue;
            }
            *ext.last_mut().expect("nonempty") = c;
            let span = saturate(g, sub.clone(), &ext, None);
            total += completions(g, &span, &ext, r - 1, memo);
        }
    }
    memo.insert((sub.clone(), r), total);
    total
}

/// Hall count for a simple catalog group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HallReport {
    pub group: String,
    pub order: u64,
    pub d: u32,
    pub generating_tuples: u64,
    pub aut_order: u64,
    /// Number of `Aut(G)`-orbits on generating tuples, i.e. the largest `N`
    /// with `G^N` generated by `d` elements.
    pub aut_classes: u64,
    /// Whether `aut_order` divides the count, as a free action requires.
    pub free_action: bool,
    /// `⌊2√|G|⌋`.
    pub mt_bound: u64,
    /// `mt_bound ≤ aut_classes`, reported for `d = 2` only.
    pub consistent: Option<bool>,
}

pub fn hall_max_power(g: &Group, d: u32) -> Result<HallReport> {
    let aut = g
        .spec()
        .and_then(aut_order)
        .ok_or_else(|| Error::NotInCatalog(g.name().to_string()))?;
    if d < 2 {
        return Err(Error::UnsupportedParameter(format!(
            "Hall counting needs d >= 2, got {d}"
        )));
    }
    let count = count_generating_tuples(g, d)?;
    let order = u64::from(g.order());
    let mt_bound = (4 * order).isqrt();
    let aut_classes = count / aut;
    Ok(HallReport {
        group: g.name().to_string(),
        order,
        d,
        generating_tuples: count,
        aut_order: aut,
        aut_classes,
        free_action: count % aut == 0,
        mt_bound,
        consistent: (d == 2).then_some(mt_bound <= aut_classes),
    })
}

/// The direct power `G^N` and the `d` elements `(t_1[i], …, t_N[i])`.
pub fn power_generators(g: &Arc<Group>, tuples: &[Vec<GroupElement>]) -> Result<(Group, Vec<Idx>)> {
    let d = tuples.first().map_or(0, Vec::len);
    if tuples.is_empty() || tuples.iter().any(|t| t.len() != d) {
        return Err(Error::DimensionMismatch(
            "tuples must be nonempty and of equal length".into(),
        ));
    }
    let idx: Vec<Vec<Idx>> = tuples.iter().map(|t| g.indices(t)).collect::<Result<_>>()?;
    let power = Group::direct_power(g.clone(), tuples.len() as u32)?;
    let gens = (0..d)
        .map(|i| {
            let coords: Vec<Idx> = idx.iter().map(|t| t[i]).collect();
            power.power_index(&coords).expect("direct power")
        })
        .collect();
    Ok((power, gens))
}

/// Subgroup of `G^N` generated by the coordinatewise steps of `N` tuples.
pub fn power_closure(g: &Arc<Group>, tuples: &[Vec<GroupElement>]) -> Result<ElementSet> {
    let (power, gens) = power_generators(g, tuples)?;
    Ok(closure_indices(&power, &gens))
}

/// Lifts a tuple of `G/Z(G)` to coset representatives in `G`. When the
/// input generates the quotient and `G` is perfect, the lift must generate
/// `G`; a lift that does not is reported as an error. Tuples that do not
/// generate the quotient are lifted without a claim.
pub fn lift_generators(
    g: &Arc<Group>,
    q: &Quotient,
    tuple: &[GroupElement],
) -> Result<Vec<GroupElement>> {
    if q.base.id() != g.id() {
        return Err(Error::GroupMismatch);
    }
    if !g.is_perfect()? {
        return Err(Error::NotPerfect);
    }
    let idx = q.group.indices(tuple)?;
    let lifted: Vec<Idx> = idx.iter().map(|&c| q.representatives[c as usize]).collect();
    if q.group.is_generated_by(&idx) && !g.is_generated_by(&lifted) {
        return Err(Error::LiftFailedVerification);
    }
    lifted.into_iter().map(|i| g.element(i)).collect()
}
