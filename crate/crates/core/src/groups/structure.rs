//! Subgroups, closures and quotients.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{Group, GroupElement, Idx, STRUCTURE_CAP};
use crate::{Error, Result};

/// A subset of a group's carrier, stored as a membership bitmap.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    members: Vec<bool>,
    len: usize,
}

impl std::fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl ElementSet {
    pub fn empty(order: u32) -> Self {
        ElementSet {
            members: vec![false; order as usize],
            len: 0,
        }
    }

    pub fn full(order: u32) -> Self {
        ElementSet {
            members: vec![true; order as usize],
            len: order as usize,
        }
    }

    pub fn from_indices(order: u32, indices: impl IntoIterator<Item = Idx>) -> Self {
        let mut s = ElementSet::empty(order);
        for i in indices {
            s.insert(i);
        }
        s
    }

    pub fn insert(&mut self, i: Idx) -> bool {
        let slot = &mut self.members[i as usize];
        if *slot {
            false
        } else {
            *slot = true;
            self.len += 1;
            true
        }
    }

    #[inline]
    pub fn contains(&self, i: Idx) -> bool {
        self.members[i as usize]
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_full(&self) -> bool {
        self.len == self.members.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = Idx> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| i as Idx)
    }

    pub fn to_vec(&self) -> Vec<Idx> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.iter().all(|i| other.contains(i))
    }
}

/// Worklist saturation of `start ∪ gens` under right multiplication by the
/// generators. Stops early once the set is larger than `stop_above`; in that
/// case the returned set is partial.
pub(crate) fn saturate(
    g: &Group,
    mut set: ElementSet,
    gens: &[Idx],
    stop_above: Option<usize>,
) -> ElementSet {
    let mut queue: Vec<Idx> = set.to_vec();
    if set.insert(0) {
        queue.push(0);
    }
    while let Some(x) = queue.pop() {
        for &s in gens {
            let y = g.op(x, s);
            if set.insert(y) {
                if stop_above.is_some_and(|cap| set.len() > cap) {
                    return set;
                }
                queue.push(y);
            }
        }
    }
    set
}

pub(crate) fn closure_indices(g: &Group, gens: &[Idx]) -> ElementSet {
    saturate(g, ElementSet::empty(g.order()), gens, None)
}

/// True iff the given elements generate the whole group. A subgroup larger
/// than half the group is the group, so saturation stops there.
pub(crate) fn generates(g: &Group, gens: &[Idx]) -> bool {
    let n = g.order() as usize;
    let set = saturate(g, ElementSet::empty(g.order()), gens, Some(n / 2));
    set.len() > n / 2
}

pub(crate) fn greedy_generators(g: &Group) -> Vec<Idx> {
    let mut gens = Vec::new();
    let mut set = closure_indices(g, &gens);
    for x in 0..g.order() {
        if !set.contains(x) {
            gens.push(x);
            set = saturate(g, set, &gens, None);
            if set.is_full() {
                break;
            }
        }
    }
    gens
}

/// A quotient group together with its projection and coset representatives.
#[derive(Debug)]
pub struct Quotient {
    pub group: Group,
    pub base: Arc<Group>,
    /// Coset index of each element of the base group.
    pub projection: Vec<Idx>,
    /// First element (in index order) of each coset.
    pub representatives: Vec<Idx>,
}

impl Quotient {
    /// Quotient by a normal subgroup. Cosets are numbered by first
    /// appearance in index order, so the identity coset is 0.
    pub fn by_normal_subgroup(base: Arc<Group>, normal: &ElementSet, name: String) -> Quotient {
        let n = base.order();
        let mut projection = vec![u32::MAX; n as usize];
        let mut reps = Vec::new();
        let members = normal.to_vec();
        for x in 0..n {
            if projection[x as usize] != u32::MAX {
                continue;
            }
            let c = reps.len() as u32;
            reps.push(x);
            for &h in &members {
                projection[base.op(x, h) as usize] = c;
            }
        }
        let group = Group::from_cosets(name, base.clone(), projection.clone(), reps.clone());
        Quotient {
            group,
            base,
            projection,
            representatives: reps,
        }
    }

    pub fn project(&self, a: Idx) -> Idx {
        self.projection[a as usize]
    }
}

fn check_cap(g: &Group) -> Result<()> {
    if g.order() > STRUCTURE_CAP {
        Err(Error::TooLarge {
            order: u64::from(g.order()),
            cap: u64::from(STRUCTURE_CAP),
        })
    } else {
        Ok(())
    }
}

impl Group {
    /// Smallest subgroup containing `gens`.
    pub fn closure(&self, gens: &[GroupElement]) -> Result<ElementSet> {
        let idx = self.indices(gens)?;
        Ok(closure_indices(self, &idx))
    }

    pub fn is_generated_by(&self, gens: &[Idx]) -> bool {
        generates(self, gens)
    }

    pub fn center(&self) -> Result<ElementSet> {
        check_cap(self)?;
        let gens = self.generators();
        Ok(ElementSet::from_indices(
            self.order(),
            (0..self.order()).filter(|&z| gens.iter().all(|&g| self.op(z, g) == self.op(g, z))),
        ))
    }

    /// Normal closure of the commutators of a generating set.
    pub fn commutator_subgroup(&self) -> Result<ElementSet> {
        check_cap(self)?;
        let gens = self.generators().to_vec();
        let mut sub_gens: Vec<Idx> = Vec::new();
        for &a in &gens {
            for &b in &gens {
                let c = self.commutator(a, b);
                if c != 0 && !sub_gens.contains(&c) {
                    sub_gens.push(c);
                }
            }
        }
        let mut sub = closure_indices(self, &sub_gens);
        let mut i = 0;
        while i < sub_gens.len() {
            let h = sub_gens[i];
            for &g in &gens {
                let c = self.conjugate(h, g);
                if !sub.contains(c) {
                    sub_gens.push(c);
                    sub = saturate(self, sub, &sub_gens, None);
                }
            }
            i += 1;
        }
        Ok(sub)
    }

    pub fn is_perfect(&self) -> Result<bool> {
        Ok(self.commutator_subgroup()?.is_full())
    }

    /// Invariant factors of `G/[G,G]` in divisibility order (each divides the
    /// next); empty for perfect groups.
    pub fn abelianization_invariants(self: &Arc<Self>) -> Result<Vec<u64>> {
        let derived = self.commutator_subgroup()?;
        if derived.is_full() {
            return Ok(Vec::new());
        }
        let q = Quotient::by_normal_subgroup(self.clone(), &derived, format!("{}^ab", self.name()));
        Ok(abelian_invariants(&q.group))
    }

    pub fn quotient_by_center(self: &Arc<Self>) -> Result<Quotient> {
        let z = self.center()?;
        Ok(Quotient::by_normal_subgroup(
            self.clone(),
            &z,
            format!("{}/Z", self.name()),
        ))
    }

    /// Conjugacy classes, each sorted, listed by smallest member.
    pub fn conjugacy_classes(&self) -> Result<Vec<Vec<Idx>>> {
        check_cap(self)?;
        let gens = self.generators();
        let mut class_of = vec![u32::MAX; self.order() as usize];
        let mut classes = Vec::new();
        for x in 0..self.order() {
            if class_of[x as usize] != u32::MAX {
                continue;
            }
            let id = classes.len() as u32;
            class_of[x as usize] = id;
            let mut members = vec![x];
            let mut i = 0;
            while i < members.len() {
                let y = members[i];
                for &g in gens {
                    let c = self.conjugate(y, g);
                    if class_of[c as usize] == u32::MAX {
                        class_of[c as usize] = id;
                        members.push(c);
                    }
                }
                i += 1;
            }
            members.sort_unstable();
            classes.push(members);
        }
        Ok(classes)
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Invariant factors of an abelian group from its element orders: for each
/// prime `p`, `log_p #{x : x^(p^j) = 1}` grows by the number of cyclic
/// `p`-factors of order at least `p^j`.
pub(crate) fn abelian_invariants(a: &Group) -> Vec<u64> {
    let n = u64::from(a.order());
    let orders: Vec<u64> = (0..a.order())
        .map(|x| u64::from(a.element_order(x)))
        .collect();
    let mut per_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for p in prime_factors(n) {
        let top = orders
            .iter()
            .map(|&o| {
                let (mut o, mut e) = (o, 0u32);
                while o % p == 0 {
                    o /= p;
                    e += 1;
                }
                e
            })
            .max()
            .unwrap_or(0);
        let mut ranks = vec![0u32];
        for j in 1..=top {
            let pj = p.pow(j);
            let mut count = orders.iter().filter(|&&o| pj % o == 0).count() as u64;
            let mut r = 0;
            while count > 1 {
                count /= p;
                r += 1;
            }
            ranks.push(r);
        }
        // exponents[i] = number of factors of order >= p^(i+1)
        let at_least: Vec<u32> = ranks.windows(2).map(|w| w[1] - w[0]).collect();
        let mut exps = Vec::new();
        for (j, &cnt) in at_least.iter().enumerate() {
            let next = at_least.get(j + 1).copied().unwrap_or(0);
            for _ in 0..cnt - next {
                exps.push(j as u32 + 1);
            }
        }
        exps.sort_unstable_by(|a, b| b.cmp(a));
        per_prime.insert(p, exps);
    }
    let width = per_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut factors: Vec<u64> = (0..width)
        .map(|i| {
            per_prime
                .iter()
                .map(|(&p, exps)| exps.get(i).map_or(1, |&e| p.pow(e)))
                .product()
        })
        .collect();
    factors.reverse();
    factors
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::GroupSpec;

    fn group(s: &str) -> Arc<Group> {
        Arc::new(Group::construct(&s.parse::<GroupSpec>().unwrap()).unwrap())
    }

    fn brute_commutator_subgroup(g: &Group) -> ElementSet {
        let n = g.order();
        let comms: Vec<Idx> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .map(|(a, b)| g.commutator(a, b))
            .collect();
        closure_indices(g, &comms)
    }

    #[test]
    fn commutator_subgroup_matches_brute_force() {
        for s in [
            "symmetric:3",
            "symmetric:4",
            "alternating:4",
            "dihedral:5",
            "cyclic:6",
            "sl2:5",
            "alternating:5",
        ] {
            let g = group(s);
            assert_eq!(
                g.commutator_subgroup().unwrap(),
                brute_commutator_subgroup(&g),
                "{s}"
            );
        }
    }

    #[test]
    fn abelianization() {
        assert_eq!(
            group("symmetric:3").abelianization_invariants().unwrap(),
            vec![2]
        );
        assert_eq!(
            group("cyclic:6").abelianization_invariants().unwrap(),
            vec![6]
        );
        assert_eq!(
            group("alternating:4").abelianization_invariants().unwrap(),
            vec![3]
        );
        assert_eq!(
            group("dihedral:4").abelianization_invariants().unwrap(),
            vec![2, 2]
        );
        assert!(group("alternating:5")
            .abelianization_invariants()
            .unwrap()
            .is_empty());
        assert!(group("alternating:5").is_perfect().unwrap());
        assert!(group("sl2:5").is_perfect().unwrap());
        assert!(!group("cyclic:6").is_perfect().unwrap());
    }

    #[test]
    fn abelian_invariants_of_products() {
        // C2 x C4 x C3 = C2 x C12
        let c4 = group("cyclic:4");
        let p = Arc::new(Group::direct_power(c4, 2).unwrap());
        assert_eq!(abelian_invariants(&p), vec![4, 4]);
        let c6 = group("cyclic:6");
        let p = Group::direct_power(c6, 3).unwrap();
        assert_eq!(abelian_invariants(&p), vec![6, 6, 6]);
        assert_eq!(abelian_invariants(&group("cyclic:1")), Vec::<u64>::new());
    }

    #[test]
    fn center_and_quotient() {
        let sl = group("sl2:5");
        let z = sl.center().unwrap();
        assert_eq!(z.len(), 2);
        let q = sl.quotient_by_center().unwrap();
        assert_eq!(q.group.order(), 60);
        assert!(q.group.is_perfect().unwrap());
        assert_eq!(group("alternating:5").center().unwrap().to_vec(), vec![0]);
        assert_eq!(group("cyclic:6").center().unwrap().len(), 6);
        assert_eq!(group("symmetric:4").center().unwrap().len(), 1);
    }

    #[test]
    fn center_matches_brute_force() {
        for s in ["dihedral:4", "sl2:3", "symmetric:3"] {
            let g = group(s);
            let n = g.order();
            let brute = ElementSet::from_indices(
                n,
                (0..n).filter(|&z| (0..n).all(|x| g.op(z, x) == g.op(x, z))),
            );
            assert_eq!(g.center().unwrap(), brute, "{s}");
        }
    }

    #[test]
    fn closures() {
        let a5 = group("alternating:5");
        let three = a5.parse_element("(1 2 3)").unwrap();
        assert_eq!(a5.closure(&[three]).unwrap().len(), 3);
        let five = a5.parse_element("(1 2 3 4 5)").unwrap();
        assert!(a5.closure(&[five, three]).unwrap().is_full());
        let c4 = group("cyclic:4");
        assert_eq!(
            c4.closure(&[c4.element(2).unwrap()]).unwrap().to_vec(),
            vec![0, 2]
        );
        let other = group("cyclic:4");
        assert!(c4.closure(&[other.element(1).unwrap()]).is_err());
    }

    #[test]
    fn conjugacy_class_counts() {
        assert_eq!(group("alternating:5").conjugacy_classes().unwrap().len(), 5);
        assert_eq!(group("psl2:7").conjugacy_classes().unwrap().len(), 6);
        assert_eq!(group("symmetric:4").conjugacy_classes().unwrap().len(), 5);
    }

    #[test]
    fn derived_subgroup_is_normal() {
        let g = group("symmetric:4");
        let d = g.commutator_subgroup().unwrap();
        assert_eq!(d.len(), 12);
        for h in d.iter() {
            for x in 0..g.order() {
                assert!(d.contains(g.conjugate(h, x)));
            }
        }
    }

    #[test]
    fn structure_cap() {
        let g = group("symmetric:8");
        assert!(matches!(g.center(), Err(Error::TooLarge { .. })));
    }
}
