//! Finite groups with dense element indices.
//!
//! Every [`Group`] enumerates its carrier deterministically as indices
//! `0..order`, with index 0 the identity. Permutation and matrix backends
//! multiply canonical forms and resolve the result back to an index through a
//! hash map; small groups additionally cache a full multiplication table on
//! first use.

mod cayley;
mod matrix;
mod perm;
mod structure;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};
pub use cayley::{parse_cayley_table, read_cayley_table};
use matrix::MatrixCarrier;
use perm::PermCarrier;
pub(crate) use structure::{closure_indices, saturate};
pub use structure::{ElementSet, Quotient};

/// Dense element index into a group's carrier.
pub type Idx = u32;

/// Multiplication tables are cached for groups up to this order.
pub const TABLE_CAP: u32 = 2500;

/// Order cap for structural queries that need full enumeration.
pub const STRUCTURE_CAP: u32 = 20_000;

const MAX_CYCLIC: u32 = 1_000_000;
const MAX_MATRIX_ORDER: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupSpec {
    Cyclic(u32),
    /// Dihedral group of the regular `n`-gon, of order `2n`.
    Dihedral(u32),
    Symmetric(u32),
    Alternating(u32),
    Sl2(u32),
    Psl2(u32),
    CayleyFile(PathBuf),
}

fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

impl GroupSpec {
    pub fn validate(&self) -> Result<()> {
        let unsupported = |msg: String| Err(Error::UnsupportedParameter(msg));
        match *self {
            GroupSpec::Cyclic(n) if n == 0 || n > MAX_CYCLIC => {
                unsupported(format!("cyclic:{n} (need 1..={MAX_CYCLIC})"))
            }
            GroupSpec::Dihedral(n) if n == 0 || 2 * u64::from(n) > u64::from(MAX_CYCLIC) => {
                unsupported(format!("dihedral:{n}"))
            }
            GroupSpec::Symmetric(n) | GroupSpec::Alternating(n)
                if n == 0 || n > perm::MAX_DEGREE =>
            {
                unsupported(format!("{self} (degree must be 1..=9)"))
            }
            GroupSpec::Sl2(p) | GroupSpec::Psl2(p) => {
                let p = u64::from(p);
                if p == 2 || !is_prime(p) {
                    unsupported(format!("{self} (need an odd prime)"))
                } else if p * (p * p - 1) > MAX_MATRIX_ORDER {
                    unsupported(format!("{self} (p(p^2-1) must be at most 10^6)"))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupSpec::Dihedral(n) => write!(f, "dihedral:{n}"),
            GroupSpec::Symmetric(n) => write!(f, "symmetric:{n}"),
            GroupSpec::Alternating(n) => write!(f, "alternating:{n}"),
            GroupSpec::Sl2(p) => write!(f, "sl2:{p}"),
            GroupSpec::Psl2(p) => write!(f, "psl2:{p}"),
            GroupSpec::CayleyFile(path) => write!(f, "cayley:{}", path.display()),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, arg) = s.split_once(':').ok_or_else(|| {
            Error::Parse(format!("group spec {s:?} must look like kind:parameter"))
        })?;
        if matches!(kind, "cayley" | "cayley-file") {
            return Ok(GroupSpec::CayleyFile(PathBuf::from(arg)));
        }
        let n: u32 = arg
            .parse()
            .map_err(|_| Error::Parse(format!("group spec {s:?}: bad parameter")))?;
        let spec = match kind {
            "cyclic" => GroupSpec::Cyclic(n),
            "dihedral" => GroupSpec::Dihedral(n),
            "symmetric" => GroupSpec::Symmetric(n),
            "alternating" => GroupSpec::Alternating(n),
            "sl2" => GroupSpec::Sl2(n),
            "psl2" => GroupSpec::Psl2(n),
            _ => return Err(Error::Parse(format!("unknown group kind {kind:?}"))),
        };
        Ok(spec)
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Groups used throughout the tests and the default experiment catalog,
/// ordered by group order.
pub fn catalog() -> Vec<GroupSpec> {
    use GroupSpec::*;
    vec![
        Cyclic(6),
        Symmetric(3),
        Dihedral(5),
        Alternating(4),
        Symmetric(4),
        Alternating(5),
        Psl2(5),
        Sl2(5),
        Symmetric(5),
        Psl2(7),
        Sl2(7),
        Alternating(6),
        Psl2(11),
        Psl2(13),
    ]
}

/// Handle to an element of a specific group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    group: u64,
    index: Idx,
}

impl GroupElement {
    pub fn index(self) -> Idx {
        self.index
    }

    pub fn group_id(self) -> u64 {
        self.group
    }
}

enum Backend {
    Cyclic,
    Dihedral {
        n: u32,
    },
    Perm(PermCarrier),
    Matrix(MatrixCarrier),
    Table(Box<[u32]>),
    Coset {
        base: Arc<Group>,
        projection: Box<[u32]>,
        reps: Box<[u32]>,
    },
    Power {
        base: Arc<Group>,
        factors: u32,
    },
}

pub struct Group {
    id: u64,
    name: String,
    spec: Option<GroupSpec>,
    order: u32,
    backend: Backend,
    inverses: Box<[u32]>,
    table: OnceLock<Option<Box<[u32]>>>,
    generators: OnceLock<Vec<Idx>>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group")
            .field("name", &self.name)
            .field("order", &self.order)
            .finish()
    }
}

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

impl Group {
    fn assemble(name: String, spec: Option<GroupSpec>, order: u32, backend: Backend) -> Self {
        let mut g = Group {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            name,
            spec,
            order,
            backend,
            inverses: Box::new([]),
            table: OnceLock::new(),
            generators: OnceLock::new(),
        };
        g.inverses = (0..order).map(|a| g.backend_inv(a)).collect();
        g
    }

    pub fn construct(spec: &GroupSpec) -> Result<Self> {
        spec.validate()?;
        let name = spec.to_string();
        let some = Some(spec.clone());
        let g = match *spec {
            GroupSpec::Cyclic(n) => Group::assemble(name, some, n, Backend::Cyclic),
            GroupSpec::Dihedral(n) => Group::assemble(name, some, 2 * n, Backend::Dihedral { n }),
            GroupSpec::Symmetric(n) | GroupSpec::Alternating(n) => {
                let carrier =
                    PermCarrier::new(n as usize, matches!(spec, GroupSpec::Alternating(_)));
                let order = carrier.elems.len() as u32;
                Group::assemble(name, some, order, Backend::Perm(carrier))
            }
            GroupSpec::Sl2(p) | GroupSpec::Psl2(p) => {
                let carrier = MatrixCarrier::new(p, matches!(spec, GroupSpec::Psl2(_)));
                let order = carrier.elems.len() as u32;
                Group::assemble(name, some, order, Backend::Matrix(carrier))
            }
            GroupSpec::CayleyFile(ref path) => {
                let table = read_cayley_table(path)?;
                let order = (table.len() as f64).sqrt().round() as u32;
                let mut g = Group::from_validated_table(name, table, order);
                g.spec = some;
                g
            }
        };
        Ok(g)
    }

    /// Builds a group from a row-major Cayley table after the same audit
    /// applied to Cayley-table files.
    pub fn from_table(name: impl Into<String>, order: u32, table: Vec<u32>) -> Result<Self> {
        cayley::validate_table(order as usize, &table)?;
        Ok(Group::from_validated_table(name.into(), table, order))
    }

    fn from_validated_table(name: String, table: Vec<u32>, order: u32) -> Self {
        Group::assemble(name, None, order, Backend::Table(table.into_boxed_slice()))
    }

    pub(crate) fn from_cosets(
        name: String,
        base: Arc<Group>,
        projection: Vec<u32>,
        reps: Vec<u32>,
    ) -> Self {
        let order = reps.len() as u32;
        let coset = Group::assemble(
            name.clone(),
            None,
            order,
            Backend::Coset {
                base,
                projection: projection.into_boxed_slice(),
                reps: reps.into_boxed_slice(),
            },
        );
        if order <= TABLE_CAP {
            let table: Vec<u32> = (0..order)
                .flat_map(|a| (0..order).map(move |b| (a, b)))
                .map(|(a, b)| coset.backend_op(a, b))
                .collect();
            Group::from_validated_table(name, table, order)
        } else {
            coset
        }
    }

    /// The direct power `base^factors`; element indices are mixed-radix
    /// tuples with the first coordinate most significant.
    pub fn direct_power(base: Arc<Group>, factors: u32) -> Result<Self> {
        let order = u64::from(base.order())
            .checked_pow(factors)
            .filter(|&o| o <= 10_000_000 && factors >= 1)
            .ok_or(Error::TooLarge {
                order: u64::from(base.order()).saturating_pow(factors),
                cap: 10_000_000,
            })?;
        let name = format!("{}^{}", base.name(), factors);
        Ok(Group::assemble(
            name,
            None,
            order as u32,
            Backend::Power { base, factors },
        ))
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn spec(&self) -> Option<&GroupSpec> {
        self.spec.as_ref()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            group: self.id,
            index: 0,
        }
    }

    pub fn element(&self, index: Idx) -> Result<GroupElement> {
        if index < self.order {
            Ok(GroupElement {
                group: self.id,
                index,
            })
        } else {
            Err(Error::Parse(format!(
                "index {index} out of range for {}",
                self.name
            )))
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(|index| GroupElement {
            group: self.id,
            index,
        })
    }

    fn check(&self, a: GroupElement) -> Result<Idx> {
        if a.group == self.id {
            Ok(a.index)
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn multiply(&self, a: GroupElement, b: GroupElement) -> Result<GroupElement> {
        let (a, b) = (self.check(a)?, self.check(b)?);
        Ok(GroupElement {
            group: self.id,
            index: self.op(a, b),
        })
    }

    pub fn invert(&self, a: GroupElement) -> Result<GroupElement> {
        let a = self.check(a)?;
        Ok(GroupElement {
            group: self.id,
            index: self.inv(a),
        })
    }

    pub fn power(&self, a: GroupElement, k: i64) -> Result<GroupElement> {
        let a = self.check(a)?;
        Ok(GroupElement {
            group: self.id,
            index: self.pow(a, k),
        })
    }

    /// Checks that every element belongs to this group and returns the raw
    /// indices.
    pub fn indices(&self, elems: &[GroupElement]) -> Result<Vec<Idx>> {
        elems.iter().map(|&e| self.check(e)).collect()
    }

    fn table(&self) -> Option<&[u32]> {
        self.table
            .get_or_init(|| match self.backend {
                Backend::Table(_) => None,
                _ if self.order <= TABLE_CAP => {
                    let n = self.order;
                    let t: Vec<u32> = (0..n)
                        .flat_map(|a| (0..n).map(move |b| (a, b)))
                        .map(|(a, b)| self.backend_op(a, b))
                        .collect();
                    Some(t.into_boxed_slice())
                }
                _ => None,
            })
            .as_deref()
    }

    /// Raw product of two carrier indices.
    #[inline]
    pub fn op(&self, a: Idx, b: Idx) -> Idx {
        if let Backend::Table(t) = &self.backend {
            return t[(a * self.order + b) as usize];
        }
        match self.table() {
            Some(t) => t[(a as usize) * (self.order as usize) + b as usize],
            None => self.backend_op(a, b),
        }
    }

    #[inline]
    pub fn inv(&self, a: Idx) -> Idx {
        self.inverses[a as usize]
    }

    pub fn pow(&self, a: Idx, k: i64) -> Idx {
        let mut base = if k < 0 { self.inv(a) } else { a };
        let mut e = k.unsigned_abs();
        let mut acc = 0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.op(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.op(base, base);
            }
        }
        acc
    }

    pub fn conjugate(&self, a: Idx, by: Idx) -> Idx {
        self.op(self.op(self.inv(by), a), by)
    }

    pub fn commutator(&self, a: Idx, b: Idx) -> Idx {
        self.op(self.op(self.inv(a), self.inv(b)), self.op(a, b))
    }

    pub fn element_order(&self, a: Idx) -> u32 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.op(x, a);
            k += 1;
        }
        k
    }

    fn backend_op(&self, a: Idx, b: Idx) -> Idx {
        match &self.backend {
            Backend::Cyclic => ((u64::from(a) + u64::from(b)) % u64::from(self.order)) as u32,
            Backend::Dihedral { n } => {
                let n = *n;
                let (ra, sa) = (a % n, a / n);
                let (rb, sb) = (b % n, b / n);
                let r = if sa == 0 {
                    (ra + rb) % n
                } else {
                    (ra + n - rb) % n
                };
                r + n * ((sa + sb) % 2)
            }
            Backend::Perm(c) => c.op(a, b),
            Backend::Matrix(c) => c.op(a, b),
            Backend::Table(t) => t[(a * self.order + b) as usize],
            Backend::Coset {
                base,
                projection,
                reps,
            } => projection[base.op(reps[a as usize], reps[b as usize]) as usize],
            Backend::Power { base, factors } => {
                let n = base.order();
                let (mut a, mut b) = (a, b);
                let mut out = 0;
                let mut place = 1;
                for _ in 0..*factors {
                    out += base.op(a % n, b % n) * place;
                    a /= n;
                    b /= n;
                    place *= n;
                }
                out
            }
        }
    }

    fn backend_inv(&self, a: Idx) -> Idx {
        match &self.backend {
            Backend::Cyclic => (self.order - a) % self.order,
            Backend::Dihedral { n } => {
                let n = *n;
                if a < n {
                    (n - a) % n
                } else {
                    a
                }
            }
            Backend::Perm(c) => c.inv(a),
            Backend::Matrix(c) => c.inv(a),
            Backend::Table(t) => {
                let n = self.order as usize;
                let row = &t[a as usize * n..(a as usize + 1) * n];
                row.iter()
                    .position(|&x| x == 0)
                    .expect("validated table has inverses") as u32
            }
            Backend::Coset {
                base,
                projection,
                reps,
            } => projection[base.inv(reps[a as usize]) as usize],
            Backend::Power { base, factors } => {
                let n = base.order();
                let mut a = a;
                let mut out = 0;
                let mut place = 1;
                for _ in 0..*factors {
                    out += base.inv(a % n) * place;
                    a /= n;
                    place *= n;
                }
                out
            }
        }
    }

    /// Coordinates of an element of a direct power (first coordinate first).
    pub fn power_coordinates(&self, a: Idx) -> Option<Vec<Idx>> {
        match &self.backend {
            Backend::Power { base, factors } => {
                let n = base.order();
                let mut a = a;
                let mut coords = vec![0; *factors as usize];
                for c in coords.iter_mut().rev() {
                    *c = a % n;
                    a /= n;
                }
                Some(coords)
            }
            _ => None,
        }
    }

    /// Inverse of [`Group::power_coordinates`].
    pub fn power_index(&self, coords: &[Idx]) -> Option<Idx> {
        match &self.backend {
            Backend::Power { base, factors } if coords.len() == *factors as usize => {
                Some(coords.iter().fold(0, |acc, &c| acc * base.order() + c))
            }
            _ => None,
        }
    }

    /// Image list (0-based) of a permutation-group element.
    pub fn permutation(&self, a: Idx) -> Option<Vec<u8>> {
        match &self.backend {
            Backend::Perm(c) => Some(perm::unpack(c.elems[a as usize], c.degree)),
            _ => None,
        }
    }

    /// Index of a permutation given as a 0-based image list.
    pub fn permutation_index(&self, images: &[u8]) -> Option<Idx> {
        match &self.backend {
            Backend::Perm(c) if images.len() == c.degree => {
                c.index.get(&perm::pack(images)).copied()
            }
            _ => None,
        }
    }

    /// Row-major entries of a matrix-group element (a representative of the
    /// `±` pair for `PSL(2,p)`).
    pub fn matrix(&self, a: Idx) -> Option<[u32; 4]> {
        match &self.backend {
            Backend::Matrix(c) => Some(c.elems[a as usize]),
            _ => None,
        }
    }

    /// Human-readable form: cycles for permutations, `[a b c d]` for
    /// matrices, `r^i s^j` for dihedral groups and `#i` otherwise.
    pub fn label(&self, a: Idx) -> String {
        match &self.backend {
            Backend::Perm(c) => perm::format_cycles(&perm::unpack(c.elems[a as usize], c.degree)),
            Backend::Matrix(c) => {
                let m = c.elems[a as usize];
                format!("[{} {} {} {}]", m[0], m[1], m[2], m[3])
            }
            Backend::Dihedral { n } => format!("r^{} s^{}", a % n, a / n),
            _ => format!("#{a}"),
        }
    }

    /// Parses an element literal: `#k` (carrier index) for any group, cycle
    /// notation such as `(1 2 3)(4 5)` for permutation groups, and `[a b c d]`
    /// for matrix groups.
    pub fn parse_element(&self, text: &str) -> Result<GroupElement> {
        let text = text.trim();
        if let Some(k) = text.strip_prefix('#') {
            let k: u32 = k
                .parse()
                .map_err(|_| Error::Parse(format!("bad index {text:?}")))?;
            return self.element(k);
        }
        match &self.backend {
            Backend::Perm(c) => {
                let images = perm::parse_cycles(text, c.degree)?;
                let index = c
                    .index
                    .get(&perm::pack(&images))
                    .copied()
                    .ok_or_else(|| Error::Parse(format!("{text} is not in {}", self.name)))?;
                self.element(index)
            }
            Backend::Matrix(c) => {
                let entries: Vec<i64> = text
                    .trim_start_matches('[')
                    .trim_end_matches(']')
                    .split(|ch: char| ch == ',' || ch == ';' || ch.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(|s| {
                        s.parse()
                            .map_err(|_| Error::Parse(format!("bad matrix {text:?}")))
                    })
                    .collect::<Result<_>>()?;
                if entries.len() != 4 {
                    return Err(Error::Parse(format!("matrix {text:?} needs 4 entries")));
                }
                let p = i64::from(c.p);
                let m = [0, 1, 2, 3].map(|i| entries[i].rem_euclid(p) as u32);
                let index = c
                    .lookup(m)
                    .ok_or_else(|| Error::Parse(format!("{text} is not in {}", self.name)))?;
                self.element(index)
            }
            _ => Err(Error::Parse(format!(
                "use #index to name elements of {}",
                self.name
            ))),
        }
    }

    /// Small generating set found greedily in index order.
    pub fn generators(&self) -> &[Idx] {
        self.generators
            .get_or_init(|| structure::greedy_generators(self))
    }

    /// Writes the Cayley table in the file format read by
    /// [`read_cayley_table`].
    pub fn write_cayley_table(&self, path: &Path) -> Result<()> {
        let mut out = format!("{}\n", self.order);
        for a in 0..self.order {
            let row: Vec<String> = (0..self.order).map(|b| self.op(a, b).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        std::fs::write(path, out).map_err(|e| Error::io(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn group(s: &str) -> Group {
        Group::construct(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(group("cyclic:6").order(), 6);
        assert_eq!(group("dihedral:5").order(), 10);
        assert_eq!(group("alternating:5").order(), 60);
        assert_eq!(group("symmetric:4").order(), 24);
        assert_eq!(group("sl2:5").order(), 120);
    }

    #[test]
    fn psl2_7_order_matches_central_quotient_of_sl2_7() {
        let sl = Arc::new(group("sl2:7"));
        let psl = group("psl2:7");
        let z = sl.center().unwrap();
        assert_eq!(z.len(), 2);
        let q = Quotient::by_normal_subgroup(sl.clone(), &z, "q".into());
        assert_eq!(q.group.order(), psl.order());
        assert_eq!(psl.order(), 168);
    }

    #[test]
    fn spec_validation() {
        for bad in [
            "sl2:9",
            "psl2:2",
            "psl2:101",
            "symmetric:10",
            "cyclic:0",
            "alternating:0",
        ] {
            let spec: GroupSpec = bad.parse().unwrap();
            assert!(Group::construct(&spec).is_err(), "{bad}");
        }
        assert!(Group::construct(&"psl2:97".parse().unwrap()).is_ok());
        assert!("bogus:3".parse::<GroupSpec>().is_err());
        assert!("cyclic".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn spec_display_round_trip() {
        for s in catalog() {
            assert_eq!(s.to_string().parse::<GroupSpec>().unwrap(), s);
        }
        let c: GroupSpec = "cayley:/tmp/x.txt".parse().unwrap();
        assert_eq!(c.to_string(), "cayley:/tmp/x.txt");
    }

    #[test]
    fn element_ops() {
        let c6 = group("cyclic:6");
        let g = c6.element(1).unwrap();
        assert_eq!(c6.power(g, 7).unwrap(), g);
        assert_eq!(c6.power(g, 0).unwrap(), c6.identity());
        assert_eq!(c6.power(g, -1).unwrap(), c6.invert(g).unwrap());
        assert_eq!(
            c6.multiply(g, c6.invert(g).unwrap()).unwrap(),
            c6.identity()
        );
        let other = group("cyclic:6");
        assert!(matches!(
            c6.multiply(g, other.identity()),
            Err(Error::GroupMismatch)
        ));
    }

    #[test]
    fn axioms_on_sampled_triples() {
        let mut rng = crate::rng::stream(1, 0);
        for spec in catalog() {
            let g = Group::construct(&spec).unwrap();
            let n = g.order();
            for _ in 0..2000 {
                let (a, b, c) = (
                    rng.random_range(0..n),
                    rng.random_range(0..n),
                    rng.random_range(0..n),
                );
                assert_eq!(g.op(g.op(a, b), c), g.op(a, g.op(b, c)), "{spec}");
                assert_eq!(g.op(a, g.inv(a)), 0);
                assert_eq!(g.op(0, a), a);
            }
        }
    }

    #[test]
    fn left_multiplication_permutes_carrier() {
        let g = group("psl2:7");
        let mut seen = vec![false; g.order() as usize];
        for x in 0..g.order() {
            seen[g.op(17, x) as usize] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn enumeration_is_deterministic() {
        let a = group("alternating:5");
        let b = group("alternating:5");
        for i in 0..60 {
            assert_eq!(a.label(i), b.label(i));
        }
        assert_eq!(a.label(0), "()");
        assert_eq!(group("psl2:5").label(0), "[1 0 0 1]");
    }

    #[test]
    fn parse_elements() {
        let a5 = group("alternating:5");
        let c = a5.parse_element("(1 2 3 4 5)").unwrap();
        assert_eq!(a5.label(c.index()), "(1 2 3 4 5)");
        assert_eq!(a5.element_order(c.index()), 5);
        assert!(a5.parse_element("(1 2)").is_err());
        let sl = group("sl2:5");
        let m = sl.parse_element("[1 1 0 1]").unwrap();
        assert_eq!(sl.element_order(m.index()), 5);
        let psl = group("psl2:5");
        assert_eq!(psl.parse_element("[4 0 0 4]").unwrap(), psl.identity());
        assert_eq!(group("cyclic:4").parse_element("#3").unwrap().index(), 3);
    }

    #[test]
    fn dihedral_relations() {
        let d = group("dihedral:5");
        let r = 1;
        let s = 5;
        assert_eq!(d.pow(r, 5), 0);
        assert_eq!(d.op(s, s), 0);
        // s r s = r^-1
        assert_eq!(d.op(d.op(s, r), s), d.inv(r));
    }

    #[test]
    fn direct_power_is_coordinatewise() {
        let base = Arc::new(group("symmetric:3"));
        let p = Group::direct_power(base.clone(), 2).unwrap();
        assert_eq!(p.order(), 36);
        let x = p.power_index(&[1, 4]).unwrap();
        let y = p.power_index(&[3, 5]).unwrap();
        assert_eq!(
            p.power_coordinates(p.op(x, y)).unwrap(),
            vec![base.op(1, 3), base.op(4, 5)]
        );
        assert_eq!(
            p.power_coordinates(p.inv(x)).unwrap(),
            vec![base.inv(1), base.inv(4)]
        );
        assert!(Group::direct_power(base, 20).is_err());
    }
}
