//! `SL(2,p)` and `PSL(2,p)` over prime fields.

use std::collections::HashMap;

pub(crate) type Mat = [u32; 4];

#[inline]
fn key(m: &Mat) -> u64 {
    (u64::from(m[0]) << 48) | (u64::from(m[1]) << 32) | (u64::from(m[2]) << 16) | u64::from(m[3])
}

#[inline]
fn mat_mul(a: &Mat, b: &Mat, p: u32) -> Mat {
    let p = u64::from(p);
    let [a0, a1, a2, a3] = a.map(u64::from);
    let [b0, b1, b2, b3] = b.map(u64::from);
    [
        ((a0 * b0 + a1 * b2) % p) as u32,
        ((a0 * b1 + a1 * b3) % p) as u32,
        ((a2 * b0 + a3 * b2) % p) as u32,
        ((a2 * b1 + a3 * b3) % p) as u32,
    ]
}

fn negate(m: &Mat, p: u32) -> Mat {
    m.map(|x| (p - x) % p)
}

/// Representative of `{m, -m}`: the first nonzero entry of the top row lies
/// in `1..=(p-1)/2`.
fn canonical(m: Mat, p: u32) -> Mat {
    let lead = if m[0] != 0 { m[0] } else { m[1] };
    if lead <= (p - 1) / 2 {
        m
    } else {
        negate(&m, p)
    }
}

#[derive(Debug)]
pub(crate) struct MatrixCarrier {
    pub p: u32,
    pub projective: bool,
    pub elems: Vec<Mat>,
    index: HashMap<u64, u32>,
}

impl MatrixCarrier {
    /// Identity first, then all determinant-one matrices in lexicographic
    /// order of `(a, b, c, d)`; for the projective group only canonical
    /// representatives are kept.
    pub fn new(p: u32, projective: bool) -> Self {
        let id: Mat = [1, 0, 0, 1];
        let mut elems = vec![id];
        let pp = u64::from(p);
        for a in 0..p {
            for b in 0..p {
                for c in 0..p {
                    for d in 0..p {
                        let m = [a, b, c, d];
                        let det = (u64::from(a) * u64::from(d) + pp * pp
                            - u64::from(b) * u64::from(c))
                            % pp;
                        if det != 1 || m == id {
                            continue;
                        }
                        if projective && canonical(m, p) != m {
                            continue;
                        }
                        elems.push(m);
                    }
                }
            }
        }
        let index = elems
            .iter()
            .enumerate()
            .map(|(i, m)| (key(m), i as u32))
            .collect();
        MatrixCarrier {
            p,
            projective,
            elems,
            index,
        }
    }

    pub fn lookup(&self, m: Mat) -> Option<u32> {
        let m = if self.projective {
            canonical(m, self.p)
        } else {
            m
        };
        self.index.get(&key(&m)).copied()
    }

    #[inline]
    pub fn op(&self, a: u32, b: u32) -> u32 {
        let m = mat_mul(&self.elems[a as usize], &self.elems[b as usize], self.p);
        self.lookup(m).expect("closed under multiplication")
    }

    pub fn inv(&self, a: u32) -> u32 {
        let [x, y, z, w] = self.elems[a as usize];
        let p = self.p;
        self.lookup([w, (p - y) % p, (p - z) % p, x])
            .expect("closed under inversion")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        for p in [3u32, 5, 7] {
            let sl = MatrixCarrier::new(p, false);
            let psl = MatrixCarrier::new(p, true);
            assert_eq!(sl.elems.len() as u32, p * (p * p - 1));
            assert_eq!(psl.elems.len() as u32, p * (p * p - 1) / 2);
        }
    }

    #[test]
    fn inverse_is_two_sided() {
        let g = MatrixCarrier::new(7, true);
        for a in 0..g.elems.len() as u32 {
            assert_eq!(g.op(a, g.inv(a)), 0);
            assert_eq!(g.op(g.inv(a), a), 0);
        }
    }
}
