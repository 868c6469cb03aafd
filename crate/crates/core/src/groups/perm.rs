//! Permutations on at most 9 points packed into a `u64`, four bits per point.

use std::collections::HashMap;

use crate::{Error, Result};

pub(crate) const MAX_DEGREE: u32 = 9;

pub(crate) fn pack(images: &[u8]) -> u64 {
    images
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, &x)| acc | (u64::from(x) << (4 * i)))
}

pub(crate) fn unpack(key: u64, degree: usize) -> Vec<u8> {
    (0..degree)
        .map(|i| ((key >> (4 * i)) & 0xf) as u8)
        .collect()
}

#[inline]
fn image(key: u64, x: u64) -> u64 {
    (key >> (4 * x)) & 0xf
}

/// `a` then `b`: the product sends `x` to `b(a(x))`.
#[inline]
pub(crate) fn compose(a: u64, b: u64, degree: usize) -> u64 {
    let mut out = 0;
    for x in 0..degree as u64 {
        out |= image(b, image(a, x)) << (4 * x);
    }
    out
}

pub(crate) fn inverse(a: u64, degree: usize) -> u64 {
    let mut out = 0;
    for x in 0..degree as u64 {
        out |= x << (4 * image(a, x));
    }
    out
}

pub(crate) fn is_even(images: &[u8]) -> bool {
    let mut seen = vec![false; images.len()];
    let mut transpositions = 0;
    for start in 0..images.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = images[x] as usize;
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions % 2 == 0
}

fn next_permutation(v: &mut [u8]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[derive(Debug)]
pub(crate) struct PermCarrier {
    pub degree: usize,
    pub elems: Vec<u64>,
    pub index: HashMap<u64, u32>,
}

impl PermCarrier {
    /// All permutations (or only the even ones) of `degree` points in
    /// lexicographic order of their image lists; the identity comes first.
    pub fn new(degree: usize, even_only: bool) -> Self {
        let mut v: Vec<u8> = (0..degree as u8).collect();
        let mut elems = Vec::new();
        loop {
            if !even_only || is_even(&v) {
                elems.push(pack(&v));
            }
            if !next_permutation(&mut v) {
                break;
            }
        }
        let index = elems
            .iter()
            .enumerate()
            .map(|(i, &k)| (k, i as u32))
            .collect();
        PermCarrier {
            degree,
            elems,
            index,
        }
    }

    #[inline]
    pub fn op(&self, a: u32, b: u32) -> u32 {
        let key = compose(self.elems[a as usize], self.elems[b as usize], self.degree);
        self.index[&key]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.index[&inverse(self.elems[a as usize], self.degree)]
    }
}

/// Parses cycle notation on points `1..=degree`, e.g. `(1 2 3)(4 5)` or
/// `(1,2,3)`. The empty string and `()` denote the identity.
pub(crate) fn parse_cycles(text: &str, degree: usize) -> Result<Vec<u8>> {
    let mut images: Vec<u8> = (0..degree as u8).collect();
    let text = text.trim();
    let bad = |why: &str| Error::Parse(format!("cycle notation {text:?}: {why}"));
    let mut rest = text;
    let mut seen = vec![false; degree];
    while !rest.is_empty() {
        let open = rest.strip_prefix('(').ok_or_else(|| bad("expected '('"))?;
        let close = open.find(')').ok_or_else(|| bad("missing ')'"))?;
        let body = &open[..close];
        rest = open[close + 1..].trim_start();
        let points = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| {
                let p: usize = s.parse().map_err(|_| bad("non-numeric point"))?;
                if p == 0 || p > degree {
                    return Err(bad("point out of range"));
                }
                Ok(p - 1)
            })
            .collect::<Result<Vec<_>>>()?;
        for &p in &points {
            if seen[p] {
                return Err(bad("point repeated"));
            }
            seen[p] = true;
        }
        for (i, &p) in points.iter().enumerate() {
            images[p] = points[(i + 1) % points.len()] as u8;
        }
    }
    Ok(images)
}

pub(crate) fn format_cycles(images: &[u8]) -> String {
    let mut seen = vec![false; images.len()];
    let mut out = String::new();
    for start in 0..images.len() {
        if seen[start] || images[start] as usize == start {
            continue;
        }
        out.push('(');
        let mut x = start;
        let mut first = true;
        while !seen[x] {
            seen[x] = true;
            if !first {
                out.push(' ');
            }
            first = false;
            out.push_str(&(x + 1).to_string());
            x = images[x] as usize;
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}
