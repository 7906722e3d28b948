//! Exponent vectors and monomial orders.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// A monomial as a dense exponent vector, one entry per ring variable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: SmallVec<[u16; 12]>,
}

impl Monomial {
    pub fn new(exps: impl IntoIterator<Item = u16>) -> Self {
        Monomial {
            exps: exps.into_iter().collect(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: SmallVec::from_elem(0, nvars),
        }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.exps[i] = 1;
        m
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn exp(&self, i: usize) -> u16 {
        self.exps[i]
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn weighted_degree(&self, weights: &[u32]) -> u32 {
        self.exps
            .iter()
            .zip(weights)
            .map(|(&e, &w)| e as u32 * w)
            .sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Product; exponent overflow is a hard failure, never a wraparound.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.checked_mul(other).expect("monomial exponent overflow")
    }

    pub fn checked_mul(&self, other: &Monomial) -> Result<Monomial> {
        debug_assert_eq!(self.nvars(), other.nvars());
        let mut exps = SmallVec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            exps.push(a.checked_add(*b).ok_or(Error::Overflow)?);
        }
        Ok(Monomial { exps })
    }

    pub fn pow(&self, n: u32) -> Monomial {
        let exps = self
            .exps
            .iter()
            .map(|&e| {
                u16::try_from(e as u32 * n).expect("monomial exponent overflow")
            })
            .collect();
        Monomial { exps }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = SmallVec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            exps.push(b.checked_sub(*a)?);
        }
        Some(Monomial { exps })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| *a.max(b))
                .collect(),
        }
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| *a.min(b))
                .collect(),
        }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Bitmask of the variables (mod 64) that occur; a cheap divisibility
    /// pre-filter: if `a | b` then `mask(a) & !mask(b) == 0`.
    pub fn support_mask(&self) -> u64 {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0u64, |m, (i, _)| m | (1 << (i % 64)))
    }

    /// Reinterpret in a ring with `extra` more variables appended (exponent 0)
    /// or with the given variables prepended.
    pub fn embed(&self, prefix: usize, suffix: usize) -> Monomial {
        let mut exps = SmallVec::with_capacity(prefix + self.exps.len() + suffix);
        exps.extend(std::iter::repeat(0).take(prefix));
        exps.extend_from_slice(&self.exps);
        exps.extend(std::iter::repeat(0).take(suffix));
        Monomial { exps }
    }

    /// Keep the variables in `range`.
    pub fn restrict(&self, range: std::ops::Range<usize>) -> Monomial {
        Monomial {
            exps: SmallVec::from_slice(&self.exps[range]),
        }
    }

    pub fn display(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    names[i].clone()
                } else {
                    format!("{}^{}", names[i], e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps.as_slice())
    }
}

/// All monomials of total degree `deg` in `nvars` variables, in descending
/// lex order.
pub fn monomials_of_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
    fn rec(nvars: usize, i: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if i + 1 == nvars {
            cur.push(left as u16);
            out.push(Monomial::new(cur.iter().copied()));
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e as u16);
            rec(nvars, i + 1, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if deg == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    rec(nvars, 0, deg, &mut Vec::with_capacity(nvars), &mut out);
    out
}

/// A monomial order.
///
/// `Block { elim }` compares the first `elim` exponents lexicographically and
/// breaks ties with grevlex on the remaining ones. `Product { elim }` uses
/// grevlex on both blocks instead; both are elimination orders for the first
/// block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MonomialOrder {
    Grevlex,
    Lex,
    Block { elim: usize },
    Product { elim: usize },
}

fn grevlex(a: &[u16], b: &[u16]) -> Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for (x, y) in a.iter().zip(b).rev() {
        if x != y {
            // smaller exponent in the last differing variable wins
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

fn lex(a: &[u16], b: &[u16]) -> Ordering {
    a.cmp(b)
}

impl MonomialOrder {
    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (a, b) = (a.exps(), b.exps());
        match *self {
            MonomialOrder::Grevlex => grevlex(a, b),
            MonomialOrder::Lex => lex(a, b),
            MonomialOrder::Block { elim } => {
                lex(&a[..elim], &b[..elim]).then_with(|| grevlex(&a[elim..], &b[elim..]))
            }
            MonomialOrder::Product { elim } => {
                grevlex(&a[..elim], &b[..elim]).then_with(|| grevlex(&a[elim..], &b[elim..]))
            }
        }
    }

    /// Number of leading variables this order eliminates (0 for global orders).
    pub fn elim_count(&self) -> usize {
        match *self {
            MonomialOrder::Block { elim } | MonomialOrder::Product { elim } => elim,
            _ => 0,
        }
    }
}

/// Compare two monomials under `ord`, checking that they live in the same ring.
pub fn mono_compare(a: &Monomial, b: &Monomial, ord: MonomialOrder) -> Result<Ordering> {
    if a.nvars() != b.nvars() {
        return Err(Error::DimensionMismatch {
            expected: a.nvars(),
            got: b.nvars(),
        });
    }
    if ord.elim_count() > a.nvars() {
        return Err(Error::DimensionMismatch {
            expected: ord.elim_count(),
            got: a.nvars(),
        });
    }
    Ok(ord.cmp(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(e: &[u16]) -> Monomial {
        Monomial::new(e.iter().copied())
    }

    #[test]
    fn grevlex_examples() {
        // x^2 vs xy in (x, y)
        assert_eq!(
            mono_compare(&m(&[2, 0]), &m(&[1, 1]), MonomialOrder::Grevlex).unwrap(),
            Ordering::Greater
        );
        assert_eq!(
            mono_compare(&m(&[1, 2]), &m(&[1, 2]), MonomialOrder::Grevlex).unwrap(),
            Ordering::Equal
        );
        // classic: x*z^2 < y^3 in grevlex(x,y,z)... degree 3 both, last var z: 2 vs 0
        assert_eq!(MonomialOrder::Grevlex.cmp(&m(&[1, 0, 2]), &m(&[0, 3, 0])), Ordering::Less);
        assert!(mono_compare(&m(&[1]), &m(&[1, 0]), MonomialOrder::Grevlex).is_err());
    }

    /// Brute-force block comparator: sort by the literal definition.
    fn block_key(e: &[u16], elim: usize) -> (Vec<u16>, u32, Vec<std::cmp::Reverse<u16>>) {
        let rest = &e[elim..];
        (
            e[..elim].to_vec(),
            rest.iter().map(|&x| x as u32).sum(),
            rest.iter().rev().map(|&x| std::cmp::Reverse(x)).collect(),
        )
    }

    #[test]
    fn block_order_matches_brute_force() {
        // x vs y^3 with x eliminated
        assert_eq!(
            mono_compare(&m(&[1, 0]), &m(&[0, 3]), MonomialOrder::Block { elim: 1 }).unwrap(),
            Ordering::Greater
        );
        let mut all: Vec<Monomial> = (0..=3).flat_map(|d| monomials_of_degree(3, d)).collect();
        let ord = MonomialOrder::Block { elim: 1 };
        let mut brute = all.clone();
        brute.sort_by_key(|x| block_key(x.exps(), 1));
        all.sort_by(|a, b| ord.cmp(a, b));
        assert_eq!(all, brute);
    }

    #[test]
    fn degree_enumeration_counts() {
        assert_eq!(monomials_of_degree(2, 2).len(), 3);
        assert_eq!(monomials_of_degree(4, 3).len(), 20);
        assert_eq!(monomials_of_degree(3, 0), vec![Monomial::one(3)]);
    }

    #[test]
    fn overflow_is_reported() {
        let a = m(&[u16::MAX]);
        assert!(matches!(a.checked_mul(&m(&[1])), Err(Error::Overflow)));
    }

    fn arb_mono() -> impl Strategy<Value = Monomial> {
        prop::collection::vec(0u16..5, 4).prop_map(Monomial::new)
    }

    fn arb_order() -> impl Strategy<Value = MonomialOrder> {
        prop_oneof![
            Just(MonomialOrder::Grevlex),
            Just(MonomialOrder::Lex),
            (0usize..=4).prop_map(|elim| MonomialOrder::Block { elim }),
            (0usize..=4).prop_map(|elim| MonomialOrder::Product { elim }),
        ]
    }

    proptest! {
        #[test]
        fn orders_are_antisymmetric_and_multiplicative(a in arb_mono(), b in arb_mono(), c in arb_mono(), ord in arb_order()) {
            prop_assert_eq!(ord.cmp(&a, &b), ord.cmp(&b, &a).reverse());
            prop_assert_eq!(ord.cmp(&a, &b) == Ordering::Equal, a == b);
            prop_assert_eq!(ord.cmp(&a.mul(&c), &b.mul(&c)), ord.cmp(&a, &b));
            prop_assert!(ord.cmp(&a.mul(&c), &a) != Ordering::Less);
        }

        #[test]
        fn grevlex_refines_degree(a in arb_mono(), b in arb_mono()) {
            if a.degree() > b.degree() {
                prop_assert_eq!(MonomialOrder::Grevlex.cmp(&a, &b), Ordering::Greater);
            }
        }
    }
}
