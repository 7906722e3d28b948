//! Hilbert series, Hilbert polynomials, dimension and multiplicity of
//! standard graded quotients.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::field::{Field, Rational};
use crate::gb::ideal_ops::power_generators;
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::Polynomial;
use crate::ring::{GradedIdeal, PieceSpace, RingSpec};

/// `numerator(t) / (1 - t)^denominator_power`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertSeries {
    pub numerator: Vec<BigInt>,
    pub denominator_power: usize,
}

fn binomial(n: &BigInt, k: usize) -> BigInt {
    // n choose k for possibly negative n is not needed here; callers pass n >= 0.
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - BigInt::from(i)) / BigInt::from(i + 1);
    }
    acc
}

impl HilbertSeries {
    /// Coefficient of `t^k` in the expanded series: the length of the
    /// degree-`k` piece.
    pub fn coefficient(&self, k: u32) -> BigInt {
        let v = self.denominator_power;
        let mut total = BigInt::zero();
        for (i, c) in self.numerator.iter().enumerate() {
            if c.is_zero() || i as u32 > k {
                continue;
            }
            let j = (k - i as u32) as usize;
            let term = if v == 0 {
                if j == 0 {
                    BigInt::one()
                } else {
                    BigInt::zero()
                }
            } else {
                binomial(&BigInt::from(j + v - 1), v - 1)
            };
            total += c * term;
        }
        total
    }
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add_shifted(a: &mut Vec<BigInt>, b: &[BigInt], shift: usize) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, BigInt::zero());
    }
    for (j, y) in b.iter().enumerate() {
        a[j + shift] += y;
    }
}

fn trim(mut p: Vec<BigInt>) -> Vec<BigInt> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn one_minus_t_pow(a: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); a + 1];
    p[0] = BigInt::one();
    p[a] -= 1;
    p
}

fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|m| m.degree());
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens {
        if !out.iter().any(|o| o.divides(&g)) {
            out.push(g);
        }
    }
    out
}

fn pure_power_var(m: &Monomial) -> Option<usize> {
    let mut found = None;
    for (i, &e) in m.exps().iter().enumerate() {
        if e > 0 {
            if found.is_some() {
                return None;
            }
            found = Some(i);
        }
    }
    found
}

/// Numerator of the Hilbert series of `k[x]/M` over `(1-t)^nvars`.
fn numerator(gens: Vec<Monomial>) -> Vec<BigInt> {
    let gens = minimalize(gens);
    if gens.is_empty() {
        return vec![BigInt::one()];
    }
    if gens.iter().any(|g| g.is_one()) {
        return Vec::new();
    }
    let nvars = gens[0].nvars();

    // Split off pure powers whose variable occurs nowhere else.
    let mut occurs = vec![0usize; nvars];
    for g in &gens {
        for (i, &e) in g.exps().iter().enumerate() {
            if e > 0 {
                occurs[i] += 1;
            }
        }
    }
    let mut factor = vec![BigInt::one()];
    let mut rest = Vec::with_capacity(gens.len());
    for g in gens {
        match pure_power_var(&g) {
            Some(i) if occurs[i] == 1 => {
                factor = poly_mul(&factor, &one_minus_t_pow(g.degree() as usize));
            }
            _ => rest.push(g),
        }
    }
    if rest.is_empty() {
        return factor;
    }
    if rest.len() == 1 {
        return poly_mul(&factor, &one_minus_t_pow(rest[0].degree() as usize));
    }

    // Pivot on the variable occurring in the most generators; lowest index
    // breaks ties. The pivot power is the smallest positive exponent.
    let mut counts = vec![0usize; nvars];
    for g in &rest {
        for (i, &e) in g.exps().iter().enumerate() {
            if e > 0 {
                counts[i] += 1;
            }
        }
    }
    let var = (0..nvars)
        .max_by(|&a, &b| counts[a].cmp(&counts[b]).then(b.cmp(&a)))
        .unwrap();
    let e = rest
        .iter()
        .map(|g| g.exp(var))
        .filter(|&e| e > 0)
        .min()
        .unwrap();
    let mut pivot_exps = vec![0u16; nvars];
    pivot_exps[var] = e;
    let pivot = Monomial::new(pivot_exps);

    // N(M) = N(M + (p)) + t^deg(p) N(M : p)
    let mut sum_gens: Vec<Monomial> = rest.iter().filter(|g| !pivot.divides(g)).cloned().collect();
    sum_gens.push(pivot.clone());
    let colon_gens: Vec<Monomial> = rest
        .iter()
        .map(|g| {
            let exps = g
                .exps()
                .iter()
                .zip(pivot.exps())
                .map(|(a, b)| a.saturating_sub(*b));
            Monomial::new(exps)
        })
        .collect();
    let mut n = numerator(sum_gens);
    poly_add_shifted(&mut n, &numerator(colon_gens), e as usize);
    poly_mul(&factor, &trim(n))
}

/// Hilbert series of `k[x_1..x_nvars]/(gens)` for monomial generators.
pub fn hilbert_series(nvars: usize, gens: &[Monomial]) -> HilbertSeries {
    HilbertSeries {
        numerator: trim(numerator(gens.to_vec())),
        denominator_power: nvars,
    }
}

/// The Hilbert polynomial together with dimension data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertPolynomial {
    /// Coefficients in ascending powers of the degree variable.
    pub coefficients: Vec<Rational>,
    pub krull_dim: usize,
    /// `(krull_dim - 1)!` times the leading coefficient; for dimension zero,
    /// the total length.
    pub multiplicity: u64,
    /// The Hilbert function equals the polynomial from this degree on.
    pub regularity_bound: u32,
    /// Numerator after cancelling all factors `1 - t`.
    pub h_vector: Vec<BigInt>,
}

impl HilbertPolynomial {
    pub fn eval(&self, m: i64) -> Rational {
        let x = Rational::from_int(m);
        self.coefficients
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc.mul(&x).add(c))
    }
}

fn rational_poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

/// Cancel `(1 - t)` factors and read off the Hilbert polynomial.
pub fn hilbert_polynomial(hs: &HilbertSeries) -> HilbertPolynomial {
    let mut h = hs.numerator.clone();
    let mut dim = hs.denominator_power;
    if h.is_empty() {
        // The zero ring.
        return HilbertPolynomial {
            coefficients: vec![],
            krull_dim: 0,
            multiplicity: 0,
            regularity_bound: 0,
            h_vector: vec![],
        };
    }
    while dim > 0 && h.iter().sum::<BigInt>().is_zero() {
        // divide by (1 - t): q_i = sum_{j <= i} h_j
        let mut q = Vec::with_capacity(h.len() - 1);
        let mut acc = BigInt::zero();
        for c in &h[..h.len() - 1] {
            acc += c;
            q.push(acc.clone());
        }
        h = trim(q);
        dim -= 1;
    }
    let e: BigInt = h.iter().sum();
    let multiplicity = e.to_u64().expect("multiplicity is a nonnegative machine integer");
    let deg_h = h.len().saturating_sub(1) as i64;

    // HP(m) = sum_i h_i * C(m - i + D - 1, D - 1)
    let mut coefficients = vec![Rational::zero()];
    if dim > 0 {
        let mut fact = BigInt::one();
        for k in 1..dim {
            fact *= k;
        }
        let inv_fact = Rational::from_bigs(BigInt::one(), fact);
        for (i, hi) in h.iter().enumerate() {
            if hi.is_zero() {
                continue;
            }
            // prod_{k=1}^{D-1} (m - i + k)
            let mut p = vec![Rational::one()];
            for k in 1..dim {
                let root = Rational::from_int(k as i64 - i as i64);
                p = rational_poly_mul(&p, &[root, Rational::one()]);
            }
            let scale = Rational::from_bigint(hi.clone()).mul(&inv_fact);
            if coefficients.len() < p.len() {
                coefficients.resize(p.len(), Rational::zero());
            }
            for (k, c) in p.iter().enumerate() {
                coefficients[k] = coefficients[k].add(&c.mul(&scale));
            }
        }
    }
    while coefficients.len() > 1 && coefficients.last().is_some_and(|c| c.is_zero()) {
        coefficients.pop();
    }
    let regularity_bound = (deg_h - dim as i64 + 1).max(0) as u32;
    HilbertPolynomial {
        coefficients,
        krull_dim: dim,
        multiplicity,
        regularity_bound,
        h_vector: h,
    }
}

pub(crate) fn quotient_hilbert_polynomial(nvars: usize, leads: &[Monomial]) -> HilbertPolynomial {
    hilbert_polynomial(&hilbert_series(nvars, leads))
}

/// The monomial ideal of leading terms of `I + P` under `order`, as an ideal
/// of the ambient polynomial ring.
pub fn initial_ideal<F: Field>(ideal: &GradedIdeal<F>, order: MonomialOrder) -> GradedIdeal<F> {
    let ring = ideal.ring();
    let free = RingSpec::new(ring.field().clone(), ring.names().to_vec(), Vec::new())
        .expect("names already validated");
    let leads = if order == MonomialOrder::Grevlex {
        ideal.gb().leading_monomials()
    } else {
        let mut all = ring.relations().to_vec();
        all.extend(ideal.generators().iter().cloned());
        crate::gb::groebner_basis(&all, order, ring.field()).leading_monomials()
    };
    let gens = leads
        .into_iter()
        .map(|m| Polynomial::from_monomial(m, ring.field()))
        .collect();
    GradedIdeal::new(free, gens).expect("monomials are homogeneous")
}

/// Hilbert series of `R/I`.
pub fn quotient_series<F: Field>(ideal: &GradedIdeal<F>) -> HilbertSeries {
    hilbert_series(ideal.ring().nvars(), &ideal.gb().leading_monomials())
}

/// Krull dimension and multiplicity of `R/I`.
pub fn dim_and_degree<F: Field>(ideal: &GradedIdeal<F>) -> (usize, u64) {
    let hp = hilbert_polynomial(&quotient_series(ideal));
    (hp.krull_dim, hp.multiplicity)
}

/// `l_k((I^n)_m)` by direct linear algebra in `R_m`.
///
/// This deliberately avoids the series machinery so that the two routes can
/// check each other.
pub fn graded_piece_length<F: Field>(ideal: &GradedIdeal<F>, n: u32, m: u32) -> usize {
    assert!(n >= 1, "power must be positive");
    let ring: &Arc<RingSpec<F>> = ideal.ring();
    let gens = power_generators(ring, ideal.generators(), n);
    let space = PieceSpace::new(ring, m);
    let rows = space.multiples(&gens, m);
    if rows.is_empty() {
        return 0;
    }
    ring.field().rank(rows)
}
