//! Ideal algebra on top of Gröbner bases: powers, elimination, intersection,
//! colon and saturation, subalgebra presentations, generating degrees and
//! truncations.

use std::collections::HashSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::gb::groebner_basis_weighted;
use crate::linalg::echelon;
use crate::monomial::MonomialOrder;
use crate::poly::Polynomial;
use crate::ring::{GradedIdeal, PieceSpace, RingSpec};

/// All `n`-fold products of `gens`, reduced modulo the relations, without
/// duplicates.
pub fn power_generators<F: Field>(
    ring: &RingSpec<F>,
    gens: &[Polynomial<F>],
    n: u32,
) -> Vec<Polynomial<F>> {
    if n == 0 {
        return vec![ring.one()];
    }
    // (product, index of the last factor) so each multiset is built once
    let mut level: Vec<(Polynomial<F>, usize)> =
        gens.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
    for _ in 1..n {
        let mut next = Vec::new();
        let mut seen = HashSet::new();
        for (p, last) in &level {
            for (i, g) in gens.iter().enumerate().skip(*last) {
                let q = ring.mul(p, g);
                if !q.is_zero() && seen.insert(q.clone()) {
                    next.push((q, i));
                }
            }
        }
        level = next;
    }
    let mut seen = HashSet::new();
    level
        .into_iter()
        .map(|(p, _)| p)
        .filter(|p| seen.insert(p.clone()))
        .collect()
}

/// `I^n`, generated by the `n`-fold products of the generators of `I`.
pub fn ideal_power<F: Field>(ideal: &GradedIdeal<F>, n: u32) -> Result<GradedIdeal<F>> {
    if n == 0 {
        return Err(Error::Precondition("ideal power requires n >= 1".into()));
    }
    if n == 1 {
        return Ok(ideal.clone());
    }
    let ring = ideal.ring();
    GradedIdeal::new(ring.clone(), power_generators(ring, ideal.generators(), n))
}

/// Elements free of the first `k` variables in a reduced basis of the ideal
/// generated by `gens` under an elimination order, restricted to the
/// remaining variables.
fn eliminate_polys<F: Field>(
    gens: &[Polynomial<F>],
    nvars: usize,
    k: usize,
    weights: &[u32],
    field: &F,
) -> Vec<Polynomial<F>> {
    if k == 0 {
        let gb = groebner_basis_weighted(gens, MonomialOrder::Grevlex, weights, field);
        return gb.elements().to_vec();
    }
    let gb = groebner_basis_weighted(gens, MonomialOrder::Block { elim: k }, weights, field);
    gb.elements()
        .iter()
        .filter(|g| !g.involves_any(0..k))
        .map(|g| g.restrict(k..nvars))
        .collect()
}

/// `(I + P) ∩ k[x_{k+1}..x_v]`, as an ideal of the polynomial ring on the
/// remaining variables.
pub fn eliminate<F: Field>(ideal: &GradedIdeal<F>, first_k: usize) -> Result<GradedIdeal<F>> {
    let ring = ideal.ring();
    let v = ring.nvars();
    if first_k > v {
        return Err(Error::Precondition(format!(
            "cannot eliminate {first_k} variables from a ring with {v}"
        )));
    }
    let free = RingSpec::new(ring.field().clone(), ring.names()[first_k..].to_vec(), Vec::new())?;
    if first_k == 0 && ring.is_polynomial_ring() {
        return GradedIdeal::new(free, ideal.generators().to_vec());
    }
    let mut gens = ring.relations().to_vec();
    gens.extend(ideal.generators().iter().cloned());
    let out = eliminate_polys(&gens, v, first_k, &vec![1; v], ring.field());
    GradedIdeal::new(free, out)
}

fn check_same_ring<F: Field>(a: &GradedIdeal<F>, b: &GradedIdeal<F>) -> Result<()> {
    if Arc::ptr_eq(a.ring(), b.ring()) || a.ring().canonical() == b.ring().canonical() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "ideals live in different rings {} and {}",
            a.ring().canonical(),
            b.ring().canonical()
        )))
    }
}

/// Generators of `(A + Q) ∩ (B + Q)` in the ambient polynomial ring, via
/// `w A + (1 - w) B + Q` and elimination of `w`.
fn intersect_polys<F: Field>(
    ring: &RingSpec<F>,
    a: &[Polynomial<F>],
    b: &[Polynomial<F>],
    common: &[Polynomial<F>],
) -> Vec<Polynomial<F>> {
    let field = ring.field();
    let v = ring.nvars();
    let w = Polynomial::var(v + 1, 0, field);
    let one_minus_w = Polynomial::one(v + 1, field).sub(&w, field);
    let mut gens: Vec<Polynomial<F>> = Vec::new();
    for r in common {
        gens.push(r.embed(1, 0));
    }
    for f in a {
        gens.push(w.mul(&f.embed(1, 0), field));
    }
    for g in b {
        gens.push(one_minus_w.mul(&g.embed(1, 0), field));
    }
    eliminate_polys(&gens, v + 1, 1, &vec![1; v + 1], field)
}

/// `I ∩ J`.
pub fn intersect<F: Field>(i: &GradedIdeal<F>, j: &GradedIdeal<F>) -> Result<GradedIdeal<F>> {
    check_same_ring(i, j)?;
    let ring = i.ring();
    if i.is_zero() || j.is_zero() {
        return Ok(GradedIdeal::zero(ring.clone()));
    }
    if i.is_unit() {
        return Ok(j.clone());
    }
    if j.is_unit() {
        return Ok(i.clone());
    }
    GradedIdeal::new(
        ring.clone(),
        intersect_polys(ring, i.generators(), j.generators(), ring.relations()),
    )
}

/// `I : (g)` for a single element.
fn colon_element<F: Field>(ideal: &GradedIdeal<F>, g: &Polynomial<F>) -> Result<GradedIdeal<F>> {
    let ring = ideal.ring();
    let field = ring.field();
    // f g ∈ I + P in the ambient ring, so intersect I + P with the
    // principal ideal (g) there and divide by g.
    let mut a = ideal.generators().to_vec();
    a.extend(ring.relations().iter().cloned());
    let meet = intersect_polys(ring, &a, std::slice::from_ref(g), &[]);
    let mut quotients = Vec::with_capacity(meet.len());
    for h in meet {
        let q = super::exact_division(&h, g, field)
            .ok_or_else(|| Error::Internal("intersection element not divisible by g".into()))?;
        quotients.push(q);
    }
    GradedIdeal::new(ring.clone(), quotients)
}

/// `I : J = { f : f J ⊆ I }`.
pub fn colon<F: Field>(i: &GradedIdeal<F>, j: &GradedIdeal<F>) -> Result<GradedIdeal<F>> {
    check_same_ring(i, j)?;
    if j.is_zero() {
        return Err(Error::Precondition("colon by the zero ideal".into()));
    }
    let ring = i.ring();
    if j.is_unit() {
        return Ok(i.clone());
    }
    if i.is_zero() {
        // R is assumed to be a domain, but stay honest in general rings.
        if ring.is_polynomial_ring() {
            return Ok(i.clone());
        }
    }
    let mut acc: Option<GradedIdeal<F>> = None;
    for g in j.generators() {
        let part = colon_element(i, g)?;
        acc = Some(match acc {
            None => part,
            Some(a) => intersect(&a, &part)?,
        });
        if acc.as_ref().is_some_and(|a| a.same_ideal(i)) {
            // I ⊆ I : J always holds, so the running intersection cannot drop below I.
            break;
        }
    }
    Ok(acc.expect("J has a generator"))
}

/// `I : J^∞`, by iterating the colon until the ideal stops growing.
pub fn saturate<F: Field>(i: &GradedIdeal<F>, j: &GradedIdeal<F>) -> Result<GradedIdeal<F>> {
    let mut cur = i.clone();
    loop {
        let next = colon(&cur, j)?;
        if next.same_ideal(&cur) {
            return Ok(cur);
        }
        cur = next;
    }
}

/// `𝐦^t`, generated by the standard monomials of degree `t`.
pub fn maximal_ideal_power<F: Field>(ring: &Arc<RingSpec<F>>, t: u32) -> GradedIdeal<F> {
    let gens = ring
        .graded_piece_basis(t)
        .into_iter()
        .map(|m| Polynomial::from_monomial(m, ring.field()))
        .collect();
    GradedIdeal::new(ring.clone(), gens).expect("monomials are homogeneous")
}

/// The canonical minimal homogeneous generating set, built degree by degree.
///
/// In each degree `t`, the ideal piece `I_t` is put in reduced echelon form
/// against the standard-monomial basis; the rows whose pivots are not
/// pivots of `R_1 · I_{t-1}` (the part generated in lower degrees) are the
/// new generators. The result depends only on the ideal.
pub fn min_gens<F: Field>(ideal: &GradedIdeal<F>) -> Result<Vec<Polynomial<F>>> {
    if ideal.is_zero() {
        return Err(Error::Precondition("minimal generators of the zero ideal".into()));
    }
    if let Some(g) = ideal.cached_min_gens().get() {
        return Ok(g.clone());
    }
    let ring = ideal.ring();
    let field = ring.field();
    let mut gens: Vec<&Polynomial<F>> = ideal.generators().iter().collect();
    gens.sort_by_key(|g| g.homogeneous_degree());
    let degrees = ideal.generator_degrees();
    let mut kept: Vec<Polynomial<F>> = Vec::new();
    for &t in &degrees {
        let space = PieceSpace::new(ring, t);
        let lower = echelon(field, space.multiples(&kept, t));
        let lower_pivots: HashSet<usize> = lower
            .iter()
            .map(|r| r.iter().position(|x| !field.is_zero(x)).unwrap())
            .collect();
        let mut rows = lower;
        for g in gens.iter().filter(|g| g.homogeneous_degree() == Some(t)) {
            rows.push(space.coords(g));
        }
        for row in echelon(field, rows) {
            let p = row.iter().position(|x| !field.is_zero(x)).unwrap();
            if !lower_pivots.contains(&p) {
                kept.push(space.poly(&row));
            }
        }
    }
    let _ = ideal.cached_min_gens().set(kept.clone());
    Ok(kept)
}

/// `d(I)`: the largest degree of a minimal generator.
pub fn max_gen_degree<F: Field>(ideal: &GradedIdeal<F>) -> Result<u32> {
    Ok(min_gens(ideal)?
        .iter()
        .filter_map(|g| g.homogeneous_degree())
        .max()
        .expect("nonzero ideal has a generator"))
}

/// `⟨I_t⟩`: the ideal generated by the degree-`t` piece of `I`.
pub fn truncate<F: Field>(ideal: &GradedIdeal<F>, t: u32) -> GradedIdeal<F> {
    let ring = ideal.ring();
    let basis = crate::ring::ideal_piece_basis(ring, ideal.generators(), t);
    GradedIdeal::new(ring.clone(), basis).expect("piece elements are homogeneous")
}

/// Presentation of the subalgebra `k[b_1..b_s] ⊆ R` generated by elements
/// of a common degree `c`: the polynomial ring on `symbols` (each of degree
/// 1) and the kernel of `t_j ↦ b_j`.
pub fn kernel_presentation<F: Field>(
    ring: &RingSpec<F>,
    elements: &[Polynomial<F>],
    symbols: &[String],
) -> Result<(Arc<RingSpec<F>>, GradedIdeal<F>)> {
    if elements.len() != symbols.len() {
        return Err(Error::DimensionMismatch {
            expected: elements.len(),
            got: symbols.len(),
        });
    }
    let field = ring.field();
    let target = RingSpec::new(field.clone(), symbols.to_vec(), Vec::new())?;
    if elements.is_empty() {
        return Ok((target.clone(), GradedIdeal::zero(target)));
    }
    let mut c = None;
    for e in elements {
        let d = e.homogeneous_degree().filter(|&d| d >= 1).ok_or_else(|| {
            Error::Precondition("subalgebra generators must be homogeneous of positive degree".into())
        })?;
        if *c.get_or_insert(d) != d {
            return Err(Error::Precondition("subalgebra generators must share one degree".into()));
        }
    }
    let c = c.unwrap();
    let v = ring.nvars();
    let s = elements.len();
    let mut gens: Vec<Polynomial<F>> = ring.relations().iter().map(|r| r.embed(0, s)).collect();
    for (j, b) in elements.iter().enumerate() {
        let t = Polynomial::var(v + s, v + j, field);
        gens.push(t.sub(&ring.reduce(b).embed(0, s), field));
    }
    let mut weights = vec![1u32; v];
    weights.extend(std::iter::repeat(c).take(s));
    let kernel = eliminate_polys(&gens, v + s, v, &weights, field);
    if let Some(lin) = kernel.iter().find(|k| k.homogeneous_degree() == Some(1)) {
        return Err(Error::Precondition(format!(
            "subalgebra generators are linearly dependent: {}",
            lin.display(symbols, field)
        )));
    }
    let ideal = GradedIdeal::new(target.clone(), kernel)?;
    Ok((target, ideal))
}
