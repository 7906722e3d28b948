//! Buchberger's algorithm with the Gebauer–Möller pair criteria and the
//! sugar (normal) selection strategy.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::field::Field;
use crate::monomial::{Monomial, MonomialOrder};

/// Terms sorted descending in the working order.
pub(crate) type Terms<E> = Vec<(Monomial, E)>;

pub(crate) struct Reducer<E> {
    pub terms: Terms<E>,
    pub lead: Monomial,
    pub mask: u64,
}

impl<E> Reducer<E> {
    pub fn new(terms: Terms<E>) -> Self {
        let lead = terms[0].0.clone();
        let mask = lead.support_mask();
        Reducer { terms, lead, mask }
    }
}

pub(crate) fn sort_terms<E>(terms: &mut Terms<E>, order: MonomialOrder) {
    terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
}

pub(crate) fn make_monic<F: Field>(terms: &mut Terms<F::Elem>, field: &F) {
    if let Some((_, lc)) = terms.first() {
        if !field.is_one(lc) {
            let inv = field.inv(lc);
            for (_, c) in terms.iter_mut() {
                *c = field.mul(c, &inv);
            }
        }
    }
}

/// `p[start..] - c * m * g`, where `g` is sorted in `order`.
fn sub_scaled<F: Field>(
    p: &[(Monomial, F::Elem)],
    c: &F::Elem,
    m: &Monomial,
    g: &[(Monomial, F::Elem)],
    order: MonomialOrder,
    field: &F,
) -> Terms<F::Elem> {
    let mut out = Vec::with_capacity(p.len() + g.len());
    let (mut i, mut j) = (0, 0);
    let mut gm: Option<Monomial> = g.first().map(|t| t.0.mul(m));
    while i < p.len() {
        let Some(ref gmon) = gm else { break };
        match order.cmp(&p[i].0, gmon) {
            Ordering::Greater => {
                out.push(p[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((gmon.clone(), field.neg(&field.mul(c, &g[j].1))));
                j += 1;
                gm = g.get(j).map(|t| t.0.mul(m));
            }
            Ordering::Equal => {
                let v = field.sub(&p[i].1, &field.mul(c, &g[j].1));
                if !field.is_zero(&v) {
                    out.push((p[i].0.clone(), v));
                }
                i += 1;
                j += 1;
                gm = g.get(j).map(|t| t.0.mul(m));
            }
        }
    }
    out.extend_from_slice(&p[i..]);
    while let Some(gmon) = gm {
        out.push((gmon, field.neg(&field.mul(c, &g[j].1))));
        j += 1;
        gm = g.get(j).map(|t| t.0.mul(m));
    }
    out
}

fn find_reducer<'a, E>(
    m: &Monomial,
    reducers: impl Iterator<Item = &'a Reducer<E>>,
) -> Option<&'a Reducer<E>>
where
    E: 'a,
{
    let mask = m.support_mask();
    reducers
        .filter(|r| r.mask & !mask == 0)
        .find(|r| r.lead.divides(m))
}

/// Full reduction of `p` by the monic `reducers`. With `tail == false` only
/// the leading term is reduced.
pub(crate) fn reduce<'a, F: Field>(
    mut p: Terms<F::Elem>,
    reducers: impl Iterator<Item = &'a Reducer<F::Elem>> + Clone,
    order: MonomialOrder,
    field: &F,
    tail: bool,
) -> Terms<F::Elem> {
    let mut done: Terms<F::Elem> = Vec::new();
    let mut start = 0;
    while start < p.len() {
        let (lm, lc) = &p[start];
        match find_reducer(lm, reducers.clone()) {
            Some(r) => {
                let q = r.lead.quotient_of(lm).expect("reducer divides");
                let c = lc.clone();
                p = sub_scaled(&p[start..], &c, &q, &r.terms, order, field);
                start = 0;
            }
            None => {
                if !tail {
                    done.extend(p.drain(start..));
                    return done;
                }
                done.push(p[start].clone());
                start += 1;
            }
        }
    }
    done
}

#[derive(Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

struct Element<E> {
    red: Reducer<E>,
    sugar: u32,
    active: bool,
}

/// Statistics about one Buchberger run.
#[derive(Clone, Copy, Debug, Default)]
pub struct RunStats {
    pub pairs_processed: usize,
    pub zero_reductions: usize,
    pub max_basis: usize,
}

fn wdeg(m: &Monomial, weights: &[u32]) -> u32 {
    m.weighted_degree(weights)
}

fn poly_sugar<E>(terms: &Terms<E>, weights: &[u32]) -> u32 {
    terms.iter().map(|(m, _)| wdeg(m, weights)).max().unwrap_or(0)
}

/// Compute the reduced Gröbner basis of the ideal generated by `gens`
/// (each sorted descending in `order`). Returns monic elements sorted by
/// ascending leading monomial.
pub(crate) fn groebner<F: Field>(
    gens: Vec<Terms<F::Elem>>,
    order: MonomialOrder,
    weights: &[u32],
    field: &F,
) -> (Vec<Terms<F::Elem>>, RunStats) {
    let mut stats = RunStats::default();
    let mut basis: Vec<Element<F::Elem>> = Vec::new();
    // Pairs bucketed by sugar; within a bucket, processed by ascending lcm.
    let mut queue: BTreeMap<u32, Vec<Pair>> = BTreeMap::new();

    let mut pending: Vec<(Terms<F::Elem>, u32)> = gens
        .into_iter()
        .filter(|g| !g.is_empty())
        .map(|g| {
            let s = poly_sugar(&g, weights);
            (g, s)
        })
        .collect();
    // Insert input generators lowest sugar first, each reduced against the
    // basis so far.
    pending.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| order.cmp(&a.0[0].0, &b.0[0].0)));

    let mut inputs = pending.into_iter();
    loop {
        // Next work item: either an input generator or the lowest pair,
        // whichever has smaller sugar.
        let next_pair_sugar = queue.keys().next().copied();
        let next_input = inputs.as_slice().first().map(|(_, s)| *s);
        let (h, sugar) = match (next_input, next_pair_sugar) {
            (None, None) => break,
            (Some(si), sp) if sp.map_or(true, |sp| si <= sp) => {
                let (g, s) = inputs.next().unwrap();
                let active = basis.iter().filter(|e| e.active).map(|e| &e.red);
                (reduce(g, active, order, field, true), s)
            }
            (_, Some(sp)) => {
                let bucket = queue.get_mut(&sp).unwrap();
                // smallest lcm last so pop() takes it
                bucket.sort_by(|a, b| order.cmp(&b.lcm, &a.lcm));
                let pair = bucket.pop().unwrap();
                if bucket.is_empty() {
                    queue.remove(&sp);
                }
                stats.pairs_processed += 1;
                let s = spoly(&basis[pair.i].red, &basis[pair.j].red, &pair.lcm, order, field);
                let active = basis.iter().filter(|e| e.active).map(|e| &e.red);
                (reduce(s, active, order, field, true), sp)
            }
            _ => unreachable!(),
        };
        if h.is_empty() {
            stats.zero_reductions += 1;
            continue;
        }
        let mut h = h;
        make_monic(&mut h, field);
        let sugar = sugar.max(poly_sugar(&h, weights));
        update(&mut basis, &mut queue, Reducer::new(h), sugar, weights);
        stats.max_basis = stats.max_basis.max(basis.iter().filter(|e| e.active).count());
    }

    (interreduce(basis, order, field), stats)
}

fn spoly<F: Field>(
    a: &Reducer<F::Elem>,
    b: &Reducer<F::Elem>,
    lcm: &Monomial,
    order: MonomialOrder,
    field: &F,
) -> Terms<F::Elem> {
    let qa = a.lead.quotient_of(lcm).unwrap();
    let qb = b.lead.quotient_of(lcm).unwrap();
    // Both monic: S = qa*a - qb*b, leading terms cancel.
    let left: Terms<F::Elem> = a.terms[1..]
        .iter()
        .map(|(m, c)| (m.mul(&qa), c.clone()))
        .collect();
    sub_scaled(&left, &field.one(), &qb, &b.terms[1..], order, field)
}

/// Gebauer–Möller installation of a new basis element.
fn update<E>(
    basis: &mut Vec<Element<E>>,
    queue: &mut BTreeMap<u32, Vec<Pair>>,
    h: Reducer<E>,
    h_sugar: u32,
    weights: &[u32],
) {
    let k = basis.len();
    let hl = h.lead.clone();

    // Candidate pairs (g, h).
    let cands: Vec<(usize, Monomial, bool)> = basis
        .iter()
        .enumerate()
        .filter(|(_, e)| e.active)
        .map(|(i, e)| (i, e.red.lead.lcm(&hl), e.red.lead.is_coprime(&hl)))
        .collect();

    // Chain criterion among the new pairs.
    let mut kept: Vec<usize> = Vec::new(); // indices into cands
    for (a, (_, lcm_a, coprime_a)) in cands.iter().enumerate() {
        if *coprime_a {
            kept.push(a);
            continue;
        }
        let dominated_by_later = cands[a + 1..]
            .iter()
            .any(|(_, lcm_b, _)| lcm_b.divides(lcm_a));
        let dominated_by_kept = kept.iter().any(|&b| cands[b].1.divides(lcm_a));
        if !dominated_by_later && !dominated_by_kept {
            kept.push(a);
        }
    }

    // Drop old pairs whose lcm is strictly covered via h.
    for bucket in queue.values_mut() {
        bucket.retain(|p| {
            if !hl.divides(&p.lcm) {
                return true;
            }
            let li = basis[p.i].red.lead.lcm(&hl);
            let lj = basis[p.j].red.lead.lcm(&hl);
            li == p.lcm || lj == p.lcm
        });
    }
    queue.retain(|_, b| !b.is_empty());

    // Product criterion on the survivors; enqueue the rest.
    for a in kept {
        let (i, ref lcm, coprime) = cands[a];
        if coprime {
            continue;
        }
        let gi = &basis[i];
        let si = gi.sugar - wdeg(&gi.red.lead, weights) + wdeg(lcm, weights);
        let sh = h_sugar - wdeg(&hl, weights) + wdeg(lcm, weights);
        queue.entry(si.max(sh)).or_default().push(Pair {
            i,
            j: k,
            lcm: lcm.clone(),
        });
    }

    for e in basis.iter_mut() {
        if e.active && hl.divides(&e.red.lead) {
            e.active = false;
        }
    }
    basis.push(Element {
        red: h,
        sugar: h_sugar,
        active: true,
    });
}

fn interreduce<F: Field>(
    basis: Vec<Element<F::Elem>>,
    order: MonomialOrder,
    field: &F,
) -> Vec<Terms<F::Elem>> {
    let mut elems: Vec<Reducer<F::Elem>> = basis
        .into_iter()
        .filter(|e| e.active)
        .map(|e| e.red)
        .collect();
    // Minimalize: drop any element whose lead is divisible by another lead.
    elems.sort_by(|a, b| order.cmp(&a.lead, &b.lead));
    let mut minimal: Vec<Reducer<F::Elem>> = Vec::new();
    for e in elems {
        if !minimal.iter().any(|m| m.lead.divides(&e.lead)) {
            minimal.push(e);
        }
    }
    // Tail-reduce each element by the others.
    let n = minimal.len();
    for idx in 0..n {
        let terms = std::mem::take(&mut minimal[idx].terms);
        let head = terms[0].clone();
        let tail: Terms<F::Elem> = terms[1..].to_vec();
        let others = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != idx)
            .map(|(_, r)| r);
        let mut reduced = vec![head];
        reduced.extend(reduce(tail, others, order, field, true));
        minimal[idx].terms = reduced;
    }
    minimal.into_iter().map(|r| r.terms).collect()
}
