//! Standard graded rings `k[x_1..x_v]/P` and their homogeneous ideals.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::gb::{groebner_basis, GroebnerBasis};
use crate::hilbert::{self, HilbertPolynomial};
use crate::linalg::echelon;
use crate::monomial::{monomials_of_degree, Monomial, MonomialOrder};
use crate::poly::Polynomial;

/// A standard graded algebra: every variable has degree 1 and the defining
/// ideal is generated by homogeneous relations of positive degree.
pub struct RingSpec<F: Field> {
    field: F,
    names: Vec<String>,
    relations: Vec<Polynomial<F>>,
    relation_gb: OnceLock<GroebnerBasis<F>>,
    hilbert: OnceLock<HilbertPolynomial>,
}

impl<F: Field> fmt::Debug for RingSpec<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical())
    }
}

impl<F: Field> RingSpec<F> {
    pub fn new(field: F, names: Vec<String>, relations: Vec<Polynomial<F>>) -> Result<Arc<Self>> {
        let mut seen = HashSet::new();
        for n in &names {
            if !seen.insert(n) {
                return Err(Error::Precondition(format!("duplicate variable name `{n}`")));
            }
        }
        for (i, r) in relations.iter().enumerate() {
            if r.nvars() != names.len() {
                return Err(Error::DimensionMismatch {
                    expected: names.len(),
                    got: r.nvars(),
                });
            }
            match r.homogeneous_degree() {
                Some(d) if d >= 1 => {}
                _ if r.is_zero() => {}
                _ => {
                    return Err(Error::NonHomogeneous {
                        ideal: "relations".into(),
                        index: i,
                        text: r.display(&names, &field),
                    })
                }
            }
        }
        let relations = relations.into_iter().filter(|r| !r.is_zero()).collect();
        Ok(Arc::new(RingSpec {
            field,
            names,
            relations,
            relation_gb: OnceLock::new(),
            hilbert: OnceLock::new(),
        }))
    }

    /// The polynomial ring on the given variable names.
    pub fn polynomial_ring(field: F, names: &[&str]) -> Arc<Self> {
        Self::new(field, names.iter().map(|s| s.to_string()).collect(), Vec::new())
            .expect("free ring is always valid")
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn relations(&self) -> &[Polynomial<F>] {
        &self.relations
    }

    pub fn is_polynomial_ring(&self) -> bool {
        self.relations.is_empty()
    }

    /// Grevlex Gröbner basis of the defining ideal.
    pub fn relation_gb(&self) -> &GroebnerBasis<F> {
        self.relation_gb
            .get_or_init(|| groebner_basis(&self.relations, MonomialOrder::Grevlex, &self.field))
    }

    /// Canonical representative of `f` modulo the relations.
    pub fn reduce(&self, f: &Polynomial<F>) -> Polynomial<F> {
        if self.relations.is_empty() {
            f.clone()
        } else {
            self.relation_gb().normal_form(f, &self.field)
        }
    }

    pub fn var(&self, i: usize) -> Polynomial<F> {
        Polynomial::var(self.nvars(), i, &self.field)
    }

    pub fn one(&self) -> Polynomial<F> {
        Polynomial::one(self.nvars(), &self.field)
    }

    pub fn mul(&self, a: &Polynomial<F>, b: &Polynomial<F>) -> Polynomial<F> {
        self.reduce(&a.mul(b, &self.field))
    }

    /// Standard monomials of degree `m`: a basis of `R_m`.
    pub fn graded_piece_basis(&self, m: u32) -> Vec<Monomial> {
        let all = monomials_of_degree(self.nvars(), m);
        if self.relations.is_empty() {
            return all;
        }
        let leads = self.relation_gb().leading_monomials();
        all.into_iter()
            .filter(|mono| !leads.iter().any(|l| l.divides(mono)))
            .collect()
    }

    pub fn hilbert_polynomial(&self) -> &HilbertPolynomial {
        self.hilbert.get_or_init(|| {
            hilbert::quotient_hilbert_polynomial(self.nvars(), &self.relation_gb().leading_monomials())
        })
    }

    /// Krull dimension.
    pub fn dim(&self) -> usize {
        self.hilbert_polynomial().krull_dim
    }

    /// Multiplicity `e(R)`.
    pub fn degree(&self) -> u64 {
        self.hilbert_polynomial().multiplicity
    }

    /// `R[new...]`: the same ring with fresh degree-1 variables appended.
    pub fn extend(&self, new_names: &[String]) -> Result<Arc<Self>> {
        let mut names = self.names.clone();
        names.extend(new_names.iter().cloned());
        let rels = self.relations.iter().map(|r| r.embed(0, new_names.len())).collect();
        Self::new(self.field.clone(), names, rels)
    }

    /// A textual form that identifies the ring up to equality of its
    /// presentation, used for hashing and reports.
    pub fn canonical(&self) -> String {
        let rels: Vec<String> = self
            .relations
            .iter()
            .map(|r| r.display(&self.names, &self.field))
            .collect();
        if rels.is_empty() {
            format!("{}[{}]", self.field.spec(), self.names.join(","))
        } else {
            format!("{}[{}]/({})", self.field.spec(), self.names.join(","), rels.join(","))
        }
    }

    pub fn display(&self, f: &Polynomial<F>) -> String {
        f.display(&self.names, &self.field)
    }

    /// The homogeneous maximal ideal.
    pub fn maximal_ideal(self: &Arc<Self>) -> GradedIdeal<F> {
        let gens = (0..self.nvars()).map(|i| self.var(i)).collect();
        GradedIdeal::new(self.clone(), gens).expect("variables are homogeneous")
    }
}

/// Coordinates of homogeneous degree-`m` elements against the standard
/// monomial basis of `R_m`.
pub(crate) struct PieceSpace<'a, F: Field> {
    ring: &'a RingSpec<F>,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl<'a, F: Field> PieceSpace<'a, F> {
    pub fn new(ring: &'a RingSpec<F>, m: u32) -> Self {
        let mut basis = ring.graded_piece_basis(m);
        basis.sort_by(|a, b| MonomialOrder::Grevlex.cmp(b, a));
        let index = basis.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        PieceSpace { ring, basis, index }
    }

    /// `f` must already be reduced modulo the relations.
    pub fn coords(&self, f: &Polynomial<F>) -> Vec<F::Elem> {
        let field = self.ring.field();
        let mut v = vec![field.zero(); self.basis.len()];
        for (m, c) in f.terms() {
            v[self.index[m]] = c.clone();
        }
        v
    }

    pub fn poly(&self, v: &[F::Elem]) -> Polynomial<F> {
        let field = self.ring.field();
        let terms = self
            .basis
            .iter()
            .zip(v)
            .filter(|(_, c)| !field.is_zero(c))
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Polynomial::from_sorted_terms(self.ring.nvars(), terms)
    }

    /// The products `mu * g` for all standard monomials `mu` of the right
    /// degree, reduced modulo the relations.
    pub fn multiples(&self, gens: &[Polynomial<F>], m: u32) -> Vec<Vec<F::Elem>> {
        let mut rows = Vec::new();
        for g in gens {
            let Some(dg) = g.homogeneous_degree() else { continue };
            if dg > m {
                continue;
            }
            for mu in self.ring.graded_piece_basis(m - dg) {
                let p = self.ring.reduce(&g.mul_monomial(&mu));
                if !p.is_zero() {
                    rows.push(self.coords(&p));
                }
            }
        }
        rows
    }
}

/// A homogeneous ideal of a [`RingSpec`].
pub struct GradedIdeal<F: Field> {
    ring: Arc<RingSpec<F>>,
    gens: Vec<Polynomial<F>>,
    gb: OnceLock<GroebnerBasis<F>>,
    min_gens: OnceLock<Vec<Polynomial<F>>>,
}

impl<F: Field> Clone for GradedIdeal<F> {
    fn clone(&self) -> Self {
        GradedIdeal {
            ring: self.ring.clone(),
            gens: self.gens.clone(),
            gb: self.gb.clone(),
            min_gens: self.min_gens.clone(),
        }
    }
}

impl<F: Field> fmt::Debug for GradedIdeal<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.display_gens().join(", "))
    }
}

impl<F: Field> GradedIdeal<F> {
    /// Generators are reduced modulo the relations; zeros and duplicates are
    /// dropped. Every generator must be homogeneous.
    pub fn new(ring: Arc<RingSpec<F>>, gens: Vec<Polynomial<F>>) -> Result<Self> {
        let mut out: Vec<Polynomial<F>> = Vec::new();
        for (i, g) in gens.into_iter().enumerate() {
            if g.nvars() != ring.nvars() {
                return Err(Error::DimensionMismatch {
                    expected: ring.nvars(),
                    got: g.nvars(),
                });
            }
            if !g.is_homogeneous() {
                return Err(Error::NonHomogeneous {
                    ideal: "ideal".into(),
                    index: i,
                    text: ring.display(&g),
                });
            }
            let g = ring.reduce(&g);
            if !g.is_zero() && !out.contains(&g) {
                out.push(g);
            }
        }
        Ok(GradedIdeal {
            ring,
            gens: out,
            gb: OnceLock::new(),
            min_gens: OnceLock::new(),
        })
    }

    pub fn zero(ring: Arc<RingSpec<F>>) -> Self {
        GradedIdeal::new(ring, Vec::new()).unwrap()
    }

    pub fn ring(&self) -> &Arc<RingSpec<F>> {
        &self.ring
    }

    pub fn field(&self) -> &F {
        self.ring.field()
    }

    pub fn generators(&self) -> &[Polynomial<F>] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// Grevlex Gröbner basis of `I + P` in the ambient polynomial ring.
    pub fn gb(&self) -> &GroebnerBasis<F> {
        self.gb.get_or_init(|| {
            let mut all = self.ring.relations().to_vec();
            all.extend(self.gens.iter().cloned());
            groebner_basis(&all, MonomialOrder::Grevlex, self.field())
        })
    }

    pub fn contains(&self, f: &Polynomial<F>) -> bool {
        self.gb().contains(f, self.field())
    }

    pub fn is_subset_of(&self, other: &GradedIdeal<F>) -> bool {
        self.gens.iter().all(|g| other.contains(g))
    }

    /// Ideal equality, decided by equality of reduced Gröbner bases.
    pub fn same_ideal(&self, other: &GradedIdeal<F>) -> bool {
        self.gb() == other.gb()
    }

    pub fn is_unit(&self) -> bool {
        self.gb().is_unit()
    }

    /// Homogeneous ideals generated by a subset of the variables' linear
    /// forms etc. are common; this answers whether all generators share one
    /// degree.
    pub fn generator_degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self
            .gens
            .iter()
            .filter_map(|g| g.homogeneous_degree())
            .collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub(crate) fn cached_min_gens(&self) -> &OnceLock<Vec<Polynomial<F>>> {
        &self.min_gens
    }

    pub fn display_gens(&self) -> Vec<String> {
        self.gens.iter().map(|g| self.ring.display(g)).collect()
    }

    /// Re-read the generators in a ring that extends this one by appended
    /// variables.
    pub fn extend_to(&self, ring: &Arc<RingSpec<F>>) -> Result<GradedIdeal<F>> {
        let extra = ring.nvars() - self.ring.nvars();
        let gens = self.gens.iter().map(|g| g.embed(0, extra)).collect();
        GradedIdeal::new(ring.clone(), gens)
    }
}

/// A k-basis (canonical reduced echelon form) of the degree-`m` piece of
/// the ideal generated by `gens`.
pub fn ideal_piece_basis<F: Field>(ring: &RingSpec<F>, gens: &[Polynomial<F>], m: u32) -> Vec<Polynomial<F>> {
    let space = PieceSpace::new(ring, m);
    let rows = space.multiples(gens, m);
    echelon(ring.field(), rows).iter().map(|v| space.poly(v)).collect()
}

/// Standard monomials of `R_m` (the `graded_piece_basis` operation).
pub fn graded_piece_basis<F: Field>(ring: &RingSpec<F>, m: u32) -> Vec<Monomial> {
    ring.graded_piece_basis(m)
}
