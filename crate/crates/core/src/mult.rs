//! Multiplicity invariants of a homogeneous ideal: degrees of diagonal
//! subalgebras, RA-multiplicities, mixed multiplicities, epsilon
//! differences and finite-level density values.

use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, Rational};
use crate::gb::{ideal_power, kernel_presentation, max_gen_degree, saturate};
use crate::hilbert::{graded_piece_length, hilbert_polynomial, quotient_series, HilbertPolynomial, HilbertSeries};
use crate::io::cache::{cache_key, Cache};
use crate::io::parse::parse_polynomial;
use crate::poly::Polynomial;
use crate::ring::{ideal_piece_basis, GradedIdeal, RingSpec};

/// Counters collected while an [`Engine`] works.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EngineStats {
    pub fiber_presentations: u64,
    pub max_fiber_generators: usize,
    pub max_kernel_basis: usize,
    pub max_coefficient_bits: u64,
    pub cache_hits: u64,
    pub cache_misses: u64,
}

/// Holds the optional result cache and statistics shared by a batch of
/// computations. All methods take `&self` and may run concurrently.
#[derive(Default)]
pub struct Engine {
    cache: Option<Cache>,
    stats: Mutex<EngineStats>,
}

/// The `(c,1)`-diagonal subalgebra `⊕ (I^n)_{cn}` presented as a quotient of
/// a polynomial ring on a basis of `I_c`.
pub struct FiberCone<F: Field> {
    pub c: u32,
    pub ring: Arc<RingSpec<F>>,
    pub kernel: GradedIdeal<F>,
    pub series: HilbertSeries,
    pub hilbert: HilbertPolynomial,
}

impl<F: Field> FiberCone<F> {
    /// `l((I^n)_{cn})`, read off the Hilbert series of the presentation.
    pub fn piece_length(&self, n: u32) -> BigInt {
        self.series.coefficient(n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalDegree {
    pub c: u32,
    pub value: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RAMultiplicities {
    /// `e_0, ..., e_{D-1}`.
    pub values: Vec<i64>,
    /// The diagonal degrees the values were interpolated from.
    pub samples: Vec<DiagonalDegree>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MixedMultiplicities {
    pub beta: u32,
    /// `e_0(m|<I_beta>), ..., e_{D-1}(m|<I_beta>)`.
    pub values: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensitySample {
    pub n: u32,
    pub x: Rational,
    pub adic_value: Rational,
    pub saturated_value: Rational,
}

/// `S = R[T]` with one new variable of degree 1, and ideals of `R` re-read
/// in `S`.
pub struct SExtension<F: Field> {
    pub ring: Arc<RingSpec<F>>,
    pub variable: String,
    pub ideals: Vec<GradedIdeal<F>>,
    /// Set when the default variable name was taken.
    pub note: Option<String>,
}

fn binom(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn to_i64(v: &BigInt, what: &str) -> Result<i64> {
    v.to_i64()
        .ok_or_else(|| Error::Internal(format!("{what} does not fit a machine integer")))
}

/// `sum_i C(D-1, i) e_i c^i`, the diagonal degree predicted by RA-multiplicities.
pub fn diagonal_from_ra(values: &[i64], c: i64) -> BigInt {
    let d = values.len() as u64;
    values
        .iter()
        .enumerate()
        .map(|(i, e)| binom(d - 1, i as u64) * BigInt::from(*e) * BigInt::from(c).pow(i as u32))
        .sum()
}

/// Solve `A x = b` over the rationals; `A` square and invertible.
fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Result<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::Internal("singular interpolation system".into()))?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].inv();
        for j in col..n {
            a[col][j] = a[col][j].mul(&inv);
        }
        b[col] = b[col].mul(&inv);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in col..n {
                    let t = a[col][j].mul(&f);
                    a[r][j] = a[r][j].sub(&t);
                }
                let t = b[col].mul(&f);
                b[r] = b[r].sub(&t);
            }
        }
    }
    Ok(b)
}

/// Mixed multiplicities from RA-multiplicities:
/// `e_i(m|<I_beta>) = sum_{j<=i} C(i,j) beta^j e_{D-1-i+j}`.
pub fn mixed_from_ra(ra: &[i64], beta: u32) -> Vec<BigInt> {
    let d = ra.len();
    (0..d)
        .map(|i| {
            (0..=i)
                .map(|j| {
                    binom(i as u64, j as u64)
                        * BigInt::from(beta).pow(j as u32)
                        * BigInt::from(ra[d - 1 - i + j])
                })
                .sum()
        })
        .collect()
}

/// The inverse conversion:
/// `e_i(RA) = sum_{j<=D-1-i} (-1)^j C(D-1-i,j) beta^j e_{D-1-i-j}(m|<I_beta>)`.
pub fn ra_from_mixed(mixed: &[i64], beta: u32) -> Vec<BigInt> {
    let d = mixed.len();
    (0..d)
        .map(|i| {
            let top = d - 1 - i;
            (0..=top)
                .map(|j| {
                    let t = binom(top as u64, j as u64)
                        * BigInt::from(beta).pow(j as u32)
                        * BigInt::from(mixed[top - j]);
                    if j % 2 == 1 {
                        -t
                    } else {
                        t
                    }
                })
                .sum()
        })
        .collect()
}

/// The fresh variable name for `S = R[T]`.
fn fresh_name(names: &[String]) -> String {
    if !names.iter().any(|n| n == "T") {
        return "T".into();
    }
    (1..)
        .map(|k| format!("T{k}"))
        .find(|c| !names.contains(c))
        .unwrap()
}

/// Adjoin one degree-1 variable and re-read the ideals.
pub fn extend_to_s<F: Field>(ring: &Arc<RingSpec<F>>, ideals: &[&GradedIdeal<F>]) -> Result<SExtension<F>> {
    let var = fresh_name(ring.names());
    let note = (var != "T").then(|| format!("variable T is taken; the new variable is named {var}"));
    let s = ring.extend(std::slice::from_ref(&var))?;
    let ideals = ideals
        .iter()
        .map(|i| i.extend_to(&s))
        .collect::<Result<Vec<_>>>()?;
    Ok(SExtension {
        ring: s,
        variable: var,
        ideals,
        note,
    })
}

impl Engine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_cache(cache: Cache) -> Self {
        Engine {
            cache: Some(cache),
            stats: Mutex::default(),
        }
    }

    pub fn cache(&self) -> Option<&Cache> {
        self.cache.as_ref()
    }

    pub fn stats(&self) -> EngineStats {
        self.stats.lock().unwrap().clone()
    }

    /// Present `⊕ (I^n)_{cn}` by a basis of `I_c`. Requires `c >= d(I)`.
    pub fn fiber_cone<F: Field>(&self, ideal: &GradedIdeal<F>, c: u32) -> Result<FiberCone<F>> {
        if ideal.is_zero() {
            return Err(Error::Precondition("fiber cone of the zero ideal".into()));
        }
        let d = max_gen_degree(ideal)?;
        if c < d {
            return Err(Error::Precondition(format!(
                "slope c = {c} is below the generating degree d(I) = {d}"
            )));
        }
        let ring = ideal.ring();
        let field = ring.field();
        let basis = ideal_piece_basis(ring, ideal.generators(), c);
        let symbols: Vec<String> = (1..=basis.len()).map(|j| format!("t{j}")).collect();

        let shown: Vec<String> = basis.iter().map(|b| ring.display(b)).collect();
        let key = cache_key(
            "fiber",
            &[&ring.canonical(), &c.to_string(), &shown.join(",")],
        );
        let cached = self.cache.as_ref().and_then(|ch| ch.get("fiber", &key));
        let (target, kernel) = match cached {
            Some(payload) if !self.cache.as_ref().unwrap().validating() => {
                self.stats.lock().unwrap().cache_hits += 1;
                decode_kernel(&payload, &symbols, field)?
            }
            _ => {
                let (target, kernel) = kernel_presentation(ring, &basis, &symbols)?;
                let payload = encode_kernel(&kernel);
                if let Some(ch) = &self.cache {
                    if let Some(old) = &cached {
                        if *old != payload {
                            return Err(Error::Internal(format!(
                                "cache entry {key} differs from recomputation"
                            )));
                        }
                        ch.note_validated();
                    } else {
                        self.stats.lock().unwrap().cache_misses += 1;
                        ch.put("fiber", &key, &payload)?;
                    }
                }
                (target, kernel)
            }
        };

        let series = quotient_series(&kernel);
        let hilbert = hilbert_polynomial(&series);
        {
            let mut st = self.stats.lock().unwrap();
            st.fiber_presentations += 1;
            st.max_fiber_generators = st.max_fiber_generators.max(basis.len());
            st.max_kernel_basis = st.max_kernel_basis.max(kernel.gb().len());
            let bits = kernel
                .gb()
                .elements()
                .iter()
                .map(|g| g.max_coefficient_bits(field))
                .max()
                .unwrap_or(0);
            st.max_coefficient_bits = st.max_coefficient_bits.max(bits);
        }
        Ok(FiberCone {
            c,
            ring: target,
            kernel,
            series,
            hilbert,
        })
    }

    /// `e(R[It]_{Δ(c,1)})` for `c > d(I)`.
    pub fn diagonal_degree<F: Field>(&self, ideal: &GradedIdeal<F>, c: u32) -> Result<DiagonalDegree> {
        if ideal.is_zero() {
            return Err(Error::Precondition("diagonal degree of the zero ideal".into()));
        }
        let d = max_gen_degree(ideal)?;
        if c <= d {
            return Err(Error::Precondition(format!(
                "diagonal degree needs c > d(I) = {d}, got c = {c}"
            )));
        }
        let fc = self.fiber_cone(ideal, c)?;
        let dim = ideal.ring().dim();
        if fc.hilbert.krull_dim != dim {
            return Err(Error::Internal(format!(
                "diagonal subalgebra has dimension {} but the ring has dimension {dim}",
                fc.hilbert.krull_dim
            )));
        }
        Ok(DiagonalDegree {
            c,
            value: fc.hilbert.multiplicity,
        })
    }

    /// Diagonal degrees at several slopes, computed concurrently.
    pub fn diagonal_degrees<F: Field>(&self, jobs: &[(&GradedIdeal<F>, u32)]) -> Result<Vec<DiagonalDegree>> {
        par_map(jobs.to_vec(), |(i, c)| self.diagonal_degree(i, c)).into_iter().collect()
    }

    /// RA-multiplicities by exact interpolation of diagonal degrees at
    /// `c = d(I)+1, ..., d(I)+D`.
    pub fn ra_multiplicities<F: Field>(&self, ideal: &GradedIdeal<F>) -> Result<RAMultiplicities> {
        let d = max_gen_degree_checked(ideal)?;
        self.ra_multiplicities_from(ideal, d + 1)
    }

    /// As [`Engine::ra_multiplicities`] with sample points starting at `first`.
    pub fn ra_multiplicities_from<F: Field>(&self, ideal: &GradedIdeal<F>, first: u32) -> Result<RAMultiplicities> {
        let ring = ideal.ring();
        let dim = ring.dim();
        let d = max_gen_degree_checked(ideal)?;
        let (rel_dim, _) = crate::hilbert::dim_and_degree(ideal);
        if rel_dim == 0 || rel_dim >= dim {
            return Err(Error::Precondition(format!(
                "RA-multiplicities need 0 < height I < dim R (height {})",
                dim - rel_dim.min(dim)
            )));
        }
        if first <= d {
            return Err(Error::Precondition(format!(
                "sample points must exceed d(I) = {d}"
            )));
        }
        let jobs: Vec<(&GradedIdeal<F>, u32)> = (0..dim as u32).map(|k| (ideal, first + k)).collect();
        let samples = self.diagonal_degrees(&jobs)?;

        let rows: Vec<Vec<Rational>> = samples
            .iter()
            .map(|s| {
                (0..dim)
                    .map(|i| {
                        Rational::from_bigint(binom(dim as u64 - 1, i as u64) * BigInt::from(s.c).pow(i as u32))
                    })
                    .collect()
            })
            .collect();
        let rhs = samples.iter().map(|s| Rational::from_int(s.value as i64)).collect();
        let sol = solve(rows, rhs)?;
        let mut values = Vec::with_capacity(dim);
        for (i, v) in sol.iter().enumerate() {
            let Some(int) = v.to_integer() else {
                return Err(Error::Internal(format!("RA-multiplicity e_{i} = {v} is not an integer")));
            };
            values.push(to_i64(&int, "RA-multiplicity")?);
        }
        check_ra_shape(ideal, &values)?;
        Ok(RAMultiplicities { values, samples })
    }

    /// RA-multiplicities of `IS` in `S = R[T]` from those of `I` and a single
    /// diagonal degree of `IS` at `c`.
    ///
    /// Since `l((IS)^n_{cn}) = sum_{m <= cn} l((I^n)_m)`, the diagonal degree
    /// of `IS` is an antiderivative in `c` of `D` times that of `I`, so the
    /// vector for `IS` is `(e_0', e_0, ..., e_{D-1})` with only `e_0'` unknown.
    pub fn extended_ra_multiplicities<F: Field>(
        &self,
        ra: &RAMultiplicities,
        extended: &GradedIdeal<F>,
        c: u32,
    ) -> Result<RAMultiplicities> {
        let dim = ra.values.len() + 1;
        if extended.ring().dim() != dim {
            return Err(Error::Precondition("the extended ideal must live in a ring of one more dimension".into()));
        }
        let sample = self.diagonal_degree(extended, c)?;
        let mut values = vec![0];
        values.extend_from_slice(&ra.values);
        let rest = diagonal_from_ra(&values, c as i64);
        values[0] = to_i64(&(BigInt::from(sample.value) - rest), "RA-multiplicity")?;
        check_ra_shape(extended, &values)?;
        Ok(RAMultiplicities {
            values,
            samples: vec![sample],
        })
    }

    /// Mixed multiplicities `e_i(m|<I_beta>)` for `beta >= d(I)`.
    pub fn mixed_multiplicities<F: Field>(&self, ideal: &GradedIdeal<F>, beta: u32) -> Result<MixedMultiplicities> {
        let d = max_gen_degree_checked(ideal)?;
        if beta < d {
            return Err(Error::Precondition(format!(
                "beta = {beta} is below d(I) = {d}"
            )));
        }
        let ra = self.ra_multiplicities(ideal)?;
        mixed_checked(ideal, &ra, beta)
    }

    /// `e(S-diagonal of JS at c) - e(S-diagonal of IS at c)`, which equals
    /// `ε(I) - ε(J)` once the closures agree up to finite colength.
    pub fn epsilon_difference<F: Field>(&self, i: &GradedIdeal<F>, j: &GradedIdeal<F>, c: u32) -> Result<i64> {
        if !i.is_subset_of(j) {
            return Err(Error::Precondition("epsilon difference needs I ⊆ J".into()));
        }
        let bold = max_gen_degree_checked(i)?.max(max_gen_degree_checked(j)?);
        if c <= bold {
            return Err(Error::Precondition(format!("c = {c} must exceed d = {bold}")));
        }
        let r = self.diagonal_degrees(&[(i, c), (j, c)])?;
        if r[0].value != r[1].value {
            return Err(Error::Precondition(format!(
                "closures of I and J differ by infinite colength (diagonal degrees {} and {} at c = {c})",
                r[0].value, r[1].value
            )));
        }
        let ext = extend_to_s(i.ring(), &[i, j])?;
        let s = self.diagonal_degrees(&[(&ext.ideals[0], c), (&ext.ideals[1], c)])?;
        let diff = s[1].value as i64 - s[0].value as i64;
        if diff < 0 {
            return Err(Error::Internal(format!("negative epsilon difference {diff}")));
        }
        Ok(diff)
    }

    /// `f_n(x)` and `g_n(x)` at one point.
    pub fn density_sample<F: Field>(&self, ideal: &GradedIdeal<F>, n: u32, x: &Rational) -> Result<DensitySample> {
        let power = ideal_power(ideal, n)?;
        let sat = saturate(&power, &ideal.ring().maximal_ideal())?;
        density_from(ideal, &power, &sat, n, x)
    }

    /// Density values at several abscissas sharing one level `n`.
    pub fn density_row<F: Field>(&self, ideal: &GradedIdeal<F>, n: u32, xs: &[Rational]) -> Result<Vec<DensitySample>> {
        let power = ideal_power(ideal, n)?;
        let sat = saturate(&power, &ideal.ring().maximal_ideal())?;
        xs.iter().map(|x| density_from(ideal, &power, &sat, n, x)).collect()
    }

    /// `d * sum_i C(d-1,i) e_i x^i` for `x >= d(I)`.
    pub fn asymptotic_density_at<F: Field>(&self, ideal: &GradedIdeal<F>, x: &Rational) -> Result<Rational> {
        let d = max_gen_degree_checked(ideal)?;
        if *x < Rational::from_int(d as i64) {
            return Err(Error::Precondition(format!(
                "the polynomial form of the density holds only for x >= d(I) = {d}"
            )));
        }
        let ra = self.ra_multiplicities(ideal)?;
        Ok(asymptotic_from_ra(&ra.values, x))
    }
}

fn asymptotic_from_ra(values: &[i64], x: &Rational) -> Rational {
    let dim = values.len();
    let mut acc = Rational::zero();
    let mut xp = Rational::one();
    for (i, e) in values.iter().enumerate() {
        let coef = Rational::from_bigint(binom(dim as u64 - 1, i as u64) * BigInt::from(*e));
        acc = acc.add(&coef.mul(&xp));
        xp = xp.mul(x);
    }
    acc.mul(&Rational::from_int(dim as i64))
}

/// `e_{D-1} = e(R)` and `e_i = 0` for `dim R/I <= i <= D-2`.
fn check_ra_shape<F: Field>(ideal: &GradedIdeal<F>, values: &[i64]) -> Result<()> {
    let ring = ideal.ring();
    let dim = values.len();
    let (rel_dim, _) = crate::hilbert::dim_and_degree(ideal);
    if values[dim - 1] != ring.degree() as i64 {
        return Err(Error::Internal(format!(
            "top RA-multiplicity {} differs from e(R) = {}",
            values[dim - 1],
            ring.degree()
        )));
    }
    for (i, v) in values.iter().enumerate().take(dim - 1).skip(rel_dim) {
        if *v != 0 {
            return Err(Error::Internal(format!(
                "RA-multiplicity e_{i} = {v} should vanish since dim R/I = {rel_dim}"
            )));
        }
    }
    Ok(())
}

fn mixed_checked<F: Field>(ideal: &GradedIdeal<F>, ra: &RAMultiplicities, beta: u32) -> Result<MixedMultiplicities> {
    let ring = ideal.ring();
    let dim = ring.dim();
    let mixed = mixed_from_ra(&ra.values, beta);
    let values = mixed
        .iter()
        .map(|v| to_i64(v, "mixed multiplicity"))
        .collect::<Result<Vec<_>>>()?;
    let back = ra_from_mixed(&values, beta);
    if back.iter().zip(&ra.values).any(|(a, b)| *a != BigInt::from(*b)) {
        return Err(Error::Internal("mixed/RA conversion does not round-trip".into()));
    }
    let (rel_dim, _) = crate::hilbert::dim_and_degree(ideal);
    let er = BigInt::from(ring.degree());
    for (j, v) in values.iter().enumerate().take(dim.saturating_sub(rel_dim)) {
        if BigInt::from(*v) != BigInt::from(beta).pow(j as u32) * &er {
            return Err(Error::Internal(format!(
                "mixed multiplicity e_{j} = {v} differs from beta^{j} e(R)"
            )));
        }
    }
    Ok(MixedMultiplicities { beta, values })
}

/// Mixed multiplicities from already computed RA-multiplicities.
pub fn mixed_from_ra_checked<F: Field>(
    ideal: &GradedIdeal<F>,
    ra: &RAMultiplicities,
    beta: u32,
) -> Result<MixedMultiplicities> {
    mixed_checked(ideal, ra, beta)
}

fn max_gen_degree_checked<F: Field>(ideal: &GradedIdeal<F>) -> Result<u32> {
    if ideal.is_zero() {
        return Err(Error::Precondition("the ideal is zero".into()));
    }
    max_gen_degree(ideal)
}

fn density_from<F: Field>(
    ideal: &GradedIdeal<F>,
    power: &GradedIdeal<F>,
    sat: &GradedIdeal<F>,
    n: u32,
    x: &Rational,
) -> Result<DensitySample> {
    if n == 0 {
        return Err(Error::Precondition("density level n must be positive".into()));
    }
    if x.signum() < 0 {
        return Err(Error::Precondition("density abscissa must be nonnegative".into()));
    }
    let m = x
        .mul(&Rational::from_int(n as i64))
        .floor()
        .to_u32()
        .ok_or_else(|| Error::Precondition("degree floor(x n) is too large".into()))?;
    let dim = ideal.ring().dim();
    let mut fact = BigInt::one();
    for k in 2..=dim {
        fact *= k;
    }
    let scale = Rational::from_bigs(fact, BigInt::from(n).pow(dim as u32 - 1));
    let adic = graded_piece_length(power, 1, m);
    let saturated = graded_piece_length(sat, 1, m);
    Ok(DensitySample {
        n,
        x: x.clone(),
        adic_value: Rational::from_int(adic as i64).mul(&scale),
        saturated_value: Rational::from_int(saturated as i64).mul(&scale),
    })
}

fn encode_kernel<F: Field>(kernel: &GradedIdeal<F>) -> String {
    let names = kernel.ring().names();
    let field = kernel.field();
    let lines: Vec<String> = kernel
        .gb()
        .elements()
        .iter()
        .map(|g| g.display(names, field))
        .collect();
    format!("{}\n{}", names.len(), lines.join("\n"))
}

fn decode_kernel<F: Field>(
    payload: &str,
    symbols: &[String],
    field: &F,
) -> Result<(Arc<RingSpec<F>>, GradedIdeal<F>)> {
    let mut lines = payload.lines();
    let count: usize = lines
        .next()
        .and_then(|l| l.parse().ok())
        .ok_or_else(|| Error::Internal("malformed cached presentation".into()))?;
    if count != symbols.len() {
        return Err(Error::Internal("cached presentation has the wrong arity".into()));
    }
    let gens = lines
        .filter(|l| !l.is_empty())
        .map(|l| parse_polynomial(l, symbols, field))
        .collect::<Result<Vec<Polynomial<F>>>>()?;
    let target = RingSpec::new(field.clone(), symbols.to_vec(), Vec::new())?;
    let ideal = GradedIdeal::new(target.clone(), gens)?;
    Ok((target, ideal))
}

/// `e(R[It]_{Δ(c,1)})` with a throwaway engine.
pub fn diagonal_degree<F: Field>(ideal: &GradedIdeal<F>, c: u32) -> Result<DiagonalDegree> {
    Engine::new().diagonal_degree(ideal, c)
}

pub fn ra_multiplicities<F: Field>(ideal: &GradedIdeal<F>) -> Result<RAMultiplicities> {
    Engine::new().ra_multiplicities(ideal)
}

pub fn mixed_multiplicities<F: Field>(ideal: &GradedIdeal<F>, beta: u32) -> Result<MixedMultiplicities> {
    Engine::new().mixed_multiplicities(ideal, beta)
}

pub fn epsilon_difference<F: Field>(i: &GradedIdeal<F>, j: &GradedIdeal<F>, c: u32) -> Result<i64> {
    Engine::new().epsilon_difference(i, j, c)
}

pub fn density_sample<F: Field>(ideal: &GradedIdeal<F>, n: u32, x: &Rational) -> Result<DensitySample> {
    Engine::new().density_sample(ideal, n, x)
}

pub fn asymptotic_density_at<F: Field>(ideal: &GradedIdeal<F>, x: &Rational) -> Result<Rational> {
    Engine::new().asymptotic_density_at(ideal, x)
}

/// Apply `f` to every item, one thread per item where threads exist.
pub(crate) fn par_map<T: Send, R: Send>(items: Vec<T>, f: impl Fn(T) -> R + Sync) -> Vec<R> {
    if cfg!(target_arch = "wasm32") || items.len() < 2 {
        return items.into_iter().map(f).collect();
    }
    let f = &f;
    std::thread::scope(|s| {
        let handles: Vec<_> = items.into_iter().map(|x| s.spawn(move || f(x))).collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::io::parse::parse_problem;
    use proptest::prelude::*;

    fn ideal(ring: &[&str], gens: &str) -> GradedIdeal<Rationals> {
        let text = format!("ring Q[{}]; I = ({gens});", ring.join(","));
        let p = parse_problem(&text).unwrap().instantiate(Rationals).unwrap();
        p.ideal("I").unwrap().clone()
    }

    // l((I^n)_m) for I = (X^2, XY^2) in Q[X,Y]: I^n = X^n (X, Y^2)^n, so the
    // piece is zero below 2n and equals m - n + 1 from 3n on; in between it
    // counts X^n * monomials of degree m-n in (X,Y^2)^n.
    fn plane_i_length(n: u64, m: u64) -> u64 {
        if m < 2 * n {
            return 0;
        }
        // monomials X^a Y^b, a + b = m - n, in (X, Y^2)^n: a + floor(b/2) >= n
        let k = m - n;
        (0..=k).filter(|&a| a + (k - a) / 2 >= n).count() as u64
    }

    #[test]
    fn closed_form_oracle_matches_linear_algebra() {
        let i = ideal(&["X", "Y"], "X^2, X*Y^2");
        for n in 1..=3u32 {
            for m in 0..=4 * n {
                assert_eq!(graded_piece_length(&i, n, m) as u64, plane_i_length(n as u64, m as u64));
            }
        }
    }

    #[test]
    fn diagonal_degrees_of_small_ideals() {
        let x = ideal(&["x", "y"], "x");
        assert_eq!(diagonal_degree(&x, 2).unwrap().value, 1);
        assert_eq!(diagonal_degree(&x, 5).unwrap().value, 4);
        assert!(diagonal_degree(&x, 1).is_err());
        let i = ideal(&["X", "Y"], "X^2, X*Y^2");
        assert_eq!(diagonal_degree(&i, 4).unwrap().value, 3);
        let j = ideal(&["X", "Y"], "X^2, X*Y");
        assert_eq!(diagonal_degree(&j, 4).unwrap().value, 3);
    }

    #[test]
    fn fiber_pieces_match_lengths() {
        let i = ideal(&["X", "Y"], "X^2, X*Y^2");
        let eng = Engine::new();
        let fc = eng.fiber_cone(&i, 4).unwrap();
        for n in 1..=4u32 {
            assert_eq!(fc.piece_length(n), BigInt::from(graded_piece_length(&i, n, 4 * n)));
        }
    }

    #[test]
    fn ra_and_mixed_for_the_plane() {
        let i = ideal(&["X", "Y"], "X^2, X*Y^2");
        let ra = ra_multiplicities(&i).unwrap();
        assert_eq!(ra.values, vec![-1, 1]);
        let eng = Engine::new();
        assert_eq!(eng.ra_multiplicities_from(&i, 5).unwrap().values, ra.values);
        let x = ideal(&["x", "y"], "x");
        assert_eq!(ra_multiplicities(&x).unwrap().values, vec![-1, 1]);
        let mixed = mixed_multiplicities(&i, 3).unwrap();
        // e_0 = e(R), e_1 = e_0(RA) + beta e_1(RA) = -1 + 3
        assert_eq!(mixed.values, vec![1, 2]);
        assert!(mixed_multiplicities(&i, 2).is_err());
    }

    #[test]
    fn s_extension() {
        let i = ideal(&["X", "Y"], "X^2, X*Y^2");
        let ext = extend_to_s(i.ring(), &[&i]).unwrap();
        assert_eq!(ext.ring.names(), ["X", "Y", "T"]);
        assert_eq!(ext.ring.dim(), 3);
        assert!(ext.note.is_none());
        let si = &ext.ideals[0];
        assert_eq!(max_gen_degree(si).unwrap(), 3);
        assert_eq!(graded_piece_length(si, 1, 4), 8);
        for n in 1..=2u32 {
            let c = 4;
            let direct = graded_piece_length(si, n, c * n);
            let summed: usize = (0..=c * n).map(|m| graded_piece_length(&i, n, m)).sum();
            assert_eq!(direct, summed);
        }
        let t = ideal(&["T", "U"], "T");
        let ext = extend_to_s(t.ring(), &[&t]).unwrap();
        assert_eq!(ext.variable, "T1");
        assert!(ext.note.is_some());
    }

    #[test]
    fn extended_ra_matches_direct_interpolation() {
        let eng = Engine::new();
        for gens in ["X^2, X*Y^2", "X^2, X*Y", "X^3, X*Y^2"] {
            let i = ideal(&["X", "Y"], gens);
            let ra = eng.ra_multiplicities(&i).unwrap();
            let ext = extend_to_s(i.ring(), &[&i]).unwrap();
            let d = max_gen_degree(&i).unwrap();
            let short = eng.extended_ra_multiplicities(&ra, &ext.ideals[0], d + 1).unwrap();
            let direct = eng.ra_multiplicities(&ext.ideals[0]).unwrap();
            assert_eq!(short.values, direct.values, "{gens}");
            assert_eq!(&short.values[1..], &ra.values[..]);
        }
    }

    #[test]
    fn epsilon_difference_of_plane_pair() {
        let i = ideal(&["X", "Y"], "X^2, X*Y^2");
        let p = parse_problem("ring Q[X,Y]; I = (X^2, X*Y^2); J = (X^2, X*Y);")
            .unwrap()
            .instantiate(Rationals)
            .unwrap();
        let (pi, pj) = (p.ideal("I").unwrap(), p.ideal("J").unwrap());
        assert_eq!(epsilon_difference(pi, pj, 4).unwrap(), 1);
        assert_eq!(epsilon_difference(pi, pi, 4).unwrap(), 0);
        assert!(epsilon_difference(pj, pi, 4).is_err());
        assert!(epsilon_difference(&i, &i, 3).is_err());
    }

    #[test]
    fn density_values() {
        let x = ideal(&["x", "y"], "x");
        let s = density_sample(&x, 5, &Rational::from_int(2)).unwrap();
        assert_eq!(s.adic_value, Rational::new(12, 5));
        assert!(s.adic_value <= s.saturated_value);
        let s = density_sample(&x, 3, &Rational::new(1, 2)).unwrap();
        assert!(s.adic_value.is_zero());
        let i = ideal(&["X", "Y"], "X^2, X*Y^2");
        let s = density_sample(&i, 2, &Rational::from_int(3)).unwrap();
        assert_eq!(s.adic_value, Rational::from_int(5));
        // saturation (X^2) in degree 6: 5 monomials X^2 * (deg 4)
        assert_eq!(s.saturated_value, Rational::from_int(5));
        let s = density_sample(&i, 2, &Rational::from_int(2)).unwrap();
        assert_eq!(s.adic_value, Rational::from_int(1));
        assert_eq!(s.saturated_value, Rational::from_int(3));
    }

    #[test]
    fn asymptotic_density() {
        let x = ideal(&["x", "y"], "x");
        assert_eq!(asymptotic_density_at(&x, &Rational::from_int(3)).unwrap(), Rational::from_int(4));
        let i = ideal(&["X", "Y"], "X^2, X*Y^2");
        assert_eq!(asymptotic_density_at(&i, &Rational::from_int(4)).unwrap(), Rational::from_int(6));
        assert!(asymptotic_density_at(&i, &Rational::from_int(2)).is_err());
    }

    #[test]
    fn cached_presentations_are_reused() {
        let dir = tempfile::tempdir().unwrap();
        let i = ideal(&["X", "Y"], "X^2, X*Y^2");
        let first = Engine::with_cache(Cache::open(dir.path()).unwrap());
        let a = first.ra_multiplicities(&i).unwrap();
        assert_eq!(first.stats().cache_misses, 2);
        let second = Engine::with_cache(Cache::open(dir.path()).unwrap());
        assert_eq!(second.ra_multiplicities(&i).unwrap(), a);
        assert_eq!(second.stats().cache_hits, 2);
        let check = Engine::with_cache(Cache::open(dir.path()).unwrap().with_validation(true));
        assert_eq!(check.ra_multiplicities(&i).unwrap(), a);
        assert_eq!(check.cache().unwrap().counters().validated, 2);
    }

    proptest! {
        #[test]
        fn conversions_round_trip(ra in prop::collection::vec(-50i64..50, 1..5), beta in 1u32..6) {
            let mixed: Vec<i64> = mixed_from_ra(&ra, beta).iter().map(|v| v.to_i64().unwrap()).collect();
            let back: Vec<i64> = ra_from_mixed(&mixed, beta).iter().map(|v| v.to_i64().unwrap()).collect();
            prop_assert_eq!(back, ra);
        }
    }
}
