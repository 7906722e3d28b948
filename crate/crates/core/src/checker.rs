//! Decision procedures for integral dependence of a pair `I ⊆ J`.
//!
//! Every verdict carries the integers it was decided from, so a reader can
//! re-derive the booleans with [`Verdict::rederive`].

use serde::Serialize;

use crate::error::{Error, HypothesisError, Result};
use crate::field::Field;
use crate::gb::{intersect, max_gen_degree, maximal_ideal_power, min_gens, truncate};
use crate::hilbert::dim_and_degree;
use crate::mult::{diagonal_from_ra, extend_to_s, mixed_from_ra_checked, par_map, Engine};
use crate::ring::GradedIdeal;

pub const CRITERION_R_DIAGONAL: &str = "equal diagonal degrees in R (finite colength of closures)";
pub const CRITERION_S_DIAGONAL: &str = "equal diagonal degrees in S = R[T] (equal closures)";
pub const CRITERION_EQUIGENERATED: &str =
    "equigenerated ideals: equal generating degree and equal RA-multiplicities below dim R/I";
pub const CRITERION_MIXED: &str = "equal mixed multiplicities of the truncations in R and in S";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub dim_r: usize,
    pub height_i: usize,
    pub height_j: usize,
    pub d_i: u32,
    pub d_j: u32,
    /// `max(d(I), d(J))`.
    pub d_bold: u32,
    pub containment_ok: bool,
}

#[derive(Clone, Debug, Default)]
pub struct CheckOptions {
    /// Slope override; must exceed `max(d(I), d(J))`.
    pub c: Option<u32>,
    /// The user vouches that `R` is a domain.
    pub assert_domain: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decides {
    FiniteColength,
    ClosuresEqual,
}

/// One comparison between a value attached to `I` and one attached to `J`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub label: String,
    pub ring: String,
    pub c: Option<u32>,
    pub i_values: Vec<i64>,
    pub j_values: Vec<i64>,
    pub equal: bool,
    pub decides: Decides,
}

impl Witness {
    fn new(label: &str, ring: &str, c: Option<u32>, i: Vec<i64>, j: Vec<i64>, decides: Decides) -> Self {
        let equal = i == j;
        Witness {
            label: label.into(),
            ring: ring.into(),
            c,
            i_values: i,
            j_values: j,
            equal,
            decides,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub finite_colength: bool,
    pub closures_equal: Option<bool>,
    pub witnesses: Vec<Witness>,
    pub c_used: u32,
    pub criteria_cited: Vec<String>,
    pub assumptions: Vec<String>,
}

impl Verdict {
    /// Recompute both booleans from the witnesses alone.
    pub fn rederive(&self) -> (bool, Option<bool>) {
        let finite = self
            .witnesses
            .iter()
            .filter(|w| w.decides == Decides::FiniteColength)
            .all(|w| w.i_values == w.j_values);
        let closes = self
            .witnesses
            .iter()
            .any(|w| w.decides == Decides::ClosuresEqual)
            .then(|| self.witnesses.iter().all(|w| w.i_values == w.j_values));
        (finite, closes)
    }

    /// The two-component output `(R-diagonal equality, S-diagonal equality)`.
    pub fn pair(&self) -> Option<(bool, bool)> {
        let find = |ring: &str| self.witnesses.iter().find(|w| w.ring == ring && w.label.starts_with("diagonal"));
        Some((find("R")?.equal, find("S")?.equal))
    }

    fn assemble(witnesses: Vec<Witness>, c: u32, criteria: &[&str], opts: &CheckOptions, ring_is_free: bool) -> Result<Self> {
        let mut v = Verdict {
            finite_colength: false,
            closures_equal: None,
            witnesses,
            c_used: c,
            criteria_cited: criteria.iter().map(|s| s.to_string()).collect(),
            assumptions: assumptions(opts, ring_is_free),
        };
        let (f, e) = v.rederive();
        if e == Some(true) && !f {
            return Err(Error::Internal(
                "closures reported equal although the finite-colength witnesses differ".into(),
            ));
        }
        v.finite_colength = f;
        v.closures_equal = e;
        Ok(v)
    }
}

fn assumptions(opts: &CheckOptions, ring_is_free: bool) -> Vec<String> {
    let domain = if ring_is_free {
        "R is a polynomial ring, hence a domain"
    } else {
        debug_assert!(opts.assert_domain);
        "R is a domain: asserted by the user"
    };
    vec![domain.to_string()]
}

/// Check the standing assumptions `dim R >= 2`, `0 < height I <= height J < dim R`
/// and `I ⊆ J`.
pub fn validate_hypotheses<F: Field>(i: &GradedIdeal<F>, j: &GradedIdeal<F>) -> Result<HypothesisReport> {
    if !std::sync::Arc::ptr_eq(i.ring(), j.ring()) && i.ring().canonical() != j.ring().canonical() {
        return Err(HypothesisError::RingMismatch("I".into(), "J".into()).into());
    }
    let ring = i.ring();
    let dim = ring.dim();
    if dim < 2 {
        return Err(HypothesisError::DimensionTooSmall { dim }.into());
    }
    let height = |name: &str, ideal: &GradedIdeal<F>| -> Result<usize> {
        if ideal.is_zero() {
            return Err(HypothesisError::HeightZero { ideal: name.into() }.into());
        }
        let h = dim - dim_and_degree(ideal).0.min(dim);
        if h == 0 {
            return Err(HypothesisError::HeightZero { ideal: name.into() }.into());
        }
        if h >= dim {
            return Err(HypothesisError::HeightNotBelowDim { ideal: name.into(), height: h, dim }.into());
        }
        Ok(h)
    };
    let height_i = height("I", i)?;
    let height_j = height("J", j)?;
    if height_i > height_j {
        return Err(HypothesisError::HeightOrder { height_i, height_j }.into());
    }
    if let Some(g) = i.generators().iter().find(|g| !j.contains(g)) {
        return Err(HypothesisError::NotContained { generator: ring.display(g) }.into());
    }
    let d_i = max_gen_degree(i)?;
    let d_j = max_gen_degree(j)?;
    Ok(HypothesisReport {
        dim_r: dim,
        height_i,
        height_j,
        d_i,
        d_j,
        d_bold: d_i.max(d_j),
        containment_ok: true,
    })
}

fn require_domain<F: Field>(i: &GradedIdeal<F>, opts: &CheckOptions) -> Result<()> {
    if i.ring().is_polynomial_ring() || opts.assert_domain {
        Ok(())
    } else {
        Err(HypothesisError::DomainNotAsserted.into())
    }
}

fn slope(h: &HypothesisReport, opts: &CheckOptions) -> Result<u32> {
    match opts.c {
        None => Ok(h.d_bold + 1),
        Some(c) if c > h.d_bold => Ok(c),
        Some(c) => Err(Error::Precondition(format!(
            "c = {c} must exceed max(d(I), d(J)) = {}",
            h.d_bold
        ))),
    }
}

/// `⟨I_t⟩`, cross-checked against `I ∩ 𝐦^t`.
fn truncation<F: Field>(ideal: &GradedIdeal<F>, t: u32) -> Result<GradedIdeal<F>> {
    let tr = truncate(ideal, t);
    let cap = intersect(ideal, &maximal_ideal_power(ideal.ring(), t))?;
    if !tr.same_ideal(&cap) {
        return Err(Error::Internal("truncation differs from intersection with a power of m".into()));
    }
    Ok(tr)
}

/// Compare the `(c,1)`-diagonal degrees of `I` and `J` in `R`.
pub fn check_finite_colength<F: Field>(
    engine: &Engine,
    i: &GradedIdeal<F>,
    j: &GradedIdeal<F>,
    opts: &CheckOptions,
) -> Result<Verdict> {
    require_domain(i, opts)?;
    let h = validate_hypotheses(i, j)?;
    let c = slope(&h, opts)?;
    let r = engine.diagonal_degrees(&[(i, c), (j, c)])?;
    let w = Witness::new(
        "diagonal degree",
        "R",
        Some(c),
        vec![r[0].value as i64],
        vec![r[1].value as i64],
        Decides::FiniteColength,
    );
    Verdict::assemble(vec![w], c, &[CRITERION_R_DIAGONAL], opts, i.ring().is_polynomial_ring())
}

/// Decide `Ī = J̄` from the diagonal degrees of `I, J` in `R` and of their
/// extensions to `S = R[T]`.
pub fn check_integral_closure<F: Field>(
    engine: &Engine,
    i: &GradedIdeal<F>,
    j: &GradedIdeal<F>,
    opts: &CheckOptions,
) -> Result<Verdict> {
    require_domain(i, opts)?;
    let h = validate_hypotheses(i, j)?;
    let c = slope(&h, opts)?;
    let ext = extend_to_s(i.ring(), &[i, j])?;
    let (si, sj) = (&ext.ideals[0], &ext.ideals[1]);
    let r = engine.diagonal_degrees(&[(i, c), (j, c), (si, c), (sj, c)])?;
    let ws = vec![
        Witness::new(
            "diagonal degree",
            "R",
            Some(c),
            vec![r[0].value as i64],
            vec![r[1].value as i64],
            Decides::FiniteColength,
        ),
        Witness::new(
            "diagonal degree",
            "S",
            Some(c),
            vec![r[2].value as i64],
            vec![r[3].value as i64],
            Decides::ClosuresEqual,
        ),
    ];
    let mut v = Verdict::assemble(
        ws,
        c,
        &[CRITERION_R_DIAGONAL, CRITERION_S_DIAGONAL],
        opts,
        i.ring().is_polynomial_ring(),
    )?;
    if let Some(note) = ext.note {
        v.assumptions.push(note);
    }
    Ok(v)
}

fn equigenerated_degree<F: Field>(name: &str, ideal: &GradedIdeal<F>) -> Result<u32> {
    let gens = min_gens(ideal)?;
    let first = gens.first().and_then(|g| g.homogeneous_degree());
    match first {
        Some(d) if gens.iter().all(|g| g.homogeneous_degree() == Some(d)) => Ok(d),
        _ => Err(HypothesisError::NotEquigenerated { ideal: name.into() }.into()),
    }
}

/// The shortcut for ideals generated in a single degree each: closures agree
/// iff `d(I) = d(J)` and the RA-multiplicities agree for `i < dim R/I`.
/// No extension ring is needed.
pub fn check_equigenerated<F: Field>(
    engine: &Engine,
    i: &GradedIdeal<F>,
    j: &GradedIdeal<F>,
    opts: &CheckOptions,
) -> Result<Verdict> {
    require_domain(i, opts)?;
    let h = validate_hypotheses(i, j)?;
    let di = equigenerated_degree("I", i)?;
    let dj = equigenerated_degree("J", j)?;
    let c = slope(&h, opts)?;
    let ring_is_free = i.ring().is_polynomial_ring();
    let degree_w = Witness::new(
        "generating degree",
        "R",
        None,
        vec![di as i64],
        vec![dj as i64],
        Decides::ClosuresEqual,
    );
    if di != dj {
        let r = engine.diagonal_degrees(&[(i, c), (j, c)])?;
        let w = Witness::new(
            "diagonal degree",
            "R",
            Some(c),
            vec![r[0].value as i64],
            vec![r[1].value as i64],
            Decides::FiniteColength,
        );
        return Verdict::assemble(vec![w, degree_w], c, &[CRITERION_R_DIAGONAL, CRITERION_EQUIGENERATED], opts, ring_is_free);
    }
    let rel = h.dim_r - h.height_i;
    let mut ras = par_map(vec![i, j], |x| engine.ra_multiplicities(x)).into_iter();
    let (ra_i, ra_j) = (ras.next().unwrap()?, ras.next().unwrap()?);
    let diag = |v: &[i64]| -> Result<i64> {
        i64::try_from(diagonal_from_ra(v, c as i64)).map_err(|_| Error::Internal("diagonal degree overflow".into()))
    };
    let ws = vec![
        Witness::new(
            "diagonal degree",
            "R",
            Some(c),
            vec![diag(&ra_i.values)?],
            vec![diag(&ra_j.values)?],
            Decides::FiniteColength,
        ),
        degree_w,
        Witness::new(
            "RA-multiplicities below dim R/I",
            "R",
            None,
            ra_i.values[..rel].to_vec(),
            ra_j.values[..rel].to_vec(),
            Decides::ClosuresEqual,
        ),
    ];
    Verdict::assemble(ws, c, &[CRITERION_R_DIAGONAL, CRITERION_EQUIGENERATED], opts, ring_is_free)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MixedRow {
    pub index: usize,
    pub i_value: i64,
    pub j_value: i64,
    pub equal: bool,
    /// Outside the decisive index range; both sides equal `beta^index e(R)`.
    pub forced: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MixedReport {
    pub beta: u32,
    pub r_table: Vec<MixedRow>,
    pub s_table: Vec<MixedRow>,
    /// Verdict from the unforced entries only.
    pub sharp_verdict: bool,
    /// Verdict from every entry.
    pub full_verdict: bool,
    pub assumptions: Vec<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MixedRange {
    #[default]
    Sharp,
    Full,
}

impl MixedReport {
    pub fn verdict(&self, range: MixedRange) -> bool {
        match range {
            MixedRange::Sharp => self.sharp_verdict,
            MixedRange::Full => self.full_verdict,
        }
    }
}

fn mixed_table(iv: &[i64], jv: &[i64], forced_below: usize) -> Result<Vec<MixedRow>> {
    let rows: Vec<MixedRow> = iv
        .iter()
        .zip(jv)
        .enumerate()
        .map(|(k, (&a, &b))| MixedRow {
            index: k,
            i_value: a,
            j_value: b,
            equal: a == b,
            forced: k < forced_below,
        })
        .collect();
    if rows.iter().any(|r| r.forced && !r.equal) {
        return Err(Error::Internal("a forced mixed multiplicity differs between I and J".into()));
    }
    Ok(rows)
}

/// Mixed multiplicities of `⟨I_𝐝⟩` and `⟨J_𝐝⟩` in `R` (indices `0..D`) and
/// of their extensions in `S` (indices `0..=D`).
pub fn mixed_report<F: Field>(
    engine: &Engine,
    i: &GradedIdeal<F>,
    j: &GradedIdeal<F>,
    opts: &CheckOptions,
) -> Result<MixedReport> {
    require_domain(i, opts)?;
    let h = validate_hypotheses(i, j)?;
    let beta = h.d_bold;
    // Above beta the diagonal degrees of a truncation and of the ideal agree,
    // so the RA-multiplicities are read off the ideals themselves.
    let it = truncation(i, beta)?;
    let jt = truncation(j, beta)?;
    let ext = extend_to_s(i.ring(), &[i, j])?;
    let sit = truncation(&ext.ideals[0], beta)?;
    let sjt = truncation(&ext.ideals[1], beta)?;
    let ideals = [&it, &jt, &sit, &sjt];
    let ras = par_map(vec![(i, &ext.ideals[0]), (j, &ext.ideals[1])], |(x, sx)| {
        let ra = engine.ra_multiplicities_from(x, beta + 1)?;
        let sra = engine.extended_ra_multiplicities(&ra, sx, beta + 1)?;
        Ok::<_, Error>([ra, sra])
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let [ra_i, sra_i] = ras[0].clone();
    let [ra_j, sra_j] = ras[1].clone();
    let ras = [ra_i, ra_j, sra_i, sra_j];
    let mixed = ideals
        .iter()
        .zip(&ras)
        .map(|(x, ra)| mixed_from_ra_checked(x, ra, beta))
        .collect::<Result<Vec<_>>>()?;
    let rel = h.dim_r - h.height_i;
    let forced = h.dim_r - rel;
    let r_table = mixed_table(&mixed[0].values, &mixed[1].values, forced)?;
    let s_table = mixed_table(&mixed[2].values, &mixed[3].values, forced)?;
    let all = r_table.iter().chain(&s_table);
    let sharp_verdict = all.clone().filter(|r| !r.forced).all(|r| r.equal);
    let full_verdict = all.clone().all(|r| r.equal);
    let mut assumptions = assumptions(opts, i.ring().is_polynomial_ring());
    assumptions.extend(ext.note);
    Ok(MixedReport {
        beta,
        r_table,
        s_table,
        sharp_verdict,
        full_verdict,
        assumptions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::io::parse::parse_problem;

    fn pair(text: &str) -> (GradedIdeal<Rationals>, GradedIdeal<Rationals>) {
        let p = parse_problem(text).unwrap().instantiate(Rationals).unwrap();
        (p.ideal("I").unwrap().clone(), p.ideal("J").unwrap().clone())
    }

    const PLANE: &str = "ring Q[X,Y]; I = (X^2, X*Y^2); J = (X^2, X*Y);";

    #[test]
    fn hypotheses_of_the_plane_pair() {
        let (i, j) = pair(PLANE);
        let h = validate_hypotheses(&i, &j).unwrap();
        assert_eq!((h.dim_r, h.height_i, h.height_j, h.d_i, h.d_j, h.d_bold), (2, 1, 1, 3, 2, 3));
        assert!(h.containment_ok);
    }

    #[test]
    fn hypothesis_violations_are_named() {
        let (i, j) = pair("ring Q[x,y]; I = (x, y); J = (x, y);");
        assert!(matches!(
            validate_hypotheses(&i, &j),
            Err(Error::Hypothesis(HypothesisError::HeightNotBelowDim { .. }))
        ));
        let (i, j) = pair("ring Q[x,y]; I = (0); J = (x);");
        assert!(matches!(
            validate_hypotheses(&i, &j),
            Err(Error::Hypothesis(HypothesisError::HeightZero { .. }))
        ));
        let (i, j) = pair("ring Q[x,y]; I = (x); J = (y);");
        assert!(matches!(
            validate_hypotheses(&i, &j),
            Err(Error::Hypothesis(HypothesisError::NotContained { .. }))
        ));
        let (i, j) = pair("ring Q[x,y,z]; I = (x); J = (x, y);");
        assert!(validate_hypotheses(&i, &j).is_ok());
        assert!(matches!(
            validate_hypotheses(&j, &i),
            Err(Error::Hypothesis(HypothesisError::HeightOrder { .. }))
        ));
        let (i, j) = pair("ring Q[x]; I = (x); J = (x);");
        assert!(matches!(
            validate_hypotheses(&i, &j),
            Err(Error::Hypothesis(HypothesisError::DimensionTooSmall { .. }))
        ));
    }

    #[test]
    fn plane_pair_verdict() {
        let (i, j) = pair(PLANE);
        let eng = Engine::new();
        let v = check_integral_closure(&eng, &i, &j, &CheckOptions::default()).unwrap();
        assert_eq!(v.pair(), Some((true, false)));
        assert_eq!(v.c_used, 4);
        assert_eq!(v.closures_equal, Some(false));
        assert!(v.finite_colength);
        let vals: Vec<i64> = v.witnesses.iter().flat_map(|w| [w.i_values[0], w.j_values[0]]).collect();
        assert_eq!(vals, vec![3, 3, 7, 8]);
        assert_eq!(v.rederive(), (v.finite_colength, v.closures_equal));

        let f = check_finite_colength(&eng, &i, &j, &CheckOptions::default()).unwrap();
        assert!(f.finite_colength);
        assert_eq!(f.closures_equal, None);

        let m = mixed_report(&eng, &i, &j, &CheckOptions::default()).unwrap();
        assert!(m.r_table.iter().all(|r| r.equal));
        assert_eq!(m.s_table.iter().map(|r| r.equal).collect::<Vec<_>>(), vec![true, true, false]);
        assert!(!m.sharp_verdict && !m.full_verdict);
    }

    #[test]
    fn quotient_rings_need_the_domain_assertion() {
        let (i, j) = pair("ring Q[x,y,z] / (x*z - y^2); I = (x^2, x*y); J = (x, y);");
        let eng = Engine::new();
        assert!(matches!(
            check_finite_colength(&eng, &i, &j, &CheckOptions::default()),
            Err(Error::Hypothesis(HypothesisError::DomainNotAsserted))
        ));
        let opts = CheckOptions { assert_domain: true, ..Default::default() };
        let v = check_finite_colength(&eng, &i, &j, &opts).unwrap();
        assert!(!v.finite_colength);
        assert_eq!(v.assumptions, vec!["R is a domain: asserted by the user".to_string()]);
    }

    #[test]
    fn reflexive_pairs_and_overrides() {
        let (i, _) = pair(PLANE);
        let eng = Engine::new();
        let v = check_integral_closure(&eng, &i, &i, &CheckOptions::default()).unwrap();
        assert_eq!(v.pair(), Some((true, true)));
        let opts = CheckOptions { c: Some(3), ..Default::default() };
        assert!(matches!(check_integral_closure(&eng, &i, &i, &opts), Err(Error::Precondition(_))));
        let (i, j) = pair(PLANE);
        let opts = CheckOptions { c: Some(5), ..Default::default() };
        assert_eq!(check_integral_closure(&eng, &i, &j, &opts).unwrap().pair(), Some((true, false)));
    }

    #[test]
    fn equigenerated_path_agrees() {
        let eng = Engine::new();
        let opts = CheckOptions::default();
        let (i, j) = pair("ring Q[x,y,z]; I = (x^2, x*y); J = (x^2, x*y, y^2);");
        let e = check_equigenerated(&eng, &i, &j, &opts).unwrap();
        let g = check_integral_closure(&eng, &i, &j, &opts).unwrap();
        assert_eq!(e.closures_equal, g.closures_equal);
        assert_eq!(e.rederive(), (e.finite_colength, e.closures_equal));
        let (i, j) = pair(PLANE);
        assert!(matches!(
            check_equigenerated(&eng, &i, &j, &opts),
            Err(Error::Hypothesis(HypothesisError::NotEquigenerated { .. }))
        ));
        let (i, j) = pair("ring Q[x,y,z]; I = (x^2); J = (x);");
        let e = check_equigenerated(&eng, &i, &j, &opts).unwrap();
        assert_eq!(e.closures_equal, Some(false));
        assert_eq!(check_integral_closure(&eng, &i, &j, &opts).unwrap().closures_equal, Some(false));
    }

    #[test]
    fn adding_an_integral_element_keeps_the_closure() {
        // (x^2 y)^2 = x^3 * x y^2, so x^2 y is integral over I
        let (i, j) = pair("ring Q[x,y]; I = (x^3, x*y^2); J = (x^3, x*y^2, x^2*y);");
        let eng = Engine::new();
        let v = check_integral_closure(&eng, &i, &j, &CheckOptions::default()).unwrap();
        assert_eq!(v.pair(), Some((true, true)));
        let m = mixed_report(&eng, &i, &j, &CheckOptions::default()).unwrap();
        assert!(m.sharp_verdict && m.full_verdict);
    }
}
