//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export takes problem text in the `.ideal` format and returns a JSON
//! string, or an error message.

use intclosure::checker::{check_integral_closure, validate_hypotheses, CheckOptions};
use intclosure::io::parse::{parse_problem, Problem, ProblemSpec};
use intclosure::io::report::to_value;
use intclosure::mult::Engine;
use intclosure::{Error, Field, FieldSpec, PrimeField, Rational, Rationals};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

type Out = Result<String, String>;

fn finish(v: intclosure::Result<Value>) -> Out {
    v.map(|v| v.to_string()).map_err(|e| e.to_string())
}

fn with_problem(text: &str, f: impl Fn(&ProblemSpec) -> intclosure::Result<Value>) -> Out {
    finish(parse_problem(text).and_then(|spec| f(&spec)))
}

macro_rules! over_field {
    ($spec:expr, |$p:ident| $body:expr) => {
        match $spec.field {
            FieldSpec::Rationals => {
                let $p = $spec.instantiate(Rationals)?;
                $body
            }
            FieldSpec::PrimeField { p } => {
                let $p = $spec.instantiate(PrimeField::new(p)?)?;
                $body
            }
        }
    };
}

/// Decide finite colength and equality of integral closures for `I ⊆ J`.
#[wasm_bindgen]
pub fn check(problem: &str) -> Out {
    with_problem(problem, |spec| {
        if spec.field != FieldSpec::Rationals {
            return Err(Error::Precondition("verdicts are only issued over Q".into()));
        }
        let p = spec.instantiate(Rationals)?;
        let (i, j) = (p.ideal("I")?, p.ideal("J")?);
        let h = validate_hypotheses(i, j)?;
        let opts = CheckOptions {
            c: p.options.c,
            assert_domain: p.options.assert_domain,
        };
        let v = check_integral_closure(&Engine::new(), i, j, &opts)?;
        let (r, s) = v.pair().expect("check records both diagonals");
        Ok(json!({ "hypothesis": to_value(&h), "pair": [r, s], "verdict": to_value(&v) }))
    })
}

/// RA-multiplicities of one ideal of the problem.
#[wasm_bindgen]
pub fn ra_multiplicities(problem: &str, ideal: &str) -> Out {
    with_problem(problem, |spec| over_field!(spec, |p| ra_of(&p, ideal)))
}

fn ra_of<F: Field>(p: &Problem<F>, name: &str) -> intclosure::Result<Value> {
    let ra = Engine::new().ra_multiplicities(p.ideal(name)?)?;
    Ok(json!({ "ideal": name, "values": ra.values, "samples": to_value(&ra.samples) }))
}

/// Samples of the adic and saturated densities `f_n(x)` and `g_n(x)` for
/// `x = 0, step, 2 step, ..., x_to`. Values are exact fractions as strings.
#[wasm_bindgen]
pub fn density_curve(problem: &str, ideal: &str, n: u32, x_to: &str, step: &str) -> Out {
    with_problem(problem, |spec| {
        let to: Rational = x_to.parse()?;
        let step: Rational = step.parse()?;
        if step.signum() <= 0 || to.signum() < 0 {
            return Err(Error::Precondition("need step > 0 and x_to >= 0".into()));
        }
        let mut xs = Vec::new();
        let mut x = Rational::zero();
        while x <= to {
            if xs.len() == 400 {
                return Err(Error::Precondition("at most 400 sample points".into()));
            }
            xs.push(x.clone());
            x = x.add(&step);
        }
        over_field!(spec, |p| {
            let rows = Engine::new().density_row(p.ideal(ideal)?, n, &xs)?;
            let points: Vec<Value> = rows
                .iter()
                .map(|s| json!([s.x.to_string(), s.adic_value.to_string(), s.saturated_value.to_string()]))
                .collect();
            Ok(json!({ "ideal": ideal, "n": n, "points": points }))
        })
    })
}
