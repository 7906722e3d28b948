//! JSON reports. The layout is documented in `docs/report-schema.md`.
//!
//! Everything outside the `run` member is a deterministic function of the
//! problem and the command; `run` holds timing, cache counters and warnings.

use std::time::Duration;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::mult::Engine;

pub const SCHEMA_VERSION: u32 = 1;

/// Assemble a report document.
pub fn build_report(command: &str, problem: &str, result: Value, engine: &Engine, elapsed: Duration) -> Value {
    let st = engine.stats();
    let cache = match engine.cache() {
        Some(c) => {
            let k = c.counters();
            json!({
                "enabled": true,
                "validating": c.validating(),
                "hits": k.hits,
                "misses": k.misses,
                "discarded": k.discarded,
                "validated": k.validated,
            })
        }
        None => json!({ "enabled": false }),
    };
    let warnings = engine.cache().map(|c| c.warnings()).unwrap_or_default();
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "problem": problem,
        "result": result,
        "stats": {
            "fiber_presentations": st.fiber_presentations,
            "max_fiber_generators": st.max_fiber_generators,
            "max_kernel_basis": st.max_kernel_basis,
            "max_coefficient_bits": st.max_coefficient_bits,
        },
        "run": {
            "elapsed_ms": elapsed.as_secs_f64() * 1000.0,
            "cache": cache,
            "warnings": warnings,
        },
    })
}

/// Serialize a value that is known to be representable.
pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

/// A copy of the report without its `run` member.
pub fn deterministic_part(report: &Value) -> Value {
    let mut v = report.clone();
    if let Some(obj) = v.as_object_mut() {
        obj.remove("run");
    }
    v
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value, String> {
    obj.get(key).ok_or_else(|| format!("missing `{key}`"))
}

fn check_witnesses(verdict: &Map<String, Value>) -> Result<(), String> {
    let ws = field(verdict, "witnesses")?.as_array().ok_or("witnesses is not a list")?;
    let mut finite = true;
    let mut all = true;
    let mut has_closure = false;
    for w in ws {
        let w = w.as_object().ok_or("witness is not an object")?;
        let same = field(w, "i_values")? == field(w, "j_values")?;
        if field(w, "equal")?.as_bool() != Some(same) {
            return Err(format!("witness {:?} has a wrong `equal` flag", w.get("label")));
        }
        match field(w, "decides")?.as_str() {
            Some("finite_colength") => finite &= same,
            Some("closures_equal") => has_closure = true,
            _ => return Err("unknown `decides` tag".into()),
        }
        all &= same;
    }
    if field(verdict, "finite_colength")?.as_bool() != Some(finite) {
        return Err("finite_colength does not follow from the witnesses".into());
    }
    let closes = field(verdict, "closures_equal")?;
    let expected = if has_closure { Value::Bool(all) } else { Value::Null };
    if *closes != expected {
        return Err("closures_equal does not follow from the witnesses".into());
    }
    Ok(())
}

fn check_mixed(mixed: &Map<String, Value>) -> Result<(), String> {
    let mut sharp = true;
    let mut full = true;
    for table in ["r_table", "s_table"] {
        for row in field(mixed, table)?.as_array().ok_or("table is not a list")? {
            let row = row.as_object().ok_or("row is not an object")?;
            let same = field(row, "i_value")? == field(row, "j_value")?;
            if field(row, "equal")?.as_bool() != Some(same) {
                return Err(format!("{table} row has a wrong `equal` flag"));
            }
            full &= same;
            if field(row, "forced")?.as_bool() != Some(true) {
                sharp &= same;
            }
        }
    }
    if field(mixed, "sharp_verdict")?.as_bool() != Some(sharp) || field(mixed, "full_verdict")?.as_bool() != Some(full) {
        return Err("mixed verdicts do not follow from the tables".into());
    }
    Ok(())
}

/// Re-derive every boolean in a report from the integers it contains.
pub fn verify_report(report: &Value) -> Result<(), String> {
    let obj = report.as_object().ok_or("report is not an object")?;
    if field(obj, "schema_version")?.as_u64() != Some(SCHEMA_VERSION as u64) {
        return Err("unsupported schema version".into());
    }
    let result = field(obj, "result")?.as_object().ok_or("result is not an object")?;
    if let Some(v) = result.get("verdict") {
        check_witnesses(v.as_object().ok_or("verdict is not an object")?)?;
    }
    if let Some(pair) = result.get("pair") {
        let v = field(result, "verdict")?;
        let ws = v["witnesses"].as_array().ok_or("witnesses is not a list")?;
        let eq = |ring: &str| ws.iter().find(|w| w["ring"] == ring).map(|w| w["equal"].clone());
        if Some(&pair[0]) != eq("R").as_ref() || Some(&pair[1]) != eq("S").as_ref() {
            return Err("pair does not follow from the witnesses".into());
        }
    }
    if let Some(m) = result.get("mixed") {
        check_mixed(m.as_object().ok_or("mixed is not an object")?)?;
    }
    if let Some(oracle) = result.get("oracle") {
        let result = oracle.as_object().ok_or("oracle is not an object")?;
        let checks = field(result, "checks")?;
        let mut all = true;
        for c in checks.as_array().ok_or("checks is not a list")? {
            let c = c.as_object().ok_or("check is not an object")?;
            let same = field(c, "fiber")? == field(c, "length")?;
            if field(c, "equal")?.as_bool() != Some(same) {
                return Err("oracle row has a wrong `equal` flag".into());
            }
            all &= same;
        }
        if field(result, "all_equal")?.as_bool() != Some(all) {
            return Err("all_equal does not follow from the rows".into());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::{check_integral_closure, mixed_report, CheckOptions};
    use crate::field::Rationals;
    use crate::io::parse::parse_problem;

    #[test]
    fn reports_verify_and_tampering_is_caught() {
        let spec = parse_problem("ring Q[X,Y]; I = (X^2, X*Y^2); J = (X^2, X*Y);").unwrap();
        let p = spec.instantiate(Rationals).unwrap();
        let (i, j) = (p.ideal("I").unwrap(), p.ideal("J").unwrap());
        let eng = Engine::new();
        let v = check_integral_closure(&eng, i, j, &CheckOptions::default()).unwrap();
        let m = mixed_report(&eng, i, j, &CheckOptions::default()).unwrap();
        let result = json!({ "verdict": to_value(&v), "mixed": to_value(&m) });
        let r = build_report("check", &spec.to_canonical_string(), result, &eng, Duration::from_millis(3));
        verify_report(&r).unwrap();
        assert!(deterministic_part(&r).get("run").is_none());

        let mut bad = r.clone();
        bad["result"]["verdict"]["witnesses"][1]["j_values"] = json!([7]);
        assert!(verify_report(&bad).is_err());
        let mut bad = r.clone();
        bad["result"]["verdict"]["closures_equal"] = json!(true);
        assert!(verify_report(&bad).is_err());
        let mut bad = r;
        bad["result"]["mixed"]["s_table"][2]["equal"] = json!(true);
        assert!(verify_report(&bad).is_err());
    }
}
