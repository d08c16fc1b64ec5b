//! Report rendering. Every float leaves the program with 9 significant digits.

use cohbound_core::BoundReport;
use serde_json::Value;

use crate::SweepRow;

pub fn round9(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.8e}").parse().expect("formatted float parses")
}

pub fn fmt9(x: f64) -> String {
    let r = round9(x);
    let a = r.abs();
    if a != 0.0 && !(1e-4..1e9).contains(&a) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().and_then(|x| serde_json::Number::from_f64(round9(x))) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

pub fn render_json(mut v: Value) -> String {
    round_value(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("values are serializable");
    s.push('\n');
    s
}

fn csv_string(write: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> csv::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    write(&mut w)?;
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn sweep_csv(rows: &[SweepRow]) -> csv::Result<String> {
    csv_string(|w| {
        w.write_record(["eps_bar", "floor_baseline", "floor_thm1", "floor_thm2"])?;
        for r in rows {
            w.write_record([r.eps_bar, r.floor_baseline, r.floor_thm1, r.floor_thm2].map(fmt9))?;
        }
        Ok(())
    })
}

pub fn bound_csv(reports: &[BoundReport]) -> csv::Result<String> {
    csv_string(|w| {
        w.write_record([
            "method",
            "eps_bar",
            "m_value",
            "fidelity_floor",
            "leading_norm",
            "series",
            "tail_bound",
            "truncation_order",
        ])?;
        for r in reports {
            w.write_record([
                r.method.as_str().to_string(),
                fmt9(r.eps_bar),
                fmt9(r.m_value),
                fmt9(r.fidelity_floor),
                fmt9(r.leading_norm),
                fmt9(r.series),
                fmt9(r.tail_bound),
                r.truncation_order.map(|p| p.to_string()).unwrap_or_default(),
            ])?;
        }
        Ok(())
    })
}
