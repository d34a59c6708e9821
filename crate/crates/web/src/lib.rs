//! WebAssembly bindings for the demo page in `www/`. Every export takes
//! plain values and returns a JSON string, with `{"error": ...}` on failure.

use excmap_core::exceptional::{carlitz_wan_scan, check_gcw, CensusOptions, DecideOptions};
use excmap_core::field::gcd;
use excmap_core::group::nt_ram_battery;
use excmap_core::tame::{coprime_battery, tame_monodromy_triple};
use excmap_core::text::{format_map, parse_map};
use serde::Serialize;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest extension field the page will enumerate.
const PAGE_FIELD_CAP: u64 = 1 << 20;
const PAGE_CENSUS_CAP: u64 = 1 << 12;

fn respond<T: Serialize, E: ToString>(r: Result<T, E>) -> String {
    match r {
        Ok(v) => serde_json::to_string(&v).unwrap_or_else(|e| json!({ "error": e.to_string() }).to_string()),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

fn page_decide() -> DecideOptions {
    DecideOptions { cap: PAGE_FIELD_CAP, ..DecideOptions::default() }
}

/// Verdict, certificate and ramification profile of a map literal such as
/// `"x^3 over GF(5)"`.
#[wasm_bindgen]
pub fn classify(literal: &str) -> String {
    respond((|| -> Result<_, String> {
        let f = parse_map(literal).map_err(|e| e.to_string())?;
        let report = check_gcw(&f, &page_decide()).map_err(|e| e.to_string())?;
        Ok(json!({ "map": format_map(&f), "degree": f.degree(), "report": report }))
    })())
}

/// The four coprimality items and the triple battery for one tame model.
#[wasm_bindgen]
pub fn tame(n: u32, q: u32) -> String {
    respond((|| -> Result<_, String> {
        let (n, q) = (n as u64, q as u64);
        let coprime = coprime_battery(n, q).map_err(|e| e.to_string())?;
        let battery =
            nt_ram_battery(&tame_monodromy_triple(n, q).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        Ok(json!({ "coprime": coprime, "nt_ram": battery }))
    })())
}

/// Exceptionality of the tame model for every `n <= max_n` prime to each `q`;
/// cells with `p | n` are null.
#[wasm_bindgen]
pub fn tame_grid(max_n: u32, qs: &str) -> String {
    respond((|| -> Result<_, String> {
        let qs = qs
            .split(',')
            .map(|s| s.trim().parse::<u64>().map_err(|e| format!("{s:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        let mut rows = Vec::new();
        for &q in &qs {
            let mut cells = Vec::new();
            for n in 1..=max_n.min(64) as u64 {
                if gcd(n, q) != 1 {
                    cells.push(serde_json::Value::Null);
                    continue;
                }
                let r = coprime_battery(n, q).map_err(|e| e.to_string())?;
                cells.push(json!({ "value": r.items[0], "agree": r.agree }));
            }
            rows.push(json!({ "q": q, "cells": cells }));
        }
        Ok(json!({ "max_n": max_n.min(64), "rows": rows }))
    })())
}

/// Exceptional polynomials among the monic, constant-free ones of degree `n`.
#[wasm_bindgen]
pub fn census(q: u32, n: u32) -> String {
    respond((|| -> Result<_, String> {
        let opts = CensusOptions { decide: page_decide(), census_cap: PAGE_CENSUS_CAP, ..CensusOptions::default() };
        let r = carlitz_wan_scan(q as u64, n as usize, &opts).map_err(|e| e.to_string())?;
        let found: Vec<_> = r.exceptional().map(|row| row.poly.clone()).collect();
        Ok(json!({
            "q": q,
            "n": n,
            "total": r.total_candidates,
            "exceptional": found,
            "gcd_n_q1": gcd(n as u64, q as u64 - 1),
            "violations": r.violations,
        }))
    })())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn classify_cube_over_gf5() {
        let v = parse(classify("x^3 over GF(5)"));
        assert_eq!(v["report"]["decision"]["verdict"], "exceptional");
        assert_eq!(v["report"]["pass"], true);
        assert!(parse(classify("x^^2")).get("error").is_some());
    }

    #[test]
    fn tame_cells() {
        let v = parse(tame(3, 5));
        assert_eq!(v["coprime"]["items"], json!([true, true, true, true]));
        let v = parse(tame_grid(4, "5, 7"));
        assert_eq!(v["rows"][0]["cells"][2]["value"], true);
        assert_eq!(v["rows"][0]["cells"][3]["value"], false);
        assert!(v["rows"][0]["cells"][4].is_null());
        assert!(parse(tame(5, 5)).get("error").is_some());
    }

    #[test]
    fn census_small() {
        let v = parse(census(2, 2));
        assert_eq!(v["total"], 2);
        assert_eq!(v["exceptional"], json!(["x^2"]));
        assert!(parse(census(6, 2)).get("error").is_some());
    }
}
