use std::fs;

use excmap_core::exceptional::{check_gcw, is_exceptional, DecideOptions, Decision, ExceptionalityVerdict};
use excmap_core::field::{field_of_order, gcd};
use excmap_core::group::{
    aut_trivial, galois_obstruction, intermediate_subgroups, is_exceptional_triple, nt_ram_battery, subext_check,
    t_ram_equiv, validate_triple, ExcTriple, NtRamReport, SubextReport, TRamReport, TripleDiagnostics, TripleSpec,
};
use excmap_core::laurent::{nth_root_one_unit, LaurentSeries};
use excmap_core::tame::{coprime_battery, tame_monodromy_triple, CoprimeReport, TameExtensionModel};
use excmap_core::text::{format_map, format_series, parse_map, parse_series};
use excmap_core::RatFunc;
use rayon::prelude::*;
use serde::Serialize;

use crate::report::{CliError, CliResult, FieldEcho, ReportEnvelope, RunConfig, Sink};
use crate::{DecideArgs, MapArgs, RootArgs, Status, SweepArgs, TameArgs, TripleArgs};

/// Appends `over GF(q)` from the flags when the literal has no field.
fn map_literal(a: &MapArgs) -> CliResult<String> {
    if a.map.contains("over") {
        if a.q.is_some() || a.p.is_some() {
            return Err(CliError("field given both in the literal and by flags".into()));
        }
        return Ok(a.map.clone());
    }
    let q = match (a.q, a.p, a.n) {
        (Some(q), None, None) => q,
        (None, Some(p), n) => {
            let n = n.unwrap_or(1);
            p.checked_pow(n).ok_or_else(|| CliError("field too large".into()))?
        }
        _ => return Err(CliError("give the field as \"... over GF(q)\", --q, or --p with --n".into())),
    };
    Ok(format!("{} over GF({q})", a.map))
}

fn parse_map_args(a: &MapArgs) -> CliResult<RatFunc> {
    Ok(parse_map(&map_literal(a)?)?)
}

pub fn decide_options(d: &DecideArgs) -> DecideOptions {
    DecideOptions { strict_bound: d.strict_bound, window_override: d.window, cap: d.cap }
}

pub fn decide_config(config: &mut RunConfig, d: &DecideArgs) {
    config.window_override = d.window;
    config.strict_bound = Some(d.strict_bound);
    config.cap = Some(d.cap);
}

fn verdict_status(v: &ExceptionalityVerdict) -> Status {
    match v {
        ExceptionalityVerdict::Inconclusive { .. } => Status::Inconclusive,
        _ => Status::Ok,
    }
}

pub fn verdict_summary(map: &str, d: &Decision) -> String {
    match &d.verdict {
        ExceptionalityVerdict::Exceptional { witness_k } => {
            format!("{map}: exceptional (bijective on P^1(F_{{q^{witness_k}}}))")
        }
        ExceptionalityVerdict::NotExceptional { scanned_k, collision } => format!(
            "{map}: not exceptional (k = {}..{} scanned; at k = {}, {} and {} both map to {})",
            scanned_k.first().unwrap_or(&0),
            scanned_k.last().unwrap_or(&0),
            collision.k,
            collision.a,
            collision.b,
            collision.image
        ),
        ExceptionalityVerdict::Inconclusive { scanned_k } => format!(
            "{map}: inconclusive (no bijective k among {scanned_k:?}; the window is narrower than the sound width {})",
            d.window.sound_width
        ),
    }
}

#[derive(Serialize)]
struct MapPayload<'a, T: Serialize> {
    map: &'a str,
    #[serde(flatten)]
    result: T,
}

pub fn exceptional(a: &MapArgs) -> CliResult<Status> {
    let f = parse_map_args(a)?;
    let map = format_map(&f);
    let mut config = RunConfig::new("exceptional", &a.output);
    config.input = Some(map.clone());
    config.field = Some(FieldEcho::of(f.field()));
    config.degree = Some(f.degree() as u64);
    decide_config(&mut config, &a.decide);

    let decision = is_exceptional(&f, &decide_options(&a.decide))?;
    let summary = verdict_summary(&map, &decision);
    let mut sink = Sink::open(&a.output, "exceptional")?;
    sink.text(&summary);
    sink.text(format_args!(
        "separable degree {}, Frobenius exponent {}, window k = {}..{} (sound width {})",
        decision.core_degree,
        decision.frobenius_exp,
        decision.window.start,
        decision.window.start + decision.window.width - 1,
        decision.window.sound_width
    ));
    let status = verdict_status(&decision.verdict);
    sink.record(&ReportEnvelope::new("report", &config, MapPayload { map: &map, result: &decision }, summary))?;
    sink.flush()?;
    Ok(status)
}

pub fn ramify(a: &MapArgs) -> CliResult<Status> {
    let f = parse_map_args(a)?;
    let map = format_map(&f);
    let mut config = RunConfig::new("ramify", &a.output);
    config.input = Some(map.clone());
    config.field = Some(FieldEcho::of(f.field()));
    config.degree = Some(f.degree() as u64);
    decide_config(&mut config, &a.decide);

    let report = check_gcw(&f, &decide_options(&a.decide))?;
    let mut sink = Sink::open(&a.output, "ramify")?;
    for r in &report.profile {
        sink.text(format_args!("e = {:>3} at {:<12} gcd(e, q-1) = {}", r.e, r.point.to_string(), r.gcd));
    }
    let verdict = verdict_summary(&map, &report.decision);
    let summary = if report.pass {
        format!("{verdict}; coprimality checks pass")
    } else {
        format!("{verdict}; COPRIMALITY VIOLATED")
    };
    sink.text(&summary);
    let status = if report.pass { verdict_status(&report.decision.verdict) } else { Status::Violation };
    sink.record(&ReportEnvelope::new("report", &config, MapPayload { map: &map, result: &report }, summary))?;
    sink.flush()?;
    Ok(status)
}

#[derive(Serialize)]
struct TriplePayload {
    triple: TripleSpec,
    diagnostics: TripleDiagnostics,
    t_ram: TRamReport,
    nt_ram: Option<NtRamReport>,
    exceptional: Option<bool>,
    galois_obstruction: Option<bool>,
    aut_trivial: Option<bool>,
    subext: Vec<SubextReport>,
}

fn triple_payload(t: &ExcTriple, cap: usize) -> CliResult<(TriplePayload, Status)> {
    let diagnostics = validate_triple(t);
    diagnostics.check()?;
    let t_ram = t_ram_equiv(t);
    let mut status = if t_ram.agreement { Status::Ok } else { Status::Violation };
    let mut payload = TriplePayload {
        triple: t.canonical_spec(),
        diagnostics: diagnostics.clone(),
        t_ram,
        nt_ram: None,
        exceptional: None,
        galois_obstruction: None,
        aut_trivial: None,
        subext: Vec::new(),
    };
    if diagnostics.totally_ramified {
        let battery = nt_ram_battery(t)?;
        let exc = is_exceptional_triple(t)?;
        let galois = galois_obstruction(t, cap)?;
        let aut = aut_trivial(t);
        for b in intermediate_subgroups(t, cap)? {
            payload.subext.push(subext_check(t, &b, cap)?);
        }
        let consistent = battery.agreement
            && battery.value() == Some(exc)
            && (!exc || (galois && aut))
            && payload.subext.iter().all(|r| r.holds);
        if !consistent {
            status = Status::Violation;
        }
        payload.nt_ram = Some(battery);
        payload.exceptional = Some(exc);
        payload.galois_obstruction = Some(galois);
        payload.aut_trivial = Some(aut);
    }
    Ok((payload, status))
}

pub fn triple(a: &TripleArgs) -> CliResult<Status> {
    let text = fs::read_to_string(&a.file).map_err(|e| CliError(format!("{}: {e}", a.file.display())))?;
    let spec: TripleSpec = serde_json::from_str(&text).map_err(|e| CliError(format!("{}: {e}", a.file.display())))?;
    let t = ExcTriple::from_spec(&spec, a.cap)?;
    let mut config = RunConfig::new("triple", &a.output);
    config.input = Some(serde_json::to_string(&t.canonical_spec())?);
    config.degree = Some(t.degree() as u64);
    config.cap = Some(a.cap as u64);

    let (payload, status) = triple_payload(&t, a.cap)?;
    let mut sink = Sink::open(&a.output, "triple")?;
    sink.text(format_args!(
        "degree {}, |A| = {}, |G| = {}, totally ramified: {}",
        t.degree(),
        t.arith().order(),
        t.geom().order(),
        payload.diagnostics.totally_ramified
    ));
    let summary = match &payload.nt_ram {
        Some(r) => {
            let items: Vec<String> = r.items.iter().map(|(k, v)| format!("({k}) {v}")).collect();
            sink.text(items.join("  "));
            sink.text(format_args!(
                "galois obstruction: {:?}, trivial automorphisms: {:?}, {} sub-extension splits checked",
                payload.galois_obstruction.unwrap_or(false),
                payload.aut_trivial.unwrap_or(false),
                payload.subext.len()
            ));
            match r.value() {
                Some(v) => format!("exceptional: {v}; all 14 items agree"),
                None => "battery items DISAGREE".to_string(),
            }
        }
        None => format!("not totally ramified; ramification items agree: {}", payload.t_ram.agreement),
    };
    let summary = if status == Status::Violation { format!("{summary}; CHECK FAILED") } else { summary };
    sink.text(&summary);
    sink.record(&ReportEnvelope::new("report", &config, &payload, summary))?;
    sink.flush()?;
    Ok(status)
}

#[derive(Serialize)]
struct TamePayload {
    model: TameExtensionModel,
    coprime: CoprimeReport,
    nt_ram: NtRamReport,
}

pub fn tame(a: &TameArgs) -> CliResult<Status> {
    let field = field_of_order(a.q)?;
    let mut config = RunConfig::new("tame", &a.output);
    config.field = Some(FieldEcho::of(&field));
    config.degree = Some(a.n);

    let coprime = coprime_battery(a.n, a.q)?;
    let nt_ram = nt_ram_battery(&tame_monodromy_triple(a.n, a.q)?)?;
    let model = TameExtensionModel::new(a.n, a.q)?;
    let ok = coprime.agree && nt_ram.agreement && nt_ram.value() == coprime.value();
    let mut sink = Sink::open(&a.output, "tame")?;
    sink.text(format_args!(
        "n = {}, q = {}: model exceptional {}, gcd(n, q-1) = 1 {}, no nontrivial n-th roots of unity {}, no divisor of n dividing q-1 {}",
        a.n, a.q, coprime.items[0], coprime.items[1], coprime.items[2], coprime.items[3]
    ));
    let summary = match (ok, coprime.value()) {
        (true, Some(v)) => format!("n = {}, q = {}: agree = true, value {v}", a.n, a.q),
        _ => format!("n = {}, q = {}: DISAGREEMENT", a.n, a.q),
    };
    sink.text(&summary);
    sink.record(&ReportEnvelope::new("report", &config, TamePayload { model, coprime, nt_ram }, summary))?;
    sink.flush()?;
    Ok(if ok { Status::Ok } else { Status::Violation })
}

#[derive(Serialize)]
struct SweepRow {
    record: &'static str,
    n: u64,
    q: u64,
    items: [bool; 4],
    agree: bool,
    nt_ram_agree: bool,
    subext_checked: usize,
    subext_holds: bool,
}

fn sweep_row(n: u64, q: u64, cap: usize) -> CliResult<SweepRow> {
    let coprime = coprime_battery(n, q)?;
    let t = tame_monodromy_triple(n, q)?;
    let nt = nt_ram_battery(&t)?;
    let subs = intermediate_subgroups(&t, cap)?;
    let mut holds = true;
    for b in &subs {
        holds &= subext_check(&t, b, cap)?.holds;
    }
    Ok(SweepRow {
        record: "row",
        n,
        q,
        items: coprime.items,
        agree: coprime.agree,
        nt_ram_agree: nt.agreement && nt.value() == coprime.value(),
        subext_checked: subs.len(),
        subext_holds: holds,
    })
}

#[derive(Serialize)]
struct SweepSummary {
    pairs: usize,
    exceptional: usize,
    disagreements: Vec<(u64, u64)>,
}

pub fn sweep(a: &SweepArgs) -> CliResult<Status> {
    let mut qs = a.q.clone();
    qs.sort_unstable();
    qs.dedup();
    for &q in &qs {
        field_of_order(q)?;
    }
    let mut config = RunConfig::new("sweep", &a.output);
    config.degree = Some(a.n);
    config.q_list = Some(qs.clone());
    config.cap = Some(a.cap as u64);

    let pairs: Vec<(u64, u64)> =
        qs.iter().flat_map(|&q| (1..=a.n).filter(move |&n| gcd(n, q) == 1).map(move |n| (n, q))).collect();
    let rows = pairs.par_iter().map(|&(n, q)| sweep_row(n, q, a.cap)).collect::<Result<Vec<_>, _>>()?;

    let mut sink = Sink::open(&a.output, "sweep")?;
    let mut disagreements = Vec::new();
    for r in &rows {
        let ok = r.agree && r.nt_ram_agree && r.subext_holds;
        if !ok {
            disagreements.push((r.n, r.q));
        }
        sink.text(format_args!(
            "n = {:>3} q = {:>3}  exceptional {:<5}  agree {:<5}  sub-extensions {:>2} {}",
            r.n,
            r.q,
            r.items[0],
            ok,
            r.subext_checked,
            if r.subext_holds { "ok" } else { "FAIL" }
        ));
        sink.record(r)?;
    }
    let exceptional = rows.iter().filter(|r| r.items[0]).count();
    let summary = format!("{} pairs, {exceptional} exceptional, {} disagreements", rows.len(), disagreements.len());
    sink.text(&summary);
    let status = if disagreements.is_empty() { Status::Ok } else { Status::Violation };
    let payload = SweepSummary { pairs: rows.len(), exceptional, disagreements };
    sink.record(&ReportEnvelope::new("summary", &config, payload, summary))?;
    sink.flush()?;
    Ok(status)
}

#[derive(Serialize)]
struct RootPayload {
    input: String,
    m: u64,
    root: String,
    precision: usize,
    verified: bool,
}

pub fn root(a: &RootArgs) -> CliResult<Status> {
    let mut u = parse_series(&a.series)?;
    if let Some(prec) = a.prec {
        u = LaurentSeries::new(u.field(), u.valuation(), u.coeffs().to_vec(), prec)?;
    }
    let mut config = RunConfig::new("root", &a.output);
    config.input = Some(format_series(&u));
    config.field = Some(FieldEcho::of(u.field()));
    config.degree = Some(a.degree);
    config.precision = Some(u.precision());

    let v = nth_root_one_unit(&u, a.degree)?;
    let verified = v.pow(a.degree) == u;
    let mut sink = Sink::open(&a.output, "root")?;
    let summary = format!("({})^(1/{}) = {} + O(t^{}); verified: {verified}", u, a.degree, v, v.absolute_precision());
    sink.text(&summary);
    let payload = RootPayload {
        input: format_series(&u),
        m: a.degree,
        root: format_series(&v),
        precision: v.precision(),
        verified,
    };
    sink.record(&ReportEnvelope::new("report", &config, payload, summary))?;
    sink.flush()?;
    Ok(if verified { Status::Ok } else { Status::Violation })
}
