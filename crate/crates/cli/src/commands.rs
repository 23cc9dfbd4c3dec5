use std::fs::File;
use std::io::{self, BufWriter, Write};

use rayon::prelude::*;
use serde_json::{json, Value};

use nslab::classify::semigroup_polynomial;
use nslab::lab::checks::{canonical_check_name, cyclotomic_factors, run_check, CHECK_NAMES};
use nslab::lab::enumerate::{enumerate_filtered, Filter};
use nslab::lab::replay::{invariant_snapshot, json_diff, recompute};
use nslab::lab::search::{boundedness_probe, search_supremum, SearchBounds, Target};
use nslab::lab::suites::{verify_theorem_suite, Bounds, Suite};
use nslab::report::{CheckReport, Verdict, WitnessStore};
use nslab::resolution::{graded_betti, BettiTable};
use nslab::tangent_cone::{b1_g, hilbert_function_g, is_hf_nondecreasing, stable_order_threshold};
use nslab::{Error, NumericalSemigroup, Result};

use crate::{BoundArgs, Global};

const CHUNK: usize = 4096;

fn io_err(e: io::Error) -> Error {
    Error::InvalidInput(format!("output: {e}"))
}

fn sink(g: &Global) -> Result<Box<dyn Write>> {
    Ok(match &g.out {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(io_err)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn stamp(g: &Global, mut r: CheckReport) -> CheckReport {
    if !g.no_timestamps {
        r.timestamp = Some(humantime::format_rfc3339_millis(std::time::SystemTime::now()).to_string());
    }
    r
}

fn persist(g: &Global, r: &CheckReport) -> Result<usize> {
    let s = r.semigroup()?;
    let mut store = WitnessStore::open(&g.store)?;
    let snapshot = invariant_snapshot(&s, &g.chars)?;
    store.append(r.clone(), snapshot)
}

fn bounds_of(b: &BoundArgs) -> Bounds {
    Bounds { frob_max: b.frob_max, genus_max: b.genus_max }
}

fn list(v: impl IntoIterator<Item = impl ToString>, sep: &str) -> String {
    v.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

/// Plain and CSV renderings of a flat list of named values.
fn emit_pairs(g: &Global, json: &Value, pairs: &[(&str, String)]) -> Result<u8> {
    let mut w = sink(g)?;
    if g.json {
        writeln!(w, "{}", serde_json::to_string_pretty(json).unwrap()).map_err(io_err)?;
    } else if g.csv {
        writeln!(w, "key,value").map_err(io_err)?;
        for (k, v) in pairs {
            writeln!(w, "{k},\"{v}\"").map_err(io_err)?;
        }
    } else {
        let width = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in pairs {
            writeln!(w, "{k:<width$}  {v}").map_err(io_err)?;
        }
    }
    w.flush().map_err(io_err)?;
    Ok(0)
}

pub fn invariants(g: &Global, s: &NumericalSemigroup) -> Result<u8> {
    let snap = invariant_snapshot(s, &g.chars)?;
    let inv = s.invariants();
    let flag = |k: &str| snap["flags"][k].to_string();
    let mut pairs = vec![
        ("gens", s.to_string()),
        ("multiplicity", inv.multiplicity.to_string()),
        ("edim", inv.edim.to_string()),
        ("width", inv.width.to_string()),
        ("frobenius", inv.frobenius.to_string()),
        ("genus", inv.genus.to_string()),
        ("eta", inv.eta.to_string()),
        ("type", inv.type_.to_string()),
        ("pseudo_frobenius", snap["pseudo_frobenius"].as_array().map_or(String::new(), |v| list(v.iter(), " "))),
        ("apery", list(s.apery_set(s.multiplicity())?.residues, " ")),
        ("symmetric", flag("symmetric")),
        ("almost_symmetric", flag("almost_symmetric")),
        ("nearly_gorenstein", flag("nearly_gorenstein")),
        ("canonical_reduction", flag("canonical_reduction")),
        ("max_edim", flag("max_edim")),
        ("arithmetic_sequence", flag("arithmetic_sequence")),
        ("complete_intersection", flag("complete_intersection")),
        ("rho", snap["rho"].to_string()),
    ];
    let betti_keys: Vec<String> = g.chars.iter().map(|c| format!("betti_char_{c}")).collect();
    for (c, key) in g.chars.iter().zip(&betti_keys) {
        let t = &snap["betti"][c.to_string()];
        let shown = match t["totals"].as_array() {
            Some(v) => list(v.iter(), " "),
            None => t.to_string(),
        };
        pairs.push((key.as_str(), shown));
    }
    let hf = &snap["hilbert_function_g"];
    pairs.push(("hf_g", hf["values"].as_array().map_or(hf.to_string(), |v| list(v.iter(), " "))));
    pairs.push(("hf_g_nondecreasing", hf["nondecreasing"].to_string()));
    pairs.push(("b1_g", format!("{} ({})", snap["b1_g"]["value"], snap["b1_g"]["status"].as_str().unwrap_or("?"))));
    pairs.push(("polynomial", snap["polynomial"].as_str().unwrap().to_string()));
    let cyc = &snap["cyclotomic"];
    let factors: Vec<u64> = cyc["factors"].as_array().unwrap().iter().map(|f| f["d"].as_u64().unwrap()).collect();
    pairs.push(("cyclotomic", format!("{} [{}]", cyc["cyclotomic"], list(factors, " "))));
    emit_pairs(g, &snap, &pairs)
}

fn tables(g: &Global, s: &NumericalSemigroup) -> Result<Vec<BettiTable>> {
    g.chars.iter().map(|&c| graded_betti(s, c)).collect()
}

pub fn betti(g: &Global, s: &NumericalSemigroup) -> Result<u8> {
    let tables = tables(g, s)?;
    let mut w = sink(g)?;
    if g.json {
        let v = json!({ "gens": s.generators(), "tables": tables });
        writeln!(w, "{}", serde_json::to_string_pretty(&v).unwrap()).map_err(io_err)?;
    } else if g.csv {
        writeln!(w, "char,i,j,b").map_err(io_err)?;
        for t in &tables {
            for (i, j, b) in t.entries() {
                writeln!(w, "{},{i},{j},{b}", t.characteristic).map_err(io_err)?;
            }
        }
    } else {
        for t in &tables {
            writeln!(w, "characteristic {}", t.characteristic).map_err(io_err)?;
            for i in 0..s.edim() {
                let row = t.row(i);
                let cells = list(row.iter().map(|(j, b)| format!("{b}@{j}")), " ");
                writeln!(w, "  b_{i} = {:<4} {cells}", t.totals()[i]).map_err(io_err)?;
            }
        }
        if tables.windows(2).any(|p| p[0].totals() != p[1].totals()) {
            writeln!(w, "note: Betti numbers depend on the characteristic").map_err(io_err)?;
        }
    }
    w.flush().map_err(io_err)?;
    Ok(0)
}

pub fn tangent_cone(g: &Global, s: &NumericalSemigroup, jmax: Option<usize>, cap: Option<u32>) -> Result<u8> {
    let mono = is_hf_nondecreasing(s)?;
    let values = match jmax {
        Some(j) => hilbert_function_g(s, j)?.values,
        None => mono.values.clone(),
    };
    let b1 = b1_g(s, cap)?;
    let j0 = stable_order_threshold(s);
    let v = json!({
        "gens": s.generators(),
        "hf": values,
        "stable_from": j0,
        "stable_value": s.multiplicity(),
        "nondecreasing": mono.nondecreasing,
        "violation_at": mono.violation_at,
        "b1_g": b1,
    });
    if g.csv {
        let mut w = sink(g)?;
        writeln!(w, "j,hf").map_err(io_err)?;
        for (j, h) in values.iter().enumerate() {
            writeln!(w, "{j},{h}").map_err(io_err)?;
        }
        w.flush().map_err(io_err)?;
        return Ok(0);
    }
    let status = serde_json::to_value(b1.status).unwrap();
    emit_pairs(
        g,
        &v,
        &[
            ("gens", s.to_string()),
            ("hf", list(&values, " ")),
            ("stable_from", format!("{j0} (value {})", s.multiplicity())),
            ("nondecreasing", mono.nondecreasing.to_string()),
            ("b1_g", format!("{} ({}, degrees up to {})", b1.value, status.as_str().unwrap(), b1.cap)),
            ("b1_g_by_degree", list(b1.by_degree.iter().map(|(d, c)| format!("{c}@{d}")), " ")),
        ],
    )
}

pub fn series(g: &Global, s: &NumericalSemigroup) -> Result<u8> {
    let p = semigroup_polynomial(s);
    let cyc = cyclotomic_factors(&p)?;
    if g.csv {
        let mut w = sink(g)?;
        writeln!(w, "k,coefficient").map_err(io_err)?;
        for (k, c) in p.coefficients().iter().enumerate() {
            writeln!(w, "{k},{c}").map_err(io_err)?;
        }
        w.flush().map_err(io_err)?;
        return Ok(0);
    }
    let v = json!({ "gens": s.generators(), "polynomial": p, "text": p.to_string(), "cyclotomic": cyc });
    emit_pairs(
        g,
        &v,
        &[
            ("gens", s.to_string()),
            ("P(z)", p.to_string()),
            ("hilbert_series", format!("({p}) / (1 - z)")),
            ("cyclotomic", cyc.cyclotomic.to_string()),
            ("factors", list(cyc.factors.iter().map(|d| format!("Phi_{d}")), " ")),
        ],
    )
}

fn write_report(g: &Global, w: &mut dyn Write, r: &CheckReport) -> Result<()> {
    if g.csv {
        writeln!(w, "{},{},{}", r.check, list(&r.gens, " "), serde_json::to_value(r.verdict).unwrap().as_str().unwrap())
    } else {
        writeln!(w, "{}", r.to_json_line())
    }
    .map_err(io_err)
}

#[derive(Default)]
struct Tally {
    pass: usize,
    fail: usize,
    inconclusive: usize,
    resource_limit: usize,
    witness_ids: Vec<usize>,
}

impl Tally {
    fn exit(&self) -> u8 {
        if self.fail > 0 {
            1
        } else if self.resource_limit > 0 {
            3
        } else {
            0
        }
    }

    fn add(&mut self, g: &Global, r: &CheckReport) -> Result<()> {
        match r.verdict {
            Verdict::Pass => self.pass += 1,
            Verdict::Inconclusive => self.inconclusive += 1,
            Verdict::Fail => {
                self.fail += 1;
                self.witness_ids.push(persist(g, r)?);
            }
        }
        Ok(())
    }

    fn json(&self) -> Value {
        json!({
            "pass": self.pass,
            "fail": self.fail,
            "inconclusive": self.inconclusive,
            "resource_limit": self.resource_limit,
            "witness_ids": self.witness_ids,
        })
    }
}

pub fn enumerate(
    g: &Global,
    b: &BoundArgs,
    edim: Option<usize>,
    mult: Option<u64>,
    width: Option<u64>,
    checks: &[String],
) -> Result<u8> {
    let names: Vec<&'static str> = checks
        .iter()
        .map(|c| {
            canonical_check_name(c).ok_or_else(|| {
                Error::InvalidInput(format!("unknown check {c:?}; expected one of {}", CHECK_NAMES.join(", ")))
            })
        })
        .collect::<Result<_>>()?;
    let filter = Filter {
        edim,
        mult,
        width,
        frob_max: b.frob_max,
        gen_max: b.gen_max,
        genus_max: b.genus_max,
    };
    let mut pool = Vec::new();
    let summary = enumerate_filtered(&filter, &mut |s| pool.push(s.clone()))?;
    let mut w = sink(g)?;
    let mut tally = Tally::default();
    if names.is_empty() {
        for s in &pool {
            if g.json {
                writeln!(w, "{}", json!({ "gens": s.generators() })).map_err(io_err)?;
            } else {
                writeln!(w, "{s}").map_err(io_err)?;
            }
        }
    }
    for chunk in pool.chunks(CHUNK).filter(|_| !names.is_empty()) {
        let reports: Vec<Vec<CheckReport>> = chunk
            .par_iter()
            .map(|s| {
                names
                    .iter()
                    .map(|n| match run_check(n, s) {
                        Err(e @ Error::ResourceLimit { .. }) => Ok(CheckReport::new(
                            n,
                            s,
                            Verdict::Inconclusive,
                            json!({ "resource_limit": e.to_string() }),
                        )),
                        other => other,
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        for r in reports.into_iter().flatten() {
            if r.data.get("resource_limit").is_some() {
                tally.resource_limit += 1;
            }
            let r = stamp(g, r);
            tally.add(g, &r)?;
            write_report(g, &mut w, &r)?;
        }
    }
    w.flush().map_err(io_err)?;
    let mut sum = tally.json();
    sum["visited"] = json!(summary.visited);
    sum["strategy"] = json!(summary.strategy);
    sum["marker"] = json!(summary.marker);
    sum["checks"] = json!(names);
    eprintln!("{}", json!({ "summary": sum }));
    Ok(tally.exit())
}

pub fn verify(g: &Global, suites: &[String], b: &BoundArgs) -> Result<u8> {
    let list: Vec<Suite> = if suites.iter().any(|s| s == "all") {
        Suite::ALL.to_vec()
    } else {
        suites.iter().map(|s| s.parse()).collect::<Result<_>>()?
    };
    let bounds = bounds_of(b);
    let mut w = sink(g)?;
    let mut tally = Tally::default();
    for suite in list {
        let out = verify_theorem_suite(suite, &bounds)?;
        if let Some(wit) = &out.witness {
            tally.add(g, &stamp(g, wit.clone()))?;
        } else {
            tally.pass += 1;
        }
        write_report(g, &mut w, &stamp(g, out.summary))?;
    }
    w.flush().map_err(io_err)?;
    eprintln!("{}", json!({ "summary": tally.json() }));
    Ok(tally.exit())
}

#[allow(clippy::too_many_arguments)]
pub fn search(
    g: &Global,
    target: &str,
    e: Option<usize>,
    m: Option<u64>,
    edim: Option<usize>,
    width: Option<u64>,
    pattern: bool,
    b: &BoundArgs,
) -> Result<u8> {
    let need = |v: Option<u64>, what: &str| v.ok_or_else(|| Error::InvalidInput(format!("target {target} needs --{what}")));
    let t = match target.to_ascii_uppercase().as_str() {
        "R" => Target::R { e: need(e.map(|x| x as u64), "e")? as usize, m: need(m, "m")? },
        "T" => Target::T { e: need(e.map(|x| x as u64), "e")? as usize, m: need(m, "m")? },
        "S" => Target::S { e: need(edim.map(|x| x as u64), "edim")? as usize, pattern },
        "A" => Target::A { e: need(edim.map(|x| x as u64), "edim")? as usize },
        "W" => Target::W { w: need(width, "width")? },
        _ => return Err(Error::InvalidInput(format!("unknown target {target:?}; expected R, T, S, A or W"))),
    };
    let bounds = SearchBounds { frob_max: b.frob_max, genus_max: b.genus_max, gen_max: b.gen_max };
    if bounds == SearchBounds::default() {
        return Err(Error::InvalidInput("search needs --frob-max, --genus-max or --gen-max".into()));
    }
    let out = search_supremum(t, &bounds)?;
    let mut w = sink(g)?;
    let mut summary = json!({ "target": out.target, "visited": out.visited });
    if let Some(best) = out.best {
        let best = stamp(g, best);
        summary["witness_id"] = json!(persist(g, &best)?);
        write_report(g, &mut w, &best)?;
    }
    w.flush().map_err(io_err)?;
    eprintln!("{}", json!({ "summary": summary }));
    Ok(0)
}

pub fn probe(g: &Global, edim: usize, b: &BoundArgs) -> Result<u8> {
    let t = boundedness_probe(edim, &bounds_of(b))?;
    let mut w = sink(g)?;
    if g.json {
        writeln!(w, "{}", serde_json::to_string(&t).unwrap()).map_err(io_err)?;
    } else {
        let header = list((0..edim).map(|i| format!("b{i}")), ",");
        writeln!(w, "gens,rho,type,symmetric,{header}").map_err(io_err)?;
        for r in &t.rows {
            writeln!(w, "{},{},{},{},{}", list(&r.gens, " "), r.rho, r.type_, r.symmetric, list(&r.betti, ","))
                .map_err(io_err)?;
        }
    }
    w.flush().map_err(io_err)?;
    eprintln!(
        "{}",
        json!({ "summary": { "rows": t.rows.len(), "max_betti": t.max_betti, "symmetric_pairs": t.symmetric_pairs, "marker": t.marker } })
    );
    Ok(0)
}

pub fn replay(g: &Global, id: usize) -> Result<u8> {
    let store = WitnessStore::open(&g.store)?;
    let rec = store.get(id)?;
    let mut stored = rec.report.clone();
    stored.timestamp = None;
    let fresh = recompute(&stored)?;
    let mut diffs: Vec<String> = json_diff(&serde_json::to_value(&stored).unwrap(), &serde_json::to_value(&fresh).unwrap())
        .into_iter()
        .map(|p| format!("report{p}"))
        .collect();
    let chars: Vec<u32> = rec.snapshot["betti"]
        .as_object()
        .map(|m| m.keys().filter_map(|k| k.parse().ok()).collect())
        .unwrap_or_default();
    let snap = invariant_snapshot(&stored.semigroup()?, &chars)?;
    diffs.extend(json_diff(&rec.snapshot, &snap).into_iter().map(|p| format!("snapshot{p}")));
    let identical = diffs.is_empty();
    let mut w = sink(g)?;
    if g.json {
        writeln!(w, "{}", json!({ "id": id, "check": stored.check, "gens": stored.gens, "identical": identical, "differences": diffs }))
            .map_err(io_err)?;
    } else {
        writeln!(w, "witness {id}: {} on <{}>", stored.check, list(&stored.gens, ",")).map_err(io_err)?;
        if identical {
            writeln!(w, "identical").map_err(io_err)?;
        }
        for d in &diffs {
            writeln!(w, "differs at {d}").map_err(io_err)?;
        }
    }
    w.flush().map_err(io_err)?;
    Ok(if identical { 0 } else { 1 })
}
