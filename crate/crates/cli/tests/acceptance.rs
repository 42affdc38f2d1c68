//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Criterion 12 runs only when
//! `REINHARDT_ACCEPTANCE_LONG=1`.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::sync::OnceLock;
use std::time::Instant;

use reinhardt::arith::is_power_of_two;
use reinhardt::construct::{
    construct_sporadic, construct_sporadic_largest_parts, count_periodic_constructed, decompose,
    factorization_grids, has_trivial_decomposition, recompose, ConstructionResult, SubsetPolicy,
};
use reinhardt::enumerate::{enumerate_reinhardt, EnumerationResult};
use reinhardt::geometry::{closure_residual, closure_verdict, Closure, CLOSURE_ACCEPT, CLOSURE_REJECT};
use reinhardt::residue::ResidueTable;
use reinhardt::{periodic_count, periods, pq_count, Composition, SearchConfig};
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = fn() -> Outcome;
type GridResult = ((u64, u64, u64), Result<ConstructionResult, String>);

const THREADS: [&str; 2] = ["1", "8"];

fn cli(args: &[&str], threads: &str) -> Result<String, String> {
    let cache = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = Command::new(env!("CARGO_BIN_EXE_reinhardt"))
        .args(args)
        .args(["--threads", threads, "--format", "json"])
        .env("REINHARDT_CACHE_DIR", cache.path())
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr).trim()));
    }
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

/// Serialized CLI output for each thread count, keyed by command.
fn runs() -> &'static BTreeMap<String, Vec<Result<String, String>>> {
    static RUNS: OnceLock<BTreeMap<String, Vec<Result<String, String>>>> = OnceLock::new();
    RUNS.get_or_init(|| {
        let mut commands: Vec<Vec<String>> = [21, 30, 42, 45]
            .iter()
            .map(|n| vec!["enumerate".into(), n.to_string(), "--no-cache".into()])
            .collect();
        commands.extend([30, 42, 45, 63, 66, 70].iter().map(|n| vec!["construct".into(), n.to_string()]));
        commands
            .into_iter()
            .map(|args| {
                let args: Vec<&str> = args.iter().map(String::as_str).collect();
                let outs = THREADS.iter().map(|t| cli(&args, t)).collect();
                (args.join(" "), outs)
            })
            .collect()
    })
}

fn output(command: &str) -> Result<Value, String> {
    let text = runs()[command][0].clone()?;
    serde_json::from_str(&text).map_err(|e| e.to_string())
}

fn compositions(v: &Value) -> Result<BTreeSet<Composition>, String> {
    v.as_array()
        .ok_or("expected an array")?
        .iter()
        .map(|c| {
            serde_json::from_value::<Composition>(c.clone())
                .map(|c| c.canonicalize())
                .map_err(|e| e.to_string())
        })
        .collect()
}

fn parse_set(items: &[&str]) -> BTreeSet<Composition> {
    items.iter().map(|s| s.parse::<Composition>().unwrap().canonicalize()).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn enumerated(n: usize) -> &'static EnumerationResult {
    static CACHE: OnceLock<BTreeMap<usize, EnumerationResult>> = OnceLock::new();
    &CACHE.get_or_init(|| {
        (3..=45)
            .filter(|&n| !is_power_of_two(n as u64))
            .map(|n| (n, enumerate_reinhardt(n, &SearchConfig::default()).expect("enumeration")))
            .collect()
    })[&n]
}

fn c1() -> Outcome {
    let v = output("enumerate 21 --no-cache")?;
    let polys: Vec<Value> = v["polygons"].as_array().ok_or("no polygons")?.iter().map(|p| p["composition"].clone()).collect();
    let got = compositions(&Value::Array(polys))?;
    let expected = parse_set(&[
        "[(7)^3]",
        "[(3)^7]",
        "[(5,1,1)^3]",
        "[(4,2,1)^3]",
        "[(3,3,1)^3]",
        "[(3,2,2)^3]",
        "[(3,1,1,1,1)^3]",
        "[(2,2,1,1,1)^3]",
        "[(2,1,2,1,1)^3]",
        "[(1)^21]",
    ]);
    ensure(got == expected, || format!("got {got:?}"))?;
    Ok("the ten known 21-gons".into())
}

fn c2() -> Outcome {
    let v = output("enumerate 30 --no-cache")?;
    ensure((v["E"].clone(), v["E0"].clone()) == (41.into(), 38.into()), || format!("E = {}, E0 = {}", v["E"], v["E0"]))?;
    let sporadic: Vec<Value> = v["polygons"]
        .as_array()
        .ok_or("no polygons")?
        .iter()
        .filter(|p| p["classification"]["kind"] == "sporadic")
        .map(|p| p["composition"].clone())
        .collect();
    let got = compositions(&Value::Array(sporadic))?;
    let expected = parse_set(&[
        "[7,6,1,1,1,1,2,1,1,1,1,1,4,1,1]",
        "[6,3,1,2,1,1,1,1,2,3,1,1,4,1,2]",
        "[5,4,1,2,1,1,4,3,1,1,2,1,1,1,2]",
    ]);
    ensure(got == expected, || format!("sporadic {got:?}"))?;
    Ok("E = 41, E0 = 38, the three known sporadic 30-gons".into())
}

fn c3() -> Outcome {
    let mut seen = Vec::new();
    for (n, c) in [(30, 3), (42, 9), (45, 144), (63, 1308), (66, 93), (70, 27)] {
        let v = output(&format!("construct {n}"))?;
        ensure(v["C"] == c, || format!("C({n}) = {}, expected {c}", v["C"]))?;
        let listed = v["sporadic"].as_array().map_or(0, Vec::len);
        ensure(listed == c, || format!("C({n}) lists {listed}"))?;
        seen.push(format!("C({n}) = {c}"));
    }
    Ok(seen.join(", "))
}

fn c4() -> Outcome {
    for (n, e1) in [(42, 9), (45, 144)] {
        let v = output(&format!("enumerate {n} --no-cache"))?;
        ensure(v["E1"] == e1, || format!("E1({n}) = {}", v["E1"]))?;
    }
    Ok("E1(42) = 9, E1(45) = 144".into())
}

fn c5() -> Outcome {
    let mut checked = 0;
    for n in (3..=45usize).filter(|&n| !is_power_of_two(n as u64)) {
        let formula = periodic_count(n as u64).map_err(|e| e.to_string())?;
        let counted = enumerated(n).counts().periodic;
        ensure(formula == counted.into(), || format!("n = {n}: formula {formula}, enumerated {counted}"))?;
        checked += 1;
    }
    for (p, q) in [(3, 5), (3, 7), (3, 11), (5, 7)] {
        let n = p * q;
        let pq = pq_count(p, q).map_err(|e| e.to_string())?;
        let e0 = periodic_count(n).map_err(|e| e.to_string())?;
        let total = enumerated(n as usize).counts().total;
        ensure(pq == e0 && e0 == total.into(), || format!("n = {n}: pq {pq}, E0 {e0}, E {total}"))?;
    }
    Ok(format!("{checked} values of n, pq in {{15, 21, 33, 35}}"))
}

fn c6() -> Outcome {
    for n in [15, 21, 33, 35] {
        let e1 = enumerated(n).counts().sporadic;
        ensure(e1 == 0, || format!("E1({n}) = {e1}"))?;
    }
    Ok("E1 = 0 for 15, 21, 33, 35".into())
}

fn grids_upto_90() -> Vec<(u64, u64, u64)> {
    (1..=90).flat_map(factorization_grids).collect()
}

fn grid_results() -> &'static Vec<GridResult> {
    static RESULTS: OnceLock<Vec<GridResult>> = OnceLock::new();
    RESULTS.get_or_init(|| {
        grids_upto_90()
            .into_iter()
            .map(|g| {
                let res = construct_sporadic(g.0 * g.1 * g.2, Some(&[g]), &SubsetPolicy::AllNontrivial, None)
                    .map_err(|e| e.to_string());
                (g, res)
            })
            .collect()
    })
}

fn c7() -> Outcome {
    let mut total = 0;
    for (g, res) in grid_results() {
        let res = res.as_ref().map_err(|e| format!("{g:?}: {e}"))?;
        ensure(!res.sporadic.is_empty(), || format!("{g:?}: empty"))?;
        let table = ResidueTable::new(res.n as usize);
        for c in res.sporadic.iter() {
            let v = c.to_sign_vector();
            ensure(table.divides(v.entries()), || format!("{g:?}: {c} is not Reinhardt"))?;
            ensure(periods(&v).is_empty(), || format!("{g:?}: {c} is periodic"))?;
            total += 1;
        }
    }
    Ok(format!("{} grids, {total} sporadic polygons classified", grid_results().len()))
}

fn c8() -> Outcome {
    for (g, res) in grid_results() {
        let &(p, q, r) = g;
        let report = &res.as_ref().map_err(|e| format!("{g:?}: {e}"))?.grids[0];
        let raw = ((1u64 << p) - 2) << (q * (r - 1) - 1);
        let periodic = ((1u64 << p) - 2) << (r - 2);
        ensure(report.raw == raw, || format!("{g:?}: raw {} != {raw}", report.raw))?;
        ensure(report.invalid == 0, || format!("{g:?}: {} invalid", report.invalid))?;
        ensure(report.periodic == periodic, || format!("{g:?}: periodic {} != {periodic}", report.periodic))?;
        ensure(report.periodic_zero_only == 1 << (r - 2), || format!("{g:?}: S = {{0}} periodic {}", report.periodic_zero_only))?;
        let zero = count_periodic_constructed(p, q, r, &SubsetPolicy::Exactly(vec![0])).map_err(|e| e.to_string())?;
        ensure(zero == 1 << (r - 2), || format!("{g:?}: separate S = {{0}} sweep gives {zero}"))?;
    }
    Ok(format!("{} grids", grid_results().len()))
}

fn c9() -> Outcome {
    let mut checked = 0;
    for (p, q) in [(3u64, 5u64), (3, 7), (3, 11), (5, 7)] {
        let n = (p * q) as usize;
        for poly in &enumerated(n).polygons {
            let v = poly.composition.to_sign_vector();
            let f = v.to_big_polynomial();
            for (a, b) in [(p, q), (q, p)] {
                let sides = has_trivial_decomposition(&v, a, b).map_err(|e| e.to_string())?;
                ensure(sides.any(), || format!("{} has no trivial side for ({a}, {b})", poly.composition))?;
                let d = decompose(&v, a, b).map_err(|e| format!("{}: {e}", poly.composition))?;
                let tri = d.f1.coeffs().iter().chain(d.f2.coeffs()).all(|c| c.magnitude() <= &1u8.into());
                ensure(tri, || format!("{}: coefficients outside [-1, 1]", poly.composition))?;
                ensure(recompose(&d.f1, &d.f2, a, b) == f, || format!("{}: does not reconstruct", poly.composition))?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} polynomials, both prime orders"))
}

fn c10() -> Outcome {
    let mut total = 0u64;
    let mut gap = 0u64;
    for n in 3..=24usize {
        let table = ResidueTable::new(n);
        for cuts in 0u32..1 << (n - 1) {
            if cuts.count_ones() % 2 == 1 {
                continue;
            }
            let mut parts = Vec::with_capacity(cuts.count_ones() as usize + 1);
            let mut last = 0;
            for i in 0..n - 1 {
                if cuts >> i & 1 == 1 {
                    parts.push(i + 1 - last);
                    last = i + 1;
                }
            }
            parts.push(n - last);
            let c = Composition::new(parts).map_err(|e| e.to_string())?;
            let algebraic = table.divides(c.to_sign_vector().entries());
            let residual = closure_residual::<f64>(&c);
            total += 1;
            match closure_verdict(residual) {
                Closure::Ambiguous => gap += 1,
                Closure::Closed if !algebraic => return Err(format!("{c} closes ({residual:e}) but is not Reinhardt")),
                Closure::Open if algebraic => return Err(format!("{c} is Reinhardt but residual is {residual:e}")),
                _ => {}
            }
        }
    }
    ensure(gap == 0, || format!("{gap} compositions between {CLOSURE_ACCEPT:e} and {CLOSURE_REJECT:e}"))?;
    Ok(format!("{total} compositions, none in the gap"))
}

fn c11() -> Outcome {
    for (command, outs) in runs() {
        let first = outs[0].as_ref().map_err(Clone::clone)?;
        for (t, other) in THREADS.iter().zip(outs).skip(1) {
            let other = other.as_ref().map_err(Clone::clone)?;
            ensure(first == other, || format!("`{command}` differs between 1 and {t} threads"))?;
        }
    }
    Ok(format!("{} commands byte-identical at {} threads", runs().len(), THREADS.join(" and ")))
}

fn c12() -> Outcome {
    let mut notes = Vec::new();
    for n in [60u64, 75, 78, 84, 90, 99, 102, 110, 114, 117, 130, 140, 154, 170, 182, 190, 238, 286] {
        let expected = table1_c(n);
        let got = construct_sporadic(n, None, &SubsetPolicy::AllNontrivial, None).map_err(|e| e.to_string())?;
        ensure(got.sporadic.len() as u64 == expected, || format!("C({n}) = {}, published {expected}", got.sporadic.len()))?;
        notes.push(format!("C({n})"));
    }
    let parts: Vec<usize> = std::iter::once(2).chain(12..=27).collect();
    let counts = construct_sporadic_largest_parts(105, None, &SubsetPolicy::ContainsZero, None, &parts)
        .map_err(|e| e.to_string())?
        .sporadic
        .largest_part_counts();
    for (m, expected) in TABLE2_C {
        let got = counts.get(&m).copied().unwrap_or(0);
        ensure(got == expected, || format!("C(105, {m}) = {got}, published {expected}"))?;
    }
    notes.push("C(105, m) for m = 2, 12..27".into());
    Ok(format!("{}; E1 for n >= 60 and the full C(105) remain out of reach", notes.join(", ")))
}

fn table1_c(n: u64) -> u64 {
    match n {
        60 => 3492,
        75 => 107400,
        78 => 315,
        84 => 150444,
        90 => 3371568,
        99 => 192324,
        102 => 3855,
        110 => 279,
        114 => 13797,
        117 => 2587284,
        130 => 945,
        140 => 478548,
        154 => 837,
        170 => 11565,
        182 => 2835,
        190 => 41391,
        238 => 34695,
        286 => 29295,
        _ => unreachable!(),
    }
}

const TABLE2_C: [(usize, u64); 17] = [
    (2, 378),
    (12, 1601785),
    (13, 941576),
    (14, 425757),
    (15, 260920),
    (16, 132839),
    (17, 66113),
    (18, 32391),
    (19, 16362),
    (20, 6145),
    (21, 4612),
    (22, 2044),
    (23, 903),
    (24, 384),
    (25, 164),
    (26, 64),
    (27, 36),
];

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 11] = [
        ("enumerate 21", c1),
        ("enumerate 30", c2),
        ("C(n) by construction", c3),
        ("E1(n) by enumeration", c4),
        ("periodic and pq formulas", c5),
        ("no sporadic pq-gons", c6),
        ("construction yields sporadic polygons", c7),
        ("construction counting identities", c8),
        ("trivial decompositions", c9),
        ("algebra and geometry agree", c10),
        ("determinism across thread counts", c11),
    ];
    let mut failed = 0;
    let mut report = |id: usize, name: &str, f: fn() -> Outcome| {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {id:>2} {name}: {detail} ({secs:.1} s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {id:>2} {name}: {detail} ({secs:.1} s)");
            }
        }
    };
    for (i, (name, f)) in criteria.iter().enumerate() {
        report(i + 1, name, *f);
    }
    if std::env::var("REINHARDT_ACCEPTANCE_LONG").is_ok_and(|v| v == "1") {
        report(12, "long jobs: remaining C(n) and C(105, m)", c12);
    } else {
        println!("SKIP 12 long jobs: opt in with REINHARDT_ACCEPTANCE_LONG=1");
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
