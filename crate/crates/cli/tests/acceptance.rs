//! Acceptance run: one PASS/FAIL line per criterion, exact equality
//! throughout, each with a wall-clock budget. Exits non-zero if any fails.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::Arc;
use std::time::{Duration, Instant};

use incidence_core::corpus::{self, full_simplex, path_fold, path_non_simplicial, simplicial_maps};
use incidence_core::expr::{self, Element};
use incidence_core::functor::compose;
use incidence_core::incidence::{basis_pairs, IncidenceElement};
use incidence_core::props::{self, PropsConfig};
use incidence_core::{betti, Complex, Execution};

type Outcome = Result<String, String>;

/// Name, time budget in seconds, check.
type Criterion = (&'static str, u64, fn() -> Outcome);

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_incidence")
}

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn corpus() -> Vec<(String, Arc<Complex>)> {
    corpus::complexes(20, 0)
}

/// Runs the named properties on every corpus complex.
fn properties(names: &[&str], cfg: &PropsConfig) -> Outcome {
    let complexes = corpus();
    for (label, c) in &complexes {
        for name in names {
            props::check(name, c, cfg).expect("known property").map_err(|e| format!("{name} on {label}: {e}"))?;
        }
    }
    Ok(format!("{} complexes: {}", complexes.len(), names.join(", ")))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn boundary() -> Outcome {
    properties(&["border-squared", "border-adjoint"], &PropsConfig::default())
}

fn leibniz() -> Outcome {
    properties(&["d-squared", "leibniz"], &PropsConfig::default())
}

fn sigma_isomorphism() -> Outcome {
    properties(&["sigma-surjective", "generators-in-kernel", "sigma-multiplicative"], &PropsConfig::default())
}

fn differential_ideal() -> Outcome {
    properties(&["differential-ideal"], &PropsConfig::default())
}

fn differential_via_stories() -> Outcome {
    properties(&["differential-via-stories", "section-independence"], &PropsConfig::default())
}

fn functor() -> Outcome {
    let maps = simplicial_maps();
    ensure(maps.len() >= 10, || format!("only {} maps", maps.len()))?;
    for (name, m) in &maps {
        let r = m.check_differentiable(2, Execution::default());
        ensure(r.passed(), || format!("{name}: {r:?}"))?;
    }
    ensure(path_fold().check_differentiable(2, Execution::default()).passed(), || "fold map".into())?;

    let mut composites = 0;
    for (_, m1) in &maps {
        for (_, m2) in &maps {
            let Ok(both) = compose(m2, m1) else { continue };
            composites += 1;
            let target = m1.target();
            for n in 0..=2 {
                for p in basis_pairs(target, n) {
                    let x = IncidenceElement::basis(target, p);
                    let direct = both.pullback_algebra(&x).map_err(|e| e.to_string())?;
                    let stepwise = m2
                        .pullback_algebra(&m1.pullback_algebra(&x).map_err(|e| e.to_string())?)
                        .map_err(|e| e.to_string())?;
                    ensure(direct == stepwise, || format!("composition law fails on {x}"))?;
                }
            }
        }
    }
    ensure(composites >= 10, || format!("only {composites} composable pairs"))?;

    let bad = path_non_simplicial().check_differentiable(2, Execution::default());
    ensure(!bad.simplicial && !bad.ideal_preserved && !bad.passed(), || format!("non-simplicial map: {bad:?}"))?;
    ensure(bad.witnesses.iter().any(|w| w.contains("{1' 2'} maps to {1 3}")), || {
        format!("missing witness in {:?}", bad.witnesses)
    })?;
    Ok(format!("{} maps, {composites} composites, non-simplicial map rejected", maps.len()))
}

fn homology() -> Outcome {
    let mut expected: Vec<(Arc<Complex>, Vec<usize>)> = vec![
        (corpus::hollow_triangle(), vec![1, 1]),
        (corpus::tetrahedron_boundary(), vec![1, 0, 1]),
        (corpus::two_points(), vec![2]),
    ];
    for n in 1..=6 {
        let mut b = vec![0; n];
        b[0] = 1;
        expected.push((full_simplex(n), b));
    }
    for (c, b) in &expected {
        ensure(&betti(c) == b, || format!("betti {:?}, expected {b:?}", betti(c)))?;
    }
    for (file, text) in [
        ("hollow-triangle.cplx", "[1, 1]"),
        ("tetrahedron-boundary.cplx", "[1, 0, 1]"),
        ("two-points.cplx", "[2]"),
        ("triangle.cplx", "[1, 0, 0]"),
        ("simplex4.cplx", "[1, 0, 0, 0, 0]"),
    ] {
        let out = cli(&["betti", &data(file), "--json"]);
        ensure(out.status.code() == Some(0) && stdout(&out) == format!("{text}\n"), || {
            format!("betti {file}: {:?}", stdout(&out))
        })?;
    }
    Ok(format!("{} complexes", expected.len()))
}

fn bookkeeping() -> Outcome {
    let c = corpus::full_triangle();
    let mut exhaustive = [0usize; 3];
    for p in c.simplices() {
        for q in c.simplices() {
            if p.is_subset_of(q) {
                exhaustive[q.len() - p.len()] += 1;
            }
        }
    }
    ensure(exhaustive == [7, 9, 3], || format!("exhaustive count {exhaustive:?}"))?;
    for (n, &size) in exhaustive.iter().enumerate() {
        ensure(basis_pairs(&c, n).len() == size, || format!("basis_pairs({n})"))?;
        let out = cli(&["basis", &data("triangle.cplx"), "--degree", &n.to_string()]);
        let lines = stdout(&out).lines().count();
        ensure(out.status.code() == Some(0) && lines == size, || format!("CLI basis --degree {n}: {lines} lines"))?;
    }
    Ok("sizes (7, 9, 3)".into())
}

struct Case {
    name: String,
    args: Vec<String>,
    exit: i32,
    out: Option<String>,
    err: Option<String>,
}

fn load_cases() -> Vec<Case> {
    let text = std::fs::read_to_string(golden_dir().join("cases.txt")).expect("golden cases");
    let mut cases: Vec<Case> = Vec::new();
    for line in text.lines() {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let (key, value) = line.split_once(':').expect("key: value");
        let value = value.strip_prefix(' ').unwrap_or(value);
        if key == "case" {
            cases.push(Case { name: value.to_string(), args: vec![], exit: 0, out: None, err: None });
            continue;
        }
        let case = cases.last_mut().expect("case first");
        match key {
            "run" => case.args = shlex::split(value).expect("balanced quotes"),
            "exit" => case.exit = value.parse().expect("exit code"),
            "out" => case.out.get_or_insert_with(String::new).push_str(&format!("{value}\n")),
            "quiet" => case.out = Some(String::new()),
            "err" => case.err = Some(value.to_string()),
            other => panic!("unknown key {other}"),
        }
    }
    cases
}

fn resolve(arg: &str) -> String {
    if arg.ends_with(".cplx") || arg.ends_with(".map") {
        let local = golden_dir().join(arg);
        if local.exists() {
            return local.display().to_string();
        }
        return data(arg);
    }
    arg.to_string()
}

/// Golden CLI cases plus the parse/print round trip on every expression.
fn golden() -> Outcome {
    let cases = load_cases();
    let mut subcommands = BTreeSet::new();
    let mut expressions = 0;
    for case in &cases {
        let args: Vec<String> = case.args.iter().map(|a| resolve(a)).collect();
        let out = cli(&args.iter().map(String::as_str).collect::<Vec<_>>());
        let code = out.status.code();
        ensure(code == Some(case.exit), || format!("{}: exit {code:?}, expected {}", case.name, case.exit))?;
        if let Some(expected) = &case.out {
            let got = stdout(&out);
            ensure(&got == expected, || format!("{}: stdout {got:?}, expected {expected:?}", case.name))?;
        }
        let err = String::from_utf8_lossy(&out.stderr);
        if let Some(needle) = &case.err {
            ensure(err.contains(needle.as_str()), || format!("{}: stderr {err:?} lacks {needle:?}", case.name))?;
        }
        ensure(case.exit == 2 || err.is_empty(), || format!("{}: unexpected stderr {err:?}", case.name))?;
        ensure(case.exit != 2 || out.stdout.is_empty(), || format!("{}: stdout on a usage error", case.name))?;
        if let Some(cmd) = case.args.first() {
            subcommands.insert(cmd.clone());
        }

        if let Some(i) = case.args.iter().position(|a| a == "--expr") {
            expressions += 1;
            let c = Arc::new(expr::parse_complex(&std::fs::read_to_string(resolve(&case.args[1])).unwrap()).unwrap());
            if let Ok(x) = expr::parse_element(&case.args[i + 1], &c) {
                round_trip(&x, &c).map_err(|e| format!("{}: {e}", case.name))?;
            }
            let is_element_output =
                matches!(case.args[0].as_str(), "diff" | "sigma") && !case.args.contains(&"--json".into());
            if case.exit == 0 && is_element_output {
                let printed = stdout(&out);
                let y =
                    expr::parse_element(printed.trim_end(), &c).map_err(|e| format!("{}: output: {e}", case.name))?;
                round_trip(&y, &c).map_err(|e| format!("{}: {e}", case.name))?;
            }
        }
    }
    ensure(expressions >= 30, || format!("only {expressions} expressions"))?;
    let all = ["validate", "basis", "diff", "sigma", "ideal-check", "ideal-verify", "betti", "map-check", "props"];
    for cmd in all {
        ensure(subcommands.contains(cmd), || format!("no golden case for `{cmd}`"))?;
    }
    Ok(format!("{} cases, {expressions} expressions, {} subcommands", cases.len(), all.len()))
}

fn round_trip(x: &Element, c: &Arc<Complex>) -> Result<(), String> {
    let printed = x.to_string();
    let again = expr::parse_element(&printed, c).map_err(|e| format!("reparse `{printed}`: {e}"))?;
    let equal = match (x, &again) {
        (Element::Incidence(a), Element::Incidence(b)) => a == b,
        (Element::Story(a), Element::Story(b)) => a == b,
        // `0` parses as the zero incidence element.
        (Element::Story(a), Element::Incidence(b)) => a.is_zero() && b.is_zero(),
        _ => false,
    };
    ensure(equal && again.to_string() == printed, || format!("`{printed}` does not round trip"))
}

fn data(file: &str) -> String {
    data_dir().join(file).display().to_string()
}

fn cli(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("run incidence")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("border squares to zero and is adjoint to the coborder", 1, boundary),
        ("d² = 0 and graded Leibniz", 10, leibniz),
        ("sigma is a surjective algebra map with the ideal in its kernel", 60, sigma_isomorphism),
        ("the ideal is a differential two-sided ideal", 60, differential_ideal),
        ("d = sigma ∘ d̄ ∘ lift, independent of the section", 30, differential_via_stories),
        ("simplicial maps are differentiable and compose contravariantly", 30, functor),
        ("Betti numbers", 1, homology),
        ("incidence basis sizes of the triangle", 1, bookkeeping),
        ("golden CLI suite and round trip", 5, golden),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(*budget);
        let (status, detail) = match (&result, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over the {budget}s budget")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {} {status} {name} [{:.2}s / {budget}s]: {detail}", i + 1, elapsed.as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
