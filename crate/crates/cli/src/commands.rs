use std::fmt::Write as _;
use std::path::Path;

use arclemma::bounds::{
    euler_characteristic, genus_crossing_lower_bound, prior_bounds, przytycki_max_arcs,
    sphere_crossing_lower_bound, split_parameters, turan_pair_lower_bounds, BoundReport,
};
use arclemma::decompose::{decompose_certify, CertifyOptions, TRACE_FORMAT_VERSION};
use arclemma::format::{emit_arcsys, parse_arcsys, parse_cmap};
use arclemma::maps::{planarize_pipeline, random_drawn_system, DrawnSystem};
use arclemma::monotone::{
    greedy_k_system, max_k_system_exact, max_k_system_greedy, pairwise_min_intersections,
    przytycki_cap, realize, total_min_crossings, validate_k_system, ArcSystem, ExactOptions,
    Violation,
};
use arclemma::parallel::threads_from_env;
use serde_json::{json, Value};

use crate::{
    Command, Format, Mode, Output, EXIT_GATE, EXIT_INVALID, EXIT_OK, EXIT_PARSE, EXIT_USAGE,
};

pub const FORMAT_VERSION: u32 = 1;

pub struct CliError {
    pub code: u8,
    pub message: String,
}

fn fail(code: u8, message: impl Into<String>) -> CliError {
    CliError {
        code,
        message: message.into(),
    }
}

type Outcome = Result<u8, CliError>;

pub fn run(command: Command) -> Outcome {
    match command {
        Command::Bounds {
            k,
            m,
            n,
            g,
            chi,
            output,
        } => bounds(k, m, n, g, chi, &output),
        Command::Validate { file, k, output } => validate(&file, k, &output),
        Command::Intersect { file, output } => intersect(&file, &output),
        Command::Search {
            n,
            k,
            mode,
            seed,
            cap,
            format,
            out,
        } => search(n, k, mode, seed, cap, format, out.as_deref()),
        Command::Certify {
            file,
            stop_level,
            threshold,
            output,
        } => certify(&file, stop_level, threshold, &output),
        Command::Planarize {
            file,
            g,
            seed,
            output,
        } => planarize(file.as_deref(), g, seed, &output),
        Command::Scaling { k, n, seed, output } => scaling(k, &n, seed, &output),
        Command::Report { seed, output } => report(seed, &output),
    }
}

fn write_output(output: &Output, text: &str) -> Result<(), CliError> {
    match &output.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| fail(EXIT_USAGE, format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit(output: &Output, json: Value, csv: impl FnOnce() -> String) -> Result<(), CliError> {
    let text = match output.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&json).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => csv(),
    };
    write_output(output, &text)
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| fail(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))
}

fn read_arcsys(path: &Path) -> Result<ArcSystem, CliError> {
    parse_arcsys(&read(path)?).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn opt(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::Null
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        f64::NAN
    }
}

fn csv_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        String::new()
    }
}

fn bounds(
    k: u64,
    m: Option<u64>,
    n: Option<u64>,
    g: Option<u64>,
    chi: Option<i64>,
    output: &Output,
) -> Outcome {
    let genus = g.unwrap_or(0);
    let chi = chi.or_else(|| n.map(|n| euler_characteristic(genus, n)));
    let mut reports: Vec<BoundReport> = Vec::new();
    if let Some(chi) = chi {
        reports.push(przytycki_max_arcs(k, chi));
    }
    if let (Some(m), Some(n)) = (m, n) {
        if k == 0 {
            return Err(fail(EXIT_USAGE, "crossing bounds need --k at least 1"));
        }
        reports.push(if genus == 0 {
            sphere_crossing_lower_bound(k, m, n)
        } else {
            genus_crossing_lower_bound(k, m, n, genus)
        });
        if n >= 1 {
            let (delta, t) = split_parameters(m, n, k);
            reports.push(BoundReport {
                bound_name: "split_parameters".to_string(),
                value: t,
                applicable: m > 4 * n,
                branch: None,
                constants: vec![("delta".to_string(), delta as f64), ("t".to_string(), t)],
                notes: vec!["value is the crossing threshold t".to_string()],
            });
        }
        reports.extend(prior_bounds(m, n));
    }
    if let (Some(m), Some(chi)) = (m, chi) {
        reports.extend(turan_pair_lower_bounds(m, chi, k));
    }
    if reports.is_empty() {
        return Err(fail(EXIT_USAGE, "bounds needs --chi, --n, or --m with --n"));
    }
    let rows: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "bound_name": r.bound_name,
                "value": opt(r.value),
                "applicable": r.applicable,
                "branch": r.branch,
                "constants": r.constants.iter().map(|(n, v)| json!({"name": n, "value": opt(*v)})).collect::<Vec<_>>(),
                "notes": r.notes,
            })
        })
        .collect();
    let json = json!({
        "format_version": FORMAT_VERSION,
        "command": "bounds",
        "parameters": {"k": k, "m": m, "n": n, "g": g, "chi": chi},
        "reports": rows,
    });
    emit(output, json, || {
        let mut s = String::from("bound_name,value,applicable,branch\n");
        for r in &reports {
            let _ = writeln!(
                s,
                "{},{},{},{}",
                r.bound_name,
                csv_f64(r.value),
                r.applicable,
                r.branch.as_deref().unwrap_or("")
            );
        }
        s
    })?;
    Ok(EXIT_OK)
}

fn validate(file: &Path, k: Option<u64>, output: &Output) -> Outcome {
    let mut system = read_arcsys(file)?;
    if let Some(k) = k {
        system = ArcSystem::new(system.puncture_count(), k, system.arcs().to_vec())
            .map_err(|e| fail(EXIT_PARSE, e.to_string()))?;
    }
    let violations = validate_k_system(&system);
    let rows: Vec<(&str, usize, usize, Option<u64>)> = violations
        .iter()
        .map(|v| match *v {
            Violation::Homotopic { first, second } => ("homotopic", first, second, None),
            Violation::TooManyIntersections {
                first,
                second,
                count,
                ..
            } => ("too-many-intersections", first, second, Some(count)),
        })
        .collect();
    let k = system.declared_k();
    let json = json!({
        "format_version": FORMAT_VERSION,
        "command": "validate",
        "valid": rows.is_empty(),
        "punctures": system.puncture_count(),
        "k": k,
        "arc_count": system.len(),
        "violations": rows.iter().map(|(kind, a, b, c)| json!({"kind": kind, "first": a, "second": b, "count": c})).collect::<Vec<_>>(),
    });
    emit(output, json, || {
        let mut s = String::from("kind,first,second,count,k\n");
        for (kind, a, b, c) in &rows {
            let c = c.map(|c| c.to_string()).unwrap_or_default();
            let _ = writeln!(s, "{kind},{a},{b},{c},{k}");
        }
        s
    })?;
    Ok(if rows.is_empty() {
        EXIT_OK
    } else {
        EXIT_INVALID
    })
}

fn intersect(file: &Path, output: &Output) -> Outcome {
    let system = read_arcsys(file)?;
    let realization = realize(&system);
    let arcs = system.arcs();
    let mut pairs = Vec::new();
    for i in 0..arcs.len() {
        for j in i + 1..arcs.len() {
            let min = pairwise_min_intersections(&arcs[i], &arcs[j]);
            pairs.push((i, j, min, realization.pair_crossings(&system, i, j)));
        }
    }
    let json = json!({
        "format_version": FORMAT_VERSION,
        "command": "intersect",
        "total_min": total_min_crossings(&system),
        "total_realized": realization.crossings(),
        "pairs": pairs.iter().map(|&(i, j, m, r)| json!({"first": i, "second": j, "min": m, "realized": r})).collect::<Vec<_>>(),
    });
    emit(output, json, || {
        let mut s = String::from("first,second,min,realized\n");
        for (i, j, m, r) in &pairs {
            let _ = writeln!(s, "{i},{j},{m},{r}");
        }
        s
    })?;
    Ok(EXIT_OK)
}

fn search(
    n: usize,
    k: u64,
    mode: Mode,
    seed: u64,
    cap: usize,
    format: Format,
    out: Option<&Path>,
) -> Outcome {
    let system = match mode {
        Mode::Exact => {
            let opts = ExactOptions {
                cap,
                threads: threads_from_env(),
            };
            max_k_system_exact(n, k, opts).map(|(_, s)| s)
        }
        Mode::Greedy => max_k_system_greedy(n, k, seed),
    }
    .map_err(|e| fail(EXIT_INVALID, e.to_string()))?;
    let bound = przytycki_cap(n, k);
    let size = system.len();
    let r = ratio(size as f64, bound);
    let mode_name = match mode {
        Mode::Exact => "exact",
        Mode::Greedy => "greedy",
    };
    let witness = emit_arcsys(&system);
    if let Some(path) = out {
        std::fs::write(path, &witness)
            .map_err(|e| fail(EXIT_USAGE, format!("cannot write {}: {e}", path.display())))?;
    }
    let stdout = Output { format, out: None };
    let json = json!({
        "format_version": FORMAT_VERSION,
        "command": "search",
        "n": n,
        "k": k,
        "mode": mode_name,
        "seed": seed,
        "size": size,
        "przytycki_bound": opt(bound),
        "ratio": opt(r),
        "witness": witness,
    });
    emit(&stdout, json, || {
        format!(
            "n,k,mode,size,przytycki_bound,ratio\n{n},{k},{mode_name},{size},{},{}\n",
            csv_f64(bound),
            csv_f64(r)
        )
    })?;
    Ok(EXIT_OK)
}

fn certify(
    file: &Path,
    stop_level: Option<usize>,
    threshold: Option<f64>,
    output: &Output,
) -> Outcome {
    let system = read_arcsys(file)?;
    let opts = CertifyOptions {
        stop_level,
        threshold,
        threads: threads_from_env(),
    };
    let trace = decompose_certify(&system, opts).map_err(|e| fail(EXIT_INVALID, e.to_string()))?;
    debug_assert_eq!(trace.format_version, TRACE_FORMAT_VERSION);
    let text = match output.format {
        Format::Json => trace.to_json() + "\n",
        Format::Csv => trace.to_csv(),
    };
    write_output(output, &text)?;
    Ok(if !trace.applicable {
        EXIT_GATE
    } else if trace.checks_ok {
        EXIT_OK
    } else {
        EXIT_INVALID
    })
}

fn planarize(file: Option<&Path>, g: Option<u64>, seed: u64, output: &Output) -> Outcome {
    let (drawn, source): (DrawnSystem, Value) = match (file, g) {
        (Some(path), _) => {
            let parsed = parse_cmap(&read(path)?)
                .map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))?;
            let drawn = parsed
                .into_drawn()
                .map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))?;
            (drawn, json!({"file": path.display().to_string()}))
        }
        (None, Some(g)) => {
            let drawn =
                random_drawn_system(g, seed).map_err(|e| fail(EXIT_INVALID, e.to_string()))?;
            (drawn, json!({"generated_genus": g, "seed": seed}))
        }
        (None, None) => return Err(fail(EXIT_USAGE, "planarize needs a cmap file or --g")),
    };
    let report = planarize_pipeline(&drawn).map_err(|e| fail(EXIT_INVALID, e.to_string()))?;
    let json = json!({
        "format_version": FORMAT_VERSION,
        "command": "planarize",
        "source": source,
        "report": report,
        "within_bound": report.within_bound(),
        "euler_count_holds": report.euler_count_holds(),
        "within_dv_bound": report.within_dv_bound(),
    });
    emit(output, json, || {
        format!(
            "genus_before,genus_after,removed_edges,hit_arcs,bound_value,within_bound,dv_bound\n{},{},{},{},{},{},{}\n",
            report.genus_before,
            report.genus_after,
            report.removed_edges.len(),
            report.hit_arcs.len(),
            csv_f64(report.bound_value),
            report.within_bound(),
            csv_f64(report.dv_bound)
        )
    })?;
    Ok(if report.within_bound() {
        EXIT_OK
    } else {
        EXIT_INVALID
    })
}

fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<usize>, CliError> {
    let bad = || {
        fail(
            EXIT_USAGE,
            format!("bad range `{s}`, expected a..b, a..=b or a value"),
        )
    };
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    if let Some((a, b)) = s.split_once("..=") {
        Ok(num(a)?..=num(b)?)
    } else if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (num(a)?, num(b)?);
        if b == 0 || b <= a {
            #[allow(clippy::reversed_empty_ranges)]
            return Ok(1..=0);
        }
        Ok(a..=b - 1)
    } else {
        let v = num(s)?;
        Ok(v..=v)
    }
}

fn scaling(k: u64, range: &str, seed: u64, output: &Output) -> Outcome {
    if k == 0 {
        return Err(fail(EXIT_USAGE, "scaling needs --k at least 1"));
    }
    let range = parse_range(range)?;
    let mut rows = Vec::new();
    for n in range {
        let full =
            max_k_system_greedy(n, k, seed).map_err(|e| fail(EXIT_INVALID, e.to_string()))?;
        for m in 1..=full.len() {
            let system = greedy_k_system(n, k, seed, Some(m))
                .map_err(|e| fail(EXIT_INVALID, e.to_string()))?;
            let crossings = total_min_crossings(&system);
            let bound = sphere_crossing_lower_bound(k, m as u64, n as u64 + 1);
            rows.push((
                n,
                m,
                crossings,
                bound.value,
                bound.applicable,
                ratio(crossings as f64, bound.value),
            ));
        }
    }
    let json = json!({
        "format_version": FORMAT_VERSION,
        "command": "scaling",
        "k": k,
        "seed": seed,
        "rows": rows.iter().map(|&(n, m, c, b, a, r)| json!({
            "n": n, "m": m, "crossings": c, "bound": opt(b), "applicable": a, "ratio": opt(r),
        })).collect::<Vec<_>>(),
    });
    let violations = rows
        .iter()
        .filter(|r| r.4 && (r.5.is_nan() || r.5 < 1.0))
        .count();
    emit(output, json, || {
        let mut s = String::from("n,m,crossings,bound,applicable,ratio\n");
        for &(n, m, c, b, a, r) in &rows {
            let _ = writeln!(s, "{n},{m},{c},{},{a},{}", csv_f64(b), csv_f64(r));
        }
        s
    })?;
    Ok(if violations == 0 {
        EXIT_OK
    } else {
        EXIT_INVALID
    })
}

fn report(seed: u64, output: &Output) -> Outcome {
    let threads = threads_from_env();
    let err = |e: String| fail(EXIT_INVALID, e);
    let mut systems = Vec::new();
    for k in 1..=3u64 {
        for n in 3..=6usize {
            let s = max_k_system_greedy(n, k, seed ^ (k << 8) ^ n as u64)
                .map_err(|e| err(e.to_string()))?;
            let m = s.len() as u64;
            let bound = sphere_crossing_lower_bound(k, m, n as u64 + 1);
            systems.push((
                k,
                n,
                m,
                total_min_crossings(&s),
                realize(&s).crossings(),
                bound.value,
                bound.applicable,
                validate_k_system(&s).is_empty(),
            ));
        }
    }
    let mut exact = Vec::new();
    for n in 2..=4usize {
        for k in 0..=2u64 {
            let (size, _) = max_k_system_exact(
                n,
                k,
                ExactOptions {
                    threads,
                    ..Default::default()
                },
            )
            .map_err(|e| err(e.to_string()))?;
            exact.push(
                json!({"n": n, "k": k, "size": size, "przytycki_bound": opt(przytycki_cap(n, k))}),
            );
        }
    }
    let mut traces = Vec::new();
    for (k, n) in [(1u64, 5usize), (2, 5), (2, 6)] {
        let s = max_k_system_greedy(n, k, seed).map_err(|e| err(e.to_string()))?;
        let t = decompose_certify(
            &s,
            CertifyOptions {
                threads,
                ..Default::default()
            },
        )
        .map_err(|e| err(e.to_string()))?;
        traces.push(json!({
            "k": k,
            "n": n,
            "m": s.len(),
            "applicable": t.applicable,
            "levels": t.levels.len(),
            "pieces": t.piece_count(),
            "checks_ok": t.checks_ok,
            "verdicts": t.verdicts.iter().map(|v| json!({"name": v.name, "pass": v.pass})).collect::<Vec<_>>(),
        }));
    }
    let mut planar = Vec::new();
    for g in 1..=2u64 {
        let d = random_drawn_system(g, seed).map_err(|e| err(e.to_string()))?;
        let r = planarize_pipeline(&d).map_err(|e| err(e.to_string()))?;
        planar.push(json!({
            "g": g,
            "removed_edges": r.removed_edges.len(),
            "hit_arcs": r.hit_arcs.len(),
            "bound_value": opt(r.bound_value),
            "within_bound": r.within_bound(),
            "genus_after": r.genus_after,
        }));
    }
    let json = json!({
        "format_version": FORMAT_VERSION,
        "command": "report",
        "seed": seed,
        "systems": systems.iter().map(|&(k, n, m, c, r, b, a, v)| json!({
            "k": k, "n": n, "m": m, "crossings": c, "realized": r, "bound": opt(b), "applicable": a, "valid": v,
        })).collect::<Vec<_>>(),
        "exact": exact,
        "certify": traces,
        "planarize": planar,
    });
    emit(output, json, || {
        let mut s = String::from("k,n,m,crossings,realized,bound,applicable,valid\n");
        for &(k, n, m, c, r, b, a, v) in &systems {
            let _ = writeln!(s, "{k},{n},{m},{c},{r},{},{a},{v}", csv_f64(b));
        }
        s
    })?;
    Ok(EXIT_OK)
}
