use std::fs::File;
use std::io::{BufReader, BufWriter};

use permcode_core::auxgraph::{graph_stats, TriangleCount, DEFAULT_WORK_BUDGET};
use permcode_core::balls::{ball_enumerate, ball_size, bounds_table, BoundsRow};
use permcode_core::codes::{
    self, io, verify_min_distance, MinDistance, VerifyMode, DEFAULT_VERIFY_BUDGET,
};
use permcode_core::metrics::bfs_distance;
use permcode_core::{
    selftest, AuxGraphSpec, CensusMode, Code, Error, GeneratorSet, MetricKind, Permutation,
    Result,
};
use serde_json::{json, Value};

use crate::output::{big, text_table, Output};
use crate::{Cli, Command, MethodArg};

pub struct Outcome {
    pub output: Output,
    /// Line for stderr when the run completed but its check failed.
    pub failure: Option<String>,
}

impl From<Output> for Outcome {
    fn from(output: Output) -> Self {
        Outcome {
            output,
            failure: None,
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let seed = cli.global.seed.unwrap_or(0);
    let budget = cli.global.work_budget;
    match &cli.command {
        Command::Dist {
            metric,
            oracle,
            p,
            q,
        } => dist((*metric).into(), *oracle, p, q),
        Command::Ball {
            metric,
            n,
            radius,
            center,
            list,
        } => ball((*metric).into(), *n, *radius, center.as_deref(), *list).map(Into::into),
        Command::Bounds {
            metric,
            n_min,
            n_max,
            d_min,
            d_max,
        } => bounds((*metric).into(), *n_min, *n_max, *d_min, *d_max).map(Into::into),
        Command::GraphStats {
            metric,
            n,
            d,
            exact: _,
            samples,
        } => {
            let mode = match samples {
                Some(samples) => CensusMode::Sampled {
                    samples: *samples,
                    seed,
                },
                None => CensusMode::Exact,
            };
            stats((*metric).into(), *n, *d, mode, budget.unwrap_or(DEFAULT_WORK_BUDGET))
                .map(Into::into)
        }
        Command::Construct {
            method,
            metric,
            n,
            min_distance,
            restarts,
            passes,
            output,
        } => construct(
            *method,
            (*metric).into(),
            *n,
            *min_distance,
            seed,
            *restarts,
            *passes,
            output,
        )
        .map(Into::into),
        Command::Verify { file, sampled } => {
            let mode = match sampled {
                Some(pairs) => VerifyMode::Sampled {
                    pairs: *pairs,
                    seed,
                },
                None => VerifyMode::Exhaustive,
            };
            let budget = budget.map_or(DEFAULT_VERIFY_BUDGET, |b| b.min(u64::MAX as u128) as u64);
            verify(file, mode, budget)
        }
        Command::Rank { perm } => rank(perm).map(Into::into),
        Command::Unrank { n, rank } => unrank(*n, *rank).map(Into::into),
        Command::Selftest { n_max } => Ok(self_test(*n_max)),
    }
}

fn parse_perm(s: &str) -> Result<Permutation> {
    s.parse()
}

fn single(json: Value, header: Vec<&'static str>, row: Vec<String>, text: String) -> Output {
    Output {
        json,
        header,
        rows: vec![row],
        text,
    }
}

fn dist(metric: MetricKind, oracle: bool, p: &str, q: &str) -> Result<Outcome> {
    let (pp, qq) = (parse_perm(p)?, parse_perm(q)?);
    let d = metric.distance(&pp, &qq)?;
    let walked = if oracle {
        let gens = GeneratorSet::new(metric, pp.len())?;
        bfs_distance(&pp, &qq, &gens, None)?.distance()
    } else {
        None
    };
    let mut json = json!({
        "command": "dist",
        "config": { "metric": metric, "p": pp, "q": qq, "oracle": oracle },
        "distance": d,
    });
    let mut header = vec!["metric", "p", "q", "distance"];
    let mut row = vec![metric.to_string(), pp.to_string(), qq.to_string(), d.to_string()];
    if oracle {
        json["oracle_distance"] = json!(walked);
        header.push("oracle_distance");
        row.push(walked.map_or_else(String::new, |w| w.to_string()));
    }
    let failure = (oracle && walked != Some(d)).then(|| {
        format!(
            "error kind=oracle-mismatch message=\"closed form {d}, search {}\"",
            walked.map_or_else(|| "none".to_string(), |w| w.to_string())
        )
    });
    Ok(Outcome {
        output: single(json, header, row, d.to_string()),
        failure,
    })
}

fn ball(
    metric: MetricKind,
    n: usize,
    radius: u32,
    center: Option<&str>,
    list: bool,
) -> Result<Output> {
    let size = ball_size(n, radius, metric)?.size;
    let center = match center {
        Some(c) => {
            let c = parse_perm(c)?;
            if c.len() != n {
                return Err(Error::LengthMismatch {
                    left: n,
                    right: c.len(),
                });
            }
            c
        }
        None => Permutation::identity(n)?,
    };
    let mut json = json!({
        "command": "ball",
        "config": { "metric": metric, "n": n, "radius": radius, "center": center, "list": list },
        "size": size,
    });
    let mut text = size.to_string();
    let mut rows = vec![vec![metric.to_string(), n.to_string(), radius.to_string(), size.to_string()]];
    if list {
        let members = ball_enumerate(&center, radius, metric);
        json["members"] = json!(members);
        rows = members
            .iter()
            .map(|m| {
                vec![
                    metric.to_string(),
                    n.to_string(),
                    radius.to_string(),
                    size.to_string(),
                    m.to_string(),
                ]
            })
            .collect();
        for m in &members {
            text.push('\n');
            text.push_str(&m.to_string());
        }
    }
    let mut header = vec!["metric", "n", "radius", "size"];
    if list {
        header.push("member");
    }
    Ok(Output {
        json,
        header,
        rows,
        text,
    })
}

const BOUNDS_HEADER: [&str; 10] = [
    "metric", "n", "D", "gv_num", "gv_den", "gv_ceil", "sp_num", "sp_den", "sp_floor", "known_exact",
];

fn bounds_cells(r: &BoundsRow) -> Vec<String> {
    vec![
        r.metric.to_string(),
        r.n.to_string(),
        r.min_distance.to_string(),
        r.gv_num.to_string(),
        r.gv_den.to_string(),
        r.gv_ceil.to_string(),
        r.sp_num.to_string(),
        r.sp_den.to_string(),
        r.sp_floor.to_string(),
        r.known_exact.map_or_else(String::new, |k| k.to_string()),
    ]
}

fn bounds(metric: MetricKind, n_min: usize, n_max: usize, d_min: u32, d_max: u32) -> Result<Output> {
    if n_min > n_max || d_min > d_max {
        return Err(Error::OutOfRange(format!(
            "empty range n {n_min}..={n_max}, D {d_min}..={d_max}"
        )));
    }
    let rows = bounds_table(n_min..=n_max, d_min..=d_max, metric)?;
    let cells: Vec<Vec<String>> = rows.iter().map(bounds_cells).collect();
    Ok(Output {
        json: json!({
            "command": "bounds",
            "config": { "metric": metric, "n_min": n_min, "n_max": n_max, "d_min": d_min, "d_max": d_max },
            "rows": rows,
        }),
        header: BOUNDS_HEADER.to_vec(),
        text: text_table(&BOUNDS_HEADER, &cells),
        rows: cells,
    })
}

fn stats(metric: MetricKind, n: usize, d: u32, mode: CensusMode, budget: u128) -> Result<Output> {
    let spec = AuxGraphSpec::new(n, d, metric)?;
    let s = graph_stats(&spec, mode, budget)?;
    let (config_mode, triangles) = match s.triangles {
        TriangleCount::Exact { value } => (
            json!({ "mode": "exact", "work_budget": big(budget) }),
            json!({ "mode": "exact", "value": big(value) }),
        ),
        TriangleCount::Sampled(e) => (
            json!({ "mode": "sampled", "samples": e.samples, "seed": e.seed }),
            json!({ "mode": "sampled", "value": e.estimate, "stderr": e.stderr }),
        ),
    };
    let mut config = json!({ "metric": metric, "n": n, "d": d });
    config
        .as_object_mut()
        .expect("object")
        .extend(config_mode.as_object().expect("object").clone());
    let simple = s.simple_bound;
    let json = json!({
        "command": "graph-stats",
        "config": config,
        "n": n,
        "d": d,
        "metric": metric,
        "vertices": s.vertices,
        "max_degree": s.max_degree,
        "triangles": triangles,
        "normalized_ratio": s.normalized_ratio,
        "lemma_cap": big(s.lemma_cap),
        "simple_bound": { "num": simple.numer(), "den": simple.denom(), "value": *simple.numer() as f64 / *simple.denom() as f64 },
        "aks_bound": { "value": s.aks_bound.value, "triangle_free": s.aks_bound.triangle_free },
    });
    let t_value = match s.triangles {
        TriangleCount::Exact { value } => value.to_string(),
        TriangleCount::Sampled(e) => e.estimate.to_string(),
    };
    let stderr = s.triangles.stderr().map_or_else(String::new, |e| e.to_string());
    let mode_name = match s.triangles {
        TriangleCount::Exact { .. } => "exact",
        TriangleCount::Sampled(_) => "sampled",
    };
    let header = vec![
        "metric",
        "n",
        "d",
        "vertices",
        "max_degree",
        "triangle_mode",
        "triangles",
        "triangles_stderr",
        "normalized_ratio",
        "lemma_cap",
        "simple_bound",
        "aks_bound",
    ];
    let row = vec![
        metric.to_string(),
        n.to_string(),
        d.to_string(),
        s.vertices.to_string(),
        s.max_degree.to_string(),
        mode_name.to_string(),
        t_value.clone(),
        stderr.clone(),
        s.normalized_ratio.to_string(),
        s.lemma_cap.to_string(),
        simple.to_string(),
        s.aks_bound.value.to_string(),
    ];
    let mut text = format!(
        "metric            {metric}\nn                 {n}\nd                 {d}\nvertices          {}\nmax_degree        {}\ntriangles         {t_value} ({mode_name}",
        s.vertices, s.max_degree
    );
    if !stderr.is_empty() {
        text.push_str(&format!(", stderr {stderr}"));
    }
    text.push_str(&format!(
        ")\nnormalized_ratio  {}\nlemma_cap         {}\nsimple_bound      {simple}\naks_bound         {}{}",
        s.normalized_ratio,
        s.lemma_cap,
        s.aks_bound.value,
        if s.aks_bound.triangle_free { " (triangle-free)" } else { "" }
    ));
    Ok(single(json, header, row, text))
}

#[allow(clippy::too_many_arguments)]
fn construct(
    method: MethodArg,
    metric: MetricKind,
    n: usize,
    min_distance: Option<u32>,
    seed: u64,
    restarts: u32,
    passes: u32,
    path: &std::path::Path,
) -> Result<Output> {
    let need_d = || {
        min_distance.ok_or_else(|| Error::OutOfRange("-D is required for this method".into()))
    };
    let mut local_search = None;
    let mut config = json!({ "method": method_name(method), "metric": metric, "n": n });
    let code = match method {
        MethodArg::Greedy => {
            let d = need_d()?;
            config["D"] = json!(d);
            codes::construct_greedy_lex(n, d, metric)?
        }
        MethodArg::Random => {
            let d = need_d()?;
            config["D"] = json!(d);
            config["seed"] = json!(seed);
            config["restarts"] = json!(restarts);
            codes::construct_random_greedy(n, d, metric, seed, restarts)?
        }
        MethodArg::TriangleAware => {
            let d = need_d()?;
            config["D"] = json!(d);
            config["seed"] = json!(seed);
            config["passes"] = json!(passes);
            let (code, report) = codes::construct_triangle_aware(n, d, metric, seed, passes)?;
            local_search = Some(report);
            code
        }
        MethodArg::Parity => {
            if metric != MetricKind::Kendall || min_distance.is_some_and(|d| d != 2) {
                return Err(Error::OutOfRange(
                    "the parity code is defined for the Kendall metric with D = 2".into(),
                ));
            }
            config["D"] = json!(2);
            codes::construct_parity_kendall(n)?
        }
    };
    config["output"] = json!(path.display().to_string());
    let file = File::create(path)?;
    io::write_code(&code, BufWriter::new(file))?;
    let row = BoundsRow::new(n, code.design_distance(), metric)?;
    let gv = row.gv_lower();
    let gv_ratio = code.len() as f64 * *gv.denom() as f64 / *gv.numer() as f64;
    let mut json = json!({
        "command": "construct",
        "config": config,
        "size": code.len(),
        "gv_ceil": row.gv_ceil,
        "sp_floor": row.sp_floor,
        "gv_ratio": gv_ratio,
        "known_exact": row.known_exact,
    });
    let mut header = vec!["method", "metric", "n", "D", "seed", "size", "gv_ceil", "sp_floor", "gv_ratio"];
    let seed_cell = code.provenance().seed.map_or_else(String::new, |s| s.to_string());
    let mut row_cells = vec![
        method_name(method).to_string(),
        metric.to_string(),
        n.to_string(),
        code.design_distance().to_string(),
        seed_cell,
        code.len().to_string(),
        row.gv_ceil.to_string(),
        row.sp_floor.to_string(),
        gv_ratio.to_string(),
    ];
    let mut text = format!(
        "{} words written to {} (GV {}, sphere packing {}, ratio to GV {gv_ratio:.4})",
        code.len(),
        path.display(),
        row.gv_ceil,
        row.sp_floor
    );
    if let Some(r) = local_search {
        json["local_search"] = json!(r);
        header.extend(["phase_one_size", "passes_run", "swaps"]);
        row_cells.extend([
            r.phase_one_size.to_string(),
            r.passes_run.to_string(),
            r.swaps.to_string(),
        ]);
        text.push_str(&format!(
            "\nlocal search: {} -> {} in {} passes, {} swaps",
            r.phase_one_size,
            code.len(),
            r.passes_run,
            r.swaps
        ));
    }
    Ok(single(json, header, row_cells, text))
}

fn method_name(m: MethodArg) -> &'static str {
    match m {
        MethodArg::Greedy => "greedy",
        MethodArg::Random => "random",
        MethodArg::TriangleAware => "triangle-aware",
        MethodArg::Parity => "parity",
    }
}

fn verify(path: &std::path::Path, mode: VerifyMode, budget: u64) -> Result<Outcome> {
    let code: Code = io::read_code(BufReader::new(File::open(path)?))?;
    let report = verify_min_distance(&code, mode, budget)?;
    let mut config = json!({ "file": path.display().to_string() });
    match mode {
        VerifyMode::Exhaustive => {
            config["mode"] = json!("exhaustive");
            config["work_budget"] = json!(budget);
        }
        VerifyMode::Sampled { pairs, seed } => {
            config["mode"] = json!("sampled");
            config["pairs"] = json!(pairs);
            config["seed"] = json!(seed);
        }
    }
    let min = match report.min_distance {
        MinDistance::Finite(d) => d.to_string(),
        MinDistance::Infinite => "inf".to_string(),
    };
    let witness = report
        .witness
        .map(|(a, b)| (a.to_string(), b.to_string()));
    let json = json!({
        "command": "verify",
        "config": config,
        "metric": code.metric(),
        "n": code.n(),
        "D": code.design_distance(),
        "size": code.len(),
        "min_distance": report.min_distance,
        "witness": witness,
        "pairs_checked": report.pairs_checked,
        "meets_design": report.meets_design,
    });
    let (wa, wb) = witness.clone().unwrap_or_default();
    let header = vec![
        "metric",
        "n",
        "D",
        "size",
        "mode",
        "pairs_checked",
        "min_distance",
        "witness_a",
        "witness_b",
        "meets_design",
    ];
    let mode_name = if matches!(mode, VerifyMode::Exhaustive) {
        "exhaustive"
    } else {
        "sampled"
    };
    let row = vec![
        code.metric().to_string(),
        code.n().to_string(),
        code.design_distance().to_string(),
        code.len().to_string(),
        mode_name.to_string(),
        report.pairs_checked.to_string(),
        min.clone(),
        wa.clone(),
        wb.clone(),
        report.meets_design.to_string(),
    ];
    let mut text = format!(
        "{} words, {} metric, n = {}, D = {}\n{mode_name}: {} pairs, minimum distance {min}",
        code.len(),
        code.metric(),
        code.n(),
        code.design_distance(),
        report.pairs_checked
    );
    if witness.is_some() {
        text.push_str(&format!(" between {wa} and {wb}"));
    }
    text.push_str(if report.meets_design { "\nok" } else { "\nVIOLATION" });
    let failure = (!report.meets_design).then(|| {
        format!(
            "error kind=distance-violation message=\"minimum distance {min} below design {} ({wa} / {wb})\"",
            code.design_distance()
        )
    });
    Ok(Outcome {
        output: single(json, header, row, text),
        failure,
    })
}

fn rank(perm: &str) -> Result<Output> {
    let p = parse_perm(perm)?;
    let r = p.rank().value();
    Ok(single(
        json!({ "command": "rank", "config": { "perm": p }, "n": p.len(), "rank": r }),
        vec!["perm", "n", "rank"],
        vec![p.to_string(), p.len().to_string(), r.to_string()],
        r.to_string(),
    ))
}

fn unrank(n: usize, r: u64) -> Result<Output> {
    let p = Permutation::unrank(n, r)?;
    Ok(single(
        json!({ "command": "unrank", "config": { "n": n, "rank": r }, "perm": p }),
        vec!["n", "rank", "perm"],
        vec![n.to_string(), r.to_string(), p.to_string()],
        p.to_string(),
    ))
}

fn self_test(n_max: usize) -> Outcome {
    let checks = selftest::run(n_max);
    let failed = checks.iter().filter(|c| !c.passed).count();
    let mut text = String::new();
    for c in &checks {
        text.push_str(&format!(
            "{} {} ({} cases, {} failures)\n",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.cases,
            c.failures
        ));
    }
    text.push_str(&format!("{} checks, {} failed", checks.len(), failed));
    let rows = checks
        .iter()
        .map(|c| {
            vec![
                c.name.clone(),
                c.passed.to_string(),
                c.cases.to_string(),
                c.failures.to_string(),
            ]
        })
        .collect();
    let output = Output {
        json: json!({
            "command": "selftest",
            "config": { "n_max": n_max },
            "checks": checks,
            "passed": failed == 0,
        }),
        header: vec!["name", "passed", "cases", "failures"],
        rows,
        text,
    };
    Outcome {
        output,
        failure: (failed > 0).then(|| format!("error kind=selftest-failed message=\"{failed} checks failed\"")),
    }
}
