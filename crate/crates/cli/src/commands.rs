use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde_json::{json, Value};

use patstat_core::acceptance;
use patstat_core::extremal::{delta_profile, max_occurrences, sample_mean_occurrences};
use patstat_core::layered::{
    cooccurrence_table, delta_mixed_first_layers, delta_s_mn, optimize_simplex, s_mn_self_similar, s_mn_shapes,
    upper_bound_peel, Argmax, DEFAULT_COV_PAIRS,
};
use patstat_core::moments::{
    self, dual_embedding_count_with, min_delta_search_with, moment_report, pair_symmetry_classes_with,
    second_moment_exact_with, second_moment_from_embeddings_with, trace_sum, word_moment_report, word_weak_bound,
    Limits, MomentReport,
};
use patstat_core::optimize::OptimizerConfig;
use patstat_core::{
    count_occurrences, density, DensityResult, Error, ExtremalResult, LayeredObjectiveSpec, PatternSet, Permutation,
    Space, WordPattern,
};

use crate::args::{
    CountArgs, DeltaArgs, LayeredCommand, LimitArg, MomentsCommand, ProfileArgs, SampleArgs, SetArg, SpaceArgs,
    VerifyArgs,
};
use crate::output::{dec3, int_str, rational_json, rational_text, Output, Table};

pub type Result<T> = std::result::Result<T, Error>;

fn pattern_set(arg: &SetArg) -> Result<PatternSet> {
    let patterns: Vec<WordPattern> = arg.set.iter().flatten().cloned().collect();
    PatternSet::new(patterns).map_err(|e| Error::InvalidSet(format!("--set: {e}")))
}

fn space(args: &SpaceArgs) -> Space {
    match args.k {
        Some(k) => Space::Words { k },
        None => Space::Permutations,
    }
}

/// JSON number when it fits in `u64`, decimal string otherwise.
fn int_json(x: &BigInt) -> Value {
    x.to_u64().map_or_else(|| int_str(x), Value::from)
}

fn u128_json(x: u128) -> Value {
    u64::try_from(x).map_or_else(|_| Value::String(x.to_string()), Value::from)
}

pub fn count(args: &CountArgs) -> Result<Output> {
    let set = pattern_set(&args.set)?;
    let nu = count_occurrences(&set, &args.word)?;
    let d = density(&set, &args.word)?;
    let json = json!({ "count": nu, "density": rational_json(&d) });
    let table = Table::record([
        ("count", nu.to_string()),
        ("density_num", d.numer().to_string()),
        ("density_den", d.denom().to_string()),
    ]);
    Ok(Output::new(json, table).with_text(format!("{nu}\n")))
}

fn extremal_json(r: &ExtremalResult) -> Value {
    json!({
        "mu": r.mu,
        "delta_num": int_json(r.delta.numer()),
        "delta_den": int_json(r.delta.denom()),
        "witnesses": r.witnesses.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        "searched": u128_json(r.searched),
    })
}

pub fn delta(args: &DeltaArgs) -> Result<Output> {
    let set = pattern_set(&args.set)?;
    let r = max_occurrences(&set, space(&args.space), args.n, args.space.restrict, args.space.budget())?;
    let witnesses: Vec<String> = r.witnesses.iter().map(|w| w.to_string()).collect();
    let table = Table::record([
        ("mu", r.mu.to_string()),
        ("delta_num", r.delta.numer().to_string()),
        ("delta_den", r.delta.denom().to_string()),
        ("searched", r.searched.to_string()),
        ("witnesses", witnesses.join(" ")),
    ]);
    let text = Table::record([
        ("n", r.n.to_string()),
        ("restriction", r.restriction.to_string()),
        ("mu", r.mu.to_string()),
        ("delta", rational_text(&r.delta)),
        ("searched", r.searched.to_string()),
        ("witnesses", format!("{} [{}]", witnesses.len(), witnesses.join(" "))),
    ])
    .text();
    Ok(Output::new(extremal_json(&r), table).with_text(text))
}

pub fn profile(args: &ProfileArgs) -> Result<Output> {
    let set = pattern_set(&args.set)?;
    let (lo, hi) = args.n;
    let rows = delta_profile(&set, space(&args.space), lo..=hi, args.space.restrict, args.space.budget())?;
    let mut table = Table::new(["n", "delta_num", "delta_den", "delta"]);
    let mut json_rows = Vec::new();
    for (n, d) in &rows {
        table.push(vec![
            n.to_string(),
            d.numer().to_string(),
            d.denom().to_string(),
            dec3(d.to_f64().unwrap_or(f64::NAN)),
        ]);
        json_rows.push(json!({ "n": n, "delta_num": int_json(d.numer()), "delta_den": int_json(d.denom()) }));
    }
    Ok(Output::new(Value::Array(json_rows), table))
}

pub fn sample(args: &SampleArgs, seed: u64) -> Result<Output> {
    let (mean, var) = sample_mean_occurrences(&args.perm, args.n, args.samples, seed)?;
    let exact = moments::mean_exact(&args.perm, args.n);
    let json = json!({
        "perm": args.perm.to_string(),
        "n": args.n,
        "samples": args.samples,
        "seed": seed,
        "mean": mean,
        "variance": var,
        "exact_mean": rational_json(&exact),
    });
    let table = Table::record([
        ("mean", dec3(mean)),
        ("variance", dec3(var)),
        ("exact_mean", rational_text(&exact)),
        ("samples", args.samples.to_string()),
        ("seed", seed.to_string()),
    ]);
    Ok(Output::new(json, table))
}

fn argmax_text(a: &Argmax) -> String {
    match a {
        Argmax::Weights(w) => {
            let parts: Vec<String> = w.as_slice().iter().map(|&v| dec3(v)).collect();
            format!("({})", parts.join(", "))
        }
        Argmax::Scalar(x) => dec3(*x),
    }
}

fn density_fields(r: &DensityResult) -> Vec<(&'static str, String)> {
    vec![
        ("value", dec3(r.value)),
        ("kind", serde_json::to_value(r.kind).unwrap().as_str().unwrap().to_string()),
        ("method", serde_json::to_value(r.method).unwrap().as_str().unwrap().to_string()),
        ("argmax", argmax_text(&r.argmax)),
        ("certificate", format!("{:.1e}", r.certificate)),
        ("converged", r.converged.to_string()),
    ]
}

fn density_output(r: &DensityResult, extra: Value) -> Output {
    let mut json = serde_json::to_value(r).expect("density results serialize");
    if let (Value::Object(map), Value::Object(more)) = (&mut json, extra) {
        map.extend(more);
    }
    Output::new(json, Table::record(density_fields(r)))
}

pub fn layered(cmd: &LayeredCommand, seed: u64) -> Result<Output> {
    match cmd {
        LayeredCommand::Density {
            shapes,
            parts,
            multistarts,
        } => {
            let spec = LayeredObjectiveSpec::parse(shapes)?;
            let config = OptimizerConfig {
                multistarts: *multistarts,
                seed,
                ..OptimizerConfig::default()
            };
            let r = optimize_simplex(&spec, *parts, &config)?;
            Ok(density_output(&r, json!({ "shapes": spec.to_string(), "parts": parts })))
        }
        LayeredCommand::Smn { m, n, parts } => {
            let closed = delta_s_mn(*m, *n)?;
            let attained = s_mn_self_similar(*m, *n)?;
            let mut json = json!({
                "m": m,
                "n": n,
                "closed_form": closed,
                "attained": attained,
            });
            let mut fields = vec![
                ("closed_form", format!("{} (upper bound)", dec3(closed.value))),
                ("attained", dec3(attained.value)),
                ("attained_ratio", dec3(first_weight(&attained))),
            ];
            if let Some(r) = parts {
                let spec = LayeredObjectiveSpec::new(s_mn_shapes(*m as usize, *n as usize))?;
                let config = OptimizerConfig {
                    seed,
                    ..OptimizerConfig::default()
                };
                let opt = optimize_simplex(&spec, *r, &config)?;
                fields.push(("optimizer", format!("{} ({r} parts)", dec3(opt.value))));
                json["optimizer"] = serde_json::to_value(&opt).expect("density results serialize");
            }
            Ok(Output::new(json, Table::record(fields)))
        }
        LayeredCommand::Covtable { pairs } => {
            let pairs = pairs.clone().unwrap_or_else(|| DEFAULT_COV_PAIRS.to_vec());
            let rows = cooccurrence_table(&pairs)?;
            let mut table = Table::new(["a", "b", "delta_single", "delta_pair", "argmax", "cov"]);
            for r in &rows {
                table.push(vec![
                    r.a.to_string(),
                    r.b.to_string(),
                    r.delta_single.to_string(),
                    r.delta_pair.to_string(),
                    r.argmax.to_string(),
                    r.cov.to_string(),
                ]);
            }
            let json = serde_json::to_value(&rows).expect("rows serialize");
            Ok(Output::new(json, table).with_text(cov_grid(&rows)))
        }
        LayeredCommand::Bound { shape, inner } => {
            let v = upper_bound_peel(shape, *inner)?;
            let json = json!({ "shape": shape.to_string(), "inner": inner, "bound": v });
            Ok(Output::new(json, Table::record([("shape", shape.to_string()), ("bound", dec3(v))])))
        }
        LayeredCommand::Mixed { total, first } => {
            let r = delta_mixed_first_layers(*total, first)?;
            Ok(density_output(&r, json!({ "total": total, "first_layers": first })))
        }
    }
}

fn first_weight(r: &DensityResult) -> f64 {
    match &r.argmax {
        Argmax::Scalar(x) => *x,
        Argmax::Weights(w) => w.as_slice()[0],
    }
}

/// The `a \ b` grid: `--` below the diagonal, blank where no pair was asked.
fn cov_grid(rows: &[patstat_core::layered::CovRow]) -> String {
    let mut a_vals: Vec<u64> = rows.iter().map(|r| r.a).collect();
    let mut b_vals: Vec<u64> = rows.iter().map(|r| r.b).collect();
    a_vals.sort_unstable();
    a_vals.dedup();
    b_vals.sort_unstable();
    b_vals.dedup();
    let mut headers = vec!["a\\b".to_string()];
    headers.extend(b_vals.iter().map(u64::to_string));
    let mut table = Table::new(headers);
    for &a in &a_vals {
        let mut line = vec![a.to_string()];
        for &b in &b_vals {
            line.push(match rows.iter().find(|r| r.a == a && r.b == b) {
                Some(r) => dec3(r.cov),
                None if b <= a => "--".into(),
                None => String::new(),
            });
        }
        table.push(line);
    }
    table.text()
}

fn report_json(label: Value, r: &MomentReport) -> Value {
    json!({
        "patterns": label,
        "m": r.m,
        "l": r.l,
        "trace": int_str(&r.trace_value),
        "baseline": r.baseline.to_string(),
        "delta_stat": r.delta_stat.to_string(),
        "denominator": int_str(&r.denominator),
        "leading_coeff": rational_json(&r.leading_coeff),
        "std_dev_leading": r.std_dev_leading(),
    })
}

fn report_fields(r: &MomentReport) -> Vec<(&'static str, String)> {
    vec![
        ("trace", r.trace_value.to_string()),
        ("baseline", r.baseline.to_string()),
        ("delta_stat", r.delta_stat.to_string()),
        ("denominator", r.denominator.to_string()),
        ("leading_coeff", r.leading_coeff.to_string()),
        ("leading_coeff_f64", format!("{:.6e}", r.leading_coeff.to_f64().unwrap_or(f64::NAN))),
    ]
}

fn limits(arg: &LimitArg, set: impl FnOnce(&mut Limits, usize)) -> Limits {
    let mut l = Limits::default();
    if let Some(v) = arg.limit {
        set(&mut l, v);
    }
    l
}

fn perm_list(ps: &[Permutation]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

pub fn moments_cmd(cmd: &MomentsCommand) -> Result<Output> {
    match cmd {
        MomentsCommand::Delta { perm } => {
            moments::delta_stat(perm)?;
            let r = moment_report(perm, perm)?;
            let class: Vec<Permutation> = perm.symmetry_class().into_iter().collect();
            let mut json = report_json(json!([perm.to_string()]), &r);
            json["symmetry_class"] = json!(perm_list(&class));
            let mut fields = vec![("perm", perm.to_string())];
            fields.extend(report_fields(&r));
            fields.push(("sqrt_c", format!("{:.6e}", r.std_dev_leading())));
            fields.push(("symmetry_class", perm_list(&class).join(" ")));
            Ok(Output::new(json, Table::record(fields)))
        }
        MomentsCommand::Table { m, limit } => {
            let lim = limits(limit, |l, v| l.sweep_m = v);
            let classes = moments::delta_classes_with(*m, &lim)?;
            let mut table = Table::new(["representative", "class_size", "delta"]);
            let mut rows = Vec::new();
            for c in &classes {
                table.push(vec![c.representative.to_string(), c.size.to_string(), c.delta.to_string()]);
                rows.push(json!({
                    "representative": c.representative.to_string(),
                    "class_size": c.size,
                    "delta_stat": int_str(&c.delta),
                }));
            }
            Ok(Output::new(Value::Array(rows), table))
        }
        MomentsCommand::Pistar { m, limit } => {
            let lim = limits(limit, |l, v| l.sweep_m = v);
            let r = min_delta_search_with(*m, &lim)?;
            let json = json!({
                "m": m,
                "delta_stat": int_str(&r.value),
                "representative": r.representative().to_string(),
                "minimizers": perm_list(&r.attained_by),
            });
            let table = Table::record([
                ("m", m.to_string()),
                ("delta_stat", r.value.to_string()),
                ("representative", r.representative().to_string()),
                ("minimizers", perm_list(&r.attained_by).join(" ")),
            ]);
            Ok(Output::new(json, table))
        }
        MomentsCommand::Cov { p1, p2 } => {
            let r = moment_report(p1, p2)?;
            let json = report_json(json!([p1.to_string(), p2.to_string()]), &r);
            let mut fields = vec![("patterns", format!("{p1} {p2}"))];
            fields.extend(report_fields(&r));
            Ok(Output::new(json, Table::record(fields)))
        }
        MomentsCommand::Word { p, p2 } => {
            let q = p2.as_ref().unwrap_or(p);
            let r = word_moment_report(p, q)?;
            let mut json = report_json(json!([p.to_string(), q.to_string()]), &r);
            let mut fields = vec![("patterns", format!("{p} {q}"))];
            fields.extend(report_fields(&r));
            if r.l < r.m {
                let bound = word_weak_bound(r.m, r.l);
                json["weak_bound"] = int_str(&bound);
                json["exceeds_weak_bound"] = json!(r.trace_value > bound);
                fields.push(("weak_bound", bound.to_string()));
            }
            fields.push(("delta_positive", r.delta_stat.is_positive().to_string()));
            Ok(Output::new(json, Table::record(fields)))
        }
        MomentsCommand::Oracle { p1, p2, ell, limit } => {
            let lim = limits(limit, |l, v| l.oracle_size = v);
            let count = BigInt::from(dual_embedding_count_with(p1, p2, *ell, &lim)?);
            let mut json = json!({
                "patterns": [p1.to_string(), p2.to_string()],
                "ell": ell,
                "count": int_str(&count),
            });
            let mut fields = vec![("patterns", format!("{p1} {p2}")), ("ell", ell.to_string()), ("count", count.to_string())];
            if *ell == 1 {
                let t = trace_sum(&p1.to_pattern(), &p2.to_pattern())?;
                json["trace_sum"] = int_str(&t);
                fields.push(("trace_sum", t.to_string()));
            }
            Ok(Output::new(json, Table::record(fields)))
        }
        MomentsCommand::Classes { m, limit } => {
            let lim = limits(limit, |l, v| l.class_m = v);
            let mut classes = pair_symmetry_classes_with(*m, &lim)?;
            classes.sort_by(|a, b| b.coefficient.cmp(&a.coefficient).then(a.representative.cmp(&b.representative)));
            let mut table = Table::new(["pair", "class_size", "coefficient", "value"]);
            let mut rows = Vec::new();
            for c in &classes {
                let pair = format!("{{{},{}}}", c.representative.0, c.representative.1);
                table.push(vec![
                    pair.clone(),
                    c.size.to_string(),
                    c.coefficient.to_string(),
                    format!("{:.6e}", c.coefficient.to_f64().unwrap_or(f64::NAN)),
                ]);
                rows.push(json!({
                    "pair": [c.representative.0.to_string(), c.representative.1.to_string()],
                    "class_size": c.size,
                    "coefficient": rational_json(&c.coefficient),
                }));
            }
            Ok(Output::new(Value::Array(rows), table))
        }
        MomentsCommand::Second { perm, n, limit } => {
            let lim = limits(limit, |l, v| l.exact_n = v);
            let direct = second_moment_exact_with(perm, *n, &lim)?;
            let rebuilt = second_moment_from_embeddings_with(perm, *n, &lim)?;
            let mean = moments::mean_exact(perm, *n);
            let var: BigRational = &direct - &mean * &mean;
            let json = json!({
                "perm": perm.to_string(),
                "n": n,
                "mean": rational_json(&mean),
                "second_moment": rational_json(&direct),
                "second_moment_from_embeddings": rational_json(&rebuilt),
                "variance": rational_json(&var),
            });
            let table = Table::record([
                ("mean", rational_text(&mean)),
                ("second_moment", rational_text(&direct)),
                ("from_embeddings", rational_text(&rebuilt)),
                ("variance", rational_text(&var)),
            ]);
            Ok(Output::new(json, table))
        }
    }
}

/// Acceptance report and whether every criterion passed.
pub fn verify(args: &VerifyArgs) -> (Output, bool) {
    let outcomes = acceptance::run_all(args.slow);
    let passed = outcomes.iter().filter(|o| o.passed).count();
    let mut text = String::new();
    let mut table = Table::new(["id", "name", "passed", "seconds", "limit", "detail"]);
    let mut rows = Vec::new();
    for o in &outcomes {
        text.push_str(&format!("{o}\n"));
        table.push(vec![
            o.id.to_string(),
            o.name.to_string(),
            o.passed.to_string(),
            format!("{:.3}", o.elapsed.as_secs_f64()),
            o.limit.as_secs().to_string(),
            o.detail.clone(),
        ]);
        rows.push(json!({
            "id": o.id,
            "name": o.name,
            "passed": o.passed,
            "seconds": o.elapsed.as_secs_f64(),
            "limit_seconds": o.limit.as_secs(),
            "detail": o.detail,
        }));
    }
    text.push_str(&format!("{passed}/{} criteria passed\n", outcomes.len()));
    let all = passed == outcomes.len();
    (Output::new(Value::Array(rows), table).with_text(text), all)
}
