use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use hps_chem::admission::filter_admissible;
use hps_chem::features::{extract_features, DescriptorConfig, Family};
use hps_chem::graph::{parse_graph, parse_graphs, ChemicalGraph};
use hps_chem::spec::{
    check_extension as check, find_embedding, parse_specification, validate_specification, ExtensionWitness,
};
use hps_core::dataset::{apply_log_transform, load_table, normalize, save_table, DataSet};
use hps_core::evaluation::{cross_validate, evaluate_hps_cv, CvReport};
use hps_core::regression::{self, MethodSpec};
use hps_core::splitter::{
    default_grid, emit_phase2_constraint, find_hyperplane, load_model, predict_original, save_model, scan_thresholds,
    train_hps, ScanOutcome, SplitResult,
};

use crate::error::CliError;
use crate::{CheckArgs, DataArgs, EmitArgs, EvaluateArgs, ExtractArgs, GridArgs, PredictArgs, ScanArgs, TrainArgs, ValidateArgs};

type Out = Result<String, CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn method(s: &str) -> Result<MethodSpec, CliError> {
    s.parse().map_err(CliError::Usage)
}

fn side_methods(list: &[String]) -> Result<[MethodSpec; 2], CliError> {
    match list {
        [one] => Ok([method(one)?, method(one)?]),
        [a, b] => Ok([method(a)?, method(b)?]),
        _ => Err(CliError::Usage(format!("--side-methods takes one or two learners, got {}", list.len()))),
    }
}

fn grid(args: &GridArgs) -> Vec<f64> {
    if args.grid.is_empty() {
        default_grid()
    } else {
        args.grid.clone()
    }
}

fn load(args: &DataArgs) -> Result<DataSet, CliError> {
    let ds = load_table(&args.data)?;
    Ok(match args.log_offset {
        Some(c) => apply_log_transform(&ds, c)?,
        None => ds,
    })
}

fn split(norm: &DataSet, theta: Option<f64>, g: &GridArgs, out: &mut String) -> Result<SplitResult, CliError> {
    match theta {
        Some(t) => Ok(find_hyperplane(norm, t)?),
        None => {
            let scan = scan_thresholds(norm, &grid(g), g.min_fraction)?;
            if let Some(w) = &scan.warning {
                writeln!(out, "warning: {w}").unwrap();
            }
            Ok(scan.best)
        }
    }
}

fn describe_split(s: &SplitResult, out: &mut String) {
    let (n1, n2) = s.sizes();
    writeln!(
        out,
        "theta {} | sides {n1}/{n2} | a_max_1 {:.6} a_min_2 {:.6} | lp objective {:.3e}",
        s.theta, s.a_max_1, s.a_min_2, s.lp_objective
    )
    .unwrap();
}

pub fn extract(a: ExtractArgs) -> Out {
    let graphs = parse_graphs(&read(&a.graphs)?)?;
    let admission = filter_admissible(&graphs);
    let kept: Vec<ChemicalGraph> = admission.kept.iter().map(|&i| graphs[i].clone()).collect();
    let mut out = String::new();
    if let Some(path) = &a.rejected_log {
        write(path, &admission.log())?;
    }
    let config = match &a.config {
        Some(path) => serde_json::from_str::<DescriptorConfig>(&read(path)?)
            .map_err(|e| CliError::Other(format!("{}: {e}", path.display())))?,
        None => {
            let families = if a.families.is_empty() {
                Family::ALL.to_vec()
            } else {
                a.families.iter().map(|f| f.parse()).collect::<Result<Vec<Family>, _>>()?
            };
            DescriptorConfig::discover(&kept, a.rho, &families)
        }
    };
    let ids: Vec<String> = kept.iter().enumerate().map(|(i, g)| hps_chem::features::graph_id(g, admission.kept[i])).collect();
    let targets = match &a.targets {
        None => vec![0.0; kept.len()],
        Some(path) => {
            let values = read_targets(path)?;
            ids.iter()
                .map(|id| values.get(id).copied().ok_or_else(|| CliError::Other(format!("no target value for graph {id:?}"))))
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    let mut ds = extract_features(&kept, &targets, &config)?;
    ds.ids = ids;
    ds.target_header = a.target_name.clone();
    save_table(&ds, &a.output)?;
    if let Some(path) = &a.save_config {
        write(path, &(serde_json::to_string_pretty(&config).expect("config serializes") + "\n"))?;
    }
    writeln!(
        out,
        "graphs {} | kept {} | rejected {} | descriptors {}",
        graphs.len(),
        kept.len(),
        admission.rejected.len(),
        config.num_descriptors()
    )
    .unwrap();
    Ok(out)
}

fn read_targets(path: &Path) -> Result<HashMap<String, f64>, CliError> {
    let text = read(path)?;
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut values = HashMap::new();
    for (i, rec) in rdr.records().enumerate() {
        let bad = |m: &str| CliError::Other(format!("{} row {}: {m}", path.display(), i + 1));
        let rec = rec.map_err(|e| bad(&e.to_string()))?;
        let (Some(id), Some(v)) = (rec.get(0), rec.get(1)) else { return Err(bad("needs id and value columns")) };
        let v: f64 = v.parse().map_err(|_| bad(&format!("{v:?} is not a number")))?;
        if values.insert(id.to_string(), v).is_some() {
            return Err(bad(&format!("duplicate id {id:?}")));
        }
    }
    Ok(values)
}

pub fn train(a: TrainArgs) -> Out {
    let ds = load(&a.data)?;
    let (norm, rec) = normalize(&ds)?;
    let mut out = String::new();
    if a.method.eq_ignore_ascii_case("hps") {
        let Some(path) = &a.output else {
            return Err(CliError::Usage("--method hps needs --output for the model file".into()));
        };
        let methods = side_methods(&a.side_methods)?;
        let s = split(&norm, a.theta, &a.grid, &mut out)?;
        let model = train_hps(&norm, &s, methods, &rec, a.seed)?;
        save_model(&model, path)?;
        describe_split(&s, &mut out);
        for w in &model.warnings {
            writeln!(out, "warning: {w}").unwrap();
        }
        for (j, m) in model.sub_models.iter().enumerate() {
            writeln!(out, "side {}: {} with {} descriptors", j + 1, m.method, m.descriptors.len()).unwrap();
        }
        let pred: Vec<f64> =
            ds.features.iter().map(|x| predict_original(&model, x)).collect::<Result<_, _>>()?;
        let r2 = hps_core::evaluation::r_squared(&pred, &ds.targets)?;
        writeln!(out, "training R^2 {r2:.6}").unwrap();
        writeln!(out, "model written to {}", path.display()).unwrap();
    } else {
        let spec = method(&a.method)?;
        let model = regression::fit(&norm, &spec, a.seed)?;
        let pred = regression::predict_all(&model, &norm.features)?;
        let r2 = hps_core::evaluation::r_squared(&pred, &norm.targets)?;
        writeln!(out, "{}: {} with {} descriptors, training R^2 {r2:.6}", spec, model.method, model.descriptors.len())
            .unwrap();
    }
    Ok(out)
}

fn scan_table(scan: &ScanOutcome) -> String {
    let opt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.6}"));
    let optn = |v: Option<usize>| v.map_or("-".to_string(), |x| x.to_string());
    let mut out = String::from("theta\tsize1\tsize2\ta_max_1\ta_min_2\tgap\tlp_objective\tadmissible\n");
    for r in &scan.table {
        writeln!(
            out,
            "{:.2}\t{}\t{}\t{}\t{}\t{}\t{}\t{}{}",
            r.theta,
            optn(r.size1),
            optn(r.size2),
            opt(r.a_max_1),
            opt(r.a_min_2),
            opt(r.gap),
            r.lp_objective.map_or("-".to_string(), |x| format!("{x:.3e}")),
            if r.admissible { "yes" } else { "no" },
            r.error.as_ref().map_or(String::new(), |e| format!("\t{e}")),
        )
        .unwrap();
    }
    out
}

pub fn scan(a: ScanArgs) -> Out {
    let ds = load(&a.data)?;
    let (norm, _) = normalize(&ds)?;
    let scan = scan_thresholds(&norm, &grid(&a.grid), a.grid.min_fraction)?;
    let mut out = scan_table(&scan);
    if let Some(path) = &a.output {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["theta", "size1", "size2", "a_max_1", "a_min_2", "gap", "lp_objective", "admissible", "error"])
            .map_err(|e| CliError::Other(e.to_string()))?;
        let s = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
        let n = |v: Option<usize>| v.map_or(String::new(), |x| x.to_string());
        for r in &scan.table {
            w.write_record([
                r.theta.to_string(),
                n(r.size1),
                n(r.size2),
                s(r.a_max_1),
                s(r.a_min_2),
                s(r.gap),
                s(r.lp_objective),
                r.admissible.to_string(),
                r.error.clone().unwrap_or_default(),
            ])
            .map_err(|e| CliError::Other(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Other(e.to_string()))?;
        write(path, &String::from_utf8(bytes).expect("csv is utf-8"))?;
    }
    if let Some(w) = &scan.warning {
        writeln!(out, "warning: {w}").unwrap();
    }
    write!(out, "selected: ").unwrap();
    describe_split(&scan.best, &mut out);
    Ok(out)
}

fn append_scores(report: &CvReport, csv_out: &mut Vec<u8>, header: bool) -> Result<(), CliError> {
    let mut buf = Vec::new();
    report.write_csv(&mut buf).map_err(|e| CliError::Other(e.to_string()))?;
    let text = String::from_utf8(buf).expect("csv is utf-8");
    for (i, line) in text.lines().enumerate() {
        if i == 0 {
            if header {
                csv_out.extend_from_slice(format!("method,{line}\n").as_bytes());
            }
            continue;
        }
        csv_out.extend_from_slice(format!("\"{}\",{line}\n", report.method).as_bytes());
    }
    Ok(())
}

pub fn evaluate(a: EvaluateArgs) -> Out {
    let ds = load(&a.data)?;
    let mut out = String::new();
    let mut scores = Vec::new();
    let mut first = true;
    for m in &a.methods {
        let spec = method(m)?;
        let report = cross_validate(&ds, &spec, a.folds, a.runs, a.seed)?;
        writeln!(out, "{}", report.summary()).unwrap();
        writeln!(out, "  scores: {}", report.scores.len()).unwrap();
        append_scores(&report, &mut scores, first)?;
        first = false;
    }
    if a.hps {
        let (norm, _) = normalize(&ds)?;
        let methods = side_methods(&a.side_methods)?;
        let s = split(&norm, a.theta, &a.grid, &mut out)?;
        describe_split(&s, &mut out);
        let report = evaluate_hps_cv(&norm, &s, methods, a.folds, a.runs, a.seed)?;
        writeln!(out, "{}", report.combined.summary()).unwrap();
        writeln!(out, "  scores: {}", report.combined.scores.len()).unwrap();
        for side in &report.sides {
            writeln!(out, "  {}", side.summary()).unwrap();
        }
        append_scores(&report.combined, &mut scores, first)?;
    }
    if let Some(path) = &a.scores {
        write(path, &String::from_utf8(scores).expect("csv is utf-8"))?;
    }
    Ok(out)
}

pub fn predict(a: PredictArgs) -> Out {
    let model = load_model(&a.model)?;
    let ds = load_table(&a.data)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Other(e.to_string());
    w.write_record(["id", "prediction"]).map_err(fail)?;
    for (id, x) in ds.ids.iter().zip(&ds.features) {
        let y = predict_original(&model, x)?;
        w.write_record([id.clone(), y.to_string()]).map_err(fail)?;
    }
    let text = String::from_utf8(w.into_inner().map_err(|e| CliError::Other(e.to_string()))?).expect("csv is utf-8");
    match &a.output {
        Some(path) => {
            write(path, &text)?;
            Ok(format!("{} predictions written to {}\n", ds.len(), path.display()))
        }
        None => Ok(text),
    }
}

pub fn emit_constraint(a: EmitArgs) -> Out {
    let model = load_model(&a.model)?;
    let records = emit_phase2_constraint(&model, a.lo, a.hi)?;
    let json = serde_json::to_string_pretty(&records).expect("constraints serialize") + "\n";
    match &a.output {
        Some(path) => {
            write(path, &json)?;
            Ok(format!("{} constraint(s) written to {}\n", records.len(), path.display()))
        }
        None => Ok(json),
    }
}

pub fn validate_spec(a: ValidateArgs) -> Out {
    let spec = parse_specification(&read(&a.spec)?)?;
    let found = validate_specification(&spec);
    let mut out = String::new();
    for v in &found {
        writeln!(out, "{v}").unwrap();
    }
    writeln!(out, "findings={}", found.len()).unwrap();
    Ok(out)
}

pub fn check_extension(a: CheckArgs) -> Out {
    let spec = parse_specification(&read(&a.spec)?)?;
    let g = parse_graph(&read(&a.graph)?)?;
    let mut out = String::new();
    let witness = if a.search {
        match find_embedding(&g, &spec)? {
            Some(w) => {
                if let Some(path) = &a.witness_out {
                    write(path, &(w.to_json() + "\n"))?;
                }
                w
            }
            None => {
                writeln!(out, "no witness found").unwrap();
                writeln!(out, "findings=1").unwrap();
                return Ok(out);
            }
        }
    } else {
        let path = a.witness.as_ref().expect("clap requires --witness without --search");
        ExtensionWitness::from_json(&read(path)?)
            .map_err(|e| CliError::Other(format!("spec-validator: witness {}: {e}", path.display())))?
    };
    let report = check(&g, &spec, &witness)?;
    if a.json {
        out.push_str(&report.to_json());
        out.push('\n');
    } else {
        write!(out, "{report}").unwrap();
        writeln!(out, "findings={}", report.violations.len()).unwrap();
    }
    Ok(out)
}
