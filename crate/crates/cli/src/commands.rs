use std::fs::File;
use std::io::Write;
use std::net::SocketAddr;
use std::path::Path;
use std::sync::Arc;

use errata_core::agreement::{agreement_report, AgreementClass};
use errata_core::collection::{
    collection_to_string, consistency_rates, distribution, read_collection, AnnotationRecord,
    DistributionReport, RecordViolation, ValidationMode,
};
use errata_core::detect::{evaluate, parse_score_file, render_eval, score_table_to_string, Target};
use errata_core::facts::{
    derive_information_errors, derive_simplification_sets, is_maximally_simple,
    parse_universe_fixture, substitution_errors, FactSet, InformationErrorSets, Position,
    SimplificationSets, SubstitutionKind,
};
use errata_core::fixtures::{agreement_collection, reference_collection, synthetic_scores};
use errata_core::table::{Align, TextTable};
use errata_core::Taxonomy;
use errata_service::{open_service, ServiceConfig};
use serde::Serialize;

use crate::error::{exit, CliError};
use crate::{Cli, Command, EvalArgs, FixtureCommand, Format, ServeArgs};

type Out<'a> = &'a mut dyn Write;

pub(crate) fn dispatch(cli: &Cli, out: Out, err: Out) -> Result<i32, CliError> {
    let fmt = cli.format;
    match &cli.command {
        Command::Validate { collection } => validate(collection, fmt, cli.lenient, out),
        Command::Stats { collection } => {
            let records = load_collection(collection, cli.lenient, err)?;
            stats(&records, fmt, out)
        }
        Command::Agreement {
            collection,
            classes,
        } => {
            let records = load_collection(collection, cli.lenient, err)?;
            agreement(&records, classes, fmt, out)
        }
        Command::Eval(args) => eval(args, cli.lenient, fmt, out, err),
        Command::Facts { universe } => facts(universe, fmt, out),
        Command::Serve(args) => serve(args, out),
        Command::Export { config, output } => export(config, output.as_deref(), fmt, out),
        Command::Taxonomy => taxonomy(fmt, out),
        Command::Fixture(cmd) => fixture(cmd, cli.lenient, out, err),
    }
}

fn emit(out: Out, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

fn emit_json<T: Serialize>(out: Out, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("output serializes");
    text.push('\n');
    emit(out, &text)
}

fn write_or_emit(path: Option<&Path>, text: &str, out: Out) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => emit(out, text),
    }
}

fn open(path: &Path) -> Result<File, CliError> {
    File::open(path).map_err(|e| CliError::io(path, e))
}

fn load_collection(path: &Path, lenient: bool, err: Out) -> Result<Vec<AnnotationRecord>, CliError> {
    let mode = if lenient {
        ValidationMode::Lenient
    } else {
        ValidationMode::Strict
    };
    let parsed = read_collection(open(path)?, mode).map_err(|e| CliError::collection(path, e))?;
    for v in &parsed.violations {
        let _ = writeln!(err, "warning: {}: {v}", path.display());
    }
    Ok(parsed.records)
}

#[derive(Serialize)]
struct ValidateOutput<'a> {
    records: usize,
    violations: &'a [RecordViolation],
}

fn validate(path: &Path, fmt: Format, lenient: bool, out: Out) -> Result<i32, CliError> {
    let parsed = read_collection(open(path)?, ValidationMode::Lenient)
        .map_err(|e| CliError::collection(path, e))?;
    let n = parsed.violations.len();
    match fmt {
        Format::Structured => emit_json(
            out,
            &ValidateOutput {
                records: parsed.records.len(),
                violations: &parsed.violations,
            },
        )?,
        Format::Table => {
            let mut text = String::new();
            for v in &parsed.violations {
                text.push_str(&format!("{v}\n"));
            }
            let noun = if n == 1 { "violation" } else { "violations" };
            text.push_str(&format!("{} records, {n} {noun}\n", parsed.records.len()));
            emit(out, &text)?;
        }
    }
    Ok(if n == 0 || lenient { exit::OK } else { exit::VIOLATIONS })
}

#[derive(Serialize)]
struct ConsistencyEntry {
    annotator: String,
    pairs: u64,
    identical: u64,
    rate: Option<f64>,
    not_measurable: Option<String>,
}

#[derive(Serialize)]
struct StatsOutput<'a> {
    distribution: &'a DistributionReport,
    consistency: Vec<ConsistencyEntry>,
}

fn stats(records: &[AnnotationRecord], fmt: Format, out: Out) -> Result<i32, CliError> {
    let dist = distribution(records);
    let rates = consistency_rates(records);
    match fmt {
        Format::Structured => {
            let consistency = rates
                .into_iter()
                .map(|(annotator, r)| match r {
                    Ok(c) => ConsistencyEntry {
                        annotator,
                        pairs: c.pairs,
                        identical: c.identical,
                        rate: Some(c.rate().to_f64()),
                        not_measurable: None,
                    },
                    Err(e) => ConsistencyEntry {
                        annotator,
                        pairs: 0,
                        identical: 0,
                        rate: None,
                        not_measurable: Some(e.reason),
                    },
                })
                .collect();
            emit_json(
                out,
                &StatsOutput {
                    distribution: &dist,
                    consistency,
                },
            )?;
        }
        Format::Table => {
            let mut text = dist.render();
            // The consistency table only appears when the collection has probes.
            if rates.values().any(|r| r.is_ok()) {
                let mut t = TextTable::new([
                    ("Annotator", Align::Left),
                    ("Pairs", Align::Right),
                    ("Identical", Align::Right),
                    ("Consistency", Align::Right),
                ]);
                for (annotator, r) in &rates {
                    match r {
                        Ok(c) => t.row([
                            annotator.clone(),
                            c.pairs.to_string(),
                            c.identical.to_string(),
                            c.render(),
                        ]),
                        Err(_) => t.row([annotator.clone(), "0".into(), "0".into(), "n/a".into()]),
                    }
                }
                text.push('\n');
                text.push_str(&t.render());
            }
            emit(out, &text)?;
        }
    }
    Ok(exit::OK)
}

fn agreement(
    records: &[AnnotationRecord],
    classes: &[AgreementClass],
    fmt: Format,
    out: Out,
) -> Result<i32, CliError> {
    let classes = if classes.is_empty() {
        AgreementClass::ALL.to_vec()
    } else {
        classes.to_vec()
    };
    let report = agreement_report(records, &classes)?;
    match fmt {
        Format::Structured => emit_json(out, &report)?,
        Format::Table => emit(
            out,
            &format!(
                "raters: {} ({} items, {} excluded)\n\n{}",
                report.raters.join(", "),
                report.items,
                report.excluded_items,
                report.render()
            ),
        )?,
    }
    Ok(exit::OK)
}

fn eval(args: &EvalArgs, lenient: bool, fmt: Format, out: Out, err: Out) -> Result<i32, CliError> {
    let n = args.scores.len();
    if args.orientations.len() != 1 && args.orientations.len() != n {
        return Err(CliError::Failure(format!(
            "give one --orientation for all score files or one per file ({n} files, {} orientations)",
            args.orientations.len()
        )));
    }
    if !args.names.is_empty() && args.names.len() != n {
        return Err(CliError::Failure(format!(
            "give one --name per score file ({n} files, {} names)",
            args.names.len()
        )));
    }
    let records = load_collection(&args.collection, lenient, err)?;
    let targets = if args.targets.is_empty() {
        Target::all()
    } else {
        args.targets.clone()
    };
    let mut reports = Vec::with_capacity(n);
    for (i, path) in args.scores.iter().enumerate() {
        let orientation = args.orientations[if args.orientations.len() == 1 { 0 } else { i }];
        let name = match args.names.get(i) {
            Some(name) => name.clone(),
            None => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| format!("detector-{i}")),
        };
        let table = parse_score_file(open(path)?, &name, orientation)
            .map_err(|e| CliError::scores(path, e))?;
        reports.push(evaluate(&table, &records, &targets, args.gold)?);
    }
    match fmt {
        Format::Structured => emit_json(out, &reports)?,
        Format::Table => emit(out, &render_eval(&reports))?,
    }
    let mut status = exit::OK;
    for report in &reports {
        for r in &report.results {
            if let Some(reason) = &r.not_measurable {
                let _ = writeln!(
                    err,
                    "not measurable: {} {}: {reason}",
                    report.detector,
                    r.target.key()
                );
                status = exit::NOT_MEASURABLE;
            }
        }
    }
    Ok(status)
}

#[derive(Serialize)]
struct SubstitutionOutput {
    source: String,
    generation: String,
    kind: SubstitutionKind,
    position: Option<Position>,
}

#[derive(Serialize)]
struct FactsOutput {
    information: InformationErrorSets,
    simplification: SimplificationSets,
    substitutions: Vec<SubstitutionOutput>,
    maximally_simple: bool,
}

fn join_set(s: &FactSet) -> String {
    if s.is_empty() {
        "-".to_string()
    } else {
        s.iter().map(|f| f.as_str()).collect::<Vec<_>>().join(", ")
    }
}

fn facts(path: &Path, fmt: Format, out: Out) -> Result<i32, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let u = parse_universe_fixture(&text).map_err(|e| CliError::fixture(path, e))?;
    let result = FactsOutput {
        information: derive_information_errors(&u)?,
        simplification: derive_simplification_sets(&u)?,
        substitutions: substitution_errors(&u)
            .into_iter()
            .map(|(s, g, v)| SubstitutionOutput {
                source: s.to_string(),
                generation: g.to_string(),
                kind: v.kind,
                position: v.differing_position,
            })
            .collect(),
        maximally_simple: is_maximally_simple(&u),
    };
    match fmt {
        Format::Structured => emit_json(out, &result)?,
        Format::Table => {
            let info = &result.information;
            let simp = &result.simplification;
            let mut t = TextTable::new([("Set", Align::Left), ("Facts", Align::Left)]);
            for (name, set) in [
                ("topic_shift", &info.topic_shift),
                ("faithfulness", &info.faithfulness),
                ("factuality", &info.factuality),
                ("out_of_scope", &simp.out_of_scope),
                ("out_of_scope_new", &simp.out_of_scope_new),
                ("loss", &simp.loss),
                ("summarization", &simp.summarization),
                ("clarification", &simp.clarification),
                ("potential_clarification", &simp.potential_clarification),
            ] {
                t.row([name.to_string(), join_set(set)]);
            }
            let mut text = t.render();
            text.push('\n');
            if result.substitutions.is_empty() {
                text.push_str("substitutions: none\n");
            } else {
                let mut s = TextTable::new([
                    ("Source", Align::Left),
                    ("Generated", Align::Left),
                    ("Kind", Align::Left),
                    ("Position", Align::Left),
                ]);
                for sub in &result.substitutions {
                    s.row([
                        sub.source.clone(),
                        sub.generation.clone(),
                        format!("{:?}", sub.kind).to_lowercase(),
                        sub.position.map_or("-".to_string(), |p| p.to_string()),
                    ]);
                }
                text.push_str(&s.render());
            }
            text.push_str(&format!(
                "maximally simple: {}\n",
                if result.maximally_simple { "yes" } else { "no" }
            ));
            emit(out, &text)?;
        }
    }
    Ok(exit::OK)
}

fn load_config(path: &Path) -> Result<ServiceConfig, CliError> {
    ServiceConfig::load(path).map_err(|e| CliError::from(errata_service::StartError::from(e)))
}

fn serve(args: &ServeArgs, out: Out) -> Result<i32, CliError> {
    let mut cfg = load_config(&args.config)?;
    if let Some(port) = args.port {
        cfg.port = port;
    }
    if let Some(p) = &args.data_path {
        cfg.data_path = p.clone();
    }
    let addr: SocketAddr = format!("{}:{}", args.host, cfg.port)
        .parse()
        .map_err(|e| CliError::Failure(format!("bad listen address: {e}")))?;
    let svc = Arc::new(open_service(cfg)?);
    let rt = tokio::runtime::Runtime::new().map_err(|e| CliError::Failure(e.to_string()))?;
    rt.block_on(async {
        let listener = tokio::net::TcpListener::bind(addr)
            .await
            .map_err(|e| CliError::Failure(format!("cannot listen on {addr}: {e}")))?;
        let local = listener
            .local_addr()
            .map_err(|e| CliError::Failure(e.to_string()))?;
        emit(out, &format!("listening on http://{local}\n"))?;
        errata_service::serve(listener, svc)
            .await
            .map_err(|e| CliError::Failure(e.to_string()))
    })?;
    Ok(exit::OK)
}

fn export(config: &Path, output: Option<&Path>, fmt: Format, out: Out) -> Result<i32, CliError> {
    let svc = open_service(load_config(config)?)?;
    let records = svc.export_records();
    match fmt {
        Format::Structured => {
            let text = serde_json::to_string_pretty(&records).expect("records serialize") + "\n";
            write_or_emit(output, &text, out)?;
        }
        Format::Table => write_or_emit(output, &collection_to_string(&records), out)?,
    }
    Ok(exit::OK)
}

fn taxonomy(fmt: Format, out: Out) -> Result<i32, CliError> {
    let doc = Taxonomy::builtin().document();
    match fmt {
        Format::Structured => emit_json(out, &doc)?,
        Format::Table => {
            let mut t = TextTable::new([
                ("Code", Align::Left),
                ("Name", Align::Left),
                ("Definition", Align::Left),
            ]);
            for cat in &doc.categories {
                t.row([cat.letter.clone(), cat.label.clone(), cat.focus.clone()]);
                for code in &cat.codes {
                    t.row([
                        format!("  {}", code.display),
                        code.name.clone(),
                        code.definition.clone(),
                    ]);
                }
            }
            emit(out, &t.render())?;
        }
    }
    Ok(exit::OK)
}

fn fixture(cmd: &FixtureCommand, lenient: bool, out: Out, err: Out) -> Result<i32, CliError> {
    match cmd {
        FixtureCommand::Reference { output } => {
            write_or_emit(output.as_deref(), &collection_to_string(&reference_collection()), out)?
        }
        FixtureCommand::Agreement { seed, output } => write_or_emit(
            output.as_deref(),
            &collection_to_string(&agreement_collection(*seed)),
            out,
        )?,
        FixtureCommand::Scores {
            collection,
            name,
            orientation,
            signal,
            seed,
            output,
        } => {
            let records = load_collection(collection, lenient, err)?;
            let table = synthetic_scores(&records, name, *orientation, *signal, *seed);
            write_or_emit(output.as_deref(), &score_table_to_string(&table), out)?;
        }
    }
    Ok(exit::OK)
}
