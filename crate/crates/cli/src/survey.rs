use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::json;

use critlab_core::rational::fmt_q;
use critlab_core::survey::{family_groups, survey_group, Checkpoint, GroupSummary, SurveyOptions, SurveyRow};
use critlab_core::sweep::MAX_SWEEP_ORDER;

use crate::report::{budget, CliError, ErrorKind};
use crate::{OutputFormat, SurveyArgs};

const CSV_HEADER: [&str; 12] = [
    "kind", "group", "A", "B", "class", "deficit", "m_A", "m_B", "m_AB", "check", "check_passed", "detail",
];

fn load_checkpoint(path: &Path, options: &SurveyOptions) -> Result<usize, CliError> {
    if !path.exists() {
        return Ok(0);
    }
    let text = fs::read_to_string(path)?;
    let cp: Checkpoint = serde_json::from_str(&text)
        .map_err(|e| CliError::new(ErrorKind::Usage, format!("unreadable checkpoint {}: {e}", path.display())))?;
    if cp.options != *options {
        return Err(CliError::new(
            ErrorKind::Usage,
            format!("checkpoint {} belongs to a different survey", path.display()),
        ));
    }
    Ok(cp.completed_groups)
}

fn save_checkpoint(path: &Path, options: &SurveyOptions, done: usize) -> Result<(), CliError> {
    let cp = Checkpoint {
        options: options.clone(),
        completed_groups: done,
    };
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, serde_json::to_string(&cp).expect("checkpoint serializes"))?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn csv_pair(row: &SurveyRow) -> Vec<String> {
    let (check, passed, detail) = match &row.check {
        Some(c) => (
            c.name.to_string(),
            c.passed.map(|p| p.to_string()).unwrap_or_else(|| "n/a".into()),
            c.detail.clone(),
        ),
        None => (String::new(), String::new(), String::new()),
    };
    vec![
        "pair".into(),
        row.group.clone(),
        row.a.clone(),
        row.b.clone(),
        row.class.to_string(),
        fmt_q(&row.deficit),
        fmt_q(&row.m_a),
        fmt_q(&row.m_b),
        fmt_q(&row.m_ab),
        check,
        passed,
        detail,
    ]
}

fn csv_count(s: &GroupSummary, filter: &str) -> Vec<String> {
    let mut out = vec![String::new(); CSV_HEADER.len()];
    out[0] = "count".into();
    out[1] = s.group.clone();
    out[4] = filter.to_string();
    out[11] = format!("matched={} pairs={} check_failures={}", s.matched, s.pairs, s.check_failures);
    out
}

/// Streams rows to `out`. Returns the number of failed checks.
pub fn run(args: &SurveyArgs, out: &mut dyn Write) -> Result<u64, CliError> {
    let options = SurveyOptions {
        family: args.family.parse().map_err(crate::report::parse_err)?,
        max: args.max,
        filter: args.filter.parse().map_err(crate::report::parse_err)?,
        check: args.check.parse().map_err(crate::report::parse_err)?,
    };
    let groups = family_groups(options.family, options.max)?;
    if let Some(g) = groups.iter().find(|g| g.order() > MAX_SWEEP_ORDER) {
        return Err(budget(format!(
            "{} has order {}, surveys are limited to order {MAX_SWEEP_ORDER}",
            g.name(),
            g.order()
        )));
    }
    let start = match &args.checkpoint {
        Some(p) => load_checkpoint(p, &options)?,
        None => 0,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::new(ErrorKind::Usage, e))?;
    let emit_csv = |record: &[String], out: &mut dyn Write| -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(record).map_err(|e| CliError::new(ErrorKind::Io, e))?;
        let line = w.into_inner().map_err(|e| CliError::new(ErrorKind::Io, e))?;
        out.write_all(&line)?;
        Ok(())
    };
    if start == 0 && args.format == OutputFormat::Csv {
        emit_csv(&CSV_HEADER.map(String::from), out)?;
    }
    let mut failures = 0;
    for (idx, g) in groups.iter().enumerate().skip(start) {
        let (rows, summary) = pool.install(|| survey_group(g, options.filter, options.check)).map_err(budget)?;
        failures += summary.check_failures;
        for row in &rows {
            match args.format {
                OutputFormat::Csv => emit_csv(&csv_pair(row), out)?,
                OutputFormat::Jsonl => {
                    let mut v = serde_json::to_value(row).expect("row serializes");
                    v["kind"] = json!("pair");
                    writeln!(out, "{v}")?;
                }
            }
        }
        if args.counts {
            match args.format {
                OutputFormat::Csv => emit_csv(&csv_count(&summary, &args.filter), out)?,
                OutputFormat::Jsonl => {
                    let mut v = serde_json::to_value(&summary).expect("summary serializes");
                    v["kind"] = json!("count");
                    v["filter"] = json!(args.filter);
                    writeln!(out, "{v}")?;
                }
            }
        }
        out.flush()?;
        if let Some(p) = &args.checkpoint {
            save_checkpoint(p, &options, idx + 1)?;
        }
    }
    Ok(failures)
}
