use std::io::Write;

use super::eval::EvalReport;

fn pct(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.1}")).unwrap_or_else(|| "-".into())
}

fn acc(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.3}")).unwrap_or_else(|| "-".into())
}

/// Aligned text table, one line per report.
pub fn render_table(reports: &[EvalReport]) -> String {
    let spider = reports.iter().any(|r| r.acc_em.is_some());
    let mut header = vec!["System", "Acc_qm"];
    header.push(if spider { "Acc_em" } else { "Acc_ex" });
    header.extend(["Avg #q", "Q_r%", "right", "wrong_solved", "wrong_unsolved", "left"]);

    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            vec![
                r.label(),
                format!("{:.3}", r.acc_qm),
                acc(if spider { r.acc_em } else { r.acc_ex }),
                format!("{:.3}", r.avg_questions),
                pct(r.q_r_percent),
                r.right.to_string(),
                r.wrong_solved.to_string(),
                r.wrong_unsolved.to_string(),
                r.early_exits.to_string(),
            ]
        })
        .collect();

    let widths: Vec<usize> = (0..header.len())
        .map(|i| rows.iter().map(|r| r[i].len()).chain([header[i].len()]).max().unwrap_or(0))
        .collect();
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, c) in cells.iter().enumerate() {
            if i == 0 {
                s.push_str(&format!("{c:<w$}", w = widths[0]));
            } else {
                s.push_str(&format!("  {c:>w$}", w = widths[i]));
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(header.clone());
    out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1)));
    out.push('\n');
    for r in &rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}

/// Per-example rows as CSV.
pub fn write_rows_csv<W: Write>(out: W, report: &EvalReport) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "example_id",
        "correct_qm",
        "correct_ex",
        "n_questions",
        "right",
        "wrong_solved",
        "wrong_unsolved",
        "early_exit",
        "error",
    ])?;
    for r in &report.rows {
        w.write_record([
            r.id.clone(),
            r.correct_qm.to_string(),
            r.correct_ex.map(|b| b.to_string()).unwrap_or_default(),
            r.n_questions.to_string(),
            r.right.to_string(),
            r.wrong_solved.to_string(),
            r.wrong_unsolved.to_string(),
            r.early_exit.to_string(),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detector::DetectorConfig;
    use crate::harness::ExampleRow;
    use crate::sql::Mode;

    fn report() -> EvalReport {
        EvalReport {
            mode: Mode::Wikisql,
            detector: DetectorConfig::Prob { p_star: 0.95 },
            k: 3,
            patience: Some(3),
            examples: 2,
            acc_qm: 0.5,
            acc_ex: Some(0.5),
            acc_em: None,
            avg_questions: 1.5,
            total_questions: 3,
            right: 1,
            wrong_solved: 1,
            wrong_unsolved: 1,
            q_r_percent: Some(100.0 / 3.0),
            early_exits: 0,
            errors: 0,
            rows: vec![ExampleRow {
                id: "e1".into(),
                correct_qm: true,
                correct_ex: Some(true),
                n_questions: 2,
                right: 1,
                wrong_solved: 1,
                wrong_unsolved: 0,
                early_exit: false,
                error: None,
                final_sql: None,
            }],
        }
    }

    #[test]
    fn table_layout() {
        let t = render_table(&[report()]);
        let lines: Vec<&str> = t.lines().collect();
        assert!(lines[0].starts_with("System"));
        assert!(lines[0].contains("Acc_ex"));
        assert!(lines[2].starts_with("prob p*=0.95"));
        assert!(lines[2].contains("0.500") && lines[2].contains("33.3"));
    }

    #[test]
    fn csv_rows() {
        let mut buf = Vec::new();
        write_rows_csv(&mut buf, &report()).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s.lines().nth(1), Some("e1,true,true,2,1,1,0,false,"));
    }
}
