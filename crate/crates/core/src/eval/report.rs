use super::metrics::format_percent;
use super::results::{ResultRow, ResultsFile, SummaryFile, SUMMARY_FILE};
use super::EvalError;

fn fixed(v: u32) -> String {
    format!("{}.{:04}", v / 10_000, v % 10_000)
}

fn cells(row: &ResultRow) -> [String; 3] {
    [row.found_count.to_string(), fixed(row.precision), fixed(row.recall)]
}

fn totals(summary: &SummaryFile, file: &ResultsFile) -> Result<[String; 3], EvalError> {
    let row = summary.row(file.engine).ok_or_else(|| EvalError::Parse {
        file: SUMMARY_FILE.into(),
        line: 0,
        msg: format!("no summary row for {}", file.engine),
    })?;
    let found: usize = file.rows.iter().map(|r| r.found_count).sum();
    Ok([
        found.to_string(),
        format_percent(&row.precision_exact),
        format_percent(&row.recall_exact),
    ])
}

fn pad(text: &str, width: usize) -> String {
    let len = text.chars().count();
    format!("{text}{}", " ".repeat(width.saturating_sub(len)))
}

/// Side-by-side per-query table of two engines, closed by an `All` row with
/// total found and mean percentages. Both files must list the same queries in
/// the same order.
pub fn render_report(summary: &SummaryFile, left: &ResultsFile, right: &ResultsFile) -> Result<String, EvalError> {
    if left.rows.len() != right.rows.len() || left.rows.iter().zip(&right.rows).any(|(a, b)| a.query_id != b.query_id) {
        return Err(EvalError::Parse {
            file: format!("{}.tsv", right.engine),
            line: 0,
            msg: format!("queries differ from {}.tsv", left.engine),
        });
    }

    let mut table: Vec<[String; 7]> =
        vec![["Query", "Found", "Precision", "Recall", "Found", "Precision", "Recall"].map(str::to_owned)];
    for (l, r) in left.rows.iter().zip(&right.rows) {
        let [a, b, c] = cells(l);
        let [d, e, f] = cells(r);
        table.push([format!("{} {}", l.query_id, l.query_word), a, b, c, d, e, f]);
    }
    let [a, b, c] = totals(summary, left)?;
    let [d, e, f] = totals(summary, right)?;
    table.push(["All".into(), a, b, c, d, e, f]);

    let mut widths = [0usize; 7];
    for row in &table {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let left_span = widths[1] + widths[2] + widths[3] + 6;
    let mut out = format!(
        "{} | {} | {}\n",
        pad("", widths[0]),
        pad(left.engine.as_str(), left_span),
        right.engine
    );
    for row in &table {
        let line: Vec<String> = row.iter().zip(widths).map(|(c, w)| pad(c, w)).collect();
        out.push_str(line.join(" | ").trim_end());
        out.push('\n');
    }
    Ok(out)
}
