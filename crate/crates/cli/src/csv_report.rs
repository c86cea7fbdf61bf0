//! One CSV row per trial.

use std::io;

use outerprod::json::format_f64;
use outerprod::{CampaignReport, ExtendedReal};

fn margin_cell(margin: Option<ExtendedReal>) -> String {
    match margin {
        Some(ExtendedReal::Finite(x)) => format_f64(x),
        Some(inf) => inf.to_string(),
        None => String::new(),
    }
}

pub fn write_rows<W: io::Write>(writer: W, report: &CampaignReport) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<String> =
        ["trial_index", "dim", "norm_a", "norm_b", "inner_product", "rejections"].map(String::from).to_vec();
    if let Some(first) = report.rows.first() {
        for o in &first.outcomes {
            header.push(format!("{}_{}_margin", o.statement, o.mode));
            header.push(format!("{}_{}_status", o.statement, o.mode));
        }
    }
    w.write_record(&header)?;

    for row in &report.rows {
        let mut record = vec![
            row.trial_index.to_string(),
            row.dim.to_string(),
            format_f64(row.norm_a),
            format_f64(row.norm_b),
            format_f64(row.inner_product),
            row.rejections.to_string(),
        ];
        for o in &row.outcomes {
            record.push(margin_cell(o.margin));
            record.push(o.status.to_string());
        }
        w.write_record(&record)?;
    }
    w.flush()
}
