use std::fmt::Write;

use super::{Certificate, CertificateFile, Check};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ReportFormat {
    Markdown,
    Tsv,
}

struct Table {
    title: &'static str,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn render(&self, format: ReportFormat, out: &mut String) {
        match format {
            ReportFormat::Markdown => {
                let _ = writeln!(out, "## {}\n", self.title);
                let _ = writeln!(out, "| {} |", self.header.join(" | "));
                let _ = writeln!(out, "|{}", "---|".repeat(self.header.len()));
                for r in &self.rows {
                    let cells: Vec<String> = r.iter().map(|c| c.replace('|', "\\|")).collect();
                    let _ = writeln!(out, "| {} |", cells.join(" | "));
                }
                out.push('\n');
            }
            ReportFormat::Tsv => {
                let _ = writeln!(out, "# {}", self.title);
                let _ = writeln!(out, "{}", self.header.join("\t"));
                for r in &self.rows {
                    let cells: Vec<String> = r.iter().map(|c| c.replace(['\t', '\n'], " ")).collect();
                    let _ = writeln!(out, "{}", cells.join("\t"));
                }
            }
        }
    }
}

fn status(c: &Certificate) -> String {
    if c.passed() { "pass" } else { "FAIL" }.to_string()
}

/// Tables of all certificates (failures first), criterion constants per
/// arrangement and k, membership results, and timings when recorded.
pub fn render_report(file: &CertificateFile, format: ReportFormat) -> String {
    let mut ordered: Vec<&Certificate> = file.certificates.iter().collect();
    ordered.sort_by_key(|c| c.passed());
    let results = Table {
        title: "Certificates",
        header: vec!["status", "id", "kind", "arrangement", "multiplicity", "detail"],
        rows: ordered
            .iter()
            .map(|c| {
                vec![
                    status(c),
                    c.id.clone(),
                    c.kind().to_string(),
                    c.arrangement.clone(),
                    c.multiplicity.clone().unwrap_or_default(),
                    c.detail.clone(),
                ]
            })
            .collect(),
    };
    let constants = Table {
        title: "Criterion constants",
        header: vec!["arrangement", "k", "side", "constant"],
        rows: file
            .certificates
            .iter()
            .filter_map(|c| match &c.check {
                Check::BasisCriterion { side, k, .. } => Some(vec![
                    c.arrangement.clone(),
                    format!("k={k}"),
                    side.symbol().to_string(),
                    match c.witness.get("constant").and_then(|v| v.as_str()) {
                        Some(v) => format!("constant={v}"),
                        None => "none".to_string(),
                    },
                ]),
                _ => None,
            })
            .collect(),
    };
    let membership = Table {
        title: "Membership",
        header: vec!["arrangement", "element", "side", "multiplicity", "member", "binding hyperplane"],
        rows: file
            .certificates
            .iter()
            .filter_map(|c| match &c.check {
                Check::Membership { side, label, multiplicity, .. } => Some(vec![
                    c.arrangement.clone(),
                    label.clone(),
                    side.symbol().to_string(),
                    multiplicity.clone(),
                    if c.passed() { "yes" } else { "no" }.to_string(),
                    c.witness.get("binding").and_then(|v| v.as_str()).unwrap_or("").to_string(),
                ]),
                _ => None,
            })
            .collect(),
    };
    let mut out = String::new();
    if format == ReportFormat::Markdown {
        let failed = file.failures().count();
        let _ = writeln!(out, "# Certificate report\n\n{} certificates, {} failed\n", file.certificates.len(), failed);
    }
    results.render(format, &mut out);
    constants.render(format, &mut out);
    membership.render(format, &mut out);
    if file.certificates.iter().any(|c| c.elapsed_ms.is_some()) {
        let timing = Table {
            title: "Timing",
            header: vec!["id", "ms"],
            rows: file
                .certificates
                .iter()
                .filter_map(|c| c.elapsed_ms.map(|t| vec![c.id.clone(), format!("{t:.0}")]))
                .collect(),
        };
        timing.render(format, &mut out);
    }
    out
}
