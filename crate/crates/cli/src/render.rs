//! Plain-text summary and gain tables.

use risplan_core::io::SummaryDoc;
use risplan_core::metrics::{GainReport, SummaryStats};

type StatPick = fn(&SummaryStats) -> f64;
type GainPick = fn(&GainReport) -> f64;

/// Renders the two stdout tables: per-scenario path-loss summaries and the
/// gains of each panel-enabled scenario over the baseline.
pub fn render_tables(doc: &SummaryDoc) -> String {
    let s = &doc.summaries;
    let g = &doc.gains;
    let summary_rows: [(&str, StatPick); 3] = [
        ("min", |x| x.pl_min_db),
        ("max", |x| x.pl_max_db),
        ("avg", |x| x.pl_avg_db),
    ];
    let gain_rows: [(&str, GainPick); 3] = [
        ("min", |x| x.g_min_pct),
        ("max", |x| x.g_max_pct),
        ("avg", |x| x.g_avg_pct),
    ];

    let mut out = String::new();
    out.push_str("Path loss summary [dB]\n");
    out.push_str(&format!(
        "  {:<4}{:>10}{:>10}{:>10}{:>10}\n",
        "", "BS", "RIS", "RIS,BS", "AVG"
    ));
    for (label, pick) in summary_rows {
        out.push_str(&format!(
            "  {:<4}{:>10.2}{:>10.2}{:>10.2}{:>10.2}\n",
            label,
            pick(&s.bs),
            pick(&s.ris),
            pick(&s.ris_bs),
            pick(&s.avg)
        ));
    }
    out.push('\n');
    out.push_str("Gain vs BS [%]\n");
    out.push_str(&format!(
        "  {:<4}{:>10}{:>10}{:>10}\n",
        "", "RIS", "RIS,BS", "AVG"
    ));
    for (label, pick) in gain_rows {
        out.push_str(&format!(
            "  {:<4}{:>10.2}{:>10.2}{:>10.2}\n",
            label,
            pick(&g.ris),
            pick(&g.ris_bs),
            pick(&g.avg)
        ));
    }
    out
}
