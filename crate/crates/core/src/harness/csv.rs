use std::path::Path;

use super::sweep::SweepRow;
use crate::error::{Error, Result};

pub const HEADER: [&str; 13] = [
    "sweep_value",
    "e_n",
    "w_hom",
    "w_sep_hom",
    "w_max_hom",
    "w_het",
    "w_sep_het",
    "w_max_het",
    "w_00",
    "w_11",
    "eff_hom",
    "eff_het",
    "stable_flag",
];

/// 12 significant digits in scientific notation.
fn number(v: f64) -> String {
    format!("{v:.11e}")
}

fn cell(v: Option<f64>) -> String {
    v.map(number).unwrap_or_default()
}

fn optional_columns(row: &SweepRow) -> [Option<f64>; 11] {
    [
        row.e_n,
        row.w_hom,
        row.w_sep_hom,
        row.w_max_hom,
        row.w_het,
        row.w_sep_het,
        row.w_max_het,
        row.w_00,
        row.w_11,
        row.eff_hom,
        row.eff_het,
    ]
}

pub fn format_csv(rows: &[SweepRow]) -> String {
    let mut out = HEADER.join(",");
    out.push('\n');
    for row in rows {
        let mut fields = vec![number(row.sweep_value)];
        fields.extend(optional_columns(row).into_iter().map(cell));
        fields.push(row.stable_flag.to_string());
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn emit_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::validation("no rows to write"));
    }
    std::fs::write(path, format_csv(rows)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads back text produced by [`format_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<SweepRow>> {
    let mut lines = text.lines();
    if lines.next() != Some(HEADER.join(",").as_str()) {
        return Err(Error::validation("CSV header does not match"));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let bad = |what: &str| Error::validation(format!("CSV line {}: {what}", i + 2));
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != HEADER.len() {
                return Err(bad("wrong number of fields"));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|_| bad(&format!("bad number {s:?}")));
            let opt = |s: &str| if s.is_empty() { Ok(None) } else { num(s).map(Some) };
            let o: Vec<Option<f64>> = fields[1..12].iter().map(|s| opt(s)).collect::<Result<_>>()?;
            Ok(SweepRow {
                sweep_value: num(fields[0])?,
                e_n: o[0],
                w_hom: o[1],
                w_sep_hom: o[2],
                w_max_hom: o[3],
                w_het: o[4],
                w_sep_het: o[5],
                w_max_het: o[6],
                w_00: o[7],
                w_11: o[8],
                eff_hom: o[9],
                eff_het: o[10],
                stable_flag: fields[12].parse().map_err(|_| bad("bad stable_flag"))?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> SweepRow {
        SweepRow {
            sweep_value: 0.01,
            e_n: Some(0.129_961_234_567_89),
            w_hom: Some(1.0 / 3.0),
            w_het: Some(-0.0),
            eff_het: Some(6.02e23),
            stable_flag: true,
            ..SweepRow::default()
        }
    }

    #[test]
    fn one_row_gives_two_lines() {
        let text = format_csv(&[sample()]);
        assert_eq!(text.matches('\n').count(), 2);
        assert!(!text.contains('\r'));
        assert!(text.starts_with("sweep_value,e_n,w_hom,w_sep_hom,w_max_hom,w_het,w_sep_het,w_max_het,w_00,w_11,eff_hom,eff_het,stable_flag\n"));
        assert!(text.contains("3.33333333333e-1"));
    }

    #[test]
    fn unstable_row_has_empty_cells() {
        let text = format_csv(&[SweepRow::unstable(0.5)]);
        assert_eq!(text.lines().nth(1).unwrap(), "5.00000000000e-1,,,,,,,,,,,,false");
    }

    #[test]
    fn writes_file_and_reports_path() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        emit_csv(&[sample()], &path).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), format_csv(&[sample()]));
        let missing = dir.path().join("no/such/dir.csv");
        let err = emit_csv(&[sample()], &missing).unwrap_err();
        assert!(err.to_string().contains("no/such/dir.csv"), "{err}");
        assert!(emit_csv(&[], &path).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(values in proptest::collection::vec(proptest::option::of(-1e6f64..1e6), 12), flag: bool) {
            let row = SweepRow {
                sweep_value: values[0].unwrap_or(0.0),
                e_n: values[1],
                w_hom: values[2],
                w_sep_hom: values[3],
                w_max_hom: values[4],
                w_het: values[5],
                w_sep_het: values[6],
                w_max_het: values[7],
                w_00: values[8],
                w_11: values[9],
                eff_hom: values[10],
                eff_het: values[11],
                stable_flag: flag,
            };
            let text = format_csv(&[row]);
            let back = parse_csv(&text).unwrap();
            prop_assert_eq!(format_csv(&back), text);
            let close = |a: f64, b: f64| (a - b).abs() <= 5e-12 * a.abs().max(1e-300);
            prop_assert!(close(row.sweep_value, back[0].sweep_value));
            let (x, y) = (optional_columns(&row), optional_columns(&back[0]));
            for (a, b) in x.iter().zip(&y) {
                prop_assert_eq!(a.is_some(), b.is_some());
                if let (Some(a), Some(b)) = (a, b) {
                    prop_assert!(close(*a, *b), "{} vs {}", a, b);
                }
            }
            prop_assert_eq!(back[0].stable_flag, flag);
        }
    }
}
