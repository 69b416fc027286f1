//! Line-oriented text format for mass functions.
//!
//! ```text
//! # comment
//! frame: A,B,C
//! A:0.1
//! A+B:0.2
//! _:0
//! ```
//!
//! The header names the frame elements in order. Each record is
//! `<labels joined by "+">:<mass>`, with `_` for the empty set. Masses are
//! printed in shortest round-trip form unless a fixed precision is requested.

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::mass::MassFunction;

const HEADER: &str = "frame:";

/// Fixed decimals or the shortest representation that parses back to the same bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    #[default]
    Shortest,
    Decimals(usize),
}

impl Precision {
    pub fn format(self, value: f64) -> String {
        match self {
            Precision::Shortest => value.to_string(),
            Precision::Decimals(d) => format!("{value:.d$}"),
        }
    }
}

/// Parses one mass function. Normalization is checked; subnormal input is allowed.
pub fn parse_mass(text: &str) -> Result<MassFunction> {
    let mut frame: Option<Frame> = None;
    let mut entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse { line: line_no, message };
        match &frame {
            None => {
                let rest = line
                    .strip_prefix(HEADER)
                    .ok_or_else(|| err(format!("expected `{HEADER} <labels>` header, found {line:?}")))?;
                let labels = rest.split(',').map(str::trim).collect::<Vec<_>>();
                frame = Some(Frame::new(labels).map_err(|e| err(e.to_string()))?);
            }
            Some(frame) => {
                for record in line.split_whitespace() {
                    let (set, value) = record
                        .rsplit_once(':')
                        .ok_or_else(|| err(format!("expected `<labels>:<mass>`, found {record:?}")))?;
                    let set = frame.parse_subset(set).map_err(|e| err(e.to_string()))?;
                    let value: f64 = value.parse().map_err(|e| err(format!("bad mass {value:?}: {e}")))?;
                    if entries.iter().any(|(s, _)| *s == set) {
                        return Err(err(format!("duplicate record for {}", frame.format_subset(set))));
                    }
                    entries.push((set, value));
                }
            }
        }
    }
    let frame = frame.ok_or(Error::Parse {
        line: 0,
        message: "missing frame header".into(),
    })?;
    MassFunction::new(frame, entries)
}

pub fn format_header(frame: &Frame) -> String {
    format!("{HEADER} {}", frame.labels().join(","))
}

/// The records of a mass function, one per line, in ascending bitmask order.
pub fn format_records(m: &MassFunction, precision: Precision) -> Vec<String> {
    m.focal_elements()
        .map(|(set, v)| format!("{}:{}", m.frame().format_subset(set), precision.format(v)))
        .collect()
}

pub fn format_mass(m: &MassFunction, precision: Precision) -> String {
    let mut out = format_header(m.frame());
    out.push('\n');
    for record in format_records(m, precision) {
        out.push_str(&record);
        out.push('\n');
    }
    out
}

/// A sequence of mass functions on one frame, one snapshot per line with
/// records separated by spaces.
pub fn format_snapshots(frame: &Frame, snapshots: &[MassFunction], precision: Precision) -> String {
    let mut out = format_header(frame);
    out.push('\n');
    for m in snapshots {
        out.push_str(&format_records(m, precision).join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::FocalSet;
    use proptest::prelude::*;

    #[test]
    fn parses_reference_file() {
        let m = parse_mass("# example\nframe: A,B,C\nA:0.1\nA+B:0.20\n\nB+C:0.3\nA+B+C:0.4\n").unwrap();
        assert_eq!(m.frame().size(), 3);
        assert_eq!(m.mass(FocalSet::from_bits(0b011)), 0.2);
        assert_eq!(
            format_mass(&m, Precision::Shortest),
            "frame: A,B,C\nA:0.1\nA+B:0.2\nB+C:0.3\nA+B+C:0.4\n"
        );
        assert_eq!(
            format_mass(&m, Precision::Decimals(4)).lines().nth(2),
            Some("A+B:0.2000")
        );
    }

    #[test]
    fn empty_set_and_errors() {
        let m = parse_mass("frame: A,B\n_:0.25\nA+B:0.75").unwrap();
        assert_eq!(m.empty_mass(), 0.25);
        assert!(matches!(parse_mass("A:1"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse_mass("frame: A,B\nA:x"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_mass("frame: A,B\nC:1"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_mass("frame: A,B\nA:1\nA:0"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_mass("frame: A,B\nA:0.6\nB:0.5"),
            Err(Error::InvalidMass(_))
        ));
        assert!(parse_mass("").is_err());
    }

    #[test]
    fn snapshot_lines() {
        let m = parse_mass("frame: A,B\nA:0.5\nA+B:0.5").unwrap();
        let text = format_snapshots(m.frame(), &[m.clone(), m.clone()], Precision::Decimals(2));
        assert_eq!(text, "frame: A,B\nA:0.50 A+B:0.50\nA:0.50 A+B:0.50\n");
        // snapshot lines parse back as records
        assert!(parse_mass(text.lines().take(2).collect::<Vec<_>>().join("\n").as_str()).is_ok());
    }

    fn decimal_string() -> impl Strategy<Value = String> {
        // up to 12 significant digits in (0, 1)
        (1u64..1_000_000_000_000u64, 0usize..4).prop_map(|(digits, shift)| {
            let value = digits as f64 / 10f64.powi(12 + shift as i32);
            format!("{value:.*}", 12 + shift)
        })
    }

    proptest! {
        #[test]
        fn printed_decimals_round_trip_bit_exactly(a in decimal_string()) {
            let x: f64 = a.parse().unwrap();
            let rest = 1.0 - x;
            let text = format!("frame: A,B\nA:{a}\nB:{rest}\n");
            let m = parse_mass(&text).unwrap();
            prop_assert_eq!(m.mass(FocalSet::singleton(0)).to_bits(), x.to_bits());
            let again = parse_mass(&format_mass(&m, Precision::Shortest)).unwrap();
            prop_assert_eq!(again, m);
        }
    }
}
