//! Reference inputs used by the worked examples, the reproduction targets and
//! the test suites.

use crate::error::Result;
use crate::frame::{FocalSet, Frame};
use crate::mass::MassFunction;
use crate::pmf::ProbabilityMassFunction;

/// Four-element BPA with mass on every non-empty subset.
pub fn four_element_bpa() -> MassFunction {
    let frame = Frame::letters(4).expect("valid frame");
    MassFunction::from_labels(
        frame,
        &[
            ("A", 0.16),
            ("B", 0.14),
            ("C", 0.01),
            ("D", 0.02),
            ("A+B", 0.20),
            ("A+C", 0.09),
            ("A+D", 0.04),
            ("B+C", 0.04),
            ("B+D", 0.02),
            ("C+D", 0.01),
            ("A+B+C", 0.10),
            ("A+B+D", 0.03),
            ("A+C+D", 0.03),
            ("B+C+D", 0.03),
            ("A+B+C+D", 0.08),
        ],
    )
    .expect("reference BPA is normalized")
}

/// `{A:0.1, A+B:0.2, B+C:0.3, A+B+C:0.4}`.
pub fn three_element_bpa() -> MassFunction {
    MassFunction::from_labels(
        Frame::letters(3).expect("valid frame"),
        &[("A", 0.1), ("A+B", 0.2), ("B+C", 0.3), ("A+B+C", 0.4)],
    )
    .expect("reference BPA is normalized")
}

/// `{A+B:0.3, B+C:0.1, A+B+C:0.6}`, the start of the uniform partial chain.
pub fn partial_chain_bpa() -> MassFunction {
    MassFunction::from_labels(
        Frame::letters(3).expect("valid frame"),
        &[("A+B", 0.3), ("B+C", 0.1), ("A+B+C", 0.6)],
    )
    .expect("reference BPA is normalized")
}

pub const SWEEP_FRAME_SIZE: usize = 10;

/// Ten-element BPA `{t3t4t5:0.15, t6:0.05, Θ:0.1, A:0.7}` with
/// `A = {t1, …, tk}`; for `k = 10` the last two records merge.
pub fn sweep_bpa(k: usize) -> Result<MassFunction> {
    let frame = Frame::numbered(SWEEP_FRAME_SIZE)?;
    let a = FocalSet::full(k);
    MassFunction::new(
        frame.clone(),
        [
            (FocalSet::from_bits(0b11100), 0.15),
            (FocalSet::singleton(5), 0.05),
            (frame.full(), 0.1),
            (a, 0.7),
        ],
    )
}

fn pmf(p: &[f64]) -> ProbabilityMassFunction {
    ProbabilityMassFunction::new(Frame::letters(p.len()).expect("valid frame"), p.to_vec())
        .expect("reference distribution is normalized")
}

/// Two sharply conflicting sources on three elements.
pub fn conflicting_pair() -> (ProbabilityMassFunction, ProbabilityMassFunction) {
    (pmf(&[0.9, 0.09, 0.01]), pmf(&[0.01, 0.14, 0.85]))
}

/// `{0.5, 0.25, 0.25}`, fused with itself.
pub fn self_fusion_pmf() -> ProbabilityMassFunction {
    pmf(&[0.5, 0.25, 0.25])
}

/// `{p, (1−p)/2, (1−p)/2}`.
pub fn favoured_pmf(p: f64) -> Result<ProbabilityMassFunction> {
    let rest = (1.0 - p) / 2.0;
    ProbabilityMassFunction::new(Frame::letters(3)?, vec![p, rest, rest])
}

/// The eight four-element source rows of the multi-source example. Row 7 does
/// not sum to one; it enters the average as given.
pub fn multi_source_rows() -> Vec<Vec<f64>> {
    vec![
        vec![0.30, 0.60, 0.09, 0.01],
        vec![0.30, 0.01, 0.01, 0.68],
        vec![0.02, 0.02, 0.30, 0.66],
        vec![0.20, 0.10, 0.70, 0.00],
        vec![0.02, 0.80, 0.08, 0.10],
        vec![0.60, 0.30, 0.05, 0.05],
        vec![0.90, 0.05, 0.05, 0.35],
        vec![0.30, 0.30, 0.40, 0.00],
    ]
}

/// Normalized average of [`multi_source_rows`].
pub fn multi_source_mean() -> ProbabilityMassFunction {
    ProbabilityMassFunction::mean_of_weights(Frame::letters(4).expect("valid frame"), &multi_source_rows())
        .expect("rows have four entries")
}
