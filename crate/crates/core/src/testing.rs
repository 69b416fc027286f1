use rand::Rng;

use crate::frame::{FocalSet, Frame};
use crate::mass::MassFunction;

/// Normal mass function on 1..=min(2^n − 1, 8) distinct random focal sets.
pub fn random_mass(rng: &mut impl Rng, frame: &Frame) -> MassFunction {
    let top = frame.power_set_size() as u32;
    let count = rng.gen_range(1..=(top as usize - 1).min(8));
    let mut entries: Vec<(FocalSet, f64)> = Vec::with_capacity(count);
    while entries.len() < count {
        let set = FocalSet::from_bits(rng.gen_range(1..top));
        if !entries.iter().any(|(s, _)| *s == set) {
            entries.push((set, rng.gen_range(0.05..1.0)));
        }
    }
    let total: f64 = entries.iter().map(|(_, w)| w).sum();
    MassFunction::from_raw(frame.clone(), entries.into_iter().map(|(s, w)| (s, w / total)))
        .expect("random mass is valid")
}

pub fn assert_mass_close(actual: &MassFunction, expected: &MassFunction, tol: f64) {
    assert_eq!(actual.frame(), expected.frame());
    for set in actual.frame().subsets() {
        let (a, e) = (actual.mass(set), expected.mass(set));
        assert!(
            (a - e).abs() <= tol,
            "m({set:?}) = {a}, expected {e}\n{actual}\n{expected}"
        );
    }
}
