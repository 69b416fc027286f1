//! Fast zeta and Möbius transforms over the subset lattice.
//!
//! Vectors are indexed by subset bitmask and have length `2^n`. Each
//! transform runs in O(n·2^n).

/// `out[F] = Σ_{G ⊆ F} v[G]` (implicability from mass).
pub fn subset_zeta(values: &mut [f64]) {
    for_each_pair(values.len(), |lower, upper| values[upper] += values[lower]);
}

/// Inverse of [`subset_zeta`].
pub fn subset_mobius(values: &mut [f64]) {
    for_each_pair(values.len(), |lower, upper| values[upper] -= values[lower]);
}

/// `out[F] = Σ_{F ⊆ G} v[G]` (commonality from mass).
pub fn superset_zeta(values: &mut [f64]) {
    for_each_pair(values.len(), |lower, upper| values[lower] += values[upper]);
}

/// Inverse of [`superset_zeta`].
pub fn superset_mobius(values: &mut [f64]) {
    for_each_pair(values.len(), |lower, upper| values[lower] -= values[upper]);
}

/// Visits every `(F, F ∪ {i})` pair with `i ∉ F`, one element dimension at a time.
fn for_each_pair(len: usize, mut visit: impl FnMut(usize, usize)) {
    debug_assert!(len.is_power_of_two());
    let mut bit = 1;
    while bit < len {
        for set in 0..len {
            if set & bit == 0 {
                visit(set, set | bit);
            }
        }
        bit <<= 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_subset_sum(values: &[f64]) -> Vec<f64> {
        (0..values.len())
            .map(|f| (0..values.len()).filter(|g| g & !f == 0).map(|g| values[g]).sum())
            .collect()
    }

    fn brute_superset_sum(values: &[f64]) -> Vec<f64> {
        (0..values.len())
            .map(|f| (0..values.len()).filter(|g| f & !g == 0).map(|g| values[g]).sum())
            .collect()
    }

    fn vector(max_n: usize) -> impl Strategy<Value = Vec<f64>> {
        (0..=max_n).prop_flat_map(|n| prop::collection::vec(-1.0f64..1.0, 1 << n))
    }

    proptest! {
        #[test]
        fn zeta_matches_direct_sums(v in vector(6)) {
            let mut sub = v.clone();
            subset_zeta(&mut sub);
            let mut sup = v.clone();
            superset_zeta(&mut sup);
            for (fast, slow) in sub.iter().zip(brute_subset_sum(&v)) {
                prop_assert!((fast - slow).abs() < 1e-12);
            }
            for (fast, slow) in sup.iter().zip(brute_superset_sum(&v)) {
                prop_assert!((fast - slow).abs() < 1e-12);
            }
        }

        #[test]
        fn mobius_inverts_zeta(v in vector(6)) {
            let mut sub = v.clone();
            subset_zeta(&mut sub);
            subset_mobius(&mut sub);
            let mut sup = v.clone();
            superset_zeta(&mut sup);
            superset_mobius(&mut sup);
            for i in 0..v.len() {
                prop_assert!((sub[i] - v[i]).abs() < 1e-12);
                prop_assert!((sup[i] - v[i]).abs() < 1e-12);
            }
        }
    }
}
