/// Gini coefficient of pattern sizes, 0 for perfect equality.
///
/// Uses the sorted closed form `sum_i (2i - n - 1) x_(i) / (n * sum x)`, which is
/// equal to the mean absolute difference over twice the mean.
pub fn gini_coefficient(sizes: &[usize]) -> f64 {
    let n = sizes.len();
    if n <= 1 {
        return 0.0;
    }
    let mut sorted = sizes.to_vec();
    sorted.sort_unstable();
    let total: usize = sorted.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let weighted: i128 = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| (2 * (i as i128 + 1) - n as i128 - 1) * x as i128)
        .sum();
    weighted as f64 / (n as f64 * total as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn double_sum(sizes: &[usize]) -> f64 {
        let n = sizes.len() as f64;
        let mean = sizes.iter().sum::<usize>() as f64 / n;
        let mut acc = 0.0;
        for &a in sizes {
            for &b in sizes {
                acc += (a as f64 - b as f64).abs();
            }
        }
        acc / (2.0 * n * n * mean)
    }

    #[test]
    fn known_values() {
        assert_eq!(gini_coefficient(&[5, 5, 5]), 0.0);
        assert_eq!(gini_coefficient(&[7]), 0.0);
        assert!((gini_coefficient(&[1, 1, 8]) - 28.0 / 60.0).abs() < 1e-12);
        assert!((double_sum(&[1, 1, 8]) - 28.0 / 60.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn agrees_with_double_sum(sizes in prop::collection::vec(1usize..=50, 1..=30)) {
            let g = gini_coefficient(&sizes);
            prop_assert!((g - double_sum(&sizes)).abs() < 1e-12);
            prop_assert!((0.0..1.0).contains(&g));
        }
    }
}
