/// Splits `total` into integer parts proportional to `weights`: floors first,
/// then one extra unit to each of the largest fractional remainders (ties to
/// the lower index). Parts always sum to `total` and each lies within 1 of
/// its exact share. All-zero weights split evenly.
pub fn largest_remainder(weights: &[f64], total: usize) -> Vec<usize> {
    if weights.is_empty() {
        return Vec::new();
    }
    let sum: f64 = weights.iter().sum();
    let exact: Vec<f64> = if sum > 0.0 {
        weights.iter().map(|w| w / sum * total as f64).collect()
    } else {
        vec![total as f64 / weights.len() as f64; weights.len()]
    };
    let mut parts: Vec<usize> = exact.iter().map(|e| e.floor() as usize).collect();
    let mut assigned: usize = parts.iter().sum();
    while assigned > total {
        // float noise pushed a floor over; take it back from the smallest remainder
        let i = (0..parts.len()).filter(|&i| parts[i] > 0).min_by(|&a, &b| {
            (exact[a] - parts[a] as f64).total_cmp(&(exact[b] - parts[b] as f64))
        });
        parts[i.expect("positive part exists")] -= 1;
        assigned -= 1;
    }
    let mut order: Vec<usize> = (0..parts.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = exact[a] - parts[a] as f64;
        let rb = exact[b] - parts[b] as f64;
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    let missing = total - assigned;
    for i in 0..missing {
        parts[order[i % order.len()]] += 1;
    }
    parts
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(largest_remainder(&[1.0, 0.0], 10), vec![10, 0]);
        assert_eq!(largest_remainder(&[0.5, 0.5], 10), vec![5, 5]);
        assert_eq!(largest_remainder(&[15.0, 5.0], 80), vec![60, 20]);
        assert_eq!(largest_remainder(&[1.0, 1.0, 1.0], 10), vec![4, 3, 3]);
        assert_eq!(largest_remainder(&[0.0, 0.0], 3), vec![2, 1]);
        assert!(largest_remainder(&[], 3).is_empty());
    }

    proptest! {
        #[test]
        fn sums_exactly_and_stays_within_one(weights in proptest::collection::vec(0.0..1.0f64, 1..30), total in 0usize..500) {
            let parts = largest_remainder(&weights, total);
            prop_assert_eq!(parts.iter().sum::<usize>(), total);
            let sum: f64 = weights.iter().sum();
            if sum > 0.0 {
                for (p, w) in parts.iter().zip(&weights) {
                    prop_assert!((*p as f64 - w / sum * total as f64).abs() < 1.0 + 1e-9);
                }
            }
        }
    }
}
