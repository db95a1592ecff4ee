use super::oracle::combinations;

/// Every vector of length `n` over `0..levels`.
pub fn grid(n: usize, levels: u32) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..levels).map(move |l| {
                    let mut w = v.clone();
                    w.push(f64::from(l));
                    w
                })
            })
            .collect();
    }
    out
}

/// Every split of `values` into samples of sizes `m` and `len - m`.
pub fn splits(values: &[f64], m: usize) -> Vec<(Vec<f64>, Vec<f64>)> {
    combinations(values.len(), m)
        .into_iter()
        .map(|chosen| {
            let (x, y): (Vec<usize>, Vec<usize>) = (0..values.len()).partition(|i| chosen.contains(i));
            (
                x.iter().map(|&i| values[i]).collect(),
                y.iter().map(|&i| values[i]).collect(),
            )
        })
        .collect()
}

/// Two-sample configurations of pooled size at most 8: all rank splits of
/// distinct values, and all tied samples over three levels up to size 6.
pub fn two_sample_configs() -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut out = Vec::new();
    for n in 2..=8 {
        let distinct: Vec<f64> = (1..=n).map(f64::from).collect();
        for m in 1..n as usize {
            out.extend(splits(&distinct, m));
        }
    }
    for n in 2..=6 {
        for m in 1..n {
            for x in grid(m, 3) {
                for y in grid(n - m, 3) {
                    out.push((x.clone(), y));
                }
            }
        }
    }
    out
}
