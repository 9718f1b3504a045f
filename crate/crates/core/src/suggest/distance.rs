use super::confusion::{Confusions, GENERIC_COST};

/// Weighted Damerau-Levenshtein distance over grapheme sequences.
///
/// Insert, delete and adjacent transposition cost 1; substitution costs
/// [`Confusions::substitution_cost`]. Transposed units may themselves be
/// substituted afterwards, and units between them deleted or inserted
/// (unrestricted Damerau), so the result is the cheapest edit path and obeys
/// the triangle inequality whenever the substitution costs do.
pub fn edit_cost(confusions: &Confusions, a: &[&str], b: &[&str]) -> f64 {
    let (n, m) = (a.len(), b.len());
    if n == 0 || m == 0 {
        return (n + m) as f64 * GENERIC_COST;
    }
    let sub: Vec<Vec<f64>> = a
        .iter()
        .map(|x| b.iter().map(|y| confusions.substitution_cost(x, y)).collect())
        .collect();
    let mut d = vec![vec![0.0f64; m + 1]; n + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i as f64 * GENERIC_COST;
    }
    for (j, cell) in d[0].iter_mut().enumerate() {
        *cell = j as f64 * GENERIC_COST;
    }
    for i in 1..=n {
        for j in 1..=m {
            let mut best = (d[i - 1][j] + GENERIC_COST)
                .min(d[i][j - 1] + GENERIC_COST)
                .min(d[i - 1][j - 1] + sub[i - 1][j - 1]);
            // a[k] .. a[i-1] becomes b[l] .. b[j-1] with the end units swapped
            for k in 0..i - 1 {
                let head = sub[k][j - 1];
                if head >= GENERIC_COST {
                    continue;
                }
                for l in 0..j - 1 {
                    let cost = d[k][l]
                        + (i - k - 2) as f64 * GENERIC_COST
                        + (j - l - 2) as f64 * GENERIC_COST
                        + GENERIC_COST
                        + head
                        + sub[i - 1][l];
                    best = best.min(cost);
                }
            }
            d[i][j] = best;
        }
    }
    d[n][m]
}
