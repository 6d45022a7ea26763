use proptest::prelude::*;

use tonnetz_chroma::{NnlsConfig, NnlsSolver, NoteDictionary};

/// Cyclic coordinate descent on the dense Gram matrix, run to convergence.
fn coordinate_descent(dict: &NoteDictionary, f: &[f64]) -> Vec<f64> {
    let n = dict.notes();
    let cols: Vec<Vec<f64>> = (0..n).map(|i| dict.column_dense(i)).collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let gram: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| dot(&cols[i], &cols[j])).collect())
        .collect();
    let rhs: Vec<f64> = cols.iter().map(|c| dot(c, f)).collect();
    let mut a = vec![0.0; n];
    for _ in 0..20_000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let g = dot(&gram[i], &a) - rhs[i];
            let next = (a[i] - g / gram[i][i]).max(0.0);
            delta = delta.max((next - a[i]).abs());
            a[i] = next;
        }
        if delta < 1e-14 {
            break;
        }
    }
    a
}

fn residual(dict: &NoteDictionary, a: &[f64], f: &[f64]) -> f64 {
    let mut y = vec![0.0; dict.bins];
    dict.mul(a, &mut y);
    y.iter()
        .zip(f)
        .map(|(y, f)| (y - f).powi(2))
        .sum::<f64>()
        .sqrt()
}

fn sum_of_notes(dict: &NoteDictionary, notes: &[usize]) -> Vec<f64> {
    let mut f = vec![0.0; dict.bins];
    for &n in notes {
        for (v, c) in f.iter_mut().zip(dict.column_dense(n)) {
            *v += c;
        }
    }
    f
}

#[test]
fn three_note_mixture_is_resolved() {
    let dict = NoteDictionary::default();
    let solver = NnlsSolver::new(&dict, NnlsConfig::default());
    for notes in [[33usize, 37, 40], [21, 28, 45], [40, 44, 47], [10, 26, 50]] {
        let f = sum_of_notes(&dict, &notes);
        let sol = solver.solve(&f);
        for &n in &notes {
            assert!(
                sol.activations[n] >= 0.9,
                "{notes:?}: {}",
                sol.activations[n]
            );
        }
        assert!(sol.residual() <= 1e-3, "{notes:?}: {}", sol.residual());
        let oracle = coordinate_descent(&dict, &f);
        assert!(residual(&dict, &oracle, &f) <= sol.residual() + 1e-9);
        for (a, b) in sol.activations.iter().zip(&oracle) {
            assert!((a - b).abs() < 5e-3);
        }
    }
}

fn frame_strategy() -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(prop_oneof![3 => Just(0.0), 2 => 0.0f64..2.0], 73)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn residual_never_increases(f in frame_strategy()) {
        let dict = NoteDictionary::default();
        let sol = NnlsSolver::new(&dict, NnlsConfig::default()).solve(&f);
        for w in sol.residuals.windows(2) {
            prop_assert!(w[1] <= w[0]);
        }
        prop_assert!(sol.activations.iter().all(|&a| a >= 0.0));
        prop_assert!(sol.iterations() <= 500);
    }

    #[test]
    fn close_to_the_oracle_optimum(f in frame_strategy()) {
        let dict = NoteDictionary::default();
        let sol = NnlsSolver::new(&dict, NnlsConfig::default()).solve(&f);
        let best = residual(&dict, &coordinate_descent(&dict, &f), &f);
        let norm = f.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assert!(sol.residual() <= best + 0.02 * norm + 1e-12, "{} vs {}", sol.residual(), best);
    }

    #[test]
    fn scale_equivariant(f in frame_strategy(), c in 0.01f64..100.0) {
        let dict = NoteDictionary::default();
        let solver = NnlsSolver::new(&dict, NnlsConfig::default());
        let a = solver.solve(&f).activations;
        let scaled: Vec<f64> = f.iter().map(|x| x * c).collect();
        let b = solver.solve(&scaled).activations;
        let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        let diff = a.iter().zip(&b).map(|(x, y)| (c * x - y).powi(2)).sum::<f64>().sqrt();
        prop_assert!(diff <= 1e-5 * c * norm.max(1e-300), "{diff}");
    }
}
