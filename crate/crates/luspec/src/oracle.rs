//! Brute-force numeric spectra and their comparison with the exact ones.

use faer::{c64, Mat, Side};
use luspec_core::closedform::SpectrumMultiset;
use luspec_core::graphs::Graph;
use luspec_core::reps::RepMatrix;
use serde::Serialize;

/// Default cap on the dimension handed to the dense eigensolver.
pub const DEFAULT_MAX_DENSE_N: usize = 15_000;
/// Environment variable overriding [`DEFAULT_MAX_DENSE_N`].
pub const MAX_DENSE_N_ENV: &str = "LUSPEC_MAX_DENSE_N";
/// Default relative tolerance for [`compare_spectra`].
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum OracleError {
    #[error("dimension {n} exceeds the dense eigensolver budget {budget}; use the closed-form source or raise --max-dense-n")]
    BudgetExceeded { n: usize, budget: usize },
    #[error("eigensolver did not converge")]
    NoConvergence,
    #[error("multiset sizes differ: exact total {exact}, numeric count {numeric}")]
    TotalMismatch { exact: u64, numeric: usize },
}

/// The budget from [`MAX_DENSE_N_ENV`], or the default.
pub fn budget_from_env() -> usize {
    std::env::var(MAX_DENSE_N_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_DENSE_N)
}

/// Eigenvalues of a symmetric operator, ascending.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumericSpectrum {
    pub values: Vec<f64>,
}

impl NumericSpectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.values.iter().map(|x| x * x).sum()
    }

    /// `Σλ = 0` and `Σλ² = 2|E|` for an adjacency spectrum.
    pub fn trace_identities_hold(&self, edges: usize) -> bool {
        let n = self.len() as f64;
        let two_e = 2.0 * edges as f64;
        self.sum().abs() <= 1e-8 * n.max(1.0) * (1.0 + two_e / n.max(1.0))
            && (self.sum_of_squares() - two_e).abs() <= 1e-8 * two_e.max(1.0)
    }

    /// The multiset equals its negation within `tol`.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        let n = self.values.len();
        (0..n).all(|i| {
            (self.values[i] + self.values[n - 1 - i]).abs() <= tol * self.values[i].abs().max(1.0)
        })
    }
}

fn check_budget(n: usize, budget: usize) -> Result<(), OracleError> {
    if n > budget {
        return Err(OracleError::BudgetExceeded { n, budget });
    }
    Ok(())
}

/// Full spectrum of the adjacency matrix by dense symmetric eigensolver.
pub fn numeric_spectrum(graph: &Graph, budget: usize) -> Result<NumericSpectrum, OracleError> {
    let n = graph.vertex_count();
    check_budget(n, budget)?;
    let mut a = Mat::<f64>::zeros(n, n);
    for u in 0..n {
        for &v in graph.neighbors(u) {
            a[(u, v as usize)] = 1.0;
        }
    }
    let values = a
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|_| OracleError::NoConvergence)?;
    Ok(NumericSpectrum { values })
}

/// Spectrum of a Hermitian cyclotomic matrix through its complex embedding,
/// symmetrized as `(A + A*)/2` first.
pub fn hermitian_spectrum(m: &RepMatrix) -> Result<NumericSpectrum, OracleError> {
    let n = m.size();
    let embed = |i: usize, j: usize| {
        let z = m.get(i, j).embed();
        c64::new(z.re, z.im)
    };
    let a = Mat::<c64>::from_fn(n, n, |i, j| {
        let (x, y) = (embed(i, j), embed(j, i));
        c64::new((x.re + y.re) / 2.0, (x.im - y.im) / 2.0)
    });
    let values = a
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|_| OracleError::NoConvergence)?;
    Ok(NumericSpectrum { values })
}

/// One exact value whose numeric cluster has the wrong size.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultiplicityMismatch {
    pub value: f64,
    pub expected: u64,
    pub observed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub passed: bool,
    pub tolerance: f64,
    /// Largest `|exact - numeric| / max(1, |exact|)` after sorting both sides.
    pub worst_deviation: f64,
    pub worst_value: f64,
    pub mismatches: Vec<MultiplicityMismatch>,
}

/// Matches both sides in sorted order. Passes when every pair is within
/// `tol · max(1, |λ|)` and each numeric value's nearest exact value has the
/// right count.
pub fn compare_spectra(
    exact: &SpectrumMultiset,
    numeric: &NumericSpectrum,
    tol: f64,
) -> Result<Comparison, OracleError> {
    if exact.total() != numeric.len() as u64 {
        return Err(OracleError::TotalMismatch {
            exact: exact.total(),
            numeric: numeric.len(),
        });
    }
    let expected = exact.expanded();
    let mut observed = numeric.values.clone();
    observed.sort_by(f64::total_cmp);
    let mut worst_deviation = 0.0f64;
    let mut worst_value = 0.0;
    for (e, o) in expected.iter().zip(&observed) {
        let d = (e - o).abs() / e.abs().max(1.0);
        if d > worst_deviation {
            worst_deviation = d;
            worst_value = *e;
        }
    }

    let mut distinct: Vec<(f64, u64)> = exact
        .entries
        .iter()
        .map(|e| (e.approx, e.multiplicity))
        .collect();
    distinct.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut counts = vec![0u64; distinct.len()];
    for x in &observed {
        let i = distinct.partition_point(|(v, _)| v < x);
        let nearest = [i.checked_sub(1), (i < distinct.len()).then_some(i)]
            .into_iter()
            .flatten()
            .min_by(|&a, &b| {
                (distinct[a].0 - x)
                    .abs()
                    .total_cmp(&(distinct[b].0 - x).abs())
            })
            .expect("nonempty spectrum");
        counts[nearest] += 1;
    }
    let mismatches: Vec<MultiplicityMismatch> = distinct
        .iter()
        .zip(&counts)
        .filter(|((_, m), c)| m != *c)
        .map(|(&(value, expected), &observed)| MultiplicityMismatch {
            value,
            expected,
            observed,
        })
        .collect();
    Ok(Comparison {
        passed: worst_deviation <= tol && mismatches.is_empty(),
        tolerance: tol,
        worst_deviation,
        worst_value,
        mismatches,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Closed,
    Numeric,
}

/// Spectral expansion summary for `D(4,q)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpansionReport {
    pub q: u64,
    pub source: Source,
    /// Largest eigenvalue below `q`.
    pub lambda2: f64,
    pub spectral_gap: f64,
    /// `(q - λ₂)/2`.
    pub isoperimetric_lower: f64,
    /// `√(2q(q - λ₂))`.
    pub isoperimetric_upper: f64,
    pub ramanujan_bound: f64,
    pub ramanujan: bool,
    /// `2√(q-1) - λ₂`; negative when the Ramanujan bound fails.
    pub ramanujan_margin: f64,
    pub near_ramanujan_bound: f64,
    pub near_ramanujan: bool,
    /// `2√q - λ₂`.
    pub near_margin: f64,
}

impl ExpansionReport {
    /// Builds the report from the `D(4,q)` eigenvalues.
    pub fn from_values(q: u64, source: Source, values: impl IntoIterator<Item = f64>) -> Self {
        let qf = q as f64;
        let lambda2 = values
            .into_iter()
            .filter(|&x| x < qf - 1e-6)
            .fold(f64::NEG_INFINITY, f64::max);
        let gap = qf - lambda2;
        let ramanujan_bound = 2.0 * (qf - 1.0).sqrt();
        let near_ramanujan_bound = 2.0 * qf.sqrt();
        ExpansionReport {
            q,
            source,
            lambda2,
            spectral_gap: gap,
            isoperimetric_lower: gap / 2.0,
            isoperimetric_upper: (2.0 * qf * gap).sqrt(),
            ramanujan_bound,
            ramanujan: lambda2 <= ramanujan_bound,
            ramanujan_margin: ramanujan_bound - lambda2,
            near_ramanujan_bound,
            near_ramanujan: lambda2 <= near_ramanujan_bound,
            near_margin: near_ramanujan_bound - lambda2,
        }
    }

    pub fn verdict(&self) -> String {
        if self.ramanujan {
            format!("Ramanujan (margin {:+.4})", self.ramanujan_margin)
        } else {
            format!("NOT Ramanujan (margin {:+.4})", self.ramanujan_margin)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use luspec_core::closedform::{lift_to_bipartite, spectrum};
    use luspec_core::ff::Field;
    use luspec_core::graphs::{build_d4, build_gamma};

    #[test]
    fn small_graphs_match_closed_forms() {
        for q in [2u64, 3, 4] {
            let field = Field::of_order(q).unwrap();
            let gamma = build_gamma(&field).unwrap();
            let numeric = numeric_spectrum(&gamma, DEFAULT_MAX_DENSE_N).unwrap();
            assert!(numeric.trace_identities_hold(gamma.edge_count()));
            let exact = spectrum(&field).unwrap();
            let cmp = compare_spectra(&exact, &numeric, 1e-8).unwrap();
            assert!(cmp.passed, "q={q}: {cmp:?}");
            let d4 = build_d4(&field).unwrap();
            let nd = numeric_spectrum(&d4, DEFAULT_MAX_DENSE_N).unwrap();
            assert!(nd.is_symmetric(1e-8));
            let cmp = compare_spectra(&lift_to_bipartite(&exact).unwrap(), &nd, 1e-8).unwrap();
            assert!(cmp.passed, "D(4,{q}): {cmp:?}");
        }
    }

    #[test]
    fn identical_inputs_have_zero_deviation() {
        let field = Field::of_order(3).unwrap();
        let exact = spectrum(&field).unwrap();
        let numeric = NumericSpectrum {
            values: exact.expanded(),
        };
        let cmp = compare_spectra(&exact, &numeric, 1e-12).unwrap();
        assert!(cmp.passed);
        assert_eq!(cmp.worst_deviation, 0.0);
    }

    #[test]
    fn perturbations_are_caught() {
        let field = Field::of_order(3).unwrap();
        let exact = spectrum(&field).unwrap();
        let mut values = exact.expanded();
        let last = values.len() - 1;
        values[last] += 1e-3;
        let cmp = compare_spectra(
            &exact,
            &NumericSpectrum {
                values: values.clone(),
            },
            1e-6,
        )
        .unwrap();
        assert!(!cmp.passed);
        values.pop();
        assert_eq!(
            compare_spectra(&exact, &NumericSpectrum { values }, 1e-6),
            Err(OracleError::TotalMismatch {
                exact: 81,
                numeric: 80
            })
        );
    }

    #[test]
    fn budget_is_enforced() {
        let field = Field::of_order(3).unwrap();
        let gamma = build_gamma(&field).unwrap();
        assert_eq!(
            numeric_spectrum(&gamma, 80),
            Err(OracleError::BudgetExceeded { n: 81, budget: 80 })
        );
    }

    #[test]
    fn expansion_report_bounds() {
        let r = ExpansionReport::from_values(5, Source::Closed, [5.0, 3.618, 2.0, -5.0]);
        assert_eq!(r.lambda2, 3.618);
        assert!(r.isoperimetric_lower <= r.isoperimetric_upper);
        assert!(r.ramanujan);
        let r13 = ExpansionReport::from_values(13, Source::Closed, [13.0, 6.9533]);
        assert!(!r13.ramanujan && r13.near_ramanujan);
        assert_eq!(r13.verdict(), "NOT Ramanujan (margin -0.0251)");
    }

    proptest::proptest! {
        #[test]
        fn isoperimetric_bounds_are_ordered(q in 2u64..64, frac in 0.0f64..1.0) {
            // Any eigenvalue of a q-regular graph lies in [-q, q].
            let lambda = -(q as f64) + frac * (2.0 * q as f64 - 1e-3);
            let r = ExpansionReport::from_values(q, Source::Closed, [q as f64, lambda]);
            proptest::prop_assert!(r.isoperimetric_lower <= r.isoperimetric_upper);
            proptest::prop_assert_eq!(r.ramanujan, r.ramanujan_margin >= 0.0);
        }

        #[test]
        fn comparison_ignores_order_and_catches_shifts(q in 2u64..=4, seed in 0usize..1000, shift in 1e-4f64..1.0) {
            let exact = spectrum(&Field::of_order(q).unwrap()).unwrap();
            let mut values = exact.expanded();
            let n = values.len();
            values.rotate_left(seed % n);
            let shuffled = NumericSpectrum { values: values.clone() };
            proptest::prop_assert!(compare_spectra(&exact, &shuffled, DEFAULT_TOLERANCE).unwrap().passed);
            values[seed % n] += shift;
            let shifted = NumericSpectrum { values };
            proptest::prop_assert!(!compare_spectra(&exact, &shifted, DEFAULT_TOLERANCE).unwrap().passed);
        }
    }
}
