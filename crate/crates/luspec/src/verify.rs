//! The cross-validation suite behind `luspec verify`.

use luspec_core::closedform::{
    epsilon_square_coincidences, lift_to_bipartite, spectrum, spectrum_prime, SpectrumMultiset,
};
use luspec_core::cyclo::{exp_sum_cubic, exp_sum_teichmuller_cubic, weil_check, Cubic};
use luspec_core::ff::{Field, RootProfile};
use luspec_core::gr9::GaloisRing9;
use luspec_core::graphs::{
    build_cayley, build_d4, build_gamma, cayley_matches_gamma, connected_components,
};
use luspec_core::reps::{build_m, eigen_via_epsilon, eigenvalues_match};
use serde::Serialize;

use crate::oracle::{compare_spectra, numeric_spectrum};

/// Largest `q` for the Cayley isomorphism and representation checks.
pub const STRUCTURE_MAX_Q: u64 = 7;
/// Largest `q` for the numeric `D(4,q)` comparison.
pub const D4_NUMERIC_MAX_Q: u64 = 5;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub q: u64,
    pub name: String,
    pub outcome: Outcome,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub tolerance: f64,
    pub max_dense_n: usize,
}

struct Recorder {
    q: u64,
    checks: Vec<Check>,
}

impl Recorder {
    fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            q: self.q,
            name: name.into(),
            outcome: if passed { Outcome::Pass } else { Outcome::Fail },
            detail: detail.into(),
        });
    }

    fn skip(&mut self, name: &str, detail: impl Into<String>) {
        self.checks.push(Check {
            q: self.q,
            name: name.into(),
            outcome: Outcome::Skip,
            detail: detail.into(),
        });
    }

    fn result<T, E: std::fmt::Display>(&mut self, name: &str, r: Result<T, E>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.push(name, false, e.to_string());
                None
            }
        }
    }
}

fn oracle_check(
    rec: &mut Recorder,
    name: &str,
    exact: &SpectrumMultiset,
    graph: &luspec_core::graphs::Graph,
    opts: &VerifyOptions,
) {
    if graph.vertex_count() > opts.max_dense_n {
        rec.skip(
            name,
            format!("{} vertices exceed the dense budget", graph.vertex_count()),
        );
        return;
    }
    let Some(numeric) = rec.result(name, numeric_spectrum(graph, opts.max_dense_n)) else {
        return;
    };
    if !numeric.trace_identities_hold(graph.edge_count()) {
        rec.push(name, false, "trace identities fail on the numeric spectrum");
        return;
    }
    if let Some(cmp) = rec.result(name, compare_spectra(exact, &numeric, opts.tolerance)) {
        rec.push(
            name,
            cmp.passed,
            format!(
                "worst relative deviation {:.2e}, {} multiplicity mismatches",
                cmp.worst_deviation,
                cmp.mismatches.len()
            ),
        );
    }
}

/// Runs every applicable check for one `q`.
pub fn verify_q(q: u64, opts: &VerifyOptions) -> Vec<Check> {
    let mut rec = Recorder {
        q,
        checks: Vec::new(),
    };
    let Some(field) = rec.result("field", Field::of_order(q)) else {
        return rec.checks;
    };
    let odd = field.characteristic() != 2;

    let Some(exact) = rec.result("closed form", spectrum(&field)) else {
        return rec.checks;
    };
    rec.push(
        "closed form",
        exact.total() == q.pow(4),
        format!(
            "{} distinct values, total {}",
            exact.distinct_count(),
            exact.total()
        ),
    );
    if odd {
        rec.push(
            "weil envelope",
            exact.weil_envelope_holds(),
            "every ε satisfies |ε| ≤ 2√q",
        );
    }

    let quad = field.quadratic_root_profile();
    rec.push(
        "quadratic root profile",
        quad == RootProfile::quadratic_formula(q),
        format!(
            "n0..n2 = {:?}",
            quad.iter().map(|(_, n)| n).collect::<Vec<_>>()
        ),
    );
    if !odd {
        if let Some(cubic) = rec.result("cubic root profile", field.cubic_root_profile_even()) {
            rec.push(
                "cubic root profile",
                cubic == RootProfile::cubic_even_formula(q),
                format!(
                    "n0, n1, n3 = {:?}",
                    cubic.iter().map(|(_, n)| n).collect::<Vec<_>>()
                ),
            );
        }
    }

    if odd {
        weil_sweep(&mut rec, &field);
        if field.is_prime_field() {
            if let Some(s) = rec.result("prime spectrum", spectrum_prime(&field)) {
                rec.push(
                    "prime spectrum",
                    true,
                    format!("{} distinct roots", s.distinct_count()),
                );
            }
            if q >= 5 {
                if let Some(pairs) =
                    rec.result("square coincidences", epsilon_square_coincidences(&field))
                {
                    let expected = usize::from(q == 5);
                    rec.push(
                        "square coincidences",
                        pairs.len() == expected,
                        format!("{} pair(s) with ε_g = -ε_f", pairs.len()),
                    );
                }
            }
        }
    }

    let graph_q_ok = q <= luspec_core::graphs::DEFAULT_MAX_GRAPH_Q as u64;
    if !graph_q_ok {
        rec.skip("graphs", "q above the graph construction bound");
        return rec.checks;
    }
    let Some(gamma) = rec.result("build gamma", build_gamma(&field)) else {
        return rec.checks;
    };
    let comps = connected_components(&gamma);
    let top = exact.entries.first().map_or(0, |e| e.multiplicity);
    rec.push(
        "components",
        comps.count() as u64 == top,
        format!("{} components, top multiplicity {top}", comps.count()),
    );

    if q <= STRUCTURE_MAX_Q {
        if let Some(cayley) = rec.result("cayley isomorphism", build_cayley(&field)) {
            rec.push(
                "cayley isomorphism",
                cayley_matches_gamma(&field, &cayley, &gamma),
                "orbit map is a graph isomorphism",
            );
        }
        if odd {
            rep_checks(&mut rec, &field);
        }
    }

    oracle_check(&mut rec, "gamma oracle", &exact, &gamma, opts);

    if q <= D4_NUMERIC_MAX_Q {
        if let (Some(d4), Some(lifted)) = (
            rec.result("build d4", build_d4(&field)),
            rec.result("bipartite lift", lift_to_bipartite(&exact)),
        ) {
            oracle_check(&mut rec, "d4 oracle", &lifted, &d4, opts);
        }
    }
    rec.checks
}

fn weil_sweep(rec: &mut Recorder, field: &Field) {
    let q = field.order() as u64;
    let mut worst = f64::INFINITY;
    let mut count = 0usize;
    let mut violations = 0usize;
    let mut note = |eps: &luspec_core::cyclo::CycInt| match weil_check(eps, q, 3) {
        Ok(c) => {
            count += 1;
            worst = worst.min(c.margin);
            violations += usize::from(!c.holds);
        }
        Err(_) => violations += 1,
    };
    if field.characteristic() == 3 {
        match GaloisRing9::new(field.degree()) {
            Ok(ring) => {
                for c in ring.residue_field().elements() {
                    note(&exp_sum_teichmuller_cubic(&ring, c));
                }
            }
            Err(e) => {
                rec.push("weil sweep", false, e.to_string());
                return;
            }
        }
    } else {
        for a in field.nonzero_elements() {
            for c in field.elements() {
                note(&exp_sum_cubic(field, Cubic::new(a, c)));
            }
        }
    }
    rec.push(
        "weil sweep",
        violations == 0,
        format!("{count} sums, {violations} violations, smallest margin {worst:.4}"),
    );
}

fn rep_checks(rec: &mut Recorder, field: &Field) {
    let mut ok = true;
    let mut pairs = 0;
    for a in field.nonzero_elements() {
        for b in field.nonzero_elements() {
            let m = match build_m(field, a, b) {
                Ok(m) => m,
                Err(e) => {
                    rec.push("M eigenvalues", false, e.to_string());
                    return;
                }
            };
            let values: Vec<_> = match eigen_via_epsilon(field, a, b) {
                Ok(v) => v.into_iter().map(|e| e.value).collect(),
                Err(e) => {
                    rec.push("M eigenvalues", false, e.to_string());
                    return;
                }
            };
            ok &= m.is_hermitian() && eigenvalues_match(&m, &values).unwrap_or(false);
            pairs += 1;
        }
    }
    rec.push(
        "M eigenvalues",
        ok,
        format!("{pairs} pairs (α,β): ε_f² - q matches M_(α,β)(S) by exact power sums"),
    );
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.outcome != Outcome::Fail)
}

pub fn checks_table(checks: &[Check]) -> String {
    let mut out = String::new();
    for c in checks {
        let tag = match c.outcome {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Skip => "SKIP",
        };
        out.push_str(&format!("{tag} q={:<3} {:<24} {}\n", c.q, c.name, c.detail));
    }
    let failed = checks.iter().filter(|c| c.outcome == Outcome::Fail).count();
    out.push_str(&format!(
        "{} checks, {} failed: {}\n",
        checks.len(),
        failed,
        if failed == 0 { "PASS" } else { "FAIL" }
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_q_suite_passes() {
        let opts = VerifyOptions {
            tolerance: 1e-6,
            max_dense_n: 2000,
        };
        for q in [2u64, 3, 4, 5] {
            let checks = verify_q(q, &opts);
            assert!(all_passed(&checks), "{}", checks_table(&checks));
            assert!(checks
                .iter()
                .any(|c| c.name == "gamma oracle" && c.outcome == Outcome::Pass));
        }
    }

    #[test]
    fn non_prime_power_fails() {
        let opts = VerifyOptions {
            tolerance: 1e-6,
            max_dense_n: 10,
        };
        assert!(!all_passed(&verify_q(6, &opts)));
    }
}
