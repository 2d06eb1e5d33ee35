//! File formats: edge lists, coordinate dictionaries, spectra, ε tables and
//! expansion reports.

use std::io::{self, Write};

use luspec_core::closedform::{
    epsilon_square_coincidences, fiber_profile, representatives, ExactValue, SpectrumMultiset,
};
use luspec_core::cyclo::{
    exp_sum_cubic, exp_sum_teichmuller_cubic, fibre_counts, weil_check, Cubic, CycInt,
};
use luspec_core::ff::Field;
use luspec_core::gr9::GaloisRing9;
use luspec_core::graphs::{decode, Graph, GraphKind};
use luspec_core::reps::CubicLabel;
use serde::Serialize;
use serde_json::{json, Value};

use crate::oracle::{ExpansionReport, NumericSpectrum};

/// Optional provenance line; `None` keeps outputs byte-identical across runs.
pub type Stamp = Option<u64>;

/// Seconds since the Unix epoch.
pub fn now_stamp() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}

/// Header line, then one `u v` pair per edge with `u < v`, ascending.
pub fn write_edge_list(w: &mut impl Write, graph: &Graph, stamp: Stamp) -> io::Result<()> {
    if let Some(t) = stamp {
        writeln!(w, "# generated={t}")?;
    }
    writeln!(
        w,
        "# graph={} q={} vertices={} edges={} indexing=base-q",
        graph.kind().label(),
        graph.q(),
        graph.vertex_count(),
        graph.edge_count()
    )?;
    for (u, v) in graph.edges() {
        writeln!(w, "{u} {v}")?;
    }
    Ok(())
}

/// `index kind c1 c2 c3 c4`, coordinates given by field-element index.
pub fn write_coords(
    w: &mut impl Write,
    field: &Field,
    graph: &Graph,
    stamp: Stamp,
) -> io::Result<()> {
    if let Some(t) = stamp {
        writeln!(w, "# generated={t}")?;
    }
    writeln!(
        w,
        "# graph={} q={} coords=element-index modulus={:?}",
        graph.kind().label(),
        graph.q(),
        field.modulus()
    )?;
    writeln!(w, "# index kind c1 c2 c3 c4")?;
    let n = field.order().pow(4);
    for index in 0..graph.vertex_count() as u32 {
        let (kind, local) = match graph.kind() {
            GraphKind::D4 if index >= n => ("line", index - n),
            GraphKind::Cayley => ("group", index),
            _ => ("point", index),
        };
        let [a, b, c, d] = decode(field, local).map(|x| x.index());
        writeln!(w, "{index} {kind} {a} {b} {c} {d}")?;
    }
    Ok(())
}

/// `zeta<n>:c0 c1 …` in the power basis.
pub fn format_cyc(x: &CycInt) -> String {
    let coeffs: Vec<String> = x.coeffs().iter().map(|c| c.to_string()).collect();
    format!("zeta{}:{}", x.conductor().value(), coeffs.join(" "))
}

pub fn label_string(field: &Field, label: &CubicLabel) -> String {
    match label {
        CubicLabel::Field(f) => cubic_string(field, *f),
        CubicLabel::Teichmuller(c) => format!("t^3+3*[{}]t", c.index()),
    }
}

fn cubic_string(_field: &Field, f: Cubic) -> String {
    match (f.a.index(), f.c.index()) {
        (1, 0) => "t^3".into(),
        (a, 0) => format!("{a}t^3"),
        (1, 1) => "t^3+t".into(),
        (1, c) => format!("t^3+{c}t"),
        (a, 1) => format!("{a}t^3+t"),
        (a, c) => format!("{a}t^3+{c}t"),
    }
}

fn exact_json(field: Option<&Field>, entry: &luspec_core::closedform::SpectrumEntry) -> Value {
    match (&entry.value, &entry.witness) {
        (ExactValue::Int(k), _) => json!(k),
        (ExactValue::Sqrt { .. }, _) => json!(entry.expression()),
        (ExactValue::Cyc(_), Some(w)) => {
            let labels: Vec<String> = match field {
                Some(f) => w.labels.iter().map(|l| label_string(f, l)).collect(),
                None => Vec::new(),
            };
            json!({
                "expression": entry.expression(),
                "eps_conductor": w.eps.conductor().value(),
                "eps_power_basis": w.eps.coeffs(),
                "families": labels,
            })
        }
        (ExactValue::Cyc(x), None) => json!({
            "conductor": x.conductor().value(),
            "power_basis": x.coeffs(),
        }),
    }
}

pub fn spectrum_json(field: Option<&Field>, s: &SpectrumMultiset, stamp: Stamp) -> Value {
    let entries: Vec<Value> = s
        .entries
        .iter()
        .map(|e| {
            json!({
                "value_exact": exact_json(field, e),
                "value_float": e.approx,
                "multiplicity": e.multiplicity,
            })
        })
        .collect();
    let mut out = json!({
        "graph": s.graph.label(),
        "q": s.q,
        "source": "closed",
        "entries": entries,
        "total": s.total(),
    });
    if let Some(t) = stamp {
        out["generated"] = json!(t);
    }
    out
}

pub fn numeric_json(kind: GraphKind, q: u64, s: &NumericSpectrum, stamp: Stamp) -> Value {
    let mut out = json!({
        "graph": kind.label(),
        "q": q,
        "source": "numeric",
        "eigenvalues": s.values,
        "total": s.len(),
    });
    if let Some(t) = stamp {
        out["generated"] = json!(t);
    }
    out
}

pub fn spectrum_table(s: &SpectrumMultiset) -> String {
    let mut out = format!(
        "# graph={} q={} total={}\n",
        s.graph.label(),
        s.q,
        s.total()
    );
    out.push_str(&format!(
        "{:>22}  {:>12}  {}\n",
        "value", "multiplicity", "exact"
    ));
    for e in &s.entries {
        let exact = match (&e.value, &e.witness) {
            (ExactValue::Cyc(_), Some(w)) => {
                format!("{} with eps={}", e.expression(), format_cyc(&w.eps))
            }
            _ => e.expression(),
        };
        out.push_str(&format!(
            "{:>22.12}  {:>12}  {}\n",
            e.approx, e.multiplicity, exact
        ));
    }
    out
}

/// One row of the ε table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EpsilonRow {
    pub family: String,
    pub a: u32,
    pub c: u32,
    pub eps_exact: String,
    pub eps_float: f64,
    pub eps_sq_minus_q: f64,
    pub weil_margin: f64,
    /// Sizes of the trace fibres `#{t : tr f(t) = s}`; on a prime field this is
    /// the fiber profile of `f`.
    pub fiber_profile: String,
}

/// The ε table for odd `q` plus its annotations.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EpsilonTable {
    pub q: u64,
    pub rows: Vec<EpsilonRow>,
    /// For prime `p ≥ 5`: the representative reached from each row.
    pub representatives: Vec<Option<String>>,
    /// Pairs of representatives with `ε_g = -ε_f`.
    pub coincidences: Vec<(String, String)>,
}

fn join_counts<T: ToString>(xs: &[T]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Tabulates the cubics whose sums enter the spectrum of `Γ(4,q)`, odd `q`.
pub fn epsilon_table(field: &Field) -> luspec_core::Result<EpsilonTable> {
    let q = field.order() as u64;
    if field.characteristic() == 2 {
        return Err(luspec_core::Error::WrongParity { q, expected: "odd" });
    }
    let row = |family: &str,
               a: u32,
               c: u32,
               eps: &CycInt,
               fibres: String|
     -> luspec_core::Result<EpsilonRow> {
        let x = eps.to_f64();
        Ok(EpsilonRow {
            family: family.into(),
            a,
            c,
            eps_exact: format_cyc(eps),
            eps_float: x,
            eps_sq_minus_q: x * x - q as f64,
            weil_margin: weil_check(eps, q, 3)?.margin,
            fiber_profile: fibres,
        })
    };
    let mut rows = Vec::new();
    let mut reps_col = Vec::new();
    let mut coincidences = Vec::new();
    if field.characteristic() == 3 {
        let ring = GaloisRing9::new(field.degree())?;
        for c in ring.residue_field().elements() {
            let eps = exp_sum_teichmuller_cubic(&ring, c);
            let lift = ring.teichmuller_lift(c);
            let f = [
                luspec_core::gr9::RingElem::ZERO,
                ring.scale(3, lift),
                luspec_core::gr9::RingElem::ZERO,
                luspec_core::gr9::RingElem::ONE,
            ];
            let mut counts = [0u32; 9];
            for &t in ring.teichmuller() {
                counts[ring.trace(ring.eval(&f, t)) as usize] += 1;
            }
            rows.push(row(
                "t^3+3ct/GR(9,e)",
                1,
                c.index(),
                &eps,
                join_counts(&counts),
            )?);
            reps_col.push(None);
        }
    } else {
        let prime_reps = if field.is_prime_field() {
            Some(representatives(field)?)
        } else {
            None
        };
        let cubics: Vec<Cubic> = if q % 3 == 2 {
            field.elements().map(Cubic::monic).collect()
        } else {
            field
                .nonzero_elements()
                .flat_map(|a| field.elements().map(move |c| Cubic::new(a, c)))
                .collect()
        };
        for f in cubics {
            let eps = exp_sum_cubic(field, f);
            let fibres = if field.is_prime_field() {
                fiber_profile(field, f)?
            } else {
                fibre_counts(field, |t| f.eval(field, t))
                    .iter()
                    .map(|&k| k as u32)
                    .collect()
            };
            rows.push(row(
                "at^3+ct",
                f.a.index(),
                f.c.index(),
                &eps,
                join_counts(&fibres),
            )?);
            reps_col.push(match &prime_reps {
                Some(r) => Some(cubic_string(field, r.representative_of(field, f)?)),
                None => None,
            });
        }
        if prime_reps.is_some() {
            for (f, g) in epsilon_square_coincidences(field)? {
                coincidences.push((cubic_string(field, f), cubic_string(field, g)));
            }
        }
    }
    Ok(EpsilonTable {
        q,
        rows,
        representatives: reps_col,
        coincidences,
    })
}

pub fn write_epsilon_csv(w: impl Write, table: &EpsilonTable) -> csv::Result<()> {
    let mut writer = csv::Writer::from_writer(w);
    for row in &table.rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn epsilon_text(table: &EpsilonTable) -> String {
    let mut out = format!("# epsilons q={} rows={}\n", table.q, table.rows.len());
    out.push_str(&format!(
        "{:<16} {:>4} {:>4} {:>14} {:>14} {:>11} {:<16} {}\n",
        "family", "a", "c", "eps", "eps^2-q", "weil_margin", "representative", "fiber_profile"
    ));
    for (row, rep) in table.rows.iter().zip(&table.representatives) {
        out.push_str(&format!(
            "{:<16} {:>4} {:>4} {:>14.6} {:>14.6} {:>11.4} {:<16} {}\n",
            row.family,
            row.a,
            row.c,
            row.eps_float,
            row.eps_sq_minus_q,
            row.weil_margin,
            rep.as_deref().unwrap_or("-"),
            row.fiber_profile
        ));
    }
    for (f, g) in &table.coincidences {
        out.push_str(&format!("# merged under squaring: eps({g}) = -eps({f})\n"));
    }
    out
}

pub fn report_table(reports: &[ExpansionReport]) -> String {
    let mut out = format!(
        "{:>5} {:>8} {:>12} {:>10} {:>10} {:>10} {:>10} {:>10}  {}\n",
        "q", "source", "lambda2", "2sqrt(q-1)", "2sqrt(q)", "gap", "h_lower", "h_upper", "verdict"
    );
    for r in reports {
        out.push_str(&format!(
            "{:>5} {:>8} {:>12.6} {:>10.4} {:>10.4} {:>10.4} {:>10.4} {:>10.4}  {}\n",
            r.q,
            match r.source {
                crate::oracle::Source::Closed => "closed",
                crate::oracle::Source::Numeric => "numeric",
            },
            r.lambda2,
            r.ramanujan_bound,
            r.near_ramanujan_bound,
            r.spectral_gap,
            r.isoperimetric_lower,
            r.isoperimetric_upper,
            r.verdict()
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use luspec_core::closedform::spectrum;
    use luspec_core::graphs::{build_d4, build_gamma};

    #[test]
    fn edge_list_shape() {
        let field = Field::of_order(3).unwrap();
        let g = build_gamma(&field).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&mut buf, &g, None).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next(),
            Some("# graph=GAMMA4 q=3 vertices=81 edges=243 indexing=base-q")
        );
        let pairs: Vec<(u32, u32)> = lines
            .map(|l| {
                let mut it = l.split(' ').map(|x| x.parse().unwrap());
                (it.next().unwrap(), it.next().unwrap())
            })
            .collect();
        assert_eq!(pairs.len(), 243);
        assert!(pairs.iter().all(|(u, v)| u < v));
        assert!(pairs.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn coords_cover_points_and_lines() {
        let field = Field::of_order(2).unwrap();
        let g = build_d4(&field).unwrap();
        let mut buf = Vec::new();
        write_coords(&mut buf, &field, &g, Some(7)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# generated=7\n"));
        assert!(text.contains("\n3 point 1 1 0 0\n"));
        assert!(text.contains("\n16 line 0 0 0 0\n"));
        assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 32);
    }

    #[test]
    fn spectrum_json_round_trip() {
        let field = Field::of_order(5).unwrap();
        let s = spectrum(&field).unwrap();
        let v = spectrum_json(Some(&field), &s, None);
        assert_eq!(v["total"], 625);
        assert_eq!(v["graph"], "GAMMA4");
        let entries = v["entries"].as_array().unwrap();
        assert_eq!(entries.len(), 6);
        let eps = entries
            .iter()
            .find(|e| e["value_exact"].is_object())
            .unwrap();
        assert_eq!(eps["value_exact"]["expression"], "eps^2 - q");
        assert_eq!(eps["multiplicity"], 80);
    }

    #[test]
    fn epsilon_tables() {
        let f13 = Field::of_order(13).unwrap();
        let t = epsilon_table(&f13).unwrap();
        assert_eq!(t.rows.len(), 12 * 13);
        assert!(t
            .rows
            .iter()
            .any(|r| r.a == 4 && r.c == 0 && (r.eps_float + 6.9533).abs() < 1e-4));
        let f5 = Field::of_order(5).unwrap();
        let t5 = epsilon_table(&f5).unwrap();
        assert_eq!(
            t5.coincidences,
            [("t^3+2t".to_string(), "t^3+3t".to_string())]
        );
        assert!(epsilon_text(&t5).contains("merged under squaring"));
        let row = t5.rows.iter().find(|r| r.c == 2).unwrap();
        assert_eq!(row.fiber_profile, "1 0 2 2 0");
        let mut buf = Vec::new();
        write_epsilon_csv(&mut buf, &t5).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(
            "family,a,c,eps_exact,eps_float,eps_sq_minus_q,weil_margin,fiber_profile\n"
        ));
        let t9 = epsilon_table(&Field::of_order(9).unwrap()).unwrap();
        assert_eq!(t9.rows.len(), 9);
        assert!(epsilon_table(&Field::of_order(8).unwrap()).is_err());
    }
}
