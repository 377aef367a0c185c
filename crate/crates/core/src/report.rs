//! Versioned verification reports: entries keyed by anchor, canonical ordering, CSV projection
//! and merging of several runs.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

pub const SCHEMA: u32 = 1;

/// Anchor names with one-line descriptions; docs/anchors.md lists the same names.
pub const ANCHORS: &[(&str, &str)] = &[
    ("compare.acyclic", "de Rham-Witt complex at a non-integral weight has no cohomology"),
    ("compare.base-change", "cohomology commutes with base change when Tor_1 vanishes"),
    ("compare.crystalline", "per-weight de Rham-Witt vs de Rham cohomology of the Z/p^n lift"),
    ("compare.target", "twisted r_n into the direct sum of A/d_{n-u} summands"),
    ("drw.axioms", "F-V-procomplex identities on basis and random elements"),
    ("drw.basis", "basis enumeration by weight and partition"),
    ("drw.basis-ranks", "basis ranks vs integral-forms quotient ranks"),
    ("drw.cartier", "higher Cartier isomorphism onto cohomology"),
    ("drw.filtration", "kernel of restriction and graded pieces of the standard filtration"),
    ("drw.normalize", "normal form of a word in F, V, R, d and products"),
    ("drw.one-variable", "explicit decomposition of the one-variable complex"),
    ("plumbing", "computed object dump with no verification attached"),
    ("prism.lambda-square", "lambda_{r+1} after V equals a unit times phi^r(d) lambda_r"),
    ("prism.rn.bijection", "crystalline r_n is a bijection W_n(F_p) -> Z/p^n"),
    ("prism.rn.generator", "product embedding of V^j([x]) in closed form"),
    ("prism.rn.homomorphism", "r_n is additive and multiplicative"),
    ("prism.rn.value", "value of r_n on one input"),
    ("prism.validate", "prism preset is a bounded distinguished δ-pair"),
    ("tilt.diagrams", "six tilting diagrams commute"),
    ("tilt.perfectoid", "perfectoid conditions on samples"),
    ("tilt.xi", "xi_r lies in and generates ker theta_r"),
    ("witt.arithmetic", "Witt vector operation result"),
    ("witt.ghost-oracle", "structural polynomials agree with the ghost-lift oracle"),
];

pub fn is_anchor(name: &str) -> bool {
    ANCHORS.binary_search_by(|(a, _)| a.cmp(&name)).is_ok()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Inconclusive,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Inconclusive => "inconclusive",
            Status::Fail => "fail",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub anchor: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
    pub status: Status,
    pub details: Value,
}

impl Entry {
    pub fn new(anchor: &str, status: Status, details: Value) -> Self {
        Entry { anchor: anchor.to_string(), weight: None, status, details }
    }

    pub fn weighted(anchor: &str, weight: impl Into<String>, status: Status, details: Value) -> Self {
        Entry { anchor: anchor.to_string(), weight: Some(weight.into()), status, details }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub config: Value,
    pub seed: u64,
    pub entries: Vec<Entry>,
    pub summary: Summary,
}

/// A weight string "(a, b/c, ...)" as exact rationals, for numeric ordering.
fn weight_key(w: &str) -> Option<Vec<(i128, i128)>> {
    let inner = w.trim().strip_prefix('(')?.strip_suffix(')')?;
    if inner.trim().is_empty() {
        return Some(Vec::new());
    }
    inner
        .split(',')
        .map(|t| {
            let t = t.trim();
            match t.split_once('/') {
                Some((a, b)) => Some((a.trim().parse().ok()?, b.trim().parse().ok()?)),
                None => Some((t.parse().ok()?, 1)),
            }
        })
        .collect()
}

/// No weight first, then weights compared entrywise as rationals.
pub fn cmp_weight(a: &Option<String>, b: &Option<String>) -> Ordering {
    match (a, b) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
        (Some(x), Some(y)) => match (weight_key(x), weight_key(y)) {
            (Some(kx), Some(ky)) => {
                for ((a, b), (c, d)) in kx.iter().zip(&ky) {
                    match (a * d).cmp(&(c * b)) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                kx.len().cmp(&ky.len()).then_with(|| x.cmp(y))
            }
            _ => x.cmp(y),
        },
    }
}

fn cmp_entry(a: &Entry, b: &Entry) -> Ordering {
    a.anchor.cmp(&b.anchor).then_with(|| cmp_weight(&a.weight, &b.weight))
}

impl Report {
    /// Entries are sorted by anchor then weight; the sort is stable so equal keys keep the
    /// order in which they were produced.
    pub fn new(command: &str, config: Value, seed: u64, mut entries: Vec<Entry>) -> Self {
        entries.sort_by(cmp_entry);
        let mut summary = Summary::default();
        for e in &entries {
            match e.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Inconclusive => summary.inconclusive += 1,
            }
        }
        Report { schema: SCHEMA, command: command.to_string(), config, seed, entries, summary }
    }

    /// Several reports as one, e.g. for `verify all`.
    pub fn combine(command: &str, config: Value, seed: u64, parts: Vec<Report>) -> Self {
        Report::new(command, config, seed, parts.into_iter().flat_map(|r| r.entries).collect())
    }

    pub fn unknown_anchors(&self) -> Vec<String> {
        self.entries.iter().filter(|e| !is_anchor(&e.anchor)).map(|e| e.anchor.clone()).collect()
    }

    /// 1 when any entry failed; inconclusive entries do not count.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.entries.iter().any(|e| e.status == Status::Fail))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        match v.get("schema").and_then(Value::as_u64) {
            Some(s) if s == SCHEMA as u64 => {}
            other => return Err(Error::Parse(format!("schema {other:?}, expected {SCHEMA}"))),
        }
        serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))
    }

    /// command, seed, anchor, weight, status, details (compact JSON).
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["command", "seed", "anchor", "weight", "status", "details"]).expect("csv header");
        let seed = self.seed.to_string();
        for e in &self.entries {
            let details = e.details.to_string();
            w.write_record([self.command.as_str(), &seed, &e.anchor, e.weight.as_deref().unwrap_or(""), e.status.name(), &details]).expect("csv row");
        }
        String::from_utf8(w.into_inner().expect("csv flush")).expect("utf-8")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MergedRow {
    pub anchor: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
    pub command: String,
    pub config: String,
    /// Position among the entries of one run sharing anchor and weight.
    pub index: usize,
    /// The worst status seen: fail, then inconclusive, then pass.
    pub status: Status,
    pub statuses: Vec<Status>,
    pub conflict: bool,
    pub runs: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MergedTable {
    pub schema: u32,
    pub rows: Vec<MergedRow>,
    pub conflicts: usize,
}

/// Union of the entries of several reports keyed by anchor, weight, command, config and position
/// among equal (anchor, weight) pairs; rows whose runs disagree on the status are flagged.
pub fn merge_reports(reports: &[Report]) -> MergedTable {
    type Key = (String, Option<String>, String, String, usize);
    let mut rows: BTreeMap<Key, (Vec<Status>, usize)> = BTreeMap::new();
    for r in reports {
        let config = r.config.to_string();
        let mut seen: BTreeMap<(&str, Option<&str>), usize> = BTreeMap::new();
        for e in &r.entries {
            let index = seen.entry((e.anchor.as_str(), e.weight.as_deref())).or_default();
            let slot = rows.entry((e.anchor.clone(), e.weight.clone(), r.command.clone(), config.clone(), *index)).or_default();
            *index += 1;
            if !slot.0.contains(&e.status) {
                slot.0.push(e.status);
            }
            slot.1 += 1;
        }
    }
    let mut out: Vec<MergedRow> = rows
        .into_iter()
        .map(|((anchor, weight, command, config, index), (mut statuses, runs))| {
            statuses.sort();
            MergedRow {
                anchor,
                weight,
                command,
                config,
                index,
                status: *statuses.last().expect("at least one status"),
                conflict: statuses.len() > 1,
                statuses,
                runs,
            }
        })
        .collect();
    out.sort_by(|a, b| {
        a.anchor
            .cmp(&b.anchor)
            .then_with(|| cmp_weight(&a.weight, &b.weight))
            .then_with(|| a.command.cmp(&b.command))
            .then_with(|| a.config.cmp(&b.config))
            .then_with(|| a.index.cmp(&b.index))
    });
    let conflicts = out.iter().filter(|r| r.conflict).count();
    MergedTable { schema: SCHEMA, rows: out, conflicts }
}

impl MergedTable {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["anchor", "weight", "command", "config", "index", "status", "conflict", "runs"]).expect("csv header");
        for r in &self.rows {
            let (index, runs) = (r.index.to_string(), r.runs.to_string());
            w.write_record([r.anchor.as_str(), r.weight.as_deref().unwrap_or(""), &r.command, &r.config, &index, r.status.name(), if r.conflict { "true" } else { "false" }, &runs])
                .expect("csv row");
        }
        String::from_utf8(w.into_inner().expect("csv flush")).expect("utf-8")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn anchors_sorted_and_unique() {
        assert!(ANCHORS.windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn entries_sort_by_anchor_then_numeric_weight() {
        let e = |a: &str, w: Option<&str>| Entry { anchor: a.into(), weight: w.map(String::from), status: Status::Pass, details: json!(null) };
        let r = Report::new("t", json!({}), 0, vec![e("drw.cartier", Some("(10)")), e("drw.cartier", Some("(3/2)")), e("drw.axioms", None), e("drw.cartier", Some("(2)")), e("drw.cartier", None)]);
        let order: Vec<_> = r.entries.iter().map(|e| (e.anchor.as_str(), e.weight.as_deref())).collect();
        assert_eq!(order, [("drw.axioms", None), ("drw.cartier", None), ("drw.cartier", Some("(3/2)")), ("drw.cartier", Some("(2)")), ("drw.cartier", Some("(10)"))]);
        assert_eq!(cmp_weight(&Some("(1/2, 3)".into()), &Some("(1/2, 5/2)".into())), Ordering::Greater);
    }

    #[test]
    fn exit_code_ignores_inconclusive() {
        let mk = |s| Report::new("t", json!({}), 0, vec![Entry::new("plumbing", Status::Pass, json!(1)), Entry::new("tilt.perfectoid", s, json!(2))]);
        assert_eq!(mk(Status::Inconclusive).exit_code(), 0);
        assert_eq!(mk(Status::Fail).exit_code(), 1);
        assert_eq!(mk(Status::Fail).summary, Summary { pass: 1, fail: 1, inconclusive: 0 });
    }

    #[test]
    fn json_round_trip_and_schema_check() {
        let r = Report::new("witt mul", json!({"p": 2}), 7, vec![Entry::weighted("drw.cartier", "(1/2)", Status::Pass, json!({"x": [1, 2]}))]);
        assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
        let bad = r.to_json().replace("\"schema\": 1", "\"schema\": 2");
        assert!(matches!(Report::from_json(&bad), Err(Error::Parse(_))));
    }

    #[test]
    fn csv_quotes_details() {
        let r = Report::new("c", json!({}), 1, vec![Entry::weighted("drw.basis", "(1, 2)", Status::Pass, json!({"a": "b,c"}))]);
        let csv = r.to_csv();
        let mut rd = csv::Reader::from_reader(csv.as_bytes());
        let rows: Vec<csv::StringRecord> = rd.records().map(|x| x.unwrap()).collect();
        assert_eq!(rows.len(), 1);
        assert_eq!(&rows[0][3], "(1, 2)");
        assert_eq!(&rows[0][5], r#"{"a":"b,c"}"#);
    }

    #[test]
    fn merge_unions_and_flags_conflicts() {
        let cfg = json!({"p": 2});
        let a = Report::new("v", cfg.clone(), 0, vec![Entry::new("drw.axioms", Status::Pass, json!(0)), Entry::new("drw.cartier", Status::Pass, json!(0))]);
        let b = Report::new("v", cfg.clone(), 0, vec![Entry::new("drw.axioms", Status::Fail, json!(0)), Entry::new("drw.filtration", Status::Pass, json!(0))]);
        let t = merge_reports(&[a.clone(), b]);
        assert_eq!(t.rows.len(), 3);
        let twice = Report::new("v", cfg.clone(), 0, vec![Entry::new("tilt.diagrams", Status::Pass, json!(0)), Entry::new("tilt.diagrams", Status::Pass, json!(1))]);
        assert_eq!(merge_reports(&[twice]).rows.len(), 2);
        assert_eq!(t.conflicts, 1);
        assert!(t.rows[0].conflict && t.rows[0].status == Status::Fail);
        let same = merge_reports(&[a.clone(), a]);
        assert_eq!(same.conflicts, 0);
        assert_eq!(same.rows[0].runs, 2);
        let empty = merge_reports(&[]);
        assert!(empty.rows.is_empty());
    }
}
