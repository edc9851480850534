//! Scan driver and report assembly behind the `zgunits` command line.
//!
//! Records are ordered by `(a, b, k)` and carry no timestamps. Wall-clock
//! timings live in a separate top-level array so two runs with the same
//! configuration produce identical `records` and `summary` payloads.

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::Instant;

use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{PolyError, ReportError};
use crate::free::{
    certify_freeness, certify_hydra, certify_normal_generation, ClaimedStructure, HydraReport,
    WordSpec, DEFAULT_EXP_BOUND, DEFAULT_MAX_SYLLABLES,
};
use crate::group::{find_witnesses, witness_for, GroupSpec, GroupTable, Witness, CATALOG};
use crate::poly::{big_f, sweep_nonvanishing, sweep_power_identity, Poly, SweepSummary};
use crate::ring::{CoeffRing, GroupRing};
use crate::units::{
    classify_order, make_family, order_oracle, trace_certificate, OracleVerdict, OrderCase,
    OrderClassification, PredictedOrder,
};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum KSelector {
    #[default]
    All,
    List(Vec<usize>),
}

impl KSelector {
    pub fn ks(&self, order_a: usize) -> Vec<usize> {
        match self {
            KSelector::All => (1..=order_a).collect(),
            KSelector::List(ks) => ks
                .iter()
                .copied()
                .filter(|&k| k >= 1 && k <= order_a)
                .collect(),
        }
    }
}

impl fmt::Display for KSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KSelector::All => f.write_str("all"),
            KSelector::List(ks) => {
                let parts: Vec<String> = ks.iter().map(usize::to_string).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

impl FromStr for KSelector {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("all") {
            return Ok(KSelector::All);
        }
        let mut ks = s
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| ReportError::Config(format!("bad k selector {s:?}")))?;
        if ks.contains(&0) {
            return Err(ReportError::Config("k must be positive".into()));
        }
        ks.sort_unstable();
        ks.dedup();
        Ok(KSelector::List(ks))
    }
}

impl From<KSelector> for String {
    fn from(k: KSelector) -> String {
        k.to_string()
    }
}

impl TryFrom<String> for KSelector {
    type Error = ReportError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "md" | "markdown" => Ok(OutputFormat::Markdown),
            _ => Err(ReportError::Config(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    /// A group spec, or `catalog` for the built-in list.
    pub group: String,
    pub ring: CoeffRing,
    pub k: KSelector,
    pub max_syllables: usize,
    pub exp_bound: i64,
    pub dedup: bool,
    pub format: OutputFormat,
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            group: "catalog".into(),
            ring: CoeffRing::Integers,
            k: KSelector::All,
            max_syllables: DEFAULT_MAX_SYLLABLES,
            exp_bound: DEFAULT_EXP_BOUND,
            dedup: false,
            format: OutputFormat::Json,
            jobs: 1,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ReportError> {
        if self.max_syllables < 1 {
            return Err(ReportError::Config(
                "max syllables must be at least 1".into(),
            ));
        }
        if self.exp_bound < 1 {
            return Err(ReportError::Config(
                "exponent bound must be at least 1".into(),
            ));
        }
        if self.jobs < 1 {
            return Err(ReportError::Config(
                "worker count must be at least 1".into(),
            ));
        }
        Ok(())
    }

    pub fn group_specs(&self) -> Vec<String> {
        if self.group.trim().eq_ignore_ascii_case("catalog") {
            CATALOG.iter().map(|s| s.to_string()).collect()
        } else {
            vec![self.group.clone()]
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreenessSummary {
    pub claimed: ClaimedStructure,
    pub max_syllables: usize,
    pub exp_bound: i64,
    pub words_checked: u64,
    pub counterexample: Option<WordSpec>,
    pub hypotheses_hold: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub group: String,
    pub a: String,
    pub b: String,
    pub a_index: usize,
    pub b_index: usize,
    pub order_a: usize,
    pub m: usize,
    pub k: usize,
    /// `b ∉ N_G(⟨a^k⟩)`
    pub in_valid_k: bool,
    pub predicted: OrderClassification,
    pub oracle: OracleVerdict,
    #[serde(rename = "match")]
    pub matched: bool,
    /// `trace(u_k^{s_k})`, recorded when the predicted order is infinite.
    pub trace_certificate: Option<String>,
    pub freeness: Option<FreenessSummary>,
    pub hydra: Option<HydraReport>,
    pub normal_generation: Option<bool>,
    pub anomalies: Vec<String>,
}

impl ClassificationRecord {
    pub fn has_counterexample(&self) -> bool {
        self.freeness
            .as_ref()
            .is_some_and(|f| f.counterexample.is_some())
    }

    pub fn hydra_failed(&self) -> bool {
        self.hydra.is_some_and(|h| !h.passed())
    }

    pub fn is_good(&self) -> bool {
        self.matched && !self.has_counterexample() && !self.hydra_failed()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseTimings {
    pub record: usize,
    pub oracle_ms: f64,
    pub freeness_ms: f64,
    pub hydra_ms: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub total: usize,
    pub mismatches: usize,
    pub counterexamples: usize,
    pub hydra_failures: usize,
    pub anomalies: usize,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub config: RunConfig,
    pub records: Vec<ClassificationRecord>,
    pub summary: ScanSummary,
    pub timings: Vec<PhaseTimings>,
}

impl ScanReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(ClassificationRecord::is_good)
    }

    /// 0 iff every record matches, has no counterexample and passes the Hydra checks.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        out.push_str(
            "| group | a | b | \\|a\\| | M | k | predicted | oracle | freeness L | result |\n",
        );
        out.push_str("|---|---|---|---|---|---|---|---|---|---|\n");
        for r in &self.records {
            let freeness = match &r.freeness {
                Some(f) => match &f.counterexample {
                    None => format!("{} ok", f.max_syllables),
                    Some(w) => format!("{} `{w}` = 1", f.max_syllables),
                },
                None => "-".into(),
            };
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} | {} | {} | {} | {} | {} |",
                r.group,
                r.a,
                r.b,
                r.order_a,
                r.m,
                r.k,
                predicted_text(r.predicted.order),
                oracle_text(r.oracle),
                freeness,
                if r.is_good() { "pass" } else { "FAIL" }
            );
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "\n{} records, {} mismatches, {} counterexamples, {} hydra failures",
            s.total, s.mismatches, s.counterexamples, s.hydra_failures
        );
        for note in &s.notes {
            let _ = writeln!(out, "\n- {note}");
        }
        out
    }

    pub fn render(&self) -> String {
        match self.config.format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Markdown => self.to_markdown(),
        }
    }
}

fn predicted_text(p: PredictedOrder) -> String {
    match p {
        PredictedOrder::Finite(d) => format!("finite {d}"),
        PredictedOrder::Infinite => "infinite".into(),
    }
}

fn oracle_text(o: OracleVerdict) -> String {
    match o {
        OracleVerdict::Finite(d) => format!("finite {d}"),
        OracleVerdict::CertifiedInfinite => "certified infinite".into(),
        OracleVerdict::ExceedsBound => "exceeds bound".into(),
    }
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn build_group(spec: &str) -> Result<GroupTable, ReportError> {
    Ok(GroupSpec::parse(spec)?.build()?)
}

fn dedekind_note(g: &GroupTable) -> String {
    let kind = if g.is_abelian() {
        "abelian"
    } else {
        "non-abelian"
    };
    format!(
        "{}: Dedekind: no non-normal cyclic subgroup ({kind})",
        g.name()
    )
}

fn scan_item(
    g: &GroupTable,
    config: &RunConfig,
    w: &Witness,
    k: usize,
) -> Result<(ClassificationRecord, PhaseTimings), ReportError> {
    let ring = GroupRing::new(g, config.ring);
    let fam = make_family(ring, w, k)?;
    let predicted = classify_order(w.order_a, k, w.m)?;
    let mut anomalies = Vec::new();

    let start = Instant::now();
    let oracle = order_oracle(&fam)?;
    let trace = match predicted.order {
        PredictedOrder::Infinite => {
            let t = trace_certificate(&fam)?;
            if !t.is_one() {
                anomalies.push(format!("trace certificate is {t}, expected 1"));
            }
            Some(t.to_string())
        }
        PredictedOrder::Finite(_) => {
            if !predicted.t_k_integral() {
                anomalies.push(format!("t_k = {} is not integral", predicted.t_k));
            }
            None
        }
    };
    let oracle_ms = elapsed_ms(start);

    let in_valid_k = w.is_valid_k(k);
    let start = Instant::now();
    let freeness = if in_valid_k {
        let rep = certify_freeness(&fam, config.max_syllables, config.exp_bound)?;
        Some(FreenessSummary {
            claimed: rep.claimed,
            max_syllables: rep.max_syllables,
            exp_bound: rep.exp_bound,
            words_checked: rep.words_checked,
            counterexample: rep.counterexample,
            hypotheses_hold: rep.hypotheses_hold,
        })
    } else {
        None
    };
    let freeness_ms = elapsed_ms(start);

    let start = Instant::now();
    let hydra = in_valid_k.then(|| certify_hydra(&fam)).transpose()?;
    let normal_generation = (in_valid_k && k == 1)
        .then(|| certify_normal_generation(&fam))
        .transpose()?;
    if normal_generation == Some(false) {
        anomalies.push("z_1 differs from w^-1 u_1 w".into());
    }
    let hydra_ms = elapsed_ms(start);

    let record = ClassificationRecord {
        group: g.name().to_string(),
        a: g.label(w.a).to_string(),
        b: g.label(w.b).to_string(),
        a_index: w.a,
        b_index: w.b,
        order_a: w.order_a,
        m: w.m,
        k,
        in_valid_k,
        matched: oracle.agrees_with(predicted.order),
        predicted,
        oracle,
        trace_certificate: trace,
        freeness,
        hydra,
        normal_generation,
        anomalies,
    };
    let timings = PhaseTimings {
        record: 0,
        oracle_ms,
        freeness_ms,
        hydra_ms,
    };
    Ok((record, timings))
}

/// Runs classification, the order oracle and the certifiers over every
/// `(witness, k)` of the configured groups.
pub fn scan(config: &RunConfig, progress: impl Fn(&str) + Sync) -> Result<ScanReport, ReportError> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| ReportError::Config(e.to_string()))?;

    let mut records = Vec::new();
    let mut timings = Vec::new();
    let mut notes = Vec::new();
    for spec in config.group_specs() {
        let g = build_group(&spec)?;
        let witnesses = find_witnesses(&g, config.dedup);
        if witnesses.is_empty() {
            notes.push(dedekind_note(&g));
            progress(&format!("{}: no witnesses", g.name()));
            continue;
        }
        let items: Vec<(&Witness, usize)> = witnesses
            .iter()
            .flat_map(|w| config.k.ks(w.order_a).into_iter().map(move |k| (w, k)))
            .collect();
        progress(&format!(
            "{}: {} witnesses, {} records",
            g.name(),
            witnesses.len(),
            items.len()
        ));
        let results: Vec<_> = pool.install(|| {
            items
                .par_iter()
                .map(|&(w, k)| {
                    let r = scan_item(&g, config, w, k);
                    if let Ok((rec, _)) = &r {
                        progress(&format!(
                            "  a={} b={} k={} {}",
                            rec.a,
                            rec.b,
                            rec.k,
                            if rec.is_good() { "ok" } else { "FAIL" }
                        ));
                    }
                    r
                })
                .collect()
        });
        for r in results {
            let (rec, mut t) = r?;
            t.record = records.len();
            records.push(rec);
            timings.push(t);
        }
    }

    let summary = ScanSummary {
        total: records.len(),
        mismatches: records.iter().filter(|r| !r.matched).count(),
        counterexamples: records.iter().filter(|r| r.has_counterexample()).count(),
        hydra_failures: records.iter().filter(|r| r.hydra_failed()).count(),
        anomalies: records.iter().filter(|r| !r.anomalies.is_empty()).count(),
        notes,
    };
    Ok(ScanReport {
        config: config.clone(),
        records,
        summary,
        timings,
    })
}

/// Human-readable account of one record and the clause behind each verdict.
pub fn explain(
    group: &str,
    a: &str,
    b: &str,
    k: usize,
    ring: CoeffRing,
) -> Result<String, ReportError> {
    let g = build_group(group)?;
    let ai = g
        .find(a)
        .map_err(|_| ReportError::UnknownSelector(a.to_string()))?;
    let bi = g
        .find(b)
        .map_err(|_| ReportError::UnknownSelector(b.to_string()))?;
    let w = witness_for(&g, ai, bi)?;
    let fam = make_family(GroupRing::new(&g, ring), &w, k)?;
    let c = classify_order(w.order_a, k, w.m)?;
    let oracle = order_oracle(&fam)?;
    let n = w.order_a;

    let mut out = String::new();
    let _ = writeln!(
        out,
        "group {}, a = {}, b = {}, k = {k}, coefficients {ring}",
        g.name(),
        g.label(ai),
        g.label(bi)
    );
    let _ = writeln!(
        out,
        "|a| = {n}, M = {}, s_k = {}, t_k = {}",
        w.m, c.s_k, c.t_k
    );
    let _ = writeln!(
        out,
        "b normalizes <a^k>: {}",
        if w.is_valid_k(k) { "no" } else { "yes" }
    );
    let clause = match c.case {
        OrderCase::CoprimeStep => format!(
            "gcd(k, |a|) = 1, so \"the orders of the elements u_k and a coincide\": order {n}"
        ),
        OrderCase::SubgroupStep => format!(
            "gcd(k, |a|) = {} != 1, gcd(k, M) = 1 and M != |a|: order |a|/(k,|a|) = {}",
            k.gcd(&n),
            c.s_k
        ),
        OrderCase::Unbounded => format!(
            "gcd(k, |a|) = {} != 1 and not (gcd(k, M) = 1 and M != |a|): \"otherwise it has infinite order\"",
            k.gcd(&n)
        ),
    };
    let _ = writeln!(out, "clause: {clause}");
    let _ = writeln!(out, "predicted: {}", predicted_text(c.order));
    let oracle_line = match oracle {
        OracleVerdict::Finite(d) => format!("u_k^{d} = 1 and no smaller positive power is 1"),
        OracleVerdict::CertifiedInfinite => format!(
            "no power up to exp(G) = {} is 1; torsion units of ZG have order dividing exp(G); trace(u_k^{}) = {}",
            g.exponent(),
            c.s_k,
            trace_certificate(&fam)?
        ),
        OracleVerdict::ExceedsBound => format!(
            "no power up to exp(G) = {} is 1; no certificate over {ring}",
            g.exponent()
        ),
    };
    let _ = writeln!(out, "oracle: {} ({oracle_line})", oracle_text(oracle));
    let _ = writeln!(
        out,
        "match: {}",
        if oracle.agrees_with(c.order) {
            "yes"
        } else {
            "no"
        }
    );
    if w.is_valid_k(k) {
        let h = certify_hydra(&fam)?;
        let _ = writeln!(
            out,
            "hydra: (u_k, w) != 1: {}, closed form: {}, ((u_k, w), w) = 1: {}",
            h.comm_nontrivial, h.comm_formula_match, h.second_comm_trivial
        );
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyReport {
    pub n_max: usize,
    pub jls_max: usize,
    pub power_identity: SweepSummary,
    pub nonvanishing: SweepSummary,
}

impl PolyReport {
    pub fn passed(&self) -> bool {
        self.power_identity.passed() && self.nonvanishing.passed()
    }
}

fn faulty_big_f(n: usize, m: usize, k: i64) -> Result<Poly, PolyError> {
    Ok(big_f(n, m, k)?.add(&Poly::x()))
}

/// Runs both polynomial sweeps. `inject_fault` swaps in a wrong `F_{m,k}`
/// so the failure path can be exercised end to end.
pub fn verify_poly(
    n_max: usize,
    jls_max: usize,
    inject_fault: bool,
) -> Result<PolyReport, ReportError> {
    if n_max < 1 || jls_max < 1 {
        return Err(ReportError::Config("bounds must be at least 1".into()));
    }
    let builder = if inject_fault { faulty_big_f } else { big_f };
    Ok(PolyReport {
        n_max,
        jls_max,
        power_identity: sweep_power_identity(n_max, builder),
        nonvanishing: sweep_nonvanishing(n_max, jls_max),
    })
}
