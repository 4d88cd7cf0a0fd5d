//! JSON and Markdown rendering of an [`AuditReport`].
//!
//! JSON keys follow the field order of the report types. Reals carry six
//! significant digits; non-finite reals are the strings `"inf"`, `"-inf"`
//! and `"nan"`. A vacuous Davis–Kahan bound is `null` next to
//! `"vacuous": true`.

use std::fmt::Write as _;

use depfid_core::kernel::MmdResult;
use depfid_core::CovarianceMode;
use serde::{Serialize, Serializer};

use crate::audit::{AuditReport, SubspaceEntry};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Markdown,
}

/// Rounds to six significant digits.
pub fn round_sig6(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.5e}").parse().unwrap_or(x)
}

/// Six significant digits in plain notation for moderate magnitudes.
pub fn fmt_sig6(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round_sig6(x);
    if r == 0.0 {
        return "0".into();
    }
    if (1e-4..1e6).contains(&r.abs()) {
        format!("{r}")
    } else {
        let s = format!("{r:.5e}");
        let (mantissa, exp) = s.split_once('e').unwrap_or((&s, "0"));
        let mantissa =
            if mantissa.contains('.') { mantissa.trim_end_matches('0').trim_end_matches('.') } else { mantissa };
        format!("{mantissa}e{exp}")
    }
}

pub fn cov_mode_name(mode: CovarianceMode) -> &'static str {
    match mode {
        CovarianceMode::Empirical => "empirical",
        CovarianceMode::LedoitWolf => "ledoit-wolf",
    }
}

#[derive(Clone, Copy)]
struct Num(f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v = self.0;
        if v.is_finite() {
            s.serialize_f64(round_sig6(v))
        } else {
            s.serialize_str(&fmt_sig6(v))
        }
    }
}

fn nums(values: &[f64]) -> Vec<Num> {
    values.iter().copied().map(Num).collect()
}

#[derive(Serialize)]
struct JsonMeta {
    n_ref: usize,
    n_syn: usize,
    d: usize,
    pca_dims: Option<usize>,
    variance_explained: Option<Num>,
    cov_mode: &'static str,
}

#[derive(Serialize)]
struct JsonVerdict {
    d_sigma: Num,
    d_sigma_normalized: Num,
    eigengap: Num,
    ratio: Num,
    regime: &'static str,
}

#[derive(Serialize)]
struct JsonKsEntry {
    statistic: Num,
    p_value: Num,
}

#[derive(Serialize)]
struct JsonKs {
    median_statistic: Num,
    per_dimension: Vec<JsonKsEntry>,
}

#[derive(Serialize)]
struct JsonSubspace {
    r: usize,
    eigengap: Num,
    sin_theta: Num,
    dk_bound: Option<Num>,
    vacuous: bool,
}

#[derive(Serialize)]
struct JsonSlopes {
    target_index: usize,
    predictor_indices: Vec<usize>,
    slopes_ref: Vec<Num>,
    slopes_syn: Vec<Num>,
    max_abs_delta: Num,
    sign_flips: usize,
    slope_bound: Option<Num>,
}

#[derive(Serialize)]
struct JsonBootstrap {
    observed: Num,
    ci_low: Num,
    ci_high: Num,
    standard_error: Num,
    n_resamples: usize,
    seed: u64,
}

#[derive(Serialize)]
struct JsonSensitivity {
    subset_size: usize,
    n_subsets: usize,
    spearman_r: Option<Num>,
    spearman_p: Option<Num>,
    ks_p: Option<Num>,
    d_sigma_values: Vec<Num>,
    one_minus_rv_values: Vec<Num>,
}

#[derive(Serialize)]
struct JsonMmd {
    mmd_squared_unbiased: Num,
    mmd: Num,
    bandwidth: Num,
    n_ref: usize,
    n_syn: usize,
}

#[derive(Serialize)]
struct JsonReport {
    dataset_meta: JsonMeta,
    verdict: JsonVerdict,
    rv: Num,
    ks: JsonKs,
    subspace: Vec<JsonSubspace>,
    slopes: JsonSlopes,
    bootstrap: Option<JsonBootstrap>,
    sensitivity: Option<JsonSensitivity>,
    mmd: Option<JsonMmd>,
    copula_mmd: Option<JsonMmd>,
    seed: u64,
    tool_version: &'static str,
}

fn json_mmd(m: &MmdResult) -> JsonMmd {
    JsonMmd {
        mmd_squared_unbiased: Num(m.mmd_squared_unbiased),
        mmd: Num(m.mmd),
        bandwidth: Num(m.bandwidth),
        n_ref: m.n_ref,
        n_syn: m.n_syn,
    }
}

fn json_subspace(e: &SubspaceEntry) -> JsonSubspace {
    JsonSubspace {
        r: e.r,
        eigengap: Num(e.eigengap),
        sin_theta: Num(e.sin_theta),
        dk_bound: (!e.dk.vacuous).then_some(Num(e.dk.value)),
        vacuous: e.dk.vacuous,
    }
}

fn json_report(r: &AuditReport) -> JsonReport {
    let meta = &r.dataset_meta;
    let s = &r.slopes;
    JsonReport {
        dataset_meta: JsonMeta {
            n_ref: meta.n_ref,
            n_syn: meta.n_syn,
            d: meta.d,
            pca_dims: meta.pca_dims,
            variance_explained: meta.variance_explained.map(Num),
            cov_mode: cov_mode_name(meta.cov_mode),
        },
        verdict: JsonVerdict {
            d_sigma: Num(r.verdict.d_sigma),
            d_sigma_normalized: Num(r.verdict.d_sigma_normalized),
            eigengap: Num(r.verdict.eigengap),
            ratio: Num(r.verdict.ratio),
            regime: r.verdict.regime.as_str(),
        },
        rv: Num(r.rv),
        ks: JsonKs {
            median_statistic: Num(r.ks.median_statistic),
            per_dimension: r
                .ks
                .per_dimension
                .iter()
                .map(|k| JsonKsEntry { statistic: Num(k.statistic), p_value: Num(k.p_value) })
                .collect(),
        },
        subspace: r.subspace.iter().map(json_subspace).collect(),
        slopes: JsonSlopes {
            target_index: s.target_index,
            predictor_indices: s.predictor_indices.clone(),
            slopes_ref: nums(&s.slopes_ref),
            slopes_syn: nums(&s.slopes_syn),
            max_abs_delta: Num(s.max_abs_delta()),
            sign_flips: s.sign_flips,
            slope_bound: s.slope_bound.map(Num),
        },
        bootstrap: r.bootstrap.as_ref().map(|b| JsonBootstrap {
            observed: Num(b.observed),
            ci_low: Num(b.ci_low),
            ci_high: Num(b.ci_high),
            standard_error: Num(b.standard_error),
            n_resamples: b.n_resamples,
            seed: b.seed,
        }),
        sensitivity: r.sensitivity.as_ref().map(|x| JsonSensitivity {
            subset_size: x.subset_size,
            n_subsets: x.n_subsets,
            spearman_r: x.spearman_r.map(Num),
            spearman_p: x.spearman_p.map(Num),
            ks_p: x.ks_p.map(Num),
            d_sigma_values: nums(&x.d_sigma_values),
            one_minus_rv_values: nums(&x.one_minus_rv_values),
        }),
        mmd: r.mmd.as_ref().map(json_mmd),
        copula_mmd: r.copula_mmd.as_ref().map(json_mmd),
        seed: r.seed,
        tool_version: r.tool_version,
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_json(report: &AuditReport) -> String {
    let mut s = serde_json::to_string_pretty(&json_report(report)).expect("report serializes");
    s.push('\n');
    s
}

fn dk_cell(e: &SubspaceEntry) -> String {
    if e.dk.vacuous {
        "---".into()
    } else {
        fmt_sig6(e.dk.value)
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_sig6).unwrap_or_else(|| "n/a".into())
}

pub fn to_markdown(report: &AuditReport) -> String {
    let r = report;
    let v = &r.verdict;
    let meta = &r.dataset_meta;
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, "# Dependence fidelity audit\n");
    let _ = writeln!(w, "| Median KS | D_Σ | D̃_Σ | δ | D_Σ/δ | Regime | RV | sinΘ (r=1) | Max abs Δβ | Sign flips |");
    let _ = writeln!(w, "|---:|---:|---:|---:|---:|:---|---:|---:|---:|---:|");
    let _ = writeln!(
        w,
        "| {} | {} | {} | {} | {} | {} | {} | {} | {} | {} |\n",
        fmt_sig6(r.ks.median_statistic),
        fmt_sig6(v.d_sigma),
        fmt_sig6(v.d_sigma_normalized),
        fmt_sig6(v.eigengap),
        fmt_sig6(v.ratio),
        v.regime.as_str(),
        fmt_sig6(r.rv),
        opt(r.subspace_entry(1).map(|e| e.sin_theta)),
        fmt_sig6(r.slopes.max_abs_delta()),
        r.slopes.sign_flips,
    );
    let _ = write!(w, "n_ref = {}, n_syn = {}, d = {}", meta.n_ref, meta.n_syn, meta.d);
    if let (Some(p), Some(ve)) = (meta.pca_dims, meta.variance_explained) {
        let _ = write!(w, " (top {p} principal components, {} of reference variance)", fmt_sig6(ve));
    }
    let _ =
        writeln!(w, ", covariance: {}, seed: {}, version: {}\n", cov_mode_name(meta.cov_mode), r.seed, r.tool_version);

    let _ = writeln!(w, "## Subspace stability\n");
    let _ = writeln!(w, "| r | Eigengap | sinΘ | Davis–Kahan bound |");
    let _ = writeln!(w, "|---:|---:|---:|---:|");
    for e in &r.subspace {
        let _ = writeln!(w, "| {} | {} | {} | {} |", e.r, fmt_sig6(e.eigengap), fmt_sig6(e.sin_theta), dk_cell(e));
    }

    let s = &r.slopes;
    let _ = writeln!(w, "\n## Slopes of column {}\n", s.target_index);
    let _ = writeln!(w, "| Predictor | β ref | β syn | abs Δβ |");
    let _ = writeln!(w, "|---:|---:|---:|---:|");
    for (k, j) in s.predictor_indices.iter().enumerate() {
        let (a, b) = (s.slopes_ref[k], s.slopes_syn[k]);
        let _ = writeln!(w, "| {j} | {} | {} | {} |", fmt_sig6(a), fmt_sig6(b), fmt_sig6((a - b).abs()));
    }
    let _ = writeln!(w, "\nSlope bound D_Σ/(√2·min Var): {}", opt(s.slope_bound));

    if let Some(b) = &r.bootstrap {
        let _ = writeln!(
            w,
            "\n## Bootstrap\n\nD_Σ = {}, 95% interval [{}, {}], standard error {} ({} resamples)",
            fmt_sig6(b.observed),
            fmt_sig6(b.ci_low),
            fmt_sig6(b.ci_high),
            fmt_sig6(b.standard_error),
            b.n_resamples
        );
    }
    if let Some(x) = &r.sensitivity {
        let _ = writeln!(
            w,
            "\n## Subset sensitivity\n\n{} subsets of {} columns: Spearman r = {} (p = {}), KS p = {}",
            x.n_subsets,
            x.subset_size,
            opt(x.spearman_r),
            opt(x.spearman_p),
            opt(x.ks_p)
        );
    }
    for (title, m) in [("MMD", &r.mmd), ("Copula MMD", &r.copula_mmd)] {
        if let Some(m) = m {
            let _ = writeln!(
                w,
                "\n## {title}\n\nMMD² = {}, MMD = {}, bandwidth {}",
                fmt_sig6(m.mmd_squared_unbiased),
                fmt_sig6(m.mmd),
                fmt_sig6(m.bandwidth)
            );
        }
    }
    out
}

pub fn emit_report(report: &AuditReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => to_json(report),
        ReportFormat::Markdown => to_markdown(report),
    }
}
