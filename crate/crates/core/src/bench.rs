//! Benchmark scenarios and their file formats.
//!
//! Configuration files are flat `key = value` text. Blank lines and anything
//! after `#` are ignored; list values are comma separated. Keys:
//!
//! | key | meaning | default |
//! |---|---|---|
//! | `n_samples` | samples per synthetic record | 1024 |
//! | `total_length` | record length, s | 1.024 |
//! | `ricker_f0` | Ricker peak frequency, Hz | 30 |
//! | `rotation_deg` | constant phase rotation | 90 |
//! | `shift_s` | time shift | 0.09 |
//! | `shifts_s` | shifts written by `synth` | `shift_s` |
//! | `snr_db` | noise level, `inf` for none | inf |
//! | `seed` | master seed | 7 |
//! | `methods` | e.g. `PU-M,PU-K` | all four |
//! | `reps` | timed repetitions (min 3) | 5 |
//! | `out` | output directory | `out` |
//! | `sizes` | record lengths for `table1` / `sweep` | 256,512,1024 |
//! | `snr_list` | noise levels for `sweep` | inf,40,20,10 |
//! | `n_traces` | gather size for `estimate` | 50 |
//! | `reflectivity_len` | reflectivity samples per trace | 256 |
//! | `spike_density` | reflectivity spike probability | 0.1 |
//! | `support_s` | half-length of the estimated wavelet | 3 / `ricker_f0` |
//! | `trace` | input trace for `unwrap` | none |
//!
//! Every CSV file starts with the resolved configuration as `# key=value`
//! lines followed by a header row; JSON files carry it under `"config"`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectral::{self, wrap_phase};
use crate::synthkit::{SynthConfig, Trace};
use crate::unwrap::{self, Method, UnwrapConfig, UnwrapInput};
use crate::waveletest::{self, GatherConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub synth: SynthConfig,
    pub shifts_s: Vec<f64>,
    pub methods: Vec<Method>,
    pub reps: usize,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub sizes: Vec<usize>,
    pub snr_list: Vec<f64>,
    pub n_traces: usize,
    pub reflectivity_len: usize,
    pub spike_density: f64,
    pub support_s: Option<f64>,
    pub trace: Option<PathBuf>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            synth: SynthConfig::default(),
            shifts_s: Vec::new(),
            methods: Method::ALL.to_vec(),
            reps: 5,
            out_dir: PathBuf::from("out"),
            seed: 7,
            sizes: vec![256, 512, 1024],
            snr_list: vec![f64::INFINITY, 40.0, 20.0, 10.0],
            n_traces: 50,
            reflectivity_len: 256,
            spike_density: 0.1,
            support_s: None,
            trace: None,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::InvalidConfig(format!("{key}: cannot parse {v:?}")))
}

fn parse_snr(key: &str, v: &str) -> Result<f64> {
    match v.to_ascii_lowercase().as_str() {
        "inf" | "none" => Ok(f64::INFINITY),
        _ => parse_num(key, v),
    }
}

fn parse_list<T>(key: &str, v: &str, f: impl Fn(&str, &str) -> Result<T>) -> Result<Vec<T>> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| f(key, s))
        .collect()
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

impl BenchConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key {
            "n_samples" => self.synth.n_samples = parse_num(key, v)?,
            "total_length" => self.synth.total_length = parse_num(key, v)?,
            "ricker_f0" => self.synth.ricker_f0 = parse_num(key, v)?,
            "rotation_deg" => self.synth.rotation_deg = parse_num(key, v)?,
            "shift_s" => self.synth.shift_s = parse_num(key, v)?,
            "shifts_s" => self.shifts_s = parse_list(key, v, parse_num)?,
            "snr_db" => {
                let s = parse_snr(key, v)?;
                self.synth.snr_db = s.is_finite().then_some(s);
            }
            "seed" => self.seed = parse_num(key, v)?,
            "methods" => self.methods = Method::parse_list(v)?,
            "reps" => self.reps = parse_num(key, v)?,
            "out" => self.out_dir = PathBuf::from(v),
            "sizes" => self.sizes = parse_list(key, v, parse_num)?,
            "snr_list" => self.snr_list = parse_list(key, v, parse_snr)?,
            "n_traces" => self.n_traces = parse_num(key, v)?,
            "reflectivity_len" => self.reflectivity_len = parse_num(key, v)?,
            "spike_density" => self.spike_density = parse_num(key, v)?,
            "support_s" => self.support_s = Some(parse_num(key, v)?),
            "trace" => self.trace = Some(PathBuf::from(v)),
            _ => return Err(Error::InvalidConfig(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Parses the flat `key = value` format on top of `self`.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidConfig(format!("line {}: expected key = value", i + 1)))?;
            self.set(k.trim(), v)
                .map_err(|e| Error::InvalidConfig(format!("line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
        let mut c = Self::default();
        c.apply_text(&text)?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        self.synth_for(self.synth.n_samples, self.synth.snr_db).validate()?;
        if self.methods.is_empty() {
            return Err(Error::InvalidConfig("methods must not be empty".into()));
        }
        if self.reps < 3 {
            return Err(Error::InvalidConfig(format!("reps must be at least 3, got {}", self.reps)));
        }
        if self.sizes.is_empty() || self.snr_list.is_empty() {
            return Err(Error::InvalidConfig("sizes and snr_list must not be empty".into()));
        }
        for &n in &self.sizes {
            self.synth_for(n, None).validate()?;
        }
        if self.snr_list.iter().any(|s| s.is_nan()) {
            return Err(Error::InvalidConfig("snr_list contains NaN".into()));
        }
        Ok(())
    }

    /// The synthetic record at `n` samples with the configured seed.
    pub fn synth_for(&self, n: usize, snr_db: Option<f64>) -> SynthConfig {
        SynthConfig {
            n_samples: n,
            rng_seed: self.seed,
            snr_db,
            ..self.synth.clone()
        }
    }

    pub fn shifts(&self) -> Vec<f64> {
        if self.shifts_s.is_empty() {
            vec![self.synth.shift_s]
        } else {
            self.shifts_s.clone()
        }
    }

    pub fn gather(&self) -> GatherConfig {
        GatherConfig {
            n_traces: self.n_traces,
            n_samples: self.synth.n_samples,
            dt: self.synth.dt(),
            ricker_f0: self.synth.ricker_f0,
            reflectivity_len: self.reflectivity_len,
            spike_density: self.spike_density,
            snr_db: self.synth.snr_db,
            seed: self.seed,
        }
    }

    pub fn support(&self) -> f64 {
        self.support_s.unwrap_or(3.0 / self.synth.ricker_f0)
    }

    /// Resolved settings in key order, as written into every output file.
    pub fn pairs(&self) -> BTreeMap<String, String> {
        let s = &self.synth;
        let snr = s.snr_db.unwrap_or(f64::INFINITY);
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            m.insert(k.to_string(), v);
        };
        put("n_samples", s.n_samples.to_string());
        put("total_length", s.total_length.to_string());
        put("ricker_f0", s.ricker_f0.to_string());
        put("rotation_deg", s.rotation_deg.to_string());
        put("shift_s", s.shift_s.to_string());
        put("shifts_s", join(&self.shifts()));
        put("snr_db", snr.to_string());
        put("seed", self.seed.to_string());
        put("methods", join(&self.methods));
        put("reps", self.reps.to_string());
        put("out", self.out_dir.display().to_string());
        put("sizes", join(&self.sizes));
        put("snr_list", join(&self.snr_list));
        put("n_traces", self.n_traces.to_string());
        put("reflectivity_len", self.reflectivity_len.to_string());
        put("spike_density", self.spike_density.to_string());
        put("support_s", self.support().to_string());
        if let Some(t) = &self.trace {
            put("trace", t.display().to_string());
        }
        m
    }
}

/// Process exit status for an error: 1 for configuration problems, 2 for
/// everything that went wrong while running.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidConfig(_) | Error::Parse(_) => 1,
        _ => 2,
    }
}

fn csv_text(cfg: &BenchConfig, header: &[String], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    for (k, v) in cfg.pairs() {
        let _ = writeln!(out, "# {k}={v}");
    }
    let _ = writeln!(out, "{}", header.join(","));
    for r in rows {
        let _ = writeln!(out, "{}", r.join(","));
    }
    out
}

fn write_csv(cfg: &BenchConfig, name: &str, header: &[String], rows: &[Vec<String>]) -> Result<PathBuf> {
    fs::create_dir_all(&cfg.out_dir)?;
    let path = cfg.out_dir.join(name);
    fs::write(&path, csv_text(cfg, header, rows))?;
    Ok(path)
}

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    config: BTreeMap<String, String>,
    #[serde(flatten)]
    body: &'a T,
}

fn write_json<T: Serialize>(cfg: &BenchConfig, name: &str, body: &T) -> Result<PathBuf> {
    fs::create_dir_all(&cfg.out_dir)?;
    let path = cfg.out_dir.join(name);
    let r = Report {
        config: cfg.pairs(),
        body,
    };
    let mut text = serde_json::to_string_pretty(&r).map_err(|e| Error::Io(e.to_string()))?;
    text.push('\n');
    fs::write(&path, text)?;
    Ok(path)
}

fn headers(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn trace_rows(x: &Trace) -> Vec<Vec<String>> {
    x.samples()
        .iter()
        .enumerate()
        .map(|(i, v)| vec![x.time(i).to_string(), v.to_string()])
        .collect()
}

/// Writes a two-column `time_s,amplitude` trace file.
pub fn write_trace(cfg: &BenchConfig, name: &str, x: &Trace) -> Result<PathBuf> {
    write_csv(cfg, name, &headers(&["time_s", "amplitude"]), &trace_rows(x))
}

/// Reads a `time_s,amplitude` CSV; `#` lines and the header are skipped.
pub fn read_trace(path: &Path) -> Result<Trace> {
    let text = fs::read_to_string(path)?;
    let mut t = Vec::new();
    let mut a = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("time_s") {
            continue;
        }
        let mut cols = line.split(',').map(str::trim);
        let (Some(ts), Some(av)) = (cols.next(), cols.next()) else {
            return Err(Error::Parse(format!("{}:{}: expected two columns", path.display(), i + 1)));
        };
        let bad = |v: &str| Error::Parse(format!("{}:{}: bad number {v:?}", path.display(), i + 1));
        t.push(ts.parse::<f64>().map_err(|_| bad(ts))?);
        a.push(av.parse::<f64>().map_err(|_| bad(av))?);
    }
    if t.len() < 2 {
        return Err(Error::Parse(format!("{}: need at least two samples", path.display())));
    }
    let dt = (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64;
    Trace::new(a, dt, t[0])
}

fn ms_label(tau: f64) -> String {
    format!("{}ms", (tau * 1e3).round() as i64)
}

/// Synthesizes the configured record for each shift and writes
/// `trace_<ms>.csv` plus `phase_<ms>.csv` (wrapped and ideal unwrapped phase).
pub fn cmd_synth(cfg: &BenchConfig) -> Result<Vec<PathBuf>> {
    cfg.validate()?;
    let mut written = Vec::new();
    for tau in cfg.shifts() {
        let sc = SynthConfig {
            shift_s: tau,
            ..cfg.synth_for(cfg.synth.n_samples, cfg.synth.snr_db)
        };
        sc.validate()?;
        let x = sc.synthesize()?;
        let label = ms_label(tau);
        written.push(write_trace(cfg, &format!("trace_{label}.csv"), &x)?);

        let s = spectral::dft(&x);
        let wrapped = spectral::wrapped_phase(&s);
        let rot = sc.rotation_deg.to_radians();
        let rows = (0..s.bins.len())
            .map(|k| {
                let f = s.frequency(k);
                let ideal = -rot - std::f64::consts::TAU * f * (tau - s.t_start);
                vec![
                    f.to_string(),
                    wrapped.values[k].to_string(),
                    ideal.to_string(),
                    u8::from(wrapped.valid[k]).to_string(),
                ]
            })
            .collect::<Vec<_>>();
        let header = headers(&["frequency_hz", "wrapped_rad", "unwrapped_ideal_rad", "mask"]);
        written.push(write_csv(cfg, &format!("phase_{label}.csv"), &header, &rows)?);
    }
    Ok(written)
}

#[derive(Debug, Clone, Serialize)]
pub struct MethodFit {
    pub method: Method,
    pub phi0_deg: f64,
    pub tau_ms: f64,
    pub band_hz: [f64; 2],
    pub residual_rms: f64,
    pub flagged_bins: usize,
}

#[derive(Serialize)]
struct UnwrapBody {
    n_samples: usize,
    dt: f64,
    fits: Vec<MethodFit>,
}

/// Unwraps the trace file with every requested method and writes
/// `unwrap.csv` (curves) and `unwrap.json` (fits). Any method failure is an
/// error.
pub fn cmd_unwrap(cfg: &BenchConfig) -> Result<Vec<PathBuf>> {
    if cfg.methods.is_empty() {
        return Err(Error::InvalidConfig("methods must not be empty".into()));
    }
    let path = cfg
        .trace
        .as_ref()
        .ok_or_else(|| Error::InvalidConfig("unwrap needs a trace file".into()))?;
    let x = read_trace(path)?;
    let input = UnwrapInput::new(x);
    let ucfg = UnwrapConfig::default();
    let wrapped = input.wrapped();
    let mut curves = Vec::new();
    let mut fits = Vec::new();
    for &m in &cfg.methods {
        let r = unwrap::run_method(&input, m, &ucfg).map_err(|e| match e {
            Error::InvalidConfig(msg) => Error::InvalidTrace(format!("{m}: {msg}")),
            other => other,
        })?;
        fits.push(MethodFit {
            method: m,
            phi0_deg: r.fit.phi0_deg,
            tau_ms: r.fit.tau_s * 1e3,
            band_hz: r.fit.band,
            residual_rms: r.fit.residual_rms,
            flagged_bins: r.curve.flagged.len(),
        });
        curves.push(r.curve);
    }
    let s = &input.spectrum;
    let mut header = headers(&["frequency_hz", "wrapped_rad"]);
    header.extend(cfg.methods.iter().map(|m| format!("unwrapped_{}_rad", m.slug())));
    header.push("mask".into());
    let rows = (0..s.bins.len())
        .map(|k| {
            let mut row = vec![s.frequency(k).to_string(), wrapped.values[k].to_string()];
            row.extend(curves.iter().map(|c| c.values[k].to_string()));
            row.push(u8::from(wrapped.valid[k]).to_string());
            row
        })
        .collect::<Vec<_>>();
    let body = UnwrapBody {
        n_samples: s.n_time,
        dt: s.dt,
        fits,
    };
    Ok(vec![
        write_csv(cfg, "unwrap.csv", &header, &rows)?,
        write_json(cfg, "unwrap.json", &body)?,
    ])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodResult {
    pub method: Method,
    pub phi0_deg: Option<f64>,
    pub tau_ms: Option<f64>,
    pub error: Option<String>,
}

/// One record length of the accuracy table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub n_samples: usize,
    pub ground_truth_deg: f64,
    pub seed: u64,
    pub methods: Vec<MethodResult>,
}

impl ResultRow {
    pub fn get(&self, m: Method) -> Option<&MethodResult> {
        self.methods.iter().find(|r| r.method == m)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimingRow {
    pub n_samples: usize,
    pub method: Method,
    pub wall_time_s: Option<f64>,
    pub reps: usize,
    pub error: Option<String>,
}

fn evaluate(input: &UnwrapInput, methods: &[Method]) -> Vec<MethodResult> {
    let ucfg = UnwrapConfig::default();
    methods
        .iter()
        .map(|&m| match unwrap::unwrap(input, m, &ucfg).and_then(|c| unwrap::fit_linear_phase(&c, &input.spectrum)) {
            Ok(fit) => MethodResult {
                method: m,
                phi0_deg: Some(fit.phi0_deg),
                tau_ms: Some(fit.tau_s * 1e3),
                error: None,
            },
            Err(e) => MethodResult {
                method: m,
                phi0_deg: None,
                tau_ms: None,
                error: Some(e.to_string()),
            },
        })
        .collect()
}

/// Accuracy rows for every configured record length. Method failures are
/// recorded in the row.
pub fn table1_rows(cfg: &BenchConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    cfg.sizes
        .iter()
        .map(|&n| {
            let x = cfg.synth_for(n, cfg.synth.snr_db).synthesize()?;
            Ok(ResultRow {
                n_samples: n,
                ground_truth_deg: cfg.synth.rotation_deg,
                seed: cfg.seed,
                methods: evaluate(&UnwrapInput::new(x), &cfg.methods),
            })
        })
        .collect()
}

/// Median wall time of every method at the largest configured record
/// length, measured one method at a time on the calling thread.
pub fn table1_timing(cfg: &BenchConfig) -> Result<Vec<TimingRow>> {
    cfg.validate()?;
    let n = *cfg.sizes.iter().max().expect("validated");
    let input = UnwrapInput::new(cfg.synth_for(n, cfg.synth.snr_db).synthesize()?);
    let ucfg = UnwrapConfig::default();
    Ok(cfg
        .methods
        .iter()
        .map(|&m| {
            let t = unwrap::time_method(&input, m, &ucfg, cfg.reps);
            TimingRow {
                n_samples: n,
                method: m,
                wall_time_s: t.as_ref().ok().copied(),
                reps: cfg.reps,
                error: t.err().map(|e| e.to_string()),
            }
        })
        .collect())
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

#[derive(Serialize)]
struct RowsBody<'a, T> {
    rows: &'a [T],
}

/// Writes `table1.csv` / `table1.json` (accuracy, deterministic) and
/// `table1_timing.csv` / `table1_timing.json` (wall times).
pub fn cmd_table1(cfg: &BenchConfig) -> Result<Vec<PathBuf>> {
    let rows = table1_rows(cfg)?;
    let mut header = headers(&["n_samples", "ground_truth_deg", "seed"]);
    for m in &cfg.methods {
        header.push(format!("phi0_deg_{}", m.slug()));
        header.push(format!("tau_ms_{}", m.slug()));
    }
    let csv_rows = rows
        .iter()
        .map(|r| {
            let mut v = vec![r.n_samples.to_string(), r.ground_truth_deg.to_string(), r.seed.to_string()];
            for m in &r.methods {
                v.push(opt(m.phi0_deg));
                v.push(opt(m.tau_ms));
            }
            v
        })
        .collect::<Vec<_>>();
    let mut out = vec![
        write_csv(cfg, "table1.csv", &header, &csv_rows)?,
        write_json(cfg, "table1.json", &RowsBody { rows: &rows })?,
    ];

    let timing = table1_timing(cfg)?;
    let t_rows = timing
        .iter()
        .map(|t| vec![t.n_samples.to_string(), t.method.to_string(), opt(t.wall_time_s), t.reps.to_string()])
        .collect::<Vec<_>>();
    let t_header = headers(&["n_samples", "method", "wall_time_s", "reps"]);
    out.push(write_csv(cfg, "table1_timing.csv", &t_header, &t_rows)?);
    out.push(write_json(cfg, "table1_timing.json", &RowsBody { rows: &timing })?);
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimateResult {
    pub method: Method,
    pub correlation: f64,
    pub n_traces_used: usize,
    pub failed_traces: Vec<waveletest::TraceFailure>,
}

#[derive(Serialize)]
struct EstimateBody<'a> {
    provenance: &'a str,
    support_s: f64,
    results: &'a [EstimateResult],
}

/// Builds the synthetic gather, estimates the wavelet with each method and
/// writes `wavelet_true.csv`, `wavelet_<method>.csv` and `estimate.json`.
pub fn estimate(cfg: &BenchConfig) -> Result<(Vec<EstimateResult>, Vec<Trace>, Trace, String)> {
    cfg.validate()?;
    let gc = cfg.gather();
    let (g, truth) = gc.build()?;
    let ucfg = UnwrapConfig::default();
    let mut results = Vec::new();
    let mut wavelets = Vec::new();
    for &m in &cfg.methods {
        let est = waveletest::estimate_wavelet(&g, m, cfg.support(), &ucfg)?;
        results.push(EstimateResult {
            method: m,
            correlation: waveletest::max_normalized_xcorr(est.wavelet.samples(), truth.samples()),
            n_traces_used: est.n_traces_used,
            failed_traces: est.failures,
        });
        wavelets.push(est.wavelet);
    }
    Ok((results, wavelets, truth, g.provenance))
}

pub fn cmd_estimate(cfg: &BenchConfig) -> Result<Vec<PathBuf>> {
    let (results, wavelets, truth, provenance) = estimate(cfg)?;
    let mut out = vec![write_trace(cfg, "wavelet_true.csv", &truth)?];
    for (r, w) in results.iter().zip(&wavelets) {
        out.push(write_trace(cfg, &format!("wavelet_{}.csv", r.method.slug()), w)?);
    }
    let body = EstimateBody {
        provenance: &provenance,
        support_s: cfg.support(),
        results: &results,
    };
    out.push(write_json(cfg, "estimate.json", &body)?);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n_samples: usize,
    pub snr_db: f64,
    pub phi0_error_deg: Vec<Option<f64>>,
    pub tau_error_ms: Vec<Option<f64>>,
}

/// Accuracy over the `sizes x snr_list` grid.
pub fn sweep_rows(cfg: &BenchConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for &n in &cfg.sizes {
        for &snr in &cfg.snr_list {
            let sc = cfg.synth_for(n, snr.is_finite().then_some(snr));
            let results = evaluate(&UnwrapInput::new(sc.synthesize()?), &cfg.methods);
            rows.push(SweepRow {
                n_samples: n,
                snr_db: snr,
                phi0_error_deg: results
                    .iter()
                    .map(|r| r.phi0_deg.map(|p| wrap_phase((p - sc.rotation_deg).to_radians()).to_degrees()))
                    .collect(),
                tau_error_ms: results.iter().map(|r| r.tau_ms.map(|t| t - sc.shift_s * 1e3)).collect(),
            });
        }
    }
    Ok(rows)
}

pub fn cmd_sweep(cfg: &BenchConfig) -> Result<Vec<PathBuf>> {
    let rows = sweep_rows(cfg)?;
    let mut header = headers(&["n_samples", "snr_db"]);
    for m in &cfg.methods {
        header.push(format!("phi0_error_deg_{}", m.slug()));
        header.push(format!("tau_error_ms_{}", m.slug()));
    }
    let csv_rows = rows
        .iter()
        .map(|r| {
            let mut v = vec![r.n_samples.to_string(), r.snr_db.to_string()];
            for (p, t) in r.phi0_error_deg.iter().zip(&r.tau_error_ms) {
                v.push(opt(*p));
                v.push(opt(*t));
            }
            v
        })
        .collect::<Vec<_>>();
    Ok(vec![
        write_csv(cfg, "sweep.csv", &header, &csv_rows)?,
        write_json(cfg, "sweep.json", &RowsBody { rows: &rows })?,
    ])
}
