//! Implementations of the subcommands.

use super::io::{emit, field, fmt_f64, parse_json, read_json, CsvInput, CsvTable, RunConfig};
use crate::correlation::{
    inplane_tensor, rank1_corr, rank2_corr, scalar_corr, vector_corr, KernelBasis, RadialKernelSet, SpectralMeasure,
    VectorSpectralPair,
};
use crate::coupling::{gaunt_check, GGTable};
use crate::error::{Error, Result};
use crate::simulate::{estimate_correlation, simulate, FieldRealization, RealizationMetadata, SimulationPlan};
use crate::special_fn::{spin_harmonic, HarmonicIndex, SphericalPoint};
use crate::sphere::{
    estimate_cell, gl_grid, grid_from_points, AlmSampler, AngularPowerSpectrum, Component, HarmonicTables,
    SpectrumSpec, SphereAnalysis, StokesMap,
};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::path::Path;

fn point(theta: f64, phi: f64) -> Result<SphericalPoint> {
    if !(theta.is_finite() && phi.is_finite() && (0.0..=PI).contains(&theta)) {
        return Err(Error::invalid(format!("theta must lie in [0, pi] and phi be finite, got ({theta}, {phi})")));
    }
    Ok(SphericalPoint::new(theta, phi))
}

fn check_index(spin: i64, ell: usize, m: i64) -> Result<()> {
    if !HarmonicIndex::new(ell, m, spin).is_admissible() {
        return Err(Error::invalid(format!("need |m| <= ell and |spin| <= ell, got spin {spin}, ell {ell}, m {m}")));
    }
    Ok(())
}

const HARMONIC_HEADER: [&str; 7] = ["ell", "m", "spin", "theta", "phi", "re", "im"];

pub fn harmonics_eval(spin: i64, ell: usize, m: i64, theta: f64, phi: f64) -> Result<()> {
    check_index(spin, ell, m)?;
    let p = point(theta, phi)?;
    let v = spin_harmonic(spin, ell, m, p);
    let config = RunConfig::new(
        "harmonics-eval",
        None,
        serde_json::json!({"spin": spin, "ell": ell, "m": m, "theta": theta, "phi": phi}),
    )?;
    let mut t = CsvTable::new(&config, &HARMONIC_HEADER)?;
    t.row([
        ell.to_string(),
        m.to_string(),
        spin.to_string(),
        fmt_f64(p.theta),
        fmt_f64(p.phi),
        fmt_f64(v.re),
        fmt_f64(v.im),
    ])?;
    t.write_to(Path::new("-"))
}

/// Spin-weighted harmonics on a Gauss–Legendre grid with `grid` rings; indices with
/// `ℓ < |s|` are skipped.
pub fn harmonics_table(ell_max: usize, grid: usize, spins: &[i64], out: &Path) -> Result<()> {
    let rule = gl_grid(grid)?;
    let config =
        RunConfig::new("harmonics-table", None, serde_json::json!({"ell_max": ell_max, "grid": grid, "spins": spins}))?;
    let mut t = CsvTable::new(&config, &HARMONIC_HEADER)?;
    for &s in spins {
        for ell in s.unsigned_abs() as usize..=ell_max {
            for m in -(ell as i64)..=ell as i64 {
                for p in &rule.nodes {
                    let v = spin_harmonic(s, ell, m, *p);
                    t.row([
                        ell.to_string(),
                        m.to_string(),
                        s.to_string(),
                        fmt_f64(p.theta),
                        fmt_f64(p.phi),
                        fmt_f64(v.re),
                        fmt_f64(v.im),
                    ])?;
                }
            }
        }
    }
    t.write_to(out)
}

/// Non-zero real-basis coupling coefficients of every triple with all degrees `≤ ell_max`.
pub fn gg_table(ell_max: usize, out: &Path) -> Result<()> {
    let table = GGTable::new(ell_max)?;
    let config = RunConfig::new("gg-table", None, serde_json::json!({"ell_max": ell_max}))?;
    let mut t = CsvTable::new(&config, &["ell", "ell1", "ell2", "m", "m1", "m2", "value"])?;
    for (l, l1, l2) in table.triples() {
        let block = table.block(l, l1, l2).expect("listed triple");
        let i = |x: usize| x as i64;
        for m in -i(l)..=i(l) {
            for m1 in -i(l1)..=i(l1) {
                for m2 in -i(l2)..=i(l2) {
                    let v = block.get(m, m1, m2);
                    if v != 0.0 {
                        t.row(
                            [l, l1, l2]
                                .map(|x| x.to_string())
                                .into_iter()
                                .chain([m, m1, m2].map(|x| x.to_string()))
                                .chain([fmt_f64(v)]),
                        )?;
                    }
                }
            }
        }
    }
    t.write_to(out)
}

#[derive(Debug, Serialize)]
struct GauntCheckReport {
    ell_max: usize,
    entries: usize,
    max_abs_error: f64,
    tolerance: f64,
    worst: (usize, i64, usize, i64, usize, i64),
    elapsed_s: f64,
    passed: bool,
}

/// Runs the Gaunt suite and prints a JSON report; exit code 2 when the tolerance is missed.
pub fn gg_check(ell_max: usize, tolerance: f64) -> Result<i32> {
    let r = gaunt_check(ell_max)?;
    let passed = r.max_abs_error < tolerance;
    let report = GauntCheckReport {
        ell_max,
        entries: r.entries,
        max_abs_error: r.max_abs_error,
        tolerance,
        worst: r.worst,
        elapsed_s: r.elapsed_s,
        passed,
    };
    println!("{}", serde_json::to_string_pretty(&report)?);
    if !passed {
        eprintln!("error: Gaunt check failed: max abs error {:e} >= {tolerance:e}", r.max_abs_error);
    }
    Ok(if passed { 0 } else { 2 })
}

/// Correlation model files accepted by `corr eval`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(remote = "Self", rename_all = "snake_case", deny_unknown_fields)]
pub enum CorrModel {
    /// Scalar field in `ℝ^dimension` with an atomic spectral measure.
    Scalar {
        spectrum: SpectralMeasure,
        #[serde(default = "default_dimension")]
        dimension: usize,
    },
    /// Vector field on `ℝ³` from a pair of spectral measures.
    Vector { pair: VectorSpectralPair },
    /// Rank-one tensor kernel in the `l_rank1` basis.
    Rank1 { kernels: RadialKernelSet },
    /// Rank-two tensor kernel; the `h_inplane` basis is evaluated in the plane `z = 0`.
    Rank2 { kernels: RadialKernelSet },
}
crate::tagged::kind_tagged!(CorrModel);

fn default_dimension() -> usize {
    3
}

/// Replaces every `{"kind": "table_file", "path": ...}` by the inline table read from a CSV
/// with columns `r` and `value`; relative paths are resolved against `base`.
pub fn resolve_table_files(value: &mut serde_json::Value, base: &Path) -> Result<()> {
    match value {
        serde_json::Value::Object(map) => {
            if map.get("kind").and_then(|k| k.as_str()) == Some("table_file") {
                if let Some(k) = map.keys().find(|k| *k != "kind" && *k != "path") {
                    return Err(Error::invalid(format!("table_file: unknown field `{k}`")));
                }
                let rel = map
                    .get("path")
                    .and_then(|p| p.as_str())
                    .ok_or_else(|| Error::invalid("table_file: missing string field `path`"))?;
                let path = base.join(rel);
                let input = CsvInput::read(&path)?;
                let (cr, cv) = (input.column("r")?, input.column("value")?);
                let mut r = Vec::with_capacity(input.rows.len());
                let mut v = Vec::with_capacity(input.rows.len());
                for (k, row) in input.rows.iter().enumerate() {
                    r.push(field::<f64>(row, cr, k, "r")?);
                    v.push(field::<f64>(row, cv, k, "value")?);
                }
                *value = serde_json::json!({"kind": "table", "r": r, "value": v});
                return Ok(());
            }
            for v in map.values_mut() {
                resolve_table_files(v, base)?;
            }
        }
        serde_json::Value::Array(items) => {
            for v in items {
                resolve_table_files(v, base)?;
            }
        }
        _ => {}
    }
    Ok(())
}

pub fn parse_separation(text: &str) -> Result<[f64; 3]> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::invalid(format!("separation must be \"x,y,z\", got {text:?}")));
    }
    let mut out = [0.0f64; 3];
    for (o, p) in out.iter_mut().zip(&parts) {
        *o = p.parse().map_err(|_| Error::invalid(format!("cannot parse separation component {p:?}")))?;
        if !o.is_finite() {
            return Err(Error::invalid("separation must be finite"));
        }
    }
    Ok(out)
}

/// Tensor components of a correlation model at one separation, as `(1-based indices, value)`.
pub fn corr_components(model: &CorrModel, sep: [f64; 3]) -> Result<Vec<(Vec<usize>, f64)>> {
    let norm = (sep[0] * sep[0] + sep[1] * sep[1] + sep[2] * sep[2]).sqrt();
    let mat = |m: [[f64; 3]; 3]| (0..9).map(|k| (vec![k / 3 + 1, k % 3 + 1], m[k / 3][k % 3])).collect();
    Ok(match model {
        CorrModel::Scalar { spectrum, dimension } => vec![(vec![], scalar_corr(norm, spectrum, *dimension)?)],
        CorrModel::Vector { pair } => mat(vector_corr(sep, pair)?),
        CorrModel::Rank1 { kernels } => mat(rank1_corr(sep, kernels)?),
        CorrModel::Rank2 { kernels } if kernels.basis() == KernelBasis::HInplane => {
            if sep[2] != 0.0 {
                return Err(Error::invalid("the h_inplane basis needs a separation with z = 0"));
            }
            let h = kernels.values(sep[0].hypot(sep[1]));
            let t = inplane_tensor([sep[0], sep[1]], [h[0], h[1], h[2], h[3]]);
            let mut out = Vec::with_capacity(16);
            for k in 0..16 {
                let (i, j, a, b) = (k / 8, (k / 4) % 2, (k / 2) % 2, k % 2);
                out.push((vec![i + 1, j + 1, a + 1, b + 1], t[i][j][a][b]));
            }
            out
        }
        CorrModel::Rank2 { kernels } => {
            let t = rank2_corr(sep, kernels)?;
            let mut out = Vec::with_capacity(81);
            for k in 0..81 {
                let (i, j, a, b) = (k / 27, (k / 9) % 3, (k / 3) % 3, k % 3);
                out.push((vec![i + 1, j + 1, a + 1, b + 1], t[i][j][a][b]));
            }
            out
        }
    })
}

pub fn corr_eval(model_path: &Path, sep: &str, out: &Path) -> Result<()> {
    let text =
        std::fs::read_to_string(model_path).map_err(|e| Error::invalid(format!("{}: {e}", model_path.display())))?;
    let mut value: serde_json::Value = parse_json(&text, &model_path.display().to_string())?;
    resolve_table_files(&mut value, model_path.parent().unwrap_or(Path::new(".")))?;
    let model: CorrModel = parse_json(&value.to_string(), &model_path.display().to_string())?;
    let sep = parse_separation(sep)?;
    let comps = corr_components(&model, sep)?;
    let rank = comps.first().map_or(0, |c| c.0.len());
    let names = ["i", "j", "k", "l"];
    let mut header: Vec<&str> = names[..rank].to_vec();
    header.push("value");
    let config = RunConfig::new("corr-eval", None, serde_json::json!({"model": value, "sep": sep}))?;
    let mut t = CsvTable::new(&config, &header)?;
    for (idx, v) in comps {
        t.row(idx.iter().map(|i| i.to_string()).chain([fmt_f64(v)]))?;
    }
    t.write_to(out)
}

/// Long-format table of a realization set: one row per (realization, point, component).
pub fn realization_table(real: &FieldRealization, config: &RunConfig) -> Result<CsvTable> {
    let mut t = CsvTable::new(config, &["realization", "point", "x", "y", "z", "component", "value"])?;
    for r in 0..real.realizations() {
        for (p, x) in real.points.iter().enumerate() {
            let coords = x.map(fmt_f64);
            for (c, name) in real.component_names.iter().enumerate() {
                t.row([
                    r.to_string(),
                    p.to_string(),
                    coords[0].clone(),
                    coords[1].clone(),
                    coords[2].clone(),
                    name.clone(),
                    fmt_f64(real.get(r, p, c)),
                ])?;
            }
        }
    }
    Ok(t)
}

/// Reads a simulation plan for `kind` and applies the command-line seed.
pub fn load_plan(path: &Path, kind: &str, seed: u64) -> Result<SimulationPlan> {
    let mut plan: SimulationPlan = read_json(path)?;
    if plan.model.kind() != kind {
        return Err(Error::invalid(format!("plan model kind is `{}`, expected `{kind}`", plan.model.kind())));
    }
    plan.master_seed = seed;
    plan.validate()?;
    Ok(plan)
}

pub fn simulation_config(plan: &SimulationPlan) -> Result<RunConfig> {
    RunConfig::new(&format!("simulate-{}", plan.model.kind()), Some(plan.master_seed), plan)
}

pub fn simulate_cmd(kind: &str, plan_path: &Path, seed: u64, out: &Path) -> Result<()> {
    let plan = load_plan(plan_path, kind, seed)?;
    let real = simulate(&plan)?;
    realization_table(&real, &simulation_config(&plan)?)?.write_to(out)
}

/// Rebuilds a realization set from a table written by [`realization_table`].
pub fn read_realizations(input: &CsvInput) -> Result<FieldRealization> {
    let cols = ["realization", "point", "x", "y", "z", "component", "value"].map(|c| input.column(c));
    let [cr, cp, cx, cy, cz, cc, cv] = cols;
    let (cr, cp, cx, cy, cz, cc, cv) = (cr?, cp?, cx?, cy?, cz?, cc?, cv?);
    let mut names: Vec<String> = Vec::new();
    let mut parsed = Vec::with_capacity(input.rows.len());
    let (mut nr, mut np) = (0usize, 0usize);
    for (k, row) in input.rows.iter().enumerate() {
        let r: usize = field(row, cr, k, "realization")?;
        let p: usize = field(row, cp, k, "point")?;
        let x = [field::<f64>(row, cx, k, "x")?, field::<f64>(row, cy, k, "y")?, field::<f64>(row, cz, k, "z")?];
        let name = row.get(cc).unwrap_or_default().to_string();
        let c = match names.iter().position(|n| *n == name) {
            Some(c) => c,
            None => {
                names.push(name);
                names.len() - 1
            }
        };
        let v: f64 = field(row, cv, k, "value")?;
        nr = nr.max(r + 1);
        np = np.max(p + 1);
        parsed.push((r, p, x, c, v));
    }
    let nc = names.len();
    if parsed.is_empty() {
        return Err(Error::invalid("no data rows"));
    }
    let mut points: Vec<Option<[f64; 3]>> = vec![None; np];
    let mut values = vec![f64::NAN; nr * np * nc];
    let mut seen = vec![false; nr * np * nc];
    for (k, &(r, p, x, c, v)) in parsed.iter().enumerate() {
        match points[p] {
            Some(q) if q != x => {
                return Err(Error::invalid(format!("row {k}: point {p} has inconsistent coordinates")))
            }
            _ => points[p] = Some(x),
        }
        let idx = (r * np + p) * nc + c;
        if seen[idx] {
            return Err(Error::invalid(format!("row {k}: duplicate entry")));
        }
        seen[idx] = true;
        values[idx] = v;
    }
    if let Some(idx) = seen.iter().position(|s| !s) {
        let (r, p, c) = (idx / (np * nc), (idx / nc) % np, idx % nc);
        return Err(Error::invalid(format!("missing value for realization {r}, point {p}, component {}", names[c])));
    }
    let seed = input.metadata.get("seed").and_then(|s| s.parse().ok()).unwrap_or(0);
    Ok(FieldRealization {
        points: points.into_iter().map(|p| p.expect("every point index seen")).collect(),
        components: nc,
        component_names: names,
        values,
        metadata: RealizationMetadata {
            kind: input.metadata.get("command").unwrap_or("unknown").to_string(),
            master_seed: seed,
            ell_max: 0,
            realizations: nr,
            config_hash: input.metadata.get("config_hash").unwrap_or("").to_string(),
            gaussian: true,
        },
    })
}

/// Point pairs file of `estimate corr`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairsSpec {
    pub pairs: Vec<(usize, usize)>,
}

pub fn estimate_corr(input_path: &Path, pairs_path: &Path, out: &Path) -> Result<()> {
    let input = CsvInput::read(input_path)?;
    let real = read_realizations(&input)?;
    let pairs: PairsSpec = read_json(pairs_path)?;
    let est = estimate_correlation(&real, &pairs.pairs)?;
    let seed = input.metadata.get("seed").and_then(|s| s.parse().ok());
    let config = RunConfig::new(
        "estimate-corr",
        seed,
        serde_json::json!({"input_config_hash": real.metadata.config_hash, "pairs": pairs.pairs}),
    )?;
    let mut t = CsvTable::new(&config, &["p", "q", "dx", "dy", "dz", "a", "b", "value", "stderr"])?;
    for e in &est {
        for a in 0..e.components {
            for b in 0..e.components {
                let (v, s) = e.get(a, b);
                t.row(
                    [e.pair.0.to_string(), e.pair.1.to_string()].into_iter().chain(e.separation.map(fmt_f64)).chain([
                        real.component_names[a].clone(),
                        real.component_names[b].clone(),
                        fmt_f64(v),
                        fmt_f64(s),
                    ]),
                )?;
            }
        }
    }
    t.write_to(out)
}

/// Parameters of `cmb synth`.
#[derive(Debug, Clone, Serialize)]
pub struct CmbSynthParams {
    pub spec: SpectrumSpec,
    pub ell_max: usize,
    pub grid: usize,
    pub realizations: usize,
}

/// Synthesized maps on the Gauss–Legendre grid as a table; a leading `realization` column is
/// present when more than one map is drawn.
pub fn cmb_synth_table(params: &CmbSynthParams, seed: u64) -> Result<CsvTable> {
    if params.realizations == 0 {
        return Err(Error::invalid("realizations must be at least 1"));
    }
    let spectrum = AngularPowerSpectrum::try_from(params.spec.clone())?.with_ell_max(params.ell_max)?;
    let sampler = AlmSampler::new(&spectrum)?;
    let rule = gl_grid(params.grid)?;
    let tables = HarmonicTables::new(params.ell_max, &rule.nodes);
    let config = RunConfig::new("cmb-synth", Some(seed), params)?;
    let many = params.realizations > 1;
    let mut header = vec!["theta", "phi", "Theta", "Q", "U", "V"];
    if many {
        header.insert(0, "realization");
    }
    let mut t = CsvTable::new(&config, &header)?;
    for r in 0..params.realizations {
        let map = tables.synthesize(&sampler.sample(seed, r as u64))?;
        for (p, v) in map.points.iter().zip(&map.values) {
            let lead = many.then(|| r.to_string());
            t.row(lead.into_iter().chain([fmt_f64(p.theta), fmt_f64(p.phi)]).chain(v.map(fmt_f64)))?;
        }
    }
    Ok(t)
}

pub fn cmb_synth(
    spec_path: &Path,
    ell_max: usize,
    grid: usize,
    seed: u64,
    realizations: usize,
    out: &Path,
) -> Result<()> {
    let spec: SpectrumSpec = read_json(spec_path)?;
    let params = CmbSynthParams { spec, ell_max, grid, realizations };
    cmb_synth_table(&params, seed)?.write_to(out)
}

/// Maps grouped by realization, in file order.
pub fn read_maps(input: &CsvInput) -> Result<Vec<StokesMap>> {
    let cols = ["theta", "phi", "Theta", "Q", "U", "V"].map(|c| input.column(c));
    let [ct, cp, c0, c1, c2, c3] = cols;
    let (ct, cp, c0, c1, c2, c3) = (ct?, cp?, c0?, c1?, c2?, c3?);
    let creal = input.column("realization").ok();
    let mut maps: Vec<(usize, StokesMap)> = Vec::new();
    for (k, row) in input.rows.iter().enumerate() {
        let r = match creal {
            Some(c) => field(row, c, k, "realization")?,
            None => 0usize,
        };
        let p = point(field(row, ct, k, "theta")?, field(row, cp, k, "phi")?)?;
        let v =
            [field(row, c0, k, "Theta")?, field(row, c1, k, "Q")?, field(row, c2, k, "U")?, field(row, c3, k, "V")?];
        if maps.last().map(|m| m.0) != Some(r) {
            if maps.iter().any(|m| m.0 == r) {
                return Err(Error::invalid(format!("row {k}: rows of realization {r} are not contiguous")));
            }
            maps.push((r, StokesMap { points: Vec::new(), values: Vec::new() }));
        }
        let m = &mut maps.last_mut().expect("pushed").1;
        m.points.push(p);
        m.values.push(v);
    }
    if maps.is_empty() {
        return Err(Error::invalid("no data rows"));
    }
    Ok(maps.into_iter().map(|m| m.1).collect())
}

/// Component pairs `(X, Y)` with `X ≤ Y` in the order Θ, E, B, V.
pub fn component_pairs() -> Vec<(Component, Component)> {
    let all = Component::ALL;
    (0..4).flat_map(|a| (a..4).map(move |b| (all[a], all[b]))).collect()
}

pub fn cmb_cell(input_path: &Path, ell_max: Option<usize>, out: &Path) -> Result<()> {
    let input = CsvInput::read(input_path)?;
    let maps = read_maps(&input)?;
    let rule = grid_from_points(&maps[0].points)?;
    let ell_max = ell_max.unwrap_or(rule.n_theta - 1);
    let analysis = SphereAnalysis::new(ell_max, rule.n_theta)?;
    let alms = maps.iter().map(|m| analysis.analyze(m).map(|a| a.0)).collect::<Result<Vec<_>>>()?;
    let est = estimate_cell(&alms)?;
    let seed = input.metadata.get("seed").and_then(|s| s.parse().ok());
    let config = RunConfig::new(
        "cmb-cell",
        seed,
        serde_json::json!({"input_config_hash": input.metadata.get("config_hash"), "ell_max": ell_max, "realizations": alms.len()}),
    )?;
    let mut t = CsvTable::new(&config, &["ell", "pair", "value", "stderr"])?;
    for ell in 0..=ell_max {
        for (x, y) in component_pairs() {
            let (i, j) = (x.index(), y.index());
            let se = est.stderr.as_ref().map_or(String::new(), |s| fmt_f64(s[ell][i][j]));
            t.row([ell.to_string(), format!("{}-{}", x.name(), y.name()), fmt_f64(est.mean[ell][i][j]), se])?;
        }
    }
    t.write_to(out)
}

/// Writes a verification report as pretty JSON.
pub fn write_report<T: Serialize>(report: &T, out: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    emit(out, text.as_bytes())
}
