//! Scenario execution: compute, then write every file serially.

use std::path::{Path, PathBuf};

use airyspdc::biphoton::biphoton_zeta;
use airyspdc::detection::g11_diagonal;
use airyspdc::{
    biphoton_map, conditional_coincidence, far_g11_map, far_g12_map, momentum_probability_map,
    near_g11_map, near_g12_map, pump_intensity_2d, pump_propagation_map, schmidt_scenario,
    singles_probability, Axis, AxisKind, ComplexMap2D, CorrelationMap, CrystalParams,
    DetectionMode, OpticalSetup, Profile1D, PumpParams, RealMap2D,
};

use crate::config::{grid, Resolved, Scenario, ScenarioConfig};
use crate::csv::{col, Column, CsvDocument};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("numerical failure: {0}")]
    Numerical(#[from] airyspdc::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// File name and contents, in write order.
pub type Output = (String, String);

struct Ctx<'a> {
    cfg: &'a ScenarioConfig,
    pump: PumpParams,
    canonical: String,
}

impl Ctx<'_> {
    fn doc(&self, content: &str) -> CsvDocument {
        let mut d = CsvDocument::new(content);
        d.config(&self.canonical);
        d.meta("scenario", self.cfg.scenario.name());
        d.meta_f64("truncation", self.pump.truncation());
        d.meta_f64("scale_um", self.pump.scale_um());
        d.meta_f64("diffraction_length_cm", self.pump.diffraction_length_um() * 1e-4);
        d
    }

    fn crystal_meta(d: &mut CsvDocument, crystal: &CrystalParams, axis: Axis) {
        d.meta("axis", axis.as_str());
        d.meta_f64("D", crystal.d());
        d.meta_f64("D_e", crystal.d_e_on(axis));
    }

    fn finish(&self, d: CsvDocument, name: String, out: &mut Vec<Output>) {
        out.push((name, d.into_string()));
    }
}

fn write_map(d: &mut CsvDocument, map: &RealMap2D, cols: [Column; 3]) {
    d.table(None, map.normalization.as_str(), &cols);
    let (r, c) = (map.rows.nodes(), map.cols.nodes());
    for (i, x) in r.iter().enumerate() {
        for (j, y) in c.iter().enumerate() {
            d.row(&[*x, *y, map.values[[i, j]]]);
        }
    }
}

fn write_profile(d: &mut CsvDocument, p: &Profile1D, cols: [Column; 2]) {
    d.table(None, p.normalization.as_str(), &cols);
    for (x, v) in p.grid.nodes().iter().zip(&p.values) {
        d.row(&[*x, *v]);
    }
}

/// Computes all outputs of `cfg` without touching the file system.
pub fn compute(cfg: &ScenarioConfig) -> Result<Vec<Output>, airyspdc::Error> {
    let Resolved {
        pump,
        crystal,
        setup,
    } = cfg.resolve()?;
    let ctx = Ctx {
        cfg,
        pump,
        canonical: cfg.to_toml(),
    };
    let g = &cfg.grid;
    let mut out = Vec::new();
    match cfg.scenario {
        Scenario::Pump1d => {
            let xi = grid(g.xi_min, g.xi_max, g.xi_samples, AxisKind::Position)?;
            let zeta = grid(g.zeta_min, g.zeta_max, g.zeta_samples, AxisKind::Position)?;
            let map = pump_propagation_map(&xi, &zeta, pump.truncation())?;
            let mut d = ctx.doc("pump intensity |Ai_Tr(xi, zeta)|^2");
            write_map(&mut d, &map, [col("zeta", "1"), col("xi", "1"), col("intensity", "1")]);
            ctx.finish(d, "pump1d.csv".into(), &mut out);
        }
        Scenario::Pump2d => {
            let xi = grid(g.xi_min, g.xi_max, g.xi_samples, AxisKind::Position)?;
            for (i, z_cm) in g.distances_cm.as_deref().unwrap_or_default().iter().enumerate() {
                let z_um = z_cm * 1e4;
                let map = pump_intensity_2d(&xi, &xi, z_um, &pump)?;
                let mut d = ctx.doc("transverse pump intensity |Ai_Tr(xi_x)|^2 |Ai_Tr(xi_y)|^2");
                d.meta_f64("distance_cm", *z_cm);
                d.meta_f64("zeta", pump.zeta(z_um));
                write_map(&mut d, &map, [col("xi_x", "1"), col("xi_y", "1"), col("intensity", "1")]);
                ctx.finish(d, format!("pump2d_{i}.csv"), &mut out);
            }
        }
        Scenario::Momentum => {
            let (c, axis) = crystal.expect("validated crystal");
            let q = grid(g.q_min, g.q_max, g.q_samples, AxisKind::Momentum)?;
            let map = momentum_probability_map(&q, &pump, &c, axis);
            let mut d = ctx.doc("momentum probability |Phi(q1, q2)|^2");
            Ctx::crystal_meta(&mut d, &c, axis);
            write_map(&mut d, &map, [col("q1", "1"), col("q2", "1"), col("probability", "1")]);
            ctx.finish(d, "momentum.csv".into(), &mut out);
        }
        Scenario::Biphoton => {
            let (c, axis) = crystal.expect("validated crystal");
            let gp = grid(g.xi_plus_min, g.xi_plus_max, g.xi_plus_samples, AxisKind::Position)?;
            let gm = grid(g.xi_minus_min, g.xi_minus_max, g.xi_minus_samples, AxisKind::Position)?;
            let z_um: Vec<f64> = g
                .distances_cm
                .as_deref()
                .unwrap_or_default()
                .iter()
                .map(|z| z * 1e4)
                .collect();
            let maps = biphoton_map(&gp, &gm, &z_um, &pump, &c, axis)?;
            for (i, (map, z)) in maps.iter().zip(&z_um).enumerate() {
                let mut d = ctx.doc("biphoton probability |A(xi+, xi-)|^2");
                Ctx::crystal_meta(&mut d, &c, axis);
                d.meta_f64("distance_cm", z * 1e-4);
                d.meta_f64("zeta", biphoton_zeta(*z, &pump));
                write_map(
                    &mut d,
                    map,
                    [col("xi_plus", "1"), col("xi_minus", "1"), col("intensity", "1")],
                );
                ctx.finish(d, format!("biphoton_{i}.csv"), &mut out);
            }
        }
        Scenario::Farfield | Scenario::Nearfield => {
            let (c, axis) = crystal.expect("validated crystal");
            let setup = setup.expect("validated setup");
            let x = grid(g.x_min_mm, g.x_max_mm, g.x_samples, AxisKind::DetectorMm)?;
            detection(&ctx, &x, &c, axis, &setup, &mut out)?;
        }
        Scenario::Schmidt => {
            let (c, axis) = crystal.expect("validated crystal");
            let setup = setup.expect("validated setup");
            let x = grid(g.x_min_mm, g.x_max_mm, g.x_samples, AxisKind::DetectorMm)?;
            let report = schmidt_scenario(&pump, &c, axis, &setup, &x, g.fraction.expect("validated"))?;
            let r = &report.result;
            let mut d = ctx.doc("Schmidt decomposition of sqrt(G12)");
            Ctx::crystal_meta(&mut d, &c, axis);
            d.meta("mode", report.mode.as_str());
            d.meta_f64("focal_length_mm", setup.focal_length_mm());
            d.table(Some("metrics"), "raw", &[col("metric", "-"), col("value", "1")]);
            d.labelled_row("K", r.k);
            d.labelled_row("S", r.entropy);
            d.labelled_row("gamma", r.purity);
            d.labelled_row("fraction", report.fraction);
            d.labelled_row("modes_for_fraction", report.modes_for_fraction as f64);
            d.table(
                Some("weights"),
                "sum1",
                &[col("n", "1"), col("weight", "1"), col("cumulative", "1")],
            );
            for (n, (l, cum)) in r.weights.iter().zip(&r.cumulative).enumerate() {
                d.row(&[(n + 1) as f64, *l, *cum]);
            }
            ctx.finish(d, "schmidt_report.csv".into(), &mut out);
        }
    }
    Ok(out)
}

fn detection(
    ctx: &Ctx<'_>,
    x: &airyspdc::Grid1D,
    c: &CrystalParams,
    axis: Axis,
    setup: &OpticalSetup,
    out: &mut Vec<Output>,
) -> Result<(), airyspdc::Error> {
    let pump = &ctx.pump;
    let (stem, label): (&str, &str) = match setup.mode() {
        DetectionMode::FarField => ("farfield", "far-field"),
        DetectionMode::NearField => ("nearfield", "near-field"),
    };
    let (g12, g11): (CorrelationMap, ComplexMap2D) = match setup.mode() {
        DetectionMode::FarField => (
            far_g12_map(x, pump, c, axis, setup)?,
            far_g11_map(x, pump, c, axis, setup)?,
        ),
        DetectionMode::NearField => (
            near_g12_map(x, pump, c, axis, setup)?,
            near_g11_map(x, pump, c, axis, setup)?,
        ),
    };
    let header = |d: &mut CsvDocument| {
        Ctx::crystal_meta(d, c, axis);
        d.meta("mode", setup.mode().as_str());
        d.meta_f64("focal_length_mm", setup.focal_length_mm());
    };

    let mut d = ctx.doc(&format!("{label} coincidences G12(x1, x2)"));
    header(&mut d);
    write_map(&mut d, &g12.map, [col("x1", "mm"), col("x2", "mm"), col("g12", "1")]);
    ctx.finish(d, format!("{stem}_g12.csv"), out);

    // only when x2 = 0 is a grid node
    if x.index_of(0.0).is_some() {
        let p = conditional_coincidence(&g12)?;
        let mut d = ctx.doc(&format!("{label} conditional coincidences G12(x1, 0) / int G12"));
        header(&mut d);
        write_profile(&mut d, &p, [col("x1", "mm"), col("probability", "1/mm")]);
        ctx.finish(d, format!("{stem}_conditional.csv"), out);
    }

    let p = singles_probability(&g11_diagonal(&g11))?;
    let mut d = ctx.doc(&format!("{label} singles G11(x, x) / int G11"));
    header(&mut d);
    write_profile(&mut d, &p, [col("x", "mm"), col("probability", "1/mm")]);
    ctx.finish(d, format!("{stem}_singles.csv"), out);
    Ok(())
}

/// Computes `cfg` and writes its files under `dir`.
pub fn run_scenario(cfg: &ScenarioConfig, dir: &Path) -> Result<Vec<PathBuf>, RunError> {
    let outputs = compute(cfg)?;
    std::fs::create_dir_all(dir).map_err(|source| RunError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut written = Vec::with_capacity(outputs.len());
    for (name, text) in outputs {
        let path = dir.join(name);
        std::fs::write(&path, text).map_err(|source| RunError::Io {
            path: path.clone(),
            source,
        })?;
        written.push(path);
    }
    Ok(written)
}
