use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;
use surfcrack::field::{
    dtn_check, far_field_gradient, harmonicity_residual, reconstruct_field, strain_bound_report, FieldGrid,
    TIP_EXCLUSION,
};
use surfcrack::fredholm::{solve_nystrom_with, solve_with_convergence, tip_slope_max, SolveOptions};
use surfcrack::kinematics::examples::{exponential_deformation, planar_chart, shear_deformation, sphere_chart};
use surfcrack::kinematics::{compute_surface_state, geodesic_distortion_rate, stretch_of_convected_curve, stretch_rate_check};
use surfcrack::{CrackParams, SolveReport};

use crate::config::{Mode, RunConfig, DEFAULT_N, FIG4_N};
use crate::output::{emit_profile, Meta, Table};
use crate::CliError;

/// Figure 3 regimes `(beta, alpha, gamma)`.
pub const FIG3_CASES: [(f64, f64, f64); 3] = [(1.0, 1.0, 1.0), (5.0, 1.0, 5.0), (10.0, 1.0, 10.0)];
/// Figure 4 regimes `(beta, alpha, gamma)`.
pub const FIG4_CASES: [(f64, f64, f64); 4] = [(1e-1, 1e-1, 1.0), (1e-2, 1e-1, 1.0), (1e-5, 1e-2, 1.0), (1e-6, 1e-3, 1.0)];

#[derive(Debug, Default)]
pub struct RunOutcome {
    pub files: Vec<PathBuf>,
    /// One entry per solve whose strong residual exceeded the threshold.
    pub breaches: Vec<String>,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    started_unix_seconds: u64,
    elapsed_seconds: f64,
    config: &'a RunConfig,
    files: Vec<String>,
}

fn base_meta(cfg: &RunConfig) -> Meta {
    Meta::default()
        .text("generator", format!("surfcrack-cli {}", env!("CARGO_PKG_VERSION")))
        .text("mode", cfg.mode.name())
        .num("tol_residual", cfg.tol_residual)
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    opts: SolveOptions,
    out: RunOutcome,
}

impl Ctx<'_> {
    fn solve(&mut self, params: &CrackParams, n: usize) -> Result<SolveReport, CliError> {
        let r = solve_nystrom_with(params, n, &self.opts)?;
        if r.flagged {
            self.out.breaches.push(format!(
                "(alpha, beta, gamma) = ({}, {}, {}), n = {}: strong residual {:.3e}",
                params.alpha, params.beta, params.gamma, n, r.strong_residual_max
            ));
        }
        Ok(r)
    }

    fn profile(&mut self, r: &SolveReport, stem: &str) -> Result<(), CliError> {
        let warnings = if r.warnings.is_empty() { "none".to_string() } else { r.warnings.join("; ") };
        let meta = base_meta(self.cfg).text("warnings", warnings);
        let path = emit_profile(r, meta, &self.cfg.out, stem, self.cfg.format)?;
        self.out.files.push(path);
        Ok(())
    }

    fn table(&mut self, t: &Table, stem: &str) -> Result<(), CliError> {
        let path = t.write(&self.cfg.out, stem, self.cfg.format)?;
        self.out.files.push(path);
        Ok(())
    }
}

/// Executes one configured run. Files are written before any residual
/// breach is reported as an error.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    let started = SystemTime::now();
    let clock = Instant::now();
    if cfg.mode == Mode::Converge {
        if cfg.ns.len() < 2 || cfg.ns.windows(2).any(|w| w[1] != 2 * w[0] - 1) || cfg.ns[0] < 33 || cfg.ns[0] % 2 == 0 {
            return Err(CliError::Usage(format!(
                "ns must be odd, at least 33, and successive doublings (n -> 2n - 1), got {:?}",
                cfg.ns
            )));
        }
    }
    std::fs::create_dir_all(&cfg.out)?;
    let mut ctx = Ctx {
        cfg,
        opts: SolveOptions {
            residual_tol: cfg.tol_residual,
            ..SolveOptions::default()
        },
        out: RunOutcome::default(),
    };
    match cfg.mode {
        Mode::Solve => {
            let r = ctx.solve(&cfg.params, cfg.n_or(DEFAULT_N))?;
            ctx.profile(&r, "profile")?;
        }
        Mode::Sweep => sweep(&mut ctx)?,
        Mode::Fig3 => fig3(&mut ctx)?,
        Mode::Fig4 => fig4(&mut ctx)?,
        Mode::Converge => {
            let r = solve_with_convergence(&cfg.params, &cfg.ns)?;
            let meta = crate::output::report_meta(base_meta(cfg), &r);
            let mut t = Table::new(meta, &["n", "center_value", "diff_to_next", "observed_order"]);
            for row in &r.convergence {
                t.push(vec![
                    row.n as f64,
                    row.center_value,
                    row.diff_to_next.unwrap_or(f64::NAN),
                    row.observed_order.unwrap_or(f64::NAN),
                ]);
            }
            ctx.table(&t, "convergence")?;
            if r.strong_residual_max > cfg.tol_residual {
                ctx.out.breaches.push(format!("finest grid: strong residual {:.3e}", r.strong_residual_max));
            }
            ctx.profile(&r, "profile")?;
        }
        Mode::Field => field(&mut ctx)?,
        Mode::KinematicsDemo => kinematics_demo(&mut ctx)?,
    }

    let sidecar = Sidecar {
        started_unix_seconds: started.duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        elapsed_seconds: clock.elapsed().as_secs_f64(),
        config: cfg,
        files: ctx.out.files.iter().map(|p| p.display().to_string()).collect(),
    };
    let side = cfg.out.join("run_info.json");
    std::fs::write(&side, serde_json::to_string_pretty(&sidecar).expect("serialisable") + "\n")?;

    if !ctx.out.breaches.is_empty() {
        return Err(CliError::Residual(ctx.out.breaches.join("; ")));
    }
    Ok(ctx.out)
}

fn summary_row(r: &SolveReport) -> Vec<f64> {
    let p = r.profile.params();
    vec![
        p.beta,
        p.alpha,
        p.gamma,
        r.max_f,
        tip_slope_max(&r.profile, 0.9),
        r.strong_residual_max,
        r.weak_residual_max,
    ]
}

const SUMMARY_COLUMNS: [&str; 7] = ["beta", "alpha", "gamma", "max_f", "tip_slope", "strong_residual_max", "weak_residual_max"];

fn sweep(ctx: &mut Ctx) -> Result<(), CliError> {
    let cfg = ctx.cfg;
    let n = cfg.n_or(DEFAULT_N);
    let meta = base_meta(cfg).num("alpha", cfg.params.alpha).num("gamma", cfg.params.gamma).int("n", n);
    let mut t = Table::new(meta, &SUMMARY_COLUMNS);
    for (k, &beta) in cfg.betas.iter().enumerate() {
        let p = CrackParams::new(cfg.params.alpha, beta, cfg.params.gamma)?;
        let r = ctx.solve(&p, n)?;
        ctx.profile(&r, &format!("profile_{k}"))?;
        t.push(summary_row(&r));
    }
    ctx.table(&t, "sweep")
}

fn fig3(ctx: &mut Ctx) -> Result<(), CliError> {
    let n = ctx.cfg.n_or(DEFAULT_N);
    let mut cols = SUMMARY_COLUMNS.to_vec();
    cols.push("max_dev_from_limit");
    let mut t = Table::new(base_meta(ctx.cfg).int("n", n), &cols);
    let limit = |x: f64| (1.0 - x * x).powi(2) / 24.0;
    for (k, &(b, a, g)) in FIG3_CASES.iter().enumerate() {
        let r = ctx.solve(&CrackParams::new(a, b, g)?, n)?;
        ctx.profile(&r, &format!("fig3_{}", k + 1))?;
        let dev = r
            .profile
            .nodes()
            .iter()
            .zip(r.profile.values())
            .map(|(x, f)| (f - limit(*x)).abs())
            .fold(0.0, f64::max);
        let mut row = summary_row(&r);
        row.push(dev);
        t.push(row);
    }
    let mut reference = Table::new(base_meta(ctx.cfg).int("n", n).text("curve", "(1 - x^2)^2 / 24"), &["x", "f_limit"]);
    for i in 0..n {
        let x = -1.0 + 2.0 * i as f64 / (n - 1) as f64;
        reference.push(vec![x, limit(x)]);
    }
    ctx.table(&reference, "fig3_limit")?;
    ctx.table(&t, "fig3_summary")
}

fn fig4(ctx: &mut Ctx) -> Result<(), CliError> {
    let n = ctx.cfg.n_or(FIG4_N);
    let mut t = Table::new(base_meta(ctx.cfg).int("n", n), &SUMMARY_COLUMNS);
    for (k, &(b, a, g)) in FIG4_CASES.iter().enumerate() {
        let r = ctx.solve(&CrackParams::new(a, b, g)?, n)?;
        ctx.profile(&r, &format!("fig4_{}", k + 1))?;
        t.push(summary_row(&r));
    }
    ctx.table(&t, "fig4_summary")
}

fn field(ctx: &mut Ctx) -> Result<(), CliError> {
    let cfg = ctx.cfg;
    let r = ctx.solve(&cfg.params, cfg.n_or(DEFAULT_N))?;
    ctx.profile(&r, "profile")?;
    let prof = &r.profile;
    let w = cfg.field;
    let grid = FieldGrid::uniform(w.half_width, w.height, w.nx, w.ny)?;
    let f = reconstruct_field(prof, &grid);
    let near = reconstruct_field(prof, &FieldGrid::new(prof.nodes(), vec![0.0, 1e-3, 2e-3])?);
    let meta = crate::output::report_meta(base_meta(cfg), &r)
        .num("harmonicity_residual", harmonicity_residual(&f, TIP_EXCLUSION)?)
        .num("tip_exclusion", TIP_EXCLUSION)
        .num("dtn_mismatch", dtn_check(prof, &near)?)
        .num("strain_bound_ratio", strain_bound_report(&f, &cfg.params))
        .num("top_row_gradient", far_field_gradient(&f));
    let mut t = Table::new(meta, &["x", "y", "w", "w_x", "w_y"]);
    for j in 0..f.ny() {
        for i in 0..f.nx() {
            let k = f.idx(i, j);
            t.push(vec![grid.xs[i], grid.ys[j], f.w[k], f.w_x[k], f.w_y[k]]);
        }
    }
    ctx.table(&t, "field")
}

fn kinematics_demo(ctx: &mut Ctx) -> Result<(), CliError> {
    let chart = planar_chart(-1.0, 1.5);
    let chi = exponential_deformation();
    let cols = [
        "X1", "E11", "E12", "E22", "K11", "K12", "K22", "L111", "L112", "L122", "L211", "L212", "L222", "nu_e1", "rate_e1",
    ];
    let meta = base_meta(ctx.cfg).text("example", "planar chart, chi = (e^X1 cos X2, e^X1 sin X2, X3), X2 = 0.5");
    let mut t = Table::new(meta, &cols);
    for x1 in [-0.5, 0.0, 0.5, 1.0] {
        let st = compute_surface_state(&chart, &chi, [x1, 0.5])?;
        let l = &st.distortion;
        t.push(vec![
            x1,
            st.stretch[(0, 0)],
            st.stretch[(0, 1)],
            st.stretch[(1, 1)],
            st.curvature[(0, 0)],
            st.curvature[(0, 1)],
            st.curvature[(1, 1)],
            l[0][0][0],
            l[0][0][1],
            l[0][1][1],
            l[1][0][0],
            l[1][0][1],
            l[1][1][1],
            stretch_of_convected_curve(&st, [1.0, 0.0]).nu,
            geodesic_distortion_rate(&st, [1.0, 0.0]),
        ]);
    }
    ctx.table(&t, "kinematics")?;

    let meta = base_meta(ctx.cfg).text("example", "unit sphere, chi = (X1 + a X2^2, X2 + a sin X1, X3 (1 + a X1)), a = 0.3");
    let mut rate = Table::new(meta, &["ds", "tensor_rate", "difference_rate", "abs_error"]);
    let (sphere, shear) = (sphere_chart(), shear_deformation(0.3));
    for ds in [0.08, 0.04, 0.02, 0.01] {
        let c = stretch_rate_check(&sphere, &shear, [1.2, 0.4], [0.6, 0.8 / 1.2f64.sin()], ds)?;
        rate.push(vec![ds, c.tensor_rate, c.difference_rate, (c.tensor_rate - c.difference_rate).abs()]);
    }
    ctx.table(&rate, "stretch_rate")
}
