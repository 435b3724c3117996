//! One PASS/FAIL line per acceptance criterion; exits with failure if any
//! criterion fails.

mod common;

use std::process::ExitCode;

use common::{
    dense_oracle, forcing_oracle_errors, max_abs_diff, max_abs_diff_vec, pseudo_random_subscales,
    subscale_recursion_errors, velocity_distance,
};
use stokes_asgs::Error;
use stokes_asgs::asgs::{
    Discretization, FieldState, StabilizationParams, TimeScheme, coercivity_check,
};
use stokes_asgs::cli::{RunConfig, level_config, run_case};
use stokes_asgs::fem::DofMap;
use stokes_asgs::manufactured::{
    ExactSolution, LevelResult, ManufacturedSolution, RateBasis, fitted_order, rate_table,
};
use stokes_asgs::mesh::Mesh;

/// Reference rates of the five-level backward-Euler study.
const REFERENCE_ROCS: [f64; 4] = [0.899928, 0.93883, 0.96722, 0.986447];
/// Reference total error on the coarsest level.
const REFERENCE_COARSE_TOTAL: f64 = 0.0651611;
const ROC_TOL: f64 = 0.06;
const FINAL_ROC_RANGE: (f64, f64) = (0.93, 1.05);
const SPACE_ORDER_RANGE: (f64, f64) = (0.85, 1.1);
const TIME_ORDER_RANGE: (f64, f64) = (1.6, 2.4);
const ORACLE_TOL: f64 = 1e-12;
const FORCING_TOL: f64 = 1e-6;
const DIVERGENCE_TOL: f64 = 1e-12;
const GALERKIN_NEAR_ZERO: f64 = 1e-10;
const PRESSURE_RATIO: f64 = 2.0;
const MIN_DIV_ORDER: f64 = 0.8;
const EFFECTIVITY_RANGE: (f64, f64) = (0.05, 50.0);
const MAX_EFFECTIVITY_SPREAD: f64 = 4.0;
const SUBSCALE_TOL: f64 = 1e-13;

struct Outcome {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn in_range(x: f64, (lo, hi): (f64, f64)) -> bool {
    (lo..=hi).contains(&x)
}

fn fmt_list(xs: &[f64]) -> String {
    let items: Vec<String> = xs.iter().map(|x| format!("{x:.4}")).collect();
    format!("[{}]", items.join(", "))
}

fn fmt_sci(xs: &[f64]) -> String {
    let items: Vec<String> = xs.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", items.join(", "))
}

/// Five-level backward-Euler study from nx = 10, dt = 0.1.
fn space_study() -> Vec<LevelResult> {
    let base = RunConfig::default();
    (0..5)
        .map(|level| {
            run_case(&level_config(&base, level, false), level)
                .unwrap()
                .result
        })
        .collect()
}

fn criterion_1(study: &[LevelResult]) -> Outcome {
    let rocs = rate_table(study, RateBasis::Space).unwrap().rocs();
    let close = rocs
        .iter()
        .zip(REFERENCE_ROCS)
        .all(|(r, p)| (r - p).abs() <= ROC_TOL);
    let increasing = rocs.windows(2).all(|w| w[1] > w[0]);
    let last = *rocs.last().unwrap();
    let pass = close && increasing && in_range(last, FINAL_ROC_RANGE);
    let magnitude = study[0].total / REFERENCE_COARSE_TOTAL;
    verdict(
        pass,
        format!(
            "rocs {} vs reference {} (tol {ROC_TOL}), increasing {increasing}, final {last:.4} in {FINAL_ROC_RANGE:?}; \
             coarse total {:.4e} = {magnitude:.3} x reference (informational)",
            fmt_list(&rocs),
            fmt_list(&REFERENCE_ROCS),
            study[0].total,
        ),
    )
}

fn criterion_2(study: &[LevelResult]) -> Outcome {
    let h: Vec<f64> = study.iter().map(|r| r.h).collect();
    let total: Vec<f64> = study.iter().map(|r| r.total).collect();
    let slope = fitted_order(&h, &total).unwrap();
    verdict(
        in_range(slope, SPACE_ORDER_RANGE),
        format!(
            "fitted order {slope:.4} in {SPACE_ORDER_RANGE:?}; totals {}",
            fmt_sci(&total)
        ),
    )
}

fn criterion_3() -> Outcome {
    let base = RunConfig {
        nx: 64,
        dt: 0.2,
        theta: 0.0,
        ..Default::default()
    };
    let mesh = Mesh::unit_square(64).unwrap();
    let dm = DofMap::new(&mesh).unwrap();
    let (results, finals): (Vec<_>, Vec<_>) = (0..4)
        .map(|level| {
            let out = run_case(&level_config(&base, level, true), level).unwrap();
            (out.result, out.final_state)
        })
        .unzip();
    let rocs = rate_table(&results, RateBasis::Time).unwrap().rocs();
    let last = *rocs.last().unwrap();
    let diffs: Vec<f64> = finals
        .windows(2)
        .map(|w| velocity_distance(&dm.mean_vector, &w[0], &w[1]))
        .collect();
    let self_orders: Vec<f64> = diffs.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    verdict(
        in_range(last, TIME_ORDER_RANGE),
        format!(
            "last temporal order of the total error {last:.4} in {TIME_ORDER_RANGE:?} (rocs {}); \
             self-convergence orders of the final velocity {} (informational)",
            fmt_list(&rocs),
            fmt_list(&self_orders),
        ),
    )
}

fn criterion_4() -> Outcome {
    let sol = ManufacturedSolution::new(0.1);
    let mesh = Mesh::unit_square(2).unwrap();
    let dm = DofMap::new(&mesh).unwrap();
    let scheme = TimeScheme::backward_euler(0.1, 1.0).unwrap();
    let params = StabilizationParams::default();
    let disc = Discretization::new(&mesh, &dm, scheme, params).unwrap();
    let state = FieldState::interpolated(
        &mesh,
        |x, y, t| sol.velocity(x, y, t),
        |x, y, t| sol.pressure(x, y, t),
        0.3,
    );
    let sub = pseudo_random_subscales(mesh.n_triangles(), disc.n_qp(), 7);
    let sys = disc.assemble(&state, &sub, &sol).unwrap();
    let (a, b) = dense_oracle(&mesh, &scheme, &params, &state, &sub, &sol);
    let da = max_abs_diff(&sys.matrix.to_dense(), &a);
    let db = max_abs_diff_vec(&sys.rhs, &b);
    verdict(
        da <= ORACLE_TOL && db <= ORACLE_TOL,
        format!("max |A - A_dense| {da:.2e}, max |b - b_dense| {db:.2e} (tol {ORACLE_TOL:e})"),
    )
}

fn criterion_5() -> Outcome {
    let (f_err, div_err) = forcing_oracle_errors(1000, 2024);
    verdict(
        f_err <= FORCING_TOL && div_err <= DIVERGENCE_TOL,
        format!(
            "forcing vs finite differences {f_err:.2e} (tol {FORCING_TOL:e}), divergence {div_err:.2e} (tol {DIVERGENCE_TOL:e})"
        ),
    )
}

fn criterion_6() -> Outcome {
    let params = StabilizationParams::default();
    let galerkin = StabilizationParams {
        stabilized: false,
        ..params
    };
    let mut lambdas = Vec::new();
    for nx in [4, 8] {
        let mesh = Mesh::unit_square(nx).unwrap();
        let dm = DofMap::new(&mesh).unwrap();
        lambdas.push(coercivity_check(&mesh, &dm, &params, 0.1).unwrap());
    }
    let mesh = Mesh::unit_square(4).unwrap();
    let dm = DofMap::new(&mesh).unwrap();
    let unstab = coercivity_check(&mesh, &dm, &galerkin, 100.0).unwrap();
    verdict(
        lambdas.iter().all(|l| *l > 0.0) && unstab <= GALERKIN_NEAR_ZERO,
        format!(
            "stabilized lambda_min at nx=4, 8 {:.3e}, {:.3e} > 0; unstabilized at dt=100 {unstab:.2e} <= {GALERKIN_NEAR_ZERO:e}",
            lambdas[0], lambdas[1]
        ),
    )
}

fn criterion_7() -> Outcome {
    let stab = RunConfig {
        nx: 20,
        dt: 0.05,
        ..Default::default()
    };
    let galerkin = RunConfig {
        stabilized: false,
        ..stab.clone()
    };
    let stabilized = match run_case(&stab, 0) {
        Ok(out) => out.result,
        Err(e) => return verdict(false, format!("stabilized run failed: {e}")),
    };
    match run_case(&galerkin, 0) {
        Err(Error::Step { step, source }) if matches!(*source, Error::SingularMatrix(_)) => {
            verdict(
                true,
                format!(
                    "unstabilized run singular at step {step} ({source}); stabilized err_p {:.3e}",
                    stabilized.err_p_l2l2
                ),
            )
        }
        Err(e) => verdict(false, format!("unstabilized run failed unexpectedly: {e}")),
        Ok(out) => {
            let ratio = out.result.err_p_l2l2 / stabilized.err_p_l2l2;
            verdict(
                ratio >= PRESSURE_RATIO,
                format!(
                    "pressure error ratio unstabilized/stabilized {ratio:.3} >= {PRESSURE_RATIO}"
                ),
            )
        }
    }
}

fn criterion_8(study: &[LevelResult]) -> Outcome {
    let h: Vec<f64> = study.iter().map(|r| r.h).collect();
    let div: Vec<f64> = study.iter().map(|r| r.div_l2l2).collect();
    let order = fitted_order(&h, &div).unwrap();
    let decreasing = div.windows(2).all(|w| w[1] < w[0]);
    verdict(
        decreasing && order >= MIN_DIV_ORDER,
        format!(
            "||div u_h|| {}, decreasing {decreasing}, fitted order {order:.4} >= {MIN_DIV_ORDER}",
            fmt_sci(&div)
        ),
    )
}

fn criterion_9(study: &[LevelResult]) -> Outcome {
    let eff: Vec<f64> = study.iter().map(|r| r.eta / r.total).collect();
    let (lo, hi) = eff
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(a, b), &e| (a.min(e), b.max(e)));
    let spread = hi / lo;
    verdict(
        eff.iter().all(|e| in_range(*e, EFFECTIVITY_RANGE)) && spread < MAX_EFFECTIVITY_SPREAD,
        format!(
            "eta/total {} in {EFFECTIVITY_RANGE:?}, spread {spread:.2} < {MAX_EFFECTIVITY_SPREAD}",
            fmt_list(&eff)
        ),
    )
}

fn criterion_10() -> Outcome {
    let mut worst = (0.0f64, 0.0f64);
    for scheme in [
        TimeScheme::backward_euler(0.1, 1.0).unwrap(),
        TimeScheme::crank_nicolson(0.1, 1.0).unwrap(),
    ] {
        let (s, d) = subscale_recursion_errors(&scheme, 10);
        worst = (worst.0.max(s), worst.1.max(d));
    }
    verdict(
        worst.0 <= SUBSCALE_TOL && worst.1 <= SUBSCALE_TOL,
        format!(
            "frozen-residual partial sum {:.2e}, zero-residual decay {:.2e} (tol {SUBSCALE_TOL:e})",
            worst.0, worst.1
        ),
    )
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() -> ExitCode {
    let study = space_study();
    let criteria: Vec<Criterion<'_>> = vec![
        ("rate reproduction", Box::new(|| criterion_1(&study))),
        ("spatial first order", Box::new(|| criterion_2(&study))),
        ("Crank-Nicolson temporal order", Box::new(criterion_3)),
        ("assembly oracle", Box::new(criterion_4)),
        ("forcing oracle", Box::new(criterion_5)),
        ("coercivity", Box::new(criterion_6)),
        ("stabilization necessity", Box::new(criterion_7)),
        ("divergence convergence", Box::new(|| criterion_8(&study))),
        ("estimator effectivity", Box::new(|| criterion_9(&study))),
        ("subscale recursion", Box::new(criterion_10)),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let out = check();
        failures += usize::from(!out.pass);
        println!(
            "criterion {} {name}: {} | {}",
            i + 1,
            if out.pass { "PASS" } else { "FAIL" },
            out.detail
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
