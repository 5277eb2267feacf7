use serde::Serialize;
use sphint::quadrature_oracle::{convergence_study, ConvergenceCase, ConvergenceError, MAX_ORDER, MIN_ORDER};

use crate::{output, CliError, OutputArgs};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// constant (f = 1) or linear (f = x).
    #[arg(long)]
    case: ConvergenceCase,
    /// Triangles in the tiling of [-1,1]²: 8 or 96.
    #[arg(long = "nt", default_value_t = 8)]
    n_t: usize,
    #[arg(long, default_value_t = MIN_ORDER)]
    min_order: usize,
    #[arg(long, default_value_t = MAX_ORDER)]
    max_order: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Serialize)]
struct Record {
    method: &'static str,
    order: Option<usize>,
    points_per_triangle: usize,
    l2_error_value: f64,
    l2_error_gradient: f64,
}

#[derive(Debug, Serialize)]
struct Summary {
    case: String,
    triangles: usize,
    analytic_value: f64,
    analytic_gradient: f64,
    plateau_value: f64,
    plateau_gradient: f64,
}

pub fn run(a: Args) -> Result<(), CliError> {
    if a.min_order > a.max_order || a.min_order < MIN_ORDER || a.max_order > MAX_ORDER {
        return Err(CliError::Usage(format!(
            "order range {}..={} outside the supported {MIN_ORDER}..={MAX_ORDER}",
            a.min_order, a.max_order
        )));
    }
    let study = convergence_study(a.case, a.n_t, a.min_order..=a.max_order).map_err(|e| match e {
        ConvergenceError::TriangleCount(_) | ConvergenceError::Quadrature(_) => CliError::Usage(e.to_string()),
        e => CliError::Numerical(e.to_string()),
    })?;
    let mut rows = vec![Record {
        method: "analytic",
        order: None,
        points_per_triangle: 0,
        l2_error_value: study.analytic.l2_value,
        l2_error_gradient: study.analytic.l2_gradient,
    }];
    rows.extend(study.quadrature.iter().map(|r| Record {
        method: "quadrature",
        order: r.order,
        points_per_triangle: r.points_per_triangle,
        l2_error_value: r.l2_value,
        l2_error_gradient: r.l2_gradient,
    }));
    let (pv, pg) = study.plateau();
    let summary = Summary {
        case: format!("{:?}", study.case).to_lowercase(),
        triangles: study.triangles,
        analytic_value: study.analytic.l2_value,
        analytic_gradient: study.analytic.l2_gradient,
        plateau_value: pv,
        plateau_gradient: pg,
    };
    output::write_table(a.out.output.as_deref(), a.out.json, &summary, "rows", &rows)?;
    eprintln!(
        "{} n_t={}: analytic {:.2e}/{:.2e}, quadrature plateau {:.2e}/{:.2e} (value/gradient)",
        summary.case, summary.triangles, summary.analytic_value, summary.analytic_gradient, pv, pg
    );
    Ok(())
}
