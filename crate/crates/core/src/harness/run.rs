//! Executes each analysis of a scenario and writes its CSV files.

use super::scenario::{conclusion_kind, default_deficiency_name, parse_target, Analysis, Prepared};
use crate::dominance::{self, ConclusionKind, ConditionKind, Reference};
use crate::funcexpr::FunctionExpr;
use crate::nevanlinna::{self, GrowthSeries};
use crate::order_reduction::{self, build_ck};
use crate::samples::residual_samples;
use crate::solvers::{self, GrowthOptions};
use num_complex::Complex64 as C;
use std::fmt::Write;

/// Files produced by one analysis, as (name, contents).
pub(crate) type Files = Vec<(String, String)>;

pub(crate) fn f64s(x: f64) -> String {
    format!("{x:.16e}")
}

pub(crate) fn run_analysis(p: &Prepared, a: Analysis) -> Result<Files, String> {
    match a {
        Analysis::Residual => residual(p),
        Analysis::Growth => growth(p),
        Analysis::Dominance => dominance(p),
        Analysis::Reduce => reduce(p),
        Analysis::Deficiency => deficiency(p),
        Analysis::Curve => curve(p),
        Analysis::Conclusion => conclusion(p),
    }
}

fn residual(p: &Prepared) -> Result<Files, String> {
    let eq = p.equation();
    let samples = residual_samples(eq.domain(), p.scenario.seed);
    let mut s = String::from("function,max,evaluated,skipped,trivial\n");
    for (i, f) in p.solutions.iter().enumerate() {
        let r = solvers::equation_residual(&eq, f, &samples);
        let evaluated = r.values.iter().filter(|v| v.is_some()).count();
        let _ = writeln!(s, "f{i},{},{evaluated},{},{}", f64s(r.max), r.skipped, u8::from(r.trivial));
    }
    Ok(vec![("residual.csv".into(), s)])
}

fn ic_of(values: &Option<Vec<f64>>, n: usize) -> Vec<C> {
    match values {
        Some(v) => v.iter().map(|&x| C::new(x, 0.0)).collect(),
        None => vec![C::new(1.0, 0.0); n],
    }
}

fn numeric_growth(p: &Prepared, ic: &[C], radii: &[f64], spec: &str, theta_count: usize) -> Result<GrowthSeries, String> {
    let opts = GrowthOptions {
        theta_count,
        max_theta_count: 4 * theta_count,
        ray_tol: p.scenario.tol.min(1e-9),
        ..GrowthOptions::default()
    };
    let g = solvers::solution_growth(&p.equation(), ic, radii, spec, opts).map_err(|e| e.to_string())?;
    Ok(g.series)
}

fn growth(p: &Prepared) -> Result<Files, String> {
    let sec = &p.scenario.growth;
    let grid = p.grid_for(&sec.grid);
    let mut files = Vec::new();
    for name in sec.names(&p.scenario) {
        let f = p.lookup(&name).ok_or_else(|| format!("unknown function '{name}'"))?;
        let series = nevanlinna::growth_series(&f, grid.radii(), grid.spec(), p.scenario.tol)
            .map_err(|e| format!("{name}: {e}"))?;
        files.push((format!("growth_{name}.csv"), series.to_csv()));
    }
    if sec.numeric {
        let ic = ic_of(&sec.ic, p.n());
        let series = numeric_growth(p, &ic, grid.radii(), grid.spec(), sec.theta_count)?;
        files.push(("growth_solution.csv".into(), series.to_csv()));
    }
    Ok(files)
}

fn dominance(p: &Prepared) -> Result<Files, String> {
    let sec = &p.scenario.dominance;
    let grid = p.grid_for(&sec.grid);
    let mut files = Vec::new();
    for k in &sec.kinds {
        let kind = ConditionKind::parse(k).ok_or_else(|| format!("unknown condition kind '{k}'"))?;
        let rep = dominance::find_p(&p.coefficients, kind, grid.radii(), p.scenario.trim, p.scenario.tol)
            .map_err(|e| format!("{k}: {e}"))?;
        files.push((format!("dominance_{}.csv", kind.name()), rep.to_csv()));
    }
    Ok(files)
}

fn reduce(p: &Prepared) -> Result<Files, String> {
    let sec = &p.scenario.reduce;
    let n = p.n();
    let eq = p.equation();
    let samples = residual_samples(eq.domain(), p.scenario.seed);
    let ps: Vec<usize> = sec.p.clone().unwrap_or_else(|| (0..n).collect());
    let table = if sec.numeric {
        None
    } else {
        Some(order_reduction::reduce_base(&p.solutions, p.kind).map_err(|e| e.to_string())?)
    };
    let mut s = String::from("p,sample,residual\n");
    let mut files = Vec::new();
    for &pp in &ps {
        let rep = match &table {
            Some(t) => order_reduction::identity_residual(&p.coefficients, t, pp, &samples),
            None => order_reduction::identity_residual_numeric(&eq, pp, &samples, p.scenario.tol.min(1e-10)),
        }
        .map_err(|e| format!("p = {pp}: {e}"))?;
        for (i, v) in rep.values.iter().enumerate() {
            let _ = writeln!(s, "{pp},{i},{}", v.map(f64s).unwrap_or_default());
        }
        files.push((format!("reduce_ck_p{pp}.txt"), build_ck(n, pp).to_text()));
    }
    files.insert(0, ("reduce.csv".into(), s));
    Ok(files)
}

fn deficiency(p: &Prepared) -> Result<Files, String> {
    let sec = &p.scenario.deficiency;
    let grid = p.grid_for(&sec.grid);
    let name = sec.function.clone().unwrap_or_else(|| default_deficiency_name(&p.scenario));
    let f = p.lookup(&name).ok_or_else(|| format!("unknown function '{name}'"))?;
    let mut files = Vec::new();
    for t in &sec.targets {
        let target = parse_target(t).ok_or_else(|| format!("bad target '{t}'"))?;
        let rep = nevanlinna::deficiency(&f, target, grid.radii(), p.scenario.tol, p.scenario.trim)
            .map_err(|e| format!("target {t}: {e}"))?;
        let mut s = String::from("r,m,T,ratio\n");
        for i in 0..rep.radii.len() {
            let _ = writeln!(
                s,
                "{},{},{},{}",
                f64s(rep.radii[i]),
                f64s(rep.proximity[i]),
                f64s(rep.characteristic[i]),
                f64s(rep.ratios[i])
            );
        }
        files.push((format!("deficiency_{}.csv", t.trim()), s));
    }
    Ok(files)
}

fn curve(p: &Prepared) -> Result<Files, String> {
    let sec = &p.scenario.curve;
    let grid = p.grid_for(&sec.grid);
    let ap = &p.coefficients[sec.p];
    let mc = nevanlinna::trace_max_curve(ap, grid.radii()).map_err(|e| e.to_string())?;
    let rep = dominance::curve_dominance(&p.coefficients, sec.p, sec.eta.as_deref(), &mc, p.scenario.trim)
        .map_err(|e| e.to_string())?;
    let mut s = String::from("r,theta,logM,jump,ratio\n");
    for i in 0..mc.radii.len() {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            f64s(mc.radii[i]),
            f64s(mc.thetas[i]),
            f64s(mc.log_m[i]),
            u8::from(mc.jumps[i]),
            f64s(rep.ratios[i])
        );
    }
    Ok(vec![("curve.csv".into(), s)])
}

fn reference(p: &Prepared, kind: ConclusionKind, ap: &FunctionExpr, radii: &[f64]) -> Result<Reference, String> {
    let tol = p.scenario.tol;
    let n = p.n();
    let pp = p.scenario.conclusion.p;
    Ok(match kind {
        ConclusionKind::LogTOverT | ConclusionKind::LogTOverLogM => {
            let s = dominance::coefficient_series(ap, radii, tol).map_err(|e| e.to_string())?;
            Reference::from_series(&s, kind)
        }
        ConclusionKind::LogTOverLogCircle => Reference::integral(ap, n, pp, false, radii, tol),
        ConclusionKind::LogTOverLogArea => Reference::integral(ap, n, pp, true, radii, tol),
    })
}

fn conclusion(p: &Prepared) -> Result<Files, String> {
    let sec = &p.scenario.conclusion;
    let grid = p.grid_for(&sec.grid);
    let kind = conclusion_kind(&sec.kind).ok_or_else(|| format!("unknown conclusion kind '{}'", sec.kind))?;
    let refr = reference(p, kind, &p.coefficients[sec.p], grid.radii())?;
    let mut sols: Vec<(String, GrowthSeries)> = Vec::new();
    if sec.numeric {
        let ic = ic_of(&None, p.n());
        sols.push(("generic".into(), numeric_growth(p, &ic, grid.radii(), grid.spec(), sec.theta_count)?));
    } else {
        for (i, f) in p.solutions.iter().enumerate() {
            let s = nevanlinna::growth_series(f, grid.radii(), grid.spec(), p.scenario.tol)
                .map_err(|e| format!("f{i}: {e}"))?;
            sols.push((format!("f{i}"), s));
        }
    }
    let mut files = Vec::new();
    for (name, series) in sols {
        let table = dominance::conclusion_check(&series, &refr, None, p.scenario.trim);
        let mut s = String::from("r,logT,reference,ratio\n");
        for (i, rec) in series.records.iter().enumerate() {
            let lt = rec.t.filter(|t| *t > 0.0).map(f64::ln).unwrap_or(f64::NAN);
            let rv = refr.at(rec.r);
            let _ = writeln!(s, "{},{},{},{}", f64s(rec.r), f64s(lt), f64s(rv), f64s(table.ratios[i]));
        }
        files.push((format!("conclusion_{name}.csv"), s));
    }
    Ok(files)
}
