//! Builds `report.txt` from an output directory. Every verdict is computed
//! from the emitted CSVs and the copied scenario, so `verify` can redo it.

use super::scenario::{conclusion_kind, domain_name, Analysis, Scenario};
use crate::dominance::{ConditionKind, Window, DECISION_MARGIN};
use crate::funcexpr::Domain;
use crate::nevanlinna::{self, tail_liminf, tail_limsup, GrowthSeries, DEFAULT_ADMISSIBILITY_THRESHOLD};
use std::fmt::Write;
use std::fs;
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub text: String,
    /// residual or identity checks above tolerance
    pub hard_failures: usize,
    /// analyses that raised an error
    pub errors: usize,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.hard_failures == 0 && self.errors == 0
    }
}

type Rows = Vec<Vec<String>>;

fn read_csv(dir: &Path, name: &str) -> Result<Rows, String> {
    let text = fs::read_to_string(dir.join(name)).map_err(|e| format!("{name}: {e}"))?;
    Ok(text.lines().skip(1).filter(|l| !l.is_empty()).map(|l| l.split(',').map(str::to_string).collect()).collect())
}

fn num(s: &str) -> f64 {
    if s.is_empty() {
        f64::NAN
    } else {
        s.parse().unwrap_or(f64::NAN)
    }
}

fn e(x: f64) -> String {
    format!("{x:.4e}")
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

/// Recomputes the report for the scenario stored in `dir`.
pub fn build_report(dir: &Path) -> Result<Report, String> {
    let toml = fs::read_to_string(dir.join("scenario.toml")).map_err(|e| format!("scenario.toml: {e}"))?;
    let sc = Scenario::from_toml(&toml).map_err(|e| e.to_string())?;
    let mut out = String::new();
    let _ = writeln!(out, "scenario: {}", sc.name);
    let _ = writeln!(out, "hash: {}", sc.hash());
    let _ = writeln!(out, "domain: {}", domain_name(sc.domain));
    let _ = writeln!(out, "operator: {:?}", sc.operator);
    let mut rep = Report { text: String::new(), hard_failures: 0, errors: 0 };
    for &a in &sc.analyses {
        let _ = writeln!(out);
        let err_file = dir.join(format!("{}.error", a.name()));
        if err_file.exists() {
            let msg = fs::read_to_string(&err_file).unwrap_or_default();
            let _ = writeln!(out, "[{}] ERROR", a.name());
            let _ = writeln!(out, "  {}", msg.trim());
            rep.errors += 1;
            continue;
        }
        let body = match section(dir, &sc, a, &mut rep) {
            Ok(b) => b,
            Err(m) => {
                rep.errors += 1;
                format!("[{}] ERROR\n  {m}\n", a.name())
            }
        };
        out.push_str(&body);
    }
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "overall: {} ({} hard failures, {} errors)",
        if rep.hard_failures == 0 && rep.errors == 0 { "PASS" } else { "FAIL" },
        rep.hard_failures,
        rep.errors
    );
    rep.text = out;
    Ok(rep)
}

fn section(dir: &Path, sc: &Scenario, a: Analysis, rep: &mut Report) -> Result<String, String> {
    match a {
        Analysis::Residual => residual(dir, sc, rep),
        Analysis::Growth => growth(dir, sc),
        Analysis::Dominance => dominance(dir, sc),
        Analysis::Reduce => reduce(dir, sc, rep),
        Analysis::Deficiency => deficiency(dir, sc),
        Analysis::Curve => curve(dir, sc),
        Analysis::Conclusion => conclusion(dir, sc),
    }
}

fn residual(dir: &Path, sc: &Scenario, rep: &mut Report) -> Result<String, String> {
    let rows = read_csv(dir, "residual.csv")?;
    let mut body = String::new();
    let mut fails = 0;
    for r in &rows {
        let max = num(&r[1]);
        let trivial = r[4] == "1";
        let ok = !trivial && max < sc.residual_tol;
        if !ok {
            fails += 1;
        }
        let note = if trivial { "  zero candidate" } else { "" };
        let _ = writeln!(body, "  {}  max {}  ({} evaluated, {} skipped)  {}{note}", r[0], e(max), r[2], r[3], pass(ok));
    }
    rep.hard_failures += fails;
    Ok(format!("[residual] {} (tol {})\n{body}", if fails == 0 { "PASS" } else { "FAIL" }, e(sc.residual_tol)))
}

fn growth_line(name: &str, s: &GrowthSeries, domain: Domain) -> String {
    let last = s.records.iter().rev().find(|r| r.t.is_some());
    let missing = s.records.iter().filter(|r| r.t.is_none()).count();
    let mut l = match last {
        Some(r) => format!(
            "  {name}  r {}  T {}  logM {}",
            e(r.r),
            e(r.t.unwrap_or(f64::NAN)),
            e(r.log_m.unwrap_or(f64::NAN))
        ),
        None => format!("  {name}  no radius succeeded"),
    };
    match domain {
        Domain::Plane => {
            let h = nevanlinna::hyper_order(s);
            let _ = write!(l, "  hyper-order {}", e(h.estimate));
            if h.low_confidence {
                l.push_str(" (low confidence)");
            }
        }
        Domain::Disc => {
            let ok: Vec<_> = s.records.iter().filter(|r| r.t.is_some()).collect();
            let radii: Vec<f64> = ok.iter().map(|r| r.r).collect();
            let ratios: Vec<f64> = ok.iter().map(|r| r.t.unwrap() / -(1.0 - r.r).ln()).collect();
            if ratios.is_empty() {
                l.push_str("  admissibility unknown");
            } else {
                let adm = nevanlinna::admissibility_from_ratios(&radii, ratios, DEFAULT_ADMISSIBILITY_THRESHOLD);
                let _ = write!(
                    l,
                    "  admissibility index {} {}",
                    e(adm.index),
                    if adm.admissible { "admissible" } else { "not admissible" }
                );
                if adm.coarse_grid {
                    l.push_str(" (coarse grid)");
                }
            }
        }
    }
    if missing > 0 {
        let _ = write!(l, "  ({missing} radii missing)");
    }
    l.push('\n');
    l
}

fn growth(dir: &Path, sc: &Scenario) -> Result<String, String> {
    let mut body = String::from("[growth]\n");
    let mut names = sc.growth.names(sc);
    if sc.growth.numeric {
        names.push("solution".into());
    }
    for name in names {
        let file = format!("growth_{name}.csv");
        let text = fs::read_to_string(dir.join(&file)).map_err(|e| format!("{file}: {e}"))?;
        let s = GrowthSeries::from_csv(&text, sc.domain).map_err(|e| format!("{file}: {e}"))?;
        body.push_str(&growth_line(&name, &s, sc.domain));
    }
    Ok(body)
}

fn dominance(dir: &Path, sc: &Scenario) -> Result<String, String> {
    let mut body = String::from("[dominance]\n");
    for k in &sc.dominance.kinds {
        let kind = ConditionKind::parse(k).ok_or_else(|| format!("unknown condition kind '{k}'"))?;
        let rows = read_csv(dir, &format!("dominance_{}.csv", kind.name()))?;
        let mut ps: Vec<(usize, Vec<f64>)> = Vec::new();
        for r in &rows {
            let p: usize = r[0].parse().map_err(|_| format!("bad index '{}'", r[0]))?;
            match ps.last_mut() {
                Some((q, v)) if *q == p => v.push(num(&r[2])),
                _ => ps.push((p, vec![num(&r[2])])),
            }
        }
        let mut lines = String::new();
        let mut selected = None;
        for (p, ratios) in &ps {
            let est = tail_limsup(ratios, sc.trim).trimmed;
            let holds = est < 1.0 - DECISION_MARGIN;
            if holds && selected.is_none() {
                selected = Some(*p);
            }
            let _ = writeln!(lines, "    p = {p}  limsup {}  {}", e(est), if holds { "holds" } else { "fails" });
        }
        let sel = selected.map_or("none".to_string(), |p| p.to_string());
        let _ = writeln!(body, "  {}  selected p = {sel}", kind.name());
        body.push_str(&lines);
    }
    Ok(body)
}

fn reduce(dir: &Path, sc: &Scenario, rep: &mut Report) -> Result<String, String> {
    let rows = read_csv(dir, "reduce.csv")?;
    let mut ps: Vec<(String, f64, usize, usize)> = Vec::new();
    for r in &rows {
        let v = num(&r[2]);
        if ps.last().is_none_or(|x| x.0 != r[0]) {
            ps.push((r[0].clone(), 0.0, 0, 0));
        }
        let x = ps.last_mut().unwrap();
        if v.is_nan() {
            x.3 += 1;
        } else {
            x.1 = x.1.max(v);
            x.2 += 1;
        }
    }
    let mut body = String::new();
    let mut fails = 0;
    for (p, max, count, skipped) in &ps {
        let ok = *count > 0 && *max < sc.residual_tol;
        if !ok {
            fails += 1;
        }
        let _ = writeln!(body, "  p = {p}  max {}  ({count} evaluated, {skipped} skipped)  {}", e(*max), pass(ok));
    }
    rep.hard_failures += fails;
    let base = if sc.reduce.numeric { "numeric base" } else { "closed-form base" };
    Ok(format!("[reduce] {} ({base}, tol {})\n{body}", if fails == 0 { "PASS" } else { "FAIL" }, e(sc.residual_tol)))
}

fn deficiency(dir: &Path, sc: &Scenario) -> Result<String, String> {
    let name = sc.deficiency.function.clone().unwrap_or_else(|| super::scenario::default_deficiency_name(sc));
    let mut body = format!("[deficiency] {name}\n");
    for t in &sc.deficiency.targets {
        let rows = read_csv(dir, &format!("deficiency_{}.csv", t.trim()))?;
        let ratios: Vec<f64> = rows.iter().map(|r| num(&r[3])).collect();
        let est = tail_liminf(&ratios, sc.trim);
        let _ = writeln!(body, "  a = {}  delta {}  (untrimmed {})", t.trim(), e(est.trimmed), e(est.untrimmed));
    }
    Ok(body)
}

fn curve(dir: &Path, sc: &Scenario) -> Result<String, String> {
    let rows = read_csv(dir, "curve.csv")?;
    let ratios: Vec<f64> = rows.iter().map(|r| num(&r[4])).collect();
    let jumps = rows.iter().any(|r| r[3] == "1");
    let est = tail_limsup(&ratios, sc.trim).trimmed;
    let holds = est < 1.0 - DECISION_MARGIN;
    let mut body = format!("[curve] p = {}\n", sc.curve.p);
    let _ = write!(body, "  limsup {}  {}", e(est), if holds { "holds" } else { "fails" });
    if jumps {
        body.push_str("  (low confidence: curve jumps)");
    }
    body.push('\n');
    Ok(body)
}

fn conclusion(dir: &Path, sc: &Scenario) -> Result<String, String> {
    let sec = &sc.conclusion;
    let kind = conclusion_kind(&sec.kind).ok_or_else(|| format!("unknown conclusion kind '{}'", sec.kind))?;
    let d = kind.default_window();
    let window = Window { lo: sec.window_lo.unwrap_or(d.lo), hi: sec.window_hi.or(d.hi) };
    let hi = window.hi.map_or("inf".to_string(), e);
    let mut body = format!("[conclusion] {} p = {}  window [{}, {hi}]\n", kind.name(), sec.p, e(window.lo));
    let names: Vec<String> =
        if sec.numeric { vec!["generic".into()] } else { (0..sc.solutions.len()).map(|i| format!("f{i}")).collect() };
    for name in names {
        let rows = read_csv(dir, &format!("conclusion_{name}.csv"))?;
        let ratios: Vec<f64> = rows.iter().map(|r| num(&r[3])).collect();
        let lo = tail_liminf(&ratios, sc.trim).trimmed;
        let up = tail_limsup(&ratios, sc.trim).trimmed;
        let inside = lo >= window.lo && window.hi.is_none_or(|h| up <= h);
        let _ = writeln!(
            body,
            "  {name}  liminf {}  limsup {}  {}",
            e(lo),
            e(up),
            if inside { "within window" } else { "outside window" }
        );
    }
    Ok(body)
}
