use std::sync::Arc;

use serde_json::{json, Value};

use multweyl::characters::{mixed_char_sum, CharGroup};
use multweyl::congruence::{build_root_table, IntPoly, Irreducibility, RootTable};
use multweyl::equidist::{joint_sequence, joint_weyl_sum, star_discrepancy_2d};
use multweyl::multfunc::{default_grid_size, extremal_construct, MultiplicativeFunction};
use multweyl::partition::{build_partition, verify_partition};
use multweyl::phase::{dirichlet_approx, parse_real, PolyPhase};
use multweyl::vinogradov::{jrd, jrd_intervals, jrd_primes};
use multweyl::weylsum::{bound_report, weyl_sum};
use multweyl::PrimeSieve;

use crate::args::*;
use crate::error::CliError;

/// Rows for CSV output.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

/// Result of one subcommand: the JSON `result` object and, for tabular
/// commands, the CSV rows.
pub struct Artifact {
    pub result: Value,
    pub table: Option<Table>,
}

impl Artifact {
    fn value(result: Value) -> Self {
        Artifact {
            result,
            table: None,
        }
    }
}

type Out = Result<Artifact, CliError>;

fn required<T: Clone>(v: &Option<T>, name: &str) -> Result<T, CliError> {
    v.clone()
        .ok_or_else(|| CliError::param(format!("missing required parameter '{name}'")))
}

fn phase(expr: &str) -> Result<PolyPhase, CliError> {
    Ok(PolyPhase::parse(expr)?)
}

/// A real given as a decimal literal or one of the tokens sqrt:n, golden, pi.
fn real(name: &str, token: &str) -> Result<f64, CliError> {
    let t = token.trim();
    let value = if let Some(n) = t.strip_prefix("sqrt:") {
        n.parse::<u64>().ok().map(|n| (n as f64).sqrt())
    } else if t == "golden" {
        Some((1.0 + 5f64.sqrt()) / 2.0)
    } else if t == "pi" {
        Some(std::f64::consts::PI)
    } else if t.chars().all(|c| c.is_ascii_digit() || "+-.eE".contains(c)) {
        t.parse::<f64>().ok()
    } else {
        None
    };
    value
        .filter(|v| v.is_finite())
        .ok_or_else(|| CliError::param(format!("{name}: '{token}' is not a real number")))
}

fn sieve(n: u64) -> Result<PrimeSieve, CliError> {
    Ok(PrimeSieve::new(n.max(2))?)
}

fn function(name: &str) -> Result<MultiplicativeFunction, CliError> {
    Ok(MultiplicativeFunction::by_name(name)?)
}

fn fmt_c(re: f64, im: f64) -> Value {
    json!({ "re": re, "im": im })
}

pub fn primes(p: &mut PrimesParams) -> Out {
    let n = required(&p.n, "N")?;
    let s = sieve(n)?;
    let list = s.primes_between(2, n);
    let mut result = json!({ "N": n, "count": list.len(), "largest": list.last() });
    let table = if p.list {
        result["primes"] = json!(list);
        Some(Table {
            header: vec!["p"],
            rows: list.iter().map(|q| vec![q.to_string()]).collect(),
        })
    } else {
        None
    };
    Ok(Artifact { result, table })
}

pub fn sum(p: &mut SumParams) -> Out {
    let fname = p.f.get_or_insert_with(|| "mobius".into()).clone();
    let expr = required(&p.phase, "phase")?;
    let n = required(&p.n, "N")?;
    let f = phase(&expr)?;
    let s = sieve(n)?;
    let values = if fname == "extremal" {
        let r = extremal_construct(&f, &s, n, default_grid_size(n))?;
        r.f.sieve_values(&s, n)?
    } else {
        function(&fname)?.sieve_values(&s, n)?
    };
    match &p.report {
        Some(spec) => {
            let parts: Vec<&str> = spec.split(',').collect();
            if parts.len() != 2 {
                return Err(CliError::param("--report takes \"r,A\""));
            }
            let r: u32 = parts[0]
                .trim()
                .parse()
                .map_err(|_| CliError::param(format!("--report: bad r '{}'", parts[0])))?;
            let a = real("A", parts[1])?;
            let report = bound_report(&values, &f, n, r, a, None)?;
            let mut v =
                serde_json::to_value(&report).map_err(|e| CliError::param(e.to_string()))?;
            v["C"] = json!(report.c());
            Ok(Artifact::value(v))
        }
        None => {
            let total = weyl_sum(&values, &f, n)?;
            Ok(Artifact::value(json!({
                "N": n,
                "sum_re": total.re,
                "sum_im": total.im,
                "abs": total.norm(),
                "normalized": total.norm() / n as f64,
            })))
        }
    }
}

pub fn sharpness(p: &mut SharpnessParams) -> Out {
    let expr = required(&p.phase, "phase")?;
    let n = required(&p.n, "N")?;
    let grid = *p.grid.get_or_insert(default_grid_size(n) as u64);
    let s = sieve(n)?;
    let r = extremal_construct(&phase(&expr)?, &s, n, grid as usize)?;
    let abs = r.sum_value.norm();
    Ok(Artifact::value(json!({
        "N": n,
        "z0": fmt_c(r.z0.re, r.z0.im),
        "angle": r.angle,
        "sum_re": r.sum_value.re,
        "sum_im": r.sum_value.im,
        "abs": abs,
        "lower_bound": r.lower_bound as u64,
        "log_bound": r.log_bound,
        "exceeds_lower_bound": abs >= r.lower_bound,
        "exceeds_log_bound": abs >= r.log_bound,
        "g_at_zero": fmt_c(r.g_at_zero.re, r.g_at_zero.im),
        "g_at_z0": fmt_c(r.g_at_z0.re, r.g_at_z0.im),
        "grid_max": r.grid_max,
        "grid_size": r.grid_size,
        "degree": r.g_coefficients.len().saturating_sub(1),
        "warning": r.warning,
    })))
}

pub fn partition(p: &mut PartitionParams) -> Out {
    let n = required(&p.n, "N")?;
    let s_text = required(&p.s, "s")?;
    let s_val = real("s", &s_text)?;
    let weight = p.weight.get_or_insert_with(|| "unit".into()).clone();
    let scheme = build_partition(n, s_val)?;
    let sv = sieve(n)?;
    let report = match weight.as_str() {
        "unit" => verify_partition(&scheme, &sv, |_, _| 1.0.into())?,
        "phase" => {
            let fname = p.f.get_or_insert_with(|| "mobius".into()).clone();
            let expr = p.phase.get_or_insert_with(|| "sqrt:2*x".into()).clone();
            let f = phase(&expr)?;
            let values = function(&fname)?.sieve_values(&sv, n)?;
            verify_partition(&scheme, &sv, |q, m| {
                values[m as usize] * (q as f64).ln() * f.exp_at((q * m) as i128)
            })?
        }
        other => {
            return Err(CliError::param(format!(
                "unknown weight '{other}' (unit or phase)"
            )))
        }
    };
    let v = serde_json::to_value(&report).map_err(|e| CliError::param(e.to_string()))?;
    Ok(Artifact::value(v))
}

fn read_intervals(path: &str) -> Result<Vec<(u64, u64)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::param(format!("cannot read {path}: {e}")))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let nums: Vec<u64> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<u64>())
            .collect::<Result<_, _>>()
            .map_err(|_| CliError::param(format!("{path}:{}: expected two integers", i + 1)))?;
        if nums.len() != 2 {
            return Err(CliError::param(format!(
                "{path}:{}: expected two integers",
                i + 1
            )));
        }
        out.push((nums[0], nums[1]));
    }
    if out.is_empty() {
        return Err(CliError::param(format!("{path}: no intervals")));
    }
    Ok(out)
}

pub fn vmvt(p: &mut VmvtParams) -> Out {
    let r = required(&p.r, "r")?;
    let d = required(&p.d, "d")?;
    let modes = p.v.is_some() as u8 + p.primes.is_some() as u8 + p.intervals.is_some() as u8;
    if modes != 1 {
        return Err(CliError::param(
            "give exactly one of --V, --primes, --intervals",
        ));
    }
    if let Some(v) = p.v {
        // V, V/2, V/4, V/8 ascending, each slope against the previous row
        let mut vs: Vec<u64> = (0..4).map(|k| v >> k).filter(|&x| x >= 2).collect();
        vs.reverse();
        if vs.is_empty() {
            vs.push(v);
        }
        let mut rows = Vec::new();
        let mut table_rows = Vec::new();
        let mut prev: Option<(u64, u128)> = None;
        let mut last = 0u128;
        for &x in &vs {
            let j = jrd(x, r, d)?;
            let slope =
                prev.map(|(pv, pj)| (j as f64 / pj as f64).ln() / (x as f64 / pv as f64).ln());
            rows.push(json!({ "V": x, "J": j, "slope": slope }));
            table_rows.push(vec![
                x.to_string(),
                j.to_string(),
                slope.map(|s| s.to_string()).unwrap_or_default(),
            ]);
            prev = Some((x, j));
            last = j;
        }
        let reference = 2.0 * r as f64 - (d * (d + 1)) as f64 / 2.0;
        return Ok(Artifact {
            result: json!({ "J": last, "slope_table": rows, "reference_exponent": reference }),
            table: Some(Table {
                header: vec!["V", "J", "slope"],
                rows: table_rows,
            }),
        });
    }
    if let Some(spec) = &p.primes {
        let parts: Vec<u64> = spec
            .split(',')
            .map(|t| t.trim().parse::<u64>())
            .collect::<Result<_, _>>()
            .map_err(|_| CliError::param("--primes takes \"Y,X\""))?;
        if parts.len() != 2 {
            return Err(CliError::param("--primes takes \"Y,X\""));
        }
        let (y, x) = (parts[0], parts[1]);
        let s = sieve(x)?;
        let j = jrd_primes(y, x, r, d, &s)?;
        return Ok(Artifact::value(
            json!({ "J": j, "Y": y, "X": x, "slope_table": [] }),
        ));
    }
    let path = p.intervals.clone().unwrap();
    let intervals = read_intervals(&path)?;
    let j = jrd_intervals(&intervals, r, d)?;
    Ok(Artifact::value(
        json!({ "J": j, "intervals": intervals, "slope_table": [] }),
    ))
}

fn checked_poly(expr: &str, assume: bool) -> Result<(IntPoly, Irreducibility), CliError> {
    let poly = IntPoly::parse(expr)?;
    let cert = poly.irreducibility_check()?;
    if matches!(cert, Irreducibility::Asserted) && !assume {
        return Err(CliError::param(format!(
            "could not certify that {poly} is irreducible; pass --assume-irreducible to proceed"
        )));
    }
    Ok((poly, cert))
}

fn table_for(poly: &IntPoly, n: u64, allow_large: bool) -> Result<RootTable, CliError> {
    Ok(build_root_table(poly, &sieve(n)?, n, allow_large)?)
}

pub fn roots(p: &mut RootsParams) -> Out {
    let expr = required(&p.poly, "poly")?;
    let n = required(&p.n, "N")?;
    let (poly, cert) = checked_poly(&expr, p.assume_irreducible)?;
    let table = table_for(&poly, n, p.allow_large)?;
    let mut rows = Vec::with_capacity(n as usize);
    let mut json_rows = Vec::with_capacity(n as usize);
    for m in 1..=n {
        let r = table.roots(m);
        let joined = r
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        rows.push(vec![m.to_string(), r.len().to_string(), joined]);
        json_rows.push(json!({ "n": m, "rho": r.len(), "roots": r }));
    }
    Ok(Artifact {
        result: json!({
            "poly": poly.to_string(),
            "discriminant": poly.discriminant().to_string(),
            "irreducibility": cert,
            "N": n,
            "rho_sum": table.rho_sum(n),
            "mean_ratio": table.rho_sum(n) as f64 / n as f64,
            "rows": json_rows,
        }),
        table: Some(Table {
            header: vec!["n", "rho", "roots"],
            rows,
        }),
    })
}

pub fn equidist(p: &mut EquidistParams) -> Out {
    let expr = required(&p.poly, "poly")?;
    let phase_expr = required(&p.phase, "phase")?;
    let n = required(&p.n, "N")?;
    let h1 = *p.h1.get_or_insert(1);
    let h2 = *p.h2.get_or_insert(0);
    let grid = *p.grid.get_or_insert(64);
    let (poly, cert) = checked_poly(&expr, p.assume_irreducible)?;
    let f = phase(&phase_expr)?;
    let table = table_for(&poly, n, p.allow_large)?;
    let mut checkpoints: Vec<u64> = (2..).map(|k| 10u64.pow(k)).take_while(|&x| x < n).collect();
    checkpoints.push(n);
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    for &x in &checkpoints {
        let count = table.rho_sum(x);
        let w = joint_weyl_sum(&table, &f, x, h1, h2)?;
        let normalized = if count == 0 {
            0.0
        } else {
            w.norm() / count as f64
        };
        let disc = if p.discrepancy && count > 0 {
            Some(star_discrepancy_2d(&joint_sequence(&table, &f, x)?, grid)?)
        } else {
            None
        };
        rows.push(vec![
            x.to_string(),
            normalized.to_string(),
            disc.as_ref()
                .map(|d| d.grid_value.to_string())
                .unwrap_or_default(),
        ]);
        json_rows.push(json!({
            "N": x,
            "points": count,
            "w_re": w.re,
            "w_im": w.im,
            "normalized": normalized,
            "discrepancy": disc.as_ref().map(|d| d.grid_value),
            "discrepancy_bound": disc.as_ref().map(|d| d.upper_bound()),
        }));
    }
    Ok(Artifact {
        result: json!({
            "poly": poly.to_string(),
            "irreducibility": cert,
            "h1": h1,
            "h2": h2,
            "rows": json_rows,
        }),
        table: Some(Table {
            header: vec!["N", "normalized", "discrepancy"],
            rows,
        }),
    })
}

pub fn charsum(p: &mut CharsumParams) -> Out {
    let k = required(&p.k, "k")?;
    let index = *p.chi_index.get_or_insert(0);
    let expr = required(&p.phase, "phase")?;
    let n = required(&p.n, "N")?;
    let group = Arc::new(CharGroup::new(k)?);
    if index >= group.phi() {
        return Err(CliError::param(format!(
            "chi-index {index} out of range: there are {} characters mod {k}",
            group.phi()
        )));
    }
    let chi = group.character(index);
    let total = mixed_char_sum(&chi, &phase(&expr)?, n)?;
    Ok(Artifact::value(json!({
        "k": k,
        "chi": {
            "index": index,
            "exponents": chi.exponents(),
            "orders": group.orders(),
            "generators": group.generators(),
            "principal": chi.is_principal(),
            "conductor": chi.conductor(),
        },
        "N": n,
        "sum_re": total.re,
        "sum_im": total.im,
        "normalized": total.norm() / n.max(1) as f64,
    })))
}

pub fn approx(p: &mut ApproxParams) -> Out {
    let alpha = required(&p.alpha, "alpha")?;
    let r_text = required(&p.r, "R")?;
    let r_bound = real("R", &r_text)?;
    let frac = parse_real(&alpha)?;
    let ap = dirichlet_approx(frac, r_bound)?;
    let mut v = serde_json::to_value(ap).map_err(|e| CliError::param(e.to_string()))?;
    v["alpha_frac"] = json!(frac.to_f64());
    v["certified"] = json!(ap.certified());
    Ok(Artifact::value(v))
}
