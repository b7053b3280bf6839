//! Sweep tables: the large-level comparison across levels or heights, and
//! the deformation profile of the assembled display.  Rows are computed in
//! parallel but always emitted in input order.

use rayon::prelude::*;

use regl4_core::i2::{i2_asymptotic_report, xi_assembly};

use crate::config::{conrey_label, resolve_character, RunConfig};
use crate::format::{csv_line, f64_str};
use crate::CliError;

/// Which parameter varies down the table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    Level,
    Height,
    Deformation,
}

impl Axis {
    pub fn parse(s: &str) -> Result<Axis, CliError> {
        match s.to_ascii_lowercase().as_str() {
            "n" => Ok(Axis::Level),
            "t" => Ok(Axis::Height),
            "eta" => Ok(Axis::Deformation),
            other => Err(CliError::Usage(format!(
                "unknown sweep axis `{other}`; expected n, t, or eta"
            ))),
        }
    }
}

const REPORT_HEADER: [&str; 10] = [
    "level",
    "char",
    "T",
    "i2_constant_re",
    "i2_constant_im",
    "main_level",
    "l_second_term",
    "remainder",
    "envelope",
    "ratio",
];

const DEFORMATION_HEADER: [&str; 10] = [
    "level",
    "char",
    "T",
    "eta",
    "xi_total_re",
    "xi_total_im",
    "term1_abs",
    "term2_abs",
    "term3_abs",
    "term4_abs",
];

fn report_row(cfg: &RunConfig, level: u64, t: f64) -> Result<String, CliError> {
    let chi = resolve_character(&cfg.character, level)?;
    let scen = cfg.scenario_at(level, t)?;
    let rep = i2_asymptotic_report(&scen).map_err(crate::from_core)?;
    Ok(csv_line(&[
        level.to_string(),
        conrey_label(&chi),
        f64_str(t),
        f64_str(rep.constant.re),
        f64_str(rep.constant.im),
        f64_str(rep.main_level),
        f64_str(rep.main_l),
        f64_str(rep.remainder),
        f64_str(rep.envelope),
        f64_str(rep.ratio),
    ]))
}

fn deformation_row(cfg: &RunConfig, level: u64, eta: f64) -> Result<String, CliError> {
    let chi = resolve_character(&cfg.character, level)?;
    let scen = cfg.scenario(level)?;
    let asm = xi_assembly(eta, &scen).map_err(crate::from_core)?;
    Ok(csv_line(&[
        level.to_string(),
        conrey_label(&chi),
        f64_str(cfg.t),
        f64_str(eta),
        f64_str(asm.total.re),
        f64_str(asm.total.im),
        f64_str(asm.terms[0].norm()),
        f64_str(asm.terms[1].norm()),
        f64_str(asm.terms[2].norm()),
        f64_str(asm.terms[3].norm()),
    ]))
}

fn with_pool<T: Send>(
    threads: usize,
    f: impl FnOnce() -> Result<T, CliError> + Send,
) -> Result<T, CliError> {
    if threads == 0 {
        return f();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot build worker pool: {e}")))?;
    pool.install(f)
}

/// Builds the whole CSV table, header first, one row per grid point.
pub fn run(axis: Axis, cfg: &RunConfig) -> Result<String, CliError> {
    if cfg.levels.is_empty() {
        return Err(CliError::Usage(
            "sweep needs at least one level: pass --N or set N= in the config".into(),
        ));
    }
    let threads = cfg.thread_count()?;
    let (header, rows): (&[&str], Vec<String>) = match axis {
        Axis::Level => {
            let rows = with_pool(threads, || {
                cfg.levels
                    .par_iter()
                    .map(|&n| report_row(cfg, n, cfg.t))
                    .collect::<Result<Vec<_>, _>>()
            })?;
            (&REPORT_HEADER, rows)
        }
        Axis::Height => {
            if cfg.t_grid.is_empty() {
                return Err(CliError::Usage(
                    "sweep over T needs --T-grid or T-grid= in the config".into(),
                ));
            }
            let level = cfg.levels[0];
            let rows = with_pool(threads, || {
                cfg.t_grid
                    .par_iter()
                    .map(|&t| report_row(cfg, level, t))
                    .collect::<Result<Vec<_>, _>>()
            })?;
            (&REPORT_HEADER, rows)
        }
        Axis::Deformation => {
            let level = cfg.levels[0];
            let rows = with_pool(threads, || {
                cfg.eta_grid
                    .par_iter()
                    .map(|&eta| deformation_row(cfg, level, eta))
                    .collect::<Result<Vec<_>, _>>()
            })?;
            (&DEFORMATION_HEADER, rows)
        }
    };
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_names_parse() {
        assert_eq!(Axis::parse("n").unwrap(), Axis::Level);
        assert_eq!(Axis::parse("T").unwrap(), Axis::Height);
        assert_eq!(Axis::parse("eta").unwrap(), Axis::Deformation);
        assert!(Axis::parse("q").is_err());
    }

    #[test]
    fn empty_level_list_is_a_usage_error() {
        let cfg = RunConfig::default();
        match run(Axis::Level, &cfg) {
            Err(CliError::Usage(_)) => {}
            other => panic!("expected usage error, got {other:?}"),
        }
    }

    #[test]
    fn deformation_table_has_fixed_shape() {
        let mut cfg = RunConfig::default();
        cfg.levels = vec![5];
        cfg.character = "quadratic".into();
        cfg.eta_grid = vec![0.05, 0.02];
        let table = run(Axis::Deformation, &cfg).unwrap();
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], DEFORMATION_HEADER.join(","));
        for row in &lines[1..] {
            assert_eq!(row.split(',').count(), 10);
        }
        // Identical input, identical bytes.
        assert_eq!(table, run(Axis::Deformation, &cfg).unwrap());
    }
}
