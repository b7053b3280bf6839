//! Single-quantity evaluation: each supported quantity produces one JSON
//! record with the value, an error estimate, the resolved parameters, and a
//! list of human-readable anchor facts.

use serde_json::{json, Map, Value};

use regl4_core::characters::{gauss_sum, CharacterDecomposition};
use regl4_core::eisenstein::fourier_coefficient;
use regl4_core::i2::{
    f_derivative, f_factor, h_factor, i2_asymptotic_report, i2_constant_term, grh_diagnostics,
    laurent_fit, XiLaurentData,
};
use regl4_core::lfun::{completed_l, completed_zeta, dirichlet_l};
use regl4_core::regprod::{triple_product_closed, triple_product_unfolded_auto, TripleProductParams};
use regl4_core::{Complex, Error};

use crate::config::{conrey_label, resolve_character, RunConfig};
use crate::{from_core, CliError};

/// Flag values specific to `eval`; everything optional because each quantity
/// needs a different subset.
#[derive(Clone, Debug, Default)]
pub struct EvalParams {
    pub s: Option<Complex>,
    pub modulus: Option<u64>,
    pub n: Option<i64>,
    pub w1: Option<Complex>,
    pub w2: Option<Complex>,
    pub w3: Option<Complex>,
    pub j: Option<usize>,
    pub order: Option<u32>,
    pub eta: Option<f64>,
    pub eta_inner: Option<f64>,
    pub s1: Option<Complex>,
    pub s2: Option<Complex>,
    pub s3: Option<Complex>,
    pub s4: Option<Complex>,
}

fn need<T: Copy>(opt: Option<T>, flag: &str) -> Result<T, CliError> {
    opt.ok_or_else(|| CliError::Usage(format!("this quantity needs --{flag}")))
}

fn put_complex(params: &mut Map<String, Value>, key: &str, v: Complex) {
    params.insert(format!("{key}_re"), json!(v.re));
    params.insert(format!("{key}_im"), json!(v.im));
}

/// The fixed record shape: `quantity`, `params`, `value_re`, `value_im`,
/// `error_estimate`, `anchors`, plus an optional `details` object for the
/// composite quantities.
fn record(
    quantity: &str,
    params: Map<String, Value>,
    value: Complex,
    error: f64,
    anchors: Vec<String>,
    details: Option<Map<String, Value>>,
) -> Value {
    let mut out = Map::new();
    out.insert("quantity".into(), json!(quantity));
    out.insert("params".into(), Value::Object(params));
    out.insert("value_re".into(), json!(value.re));
    out.insert("value_im".into(), json!(value.im));
    out.insert("error_estimate".into(), json!(error));
    out.insert("anchors".into(), json!(anchors));
    if let Some(d) = details {
        out.insert("details".into(), Value::Object(d));
    }
    Value::Object(out)
}

/// Level for quantities that accept either `--modulus` or the global `--N`.
fn level_of(p: &EvalParams, cfg: &RunConfig) -> Result<u64, CliError> {
    match p.modulus {
        Some(m) => Ok(m),
        None => cfg.single_level(),
    }
}

fn decomposition(cfg: &RunConfig, level: u64) -> Result<CharacterDecomposition, CliError> {
    let chi = resolve_character(&cfg.character, level)?;
    CharacterDecomposition::new(&chi, cfg.q1).map_err(from_core)
}

fn scenario_params(cfg: &RunConfig, level: u64) -> Map<String, Value> {
    let mut params = Map::new();
    params.insert("N".into(), json!(level));
    params.insert("char".into(), json!(cfg.character));
    params.insert("q1".into(), json!(cfg.q1));
    params.insert("T".into(), json!(cfg.t));
    params
}

/// Evaluates one named quantity.  Unknown names are usage errors.
pub fn evaluate(quantity: &str, p: &EvalParams, cfg: &RunConfig) -> Result<Value, CliError> {
    match quantity {
        "gauss_sum" => eval_gauss_sum(p, cfg),
        "lfun" => eval_lfun(p, cfg),
        "xi" => eval_xi(p),
        "lambda_completed" => eval_lambda(p, cfg),
        "fourier_coeff" => eval_fourier(p, cfg),
        "triple_product" => eval_triple(p, cfg),
        "h_factor" => eval_h_factor(p, cfg),
        "f_factor" => eval_f_factor(p, cfg),
        "i2_constant" => eval_i2_constant(cfg),
        "i2_report" => eval_i2_report(cfg),
        "grh_report" => eval_grh_report(cfg),
        other => Err(CliError::Usage(format!(
            "unknown quantity `{other}`; expected one of gauss_sum, lfun, xi, \
             lambda_completed, fourier_coeff, triple_product, h_factor, f_factor, \
             i2_constant, i2_report, grh_report"
        ))),
    }
}

fn eval_gauss_sum(p: &EvalParams, cfg: &RunConfig) -> Result<Value, CliError> {
    let modulus = level_of(p, cfg)?;
    let chi = resolve_character(&cfg.character, modulus)?;
    let value = gauss_sum(&chi);
    let mut params = Map::new();
    params.insert("modulus".into(), json!(modulus));
    params.insert("char".into(), json!(conrey_label(&chi)));
    let anchors = vec![
        "a primitive character's sum has absolute value sqrt(modulus)".to_string(),
        "for the even quadratic character mod 5, tau = sqrt(5)".to_string(),
    ];
    let error = (modulus as f64).sqrt() * 1e-15;
    Ok(record("gauss_sum", params, value, error, anchors, None))
}

fn eval_lfun(p: &EvalParams, cfg: &RunConfig) -> Result<Value, CliError> {
    let s = need(p.s, "s")?;
    let modulus = level_of(p, cfg)?;
    let chi = resolve_character(&cfg.character, modulus)?;
    let value = dirichlet_l(s, &chi).map_err(from_core)?[0];
    let mut params = Map::new();
    put_complex(&mut params, "s", s);
    params.insert("modulus".into(), json!(modulus));
    params.insert("char".into(), json!(conrey_label(&chi)));
    let anchors = vec![
        "the principal character mod 1 gives the zeta function".to_string(),
        "values at s and 1-s are linked through the completed form".to_string(),
    ];
    Ok(record("lfun", params, value, 1e-12, anchors, None))
}

fn eval_xi(p: &EvalParams) -> Result<Value, CliError> {
    let s = need(p.s, "s")?;
    let value = completed_zeta(s).map_err(from_core)?;
    let mut params = Map::new();
    put_complex(&mut params, "s", s);
    let anchors = vec![
        "xi(2) = pi/6".to_string(),
        "symmetric under s -> 1 - s".to_string(),
    ];
    Ok(record("xi", params, value, 1e-14, anchors, None))
}

fn eval_lambda(p: &EvalParams, cfg: &RunConfig) -> Result<Value, CliError> {
    let s = need(p.s, "s")?;
    let modulus = level_of(p, cfg)?;
    let chi = resolve_character(&cfg.character, modulus)?;
    let value = completed_l(s, &chi).map_err(from_core)?[0];
    let mut params = Map::new();
    put_complex(&mut params, "s", s);
    params.insert("modulus".into(), json!(modulus));
    params.insert("char".into(), json!(conrey_label(&chi)));
    let anchors = vec![
        "functional equation: value at s equals the root number times the conjugate form at 1-s"
            .to_string(),
    ];
    Ok(record("lambda_completed", params, value, 1e-12, anchors, None))
}

fn eval_fourier(p: &EvalParams, cfg: &RunConfig) -> Result<Value, CliError> {
    let n = need(p.n, "n")?;
    let s = need(p.s, "s")?;
    let level = level_of(p, cfg)?;
    let dec = decomposition(cfg, level)?;
    let value = fourier_coefficient(n, s, &dec).map_err(from_core)?;
    let mut params = scenario_params(cfg, level);
    params.remove("T");
    params.insert("n".into(), json!(n));
    put_complex(&mut params, "s", s);
    let anchors = vec![
        "a finite twisted divisor sum over the factorizations of |n|".to_string(),
        "invariant under s -> 1-s up to the conjugate-pair coefficient".to_string(),
    ];
    let error = 1e-13 * value.norm().max(1.0);
    Ok(record("fourier_coeff", params, value, error, anchors, None))
}

fn eval_triple(p: &EvalParams, cfg: &RunConfig) -> Result<Value, CliError> {
    let w1 = need(p.w1, "w1")?;
    let w2 = need(p.w2, "w2")?;
    let w3 = need(p.w3, "w3")?;
    let level = level_of(p, cfg)?;
    let dec = decomposition(cfg, level)?;
    let tp = TripleProductParams::new(&dec, w1, w2, w3).map_err(from_core)?;
    let value = triple_product_closed(&tp).map_err(from_core)?;
    let nominal = 1e-9 * value.norm().max(1.0);
    // Inside the absolute-convergence strip the truncated coefficient series
    // is an independent route; its distance to the closed form is an honest
    // error estimate.  Elsewhere (or if certification stalls) fall back to a
    // nominal figure.
    let error = if tp.effective_sigma() > 1.1 {
        match triple_product_unfolded_auto(&tp, 1e-9) {
            Ok(un) => (value - un.value).norm().max(un.tail_bound),
            Err(Error::InsufficientTruncation { .. }) => nominal,
            Err(e) => return Err(from_core(e)),
        }
    } else {
        nominal
    };
    let mut params = scenario_params(cfg, level);
    params.remove("T");
    put_complex(&mut params, "w1", w1);
    put_complex(&mut params, "w2", w2);
    put_complex(&mut params, "w3", w3);
    let anchors = vec![
        "product of four completed L-values with a level-local Euler correction".to_string(),
        "matches the unfolded coefficient series where that converges".to_string(),
    ];
    Ok(record("triple_product", params, value, error, anchors, None))
}

fn eval_h_factor(p: &EvalParams, cfg: &RunConfig) -> Result<Value, CliError> {
    let j = need(p.j, "j")?;
    let level = cfg.single_level()?;
    let scen = cfg.scenario(level)?;
    let given = [p.s1, p.s2, p.s3, p.s4];
    let n_given = given.iter().filter(|v| v.is_some()).count();
    let mut params = scenario_params(cfg, level);
    params.insert("j".into(), json!(j));
    let s: [Complex; 4] = match n_given {
        4 => {
            let s = [given[0].unwrap(), given[1].unwrap(), given[2].unwrap(), given[3].unwrap()];
            for (k, v) in s.iter().enumerate() {
                put_complex(&mut params, &format!("s{}", k + 1), *v);
            }
            s
        }
        0 => {
            let eta = need(p.eta, "eta")?;
            let eta_inner = p.eta_inner.unwrap_or(0.0);
            params.insert("eta".into(), json!(eta));
            params.insert("eta_inner".into(), json!(eta_inner));
            scen.path_point(eta, eta_inner)
        }
        _ => {
            return Err(CliError::Usage(
                "pass all of --s1 --s2 --s3 --s4 or none (then --eta, optionally --eta-inner)"
                    .into(),
            ))
        }
    };
    let value = h_factor(j, &s, &scen).map_err(from_core)?;
    let anchors = vec![
        "at the symmetric diagonal point all four factors share one value".to_string(),
    ];
    let error = 1e-12 * value.norm().max(1.0);
    Ok(record("h_factor", params, value, error, anchors, None))
}

fn eval_f_factor(p: &EvalParams, cfg: &RunConfig) -> Result<Value, CliError> {
    let j = need(p.j, "j")?;
    let eta = need(p.eta, "eta")?;
    let level = cfg.single_level()?;
    let scen = cfg.scenario(level)?;
    let value = f_factor(j, eta, &scen).map_err(from_core)?;
    let mut params = scenario_params(cfg, level);
    params.insert("j".into(), json!(j));
    params.insert("eta".into(), json!(eta));
    let anchors = vec![
        "all four factors meet at 6/(pi * index of the level subgroup) as eta -> 0".to_string(),
    ];
    let error = 1e-12 * value.norm().max(1.0);
    Ok(record("f_factor", params, value, error, anchors, None))
}

fn eval_i2_constant(cfg: &RunConfig) -> Result<Value, CliError> {
    let level = cfg.single_level()?;
    let scen = cfg.scenario(level)?;
    let xi_data = XiLaurentData::measured();
    let value = i2_constant_term(&scen, &xi_data).map_err(from_core)?;
    // Propagate the stencil-ladder gaps through the assembly weights, then
    // cross-check against the derivative-free grid fit.
    let a = xi_data.a.abs();
    let mut error = 0.0;
    for j in 1..=4 {
        error += 0.5 * f_derivative(j, 2, &scen).map_err(from_core)?.ladder_gap;
    }
    for j in 1..=2 {
        error += 2.0 * a * f_derivative(j, 1, &scen).map_err(from_core)?.ladder_gap;
    }
    let fit = laurent_fit(&scen).map_err(from_core)?;
    let mut details = Map::new();
    details.insert("fit_c0_re".into(), json!(fit.c0.re));
    details.insert("fit_c0_im".into(), json!(fit.c0.im));
    details.insert("fit_gap".into(), json!((fit.c0 - value).norm()));
    let params = scenario_params(cfg, level);
    let anchors = vec![
        "stencil route; `details` holds the grid-fit route and their distance".to_string(),
        "real up to numerical noise".to_string(),
    ];
    Ok(record("i2_constant", params, value, error, anchors, Some(details)))
}

fn eval_i2_report(cfg: &RunConfig) -> Result<Value, CliError> {
    let level = cfg.single_level()?;
    let scen = cfg.scenario(level)?;
    let rep = i2_asymptotic_report(&scen).map_err(from_core)?;
    let mut details = Map::new();
    details.insert("normalized".into(), json!(rep.normalized));
    details.insert("main_level".into(), json!(rep.main_level));
    details.insert("main_l".into(), json!(rep.main_l));
    details.insert("remainder".into(), json!(rep.remainder));
    details.insert("envelope".into(), json!(rep.envelope));
    details.insert("ratio".into(), json!(rep.ratio));
    details.insert("leading_ratio".into(), json!(rep.leading_ratio));
    let error = f_derivative(1, 2, &scen).map_err(from_core)?.ladder_gap;
    let params = scenario_params(cfg, level);
    let anchors = vec![
        "normalized constant against 4 log^2 N plus an L-derivative term".to_string(),
        "`ratio` compares the remainder with the lower-order envelope".to_string(),
    ];
    Ok(record("i2_report", params, rep.constant, error, anchors, Some(details)))
}

fn eval_grh_report(cfg: &RunConfig) -> Result<Value, CliError> {
    let level = cfg.single_level()?;
    let scen = cfg.scenario(level)?;
    let rep = grh_diagnostics(&scen, cfg.cutoff).map_err(from_core)?;
    let mut details = Map::new();
    details.insert("first_ratio".into(), json!(rep.first_ratio));
    details.insert("second_ratio".into(), json!(rep.second_ratio));
    details.insert("prime_sum_residual".into(), json!(rep.prime_sum_residual));
    details.insert("cutoff".into(), json!(rep.cutoff));
    let mut params = scenario_params(cfg, level);
    params.insert("cutoff".into(), json!(cfg.cutoff));
    let value = regl4_core::c(rep.first_ratio, 0.0);
    let anchors = vec![
        "log-derivative growth ratios at 1 + 2iT; residual compares the first \
         against a smoothed prime sum"
            .to_string(),
    ];
    Ok(record(
        "grh_report",
        params,
        value,
        rep.prime_sum_residual,
        anchors,
        Some(details),
    ))
}
