use serde_json::Value;

use symplaw_core::det_laws::{eval_det_law, eval_pf_law};
use symplaw_core::invariants::eval_invariant;
use symplaw_core::json::{matrix_from_value, poly_from_value};
use symplaw_core::ring::format_rational;
use symplaw_core::symplectic::pfaffian;
use symplaw_core::{
    GroupAlgebraElement, InvariantFunction, InvolutiveRepresentation, Matrix, MultiPoly, Pseudocharacter, RepKind,
    SymplecticContext, Word,
};

use crate::{check_dim, CliError, CliResult, EvalKind};

fn field<'a>(v: &'a Value, name: &str) -> CliResult<&'a Value> {
    v.get(name).ok_or_else(|| CliError::Input(format!("missing field \"{name}\"")))
}

fn poly_matrix(v: &Value) -> CliResult<Matrix<MultiPoly>> {
    let rows = v.as_array().ok_or_else(|| CliError::Input("matrix must be an array of rows".into()))?;
    let rows = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| CliError::Input("matrix rows must be arrays".into()))?
                .iter()
                .map(|x| poly_from_value(x).map_err(CliError::from))
                .collect::<CliResult<Vec<_>>>()
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Matrix::from_rows(rows)?)
}

/// The representation under `"rep"`, or the trivial `Sp` representation of half-dimension
/// `"d"` on enough generators for `bound`.
fn rep_or_trivial(v: &Value, bound: usize) -> CliResult<InvolutiveRepresentation> {
    let rep = match v.get("rep") {
        Some(r) => InvolutiveRepresentation::from_json(r)?,
        None => {
            let d = field(v, "d")?
                .as_u64()
                .ok_or_else(|| CliError::Input("\"d\" must be a positive integer".into()))? as usize;
            check_dim(d)?;
            InvolutiveRepresentation::trivial(d, RepKind::Sp, bound.max(1))?
        }
    };
    check_dim(rep.d())?;
    Ok(rep)
}

pub fn eval_file(what: EvalKind, v: &Value) -> CliResult<String> {
    match what {
        EvalKind::Pfaffian => {
            let (m, reduced) = match v {
                Value::Array(_) => (poly_matrix(v)?, false),
                _ => (
                    poly_matrix(field(v, "matrix")?)?,
                    v.get("reduced").and_then(Value::as_bool).unwrap_or(false),
                ),
            };
            check_dim(m.rows().div_ceil(2).max(1))?;
            let value = if reduced {
                SymplecticContext::new(m.rows() / 2)?.reduced_pfaffian(&m)?
            } else {
                pfaffian(&m)?
            };
            Ok(value.to_string())
        }
        EvalKind::Detlaw => {
            let x = GroupAlgebraElement::from_json(field(v, "element")?)?;
            let rep = rep_or_trivial(v, x.generator_bound())?;
            let value = match v.get("law").and_then(Value::as_str).unwrap_or("det") {
                "det" => eval_det_law(&rep, &x)?,
                "pf" => eval_pf_law(&rep, &x)?,
                other => return Err(CliError::Input(format!("unknown law `{other}`, expected det or pf"))),
            };
            Ok(value.to_string())
        }
        EvalKind::Invariant => {
            let f = InvariantFunction::from_json(field(v, "function")?)?;
            let mats = field(v, "matrices")?
                .as_array()
                .ok_or_else(|| CliError::Input("\"matrices\" must be an array".into()))?
                .iter()
                .map(|m| matrix_from_value(m).map_err(CliError::from))
                .collect::<CliResult<Vec<_>>>()?;
            if let Some(m) = mats.first() {
                check_dim(m.rows().div_ceil(2).max(1))?;
            }
            Ok(format_rational(&eval_invariant(&f, &mats)?))
        }
        EvalKind::Theta => {
            let f = InvariantFunction::from_json(field(v, "function")?)?;
            let gammas = field(v, "gammas")?
                .as_array()
                .ok_or_else(|| CliError::Input("\"gammas\" must be an array of words".into()))?
                .iter()
                .map(|w| {
                    w.as_str()
                        .ok_or_else(|| CliError::Input("words are strings like \"g1 g2^-1\"".into()))?
                        .parse::<Word>()
                        .map_err(CliError::from)
                })
                .collect::<CliResult<Vec<_>>>()?;
            let bound = gammas.iter().map(Word::generator_bound).max().unwrap_or(0);
            let rep = rep_or_trivial(v, bound)?;
            Ok(format_rational(&Pseudocharacter::new(rep).theta_eval(&f, &gammas)?))
        }
    }
}
