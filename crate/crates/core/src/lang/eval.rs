use serde_json::json;

use super::parse::{parse_str, Expr, Query, QueryName, StateExpr, StateKind};
use super::LangError;
use crate::gates::{apply_to_density, lookup};
use crate::gellmann::{decompose, BlochVector8};
use crate::states::{
    all_truth_probabilities, classify_quadrant, ket_to_density, linear_entropy, mix,
    truth_probability, DensityJson, DensityOperator, Quadrant, Quregister, TruthValue,
};
use crate::tomography::{effect_probability, logical_effect};

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Probability(f64),
    Real(f64),
    /// One entry per truth value, falsity first.
    Probabilities(Vec<(TruthValue, f64)>),
    Bloch(BlochVector8),
    Density(DensityOperator),
    Quadrant(Quadrant),
}

impl Value {
    /// Machine-readable form with full precision.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Probability(p) => json!({ "type": "probability", "value": p }),
            Value::Real(x) => json!({ "type": "real", "value": x }),
            Value::Probabilities(ps) => {
                let entries: Vec<_> = ps
                    .iter()
                    .map(|(tv, p)| json!({ "truth_value": tv.to_string(), "probability": p }))
                    .collect();
                json!({ "type": "probabilities", "value": entries })
            }
            Value::Bloch(r) => json!({ "type": "bloch", "value": r.0 }),
            Value::Density(rho) => json!({ "type": "density", "value": DensityJson::from(rho) }),
            Value::Quadrant(q) => json!({
                "type": "quadrant",
                "value": { "mixed": q.mixed, "uncertain": q.uncertain, "label": q.to_string() },
            }),
        }
    }
}

/// Builds the density operator denoted by a state expression.
pub fn eval_state(s: &StateExpr) -> Result<DensityOperator, LangError> {
    let wrap = |source| LangError::Eval {
        span: s.span,
        source,
    };
    match &s.kind {
        StateKind::Ket(components) => Ok(ket_to_density(
            &Quregister::basis(components).map_err(wrap)?,
        )),
        StateKind::Mix(parts) => {
            let weighted = parts
                .iter()
                .map(|(w, part)| Ok((*w, eval_state(part)?)))
                .collect::<Result<Vec<_>, LangError>>()?;
            mix(&weighted).map_err(wrap)
        }
        StateKind::Gate { name, arg } => {
            let rho = eval_state(arg)?;
            let gate = lookup(name, arg.sig.n).map_err(wrap)?;
            apply_to_density(&gate, &rho).map_err(wrap)
        }
        StateKind::Kron(a, b) => eval_state(a)?.kron(&eval_state(b)?).map_err(wrap),
    }
}

fn eval_query(q: &Query) -> Result<Value, LangError> {
    let rho = eval_state(&q.arg)?;
    let wrap = |source| LangError::Eval {
        span: q.span,
        source,
    };
    Ok(match q.name {
        QueryName::Prob => {
            let tv = q.tv.expect("prob carries a truth value");
            Value::Probability(truth_probability(&rho, tv).map_err(wrap)?.value())
        }
        QueryName::ProbTrue => {
            let tv = TruthValue::truth(rho.d()).map_err(wrap)?;
            Value::Probability(truth_probability(&rho, tv).map_err(wrap)?.value())
        }
        QueryName::Probs => Value::Probabilities(
            TruthValue::all(rho.d())
                .into_iter()
                .zip(all_truth_probabilities(&rho))
                .map(|(tv, p)| (tv, p.value()))
                .collect(),
        ),
        QueryName::EffProb => Value::Probability(
            effect_probability(&logical_effect(), &rho)
                .map_err(wrap)?
                .value(),
        ),
        QueryName::Entropy => Value::Real(linear_entropy(&rho)),
        QueryName::Purity => Value::Real(rho.purity()),
        QueryName::Bloch => Value::Bloch(decompose(&rho).map_err(wrap)?),
        QueryName::Classify => Value::Quadrant(classify_quadrant(&rho)),
    })
}

pub fn eval(e: &Expr) -> Result<Value, LangError> {
    match e {
        Expr::Query(q) => eval_query(q),
        Expr::State(s) => Ok(Value::Density(eval_state(s)?)),
    }
}

/// Tokenizes, parses and evaluates `input` with local dimension `d`.
pub fn evaluate(input: &str, d: usize) -> Result<Value, LangError> {
    eval(&parse_str(input, d)?)
}
