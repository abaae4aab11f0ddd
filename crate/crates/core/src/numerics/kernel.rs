use std::collections::BTreeMap;

use super::NumericsError;
use crate::symcore::{Atom, CompiledExpr, Expr, Name};

/// Numeric values for named parameters such as a frequency `w`.
pub type Params = BTreeMap<String, f64>;

/// A compiled expression with its parameters bound.
#[derive(Clone, Debug)]
pub struct Kernel {
    code: CompiledExpr,
    arity: usize,
    params: Vec<f64>,
}

/// Reusable buffers for [`Kernel::eval`].
#[derive(Default)]
pub struct Workspace {
    args: Vec<f64>,
    scratch: Vec<f64>,
}

impl Workspace {
    pub fn new() -> Workspace {
        Workspace::default()
    }
}

impl Kernel {
    pub fn new(e: &Expr, inputs: &[Atom], params: &Params) -> Result<Kernel, NumericsError> {
        let mut all = inputs.to_vec();
        all.extend(params.keys().map(|k| Atom::Param(Name::from(k.as_str()))));
        let code = CompiledExpr::new(e, &all).map_err(|source| NumericsError::Compile {
            expr: e.to_string(),
            source,
        })?;
        Ok(Kernel {
            code,
            arity: inputs.len(),
            params: params.values().copied().collect(),
        })
    }

    pub fn eval(&self, args: &[f64], ws: &mut Workspace) -> f64 {
        debug_assert_eq!(args.len(), self.arity);
        ws.args.clear();
        ws.args.extend_from_slice(args);
        ws.args.extend_from_slice(&self.params);
        self.code.eval_into(&ws.args, &mut ws.scratch)
    }
}
