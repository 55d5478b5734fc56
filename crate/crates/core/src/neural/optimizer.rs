use crate::error::{CoreError, Result};
use crate::neural::mlp::MlpParams;

/// SGD with classical momentum: `v <- mu v + g`, `p <- p - eta v`.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerState {
    pub learning_rate: f64,
    pub momentum: f64,
    velocity: MlpParams,
}

impl OptimizerState {
    /// Defaults matching the benchmark setup: eta 0.001, mu 0.9.
    pub fn new(params: &MlpParams) -> Self {
        Self::with_params(params, 0.001, 0.9)
    }

    pub fn with_params(params: &MlpParams, learning_rate: f64, momentum: f64) -> Self {
        Self {
            learning_rate,
            momentum,
            velocity: MlpParams::zeros(params.input, params.hidden, params.classes),
        }
    }

    pub fn velocity(&self) -> &MlpParams {
        &self.velocity
    }
}

/// Apply one momentum step in place.
pub fn sgd_momentum_step(
    params: &mut MlpParams,
    opt: &mut OptimizerState,
    grads: &MlpParams,
) -> Result<()> {
    let buffers = [
        (&mut params.w1, &mut opt.velocity.w1, &grads.w1),
        (&mut params.b1, &mut opt.velocity.b1, &grads.b1),
        (&mut params.w2, &mut opt.velocity.w2, &grads.w2),
        (&mut params.b2, &mut opt.velocity.b2, &grads.b2),
    ];
    for (p, v, g) in buffers {
        if p.len() != g.len() {
            return Err(CoreError::InvalidArgument(
                "gradient shape does not match parameters".into(),
            ));
        }
        if g.iter().any(|x| !x.is_finite()) {
            return Err(CoreError::Numeric("non-finite gradient".into()));
        }
        for i in 0..p.len() {
            v[i] = opt.momentum * v[i] + g[i];
            p[i] -= opt.learning_rate * v[i];
        }
    }
    Ok(())
}
