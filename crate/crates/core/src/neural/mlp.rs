use rand::Rng;

use crate::error::{CoreError, Result};
use crate::learners::check_dim;
use crate::stream::LabeledExample;

/// Parameters of a one-hidden-layer ReLU network with a softmax readout.
/// Weight matrices are stored row-major: `w1[j * input + i]` connects input
/// `i` to hidden unit `j`, `w2[k * hidden + j]` hidden `j` to class `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpParams {
    pub input: usize,
    pub hidden: usize,
    pub classes: usize,
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: Vec<f64>,
}

impl MlpParams {
    /// Zero-initialized parameters (useful for gradient containers).
    pub fn zeros(input: usize, hidden: usize, classes: usize) -> Self {
        Self {
            input,
            hidden,
            classes,
            w1: vec![0.0; hidden * input],
            b1: vec![0.0; hidden],
            w2: vec![0.0; classes * hidden],
            b2: vec![0.0; classes],
        }
    }

    /// He-uniform initialization: weights in +-sqrt(6 / fan_in), zero biases.
    /// Sized for ReLU activations; keeps early gradients large enough that a
    /// single-pass stream at small learning rates actually moves the net.
    pub fn init<R: Rng>(input: usize, hidden: usize, classes: usize, rng: &mut R) -> Self {
        let mut params = Self::zeros(input, hidden, classes);
        let s1 = (6.0 / input as f64).sqrt();
        for w in &mut params.w1 {
            *w = rng.random_range(-s1..s1);
        }
        let s2 = (6.0 / hidden as f64).sqrt();
        for w in &mut params.w2 {
            *w = rng.random_range(-s2..s2);
        }
        params
    }

    pub fn param_count(&self) -> usize {
        self.w1.len() + self.b1.len() + self.w2.len() + self.b2.len()
    }

    /// Concatenate all parameters into one flat vector (w1, b1, w2, b2).
    pub fn flatten(&self) -> Vec<f64> {
        let mut flat = Vec::with_capacity(self.param_count());
        flat.extend_from_slice(&self.w1);
        flat.extend_from_slice(&self.b1);
        flat.extend_from_slice(&self.w2);
        flat.extend_from_slice(&self.b2);
        flat
    }

    /// Inverse of `flatten` for a container of matching shape.
    pub fn from_flat(&self, flat: &[f64]) -> Result<Self> {
        if flat.len() != self.param_count() {
            return Err(CoreError::InvalidArgument(format!(
                "flat vector has {} entries, expected {}",
                flat.len(),
                self.param_count()
            )));
        }
        let mut out = Self::zeros(self.input, self.hidden, self.classes);
        let (a, rest) = flat.split_at(self.w1.len());
        let (b, rest) = rest.split_at(self.b1.len());
        let (c, d) = rest.split_at(self.w2.len());
        out.w1.copy_from_slice(a);
        out.b1.copy_from_slice(b);
        out.w2.copy_from_slice(c);
        out.b2.copy_from_slice(d);
        Ok(out)
    }

    fn hidden_pre_activations(&self, x: &[f64]) -> Vec<f64> {
        let mut z1 = self.b1.clone();
        for j in 0..self.hidden {
            let row = &self.w1[j * self.input..(j + 1) * self.input];
            z1[j] += row.iter().zip(x).map(|(w, xi)| w * xi).sum::<f64>();
        }
        z1
    }

    /// Logits for a single feature vector.
    pub fn logits(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.input, x)?;
        let z1 = self.hidden_pre_activations(x);
        let a: Vec<f64> = z1.iter().map(|&z| z.max(0.0)).collect();
        let mut z2 = self.b2.clone();
        for k in 0..self.classes {
            let row = &self.w2[k * self.hidden..(k + 1) * self.hidden];
            z2[k] += row.iter().zip(&a).map(|(w, aj)| w * aj).sum::<f64>();
        }
        Ok(z2)
    }
}

/// Logits for every example in the batch.
pub fn mlp_forward(params: &MlpParams, batch: &[&[f64]]) -> Result<Vec<Vec<f64>>> {
    if batch.is_empty() {
        return Err(CoreError::InvalidArgument("empty batch".into()));
    }
    batch.iter().map(|x| params.logits(x)).collect()
}

fn log_softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let log_sum = logits.iter().map(|&z| (z - max).exp()).sum::<f64>().ln() + max;
    logits.iter().map(|&z| z - log_sum).collect()
}

/// Gradients of the mean softmax cross-entropy over `batch`, plus the loss.
pub fn mlp_backward(params: &MlpParams, batch: &[LabeledExample]) -> Result<(MlpParams, f64)> {
    if batch.is_empty() {
        return Err(CoreError::InvalidArgument("empty batch".into()));
    }
    let mut grads = MlpParams::zeros(params.input, params.hidden, params.classes);
    let mut loss = 0.0;
    let scale = 1.0 / batch.len() as f64;
    for ex in batch {
        check_dim(params.input, &ex.features)?;
        if ex.label >= params.classes {
            return Err(CoreError::InvalidArgument(format!(
                "label {} out of range for {} classes",
                ex.label, params.classes
            )));
        }
        let z1 = params.hidden_pre_activations(&ex.features);
        let a: Vec<f64> = z1.iter().map(|&z| z.max(0.0)).collect();
        let mut z2 = params.b2.clone();
        for k in 0..params.classes {
            let row = &params.w2[k * params.hidden..(k + 1) * params.hidden];
            z2[k] += row.iter().zip(&a).map(|(w, aj)| w * aj).sum::<f64>();
        }
        let log_probs = log_softmax(&z2);
        loss -= scale * log_probs[ex.label];

        // dz2 = (softmax - onehot) / B
        let dz2: Vec<f64> = log_probs
            .iter()
            .enumerate()
            .map(|(k, &lp)| scale * (lp.exp() - f64::from(ex.label == k)))
            .collect();
        let mut da = vec![0.0; params.hidden];
        for k in 0..params.classes {
            grads.b2[k] += dz2[k];
            let w_row = &params.w2[k * params.hidden..(k + 1) * params.hidden];
            let g_row = &mut grads.w2[k * params.hidden..(k + 1) * params.hidden];
            for j in 0..params.hidden {
                g_row[j] += dz2[k] * a[j];
                da[j] += dz2[k] * w_row[j];
            }
        }
        for j in 0..params.hidden {
            if z1[j] > 0.0 {
                let dz1 = da[j];
                grads.b1[j] += dz1;
                let g_row = &mut grads.w1[j * params.input..(j + 1) * params.input];
                for (g, &xi) in g_row.iter_mut().zip(&ex.features) {
                    *g += dz1 * xi;
                }
            }
        }
    }
    Ok((grads, loss))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ex(features: Vec<f64>, label: usize) -> LabeledExample {
        LabeledExample::new(features, label, 0)
    }

    #[test]
    fn zero_params_give_zero_logits() {
        let params = MlpParams::zeros(3, 4, 2);
        let logits = mlp_forward(&params, &[&[1.0, -2.0, 3.0]]).unwrap();
        assert_eq!(logits, vec![vec![0.0, 0.0]]);
    }

    #[test]
    fn identity_like_net_passes_input_through() {
        // 1 input, 1 hidden, 2 classes: w1 = 1, w2 = (1, 0).
        let mut params = MlpParams::zeros(1, 1, 2);
        params.w1[0] = 1.0;
        params.w2[0] = 1.0;
        let logits = mlp_forward(&params, &[&[2.0]]).unwrap();
        assert_eq!(logits, vec![vec![2.0, 0.0]]);
    }

    #[test]
    fn relu_gates_negative_inputs() {
        let mut params = MlpParams::zeros(1, 1, 2);
        params.w1[0] = 1.0;
        params.w2[0] = 1.0;
        let logits = mlp_forward(&params, &[&[-2.0]]).unwrap();
        assert_eq!(logits, vec![vec![0.0, 0.0]]);
    }

    #[test]
    fn gradients_match_central_finite_differences() {
        // Oracle: central differences with step 1e-5 on a small random net.
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for trial in 0..10 {
            let mut params = MlpParams::init(7, 8, 2, &mut rng);
            for b in &mut params.b1 {
                *b = rng.random_range(-0.1..0.1);
            }
            let batch: Vec<LabeledExample> = (0..4)
                .map(|i| {
                    ex(
                        (0..7).map(|_| rng.random_range(-1.0..1.0)).collect(),
                        i % 2,
                    )
                })
                .collect();
            let (grads, _) = mlp_backward(&params, &batch).unwrap();
            let analytic = grads.flatten();
            let flat = params.flatten();
            let h = 1e-5;
            let mut max_rel: f64 = 0.0;
            for i in 0..flat.len() {
                let mut plus = flat.clone();
                plus[i] += h;
                let mut minus = flat.clone();
                minus[i] -= h;
                let (_, lp) = mlp_backward(&params.from_flat(&plus).unwrap(), &batch).unwrap();
                let (_, lm) = mlp_backward(&params.from_flat(&minus).unwrap(), &batch).unwrap();
                // mlp_backward returns the loss evaluated at the shifted
                // parameters; gradients of the shifted nets are discarded.
                let fd = (lp - lm) / (2.0 * h);
                let rel = (analytic[i] - fd).abs() / fd.abs().max(1e-6);
                max_rel = max_rel.max(rel);
            }
            assert!(
                max_rel <= 1e-4,
                "trial {trial}: max relative gradient error {max_rel}"
            );
        }
    }

    #[test]
    fn duplicated_batch_leaves_mean_gradient_unchanged() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let params = MlpParams::init(5, 6, 2, &mut rng);
        let batch: Vec<LabeledExample> = (0..3)
            .map(|i| ex((0..5).map(|_| rng.random_range(-1.0..1.0)).collect(), i % 2))
            .collect();
        let doubled: Vec<LabeledExample> =
            batch.iter().chain(batch.iter()).cloned().collect();
        let (g1, l1) = mlp_backward(&params, &batch).unwrap();
        let (g2, l2) = mlp_backward(&params, &doubled).unwrap();
        assert!((l1 - l2).abs() < 1e-12);
        for (a, b) in g1.flatten().iter().zip(g2.flatten()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn saturated_correct_logits_have_tiny_loss() {
        let mut params = MlpParams::zeros(1, 1, 2);
        params.w1[0] = 1.0;
        params.w2[0] = 20.0; // class-0 logit = 20 for x = 1
        let batch = vec![ex(vec![1.0], 0)];
        let (_, loss) = mlp_backward(&params, &batch).unwrap();
        assert!(loss < 1e-3, "loss = {loss}");
    }

    #[test]
    fn empty_batch_is_rejected() {
        let params = MlpParams::zeros(2, 2, 2);
        assert!(mlp_forward(&params, &[]).is_err());
        assert!(mlp_backward(&params, &[]).is_err());
    }

    #[test]
    fn flatten_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let params = MlpParams::init(4, 3, 2, &mut rng);
        let rebuilt = params.from_flat(&params.flatten()).unwrap();
        assert_eq!(params, rebuilt);
        assert!(params.from_flat(&[0.0]).is_err());
    }
}
