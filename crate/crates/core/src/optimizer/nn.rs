//! Minimal fully-connected network with manual backpropagation.
//!
//! Parameters live in one flat vector (per layer: weight matrix in
//! row-major `out x in` order, then bias), which keeps the Adam state and
//! checkpoint serialization trivial. Hidden layers use ReLU; the output
//! layer is linear. The backward pass also returns the gradient with
//! respect to the input, which the actor update needs to differentiate
//! the critic with respect to the action.

use rand::Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    dims: Vec<usize>,
    params: Vec<f64>,
}

/// Intermediate activations kept from a forward pass for backprop.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    /// Input to each layer (index 0 is the network input).
    layer_inputs: Vec<Vec<f64>>,
    /// Pre-activation output of each layer.
    preacts: Vec<Vec<f64>>,
}

impl Mlp {
    /// He-normal initialization for the hidden layers; the final layer is
    /// scaled down so initial outputs start near zero.
    pub fn new(dims: &[usize], rng: &mut impl Rng) -> Self {
        assert!(dims.len() >= 2, "need at least input and output dims");
        let mut params = Vec::with_capacity(Self::param_count(dims));
        let n_layers = dims.len() - 1;
        for l in 0..n_layers {
            let fan_in = dims[l];
            let mut std = (2.0 / fan_in as f64).sqrt();
            if l == n_layers - 1 {
                std *= 0.01;
            }
            for _ in 0..dims[l] * dims[l + 1] {
                params.push(gauss(rng) * std);
            }
            for _ in 0..dims[l + 1] {
                params.push(0.0);
            }
        }
        Self {
            dims: dims.to_vec(),
            params,
        }
    }

    pub fn from_parts(dims: Vec<usize>, params: Vec<f64>) -> Result<Self, String> {
        if dims.len() < 2 {
            return Err("need at least input and output dims".to_string());
        }
        let expect = Self::param_count(&dims);
        if params.len() != expect {
            return Err(format!(
                "expected {expect} parameters for dims {dims:?}, got {}",
                params.len()
            ));
        }
        Ok(Self { dims, params })
    }

    pub fn param_count(dims: &[usize]) -> usize {
        dims.windows(2).map(|w| w[0] * w[1] + w[1]).sum()
    }

    pub fn input_dim(&self) -> usize {
        self.dims[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.dims.last().unwrap()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    pub fn num_params(&self) -> usize {
        self.params.len()
    }

    fn layer_offsets(&self, layer: usize) -> (usize, usize) {
        let mut offset = 0;
        for l in 0..layer {
            offset += self.dims[l] * self.dims[l + 1] + self.dims[l + 1];
        }
        let w = offset;
        let b = offset + self.dims[layer] * self.dims[layer + 1];
        (w, b)
    }

    /// Forward pass returning the output and the cache for backprop.
    pub fn forward(&self, input: &[f64]) -> (Vec<f64>, ForwardCache) {
        assert_eq!(input.len(), self.input_dim(), "input dimension mismatch");
        let n_layers = self.dims.len() - 1;
        let mut layer_inputs = Vec::with_capacity(n_layers);
        let mut preacts = Vec::with_capacity(n_layers);
        let mut x = input.to_vec();
        for l in 0..n_layers {
            let (in_d, out_d) = (self.dims[l], self.dims[l + 1]);
            let (wo, bo) = self.layer_offsets(l);
            let mut z = vec![0.0; out_d];
            for o in 0..out_d {
                let row = &self.params[wo + o * in_d..wo + (o + 1) * in_d];
                let mut acc = self.params[bo + o];
                for (wi, xi) in row.iter().zip(&x) {
                    acc += wi * xi;
                }
                z[o] = acc;
            }
            layer_inputs.push(x);
            preacts.push(z.clone());
            if l < n_layers - 1 {
                for v in z.iter_mut() {
                    if *v < 0.0 {
                        *v = 0.0;
                    }
                }
            }
            x = z;
        }
        (
            x,
            ForwardCache {
                layer_inputs,
                preacts,
            },
        )
    }

    /// Output without keeping the cache.
    pub fn infer(&self, input: &[f64]) -> Vec<f64> {
        self.forward(input).0
    }

    /// Backpropagates `d_output` through the cached pass, accumulating
    /// parameter gradients into `grads` (same layout as `params`) and
    /// returning the gradient with respect to the network input.
    pub fn backward(&self, cache: &ForwardCache, d_output: &[f64], grads: &mut [f64]) -> Vec<f64> {
        assert_eq!(grads.len(), self.params.len(), "gradient buffer mismatch");
        assert_eq!(d_output.len(), self.output_dim());
        let n_layers = self.dims.len() - 1;
        let mut dz = d_output.to_vec();
        for l in (0..n_layers).rev() {
            let (in_d, out_d) = (self.dims[l], self.dims[l + 1]);
            let (wo, bo) = self.layer_offsets(l);
            let x = &cache.layer_inputs[l];
            let mut dx = vec![0.0; in_d];
            for o in 0..out_d {
                let g = dz[o];
                grads[bo + o] += g;
                let row_off = wo + o * in_d;
                for i in 0..in_d {
                    grads[row_off + i] += g * x[i];
                    dx[i] += g * self.params[row_off + i];
                }
            }
            if l > 0 {
                // Gate by the previous layer's ReLU.
                for (v, z) in dx.iter_mut().zip(&cache.preacts[l - 1]) {
                    if *z <= 0.0 {
                        *v = 0.0;
                    }
                }
            }
            dz = dx;
        }
        dz
    }
}

/// Box-Muller standard normal. Keeps this module free of the sampling
/// API differences between rand versions used elsewhere.
fn gauss(rng: &mut impl Rng) -> f64 {
    loop {
        let u1: f64 = rng.gen();
        if u1 <= f64::MIN_POSITIVE {
            continue;
        }
        let u2: f64 = rng.gen();
        return (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
    }
}

/// Adam optimizer over one flat parameter vector.
#[derive(Debug, Clone)]
pub struct Adam {
    lr: f64,
    beta1: f64,
    beta2: f64,
    eps: f64,
    t: u64,
    m: Vec<f64>,
    v: Vec<f64>,
}

impl Adam {
    pub fn new(lr: f64, n_params: usize) -> Self {
        Self {
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            t: 0,
            m: vec![0.0; n_params],
            v: vec![0.0; n_params],
        }
    }

    pub fn step(&mut self, params: &mut [f64], grads: &[f64]) {
        assert_eq!(params.len(), self.m.len());
        assert_eq!(grads.len(), self.m.len());
        self.t += 1;
        let bc1 = 1.0 - self.beta1.powi(self.t as i32);
        let bc2 = 1.0 - self.beta2.powi(self.t as i32);
        for i in 0..params.len() {
            let g = grads[i];
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * g;
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * g * g;
            let m_hat = self.m[i] / bc1;
            let v_hat = self.v[i] / bc2;
            params[i] -= self.lr * m_hat / (v_hat.sqrt() + self.eps);
        }
    }
}
