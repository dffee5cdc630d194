//! Fully connected regressor trained with Adam on half mean squared error
//! plus an L2 penalty on the weights.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{check_train, LearnerError, Regressor};
use crate::dataset::Dataset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Tanh,
    Logistic,
    Relu,
}

impl Activation {
    fn apply(self, z: &mut Array2<f64>) {
        match self {
            Activation::Tanh => z.mapv_inplace(|v| 1.0 - 2.0 / ((2.0 * v).exp() + 1.0)),
            Activation::Logistic => z.mapv_inplace(|v| 1.0 / (1.0 + (-v).exp())),
            Activation::Relu => z.mapv_inplace(|v| v.max(0.0)),
        }
    }

    /// Derivative expressed through the activation output `a`.
    fn derivative(self, a: f64) -> f64 {
        match self {
            Activation::Tanh => 1.0 - a * a,
            Activation::Logistic => a * (1.0 - a),
            Activation::Relu => {
                if a > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpParams {
    pub hidden: Vec<usize>,
    pub activation: Activation,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub alpha: f64,
}

impl Default for MlpParams {
    fn default() -> Self {
        MlpParams {
            hidden: vec![512, 256, 100],
            activation: Activation::Tanh,
            learning_rate: 1e-3,
            epochs: 100,
            batch_size: 200,
            alpha: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mlp {
    pub n_features: usize,
    pub activation: Activation,
    pub weights: Vec<Array2<f64>>,
    pub biases: Vec<Array1<f64>>,
}

pub struct Gradients {
    pub weights: Vec<Array2<f64>>,
    pub biases: Vec<Array1<f64>>,
}

struct Adam {
    m: Gradients,
    v: Gradients,
    t: i32,
}

impl Adam {
    const BETA1: f64 = 0.9;
    const BETA2: f64 = 0.999;
    const EPS: f64 = 1e-8;

    fn new(net: &Mlp) -> Self {
        let zeros = || Gradients {
            weights: net.weights.iter().map(|w| Array2::zeros(w.raw_dim())).collect(),
            biases: net.biases.iter().map(|b| Array1::zeros(b.raw_dim())).collect(),
        };
        Adam { m: zeros(), v: zeros(), t: 0 }
    }

    fn step(&mut self, net: &mut Mlp, g: &Gradients, lr: f64) {
        self.t += 1;
        let lr_t = lr * (1.0 - Self::BETA2.powi(self.t)).sqrt() / (1.0 - Self::BETA1.powi(self.t));
        for l in 0..net.weights.len() {
            Self::update(lr_t, as_mut(&mut net.weights[l]), as_mut(&mut self.m.weights[l]), as_mut(&mut self.v.weights[l]), as_ref(&g.weights[l]));
            Self::update(
                lr_t,
                net.biases[l].as_slice_mut().expect("contiguous"),
                self.m.biases[l].as_slice_mut().expect("contiguous"),
                self.v.biases[l].as_slice_mut().expect("contiguous"),
                g.biases[l].as_slice().expect("contiguous"),
            );
        }
    }

    fn update(lr_t: f64, p: &mut [f64], m: &mut [f64], v: &mut [f64], g: &[f64]) {
        for (((p, m), v), &g) in p.iter_mut().zip(m.iter_mut()).zip(v.iter_mut()).zip(g) {
            *m = Self::BETA1 * *m + (1.0 - Self::BETA1) * g;
            *v = Self::BETA2 * *v + (1.0 - Self::BETA2) * g * g;
            *p -= lr_t * *m / (v.sqrt() + Self::EPS);
        }
    }
}

fn as_mut(a: &mut Array2<f64>) -> &mut [f64] {
    a.as_slice_mut().expect("standard layout")
}

fn as_ref(a: &Array2<f64>) -> &[f64] {
    a.as_slice().expect("standard layout")
}

pub fn to_array(rows: &[Vec<f64>]) -> Array2<f64> {
    let d = rows.first().map_or(0, Vec::len);
    Array2::from_shape_fn((rows.len(), d), |(i, j)| rows[i][j])
}

impl Mlp {
    /// Glorot-uniform weights and biases.
    pub fn init(n_features: usize, params: &MlpParams, rng: &mut ChaCha8Rng) -> Self {
        let mut sizes = vec![n_features];
        sizes.extend(&params.hidden);
        sizes.push(1);
        let factor = if params.activation == Activation::Logistic { 2.0 } else { 6.0 };
        let mut weights = Vec::new();
        let mut biases = Vec::new();
        for w in sizes.windows(2) {
            let bound = (factor / (w[0] + w[1]) as f64).sqrt();
            weights.push(Array2::from_shape_fn((w[0], w[1]), |_| rng.gen_range(-bound..bound)));
            biases.push(Array1::from_shape_fn(w[1], |_| rng.gen_range(-bound..bound)));
        }
        Mlp { n_features, activation: params.activation, weights, biases }
    }

    /// Layer outputs, input first and prediction column last.
    fn forward(&self, x: ArrayView2<f64>) -> Vec<Array2<f64>> {
        let mut acts = vec![x.to_owned()];
        let last = self.weights.len() - 1;
        for (l, (w, b)) in self.weights.iter().zip(&self.biases).enumerate() {
            let mut z = acts[l].dot(w) + b;
            if l < last {
                self.activation.apply(&mut z);
            }
            acts.push(z);
        }
        acts
    }

    pub fn predict_batch(&self, x: ArrayView2<f64>) -> Array1<f64> {
        self.forward(x).pop().expect("output layer").column(0).to_owned()
    }

    /// Penalized batch loss and its gradients.
    pub fn loss_and_gradients(&self, x: ArrayView2<f64>, y: ArrayView1<f64>, alpha: f64) -> (f64, Gradients) {
        let n = x.nrows() as f64;
        let acts = self.forward(x);
        let diff = &acts.last().expect("output layer").column(0) - &y;
        let penalty: f64 = self.weights.iter().map(|w| w.iter().map(|v| v * v).sum::<f64>()).sum();
        let loss = 0.5 * diff.dot(&diff) / n + 0.5 * alpha * penalty / n;
        (loss, self.backward(&acts, diff, alpha))
    }

    fn gradients(&self, x: ArrayView2<f64>, y: ArrayView1<f64>, alpha: f64) -> Gradients {
        let acts = self.forward(x);
        let diff = &acts.last().expect("output layer").column(0) - &y;
        self.backward(&acts, diff, alpha)
    }

    fn backward(&self, acts: &[Array2<f64>], diff: Array1<f64>, alpha: f64) -> Gradients {
        let n = diff.len() as f64;
        let layers = self.weights.len();
        let mut gw = Vec::with_capacity(layers);
        let mut gb = Vec::with_capacity(layers);
        let mut delta = (diff / n).insert_axis(Axis(1));
        for l in (0..layers).rev() {
            let mut g = acts[l].t().dot(&delta).as_standard_layout().into_owned();
            g.scaled_add(alpha / n, &self.weights[l]);
            gw.push(g);
            gb.push(delta.sum_axis(Axis(0)));
            if l > 0 {
                let mut back = delta.dot(&self.weights[l].t());
                ndarray::Zip::from(&mut back).and(&acts[l]).for_each(|d, &a| *d *= self.activation.derivative(a));
                delta = back;
            }
        }
        gw.reverse();
        gb.reverse();
        Gradients { weights: gw, biases: gb }
    }

    pub fn fit(train: &Dataset, params: &MlpParams, seed: u64) -> Result<Self, LearnerError> {
        check_train(train)?;
        if params.batch_size == 0 || params.hidden.contains(&0) {
            return Err(LearnerError::InvalidParams("batch size and layer widths must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut net = Mlp::init(train.dim(), params, &mut rng);
        let y0 = train.targets[0];
        if train.targets.iter().all(|&t| t == y0) {
            let last = net.weights.len() - 1;
            net.weights[last].fill(0.0);
            net.biases[last].fill(y0);
            return Ok(net);
        }
        let x = to_array(&train.rows);
        let y = Array1::from(train.targets.clone());
        let n = train.len();
        let batch = params.batch_size.min(n);
        let mut order: Vec<usize> = (0..n).collect();
        let mut adam = Adam::new(&net);
        for _ in 0..params.epochs {
            order.shuffle(&mut rng);
            for chunk in order.chunks(batch) {
                let xb = x.select(Axis(0), chunk);
                let yb = y.select(Axis(0), chunk);
                let g = net.gradients(xb.view(), yb.view(), params.alpha);
                adam.step(&mut net, &g, params.learning_rate);
            }
        }
        Ok(net)
    }

    pub fn n_parameters(&self) -> usize {
        self.weights.iter().map(Array2::len).sum::<usize>() + self.biases.iter().map(Array1::len).sum::<usize>()
    }
}

impl Regressor for Mlp {
    fn n_features(&self) -> usize {
        self.n_features
    }

    fn predict_unchecked(&self, x: &[f64]) -> f64 {
        let row = ArrayView2::from_shape((1, x.len()), x).expect("row shape");
        self.predict_batch(row)[0]
    }

    fn predict_rows_unchecked(&self, rows: &[Vec<f64>]) -> Vec<f64> {
        if rows.is_empty() {
            return Vec::new();
        }
        self.predict_batch(to_array(rows).view()).to_vec()
    }
}
