use crate::error::{Error, Result};

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, pm1) = legendre_pair(n, x);
            let dx = p / (nf * (x * p - pm1) / (x * x - 1.0));
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (p, pm1) = legendre_pair(n, x);
        let dp = nf * (x * p - pm1) / (x * x - 1.0);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `(P_n(x), P_{n-1}(x))`
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 1.0;
    let mut curr = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 1..n {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0) * x * curr - jf * prev) / (jf + 1.0);
        prev = curr;
        curr = next;
    }
    (curr, prev)
}

/// Composite Gauss-Legendre rule: equal panels, one fixed-order rule each.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl CompositeRule {
    pub fn on_interval(start: f64, end: f64, panels: usize, order: usize) -> Result<Self> {
        if panels == 0 {
            return Err(Error::InvalidParameter("quadrature needs at least one panel".into()));
        }
        if !(4..=16).contains(&order) {
            return Err(Error::InvalidParameter(format!("quadrature order must be in 4..=16, got {order}")));
        }
        if !(start.is_finite() && end.is_finite() && end > start) {
            return Err(Error::InvalidParameter(format!("invalid quadrature interval [{start}, {end}]")));
        }
        let (ref_nodes, ref_weights) = gauss_legendre(order);
        let width = (end - start) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for panel in 0..panels {
            let mid = start + (panel as f64 + 0.5) * width;
            for (x, w) in ref_nodes.iter().zip(&ref_weights) {
                nodes.push(mid + 0.5 * width * x);
                weights.push(0.5 * width * w);
            }
        }
        Ok(Self { nodes, weights })
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Composite rule on `[0, y_max]`.
pub fn quadrature_nodes(y_max: f64, panels: usize, order: usize) -> Result<CompositeRule> {
    if !(y_max > 0.0) {
        return Err(Error::InvalidParameter(format!("y_max must be > 0, got {y_max}")));
    }
    CompositeRule::on_interval(0.0, y_max, panels, order)
}
