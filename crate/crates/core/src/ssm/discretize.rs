use crate::{Error, Result};

/// Below this `|Δ·a|` the first-order limit `B̄ = Δ·B` is used.
pub const ZOH_SINGULAR_THRESHOLD: f64 = 1e-8;

/// Continuous diagonal state-space system.
#[derive(Debug, Clone, PartialEq)]
pub struct SsmParams {
    /// Diagonal of `A`.
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub d: f64,
}

impl SsmParams {
    pub fn new(a: Vec<f64>, b: Vec<f64>, c: Vec<f64>, d: f64) -> Result<Self> {
        let p = Self { a, b, c, d };
        p.validate()?;
        Ok(p)
    }

    pub fn state_size(&self) -> usize {
        self.a.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.a.len();
        if n == 0 || self.b.len() != n || self.c.len() != n {
            return Err(Error::Shape(format!(
                "SSM parameter sizes disagree: A {}, B {}, C {}",
                n,
                self.b.len(),
                self.c.len()
            )));
        }
        let all = self.a.iter().chain(&self.b).chain(&self.c);
        if !all.chain(std::iter::once(&self.d)).all(|v| v.is_finite()) {
            return Err(Error::InvalidArgument(
                "SSM parameters must be finite".into(),
            ));
        }
        Ok(())
    }
}

/// Zero-order-hold discretised system for one timescale `Δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedSsm {
    pub a_bar: Vec<f64>,
    pub b_bar: Vec<f64>,
    pub c: Vec<f64>,
    pub d: f64,
    pub delta: f64,
}

impl DiscretizedSsm {
    pub fn state_size(&self) -> usize {
        self.a_bar.len()
    }
}

/// Scalar ZOH for one diagonal entry: returns `(exp(Δa), (exp(Δa) - 1) / a)`,
/// the second factor being `B̄ / B`.
#[inline]
pub fn zoh(a: f64, delta: f64) -> (f64, f64) {
    let z = delta * a;
    if z.abs() < ZOH_SINGULAR_THRESHOLD {
        (z.exp(), delta)
    } else {
        (z.exp(), z.exp_m1() / a)
    }
}

/// `Ā = exp(ΔA)`, `B̄ = (ΔA)⁻¹(exp(ΔA) − I)·ΔB`; `C` and `D` pass through.
pub fn discretize(p: &SsmParams, delta: f64) -> Result<DiscretizedSsm> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "timescale delta must be positive and finite, got {delta}"
        )));
    }
    p.validate()?;
    let (a_bar, b_bar) = p
        .a
        .iter()
        .zip(&p.b)
        .map(|(&a, &b)| {
            let (ab, scale) = zoh(a, delta);
            (ab, scale * b)
        })
        .unzip();
    Ok(DiscretizedSsm {
        a_bar,
        b_bar,
        c: p.c.clone(),
        d: p.d,
        delta,
    })
}
