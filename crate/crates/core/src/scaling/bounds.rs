use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn binomial(n: u64, k: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `sum_{j<d} C(n, j) 3^j`.
pub fn gv_sum(n: u64, d: u64) -> BigUint {
    (0..d.min(n + 1)).map(|j| binomial(n, j) * BigUint::from(3u8).pow(j as u32)).sum()
}

/// The quantum Gilbert-Varshamov condition `sum_{j<d} C(n, j) 3^j <= 2^(n-k)`.
pub fn gv_exists(n: u64, k: u64, d: u64) -> Result<bool> {
    if k > n || d == 0 {
        return Err(Error::InvalidArgument(format!("need n >= k and d >= 1, got ({n}, {k}, {d})")));
    }
    Ok(gv_sum(n, d) <= BigUint::one() << (n - k))
}

/// Natural log of a big integer.
fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        x.to_f64().expect("finite").ln()
    } else {
        let shift = bits - 64;
        (x >> shift).to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
    }
}

fn ln_ratio(r: &Ratio<BigUint>) -> f64 {
    ln_big(r.numer()) - ln_big(r.denom())
}

/// Parameters of the sparsified m-fold concatenation and its exponent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonBound {
    pub n0: u64,
    pub delta: Ratio<u64>,
    pub m: u64,
    pub b: u64,
    /// `b m n0^(m+1)`
    pub n: BigUint,
    /// `(delta n0)^m`
    pub d: Ratio<BigUint>,
    /// `(ln n - ln d) / ln n`
    pub eps_actual: f64,
    /// `(ln n + m ln(bm) + m(1+m) ln(1/delta)) / (m ln n)`
    pub eps_formula: f64,
    pub holds: bool,
}

pub fn epsilon_bound(n0: u64, delta: Ratio<u64>, m: u64, b: u64) -> Result<EpsilonBound> {
    if delta.is_zero() || delta > Ratio::one() {
        return Err(Error::InvalidArgument(format!("delta must lie in (0, 1], got {delta}")));
    }
    if b == 0 || m == 0 || n0 < 2 {
        return Err(Error::InvalidArgument("need b > 0, m >= 1 and n0 >= 2".into()));
    }
    let n = BigUint::from(b) * BigUint::from(m) * BigUint::from(n0).pow((m + 1) as u32);
    let d0 = Ratio::new(BigUint::from(*delta.numer()) * BigUint::from(n0), BigUint::from(*delta.denom()));
    let d = (0..m).fold(Ratio::one(), |acc: Ratio<BigUint>, _| acc * d0.clone());
    let ln_n = ln_big(&n);
    let ln_d = ln_ratio(&d);
    let eps_actual = (ln_n - ln_d) / ln_n;
    let mf = m as f64;
    let ln_inv_delta = -((*delta.numer() as f64).ln() - (*delta.denom() as f64).ln());
    let eps_formula = (ln_n + mf * ((b * m) as f64).ln() + mf * (1.0 + mf) * ln_inv_delta) / (mf * ln_n);
    Ok(EpsilonBound { n0, delta, m, b, n, d, eps_actual, eps_formula, holds: eps_actual <= eps_formula + 1e-12 })
}

/// `epsilon_bound` over `m = 1..=m_max`.
pub fn epsilon_sweep(n0: u64, delta: Ratio<u64>, b: u64, m_max: u64) -> Result<Vec<EpsilonBound>> {
    (1..=m_max).map(|m| epsilon_bound(n0, delta, m, b)).collect()
}
