//! Square-summable scalar sequences and shift weight functions.
//!
//! An [`AlphaSeq`] is one of four rules: an explicit finite table, the
//! lacunary 0/1 sequence supported on indices 2^k - 1 (optionally damped by
//! c^k), the slowly-decaying rule a_k = (k+1)^{-3/2} (log(k+1))^{-1/2}, or a
//! plain geometric sequence. Tail sums are exact for tables and geometric
//! rules and bracketed by integral remainders for the logarithmic rule.
//!
//! A [`BetaWeight`] is a strictly positive weight function n -> beta(n); the
//! derived shift weights are w_n = beta(n+1)/beta(n).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Horizon used when the logarithmic rule needs explicit partial sums.
const EXAMPLE_RULE_HORIZON: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq)]
pub enum AlphaSeq {
    Explicit(Vec<f64>),
    /// a_{2^k - 1} = ratio^k, zero elsewhere. ratio = 1 is the literal
    /// lacunary sequence, which is not square-summable.
    Pisier { ratio: f64 },
    /// a_0 = 0 and a_k = (k+1)^{-3/2} (log(k+1))^{-1/2} for k >= 1.
    Example32,
    Geometric { ratio: f64 },
}

/// Tail sum `sum_{i >= k} a_i^2`, reported as a bracket when the rule only
/// admits integral estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tail {
    Finite { lo: f64, hi: f64 },
    Infinite,
}

impl Tail {
    pub fn exact(v: f64) -> Self {
        Tail::Finite { lo: v, hi: v }
    }

    /// Conservative (upper) value; infinite tails map to +inf.
    pub fn upper(&self) -> f64 {
        match self {
            Tail::Finite { hi, .. } => *hi,
            Tail::Infinite => f64::INFINITY,
        }
    }

    pub fn lower(&self) -> f64 {
        match self {
            Tail::Finite { lo, .. } => *lo,
            Tail::Infinite => f64::INFINITY,
        }
    }
}

impl AlphaSeq {
    pub fn explicit(table: &[f64]) -> Result<Self> {
        if table.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParam("non-finite table entry".into()));
        }
        Ok(AlphaSeq::Explicit(table.to_vec()))
    }

    pub fn pisier_literal() -> Self {
        AlphaSeq::Pisier { ratio: 1.0 }
    }

    pub fn pisier(ratio: f64) -> Result<Self> {
        if !(ratio > 0.0 && ratio <= 1.0) {
            return Err(Error::InvalidParam(format!(
                "pisier ratio must lie in (0, 1], got {ratio}"
            )));
        }
        Ok(AlphaSeq::Pisier { ratio })
    }

    pub fn geometric(ratio: f64) -> Result<Self> {
        if !(ratio.abs() > 0.0 && ratio.abs() < 1.0) {
            return Err(Error::InvalidParam(format!(
                "geometric ratio must lie in (0, 1) in modulus, got {ratio}"
            )));
        }
        Ok(AlphaSeq::Geometric { ratio })
    }

    /// Value a_k.
    pub fn value(&self, k: usize) -> f64 {
        match self {
            AlphaSeq::Explicit(t) => t.get(k).copied().unwrap_or(0.0),
            AlphaSeq::Pisier { ratio } => {
                // Indices of the form 2^j - 1.
                let kp1 = k as u64 + 1;
                if kp1.is_power_of_two() {
                    let j = kp1.trailing_zeros();
                    ratio.powi(j as i32)
                } else {
                    0.0
                }
            }
            AlphaSeq::Example32 => {
                if k == 0 {
                    // The rule divides by log(1) at k = 0; the sequence
                    // starts at k = 1 with a zero head.
                    0.0
                } else {
                    let kp1 = (k + 1) as f64;
                    kp1.powf(-1.5) * kp1.ln().powf(-0.5)
                }
            }
            AlphaSeq::Geometric { ratio } => ratio.powi(k as i32),
        }
    }

    /// Index from which on the tail is analytically summable; `None` when the
    /// tails are infinite.
    pub fn support_hint(&self) -> Option<usize> {
        match self {
            AlphaSeq::Explicit(t) => Some(t.len()),
            AlphaSeq::Pisier { ratio } => {
                if *ratio >= 1.0 {
                    None
                } else {
                    Some(0)
                }
            }
            AlphaSeq::Example32 => Some(1),
            AlphaSeq::Geometric { .. } => Some(0),
        }
    }

    /// Tail sum `sum_{i >= k} a_i^2`.
    pub fn tail_sq(&self, k: usize) -> Tail {
        match self {
            AlphaSeq::Explicit(t) => {
                let s: f64 = t.iter().skip(k).map(|v| v * v).sum();
                Tail::exact(s)
            }
            AlphaSeq::Pisier { ratio } => {
                if *ratio >= 1.0 {
                    return Tail::Infinite;
                }
                // First lacunary index >= k is 2^j0 - 1.
                let mut j0 = 0u32;
                while (1u64 << j0) - 1 < k as u64 {
                    j0 += 1;
                }
                let q = ratio * ratio;
                Tail::exact(q.powi(j0 as i32) / (1.0 - q))
            }
            AlphaSeq::Example32 => example_rule_tail(k),
            AlphaSeq::Geometric { ratio } => {
                let q = ratio * ratio;
                Tail::exact(q.powi(k as i32) / (1.0 - q))
            }
        }
    }
}

/// Tail of the logarithmic rule: explicit summation to a horizon plus an
/// integral-remainder bracket.
fn example_rule_tail(k: usize) -> Tail {
    // sum_{i >= k} a_i^2 = sum_{j >= max(k,1)+1} 1/(j^3 log j).
    let start = k.max(1) + 1;
    let horizon = EXAMPLE_RULE_HORIZON.max(10 * start);
    let mut partial = 0.0f64;
    for j in (start..=horizon).rev() {
        let jf = j as f64;
        partial += 1.0 / (jf * jf * jf * jf.ln());
    }
    let jf = horizon as f64;
    // Integration by parts: int_J^inf t^-3/log t dt
    //   = 1/(2 J^2 log J) - (1/2) int_J^inf t^-3 log^-2 t dt,
    // and the correction integral lies in [0, 1/(2 J^2 log^2 J)].
    let head = |j: f64| 1.0 / (2.0 * j * j * j.ln());
    let upper_from = |j: f64| head(j);
    let lower_from = |j: f64| head(j) - 1.0 / (4.0 * j * j * j.ln() * j.ln());
    // Remainder sum_{j > J} h(j) is bracketed by integrals from J+1 and J.
    let lo = partial + lower_from(jf + 1.0).max(0.0);
    let hi = partial + upper_from(jf);
    Tail::Finite { lo, hi }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantityA {
    pub value: f64,
    pub diverged: bool,
    pub argmax_k: usize,
}

/// `sup_{0 <= k <= k_max} (k+1)^2 sum_{i >= k} a_i^2`.
///
/// Tails are exact for table/geometric/lacunary rules and integral-bracketed
/// for the logarithmic rule (the upper value is used, keeping the supremum
/// conservative). Divergence is flagged when the partial suprema keep
/// doubling over the last decade of k, or analytically when the tails are
/// infinite.
pub fn quantity_a(alpha: &AlphaSeq, k_max: usize) -> QuantityA {
    if matches!(alpha, AlphaSeq::Pisier { ratio } if *ratio >= 1.0) {
        return QuantityA {
            value: f64::INFINITY,
            diverged: true,
            argmax_k: 0,
        };
    }
    let k_max = k_max.max(1);
    let tails = tails_upper(alpha, k_max);
    let mut best = 0.0f64;
    let mut argmax = 0usize;
    let mut sup_at: Vec<(usize, f64)> = Vec::new();
    for (k, tail) in tails.iter().enumerate() {
        let term = ((k + 1) as f64).powi(2) * tail;
        if term > best {
            best = term;
            argmax = k;
        }
        sup_at.push((k, best));
    }
    // Doubling diagnostic over the final decade.
    let decade_start = k_max / 10;
    let sup_then = sup_at[decade_start].1;
    let diverged = sup_then > 0.0 && best > 2.0 * sup_then && argmax > decade_start;
    QuantityA {
        value: best,
        diverged,
        argmax_k: argmax,
    }
}

/// Upper tail values for k = 0..=k_max in one pass.
fn tails_upper(alpha: &AlphaSeq, k_max: usize) -> Vec<f64> {
    match alpha {
        AlphaSeq::Explicit(t) => {
            let mut tails = vec![0.0; k_max + 1];
            let mut acc = 0.0;
            let top = t.len().max(k_max + 1);
            let mut suffix = vec![0.0; top + 1];
            for i in (0..top).rev() {
                let v = t.get(i).copied().unwrap_or(0.0);
                acc += v * v;
                suffix[i] = acc;
            }
            for (k, tk) in tails.iter_mut().enumerate() {
                *tk = suffix[k];
            }
            tails
        }
        AlphaSeq::Example32 => {
            // One backward sweep over the rule values plus the remainder
            // bracket at the horizon.
            let horizon = EXAMPLE_RULE_HORIZON.max(10 * (k_max + 2));
            let jf = horizon as f64;
            let remainder_hi = 1.0 / (2.0 * jf * jf * jf.ln());
            let mut acc = remainder_hi;
            let mut tails = vec![0.0; k_max + 1];
            for j in (2..=horizon).rev() {
                let jf = j as f64;
                acc += 1.0 / (jf * jf * jf * jf.ln());
                // tail(k) starts at j = k+1 for k >= 1.
                if j >= 2 && j - 1 <= k_max {
                    tails[j - 1] = acc;
                }
            }
            tails[0] = tails[1]; // a_0 = 0
            tails
        }
        _ => (0..=k_max).map(|k| alpha.tail_sq(k).upper()).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantityB {
    pub partial: f64,
    pub converged: bool,
    pub tail_bound: Option<f64>,
}

/// Partial sum `sum_{k <= n_max} (k+1)^power a_k^2` with an analytic
/// convergence verdict per rule and a tail bound where one exists.
pub fn quantity_b(alpha: &AlphaSeq, power: f64, n_max: usize) -> Result<QuantityB> {
    if power < 2.0 {
        return Err(Error::InvalidParam(format!(
            "power must be >= 2, got {power}"
        )));
    }
    let mut partial = 0.0f64;
    match alpha {
        AlphaSeq::Pisier { .. } | AlphaSeq::Explicit(_) | AlphaSeq::Geometric { .. } => {
            for k in 0..=n_max {
                let v = alpha.value(k);
                if v != 0.0 {
                    partial += ((k + 1) as f64).powf(power) * v * v;
                }
            }
        }
        AlphaSeq::Example32 => {
            // Summed in ascending k; the terms decay too slowly for the
            // order to matter at the tolerances used downstream.
            for k in 1..=n_max {
                let kp1 = (k + 1) as f64;
                partial += kp1.powf(power) * kp1.powf(-3.0) / kp1.ln();
            }
        }
    }
    let (converged, tail_bound) = match alpha {
        AlphaSeq::Explicit(t) => {
            let tail: f64 = t
                .iter()
                .enumerate()
                .skip(n_max + 1)
                .map(|(k, v)| ((k + 1) as f64).powf(power) * v * v)
                .sum();
            (true, Some(tail))
        }
        AlphaSeq::Geometric { ratio } => {
            let q = ratio * ratio;
            let t_next = ((n_max + 2) as f64).powf(power) * q.powi(n_max as i32 + 1);
            let growth = q * (1.0 + 1.0 / (n_max as f64 + 2.0)).powf(power);
            if growth < 1.0 {
                (true, Some(t_next / (1.0 - growth)))
            } else {
                // Horizon too short for the ratio bound; still convergent.
                (true, None)
            }
        }
        AlphaSeq::Example32 => {
            // (k+1)^{power-3} / log(k+1) >= 1/((k+1) log(k+1)) for power >= 2,
            // and that series diverges.
            (false, None)
        }
        AlphaSeq::Pisier { ratio } => {
            // Terms (2^j)^power c^{2j}: geometric with quotient 2^power c^2.
            let q = 2f64.powf(power) * ratio * ratio;
            if q < 1.0 {
                let j_next = (((n_max + 2) as f64).log2()).ceil() as i32;
                let t_next = q.powi(j_next);
                (true, Some(t_next / (1.0 - q)))
            } else {
                (false, None)
            }
        }
    };
    Ok(QuantityB {
        partial,
        converged,
        tail_bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbelCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub defect: f64,
}

/// Exact rearrangement check for the double sum
/// `sum_n (n+1)^2 sum_{i >= n} a_i^2 = sum_i [sum_{n <= i} (n+1)^2] a_i^2`
/// over the sequence truncated to `n_terms` entries.
pub fn abel_swap_check(alpha: &AlphaSeq, n_terms: usize) -> AbelCheck {
    let table: Vec<f64> = (0..n_terms).map(|k| alpha.value(k)).collect();
    let mut suffix = vec![0.0f64; n_terms + 1];
    for i in (0..n_terms).rev() {
        suffix[i] = suffix[i + 1] + table[i] * table[i];
    }
    let mut lhs = 0.0f64;
    for n in 0..n_terms {
        lhs += ((n + 1) as f64).powi(2) * suffix[n];
    }
    let mut rhs = 0.0f64;
    for (i, v) in table.iter().enumerate() {
        let ii = i as f64;
        // sum_{n=0}^{i} (n+1)^2 = (i+1)(i+2)(2i+3)/6
        let w = (ii + 1.0) * (ii + 2.0) * (2.0 * ii + 3.0) / 6.0;
        rhs += w * v * v;
    }
    AbelCheck {
        lhs,
        rhs,
        defect: (lhs - rhs).abs(),
    }
}

/// Strictly positive weight function beta(n).
#[derive(Debug, Clone, PartialEq)]
pub enum BetaWeight {
    Const(f64),
    /// beta(n) = sqrt(n+1) (the expansive 2-isometry weight profile).
    Sqrt,
    Table(Vec<f64>),
}

impl BetaWeight {
    pub fn one() -> Self {
        BetaWeight::Const(1.0)
    }

    pub fn constant(c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::NonPositiveWeight { index: 0, value: c });
        }
        Ok(BetaWeight::Const(c))
    }

    pub fn table(values: &[f64]) -> Result<Self> {
        for (i, &v) in values.iter().enumerate() {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::NonPositiveWeight { index: i, value: v });
            }
        }
        Ok(BetaWeight::Table(values.to_vec()))
    }

    pub fn beta(&self, n: usize) -> Result<f64> {
        match self {
            BetaWeight::Const(c) => Ok(*c),
            BetaWeight::Sqrt => Ok(((n + 1) as f64).sqrt()),
            BetaWeight::Table(t) => t.get(n).copied().ok_or_else(|| {
                Error::InvalidParam(format!("beta table of length {} has no entry {n}", t.len()))
            }),
        }
    }

    /// Shift weights w_n = beta(n+1)/beta(n) for n = 0..N-1.
    pub fn shift_weights(&self, n_weights: usize) -> Result<Vec<f64>> {
        match self {
            // Single rounding: sqrt((n+2)/(n+1)) rather than a quotient of
            // two square roots.
            BetaWeight::Sqrt => Ok((0..n_weights)
                .map(|n| ((n as f64 + 2.0) / (n as f64 + 1.0)).sqrt())
                .collect()),
            _ => (0..n_weights)
                .map(|n| Ok(self.beta(n + 1)? / self.beta(n)?))
                .collect(),
        }
    }
}

/// JSON wire form for a sequence rule:
/// `{"kind": "explicit"|"pisier"|"example32"|"geometric", "table": [...], "ratio": c}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlphaSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
}

impl AlphaSpec {
    pub fn to_seq(&self) -> Result<AlphaSeq> {
        match self.kind.as_str() {
            "explicit" => AlphaSeq::explicit(
                self.table
                    .as_deref()
                    .ok_or_else(|| Error::InvalidParam("explicit kind needs a table".into()))?,
            ),
            "pisier" => AlphaSeq::pisier(self.ratio.unwrap_or(1.0)),
            "example32" => Ok(AlphaSeq::Example32),
            "geometric" => AlphaSeq::geometric(
                self.ratio
                    .ok_or_else(|| Error::InvalidParam("geometric kind needs a ratio".into()))?,
            ),
            other => Err(Error::InvalidParam(format!("unknown alpha kind `{other}`"))),
        }
    }

    pub fn from_seq(seq: &AlphaSeq) -> Self {
        match seq {
            AlphaSeq::Explicit(t) => AlphaSpec {
                kind: "explicit".into(),
                table: Some(t.clone()),
                ratio: None,
            },
            AlphaSeq::Pisier { ratio } => AlphaSpec {
                kind: "pisier".into(),
                table: None,
                ratio: Some(*ratio),
            },
            AlphaSeq::Example32 => AlphaSpec {
                kind: "example32".into(),
                table: None,
                ratio: None,
            },
            AlphaSeq::Geometric { ratio } => AlphaSpec {
                kind: "geometric".into(),
                table: None,
                ratio: Some(*ratio),
            },
        }
    }
}

/// JSON wire form for a weight rule:
/// `{"kind": "const"|"sqrt"|"table", "table": [...], "value": c}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BetaSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
}

impl BetaSpec {
    pub fn to_weight(&self) -> Result<BetaWeight> {
        match self.kind.as_str() {
            "const" => {
                let c = self
                    .value
                    .or_else(|| self.table.as_ref().and_then(|t| t.first().copied()))
                    .unwrap_or(1.0);
                BetaWeight::constant(c)
            }
            "sqrt" => Ok(BetaWeight::Sqrt),
            "table" => BetaWeight::table(
                self.table
                    .as_deref()
                    .ok_or_else(|| Error::InvalidParam("table kind needs a table".into()))?,
            ),
            other => Err(Error::InvalidParam(format!("unknown beta kind `{other}`"))),
        }
    }

    pub fn from_weight(w: &BetaWeight) -> Self {
        match w {
            BetaWeight::Const(c) => BetaSpec {
                kind: "const".into(),
                table: None,
                value: Some(*c),
            },
            BetaWeight::Sqrt => BetaSpec {
                kind: "sqrt".into(),
                table: None,
                value: None,
            },
            BetaWeight::Table(t) => BetaSpec {
                kind: "table".into(),
                table: Some(t.clone()),
                value: None,
            },
        }
    }
}
