//! The heuristic expected count M_p = p^{3 p^3} (p! / p^p)^{(p+1) p^2},
//! evaluated entirely in log space at high precision. The two leading
//! terms cancel near p = 7, so the working precision is kept far above
//! what the displayed two-digit mantissa needs.

use astro_float::{BigFloat, Consts, RoundingMode};

use crate::gf::Prime;

const RM: RoundingMode = RoundingMode::ToEven;

/// Default working precision in bits; roughly 96 decimal digits.
pub const DEFAULT_PRECISION: usize = 320;

/// log10 of a huge (or tiny) positive quantity, with a mantissa /
/// exponent view for display.
#[derive(Clone, Debug)]
pub struct LogMagnitude {
    log10: BigFloat,
    mantissa: f64,
    exponent: i64,
}

impl LogMagnitude {
    fn from_log10(log10: BigFloat, prec: usize, cc: &mut Consts) -> Self {
        let floor = log10.floor();
        let frac = log10.sub(&floor, prec, RM);
        let ten = BigFloat::from_u64(10, prec);
        let mantissa = to_f64(&ten.pow(&frac, prec, RM, cc));
        let exponent = to_f64(&floor).round() as i64;
        LogMagnitude {
            log10,
            mantissa,
            exponent,
        }
    }

    /// The full-precision base-10 logarithm.
    pub fn log10_value(&self) -> &BigFloat {
        &self.log10
    }

    pub fn log10_f64(&self) -> f64 {
        to_f64(&self.log10)
    }

    /// Mantissa in [1, 10).
    pub fn mantissa(&self) -> f64 {
        self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    /// Two significant digits in scientific shape,
    /// e.g. "1.4E15" or "1.1E-1438".
    pub fn table_format(&self) -> String {
        let mut m = (self.mantissa * 10.0).round() / 10.0;
        let mut e = self.exponent;
        if m >= 10.0 {
            m /= 10.0;
            e += 1;
        }
        format!("{m:.1}E{e}")
    }
}

fn to_f64(v: &BigFloat) -> f64 {
    v.to_string().parse().expect("finite BigFloat")
}

fn log10_factorial(p: u64, prec: usize, cc: &mut Consts) -> BigFloat {
    let mut acc = BigFloat::from_u64(0, prec);
    for k in 2..=p {
        let term = BigFloat::from_u64(k, prec).log10(prec, RM, cc);
        acc = acc.add(&term, prec, RM);
    }
    acc
}

/// log10 M_p = 3 p^3 log10 p + (p+1) p^2 (log10 p! - p log10 p), with
/// log10 p! summed term by term at the working precision.
pub fn log_m_p_with_precision(p: Prime, prec: usize) -> LogMagnitude {
    let mut cc = Consts::new().expect("constants cache");
    let pv = p.get();
    let log_p = BigFloat::from_u64(pv, prec).log10(prec, RM, &mut cc);
    let log_fact = log10_factorial(pv, prec, &mut cc);

    let cube_term = BigFloat::from_u64(3 * pv * pv * pv, prec).mul(&log_p, prec, RM);
    let perm_count = BigFloat::from_u64((pv + 1) * pv * pv, prec);
    let p_log_p = BigFloat::from_u64(pv, prec).mul(&log_p, prec, RM);
    let perm_term = perm_count.mul(&log_fact.sub(&p_log_p, prec, RM), prec, RM);

    LogMagnitude::from_log10(cube_term.add(&perm_term, prec, RM), prec, &mut cc)
}

pub fn log_m_p(p: Prime) -> LogMagnitude {
    log_m_p_with_precision(p, DEFAULT_PRECISION)
}

/// ln M_p - (-p^4 + 3.5 p^3 ln p): what the leading Stirling terms
/// leave over. The dominant neglected term is (ln(2 pi)/2 - 1) p^3,
/// about -0.081 p^3.
pub fn stirling_residual(p: Prime) -> f64 {
    let prec = DEFAULT_PRECISION;
    let mut cc = Consts::new().expect("constants cache");
    let pv = p.get();
    let ln10 = BigFloat::from_u64(10, prec).ln(prec, RM, &mut cc);
    let ln_m = log_m_p_with_precision(p, prec)
        .log10_value()
        .mul(&ln10, prec, RM);

    let ln_p = BigFloat::from_u64(pv, prec).ln(prec, RM, &mut cc);
    let p4 = BigFloat::from_u64(pv * pv * pv * pv, prec);
    let coeff = BigFloat::from_f64(3.5, prec).mul(&BigFloat::from_u64(pv * pv * pv, prec), prec, RM);
    let approx = coeff.mul(&ln_p, prec, RM).sub(&p4, prec, RM);

    to_f64(&ln_m.sub(&approx, prec, RM))
}
