use rug::float::Constant;
use rug::Float;

use super::interval::{ComplexInterval, RealInterval};
use super::mag::Mag;

/// Enclosure of `e^(2*pi*i*g/q)` with width at most `2^-bits`.
pub fn root_of_unity(g: u64, q: u64, bits: u32) -> ComplexInterval {
    assert!(q >= 1 && g < q, "need 0 <= g < q");
    // exact quarter turns
    if (4 * g) % q == 0 {
        let (re, im) = match (4 * g) / q {
            0 => (1, 0),
            1 => (0, 1),
            2 => (-1, 0),
            _ => (0, -1),
        };
        return ComplexInterval::new(RealInterval::from_i64(re), RealInterval::from_i64(im));
    }
    let prec = bits + 40;
    // angle = 2*pi*g/q with three roundings on a value below 8: error < 2^(6 - prec)
    let angle = Float::with_val(prec, Constant::Pi) * (2 * g) / q;
    let (sin, cos) = angle.sin_cos(Float::new(prec));
    // sin and cos are 1-Lipschitz; their own rounding adds at most 2^-prec
    let err = Mag::pow2(7 - prec as i64);
    ComplexInterval::new(RealInterval::new(cos, err), RealInterval::new(sin, err))
}
