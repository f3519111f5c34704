use std::cmp::Ordering;
use std::fmt;

use rug::Float;

use crate::numerics::{Dyadic, DyadicComplex};

use super::Square;

/// Closed disc `D(c, r) = {z : |z - c| <= r}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Disc {
    pub center: DyadicComplex,
    pub radius: Dyadic,
}

impl Disc {
    pub fn new(center: DyadicComplex, radius: Dyadic) -> Disc {
        assert!(radius.signum() == Ordering::Greater, "disc radius must be positive");
        Disc { center, radius }
    }

    /// `δΔ`: same center, radius scaled by `δ`.
    pub fn dilate(&self, delta: &Dyadic) -> Disc {
        Disc::new(self.center.clone(), &self.radius * delta)
    }

    /// Dilation by a small integer factor.
    pub fn times(&self, k: i64) -> Disc {
        self.dilate(&Dyadic::from_i64(k))
    }

    pub fn conj(&self) -> Disc {
        Disc::new(self.center.conj(), self.radius.clone())
    }

    pub fn contains_point(&self, z: &DyadicComplex) -> bool {
        let d = DyadicComplex::new(&z.re - &self.center.re, &z.im - &self.center.im);
        d.norm_sqr() <= &self.radius * &self.radius
    }

    /// Squared distance from `|z - c|^2`, compared with `r^2`, for a float point.
    /// Returns `Less` when strictly inside, `Greater` when strictly outside.
    pub fn cmp_float_point(&self, re: &Float, im: &Float) -> Ordering {
        let prec = re.prec().max(im.prec()).max(self.center.bits()).max(self.radius.bits()) * 2 + 64;
        let dx = Float::with_val(prec, re - &self.center.re.to_float(prec));
        let dy = Float::with_val(prec, im - &self.center.im.to_float(prec));
        let d2 = Float::with_val(prec, &dx * &dx) + Float::with_val(prec, &dy * &dy);
        let r = self.radius.to_float(prec);
        d2.partial_cmp(&Float::with_val(prec, &r * &r)).unwrap()
    }

    /// Closed discs share a point.
    pub fn intersects_disc(&self, other: &Disc) -> bool {
        let d = DyadicComplex::new(&self.center.re - &other.center.re, &self.center.im - &other.center.im);
        let s = &self.radius + &other.radius;
        d.norm_sqr() <= &s * &s
    }

    /// Closed disc meets the closed square.
    pub fn intersects_square(&self, b: &Square) -> bool {
        let (x0, x1, y0, y1) = (b.x_min(), b.x_max(), b.y_min(), b.y_max());
        self.intersects_rect(&x0, &x1, &y0, &y1)
    }

    pub(crate) fn intersects_rect(&self, x0: &Dyadic, x1: &Dyadic, y0: &Dyadic, y1: &Dyadic) -> bool {
        let gap = |lo: &Dyadic, hi: &Dyadic, c: &Dyadic| -> Dyadic {
            if c < lo {
                lo - c
            } else if c > hi {
                c - hi
            } else {
                Dyadic::zero()
            }
        };
        let dx = gap(x0, x1, &self.center.re);
        let dy = gap(y0, y1, &self.center.im);
        let d2 = &(&dx * &dx) + &(&dy * &dy);
        d2 <= &self.radius * &self.radius
    }

    /// Disc lies inside the closed square.
    pub fn inside_square(&self, b: &Square) -> bool {
        let (c, r) = (&self.center, &self.radius);
        b.x_min() <= &c.re - r
            && &c.re + r <= b.x_max()
            && b.y_min() <= &c.im - r
            && &c.im + r <= b.y_max()
    }
}

impl fmt::Display for Disc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D({}, {})", self.center, self.radius)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc(re: f64, im: f64, r: f64) -> Disc {
        Disc::new(DyadicComplex::from_f64(re, im), Dyadic::from_f64(r))
    }

    #[test]
    fn dilation_keeps_center() {
        let d = disc(1.0, -2.0, 0.75).times(4);
        assert_eq!(d.center, DyadicComplex::from_f64(1.0, -2.0));
        assert_eq!(d.radius, Dyadic::from_i64(3));
    }

    #[test]
    fn disc_square_intersection() {
        let b = Square::new(DyadicComplex::from_f64(3.0, 0.0), Dyadic::from_i64(2));
        assert!(disc(0.0, 0.0, 2.0).intersects_square(&b)); // touches x = 2
        assert!(!disc(0.0, 0.0, 1.5).intersects_square(&b));
        // corner (2, 1) is at distance sqrt(5) from the origin
        let c = Square::new(DyadicComplex::from_f64(3.0, 2.0), Dyadic::from_i64(2));
        assert!(!disc(0.0, 0.0, 2.2).intersects_square(&c));
        assert!(disc(0.0, 0.0, 2.25).intersects_square(&c));
    }

    #[test]
    fn disc_disc_and_containment() {
        assert!(disc(0.0, 0.0, 1.0).intersects_disc(&disc(2.0, 0.0, 1.0)));
        assert!(!disc(0.0, 0.0, 1.0).intersects_disc(&disc(2.5, 0.0, 1.0)));
        let b = Square::new(DyadicComplex::zero(), Dyadic::from_i64(4));
        assert!(disc(0.0, 0.0, 2.0).inside_square(&b));
        assert!(!disc(0.5, 0.0, 2.0).inside_square(&b));
    }
}
