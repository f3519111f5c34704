use std::cmp::Ordering;
use std::fmt;

use crate::numerics::{Dyadic, DyadicComplex};

use super::Disc;

/// Sign of the imaginary parts over a closed region.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImaginarySign {
    /// every point has `Im > 0`
    Positive,
    /// every point has `Im < 0`
    Negative,
    /// anything else, including touching the real axis
    Mixed,
}

/// Closed axis-aligned square with an exact dyadic center and width.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Square {
    pub center: DyadicComplex,
    pub width: Dyadic,
}

impl Square {
    pub fn new(center: DyadicComplex, width: Dyadic) -> Square {
        assert!(width.signum() == Ordering::Greater, "square width must be positive");
        Square { center, width }
    }

    fn half(&self) -> Dyadic {
        self.width.mul_2exp(-1)
    }

    pub fn x_min(&self) -> Dyadic {
        &self.center.re - &self.half()
    }

    pub fn x_max(&self) -> Dyadic {
        &self.center.re + &self.half()
    }

    pub fn y_min(&self) -> Dyadic {
        &self.center.im - &self.half()
    }

    pub fn y_max(&self) -> Dyadic {
        &self.center.im + &self.half()
    }

    /// The four children, centered at `(a ± w/4) + i(b ± w/4)` with width `w/2`,
    /// in the order SW, SE, NW, NE.
    pub fn children(&self) -> [Square; 4] {
        let q = self.width.mul_2exp(-2);
        let w = self.width.mul_2exp(-1);
        let (a, b) = (&self.center.re, &self.center.im);
        let (am, ap) = (a - &q, a + &q);
        let (bm, bp) = (b - &q, b + &q);
        [
            Square::new(DyadicComplex::new(am.clone(), bm.clone()), w.clone()),
            Square::new(DyadicComplex::new(ap.clone(), bm), w.clone()),
            Square::new(DyadicComplex::new(am, bp.clone()), w.clone()),
            Square::new(DyadicComplex::new(ap, bp), w),
        ]
    }

    /// `D(center, 3/4 w)`.
    pub fn containing_disc(&self) -> Disc {
        let r = &self.width * &Dyadic::new(3.into(), -2);
        Disc::new(self.center.clone(), r)
    }

    /// The same square scaled by `factor` about its center.
    pub fn scaled(&self, factor: &Dyadic) -> Square {
        Square::new(self.center.clone(), &self.width * factor)
    }

    pub fn conj(&self) -> Square {
        Square::new(self.center.conj(), self.width.clone())
    }

    pub fn imaginary_sign(&self) -> ImaginarySign {
        if self.y_min().signum() == Ordering::Greater {
            ImaginarySign::Positive
        } else if self.y_max().signum() == Ordering::Less {
            ImaginarySign::Negative
        } else {
            ImaginarySign::Mixed
        }
    }

    /// Every point has `Im <= 0`.
    pub fn in_closed_lower_half_plane(&self) -> bool {
        self.y_max().signum() != Ordering::Greater
    }

    /// Closed square meets the real axis.
    pub fn meets_real_axis(&self) -> bool {
        self.imaginary_sign() == ImaginarySign::Mixed
    }

    pub fn contains_square(&self, other: &Square) -> bool {
        self.x_min() <= other.x_min()
            && other.x_max() <= self.x_max()
            && self.y_min() <= other.y_min()
            && other.y_max() <= self.y_max()
    }

    pub fn contains_point(&self, z: &DyadicComplex) -> bool {
        self.x_min() <= z.re && z.re <= self.x_max() && self.y_min() <= z.im && z.im <= self.y_max()
    }

    /// Lexicographic order of the lower-left corner (x first).
    pub fn corner_cmp(&self, other: &Square) -> Ordering {
        self.x_min().cmp(&other.x_min()).then_with(|| self.y_min().cmp(&other.y_min()))
    }
}

impl fmt::Display for Square {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Square({}, w={})", self.center, self.width)
    }
}

/// `box_children` under its operation name.
pub fn box_children(b: &Square) -> [Square; 4] {
    b.children()
}

/// `containing_disc` under its operation name.
pub fn containing_disc(b: &Square) -> Disc {
    b.containing_disc()
}
