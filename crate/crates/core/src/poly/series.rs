//! Truncated power series with double-double ball coefficients, used to
//! expand straight-line programs around a point.

use crate::numerics::DdBall;

#[derive(Clone, Debug)]
pub(crate) struct Series(pub Vec<DdBall>);

impl Series {
    pub fn constant(x: DdBall, k: usize) -> Series {
        let mut v = vec![DdBall::ZERO; k];
        v[0] = x;
        Series(v)
    }

    /// `c + r t`
    pub fn variable(c: DdBall, r: DdBall, k: usize) -> Series {
        let mut s = Series::constant(c, k);
        if k > 1 {
            s.0[1] = r;
        }
        s
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, o: &Series) -> Series {
        Series(self.0.iter().zip(&o.0).map(|(a, b)| a.add(b)).collect())
    }

    pub fn sub(&self, o: &Series) -> Series {
        Series(self.0.iter().zip(&o.0).map(|(a, b)| a.sub(b)).collect())
    }

    pub fn add_const(&self, x: &DdBall) -> Series {
        let mut s = self.clone();
        s.0[0] = s.0[0].add(x);
        s
    }

    pub fn mul_2exp(&self, k: i64) -> Series {
        Series(self.0.iter().map(|a| a.mul_2exp(k)).collect())
    }

    pub fn mul(&self, o: &Series) -> Series {
        let k = self.len();
        let mut out = vec![DdBall::ZERO; k];
        for (i, a) in self.0.iter().enumerate() {
            if *a == DdBall::ZERO {
                continue;
            }
            for (j, b) in o.0[..k - i].iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Series(out)
    }

    pub fn sqr(&self) -> Series {
        let k = self.len();
        let mut out = vec![DdBall::ZERO; k];
        for i in 0..k {
            if 2 * i < k {
                out[2 * i] = out[2 * i].add(&self.0[i].sqr());
            }
            for j in i + 1..k - i {
                out[i + j] = out[i + j].add(&self.0[i].mul(&self.0[j]).mul_2exp(1));
            }
        }
        Series(out)
    }

    pub fn pow(&self, mut n: u64) -> Series {
        let mut acc = Series::constant(DdBall::one(), self.len());
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.sqr();
            }
        }
        acc
    }
}
