//! Just enough double-double arithmetic to reduce `m * theta` modulo 1
//! without losing the low bits for `m` up to ~1e9.

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

impl DoubleDouble {
    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        DoubleDouble { hi, lo }
    }

    /// `sqrt(n)` to about 32 digits.
    pub fn sqrt(n: f64) -> Self {
        let hi = n.sqrt();
        let residual = -hi.mul_add(hi, -n);
        DoubleDouble::new(hi, residual / (2.0 * hi))
    }

    pub fn add_f64(self, x: f64) -> Self {
        let (s, e) = two_sum(self.hi, x);
        DoubleDouble::new(s, e + self.lo)
    }

    /// Exact scaling by a power of two.
    pub fn scale_pow2(self, factor: f64) -> Self {
        DoubleDouble { hi: self.hi * factor, lo: self.lo * factor }
    }

    pub fn div_f64(self, d: f64) -> Self {
        let q = self.hi / d;
        let p_err = q.mul_add(d, -(q * d));
        let rem = ((self.hi - q * d) - p_err + self.lo) / d;
        DoubleDouble::new(q, rem)
    }

    /// Fractional part of `m * self`, in `[0, 1)`.
    pub fn frac_mul(self, m: u64) -> f64 {
        let mf = m as f64;
        let p = self.hi * mf;
        let p_err = self.hi.mul_add(mf, -p);
        let n = p.floor();
        // p - n is exact for |p| < 2^52
        let mut r = (p - n) + (p_err + self.lo * mf);
        r -= r.floor();
        if r >= 1.0 {
            r -= 1.0;
        }
        r
    }

    pub fn frac(self) -> DoubleDouble {
        let n = self.hi.floor();
        let mut out = DoubleDouble::new(self.hi - n, self.lo);
        if out.hi < 0.0 {
            out = out.add_f64(1.0);
        } else if out.hi >= 1.0 {
            out = out.add_f64(-1.0);
        }
        out
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}
