//! Double-double arithmetic, just enough to sum power series whose terms
//! cancel heavily (e.g. `sum (n+1)^(2p) t^n / n!` near the negative real axis).

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub(crate) fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub(crate) fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub(crate) fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }

    pub(crate) fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub(crate) fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Dd { hi, lo }
    }

    pub(crate) fn div_f64(self, b: f64) -> Dd {
        let q1 = self.hi / b;
        let r = self.add(Dd::from_f64(q1).mul_f64(b).neg());
        let q2 = r.hi / b;
        let r = r.add(Dd::from_f64(q2).mul_f64(b).neg());
        let q3 = r.hi / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add(Dd::from_f64(q3))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct DdComplex {
    re: Dd,
    im: Dd,
}

impl DdComplex {
    pub(crate) fn from_c64(z: Complex64) -> Self {
        DdComplex {
            re: Dd::from_f64(z.re),
            im: Dd::from_f64(z.im),
        }
    }

    pub(crate) fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub(crate) fn add(self, o: DdComplex) -> DdComplex {
        DdComplex {
            re: self.re.add(o.re),
            im: self.im.add(o.im),
        }
    }

    /// Product with a plain complex number (treated as exact).
    pub(crate) fn mul_c64(self, z: Complex64) -> DdComplex {
        DdComplex {
            re: self.re.mul_f64(z.re).add(self.im.mul_f64(z.im).neg()),
            im: self.re.mul_f64(z.im).add(self.im.mul_f64(z.re)),
        }
    }

    pub(crate) fn scale(self, s: f64) -> DdComplex {
        DdComplex {
            re: self.re.mul_f64(s),
            im: self.im.mul_f64(s),
        }
    }

    pub(crate) fn div_f64(self, s: f64) -> DdComplex {
        DdComplex {
            re: self.re.div_f64(s),
            im: self.im.div_f64(s),
        }
    }
}
