//! Double-double complex arithmetic (about 32 significant digits).

use kvcauchy::C64;

#[derive(Clone, Copy, Debug)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    pub const PI: Dd = Dd { hi: std::f64::consts::PI, lo: 1.2246467991473532e-16 };

    pub fn new(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }

    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div_f64(self, b: f64) -> Dd {
        let q1 = self.hi / b;
        let (p, e) = two_prod(q1, b);
        let r = self.sub(Dd { hi: p, lo: e });
        let q2 = r.hi / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul(Dd::new(q1)));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul(Dd::new(q2)));
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add(Dd::new(q3))
    }

    pub fn sqrt(self) -> Dd {
        let s = self.hi.sqrt();
        let (p, e) = two_prod(s, s);
        let r = self.sub(Dd { hi: p, lo: e });
        Dd::new(s).add(Dd::new(r.hi / (2.0 * s)))
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

impl Cdd {
    pub const ZERO: Cdd = Cdd { re: Dd::ZERO, im: Dd::ZERO };
    pub const ONE: Cdd = Cdd { re: Dd::ONE, im: Dd::ZERO };

    pub fn from_c64(z: C64) -> Cdd {
        Cdd { re: Dd::new(z.re), im: Dd::new(z.im) }
    }

    pub fn add(self, o: Cdd) -> Cdd {
        Cdd { re: self.re.add(o.re), im: self.im.add(o.im) }
    }

    pub fn mul(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    pub fn scale(self, s: Dd) -> Cdd {
        Cdd { re: self.re.mul(s), im: self.im.mul(s) }
    }

    pub fn to_c64(self) -> C64 {
        C64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// exp(iθ) by a Taylor series at θ/2⁷ followed by repeated squaring.
    pub fn cis(theta: Dd) -> Cdd {
        let s = 7;
        let phi = theta.div_f64((1u32 << s) as f64);
        let mut term = Cdd::ONE;
        let mut sum = Cdd::ONE;
        let iphi = Cdd { re: Dd::ZERO, im: phi };
        for n in 1..24 {
            term = term.mul(iphi);
            term = Cdd { re: term.re.div_f64(n as f64), im: term.im.div_f64(n as f64) };
            sum = sum.add(term);
        }
        for _ in 0..s {
            sum = sum.mul(sum);
        }
        sum
    }
}

/// V(Λ)·F in double-double with F_{kj} = exp(2πi·kj/m)/√m.
pub fn vandermonde_times_dft(lams: &[C64], m: usize) -> Vec<Vec<C64>> {
    let two_pi = Dd::PI.mul(Dd::new(2.0));
    let w: Vec<Cdd> = (0..m).map(|t| Cdd::cis(two_pi.mul(Dd::new(t as f64)).div_f64(m as f64))).collect();
    let inv_sqrt = Dd::ONE.div(Dd::new(m as f64).sqrt());
    lams.iter()
        .map(|&lam| {
            let l = Cdd::from_c64(lam);
            let mut pows = Vec::with_capacity(m);
            let mut p = Cdd::ONE;
            for _ in 0..m {
                pows.push(p);
                p = p.mul(l);
            }
            (0..m)
                .map(|j| {
                    let mut acc = Cdd::ZERO;
                    for (k, pk) in pows.iter().enumerate() {
                        acc = acc.add(pk.mul(w[(j * k) % m]));
                    }
                    acc.scale(inv_sqrt).to_c64()
                })
                .collect()
        })
        .collect()
}
