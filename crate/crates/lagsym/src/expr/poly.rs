//! Polynomials over Q in the symbolic constants, and the fraction field built
//! on top of them. Every expression coefficient and every power exponent lives
//! in [`Coeff`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

pub type Sym = Arc<str>;
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Monomial in constants: sorted (name, exponent) pairs, exponents > 0.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct CMono(pub Vec<(Sym, u32)>);

impl CMono {
    pub fn one() -> Self {
        CMono(Vec::new())
    }

    pub fn var(name: &Sym) -> Self {
        CMono(vec![(name.clone(), 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree_in(&self, x: &str) -> u32 {
        self.0.iter().find(|(n, _)| &**n == x).map(|(_, e)| *e).unwrap_or(0)
    }

    pub fn mul(&self, other: &CMono) -> CMono {
        let mut out: Vec<(Sym, u32)> = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        CMono(out)
    }

    /// `self / other` if every exponent stays nonnegative.
    pub fn div(&self, other: &CMono) -> Option<CMono> {
        let mut out = Vec::new();
        let mut j = 0;
        for (n, e) in &self.0 {
            let mut e = *e;
            if j < other.0.len() && other.0[j].0 < *n {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == *n {
                if other.0[j].1 > e {
                    return None;
                }
                e -= other.0[j].1;
                j += 1;
            }
            if e > 0 {
                out.push((n.clone(), e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(CMono(out))
    }

    /// Lexicographic monomial order, variables ranked by name.
    pub fn lex_cmp(&self, other: &CMono) -> Ordering {
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((a, ea)), Some((b, eb))) => match a.cmp(b) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }

    fn without(&self, x: &str) -> CMono {
        CMono(self.0.iter().filter(|(n, _)| &**n != x).cloned().collect())
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct CPoly(pub BTreeMap<CMono, Q>);

impl CPoly {
    pub fn zero() -> Self {
        CPoly(BTreeMap::new())
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(CMono::one(), c);
        }
        CPoly(m)
    }

    pub fn var(name: &Sym) -> Self {
        let mut m = BTreeMap::new();
        m.insert(CMono::var(name), Q::one());
        CPoly(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.0.len() {
            0 => Some(Q::zero()),
            1 => self.0.get(&CMono::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0.get(&CMono::one()).is_some_and(|c| c.is_one())
    }

    pub fn vars(&self) -> BTreeSet<Sym> {
        let mut s = BTreeSet::new();
        for m in self.0.keys() {
            for (n, _) in &m.0 {
                s.insert(n.clone());
            }
        }
        s
    }

    fn add_term(&mut self, m: CMono, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.0.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.0.remove(&m);
                }
            }
            None => {
                self.0.insert(m, c);
            }
        }
    }

    pub fn add(&self, o: &CPoly) -> CPoly {
        let mut r = self.clone();
        for (m, c) in &o.0 {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> CPoly {
        CPoly(self.0.iter().map(|(m, c)| (m.clone(), -c)).collect())
    }

    pub fn sub(&self, o: &CPoly) -> CPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &Q) -> CPoly {
        if k.is_zero() {
            return CPoly::zero();
        }
        CPoly(self.0.iter().map(|(m, c)| (m.clone(), c * k)).collect())
    }

    pub fn mul(&self, o: &CPoly) -> CPoly {
        let mut r = CPoly::zero();
        for (m1, c1) in &self.0 {
            for (m2, c2) in &o.0 {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, n: u32) -> CPoly {
        let mut r = CPoly::one();
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    /// Leading term under the lexicographic order.
    pub fn leading(&self) -> Option<(&CMono, &Q)> {
        self.0.iter().max_by(|a, b| a.0.lex_cmp(b.0))
    }

    pub fn derivative(&self, x: &str) -> CPoly {
        let mut r = CPoly::zero();
        for (m, c) in &self.0 {
            let e = m.degree_in(x);
            if e == 0 {
                continue;
            }
            let nm = CMono(
                m.0.iter()
                    .filter_map(|(n, k)| {
                        if &**n == x {
                            if *k > 1 {
                                Some((n.clone(), k - 1))
                            } else {
                                None
                            }
                        } else {
                            Some((n.clone(), *k))
                        }
                    })
                    .collect(),
            );
            r.add_term(nm, c * q(e as i64));
        }
        r
    }

    /// Exact quotient, `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &CPoly) -> Option<CPoly> {
        if d.is_zero() {
            return None;
        }
        if let Some(k) = d.as_constant() {
            return Some(self.scale(&(Q::one() / k)));
        }
        let (dm, dc) = d.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = CPoly::zero();
        while !rem.is_zero() {
            let (rm, rc) = rem.leading().map(|(m, c)| (m.clone(), c.clone()))?;
            let m = rm.div(&dm)?;
            let c = rc / &dc;
            let mut t = CPoly::zero();
            t.add_term(m, c);
            rem = rem.sub(&t.mul(d));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// Scale so the lex-leading coefficient is one.
    pub fn monic(&self) -> CPoly {
        match self.leading() {
            Some((_, c)) => {
                let k = Q::one() / c;
                self.scale(&k)
            }
            None => CPoly::zero(),
        }
    }

    fn degree_in(&self, x: &str) -> u32 {
        self.0.keys().map(|m| m.degree_in(x)).max().unwrap_or(0)
    }

    fn to_univariate(&self, x: &str) -> Vec<CPoly> {
        let mut out = vec![CPoly::zero(); self.degree_in(x) as usize + 1];
        for (m, c) in &self.0 {
            let d = m.degree_in(x) as usize;
            out[d].add_term(m.without(x), c.clone());
        }
        out
    }

    fn from_univariate(coeffs: &[CPoly], x: &Sym) -> CPoly {
        let mut r = CPoly::zero();
        let xv = CPoly::var(x);
        let mut xp = CPoly::one();
        for c in coeffs {
            r = r.add(&c.mul(&xp));
            xp = xp.mul(&xv);
        }
        r
    }

    /// Greatest common divisor, normalized monic.
    pub fn gcd(&self, o: &CPoly) -> CPoly {
        if self.is_zero() {
            return o.monic();
        }
        if o.is_zero() {
            return self.monic();
        }
        if self.as_constant().is_some() || o.as_constant().is_some() {
            return CPoly::one();
        }
        if self == o {
            return self.monic();
        }
        let va = self.vars();
        let vb = o.vars();
        let x = va.union(&vb).next().cloned().expect("nonconstant");
        if !va.contains(&x) {
            return self.gcd(&o.content_in(&x));
        }
        if !vb.contains(&x) {
            return self.content_in(&x).gcd(o);
        }
        let ca = self.content_in(&x);
        let cb = o.content_in(&x);
        let c = ca.gcd(&cb);
        let mut f = self.div_exact(&ca).expect("content divides").to_univariate(&x);
        let mut g = o.div_exact(&cb).expect("content divides").to_univariate(&x);
        if f.len() < g.len() {
            std::mem::swap(&mut f, &mut g);
        }
        while !(g.len() == 1 && g[0].is_zero()) && !g.is_empty() {
            let r = pseudo_rem(&f, &g);
            f = g;
            g = if r.iter().all(|c| c.is_zero()) {
                vec![CPoly::zero()]
            } else {
                univ_primitive(&r)
            };
        }
        let h = CPoly::from_univariate(&univ_primitive(&f), &x);
        c.mul(&h).monic()
    }

    fn content_in(&self, x: &str) -> CPoly {
        let mut g = CPoly::zero();
        for c in self.to_univariate(x) {
            if c.is_zero() {
                continue;
            }
            g = g.gcd(&c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn eval_f64(&self, env: &dyn Fn(&str) -> Option<f64>) -> Option<f64> {
        let mut acc = 0.0;
        for (m, c) in &self.0 {
            let mut t = q_to_f64(c);
            for (n, e) in &m.0 {
                t *= env(n)?.powi(*e as i32);
            }
            acc += t;
        }
        Some(acc)
    }
}

pub fn q_to_f64(c: &Q) -> f64 {
    use num_traits::ToPrimitive;
    c.to_f64().unwrap_or(f64::NAN)
}

fn trim(v: &mut Vec<CPoly>) {
    while v.len() > 1 && v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn pseudo_rem(f: &[CPoly], g: &[CPoly]) -> Vec<CPoly> {
    let mut r: Vec<CPoly> = f.to_vec();
    trim(&mut r);
    let mut g = g.to_vec();
    trim(&mut g);
    let dg = g.len() - 1;
    let lg = g[dg].clone();
    while r.len() > dg && !(r.len() == 1 && r[0].is_zero()) {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - dg;
        let mut next: Vec<CPoly> = r.iter().map(|c| c.mul(&lg)).collect();
        for (i, gc) in g.iter().enumerate() {
            next[i + shift] = next[i + shift].sub(&gc.mul(&lr));
        }
        next.pop();
        if next.is_empty() {
            next.push(CPoly::zero());
        }
        trim(&mut next);
        r = next;
    }
    r
}

fn univ_primitive(v: &[CPoly]) -> Vec<CPoly> {
    let mut v = v.to_vec();
    trim(&mut v);
    let mut g = CPoly::zero();
    for c in &v {
        if !c.is_zero() {
            g = g.gcd(c);
        }
    }
    if g.is_zero() {
        return v;
    }
    v.iter().map(|c| c.div_exact(&g).expect("content divides")).collect()
}

/// Element of Q(constants), kept reduced with a monic denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Coeff {
    num: CPoly,
    den: CPoly,
}

impl Default for Coeff {
    fn default() -> Self {
        Coeff::zero()
    }
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff { num: CPoly::zero(), den: CPoly::one() }
    }

    pub fn one() -> Self {
        Coeff::from_q(Q::one())
    }

    pub fn from_q(c: Q) -> Self {
        Coeff { num: CPoly::constant(c), den: CPoly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Coeff::from_q(q(n))
    }

    pub fn sym(name: &Sym) -> Self {
        Coeff { num: CPoly::var(name), den: CPoly::one() }
    }

    pub fn num(&self) -> &CPoly {
        &self.num
    }

    pub fn den(&self) -> &CPoly {
        &self.den
    }

    pub fn from_parts(num: CPoly, den: CPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Coeff::zero();
        }
        if let Some(k) = den.as_constant() {
            return Coeff { num: num.scale(&(Q::one() / k)), den: CPoly::one() };
        }
        let (num, den) = if num.as_constant().is_some() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
            }
        };
        let lc = den.leading().map(|(_, c)| c.clone()).expect("nonzero");
        let k = Q::one() / lc;
        Coeff { num: num.scale(&k), den: den.scale(&k) }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn as_q(&self) -> Option<Q> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_q().filter(|c| c.is_integer()).map(|c| c.to_integer())
    }

    pub fn as_small_int(&self) -> Option<i64> {
        use num_traits::ToPrimitive;
        self.as_integer().and_then(|n| n.to_i64())
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn vars(&self) -> BTreeSet<Sym> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v
    }

    pub fn add(&self, o: &Coeff) -> Coeff {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            if self.den.is_one() {
                let n = self.num.add(&o.num);
                return Coeff { num: n, den: CPoly::one() };
            }
            return Coeff::from_parts(self.num.add(&o.num), self.den.clone());
        }
        Coeff::from_parts(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn neg(&self) -> Coeff {
        Coeff { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Coeff) -> Coeff {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Coeff) -> Coeff {
        if self.is_zero() || o.is_zero() {
            return Coeff::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return Coeff { num: self.num.mul(&o.num), den: CPoly::one() };
        }
        Coeff::from_parts(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn inv(&self) -> Option<Coeff> {
        if self.is_zero() {
            return None;
        }
        Some(Coeff::from_parts(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &Coeff) -> Option<Coeff> {
        Some(self.mul(&o.inv()?))
    }

    pub fn pow_int(&self, n: i64) -> Option<Coeff> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let k = n.unsigned_abs() as u32;
        Some(Coeff { num: base.num.pow(k), den: base.den.pow(k) })
    }

    pub fn derivative(&self, x: &str) -> Coeff {
        let dn = self.num.derivative(x);
        let dd = self.den.derivative(x);
        if dd.is_zero() {
            if dn.is_zero() {
                return Coeff::zero();
            }
            return Coeff::from_parts(dn, self.den.clone());
        }
        Coeff::from_parts(dn.mul(&self.den).sub(&self.num.mul(&dd)), self.den.mul(&self.den))
    }

    /// Sign heuristic used by the renderer: sign of the first numerator term.
    pub fn looks_negative(&self) -> bool {
        self.num.0.values().next().is_some_and(|c| c.is_negative())
    }

    pub fn eval_f64(&self, env: &dyn Fn(&str) -> Option<f64>) -> Option<f64> {
        Some(self.num.eval_f64(env)? / self.den.eval_f64(env)?)
    }
}

impl fmt::Display for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.0 {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let mut parts: Vec<String> = Vec::new();
            if m.is_one() || !a.is_one() {
                parts.push(fmt_q(&a));
            }
            for (n, e) in &m.0 {
                if *e == 1 {
                    parts.push(n.to_string());
                } else {
                    parts.push(format!("{}^{}", n, e));
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

pub fn fmt_q(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> CPoly {
        CPoly::var(&Sym::from(n))
    }

    fn c(n: i64) -> CPoly {
        CPoly::constant(q(n))
    }

    #[test]
    fn gcd_of_shared_linear_factor() {
        let g = v("gamma").sub(&c(1));
        let a = g.mul(&v("beta").add(&c(2)));
        let b = g.mul(&v("alpha"));
        assert_eq!(a.gcd(&b), g.monic());
    }

    #[test]
    fn gcd_coprime_is_one() {
        let a = v("a").add(&c(1));
        let b = v("a").sub(&c(1));
        assert!(a.gcd(&b).is_one());
    }

    #[test]
    fn gcd_bivariate_square() {
        let x = v("x");
        let y = v("y");
        let s = x.add(&y);
        let a = s.mul(&s).mul(&x);
        let b = s.mul(&y.sub(&c(3)));
        assert_eq!(a.gcd(&b), s.monic());
    }

    #[test]
    fn coeff_cancellation() {
        let g = Coeff::from_parts(v("gamma").sub(&c(1)), CPoly::one());
        let p = Coeff::sym(&Sym::from("p"));
        let r = g.mul(&p).div(&g).unwrap();
        assert_eq!(r, p);
    }

    #[test]
    fn coeff_common_denominator_sum() {
        // (2b-1)/(2(b-1)) - 1 = 1/(2(b-1))
        let b = v("beta");
        let x = Coeff::from_parts(b.scale(&q(2)).sub(&c(1)), b.scale(&q(2)).sub(&c(2)));
        let y = x.sub(&Coeff::one());
        let expect = Coeff::from_parts(c(1), b.scale(&q(2)).sub(&c(2)));
        assert_eq!(y, expect);
    }

    #[test]
    fn derivative_quotient_rule() {
        let g = v("g");
        let x = Coeff::from_parts(c(1), g.sub(&c(1)));
        let d = x.derivative("g");
        let expect = Coeff::from_parts(c(-1), g.sub(&c(1)).pow(2));
        assert_eq!(d, expect);
    }

    #[test]
    fn exact_division_detects_nondivisor() {
        let a = v("x").mul(&v("y")).add(&c(1));
        assert!(a.div_exact(&v("x")).is_none());
    }
}
