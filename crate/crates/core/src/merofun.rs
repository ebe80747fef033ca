//! Rational functions of `z` over `K` with poles confined to a configured
//! puncture set, plus the residue calculus used by every cocycle here.
//!
//! Denominators are stored as exponent maps over linear factors `(z - p)`,
//! so pole locations are structural and residue extraction never needs
//! root-finding.  Strict mode enforces the puncture set; oracle mode admits
//! transient poles at arbitrary `K`-rational points (needed for the
//! `z -> 1/z` substitution behind the residue at infinity).

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::scalar::Scalar;

/// Puncture configuration on the sphere: in-points plus the out-point at
/// infinity.  The two-point case is `{0} | {oo}`; the three-point case is
/// `{alpha, -alpha} | {oo}` with `alpha = beta^2` formal and nonzero.
///
/// The genus is 0 throughout, where the square root of the canonical
/// bundle is unique; neither the genus nor a theta-characteristic choice
/// enters any formula here.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Config {
    TwoPoint,
    ThreePoint,
}

impl Config {
    pub fn in_points(&self) -> Vec<Scalar> {
        match self {
            Config::TwoPoint => vec![Scalar::zero()],
            Config::ThreePoint => vec![Scalar::alpha(), -&Scalar::alpha()],
        }
    }

    pub fn points(&self) -> u8 {
        match self {
            Config::TwoPoint => 2,
            Config::ThreePoint => 3,
        }
    }
}

impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Config::TwoPoint => write!(f, "2-point"),
            Config::ThreePoint => write!(f, "3-point"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoleMode {
    /// Poles only at the configured in-points.
    Strict,
    /// Transient poles anywhere (intermediate computations).
    Oracle,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MeroError {
    #[error("incompatible puncture configurations: {0} vs {1}")]
    IncompatibleConfig(Config, Config),
    #[error("stray pole at {0} outside the puncture set")]
    StrayPole(String),
}

/// Dense polynomial in `z` over [`Scalar`].
///
/// Invariant: no trailing zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ZPoly(Vec<Scalar>);

impl ZPoly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        ZPoly(coeffs)
    }

    pub fn zero() -> Self {
        ZPoly(Vec::new())
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::new(vec![c])
    }

    pub fn z() -> Self {
        Self::new(vec![Scalar::zero(), Scalar::one()])
    }

    pub fn monomial(c: Scalar, k: usize) -> Self {
        let mut v = vec![Scalar::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.0
    }

    pub fn add(&self, other: &ZPoly) -> ZPoly {
        let n = self.0.len().max(other.0.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.0.get(i).cloned().unwrap_or_else(Scalar::zero);
            let b = other.0.get(i).cloned().unwrap_or_else(Scalar::zero);
            v.push(&a + &b);
        }
        ZPoly::new(v)
    }

    pub fn sub(&self, other: &ZPoly) -> ZPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ZPoly {
        ZPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &ZPoly) -> ZPoly {
        if self.is_zero() || other.is_zero() {
            return ZPoly::zero();
        }
        let mut v = vec![Scalar::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                v[i + j] = &v[i + j] + &(a * b);
            }
        }
        ZPoly::new(v)
    }

    pub fn scale(&self, c: &Scalar) -> ZPoly {
        ZPoly::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn derivative(&self) -> ZPoly {
        if self.0.len() <= 1 {
            return ZPoly::zero();
        }
        ZPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| &Scalar::from_int(k as i64) * c)
                .collect(),
        )
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.0.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Exact division by `(z - p)`; the caller guarantees divisibility.
    pub fn div_linear(&self, p: &Scalar) -> ZPoly {
        debug_assert!(self.eval(p).is_zero());
        let mut out = vec![Scalar::zero(); self.0.len().saturating_sub(1)];
        let mut carry = Scalar::zero();
        for k in (1..self.0.len()).rev() {
            let q = &self.0[k] + &carry;
            carry = &q * p;
            out[k - 1] = q;
        }
        ZPoly::new(out)
    }

    /// Multiplies by `(z - p)`.
    pub fn mul_linear(&self, p: &Scalar) -> ZPoly {
        self.mul(&ZPoly::new(vec![-p, Scalar::one()]))
    }

    /// Coefficients reversed: `z^deg * self(1/z)`.
    pub fn reversed(&self) -> ZPoly {
        let mut v = self.0.clone();
        v.reverse();
        ZPoly::new(v)
    }
}

/// Meromorphic function on the sphere: `num / prod (z - p)^e`.
///
/// Canonical form: the numerator is not divisible by `(z - p)` for any
/// stored pole `p`, and zero exponents are dropped.  Equality ignores the
/// pole mode.
#[derive(Debug, Clone)]
pub struct MeroFun {
    cfg: Config,
    mode: PoleMode,
    num: ZPoly,
    den: BTreeMap<Scalar, u32>,
}

impl PartialEq for MeroFun {
    fn eq(&self, other: &Self) -> bool {
        self.cfg == other.cfg && self.num == other.num && self.den == other.den
    }
}
impl Eq for MeroFun {}

impl MeroFun {
    pub fn from_parts(
        cfg: Config,
        mode: PoleMode,
        num: ZPoly,
        den: BTreeMap<Scalar, u32>,
    ) -> Result<Self, MeroError> {
        let mut f = MeroFun { cfg, mode, num, den };
        f.normalize();
        if mode == PoleMode::Strict {
            let allowed = cfg.in_points();
            for p in f.den.keys() {
                if !allowed.contains(p) {
                    return Err(MeroError::StrayPole(p.to_string()));
                }
            }
        }
        Ok(f)
    }

    fn normalize(&mut self) {
        self.den.retain(|_, e| *e > 0);
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let points: Vec<Scalar> = self.den.keys().cloned().collect();
        for p in points {
            loop {
                let e = *self.den.get(&p).unwrap_or(&0);
                if e == 0 || !self.num.eval(&p).is_zero() {
                    break;
                }
                self.num = self.num.div_linear(&p);
                if e == 1 {
                    self.den.remove(&p);
                } else {
                    self.den.insert(p.clone(), e - 1);
                }
            }
        }
    }

    pub fn zero(cfg: Config) -> Self {
        MeroFun { cfg, mode: PoleMode::Strict, num: ZPoly::zero(), den: BTreeMap::new() }
    }

    pub fn constant(cfg: Config, c: Scalar) -> Self {
        MeroFun { cfg, mode: PoleMode::Strict, num: ZPoly::constant(c), den: BTreeMap::new() }
    }

    pub fn one(cfg: Config) -> Self {
        Self::constant(cfg, Scalar::one())
    }

    pub fn from_poly(cfg: Config, num: ZPoly) -> Self {
        MeroFun { cfg, mode: PoleMode::Strict, num, den: BTreeMap::new() }
    }

    pub fn z(cfg: Config) -> Self {
        Self::from_poly(cfg, ZPoly::z())
    }

    /// `z^k`; negative `k` introduces a pole at 0 (strict only for the
    /// two-point configuration).
    pub fn z_pow(cfg: Config, k: i64) -> Self {
        if k >= 0 {
            Self::from_poly(cfg, ZPoly::monomial(Scalar::one(), k as usize))
        } else {
            let mode = if cfg == Config::TwoPoint { PoleMode::Strict } else { PoleMode::Oracle };
            let mut den = BTreeMap::new();
            den.insert(Scalar::zero(), (-k) as u32);
            MeroFun { cfg, mode, num: ZPoly::one(), den }
        }
    }

    /// `(z^2 - alpha^2)^k` in the three-point configuration.
    pub fn soc_pow(cfg: Config, k: i64) -> Self {
        debug_assert_eq!(cfg, Config::ThreePoint);
        let alpha = Scalar::alpha();
        if k >= 0 {
            // Expand ((z - alpha)(z + alpha))^k = (z^2 - alpha^2)^k.
            let base = ZPoly::new(vec![-&(&alpha * &alpha), Scalar::zero(), Scalar::one()]);
            let mut acc = ZPoly::one();
            for _ in 0..k {
                acc = acc.mul(&base);
            }
            Self::from_poly(cfg, acc)
        } else {
            let mut den = BTreeMap::new();
            den.insert(alpha.clone(), (-k) as u32);
            den.insert(-&alpha, (-k) as u32);
            MeroFun { cfg, mode: PoleMode::Strict, num: ZPoly::one(), den }
        }
    }

    pub fn cfg(&self) -> Config {
        self.cfg
    }

    pub fn mode(&self) -> PoleMode {
        self.mode
    }

    pub fn num(&self) -> &ZPoly {
        &self.num
    }

    pub fn pole_exponents(&self) -> &BTreeMap<Scalar, u32> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn check_cfg(&self, other: &MeroFun) -> Result<(), MeroError> {
        if self.cfg != other.cfg {
            return Err(MeroError::IncompatibleConfig(self.cfg, other.cfg));
        }
        Ok(())
    }

    fn join_mode(&self, other: &MeroFun) -> PoleMode {
        if self.mode == PoleMode::Oracle || other.mode == PoleMode::Oracle {
            PoleMode::Oracle
        } else {
            PoleMode::Strict
        }
    }

    pub fn add(&self, other: &MeroFun) -> Result<MeroFun, MeroError> {
        self.check_cfg(other)?;
        let mut den = BTreeMap::new();
        for (p, e) in self.den.iter().chain(other.den.iter()) {
            let cur = den.entry(p.clone()).or_insert(0u32);
            *cur = (*cur).max(*e);
        }
        let lift = |f: &MeroFun| -> ZPoly {
            let mut acc = f.num.clone();
            for (p, e) in &den {
                let have = f.den.get(p).copied().unwrap_or(0);
                for _ in have..*e {
                    acc = acc.mul_linear(p);
                }
            }
            acc
        };
        let num = lift(self).add(&lift(other));
        let mut f = MeroFun { cfg: self.cfg, mode: self.join_mode(other), num, den };
        f.normalize();
        Ok(f)
    }

    pub fn sub(&self, other: &MeroFun) -> Result<MeroFun, MeroError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MeroFun {
        MeroFun { cfg: self.cfg, mode: self.mode, num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &MeroFun) -> Result<MeroFun, MeroError> {
        self.check_cfg(other)?;
        let mut den = self.den.clone();
        for (p, e) in &other.den {
            *den.entry(p.clone()).or_insert(0) += e;
        }
        let mut f = MeroFun {
            cfg: self.cfg,
            mode: self.join_mode(other),
            num: self.num.mul(&other.num),
            den,
        };
        f.normalize();
        Ok(f)
    }

    pub fn scale(&self, c: &Scalar) -> MeroFun {
        let mut f = MeroFun {
            cfg: self.cfg,
            mode: self.mode,
            num: self.num.scale(c),
            den: self.den.clone(),
        };
        f.normalize();
        f
    }

    /// Exact derivative with respect to `z`.
    pub fn derivative(&self) -> MeroFun {
        let mut f = self.derivative_impl();
        f.normalize();
        f
    }

    fn derivative_impl(&self) -> MeroFun {
        if self.den.is_empty() {
            return MeroFun {
                cfg: self.cfg,
                mode: self.mode,
                num: self.num.derivative(),
                den: BTreeMap::new(),
            };
        }
        // f = N / prod (z-p)^e:
        // f' = [N' * prod(z-p) - N * sum_i e_i prod_{j != i}(z-p_j)]
        //      / prod (z-p)^(e+1)
        let points: Vec<(Scalar, u32)> =
            self.den.iter().map(|(p, e)| (p.clone(), *e)).collect();
        let mut radical = ZPoly::one();
        for (p, _) in &points {
            radical = radical.mul_linear(p);
        }
        let mut num = self.num.derivative().mul(&radical);
        for (i, (_, e)) in points.iter().enumerate() {
            let mut term = self.num.scale(&Scalar::from_int(*e as i64));
            for (j, (q, _)) in points.iter().enumerate() {
                if j != i {
                    term = term.mul_linear(q);
                }
            }
            num = num.sub(&term);
        }
        let den = points.into_iter().map(|(p, e)| (p, e + 1)).collect();
        if num.is_zero() {
            MeroFun { cfg: self.cfg, mode: self.mode, num, den: BTreeMap::new() }
        } else {
            MeroFun { cfg: self.cfg, mode: self.mode, num, den }
        }
    }

    pub fn nth_derivative(&self, n: u32) -> MeroFun {
        if n == 0 {
            return self.clone();
        }
        // Skip canonicalization on the intermediate steps; derivatives are
        // exact either way and only the final form is user-facing.
        let mut f = self.clone();
        for _ in 0..n - 1 {
            f = f.derivative_impl();
        }
        let mut f = f.derivative_impl();
        f.normalize();
        f
    }

    /// Evaluates at a point where the denominator does not vanish.
    pub fn eval_at(&self, z0: &Scalar) -> Option<Scalar> {
        let mut den_val = Scalar::one();
        for (p, e) in &self.den {
            let lin = z0 - p;
            if lin.is_zero() {
                return None;
            }
            den_val = &den_val * &lin.pow(*e as i64).expect("nonnegative power");
        }
        Some(self.num.eval(z0).div(&den_val).expect("denominator nonzero"))
    }

    /// Residue at a finite point via the order-`p` limit formula
    /// `Res = (1/(p-1)!) * lim D^(p-1) ((z - z0)^p f)`.
    ///
    /// Returns 0 at points where the function is holomorphic.
    pub fn residue_at(&self, z0: &Scalar) -> Scalar {
        let p = match self.den.get(z0) {
            None => return Scalar::zero(),
            Some(e) => *e,
        };
        let mut den = self.den.clone();
        den.remove(z0);
        let g = MeroFun { cfg: self.cfg, mode: self.mode, num: self.num.clone(), den };
        let d = g.nth_derivative(p - 1);
        let mut factorial = Scalar::one();
        for k in 2..=(p - 1) as i64 {
            factorial = &factorial * &Scalar::from_int(k);
        }
        d.eval_at(z0)
            .expect("pole factor removed")
            .div(&factorial)
            .expect("factorial nonzero")
    }

    /// `f(1/z)` as an oracle-mode function.
    pub fn reciprocal_substitution(&self) -> MeroFun {
        // N(1/z) = z^(-d) rev(N)(z);  (1/z - p)^e = (-p)^e (z - 1/p)^e z^(-e)
        // for p != 0, and z^(-e) for p = 0.
        let d = self.num.degree() as i64;
        let mut num = self.num.reversed();
        let mut den: BTreeMap<Scalar, u32> = BTreeMap::new();
        let mut z_exp: i64 = -d;
        let mut const_factor = Scalar::one();
        for (p, e) in &self.den {
            z_exp += *e as i64;
            if p.is_zero() {
                continue;
            }
            let minus_p = -p;
            const_factor = &const_factor * &minus_p.pow(*e as i64).expect("power");
            let recip = p.inv().expect("nonzero point");
            *den.entry(recip).or_insert(0) += e;
        }
        num = num.scale(&const_factor.inv().expect("nonzero factor"));
        if z_exp >= 0 {
            num = num.mul(&ZPoly::monomial(Scalar::one(), z_exp as usize));
        } else {
            *den.entry(Scalar::zero()).or_insert(0) += (-z_exp) as u32;
        }
        let mut f = MeroFun { cfg: self.cfg, mode: PoleMode::Oracle, num, den };
        f.normalize();
        f
    }

    /// `Res_oo(f) = -Res_0(f(1/z) / z^2)`.
    pub fn residue_at_infinity(&self) -> Scalar {
        if self.is_zero() {
            return Scalar::zero();
        }
        let g = self
            .reciprocal_substitution()
            .mul(&MeroFun::z_pow(self.cfg, -2))
            .expect("same config");
        -&g.residue_at(&Scalar::zero())
    }

    /// `(1/2 pi i) * contour integral` over a separating cycle: the sum of
    /// residues at the in-points.  Errors if a finite pole lies outside the
    /// puncture set.
    pub fn cycle_integral(&self) -> Result<Scalar, MeroError> {
        let allowed = self.cfg.in_points();
        for p in self.den.keys() {
            if !allowed.contains(p) {
                return Err(MeroError::StrayPole(p.to_string()));
            }
        }
        let mut acc = Scalar::zero();
        for p in &allowed {
            acc = &acc + &self.residue_at(p);
        }
        Ok(acc)
    }

    /// Inverse, when the numerator factors over the puncture points
    /// (z, z - al, z + al) up to a constant; `None` otherwise.
    pub fn try_inverse(&self) -> Option<MeroFun> {
        if self.is_zero() {
            return None;
        }
        let mut candidates = vec![Scalar::zero()];
        if self.cfg == Config::ThreePoint {
            candidates.push(Scalar::alpha());
            candidates.push(-&Scalar::alpha());
        }
        let mut rest = self.num.clone();
        let mut new_den: BTreeMap<Scalar, u32> = BTreeMap::new();
        for p in candidates {
            while !rest.is_zero() && rest.degree() > 0 && rest.eval(&p).is_zero() {
                rest = rest.div_linear(&p);
                *new_den.entry(p.clone()).or_insert(0) += 1;
            }
        }
        if rest.degree() > 0 {
            return None;
        }
        let c = rest.coeffs().first().cloned().unwrap_or_else(Scalar::zero);
        let mut num = ZPoly::constant(c.inv().ok()?);
        for (p, e) in &self.den {
            for _ in 0..*e {
                num = num.mul_linear(p);
            }
        }
        let mut f = MeroFun { cfg: self.cfg, mode: self.mode, num, den: new_den };
        f.normalize();
        Some(f)
    }

    /// Sum of residues over all finite poles plus the residue at infinity;
    /// identically zero on the sphere.
    pub fn total_residue(&self) -> Scalar {
        let mut acc = self.residue_at_infinity();
        for p in self.den.keys().cloned().collect::<Vec<_>>() {
            acc = &acc + &self.residue_at(&p);
        }
        acc
    }
}

fn render_factor(p: &Scalar, e: u32) -> String {
    let alpha = Scalar::alpha();
    let base = if p.is_zero() {
        "z".to_string()
    } else if *p == alpha {
        "(z-al)".to_string()
    } else if *p == -&alpha {
        "(z+al)".to_string()
    } else {
        format!("(z-{})", p)
    };
    if e == 1 {
        base
    } else {
        format!("{}^{}", base, e)
    }
}

impl fmt::Display for MeroFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut num = String::new();
        for (k, c) in self.num.coeffs().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{}", k),
            };
            let neg = c.render_negative();
            let mag = if neg { -c } else { c.clone() };
            let coeff = if mag.is_one() && !mono.is_empty() {
                String::new()
            } else if mag.render_is_simple() {
                mag.to_string()
            } else {
                format!("({})", mag)
            };
            let body = match (coeff.is_empty(), mono.is_empty()) {
                (true, _) => mono.clone(),
                (false, true) => coeff,
                (false, false) => format!("{}*{}", coeff, mono),
            };
            if num.is_empty() {
                if neg {
                    num.push('-');
                }
            } else {
                num.push_str(if neg { " - " } else { " + " });
            }
            num.push_str(&body);
        }
        if num.is_empty() {
            num.push('0');
        }
        if self.den.is_empty() {
            f.write_str(&num)
        } else {
            // Fixed cosmetic order: z, (z-al), (z+al), then anything else.
            let alpha = Scalar::alpha();
            let rank = |p: &Scalar| {
                if p.is_zero() {
                    0
                } else if *p == alpha {
                    1
                } else if *p == -&alpha {
                    2
                } else {
                    3
                }
            };
            let mut factors: Vec<(&Scalar, u32)> =
                self.den.iter().map(|(p, e)| (p, *e)).collect();
            factors.sort_by(|(p, _), (q, _)| rank(p).cmp(&rank(q)).then_with(|| p.cmp(q)));
            let den: Vec<String> =
                factors.into_iter().map(|(p, e)| render_factor(p, e)).collect();
            write!(f, "({})/({})", num, den.join("*"))
        }
    }
}
