//! The Lie superalgebra of Krichever-Novikov type on the punctured sphere:
//! bracket, central-extension 2-cocycle, dual-valued 1-cocycle, coadjoint
//! action, and the golden structure tables for the 3-point configuration.
//!
//! Conventions.  Elements are `e (dz)^-1 + phi (dz)^-1/2`.  The 2-cocycle
//! carries an explicit leading minus on the even-even part relative to the
//! classical vector-field cocycle; the closed-form tables below are stated
//! for exactly this orientation.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::density::{
    basis, expand_in_dual_basis, kn_pairing, BasisIndex, Density, DensityError, Family, HalfInt,
};
use crate::linalg;
use crate::merofun::{Config, MeroError, MeroFun};
use crate::scalar::{rat, Rational, Scalar, ScalarError};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LieError {
    #[error("incompatible puncture configurations")]
    IncompatibleConfig,
    #[error("input is not homogeneous (both graded parts nonzero)")]
    NonHomogeneousInput,
    #[error("operation is not available on the {0} configuration")]
    UnsupportedConfig(Config),
    #[error("not a valid basis pair for the closed-form table: {0}")]
    InvalidBasis(String),
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error(transparent)]
    Mero(#[from] MeroError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign_product(self, other: Parity) -> i64 {
        if self == Parity::Odd && other == Parity::Odd {
            -1
        } else {
            1
        }
    }
}

/// A projective connection, kept as one global chart function on the
/// sphere; `R = 0` is the flat default.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectiveConnection {
    r: MeroFun,
}

impl ProjectiveConnection {
    pub fn zero(cfg: Config) -> Self {
        ProjectiveConnection { r: MeroFun::zero(cfg) }
    }

    /// Wraps a strict-mode function; a pole outside the puncture set is
    /// rejected.
    pub fn new(r: MeroFun) -> Result<Self, LieError> {
        let allowed = r.cfg().in_points();
        for p in r.pole_exponents().keys() {
            if !allowed.contains(p) {
                return Err(LieError::Mero(MeroError::StrayPole(p.to_string())));
            }
        }
        Ok(ProjectiveConnection { r })
    }

    pub fn mf(&self) -> &MeroFun {
        &self.r
    }

    pub fn cfg(&self) -> Config {
        self.r.cfg()
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero()
    }
}

/// Element `e (dz)^-1 + phi (dz)^-1/2` of the Lie superalgebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperElement {
    even: Density,
    odd: Density,
}

impl SuperElement {
    pub fn new(even: Density, odd: Density) -> Result<Self, LieError> {
        if even.weight() != HalfInt::int(-1) || odd.weight() != HalfInt::from_twice(-1) {
            return Err(LieError::Density(DensityError::WeightMismatch(format!(
                "super element needs weights (-1, -1/2), got ({}, {})",
                even.weight(),
                odd.weight()
            ))));
        }
        if even.cfg() != odd.cfg() {
            return Err(LieError::IncompatibleConfig);
        }
        Ok(SuperElement { even, odd })
    }

    pub fn from_even(even: Density) -> Result<Self, LieError> {
        let odd = Density::zero(even.cfg(), HalfInt::from_twice(-1));
        Self::new(even, odd)
    }

    pub fn from_odd(odd: Density) -> Result<Self, LieError> {
        let even = Density::zero(odd.cfg(), HalfInt::int(-1));
        Self::new(even, odd)
    }

    pub fn zero(cfg: Config) -> Self {
        SuperElement {
            even: Density::zero(cfg, HalfInt::int(-1)),
            odd: Density::zero(cfg, HalfInt::from_twice(-1)),
        }
    }

    /// Basis element: family `e`/`V` (even) or `b`/`phi` (odd).
    pub fn basis(family: Family, index: HalfInt, cfg: Config) -> Result<Self, LieError> {
        let d = basis(family, index, cfg)?;
        match family {
            Family::E | Family::V => Self::from_even(d),
            Family::B | Family::Phi => Self::from_odd(d),
            _ => Err(LieError::InvalidBasis(format!(
                "{} is not a Lie superalgebra family",
                family.name()
            ))),
        }
    }

    pub fn even(&self) -> &Density {
        &self.even
    }

    pub fn odd(&self) -> &Density {
        &self.odd
    }

    pub fn cfg(&self) -> Config {
        self.even.cfg()
    }

    pub fn is_zero(&self) -> bool {
        self.even.is_zero() && self.odd.is_zero()
    }

    /// Parity of a homogeneous element; zero counts as even.
    pub fn parity(&self) -> Result<Parity, LieError> {
        match (self.even.is_zero(), self.odd.is_zero()) {
            (false, false) => Err(LieError::NonHomogeneousInput),
            (true, false) => Ok(Parity::Odd),
            _ => Ok(Parity::Even),
        }
    }

    pub fn add(&self, other: &SuperElement) -> Result<SuperElement, LieError> {
        Ok(SuperElement {
            even: self.even.add(&other.even)?,
            odd: self.odd.add(&other.odd)?,
        })
    }

    pub fn scale(&self, c: &Scalar) -> SuperElement {
        SuperElement { even: self.even.scale(c), odd: self.odd.scale(c) }
    }

    pub fn neg(&self) -> SuperElement {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn sub(&self, other: &SuperElement) -> Result<SuperElement, LieError> {
        self.add(&other.neg())
    }
}

/// Element of the geometric dual `F_2 + F_3/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualSuperElement {
    even: Density,
    odd: Density,
}

impl DualSuperElement {
    pub fn new(even: Density, odd: Density) -> Result<Self, LieError> {
        if even.weight() != HalfInt::int(2) || odd.weight() != HalfInt::from_twice(3) {
            return Err(LieError::Density(DensityError::WeightMismatch(format!(
                "dual super element needs weights (2, 3/2), got ({}, {})",
                even.weight(),
                odd.weight()
            ))));
        }
        if even.cfg() != odd.cfg() {
            return Err(LieError::IncompatibleConfig);
        }
        Ok(DualSuperElement { even, odd })
    }

    pub fn zero(cfg: Config) -> Self {
        DualSuperElement {
            even: Density::zero(cfg, HalfInt::int(2)),
            odd: Density::zero(cfg, HalfInt::from_twice(3)),
        }
    }

    pub fn even(&self) -> &Density {
        &self.even
    }

    pub fn odd(&self) -> &Density {
        &self.odd
    }

    pub fn cfg(&self) -> Config {
        self.even.cfg()
    }

    pub fn is_zero(&self) -> bool {
        self.even.is_zero() && self.odd.is_zero()
    }

    pub fn parity(&self) -> Result<Parity, LieError> {
        match (self.even.is_zero(), self.odd.is_zero()) {
            (false, false) => Err(LieError::NonHomogeneousInput),
            (true, false) => Ok(Parity::Odd),
            _ => Ok(Parity::Even),
        }
    }

    pub fn add(&self, other: &DualSuperElement) -> Result<DualSuperElement, LieError> {
        Ok(DualSuperElement {
            even: self.even.add(&other.even)?,
            odd: self.odd.add(&other.odd)?,
        })
    }

    pub fn scale(&self, c: &Scalar) -> DualSuperElement {
        DualSuperElement { even: self.even.scale(c), odd: self.odd.scale(c) }
    }

    pub fn sub(&self, other: &DualSuperElement) -> Result<DualSuperElement, LieError> {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }
}

fn half() -> Scalar {
    Scalar::from_rational(rat(1, 2))
}

/// The super bracket, componentwise:
/// `[e,f] = (-e'f + ef') (dz)^-1`, `[e,psi] = (-e'psi/2 + e psi') (dz)^-1/2`,
/// `[phi,psi] = phi psi / 2 (dz)^-1`.
pub fn sbracket(x: &SuperElement, y: &SuperElement) -> Result<SuperElement, LieError> {
    if x.cfg() != y.cfg() {
        return Err(LieError::IncompatibleConfig);
    }
    let even = x
        .even
        .poisson(&y.even)?
        .add(&x.odd.dot(&y.odd)?.scale(&half()))?;
    let odd = x.even.poisson(&y.odd)?.add(&x.odd.poisson(&y.even)?)?;
    Ok(SuperElement { even, odd })
}

/// Super skewsymmetry `[x,y] = -(-1)^(|x||y|) [y,x]` on homogeneous inputs.
pub fn check_super_skew(x: &SuperElement, y: &SuperElement) -> Result<bool, LieError> {
    let sign = x.parity()?.sign_product(y.parity()?);
    let lhs = sbracket(x, y)?;
    let rhs = sbracket(y, x)?.scale(&Scalar::from_int(-sign));
    Ok(lhs == rhs)
}

/// Super Jacobi identity on homogeneous inputs:
/// `(-1)^(|x||z|) [x,[y,z]] + (-1)^(|y||x|) [y,[z,x]] + (-1)^(|z||y|) [z,[x,y]] = 0`.
pub fn check_super_jacobi(
    x: &SuperElement,
    y: &SuperElement,
    z: &SuperElement,
) -> Result<bool, LieError> {
    let (px, py, pz) = (x.parity()?, y.parity()?, z.parity()?);
    let t1 = sbracket(x, &sbracket(y, z)?)?.scale(&Scalar::from_int(px.sign_product(pz)));
    let t2 = sbracket(y, &sbracket(z, x)?)?.scale(&Scalar::from_int(py.sign_product(px)));
    let t3 = sbracket(z, &sbracket(x, y)?)?.scale(&Scalar::from_int(pz.sign_product(py)));
    Ok(t1.add(&t2)?.add(&t3)?.is_zero())
}

/// The local 2-cocycle.  Even-even part
/// `-(1/2 pi i) * integral of (e'''f - ef''')/2 - R(e'f - ef')`,
/// odd-odd part
/// `(1/2 pi i) * integral of (phi''psi + phi psi'')/2 - R phi psi / 2`,
/// mixed part zero.
pub fn cocycle2(
    x: &SuperElement,
    y: &SuperElement,
    r: &ProjectiveConnection,
) -> Result<Scalar, LieError> {
    if x.cfg() != y.cfg() || x.cfg() != r.cfg() {
        return Err(LieError::IncompatibleConfig);
    }
    let e = x.even.mf();
    let f = y.even.mf();
    let ee = {
        let third = |g: &MeroFun| g.nth_derivative(3);
        let lead = third(e).mul(f)?.sub(&e.mul(&third(f))?)?.scale(&half());
        let conn = r
            .r
            .mul(&e.derivative().mul(f)?.sub(&e.mul(&f.derivative())?)?)?;
        lead.sub(&conn)?.cycle_integral()?
    };
    let phi = x.odd.mf();
    let psi = y.odd.mf();
    let oo = {
        let second = |g: &MeroFun| g.nth_derivative(2);
        let lead = second(phi).mul(psi)?.add(&phi.mul(&second(psi))?)?.scale(&half());
        let conn = r.r.mul(&phi.mul(psi)?)?.scale(&half());
        lead.sub(&conn)?.cycle_integral()?
    };
    Ok(&-&ee + &oo)
}

/// (C1): `c(u,v) = -(-1)^(|u||v|) c(v,u)` on homogeneous inputs.
pub fn check_cocycle2_skew(
    x: &SuperElement,
    y: &SuperElement,
    r: &ProjectiveConnection,
) -> Result<bool, LieError> {
    let sign = x.parity()?.sign_product(y.parity()?);
    let lhs = cocycle2(x, y, r)?;
    let rhs = &Scalar::from_int(-sign) * &cocycle2(y, x, r)?;
    Ok(lhs == rhs)
}

/// (C2): `c(u,[v,w]) = c([u,v],w) + (-1)^(|u||v|) c(v,[u,w])`.
pub fn check_cocycle2_jacobi(
    x: &SuperElement,
    y: &SuperElement,
    z: &SuperElement,
    r: &ProjectiveConnection,
) -> Result<bool, LieError> {
    let sign = x.parity()?.sign_product(y.parity()?);
    let lhs = cocycle2(x, &sbracket(y, z)?, r)?;
    let rhs = &cocycle2(&sbracket(x, y)?, z, r)?
        + &(&Scalar::from_int(sign) * &cocycle2(y, &sbracket(x, z)?, r)?);
    Ok(lhs == rhs)
}

fn delta(a: i64, b: i64) -> bool {
    a == b
}

/// Closed form of the 2-cocycle on the 3-point basis (the six table lines),
/// delta-supported in the index sum.
pub fn closed_form_c(i: &BasisIndex, j: &BasisIndex) -> Result<Scalar, LieError> {
    let bad = |msg: &str| LieError::InvalidBasis(msg.to_string());
    let alpha2 = Scalar::alpha_pow(2);
    let alpha4 = Scalar::alpha_pow(4);
    let int = Scalar::from_int;
    match (i.family, j.family) {
        (Family::V, Family::V) => {
            let n = i.index.as_int().ok_or_else(|| bad("integer index expected"))?;
            let m = j.index.as_int().ok_or_else(|| bad("integer index expected"))?;
            match (n.rem_euclid(2), m.rem_euclid(2)) {
                (0, 0) => {
                    // c(V_2k, V_2l)
                    let (k, l) = (n / 2, m / 2);
                    let mut acc = Scalar::zero();
                    if delta(k + l, 0) {
                        acc = &acc + &int(-2 * k * (4 * k * k - 1));
                    }
                    if delta(k + l, 1) {
                        acc = &acc + &(&int(-8 * k * (k - 1) * (2 * k - 1)) * &alpha2);
                    }
                    if delta(k + l, 2) {
                        acc = &acc + &(&int(-8 * k * (k - 1) * (k - 2)) * &alpha4);
                    }
                    Ok(acc)
                }
                (1, 1) => {
                    // c(V_(2k+1), V_(2l+1))
                    let (k, l) = ((n - 1) / 2, (m - 1) / 2);
                    let mut acc = Scalar::zero();
                    if delta(k + l, 0) {
                        acc = &acc + &(&int(-8 * (k + 1) * k * (k - 1)) * &alpha2);
                    }
                    if delta(k + l, -1) {
                        acc = &acc + &int(-4 * k * (k + 1) * (2 * k + 1));
                    }
                    Ok(acc)
                }
                _ => Ok(Scalar::zero()),
            }
        }
        (Family::Phi, Family::Phi) => {
            let (ti, tj) = (i.index.twice(), j.index.twice());
            // +type: i = 2k + 1/2 (twice = 1 mod 4); -type: i = 2k - 1/2.
            let plus = |t: i64| t.rem_euclid(4) == 1;
            let (tp, tm) = match (plus(ti), plus(tj)) {
                (true, false) => (ti, tj),
                (false, true) => (tj, ti),
                _ => return Ok(Scalar::zero()),
            };
            let k = (tp - 1) / 4;
            let l = (tm + 1) / 4;
            let mut acc = Scalar::zero();
            if delta(k + l, 0) {
                acc = &acc + &int(4 * k * (2 * k + 1));
            }
            if delta(k + l, 1) {
                acc = &acc + &(&int(8 * k * (k - 1)) * &alpha2);
            }
            Ok(acc)
        }
        (Family::V, Family::Phi) | (Family::Phi, Family::V) => Ok(Scalar::zero()),
        _ => Err(bad(&format!(
            "closed form is defined on V/phi pairs, got {} and {}",
            i, j
        ))),
    }
}

/// Closed form of the 2-cocycle on the 2-point basis: the classical
/// `c(e_n, e_-n) = -(n^3 - n)` orientation plus `c(b_i, b_-i) = 2(i^2 - 1/4)`.
pub fn closed_form_c_twopoint(i: &BasisIndex, j: &BasisIndex) -> Result<Scalar, LieError> {
    let bad = |msg: &str| LieError::InvalidBasis(msg.to_string());
    match (i.family, j.family) {
        (Family::E, Family::E) => {
            let n = i.index.as_int().ok_or_else(|| bad("integer index expected"))?;
            let m = j.index.as_int().ok_or_else(|| bad("integer index expected"))?;
            if n + m == 0 {
                Ok(Scalar::from_int(-(n * n * n - n)))
            } else {
                Ok(Scalar::zero())
            }
        }
        (Family::B, Family::B) => {
            let (ti, tj) = (i.index.twice(), j.index.twice());
            if ti + tj == 0 {
                // 2(i^2 - 1/4) = (ti^2 - 1)/2
                Ok(Scalar::from_rational(rat(ti * ti - 1, 2)))
            } else {
                Ok(Scalar::zero())
            }
        }
        (Family::E, Family::B) | (Family::B, Family::E) => Ok(Scalar::zero()),
        _ => Err(bad("two-point closed form is defined on e/b pairs")),
    }
}

/// Verifies that changing the projective connection changes the cocycle by
/// the coboundary of `f(Z) = -(1/2 pi i) * integral of R * Z_even`.
pub fn coboundary_witness_check(
    r: &ProjectiveConnection,
    x: &SuperElement,
    y: &SuperElement,
) -> Result<bool, LieError> {
    let zero = ProjectiveConnection::zero(r.cfg());
    let diff = &cocycle2(x, y, r)? - &cocycle2(x, y, &zero)?;
    let bracket = sbracket(x, y)?;
    let witness = -&r.r.mul(bracket.even.mf())?.cycle_integral()?;
    Ok(diff == witness)
}

/// The dual-valued 1-cocycle:
/// `C(e (dz)^-1) = -(e''' - 2Re' - R'e) dz^2`,
/// `C(phi (dz)^-1/2) = (phi'' - R phi / 2) dz^(3/2)`.
pub fn onecocycle_l(x: &SuperElement, r: &ProjectiveConnection) -> Result<DualSuperElement, LieError> {
    if x.cfg() != r.cfg() {
        return Err(LieError::IncompatibleConfig);
    }
    let e = x.even.mf();
    let even = {
        let e3 = e.nth_derivative(3);
        let t2 = r.r.mul(&e.derivative())?.scale(&Scalar::from_int(2));
        let t3 = r.r.derivative().mul(e)?;
        Density::new(e3.sub(&t2)?.sub(&t3)?.neg(), HalfInt::int(2))
    };
    let phi = x.odd.mf();
    let odd = {
        let p2 = phi.nth_derivative(2);
        let t = r.r.mul(phi)?.scale(&half());
        Density::new(p2.sub(&t)?, HalfInt::from_twice(3))
    };
    DualSuperElement::new(even, odd)
}

/// Coadjoint action on the geometric dual:
/// `ad*_e (u + w) = {e,u} + {e,w}` and
/// `ad*_phi (u + w) = -{phi,w} + (-1/2) phi . u`.
pub fn coad_l(x: &SuperElement, u: &DualSuperElement) -> Result<DualSuperElement, LieError> {
    if x.cfg() != u.cfg() {
        return Err(LieError::IncompatibleConfig);
    }
    let even = x
        .even
        .poisson(&u.even)?
        .sub(&x.odd.poisson(&u.odd)?)?;
    let odd = x
        .even
        .poisson(&u.odd)?
        .sub(&x.odd.dot(&u.even)?.scale(&half()))?;
    DualSuperElement::new(even, odd)
}

/// `<u, x>` componentwise via the K-N pairing.
pub fn pair_super(u: &DualSuperElement, x: &SuperElement) -> Result<Scalar, LieError> {
    let even = kn_pairing(&u.even, &x.even)?;
    let odd = kn_pairing(&u.odd, &x.odd)?;
    Ok(&even + &odd)
}

/// Verifies both the 1-cocycle identity
/// `C([x,y]) = ad*_x C(y) - (-1)^(|x||y|) ad*_y C(x)` and the pairing
/// consistency `<C(x), y> = c(x, y)` on homogeneous inputs.
pub fn check_onecocycle_l(
    x: &SuperElement,
    y: &SuperElement,
    r: &ProjectiveConnection,
) -> Result<bool, LieError> {
    let sign = x.parity()?.sign_product(y.parity()?);
    let lhs = onecocycle_l(&sbracket(x, y)?, r)?;
    let rhs = coad_l(x, &onecocycle_l(y, r)?)?
        .sub(&coad_l(y, &onecocycle_l(x, r)?)?.scale(&Scalar::from_int(sign)))?;
    let identity = lhs == rhs;
    let pairing = pair_super(&onecocycle_l(x, r)?, y)? == cocycle2(x, y, r)?;
    Ok(identity && pairing)
}

/// Defining relation of the coadjoint action:
/// `<ad*_x u, y> = -(-1)^(|x||u|) <u, [x,y]>`.
pub fn check_coad_duality(
    x: &SuperElement,
    u: &DualSuperElement,
    y: &SuperElement,
) -> Result<bool, LieError> {
    let sign = x.parity()?.sign_product(u.parity()?);
    let lhs = pair_super(&coad_l(x, u)?, y)?;
    let rhs = &Scalar::from_int(-sign) * &pair_super(u, &sbracket(x, y)?)?;
    Ok(lhs == rhs)
}

/// Checks that the polynomial copy of `osp(1|2)` (fields of degree <= 2,
/// half-densities of degree <= 1) closes under the bracket and that the
/// flat-connection 2-cocycle vanishes on all 15 of its pairs.
pub fn osp12_vanishing_check(cfg: Config) -> Result<bool, LieError> {
    if cfg != Config::ThreePoint {
        return Err(LieError::UnsupportedConfig(cfg));
    }
    let sqrt2 = Scalar::sqrt2();
    let even = |mf: MeroFun| SuperElement::from_even(Density::new(mf, HalfInt::int(-1)));
    let odd = |mf: MeroFun| SuperElement::from_odd(Density::new(mf, HalfInt::from_twice(-1)));
    let span = [even(MeroFun::one(cfg))?,
        even(MeroFun::z(cfg))?,
        even(MeroFun::z_pow(cfg, 2))?,
        odd(MeroFun::one(cfg).scale(&sqrt2))?,
        odd(MeroFun::z(cfg).scale(&sqrt2))?];
    let in_span = |el: &SuperElement| -> bool {
        let e = el.even().mf();
        let o = el.odd().mf();
        e.pole_exponents().is_empty()
            && o.pole_exponents().is_empty()
            && (e.is_zero() || e.num().degree() <= 2)
            && (o.is_zero() || o.num().degree() <= 1)
    };
    let r0 = ProjectiveConnection::zero(cfg);
    for (i, x) in span.iter().enumerate() {
        for y in &span[i..] {
            if !in_span(&sbracket(x, y)?) {
                return Ok(false);
            }
            if !cocycle2(x, y, &r0)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Sparse table of cocycle values or dual-coefficient expansions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructureTable {
    Pairs(BTreeMap<(BasisIndex, BasisIndex), Scalar>),
    Expansions(BTreeMap<BasisIndex, BTreeMap<BasisIndex, Scalar>>),
}

fn render_scalar(s: &Scalar, beta: Option<&Rational>) -> Result<String, ScalarError> {
    match beta {
        None => Ok(s.to_string()),
        Some(b) => Ok(s.eval_beta(b)?.to_string()),
    }
}

impl StructureTable {
    pub fn to_json(&self, beta: Option<&Rational>) -> Result<serde_json::Value, ScalarError> {
        use serde_json::{json, Value};
        let mut rows = Vec::new();
        match self {
            StructureTable::Pairs(entries) => {
                for ((l, r), v) in entries {
                    rows.push(json!({
                        "left": l.to_string(),
                        "right": r.to_string(),
                        "value": render_scalar(v, beta)?,
                    }));
                }
            }
            StructureTable::Expansions(entries) => {
                for (arg, coeffs) in entries {
                    let mut map = serde_json::Map::new();
                    for (b, c) in coeffs {
                        map.insert(b.to_string(), Value::String(render_scalar(c, beta)?));
                    }
                    rows.push(json!({ "arg": arg.to_string(), "coeffs": Value::Object(map) }));
                }
            }
        }
        Ok(Value::Array(rows))
    }

    pub fn to_csv(&self, beta: Option<&Rational>) -> Result<String, ScalarError> {
        let mut out = String::new();
        match self {
            StructureTable::Pairs(entries) => {
                out.push_str("left,right,value\n");
                for ((l, r), v) in entries {
                    out.push_str(&format!("{},{},{}\n", l, r, render_scalar(v, beta)?));
                }
            }
            StructureTable::Expansions(entries) => {
                out.push_str("arg,dual,coeff\n");
                for (arg, coeffs) in entries {
                    for (b, c) in coeffs {
                        out.push_str(&format!("{},{},{}\n", arg, b, render_scalar(c, beta)?));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn to_pretty(&self, beta: Option<&Rational>) -> Result<String, ScalarError> {
        let mut out = String::new();
        match self {
            StructureTable::Pairs(entries) => {
                for ((l, r), v) in entries {
                    out.push_str(&format!("c({}, {}) = {}\n", l, r, render_scalar(v, beta)?));
                }
            }
            StructureTable::Expansions(entries) => {
                for (arg, coeffs) in entries {
                    let terms: Result<Vec<String>, ScalarError> = coeffs
                        .iter()
                        .map(|(b, c)| Ok(format!("{} {}", render_scalar(c, beta)?, b)))
                        .collect();
                    out.push_str(&format!("C({}) = {}\n", arg, terms?.join(" + ")));
                }
            }
        }
        Ok(out)
    }
}

/// All Lie-side basis indices with `|index| <= window`.
pub fn lie_basis_indices(cfg: Config, window: i64) -> Vec<BasisIndex> {
    let (even_fam, odd_fam) = match cfg {
        Config::TwoPoint => (Family::E, Family::B),
        Config::ThreePoint => (Family::V, Family::Phi),
    };
    let mut out: Vec<BasisIndex> = (-window..=window)
        .map(|n| BasisIndex::new(even_fam, HalfInt::int(n)))
        .collect();
    out.extend(
        (-(2 * window)..=(2 * window))
            .filter(|t| t.rem_euclid(2) == 1)
            .map(|t| BasisIndex::new(odd_fam, HalfInt::from_twice(t))),
    );
    out
}

/// Golden table of the 2-cocycle with `R = 0`: every nonzero value on basis
/// pairs within the window, computed by residue calculus and asserted equal
/// to the closed-form lines.
pub fn table_c2(window: i64, cfg: Config) -> Result<StructureTable, LieError> {
    let r0 = ProjectiveConnection::zero(cfg);
    let idxs = lie_basis_indices(cfg, window);
    let mut entries = BTreeMap::new();
    for i in &idxs {
        let x = SuperElement::basis(i.family, i.index, cfg)?;
        for j in &idxs {
            let y = SuperElement::basis(j.family, j.index, cfg)?;
            let value = cocycle2(&x, &y, &r0)?;
            let expect = match cfg {
                Config::ThreePoint => closed_form_c(i, j)?,
                Config::TwoPoint => closed_form_c_twopoint(i, j)?,
            };
            assert_eq!(
                value, expect,
                "cocycle2({}, {}) disagrees with the closed form",
                i, j
            );
            if !value.is_zero() {
                entries.insert((*i, *j), value);
            }
        }
    }
    Ok(StructureTable::Pairs(entries))
}

/// Closed form of the 1-cocycle expansion on the 3-point basis.
pub fn closed_form_c1l(b: &BasisIndex) -> Result<BTreeMap<BasisIndex, Scalar>, LieError> {
    let mut out = BTreeMap::new();
    let alpha2 = Scalar::alpha_pow(2);
    let alpha4 = Scalar::alpha_pow(4);
    let mut push = |fam: Family, twice: i64, c: Scalar| {
        if !c.is_zero() {
            out.insert(BasisIndex::new(fam, HalfInt::from_twice(twice)), c);
        }
    };
    match b.family {
        Family::V => {
            let n = b.index.as_int().ok_or_else(|| {
                LieError::InvalidBasis("integer index expected".to_string())
            })?;
            let int = Scalar::from_int;
            if n.rem_euclid(2) == 0 {
                push(Family::VDual, -2 * n, int(-n * (n - 1) * (n + 1)));
                push(
                    Family::VDual,
                    -2 * n + 4,
                    &int(-2 * n * (n - 2) * (n - 1)) * &alpha2,
                );
                push(
                    Family::VDual,
                    -2 * n + 8,
                    &int(-n * (n - 2) * (n - 4)) * &alpha4,
                );
            } else {
                push(Family::VDual, -2 * n, int(-(n + 1) * n * (n - 1)));
                push(
                    Family::VDual,
                    -2 * n + 4,
                    &int(-(n + 1) * (n - 1) * (n - 3)) * &alpha2,
                );
            }
        }
        Family::Phi => {
            let t = b.index.twice();
            // 2 (i + 1/2)(i - 1/2) = (t^2 - 1)/2
            let lead = Scalar::from_rational(rat(t * t - 1, 2));
            push(Family::PhiDual, -t, lead);
            let second = if t.rem_euclid(4) == 1 {
                // i - 1/2 even: 2 al^2 (i - 1/2)(i - 5/2) = al^2 (t-1)(t-5)/2
                rat((t - 1) * (t - 5), 2)
            } else {
                // j - 1/2 odd: 2 al^2 (j + 1/2)(j - 3/2) = al^2 (t+1)(t-3)/2
                rat((t + 1) * (t - 3), 2)
            };
            push(Family::PhiDual, -t + 4, &Scalar::from_rational(second) * &alpha2);
        }
        _ => {
            return Err(LieError::InvalidBasis(format!(
                "1-cocycle table is defined on V/phi, got {}",
                b
            )))
        }
    }
    Ok(out)
}

/// Golden table of the 1-cocycle with `R = 0` on the 3-point basis:
/// `C(X_n)` expanded in the dual basis and asserted against the closed form.
pub fn table_c1_l(window: i64, cfg: Config) -> Result<StructureTable, LieError> {
    if cfg != Config::ThreePoint {
        return Err(LieError::UnsupportedConfig(cfg));
    }
    let r0 = ProjectiveConnection::zero(cfg);
    let mut entries = BTreeMap::new();
    for b in lie_basis_indices(cfg, window) {
        let x = SuperElement::basis(b.family, b.index, cfg)?;
        let c = onecocycle_l(&x, &r0)?;
        let mut coeffs = expand_in_dual_basis(c.even(), window + 4)?.into_exact()?;
        coeffs.append(&mut expand_in_dual_basis(c.odd(), window + 4)?.into_exact()?);
        let expect = closed_form_c1l(&b)?;
        assert_eq!(
            coeffs, expect,
            "onecocycle_l({}) disagrees with the closed form",
            b
        );
        if !coeffs.is_empty() {
            entries.insert(b, coeffs);
        }
    }
    Ok(StructureTable::Expansions(entries))
}

/// Window-bounded non-triviality: the linear system `c(x,y) = f([x,y])`,
/// with `f` ranging over functionals supported on dual-basis coefficients
/// within `support_window`, is infeasible over all homogeneous basis pairs
/// within `pair_window`.  Returns `true` when no such `f` exists.
pub fn coboundary_infeasible(
    cfg: Config,
    pair_window: i64,
    support_window: i64,
) -> Result<bool, LieError> {
    if cfg != Config::ThreePoint {
        return Err(LieError::UnsupportedConfig(cfg));
    }
    let duals: Vec<Density> = {
        let mut v = Vec::new();
        for n in -support_window..=support_window {
            v.push(basis(Family::VDual, HalfInt::int(n), cfg)?);
        }
        for t in (-(2 * support_window)..=(2 * support_window)).filter(|t| t.rem_euclid(2) == 1) {
            v.push(basis(Family::PhiDual, HalfInt::from_twice(t), cfg)?);
        }
        v
    };
    let r0 = ProjectiveConnection::zero(cfg);
    let idxs = lie_basis_indices(cfg, pair_window);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in &idxs {
        let x = SuperElement::basis(i.family, i.index, cfg)?;
        for j in &idxs {
            let y = SuperElement::basis(j.family, j.index, cfg)?;
            let br = sbracket(&x, &y)?;
            let mut row = Vec::with_capacity(duals.len());
            for d in &duals {
                let target = if d.weight() == HalfInt::int(2) { br.even() } else { br.odd() };
                row.push(kn_pairing(d, target)?);
            }
            rows.push(row);
            rhs.push(cocycle2(&x, &y, &r0)?);
        }
    }
    Ok(!linalg::is_feasible(&rows, &rhs))
}

impl fmt::Display for SuperElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (+) {}", self.even, self.odd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg3() -> Config {
        Config::ThreePoint
    }

    fn v(n: i64) -> SuperElement {
        SuperElement::basis(Family::V, HalfInt::int(n), cfg3()).unwrap()
    }

    fn phi(t: i64) -> SuperElement {
        SuperElement::basis(Family::Phi, HalfInt::from_twice(t), cfg3()).unwrap()
    }

    fn e(n: i64) -> SuperElement {
        SuperElement::basis(Family::E, HalfInt::int(n), Config::TwoPoint).unwrap()
    }

    fn b(t: i64) -> SuperElement {
        SuperElement::basis(Family::B, HalfInt::from_twice(t), Config::TwoPoint).unwrap()
    }

    fn r0(cfg: Config) -> ProjectiveConnection {
        ProjectiveConnection::zero(cfg)
    }

    #[test]
    fn bracket_witt_and_neveu_schwarz() {
        // [e_1, e_-1] = -2 e_0
        let br = sbracket(&e(1), &e(-1)).unwrap();
        assert_eq!(br, e(0).scale(&Scalar::from_int(-2)));
        // [b_1/2, b_-1/2] = e_0
        let br = sbracket(&b(1), &b(-1)).unwrap();
        assert_eq!(br, e(0));
    }

    #[test]
    fn bracket_three_point_expansion() {
        // [V_0, V_1] = V_1 + 2 al^2 V_-1
        let br = sbracket(&v(0), &v(1)).unwrap();
        let expect = v(1)
            .add(&v(-1).scale(&(&Scalar::from_int(2) * &Scalar::alpha_pow(2))))
            .unwrap();
        assert_eq!(br, expect);
    }

    #[test]
    fn super_axioms_on_samples() {
        assert!(check_super_skew(&e(2), &e(3)).unwrap());
        assert!(check_super_skew(&b(1), &b(1)).unwrap());
        assert!(check_super_jacobi(&v(2), &phi(3), &phi(-1)).unwrap());
        assert!(check_super_jacobi(&v(1), &v(-2), &phi(5)).unwrap());
        let mixed = v(0).add(&phi(1)).unwrap();
        assert!(matches!(
            check_super_skew(&mixed, &v(1)),
            Err(LieError::NonHomogeneousInput)
        ));
    }

    #[test]
    fn cocycle_golden_values() {
        let r = r0(cfg3());
        assert_eq!(cocycle2(&v(2), &v(-2), &r).unwrap(), Scalar::from_int(-6));
        assert_eq!(cocycle2(&phi(5), &phi(-5), &r).unwrap(), Scalar::from_int(12));
        assert!(cocycle2(&v(0), &phi(1), &r).unwrap().is_zero());
    }

    #[test]
    fn cocycle_virasoro_twopoint() {
        let r = r0(Config::TwoPoint);
        for n in -5i64..=5 {
            let c = cocycle2(&e(n), &e(-n), &r).unwrap();
            assert_eq!(c, Scalar::from_int(-(n * n * n - n)), "n = {n}");
        }
        // c(b_3/2, b_-3/2) = 2(9/4 - 1/4) = 4.
        assert_eq!(cocycle2(&b(3), &b(-3), &r).unwrap(), Scalar::from_int(4));
    }

    #[test]
    fn closed_form_examples() {
        let bi = |f, t| BasisIndex::new(f, HalfInt::from_twice(t));
        assert_eq!(
            closed_form_c(&bi(Family::V, 8), &bi(Family::V, -4)).unwrap(),
            &Scalar::from_int(-48) * &Scalar::alpha_pow(2)
        );
        assert_eq!(
            closed_form_c(&bi(Family::Phi, 9), &bi(Family::Phi, -5)).unwrap(),
            &Scalar::from_int(16) * &Scalar::alpha_pow(2)
        );
        assert_eq!(
            closed_form_c(&bi(Family::V, 10), &bi(Family::V, -6)).unwrap(),
            &Scalar::from_int(-48) * &Scalar::alpha_pow(2)
        );
    }

    #[test]
    fn coboundary_witness_holds() {
        let cfg = cfg3();
        let rzero = r0(cfg);
        assert!(coboundary_witness_check(&rzero, &v(2), &v(-2)).unwrap());
        let r1 = ProjectiveConnection::new(MeroFun::soc_pow(cfg, -1)).unwrap();
        assert!(coboundary_witness_check(&r1, &v(2), &v(-2)).unwrap());
        let rconst = ProjectiveConnection::new(MeroFun::one(cfg)).unwrap();
        assert!(coboundary_witness_check(&rconst, &phi(1), &phi(-1)).unwrap());
    }

    #[test]
    fn onecocycle_examples() {
        let r = r0(cfg3());
        // C(V_2) = -6 V*_-2.
        let c = onecocycle_l(&v(2), &r).unwrap();
        let exp = expand_in_dual_basis(c.even(), 8).unwrap().into_exact().unwrap();
        assert_eq!(exp.len(), 1);
        assert_eq!(
            exp[&BasisIndex::new(Family::VDual, HalfInt::int(-2))],
            Scalar::from_int(-6)
        );
        // C(V_4) = -60 V*_-4 - 48 al^2 V*_-2.
        let c = onecocycle_l(&v(4), &r).unwrap();
        let exp = expand_in_dual_basis(c.even(), 8).unwrap().into_exact().unwrap();
        assert_eq!(exp.len(), 2);
        assert_eq!(
            exp[&BasisIndex::new(Family::VDual, HalfInt::int(-4))],
            Scalar::from_int(-60)
        );
        assert_eq!(
            exp[&BasisIndex::new(Family::VDual, HalfInt::int(-2))],
            &Scalar::from_int(-48) * &Scalar::alpha_pow(2)
        );
        // C(e_1) = 0 on the two-point configuration (e = z^2, e''' = 0).
        let c = onecocycle_l(&e(1), &r0(Config::TwoPoint)).unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn coad_example() {
        // ad*_(e_0) (dz^2) = 2 dz^2 on the two-point configuration.
        let cfg = Config::TwoPoint;
        let u = DualSuperElement::new(
            Density::new(MeroFun::one(cfg), HalfInt::int(2)),
            Density::zero(cfg, HalfInt::from_twice(3)),
        )
        .unwrap();
        let out = coad_l(&e(0), &u).unwrap();
        assert_eq!(out.even().mf(), &MeroFun::constant(cfg, Scalar::from_int(2)));
        assert!(out.odd().is_zero());
        // Linearity: ad*_x 0 = 0.
        let z = DualSuperElement::zero(cfg);
        assert!(coad_l(&e(3), &z).unwrap().is_zero());
    }

    #[test]
    fn onecocycle_identity_samples() {
        let r = r0(cfg3());
        assert!(check_onecocycle_l(&v(2), &v(-2), &r).unwrap());
        assert!(check_onecocycle_l(&phi(1), &v(0), &r).unwrap());
        let r2 = r0(Config::TwoPoint);
        assert!(check_onecocycle_l(&b(3), &b(-3), &r2).unwrap());
        assert_eq!(
            pair_super(&onecocycle_l(&b(3), &r2).unwrap(), &b(-3)).unwrap(),
            Scalar::from_int(4)
        );
    }

    #[test]
    fn coad_duality_samples() {
        let r = r0(cfg3());
        for (x, y) in [(v(1), v(-1)), (v(2), phi(-3)), (phi(1), phi(-1))] {
            let u = onecocycle_l(&v(3), &r).unwrap();
            assert!(check_coad_duality(&x, &u, &y).unwrap());
            let w = onecocycle_l(&phi(3), &r).unwrap();
            assert!(check_coad_duality(&x, &w, &y).unwrap());
        }
    }

    #[test]
    fn osp12_checks() {
        assert!(osp12_vanishing_check(Config::ThreePoint).unwrap());
        assert!(matches!(
            osp12_vanishing_check(Config::TwoPoint),
            Err(LieError::UnsupportedConfig(_))
        ));
    }

    #[test]
    fn tables_window_2() {
        let t = table_c2(2, cfg3()).unwrap();
        let StructureTable::Pairs(entries) = &t else { panic!("pair table") };
        let key = (
            BasisIndex::new(Family::V, HalfInt::int(2)),
            BasisIndex::new(Family::V, HalfInt::int(-2)),
        );
        assert_eq!(entries[&key], Scalar::from_int(-6));
        let zero_key = (
            BasisIndex::new(Family::V, HalfInt::int(0)),
            BasisIndex::new(Family::V, HalfInt::int(1)),
        );
        assert!(!entries.contains_key(&zero_key));

        let t = table_c1_l(4, cfg3()).unwrap();
        let StructureTable::Expansions(entries) = &t else { panic!("expansion table") };
        let arg = BasisIndex::new(Family::V, HalfInt::int(4));
        assert_eq!(
            entries[&arg][&BasisIndex::new(Family::VDual, HalfInt::int(-4))],
            Scalar::from_int(-60)
        );
    }

    #[test]
    fn nontriviality_window_bounded() {
        assert!(coboundary_infeasible(cfg3(), 2, 4).unwrap());
    }
}
