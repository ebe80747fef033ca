//! Evaluation of parsed expressions against a run configuration, with exact
//! results rendered back in basis coordinates.

use thiserror::Error;

use crate::antijordan::{
    coad_j, jproduct, onecocycle_j, DualJordanElement, JordanElement, JordanError,
};
use crate::density::{
    basis, expand_in_family, kn_pairing, Density, DensityError, Family, HalfInt,
};
use crate::expr::{CallName, Expr};
use crate::liesuper::{
    cocycle2, coad_l, onecocycle_l, sbracket, DualSuperElement, LieError,
    ProjectiveConnection, SuperElement,
};
use crate::merofun::{Config, MeroError, MeroFun};
use crate::scalar::{Rational, Scalar, ScalarError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "pretty" => Ok(Format::Pretty),
            _ => Err(format!("unknown format {:?} (use json, csv or pretty)", s)),
        }
    }
}

/// Run-wide configuration shared by the CLI subcommands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub points: Config,
    pub beta: Option<Rational>,
    pub window: i64,
    pub connection: Option<String>,
    pub format: Format,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            points: Config::ThreePoint,
            beta: None,
            window: 4,
            connection: None,
            format: Format::Pretty,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), EvalError> {
        if let Some(b) = &self.beta {
            if self.points == Config::ThreePoint && num_traits::Zero::is_zero(b) {
                return Err(EvalError::Config(
                    "beta must be nonzero on the 3-point configuration".to_string(),
                ));
            }
        }
        if self.window < 1 {
            return Err(EvalError::Config("window must be at least 1".to_string()));
        }
        Ok(())
    }

    /// Parses and evaluates the `--connection` expression (default `R = 0`).
    pub fn connection(&self) -> Result<ProjectiveConnection, EvalError> {
        match &self.connection {
            None => Ok(ProjectiveConnection::zero(self.points)),
            Some(text) => {
                let e = crate::expr::parse(text)
                    .map_err(|err| EvalError::Config(format!("--connection: {}", err)))?;
                let mf = eval_merofun(&e, self.points)?;
                ProjectiveConnection::new(mf).map_err(EvalError::from)
            }
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("type error: {0}")]
    Type(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("config error: {0}")]
    Config(String),
}

impl From<DensityError> for EvalError {
    fn from(e: DensityError) -> Self {
        match e {
            DensityError::IncompatibleConfig => EvalError::Config(e.to_string()),
            DensityError::Mero(m) => m.into(),
            DensityError::WeightMismatch(_)
            | DensityError::ParityMismatch { .. }
            | DensityError::InvalidFamilyForConfig { .. } => EvalError::Type(e.to_string()),
            DensityError::ResidualNonzero(_) => EvalError::Domain(e.to_string()),
        }
    }
}

impl From<MeroError> for EvalError {
    fn from(e: MeroError) -> Self {
        match e {
            MeroError::IncompatibleConfig(..) => EvalError::Config(e.to_string()),
            MeroError::StrayPole(_) => EvalError::Domain(e.to_string()),
        }
    }
}

impl From<ScalarError> for EvalError {
    fn from(e: ScalarError) -> Self {
        EvalError::Domain(e.to_string())
    }
}

impl From<LieError> for EvalError {
    fn from(e: LieError) -> Self {
        match e {
            LieError::Density(d) => d.into(),
            LieError::Mero(m) => m.into(),
            LieError::Scalar(s) => s.into(),
            LieError::IncompatibleConfig | LieError::UnsupportedConfig(_) => {
                EvalError::Config(e.to_string())
            }
            _ => EvalError::Type(e.to_string()),
        }
    }
}

impl From<JordanError> for EvalError {
    fn from(e: JordanError) -> Self {
        match e {
            JordanError::Density(d) => d.into(),
            JordanError::Mero(m) => m.into(),
            JordanError::Scalar(s) => s.into(),
            JordanError::IncompatibleConfig | JordanError::UnsupportedConfig(_) => {
                EvalError::Config(e.to_string())
            }
            _ => EvalError::Type(e.to_string()),
        }
    }
}

/// A graded value: at most one density per grading parity (integer weights
/// are even, half-odd weights odd).  `odd_family` is a rendering hint for
/// the two-point odd slot, where both `a` and `b` live.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedValue {
    pub even: Option<Density>,
    pub odd: Option<Density>,
    pub odd_family: Option<Family>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Scalar(Scalar),
    Graded(GradedValue),
}

impl Value {
    fn graded_single(d: Density, odd_family: Option<Family>) -> Value {
        if d.weight().is_integer() {
            Value::Graded(GradedValue { even: Some(d), odd: None, odd_family })
        } else {
            Value::Graded(GradedValue { even: None, odd: Some(d), odd_family })
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Scalar(s) => s.is_zero(),
            Value::Graded(g) => {
                g.even.as_ref().is_none_or(Density::is_zero)
                    && g.odd.as_ref().is_none_or(Density::is_zero)
            }
        }
    }
}

fn merge_slot(
    a: Option<Density>,
    b: Option<Density>,
    negate_b: bool,
) -> Result<Option<Density>, EvalError> {
    match (a, b) {
        (None, None) => Ok(None),
        (Some(x), None) => Ok(Some(x)),
        (None, Some(y)) => Ok(Some(if negate_b { y.neg() } else { y })),
        (Some(x), Some(y)) => {
            let y = if negate_b { y.neg() } else { y };
            if x.weight() != y.weight() {
                return Err(EvalError::Type(format!(
                    "cannot combine densities of weights {} and {}",
                    x.weight(),
                    y.weight()
                )));
            }
            Ok(Some(x.add(&y)?))
        }
    }
}

fn add_values(a: Value, b: Value, negate_b: bool) -> Result<Value, EvalError> {
    match (a, b) {
        (Value::Scalar(x), Value::Scalar(y)) => {
            Ok(Value::Scalar(if negate_b { &x - &y } else { &x + &y }))
        }
        (Value::Graded(x), Value::Graded(y)) => Ok(Value::Graded(GradedValue {
            even: merge_slot(x.even, y.even, negate_b)?,
            odd: merge_slot(x.odd, y.odd, negate_b)?,
            odd_family: x.odd_family.or(y.odd_family),
        })),
        _ => Err(EvalError::Type(
            "cannot add a scalar to an algebra element".to_string(),
        )),
    }
}

fn scale_graded(g: GradedValue, c: &Scalar) -> GradedValue {
    GradedValue {
        even: g.even.map(|d| d.scale(c)),
        odd: g.odd.map(|d| d.scale(c)),
        odd_family: g.odd_family,
    }
}

fn to_super(v: &Value) -> Result<SuperElement, EvalError> {
    let Value::Graded(g) = v else {
        return Err(EvalError::Type("expected an algebra element, got a scalar".to_string()));
    };
    let cfg = slot_cfg(g)?;
    let even = match &g.even {
        None => Density::zero(cfg, HalfInt::int(-1)),
        Some(d) => d.clone(),
    };
    let odd = match &g.odd {
        None => Density::zero(cfg, HalfInt::from_twice(-1)),
        Some(d) => d.clone(),
    };
    SuperElement::new(even, odd).map_err(EvalError::from)
}

fn to_jordan(v: &Value) -> Result<JordanElement, EvalError> {
    let Value::Graded(g) = v else {
        return Err(EvalError::Type("expected an algebra element, got a scalar".to_string()));
    };
    let cfg = slot_cfg(g)?;
    let even = match &g.even {
        None => Density::zero(cfg, HalfInt::int(0)),
        Some(d) => d.clone(),
    };
    let odd = match &g.odd {
        None => Density::zero(cfg, HalfInt::from_twice(-1)),
        Some(d) => d.clone(),
    };
    JordanElement::new(even, odd).map_err(EvalError::from)
}

fn to_dual_super(v: &Value) -> Result<DualSuperElement, EvalError> {
    let Value::Graded(g) = v else {
        return Err(EvalError::Type("expected a dual element, got a scalar".to_string()));
    };
    let cfg = slot_cfg(g)?;
    let even = match &g.even {
        None => Density::zero(cfg, HalfInt::int(2)),
        Some(d) => d.clone(),
    };
    let odd = match &g.odd {
        None => Density::zero(cfg, HalfInt::from_twice(3)),
        Some(d) => d.clone(),
    };
    DualSuperElement::new(even, odd).map_err(EvalError::from)
}

fn to_dual_jordan(v: &Value) -> Result<DualJordanElement, EvalError> {
    let Value::Graded(g) = v else {
        return Err(EvalError::Type("expected a dual element, got a scalar".to_string()));
    };
    let cfg = slot_cfg(g)?;
    let even = match &g.even {
        None => Density::zero(cfg, HalfInt::int(1)),
        Some(d) => d.clone(),
    };
    let odd = match &g.odd {
        None => Density::zero(cfg, HalfInt::from_twice(3)),
        Some(d) => d.clone(),
    };
    DualJordanElement::new(even, odd).map_err(EvalError::from)
}

fn slot_cfg(g: &GradedValue) -> Result<Config, EvalError> {
    g.even
        .as_ref()
        .or(g.odd.as_ref())
        .map(Density::cfg)
        .ok_or_else(|| EvalError::Type("empty element".to_string()))
}

/// Evaluates an expression in element context.
pub fn eval_expr(e: &Expr, rc: &RunConfig) -> Result<Value, EvalError> {
    rc.validate()?;
    eval_inner(e, rc)
}

fn eval_inner(e: &Expr, rc: &RunConfig) -> Result<Value, EvalError> {
    let cfg = rc.points;
    match e {
        Expr::Atom { family, index } => {
            let d = basis(*family, *index, cfg)?;
            let hint = (!d.weight().is_integer()).then_some(*family);
            Ok(Value::graded_single(d, hint))
        }
        Expr::Lit(r) => Ok(Value::Scalar(Scalar::from_rational(r.clone()))),
        Expr::Alpha => Ok(Value::Scalar(Scalar::alpha())),
        Expr::SqrtTwo => Ok(Value::Scalar(Scalar::sqrt2())),
        Expr::Z => Err(EvalError::Type(
            "the coordinate z is only available in --connection expressions".to_string(),
        )),
        Expr::Neg(x) => {
            let v = eval_inner(x, rc)?;
            Ok(match v {
                Value::Scalar(s) => Value::Scalar(-&s),
                Value::Graded(g) => Value::Graded(scale_graded(g, &Scalar::from_int(-1))),
            })
        }
        Expr::Add(l, r) => add_values(eval_inner(l, rc)?, eval_inner(r, rc)?, false),
        Expr::Sub(l, r) => add_values(eval_inner(l, rc)?, eval_inner(r, rc)?, true),
        Expr::Mul(l, r) => {
            let lv = eval_inner(l, rc)?;
            let rv = eval_inner(r, rc)?;
            match (lv, rv) {
                (Value::Scalar(a), Value::Scalar(b)) => Ok(Value::Scalar(&a * &b)),
                (Value::Scalar(a), Value::Graded(g)) | (Value::Graded(g), Value::Scalar(a)) => {
                    Ok(Value::Graded(scale_graded(g, &a)))
                }
                _ => Err(EvalError::Type(
                    "use bracket/dot/jprod to multiply algebra elements".to_string(),
                )),
            }
        }
        Expr::Pow(b, k) => {
            let v = eval_inner(b, rc)?;
            let Value::Scalar(s) = v else {
                return Err(EvalError::Type(
                    "powers apply to scalars (and to merofuns in --connection)".to_string(),
                ));
            };
            Ok(Value::Scalar(s.pow(*k)?))
        }
        Expr::Call(name, args) => {
            let vals: Vec<Value> =
                args.iter().map(|a| eval_inner(a, rc)).collect::<Result<_, _>>()?;
            match name {
                CallName::Bracket => {
                    let out = sbracket(&to_super(&vals[0])?, &to_super(&vals[1])?)?;
                    Ok(Value::Graded(GradedValue {
                        even: Some(out.even().clone()),
                        odd: Some(out.odd().clone()),
                        odd_family: Some(lie_odd_family(cfg)),
                    }))
                }
                CallName::Jprod => {
                    let out = jproduct(&to_jordan(&vals[0])?, &to_jordan(&vals[1])?)?;
                    Ok(Value::Graded(GradedValue {
                        even: Some(out.even().clone()),
                        odd: Some(out.odd().clone()),
                        odd_family: Some(jordan_odd_family(cfg)),
                    }))
                }
                CallName::Dot => {
                    let d1 = single_density(&vals[0])?;
                    let d2 = single_density(&vals[1])?;
                    Ok(Value::graded_single(d1.dot(&d2)?, None))
                }
                CallName::C2 => {
                    let r = rc.connection()?;
                    let c = cocycle2(&to_super(&vals[0])?, &to_super(&vals[1])?, &r)?;
                    Ok(Value::Scalar(c))
                }
                CallName::C1L => {
                    let r = rc.connection()?;
                    let out = onecocycle_l(&to_super(&vals[0])?, &r)?;
                    Ok(Value::Graded(GradedValue {
                        even: Some(out.even().clone()),
                        odd: Some(out.odd().clone()),
                        odd_family: None,
                    }))
                }
                CallName::C1J => {
                    let r = rc.connection()?;
                    let out = onecocycle_j(&to_jordan(&vals[0])?, &r)?;
                    Ok(Value::Graded(GradedValue {
                        even: Some(out.even().clone()),
                        odd: Some(out.odd().clone()),
                        odd_family: None,
                    }))
                }
                CallName::Pair => {
                    let (u, v) = (&vals[0], &vals[1]);
                    let (Value::Graded(gu), Value::Graded(gv)) = (u, v) else {
                        return Err(EvalError::Type(
                            "pair expects two algebra/dual elements".to_string(),
                        ));
                    };
                    let mut acc = Scalar::zero();
                    let mut paired = false;
                    for (a, b) in [(&gu.even, &gv.even), (&gu.odd, &gv.odd)] {
                        if let (Some(a), Some(b)) = (a, b) {
                            acc = &acc + &kn_pairing(a, b)?;
                            paired = true;
                        }
                    }
                    if !paired && !(u.is_zero() || v.is_zero()) {
                        return Err(EvalError::Type(
                            "pair found no weight-compatible slots".to_string(),
                        ));
                    }
                    Ok(Value::Scalar(acc))
                }
                CallName::Coad => {
                    let x = &vals[0];
                    let u = &vals[1];
                    let side = coad_side(x, u)?;
                    match side {
                        AlgebraSide::Lie => {
                            let out = coad_l(&to_super(x)?, &to_dual_super(u)?)?;
                            Ok(Value::Graded(GradedValue {
                                even: Some(out.even().clone()),
                                odd: Some(out.odd().clone()),
                                odd_family: None,
                            }))
                        }
                        AlgebraSide::Jordan => {
                            let out = coad_j(&to_jordan(x)?, &to_dual_jordan(u)?)?;
                            Ok(Value::Graded(GradedValue {
                                even: Some(out.even().clone()),
                                odd: Some(out.odd().clone()),
                                odd_family: None,
                            }))
                        }
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum AlgebraSide {
    Lie,
    Jordan,
}

fn lie_odd_family(cfg: Config) -> Family {
    match cfg {
        Config::TwoPoint => Family::B,
        Config::ThreePoint => Family::Phi,
    }
}

fn jordan_odd_family(cfg: Config) -> Family {
    match cfg {
        Config::TwoPoint => Family::A,
        Config::ThreePoint => Family::Phi,
    }
}

/// Infers Lie vs Jordan for `coad` from the even-slot weights of the
/// element (`-1` vs `0`) and of the dual (`2` vs `1`).
fn coad_side(x: &Value, u: &Value) -> Result<AlgebraSide, EvalError> {
    let even_weight = |v: &Value| -> Option<i64> {
        let Value::Graded(g) = v else { return None };
        g.even.as_ref().and_then(|d| d.weight().as_int())
    };
    let from_x = match even_weight(x) {
        Some(-1) => Some(AlgebraSide::Lie),
        Some(0) => Some(AlgebraSide::Jordan),
        _ => None,
    };
    let from_u = match even_weight(u) {
        Some(2) => Some(AlgebraSide::Lie),
        Some(1) => Some(AlgebraSide::Jordan),
        _ => None,
    };
    match (from_x, from_u) {
        (Some(a), Some(b)) if a == b => Ok(a),
        (Some(a), None) => Ok(a),
        (None, Some(b)) => Ok(b),
        (Some(_), Some(_)) => Err(EvalError::Type(
            "coad arguments mix the Lie and Jordan sides".to_string(),
        )),
        (None, None) => Err(EvalError::Type(
            "coad cannot tell the Lie from the Jordan side (pure odd arguments); \
             include an even component"
                .to_string(),
        )),
    }
}

fn single_density(v: &Value) -> Result<Density, EvalError> {
    let Value::Graded(g) = v else {
        return Err(EvalError::Type("expected a homogeneous density".to_string()));
    };
    match (&g.even, &g.odd) {
        (Some(d), None) => Ok(d.clone()),
        (None, Some(d)) => Ok(d.clone()),
        (Some(d), Some(o)) if o.is_zero() => Ok(d.clone()),
        (Some(e2), Some(d)) if e2.is_zero() => Ok(d.clone()),
        _ => Err(EvalError::Type(
            "dot expects homogeneous densities; use bracket/jprod for graded elements"
                .to_string(),
        )),
    }
}

/// Evaluates an expression in merofun context (`--connection`), where `z`
/// is available and powers invert factorable functions.
pub fn eval_merofun(e: &Expr, cfg: Config) -> Result<MeroFun, EvalError> {
    match e {
        Expr::Z => Ok(MeroFun::z(cfg)),
        Expr::Lit(r) => Ok(MeroFun::constant(cfg, Scalar::from_rational(r.clone()))),
        Expr::Alpha => Ok(MeroFun::constant(cfg, Scalar::alpha())),
        Expr::SqrtTwo => Ok(MeroFun::constant(cfg, Scalar::sqrt2())),
        Expr::Neg(x) => Ok(eval_merofun(x, cfg)?.neg()),
        Expr::Add(l, r) => Ok(eval_merofun(l, cfg)?.add(&eval_merofun(r, cfg)?)?),
        Expr::Sub(l, r) => Ok(eval_merofun(l, cfg)?.sub(&eval_merofun(r, cfg)?)?),
        Expr::Mul(l, r) => Ok(eval_merofun(l, cfg)?.mul(&eval_merofun(r, cfg)?)?),
        Expr::Pow(b, k) => {
            let base = eval_merofun(b, cfg)?;
            let base = if *k < 0 {
                base.try_inverse().ok_or_else(|| {
                    EvalError::Domain(format!(
                        "cannot invert {} (numerator does not factor over the punctures)",
                        base
                    ))
                })?
            } else {
                base
            };
            let mut acc = MeroFun::one(cfg);
            for _ in 0..k.unsigned_abs() {
                acc = acc.mul(&base)?;
            }
            Ok(acc)
        }
        Expr::Atom { .. } | Expr::Call(..) => Err(EvalError::Type(
            "basis atoms and calls are not allowed in --connection expressions".to_string(),
        )),
    }
}

fn render_scalar(s: &Scalar, rc: &RunConfig) -> Result<String, EvalError> {
    match &rc.beta {
        None => Ok(s.to_string()),
        Some(b) => Ok(s.eval_beta(b)?.to_string()),
    }
}

/// Family used to render a slot of the given weight, preferring the hint
/// for the ambiguous two-point odd slot.
fn render_family(cfg: Config, weight: HalfInt, hint: Option<Family>) -> Option<Family> {
    if let Some(h) = hint {
        if h.weight() == weight && h.config() == cfg {
            return Some(h);
        }
    }
    match (cfg, weight.twice()) {
        (Config::ThreePoint, -2) => Some(Family::V),
        (Config::ThreePoint, -1) => Some(Family::Phi),
        (Config::ThreePoint, 0) => Some(Family::G),
        (Config::ThreePoint, 2) => Some(Family::GDual),
        (Config::ThreePoint, 3) => Some(Family::PhiDual),
        (Config::ThreePoint, 4) => Some(Family::VDual),
        (Config::TwoPoint, -2) => Some(Family::E),
        (Config::TwoPoint, -1) => Some(Family::B),
        (Config::TwoPoint, 0) => Some(Family::Eps),
        (Config::TwoPoint, 2) => Some(Family::EpsDual),
        (Config::TwoPoint, 3) => Some(Family::ADual),
        _ => None,
    }
}

/// Window large enough to capture every basis component of `d`.
fn expansion_window(d: &Density) -> i64 {
    let degree = if d.mf().is_zero() { 0 } else { d.mf().num().degree() as i64 };
    let poles: i64 = d.mf().pole_exponents().values().map(|&e| e as i64).sum();
    2 * (degree + poles) + 6
}

/// Renders a value: scalars in canonical scalar text, graded elements as
/// linear combinations over their basis families (falling back to raw
/// density text when an element does not lie in any family span).
pub fn render_value(v: &Value, rc: &RunConfig) -> Result<String, EvalError> {
    match v {
        Value::Scalar(s) => render_scalar(s, rc),
        Value::Graded(g) => {
            if v.is_zero() {
                return Ok("0".to_string());
            }
            let mut terms: Vec<(Scalar, String)> = Vec::new();
            for slot in [&g.even, &g.odd] {
                let Some(d) = slot else { continue };
                if d.is_zero() {
                    continue;
                }
                let family = render_family(d.cfg(), d.weight(), g.odd_family);
                let expansion = match family {
                    Some(fam) => expand_in_family(d, fam, expansion_window(d))
                        .ok()
                        .filter(|e| e.is_exact()),
                    None => None,
                };
                match expansion {
                    Some(exp) => {
                        for (b, c) in exp.coeffs {
                            terms.push((c, b.to_string()));
                        }
                    }
                    None => terms.push((Scalar::one(), format!("[{}]", d))),
                }
            }
            let mut out = String::new();
            for (c, label) in terms {
                let c = match &rc.beta {
                    None => c,
                    Some(b) => Scalar::from_q2(c.eval_beta(b)?),
                };
                if c.is_zero() {
                    continue;
                }
                let neg = c.render_negative();
                let mag = if neg { -&c } else { c };
                if out.is_empty() {
                    if neg {
                        out.push('-');
                    }
                } else {
                    out.push_str(if neg { " - " } else { " + " });
                }
                if mag.is_one() {
                    out.push_str(&label);
                } else if mag.render_is_simple() {
                    out.push_str(&format!("{}*{}", mag, label));
                } else {
                    out.push_str(&format!("({})*{}", mag, label));
                }
            }
            if out.is_empty() {
                out.push('0');
            }
            Ok(out)
        }
    }
}

/// Parse + eval + render, the `eval` subcommand pipeline.
pub fn eval_to_string(input: &str, rc: &RunConfig) -> Result<String, EvalCommandError> {
    let e = crate::expr::parse(input).map_err(EvalCommandError::Parse)?;
    let v = eval_expr(&e, rc).map_err(EvalCommandError::Eval)?;
    render_value(&v, rc).map_err(EvalCommandError::Eval)
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EvalCommandError {
    #[error(transparent)]
    Parse(crate::expr::ParseError),
    #[error(transparent)]
    Eval(EvalError),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rc(points: Config) -> RunConfig {
        RunConfig { points, ..RunConfig::default() }
    }

    #[test]
    fn golden_eval_strings() {
        assert_eq!(
            eval_to_string("c2(V[2], V[-2])", &rc(Config::ThreePoint)).unwrap(),
            "-6"
        );
        assert_eq!(
            eval_to_string("bracket(e[1], e[-1])", &rc(Config::TwoPoint)).unwrap(),
            "-2*e[0]"
        );
        assert_eq!(
            eval_to_string("C1J(G[3])", &rc(Config::ThreePoint)).unwrap(),
            "-3*G*[-3] - 2*al^2*G*[-1]"
        );
    }

    #[test]
    fn bracket_renders_in_basis() {
        assert_eq!(
            eval_to_string("bracket(V[0], V[1])", &rc(Config::ThreePoint)).unwrap(),
            "2*al^2*V[-1] + V[1]"
        );
        assert_eq!(
            eval_to_string("bracket(b[1/2], b[-1/2])", &rc(Config::TwoPoint)).unwrap(),
            "e[0]"
        );
        assert_eq!(
            eval_to_string("jprod(a[1/2], a[-1/2])", &rc(Config::TwoPoint)).unwrap(),
            "-1/2*eps[0]"
        );
    }

    #[test]
    fn beta_specialization() {
        let mut c = rc(Config::ThreePoint);
        c.beta = Some(crate::scalar::rat_int(2));
        // alpha = beta^2 = 4; c2(V[4], V[-2]) = -48 al^2 = -48 * 256... no:
        // al = 4, al^2 = 16, -48*16 = -768.
        assert_eq!(eval_to_string("c2(V[4], V[-2])", &c).unwrap(), "-768");
        c.beta = Some(crate::scalar::rat_int(0));
        assert!(matches!(
            eval_to_string("c2(V[2], V[-2])", &c),
            Err(EvalCommandError::Eval(EvalError::Config(_)))
        ));
    }

    #[test]
    fn connection_expression() {
        let mut c = rc(Config::ThreePoint);
        c.connection = Some("(z^2 - al^2)^-1".to_string());
        let r = c.connection().unwrap();
        assert_eq!(r.mf(), &MeroFun::soc_pow(Config::ThreePoint, -1));
        // c2 values move with the connection but stay exact.
        let v = eval_to_string("c2(V[2], V[-2])", &c).unwrap();
        assert_ne!(v, "");
        // A pole outside the puncture set is a domain error on 3 points.
        c.connection = Some("z^-1".to_string());
        assert!(matches!(c.connection(), Err(EvalError::Domain(_))));
        // Malformed connection text is a config error.
        c.connection = Some("1/(z)".to_string());
        assert!(matches!(c.connection(), Err(EvalError::Config(_))));
    }

    #[test]
    fn type_errors() {
        let c = rc(Config::ThreePoint);
        assert!(matches!(
            eval_to_string("pair(V[0], V[0])", &c),
            Err(EvalCommandError::Eval(EvalError::Type(_)))
        ));
        assert!(matches!(
            eval_to_string("c2(e[1], e[-1])", &c),
            Err(EvalCommandError::Eval(EvalError::Type(_)))
        ));
        assert!(matches!(
            eval_to_string("z + V[0]", &c),
            Err(EvalCommandError::Eval(EvalError::Type(_)))
        ));
        assert!(matches!(
            eval_to_string("V[0]*V[1]", &c),
            Err(EvalCommandError::Eval(EvalError::Type(_)))
        ));
    }

    #[test]
    fn pair_and_coad() {
        let c = rc(Config::ThreePoint);
        assert_eq!(eval_to_string("pair(V*[0], V[0])", &c).unwrap(), "1");
        assert_eq!(eval_to_string("pair(phi*[-1/2], phi[1/2])", &c).unwrap(), "0");
        // coad on the Lie side: ad*_(V_0) V*_0 expands in duals.
        let out = eval_to_string("coad(V[0], V*[0])", &c).unwrap();
        assert!(!out.is_empty());
        // Jordan side dual: eps*[0] has weight 1.
        let c2p = rc(Config::TwoPoint);
        let out = eval_to_string("coad(eps[2], eps*[0])", &c2p).unwrap();
        assert_eq!(out, "eps*[-2]");
    }
}
