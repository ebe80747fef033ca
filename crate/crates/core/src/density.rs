//! Tensor densities `f(z) (dz)^lambda` with the Poisson operations, the
//! Krichever-Novikov residue pairing, and the primal/dual basis families for
//! both puncture configurations.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::merofun::{Config, MeroError, MeroFun};
use crate::scalar::Scalar;

/// Half-integer `twice/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub fn int(n: i64) -> Self {
        HalfInt { twice: 2 * n }
    }

    pub fn twice(&self) -> i64 {
        self.twice
    }

    pub fn is_integer(&self) -> bool {
        self.twice % 2 == 0
    }

    pub fn as_int(&self) -> Option<i64> {
        self.is_integer().then_some(self.twice / 2)
    }

    pub fn neg(&self) -> Self {
        HalfInt { twice: -self.twice }
    }

    pub fn add(&self, other: HalfInt) -> Self {
        HalfInt { twice: self.twice + other.twice }
    }

    pub fn sub(&self, other: HalfInt) -> Self {
        HalfInt { twice: self.twice - other.twice }
    }

    pub fn to_scalar(&self) -> Scalar {
        Scalar::from_rational(crate::scalar::rat(self.twice, 2))
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// Basis families.  Primal families `e, b, eps, a` live on the 2-point
/// configuration and `V, phi, G` on the 3-point one; `*`-suffixed duals pair
/// biorthogonally with their primal partner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    E,
    B,
    V,
    Phi,
    G,
    Eps,
    A,
    VDual,
    PhiDual,
    GDual,
    EpsDual,
    ADual,
}

impl Family {
    pub const ALL: [Family; 12] = [
        Family::E,
        Family::B,
        Family::V,
        Family::Phi,
        Family::G,
        Family::Eps,
        Family::A,
        Family::VDual,
        Family::PhiDual,
        Family::GDual,
        Family::EpsDual,
        Family::ADual,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::E => "e",
            Family::B => "b",
            Family::V => "V",
            Family::Phi => "phi",
            Family::G => "G",
            Family::Eps => "eps",
            Family::A => "a",
            Family::VDual => "V*",
            Family::PhiDual => "phi*",
            Family::GDual => "G*",
            Family::EpsDual => "eps*",
            Family::ADual => "a*",
        }
    }

    pub fn config(&self) -> Config {
        match self {
            Family::E | Family::B | Family::Eps | Family::A | Family::EpsDual | Family::ADual => {
                Config::TwoPoint
            }
            _ => Config::ThreePoint,
        }
    }

    /// Integer-indexed families; the rest take half-odd indices.
    pub fn integer_indexed(&self) -> bool {
        matches!(
            self,
            Family::E
                | Family::V
                | Family::G
                | Family::Eps
                | Family::VDual
                | Family::GDual
                | Family::EpsDual
        )
    }

    pub fn weight(&self) -> HalfInt {
        match self {
            Family::E | Family::V => HalfInt::int(-1),
            Family::B | Family::Phi | Family::A => HalfInt::from_twice(-1),
            Family::G | Family::Eps => HalfInt::int(0),
            Family::GDual | Family::EpsDual => HalfInt::int(1),
            Family::PhiDual | Family::ADual => HalfInt::from_twice(3),
            Family::VDual => HalfInt::int(2),
        }
    }

    /// Biorthogonal partner under the K-N pairing, where one exists.
    pub fn partner(&self) -> Option<Family> {
        match self {
            Family::V => Some(Family::VDual),
            Family::VDual => Some(Family::V),
            Family::Phi => Some(Family::PhiDual),
            Family::PhiDual => Some(Family::Phi),
            Family::G => Some(Family::GDual),
            Family::GDual => Some(Family::G),
            Family::Eps => Some(Family::EpsDual),
            Family::EpsDual => Some(Family::Eps),
            Family::A => Some(Family::ADual),
            Family::ADual => Some(Family::A),
            Family::E | Family::B => None,
        }
    }

    pub fn is_dual(&self) -> bool {
        matches!(
            self,
            Family::VDual | Family::PhiDual | Family::GDual | Family::EpsDual | Family::ADual
        )
    }

    pub fn parse(name: &str) -> Option<Family> {
        Family::ALL.iter().copied().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisIndex {
    pub family: Family,
    pub index: HalfInt,
}

impl BasisIndex {
    pub fn new(family: Family, index: HalfInt) -> Self {
        BasisIndex { family, index }
    }

    /// Degree under the almost-grading.
    pub fn degree(&self) -> HalfInt {
        self.index
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.family.name(), self.index)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DensityError {
    #[error("incompatible puncture configurations")]
    IncompatibleConfig,
    #[error("weight mismatch: {0}")]
    WeightMismatch(String),
    #[error("family {family:?} is not defined on the {cfg} configuration")]
    InvalidFamilyForConfig { family: Family, cfg: Config },
    #[error("index {index} has the wrong parity for family {family:?}")]
    ParityMismatch { family: Family, index: HalfInt },
    #[error("expansion leaves a nonzero residual: {0}")]
    ResidualNonzero(String),
    #[error(transparent)]
    Mero(#[from] MeroError),
}

/// A tensor density `f(z) (dz)^weight`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Density {
    mf: MeroFun,
    weight: HalfInt,
}

impl Density {
    pub fn new(mf: MeroFun, weight: HalfInt) -> Self {
        Density { mf, weight }
    }

    pub fn zero(cfg: Config, weight: HalfInt) -> Self {
        Density { mf: MeroFun::zero(cfg), weight }
    }

    pub fn mf(&self) -> &MeroFun {
        &self.mf
    }

    pub fn weight(&self) -> HalfInt {
        self.weight
    }

    pub fn cfg(&self) -> Config {
        self.mf.cfg()
    }

    pub fn is_zero(&self) -> bool {
        self.mf.is_zero()
    }

    pub fn neg(&self) -> Density {
        Density { mf: self.mf.neg(), weight: self.weight }
    }

    pub fn scale(&self, c: &Scalar) -> Density {
        Density { mf: self.mf.scale(c), weight: self.weight }
    }

    pub fn add(&self, other: &Density) -> Result<Density, DensityError> {
        if self.weight != other.weight {
            return Err(DensityError::WeightMismatch(format!(
                "cannot add weights {} and {}",
                self.weight, other.weight
            )));
        }
        Ok(Density { mf: self.mf.add(&other.mf)?, weight: self.weight })
    }

    pub fn sub(&self, other: &Density) -> Result<Density, DensityError> {
        self.add(&other.neg())
    }

    /// `F_lambda x F_mu -> F_(lambda+mu)`: plain product of coefficients.
    pub fn dot(&self, other: &Density) -> Result<Density, DensityError> {
        Ok(Density {
            mf: self.mf.mul(&other.mf)?,
            weight: self.weight.add(other.weight),
        })
    }

    /// Poisson bracket `F_lambda x F_mu -> F_(lambda+mu+1)`:
    /// `(mu e' f - lambda e f') dz^(lambda+mu+1)`.
    pub fn poisson(&self, other: &Density) -> Result<Density, DensityError> {
        let lam = self.weight.to_scalar();
        let mu = other.weight.to_scalar();
        let lhs = self.mf.derivative().mul(&other.mf)?.scale(&mu);
        let rhs = self.mf.mul(&other.mf.derivative())?.scale(&lam);
        Ok(Density {
            mf: lhs.sub(&rhs)?,
            weight: self.weight.add(other.weight).add(HalfInt::int(1)),
        })
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.weight.twice() == 0 {
            write!(f, "{}", self.mf)
        } else {
            write!(f, "{} (dz)^{{{}}}", self.mf, self.weight)
        }
    }
}

fn check_index(family: Family, index: HalfInt) -> Result<(), DensityError> {
    if family.integer_indexed() != index.is_integer() {
        return Err(DensityError::ParityMismatch { family, index });
    }
    Ok(())
}

/// Constructs a basis density.
///
/// Three-point families (`k` ranges over the integers):
/// `V_2k = z (z^2-al^2)^k (dz)^-1`, `V_(2k+1) = (z^2-al^2)^(k+1) (dz)^-1`,
/// `phi_(2k+1/2) = sqrt(2) z (z^2-al^2)^k (dz)^-1/2`,
/// `phi_(2k-1/2) = sqrt(2) (z^2-al^2)^k (dz)^-1/2`,
/// `G_2k = (z^2-al^2)^k`, `G_(2k+1) = z (z^2-al^2)^k`, and the duals
/// `V*_2k = (z^2-al^2)^(-k-1) (dz)^2`, `V*_(2k+1) = z (z^2-al^2)^(-k-2) (dz)^2`,
/// `phi*_(2k-1/2) = (1/sqrt 2) z (z^2-al^2)^(-k-1) (dz)^3/2`,
/// `phi*_(2k+1/2) = (1/sqrt 2) (z^2-al^2)^(-k-1) (dz)^3/2`,
/// `G*_2k = z (z^2-al^2)^(-k-1) dz`, `G*_(2k+1) = (z^2-al^2)^(-k-1) dz`.
///
/// Two-point families: `e_n = z^(n+1) (dz)^-1`,
/// `b_i = sqrt(2) z^(i+1/2) (dz)^-1/2`, `eps_n = z^n`,
/// `a_i = z^(i+1/2) (dz)^-1/2`, `eps*_n = z^(-n-1) dz`,
/// `a*_i = z^(-i-3/2) (dz)^3/2`.
pub fn basis(family: Family, index: HalfInt, cfg: Config) -> Result<Density, DensityError> {
    if family.config() != cfg {
        return Err(DensityError::InvalidFamilyForConfig { family, cfg });
    }
    check_index(family, index)?;
    let weight = family.weight();
    let t = index.twice();
    let soc = |k: i64| MeroFun::soc_pow(cfg, k);
    let z = MeroFun::z(cfg);
    let sqrt2 = Scalar::sqrt2();
    let inv_sqrt2 = sqrt2.inv().expect("sqrt2 nonzero");
    let mf = match family {
        Family::V => {
            let n = t / 2;
            if n.rem_euclid(2) == 0 {
                soc(n / 2).mul(&z)?
            } else {
                soc((n + 1) / 2)
            }
        }
        Family::Phi => {
            if t.rem_euclid(4) == 1 {
                // i = 2k + 1/2, twice = 4k + 1
                soc((t - 1) / 4).mul(&z)?.scale(&sqrt2)
            } else {
                // i = 2k - 1/2, twice = 4k - 1
                soc((t + 1) / 4).scale(&sqrt2)
            }
        }
        Family::G => {
            let n = t / 2;
            if n.rem_euclid(2) == 0 {
                soc(n / 2)
            } else {
                soc((n - 1) / 2).mul(&z)?
            }
        }
        Family::VDual => {
            let n = t / 2;
            if n.rem_euclid(2) == 0 {
                soc(-(n / 2) - 1)
            } else {
                soc(-((n - 1) / 2) - 2).mul(&z)?
            }
        }
        Family::PhiDual => {
            if t.rem_euclid(4) == 3 {
                // i = 2k - 1/2, twice = 4k - 1
                soc(-((t + 1) / 4) - 1).mul(&z)?.scale(&inv_sqrt2)
            } else {
                // i = 2k + 1/2, twice = 4k + 1
                soc(-((t - 1) / 4) - 1).scale(&inv_sqrt2)
            }
        }
        Family::GDual => {
            let n = t / 2;
            if n.rem_euclid(2) == 0 {
                soc(-(n / 2) - 1).mul(&z)?
            } else {
                soc(-((n - 1) / 2) - 1)
            }
        }
        Family::E => MeroFun::z_pow(cfg, t / 2 + 1),
        Family::B => MeroFun::z_pow(cfg, (t + 1) / 2).scale(&sqrt2),
        Family::Eps => MeroFun::z_pow(cfg, t / 2),
        Family::A => MeroFun::z_pow(cfg, (t + 1) / 2),
        Family::EpsDual => MeroFun::z_pow(cfg, -(t / 2) - 1),
        Family::ADual => MeroFun::z_pow(cfg, -(t + 3) / 2),
    };
    Ok(Density::new(mf, weight))
}

/// The K-N pairing `<f, g> = (1/2 pi i) contour integral of f . g` between
/// `F_lambda` and `F_(1-lambda)`.
pub fn kn_pairing(u: &Density, v: &Density) -> Result<Scalar, DensityError> {
    if u.weight.add(v.weight) != HalfInt::int(1) {
        return Err(DensityError::WeightMismatch(format!(
            "pairing requires weights summing to 1, got {} and {}",
            u.weight, v.weight
        )));
    }
    Ok(u.mf.mul(&v.mf)?.cycle_integral()?)
}

/// Result of a basis expansion: the in-window coefficients plus whatever is
/// left over.  A nonzero residual is reported, not silently dropped, so
/// locality suites can detect out-of-window leakage.
#[derive(Debug, Clone)]
pub struct Expansion {
    pub coeffs: BTreeMap<BasisIndex, Scalar>,
    pub residual: Density,
}

impl Expansion {
    pub fn is_exact(&self) -> bool {
        self.residual.is_zero()
    }

    pub fn into_exact(self) -> Result<BTreeMap<BasisIndex, Scalar>, DensityError> {
        if self.is_exact() {
            Ok(self.coeffs)
        } else {
            Err(DensityError::ResidualNonzero(self.residual.to_string()))
        }
    }

    /// Degrees (= indices) carrying nonzero coefficients.
    pub fn support(&self) -> Vec<HalfInt> {
        self.coeffs.keys().map(|b| b.index).collect()
    }
}

fn window_indices(family: Family, window: i64) -> Vec<HalfInt> {
    if family.integer_indexed() {
        (-window..=window).map(HalfInt::int).collect()
    } else {
        (-(2 * window)..=(2 * window))
            .filter(|t| t.rem_euclid(2) == 1)
            .map(HalfInt::from_twice)
            .collect()
    }
}

fn check_family_weight(u: &Density, family: Family) -> Result<(), DensityError> {
    if family.config() != u.cfg() {
        return Err(DensityError::InvalidFamilyForConfig { family, cfg: u.cfg() });
    }
    if family.weight() != u.weight() {
        return Err(DensityError::WeightMismatch(format!(
            "family {} has weight {}, element has weight {}",
            family.name(),
            family.weight(),
            u.weight()
        )));
    }
    Ok(())
}

/// Complete Laurent read-off for the monomial (2-point) families; `None`
/// when `u` has a pole away from 0 and is not in the family span.
fn monomial_coeffs(u: &Density, family: Family) -> Option<Vec<(HalfInt, Scalar)>> {
    let pole0 = u.mf.pole_exponents().get(&Scalar::zero()).copied().unwrap_or(0) as i64;
    if u.mf.pole_exponents().keys().any(|p| !p.is_zero()) {
        return None;
    }
    let inv_sqrt2 = Scalar::sqrt2().inv().expect("nonzero");
    let mut out = Vec::new();
    for (k, c) in u.mf.num().coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let m = k as i64 - pole0;
        let (twice_idx, coeff) = match family {
            Family::E => (2 * (m - 1), c.clone()),
            Family::B => (2 * m - 1, c * &inv_sqrt2),
            Family::Eps => (2 * m, c.clone()),
            Family::A => (2 * m - 1, c.clone()),
            Family::EpsDual => (2 * (-m - 1), c.clone()),
            Family::ADual => (-2 * m - 3, c.clone()),
            _ => unreachable!("two-point families only"),
        };
        out.push((HalfInt::from_twice(twice_idx), coeff));
    }
    Some(out)
}

fn finish_expansion(
    u: &Density,
    coeffs: BTreeMap<BasisIndex, Scalar>,
) -> Result<Expansion, DensityError> {
    let mut recon = Density::zero(u.cfg(), u.weight());
    for (b, c) in &coeffs {
        recon = recon.add(&basis(b.family, b.index, u.cfg())?.scale(c))?;
    }
    let residual = u.sub(&recon)?;
    Ok(Expansion { coeffs, residual })
}

/// Expands `u` in the given family, probing exactly the given indices.
/// Coefficients outside the probe set land in the residual.
pub fn expand_in_family_at(
    u: &Density,
    family: Family,
    indices: &[HalfInt],
) -> Result<Expansion, DensityError> {
    check_family_weight(u, family)?;
    let mut coeffs = BTreeMap::new();
    if u.cfg() == Config::TwoPoint {
        if let Some(all) = monomial_coeffs(u, family) {
            for (idx, c) in all {
                if indices.contains(&idx) {
                    coeffs.insert(BasisIndex::new(family, idx), c);
                }
            }
        }
    } else {
        let partner = family.partner().expect("three-point families have partners");
        for &idx in indices {
            check_index(family, idx)?;
            let probe = basis(partner, idx, u.cfg())?;
            let c = kn_pairing(&probe, u)?;
            if !c.is_zero() {
                coeffs.insert(BasisIndex::new(family, idx), c);
            }
        }
    }
    finish_expansion(u, coeffs)
}

/// Expands `u` in the given family, probing indices `|n| <= window`.
///
/// Three-point families use the biorthogonal pairing; two-point families
/// are Laurent monomials and are read off structurally.
pub fn expand_in_family(
    u: &Density,
    family: Family,
    window: i64,
) -> Result<Expansion, DensityError> {
    check_family_weight(u, family)?;
    let mut coeffs = BTreeMap::new();
    if u.cfg() == Config::TwoPoint {
        if let Some(all) = monomial_coeffs(u, family) {
            for (idx, c) in all {
                if idx.twice().abs() <= 2 * window {
                    coeffs.insert(BasisIndex::new(family, idx), c);
                }
            }
        }
    } else {
        let partner = family.partner().expect("three-point families have partners");
        for idx in window_indices(family, window) {
            let probe = basis(partner, idx, u.cfg())?;
            let c = kn_pairing(&probe, u)?;
            if !c.is_zero() {
                coeffs.insert(BasisIndex::new(family, idx), c);
            }
        }
    }
    finish_expansion(u, coeffs)
}

/// A family whose span carries elements of the given weight, where one
/// exists (the 2-point weight -1/2 slot defaults to `a`; `b` spans the same
/// space up to the sqrt(2) normalization).
pub fn family_for_weight(cfg: Config, weight: HalfInt) -> Option<Family> {
    match (cfg, weight.twice()) {
        (Config::ThreePoint, -2) => Some(Family::V),
        (Config::ThreePoint, -1) => Some(Family::Phi),
        (Config::ThreePoint, 0) => Some(Family::G),
        (Config::ThreePoint, 2) => Some(Family::GDual),
        (Config::ThreePoint, 3) => Some(Family::PhiDual),
        (Config::ThreePoint, 4) => Some(Family::VDual),
        (Config::TwoPoint, -2) => Some(Family::E),
        (Config::TwoPoint, -1) => Some(Family::A),
        (Config::TwoPoint, 0) => Some(Family::Eps),
        (Config::TwoPoint, 2) => Some(Family::EpsDual),
        (Config::TwoPoint, 3) => Some(Family::ADual),
        _ => None,
    }
}

/// Family used to expand a dual-side element (weight 2, 3/2 or 1) of the
/// given configuration.
pub fn dual_family_for_weight(cfg: Config, weight: HalfInt) -> Option<Family> {
    match (cfg, weight.twice()) {
        (Config::ThreePoint, 4) => Some(Family::VDual),
        (Config::ThreePoint, 3) => Some(Family::PhiDual),
        (Config::ThreePoint, 2) => Some(Family::GDual),
        (Config::TwoPoint, 3) => Some(Family::ADual),
        (Config::TwoPoint, 2) => Some(Family::EpsDual),
        _ => None,
    }
}

/// Expands a dual-side element in the dual basis determined by its weight.
pub fn expand_in_dual_basis(u: &Density, window: i64) -> Result<Expansion, DensityError> {
    let family = dual_family_for_weight(u.cfg(), u.weight()).ok_or_else(|| {
        DensityError::WeightMismatch(format!(
            "no dual family of weight {} on the {} configuration",
            u.weight(),
            u.cfg()
        ))
    })?;
    expand_in_family(u, family, window)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b3(f: Family, twice: i64) -> Density {
        basis(f, HalfInt::from_twice(twice), Config::ThreePoint).unwrap()
    }

    fn b2(f: Family, twice: i64) -> Density {
        basis(f, HalfInt::from_twice(twice), Config::TwoPoint).unwrap()
    }

    #[test]
    fn basis_examples() {
        // V_-1 = (z^2-al^2)^0 (dz)^-1 = 1 (dz)^-1.
        let vm1 = b3(Family::V, -2);
        assert_eq!(vm1.mf(), &MeroFun::one(Config::ThreePoint));
        assert_eq!(vm1.weight(), HalfInt::int(-1));
        // G_3 = z (z^2 - al^2).
        let g3 = b3(Family::G, 6);
        let expect = MeroFun::soc_pow(Config::ThreePoint, 1)
            .mul(&MeroFun::z(Config::ThreePoint))
            .unwrap();
        assert_eq!(g3.mf(), &expect);
        assert_eq!(g3.weight(), HalfInt::int(0));
        // a_(1/2) = z (dz)^-1/2.
        let a = b2(Family::A, 1);
        assert_eq!(a.mf(), &MeroFun::z(Config::TwoPoint));
        assert_eq!(a.weight(), HalfInt::from_twice(-1));
    }

    #[test]
    fn basis_rejects_bad_input() {
        assert!(matches!(
            basis(Family::V, HalfInt::int(0), Config::TwoPoint),
            Err(DensityError::InvalidFamilyForConfig { .. })
        ));
        assert!(matches!(
            basis(Family::V, HalfInt::from_twice(1), Config::ThreePoint),
            Err(DensityError::ParityMismatch { .. })
        ));
        assert!(matches!(
            basis(Family::Phi, HalfInt::int(2), Config::ThreePoint),
            Err(DensityError::ParityMismatch { .. })
        ));
    }

    #[test]
    fn dot_examples() {
        // (z dz^-1) . (z dz^-1) = z^2 dz^-2.
        let e0 = b2(Family::E, 0);
        let sq = e0.dot(&e0).unwrap();
        assert_eq!(sq.weight(), HalfInt::int(-2));
        assert_eq!(sq.mf(), &MeroFun::z_pow(Config::TwoPoint, 2));
        // phi_(1/2) . phi_(-1/2) = 2z dz^-1.
        let p = b3(Family::Phi, 1).dot(&b3(Family::Phi, -1)).unwrap();
        assert_eq!(p.weight(), HalfInt::int(-1));
        assert_eq!(p.mf(), &MeroFun::z(Config::ThreePoint).scale(&Scalar::from_int(2)));
    }

    #[test]
    fn poisson_witt_relation() {
        // {e_0, e_1} = e_1 (coefficient m - n = 1).
        let e0 = b2(Family::E, 0);
        let e1 = b2(Family::E, 2);
        let br = e0.poisson(&e1).unwrap();
        assert_eq!(br, b2(Family::E, 2));
        // Equal weights, equal arguments: bracket vanishes.
        assert!(e1.poisson(&e1).unwrap().is_zero());
        // {e_0, b_i} = i b_i.
        for twice_i in [-3i64, 1, 5] {
            let bi = b2(Family::B, twice_i);
            let br = e0.poisson(&bi).unwrap();
            assert_eq!(br, bi.scale(&HalfInt::from_twice(twice_i).to_scalar()));
        }
    }

    #[test]
    fn pairing_examples() {
        let one = Scalar::one();
        assert_eq!(
            kn_pairing(&b3(Family::VDual, 0), &b3(Family::V, 0)).unwrap(),
            one
        );
        assert!(kn_pairing(&b3(Family::PhiDual, -1), &b3(Family::Phi, 1))
            .unwrap()
            .is_zero());
        for n in -3i64..=3 {
            for m in -3i64..=3 {
                let p = kn_pairing(&b2(Family::EpsDual, 2 * n), &b2(Family::Eps, 2 * m)).unwrap();
                assert_eq!(p.is_one(), n == m, "eps pairing at ({n},{m})");
                assert_eq!(p.is_zero(), n != m);
            }
        }
    }

    #[test]
    fn pairing_rejects_weight_mismatch() {
        assert!(matches!(
            kn_pairing(&b3(Family::V, 0), &b3(Family::V, 0)),
            Err(DensityError::WeightMismatch(_))
        ));
    }

    #[test]
    fn expansion_reproduces_basis() {
        // u = eps*_3 + 2 eps*_-1 expands to itself.
        let u = b2(Family::EpsDual, 6)
            .add(&b2(Family::EpsDual, -2).scale(&Scalar::from_int(2)))
            .unwrap();
        let exp = expand_in_dual_basis(&u, 8).unwrap();
        assert!(exp.is_exact());
        assert_eq!(exp.coeffs.len(), 2);
        assert_eq!(
            exp.coeffs[&BasisIndex::new(Family::EpsDual, HalfInt::int(3))],
            Scalar::one()
        );
        assert_eq!(
            exp.coeffs[&BasisIndex::new(Family::EpsDual, HalfInt::int(-1))],
            Scalar::from_int(2)
        );
    }

    #[test]
    fn expansion_of_constant_dual() {
        // u = -6 dz^2 = -6 V*_-2.
        let u = Density::new(MeroFun::one(Config::ThreePoint), HalfInt::int(2))
            .scale(&Scalar::from_int(-6));
        let exp = expand_in_dual_basis(&u, 4).unwrap();
        assert!(exp.is_exact());
        assert_eq!(exp.coeffs.len(), 1);
        assert_eq!(
            exp.coeffs[&BasisIndex::new(Family::VDual, HalfInt::int(-2))],
            Scalar::from_int(-6)
        );
    }

    #[test]
    fn expansion_of_zero_is_empty() {
        let u = Density::zero(Config::ThreePoint, HalfInt::int(2));
        let exp = expand_in_dual_basis(&u, 4).unwrap();
        assert!(exp.is_exact());
        assert!(exp.coeffs.is_empty());
    }

    #[test]
    fn expansion_reports_out_of_window_residual() {
        let u = b3(Family::VDual, 12);
        let exp = expand_in_dual_basis(&u, 2).unwrap();
        assert!(!exp.is_exact());
        assert!(exp.coeffs.is_empty());
        assert!(exp.clone().into_exact().is_err());
    }

    #[test]
    fn biorthogonality_window() {
        for (fam, dual) in [
            (Family::V, Family::VDual),
            (Family::Phi, Family::PhiDual),
            (Family::G, Family::GDual),
        ] {
            for n in window_indices(fam, 4) {
                for m in window_indices(fam, 4) {
                    let p = kn_pairing(
                        &basis(dual, n, Config::ThreePoint).unwrap(),
                        &basis(fam, m, Config::ThreePoint).unwrap(),
                    )
                    .unwrap();
                    if n == m {
                        assert!(p.is_one(), "<{}*_{}, {}_{}> != 1", fam.name(), n, fam.name(), m);
                    } else {
                        assert!(p.is_zero(), "<{}*_{}, {}_{}> != 0", fam.name(), n, fam.name(), m);
                    }
                }
            }
        }
    }
}
