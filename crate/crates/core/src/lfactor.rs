//! Formal products of local L-factors in one variable `s`.
//!
//! An [`LAtom`] is a symbol `L(μs + c, base)`; an [`LProduct`] is a multiset of
//! atoms with signed multiplicities. Nothing here evaluates an L-function: two
//! atoms are equal exactly when their slope, intercept and base agree.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::scalar::{fmt_ratio, int, ratio, ExactInt};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LFactorError {
    #[error("argument slope must be positive, got {0}")]
    NonPositiveSlope(String),
    #[error("segment lengths must be positive, got a={a}, r={r}")]
    NonPositiveLength { a: i64, r: i64 },
    #[error("expected an argument of slope {expected}, got {found}")]
    SlopeMismatch { expected: String, found: String },
}

/// The argument `slope·s + intercept` of an L-factor, `slope > 0`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Affine<I: ExactInt = i64> {
    slope: Ratio<I>,
    intercept: Ratio<I>,
}

impl<I: ExactInt> Affine<I> {
    pub fn new(slope: Ratio<I>, intercept: Ratio<I>) -> Result<Self, LFactorError> {
        if !slope.is_positive() {
            return Err(LFactorError::NonPositiveSlope(fmt_ratio(&slope)));
        }
        Ok(Self { slope, intercept })
    }

    /// `s`
    pub fn s() -> Self {
        Self { slope: Ratio::one(), intercept: Ratio::zero() }
    }

    /// `2s`
    pub fn two_s() -> Self {
        Self { slope: int(2), intercept: Ratio::zero() }
    }

    pub fn slope(&self) -> &Ratio<I> {
        &self.slope
    }

    pub fn intercept(&self) -> &Ratio<I> {
        &self.intercept
    }

    /// Adds a constant to the argument: `μs + c` becomes `μs + c + offset`.
    pub fn plus(&self, offset: &Ratio<I>) -> Self {
        Self { slope: self.slope.clone(), intercept: self.intercept.clone() + offset.clone() }
    }

    /// Substitutes `s ↦ s + t`.
    pub fn shift_s(&self, t: &Ratio<I>) -> Self {
        Self {
            slope: self.slope.clone(),
            intercept: self.intercept.clone() + self.slope.clone() * t.clone(),
        }
    }

    /// The value of `s` at which the argument vanishes, `−c/μ`.
    pub fn zero(&self) -> Ratio<I> {
        -(self.intercept.clone() / self.slope.clone())
    }
}

impl<I: ExactInt> fmt::Display for Affine<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.slope.is_one() {
            write!(f, "s")?;
        } else if self.slope.is_integer() {
            write!(f, "{}s", self.slope.numer())?;
        } else {
            write!(f, "({})s", fmt_ratio(&self.slope))?;
        }
        if self.intercept.is_positive() {
            write!(f, "+{}", fmt_ratio(&self.intercept))?;
        } else if self.intercept.is_negative() {
            write!(f, "-{}", fmt_ratio(&-self.intercept.clone()))?;
        }
        Ok(())
    }
}

/// Which L-function an atom stands for.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseKind {
    /// `L(·, τ×τ)`
    TauTau,
    /// `L(·, τ×σ)`
    TauSigma,
    /// `L(·, τ)`, standing in for `τ×σ` when `σ` lives on the trivial group of `Sp`.
    TauStd,
    /// `L(·, τ, ρ)`
    TauRho,
    /// `L(·, τ, ρ⁻)`
    TauRhoMinus,
}

impl BaseKind {
    fn label(self) -> &'static str {
        match self {
            BaseKind::TauTau => "tau x tau",
            BaseKind::TauSigma => "tau x sigma",
            BaseKind::TauStd => "tau",
            BaseKind::TauRho => "tau, rho",
            BaseKind::TauRhoMinus => "tau, rho-",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LAtom<I: ExactInt = i64> {
    pub arg: Affine<I>,
    pub base: BaseKind,
}

impl<I: ExactInt> LAtom<I> {
    pub fn new(arg: Affine<I>, base: BaseKind) -> Self {
        Self { arg, base }
    }
}

impl<I: ExactInt> fmt::Display for LAtom<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({}, {})", self.arg, self.base.label())
    }
}

/// A formal product `∏ atomᵉ` with nonzero integer exponents. The empty
/// product is the constant 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LProduct<I: ExactInt = i64> {
    factors: BTreeMap<LAtom<I>, i64>,
}

impl<I: ExactInt> Default for LProduct<I> {
    fn default() -> Self {
        Self::one()
    }
}

impl<I: ExactInt> LProduct<I> {
    pub fn one() -> Self {
        Self { factors: BTreeMap::new() }
    }

    pub fn atom(arg: Affine<I>, base: BaseKind) -> Self {
        Self::power(LAtom::new(arg, base), 1)
    }

    pub fn power(atom: LAtom<I>, exp: i64) -> Self {
        let mut p = Self::one();
        p.accumulate(atom, exp);
        p
    }

    pub fn from_atoms(atoms: impl IntoIterator<Item = (LAtom<I>, i64)>) -> Self {
        let mut p = Self::one();
        for (atom, exp) in atoms {
            p.accumulate(atom, exp);
        }
        p
    }

    fn accumulate(&mut self, atom: LAtom<I>, exp: i64) {
        if exp == 0 {
            return;
        }
        match self.factors.entry(atom) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += exp;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(exp);
            }
        }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Number of distinct atoms.
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn exponent(&self, atom: &LAtom<I>) -> i64 {
        self.factors.get(atom).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LAtom<I>, i64)> {
        self.factors.iter().map(|(a, e)| (a, *e))
    }

    /// Sum of the absolute exponents.
    pub fn degree(&self) -> u64 {
        self.factors.values().map(|e| e.unsigned_abs()).sum()
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (atom, exp) in other.iter() {
            p.accumulate(atom.clone(), exp);
        }
        p
    }

    pub fn inverse(&self) -> Self {
        Self { factors: self.factors.iter().map(|(a, e)| (a.clone(), -e)).collect() }
    }

    pub fn divide(&self, other: &Self) -> Self {
        self.multiply(&other.inverse())
    }

    /// Substitutes `s ↦ s + t` in every atom.
    pub fn shift_s(&self, t: &Ratio<I>) -> Self {
        Self::from_atoms(
            self.iter().map(|(a, e)| (LAtom::new(a.arg.shift_s(t), a.base), e)),
        )
    }

    /// Splits every `τ×τ` atom into `ρ·ρ⁻` at the same argument.
    pub fn canonicalize(&self) -> Self {
        Self::from_atoms(self.iter().flat_map(|(a, e)| {
            let split: Vec<(LAtom<I>, i64)> = if a.base == BaseKind::TauTau {
                vec![
                    (LAtom::new(a.arg.clone(), BaseKind::TauRho), e),
                    (LAtom::new(a.arg.clone(), BaseKind::TauRhoMinus), e),
                ]
            } else {
                vec![(a.clone(), e)]
            };
            split
        }))
    }

    /// Exchanges `ρ` and `ρ⁻` everywhere.
    pub fn swap_rho(&self) -> Self {
        Self::from_atoms(self.iter().map(|(a, e)| {
            let base = match a.base {
                BaseKind::TauRho => BaseKind::TauRhoMinus,
                BaseKind::TauRhoMinus => BaseKind::TauRho,
                other => other,
            };
            (LAtom::new(a.arg.clone(), base), e)
        }))
    }

    /// Sorted, deduplicated zeros `−c/μ` of the arguments of the atoms that
    /// survive canonicalization with a positive exponent. Every base is
    /// assumed to carry at most a simple pole at argument 0.
    pub fn possible_poles(&self) -> Vec<Ratio<I>> {
        let mut poles: Vec<Ratio<I>> = self
            .canonicalize()
            .iter()
            .filter(|(_, e)| *e > 0)
            .map(|(a, _)| a.arg.zero())
            .collect();
        poles.sort();
        poles.dedup();
        poles
    }

    /// Textual rendering of each atom, e.g. `L(2s+3/2, tau x tau)^-1`.
    pub fn render_atoms(&self) -> Vec<String> {
        self.iter()
            .map(|(a, e)| if e == 1 { a.to_string() } else { format!("{a}^{e}") })
            .collect()
    }
}

impl<I: ExactInt> Mul for &LProduct<I> {
    type Output = LProduct<I>;
    fn mul(self, rhs: Self) -> LProduct<I> {
        self.multiply(rhs)
    }
}

impl<I: ExactInt> Mul for LProduct<I> {
    type Output = LProduct<I>;
    fn mul(self, rhs: Self) -> LProduct<I> {
        self.multiply(&rhs)
    }
}

impl<I: ExactInt> std::iter::Product for LProduct<I> {
    fn product<It: Iterator<Item = Self>>(iter: It) -> Self {
        iter.fold(Self::one(), |acc, p| acc.multiply(&p))
    }
}

impl<I: ExactInt> fmt::Display for LProduct<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        write!(f, "{}", self.render_atoms().join(" "))
    }
}

/// `L(arg, τ_a × τ_r)` expanded into `τ×τ` atoms by the segment formula:
/// for `a ≥ r` the factors are `L(arg + (a−1)/2 + i)` with
/// `i = −(r−1)/2, …, (r−1)/2`, and symmetrically with `a`, `r` swapped.
pub fn expand_tensor<I: ExactInt>(a: i64, r: i64, arg: &Affine<I>) -> Result<LProduct<I>, LFactorError> {
    if a <= 0 || r <= 0 {
        return Err(LFactorError::NonPositiveLength { a, r });
    }
    let (long, short) = if a >= r { (a, r) } else { (r, a) };
    // i runs over half-integers; iterate over 2i.
    let atoms = (-(short - 1)..=(short - 1)).step_by(2).map(|twice_i| {
        let offset = ratio::<I>(long - 1 + twice_i, 2);
        (LAtom::new(arg.plus(&offset), BaseKind::TauTau), 1)
    });
    Ok(LProduct::from_atoms(atoms))
}

/// `L(base_arg, τ_a, ρ)` for a slope-2 argument:
/// `∏_{i=1}^{⌈a/2⌉} L(base_arg + a+1−2i, τ, ρ) · ∏_{i=1}^{⌊a/2⌋} L(base_arg + a−2i, τ, ρ⁻)`.
pub fn expand_rho<I: ExactInt>(a: i64, base_arg: &Affine<I>) -> Result<LProduct<I>, LFactorError> {
    if a <= 0 {
        return Err(LFactorError::NonPositiveLength { a, r: 1 });
    }
    if *base_arg.slope() != int(2) {
        return Err(LFactorError::SlopeMismatch {
            expected: "2".into(),
            found: fmt_ratio(base_arg.slope()),
        });
    }
    let rho = (1..=(a + 1) / 2)
        .map(|i| (LAtom::new(base_arg.plus(&int(a + 1 - 2 * i)), BaseKind::TauRho), 1));
    let rho_minus = (1..=a / 2)
        .map(|i| (LAtom::new(base_arg.plus(&int(a - 2 * i)), BaseKind::TauRhoMinus), 1));
    Ok(LProduct::from_atoms(rho.chain(rho_minus)))
}

#[derive(Serialize, Deserialize)]
#[serde(bound(
    serialize = "I: ExactInt + Serialize",
    deserialize = "I: ExactInt + Deserialize<'de>"
))]
struct AtomRepr<I: ExactInt> {
    #[serde(with = "crate::scalar::rational")]
    slope: Ratio<I>,
    #[serde(with = "crate::scalar::rational")]
    intercept: Ratio<I>,
    base: BaseKind,
    exp: i64,
}

impl<I: ExactInt + Serialize> Serialize for LProduct<I> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter().map(|(a, e)| AtomRepr {
            slope: a.arg.slope().clone(),
            intercept: a.arg.intercept().clone(),
            base: a.base,
            exp: e,
        }))
    }
}

impl<'de, I: ExactInt + Deserialize<'de>> Deserialize<'de> for LProduct<I> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let reprs = Vec::<AtomRepr<I>>::deserialize(d)?;
        let mut atoms = Vec::with_capacity(reprs.len());
        for r in reprs {
            let arg = Affine::new(r.slope, r.intercept).map_err(serde::de::Error::custom)?;
            atoms.push((LAtom::new(arg, r.base), r.exp));
        }
        Ok(LProduct::from_atoms(atoms))
    }
}
