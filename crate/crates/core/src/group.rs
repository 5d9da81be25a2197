//! The one-parameter group family `G = Spec Q[t, x]_{1 + tx}` with law
//! `x ⋆ y = x + y + txy`.
//!
//! For `t ≠ 0` the fiber is the multiplicative group through `u = 1 + tx`;
//! at `t = 0` it is the additive group. Elements are generic over
//! [`ExactField`], so the same code runs over a fixed fiber (rationals) and
//! over moving families (Laurent series in `t`).

use std::fmt::{self, Debug, Display};
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::{LaurentSeries, Rational, DEFAULT_DIVISION_TERMS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group elements live over different parameters ({0} vs {1})")]
    MismatchedParameter(String, String),
    #[error("1 + t*x vanishes, the point ({t}, {x}) is not in the group")]
    NotInGroup { t: String, x: String },
    #[error("empty product")]
    Empty,
    #[error("division failed: {0}")]
    Division(String),
    #[error("cannot parse group element: {0}")]
    Parse(String),
}

/// Exact coefficient domains the group can be taken over.
pub trait ExactField: Clone + PartialEq + Debug + Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Division by a nonzero element.
    fn div(&self, rhs: &Self) -> Result<Self, GroupError>;
    /// True when the element is known to be exactly zero.
    fn is_exact_zero(&self) -> bool;
}

impl ExactField for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div(&self, rhs: &Self) -> Result<Self, GroupError> {
        if rhs.is_zero() {
            return Err(GroupError::Division("division by zero".into()));
        }
        Ok(self / rhs)
    }
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
}

impl ExactField for LaurentSeries {
    fn zero() -> Self {
        LaurentSeries::zero()
    }
    fn one() -> Self {
        LaurentSeries::one()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div(&self, rhs: &Self) -> Result<Self, GroupError> {
        LaurentSeries::div(self, rhs, DEFAULT_DIVISION_TERMS)
            .map_err(|e| GroupError::Division(e.to_string()))
    }
    fn is_exact_zero(&self) -> bool {
        LaurentSeries::is_exact_zero(self)
    }
}

/// A point `(t, x)` of `G` with `1 + tx ≠ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement<F> {
    t: F,
    x: F,
}

impl<F: ExactField> GroupElement<F> {
    pub fn new(t: F, x: F) -> Result<Self, GroupError> {
        let u = F::one().add(&t.mul(&x));
        if u.is_exact_zero() {
            return Err(GroupError::NotInGroup {
                t: t.to_string(),
                x: x.to_string(),
            });
        }
        Ok(GroupElement { t, x })
    }

    /// The identity section `t ↦ (t, 0)`.
    pub fn identity(t: F) -> Self {
        GroupElement { t, x: F::zero() }
    }

    pub fn t(&self) -> &F {
        &self.t
    }

    pub fn x(&self) -> &F {
        &self.x
    }

    fn same_fiber(&self, other: &Self) -> Result<(), GroupError> {
        if self.t != other.t {
            return Err(GroupError::MismatchedParameter(
                self.t.to_string(),
                other.t.to_string(),
            ));
        }
        Ok(())
    }

    pub fn star(&self, other: &Self) -> Result<Self, GroupError> {
        self.same_fiber(other)?;
        let x = self
            .x
            .add(&other.x)
            .add(&self.t.mul(&self.x).mul(&other.x));
        GroupElement::new(self.t.clone(), x)
    }

    /// `y = -x / (1 + tx)`.
    pub fn inverse(&self) -> Result<Self, GroupError> {
        let u = self.to_multiplicative();
        let y = self.x.neg().div(&u)?;
        GroupElement::new(self.t.clone(), y)
    }

    /// `u = 1 + tx`, a homomorphism to the multiplicative group.
    pub fn to_multiplicative(&self) -> F {
        F::one().add(&self.t.mul(&self.x))
    }

    /// `x ↦ x + a(1 + tx)`, the action on the affine chart of the curve.
    pub fn act_on_mark(&self, mark: &F) -> F {
        let u = F::one().add(&self.t.mul(mark));
        mark.add(&self.x.mul(&u))
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_exact_zero()
    }
}

/// Whether the ⋆-product of `elements` is the identity.
pub fn is_in_product_subgroup<F: ExactField>(elements: &[GroupElement<F>]) -> Result<bool, GroupError> {
    let (first, rest) = elements.split_first().ok_or(GroupError::Empty)?;
    let mut acc = first.clone();
    for g in rest {
        acc = acc.star(g)?;
    }
    Ok(acc.is_identity())
}

#[derive(Serialize, Deserialize)]
struct ElementJson {
    t: String,
    x: String,
}

impl<F: ExactField> GroupElement<F> {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&ElementJson {
            t: self.t.to_string(),
            x: self.x.to_string(),
        })
        .expect("string fields always serialize")
    }
}

impl<F> GroupElement<F>
where
    F: ExactField + FromStr,
    F::Err: Display,
{
    pub fn from_json(s: &str) -> Result<Self, GroupError> {
        let raw: ElementJson =
            serde_json::from_str(s).map_err(|e| GroupError::Parse(e.to_string()))?;
        let parse = |v: &str| v.parse::<F>().map_err(|e| GroupError::Parse(e.to_string()));
        GroupElement::new(parse(&raw.t)?, parse(&raw.x)?)
    }
}

impl<F: Display> Display for GroupElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.t, self.x)
    }
}
