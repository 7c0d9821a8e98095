//! Dempster-Shafer combination over the frame {T, N, U}.
//!
//! Each advisor's verdict becomes a simple support function whose weight is
//! the advisor's credibility: a Trustworthy verdict from an advisor with
//! credibility `λ` puts `λ` on T and `1 - λ` on U. Masses are then fused with
//! Dempster's rule, where the only conflicting focal pair is (T, N).
//!
//! The normalizer is the complement of the conflict mass. It is evaluated as
//! the sum of the three non-conflicting products, which equals `1 - conflict`
//! whenever both inputs are normalized but keeps full relative precision when
//! the conflict approaches one.

use crate::error::{Error, Result};
use crate::identity::{Probability, Verdict};
use crate::scalar::Scalar;

/// Upper bound on the mass any single advisor can commit to T or N.
///
/// Two fully credible advisors that contradict each other would otherwise
/// produce a conflict of exactly one.
pub const CREDIBILITY_CLAMP_EPSILON: f64 = 1e-6;

/// Normalizers at or below this are treated as total conflict.
pub const TOTAL_CONFLICT_THRESHOLD: f64 = 1e-12;

/// A basic probability assignment over {T, N, U}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MassFunction<T> {
    trust: T,
    distrust: T,
    uncertainty: T,
}

/// Normalized beliefs produced by combining masses.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BeliefTriple<T> {
    trust: T,
    distrust: T,
    uncertainty: T,
}

fn check_distribution<T: Scalar>(trust: T, distrust: T, uncertainty: T) -> Result<()> {
    for v in [trust, distrust, uncertainty] {
        Probability::new(v)?;
    }
    let sum = trust + distrust + uncertainty;
    if (sum - T::one()).abs() > T::sum_tolerance() {
        return Err(Error::NotNormalized(sum.as_f64()));
    }
    Ok(())
}

impl<T: Scalar> MassFunction<T> {
    pub fn new(trust: T, distrust: T, uncertainty: T) -> Result<Self> {
        check_distribution(trust, distrust, uncertainty)?;
        Ok(Self {
            trust,
            distrust,
            uncertainty,
        })
    }

    /// All mass on U: the neutral element of combination.
    pub fn vacuous() -> Self {
        Self {
            trust: T::zero(),
            distrust: T::zero(),
            uncertainty: T::one(),
        }
    }

    pub fn trust(&self) -> T {
        self.trust
    }

    pub fn distrust(&self) -> T {
        self.distrust
    }

    pub fn uncertainty(&self) -> T {
        self.uncertainty
    }
}

impl<T: Scalar> BeliefTriple<T> {
    pub fn new(trust: T, distrust: T, uncertainty: T) -> Result<Self> {
        check_distribution(trust, distrust, uncertainty)?;
        Ok(Self {
            trust,
            distrust,
            uncertainty,
        })
    }

    pub fn vacuous() -> Self {
        MassFunction::vacuous().into()
    }

    pub fn trust(&self) -> T {
        self.trust
    }

    pub fn distrust(&self) -> T {
        self.distrust
    }

    pub fn uncertainty(&self) -> T {
        self.uncertainty
    }

    pub fn as_f64(&self) -> [f64; 3] {
        [
            self.trust.as_f64(),
            self.distrust.as_f64(),
            self.uncertainty.as_f64(),
        ]
    }
}

// Both are normalized distributions over the same frame, so reading one as
// the other is lossless.
impl<T: Scalar> From<BeliefTriple<T>> for MassFunction<T> {
    fn from(b: BeliefTriple<T>) -> Self {
        Self {
            trust: b.trust,
            distrust: b.distrust,
            uncertainty: b.uncertainty,
        }
    }
}

impl<T: Scalar> From<MassFunction<T>> for BeliefTriple<T> {
    fn from(m: MassFunction<T>) -> Self {
        Self {
            trust: m.trust,
            distrust: m.distrust,
            uncertainty: m.uncertainty,
        }
    }
}

/// Builds the simple support function for one advisor's verdict.
pub fn mass_from_recommendation<T: Scalar>(
    verdict: Verdict,
    credibility: Probability<T>,
) -> MassFunction<T> {
    let ceiling = T::one() - T::lit(CREDIBILITY_CLAMP_EPSILON);
    let weight = credibility.value().min_of(ceiling);
    let (trust, distrust) = match verdict {
        Verdict::Trustworthy => (weight, T::zero()),
        Verdict::Untrustworthy => (T::zero(), weight),
    };
    MassFunction {
        trust,
        distrust,
        uncertainty: T::one() - weight,
    }
}

/// Dempster's rule for two masses.
///
/// Every sum below pairs its terms symmetrically so that swapping `a` and
/// `b` gives bit-identical floating-point results.
pub fn combine<T: Scalar>(a: &MassFunction<T>, b: &MassFunction<T>) -> Result<BeliefTriple<T>> {
    let trust = a.trust * b.trust + (a.trust * b.uncertainty + a.uncertainty * b.trust);
    let distrust =
        a.distrust * b.distrust + (a.distrust * b.uncertainty + a.uncertainty * b.distrust);
    let uncertainty = a.uncertainty * b.uncertainty;
    let normalizer = (trust + distrust) + uncertainty;
    if normalizer <= T::lit(TOTAL_CONFLICT_THRESHOLD) {
        return Err(Error::TotalConflict(normalizer.as_f64()));
    }
    Ok(BeliefTriple {
        trust: trust / normalizer,
        distrust: distrust / normalizer,
        uncertainty: uncertainty / normalizer,
    })
}

/// Mass assigned to the conflicting pairs (T, N) and (N, T).
pub fn conflict<T: Scalar>(a: &MassFunction<T>, b: &MassFunction<T>) -> T {
    a.trust * b.distrust + a.distrust * b.trust
}

/// Left fold of [`combine`] over a non-empty list.
pub fn combine_all<T: Scalar>(masses: &[MassFunction<T>]) -> Result<BeliefTriple<T>> {
    let (first, rest) = masses.split_first().ok_or(Error::EmptyEvidence)?;
    rest.iter().try_fold(BeliefTriple::from(*first), |acc, m| {
        combine(&MassFunction::from(acc), m)
    })
}

/// Trustworthy only when belief in T strictly exceeds belief in N.
pub fn decide<T: Scalar>(beliefs: &BeliefTriple<T>) -> Verdict {
    if beliefs.trust > beliefs.distrust {
        Verdict::Trustworthy
    } else {
        Verdict::Untrustworthy
    }
}

/// Scalar trust estimate: belief in T relative to all committed belief.
/// Pure uncertainty maps to one half.
pub fn estimated_trust<T: Scalar>(beliefs: &BeliefTriple<T>) -> Probability<T> {
    let committed = beliefs.trust + beliefs.distrust;
    if committed <= T::lit(TOTAL_CONFLICT_THRESHOLD) {
        return Probability::new_unchecked(T::lit(0.5));
    }
    let ratio = (beliefs.trust / committed)
        .max_of(T::zero())
        .min_of(T::one());
    Probability::new_unchecked(ratio)
}
