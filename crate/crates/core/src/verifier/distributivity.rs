use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraHandle;
use crate::error::{Error, Result};

use super::{run_campaign, Evaluation, PropertyReport, SampleSpec};

/// The three distributivity laws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Distributivity {
    /// Left distributivity, `x ∘_a (y ∘_b z) = (x ∘_a y) ∘_b (x ∘_a z)`.
    Lin,
    /// Right distributivity, `(x ∘_a y) ∘_b z = (x ∘_b z) ∘_a (y ∘_b z)`.
    Colin,
    /// Mediality, `(x ∘_a y) ∘_b (u ∘_a v) = (x ∘_b u) ∘_a (y ∘_b v)`.
    Shuffle,
}

impl Distributivity {
    pub const ALL: [Distributivity; 3] = [Distributivity::Lin, Distributivity::Colin, Distributivity::Shuffle];

    pub fn name(self) -> &'static str {
        match self {
            Distributivity::Lin => "LIN",
            Distributivity::Colin => "COLIN",
            Distributivity::Shuffle => "SHUFFLE",
        }
    }
}

impl fmt::Display for Distributivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Distributivity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "LIN" => Ok(Distributivity::Lin),
            "COLIN" => Ok(Distributivity::Colin),
            "SHUFFLE" => Ok(Distributivity::Shuffle),
            other => Err(Error::InvalidInput(format!("unknown distributivity law `{other}`"))),
        }
    }
}

/// Max over samples of `d(LIN_{a,b}(x,y,z), z)`, `d(COLIN_{a,b}(x,y,z), z)` or
/// the medial-law residual.
pub fn check_distributivity(alg: &AlgebraHandle, kind: Distributivity, s: &SampleSpec, tol: f64) -> Result<PropertyReport> {
    run_campaign(kind.name(), &alg.name(), s, tol, |rng| {
        let count = if kind == Distributivity::Shuffle { 4 } else { 3 };
        let pts = alg.sample(rng, &s.bounds, count)?;
        let a = s.scalar_range.draw(rng)?;
        let b = s.scalar_range.draw(rng)?;
        let r = match kind {
            Distributivity::Lin => alg.dist(&alg.lin_term(a, b, &pts[0], &pts[1], &pts[2])?, &pts[2])?,
            Distributivity::Colin => alg.dist(&alg.colin_term(a, b, &pts[0], &pts[1], &pts[2])?, &pts[2])?,
            Distributivity::Shuffle => alg.shuffle_residual(a, b, &pts[0], &pts[1], &pts[2], &pts[3])?,
        };
        Ok(Evaluation::worst([(kind.name(), r)], vec![a, b], pts))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{make_sphere, make_unipotent, make_vector_space};
    use crate::verifier::{Thresholds, Verdict};

    fn verdicts(alg: &AlgebraHandle) -> Vec<Verdict> {
        let s = SampleSpec::new(11, 200);
        Distributivity::ALL
            .iter()
            .map(|&k| check_distributivity(alg, k, &s, 1e-9).unwrap().verdict(&Thresholds::default()))
            .collect()
    }

    #[test]
    fn parse_names() {
        assert_eq!("colin".parse::<Distributivity>().unwrap(), Distributivity::Colin);
        assert!("LINEAR".parse::<Distributivity>().is_err());
    }

    #[test]
    fn classification() {
        use Verdict::*;
        assert_eq!(verdicts(&make_vector_space(3).unwrap()), [Pass, Pass, Pass]);
        assert_eq!(verdicts(&make_unipotent(2).unwrap()), [Pass, Pass, Pass]);
        assert_eq!(verdicts(&make_unipotent(3).unwrap()), [Pass, Fail, Fail]);
        assert_eq!(verdicts(&make_sphere())[0], Fail);
    }
}
