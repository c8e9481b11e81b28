use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Comparison {
    Le,
    Lt,
    Ge,
    Gt,
}

impl Comparison {
    pub fn symbol(self) -> &'static str {
        match self {
            Comparison::Le => "<=",
            Comparison::Lt => "<",
            Comparison::Ge => ">=",
            Comparison::Gt => ">",
        }
    }

    /// `<=` and `<` bound the probability from above.
    pub fn is_upper_bound(self) -> bool {
        matches!(self, Comparison::Le | Comparison::Lt)
    }

    pub fn holds<T: PartialOrd>(self, value: &T, threshold: &T) -> bool {
        match self {
            Comparison::Le => value <= threshold,
            Comparison::Lt => value < threshold,
            Comparison::Ge => value >= threshold,
            Comparison::Gt => value > threshold,
        }
    }

    pub fn negate(self) -> Comparison {
        match self {
            Comparison::Le => Comparison::Gt,
            Comparison::Lt => Comparison::Ge,
            Comparison::Ge => Comparison::Lt,
            Comparison::Gt => Comparison::Le,
        }
    }
}

/// Threshold on the probability of eventually reaching the target set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Spec {
    pub comparison: Comparison,
    pub threshold: Rational,
}

impl Spec {
    pub fn new(comparison: Comparison, threshold: Rational) -> Result<Self> {
        if threshold < Rational::zero() || threshold > Rational::one() {
            return Err(Error::Model(format!(
                "threshold {} outside [0, 1]",
                format_rational(&threshold)
            )));
        }
        Ok(Spec {
            comparison,
            threshold,
        })
    }

    pub fn holds(&self, probability: &Rational) -> bool {
        self.comparison.holds(probability, &self.threshold)
    }

    /// The complementary specification.
    pub fn negate(&self) -> Spec {
        Spec {
            comparison: self.comparison.negate(),
            threshold: self.threshold.clone(),
        }
    }

    /// Parses `reach >= 3/20` (operators `<=`, `<`, `>=`, `>`).
    pub fn parse(text: &str) -> Result<Spec> {
        let text = text.trim();
        let rest = text
            .strip_prefix("reach")
            .ok_or_else(|| Error::parse(1, 1, "specification must start with `reach`"))?;
        let offset = text.len() - rest.len();
        let rest_trim = rest.trim_start();
        let op_col = offset + (rest.len() - rest_trim.len()) + 1;
        let (comparison, value) = if let Some(v) = rest_trim.strip_prefix("<=") {
            (Comparison::Le, v)
        } else if let Some(v) = rest_trim.strip_prefix(">=") {
            (Comparison::Ge, v)
        } else if let Some(v) = rest_trim.strip_prefix('<') {
            (Comparison::Lt, v)
        } else if let Some(v) = rest_trim.strip_prefix('>') {
            (Comparison::Gt, v)
        } else {
            return Err(Error::parse(1, op_col, "expected one of <=, <, >=, >"));
        };
        let threshold = parse_rational(value).ok_or_else(|| {
            Error::parse(
                1,
                op_col + 1,
                format!("invalid threshold `{}`", value.trim()),
            )
        })?;
        Spec::new(comparison, threshold)
    }
}

impl fmt::Display for Spec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "reach {} {}",
            self.comparison.symbol(),
            format_rational(&self.threshold)
        )
    }
}

/// Outcome of verifying a region against a specification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Accepting,
    Rejecting,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Accepting => "ACCEPTING",
            Verdict::Rejecting => "REJECTING",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn parse_all_operators() {
        for (text, cmp) in [
            ("reach >= 3/20", Comparison::Ge),
            ("reach<=1/2", Comparison::Le),
            ("reach < 0.15", Comparison::Lt),
            ("reach > 0", Comparison::Gt),
        ] {
            assert_eq!(Spec::parse(text).unwrap().comparison, cmp, "{text}");
        }
        assert_eq!(Spec::parse("reach < 0.15").unwrap().threshold, ratio(3, 20));
    }

    #[test]
    fn parse_errors() {
        assert!(Spec::parse("prob >= 1/2").is_err());
        assert!(Spec::parse("reach == 1/2").is_err());
        assert!(Spec::parse("reach >= 3/2").is_err());
        assert!(Spec::parse("reach >= abc").is_err());
    }

    #[test]
    fn holds_and_negation() {
        let s = Spec::parse("reach >= 3/20").unwrap();
        assert!(s.holds(&ratio(1, 6)));
        assert!(!s.negate().holds(&ratio(1, 6)));
        assert_eq!(s.to_string(), "reach >= 3/20");
    }
}
