//! Size expressions in `n` and the trace events evaluated by the estimator.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::sim::run::RunTrace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("cannot parse size expression {0:?}")]
    Syntax(String),
    #[error("L(n) is only defined for scheme strategies")]
    NoSchemeLength,
    #[error("cannot parse event {0:?}; expected term>=EXPR or msafe=EXPR")]
    Event(String),
    #[error("m-safety until SimLen needs a scheme strategy")]
    MSafeNeedsScheme,
}

/// An expression in `n`, or the square of the scheme length `L(n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SizeExpr {
    Affine { a: f64, b: f64 },
    Power { c: f64, p: f64 },
    LengthSquared,
}

impl SizeExpr {
    pub fn eval(&self, n: u64, length: Option<u64>) -> Result<f64, ExprError> {
        let x = n as f64;
        match *self {
            SizeExpr::Affine { a, b } => Ok(a * x + b),
            SizeExpr::Power { c, p } => Ok(c * x.powf(p)),
            SizeExpr::LengthSquared => {
                let l = length.ok_or(ExprError::NoSchemeLength)? as f64;
                Ok(l * l)
            }
        }
    }

    /// `⌊eval⌋`, clamped at zero.
    pub fn eval_floor(&self, n: u64, length: Option<u64>) -> Result<u64, ExprError> {
        Ok(self.eval(n, length)?.floor().max(0.0) as u64)
    }

    pub fn uses_length(&self) -> bool {
        matches!(self, SizeExpr::LengthSquared)
    }
}

fn number(text: &str, whole: &str) -> Result<f64, ExprError> {
    text.parse::<f64>().map_err(|_| ExprError::Syntax(whole.to_string()))
}

fn coefficient(text: &str, whole: &str) -> Result<f64, ExprError> {
    let t = text.trim().trim_end_matches('*').trim();
    match t {
        "" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => number(t, whole),
    }
}

impl FromStr for SizeExpr {
    type Err = ExprError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text == "L^2" || text == "L(n)^2" {
            return Ok(SizeExpr::LengthSquared);
        }
        let Some(pos) = text.find('n') else {
            return Ok(SizeExpr::Affine {
                a: 0.0,
                b: number(&text, s)?,
            });
        };
        let (head, tail) = (&text[..pos], &text[pos + 1..]);
        if let Some(exp) = tail.strip_prefix('^') {
            return Ok(SizeExpr::Power {
                c: coefficient(head, s)?,
                p: number(exp, s)?,
            });
        }
        let b = if tail.is_empty() {
            0.0
        } else if let Some(rest) = tail.strip_prefix('+') {
            number(rest, s)?
        } else if tail.starts_with('-') {
            number(tail, s)?
        } else {
            return Err(ExprError::Syntax(s.to_string()));
        };
        Ok(SizeExpr::Affine {
            a: coefficient(head, s)?,
            b,
        })
    }
}

impl fmt::Display for SizeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coef = |c: f64| if c == 1.0 { String::new() } else { c.to_string() };
        match *self {
            SizeExpr::Affine { a: 0.0, b } => write!(f, "{b}"),
            SizeExpr::Affine { a, b: 0.0 } => write!(f, "{}n", coef(a)),
            SizeExpr::Affine { a, b } => write!(f, "{}n{b:+}", coef(a)),
            SizeExpr::Power { c, p } => write!(f, "{}n^{p}", coef(c)),
            SizeExpr::LengthSquared => f.write_str("L^2"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SafetyEvent {
    /// `Term >= t(n)`, judged on `min(Term, horizon)`.
    TermAtLeast(SizeExpr),
    /// Every running sum stays `>= -m(n)` up to `SimLen`.
    MSafeUntilSimLen(SizeExpr),
}

impl SafetyEvent {
    pub fn needs_scheme(&self) -> bool {
        matches!(self, SafetyEvent::MSafeUntilSimLen(_))
    }

    pub fn uses_length(&self) -> bool {
        match self {
            SafetyEvent::TermAtLeast(e) | SafetyEvent::MSafeUntilSimLen(e) => e.uses_length(),
        }
    }

    pub fn holds(&self, trace: &RunTrace, n: u64, length: Option<u64>) -> Result<bool, ExprError> {
        match self {
            SafetyEvent::TermAtLeast(t) => Ok(trace.term.truncated() as f64 >= t.eval(n, length)?),
            SafetyEvent::MSafeUntilSimLen(m) => {
                let m = m.eval(n, length)?;
                Ok(trace.sim_len.is_some() && trace.accumulator_min.iter().all(|&c| c as f64 >= -m))
            }
        }
    }
}

impl FromStr for SafetyEvent {
    type Err = ExprError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let lower = text.to_ascii_lowercase();
        if lower.starts_with("term>=") {
            Ok(SafetyEvent::TermAtLeast(text[6..].parse()?))
        } else if lower.starts_with("msafe=") {
            Ok(SafetyEvent::MSafeUntilSimLen(text[6..].parse()?))
        } else {
            Err(ExprError::Event(s.to_string()))
        }
    }
}

impl fmt::Display for SafetyEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SafetyEvent::TermAtLeast(e) => write!(f, "term>={e}"),
            SafetyEvent::MSafeUntilSimLen(e) => write!(f, "msafe={e}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_expressions() {
        assert_eq!("8n".parse::<SizeExpr>().unwrap(), SizeExpr::Affine { a: 8.0, b: 0.0 });
        assert_eq!("n".parse::<SizeExpr>().unwrap(), SizeExpr::Affine { a: 1.0, b: 0.0 });
        assert_eq!("2*n+3".parse::<SizeExpr>().unwrap(), SizeExpr::Affine { a: 2.0, b: 3.0 });
        assert_eq!("n-1".parse::<SizeExpr>().unwrap(), SizeExpr::Affine { a: 1.0, b: -1.0 });
        assert_eq!("64n^2".parse::<SizeExpr>().unwrap(), SizeExpr::Power { c: 64.0, p: 2.0 });
        assert_eq!("n^1.5".parse::<SizeExpr>().unwrap(), SizeExpr::Power { c: 1.0, p: 1.5 });
        assert_eq!("L^2".parse::<SizeExpr>().unwrap(), SizeExpr::LengthSquared);
        assert_eq!("1000".parse::<SizeExpr>().unwrap(), SizeExpr::Affine { a: 0.0, b: 1000.0 });
        assert!("n*".parse::<SizeExpr>().is_err());
        assert!("x".parse::<SizeExpr>().is_err());
    }

    #[test]
    fn evaluates() {
        let e: SizeExpr = "n^1.2".parse().unwrap();
        assert_eq!(e.eval_floor(16, None).unwrap(), 27);
        assert_eq!(SizeExpr::LengthSquared.eval(0, Some(7)).unwrap(), 49.0);
        assert_eq!(SizeExpr::LengthSquared.eval(0, None), Err(ExprError::NoSchemeLength));
    }

    #[test]
    fn parses_events() {
        assert_eq!(
            "term>=L^2".parse::<SafetyEvent>().unwrap(),
            SafetyEvent::TermAtLeast(SizeExpr::LengthSquared)
        );
        assert_eq!(
            "msafe=8n".parse::<SafetyEvent>().unwrap(),
            SafetyEvent::MSafeUntilSimLen(SizeExpr::Affine { a: 8.0, b: 0.0 })
        );
        assert!("term<3".parse::<SafetyEvent>().is_err());
        let ev: SafetyEvent = "term>=n^1.5".parse().unwrap();
        assert_eq!(ev.to_string(), "term>=n^1.5");
        assert_eq!("msafe=8n".parse::<SafetyEvent>().unwrap().to_string(), "msafe=8n");
    }
}
