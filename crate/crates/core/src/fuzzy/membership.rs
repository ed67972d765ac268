use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MfKind {
    /// S-shaped rise from 0 at `a` to 1 at `b`.
    Smf,
    /// Z-shaped fall from 1 at `a` to 0 at `b`.
    Zmf,
}

/// Quadratic-spline S/Z membership function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembershipFunction {
    pub kind: MfKind,
    pub a: f64,
    pub b: f64,
}

impl MembershipFunction {
    pub const fn smf(a: f64, b: f64) -> Self {
        Self {
            kind: MfKind::Smf,
            a,
            b,
        }
    }

    pub const fn zmf(a: f64, b: f64) -> Self {
        Self {
            kind: MfKind::Zmf,
            a,
            b,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.a < self.b
    }

    pub fn eval(&self, x: f64) -> f64 {
        membership(self, x)
    }

    /// Mirror image about zero: smf(a, b) <-> zmf(-b, -a).
    pub fn mirrored(&self) -> Self {
        let kind = match self.kind {
            MfKind::Smf => MfKind::Zmf,
            MfKind::Zmf => MfKind::Smf,
        };
        Self {
            kind,
            a: -self.b,
            b: -self.a,
        }
    }
}

fn smf(a: f64, b: f64, x: f64) -> f64 {
    let mid = 0.5 * (a + b);
    if x <= a {
        0.0
    } else if x <= mid {
        let t = (x - a) / (b - a);
        2.0 * t * t
    } else if x <= b {
        let t = (x - b) / (b - a);
        1.0 - 2.0 * t * t
    } else {
        1.0
    }
}

fn zmf(a: f64, b: f64, x: f64) -> f64 {
    let mid = 0.5 * (a + b);
    if x <= a {
        1.0
    } else if x <= mid {
        let t = (x - a) / (b - a);
        1.0 - 2.0 * t * t
    } else if x <= b {
        let t = (x - b) / (b - a);
        2.0 * t * t
    } else {
        0.0
    }
}

pub fn membership(mf: &MembershipFunction, x: f64) -> f64 {
    match mf.kind {
        MfKind::Smf => smf(mf.a, mf.b, x),
        MfKind::Zmf => zmf(mf.a, mf.b, x),
    }
}

impl fmt::Display for MembershipFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            MfKind::Smf => "smf",
            MfKind::Zmf => "zmf",
        };
        write!(f, "{name}({}, {})", self.a, self.b)
    }
}

impl FromStr for MembershipFunction {
    type Err = String;

    /// Parses `smf(a, b)` / `zmf(a, b)`; the parentheses and comma may be
    /// replaced by whitespace.
    fn from_str(s: &str) -> Result<Self, String> {
        let cleaned: String = s
            .chars()
            .map(|c| if c == '(' || c == ')' || c == ',' { ' ' } else { c })
            .collect();
        let mut parts = cleaned.split_whitespace();
        let kind = match parts.next() {
            Some("smf") => MfKind::Smf,
            Some("zmf") => MfKind::Zmf,
            _ => return Err(format!("expected smf(a, b) or zmf(a, b), got '{s}'")),
        };
        let mut num = || -> Result<f64, String> {
            parts
                .next()
                .ok_or_else(|| format!("missing breakpoint in '{s}'"))?
                .parse::<f64>()
                .map_err(|e| format!("bad breakpoint in '{s}': {e}"))
        };
        let a = num()?;
        let b = num()?;
        if parts.next().is_some() {
            return Err(format!("trailing input in '{s}'"));
        }
        let mf = Self { kind, a, b };
        if !mf.is_valid() {
            return Err(format!("breakpoints must satisfy a < b in '{s}'"));
        }
        Ok(mf)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smf_knots_and_closed_form() {
        let mf = MembershipFunction::smf(1.0, 5.0);
        assert_eq!(mf.eval(1.0), 0.0);
        assert_eq!(mf.eval(5.0), 1.0);
        assert_eq!(mf.eval(3.0), 0.5);
        assert_eq!(mf.eval(2.0), 0.125);
        assert_eq!(mf.eval(-7.0), 0.0);
        assert_eq!(mf.eval(70.0), 1.0);
    }

    #[test]
    fn zmf_knots() {
        let mf = MembershipFunction::zmf(1.0, 5.0);
        assert_eq!(mf.eval(1.0), 1.0);
        assert_eq!(mf.eval(5.0), 0.0);
        assert_eq!(mf.eval(3.0), 0.5);
        assert_eq!(mf.eval(4.0), 0.125);
    }

    #[test]
    fn continuous_and_smooth_at_midpoint() {
        for mf in [MembershipFunction::smf(-2.0, 6.0), MembershipFunction::zmf(-2.0, 6.0)] {
            let mid = 2.0;
            let h = 1e-7;
            let left = (mf.eval(mid) - mf.eval(mid - h)) / h;
            let right = (mf.eval(mid + h) - mf.eval(mid)) / h;
            assert!((left - right).abs() < 1e-5);
            // zero slope at the outer knots
            assert!((mf.eval(-2.0 + h) - mf.eval(-2.0)).abs() < 1e-12);
            assert!((mf.eval(6.0) - mf.eval(6.0 - h)).abs() < 1e-12);
        }
    }

    #[test]
    fn parse_and_display() {
        let mf: MembershipFunction = "smf(1, 6)".parse().unwrap();
        assert_eq!(mf, MembershipFunction::smf(1.0, 6.0));
        let mf: MembershipFunction = "zmf -6 -1".parse().unwrap();
        assert_eq!(mf, MembershipFunction::zmf(-6.0, -1.0));
        assert_eq!(mf.to_string().parse::<MembershipFunction>().unwrap(), mf);
        assert!("smf(5, 1)".parse::<MembershipFunction>().is_err());
        assert!("gauss(1, 2)".parse::<MembershipFunction>().is_err());
        assert!("smf(1)".parse::<MembershipFunction>().is_err());
    }

    #[test]
    fn mirror_swaps_shape() {
        let mf = MembershipFunction::smf(1.0, 6.0);
        let m = mf.mirrored();
        assert_eq!(m, MembershipFunction::zmf(-6.0, -1.0));
        for i in 0..=200 {
            let x = -10.0 + i as f64 * 0.1;
            assert!((mf.eval(x) - m.eval(-x)).abs() < 1e-12);
        }
    }
}
