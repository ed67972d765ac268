//! Mamdani inference: min for AND, `1 - mu` for NOT, max aggregation,
//! centroid defuzzification over a uniform grid.

use super::MembershipFunction;
use crate::{Error, Result};

/// Sample count of the output-universe discretisation.
pub const CENTROID_SAMPLES: usize = 101;

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzySet {
    pub name: String,
    pub mf: MembershipFunction,
}

/// A named universe of discourse with its linguistic sets.
#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub sets: Vec<FuzzySet>,
}

impl Variable {
    pub fn new(name: &str, min: f64, max: f64) -> Self {
        Self {
            name: name.to_string(),
            min,
            max,
            sets: Vec::new(),
        }
    }

    pub fn with_set(mut self, name: &str, mf: MembershipFunction) -> Self {
        self.sets.push(FuzzySet {
            name: name.to_string(),
            mf,
        });
        self
    }

    pub fn set(&self, name: &str) -> Option<&FuzzySet> {
        self.sets.iter().find(|s| s.name == name)
    }

    fn set_index(&self, name: &str) -> Option<usize> {
        self.sets.iter().position(|s| s.name == name)
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.min + self.max)
    }

    /// Sample points of the centroid grid.
    pub fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        (0..CENTROID_SAMPLES).map(move |i| self.midpoint() + self.grid_offset(i))
    }

    /// Offset of grid point `i` from the midpoint; `grid_offset(n - 1 - i)`
    /// is exactly `-grid_offset(i)`.
    fn grid_offset(&self, i: usize) -> f64 {
        let c = (CENTROID_SAMPLES / 2) as f64;
        0.5 * (self.max - self.min) * (i as f64 - c) / c
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Antecedent {
    pub input: String,
    pub set: String,
    pub negated: bool,
}

impl Antecedent {
    pub fn is(input: &str, set: &str) -> Self {
        Self {
            input: input.into(),
            set: set.into(),
            negated: false,
        }
    }

    pub fn is_not(input: &str, set: &str) -> Self {
        Self {
            input: input.into(),
            set: set.into(),
            negated: true,
        }
    }
}

/// IF all antecedents THEN `output` IS `set`.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyRule {
    pub antecedents: Vec<Antecedent>,
    pub output: String,
    pub set: String,
}

impl FuzzyRule {
    pub fn new(antecedents: Vec<Antecedent>, output: &str, set: &str) -> Self {
        Self {
            antecedents,
            output: output.into(),
            set: set.into(),
        }
    }
}

impl std::fmt::Display for FuzzyRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "IF ")?;
        for (i, a) in self.antecedents.iter().enumerate() {
            if i > 0 {
                write!(f, " AND ")?;
            }
            let not = if a.negated { "NOT " } else { "" };
            write!(f, "{} IS {not}{}", a.input, a.set)?;
        }
        write!(f, " THEN {} IS {}", self.output, self.set)
    }
}

#[derive(Debug, Clone, Copy)]
struct ResolvedRule {
    antecedents: [(usize, usize, bool); 2],
    count: usize,
    output: usize,
    set: usize,
}

/// Validated rule base with names resolved to indices.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleBase {
    pub inputs: Vec<Variable>,
    pub outputs: Vec<Variable>,
    pub rules: Vec<FuzzyRule>,
}

/// One defuzzified output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrispOutput {
    pub value: f64,
    /// No rule fired for this output; `value` is the universe midpoint.
    pub zero_activation: bool,
}

impl RuleBase {
    pub fn new(inputs: Vec<Variable>, outputs: Vec<Variable>, rules: Vec<FuzzyRule>) -> Result<Self> {
        let base = Self {
            inputs,
            outputs,
            rules,
        };
        base.resolve()?;
        Ok(base)
    }

    fn resolve(&self) -> Result<Vec<ResolvedRule>> {
        for v in self.inputs.iter().chain(&self.outputs) {
            if !(v.min < v.max) {
                return Err(Error::invalid(format!("variable {}", v.name), "empty universe"));
            }
            for s in &v.sets {
                if !s.mf.is_valid() {
                    return Err(Error::invalid(
                        format!("set {}.{}", v.name, s.name),
                        "breakpoints must satisfy a < b",
                    ));
                }
            }
        }
        self.rules
            .iter()
            .enumerate()
            .map(|(k, rule)| {
                let entity = || format!("rule {}", k + 1);
                if rule.antecedents.is_empty() || rule.antecedents.len() > 2 {
                    return Err(Error::invalid(entity(), "needs one or two antecedents"));
                }
                let mut antecedents = [(0, 0, false); 2];
                for (slot, a) in rule.antecedents.iter().enumerate() {
                    let vi = self
                        .inputs
                        .iter()
                        .position(|v| v.name == a.input)
                        .ok_or_else(|| Error::invalid(entity(), format!("unknown input '{}'", a.input)))?;
                    let si = self.inputs[vi]
                        .set_index(&a.set)
                        .ok_or_else(|| Error::invalid(entity(), format!("unknown set '{}'", a.set)))?;
                    antecedents[slot] = (vi, si, a.negated);
                }
                let output = self
                    .outputs
                    .iter()
                    .position(|v| v.name == rule.output)
                    .ok_or_else(|| Error::invalid(entity(), format!("unknown output '{}'", rule.output)))?;
                let set = self.outputs[output]
                    .set_index(&rule.set)
                    .ok_or_else(|| Error::invalid(entity(), format!("unknown set '{}'", rule.set)))?;
                Ok(ResolvedRule {
                    antecedents,
                    count: rule.antecedents.len(),
                    output,
                    set,
                })
            })
            .collect()
    }

    /// Firing strength of every rule for inputs given in `self.inputs`
    /// order. Inputs are clamped into their universes.
    pub fn firing_strengths(&self, inputs: &[f64]) -> Vec<f64> {
        let resolved = self.resolve().expect("rule base validated at construction");
        let clamped: Vec<f64> = self
            .inputs
            .iter()
            .zip(inputs)
            .map(|(v, &x)| x.clamp(v.min, v.max))
            .collect();
        resolved
            .iter()
            .map(|r| {
                r.antecedents[..r.count]
                    .iter()
                    .map(|&(vi, si, neg)| {
                        let mu = self.inputs[vi].sets[si].mf.eval(clamped[vi]);
                        if neg {
                            1.0 - mu
                        } else {
                            mu
                        }
                    })
                    .fold(1.0, f64::min)
            })
            .collect()
    }

    /// Crisp value of every output, in `self.outputs` order.
    pub fn infer(&self, inputs: &[f64]) -> Vec<CrispOutput> {
        assert_eq!(inputs.len(), self.inputs.len(), "one value per input variable");
        let resolved = self.resolve().expect("rule base validated at construction");
        let firing = self.firing_strengths(inputs);
        self.outputs
            .iter()
            .enumerate()
            .map(|(oi, var)| {
                let active: Vec<(f64, &MembershipFunction)> = resolved
                    .iter()
                    .zip(&firing)
                    .filter(|(r, &f)| r.output == oi && f > 0.0)
                    .map(|(r, &f)| (f, &var.sets[r.set].mf))
                    .collect();
                let mu: Vec<f64> = var
                    .grid()
                    .map(|x| active.iter().map(|&(f, mf)| f.min(mf.eval(x))).fold(0.0, f64::max))
                    .collect();
                // Mirrored pairs are summed together so a symmetric aggregate
                // lands exactly on the midpoint.
                let offset = |i: usize| var.grid_offset(i);
                let n = CENTROID_SAMPLES;
                let (mut num, mut den) = (0.0, 0.0);
                for i in 0..n / 2 {
                    let j = n - 1 - i;
                    num += offset(i) * mu[i] + offset(j) * mu[j];
                    den += mu[i] + mu[j];
                }
                den += mu[n / 2];
                if den > 0.0 {
                    CrispOutput {
                        value: (var.midpoint() + num / den).clamp(var.min, var.max),
                        zero_activation: false,
                    }
                } else {
                    CrispOutput {
                        value: var.midpoint(),
                        zero_activation: true,
                    }
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simple() -> RuleBase {
        RuleBase::new(
            vec![Variable::new("x", 0.0, 10.0)
                .with_set("low", MembershipFunction::zmf(2.0, 6.0))
                .with_set("high", MembershipFunction::smf(4.0, 8.0))],
            vec![Variable::new("y", 0.0, 10.0)
                .with_set("small", MembershipFunction::zmf(1.0, 4.0))
                .with_set("big", MembershipFunction::smf(6.0, 9.0))],
            vec![
                FuzzyRule::new(vec![Antecedent::is("x", "low")], "y", "small"),
                FuzzyRule::new(vec![Antecedent::is("x", "high")], "y", "big"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn single_active_rule_centroid_within_consequent_support() {
        let base = simple();
        let out = base.infer(&[0.0]);
        assert!(!out[0].zero_activation);
        assert!(out[0].value < 4.0);
        let out = base.infer(&[10.0]);
        assert!(out[0].value > 6.0);
    }

    #[test]
    fn zero_activation_returns_midpoint() {
        let base = RuleBase::new(
            vec![Variable::new("x", 0.0, 10.0).with_set("high", MembershipFunction::smf(6.0, 9.0))],
            vec![Variable::new("y", -10.0, 10.0).with_set("up", MembershipFunction::smf(0.0, 5.0))],
            vec![FuzzyRule::new(vec![Antecedent::is("x", "high")], "y", "up")],
        )
        .unwrap();
        let out = base.infer(&[1.0]);
        assert!(out[0].zero_activation);
        assert_eq!(out[0].value, 0.0);
    }

    #[test]
    fn negation_and_conjunction() {
        let base = RuleBase::new(
            vec![
                Variable::new("a", 0.0, 10.0).with_set("high", MembershipFunction::smf(0.0, 10.0)),
                Variable::new("b", 0.0, 10.0).with_set("high", MembershipFunction::smf(0.0, 10.0)),
            ],
            vec![Variable::new("y", 0.0, 10.0).with_set("s", MembershipFunction::smf(0.0, 10.0))],
            vec![FuzzyRule::new(
                vec![Antecedent::is("a", "high"), Antecedent::is_not("b", "high")],
                "y",
                "s",
            )],
        )
        .unwrap();
        let f = base.firing_strengths(&[5.0, 2.5]);
        // smf(0,10)(5) = 0.5, 1 - smf(0,10)(2.5) = 1 - 0.125
        assert_eq!(f, vec![0.5]);
        let f = base.firing_strengths(&[10.0, 7.5]);
        assert_eq!(f, vec![0.125]);
    }

    #[test]
    fn inputs_are_clamped() {
        let base = simple();
        assert_eq!(base.infer(&[25.0]), base.infer(&[10.0]));
        assert_eq!(base.infer(&[-3.0]), base.infer(&[0.0]));
    }

    #[test]
    fn unknown_names_are_rejected() {
        let err = RuleBase::new(
            vec![Variable::new("x", 0.0, 1.0).with_set("s", MembershipFunction::smf(0.0, 1.0))],
            vec![Variable::new("y", 0.0, 1.0).with_set("s", MembershipFunction::smf(0.0, 1.0))],
            vec![FuzzyRule::new(vec![Antecedent::is("x", "nope")], "y", "s")],
        )
        .unwrap_err();
        assert!(err.to_string().contains("rule 1"), "{err}");
    }

    #[test]
    fn rule_display() {
        let r = FuzzyRule::new(
            vec![Antecedent::is("l", "high"), Antecedent::is_not("r", "high")],
            "angle",
            "turn_right",
        );
        assert_eq!(r.to_string(), "IF l IS high AND r IS NOT high THEN angle IS turn_right");
    }
}
