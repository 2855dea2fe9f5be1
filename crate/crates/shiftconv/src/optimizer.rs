//! Exact min-max bookkeeping over monomial bounds.
//!
//! A bound is a maximum of monomial terms, each a product of named variables
//! raised to rational exponents. Substituting one variable by a monomial in
//! the others, balancing a pair of terms, and minimizing the worst exponent
//! over a one-dimensional family are all exact over arbitrary-precision
//! rationals; no floating point enters this module.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Convenience constructor for an exact rational.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// One monomial: variable name -> exponent, zero exponents dropped.
pub type Term = BTreeMap<String, BigRational>;

/// Build a term out of (name, exponent) pairs.
pub fn term(entries: &[(&str, BigRational)]) -> Term {
    let mut t = Term::new();
    for (name, exp) in entries {
        if !exp.is_zero() {
            t.insert(name.to_string(), exp.clone());
        }
    }
    t
}

fn term_display(t: &Term) -> String {
    if t.is_empty() {
        return "1".to_string();
    }
    t.iter()
        .map(|(v, e)| {
            if *e == rat(1, 1) {
                v.clone()
            } else {
                format!("{v}^({e})")
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// A maximum of monomial terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBound {
    terms: Vec<Term>,
}

impl fmt::Display for MonomialBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(term_display).collect();
        write!(f, "max({})", parts.join(", "))
    }
}

impl MonomialBound {
    pub fn new(terms: Vec<Term>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Range("a bound needs at least one term".into()));
        }
        let mut b = MonomialBound { terms };
        b.dedup();
        Ok(b)
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    fn dedup(&mut self) {
        let mut seen: Vec<Term> = Vec::new();
        for t in self.terms.drain(..) {
            if !seen.contains(&t) {
                seen.push(t);
            }
        }
        self.terms = seen;
    }

    pub fn contains_var(&self, var: &str) -> bool {
        self.terms.iter().any(|t| t.contains_key(var))
    }

    /// Replace `var` by the monomial `expr` (a product of other variables),
    /// exactly.
    pub fn substitute(&self, var: &str, expr: &[(&str, BigRational)]) -> Result<MonomialBound> {
        if !self.contains_var(var) {
            return Err(Error::UnknownVariable(var.to_string()));
        }
        let mut out = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let mut nt = t.clone();
            if let Some(e) = nt.remove(var) {
                for (v, c) in expr {
                    let add = &e * c;
                    let entry = nt.entry(v.to_string()).or_insert_with(BigRational::zero);
                    *entry += add;
                }
                nt.retain(|_, x| !x.is_zero());
            }
            out.push(nt);
        }
        MonomialBound::new(out)
    }

    /// Raise the whole bound to the rational power `r` (exponents scale).
    pub fn pow(&self, r: &BigRational) -> MonomialBound {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut nt = Term::new();
                for (v, e) in t {
                    let ne = e * r;
                    if !ne.is_zero() {
                        nt.insert(v.clone(), ne);
                    }
                }
                nt
            })
            .collect();
        MonomialBound { terms }
    }

    /// Append another term.
    pub fn with_term(&self, t: Term) -> MonomialBound {
        let mut terms = self.terms.clone();
        terms.push(t);
        let mut b = MonomialBound { terms };
        b.dedup();
        b
    }

    /// Solve term_i = term_j for `var`: returns the monomial expression of
    /// `var` in the remaining variables that balances the two terms. Fails
    /// when the terms carry the same power of `var`.
    pub fn balance(&self, i: usize, j: usize, var: &str) -> Result<Vec<(String, BigRational)>> {
        let zero = BigRational::zero();
        let ti = self.terms.get(i).ok_or_else(|| Error::Range(format!("no term {i}")))?;
        let tj = self.terms.get(j).ok_or_else(|| Error::Range(format!("no term {j}")))?;
        let d = ti.get(var).unwrap_or(&zero) - tj.get(var).unwrap_or(&zero);
        if d.is_zero() {
            return Err(Error::Range(format!(
                "terms {i} and {j} carry the same power of {var}"
            )));
        }
        let mut vars: Vec<&String> = ti.keys().chain(tj.keys()).filter(|v| *v != var).collect();
        vars.sort();
        vars.dedup();
        let mut expr = Vec::new();
        for v in vars {
            let c = (tj.get(v).unwrap_or(&zero) - ti.get(v).unwrap_or(&zero)) / &d;
            if !c.is_zero() {
                expr.push((v.clone(), c));
            }
        }
        Ok(expr)
    }
}

/// Result of a one-variable min-max.
#[derive(Clone, Debug)]
pub struct Optimization {
    /// Optimal exponent t in var = objective^t.
    pub exponent: BigRational,
    /// Worst term exponent at the optimum.
    pub value: BigRational,
    /// Every crossing candidate examined, as (t, max exponent there).
    pub candidates: Vec<(BigRational, BigRational)>,
}

/// Minimize, over the exponent t in `var = objective^t`, the maximum
/// objective-exponent of the bound. Every term must be a monomial in
/// {var, objective} alone so the maximum is totally ordered; the optimum of a
/// maximum of lines sits at a pairwise crossing.
pub fn optimize_single(b: &MonomialBound, var: &str, objective: &str) -> Result<Optimization> {
    if !b.contains_var(var) {
        return Err(Error::UnknownVariable(var.to_string()));
    }
    let zero = BigRational::zero();
    let mut lines: Vec<(BigRational, BigRational)> = Vec::new(); // (slope, intercept)
    for t in b.terms() {
        for v in t.keys() {
            if v != var && v != objective {
                return Err(Error::Range(format!(
                    "term `{}` involves {v}; eliminate it before optimizing over {var}",
                    term_display(t)
                )));
            }
        }
        lines.push((
            t.get(var).unwrap_or(&zero).clone(),
            t.get(objective).unwrap_or(&zero).clone(),
        ));
    }
    let has_positive = lines.iter().any(|(a, _)| a.is_positive());
    let has_negative = lines.iter().any(|(a, _)| a.is_negative());
    let has_flat = lines.iter().any(|(a, _)| a.is_zero());
    if !has_positive && !has_negative {
        // constant in var; any t works
        let value = lines.iter().map(|(_, b)| b.clone()).max().unwrap();
        return Ok(Optimization {
            exponent: zero,
            value,
            candidates: vec![],
        });
    }
    if !(has_positive && (has_negative || has_flat)) && !(has_negative && has_flat) {
        return Err(Error::Unbounded(format!(
            "all terms move the same way in {var}; no interior minimum"
        )));
    }

    let eval_max = |t: &BigRational| -> BigRational {
        lines
            .iter()
            .map(|(a, b)| a * t + b)
            .max()
            .expect("nonempty")
    };

    let mut best: Option<(BigRational, BigRational)> = None;
    let mut candidates = Vec::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let (ai, bi) = &lines[i];
            let (aj, bj) = &lines[j];
            if ai == aj {
                continue;
            }
            let t = (bj - bi) / (ai - aj);
            let m = eval_max(&t);
            candidates.push((t.clone(), m.clone()));
            match &best {
                Some((_, bv)) if *bv <= m => {}
                _ => best = Some((t, m)),
            }
        }
    }
    let (exponent, value) = best.ok_or_else(|| {
        Error::Unbounded(format!("no crossing found while optimizing over {var}"))
    })?;
    Ok(Optimization {
        exponent,
        value,
        candidates,
    })
}

/// One step of the closing optimization, for the printed trace.
#[derive(Clone, Debug, serde::Serialize)]
pub struct PipelineStep {
    pub action: String,
    pub bound: String,
}

/// The closing optimization end to end, exactly.
#[derive(Clone, Debug, serde::Serialize)]
pub struct PipelineResult {
    pub steps: Vec<PipelineStep>,
    /// Every crossing examined in the final minimization, as (t, max there).
    pub crossings: Vec<(String, String)>,
    /// D as a power of Q.
    pub d_exponent: String,
    /// Q as a power of X.
    pub q_exponent: String,
    /// The final bound exponent in X.
    pub final_exponent: String,
    /// Q = X^q with q > 1/2.
    pub constraint_q_above_sqrt_x: bool,
}

/// Run the two-step closing optimization:
/// balance the first two terms of (D Q X + D^{-1/2} Q^2 X + D^{1/2} Q^3)^{1/2}
/// in D, append the approximation term X delta^{-1/2} Q^{-1} with
/// delta = X^{-1}, then minimize over Q as a power of X.
pub fn paper_pipeline() -> Result<PipelineResult> {
    let mut steps = Vec::new();
    let inner = MonomialBound::new(vec![
        term(&[("D", rat(1, 1)), ("Q", rat(1, 1)), ("X", rat(1, 1))]),
        term(&[("D", rat(-1, 2)), ("Q", rat(2, 1)), ("X", rat(1, 1))]),
        term(&[("D", rat(1, 2)), ("Q", rat(3, 1))]),
    ])?;
    steps.push(PipelineStep {
        action: "inner bound".into(),
        bound: inner.to_string(),
    });
    let half_bound = inner.pow(&rat(1, 2));
    steps.push(PipelineStep {
        action: "take square root".into(),
        bound: half_bound.to_string(),
    });

    let d_expr = half_bound.balance(0, 1, "D")?;
    let d_exponent = d_expr
        .iter()
        .find(|(v, _)| v == "Q")
        .map(|(_, e)| e.clone())
        .unwrap_or_else(BigRational::zero);
    steps.push(PipelineStep {
        action: format!(
            "balance terms 1,2 in D: D = {}",
            d_expr
                .iter()
                .map(|(v, e)| format!("{v}^({e})"))
                .collect::<Vec<_>>()
                .join(" ")
        ),
        bound: half_bound.to_string(),
    });
    let d_expr_ref: Vec<(&str, BigRational)> =
        d_expr.iter().map(|(v, e)| (v.as_str(), e.clone())).collect();
    let balanced = half_bound.substitute("D", &d_expr_ref)?;
    steps.push(PipelineStep {
        action: "substitute D".into(),
        bound: balanced.to_string(),
    });

    // approximation error X delta^{-1/2} Q^{-1} with delta = X^{-1}
    let with_gap = balanced.with_term(term(&[
        ("X", rat(1, 1)),
        ("Delta", rat(-1, 2)),
        ("Q", rat(-1, 1)),
    ]));
    let with_gap = with_gap.substitute("Delta", &[("X", rat(-1, 1))])?;
    steps.push(PipelineStep {
        action: "append approximation term, set delta = X^{-1}".into(),
        bound: with_gap.to_string(),
    });

    let opt = optimize_single(&with_gap, "Q", "X")?;
    steps.push(PipelineStep {
        action: format!("minimize over Q = X^t: t = {}", opt.exponent),
        bound: format!("X^({})", opt.value),
    });

    let constraint = opt.exponent > rat(1, 2);
    Ok(PipelineResult {
        steps,
        crossings: opt
            .candidates
            .iter()
            .map(|(t, v)| (t.to_string(), v.to_string()))
            .collect(),
        d_exponent: d_exponent.to_string(),
        q_exponent: opt.exponent.to_string(),
        final_exponent: opt.value.to_string(),
        constraint_q_above_sqrt_x: constraint,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_substitution_is_noop() {
        let b = MonomialBound::new(vec![term(&[("X", rat(2, 1)), ("Q", rat(1, 3))])]).unwrap();
        let same = b.substitute("Q", &[("Q", rat(1, 1))]).unwrap();
        assert_eq!(b, same);
    }

    #[test]
    fn substitute_unknown_variable_fails() {
        let b = MonomialBound::new(vec![term(&[("X", rat(1, 1))])]).unwrap();
        assert!(matches!(
            b.substitute("Z", &[("X", rat(1, 1))]),
            Err(Error::UnknownVariable(_))
        ));
    }

    #[test]
    fn balancing_the_paper_terms_gives_two_thirds() {
        let inner = MonomialBound::new(vec![
            term(&[("D", rat(1, 1)), ("Q", rat(1, 1)), ("X", rat(1, 1))]),
            term(&[("D", rat(-1, 2)), ("Q", rat(2, 1)), ("X", rat(1, 1))]),
        ])
        .unwrap();
        let expr = inner.balance(0, 1, "D").unwrap();
        assert_eq!(expr, vec![("Q".to_string(), rat(2, 3))]);
        // the X exponents cancel, so X does not appear
        let sub = inner
            .substitute("D", &[("Q", rat(2, 3))])
            .unwrap();
        // both terms collapse to Q^{5/3} X
        assert_eq!(sub.terms().len(), 1);
        assert_eq!(
            sub.terms()[0],
            term(&[("Q", rat(5, 3)), ("X", rat(1, 1))])
        );
    }

    #[test]
    fn min_max_symmetric_crossing() {
        // max(e, 1-e) minimized at e = 1/2
        let b = MonomialBound::new(vec![
            term(&[("E", rat(1, 1))]),
            term(&[("X", rat(1, 1)), ("E", rat(-1, 1))]),
        ])
        .unwrap();
        let opt = optimize_single(&b, "E", "X").unwrap();
        assert_eq!(opt.exponent, rat(1, 2));
        assert_eq!(opt.value, rat(1, 2));
    }

    #[test]
    fn unbounded_direction_is_flagged() {
        let b = MonomialBound::new(vec![
            term(&[("Q", rat(1, 1))]),
            term(&[("Q", rat(2, 1)), ("X", rat(1, 1))]),
        ])
        .unwrap();
        assert!(matches!(
            optimize_single(&b, "Q", "X"),
            Err(Error::Unbounded(_))
        ));
    }

    #[test]
    fn extra_variable_is_rejected() {
        let b = MonomialBound::new(vec![
            term(&[("Q", rat(1, 1)), ("D", rat(1, 1))]),
            term(&[("Q", rat(-1, 1)), ("X", rat(1, 1))]),
        ])
        .unwrap();
        assert!(optimize_single(&b, "Q", "X").is_err());
    }

    #[test]
    fn paper_pipeline_reproduces_the_exponents() {
        let r = paper_pipeline().unwrap();
        assert_eq!(r.d_exponent, "2/3");
        assert_eq!(r.q_exponent, "6/11");
        assert_eq!(r.final_exponent, "21/22");
        assert!(r.constraint_q_above_sqrt_x);
    }

    #[test]
    fn final_minimization_matches_hand_lines() {
        // minimize max(5q/6 + 1/2, 5q/3, 3/2 - q) over q
        let b = MonomialBound::new(vec![
            term(&[("Q", rat(5, 6)), ("X", rat(1, 2))]),
            term(&[("Q", rat(5, 3))]),
            term(&[("Q", rat(-1, 1)), ("X", rat(3, 2))]),
        ])
        .unwrap();
        let opt = optimize_single(&b, "Q", "X").unwrap();
        assert_eq!(opt.exponent, rat(6, 11));
        assert_eq!(opt.value, rat(21, 22));
    }

    /// Exact grid oracle: no rational point q = k/1848 in [0,1] beats the
    /// crossing minimum, and the minimum is attained at 6/11.
    #[test]
    fn grid_oracle_confirms_min_max() {
        let lines = [
            (rat(5, 6), rat(1, 2)),
            (rat(5, 3), rat(0, 1)),
            (rat(-1, 1), rat(3, 2)),
        ];
        let eval = |t: &BigRational| -> BigRational {
            lines.iter().map(|(a, b)| a * t + b).max().unwrap()
        };
        let best = rat(21, 22);
        // 1848 = 11 * 168: the grid contains 6/11 exactly
        for k in 0..=1848i64 {
            let t = rat(k, 1848);
            assert!(eval(&t) >= best, "grid point {k}/1848 beats the optimum");
        }
        assert_eq!(eval(&rat(6, 11)), best);
    }

    /// Confluence: substituting Q = X^{6/11} into the final system gives a
    /// pure power of X with exponent 21/22 on every surviving term max.
    #[test]
    fn substitute_then_read_off_matches_optimize() {
        let b = MonomialBound::new(vec![
            term(&[("Q", rat(5, 6)), ("X", rat(1, 2))]),
            term(&[("Q", rat(5, 3))]),
            term(&[("Q", rat(-1, 1)), ("X", rat(3, 2))]),
        ])
        .unwrap();
        let sub = b.substitute("Q", &[("X", rat(6, 11))]).unwrap();
        let max_exp = sub
            .terms()
            .iter()
            .map(|t| t.get("X").cloned().unwrap_or_else(BigRational::zero))
            .max()
            .unwrap();
        assert_eq!(max_exp, rat(21, 22));
    }

    #[test]
    fn display_is_readable() {
        let b = MonomialBound::new(vec![term(&[("D", rat(1, 2)), ("Q", rat(3, 1))])]).unwrap();
        assert_eq!(b.to_string(), "max(D^(1/2) Q^(3))");
    }
}
