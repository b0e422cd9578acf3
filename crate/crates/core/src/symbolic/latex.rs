//! LaTeX rendering in the usual notation: `q_\lambda`, `\tilde\omega`, `\delta`.

use std::fmt::Write;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

use super::atoms::{PhaseArg, PhaseAtom, TimeComb};
use super::term::{Coeff, ContractionPhase, DeltaFactor, ScalarExpr, ScalarTerm};

fn label(s: &str) -> String {
    let digits = s.bytes().rev().take_while(u8::is_ascii_digit).count();
    let (head, tail) = s.split_at(s.len() - digits);
    match (head.len(), tail.is_empty()) {
        (1, false) => format!("{head}_{{{tail}}}"),
        (1, true) => head.to_string(),
        _ => format!("\\mathrm{{{}}}", s.replace('_', "\\_")),
    }
}

fn atom(a: &PhaseAtom) -> String {
    match a {
        PhaseAtom::OmegaTilde(k) => format!("\\tilde\\omega({})", label(k.as_str())),
        PhaseAtom::DotP(k) => format!("{}\\cdot p", label(k.as_str())),
        PhaseAtom::Dot(a, b) => format!("{}\\cdot {}", label(a.as_str()), label(b.as_str())),
    }
}

fn linear<'a>(items: impl Iterator<Item = (String, i64)> + 'a) -> String {
    let mut out = String::new();
    for (i, (sym, c)) in items.enumerate() {
        let sign = if c < 0 {
            "-"
        } else if i > 0 {
            "+"
        } else {
            ""
        };
        out.push_str(sign);
        if c.abs() != 1 {
            write!(out, "{}\\,", c.abs()).unwrap();
        }
        out.push_str(&sym);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn phase_arg_latex(x: &PhaseArg) -> String {
    linear(x.iter().map(|(a, c)| (atom(a), c)))
}

pub fn time_latex(t: &TimeComb) -> String {
    linear(t.iter().map(|(l, c)| (label(l.as_str()), c)))
}

fn rational(r: &Rational64) -> String {
    if r.is_integer() {
        r.numer().abs().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", r.numer().abs(), r.denom())
    }
}

// Returns (is_negative, text); text is empty for a unit coefficient.
fn coeff_latex(c: &Coeff) -> (bool, String) {
    if c.im.is_zero() {
        let neg = c.re.is_negative();
        let text = if c.re.abs().is_one() { String::new() } else { rational(&c.re) };
        return (neg, text);
    }
    if c.re.is_zero() {
        let neg = c.im.is_negative();
        let text = if c.im.abs().is_one() { "i".to_string() } else { format!("{}\\,i", rational(&c.im)) };
        return (neg, text);
    }
    let im_sign = if c.im.is_negative() { "-" } else { "+" };
    let re = if c.re.is_negative() { format!("-{}", rational(&c.re)) } else { rational(&c.re) };
    (false, format!("\\left({re}{im_sign}{}\\,i\\right)", rational(&c.im)))
}

fn delta_latex(d: &DeltaFactor) -> String {
    match d {
        DeltaFactor::Momentum(a, b) => format!("\\delta({}-{})", label(a.as_str()), label(b.as_str())),
        DeltaFactor::Time(t) => format!("\\delta({})", time_latex(t)),
        DeltaFactor::Phase(x) => format!("\\delta({})", phase_arg_latex(x)),
        DeltaFactor::Pol(a, b) => format!("\\delta_{{{a}{b}}}"),
    }
}

fn phase_latex(p: &ContractionPhase) -> String {
    format!("q_\\lambda({},\\,{})", time_latex(&p.time), phase_arg_latex(&p.arg))
}

fn term_body(t: &ScalarTerm) -> Vec<String> {
    let mut factors = Vec::new();
    match t.two_pi_power {
        0 => {}
        1 => factors.push("2\\pi".to_string()),
        n => factors.push(format!("(2\\pi)^{{{n}}}")),
    }
    if t.lambda_power != 0 {
        factors.push(format!("\\lambda^{{{}}}", t.lambda_power));
    }
    factors.extend(t.deltas.iter().map(delta_latex));
    factors.extend(t.phases.iter().map(phase_latex));
    factors
}

/// Renders one term; the leading sign is included.
pub fn term_latex(t: &ScalarTerm) -> String {
    let (neg, c) = coeff_latex(&t.coeff);
    let mut factors = term_body(t);
    if !c.is_empty() {
        factors.insert(0, c);
    }
    let body = if factors.is_empty() { "1".to_string() } else { factors.join("\\,") };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

impl ScalarExpr {
    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, t) in self.terms().iter().enumerate() {
            let s = term_latex(t);
            match (i, s.strip_prefix('-')) {
                (0, _) => out.push_str(&s),
                (_, Some(rest)) => write!(out, " - {rest}").unwrap(),
                (_, None) => write!(out, " + {s}").unwrap(),
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::{MomentumLabel, TimeLabel};

    #[test]
    fn renders_two_point_contraction() {
        let (k1, k2) = (MomentumLabel::new("k1"), MomentumLabel::new("k2"));
        let t = ScalarTerm::phase(ContractionPhase::weighted(
            TimeComb::diff(&TimeLabel::new("t1"), &TimeLabel::new("t2")),
            PhaseArg::bare_contraction(&k1),
        ))
        .with_delta(DeltaFactor::momentum(&k1, &k2));
        assert_eq!(
            ScalarExpr::from_term(t).to_latex(),
            "\\lambda^{-2}\\,\\delta(k_{1}-k_{2})\\,q_\\lambda(t_{1}-t_{2},\\,\\tilde\\omega(k_{1})+k_{1}\\cdot p)"
        );
    }

    #[test]
    fn constants() {
        use crate::symbolic::coeff_int;
        assert_eq!(ScalarExpr::zero().to_latex(), "0");
        assert_eq!(ScalarExpr::one().to_latex(), "1");
        assert_eq!(ScalarExpr::one().scale(coeff_int(-3)).to_latex(), "-3");
        let half = Coeff::new(Rational64::new(1, 2), Rational64::new(-1, 1));
        assert_eq!(ScalarExpr::one().scale(half).to_latex(), "\\left(\\frac{1}{2}-1\\,i\\right)");
    }

    #[test]
    fn non_standard_labels() {
        assert_eq!(label("k12"), "k_{12}");
        assert_eq!(label("kin_a"), "\\mathrm{kin\\_a}");
        assert_eq!(label("p"), "p");
    }
}
