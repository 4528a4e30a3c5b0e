use std::fmt;

use super::form::Form;
use super::var::{ExponentVector, Var};
use crate::scalar::Coeff;

/// Factors of a monomial in kernel order, e.g. `["px^2", "x", "k1"]`.
pub fn render_monomial(e: &ExponentVector) -> Vec<String> {
    Var::ALL
        .iter()
        .filter_map(|&v| match e.get(v) {
            0 => None,
            1 => Some(v.name().to_string()),
            n => Some(format!("{}^{}", v.name(), n)),
        })
        .collect()
}

fn push_term(out: &mut String, first: bool, coeff: &impl Coeff, factors: &[String]) {
    let neg = coeff.is_negative_coeff();
    match (first, neg) {
        (true, true) => out.push('-'),
        (true, false) => {}
        (false, true) => out.push_str(" - "),
        (false, false) => out.push_str(" + "),
    }
    let mag = coeff.abs_coeff();
    let mag_text = if mag.needs_parens() { format!("({mag})") } else { mag.to_string() };
    if factors.is_empty() {
        out.push_str(&mag_text);
    } else if mag.is_one() {
        out.push_str(&factors.join("*"));
    } else {
        out.push_str(&mag_text);
        out.push('*');
        out.push_str(&factors.join("*"));
    }
}

/// Renders `(factors, coefficient)` pairs as a sum in the order given.
pub fn render_terms<C: Coeff>(terms: impl IntoIterator<Item = (Vec<String>, C)>) -> String {
    let mut out = String::new();
    for (i, (factors, c)) in terms.into_iter().enumerate() {
        push_term(&mut out, i == 0, &c, &factors);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl<C: Coeff> fmt::Display for Form<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.numerator().terms();
        let num = render_terms(terms.iter().map(|(e, c)| (render_monomial(e), c.clone())));
        let den = self.denominator();
        if den.is_one() {
            return f.write_str(&num);
        }
        let simple_num = terms.len() == 1 && !terms[0].1.to_string().contains('/');
        if simple_num {
            f.write_str(&num)?;
        } else {
            write!(f, "({num})")?;
        }
        let mut factors = render_monomial(&den.monomial());
        match den.s {
            0 => {}
            1 => factors.push("(x^2+y^2+z^2)".to_string()),
            n => factors.push(format!("(x^2+y^2+z^2)^{n}")),
        }
        if factors.len() == 1 {
            write!(f, "/{}", factors[0])
        } else {
            write!(f, "/({})", factors.join("*"))
        }
    }
}
