//! Noncommutative polynomials over a field.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write;

use crate::field::{Field, Scalar};

/// A word in generator ids together with its total degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub degree: usize,
    pub word: Vec<u32>,
}

impl Monomial {
    pub fn unit() -> Monomial {
        Monomial { degree: 0, word: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn concat(&self, o: &Monomial) -> Monomial {
        let mut word = Vec::with_capacity(self.word.len() + o.word.len());
        word.extend_from_slice(&self.word);
        word.extend_from_slice(&o.word);
        Monomial { degree: self.degree + o.degree, word }
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.degree, self.word.len(), &self.word).cmp(&(o.degree, o.word.len(), &o.word))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Terms are kept in the monomial order with no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NcPolynomial {
    pub field: Field,
    terms: BTreeMap<Monomial, Scalar>,
}

impl NcPolynomial {
    pub fn zero(field: Field) -> NcPolynomial {
        NcPolynomial { field, terms: BTreeMap::new() }
    }

    pub fn constant(field: Field, c: Scalar) -> NcPolynomial {
        let mut p = NcPolynomial::zero(field);
        p.add_term(Monomial::unit(), c);
        p
    }

    pub fn one(field: Field) -> NcPolynomial {
        NcPolynomial::constant(field, field.one())
    }

    pub fn generator(field: Field, g: u32, degree: usize) -> NcPolynomial {
        NcPolynomial::term(field, Monomial { degree, word: vec![g] }, field.one())
    }

    pub fn term(field: Field, m: Monomial, c: Scalar) -> NcPolynomial {
        let mut p = NcPolynomial::zero(field);
        p.add_term(m, c);
        p
    }

    /// A degree-0 polynomial from `(word, coefficient)` pairs.
    pub fn from_words(field: Field, terms: impl IntoIterator<Item = (Vec<u32>, Scalar)>) -> NcPolynomial {
        let mut p = NcPolynomial::zero(field);
        for (w, c) in terms {
            p.add_term(Monomial { degree: 0, word: w }, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        crate::chains::add_term(&mut self.terms, m, c);
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> + '_ {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn constant_term(&self) -> Scalar {
        self.coefficient(&Monomial::unit())
    }

    /// Largest term in the monomial order.
    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// The common degree of all terms, if there is one.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|m| m.degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn max_length(&self) -> usize {
        self.terms.keys().map(Monomial::len).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Scalar) -> NcPolynomial {
        let mut p = NcPolynomial::zero(self.field);
        for (m, k) in &self.terms {
            p.add_term(m.clone(), k * c);
        }
        p
    }

    pub fn plus(&self, o: &NcPolynomial) -> NcPolynomial {
        let mut p = self.clone();
        for (m, k) in &o.terms {
            p.add_term(m.clone(), k.clone());
        }
        p
    }

    pub fn minus(&self, o: &NcPolynomial) -> NcPolynomial {
        let mut p = self.clone();
        for (m, k) in &o.terms {
            p.add_term(m.clone(), -k);
        }
        p
    }

    pub fn times(&self, o: &NcPolynomial) -> NcPolynomial {
        let mut p = NcPolynomial::zero(self.field);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                p.add_term(a.concat(b), x * y);
            }
        }
        p
    }

    pub fn pow(&self, e: usize) -> NcPolynomial {
        (0..e).fold(NcPolynomial::one(self.field), |acc, _| acc.times(self))
    }

    /// Algebra map sending generator `g` to `images[g]`.
    pub fn substitute(&self, images: &[NcPolynomial]) -> NcPolynomial {
        let mut out = NcPolynomial::zero(self.field);
        for (m, c) in &self.terms {
            let mut acc = NcPolynomial::constant(self.field, c.clone());
            for g in &m.word {
                acc = acc.times(&images[*g as usize]);
                if acc.is_zero() {
                    break;
                }
            }
            out = out.plus(&acc);
        }
        out
    }

    /// Linear map on monomials.
    pub fn map_monomials(&self, f: impl Fn(&Monomial) -> NcPolynomial) -> NcPolynomial {
        let mut out = NcPolynomial::zero(self.field);
        for (m, c) in &self.terms {
            out = out.plus(&f(m).scale(c));
        }
        out
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let text = c.to_string();
            let (neg, mag) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let word: Vec<&str> = m.word.iter().map(|g| names[*g as usize].as_str()).collect();
            if word.is_empty() {
                s.push_str(&mag);
            } else {
                if mag != "1" {
                    let _ = write!(s, "{mag}");
                }
                s.push_str(&word.join("·"));
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(g: u32) -> NcPolynomial {
        NcPolynomial::generator(Field::Rationals, g, 0)
    }

    #[test]
    fn ring_operations() {
        let q = Field::Rationals;
        let one = NcPolynomial::one(q);
        let a = x(0).plus(&one);
        let sq = a.times(&a);
        assert_eq!(sq.render(&["t".into()]), "1 + 2t + t·t");
        assert!(sq.minus(&sq).is_zero());
        assert_eq!(a.pow(0), one);
        let noncomm = x(0).times(&x(1)).minus(&x(1).times(&x(0)));
        assert_eq!(noncomm.num_terms(), 2);
    }

    #[test]
    fn order_is_degree_then_length_then_lex() {
        let m = |d, w: &[u32]| Monomial { degree: d, word: w.to_vec() };
        let mut v = vec![m(1, &[0]), m(0, &[1, 0]), m(0, &[0, 1]), m(0, &[2]), m(0, &[])];
        v.sort();
        assert_eq!(v, vec![m(0, &[]), m(0, &[2]), m(0, &[0, 1]), m(0, &[1, 0]), m(1, &[0])]);
    }

    #[test]
    fn substitution_is_multiplicative() {
        let q = Field::Rationals;
        let p = x(0).times(&x(1)).plus(&NcPolynomial::one(q));
        let images = vec![x(1).plus(&NcPolynomial::one(q)), x(0).scale(&q.from_i64(2))];
        let got = p.substitute(&images);
        let want = x(1).times(&x(0)).scale(&q.from_i64(2)).plus(&x(0).scale(&q.from_i64(2))).plus(&NcPolynomial::one(q));
        assert_eq!(got, want);
    }
}
