//! Sparse multivariate polynomials with non-negative big-integer coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Exponent vector; its length is the arity of the owning polynomial.
pub type Exponent = Vec<u32>;

/// `sum c_e t1^{e_1} ... td^{e_d}`. Zero coefficients are never stored, so
/// structural equality is polynomial equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    arity: usize,
    terms: BTreeMap<Exponent, BigUint>,
}

impl Polynomial {
    pub fn zero(arity: usize) -> Self {
        Polynomial {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: impl Into<BigUint>) -> Self {
        let mut p = Polynomial::zero(arity);
        p.add_term(vec![0; arity], c.into());
        p
    }

    pub fn monomial(exponent: Exponent, c: impl Into<BigUint>) -> Self {
        let mut p = Polynomial::zero(exponent.len());
        p.add_term(exponent, c.into());
        p
    }

    /// Builds from `(exponent, count)` pairs, as produced by a sweep.
    pub fn from_counts<I>(arity: usize, counts: I) -> Self
    where
        I: IntoIterator<Item = (Exponent, u64)>,
    {
        let mut p = Polynomial::zero(arity);
        for (e, c) in counts {
            p.add_term(e, BigUint::from(c));
        }
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigUint)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponent: &[u32]) -> BigUint {
        self.terms.get(exponent).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, exponent: Exponent, c: BigUint) {
        assert_eq!(exponent.len(), self.arity, "exponent arity");
        if c.is_zero() {
            return;
        }
        *self.terms.entry(exponent).or_default() += c;
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.arity, other.arity);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.arity, other.arity);
        let mut out = Polynomial::zero(self.arity);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigUint) -> Polynomial {
        let mut out = Polynomial::zero(self.arity);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    /// Substitutes `t_{var} -> c * t_{var}` (0-indexed).
    pub fn scale_variable(&self, var: usize, c: &BigUint) -> Polynomial {
        assert!(var < self.arity);
        let mut out = Polynomial::zero(self.arity);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * num_traits::pow(c.clone(), e[var] as usize));
        }
        out
    }

    /// Value at `t1 = ... = td = 1`.
    pub fn eval_ones(&self) -> BigUint {
        self.terms.values().sum()
    }

    /// Substitutes `t_{var} = 1` (0-indexed) and drops that variable.
    pub fn set_one(&self, var: usize) -> Polynomial {
        assert!(var < self.arity);
        let mut out = Polynomial::zero(self.arity - 1);
        for (e, c) in &self.terms {
            let mut e = e.clone();
            e.remove(var);
            out.add_term(e, c.clone());
        }
        out
    }

    /// Terms in graded order: total degree ascending, then exponent vectors
    /// descending so `t1` precedes `t2`.
    pub fn graded_terms(&self) -> Vec<(&Exponent, &BigUint)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| {
            let da: u64 = a.0.iter().map(|&x| x as u64).sum();
            let db: u64 = b.0.iter().map(|&x| x as u64).sum();
            da.cmp(&db).then_with(|| b.0.cmp(a.0))
        });
        v
    }

    pub fn to_json_terms(&self) -> Vec<JsonTerm> {
        self.graded_terms()
            .into_iter()
            .map(|(e, c)| JsonTerm {
                exp: e.clone(),
                coef: c.to_string(),
            })
            .collect()
    }
}

/// JSON form of one term; the coefficient is a decimal string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub exp: Exponent,
    pub coef: String,
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json_terms().serialize(serializer)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.graded_terms() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| {
                    if x == 1 {
                        format!("t{}", i + 1)
                    } else {
                        format!("t{}^{x}", i + 1)
                    }
                })
                .collect();
            match (vars.is_empty(), c.is_one()) {
                (true, _) => write!(f, "{c}")?,
                (false, true) => f.write_str(&vars.join("*"))?,
                (false, false) => write!(f, "{c}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn display_graded_order() {
        let mut p = Polynomial::zero(2);
        p.add_term(vec![1, 1], n(4));
        p.add_term(vec![0, 0], n(2));
        assert_eq!(p.to_string(), "2 + 4*t1*t2");

        let mut p = Polynomial::zero(2);
        p.add_term(vec![0, 2], n(1));
        p.add_term(vec![2, 0], n(3));
        p.add_term(vec![1, 1], n(1));
        p.add_term(vec![1, 0], n(5));
        assert_eq!(p.to_string(), "5*t1 + 3*t1^2 + t1*t2 + t2^2");
        assert_eq!(Polynomial::zero(1).to_string(), "0");
    }

    #[test]
    fn no_zero_terms_stored() {
        let mut p = Polynomial::zero(1);
        p.add_term(vec![3], n(0));
        assert!(p.is_zero());
        assert_eq!(p, Polynomial::zero(1));
    }

    #[test]
    fn arithmetic() {
        // (1 + t)(1 + t) = 1 + 2t + t^2
        let one_t = Polynomial::constant(1, 1u8).add(&Polynomial::monomial(vec![1], 1u8));
        let sq = one_t.mul(&one_t);
        assert_eq!(sq.to_string(), "1 + 2*t1 + t1^2");
        assert_eq!(sq.eval_ones(), n(4));
        assert_eq!(sq.scale(&n(3)).to_string(), "3 + 6*t1 + 3*t1^2");
        let biv = Polynomial::monomial(vec![1, 2], 2u8).add(&Polynomial::monomial(vec![1, 0], 1u8));
        assert_eq!(biv.set_one(1).to_string(), "3*t1");
        assert_eq!(biv.scale_variable(1, &n(3)).to_string(), "t1 + 18*t1*t2^2");
    }

    #[test]
    fn json_form() {
        let p = Polynomial::monomial(vec![1, 1], 4u8).add(&Polynomial::constant(2, 2u8));
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"[{"exp":[0,0],"coef":"2"},{"exp":[1,1],"coef":"4"}]"#);
    }
}
