//! Sparse multivariate polynomials over [`Scalar`].
//!
//! Terms live in a `BTreeMap` from exponent tuples to nonzero coefficients;
//! the empty map is the zero polynomial (degree `None`). Besides ring
//! arithmetic the module provides exact evaluation, directional derivatives,
//! substitution of polynomials for variables, and exact division by the
//! simplex weights (coordinates and `1 − Σxᵢ`).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scalar::Scalar;

/// Sparse polynomial in `D` variables.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly<const D: usize> {
    terms: BTreeMap<[u32; D], Scalar>,
}

pub type Poly1 = Poly<1>;
pub type Poly2 = Poly<2>;
pub type Poly3 = Poly<3>;

/// Affine simplex weights available for exact division.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Weight {
    /// The coordinate `x_axis` (0-based).
    Var(usize),
    /// The barycentric complement `1 − Σᵢ xᵢ`.
    OneMinusSum,
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Var(i) => write!(f, "x{}", i + 1),
            Weight::OneMinusSum => write!(f, "1-sum(x)"),
        }
    }
}

/// Failed exact division; carries the nonzero remainder.
#[derive(Clone, Debug)]
pub struct NotDivisible<const D: usize> {
    pub weight: Weight,
    pub power: u32,
    pub remainder: Poly<D>,
}

impl<const D: usize> fmt::Display for NotDivisible<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "polynomial not divisible by {}^{}; remainder {}",
            self.weight, self.power, self.remainder
        )
    }
}

impl<const D: usize> std::error::Error for NotDivisible<D> {}

impl<const D: usize> Poly<D> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        let mut p = Poly::zero();
        p.add_term([0; D], c);
        p
    }

    pub fn one() -> Self {
        Poly::constant(Scalar::one())
    }

    pub fn from_int(n: i64) -> Self {
        Poly::constant(Scalar::from_int(n))
    }

    /// The coordinate polynomial `x_axis`.
    pub fn var(axis: usize) -> Self {
        assert!(axis < D, "variable index out of range");
        let mut exp = [0; D];
        exp[axis] = 1;
        Poly::monomial(exp, Scalar::one())
    }

    pub fn monomial(exp: [u32; D], coeff: Scalar) -> Self {
        let mut p = Poly::zero();
        p.add_term(exp, coeff);
        p
    }

    /// `1 − x_0 − … − x_{D−1}`.
    pub fn one_minus_sum() -> Self {
        let mut p = Poly::one();
        for axis in 0..D {
            p.add_term({ let mut e = [0; D]; e[axis] = 1; e }, Scalar::from_int(-1));
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Largest exponent of `x_axis` appearing in any term.
    pub fn var_degree(&self, axis: usize) -> u32 {
        self.terms.keys().map(|e| e[axis]).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; D], &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &[u32; D]) -> Scalar {
        self.terms.get(exp).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Adds `coeff` to the term with exponents `exp`, dropping zeros.
    pub fn add_term(&mut self, exp: [u32; D], coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn eval(&self, point: &[Scalar; D]) -> Scalar {
        let mut acc = Scalar::zero();
        for (exp, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (axis, &e) in exp.iter().enumerate() {
                if e > 0 {
                    term *= point[axis].pow(e);
                }
            }
            acc += term;
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64; D]) -> f64 {
        let mut acc = 0.0;
        for (exp, coeff) in &self.terms {
            let mut term = coeff.to_f64();
            for (axis, &e) in exp.iter().enumerate() {
                term *= point[axis].powi(e as i32);
            }
            acc += term;
        }
        acc
    }

    pub fn partial_deriv(&self, axis: usize) -> Self {
        let mut out = Poly::zero();
        for (exp, coeff) in &self.terms {
            if exp[axis] == 0 {
                continue;
            }
            let mut e = *exp;
            e[axis] -= 1;
            out.add_term(e, coeff * Scalar::from_int(exp[axis] as i64));
        }
        out
    }

    /// Directional derivative `Σᵢ dirᵢ ∂ᵢ`.
    pub fn deriv_dir(&self, dir: &[Scalar; D]) -> Self {
        let mut out = Poly::zero();
        for (axis, d) in dir.iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            out += self.partial_deriv(axis).scale(d);
        }
        out
    }

    /// Iterated partials `∂^orders`.
    pub fn deriv_multi(&self, orders: &[u32; D]) -> Self {
        let mut out = self.clone();
        for (axis, &n) in orders.iter().enumerate() {
            for _ in 0..n {
                out = out.partial_deriv(axis);
            }
        }
        out
    }

    /// Re-embeds into `E ≥ D` variables, sending variable `d` to `axes[d]`.
    pub fn inject<const E: usize>(&self, axes: [usize; D]) -> Poly<E> {
        let mut out = Poly::zero();
        for (exp, coeff) in &self.terms {
            let mut e = [0u32; E];
            for d in 0..D {
                e[axes[d]] += exp[d];
            }
            out.add_term(e, coeff.clone());
        }
        out
    }

    /// Substitutes `subs[d]` for variable `d`.
    ///
    /// Single-term substitutions are applied as exponent transforms; the
    /// rest go through cached power tables, so affine maps that permute
    /// coordinates cost a map rebuild only.
    pub fn compose<const E: usize>(&self, subs: &[Poly<E>; D]) -> Poly<E> {
        let mono: Vec<Option<(&[u32; E], &Scalar)>> = subs
            .iter()
            .map(|s| {
                if s.terms.len() == 1 {
                    s.terms.iter().next()
                } else {
                    None
                }
            })
            .collect();
        // Power tables for the genuinely polynomial substitutions.
        let mut powers: Vec<Vec<Poly<E>>> = vec![Vec::new(); D];
        for d in 0..D {
            if mono[d].is_some() {
                continue;
            }
            let max = self.var_degree(d);
            let mut table = Vec::with_capacity(max as usize + 1);
            table.push(Poly::<E>::one());
            for e in 1..=max {
                let next = &table[e as usize - 1] * &subs[d];
                table.push(next);
            }
            powers[d] = table;
        }
        let mut acc = Poly::<E>::zero();
        for (exp, coeff) in &self.terms {
            let mut mono_exp = [0u32; E];
            let mut scalar = coeff.clone();
            let mut parts: Vec<&Poly<E>> = Vec::new();
            for d in 0..D {
                let e = exp[d];
                if e == 0 {
                    continue;
                }
                match mono[d] {
                    Some((m_exp, m_coeff)) => {
                        for axis in 0..E {
                            mono_exp[axis] += m_exp[axis] * e;
                        }
                        scalar *= m_coeff.pow(e);
                    }
                    None => parts.push(&powers[d][e as usize]),
                }
            }
            if scalar.is_zero() {
                continue;
            }
            let mut term = Poly::monomial(mono_exp, scalar);
            for p in parts {
                term = &term * p;
            }
            acc += term;
        }
        acc
    }

    fn one_minus_sum_involution() -> [Poly<D>; D] {
        std::array::from_fn(|d| {
            if d + 1 == D {
                Poly::one_minus_sum()
            } else {
                Poly::var(d)
            }
        })
    }

    /// Exact quotient `self / w^r`, or the nonzero remainder.
    pub fn exact_divide(&self, w: Weight, r: u32) -> Result<Poly<D>, NotDivisible<D>> {
        if r == 0 {
            return Ok(self.clone());
        }
        match w {
            Weight::Var(axis) => {
                assert!(axis < D, "weight variable out of range");
                let mut quotient = Poly::zero();
                let mut remainder = Poly::zero();
                for (exp, coeff) in &self.terms {
                    if exp[axis] >= r {
                        let mut e = *exp;
                        e[axis] -= r;
                        quotient.add_term(e, coeff.clone());
                    } else {
                        remainder.add_term(*exp, coeff.clone());
                    }
                }
                if remainder.is_zero() {
                    Ok(quotient)
                } else {
                    Err(NotDivisible { weight: w, power: r, remainder })
                }
            }
            Weight::OneMinusSum => {
                // The involution x ↦ (x_0, …, x_{D−2}, 1 − Σx) turns the
                // weight into the last coordinate.
                let sigma = Self::one_minus_sum_involution();
                let transformed = self.compose(&sigma);
                match transformed.exact_divide(Weight::Var(D - 1), r) {
                    Ok(q) => Ok(q.compose(&sigma)),
                    Err(e) => Err(NotDivisible {
                        weight: w,
                        power: r,
                        remainder: e.remainder.compose(&sigma),
                    }),
                }
            }
        }
    }

    /// The weight polynomial itself.
    pub fn weight_poly(w: Weight) -> Poly<D> {
        match w {
            Weight::Var(axis) => Poly::var(axis),
            Weight::OneMinusSum => Poly::one_minus_sum(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Largest coefficient bit size; a cheap growth observable.
    pub fn max_coeff_bits(&self) -> u64 {
        self.terms.values().map(|c| c.bit_size()).max().unwrap_or(0)
    }
}

impl<const D: usize> Add for &Poly<D> {
    type Output = Poly<D>;
    fn add(self, rhs: &Poly<D>) -> Poly<D> {
        let mut out = self.clone();
        for (exp, coeff) in &rhs.terms {
            out.add_term(*exp, coeff.clone());
        }
        out
    }
}

impl<const D: usize> Sub for &Poly<D> {
    type Output = Poly<D>;
    fn sub(self, rhs: &Poly<D>) -> Poly<D> {
        let mut out = self.clone();
        for (exp, coeff) in &rhs.terms {
            out.add_term(*exp, -coeff);
        }
        out
    }
}

impl<const D: usize> Mul for &Poly<D> {
    type Output = Poly<D>;
    fn mul(self, rhs: &Poly<D>) -> Poly<D> {
        let mut out = Poly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut e = *ea;
                for axis in 0..D {
                    e[axis] += eb[axis];
                }
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_poly_binop {
    ($trait:ident, $method:ident) => {
        impl<const D: usize> $trait<Poly<D>> for Poly<D> {
            type Output = Poly<D>;
            fn $method(self, rhs: Poly<D>) -> Poly<D> {
                (&self).$method(&rhs)
            }
        }
        impl<const D: usize> $trait<&Poly<D>> for Poly<D> {
            type Output = Poly<D>;
            fn $method(self, rhs: &Poly<D>) -> Poly<D> {
                (&self).$method(rhs)
            }
        }
        impl<const D: usize> $trait<Poly<D>> for &Poly<D> {
            type Output = Poly<D>;
            fn $method(self, rhs: Poly<D>) -> Poly<D> {
                self.$method(&rhs)
            }
        }
    };
}

forward_poly_binop!(Add, add);
forward_poly_binop!(Sub, sub);
forward_poly_binop!(Mul, mul);

impl<const D: usize> AddAssign<Poly<D>> for Poly<D> {
    fn add_assign(&mut self, rhs: Poly<D>) {
        for (exp, coeff) in rhs.terms {
            self.add_term(exp, coeff);
        }
    }
}

impl<const D: usize> SubAssign<Poly<D>> for Poly<D> {
    fn sub_assign(&mut self, rhs: Poly<D>) {
        for (exp, coeff) in rhs.terms {
            self.add_term(exp, -coeff);
        }
    }
}

impl<const D: usize> Neg for Poly<D> {
    type Output = Poly<D>;
    fn neg(self) -> Poly<D> {
        Poly {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl<const D: usize> fmt::Display for Poly<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exp, coeff) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", coeff)?;
            for (axis, &e) in exp.iter().enumerate() {
                if e == 1 {
                    write!(f, "*x{}", axis + 1)?;
                } else if e > 1 {
                    write!(f, "*x{}^{}", axis + 1, e)?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Vec<u32>,
    coeff: Scalar,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    vars: usize,
    terms: Vec<TermRepr>,
}

impl<const D: usize> Serialize for Poly<D> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PolyRepr {
            vars: D,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermRepr { exp: e.to_vec(), coeff: c.clone() })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de, const D: usize> Deserialize<'de> for Poly<D> {
    fn deserialize<DE: Deserializer<'de>>(deserializer: DE) -> Result<Self, DE::Error> {
        let repr = PolyRepr::deserialize(deserializer)?;
        if repr.vars != D {
            return Err(DE::Error::custom(format!(
                "expected a polynomial in {} variables, found {}",
                D, repr.vars
            )));
        }
        let mut out = Poly::zero();
        for term in repr.terms {
            if term.exp.len() != D {
                return Err(DE::Error::custom(format!(
                    "exponent tuple {:?} does not have {} entries",
                    term.exp, D
                )));
            }
            let mut exp = [0u32; D];
            exp.copy_from_slice(&term.exp);
            out.add_term(exp, term.coeff);
        }
        Ok(out)
    }
}
