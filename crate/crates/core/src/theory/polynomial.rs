//! Exact white-noise probabilities as polynomials in p = P(X ≤ u) and
//! q = 1 − p with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign};

use num_rational::Rational64;

use crate::error::Result;
use crate::lattice::{exterior_neighbors, Connectivity, Site};
use crate::shapes::{
    containing_origin_from_rooted, enumerate_rooted_with_cap, peak_constraint_degree,
    EnumerationCap,
};

/// Σ c · p^a q^b, keyed by (a, b).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WnPolynomial {
    terms: BTreeMap<(u32, u32), Rational64>,
}

impl WnPolynomial {
    pub fn zero() -> Self {
        WnPolynomial::default()
    }

    pub fn monomial(coef: Rational64, p_exp: u32, q_exp: u32) -> Self {
        let mut poly = WnPolynomial::zero();
        poly.add_term(coef, p_exp, q_exp);
        poly
    }

    pub fn add_term(&mut self, coef: Rational64, p_exp: u32, q_exp: u32) {
        let entry = self
            .terms
            .entry((p_exp, q_exp))
            .or_insert_with(|| Rational64::from_integer(0));
        *entry += coef;
        if *entry == Rational64::from_integer(0) {
            self.terms.remove(&(p_exp, q_exp));
        }
    }

    pub fn scale(&self, factor: Rational64) -> Self {
        let mut out = WnPolynomial::zero();
        for (&(a, b), &c) in &self.terms {
            out.add_term(c * factor, a, b);
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, Rational64)> + '_ {
        self.terms.iter().map(|(&(a, b), &c)| (a, b, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value at p, with q = 1 − p.
    pub fn eval(&self, p: f64) -> f64 {
        let q = 1.0 - p;
        self.terms
            .iter()
            .map(|(&(a, b), c)| {
                (*c.numer() as f64 / *c.denom() as f64) * p.powi(a as i32) * q.powi(b as i32)
            })
            .sum()
    }

    /// Coefficients in the monomial basis 1, p, p², … after substituting
    /// q = 1 − p.
    pub fn to_p_basis(&self) -> Vec<Rational64> {
        let degree = self
            .terms
            .keys()
            .map(|&(a, b)| (a + b) as usize)
            .max()
            .unwrap_or(0);
        let mut out = vec![Rational64::from_integer(0); degree + 1];
        for (&(a, b), &c) in &self.terms {
            // (1 − p)^b = Σ_j C(b, j) (−1)^j p^j
            let mut binom: i64 = 1;
            for j in 0..=b as usize {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                out[a as usize + j] += c * Rational64::from_integer(sign * binom);
                binom = binom * (b as i64 - j as i64) / (j as i64 + 1);
            }
        }
        while out.len() > 1 && *out.last().unwrap() == Rational64::from_integer(0) {
            out.pop();
        }
        out
    }

    /// True when the polynomial reduces to the constant `c` for every p.
    pub fn is_constant(&self, c: i64) -> bool {
        self.to_p_basis() == vec![Rational64::from_integer(c)]
    }
}

impl AddAssign<&WnPolynomial> for WnPolynomial {
    fn add_assign(&mut self, rhs: &WnPolynomial) {
        for (&(a, b), &c) in &rhs.terms {
            self.add_term(c, a, b);
        }
    }
}

impl Add for WnPolynomial {
    type Output = WnPolynomial;

    fn add(mut self, rhs: WnPolynomial) -> WnPolynomial {
        self += &rhs;
        self
    }
}

impl fmt::Display for WnPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(a, b), c)| format!("{c} p^{a} q^{b}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

fn shape_monomial(sites: &crate::lattice::SiteSet, conn: Connectivity) -> Result<(u32, u32)> {
    let ext = exterior_neighbors(sites, conn)?;
    Ok((ext.len() as u32, sites.len() as u32))
}

/// w_k for white noise: Σ over rooted shapes of p^{|𝒩(D)|} q^k.
pub fn wn_wk_polynomial(
    k: usize,
    conn: Connectivity,
    dim: usize,
    cap: EnumerationCap,
) -> Result<WnPolynomial> {
    let mut poly = WnPolynomial::zero();
    for shape in enumerate_rooted_with_cap(k, conn, dim, cap)? {
        let (a, b) = shape_monomial(&shape.sites, conn)?;
        poly.add_term(Rational64::from_integer(1), a, b);
    }
    Ok(poly)
}

/// w_k^inside: the same sum over every shape containing the origin.
pub fn wn_inside_polynomial(
    k: usize,
    conn: Connectivity,
    dim: usize,
    cap: EnumerationCap,
) -> Result<WnPolynomial> {
    let rooted = enumerate_rooted_with_cap(k, conn, dim, cap)?;
    let mut poly = WnPolynomial::zero();
    for shape in containing_origin_from_rooted(&rooted) {
        let (a, b) = shape_monomial(&shape.sites, conn)?;
        poly.add_term(Rational64::from_integer(1), a, b);
    }
    Ok(poly)
}

/// w_k^peak: each origin-containing shape weighted by 1/(m+1), m the number
/// of in-shape neighbors of the origin.
pub fn wn_peak_polynomial(
    k: usize,
    conn: Connectivity,
    dim: usize,
    cap: EnumerationCap,
) -> Result<WnPolynomial> {
    let rooted = enumerate_rooted_with_cap(k, conn, dim, cap)?;
    let origin = Site::origin(dim);
    let mut poly = WnPolynomial::zero();
    for shape in containing_origin_from_rooted(&rooted) {
        let (a, b) = shape_monomial(&shape.sites, conn)?;
        let m = peak_constraint_degree(&shape.sites, &origin, conn)? as i64;
        poly.add_term(Rational64::new(1, m + 1), a, b);
    }
    Ok(poly)
}

/// P(X_t > u, X_t > its n neighbors) = Σ_j C(n, j) p^{n−j} q^{j+1} / (j+1):
/// j further neighbors above u, the anchor the largest of j+1 exceedances.
pub fn wn_peak_denominator_polynomial(n: usize) -> WnPolynomial {
    let mut poly = WnPolynomial::zero();
    let mut binom: i64 = 1;
    for j in 0..=n {
        poly.add_term(
            Rational64::new(binom, j as i64 + 1),
            (n - j) as u32,
            j as u32 + 1,
        );
        binom = binom * (n - j) as i64 / (j as i64 + 1);
    }
    poly
}

/// Σ over all above/below patterns of n independent sites.
pub fn wn_partition_polynomial(n: usize) -> WnPolynomial {
    let mut poly = WnPolynomial::zero();
    for pattern in 0u64..(1 << n) {
        let above = pattern.count_ones();
        poly.add_term(Rational64::from_integer(1), n as u32 - above, above);
    }
    poly
}
