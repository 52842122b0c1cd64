//! Exact building blocks shared by every operator: Bernoulli numbers,
//! centered-difference coefficients and the sum-of-powers identity.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, int, ipow, Rational};

/// Largest Bernoulli index served by [`bernoulli`].
pub const MAX_BERNOULLI: usize = 64;

/// Largest half-width accepted by [`central_coefficients`].
pub const MAX_HALF_WIDTH: usize = 16;

/// Bernoulli numbers `β_0..=β_max` in the `β_1 = -1/2` convention.
///
/// There is deliberately no way to request the `+1/2` convention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BernoulliTable {
    values: Vec<Rational>,
}

impl BernoulliTable {
    /// Builds the table with the recurrence `Σ_{k=0}^{m} C(m+1,k) β_k = 0`.
    pub fn new(max: usize) -> Self {
        let mut values: Vec<Rational> = Vec::with_capacity(max + 1);
        values.push(Rational::one());
        for m in 1..=max {
            let sum = values
                .iter()
                .enumerate()
                .fold(Rational::zero(), |acc, (k, b)| {
                    acc + Rational::from_integer(binomial(m as u64 + 1, k as u64)) * b
                });
            values.push(-sum / int(m as i64 + 1));
        }
        Self { values }
    }

    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, j: usize) -> Result<&Rational> {
        self.values.get(j).ok_or(Error::Range {
            what: "Bernoulli index",
            value: j,
            min: 0,
            max: self.max_index(),
        })
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }
}

fn shared_table() -> &'static BernoulliTable {
    static TABLE: OnceLock<BernoulliTable> = OnceLock::new();
    TABLE.get_or_init(|| BernoulliTable::new(MAX_BERNOULLI))
}

/// `β_j` with `β_1 = -1/2`.
pub fn bernoulli(j: usize) -> Result<Rational> {
    shared_table().get(j).cloned()
}

/// Coefficients `α_1..α_s` of the `2s`-order centered first derivative
/// `u'(x_w) ≈ Σ α_v (u_{w+v} - u_{w-v}) / h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralStencil {
    s: usize,
    alpha: Vec<Rational>,
}

impl CentralStencil {
    pub fn half_width(&self) -> usize {
        self.s
    }

    /// `alpha()[v - 1]` is `α_v`.
    pub fn alpha(&self) -> &[Rational] {
        &self.alpha
    }

    /// Coefficient of `u_{w+offset}` in the stencil, for `offset` in `-s..=s`.
    pub fn coefficient(&self, offset: isize) -> Rational {
        let v = offset.unsigned_abs();
        if v == 0 || v > self.s {
            return Rational::zero();
        }
        if offset > 0 {
            self.alpha[v - 1].clone()
        } else {
            -self.alpha[v - 1].clone()
        }
    }

    /// `Σ_v α_v v^p` for odd powers `p = 2j + 1`.
    pub fn odd_moment(&self, j: u32) -> Rational {
        self.alpha
            .iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (i, a)| {
                acc + a * ipow(i as i64 + 1, 2 * j + 1)
            })
    }

    /// `Σ α_v v = 1/2` and `Σ α_v v^{2j+1} = 0` for `j = 1..s-1`.
    pub fn satisfies_moment_identities(&self) -> bool {
        (0..self.s as u32).all(|j| {
            let m = self.odd_moment(j);
            if j == 0 {
                m == Rational::new(BigInt::one(), BigInt::from(2))
            } else {
                m.is_zero()
            }
        })
    }
}

/// `α_v = (-1)^{v+1} (s!)² / (v (s+v)! (s-v)!)`.
pub fn central_coefficients(s: usize) -> Result<CentralStencil> {
    if s == 0 {
        return Err(Error::Domain(
            "stencil half-width must be at least 1".into(),
        ));
    }
    if s > MAX_HALF_WIDTH {
        return Err(Error::Range {
            what: "stencil half-width",
            value: s,
            min: 1,
            max: MAX_HALF_WIDTH,
        });
    }
    let sf2 = factorial(s as u64).pow(2);
    let alpha = (1..=s)
        .map(|v| {
            let den = BigInt::from(v) * factorial((s + v) as u64) * factorial((s - v) as u64);
            let q = Rational::new(sf2.clone(), den);
            if v % 2 == 1 {
                q
            } else {
                -q
            }
        })
        .collect();
    let stencil = CentralStencil { s, alpha };
    assert!(
        stencil.satisfies_moment_identities(),
        "centered coefficients for s = {s} violate their moment identities"
    );
    Ok(stencil)
}

/// `j Σ_{v=0}^{r-1} (r-v)^{j-1}` by direct summation.
fn sum_of_powers_direct(r: usize, j: usize) -> Rational {
    let total = (0..r).fold(BigInt::zero(), |acc, v| {
        acc + BigInt::from(r - v).pow(j as u32 - 1)
    });
    Rational::from_integer(total * BigInt::from(j))
}

/// `r^j + Σ_{k=1}^{j-1} (-1)^k C(j,k) β_k r^{j-k}`.
fn sum_of_powers_closed(r: usize, j: usize) -> Result<Rational> {
    let r = r as i64;
    let mut acc = ipow(r, j as u32);
    for k in 1..j {
        let term = Rational::from_integer(binomial(j as u64, k as u64))
            * bernoulli(k)?
            * ipow(r, (j - k) as u32);
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// `j Σ_{v=0}^{r-1} (r-v)^{j-1}`, computed by direct summation and checked
/// against the Bernoulli closed form.
pub fn sum_of_powers(r: usize, j: usize) -> Result<Rational> {
    if r == 0 || j == 0 {
        return Err(Error::Domain(format!(
            "sum_of_powers needs r >= 1 and j >= 1 (got r = {r}, j = {j})"
        )));
    }
    let direct = sum_of_powers_direct(r, j);
    let closed = sum_of_powers_closed(r, j)?;
    assert_eq!(
        direct, closed,
        "sum-of-powers identity failed at r = {r}, j = {j}"
    );
    Ok(direct)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn bernoulli_first_values() {
        assert_eq!(bernoulli(0).unwrap(), int(1));
        assert_eq!(bernoulli(1).unwrap(), rat(-1, 2));
        assert_eq!(bernoulli(2).unwrap(), rat(1, 6));
        assert_eq!(bernoulli(3).unwrap(), int(0));
        assert_eq!(bernoulli(4).unwrap(), rat(-1, 30));
        assert_eq!(bernoulli(12).unwrap(), rat(-691, 2730));
    }

    #[test]
    fn odd_bernoulli_numbers_vanish() {
        for j in (3..=15).step_by(2) {
            assert_eq!(bernoulli(j).unwrap(), int(0), "β_{j}");
        }
    }

    #[test]
    fn bernoulli_out_of_range() {
        assert!(matches!(
            bernoulli(MAX_BERNOULLI + 1),
            Err(Error::Range { .. })
        ));
        let small = BernoulliTable::new(4);
        assert!(small.get(5).is_err());
        assert_eq!(small.values().len(), 5);
    }

    #[test]
    fn central_coefficients_closed_form() {
        assert_eq!(central_coefficients(1).unwrap().alpha(), &[rat(1, 2)]);
        assert_eq!(
            central_coefficients(2).unwrap().alpha(),
            &[rat(2, 3), rat(-1, 12)]
        );
        assert_eq!(
            central_coefficients(3).unwrap().alpha(),
            &[rat(3, 4), rat(-3, 20), rat(1, 60)]
        );
    }

    #[test]
    fn moment_identities_up_to_eight() {
        for s in 1..=8 {
            let st = central_coefficients(s).unwrap();
            assert_eq!(st.odd_moment(0), rat(1, 2));
            for j in 1..s as u32 {
                assert_eq!(st.odd_moment(j), int(0), "s = {s}, j = {j}");
            }
        }
    }

    #[test]
    fn zero_half_width_rejected() {
        assert!(matches!(central_coefficients(0), Err(Error::Domain(_))));
        assert!(matches!(
            central_coefficients(MAX_HALF_WIDTH + 1),
            Err(Error::Range { .. })
        ));
    }

    #[test]
    fn stencil_coefficient_is_odd() {
        let st = central_coefficients(2).unwrap();
        assert_eq!(st.coefficient(2), rat(-1, 12));
        assert_eq!(st.coefficient(-2), rat(1, 12));
        assert_eq!(st.coefficient(0), int(0));
        assert_eq!(st.coefficient(3), int(0));
    }

    #[test]
    fn sum_of_powers_examples() {
        assert_eq!(sum_of_powers(3, 1).unwrap(), int(3));
        assert_eq!(sum_of_powers(4, 2).unwrap(), int(20));
        // 3 (2² + 1²)
        assert_eq!(sum_of_powers(2, 3).unwrap(), int(15));
    }

    #[test]
    fn sum_of_powers_agrees_on_grid() {
        for r in 1..=10 {
            for j in 1..=10 {
                assert_eq!(
                    sum_of_powers_direct(r, j),
                    sum_of_powers_closed(r, j).unwrap()
                );
            }
        }
    }
}
