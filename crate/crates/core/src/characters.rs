//! Dirichlet characters modulo `q`.
//!
//! The unit group `(Z/qZ)^*` is written as a product of cyclic components,
//! one (or two, for `2^e` with `e >= 3`) per prime-power factor of `q`, in
//! ascending prime order. A character is an exponent vector over those
//! components and its values are exact roots of unity.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{gcd, lcm};

/// An exact root of unity `e^{2 pi i k/m}` with `k/m` in lowest terms, or zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RootOfUnity {
    num: u64,
    den: u64,
    zero: bool,
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity {
        num: 0,
        den: 1,
        zero: false,
    };
    pub const ZERO: RootOfUnity = RootOfUnity {
        num: 0,
        den: 1,
        zero: true,
    };

    /// `e^{2 pi i num/den}`, reduced.
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "root of unity denominator must be positive");
        let num = num % den;
        let g = gcd(num, den);
        RootOfUnity {
            num: num / g,
            den: den / g,
            zero: false,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    pub fn is_one(&self) -> bool {
        !self.zero && self.num == 0
    }

    /// Angle as the fraction `(k, m)` of a full turn. `None` for zero.
    pub fn angle(&self) -> Option<(u64, u64)> {
        (!self.zero).then_some((self.num, self.den))
    }

    /// Multiplicative order (1 for the value 1). `None` for zero.
    pub fn order(&self) -> Option<u64> {
        (!self.zero).then_some(self.den)
    }

    pub fn mul(self, other: RootOfUnity) -> RootOfUnity {
        if self.zero || other.zero {
            return RootOfUnity::ZERO;
        }
        let den = lcm(self.den, other.den);
        let a = self.num * (den / self.den);
        let b = other.num * (den / other.den);
        RootOfUnity::new((a + b) % den, den)
    }

    pub fn pow(self, k: u64) -> RootOfUnity {
        if self.zero {
            return if k == 0 { RootOfUnity::ONE } else { RootOfUnity::ZERO };
        }
        let num = ((self.num as u128 * k as u128) % self.den as u128) as u64;
        RootOfUnity::new(num, self.den)
    }

    pub fn conj(self) -> RootOfUnity {
        if self.zero {
            return self;
        }
        RootOfUnity::new(self.den - self.num, self.den)
    }

    /// Numeric value. Quarter turns are returned exactly.
    pub fn to_complex(&self) -> Complex64 {
        if self.zero {
            return Complex64::new(0.0, 0.0);
        }
        match (4 * self.num).checked_rem(self.den) {
            Some(0) => match 4 * self.num / self.den {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            },
            _ => {
                let theta = std::f64::consts::TAU * self.num as f64 / self.den as f64;
                let (s, c) = theta.sin_cos();
                Complex64::new(c, s)
            }
        }
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero {
            write!(f, "0")
        } else if self.num == 0 {
            write!(f, "1")
        } else if self.den == 2 {
            write!(f, "-1")
        } else {
            write!(f, "e({}/{})", self.num, self.den)
        }
    }
}

/// One cyclic factor of the unit group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicComponent {
    /// Generator lifted to a residue mod `q` (congruent to 1 modulo the
    /// other prime-power factors).
    pub generator: u64,
    pub order: u64,
    /// The prime-power factor this component lives in.
    pub prime: u64,
    pub prime_power: u64,
}

/// Cyclic decomposition of `(Z/qZ)^*` together with a discrete-log table.
#[derive(Clone, Debug)]
pub struct UnitGroupStructure {
    modulus: u64,
    components: Vec<CyclicComponent>,
    /// `logs[n]` holds the exponent vector of `n` for units, `None` otherwise.
    logs: Vec<Option<Vec<u64>>>,
}

impl UnitGroupStructure {
    pub fn new(q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidModulus(q));
        }
        let factors = crate::math::factorize(q);
        let mut components = Vec::new();
        // Discrete log per component, as a function of n mod prime_power.
        let mut local_logs: Vec<Vec<Option<u64>>> = Vec::new();

        for &(p, e) in &factors {
            let pk = p.pow(e);
            if p == 2 {
                match e {
                    1 => {}
                    2 => {
                        components.push(component(q, pk, 2, 3, 2));
                        let mut table = vec![None; pk as usize];
                        table[1] = Some(0);
                        table[3] = Some(1);
                        local_logs.push(table);
                    }
                    _ => {
                        // (Z/2^e)^* = <-1> x <5>
                        let mut sign = vec![None; pk as usize];
                        let mut five = vec![None; pk as usize];
                        let half_order = pk / 4;
                        let mut x = 1u64;
                        for b in 0..half_order {
                            sign[x as usize] = Some(0);
                            sign[(pk - x) as usize] = Some(1);
                            five[x as usize] = Some(b);
                            five[(pk - x) as usize] = Some(b);
                            x = x * 5 % pk;
                        }
                        components.push(component(q, pk, 2, pk - 1, 2));
                        local_logs.push(sign);
                        components.push(component(q, pk, 2, 5, half_order));
                        local_logs.push(five);
                    }
                }
            } else {
                let order = pk / p * (p - 1);
                let g = least_primitive_root(p, pk, order);
                let mut table = vec![None; pk as usize];
                let mut x = 1u64;
                for k in 0..order {
                    table[x as usize] = Some(k);
                    x = x * g % pk;
                }
                components.push(component(q, pk, p, g, order));
                local_logs.push(table);
            }
        }

        let logs = (0..q)
            .map(|n| {
                if gcd(n, q) != 1 {
                    return None;
                }
                components
                    .iter()
                    .zip(&local_logs)
                    .map(|(c, table)| table[(n % c.prime_power) as usize])
                    .collect::<Option<Vec<u64>>>()
            })
            .collect();

        Ok(UnitGroupStructure {
            modulus: q,
            components,
            logs,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn components(&self) -> &[CyclicComponent] {
        &self.components
    }

    /// Group order, i.e. Euler's phi of the modulus.
    pub fn order(&self) -> u64 {
        self.components.iter().map(|c| c.order).product()
    }

    /// Exponent of the group: lcm of the component orders.
    pub fn exponent(&self) -> u64 {
        self.components.iter().fold(1, |acc, c| lcm(acc, c.order))
    }

    /// Exponent vector of `n` over the components, `None` when `gcd(n, q) > 1`.
    pub fn discrete_log(&self, n: i64) -> Option<&[u64]> {
        let r = n.rem_euclid(self.modulus as i64) as usize;
        self.logs[r].as_deref()
    }
}

fn component(q: u64, pk: u64, p: u64, g: u64, order: u64) -> CyclicComponent {
    CyclicComponent {
        generator: crt_lift(q, pk, g),
        order,
        prime: p,
        prime_power: pk,
    }
}

/// The residue mod `q` congruent to `g` mod `pk` and to 1 modulo `q / pk`.
fn crt_lift(q: u64, pk: u64, g: u64) -> u64 {
    let rest = q / pk;
    (0..pk)
        .map(|k| 1 + k * rest)
        .find(|x| x % pk == g % pk)
        .map(|x| x % q)
        .expect("CRT lift exists for coprime moduli")
}

fn least_primitive_root(p: u64, pk: u64, order: u64) -> u64 {
    let prime_divisors: Vec<u64> = crate::math::factorize(order)
        .into_iter()
        .map(|(r, _)| r)
        .collect();
    (2..pk)
        .filter(|g| g % p != 0)
        .find(|&g| {
            prime_divisors
                .iter()
                .all(|&r| crate::math::pow_mod(g, order / r, pk) != 1)
        })
        .expect("odd prime powers are cyclic")
}

/// Parity, reality, conductor and primitivity of a character.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    /// `chi(-1)`, either `1` or `-1`.
    pub parity: i8,
    pub is_real: bool,
    pub conductor: u64,
    pub is_primitive: bool,
}

/// A Dirichlet character modulo `q`.
#[derive(Clone)]
pub struct DirichletCharacter {
    group: Arc<UnitGroupStructure>,
    index: u64,
    exponents: Vec<u64>,
    class: Classification,
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DirichletCharacter")
            .field("q", &self.modulus())
            .field("index", &self.index)
            .field("exponents", &self.exponents)
            .finish()
    }
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.modulus() == other.modulus() && self.exponents == other.exponents
    }
}

impl Eq for DirichletCharacter {}

impl DirichletCharacter {
    fn from_exponents(group: Arc<UnitGroupStructure>, exponents: Vec<u64>) -> Self {
        let exponents: Vec<u64> = exponents
            .iter()
            .zip(group.components())
            .map(|(&e, c)| e % c.order)
            .collect();
        let index = exponents
            .iter()
            .zip(group.components())
            .fold(0, |acc, (&e, c)| acc * c.order + e);
        let mut chi = DirichletCharacter {
            group,
            index,
            exponents,
            class: Classification {
                parity: 1,
                is_real: true,
                conductor: 1,
                is_primitive: true,
            },
        };
        chi.class = chi.compute_classification();
        chi
    }

    /// The character with a given lexicographic index.
    pub fn from_index(q: u64, index: u64) -> Result<Self> {
        let group = Arc::new(UnitGroupStructure::new(q)?);
        character_at(&group, index)
    }

    pub fn principal(q: u64) -> Result<Self> {
        Self::from_index(q, 0)
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus()
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn group(&self) -> &UnitGroupStructure {
        &self.group
    }

    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    pub fn classification(&self) -> Classification {
        self.class
    }

    pub fn parity(&self) -> i8 {
        self.class.parity
    }

    pub fn is_real(&self) -> bool {
        self.class.is_real
    }

    pub fn conductor(&self) -> u64 {
        self.class.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.class.is_primitive
    }

    /// Order of `chi` in the character group.
    pub fn order(&self) -> u64 {
        self.group
            .components()
            .iter()
            .zip(&self.exponents)
            .map(|(c, &e)| c.order / gcd(c.order, e))
            .fold(1, lcm)
    }

    /// `chi(n)` for any integer `n`.
    pub fn value(&self, n: i64) -> RootOfUnity {
        match self.group.discrete_log(n) {
            None => RootOfUnity::ZERO,
            Some(logs) => logs
                .iter()
                .zip(&self.exponents)
                .zip(self.group.components())
                .fold(RootOfUnity::ONE, |acc, ((&l, &e), c)| {
                    acc.mul(RootOfUnity::new(
                        ((l as u128 * e as u128) % c.order as u128) as u64,
                        c.order,
                    ))
                }),
        }
    }

    /// Values `chi(0), ..., chi(q-1)` as complex numbers.
    pub fn value_table(&self) -> Vec<Complex64> {
        (0..self.modulus() as i64)
            .map(|n| self.value(n).to_complex())
            .collect()
    }

    pub fn conjugate(&self) -> DirichletCharacter {
        let exps = self
            .exponents
            .iter()
            .zip(self.group.components())
            .map(|(&e, c)| (c.order - e) % c.order)
            .collect();
        DirichletCharacter::from_exponents(Arc::clone(&self.group), exps)
    }

    /// `chi^k`, the character with every exponent multiplied by `k`.
    pub fn power(&self, k: u64) -> DirichletCharacter {
        let exps = self
            .exponents
            .iter()
            .zip(self.group.components())
            .map(|(&e, c)| ((e as u128 * k as u128) % c.order as u128) as u64)
            .collect();
        DirichletCharacter::from_exponents(Arc::clone(&self.group), exps)
    }

    /// Gauss sum `sum_{a mod q} chi(a) e^{2 pi i a/q}` by direct summation.
    pub fn gauss_sum(&self) -> Complex64 {
        let q = self.modulus();
        (1..=q)
            .map(|a| {
                let chi = self.value(a as i64);
                if chi.is_zero() {
                    Complex64::new(0.0, 0.0)
                } else {
                    chi.mul(RootOfUnity::new(a % q, q)).to_complex()
                }
            })
            .sum()
    }

    fn compute_classification(&self) -> Classification {
        let q = self.modulus();
        let minus_one = self.value(-1);
        let parity = if minus_one.is_one() { 1 } else { -1 };
        let is_real = self
            .exponents
            .iter()
            .zip(self.group.components())
            .all(|(&e, c)| (2 * e) % c.order == 0);
        let conductor = crate::math::divisors(q)
            .into_iter()
            .find(|&f| self.is_induced_from(f))
            .unwrap_or(q);
        Classification {
            parity,
            is_real,
            conductor,
            is_primitive: conductor == q,
        }
    }

    /// True when `chi` is trivial on units congruent to 1 mod `f`, i.e. it
    /// factors through a character mod `f`.
    fn is_induced_from(&self, f: u64) -> bool {
        let q = self.modulus();
        (1..q.max(2))
            .step_by(f as usize)
            .filter(|&n| gcd(n, q) == 1)
            .all(|n| self.value(n as i64).is_one())
    }
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi_{}[{}]", self.modulus(), self.index)
    }
}

fn character_at(group: &Arc<UnitGroupStructure>, index: u64) -> Result<DirichletCharacter> {
    if index >= group.order() {
        return Err(Error::CharacterIndex {
            q: group.modulus(),
            index,
            count: group.order(),
        });
    }
    let mut rest = index;
    let mut exps = vec![0; group.components().len()];
    for (slot, c) in exps.iter_mut().zip(group.components()).rev() {
        *slot = rest % c.order;
        rest /= c.order;
    }
    Ok(DirichletCharacter::from_exponents(Arc::clone(group), exps))
}

/// All `phi(q)` characters mod `q`, ordered by exponent vector.
pub fn enumerate_characters(q: u64) -> Result<Vec<DirichletCharacter>> {
    let group = Arc::new(UnitGroupStructure::new(q)?);
    (0..group.order())
        .map(|i| character_at(&group, i))
        .collect()
}

/// Wire form used in caches and reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterRecord {
    pub q: u64,
    pub index: u64,
    pub exponents: Vec<u64>,
    pub parity: i8,
    pub conductor: u64,
    pub real: bool,
}

impl From<&DirichletCharacter> for CharacterRecord {
    fn from(chi: &DirichletCharacter) -> Self {
        CharacterRecord {
            q: chi.modulus(),
            index: chi.index(),
            exponents: chi.exponents().to_vec(),
            parity: chi.parity(),
            conductor: chi.conductor(),
            real: chi.is_real(),
        }
    }
}
