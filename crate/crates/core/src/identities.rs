//! Executable Fibonacci/Lucas identities with exhaustive sweeps over finite
//! parameter boxes.
//!
//! Each registered identity evaluates one or more `(lhs, rhs)` clauses
//! exactly at an integer parameter point. A sweep passes iff every clause is
//! equal at every point; otherwise the report carries the first failing point
//! in lexicographic order. A finite sweep is evidence, not proof.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::closed_form::{tail_sum, tail_term};
use crate::error::{Error, Result};
use crate::numeric::{neg_one_pow, Rational};
use crate::sequences::{fib, lucas};

/// Both sides of every clause at one parameter point.
pub type Clauses = Vec<(Rational, Rational)>;

type Evaluator = Arc<dyn Fn(&[i64]) -> Clauses + Send + Sync>;

/// How an identity's parameter box scales across profiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    /// One parameter, valid at every integer.
    Single,
    /// One parameter, stated only from `min` upward.
    SingleFrom(i64),
    /// Two parameters, valid at every integer.
    Pair,
    /// Two parameters swept over positive values.
    PositivePair,
    Triple,
    Quad,
    /// Stated only for m > 3.
    BaseFour,
}

#[derive(Clone)]
pub struct Identity {
    pub id: &'static str,
    pub statement: &'static str,
    pub params: &'static [&'static str],
    shape: Shape,
    eval: Evaluator,
}

impl fmt::Debug for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Identity")
            .field("id", &self.id)
            .field("params", &self.params)
            .finish_non_exhaustive()
    }
}

impl Identity {
    fn new(
        id: &'static str,
        statement: &'static str,
        params: &'static [&'static str],
        shape: Shape,
        eval: impl Fn(&[i64]) -> Clauses + Send + Sync + 'static,
    ) -> Self {
        Self {
            id,
            statement,
            params,
            shape,
            eval: Arc::new(eval),
        }
    }

    pub fn evaluate(&self, point: &[i64]) -> Clauses {
        (self.eval)(point)
    }

    /// Smallest admissible value of each parameter, if bounded.
    fn lower_bound(&self) -> Option<i64> {
        match self.shape {
            Shape::SingleFrom(min) => Some(min),
            Shape::BaseFour => Some(4),
            _ => None,
        }
    }

    /// A copy whose right-hand sides are negated; used to check that the
    /// harness reports failures.
    pub fn with_flipped_sign(&self) -> Self {
        let inner = self.eval.clone();
        Self {
            eval: Arc::new(move |p: &[i64]| {
                inner(p).into_iter().map(|(lhs, rhs)| (lhs, -rhs)).collect()
            }),
            ..self.clone()
        }
    }

    pub fn ranges(&self, profile: Profile) -> Vec<ParamRange> {
        use Profile::*;
        let (lo, hi) = match (self.shape, profile) {
            (Shape::Single, Small) => (-10, 60),
            (Shape::Single, Standard) => (-50, 300),
            (Shape::Single, Deep) => (-200, 1000),
            (Shape::SingleFrom(min), Small) => (min, 60),
            (Shape::SingleFrom(min), Standard) => (min, 300),
            (Shape::SingleFrom(min), Deep) => (min, 1000),
            (Shape::Pair, Small) => (-10, 30),
            (Shape::Pair, Standard) => (-40, 120),
            (Shape::Pair, Deep) => (-80, 250),
            (Shape::PositivePair, Small) => (1, 30),
            (Shape::PositivePair, Standard) => (1, 120),
            (Shape::PositivePair, Deep) => (1, 250),
            (Shape::Triple, Small) => (-5, 10),
            (Shape::Triple, Standard) => (-20, 40),
            (Shape::Triple, Deep) => (-30, 60),
            (Shape::Quad, Small) => (-4, 4),
            (Shape::Quad, Standard) => (-8, 8),
            (Shape::Quad, Deep) => (-12, 12),
            (Shape::BaseFour, Small) => (4, 40),
            (Shape::BaseFour, Standard) => (4, 100),
            (Shape::BaseFour, Deep) => (4, 400),
        };
        self.params
            .iter()
            .map(|&name| ParamRange::new(name, lo, hi))
            .collect()
    }
}

/// Inclusive integer range for one named parameter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParamRange {
    pub param: String,
    pub lo: i64,
    pub hi: i64,
}

impl ParamRange {
    pub fn new(param: impl Into<String>, lo: i64, hi: i64) -> Self {
        Self {
            param: param.into(),
            lo,
            hi,
        }
    }

    fn len(&self) -> u64 {
        if self.hi < self.lo {
            0
        } else {
            (self.hi - self.lo) as u64 + 1
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// The first failing point of a sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub params: Vec<(String, i64)>,
    /// Index of the failing clause for multi-clause identities.
    pub clause: usize,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl Counterexample {
    pub fn point(&self) -> Vec<i64> {
        self.params.iter().map(|(_, v)| *v).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub id: String,
    pub ranges: Vec<ParamRange>,
    pub points: u64,
    pub status: Status,
    pub counterexample: Option<Counterexample>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Small,
    Standard,
    Deep,
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "small" => Ok(Profile::Small),
            "standard" => Ok(Profile::Standard),
            "deep" => Ok(Profile::Deep),
            other => Err(Error::InvalidParams(format!(
                "unknown profile {other:?} (expected small, standard or deep)"
            ))),
        }
    }
}

fn fq(i: i64) -> Rational {
    Rational::from_integer(fib(i))
}

fn lq(i: i64) -> Rational {
    Rational::from_integer(lucas(i))
}

fn fi(i: i64) -> BigInt {
    fib(i)
}

fn sq(i: i64) -> BigInt {
    let v = fib(i);
    &v * &v
}

fn int(v: BigInt) -> Rational {
    Rational::from_integer(v)
}

fn one_clause(lhs: BigInt, rhs: BigInt) -> Clauses {
    vec![(int(lhs), int(rhs))]
}

/// Every identity the resistance formulas depend on, in a fixed order.
pub fn registry() -> Vec<Identity> {
    vec![
        Identity::new("I-2.1", "F_{2m} = L_m F_m", &["m"], Shape::Single, |p| {
            let m = p[0];
            one_clause(fi(2 * m), lucas(m) * fi(m))
        }),
        Identity::new(
            "I-2.2",
            "F_{k+m} = F_m F_{k+1} + F_{m-1} F_k",
            &["k", "m"],
            Shape::Pair,
            |p| {
                let (k, m) = (p[0], p[1]);
                one_clause(fi(k + m), fi(m) * fi(k + 1) + fi(m - 1) * fi(k))
            },
        ),
        Identity::new(
            "I-2.3/2.4",
            "F_{2m} = F_m F_{m+1} + F_{m-1} F_m; F_{2m-3} = F_{m-1}^2 + F_{m-2}^2",
            &["m"],
            Shape::Single,
            |p| {
                let m = p[0];
                vec![
                    (fq(2 * m), int(fi(m) * fi(m + 1) + fi(m - 1) * fi(m))),
                    (fq(2 * m - 3), int(sq(m - 1) + sq(m - 2))),
                ]
            },
        ),
        Identity::new(
            "I-2.5",
            "F_{n+m} = F_{n+1} F_{m+1} - F_{n-1} F_{m-1}",
            &["n", "m"],
            Shape::Pair,
            |p| {
                let (n, m) = (p[0], p[1]);
                one_clause(fi(n + m), fi(n + 1) * fi(m + 1) - fi(n - 1) * fi(m - 1))
            },
        ),
        Identity::new("I-2.6", "F_{2m} = F_{m+1}^2 - F_{m-1}^2", &["m"], Shape::Single, |p| {
            let m = p[0];
            one_clause(fi(2 * m), sq(m + 1) - sq(m - 1))
        }),
        Identity::new(
            "I-2.7",
            "F_{m+3}^2 + F_m^2 = 2 (F_{m+1}^2 + F_{m+2}^2)",
            &["m"],
            Shape::Single,
            |p| {
                let m = p[0];
                one_clause(sq(m + 3) + sq(m), (sq(m + 1) + sq(m + 2)) * 2)
            },
        ),
        Identity::new("I-2.8", "3 F_m = F_{m+2} + F_{m-2}", &["m"], Shape::Single, |p| {
            let m = p[0];
            one_clause(fi(m) * 3, fi(m + 2) + fi(m - 2))
        }),
        Identity::new("I-2.9", "L_m = F_{m+1} + F_{m-1}", &["m"], Shape::Single, |p| {
            let m = p[0];
            one_clause(lucas(m), fi(m + 1) + fi(m - 1))
        }),
        Identity::new("I-2.10", "2 F_{m+1} = F_m + L_m", &["m"], Shape::Single, |p| {
            let m = p[0];
            one_clause(fi(m + 1) * 2, fi(m) + lucas(m))
        }),
        Identity::new("I-2.11", "L_{m+1} = 2 F_m + F_{m+1}", &["m"], Shape::Single, |p| {
            let m = p[0];
            one_clause(lucas(m + 1), fi(m) * 2 + fi(m + 1))
        }),
        Identity::new(
            "I-2.12",
            "F_{n+a+b+c} F_{n-a} F_{n-b} F_{n-c} - F_{n-a-b-c} F_{n+a} F_{n+b} F_{n+c} \
             = (-1)^{n+a+b+c} F_{a+b} F_{a+c} F_{b+c} F_{2n}",
            &["n", "a", "b", "c"],
            Shape::Quad,
            |p| {
                let (n, a, b, c) = (p[0], p[1], p[2], p[3]);
                let lhs = fi(n + a + b + c) * fi(n - a) * fi(n - b) * fi(n - c)
                    - fi(n - a - b - c) * fi(n + a) * fi(n + b) * fi(n + c);
                let rhs = neg_one_pow(n + a + b + c)
                    * fi(a + b)
                    * fi(a + c)
                    * fi(b + c)
                    * fi(2 * n);
                one_clause(lhs, rhs)
            },
        ),
        Identity::new(
            "I-2.13",
            "F_{n+i} F_{n+r} - F_n F_{n+i+r} = (-1)^n F_i F_r",
            &["n", "i", "r"],
            Shape::Triple,
            |p| {
                let (n, i, r) = (p[0], p[1], p[2]);
                one_clause(
                    fi(n + i) * fi(n + r) - fi(n) * fi(n + i + r),
                    neg_one_pow(n) * fi(i) * fi(r),
                )
            },
        ),
        Identity::new(
            "I-3.2",
            "F_{2k} F_{m-k-1} F_{m-k+2} = F_{m+1} F_{m-2k} F_{k+1} F_{k-2} \
             + F_{m-2k+1} F_m F_{k-1} F_{k+2}",
            &["m", "k"],
            Shape::PositivePair,
            |p| {
                let (m, k) = (p[0], p[1]);
                one_clause(
                    fi(2 * k) * fi(m - k - 1) * fi(m - k + 2),
                    fi(m + 1) * fi(m - 2 * k) * fi(k + 1) * fi(k - 2)
                        + fi(m - 2 * k + 1) * fi(m) * fi(k - 1) * fi(k + 2),
                )
            },
        ),
        Identity::new(
            "I-3.4",
            "F_{k+1} F_m - F_{k-1} F_{m+2} = (-1)^{k-1} F_{m-k+1}",
            &["m", "k"],
            Shape::PositivePair,
            |p| {
                let (m, k) = (p[0], p[1]);
                one_clause(
                    fi(k + 1) * fi(m) - fi(k - 1) * fi(m + 2),
                    neg_one_pow(k - 1) * fi(m - k + 1),
                )
            },
        ),
        Identity::new(
            "I-3.5",
            "F_{2m-2k+2} F_{k+1} F_{k-2} - F_{2k} F_{m-k-1} F_{m-k+2} \
             = (-1)^{k+1} F_{m-2k+1} (F_{m+2} + F_{k-1} F_{m-k})",
            &["m", "k"],
            Shape::PositivePair,
            |p| {
                let (m, k) = (p[0], p[1]);
                one_clause(
                    fi(2 * m - 2 * k + 2) * fi(k + 1) * fi(k - 2)
                        - fi(2 * k) * fi(m - k - 1) * fi(m - k + 2),
                    neg_one_pow(k + 1) * fi(m - 2 * k + 1) * (fi(m + 2) + fi(k - 1) * fi(m - k)),
                )
            },
        ),
        Identity::new(
            "I-A.1",
            "2 F_{2m-2} F_{m+1}^3 + F_{2m+2} F_{m-1}^2 F_m \
             = L_m (F_{m+1} F_{2m-2} F_{m+2} + F_m F_{m-1}^2 F_{m+1})",
            &["m"],
            Shape::SingleFrom(1),
            |p| {
                let m = p[0];
                one_clause(
                    fi(2 * m - 2) * fi(m + 1) * sq(m + 1) * 2 + fi(2 * m + 2) * sq(m - 1) * fi(m),
                    lucas(m)
                        * (fi(m + 1) * fi(2 * m - 2) * fi(m + 2) + fi(m) * sq(m - 1) * fi(m + 1)),
                )
            },
        ),
        Identity::new(
            "I-A.2",
            "F_{m+1} F_{m+2} - 3 F_{m-3} F_m = 2 F_{2m-3} + 3 F_{m+1} F_{m-2} + F_m F_{m-1}",
            &["m"],
            Shape::SingleFrom(1),
            |p| {
                let m = p[0];
                one_clause(
                    fi(m + 1) * fi(m + 2) - fi(m - 3) * fi(m) * 3,
                    fi(2 * m - 3) * 2 + fi(m + 1) * fi(m - 2) * 3 + fi(m) * fi(m - 1),
                )
            },
        ),
        Identity::new(
            "I-A.3",
            "(F_{2m-2} + 3 F_{m-2}^2)(4 F_{2m-2} + 3 F_{m-1}^2) + F_{2m-2} F_{2m+2} \
             = 3 [F_{2m-2} (2 F_{2m-3} + 3 F_{m+1} F_{m-2} + F_m F_{m-1}) + F_m F_{m+1} F_{m-1}^2]",
            &["m"],
            Shape::SingleFrom(1),
            |p| {
                let m = p[0];
                let f2m2 = fi(2 * m - 2);
                let lhs = (&f2m2 + sq(m - 2) * 3) * (&f2m2 * 4 + sq(m - 1) * 3)
                    + &f2m2 * fi(2 * m + 2);
                let inner = fi(2 * m - 3) * 2 + fi(m + 1) * fi(m - 2) * 3 + fi(m) * fi(m - 1);
                let rhs = (&f2m2 * inner + fi(m) * fi(m + 1) * sq(m - 1)) * 3;
                one_clause(lhs, rhs)
            },
        ),
        Identity::new(
            "I-A.4",
            "(m+1)/5 + 4 F_{m+1}/(5 L_{m+1}) - F_{m-3} (F_{m+2} + F_{m-2}) / F_{2m+2} \
             = (F_{2m-2} + 3 F_{m-2}^2)(4 F_{2m-2} + 3 F_{m-1}^2) / (3 F_{2m-2} F_{2m+2}) \
             + 1/3 + sum_{i=1}^{m-2} F_i F_{i+1} / (L_i L_{i+1})",
            &["m"],
            Shape::BaseFour,
            |p| {
                let m = p[0];
                let lhs = Rational::ratio(m + 1, 5)
                    + Rational::ratio(fi(m + 1) * 4, lucas(m + 1) * 5)
                    - Rational::ratio(fi(m - 3) * (fi(m + 2) + fi(m - 2)), fi(2 * m + 2));
                let f2m2 = fi(2 * m - 2);
                let rhs = Rational::ratio(
                    (&f2m2 + sq(m - 2) * 3) * (&f2m2 * 4 + sq(m - 1) * 3),
                    &f2m2 * fi(2 * m + 2) * 3,
                ) + Rational::ratio(1, 3)
                    + tail_sum((m - 2) as usize);
                vec![(lhs, rhs)]
            },
        ),
        Identity::new(
            "I-B.51/52",
            "sum_{i=1}^{m-1} F_i F_{i+1} / (L_i L_{i+1}) = (m L_m - F_m) / (5 L_m); \
             2 F_{m+1}^2 / (L_m L_{m+1}) + (m L_m - F_m) / (5 L_m) = (m+1)/5 + 4 F_{m+1} / (5 L_{m+1})",
            &["m"],
            Shape::SingleFrom(1),
            |p| {
                let m = p[0];
                let closed = (Rational::from(m) * lq(m) - fq(m)) / (lq(m) * Rational::from(5));
                let direct: Rational = (1..m).map(tail_term).sum();
                let lhs52 = Rational::ratio(sq(m + 1) * 2, lucas(m) * lucas(m + 1)) + &closed;
                let rhs52 = Rational::ratio(m + 1, 5)
                    + Rational::ratio(fi(m + 1) * 4, lucas(m + 1) * 5);
                vec![(direct, closed), (lhs52, rhs52)]
            },
        ),
    ]
}

pub fn lookup(id: &str) -> Result<Identity> {
    registry()
        .into_iter()
        .find(|i| i.id == id)
        .ok_or_else(|| Error::UnknownIdentity(id.to_owned()))
}

/// Sweeps a registered identity over the given ranges.
pub fn check_identity(id: &str, ranges: &[ParamRange]) -> Result<IdentityReport> {
    check(&lookup(id)?, ranges)
}

/// Sweeps any identity over the given ranges. Every parameter needs exactly
/// one range; ranges below a stated lower bound are clipped to it.
pub fn check(identity: &Identity, ranges: &[ParamRange]) -> Result<IdentityReport> {
    let mut ordered = Vec::with_capacity(identity.params.len());
    for &name in identity.params {
        let mut found = ranges.iter().filter(|r| r.param == name);
        let range = found.next().ok_or_else(|| {
            Error::InvalidParams(format!("{}: no range for parameter {name}", identity.id))
        })?;
        if found.next().is_some() {
            return Err(Error::InvalidParams(format!(
                "{}: duplicate range for parameter {name}",
                identity.id
            )));
        }
        let mut range = range.clone();
        if let Some(min) = identity.lower_bound() {
            range.lo = range.lo.max(min);
        }
        ordered.push(range);
    }
    if let Some(extra) = ranges.iter().find(|r| !identity.params.contains(&r.param.as_str())) {
        return Err(Error::InvalidParams(format!(
            "{}: unknown parameter {}",
            identity.id, extra.param
        )));
    }

    let points: u64 = ordered.iter().map(ParamRange::len).product();
    let point_at = |mut idx: u64| -> Vec<i64> {
        let mut p = vec![0; ordered.len()];
        for (slot, r) in p.iter_mut().zip(&ordered).rev() {
            let len = r.len();
            *slot = r.lo + (idx % len) as i64;
            idx /= len;
        }
        p
    };

    let failure = (0..points).into_par_iter().find_map_first(|idx| {
        let p = point_at(idx);
        identity
            .evaluate(&p)
            .into_iter()
            .enumerate()
            .find(|(_, (lhs, rhs))| lhs != rhs)
            .map(|(clause, (lhs, rhs))| Counterexample {
                params: identity
                    .params
                    .iter()
                    .zip(&p)
                    .map(|(n, v)| (n.to_string(), *v))
                    .collect(),
                clause,
                lhs,
                rhs,
            })
    });

    Ok(IdentityReport {
        id: identity.id.to_owned(),
        ranges: ordered,
        points,
        status: if failure.is_some() {
            Status::Fail
        } else {
            Status::Pass
        },
        counterexample: failure,
    })
}

/// Re-evaluates the failing clause of a counterexample.
pub fn replay(identity: &Identity, cx: &Counterexample) -> (Rational, Rational) {
    identity.evaluate(&cx.point()).swap_remove(cx.clause)
}

/// Checks every registered identity under a profile, in registry order.
pub fn run_all(profile: Profile) -> Vec<IdentityReport> {
    run_identities(&registry(), profile)
}

pub fn run_identities(identities: &[Identity], profile: Profile) -> Vec<IdentityReport> {
    identities
        .par_iter()
        .map(|i| check(i, &i.ranges(profile)).expect("profile ranges cover every parameter"))
        .collect()
}
