use std::fmt;
use std::str::FromStr;

use clap::ValueEnum;
use serde::Serialize;
use twotree::closed_form::{
    bent_resistance_alternating, bent_resistance_product, straight_pair_resistance, BentParams,
};
use twotree::delta_y::{reduce_bent, reduce_straight};
use twotree::graph::{bent_2tree, straight_2tree, WeightedGraph};
use twotree::resistance::{resistance_exact, resistance_float, ResistanceValue};

use crate::CliError;

/// Above this many vertices `--methods all` leaves out the Laplacian
/// oracles; naming them explicitly still runs them.
pub const ORACLE_AUTO_MAX: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyArg {
    Straight,
    Bent,
}

impl fmt::Display for FamilyArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyArg::Straight => "straight",
            FamilyArg::Bent => "bent",
        })
    }
}

/// One resistance query `r(i, j)` on a family member.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Query {
    pub family: FamilyArg,
    pub n: usize,
    pub k: Option<usize>,
    pub i: usize,
    pub j: usize,
}

impl Query {
    pub fn new(
        family: FamilyArg,
        n: usize,
        k: Option<usize>,
        i: Option<usize>,
        j: Option<usize>,
    ) -> Result<Self, CliError> {
        match family {
            FamilyArg::Straight => {
                if n < 3 {
                    return Err(CliError::Usage(format!(
                        "the straight family needs n >= 3 (got n = {n})"
                    )));
                }
                if k.is_some() {
                    return Err(CliError::Usage("--k only applies to the bent family".into()));
                }
            }
            FamilyArg::Bent => {
                let k = k.ok_or_else(|| CliError::Usage("the bent family requires --k".into()))?;
                twotree::graph::validate_bent(n, k)?;
                if i.is_some_and(|i| i != 1) || j.is_some_and(|j| j != n) {
                    return Err(CliError::Usage(
                        "pair queries (--i, --j) are only supported on the straight family".into(),
                    ));
                }
            }
        }
        let (i, j) = (i.unwrap_or(1), j.unwrap_or(n));
        for v in [i, j] {
            if v < 1 || v > n {
                return Err(CliError::Usage(format!(
                    "vertex {v} out of range 1..={n}"
                )));
            }
        }
        if i == j {
            return Err(CliError::Usage("--i and --j must differ".into()));
        }
        Ok(Self {
            family,
            n,
            k,
            i: i.min(j),
            j: i.max(j),
        })
    }

    fn is_end_to_end(&self) -> bool {
        self.i == 1 && self.j == self.n
    }

    fn graph(&self) -> twotree::Result<WeightedGraph> {
        match self.family {
            FamilyArg::Straight => straight_2tree(self.n),
            FamilyArg::Bent => bent_2tree(self.n, self.k.expect("validated")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Method {
    ClosedFormProduct,
    ClosedFormAlternating,
    ClosedFormStraight,
    DeltaY,
    LaplacianExact,
    LaplacianFloat,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::ClosedFormProduct,
        Method::ClosedFormAlternating,
        Method::ClosedFormStraight,
        Method::DeltaY,
        Method::LaplacianExact,
        Method::LaplacianFloat,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Method::ClosedFormProduct => "closed-form-product",
            Method::ClosedFormAlternating => "closed-form-alternating",
            Method::ClosedFormStraight => "closed-form-straight",
            Method::DeltaY => "delta-y",
            Method::LaplacianExact => "laplacian-exact",
            Method::LaplacianFloat => "laplacian-float",
        }
    }

    fn is_oracle(self) -> bool {
        matches!(self, Method::LaplacianExact | Method::LaplacianFloat)
    }

    fn applies_to(self, q: &Query) -> bool {
        match self {
            Method::ClosedFormProduct | Method::ClosedFormAlternating => {
                q.family == FamilyArg::Bent
            }
            Method::ClosedFormStraight => q.family == FamilyArg::Straight,
            Method::DeltaY => q.is_end_to_end(),
            Method::LaplacianExact | Method::LaplacianFloat => true,
        }
    }

    fn run(self, q: &Query) -> twotree::Result<ResistanceValue> {
        let exact = match self {
            Method::ClosedFormProduct => {
                bent_resistance_product(&BentParams::new(q.n, q.k.expect("bent"))?)
            }
            Method::ClosedFormAlternating => {
                bent_resistance_alternating(&BentParams::new(q.n, q.k.expect("bent"))?)
            }
            Method::ClosedFormStraight => straight_pair_resistance(q.n - 2, q.i, q.j - q.i)?,
            Method::DeltaY => match q.family {
                FamilyArg::Straight => reduce_straight(q.n)?,
                FamilyArg::Bent => reduce_bent(q.n, q.k.expect("bent"))?.r,
            },
            Method::LaplacianExact => resistance_exact(&q.graph()?, q.i, q.j)?,
            Method::LaplacianFloat => {
                return Ok(ResistanceValue::Float(resistance_float(&q.graph()?, q.i, q.j)?))
            }
        };
        Ok(ResistanceValue::Exact(exact))
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Token {
    All,
    ClosedForm,
    One(Method),
}

/// The parsed `--methods` flag, resolved per query.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MethodSpec(Option<Vec<Token>>);

impl FromStr for MethodSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let tokens = s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| match t {
                "all" => Ok(Token::All),
                "closed-form" => Ok(Token::ClosedForm),
                other => Method::ALL
                    .into_iter()
                    .find(|m| m.tag() == other)
                    .map(Token::One)
                    .ok_or_else(|| {
                        let tags: Vec<_> = Method::ALL.iter().map(|m| m.tag()).collect();
                        format!(
                            "unknown method {other:?} (expected all, closed-form, {})",
                            tags.join(", ")
                        )
                    }),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if tokens.is_empty() {
            return Err("no methods given".into());
        }
        Ok(MethodSpec(Some(tokens)))
    }
}

impl MethodSpec {
    pub fn resolve(&self, q: &Query) -> Result<Vec<Method>, CliError> {
        let mut out = Vec::new();
        match &self.0 {
            None => {
                let first = match q.family {
                    FamilyArg::Bent => Method::ClosedFormAlternating,
                    FamilyArg::Straight => Method::ClosedFormStraight,
                };
                out.push(first);
                out.push(if q.is_end_to_end() {
                    Method::DeltaY
                } else {
                    Method::LaplacianExact
                });
            }
            Some(tokens) => {
                for token in tokens {
                    match *token {
                        Token::All => out.extend(Method::ALL.into_iter().filter(|m| {
                            m.applies_to(q) && (!m.is_oracle() || q.n <= ORACLE_AUTO_MAX)
                        })),
                        Token::ClosedForm => out.extend(
                            [
                                Method::ClosedFormProduct,
                                Method::ClosedFormAlternating,
                                Method::ClosedFormStraight,
                            ]
                            .into_iter()
                            .filter(|m| m.applies_to(q)),
                        ),
                        Token::One(m) if m.applies_to(q) => out.push(m),
                        Token::One(m) => {
                            return Err(CliError::Usage(format!(
                                "method {m} does not apply to r({}, {}) on the {} family",
                                q.i, q.j, q.family
                            )))
                        }
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// Runs every method on the query, in canonical method order.
pub fn evaluate(q: &Query, methods: &[Method]) -> Result<Vec<(Method, ResistanceValue)>, CliError> {
    methods
        .iter()
        .map(|&m| Ok((m, m.run(q)?)))
        .collect()
}
