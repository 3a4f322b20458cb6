//! Pure-polarity CNF formulas (every clause all-positive or all-negative,
//! one to three variables), DIMACS ingestion, and exhaustive satisfiability.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Largest variable count accepted by [`PureCnf::brute_force_sat`].
pub const BRUTE_FORCE_MAX_VARIABLES: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnfError {
    #[error("clause {clause} mixes positive and negative literals")]
    MixedPolarity { clause: usize },
    #[error("clause {clause} has {size} distinct variables; at most 3 are allowed")]
    ClauseTooLarge { clause: usize, size: usize },
    #[error("clause {clause} is empty")]
    EmptyClause { clause: usize },
    #[error("formula needs at least one variable")]
    NoVariables,
    #[error("formula needs at least one clause")]
    NoClauses,
    #[error("variable {variable} is out of range for {variable_count} variables")]
    VariableOutOfRange { variable: usize, variable_count: usize },
    #[error("assignment has {got} values but the formula has {expected} variables")]
    AssignmentLength { expected: usize, got: usize },
    #[error("{variable_count} variables exceed the brute-force limit of {limit}")]
    TooManyVariables { variable_count: usize, limit: usize },
    #[error("DIMACS line {line}: {reason}")]
    Dimacs { line: usize, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Positive,
    Negative,
}

/// A pure clause: one polarity shared by a set of 1 to 3 variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    polarity: Polarity,
    variables: BTreeSet<usize>,
}

impl Clause {
    pub fn new(polarity: Polarity, variables: impl IntoIterator<Item = usize>) -> Result<Self, CnfError> {
        Self::indexed(0, polarity, variables)
    }

    fn indexed(
        index: usize,
        polarity: Polarity,
        variables: impl IntoIterator<Item = usize>,
    ) -> Result<Self, CnfError> {
        let variables: BTreeSet<usize> = variables.into_iter().collect();
        match variables.len() {
            0 => Err(CnfError::EmptyClause { clause: index }),
            1..=3 => Ok(Clause { polarity, variables }),
            size => Err(CnfError::ClauseTooLarge { clause: index, size }),
        }
    }

    pub fn positive(variables: impl IntoIterator<Item = usize>) -> Result<Self, CnfError> {
        Self::new(Polarity::Positive, variables)
    }

    pub fn negative(variables: impl IntoIterator<Item = usize>) -> Result<Self, CnfError> {
        Self::new(Polarity::Negative, variables)
    }

    pub fn polarity(&self) -> Polarity {
        self.polarity
    }

    pub fn is_positive(&self) -> bool {
        self.polarity == Polarity::Positive
    }

    pub fn variables(&self) -> &BTreeSet<usize> {
        &self.variables
    }

    pub fn contains(&self, variable: usize) -> bool {
        self.variables.contains(&variable)
    }

    /// Whether `value` for a member variable makes this clause true.
    pub fn satisfied_by_value(&self, value: bool) -> bool {
        value == self.is_positive()
    }

    pub fn is_satisfied(&self, beta: &Assignment) -> bool {
        self.variables
            .iter()
            .any(|&v| self.satisfied_by_value(beta.value(v)))
    }
}

/// `β`: a truth value per variable, indexed from 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment(values)
    }

    /// Parses a string of `0`/`1` characters, variable 0 first.
    pub fn parse_bits(bits: &str) -> Option<Self> {
        bits.trim()
            .chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(Assignment)
    }

    pub fn values(&self) -> &[bool] {
        &self.0
    }

    pub fn value(&self, variable: usize) -> bool {
        self.0[variable]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &v in &self.0 {
            f.write_str(if v { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// An ordered list of pure clauses over variables `0..variable_count`.
///
/// Clause order matters to the reductions: clause `i` is addressed by the
/// word prefix `a^i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PureCnf {
    variable_count: usize,
    clauses: Vec<Clause>,
}

impl PureCnf {
    pub fn new(variable_count: usize, clauses: Vec<Clause>) -> Result<Self, CnfError> {
        if variable_count == 0 {
            return Err(CnfError::NoVariables);
        }
        if clauses.is_empty() {
            return Err(CnfError::NoClauses);
        }
        for clause in &clauses {
            if let Some(&variable) = clause.variables.iter().find(|&&v| v >= variable_count) {
                return Err(CnfError::VariableOutOfRange {
                    variable,
                    variable_count,
                });
            }
        }
        Ok(PureCnf {
            variable_count,
            clauses,
        })
    }

    pub fn variable_count(&self) -> usize {
        self.variable_count
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn positive_clause_count(&self) -> usize {
        self.clauses.iter().filter(|c| c.is_positive()).count()
    }

    fn check_length(&self, beta: &Assignment) -> Result<(), CnfError> {
        if beta.len() == self.variable_count {
            Ok(())
        } else {
            Err(CnfError::AssignmentLength {
                expected: self.variable_count,
                got: beta.len(),
            })
        }
    }

    pub fn evaluate(&self, beta: &Assignment) -> Result<bool, CnfError> {
        self.check_length(beta)?;
        Ok(self.clauses.iter().all(|c| c.is_satisfied(beta)))
    }

    /// Index of the first clause `beta` falsifies, if any.
    pub fn first_falsified(&self, beta: &Assignment) -> Result<Option<usize>, CnfError> {
        self.check_length(beta)?;
        Ok(self.clauses.iter().position(|c| !c.is_satisfied(beta)))
    }

    /// The least satisfying assignment in lexicographic order (`false <
    /// true`, variable 0 most significant), found by trying all `2^n`.
    pub fn brute_force_sat(&self) -> Result<Option<Assignment>, CnfError> {
        Ok(self.all_satisfying()?.next())
    }

    /// Every satisfying assignment, in the same order as `brute_force_sat`.
    pub fn all_satisfying(&self) -> Result<impl Iterator<Item = Assignment> + '_, CnfError> {
        let n = self.variable_count;
        if n > BRUTE_FORCE_MAX_VARIABLES {
            return Err(CnfError::TooManyVariables {
                variable_count: n,
                limit: BRUTE_FORCE_MAX_VARIABLES,
            });
        }
        Ok((0u64..1 << n)
            .map(move |code| Assignment((0..n).map(|j| code >> (n - 1 - j) & 1 == 1).collect()))
            .filter(move |beta| self.clauses.iter().all(|c| c.is_satisfied(beta))))
    }

    /// Serializes as DIMACS with 1-based literals.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.variable_count, self.clauses.len());
        for clause in &self.clauses {
            for &v in &clause.variables {
                let literal = v as i64 + 1;
                let literal = if clause.is_positive() { literal } else { -literal };
                out.push_str(&literal.to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }
}

/// Compact rendering such as `¬x0 ∧ (x1 ∨ x2)`, 0-based.
impl fmt::Display for PureCnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, clause) in self.clauses.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∧ ")?;
            }
            let negation = if clause.is_positive() { "" } else { "¬" };
            let literals: Vec<String> = clause
                .variables
                .iter()
                .map(|v| format!("{negation}x{v}"))
                .collect();
            if literals.len() == 1 {
                f.write_str(&literals[0])?;
            } else {
                write!(f, "({})", literals.join(" ∨ "))?;
            }
        }
        Ok(())
    }
}

fn dimacs_error(line: usize, reason: impl Into<String>) -> CnfError {
    CnfError::Dimacs {
        line,
        reason: reason.into(),
    }
}

/// Parses DIMACS CNF, requiring every clause to be pure.
///
/// Comment lines start with `c`. Clauses are whitespace-separated literals
/// terminated by `0` and may span lines. A line starting with `%` ends the
/// clause section, as in the SATLIB corpora.
pub fn parse_dimacs(text: &str) -> Result<PureCnf, CnfError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut pending: Vec<(i64, usize)> = Vec::new();
    let mut last_line = 0;

    let finish_clause = |pending: &mut Vec<(i64, usize)>,
                         clauses: &mut Vec<Clause>,
                         variable_count: usize|
     -> Result<(), CnfError> {
        let index = clauses.len();
        if pending.is_empty() {
            return Err(CnfError::EmptyClause { clause: index });
        }
        let positive = pending[0].0 > 0;
        if pending.iter().any(|&(l, _)| (l > 0) != positive) {
            return Err(CnfError::MixedPolarity { clause: index });
        }
        for &(l, at) in pending.iter() {
            if l.unsigned_abs() as usize > variable_count {
                return Err(dimacs_error(
                    at,
                    format!("literal {l} exceeds declared variable count {variable_count}"),
                ));
            }
        }
        let polarity = if positive {
            Polarity::Positive
        } else {
            Polarity::Negative
        };
        let variables = pending.iter().map(|&(l, _)| l.unsigned_abs() as usize - 1);
        clauses.push(Clause::indexed(index, polarity, variables)?);
        pending.clear();
        Ok(())
    };

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(dimacs_error(line_no, "duplicate header"));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let parsed = match parts.as_slice() {
                ["p", "cnf", n, m] => n.parse::<usize>().ok().zip(m.parse::<usize>().ok()),
                _ => None,
            };
            let (n, m) = parsed.ok_or_else(|| dimacs_error(line_no, "malformed header, expected 'p cnf <vars> <clauses>'"))?;
            if n == 0 {
                return Err(CnfError::NoVariables);
            }
            if m == 0 {
                return Err(CnfError::NoClauses);
            }
            header = Some((n, m));
            continue;
        }
        let (variable_count, _) =
            header.ok_or_else(|| dimacs_error(line_no, "clause before 'p cnf' header"))?;
        for token in line.split_whitespace() {
            let literal: i64 = token
                .parse()
                .map_err(|_| dimacs_error(line_no, format!("invalid literal '{token}'")))?;
            if literal == 0 {
                // a lone trailing 0 after the last clause is tolerated
                if pending.is_empty() && header.is_some_and(|(_, m)| clauses.len() == m) {
                    continue;
                }
                finish_clause(&mut pending, &mut clauses, variable_count)?;
            } else {
                pending.push((literal, line_no));
            }
        }
    }
    let (variable_count, clause_count) =
        header.ok_or_else(|| dimacs_error(last_line, "missing 'p cnf' header"))?;
    if !pending.is_empty() {
        finish_clause(&mut pending, &mut clauses, variable_count)?;
    }
    if clauses.len() != clause_count {
        return Err(dimacs_error(
            last_line,
            format!("header declares {clause_count} clauses but {} were read", clauses.len()),
        ));
    }
    PureCnf::new(variable_count, clauses)
}
