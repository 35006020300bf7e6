//! CNF formulas, a DIMACS reader, and exhaustive enumeration of small formulas.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    /// 0-based variable index.
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Self { var, positive: true }
    }

    pub fn neg(var: usize) -> Self {
        Self {
            var,
            positive: false,
        }
    }

    pub fn holds(&self, assignment: &[bool]) -> bool {
        assignment[self.var] == self.positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "x{}", self.var + 1)
        } else {
            write!(f, "!x{}", self.var + 1)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CnfFormula {
    var_count: usize,
    clauses: Vec<Vec<Literal>>,
}

impl CnfFormula {
    /// Rejects empty formulas, empty clauses and out-of-range variables.
    pub fn new(var_count: usize, clauses: Vec<Vec<Literal>>) -> Result<Self> {
        if clauses.is_empty() {
            return Err(Error::EmptyFormula);
        }
        for (j, clause) in clauses.iter().enumerate() {
            if clause.is_empty() {
                return Err(Error::InvalidParams(format!("clause {j} is empty")));
            }
            if let Some(lit) = clause.iter().find(|l| l.var >= var_count) {
                return Err(Error::OutOfRange(format!(
                    "clause {j} mentions {lit} but there are {var_count} variables"
                )));
            }
        }
        Ok(Self { var_count, clauses })
    }

    /// DIMACS-style signed literals: `3` is x3, `-3` is its negation.
    pub fn from_signed(var_count: usize, clauses: &[&[i32]]) -> Result<Self> {
        let clauses = clauses
            .iter()
            .map(|c| c.iter().map(|&l| signed_literal(l)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(var_count, clauses)
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    pub fn satisfied_count(&self, assignment: &[bool]) -> usize {
        self.clauses
            .iter()
            .filter(|c| c.iter().any(|l| l.holds(assignment)))
            .count()
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.var_count, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                let v = lit.var as i64 + 1;
                out.push_str(&format!("{} ", if lit.positive { v } else { -v }));
            }
            out.push_str("0\n");
        }
        out
    }
}

fn signed_literal(l: i32) -> Result<Literal> {
    if l == 0 {
        return Err(Error::Parse("literal 0 inside a clause".into()));
    }
    let var = l.unsigned_abs() as usize - 1;
    Ok(Literal { var, positive: l > 0 })
}

/// Reads a DIMACS CNF file; comment lines start with `c`, `%` ends the input.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let fields: Vec<_> = rest.split_whitespace().collect();
            if fields.len() != 3 || fields[0] != "cnf" {
                return Err(Error::Parse(format!("bad problem line: {line:?}")));
            }
            let vars = fields[1]
                .parse()
                .map_err(|_| Error::Parse(format!("bad variable count in {line:?}")))?;
            let count = fields[2]
                .parse()
                .map_err(|_| Error::Parse(format!("bad clause count in {line:?}")))?;
            header = Some((vars, count));
            continue;
        }
        if header.is_none() {
            return Err(Error::Parse("clause before problem line".into()));
        }
        for token in line.split_whitespace() {
            let l: i32 = token
                .parse()
                .map_err(|_| Error::Parse(format!("bad literal {token:?}")))?;
            if l == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(signed_literal(l)?);
            }
        }
    }
    if !current.is_empty() {
        clauses.push(current);
    }
    let (vars, count) = header.ok_or_else(|| Error::Parse("missing problem line".into()))?;
    if clauses.len() != count {
        return Err(Error::Parse(format!(
            "header declares {count} clauses, found {}",
            clauses.len()
        )));
    }
    CnfFormula::new(vars, clauses)
}

/// Every formula over exactly `var_count` variables with 1..=`max_clauses` clauses,
/// each clause a non-empty set of literals, clauses taken as a multiset.
pub fn enumerate_formulas(var_count: usize, max_clauses: usize) -> Vec<CnfFormula> {
    let literals: Vec<Literal> = (0..var_count)
        .flat_map(|v| [Literal::pos(v), Literal::neg(v)])
        .collect();
    let subsets: Vec<Vec<Literal>> = (1u32..1 << literals.len())
        .map(|mask| {
            literals
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, l)| *l)
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut picks = Vec::new();
    fn extend(
        subsets: &[Vec<Literal>],
        start: usize,
        left: usize,
        var_count: usize,
        picks: &mut Vec<usize>,
        out: &mut Vec<CnfFormula>,
    ) {
        if !picks.is_empty() {
            let clauses = picks.iter().map(|&k| subsets[k].clone()).collect();
            out.push(CnfFormula { var_count, clauses });
        }
        if left == 0 {
            return;
        }
        for k in start..subsets.len() {
            picks.push(k);
            extend(subsets, k, left - 1, var_count, picks, out);
            picks.pop();
        }
    }
    extend(&subsets, 0, max_clauses, var_count, &mut picks, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs_round_trip() {
        let f = CnfFormula::from_signed(2, &[&[1, 2], &[-1], &[-2]]).unwrap();
        let text = format!("c example\n{}", f.to_dimacs());
        assert_eq!(parse_dimacs(&text).unwrap(), f);
    }

    #[test]
    fn dimacs_errors() {
        assert!(parse_dimacs("1 2 0\n").is_err());
        assert!(parse_dimacs("p cnf 1 2\n1 0\n").is_err());
        assert!(parse_dimacs("p cnf 1 1\n2 0\n").is_err());
        assert!(matches!(parse_dimacs("p cnf 1 0\n"), Err(Error::EmptyFormula)));
    }

    #[test]
    fn clauses_may_span_lines() {
        let f = parse_dimacs("p cnf 3 1\n1 -2\n3 0\n").unwrap();
        assert_eq!(f.clauses()[0].len(), 3);
    }

    #[test]
    fn satisfied_counts() {
        let f = CnfFormula::from_signed(2, &[&[1, 2], &[-1], &[-2]]).unwrap();
        assert_eq!(f.satisfied_count(&[true, true]), 1);
        assert_eq!(f.satisfied_count(&[false, false]), 2);
    }

    #[test]
    fn enumeration_counts() {
        // 15 non-empty literal sets over two variables; multisets of size 1..=3
        assert_eq!(enumerate_formulas(2, 3).len(), 15 + 120 + 680);
        assert_eq!(enumerate_formulas(1, 3).len(), 3 + 6 + 10);
    }
}
