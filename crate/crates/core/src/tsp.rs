//! Travelling salesman instances as penalized abduction problems.
//!
//! Each arc `c(i,j)` is a hypothesis whose penalty is the arc weight. The
//! observations forbid a city with no incoming and outgoing arc and a city
//! with two outgoing or two incoming arcs. Those two constraints alone
//! admit any set of disjoint cycles covering the cities, so by default the
//! generator also requires every city to be reachable from city 1 along the
//! chosen arcs, which leaves exactly the Hamiltonian cycles.

use std::fmt::Write as _;

use crate::error::TspError;

/// Square matrix of integer arc weights; the diagonal is ignored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightMatrix {
    rows: Vec<Vec<i64>>,
}

impl WeightMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self, TspError> {
        let n = rows.len();
        if n < 2 {
            return Err(TspError::Shape {
                rows: n,
                cols: rows.first().map_or(0, Vec::len),
                row: 1,
            });
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(TspError::Shape {
                    rows: n,
                    cols: row.len(),
                    row: r + 1,
                });
            }
        }
        Ok(WeightMatrix { rows })
    }

    /// Whitespace-separated integers, one matrix row per non-empty line.
    pub fn parse(text: &str) -> Result<Self, TspError> {
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('%').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<i64>().map_err(|_| TspError::NotAnInteger {
                        line: i + 1,
                        token: t.to_string(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        Self::new(rows)
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// Weight of arc `i -> j`, cities numbered from 1.
    pub fn weight(&self, i: usize, j: usize) -> i64 {
        self.rows[i - 1][j - 1]
    }
}

/// Renders the instance in `.pap` syntax. With `cycle_cover` the
/// reachability rules are left out, so optimal solutions are minimum-weight
/// cycle covers rather than tours.
pub fn gen_tsp(w: &WeightMatrix, cycle_cover: bool) -> Result<String, TspError> {
    let n = w.n();
    for i in 1..=n {
        for j in 1..=n {
            if i != j && w.weight(i, j) <= 0 {
                return Err(TspError::NonPositive {
                    from: i,
                    to: j,
                    weight: w.weight(i, j),
                });
            }
        }
    }
    let mut out = String::new();
    out.push_str(&format!("% travelling salesman, {n} cities\n"));
    for i in 1..=n {
        writeln!(out, "city({i}).").unwrap();
    }
    out.push_str(
        "visited(I) :- city(I), c(J, I), c(I, K).\n\
         missedcity :- city(I), not visited(I).\n\
         badtour :- c(I, J), c(I, K), J != K.\n\
         badtour :- c(J, I), c(K, I), J != K.\n",
    );
    if !cycle_cover {
        out.push_str(
            "reached(1).\n\
             reached(J) :- reached(I), c(I, J).\n\
             missedcity :- city(I), not reached(I).\n",
        );
    }
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                writeln!(out, "#hypothesis c({i},{j}) penalty {}.", w.weight(i, j)).unwrap();
            }
        }
    }
    out.push_str("#observe not missedcity.\n#observe not badtour.\n#cost sum.\n");
    Ok(out)
}
