//! Reading and writing parity-check matrices in MacKay's alist format.
//!
//! ```text
//! n m
//! max_col_weight max_row_weight
//! col weights (n values)
//! row weights (m values)
//! n lines: 1-based row indices of each column, zero padded
//! m lines: 1-based column indices of each row, zero padded
//! ```

use std::io::{BufRead, Write};

use super::ldpc::LdpcCode;
use crate::error::{Error, Result};

impl LdpcCode {
    pub fn write_alist<W: Write>(&self, mut w: W) -> Result<()> {
        let (n, m) = (self.n(), self.num_checks());
        let mut cols: Vec<Vec<usize>> = vec![Vec::new(); n];
        for c in 0..m {
            for &v in self.check(c) {
                cols[v].push(c);
            }
        }
        let max_col = cols.iter().map(Vec::len).max().unwrap_or(0);
        let max_row = (0..m).map(|c| self.check(c).len()).max().unwrap_or(0);
        writeln!(w, "{n} {m}")?;
        writeln!(w, "{max_col} {max_row}")?;
        writeln!(w, "{}", join(cols.iter().map(Vec::len)))?;
        writeln!(w, "{}", join((0..m).map(|c| self.check(c).len())))?;
        for col in &cols {
            writeln!(w, "{}", join(padded(col, max_col)))?;
        }
        for c in 0..m {
            writeln!(w, "{}", join(padded(self.check(c), max_row)))?;
        }
        Ok(())
    }

    /// Loads a code from alist text. Column lists are cross-checked against
    /// the row lists.
    pub fn read_alist<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = Lines::new(r);
        let [n, m] = lines.fixed::<2>()?;
        let [_max_col, _max_row] = lines.fixed::<2>()?;
        let col_w = lines.exact(n)?;
        let row_w = lines.exact(m)?;
        let mut cols = Vec::with_capacity(n);
        for &w in &col_w {
            cols.push(lines.entries(w)?);
        }
        let mut rows = Vec::with_capacity(m);
        for &w in &row_w {
            let mut row = lines.entries(w)?;
            row.sort_unstable();
            rows.push(row);
        }
        for (c, col) in cols.iter().enumerate() {
            for &r in col {
                if r >= m || rows[r].binary_search(&c).is_err() {
                    return Err(lines.err(format!("column {} lists row {} inconsistently", c + 1, r + 1)));
                }
            }
        }
        let edges: usize = rows.iter().map(Vec::len).sum();
        if edges != cols.iter().map(Vec::len).sum::<usize>() {
            return Err(lines.err("row and column edge counts differ".into()));
        }
        LdpcCode::from_parity_checks(n, &rows)
    }
}

fn padded(entries: &[usize], width: usize) -> impl Iterator<Item = usize> + '_ {
    entries
        .iter()
        .map(|&e| e + 1)
        .chain(std::iter::repeat(0))
        .take(width)
}

fn join(it: impl Iterator<Item = usize>) -> String {
    it.map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

struct Lines<R> {
    inner: std::io::Lines<R>,
    line: usize,
}

impl<R: BufRead> Lines<R> {
    fn new(r: R) -> Self {
        Self {
            inner: r.lines(),
            line: 0,
        }
    }

    fn err(&self, msg: String) -> Error {
        Error::Parse {
            what: "alist",
            line: self.line,
            msg,
        }
    }

    fn numbers(&mut self) -> Result<Vec<usize>> {
        loop {
            self.line += 1;
            let Some(l) = self.inner.next() else {
                return Err(self.err("unexpected end of file".into()));
            };
            let l = l?;
            if l.trim().is_empty() {
                continue;
            }
            return l
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|e| self.err(format!("{t:?}: {e}"))))
                .collect();
        }
    }

    fn exact(&mut self, count: usize) -> Result<Vec<usize>> {
        let v = self.numbers()?;
        if v.len() != count {
            return Err(self.err(format!("expected {count} values, found {}", v.len())));
        }
        Ok(v)
    }

    fn fixed<const N: usize>(&mut self) -> Result<[usize; N]> {
        let v = self.exact(N)?;
        Ok(v.try_into().expect("length checked"))
    }

    /// Reads one adjacency line, keeping the first `weight` (1-based) entries.
    fn entries(&mut self, weight: usize) -> Result<Vec<usize>> {
        let v = self.numbers()?;
        if v.len() < weight || v[..weight].contains(&0) || v[weight..].iter().any(|&x| x != 0) {
            return Err(self.err(format!("expected {weight} non-zero entries")));
        }
        Ok(v[..weight].iter().map(|&x| x - 1).collect())
    }
}
