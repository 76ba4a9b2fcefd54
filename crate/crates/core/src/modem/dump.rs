//! Debug dumps.
//!
//! Grid CSV columns: `symbol,subcarrier,re,im` (one row per grid cell).
//! LLR CSV columns: `index,llr`.

use std::io::Write;

use super::Grid;
use crate::error::Result;

pub fn write_grid_csv<W: Write>(w: W, grid: &Grid) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["symbol", "subcarrier", "re", "im"])?;
    for (s, sym) in grid.symbols().enumerate() {
        for (k, x) in sym.iter().enumerate() {
            out.write_record([s.to_string(), k.to_string(), x.re.to_string(), x.im.to_string()])?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn write_llr_csv<W: Write>(w: W, llrs: &[f64]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["index", "llr"])?;
    for (i, l) in llrs.iter().enumerate() {
        out.write_record([i.to_string(), l.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn grid_dump_layout() {
        let mut g = Grid::zeros(2, 1);
        g.symbol_mut(0)[1] = Complex64::new(0.5, -1.0);
        let mut buf = Vec::new();
        write_grid_csv(&mut buf, &g).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "symbol,subcarrier,re,im\n0,0,0,0\n0,1,0.5,-1\n"
        );
        let mut buf = Vec::new();
        write_llr_csv(&mut buf, &[1.5, -2.0]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "index,llr\n0,1.5\n1,-2\n");
    }
}
