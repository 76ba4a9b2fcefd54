use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::modem::McsId;

const PAPER_CSV: &str = include_str!("../../data/thresholds_paper.csv");

/// Origin of a threshold table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Simulated,
    Paper,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Simulated => "simulated",
            Provenance::Paper => "paper",
        })
    }
}

impl FromStr for Provenance {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "simulated" => Ok(Provenance::Simulated),
            "paper" => Ok(Provenance::Paper),
            other => invalid(format!("unknown provenance {other:?}")),
        }
    }
}

/// Minimum SNR (dB) per MCS at which the target PER is met.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdTable {
    gamma0: BTreeMap<McsId, f64>,
    pub target_per: f64,
    pub provenance: Provenance,
    pub seed: Option<u64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    mcs: String,
    m: Option<u32>,
    gamma0_db: f64,
    target_per: f64,
    provenance: String,
    seed: Option<u64>,
}

impl ThresholdTable {
    pub fn new(target_per: f64, provenance: Provenance, seed: Option<u64>) -> Self {
        Self {
            gamma0: BTreeMap::new(),
            target_per,
            provenance,
            seed,
        }
    }

    /// The bundled reference thresholds.
    pub fn paper() -> Self {
        Self::read_csv(PAPER_CSV.as_bytes()).expect("bundled threshold table is valid")
    }

    pub fn insert(&mut self, mcs: McsId, gamma0_db: f64) -> Result<()> {
        mcs.check()?;
        if !gamma0_db.is_finite() {
            return invalid(format!("threshold for {mcs} is not finite"));
        }
        self.gamma0.insert(mcs, gamma0_db);
        Ok(())
    }

    pub fn get(&self, mcs: McsId) -> Option<f64> {
        self.gamma0.get(&mcs).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (McsId, f64)> + '_ {
        self.gamma0.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.gamma0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gamma0.is_empty()
    }

    /// Whether every MFSK order has a threshold.
    pub fn covers_mfsk(&self) -> bool {
        crate::modem::MFSK_ORDERS
            .iter()
            .all(|&m| self.gamma0.contains_key(&McsId::Mfsk(m)))
    }

    /// MFSK thresholds strictly decrease as M grows.
    pub fn is_mfsk_ordered(&self) -> bool {
        let v: Vec<f64> = crate::modem::MFSK_ORDERS
            .iter()
            .filter_map(|&m| self.get(McsId::Mfsk(m)))
            .collect();
        v.windows(2).all(|w| w[0] > w[1])
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        for mcs in McsId::all() {
            let Some(g) = self.get(mcs) else { continue };
            wr.serialize(Row {
                mcs: mcs.to_string(),
                m: mcs.order(),
                gamma0_db: g,
                target_per: self.target_per,
                provenance: self.provenance.to_string(),
                seed: self.seed,
            })?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let mut table: Option<Self> = None;
        for (i, rec) in rd.deserialize::<Row>().enumerate() {
            let line = i + 2;
            let parse = |msg: String| Error::Parse {
                what: "threshold table",
                line,
                msg,
            };
            let row = rec.map_err(|e| parse(e.to_string()))?;
            let mcs: McsId = row.mcs.parse().map_err(|e: Error| parse(e.to_string()))?;
            if row.m != mcs.order() {
                return Err(parse(format!("column m = {:?} does not match {mcs}", row.m)));
            }
            let provenance: Provenance = row.provenance.parse().map_err(|e: Error| parse(e.to_string()))?;
            let t = table.get_or_insert_with(|| Self::new(row.target_per, provenance, row.seed));
            if t.target_per != row.target_per || t.provenance != provenance {
                return Err(parse("target_per and provenance must agree on every row".into()));
            }
            if t.gamma0.contains_key(&mcs) {
                return Err(parse(format!("duplicate row for {mcs}")));
            }
            t.insert(mcs, row.gamma0_db).map_err(|e| parse(e.to_string()))?;
        }
        table.ok_or_else(|| Error::Parse {
            what: "threshold table",
            line: 1,
            msg: "no rows".into(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_table_values_and_ordering() {
        let t = ThresholdTable::paper();
        assert_eq!(t.provenance, Provenance::Paper);
        assert_eq!(t.len(), 7);
        assert!(t.covers_mfsk());
        assert!(t.is_mfsk_ordered());
        let want = [(256, -13.25), (64, -8.25), (16, -3.25), (8, -0.75), (4, 1.25), (2, 2.9)];
        for (m, g) in want {
            assert_eq!(t.get(McsId::Mfsk(m)), Some(g));
        }
        let bpsk = t.get(McsId::Bpsk).unwrap();
        assert_eq!(bpsk, 0.75);
        assert!(bpsk > t.get(McsId::Mfsk(8)).unwrap() && bpsk < t.get(McsId::Mfsk(4)).unwrap());
    }

    #[test]
    fn csv_round_trip() {
        let mut t = ThresholdTable::new(1e-3, Provenance::Simulated, Some(7));
        t.insert(McsId::Mfsk(16), -2.875).unwrap();
        t.insert(McsId::Bpsk, 0.5).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("mcs,m,gamma0_db,target_per,provenance,seed\n"));
        assert_eq!(ThresholdTable::read_csv(&buf[..]).unwrap(), t);
    }

    #[test]
    fn malformed_rows_report_line() {
        let bad = "mcs,m,gamma0_db,target_per,provenance,seed\nMFSK-4,4,1.0,0.001,paper,\nMFSK-5,5,x,0.001,paper,\n";
        match ThresholdTable::read_csv(bad.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let mismatch = "mcs,m,gamma0_db,target_per,provenance,seed\nMFSK-4,8,1.0,0.001,paper,\n";
        assert!(ThresholdTable::read_csv(mismatch.as_bytes()).is_err());
        assert!(ThresholdTable::read_csv("mcs,m,gamma0_db,target_per,provenance,seed\n".as_bytes()).is_err());
    }
}
