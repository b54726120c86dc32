//! The embedded table of Hilbert class polynomials.
//!
//! Format: a `# sha256: <hex>` header over the remaining text, then one line
//! per discriminant `disc degree c_deg ... c_0` (monic, so c_deg = 1).

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::OnceLock;

use num_bigint::BigInt;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Environment variable naming a replacement table file.
pub const TABLE_ENV: &str = "ELLPER_HILBERT_TABLE";

const EMBEDDED: &str = include_str!("../../data/hilbert.txt");

#[derive(Clone, Debug)]
pub struct HilbertTable {
    polys: BTreeMap<u64, Vec<BigInt>>,
}

impl HilbertTable {
    /// Parses a table and checks its checksum header.
    pub fn parse(text: &str) -> Result<Self> {
        let (header, body) = text.split_once('\n').ok_or_else(|| Error::Invalid("empty Hilbert table".into()))?;
        let want = header
            .strip_prefix("# sha256: ")
            .ok_or_else(|| Error::Invalid("Hilbert table lacks a sha256 header".into()))?
            .trim();
        let got = hex::encode(Sha256::digest(body.as_bytes()));
        if got != want {
            return Err(Error::Invalid(format!("Hilbert table checksum mismatch: header {want}, body {got}")));
        }
        let mut polys = BTreeMap::new();
        for (i, line) in body.lines().enumerate() {
            let bad = || Error::Invalid(format!("Hilbert table line {}: malformed", i + 2));
            let mut fields = line.split_whitespace();
            let disc: u64 = fields.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let degree: usize = fields.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let coeffs = fields.map(|f| f.parse::<BigInt>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
            if coeffs.len() != degree + 1 || coeffs[0] != BigInt::from(1) {
                return Err(bad());
            }
            polys.insert(disc, coeffs);
        }
        Ok(HilbertTable { polys })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// The table compiled into the library.
    pub fn embedded() -> &'static HilbertTable {
        static TABLE: OnceLock<HilbertTable> = OnceLock::new();
        TABLE.get_or_init(|| HilbertTable::parse(EMBEDDED).expect("embedded Hilbert table is valid"))
    }

    /// The table named by `ELLPER_HILBERT_TABLE`, or the embedded one.
    pub fn from_env() -> Result<HilbertTable> {
        match std::env::var_os(TABLE_ENV) {
            Some(p) => Self::load(Path::new(&p)),
            None => Ok(Self::embedded().clone()),
        }
    }

    /// Coefficients of H_{-disc}, leading coefficient first.
    pub fn get(&self, disc: u64) -> Result<&[BigInt]> {
        self.polys.get(&disc).map(|v| v.as_slice()).ok_or(Error::NotInTable(disc))
    }

    pub fn contains(&self, disc: u64) -> bool {
        self.polys.contains_key(&disc)
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn max_disc(&self) -> u64 {
        self.polys.keys().next_back().copied().unwrap_or(0)
    }
}
