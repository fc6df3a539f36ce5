//! Published reference values for the orbit counts, multiplicities and
//! bounds at small `n`, embedded from `data/tables.json`.

use std::sync::OnceLock;

use serde::Deserialize;

use crate::distance::DistanceSet;

const RAW: &str = include_str!("../data/tables.json");

#[derive(Clone, Debug, Deserialize)]
pub struct OrbitCountRow {
    pub n: usize,
    pub b: u64,
    pub b_swap: u64,
}

#[derive(Clone, Debug, Deserialize)]
pub struct MultiplicityRow {
    pub n: usize,
    pub m: Vec<u64>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct BoundRow {
    pub d: Vec<usize>,
    pub sdp: i64,
    pub lp: i64,
    pub product: u64,
    /// Present when the published product column is arithmetically wrong.
    #[serde(default)]
    pub corrected_product: Option<u64>,
}

impl BoundRow {
    pub fn distances(&self) -> DistanceSet {
        DistanceSet::new(self.d.iter().copied()).expect("embedded distance sets are valid")
    }

    /// The value the product column is checked against.
    pub fn expected_product(&self) -> u64 {
        self.corrected_product.unwrap_or(self.product)
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct BoundTable {
    pub n: usize,
    pub rows: Vec<BoundRow>,
}

impl BoundTable {
    pub fn row(&self, d: &DistanceSet) -> Option<&BoundRow> {
        self.rows.iter().find(|r| r.distances() == *d)
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct ExpectedTables {
    pub table1: Vec<OrbitCountRow>,
    pub table2: BoundTable,
    pub table3: Vec<MultiplicityRow>,
    pub table4: BoundTable,
}

impl ExpectedTables {
    pub fn bounds(&self, n: usize) -> Option<&BoundTable> {
        [&self.table2, &self.table4].into_iter().find(|t| t.n == n)
    }

    pub fn orbit_counts(&self, n: usize) -> Option<&OrbitCountRow> {
        self.table1.iter().find(|r| r.n == n)
    }

    pub fn multiplicities(&self, n: usize) -> Option<&MultiplicityRow> {
        self.table3.iter().find(|r| r.n == n)
    }
}

pub fn expected() -> &'static ExpectedTables {
    static TABLES: OnceLock<ExpectedTables> = OnceLock::new();
    TABLES.get_or_init(|| serde_json::from_str(RAW).expect("embedded tables parse"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        let t = expected();
        assert_eq!(t.table1.len(), 5);
        assert_eq!(t.table2.rows.len(), 32);
        assert_eq!(t.table4.rows.len(), 64);
        assert_eq!(t.table3.len(), 4);
        for table in [&t.table2, &t.table4] {
            let mut seen: Vec<DistanceSet> = table.rows.iter().map(BoundRow::distances).collect();
            seen.sort();
            let mut all = DistanceSet::all_subsets(table.n);
            all.sort();
            assert_eq!(seen, all);
            for r in &table.rows {
                assert_eq!(r.expected_product(), r.distances().product());
            }
        }
    }
}
