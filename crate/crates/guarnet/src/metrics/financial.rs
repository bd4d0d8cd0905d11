//! Balance-sheet aggregates over the enterprises in one snapshot.

use crate::graph::NetworkSnapshot;

/// Snapshot-level means of the per-enterprise balance-sheet attributes.
///
/// `mean_leverage` is the mean of each enterprise's own liability/asset
/// ratio, not the ratio of the two means; the two differ whenever leverage
/// correlates with size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FinancialAggregates {
    pub mean_asset: f64,
    pub mean_liability: f64,
    pub mean_loan: f64,
    pub mean_credit_line: f64,
    /// Mean of per-enterprise liability/asset.
    pub mean_leverage: f64,
    /// Fraction of enterprises flagged as listed companies.
    pub listed_share: f64,
}

/// Computes the aggregates; an empty snapshot yields all zeros.
pub fn financial_aggregates(snapshot: &NetworkSnapshot) -> FinancialAggregates {
    let n = snapshot.node_count();
    if n == 0 {
        return FinancialAggregates {
            mean_asset: 0.0,
            mean_liability: 0.0,
            mean_loan: 0.0,
            mean_credit_line: 0.0,
            mean_leverage: 0.0,
            listed_share: 0.0,
        };
    }
    let mut asset = 0.0;
    let mut liability = 0.0;
    let mut loan = 0.0;
    let mut credit = 0.0;
    let mut leverage = 0.0;
    let mut listed = 0usize;
    for e in snapshot.enterprises() {
        asset += e.asset;
        liability += e.liability;
        loan += e.loan;
        credit += e.credit_line;
        leverage += e.leverage();
        listed += usize::from(e.listed);
    }
    let n = n as f64;
    FinancialAggregates {
        mean_asset: asset / n,
        mean_liability: liability / n,
        mean_loan: loan / n,
        mean_credit_line: credit / n,
        mean_leverage: leverage / n,
        listed_share: listed as f64 / n,
    }
}
