//! CSV renderings of the economic and Bayesian sweeps.

use crate::bayesian::BayesSweepRow;
use crate::econ::SweepRow;

use super::csv::{join_floats, CsvMeta, CsvTable};

pub fn econ_sweep_csv(rows: &[SweepRow], meta: &CsvMeta) -> CsvTable {
    let mut t = CsvTable::new(
        meta,
        &["kind", "n_actions", "valuations", "potentialness", "n_pure_ne", "n_strict_ne"],
    );
    for r in rows {
        t.row(vec![
            r.kind.name().into(),
            r.n_actions.into(),
            join_floats(&r.valuations).into(),
            r.potentialness.into(),
            r.n_pure_ne.into(),
            r.n_strict_ne.into(),
        ]);
    }
    t
}

pub fn bayesian_sweep_csv(rows: &[BayesSweepRow], meta: &CsvMeta) -> CsvTable {
    let mut t = CsvTable::new(
        meta,
        &["kind", "n_types", "n_strategies", "potentialness", "has_pure_bne"],
    );
    for r in rows {
        t.row(vec![
            r.kind.name().into(),
            r.n_types.into(),
            r.n_strategies.into(),
            r.potentialness.into(),
            r.has_pure_bne.into(),
        ]);
    }
    t
}
