//! Aggregation, block-size selection and comparison metrics.
//!
//! A sweep produces, for every `(map type, dimension)` group, the mean of
//! three metrics at each block size. Selection rescales every metric row
//! onto `[0, range]`, averages the rows of a group, averages the groups and
//! picks the block size with the smallest score.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::EvalError;
use crate::grid::{DimensionClass, MapType};

pub const DEFAULT_RANGE: f64 = 1000.0;

/// Reference maxima for [`performance_calc`].
pub const PERFORMANCE_MAX: MetricTriple = MetricTriple { search_cells: 133_654.33, path_cost: 4500.0, time_s: 20.0 };

/// The shipped reference tables (published sweep, ranked sweep and
/// algorithm comparison) as JSON.
pub const REFERENCE_JSON: &str = include_str!("../fixtures/reference_tables.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    SearchCells,
    PathCost,
    TimeS,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::SearchCells, Metric::PathCost, Metric::TimeS];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::SearchCells => "search_cells",
            Metric::PathCost => "path_cost",
            Metric::TimeS => "time_s",
        }
    }
}

/// Mean search cells, path cost and seconds.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MetricTriple {
    pub search_cells: f64,
    pub path_cost: f64,
    pub time_s: f64,
}

impl MetricTriple {
    pub fn get(&self, metric: Metric) -> f64 {
        match metric {
            Metric::SearchCells => self.search_cells,
            Metric::PathCost => self.path_cost,
            Metric::TimeS => self.time_s,
        }
    }

    /// Component-wise mean; `None` for an empty input.
    pub fn mean<'a>(items: impl IntoIterator<Item = &'a MetricTriple>) -> Option<MetricTriple> {
        let mut sum = MetricTriple::default();
        let mut count = 0usize;
        for t in items {
            sum.search_cells += t.search_cells;
            sum.path_cost += t.path_cost;
            sum.time_s += t.time_s;
            count += 1;
        }
        (count > 0).then(|| {
            let k = count as f64;
            MetricTriple { search_cells: sum.search_cells / k, path_cost: sum.path_cost / k, time_s: sum.time_s / k }
        })
    }
}

/// Min-max rescaling onto `[0, range]`. A constant row maps to zeros.
pub fn range_scale(values: &[f64], range: f64) -> Result<Vec<f64>, EvalError> {
    if values.is_empty() {
        return Err(EvalError::Empty);
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    if span == 0.0 {
        return Ok(vec![0.0; values.len()]);
    }
    Ok(values.iter().map(|v| range * (v - lo) / span).collect())
}

/// Element-wise mean of equal-length rows.
pub fn param_average(rows: &[Vec<f64>]) -> Result<Vec<f64>, EvalError> {
    let first = rows.first().ok_or(EvalError::Empty)?;
    let mut out = vec![0.0; first.len()];
    for row in rows {
        if row.len() != first.len() {
            return Err(EvalError::LengthMismatch(first.len(), row.len()));
        }
        for (acc, v) in out.iter_mut().zip(row) {
            *acc += v;
        }
    }
    let k = rows.len() as f64;
    out.iter_mut().for_each(|v| *v /= k);
    Ok(out)
}

/// Index of the smallest value, first one on ties.
fn argmin(values: &[f64]) -> usize {
    values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |(bi, bv), (i, &v)| if v < bv { (i, v) } else { (bi, bv) })
        .0
}

/// Averages the group score rows and returns the 1-based position of the
/// minimum. Ties go to the smaller position.
pub fn optimal_rmb(group_averages: &[Vec<f64>]) -> Result<usize, EvalError> {
    let overall = param_average(group_averages)?;
    if overall.is_empty() {
        return Err(EvalError::Empty);
    }
    Ok(argmin(&overall) + 1)
}

/// Percentage reduction of `sum(candidate)` relative to `sum(baseline)`.
pub fn impact_evaluation(baseline: &[f64], candidate: &[f64]) -> Result<f64, EvalError> {
    if baseline.is_empty() {
        return Err(EvalError::Empty);
    }
    if baseline.len() != candidate.len() {
        return Err(EvalError::LengthMismatch(baseline.len(), candidate.len()));
    }
    let x: f64 = baseline.iter().sum();
    if x == 0.0 {
        return Err(EvalError::ZeroBaseline);
    }
    let y: f64 = candidate.iter().sum();
    Ok((x - y) / x * 100.0)
}

/// Mean of `values` as a percentage of `max`.
pub fn performance_calc(values: &[f64], max: f64) -> Result<f64, EvalError> {
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(max > 0.0) {
        return Err(EvalError::NonPositiveMax(max));
    }
    if values.is_empty() {
        return Err(EvalError::Empty);
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64 / max * 100.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupKey {
    pub map_type: MapType,
    pub dimension: DimensionClass,
}

impl std::fmt::Display for GroupKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.map_type, self.dimension)
    }
}

/// Per-group metric means indexed by block size.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SweepTable {
    pub n_values: Vec<u32>,
    pub groups: BTreeMap<GroupKey, BTreeMap<u32, MetricTriple>>,
}

impl SweepTable {
    pub fn new(n_values: Vec<u32>) -> Self {
        Self { n_values, groups: BTreeMap::new() }
    }

    pub fn insert(&mut self, key: GroupKey, n: u32, value: MetricTriple) {
        self.groups.entry(key).or_default().insert(n, value);
    }

    /// One metric across `n_values` for a group, or the first missing n.
    pub fn row(&self, key: GroupKey, metric: Metric) -> Result<Vec<f64>, EvalError> {
        let by_n = self.groups.get(&key);
        self.n_values
            .iter()
            .map(|&n| {
                by_n.and_then(|m| m.get(&n))
                    .map(|t| t.get(metric))
                    .ok_or_else(|| EvalError::Incomplete { group: key.to_string(), n })
            })
            .collect()
    }

    /// Groups that have every n in `n_values`.
    pub fn complete_groups(&self) -> Vec<GroupKey> {
        self.groups
            .iter()
            .filter(|(_, m)| self.n_values.iter().all(|n| m.contains_key(n)))
            .map(|(k, _)| *k)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangedGroup {
    pub key: GroupKey,
    pub search_cells: Vec<f64>,
    pub path_cost: Vec<f64>,
    pub time_s: Vec<f64>,
    pub average: Vec<f64>,
    /// Block size minimising this group's average.
    pub best_n: u32,
}

impl RangedGroup {
    pub fn row(&self, metric: Metric) -> &[f64] {
        match metric {
            Metric::SearchCells => &self.search_cells,
            Metric::PathCost => &self.path_cost,
            Metric::TimeS => &self.time_s,
        }
    }
}

/// Rescaled sweep with the selected block size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangedTable {
    pub range: f64,
    pub n_values: Vec<u32>,
    pub groups: Vec<RangedGroup>,
    /// Mean of every group's average row.
    pub overall: Vec<f64>,
    pub optimal_n: u32,
    /// Groups left out because some n was missing.
    pub excluded: Vec<GroupKey>,
}

impl RangedTable {
    /// Groups whose own minimum disagrees with the global choice.
    pub fn dissenting(&self) -> impl Iterator<Item = &RangedGroup> {
        self.groups.iter().filter(move |g| g.best_n != self.optimal_n)
    }
}

pub fn rank_group(table: &SweepTable, key: GroupKey, range: f64) -> Result<RangedGroup, EvalError> {
    let scaled = Metric::ALL
        .iter()
        .map(|&m| range_scale(&table.row(key, m)?, range))
        .collect::<Result<Vec<_>, _>>()?;
    let average = param_average(&scaled)?;
    let best_n = table.n_values[argmin(&average)];
    let mut it = scaled.into_iter();
    Ok(RangedGroup {
        key,
        search_cells: it.next().unwrap_or_default(),
        path_cost: it.next().unwrap_or_default(),
        time_s: it.next().unwrap_or_default(),
        average,
        best_n,
    })
}

/// Ranks every complete group and selects the block size. Incomplete groups
/// are listed in `excluded`; an error is returned if none are complete.
pub fn select(table: &SweepTable, range: f64) -> Result<RangedTable, EvalError> {
    let complete = table.complete_groups();
    if complete.is_empty() {
        let key = table.groups.keys().next().ok_or(EvalError::Empty)?;
        // report the first hole
        table.row(*key, Metric::SearchCells)?;
        return Err(EvalError::Empty);
    }
    let excluded = table.groups.keys().filter(|k| !complete.contains(k)).copied().collect();
    let groups = complete.iter().map(|&k| rank_group(table, k, range)).collect::<Result<Vec<_>, _>>()?;
    let averages: Vec<Vec<f64>> = groups.iter().map(|g| g.average.clone()).collect();
    let overall = param_average(&averages)?;
    let optimal_n = table.n_values[optimal_rmb(&averages)? - 1];
    Ok(RangedTable { range, n_values: table.n_values.clone(), groups, overall, optimal_n, excluded })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceSweepGroup {
    pub map_type: MapType,
    pub dimension: DimensionClass,
    pub search_cells: Vec<f64>,
    pub path_cost: Vec<f64>,
    pub time_s: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceRankedGroup {
    pub map_type: MapType,
    pub dimension: DimensionClass,
    pub search_cells: Vec<f64>,
    pub path_cost: Vec<f64>,
    pub time_s: Vec<f64>,
    pub average: Vec<f64>,
    /// Rows known to be misprinted in the source table.
    #[serde(default)]
    pub anomalous: Vec<Metric>,
}

impl ReferenceRankedGroup {
    pub fn row(&self, metric: Metric) -> &[f64] {
        match metric {
            Metric::SearchCells => &self.search_cells,
            Metric::PathCost => &self.path_cost,
            Metric::TimeS => &self.time_s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceComparison {
    pub algorithm: String,
    pub per_dimension: BTreeMap<DimensionClass, MetricTriple>,
    pub average: MetricTriple,
}

impl ReferenceComparison {
    /// Values of one metric in prepared-dimension order.
    pub fn per_dimension_values(&self, metric: Metric) -> Vec<f64> {
        DimensionClass::PREPARED
            .iter()
            .filter_map(|d| self.per_dimension.get(d))
            .map(|t| t.get(metric))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceN1 {
    pub astar: MetricTriple,
    pub rmb_astar_n1: MetricTriple,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceImpactN3 {
    pub search_cells: f64,
    pub time_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceExpected {
    pub optimal_n: u32,
    pub impact_n3: ReferenceImpactN3,
    pub impact_n1: MetricTriple,
}

/// Published reference numbers used to check the selection and comparison
/// pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceTables {
    pub n_values: Vec<u32>,
    pub range: f64,
    pub sweep: Vec<ReferenceSweepGroup>,
    pub ranged: Vec<ReferenceRankedGroup>,
    pub comparison: Vec<ReferenceComparison>,
    pub n1_comparison: ReferenceN1,
    pub performance_max: MetricTriple,
    pub expected: ReferenceExpected,
}

impl ReferenceTables {
    pub fn builtin() -> Self {
        serde_json::from_str(REFERENCE_JSON).expect("shipped reference tables parse")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn sweep_table(&self) -> SweepTable {
        let mut table = SweepTable::new(self.n_values.clone());
        for g in &self.sweep {
            let key = GroupKey { map_type: g.map_type, dimension: g.dimension };
            for (i, &n) in self.n_values.iter().enumerate() {
                let t = MetricTriple { search_cells: g.search_cells[i], path_cost: g.path_cost[i], time_s: g.time_s[i] };
                table.insert(key, n, t);
            }
        }
        table
    }

    pub fn comparison_for(&self, algorithm: &str) -> Option<&ReferenceComparison> {
        self.comparison.iter().find(|c| c.algorithm == algorithm)
    }
}

/// One out-of-tolerance cell from [`check_ranked`].
#[derive(Debug, Clone, PartialEq)]
pub struct RankedMismatch {
    pub key: GroupKey,
    /// `None` for the average row.
    pub metric: Option<Metric>,
    pub n: u32,
    pub expected: f64,
    pub actual: f64,
}

/// Compares a computed [`RangedTable`] against reference ranked rows,
/// skipping rows flagged as anomalous.
pub fn check_ranked(
    computed: &RangedTable,
    reference: &[ReferenceRankedGroup],
    tolerance: f64,
) -> Vec<RankedMismatch> {
    let mut out = Vec::new();
    for r in reference {
        let key = GroupKey { map_type: r.map_type, dimension: r.dimension };
        let Some(g) = computed.groups.iter().find(|g| g.key == key) else {
            continue;
        };
        let rows = Metric::ALL
            .iter()
            .filter(|m| !r.anomalous.contains(m))
            .map(|&m| (Some(m), g.row(m), r.row(m)))
            .chain(std::iter::once((None, g.average.as_slice(), r.average.as_slice())));
        for (metric, actual, expected) in rows {
            for ((&a, &e), &n) in actual.iter().zip(expected).zip(&computed.n_values) {
                if (a - e).abs() > tolerance {
                    out.push(RankedMismatch { key, metric, n, expected: e, actual: a });
                }
            }
        }
    }
    out
}
