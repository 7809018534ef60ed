//! Reference tables of relative measures for GHZ, W, cluster and magnon
//! states, with analytic, published and numerical values side by side.

use clap::ValueEnum;
use geoment_core::closed_form::{
    ghz_egk, magnon2_bisep, w_bisep, w_full_separable, w_ksep_reduced, w_trisep, ClosedFormValue,
};
use geoment_core::hierarchy::{egk_shape, HierarchyConfig};
use geoment_core::state::{cluster4, ghz, magnon, w};
use geoment_core::{PureState, Result, Shape};

use crate::output::{fmt_opt, fmt_sig};

/// Tolerance for values published as exact rationals.
pub const EXACT_TOL: f64 = 1e-7;
/// Tolerance for values published to three decimals.
pub const DECIMAL_TOL: f64 = 5e-4;
/// Agreement required between numerics and a numerically evaluated formula.
pub const REDUCED_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableId {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    II,
    #[value(name = "III")]
    III,
    #[value(name = "IV")]
    IV,
    #[value(name = "V")]
    V,
}

impl TableId {
    pub const ALL: [TableId; 5] = [TableId::I, TableId::II, TableId::III, TableId::IV, TableId::V];

    pub fn label(&self) -> &'static str {
        match self {
            TableId::I => "I",
            TableId::II => "II",
            TableId::III => "III",
            TableId::IV => "IV",
            TableId::V => "V",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    Ghz,
    W,
    Cluster,
    Magnon2,
}

/// Published value as printed: either `p/q` or a three-decimal number.
#[derive(Debug, Clone, PartialEq)]
pub struct Published {
    pub text: &'static str,
    pub value: f64,
    pub exact: bool,
}

impl Published {
    fn parse(text: &'static str) -> Self {
        match text.split_once('/') {
            Some((p, q)) => Self {
                text,
                value: p.parse::<f64>().unwrap() / q.parse::<f64>().unwrap(),
                exact: true,
            },
            None => Self {
                text,
                value: text.parse().unwrap(),
                exact: false,
            },
        }
    }

    pub fn tolerance(&self) -> f64 {
        if self.exact {
            EXACT_TOL
        } else {
            DECIMAL_TOL
        }
    }
}

#[derive(Debug, Clone)]
pub struct TableRow {
    pub table: TableId,
    pub state: &'static str,
    pub shape: Shape,
    pub published: Published,
    pub closed_form: Option<ClosedFormValue>,
    pub numeric: f64,
    pub argmin: Vec<String>,
}

impl TableRow {
    pub fn k(&self) -> usize {
        self.shape.num_blocks()
    }

    pub fn diff_published(&self) -> f64 {
        (self.numeric - self.published.value).abs()
    }

    pub fn diff_closed_form(&self) -> Option<f64> {
        self.closed_form.as_ref().map(|c| (self.numeric - c.e_g).abs())
    }

    /// `p/q` of the analytic value, falling back to the published fraction.
    pub fn exact_str(&self) -> Option<String> {
        self.closed_form
            .as_ref()
            .and_then(ClosedFormValue::exact_str)
            .or_else(|| self.published.exact.then(|| self.published.text.to_string()))
    }

    /// Analytic fraction equal to the published one, when both are exact.
    pub fn exact_agrees(&self) -> Option<bool> {
        let exact = self.closed_form.as_ref()?.exact.as_ref()?;
        if !self.published.exact {
            return None;
        }
        let (p, q) = self.published.text.split_once('/')?;
        let published = num_rational::BigRational::new(p.parse().ok()?, q.parse().ok()?);
        Some(&published == exact)
    }

    /// Numerics against the published value and against any formula, using
    /// `tol` in place of the default tolerances when given.
    pub fn passes(&self, tol: Option<f64>) -> bool {
        let published_ok = self.diff_published() <= tol.unwrap_or(self.published.tolerance());
        let closed_ok = self
            .diff_closed_form()
            .map_or(true, |d| d <= tol.unwrap_or(REDUCED_TOL));
        published_ok && closed_ok && self.exact_agrees().unwrap_or(true)
    }
}

fn spec(table: TableId) -> Vec<(&'static str, Family, &'static str, &'static str)> {
    use Family::*;
    match table {
        TableId::I => vec![
            ("ghz4", Ghz, "1|1|1|1", "1/2"),
            ("ghz4", Ghz, "1|1|2", "1/2"),
            ("ghz4", Ghz, "2|2", "1/2"),
            ("ghz4", Ghz, "1|3", "1/2"),
            ("w4", W, "1|1|1|1", "37/64"),
            ("w4", W, "1|1|2", "1/2"),
            ("w4", W, "2|2", "1/2"),
            ("w4", W, "1|3", "1/4"),
        ],
        TableId::II => vec![
            ("w5", W, "1|1|1|1|1", "0.590"),
            ("w5", W, "1|1|1|2", "0.559"),
            ("w5", W, "1|2|2", "19/35"),
            ("w5", W, "1|1|3", "2/5"),
            ("w5", W, "2|3", "2/5"),
            ("w5", W, "1|4", "1/5"),
        ],
        TableId::III => vec![
            ("w6", W, "1|1|1|1|1|1", "0.598"),
            ("w6", W, "1|1|1|1|2", "0.580"),
            ("w6", W, "1|1|2|2", "0.567"),
            ("w6", W, "2|2|2", "5/9"),
            ("w6", W, "1|1|1|3", "1/2"),
            ("w6", W, "1|2|3", "1/2"),
            ("w6", W, "3|3", "1/2"),
            ("w6", W, "1|1|4", "1/3"),
            ("w6", W, "2|4", "1/3"),
            ("w6", W, "1|5", "1/6"),
        ],
        TableId::IV => vec![
            ("cluster4", Cluster, "1|1|1|1", "3/4"),
            ("cluster4", Cluster, "1|1|2", "1/2"),
            ("cluster4", Cluster, "2|2", "1/2"),
            ("cluster4", Cluster, "1|3", "1/2"),
        ],
        TableId::V => vec![
            ("magnon4_2", Magnon2, "1|1|1|1", "0.625"),
            ("magnon4_2", Magnon2, "1|1|2", "0.583"),
            ("magnon4_2", Magnon2, "2|2", "1/3"),
            ("magnon4_2", Magnon2, "1|3", "1/2"),
        ],
    }
}

fn build(family: Family, n: usize) -> Result<PureState> {
    match family {
        Family::Ghz => ghz(n),
        Family::W => w(n),
        Family::Cluster => Ok(cluster4()),
        Family::Magnon2 => magnon(n, 2),
    }
}

/// Analytic value of the relative measure for the shape, when one exists.
pub fn w_closed_form(shape: &Shape) -> Result<ClosedFormValue> {
    let s = shape.sizes();
    let n = shape.num_qubits();
    match s.len() {
        k if k == n => w_full_separable(n),
        2 => w_bisep(s[0], n),
        3 => w_trisep(s[0], s[1], s[2]),
        _ => Ok(w_ksep_reduced(shape)),
    }
}

fn closed_form(family: Family, shape: &Shape) -> Result<Option<ClosedFormValue>> {
    let n = shape.num_qubits();
    Ok(match family {
        Family::Ghz => Some(ghz_egk(n, shape.num_blocks())?),
        Family::W => Some(w_closed_form(shape)?),
        Family::Magnon2 if shape.num_blocks() == 2 => Some(magnon2_bisep(shape.sizes()[0], n)?),
        _ => None,
    })
}

pub fn compute(table: TableId, config: &HierarchyConfig) -> Result<Vec<TableRow>> {
    spec(table)
        .into_iter()
        .map(|(state, family, shape, published)| {
            let shape: Shape = shape.parse()?;
            let psi = build(family, shape.num_qubits())?;
            let scan = egk_shape(&psi, &shape, config)?;
            Ok(TableRow {
                table,
                state,
                closed_form: closed_form(family, &shape)?,
                published: Published::parse(published),
                numeric: scan.absolute_e,
                argmin: scan.argmin_labels(),
                shape,
            })
        })
        .collect()
}

pub const HEADER: [&str; 11] = [
    "table",
    "state",
    "k",
    "shape",
    "published",
    "closed_form",
    "exact",
    "numeric",
    "abs_diff",
    "formula",
    "argmin_partitions",
];

pub fn csv_rows(rows: &[TableRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            let diff = r.diff_closed_form().unwrap_or_else(|| r.diff_published());
            vec![
                r.table.label().to_string(),
                r.state.to_string(),
                r.k().to_string(),
                r.shape.to_string(),
                r.published.text.to_string(),
                fmt_opt(r.closed_form.as_ref().map(|c| c.e_g)),
                r.exact_str().unwrap_or_default(),
                fmt_sig(r.numeric),
                format!("{diff:.3e}"),
                r.closed_form
                    .as_ref()
                    .map(|c| c.formula.tag().to_string())
                    .unwrap_or_else(|| "published".into()),
                r.argmin.join(" "),
            ]
        })
        .collect()
}
