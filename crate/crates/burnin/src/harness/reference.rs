//! Published values for the reproducible tables, and the comparison of a
//! freshly built artifact against them.
//!
//! Every check carries the printed expectation, the reproduced value, and a
//! tolerance. A small set of cells is `pinned`: those tolerances are the
//! accuracy contract for this crate, and the acceptance suite fails if any
//! pinned cell drifts out. The remaining cells are informational, with loose
//! tolerances meant to flag gross divergence in a diff listing, not to gate.
//!
//! Units follow the printed tables: reactiveness, allocation error, and
//! burn-in proportion on the x100 scale, rejection rates on the x100 scale,
//! allocation share and MSE raw.

use super::tables::{TableArtifact, TableData, TableId};

#[derive(Debug, Clone)]
pub struct ReferenceCheck {
    pub table: &'static str,
    pub cell: String,
    pub expected: f64,
    pub actual: f64,
    pub tol: f64,
    pub pinned: bool,
}

impl ReferenceCheck {
    pub fn pass(&self) -> bool {
        (self.actual - self.expected).abs() <= self.tol
    }
}

/// The pinned checks that failed, i.e. contract violations.
pub fn pinned_failures(checks: &[ReferenceCheck]) -> Vec<&ReferenceCheck> {
    checks.iter().filter(|c| c.pinned && !c.pass()).collect()
}

struct PrintedReact {
    design: &'static str,
    r: f64,
    eps: f64,
    b: Option<f64>,
    bp: Option<f64>,
}

struct PrintedOc {
    design: &'static str,
    burnin: Option<u32>,
    z1: Option<f64>,
    z0: Option<f64>,
    pz1: Option<f64>,
    pz0: Option<f64>,
    prop: f64,
    mse: f64,
}

macro_rules! react {
    ($design:literal, $r:literal, $eps:literal, $b:literal, $bp:literal) => {
        PrintedReact {
            design: $design,
            r: $r,
            eps: $eps,
            b: Some($b),
            bp: Some($bp),
        }
    };
    ($design:literal, $r:literal, $eps:literal) => {
        PrintedReact {
            design: $design,
            r: $r,
            eps: $eps,
            b: None,
            bp: None,
        }
    };
}

const T1_PRINTED: &[(u32, &[PrintedReact])] = &[
    (
        200,
        &[
            react!("er", 0.00, 0.00),
            react!("pbb", 65.77, 0.00, 65.0, 64.94),
            react!("brar-u", 34.25, 0.83, 51.0, 50.13),
            react!("brar-t", 9.72, 0.36, 30.0, 29.55),
            react!("n0", 18.91, 1.53, 37.0, 36.63),
            react!("n1", 13.62, 32.41, 54.0, 53.64),
            react!("r0", 19.48, 1.18, 37.0, 36.37),
            react!("r1", 25.12, 16.97, 54.0, 53.91),
            react!("ptw", 36.15, 1.29, 52.0, 51.88),
            react!("rpw", 25.41, 1.79, 43.0, 42.30),
        ],
    ),
    (
        500,
        &[
            react!("er", 0.00, 0.00),
            react!("pbb", 72.02, 0.00, 137.0, 54.46),
            react!("brar-u", 38.61, 1.07, 109.0, 43.30),
            react!("brar-t", 11.93, 0.12, 63.0, 24.81),
            react!("n0", 23.05, 0.90, 80.0, 31.73),
            react!("n1", 21.01, 33.94, 119.0, 47.58),
            react!("r0", 24.69, 0.85, 82.0, 32.46),
            react!("r1", 33.84, 17.38, 118.0, 46.92),
            react!("ptw", 38.76, 0.85, 109.0, 43.42),
            react!("rpw", 26.74, 1.25, 91.0, 36.13),
        ],
    ),
    (
        1000,
        &[
            react!("er", 0.00, 0.00),
            react!("pbb", 75.50, 0.00, 210.0, 41.93),
            react!("brar-u", 43.92, 0.60, 170.0, 33.88),
            react!("brar-t", 13.23, 0.10, 102.0, 20.38),
            react!("n0", 26.03, 0.57, 128.0, 25.48),
            react!("n1", 28.11, 34.54, 192.0, 38.21),
            react!("r0", 29.64, 0.62, 135.0, 26.98),
            react!("r1", 37.76, 18.41, 188.0, 37.42),
            react!("ptw", 40.25, 0.58, 165.0, 32.80),
            react!("rpw", 30.39, 0.85, 138.0, 27.59),
        ],
    ),
    (
        2000,
        &[
            react!("er", 0.00, 0.00),
            react!("pbb", 78.24, 0.00, 288.0, 28.72),
            react!("brar-u", 45.72, 0.51, 235.0, 23.45),
            react!("brar-t", 15.46, 0.09, 144.0, 14.31),
            react!("n0", 28.98, 0.40, 177.0, 17.62),
            react!("n1", 34.87, 34.35, 274.0, 27.36),
            react!("r0", 31.65, 0.39, 186.0, 18.51),
            react!("r1", 42.11, 17.84, 258.0, 25.73),
            react!("ptw", 41.76, 0.39, 221.0, 22.10),
            react!("rpw", 31.05, 0.69, 190.0, 18.91),
        ],
    ),
];

const T2_ARREST_PRINTED: &[PrintedReact] = &[
    react!("er", 0.00, 0.00),
    react!("pbb", 57.60, 0.00, 32.0, 72.66),
    react!("brar-u", 22.19, 0.16, 20.0, 46.40),
    react!("brar-t", 6.62, 0.06, 12.0, 27.12),
    react!("n0", 27.94, 2.05, 23.0, 52.63),
    react!("n1", 4.83, 32.86, 26.0, 59.02),
    react!("r0", 19.65, 1.76, 20.0, 45.61),
    react!("r1", 13.66, 29.06, 27.0, 62.27),
    react!("ptw", 31.95, 0.96, 24.0, 54.64),
    react!("rpw", 18.82, 1.44, 18.0, 41.70),
];

const T2_CALISTO_PRINTED: &[PrintedReact] = &[
    react!("er", 0.00, 0.00),
    react!("pbb", 70.03, 0.00, 124.0, 68.55),
    react!("brar-u", 25.64, 0.51, 98.0, 54.09),
    react!("brar-t", 4.13, 0.02, 69.0, 37.87),
    react!("n0", 22.00, 4.11, 98.0, 54.38),
    react!("n1", 24.83, 27.04, 116.0, 63.95),
    react!("r0", 7.26, 0.21, 61.0, 33.44),
    react!("r1", 7.42, 0.21, 67.0, 36.84),
    react!("ptw", 35.10, 2.77, 106.0, 58.80),
    react!("rpw", 7.56, 5.66, 79.0, 43.76),
];

macro_rules! oc {
    ($design:literal, $b:expr, $z1:expr, $z0:expr, $pz1:expr, $pz0:expr, $prop:literal, $mse:literal) => {
        PrintedOc {
            design: $design,
            burnin: $b,
            z1: $z1,
            z0: $z0,
            pz1: $pz1,
            pz0: $pz0,
            prop: $prop,
            mse: $mse,
        }
    };
}

#[rustfmt::skip]
const T3_PRINTED: &[PrintedOc] = &[
    oc!("er", None, Some(5.93), Some(5.93), Some(80.88), Some(79.94), 0.500, 0.0078),
    oc!("pbb", Some(2), Some(78.24), Some(5.83), Some(78.47), Some(0.42), 0.977, 0.0591),
    oc!("pbb", Some(32), Some(6.66), Some(4.17), Some(79.56), Some(74.34), 0.628, 0.0078),
    oc!("pbb", Some(29), Some(4.82), Some(7.06), Some(71.86), Some(79.71), 0.663, 0.0078),
    oc!("brar-u", Some(2), Some(20.86), Some(0.64), Some(74.82), Some(40.71), 0.835, 0.0113),
    oc!("brar-u", Some(20), Some(13.83), Some(2.70), Some(77.97), Some(66.21), 0.735, 0.0079),
    oc!("brar-u", Some(29), Some(4.38), Some(9.90), Some(73.80), Some(80.14), 0.649, 0.0078),
    oc!("brar-t", Some(2), Some(9.95), Some(4.10), Some(80.78), Some(74.03), 0.691, 0.0081),
    oc!("brar-t", Some(12), Some(9.19), Some(4.21), Some(80.31), Some(73.79), 0.685, 0.0080),
    oc!("brar-t", Some(29), Some(4.40), Some(7.67), Some(76.38), Some(80.65), 0.615, 0.0079),
    oc!("n0", Some(2), None, Some(5.94), None, Some(79.52), 0.393, 0.0090),
    oc!("n0", Some(23), None, Some(5.52), None, Some(79.15), 0.399, 0.0091),
    oc!("n0", Some(29), None, Some(3.59), None, Some(78.27), 0.415, 0.0087),
    oc!("n1", Some(2), Some(89.80), None, Some(94.79), None, 0.714, 0.0530),
    oc!("n1", Some(26), Some(12.16), None, Some(81.86), None, 0.591, 0.0077),
    oc!("n1", Some(29), Some(4.96), None, Some(79.04), None, 0.581, 0.0077),
    oc!("r0", Some(2), None, Some(5.50), None, Some(77.74), 0.442, 0.0082),
    oc!("r0", Some(20), None, Some(5.75), None, Some(79.07), 0.442, 0.0080),
    oc!("r0", Some(29), None, Some(3.93), None, Some(79.25), 0.446, 0.0078),
    oc!("r1", Some(2), Some(89.65), None, Some(94.84), None, 0.753, 0.0347),
    oc!("r1", Some(27), Some(11.37), None, Some(82.07), None, 0.609, 0.0075),
    oc!("r1", Some(29), Some(5.36), None, Some(78.42), None, 0.598, 0.0077),
    oc!("ptw", Some(2), Some(5.12), Some(4.51), Some(81.01), Some(78.84), 0.578, 0.0075),
    oc!("ptw", Some(24), Some(5.61), Some(4.41), Some(81.38), Some(79.12), 0.536, 0.0076),
    oc!("ptw", Some(29), Some(4.60), Some(5.87), Some(79.23), Some(81.65), 0.526, 0.0075),
    oc!("rpw", Some(2), Some(6.05), Some(4.42), Some(80.26), Some(76.87), 0.578, 0.0077),
    oc!("rpw", Some(18), Some(5.84), Some(4.52), Some(81.18), Some(78.45), 0.559, 0.0077),
    oc!("rpw", Some(29), Some(4.80), Some(5.66), Some(79.08), Some(81.42), 0.536, 0.0077),
];

#[rustfmt::skip]
const T4_PRINTED: &[PrintedOc] = &[
    oc!("er", None, Some(4.91), Some(4.90), Some(79.53), Some(79.53), 0.500, 0.0004),
    oc!("pbb", Some(2), Some(88.58), Some(11.74), Some(35.58), Some(12.15), 0.994, 0.0289),
    oc!("pbb", Some(124), Some(5.45), Some(4.71), Some(71.10), Some(81.57), 0.656, 0.0005),
    oc!("pbb", Some(120), Some(4.79), Some(5.24), Some(79.57), Some(67.91), 0.667, 0.0005),
    oc!("brar-u", Some(2), Some(2.62), Some(16.94), Some(5.13), Some(76.12), 0.881, 0.0176),
    oc!("brar-u", Some(98), Some(2.93), Some(6.55), Some(56.24), Some(80.63), 0.708, 0.0005),
    oc!("brar-u", Some(120), Some(5.94), Some(3.07), Some(82.80), Some(71.10), 0.655, 0.0005),
    oc!("brar-t", Some(2), Some(3.38), Some(6.39), Some(63.66), Some(81.21), 0.701, 0.0007),
    oc!("brar-t", Some(69), Some(3.31), Some(6.02), Some(67.31), Some(81.89), 0.681, 0.0006),
    oc!("brar-t", Some(120), Some(5.29), Some(3.70), Some(82.12), Some(73.15), 0.620, 0.0005),
    oc!("n0", Some(2), None, Some(5.25), None, Some(79.97), 0.723, 0.0016),
    oc!("n0", Some(98), None, Some(5.17), None, Some(79.86), 0.663, 0.0005),
    oc!("n0", Some(120), None, Some(3.51), None, Some(70.65), 0.624, 0.0004),
    oc!("n1", Some(2), Some(96.23), None, Some(94.17), None, 0.158, 0.0009),
    oc!("n1", Some(116), Some(7.92), None, Some(83.94), None, 0.363, 0.0003),
    oc!("n1", Some(120), Some(4.80), None, Some(75.50), None, 0.371, 0.0003),
    oc!("r0", Some(2), None, Some(5.75), None, Some(81.37), 0.672, 0.0007),
    oc!("r0", Some(61), None, Some(6.32), None, Some(81.39), 0.661, 0.0005),
    oc!("r0", Some(120), None, Some(3.48), None, Some(71.09), 0.599, 0.0004),
    oc!("r1", Some(2), Some(5.65), None, Some(78.79), None, 0.506, 0.0024),
    oc!("r1", Some(67), Some(5.28), None, Some(79.05), None, 0.505, 0.0004),
    oc!("r1", Some(120), Some(4.94), None, Some(79.45), None, 0.505, 0.0004),
    oc!("ptw", Some(2), Some(2.72), Some(6.12), Some(9.56), Some(74.53), 0.847, 0.0049),
    oc!("ptw", Some(106), Some(4.23), Some(5.52), Some(69.23), Some(80.31), 0.636, 0.0005),
    oc!("ptw", Some(120), Some(5.40), Some(4.41), Some(80.30), Some(72.88), 0.607, 0.0004),
    oc!("rpw", Some(2), Some(4.85), Some(5.43), Some(67.77), Some(75.95), 0.582, 0.0006),
    oc!("rpw", Some(79), Some(5.07), Some(5.24), Some(79.39), Some(80.12), 0.519, 0.0004),
    oc!("rpw", Some(120), Some(5.28), Some(5.38), Some(79.97), Some(79.45), 0.510, 0.0004),
];

/// Designs whose published burn-in recommendation the reproduction must hit
/// to within 25%. The two score-variant targets run on a provisional formula
/// and stay informational.
const B_PINNED_DESIGNS: &[&str] = &["pbb", "brar-u", "brar-t", "n1", "r1", "ptw", "rpw"];

/// Compare a built artifact against the printed values. Figure data has no
/// printed numbers and returns no checks.
pub fn compare(artifact: &TableArtifact) -> Vec<ReferenceCheck> {
    let mut checks = Vec::new();
    match (&artifact.id, &artifact.data) {
        (TableId::T1, TableData::Reactiveness(rows)) => {
            for row in rows {
                let Some(printed) = T1_PRINTED
                    .iter()
                    .find(|(n, _)| *n == row.n)
                    .and_then(|(_, block)| block.iter().find(|p| p.design == row.report.design))
                else {
                    continue;
                };
                let pinned_r =
                    row.report.design == "pbb" || (row.report.design == "brar-u" && row.n == 200);
                let r_tol = match row.report.design.as_str() {
                    "pbb" => 0.5,
                    "brar-u" if row.n == 200 => 3.5,
                    _ => 6.0,
                };
                push_react(
                    &mut checks,
                    "t1",
                    &format!("n={} {}", row.n, printed.design),
                    printed,
                    row,
                    pinned_r,
                    r_tol,
                    false,
                );
            }
        }
        (TableId::T2Arrest, TableData::Reactiveness(rows))
        | (TableId::T2Calisto, TableData::Reactiveness(rows)) => {
            let (name, printed_rows): (&'static str, &[PrintedReact]) =
                if artifact.id == TableId::T2Arrest {
                    ("t2-arrest", T2_ARREST_PRINTED)
                } else {
                    ("t2-calisto", T2_CALISTO_PRINTED)
                };
            for row in rows {
                let Some(printed) = printed_rows.iter().find(|p| p.design == row.report.design)
                else {
                    continue;
                };
                let pin_b = B_PINNED_DESIGNS.contains(&printed.design);
                push_react(
                    &mut checks,
                    name,
                    printed.design,
                    printed,
                    row,
                    false,
                    6.0,
                    pin_b,
                );
            }
        }
        (TableId::T3, TableData::Operating(rows)) => {
            push_oc_table(&mut checks, "t3", T3_PRINTED, rows, 0.001);
        }
        (TableId::T4, TableData::Operating(rows)) => {
            push_oc_table(&mut checks, "t4", T4_PRINTED, rows, 0.0002);
        }
        _ => {}
    }
    checks
}

#[allow(clippy::too_many_arguments)]
fn push_react(
    checks: &mut Vec<ReferenceCheck>,
    table: &'static str,
    cell: &str,
    printed: &PrintedReact,
    row: &super::tables::ReactRow,
    pinned_r: bool,
    r_tol: f64,
    pinned_b: bool,
) {
    let report = &row.report;
    checks.push(ReferenceCheck {
        table,
        cell: format!("{cell} r"),
        expected: printed.r,
        actual: report.r * 100.0,
        tol: r_tol,
        pinned: pinned_r,
    });
    checks.push(ReferenceCheck {
        table,
        cell: format!("{cell} eps"),
        expected: printed.eps,
        actual: report.eps_rho * 100.0,
        tol: 6.0,
        pinned: false,
    });
    if let Some(b) = printed.b {
        checks.push(ReferenceCheck {
            table,
            cell: format!("{cell} b"),
            expected: b,
            actual: f64::from(report.b),
            tol: 0.25 * b,
            pinned: pinned_b,
        });
    }
    if let Some(bp) = printed.bp {
        checks.push(ReferenceCheck {
            table,
            cell: format!("{cell} BP"),
            expected: bp,
            actual: report.bp * 100.0,
            tol: 0.25 * bp.max(1.0),
            pinned: false,
        });
    }
}

fn push_oc_table(
    checks: &mut Vec<ReferenceCheck>,
    table: &'static str,
    printed_rows: &[PrintedOc],
    rows: &[super::tables::OcRow],
    mse_pin_tol: f64,
) {
    // Rows pair up by position: the printed layout and the reproduction both
    // run baseline first, then each design under the same three policies.
    // The formula burn-in itself may differ by a few patients; its cells are
    // still comparable and the difference shows up in the b check.
    for (printed, row) in printed_rows.iter().zip(rows) {
        if printed.design != row.design {
            continue;
        }
        let cell = |metric: &str| match printed.burnin {
            Some(b) => format!("{} b={} {}", printed.design, b, metric),
            None => format!("{} {}", printed.design, metric),
        };
        let er = printed.burnin.is_none();
        if let Some(expected) = printed.z1 {
            checks.push(ReferenceCheck {
                table,
                cell: cell("type1_z1"),
                expected,
                actual: row.oc.type1_z1 * 100.0,
                tol: if er { 1.0 } else { 3.0 },
                pinned: er,
            });
        }
        if let Some(expected) = printed.z0 {
            checks.push(ReferenceCheck {
                table,
                cell: cell("type1_z0"),
                expected,
                actual: row.oc.type1_z0 * 100.0,
                tol: 3.0,
                pinned: false,
            });
        }
        if let Some(expected) = printed.pz1 {
            checks.push(ReferenceCheck {
                table,
                cell: cell("power_z1"),
                expected,
                actual: row.oc.power_z1 * 100.0,
                tol: if er { 1.5 } else { 4.0 },
                pinned: er,
            });
        }
        if let Some(expected) = printed.pz0 {
            checks.push(ReferenceCheck {
                table,
                cell: cell("power_z0"),
                expected,
                actual: row.oc.power_z0 * 100.0,
                tol: 4.0,
                pinned: false,
            });
        }
        checks.push(ReferenceCheck {
            table,
            cell: cell("prop_arm1"),
            expected: printed.prop,
            actual: row.oc.mean_prop_arm1,
            tol: 0.05,
            pinned: false,
        });
        checks.push(ReferenceCheck {
            table,
            cell: cell("mse"),
            expected: printed.mse,
            actual: row.oc.mse,
            tol: if er {
                mse_pin_tol
            } else {
                (0.5 * printed.mse).max(3.0 * mse_pin_tol)
            },
            pinned: er,
        });
        if let (Some(b_printed), Some(b_actual)) = (printed.burnin, row.display_b) {
            if row.option == Some(super::BurninOption::Formula) {
                checks.push(ReferenceCheck {
                    table,
                    cell: format!("{} formula b", printed.design),
                    expected: f64::from(b_printed),
                    actual: f64::from(b_actual),
                    tol: 0.25 * f64::from(b_printed),
                    pinned: false,
                });
            }
        }
    }
}
