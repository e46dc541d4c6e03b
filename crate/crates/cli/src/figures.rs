//! Caption parameters for the nine figures.

use qutrit_core::DEFAULT_ETAS;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FigureKind {
    /// One time series per η in the default set.
    EtaFamily { gamma: f64, alpha: f64 },
    /// Negativity over (α, t) at η = 1.
    AlphaGrid { gamma: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Figure {
    pub number: usize,
    pub kind: FigureKind,
    pub note: Option<&'static str>,
}

const SAME_CAPTION: &str = "figures 1 and 2 are captioned with identical parameters; both files hold the same data";

pub const FIGURES: [Figure; 9] = [
    Figure { number: 1, kind: FigureKind::EtaFamily { gamma: 0.5, alpha: 0.5 }, note: Some(SAME_CAPTION) },
    Figure { number: 2, kind: FigureKind::EtaFamily { gamma: 0.5, alpha: 0.5 }, note: Some(SAME_CAPTION) },
    Figure { number: 3, kind: FigureKind::EtaFamily { gamma: 0.5, alpha: -0.5 }, note: None },
    Figure { number: 4, kind: FigureKind::EtaFamily { gamma: 1.0, alpha: 0.0 }, note: None },
    Figure { number: 5, kind: FigureKind::EtaFamily { gamma: 1.0, alpha: 0.5 }, note: None },
    Figure { number: 6, kind: FigureKind::EtaFamily { gamma: 1.0, alpha: -0.5 }, note: None },
    Figure { number: 7, kind: FigureKind::AlphaGrid { gamma: 1.0 }, note: None },
    Figure { number: 8, kind: FigureKind::AlphaGrid { gamma: 0.5 }, note: None },
    Figure { number: 9, kind: FigureKind::AlphaGrid { gamma: 0.2 }, note: None },
];

pub const GRID_ETA: f64 = 1.0;

/// Table shown under `figures --help`.
pub fn table() -> String {
    let etas: Vec<String> = DEFAULT_ETAS.iter().map(|e| e.to_string()).collect();
    let mut out = String::from("Figure parameters (n, g and the time window come from the flags):\n");
    for f in &FIGURES {
        let line = match f.kind {
            FigureKind::EtaFamily { gamma, alpha } => {
                format!("  fig{}.csv  gamma={gamma}  alpha={alpha}  eta in {{{}}}", f.number, etas.join(", "))
            }
            FigureKind::AlphaGrid { gamma } => {
                format!("  fig{}.csv  gamma={gamma}  alpha grid  eta={GRID_ETA}", f.number)
            }
        };
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str("fig1 and fig2 carry identical caption parameters and identical data.");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_lists_every_figure() {
        let t = table();
        for i in 1..=9 {
            assert!(t.contains(&format!("fig{i}.csv")));
        }
        assert_eq!(FIGURES.iter().map(|f| f.number).collect::<Vec<_>>(), (1..=9).collect::<Vec<_>>());
    }
}
