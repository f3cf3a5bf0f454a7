use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

use super::sweep::SweepConfig;
use super::table::SpectrumTable;

pub const DEFAULT_CROSSING_TOL: f64 = 1e-6;
/// Bracket width at which golden-section refinement stops.
pub const REFINE_ETA_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossingKind {
    Crossing,
    Avoided,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapMinimum {
    /// Grid index of the sampled minimum.
    pub index: usize,
    pub eta: f64,
    pub gap: f64,
    /// Set once the minimum has been located by re-solving between grid points.
    pub refined: bool,
    pub kind: CrossingKind,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapAnalysis {
    pub pair: (usize, usize),
    pub crossing_tol: f64,
    pub etas: Vec<f64>,
    /// `diff_k − diff_j` per row, in units of `ω_ph`.
    pub gaps: Vec<f64>,
    pub minima: Vec<GapMinimum>,
}

impl GapAnalysis {
    pub fn min_gap(&self) -> Option<f64> {
        self.minima.iter().map(|m| m.gap).min_by(f64::total_cmp)
    }

    pub fn has_crossing(&self) -> bool {
        self.minima.iter().any(|m| m.kind == CrossingKind::Crossing)
    }

    fn classify(&mut self) {
        for m in &mut self.minima {
            m.kind = if m.gap < self.crossing_tol { CrossingKind::Crossing } else { CrossingKind::Avoided };
        }
    }
}

/// Interior local minima of `diff_k − diff_j`, located on the grid with a
/// parabolic fit through each sampled minimum and its neighbours.
pub fn gap_analysis(table: &SpectrumTable, pair: (usize, usize), crossing_tol: f64) -> Result<GapAnalysis> {
    let (j, k) = pair;
    if !(j < k && k < table.n_levels) {
        return Err(Error::invalid("level_pair", format!("need j < k < {}, got ({j}, {k})", table.n_levels)));
    }
    let etas = table.etas();
    let gaps: Vec<f64> = table.rows.iter().map(|r| r.differences[k] - r.differences[j]).collect();
    let mut minima = Vec::new();
    for i in 1..gaps.len().saturating_sub(1) {
        if gaps[i] < gaps[i - 1] && gaps[i] <= gaps[i + 1] {
            let (eta, gap) = parabolic_vertex(
                (etas[i - 1], gaps[i - 1]),
                (etas[i], gaps[i]),
                (etas[i + 1], gaps[i + 1]),
            );
            minima.push(GapMinimum { index: i, eta, gap: gap.clamp(0.0, gaps[i]), refined: false, kind: CrossingKind::Avoided });
        }
    }
    let mut analysis = GapAnalysis { pair, crossing_tol, etas, gaps, minima };
    analysis.classify();
    Ok(analysis)
}

fn parabolic_vertex(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> (f64, f64) {
    let d1 = (b.1 - a.1) / (b.0 - a.0);
    let d2 = (c.1 - b.1) / (c.0 - b.0);
    let curvature = (d2 - d1) / (c.0 - a.0);
    if !(curvature > 0.0) {
        return b;
    }
    // p(x) = b.1 + s (x − b.0) + curvature (x − b.0)²
    let s = d1 + curvature * (b.0 - a.0);
    let x = (b.0 - s / (2.0 * curvature)).clamp(a.0, c.0);
    (x, b.1 + s * (x - b.0) + curvature * (x - b.0).powi(2))
}

/// Golden-section minimization of `f` on `[lo, hi]`.
pub fn golden_section(f: impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            (x2, f2) = (x1, f1);
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            (x1, f1) = (x2, f2);
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 <= f2 { (x1, f1) } else { (x2, f2) })
}

/// Re-locates every minimum by solving the model between its neighbouring
/// grid points at the larger of their converged cutoffs.
pub fn refine_minima(analysis: &mut GapAnalysis, table: &SpectrumTable, config: &SweepConfig) -> Result<()> {
    let (j, k) = analysis.pair;
    let refined: Vec<(f64, f64)> = analysis
        .minima
        .par_iter()
        .map(|m| {
            let (lo, hi) = (table.rows[m.index - 1].eta, table.rows[m.index + 1].eta);
            let cutoff = table.rows[m.index - 1..=m.index + 1].iter().map(|r| r.cutoff).max().unwrap_or(1);
            let gap = |eta: f64| -> Result<f64> {
                let d = config.differences_at(eta, cutoff)?;
                Ok(d[k] - d[j])
            };
            golden_section(gap, lo, hi, REFINE_ETA_TOL)
        })
        .collect::<Result<_>>()?;
    for (m, (eta, gap)) in analysis.minima.iter_mut().zip(refined) {
        m.eta = eta;
        m.gap = gap;
        m.refined = true;
    }
    analysis.classify();
    Ok(())
}

/// Gap analysis of every adjacent pair `(j, j+1)`, `1 ≤ j`, optionally refined.
pub fn adjacent_excited_gaps(
    table: &SpectrumTable,
    config: Option<&SweepConfig>,
    crossing_tol: f64,
) -> Result<Vec<GapAnalysis>> {
    (1..table.n_levels - 1)
        .map(|j| {
            let mut a = gap_analysis(table, (j, j + 1), crossing_tol)?;
            if let Some(c) = config {
                refine_minima(&mut a, table, c)?;
            }
            Ok(a)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::table::SpectrumRow;

    fn table_from(etas: &[f64], levels: impl Fn(f64) -> Vec<f64>) -> SpectrumTable {
        let rows: Vec<SpectrumRow> = etas
            .iter()
            .map(|&eta| SpectrumRow { eta, differences: levels(eta), cutoff: 10, residual: 0.0, converged: true })
            .collect();
        SpectrumTable { n_levels: rows[0].differences.len(), rows }
    }

    #[test]
    fn monotone_table_has_no_minima() {
        let etas: Vec<f64> = (0..20).map(|i| i as f64 * 0.1).collect();
        let t = table_from(&etas, |e| vec![0.0, 1.0 + e, 3.0 + 2.0 * e]);
        assert!(gap_analysis(&t, (1, 2), DEFAULT_CROSSING_TOL).unwrap().minima.is_empty());
    }

    #[test]
    fn parabolic_refinement_is_exact_for_parabolas() {
        let etas: Vec<f64> = (0..21).map(|i| i as f64 * 0.1).collect();
        let t = table_from(&etas, |e| vec![0.0, 1.0, 1.2 + (e - 0.93).powi(2)]);
        let a = gap_analysis(&t, (1, 2), DEFAULT_CROSSING_TOL).unwrap();
        assert_eq!(a.minima.len(), 1);
        assert!((a.minima[0].eta - 0.93).abs() < 1e-12);
        assert!((a.minima[0].gap - 0.2).abs() < 1e-12);
        assert_eq!(a.minima[0].kind, CrossingKind::Avoided);
    }

    #[test]
    fn sampled_zero_is_a_crossing() {
        let etas: Vec<f64> = (0..21).map(|i| i as f64 * 0.1).collect();
        let t = table_from(&etas, |e| {
            let (a, b) = (1.0 + e, 2.0 - e);
            vec![0.0, a.min(b), a.max(b)]
        });
        let a = gap_analysis(&t, (1, 2), DEFAULT_CROSSING_TOL).unwrap();
        assert!(a.has_crossing());
    }

    #[test]
    fn golden_section_finds_kink() {
        let (x, f) = golden_section(|x| Ok((x - 0.3141).abs()), 0.0, 1.0, 1e-10).unwrap();
        assert!((x - 0.3141).abs() < 1e-9 && f < 1e-9);
    }

    #[test]
    fn invalid_pair() {
        let t = table_from(&[0.0, 1.0], |_| vec![0.0, 1.0]);
        assert!(gap_analysis(&t, (1, 1), DEFAULT_CROSSING_TOL).is_err());
        assert!(gap_analysis(&t, (0, 2), DEFAULT_CROSSING_TOL).is_err());
    }
}
