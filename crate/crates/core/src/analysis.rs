//! Clustering evidence for an embedding set: centroids, max intra-set
//! distances, inter-centroid distances, their empirical CDFs, the 95%
//! centroid separation ratio, and the invariance error.
//!
//! The same pipeline runs on model embeddings or directly on raw scaled
//! vectors (data characterization). Distances here are plain euclidean.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::{DatasetSplits, factorial};
use crate::error::{Error, Result};
use crate::math::euclidean;
use crate::model::ModelParams;
use crate::training::SplitVectors;

pub const CDF_BINS: usize = 1000;

/// One embedded vector with its set identity.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingRow {
    pub set_id: u64,
    pub member_index: usize,
    pub embedding: Vec<f64>,
}

/// A collection of embeddings grouped by permutation point set.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingSet {
    rows: Vec<EmbeddingRow>,
    /// Row indices grouped per set, in first-seen set order.
    groups: Vec<Vec<usize>>,
    group_ids: Vec<u64>,
}

impl EmbeddingSet {
    pub fn new(rows: Vec<EmbeddingRow>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidArgument("embedding set is empty".into()));
        }
        let dim = rows[0].embedding.len();
        if dim == 0 || rows.iter().any(|r| r.embedding.len() != dim) {
            return Err(Error::InvalidArgument(
                "embeddings must all share one positive length".into(),
            ));
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut group_ids: Vec<u64> = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            match group_ids.iter().position(|&id| id == row.set_id) {
                Some(g) => groups[g].push(i),
                None => {
                    group_ids.push(row.set_id);
                    groups.push(vec![i]);
                }
            }
        }
        Ok(EmbeddingSet {
            rows,
            groups,
            group_ids,
        })
    }

    pub fn rows(&self) -> &[EmbeddingRow] {
        &self.rows
    }

    pub fn set_count(&self) -> usize {
        self.groups.len()
    }

    pub fn dim(&self) -> usize {
        self.rows[0].embedding.len()
    }

    /// Check that every set carries exactly the expected orbit size.
    pub fn validate_orbit_size(&self, expected: usize) -> Result<()> {
        for (g, members) in self.groups.iter().enumerate() {
            if members.len() != expected {
                return Err(Error::InvalidArgument(format!(
                    "set {} has {} members, expected {expected}",
                    self.group_ids[g],
                    members.len()
                )));
            }
        }
        Ok(())
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let file = fs::File::create(path)?;
        let mut w = BufWriter::new(file);
        let dim = self.dim();
        let mut header = String::from("set_id,member_index");
        for k in 0..dim {
            header.push_str(&format!(",e{k}"));
        }
        writeln!(w, "{header}")?;
        for r in &self.rows {
            let mut line = format!("{},{}", r.set_id, r.member_index);
            for v in &r.embedding {
                line.push(',');
                line.push_str(&v.to_string());
            }
            writeln!(w, "{line}")?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Componentwise mean of a non-empty set of points.
pub fn centroid(points: &[&[f64]]) -> Result<Vec<f64>> {
    let first = points
        .first()
        .ok_or_else(|| Error::InvalidArgument("centroid of an empty set".into()))?;
    let dim = first.len();
    let mut out = vec![0.0; dim];
    for p in points {
        if p.len() != dim {
            return Err(Error::InvalidArgument(
                "centroid: points have mixed lengths".into(),
            ));
        }
        for (o, v) in out.iter_mut().zip(*p) {
            *o += v;
        }
    }
    let n = points.len() as f64;
    for o in &mut out {
        *o /= n;
    }
    Ok(out)
}

/// Per-set centroids and max intra-set distances, plus all pairwise
/// inter-centroid distances (exact enumeration, no sampling).
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceStats {
    pub set_ids: Vec<u64>,
    pub centroids: Vec<Vec<f64>>,
    /// d_max[i]: max distance from a member of set i to its centroid.
    pub d_max: Vec<f64>,
    /// Inter-centroid distances for unordered pairs (i < j), row-major order.
    pub pair_distances: Vec<f64>,
}

pub fn distance_stats(es: &EmbeddingSet) -> Result<DistanceStats> {
    let mut centroids = Vec::with_capacity(es.groups.len());
    let mut d_max = Vec::with_capacity(es.groups.len());
    for members in &es.groups {
        let points: Vec<&[f64]> = members
            .iter()
            .map(|&i| es.rows[i].embedding.as_slice())
            .collect();
        let c = centroid(&points)?;
        let mut max_d = 0.0f64;
        for p in &points {
            let d = euclidean(p, &c)?;
            if d > max_d {
                max_d = d;
            }
        }
        centroids.push(c);
        d_max.push(max_d);
    }
    let n = centroids.len();
    let mut pair_distances = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            pair_distances.push(euclidean(&centroids[i], &centroids[j])?);
        }
    }
    Ok(DistanceStats {
        set_ids: es.group_ids.clone(),
        centroids,
        d_max,
        pair_distances,
    })
}

/// Empirical CDF on 1000 equal bins spanning [floor(min), ceil(max)]:
/// cumulative fraction of values <= edge at each of the 1001 edges.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    pub edges: Vec<f64>,
    pub cumulative: Vec<f64>,
}

pub fn empirical_cdf(values: &[f64]) -> Result<EmpiricalCdf> {
    if values.is_empty() {
        return Err(Error::InvalidArgument("empirical CDF of no values".into()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(
            "empirical CDF requires finite values".into(),
        ));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values compare"));
    let lo = sorted[0].floor();
    let mut hi = sorted[sorted.len() - 1].ceil();
    if hi <= lo {
        // point-mass data: widen to one unit so the bin grid is well formed
        hi = lo + 1.0;
    }
    let n = sorted.len() as f64;
    let width = hi - lo;
    let mut edges = Vec::with_capacity(CDF_BINS + 1);
    let mut cumulative = Vec::with_capacity(CDF_BINS + 1);
    for k in 0..=CDF_BINS {
        let edge = lo + width * (k as f64) / (CDF_BINS as f64);
        let count = sorted.partition_point(|&v| v <= edge);
        edges.push(edge);
        cumulative.push(count as f64 / n);
    }
    Ok(EmpiricalCdf { edges, cumulative })
}

impl EmpiricalCdf {
    /// The value where the CDF first reaches `target`, linearly interpolated
    /// between the bracketing edges.
    pub fn crossing_value(&self, target: f64) -> f64 {
        let k = self
            .cumulative
            .partition_point(|&c| c < target)
            .min(self.cumulative.len() - 1);
        if k == 0 {
            return self.edges[0];
        }
        let (e0, e1) = (self.edges[k - 1], self.edges[k]);
        let (c0, c1) = (self.cumulative[k - 1], self.cumulative[k]);
        if c1 <= c0 {
            return e1;
        }
        e0 + (target - c0) * (e1 - e0) / (c1 - c0)
    }

    /// (edge, cumulative) pairs for serialization.
    pub fn pairs(&self) -> Vec<(f64, f64)> {
        self.edges
            .iter()
            .copied()
            .zip(self.cumulative.iter().copied())
            .collect()
    }

    pub fn is_monotone(&self) -> bool {
        self.cumulative.windows(2).all(|w| w[0] <= w[1])
    }
}

/// The 95% centroid separation ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct R95 {
    pub value: f64,
    /// Set when max(d_max) is zero and the ratio degenerates; the value is
    /// then an infinite-separation sentinel.
    pub degenerate: bool,
}

/// Numerator: inter-centroid distance where its CDF crosses 0.05.
/// Denominator: twice the largest max intra-set distance.
pub fn r95(cdf_pair_distances: &EmpiricalCdf, d_max_values: &[f64]) -> Result<R95> {
    if d_max_values.is_empty() {
        return Err(Error::InvalidArgument("r95 needs d_max values".into()));
    }
    let d_max = d_max_values.iter().cloned().fold(f64::MIN, f64::max);
    if d_max <= 0.0 {
        return Ok(R95 {
            value: f64::INFINITY,
            degenerate: true,
        });
    }
    Ok(R95 {
        value: cdf_pair_distances.crossing_value(0.05) / (2.0 * d_max),
        degenerate: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "discernible")]
    Discernible,
    #[serde(rename = "not discernible")]
    NotDiscernible,
}

/// Clustering verdict: discernible exactly when R95 > 1 (the boundary
/// counts as not discernible).
pub fn verdict_from_r95(r95: f64) -> Verdict {
    if r95 > 1.0 {
        Verdict::Discernible
    } else {
        Verdict::NotDiscernible
    }
}

/// Full clustering evidence for one embedding set.
#[derive(Debug, Clone)]
pub struct ClusteringAnalysis {
    pub stats: DistanceStats,
    pub cdf_d_max: EmpiricalCdf,
    pub cdf_pair_distances: EmpiricalCdf,
    pub r95: R95,
    /// Invariance error: exactly max_i d_max_i.
    pub epsilon: f64,
    pub verdict: Verdict,
}

/// Run the distance/CDF/ratio pipeline on an embedding set.
pub fn analyze_embedding_set(es: &EmbeddingSet) -> Result<ClusteringAnalysis> {
    if es.set_count() < 2 {
        return Err(Error::InvalidArgument(
            "analysis needs at least two point sets".into(),
        ));
    }
    let stats = distance_stats(es)?;
    let cdf_d_max = empirical_cdf(&stats.d_max)?;
    let cdf_pair_distances = empirical_cdf(&stats.pair_distances)?;
    let ratio = r95(&cdf_pair_distances, &stats.d_max)?;
    let epsilon = stats.d_max.iter().cloned().fold(f64::MIN, f64::max);
    Ok(ClusteringAnalysis {
        stats,
        cdf_d_max,
        cdf_pair_distances,
        r95: ratio,
        epsilon,
        verdict: verdict_from_r95(ratio.value),
    })
}

/// Build the embedding set from raw scaled validation vectors (no model):
/// the data characterization pipeline.
pub fn characterize_raw(splits: &DatasetSplits) -> Result<(ClusteringAnalysis, EmbeddingSet)> {
    let es = raw_embedding_set(splits)?;
    let analysis = analyze_embedding_set(&es)?;
    Ok((analysis, es))
}

fn raw_embedding_set(splits: &DatasetSplits) -> Result<EmbeddingSet> {
    if splits.validation.is_empty() {
        return Err(Error::InvalidArgument("validation split is empty".into()));
    }
    let mut rows = Vec::new();
    for ps in &splits.validation {
        for (mi, member) in ps.members.iter().enumerate() {
            rows.push(EmbeddingRow {
                set_id: ps.set_id,
                member_index: mi,
                embedding: member.scale(splits.scaling)?.values().to_vec(),
            });
        }
    }
    let es = EmbeddingSet::new(rows)?;
    es.validate_orbit_size(factorial(splits.subvector_len))?;
    Ok(es)
}

/// Encode every validation vector with the trained model and analyze the
/// embedding clustering.
pub fn analyze_embeddings(
    params: &ModelParams,
    splits: &DatasetSplits,
) -> Result<(ClusteringAnalysis, EmbeddingSet)> {
    if splits.validation.is_empty() {
        return Err(Error::InvalidArgument("validation split is empty".into()));
    }
    let sv = SplitVectors::from_point_sets(&splits.validation, splits.scaling)?;
    if params.input_dim() != sv.dimension() {
        return Err(Error::ShapeMismatch(format!(
            "checkpoint input dim {} does not match dataset dimension {}",
            params.input_dim(),
            sv.dimension()
        )));
    }
    let mut rows = Vec::new();
    for ps in &splits.validation {
        for (mi, member) in ps.members.iter().enumerate() {
            let x = member.scale(splits.scaling)?;
            rows.push(EmbeddingRow {
                set_id: ps.set_id,
                member_index: mi,
                embedding: params.encode(x.values())?,
            });
        }
    }
    let es = EmbeddingSet::new(rows)?;
    es.validate_orbit_size(factorial(splits.subvector_len))?;
    let analysis = analyze_embedding_set(&es)?;
    Ok((analysis, es))
}

// --- report serialization ----------------------------------------------

/// Where a report came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    /// Checkpoint file name, or "raw" for data characterization.
    pub checkpoint: String,
    pub dataset_seed: u64,
    pub config_hash: String,
}

/// Machine-readable analysis report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub r95: f64,
    pub epsilon: f64,
    pub verdict: Verdict,
    pub degenerate_dmax: bool,
    pub cdf_dmax: Vec<(f64, f64)>,
    #[serde(rename = "cdf_Dij")]
    pub cdf_dij: Vec<(f64, f64)>,
    pub provenance: Provenance,
}

impl ClusteringAnalysis {
    pub fn into_report(self, provenance: Provenance) -> AnalysisReport {
        AnalysisReport {
            r95: self.r95.value,
            epsilon: self.epsilon,
            verdict: self.verdict,
            degenerate_dmax: self.r95.degenerate,
            cdf_dmax: self.cdf_d_max.pairs(),
            cdf_dij: self.cdf_pair_distances.pairs(),
            provenance,
        }
    }
}

impl AnalysisReport {
    pub fn write_json(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self)
            .map_err(|e| Error::format("analysis report", e.to_string()))?;
        fs::write(path, json + "\n")?;
        Ok(())
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| Error::format(path.display().to_string(), e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    fn row(set_id: u64, member_index: usize, embedding: &[f64]) -> EmbeddingRow {
        EmbeddingRow {
            set_id,
            member_index,
            embedding: embedding.to_vec(),
        }
    }

    #[test]
    fn centroid_examples() {
        assert_eq!(centroid(&[&[1.0, 2.0]]).unwrap(), vec![1.0, 2.0]);
        assert_eq!(
            centroid(&[&[0.0, 0.0], &[2.0, 2.0]]).unwrap(),
            vec![1.0, 1.0]
        );
        // permuting member order leaves the centroid unchanged
        assert_eq!(
            centroid(&[&[2.0, 2.0], &[0.0, 0.0]]).unwrap(),
            vec![1.0, 1.0]
        );
        assert!(centroid(&[]).is_err());
    }

    #[test]
    fn distance_stats_two_sets() {
        let es = EmbeddingSet::new(vec![
            row(0, 0, &[0.0, 0.0]),
            row(0, 1, &[0.0, 0.0]),
            row(1, 0, &[3.0, 4.0]),
            row(1, 1, &[3.0, 4.0]),
        ])
        .unwrap();
        let stats = distance_stats(&es).unwrap();
        assert_eq!(stats.d_max, vec![0.0, 0.0]);
        assert_eq!(stats.pair_distances, vec![5.0]);
    }

    #[test]
    fn distance_stats_pair_count() {
        let mut rows = Vec::new();
        for s in 0..7u64 {
            for m in 0..3 {
                rows.push(row(s, m, &[s as f64, m as f64]));
            }
        }
        let es = EmbeddingSet::new(rows).unwrap();
        let stats = distance_stats(&es).unwrap();
        assert_eq!(stats.pair_distances.len(), 7 * 6 / 2);
    }

    #[test]
    fn distance_stats_matches_bruteforce_exactly() {
        let mut rng = Rng::new(123);
        let mut rows = Vec::new();
        for s in 0..20u64 {
            for m in 0..24 {
                let e: Vec<f64> = (0..8).map(|_| rng.next_range(-2.0, 2.0)).collect();
                rows.push(row(s, m, &e));
            }
        }
        let es = EmbeddingSet::new(rows.clone()).unwrap();
        let stats = distance_stats(&es).unwrap();

        // independent brute-force double loop
        for s in 0..20usize {
            let members: Vec<&EmbeddingRow> =
                rows.iter().filter(|r| r.set_id == s as u64).collect();
            let dim = members[0].embedding.len();
            let mut c = vec![0.0; dim];
            for m in &members {
                for (ci, v) in c.iter_mut().zip(&m.embedding) {
                    *ci += v;
                }
            }
            for ci in &mut c {
                *ci /= members.len() as f64;
            }
            assert_eq!(stats.centroids[s], c, "centroid {s}");
            let mut dmax = 0.0f64;
            for m in &members {
                let d = euclidean(&m.embedding, &c).unwrap();
                if d > dmax {
                    dmax = d;
                }
            }
            assert_eq!(stats.d_max[s], dmax, "d_max {s}");
        }
        let mut k = 0;
        for i in 0..20 {
            for j in (i + 1)..20 {
                let d = euclidean(&stats.centroids[i], &stats.centroids[j]).unwrap();
                assert_eq!(stats.pair_distances[k], d, "pair ({i},{j})");
                k += 1;
            }
        }
    }

    #[test]
    fn relabeling_and_reordering_leave_stats_unchanged() {
        let mut rng = Rng::new(55);
        let mut rows = Vec::new();
        for s in 0..10u64 {
            for m in 0..24 {
                let e: Vec<f64> = (0..8).map(|_| rng.next_range(-1.0, 1.0)).collect();
                rows.push(row(s, m, &e));
            }
        }
        let base = analyze_embedding_set(&EmbeddingSet::new(rows.clone()).unwrap()).unwrap();

        // relabel sets and shuffle row order
        let mut relabeled: Vec<EmbeddingRow> = rows
            .iter()
            .map(|r| EmbeddingRow {
                set_id: 1000 + (r.set_id * 7) % 10,
                member_index: r.member_index,
                embedding: r.embedding.clone(),
            })
            .collect();
        rng.shuffle(&mut relabeled);
        let shuffled = analyze_embedding_set(&EmbeddingSet::new(relabeled).unwrap()).unwrap();

        let sorted = |mut v: Vec<f64>| {
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            v
        };
        let a_dmax = sorted(base.stats.d_max.clone());
        let b_dmax = sorted(shuffled.stats.d_max.clone());
        for (a, b) in a_dmax.iter().zip(&b_dmax) {
            assert!((a - b).abs() < 1e-12);
        }
        let a_pairs = sorted(base.stats.pair_distances.clone());
        let b_pairs = sorted(shuffled.stats.pair_distances.clone());
        for (a, b) in a_pairs.iter().zip(&b_pairs) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((base.r95.value - shuffled.r95.value).abs() < 1e-12);
    }

    #[test]
    fn empirical_cdf_examples() {
        // {0.5, 1.5} on [0, 2]: 0.5 at edge 1.0, 1.0 at edge 2.0
        let cdf = empirical_cdf(&[0.5, 1.5]).unwrap();
        assert_eq!(cdf.edges.len(), CDF_BINS + 1);
        assert_eq!(cdf.edges[0], 0.0);
        assert_eq!(*cdf.edges.last().unwrap(), 2.0);
        let at_one = cdf.cumulative[CDF_BINS / 2];
        assert_eq!(at_one, 0.5);
        assert_eq!(*cdf.cumulative.last().unwrap(), 1.0);
        assert!(cdf.is_monotone());

        assert!(empirical_cdf(&[]).is_err());
        assert!(empirical_cdf(&[f64::NAN]).is_err());
    }

    #[test]
    fn empirical_cdf_point_mass() {
        let cdf = empirical_cdf(&[3.0, 3.0, 3.0]).unwrap();
        // degenerate range widens to [3, 4]; every value sits at the first edge
        assert_eq!(cdf.edges[0], 3.0);
        assert_eq!(cdf.cumulative[0], 1.0);
        assert_eq!(*cdf.cumulative.last().unwrap(), 1.0);
        assert!(cdf.is_monotone());
    }

    #[test]
    fn cdf_terminal_value_is_one_on_random_inputs() {
        let mut rng = Rng::new(8);
        for _ in 0..20 {
            let n = 1 + rng.next_below(200);
            let values: Vec<f64> = (0..n).map(|_| rng.next_range(-30.0, 70.0)).collect();
            let cdf = empirical_cdf(&values).unwrap();
            assert!(cdf.is_monotone());
            assert_eq!(*cdf.cumulative.last().unwrap(), 1.0);
            assert!(cdf.cumulative[0] >= 0.0);
        }
    }

    #[test]
    fn r95_synthetic_uniform_construction() {
        // pair distances uniform on [10, 11] with max d_max = 1:
        // crossing at 0.05 ~ 10.05, ratio ~ 5.025
        let mut rng = Rng::new(99);
        let values: Vec<f64> = (0..100_000).map(|_| rng.next_range(10.0, 11.0)).collect();
        let cdf = empirical_cdf(&values).unwrap();
        let ratio = r95(&cdf, &[0.25, 1.0, 0.7]).unwrap();
        assert!(!ratio.degenerate);
        assert!(
            (ratio.value - 5.025).abs() / 5.025 < 0.01,
            "r95 = {}",
            ratio.value
        );
    }

    #[test]
    fn r95_degenerate_and_coincident_cases() {
        let cdf = empirical_cdf(&[0.0, 0.0, 0.0]).unwrap();
        // coincident centroids with positive d_max: numerator 0 -> ratio 0
        let ratio = r95(&cdf, &[1.0]).unwrap();
        assert_eq!(ratio.value, 0.0);
        assert!(!ratio.degenerate);

        // zero d_max: infinite-separation sentinel with the flag set
        let cdf2 = empirical_cdf(&[5.0, 6.0]).unwrap();
        let degenerate = r95(&cdf2, &[0.0, 0.0]).unwrap();
        assert!(degenerate.degenerate);
        assert!(degenerate.value.is_infinite());

        assert!(r95(&cdf2, &[]).is_err());
    }

    #[test]
    fn verdict_threshold_is_strictly_greater_than_one() {
        assert_eq!(verdict_from_r95(1.5), Verdict::Discernible);
        assert_eq!(verdict_from_r95(1.0), Verdict::NotDiscernible);
        assert_eq!(verdict_from_r95(0.2), Verdict::NotDiscernible);
    }

    #[test]
    fn well_separated_hand_built_sets_are_discernible() {
        let mut rows = Vec::new();
        for s in 0..3u64 {
            let base = 10.0 * s as f64;
            for m in 0..4 {
                rows.push(row(s, m, &[base + 0.01 * m as f64, base]));
            }
        }
        let es = EmbeddingSet::new(rows).unwrap();
        let analysis = analyze_embedding_set(&es).unwrap();
        assert_eq!(analysis.verdict, Verdict::Discernible);
        assert!(analysis.r95.value > 1.0);
        let expected_eps = analysis.stats.d_max.iter().cloned().fold(f64::MIN, f64::max);
        assert_eq!(analysis.epsilon, expected_eps);
    }

    #[test]
    fn report_roundtrips_through_json() {
        let mut rows = Vec::new();
        let mut rng = Rng::new(4);
        for s in 0..4u64 {
            for m in 0..24 {
                let e: Vec<f64> = (0..8).map(|_| rng.next_range(-1.0, 1.0)).collect();
                rows.push(row(s, m, &e));
            }
        }
        let analysis = analyze_embedding_set(&EmbeddingSet::new(rows).unwrap()).unwrap();
        let report = analysis.into_report(Provenance {
            checkpoint: "raw".into(),
            dataset_seed: 7,
            config_hash: "00ff".into(),
        });
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("report.json");
        report.write_json(&path).unwrap();
        let loaded = AnalysisReport::read_json(&path).unwrap();
        assert_eq!(loaded, report);
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.contains("cdf_Dij"));
        assert!(text.contains("not discernible") || text.contains("discernible"));
    }
}
