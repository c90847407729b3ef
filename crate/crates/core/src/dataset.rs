//! Synthetic permutation-point-set data: generation, canonicalization,
//! scaling, splitting, and CSV persistence.
//!
//! A vector of dimension D = S*G is made of S subvectors of length G.
//! Applying one permutation of the within-subvector positions consistently
//! to every subvector yields the vector's permutation orbit; the G! orbit
//! members form one permutation point set.

use std::collections::HashSet;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::Rng;

/// Generation parameters for the synthetic dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct DataConfig {
    /// Total number of permutation point sets to generate.
    pub sets: usize,
    /// Point sets removed up front for post-training analysis.
    pub validation_sets: usize,
    /// Subvector length G; the orbit size is G!.
    pub subvector_len: usize,
    /// Number of subvectors S per vector.
    pub subvector_count: usize,
    /// Elements are integers drawn uniformly from 0..=value_max.
    pub value_max: u32,
    pub seed: u64,
}

impl DataConfig {
    pub fn dimension(&self) -> usize {
        self.subvector_len * self.subvector_count
    }

    pub fn orbit_size(&self) -> usize {
        factorial(self.subvector_len)
    }

    pub fn validate(&self) -> Result<()> {
        if self.subvector_len == 0 || self.subvector_count == 0 {
            return Err(Error::InvalidArgument(
                "subvector_len and subvector_count must be positive".into(),
            ));
        }
        if self.sets < self.validation_sets + 2 {
            return Err(Error::InvalidArgument(format!(
                "sets ({}) must be at least validation_sets + 2 ({})",
                self.sets,
                self.validation_sets + 2
            )));
        }
        if self.value_max == 0 || self.value_max > 255 {
            return Err(Error::InvalidArgument(
                "value_max must be in 1..=255".into(),
            ));
        }
        Ok(())
    }
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// A flat vector of integer-valued features in [0, value_max].
#[derive(Debug, Clone, PartialEq)]
pub struct RawVector(Vec<f64>);

impl RawVector {
    pub fn new(values: Vec<f64>) -> Self {
        RawVector(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn validate(&self, subvector_len: usize, value_max: f64) -> Result<()> {
        if subvector_len == 0 || self.0.len() % subvector_len != 0 {
            return Err(Error::InvalidArgument(format!(
                "vector length {} is not divisible by subvector length {}",
                self.0.len(),
                subvector_len
            )));
        }
        for &v in &self.0 {
            if !v.is_finite() || !(0.0..=value_max).contains(&v) {
                return Err(Error::InvalidArgument(format!(
                    "element {v} outside [0, {value_max}]"
                )));
            }
        }
        Ok(())
    }

    /// Divide every element by value_max, mapping the grid into [0, 1].
    pub fn scale(&self, value_max: f64) -> Result<ScaledVector> {
        for &v in &self.0 {
            if !(0.0..=value_max).contains(&v) {
                return Err(Error::InvalidArgument(format!(
                    "cannot scale element {v} outside [0, {value_max}]"
                )));
            }
        }
        Ok(ScaledVector(self.0.iter().map(|v| v / value_max).collect()))
    }
}

/// A vector scaled to [0, 1] for model input.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledVector(Vec<f64>);

impl ScaledVector {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// Inverse of [`RawVector::scale`]; exact on the integer grid.
    pub fn unscale(&self, value_max: f64) -> RawVector {
        RawVector(self.0.iter().map(|v| v * value_max).collect())
    }
}

/// A permutation of within-subvector positions 0..G-1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubvectorPermutation {
    order: Vec<usize>,
}

impl SubvectorPermutation {
    /// Validates that `order` is a bijection on {0..len-1}.
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; order.len()];
        for &o in &order {
            if o >= order.len() || seen[o] {
                return Err(Error::InvalidArgument(format!(
                    "order {order:?} is not a permutation of 0..{}",
                    order.len()
                )));
            }
            seen[o] = true;
        }
        Ok(SubvectorPermutation { order })
    }

    pub fn identity(len: usize) -> Self {
        SubvectorPermutation {
            order: (0..len).collect(),
        }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.order.len()];
        for (j, &o) in self.order.iter().enumerate() {
            inv[o] = j;
        }
        SubvectorPermutation { order: inv }
    }
}

/// All G! permutations in lexicographic order over `order`.
pub fn all_permutations(g: usize) -> Vec<SubvectorPermutation> {
    let mut out = Vec::with_capacity(factorial(g));
    let mut current = Vec::with_capacity(g);
    let mut used = vec![false; g];
    fn rec(
        g: usize,
        current: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<SubvectorPermutation>,
    ) {
        if current.len() == g {
            out.push(SubvectorPermutation {
                order: current.clone(),
            });
            return;
        }
        for i in 0..g {
            if !used[i] {
                used[i] = true;
                current.push(i);
                rec(g, current, used, out);
                current.pop();
                used[i] = false;
            }
        }
    }
    rec(g, &mut current, &mut used, &mut out);
    out
}

/// out[s*G + j] = v[s*G + order[j]] for every subvector s.
pub fn apply_permutation(v: &RawVector, p: &SubvectorPermutation) -> Result<RawVector> {
    let g = p.order.len();
    if g == 0 || v.len() % g != 0 {
        return Err(Error::InvalidArgument(format!(
            "vector length {} is not divisible by permutation length {g}",
            v.len()
        )));
    }
    let mut out = Vec::with_capacity(v.len());
    for chunk in v.values().chunks_exact(g) {
        for &j in &p.order {
            out.push(chunk[j]);
        }
    }
    Ok(RawVector(out))
}

/// The G! consistent-permutation variants of one base vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PermutationPointSet {
    pub set_id: u64,
    pub members: Vec<RawVector>,
}

fn columns(v: &RawVector, g: usize) -> Vec<Vec<f64>> {
    let s = v.len() / g;
    (0..g)
        .map(|j| (0..s).map(|si| v.values()[si * g + j]).collect())
        .collect()
}

fn has_duplicate_columns(v: &RawVector, g: usize) -> bool {
    let cols = columns(v, g);
    for i in 0..g {
        for j in (i + 1)..g {
            if cols[i] == cols[j] {
                return true;
            }
        }
    }
    false
}

/// Expand a base vector into its full permutation point set, members in
/// lexicographic permutation order (member 0 is the base itself).
///
/// A base with two identical columns would collapse the orbit below G!
/// and is rejected as degenerate.
pub fn expand_point_set(set_id: u64, base: &RawVector, g: usize) -> Result<PermutationPointSet> {
    if g == 0 || base.len() % g != 0 {
        return Err(Error::InvalidArgument(format!(
            "vector length {} is not divisible by subvector length {g}",
            base.len()
        )));
    }
    if has_duplicate_columns(base, g) {
        return Err(Error::DegenerateBase(format!(
            "set {set_id}: two identical subvector columns collapse the orbit"
        )));
    }
    let members = all_permutations(g)
        .iter()
        .map(|p| apply_permutation(base, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(PermutationPointSet { set_id, members })
}

/// The orbit member whose G columns, read as S-tuples, are sorted
/// lexicographically. Two vectors have equal canonical forms iff they are
/// consistent-permutation equivalent; the result is also the lexicographic
/// minimum of the orbit as a flat vector.
pub fn canonical_form(v: &RawVector, g: usize) -> Result<RawVector> {
    if g == 0 || v.len() % g != 0 {
        return Err(Error::InvalidArgument(format!(
            "vector length {} is not divisible by subvector length {g}",
            v.len()
        )));
    }
    let cols = columns(v, g);
    let mut idx: Vec<usize> = (0..g).collect();
    idx.sort_by(|&a, &b| {
        cols[a]
            .partial_cmp(&cols[b])
            .expect("finite values compare totally")
    });
    let s = v.len() / g;
    let mut out = vec![0.0; v.len()];
    for (j_new, &j_old) in idx.iter().enumerate() {
        for si in 0..s {
            out[si * g + j_new] = cols[j_old][si];
        }
    }
    Ok(RawVector(out))
}

fn canonical_key(v: &RawVector) -> Vec<u8> {
    v.values().iter().map(|&x| x as u8).collect()
}

/// Validation/train/test point sets plus the scaling divisor.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSplits {
    pub validation: Vec<PermutationPointSet>,
    pub train: Vec<PermutationPointSet>,
    pub test: Vec<PermutationPointSet>,
    /// Constant divisor applied when scaling to [0, 1].
    pub scaling: f64,
    pub subvector_len: usize,
    pub seed: u64,
}

impl DatasetSplits {
    pub fn dimension(&self) -> usize {
        self.validation
            .first()
            .or_else(|| self.train.first())
            .map_or(0, |ps| ps.members[0].len())
    }
}

/// Set counts per split: validation removed first, remainder 80/20.
pub fn split_counts(n_sets: usize, validation_sets: usize) -> Result<(usize, usize, usize)> {
    if n_sets < validation_sets + 2 {
        return Err(Error::InvalidArgument(format!(
            "n_sets ({n_sets}) must be at least validation_sets + 2 ({})",
            validation_sets + 2
        )));
    }
    let remaining = n_sets - validation_sets;
    let train = remaining * 4 / 5;
    let test = remaining - train;
    Ok((validation_sets, train, test))
}

/// Generate the full dataset: unique non-degenerate point sets, validation
/// removed first, remainder split 80/20 by point set.
pub fn generate_dataset(cfg: &DataConfig, rng: &mut Rng) -> Result<DatasetSplits> {
    cfg.validate()?;
    let g = cfg.subvector_len;
    let d = cfg.dimension();
    let n = cfg.sets;
    let (val_n, train_n, _test_n) = split_counts(n, cfg.validation_sets)?;

    let mut seen: HashSet<Vec<u8>> = HashSet::with_capacity(n);
    let mut sets: Vec<PermutationPointSet> = Vec::with_capacity(n);
    let mut attempts: usize = 0;
    let max_attempts = n.saturating_mul(1000).saturating_add(1000);
    while sets.len() < n {
        attempts += 1;
        if attempts > max_attempts {
            return Err(Error::InvalidState(format!(
                "could not generate {n} unique point sets after {attempts} attempts"
            )));
        }
        let values: Vec<f64> = (0..d)
            .map(|_| rng.next_below(cfg.value_max as usize + 1) as f64)
            .collect();
        let base = RawVector(values);
        if has_duplicate_columns(&base, g) {
            continue; // degenerate: regenerate
        }
        let canon = canonical_form(&base, g)?;
        if !seen.insert(canonical_key(&canon)) {
            continue; // orbit already present under another base
        }
        let set_id = sets.len() as u64;
        sets.push(expand_point_set(set_id, &base, g)?);
    }

    let mut idx: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut idx);
    // 0 = validation, 1 = train, 2 = test
    let mut assignment = vec![2u8; n];
    for &i in &idx[..val_n] {
        assignment[i] = 0;
    }
    for &i in &idx[val_n..val_n + train_n] {
        assignment[i] = 1;
    }

    let mut validation = Vec::with_capacity(val_n);
    let mut train = Vec::with_capacity(train_n);
    let mut test = Vec::with_capacity(n - val_n - train_n);
    for (ps, &a) in sets.into_iter().zip(&assignment) {
        match a {
            0 => validation.push(ps),
            1 => train.push(ps),
            _ => test.push(ps),
        }
    }

    Ok(DatasetSplits {
        validation,
        train,
        test,
        scaling: cfg.value_max as f64,
        subvector_len: g,
        seed: cfg.seed,
    })
}

// --- persistence -----------------------------------------------------------

pub const TRAIN_FILE: &str = "train.csv";
pub const TEST_FILE: &str = "test.csv";
pub const VALIDATION_FILE: &str = "validation.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DatasetManifest {
    pub format: String,
    pub version: u32,
    pub seed: u64,
    pub dimension: usize,
    pub subvector_len: usize,
    pub subvector_count: usize,
    pub value_max: u32,
    pub validation_sets: usize,
    pub train_sets: usize,
    pub test_sets: usize,
}

fn write_split_file(
    path: &Path,
    sets: &[PermutationPointSet],
    d: usize,
    g: usize,
    seed: u64,
) -> Result<()> {
    let file = fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    writeln!(
        w,
        "permvec-dataset v1, D={d}, G={g}, sets={}, seed={seed}",
        sets.len()
    )?;
    let mut line = String::new();
    for ps in sets {
        for (mi, member) in ps.members.iter().enumerate() {
            line.clear();
            line.push_str(&ps.set_id.to_string());
            line.push(',');
            line.push_str(&mi.to_string());
            for &v in member.values() {
                line.push(',');
                line.push_str(&v.to_string());
            }
            writeln!(w, "{line}")?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Write the three split files plus the manifest into `dir`.
pub fn write_splits(splits: &DatasetSplits, dir: &Path) -> Result<DatasetManifest> {
    fs::create_dir_all(dir)?;
    let d = splits.dimension();
    let g = splits.subvector_len;
    write_split_file(&dir.join(TRAIN_FILE), &splits.train, d, g, splits.seed)?;
    write_split_file(&dir.join(TEST_FILE), &splits.test, d, g, splits.seed)?;
    write_split_file(
        &dir.join(VALIDATION_FILE),
        &splits.validation,
        d,
        g,
        splits.seed,
    )?;
    let manifest = DatasetManifest {
        format: "permvec-dataset".into(),
        version: 1,
        seed: splits.seed,
        dimension: d,
        subvector_len: g,
        subvector_count: d / g,
        value_max: splits.scaling as u32,
        validation_sets: splits.validation.len(),
        train_sets: splits.train.len(),
        test_sets: splits.test.len(),
    };
    let json = serde_json::to_string_pretty(&manifest)
        .map_err(|e| Error::format(MANIFEST_FILE, e.to_string()))?;
    fs::write(dir.join(MANIFEST_FILE), json + "\n")?;
    Ok(manifest)
}

struct SplitHeader {
    dimension: usize,
    subvector_len: usize,
    sets: usize,
    seed: u64,
}

fn parse_header(line: &str, file: &str) -> Result<SplitHeader> {
    let rest = line
        .strip_prefix("permvec-dataset v1, ")
        .ok_or_else(|| Error::format(file, "missing 'permvec-dataset v1' header"))?;
    let mut dimension = None;
    let mut subvector_len = None;
    let mut sets = None;
    let mut seed = None;
    for part in rest.split(", ") {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::format(file, format!("malformed header field '{part}'")))?;
        let parse = |v: &str| -> Result<u64> {
            v.parse()
                .map_err(|_| Error::format(file, format!("non-numeric header field '{key}'")))
        };
        match key {
            "D" => dimension = Some(parse(value)? as usize),
            "G" => subvector_len = Some(parse(value)? as usize),
            "sets" => sets = Some(parse(value)? as usize),
            "seed" => seed = Some(parse(value)?),
            other => {
                return Err(Error::format(
                    file,
                    format!("unknown header field '{other}'"),
                ))
            }
        }
    }
    match (dimension, subvector_len, sets, seed) {
        (Some(d), Some(g), Some(s), Some(seed)) => Ok(SplitHeader {
            dimension: d,
            subvector_len: g,
            sets: s,
            seed,
        }),
        _ => Err(Error::format(file, "incomplete header")),
    }
}

fn read_split_file(path: &Path) -> Result<(SplitHeader, Vec<PermutationPointSet>)> {
    let file_name = path.display().to_string();
    let file = fs::File::open(path)?;
    let mut lines = BufReader::new(file).lines();
    let header_line = lines
        .next()
        .ok_or_else(|| Error::format(&file_name, "empty file"))??;
    let header = parse_header(&header_line, &file_name)?;

    let mut sets: Vec<PermutationPointSet> = Vec::with_capacity(header.sets);
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let context = format!("{file_name}:{}", lineno + 2);
        let mut fields = line.split(',');
        let set_id: u64 = fields
            .next()
            .ok_or_else(|| Error::format(&context, "missing set_id"))?
            .parse()
            .map_err(|_| Error::format(&context, "non-numeric set_id"))?;
        let member_index: usize = fields
            .next()
            .ok_or_else(|| Error::format(&context, "missing member_index"))?
            .parse()
            .map_err(|_| Error::format(&context, "non-numeric member_index"))?;
        let values: Vec<f64> = fields
            .map(|f| {
                f.parse()
                    .map_err(|_| Error::format(&context, format!("non-numeric value '{f}'")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if values.len() != header.dimension {
            return Err(Error::format(
                &context,
                format!(
                    "expected {} values, found {}",
                    header.dimension,
                    values.len()
                ),
            ));
        }
        let needs_new_set = sets.last().map_or(true, |ps| ps.set_id != set_id);
        if needs_new_set {
            if member_index != 0 {
                return Err(Error::format(
                    &context,
                    format!("set {set_id} does not start at member_index 0"),
                ));
            }
            sets.push(PermutationPointSet {
                set_id,
                members: Vec::new(),
            });
        }
        let current = sets.last_mut().expect("just pushed");
        if member_index != current.members.len() {
            return Err(Error::format(
                &context,
                format!(
                    "set {set_id}: member_index {member_index} out of order (expected {})",
                    current.members.len()
                ),
            ));
        }
        current.members.push(RawVector(values));
    }
    if sets.len() != header.sets {
        return Err(Error::format(
            &file_name,
            format!("header claims {} sets, found {}", header.sets, sets.len()),
        ));
    }
    Ok((header, sets))
}

/// Load a dataset directory written by [`write_splits`].
pub fn load_splits(dir: &Path) -> Result<DatasetSplits> {
    let manifest_path = dir.join(MANIFEST_FILE);
    let manifest_text = fs::read_to_string(&manifest_path)?;
    let manifest: DatasetManifest = serde_json::from_str(&manifest_text)
        .map_err(|e| Error::format(manifest_path.display().to_string(), e.to_string()))?;

    let (train_header, train) = read_split_file(&dir.join(TRAIN_FILE))?;
    let (_test_header, test) = read_split_file(&dir.join(TEST_FILE))?;
    let (_val_header, validation) = read_split_file(&dir.join(VALIDATION_FILE))?;

    let g = train_header.subvector_len;
    let orbit = factorial(g);
    for split in [&train, &test, &validation] {
        for ps in split.iter() {
            if ps.members.len() != orbit {
                return Err(Error::format(
                    dir.display().to_string(),
                    format!(
                        "set {} has {} members, expected {orbit}",
                        ps.set_id,
                        ps.members.len()
                    ),
                ));
            }
        }
    }

    Ok(DatasetSplits {
        validation,
        train,
        test,
        scaling: manifest.value_max as f64,
        subvector_len: g,
        seed: train_header.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;
    use proptest::prelude::*;

    fn raw(values: &[f64]) -> RawVector {
        RawVector::new(values.to_vec())
    }

    fn desk_cfg(sets: usize, validation: usize, seed: u64) -> DataConfig {
        DataConfig {
            sets,
            validation_sets: validation,
            subvector_len: 4,
            subvector_count: 6,
            value_max: 24,
            seed,
        }
    }

    #[test]
    fn apply_permutation_swaps_last_two_positions() {
        let v = raw(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]);
        let p = SubvectorPermutation::new(vec![0, 1, 3, 2]).unwrap();
        let out = apply_permutation(&v, &p).unwrap();
        assert_eq!(out.values(), &[1.0, 2.0, 4.0, 3.0, 5.0, 6.0, 8.0, 7.0]);
    }

    #[test]
    fn apply_permutation_identity_and_reversal() {
        let v = raw(&[3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0]);
        let id = SubvectorPermutation::identity(4);
        assert_eq!(apply_permutation(&v, &id).unwrap(), v);

        let single = raw(&[1.0, 2.0, 3.0, 4.0]);
        let rev = SubvectorPermutation::new(vec![3, 2, 1, 0]).unwrap();
        assert_eq!(
            apply_permutation(&single, &rev).unwrap().values(),
            &[4.0, 3.0, 2.0, 1.0]
        );
    }

    #[test]
    fn malformed_permutations_rejected() {
        assert!(SubvectorPermutation::new(vec![0, 0, 1, 2]).is_err());
        assert!(SubvectorPermutation::new(vec![0, 1, 2, 4]).is_err());
        let v = raw(&[1.0, 2.0, 3.0]);
        let p = SubvectorPermutation::new(vec![0, 1]).unwrap();
        assert!(apply_permutation(&v, &p).is_err());
    }

    #[test]
    fn expand_point_set_produces_distinct_orbit() {
        let base = raw(&[
            1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0, 12.0, 13.0, 14.0, 15.0, 16.0,
            17.0, 18.0, 19.0, 20.0, 21.0, 22.0, 23.0, 24.0,
        ]);
        let ps = expand_point_set(0, &base, 4).unwrap();
        assert_eq!(ps.members.len(), 24);
        assert_eq!(ps.members[0], base); // identity first in lex order
        let mut seen: HashSet<Vec<u8>> = HashSet::new();
        for m in &ps.members {
            assert!(seen.insert(canonical_key(m).iter().map(|&b| b).collect()));
        }
    }

    #[test]
    fn expand_point_set_g1_is_singleton() {
        let base = raw(&[5.0, 7.0, 9.0]);
        let ps = expand_point_set(3, &base, 1).unwrap();
        assert_eq!(ps.members.len(), 1);
        assert_eq!(ps.members[0], base);
    }

    #[test]
    fn expand_point_set_rejects_degenerate_base() {
        // columns 2 and 3 identical in both subvectors
        let base = raw(&[1.0, 2.0, 3.0, 3.0, 5.0, 6.0, 7.0, 7.0]);
        match expand_point_set(0, &base, 4) {
            Err(Error::DegenerateBase(_)) => {}
            other => panic!("expected DegenerateBase, got {other:?}"),
        }
    }

    #[test]
    fn canonical_form_is_orbit_invariant_and_idempotent() {
        let base = raw(&[9.0, 2.0, 7.0, 4.0, 1.0, 6.0, 3.0, 8.0]);
        let canon = canonical_form(&base, 4).unwrap();
        for p in all_permutations(4) {
            let image = apply_permutation(&base, &p).unwrap();
            assert_eq!(canonical_form(&image, 4).unwrap(), canon);
        }
        assert_eq!(canonical_form(&canon, 4).unwrap(), canon);
    }

    #[test]
    fn canonical_form_equals_bruteforce_lexicographic_minimum() {
        let mut rng = Rng::new(77);
        for _ in 0..50 {
            let v = RawVector((0..24).map(|_| rng.next_below(25) as f64).collect());
            let canon = canonical_form(&v, 4).unwrap();
            let minimum = all_permutations(4)
                .iter()
                .map(|p| apply_permutation(&v, p).unwrap())
                .min_by(|a, b| {
                    a.values()
                        .partial_cmp(b.values())
                        .expect("finite values compare")
                })
                .unwrap();
            assert_eq!(canon, minimum);
        }
    }

    #[test]
    fn scale_examples_and_grid_roundtrip() {
        let zeros = raw(&[0.0; 4]);
        assert_eq!(zeros.scale(24.0).unwrap().values(), &[0.0; 4]);
        let full = raw(&[24.0; 4]);
        assert_eq!(full.scale(24.0).unwrap().values(), &[1.0; 4]);
        let half = raw(&[12.0, 12.0]);
        assert_eq!(half.scale(24.0).unwrap().values(), &[0.5, 0.5]);
        assert!(raw(&[25.0]).scale(24.0).is_err());
        assert!(raw(&[-1.0]).scale(24.0).is_err());

        // scale then unscale is the identity on the whole value grid
        for k in 0..=24 {
            let v = raw(&[k as f64]);
            let back = v.scale(24.0).unwrap().unscale(24.0);
            assert_eq!(back, v, "round trip failed for {k}");
        }
    }

    #[test]
    fn split_counts_match_published_arithmetic() {
        // 40,000 sets: 1,000 validation, remainder 80/20 = 31,200/7,800
        assert_eq!(split_counts(40_000, 1_000).unwrap(), (1_000, 31_200, 7_800));
        // as vectors: 24,000 / 748,800 / 187,200
        let (v, tr, te) = split_counts(40_000, 1_000).unwrap();
        assert_eq!((v * 24, tr * 24, te * 24), (24_000, 748_800, 187_200));
        assert_eq!(split_counts(12, 2).unwrap(), (2, 8, 2));
        assert!(split_counts(3, 2).is_err());
    }

    #[test]
    fn generate_dataset_small_structure() {
        let cfg = desk_cfg(12, 2, 5);
        let mut rng = Rng::new(cfg.seed);
        let splits = generate_dataset(&cfg, &mut rng).unwrap();
        assert_eq!(splits.validation.len(), 2);
        assert_eq!(splits.train.len(), 8);
        assert_eq!(splits.test.len(), 2);

        // no canonical-form collisions anywhere, brute-force check
        let mut seen = HashSet::new();
        for ps in splits
            .validation
            .iter()
            .chain(&splits.train)
            .chain(&splits.test)
        {
            assert_eq!(ps.members.len(), 24);
            let canon = canonical_form(&ps.members[0], 4).unwrap();
            for m in &ps.members {
                assert_eq!(canonical_form(m, 4).unwrap(), canon);
            }
            assert!(seen.insert(canonical_key(&canon)));
        }
    }

    #[test]
    fn generate_dataset_rejects_too_few_sets() {
        let cfg = desk_cfg(3, 2, 5);
        let mut rng = Rng::new(5);
        assert!(matches!(
            generate_dataset(&cfg, &mut rng),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn generate_dataset_is_deterministic() {
        let cfg = desk_cfg(20, 3, 99);
        let a = generate_dataset(&cfg, &mut Rng::new(cfg.seed)).unwrap();
        let b = generate_dataset(&cfg, &mut Rng::new(cfg.seed)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn splits_roundtrip_through_files() {
        let cfg = desk_cfg(15, 3, 21);
        let splits = generate_dataset(&cfg, &mut Rng::new(cfg.seed)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let manifest = write_splits(&splits, dir.path()).unwrap();
        assert_eq!(manifest.train_sets, splits.train.len());
        let loaded = load_splits(dir.path()).unwrap();
        assert_eq!(loaded, splits);

        // byte-identical rewrite
        let dir2 = tempfile::tempdir().unwrap();
        write_splits(&splits, dir2.path()).unwrap();
        for f in [TRAIN_FILE, TEST_FILE, VALIDATION_FILE, MANIFEST_FILE] {
            let a = fs::read(dir.path().join(f)).unwrap();
            let b = fs::read(dir2.path().join(f)).unwrap();
            assert_eq!(a, b, "file {f} differs between identical writes");
        }
    }

    #[test]
    fn load_rejects_corrupt_files() {
        let cfg = desk_cfg(8, 2, 4);
        let splits = generate_dataset(&cfg, &mut Rng::new(cfg.seed)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        write_splits(&splits, dir.path()).unwrap();

        // corrupt the header
        let train_path = dir.path().join(TRAIN_FILE);
        let text = fs::read_to_string(&train_path).unwrap();
        fs::write(&train_path, text.replacen("permvec-dataset", "bogus", 1)).unwrap();
        assert!(matches!(
            load_splits(dir.path()),
            Err(Error::Format { .. })
        ));
    }

    proptest! {
        // applying a permutation then its inverse returns the vector exactly
        #[test]
        fn permutation_inverse_roundtrip(seed in 0u64..500) {
            let mut rng = Rng::new(seed);
            let v = RawVector((0..24).map(|_| rng.next_below(25) as f64).collect());
            let perms = all_permutations(4);
            let p = &perms[rng.next_below(perms.len())];
            let there = apply_permutation(&v, p).unwrap();
            let back = apply_permutation(&there, &p.inverse()).unwrap();
            prop_assert_eq!(back, v);
        }

        // canonical forms are equal exactly for orbit-equivalent vectors
        #[test]
        fn canonical_form_separates_orbits(seed in 0u64..200) {
            let mut rng = Rng::new(seed.wrapping_add(10_000));
            let v = RawVector((0..24).map(|_| rng.next_below(25) as f64).collect());
            let mut w = v.clone();
            // nudge one element to (almost surely) leave the orbit
            let i = rng.next_below(24);
            w.0[i] = (w.0[i] + 1.0) % 25.0;
            let cv = canonical_form(&v, 4).unwrap();
            let cw = canonical_form(&w, 4).unwrap();
            let equivalent = all_permutations(4).iter().any(|p| {
                apply_permutation(&v, p).unwrap() == w
            });
            prop_assert_eq!(cv == cw, equivalent);
        }
    }
}
