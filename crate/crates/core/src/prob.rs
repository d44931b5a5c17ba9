//! Finite-alphabet distributions, channels and information measures.
//!
//! Every measure is reported in bits. Tables are dense and row-major with the
//! output symbol on the last axis, so a channel `W(y|x,s)` is stored as
//! `matrix[(x * |S| + s) * |Y| + y]`.

use thiserror::Error;

/// Probabilities at or below this value contribute nothing to log terms.
pub const ZERO_PROB: f64 = 1e-15;
/// Mass deviation up to which a table is silently renormalized.
pub const REPAIR_TOL: f64 = 1e-9;
/// Upper bound on the number of cells of any dense table.
pub const MAX_CELLS: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProbError {
    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,
    #[error("entry {index} is not a probability: {value}")]
    BadEntry { index: usize, value: f64 },
    #[error("row {row} sums to {sum}, which is not 1 within {REPAIR_TOL}")]
    NotNormalized { row: usize, sum: f64 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("unknown axis `{0}`")]
    UnknownAxis(String),
    #[error("axis `{0}` appears in more than one group")]
    OverlappingAxes(String),
    #[error("duplicate axis name `{0}`")]
    DuplicateAxis(String),
    #[error("table with {cells} cells exceeds the {MAX_CELLS} cell cap")]
    TooLarge { cells: usize },
}

pub type Result<T, E = ProbError> = std::result::Result<T, E>;

fn checked_product(sizes: &[usize]) -> Result<usize> {
    let mut cells: usize = 1;
    for &s in sizes {
        if s == 0 {
            return Err(ProbError::EmptyAlphabet);
        }
        cells = cells
            .checked_mul(s)
            .filter(|&c| c <= MAX_CELLS)
            .ok_or(ProbError::TooLarge { cells: usize::MAX })?;
    }
    Ok(cells)
}

/// Validate one probability vector in place, repairing tiny normalization drift.
fn normalize_row(row: &mut [f64], row_index: usize, offset: usize) -> Result<()> {
    let mut sum = 0.0;
    for (i, &p) in row.iter().enumerate() {
        if !p.is_finite() || p < 0.0 {
            return Err(ProbError::BadEntry {
                index: offset + i,
                value: p,
            });
        }
        sum += p;
    }
    if (sum - 1.0).abs() > REPAIR_TOL {
        return Err(ProbError::NotNormalized {
            row: row_index,
            sum,
        });
    }
    if sum != 1.0 {
        row.iter_mut().for_each(|p| *p /= sum);
    }
    Ok(())
}

/// `-sum p log2 p` over an unchecked slice.
pub(crate) fn entropy_bits(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > ZERO_PROB)
        .map(|&p| -p * p.log2())
        .sum()
}

/// A probability distribution over `0..len`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dist {
    probs: Vec<f64>,
}

impl Dist {
    pub fn new(mut probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(ProbError::EmptyAlphabet);
        }
        normalize_row(&mut probs, 0, 0)?;
        Ok(Self { probs })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(ProbError::EmptyAlphabet);
        }
        Ok(Self {
            probs: vec![1.0 / n as f64; n],
        })
    }

    pub fn point(n: usize, at: usize) -> Result<Self> {
        if at >= n {
            return Err(ProbError::ShapeMismatch(format!(
                "point mass at {at} outside alphabet of size {n}"
            )));
        }
        let mut probs = vec![0.0; n];
        probs[at] = 1.0;
        Ok(Self { probs })
    }

    /// Bernoulli law `(1 - p, p)`.
    pub fn bernoulli(p: f64) -> Result<Self> {
        Self::new(vec![1.0 - p, p])
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn entropy(&self) -> f64 {
        entropy_bits(&self.probs)
    }
}

/// Shannon entropy of `d` in bits.
pub fn entropy(d: &Dist) -> f64 {
    d.entropy()
}

/// Stochastic map from a tuple of input symbols to a distribution over outputs.
///
/// Also used for every conditional factor of a coding law: `P(U|S)` is a
/// channel with `input_shape == [|S|]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    input_shape: Vec<usize>,
    output_size: usize,
    matrix: Vec<f64>,
}

impl Channel {
    pub fn new(input_shape: Vec<usize>, output_size: usize, mut matrix: Vec<f64>) -> Result<Self> {
        let rows = checked_product(&input_shape)?;
        if output_size == 0 {
            return Err(ProbError::EmptyAlphabet);
        }
        let cells = rows
            .checked_mul(output_size)
            .filter(|&c| c <= MAX_CELLS)
            .ok_or(ProbError::TooLarge { cells: usize::MAX })?;
        if matrix.len() != cells {
            return Err(ProbError::ShapeMismatch(format!(
                "expected {cells} entries for input shape {input_shape:?} and {output_size} outputs, got {}",
                matrix.len()
            )));
        }
        for (r, row) in matrix.chunks_mut(output_size).enumerate() {
            normalize_row(row, r, r * output_size)?;
        }
        Ok(Self {
            input_shape,
            output_size,
            matrix,
        })
    }

    /// Build a channel row by row; `f` receives the input tuple.
    pub fn from_fn(
        input_shape: Vec<usize>,
        output_size: usize,
        mut f: impl FnMut(&[usize]) -> Vec<f64>,
    ) -> Result<Self> {
        let rows = checked_product(&input_shape)?;
        let mut matrix = Vec::with_capacity(rows * output_size);
        let mut idx = vec![0usize; input_shape.len()];
        for _ in 0..rows {
            let row = f(&idx);
            if row.len() != output_size {
                return Err(ProbError::ShapeMismatch(format!(
                    "row for input {idx:?} has {} entries, expected {output_size}",
                    row.len()
                )));
            }
            matrix.extend(row);
            advance(&mut idx, &input_shape);
        }
        Self::new(input_shape, output_size, matrix)
    }

    /// Deterministic map `y = f(input)`.
    pub fn deterministic(
        input_shape: Vec<usize>,
        output_size: usize,
        mut f: impl FnMut(&[usize]) -> usize,
    ) -> Result<Self> {
        Self::from_fn(input_shape, output_size, |idx| {
            let mut row = vec![0.0; output_size];
            if let Some(p) = row.get_mut(f(idx)) {
                *p = 1.0;
            }
            row
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::deterministic(vec![n], n, |i| i[0])
    }

    /// Channel whose output law ignores the input.
    pub fn constant(input_shape: Vec<usize>, output: &Dist) -> Result<Self> {
        Self::from_fn(input_shape, output.len(), |_| output.probs().to_vec())
    }

    /// Binary symmetric channel with crossover `p`.
    pub fn bsc(p: f64) -> Result<Self> {
        Self::new(vec![2], 2, vec![1.0 - p, p, p, 1.0 - p])
    }

    pub fn input_shape(&self) -> &[usize] {
        &self.input_shape
    }

    pub fn output_size(&self) -> usize {
        self.output_size
    }

    pub fn num_rows(&self) -> usize {
        self.matrix.len() / self.output_size
    }

    pub fn matrix(&self) -> &[f64] {
        &self.matrix
    }

    pub fn row_index(&self, input: &[usize]) -> usize {
        debug_assert_eq!(input.len(), self.input_shape.len());
        input
            .iter()
            .zip(&self.input_shape)
            .fold(0, |acc, (&i, &n)| acc * n + i)
    }

    pub fn row_at(&self, row: usize) -> &[f64] {
        &self.matrix[row * self.output_size..(row + 1) * self.output_size]
    }

    pub fn row(&self, input: &[usize]) -> &[f64] {
        self.row_at(self.row_index(input))
    }

    pub fn prob(&self, input: &[usize], output: usize) -> f64 {
        self.row(input)[output]
    }

    /// Cascade `self` with `w_tilde` acting on the output.
    pub fn compose(&self, w_tilde: &Channel) -> Result<Channel> {
        compose(self, w_tilde)
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_abs_diff(&self, other: &Channel) -> Result<f64> {
        if self.input_shape != other.input_shape || self.output_size != other.output_size {
            return Err(ProbError::ShapeMismatch(
                "channels have different shapes".into(),
            ));
        }
        Ok(self
            .matrix
            .iter()
            .zip(&other.matrix)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

/// `(w1 ∘ w̃)(y2|in) = Σ_{y1} w1(y1|in) w̃(y2|y1)`.
pub fn compose(w1: &Channel, w_tilde: &Channel) -> Result<Channel> {
    if w_tilde.input_shape != [w1.output_size] {
        return Err(ProbError::ShapeMismatch(format!(
            "cannot compose: first channel has {} outputs, second expects input shape {:?}",
            w1.output_size, w_tilde.input_shape
        )));
    }
    let out = w_tilde.output_size;
    let mut matrix = vec![0.0; w1.num_rows() * out];
    for r in 0..w1.num_rows() {
        let dst = &mut matrix[r * out..(r + 1) * out];
        for (y1, &p) in w1.row_at(r).iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            for (d, &q) in dst.iter_mut().zip(w_tilde.row_at(y1)) {
                *d += p * q;
            }
        }
    }
    Channel::new(w1.input_shape.clone(), out, matrix)
}

/// Family of channels `W_θ(y|x,s)` over shared alphabets plus the state law.
#[derive(Debug, Clone, PartialEq)]
pub struct CompoundDmc {
    channels: Vec<Channel>,
    state_law: Dist,
}

impl CompoundDmc {
    pub fn new(channels: Vec<Channel>, state_law: Dist) -> Result<Self> {
        let first = channels.first().ok_or_else(|| {
            ProbError::ShapeMismatch("compound channel needs at least one component".into())
        })?;
        if first.input_shape.len() != 2 {
            return Err(ProbError::ShapeMismatch(format!(
                "components must have input shape [|X|, |S|], got {:?}",
                first.input_shape
            )));
        }
        for (k, w) in channels.iter().enumerate() {
            if w.input_shape != first.input_shape || w.output_size != first.output_size {
                return Err(ProbError::ShapeMismatch(format!(
                    "component {k} alphabets differ from component 0"
                )));
            }
        }
        if state_law.len() != first.input_shape[1] {
            return Err(ProbError::ShapeMismatch(format!(
                "state law has {} symbols but channels expect |S| = {}",
                state_law.len(),
                first.input_shape[1]
            )));
        }
        Ok(Self {
            channels,
            state_law,
        })
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn channel(&self, theta: usize) -> Option<&Channel> {
        self.channels.get(theta)
    }

    pub fn state_law(&self) -> &Dist {
        &self.state_law
    }

    pub fn num_components(&self) -> usize {
        self.channels.len()
    }

    pub fn x_size(&self) -> usize {
        self.channels[0].input_shape[0]
    }

    pub fn s_size(&self) -> usize {
        self.channels[0].input_shape[1]
    }

    pub fn y_size(&self) -> usize {
        self.channels[0].output_size
    }

    /// A compound channel made of a single component.
    pub fn component(&self, theta: usize) -> Option<CompoundDmc> {
        Some(CompoundDmc {
            channels: vec![self.channels.get(theta)?.clone()],
            state_law: self.state_law.clone(),
        })
    }
}

/// Mixed-radix increment; returns false after wrapping around.
pub(crate) fn advance(idx: &mut [usize], sizes: &[usize]) -> bool {
    for d in (0..idx.len()).rev() {
        idx[d] += 1;
        if idx[d] < sizes[d] {
            return true;
        }
        idx[d] = 0;
    }
    false
}

/// Dense joint distribution over named finite variables.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTable {
    axes: Vec<String>,
    sizes: Vec<usize>,
    data: Vec<f64>,
}

impl JointTable {
    pub fn new(axes: Vec<String>, sizes: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        if axes.len() != sizes.len() {
            return Err(ProbError::ShapeMismatch(format!(
                "{} axis names for {} sizes",
                axes.len(),
                sizes.len()
            )));
        }
        for (i, a) in axes.iter().enumerate() {
            if axes[..i].contains(a) {
                return Err(ProbError::DuplicateAxis(a.clone()));
            }
        }
        let cells = checked_product(&sizes)?;
        if data.len() != cells {
            return Err(ProbError::ShapeMismatch(format!(
                "expected {cells} cells, got {}",
                data.len()
            )));
        }
        let mut data = data;
        normalize_row(&mut data, 0, 0)?;
        Ok(Self { axes, sizes, data })
    }

    /// Fill a table cell by cell; `f` receives the full index tuple.
    pub fn from_fn(axes: &[(&str, usize)], mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let sizes: Vec<usize> = axes.iter().map(|a| a.1).collect();
        let cells = checked_product(&sizes)?;
        let mut data = Vec::with_capacity(cells);
        let mut idx = vec![0usize; sizes.len()];
        for _ in 0..cells {
            data.push(f(&idx));
            advance(&mut idx, &sizes);
        }
        Self::new(axes.iter().map(|a| a.0.to_string()).collect(), sizes, data)
    }

    /// Product of independent marginals, in the given axis order.
    pub fn product(axes: &[(&str, &Dist)]) -> Result<Self> {
        let named: Vec<(&str, usize)> = axes.iter().map(|(n, d)| (*n, d.len())).collect();
        Self::from_fn(&named, |idx| {
            idx.iter()
                .zip(axes)
                .map(|(&i, (_, d))| d.probs()[i])
                .product()
        })
    }

    pub fn axes(&self) -> &[String] {
        &self.axes
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    fn axis_index(&self, name: &str) -> Result<usize> {
        self.axes
            .iter()
            .position(|a| a == name)
            .ok_or_else(|| ProbError::UnknownAxis(name.to_string()))
    }

    fn axis_indices(&self, names: &[&str]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(names.len());
        for n in names {
            let i = self.axis_index(n)?;
            if out.contains(&i) {
                return Err(ProbError::DuplicateAxis(n.to_string()));
            }
            out.push(i);
        }
        Ok(out)
    }

    fn marginal_data(&self, keep: &[usize]) -> Vec<f64> {
        // stride of each source axis inside the marginal (0 when summed out)
        let mut strides = vec![0usize; self.sizes.len()];
        let mut acc = 1;
        for &k in keep.iter().rev() {
            strides[k] = acc;
            acc *= self.sizes[k];
        }
        let mut out = vec![0.0; acc];
        let mut idx = vec![0usize; self.sizes.len()];
        let mut target = 0usize;
        for &p in &self.data {
            out[target] += p;
            // odometer step maintaining `target` incrementally
            for d in (0..idx.len()).rev() {
                idx[d] += 1;
                target += strides[d];
                if idx[d] < self.sizes[d] {
                    break;
                }
                target -= strides[d] * idx[d];
                idx[d] = 0;
            }
        }
        out
    }

    /// Marginal table over `names`, in that order.
    pub fn marginal(&self, names: &[&str]) -> Result<JointTable> {
        let keep = self.axis_indices(names)?;
        let data = self.marginal_data(&keep);
        Ok(JointTable {
            axes: keep.iter().map(|&k| self.axes[k].clone()).collect(),
            sizes: keep.iter().map(|&k| self.sizes[k]).collect(),
            data,
        })
    }

    /// Joint entropy `H(names)` in bits; the empty group has entropy 0.
    pub fn entropy(&self, names: &[&str]) -> Result<f64> {
        let keep = self.axis_indices(names)?;
        Ok(entropy_bits(&self.marginal_data(&keep)))
    }

    /// Append a new axis `name` generated by `channel` from the axes `inputs`.
    pub fn attach(&self, inputs: &[&str], channel: &Channel, name: &str) -> Result<JointTable> {
        if self.axes.iter().any(|a| a == name) {
            return Err(ProbError::DuplicateAxis(name.to_string()));
        }
        let pos = self.axis_indices(inputs)?;
        let shape: Vec<usize> = pos.iter().map(|&p| self.sizes[p]).collect();
        if shape != channel.input_shape {
            return Err(ProbError::ShapeMismatch(format!(
                "channel input shape {:?} does not match axes {inputs:?} with sizes {shape:?}",
                channel.input_shape
            )));
        }
        let out = channel.output_size;
        let cells = self
            .data
            .len()
            .checked_mul(out)
            .filter(|&c| c <= MAX_CELLS)
            .ok_or(ProbError::TooLarge { cells: usize::MAX })?;
        let mut data = Vec::with_capacity(cells);
        let mut idx = vec![0usize; self.sizes.len()];
        let mut sub = vec![0usize; pos.len()];
        for &p in &self.data {
            for (s, &q) in sub.iter_mut().zip(&pos) {
                *s = idx[q];
            }
            let row = channel.row(&sub);
            data.extend(row.iter().map(|&w| p * w));
            advance(&mut idx, &self.sizes);
        }
        let mut axes = self.axes.clone();
        axes.push(name.to_string());
        let mut sizes = self.sizes.clone();
        sizes.push(out);
        Ok(JointTable { axes, sizes, data })
    }
}

fn check_disjoint(groups: &[&[&str]]) -> Result<()> {
    for (i, g) in groups.iter().enumerate() {
        for name in g.iter() {
            if groups[i + 1..].iter().any(|h| h.contains(name)) {
                return Err(ProbError::OverlappingAxes(name.to_string()));
            }
        }
    }
    Ok(())
}

fn concat<'a>(a: &[&'a str], b: &[&'a str]) -> Vec<&'a str> {
    a.iter().chain(b).copied().collect()
}

/// `I(A;B) = H(A) + H(B) - H(A,B)` in bits.
pub fn mutual_information(j: &JointTable, group_a: &[&str], group_b: &[&str]) -> Result<f64> {
    conditional_mutual_information(j, group_a, group_b, &[])
}

/// `I(A;B|C) = H(A,C) + H(B,C) - H(A,B,C) - H(C)` in bits.
pub fn conditional_mutual_information(
    j: &JointTable,
    group_a: &[&str],
    group_b: &[&str],
    cond: &[&str],
) -> Result<f64> {
    check_disjoint(&[group_a, group_b, cond])?;
    let ac = concat(group_a, cond);
    let bc = concat(group_b, cond);
    let abc = concat(&ac, group_b);
    Ok(j.entropy(&ac)? + j.entropy(&bc)? - j.entropy(&abc)? - j.entropy(cond)?)
}

/// `H(A|C)` in bits.
pub fn conditional_entropy(j: &JointTable, group: &[&str], cond: &[&str]) -> Result<f64> {
    check_disjoint(&[group, cond])?;
    Ok(j.entropy(&concat(group, cond))? - j.entropy(cond)?)
}
