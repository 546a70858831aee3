//! Pruned decision trees for symmetric functions, with size accounting tied
//! to the spectral norm.
//!
//! The tree queries variables in index order. A branch becomes a leaf as
//! soon as its prefix contains at least r0 ones and at least r1 zeros: the
//! final Hamming weight is then confined to the window [r0, n-r1] where the
//! (possibly parity-twisted) function is a known constant. Branches that
//! never satisfy the rule run to depth n and read the function directly.
//!
//! When the chosen reference pattern is one of the signed parities, the tree
//! is built for the residual f*parity and flagged with a single up-front
//! parity query. The stored tree is not duplicated; the accounted size is
//! that of the tree with the parity root, where each parity outcome repeats
//! the residual tree but merges its depth-n leaves in sibling pairs (the
//! last variable is forced once the other n-1 bits and the parity are
//! known). Only leaves above depth n are therefore doubled.

use crate::error::{Error, Result};
use crate::exact::{binomial, binomial_row, Exact};
use crate::function::SymmetricFunction;
use crate::spectrum::{level_spectrum, spectral_norm, walsh_hadamard};
use crate::structure::r_parameters;
use crate::PDT_MATERIALIZE_LIMIT;
use num::{BigInt, Signed, Zero};

/// One node of a materialized tree. Variables are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PdtNode {
    Query {
        var: usize,
        zero: Box<PdtNode>,
        one: Box<PdtNode>,
    },
    Leaf(i8),
}

/// Pruned decision tree for one symmetric function.
///
/// `root` is `None` above the materialization limit; evaluation then walks
/// the pruning rule directly and size questions use the closed form.
#[derive(Debug, Clone)]
pub struct ParityDecisionTree {
    pub n: usize,
    pub r0: usize,
    pub r1: usize,
    /// Constant value of the residual on the weight window [r0, n-r1].
    pub window_value: i8,
    /// Whether evaluation multiplies the residual tree's answer by the
    /// parity of the input.
    pub parity_pre_query: bool,
    /// The function the stored tree computes: f itself, or f*parity when
    /// the pre-query flag is set.
    residual: SymmetricFunction,
    root: Option<Box<PdtNode>>,
}

fn build_node(
    g: &SymmetricFunction,
    r0: usize,
    r1: usize,
    window_value: i8,
    depth: usize,
    ones: usize,
    zeros: usize,
) -> PdtNode {
    if ones >= r0 && zeros >= r1 {
        return PdtNode::Leaf(window_value);
    }
    if depth == g.n() {
        return PdtNode::Leaf(g.levels()[ones]);
    }
    PdtNode::Query {
        var: depth + 1,
        zero: Box::new(build_node(g, r0, r1, window_value, depth + 1, ones, zeros + 1)),
        one: Box::new(build_node(g, r0, r1, window_value, depth + 1, ones + 1, zeros)),
    }
}

/// Build the pruned tree for f, choosing the reference pattern via
/// `r_parameters` (clamped functions use radii floor(n/2), which degrades
/// to the complete depth-n tree in the worst case).
pub fn build_pdt(f: &SymmetricFunction) -> ParityDecisionTree {
    let n = f.n();
    let rep = r_parameters(f);
    let parity_pre_query = rep.pattern.is_parity_type();
    let residual = if parity_pre_query {
        f.times_parity()
    } else {
        f.clone()
    };
    let window_value = match rep.pattern {
        crate::structure::Pattern::PlusOne | crate::structure::Pattern::PlusParity => 1,
        _ => -1,
    };
    let root = if n <= PDT_MATERIALIZE_LIMIT {
        Some(Box::new(build_node(
            &residual,
            rep.r0,
            rep.r1,
            window_value,
            0,
            0,
            0,
        )))
    } else {
        None
    };
    ParityDecisionTree {
        n,
        r0: rep.r0,
        r1: rep.r1,
        window_value,
        parity_pre_query,
        residual,
        root,
    }
}

/// Evaluate the tree at x (x[i] is variable i+1). Agrees with the source f
/// on every input.
pub fn eval_pdt(tree: &ParityDecisionTree, x: &[bool]) -> Result<i8> {
    if x.len() != tree.n {
        return Err(Error::LengthMismatch {
            got: x.len(),
            expected: tree.n,
        });
    }
    let residual_value = match &tree.root {
        Some(root) => {
            let mut node = root.as_ref();
            loop {
                match node {
                    PdtNode::Leaf(v) => break *v,
                    PdtNode::Query { var, zero, one } => {
                        node = if x[*var - 1] { one } else { zero };
                    }
                }
            }
        }
        None => {
            // Virtual walk of the same pruning rule.
            let (mut ones, mut zeros) = (0usize, 0usize);
            let mut value = None;
            for &bit in x {
                if ones >= tree.r0 && zeros >= tree.r1 {
                    value = Some(tree.window_value);
                    break;
                }
                if bit {
                    ones += 1;
                } else {
                    zeros += 1;
                }
            }
            value.unwrap_or_else(|| {
                if ones >= tree.r0 && zeros >= tree.r1 {
                    tree.window_value
                } else {
                    tree.residual.levels()[ones]
                }
            })
        }
    };
    if tree.parity_pre_query {
        let parity: i8 = if x.iter().filter(|&&b| b).count() % 2 == 0 {
            1
        } else {
            -1
        };
        Ok(residual_value * parity)
    } else {
        Ok(residual_value)
    }
}

/// Closed-form leaf census of the pruned (single, undoubled) tree, split
/// into leaves above depth n and leaves at depth n.
///
/// A pruned leaf appears at the first prefix satisfying the rule; its last
/// bit is the one that completes either quota, giving C(i-1, r0-1) prefixes
/// of length i ending in a one (when i - r0 >= r1) and C(i-1, r1-1) ending
/// in a zero (when i - r1 >= r0). Unpruned depth-n leaves have final weight
/// outside [r0, n-r1]. The degenerate r0 = r1 = 0 tree is the single root
/// leaf.
pub fn pruned_leaf_profile(n: usize, r0: usize, r1: usize) -> (BigInt, BigInt) {
    if r0 == 0 && r1 == 0 {
        return (BigInt::from(1), BigInt::zero());
    }
    let mut shallow = BigInt::zero();
    let mut deep = BigInt::zero();
    for i in 1..=n {
        let mut at_depth = BigInt::zero();
        if r0 >= 1 && i >= r0 && i - r0 >= r1 {
            at_depth += binomial(i - 1, r0 - 1);
        }
        if r1 >= 1 && i >= r1 && i - r1 >= r0 {
            at_depth += binomial(i - 1, r1 - 1);
        }
        if i < n {
            shallow += at_depth;
        } else {
            deep += at_depth;
        }
    }
    let row = binomial_row(n);
    for w in 0..r0.min(n + 1) {
        deep += &row[w];
    }
    for w in 0..r1.min(n + 1) {
        deep += &row[n - w];
    }
    (shallow, deep)
}

/// Total leaf count of the pruned (single, undoubled) tree.
pub fn pruned_leaf_count(n: usize, r0: usize, r1: usize) -> BigInt {
    let (shallow, deep) = pruned_leaf_profile(n, r0, r1);
    shallow + deep
}

/// Leaf count with the size bound it is measured against.
#[derive(Debug, Clone)]
pub struct LeafCountReport {
    /// Accounted size of the tree computing f itself. Under the parity flag
    /// the residual tree is repeated per parity outcome with its depth-n
    /// sibling leaves merged, so this is twice the above-depth-n leaves plus
    /// the depth-n leaves; without the flag it equals `residual_leaves`.
    pub leaves: BigInt,
    /// Leaves of the stored (single, undoubled) tree.
    pub residual_leaves: BigInt,
    /// 2 (C(n,r0) + C(n,r1)) without the parity flag, 4 (...) with it.
    pub bound: BigInt,
    /// Whether leaves <= bound. The refined unflagged bound can be exceeded
    /// — by clamped complete trees (first at n = 10) and by one-sided
    /// windows whose sub-window weight classes outnumber C(n, r0) (first at
    /// n = 9) — so this is reported rather than assumed. The doubled bound
    /// has no known violation on the exhaustive n <= 12 corpus.
    pub within_bound: bool,
}

fn profile_materialized(node: &PdtNode, depth: usize, n: usize) -> (BigInt, BigInt) {
    match node {
        PdtNode::Leaf(_) => {
            if depth == n {
                (BigInt::zero(), BigInt::from(1))
            } else {
                (BigInt::from(1), BigInt::zero())
            }
        }
        PdtNode::Query { zero, one, .. } => {
            let (s0, d0) = profile_materialized(zero, depth + 1, n);
            let (s1, d1) = profile_materialized(one, depth + 1, n);
            (s0 + s1, d0 + d1)
        }
    }
}

/// Exact leaf count: traversal when the tree is materialized, closed form
/// otherwise. The two always agree (tested).
pub fn leaf_count(tree: &ParityDecisionTree) -> LeafCountReport {
    let (shallow, deep) = match &tree.root {
        Some(root) => profile_materialized(root, 0, tree.n),
        None => pruned_leaf_profile(tree.n, tree.r0, tree.r1),
    };
    let residual_leaves = &shallow + &deep;
    let factor = if tree.parity_pre_query { 4 } else { 2 };
    let bound =
        BigInt::from(factor) * (binomial(tree.n, tree.r0) + binomial(tree.n, tree.r1));
    let leaves = if tree.parity_pre_query {
        BigInt::from(2) * shallow + deep
    } else {
        residual_leaves.clone()
    };
    let within_bound = leaves <= bound;
    LeafCountReport {
        leaves,
        residual_leaves,
        bound,
        within_bound,
    }
}

/// Spectral-norm size certificate: the norm never exceeds the leaf count,
/// and (for small n) each leaf's subcube indicator has spectral norm
/// exactly 1, which is what makes leaf counting a norm bound.
#[derive(Debug, Clone)]
pub struct SizeCertificate {
    pub n: usize,
    pub l1_norm: Exact,
    pub leaves: BigInt,
    pub norm_within_size: bool,
    /// How many leaf indicators were audited (0 when n > 10 or the tree is
    /// not materialized).
    pub indicators_checked: usize,
    /// All audited indicators had unit spectral norm.
    pub indicators_unit: bool,
}

fn collect_leaf_paths(
    node: &PdtNode,
    path: &mut Vec<(usize, bool)>,
    out: &mut Vec<Vec<(usize, bool)>>,
) {
    match node {
        PdtNode::Leaf(_) => out.push(path.clone()),
        PdtNode::Query { var, zero, one } => {
            path.push((*var, false));
            collect_leaf_paths(zero, path, out);
            path.pop();
            path.push((*var, true));
            collect_leaf_paths(one, path, out);
            path.pop();
        }
    }
}

/// Audit the tree against its source function's spectral norm.
pub fn l1_size_certificate(
    f: &SymmetricFunction,
    tree: &ParityDecisionTree,
) -> Result<SizeCertificate> {
    if f.n() != tree.n {
        return Err(Error::LengthMismatch {
            got: tree.n,
            expected: f.n(),
        });
    }
    let l1 = spectral_norm(&level_spectrum(f));
    let count = leaf_count(tree);
    let norm_within_size =
        l1 <= Exact::from_integer(count.leaves.clone());

    let mut indicators_checked = 0usize;
    let mut indicators_unit = true;
    if tree.n <= 10 {
        if let Some(root) = &tree.root {
            let mut paths = Vec::new();
            collect_leaf_paths(root, &mut Vec::new(), &mut paths);
            let full = 1usize << tree.n;
            for path in &paths {
                let mut table = vec![0i64; full];
                for (x, slot) in table.iter_mut().enumerate() {
                    let inside = path
                        .iter()
                        .all(|&(var, bit)| (x >> (var - 1)) & 1 == usize::from(bit));
                    *slot = i64::from(inside);
                }
                let transform = walsh_hadamard(&table)?;
                let abs_sum: i64 = transform.iter().map(|v| v.abs()).sum();
                indicators_checked += 1;
                if abs_sum != full as i64 {
                    indicators_unit = false;
                }
            }
        }
    }
    Ok(SizeCertificate {
        n: tree.n,
        l1_norm: l1,
        leaves: count.leaves,
        norm_within_size,
        indicators_checked,
        indicators_unit,
    })
}

/// Text export: optional `PARITY` line, then the tree in preorder with the
/// zero subtree first; one node per line as `Q i` or `LEAF +1` / `LEAF -1`.
pub fn export_pdt(tree: &ParityDecisionTree) -> Result<String> {
    let root = tree
        .root
        .as_ref()
        .ok_or(Error::TreeNotMaterialized(tree.n))?;
    let mut out = String::new();
    if tree.parity_pre_query {
        out.push_str("PARITY\n");
    }
    fn walk(node: &PdtNode, out: &mut String) {
        match node {
            PdtNode::Leaf(v) => {
                out.push_str(if *v > 0 { "LEAF +1\n" } else { "LEAF -1\n" });
            }
            PdtNode::Query { var, zero, one } => {
                out.push_str(&format!("Q {var}\n"));
                walk(zero, out);
                walk(one, out);
            }
        }
    }
    walk(root, &mut out);
    Ok(out)
}
