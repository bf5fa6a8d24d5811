use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use sha2::{Digest, Sha256};

use super::{Kernel, KernelError, ProofNode, Rule, Sequent};
use crate::arith::{fmt_point, point_json, Verdict};
use crate::terms::Point;

pub const MAX_CUT_DEPTH: usize = 64;

/// Position of a node: the premise indices followed from the root.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct NodePath(pub Vec<usize>);

impl NodePath {
    fn child(&self, i: usize) -> NodePath {
        let mut v = self.0.clone();
        v.push(i);
        NodePath(v)
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("root")?;
        for i in &self.0 {
            write!(f, ".{i}")?;
        }
        Ok(())
    }
}

impl Serialize for NodePath {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn ser_point<S: Serializer>(p: &Point, s: S) -> Result<S::Ok, S::Error> {
    point_json(p).serialize(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum TreeVerdict {
    Valid,
    /// An arithmetic leaf was refuted.
    Invalid {
        path: NodePath,
        #[serde(serialize_with = "ser_point")]
        witness: Point,
    },
    /// An arithmetic leaf could not be decided.
    Unknown { path: NodePath },
}

impl TreeVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, TreeVerdict::Valid)
    }
}

impl fmt::Display for TreeVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeVerdict::Valid => f.write_str("valid"),
            TreeVerdict::Invalid { path, witness } => write!(f, "invalid at {path}, counterexample {}", fmt_point(witness)),
            TreeVerdict::Unknown { path } => write!(f, "unknown at {path}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LeafStatus {
    Axiom,
    Arith(Verdict),
}

impl fmt::Display for LeafStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LeafStatus::Axiom => f.write_str("closed (axiom)"),
            LeafStatus::Arith(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for LeafStatus {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            LeafStatus::Axiom => serde_json::json!({ "verdict": "valid", "certificate": "axiom" }).serialize(s),
            LeafStatus::Arith(v) => v.serialize(s),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub verdict: TreeVerdict,
    /// Every leaf in depth-first order.
    pub leaves: Vec<(NodePath, LeafStatus)>,
    /// SHA-256 of the tree's canonical JSON.
    pub hash: String,
}

impl CheckReport {
    pub fn leaf(&self, path: &NodePath) -> Option<&LeafStatus> {
        self.leaves.iter().find(|(p, _)| p == path).map(|(_, s)| s)
    }
}

pub fn tree_hash(tree: &ProofNode) -> String {
    let json = serde_json::to_string(tree).expect("proof trees serialize");
    hex::encode(Sha256::digest(json.as_bytes()))
}

fn malformed(path: &NodePath, cause: KernelError) -> KernelError {
    KernelError::MalformedTree { path: path.clone(), cause: Box::new(cause) }
}

fn replay<'a>(
    kernel: &Kernel,
    node: &'a ProofNode,
    path: NodePath,
    cuts: usize,
    leaves: &mut Vec<(NodePath, Option<&'a Sequent>)>,
) -> Result<(), KernelError> {
    let cuts = cuts + usize::from(matches!(node.rule, Rule::Cut { .. } | Rule::DiffCut { .. }));
    if cuts > MAX_CUT_DEPTH {
        return Err(malformed(&path, KernelError::CutDepthExceeded(MAX_CUT_DEPTH)));
    }
    let expected = kernel.apply(&node.rule, &node.conclusion).map_err(|e| malformed(&path, e))?;
    if expected.len() != node.premises.len() {
        return Err(malformed(&path, KernelError::ArityMismatch { expected: expected.len(), found: node.premises.len() }));
    }
    for (i, (want, got)) in expected.iter().zip(&node.premises).enumerate() {
        if *want != got.conclusion {
            return Err(malformed(
                &path.child(i),
                KernelError::PremiseMismatch { expected: want.to_string(), found: got.conclusion.to_string() },
            ));
        }
    }
    match node.rule {
        Rule::Axiom => leaves.push((path.clone(), None)),
        Rule::Arith => leaves.push((path.clone(), Some(&node.conclusion))),
        _ => {}
    }
    for (i, p) in node.premises.iter().enumerate() {
        replay(kernel, p, path.child(i), cuts, leaves)?;
    }
    Ok(())
}

/// Replays every rule instance and closes arithmetic leaves with the
/// oracle. Structural defects are errors; arithmetic outcomes are verdicts.
pub fn check_proof(kernel: &Kernel, tree: &ProofNode) -> Result<CheckReport, KernelError> {
    let mut pending = Vec::new();
    replay(kernel, tree, NodePath::default(), 0, &mut pending)?;
    let leaves: Vec<(NodePath, LeafStatus)> = pending
        .into_par_iter()
        .map(|(path, seq)| match seq {
            None => (path, LeafStatus::Axiom),
            Some(s) => (path, LeafStatus::Arith(kernel.close_by_arith(s))),
        })
        .collect();
    let invalid = leaves.iter().find_map(|(p, s)| match s {
        LeafStatus::Arith(Verdict::Invalid(w)) => Some(TreeVerdict::Invalid { path: p.clone(), witness: w.clone() }),
        _ => None,
    });
    let unknown = leaves.iter().find_map(|(p, s)| match s {
        LeafStatus::Arith(Verdict::Unknown) => Some(TreeVerdict::Unknown { path: p.clone() }),
        _ => None,
    });
    let verdict = invalid.or(unknown).unwrap_or(TreeVerdict::Valid);
    Ok(CheckReport { verdict, leaves, hash: tree_hash(tree) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::OdeSystem;
    use crate::formulas::fml;
    use crate::kernel::{Fml, Problem};

    fn di_proof(kernel: &Kernel, problem: &Problem) -> ProofNode {
        let goal = problem.sequent();
        let prem = kernel.apply(&Rule::DiffInd, &goal).unwrap();
        ProofNode::new(goal, Rule::DiffInd, vec![ProofNode::leaf(prem[0].clone(), Rule::Arith)])
    }

    #[test]
    fn rotation_checks() {
        let k = Kernel::default();
        let sys = OdeSystem::from_text(&[("x", "y"), ("y", "-x")], "true");
        let f = fml("x^2 + y^2 >= p^2");
        let tree = di_proof(&k, &Problem::new(sys, f.clone(), f));
        let r = check_proof(&k, &tree).unwrap();
        assert_eq!(r.verdict, TreeVerdict::Valid);
        assert_eq!(r.leaves.len(), 1);
        assert_eq!(r.hash.len(), 64);
    }

    #[test]
    fn refuted_leaf_is_invalid() {
        let k = Kernel::default();
        let sys = OdeSystem::from_text(&[("x", "1"), ("y", "y")], "true");
        let f = fml("-(x-y)^2 >= 0");
        let tree = di_proof(&k, &Problem::new(sys, f.clone(), f));
        match check_proof(&k, &tree).unwrap().verdict {
            TreeVerdict::Invalid { path, witness } => {
                assert_eq!(path, NodePath(vec![0]));
                assert!(!fml("-2*(x-y)*(1-y) >= 0").eval(&witness).unwrap());
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn tampering_is_detected() {
        let k = Kernel::default();
        let sys = OdeSystem::from_text(&[("x", "y"), ("y", "-x")], "true");
        let f = fml("x^2 + y^2 >= 1");
        let mut tree = di_proof(&k, &Problem::new(sys, f.clone(), f));
        tree.premises[0].conclusion.succedent = vec![Fml::Plain(fml("1 >= 0"))];
        assert!(matches!(check_proof(&k, &tree), Err(KernelError::MalformedTree { .. })));
        tree.premises.clear();
        assert!(matches!(check_proof(&k, &tree), Err(KernelError::MalformedTree { .. })));
    }

    #[test]
    fn cut_depth_is_bounded() {
        let k = Kernel::default();
        fn nest(k: &Kernel, s: Sequent, depth: usize) -> ProofNode {
            if depth == 0 {
                return ProofNode::leaf(s, Rule::Axiom);
            }
            let cut = Rule::Cut { formula: Fml::Plain(fml("x >= 0")) };
            let prem = k.apply(&cut, &s).unwrap();
            let left = ProofNode::leaf(prem[0].clone(), Rule::Axiom);
            let right = nest(k, prem[1].clone(), depth - 1);
            ProofNode::new(s, cut, vec![left, right])
        }
        let s = Sequent::plain(&[fml("x >= 0")], &fml("x >= 0"));
        assert!(check_proof(&k, &nest(&k, s.clone(), MAX_CUT_DEPTH)).unwrap().verdict.is_valid());
        let node = nest(&k, s, MAX_CUT_DEPTH + 1);
        assert!(matches!(
            check_proof(&k, &node),
            Err(KernelError::MalformedTree { cause, .. }) if matches!(*cause, KernelError::CutDepthExceeded(_))
        ));
    }
}
