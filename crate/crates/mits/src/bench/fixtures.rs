//! Pinned reference traces: three published reasoning paths (one per
//! dataset) with their recorded dual-context log-probabilities and per-step
//! PMI values. Used by the fixture test suite and the `selftest` subcommand.

use super::trace::TraceNode;

pub struct FixtureCase {
    pub dataset: &'static str,
    pub nodes: &'static [(usize, usize, &'static str, f64, f64, f64)],
}

pub const STRATEGYQA: FixtureCase = FixtureCase {
    dataset: "StrategyQA",
    nodes: &[
        (
            3,
            1,
            "Identifying CAS Number. CAS Number 8009-03-8 refers to a compound known as Toluene diisocyanate (TDI).",
            -55.45,
            -85.48,
            30.04,
        ),
        (
            8,
            2,
            "Understanding Toluene diisocyanate. Toluene diisocyanate (TDI) is a chemical compound used in the production of polyurethane materials, which can be found in various products like paints, adhesives, and some foam products.",
            -45.46,
            -54.48,
            9.02,
        ),
        (
            23,
            3,
            "TDI and Rashes. TDI exposure can cause skin rashes in some individuals, but it is not generally considered to be inherently harmful to the majority of people with rash.",
            -68.64,
            -106.24,
            37.60,
        ),
        (
            42,
            4,
            "Conclusion: Based on the information available, TDI is not specifically harmful to rashes for the majority of people. Therefore, the statement that it is harmful for a rash is false. The answer is [B. False].",
            -90.02,
            -140.89,
            50.87,
        ),
    ],
};

pub const ARC_CHALLENGE: FixtureCase = FixtureCase {
    dataset: "ARC-Challenge",
    nodes: &[
        (
            2,
            1,
            "The main issue is the exposure of ammonia, which is a hazardous substance, especially when not properly contained.",
            -57.87,
            -79.15,
            21.28,
        ),
        (
            9,
            2,
            "When ammonia is spilled or not properly contained, it can evaporate, leading to inhalation risks and potential health hazards.",
            -42.67,
            -51.71,
            9.04,
        ),
        (
            35,
            3,
            "Look at the options. \n- Option A suggests recyling the old ammonia bottle, which is not relevant to the safety concerns of the new container.\n- Option B involves labeling the new container, which is essential. Without proper labeling, others may not realize its contents.\n- Option C suggests heating the new container to seal the lid. This is not effective for sealing a container and could actually cause damage.\n- Option D involves storing the container in the refrigerator. While this might help with the smell, it does not enhance the overall safety.",
            -143.80,
            -263.64,
            119.84,
        ),
        (
            54,
            4,
            "Determine the most effective safety measure. Option B ensures that others, including the scientist herself, can identify the contents and take necessary precautions.\n\nTherefore, the most appropriate action to ensure safety is [B. Label the new container clearly].",
            -145.40,
            -194.64,
            49.24,
        ),
    ],
};

pub const COMMONSENSEQA: FixtureCase = FixtureCase {
    dataset: "CommonsenseQA",
    nodes: &[
        (
            3,
            1,
            "Context of the Question. The question states that the weasel is causing a problem by gaining access to chicken eggs, which implies a location where eggs are stored and where a weasel could potentially enter.",
            -86.52,
            -137.24,
            50.72,
        ),
        (
            8,
            2,
            "Analyze the Options.\n- A. Forrest: Forrests are wild, natural habitats and are not typically used for storing agricultural products.\n- B. Barn: Barns are places where agricultural products, including eggs, are commonly stored.\n- C. Public Office: Public offices are indoor, administrative spaces that are not typically associated with storing agricultural products.\n- D. Out of doors: Out of doors refers to an open, outdoor area, which is not suitable for storing eggs.\n- E. Freezer: A freezer is a cold storage unit designed for keeping food cold, not specifically for storing eggs.",
            -127.25,
            -210.57,
            83.32,
        ),
        (
            16,
            3,
            "Determine the Most Likely Answer.\nGiven the context of the question and the function of each option, the most logical place where a weasel would be able to access chicken eggs is inside a barn.",
            -49.20,
            -68.81,
            19.61,
        ),
        (
            43,
            4,
            "Therefore, the answer is [B. barn].",
            -66.43,
            -89.31,
            22.88,
        ),
    ],
};

pub const ALL_CASES: &[&FixtureCase] = &[&STRATEGYQA, &ARC_CHALLENGE, &COMMONSENSEQA];

fn to_trace(case: &FixtureCase) -> Vec<TraceNode> {
    case.nodes
        .iter()
        .map(|&(index, depth, content, logp_conditional, logp_marginal, pmi)| TraceNode {
            index,
            depth,
            content: content.to_string(),
            logp_conditional,
            logp_marginal,
            pmi,
        })
        .collect()
}

pub fn strategyqa_chain() -> Vec<TraceNode> {
    to_trace(&STRATEGYQA)
}

pub fn arc_chain() -> Vec<TraceNode> {
    to_trace(&ARC_CHALLENGE)
}

pub fn commonsenseqa_chain() -> Vec<TraceNode> {
    to_trace(&COMMONSENSEQA)
}

/// Check every pinned node: recomputed delta within `tol` of the recorded
/// PMI. Returns one human-readable line per node.
pub fn check_all(tol: f64) -> Vec<(String, bool)> {
    let mut results = Vec::new();
    for case in ALL_CASES {
        for &(index, _, _, cond, marg, pmi) in case.nodes {
            let delta = cond - marg;
            let ok = (delta - pmi).abs() <= tol;
            results.push((
                format!(
                    "{} node {index}: delta {delta:.4} vs recorded {pmi:.2} ({})",
                    case.dataset,
                    if ok { "ok" } else { "MISMATCH" }
                ),
                ok,
            ));
        }
    }
    results
}
