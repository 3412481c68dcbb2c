//! End-to-end pipeline verification: solve 3-colorability directly, through
//! the list-homomorphism reduction, and through the homomorphism reduction,
//! then check that every stage agrees and every witness survives transport
//! across the reductions.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::partition::{verify_balanced, verify_grouping, BalanceParams, BalanceReport, GroupingReport};
use crate::reductions::{
    col_to_listhom, col_to_listhom_with_color_count, lift_3coloring, lift_witness, listhom_to_hom,
    project_3coloring, project_witness,
};
use crate::graph::SimpleGraph;
use crate::solver::{solve_hom, solve_kcol, solve_listhom, SolveBudget, SolveOutcome};

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub r: u64,
    /// Explicit color count; `None` derives `L = lambda * r` from the params.
    pub color_count: Option<u64>,
    pub params: BalanceParams,
    pub trim: bool,
    pub budget: SolveBudget,
}

impl PipelineConfig {
    pub fn relaxed(r: u64, color_count: u64, degree_bound: u32) -> Self {
        PipelineConfig {
            r,
            color_count: Some(color_count),
            params: BalanceParams::relaxed(degree_bound),
            trim: true,
            budget: SolveBudget::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// All three stages solved and agree on this decision.
    Consistent(bool),
    /// Two solved stages disagree.
    Disagreement,
    /// A stage erred or timed out before a disagreement was observed.
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct PipelineReport {
    pub base_n: u32,
    pub kcol: SolveOutcome,
    pub balance: Option<BalanceReport>,
    pub grouping: Option<GroupingReport>,
    /// Pattern and target sizes of the list-homomorphism stage.
    pub listhom_sizes: Option<(u32, u32)>,
    pub listhom: Option<SolveOutcome>,
    /// Pattern and target sizes of the homomorphism stage.
    pub hom_sizes: Option<(u32, u32)>,
    pub hom: Option<SolveOutcome>,
    /// Witness transports attempted on Yes decisions, with their outcomes.
    pub witness_checks: Vec<(String, bool)>,
    pub stage_error: Option<String>,
    pub verdict: Verdict,
}

impl PipelineReport {
    pub fn witnesses_ok(&self) -> bool {
        self.witness_checks.iter().all(|(_, ok)| *ok)
    }
}

impl std::fmt::Display for PipelineReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let show = |o: &SolveOutcome| match o {
            SolveOutcome::Yes(_) => "yes".to_string(),
            SolveOutcome::No => "no".to_string(),
            SolveOutcome::Timeout(n) => format!("timeout({n})"),
        };
        writeln!(f, "base graph: {} vertices", self.base_n)?;
        writeln!(f, "3-coloring: {}", show(&self.kcol))?;
        if let Some(b) = &self.balance {
            writeln!(f, "balanced-coloring properties: {}", if b.all_pass() { "pass" } else { "FAIL" })?;
        }
        if let Some(g) = &self.grouping {
            writeln!(
                f,
                "grouping: {} buckets, items 2-4 {}",
                g.bucket_count,
                if g.items_2_to_4() { "pass" } else { "FAIL" }
            )?;
        }
        if let (Some((pn, tn)), Some(o)) = (&self.listhom_sizes, &self.listhom) {
            writeln!(f, "list-hom stage: pattern {pn}, target {tn}: {}", show(o))?;
        }
        if let (Some((pn, tn)), Some(o)) = (&self.hom_sizes, &self.hom) {
            writeln!(f, "hom stage: pattern {pn}, target {tn}: {}", show(o))?;
        }
        for (name, ok) in &self.witness_checks {
            writeln!(f, "witness {}: {}", name, if *ok { "valid" } else { "INVALID" })?;
        }
        if let Some(err) = &self.stage_error {
            writeln!(f, "stage error: {err}")?;
        }
        match self.verdict {
            Verdict::Consistent(d) => writeln!(f, "verdict: consistent ({})", if d { "yes" } else { "no" }),
            Verdict::Disagreement => writeln!(f, "verdict: DISAGREEMENT"),
            Verdict::Inconclusive => writeln!(f, "verdict: inconclusive"),
        }
    }
}

/// Consistent only when all three stages solved and agree; any solved pair
/// that differs is a disagreement regardless of the remaining stage.
fn verdict_of(decisions: [Option<bool>; 3]) -> Verdict {
    let solved: Vec<bool> = decisions.iter().flatten().copied().collect();
    if solved.windows(2).any(|w| w[0] != w[1]) {
        return Verdict::Disagreement;
    }
    if solved.len() == 3 {
        Verdict::Consistent(solved[0])
    } else {
        Verdict::Inconclusive
    }
}

/// Runs all three stages on `g`, never short-circuiting on decisions, and
/// reports sizes, property checks, solver outcomes, witness transports and
/// the overall consistency verdict.
pub fn verify_pipeline(g: &SimpleGraph, config: &PipelineConfig) -> PipelineReport {
    let mut report = PipelineReport {
        base_n: g.n(),
        kcol: solve_kcol(g, 3, config.budget),
        balance: None,
        grouping: None,
        listhom_sizes: None,
        listhom: None,
        hom_sizes: None,
        hom: None,
        witness_checks: Vec::new(),
        stage_error: None,
        verdict: Verdict::Inconclusive,
    };

    let reduced = match config.color_count {
        Some(l) => col_to_listhom_with_color_count(g, config.r, l, &config.params, config.trim),
        None => col_to_listhom(g, config.r, &config.params, config.trim),
    };
    let reduced = match reduced {
        Ok(red) => red,
        Err(err) => {
            report.stage_error = Some(err.to_string());
            report.verdict = verdict_of([report.kcol.decision(), None, None]);
            return report;
        }
    };
    report.balance =
        Some(verify_balanced(g, reduced.grouped.base_coloring(), &config.params));
    report.grouping = Some(verify_grouping(&reduced.grouped, config.r));
    report.listhom_sizes = Some((reduced.instance.pattern().n(), reduced.instance.target().n()));
    let listhom_out = solve_listhom(&reduced.instance, config.budget);
    report.listhom = Some(listhom_out.clone());

    let hom_red = match listhom_to_hom(&reduced.instance) {
        Ok(hr) => hr,
        Err(err) => {
            report.stage_error = Some(err.to_string());
            report.verdict =
                verdict_of([report.kcol.decision(), listhom_out.decision(), None]);
            return report;
        }
    };
    report.hom_sizes = Some((hom_red.pattern.n(), hom_red.target.n()));
    let hom_out = solve_hom(&hom_red.pattern, &hom_red.target, config.budget);
    report.hom = Some(hom_out.clone());

    report.verdict = verdict_of([
        report.kcol.decision(),
        listhom_out.decision(),
        hom_out.decision(),
    ]);

    // Carry every available witness across the reductions and re-verify.
    if let SolveOutcome::Yes(kw) = &report.kcol {
        match lift_3coloring(&reduced, kw) {
            Ok(lw) => {
                report.witness_checks.push(("3-coloring encoded to list-hom".into(), true));
                match lift_witness(&reduced.instance, &lw, &hom_red) {
                    Ok(_) => report.witness_checks.push(("list-hom lifted to hom".into(), true)),
                    Err(_) => report.witness_checks.push(("list-hom lifted to hom".into(), false)),
                }
            }
            Err(_) => report.witness_checks.push(("3-coloring encoded to list-hom".into(), false)),
        }
    }
    if let Some(SolveOutcome::Yes(lw)) = &report.listhom {
        let ok = lift_witness(&reduced.instance, lw, &hom_red).is_ok();
        report.witness_checks.push(("solver list-hom witness lifted to hom".into(), ok));
        let ok = project_3coloring(&reduced, lw).is_ok();
        report.witness_checks.push(("solver list-hom witness decoded to 3-coloring".into(), ok));
    }
    if let Some(SolveOutcome::Yes(hw)) = &report.hom {
        match project_witness(&hom_red, &reduced.instance, hw) {
            Ok(projected) => {
                report.witness_checks.push(("hom witness projected to list-hom".into(), true));
                let ok = project_3coloring(&reduced, &projected).is_ok();
                report
                    .witness_checks
                    .push(("projected witness decoded to 3-coloring".into(), ok));
            }
            Err(_) => report.witness_checks.push(("hom witness projected to list-hom".into(), false)),
        }
    }

    report
}

/// Runs independent pipeline verifications, in parallel when the `parallel`
/// feature is on.
pub fn verify_many(jobs: &[(SimpleGraph, PipelineConfig)]) -> Vec<PipelineReport> {
    #[cfg(feature = "parallel")]
    {
        jobs.par_iter().map(|(g, config)| verify_pipeline(g, config)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        jobs.iter().map(|(g, config)| verify_pipeline(g, config)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k3_pipeline_all_yes() {
        let g = SimpleGraph::complete(3);
        let report = verify_pipeline(&g, &PipelineConfig::relaxed(1, 3, 2));
        assert_eq!(report.verdict, Verdict::Consistent(true), "{report}");
        assert!(!report.witness_checks.is_empty());
        assert!(report.witnesses_ok(), "{report}");
    }

    /// The smallest non-3-colorable input; the homomorphism stage is a
    /// 276-vertex refutation and takes on the order of a minute.
    #[test]
    fn k4_pipeline_all_no() {
        let g = SimpleGraph::complete(4);
        let report = verify_pipeline(&g, &PipelineConfig::relaxed(1, 4, 3));
        assert_eq!(report.verdict, Verdict::Consistent(false), "{report}");
    }

    #[test]
    fn isolated_vertex_gives_inconclusive_with_error() {
        let g = SimpleGraph::new(3, [(0, 1)]).unwrap();
        let report = verify_pipeline(&g, &PipelineConfig::relaxed(1, 3, 2));
        assert!(report.stage_error.is_some());
        assert_eq!(report.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn exhausted_budget_is_inconclusive_not_disagreement() {
        let mut config = PipelineConfig::relaxed(1, 4, 3);
        config.budget = SolveBudget::nodes(50);
        let report = verify_pipeline(&SimpleGraph::complete(4), &config);
        assert_eq!(report.verdict, Verdict::Inconclusive, "{report}");
    }

    #[test]
    fn verify_many_matches_sequential_runs() {
        let jobs: Vec<_> = [2u32, 3]
            .into_iter()
            .map(|k| (SimpleGraph::complete(k), PipelineConfig::relaxed(1, k as u64, k - 1)))
            .collect();
        let batch = verify_many(&jobs);
        for ((g, config), report) in jobs.iter().zip(&batch) {
            assert_eq!(report.verdict, verify_pipeline(g, config).verdict);
        }
    }
}
