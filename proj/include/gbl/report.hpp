#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "gbl/instance.hpp"
#include "gbl/theorem.hpp"

namespace gbl {

struct ReportOptions {
    SearchBudget budget;
    double tol = 1e-9;
    bool all_ties = false;  // list every valid greedy set at each witness
};

/// Everything one analysis pass produces. The greedy searches run once and
/// feed both the C_w/C_t estimates and the verdict.
struct AnalysisResult {
    ConstantEstimate ksu;
    ConstantEstimate cw;
    ConstantEstimate ct;
    ConstantEstimate cqg;
    Verdict verdict;
    std::uint64_t total_evals = 0;
};

AnalysisResult run_analysis(const NormedSpace& space, const Basis& basis,
                            const SearchBudget& budget, double tol);

/// Full report for cmd_analyze: digest, the four estimates, verdict,
/// certificate chain, deterministic evaluation counters. Byte-identical for
/// identical (instance, seed, budget).
nlohmann::json analyze_report(const Instance& inst, const ReportOptions& opt);

/// Certificate output for cmd_witness: the strongest greedy violation
/// certificate, a "none" record, or (with hilbert = true, quadratic canonical
/// instances only) the per-pair orthogonality witnesses.
nlohmann::json witness_report(const Instance& inst, const ReportOptions& opt, bool hilbert);

/// Renormed instance JSON for cmd_renorm.
nlohmann::json renorm_instance_json(const Instance& inst);

/// Certificate serialization (spec'd wire format, 1-based index lists).
nlohmann::json certificate_to_json(const GreedyViolationCertificate& cert);
GreedyViolationCertificate certificate_from_json(const nlohmann::json& j);

/// 0 consistent, 2 inconsistent (an implementation bug by the theorem).
int exit_code_for_verdict(const Verdict& verdict);

/// Render JSON exactly as the CLI writes it (2-space indent, trailing newline).
std::string render_json(const nlohmann::json& j);

}  // namespace gbl
