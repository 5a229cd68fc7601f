#include <optional>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "gbl/constants.hpp"
#include "gbl/errors.hpp"
#include "gbl/gallery.hpp"
#include "gbl/greedy.hpp"
#include "gbl/instance.hpp"
#include "gbl/report.hpp"
#include "gbl/theorem.hpp"

namespace py = pybind11;

namespace {

gbl::Instance parse(const std::string& text) { return gbl::parse_instance_text(text); }

gbl::ReportOptions options(int budget, std::uint64_t seed, double tol, bool all_ties) {
    gbl::ReportOptions opt;
    if (budget > 0) opt.budget.restarts = budget;
    opt.budget.seed = seed;
    opt.tol = tol;
    opt.all_ties = all_ties;
    return opt;
}

py::dict estimate_dict(const gbl::ConstantEstimate& est) {
    py::dict w;
    w["x"] = est.witness.x;
    w["indices"] = est.witness.indices;
    w["ratio"] = est.witness.ratio;
    py::dict d;
    d["value"] = est.value;
    d["exactness"] = gbl::to_string(est.exactness);
    d["method"] = gbl::to_string(est.method);
    d["budget_used"] = est.budget_used;
    d["witness"] = w;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "greedy-basis laboratory core bindings";

    py::register_exception<gbl::Error>(m, "GblError", PyExc_ValueError);

    m.def(
        "analyze_json",
        [](const std::string& text, int budget, std::uint64_t seed, double tol, bool all_ties) {
            const gbl::Instance inst = parse(text);
            return gbl::render_json(gbl::analyze_report(inst, options(budget, seed, tol, all_ties)));
        },
        py::arg("instance_json"), py::arg("budget") = 10000, py::arg("seed") = 0,
        py::arg("tol") = 1e-9, py::arg("all_ties") = false,
        py::call_guard<py::gil_scoped_release>(),
        "Full analysis report as a JSON string.");

    m.def(
        "witness_json",
        [](const std::string& text, bool hilbert, int budget, std::uint64_t seed, double tol) {
            const gbl::Instance inst = parse(text);
            return gbl::render_json(
                gbl::witness_report(inst, options(budget, seed, tol, false), hilbert));
        },
        py::arg("instance_json"), py::arg("hilbert") = false, py::arg("budget") = 10000,
        py::arg("seed") = 0, py::arg("tol") = 1e-9, py::call_guard<py::gil_scoped_release>(),
        "Strongest greedy-violation certificate (or Hilbert pair witnesses) as JSON.");

    m.def(
        "renorm_json",
        [](const std::string& text) {
            return gbl::render_json(gbl::renorm_instance_json(parse(text)));
        },
        py::arg("instance_json"), py::call_guard<py::gil_scoped_release>(),
        "The 1-suppression renormed instance as JSON.");

    m.def(
        "gallery_json",
        [](const std::string& name) {
            return gbl::render_json(gbl::instance_to_json(gbl::gallery_instance(name)));
        },
        py::arg("name"), "Builtin instance as JSON.");

    m.def(
        "gallery_families",
        [] {
            std::vector<std::tuple<std::string, std::string, std::string>> out;
            for (const auto& fam : gbl::gallery_families()) {
                out.emplace_back(fam.pattern, fam.description, fam.example);
            }
            return out;
        },
        "(pattern, description, example) for each builtin family.");

    m.def(
        "norm",
        [](const std::string& text, const gbl::Vec& x) { return parse(text).space.norm(x); },
        py::arg("instance_json"), py::arg("x"), "Evaluate the instance norm at x.");

    m.def(
        "dual_coefficients",
        [](const std::string& text, const gbl::Vec& x) {
            return parse(text).basis.dual_coefficients(x);
        },
        py::arg("instance_json"), py::arg("x"), "Biorthogonal coefficients of x.");

    m.def(
        "greedy_indices",
        [](const std::string& text, const gbl::Vec& x, int N) {
            const gbl::Instance inst = parse(text);
            const gbl::Vec c = inst.basis.dual_coefficients(x);
            return gbl::greedy_sets(c, N, gbl::TieMode::OneValid).front().indices;
        },
        py::arg("instance_json"), py::arg("x"), py::arg("n"),
        "One valid greedy set of size n for x (0-based indices).");

    m.def(
        "constants",
        [](const std::string& text, int budget, std::uint64_t seed) {
            std::optional<gbl::AnalysisResult> res;
            {
                py::gil_scoped_release release;
                const gbl::Instance inst = parse(text);
                gbl::SearchBudget b;
                if (budget > 0) b.restarts = budget;
                b.seed = seed;
                res = gbl::run_analysis(inst.space, inst.basis, b, 1e-9);
            }
            py::dict d;
            d["ksu"] = estimate_dict(res->ksu);
            d["cw"] = estimate_dict(res->cw);
            d["ct"] = estimate_dict(res->ct);
            d["cqg"] = estimate_dict(res->cqg);
            d["consistent"] = res->verdict.consistent;
            d["explanation"] = res->verdict.explanation;
            return d;
        },
        py::arg("instance_json"), py::arg("budget") = 10000, py::arg("seed") = 0,
        "K_su, C_w, C_t, C_qg estimates with witnesses, plus the verdict.");
}
