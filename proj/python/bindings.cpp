#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "adacal/errors.hpp"
#include "adacal/harness.hpp"
#include "adacal/metrics.hpp"
#include "adacal/transform.hpp"

namespace py = pybind11;
using namespace adacal;

namespace {

using Law = std::vector<std::pair<double, double>>;

py::dict report_dict(const MetricReport& m) {
    py::dict d;
    d["Cal1"] = m.cal1;
    d["Cal2"] = m.cal2;
    d["PCal2"] = m.pcal2;
    d["PKL"] = m.pkl;
    return d;
}

py::dict row_dict(const ReportRow& r) {
    py::dict d = report_dict(r.metrics);
    d["algorithm"] = r.algorithm;
    d["env"] = r.env;
    d["T"] = r.horizon;
    d["seed"] = r.seed;
    d["C"] = r.c;
    d["K"] = r.k;
    return d;
}

ExperimentConfig config_from_text(const std::string& text) {
    std::istringstream is(text);
    ExperimentConfig c = parse_config(is);
    validate(c);
    return c;
}

// Laws default to point masses on the realized predictions.
std::vector<RoundRecord> records(const std::vector<double>& p, const std::vector<int>& y,
                                 const std::vector<Law>& laws, const std::vector<double>& q) {
    if (p.size() != y.size()) throw py::value_error("predictions and outcomes differ in length");
    if (!laws.empty() && laws.size() != p.size())
        throw py::value_error("laws must match predictions in length");
    if (!q.empty() && q.size() != p.size())
        throw py::value_error("means must match predictions in length");
    std::vector<RoundRecord> rs(p.size());
    for (std::size_t t = 0; t < p.size(); ++t) {
        if (y[t] != 0 && y[t] != 1) throw py::value_error("outcomes must be 0 or 1");
        rs[t].p = p[t];
        rs[t].y = y[t];
        rs[t].q = q.empty() ? std::numeric_limits<double>::quiet_NaN() : q[t];
        if (laws.empty()) {
            rs[t].dist = PredictionDistribution::point(p[t]);
        } else {
            std::vector<Atom> atoms;
            for (auto [v, w] : laws[t]) atoms.push_back({v, w});
            rs[t].dist = PredictionDistribution(std::move(atoms));
            if (!rs[t].dist.is_valid())
                throw py::value_error("law of round " + std::to_string(t + 1) + " is invalid");
        }
    }
    return rs;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Calibration forecasters, metrics and the experiment harness";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_RuntimeError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

    m.def(
        "metrics",
        [](const std::vector<double>& p, const std::vector<int>& y, const std::vector<Law>& laws) {
            return report_dict(compute_all(records(p, y, laws, {})));
        },
        py::arg("predictions"), py::arg("outcomes"), py::arg("laws") = std::vector<Law>{},
        "Cal1, Cal2, PCal2 and PKL of a transcript. Each law is a list of (value, prob).");

    m.def(
        "nonstationarity",
        [](const std::vector<double>& means) {
            const Nonstationarity n = nonstationarity_c(means);
            return py::make_tuple(n.c, n.p_star, segment_count_k(means));
        },
        py::arg("means"), "(C, p_star, K) of a mean sequence.");

    m.def("algorithm_names", &algorithm_names);

    m.def(
        "run_cell",
        [](const std::string& config_text, std::size_t horizon, std::uint64_t seed,
           std::size_t algorithm, std::size_t env) {
            const ExperimentConfig c = config_from_text(config_text);
            if (algorithm >= c.algorithms.size() || env >= c.envs.size())
                throw py::index_error("algorithm or env index out of range");
            CellOutput out = [&] {
                py::gil_scoped_release release;
                return run_cell(c, c.algorithms[algorithm], c.envs[env], horizon, seed);
            }();
            py::dict d = row_dict(out.row);
            std::vector<double> p, q;
            std::vector<int> y;
            std::vector<Law> laws;
            for (const RoundRecord& r : out.transcript.rounds) {
                p.push_back(r.p);
                q.push_back(r.q);
                y.push_back(r.y);
                Law law;
                for (const Atom& a : r.dist.atoms()) law.emplace_back(a.value, a.prob);
                laws.push_back(std::move(law));
            }
            d["predictions"] = p;
            d["outcomes"] = y;
            d["means"] = q;
            d["laws"] = laws;
            if (out.meta_log) {
                py::list blocks;
                for (const SubBlock& s : out.meta_log->sub_blocks) {
                    py::dict b;
                    b["b"] = s.block;
                    b["l"] = s.index;
                    b["guess"] = s.guess;
                    b["start"] = s.start;
                    b["end"] = s.end;
                    b["err"] = s.err;
                    b["terminated_early"] = s.terminated_early;
                    blocks.append(b);
                }
                d["sub_blocks"] = blocks;
            }
            return d;
        },
        py::arg("config"), py::arg("horizon"), py::arg("seed"), py::arg("algorithm") = 0,
        py::arg("env") = 0, "One run of the config's algorithm and env, with its transcript.");

    m.def(
        "sweep",
        [](const std::string& config_text, std::size_t threads) {
            ExperimentConfig c = config_from_text(config_text);
            if (threads) c.threads = threads;
            SweepResult r = [&] {
                py::gil_scoped_release release;
                return sweep(c);
            }();
            py::list rows, failures;
            for (const ReportRow& row : r.rows) rows.append(row_dict(row));
            for (const CellFailure& f : r.failures) failures.append(py::make_tuple(f.cell, f.message));
            std::ostringstream csv;
            write_rows_csv(csv, r.rows);
            py::dict d;
            d["rows"] = rows;
            d["failures"] = failures;
            d["csv"] = csv.str();
            return d;
        },
        py::arg("config"), py::arg("threads") = 0,
        "Every cell of the config; failing cells are reported, not raised.");

    m.def("fit_exponent", &fit_exponent, py::arg("pairs"));
    m.def("theta", &theta, py::arg("p"));
    m.def("psi", &psi, py::arg("z"));
    m.def("kl_bernoulli", &kl_bernoulli, py::arg("p"), py::arg("q"));
}
