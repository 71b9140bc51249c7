#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bbs/core.hpp"
#include "bbs/error.hpp"
#include "bbs/io.hpp"
#include "bbs/line.hpp"
#include "bbs/measures.hpp"
#include "bbs/slots.hpp"
#include "bbs/stats.hpp"

namespace py = pybind11;
using namespace bbs;

namespace {

using Rows = std::vector<std::vector<Count>>;
using RowMap = std::map<int, std::pair<std::int64_t, std::vector<Count>>>;

RowMap to_map(const ComponentArray& z) {
  RowMap out;
  for (const auto& [k, row] : z.rows()) out[k] = {row.offset, row.values};
  return out;
}

ComponentArray from_map(const RowMap& m) {
  ComponentArray z;
  for (const auto& [k, row] : m) {
    if (k < 1) throw InputError("soliton sizes start at 1");
    z.set_row(k, {row.first, row.second});
  }
  return z;
}

AlphaParams alpha_of(const std::string& family, double lambda, const std::optional<io::Matrix2>& Q,
                     const std::optional<std::vector<double>>& alpha) {
  if (family == "bernoulli") return bernoulli_alpha(lambda);
  if (family == "markov") {
    if (!Q) throw InputError("markov needs Q");
    return markov_alpha(*Q);
  }
  if (family == "explicit") {
    if (!alpha) throw InputError("explicit needs alpha");
    return io::explicit_spec(*alpha).alpha;
  }
  throw InputError("unknown measure family \"" + family + "\"");
}

py::dict gof_dict(const GofReport& r) {
  py::dict d;
  d["statistic"] = r.statistic;
  d["dof"] = r.dof;
  d["p_value"] = r.p_value;
  py::list bins;
  for (const auto& b : r.bins) bins.append(py::make_tuple(b.label, b.observed, b.expected));
  d["bins"] = bins;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Box-ball system core: dynamics, soliton decomposition and excursion measures";

  static py::exception<PreconditionError> precondition(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const PreconditionError& e) {
      py::set_error(precondition, e.what());
    }
  });

  py::class_<BallConfig>(m, "BallConfig")
      .def(py::init<>())
      .def(py::init([](const std::string& bits, Coord origin) { return BallConfig::parse(bits, origin); }),
           py::arg("bits"), py::arg("origin") = 1)
      .def_property_readonly("origin", &BallConfig::origin)
      .def_property_readonly("end", &BallConfig::end)
      .def("__len__", &BallConfig::size)
      .def("__getitem__", [](const BallConfig& c, Coord z) { return c[z]; })
      .def("ball_count", &BallConfig::ball_count)
      .def("str", py::overload_cast<>(&BallConfig::str, py::const_))
      .def("window", py::overload_cast<Coord, Coord>(&BallConfig::str, py::const_), py::arg("start"), py::arg("stop"))
      .def("trimmed", &BallConfig::trimmed)
      .def("shifted", &BallConfig::shifted)
      .def("__str__", py::overload_cast<>(&BallConfig::str, py::const_))
      .def("__repr__", [](const BallConfig& c) {
        return "BallConfig('" + c.str() + "', origin=" + std::to_string(c.origin()) + ")";
      })
      .def(py::self == py::self);

  m.def("evolve", py::overload_cast<const BallConfig&, int>(&evolve), py::arg("config"), py::arg("steps") = 1,
        "Apply the carrier sweep T `steps` times.");
  m.def("carrier_trace", &carrier_trace, "Carrier load after each box of the window.");
  m.def(
      "records", [](const BallConfig& c, Coord start, Coord stop) { return records(c).in_range(start, stop); },
      py::arg("config"), py::arg("start"), py::arg("stop"), "Records in [start, stop).");

  m.def(
      "solitons",
      [](const BallConfig& c) {
        py::list out;
        for (const auto& s : ts_decompose(c)) out.append(py::make_tuple(s.size, s.head, s.tail));
        return out;
      },
      "Takahashi-Satsuma solitons as (k, head, tail) tuples.");
  m.def(
      "soliton_counts", [](const BallConfig& c) { return soliton_counts(c); }, "Number of k-solitons for each k.");

  m.def(
      "diagram_from_excursion", [](const std::string& e) { return diagram_from_excursion(Excursion::parse(e)).rows(); },
      "Slot diagram rows x_1..x_M of an excursion string.");
  m.def(
      "excursion_from_diagram", [](const Rows& rows) { return excursion_from_diagram(SlotDiagram(rows)).str(); },
      "Excursion string of a slot diagram.");
  m.def(
      "insert_soliton",
      [](const BallConfig& c, int k, std::size_t j, Count times) { return insert_soliton(c, k, j, times); },
      py::arg("config"), py::arg("k"), py::arg("slot"), py::arg("times") = 1);
  m.def(
      "all_excursions",
      [](std::size_t n) {
        std::vector<std::string> out;
        for (const auto& e : all_excursions(n)) out.push_back(e.str());
        return out;
      },
      "Every excursion of half-length n, in lexicographic order.");

  m.def(
      "decompose", [](const BallConfig& c) { return to_map(decompose(c)); },
      "Components {k: (offset, values)} of a configuration with a record at the origin.");
  m.def(
      "reconstruct", [](const RowMap& z) { return reconstruct(from_map(z)); }, "Inverse of decompose.");
  m.def(
      "concat_diagrams",
      [](std::int64_t first_index, const std::vector<Rows>& diagrams) {
        DiagramSequence seq{first_index, {}};
        for (const auto& r : diagrams) seq.items.emplace_back(r);
        return to_map(concat_diagrams(seq));
      },
      py::arg("first_index"), py::arg("diagrams"));
  m.def(
      "diagrams_from_components",
      [](const RowMap& z) {
        const auto seq = diagrams_from_components(from_map(z));
        std::vector<Rows> items;
        for (const auto& d : seq.items) items.push_back(d.rows());
        return py::make_tuple(seq.first_index, items);
      },
      "(first_index, [rows, ...]) of the slot diagrams glued into a component array.");

  m.def("alpha", &alpha_of, py::arg("family") = "bernoulli", py::arg("lam") = 0.25, py::arg("Q") = py::none(),
        py::arg("alpha") = py::none());
  py::class_<AlphaParams>(m, "AlphaParams")
      .def("at", &AlphaParams::at)
      .def_readonly("values", &AlphaParams::values)
      .def("support", &AlphaParams::support);
  m.def("bernoulli_alpha", &bernoulli_alpha);
  m.def("markov_alpha", &markov_alpha);
  m.def(
      "q_from_alpha",
      [](const AlphaParams& a, std::optional<int> K) { return (K ? q_from_alpha(a, *K) : q_from_alpha(a)).values; },
      py::arg("alpha"), py::arg("K") = py::none());
  m.def(
      "alpha_from_q", [](const std::vector<double>& q) { return alpha_from_q(QParams{q}).values; });
  m.def(
      "partition_function", [](const AlphaParams& a) { return partition_closed(a).Z; }, "Closed-form Z_alpha.");
  m.def(
      "partition_bruteforce",
      [](const AlphaParams& a, unsigned n_max) {
        const auto bf = partition_bruteforce(a, n_max);
        return py::make_tuple(static_cast<double>(bf.value), static_cast<double>(bf.tail_bound));
      },
      py::arg("alpha"), py::arg("n_max"), "(sum over n <= n_max, bound on the rest).");
  m.def(
      "phi_prob", [](const std::vector<double>& q, const Rows& rows) { return phi_prob(QParams{q}, SlotDiagram(rows)); });
  m.def(
      "nu_prob", [](const AlphaParams& a, const std::string& e) { return ExcursionMeasure(a).nu_weight(Excursion::parse(e)); });
  m.def(
      "beta_recursion",
      [](const std::vector<double>& q) {
        const auto s = beta_recursion(QParams{q});
        py::dict d;
        d["beta"] = s.beta;
        d["kappa"] = s.kappa;
        d["density"] = s.density;
        return d;
      },
      py::arg("q"));
  m.def("catalan", [](unsigned n) { return static_cast<double>(catalan(n)); });
  m.def("narayana", [](unsigned n, unsigned k) { return static_cast<double>(narayana(n, k)); });

  m.def(
      "sample_excursions",
      [](const AlphaParams& a, std::size_t count, std::uint64_t seed, unsigned jobs) {
        std::vector<std::string> out;
        py::gil_scoped_release release;
        for (const auto& e : sample_excursions(nu_source(a), count, seed, jobs)) out.push_back(e.str());
        return out;
      },
      py::arg("alpha"), py::arg("count"), py::arg("seed"), py::arg("jobs") = 1);
  m.def(
      "sample_palm",
      [](const AlphaParams& a, std::size_t count, std::uint64_t seed, unsigned jobs) {
        AnchoredConfig s;
        {
          py::gil_scoped_release release;
          s = sample_palm(a, count, seed, jobs);
        }
        return py::make_tuple(s.config, s.records);
      },
      py::arg("alpha"), py::arg("count"), py::arg("seed"), py::arg("jobs") = 1,
      "(configuration, records) with record 0 at the origin.");
  m.def(
      "sample_bernoulli_palm",
      [](double lambda, std::size_t count, std::uint64_t seed, unsigned jobs) {
        const auto s = sample_bernoulli_palm(lambda, count, seed, jobs);
        return py::make_tuple(s.config, s.records);
      },
      py::arg("lam"), py::arg("count"), py::arg("seed"), py::arg("jobs") = 1);
  m.def(
      "sample_anti_palm",
      [](double lambda, Coord boxes, std::uint64_t seed) {
        const auto s = sample_anti_palm(bernoulli_walk_source(lambda), {boxes, 0, 4096}, seed);
        return py::make_tuple(s.config, s.records);
      },
      py::arg("lam"), py::arg("boxes"), py::arg("seed"), "Translation-invariant Bernoulli sample.");

  m.def(
      "geometric_gof", [](const RowMap& z, int k, double p) { return gof_dict(geometric_gof(from_map(z), k, p)); },
      py::arg("components"), py::arg("k"), py::arg("p"));
  m.def(
      "independence_test",
      [](const RowMap& z, int k, std::int64_t j, int l, std::int64_t j2) {
        return gof_dict(independence_test(from_map(z), ComponentPair{k, j, l, j2}));
      },
      py::arg("components"), py::arg("k"), py::arg("j"), py::arg("l"), py::arg("j2"));
  m.def(
      "t_invariance_max_z",
      [](double lambda, Coord boxes, int steps, std::uint64_t seed) {
        TInvarianceOptions o;
        o.boxes = boxes;
        o.steps = steps;
        o.seed = seed;
        return t_invariance_test(bernoulli_walk_source(lambda), o).max_abs_z;
      },
      py::arg("lam"), py::arg("boxes") = 200000, py::arg("steps") = 1, py::arg("seed") = 1,
      "Largest |z| between block frequencies of eta and T^steps eta under the product measure.");
  m.def(
      "component_shift_ok", [](const BallConfig& c) { return component_shift_check(c).ok(); });
}
