#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "regretlab/error.hpp"
#include "regretlab/experts.hpp"
#include "regretlab/game.hpp"
#include "regretlab/graph.hpp"
#include "regretlab/io.hpp"
#include "regretlab/pde.hpp"
#include "regretlab/playsim.hpp"
#include "regretlab/strategylp.hpp"

namespace py = pybind11;
using namespace regretlab;

namespace {

FinalData data_from_kwargs(const std::string& kind, const py::dict& params, double C) {
  Json j;
  j["kind"] = kind;
  for (auto item : params) j[py::cast<std::string>(item.first)] = py::cast<double>(item.second);
  return final_data_from_json(j, C);
}

py::dict trajectory_dict(const Trajectory& tr) {
  std::vector<int> k, m, b, clamped;
  std::vector<double> t, xi, eta, f;
  for (const auto& s : tr.steps) {
    k.push_back(s.k);
    t.push_back(s.t);
    m.push_back(static_cast<int>(s.m));
    xi.push_back(s.xi);
    eta.push_back(s.eta);
    f.push_back(s.f);
    b.push_back(s.b);
    clamped.push_back(s.clamped);
  }
  py::dict d;
  d["step"] = k;
  d["t"] = t;
  d["m"] = m;
  d["xi"] = xi;
  d["eta"] = eta;
  d["f"] = f;
  d["b"] = b;
  d["clamped"] = clamped;
  d["final_regret"] = tr.final_regret;
  d["xi_final"] = tr.xi_final;
  d["eta_final"] = tr.eta_final;
  d["m_final"] = static_cast<int>(tr.m_final);
  return d;
}

}  // namespace

PYBIND11_MODULE(_regretlab, m) {
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<DeBruijnGraph>(m, "DeBruijnGraph")
      .def(py::init<int>(), py::arg("depth"))
      .def_property_readonly("depth", &DeBruijnGraph::depth)
      .def_property_readonly("vertex_count", &DeBruijnGraph::vertex_count)
      .def("next", &DeBruijnGraph::next, py::arg("m"), py::arg("b"))
      .def("edge_sign", &DeBruijnGraph::edge_sign);

  m.def(
      "enumerate_cycles",
      [](int d) {
        std::vector<std::string> labels;
        for (const auto& c : enumerate_simple_cycles(DeBruijnGraph(d))) labels.push_back(cycle_label(c));
        return labels;
      },
      py::arg("d"), "Simple cycle labels sorted by length, closing vertex repeated.");

  py::class_<ExpertPair>(m, "ExpertPair")
      .def(py::init(&ExpertPair::validate), py::arg("q"), py::arg("r"))
      .def_property_readonly("depth", &ExpertPair::depth)
      .def_property_readonly("q", py::overload_cast<>(&ExpertPair::q, py::const_))
      .def_property_readonly("r", py::overload_cast<>(&ExpertPair::r, py::const_))
      .def("__repr__", [](const ExpertPair& e) { return "ExpertPair(" + experts_json(e).dump() + ")"; });

  m.def("gamma", [](const ExpertPair& e) { return gamma(e).values(); });
  m.def("random_pair", &random_pair, py::arg("d"), py::arg("seed"), py::arg("bound") = 0.8);

  py::class_<LpSolution>(m, "LpSolution")
      .def_readonly("beta", &LpSolution::beta)
      .def_readonly("M", &LpSolution::M)
      .def_readonly("iterations", &LpSolution::iterations)
      .def_property_readonly("side", [](const LpSolution& s) { return std::string(to_string(s.side)); })
      .def_property_readonly("status", [](const LpSolution& s) { return std::string(to_string(s.status)); });

  m.def(
      "solve_lp",
      [](const ExpertPair& e, const std::string& side) {
        if (side != "investor" && side != "market") throw ValidationError("side must be 'investor' or 'market'");
        auto cycles = enumerate_simple_cycles(DeBruijnGraph(e.depth()));
        return solve(build_lp(e, cycles, side == "investor" ? LpSide::Investor : LpSide::Market));
      },
      py::arg("experts"), py::arg("side") = "investor");
  m.def("indifference_closed_form", py::overload_cast<const ExpertPair&>(&indifference_closed_form));

  py::class_<PdeSolution, std::shared_ptr<PdeSolution>>(m, "PdeSolution")
      .def_property_readonly("C", &PdeSolution::diffusion)
      .def_property_readonly("T", &PdeSolution::final_time)
      .def("value", &PdeSolution::value, py::arg("t"), py::arg("xi"), py::arg("eta"))
      .def(
          "derivatives",
          [](const PdeSolution& s, double t, double xi, double eta) {
            auto p = s.evaluate(t, xi, eta);
            py::dict d;
            d["u"] = p.u;
            d["u_t"] = p.u_t;
            d["u_xi"] = p.u_xi;
            d["u_eta"] = p.u_eta;
            d["u_xixi"] = p.u_xixi;
            d["u_xieta"] = p.u_xieta;
            d["u_etaeta"] = p.u_etaeta;
            d["D"] = p.D;
            return d;
          },
          py::arg("t"), py::arg("xi"), py::arg("eta"));

  py::class_<FinalData>(m, "FinalData")
      .def_property_readonly("name", &FinalData::name)
      .def("value", &FinalData::value, py::arg("xi"), py::arg("eta"));

  m.def("final_data", &data_from_kwargs, py::arg("kind") = "classic", py::arg("params") = py::dict(),
        py::arg("C") = 0.5);

  m.def(
      "classic_solution",
      [](double C, double T, double delta) {
        return std::const_pointer_cast<PdeSolution>(classic_solution(C, T, delta));
      },
      py::arg("C"), py::arg("T"), py::arg("delta") = 0.0);
  m.def(
      "pde_solution",
      [](const FinalData& data, double C, double T) {
        return std::const_pointer_cast<PdeSolution>(make_pde_solution(data, C, T));
      },
      py::arg("data"), py::arg("C"), py::arg("T"));

  m.def(
      "game_value",
      [](const ExpertPair& e, double eps, double T, const FinalData& data, int m0, double xi,
         double eta, int threads) {
        GameConfig cfg(e, eps, T, 0, data);
        GridOptions opt;
        opt.threads = threads;
        auto v = data.kind() == FinalKind::General ? dpp_value_general(cfg, opt)
                                                   : dpp_value_separable(cfg, opt);
        return v.initial_value(static_cast<State>(m0), xi, eta);
      },
      py::arg("experts"), py::arg("epsilon"), py::arg("T"), py::arg("data"), py::arg("m") = 0,
      py::arg("xi") = 0.0, py::arg("eta") = 0.0, py::arg("threads") = 1,
      py::call_guard<py::gil_scoped_release>());

  m.def(
      "simulate",
      [](const ExpertPair& e, double eps, double T, const std::string& market, std::uint64_t seed,
         std::optional<double> fixed_f) {
        auto lp = indifference_closed_form(e);
        GameConfig cfg(e, eps, T, 0, FinalData::classic());
        double delta = 2 * eps * eps;
        auto sol = classic_solution(lp.M, T, delta);
        auto inv = fixed_f ? InvestorPolicy::fixed(*fixed_f) : InvestorPolicy::pde_guided(sol, lp.beta);
        MarketPolicy mk = MarketPolicy::random(seed);
        if (market == "forcing") {
          GammaOptions g;
          g.tau_scaled = true;
          g.tau_shift = delta;
          double gam = compute_gamma(*sol, e, lp.beta, gamma_grid(0, T, 2, -1, 1), g).gamma;
          mk = MarketPolicy::forcing_tau_scaled(sol, lp.beta, gam, delta);
        } else if (market != "random") {
          throw ValidationError("market must be 'random' or 'forcing'");
        }
        return trajectory_dict(run_game(cfg, {}, inv, mk));
      },
      py::arg("experts"), py::arg("epsilon"), py::arg("T"), py::arg("market") = "random",
      py::arg("seed") = 1, py::arg("fixed_f") = py::none());
}
