#include "comp_dof/assignment.hpp"
#include "comp_dof/bounds.hpp"
#include "comp_dof/channel.hpp"
#include "comp_dof/io.hpp"
#include "comp_dof/search.hpp"
#include "comp_dof/simulator.hpp"
#include "comp_dof/zf_scheme.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace comp_dof;

namespace {

// Result records cross the boundary as plain dicts.
py::object to_python(const io::Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

py::object fraction(const Rational& r) {
  return py::module_::import("fractions").attr("Fraction")(r.numerator(), r.denominator());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Degrees-of-freedom toolkit for cooperative transmission in interference networks";

  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  py::enum_<Connectivity>(m, "Connectivity")
      .value("FullyConnected", Connectivity::FullyConnected)
      .value("LocalOriginal", Connectivity::LocalOriginal)
      .value("LocalShifted", Connectivity::LocalShifted);

  py::class_<ChannelTopology>(m, "ChannelTopology")
      .def_property_readonly("kind", &ChannelTopology::kind)
      .def_property_readonly("K", &ChannelTopology::users)
      .def_property_readonly("L", &ChannelTopology::interferers)
      .def("connected", &ChannelTopology::connected, py::arg("rx"), py::arg("tx"))
      .def("__eq__", [](const ChannelTopology& a, const ChannelTopology& b) { return a == b; })
      .def("__repr__", [](const ChannelTopology& t) {
        return "ChannelTopology(" + to_string(t.kind()) + ", K=" + std::to_string(t.users()) +
               ", L=" + std::to_string(t.interferers()) + ")";
      });

  m.def("build_topology", &build_topology, py::arg("kind"), py::arg("K"), py::arg("L") = 0);
  m.def("connected_receivers", &connected_receivers);
  m.def("connected_transmitters", &connected_transmitters);

  py::class_<ChannelRealization>(m, "ChannelRealization")
      .def_property_readonly("topology", &ChannelRealization::topology)
      .def_property_readonly("seed", &ChannelRealization::seed)
      .def("h", &ChannelRealization::h, py::arg("rx"), py::arg("tx"))
      .def("with_coefficient", &ChannelRealization::with_coefficient)
      .def("matrix", [](const ChannelRealization& r) {
        std::vector<std::vector<double>> rows(r.users());
        for (int rx = 1; rx <= r.users(); ++rx)
          for (int tx = 1; tx <= r.users(); ++tx) rows[rx - 1].push_back(r.h(rx, tx));
        return rows;
      });
  m.def("realize", &realize, py::arg("topology"), py::arg("seed"));

  py::class_<MessageAssignment>(m, "MessageAssignment")
      .def(py::init<int, std::vector<IndexSet>>(), py::arg("K"), py::arg("sets"))
      .def_property_readonly("K", &MessageAssignment::users)
      .def_property_readonly("sets", &MessageAssignment::sets)
      .def("transmit_set", &MessageAssignment::transmit_set)
      .def("__eq__", [](const MessageAssignment& a, const MessageAssignment& b) { return a == b; })
      .def("__repr__", [](const MessageAssignment& a) { return io::to_json(a).dump(); });
  m.def("spiral_assign", &spiral_assign, py::arg("K"), py::arg("M"));
  m.def("scheme_assign", &scheme_assign, py::arg("K"), py::arg("M"), py::arg("L"), py::arg("shift") = 0);
  m.def("carried_messages", &carried_messages);
  m.def("reduce_assignment", [](const MessageAssignment& a, const ChannelTopology& t, int M) {
    return reduce_assignment(a, t, M).assignment;
  });

  m.def("subset_bound", [](const MessageAssignment& a, bool exact) {
    return to_python(io::to_json(subset_bound(a, exact ? SubsetMode::Exact : SubsetMode::Greedy)));
  }, py::arg("assignment"), py::arg("exact") = true);
  m.def("greedy_witness", [](const MessageAssignment& a, int M) { return to_python(io::to_json(greedy_witness(a, M))); });
  m.def("m3_witness", [](const MessageAssignment& a) { return to_python(io::to_json(m3_witness(a))); });
  m.def("no_coop_bound", [](const ChannelTopology& t, const MessageAssignment& a) {
    return fraction(no_coop_bound(t, a).value);
  });
  m.def("closed_form_tau", [](const std::string& setting, int M, int L, const std::string& cooperation,
                              const std::string& quantity) {
    TauSetting s;
    s.channel = setting == "full" ? ChannelClass::Full : ChannelClass::Local;
    if (setting != "full" && setting != "local") throw Error(ErrorCode::UnknownSetting, "setting must be full or local");
    s.M = M;
    s.L = L;
    s.cooperation = cooperation == "local" ? CooperationClass::Local : CooperationClass::General;
    s.quantity = quantity == "zf" ? TauQuantity::ZeroForcing : TauQuantity::Dof;
    const auto v = closed_form_tau(s);
    return py::make_tuple(fraction(v.value), to_string(v.relation));
  }, py::arg("setting"), py::arg("M"), py::arg("L") = 0, py::arg("cooperation") = "general",
     py::arg("quantity") = "dof");

  py::class_<SchemePlan>(m, "SchemePlan")
      .def_readonly("K", &SchemePlan::K)
      .def_readonly("M", &SchemePlan::M)
      .def_readonly("L", &SchemePlan::L)
      .def_readonly("shift", &SchemePlan::shift)
      .def_readonly("assignment", &SchemePlan::assignment)
      .def_readonly("cancel_sets", &SchemePlan::cancel_sets)
      .def("active_users", &SchemePlan::active_users)
      .def("topology", &SchemePlan::topology)
      .def("to_dict", [](const SchemePlan& p) { return to_python(io::to_json(p)); });
  m.def("plan_clusters", &plan_clusters, py::arg("K"), py::arg("M"), py::arg("L"), py::arg("shift") = 0);

  py::class_<BeamDesign>(m, "BeamDesign")
      .def("coefficient", &BeamDesign::coefficient, py::arg("message"), py::arg("tx"))
      .def("to_csv", [](const BeamDesign& b) { return io::beams_to_csv(b); });
  m.def("design_beams", &design_beams);
  m.def("verify_zero_interference", [](const ChannelRealization& h, const SchemePlan& plan, const BeamDesign& b) {
    return to_python(io::to_json(verify_zero_interference(h, plan, b)));
  });
  m.def("plan_dof", [](int K, int M, int L, int sessions) {
    const auto d = plan_dof(sessions > 0 ? reuse_schedule(K, M, L, sessions) : reuse_schedule(K, M, L));
    py::list per_user;
    for (const auto& r : d.per_user) per_user.append(fraction(r));
    py::dict out;
    out["per_user"] = per_user;
    out["interior"] = d.interior;
    out["interior_average"] = fraction(d.interior_average);
    out["overall_average"] = fraction(d.overall_average);
    return out;
  }, py::arg("K"), py::arg("M"), py::arg("L"), py::arg("sessions") = 0);

  m.def("zf_feasible", [](const ChannelTopology& t, const MessageAssignment& a, const IndexSet& active) {
    return to_python(io::to_json(zf_feasible(t, a, active)));
  });
  m.def("max_zf_dof", [](const ChannelTopology& t, int M, int max_users, bool restrict_to_envelope) {
    SearchLimits limits;
    limits.max_users = max_users;
    limits.restrict_to_envelope = restrict_to_envelope;
    SearchResult r;
    {
      py::gil_scoped_release release;
      r = max_zf_dof(t, M, limits);
    }
    return to_python(io::to_json(r));
  }, py::arg("topology"), py::arg("M"), py::arg("max_users") = 12, py::arg("restrict_to_envelope") = true);

  m.def("simulate_plan", [](const SchemePlan& plan, const std::vector<double>& powers, int trials, std::uint64_t seed) {
    const auto s = simulate_plan(plan, {powers, trials, seed});
    py::dict out;
    out["powers"] = s.powers;
    out["rates"] = s.rates;
    out["slopes"] = s.slopes;
    return out;
  }, py::arg("plan"), py::arg("powers"), py::arg("trials") = 1, py::arg("seed") = 0);
  m.def("power_sweep_db", &power_sweep_db);

  m.def("wyner_reconstruct", [](const ChannelRealization& h, int M, const std::vector<double>& x,
                                const std::vector<double>& z) {
    return to_python(io::to_json(wyner_reconstruct(h, M, x, z)));
  });
  m.def("plan_wyner_reconstruction", [](const ChannelRealization& h, int M) {
    return to_python(io::to_json(plan_wyner_reconstruction(h, M)));
  });
}
