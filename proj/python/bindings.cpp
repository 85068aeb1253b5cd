// SPDX-License-Identifier: Apache-2.0
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qatp/amplify.hpp"
#include "qatp/cli.hpp"
#include "qatp/errors.hpp"
#include "qatp/poly.hpp"
#include "qatp/qpoly.hpp"

namespace py = pybind11;
using namespace qatp;

namespace {

py::object to_py(const BigInt& v) { return py::module_::import("builtins").attr("int")(v.str()); }

BigInt from_py(const py::handle& h) { return BigInt(py::str(h).cast<std::string>()); }

std::map<std::string, BigInt> point_from(const py::dict& d) {
  std::map<std::string, BigInt> out;
  for (const auto& [k, v] : d) out[k.cast<std::string>()] = from_py(v);
  return out;
}

template <typename T>
void read(const py::dict& d, const char* key, T& field) {
  if (d.contains(key)) field = d[key].cast<T>();
}

CliOptions options_from(const py::dict& d) {
  CliOptions o;
  read(d, "backend", o.backend);
  read(d, "seed", o.seed);
  read(d, "delta", o.delta);
  read(d, "shots", o.shots);
  read(d, "max_rounds", o.max_rounds);
  read(d, "herbrand_depth", o.herbrand_depth);
  read(d, "word_bits", o.word_bits);
  read(d, "grid", o.grid);
  read(d, "chain_limit", o.chain_limit);
  read(d, "var", o.var);
  read(d, "degree", o.degree);
  read(d, "gates", o.gates);
  read(d, "sizes", o.sizes);
  read(d, "trials", o.trials);
  return o;
}

std::string run(const std::string& command, const std::string& text, const std::string& filename,
                const py::dict& opts) {
  const CliOptions o = options_from(opts);
  RunReport r;
  if (command == "prove-prop") r = cmd_prove_prop(text, filename, o);
  else if (command == "prove-fol") r = cmd_prove_fol(text, o);
  else if (command == "prove-geo") r = cmd_prove_geo(text, o);
  else if (command == "pit") r = cmd_pit(text, o);
  else if (command == "emit-circuit") r = cmd_emit_circuit(text, o);
  else if (command == "bench-queries") r = cmd_bench_queries(o);
  else throw PreconditionError("unknown command " + command);
  return to_json(r).dump();
}

}  // namespace

PYBIND11_MODULE(_qatp, m) {
  m.doc() = "Resolution, Wu's method and polynomial identity testing with simulated quantum backends";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_RuntimeError);
  py::register_exception<DegenerateSystemError>(m, "DegenerateSystemError", PyExc_RuntimeError);

  py::class_<Polynomial>(m, "Polynomial")
      .def(py::init([](const std::string& text) { return parse_polynomial(text); }), py::arg("text"))
      .def(py::init([](const std::string& text, const std::vector<std::string>& vars) {
             return parse_polynomial(text, vars);
           }),
           py::arg("text"), py::arg("vars"))
      .def_property_readonly("vars", [](const Polynomial& p) { return p.vars(); })
      .def("degree", [](const Polynomial& p, const std::string& v) { return p.degree(v); })
      .def("total_degree", &Polynomial::total_degree)
      .def("num_terms", &Polynomial::num_terms)
      .def("is_zero", &Polynomial::is_zero)
      .def("coeff", [](const Polynomial& p, const std::string& v, unsigned d) { return p.coeff(v, d); })
      .def("evaluate", [](const Polynomial& p, const py::dict& pt) { return to_py(p.evaluate(point_from(pt))); })
      .def("__add__", [](const Polynomial& a, const Polynomial& b) { return a + b; })
      .def("__sub__", [](const Polynomial& a, const Polynomial& b) { return a - b; })
      .def("__mul__", [](const Polynomial& a, const Polynomial& b) { return a * b; })
      .def("__neg__", [](const Polynomial& a) { return -a; })
      .def("__eq__", [](const Polynomial& a, const Polynomial& b) { return a == b; })
      .def("__str__", [](const Polynomial& p) { return to_string(p); })
      .def("__repr__", [](const Polynomial& p) { return "Polynomial('" + to_string(p) + "')"; });

  m.def("pseudo_step", [](const Polynomial& s, const Polynomial& t, const std::string& y) { return pseudo_step(s, t, y); });
  m.def("prem", [](const Polynomial& s, const Polynomial& t, const std::string& y) {
    PremResult r = prem(s, t, y);
    py::dict d;
    d["remainder"] = r.remainder;
    d["quotient"] = r.quotient;
    d["steps"] = r.steps;
    d["multiplier"] = r.multiplier;
    d["intermediates"] = r.intermediates;
    return d;
  });
  m.def("wu_prove", [](const std::string& geo_text, std::size_t concl_index) {
    return to_json(wu_prove(parse_geo(geo_text), concl_index)).dump();
  });
  m.def("kravchuk", [](std::int64_t d, std::int64_t y, std::int64_t D) { return to_py(kravchuk(d, y, D)); });
  m.def("fixed_point_length", &fixed_point_length, py::arg("delta"), py::arg("lambda_min"));
  m.def("fixed_point_success", &fixed_point_success, py::arg("L"), py::arg("delta"), py::arg("lam"));
  m.def("evaluate_arith", [](const Polynomial& p, const py::dict& pt, std::size_t word_bits, std::size_t input_bits) {
    RegisterSpec spec;
    spec.word_bits = word_bits;
    spec.input_bits = input_bits;
    spec.inputs = p.vars();
    std::map<std::string, std::uint64_t> in;
    for (const auto& [k, v] : pt) in[k.cast<std::string>()] = v.cast<std::uint64_t>();
    return to_signed(evaluate_circuit(build_arith(p, spec), in), word_bits);
  });
  m.def("_run", &run, py::arg("command"), py::arg("text"), py::arg("filename"), py::arg("opts"));
}
