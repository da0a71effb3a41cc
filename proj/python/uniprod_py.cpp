#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "uniprod/exponentials.hpp"
#include "uniprod/lachs.hpp"
#include "uniprod/positivity.hpp"
#include "uniprod/universal_products.hpp"
#ifdef UNIPROD_WITH_CLI
#include "uniprod/cli.hpp"
#endif

namespace py = pybind11;
using namespace uniprod;

namespace {

// Scalars cross the boundary as canonical strings; ints and Fractions are
// accepted through their str().
Scalar to_scalar(const py::handle& h) {
  if (py::isinstance<py::str>(h)) return Scalar::parse(h.cast<std::string>());
  return Scalar::parse(py::str(h).cast<std::string>());
}

Rational to_rational(const py::handle& h) {
  return Rational::parse(py::str(h).cast<std::string>());
}

struct PyAlgebra {
  AlgebraPtr ptr;

  std::vector<std::string> ids() const {
    std::vector<std::string> out;
    for (const auto& g : ptr->generators()) out.push_back(g.id);
    return out;
  }
};

PyAlgebra make_algebra(const py::list& gens, unsigned faces) {
  std::vector<Generator> out;
  for (const auto& item : gens) {
    if (py::isinstance<py::str>(item)) {
      out.push_back({item.cast<std::string>(), 1, ""});
    } else if (py::isinstance<py::dict>(item)) {
      auto d = item.cast<py::dict>();
      Generator g{d["id"].cast<std::string>(), 1, ""};
      if (d.contains("face")) g.face = d["face"].cast<unsigned>();
      if (d.contains("star")) g.star = d["star"].cast<std::string>();
      out.push_back(g);
    } else {
      auto t = item.cast<py::tuple>();
      Generator g{t[0].cast<std::string>(), 1, ""};
      if (t.size() > 1) g.face = t[1].cast<unsigned>();
      if (t.size() > 2) g.star = t[2].cast<std::string>();
      out.push_back(g);
    }
  }
  return {FacedAlgebra::make(faces, out)};
}

std::vector<std::string> strs(const std::vector<Scalar>& v) {
  std::vector<std::string> out;
  for (const auto& s : v) out.push_back(s.str());
  return out;
}

py::dict table_of(const Functional& f) {
  py::dict out;
  for (const auto& [w, v] : f.entries()) out[py::str(format_word(*f.algebra(), w))] = strs(v);
  return out;
}

py::list symword_list(const FacedAlgebra& alg, const SymWord& s) {
  py::list out;
  for (const auto& [k, w] : s.atoms()) out.append(py::make_tuple(k, format_word(alg, w)));
  return out;
}

py::dict psd_dict(const PsdVerdict& v) {
  py::dict out;
  out["psd"] = v.psd;
  out["witness"] = v.witness ? py::cast(strs(*v.witness)) : py::none();
  out["witness_value"] = v.witness ? py::cast(v.witness_value.str()) : py::none();
  py::list pivots;
  for (const auto& [i, p] : v.pivots) pivots.append(py::make_tuple(i, p.str()));
  out["pivots"] = pivots;
  return out;
}

py::dict positivity_dict(const PositivityVerdict& v, const FacedAlgebra& alg) {
  py::dict out;
  out["pass"] = v.pass;
  out["half_degree"] = v.half_degree;
  if (v.hermitian) {
    out["hermitian_violation"] =
        py::make_tuple(v.hermitian->component, format_word(alg, v.hermitian->word));
  } else {
    out["hermitian_violation"] = py::none();
  }
  out["failed_component"] = v.failed_component ? py::cast(*v.failed_component) : py::none();
  py::list comps;
  for (const auto& c : v.components) comps.append(psd_dict(c));
  out["components"] = comps;
  return out;
}

DualSemigroup make_dual(const PyAlgebra& alg, const py::object& rule) {
  if (rule.is_none()) return DualSemigroup::primitive(alg.ptr);
  auto pair = free_product(alg.ptr, alg.ptr);
  auto d = rule.cast<py::dict>();
  std::vector<Polynomial> images;
  for (GenIndex g = 0; g < alg.ptr->size(); ++g) {
    const auto& id = alg.ptr->generator(g).id;
    Polynomial p(pair);
    if (d.contains(id)) {
      for (const auto& [w, c] : d[py::str(id)].cast<py::dict>()) {
        p.add_term(parse_word(*pair, w.cast<std::string>()), to_scalar(c));
      }
    } else {
      p = Polynomial::word(pair, {pair->index_in_leg(1, g)}) +
          Polynomial::word(pair, {pair->index_in_leg(2, g)});
    }
    images.push_back(p);
  }
  return DualSemigroup(alg.ptr, images);
}

}  // namespace

PYBIND11_MODULE(_uniprod, m) {
  m.doc() = "Exact universal products, convolution exponentials and positivity checks";

  // Translators are tried newest first, so the base class goes in first.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<TruncationError>(m, "TruncationError", PyExc_ValueError);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

  py::class_<PyAlgebra>(m, "Algebra")
      .def(py::init(&make_algebra), py::arg("generators"), py::arg("faces") = 1,
           "Generators are ids, (id, face, star) tuples or {'id', 'face', 'star'} dicts.")
      .def_property_readonly("ids", &PyAlgebra::ids)
      .def_property_readonly("faces", [](const PyAlgebra& a) { return a.ptr->faces(); })
      .def("parse_word", [](const PyAlgebra& a, const std::string& w) { return parse_word(*a.ptr, w); })
      .def("format_word", [](const PyAlgebra& a, const Word& w) { return format_word(*a.ptr, w); })
      .def("__len__", [](const PyAlgebra& a) { return a.ptr->size(); });

  m.def("free_product", [](const PyAlgebra& a, const PyAlgebra& b) {
    return PyAlgebra{free_product(a.ptr, b.ptr)};
  });

  py::class_<Functional>(m, "Functional")
      .def(py::init([](const PyAlgebra& a, std::size_t components, unsigned degree) {
             return Functional(a.ptr, components, degree);
           }),
           py::arg("algebra"), py::arg("components") = 1, py::arg("degree"))
      .def_property_readonly("components", &Functional::components)
      .def_property_readonly("degree", &Functional::degree)
      .def_property_readonly("algebra", [](const Functional& f) { return PyAlgebra{f.algebra()}; })
      .def("set",
           [](Functional& f, std::size_t k, const std::string& w, const py::handle& v) {
             f.set(k, parse_word(*f.algebra(), w), to_scalar(v));
           })
      .def("value",
           [](const Functional& f, std::size_t k, const std::string& w) {
             return f.value(k, parse_word(*f.algebra(), w)).str();
           })
      .def("table", &table_of)
      .def("__eq__", [](const Functional& a, const Functional& b) { return a == b; });

  py::class_<DualSemigroup>(m, "DualSemigroup")
      .def(py::init(&make_dual), py::arg("algebra"), py::arg("rule") = py::none(),
           "rule maps generator ids to {'g@1 g@2': scalar}; omitted generators are primitive.")
      .def_property_readonly("is_primitive", &DualSemigroup::is_primitive)
      .def_property_readonly("is_degree_preserving", &DualSemigroup::is_degree_preserving)
      .def("check_counit", [](const DualSemigroup& D) { return check_counit(D).pass; })
      .def("check_coassoc", [](const DualSemigroup& D, unsigned degree) {
        return check_coassoc(D, degree).pass;
      });

  m.def("product_names", &builtin_product_names);

  m.def(
      "eval_product",
      [](const std::string& name, const Functional& f1, const Functional& f2, const std::string& w) {
        auto P = free_product(f1.algebra(), f2.algebra());
        return strs(eval_product(*make_product(name), f1, f2, *P, parse_word(*P, w)));
      },
      "Value vector of phi1 ⊙ phi2 on a word such as 'a1@1 b1@2'.");

  m.def(
      "convolve",
      [](const std::string& name, const DualSemigroup& D, const Functional& f1, const Functional& f2,
         std::optional<unsigned> degree) { return convolve(*make_product(name), D, f1, f2, degree); },
      py::arg("product"), py::arg("dual_semigroup"), py::arg("phi1"), py::arg("phi2"),
      py::arg("degree") = py::none());

  m.def(
      "convolution_power",
      [](const std::string& name, const DualSemigroup& D, const Functional& f, unsigned n,
         unsigned degree) { return convolution_power(*make_product(name), D, f, n, degree); });

  m.def(
      "exp_dual",
      [](const std::string& name, const DualSemigroup& D, const Functional& psi,
         std::optional<unsigned> degree) {
        py::gil_scoped_release release;
        return exp_dual(make_product(name), D, psi, degree).table;
      },
      py::arg("product"), py::arg("dual_semigroup"), py::arg("psi"), py::arg("degree") = py::none());

  m.def("exp_poly", [](const std::string& name, const DualSemigroup& D, const Functional& psi,
                       const std::string& w) {
    std::vector<std::vector<std::string>> out;
    for (const auto& p : exp_poly_in_t(make_product(name), D, psi, parse_word(*psi.algebra(), w))) {
      out.push_back(strs(p));
    }
    return out;
  });

  m.def("trotter", [](const std::string& name, const DualSemigroup& D, const Functional& psi,
                      unsigned n, unsigned degree) {
    auto run = [&] {
      py::gil_scoped_release release;
      return trotter(make_product(name), D, psi, n, degree);
    }();
    py::dict out, dev;
    for (const auto& [w, r] : run.deviation) dev[py::str(format_word(*psi.algebra(), w))] = r.str();
    out["n"] = run.n;
    out["max_deviation"] = run.max_deviation.str();
    out["deviation"] = dev;
    return out;
  });

  m.def("check_semigroup_law", [](const std::string& name, const DualSemigroup& D,
                                  const Functional& psi, unsigned degree) {
    return check_semigroup_law(make_product(name), D, psi, degree).pass;
  });

  m.def(
      "sigma",
      [](const std::string& name, const PyAlgebra& left, const PyAlgebra& right, const std::string& w,
         std::size_t components) {
        auto P = free_product(left.ptr, right.ptr);
        auto t = extract_sigma(*make_product(name), *P, components,
                               SymWord::single(0, parse_word(*P, w)));
        py::list out;
        for (const auto& [lr, c] : t) {
          out.append(py::make_tuple(c.str(), symword_list(*left.ptr, lr.first),
                                    symword_list(*right.ptr, lr.second)));
        }
        return out;
      },
      py::arg("product"), py::arg("left"), py::arg("right"), py::arg("word"),
      py::arg("components") = 1, "σ on the single-word SymWord {(0, word)}: (coefficient, left, right).");

  m.def(
      "check_axioms",
      [](const std::string& name, unsigned trials, unsigned max_len, std::uint64_t seed,
         std::optional<std::size_t> d) {
        AxiomOptions opt;
        opt.trials = trials;
        opt.max_len = max_len;
        opt.seed = seed;
        opt.d = d.value_or(name == "cfree" ? 2 : 1);
        AxiomReport r;
        {
          py::gil_scoped_release release;
          r = check_axioms(*make_product(name), opt);
        }
        py::dict out;
        out["pass"] = r.pass();
        out["checks"] = r.checks;
        py::list failures;
        for (const auto& f : r.failures) {
          failures.append(py::dict(py::arg("law") = f.law, py::arg("trial") = f.trial,
                                   py::arg("witness") = f.witness, py::arg("detail") = f.detail));
        }
        out["failures"] = failures;
        return out;
      },
      py::arg("product"), py::arg("trials") = 50, py::arg("max_len") = 5, py::arg("seed") = 1,
      py::arg("components") = py::none());

  m.def("psd_exact", [](const std::vector<std::vector<py::object>>& rows) {
    Matrix g;
    for (const auto& row : rows) {
      std::vector<Scalar> r;
      for (const auto& x : row) r.push_back(to_scalar(x));
      g.push_back(r);
    }
    return psd_dict(psd_exact(g));
  });

  m.def("is_restricted_state", [](const Functional& phi, unsigned half) {
    return positivity_dict(is_restricted_state(phi, half), *phi.algebra());
  });
  m.def("is_restricted_generating_functional", [](const Functional& psi, unsigned half) {
    return positivity_dict(is_restricted_generating_functional(psi, half), *psi.algebra());
  });

  m.def(
      "sample_generating_functional",
      [](std::uint64_t seed, const PyAlgebra& alg, unsigned degree, unsigned rep_dim,
         std::size_t components, bool drift) {
        return sample_generating_functional(seed, alg.ptr, degree, {rep_dim, components, drift});
      },
      py::arg("seed"), py::arg("algebra"), py::arg("degree"), py::arg("rep_dim") = 2,
      py::arg("components") = 1, py::arg("drift") = false);

  m.def(
      "schoenberg",
      [](const std::string& name, const DualSemigroup& D, const Functional& psi,
         const std::vector<py::object>& times, unsigned degree) {
        std::vector<Rational> ts;
        for (const auto& t : times) ts.push_back(to_rational(t));
        SchoenbergReport r;
        {
          py::gil_scoped_release release;
          r = schoenberg_suite(make_product(name), D, psi, ts, degree);
        }
        py::dict out;
        out["pass"] = r.pass;
        out["precondition"] = positivity_dict(r.precondition, *psi.algebra());
        out["derivative_ok"] = r.derivative_ok;
        py::list points;
        for (const auto& p : r.points) points.append(py::make_tuple(p.t.str(), p.verdict.pass));
        out["points"] = points;
        return out;
      },
      py::arg("product"), py::arg("dual_semigroup"), py::arg("psi"), py::arg("times"),
      py::arg("degree"));

#ifdef UNIPROD_WITH_CLI
  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      "Runs the command line tool in-process: (exit_code, stdout, stderr).");
#endif
}
