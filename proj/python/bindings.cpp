#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "sudler/birkhoff.hpp"
#include "sudler/bounds.hpp"
#include "sudler/cli.hpp"
#include "sudler/errors.hpp"
#include "sudler/fibcore.hpp"
#include "sudler/golden.hpp"
#include "sudler/product.hpp"
#include "sudler/verify.hpp"

namespace py = pybind11;
using namespace sudler;

namespace {

const GoldenCtx& pick(const GoldenCtx* ctx) {
  static const GoldenCtx fallback;
  return ctx ? *ctx : fallback;
}

py::int_ to_py(const BigInt& v) { return py::int_(py::str(v.get_str())); }

BigInt from_py(const py::int_& v) { return BigInt(py::str(v).cast<std::string>()); }

double as_double(const DoubleDouble& v) { return v.hi + v.lo; }

py::dict product_dict(const ProductResult& r) {
  py::dict d;
  d["k"] = r.k;
  d["value"] = r.value;
  d["log"] = as_double(r.log_value);
  d["err"] = r.err;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sudler sine products at the golden rotation";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<PrecisionError>(m, "PrecisionError", base.ptr());

  py::class_<GoldenCtx>(m, "GoldenCtx", "Fixed-point context for omega and its powers.")
      .def(py::init([](std::optional<int> bits, int workers) {
             return new GoldenCtx(bits ? *bits : default_precision_bits(), 64, workers);
           }),
           py::arg("precision_bits") = py::none(), py::arg("workers") = 1)
      .def_property_readonly("precision", &GoldenCtx::precision)
      .def_property("workers", &GoldenCtx::workers, &GoldenCtx::set_workers);

  m.def("default_precision_bits", &default_precision_bits);

  m.def("fib", [](long n) { return to_py(fib(n)); }, py::arg("n"));
  m.def(
      "zeckendorf", [](const py::int_& n) { return zeckendorf(from_py(n)).indices(); }, py::arg("n"),
      "Zeckendorf indices, highest first.");

  m.def(
      "sudler_product", [](std::uint64_t k, const GoldenCtx* ctx) { return product_dict(sudler_product(k, pick(ctx))); },
      py::arg("k"), py::arg("ctx") = nullptr);
  m.def(
      "fibonacci_product", [](int n, const GoldenCtx* ctx) { return product_dict(fibonacci_product(n, pick(ctx))); },
      py::arg("n"), py::arg("ctx") = nullptr);
  m.def("rational_sudler_product", &rational_sudler_product, py::arg("p"), py::arg("q"), py::arg("n"));
  m.def(
      "decompose",
      [](int n, const GoldenCtx* ctx) {
        Decomposition d = decompose(n, pick(ctx));
        py::dict r;
        r["n"] = d.n;
        r["A"] = product_dict(d.a);
        r["B"] = product_dict(d.b);
        r["C"] = product_dict(d.c);
        r["Q"] = product_dict(d.q);
        r["residual"] = d.residual;
        r["relative_residual"] = d.relative_residual;
        return r;
      },
      py::arg("n"), py::arg("ctx") = nullptr);
  m.def(
      "limit_square_correction",
      [](std::uint64_t t, const GoldenCtx* ctx) {
        LimitProduct u = limit_square_correction(t, pick(ctx));
        py::dict r;
        r["value"] = u.value;
        r["squared"] = u.squared;
        r["min_partial"] = u.min_partial;
        r["max_partial"] = u.max_partial;
        r["err"] = u.err;
        return r;
      },
      py::arg("terms"), py::arg("ctx") = nullptr);
  m.def(
      "profile",
      [](int n, std::uint64_t stride, const GoldenCtx* ctx) {
        std::vector<std::tuple<std::uint64_t, double, double>> out;
        for (const ProfileRow& r : profile(n, stride, pick(ctx))) out.emplace_back(r.k, r.value, r.log_value);
        return out;
      },
      py::arg("n"), py::arg("stride") = 1, py::arg("ctx") = nullptr, "Rows (k, P_k, log P_k) for k <= F_n.");

  m.def(
      "cotangent_sum",
      [](int n, const GoldenCtx* ctx) {
        CotSum c = cotangent_sum(n, pick(ctx));
        py::dict r;
        r["sum"] = as_double(c.sum);
        r["normalized"] = as_double(c.normalized);
        r["lower"] = c.lower;
        r["upper"] = c.upper;
        r["within"] = c.within;
        r["err"] = c.err;
        return r;
      },
      py::arg("n"), py::arg("ctx") = nullptr);
  m.def(
      "birkhoff_sum", [](std::uint64_t k, const GoldenCtx* ctx) { return as_double(birkhoff_sum(k, pick(ctx)).value); },
      py::arg("k"), py::arg("ctx") = nullptr);
  m.def(
      "identity_suite",
      [](int n_max, std::uint64_t seed, int samples) {
        IdentityReport r = identity_suite(n_max, seed, samples);
        py::dict out;
        for (const auto& x : r.results) out[py::str(x.name)] = x.max_rel_dev;
        return py::make_tuple(r.passed(), out);
      },
      py::arg("n_max"), py::arg("seed") = 20110101, py::arg("samples") = 20);

  m.def(
      "shifted_product",
      [](int n, int power, bool negative, const GoldenCtx* ctx) {
        const GoldenCtx& c = pick(ctx);
        ShiftedProduct p = shifted_product(n, shift_from_power(power, negative, c), c);
        py::dict r;
        r["value"] = p.value;
        r["ratio"] = p.ratio;
        r["agree"] = p.agree;
        return r;
      },
      py::arg("n"), py::arg("power"), py::arg("negative") = false, py::arg("ctx") = nullptr,
      "prod_{r <= F_n} |2 sin pi(r omega -+ omega^power)|.");
  m.def(
      "power_law_scan",
      [](std::uint64_t k_max, const GoldenCtx* ctx) {
        PowerLawReport r = power_law_scan(k_max, pick(ctx));
        return py::make_tuple(r.k1, r.k2);
      },
      py::arg("k_max"), py::arg("ctx") = nullptr, "(K1_emp, K2_emp) over 2 <= k <= k_max.");

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::vector<std::string> all{"sudler"};
        all.insert(all.end(), args.begin(), args.end());
        std::vector<const char*> argv;
        for (const auto& a : all) argv.push_back(a.c_str());
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line in-process; returns (exit code, stdout, stderr).");
}
