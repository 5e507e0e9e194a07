#include "autf/errors.hpp"
#include "autf/expr.hpp"
#include "autf/roots.hpp"
#include "autf/series.hpp"
#include "autf/symmetry.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace autf;

namespace {

AffineMap make_map(long long p, long long q, std::complex<double> b) {
    AffineMap m;
    m.angle = RationalAngle(p, q);
    m.b = b;
    return m;
}

std::string map_repr(const AffineMap& m) {
    std::ostringstream os;
    os << "AffineMap(theta=" << m.angle.str() << ", b=(" << m.b.real() << ","
       << m.b.imag() << "))";
    return os.str();
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Affine automorphic functions of entire functions: "
              "f(Phi(z)) = f(z) discovery and verification";

    auto base = py::register_exception<Error>(m, "AutfError");
    py::register_exception<autf::SyntaxError>(m, "ExprSyntaxError", base);
    py::register_exception<NotEntireError>(m, "NotEntireError", base);
    py::register_exception<autf::OverflowError>(m, "EvalOverflowError", base);
    py::register_exception<CenterMismatch>(m, "CenterMismatch", base);
    py::register_exception<OrderMismatch>(m, "OrderMismatch", base);
    py::register_exception<AllCoefficientsVanish>(m, "AllCoefficientsVanish",
                                                  base);
    py::register_exception<NoConvergence>(m, "NoConvergence", base);
    py::register_exception<BoxRequired>(m, "BoxRequired", base);
    py::register_exception<OrderOne>(m, "OrderOne", base);
    py::register_exception<NotACriticalPoint>(m, "NotACriticalPoint", base);
    py::register_exception<TranslationHasNoFixedPoint>(
        m, "TranslationHasNoFixedPoint", base);
    py::register_exception<EveryPointFixed>(m, "EveryPointFixed", base);
    py::register_exception<NoMatchingRoot>(m, "NoMatchingRoot", base);
    py::register_exception<PropositionViolation>(m, "PropositionViolation",
                                                 base);

    py::class_<Expr, ExprPtr>(m, "Expr")
        .def("__repr__",
             [](const ExprPtr& e) { return "Expr(\"" + format(e) + "\")"; })
        .def("__str__", [](const ExprPtr& e) { return format(e); })
        .def("__call__",
             [](const ExprPtr& e, std::complex<double> z) {
                 return evaluate(e, z);
             },
             py::arg("z"))
        .def("diff", [](const ExprPtr& e) { return differentiate(e); });

    m.def("parse", &parse, py::arg("text"),
          "Parse a closed-form entire function (z, i, pi, numbers, + - * / "
          "^, exp/sin/cos/sinh/cosh).");
    m.def("format", &format, py::arg("f"));
    m.def("evaluate", &evaluate, py::arg("f"), py::arg("z"));
    m.def("differentiate", &differentiate, py::arg("f"));
    m.def("structurally_equal", &structurally_equal, py::arg("a"),
          py::arg("b"));

    py::class_<PolyForm>(m, "PolyForm")
        .def_readonly("coeffs", &PolyForm::coeffs)
        .def_property_readonly("exact", &PolyForm::is_exact)
        .def_property_readonly("degree", &PolyForm::degree)
        .def("__call__", &PolyForm::horner, py::arg("z"))
        .def("derivative", &PolyForm::derivative);

    m.def(
        "to_polynomial",
        [](const ExprPtr& f) -> std::optional<PolyForm> {
            return to_polynomial(f);
        },
        py::arg("f"),
        "Dense coefficients when f has no transcendental part, else None.");

    py::class_<TaylorSeries>(m, "TaylorSeries")
        .def_readonly("center", &TaylorSeries::center)
        .def_readonly("coeffs", &TaylorSeries::coeffs)
        .def_property_readonly("order", &TaylorSeries::order)
        .def("__call__", &TaylorSeries::eval, py::arg("z"));

    m.def("expand", &expand, py::arg("f"), py::arg("center"),
          py::arg("order") = 64,
          "Truncated Taylor expansion about an arbitrary center.");
    m.def("series_add", &add);
    m.def("series_mul", &mul);
    m.def("series_scale", &scale);
    m.def("compose_affine", &compose_affine, py::arg("s"), py::arg("lam"),
          py::arg("b"), py::arg("out_center"));
    m.def("series_derivative",
          [](const TaylorSeries& s) { return derivative(s); });
    m.def("series_compose",
          static_cast<TaylorSeries (*)(const TaylorSeries&,
                                       const TaylorSeries&)>(&compose),
          py::arg("outer"), py::arg("inner"));
    m.def("zero_order", &zero_order, py::arg("s"), py::arg("tol") = 1e-9);

    py::class_<SearchBox>(m, "SearchBox")
        .def(py::init([](std::complex<double> lo, std::complex<double> hi,
                         int grid) {
                 return SearchBox{lo, hi, grid};
             }),
             py::arg("lo"), py::arg("hi"), py::arg("grid") = 16)
        .def_readwrite("lo", &SearchBox::lo)
        .def_readwrite("hi", &SearchBox::hi)
        .def_readwrite("grid", &SearchBox::grid);

    py::class_<CriticalPoint>(m, "CriticalPoint")
        .def_readonly("location", &CriticalPoint::location)
        .def_readonly("residual", &CriticalPoint::residual)
        .def_readonly("multiplicity", &CriticalPoint::multiplicity)
        .def("__repr__", [](const CriticalPoint& c) {
            std::ostringstream os;
            os << "CriticalPoint((" << c.location.real() << ","
               << c.location.imag() << "), mult=" << c.multiplicity << ")";
            return os.str();
        });

    m.def(
        "polynomial_roots",
        [](const PolyForm& p, double tol, int max_iterations) {
            return polynomial_roots(p, tol, max_iterations);
        },
        py::arg("p"), py::arg("tol") = 1e-10, py::arg("max_iterations") = 300);
    m.def("critical_points", &critical_points, py::arg("f"),
          py::arg("box") = std::optional<SearchBox>{});

    py::class_<RationalAngle>(m, "RationalAngle")
        .def(py::init<long long, long long>(), py::arg("p"), py::arg("q"))
        .def_property_readonly("p", &RationalAngle::p)
        .def_property_readonly("q", &RationalAngle::q)
        .def("multiplier", &RationalAngle::unit_multiplier)
        .def("__str__", &RationalAngle::str)
        .def("__repr__",
             [](const RationalAngle& a) {
                 return "RationalAngle(" + a.str() + ")";
             })
        .def("__eq__", [](const RationalAngle& a, const RationalAngle& b) {
            return a == b;
        });

    py::class_<AffineMap>(m, "AffineMap")
        .def(py::init(&make_map), py::arg("p"), py::arg("q"),
             py::arg("b") = std::complex<double>(0, 0))
        .def_readwrite("angle", &AffineMap::angle)
        .def_readwrite("b", &AffineMap::b)
        .def_readonly("provenance", &AffineMap::provenance)
        .def("multiplier", &AffineMap::multiplier)
        .def("__call__", &AffineMap::apply, py::arg("z"))
        .def("is_identity", &AffineMap::is_identity)
        .def("__repr__", &map_repr);

    m.def("compose",
          static_cast<AffineMap (*)(const AffineMap&, const AffineMap&)>(
              &compose),
          py::arg("f"), py::arg("g"));
    m.def("invert", &invert, py::arg("f"));
    m.def("fixed_point", &fixed_point, py::arg("phi"));
    m.def("theta_height", &theta_height, py::arg("angle"));

    py::class_<VerificationPolicy>(m, "VerificationPolicy")
        .def(py::init<>())
        .def_readwrite("series_depth", &VerificationPolicy::series_depth)
        .def_readwrite("compare_order", &VerificationPolicy::compare_order)
        .def_readwrite("samples", &VerificationPolicy::samples)
        .def_readwrite("eps_accept", &VerificationPolicy::eps_accept)
        .def_readwrite("eps_reject", &VerificationPolicy::eps_reject)
        .def_readwrite("zero_order_tol", &VerificationPolicy::zero_order_tol)
        .def_readwrite("critical_point_tol",
                       &VerificationPolicy::critical_point_tol)
        .def_readwrite("radius_factor", &VerificationPolicy::radius_factor)
        .def_readwrite("seed", &VerificationPolicy::seed);

    py::enum_<VerifyStatus>(m, "VerifyStatus")
        .value("VerifiedExact", VerifyStatus::VerifiedExact)
        .value("VerifiedNumeric", VerifyStatus::VerifiedNumeric)
        .value("Refuted", VerifyStatus::Refuted)
        .value("Indeterminate", VerifyStatus::Indeterminate);

    py::class_<VerificationReport>(m, "VerificationReport")
        .def_readonly("status", &VerificationReport::status)
        .def_readonly("map", &VerificationReport::map)
        .def_readonly("exact_tier", &VerificationReport::exact_tier)
        .def_readonly("compare_order", &VerificationReport::compare_order)
        .def_readonly("samples", &VerificationReport::samples)
        .def_readonly("seed", &VerificationReport::seed)
        .def_readonly("max_residual", &VerificationReport::max_residual)
        .def_readonly("witness", &VerificationReport::witness)
        .def_readonly("witness_residual",
                      &VerificationReport::witness_residual)
        .def("verified", &VerificationReport::verified)
        .def("__repr__", [](const VerificationReport& r) {
            return std::string("VerificationReport(") +
                   verify_status_name(r.status) + ", " + map_repr(r.map) + ")";
        });

    py::class_<PointScan>(m, "PointScan")
        .def_readonly("anchor", &PointScan::anchor)
        .def_readonly("order", &PointScan::order)
        .def_readonly("reports", &PointScan::reports);

    m.def("zero_order_at", &zero_order_at, py::arg("f"), py::arg("z0"),
          py::arg("order") = 64, py::arg("tol") = 1e-9,
          "Order n of the zero of f - f(z0) at z0.");
    m.def("candidates", &candidates, py::arg("z0"), py::arg("n"),
          "The n-1 candidate maps with angle 2k/n fixing z0.");
    m.def("verify", &verify, py::arg("f"), py::arg("phi"),
          py::arg("policy") = VerificationPolicy{});
    m.def("scan_point", &scan_point, py::arg("f"), py::arg("z0"),
          py::arg("policy") = VerificationPolicy{});
    m.def("find_symmetries_at", &find_symmetries_at, py::arg("f"),
          py::arg("z0"), py::arg("policy") = VerificationPolicy{},
          "All verified maps anchored at the critical point z0.");

    py::class_<DerivativeCheck>(m, "DerivativeCheck")
        .def_readonly("order", &DerivativeCheck::order)
        .def_readonly("root_k", &DerivativeCheck::root_k);

    m.def("fixed_point_derivative_check", &fixed_point_derivative_check,
          py::arg("f"), py::arg("phi"), py::arg("order") = 64,
          py::arg("tol") = 1e-9);

    py::class_<GroupClosure>(m, "GroupClosure")
        .def_readonly("elements", &GroupClosure::elements)
        .def_readonly("truncated", &GroupClosure::truncated);

    m.def("group_closure", &group_closure, py::arg("generators"),
          py::arg("cap") = 256);

    py::class_<OrbitReport>(m, "OrbitReport")
        .def_readonly("base", &OrbitReport::base)
        .def_readonly("points", &OrbitReport::points)
        .def_readonly("generators", &OrbitReport::generators)
        .def_readonly("depth", &OrbitReport::depth)
        .def_readonly("min_pairwise_distance",
                      &OrbitReport::min_pairwise_distance);

    m.def("orbit", &orbit, py::arg("base"), py::arg("generators"),
          py::arg("depth") = 6);

    py::class_<IntersectionReport>(m, "IntersectionReport")
        .def_readonly("on_f", &IntersectionReport::on_f)
        .def_readonly("on_derivative", &IntersectionReport::on_derivative)
        .def_readonly("both_verified", &IntersectionReport::both_verified);

    m.def("check_intersection_translation", &check_intersection_translation,
          py::arg("f"), py::arg("phi"),
          py::arg("policy") = VerificationPolicy{});
    m.def("check_translation", &check_translation, py::arg("f"), py::arg("b"),
          py::arg("policy") = VerificationPolicy{});

#ifdef AUTF_VERSION
    m.attr("__version__") = AUTF_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
