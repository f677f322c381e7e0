#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "inlslab/classify.hpp"
#include "inlslab/cutoff.hpp"
#include "inlslab/errors.hpp"
#include "inlslab/evolution.hpp"
#include "inlslab/functionals.hpp"
#include "inlslab/grid.hpp"
#include "inlslab/ground_state.hpp"
#include "inlslab/params.hpp"

namespace py = pybind11;
using namespace inls;

namespace {

using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

// python-facing handle: pybind11 holders cannot be shared_ptr<const T>
struct PyGrid {
    GridPtr p;
    const Grid& ref() const { return *p; }
};

CVec to_cvec(const ComplexArray& a) {
    auto buf = a.request();
    const auto* ptr = static_cast<const Complex*>(buf.ptr);
    return CVec(ptr, ptr + buf.size);
}

py::array_t<Complex> from_cvec(const CVec& v) {
    py::array_t<Complex> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), static_cast<Complex*>(out.request().ptr));
    return out;
}

py::array_t<double> from_rvec(const RVec& v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), static_cast<double*>(out.request().ptr));
    return out;
}

FieldPair make_state(const PyGrid& grid, const ComplexArray& u, const ComplexArray& v) {
    FieldPair s;
    s.grid = grid.p;
    s.u = to_cvec(u);
    s.v = to_cvec(v);
    if (!s.conforms()) throw ConfigError("state arrays do not conform to the grid");
    return s;
}

} // namespace

PYBIND11_MODULE(_inlslab, m) {
    m.doc() = "Ground states, split-step evolution, and threshold classification for the "
              "two-component inhomogeneous NLS system with |x|^-alpha quadratic coupling";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ParamsMismatch>(m, "ParamsMismatchError", PyExc_ValueError);
    py::register_exception<InvalidFrequency>(m, "InvalidFrequencyError", PyExc_ValueError);
    py::register_exception<NonpositiveP>(m, "NonpositivePError", PyExc_ValueError);
    py::register_exception<NonFinite>(m, "NonFiniteError", PyExc_FloatingPointError);

    py::class_<PhysParams>(m, "PhysParams")
        .def(py::init([](int d, double alpha, double kappa, double gamma, double omega) {
                 PhysParams p;
                 p.d = d;
                 p.alpha = alpha;
                 p.kappa = kappa;
                 p.gamma = gamma;
                 p.omega = omega;
                 return p;
             }),
             py::arg("d"), py::arg("alpha"), py::arg("kappa") = 1.0, py::arg("gamma") = 0.0,
             py::arg("omega") = 1.0)
        .def_readwrite("d", &PhysParams::d)
        .def_readwrite("alpha", &PhysParams::alpha)
        .def_readwrite("kappa", &PhysParams::kappa)
        .def_readwrite("gamma", &PhysParams::gamma)
        .def_readwrite("omega", &PhysParams::omega)
        .def_property_readonly("s_c", &PhysParams::s_c)
        .def("validate", [](const PhysParams& p) { p.validate(); })
        .def("__repr__", &PhysParams::describe);

    py::class_<PyGrid>(m, "Grid")
        .def_property_readonly("kind",
                               [](const PyGrid& g) {
                                   return g.ref().kind == GridKind::Radial ? "radial" : "cartesian";
                               })
        .def_property_readonly("d", [](const PyGrid& g) { return g.ref().d; })
        .def_property_readonly("extent", [](const PyGrid& g) { return g.ref().extent; })
        .def_property_readonly("shape", [](const PyGrid& g) { return g.ref().shape; })
        .def_property_readonly("size", [](const PyGrid& g) { return g.ref().size(); })
        .def_property_readonly("quad_weights",
                               [](const PyGrid& g) { return from_rvec(g.ref().quad_weights); })
        .def_property_readonly("weight_alpha",
                               [](const PyGrid& g) { return from_rvec(g.ref().weight_alpha); })
        .def_property_readonly("nodes", [](const PyGrid& g) {
            RVec r(g.ref().size());
            for (std::size_t i = 0; i < g.ref().size(); ++i) r[i] = g.ref().node_radius(i);
            return from_rvec(r);
        });

    m.def(
        "build_grid",
        [](const std::string& kind, int d, double extent, std::vector<int> counts, double alpha) {
            GridSpec spec;
            if (kind == "radial")
                spec.kind = GridKind::Radial;
            else if (kind == "cartesian")
                spec.kind = GridKind::Cartesian;
            else
                throw ConfigError("grid kind must be 'radial' or 'cartesian'");
            spec.d = d;
            spec.extent = extent;
            spec.counts = std::move(counts);
            spec.alpha = alpha;
            return PyGrid{build_grid(spec)};
        },
        py::arg("kind"), py::arg("d"), py::arg("extent"), py::arg("counts"),
        py::arg("alpha") = -1.0);

    m.def("singular_weight",
          [](const PyGrid& g, double alpha) { return from_rvec(singular_weight(g.ref(), alpha)); });
    m.def("laplacian",
          [](const PyGrid& g, const ComplexArray& f) { return from_cvec(laplacian(to_cvec(f), g.ref())); });
    m.def("integrate", [](const PyGrid& g, py::array_t<double> f) {
        auto buf = f.request();
        return integrate(std::span<const double>(static_cast<const double*>(buf.ptr),
                                                 static_cast<std::size_t>(buf.size)),
                         g.ref());
    });
    m.def("grad_norm_sq",
          [](const PyGrid& g, const ComplexArray& f) { return grad_norm_sq(to_cvec(f), g.ref()); });

    m.def(
        "invariants",
        [](const PyGrid& g, const ComplexArray& u, const ComplexArray& v, const PhysParams& p) {
            const InvariantSet inv = invariants(make_state(g, u, v), p);
            py::dict out;
            out["M"] = inv.M;
            out["K"] = inv.K;
            out["P"] = inv.P;
            out["E"] = inv.E;
            out["G"] = inv.G;
            out["H"] = inv.H;
            return out;
        },
        py::arg("grid"), py::arg("u"), py::arg("v"), py::arg("params"));

    m.def("action_nehari",
          [](const PyGrid& g, const ComplexArray& u, const ComplexArray& v, const PhysParams& p) {
              const ActionSet a = action_nehari(make_state(g, u, v), p);
              py::dict out;
              out["A_omega"] = a.A_omega;
              out["B_omega"] = a.B_omega;
              out["S"] = a.S;
              return out;
          });

    m.def("weinstein", [](const PyGrid& g, const ComplexArray& u, const ComplexArray& v,
                          const PhysParams& p) { return weinstein(make_state(g, u, v), p); });

    py::class_<CutoffFn>(m, "CutoffFn")
        .def_readonly("R", &CutoffFn::R)
        .def_property_readonly("chi", [](const CutoffFn& c) { return from_rvec(c.chi); })
        .def_property_readonly("dchi", [](const CutoffFn& c) { return from_rvec(c.dchi); })
        .def_property_readonly("d2chi", [](const CutoffFn& c) { return from_rvec(c.d2chi); });

    m.def(
        "make_cutoff",
        [](const std::string& kind, double R, const PyGrid& g) {
            CutoffKind k;
            if (kind == "chi")
                k = CutoffKind::ChiR;
            else if (kind == "phi")
                k = CutoffKind::PhiR;
            else if (kind == "rho")
                k = CutoffKind::RhoR;
            else if (kind == "quadratic")
                k = CutoffKind::Quadratic;
            else
                throw ConfigError("cutoff kind must be chi|phi|rho|quadratic");
            return make_cutoff(k, R, g.p);
        },
        py::arg("kind"), py::arg("R"), py::arg("grid"));

    m.def("virial_moment", [](const PyGrid& g, const ComplexArray& u, const ComplexArray& v,
                              const CutoffFn& c, const PhysParams& p) {
        const VirialMoment vm = virial_moment(make_state(g, u, v), c, p);
        py::dict out;
        out["V"] = vm.V;
        out["Mchi"] = vm.Mchi;
        out["Vdot"] = vm.Vdot;
        return out;
    });
    m.def("virial_rate", [](const PyGrid& g, const ComplexArray& u, const ComplexArray& v,
                            const CutoffFn& c, const PhysParams& p) {
        return virial_rate(make_state(g, u, v), c, p);
    });

    py::class_<GroundStateResult>(m, "GroundStateResult")
        .def_readonly("d_omega", &GroundStateResult::d_omega)
        .def_readonly("c_omega", &GroundStateResult::c_omega)
        .def_readonly("C_GN", &GroundStateResult::C_GN)
        .def_readonly("decay_rate", &GroundStateResult::decay_rate)
        .def_readonly("iterations", &GroundStateResult::iterations)
        .def_readonly("converged", &GroundStateResult::converged)
        .def_readonly("eq_residual", &GroundStateResult::eq_residual)
        .def_property_readonly("pohozaev_res",
                               [](const GroundStateResult& r) {
                                   return py::make_tuple(r.pohozaev_res.first,
                                                         r.pohozaev_res.second);
                               })
        .def_property_readonly("phi",
                               [](const GroundStateResult& r) { return from_cvec(r.fields.u); })
        .def_property_readonly("psi",
                               [](const GroundStateResult& r) { return from_cvec(r.fields.v); })
        .def_property_readonly("grid", [](const GroundStateResult& r) { return PyGrid{r.fields.grid}; });

    m.def(
        "minimize_nehari",
        [](const PhysParams& p, const PyGrid& g, double tol, int max_iters,
           const std::string& init, std::uint64_t seed) {
            SolverOptions opts;
            opts.tol = tol;
            opts.max_iters = max_iters;
            opts.init = init;
            opts.seed = seed;
            return minimize_nehari(p, g.p, opts);
        },
        py::arg("params"), py::arg("grid"), py::arg("tol") = 1e-8, py::arg("max_iters") = 50000,
        py::arg("init") = "gaussian", py::arg("seed") = 0);

    m.def("gn_constant", &gn_constant);
    m.def("gn_constant_crosscheck", &gn_constant_crosscheck);
    m.def("mountain_pass_level", &mountain_pass_level);
    m.def("decay_fit", &decay_fit);
    m.def(
        "scalar_Q",
        [](const PhysParams& p, const PyGrid& g) {
            ScalarQResult q = scalar_Q(p, g.p);
            py::dict out;
            out["Q"] = from_rvec(q.Q);
            out["action"] = q.action;
            out["eq_residual"] = q.eq_residual;
            out["converged"] = q.converged;
            return out;
        },
        py::arg("params"), py::arg("grid"));
    m.def(
        "alpha_limit",
        [](const PhysParams& p0, const std::vector<double>& alphas, const PyGrid& g) {
            auto rows = alpha_limit(p0, alphas, g.p);
            py::list out;
            for (const auto& r : rows) {
                py::dict row;
                row["alpha"] = r.alpha;
                row["d_omega"] = r.d_omega;
                row["h1_distance"] = r.h1_distance;
                out.append(row);
            }
            return out;
        },
        py::arg("params"), py::arg("alphas"), py::arg("grid"));
    m.def(
        "compute_d_minus",
        [](const PhysParams& p, const PyGrid& g) {
            DMinusResult r = compute_d_minus(p, g.p);
            return py::make_tuple(r.d_minus, r.wp);
        },
        py::arg("params"), py::arg("grid"));

    m.def("strang_step", [](const PyGrid& g, const ComplexArray& u, const ComplexArray& v,
                            const PhysParams& p, double dt) {
        FieldPair out = strang_step(make_state(g, u, v), p, dt);
        return py::make_tuple(from_cvec(out.u), from_cvec(out.v));
    });

    m.def(
        "evolve",
        [](const PyGrid& g, const ComplexArray& u, const ComplexArray& v, const PhysParams& p,
           double dt, double t_end, double dt_min, int diag_stride, double cutoff_R,
           double blowup_K_factor) {
            EvolveConfig cfg;
            cfg.p = p;
            cfg.dt = dt;
            cfg.t_end = t_end;
            cfg.dt_min = dt_min;
            cfg.diag_stride = diag_stride;
            cfg.cutoff_R = cutoff_R;
            cfg.blowup_K_factor = blowup_K_factor;
            Trajectory tr = evolve(make_state(g, u, v), cfg);
            py::dict out;
            out["status"] = tr.status == EvolveStatus::Completed     ? "Completed"
                            : tr.status == EvolveStatus::BlowupDetected ? "BlowupDetected"
                                                                        : "Diverged";
            out["times"] = from_rvec(tr.times);
            const std::size_t nrec = tr.diag.size();
            RVec m(nrec), k(nrec), pp(nrec), e(nrec), gg(nrec), h(nrec), lm(nrec), st(nrec);
            for (std::size_t i = 0; i < nrec; ++i) {
                m[i] = tr.diag[i].M;
                k[i] = tr.diag[i].K;
                pp[i] = tr.diag[i].P;
                e[i] = tr.diag[i].E;
                gg[i] = tr.diag[i].G;
                h[i] = tr.diag[i].H;
                lm[i] = tr.diag[i].localmass;
                st[i] = tr.diag[i].spacetime_accum;
            }
            out["M"] = from_rvec(m);
            out["K"] = from_rvec(k);
            out["P"] = from_rvec(pp);
            out["E"] = from_rvec(e);
            out["G"] = from_rvec(gg);
            out["H"] = from_rvec(h);
            out["localmass"] = from_rvec(lm);
            out["spacetime_accum"] = from_rvec(st);
            out["u"] = from_cvec(tr.final_state.u);
            out["v"] = from_cvec(tr.final_state.v);
            out["detection_time"] = tr.detection_time;
            return out;
        },
        py::arg("grid"), py::arg("u"), py::arg("v"), py::arg("params"), py::arg("dt") = 1e-3,
        py::arg("t_end") = 1.0, py::arg("dt_min") = 1e-7, py::arg("diag_stride") = 10,
        py::arg("cutoff_R") = 4.0, py::arg("blowup_K_factor") = 1e3);

    m.def("regime", [](int d, double alpha) {
        const RegimeInfo r = regime(d, alpha);
        return py::make_tuple(regime_name(r.label), r.s_c);
    });
    m.def("stability_criterion", [](const PhysParams& p) {
        const StabilityVerdict v = stability_criterion(p);
        const char* label = v.expected == StabilityVerdict::Expectation::Stable ? "stable"
                            : v.expected == StabilityVerdict::Expectation::Unstable
                                ? "unstable"
                                : "indeterminate";
        return py::make_tuple(std::string(label), v.reason);
    });
    m.def(
        "global_threshold_check",
        [](const PyGrid& g, const ComplexArray& u, const ComplexArray& v,
           const GroundStateResult& gs, const PhysParams& p, const PhysParams& gs_params) {
            const Verdict verdict =
                global_threshold_check(make_state(g, u, v), gs, p, gs_params);
            py::dict out;
            out["label"] = verdict_name(verdict.label);
            py::list ev;
            for (const auto& e : verdict.evidence)
                ev.append(py::make_tuple(e.name, e.lhs, e.rhs));
            out["evidence"] = ev;
            return out;
        });
    m.def(
        "blowup_threshold_check",
        [](const PyGrid& g, const ComplexArray& u, const ComplexArray& v,
           const GroundStateResult& gs, const PhysParams& p, const PhysParams& gs_params,
           std::optional<double> wp) {
            const Verdict verdict =
                blowup_threshold_check(make_state(g, u, v), gs, p, gs_params, wp);
            py::dict out;
            out["label"] = verdict_name(verdict.label);
            py::list ev;
            for (const auto& e : verdict.evidence)
                ev.append(py::make_tuple(e.name, e.lhs, e.rhs));
            out["evidence"] = ev;
            return out;
        },
        py::arg("grid"), py::arg("u"), py::arg("v"), py::arg("gs"), py::arg("params"),
        py::arg("gs_params"), py::arg("wp") = py::none());
}
