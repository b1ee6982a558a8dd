#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "phaseinv/certify.hpp"
#include "phaseinv/config.hpp"
#include "phaseinv/errors.hpp"
#include "phaseinv/integrate.hpp"
#include "phaseinv/invariants.hpp"
#include "phaseinv/models.hpp"
#include "phaseinv/rank.hpp"
#include "phaseinv/sampling.hpp"
#include "phaseinv/spectral.hpp"
#include "phaseinv/version.hpp"

namespace py = pybind11;
using namespace phaseinv;

namespace {

PhaseVector to_state(const std::vector<double>& phases) { return PhaseVector(phases); }
Permutation to_perm(const std::vector<int>& order) { return Permutation(order); }

py::array_t<double> matrix(const std::vector<double>& flat, std::size_t rows, std::size_t cols) {
  py::array_t<double> out({rows, cols});
  std::copy(flat.begin(), flat.end(), out.mutable_data());
  return out;
}

py::dict rank_dict(const RankReport& r) {
  py::dict d;
  d["rank"] = r.rank;
  d["min_rank"] = r.min_rank;
  d["columns"] = r.columns;
  d["points"] = r.points;
  return d;
}

}  // namespace

PYBIND11_MODULE(_phaseinv, m) {
  m.doc() = "Conserved quantities of phase-oscillator ensembles";
  m.attr("__version__") = kVersion;

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<SingularState>(m, "SingularState", PyExc_ArithmeticError);

  py::class_<ModelSpec>(m, "Model")
      .def_static("theta", [](const std::string& input, double a) {
            if (input == "zero") return ModelSpec::theta(ThetaInput::zero());
            if (input == "sin") return ModelSpec::theta(ThetaInput::sinusoid());
            if (input == "constant") return ModelSpec::theta(ThetaInput::constant(a));
            throw InvalidArgument("theta input must be 'zero', 'sin' or 'constant'");
          }, py::arg("input") = "sin", py::arg("a") = 0.0)
      .def_static("kuramoto_sakaguchi", &ModelSpec::kuramoto_sakaguchi, py::arg("omega") = 0.0,
                  py::arg("K") = 1.0, py::arg("delta") = 0.0)
      .def_static("higher_order", &ModelSpec::higher_order, py::arg("omega") = 0.0, py::arg("K") = 1.0,
                  py::arg("delta") = 0.0)
      .def_property_readonly("kind", [](const ModelSpec& s) { return to_string(s.kind()); })
      .def("__repr__", &ModelSpec::describe);

  m.def("vector_field", [](const ModelSpec& model, const std::vector<double>& phases, double t) {
        return vector_field(model, to_state(phases), t);
      }, py::arg("model"), py::arg("phases"), py::arg("t") = 0.0);
  m.def("lambda_analytic", [](const ModelSpec& model, const std::vector<double>& phases, double t) {
        return lambda_analytic(model, to_state(phases), t);
      }, py::arg("model"), py::arg("phases"), py::arg("t") = 0.0);

  m.def("psi", [](const std::vector<double>& phases, const std::vector<int>& q) {
        return psi(to_state(phases), to_perm(q));
      }, py::arg("phases"), py::arg("q"));
  m.def("big_psi", [](const std::vector<double>& phases, const std::vector<int>& q1, const std::vector<int>& q2) {
        return big_psi(to_state(phases), to_perm(q1), to_perm(q2));
      }, py::arg("phases"), py::arg("q1"), py::arg("q2"));
  m.def("cross_ratio", [](const std::vector<double>& phases, const Quadruple& idx) {
        return cross_ratio(to_state(phases), idx);
      }, py::arg("phases"), py::arg("idx"));
  m.def("canonical_permutations", [](int n) {
        std::vector<std::vector<int>> out;
        for (const auto& q : canonical_permutations(n)) out.push_back(q.order());
        return out;
      }, py::arg("n"));
  m.def("decompose", [](const std::vector<int>& q1, const std::vector<int>& q2) {
        const Decomposition d = decompose_full(to_perm(q1), to_perm(q2));
        py::dict out;
        out["sign"] = d.sign;
        out["factors"] = d.factors;
        out["cases"] = d.cases;
        return out;
      }, py::arg("q1"), py::arg("q2"));
  m.def("evaluate_decomposition", [](const std::vector<double>& phases, int sign, const std::vector<Quadruple>& factors) {
        Decomposition d;
        d.sign = sign;
        d.factors = factors;
        return evaluate_decomposition(to_state(phases), d);
      }, py::arg("phases"), py::arg("sign"), py::arg("factors"));

  m.def("simulate", [](const ModelSpec& model, const std::vector<double>& initial, double t_end, double dt,
                       double t0, std::size_t record_every) {
        SimulateOptions opt;
        opt.record_every = record_every;
        const Trajectory tr = simulate(model, to_state(initial), t0, t_end, dt, opt);
        std::vector<double> flat;
        flat.reserve(tr.states.size() * initial.size());
        for (const auto& s : tr.states) flat.insert(flat.end(), s.phases().begin(), s.phases().end());
        py::dict out;
        out["times"] = py::array_t<double>(static_cast<py::ssize_t>(tr.times.size()), tr.times.data());
        out["states"] = matrix(flat, tr.states.size(), initial.size());
        out["first_guard_violation_time"] = tr.first_guard_violation_time;
        out["guarded_prefix"] = tr.guarded_prefix;
        return out;
      }, py::arg("model"), py::arg("initial"), py::arg("t_end"), py::arg("dt") = kDefaultDt,
      py::arg("t0") = 0.0, py::arg("record_every") = 1);

  m.def("verify_pf_eigenrelation", [](const ModelSpec& model, const std::vector<int>& q,
                                      const std::vector<double>& phases, double t, double fd_step) {
        const PFResidual r = verify_pf_eigenrelation(model, to_perm(q), to_state(phases), t, fd_step);
        py::dict out;
        out["P_u"] = r.value_P_u;
        out["Lambda_u"] = r.value_Lambda_u;
        out["u"] = r.value_u;
        out["rel_residual"] = r.rel_residual;
        return out;
      }, py::arg("model"), py::arg("q"), py::arg("phases"), py::arg("t") = 0.0,
      py::arg("fd_step") = kDefaultFdStep);

  m.def("sample_clipped_psi", [](int n, const std::vector<int>& q, double clip, std::size_t count,
                                 std::uint64_t seed) {
        const Ensemble e = sample_clipped_psi(n, to_perm(q), clip, count, seed);
        return matrix(e.phases, e.count(), static_cast<std::size_t>(n));
      }, py::arg("n"), py::arg("q"), py::arg("clip") = kDefaultClip, py::arg("count"), py::arg("seed") = 1);
  m.def("compare_histogram", [](py::array_t<double, py::array::c_style | py::array::forcecast> samples,
                                const std::vector<int>& q, int bins, double lambda, double t, double clip,
                                double heavy_threshold, std::optional<ModelSpec> model) {
        if (samples.ndim() != 2 || samples.shape(1) != 3) throw InvalidArgument("samples must have shape (M, 3)");
        std::vector<PhaseVector> states;
        states.reserve(static_cast<std::size_t>(samples.shape(0)));
        const double* p = samples.data();
        for (py::ssize_t i = 0; i < samples.shape(0); ++i) states.emplace_back(std::vector<double>(p + 3 * i, p + 3 * i + 3));
        ComparisonOptions opt;
        opt.heavy_threshold = heavy_threshold;
        const PlaneHistogram hist = plane_histogram(states, bins);
        const DensityComparison c =
            model ? histogram_vs_transported_density(hist, to_perm(q), *model, lambda, t, clip, 0.01, opt)
                  : histogram_vs_density(hist, to_perm(q), lambda, t, clip, opt);
        py::dict out;
        out["max_rel_err"] = c.max_rel_err;
        out["heavy_bin_count"] = c.heavy_bin_count;
        out["chi_square"] = c.chi_square;
        out["p_value"] = c.p_value;
        out["worst_bin"] = std::make_pair(c.worst_ix, c.worst_iy);
        return out;
      }, py::arg("samples"), py::arg("q"), py::arg("bins") = 50, py::arg("lambda_") = 0.0, py::arg("t") = 0.0,
      py::arg("clip") = kDefaultClip, py::arg("heavy_threshold") = 500.0, py::arg("model") = py::none());

  m.def("invariant_rank", [](int n, int points, std::uint64_t seed) {
        return rank_dict(invariant_independence_rank(n, points, seed));
      }, py::arg("n"), py::arg("points") = 8, py::arg("seed") = 1);
  m.def("psi_functional_rank", [](int n, int points, std::uint64_t seed) {
        return rank_dict(psi_functional_rank(n, points, seed));
      }, py::arg("n"), py::arg("points") = 8, py::arg("seed") = 1);
  m.def("psi_linear_rank", [](int n, std::uint64_t seed) { return rank_dict(psi_linear_rank(n, 0, seed)); },
        py::arg("n"), py::arg("seed") = 1);

  m.def("certify_json", [](std::uint64_t seed, int points) {
        CertifyOptions opt;
        opt.seed = seed;
        opt.points = points;
        return run_certification(opt).to_json().dump();
      }, py::arg("seed") = 1, py::arg("points") = 20);
  m.def("preset_json", [](const std::string& name) { return preset_json(name).dump(); }, py::arg("name"));
}
