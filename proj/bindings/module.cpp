// Python bindings for the hodgekit core. The module mirrors the C++ API
// names one-to-one; the only additions are small convenience wrappers where
// a template or a JSON document does not map directly onto Python types.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <hodgekit/dgla.hpp>
#include <hodgekit/kahler.hpp>
#include <hodgekit/kuranishi.hpp>
#include <hodgekit/lattice.hpp>
#include <hodgekit/period_map.hpp>
#include <hodgekit/scenario.hpp>
#include <hodgekit/torus.hpp>

#include <fstream>
#include <sstream>

namespace py = pybind11;
using namespace hodgekit;

namespace {

ScenarioOverrides make_overrides(std::optional<std::uint64_t> seed, std::optional<double> tol,
                                 std::optional<int> degree) {
    ScenarioOverrides o;
    o.seed = seed;
    o.tol = tol;
    o.degree = degree;
    return o;
}

py::tuple run_doc(const nlohmann::ordered_json& doc, const ScenarioOverrides& o) {
    ScenarioOutcome out = run_scenario(doc, o);
    return py::make_tuple(out.pass, out.report.dump(2));
}

// Bind the solver stack for one backend type under a name prefix.
template <class Backend>
void bind_solver(py::module_& m, const char* prefix) {
    using Series = BeltramiSeries<Backend>;
    using Family = VolumeFamily<Backend>;
    using Form = typename Backend::Form;

    std::string series_name = std::string(prefix) + "BeltramiSeries";
    py::class_<Series>(m, series_name.c_str())
        .def_readonly("nparams", &Series::nparams)
        .def_readonly("M", &Series::M)
        .def_readonly("theta", &Series::theta)
        .def("eval", &Series::eval, py::arg("backend"), py::arg("t"))
        .def("linear_part", &Series::linear_part, py::arg("backend"), py::arg("t"))
        .def("coefficient",
             [](const Series& s, const std::vector<int>& exponents) -> py::object {
                 const Form* f = s.series.get(MultiIndex(exponents));
                 return f ? py::cast(*f) : py::none();
             },
             py::arg("exponents"))
        .def("indices", [](const Series& s) {
            std::vector<std::vector<int>> out;
            for (const auto& [I, v] : s.series.coeff) out.push_back(I.e);
            return out;
        });

    std::string family_name = std::string(prefix) + "VolumeFamily";
    py::class_<Family>(m, family_name.c_str())
        .def_readonly("base", &Family::base)
        .def("eval", &Family::eval, py::arg("backend"), py::arg("t"))
        .def("coefficient",
             [](const Family& f, const std::vector<int>& exponents) -> py::object {
                 const auto* w = f.series.get(MultiIndex(exponents));
                 return w ? py::cast(*w) : py::none();
             },
             py::arg("exponents"));

    m.def("solve_kuranishi", &solve_kuranishi<Backend>, py::arg("backend"), py::arg("theta"),
          py::arg("M"));
    m.def("mc_residual", &mc_residual<Backend>, py::arg("backend"), py::arg("phi"), py::arg("t"),
          py::arg("radius") = std::numeric_limits<double>::infinity());
    m.def("obstruction_terms",
          [](const Backend& b, const Series& phi) {
              auto series = obstruction_series(b, phi);
              std::vector<std::pair<std::vector<int>, double>> out;
              for (const auto& [I, v] : series.coeff) out.emplace_back(I.e, b.w0_norm(v));
              return out;
          },
          py::arg("backend"), py::arg("phi"),
          "Multi-indices and norms of the harmonic obstruction coefficients");
    m.def("volume_family", &volume_family<Backend>, py::arg("backend"), py::arg("phi"),
          py::arg("base"));
    m.def("wp_distance", &wp_distance<Backend>, py::arg("backend"), py::arg("family"),
          py::arg("t"));
    m.def("verify_estimates", &verify_estimates<Backend>, py::arg("backend"), py::arg("phi"),
          py::arg("family"), py::arg("samples"),
          py::arg("radius") = std::numeric_limits<double>::infinity());
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Spectral Dolbeault calculus, deformation solver, period maps, and "
              "lattice arithmetic";
    m.attr("__version__") = HODGEKIT_VERSION;

    py::register_exception<ScenarioInputError>(m, "ScenarioInputError", PyExc_ValueError);

    // --- random stream -------------------------------------------------------
    py::class_<Rng>(m, "Rng")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def("next_u64", &Rng::next_u64)
        .def("uniform", py::overload_cast<>(&Rng::uniform))
        .def("uniform", py::overload_cast<double, double>(&Rng::uniform), py::arg("a"),
             py::arg("b"))
        .def("normal", &Rng::normal)
        .def("normal_complex", &Rng::normal_complex);

    // --- norms and probes ----------------------------------------------------
    py::class_<NormReport>(m, "NormReport")
        .def_readonly("c0", &NormReport::c0)
        .def_readonly("sup_op", &NormReport::sup_op)
        .def_readonly("w0", &NormReport::w0)
        .def_readonly("c1", &NormReport::c1)
        .def_readonly("band_clipped", &NormReport::band_clipped);

    py::class_<ProbeReport>(m, "ProbeReport")
        .def_readonly("constant", &ProbeReport::constant)
        .def_readonly("samples", &ProbeReport::samples)
        .def_readonly("skipped", &ProbeReport::skipped);

    // --- torus forms and backend ---------------------------------------------
    py::class_<TorusForm>(m, "TorusForm")
        .def_readonly("d", &TorusForm::d)
        .def_readonly("K", &TorusForm::K)
        .def_readonly("vector_valued", &TorusForm::vector_valued)
        .def_readonly("p", &TorusForm::p)
        .def_readonly("q", &TorusForm::q)
        .def_readonly("band_clipped", &TorusForm::band_clipped)
        .def_readonly("comp", &TorusForm::comp)
        .def("side", &TorusForm::side)
        .def("modes", &TorusForm::modes)
        .def("same_shape", &TorusForm::same_shape)
        .def("max_abs_coeff", &TorusForm::max_abs_coeff)
        .def("is_zero", &TorusForm::is_zero, py::arg("tol") = 0.0)
        .def(py::self + py::self)
        .def(py::self - py::self)
        .def("__rmul__", [](const TorusForm& f, cplx s) { return s * f; });

    py::class_<TorusMixedForm>(m, "TorusMixedForm")
        .def_readonly("parts", &TorusMixedForm::parts)
        .def(py::self + py::self)
        .def(py::self - py::self)
        .def("__rmul__", [](const TorusMixedForm& w, cplx s) { return s * w; });

    py::class_<TorusBackend>(m, "TorusBackend")
        .def(py::init<int, int, cplx, double>(), py::arg("d"), py::arg("K"), py::arg("tau"),
             py::arg("volume"))
        .def_property_readonly("d", &TorusBackend::dim)
        .def_property_readonly("K", &TorusBackend::cutoff)
        .def_property_readonly("band_limit", &TorusBackend::band_limit)
        .def_property_readonly("tau", &TorusBackend::tau)
        .def_property_readonly("volume", &TorusBackend::volume)
        .def_property_readonly("metric_coeff", &TorusBackend::metric_coeff)
        .def("zero_vector_form", &TorusBackend::zero_vector_form, py::arg("q"),
             py::arg("Kf") = 0)
        .def("zero_scalar_form", &TorusBackend::zero_scalar_form, py::arg("p"), py::arg("q"),
             py::arg("Kf") = 0)
        .def("constant_vector01", &TorusBackend::constant_vector01, py::arg("m"))
        .def("volume_form", &TorusBackend::volume_form)
        .def("harmonic_vector01_basis", &TorusBackend::harmonic_vector01_basis)
        .def("random_vector01", &TorusBackend::random_vector01, py::arg("rng"), py::arg("Kf"),
             py::arg("target_sup"))
        .def("random_scalar", &TorusBackend::random_scalar, py::arg("rng"), py::arg("p"),
             py::arg("q"), py::arg("Kf"))
        .def("random_vector", &TorusBackend::random_vector, py::arg("rng"), py::arg("q"),
             py::arg("Kf"))
        .def("dbar", &TorusBackend::dbar)
        .def("dbar_star", &TorusBackend::dbar_star)
        .def("laplacian", &TorusBackend::laplacian)
        .def("green", &TorusBackend::green)
        .def("harmonic_project", &TorusBackend::harmonic_project)
        .def("del_", &TorusBackend::del)
        .def("t_operator", &TorusBackend::t_operator)
        .def("bracket", &TorusBackend::bracket)
        .def("contract", &TorusBackend::contract)
        .def("inner", &TorusBackend::inner)
        .def("w0_norm", &TorusBackend::w0_norm)
        .def("norms", &TorusBackend::norms)
        .def("harmonic_norm_ratio", &TorusBackend::harmonic_norm_ratio)
        .def("wedge_integral", &TorusBackend::wedge_integral)
        .def("operator_norm_probe", &TorusBackend::operator_norm_probe, py::arg("samples"),
             py::arg("rng"))
        .def("validate", &TorusBackend::validate, py::arg("rng"))
        .def("volume_base", &TorusBackend::volume_base)
        .def("contract_volume", &TorusBackend::contract_volume)
        .def("volume_norm", &TorusBackend::volume_norm)
        .def("volume_d_norm", &TorusBackend::volume_d_norm)
        .def("contract_depth_cap", &TorusBackend::contract_depth_cap)
        .def("del_symbol", &TorusBackend::del_symbol, py::arg("mu"), py::arg("j"))
        .def("dbar_symbol", &TorusBackend::dbar_symbol, py::arg("mu"), py::arg("j"))
        .def("laplace_eigenvalue", &TorusBackend::laplace_eigenvalue, py::arg("mu"))
        .def("component_on_grid", &TorusBackend::component_on_grid, py::arg("f"),
             py::arg("slot"), py::arg("n_per_dim"))
        .def("component_at", &TorusBackend::component_at, py::arg("f"), py::arg("slot"),
             py::arg("xy"))
        .def("scalar_slot", &TorusBackend::scalar_slot)
        .def("vector_slot", &TorusBackend::vector_slot);

    // --- finite-dimensional model --------------------------------------------
    py::class_<DglaElement>(m, "DglaElement")
        .def(py::init<>())
        .def_readwrite("degree", &DglaElement::degree)
        .def_readwrite("v", &DglaElement::v)
        .def("same_shape", &DglaElement::same_shape)
        .def(py::self + py::self)
        .def(py::self - py::self)
        .def("__rmul__", [](const DglaElement& e, cplx s) { return s * e; });

    py::class_<DglaVolume>(m, "DglaVolume")
        .def_readonly("c0", &DglaVolume::c0)
        .def_readonly("v1", &DglaVolume::v1)
        .def_readonly("v2", &DglaVolume::v2)
        .def(py::self + py::self)
        .def(py::self - py::self)
        .def("__rmul__", [](const DglaVolume& w, cplx s) { return s * w; });

    py::class_<DglaData>(m, "DglaData")
        .def(py::init<>())
        .def_readwrite("dims", &DglaData::dims)
        .def_readwrite("D", &DglaData::D)
        .def_readwrite("gram", &DglaData::gram)
        .def_readwrite("bracket", &DglaData::bracket)
        .def_static("obstructed_example", &DglaData::obstructed_example)
        .def_static("unobstructed_example", &DglaData::unobstructed_example)
        .def_static(
            "from_json",
            [](const std::string& text) {
                nlohmann::ordered_json doc;
                try {
                    doc = nlohmann::ordered_json::parse(text);
                } catch (const nlohmann::json::parse_error& e) {
                    throw ScenarioInputError(std::string("malformed JSON: ") + e.what());
                }
                return dgla_data_from_json(doc);
            },
            py::arg("text"),
            "Build DGLA defining data from a JSON document with fields dims, D, gram, bracket "
            "(dense matrices row-major as [re, im] pairs)");

    py::class_<DglaBackend>(m, "DglaBackend")
        .def(py::init<DglaData>(), py::arg("data"))
        .def("dim", &DglaBackend::dim, py::arg("degree"))
        .def("zero", &DglaBackend::zero, py::arg("degree"))
        .def("basis_element", &DglaBackend::basis_element, py::arg("degree"), py::arg("index"))
        .def("random_element", &DglaBackend::random_element, py::arg("rng"), py::arg("degree"))
        .def("harmonic_basis", &DglaBackend::harmonic_basis, py::arg("degree"))
        .def("dbar", &DglaBackend::dbar)
        .def("dbar_star", &DglaBackend::dbar_star)
        .def("laplacian", &DglaBackend::laplacian)
        .def("green", &DglaBackend::green)
        .def("harmonic_project", &DglaBackend::harmonic_project)
        .def("bracket", &DglaBackend::bracket)
        .def("inner", &DglaBackend::inner)
        .def("w0_norm", &DglaBackend::w0_norm)
        .def("norms", &DglaBackend::norms)
        .def("harmonic_norm_ratio", &DglaBackend::harmonic_norm_ratio)
        .def("operator_norm_probe", &DglaBackend::operator_norm_probe, py::arg("samples"),
             py::arg("rng"))
        .def("validate", &DglaBackend::validate, py::arg("rng"))
        .def("volume_base", &DglaBackend::volume_base)
        .def("contract_volume", &DglaBackend::contract_volume)
        .def("volume_norm", &DglaBackend::volume_norm)
        .def("volume_d_norm", &DglaBackend::volume_d_norm)
        .def("contract_depth_cap", &DglaBackend::contract_depth_cap);

    // --- deformation solver ----------------------------------------------------
    py::class_<McResidual>(m, "McResidual")
        .def_readonly("value", &McResidual::value)
        .def_readonly("outside_radius", &McResidual::outside_radius);

    py::class_<MajorantSeries>(m, "MajorantSeries")
        .def_readonly("C", &MajorantSeries::C)
        .def_readonly("x1", &MajorantSeries::x1)
        .def_readonly("x", &MajorantSeries::x)
        .def_readonly("tau_threshold", &MajorantSeries::tau_threshold)
        .def_readonly("eps1_empirical", &MajorantSeries::eps1_empirical)
        .def("radius_accepts", &MajorantSeries::radius_accepts, py::arg("tau"));
    m.def("majorant", &majorant, py::arg("C"), py::arg("x1"), py::arg("M"));

    py::class_<EstimateSample>(m, "EstimateSample")
        .def_readonly("t", &EstimateSample::t)
        .def_readonly("skipped", &EstimateSample::skipped)
        .def_readonly("phi1_c1", &EstimateSample::phi1_c1)
        .def_readonly("phi_c1", &EstimateSample::phi_c1)
        .def_readonly("phi1_w0", &EstimateSample::phi1_w0)
        .def_readonly("contraction_l2", &EstimateSample::contraction_l2)
        .def_readonly("wp", &EstimateSample::wp)
        .def_readonly("phi_c0", &EstimateSample::phi_c0)
        .def_readonly("margin_sandwich", &EstimateSample::margin_sandwich)
        .def_readonly("margin_contraction", &EstimateSample::margin_contraction)
        .def_readonly("margin_wp", &EstimateSample::margin_wp)
        .def_readonly("pass_sandwich", &EstimateSample::pass_sandwich)
        .def_readonly("pass_contraction", &EstimateSample::pass_contraction)
        .def_readonly("pass_wp", &EstimateSample::pass_wp);

    py::class_<EstimateReport>(m, "EstimateReport")
        .def_readonly("samples", &EstimateReport::samples)
        .def_readonly("harmonic_ratio", &EstimateReport::harmonic_ratio)
        .def_readonly("skipped", &EstimateReport::skipped)
        .def_readonly("all_pass", &EstimateReport::all_pass)
        .def_readonly("eps_empirical", &EstimateReport::eps_empirical);

    m.def("multi_indices_of_degree",
          [](int N, int degree) {
              std::vector<std::vector<int>> out;
              for (const auto& I : multi_indices_of_degree(N, degree)) out.push_back(I.e);
              return out;
          },
          py::arg("N"), py::arg("degree"));

    bind_solver<TorusBackend>(m, "Torus");
    bind_solver<DglaBackend>(m, "Dgla");

    // --- period blocks ----------------------------------------------------------
    py::class_<BlockUpperUnipotent>(m, "BlockUpperUnipotent")
        .def(py::init<>())
        .def(py::init<int, int, int>(), py::arg("h20"), py::arg("h11"), py::arg("h02"))
        .def_readonly("h20", &BlockUpperUnipotent::h20)
        .def_readonly("h11", &BlockUpperUnipotent::h11)
        .def_readonly("h02", &BlockUpperUnipotent::h02)
        .def_readwrite("B01", &BlockUpperUnipotent::B01)
        .def_readwrite("B02", &BlockUpperUnipotent::B02)
        .def_readwrite("B12", &BlockUpperUnipotent::B12)
        .def("check_shapes", &BlockUpperUnipotent::check_shapes)
        .def("dim", &BlockUpperUnipotent::dim)
        .def("dense", &BlockUpperUnipotent::dense);
    m.def("block_product", &block_product, py::arg("p"), py::arg("q"));
    m.def("purity_determinant", &purity_determinant, py::arg("blocks"));

    py::class_<HodgeFrame>(m, "HodgeFrame")
        .def_readonly("h20", &HodgeFrame::h20)
        .def_readonly("h11", &HodgeFrame::h11)
        .def_readonly("h02", &HodgeFrame::h02)
        .def_readonly("eta20", &HodgeFrame::eta20)
        .def_readonly("eta11", &HodgeFrame::eta11)
        .def_readonly("eta02", &HodgeFrame::eta02)
        .def_readonly("Q", &HodgeFrame::Q)
        .def("dim", &HodgeFrame::dim);
    m.def("make_torus_frame", &make_torus_frame, py::arg("backend"));
    m.def("validate_frame", &validate_frame, py::arg("backend"), py::arg("frame"));
    m.def("quasi_period", &quasi_period, py::arg("backend"), py::arg("frame"), py::arg("phi"));
    m.def("transversality_check", &transversality_check, py::arg("curve"), py::arg("t"),
          py::arg("h"));

    py::class_<StabilityRadiusReport>(m, "StabilityRadiusReport")
        .def_readonly("radius", &StabilityRadiusReport::radius)
        .def_readonly("saturated", &StabilityRadiusReport::saturated)
        .def_readonly("cap", &StabilityRadiusReport::cap)
        .def_readonly("trials", &StabilityRadiusReport::trials)
        .def_readonly("worst_det", &StabilityRadiusReport::worst_det);
    m.def("block_sampler_torus", &block_sampler_torus, py::arg("backend"), py::arg("frame"));
    m.def("block_sampler_envelope", &block_sampler_envelope, py::arg("h20"), py::arg("h11"),
          py::arg("h02"));
    m.def("stability_radius", &stability_radius, py::arg("sampler"), py::arg("trials"),
          py::arg("rng"), py::arg("pd_margin"), py::arg("cap") = 0.99);

    // --- class transport ---------------------------------------------------------
    py::class_<KahlerSeed>(m, "KahlerSeed")
        .def_readonly("alpha10", &KahlerSeed::alpha10)
        .def_readonly("reality_checked", &KahlerSeed::reality_checked)
        .def_static("from_matrix", &KahlerSeed::from_matrix, py::arg("m"),
                    py::arg("tol") = 1e-12)
        .def_static("from_row", &KahlerSeed::from_row, py::arg("row"));
    m.def("transport_A", &transport_A, py::arg("blocks"));

    py::class_<TransportState>(m, "TransportState")
        .def_readonly("alpha0", &TransportState::alpha0)
        .def_readonly("blocks", &TransportState::blocks)
        .def_readonly("A", &TransportState::A)
        .def_readonly("J", &TransportState::J)
        .def("validate", &TransportState::validate, py::arg("tol") = 1e-13);
    m.def("residual_F", &residual_F, py::arg("alpha0"), py::arg("blocks"), py::arg("seed"));
    m.def("solve_alpha0", &solve_alpha0, py::arg("blocks"), py::arg("seed"));

    py::class_<PathSample>(m, "PathSample")
        .def_readonly("t", &PathSample::t)
        .def_readonly("alpha0", &PathSample::alpha0)
        .def_readonly("a_norm", &PathSample::a_norm)
        .def_readonly("refined", &PathSample::refined);

    py::class_<PathReport>(m, "PathReport")
        .def_readonly("samples", &PathReport::samples)
        .def_readonly("truncated", &PathReport::truncated)
        .def_readonly("truncation_index", &PathReport::truncation_index)
        .def_readonly("sup_alpha0", &PathReport::sup_alpha0)
        .def_readonly("sup_a_norm", &PathReport::sup_a_norm)
        .def_readonly("certificate_bound", &PathReport::certificate_bound)
        .def_readonly("certificate_ok", &PathReport::certificate_ok);
    m.def("continue_path", &continue_path, py::arg("curve"), py::arg("seed"), py::arg("steps"));

    py::class_<TransportedClass>(m, "TransportedClass")
        .def_readonly("c20", &TransportedClass::c20)
        .def_readonly("c11", &TransportedClass::c11)
        .def_readonly("c02", &TransportedClass::c02)
        .def_readonly("reality_exact", &TransportedClass::reality_exact);
    m.def("transported_class", &transported_class, py::arg("alpha0"), py::arg("seed"));

    m.def("metric_update", &metric_update, py::arg("g"), py::arg("phi"));

    py::class_<MetricField>(m, "MetricField")
        .def(py::init<>())
        .def_readwrite("g", &MetricField::g)
        .def_readwrite("phi", &MetricField::phi);

    py::class_<PositivityReport>(m, "PositivityReport")
        .def_readonly("positive", &PositivityReport::positive)
        .def_readonly("worst_margin", &PositivityReport::worst_margin)
        .def_readonly("worst_index", &PositivityReport::worst_index);
    m.def("positivity_check", &positivity_check, py::arg("field"));

    py::class_<StabilityRegionReport>(m, "StabilityRegionReport")
        .def_readonly("c2", &StabilityRegionReport::c2)
        .def_readonly("c2_saturated", &StabilityRegionReport::c2_saturated)
        .def_readonly("c1", &StabilityRegionReport::c1)
        .def_readonly("c0", &StabilityRegionReport::c0)
        .def_readonly("solves_at_c0", &StabilityRegionReport::solves_at_c0)
        .def_readonly("trials", &StabilityRegionReport::trials);
    m.def("stability_region_probe", &stability_region_probe, py::arg("sampler"), py::arg("seed"),
          py::arg("trials"), py::arg("rng"), py::arg("pd_margin"), py::arg("cap") = 0.99);

    // --- lattice arithmetic --------------------------------------------------------
    py::class_<IntegralLattice>(m, "IntegralLattice")
        .def(py::init<>())
        .def_readwrite("gram", &IntegralLattice::gram)
        .def("rank", &IntegralLattice::rank)
        .def("pair", &IntegralLattice::pair, py::arg("a"), py::arg("b"))
        .def("validate", &IntegralLattice::validate)
        .def("signature", &IntegralLattice::signature)
        .def_static("from_name", &IntegralLattice::from_name, py::arg("preset"))
        .def_static("hyperbolic_U", &IntegralLattice::hyperbolic_U)
        .def_static("e8", &IntegralLattice::e8, py::arg("sign"))
        .def_static("k3_full", &IntegralLattice::k3_full)
        .def_static("toy_rank3", &IntegralLattice::toy_rank3)
        .def_static("direct_sum", &IntegralLattice::direct_sum, py::arg("parts"));

    py::class_<MukaiVector>(m, "MukaiVector")
        .def(py::init<>())
        .def_readwrite("r", &MukaiVector::r)
        .def_readwrite("xi", &MukaiVector::xi)
        .def_readwrite("a", &MukaiVector::a);
    m.def("mukai_vector", &mukai_vector, py::arg("r"), py::arg("c1"), py::arg("ch2"));
    m.def("mukai_pairing", &mukai_pairing, py::arg("v"), py::arg("w"), py::arg("ns"));
    m.def("mukai_lattice", &mukai_lattice, py::arg("ns"));
    m.def("mukai_coords", &mukai_coords, py::arg("v"));

    py::class_<ModuliDimension>(m, "ModuliDimension")
        .def_readonly("value", &ModuliDimension::value)
        .def_readonly("warned_negative_square", &ModuliDimension::warned_negative_square);
    m.def("moduli_dimension", &moduli_dimension, py::arg("v"), py::arg("ns"));

    py::class_<Rational>(m, "Rational")
        .def_readonly("num", &Rational::num)
        .def_readonly("den", &Rational::den)
        .def_static("make", &Rational::make, py::arg("num"), py::arg("den"))
        .def(py::self < py::self)
        .def(py::self == py::self);
    m.def("slope", &slope, py::arg("r"), py::arg("c1"), py::arg("omega"), py::arg("ns"));

    py::class_<StabilityComparison>(m, "StabilityComparison")
        .def_readonly("strictly_smaller", &StabilityComparison::strictly_smaller)
        .def_readonly("equal", &StabilityComparison::equal);
    m.def("stability_compare", &stability_compare, py::arg("r_sub"), py::arg("c1_sub"),
          py::arg("r_whole"), py::arg("c1_whole"), py::arg("omega"), py::arg("ns"));

    py::class_<OrthComplement>(m, "OrthComplement")
        .def_readonly("basis", &OrthComplement::basis)
        .def_readonly("restricted_gram", &OrthComplement::restricted_gram);
    m.def("orth_complement", &orth_complement, py::arg("v"), py::arg("lattice"));

    m.def("q_bilinear", &q_bilinear, py::arg("z"), py::arg("w"), py::arg("lat"));
    m.def("in_period_domain", &in_period_domain, py::arg("z"), py::arg("lat"),
          py::arg("eq_tol"));

    py::class_<GenericityVerdict>(m, "GenericityVerdict")
        .def_readonly("generic", &GenericityVerdict::generic)
        .def_readonly("search_bound", &GenericityVerdict::search_bound)
        .def_readonly("witness", &GenericityVerdict::witness);
    m.def("is_generic_period", &is_generic_period, py::arg("z"), py::arg("lat"),
          py::arg("search_bound"), py::arg("eq_tol"));
    m.def("projectivity_witness", &projectivity_witness, py::arg("z"), py::arg("lat"),
          py::arg("search_bound"), py::arg("eq_tol"));

    py::class_<SequenceDomainReport>(m, "SequenceDomainReport")
        .def_readonly("min_qzzbar", &SequenceDomainReport::min_qzzbar)
        .def_readonly("max_qzz", &SequenceDomainReport::max_qzz)
        .def_readonly("bounded_in_domain", &SequenceDomainReport::bounded_in_domain)
        .def_readonly("first_violation", &SequenceDomainReport::first_violation);
    m.def("sequence_domain_check", &sequence_domain_check, py::arg("points"), py::arg("lat"),
          py::arg("eq_tol"), py::arg("margin"));

    // --- scenarios -------------------------------------------------------------------
    m.def("default_scenario_dir", &default_scenario_dir);
    m.def("list_scenarios", &list_scenarios, py::arg("dir"));
    m.def("scenario_path", &scenario_path, py::arg("dir"), py::arg("name"));
    m.def("describe_scenario", &describe_scenario, py::arg("dir"), py::arg("name"));
    m.def("run_scenario_file",
          [](const std::string& path, std::optional<std::uint64_t> seed,
             std::optional<double> tol, std::optional<int> degree) {
              std::ifstream in(path);
              if (!in) throw ScenarioInputError("cannot open scenario file: " + path);
              nlohmann::ordered_json doc;
              try {
                  doc = nlohmann::ordered_json::parse(in);
              } catch (const nlohmann::json::parse_error& e) {
                  throw ScenarioInputError(std::string("malformed JSON: ") + e.what());
              }
              return run_doc(doc, make_overrides(seed, tol, degree));
          },
          py::arg("path"), py::arg("seed") = std::nullopt, py::arg("tol") = std::nullopt,
          py::arg("degree") = std::nullopt,
          "Run a scenario document from a file; returns (pass, report_json)");
    m.def("run_scenario_text",
          [](const std::string& text, std::optional<std::uint64_t> seed,
             std::optional<double> tol, std::optional<int> degree) {
              nlohmann::ordered_json doc;
              try {
                  doc = nlohmann::ordered_json::parse(text);
              } catch (const nlohmann::json::parse_error& e) {
                  throw ScenarioInputError(std::string("malformed JSON: ") + e.what());
              }
              return run_doc(doc, make_overrides(seed, tol, degree));
          },
          py::arg("text"), py::arg("seed") = std::nullopt, py::arg("tol") = std::nullopt,
          py::arg("degree") = std::nullopt,
          "Run a scenario document from a JSON string; returns (pass, report_json)");
    m.def("path_samples_csv",
          [](const std::string& report_json) {
              return path_samples_csv(nlohmann::ordered_json::parse(report_json));
          },
          py::arg("report_json"));
}
