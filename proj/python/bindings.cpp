#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "grasshopper/analysis.hpp"
#include "grasshopper/annealer.hpp"
#include "grasshopper/errors.hpp"
#include "grasshopper/interaction.hpp"
#include "grasshopper/io.hpp"
#include "grasshopper/lawn.hpp"
#include "grasshopper/sphere_grid.hpp"

namespace py = pybind11;
using namespace grasshopper;

namespace {

GridPtr share(SphericalGrid grid) { return std::make_shared<const SphericalGrid>(std::move(grid)); }

std::vector<std::uint8_t> bits_of(const Lawn& lawn) {
  const auto s = lawn.site_bits();
  return {s.begin(), s.end()};
}

LawnState to_state(const py::handle& obj) {
  if (py::isinstance<Lawn>(obj)) return obj.cast<Lawn>();
  return obj.cast<TwoLawnConfig>();
}

py::object from_state(const LawnState& state) {
  if (const auto* l = std::get_if<Lawn>(&state)) return py::cast(*l);
  return py::cast(std::get<TwoLawnConfig>(state));
}

}  // namespace

PYBIND11_MODULE(_grasshopper, m) {
  m.doc() = "Simulated annealing of lawn colorings for the grasshopper problem";

  auto input_error = py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<GridMismatch>(m, "GridMismatch", input_error.ptr());
  py::register_exception<AngleUnresolved>(m, "AngleUnresolved", input_error.ptr());
  py::register_exception<GridNotAntipodal>(m, "GridNotAntipodal", input_error.ptr());
  py::register_exception<ParseError>(m, "ParseError", input_error.ptr());

  py::class_<SphericalGrid, std::shared_ptr<SphericalGrid>>(m, "SphericalGrid")
      .def_property_readonly("size", &SphericalGrid::size)
      .def_property_readonly("spacing", &SphericalGrid::spacing)
      .def_property_readonly("source_tag", &SphericalGrid::source_tag)
      .def_property_readonly("content_hash", &SphericalGrid::content_hash)
      .def("point",
           [](const SphericalGrid& g, std::size_t i) {
             const Vec3& p = g.point(i);
             return py::make_tuple(p.x, p.y, p.z);
           })
      .def("antipode", &SphericalGrid::antipode)
      .def("__len__", &SphericalGrid::size);

  m.def("generate_fibonacci_antipodal", [](std::size_t n_pairs) { return std::const_pointer_cast<SphericalGrid>(share(generate_fibonacci_antipodal(n_pairs))); },
        py::arg("n_pairs"));
  m.def("load_grid", [](const std::filesystem::path& p) { return std::const_pointer_cast<SphericalGrid>(share(load_grid(p))); },
        py::arg("path"));
  m.def("save_grid", &save_grid, py::arg("grid"), py::arg("path"));

  py::enum_<KernelShape>(m, "KernelShape").value("COSINE", KernelShape::Cosine).value("HAT", KernelShape::Hat);
  py::class_<DeltaKernel>(m, "DeltaKernel")
      .def(py::init([](KernelShape shape, double w) { return DeltaKernel{shape, w}; }),
           py::arg("shape") = KernelShape::Cosine, py::arg("half_width") = 2.0)
      .def_readwrite("shape", &DeltaKernel::shape)
      .def_readwrite("half_width", &DeltaKernel::half_width)
      .def("__call__", &DeltaKernel::operator());

  py::class_<InteractionTable>(m, "InteractionTable")
      .def_property_readonly("theta", &InteractionTable::theta)
      .def_property_readonly("prefactor", &InteractionTable::prefactor)
      .def_property_readonly("entry_count", &InteractionTable::entry_count);
  m.def(
      "build_interaction",
      [](const std::shared_ptr<SphericalGrid>& grid, double theta, const DeltaKernel& kernel, unsigned threads) {
        py::gil_scoped_release release;
        return build_interaction(grid, theta, kernel, NeighborSearch::LatitudeBands, threads);
      },
      py::arg("grid"), py::arg("theta"), py::arg("kernel") = DeltaKernel{}, py::arg("threads") = 1);

  py::enum_<Setup>(m, "Setup").value("ONE", Setup::One).value("TWO", Setup::Two);

  py::class_<Lawn>(m, "Lawn")
      .def_property_readonly("bits", &bits_of)
      .def("count", &Lawn::count)
      .def("toggle_pair", &Lawn::toggle_pair)
      .def("__len__", &Lawn::size)
      .def("__eq__", [](const Lawn& a, const Lawn& b) { return a == b; });
  py::class_<TwoLawnConfig>(m, "TwoLawnConfig")
      .def(py::init<Lawn, Lawn>())
      .def_readonly("first", &TwoLawnConfig::first)
      .def_readonly("second", &TwoLawnConfig::second);

  m.def("hemisphere_lawn",
        [](const std::shared_ptr<SphericalGrid>& g, double x, double y, double z) { return hemisphere_lawn(g, Vec3{x, y, z}); },
        py::arg("grid"), py::arg("x") = 0.0, py::arg("y") = 0.0, py::arg("z") = 1.0);
  m.def("cogwheel_lawn", [](const std::shared_ptr<SphericalGrid>& g, int n, double frac, double phase) { return cogwheel_lawn(g, n, frac, phase); },
        py::arg("grid"), py::arg("n_cogs"), py::arg("cog_fraction") = 0.5, py::arg("phase") = 0.0);
  m.def("random_lawn", [](const std::shared_ptr<SphericalGrid>& g, std::uint64_t seed) { return random_lawn(g, seed); },
        py::arg("grid"), py::arg("seed"));
  m.def("complement", &complement);

  m.def("success_probability",
        [](const py::object& s, const InteractionTable& t) { return success_probability(to_state(s), t); },
        py::arg("state"), py::arg("table"));
  m.def(
      "delta_pair_toggle",
      [](const py::object& s, const InteractionTable& t, int which, std::size_t site) {
        return delta_pair_toggle(to_state(s), t, which, site);
      },
      py::arg("state"), py::arg("table"), py::arg("which_lawn"), py::arg("site"));

  py::class_<AnnealSchedule>(m, "AnnealSchedule")
      .def(py::init([](double ti, double tf, double r, int sweeps) { return AnnealSchedule{ti, tf, r, sweeps}; }),
           py::arg("t_initial"), py::arg("t_final"), py::arg("cooling_ratio") = 0.95,
           py::arg("sweeps_per_temperature") = 20)
      .def_readonly("t_initial", &AnnealSchedule::t_initial)
      .def_readonly("t_final", &AnnealSchedule::t_final)
      .def_readonly("cooling_ratio", &AnnealSchedule::cooling_ratio)
      .def_readonly("sweeps_per_temperature", &AnnealSchedule::sweeps_per_temperature);
  py::class_<AutoSchedule>(m, "AutoSchedule")
      .def(py::init([](double scale, int probes, double final_ratio, double r, int sweeps) {
             return AutoSchedule{scale, probes, final_ratio, r, sweeps};
           }),
           py::arg("probe_scale") = 2.0, py::arg("probes") = 1000, py::arg("final_ratio") = 1e-4,
           py::arg("cooling_ratio") = 0.95, py::arg("sweeps_per_temperature") = 20);

  py::class_<TracePoint>(m, "TracePoint")
      .def_readonly("temperature", &TracePoint::temperature)
      .def_readonly("mean_probability", &TracePoint::mean_probability)
      .def_readonly("acceptance_rate", &TracePoint::acceptance_rate)
      .def_readonly("best_probability", &TracePoint::best_probability);
  py::class_<AnnealResult>(m, "AnnealResult")
      .def_property_readonly("best_state", [](const AnnealResult& r) { return from_state(r.best_state); })
      .def_readonly("best_probability", &AnnealResult::best_probability)
      .def_readonly("trace", &AnnealResult::trace)
      .def_readonly("seed", &AnnealResult::seed)
      .def_readonly("replica_id", &AnnealResult::replica_id);

  m.def(
      "anneal",
      [](const py::object& obj, const InteractionTable& table, std::uint64_t seed, const ScheduleChoice& schedule) {
        const LawnState init = to_state(obj);
        py::gil_scoped_release release;
        return anneal(init, table, resolve_schedule(schedule, init, table, seed), seed);
      },
      py::arg("initial"), py::arg("table"), py::arg("seed"), py::arg("schedule") = ScheduleChoice{AutoSchedule{}});
  m.def(
      "replica_search",
      [](const py::list& objs, const InteractionTable& table, std::uint64_t seed, const ScheduleChoice& schedule, int n,
         unsigned threads) {
        std::vector<LawnState> inits;
        for (const auto& o : objs) inits.push_back(to_state(o));
        py::gil_scoped_release release;
        return replica_search(inits, table, schedule, seed, n, threads);
      },
      py::arg("initializers"), py::arg("table"), py::arg("base_seed"),
      py::arg("schedule") = ScheduleChoice{AutoSchedule{}}, py::arg("n_replicas") = 3, py::arg("threads") = 1);

  m.def("quantum_probability", &quantum_probability);
  m.def("hemisphere_probability", &hemisphere_probability);
  m.def("gap_maximizer_landmark", &gap_maximizer_landmark);
  m.def("predicted_cogs", &predicted_cogs, py::arg("theta"), py::arg("setup"), py::arg("mode") = 1);
  py::class_<CogCount>(m, "CogCount")
      .def_readonly("n_cogs", &CogCount::n_cogs)
      .def_readonly("confidence", &CogCount::confidence);
  m.def("count_cogs", &count_cogs);
  m.def(
      "reflection_difference",
      [](const TwoLawnConfig& c, double theta, const DeltaKernel& k) {
        return verify_reflection_symmetry(c, theta, k).difference;
      },
      py::arg("config"), py::arg("theta"), py::arg("kernel") = DeltaKernel{});
  m.def(
      "make_initializer",
      [](const std::shared_ptr<SphericalGrid>& g, double theta, Setup setup, const std::string& name, std::uint64_t seed) {
        return from_state(make_initializer(g, theta, setup, name, seed));
      },
      py::arg("grid"), py::arg("theta"), py::arg("setup"), py::arg("name"), py::arg("seed"));

  m.def(
      "write_lawn_file",
      [](const std::filesystem::path& path, const py::object& s, double theta, const DeltaKernel& k, double p,
         std::optional<std::uint64_t> seed) { write_lawn_file(path, make_lawn_record(to_state(s), theta, k, p, seed)); },
      py::arg("path"), py::arg("state"), py::arg("theta"), py::arg("kernel"), py::arg("probability"),
      py::arg("seed") = std::nullopt);
  m.def(
      "read_lawn_file",
      [](const std::filesystem::path& path, const std::shared_ptr<SphericalGrid>& g) {
        const LawnRecord r = read_lawn_file(path);
        return py::make_tuple(from_state(state_from_record(r, g)), r.theta, r.probability);
      },
      py::arg("path"), py::arg("grid"));
  m.def("encode_rle", [](const std::vector<std::uint8_t>& bits) { return encode_rle(bits); });
  m.def("decode_rle", &decode_rle, py::arg("text"), py::arg("expected_size"));
  m.def(
      "read_sweep_csv",
      [](const std::string& text) {
        py::list rows;
        for (const auto& r : parse_curve_csv(text).rows) {
          py::dict d;
          d["theta"] = r.theta;
          d["p_one"] = r.p_one;
          d["p_two"] = r.p_two;
          d["q"] = r.q;
          d["hemisphere"] = r.hemisphere;
          d["gap_one"] = r.gap_one;
          d["gap_two"] = r.gap_two;
          d["n_cogs_one"] = r.n_cogs_one;
          d["n_cogs_two"] = r.n_cogs_two;
          d["seed"] = r.seed;
          rows.append(d);
        }
        return rows;
      },
      py::arg("text"));
}
