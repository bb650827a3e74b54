#include "grasshopper/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "grasshopper/errors.hpp"
#include "grasshopper/io.hpp"
#include "grasshopper/parallel.hpp"

namespace grasshopper::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string_view to_string(SetupChoice s) {
  switch (s) {
    case SetupChoice::One: return "one";
    case SetupChoice::Two: return "two";
    case SetupChoice::Both: return "both";
  }
  return "one";
}

SetupChoice setup_choice_from_string(std::string_view s) {
  if (s == "one") return SetupChoice::One;
  if (s == "two") return SetupChoice::Two;
  if (s == "both") return SetupChoice::Both;
  throw InputError("unknown setup '" + std::string(s) + "' (expected one, two or both)");
}

double parse_number(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw InputError("cannot parse " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

// Radians, or multiples of pi written as "0.3pi", "pi/5", "pi".
double parse_angle(std::string_view s) {
  const auto at = s.find("pi");
  if (at == std::string_view::npos) return parse_number(s, "angle");
  const double factor = at == 0 ? 1.0 : parse_number(s.substr(0, at), "angle");
  auto rest = s.substr(at + 2);
  double divisor = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/') throw InputError("cannot parse angle '" + std::string(s) + "'");
    divisor = parse_number(rest.substr(1), "angle");
  }
  return factor * std::numbers::pi / divisor;
}

template <typename T>
T field(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("config field '") + key + "': " + e.what());
  }
}

ScheduleChoice schedule_from_json(const json& j) {
  const std::string mode = j.contains("mode") ? field<std::string>(j, "mode") : (j.contains("t_initial") ? "fixed" : "auto");
  if (mode == "fixed") {
    AnnealSchedule s;
    if (j.contains("t_initial")) s.t_initial = field<double>(j, "t_initial");
    if (j.contains("t_final")) s.t_final = field<double>(j, "t_final");
    if (j.contains("cooling_ratio")) s.cooling_ratio = field<double>(j, "cooling_ratio");
    if (j.contains("sweeps_per_temperature")) s.sweeps_per_temperature = field<int>(j, "sweeps_per_temperature");
    return s;
  }
  if (mode != "auto") throw InputError("schedule mode must be 'auto' or 'fixed'");
  AutoSchedule a;
  if (j.contains("probe_scale")) a.probe_scale = field<double>(j, "probe_scale");
  if (j.contains("probes")) a.probes = field<int>(j, "probes");
  if (j.contains("final_ratio")) a.final_ratio = field<double>(j, "final_ratio");
  if (j.contains("cooling_ratio")) a.cooling_ratio = field<double>(j, "cooling_ratio");
  if (j.contains("sweeps_per_temperature")) a.sweeps_per_temperature = field<int>(j, "sweeps_per_temperature");
  return a;
}

ordered_json schedule_to_json(const ScheduleChoice& choice) {
  if (const auto* s = std::get_if<AnnealSchedule>(&choice)) {
    return {{"mode", "fixed"},
            {"t_initial", s->t_initial},
            {"t_final", s->t_final},
            {"cooling_ratio", s->cooling_ratio},
            {"sweeps_per_temperature", s->sweeps_per_temperature}};
  }
  const auto& a = std::get<AutoSchedule>(choice);
  return {{"mode", "auto"},
          {"probe_scale", a.probe_scale},
          {"probes", a.probes},
          {"final_ratio", a.final_ratio},
          {"cooling_ratio", a.cooling_ratio},
          {"sweeps_per_temperature", a.sweeps_per_temperature}};
}

// Flag values that override the config file when present.
struct Overrides {
  std::optional<std::string> config_path;
  std::optional<std::string> grid_path;
  std::optional<std::size_t> pairs;
  std::optional<std::string> setup;
  std::vector<std::string> thetas;
  std::optional<std::string> kernel_shape;
  std::optional<double> half_width;
  std::optional<double> t_initial, t_final, cooling_ratio;
  std::optional<int> sweeps;
  std::optional<int> replicas;
  std::vector<std::string> initializers;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;
  std::optional<unsigned> threads;
  std::optional<std::string> table_cache;
  std::optional<int> checkpoint_every;
};

void add_run_options(CLI::App& app, Overrides& o) {
  app.add_option("--config", o.config_path, "JSON config file; flags override its values");
  app.add_option("--grid", o.grid_path, "grid file");
  app.add_option("--pairs", o.pairs, "use a Fibonacci antipodal grid with this many pairs");
  app.add_option("--setup", o.setup, "one, two or both");
  app.add_option("--theta", o.thetas, "jump angle(s) in radians, or like 0.3pi, pi/5");
  app.add_option("--kernel-shape", o.kernel_shape, "cosine or hat");
  app.add_option("--half-width", o.half_width, "kernel half-width in units of the grid spacing");
  app.add_option("--t-initial", o.t_initial, "fixed schedule: initial temperature");
  app.add_option("--t-final", o.t_final, "fixed schedule: final temperature");
  app.add_option("--cooling-ratio", o.cooling_ratio, "geometric cooling ratio");
  app.add_option("--sweeps", o.sweeps, "sweeps per temperature");
  app.add_option("--replicas", o.replicas, "independent annealing replicas");
  app.add_option("--initializers", o.initializers, "random, hemisphere, cogwheel");
  app.add_option("--seed", o.seed, "base seed");
  app.add_option("--out", o.output_dir, "output directory");
  app.add_option("--threads", o.threads, "worker threads (0: available parallelism)");
  app.add_option("--table-cache", o.table_cache, "directory for cached interaction tables");
}

RunConfig resolve_config(const Overrides& o) {
  RunConfig c;
  if (o.config_path) {
    json j;
    try {
      j = json::parse(read_text_file(*o.config_path));
    } catch (const json::exception& e) {
      throw ParseError(*o.config_path + ": " + e.what());
    }
    apply_config_json(j, c);
  }
  if (o.grid_path || o.pairs) c.grid = {};
  if (o.grid_path) c.grid.path = *o.grid_path;
  if (o.pairs) c.grid.fibonacci_pairs = *o.pairs;
  if (o.setup) c.setup = setup_choice_from_string(*o.setup);
  if (!o.thetas.empty()) {
    c.thetas.clear();
    for (const auto& t : o.thetas) c.thetas.push_back(parse_angle(t));
  }
  if (o.kernel_shape) c.kernel.shape = kernel_shape_from_string(*o.kernel_shape);
  if (o.half_width) c.kernel.half_width = *o.half_width;
  if (o.t_initial || o.t_final) {
    AnnealSchedule s;
    if (const auto* prev = std::get_if<AnnealSchedule>(&c.schedule)) s = *prev;
    if (const auto* a = std::get_if<AutoSchedule>(&c.schedule)) {
      s.cooling_ratio = a->cooling_ratio;
      s.sweeps_per_temperature = a->sweeps_per_temperature;
    }
    if (o.t_initial) s.t_initial = *o.t_initial;
    if (o.t_final) s.t_final = *o.t_final;
    c.schedule = s;
  }
  std::visit(
      [&](auto& s) {
        if (o.cooling_ratio) s.cooling_ratio = *o.cooling_ratio;
        if (o.sweeps) s.sweeps_per_temperature = *o.sweeps;
      },
      c.schedule);
  if (o.replicas) c.n_replicas = *o.replicas;
  if (!o.initializers.empty()) c.initializers = o.initializers;
  if (o.seed) c.seed = *o.seed;
  if (o.output_dir) c.output_dir = *o.output_dir;
  if (o.threads) c.threads = *o.threads;
  if (o.table_cache) c.table_cache = *o.table_cache;
  if (o.checkpoint_every) c.checkpoint_every = *o.checkpoint_every;
  validate(c);
  return c;
}

InteractionTable table_for(const GridPtr& grid, double theta, const RunConfig& c) {
  if (c.table_cache.empty()) return build_interaction(grid, theta, c.kernel, NeighborSearch::LatitudeBands, c.threads);
  return cached_interaction(grid, theta, c.kernel, c.table_cache, c.threads);
}

std::string fmt(double v) { return format_real(v, 12); }

void echo_config(const RunConfig& c) {
  write_text_file(c.output_dir / "effective_config.json", config_to_json(c).dump(2) + "\n");
}

fs::path replica_checkpoint_path(const fs::path& dir, int replica) {
  return dir / "checkpoints" / ("replica_" + std::to_string(replica) + ".json");
}

int cmd_gridgen(std::size_t pairs, const std::string& out_path, std::ostream& out) {
  const SphericalGrid grid = generate_fibonacci_antipodal(pairs);
  save_grid(grid, out_path);
  out << "N = " << grid.size() << "\n";
  out << "h = " << fmt(grid.spacing()) << "\n";
  return kExitOk;
}

int cmd_optimize(const RunConfig& c, bool resume, std::ostream& out) {
  if (c.setup == SetupChoice::Both) throw InputError("optimize needs setup one or two");
  if (c.thetas.size() != 1) throw InputError("optimize needs exactly one theta");
  const double theta = c.thetas.front();
  const Setup setup = c.setup == SetupChoice::One ? Setup::One : Setup::Two;
  const GridPtr grid = make_grid(c.grid);
  const InteractionTable table = table_for(grid, theta, c);
  const std::uint64_t seed = *c.seed;

  std::vector<LawnState> inits;
  for (const auto& name : c.initializers) inits.push_back(make_initializer(grid, theta, setup, name, seed));

  echo_config(c);
  ReplicaHooks hooks;
  if (c.checkpoint_every > 0) {
    hooks.hooks_for = [&](int replica) {
      AnnealHooks h;
      h.on_level = [&c, replica](const AnnealCheckpoint& cp) {
        if (cp.next_level % static_cast<std::size_t>(c.checkpoint_every) == 0) {
          write_text_file(replica_checkpoint_path(c.output_dir, replica), checkpoint_to_json(cp).dump() + "\n");
        }
        return true;
      };
      return h;
    };
  }
  if (resume) {
    hooks.resume_from = [&](int replica) -> std::optional<AnnealCheckpoint> {
      const auto path = replica_checkpoint_path(c.output_dir, replica);
      if (!fs::exists(path)) return std::nullopt;
      try {
        return checkpoint_from_json(json::parse(read_text_file(path)), grid);
      } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
      }
    };
  }

  std::vector<AnnealResult> all;
  const AnnealResult best = replica_search(inits, table, c.schedule, seed, c.n_replicas, c.threads, &all, &hooks);
  write_lawn_file(c.output_dir / "best_lawn.json",
                  make_lawn_record(best.best_state, theta, c.kernel, best.best_probability, best.seed));

  const double q = quantum_probability(theta);
  std::ostringstream report;
  report << "theta = " << fmt(theta) << "\n";
  report << "setup = " << grasshopper::to_string(setup) << "\n";
  report << "N = " << grid->size() << "\n";
  for (const auto& r : all) {
    report << "replica " << r.replica_id << " seed " << r.seed << " P = " << fmt(r.best_probability) << "\n";
  }
  report << "best replica = " << best.replica_id << "\n";
  report << "P = " << fmt(best.best_probability) << "\n";
  report << "Q = " << fmt(q) << "\n";
  report << "hemisphere = " << fmt(hemisphere_probability(theta)) << "\n";
  report << "gap = " << fmt(q - best.best_probability) << "\n";
  if (const auto* lawn = std::get_if<Lawn>(&best.best_state)) {
    const CogCount cogs = count_cogs(*lawn);
    report << "cogs = " << cogs.n_cogs << " (confidence " << fmt(cogs.confidence) << ")\n";
  } else {
    const auto& two = std::get<TwoLawnConfig>(best.best_state);
    const CogCount c1 = count_cogs(two.first);
    const CogCount c2 = count_cogs(two.second);
    report << "cogs = " << c1.n_cogs << " " << c2.n_cogs << " (confidence " << fmt(c1.confidence) << " "
           << fmt(c2.confidence) << ")\n";
  }
  write_text_file(c.output_dir / "optimize.log", report.str());
  out << report.str();
  return kExitOk;
}

int cmd_sweep(const RunConfig& c, std::optional<std::size_t> stop_after, std::ostream& out) {
  const GridPtr grid = make_grid(c.grid);
  SweepOptions opts;
  opts.kernel = c.kernel;
  opts.run_one = c.setup != SetupChoice::Two;
  opts.run_two = c.setup != SetupChoice::One;
  opts.n_replicas = c.n_replicas;
  opts.initializers = c.initializers;
  opts.schedule = c.schedule;
  opts.base_seed = *c.seed;
  opts.threads = c.threads;
  opts.output_dir = c.output_dir;
  opts.stop_after_rows = stop_after;
  echo_config(c);
  const std::vector<double> thetas = c.thetas.empty() ? default_sweep_thetas() : c.thetas;
  const ProbabilityCurve curve = sweep(grid, thetas, opts);
  std::vector<double> unique = thetas;
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  if (curve.rows.size() < unique.size()) {
    out << "stopped after " << curve.rows.size() << " of " << unique.size() << " rows; rerun to resume\n";
    return kExitOk;
  }
  write_text_file(c.output_dir / "sweep.csv", format_curve_csv(curve));
  out << "wrote " << curve.rows.size() << " rows to " << (c.output_dir / "sweep.csv").string() << "\n";
  return kExitOk;
}

struct LawnInput {
  std::string lawn_path;
  std::optional<std::string> grid_path;
  std::optional<std::size_t> pairs;
  std::optional<std::string> theta;
  std::optional<std::string> kernel_shape;
  std::optional<double> half_width;
  unsigned threads = 0;
};

void add_lawn_options(CLI::App& app, LawnInput& in) {
  app.add_option("lawn", in.lawn_path, "lawn JSON file")->required();
  app.add_option("--grid", in.grid_path, "grid file the lawn was saved for");
  app.add_option("--pairs", in.pairs, "Fibonacci antipodal grid with this many pairs");
  app.add_option("--theta", in.theta, "jump angle (default: the stored one)");
  app.add_option("--kernel-shape", in.kernel_shape, "cosine or hat (default: the stored one)");
  app.add_option("--half-width", in.half_width, "kernel half-width (default: the stored one)");
  app.add_option("--threads", in.threads, "worker threads for the table build");
}

struct LoadedLawn {
  LawnRecord record;
  GridPtr grid;
  LawnState state;
  double theta;
  DeltaKernel kernel;
};

LoadedLawn load_lawn_input(const LawnInput& in) {
  LawnRecord record = read_lawn_file(in.lawn_path);
  GridSource source;
  if (in.grid_path) source.path = *in.grid_path;
  if (in.pairs) source.fibonacci_pairs = *in.pairs;
  if (!in.grid_path && !in.pairs) {
    if (record.source_tag != "fibonacci-antipodal") {
      throw InputError("lawn was saved on grid '" + record.source_tag + "'; pass --grid");
    }
    source.fibonacci_pairs = record.n / 2;
  }
  GridPtr grid = make_grid(source);
  LawnState state = state_from_record(record, grid);
  DeltaKernel kernel = record.kernel;
  if (in.kernel_shape) kernel.shape = kernel_shape_from_string(*in.kernel_shape);
  if (in.half_width) kernel.half_width = *in.half_width;
  const double theta = in.theta ? parse_angle(*in.theta) : record.theta;
  return {std::move(record), std::move(grid), std::move(state), theta, kernel};
}

int cmd_eval(const LawnInput& in, std::ostream& out) {
  const LoadedLawn l = load_lawn_input(in);
  const InteractionTable table = build_interaction(l.grid, l.theta, l.kernel, NeighborSearch::LatitudeBands, in.threads);
  const double p = success_probability(l.state, table);
  const double q = quantum_probability(l.theta);
  out << "theta = " << fmt(l.theta) << "\n";
  out << "setup = " << grasshopper::to_string(setup_of(l.state)) << "\n";
  out << "P = " << format_real(p, 17) << "\n";
  if (l.theta == l.record.theta && l.kernel == l.record.kernel) {
    out << "stored P = " << format_real(l.record.probability, 17) << "\n";
    out << "difference = " << format_real(std::abs(p - l.record.probability), 3) << "\n";
  }
  out << "Q = " << fmt(q) << "\n";
  out << "hemisphere = " << fmt(hemisphere_probability(l.theta)) << "\n";
  out << "gap = " << fmt(q - p) << "\n";
  return kExitOk;
}

int cmd_analyze(const LawnInput& in, std::ostream& out) {
  const LoadedLawn l = load_lawn_input(in);
  const Setup setup = setup_of(l.state);
  out << "setup = " << grasshopper::to_string(setup) << "\n";
  const auto report_cogs = [&](const char* label, const Lawn& lawn) {
    const CogCount c = count_cogs(lawn);
    out << label << " cogs = " << c.n_cogs << " (confidence " << fmt(c.confidence) << ", predicted "
        << predicted_cogs(l.theta, setup) << ")\n";
  };
  TwoLawnConfig config = [&] {
    if (const auto* lawn = std::get_if<Lawn>(&l.state)) {
      report_cogs("lawn", *lawn);
      return TwoLawnConfig(*lawn, complement(*lawn));
    }
    const auto& two = std::get<TwoLawnConfig>(l.state);
    report_cogs("lawn1", two.first);
    report_cogs("lawn2", two.second);
    return two;
  }();
  const ReflectionReport r = verify_reflection_symmetry(config, l.theta, l.kernel);
  out << "reflection theta = " << fmt(r.theta) << "\n";
  out << "reflection P = " << format_real(r.probability, 17) << "\n";
  out << "reflection P' = " << format_real(r.reflected_probability, 17) << "\n";
  out << "reflection difference = " << format_real(r.difference, 3) << "\n";
  return kExitOk;
}

}  // namespace

void apply_config_json(const json& j, RunConfig& c) {
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  static const std::vector<std::string> known{"grid",         "setup", "theta",     "theta_list",   "kernel",
                                              "schedule",     "n_replicas", "initializers", "seed", "output_dir",
                                              "threads",      "table_cache", "checkpoint_every"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ParseError("unknown config field '" + key + "'");
    }
  }
  if (j.contains("grid")) {
    const json& g = j["grid"];
    c.grid = {};
    if (g.contains("path")) c.grid.path = field<std::string>(g, "path");
    if (g.contains("fibonacci_pairs")) c.grid.fibonacci_pairs = field<std::size_t>(g, "fibonacci_pairs");
  }
  if (j.contains("setup")) c.setup = setup_choice_from_string(field<std::string>(j, "setup"));
  if (j.contains("theta") && j.contains("theta_list")) throw InputError("config has both theta and theta_list");
  if (j.contains("theta")) c.thetas = {field<double>(j, "theta")};
  if (j.contains("theta_list")) c.thetas = field<std::vector<double>>(j, "theta_list");
  if (j.contains("kernel")) {
    const json& k = j["kernel"];
    if (k.contains("shape")) c.kernel.shape = kernel_shape_from_string(field<std::string>(k, "shape"));
    if (k.contains("half_width")) c.kernel.half_width = field<double>(k, "half_width");
  }
  if (j.contains("schedule")) c.schedule = schedule_from_json(j["schedule"]);
  if (j.contains("n_replicas")) c.n_replicas = field<int>(j, "n_replicas");
  if (j.contains("initializers")) c.initializers = field<std::vector<std::string>>(j, "initializers");
  if (j.contains("seed")) c.seed = field<std::uint64_t>(j, "seed");
  if (j.contains("output_dir")) c.output_dir = field<std::string>(j, "output_dir");
  if (j.contains("threads")) c.threads = field<unsigned>(j, "threads");
  if (j.contains("table_cache")) c.table_cache = field<std::string>(j, "table_cache");
  if (j.contains("checkpoint_every")) c.checkpoint_every = field<int>(j, "checkpoint_every");
}

ordered_json config_to_json(const RunConfig& c) {
  ordered_json j;
  ordered_json g = ordered_json::object();
  if (c.grid.path) g["path"] = c.grid.path->string();
  if (c.grid.fibonacci_pairs) g["fibonacci_pairs"] = *c.grid.fibonacci_pairs;
  j["grid"] = g;
  j["setup"] = to_string(c.setup);
  j["theta_list"] = c.thetas;
  j["kernel"] = {{"shape", grasshopper::to_string(c.kernel.shape)}, {"half_width", c.kernel.half_width}};
  j["schedule"] = schedule_to_json(c.schedule);
  j["n_replicas"] = c.n_replicas;
  j["initializers"] = c.initializers;
  if (c.seed) j["seed"] = *c.seed;
  j["output_dir"] = c.output_dir.string();
  j["threads"] = c.threads;
  if (!c.table_cache.empty()) j["table_cache"] = c.table_cache.string();
  if (c.checkpoint_every > 0) j["checkpoint_every"] = c.checkpoint_every;
  return j;
}

void validate(const RunConfig& c) {
  if (c.grid.path.has_value() == c.grid.fibonacci_pairs.has_value()) {
    throw InputError("config needs exactly one grid source: a path or fibonacci_pairs");
  }
  if (c.grid.path && !fs::exists(*c.grid.path)) throw InputError("grid file not found: " + c.grid.path->string());
  if (!c.seed) throw InputError("config needs a seed");
  for (double t : c.thetas) {
    if (!(t > 0.0 && t < std::numbers::pi)) throw InputError("theta " + fmt(t) + " outside (0, pi)");
  }
  if (!(c.kernel.half_width > 0.0)) throw InputError("kernel half_width must be positive");
  if (c.n_replicas < 1) throw InputError("n_replicas must be at least 1");
  if (c.initializers.empty()) throw InputError("initializers must not be empty");
  for (const auto& name : c.initializers) {
    if (name != "random" && name != "hemisphere" && name != "cogwheel") {
      throw InputError("unknown initializer '" + name + "'");
    }
  }
  if (const auto* s = std::get_if<AnnealSchedule>(&c.schedule)) {
    s->validate();
  } else {
    const auto& a = std::get<AutoSchedule>(c.schedule);
    if (!(a.probe_scale > 0.0) || a.probes < 2 || !(a.final_ratio > 0.0 && a.final_ratio < 1.0) ||
        !(a.cooling_ratio > 0.0 && a.cooling_ratio < 1.0) || a.sweeps_per_temperature < 1) {
      throw InputError("invalid auto schedule");
    }
  }
  if (c.checkpoint_every < 0) throw InputError("checkpoint_every must not be negative");
}

GridPtr make_grid(const GridSource& source) {
  if (source.path) return std::make_shared<const SphericalGrid>(load_grid(*source.path));
  if (source.fibonacci_pairs) return std::make_shared<const SphericalGrid>(generate_fibonacci_antipodal(*source.fibonacci_pairs));
  throw InputError("no grid source");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulated annealing of lawn colorings for the grasshopper problem", "grasshopper"};
  app.require_subcommand(1);

  std::size_t gen_pairs = 0;
  std::string gen_out;
  auto* gridgen = app.add_subcommand("gridgen", "write a Fibonacci antipodal grid");
  gridgen->add_option("--pairs", gen_pairs, "number of antipodal pairs")->required();
  gridgen->add_option("--out", gen_out, "output grid file")->required();

  Overrides opt_o;
  bool resume = false;
  auto* optimize = app.add_subcommand("optimize", "anneal the best lawn for one jump angle");
  add_run_options(*optimize, opt_o);
  optimize->add_option("--checkpoint-every", opt_o.checkpoint_every, "temperature levels between replica checkpoints");
  optimize->add_flag("--resume", resume, "continue replicas from their checkpoints");

  Overrides sweep_o;
  std::optional<std::size_t> stop_after;
  auto* sweep_cmd = app.add_subcommand("sweep", "probability curve over many jump angles");
  add_run_options(*sweep_cmd, sweep_o);
  sweep_cmd->add_option("--stop-after", stop_after, "stop after this many rows")->group("");

  LawnInput eval_in;
  auto* eval = app.add_subcommand("eval", "success probability of a saved lawn");
  add_lawn_options(*eval, eval_in);

  LawnInput analyze_in;
  auto* analyze = app.add_subcommand("analyze", "cog count and reflection check of a saved lawn");
  add_lawn_options(*analyze, analyze_in);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*gridgen) return cmd_gridgen(gen_pairs, gen_out, out);
    if (*optimize) return cmd_optimize(resolve_config(opt_o), resume, out);
    if (*sweep_cmd) {
      if (sweep_o.checkpoint_every) throw InputError("--checkpoint-every applies to optimize");
      return cmd_sweep(resolve_config(sweep_o), stop_after, out);
    }
    if (*eval) return cmd_eval(eval_in, out);
    if (*analyze) return cmd_analyze(analyze_in, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitInvalid;
}

}  // namespace grasshopper::cli
