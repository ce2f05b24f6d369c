#include "pcehinf/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <limits>

#include "json.hpp"
#include "pcehinf/eval.hpp"
#include "pcehinf/galerkin.hpp"
#include "pcehinf/plant_io.hpp"
#include "pcehinf/report.hpp"
#include "pcehinf/synth.hpp"

namespace pcehinf {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr double kSdpTol = 1e-8;

struct PublishedRow {
  const char* method;
  int degree;
  double rho2;
  double k1, k2;  // NaN when the gain was not published
  double worst, averaged;
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr PublishedRow kTable1[] = {
    {"worst-case", 0, 0.0, -0.1281, -9.4664, 54.1316, 21.0501},
    {"nominal-pce", 2, 0.0, 1.8539, -27.4996, 80.1360, 14.7713},
    {"nominal-pce", 3, 0.0, 1.5298, -28.6719, 57.7491, 15.1790},
    {"nominal-pce", 10, 0.0, 5.1988, -74.7948, 55.4751, 17.7026},
    {"robust-pce", 2, 0.0001, kNaN, kNaN, 79.3716, 14.7584},
    {"robust-pce", 2, 0.0036, kNaN, kNaN, 65.0046, 14.6731},
    {"robust-pce", 2, 0.0225, kNaN, kNaN, 39.9650, 16.4820},
};

KInitPolicy parse_k_init(const std::string& s) {
  if (s == "auto") return KInitPolicy::Auto;
  if (s == "zero") return KInitPolicy::Zero;
  if (s == "random") return KInitPolicy::Random;
  if (s == "given") return KInitPolicy::Given;
  fail(ErrorKind::InvalidArgument, "unknown k_init '" + s + "' (auto, zero, random, given)");
}

std::string gain_text(const Matrix& K) {
  std::string s;
  for (Eigen::Index r = 0; r < K.rows(); ++r)
    for (Eigen::Index c = 0; c < K.cols(); ++c) {
      if (!s.empty()) s += ' ';
      s += format_number(K(r, c));
    }
  return s;
}

Matrix json_matrix(const json& j, const std::string& field) {
  require(j.is_array() && !j.empty(), ErrorKind::Schema, field + " must be a non-empty array");
  const size_t cols = j.front().is_array() ? j.front().size() : 0;
  require(cols > 0, ErrorKind::Schema, field + " must be an array of rows");
  Matrix m(j.size(), cols);
  for (size_t r = 0; r < j.size(); ++r) {
    require(j[r].is_array() && j[r].size() == cols, ErrorKind::DimensionMismatch,
            field + "[" + std::to_string(r) + "] has the wrong length");
    for (size_t c = 0; c < cols; ++c) {
      require(j[r][c].is_number(), ErrorKind::Schema,
              field + "[" + std::to_string(r) + "][" + std::to_string(c) + "] is not a number");
      m(r, c) = j[r][c].get<double>();
    }
  }
  return m;
}

class Runner {
 public:
  Runner(const RunConfig& cfg, std::ostream& log) : cfg_(cfg), log_(log) {
    validate(cfg_);
    plant_ = load_plant(cfg_.plant);
    hash_ = hex64(fnv1a64(canonical_config(cfg_) + "\n" + serialize_plant(plant_)));
    fs::create_directories(cfg_.out);
  }

  void dispatch() {
    if (cfg_.command == "transform") return transform();
    if (cfg_.command == "synthesize") return synthesize_cmd();
    if (cfg_.command == "analyze") return analyze();
    if (cfg_.command == "evaluate") return evaluate();
    if (cfg_.command == "reproduce-table1") return table1();
    fail(ErrorKind::InvalidArgument, "unknown command '" + cfg_.command + "'");
  }

 private:
  Metadata meta(const std::string& content) const {
    Metadata m;
    m.add("command", cfg_.command)
        .add("content", content)
        .add("config_hash", "fnv1a64:" + hash_)
        .add("seed", std::to_string(cfg_.seed))
        .add("tolerances", "hinf=" + format_number(cfg_.hinf_tol) +
                               " synthesis=" + format_number(cfg_.tol) +
                               " sdp=" + format_number(kSdpTol) + " stability_margin=1e-06")
        .add("versions", version_string() + ", nlohmann_json " +
                             std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                             std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                             std::to_string(NLOHMANN_JSON_VERSION_PATCH))
        .add("plant", plant_.name.empty() ? cfg_.plant.filename().string() : plant_.name);
    return m;
  }

  void write(const std::string& file, const std::string& text) const {
    write_text(cfg_.out / file, text);
    log_ << "wrote " << (cfg_.out / file).string() << "\n";
  }

  Gain gain() const {
    Gain K;
    if (cfg_.gain)
      K = *cfg_.gain;
    else if (cfg_.gain_file)
      K = load_matrix_csv(*cfg_.gain_file);
    else
      fail(ErrorKind::InvalidArgument, cfg_.command + " needs a gain (--gain or config \"gain\")");
    require(K.rows() == plant_.nu() && K.cols() == plant_.ny(), ErrorKind::DimensionMismatch,
            "gain is " + std::to_string(K.rows()) + "x" + std::to_string(K.cols()) +
                ", plant needs " + std::to_string(plant_.nu()) + "x" +
                std::to_string(plant_.ny()));
    return K;
  }

  bool has_gain() const { return cfg_.gain || cfg_.gain_file; }

  SynthesisConfig synthesis_config() const {
    SynthesisConfig sc;
    sc.mode = parse_mode(cfg_.mode);
    sc.p = cfg_.degree;
    sc.rho2 = cfg_.rho2;
    sc.k_init = parse_k_init(cfg_.k_init);
    if (sc.k_init == KInitPolicy::Given) sc.k_given = gain();
    sc.max_outer_iters = cfg_.max_outer_iters;
    sc.tol = cfg_.tol;
    sc.restarts = cfg_.restarts;
    sc.seed = cfg_.seed;
    sc.relax = cfg_.relax;
    sc.stability_grid = cfg_.stability_grid;
    return sc;
  }

  std::string stability_csv(const StabilityReport& s) const {
    std::string xi;
    for (const double v : s.worst_xi) xi += (xi.empty() ? "" : " ") + format_number(v);
    return csv_document(meta("stability post-analysis"),
                        {"points", "max_real_part", "worst_xi", "margin", "stable"},
                        {{std::to_string(s.points), format_number(s.max_real_part), xi,
                          format_number(s.margin), s.stable ? "true" : "false"}});
  }

  std::string norms_csv(const NormDistribution& d) const {
    CsvRow cols;
    for (int k = 0; k < plant_.n_xi(); ++k) cols.push_back("xi" + std::to_string(k + 1));
    cols.push_back("weight");
    cols.push_back("hinf");
    std::vector<CsvRow> rows;
    for (Eigen::Index s = 0; s < d.xi.cols(); ++s) {
      CsvRow r;
      for (int k = 0; k < plant_.n_xi(); ++k) r.push_back(format_number(d.xi(k, s)));
      r.push_back(format_number(d.weight[s]));
      r.push_back(format_number(d.gamma[s]));
      rows.push_back(std::move(r));
    }
    return csv_document(meta("per-sample closed-loop hinf norms"), cols, rows);
  }

  void transform() {
    const ExpandedBlocks b = expand_blocks(plant_, basis_for(plant_, cfg_.degree), cfg_.degree);
    const std::pair<const char*, const Matrix*> blocks[] = {
        {"A", &b.A},         {"Bw", &b.Bw},         {"Bbar", &b.Bbar},   {"Cbar", &b.Cbar},
        {"Dwbar", &b.Dwbar}, {"CZbar", &b.CZbar}, {"DZwbar", &b.DZwbar}, {"DZbar", &b.DZbar}};
    for (const auto& [name, m] : blocks) {
      Metadata md = meta(std::string("expanded block ") + name);
      md.add("degree", std::to_string(b.p)).add("expansion_order", std::to_string(b.q));
      write(std::string("expanded_") + name + ".csv", matrix_csv(md, *m));
    }
    if (!has_gain()) return;
    const Gain K = gain();
    for (const ExpandedClosedLoop& cl : {assemble_closed_loop(b, K), assemble_legacy(b, K)}) {
      const std::string tag = cl.kind == Transform::Proposed ? "proposed" : "legacy";
      const std::pair<const char*, const Matrix*> parts[] = {
          {"A", &cl.A}, {"B", &cl.B}, {"C", &cl.C}, {"D", &cl.D}};
      for (const auto& [name, m] : parts) {
        Metadata md = meta("expanded closed loop (" + tag + ") " + name);
        md.add("degree", std::to_string(b.p)).add("gain", gain_text(K));
        write("closed_loop_" + tag + "_" + name + ".csv", matrix_csv(md, *m));
      }
    }
  }

  void synthesize_cmd() {
    SynthesisConfig sc = synthesis_config();
    SynthesisResult res;
    std::vector<RhoProbe> probes;
    std::optional<double> rho2_min;
    if (cfg_.rho2_hi) {
      require(sc.mode == SynthesisMode::RobustPce, ErrorKind::InvalidArgument,
              "rho2_hi bisection needs mode robust-pce");
      RhoBisectionResult rb = rho_bisection(plant_, sc, *cfg_.rho2_hi);
      res = std::move(rb.result);
      probes = std::move(rb.probes);
      rho2_min = rb.rho2_min;
      sc.rho2 = rb.rho2_min;
    } else {
      res = synthesize(plant_, sc);
    }
    const bool recheck = lmi_recheck(plant_, sc, res.K, res.gamma);
    const NormDistribution nd = norm_distribution(plant_, res.K, cfg_.grid, cfg_.hinf_tol);

    Metadata gm = meta("synthesized gain");
    gm.add("mode", to_string(sc.mode)).add("degree", std::to_string(sc.p)).add("rho2", sc.rho2);
    write("gain.csv", matrix_csv(gm, res.K));
    CsvRow cols = {"mode",         "degree",        "rho2",          "gamma",
                   "iterations",   "best_restart",  "lmi_recheck",   "stable",
                   "max_real_part", "worst_case_hinf", "averaged_hinf", "gain"};
    CsvRow row = {to_string(sc.mode),
                  std::to_string(sc.p),
                  format_number(sc.rho2),
                  format_number(res.gamma),
                  std::to_string(res.iterations),
                  std::to_string(res.best_restart),
                  recheck ? "true" : "false",
                  res.stability.stable ? "true" : "false",
                  format_number(res.stability.max_real_part),
                  format_number(nd.worst_case),
                  format_number(nd.averaged),
                  gain_text(res.K)};
    if (rho2_min) {
      cols.push_back("rho2_min");
      row.push_back(format_number(*rho2_min));
    }
    write("synthesis_summary.csv", csv_document(meta("synthesis summary"), cols, {row}));

    std::vector<CsvRow> trace_rows;
    for (const RestartTrace& t : res.traces)
      for (size_t i = 0; i < t.gamma.size(); ++i)
        trace_rows.push_back({std::to_string(t.restart), std::to_string(i),
                              format_number(t.gamma[i])});
    write("synthesis_traces.csv", csv_document(meta("per-restart accepted gamma values"),
                                               {"restart", "iteration", "gamma"}, trace_rows));
    if (!probes.empty()) {
      std::vector<CsvRow> rows;
      for (const RhoProbe& p : probes)
        rows.push_back({format_number(p.rho2), p.synthesized ? "true" : "false",
                        p.stable ? "true" : "false", format_number(p.gamma),
                        format_number(p.max_real_part), gain_text(p.K)});
      write("rho_probes.csv",
            csv_document(meta("rho2 bisection probes"),
                         {"rho2", "synthesized", "stable", "gamma", "max_real_part", "gain"},
                         rows));
    }
    if (cfg_.sdpa) {
      std::ofstream os(*cfg_.sdpa, std::ios::binary);
      require(static_cast<bool>(os), ErrorKind::Io, "cannot open " + cfg_.sdpa->string());
      const Metadata md = meta("certificate LMI at the reported gamma");
      for (const auto& [k, v] : md.fields())
        os << "\"" << k << ": " << v << "\n";
      dump_sdpa(certificate_lmi(plant_, sc, res.K, res.gamma), os);
      log_ << "wrote " << cfg_.sdpa->string() << "\n";
    }
    log_ << "gamma " << format_number(res.gamma) << ", K = [" << gain_text(res.K)
         << "], stable " << (res.stability.stable ? "yes" : "no") << "\n";
  }

  void analyze() {
    const Gain K = gain();
    const StabilityReport st = stability_post_analysis(plant_, K, cfg_.stability_grid);
    const NormDistribution nd = norm_distribution(plant_, K, cfg_.grid, cfg_.hinf_tol);
    write("stability.csv", stability_csv(st));
    write("norms.csv", norms_csv(nd));
    Metadata md = meta("hinf norm summary");
    md.add("gain", gain_text(K)).add("grid", std::to_string(cfg_.grid));
    write("summary.csv",
          csv_document(md, {"worst_case_hinf", "averaged_hinf", "unstable_samples"},
                       {{format_number(nd.worst_case), format_number(nd.averaged),
                         std::to_string(nd.unstable.size())}}));
    log_ << "worst_case_hinf " << format_number(nd.worst_case) << ", averaged_hinf "
         << format_number(nd.averaged) << "\n";
    require(nd.all_stable(), ErrorKind::UnstableSystem,
            std::to_string(nd.unstable.size()) + " grid samples have an unstable closed loop");
  }

  Vector initial_state() const {
    if (cfg_.x0.empty()) return Vector::Unit(plant_.nx(), 0);
    return Eigen::Map<const Vector>(cfg_.x0.data(), static_cast<Eigen::Index>(cfg_.x0.size()));
  }

  SimulationConfig simulation_config() const {
    SimulationConfig sc;
    sc.x0 = initial_state();
    sc.T = cfg_.T;
    sc.dt = cfg_.dt;
    sc.n_mc = cfg_.mc;
    sc.seed = cfg_.seed;
    return sc;
  }

  void evaluate() {
    const Gain K = gain();
    const SimulationConfig sc = simulation_config();
    auto sim_meta = [&](const std::string& content) {
      Metadata md = meta(content);
      std::string x0;
      for (const double v : sc.x0) x0 += (x0.empty() ? "" : " ") + format_number(v);
      md.add("gain", gain_text(K))
          .add("degree", std::to_string(cfg_.degree))
          .add("x0", x0)
          .add("T", cfg_.T)
          .add("dt", cfg_.dt)
          .add("n_mc", std::to_string(cfg_.mc));
      return md;
    };
    const SimulationResult sim = simulate_stats(plant_, K, cfg_.degree, sc);
    for (const TrajectoryStats* ts : {&sim.monte_carlo, &sim.proposed, &sim.legacy}) {
      CsvRow cols{"t"};
      for (int i = 0; i < plant_.nx(); ++i) cols.push_back("mean_" + std::to_string(i + 1));
      for (int i = 0; i < plant_.nx(); ++i) cols.push_back("var_" + std::to_string(i + 1));
      std::vector<CsvRow> rows;
      const int last = static_cast<int>(ts->t.size()) - 1;
      for (int k = 0; k <= last; k += cfg_.output_stride) {
        CsvRow r{format_number(ts->t[k])};
        for (int i = 0; i < plant_.nx(); ++i) r.push_back(format_number(ts->mean(i, k)));
        for (int i = 0; i < plant_.nx(); ++i) r.push_back(format_number(ts->variance(i, k)));
        rows.push_back(std::move(r));
        if (k < last && k + cfg_.output_stride > last) k = last - cfg_.output_stride;
      }
      write(std::string("trajectories_") + to_string(ts->source) + ".csv",
            csv_document(sim_meta(std::string("state statistics, ") + to_string(ts->source)),
                         cols, rows));
    }
    const TransformComparison tc = transform_error(plant_, K, cfg_.degree, sc, cfg_.nodes);
    Metadata md = sim_meta("transform reconstruction errors");
    md.add("nodes", std::to_string(tc.nodes));
    std::vector<CsvRow> rows;
    for (const auto& [name, e] : {std::pair{"proposed", tc.proposed}, {"legacy", tc.legacy}})
      rows.push_back({name, format_number(e.state), format_number(e.mean),
                      format_number(e.variance)});
    write("transform_error.csv",
          csv_document(md, {"transform", "state_error", "mean_error", "variance_error"}, rows));
    const ExpandedNorms en = expanded_norms(plant_, K, cfg_.degree, cfg_.hinf_tol);
    write("expanded_norms.csv",
          csv_document(sim_meta("expanded closed-loop hinf norms"), {"transform", "hinf"},
                       {{"proposed", format_number(en.proposed)},
                        {"legacy", format_number(en.legacy)}}));
    log_ << "mean error proposed " << format_number(tc.proposed.mean) << ", legacy "
         << format_number(tc.legacy.mean) << "\n";
  }

  void table1() {
    require(plant_.nu() == 1 && plant_.ny() == 2, ErrorKind::DimensionMismatch,
            "reproduce-table1 needs the 1x2 gain structure of the reference plant");
    std::vector<CsvRow> rows;
    Gain k_nominal2;
    for (const PublishedRow& pr : kTable1) {
      Gain K(1, 2);
      std::string source = "published";
      if (!std::isnan(pr.k1)) {
        K << pr.k1, pr.k2;
      } else {
        if (!cfg_.with_synthesis) continue;
        SynthesisConfig sc = synthesis_config();
        sc.mode = SynthesisMode::NominalPce;
        sc.p = pr.degree;
        if (k_nominal2.size() == 0) k_nominal2 = synthesize(plant_, sc).K;
        sc.mode = SynthesisMode::RobustPce;
        sc.rho2 = pr.rho2;
        sc.extra_starts = {k_nominal2};
        K = synthesize(plant_, sc).K;
        source = "synthesized";
      }
      const NormDistribution nd = norm_distribution(plant_, K, cfg_.grid, cfg_.hinf_tol);
      rows.push_back({pr.method, std::to_string(pr.degree), format_number(pr.rho2), source,
                      gain_text(K), format_number(nd.worst_case), format_number(nd.averaged),
                      format_number(pr.worst), format_number(pr.averaged),
                      format_number(std::abs(nd.worst_case - pr.worst) / pr.worst),
                      format_number(std::abs(nd.averaged - pr.averaged) / pr.averaged)});
      log_ << pr.method << " p=" << pr.degree << ": " << format_number(nd.worst_case) << " / "
           << format_number(nd.averaged) << "\n";
    }
    Metadata md = meta("reference table reproduction");
    md.add("grid", std::to_string(cfg_.grid));
    write("table1.csv",
          csv_document(md,
                       {"method", "degree", "rho2", "gain_source", "gain", "worst_case_hinf",
                        "averaged_hinf", "published_worst_case_hinf",
                        "published_averaged_hinf", "rel_err_worst_case", "rel_err_averaged"},
                       rows));
  }

  RunConfig cfg_;
  std::ostream& log_;
  UncertainPlant plant_;
  std::string hash_;
};

}  // namespace

RunConfig load_run_config(const fs::path& path) {
  const std::string text = read_text(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Schema, path.string() + ": " + e.what());
  }
  require(j.is_object(), ErrorKind::Schema, path.string() + ": config must be a JSON object");
  const fs::path base = path.parent_path();
  auto resolve = [&](const std::string& p) {
    const fs::path q(p);
    return q.is_absolute() || base.empty() ? q : base / q;
  };
  RunConfig c;
  for (const auto& [key, v] : j.items()) {
    const std::string where = path.string() + ": field \"" + key + "\"";
    try {
      if (key == "command") c.command = v.get<std::string>();
      else if (key == "plant") c.plant = resolve(v.get<std::string>());
      else if (key == "out") c.out = resolve(v.get<std::string>());
      else if (key == "mode") c.mode = v.get<std::string>();
      else if (key == "degree") c.degree = v.get<int>();
      else if (key == "rho2") c.rho2 = v.get<double>();
      else if (key == "rho2_hi") c.rho2_hi = v.get<double>();
      else if (key == "restarts") c.restarts = v.get<int>();
      else if (key == "max_outer_iters") c.max_outer_iters = v.get<int>();
      else if (key == "tol") c.tol = v.get<double>();
      else if (key == "relax") c.relax = v.get<double>();
      else if (key == "k_init") c.k_init = v.get<std::string>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "sdpa") c.sdpa = resolve(v.get<std::string>());
      else if (key == "gain") {
        if (v.is_string()) c.gain_file = resolve(v.get<std::string>());
        else c.gain = json_matrix(v, where);
      }
      else if (key == "grid") c.grid = v.get<int>();
      else if (key == "mc") c.mc = v.get<int>();
      else if (key == "T") c.T = v.get<double>();
      else if (key == "dt") c.dt = v.get<double>();
      else if (key == "x0") c.x0 = v.get<std::vector<double>>();
      else if (key == "nodes") c.nodes = v.get<int>();
      else if (key == "output_stride") c.output_stride = v.get<int>();
      else if (key == "hinf_tol") c.hinf_tol = v.get<double>();
      else if (key == "stability_grid") c.stability_grid = v.get<int>();
      else if (key == "with_synthesis") c.with_synthesis = v.get<bool>();
      else fail(ErrorKind::Schema, where + " is not a known setting");
    } catch (const json::exception& e) {
      fail(ErrorKind::Schema, where + ": " + e.what());
    }
  }
  return c;
}

void validate(const RunConfig& c) {
  auto check = [](bool ok, const std::string& what) {
    require(ok, ErrorKind::InvalidArgument, what);
  };
  check(std::find(kCommands.begin(), kCommands.end(), c.command) != kCommands.end(),
        "unknown command '" + c.command + "'");
  check(!c.plant.empty(), "a plant file is required (--plant)");
  require(fs::exists(c.plant), ErrorKind::Io, "plant file not found: " + c.plant.string());
  if (c.gain_file)
    require(fs::exists(*c.gain_file), ErrorKind::Io,
            "gain file not found: " + c.gain_file->string());
  parse_mode(c.mode);
  check(c.degree >= 0 && c.degree <= 20, "degree must be in [0, 20]");
  check(c.rho2 >= 0.0, "rho2 must be >= 0");
  check(!c.rho2_hi || *c.rho2_hi > 0.0, "rho2_hi must be > 0");
  check(c.restarts >= 1 && c.restarts <= 1000, "restarts must be in [1, 1000]");
  check(c.max_outer_iters >= 0, "max_outer_iters must be >= 0");
  check(c.tol > 0.0 && c.tol < 1.0, "tol must be in (0, 1)");
  check(c.relax >= 0.0 && c.relax < 1.0, "relax must be in [0, 1)");
  check(c.grid >= 2 && c.grid <= 1'000'000, "grid must be in [2, 1e6]");
  check(c.mc >= 2 && c.mc <= 10'000'000, "mc must be in [2, 1e7]");
  check(c.T > 0.0 && c.dt > 0.0 && c.dt <= c.T, "need 0 < dt <= T");
  check(c.nodes >= 1 && c.nodes <= 1001, "nodes must be in [1, 1001]");
  check(c.output_stride >= 1, "output_stride must be >= 1");
  check(c.hinf_tol > 0.0 && c.hinf_tol < 1.0, "hinf_tol must be in (0, 1)");
  check(c.stability_grid >= 2, "stability_grid must be >= 2");
}

std::string canonical_config(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["mode"] = c.mode;
  j["degree"] = c.degree;
  j["rho2"] = c.rho2;
  j["rho2_hi"] = c.rho2_hi ? json(*c.rho2_hi) : json(nullptr);
  j["restarts"] = c.restarts;
  j["max_outer_iters"] = c.max_outer_iters;
  j["tol"] = c.tol;
  j["relax"] = c.relax;
  j["k_init"] = c.k_init;
  j["seed"] = c.seed;
  if (c.gain) {
    json g = json::array();
    for (Eigen::Index r = 0; r < c.gain->rows(); ++r) {
      json row = json::array();
      for (Eigen::Index k = 0; k < c.gain->cols(); ++k) row.push_back((*c.gain)(r, k));
      g.push_back(row);
    }
    j["gain"] = g;
  } else if (c.gain_file) {
    j["gain"] = gain_text(load_matrix_csv(*c.gain_file));
  }
  j["grid"] = c.grid;
  j["mc"] = c.mc;
  j["T"] = c.T;
  j["dt"] = c.dt;
  j["x0"] = c.x0;
  j["nodes"] = c.nodes;
  j["output_stride"] = c.output_stride;
  j["hinf_tol"] = c.hinf_tol;
  j["stability_grid"] = c.stability_grid;
  j["with_synthesis"] = c.with_synthesis;
  return j.dump();
}

void run(const RunConfig& cfg, std::ostream& log) { Runner(cfg, log).dispatch(); }

}  // namespace pcehinf
