// Command-line surface over the library: generation, classification, witness
// search (exhaustive oracle or proof pipeline), bound verification, and the
// random-coloring experiments. Every output is machine-readable JSON (or CSV
// for grids) and byte-deterministic for fixed inputs, seeds, and caps.
//
// Exit codes: 0 success / witness found; 1 genuine negative (no witness,
// certificate absent, a check failed); 2 usage error; 3 work-cap/size error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <canon/bounds.hpp>
#include <canon/experiments.hpp>
#include <canon/finder.hpp>
#include <canon/generators.hpp>
#include <canon/oracle.hpp>

using namespace canon;

namespace {

constexpr std::uint64_t kDefaultWorkCap = 1'000'000'000;

std::uint64_t env_work_cap() {
  const char* env = std::getenv("CANON_WORK_CAP");
  if (!env || !*env) return kDefaultWorkCap;
  std::string s{env};
  std::size_t pos = 0;
  std::uint64_t v;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("CANON_WORK_CAP is not a number: " + s);
  }
  if (pos != s.size()) throw std::invalid_argument("CANON_WORK_CAP is not a number: " + s);
  return v;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + out_path + " for writing");
  out << text;
  if (!out.good()) throw std::runtime_error("write failed: " + out_path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string detect_format(const std::string& path, const std::string& requested) {
  if (requested != "auto") return requested;
  return path.size() >= 4 && path.substr(path.size() - 4) == ".csv" ? "csv" : "json";
}

// --input grid file or --spec family file, exactly one
struct SourceArgs {
  std::string input, spec, in_format = "auto";

  void attach(CLI::App* cmd) {
    auto* in = cmd->add_option("--input", input, "grid file (json or csv)");
    auto* sp = cmd->add_option("--spec", spec, "family spec file (json)");
    cmd->add_option("--in-format", in_format, "input grid format")
        ->check(CLI::IsMember({"auto", "json", "csv"}));
    in->excludes(sp);
  }
  ColoringSource load() const {
    if (input.empty() == spec.empty())
      throw std::invalid_argument("exactly one of --input and --spec is required");
    if (!input.empty()) return load_coloring(input, detect_format(input, in_format));
    return instantiate(spec_from_json(json::parse(read_file(spec))));
  }
};

struct Out {
  std::string path;
  void attach(CLI::App* cmd) { cmd->add_option("--out", path, "output file (default stdout)"); }
};

int cmd_generate(const std::string& spec_path, const std::string& family, std::uint64_t n1,
                 std::uint64_t n2, const std::optional<std::uint64_t>& seed,
                 const json& family_params, const std::vector<std::string>& random_families,
                 const std::string& format, std::uint64_t work_cap, const Out& out) {
  ColoringSpec spec;
  if (!spec_path.empty()) {
    if (!family.empty())
      throw std::invalid_argument("--spec and --family are mutually exclusive");
    spec = spec_from_json(json::parse(read_file(spec_path)));
  } else {
    if (family.empty()) throw std::invalid_argument("one of --spec and --family is required");
    spec.family = family;
    spec.n1 = n1;
    spec.n2 = n2;
    bool randomized =
        std::find(random_families.begin(), random_families.end(), family) != random_families.end();
    if (randomized && !seed)
      throw std::invalid_argument("--seed is required for family " + family);
    spec.seed = seed.value_or(0);
    spec.params = family_params;
  }
  emit(out.path, coloring_text(instantiate(spec), format, work_cap));
  return 0;
}

int cmd_classify(const SourceArgs& source, std::uint64_t work_cap, const Out& out) {
  Grid g = materialize(source.load(), work_cap);
  auto set = classify_grid(g);
  json names = json::array();
  for (auto p : set.to_list()) names.push_back(pattern_name(p));
  emit(out.path, json{{"m", g.rows}, {"patterns", std::move(names)}}.dump() + "\n");
  return 0;
}

int pipeline_exit(const PipelineReport& rep) {
  if (rep.witness) return 0;
  return rep.failure_reason == FailureReason::WorkCap ? 3 : 1;
}

PipelineParams pipeline_params(const ColoringSource& src, std::uint64_t m,
                               const std::string& mode, std::uint64_t seed) {
  if (mode == "strict") {
    auto p = default_params(m, seed);
    p.n1 = src.n1;  // run against the host at hand; strict scale checks stay on
    p.n2 = src.n2;
    return p;
  }
  return best_effort_params(m, src.n1, src.n2, seed);
}

int cmd_find(const SourceArgs& source, std::uint64_t m, const std::string& engine,
             const std::string& mode, const std::optional<std::uint64_t>& seed,
             const std::string& allow_csv, int threads, std::uint64_t work_cap, const Out& out) {
  auto src = source.load();
  if (engine == "oracle") {
    PatternSet allow;
    if (allow_csv.empty())
      allow = PatternSet::all();
    else {
      std::stringstream ss(allow_csv);
      std::string name;
      while (std::getline(ss, name, ',')) {
        auto p = pattern_from_name(name);
        if (!p) throw std::invalid_argument("unknown pattern \"" + name + "\"");
        allow.insert(*p);
      }
    }
    auto w = find_canonical_biclique(src, m, allow, OracleLimits{work_cap, threads});
    emit(out.path, json{{"witness", w ? witness_to_json(*w) : json(nullptr)}}.dump() + "\n");
    return w ? 0 : 1;
  }
  if (!seed) throw std::invalid_argument("--seed is required for the pipeline engine");
  auto p = pipeline_params(src, m, mode, *seed);
  p.threads = threads;
  p.work_cap = work_cap;
  auto rep = run_pipeline(src, p);
  emit(out.path, pipeline_report_json(rep).dump() + "\n");
  return pipeline_exit(rep);
}

int cmd_pipeline(const SourceArgs& source, std::uint64_t m, const std::string& mode,
                 std::uint64_t seed, const std::optional<std::uint64_t>& tuple_len,
                 const std::optional<std::uint64_t>& s2_target,
                 const std::optional<std::uint64_t>& quota,
                 const std::optional<std::uint64_t>& retries, int threads,
                 std::uint64_t work_cap, const Out& out) {
  auto src = source.load();
  auto p = pipeline_params(src, m, mode, seed);
  if (tuple_len) p.tuple_len = *tuple_len;
  if (s2_target) {
    p.s2_target = *s2_target;
    p.popularity_threshold = popularity_threshold_for(m, *s2_target);
  }
  if (quota) p.pigeonhole_quota = *quota;
  if (retries) p.max_sampling_retries = *retries;
  p.threads = threads;
  p.work_cap = work_cap;
  auto rep = run_pipeline(src, p);
  emit(out.path, pipeline_report_json(rep).dump() + "\n");
  return pipeline_exit(rep);
}

int cmd_bounds(const std::string& range, const std::string& checks_csv, unsigned bits,
               int threads, const Out& out) {
  auto dots = range.find("..");
  if (dots == std::string::npos)
    throw std::invalid_argument("--m-range must look like a..b");
  std::uint64_t lo = std::stoull(range.substr(0, dots));
  std::uint64_t hi = std::stoull(range.substr(dots + 2));
  if (hi < lo) throw std::invalid_argument("--m-range is empty: " + range);

  std::vector<std::string> checks;
  if (checks_csv.empty())
    checks = bounds_check_names();
  else {
    std::stringstream ss(checks_csv);
    std::string name;
    auto known = bounds_check_names();
    while (std::getline(ss, name, ',')) {
      if (std::find(known.begin(), known.end(), name) == known.end())
        throw std::invalid_argument("unknown check \"" + name + "\"");
      checks.push_back(name);
    }
    if (checks.empty()) throw std::invalid_argument("--checks lists no checks");
  }

  struct Row {
    json report;
    bool all_hold;
  };
  auto rows = map_chunks<Row>(
      std::size_t(hi - lo + 1), resolve_threads(threads), [&](std::size_t i) {
        std::uint64_t m = lo + i;
        std::vector<BoundsCheck> results;
        bool ok = true;
        for (const auto& name : checks) {
          results.push_back(run_bounds_check(name, m, bits));
          ok = ok && results.back().status == CheckStatus::Holds;
        }
        return Row{bounds_report_json(m, results), ok};
      });
  std::string text;
  bool all_hold = true;
  for (const auto& row : rows) {
    text += row.report.dump() + "\n";
    all_hold = all_hold && row.all_hold;
  }
  emit(out.path, text);
  return all_hold ? 0 : 1;
}

int cmd_montecarlo(std::uint64_t n, std::uint64_t m, std::uint64_t q, std::uint64_t trials,
                   std::uint64_t seed, const std::optional<std::uint64_t>& zero_copy,
                   int threads, std::uint64_t work_cap, const Out& out) {
  OracleLimits limits{work_cap, threads};
  if (zero_copy) {
    auto cert = zero_copy_search(n, m, q, *zero_copy, seed, limits);
    json j{{"n", n},       {"m", m},
           {"q", q},       {"attempts", *zero_copy},
           {"seed", seed}, {"certificate", cert ? spec_to_json(*cert) : json(nullptr)}};
    emit(out.path, j.dump() + "\n");
    return cert ? 0 : 1;
  }
  auto s = run_trials(n, m, q, trials, seed, limits);
  emit(out.path, experiment_report_json(s).dump() + "\n");
  return 0;
}

int cmd_er1(std::uint64_t m, std::uint64_t exhaustive_up_to, const Out& out) {
  auto rep = er1_verify(m, exhaustive_up_to);
  emit(out.path, rep.to_json().dump() + "\n");
  return rep.lower_certified && rep.upper_certified ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"canonical K_{m,m} toolkit"};
  app.require_subcommand(1);

  std::uint64_t work_cap;
  try {
    work_cap = env_work_cap();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  int threads = 0;

  // generate
  auto* gen = app.add_subcommand("generate", "materialize a coloring family");
  std::string gen_spec, gen_family, gen_palette, gen_format = "json";
  std::uint64_t gen_n1 = 0, gen_n2 = 0;
  std::optional<std::uint64_t> gen_seed, gen_q, gen_c, gen_r, gen_s, gen_classes;
  Out gen_out;
  gen->add_option("--spec", gen_spec, "spec file (json)");
  gen->add_option("--family", gen_family, "family name");
  gen->add_option("--n1", gen_n1, "left side size");
  gen->add_option("--n2", gen_n2, "right side size");
  gen->add_option("--seed", gen_seed, "seed (required for randomized families)");
  gen->add_option("--q", gen_q, "color count (uniform_random)");
  gen->add_option("--c", gen_c, "color (monochromatic)");
  gen->add_option("--r", gen_r, "left block size (block)");
  gen->add_option("--s", gen_s, "right block size (block)");
  gen->add_option("--palette", gen_palette, "per_vertex_rainbow palette: disjoint|shared");
  gen->add_option("--classes", gen_classes, "per_vertex_rainbow shared palette classes");
  gen->add_option("--format", gen_format, "output format")->check(CLI::IsMember({"json", "csv"}));
  gen->add_option("--work-cap", work_cap, "work/cell budget");
  gen_out.attach(gen);

  // classify
  auto* cls = app.add_subcommand("classify", "canonical patterns of a square grid");
  SourceArgs cls_src;
  Out cls_out;
  cls_src.attach(cls);
  cls->add_option("--work-cap", work_cap, "work/cell budget");
  cls_out.attach(cls);

  // find
  auto* fnd = app.add_subcommand("find", "find a canonically colored K_{m,m}");
  SourceArgs fnd_src;
  Out fnd_out;
  std::uint64_t fnd_m = 0;
  std::string fnd_engine = "oracle", fnd_mode = "best-effort", fnd_allow;
  std::optional<std::uint64_t> fnd_seed;
  fnd_src.attach(fnd);
  fnd->add_option("--m", fnd_m, "biclique side size")->required();
  fnd->add_option("--engine", fnd_engine, "search engine")
      ->check(CLI::IsMember({"oracle", "pipeline"}));
  fnd->add_option("--mode", fnd_mode, "pipeline mode")
      ->check(CLI::IsMember({"strict", "best-effort"}));
  fnd->add_option("--seed", fnd_seed, "seed (required for the pipeline engine)");
  fnd->add_option("--allow", fnd_allow, "comma-separated allowed patterns (oracle)");
  fnd->add_option("--threads", threads, "worker threads (0 = machine)");
  fnd->add_option("--work-cap", work_cap, "work budget");
  std::string fnd_format = "json";
  fnd->add_option("--format", fnd_format, "output format")->check(CLI::IsMember({"json"}));
  fnd_out.attach(fnd);

  // pipeline
  auto* pip = app.add_subcommand("pipeline", "run the constructive proof pipeline");
  SourceArgs pip_src;
  Out pip_out;
  std::uint64_t pip_m = 0, pip_seed = 0;
  std::string pip_mode = "best-effort";
  std::optional<std::uint64_t> pip_tuple, pip_s2, pip_quota, pip_retries;
  pip_src.attach(pip);
  pip->add_option("--m", pip_m, "biclique side size")->required();
  pip->add_option("--seed", pip_seed, "sampling seed")->required();
  pip->add_option("--mode", pip_mode, "parameter mode")
      ->check(CLI::IsMember({"strict", "best-effort"}));
  pip->add_option("--tuple-len", pip_tuple, "override sampled tuple length");
  pip->add_option("--s2-target", pip_s2, "override rainbow-core size (retunes the threshold)");
  pip->add_option("--quota", pip_quota, "override pigeonhole quota");
  pip->add_option("--retries", pip_retries, "override sampling retries");
  pip->add_option("--threads", threads, "worker threads (0 = machine)");
  pip->add_option("--work-cap", work_cap, "work budget");
  pip_out.attach(pip);

  // bounds
  auto* bnd = app.add_subcommand("bounds", "verify the proof's inequalities");
  std::string bnd_range, bnd_checks;
  unsigned bnd_bits = kDefaultBitsCap;
  Out bnd_out;
  bnd->add_option("--m-range", bnd_range, "inclusive range a..b")->required();
  bnd->add_option("--checks", bnd_checks, "comma-separated check names (default all)");
  bnd->add_option("--bits", bnd_bits, "precision cap for interval refinement");
  bnd->add_option("--threads", threads, "worker threads (0 = machine)");
  std::string bnd_format = "json";
  bnd->add_option("--format", bnd_format, "output format")->check(CLI::IsMember({"json"}));
  bnd_out.attach(bnd);

  // montecarlo
  auto* mc = app.add_subcommand("montecarlo", "random-coloring experiments");
  std::uint64_t mc_n = 0, mc_m = 0, mc_q = 0, mc_trials = 0, mc_seed = 0;
  std::optional<std::uint64_t> mc_zero;
  Out mc_out;
  mc->add_option("--n", mc_n, "host side size")->required();
  mc->add_option("--m", mc_m, "biclique side size")->required();
  mc->add_option("--q", mc_q, "color count")->required();
  auto* mc_trials_opt = mc->add_option("--trials", mc_trials, "number of trials");
  mc->add_option("--seed", mc_seed, "master seed")->required();
  mc->add_option("--zero-copy", mc_zero, "search this many colorings for a zero-copy certificate");
  mc->add_option("--threads", threads, "worker threads (0 = machine)");
  mc->add_option("--work-cap", work_cap, "work budget");
  mc_out.attach(mc);

  // er1
  auto* er = app.add_subcommand("er1", "certify the canonical pigeonhole number");
  std::uint64_t er_m = 0, er_exh = 4;
  Out er_out;
  er->add_option("--m", er_m, "subset size")->required();
  er->add_option("--exhaustive-up-to", er_exh, "exhaust set partitions up to this m");
  er_out.attach(er);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*gen) {
      json params = json::object();
      if (gen_q) params["q"] = *gen_q;
      if (gen_c) params["c"] = *gen_c;
      if (gen_r) params["r"] = *gen_r;
      if (gen_s) params["s"] = *gen_s;
      if (!gen_palette.empty()) params["palette"] = gen_palette;
      if (gen_classes) params["classes"] = *gen_classes;
      return cmd_generate(gen_spec, gen_family, gen_n1, gen_n2, gen_seed, params,
                          {"uniform_random", "per_vertex_rainbow"}, gen_format, work_cap,
                          gen_out);
    }
    if (*cls) return cmd_classify(cls_src, work_cap, cls_out);
    if (*fnd)
      return cmd_find(fnd_src, fnd_m, fnd_engine, fnd_mode, fnd_seed, fnd_allow, threads,
                      work_cap, fnd_out);
    if (*pip)
      return cmd_pipeline(pip_src, pip_m, pip_mode, pip_seed, pip_tuple, pip_s2, pip_quota,
                          pip_retries, threads, work_cap, pip_out);
    if (*bnd) return cmd_bounds(bnd_range, bnd_checks, bnd_bits, threads, bnd_out);
    if (*mc) {
      if (!mc_zero && mc_trials_opt->count() == 0)
        throw std::invalid_argument("one of --trials and --zero-copy is required");
      return cmd_montecarlo(mc_n, mc_m, mc_q, mc_trials, mc_seed, mc_zero, threads, work_cap,
                            mc_out);
    }
    if (*er) return cmd_er1(er_m, er_exh, er_out);
    throw std::logic_error("no subcommand dispatched");
  } catch (const SizeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
