// Command-line front end: distances, joint bases, graded measures and the
// experiment drivers.
//
// Exit codes: 0 ok, 1 other error, 2 parse error, 3 dimension or field
// mismatch, 4 invalid p, 5 an exact invariant failed.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ultranorm/ultranorm.hpp"

namespace fs = std::filesystem;
using namespace ultranorm;
using io::json;

namespace {

constexpr int kOk = 0;
constexpr int kOther = 1;
constexpr int kParse = 2;
constexpr int kMismatch = 3;
constexpr int kInvalidP = 4;
constexpr int kInvariant = 5;

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::parse:
      return kParse;
    case ErrorCode::dimension_mismatch:
    case ErrorCode::field_mismatch:
      return kMismatch;
    case ErrorCode::invalid_p:
      return kInvalidP;
    default:
      return kOther;
  }
}

std::vector<Rat> parse_rats(const std::vector<std::string>& items) {
  std::vector<Rat> out;
  for (const auto& s : items) out.push_back(parse_rat(s));
  return out;
}

void csv_row(std::ostream& out, const std::string& name, const Rat& value) {
  out << name << ',' << to_string(value) << ',' << to_decimal(value) << '\n';
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::invalid_argument, "cannot write '" + path.string() + "'");
  return out;
}

// Writes text to a file and echoes it to stdout.
void emit(const fs::path& path, const std::string& text) {
  open_output(path) << text;
  std::cout << text;
}

// ---------------------------------------------------------------------------

int cmd_dist(const std::string& path_a, const std::string& path_b, const std::string& p_text) {
  const Exponent p = Exponent::parse(p_text);
  const DiagonalNorm a = io::read_norm(path_a);
  const DiagonalNorm b = io::read_norm(path_b);
  const SpectralMeasure sigma = spectral_measure(a, b);
  std::cout << "quantity,exact,decimal\n";
  for (std::size_t i = 0; i < sigma.size(); ++i) csv_row(std::cout, "lambda_" + std::to_string(i + 1), sigma.atoms()[i]);
  const Rat dp = moment(sigma, p);
  if (p.is_infinite()) {
    std::cout << "dp_inf," << to_string(dp) << ',' << to_decimal(dp) << '\n';
  } else {
    std::cout << "dp_power_" << p.to_string() << ',' << to_string(dp) << ',' << to_decimal(dp) << '\n';
    std::cout << "dp_" << p.to_string() << ",," << dp_decimal(dp, p) << '\n';
  }
  csv_row(std::cout, "d_inf", moment(sigma, Exponent::infinity()));
  csv_row(std::cout, "vol", mean(sigma));
  return kOk;
}

int cmd_jointdiag(const std::string& path_a, const std::string& path_b, const std::string& out_path) {
  const DiagonalNorm a = io::read_norm(path_a);
  const DiagonalNorm b = io::read_norm(path_b);
  const JointPresentation jp = joint_diagonalize(a, b);
  json basis = json::array();
  json pairs = json::array();
  for (std::size_t i = 0; i < jp.dim(); ++i) {
    json col = json::array();
    for (const auto& x : jp.basis.column(i)) col.push_back(to_string(x));
    basis.push_back(std::move(col));
    pairs.push_back(json::array({to_string(jp.pairs[i].first), to_string(jp.pairs[i].second)}));
  }
  const Rat da = orthogonality_defect(jp.basis, a);
  const Rat db = orthogonality_defect(jp.basis, b);
  json out{{"basis", basis},
           {"pairs", pairs},
           {"defects", json::array({to_string(da), to_string(db)})},
           {"certified", certify(jp, a, b)}};
  const std::string text = io::dump(out);
  if (!out_path.empty())
    emit(out_path, text);
  else
    std::cout << text;
  return da == 0 && db == 0 ? kOk : kInvariant;
}

int cmd_measure(const std::string& ring_path, const std::string& path_a, const std::string& path_b,
                const std::vector<int>& degrees, const std::string& out_dir, const std::vector<std::string>& uniform) {
  const auto ring = io::read_ring(ring_path);
  const GradedNorm a = io::read_graded(path_a, ring);
  const GradedNorm b = io::read_graded(path_b, ring);
  const LimitMeasure lm = limit_measure(a, b, degrees);
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    auto out = open_output(fs::path(out_dir) / ("measure_m" + std::to_string(degrees[i]) + ".csv"));
    io::write_measure_csv(out, lm.measures[i]);
  }
  std::ostringstream conv;
  conv << "m,mean,mean_decimal,cdf_to_previous,cdf_to_previous_decimal";
  std::optional<std::pair<Rat, Rat>> range;
  if (!uniform.empty()) {
    if (uniform.size() != 2) throw Error(ErrorCode::invalid_argument, "--uniform takes LO HI");
    range = std::make_pair(parse_rat(uniform[0]), parse_rat(uniform[1]));
    conv << ",cdf_to_uniform,cdf_to_uniform_decimal";
  }
  conv << '\n';
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    const auto& row = lm.table.rows[i];
    conv << degrees[i] << ',' << to_string(row.value) << ',' << to_decimal(row.value) << ','
         << to_string(row.diagnostic) << ',' << to_decimal(row.diagnostic);
    if (range) {
      const Rat d = cdf_distance_to_uniform(lm.measures[i], range->first, range->second);
      conv << ',' << to_string(d) << ',' << to_decimal(d);
    }
    conv << '\n';
  }
  emit(fs::path(out_dir) / "convergence.csv", conv.str());
  return kOk;
}

// ---------------------------------------------------------------------------
// Experiments

std::vector<int> int_list(const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::parse, "expected an integer list");
  std::vector<int> out;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw Error(ErrorCode::parse, "expected an integer list");
    out.push_back(x.get<int>());
  }
  return out;
}

std::vector<Rat> rat_list(const json& j) { return io::detail::rats(j); }

Exponent exponent(const json& cfg) {
  if (!cfg.contains("p")) return Exponent::finite(1);
  const json& p = cfg["p"];
  return Exponent::parse(p.is_string() ? p.get<std::string>() : p.dump());
}

int experiment_theorem_a(const json& cfg, const fs::path& out_dir) {
  TheoremAConfig c;
  c.seed = cfg.value("seed", std::uint64_t{1});
  c.instances = cfg.value("instances", std::size_t{500});
  c.max_dim = cfg.value("max_dim", std::size_t{6});
  c.denominator_bound = cfg.value("denominator_bound", 4L);
  c.samples = cfg.value("samples", std::size_t{20});
  if (cfg.contains("primes")) c.primes = cfg["primes"].get<std::vector<long>>();
  const TheoremAReport r = run_theorem_a(c);
  std::ostringstream out;
  out << "check,passed,failed,gating\n";
  bool ok = true;
  for (const auto& [name, tally] : r.checks) {
    const bool gating = name != "filtration_recovered";
    out << name << ',' << tally.passed << ',' << tally.failed << ',' << (gating ? "yes" : "no") << '\n';
    if (gating) ok = ok && tally.ok();
  }
  emit(out_dir / "theorem-a.csv", out.str());
  return ok ? kOk : kInvariant;
}

int experiment_theorem_b(const json& cfg, const fs::path& out_dir) {
  const auto ring = io::ring_from_json(io::detail::field(cfg, "ring"));
  const GradedNorm nu0 = io::graded_from_json(io::detail::field(cfg, "nu0"), ring);
  const GradedNorm nu0p = io::graded_from_json(io::detail::field(cfg, "nu0_prime"), ring);
  const GradedNorm alpha = io::graded_from_json(io::detail::field(cfg, "alpha"), ring);
  const std::vector<Rat> times = rat_list(io::detail::field(cfg, "times"));
  const std::vector<int> degrees = int_list(io::detail::field(cfg, "degrees"));
  const std::vector<Rat> grid = cfg.contains("clamp_grid") ? rat_list(cfg["clamp_grid"]) : std::vector<Rat>{};

  auto render = [&](const std::vector<TheoremBRow>& rows) {
    std::ostringstream out;
    out << "t,M,distance,distance_decimal";
    for (const auto& c : grid) out << ",clamp_ray[" << to_string(c) << "],clamp_reference[" << to_string(c) << "]";
    out << '\n';
    for (const auto& r : rows) {
      out << to_string(r.t) << ',' << r.degree << ',' << to_string(r.distance) << ',' << to_decimal(r.distance);
      for (const auto& [x, y] : r.clamped) out << ',' << to_string(x) << ',' << to_string(y);
      out << '\n';
    }
    return out.str();
  };
  emit(out_dir / "theorem-b.csv", render(theorem_b_table(nu0, nu0p, alpha, times, degrees, grid)));
  if (cfg.contains("control_alpha")) {
    const GradedNorm control = io::graded_from_json(cfg["control_alpha"], ring);
    const auto rows = theorem_b_table(nu0, nu0p, control, times, degrees, grid);
    emit(out_dir / "theorem-b-control.csv", render(rows));
    for (const auto& r : rows)
      if (r.distance != 0) return kInvariant;
  }
  return kOk;
}

int experiment_theorem_c(const json& cfg, const fs::path& out_dir) {
  const auto ring = io::ring_from_json(io::detail::field(cfg, "ring"));
  const GradedNorm nu0 = io::graded_from_json(io::detail::field(cfg, "nu0"), ring);
  const GradedNorm alpha = io::graded_from_json(io::detail::field(cfg, "alpha"), ring);
  const ConvexProfile f = io::convex_from_json(io::detail::field(cfg, "f"));
  const ConvexProfile g = io::convex_from_json(io::detail::field(cfg, "g"));
  const std::vector<int> degrees = int_list(io::detail::field(cfg, "degrees"));
  const FlatIsometryReport r = flat_isometry_check(f, g, nu0, alpha, exponent(cfg), degrees);
  std::ostringstream out;
  out << "m,distance_power,distance_power_decimal,profile_gap_power,profile_gap_power_decimal,equal\n";
  for (const auto& row : r.rows)
    out << row.degree << ',' << to_string(row.lhs) << ',' << to_decimal(row.lhs) << ',' << to_string(row.rhs) << ','
        << to_decimal(row.rhs) << ',' << (row.equal ? "true" : "false") << '\n';
  emit(out_dir / "theorem-c.csv", out.str());
  return r.all_equal ? kOk : kInvariant;
}

int experiment_ray_limit(const json& cfg, const fs::path& out_dir) {
  const DiagonalNorm nu0 = io::norm_from_json(io::detail::field(cfg, "nu0"));
  const DiagonalNorm nu0p = io::norm_from_json(io::detail::field(cfg, "nu0_prime"));
  const DiagonalNorm alpha = io::norm_from_json(io::detail::field(cfg, "alpha"));
  const DiagonalNorm alphap = io::norm_from_json(io::detail::field(cfg, "alpha_prime"));
  const std::vector<Rat> times = rat_list(io::detail::field(cfg, "times"));
  const auto rows = finite_dim_ray_limit_check(nu0, nu0p, alpha, alphap, exponent(cfg), times);
  std::ostringstream out;
  out << "t,value,value_decimal,target,target_decimal,bound,bound_decimal,within_bound\n";
  bool ok = true;
  for (const auto& r : rows) {
    out << to_string(r.t) << ',' << to_string(r.value) << ',' << to_decimal(r.value) << ',' << to_string(r.target)
        << ',' << to_decimal(r.target) << ',' << to_string(r.bound) << ',' << to_decimal(r.bound) << ','
        << (r.within_bound ? "true" : "false") << '\n';
    ok = ok && r.within_bound;
  }
  emit(out_dir / "ray-limit.csv", out.str());
  return ok ? kOk : kInvariant;
}

int cmd_experiment(const std::string& kind, const std::string& config_path, const std::string& out_dir) {
  const json cfg = io::read_json_file(config_path);
  try {
    if (kind == "theorem-a") return experiment_theorem_a(cfg, out_dir);
    if (kind == "theorem-b") return experiment_theorem_b(cfg, out_dir);
    if (kind == "theorem-c") return experiment_theorem_c(cfg, out_dir);
    if (kind == "ray-limit") return experiment_ray_limit(cfg, out_dir);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse, config_path + ": " + e.what());
  }
  throw Error(ErrorCode::invalid_argument, "unknown experiment '" + kind + "'");
}

// ---------------------------------------------------------------------------

int cmd_oracle_suite(std::uint64_t seed, std::size_t count, const std::string& out_path) {
  struct Report {
    json line;
    bool equal;
  };
  std::vector<Report> reports(count);
  const long primes[] = {2, 3, 5};
  const ModePair modes[] = {ModePair::norm_norm, ModePair::filtration_filtration};
  parallel_for(count, [&](std::size_t k) {
    const std::uint64_t s = seed + k;
    const std::size_t n = 1 + k % 6;
    const long p = primes[k % 3];
    const bool integral = k % 4 == 0;
    const ModePair mode = integral ? ModePair::norm_norm : modes[(k / 3) % 2];
    auto [a, b] = random_instance(s, n, p, integral ? 1 : 4, mode);
    const std::vector<Rat> lambda = successive_minima(a, b);
    json engine = json::array();
    json oracle = json::array();
    bool equal = true;
    Rat partial = 0;
    for (std::size_t i = 1; i <= n; ++i) {
      partial += lambda[i - 1];
      const Rat o = exterior_minima_oracle(a, b, i);
      engine.push_back(to_string(partial));
      oracle.push_back(to_string(o));
      equal = equal && o == partial;
    }
    json line{{"seed", s}, {"n", n}, {"p", p}, {"modes", to_string(mode)}, {"oracle_kind", "exterior"},
              {"engine", engine}, {"oracle", oracle}};
    if (integral) {
      const std::vector<Rat> snf = snf_minima_oracle(a, b);
      json e2 = json::array(), o2 = json::array();
      for (std::size_t i = 0; i < n; ++i) {
        e2.push_back(to_string(lambda[i]));
        o2.push_back(to_string(snf[i]));
      }
      line["snf_engine"] = e2;
      line["snf_oracle"] = o2;
      equal = equal && snf == lambda;
    }
    line["equal"] = equal;
    reports[k] = {std::move(line), equal};
  });
  std::ofstream file;
  if (!out_path.empty()) file = open_output(out_path);
  std::ostream& out = out_path.empty() ? std::cout : file;
  std::size_t failures = 0;
  for (const auto& r : reports) {
    out << r.line.dump() << '\n';
    if (!r.equal) ++failures;
  }
  std::cerr << count - failures << "/" << count << " instances agree with the oracles\n";
  return failures == 0 ? kOk : kInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations with non-Archimedean norms and graded norms"};
  app.require_subcommand(1);

  std::string a, b, p = "1", out, ring, out_dir = ".", kind, config;
  std::vector<int> degrees;
  std::vector<std::string> uniform;
  std::uint64_t seed = 1;
  std::size_t count = 200;

  auto* dist = app.add_subcommand("dist", "successive minima, d_p, d_inf and volume of two norms");
  dist->add_option("norm_a", a, "first norm (JSON)")->required();
  dist->add_option("norm_b", b, "second norm (JSON)")->required();
  dist->add_option("--p", p, "exponent: positive integer or 'inf'");

  auto* joint = app.add_subcommand("jointdiag", "a basis orthogonal for both norms");
  joint->add_option("norm_a", a)->required();
  joint->add_option("norm_b", b)->required();
  joint->add_option("--out", out, "write the JSON here instead of stdout");

  auto* measure = app.add_subcommand("measure", "rescaled spectral measures of two graded norms");
  measure->add_option("ring", ring, "section ring (JSON)")->required();
  measure->add_option("expr_a", a, "graded norm (JSON)")->required();
  measure->add_option("expr_b", b, "graded norm (JSON)")->required();
  measure->add_option("--degrees", degrees, "increasing list of degrees")->required();
  measure->add_option("--out-dir", out_dir, "directory for the CSV files");
  measure->add_option("--uniform", uniform, "LO HI: also report the CDF distance to Lebesgue on [LO, HI]")
      ->expected(2);

  auto* experiment = app.add_subcommand("experiment", "run an experiment from a config file");
  experiment->add_option("kind", kind, "theorem-a | theorem-b | theorem-c | ray-limit")
      ->required()
      ->check(CLI::IsMember({"theorem-a", "theorem-b", "theorem-c", "ray-limit"}));
  experiment->add_option("config", config, "experiment config (JSON)")->required();
  experiment->add_option("--out-dir", out_dir, "directory for the CSV output");

  auto* suite = app.add_subcommand("oracle-suite", "cross-check successive minima against independent oracles");
  suite->add_option("--seed", seed);
  suite->add_option("--count", count);
  suite->add_option("--out", out, "JSONL output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kParse;
  }

  try {
    if (*dist) return cmd_dist(a, b, p);
    if (*joint) return cmd_jointdiag(a, b, out);
    if (*measure) return cmd_measure(ring, a, b, degrees, out_dir, uniform);
    if (*experiment) return cmd_experiment(kind, config, out_dir);
    if (*suite) return cmd_oracle_suite(seed, count, out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
  return kOther;
}
